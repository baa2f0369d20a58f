use super::crystal::{sigma_matrix, Isocrystal, KMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::padic::{FieldElement, PadicScalar, Rat, UnramifiedElement};

/// Dieudonné–Manin data: standard summands (a, b) of rank a and slope b/a,
/// and a basis B in which Φ becomes block standard.
#[derive(Clone, Debug)]
pub struct DmData {
    pub summands: Vec<(i64, i64)>,
    pub basis: KMatrix,
}

/// The summand shapes implied by the slopes alone.
pub fn dm_summands(slopes: &[Rat]) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < slopes.len() {
        let l = slopes[i];
        let count = slopes.iter().filter(|&&x| x == l).count();
        let a = *l.denom();
        for _ in 0..count as i64 / a {
            out.push((a, *l.numer()));
        }
        i += count;
    }
    out
}

/// Standard block for (a, b): e_i ↦ e_{i+1}, e_{a−1} ↦ p^b e_0.
pub fn standard_block(like: &UnramifiedElement, a: usize, b: i64) -> KMatrix {
    let mut m = Matrix::zeros(a, a, like);
    for i in 0..a - 1 {
        m.set(i + 1, i, like.one_like());
    }
    m.set(0, a - 1, UnramifiedElement::p_power(like.field(), b));
    m
}

fn coords_to_vec(v: &[PadicScalar], like: &UnramifiedElement, m: usize) -> Result<Vec<UnramifiedElement>> {
    let s = like.field().degree();
    (0..m).map(|j| UnramifiedElement::from_coords(like.field(), v[j * s..(j + 1) * s].to_vec())).collect()
}

/// Q_p-basis of {c ∈ K^m : A σ^a(c) = c}, as K-vectors.
fn fixed_vectors(a_mat: &KMatrix, a: usize) -> Result<Vec<Vec<UnramifiedElement>>> {
    let like = a_mat.sample();
    let field = like.field();
    let s = field.degree();
    let m = a_mat.rows();
    let p = field.prime();
    let mut columns: Vec<Vec<PadicScalar>> = Vec::with_capacity(s * m);
    for j in 0..m {
        for k in 0..s {
            let mut c = vec![like.zero_like(); m];
            let mut coords = vec![PadicScalar::exact_zero(p); s];
            coords[k] = PadicScalar::exact_int(p, 1);
            c[j] = UnramifiedElement::from_coords(field, coords)?;
            let twisted: Vec<UnramifiedElement> = c.iter().map(|x| x.frobenius_pow(a as i64)).collect();
            let image = a_mat.mul_vec(&twisted);
            let diff: Vec<PadicScalar> =
                image.iter().zip(&c).flat_map(|(x, y)| x.minus(y).coords().to_vec()).collect();
            columns.push(diff);
        }
    }
    let lin = Matrix::from_cols(&columns, s * m);
    let Some(ker) = lin.kernel() else { return Ok(vec![]) };
    ker.columns().iter().map(|v| coords_to_vec(v, like, m)).collect()
}

impl Isocrystal {
    /// Dieudonné–Manin data, when the splitting is defined over the working field.
    pub fn dm_data(&self) -> Result<DmData> {
        let like = self.phi().sample().clone();
        let d = self.rank();
        let mut summands = Vec::new();
        let mut cols: Vec<Vec<UnramifiedElement>> = Vec::new();
        for comp in self.components()? {
            let (a, b) = (*comp.slope.denom(), *comp.slope.numer());
            let au = a as usize;
            let restricted = self.restrict(&comp.basis)?;
            // F = p^{-b} φ^a in the component basis: c ↦ A σ(A) ⋯ σ^{a−1}(A) σ^a(c) / p^b
            let mut fa = restricted.clone();
            let mut tw = restricted.clone();
            for _ in 1..au {
                tw = sigma_matrix(&tw);
                fa = fa.mul(&tw);
            }
            let fa = fa.scale(&UnramifiedElement::p_power(self.field(), -b));
            let fixed = fixed_vectors(&fa, au)?;
            let mut chosen: Vec<Vec<UnramifiedElement>> = Vec::new();
            for c in fixed {
                if chosen.len() == comp.dim() {
                    break;
                }
                let v = comp.basis.mul_vec(&c);
                let mut orbit = vec![v];
                for _ in 1..au {
                    let next = self.phi().mul_vec(&orbit.last().unwrap().iter().map(|x| x.frobenius()).collect::<Vec<_>>());
                    orbit.push(next);
                }
                let mut trial = chosen.clone();
                trial.extend(orbit);
                if Matrix::from_cols(&trial, d).rank() == trial.len() {
                    chosen = trial;
                }
            }
            if chosen.len() != comp.dim() {
                return Err(Error::DmUnavailable(format!(
                    "slope {} needs a larger residue field than F_{{{}^{}}}",
                    comp.slope,
                    self.prime(),
                    self.field().degree()
                )));
            }
            for _ in 0..comp.dim() / au {
                summands.push((a, b));
            }
            cols.extend(chosen);
        }
        let basis = Matrix::from_cols(&cols, d);
        let normal = self.change_basis(&basis)?;
        let mut expected = Matrix::zeros(d, d, &like);
        let mut off = 0;
        for &(a, b) in &summands {
            let blk = standard_block(&like, a as usize, b);
            for i in 0..a as usize {
                for j in 0..a as usize {
                    expected.set(off + i, off + j, blk.get(i, j).clone());
                }
            }
            off += a as usize;
        }
        if !normal.phi().eq_at_precision(&expected) {
            return Err(Error::Precision("Dieudonné–Manin normal form not reached at precision".into()));
        }
        Ok(DmData { summands, basis })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::UnramifiedField;

    fn iso(p: u64, s: usize, rows: &[Vec<i64>]) -> Isocrystal {
        let f = UnramifiedField::new(p, s, 20).unwrap();
        Isocrystal::from_int_rows(&f, rows).unwrap()
    }

    #[test]
    fn diagonal_and_supersingular() {
        let d = iso(3, 1, &[vec![1, 0], vec![0, 3]]);
        let dm = d.dm_data().unwrap();
        assert_eq!(dm.summands, vec![(1, 0), (1, 1)]);
        assert!(dm.basis.eq_at_precision(&Matrix::identity(2, d.phi().sample())));
        let ss = iso(3, 1, &[vec![0, 3], vec![1, 0]]);
        let dm = ss.dm_data().unwrap();
        assert_eq!(dm.summands, vec![(2, 1)]);
        assert!(dm.basis.eq_at_precision(&Matrix::identity(2, ss.phi().sample())));
    }

    #[test]
    fn triangular_needs_basis_change() {
        let d = iso(5, 1, &[vec![1, 1], vec![0, 5]]);
        let dm = d.dm_data().unwrap();
        assert_eq!(dm.summands, vec![(1, 0), (1, 1)]);
        // the slope-1 vector is e_0/(p−1) + e_1 up to scaling
        let v = dm.basis.col(1);
        let ratio = v[0].times(&v[1].inverse().unwrap());
        let quarter = UnramifiedElement::from_int(d.field(), 4).inverse().unwrap();
        assert!(ratio.minus(&quarter).is_zero());
    }

    #[test]
    fn unit_root_twist_is_unavailable() {
        // φ = 2 on a line over Q_3 has no fixed vector over any finite unramified extension
        let d = iso(3, 1, &[vec![2]]);
        assert!(matches!(d.dm_data(), Err(Error::DmUnavailable(_))));
        assert_eq!(dm_summands(&d.newton_slopes().unwrap()), vec![(1, 0)]);
    }

    #[test]
    fn supersingular_over_extension() {
        let ss = iso(2, 2, &[vec![0, 2], vec![1, 0]]);
        assert_eq!(ss.dm_data().unwrap().summands, vec![(2, 1)]);
    }
}
