use super::crystal::{Isocrystal, KMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::padic::{NewtonPolygon, Rat, UnramifiedElement};
use std::collections::BTreeMap;

/// An isocrystal with an exhaustive decreasing filtration on D_K, K = Q_{p^s}.
///
/// `flags[i]` spans Fil^i for each distinct Hodge–Tate weight i. Between
/// weights Fil^j equals Fil of the next weight ≥ j; below the smallest weight
/// it is all of D and above the largest it is 0.
#[derive(Clone, Debug)]
pub struct FilteredIsocrystal {
    iso: Isocrystal,
    weights: Vec<i64>,
    flags: BTreeMap<i64, KMatrix>,
}

pub(crate) fn dim_intersection(a: &KMatrix, b: &KMatrix) -> usize {
    if a.cols() == 0 || b.cols() == 0 {
        return 0;
    }
    a.rank() + b.rank() - a.hstack(b).rank()
}

impl FilteredIsocrystal {
    /// Validates gr-dimensions and nesting. The flag at the smallest weight may be omitted.
    pub fn new(iso: Isocrystal, weights: Vec<i64>, flags: BTreeMap<i64, KMatrix>) -> Result<Self> {
        let d = iso.rank();
        if weights.len() != d {
            return Err(Error::Invalid(format!("{} Hodge–Tate weights for rank {d}", weights.len())));
        }
        let mut weights = weights;
        weights.sort();
        let mut jumps = weights.clone();
        jumps.dedup();
        let like = iso.phi().sample().clone();
        let mut flags = flags;
        for k in flags.keys() {
            if !jumps.contains(k) {
                return Err(Error::Invalid(format!("flag given at {k}, which is not a weight")));
            }
        }
        flags.entry(jumps[0]).or_insert_with(|| Matrix::identity(d, &like));
        let mut prev: Option<KMatrix> = None;
        let mut out = BTreeMap::new();
        for &j in &jumps {
            let m = flags
                .remove(&j)
                .ok_or_else(|| Error::Invalid(format!("missing flag Fil^{j}")))?;
            if m.rows() != d {
                return Err(Error::Invalid(format!("Fil^{j} vectors must have {d} coordinates")));
            }
            let expect = weights.iter().filter(|&&w| w >= j).count();
            let basis = m.column_basis();
            if basis.cols() != expect {
                return Err(Error::Invalid(format!(
                    "dim Fil^{j} is {} but the weights require {expect}",
                    basis.cols()
                )));
            }
            if let Some(prev) = &prev {
                if prev.hstack(&basis).rank() != prev.cols() {
                    return Err(Error::Invalid(format!("Fil^{j} is not contained in the previous step")));
                }
            }
            prev = Some(basis.clone());
            out.insert(j, basis);
        }
        Ok(FilteredIsocrystal { iso, weights, flags: out })
    }

    /// Filtration with at most two distinct weights; `top` spans the piece at the larger one.
    pub fn with_top_piece(iso: Isocrystal, weights: Vec<i64>, top: KMatrix) -> Result<Self> {
        let top_w = *weights.iter().max().ok_or_else(|| Error::Invalid("no weights".into()))?;
        let mut flags = BTreeMap::new();
        if weights.iter().any(|&w| w != top_w) {
            flags.insert(top_w, top);
        }
        Self::new(iso, weights, flags)
    }

    /// The trivial filtration with all weights 0.
    pub fn trivial(iso: Isocrystal) -> Self {
        let d = iso.rank();
        Self::new(iso, vec![0; d], BTreeMap::new()).expect("trivial filtration is valid")
    }

    pub fn isocrystal(&self) -> &Isocrystal {
        &self.iso
    }

    pub fn rank(&self) -> usize {
        self.iso.rank()
    }

    pub fn hodge_tate_weights(&self) -> &[i64] {
        &self.weights
    }

    /// Distinct weights, ascending.
    pub fn jumps(&self) -> Vec<i64> {
        self.flags.keys().copied().collect()
    }

    pub fn flags(&self) -> &BTreeMap<i64, KMatrix> {
        &self.flags
    }

    /// Basis of Fil^i, `None` for the zero space.
    pub fn fil(&self, i: i64) -> Option<&KMatrix> {
        self.flags.range(i..).next().map(|(_, m)| m)
    }

    pub fn t_n(&self) -> Result<i64> {
        self.iso.degree()
    }

    pub fn t_h(&self) -> i64 {
        self.weights.iter().sum()
    }

    pub fn hodge_polygon(&self) -> NewtonPolygon {
        hodge_polygon(&self.weights)
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        self.iso.newton_polygon()
    }

    /// t_H of the induced filtration on the subspace spanned by the columns of `c`.
    pub fn sub_t_h(&self, c: &KMatrix) -> i64 {
        if c.cols() == 0 {
            return 0;
        }
        let dim = c.rank() as i64;
        let jumps = self.jumps();
        let mut total = jumps[0] * dim;
        for w in jumps.windows(2) {
            total += (w[1] - w[0]) * dim_intersection(&self.flags[&w[1]], c) as i64;
        }
        total
    }

    /// Same filtered isocrystal written in the basis given by the columns of `b`.
    pub fn change_basis(&self, b: &KMatrix) -> Result<Self> {
        let iso = self.iso.change_basis(b)?;
        let binv = b.inverse()?;
        let flags = self.flags.iter().map(|(&k, m)| (k, binv.mul(m))).collect();
        Self::new(iso, self.weights.clone(), flags)
    }

    /// Tensor product with (Fil_1 ⊗ Fil_2)^k = Σ_{i+j=k} Fil_1^i ⊗ Fil_2^j.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let iso = self.iso.tensor(&other.iso)?;
        let mut weights: Vec<i64> =
            self.weights.iter().flat_map(|a| other.weights.iter().map(move |b| a + b)).collect();
        weights.sort();
        let mut ks = weights.clone();
        ks.dedup();
        let mut flags = BTreeMap::new();
        for &k in &ks[1..] {
            let mut pieces: Option<KMatrix> = None;
            for (i, a) in &self.flags {
                for (j, b) in &other.flags {
                    if i + j >= k {
                        let t = a.kron(b);
                        pieces = Some(match pieces {
                            None => t,
                            Some(m) => m.hstack(&t),
                        });
                    }
                }
            }
            flags.insert(k, pieces.expect("top weight is attained").column_basis());
        }
        Self::new(iso, weights, flags)
    }
}

/// Polygon with slopes the sorted weights, from (0, 0) to (rank, Σ weights).
pub fn hodge_polygon(weights: &[i64]) -> NewtonPolygon {
    let mut w: Vec<Rat> = weights.iter().map(|&x| Rat::from_integer(x)).collect();
    w.sort();
    NewtonPolygon::from_slopes(&w)
}

/// Matrix with the given integer columns over the isocrystal's field.
pub fn int_columns(iso: &Isocrystal, cols: &[Vec<i64>]) -> KMatrix {
    let f = iso.field();
    let cs: Vec<Vec<UnramifiedElement>> =
        cols.iter().map(|c| c.iter().map(|&x| UnramifiedElement::from_int(f, x)).collect()).collect();
    Matrix::from_cols(&cs, iso.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::UnramifiedField;

    fn iso(p: u64, rows: &[Vec<i64>]) -> Isocrystal {
        let f = UnramifiedField::new(p, 1, 20).unwrap();
        Isocrystal::from_int_rows(&f, rows).unwrap()
    }

    #[test]
    fn hodge_numbers() {
        let d = iso(3, &[vec![1, 0], vec![0, 3]]);
        let top = int_columns(&d, &[vec![1, 1]]);
        let fd = FilteredIsocrystal::with_top_piece(d.clone(), vec![0, 1], top).unwrap();
        assert_eq!(fd.t_h(), 1);
        assert_eq!(fd.t_n().unwrap(), 1);
        assert_eq!(
            fd.hodge_polygon().vertices(),
            &[(0, Rat::from_integer(0)), (1, Rat::from_integer(0)), (2, Rat::from_integer(1))]
        );
        assert_eq!(FilteredIsocrystal::trivial(d.clone()).t_h(), 0);
        let e0 = int_columns(&d, &[vec![1, 0]]);
        let fd0 = FilteredIsocrystal::with_top_piece(d, vec![0, 1], e0.clone()).unwrap();
        assert_eq!(fd0.sub_t_h(&e0), 1);
        assert_eq!(fd.sub_t_h(&e0), 0);
    }

    #[test]
    fn three_jumps() {
        let d = iso(2, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 4]]);
        let mut flags = BTreeMap::new();
        flags.insert(0, int_columns(&d, &[vec![1, 1, 0], vec![0, 1, 1]]));
        flags.insert(2, int_columns(&d, &[vec![1, 1, 0]]));
        let fd = FilteredIsocrystal::new(d, vec![-1, 0, 2], flags).unwrap();
        assert_eq!(fd.t_h(), 1);
        assert_eq!(fd.jumps(), vec![-1, 0, 2]);
        assert!(fd.fil(3).is_none());
        assert_eq!(fd.fil(1).unwrap().cols(), 1);
        assert_eq!(
            hodge_polygon(&[0, 0, 1]).vertices(),
            &[(0, Rat::from_integer(0)), (2, Rat::from_integer(0)), (3, Rat::from_integer(1))]
        );
    }

    #[test]
    fn bad_flags_rejected() {
        let d = iso(2, &[vec![1, 0], vec![0, 2]]);
        let two = int_columns(&d, &[vec![1, 0], vec![0, 1]]);
        assert!(FilteredIsocrystal::with_top_piece(d, vec![0, 1], two).is_err());
    }

    #[test]
    fn tensor_weights() {
        let d = iso(2, &[vec![1, 0], vec![0, 2]]);
        let fd = FilteredIsocrystal::with_top_piece(d.clone(), vec![0, 1], int_columns(&d, &[vec![1, 1]])).unwrap();
        let t = fd.tensor(&fd).unwrap();
        assert_eq!(t.hodge_tate_weights(), &[0, 1, 1, 2]);
        assert_eq!(t.t_h(), 4);
        let u = iso(2, &[vec![1]]);
        let unit = FilteredIsocrystal::trivial(u);
        let same = fd.tensor(&unit).unwrap();
        assert_eq!(same.hodge_tate_weights(), fd.hodge_tate_weights());
        assert_eq!(same.t_n().unwrap(), fd.t_n().unwrap());
    }
}
