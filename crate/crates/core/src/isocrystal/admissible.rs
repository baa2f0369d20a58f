use super::crystal::{KMatrix, SlopeComponent};
use super::filtered::FilteredIsocrystal;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::padic::{UnramifiedElement, UnramifiedField};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    True,
    False,
    Unknown,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::True => "true",
            Decision::False => "false",
            Decision::Unknown => "unknown",
        }
    }
}

/// Evidence against weak admissibility.
#[derive(Clone, Debug)]
pub enum Witness {
    /// t_N(D) ≠ t_H(D).
    Global { t_n: i64, t_h: i64 },
    /// The Hodge polygon rises above the Newton polygon at this abscissa.
    HodgeAboveNewton { x: i64 },
    /// A sum of slope components (indices into the ascending component list).
    Subset { components: Vec<usize>, t_n: i64, t_h: i64 },
    /// A φ-stable subspace found by the search.
    Subspace { basis: KMatrix, t_n: i64, t_h: i64 },
}

#[derive(Clone, Debug)]
pub struct WaReport {
    pub decision: Decision,
    pub witness: Option<Witness>,
    pub t_n: i64,
    pub t_h: i64,
    /// True when the multiplicity-free subset enumeration was used.
    pub exact_path: bool,
    pub evidence: Vec<String>,
}

/// Knobs for the search path.
#[derive(Clone, Debug)]
pub struct WaSearch {
    pub samples: usize,
    pub seed: u64,
}

impl Default for WaSearch {
    fn default() -> Self {
        WaSearch { samples: 64, seed: 0 }
    }
}

fn span(cols: &[&KMatrix], rows: usize, like: &UnramifiedElement) -> KMatrix {
    let mut out = Matrix::zeros(rows, 0, like);
    for c in cols {
        out = out.hstack(c);
    }
    out
}

fn subset_basis(comps: &[SlopeComponent], mask: usize, rows: usize, like: &UnramifiedElement) -> KMatrix {
    let chosen: Vec<&KMatrix> =
        comps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| &c.basis).collect();
    span(&chosen, rows, like)
}

/// Smallest φ-stable subspace containing the columns of `v`.
fn phi_closure(fd: &FilteredIsocrystal, v: &KMatrix) -> KMatrix {
    let iso = fd.isocrystal();
    let mut cur = v.column_basis();
    loop {
        let next = cur.hstack(&iso.apply(&cur)).column_basis();
        if next.cols() == cur.cols() {
            return cur;
        }
        cur = next;
    }
}

/// Largest φ-stable subspace of the span of `w`: W ← W ∩ φ^{-1}(W) until stable.
fn stable_core(fd: &FilteredIsocrystal, w: &KMatrix) -> Result<Option<KMatrix>> {
    let iso = fd.isocrystal();
    let mut cur = w.column_basis();
    loop {
        if cur.cols() == 0 {
            return Ok(None);
        }
        let pre = iso.apply_inverse(&cur)?;
        // intersection of the spans of cur and pre via the kernel of [cur | −pre]
        let Some(ker) = cur.hstack(&pre.map(|x| crate::padic::FieldElement::negated(x))).kernel() else {
            return Ok(None);
        };
        let k = cur.cols();
        let coeffs = Matrix::from_rows((0..k).map(|i| ker.row(i)).collect())?;
        let inter = cur.mul(&coeffs).column_basis();
        if inter.cols() == cur.cols() {
            return Ok(Some(cur));
        }
        cur = inter;
    }
}

fn random_vector(rng: &mut ChaCha8Rng, field: &Arc<UnramifiedField>, n: usize) -> Vec<UnramifiedElement> {
    (0..n)
        .map(|_| {
            let coords: Vec<i64> = (0..field.degree()).map(|_| rng.gen_range(-3i64..=3)).collect();
            UnramifiedElement::from_i64s(field, &coords)
        })
        .collect()
}

impl FilteredIsocrystal {
    /// Weak admissibility with default search settings.
    pub fn weakly_admissible(&self) -> Result<WaReport> {
        self.weakly_admissible_with(&WaSearch::default())
    }

    /// Decides weak admissibility: exactly when every slope component is
    /// simple, otherwise by a search that may end in `Unknown`.
    pub fn weakly_admissible_with(&self, search: &WaSearch) -> Result<WaReport> {
        let t_n = self.t_n()?;
        let t_h = self.t_h();
        let mut report =
            WaReport { decision: Decision::True, witness: None, t_n, t_h, exact_path: false, evidence: Vec::new() };
        let iso = self.isocrystal();
        let comps = iso.components()?;
        report.exact_path = comps.iter().all(|c| c.is_simple());
        if t_n != t_h {
            report.decision = Decision::False;
            report.witness = Some(Witness::Global { t_n, t_h });
            return Ok(report);
        }
        let d = self.rank();
        let like = iso.phi().sample().clone();
        let k = comps.len();
        // sums of slope components are always subobjects
        let mut comp_deg = Vec::with_capacity(k);
        for c in &comps {
            comp_deg.push(iso.sub_degree(&c.basis)?);
        }
        for mask in 1..(1usize << k) - 1 {
            let basis = subset_basis(&comps, mask, d, &like);
            let sub_n: i64 = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| comp_deg[i]).sum();
            let sub_h = self.sub_t_h(&basis);
            if sub_n < sub_h {
                report.decision = Decision::False;
                report.witness = Some(Witness::Subset {
                    components: (0..k).filter(|i| mask >> i & 1 == 1).collect(),
                    t_n: sub_n,
                    t_h: sub_h,
                });
                return Ok(report);
            }
        }
        if report.exact_path {
            report.evidence.push(format!("checked all {} proper component sums", (1usize << k) - 2));
            return Ok(report);
        }
        // search path
        let hodge = self.hodge_polygon();
        let newton = self.newton_polygon()?;
        if let Some(x) = hodge.first_point_above(&newton) {
            report.decision = Decision::False;
            report.witness = Some(Witness::HodgeAboveNewton { x });
            return Ok(report);
        }
        report.evidence.push("Hodge polygon lies on or below the Newton polygon".into());
        report.evidence.push(format!("{} component sums satisfy t_N ≥ t_H", (1usize << k) - 2));
        let check = |basis: &KMatrix, report: &mut WaReport| -> Result<bool> {
            if basis.cols() == 0 || basis.cols() == d {
                return Ok(false);
            }
            let sub_n = iso.sub_degree(basis)?;
            let sub_h = self.sub_t_h(basis);
            if sub_n < sub_h {
                report.decision = Decision::False;
                report.witness = Some(Witness::Subspace { basis: basis.clone(), t_n: sub_n, t_h: sub_h });
                return Ok(true);
            }
            Ok(false)
        };
        let mut candidates = Vec::new();
        for j in self.jumps().into_iter().skip(1) {
            if let Some(core) = stable_core(self, self.fil(j).expect("jump"))? {
                candidates.push(core);
            }
        }
        report.evidence.push(format!("{} φ-stable cores of filtration steps", candidates.len()));
        for core in &candidates {
            for mask in 0..(1usize << k) {
                let extra = subset_basis(&comps, mask, d, &like);
                let b = core.hstack(&extra).column_basis();
                if check(&b, &mut report)? {
                    return Ok(report);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        let multi: Vec<usize> = (0..k).filter(|&i| !comps[i].is_simple()).collect();
        for _ in 0..search.samples {
            let ci = multi[rng.gen_range(0..multi.len())];
            let comp = &comps[ci];
            let c = random_vector(&mut rng, iso.field(), comp.dim());
            let v = Matrix::from_cols(&[comp.basis.mul_vec(&c)], d);
            let sub = phi_closure(self, &v);
            let mask = rng.gen_range(0..(1usize << k)) & !(1 << ci);
            let b = sub.hstack(&subset_basis(&comps, mask, d, &like)).column_basis();
            if check(&b, &mut report)? {
                return Ok(report);
            }
        }
        report.evidence.push(format!("{} random cyclic subobjects satisfy t_N ≥ t_H", search.samples));
        report.decision = Decision::Unknown;
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::super::crystal::Isocrystal;
    use super::super::filtered::int_columns;
    use super::*;

    fn iso(p: u64, rows: &[Vec<i64>]) -> Isocrystal {
        let f = UnramifiedField::new(p, 1, 20).unwrap();
        Isocrystal::from_int_rows(&f, rows).unwrap()
    }

    fn line(d: &Isocrystal, v: Vec<i64>) -> FilteredIsocrystal {
        FilteredIsocrystal::with_top_piece(d.clone(), vec![0, 1], int_columns(d, &[v])).unwrap()
    }

    #[test]
    fn ordinary_classification() {
        let d = iso(2, &[vec![1, 0], vec![0, 2]]);
        let r = line(&d, vec![1, 1]).weakly_admissible().unwrap();
        assert_eq!(r.decision, Decision::True);
        assert!(r.exact_path);
        let r = line(&d, vec![1, 0]).weakly_admissible().unwrap();
        assert_eq!(r.decision, Decision::False);
        match r.witness {
            Some(Witness::Subset { components, t_n: 0, t_h: 1 }) => assert_eq!(components, vec![0]),
            w => panic!("unexpected witness {w:?}"),
        }
        assert_eq!(line(&d, vec![0, 1]).weakly_admissible().unwrap().decision, Decision::True);
    }

    #[test]
    fn supersingular_always_admissible() {
        let d = iso(2, &[vec![0, 2], vec![1, 0]]);
        for v in [vec![1, 0], vec![0, 1], vec![1, 3]] {
            assert_eq!(line(&d, v).weakly_admissible().unwrap().decision, Decision::True);
        }
    }

    #[test]
    fn isoclinic_search_finds_rational_line() {
        // φ = identity, weights {−1, 1}: a Q_p-rational Fil^1 is φ-stable and destabilizing
        let d = iso(3, &[vec![1, 0], vec![0, 1]]);
        let fd = FilteredIsocrystal::with_top_piece(d.clone(), vec![-1, 1], int_columns(&d, &[vec![1, 2]])).unwrap();
        let r = fd.weakly_admissible().unwrap();
        assert_eq!(r.decision, Decision::False);
        assert!(!r.exact_path);
        assert!(matches!(r.witness, Some(Witness::Subspace { t_n: 0, t_h: 1, .. })));
    }

    #[test]
    fn global_condition() {
        let d = iso(2, &[vec![1, 0], vec![0, 1]]);
        let fd = line(&d, vec![1, 0]);
        let r = fd.weakly_admissible().unwrap();
        assert_eq!(r.decision, Decision::False);
        assert!(matches!(r.witness, Some(Witness::Global { t_n: 0, t_h: 1 })));
    }
}
