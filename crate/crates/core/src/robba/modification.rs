use crate::error::{Error, Result};
use crate::isocrystal::{FilteredIsocrystal, KMatrix};
use crate::linalg::Matrix;
use crate::padic::{FieldElement, UnramifiedElement};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// A Laurent polynomial in t with coefficients in K = Q_{p^s}.
#[derive(Clone)]
pub struct TLaurent {
    terms: BTreeMap<i64, UnramifiedElement>,
}

impl TLaurent {
    pub fn zero() -> Self {
        TLaurent { terms: BTreeMap::new() }
    }

    pub fn monomial(c: UnramifiedElement, e: i64) -> Self {
        let mut t = Self::zero();
        if !(c.is_zero() && c.coords().iter().all(|x| x.is_exact())) {
            t.terms.insert(e, c);
        }
        t
    }

    pub fn terms(&self) -> &BTreeMap<i64, UnramifiedElement> {
        &self.terms
    }

    pub fn coefficient(&self, e: i64) -> Option<&UnramifiedElement> {
        self.terms.get(&e)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&e, c) in &other.terms {
            let v = match terms.remove(&e) {
                Some(a) => a.plus(c),
                None => c.clone(),
            };
            terms.insert(e, v);
        }
        TLaurent { terms }
    }

    pub fn neg(&self) -> Self {
        TLaurent { terms: self.terms.iter().map(|(&e, c)| (e, c.negated())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                out = out.add(&Self::monomial(a.times(b), i + j));
            }
        }
        out
    }

    /// Lowest exponent whose coefficient is nonzero at precision.
    pub fn t_valuation(&self) -> Option<i64> {
        self.terms.iter().find(|(_, c)| !c.is_zero()).map(|(&e, _)| e)
    }

    /// Drops exponents above `m`.
    pub fn truncate(&self, m: i64) -> Self {
        TLaurent { terms: self.terms.range(..=m).map(|(&e, c)| (e, c.clone())).collect() }
    }
}

impl fmt::Debug for TLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| if *e == 0 { format!("({c})") } else { format!("({c})·t^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Local change of lattice at the θ_n divisor.
#[derive(Clone, Debug)]
pub struct LocalModification {
    pub level: u32,
    /// Columns split the flag: column k spans a complement in Fil^{w_k}.
    pub splitting: KMatrix,
    /// Weight attached to each splitting column.
    pub weights: Vec<i64>,
    /// P = C · diag(t^{−w_k}) · C^{−1}, entries truncated above t^m (the determinant is taken before truncating).
    pub matrix: Vec<Vec<TLaurent>>,
    pub det_t_valuation: i64,
}

/// Adapted basis: first Fil^{top}, then a complement of each Fil^{j+1} in Fil^j.
/// Candidate vectors are tried in order after rotating them by `rotate`;
/// a candidate is kept when it raises the rank.
fn splitting(fd: &FilteredIsocrystal, rotate: usize) -> Result<(KMatrix, Vec<i64>)> {
    let d = fd.rank();
    let mut chosen: Vec<Vec<UnramifiedElement>> = Vec::new();
    let mut weights = Vec::new();
    for &j in fd.jumps().iter().rev() {
        let fil = fd.fil(j).expect("jump has a flag");
        let mut cands = fil.columns();
        let len = cands.len();
        cands.rotate_left(rotate % len.max(1));
        for c in cands {
            let mut trial = chosen.clone();
            trial.push(c);
            if Matrix::from_cols(&trial, d).rank() == trial.len() {
                chosen = trial;
                weights.push(j);
            }
        }
        if chosen.len() != fil.cols() {
            return Err(Error::Precision(format!("could not split Fil^{j} at precision")));
        }
    }
    Ok((Matrix::from_cols(&chosen, d), weights))
}

/// Cofactor expansion along rows, memoized on the set of used columns.
fn laplace_det(m: &[Vec<TLaurent>], one: &UnramifiedElement) -> TLaurent {
    let mut memo: HashMap<usize, TLaurent> = HashMap::new();
    fn rec(row: usize, used: usize, m: &[Vec<TLaurent>], one: &UnramifiedElement, memo: &mut HashMap<usize, TLaurent>) -> TLaurent {
        let d = m.len();
        if row == d {
            return TLaurent::monomial(one.clone(), 0);
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = TLaurent::zero();
        let mut sign_pos = true;
        for col in 0..d {
            if used >> col & 1 == 1 {
                continue;
            }
            if !m[row][col].terms.is_empty() {
                let minor = rec(row + 1, used | 1 << col, m, one, memo);
                let term = m[row][col].mul(&minor);
                acc = if sign_pos { acc.add(&term) } else { acc.add(&term.neg()) };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(used, acc.clone());
        acc
    }
    rec(0, 0, m, one, &mut memo)
}

/// Berger's local modification at level n with the default splitting.
pub fn local_modification(fd: &FilteredIsocrystal, n: u32, m: i64) -> Result<LocalModification> {
    local_modification_rotated(fd, n, m, 0)
}

/// Same, with candidate flag vectors rotated before the greedy splitting.
///
/// The filtration enters M^{(n)} through the n-th inverse Frobenius twist,
/// so the splitting columns are twisted by σ^{−n} first.
pub fn local_modification_rotated(fd: &FilteredIsocrystal, n: u32, m: i64, rotate: usize) -> Result<LocalModification> {
    let d = fd.rank();
    let (c, weights) = splitting(fd, rotate)?;
    let c = c.map(|x| x.frobenius_pow(-(n as i64)));
    let cinv = c.inverse()?;
    let mut matrix = vec![vec![TLaurent::zero(); d]; d];
    for (i, row) in matrix.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut acc = TLaurent::zero();
            for (k, &w) in weights.iter().enumerate() {
                acc = acc.add(&TLaurent::monomial(c.get(i, k).times(cinv.get(k, j)), -w));
            }
            *entry = acc;
        }
    }
    let det = laplace_det(&matrix, &c.sample().one_like());
    let matrix = matrix.into_iter().map(|row| row.into_iter().map(|e| e.truncate(m)).collect()).collect();
    let det_t_valuation = det
        .t_valuation()
        .ok_or_else(|| Error::Precision("det P vanishes at precision".into()))?;
    Ok(LocalModification { level: n, splitting: c, weights, matrix, det_t_valuation })
}

/// deg(M') = t_N(D) − t_H(D), cross-checked against v_p(det Φ) plus the
/// t-adic pole count of the local modification.
pub fn berger_degree(fd: &FilteredIsocrystal) -> Result<i64> {
    let direct = fd.t_n()? - fd.t_h();
    let lm = local_modification(fd, 1, 0)?;
    let via_det = fd.isocrystal().degree()? + lm.det_t_valuation;
    if direct != via_det {
        return Err(Error::Inconsistent(format!(
            "t_N − t_H = {direct} but deg Φ + det-valuation = {via_det}"
        )));
    }
    Ok(direct)
}
