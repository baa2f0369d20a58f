//! Brute-force weak admissibility over eigenvector-spanned subobjects.
//!
//! This deliberately avoids the slope decomposition: candidate subobjects
//! are the φ-closures of small integer vectors and of eigenvectors of Φ for
//! eigenvalues ±p^k, together with all their sums. For the presets (and any
//! isocrystal whose slope components are closures of such vectors) this is
//! every φ-stable subspace.

use crate::error::Result;
use crate::isocrystal::{FilteredIsocrystal, Isocrystal, KMatrix};
use crate::linalg::Matrix;
use crate::padic::UnramifiedElement;

fn closure(iso: &Isocrystal, v: &KMatrix) -> KMatrix {
    let mut cur = v.column_basis();
    loop {
        let next = cur.hstack(&iso.apply(&cur)).column_basis();
        if next.cols() == cur.cols() {
            return cur;
        }
        cur = next;
    }
}

fn same_span(a: &KMatrix, b: &KMatrix) -> bool {
    a.cols() == b.cols() && a.hstack(b).rank() == a.cols()
}

fn push_unique(list: &mut Vec<KMatrix>, m: KMatrix) {
    if m.cols() > 0 && !list.iter().any(|x| same_span(x, &m)) {
        list.push(m);
    }
}

fn grid(d: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v| (-1..=1).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out
}

/// φ-stable subspaces reachable from the grid and from eigenvectors.
pub fn stable_subspaces(iso: &Isocrystal) -> Vec<KMatrix> {
    let d = iso.rank();
    let f = iso.field();
    let one = UnramifiedElement::one(f);
    let mut gens: Vec<KMatrix> = Vec::new();
    for v in grid(d) {
        let col: Vec<UnramifiedElement> = v.iter().map(|&x| UnramifiedElement::from_int(f, x)).collect();
        push_unique(&mut gens, closure(iso, &Matrix::from_cols(&[col], d)));
    }
    if f.degree() == 1 {
        for k in 0..=3 {
            for sign in [1i64, -1] {
                let lam = UnramifiedElement::p_power(f, k).scale(&crate::padic::PadicScalar::exact_int(f.prime(), sign));
                let shifted = iso.phi().sub(&Matrix::identity(d, &one).scale(&lam));
                if let Some(ker) = shifted.kernel() {
                    for c in ker.columns() {
                        push_unique(&mut gens, closure(iso, &Matrix::from_cols(&[c], d)));
                    }
                }
            }
        }
    }
    let mut all = gens.clone();
    let mut frontier = gens.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in &gens {
                let s = a.hstack(g).column_basis();
                if !all.iter().any(|x| same_span(x, &s)) {
                    all.push(s.clone());
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    all
}

/// Weak admissibility by checking every subspace from [`stable_subspaces`].
pub fn brute_force_wa(fd: &FilteredIsocrystal) -> Result<bool> {
    let iso = fd.isocrystal();
    if iso.degree()? != fd.t_h() {
        return Ok(false);
    }
    for w in stable_subspaces(iso) {
        if w.cols() == iso.rank() {
            continue;
        }
        if iso.sub_degree(&w)? < fd.sub_t_h(&w) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn subobject_counts() {
        // ord2: 0, e0, e1, whole → three nonzero subspaces
        assert_eq!(stable_subspaces(&preset("ord2", 2, 1, 20).unwrap()).len(), 3);
        assert_eq!(stable_subspaces(&preset("ss2", 3, 1, 20).unwrap()).len(), 1);
        assert_eq!(stable_subspaces(&preset("mf3", 2, 1, 20).unwrap()).len(), 3);
        assert_eq!(stable_subspaces(&preset("ord3", 2, 1, 20).unwrap()).len(), 7);
    }
}
