//! Random inputs for the verification suites.

use crate::error::Result;
use crate::isocrystal::{FilteredIsocrystal, Isocrystal, KMatrix};
use crate::linalg::Matrix;
use crate::padic::{PadicScalar, Rat, UnramifiedElement, UnramifiedField};
use crate::perfect::{FqElement, FqField, PerfectLaurent};
use crate::robba::RobbaElement;
use crate::scan::{chart_flags, chart_positions, sample_coords};
use crate::witt::WittVector;
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

pub fn int_vector(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()
}

/// A perfect-ring element with up to four terms and exponents in (1/p^2)Z.
pub fn perfect(rng: &mut ChaCha8Rng, fq: &Arc<FqField>, laurent: bool) -> PerfectLaurent {
    let p = fq.prime() as i64;
    let den = p * p;
    let n = rng.gen_range(0..=4);
    let terms: Vec<(Rat, FqElement)> = (0..n)
        .map(|_| {
            let lo = if laurent { -2 * den } else { 0 };
            let e = Rat::new(rng.gen_range(lo..=3 * den), den);
            let c: Vec<u64> = (0..fq.degree()).map(|_| rng.gen_range(0..fq.prime())).collect();
            (e, FqElement::from_coords(fq, &c))
        })
        .collect();
    PerfectLaurent::from_terms(fq, terms, laurent).expect("valid terms")
}

pub fn nonzero_perfect(rng: &mut ChaCha8Rng, fq: &Arc<FqField>, laurent: bool) -> PerfectLaurent {
    loop {
        let x = perfect(rng, fq, laurent);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn witt(rng: &mut ChaCha8Rng, fq: &Arc<FqField>, len: usize, laurent: bool) -> WittVector<PerfectLaurent> {
    WittVector::new((0..len).map(|_| perfect(rng, fq, laurent)).collect()).expect("nonempty")
}

/// Weights of length d drawn from [lo, hi].
pub fn weights(rng: &mut ChaCha8Rng, d: usize, lo: i64, hi: i64) -> Vec<i64> {
    let mut w: Vec<i64> = (0..d).map(|_| rng.gen_range(lo..=hi)).collect();
    w.sort();
    w
}

/// A chart point of the flag variety for `weights`, with coordinates mod p^2.
pub fn chart_filtration(rng: &mut ChaCha8Rng, iso: &Isocrystal, weights: &[i64]) -> Result<FilteredIsocrystal> {
    let n = chart_positions(weights).len();
    let coords = sample_coords(rng, iso.prime(), 2, n);
    let flags = chart_flags(iso, weights, &coords)?;
    FilteredIsocrystal::new(iso.clone(), weights.to_vec(), flags)
}

/// A filtration whose steps are spans of the given integer vectors: the top
/// step takes the first vectors, and each lower step adds the next ones.
pub fn grid_filtration(iso: &Isocrystal, weights: &[i64], vectors: &[Vec<i64>]) -> Result<Option<FilteredIsocrystal>> {
    let d = iso.rank();
    let f = iso.field();
    let mut w = weights.to_vec();
    w.sort_by(|a, b| b.cmp(a));
    let cols: Vec<Vec<UnramifiedElement>> =
        vectors.iter().map(|v| v.iter().map(|&x| UnramifiedElement::from_int(f, x)).collect()).collect();
    let mut flags: BTreeMap<i64, KMatrix> = BTreeMap::new();
    let mut jumps = w.clone();
    jumps.dedup();
    for &k in &jumps {
        let n = w.iter().filter(|&&x| x >= k).count();
        let m = if n == d {
            Matrix::identity(d, &UnramifiedElement::one(f))
        } else {
            Matrix::from_cols(&cols[..n], d)
        };
        if m.rank() != n {
            return Ok(None);
        }
        flags.insert(k, m);
    }
    FilteredIsocrystal::new(iso.clone(), weights.to_vec(), flags).map(Some)
}

/// Rank-one isocrystal p^a·u with weight a.
pub fn rank_one(rng: &mut ChaCha8Rng, field: &Arc<UnramifiedField>) -> Result<FilteredIsocrystal> {
    let a = rng.gen_range(-2..=2i64);
    let p = field.prime() as i64;
    let mut u = rng.gen_range(1..=20i64);
    while u % p == 0 {
        u += 1;
    }
    let entry = UnramifiedElement::p_power(field, a).scale(&PadicScalar::exact_int(field.prime(), u));
    let iso = Isocrystal::new(field, Matrix::from_rows(vec![vec![entry]])?)?;
    let top = Matrix::identity(1, &UnramifiedElement::one(field));
    FilteredIsocrystal::new(iso, vec![a], BTreeMap::from([(a, top)]))
}

/// Polynomial in π with small integer coefficients and zero tail.
pub fn robba_poly(rng: &mut ChaCha8Rng, p: u64, r: Rat, prec: i64, deg: i64) -> Result<RobbaElement> {
    let terms: Vec<(i64, i64)> = (0..=deg).map(|i| (i, rng.gen_range(-9..=9))).collect();
    RobbaElement::from_ints(p, r, prec, &terms)
}

/// A unit of Z_p, as an integer prime to p.
pub fn padic_unit(rng: &mut ChaCha8Rng, p: u64, prec: i64) -> PadicScalar {
    loop {
        let g = rng.gen_range(1..1000i64);
        if g % p as i64 != 0 {
            return PadicScalar::from_int(p, g, prec);
        }
    }
}
