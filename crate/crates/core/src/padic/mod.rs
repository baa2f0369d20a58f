//! Finite-precision arithmetic in Q_p, unramified extensions and the cyclotomic tower.

mod cyclotomic;
mod newton;
mod scalar;
mod unramified;

pub use cyclotomic::{eisenstein_poly, CyclotomicElement, CyclotomicField};
pub use newton::{newton_polygon_of, NewtonPolygon};
pub use scalar::{PadicScalar, EXACT};
pub use unramified::{UnramifiedElement, UnramifiedField};

use crate::error::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact rationals used for valuations, slopes and exponents.
pub type Rat = Ratio<i64>;

/// Common interface of the coefficient fields, used by the generic linear algebra.
///
/// Arithmetic between elements of different fields panics; the checked
/// methods on the concrete types return errors instead.
pub trait FieldElement: Clone + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    /// Zero at the tracked precision.
    fn is_zero(&self) -> bool;
    /// Normalized valuation, `None` when zero at precision.
    fn valuation(&self) -> Option<Rat>;
    /// Absolute precision: the element is known modulo elements of this valuation.
    fn abs_precision(&self) -> Rat;
}

pub(crate) fn p_pow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Splits a nonzero integer as `p^v * u` with `p ∤ u`.
pub(crate) fn split_p(p: u64, x: &BigInt) -> (i64, BigInt) {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut u = x.clone();
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

pub(crate) fn vp_int(p: u64, x: &BigInt) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(split_p(p, x).0)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

pub(crate) fn vp_rat(p: u64, q: &num_rational::BigRational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(vp_int(p, q.numer()).unwrap() - vp_int(p, q.denom()).unwrap())
}

/// `v_p(n!)` by Legendre's formula.
pub(crate) fn vp_factorial(p: u64, n: u64) -> i64 {
    let mut v = 0u64;
    let mut q = p;
    while q <= n {
        v += n / q;
        match q.checked_mul(p) {
            Some(x) => q = x,
            None => break,
        }
    }
    v as i64
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn rat_ceil(r: Rat) -> i64 {
    r.ceil().to_integer()
}
