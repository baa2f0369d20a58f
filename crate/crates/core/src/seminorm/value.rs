use crate::error::{Error, Result};
use crate::padic::{vp_rat, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// How a reported value relates to the true one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    /// The true value is at most the reported one (truncation hides a tail).
    UpperBound,
    /// The true value is at least the reported one.
    LowerBound,
}

/// A nonnegative real of the form `factor * p^{-v}`, with `factor` a positive
/// rational prime to p and `v` rational, or zero (`v = +∞`).
///
/// For p-adic style values `factor` is 1 and the value is carried entirely
/// by `v = -log_p`. Values with `v = 0` and `factor = 1` may use `p = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeminormValue {
    p: u64,
    neg_log_p: Option<Rat>,
    factor: BigRational,
    exactness: Exactness,
}

impl SeminormValue {
    pub fn zero(p: u64) -> Self {
        SeminormValue { p, neg_log_p: None, factor: BigRational::one(), exactness: Exactness::Exact }
    }

    pub fn one(p: u64) -> Self {
        Self::p_power(p, Rat::from_integer(0))
    }

    /// The value `p^{-v}`.
    pub fn p_power(p: u64, v: Rat) -> Self {
        SeminormValue { p, neg_log_p: Some(v), factor: BigRational::one(), exactness: Exactness::Exact }
    }

    pub fn from_neg_log(p: u64, v: Option<Rat>) -> Self {
        match v {
            Some(v) => Self::p_power(p, v),
            None => Self::zero(p),
        }
    }

    /// A nonnegative rational, split into its p-part and a p-free factor.
    pub fn from_rational(p: u64, q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Invalid("seminorm values are nonnegative".into()));
        }
        if q.is_zero() {
            return Ok(Self::zero(p));
        }
        let v = vp_rat(p, q).expect("nonzero");
        let pv = BigRational::from_integer(num_traits::pow(BigInt::from(p), v.unsigned_abs() as usize));
        let factor = if v >= 0 { q / pv } else { q * pv };
        Ok(SeminormValue {
            p,
            neg_log_p: Some(Rat::from_integer(-v)),
            factor,
            exactness: Exactness::Exact,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// `-log_p` of the value when the p-free factor is 1; `None` means the value is 0.
    pub fn neg_log_p(&self) -> Option<Rat> {
        self.neg_log_p
    }

    pub fn factor(&self) -> &BigRational {
        &self.factor
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    pub fn is_zero(&self) -> bool {
        self.neg_log_p.is_none()
    }

    /// True when the value is a pure power of p.
    pub fn is_p_power(&self) -> bool {
        self.is_zero() || self.factor.is_one()
    }

    pub fn with_exactness(mut self, e: Exactness) -> Self {
        self.exactness = e;
        self
    }

    /// The value as a rational number, when `v` is an integer.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self.neg_log_p {
            None => Some(BigRational::zero()),
            Some(v) if v.is_integer() => {
                let k = v.to_integer();
                if k != 0 && self.p < 2 {
                    return None;
                }
                let pk = BigRational::from_integer(num_traits::pow(BigInt::from(self.p.max(1)), k.unsigned_abs() as usize));
                Some(if k >= 0 { &self.factor / pk } else { &self.factor * pk })
            }
            _ => None,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let exactness = combine_flags(self.exactness, other.exactness);
        let (a, b) = match (self.neg_log_p, other.neg_log_p) {
            (None, _) | (_, None) => {
                return Ok(Self::zero(self.p.max(other.p)).with_exactness(exactness));
            }
            (Some(a), Some(b)) => (a, b),
        };
        let p = match (self.p, other.p) {
            (x, y) if x == y => x,
            (0, y) if self.factor.is_one() && a.is_zero() => y,
            (x, 0) if other.factor.is_one() && b.is_zero() => x,
            (x, y) => return Err(Error::FieldMismatch(format!("values for p={x} and p={y}"))),
        };
        Ok(SeminormValue { p, neg_log_p: Some(a + b), factor: &self.factor * &other.factor, exactness })
    }

    /// The value raised to a positive rational power.
    pub fn pow(&self, c: Rat) -> Result<Self> {
        if c <= Rat::from_integer(0) {
            return Err(Error::Invalid("exponent must be positive".into()));
        }
        let Some(v) = self.neg_log_p else { return Ok(self.clone()) };
        let factor = if self.factor.is_one() {
            BigRational::one()
        } else if c.is_integer() {
            num_traits::pow(self.factor.clone(), c.to_integer() as usize)
        } else {
            return Err(Error::NotRepresentable(format!(
                "({})^{} is not of the form rational * p^q",
                self.factor, c
            )));
        };
        Ok(SeminormValue { p: self.p, neg_log_p: Some(v * c), factor, exactness: self.exactness })
    }

    /// Exact comparison of the numerical values, ignoring the exactness flags.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (a, b) = match (self.neg_log_p, other.neg_log_p) {
            (None, None) => return Ordering::Equal,
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some(a), Some(b)) => (a, b),
        };
        if self.factor == other.factor && (self.p == other.p || (a.is_zero() && b.is_zero())) {
            return b.cmp(&a);
        }
        // raise both to a common power making the exponents integral
        let d = num_integer::lcm(*a.denom(), *b.denom());
        let lhs = rational_power(&self.factor, self.p, a, d);
        let rhs = rational_power(&other.factor, other.p, b, d);
        lhs.cmp(&rhs)
    }

    /// Maximum of the numerical values; flags follow the selected value.
    pub fn max_value(self, other: Self) -> Self {
        if other.cmp_value(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }
}

/// `(factor * p^{-v})^d` as a rational, for `v * d` integral.
fn rational_power(factor: &BigRational, p: u64, v: Rat, d: i64) -> BigRational {
    let k = (v * Rat::from_integer(d)).to_integer();
    let f = num_traits::pow(factor.clone(), d as usize);
    if k == 0 {
        return f;
    }
    let pk = BigRational::from_integer(num_traits::pow(BigInt::from(p), k.unsigned_abs() as usize));
    if k > 0 {
        f / pk
    } else {
        f * pk
    }
}

fn combine_flags(a: Exactness, b: Exactness) -> Exactness {
    use Exactness::*;
    match (a, b) {
        (Exact, x) | (x, Exact) => x,
        (x, y) if x == y => x,
        // opposite bounds carry no information about the product
        _ => UpperBound,
    }
}

/// Maximum of a family of terms, some of which are only upper bounds.
///
/// The result is exact when the largest exact term strictly beats every
/// bound; otherwise it is the largest bound, flagged as an upper bound.
pub(crate) fn max_of_terms(p: u64, terms: impl IntoIterator<Item = SeminormValue>) -> SeminormValue {
    let mut exact: Option<SeminormValue> = None;
    let mut bound: Option<SeminormValue> = None;
    for t in terms {
        let slot = if t.is_exact() { &mut exact } else { &mut bound };
        *slot = Some(match slot.take() {
            None => t,
            Some(s) => s.max_value(t),
        });
    }
    match (exact, bound) {
        (None, None) => SeminormValue::zero(p),
        (Some(e), None) => e,
        (None, Some(b)) => b.with_exactness(Exactness::UpperBound),
        (Some(e), Some(b)) => {
            if e.cmp_value(&b) == Ordering::Greater {
                e
            } else {
                b.with_exactness(Exactness::UpperBound)
            }
        }
    }
}

impl fmt::Display for SeminormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.neg_log_p {
            None => write!(f, "0")?,
            Some(v) if self.factor.is_one() => write!(f, "p^(-{v})")?,
            Some(v) => write!(f, "{} * p^(-{v})", self.factor)?,
        }
        match self.exactness {
            Exactness::Exact => Ok(()),
            Exactness::UpperBound => write!(f, " (upper bound)"),
            Exactness::LowerBound => write!(f, " (lower bound)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_split_and_compare() {
        let v = SeminormValue::from_rational(2, &q(4, 9)).unwrap();
        assert_eq!(v.neg_log_p(), Some(Rat::from_integer(-2)));
        assert_eq!(v.factor(), &q(1, 9));
        assert_eq!(v.to_rational(), Some(q(4, 9)));
        let half = SeminormValue::p_power(2, Rat::from_integer(1));
        assert_eq!(v.cmp_value(&half), Ordering::Less);
        // 2^{-1/2} ≈ 0.707 vs 4/9
        let root = SeminormValue::p_power(2, Rat::new(1, 2));
        assert_eq!(root.cmp_value(&v), Ordering::Greater);
        assert_eq!(SeminormValue::zero(2).cmp_value(&v), Ordering::Less);
    }

    #[test]
    fn powers() {
        let x = SeminormValue::p_power(3, Rat::new(1, 2));
        assert_eq!(x.pow(Rat::from_integer(4)).unwrap().neg_log_p(), Some(Rat::from_integer(2)));
        let c = SeminormValue::from_rational(2, &q(1, 3)).unwrap();
        assert!(c.pow(Rat::new(1, 2)).is_err());
        assert_eq!(c.pow(Rat::from_integer(2)).unwrap().to_rational(), Some(q(1, 9)));
    }

    #[test]
    fn max_with_bounds() {
        let e = SeminormValue::p_power(2, Rat::from_integer(1));
        let b = SeminormValue::p_power(2, Rat::from_integer(3)).with_exactness(Exactness::UpperBound);
        assert!(max_of_terms(2, [e.clone(), b.clone()]).is_exact());
        let small = SeminormValue::p_power(2, Rat::from_integer(4));
        let m = max_of_terms(2, [small, b]);
        assert_eq!(m.exactness(), Exactness::UpperBound);
        assert_eq!(m.neg_log_p(), Some(Rat::from_integer(3)));
    }
}
