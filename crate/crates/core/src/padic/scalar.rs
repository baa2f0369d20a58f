use super::{mod_inverse, p_pow, split_p, FieldElement, Rat};
use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Precision value standing for "exact". Exact elements come from `zero_like`,
/// `one_like` and [`PadicScalar::exact_int`]; their units are not reduced.
pub const EXACT: i64 = i64::MAX / 4;

/// Relative precision used when an exact unit other than ±1 is inverted.
const EXACT_INVERSE_DIGITS: i64 = 64;

fn padd(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        (a + b).min(EXACT)
    }
}

/// An element `u * p^v` of Q_p known modulo `p^N`.
///
/// Precision rules: a sum has precision `min(Na, Nb)`, a product
/// `min(Na + vb, Nb + va)`, and an inverse of a valuation-`v` element
/// has precision `N - 2v` (same relative precision).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    p: u64,
    val: Option<i64>,
    unit: BigInt,
    prec: i64,
}

impl PadicScalar {
    pub fn zero(p: u64, prec: i64) -> Self {
        PadicScalar { p, val: None, unit: BigInt::zero(), prec: prec.min(EXACT) }
    }

    pub fn exact_zero(p: u64) -> Self {
        Self::zero(p, EXACT)
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_int(p, 1, prec)
    }

    pub fn exact_int(p: u64, n: impl Into<BigInt>) -> Self {
        Self::normalize(p, 0, n.into(), EXACT)
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>, prec: i64) -> Self {
        Self::normalize(p, 0, n.into(), prec)
    }

    /// `p^k` known to absolute precision `prec`.
    pub fn p_power(p: u64, k: i64, prec: i64) -> Self {
        Self::normalize_unit(p, k, BigInt::one(), prec)
    }

    /// A rational number reduced to precision `prec`. Exact precision is only
    /// allowed when the denominator is a power of p.
    pub fn from_ratio(p: u64, q: &BigRational, prec: i64) -> Result<Self> {
        if q.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let (vn, un) = split_p(p, q.numer());
        let (vd, ud) = split_p(p, q.denom());
        let v = vn - vd;
        if prec >= EXACT {
            if ud.abs().is_one() {
                return Ok(Self::normalize_unit(p, v, un * ud, EXACT));
            }
            return invalid("an exact p-adic scalar needs a p-power denominator");
        }
        if v >= prec {
            return Ok(Self::zero(p, prec));
        }
        let m = p_pow(p, (prec - v) as u32);
        let inv = mod_inverse(&ud.mod_floor(&m), &m).expect("unit part is prime to p");
        Ok(Self::normalize_unit(p, v, (un * inv).mod_floor(&m), prec))
    }

    /// Builds a value from its stored fields, validating the invariants.
    pub fn from_parts(p: u64, val: Option<i64>, unit: BigInt, prec: i64) -> Result<Self> {
        match val {
            None => {
                if !unit.is_zero() {
                    return invalid("zero element must have unit 0");
                }
                Ok(Self::zero(p, prec))
            }
            Some(v) => {
                if v >= prec {
                    return invalid("valuation must be below the precision");
                }
                if unit.is_zero() || (&unit % BigInt::from(p)).is_zero() {
                    return invalid("unit must be nonzero and prime to p");
                }
                if prec < EXACT {
                    let m = p_pow(p, (prec - v) as u32);
                    if unit.is_negative() || unit >= m {
                        return invalid("unit must lie in [0, p^(N-v))");
                    }
                }
                Ok(PadicScalar { p, val: Some(v), unit, prec })
            }
        }
    }

    /// `p^shift * x` at precision `prec`; `x` may be divisible by p.
    pub(crate) fn normalize(p: u64, shift: i64, x: BigInt, prec: i64) -> Self {
        if x.is_zero() {
            return Self::zero(p, prec);
        }
        let (v, u) = split_p(p, &x);
        Self::normalize_unit(p, shift + v, u, prec)
    }

    fn normalize_unit(p: u64, v: i64, u: BigInt, prec: i64) -> Self {
        if prec >= EXACT {
            return PadicScalar { p, val: Some(v), unit: u, prec: EXACT };
        }
        if v >= prec {
            return Self::zero(p, prec);
        }
        let m = p_pow(p, (prec - v) as u32);
        PadicScalar { p, val: Some(v), unit: u.mod_floor(&m), prec }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation, `None` for zero at precision.
    pub fn val(&self) -> Option<i64> {
        self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    /// Lowers the precision to `prec` (never raises it).
    pub fn with_precision(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        match self.val {
            None => Self::zero(self.p, prec),
            Some(v) => Self::normalize_unit(self.p, v, self.unit.clone(), prec),
        }
    }

    /// The rational `u * p^v`.
    pub fn to_rational(&self) -> BigRational {
        match self.val {
            None => BigRational::zero(),
            Some(v) if v >= 0 => BigRational::from_integer(&self.unit * p_pow(self.p, v as u32)),
            Some(v) => BigRational::new(self.unit.clone(), p_pow(self.p, (-v) as u32)),
        }
    }

    /// Integer representative of an integral element.
    pub fn lift_integer(&self) -> Result<BigInt> {
        match self.val {
            None => Ok(BigInt::zero()),
            Some(v) if v >= 0 => Ok(&self.unit * p_pow(self.p, v as u32)),
            Some(_) => invalid("element is not integral"),
        }
    }

    /// Reduction mod p of an integral element.
    pub fn residue(&self) -> Result<u64> {
        match self.val {
            None if self.prec >= 1 => Ok(0),
            None => Err(Error::Precision("residue of an element known below p^1".into())),
            Some(v) if v > 0 => Ok(0),
            Some(0) => {
                let r = self.unit.mod_floor(&BigInt::from(self.p));
                Ok(r.try_into().expect("residue fits in u64"))
            }
            Some(_) => invalid("residue of a non-integral element"),
        }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(format!("Q_{} vs Q_{}", self.p, other.p)));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.add_impl(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.add_impl(&other.neg_impl()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.mul_impl(&other.inv()?))
    }

    fn add_impl(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        match (self.val, o.val) {
            (None, _) => o.with_precision(prec),
            (_, None) => self.with_precision(prec),
            (Some(va), Some(vb)) => {
                let m = va.min(vb);
                let a = &self.unit * p_pow(self.p, (va - m) as u32);
                let b = &o.unit * p_pow(self.p, (vb - m) as u32);
                Self::normalize(self.p, m, a + b, prec)
            }
        }
    }

    fn neg_impl(&self) -> Self {
        match self.val {
            None => self.clone(),
            Some(v) => Self::normalize_unit(self.p, v, -&self.unit, self.prec),
        }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        match (self.val, o.val) {
            (None, None) => Self::zero(self.p, padd(self.prec, o.prec)),
            (None, Some(vb)) => Self::zero(self.p, padd(self.prec, vb)),
            (Some(va), None) => Self::zero(self.p, padd(o.prec, va)),
            (Some(va), Some(vb)) => {
                let prec = padd(self.prec, vb).min(padd(o.prec, va));
                Self::normalize_unit(self.p, va + vb, &self.unit * &o.unit, prec)
            }
        }
    }

    /// Multiplicative inverse. Relative precision is preserved.
    pub fn inv(&self) -> Result<Self> {
        let v = self.val.ok_or(Error::DivisionByZero)?;
        if self.is_exact() {
            if self.unit.abs().is_one() {
                return Ok(Self::normalize_unit(self.p, -v, self.unit.clone(), EXACT));
            }
            let r = EXACT_INVERSE_DIGITS;
            let m = p_pow(self.p, r as u32);
            let u = mod_inverse(&self.unit.mod_floor(&m), &m).expect("unit");
            return Ok(Self::normalize_unit(self.p, -v, u, r - v));
        }
        let r = self.prec - v;
        let m = p_pow(self.p, r as u32);
        let u = mod_inverse(&self.unit, &m).expect("unit is prime to p");
        Ok(Self::normalize_unit(self.p, -v, u, r - v))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut result = Self::exact_int(self.p, 1);
        let mut base = self.clone();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_impl(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_impl(&base);
            }
        }
        Ok(result)
    }

    /// Equality modulo the smaller of the two precisions.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.p == other.p && self.add_impl(&other.neg_impl()).is_zero()
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.val {
            None => write!(f, "0")?,
            Some(0) => write!(f, "{}", self.unit)?,
            Some(v) => write!(f, "{}*{}^{}", self.unit, self.p, v)?,
        }
        if !self.is_exact() {
            write!(f, " + O({}^{})", self.p, self.prec)?;
        }
        Ok(())
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl std::ops::$trait<&PadicScalar> for &PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: &PadicScalar) -> PadicScalar {
                assert_eq!(self.p, rhs.p, "mixed primes");
                $imp(self, rhs)
            }
        }
        impl std::ops::$trait<PadicScalar> for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: PadicScalar) -> PadicScalar {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

scalar_binop!(Add, add, |a: &PadicScalar, b: &PadicScalar| a.add_impl(b));
scalar_binop!(Sub, sub, |a: &PadicScalar, b: &PadicScalar| a.add_impl(&b.neg_impl()));
scalar_binop!(Mul, mul, |a: &PadicScalar, b: &PadicScalar| a.mul_impl(b));

impl std::ops::Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_impl()
    }
}

impl std::ops::Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_impl()
    }
}

impl FieldElement for PadicScalar {
    fn zero_like(&self) -> Self {
        Self::exact_zero(self.p)
    }
    fn one_like(&self) -> Self {
        Self::exact_int(self.p, 1)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        self.neg_impl()
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn is_zero(&self) -> bool {
        self.val.is_none()
    }
    fn valuation(&self) -> Option<Rat> {
        self.val.map(Rat::from_integer)
    }
    fn abs_precision(&self) -> Rat {
        Rat::from_integer(self.prec.min(1 << 40))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u64, n: i64, prec: i64) -> PadicScalar {
        PadicScalar::from_int(p, n, prec)
    }

    #[test]
    fn two_plus_three_in_q5() {
        let x = &s(5, 2, 10) + &s(5, 3, 10);
        assert_eq!(x.val(), Some(1));
        assert_eq!(x.unit(), &BigInt::from(1));
    }

    #[test]
    fn inverse_of_three_mod_16() {
        let x = s(2, 3, 4).inv().unwrap();
        assert_eq!(x.lift_integer().unwrap(), BigInt::from(11));
        assert_eq!(x.precision(), 4);
        assert_eq!(s(2, 1, 4).inv().unwrap(), s(2, 1, 4));
    }

    #[test]
    fn inverse_keeps_relative_precision() {
        let x = PadicScalar::from_int(3, 9 * 2, 6);
        let y = x.inv().unwrap();
        assert_eq!(y.val(), Some(-2));
        assert_eq!(y.precision(), 2);
        assert!((&x * &y).eq_at_precision(&PadicScalar::one(3, 4)));
    }

    #[test]
    fn product_precision() {
        let a = PadicScalar::from_int(2, 4, 5);
        let b = PadicScalar::from_int(2, 3, 7);
        assert_eq!((&a * &b).precision(), 5);
        let z = PadicScalar::from_int(5, 25, 2);
        assert!(z.is_zero());
    }

    #[test]
    fn rationals_round_trip() {
        let q = BigRational::new(BigInt::from(7), BigInt::from(12));
        let x = PadicScalar::from_ratio(2, &q, 10).unwrap();
        assert_eq!(x.val(), Some(-2));
        let back = &x * &PadicScalar::from_int(2, 12, 20);
        assert!(back.eq_at_precision(&s(2, 7, 20)));
    }

    #[test]
    fn exact_values_stay_exact() {
        let one = PadicScalar::exact_int(3, 1);
        let two = &one + &one;
        assert!(two.is_exact());
        let a = s(3, 5, 8);
        assert_eq!((&a * &one).precision(), 8);
        assert_eq!((&a + &PadicScalar::exact_zero(3)).precision(), 8);
    }

    #[test]
    fn mixed_primes_error() {
        assert!(s(2, 1, 3).checked_add(&s(3, 1, 3)).is_err());
        assert!(PadicScalar::zero(2, 4).inv().is_err());
    }
}
