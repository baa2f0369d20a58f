use super::tail::TailBound;
use crate::error::{Error, Result};
use crate::padic::{PadicScalar, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent series Σ a_i π^i over Q_p converging for v_p(π) ∈ (0, r], stored
/// as a finite window of coefficients plus a [`TailBound`] for everything else.
#[derive(Clone, Debug)]
pub struct RobbaElement {
    p: u64,
    r: Rat,
    prec: i64,
    coeffs: BTreeMap<i64, PadicScalar>,
    tail: TailBound,
}

/// v_s of a stored element: exact, or only a lower bound when some unknown
/// digit or the tail could reach the minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RobbaValuation {
    /// `None` for the zero series.
    pub value: Option<Rat>,
    pub exact: bool,
}

/// Outcome of comparing two elements coefficient by coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Agreement {
    pub equal: bool,
    /// Smallest valuation of a stored coefficient difference that is nonzero at precision.
    pub residual: Option<Rat>,
    pub compared: usize,
}

impl RobbaElement {
    pub fn new(p: u64, r: Rat, prec: i64, coeffs: BTreeMap<i64, PadicScalar>, tail: TailBound) -> Result<Self> {
        if r <= Rat::from_integer(0) {
            return Err(Error::Domain(format!("convergence parameter must be positive, got {r}")));
        }
        if coeffs.values().any(|c| c.prime() != p) {
            return Err(Error::FieldMismatch("coefficients over a different prime".into()));
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !(c.is_zero() && c.is_exact())).collect();
        Ok(RobbaElement { p, r, prec, coeffs, tail })
    }

    /// Finite Laurent polynomial with rational coefficients reduced to precision `prec`.
    pub fn from_rationals(p: u64, r: Rat, prec: i64, terms: &[(i64, BigRational)]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (i, q) in terms {
            let c = PadicScalar::from_ratio(p, q, prec)?;
            let prev = coeffs.remove(i).unwrap_or_else(|| PadicScalar::exact_zero(p));
            coeffs.insert(*i, &prev + &c);
        }
        Self::new(p, r, prec, coeffs, TailBound::zero())
    }

    pub fn from_ints(p: u64, r: Rat, prec: i64, terms: &[(i64, i64)]) -> Result<Self> {
        let t: Vec<(i64, BigRational)> =
            terms.iter().map(|&(i, a)| (i, BigRational::from_integer(BigInt::from(a)))).collect();
        Self::from_rationals(p, r, prec, &t)
    }

    pub fn constant(p: u64, r: Rat, prec: i64, c: PadicScalar) -> Result<Self> {
        Self::new(p, r, prec, BTreeMap::from([(0, c)]), TailBound::zero())
    }

    /// The variable π.
    pub fn pi(p: u64, r: Rat, prec: i64) -> Self {
        Self::from_ints(p, r, prec, &[(1, 1)]).expect("valid")
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> Rat {
        self.r
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, PadicScalar> {
        &self.coeffs
    }

    pub fn coefficient(&self, i: i64) -> PadicScalar {
        self.coeffs.get(&i).cloned().unwrap_or_else(|| PadicScalar::exact_zero(self.p))
    }

    pub fn tail(&self) -> &TailBound {
        &self.tail
    }

    /// Smallest and largest stored exponent.
    pub fn window(&self) -> Option<(i64, i64)> {
        Some((*self.coeffs.keys().next()?, *self.coeffs.keys().next_back()?))
    }

    /// Same series, declared on a smaller annulus.
    pub fn with_r(&self, r: Rat) -> Result<Self> {
        if r <= Rat::from_integer(0) || r > self.r {
            return Err(Error::Domain(format!("r must lie in (0, {}]", self.r)));
        }
        let mut out = self.clone();
        out.r = r;
        Ok(out)
    }

    fn like(&self, coeffs: BTreeMap<i64, PadicScalar>, tail: TailBound) -> Self {
        RobbaElement { p: self.p, r: self.r, prec: self.prec, coeffs, tail }
    }

    /// v_s(f) = min_i (v_p(a_i) + i s) for 0 < s ≤ r.
    pub fn v_r(&self, s: Rat) -> Result<RobbaValuation> {
        if s <= Rat::from_integer(0) || s > self.r {
            return Err(Error::Domain(format!("v_s needs 0 < s ≤ {}, got {s}", self.r)));
        }
        let mut known: Option<Rat> = None;
        let mut unknown: Option<Rat> = self.tail.eval(s)?;
        for (&i, c) in &self.coeffs {
            let shift = Rat::from_integer(i) * s;
            match c.val() {
                Some(v) => {
                    let x = Rat::from_integer(v) + shift;
                    known = Some(known.map_or(x, |k| k.min(x)));
                }
                None => {
                    let x = Rat::from_integer(c.precision().min(1 << 40)) + shift;
                    unknown = Some(unknown.map_or(x, |u| u.min(x)));
                }
            }
        }
        Ok(match (known, unknown) {
            (Some(k), None) => RobbaValuation { value: Some(k), exact: true },
            (Some(k), Some(u)) if k < u => RobbaValuation { value: Some(k), exact: true },
            (Some(k), Some(u)) => RobbaValuation { value: Some(k.min(u)), exact: false },
            (None, Some(u)) => RobbaValuation { value: Some(u), exact: false },
            (None, None) => RobbaValuation { value: None, exact: true },
        })
    }

    /// Moves every stored coefficient outside `[lo, hi]` into the tail.
    pub fn truncate(&self, lo: i64, hi: i64) -> Self {
        let mut tail = self.tail.clone();
        let mut coeffs = BTreeMap::new();
        for (&i, c) in &self.coeffs {
            if (lo..=hi).contains(&i) {
                coeffs.insert(i, c.clone());
            } else {
                let v = c.val().unwrap_or(c.precision().min(1 << 40));
                tail = tail.with_line(Rat::from_integer(v), Rat::from_integer(i));
            }
        }
        self.like(coeffs, tail)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(format!("p = {} vs p = {}", self.p, other.p)));
        }
        Ok(())
    }

    fn merge(&self, other: &Self, coeffs: BTreeMap<i64, PadicScalar>, tail: TailBound) -> Self {
        RobbaElement {
            p: self.p,
            r: self.r.min(other.r),
            prec: self.prec.min(other.prec),
            coeffs: coeffs.into_iter().filter(|(_, c)| !(c.is_zero() && c.is_exact())).collect(),
            tail,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut coeffs = self.coeffs.clone();
        for (&i, c) in &other.coeffs {
            let e = coeffs.entry(i).or_insert_with(|| PadicScalar::exact_zero(self.p));
            *e = &*e + c;
        }
        Ok(self.merge(other, coeffs, self.tail.union(&other.tail)))
    }

    pub fn neg(&self) -> Self {
        self.like(self.coeffs.iter().map(|(&i, c)| (i, -c)).collect(), self.tail.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &PadicScalar) -> Result<Self> {
        if c.prime() != self.p {
            return Err(Error::FieldMismatch("scalar over a different prime".into()));
        }
        let v = match c.val() {
            Some(v) => Rat::from_integer(v),
            None => Rat::from_integer(c.precision().min(1 << 40)),
        };
        let coeffs = self.coeffs.iter().map(|(&i, a)| (i, a * c)).collect();
        Ok(self.like(coeffs, self.tail.shift(v)))
    }

    /// The stored window as a tail bound valid for every s.
    pub(crate) fn window_bound(&self) -> TailBound {
        let lines = self
            .coeffs
            .iter()
            .map(|(&i, c)| {
                let v = c.val().unwrap_or(c.precision().min(1 << 40));
                (Rat::from_integer(v), Rat::from_integer(i))
            })
            .collect();
        TailBound::new(lines, Rat::from_integer(0), None)
    }

    /// Product. Exact when both factors have no tail; otherwise the result keeps
    /// exponents up to the larger of the two windows and moves the rest into the tail.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut coeffs: BTreeMap<i64, PadicScalar> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let e = coeffs.entry(i + j).or_insert_with(|| PadicScalar::exact_zero(self.p));
                *e = &*e + &(a * b);
            }
        }
        let tail = self
            .window_bound()
            .product(&other.tail)
            .union(&self.tail.product(&other.window_bound()))
            .union(&self.tail.product(&other.tail));
        let hi = match (self.window(), other.window()) {
            (Some(a), Some(b)) => a.1.max(b.1),
            _ => 0,
        };
        let out = self.merge(other, coeffs, tail);
        if self.tail.is_zero() && other.tail.is_zero() {
            return Ok(out);
        }
        Ok(out.truncate(i64::MIN, hi))
    }

    /// Compares stored coefficients: each difference must vanish up to the
    /// coefficient precision and the tails' coefficient bounds.
    pub fn agrees_with(&self, other: &Self) -> Result<Agreement> {
        let d = self.sub(other)?;
        let mut equal = true;
        let mut residual: Option<Rat> = None;
        for (&k, c) in &d.coeffs {
            let Some(v) = c.val() else { continue };
            let v = Rat::from_integer(v);
            residual = Some(residual.map_or(v, |x| x.min(v)));
            match d.tail.coefficient_bound(k) {
                Some(b) if v >= b => {}
                _ => equal = false,
            }
        }
        Ok(Agreement { equal, residual, compared: d.coeffs.len() })
    }
}

impl fmt::Display for RobbaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*π"),
                _ => format!("({c})*π^{i}"),
            })
            .collect();
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if self.tail.is_zero() {
            write!(f, "{body}")
        } else {
            write!(f, "{body} + O(tail)")
        }
    }
}

/// ⌈log_p(n)⌉ for n ≥ 1.
pub(crate) fn ceil_log(p: u64, n: u64) -> i64 {
    let mut e = 0;
    let mut q: u128 = 1;
    while q < n as u128 {
        q *= p as u128;
        e += 1;
    }
    e
}

/// t = log(1+π) = Σ (−1)^{i−1} π^i / i, stored up to π^m, on the annulus r = p/(p−1).
///
/// The remainder bound uses v_p(i) ≤ log_p(m+1) + (i − m − 1)/((m+1) ln p),
/// which holds with slope 3/(2(m+1)) since ln p > 2/3.
pub fn t_element(p: u64, m: i64, prec: i64) -> Result<RobbaElement> {
    if m < 1 {
        return Err(Error::Invalid("t needs at least one term".into()));
    }
    let mut coeffs = BTreeMap::new();
    for i in 1..=m {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let q = BigRational::new(BigInt::from(sign), BigInt::from(i));
        coeffs.insert(i, PadicScalar::from_ratio(p, &q, prec)?);
    }
    let start = m + 1;
    let tail = TailBound::new(
        vec![(Rat::from_integer(-ceil_log(p, start as u64)), Rat::from_integer(start))],
        Rat::new(3, 2 * start),
        None,
    );
    RobbaElement::new(p, Rat::new(p as i64, p as i64 - 1), prec, coeffs, tail)
}
