use crate::error::{Error, Result};
use crate::padic::{CyclotomicElement, CyclotomicField, FieldElement, PadicScalar, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::fmt;
use std::sync::Arc;

/// Σ_{j ≤ m} c_j t^j over Q_p(ε_n), modulo t^{m+1}.
#[derive(Clone)]
pub struct TSeries {
    field: Arc<CyclotomicField>,
    coeffs: Vec<CyclotomicElement>,
    /// Set when 1/j! with j ≥ p entered the coefficients.
    degraded: bool,
}

/// Coefficientwise comparison of two t-series.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub equal: bool,
    /// Smallest valuation of a difference that is nonzero at precision.
    pub residual: Option<Rat>,
    /// Smallest precision at which a coefficient was compared.
    pub precision: Rat,
}

impl TSeries {
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<CyclotomicElement>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a t-series needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| **c.field() != **field) {
            return Err(Error::FieldMismatch("coefficients at a different level".into()));
        }
        Ok(TSeries { field: field.clone(), coeffs, degraded: false })
    }

    pub fn zero(field: &Arc<CyclotomicField>, m: usize) -> Self {
        TSeries { field: field.clone(), coeffs: vec![CyclotomicElement::zero(field); m + 1], degraded: false }
    }

    pub fn constant(c: CyclotomicElement, m: usize) -> Self {
        let mut s = Self::zero(c.field(), m);
        s.coeffs[0] = c;
        s
    }

    /// The variable t.
    pub fn t(field: &Arc<CyclotomicField>, m: usize) -> Self {
        let mut s = Self::zero(field, m);
        if m >= 1 {
            s.coeffs[1] = CyclotomicElement::one(field);
        }
        s
    }

    /// exp(t) − 1 = Σ_{j ≥ 1} t^j / j! with 1/j! reduced to absolute precision `prec`.
    pub fn exp_minus_one(field: &Arc<CyclotomicField>, m: usize, prec: i64) -> Result<Self> {
        let p = field.prime();
        let mut s = Self::zero(field, m);
        let mut fact = BigInt::one();
        for j in 1..=m {
            fact *= j;
            let q = BigRational::new(BigInt::one(), fact.clone());
            s.coeffs[j] = CyclotomicElement::from_scalar(field, PadicScalar::from_ratio(p, &q, prec)?);
        }
        s.degraded = m as u64 >= p;
        Ok(s)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level()
    }

    /// Truncation order m.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CyclotomicElement] {
        &self.coeffs
    }

    pub fn coefficient(&self, j: usize) -> &CyclotomicElement {
        &self.coeffs[j]
    }

    pub fn is_degraded(&self) -> bool {
        self.degraded
    }

    pub(crate) fn mark_degraded(&mut self, d: bool) {
        self.degraded |= d;
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut Vec<CyclotomicElement> {
        &mut self.coeffs
    }

    fn check(&self, other: &Self) -> Result<usize> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch("t-series at different levels".into()));
        }
        Ok(self.order().min(other.order()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let m = self.check(other)?;
        let coeffs = (0..=m).map(|j| self.coeffs[j].plus(&other.coeffs[j])).collect();
        Ok(TSeries { field: self.field.clone(), coeffs, degraded: self.degraded || other.degraded })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let m = self.check(other)?;
        let coeffs = (0..=m).map(|j| self.coeffs[j].minus(&other.coeffs[j])).collect();
        Ok(TSeries { field: self.field.clone(), coeffs, degraded: self.degraded || other.degraded })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let m = self.check(other)?;
        let mut coeffs = vec![CyclotomicElement::zero(&self.field); m + 1];
        for i in 0..=m {
            if self.coeffs[i].is_zero() && self.coeffs[i].coords().iter().all(|c| c.is_exact()) {
                continue;
            }
            for j in 0..=m - i {
                coeffs[i + j] = coeffs[i + j].plus(&self.coeffs[i].times(&other.coeffs[j]));
            }
        }
        Ok(TSeries { field: self.field.clone(), coeffs, degraded: self.degraded || other.degraded })
    }

    pub fn scale(&self, c: &CyclotomicElement) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.times(c)).collect();
        TSeries { field: self.field.clone(), coeffs, degraded: self.degraded }
    }

    pub fn scale_scalar(&self, c: &PadicScalar) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        TSeries { field: self.field.clone(), coeffs, degraded: self.degraded }
    }

    /// Inverse, for a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let m = self.order();
        let c0 = self.coeffs[0].inverse()?;
        let mut out = vec![c0.clone()];
        for n in 1..=m {
            let mut s = CyclotomicElement::zero(&self.field);
            for k in 1..=n {
                s = s.plus(&self.coeffs[k].times(&out[n - k]));
            }
            out.push(s.times(&c0).negated());
        }
        Ok(TSeries { field: self.field.clone(), coeffs: out, degraded: self.degraded })
    }

    /// Index of the first coefficient that is nonzero at precision.
    pub fn t_adic_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// The bottom arrow Q_p(ε_n)[[t]] → Q_p(ε_{n+1})[[t]]: ε_n ↦ ε_{n+1}^p, t ↦ pt.
    /// Coefficients lie over Q_p, where φ is the identity.
    pub fn bottom_arrow(&self) -> Result<Self> {
        let target = CyclotomicField::new(self.field.prime(), self.field.level() + 1)?;
        let p = self.field.prime();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| Ok(c.embed_up(&target)?.scale(&PadicScalar::p_power(p, j as i64, crate::padic::EXACT))))
            .collect::<Result<Vec<_>>>()?;
        Ok(TSeries { field: target, coeffs, degraded: self.degraded })
    }

    /// Compares coefficients up to the common order.
    pub fn compare(&self, other: &Self) -> Result<Discrepancy> {
        let m = self.check(other)?;
        let mut equal = true;
        let mut residual: Option<Rat> = None;
        let mut precision: Option<Rat> = None;
        for j in 0..=m {
            let d = self.coeffs[j].minus(&other.coeffs[j]);
            let pr = d.precision();
            precision = Some(precision.map_or(pr, |x| x.min(pr)));
            if let Some(v) = d.val() {
                equal = false;
                residual = Some(residual.map_or(v, |x| x.min(v)));
            }
        }
        Ok(Discrepancy { equal, residual, precision: precision.expect("at least one coefficient") })
    }
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => format!("[{c}]"),
                1 => format!("[{c}]·t"),
                _ => format!("[{c}]·t^{j}"),
            })
            .collect();
        let body = if parts.is_empty() { "0".into() } else { parts.join(" + ") };
        write!(f, "{body} + O(t^{})", self.order() + 1)
    }
}
