use super::{FqElement, FqField};
use crate::error::{Error, Result};
use crate::padic::Rat;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Finite sums Σ c_e X^e with e ∈ Z[1/p] and c_e ∈ F_q.
///
/// When `laurent` is false the element lives in ∪ F_q[X^{1/p^n}] and negative
/// exponents are rejected at construction.
#[derive(Clone, PartialEq)]
pub struct PerfectLaurent {
    field: Arc<FqField>,
    terms: BTreeMap<Rat, FqElement>,
    laurent: bool,
}

fn denominator_is_p_power(p: u64, e: &Rat) -> bool {
    let mut d = *e.denom();
    while d % p as i64 == 0 {
        d /= p as i64;
    }
    d == 1
}

impl PerfectLaurent {
    pub fn zero(field: &Arc<FqField>, laurent: bool) -> Self {
        PerfectLaurent { field: field.clone(), terms: BTreeMap::new(), laurent }
    }

    pub fn constant(c: &FqElement, laurent: bool) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Rat::from_integer(0), c.clone());
        }
        PerfectLaurent { field: c.field().clone(), terms, laurent }
    }

    pub fn one(field: &Arc<FqField>, laurent: bool) -> Self {
        Self::constant(&FqElement::one(field), laurent)
    }

    pub fn monomial(c: &FqElement, e: Rat, laurent: bool) -> Result<Self> {
        let p = c.prime();
        if !denominator_is_p_power(p, &e) {
            return Err(Error::Invalid(format!("exponent {e} has a denominator prime to {p}")));
        }
        if !laurent && e < Rat::from_integer(0) {
            return Err(Error::Invalid(format!("negative exponent {e} in a non-Laurent element")));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c.clone());
        }
        Ok(PerfectLaurent { field: c.field().clone(), terms, laurent })
    }

    /// The variable X.
    pub fn x(field: &Arc<FqField>, laurent: bool) -> Self {
        Self::monomial(&FqElement::one(field), Rat::from_integer(1), laurent).unwrap()
    }

    /// X^e with coefficient 1.
    pub fn x_pow(field: &Arc<FqField>, e: Rat, laurent: bool) -> Result<Self> {
        Self::monomial(&FqElement::one(field), e, laurent)
    }

    pub fn from_terms(
        field: &Arc<FqField>,
        terms: impl IntoIterator<Item = (Rat, FqElement)>,
        laurent: bool,
    ) -> Result<Self> {
        let mut acc = Self::zero(field, laurent);
        for (e, c) in terms {
            acc = acc.add(&Self::monomial(&c, e, laurent)?);
        }
        Ok(acc)
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    pub fn terms(&self) -> &BTreeMap<Rat, FqElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().next().is_some_and(|e| *e < Rat::from_integer(0))
    }

    /// Smallest exponent with nonzero coefficient; `None` for zero.
    pub fn x_adic_valuation(&self) -> Option<Rat> {
        self.terms.keys().next().copied()
    }

    /// Coefficient of X^e.
    pub fn coeff(&self, e: &Rat) -> FqElement {
        self.terms.get(e).cloned().unwrap_or_else(|| FqElement::zero(&self.field))
    }

    fn insert_add(terms: &mut BTreeMap<Rat, FqElement>, e: Rat, c: FqElement) {
        match terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                if !c.is_zero() {
                    terms.insert(e, c);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, *e, c.clone());
        }
        PerfectLaurent { field: self.field.clone(), terms, laurent: self.laurent || other.laurent }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e, c.neg())).collect();
        PerfectLaurent { field: self.field.clone(), terms, laurent: self.laurent }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                Self::insert_add(&mut terms, e1 + e2, c1.mul(c2));
            }
        }
        PerfectLaurent { field: self.field.clone(), terms, laurent: self.laurent || other.laurent }
    }

    pub fn scale(&self, c: &FqElement) -> Self {
        self.mul(&Self::constant(c, self.laurent))
    }

    pub fn pow(&self, e: u64) -> Self {
        use super::PerfectRing;
        self.pow_r(e)
    }

    /// x ↦ x^p: exponents times p, coefficients raised to the p-th power.
    pub fn frobenius(&self) -> Self {
        let p = Rat::from_integer(self.field.prime() as i64);
        let terms = self.terms.iter().map(|(e, c)| (e * p, c.frobenius())).collect();
        PerfectLaurent { field: self.field.clone(), terms, laurent: self.laurent }
    }

    /// The unique p-th root.
    pub fn pth_root(&self) -> Self {
        let p = Rat::from_integer(self.field.prime() as i64);
        let terms = self.terms.iter().map(|(e, c)| (e / p, c.frobenius_inv())).collect();
        PerfectLaurent { field: self.field.clone(), terms, laurent: self.laurent }
    }

    /// Inverse of a monomial c X^e (the only units of the Laurent ring).
    pub fn inv(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::Invalid("only monomials are invertible".into()));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if !self.laurent && *e != Rat::from_integer(0) {
            return Err(Error::Invalid("X is not invertible without the Laurent flag".into()));
        }
        Self::monomial(&c.inv()?, -e, self.laurent)
    }
}

impl fmt::Debug for PerfectLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PerfectLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let coeff = if c.coords().len() > 1 { format!("({c})") } else { c.to_string() };
                if *e == Rat::from_integer(0) {
                    coeff
                } else if c.is_one() {
                    format!("X^({e})")
                } else {
                    format!("{coeff}*X^({e})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
