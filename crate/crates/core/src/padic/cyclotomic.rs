use super::{rat_ceil, FieldElement, PadicScalar, Rat};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

/// Minimal polynomial of ε_n − 1, i.e. ((1+X)^{p^n} − 1)/((1+X)^{p^{n−1}} − 1),
/// lowest degree first.
pub fn eisenstein_poly(p: u64, n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "level must be at least 1");
    // Φ_{p^n}(1+X) = Σ_{k<p} (1+X)^{k p^{n-1}}
    let step = p.pow(n - 1);
    let deg = (p - 1) * step;
    let mut out = vec![BigInt::zero(); deg as usize + 1];
    for k in 0..p {
        let m = k * step;
        for (i, slot) in out.iter_mut().enumerate().take(m as usize + 1) {
            *slot += binomial(BigInt::from(m), BigInt::from(i));
        }
    }
    out
}

/// Q_p(ε_n) with basis 1, x, ..., x^{e−1}, x = ε_n − 1, e = p^{n−1}(p−1).
#[derive(Debug)]
pub struct CyclotomicField {
    p: u64,
    level: u32,
    poly: Vec<BigInt>,
}

impl CyclotomicField {
    pub fn new(p: u64, level: u32) -> Result<Arc<Self>> {
        if level == 0 {
            return Err(Error::Invalid("cyclotomic level must be at least 1".into()));
        }
        if !super::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(Arc::new(CyclotomicField { p, level, poly: eisenstein_poly(p, level) }))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Ramification index p^{n−1}(p−1).
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Valuation of x = ε_n − 1.
    pub fn x_valuation(&self) -> Rat {
        Rat::new(1, self.degree() as i64)
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.level == other.level
    }
}

#[derive(Clone)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    coords: Vec<PadicScalar>,
}

impl CyclotomicElement {
    pub fn from_coords(field: &Arc<CyclotomicField>, coords: Vec<PadicScalar>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::Invalid(format!("expected {} coordinates", field.degree())));
        }
        Ok(CyclotomicElement { field: field.clone(), coords })
    }

    pub fn from_scalar(field: &Arc<CyclotomicField>, c: PadicScalar) -> Self {
        let mut coords = vec![PadicScalar::exact_zero(field.p); field.degree()];
        coords[0] = c;
        CyclotomicElement { field: field.clone(), coords }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self::from_scalar(field, PadicScalar::exact_zero(field.p))
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_scalar(field, PadicScalar::exact_int(field.p, 1))
    }

    /// x = ε_n − 1.
    pub fn x(field: &Arc<CyclotomicField>) -> Self {
        let mut coords = vec![PadicScalar::exact_zero(field.p); field.degree()];
        if field.degree() == 1 {
            coords[0] = PadicScalar::exact_int(field.p, -field.poly[0].clone());
        } else {
            coords[1] = PadicScalar::exact_int(field.p, 1);
        }
        CyclotomicElement { field: field.clone(), coords }
    }

    /// ε_n = 1 + x.
    pub fn epsilon(field: &Arc<CyclotomicField>) -> Self {
        Self::x(field).plus(&Self::one(field))
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coords(&self) -> &[PadicScalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Normalized valuation min_i (v(c_i) + i/e).
    pub fn val(&self) -> Option<Rat> {
        let e = self.field.degree() as i64;
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.val().map(|v| Rat::from_integer(v) + Rat::new(i as i64, e)))
            .min()
    }

    /// Absolute precision min_i (N_i + i/e).
    pub fn precision(&self) -> Rat {
        let e = self.field.degree() as i64;
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| Rat::from_integer(c.precision().min(1 << 40)) + Rat::new(i as i64, e))
            .min()
            .unwrap()
    }

    /// Declares everything of valuation ≥ `b` unknown.
    pub fn cap_valuation(&self, b: Rat) -> Self {
        let e = self.field.degree() as i64;
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| c.with_precision(rat_ceil(b - Rat::new(i as i64, e))))
            .collect();
        CyclotomicElement { field: self.field.clone(), coords }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        let coords = self.coords.iter().map(|a| a * c).collect();
        CyclotomicElement { field: self.field.clone(), coords }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let e = self.field.degree();
        let p = self.field.p;
        let mut prod = vec![PadicScalar::exact_zero(p); 2 * e - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() && a.is_exact() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = std::mem::replace(&mut prod[k], PadicScalar::exact_zero(p));
            if c.is_zero() && c.is_exact() {
                continue;
            }
            for j in 0..e {
                if self.field.poly[j].is_zero() {
                    continue;
                }
                let hj = PadicScalar::exact_int(p, self.field.poly[j].clone());
                prod[k - e + j] = &prod[k - e + j] - &(&c * &hj);
            }
        }
        prod.truncate(e);
        CyclotomicElement { field: self.field.clone(), coords: prod }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        result
    }

    /// Inverse by solving the multiplication-by-self linear system over Q_p.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = self.field.degree();
        let p = self.field.p;
        let mut cols = Vec::with_capacity(e);
        let mut cur = self.clone();
        let x = Self::x(&self.field);
        for _ in 0..e {
            cols.push(cur.coords.clone());
            cur = cur.mul_impl(&x);
        }
        let m = Matrix::from_cols(&cols, e);
        let mut rhs = vec![PadicScalar::exact_zero(p); e];
        rhs[0] = PadicScalar::exact_int(p, 1);
        let sol = m.solve(&Matrix::from_cols(&[rhs], e))?;
        Ok(CyclotomicElement { field: self.field.clone(), coords: sol.col(0) })
    }

    /// Image under Q_p(ε_n) → Q_p(ε_{n+1}), ε_n ↦ ε_{n+1}^p.
    pub fn embed_up(&self, target: &Arc<CyclotomicField>) -> Result<Self> {
        if target.p != self.field.p || target.level != self.field.level + 1 {
            return Err(Error::FieldMismatch("embedding goes one level up".into()));
        }
        let xn = Self::epsilon(target).pow(self.field.p).minus(&Self::one(target));
        let mut acc = Self::zero(target);
        for c in self.coords.iter().rev() {
            acc = acc.mul_impl(&xn).plus(&Self::from_scalar(target, c.clone()));
        }
        Ok(acc)
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        *self.field == *other.field && self.minus(other).is_zero()
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if i == 0 { format!("({c})") } else { format!("({c})*x^{i}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FieldElement for CyclotomicElement {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn plus(&self, other: &Self) -> Self {
        assert!(*self.field == *other.field, "mixed cyclotomic levels");
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        CyclotomicElement { field: self.field.clone(), coords }
    }
    fn minus(&self, other: &Self) -> Self {
        assert!(*self.field == *other.field, "mixed cyclotomic levels");
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        CyclotomicElement { field: self.field.clone(), coords }
    }
    fn times(&self, other: &Self) -> Self {
        assert!(*self.field == *other.field, "mixed cyclotomic levels");
        self.mul_impl(other)
    }
    fn negated(&self) -> Self {
        let coords = self.coords.iter().map(|a| -a).collect();
        CyclotomicElement { field: self.field.clone(), coords }
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn is_zero(&self) -> bool {
        CyclotomicElement::is_zero(self)
    }
    fn valuation(&self) -> Option<Rat> {
        self.val()
    }
    fn abs_precision(&self) -> Rat {
        self.precision()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(eisenstein_poly(2, 1), ints(&[2, 1]));
        assert_eq!(eisenstein_poly(3, 1), ints(&[3, 3, 1]));
        assert_eq!(eisenstein_poly(2, 2), ints(&[2, 2, 1]));
    }

    #[test]
    fn epsilon_is_a_root_of_unity() {
        for (p, n) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1)] {
            let f = CyclotomicField::new(p, n).unwrap();
            let eps = CyclotomicElement::epsilon(&f);
            let order = p.pow(n);
            assert!(eps.pow(order).eq_at_precision(&CyclotomicElement::one(&f)));
            assert!(!eps.pow(order / p).eq_at_precision(&CyclotomicElement::one(&f)));
            assert_eq!(CyclotomicElement::x(&f).val(), Some(f.x_valuation()));
        }
    }

    #[test]
    fn inverse_of_x() {
        let f = CyclotomicField::new(3, 2).unwrap();
        let x = CyclotomicElement::x(&f);
        let y = x.with_prec(20).inv().unwrap();
        assert_eq!(y.val(), Some(-f.x_valuation()));
        assert!(x.times(&y).eq_at_precision(&CyclotomicElement::one(&f)));
    }

    #[test]
    fn embedding_is_multiplicative() {
        let f1 = CyclotomicField::new(2, 2).unwrap();
        let f2 = CyclotomicField::new(2, 3).unwrap();
        let e1 = CyclotomicElement::epsilon(&f1);
        let up = e1.embed_up(&f2).unwrap();
        assert!(up.eq_at_precision(&CyclotomicElement::epsilon(&f2).pow(2)));
    }

    impl CyclotomicElement {
        fn with_prec(&self, n: i64) -> Self {
            let coords = self.coords.iter().map(|c| {
                if c.is_exact() {
                    PadicScalar::from_int(c.prime(), c.lift_integer().unwrap(), n)
                } else {
                    c.with_precision(n)
                }
            });
            CyclotomicElement { field: self.field.clone(), coords: coords.collect() }
        }
    }
}
