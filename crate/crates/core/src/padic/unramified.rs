use super::{p_pow, FieldElement, PadicScalar, Rat, EXACT};
use crate::error::{Error, Result};
use crate::perfect::{default_modulus, FqElement, FqField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Extra p-adic digits carried by the cached Frobenius image.
const GUARD_DIGITS: i64 = 16;

/// Integer arithmetic in Z_p[y]/(h) modulo p^k.
struct ZqMod<'a> {
    h: &'a [BigInt],
    m: BigInt,
}

impl ZqMod<'_> {
    fn s(&self) -> usize {
        self.h.len() - 1
    }

    fn reduce(&self, mut a: Vec<BigInt>) -> Vec<BigInt> {
        let s = self.s();
        for k in (s..a.len()).rev() {
            let c = std::mem::take(&mut a[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..s {
                a[k - s + j] -= &c * &self.h[j];
            }
        }
        a.truncate(s);
        a.resize(s, BigInt::zero());
        a.into_iter().map(|x| x.mod_floor(&self.m)).collect()
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(&self.m)).collect()
    }

    fn one(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.s()];
        v[0] = BigInt::one();
        v
    }

    fn pow(&self, a: &[BigInt], mut e: u64) -> Vec<BigInt> {
        let mut result = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// Evaluates a polynomial with integer coefficients at `z`.
    fn eval(&self, poly: &[BigInt], z: &[BigInt]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.s()];
        for c in poly.iter().rev() {
            acc = self.mul(&acc, z);
            acc[0] = (&acc[0] + c).mod_floor(&self.m);
        }
        acc
    }

    /// Inverse of a unit, starting from its inverse mod p.
    fn inv_unit(&self, u: &[BigInt], fq: &Arc<FqField>, digits: i64) -> Result<Vec<BigInt>> {
        let p = fq.prime();
        let bar: Vec<u64> = u
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).try_into().unwrap())
            .collect();
        let inv0 = FqElement::from_coords(fq, &bar).inv()?;
        let mut x: Vec<BigInt> = inv0.coords().iter().map(|&c| BigInt::from(c)).collect();
        let two = {
            let mut t = self.one();
            t[0] = BigInt::from(2);
            t
        };
        let mut correct = 1i64;
        while correct < digits {
            let ux = self.mul(u, &x);
            x = self.mul(&x, &self.sub(&two, &ux));
            correct *= 2;
        }
        Ok(x)
    }
}

/// The unramified extension Q_p[y]/(h) of degree s, with the Frobenius lift cached.
#[derive(Debug)]
pub struct UnramifiedField {
    p: u64,
    h: Vec<BigInt>,
    prec: i64,
    fq: Arc<FqField>,
    sigma_powers: Vec<Vec<PadicScalar>>,
}

impl PartialEq for UnramifiedField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h
    }
}

impl UnramifiedField {
    /// Degree-`s` extension using the default modulus of [`default_modulus`].
    pub fn new(p: u64, s: usize, prec: i64) -> Result<Arc<Self>> {
        let h: Vec<i64> = default_modulus(p, s)?.into_iter().map(|c| c as i64).collect();
        Self::with_modulus(p, &h, prec)
    }

    /// `h` is monic with integer coefficients, lowest degree first.
    pub fn with_modulus(p: u64, h: &[i64], prec: i64) -> Result<Arc<Self>> {
        if prec < 1 {
            return Err(Error::Invalid("field precision must be positive".into()));
        }
        if h.last() != Some(&1) || h.len() < 2 {
            return Err(Error::Invalid("modulus must be monic of positive degree".into()));
        }
        let hbar: Vec<u64> = h.iter().map(|c| c.rem_euclid(p as i64) as u64).collect();
        let fq = FqField::with_modulus(p, hbar)?;
        let hb: Vec<BigInt> = h.iter().map(|&c| BigInt::from(c)).collect();
        let s = h.len() - 1;
        let digits = prec + GUARD_DIGITS;
        let zq = ZqMod { h: &hb, m: p_pow(p, digits as u32) };
        let sigma_y = if s == 1 {
            vec![(-&hb[0]).mod_floor(&zq.m)]
        } else {
            // Newton iteration on h starting from y^p
            let y = FqElement::generator(&fq).frobenius();
            let mut z: Vec<BigInt> = y.coords().iter().map(|&c| BigInt::from(c)).collect();
            let dh: Vec<BigInt> = hb.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
            let mut correct = 1i64;
            while correct < digits {
                let num = zq.eval(&hb, &z);
                let den = zq.inv_unit(&zq.eval(&dh, &z), &fq, digits)?;
                z = zq.sub(&z, &zq.mul(&num, &den));
                correct *= 2;
            }
            z
        };
        let mut sigma_powers = Vec::with_capacity(s);
        let mut cur = zq.one();
        for _ in 0..s {
            sigma_powers.push(cur.iter().map(|c| PadicScalar::from_int(p, c.clone(), digits)).collect());
            cur = zq.mul(&cur, &sigma_y);
        }
        sigma_powers[0] = (0..s).map(|i| PadicScalar::exact_int(p, i64::from(i == 0))).collect();
        Ok(Arc::new(UnramifiedField { p, h: hb, prec, fq, sigma_powers }))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.h.len() - 1
    }

    /// Working precision used for constructors that do not take one.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.h
    }

    pub fn residue_field(&self) -> &Arc<FqField> {
        &self.fq
    }

    /// Coordinates of σ(y).
    pub fn sigma_y(&self) -> Vec<PadicScalar> {
        if self.degree() == 1 {
            return vec![PadicScalar::from_int(self.p, -self.h[0].clone(), self.prec + GUARD_DIGITS)];
        }
        self.sigma_powers[1].clone()
    }
}

/// Element Σ c_i y^i of an unramified extension.
#[derive(Clone)]
pub struct UnramifiedElement {
    field: Arc<UnramifiedField>,
    coords: Vec<PadicScalar>,
}

impl UnramifiedElement {
    pub fn from_coords(field: &Arc<UnramifiedField>, coords: Vec<PadicScalar>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::Invalid(format!("expected {} coordinates", field.degree())));
        }
        if coords.iter().any(|c| c.prime() != field.p) {
            return Err(Error::FieldMismatch("coordinate prime differs from field prime".into()));
        }
        Ok(UnramifiedElement { field: field.clone(), coords })
    }

    pub fn from_scalar(field: &Arc<UnramifiedField>, c: PadicScalar) -> Self {
        let mut coords = vec![PadicScalar::exact_zero(field.p); field.degree()];
        coords[0] = c;
        UnramifiedElement { field: field.clone(), coords }
    }

    /// Integer coordinates at the field's working precision.
    pub fn from_i64s(field: &Arc<UnramifiedField>, coords: &[i64]) -> Self {
        let mut cs: Vec<PadicScalar> =
            coords.iter().map(|&c| PadicScalar::from_int(field.p, c, field.prec)).collect();
        cs.resize(field.degree(), PadicScalar::zero(field.p, field.prec));
        UnramifiedElement { field: field.clone(), coords: cs }
    }

    pub fn from_int(field: &Arc<UnramifiedField>, n: i64) -> Self {
        Self::from_scalar(field, PadicScalar::from_int(field.p, n, field.prec))
    }

    pub fn exact_int(field: &Arc<UnramifiedField>, n: i64) -> Self {
        Self::from_scalar(field, PadicScalar::exact_int(field.p, n))
    }

    pub fn zero(field: &Arc<UnramifiedField>) -> Self {
        Self::exact_int(field, 0)
    }

    pub fn one(field: &Arc<UnramifiedField>) -> Self {
        Self::exact_int(field, 1)
    }

    /// Exact p^k.
    pub fn p_power(field: &Arc<UnramifiedField>, k: i64) -> Self {
        Self::from_scalar(field, PadicScalar::p_power(field.p, k, EXACT))
    }

    /// The generator y.
    pub fn generator(field: &Arc<UnramifiedField>) -> Self {
        let mut coords = vec![PadicScalar::exact_zero(field.p); field.degree()];
        if field.degree() == 1 {
            coords[0] = PadicScalar::exact_int(field.p, -field.h[0].clone());
        } else {
            coords[1] = PadicScalar::exact_int(field.p, 1);
        }
        UnramifiedElement { field: field.clone(), coords }
    }

    /// Teichmüller lift of a residue class, at the field's working precision.
    pub fn teichmuller(field: &Arc<UnramifiedField>, c: &FqElement) -> Self {
        let p = field.p;
        let digits = field.prec;
        let zq = ZqMod { h: &field.h, m: p_pow(p, digits as u32) };
        let mut x: Vec<BigInt> = c.coords().iter().map(|&v| BigInt::from(v)).collect();
        let q = field.fq.order();
        for _ in 0..digits {
            x = zq.pow(&x, q);
        }
        let coords = x.into_iter().map(|v| PadicScalar::from_int(p, v, digits)).collect();
        UnramifiedElement { field: field.clone(), coords }
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.field
    }

    pub fn coords(&self) -> &[PadicScalar] {
        &self.coords
    }

    pub fn prime(&self) -> u64 {
        self.field.p
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn val(&self) -> Option<i64> {
        self.coords.iter().filter_map(|c| c.val()).min()
    }

    pub fn precision(&self) -> i64 {
        self.coords.iter().map(|c| c.precision()).min().unwrap()
    }

    pub fn with_precision(&self, prec: i64) -> Self {
        let coords = self.coords.iter().map(|c| c.with_precision(prec)).collect();
        UnramifiedElement { field: self.field.clone(), coords }
    }

    /// True when all coordinates past the constant one vanish at precision.
    pub fn is_in_base(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch("unramified elements from different fields".into()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_impl(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_impl(other))
    }

    fn add_impl(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        UnramifiedElement { field: self.field.clone(), coords }
    }

    fn sub_impl(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        UnramifiedElement { field: self.field.clone(), coords }
    }

    fn neg_impl(&self) -> Self {
        let coords = self.coords.iter().map(|a| -a).collect();
        UnramifiedElement { field: self.field.clone(), coords }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let s = self.field.degree();
        let p = self.field.p;
        if s == 1 {
            return UnramifiedElement {
                field: self.field.clone(),
                coords: vec![&self.coords[0] * &other.coords[0]],
            };
        }
        let mut prod = vec![PadicScalar::exact_zero(p); 2 * s - 1];
        for (i, a) in self.coords.iter().enumerate() {
            for (j, b) in other.coords.iter().enumerate() {
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        for k in (s..2 * s - 1).rev() {
            let c = std::mem::replace(&mut prod[k], PadicScalar::exact_zero(p));
            if c.is_zero() && c.is_exact() {
                continue;
            }
            for j in 0..s {
                let hj = PadicScalar::exact_int(p, self.field.h[j].clone());
                prod[k - s + j] = &prod[k - s + j] - &(&c * &hj);
            }
        }
        prod.truncate(s);
        UnramifiedElement { field: self.field.clone(), coords: prod }
    }

    /// Multiplies every coordinate by a scalar.
    pub fn scale(&self, c: &PadicScalar) -> Self {
        let coords = self.coords.iter().map(|a| a * c).collect();
        UnramifiedElement { field: self.field.clone(), coords }
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self.val().ok_or(Error::DivisionByZero)?;
        let p = self.field.p;
        if self.field.degree() == 1 {
            return Ok(Self::from_scalar(&self.field, self.coords[0].inv()?));
        }
        let rel = self.precision().saturating_sub(v);
        let digits = if rel >= EXACT / 2 { self.field.prec + GUARD_DIGITS } else { rel };
        let shift = PadicScalar::p_power(p, -v, EXACT);
        let u: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| (c * &shift).lift_integer())
            .collect::<Result<_>>()?;
        let zq = ZqMod { h: &self.field.h, m: p_pow(p, digits as u32) };
        let u: Vec<BigInt> = u.into_iter().map(|x| x.mod_floor(&zq.m)).collect();
        let x = zq.inv_unit(&u, &self.field.fq, digits)?;
        let back = PadicScalar::p_power(p, -v, EXACT);
        let coords = x.into_iter().map(|c| &PadicScalar::from_int(p, c, digits) * &back).collect();
        Ok(UnramifiedElement { field: self.field.clone(), coords })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        let mut k = e;
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

    /// The Frobenius σ, lifting x ↦ x^p on the residue field.
    pub fn frobenius(&self) -> Self {
        let s = self.field.degree();
        if s == 1 {
            return self.clone();
        }
        let p = self.field.p;
        let mut out = vec![PadicScalar::exact_zero(p); s];
        for (i, c) in self.coords.iter().enumerate() {
            for (k, sp) in self.field.sigma_powers[i].iter().enumerate() {
                out[k] = &out[k] + &(c * sp);
            }
        }
        UnramifiedElement { field: self.field.clone(), coords: out }
    }

    /// σ^k for any integer k (σ has order s).
    pub fn frobenius_pow(&self, k: i64) -> Self {
        let s = self.field.degree() as i64;
        let mut x = self.clone();
        for _ in 0..k.rem_euclid(s) {
            x = x.frobenius();
        }
        x
    }

    /// Reduction to the residue field; requires an integral element.
    pub fn reduce(&self) -> Result<FqElement> {
        let r: Vec<u64> = self.coords.iter().map(|c| c.residue()).collect::<Result<_>>()?;
        Ok(FqElement::from_coords(&self.field.fq, &r))
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.check(other).is_ok() && self.sub_impl(other).is_zero()
    }
}

impl fmt::Debug for UnramifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for UnramifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if i == 0 { format!("({c})") } else { format!("({c})*y^{i}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FieldElement for UnramifiedElement {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn plus(&self, other: &Self) -> Self {
        self.check(other).expect("mixed fields");
        self.add_impl(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.check(other).expect("mixed fields");
        self.sub_impl(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.check(other).expect("mixed fields");
        self.mul_impl(other)
    }
    fn negated(&self) -> Self {
        self.neg_impl()
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn is_zero(&self) -> bool {
        UnramifiedElement::is_zero(self)
    }
    fn valuation(&self) -> Option<Rat> {
        self.val().map(Rat::from_integer)
    }
    fn abs_precision(&self) -> Rat {
        Rat::from_integer(self.precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_y_for_cube_roots_of_unity() {
        let f = UnramifiedField::with_modulus(2, &[1, 1, 1], 3).unwrap();
        let y = UnramifiedElement::generator(&f);
        let sy = y.frobenius().with_precision(3);
        // y^2 is itself a root of h, so the lift is y^2 = -1 - y exactly
        assert_eq!(sy.coords()[0].lift_integer().unwrap(), BigInt::from(7));
        assert_eq!(sy.coords()[1].lift_integer().unwrap(), BigInt::from(7));
        let h_at = sy.times(&sy).plus(&sy).plus(&UnramifiedElement::one(&f));
        assert!(h_at.is_zero());
        assert_eq!(sy.reduce().unwrap(), FqElement::generator(f.residue_field()).frobenius());
    }

    #[test]
    fn sigma_has_order_s() {
        let f = UnramifiedField::new(3, 3, 12).unwrap();
        let a = UnramifiedElement::from_i64s(&f, &[2, 5, 7]);
        assert!(a.frobenius_pow(3).eq_at_precision(&a));
        assert!(!a.frobenius().eq_at_precision(&a));
    }

    #[test]
    fn inverse_and_valuation() {
        let f = UnramifiedField::new(5, 2, 10).unwrap();
        let a = UnramifiedElement::from_i64s(&f, &[25, 50]);
        assert_eq!(a.val(), Some(2));
        let b = UnramifiedElement::from_i64s(&f, &[3, 1]).times(&a);
        let prod = b.times(&b.inv().unwrap());
        assert!(prod.eq_at_precision(&UnramifiedElement::one(&f)));
        assert!(UnramifiedElement::from_i64s(&f, &[0, 0]).inv().is_err());
    }

    #[test]
    fn rational_base_is_fixed() {
        let f = UnramifiedField::new(7, 1, 8).unwrap();
        let a = UnramifiedElement::from_int(&f, 123);
        assert!(a.frobenius().eq_at_precision(&a));
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        let f = UnramifiedField::new(3, 2, 8).unwrap();
        let c = FqElement::generator(f.residue_field());
        let w = UnramifiedElement::teichmuller(&f, &c);
        assert!(w.pow(9).unwrap().eq_at_precision(&w));
        assert_eq!(w.reduce().unwrap(), c);
    }
}
