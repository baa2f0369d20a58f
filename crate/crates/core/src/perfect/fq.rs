use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Polynomial arithmetic over F_p on coefficient vectors, lowest degree first.
pub(crate) mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * a as u128 % p as u128) as u64;
            }
            a = (a as u128 * a as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(out)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let d = r.len() - 1;
            let c = (r[d] as u128 * lead_inv as u128 % p as u128) as u64;
            for (i, &mi) in m.iter().enumerate() {
                let idx = d - dm + i;
                r[idx] = ((r[idx] as u128 + (p - c) as u128 * mi as u128) % p as u128) as u64;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `base^e mod m`.
    pub fn pow_rem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        result
    }

    /// Irreducibility of a monic `h` over F_p.
    pub fn is_irreducible(h: &[u64], p: u64) -> bool {
        let h = trim(h.to_vec());
        let s = h.len() - 1;
        if s == 0 {
            return false;
        }
        let mut ypk = vec![0, 1];
        for _ in 1..=s / 2 {
            ypk = pow_rem(&ypk, p, &h, p);
            let diff = sub(&ypk, &[0, 1], p);
            if gcd(&h, &diff, p).len() > 1 {
                return false;
            }
        }
        true
    }
}

/// The field F_q = F_p[y]/(h), q = p^s.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqField {
    p: u64,
    modulus: Vec<u64>,
}

impl FqField {
    /// Uses the lexicographically first monic irreducible polynomial of degree `s`.
    pub fn new(p: u64, s: usize) -> Result<Arc<Self>> {
        Self::with_modulus(p, default_modulus(p, s)?)
    }

    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if !crate::padic::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        let m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(Error::Invalid("modulus must be monic of positive degree".into()));
        }
        if !fp_poly::is_irreducible(&m, p) {
            return Err(Error::Reducible);
        }
        Ok(Arc::new(FqField { p, modulus: m }))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }
}

/// First monic irreducible polynomial of degree `s` over F_p, ordered by its
/// coefficient vector read as a base-p number.
pub fn default_modulus(p: u64, s: usize) -> Result<Vec<u64>> {
    if s == 0 {
        return Err(Error::Invalid("degree must be positive".into()));
    }
    if s == 1 {
        return Ok(vec![0, 1]);
    }
    let count = p.checked_pow(s as u32).ok_or_else(|| Error::Invalid("field too large".into()))?;
    for code in 0..count {
        let mut h = Vec::with_capacity(s + 1);
        let mut c = code;
        for _ in 0..s {
            h.push(c % p);
            c /= p;
        }
        h.push(1);
        if fp_poly::is_irreducible(&h, p) {
            return Ok(h);
        }
    }
    Err(Error::Reducible)
}

/// Element of F_q stored as coordinates in the basis 1, y, ..., y^{s-1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqElement {
    field: Arc<FqField>,
    coords: Vec<u64>,
}

impl FqElement {
    pub fn zero(field: &Arc<FqField>) -> Self {
        FqElement { field: field.clone(), coords: vec![0; field.degree()] }
    }

    pub fn one(field: &Arc<FqField>) -> Self {
        Self::from_u64(field, 1)
    }

    pub fn from_u64(field: &Arc<FqField>, c: u64) -> Self {
        let mut coords = vec![0; field.degree()];
        coords[0] = c % field.p;
        FqElement { field: field.clone(), coords }
    }

    pub fn from_i64(field: &Arc<FqField>, c: i64) -> Self {
        let p = field.p as i64;
        Self::from_u64(field, c.rem_euclid(p) as u64)
    }

    /// Coordinates are reduced mod p; missing ones are zero, extra ones are folded in.
    pub fn from_coords(field: &Arc<FqField>, coords: &[u64]) -> Self {
        let p = field.p;
        let v: Vec<u64> = coords.iter().map(|c| c % p).collect();
        let r = fp_poly::rem(&v, &field.modulus, p);
        let mut out = vec![0; field.degree()];
        out[..r.len()].copy_from_slice(&r);
        FqElement { field: field.clone(), coords: out }
    }

    /// The class of y.
    pub fn generator(field: &Arc<FqField>) -> Self {
        Self::from_coords(field, &[0, 1])
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn prime(&self) -> u64 {
        self.field.p
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "F_q elements from different fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.field.p;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| (a + b) % p).collect();
        FqElement { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        let coords = self.coords.iter().map(|a| (p - a) % p).collect();
        FqElement { field: self.field.clone(), coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.field.p;
        if self.field.degree() == 1 {
            let c = (self.coords[0] as u128 * other.coords[0] as u128 % p as u128) as u64;
            return FqElement { field: self.field.clone(), coords: vec![c] };
        }
        let prod = fp_poly::mul(&fp_poly::trim(self.coords.clone()), &fp_poly::trim(other.coords.clone()), p);
        Self::from_coords(&self.field, &fp_poly::rem(&prod, &self.field.modulus, p))
    }

    pub fn scale(&self, c: u64) -> Self {
        self.mul(&Self::from_u64(&self.field, c))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// The p-power map.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p)
    }

    /// Inverse of the p-power map, computed as x^{p^{s-1}}.
    pub fn frobenius_inv(&self) -> Self {
        let mut x = self.clone();
        for _ in 1..self.field.degree() {
            x = x.frobenius();
        }
        x
    }

    /// Every element of the field, in coordinate order.
    pub fn all(field: &Arc<FqField>) -> Vec<Self> {
        let q = field.order();
        (0..q)
            .map(|mut code| {
                let mut c = Vec::with_capacity(field.degree());
                for _ in 0..field.degree() {
                    c.push(code % field.p);
                    code /= field.p;
                }
                FqElement { field: field.clone(), coords: c }
            })
            .collect()
    }
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        let mut parts = vec![];
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 if c == 1 => "y".to_string(),
                1 => format!("{c}y"),
                _ if c == 1 => format!("y^{i}"),
                _ => format!("{c}y^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(default_modulus(3, 2).unwrap(), vec![1, 0, 1]);
        assert!(fp_poly::is_irreducible(&default_modulus(5, 3).unwrap(), 5));
        assert!(!fp_poly::is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn f4_frobenius_table() {
        let f = FqField::new(2, 2).unwrap();
        let g = FqElement::generator(&f);
        let g1 = g.add(&FqElement::one(&f));
        assert_eq!(g.mul(&g), g1);
        assert_eq!(g1.frobenius(), g);
        assert_eq!(g.frobenius_inv(), g1);
    }

    #[test]
    fn inverses_in_f27() {
        let f = FqField::new(3, 3).unwrap();
        for x in FqElement::all(&f).into_iter().skip(1) {
            assert!(x.mul(&x.inv().unwrap()).is_one());
            assert_eq!(x.frobenius().frobenius_inv(), x);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(FqField::with_modulus(2, vec![1, 0, 1]).unwrap_err(), Error::Reducible);
    }
}
