use super::polys::structure_polys;
use crate::error::{Error, Result};
use crate::perfect::PerfectRing;

/// Truncated Witt vector Σ_{i<n} p^i [x_i] over a perfect ring, stored by its
/// Teichmüller components x_i.
#[derive(Clone, Debug, PartialEq)]
pub struct WittVector<R> {
    comps: Vec<R>,
}

impl<R: PerfectRing> WittVector<R> {
    pub fn new(comps: Vec<R>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::Invalid("Witt vector needs at least one component".into()));
        }
        let p = comps[0].prime();
        if comps.iter().any(|c| c.prime() != p) {
            return Err(Error::FieldMismatch("components over different primes".into()));
        }
        Ok(WittVector { comps })
    }

    /// [r] = (r, 0, ..., 0).
    pub fn teichmuller(r: &R, len: usize) -> Self {
        let mut comps = vec![r.zero_like(); len.max(1)];
        comps[0] = r.clone();
        WittVector { comps }
    }

    pub fn zero(like: &R, len: usize) -> Self {
        WittVector { comps: vec![like.zero_like(); len.max(1)] }
    }

    pub fn one(like: &R, len: usize) -> Self {
        Self::teichmuller(&like.one_like(), len)
    }

    pub fn prime(&self) -> u64 {
        self.comps[0].prime()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &[R] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero_r())
    }

    /// Standard coordinates a_i = x_i^{p^i}, in which the structure polynomials are written.
    pub fn standard_coords(&self) -> Vec<R> {
        self.comps
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let mut y = x.clone();
                for _ in 0..i {
                    y = y.frobenius_r();
                }
                y
            })
            .collect()
    }

    pub fn from_standard(a: Vec<R>) -> Result<Self> {
        let comps = a
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                let mut y = x;
                for _ in 0..i {
                    y = y.pth_root_r();
                }
                y
            })
            .collect();
        Self::new(comps)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() || self.prime() != other.prime() {
            return Err(Error::Invalid("Witt vectors with different p or length".into()));
        }
        Ok(())
    }

    fn op(&self, other: &Self, sum: bool) -> Result<Self> {
        self.check(other)?;
        let polys = structure_polys(self.prime(), self.len())?;
        let c = polys.eval_ring(sum, &self.standard_coords(), &other.standard_coords());
        Self::from_standard(c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.op(other, true)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.op(other, false)
    }

    /// Additive inverse: [−x_i] componentwise for odd p, multiplication by
    /// −1 = (1, 1, 1, ...) for p = 2.
    pub fn neg(&self) -> Result<Self> {
        if self.prime() != 2 {
            return Ok(WittVector { comps: self.comps.iter().map(|c| c.neg_r()).collect() });
        }
        let minus_one = WittVector { comps: vec![self.comps[0].one_like(); self.len()] };
        self.mul(&minus_one)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    /// Multiplication by p: a shift of the Teichmüller components.
    pub fn mul_p(&self) -> Self {
        let mut comps = vec![self.comps[0].zero_like()];
        comps.extend(self.comps[..self.len() - 1].iter().cloned());
        WittVector { comps }
    }

    /// Witt vector Frobenius, componentwise p-th power.
    pub fn frobenius(&self) -> Self {
        WittVector { comps: self.comps.iter().map(|c| c.frobenius_r()).collect() }
    }

    /// Σ p^i [x_i] from explicit components, truncated or padded to `len`.
    pub fn from_teichmuller_sum(comps: &[R], len: usize) -> Result<Self> {
        let like = comps.first().ok_or_else(|| Error::Invalid("no components".into()))?;
        let mut c: Vec<R> = comps.iter().take(len).cloned().collect();
        c.resize(len, like.zero_like());
        Self::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Rat;
    use crate::perfect::{FqElement, FqField, PerfectLaurent};

    #[test]
    fn one_plus_one_is_p() {
        let f = FqField::new(2, 1).unwrap();
        let one = FqElement::one(&f);
        let a = WittVector::teichmuller(&one, 2);
        let s = a.add(&a).unwrap();
        assert_eq!(s.components(), &[FqElement::zero(&f), one.clone()]);
        assert_eq!(s.frobenius(), s);
        assert_eq!(s, a.mul_p());
    }

    #[test]
    fn teichmuller_multiplicative() {
        let f = FqField::new(3, 1).unwrap();
        let x = PerfectLaurent::x(&f, true);
        let y = PerfectLaurent::x_pow(&f, Rat::new(1, 3), true).unwrap().add(&PerfectLaurent::one(&f, true));
        let a = WittVector::teichmuller(&x, 3);
        let b = WittVector::teichmuller(&y, 3);
        assert_eq!(a.mul(&b).unwrap(), WittVector::teichmuller(&x.mul(&y), 3));
    }

    #[test]
    fn additive_inverse() {
        for p in [2u64, 3, 5] {
            let f = FqField::new(p, 1).unwrap();
            let x = PerfectLaurent::x(&f, false).add(&PerfectLaurent::one(&f, false));
            let a = WittVector::new(vec![x.clone(), x.pth_root(), PerfectLaurent::one(&f, false)]).unwrap();
            assert!(a.add(&a.neg().unwrap()).unwrap().is_zero());
            assert_eq!(a.add(&WittVector::zero(&x, 3)).unwrap(), a);
        }
    }

    #[test]
    fn frobenius_of_teichmuller() {
        let f = FqField::new(2, 1).unwrap();
        let x = PerfectLaurent::x(&f, false);
        let t = WittVector::teichmuller(&x, 3);
        assert_eq!(t.frobenius(), WittVector::teichmuller(&x.frobenius(), 3));
    }
}
