//! Perfect rings of characteristic p: finite fields and the perfected Laurent ring.

mod fq;
mod laurent;

pub use fq::{default_modulus, FqElement, FqField};
pub(crate) use fq::fp_poly;
pub use laurent::PerfectLaurent;

/// Ring operations needed by Witt vectors over a perfect F_p-algebra.
pub trait PerfectRing: Clone + std::fmt::Debug + PartialEq + Send + Sync {
    fn prime(&self) -> u64;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_r(&self, other: &Self) -> Self;
    fn mul_r(&self, other: &Self) -> Self;
    fn neg_r(&self) -> Self;
    fn is_zero_r(&self) -> bool;
    /// x ↦ x^p.
    fn frobenius_r(&self) -> Self;
    /// Inverse of x ↦ x^p.
    fn pth_root_r(&self) -> Self;
    /// Image of an integer (reduced mod p).
    fn from_u64_like(&self, c: u64) -> Self;

    fn sub_r(&self, other: &Self) -> Self {
        self.add_r(&other.neg_r())
    }

    fn pow_r(&self, mut e: u64) -> Self {
        let p = self.prime();
        let mut result = self.one_like();
        let mut base = self.clone();
        // digits in base p, using Frobenius for the p-power steps
        while e > 0 {
            let d = e % p;
            for _ in 0..d {
                result = result.mul_r(&base);
            }
            e /= p;
            if e > 0 {
                base = base.frobenius_r();
            }
        }
        result
    }
}

impl PerfectRing for FqElement {
    fn prime(&self) -> u64 {
        self.field().prime()
    }
    fn zero_like(&self) -> Self {
        FqElement::zero(self.field())
    }
    fn one_like(&self) -> Self {
        FqElement::one(self.field())
    }
    fn add_r(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_r(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_r(&self) -> Self {
        self.neg()
    }
    fn is_zero_r(&self) -> bool {
        self.is_zero()
    }
    fn frobenius_r(&self) -> Self {
        self.frobenius()
    }
    fn pth_root_r(&self) -> Self {
        self.frobenius_inv()
    }
    fn from_u64_like(&self, c: u64) -> Self {
        FqElement::from_u64(self.field(), c)
    }
}

impl PerfectRing for PerfectLaurent {
    fn prime(&self) -> u64 {
        self.field().prime()
    }
    fn zero_like(&self) -> Self {
        PerfectLaurent::zero(self.field(), self.is_laurent())
    }
    fn one_like(&self) -> Self {
        PerfectLaurent::constant(&FqElement::one(self.field()), self.is_laurent())
    }
    fn add_r(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_r(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_r(&self) -> Self {
        self.neg()
    }
    fn is_zero_r(&self) -> bool {
        self.is_zero()
    }
    fn frobenius_r(&self) -> Self {
        self.frobenius()
    }
    fn pth_root_r(&self) -> Self {
        self.pth_root()
    }
    fn from_u64_like(&self, c: u64) -> Self {
        PerfectLaurent::constant(&FqElement::from_u64(self.field(), c), self.is_laurent())
    }
}
