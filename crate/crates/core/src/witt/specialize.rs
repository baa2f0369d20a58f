use super::WittVector;
use crate::error::{Error, Result};
use crate::padic::{PadicScalar, Rat, UnramifiedElement, UnramifiedField};
use crate::perfect::{FqElement, PerfectLaurent};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Valuation of the image of a Witt vector under W(R) → W(R)/([X] − p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedValue {
    /// `None` when the image vanishes modulo p^bound.
    pub valuation: Option<Rat>,
    /// The image is known modulo p^bound (the Witt length).
    pub bound: i64,
}

impl SpecializedValue {
    pub fn is_exact(&self) -> bool {
        self.valuation.is_some()
    }
}

/// Elements Σ_a c_a p^a of Z_q[p^{1/p^∞}] with a ∈ [0, 1) and c_a ∈ Z_q,
/// kept modulo p^n.
struct ORing {
    field: Arc<UnramifiedField>,
    n: i64,
}

type OElem = BTreeMap<Rat, UnramifiedElement>;

impl ORing {
    fn normalize(&self, a: Rat, c: UnramifiedElement) -> Option<(Rat, UnramifiedElement)> {
        let whole = a.floor().to_integer();
        let frac = a - Rat::from_integer(whole);
        let c = c.scale(&PadicScalar::p_power(self.field.prime(), whole, crate::padic::EXACT));
        let c = c.with_precision(self.n);
        match c.val() {
            Some(v) if Rat::from_integer(v) + frac < Rat::from_integer(self.n) => Some((frac, c)),
            _ => None,
        }
    }

    fn insert(&self, out: &mut OElem, a: Rat, c: UnramifiedElement) {
        let Some((a, c)) = self.normalize(a, c) else { return };
        let sum = match out.remove(&a) {
            Some(old) => crate::padic::FieldElement::plus(&old, &c),
            None => c,
        };
        if let Some((a, s)) = self.normalize(a, sum) {
            out.insert(a, s);
        }
    }

    fn mul(&self, x: &OElem, y: &OElem) -> OElem {
        let mut out = OElem::new();
        for (a, c) in x {
            for (b, d) in y {
                self.insert(&mut out, a + b, crate::padic::FieldElement::times(c, d));
            }
        }
        out
    }

    fn pow_p_k(&self, x: &OElem, k: u32) -> OElem {
        let p = self.field.prime();
        let mut cur = x.clone();
        for _ in 0..k {
            let mut r = cur.clone();
            for _ in 1..p {
                r = self.mul(&r, &cur);
            }
            cur = r;
        }
        cur
    }

    /// θ([x]) modulo p^{k+1}, via (lift of x^{1/p^k})^{p^k}.
    fn theta_teichmuller(&self, x: &PerfectLaurent, k: u32) -> OElem {
        let p = self.field.prime();
        let pk = Rat::from_integer(p.pow(k) as i64);
        let mut lift = OElem::new();
        for (e, c) in x.terms() {
            let mut root: FqElement = c.clone();
            for _ in 0..k {
                root = root.frobenius_inv();
            }
            let w = UnramifiedElement::teichmuller(&self.field, &root);
            self.insert(&mut lift, e / pk, w);
        }
        self.pow_p_k(&lift, k)
    }
}

/// Valuation of the image of `w` in W(R)/([X] − p), the completion of
/// ∪ Z_q[p^{1/p^n}]; results at or beyond p^{len} are reported as bounds.
pub fn specialize_x_to_p(w: &WittVector<PerfectLaurent>) -> Result<SpecializedValue> {
    let n = w.len() as i64;
    if w.components().iter().any(|c| c.has_negative_exponents()) {
        return Err(Error::Domain("X-to-p specialization needs nonnegative exponents".into()));
    }
    let fq = w.components()[0].field().clone();
    let h: Vec<i64> = fq.modulus().iter().map(|&c| c as i64).collect();
    let field = UnramifiedField::with_modulus(fq.prime(), &h, n + 2)?;
    let ring = ORing { field: field.clone(), n };
    let mut total = OElem::new();
    for (i, x) in w.components().iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let k = (n - i as i64 - 1) as u32;
        let img = ring.theta_teichmuller(x, k);
        let shift = PadicScalar::p_power(fq.prime(), i as i64, crate::padic::EXACT);
        for (a, c) in img {
            ring.insert(&mut total, a, c.scale(&shift));
        }
    }
    let valuation = total
        .iter()
        .filter_map(|(a, c)| c.val().map(|v| Rat::from_integer(v) + a))
        .min()
        .filter(|v| *v < Rat::from_integer(n));
    Ok(SpecializedValue { valuation, bound: n })
}
