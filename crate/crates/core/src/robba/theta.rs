use super::actions::phi_act;
use super::element::RobbaElement;
use super::tseries::{Discrepancy, TSeries};
use crate::error::{Error, Result};
use crate::padic::{vp_factorial, CyclotomicElement, CyclotomicField, Rat};

/// θ_n: substitute 1+π = ε_n·exp(t), i.e. π ↦ (ε_n − 1) + ε_n(exp(t) − 1), to order m.
///
/// Needs r ≥ v_p(ε_n − 1) = 1/(p^{n−1}(p−1)). The unstored part of f
/// contributes to the t^j coefficient with valuation at least
/// T(v_n) − j·v_n − v_p(j!), where T is the tail bound; coefficients are
/// capped there.
pub fn theta_n(f: &RobbaElement, n: u32, m: usize) -> Result<TSeries> {
    let p = f.prime();
    let field = CyclotomicField::new(p, n)?;
    let vn = field.x_valuation();
    if f.r() < vn {
        return Err(Error::Domain(format!("θ_{n} needs r ≥ {vn}, but r = {}", f.r())));
    }
    let tail = f.tail().eval(vn)?;
    let bound = |j: usize| tail.map(|t| t - Rat::from_integer(j as i64) * vn - Rat::from_integer(vp_factorial(p, j as u64)));
    if let Some(b) = bound(m) {
        if b < Rat::from_integer(0) {
            return Err(Error::WindowExhausted(format!(
                "the tail only fixes the t^{m} coefficient modulo valuation {b}; store more terms or lower m"
            )));
        }
    }
    let work = f.precision() + vp_factorial(p, m as u64) + 1;
    let e = TSeries::exp_minus_one(&field, m, work)?;
    let eps = CyclotomicElement::epsilon(&field);
    let x = CyclotomicElement::x(&field);
    let big_pi = TSeries::constant(x, m).add(&e.scale(&eps))?;
    let mut acc = TSeries::zero(&field, m);
    if let Some((lo, hi)) = f.window() {
        let mut pow = TSeries::constant(CyclotomicElement::one(&field), m);
        for i in 0..=hi.max(-1) {
            if let Some(a) = f.coeffs().get(&i) {
                if i >= lo {
                    acc = acc.add(&pow.scale_scalar(a))?;
                }
            }
            if i < hi {
                pow = pow.mul(&big_pi)?;
            }
        }
        if lo < 0 {
            let inv = big_pi.inverse()?;
            let mut pow = TSeries::constant(CyclotomicElement::one(&field), m);
            for k in 1..=-lo {
                pow = pow.mul(&inv)?;
                if let Some(a) = f.coeffs().get(&-k) {
                    acc = acc.add(&pow.scale_scalar(a))?;
                }
            }
        }
    }
    acc.mark_degraded(e.is_degraded());
    if tail.is_some() {
        for (j, c) in acc.coeffs_mut().iter_mut().enumerate() {
            *c = c.cap_valuation(bound(j).expect("tail present"));
        }
    }
    Ok(acc)
}

/// Both paths around the base-change square.
#[derive(Clone, Debug)]
pub struct DiagramCheck {
    pub discrepancy: Discrepancy,
    /// θ_{n+1}(φ(f)).
    pub lhs: TSeries,
    /// Bottom arrow applied to θ_n(f).
    pub rhs: TSeries,
}

impl DiagramCheck {
    pub fn equal(&self) -> bool {
        self.discrepancy.equal
    }
}

/// Checks θ_{n+1}(φ(f)) = (bottom arrow)(θ_n(f)) to order m.
pub fn base_change_diagram_check(f: &RobbaElement, n: u32, m: usize) -> Result<DiagramCheck> {
    let p = f.prime() as i64;
    if f.r() > Rat::new(p, p - 1) {
        return Err(Error::Domain(format!("the square is stated for r ≤ {}, got {}", Rat::new(p, p - 1), f.r())));
    }
    let lhs = theta_n(&phi_act(f)?, n + 1, m)?;
    let rhs = theta_n(f, n, m)?.bottom_arrow()?;
    let discrepancy = lhs.compare(&rhs)?;
    Ok(DiagramCheck { discrepancy, lhs, rhs })
}
