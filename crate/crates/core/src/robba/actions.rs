use super::element::RobbaElement;
use super::tail::TailBound;
use crate::error::{Error, Result};
use crate::padic::{vp_factorial, PadicScalar, Rat};
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_term(acc: &mut BTreeMap<i64, PadicScalar>, k: i64, c: PadicScalar) {
    let p = c.prime();
    let e = acc.entry(k).or_insert_with(|| PadicScalar::exact_zero(p));
    *e = &*e + &c;
}

fn coefficient_floor(c: &PadicScalar) -> Rat {
    Rat::from_integer(c.val().unwrap_or(c.precision().min(1 << 40)))
}

/// Frobenius φ(Σ a_i π^i) = Σ a_i ((1+π)^p − 1)^i on Q_p coefficients.
///
/// Negative powers use ((1+π)^p − 1)^{−k} = π^{−pk} (1 + u)^{−k} with
/// u = Σ_{0<j<p} binom(p, j) π^{j−p}, summed up to u^L with L the coefficient
/// precision; v_s(u) ≥ 1 − (p−1)s bounds the rest, so the result lives on
/// r' = min(r/p, 1/(p−1)). Every computed coefficient is kept; those past
/// the input window are only known up to the tail's coefficient bound.
pub fn phi_act(f: &RobbaElement) -> Result<RobbaElement> {
    let p = f.prime();
    let pi = p as i64;
    let cap = Rat::new(1, pi - 1);
    let r_out = (f.r() / Rat::from_integer(pi)).min(cap);
    let mut tail = f.tail().rescale(Rat::from_integer(pi), Some(cap));
    let Some((lo, hi)) = f.window() else {
        if f.tail().is_zero() {
            return RobbaElement::new(p, r_out, f.precision(), BTreeMap::new(), tail);
        }
        return Err(Error::WindowExhausted("nothing stored to apply φ to".into()));
    };
    let mut acc = BTreeMap::new();
    if hi >= 0 {
        // Q = (1+π)^p − 1
        let q: Vec<BigInt> = (0..=p).map(|k| if k == 0 { BigInt::zero() } else { binomial(BigInt::from(p), BigInt::from(k)) }).collect();
        let mut qi = vec![BigInt::one()];
        for i in 0..=hi {
            if i >= lo {
                if let Some(a) = f.coeffs().get(&i) {
                    for (k, c) in qi.iter().enumerate() {
                        if !c.is_zero() {
                            add_term(&mut acc, k as i64, a * &PadicScalar::exact_int(p, c.clone()));
                        }
                    }
                }
            }
            qi = int_mul(&qi, &q);
        }
    }
    if lo < 0 {
        let big_l = f.precision().clamp(1, 200) as usize;
        // u as a polynomial in w = π^{-1}: binom(p, j) w^{p−j}
        let mut u = vec![BigInt::zero(); p as usize];
        for j in 1..p {
            u[(p - j) as usize] = binomial(BigInt::from(p), BigInt::from(j));
        }
        let mut u_pows = vec![vec![BigInt::one()]];
        for l in 1..=big_l {
            let next = int_mul(&u_pows[l - 1], &u);
            u_pows.push(next);
        }
        for k in 1..=(-lo) {
            let Some(a) = f.coeffs().get(&-k) else { continue };
            // (1+u)^{-k} = Σ_l binom(−k, l) u^l, binom(−k, l) = (−1)^l binom(k+l−1, l)
            let mut series = vec![BigInt::zero(); big_l * (p as usize - 1) + 1];
            for (l, ul) in u_pows.iter().enumerate() {
                let mut b = binomial(BigInt::from(k as usize + l - 1), BigInt::from(l));
                if l % 2 == 1 {
                    b = -b;
                }
                for (e, c) in ul.iter().enumerate() {
                    series[e] += &b * c;
                }
            }
            for (e, c) in series.iter().enumerate() {
                if !c.is_zero() {
                    add_term(&mut acc, -(pi * k) - e as i64, a * &PadicScalar::exact_int(p, c.clone()));
                }
            }
            let l1 = Rat::from_integer(big_l as i64 + 1);
            tail = tail
                .with_line(coefficient_floor(a) + l1, -(l1 * Rat::from_integer(pi - 1) + Rat::from_integer(pi * k)))
                .cap(cap);
        }
    }
    RobbaElement::new(p, r_out, f.precision(), acc, tail)
}

fn series_mul(a: &[PadicScalar], b: &[PadicScalar], deg: usize) -> Vec<PadicScalar> {
    let p = a[0].prime();
    let mut out = vec![PadicScalar::exact_zero(p); deg + 1];
    for (i, x) in a.iter().enumerate().take(deg + 1) {
        if x.is_zero() && x.is_exact() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn series_inv(a: &[PadicScalar], deg: usize) -> Result<Vec<PadicScalar>> {
    let c0 = a[0].inv()?;
    let mut out = vec![c0.clone()];
    for n in 1..=deg {
        let mut s = PadicScalar::exact_zero(a[0].prime());
        for k in 1..=n.min(a.len() - 1) {
            s = &s + &(&a[k] * &out[n - k]);
        }
        out.push(-&(&s * &c0));
    }
    Ok(out)
}

/// binom(γ, j) for j = 0..=n, computed at a working precision that leaves
/// `prec` digits after the divisions by j.
pub(crate) fn binomials(gamma: &PadicScalar, n: usize, prec: i64) -> Result<Vec<PadicScalar>> {
    let p = gamma.prime();
    let work = prec + vp_factorial(p, n as u64) + 2;
    let mut out = vec![PadicScalar::exact_int(p, 1)];
    for j in 1..=n {
        let num = gamma - &PadicScalar::exact_int(p, j as i64 - 1);
        let inv_j = PadicScalar::from_ratio(p, &BigRational::new(BigInt::one(), BigInt::from(j)), work)?;
        let next = &(&out[j - 1] * &num) * &inv_j;
        out.push(next);
    }
    Ok(out)
}

/// γ(Σ a_i π^i) = Σ a_i ((1+π)^γ − 1)^i for γ ∈ Z_p^×.
///
/// (1+π)^γ − 1 = π·V with V = Σ binom(γ, k+1) π^k a unit of Z_p[[π]], so the
/// result keeps the input window and everything dropped is integral past it.
pub fn gamma_act(f: &RobbaElement, gamma: &PadicScalar) -> Result<RobbaElement> {
    let p = f.prime();
    if gamma.prime() != p {
        return Err(Error::FieldMismatch("γ over a different prime".into()));
    }
    if gamma.val() != Some(0) {
        return Err(Error::Domain(format!("γ = {gamma} is not a p-adic unit")));
    }
    let Some((lo, hi)) = f.window() else {
        return Ok(f.clone());
    };
    let deg = (hi - lo) as usize;
    let b = binomials(gamma, deg + 1, f.precision())?;
    let v: Vec<PadicScalar> = b[1..].to_vec();
    let v_inv = series_inv(&v, deg)?;
    let mut acc = BTreeMap::new();
    let mut floor: Option<Rat> = None;
    let mut emit = |i: i64, pow: &[PadicScalar], acc: &mut BTreeMap<i64, PadicScalar>| {
        if let Some(a) = f.coeffs().get(&i) {
            for (k, c) in pow.iter().enumerate().take((hi - i) as usize + 1) {
                add_term(acc, i + k as i64, a * c);
            }
            let fl = coefficient_floor(a);
            floor = Some(floor.map_or(fl, |x: Rat| x.min(fl)));
        }
    };
    let mut pow = vec![PadicScalar::exact_int(p, 1)];
    for i in 0..=hi.max(-1) {
        if i >= lo {
            emit(i, &pow, &mut acc);
        }
        pow = series_mul(&pow, &v, deg);
    }
    let mut pow = vec![PadicScalar::exact_int(p, 1)];
    for k in 1..=(-lo) {
        pow = series_mul(&pow, &v_inv, deg);
        if -k <= hi {
            emit(-k, &pow, &mut acc);
        }
    }
    let mut tail: TailBound = f.tail().clone();
    if let Some(fl) = floor {
        tail = tail.with_line(fl, Rat::from_integer(hi + 1));
    }
    RobbaElement::new(p, f.r(), f.precision(), acc, tail)
}

#[cfg(test)]
mod tests {
    use super::super::element::t_element;
    use super::*;

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(a, b)
    }

    #[test]
    fn phi_of_pi() {
        let f = RobbaElement::pi(3, r(1, 1), 20);
        let g = phi_act(&f).unwrap();
        // (1+π)^3 − 1 = 3π + 3π^2 + π^3
        for (k, c) in [(1, 3), (2, 3), (3, 1)] {
            assert!(g.coefficient(k).eq_at_precision(&PadicScalar::exact_int(3, c)));
        }
        assert_eq!(g.r(), r(1, 3));
    }

    #[test]
    fn phi_of_t_is_pt() {
        for p in [2u64, 3, 5] {
            let t = t_element(p, 8, 10).unwrap();
            let lhs = phi_act(&t).unwrap();
            let rhs = t.scale(&PadicScalar::exact_int(p, p)).unwrap();
            let a = lhs.agrees_with(&rhs).unwrap();
            assert!(a.equal, "p = {p}: {a:?}");
        }
    }

    #[test]
    fn phi_inverse_pi() {
        // φ(π^{-1}) φ(π) = 1
        let p = 3;
        let a = RobbaElement::from_ints(p, r(1, 4), 12, &[(-1, 1)]).unwrap();
        let b = RobbaElement::pi(p, r(1, 4), 12);
        let prod = phi_act(&a).unwrap().mul(&phi_act(&b).unwrap()).unwrap();
        let one = RobbaElement::from_ints(p, r(1, 4), 12, &[(0, 1)]).unwrap();
        let ag = prod.agrees_with(&one).unwrap();
        assert!(ag.equal, "{ag:?}");
    }

    #[test]
    fn gamma_identity_and_t() {
        let p = 3;
        let t = t_element(p, 8, 10).unwrap();
        let same = gamma_act(&t, &PadicScalar::exact_int(p, 1)).unwrap();
        assert!(same.agrees_with(&t).unwrap().equal);
        let g = PadicScalar::from_int(p, 4, 12);
        let lhs = gamma_act(&t, &g).unwrap();
        let rhs = t.scale(&g).unwrap();
        let a = lhs.agrees_with(&rhs).unwrap();
        assert!(a.equal, "{a:?}");
    }

    #[test]
    fn gamma_rejects_non_units() {
        let t = t_element(3, 4, 10).unwrap();
        assert!(gamma_act(&t, &PadicScalar::exact_int(3, 3)).is_err());
    }

    #[test]
    fn binomial_coefficients() {
        let b = binomials(&PadicScalar::exact_int(5, 7), 4, 20).unwrap();
        for (j, c) in [1i64, 7, 21, 35, 35].iter().enumerate() {
            assert!(b[j].eq_at_precision(&PadicScalar::exact_int(5, *c)), "j = {j}");
        }
    }
}
