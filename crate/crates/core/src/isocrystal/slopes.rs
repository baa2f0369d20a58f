//! Slope factorization of characteristic polynomials over Q_p.

use crate::error::{Error, Result};
use crate::padic::{newton_polygon_of, p_pow, FieldElement, NewtonPolygon, PadicScalar, Rat};
use crate::perfect::fp_poly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Newton polygon of a polynomial whose coefficients are only known to
/// precision. Coefficients that vanish at precision `N` are points `(i, ≥ N)`;
/// the polygon is returned only if none of them could lower the hull.
pub(crate) fn resolved_newton<F: FieldElement>(coeffs: &[F]) -> Result<NewtonPolygon> {
    let vals: Vec<Option<Rat>> = coeffs.iter().map(|c| c.valuation()).collect();
    if vals[0].is_none() {
        return Err(Error::Precision("constant coefficient vanishes at precision".into()));
    }
    let poly = newton_polygon_of(&vals)?;
    for (i, c) in coeffs.iter().enumerate() {
        if c.valuation().is_none() && poly.eval(Rat::from_integer(i as i64)) > c.abs_precision() {
            return Err(Error::Precision(format!(
                "coefficient {i} is unresolved and could change the Newton polygon"
            )));
        }
    }
    Ok(poly)
}

fn fp_divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let m = fp_poly::trim(m.to_vec());
    let mut r = fp_poly::trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = fp_poly::inv_mod(m[dm], p);
    let mut q = vec![0u64; r.len().saturating_sub(dm).max(1)];
    while r.len() > dm {
        let d = r.len() - 1;
        let c = (r[d] as u128 * lead_inv as u128 % p as u128) as u64;
        q[d - dm] = c;
        for (i, &mi) in m.iter().enumerate() {
            let idx = d - dm + i;
            r[idx] = ((r[idx] as u128 + (p - c) as u128 * mi as u128) % p as u128) as u64;
        }
        r = fp_poly::trim(r);
    }
    (fp_poly::trim(q), r)
}

/// `(s, t)` with `s·a + t·b = 1` for coprime `a`, `b` over F_p.
fn fp_ext_gcd(a: &[u64], b: &[u64], p: u64) -> Option<(Vec<u64>, Vec<u64>)> {
    let (mut r0, mut r1) = (fp_poly::trim(a.to_vec()), fp_poly::trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_poly::sub(&s0, &fp_poly::mul(&q, &s1, p), p);
        let t2 = fp_poly::sub(&t0, &fp_poly::mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = fp_poly::inv_mod(r0[0], p);
    let scale = |v: Vec<u64>| fp_poly::trim(v.into_iter().map(|x| x * c % p).collect());
    Some((scale(s0), scale(t0)))
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.into_iter().map(|x| x.mod_floor(m)).collect()
}

fn to_fp(a: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    fp_poly::trim(a.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
}

/// Factor of a monic polynomial over Q_p collecting the roots of valuation `m`.
///
/// Returns the monic factor's coefficients (lowest first) together with the
/// number of roots it has; `m` must be an integer slope of the Newton polygon.
pub(crate) fn slope_factor(f: &[PadicScalar], poly: &NewtonPolygon, m: i64) -> Result<Vec<PadicScalar>> {
    let p = f[0].prime();
    let d = f.len() - 1;
    let mr = Rat::from_integer(m);
    let roots = poly.root_valuations();
    let mult = roots.iter().filter(|&&v| v == mr).count();
    let g_start = roots.iter().filter(|&&v| v > mr).count();
    if mult == 0 {
        return Err(Error::Invalid(format!("no roots of valuation {m}")));
    }
    // f_m(U) = p^{-c} f(p^m U), primitive in Z_p[U]
    let c = poly.eval(Rat::from_integer(g_start as i64)) + mr * Rat::from_integer(g_start as i64);
    let c = c.to_integer();
    let scaled: Vec<PadicScalar> = f
        .iter()
        .enumerate()
        .map(|(i, a)| a * &PadicScalar::p_power(p, i as i64 * m - c, crate::padic::EXACT))
        .collect();
    let work = scaled.iter().map(|a| a.precision()).min().unwrap().min(1 << 20);
    if work < 1 {
        return Err(Error::Precision("no p-adic digits left for the slope factorization".into()));
    }
    let modulus = p_pow(p, work as u32);
    let mut big_f = Vec::with_capacity(d + 1);
    for a in &scaled {
        big_f.push(a.with_precision(work).lift_integer()?.mod_floor(&modulus));
    }
    let fbar = to_fp(&big_f, p);
    let top = g_start + mult;
    if fbar.len() != top + 1 || fbar[..g_start].iter().any(|&x| x != 0) || fbar[g_start] == 0 {
        return Err(Error::Inconsistent("reduction does not match the Newton polygon".into()));
    }
    let lc = fbar[top];
    let lc_inv = fp_poly::inv_mod(lc, p);
    let g0: Vec<u64> = fbar[g_start..].iter().map(|&x| x * lc_inv % p).collect();
    let mut h0 = vec![0u64; g_start + 1];
    h0[g_start] = lc;
    let (_, t) = fp_ext_gcd(&g0, &h0, p)
        .ok_or_else(|| Error::Inconsistent("slope factors are not coprime mod p".into()))?;
    let mut g: Vec<BigInt> = g0.iter().map(|&x| BigInt::from(x)).collect();
    let mut h: Vec<BigInt> = h0.iter().map(|&x| BigInt::from(x)).collect();
    let mut pk = BigInt::from(p);
    for _ in 1..work {
        let gh = zmul(&g, &h, &modulus);
        let mut e: Vec<BigInt> = (0..big_f.len().max(gh.len()))
            .map(|i| {
                let a = big_f.get(i).cloned().unwrap_or_default();
                let b = gh.get(i).cloned().unwrap_or_default();
                (a - b).mod_floor(&modulus)
            })
            .collect();
        for x in e.iter_mut() {
            debug_assert!((&*x % &pk).is_zero());
            *x = &*x / &pk;
        }
        let ebar = to_fp(&e, p);
        if !ebar.is_empty() {
            let dg = fp_poly::rem(&fp_poly::mul(&t, &ebar, p), &g0, p);
            let (dh, r) = fp_divrem(&fp_poly::sub(&ebar, &fp_poly::mul(&h0, &dg, p), p), &g0, p);
            debug_assert!(r.is_empty());
            for (i, &x) in dg.iter().enumerate() {
                g[i] = (&g[i] + &pk * x).mod_floor(&modulus);
            }
            if h.len() < dh.len() {
                h.resize(dh.len(), BigInt::zero());
            }
            for (i, &x) in dh.iter().enumerate() {
                h[i] = (&h[i] + &pk * x).mod_floor(&modulus);
            }
        }
        pk *= p;
    }
    // back to T = p^m U: P(T) = p^{m·mult} g(T / p^m)
    Ok(g.iter()
        .enumerate()
        .map(|(i, gi)| {
            PadicScalar::from_int(p, gi.clone(), work)
                .checked_mul(&PadicScalar::p_power(p, m * (mult - i) as i64, crate::padic::EXACT))
                .expect("same prime")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64], prec: i64) -> Vec<PadicScalar> {
        c.iter().map(|&x| PadicScalar::from_int(p, x, prec)).collect()
    }

    #[test]
    fn factors_by_slope() {
        // (T − 1)(T − p)(T − p^2 − p^3) for p = 3
        let p = 3;
        let r = [1i64, 3, 9 + 27];
        let c = [-r[0] * r[1] * r[2], r[0] * r[1] + r[0] * r[2] + r[1] * r[2], -(r[0] + r[1] + r[2]), 1];
        let f = poly(p, &c, 20);
        let np = resolved_newton(&f).unwrap();
        for (m, root) in [(0, 1), (1, 3), (2, 36)] {
            let g = slope_factor(&f, &np, m).unwrap();
            assert_eq!(g.len(), 2);
            let expect = PadicScalar::from_int(p, -root, 20);
            assert!(g[0].eq_at_precision(&expect), "slope {m}: {}", g[0]);
        }
    }

    #[test]
    fn unresolved_coefficients() {
        let p = 2;
        // T^2 − p with the middle coefficient known only to be ≡ 0 mod 2^10
        let f = vec![PadicScalar::from_int(p, -2, 10), PadicScalar::zero(p, 10), PadicScalar::exact_int(p, 1)];
        assert_eq!(resolved_newton(&f).unwrap().slopes().len(), 2);
        let g = vec![PadicScalar::from_int(p, 1 << 12, 20), PadicScalar::zero(p, 2), PadicScalar::exact_int(p, 1)];
        assert!(resolved_newton(&g).is_err());
    }
}
