use super::value::{max_of_terms, Exactness, SeminormValue};
use crate::error::{Error, Result};
use crate::padic::{vp_int, vp_rat, PadicScalar, Rat, EXACT};
use crate::perfect::PerfectLaurent;
use crate::witt::{specialize_x_to_p, WittVector};
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Witt length used when a Witt-side evaluator has to build a Teichmüller lift.
pub const DEFAULT_WITT_LEN: usize = 4;

/// Elements the evaluators act on.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Integer(BigInt),
    Rational(BigRational),
    Padic(PadicScalar),
    /// Polynomial in T, coefficients lowest degree first.
    Poly(Vec<Element>),
    Perfect(PerfectLaurent),
    Witt(WittVector<PerfectLaurent>),
}

impl Element {
    fn kind(&self) -> &'static str {
        match self {
            Element::Integer(_) => "integer",
            Element::Rational(_) => "rational",
            Element::Padic(_) => "p-adic scalar",
            Element::Poly(_) => "polynomial",
            Element::Perfect(_) => "perfect-ring element",
            Element::Witt(_) => "Witt vector",
        }
    }

    fn prime_hint(&self) -> u64 {
        match self {
            Element::Padic(x) => x.prime(),
            Element::Perfect(x) => x.field().prime(),
            Element::Witt(w) => w.prime(),
            Element::Poly(c) => c.iter().map(|e| e.prime_hint()).max().unwrap_or(0),
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WittKind {
    /// λ(α): Σ p^i [x_i] ↦ max_i p^{-i} α(x_i).
    LambdaOf(Box<PointEvaluator>),
    /// Specialization W(R) → W(R)/([X] − p) followed by the p-adic norm.
    XToP { len: usize },
}

/// A point of a Gel'fand spectrum, given by how it evaluates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointEvaluator {
    /// 0 ↦ 0, everything else ↦ 1.
    Trivial,
    /// The p-adic absolute value on Z, Q and Q_p.
    PadicAbs { p: u64 },
    /// Σ a_i T^i ↦ max_i base(a_i).
    Gauss(Box<PointEvaluator>),
    /// f ↦ max_i r^i |f^{(i)}(z)/i!|_p, with r = p^{-radius_neg_log} (`None` for r = 0).
    Disc { center: PadicScalar, radius_neg_log: Option<Rat> },
    /// p^a m ↦ (1 − c)^a on Z.
    Comb { p: u64, c: BigRational },
    /// x ↦ p^{-scale · v_X(x)} on the perfected Laurent ring.
    XAdic { p: u64, scale: Rat },
    Witt(WittKind),
    /// x ↦ β([x]) for an evaluator β on W(R).
    MuOf(Box<PointEvaluator>),
    /// x ↦ base(x)^c.
    Power(Box<PointEvaluator>, Rat),
}

fn domain<T>(e: &str, x: &Element) -> Result<T> {
    Err(Error::Domain(format!("{e} cannot evaluate a {}", x.kind())))
}

fn check_prime(expected: u64, got: u64) -> Result<()> {
    if got != 0 && got != expected {
        return Err(Error::FieldMismatch(format!("evaluator for p={expected} applied to p={got}")));
    }
    Ok(())
}

/// −log_p of |x|_p with precision bookkeeping.
fn padic_abs(p: u64, x: &Element) -> Result<SeminormValue> {
    match x {
        Element::Integer(n) => Ok(SeminormValue::from_neg_log(p, vp_int(p, n).map(Rat::from_integer))),
        Element::Rational(q) => Ok(SeminormValue::from_neg_log(p, vp_rat(p, q).map(Rat::from_integer))),
        Element::Padic(s) => {
            check_prime(p, s.prime())?;
            Ok(match s.val() {
                Some(v) => SeminormValue::p_power(p, Rat::from_integer(v)),
                None if s.is_exact() => SeminormValue::zero(p),
                None => SeminormValue::p_power(p, Rat::from_integer(s.precision()))
                    .with_exactness(Exactness::UpperBound),
            })
        }
        _ => domain("the p-adic absolute value", x),
    }
}

fn to_padic(p: u64, x: &Element, prec: i64) -> Result<PadicScalar> {
    match x {
        Element::Integer(n) => Ok(PadicScalar::exact_int(p, n.clone())),
        Element::Rational(q) => PadicScalar::from_ratio(p, q, EXACT).or_else(|_| PadicScalar::from_ratio(p, q, prec)),
        Element::Padic(s) => {
            check_prime(p, s.prime())?;
            Ok(s.clone())
        }
        _ => domain("a disc point", x),
    }
}

/// Divided derivatives f^{(i)}(z)/i! = Σ_k C(k, i) a_k z^{k−i}.
fn taylor_coefficients(coeffs: &[PadicScalar], z: &PadicScalar) -> Vec<PadicScalar> {
    let p = z.prime();
    let d = coeffs.len();
    let mut zpow = vec![PadicScalar::exact_int(p, 1)];
    for k in 1..d {
        zpow.push(&zpow[k - 1] * z);
    }
    (0..d)
        .map(|i| {
            let mut acc = PadicScalar::exact_zero(p);
            for k in i..d {
                let c = PadicScalar::exact_int(p, binomial(BigInt::from(k), BigInt::from(i)));
                acc = &acc + &(&(&c * &coeffs[k]) * &zpow[k - i]);
            }
            acc
        })
        .collect()
}

impl PointEvaluator {
    pub fn trivial() -> Self {
        PointEvaluator::Trivial
    }

    pub fn x_adic(p: u64) -> Self {
        PointEvaluator::XAdic { p, scale: Rat::from_integer(1) }
    }

    pub fn lambda_of(base: PointEvaluator) -> Self {
        PointEvaluator::Witt(WittKind::LambdaOf(Box::new(base)))
    }

    pub fn x_to_p(len: usize) -> Self {
        PointEvaluator::Witt(WittKind::XToP { len })
    }

    pub fn mu_of(beta: PointEvaluator) -> Self {
        PointEvaluator::MuOf(Box::new(beta))
    }

    pub fn eval(&self, x: &Element) -> Result<SeminormValue> {
        match self {
            PointEvaluator::Trivial => {
                let p = x.prime_hint();
                let zero = match x {
                    Element::Integer(n) => n.is_zero(),
                    Element::Rational(q) => q.is_zero(),
                    Element::Poly(c) => {
                        let mut all = true;
                        for e in c {
                            all &= PointEvaluator::Trivial.eval(e)?.is_zero();
                        }
                        all
                    }
                    Element::Perfect(r) => r.is_zero(),
                    Element::Witt(w) => w.is_zero(),
                    Element::Padic(s) if s.is_exact() || !s.is_zero() => s.is_zero(),
                    Element::Padic(_) => {
                        return Ok(SeminormValue::one(p).with_exactness(Exactness::UpperBound));
                    }
                };
                Ok(if zero { SeminormValue::zero(p) } else { SeminormValue::one(p) })
            }
            PointEvaluator::PadicAbs { p } => padic_abs(*p, x),
            PointEvaluator::Gauss(base) => match x {
                Element::Poly(c) => {
                    let terms = c.iter().map(|a| base.eval(a)).collect::<Result<Vec<_>>>()?;
                    Ok(max_of_terms(x.prime_hint(), terms))
                }
                _ => domain("a Gauss norm", x),
            },
            PointEvaluator::Disc { center, radius_neg_log } => {
                let Element::Poly(c) = x else { return domain("a disc point", x) };
                let p = center.prime();
                let prec = c
                    .iter()
                    .filter_map(|e| if let Element::Padic(s) = e { Some(s.precision()) } else { None })
                    .min()
                    .unwrap_or(EXACT)
                    .min(center.precision())
                    .min(64);
                let coeffs = c.iter().map(|e| to_padic(p, e, prec)).collect::<Result<Vec<_>>>()?;
                let b = taylor_coefficients(&coeffs, center);
                let mut terms = Vec::with_capacity(b.len());
                for (i, bi) in b.iter().enumerate() {
                    let ri = match radius_neg_log {
                        Some(r) => SeminormValue::p_power(p, *r * Rat::from_integer(i as i64)),
                        None if i == 0 => SeminormValue::one(p),
                        None => SeminormValue::zero(p),
                    };
                    terms.push(padic_abs(p, &Element::Padic(bi.clone()))?.mul(&ri)?);
                }
                Ok(max_of_terms(p, terms))
            }
            PointEvaluator::Comb { p, c } => {
                let Element::Integer(n) = x else { return domain("a comb point", x) };
                if c < &BigRational::zero() || c > &BigRational::one() {
                    return Err(Error::Invalid("comb parameter must lie in [0, 1]".into()));
                }
                match vp_int(*p, n) {
                    None => Ok(SeminormValue::zero(*p)),
                    Some(a) => {
                        let base = BigRational::one() - c;
                        let v = num_traits::pow(base, a as usize);
                        SeminormValue::from_rational(*p, &v)
                    }
                }
            }
            PointEvaluator::XAdic { p, scale } => {
                let Element::Perfect(r) = x else { return domain("the X-adic point", x) };
                check_prime(*p, r.field().prime())?;
                Ok(SeminormValue::from_neg_log(*p, r.x_adic_valuation().map(|v| v * scale)))
            }
            PointEvaluator::Witt(kind) => {
                let Element::Witt(w) = x else { return domain("a Witt-side point", x) };
                match kind {
                    WittKind::LambdaOf(base) => lambda_eval(base, w, false),
                    WittKind::XToP { .. } => {
                        let s = specialize_x_to_p(w)?;
                        let p = w.prime();
                        Ok(match s.valuation {
                            Some(v) => SeminormValue::p_power(p, v),
                            None => SeminormValue::p_power(p, Rat::from_integer(s.bound))
                                .with_exactness(Exactness::UpperBound),
                        })
                    }
                }
            }
            PointEvaluator::MuOf(beta) => {
                let Element::Perfect(r) = x else { return domain("a μ-image", x) };
                mu_map(beta, r)
            }
            PointEvaluator::Power(base, c) => base.eval(x)?.pow(*c),
        }
    }
}

/// λ(α) on a truncated Witt vector. With `tail_is_zero` the components beyond
/// the truncation are known to vanish (as for Teichmüller lifts).
fn lambda_eval(alpha: &PointEvaluator, w: &WittVector<PerfectLaurent>, tail_is_zero: bool) -> Result<SeminormValue> {
    let p = w.prime();
    let n = w.len() as i64;
    let mut terms = Vec::with_capacity(w.len() + 1);
    for (i, xi) in w.components().iter().enumerate() {
        let a = alpha.eval(&Element::Perfect(xi.clone()))?;
        terms.push(a.mul(&SeminormValue::p_power(p, Rat::from_integer(i as i64)))?);
    }
    if !tail_is_zero {
        // α is bounded by the trivial norm, so the hidden tail is at most p^{-n}
        terms.push(SeminormValue::p_power(p, Rat::from_integer(n)).with_exactness(Exactness::UpperBound));
    }
    Ok(max_of_terms(p, terms))
}

/// λ(α)(w) = max_i p^{-i} α(x_i), flagged as an upper bound p^{-n} when the
/// represented terms do not beat the truncation.
pub fn lambda_map(alpha: &PointEvaluator, w: &WittVector<PerfectLaurent>) -> Result<SeminormValue> {
    lambda_eval(alpha, w, false)
}

/// μ(β)(r) = β([r]).
pub fn mu_map(beta: &PointEvaluator, r: &PerfectLaurent) -> Result<SeminormValue> {
    match beta {
        PointEvaluator::Witt(WittKind::LambdaOf(alpha)) => {
            lambda_eval(alpha, &WittVector::teichmuller(r, DEFAULT_WITT_LEN), true)
        }
        PointEvaluator::Witt(WittKind::XToP { len }) => {
            beta.eval(&Element::Witt(WittVector::teichmuller(r, *len)))
        }
        PointEvaluator::Power(base, c) => mu_map(base, r)?.pow(*c),
        _ => beta.eval(&Element::Witt(WittVector::teichmuller(r, DEFAULT_WITT_LEN))),
    }
}

/// ω = p^{-p/(p−1)}.
pub fn omega(p: u64) -> SeminormValue {
    SeminormValue::p_power(p, Rat::new(p as i64, p as i64 - 1))
}

/// log_ω ρ for ρ a power of p.
pub fn log_omega(p: u64, rho: &SeminormValue) -> Result<Rat> {
    if !rho.is_p_power() {
        return Err(Error::NotRepresentable("log_ω of a value that is not a power of p".into()));
    }
    let v = rho.neg_log_p().ok_or_else(|| Error::Invalid("log_ω of 0".into()))?;
    Ok(v * Rat::new(p as i64 - 1, p as i64))
}

/// The evaluator x ↦ e(x)^c.
pub fn seminorm_power(e: &PointEvaluator, c: Rat) -> Result<PointEvaluator> {
    if c <= Rat::from_integer(0) {
        return Err(Error::Invalid("seminorm power needs a positive exponent".into()));
    }
    Ok(match e {
        PointEvaluator::Trivial => PointEvaluator::Trivial,
        _ if c == Rat::from_integer(1) => e.clone(),
        PointEvaluator::Power(base, c0) => PointEvaluator::Power(base.clone(), *c0 * c),
        _ => PointEvaluator::Power(Box::new(e.clone()), c),
    })
}

/// ṽ_r(w) = min_i {i + r v_X(x_i)}, as the value p^{-ṽ_r}; reported as an
/// upper bound p^{-n} when no represented term lies below the truncation.
pub fn vr_tilde(w: &WittVector<PerfectLaurent>, r: Rat) -> Result<SeminormValue> {
    if r <= Rat::from_integer(0) {
        return Err(Error::Invalid("ṽ_r needs r > 0".into()));
    }
    let alpha = PointEvaluator::XAdic { p: w.prime(), scale: r };
    lambda_map(&alpha, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perfect::FqField;

    fn int(n: i64) -> Element {
        Element::Integer(BigInt::from(n))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn comb_points() {
        let c0 = PointEvaluator::Comb { p: 3, c: q(0, 1) };
        assert_eq!(c0.eval(&int(18)).unwrap(), SeminormValue::one(3));
        let c = PointEvaluator::Comb { p: 2, c: q(1, 2) };
        assert_eq!(c.eval(&int(12)).unwrap().to_rational(), Some(q(1, 4)));
        let c = PointEvaluator::Comb { p: 2, c: q(1, 3) };
        assert_eq!(c.eval(&int(12)).unwrap().to_rational(), Some(q(4, 9)));
        let c1 = PointEvaluator::Comb { p: 5, c: q(1, 1) };
        assert!(c1.eval(&int(10)).unwrap().is_zero());
        assert_eq!(c1.eval(&int(7)).unwrap(), SeminormValue::one(5));
    }

    #[test]
    fn disc_points() {
        let p = 3;
        let f = Element::Poly(vec![int(9), int(3), int(1)]);
        let gauss = PointEvaluator::Gauss(Box::new(PointEvaluator::PadicAbs { p }));
        let d01 = PointEvaluator::Disc { center: PadicScalar::exact_zero(p), radius_neg_log: Some(Rat::from_integer(0)) };
        assert_eq!(d01.eval(&f).unwrap(), gauss.eval(&f).unwrap());
        let d00 = PointEvaluator::Disc { center: PadicScalar::exact_zero(p), radius_neg_log: None };
        assert_eq!(d00.eval(&f).unwrap().neg_log_p(), Some(Rat::from_integer(2)));
        // (T − 3)^2 at z = 3, r = p^{-1}: only the T^2 term survives, giving p^{-2}
        let g = Element::Poly(vec![int(9), int(-6), int(1)]);
        let d = PointEvaluator::Disc { center: PadicScalar::exact_int(p, 3), radius_neg_log: Some(Rat::from_integer(1)) };
        assert_eq!(d.eval(&g).unwrap().neg_log_p(), Some(Rat::from_integer(2)));
    }

    #[test]
    fn lambda_examples() {
        let f = FqField::new(2, 1).unwrap();
        let one = PerfectLaurent::one(&f, false);
        let x = PerfectLaurent::x(&f, false);
        let xa = PointEvaluator::x_adic(2);
        let w = WittVector::teichmuller(&x, 3).add(&WittVector::teichmuller(&one, 3).mul_p()).unwrap();
        assert_eq!(lambda_map(&xa, &w).unwrap(), SeminormValue::p_power(2, Rat::from_integer(1)));
        let w2 = WittVector::teichmuller(&x, 3).mul_p().mul_p();
        assert_eq!(lambda_map(&PointEvaluator::Trivial, &w2).unwrap(), SeminormValue::p_power(2, Rat::from_integer(2)));
        let w0 = WittVector::teichmuller(&x, 3);
        assert_eq!(lambda_map(&PointEvaluator::Trivial, &w0).unwrap(), SeminormValue::one(2));
    }

    #[test]
    fn mu_examples() {
        let f = FqField::new(2, 1).unwrap();
        let beta = PointEvaluator::x_to_p(3);
        let x = PerfectLaurent::x(&f, false);
        assert_eq!(mu_map(&beta, &x).unwrap(), SeminormValue::p_power(2, Rat::from_integer(1)));
        let one = PerfectLaurent::one(&f, false);
        assert_eq!(mu_map(&beta, &one).unwrap(), SeminormValue::one(2));
        let y = one.add(&PerfectLaurent::x_pow(&f, Rat::new(1, 2), false).unwrap());
        assert_eq!(mu_map(&beta, &y).unwrap(), SeminormValue::one(2));
    }

    #[test]
    fn strict_inequality_witness() {
        let f = FqField::new(2, 1).unwrap();
        let one = PerfectLaurent::one(&f, false);
        let x = PerfectLaurent::x(&f, false);
        let beta = PointEvaluator::x_to_p(3);
        let w = WittVector::teichmuller(&one, 3).mul_p().sub(&WittVector::teichmuller(&x, 3)).unwrap();
        let lm = lambda_map(&PointEvaluator::mu_of(beta.clone()), &w).unwrap();
        assert_eq!(lm, SeminormValue::p_power(2, Rat::from_integer(1)));
        let b = beta.eval(&Element::Witt(w)).unwrap();
        assert_eq!(b.exactness(), Exactness::UpperBound);
        assert_eq!(b.cmp_value(&lm), std::cmp::Ordering::Less);
    }

    #[test]
    fn vr_and_powers() {
        let f = FqField::new(2, 1).unwrap();
        let x = PerfectLaurent::x(&f, true);
        let w = WittVector::teichmuller(&x, 3);
        assert_eq!(vr_tilde(&w, Rat::new(2, 3)).unwrap().neg_log_p(), Some(Rat::new(2, 3)));
        let pw = WittVector::teichmuller(&PerfectLaurent::one(&f, true), 3).mul_p();
        assert_eq!(vr_tilde(&pw, Rat::new(5, 1)).unwrap().neg_log_p(), Some(Rat::from_integer(1)));
        let mixed = WittVector::new(vec![
            PerfectLaurent::x_pow(&f, Rat::new(1, 2), true).unwrap(),
            x.inv().unwrap(),
            PerfectLaurent::zero(&f, true),
        ])
        .unwrap();
        assert_eq!(vr_tilde(&mixed, Rat::from_integer(1)).unwrap().neg_log_p(), Some(Rat::from_integer(0)));

        let e = PointEvaluator::x_adic(2);
        let rho = omega(2).pow(Rat::from_integer(2)).unwrap();
        let c = log_omega(2, &rho).unwrap();
        assert_eq!(c, Rat::from_integer(2));
        let e2 = seminorm_power(&e, c).unwrap();
        assert_eq!(e2.eval(&Element::Perfect(PerfectLaurent::x(&f, false))).unwrap().neg_log_p(), Some(Rat::from_integer(2)));
        assert_eq!(seminorm_power(&PointEvaluator::Trivial, c).unwrap(), PointEvaluator::Trivial);
        assert_eq!(seminorm_power(&e, Rat::from_integer(1)).unwrap(), e);
        assert!(seminorm_power(&e, Rat::from_integer(0)).is_err());
    }
}
