//! Property suites behind `isolab verify`.
//!
//! Every test draws from its own ChaCha8 stream of the seed, so the report is
//! a function of (suite, seed, samples) alone. Reports carry no timings.

pub mod oracle;
pub mod sample;

use crate::error::{Error, Result};
use crate::isocrystal::{Decision, FilteredIsocrystal};
use crate::padic::{newton_polygon_of, PadicScalar, Rat};
use crate::perfect::{FqField, PerfectLaurent};
use crate::presets::{preset, preset_weights, PRESETS};
use crate::robba::{base_change_diagram_check, berger_degree, gamma_act, local_modification, phi_act, t_element};
use crate::seminorm::{lambda_map, mu_map, Element, PointEvaluator, SeminormValue};
use crate::witt::{ghost_components, int_witt_op, WittStructurePolys, WittVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::cmp::Ordering;

pub const SUITES: &[&str] = &["witt", "seminorm", "isocrystal", "robba"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestOutcome {
    pub suite: &'static str,
    pub test: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// First failing case, or a numeric residual for the Robba identities.
    pub residual: Option<String>,
}

impl TestOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "test": self.test,
            "status": if self.passed { "pass" } else { "fail" },
            "cases": self.cases,
            "residual": self.residual,
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random cases per property.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 42, samples: 100 }
    }
}

struct Ctx<'a> {
    cfg: &'a VerifyConfig,
    suite: &'static str,
    out: Vec<TestOutcome>,
    stream: u64,
}

/// Tracks one property: counts cases and keeps the first failure.
struct Check {
    cases: usize,
    failure: Option<String>,
    residual: Option<String>,
}

impl Check {
    fn new() -> Self {
        Check { cases: 0, failure: None, residual: None }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn error(&mut self, e: Error) {
        self.case(false, || format!("error: {e}"));
    }
}

impl<'a> Ctx<'a> {
    fn run(&mut self, test: &'static str, body: impl FnOnce(&mut ChaCha8Rng, usize, &mut Check) -> Result<()>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(self.stream);
        self.stream += 1;
        let mut c = Check::new();
        if let Err(e) = body(&mut rng, self.cfg.samples, &mut c) {
            c.error(e);
        }
        let passed = c.failure.is_none() && c.cases > 0;
        self.out.push(TestOutcome {
            suite: self.suite,
            test,
            passed,
            cases: c.cases,
            residual: c.failure.or(c.residual),
        });
    }
}

/// Runs one suite, or all of them for `"all"`.
pub fn run(suite: &str, cfg: &VerifyConfig) -> Result<Vec<TestOutcome>> {
    let names: Vec<&'static str> = match suite {
        "all" => SUITES.to_vec(),
        s => vec![*SUITES.iter().find(|x| **x == s).ok_or_else(|| {
            Error::Invalid(format!("unknown suite \"{s}\"; expected one of witt, seminorm, robba, isocrystal, all"))
        })?],
    };
    let mut out = Vec::new();
    for name in names {
        // a suite uses the same streams whether run alone or in "all"
        let stream = 1000 * (SUITES.iter().position(|x| *x == name).expect("known") as u64 + 1);
        let mut ctx = Ctx { cfg, suite: name, out: Vec::new(), stream };
        match name {
            "witt" => witt_suite(&mut ctx),
            "seminorm" => seminorm_suite(&mut ctx),
            "isocrystal" => isocrystal_suite(&mut ctx),
            "robba" => robba_suite(&mut ctx),
            _ => unreachable!(),
        }
        out.extend(ctx.out);
    }
    Ok(out)
}

pub fn report_json(suite: &str, cfg: &VerifyConfig, outcomes: &[TestOutcome]) -> Value {
    let passed = outcomes.iter().all(|o| o.passed);
    json!({
        "report": "isolab verify v1",
        "suite": suite,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "status": if passed { "pass" } else { "fail" },
        "passed": outcomes.iter().filter(|o| o.passed).count(),
        "failed": outcomes.iter().filter(|o| !o.passed).count(),
        "tests": outcomes.iter().map(TestOutcome::to_json).collect::<Vec<_>>(),
    })
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// p-adic valuation of an integer by repeated division.
fn vp(p: u64, n: &BigInt) -> Option<i64> {
    if *n == big(0) {
        return None;
    }
    let (mut n, p, mut v) = (n.clone(), big(p as i64), 0);
    while &n % &p == big(0) {
        n /= &p;
        v += 1;
    }
    Some(v)
}

fn witt_suite(ctx: &mut Ctx) {
    ctx.run("structure_polynomials_divide_exactly", |_, _, c| {
        for p in [2u64, 3, 5] {
            for n in 1..=4 {
                let ok = WittStructurePolys::derive(p, n).is_ok();
                c.case(ok, || format!("p = {p}, n = {n}"));
            }
        }
        Ok(())
    });
    ctx.run("ghost_map_is_a_ring_homomorphism", |rng, samples, c| {
        for k in 0..samples {
            let p = [2u64, 3, 5][k % 3];
            let len = 1 + (k / 3) % 4;
            let a = sample::int_vector(rng, len, 50);
            let b = sample::int_vector(rng, len, 50);
            let (ga, gb) = (ghost_components(p, &a), ghost_components(p, &b));
            let gs = ghost_components(p, &int_witt_op(p, &a, &b, true)?);
            let gp = ghost_components(p, &int_witt_op(p, &a, &b, false)?);
            let ok = (0..len).all(|i| gs[i] == &ga[i] + &gb[i] && gp[i] == &ga[i] * &gb[i]);
            c.case(ok, || format!("p = {p}, a = {a:?}, b = {b:?}"));
        }
        Ok(())
    });
    ctx.run("teichmuller_is_multiplicative", |rng, samples, c| {
        for k in 0..samples {
            let p = [2u64, 3, 5][k % 3];
            let fq = FqField::new(p, 1 + k % 2)?;
            let x = sample::perfect(rng, &fq, true);
            let y = sample::perfect(rng, &fq, true);
            let lhs = WittVector::teichmuller(&x, 3).mul(&WittVector::teichmuller(&y, 3))?;
            let rhs = WittVector::teichmuller(&x.mul(&y), 3);
            c.case(lhs.components() == rhs.components(), || format!("x = {x:?}, y = {y:?}"));
        }
        Ok(())
    });
    ctx.run("addition_inverts_subtraction", |rng, samples, c| {
        for k in 0..samples {
            let p = [2u64, 3][k % 2];
            let fq = FqField::new(p, 1)?;
            let a = sample::witt(rng, &fq, 3, true);
            let b = sample::witt(rng, &fq, 3, true);
            let back = a.add(&b)?.sub(&b)?;
            c.case(back.components() == a.components(), || format!("p = {p}, a = {a:?}, b = {b:?}"));
        }
        Ok(())
    });
}

fn seminorm_suite(ctx: &mut Ctx) {
    ctx.run("retraction_mu_lambda", |rng, samples, c| {
        for k in 0..samples {
            let p = [2u64, 3, 5][k % 3];
            let fq = FqField::new(p, 1)?;
            let x = sample::perfect(rng, &fq, true);
            for alpha in [PointEvaluator::Trivial, PointEvaluator::x_adic(p)] {
                let lhs = mu_map(&PointEvaluator::lambda_of(alpha.clone()), &x)?;
                let rhs = alpha.eval(&Element::Perfect(x.clone()))?;
                c.case(lhs.cmp_value(&rhs) == Ordering::Equal && lhs.is_exact(), || {
                    format!("α = {alpha:?}, x = {x:?}: {lhs:?} vs {rhs:?}")
                });
            }
        }
        Ok(())
    });
    ctx.run("domination_lambda_mu", |rng, samples, c| {
        for k in 0..samples {
            let p = [2u64, 3][k % 2];
            let fq = FqField::new(p, 1)?;
            let w = sample::witt(rng, &fq, 3, false);
            let beta = PointEvaluator::x_to_p(3);
            let lm = lambda_map(&PointEvaluator::mu_of(beta.clone()), &w)?;
            let b = beta.eval(&Element::Witt(w.clone()))?;
            c.case(lm.cmp_value(&b) != Ordering::Less, || format!("w = {w:?}: λμβ = {lm:?}, β = {b:?}"));
        }
        Ok(())
    });
    ctx.run("strictness_witness", |_, _, c| {
        for p in [2u64, 3, 5] {
            let fq = FqField::new(p, 1)?;
            let one = PerfectLaurent::one(&fq, false);
            let x = PerfectLaurent::x(&fq, false);
            let w = WittVector::teichmuller(&one, 3).mul_p().sub(&WittVector::teichmuller(&x, 3))?;
            let beta = PointEvaluator::x_to_p(3);
            let lm = lambda_map(&PointEvaluator::mu_of(beta.clone()), &w)?;
            let b = beta.eval(&Element::Witt(w))?;
            let ok = lm == SeminormValue::p_power(p, Rat::from_integer(1)) && b.cmp_value(&lm) == Ordering::Less;
            c.case(ok, || format!("p = {p}: λμβ = {lm:?}, β = {b:?}"));
        }
        Ok(())
    });
    ctx.run("mu_of_x_is_inverse_p", |_, _, c| {
        for p in [2u64, 3, 5, 7] {
            let fq = FqField::new(p, 1)?;
            let v = mu_map(&PointEvaluator::x_to_p(3), &PerfectLaurent::x(&fq, false))?;
            c.case(v == SeminormValue::p_power(p, Rat::from_integer(1)), || format!("p = {p}: {v:?}"));
        }
        Ok(())
    });
    ctx.run("comb_values", |rng, samples, c| {
        for k in 0..samples {
            let p = [2u64, 3, 5][k % 3];
            let a = rng.gen_range(0..6u32);
            let mut m = rng.gen_range(1..500i64);
            while m % p as i64 == 0 {
                m += 1;
            }
            let cc = BigRational::new(big(rng.gen_range(0..=7)), big(8));
            let n = big(m) * num_traits::pow(big(p as i64), a as usize);
            let v = PointEvaluator::Comb { p, c: cc.clone() }.eval(&Element::Integer(n))?;
            let expect = num_traits::pow(BigRational::from_integer(big(1)) - &cc, a as usize);
            c.case(v.to_rational() == Some(expect.clone()), || format!("p = {p}, c = {cc}, a = {a}: {v:?}"));
        }
        Ok(())
    });
    ctx.run("unit_disc_point_is_gauss_norm", |rng, samples, c| {
        for k in 0..samples {
            let p = [2u64, 3, 5][k % 3];
            let deg = rng.gen_range(0..6);
            let coeffs: Vec<Element> = (0..=deg).map(|_| Element::Integer(big(rng.gen_range(-200..=200)))).collect();
            let f = Element::Poly(coeffs.clone());
            let disc = PointEvaluator::Disc { center: PadicScalar::exact_zero(p), radius_neg_log: Some(Rat::from_integer(0)) };
            let v = disc.eval(&f)?;
            // independent: minimum p-adic valuation of the integer coefficients
            let expect = coeffs
                .iter()
                .filter_map(|e| if let Element::Integer(n) = e { vp(p, n) } else { None })
                .min()
                .map(Rat::from_integer);
            c.case(v.neg_log_p() == expect, || format!("p = {p}, f = {coeffs:?}: {v:?}"));
        }
        Ok(())
    });
}

fn grid_vectors(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out
}

/// Filtrations on a grid for the multiplicity-free presets.
pub fn wa_grid(p: u64) -> Result<Vec<FilteredIsocrystal>> {
    let mut out = Vec::new();
    let ord2 = preset("ord2", p, 1, 20)?;
    let ss2 = preset("ss2", p, 1, 20)?;
    for v in grid_vectors(2, -1, 2) {
        for iso in [&ord2, &ss2] {
            if let Some(fd) = sample::grid_filtration(iso, &[0, 1], &[v.clone()])? {
                out.push(fd);
            }
        }
    }
    let mf3 = preset("mf3", p, 1, 20)?;
    let ord3 = preset("ord3", p, 1, 20)?;
    let g3 = grid_vectors(3, 0, 1);
    for v in &g3 {
        if let Some(fd) = sample::grid_filtration(&mf3, &[0, 0, 1], &[v.clone()])? {
            out.push(fd);
        }
        for u in &g3 {
            if let Some(fd) = sample::grid_filtration(&mf3, &[-1, 1, 1], &[v.clone(), u.clone()])? {
                out.push(fd);
            }
            if let Some(fd) = sample::grid_filtration(&ord3, &[0, 1, 2], &[v.clone(), u.clone()])? {
                out.push(fd);
            }
        }
    }
    Ok(out)
}

fn decision_bool(d: Decision) -> Option<bool> {
    match d {
        Decision::True => Some(true),
        Decision::False => Some(false),
        Decision::Unknown => None,
    }
}

fn isocrystal_suite(ctx: &mut Ctx) {
    ctx.run("preset_newton_slopes", |_, _, c| {
        let r = Rat::new;
        let expect: [(&str, Vec<Rat>); 5] = [
            ("ord2", vec![r(0, 1), r(1, 1)]),
            ("ss2", vec![r(1, 2), r(1, 2)]),
            ("mf3", vec![r(0, 1), r(1, 2), r(1, 2)]),
            ("ord3", vec![r(0, 1), r(1, 1), r(2, 1)]),
            ("unit2", vec![r(0, 1), r(0, 1)]),
        ];
        for p in [2u64, 3, 5] {
            for (name, slopes) in &expect {
                let got = preset(name, p, 1, 20)?.newton_slopes()?;
                c.case(&got == slopes, || format!("{name} at p = {p}: {got:?}"));
            }
        }
        Ok(())
    });
    ctx.run("newton_polygon_root_valuation_sum", |rng, samples, c| {
        for k in 0..samples {
            let p = [2u64, 3, 5][k % 3];
            let deg = rng.gen_range(1..=6);
            let mut coeffs: Vec<BigInt> = (0..deg).map(|_| big(rng.gen_range(-500..=500))).collect();
            if coeffs[0] == big(0) {
                coeffs[0] = big(p as i64);
            }
            coeffs.push(big(1));
            let vals: Vec<Option<Rat>> = coeffs.iter().map(|a| vp(p, a).map(Rat::from_integer)).collect();
            let poly = newton_polygon_of(&vals)?;
            let sum: Rat = poly.root_valuations().iter().sum();
            let expect = vals[0].expect("nonzero constant term");
            c.case(sum == expect && poly.root_valuations().len() == deg, || format!("p = {p}, coeffs = {coeffs:?}"));
        }
        Ok(())
    });
    ctx.run("wa_matches_brute_force", |_, _, c| {
        for p in [2u64, 3] {
            for fd in wa_grid(p)? {
                let r = fd.weakly_admissible()?;
                let brute = oracle::brute_force_wa(&fd)?;
                c.case(r.exact_path && decision_bool(r.decision) == Some(brute), || {
                    format!("p = {p}, weights {:?}: decision {:?}, brute force {brute}", fd.hodge_tate_weights(), r.decision)
                });
            }
        }
        Ok(())
    });
    ctx.run("ord2_fails_exactly_on_e0", |_, _, c| {
        for p in [2u64, 3, 5] {
            let d = preset("ord2", p, 1, 20)?;
            for v in grid_vectors(2, -2, 2) {
                let Some(fd) = sample::grid_filtration(&d, &[0, 1], &[v.clone()])? else { continue };
                let on_e0 = v[1] == 0;
                let r = fd.weakly_admissible()?;
                c.case(r.decision == if on_e0 { Decision::False } else { Decision::True }, || {
                    format!("p = {p}, Fil^1 = {v:?}: {:?}", r.decision)
                });
            }
        }
        Ok(())
    });
    ctx.run("tensor_with_rank_one_preserves_wa", |rng, samples, c| {
        let mut done = 0;
        let mut k = 0;
        while done < samples.max(50) && k < 20 * samples.max(50) {
            k += 1;
            let p = [2u64, 3][k % 2];
            let name = ["ord2", "ss2", "mf3", "ord3"][k % 4];
            let iso = preset(name, p, 1, 20)?;
            let fd = sample::chart_filtration(rng, &iso, &preset_weights(name)?)?;
            if fd.weakly_admissible()?.decision != Decision::True {
                continue;
            }
            let l = sample::rank_one(rng, iso.field())?;
            let t = fd.tensor(&l)?;
            let r = t.weakly_admissible()?;
            done += 1;
            c.case(r.decision == Decision::True, || format!("{name} ⊗ rank one at p = {p}: {:?}", r.decision));
        }
        Ok(())
    });
}

fn robba_suite(ctx: &mut Ctx) {
    ctx.run("phi_t_equals_p_t", |_, _, c| {
        for p in [2u64, 3, 5] {
            let t = t_element(p, 8, 10)?;
            let a = phi_act(&t)?.agrees_with(&t.scale(&PadicScalar::exact_int(p, p))?)?;
            c.case(a.equal, || format!("p = {p}: {a:?}"));
        }
        Ok(())
    });
    ctx.run("gamma_t_equals_gamma_times_t", |rng, samples, c| {
        for k in 0..samples.min(30) {
            let p = [2u64, 3, 5][k % 3];
            let g = sample::padic_unit(rng, p, 12);
            let t = t_element(p, 8, 10)?;
            let a = gamma_act(&t, &g)?.agrees_with(&t.scale(&g)?)?;
            c.case(a.equal, || format!("p = {p}, γ = {g}: {a:?}"));
        }
        Ok(())
    });
    ctx.run("phi_commutes_with_gamma", |rng, samples, c| {
        for k in 0..samples.min(30) {
            let p = [2u64, 3][k % 2];
            let f = sample::robba_poly(rng, p, Rat::new(1, 1), 10, 4)?;
            let g = sample::padic_unit(rng, p, 12);
            let lhs = phi_act(&gamma_act(&f, &g)?)?;
            let rhs = gamma_act(&phi_act(&f)?, &g)?;
            let a = lhs.agrees_with(&rhs)?;
            c.case(a.equal, || format!("p = {p}, γ = {g}, f = {f}: {a:?}"));
        }
        Ok(())
    });
    ctx.run("base_change_square_for_t", |_, _, c| {
        let t = t_element(2, 40, 10)?;
        for n in 1..=2 {
            let d = base_change_diagram_check(&t, n, 6)?;
            c.case(d.equal(), || format!("n = {n}: {:?}", d.discrepancy));
            c.residual = Some(format!("checked to precision {}", d.discrepancy.precision));
        }
        Ok(())
    });
    ctx.run("base_change_square_for_polynomials", |rng, samples, c| {
        for k in 0..samples.min(20) {
            let p = [2u64, 3][k % 2];
            let f = sample::robba_poly(rng, p, Rat::new(1, 1), 10, 3)?;
            let n = 1 + (k as u32 / 2) % 2;
            let d = base_change_diagram_check(&f, n, 4)?;
            c.case(d.equal(), || format!("p = {p}, n = {n}, f = {f}: {:?}", d.discrepancy));
        }
        Ok(())
    });
    ctx.run("det_valuation_is_minus_t_h", |rng, samples, c| {
        for name in PRESETS {
            let iso = preset(name, 2, 1, 20)?;
            let fd = sample::chart_filtration(rng, &iso, &preset_weights(name)?)?;
            let lm = local_modification(&fd, 1, 2)?;
            c.case(lm.det_t_valuation == -fd.t_h(), || format!("{name}: {} vs t_H = {}", lm.det_t_valuation, fd.t_h()));
        }
        for k in 0..samples.max(50) {
            let p = [2u64, 3][k % 2];
            let name = PRESETS[k % PRESETS.len()];
            let iso = preset(name, p, 1 + k % 2, 20)?;
            let w = sample::weights(rng, iso.rank(), -2, 3);
            let fd = sample::chart_filtration(rng, &iso, &w)?;
            let n = 1 + (k as u32) % 3;
            let lm = local_modification(&fd, n, 2)?;
            c.case(lm.det_t_valuation == -fd.t_h(), || format!("{name}, weights {w:?}: {}", lm.det_t_valuation));
        }
        Ok(())
    });
    ctx.run("berger_degree_identity", |rng, _, c| {
        for p in [2u64, 3] {
            for name in PRESETS {
                let iso = preset(name, p, 1, 20)?;
                let fd = sample::chart_filtration(rng, &iso, &preset_weights(name)?)?;
                let deg = berger_degree(&fd)?;
                let direct = fd.t_n()? - fd.t_h();
                let wa = fd.weakly_admissible()?.decision == Decision::True;
                c.case(deg == direct && (!wa || deg == 0), || format!("{name} at p = {p}: degree {deg}"));
            }
        }
        Ok(())
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_input_error() {
        assert!(matches!(run("nope", &VerifyConfig::default()), Err(Error::Invalid(_))));
    }

    #[test]
    fn witt_suite_passes() {
        let cfg = VerifyConfig { seed: 1, samples: 12 };
        let out = run("witt", &cfg).unwrap();
        assert!(out.iter().all(|o| o.passed), "{out:?}");
    }
}
