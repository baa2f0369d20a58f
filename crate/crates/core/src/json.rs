//! JSON encodings of the library's values.
//!
//! Scalars are `{"p", "val", "unit", "prec"}` with `"val": "inf"` for zero and
//! `"prec": "exact"` for exact values. Wherever an isocrystal or flag entry
//! is expected, an integer or a `"a/b"` string may be written instead; it is
//! read at the field's working precision.

use crate::error::{Error, Result};
use crate::isocrystal::{Decision, FilteredIsocrystal, Isocrystal, KMatrix, WaReport, Witness};
use crate::linalg::Matrix;
use crate::padic::{CyclotomicElement, CyclotomicField, PadicScalar, Rat, UnramifiedElement, UnramifiedField, EXACT};
use crate::perfect::{FqElement, FqField, PerfectLaurent};
use crate::seminorm::{Element, PointEvaluator, SeminormValue, WittKind};
use crate::witt::WittVector;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Invalid(format!("missing key \"{key}\"")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Invalid(format!("{what} must be an integer")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::Invalid(format!("{what} must be a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Invalid(format!("{what} must be an array")))
}

fn prime_of(v: &Value) -> Result<u64> {
    let p = as_u64(field(v, "p")?, "p")?;
    if !crate::padic::is_prime(p) {
        return bad(format!("p = {p} is not prime"));
    }
    Ok(p)
}

fn big_of(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Invalid(format!("{what} must be an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Invalid(format!("{what}: cannot parse \"{s}\""))),
        _ => bad(format!("{what} must be an integer or a decimal string")),
    }
}

/// `"a/b"`, `"a"` or an integer.
pub fn parse_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => n.as_i64().map(Rat::from_integer).ok_or_else(|| Error::Invalid("expected a rational".into())),
        Value::String(s) => rat_from_str(s),
        _ => bad("expected a rational such as \"3/2\""),
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("cannot parse rational \"{s}\"")));
    match s.split_once('/') {
        Some((a, b)) => {
            let d = parse(b)?;
            if d == 0 {
                return bad("zero denominator");
            }
            Ok(Rat::new(parse(a)?, d))
        }
        None => Ok(Rat::from_integer(parse(s)?)),
    }
}

fn big_rat_of(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(_) => Ok(BigRational::from_integer(big_of(v, "rational")?)),
        Value::String(s) => {
            let s = s.trim();
            let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|_| Error::Invalid(format!("cannot parse \"{s}\"")));
            match s.split_once('/') {
                Some((a, b)) => {
                    let d = parse(b)?;
                    if d.is_zero() {
                        return bad("zero denominator");
                    }
                    Ok(BigRational::new(parse(a)?, d))
                }
                None => Ok(BigRational::from_integer(parse(s)?)),
            }
        }
        _ => bad("expected a rational"),
    }
}

pub fn rat_to_json(r: Rat) -> Value {
    if r.is_integer() {
        json!(r.to_integer().to_string())
    } else {
        json!(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn prec_to_json(n: i64) -> Value {
    if n >= EXACT {
        json!("exact")
    } else {
        json!(n)
    }
}

fn prec_of(v: Option<&Value>, default: i64) -> Result<i64> {
    match v {
        None => Ok(default),
        Some(Value::String(s)) if s == "exact" => Ok(EXACT),
        Some(x) => as_i64(x, "prec"),
    }
}

// ---- scalars and fields ----

pub fn scalar_to_json(x: &PadicScalar) -> Value {
    json!({
        "p": x.prime(),
        "val": x.val().map_or(json!("inf"), |v| json!(v)),
        "unit": x.unit().to_string(),
        "prec": prec_to_json(x.precision()),
    })
}

/// Reads a scalar; integers and `"a/b"` strings are accepted for prime `p` at precision `prec`.
pub fn scalar_from_json(v: &Value, p: Option<u64>, prec: i64) -> Result<PadicScalar> {
    match v {
        Value::Object(_) => {
            let q = prime_of(v)?;
            if p.is_some_and(|p| p != q) {
                return bad(format!("scalar over p = {q} where p = {} was expected", p.unwrap()));
            }
            let n = prec_of(v.get("prec"), prec)?;
            let val = match field(v, "val")? {
                Value::String(s) if s == "inf" => None,
                x => Some(as_i64(x, "val")?),
            };
            let unit = big_of(v.get("unit").unwrap_or(&json!(0)), "unit")?;
            PadicScalar::from_parts(q, val, unit, n)
        }
        Value::Number(_) | Value::String(_) => {
            let p = p.ok_or_else(|| Error::Invalid("a bare number needs a known prime".into()))?;
            PadicScalar::from_ratio(p, &big_rat_of(v)?, prec)
        }
        _ => bad("expected a scalar"),
    }
}

pub fn unramified_to_json(x: &UnramifiedElement) -> Value {
    let h: Vec<String> = x.field().modulus().iter().map(|c| c.to_string()).collect();
    json!({
        "p": x.prime(),
        "h": h,
        "coords": x.coords().iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

/// An entry over `field`: a scalar (embedded from Q_p) or `{"coords": [...]}`.
pub fn unramified_from_json(v: &Value, field: &Arc<UnramifiedField>) -> Result<UnramifiedElement> {
    let p = field.prime();
    let prec = field.precision();
    if let Some(c) = v.get("coords") {
        let cs = as_array(c, "coords")?;
        let coords = cs.iter().map(|x| scalar_from_json(x, Some(p), prec)).collect::<Result<Vec<_>>>()?;
        return UnramifiedElement::from_coords(field, coords);
    }
    Ok(UnramifiedElement::from_scalar(field, scalar_from_json(v, Some(p), prec)?))
}

pub fn cyclotomic_to_json(x: &CyclotomicElement) -> Value {
    json!({
        "p": x.field().prime(),
        "level": x.field().level(),
        "coords": x.coords().iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

pub fn cyclotomic_from_json(v: &Value, prec: i64) -> Result<CyclotomicElement> {
    let p = prime_of(v)?;
    let level = as_u64(field(v, "level")?, "level")? as u32;
    let f = CyclotomicField::new(p, level)?;
    let coords = as_array(field(v, "coords")?, "coords")?
        .iter()
        .map(|x| scalar_from_json(x, Some(p), prec))
        .collect::<Result<Vec<_>>>()?;
    CyclotomicElement::from_coords(&f, coords)
}

// ---- perfect rings and Witt vectors ----

fn exponent_parts(p: u64, e: &Rat) -> (i64, u32) {
    let mut d = *e.denom();
    let mut k = 0;
    while d > 1 {
        d /= p as i64;
        k += 1;
    }
    (*e.numer(), k)
}

pub fn perfect_to_json(x: &PerfectLaurent) -> Value {
    let p = x.field().prime();
    let terms: Vec<Value> = x
        .terms()
        .iter()
        .map(|(e, c)| {
            let (num, den_pow) = exponent_parts(p, e);
            json!({"num": num, "den_pow": den_pow, "coeff": c.coords()})
        })
        .collect();
    json!({"p": p, "s": x.field().degree(), "terms": terms, "laurent": x.is_laurent()})
}

/// Reads `{"terms": [...], "laurent": bool}`; `p` and `s` come from the object or from `ctx`.
pub fn perfect_from_json(v: &Value, ctx: Option<&Arc<FqField>>) -> Result<PerfectLaurent> {
    let fq = match (v.get("p"), ctx) {
        (Some(_), _) => {
            let p = prime_of(v)?;
            let s = v.get("s").map(|x| as_u64(x, "s")).transpose()?.unwrap_or(1) as usize;
            match ctx {
                Some(f) if f.prime() == p && f.degree() == s => f.clone(),
                _ => FqField::new(p, s)?,
            }
        }
        (None, Some(f)) => f.clone(),
        (None, None) => return bad("perfect-ring element needs \"p\""),
    };
    let p = fq.prime();
    let laurent = v.get("laurent").map(|b| b.as_bool().unwrap_or(false)).unwrap_or(false);
    let mut terms = Vec::new();
    for t in as_array(field(v, "terms")?, "terms")? {
        let num = as_i64(field(t, "num")?, "num")?;
        let den_pow = as_u64(t.get("den_pow").unwrap_or(&json!(0)), "den_pow")? as u32;
        if den_pow > 20 {
            return bad("den_pow is too large");
        }
        let den = (p as i64).checked_pow(den_pow).ok_or_else(|| Error::Invalid("den_pow is too large".into()))?;
        let coeff: Vec<u64> = match t.get("coeff") {
            None => vec![1],
            Some(Value::Number(n)) => vec![n.as_i64().ok_or_else(|| Error::Invalid("coeff".into()))?.rem_euclid(p as i64) as u64],
            Some(c) => as_array(c, "coeff")?
                .iter()
                .map(|x| Ok(as_i64(x, "coeff")?.rem_euclid(p as i64) as u64))
                .collect::<Result<_>>()?,
        };
        if coeff.len() > fq.degree() {
            return bad(format!("coefficient has {} coordinates over F_{{{p}^{}}}", coeff.len(), fq.degree()));
        }
        terms.push((Rat::new(num, den), FqElement::from_coords(&fq, &coeff)));
    }
    PerfectLaurent::from_terms(&fq, terms, laurent)
}

pub fn witt_to_json(w: &WittVector<PerfectLaurent>) -> Value {
    let comps: Vec<Value> = w.components().iter().map(perfect_to_json).collect();
    let s = w.components().first().map_or(1, |c| c.field().degree());
    json!({"p": w.prime(), "s": s, "len": w.len(), "components": comps})
}

pub fn witt_from_json(v: &Value) -> Result<WittVector<PerfectLaurent>> {
    let p = prime_of(v)?;
    let s = v.get("s").map(|x| as_u64(x, "s")).transpose()?.unwrap_or(1) as usize;
    let fq = FqField::new(p, s)?;
    let comps: Vec<PerfectLaurent> = as_array(field(v, "components")?, "components")?
        .iter()
        .map(|c| perfect_from_json(c, Some(&fq)))
        .collect::<Result<_>>()?;
    let len = match v.get("len") {
        Some(l) => as_u64(l, "len")? as usize,
        None => comps.len(),
    };
    if comps.len() != len {
        return bad(format!("len is {len} but {} components were given", comps.len()));
    }
    if len == 0 || len > crate::witt::MAX_LEN {
        return bad(format!("Witt length must be between 1 and {}", crate::witt::MAX_LEN));
    }
    WittVector::new(comps)
}

// ---- isocrystals ----

pub fn matrix_to_json(m: &KMatrix) -> Value {
    let entry = |x: &UnramifiedElement| {
        if x.field().degree() == 1 {
            scalar_to_json(&x.coords()[0])
        } else {
            json!({"coords": x.coords().iter().map(scalar_to_json).collect::<Vec<_>>()})
        }
    };
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| entry(m.get(i, j))).collect())).collect())
}

fn rows_from_json(v: &Value, field: &Arc<UnramifiedField>, what: &str) -> Result<Vec<Vec<UnramifiedElement>>> {
    as_array(v, what)?
        .iter()
        .map(|row| as_array(row, what)?.iter().map(|x| unramified_from_json(x, field)).collect())
        .collect()
}

pub fn isocrystal_to_json(iso: &Isocrystal) -> Value {
    let f = iso.field();
    let mut obj = json!({
        "p": f.prime(),
        "s": f.degree(),
        "prec": f.precision(),
        "phi": matrix_to_json(iso.phi()),
    });
    if f.degree() > 1 {
        obj["h"] = json!(f.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    }
    obj
}

/// Field described by `{"p", "s", "prec", "h"?}`, with CLI overrides applied by the caller.
pub fn field_from_json(v: &Value) -> Result<Arc<UnramifiedField>> {
    let p = prime_of(v)?;
    let s = v.get("s").map(|x| as_u64(x, "s")).transpose()?.unwrap_or(1) as usize;
    let prec = v.get("prec").map(|x| as_i64(x, "prec")).transpose()?.unwrap_or(20);
    if s == 0 || s > 12 {
        return bad("s must be between 1 and 12");
    }
    if !(1..=2000).contains(&prec) {
        return bad("prec must be between 1 and 2000");
    }
    match v.get("h") {
        Some(h) => {
            let h: Vec<i64> = as_array(h, "h")?
                .iter()
                .map(|c| big_of(c, "h").and_then(|b| i64::try_from(b).map_err(|_| Error::Invalid("h entry too large".into()))))
                .collect::<Result<_>>()?;
            if h.len() != s + 1 {
                return bad("h must have s + 1 coefficients");
            }
            UnramifiedField::with_modulus(p, &h, prec)
        }
        None => UnramifiedField::new(p, s, prec),
    }
}

pub fn isocrystal_from_json(v: &Value) -> Result<Isocrystal> {
    let f = field_from_json(v)?;
    let rows = rows_from_json(field(v, "phi")?, &f, "phi")?;
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return bad("phi must be a nonempty square matrix");
    }
    Isocrystal::new(&f, Matrix::from_rows(rows)?)
}

pub fn filtration_to_json(fd: &FilteredIsocrystal) -> Value {
    let mut flags = Map::new();
    for (i, m) in fd.flags() {
        let cols: Vec<Value> = (0..m.cols())
            .map(|j| {
                let col = m.col(j);
                let inner = KMatrix::from_rows(vec![col]).expect("row");
                matrix_to_json(&inner)[0].clone()
            })
            .collect();
        flags.insert(i.to_string(), Value::Array(cols));
    }
    json!({"jumps": fd.hodge_tate_weights(), "flags": flags})
}

/// `{"jumps": [weights with multiplicity], "flags": {"i": [vectors]}}` on top of `iso`.
pub fn filtration_from_json(v: &Value, iso: &Isocrystal) -> Result<FilteredIsocrystal> {
    let weights: Vec<i64> =
        as_array(field(v, "jumps")?, "jumps")?.iter().map(|x| as_i64(x, "jump")).collect::<Result<_>>()?;
    let mut flags = BTreeMap::new();
    if let Some(fl) = v.get("flags") {
        let obj = fl.as_object().ok_or_else(|| Error::Invalid("flags must be an object".into()))?;
        for (k, vecs) in obj {
            let i: i64 = k.trim().parse().map_err(|_| Error::Invalid(format!("flag key \"{k}\" is not an integer")))?;
            let cols = rows_from_json(vecs, iso.field(), "flag vectors")?;
            if cols.iter().any(|c| c.len() != iso.rank()) {
                return bad(format!("Fil^{i} vectors must have {} coordinates", iso.rank()));
            }
            flags.insert(i, Matrix::from_cols(&cols, iso.rank()));
        }
    }
    FilteredIsocrystal::new(iso.clone(), weights, flags)
}

/// An isocrystal object with an optional `"filtration"` key; without one the
/// filtration is trivial.
pub fn filtered_from_json(v: &Value) -> Result<FilteredIsocrystal> {
    let iso = isocrystal_from_json(v)?;
    match v.get("filtration") {
        Some(f) => filtration_from_json(f, &iso),
        None => Ok(FilteredIsocrystal::trivial(iso)),
    }
}

pub fn filtered_to_json(fd: &FilteredIsocrystal) -> Value {
    let mut v = isocrystal_to_json(fd.isocrystal());
    v["filtration"] = filtration_to_json(fd);
    v
}

pub fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::Global { t_n, t_h } => json!({"type": "global", "tN": t_n, "tH": t_h}),
        Witness::HodgeAboveNewton { x } => json!({"type": "hodge_above_newton", "x": x}),
        Witness::Subset { components, t_n, t_h } => {
            json!({"type": "subset", "components": components, "tN": t_n, "tH": t_h})
        }
        Witness::Subspace { basis, t_n, t_h } => {
            let cols: Vec<Value> = (0..basis.cols())
                .map(|j| matrix_to_json(&KMatrix::from_rows(vec![basis.col(j)]).expect("row"))[0].clone())
                .collect();
            json!({"type": "subspace", "basis": cols, "tN": t_n, "tH": t_h})
        }
    }
}

pub fn decision_to_json(r: &WaReport) -> Value {
    json!({
        "wa": r.decision.as_str(),
        "witness": r.witness.as_ref().map_or(Value::Null, witness_to_json),
        "tN": r.t_n,
        "tH": r.t_h,
        "exact_path": r.exact_path,
        "evidence": r.evidence,
    })
}

pub fn decision_from_str(s: &str) -> Result<Decision> {
    match s {
        "true" => Ok(Decision::True),
        "false" => Ok(Decision::False),
        "unknown" => Ok(Decision::Unknown),
        _ => bad(format!("unknown decision \"{s}\"")),
    }
}

// ---- seminorms ----

pub fn seminorm_value_to_json(x: &SeminormValue) -> Value {
    let mut v = json!({
        "neg_log_p": x.neg_log_p().map_or(json!("inf"), rat_to_json),
        "exact": x.is_exact(),
    });
    if !x.factor().is_one() {
        v["factor"] = json!(x.factor().to_string());
    }
    v
}

fn opt_neg_log(v: Option<&Value>) -> Result<Option<Rat>> {
    match v {
        None => Ok(None),
        Some(Value::String(s)) if s == "inf" => Ok(None),
        Some(x) => Ok(Some(parse_rat(x)?)),
    }
}

pub fn evaluator_from_json(v: &Value) -> Result<PointEvaluator> {
    let ty = field(v, "type")?.as_str().ok_or_else(|| Error::Invalid("\"type\" must be a string".into()))?;
    let inner = || evaluator_from_json(field(v, "inner")?).map(Box::new);
    Ok(match ty {
        "trivial" => PointEvaluator::Trivial,
        "padic_abs" => PointEvaluator::PadicAbs { p: prime_of(v)? },
        "gauss" => PointEvaluator::Gauss(inner()?),
        "disc" => {
            let prec = prec_of(v.get("prec"), 40)?;
            let center = scalar_from_json(field(v, "center")?, v.get("p").and_then(|x| x.as_u64()), prec)?;
            PointEvaluator::Disc { center, radius_neg_log: opt_neg_log(v.get("radius_neg_log"))? }
        }
        "comb" => PointEvaluator::Comb { p: prime_of(v)?, c: big_rat_of(field(v, "c")?)? },
        "x_adic" => PointEvaluator::XAdic {
            p: prime_of(v)?,
            scale: v.get("scale").map(parse_rat).transpose()?.unwrap_or(Rat::from_integer(1)),
        },
        "lambda" => PointEvaluator::Witt(WittKind::LambdaOf(inner()?)),
        "x_to_p" => PointEvaluator::Witt(WittKind::XToP {
            len: v.get("len").map(|l| as_u64(l, "len")).transpose()?.unwrap_or(crate::seminorm::DEFAULT_WITT_LEN as u64)
                as usize,
        }),
        "mu" => PointEvaluator::MuOf(inner()?),
        "power" => PointEvaluator::Power(inner()?, parse_rat(field(v, "exponent")?)?),
        other => return bad(format!("unknown evaluator type \"{other}\"")),
    })
}

pub fn evaluator_to_json(e: &PointEvaluator) -> Value {
    match e {
        PointEvaluator::Trivial => json!({"type": "trivial"}),
        PointEvaluator::PadicAbs { p } => json!({"type": "padic_abs", "p": p}),
        PointEvaluator::Gauss(b) => json!({"type": "gauss", "inner": evaluator_to_json(b)}),
        PointEvaluator::Disc { center, radius_neg_log } => json!({
            "type": "disc",
            "p": center.prime(),
            "center": scalar_to_json(center),
            "radius_neg_log": radius_neg_log.map_or(json!("inf"), rat_to_json),
        }),
        PointEvaluator::Comb { p, c } => json!({"type": "comb", "p": p, "c": c.to_string()}),
        PointEvaluator::XAdic { p, scale } => json!({"type": "x_adic", "p": p, "scale": rat_to_json(*scale)}),
        PointEvaluator::Witt(WittKind::LambdaOf(b)) => json!({"type": "lambda", "inner": evaluator_to_json(b)}),
        PointEvaluator::Witt(WittKind::XToP { len }) => json!({"type": "x_to_p", "len": len}),
        PointEvaluator::MuOf(b) => json!({"type": "mu", "inner": evaluator_to_json(b)}),
        PointEvaluator::Power(b, c) => json!({"type": "power", "inner": evaluator_to_json(b), "exponent": rat_to_json(*c)}),
    }
}

pub fn element_from_json(v: &Value) -> Result<Element> {
    let ty = field(v, "type")?.as_str().ok_or_else(|| Error::Invalid("\"type\" must be a string".into()))?;
    Ok(match ty {
        "integer" => Element::Integer(big_of(field(v, "value")?, "value")?),
        "rational" => Element::Rational(big_rat_of(field(v, "value")?)?),
        "padic" => Element::Padic(scalar_from_json(v, None, 40)?),
        "poly" => Element::Poly(
            as_array(field(v, "coeffs")?, "coeffs")?.iter().map(element_from_json).collect::<Result<_>>()?,
        ),
        "perfect" => Element::Perfect(perfect_from_json(v, None)?),
        "witt" => Element::Witt(witt_from_json(v)?),
        other => return bad(format!("unknown element type \"{other}\"")),
    })
}

pub fn element_to_json(e: &Element) -> Value {
    match e {
        Element::Integer(n) => json!({"type": "integer", "value": n.to_string()}),
        Element::Rational(q) => json!({"type": "rational", "value": q.to_string()}),
        Element::Padic(x) => {
            let mut v = scalar_to_json(x);
            v["type"] = json!("padic");
            v
        }
        Element::Poly(c) => json!({"type": "poly", "coeffs": c.iter().map(element_to_json).collect::<Vec<_>>()}),
        Element::Perfect(x) => {
            let mut v = perfect_to_json(x);
            v["type"] = json!("perfect");
            v
        }
        Element::Witt(w) => {
            let mut v = witt_to_json(w);
            v["type"] = json!("witt");
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::int_columns;

    #[test]
    fn scalar_roundtrip() {
        for x in [
            PadicScalar::from_int(5, 75, 10),
            PadicScalar::zero(3, 4),
            PadicScalar::exact_int(2, -3),
            PadicScalar::from_ratio(7, &BigRational::new(1.into(), 14.into()), 6).unwrap(),
        ] {
            let back = scalar_from_json(&scalar_to_json(&x), None, 1).unwrap();
            assert_eq!(back, x);
        }
        let short = scalar_from_json(&json!("3/4"), Some(3), 10).unwrap();
        assert_eq!(short.val(), Some(1));
        assert!(scalar_from_json(&json!({"p": 4, "val": 0, "unit": "1", "prec": 3}), None, 1).is_err());
    }

    #[test]
    fn perfect_and_witt_roundtrip() {
        let fq = FqField::new(2, 2).unwrap();
        let x = PerfectLaurent::from_terms(
            &fq,
            [(Rat::new(3, 4), FqElement::generator(&fq)), (Rat::new(-1, 1), FqElement::one(&fq))],
            true,
        )
        .unwrap();
        let back = perfect_from_json(&perfect_to_json(&x), None).unwrap();
        assert_eq!(back, x);
        let w = WittVector::new(vec![x.clone(), x.pth_root(), PerfectLaurent::zero(&fq, true)]).unwrap();
        let wb = witt_from_json(&witt_to_json(&w)).unwrap();
        assert_eq!(wb.components(), w.components());
    }

    #[test]
    fn isocrystal_and_filtration() {
        let v = json!({"p": 3, "s": 1, "prec": 20, "phi": [[1, 0], [0, 3]],
                       "filtration": {"jumps": [0, 1], "flags": {"1": [[1, 1]]}}});
        let fd = filtered_from_json(&v).unwrap();
        assert_eq!(fd.t_h(), 1);
        assert_eq!(fd.isocrystal().degree().unwrap(), 1);
        let again = filtered_from_json(&filtered_to_json(&fd)).unwrap();
        assert!(again.fil(1).unwrap().eq_at_precision(&int_columns(fd.isocrystal(), &[vec![1, 1]])));
        assert!(isocrystal_from_json(&json!({"p": 3, "phi": [[1, 0]]})).is_err());
        assert!(isocrystal_from_json(&json!({"p": 3, "phi": [[0]]})).is_err());
    }

    #[test]
    fn evaluator_roundtrip() {
        let e = PointEvaluator::Power(
            Box::new(PointEvaluator::Witt(WittKind::LambdaOf(Box::new(PointEvaluator::XAdic { p: 2, scale: Rat::new(1, 2) })))),
            Rat::new(3, 2),
        );
        assert_eq!(evaluator_from_json(&evaluator_to_json(&e)).unwrap(), e);
        let el = Element::Poly(vec![Element::Integer(3.into()), Element::Rational(BigRational::new(1.into(), 3.into()))]);
        assert_eq!(element_from_json(&element_to_json(&el)).unwrap(), el);
        assert!(evaluator_from_json(&json!({"type": "nope"})).is_err());
    }
}
