use crate::error::{Error, Result};
use crate::padic::p_pow;
use crate::perfect::PerfectRing;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest supported Witt length.
pub const MAX_LEN: usize = 5;
const MAXV: usize = 2 * MAX_LEN;

type Mono = [u16; MAXV];

/// Integer polynomial in the variables x_0..x_{n−1}, y_0..y_{n−1}
/// (indices 0..n and n..2n).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntPoly {
    terms: HashMap<Mono, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { terms: HashMap::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert([0; MAXV], c);
        }
        IntPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(i, 1)
    }

    fn monomial(i: usize, e: u64) -> Self {
        let mut m = [0u16; MAXV];
        m[i] = e as u16;
        let mut terms = HashMap::new();
        terms.insert(m, BigInt::one());
        IntPoly { terms }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial with exponent vector `e` (missing entries are 0).
    pub fn coeff(&self, e: &[u16]) -> BigInt {
        let mut m = [0u16; MAXV];
        m[..e.len()].copy_from_slice(e);
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Terms sorted by exponent vector.
    pub fn sorted_terms(&self) -> Vec<(Vec<u16>, BigInt)> {
        let mut v: Vec<(Vec<u16>, BigInt)> = self.terms.iter().map(|(k, c)| (k.to_vec(), c.clone())).collect();
        v.sort();
        v
    }

    fn add_term(&mut self, m: Mono, c: BigInt) {
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = IntPoly { terms: HashMap::with_capacity(self.terms.len() * 2) };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = *m1;
                for k in 0..MAXV {
                    m[k] += m2[k];
                }
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::constant(1);
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

    /// Exact division by `d`; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut terms = HashMap::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(*m, q);
        }
        Some(IntPoly { terms })
    }

    /// Evaluation at integer points.
    pub fn eval_int(&self, vals: &[BigInt]) -> BigInt {
        let mut cache: HashMap<(usize, u16), BigInt> = HashMap::new();
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| num_traits::pow(vals[i].clone(), e as usize));
                t *= &*pw;
            }
            acc += t;
        }
        acc
    }
}

/// The sum and product polynomials of p-typical Witt vectors of length n.
#[derive(Debug)]
pub struct WittStructurePolys {
    p: u64,
    n: usize,
    sum: Vec<IntPoly>,
    prod: Vec<IntPoly>,
    sum_mod_p: Vec<Vec<(Mono, u64)>>,
    prod_mod_p: Vec<Vec<(Mono, u64)>>,
}

fn reduce_mod_p(p: u64, poly: &IntPoly) -> Vec<(Mono, u64)> {
    let pb = BigInt::from(p);
    let mut v: Vec<(Mono, u64)> = poly
        .terms
        .iter()
        .filter_map(|(m, c)| {
            let r = c.mod_floor(&pb).to_u64().unwrap();
            (r != 0).then_some((*m, r))
        })
        .collect();
    v.sort();
    v
}

/// Ghost component w_j = Σ_{i≤j} p^i v_{off+i}^{p^{j−i}}.
fn ghost_poly(p: u64, j: usize, off: usize) -> IntPoly {
    let mut w = IntPoly::zero();
    for i in 0..=j {
        let mono = IntPoly::monomial(off + i, p.pow((j - i) as u32));
        w = w.add(&mono.scale(&p_pow(p, i as u32)));
    }
    w
}

impl WittStructurePolys {
    /// Derives S_j and P_j by inverting the ghost map over Z.
    pub fn derive(p: u64, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::Invalid(format!("Witt length must be in 1..={MAX_LEN}")));
        }
        if !crate::padic::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        let mut sum: Vec<IntPoly> = Vec::with_capacity(n);
        let mut prod: Vec<IntPoly> = Vec::with_capacity(n);
        // powers[i][k] = poly_i^{p^k}
        let mut sum_pows: Vec<Vec<IntPoly>> = Vec::new();
        let mut prod_pows: Vec<Vec<IntPoly>> = Vec::new();
        for j in 0..n {
            let wx = ghost_poly(p, j, 0);
            let wy = ghost_poly(p, j, n);
            let mut s_num = wx.add(&wy);
            let mut p_num = wx.mul(&wy);
            for i in 0..j {
                let k = j - i;
                while sum_pows[i].len() <= k {
                    let last = sum_pows[i].last().unwrap().pow(p);
                    sum_pows[i].push(last);
                    let last = prod_pows[i].last().unwrap().pow(p);
                    prod_pows[i].push(last);
                }
                let pi = p_pow(p, i as u32);
                s_num = s_num.sub(&sum_pows[i][k].scale(&pi));
                p_num = p_num.sub(&prod_pows[i][k].scale(&pi));
            }
            let d = p_pow(p, j as u32);
            let s = s_num.div_exact(&d).ok_or_else(|| Error::InexactDivision(format!("S_{j}")))?;
            let pr = p_num.div_exact(&d).ok_or_else(|| Error::InexactDivision(format!("P_{j}")))?;
            sum_pows.push(vec![s.clone()]);
            prod_pows.push(vec![pr.clone()]);
            sum.push(s);
            prod.push(pr);
        }
        Ok(Self::from_parts(p, n, sum, prod))
    }

    fn from_parts(p: u64, n: usize, sum: Vec<IntPoly>, prod: Vec<IntPoly>) -> Self {
        let sum_mod_p = sum.iter().map(|s| reduce_mod_p(p, s)).collect();
        let prod_mod_p = prod.iter().map(|s| reduce_mod_p(p, s)).collect();
        WittStructurePolys { p, n, sum, prod, sum_mod_p, prod_mod_p }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sum(&self) -> &[IntPoly] {
        &self.sum
    }

    pub fn prod(&self) -> &[IntPoly] {
        &self.prod
    }

    /// Evaluates the reduced polynomials on standard coordinates in a ring of characteristic p.
    pub(crate) fn eval_ring<R: PerfectRing>(&self, which_sum: bool, a: &[R], b: &[R]) -> Vec<R> {
        let polys = if which_sum { &self.sum_mod_p } else { &self.prod_mod_p };
        let vals: Vec<&R> = a.iter().chain(b.iter()).collect();
        let mut cache: HashMap<(usize, u16), R> = HashMap::new();
        let zero = a[0].zero_like();
        polys
            .iter()
            .map(|terms| {
                let mut acc = zero.clone();
                for (m, c) in terms {
                    let mut t = zero.from_u64_like(*c);
                    let mut vanished = false;
                    for (i, &e) in m.iter().enumerate().take(2 * self.n) {
                        if e == 0 {
                            continue;
                        }
                        let pw = cache.entry((i, e)).or_insert_with(|| vals[i].pow_r(e as u64));
                        if pw.is_zero_r() {
                            vanished = true;
                            break;
                        }
                        t = t.mul_r(pw);
                    }
                    if !vanished {
                        acc = acc.add_r(&t);
                    }
                }
                acc
            })
            .collect()
    }

    fn to_text(&self) -> String {
        let mut out = format!("isolab-witt-polys v1 {} {}\n", self.p, self.n);
        for (tag, list) in [("S", &self.sum), ("P", &self.prod)] {
            for (j, poly) in list.iter().enumerate() {
                out.push_str(&format!("{tag} {j} {}\n", poly.num_terms()));
                for (m, c) in poly.sorted_terms() {
                    let exps: Vec<String> = m[..2 * self.n].iter().map(|e| e.to_string()).collect();
                    out.push_str(&format!("{} {}\n", exps.join(","), c));
                }
            }
        }
        out
    }

    fn from_text(text: &str, p: u64, n: usize) -> Option<Self> {
        let mut lines = text.lines();
        if lines.next()? != format!("isolab-witt-polys v1 {p} {n}") {
            return None;
        }
        let mut sum = Vec::new();
        let mut prod = Vec::new();
        for _ in 0..2 * n {
            let header: Vec<&str> = lines.next()?.split(' ').collect();
            let count: usize = header.get(2)?.parse().ok()?;
            let mut poly = IntPoly::zero();
            for _ in 0..count {
                let (exps, coeff) = lines.next()?.split_once(' ')?;
                let mut m = [0u16; MAXV];
                for (k, e) in exps.split(',').enumerate() {
                    *m.get_mut(k)? = e.parse().ok()?;
                }
                poly.add_term(m, coeff.parse().ok()?);
            }
            match header[0] {
                "S" => sum.push(poly),
                "P" => prod.push(poly),
                _ => return None,
            }
        }
        (sum.len() == n && prod.len() == n).then(|| Self::from_parts(p, n, sum, prod))
    }
}

type Cache = Mutex<HashMap<(u64, usize), Arc<WittStructurePolys>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Structure polynomials for (p, n), computed once per process. When the
/// `ISOLAB_CACHE` environment variable names a directory they are also
/// stored there and reused across runs.
pub fn structure_polys(p: u64, n: usize) -> Result<Arc<WittStructurePolys>> {
    let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(hit) = guard.get(&(p, n)) {
        return Ok(hit.clone());
    }
    let disk = std::env::var_os("ISOLAB_CACHE").map(std::path::PathBuf::from);
    let file = disk.as_ref().map(|d| d.join(format!("witt-p{p}-n{n}.txt")));
    let loaded = file
        .as_ref()
        .and_then(|f| std::fs::read_to_string(f).ok())
        .and_then(|t| WittStructurePolys::from_text(&t, p, n));
    let polys = match loaded {
        Some(x) => x,
        None => {
            let x = WittStructurePolys::derive(p, n)?;
            if let (Some(dir), Some(f)) = (&disk, &file) {
                // the cache is an optimisation; failures to write it are ignored
                let _ = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(f, x.to_text()));
            }
            x
        }
    };
    let arc = Arc::new(polys);
    guard.insert((p, n), arc.clone());
    Ok(arc)
}

/// Ghost components of a Witt vector given in standard coordinates over Z.
pub fn ghost_components(p: u64, a: &[BigInt]) -> Vec<BigInt> {
    (0..a.len())
        .map(|j| {
            (0..=j)
                .map(|i| p_pow(p, i as u32) * num_traits::pow(a[i].clone(), p.pow((j - i) as u32) as usize))
                .sum()
        })
        .collect()
}

/// Witt sum or product of integer vectors in standard coordinates.
pub fn int_witt_op(p: u64, a: &[BigInt], b: &[BigInt], sum: bool) -> Result<Vec<BigInt>> {
    if a.len() != b.len() {
        return Err(Error::Invalid("Witt vectors of different lengths".into()));
    }
    let polys = structure_polys(p, a.len())?;
    let vals: Vec<BigInt> = a.iter().chain(b.iter()).cloned().collect();
    let list = if sum { polys.sum() } else { polys.prod() };
    Ok(list.iter().map(|poly| poly.eval_int(&vals)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_polynomials() {
        let w = WittStructurePolys::derive(2, 2).unwrap();
        assert_eq!(w.sum()[0], IntPoly::var(0).add(&IntPoly::var(2)));
        // S_1 = x1 + y1 - x0 y0
        let s1 = IntPoly::var(1).add(&IntPoly::var(3)).sub(&IntPoly::var(0).mul(&IntPoly::var(2)));
        assert_eq!(w.sum()[1], s1);
        assert_eq!(w.prod()[0], IntPoly::var(0).mul(&IntPoly::var(2)));
    }

    #[test]
    fn product_polynomial_p1() {
        for p in [2u64, 3, 5] {
            let w = WittStructurePolys::derive(p, 2).unwrap();
            // P_1 = x0^p y1 + x1 y0^p + p x1 y1
            let x0p = IntPoly::var(0).pow(p);
            let y0p = IntPoly::var(2).pow(p);
            let expected = x0p
                .mul(&IntPoly::var(3))
                .add(&IntPoly::var(1).mul(&y0p))
                .add(&IntPoly::var(1).mul(&IntPoly::var(3)).scale(&BigInt::from(p)));
            assert_eq!(w.prod()[1], expected);
        }
    }

    #[test]
    fn text_round_trip() {
        let w = WittStructurePolys::derive(3, 3).unwrap();
        let back = WittStructurePolys::from_text(&w.to_text(), 3, 3).unwrap();
        assert_eq!(back.sum(), w.sum());
        assert_eq!(back.prod(), w.prod());
    }

    #[test]
    fn ghost_of_sum() {
        let a: Vec<BigInt> = [2, -1, 3].iter().map(|&x| BigInt::from(x)).collect();
        let b: Vec<BigInt> = [1, 4, -2].iter().map(|&x| BigInt::from(x)).collect();
        for p in [2u64, 3] {
            let s = int_witt_op(p, &a, &b, true).unwrap();
            let m = int_witt_op(p, &a, &b, false).unwrap();
            let (ga, gb) = (ghost_components(p, &a), ghost_components(p, &b));
            let gs = ghost_components(p, &s);
            let gm = ghost_components(p, &m);
            for j in 0..3 {
                assert_eq!(gs[j], &ga[j] + &gb[j]);
                assert_eq!(gm[j], &ga[j] * &gb[j]);
            }
        }
    }
}
