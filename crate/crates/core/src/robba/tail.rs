use crate::error::{Error, Result};
use crate::padic::Rat;

/// Lower bound for the valuation of the part of a series that is not stored.
///
/// The remainder g satisfies v_s(g) ≥ min_k (c_k + e_k·s) for every s in
/// `[lo, hi]` (`hi = None` means unbounded). With no lines the remainder is 0.
/// A line (c, e) is what a single term of valuation c at π^e contributes, so
/// bounds for sums, products and substitutions stay in this form.
#[derive(Clone, Debug, PartialEq)]
pub struct TailBound {
    lines: Vec<(Rat, Rat)>,
    lo: Rat,
    hi: Option<Rat>,
}

fn min_opt(a: Option<Rat>, b: Option<Rat>) -> Option<Rat> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl TailBound {
    /// No remainder at all.
    pub fn zero() -> Self {
        TailBound { lines: Vec::new(), lo: Rat::from_integer(0), hi: None }
    }

    pub fn new(lines: Vec<(Rat, Rat)>, lo: Rat, hi: Option<Rat>) -> Self {
        let mut t = TailBound { lines, lo, hi };
        t.prune();
        t
    }

    pub fn is_zero(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[(Rat, Rat)] {
        &self.lines
    }

    /// Interval of s on which the bound holds.
    pub fn domain(&self) -> (Rat, Option<Rat>) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, s: Rat) -> bool {
        self.is_zero() || (s >= self.lo && self.hi.is_none_or(|h| s <= h))
    }

    /// The bound at s; `None` stands for +∞.
    pub fn eval(&self, s: Rat) -> Result<Option<Rat>> {
        if self.is_zero() {
            return Ok(None);
        }
        if !self.contains(s) {
            return Err(Error::Precision(format!(
                "tail bound only holds for s in [{}, {}], not at {s}",
                self.lo,
                self.hi.map_or("∞".to_string(), |h| h.to_string())
            )));
        }
        Ok(self.lines.iter().map(|&(c, e)| c + e * s).min())
    }

    /// Lower bound for v_p of the π^k coefficient of the remainder: the
    /// maximum over the domain of (bound(s) − k s). `None` when unbounded,
    /// i.e. the remainder has no π^k term.
    pub fn coefficient_bound(&self, k: i64) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        let k = Rat::from_integer(k);
        let f = |s: Rat| self.lines.iter().map(|&(c, e)| c + (e - k) * s).min().unwrap();
        if self.hi.is_none() {
            // for large s the line with the smallest slope dominates
            let e_min = self.lines.iter().map(|l| l.1).min().unwrap();
            if e_min > k {
                return None;
            }
        }
        let mut pts = vec![self.lo];
        if let Some(h) = self.hi {
            pts.push(h);
        }
        for (i, &(c1, e1)) in self.lines.iter().enumerate() {
            for &(c2, e2) in &self.lines[i + 1..] {
                if e1 != e2 {
                    let s = (c2 - c1) / (e1 - e2);
                    if self.contains(s) {
                        pts.push(s);
                    }
                }
            }
        }
        pts.into_iter().map(f).max()
    }

    fn prune(&mut self) {
        self.lines.sort();
        self.lines.dedup();
        let lo = self.lo;
        let hi = self.hi;
        let lines = self.lines.clone();
        // a line can go when another lies weakly below it over the whole domain
        let below = |a: &(Rat, Rat), b: &(Rat, Rat)| {
            let at_lo = a.0 + a.1 * lo <= b.0 + b.1 * lo;
            match hi {
                Some(h) => at_lo && a.0 + a.1 * h <= b.0 + b.1 * h,
                None => at_lo && a.1 <= b.1,
            }
        };
        let mut keep = Vec::new();
        for (i, l) in lines.iter().enumerate() {
            let dominated = lines.iter().enumerate().any(|(j, m)| {
                j != i && below(m, l) && (!below(l, m) || j < i)
            });
            if !dominated {
                keep.push(*l);
            }
        }
        self.lines = keep;
    }

    fn meet_domain(&self, other: &Self) -> (Rat, Option<Rat>) {
        if self.is_zero() {
            return (other.lo, other.hi);
        }
        if other.is_zero() {
            return (self.lo, self.hi);
        }
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        (self.lo.max(other.lo), hi)
    }

    /// Bound for a sum of two remainders.
    pub fn union(&self, other: &Self) -> Self {
        let (lo, hi) = self.meet_domain(other);
        let mut lines = self.lines.clone();
        lines.extend_from_slice(&other.lines);
        Self::new(lines, lo, hi)
    }

    /// Bound for a product of two remainders.
    pub fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (lo, hi) = self.meet_domain(other);
        let mut lines = Vec::with_capacity(self.lines.len() * other.lines.len());
        for a in &self.lines {
            for b in &other.lines {
                lines.push((a.0 + b.0, a.1 + b.1));
            }
        }
        Self::new(lines, lo, hi)
    }

    /// Adds a single term of valuation `c` at π^`e`.
    pub fn with_line(&self, c: Rat, e: Rat) -> Self {
        let mut lines = self.lines.clone();
        lines.push((c, e));
        if self.is_zero() {
            return Self::new(lines, Rat::from_integer(0), None);
        }
        Self::new(lines, self.lo, self.hi)
    }

    /// Multiplication of the remainder by a scalar of valuation `v`.
    pub fn shift(&self, v: Rat) -> Self {
        let lines = self.lines.iter().map(|&(c, e)| (c + v, e)).collect();
        TailBound { lines, lo: self.lo, hi: self.hi }
    }

    /// Bound for g(π^q)-type substitutions with v_s(image) ≥ v_{qs}(g):
    /// slopes scale by q and the domain by 1/q, then the domain is capped at `cap`.
    pub fn rescale(&self, q: Rat, cap: Option<Rat>) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lines = self.lines.iter().map(|&(c, e)| (c, e * q)).collect();
        let hi = min_opt(self.hi.map(|h| h / q), cap);
        Self::new(lines, self.lo / q, hi)
    }

    /// Restricts the domain from above.
    pub fn cap(&self, hi: Rat) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::new(self.lines.clone(), self.lo, min_opt(self.hi, Some(hi)))
    }
}
