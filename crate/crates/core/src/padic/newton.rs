use super::Rat;
use crate::error::{Error, Result};

/// Lower convex polygon with integer abscissae and rational ordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(i64, Rat)>,
}

impl NewtonPolygon {
    /// Lower convex hull of a set of points with distinct abscissae.
    pub fn from_points(points: &[(i64, Rat)]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort_by_key(|a| a.0);
        if pts.is_empty() {
            return Err(Error::Invalid("polygon needs at least one point".into()));
        }
        let mut hull: Vec<(i64, Rat)> = Vec::new();
        for pt in pts {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                let s12 = (y2 - y1) / Rat::from_integer(x2 - x1);
                let s2p = (pt.1 - y2) / Rat::from_integer(pt.0 - x2);
                if s12 >= s2p {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        Ok(NewtonPolygon { vertices: hull })
    }

    /// The polygon starting at (0,0) whose segments have the given slopes,
    /// taken in ascending order and each of horizontal length one.
    pub fn from_slopes(slopes: &[Rat]) -> Self {
        let mut s = slopes.to_vec();
        s.sort();
        let mut vertices = vec![(0i64, Rat::from_integer(0))];
        for (i, slope) in s.iter().enumerate() {
            let (x, y) = *vertices.last().unwrap();
            let next = (x + 1, y + slope);
            let merge = i > 0 && s[i - 1] == *slope;
            if merge {
                *vertices.last_mut().unwrap() = next;
            } else {
                vertices.push(next);
            }
        }
        NewtonPolygon { vertices }
    }

    pub fn vertices(&self) -> &[(i64, Rat)] {
        &self.vertices
    }

    /// Segment slopes, each repeated by its horizontal length.
    pub fn slopes(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        for w in self.vertices.windows(2) {
            let len = w[1].0 - w[0].0;
            let s = (w[1].1 - w[0].1) / Rat::from_integer(len);
            out.extend(std::iter::repeat(s).take(len as usize));
        }
        out
    }

    /// Valuations of the roots of a polynomial whose coefficient valuations
    /// produced this polygon: the negated slopes.
    pub fn root_valuations(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.slopes().into_iter().map(|s| -s).collect();
        v.sort();
        v
    }

    pub fn start(&self) -> (i64, Rat) {
        self.vertices[0]
    }

    pub fn end(&self) -> (i64, Rat) {
        *self.vertices.last().unwrap()
    }

    /// Height of the polygon above abscissa `x`, which must lie in its range.
    pub fn eval(&self, x: Rat) -> Rat {
        for w in self.vertices.windows(2) {
            let (x0, y0) = (Rat::from_integer(w[0].0), w[0].1);
            let (x1, y1) = (Rat::from_integer(w[1].0), w[1].1);
            if x >= x0 && x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        self.vertices[0].1
    }

    /// True when `self` lies on or below `other` on their common range.
    pub fn lies_on_or_below(&self, other: &NewtonPolygon) -> bool {
        self.first_point_above(other).is_none()
    }

    /// Smallest vertex abscissa (of either polygon) where `self` is strictly above `other`.
    pub fn first_point_above(&self, other: &NewtonPolygon) -> Option<i64> {
        let lo = self.start().0.max(other.start().0);
        let hi = self.end().0.min(other.end().0);
        let mut xs: Vec<i64> = self
            .vertices
            .iter()
            .chain(other.vertices.iter())
            .map(|v| v.0)
            .filter(|&x| x >= lo && x <= hi)
            .collect();
        xs.sort();
        xs.dedup();
        xs.into_iter()
            .find(|&x| self.eval(Rat::from_integer(x)) > other.eval(Rat::from_integer(x)))
    }
}

/// Newton polygon of Σ a_i T^i from the valuations v(a_i); `None` marks a zero coefficient.
pub fn newton_polygon_of(valuations: &[Option<Rat>]) -> Result<NewtonPolygon> {
    let pts: Vec<(i64, Rat)> = valuations
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v)))
        .collect();
    if pts.is_empty() {
        return Err(Error::Invalid("all valuations are infinite".into()));
    }
    if valuations.last().unwrap().is_none() {
        return Err(Error::Invalid("leading coefficient has infinite valuation".into()));
    }
    NewtonPolygon::from_points(&pts)
}
