//! Convex hull over a corridor side with tangent queries.
//!
//! The hull is recomputed from the chain after each edit; tangents are found
//! by testing every hull vertex.

use std::cmp::Ordering;

use thiserror::Error;

use crate::geom::{dot, orientation, Boundary, Cone, Orientation, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullTree {
    chain: Vec<Point>,
    hull: Vec<Point>,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum TangentError {
    #[error("no tangent point inside the restricting cone")]
    NoTangent,
}

/// Tangency points seen from a query point: `cw` bounds the hull on the
/// clockwise side, `ccw` on the counter-clockwise side. Either may be
/// filtered out by a restricting cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tangents {
    pub cw: Option<Point>,
    pub ccw: Option<Point>,
}

impl Tangents {
    pub fn points(&self) -> Vec<Point> {
        self.cw.iter().chain(self.ccw.iter()).cloned().collect()
    }
}

/// Counter-clockwise hull by monotone chain; collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orientation(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Orientation::Left
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orientation(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Orientation::Left
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl HullTree {
    pub fn new(chain: Vec<Point>) -> Self {
        let hull = convex_hull(&chain);
        HullTree { chain, hull }
    }

    pub fn chain(&self) -> &[Point] {
        &self.chain
    }

    pub fn hull(&self) -> &[Point] {
        &self.hull
    }

    pub fn insert(&mut self, index: usize, p: Point) {
        self.chain.insert(index, p);
        self.hull = convex_hull(&self.chain);
    }

    pub fn remove(&mut self, index: usize) -> Point {
        let p = self.chain.remove(index);
        self.hull = convex_hull(&self.chain);
        p
    }

    /// Extreme hull vertices as seen from `q`. Fails when `q` is inside the
    /// hull or when both tangency points fall outside `restrict`.
    pub fn tangents_from(&self, q: &Point, restrict: Option<&Cone>) -> Result<Tangents, TangentError> {
        let hull = &self.hull;
        if hull.is_empty() || hull.contains(q) {
            return Err(TangentError::NoTangent);
        }
        let dist = |p: &Point| dot(&p.sub(q), &p.sub(q));
        let extreme = |side: Orientation| -> Option<Point> {
            hull.iter()
                .filter(|t| hull.iter().all(|p| orientation(q, t, p) != side))
                .min_by(|a, b| dist(a).cmp(&dist(b)).then(Ordering::Equal))
                .cloned()
        };
        let cw = extreme(Orientation::Right);
        let ccw = extreme(Orientation::Left);
        if cw.is_none() || ccw.is_none() || cw == ccw && hull.len() > 1 {
            return Err(TangentError::NoTangent);
        }
        let keep = |p: Option<Point>| p.filter(|p| restrict.is_none_or(|c| c.contains(p, Boundary::Include)));
        let t = Tangents { cw: keep(cw), ccw: keep(ccw) };
        if t.cw.is_none() && t.ccw.is_none() {
            return Err(TangentError::NoTangent);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    #[test]
    fn segment_side() {
        let h = HullTree::new(vec![p(4, 4), p(4, 6)]);
        let t = h.tangents_from(&p(2, 5), None).unwrap();
        assert_eq!(t.cw, Some(p(4, 4)));
        assert_eq!(t.ccw, Some(p(4, 6)));
    }

    #[test]
    fn convex_chain() {
        let h = HullTree::new(vec![p(6, 2), p(7, 5), p(6, 8)]);
        let t = h.tangents_from(&p(2, 5), None).unwrap();
        assert_eq!(t.points(), vec![p(6, 2), p(6, 8)]);
        // Brute-force check: every hull vertex lies between the two rays.
        for v in h.hull() {
            assert_ne!(orientation(&p(2, 5), &p(6, 2), v), Orientation::Right);
            assert_ne!(orientation(&p(2, 5), &p(6, 8), v), Orientation::Left);
        }
    }

    #[test]
    fn restricted_away() {
        let h = HullTree::new(vec![p(6, 2), p(7, 5), p(6, 8)]);
        let cone = Cone::new(p(2, 5), p(-1, 1), p(-1, -1)).unwrap();
        assert_eq!(h.tangents_from(&p(2, 5), Some(&cone)), Err(TangentError::NoTangent));
    }

    #[test]
    fn edits_track_the_chain() {
        let mut h = HullTree::new(vec![p(0, 0), p(4, 0), p(4, 4)]);
        h.insert(1, p(2, -3));
        assert_eq!(h.hull().len(), 4);
        h.remove(1);
        assert_eq!(h, HullTree::new(vec![p(0, 0), p(4, 0), p(4, 4)]));
    }
}
