//! Visibility inside a single simple polygon.
//!
//! [`sweep`] is the workhorse: it restricts the view from `q` to a cone,
//! cuts the cone at every ring vertex, finds the nearest boundary edge in
//! each sector and reports the visible vertices, the far endpoints of
//! constructed edges, and the sub-cones that leave the polygon through
//! window edges. The query point may lie outside the polygon as long as the
//! cone enters it through a known window.

use std::cmp::Ordering;

use thiserror::Error;

use crate::geom::{
    cross, cross_sign, dir_in_cone, dot, orientation, point_in_ring, point_on_ring, ray_line_point,
    segments_cross_properly, signed_area2, strictly_inside_segment, Boundary, Cone, Coord, Orientation, Point, Segment,
};

/// Whether a cone boundary ray passes through an occluding vertex
/// (`Genuine`) or is an artificial split (`Cut`). Hits on a cut ray that
/// are not vertices are not part of the visibility polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RayTag {
    Genuine,
    Cut,
}

/// Cone given by two direction vectors, `left` to `right` counter-clockwise,
/// spanning strictly less than a half turn.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SweepCone {
    pub left: Point,
    pub right: Point,
    pub left_tag: RayTag,
    pub right_tag: RayTag,
}

impl SweepCone {
    pub fn new(left: Point, right: Point, left_tag: RayTag, right_tag: RayTag) -> Option<Self> {
        (cross_sign(&left, &right) == Ordering::Greater).then_some(SweepCone { left, right, left_tag, right_tag })
    }

    pub fn contains_dir(&self, d: &Point, b: Boundary) -> bool {
        dir_in_cone(&self.left, &self.right, d, b)
    }

    /// Closed cones sharing at least one direction.
    pub fn meets(&self, other: &SweepCone) -> bool {
        self.contains_dir(&other.left, Boundary::Include) || other.contains_dir(&self.left, Boundary::Include)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emission {
    pub point: Point,
    /// The point is a ring vertex (otherwise it is a constructed endpoint).
    pub vertex: bool,
    pub edge: usize,
    /// Order among points on the same ray from `q`: a constructed point
    /// seen past its occluding vertex sorts before it (`-1`) or after it
    /// (`1`); vertices are `0`.
    pub tie: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exit {
    /// Ring edge index of the window crossed.
    pub edge: usize,
    pub window: usize,
    pub cone: SweepCone,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepResult {
    pub emissions: Vec<Emission>,
    pub exits: Vec<Exit>,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum SweepError {
    #[error("a ray inside the cone never leaves the polygon")]
    Unbounded,
}

fn ccw_before(a: &Point, b: &Point) -> Ordering {
    cross_sign(b, a)
}

/// Nearest ring edge crossed from inside to outside along `d`, beyond the
/// entry edge when one is given.
fn nearest_exit(ring: &[Point], q: &Point, d: &Point, entry: Option<usize>) -> Option<usize> {
    let m = ring.len();
    let t_min: Option<Coord> = entry.map(|e| {
        let (a, b) = (&ring[e], &ring[(e + 1) % m]);
        let ab = b.sub(a);
        &cross(&a.sub(q), &ab) / &cross(d, &ab)
    });
    let mut best: Option<(Coord, usize)> = None;
    for i in 0..m {
        if Some(i) == entry {
            continue;
        }
        let (a, b) = (&ring[i], &ring[(i + 1) % m]);
        let sa = cross_sign(d, &a.sub(q));
        let sb = cross_sign(d, &b.sub(q));
        if sa == Ordering::Equal || sb == Ordering::Equal || sa == sb {
            continue;
        }
        let ab = b.sub(a);
        // Leaving the region means crossing the edge from its left side.
        if cross_sign(&ab, d) != Ordering::Less {
            continue;
        }
        let t = &cross(&a.sub(q), &ab) / &cross(d, &ab);
        let ok = match &t_min {
            Some(tm) => &t > tm,
            None => t.signum() >= 0,
        };
        if ok && best.as_ref().is_none_or(|(bt, _)| &t < bt) {
            best = Some((t, i));
        }
    }
    best.map(|(_, i)| i)
}

/// Visible part of a ring from `q` inside `cone`. `windows[i]` names the
/// window carried by edge `i`, if any. `entry` is the edge the cone came in
/// through; `None` means `q` itself lies in the polygon.
pub fn sweep(
    ring: &[Point],
    windows: &[Option<usize>],
    q: &Point,
    cone: &SweepCone,
    entry: Option<usize>,
) -> Result<SweepResult, SweepError> {
    let m = ring.len();
    // Point where `d` meets the line of edge `e`; `None` when `q` lies on
    // that line, which only happens for a window through `q`.
    let at = |e: usize, d: &Point| -> Option<Point> {
        let (a, b) = (&ring[e], &ring[(e + 1) % m]);
        if orientation(a, b, q) == Orientation::Collinear {
            return None;
        }
        ray_line_point(q, d, a, b)
    };
    let t_of = |p: &Option<Point>, d: &Point| p.as_ref().map(|p| dot(&p.sub(q), d));
    let mut crit: Vec<Point> =
        ring.iter().filter(|p| *p != q).map(|p| p.sub(q)).filter(|d| cone.contains_dir(d, Boundary::Exclude)).collect();
    crit.sort_by(ccw_before);
    crit.dedup_by(|a, b| cross_sign(a, b) == Ordering::Equal);
    crit.insert(0, cone.left.clone());
    crit.push(cone.right.clone());

    let k = crit.len() - 1;
    let mut hits: Vec<usize> = Vec::with_capacity(k);
    for j in 0..k {
        let rep = crit[j].add(&crit[j + 1]);
        hits.push(nearest_exit(ring, q, &rep, entry).ok_or(SweepError::Unbounded)?);
    }

    let is_ring_vertex = |e: usize, p: &Point| p == &ring[e] || p == &ring[(e + 1) % m];
    let mut out = SweepResult::default();
    let emit = |out: &mut SweepResult, e: usize, p: Point, tie: i8| {
        let vertex = is_ring_vertex(e, &p);
        let tie = if vertex { 0 } else { tie };
        out.emissions.push(Emission { point: p, vertex, edge: e, tie });
    };

    let boundary = |out: &mut SweepResult, e: usize, d: &Point, tag: RayTag, tie: i8| {
        if windows[e].is_some() {
            return;
        }
        if let Some(p) = at(e, d) {
            if is_ring_vertex(e, &p) || tag == RayTag::Genuine {
                emit(out, e, p, tie);
            }
        }
    };

    boundary(&mut out, hits[0], &crit[0], cone.left_tag, 1);
    for j in 1..k {
        let d = &crit[j];
        let (el, er) = (hits[j - 1], hits[j]);
        let floor = entry.and_then(|e| t_of(&at(e, d), d));
        let w = ring
            .iter()
            .filter(|p| *p != q)
            .filter(|p| {
                let v = p.sub(q);
                cross_sign(&v, d) == Ordering::Equal && dot(&v, d).signum() > 0
            })
            .filter(|p| floor.as_ref().is_none_or(|f| &dot(&p.sub(q), d) > f))
            .min_by(|a, b| dot(&a.sub(q), d).cmp(&dot(&b.sub(q), d)))
            .cloned();
        let Some(w) = w else { continue };
        let (pl, pr) = (at(el, d), at(er, d));
        let (tl, tr) = (t_of(&pl, d), t_of(&pr, d));
        let tw = dot(&w.sub(q), d);
        if tl.as_ref().is_some_and(|t| &tw > t) || tr.as_ref().is_some_and(|t| &tw > t) {
            continue;
        }
        let we = if pl.as_ref() == Some(&w) { el } else { er };
        // Order along the sweep: a far point reached before the vertex, the
        // vertex, then a far point reached after it.
        if let (Some(p), Some(t)) = (pl, tl) {
            if windows[el].is_none() && t > tw {
                emit(&mut out, el, p, -1);
            }
        }
        out.emissions.push(Emission { point: w, vertex: true, edge: we, tie: 0 });
        if let (Some(p), Some(t)) = (pr, tr) {
            if windows[er].is_none() && t > tw {
                emit(&mut out, er, p, 1);
            }
        }
    }
    boundary(&mut out, hits[k - 1], &crit[k], cone.right_tag, -1);

    let mut j = 0;
    while j < k {
        let e = hits[j];
        let Some(win) = windows[e] else {
            j += 1;
            continue;
        };
        let mut end = j;
        while end + 1 < k && hits[end + 1] == e {
            end += 1;
        }
        let left_tag = if j == 0 { cone.left_tag } else { RayTag::Genuine };
        let right_tag = if end + 1 == k { cone.right_tag } else { RayTag::Genuine };
        out.exits.push(Exit {
            edge: e,
            window: win,
            cone: SweepCone { left: crit[j].clone(), right: crit[end + 1].clone(), left_tag, right_tag },
        });
        j = end + 1;
    }
    out.emissions.dedup_by(|a, b| a.point == b.point);
    Ok(out)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polygon needs at least 3 vertices")]
    TooSmall,
    #[error("polygon is not simple and counter-clockwise")]
    NotSimple,
    #[error("index out of range")]
    Index,
    #[error("cone is degenerate")]
    EmptyCone,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplePoly {
    ring: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    ObstacleVertex,
    ConstructedEndpoint { host_edge: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeEntry {
    pub point: Point,
    pub kind: EntryKind,
}

fn is_simple_ccw(ring: &[Point]) -> bool {
    let m = ring.len();
    if m < 3 || signed_area2(ring).signum() <= 0 {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    if !ring.iter().all(|p| seen.insert(p)) {
        return false;
    }
    let seg = |i: usize| Segment::new(ring[i].clone(), ring[(i + 1) % m].clone());
    for a in 0..m {
        for b in a + 1..m {
            let (sa, sb) = (seg(a), seg(b));
            let adjacent = b == a + 1 || (a == 0 && b == m - 1);
            if adjacent {
                let shared = if b == a + 1 { &sa.b } else { &sa.a };
                let (x, y) = if b == a + 1 { (&sa.a, &sb.b) } else { (&sa.b, &sb.a) };
                if orientation(x, shared, y) == Orientation::Collinear
                    && (strictly_inside_segment(x, shared, y) || strictly_inside_segment(shared, y, x))
                {
                    return false;
                }
            } else if crate::geom::segments_intersect(&sa, &sb, crate::geom::SegmentMode::Closed) {
                return false;
            }
        }
    }
    true
}

impl SimplePoly {
    pub fn new(ring: Vec<Point>) -> Result<Self, PolyError> {
        if ring.len() < 3 {
            return Err(PolyError::TooSmall);
        }
        if !is_simple_ccw(&ring) {
            return Err(PolyError::NotSimple);
        }
        Ok(SimplePoly { ring })
    }

    pub fn ring(&self) -> &[Point] {
        &self.ring
    }

    pub fn insert(&self, index: usize, p: Point) -> Result<SimplePoly, PolyError> {
        if index >= self.ring.len() {
            return Err(PolyError::Index);
        }
        let mut ring = self.ring.clone();
        ring.insert(index + 1, p);
        SimplePoly::new(ring)
    }

    pub fn delete(&self, index: usize) -> Result<SimplePoly, PolyError> {
        if index >= self.ring.len() {
            return Err(PolyError::Index);
        }
        let mut ring = self.ring.clone();
        ring.remove(index);
        SimplePoly::new(ring)
    }

    /// First boundary point hit from an interior origin. A ray through a
    /// corner reports the edge that starts at that corner.
    pub fn ray_shoot(&self, origin: &Point, dir: &Point) -> (Point, usize) {
        let m = self.ring.len();
        let ray = crate::geom::Ray::new(origin.clone(), dir.clone()).expect("nonzero direction");
        let mut best: Option<(Coord, Point, usize)> = None;
        for i in 0..m {
            let seg = Segment::new(self.ring[i].clone(), self.ring[(i + 1) % m].clone());
            if let Some((p, t)) = crate::geom::ray_segment_hit(&ray, &seg) {
                if t.signum() <= 0 {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((bt, _, _)) => t < *bt || (t == *bt && p == self.ring[i]),
                };
                if better {
                    best = Some((t, p, i));
                }
            }
        }
        let (_, p, i) = best.expect("origin inside a closed polygon");
        (p, i)
    }

    /// Closure visibility: the open segment may touch the boundary but not
    /// leave the polygon.
    pub fn is_visible_in(&self, a: &Point, b: &Point) -> bool {
        if a == b {
            return true;
        }
        let m = self.ring.len();
        let seg = Segment::new(a.clone(), b.clone());
        let mut cuts = vec![a.clone(), b.clone()];
        for i in 0..m {
            if segments_cross_properly(&seg, &Segment::new(self.ring[i].clone(), self.ring[(i + 1) % m].clone())) {
                return false;
            }
            if strictly_inside_segment(a, b, &self.ring[i]) {
                cuts.push(self.ring[i].clone());
            }
        }
        let d = b.sub(a);
        cuts.sort_by_key(|u| dot(&u.sub(a), &d));
        let half = Coord::ratio(1, 2);
        cuts.windows(2).all(|w| {
            let mid = w[0].add(&w[1]).scale(&half);
            point_in_ring(&self.ring, &mid) || point_on_ring(&self.ring, &mid)
        })
    }

    /// Vertices and constructed endpoints visible from an interior `q`
    /// inside `vc`, sorted by angle from the cone's left ray and then by
    /// distance. Hits on the bounding rays that are not vertices are left
    /// out.
    pub fn visible_in_cone(&self, q: &Point, vc: &Cone) -> Result<Vec<ConeEntry>, PolyError> {
        let cone =
            SweepCone::new(vc.left.clone(), vc.right.clone(), RayTag::Cut, RayTag::Cut).ok_or(PolyError::EmptyCone)?;
        let windows = vec![None; self.ring.len()];
        let res = sweep(&self.ring, &windows, q, &cone, None).expect("closed polygon");
        let mut out: Vec<ConeEntry> = res
            .emissions
            .into_iter()
            .map(|e| ConeEntry {
                kind: if e.vertex {
                    EntryKind::ObstacleVertex
                } else {
                    EntryKind::ConstructedEndpoint { host_edge: e.edge }
                },
                point: e.point,
            })
            .collect();
        out.sort_by(|a, b| {
            let (da, db) = (a.point.sub(q), b.point.sub(q));
            ccw_before(&da, &db).then_with(|| dot(&da, &da).cmp(&dot(&db, &db)))
        });
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{ray_segment_hit, Ray};

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    fn poly(pts: &[(i64, i64)]) -> SimplePoly {
        SimplePoly::new(pts.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
    }

    fn l_hexagon() -> SimplePoly {
        poly(&[(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)])
    }

    #[test]
    fn ray_shoot_examples() {
        let b = poly(&[(0, 0), (10, 0), (10, 10), (0, 10)]);
        assert_eq!(b.ray_shoot(&p(5, 5), &p(1, 0)), (p(10, 5), 1));
        assert_eq!(b.ray_shoot(&p(5, 5), &p(1, 1)), (p(10, 10), 2));
    }

    #[test]
    fn visibility_examples() {
        let b = poly(&[(0, 0), (10, 0), (10, 10), (0, 10)]);
        assert!(b.is_visible_in(&p(1, 1), &p(9, 9)));
        let h = l_hexagon();
        assert!(!h.is_visible_in(&p(3, 1), &p(1, 4)));
        assert!(h.is_visible_in(&p(3, 1), &p(1, 3)));
        assert!(h.is_visible_in(&p(3, 1), &p(2, 2)));
        assert!(h.is_visible_in(&p(1, 3), &p(3, 1)) == h.is_visible_in(&p(3, 1), &p(1, 3)));
    }

    #[test]
    fn convex_polygon_sees_everything() {
        let c = poly(&[(0, 0), (6, 0), (8, 4), (4, 8), (-1, 5)]);
        let q = p(3, 3);
        let cone = Cone::new(q.clone(), p(1, -100), p(1, 100)).unwrap();
        let got = c.visible_in_cone(&q, &cone).unwrap();
        assert!(got.iter().all(|e| e.kind == EntryKind::ObstacleVertex));
        let want: Vec<Point> = c.ring().iter().filter(|v| cone.contains(v, Boundary::Include)).cloned().collect();
        assert_eq!(got.len(), want.len());
    }

    #[test]
    fn l_hexagon_cone_matches_brute_force() {
        let h = poly(&[(0, 0), (8, 0), (8, 4), (4, 4), (4, 8), (0, 8)]);
        let q = p(6, 1);
        let cone = Cone::new(q.clone(), p(1, 3), p(-3, -1)).unwrap();
        let got = h.visible_in_cone(&q, &cone).unwrap();
        assert_eq!(got, brute_cone(&h, &q, &cone));
        assert!(got.iter().any(|e| e.point == p(4, 4) && e.kind == EntryKind::ObstacleVertex));
        assert!(got.iter().any(|e| matches!(e.kind, EntryKind::ConstructedEndpoint { .. })));
    }

    #[test]
    fn edit_round_trip_and_shoot_after_edit() {
        let h = l_hexagon();
        let h2 = h.insert(0, p(2, -1)).unwrap();
        assert_eq!(h2.delete(1).unwrap(), h);
        let q = p(1, 1);
        for k in 0..100i64 {
            let dir = p(k % 13 - 6, (k * 7) % 11 - 5);
            if dir.is_zero() {
                continue;
            }
            let (hit, e) = h2.ray_shoot(&q, &dir);
            let (want, _) = linear_scan(&h2, &q, &dir);
            assert_eq!(hit, want);
            let m = h2.ring().len();
            assert!(crate::geom::on_segment(&h2.ring()[e], &h2.ring()[(e + 1) % m], &hit));
        }
    }

    fn linear_scan(s: &SimplePoly, q: &Point, d: &Point) -> (Point, Coord) {
        let m = s.ring().len();
        let ray = Ray::new(q.clone(), d.clone()).unwrap();
        (0..m)
            .filter_map(|i| ray_segment_hit(&ray, &Segment::new(s.ring()[i].clone(), s.ring()[(i + 1) % m].clone())))
            .filter(|(_, t)| t.signum() > 0)
            .min_by(|a, b| a.1.cmp(&b.1))
            .unwrap()
    }

    /// Visible vertices inside the closed cone, and for every visible vertex
    /// whose neighbours lie on one side of the sight line, the point where
    /// the extended ray meets the boundary.
    pub(crate) fn brute_cone(s: &SimplePoly, q: &Point, cone: &Cone) -> Vec<ConeEntry> {
        let ring = s.ring();
        let m = ring.len();
        let mut out = Vec::new();
        for (i, v) in ring.iter().enumerate() {
            if !cone.contains(v, Boundary::Include) || !s.is_visible_in(q, v) {
                continue;
            }
            out.push(ConeEntry { point: v.clone(), kind: EntryKind::ObstacleVertex });
            let a = orientation(q, v, &ring[(i + m - 1) % m]);
            let b = orientation(q, v, &ring[(i + 1) % m]);
            if a == b && a != Orientation::Collinear {
                let ray = Ray::through(q, v).unwrap();
                let one = Coord::from_int(1);
                let hit = (0..m)
                    .filter(|&e| e != i && (e + 1) % m != i)
                    .filter_map(|e| {
                        ray_segment_hit(&ray, &Segment::new(ring[e].clone(), ring[(e + 1) % m].clone()))
                            .map(|(p, t)| (p, t, e))
                    })
                    .filter(|(_, t, _)| t > &one)
                    .min_by(|x, y| x.1.cmp(&y.1))
                    .unwrap();
                out.push(ConeEntry { point: hit.0, kind: EntryKind::ConstructedEndpoint { host_edge: hit.2 } });
            }
        }
        out.sort_by(|a, b| {
            let (da, db) = (a.point.sub(q), b.point.sub(q));
            ccw_before(&da, &db).then_with(|| dot(&da, &da).cmp(&dot(&db, &db)))
        });
        out
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
        #[test]
        fn star_polygons_match_brute_force(
            radii in proptest::collection::vec(20i64..100, 5..14),
            lx in -50i64..50, ly in -50i64..50, turn in 1i64..40,
        ) {
            let n = radii.len() as f64;
            let ring: Vec<Point> = radii.iter().enumerate().map(|(i, r)| {
                let a = std::f64::consts::TAU * i as f64 / n;
                p((*r as f64 * a.cos()).round() as i64, (*r as f64 * a.sin()).round() as i64)
            }).collect();
            let s = SimplePoly::new(ring);
            proptest::prop_assume!(s.is_ok());
            let s = s.unwrap();
            let q = p(1, 2);
            let left = p(lx, ly);
            proptest::prop_assume!(!left.is_zero());
            let right = p(lx - turn * ly / 8, ly + turn * lx / 8);
            let cone = Cone::new(q.clone(), left.clone(), right.clone());
            proptest::prop_assume!(cone.is_ok());
            let cone = cone.unwrap();
            proptest::prop_assume!(!s.ring().iter().any(|v| orientation(&q, &q.add(&cone.left), v) == Orientation::Collinear
                || orientation(&q, &q.add(&cone.right), v) == Orientation::Collinear));
            let m = s.ring().len();
            proptest::prop_assume!((0..m).all(|i| (i + 1..m).all(|j| orientation(&q, &s.ring()[i], &s.ring()[j]) != Orientation::Collinear)));
            let got = s.visible_in_cone(&q, &cone).unwrap();
            proptest::prop_assert_eq!(got, brute_cone(&s, &q, &cone));
        }
    }
}
