//! Brute-force ground truth computed straight from a [`Scene`].
//!
//! The closure rule lives here: a segment is a line of sight when its open
//! part avoids every obstacle's open interior. Touching or running along
//! obstacle boundaries is allowed.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::{Scene, VertexRef};
use crate::geom::{
    dot, orientation, point_in_ring, point_on_ring, ray_segment_hit, segments_cross_properly, strictly_inside_segment,
    Coord, Orientation, Point, PseudoAngle, Ray, Segment,
};
use crate::par::{self, Exec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    ObstacleVertex,
    ConstructedVertex,
    BoxPoint,
}

impl PointKind {
    pub fn label(self) -> &'static str {
        match self {
            PointKind::ObstacleVertex => "vertex",
            PointKind::ConstructedVertex => "constructed",
            PointKind::BoxPoint => "box",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VpEntry {
    pub point: Point,
    pub kind: PointKind,
}

/// Closed boundary of a visibility polygon, counter-clockwise around the
/// query point.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VisibilityPolygon {
    pub entries: Vec<VpEntry>,
}

impl VisibilityPolygon {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn points(&self) -> Vec<Point> {
        self.entries.iter().map(|e| e.point.clone()).collect()
    }

    /// Equality up to rotation of the closed boundary.
    pub fn cyclic_eq(&self, other: &VisibilityPolygon) -> bool {
        let (a, b) = (&self.entries, &other.entries);
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..b.len()).any(|shift| b[shift] == a[0] && (0..a.len()).all(|i| a[i] == b[(i + shift) % b.len()]))
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "p {} {} {}", e.point.x, e.point.y, e.kind.label());
        }
        s
    }

    /// Pairwise edge test: no two non-adjacent boundary edges meet.
    pub fn is_simple(&self) -> bool {
        let n = self.entries.len();
        if n < 3 {
            return false;
        }
        let seg = |i: usize| Segment::new(self.entries[i].point.clone(), self.entries[(i + 1) % n].point.clone());
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if crate::geom::segments_intersect(&seg(i), &seg(j), crate::geom::SegmentMode::Closed) {
                    return false;
                }
            }
        }
        true
    }

    pub fn contains_strictly(&self, q: &Point) -> bool {
        let ring = self.points();
        point_in_ring(&ring, q) && !point_on_ring(&ring, q)
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum QueryError {
    #[error("query point lies outside the open bounding box")]
    OutsideBox,
    #[error("query point lies inside or on an obstacle")]
    InsideObstacle,
}

pub fn check_query(s: &Scene, q: &Point) -> Result<(), QueryError> {
    if !s.strictly_inside_box(q) {
        return Err(QueryError::OutsideBox);
    }
    if s.obstacle_containing(q).is_some() {
        return Err(QueryError::InsideObstacle);
    }
    Ok(())
}

/// Line of sight between two points of the closed free space.
pub fn oracle_is_visible(s: &Scene, a: &Point, b: &Point) -> bool {
    if a == b {
        return true;
    }
    let seg = Segment::new(a.clone(), b.clone());
    for o in &s.obstacles {
        let m = o.len();
        let mut cuts: Vec<Point> = vec![a.clone(), b.clone()];
        for i in 0..m {
            let e = o.edge(i);
            if segments_cross_properly(&seg, &e) {
                return false;
            }
            if strictly_inside_segment(a, b, &o.ring[i]) {
                cuts.push(o.ring[i].clone());
            }
        }
        // Between consecutive cut points the segment is entirely inside,
        // outside, or on the boundary of this obstacle.
        let d = b.sub(a);
        cuts.sort_by_key(|u| dot(&u.sub(a), &d));
        let half = Coord::ratio(1, 2);
        for w in cuts.windows(2) {
            let mid = w[0].add(&w[1]).scale(&half);
            if point_in_ring(&o.ring, &mid) && !point_on_ring(&o.ring, &mid) {
                return false;
            }
        }
    }
    true
}

/// Which side of the sight line `q -> w` both ring neighbours of the
/// obstacle vertex `w` lie on, when they agree. Visibility then continues
/// past `w`.
pub fn continuation_side(s: &Scene, r: VertexRef, q: &Point) -> Option<Orientation> {
    let o = &s.obstacles[r.obstacle];
    let w = &o.ring[r.index];
    let a = orientation(q, w, o.prev(r.index));
    let b = orientation(q, w, o.next(r.index));
    (a == b && a != Orientation::Collinear).then_some(a)
}

/// First point strictly beyond `w` on the ray `q -> w` that lies on an
/// obstacle edge not incident to `w`, or on the box.
pub fn shoot_past(s: &Scene, q: &Point, w: &Point) -> Point {
    let ray = Ray::through(q, w).expect("distinct points");
    let one = Coord::from_int(1);
    let mut best: Option<(Coord, Point)> = None;
    let mut consider = |seg: &Segment| {
        if &seg.a == w || &seg.b == w {
            return;
        }
        if let Some((p, t)) = ray_segment_hit(&ray, seg) {
            if t > one && best.as_ref().is_none_or(|(bt, _)| &t < bt) {
                best = Some((t, p));
            }
        }
    };
    for (_, e) in s.edges() {
        consider(&e);
    }
    for e in s.box_edges() {
        consider(&e);
    }
    best.expect("ray leaves the box").1
}

fn kind_of(s: &Scene, index: &HashMap<Point, VertexRef>, p: &Point) -> PointKind {
    if index.contains_key(p) {
        PointKind::ObstacleVertex
    } else if s.is_box_corner(p) {
        PointKind::BoxPoint
    } else {
        PointKind::ConstructedVertex
    }
}

/// Visibility polygon by angular sweep over every vertex with direct
/// visibility tests and ray extension past occluding vertices.
pub fn oracle_vp(s: &Scene, q: &Point) -> Result<VisibilityPolygon, QueryError> {
    check_query(s, q)?;
    let index = s.vertex_index();
    let mut cands: Vec<(Point, Option<VertexRef>)> = s.vertices().map(|(r, p)| (p.clone(), Some(r))).collect();
    cands.extend(s.box_corners().into_iter().map(|p| (p, None)));
    cands.sort_by(|(a, _), (b, _)| {
        PseudoAngle::of_dir(&a.sub(q))
            .cmp(&PseudoAngle::of_dir(&b.sub(q)))
            .then_with(|| dot(&a.sub(q), &a.sub(q)).cmp(&dot(&b.sub(q), &b.sub(q))))
    });
    let mut entries: Vec<VpEntry> = Vec::new();
    let push = |entries: &mut Vec<VpEntry>, p: Point| {
        if entries.last().is_none_or(|e| e.point != p) && entries.first().is_none_or(|e| e.point != p) {
            let kind = kind_of(s, &index, &p);
            entries.push(VpEntry { point: p, kind });
        }
    };
    for (w, r) in &cands {
        if !oracle_is_visible(s, q, w) {
            continue;
        }
        let side = r.and_then(|r| continuation_side(s, r, q));
        match side {
            Some(Orientation::Left) => {
                let c = shoot_past(s, q, w);
                push(&mut entries, c);
                push(&mut entries, w.clone());
            }
            Some(Orientation::Right) => {
                let c = shoot_past(s, q, w);
                push(&mut entries, w.clone());
                push(&mut entries, c);
            }
            _ => push(&mut entries, w.clone()),
        }
    }
    Ok(VisibilityPolygon { entries })
}

/// Visibility-graph edge between two obstacle vertices, stored with the
/// smaller point first.
pub type VgEdge = (Point, Point);

pub fn vg_edge(a: &Point, b: &Point) -> VgEdge {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

pub fn oracle_vg(s: &Scene) -> BTreeSet<VgEdge> {
    oracle_vg_with(s, Exec::default())
}

pub fn oracle_vg_with(s: &Scene, exec: Exec) -> BTreeSet<VgEdge> {
    let pts: Vec<Point> = s.vertices().map(|(_, p)| p.clone()).collect();
    let pairs: Vec<(usize, usize)> = (0..pts.len()).flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j))).collect();
    par::filter_map(exec, &pairs, |&(i, j)| oracle_is_visible(s, &pts[i], &pts[j]).then(|| vg_edge(&pts[i], &pts[j])))
        .into_iter()
        .collect()
}

/// Oracle polygons for many query points at once.
pub fn oracle_vp_batch(s: &Scene, qs: &[Point], exec: Exec) -> Vec<Result<VisibilityPolygon, QueryError>> {
    par::map(exec, qs, |q| oracle_vp(s, q))
}

/// `e <obs>:<idx> <obs>:<idx>` lines, sorted.
pub fn dump_vg(s: &Scene, edges: &BTreeSet<VgEdge>) -> String {
    let index = s.vertex_index();
    let name = |p: &Point| {
        let r = index[p];
        (s.obstacles[r.obstacle].id, r.index)
    };
    let mut rows: Vec<((u32, usize), (u32, usize))> = edges
        .iter()
        .map(|(a, b)| {
            let (x, y) = (name(a), name(b));
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    rows.sort();
    let mut out = String::new();
    for ((a, i), (b, j)) in rows {
        let _ = writeln!(out, "e {a}:{i} {b}:{j}");
    }
    out
}

/// Rotation-invariant comparison helper that reports the first mismatch.
pub fn describe_vp_diff(got: &VisibilityPolygon, want: &VisibilityPolygon) -> Option<String> {
    if got.cyclic_eq(want) {
        return None;
    }
    Some(format!("got:\n{}want:\n{}", got.dump(), want.dump()))
}

/// Ordering of two points by angle around `q`, then distance.
pub fn angular_order(q: &Point, a: &Point, b: &Point) -> Ordering {
    PseudoAngle::of_dir(&a.sub(q))
        .cmp(&PseudoAngle::of_dir(&b.sub(q)))
        .then_with(|| dot(&a.sub(q), &a.sub(q)).cmp(&dot(&b.sub(q), &b.sub(q))))
}
