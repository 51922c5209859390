//! Greedy constrained triangulation.
//!
//! Candidate diagonals are all vertex pairs whose open segment lies in the
//! region, contains no vertex and crosses no constraint; taking them
//! shortest first and keeping each one that crosses nothing already kept
//! yields a maximal non-crossing set, hence a triangulation.

use std::collections::{BTreeSet, HashMap};

use crate::domain::Scene;
use crate::geom::{
    dot, in_open_triangle, orientation, point_in_ring, point_on_ring, segments_cross_properly, strictly_inside_segment,
    Coord, Orientation, Point, Segment,
};

#[derive(Clone, Debug)]
pub struct Triangulation {
    pub points: Vec<Point>,
    /// Counter-clockwise vertex index triples.
    pub tris: Vec<[usize; 3]>,
    /// Constraint edges as sorted index pairs.
    pub constraints: BTreeSet<(usize, usize)>,
}

impl Triangulation {
    pub fn is_constraint(&self, a: usize, b: usize) -> bool {
        self.constraints.contains(&(a.min(b), a.max(b)))
    }

    pub fn tri_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.tris[t];
        [self.points[a].clone(), self.points[b].clone(), self.points[c].clone()]
    }
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn greedy(points: Vec<Point>, constraints: BTreeSet<(usize, usize)>, inside: impl Fn(&Point) -> bool) -> Triangulation {
    let n = points.len();
    let half = Coord::ratio(1, 2);
    let csegs: Vec<Segment> =
        constraints.iter().map(|&(a, b)| Segment::new(points[a].clone(), points[b].clone())).collect();
    let mut cands: Vec<(Coord, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if constraints.contains(&(i, j)) {
                continue;
            }
            let (a, b) = (&points[i], &points[j]);
            if points.iter().any(|p| strictly_inside_segment(a, b, p)) {
                continue;
            }
            let s = Segment::new(a.clone(), b.clone());
            if csegs.iter().any(|c| segments_cross_properly(&s, c)) {
                continue;
            }
            if !inside(&a.add(b).scale(&half)) {
                continue;
            }
            let d = b.sub(a);
            cands.push((dot(&d, &d), i, j));
        }
    }
    cands.sort();
    let mut kept: Vec<(usize, usize)> = Vec::new();
    let mut kept_segs: Vec<Segment> = Vec::new();
    for (_, i, j) in cands {
        let s = Segment::new(points[i].clone(), points[j].clone());
        if kept_segs.iter().any(|k| segments_cross_properly(&s, k)) {
            continue;
        }
        kept.push((i, j));
        kept_segs.push(s);
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(a, b) in constraints.iter().chain(kept.iter()) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let third = Coord::ratio(1, 3);
    let mut tris = Vec::new();
    for u in 0..n {
        for &v in adj[u].range(u + 1..) {
            for &w in adj[v].range(v + 1..) {
                if !adj[u].contains(&w) {
                    continue;
                }
                let (pu, pv, pw) = (&points[u], &points[v], &points[w]);
                let o = orientation(pu, pv, pw);
                if o == Orientation::Collinear {
                    continue;
                }
                if points.iter().any(|p| in_open_triangle(pu, pv, pw, p)) {
                    continue;
                }
                let centroid = pu.add(pv).add(pw).scale(&third);
                if !inside(&centroid) {
                    continue;
                }
                tris.push(if o == Orientation::Left { [u, v, w] } else { [u, w, v] });
            }
        }
    }
    Triangulation { points, tris, constraints }
}

/// Triangulates the free space of a scene. Box corners come first, then the
/// obstacle vertices in scene order. `forced` edges become extra
/// constraints.
pub fn triangulate_scene(s: &Scene, forced: &[(Point, Point)]) -> Triangulation {
    let mut points: Vec<Point> = s.box_corners().to_vec();
    points.extend(s.vertices().map(|(_, p)| p.clone()));
    let index: HashMap<Point, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut constraints = BTreeSet::new();
    for i in 0..4 {
        constraints.insert(sorted(i, (i + 1) % 4));
    }
    let mut base = 4;
    for o in &s.obstacles {
        let m = o.len();
        for i in 0..m {
            constraints.insert(sorted(base + i, base + (i + 1) % m));
        }
        base += m;
    }
    for (a, b) in forced {
        constraints.insert(sorted(index[a], index[b]));
    }
    greedy(points, constraints, |p| s.in_open_free_space(p))
}

/// Triangulates the interior of a (weakly) simple counter-clockwise ring.
pub fn triangulate_ring(ring: &[Point]) -> Vec<[Point; 3]> {
    let mut points: Vec<Point> = Vec::new();
    let mut index: HashMap<Point, usize> = HashMap::new();
    for p in ring {
        index.entry(p.clone()).or_insert_with(|| {
            points.push(p.clone());
            points.len() - 1
        });
    }
    let m = ring.len();
    let constraints: BTreeSet<(usize, usize)> =
        (0..m).map(|i| sorted(index[&ring[i]], index[&ring[(i + 1) % m]])).collect();
    let t = greedy(points, constraints, |p| point_in_ring(ring, p) && !point_on_ring(ring, p));
    (0..t.tris.len()).map(|i| t.tri_points(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::signed_area2;

    fn area2(t: &[Point; 3]) -> Coord {
        signed_area2(t)
    }

    #[test]
    fn box_only() {
        let s = Scene::empty(0, 0, 10, 10);
        let t = triangulate_scene(&s, &[]);
        assert_eq!(t.tris.len(), 2);
    }

    #[test]
    fn areas_tile_free_space() {
        let s = Scene::empty(0, 0, 10, 10)
            .with_obstacle(0, &[(2, 2), (4, 2), (4, 4), (2, 4)])
            .with_obstacle(1, &[(6, 5), (8, 6), (7, 8)]);
        let t = triangulate_scene(&s, &[]);
        let total = (0..t.tris.len()).fold(Coord::zero(), |acc, i| &acc + &area2(&t.tri_points(i)));
        let obstacles = s.obstacles.iter().fold(Coord::zero(), |acc, o| &acc + &signed_area2(&o.ring));
        assert_eq!(&total + &obstacles, Coord::from_int(200));
        // A polygon with n vertices and h holes has n + 2h - 2 triangles.
        assert_eq!(t.tris.len(), 11 + 2 * 2 - 2);
    }

    #[test]
    fn ring_triangulation_covers_area() {
        let ring: Vec<Point> =
            [(0, 0), (4, 0), (4, 4), (2, 1), (0, 4)].iter().map(|&(x, y)| Point::int(x, y)).collect();
        let tris = triangulate_ring(&ring);
        assert_eq!(tris.len(), 3);
        let total = tris.iter().fold(Coord::zero(), |acc, t| &acc + &area2(t));
        assert_eq!(total, signed_area2(&ring));
    }
}
