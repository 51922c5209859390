//! Visibility graph over obstacle vertices, kept current under edits.
//!
//! Each vertex holds its visible partners sorted by the direction of the
//! edge. An edit only changes visibility through the triangle
//! `v v_i v_{i+1}`: when the triangle becomes solid, edges crossing it are
//! found by walking outwards from the vertices next to it and removed; when
//! it becomes free, the same walk looks for pairs that now see each other
//! through it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::domain::{EditEvent, EditTriangle, Scene};
use crate::geom::{cross_sign, open_segment_meets_open_triangle, Boundary, Point, PseudoAngle};
use crate::oracle::{dump_vg, oracle_is_visible, oracle_vg, vg_edge, VgEdge};
use crate::simple_vis::{RayTag, SweepCone};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VisGraph {
    adj: BTreeMap<Point, BTreeSet<(PseudoAngle, Point)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VgStats {
    pub added: usize,
    pub removed: usize,
    pub pops: usize,
}

/// Cone at `apex` spanned by the triangle; `None` when the apex lies
/// inside it.
pub fn triangle_cone(apex: &Point, tri: &EditTriangle) -> Option<SweepCone> {
    let corners = [&tri.vi, &tri.vi1, &tri.v];
    let others: Vec<&Point> = corners.iter().copied().filter(|c| *c != apex).collect();
    let dirs: Vec<Point> = others.iter().map(|c| c.sub(apex)).collect();
    let pairs: Vec<(usize, usize, Option<usize>)> =
        if dirs.len() == 2 { vec![(0, 1, None)] } else { vec![(0, 1, Some(2)), (2, 0, Some(1)), (2, 1, Some(0))] };
    for (x, y, z) in pairs {
        let (l, r) = match cross_sign(&dirs[x], &dirs[y]) {
            std::cmp::Ordering::Greater => (&dirs[x], &dirs[y]),
            std::cmp::Ordering::Less => (&dirs[y], &dirs[x]),
            std::cmp::Ordering::Equal => continue,
        };
        let cone = SweepCone::new(l.clone(), r.clone(), RayTag::Cut, RayTag::Cut)?;
        if z.is_none_or(|z| cone.contains_dir(&dirs[z], Boundary::Include)) {
            return Some(cone);
        }
    }
    None
}

impl VisGraph {
    pub fn build(s: &Scene) -> Self {
        let mut g = VisGraph::default();
        for (_, p) in s.vertices() {
            g.adj.entry(p.clone()).or_default();
        }
        for (a, b) in oracle_vg(s) {
            g.add_edge(&a, &b);
        }
        g
    }

    pub fn add_edge(&mut self, a: &Point, b: &Point) -> bool {
        let fresh = self.adj.entry(a.clone()).or_default().insert((PseudoAngle::of_dir(&b.sub(a)), b.clone()));
        self.adj.entry(b.clone()).or_default().insert((PseudoAngle::of_dir(&a.sub(b)), a.clone()));
        fresh
    }

    pub fn remove_edge(&mut self, a: &Point, b: &Point) -> bool {
        let gone = self.adj.get_mut(a).is_some_and(|s| s.remove(&(PseudoAngle::of_dir(&b.sub(a)), b.clone())));
        if let Some(s) = self.adj.get_mut(b) {
            s.remove(&(PseudoAngle::of_dir(&a.sub(b)), a.clone()));
        }
        gone
    }

    pub fn has_edge(&self, a: &Point, b: &Point) -> bool {
        self.adj.get(a).is_some_and(|s| s.contains(&(PseudoAngle::of_dir(&b.sub(a)), b.clone())))
    }

    pub fn neighbors(&self, v: &Point) -> Vec<Point> {
        self.adj.get(v).map(|s| s.iter().map(|(_, p)| p.clone()).collect()).unwrap_or_default()
    }

    /// Partners of `v` whose direction lies in the closed cone, found by a
    /// range scan over the angular order.
    pub fn neighbors_in_cone(&self, v: &Point, cone: &SweepCone) -> Vec<Point> {
        let Some(set) = self.adj.get(v) else { return Vec::new() };
        let lo = PseudoAngle::of_dir(&cone.left);
        let hi = PseudoAngle::of_dir(&cone.right);
        let pick = |it: &mut dyn Iterator<Item = &(PseudoAngle, Point)>| -> Vec<Point> {
            it.filter(|(_, p)| cone.contains_dir(&p.sub(v), Boundary::Include)).map(|(_, p)| p.clone()).collect()
        };
        let first = set.iter().find(|(a, _)| a >= &lo);
        let from = first.cloned();
        if lo <= hi {
            match from {
                Some(f) => pick(&mut set.range(f..).take_while(|(a, _)| a <= &hi)),
                None => Vec::new(),
            }
        } else {
            let mut out = match from {
                Some(f) => pick(&mut set.range(f..)),
                None => Vec::new(),
            };
            out.extend(pick(&mut set.iter().take_while(|(a, _)| a <= &hi)));
            out
        }
    }

    pub fn edges(&self) -> BTreeSet<VgEdge> {
        self.adj.iter().flat_map(|(a, s)| s.iter().map(move |(_, b)| vg_edge(a, b))).collect()
    }

    pub fn dump(&self, s: &Scene) -> String {
        dump_vg(s, &self.edges())
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        for (a, s) in &self.adj {
            for (k, b) in s {
                if *k != PseudoAngle::of_dir(&b.sub(a)) {
                    return Err(format!("stale angle for {a} -> {b}"));
                }
                if !self.has_edge(b, a) {
                    return Err(format!("{a} -> {b} has no mirror"));
                }
            }
        }
        Ok(())
    }

    /// Applies the edit that turned `before` into `after`.
    pub fn on_edit(&mut self, before: &Scene, after: &Scene, e: &EditEvent) -> VgStats {
        let tri = before.edit_triangle(e).expect("edit already validated");
        let mut st = VgStats::default();
        let v = tri.v.clone();
        let mut seeds: Vec<Point> = vec![tri.vi.clone(), tri.vi1.clone()];
        if tri.insert {
            self.adj.entry(v.clone()).or_default();
            for (_, w) in after.vertices() {
                if *w != v && oracle_is_visible(after, &v, w) && self.add_edge(&v, w) {
                    st.added += 1;
                    seeds.push(w.clone());
                }
            }
            if tri.filled && self.remove_edge(&tri.vi, &tri.vi1) {
                st.removed += 1;
            }
        } else {
            for w in self.neighbors(&v) {
                self.remove_edge(&v, &w);
                st.removed += 1;
                seeds.push(w);
            }
            self.adj.remove(&v);
            if self.add_edge(&tri.vi, &tri.vi1) {
                st.added += 1;
            }
        }
        seeds.retain(|p| *p != v);
        if tri.filled {
            self.close_triangle(&tri, seeds, &mut st);
        } else {
            self.open_triangle(after, &tri, seeds, &mut st);
        }
        st
    }

    /// The triangle became solid: drop every edge whose open segment
    /// crosses it.
    fn close_triangle(&mut self, tri: &EditTriangle, seeds: Vec<Point>, st: &mut VgStats) {
        let mut seen: BTreeSet<Point> = seeds.iter().cloned().collect();
        let mut work: VecDeque<Point> = seeds.into();
        while let Some(u) = work.pop_front() {
            st.pops += 1;
            let Some(cone) = triangle_cone(&u, tri) else { continue };
            for w in self.neighbors_in_cone(&u, &cone) {
                if w == tri.v || (u == tri.vi && w == tri.vi1) || (u == tri.vi1 && w == tri.vi) {
                    continue;
                }
                if open_segment_meets_open_triangle(&u, &w, &tri.v, &tri.vi, &tri.vi1) {
                    self.remove_edge(&u, &w);
                    st.removed += 1;
                    if seen.insert(w.clone()) {
                        work.push_back(w);
                    }
                }
            }
        }
    }

    /// The triangle became free: add every pair that now sees through it.
    fn open_triangle(&mut self, after: &Scene, tri: &EditTriangle, seeds: Vec<Point>, st: &mut VgStats) {
        let all: Vec<Point> = after.vertices().map(|(_, p)| p.clone()).collect();
        let mut seen: BTreeSet<Point> = seeds.iter().cloned().collect();
        let mut work: VecDeque<Point> = seeds.into();
        while let Some(u) = work.pop_front() {
            st.pops += 1;
            let Some(cone) = triangle_cone(&u, tri) else { continue };
            for w in &all {
                if *w == u || self.has_edge(&u, w) || !cone.contains_dir(&w.sub(&u), Boundary::Include) {
                    continue;
                }
                if !open_segment_meets_open_triangle(&u, w, &tri.v, &tri.vi, &tri.vi1) {
                    continue;
                }
                if oracle_is_visible(after, &u, w) {
                    self.add_edge(&u, w);
                    st.added += 1;
                    if seen.insert(w.clone()) {
                        work.push_back(w.clone());
                    }
                }
            }
        }
    }
}

/// Edges in `changed` other than those incident to `v` or joining
/// `v_i v_{i+1}` must cross the open triangle.
pub fn triangle_violations(tri: &EditTriangle, changed: &BTreeSet<VgEdge>) -> usize {
    changed
        .iter()
        .filter(|(a, b)| *a != tri.v && *b != tri.v)
        .filter(|e| **e != vg_edge(&tri.vi, &tri.vi1))
        .filter(|(a, b)| !open_segment_meets_open_triangle(a, b, &tri.v, &tri.vi, &tri.vi1))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    fn square() -> Scene {
        Scene::empty(0, 0, 10, 10).with_obstacle(0, &[(4, 4), (6, 4), (6, 6), (4, 6)])
    }

    fn apply(g: &mut VisGraph, s: &Scene, e: &EditEvent) -> (Scene, VgStats) {
        let before_edges = g.edges();
        let after = s.apply_edit(e).unwrap();
        let st = g.on_edit(s, &after, e);
        g.check_invariants().unwrap();
        assert_eq!(g.edges(), oracle_vg(&after), "after {e:?}");
        let changed: BTreeSet<VgEdge> = before_edges.symmetric_difference(&g.edges()).cloned().collect();
        let tri = s.edit_triangle(e).unwrap();
        assert_eq!(triangle_violations(&tri, &changed), 0);
        (after, st)
    }

    #[test]
    fn convex_obstacles_have_only_ring_edges() {
        assert_eq!(VisGraph::build(&square()).edges().len(), 4);
        let s = Scene::empty(0, 0, 100, 100)
            .with_obstacle(0, &[(50, 20), (70, 30), (75, 55), (55, 70), (35, 55), (30, 35)]);
        assert_eq!(VisGraph::build(&s).edges().len(), 6);
    }

    #[test]
    fn spike_on_the_square() {
        let s = square();
        let mut g = VisGraph::build(&s);
        let (after, _) = apply(&mut g, &s, &EditEvent::Insert { obstacle: 0, index: 3, point: p(3, 5) });
        let v = p(3, 5);
        let mut n = g.neighbors(&v);
        n.sort();
        assert_eq!(n, vec![p(4, 4), p(4, 6)]);
        // The old edge now runs through the obstacle interior.
        assert!(!g.has_edge(&p(4, 4), &p(4, 6)));
        let (back, _) = apply(&mut g, &after, &EditEvent::Delete { obstacle: 0, index: 4 });
        assert_eq!(back, s);
        assert_eq!(g, VisGraph::build(&s));
    }

    #[test]
    fn bulge_blocks_a_cross_edge() {
        let s = Scene::empty(0, 0, 20, 20)
            .with_obstacle(0, &[(2, 2), (6, 2), (6, 6), (2, 6)])
            .with_obstacle(1, &[(12, 12), (16, 12), (16, 16), (12, 16)]);
        let mut g = VisGraph::build(&s);
        let (after, st) = apply(&mut g, &s, &EditEvent::Insert { obstacle: 0, index: 1, point: p(9, 5) });
        assert!(st.removed > 1);
        apply(&mut g, &after, &EditEvent::Delete { obstacle: 0, index: 2 });
    }

    #[test]
    fn notch_insert_and_convex_delete() {
        let s = Scene::empty(0, 0, 20, 20)
            .with_obstacle(0, &[(2, 2), (8, 2), (8, 8), (2, 8)])
            .with_obstacle(1, &[(12, 3), (17, 4), (18, 8), (15, 9)]);
        let mut g = VisGraph::build(&s);
        let (mid, _) = apply(&mut g, &s, &EditEvent::Insert { obstacle: 0, index: 1, point: p(6, 5) });
        apply(&mut g, &mid, &EditEvent::Delete { obstacle: 1, index: 1 });
    }

    #[test]
    fn cone_scan_matches_filter() {
        let s = Scene::empty(0, 0, 20, 20)
            .with_obstacle(0, &[(2, 2), (6, 2), (6, 6), (2, 6)])
            .with_obstacle(1, &[(12, 12), (16, 12), (16, 16), (12, 16)]);
        let g = VisGraph::build(&s);
        let v = p(6, 6);
        for (l, r) in [((1, 0), (0, 1)), ((0, 1), (1, 0)), ((-1, 1), (1, -3)), ((1, -1), (1, 1))] {
            let Some(cone) = SweepCone::new(p(l.0, l.1), p(r.0, r.1), RayTag::Cut, RayTag::Cut) else { continue };
            let mut got = g.neighbors_in_cone(&v, &cone);
            got.sort();
            let mut want: Vec<Point> =
                g.neighbors(&v).into_iter().filter(|w| cone.contains_dir(&w.sub(&v), Boundary::Include)).collect();
            want.sort();
            assert_eq!(got, want);
        }
    }
}
