//! Junctions and corridors of the free space.
//!
//! The free space is triangulated, the dual graph is pruned of degree-one
//! nodes, degree-three survivors become junctions and the chains between
//! them become corridors. Pruned pockets join the region they hang from.
//! Each region keeps its boundary as a counter-clockwise ring whose edges
//! are tagged as obstacle/box constraints or as windows into the
//! neighbouring region.

pub mod hull;
pub mod triangulate;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::{EditError, EditEvent, Scene};
use crate::geom::{
    in_open_triangle, on_segment, point_in_ring, point_on_ring, segments_cross_properly, signed_area2, Coord, Point,
    PseudoAngle, Segment,
};
use hull::{HullTree, TangentError, Tangents};
use triangulate::{triangulate_ring, triangulate_scene};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionKind {
    Junction,
    Corridor,
}

impl RegionKind {
    pub fn label(self) -> &'static str {
        match self {
            RegionKind::Junction => "junction",
            RegionKind::Corridor => "corridor",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeTag {
    Constraint,
    Window(usize),
}

#[derive(Clone, Debug)]
pub struct Region {
    pub kind: RegionKind,
    /// Junction id or corridor id, depending on `kind`.
    pub ordinal: usize,
    pub ring: Vec<Point>,
    /// `tags[i]` describes the edge `ring[i] -> ring[i + 1]`.
    pub tags: Vec<EdgeTag>,
    pub triangles: Vec<[Point; 3]>,
}

impl Region {
    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        (&self.ring[i], &self.ring[(i + 1) % self.ring.len()])
    }

    pub fn contains_strictly(&self, p: &Point) -> bool {
        point_in_ring(&self.ring, p) && !point_on_ring(&self.ring, p)
    }
}

/// A shared edge between two regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub a: Point,
    pub b: Point,
    pub regions: [usize; 2],
}

impl Window {
    pub fn other(&self, r: usize) -> usize {
        if self.regions[0] == r {
            self.regions[1]
        } else {
            self.regions[0]
        }
    }

    pub fn segment(&self) -> Segment {
        Segment::new(self.a.clone(), self.b.clone())
    }
}

#[derive(Clone, Debug)]
pub struct Corridor {
    pub id: usize,
    /// `None` for a corridor with no triangles: two junctions sharing an edge.
    pub region: Option<usize>,
    pub windows: Vec<usize>,
    /// Maximal constraint chains of the boundary, in ring order.
    pub sides: Vec<Vec<Point>>,
    pub hulls: Vec<HullTree>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Corridor(usize),
    Junction(usize),
    InsideObstacle,
    OutsideBox,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("triangulation of the free space failed")]
    DegenerateInput,
}

#[derive(Clone, Debug)]
pub struct CorridorComplex {
    pub min: Point,
    pub max: Point,
    pub regions: Vec<Region>,
    pub windows: Vec<Window>,
    /// Region index per junction id.
    pub junctions: Vec<usize>,
    pub corridors: Vec<Corridor>,
    /// Triangles removed by pruning at build time.
    pub pruned_count: usize,
    window_index: HashMap<(Point, Point), usize>,
}

fn key(a: &Point, b: &Point) -> (Point, Point) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Chains the boundary edges of a set of ccw triangles into a ring. At a
/// pinch vertex the walk takes the first outgoing edge clockwise from the
/// edge it arrived on, which keeps the region on its left.
fn chain_ring(tris: &[[Point; 3]]) -> Vec<Point> {
    let mut directed: BTreeSet<(Point, Point)> = BTreeSet::new();
    for t in tris {
        for i in 0..3 {
            directed.insert((t[i].clone(), t[(i + 1) % 3].clone()));
        }
    }
    let boundary: Vec<(Point, Point)> =
        directed.iter().filter(|(a, b)| !directed.contains(&(b.clone(), a.clone()))).cloned().collect();
    let mut out_edges: BTreeMap<Point, Vec<Point>> = BTreeMap::new();
    for (a, b) in &boundary {
        out_edges.entry(a.clone()).or_default().push(b.clone());
    }
    let start = boundary[0].clone();
    let mut used: BTreeSet<(Point, Point)> = BTreeSet::new();
    let mut ring = vec![start.0.clone()];
    used.insert(start.clone());
    let (mut prev, mut cur) = start;
    while cur != ring[0] || used.len() < boundary.len() {
        let base = prev.sub(&cur);
        let next = out_edges[&cur]
            .iter()
            .filter(|w| !used.contains(&(cur.clone(), (*w).clone())))
            .max_by_key(|w| PseudoAngle::relative(&base, &w.sub(&cur)))
            .cloned();
        let Some(next) = next else { break };
        used.insert((cur.clone(), next.clone()));
        ring.push(cur.clone());
        prev = cur;
        cur = next;
    }
    ring
}

impl CorridorComplex {
    pub fn junction_count(&self) -> usize {
        self.junctions.len()
    }

    pub fn corridor_count(&self) -> usize {
        self.corridors.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.regions.iter().map(|r| r.triangles.len()).sum()
    }

    pub fn window_between(&self, a: &Point, b: &Point) -> Option<usize> {
        self.window_index.get(&key(a, b)).copied()
    }

    pub fn region_location(&self, r: usize) -> Location {
        match self.regions[r].kind {
            RegionKind::Junction => Location::Junction(self.regions[r].ordinal),
            RegionKind::Corridor => Location::Corridor(self.regions[r].ordinal),
        }
    }

    pub fn location_region(&self, l: Location) -> Option<usize> {
        match l {
            Location::Junction(j) => Some(self.junctions[j]),
            Location::Corridor(c) => self.corridors[c].region,
            _ => None,
        }
    }

    /// Region containing `p` with the boundary tie-breaks: vertices go to
    /// the smallest incident corridor, windows to the junction, obstacle
    /// edges to their owning region.
    pub fn locate(&self, p: &Point) -> Location {
        if p.x < self.min.x || p.x > self.max.x || p.y < self.min.y || p.y > self.max.y {
            return Location::OutsideBox;
        }
        let pick = |cands: &mut Vec<usize>| -> Option<Location> {
            cands.sort_by_key(|&r| (self.regions[r].kind != RegionKind::Corridor, self.regions[r].ordinal));
            cands.first().map(|&r| self.region_location(r))
        };
        let mut at_vertex: Vec<usize> = (0..self.regions.len()).filter(|&r| self.regions[r].ring.contains(p)).collect();
        if let Some(l) = pick(&mut at_vertex) {
            return l;
        }
        for w in &self.windows {
            if on_segment(&w.a, &w.b, p) {
                let mut js: Vec<usize> =
                    w.regions.iter().copied().filter(|&r| self.regions[r].kind == RegionKind::Junction).collect();
                if js.is_empty() {
                    js = w.regions.to_vec();
                }
                js.sort_by_key(|&r| self.regions[r].ordinal);
                return self.region_location(js[0]);
            }
        }
        for (ri, r) in self.regions.iter().enumerate() {
            if point_on_ring(&r.ring, p) {
                return self.region_location(ri);
            }
        }
        for (ri, r) in self.regions.iter().enumerate() {
            if point_in_ring(&r.ring, p) {
                return self.region_location(ri);
            }
        }
        Location::InsideObstacle
    }

    /// Region index whose ring strictly contains `p`, or for a point on a
    /// window, the junction side.
    pub fn locate_region(&self, p: &Point) -> Option<usize> {
        self.location_region(self.locate(p))
    }

    /// Slow reference: scan every triangle for strict containment.
    pub fn locate_by_triangles(&self, p: &Point) -> Option<Location> {
        for (ri, r) in self.regions.iter().enumerate() {
            if r.triangles.iter().any(|t| in_open_triangle(&t[0], &t[1], &t[2], p)) {
                return Some(self.region_location(ri));
            }
        }
        None
    }

    pub fn tangents_from(
        &self,
        corridor: usize,
        side: usize,
        q: &Point,
        restrict: Option<&crate::geom::Cone>,
    ) -> Result<Tangents, TangentError> {
        let c = &self.corridors[corridor];
        c.hulls.get(side).ok_or(TangentError::NoTangent)?.tangents_from(q, restrict)
    }

    /// Sum of twice the triangle areas, for the tiling check.
    pub fn area2(&self) -> Coord {
        self.regions.iter().flat_map(|r| r.triangles.iter()).fold(Coord::zero(), |acc, t| &acc + &signed_area2(t))
    }

    /// Rotation-free identity of a region: its kind plus its window set.
    pub fn region_signature(&self, r: usize) -> (RegionKind, Vec<(Point, Point)>) {
        let mut ws: Vec<(Point, Point)> = self.regions[r]
            .tags
            .iter()
            .filter_map(|t| match t {
                EdgeTag::Window(w) => Some(key(&self.windows[*w].a, &self.windows[*w].b)),
                EdgeTag::Constraint => None,
            })
            .collect();
        ws.sort();
        ws.dedup();
        (self.regions[r].kind, ws)
    }

    /// `t i j k <kind> <id>` per triangle, indices over box corners followed
    /// by obstacle vertices in scene order.
    pub fn dump_triangles(&self, s: &Scene) -> String {
        let mut index: HashMap<Point, usize> = HashMap::new();
        for (i, p) in s.box_corners().into_iter().enumerate() {
            index.insert(p, i);
        }
        for (i, (_, p)) in s.vertices().enumerate() {
            index.insert(p.clone(), i + 4);
        }
        let mut out = String::new();
        for r in &self.regions {
            for t in &r.triangles {
                let _ = writeln!(
                    out,
                    "t {} {} {} {} {}",
                    index[&t[0]],
                    index[&t[1]],
                    index[&t[2]],
                    r.kind.label(),
                    r.ordinal
                );
            }
        }
        out
    }

    fn retag(&mut self, r: usize) {
        let ring = &self.regions[r].ring;
        let m = ring.len();
        let tags = (0..m)
            .map(|i| match self.window_index.get(&key(&ring[i], &ring[(i + 1) % m])) {
                Some(&w) => EdgeTag::Window(w),
                None => EdgeTag::Constraint,
            })
            .collect();
        self.regions[r].tags = tags;
    }

    fn rebuild_sides(&mut self, c: usize) {
        let Some(r) = self.corridors[c].region else { return };
        let region = &self.regions[r];
        let m = region.ring.len();
        let first_window = region.tags.iter().position(|t| matches!(t, EdgeTag::Window(_)));
        let mut windows = Vec::new();
        let mut sides: Vec<Vec<Point>> = Vec::new();
        match first_window {
            None => sides.push(region.ring.clone()),
            Some(fw) => {
                let mut cur: Vec<Point> = Vec::new();
                for step in 1..=m {
                    let i = (fw + step) % m;
                    match region.tags[i] {
                        EdgeTag::Window(w) => {
                            windows.push(w);
                            if !cur.is_empty() {
                                cur.push(region.ring[i].clone());
                                sides.push(std::mem::take(&mut cur));
                            }
                        }
                        EdgeTag::Constraint => {
                            if cur.is_empty() {
                                cur.push(region.ring[i].clone());
                            }
                            cur.push(region.ring[(i + 1) % m].clone());
                        }
                    }
                }
                if !cur.is_empty() {
                    sides.push(cur);
                }
                windows.rotate_right(1);
            }
        }
        let hulls = sides.iter().map(|s| HullTree::new(s.clone())).collect();
        let corridor = &mut self.corridors[c];
        corridor.windows = windows;
        corridor.sides = sides;
        corridor.hulls = hulls;
    }

    /// Checks that an edit stays inside one region and works out that
    /// region's new boundary. `s` is the scene before the edit.
    pub fn plan_edit(&self, s: &Scene, e: &EditEvent) -> Result<EditPlan, EditError> {
        let tri = s.edit_triangle(e)?;
        let spans = EditError::TriangleSpansCorridors;
        let find = |seq: &[&Point]| -> Option<(usize, usize)> {
            self.regions.iter().enumerate().find_map(|(ri, r)| {
                let m = r.ring.len();
                (0..m).find(|&k| seq.iter().enumerate().all(|(j, p)| &r.ring[(k + j) % m] == *p)).map(|k| (ri, k))
            })
        };
        let (region, new_ring) = if tri.insert {
            let (ri, k) = find(&[&tri.vi1, &tri.vi]).ok_or(spans.clone())?;
            let mut ring = self.regions[ri].ring.clone();
            ring.insert(k + 1, tri.v.clone());
            (ri, ring)
        } else {
            if self.windows.iter().any(|w| w.a == tri.v || w.b == tri.v) {
                return Err(spans);
            }
            let (ri, k) = find(&[&tri.vi1, &tri.v, &tri.vi]).ok_or(spans.clone())?;
            let mut ring = self.regions[ri].ring.clone();
            ring.remove((k + 1) % ring.len());
            (ri, ring)
        };
        if tri.filled {
            let r = &self.regions[region];
            let corners = [&tri.v, &tri.vi, &tri.vi1];
            let in_closed = |p: &Point| {
                in_open_triangle(&tri.v, &tri.vi, &tri.vi1, p)
                    || on_segment(&tri.v, &tri.vi, p)
                    || on_segment(&tri.v, &tri.vi1, p)
                    || on_segment(&tri.vi, &tri.vi1, p)
            };
            if r.ring.iter().any(|p| !corners.contains(&p) && in_closed(p)) {
                return Err(spans);
            }
            let new_edges: Vec<Segment> = if tri.insert {
                if !r.contains_strictly(&tri.v) {
                    return Err(spans);
                }
                vec![Segment::new(tri.vi.clone(), tri.v.clone()), Segment::new(tri.v.clone(), tri.vi1.clone())]
            } else {
                if self.window_between(&tri.vi, &tri.vi1).is_some() {
                    return Err(spans);
                }
                vec![Segment::new(tri.vi.clone(), tri.vi1.clone())]
            };
            let m = r.ring.len();
            for i in 0..m {
                let (a, b) = r.edge(i);
                let seg = Segment::new(a.clone(), b.clone());
                if new_edges.iter().any(|ne| segments_cross_properly(ne, &seg)) {
                    return Err(spans);
                }
            }
        }
        Ok(EditPlan { region, ring: new_ring })
    }

    pub fn apply_plan(&mut self, plan: EditPlan) {
        let r = plan.region;
        self.regions[r].triangles = triangulate_ring(&plan.ring);
        self.regions[r].ring = plan.ring;
        self.retag(r);
        if self.regions[r].kind == RegionKind::Corridor {
            let c = self.regions[r].ordinal;
            self.rebuild_sides(c);
        }
    }

    /// Validates and applies an edit; `s` is the scene before the edit.
    pub fn update_for_edit(&mut self, s: &Scene, e: &EditEvent) -> Result<(), EditError> {
        let plan = self.plan_edit(s, e)?;
        self.apply_plan(plan);
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditPlan {
    pub region: usize,
    pub ring: Vec<Point>,
}

pub fn decompose(s: &Scene) -> Result<CorridorComplex, DecompError> {
    decompose_with(s, &[])
}

/// Decomposition with extra forced triangulation edges (used to rebuild a
/// complex that keeps existing windows).
pub fn decompose_with(s: &Scene, forced: &[(Point, Point)]) -> Result<CorridorComplex, DecompError> {
    let t = triangulate_scene(s, forced);
    let nt = t.tris.len();
    if nt == 0 {
        return Err(DecompError::DegenerateInput);
    }
    let mut edge_tris: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (ti, tri) in t.tris.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            edge_tris.entry((a.min(b), a.max(b))).or_default().push(ti);
        }
    }
    let mut dual: Vec<Vec<usize>> = vec![Vec::new(); nt];
    for (&(a, b), ts) in &edge_tris {
        if !t.is_constraint(a, b) && ts.len() == 2 {
            dual[ts[0]].push(ts[1]);
            dual[ts[1]].push(ts[0]);
        }
    }
    for d in &mut dual {
        d.sort_unstable();
    }
    let mut deg: Vec<usize> = dual.iter().map(Vec::len).collect();
    let mut alive = vec![true; nt];
    let mut queue: VecDeque<usize> = (0..nt).filter(|&i| deg[i] <= 1).collect();
    while let Some(i) = queue.pop_front() {
        if !alive[i] {
            continue;
        }
        alive[i] = false;
        for &nb in &dual[i] {
            if alive[nb] {
                deg[nb] -= 1;
                if deg[nb] <= 1 {
                    queue.push_back(nb);
                }
            }
        }
    }
    let pruned_count = alive.iter().filter(|a| !**a).count();
    let core_adj = |i: usize| dual[i].iter().copied().filter(|&j| alive[j]).collect::<Vec<_>>();

    let mut region_of: Vec<Option<usize>> = vec![None; nt];
    let mut groups: Vec<(RegionKind, Vec<usize>)> = Vec::new();
    let mut junction_tris: Vec<usize> = (0..nt).filter(|&i| alive[i] && core_adj(i).len() == 3).collect();
    if junction_tris.is_empty() {
        if let Some(cut) = (0..nt).filter(|&i| alive[i]).min_by_key(|&i| (dual[i].len() != 2, i)) {
            junction_tris.push(cut);
        }
    }
    for &j in &junction_tris {
        region_of[j] = Some(groups.len());
        groups.push((RegionKind::Junction, vec![j]));
    }
    for start in 0..nt {
        if !alive[start] || region_of[start].is_some() {
            continue;
        }
        let g = groups.len();
        let mut members = vec![start];
        region_of[start] = Some(g);
        let mut k = 0;
        while k < members.len() {
            for nb in core_adj(members[k]) {
                if region_of[nb].is_none() {
                    region_of[nb] = Some(g);
                    members.push(nb);
                }
            }
            k += 1;
        }
        groups.push((RegionKind::Corridor, members));
    }
    if groups.is_empty() {
        groups.push((RegionKind::Corridor, (0..nt).collect()));
        region_of.iter_mut().for_each(|r| *r = Some(0));
    }
    let mut frontier: VecDeque<usize> = (0..nt).filter(|&i| region_of[i].is_some()).collect();
    while let Some(i) = frontier.pop_front() {
        for &nb in &dual[i] {
            if region_of[nb].is_none() {
                region_of[nb] = region_of[i];
                groups[region_of[i].unwrap()].1.push(nb);
                frontier.push_back(nb);
            }
        }
    }

    let mut regions: Vec<Region> = Vec::new();
    let (mut nj, mut nc) = (0, 0);
    for (kind, members) in &groups {
        let tris: Vec<[Point; 3]> = members.iter().map(|&m| t.tri_points(m)).collect();
        let ring = chain_ring(&tris);
        let ordinal = match kind {
            RegionKind::Junction => {
                nj += 1;
                nj - 1
            }
            RegionKind::Corridor => {
                nc += 1;
                nc - 1
            }
        };
        regions.push(Region { kind: *kind, ordinal, ring, tags: Vec::new(), triangles: tris });
    }

    let index: HashMap<Point, usize> = t.points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut windows: Vec<Window> = Vec::new();
    let mut window_index: HashMap<(Point, Point), usize> = HashMap::new();
    for (ri, r) in regions.iter().enumerate() {
        let m = r.ring.len();
        for i in 0..m {
            let (a, b) = (&r.ring[i], &r.ring[(i + 1) % m]);
            let (ia, ib) = (index[a], index[b]);
            if t.is_constraint(ia, ib) {
                continue;
            }
            let k = key(a, b);
            if window_index.contains_key(&k) {
                continue;
            }
            let ts = &edge_tris[&(ia.min(ib), ia.max(ib))];
            let other = ts.iter().map(|&x| region_of[x].unwrap()).find(|&x| x != ri).expect("window has two sides");
            window_index.insert(k, windows.len());
            windows.push(Window { a: a.clone(), b: b.clone(), regions: [ri, other] });
        }
    }

    let junctions: Vec<usize> = (0..regions.len()).filter(|&r| regions[r].kind == RegionKind::Junction).collect();
    let mut corridors: Vec<Corridor> = (0..regions.len())
        .filter(|&r| regions[r].kind == RegionKind::Corridor)
        .map(|r| Corridor {
            id: regions[r].ordinal,
            region: Some(r),
            windows: Vec::new(),
            sides: Vec::new(),
            hulls: Vec::new(),
        })
        .collect();
    for (wi, w) in windows.iter().enumerate() {
        if w.regions.iter().all(|&r| regions[r].kind == RegionKind::Junction) {
            corridors.push(Corridor {
                id: corridors.len(),
                region: None,
                windows: vec![wi],
                sides: Vec::new(),
                hulls: Vec::new(),
            });
        }
    }
    let mut cc = CorridorComplex {
        min: s.min.clone(),
        max: s.max.clone(),
        regions,
        windows,
        junctions,
        corridors,
        pruned_count,
        window_index,
    };
    for r in 0..cc.regions.len() {
        cc.retag(r);
    }
    for c in 0..cc.corridors.len() {
        cc.rebuild_sides(c);
    }
    Ok(cc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    fn two_quads() -> Scene {
        Scene::empty(0, 0, 20, 12)
            .with_obstacle(0, &[(3, 4), (7, 3), (8, 7), (4, 8)])
            .with_obstacle(1, &[(12, 5), (16, 4), (17, 8), (13, 9)])
    }

    #[test]
    fn two_obstacles_make_three_corridors() {
        let cc = decompose(&two_quads()).unwrap();
        assert_eq!(cc.junction_count(), 2);
        assert_eq!(cc.corridor_count(), 3);
    }

    #[test]
    fn empty_scene_is_one_pseudo_corridor() {
        let s = Scene::empty(0, 0, 10, 10);
        let cc = decompose(&s).unwrap();
        assert_eq!(cc.junction_count(), 0);
        assert_eq!(cc.corridor_count(), 1);
        assert_eq!(cc.locate(&p(5, 5)), Location::Corridor(0));
        assert_eq!(cc.regions[0].ring.len(), 4);
    }

    #[test]
    fn single_obstacle_annulus() {
        let s = Scene::empty(0, 0, 10, 10).with_obstacle(0, &[(4, 4), (6, 4), (6, 6), (4, 6)]);
        let cc = decompose(&s).unwrap();
        assert_eq!(cc.junction_count(), 1);
        assert_eq!(cc.corridor_count(), 1);
        assert_eq!(cc.locate(&p(5, 5)), Location::InsideObstacle);
        assert_eq!(cc.locate(&p(11, 5)), Location::OutsideBox);
        let expect = &Coord::from_int(200) - &Coord::from_int(8);
        assert_eq!(cc.area2(), expect);
    }

    #[test]
    fn rings_are_ccw_and_windows_shared() {
        let cc = decompose(&two_quads()).unwrap();
        for r in &cc.regions {
            assert!(signed_area2(&r.ring).signum() > 0);
            let tri_area = r.triangles.iter().fold(Coord::zero(), |acc, t| &acc + &signed_area2(t));
            assert_eq!(tri_area, signed_area2(&r.ring));
        }
        for (wi, w) in cc.windows.iter().enumerate() {
            for &r in &w.regions {
                assert!(cc.regions[r].tags.contains(&EdgeTag::Window(wi)));
            }
        }
    }

    #[test]
    fn locate_matches_triangle_scan() {
        let s = two_quads();
        let cc = decompose(&s).unwrap();
        for x in 0..40 {
            for y in 0..24 {
                let q = Point::new(Coord::ratio(2 * x + 1, 4), Coord::ratio(2 * y + 1, 4));
                let l = cc.locate(&q);
                match cc.locate_by_triangles(&q) {
                    Some(want) => assert_eq!(l, want, "{q:?}"),
                    None => assert!(
                        matches!(l, Location::InsideObstacle)
                            || cc.windows.iter().any(|w| on_segment(&w.a, &w.b, &q))
                            || cc.regions.iter().any(|r| r.triangles.iter().any(|t| (0..3).any(|i| on_segment(
                                &t[i],
                                &t[(i + 1) % 3],
                                &q
                            )))),
                        "{q:?}"
                    ),
                }
            }
        }
    }

    #[test]
    fn edit_round_trip_restores_region() {
        let s = Scene::empty(0, 0, 10, 10).with_obstacle(0, &[(4, 4), (6, 4), (6, 6), (4, 6)]);
        let mut cc = decompose(&s).unwrap();
        let before: Vec<Vec<Point>> = cc.regions.iter().map(|r| r.ring.clone()).collect();
        let ins = EditEvent::Insert { obstacle: 0, index: 3, point: p(3, 5) };
        let s2 = s.apply_edit(&ins).unwrap();
        cc.update_for_edit(&s, &ins).unwrap();
        assert_eq!(cc.corridor_count(), 1);
        assert_eq!(cc.locate(&Point::new(Coord::ratio(7, 2), Coord::from_int(5))), Location::InsideObstacle);
        let del = EditEvent::Delete { obstacle: 0, index: 4 };
        cc.update_for_edit(&s2, &del).unwrap();
        let after: Vec<Vec<Point>> = cc.regions.iter().map(|r| r.ring.clone()).collect();
        assert_eq!(before, after);
    }
}
