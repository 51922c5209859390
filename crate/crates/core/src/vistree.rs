//! Visibility trees over the corridor complex.
//!
//! The plane around `q` is split into four tiles of less than a half turn.
//! Each tile starts a traversal in the region holding `q`; every visit
//! sweeps one region inside one cone and hands the sub-cones that leave
//! through windows to the neighbouring regions. A visit is a node; the
//! points it reports land in its left or right satellite map, keyed by the
//! angle at `q` measured from the first tile ray.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::decomposition::{CorridorComplex, EdgeTag};
use crate::domain::Scene;
use crate::geom::{Boundary, Point, PseudoAngle};
use crate::oracle::{check_query, PointKind, QueryError, VisibilityPolygon, VpEntry};
use crate::simple_vis::{sweep, RayTag, SweepCone, SweepError};

pub const TILE_DIRS: [(i64, i64); 4] = [(104729, 7919), (-7919, 104729), (-104729, -7919), (7919, -104729)];

pub type NodeId = usize;
pub type Key = (PseudoAngle, i8);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("query point is not inside any region")]
    Unlocated,
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Visit {
    pub region: usize,
    pub cone: SweepCone,
    pub entry: Option<usize>,
    pub tile: usize,
}

#[derive(Clone, Debug)]
pub struct VisTreeNode {
    pub visit: Visit,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub emissions: Vec<(Key, Point)>,
    pub rbt_l: BTreeMap<Key, Point>,
    pub rbt_r: BTreeMap<Key, Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointInfo {
    pub kind: PointKind,
    pub key: Key,
    pub owner: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedExit {
    pub parent: NodeId,
    pub window: usize,
    pub cone: SweepCone,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UpdateStats {
    pub nodes_visited: usize,
    pub rbt_insertions: usize,
    pub rbt_deletions: usize,
    pub cones_split: usize,
    pub tangent_queries: usize,
}

/// Outcome of rebuilding the part of a tree inside a cone.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Replacement {
    pub built: usize,
    pub added: usize,
    pub removed: usize,
    pub modified: usize,
    pub reattached: usize,
    pub fallbacks: usize,
}

impl Replacement {
    pub fn mutations(&self) -> usize {
        self.added + self.removed + self.modified
    }
}

#[derive(Clone, Debug)]
pub struct VisTree {
    pub q: Point,
    nodes: Vec<Option<VisTreeNode>>,
    roots: Vec<NodeId>,
    points: HashMap<Point, PointInfo>,
    pub pruned: Vec<PrunedExit>,
}

pub fn tile_dir(i: usize) -> Point {
    let (x, y) = TILE_DIRS[i % 4];
    Point::int(x, y)
}

pub fn tile_cone(i: usize) -> SweepCone {
    SweepCone::new(tile_dir(i), tile_dir(i + 1), RayTag::Cut, RayTag::Cut).expect("tiles are a quarter turn")
}

pub fn angle_key(q: &Point, p: &Point) -> PseudoAngle {
    dir_key(&p.sub(q))
}

pub fn dir_key(d: &Point) -> PseudoAngle {
    PseudoAngle::relative(&tile_dir(0), d)
}

fn sweep_visit(cc: &CorridorComplex, q: &Point, v: &Visit) -> Result<crate::simple_vis::SweepResult, SweepError> {
    let r = &cc.regions[v.region];
    let windows: Vec<Option<usize>> = r
        .tags
        .iter()
        .map(|t| match t {
            EdgeTag::Window(w) => Some(*w),
            EdgeTag::Constraint => None,
        })
        .collect();
    let entry = v.entry.map(|w| windows.iter().position(|x| *x == Some(w)).expect("entry window on region ring"));
    sweep(&r.ring, &windows, q, &v.cone, entry)
}

fn kind_of(vertices: &BTreeSet<Point>, s: &Scene, p: &Point) -> PointKind {
    if vertices.contains(p) {
        PointKind::ObstacleVertex
    } else if s.is_box_corner(p) {
        PointKind::BoxPoint
    } else {
        PointKind::ConstructedVertex
    }
}

impl VisTree {
    fn empty(q: Point) -> Self {
        VisTree { q, nodes: Vec::new(), roots: Vec::new(), points: HashMap::new(), pruned: Vec::new() }
    }

    /// Builds the trees for `q`. With `restrict`, exits whose cone misses
    /// the restricting cone are recorded in `pruned` instead of visited.
    pub fn build(s: &Scene, cc: &CorridorComplex, q: &Point, restrict: Option<&SweepCone>) -> Result<Self, TreeError> {
        check_query(s, q)?;
        let mut t = VisTree::empty(q.clone());
        let region = cc.locate_region(q).ok_or(TreeError::Unlocated)?;
        let starts: Vec<(Option<NodeId>, Visit)> = (0..4)
            .map(|i| Visit { region, cone: tile_cone(i), entry: None, tile: i })
            .filter(|v| restrict.is_none_or(|r| v.cone.meets(r)))
            .map(|v| (None, v))
            .collect();
        t.grow(cc, starts, restrict)?;
        t.refresh(s);
        Ok(t)
    }

    /// Depth-first traversal from the given visits; returns the number of
    /// nodes created.
    fn grow(
        &mut self,
        cc: &CorridorComplex,
        starts: Vec<(Option<NodeId>, Visit)>,
        restrict: Option<&SweepCone>,
    ) -> Result<usize, TreeError> {
        let mut stack: Vec<(Option<NodeId>, Visit)> = starts.into_iter().rev().collect();
        let mut made = 0;
        while let Some((parent, visit)) = stack.pop() {
            let res = sweep_visit(cc, &self.q, &visit)?;
            let id = self.nodes.len();
            let emissions =
                res.emissions.iter().map(|e| ((angle_key(&self.q, &e.point), e.tie), e.point.clone())).collect();
            self.nodes.push(Some(VisTreeNode {
                visit: visit.clone(),
                parent,
                children: Vec::new(),
                emissions,
                rbt_l: BTreeMap::new(),
                rbt_r: BTreeMap::new(),
            }));
            made += 1;
            match parent {
                Some(p) => self.node_mut(p).children.push(id),
                None => self.roots.push(id),
            }
            for exit in res.exits.into_iter().rev() {
                if restrict.is_some_and(|r| !exit.cone.meets(r)) {
                    self.pruned.push(PrunedExit { parent: id, window: exit.window, cone: exit.cone });
                    continue;
                }
                let region = cc.windows[exit.window].other(visit.region);
                stack.push((Some(id), Visit { region, cone: exit.cone, entry: Some(exit.window), tile: visit.tile }));
            }
        }
        Ok(made)
    }

    pub fn node(&self, id: NodeId) -> &VisTreeNode {
        self.nodes[id].as_ref().expect("live node")
    }

    fn node_mut(&mut self, id: NodeId) -> &mut VisTreeNode {
        self.nodes[id].as_mut().expect("live node")
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| n.is_some()).map(|(i, _)| i)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_some()).count()
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn points(&self) -> &HashMap<Point, PointInfo> {
        &self.points
    }

    /// Reassigns every reported point to one owning node and refills the
    /// satellite maps. A point seen by several visits belongs to the visit
    /// whose cone holds it strictly, then to one whose left ray holds it,
    /// then to the lowest id.
    fn refresh(&mut self, s: &Scene) {
        let vertices: BTreeSet<Point> = s.vertices().map(|(_, p)| p.clone()).collect();
        let mut best: HashMap<Point, (u8, NodeId, Key)> = HashMap::new();
        for id in self.node_ids().collect::<Vec<_>>() {
            let n = self.node(id);
            for (key, p) in &n.emissions {
                let d = p.sub(&self.q);
                let rank = if n.visit.cone.contains_dir(&d, Boundary::Exclude) {
                    0
                } else if crate::geom::same_dir(&n.visit.cone.left, &d) {
                    1
                } else {
                    2
                };
                let cand = (rank, id, key.clone());
                match best.get(p) {
                    Some(b) if (b.0, b.1) <= (rank, id) => {}
                    _ => {
                        best.insert(p.clone(), cand);
                    }
                }
            }
        }
        for id in self.node_ids().collect::<Vec<_>>() {
            let n = self.node_mut(id);
            n.rbt_l.clear();
            n.rbt_r.clear();
        }
        self.points.clear();
        for (p, (_, owner, key)) in best {
            let split = self.node(owner).children.first().map(|&c| dir_key(&self.node(c).visit.cone.left));
            let n = self.node_mut(owner);
            match split {
                Some(sk) if key.0 >= sk => n.rbt_r.insert(key.clone(), p.clone()),
                _ => n.rbt_l.insert(key.clone(), p.clone()),
            };
            let kind = kind_of(&vertices, s, &p);
            self.points.insert(p, PointInfo { kind, key, owner });
        }
    }

    /// Visibility polygon: the owned points of every node in depth-first
    /// order, then sorted by angle and same-ray tie.
    pub fn extract_vp(&self) -> VisibilityPolygon {
        let mut out: Vec<(Key, Point)> = Vec::with_capacity(self.points.len());
        let mut stack: Vec<NodeId> = self.roots.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            let n = self.node(id);
            out.extend(n.rbt_l.iter().map(|(k, p)| (k.clone(), p.clone())));
            out.extend(n.rbt_r.iter().map(|(k, p)| (k.clone(), p.clone())));
            stack.extend(n.children.iter().rev().copied());
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        VisibilityPolygon {
            entries: out.into_iter().map(|(_, p)| VpEntry { kind: self.points[&p].kind, point: p }).collect(),
        }
    }

    /// Cones per region, sorted by the angle of their left ray.
    pub fn vc_index(&self) -> BTreeMap<usize, Vec<(PseudoAngle, NodeId)>> {
        let mut idx: BTreeMap<usize, Vec<(PseudoAngle, NodeId)>> = BTreeMap::new();
        for id in self.node_ids() {
            let n = self.node(id);
            idx.entry(n.visit.region).or_default().push((dir_key(&n.visit.cone.left), id));
        }
        for v in idx.values_mut() {
            v.sort();
        }
        idx
    }

    /// Structural checks: parent links, cone nesting, every stored entry
    /// inside its node's closed cone and no point stored twice.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen: BTreeSet<Point> = BTreeSet::new();
        for id in self.node_ids() {
            let n = self.node(id);
            for &c in &n.children {
                let ch = self.node(c);
                if ch.parent != Some(id) {
                    return Err(format!("node {c} has a stale parent link"));
                }
                let inside = n.visit.cone.contains_dir(&ch.visit.cone.left, Boundary::Include)
                    && n.visit.cone.contains_dir(&ch.visit.cone.right, Boundary::Include);
                if !inside {
                    return Err(format!("cone of node {c} leaves its parent's cone"));
                }
            }
            for p in n.rbt_l.values().chain(n.rbt_r.values()) {
                if !n.visit.cone.contains_dir(&p.sub(&self.q), Boundary::Include) {
                    return Err(format!("node {id} stores {p} outside its cone"));
                }
                if !seen.insert(p.clone()) {
                    return Err(format!("{p} stored twice"));
                }
            }
        }
        Ok(())
    }

    fn subtree(&self, root: NodeId) -> Vec<NodeId> {
        let mut out = vec![root];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.node(out[i]).children.iter().copied());
            i += 1;
        }
        out
    }

    /// Rebuilds every node whose closed cone meets `vc` against the current
    /// complex, reusing node ids where a visit repeats and re-hanging the
    /// untouched subtrees below.
    pub fn replace_within(
        &mut self,
        s: &Scene,
        cc: &CorridorComplex,
        vc: &SweepCone,
    ) -> Result<Replacement, TreeError> {
        let mut rep = Replacement::default();
        let affected: BTreeSet<NodeId> = self.node_ids().filter(|&i| self.node(i).visit.cone.meets(vc)).collect();
        let fresh = VisTree::build(s, cc, &self.q, Some(vc))?;
        rep.built = fresh.node_count();

        let mut map: HashMap<NodeId, NodeId> = HashMap::new();
        let mut claimed: BTreeSet<NodeId> = BTreeSet::new();
        let mut queue: VecDeque<NodeId> = fresh.roots.iter().copied().collect();
        while let Some(f) = queue.pop_front() {
            let fnode = fresh.node(f);
            let candidates: Vec<NodeId> = match fnode.parent {
                None => self.roots.clone(),
                Some(fp) => match map.get(&fp) {
                    Some(op) if claimed.contains(op) => self.node(*op).children.clone(),
                    _ => Vec::new(),
                },
            };
            let found = candidates.into_iter().find(|&o| {
                affected.contains(&o) && !claimed.contains(&o) && {
                    let ov = &self.node(o).visit;
                    ov.entry == fnode.visit.entry && ov.cone == fnode.visit.cone && ov.tile == fnode.visit.tile
                }
            });
            let target = match found {
                Some(o) => {
                    claimed.insert(o);
                    if self.node(o).emissions != fnode.emissions || self.node(o).visit != fnode.visit {
                        rep.modified += 1;
                    }
                    o
                }
                None => {
                    rep.added += 1;
                    self.nodes.push(None);
                    self.nodes.len() - 1
                }
            };
            map.insert(f, target);
            queue.extend(fnode.children.iter().copied());
        }

        let hanging: Vec<NodeId> = self
            .node_ids()
            .filter(|&i| !affected.contains(&i) && self.node(i).parent.is_some_and(|p| affected.contains(&p)))
            .collect();
        let mut dropped: BTreeSet<NodeId> = affected.iter().copied().filter(|o| !claimed.contains(o)).collect();
        rep.removed += dropped.len();
        let mut kept_hanging: BTreeSet<NodeId> = BTreeSet::new();
        let mut reattach: Vec<(NodeId, NodeId)> = Vec::new();
        let mut rebuild: Vec<(NodeId, Visit)> = Vec::new();
        for pe in &fresh.pruned {
            let parent = map[&pe.parent];
            let hit = hanging.iter().copied().find(|&h| {
                !kept_hanging.contains(&h) && self.node(h).parent == Some(parent) && {
                    let v = &self.node(h).visit;
                    v.entry == Some(pe.window) && v.cone == pe.cone
                }
            });
            match hit {
                Some(h) => {
                    kept_hanging.insert(h);
                    reattach.push((parent, h));
                }
                None => {
                    let pv = &fresh.node(pe.parent).visit;
                    let region = cc.windows[pe.window].other(pv.region);
                    rebuild
                        .push((parent, Visit { region, cone: pe.cone.clone(), entry: Some(pe.window), tile: pv.tile }));
                }
            }
        }
        for h in hanging {
            if !kept_hanging.contains(&h) {
                let sub = self.subtree(h);
                rep.removed += sub.len();
                dropped.extend(sub);
            }
        }
        rep.reattached = reattach.len();

        for id in dropped {
            self.nodes[id] = None;
        }
        self.roots.retain(|r| self.nodes[*r].is_some());
        for (&f, &o) in &map {
            let fnode = fresh.node(f);
            self.nodes[o] = Some(VisTreeNode {
                visit: fnode.visit.clone(),
                parent: fnode.parent.map(|p| map[&p]),
                children: fnode.children.iter().map(|c| map[c]).collect(),
                emissions: fnode.emissions.clone(),
                rbt_l: BTreeMap::new(),
                rbt_r: BTreeMap::new(),
            });
        }
        for f in &fresh.roots {
            if !self.roots.contains(&map[f]) {
                self.roots.push(map[f]);
            }
        }
        for (parent, h) in reattach {
            self.node_mut(parent).children.push(h);
        }
        rep.fallbacks = rebuild.len();
        let made = self.grow(cc, rebuild.into_iter().map(|(p, v)| (Some(p), v)).collect(), None)?;
        rep.built += made;
        rep.added += made;

        let mut roots = std::mem::take(&mut self.roots);
        roots.sort_by_key(|&r| self.node(r).visit.tile);
        self.roots = roots;
        for id in self.node_ids().collect::<Vec<_>>() {
            let mut ch = std::mem::take(&mut self.node_mut(id).children);
            ch.sort_by_cached_key(|&c| dir_key(&self.node(c).visit.cone.left));
            self.node_mut(id).children = ch;
        }
        self.refresh(s);
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::decompose;
    use crate::oracle::{describe_vp_diff, oracle_vp};

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    fn check(s: &Scene, q: &Point) -> VisTree {
        let cc = decompose(s).unwrap();
        let t = VisTree::build(s, &cc, q, None).unwrap();
        t.check_invariants().unwrap();
        let got = t.extract_vp();
        let want = oracle_vp(s, q).unwrap();
        if let Some(d) = describe_vp_diff(&got, &want) {
            panic!("q = {q}\n{d}");
        }
        t
    }

    #[test]
    fn empty_scene_is_the_box() {
        let s = Scene::empty(0, 0, 10, 10);
        let t = check(&s, &p(5, 5));
        assert_eq!(t.extract_vp().len(), 4);
    }

    #[test]
    fn square_scene() {
        let s = Scene::empty(0, 0, 10, 10).with_obstacle(0, &[(4, 4), (6, 4), (6, 6), (4, 6)]);
        let vp = check(&s, &p(2, 5)).extract_vp();
        let constructed: Vec<Point> =
            vp.entries.iter().filter(|e| e.kind == PointKind::ConstructedVertex).map(|e| e.point.clone()).collect();
        assert_eq!(constructed.len(), 2);
        assert!(constructed.contains(&p(10, 1)) && constructed.contains(&p(10, 9)));
    }

    #[test]
    fn two_obstacles_many_queries() {
        let s = Scene::empty(0, 0, 20, 12)
            .with_obstacle(0, &[(4, 4), (8, 3), (7, 8), (5, 7)])
            .with_obstacle(1, &[(12, 5), (16, 4), (15, 9)]);
        for (x, y) in [(1, 1), (2, 9), (10, 6), (18, 2), (11, 11), (6, 1), (17, 10), (9, 10)] {
            check(&s, &p(x, y));
        }
    }

    #[test]
    fn restricted_tree_is_a_prefix() {
        let s = Scene::empty(0, 0, 20, 12)
            .with_obstacle(0, &[(4, 4), (8, 3), (7, 8), (5, 7)])
            .with_obstacle(1, &[(12, 5), (16, 4), (15, 9)]);
        let cc = decompose(&s).unwrap();
        let q = p(10, 6);
        let full = VisTree::build(&s, &cc, &q, None).unwrap();
        let vc = SweepCone::new(p(1, 0), p(1, 1), RayTag::Cut, RayTag::Cut).unwrap();
        let part = VisTree::build(&s, &cc, &q, Some(&vc)).unwrap();
        assert!(part.node_count() < full.node_count());
        for id in part.node_ids() {
            let v = &part.node(id).visit;
            assert!(full
                .node_ids()
                .any(|f| &full.node(f).visit == v && full.node(f).emissions == part.node(id).emissions));
        }
    }

    #[test]
    fn random_scenes_match_oracle() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for round in 0..24 {
            let s = crate::gen::random_scene(&mut rng, 1 + round % 4, 40);
            for _ in 0..3 {
                let q = crate::gen::random_query(&mut rng, &s);
                check(&s, &q);
            }
        }
    }
}
