//! Keeping a query point's visibility polygon current under vertex edits.
//!
//! An edit changes the scene only inside the triangle `v v_i v_{i+1}`, so
//! only visits whose cone meets the cone `vc_m` that the triangle spans at
//! `q` can change. Those visits are rebuilt against the edited complex and
//! merged back into the tree; everything outside `vc_m` is kept as is.

use std::collections::BTreeSet;

use crate::decomposition::CorridorComplex;
use crate::domain::{EditError, EditEvent, EditTriangle, Scene};
use crate::geom::{cross_sign, in_open_triangle, on_segment, Boundary, Point};
use crate::oracle::{oracle_is_visible, PointKind, VisibilityPolygon};
use crate::simple_vis::{RayTag, SweepCone};
use crate::vistree::{Key, NodeId, Replacement, TreeError, UpdateStats, VisTree};

/// The widest of the three cones spanned at `q` by pairs of triangle
/// corners, preferring `(v_i, v_{i+1})` on ties.
pub fn vc_m(q: &Point, tri: &EditTriangle) -> Result<SweepCone, EditError> {
    let (v, a, b) = (&tri.v, &tri.vi, &tri.vi1);
    let closed = in_open_triangle(v, a, b, q) || on_segment(v, a, q) || on_segment(v, b, q) || on_segment(a, b, q);
    if closed {
        return Err(EditError::QueryInTriangle);
    }
    let dirs = [a.sub(q), b.sub(q), v.sub(q)];
    for (x, y, z) in [(0, 1, 2), (2, 0, 1), (2, 1, 0)] {
        let (l, r) = match cross_sign(&dirs[x], &dirs[y]) {
            std::cmp::Ordering::Greater => (&dirs[x], &dirs[y]),
            std::cmp::Ordering::Less => (&dirs[y], &dirs[x]),
            std::cmp::Ordering::Equal => continue,
        };
        let cone = SweepCone::new(l.clone(), r.clone(), RayTag::Cut, RayTag::Cut).expect("ordered pair");
        if cone.contains_dir(&dirs[z], Boundary::Include) {
            return Ok(cone);
        }
    }
    Err(EditError::QueryInTriangle)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EventStats {
    pub insert: bool,
    pub visible: bool,
    pub rbt_plus: usize,
    pub rbt_minus: usize,
    pub nodes: usize,
    pub mutations: usize,
    pub contiguity_violations: usize,
    pub replacement: Replacement,
}

impl EventStats {
    pub fn line(&self, n: usize) -> String {
        format!(
            "event {n} kind {} visible {} rbt+ {} rbt- {} nodes {}",
            if self.insert { "insert" } else { "delete" },
            u8::from(self.visible),
            self.rbt_plus,
            self.rbt_minus,
            self.nodes
        )
    }
}

pub type EntrySet = BTreeSet<(Point, PointKind)>;

type SatelliteMaps = Vec<(NodeId, Vec<(Key, Point)>, Vec<(Key, Point)>)>;

pub fn entry_set(vp: &VisibilityPolygon) -> EntrySet {
    vp.entries.iter().map(|e| (e.point.clone(), e.kind)).collect()
}

/// Points of one satellite map that vanished from the polygon must form a
/// single run of consecutive leaves.
fn contiguous_removal(old: &[(Key, Point)], survivors: &BTreeSet<Point>) -> bool {
    let gone: Vec<usize> =
        old.iter().enumerate().filter(|(_, (_, p))| !survivors.contains(p)).map(|(i, _)| i).collect();
    gone.windows(2).all(|w| w[1] == w[0] + 1)
}

#[derive(Clone, Debug)]
pub struct TrackedQuery {
    pub q: Point,
    pub tree: VisTree,
    pub stats: UpdateStats,
}

impl TrackedQuery {
    pub fn new(s: &Scene, cc: &CorridorComplex, q: &Point) -> Result<Self, TreeError> {
        let tree = VisTree::build(s, cc, q, None)?;
        let stats = UpdateStats { nodes_visited: tree.node_count(), ..UpdateStats::default() };
        Ok(TrackedQuery { q: q.clone(), tree, stats })
    }

    pub fn vp(&self) -> VisibilityPolygon {
        self.tree.extract_vp()
    }

    /// Updates the tree after `e` turned `before` into `after`; `cc` is the
    /// complex already updated for the edit.
    pub fn on_edit(
        &mut self,
        before: &Scene,
        after: &Scene,
        cc: &CorridorComplex,
        e: &EditEvent,
    ) -> Result<EventStats, TreeError> {
        let tri = before.edit_triangle(e).expect("edit already validated");
        let cone = vc_m(&self.q, &tri).expect("edit already validated against tracked queries");
        let visible = if tri.insert {
            oracle_is_visible(after, &self.q, &tri.v)
        } else {
            oracle_is_visible(before, &self.q, &tri.v)
        };

        let old_vp = self.tree.extract_vp();
        let old_maps: SatelliteMaps = self
            .tree
            .node_ids()
            .map(|id| {
                let n = self.tree.node(id);
                let l = n.rbt_l.iter().map(|(k, p)| (k.clone(), p.clone())).collect();
                let r = n.rbt_r.iter().map(|(k, p)| (k.clone(), p.clone())).collect();
                (id, l, r)
            })
            .collect();

        let rep = self.tree.replace_within(after, cc, &cone)?;
        let new_vp = self.tree.extract_vp();
        let (old_set, new_set) = (entry_set(&old_vp), entry_set(&new_vp));
        let survivors: BTreeSet<Point> = new_vp.points().into_iter().collect();
        let contiguity_violations = if tri.insert {
            old_maps
                .iter()
                .map(|(_, l, r)| {
                    usize::from(!contiguous_removal(l, &survivors)) + usize::from(!contiguous_removal(r, &survivors))
                })
                .sum()
        } else {
            0
        };
        let out = EventStats {
            insert: tri.insert,
            visible,
            rbt_plus: new_set.difference(&old_set).count(),
            rbt_minus: old_set.difference(&new_set).count(),
            nodes: rep.built,
            mutations: rep.mutations(),
            contiguity_violations,
            replacement: rep,
        };
        self.stats.nodes_visited += rep.built;
        self.stats.rbt_insertions += out.rbt_plus;
        self.stats.rbt_deletions += out.rbt_minus;
        self.stats.cones_split += rep.fallbacks;
        Ok(out)
    }
}
