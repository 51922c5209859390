//! A scene session: the scene, its corridor complex, any tracked query
//! points and an optional visibility graph, all advanced together by
//! validated edits.

use std::collections::BTreeSet;

use rand::Rng;
use thiserror::Error;

use crate::decomposition::{decompose, CorridorComplex, DecompError, EditPlan};
use crate::domain::{EditError, EditEvent, Scene};
use crate::dynamic_vp::{vc_m, EventStats, TrackedQuery};
use crate::gen::{edit_keeps_general_position, propose_edit};
use crate::geom::Point;
use crate::oracle::{describe_vp_diff, oracle_vg, oracle_vp, VgEdge};
use crate::visgraph::{triangle_violations, VgStats, VisGraph};
use crate::vistree::TreeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SessionError {
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Edit(#[from] EditError),
}

#[derive(Clone, Debug, Default)]
pub struct EventReport {
    pub vp: Vec<EventStats>,
    pub vg: Option<VgStats>,
    pub vg_removed: usize,
    pub vg_added: usize,
    pub vg_triangle_violations: usize,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub scene: Scene,
    pub cc: CorridorComplex,
    pub tracked: Vec<TrackedQuery>,
    pub vg: Option<VisGraph>,
}

impl Session {
    pub fn new(scene: Scene) -> Result<Self, SessionError> {
        let cc = decompose(&scene)?;
        Ok(Session { scene, cc, tracked: Vec::new(), vg: None })
    }

    pub fn track(&mut self, q: &Point) -> Result<usize, SessionError> {
        self.tracked.push(TrackedQuery::new(&self.scene, &self.cc, q)?);
        Ok(self.tracked.len() - 1)
    }

    pub fn enable_vg(&mut self) {
        if self.vg.is_none() {
            self.vg = Some(VisGraph::build(&self.scene));
        }
    }

    /// Everything an edit must pass before any state changes: the scene
    /// rules, the single-region rule, and no tracked point inside the
    /// edit triangle.
    pub fn check_edit(&self, e: &EditEvent) -> Result<(Scene, EditPlan), EditError> {
        let after = self.scene.apply_edit(e)?;
        let plan = self.cc.plan_edit(&self.scene, e)?;
        let tri = self.scene.edit_triangle(e)?;
        for t in &self.tracked {
            vc_m(&t.q, &tri)?;
        }
        Ok((after, plan))
    }

    pub fn apply(&mut self, e: &EditEvent) -> Result<EventReport, SessionError> {
        let (after, plan) = self.check_edit(e)?;
        self.cc.apply_plan(plan);
        let mut report = EventReport::default();
        for t in &mut self.tracked {
            report.vp.push(t.on_edit(&self.scene, &after, &self.cc, e)?);
        }
        if let Some(g) = &mut self.vg {
            let before: BTreeSet<VgEdge> = g.edges();
            report.vg = Some(g.on_edit(&self.scene, &after, e));
            let now = g.edges();
            let changed: BTreeSet<VgEdge> = before.symmetric_difference(&now).cloned().collect();
            report.vg_removed = before.difference(&now).count();
            report.vg_added = now.difference(&before).count();
            let tri = self.scene.edit_triangle(e)?;
            report.vg_triangle_violations = triangle_violations(&tri, &changed);
        }
        self.scene = after;
        Ok(report)
    }

    /// Compares every maintained structure with the oracles; returns a
    /// description of the first divergence.
    pub fn check_oracles(&self) -> Result<(), String> {
        for t in &self.tracked {
            let want = oracle_vp(&self.scene, &t.q).map_err(|e| e.to_string())?;
            if let Some(d) = describe_vp_diff(&t.vp(), &want) {
                return Err(format!("visibility polygon of {} diverged\n{d}", t.q));
            }
            t.tree.check_invariants()?;
        }
        if let Some(g) = &self.vg {
            g.check_invariants()?;
            let want = oracle_vg(&self.scene);
            let got = g.edges();
            if got != want {
                let extra = got.difference(&want).count();
                let missing = want.difference(&got).count();
                return Err(format!("visibility graph diverged: {extra} extra, {missing} missing edges"));
            }
        }
        Ok(())
    }

    /// A random edit that this session accepts and that keeps the scene
    /// and the tracked points in general position.
    pub fn random_edit(&self, rng: &mut impl Rng, tries: usize) -> Option<EditEvent> {
        let qs: Vec<Point> = self.tracked.iter().map(|t| t.q.clone()).collect();
        for _ in 0..tries {
            let e = propose_edit(rng, &self.scene);
            if let Ok((after, _)) = self.check_edit(&e) {
                if edit_keeps_general_position(&after, &e, &qs) {
                    return Some(e);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_script_stays_in_sync() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..3 {
            let scene = crate::gen::random_scene(&mut rng, 2 + round, 24);
            let q = crate::gen::random_query(&mut rng, &scene);
            let mut s = Session::new(scene).unwrap();
            s.track(&q).unwrap();
            s.enable_vg();
            for _ in 0..12 {
                let Some(e) = s.random_edit(&mut rng, 200) else { break };
                let r = s.apply(&e).unwrap();
                assert_eq!(r.vp[0].contiguity_violations, 0);
                assert_eq!(r.vg_triangle_violations, 0);
                if let Err(msg) = s.check_oracles() {
                    panic!("after {e:?}: {msg}");
                }
            }
        }
    }

    #[test]
    fn rejects_edits_over_the_query() {
        let scene = Scene::empty(0, 0, 10, 10).with_obstacle(0, &[(4, 4), (6, 4), (6, 6), (4, 6)]);
        let mut s = Session::new(scene).unwrap();
        s.track(&Point::int(3, 5)).unwrap();
        let e = EditEvent::Insert { obstacle: 0, index: 3, point: Point::int(2, 5) };
        assert_eq!(s.apply(&e).unwrap_err(), SessionError::Edit(EditError::QueryInTriangle));
    }
}
