//! Scenes, edit events and their text formats.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geom::{
    on_segment, orientation, point_in_ring, segments_intersect, signed_area2, Coord, Orientation, Point, Segment,
    SegmentMode,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Obstacle {
    pub id: u32,
    pub ring: Vec<Point>,
}

impl Obstacle {
    pub fn new(id: u32, ring: Vec<Point>) -> Self {
        Obstacle { id, ring }
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn edge(&self, i: usize) -> Segment {
        let m = self.ring.len();
        Segment::new(self.ring[i].clone(), self.ring[(i + 1) % m].clone())
    }

    pub fn prev(&self, i: usize) -> &Point {
        let m = self.ring.len();
        &self.ring[(i + m - 1) % m]
    }

    pub fn next(&self, i: usize) -> &Point {
        &self.ring[(i + 1) % self.ring.len()]
    }
}

/// Location of a vertex inside a scene: obstacle position in
/// [`Scene::obstacles`] and ring index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexRef {
    pub obstacle: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scene {
    pub min: Point,
    pub max: Point,
    pub obstacles: Vec<Obstacle>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SceneViolation {
    #[error("bounding box is empty")]
    DegenerateBox,
    #[error("obstacle id {0} is used twice")]
    DuplicateId(u32),
    #[error("obstacle {0} has fewer than 3 vertices")]
    TooFewVertices(u32),
    #[error("obstacle {obstacle} repeats vertex {index}")]
    RepeatedVertex { obstacle: u32, index: usize },
    #[error("obstacle {obstacle}: edges {a} and {b} intersect")]
    SelfIntersection { obstacle: u32, a: usize, b: usize },
    #[error("obstacle {0} is not counter-clockwise")]
    Orientation(u32),
    #[error("obstacle {obstacle}: vertex {index} is not strictly inside the box")]
    OutsideBox { obstacle: u32, index: usize },
    #[error("obstacles {0} and {1} intersect")]
    Overlap(u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EditEvent {
    /// Places `point` between `ring[index]` and `ring[index + 1]`.
    Insert { obstacle: u32, index: usize, point: Point },
    /// Removes `ring[index]`.
    Delete { obstacle: u32, index: usize },
}

impl EditEvent {
    pub fn obstacle(&self) -> u32 {
        match self {
            EditEvent::Insert { obstacle, .. } | EditEvent::Delete { obstacle, .. } => *obstacle,
        }
    }

    pub fn is_insert(&self) -> bool {
        matches!(self, EditEvent::Insert { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EditError {
    #[error("unknown obstacle {0}")]
    UnknownObstacle(u32),
    #[error("index {index} out of range for obstacle {obstacle}")]
    IndexOutOfRange { obstacle: u32, index: usize },
    #[error("edit would make the obstacle non-simple")]
    SimplicityViolated,
    #[error("edit would make obstacles intersect")]
    DisjointnessViolated,
    #[error("new vertex is not strictly inside the bounding box")]
    OutsideBox,
    #[error("edit triangle is not contained in a single corridor")]
    TriangleSpansCorridors,
    #[error("obstacle would have fewer than 3 vertices")]
    RingTooSmall,
    #[error("tracked query point lies in the closed edit triangle")]
    QueryInTriangle,
}

/// The triangle `v v_i v_{i+1}` touched by an edit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditTriangle {
    pub v: Point,
    pub vi: Point,
    pub vi1: Point,
    pub obstacle_pos: usize,
    pub insert: bool,
    /// The triangle becomes part of an obstacle (the free space shrinks).
    pub filled: bool,
}

impl Scene {
    pub fn new(min: Point, max: Point, obstacles: Vec<Obstacle>) -> Self {
        Scene { min, max, obstacles }
    }

    pub fn empty(xmin: i64, ymin: i64, xmax: i64, ymax: i64) -> Self {
        Scene::new(Point::int(xmin, ymin), Point::int(xmax, ymax), Vec::new())
    }

    pub fn with_obstacle(mut self, id: u32, pts: &[(i64, i64)]) -> Self {
        self.obstacles.push(Obstacle::new(id, pts.iter().map(|&(x, y)| Point::int(x, y)).collect()));
        self
    }

    /// Box corners in counter-clockwise order starting at the minimum.
    pub fn box_corners(&self) -> [Point; 4] {
        [
            self.min.clone(),
            Point::new(self.max.x.clone(), self.min.y.clone()),
            self.max.clone(),
            Point::new(self.min.x.clone(), self.max.y.clone()),
        ]
    }

    pub fn is_box_corner(&self, p: &Point) -> bool {
        (p.x == self.min.x || p.x == self.max.x) && (p.y == self.min.y || p.y == self.max.y)
    }

    pub fn strictly_inside_box(&self, p: &Point) -> bool {
        p.x > self.min.x && p.x < self.max.x && p.y > self.min.y && p.y < self.max.y
    }

    pub fn inside_box_closed(&self, p: &Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn vertex_count(&self) -> usize {
        self.obstacles.iter().map(Obstacle::len).sum()
    }

    pub fn position(&self, id: u32) -> Option<usize> {
        self.obstacles.iter().position(|o| o.id == id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexRef, &Point)> {
        self.obstacles
            .iter()
            .enumerate()
            .flat_map(|(oi, o)| o.ring.iter().enumerate().map(move |(i, p)| (VertexRef { obstacle: oi, index: i }, p)))
    }

    pub fn vertex(&self, r: VertexRef) -> &Point {
        &self.obstacles[r.obstacle].ring[r.index]
    }

    pub fn vertex_index(&self) -> HashMap<Point, VertexRef> {
        self.vertices().map(|(r, p)| (p.clone(), r)).collect()
    }

    /// All obstacle edges together with their owning obstacle position.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Segment)> + '_ {
        self.obstacles.iter().enumerate().flat_map(|(oi, o)| (0..o.len()).map(move |i| (oi, o.edge(i))))
    }

    pub fn box_edges(&self) -> [Segment; 4] {
        let c = self.box_corners();
        [
            Segment::new(c[0].clone(), c[1].clone()),
            Segment::new(c[1].clone(), c[2].clone()),
            Segment::new(c[2].clone(), c[3].clone()),
            Segment::new(c[3].clone(), c[0].clone()),
        ]
    }

    /// Obstacle whose closed region contains `p`, if any.
    pub fn obstacle_containing(&self, p: &Point) -> Option<usize> {
        self.obstacles.iter().position(|o| {
            let m = o.len();
            (0..m).any(|i| on_segment(&o.ring[i], &o.ring[(i + 1) % m], p)) || point_in_ring(&o.ring, p)
        })
    }

    /// `p` is in the open free space: strictly inside the box and outside
    /// every closed obstacle.
    pub fn in_open_free_space(&self, p: &Point) -> bool {
        self.strictly_inside_box(p) && self.obstacle_containing(p).is_none()
    }

    pub fn validate(&self) -> Result<(), SceneViolation> {
        if self.min.x >= self.max.x || self.min.y >= self.max.y {
            return Err(SceneViolation::DegenerateBox);
        }
        let mut ids = std::collections::HashSet::new();
        for o in &self.obstacles {
            if !ids.insert(o.id) {
                return Err(SceneViolation::DuplicateId(o.id));
            }
            validate_ring(o)?;
            for (i, p) in o.ring.iter().enumerate() {
                if !self.strictly_inside_box(p) {
                    return Err(SceneViolation::OutsideBox { obstacle: o.id, index: i });
                }
            }
        }
        for a in 0..self.obstacles.len() {
            for b in a + 1..self.obstacles.len() {
                if rings_meet(&self.obstacles[a].ring, &self.obstacles[b].ring) {
                    return Err(SceneViolation::Overlap(self.obstacles[a].id, self.obstacles[b].id));
                }
            }
        }
        Ok(())
    }

    /// The triangle an edit touches, after checking index bounds.
    pub fn edit_triangle(&self, e: &EditEvent) -> Result<EditTriangle, EditError> {
        let pos = self.position(e.obstacle()).ok_or(EditError::UnknownObstacle(e.obstacle()))?;
        let o = &self.obstacles[pos];
        let m = o.len();
        match e {
            EditEvent::Insert { index, point, obstacle } => {
                if *index >= m {
                    return Err(EditError::IndexOutOfRange { obstacle: *obstacle, index: *index });
                }
                let vi = o.ring[*index].clone();
                let vi1 = o.next(*index).clone();
                let filled = orientation(&vi, &vi1, point) == Orientation::Right;
                Ok(EditTriangle { v: point.clone(), vi, vi1, obstacle_pos: pos, insert: true, filled })
            }
            EditEvent::Delete { index, obstacle } => {
                if *index >= m {
                    return Err(EditError::IndexOutOfRange { obstacle: *obstacle, index: *index });
                }
                let v = o.ring[*index].clone();
                let vi = o.prev(*index).clone();
                let vi1 = o.next(*index).clone();
                // Deleting a reflex vertex hands its notch back to the
                // obstacle; deleting a convex one frees the triangle.
                let filled = orientation(&vi, &v, &vi1) == Orientation::Right;
                Ok(EditTriangle { v, vi, vi1, obstacle_pos: pos, insert: false, filled })
            }
        }
    }

    /// Applies an edit, returning the new scene. Checks everything except
    /// the single-corridor condition, which belongs to the decomposition.
    pub fn apply_edit(&self, e: &EditEvent) -> Result<Scene, EditError> {
        let tri = self.edit_triangle(e)?;
        let pos = tri.obstacle_pos;
        let mut ring = self.obstacles[pos].ring.clone();
        let changed: Vec<usize> = match e {
            EditEvent::Insert { index, point, .. } => {
                if !self.strictly_inside_box(point) {
                    return Err(EditError::OutsideBox);
                }
                if orientation(&tri.vi, &tri.vi1, point) == Orientation::Collinear {
                    return Err(EditError::SimplicityViolated);
                }
                ring.insert(index + 1, point.clone());
                vec![*index, index + 1]
            }
            EditEvent::Delete { index, .. } => {
                if ring.len() <= 3 {
                    return Err(EditError::RingTooSmall);
                }
                if orientation(&tri.vi, &tri.v, &tri.vi1) == Orientation::Collinear {
                    return Err(EditError::SimplicityViolated);
                }
                ring.remove(*index);
                let m = ring.len();
                vec![(index + m - 1) % m]
            }
        };
        let cand = Obstacle::new(e.obstacle(), ring);
        if !ring_simple_near(&cand, &changed) || signed_area2(&cand.ring).signum() <= 0 {
            return Err(EditError::SimplicityViolated);
        }
        for (oi, other) in self.obstacles.iter().enumerate() {
            if oi != pos && rings_meet(&cand.ring, &other.ring) {
                return Err(EditError::DisjointnessViolated);
            }
        }
        let mut out = self.clone();
        out.obstacles[pos] = cand;
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Scene, ParseError> {
        let mut lines = numbered_lines(text);
        let (ln, first) = lines.next().ok_or(ParseError { line: 0, msg: "empty scene".into() })?;
        let f: Vec<&str> = first.split_whitespace().collect();
        if f.len() != 5 || f[0] != "box" {
            return Err(ParseError::at(ln, "expected `box xmin ymin xmax ymax`"));
        }
        let min = Point::parse(f[1], f[2]).map_err(|e| ParseError::at(ln, &e.to_string()))?;
        let max = Point::parse(f[3], f[4]).map_err(|e| ParseError::at(ln, &e.to_string()))?;
        let mut obstacles = Vec::new();
        while let Some((ln, line)) = lines.next() {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 || f[0] != "obstacle" {
                return Err(ParseError::at(ln, "expected `obstacle <id> <m>`"));
            }
            let id: u32 = f[1].parse().map_err(|_| ParseError::at(ln, "bad obstacle id"))?;
            let m: usize = f[2].parse().map_err(|_| ParseError::at(ln, "bad vertex count"))?;
            let mut ring = Vec::with_capacity(m);
            for _ in 0..m {
                let (ln, line) = lines.next().ok_or(ParseError::at(ln, "missing vertex lines"))?;
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 3 || f[0] != "v" {
                    return Err(ParseError::at(ln, "expected `v <x> <y>`"));
                }
                ring.push(Point::parse(f[1], f[2]).map_err(|e| ParseError::at(ln, &e.to_string()))?);
            }
            obstacles.push(Obstacle::new(id, ring));
        }
        Ok(Scene::new(min, max, obstacles))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("box {} {} {} {}\n", self.min.x, self.min.y, self.max.x, self.max.y);
        for o in &self.obstacles {
            let _ = writeln!(s, "obstacle {} {}", o.id, o.len());
            for p in &o.ring {
                let _ = writeln!(s, "v {} {}", p.x, p.y);
            }
        }
        s
    }
}

fn validate_ring(o: &Obstacle) -> Result<(), SceneViolation> {
    let m = o.len();
    if m < 3 {
        return Err(SceneViolation::TooFewVertices(o.id));
    }
    let mut seen = std::collections::HashSet::new();
    for (i, p) in o.ring.iter().enumerate() {
        if !seen.insert(p) {
            return Err(SceneViolation::RepeatedVertex { obstacle: o.id, index: i });
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            if let Some(bad) = edges_conflict(o, a, b) {
                if bad {
                    return Err(SceneViolation::SelfIntersection { obstacle: o.id, a, b });
                }
            }
        }
    }
    if signed_area2(&o.ring).signum() <= 0 {
        return Err(SceneViolation::Orientation(o.id));
    }
    Ok(())
}

/// Whether ring edges `a` and `b` improperly meet. Adjacent edges may only
/// share their common endpoint.
fn edges_conflict(o: &Obstacle, a: usize, b: usize) -> Option<bool> {
    let m = o.len();
    let ea = o.edge(a);
    let eb = o.edge(b);
    if (a + 1) % m == b || (b + 1) % m == a {
        let shared = if (a + 1) % m == b { &ea.b } else { &ea.a };
        let (sa, sb) = if (a + 1) % m == b { (&ea.a, &eb.b) } else { (&ea.b, &eb.a) };
        // Overlap along the shared endpoint means a degenerate spike.
        let folded = orientation(sa, shared, sb) == Orientation::Collinear
            && on_segment(sa, shared, sb) | on_segment(shared, sb, sa);
        return Some(folded);
    }
    Some(segments_intersect(&ea, &eb, SegmentMode::Closed))
}

/// Simplicity check restricted to edges touching the positions in `changed`
/// (each position names the edge starting there and the one ending there).
fn ring_simple_near(o: &Obstacle, changed: &[usize]) -> bool {
    let m = o.len();
    let mut seen = std::collections::HashSet::new();
    if !o.ring.iter().all(|p| seen.insert(p)) {
        return false;
    }
    let mut edges: Vec<usize> = Vec::new();
    for &c in changed {
        edges.push(c % m);
        edges.push((c + m - 1) % m);
        edges.push((c + 1) % m);
    }
    edges.sort_unstable();
    edges.dedup();
    for &a in &edges {
        for b in 0..m {
            if a != b && edges_conflict(o, a, b) == Some(true) {
                return false;
            }
        }
    }
    true
}

/// The closed regions bounded by two simple rings intersect.
pub fn rings_meet(a: &[Point], b: &[Point]) -> bool {
    let (ma, mb) = (a.len(), b.len());
    for i in 0..ma {
        let ea = Segment::new(a[i].clone(), a[(i + 1) % ma].clone());
        for j in 0..mb {
            let eb = Segment::new(b[j].clone(), b[(j + 1) % mb].clone());
            if segments_intersect(&ea, &eb, SegmentMode::Closed) {
                return true;
            }
        }
    }
    point_in_ring(b, &a[0]) || point_in_ring(a, &b[0])
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    fn at(line: usize, msg: &str) -> Self {
        ParseError { line, msg: msg.to_string() }
    }
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptCommand {
    Edit(EditEvent),
    Query(Point),
    Vg,
    Check,
}

pub fn parse_script(text: &str) -> Result<Vec<ScriptCommand>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in numbered_lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str, what: &str| -> Result<usize, ParseError> {
            s.parse().map_err(|_| ParseError::at(ln, &format!("bad {what}")))
        };
        let cmd = match f.as_slice() {
            ["insert", o, i, x, y] => ScriptCommand::Edit(EditEvent::Insert {
                obstacle: num(o, "obstacle id")? as u32,
                index: num(i, "index")?,
                point: Point::parse(x, y).map_err(|e| ParseError::at(ln, &e.to_string()))?,
            }),
            ["delete", o, i] => ScriptCommand::Edit(EditEvent::Delete {
                obstacle: num(o, "obstacle id")? as u32,
                index: num(i, "index")?,
            }),
            ["query", x, y] => {
                ScriptCommand::Query(Point::parse(x, y).map_err(|e| ParseError::at(ln, &e.to_string()))?)
            }
            ["vg"] => ScriptCommand::Vg,
            ["check"] => ScriptCommand::Check,
            _ => return Err(ParseError::at(ln, &format!("unrecognised command `{line}`"))),
        };
        out.push(cmd);
    }
    Ok(out)
}

pub fn script_to_text(cmds: &[ScriptCommand]) -> String {
    let mut s = String::new();
    for c in cmds {
        let _ = match c {
            ScriptCommand::Edit(EditEvent::Insert { obstacle, index, point }) => {
                writeln!(s, "insert {obstacle} {index} {} {}", point.x, point.y)
            }
            ScriptCommand::Edit(EditEvent::Delete { obstacle, index }) => writeln!(s, "delete {obstacle} {index}"),
            ScriptCommand::Query(p) => writeln!(s, "query {} {}", p.x, p.y),
            ScriptCommand::Vg => writeln!(s, "vg"),
            ScriptCommand::Check => writeln!(s, "check"),
        };
    }
    s
}

/// Half of a coordinate sum, used for midpoints in tests and generators.
pub fn midpoint(a: &Point, b: &Point) -> Point {
    a.add(b).scale(&Coord::ratio(1, 2))
}
