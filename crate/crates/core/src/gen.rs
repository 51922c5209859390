//! Random scenes, query points and edits on an integer grid.
//!
//! Obstacles are star-shaped around centres whose bounding circles are
//! disjoint. Everything produced is in general position: no three of the
//! obstacle vertices and box corners are collinear, and no query point is
//! collinear with two of them.

use rand::Rng;

use crate::domain::{EditEvent, Obstacle, Scene};
use crate::geom::{orientation, Orientation, Point};

pub const SIZE: i64 = 1000;

fn anchor_points(s: &Scene) -> Vec<Point> {
    let mut pts: Vec<Point> = s.box_corners().to_vec();
    pts.extend(s.vertices().map(|(_, p)| p.clone()));
    pts
}

pub fn in_general_position(s: &Scene) -> bool {
    let pts = anchor_points(s);
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orientation(&pts[i], &pts[j], &pts[k]) == Orientation::Collinear {
                    return false;
                }
            }
        }
    }
    true
}

/// `p` is collinear with no two of the scene's anchor points (other than
/// itself).
pub fn point_in_general_position(s: &Scene, p: &Point) -> bool {
    let pts: Vec<Point> = anchor_points(s).into_iter().filter(|a| a != p).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if orientation(p, &pts[i], &pts[j]) == Orientation::Collinear {
                return false;
            }
        }
    }
    true
}

fn star_obstacle(rng: &mut impl Rng, id: u32, cx: f64, cy: f64, r: f64, k: usize) -> Obstacle {
    let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(|a, b| a.total_cmp(b));
    let ring = angles
        .iter()
        .map(|a| {
            let rr = rng.gen_range(0.4 * r..=r);
            Point::int((cx + rr * a.cos()).round() as i64, (cy + rr * a.sin()).round() as i64)
        })
        .collect();
    Obstacle::new(id, ring)
}

/// A valid scene in general position with `h` obstacles and at most
/// `max_vertices` obstacle vertices in total.
pub fn random_scene(rng: &mut impl Rng, h: usize, max_vertices: usize) -> Scene {
    let per = (max_vertices / h.max(1)).clamp(3, 10);
    loop {
        let mut circles: Vec<(f64, f64, f64)> = Vec::new();
        let mut tries = 0;
        while circles.len() < h && tries < 500 {
            tries += 1;
            let r = rng.gen_range(40.0..180.0);
            let lo = r + 15.0;
            let hi = SIZE as f64 - r - 15.0;
            let (cx, cy) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
            if circles.iter().all(|&(x, y, rr)| ((x - cx).powi(2) + (y - cy).powi(2)).sqrt() > r + rr + 15.0) {
                circles.push((cx, cy, r));
            }
        }
        if circles.len() < h {
            continue;
        }
        let obstacles = circles
            .iter()
            .enumerate()
            .map(|(i, &(cx, cy, r))| {
                let k = rng.gen_range(3..=per);
                star_obstacle(rng, i as u32, cx, cy, r, k)
            })
            .collect();
        let s = Scene::new(Point::int(0, 0), Point::int(SIZE, SIZE), obstacles);
        if s.validate().is_ok() && in_general_position(&s) {
            return s;
        }
    }
}

/// An integer free-space point in general position with the scene.
pub fn random_query(rng: &mut impl Rng, s: &Scene) -> Point {
    loop {
        let p = Point::int(rng.gen_range(1..SIZE), rng.gen_range(1..SIZE));
        if s.in_open_free_space(&p) && point_in_general_position(s, &p) {
            return p;
        }
    }
}

/// A raw insert or delete on a random obstacle; it may still be rejected
/// by the scene or the decomposition.
pub fn propose_edit(rng: &mut impl Rng, s: &Scene) -> EditEvent {
    let o = &s.obstacles[rng.gen_range(0..s.obstacles.len())];
    let m = o.len();
    let i = rng.gen_range(0..m);
    if m > 3 && rng.gen_bool(0.45) {
        return EditEvent::Delete { obstacle: o.id, index: i };
    }
    let (a, b) = (o.ring[i].to_f64(), o.next(i).to_f64());
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let t = rng.gen_range(0.2..0.8);
    let off = rng.gen_range(-0.5..0.8);
    let x = a.0 + dx * t + dy * off;
    let y = a.1 + dy * t - dx * off;
    EditEvent::Insert { obstacle: o.id, index: i, point: Point::int(x.round() as i64, y.round() as i64) }
}

/// After applying `e` to get `after`, the scene is still in general
/// position and the tracked points stay in general position with it.
pub fn edit_keeps_general_position(after: &Scene, e: &EditEvent, tracked: &[Point]) -> bool {
    if let EditEvent::Insert { point, .. } = e {
        if !point_in_general_position(after, point) {
            return false;
        }
        for q in tracked {
            let others: Vec<Point> = anchor_points(after).into_iter().filter(|a| a != point).collect();
            if others.iter().any(|a| orientation(q, point, a) == Orientation::Collinear) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scenes_are_valid_and_general() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for h in 1..=5 {
            let s = random_scene(&mut rng, h, 40);
            assert_eq!(s.obstacles.len(), h);
            assert!(s.validate().is_ok());
            assert!(s.vertex_count() <= 40);
            let q = random_query(&mut rng, &s);
            assert!(s.in_open_free_space(&q));
        }
    }

    #[test]
    fn same_seed_same_scene() {
        let a = random_scene(&mut ChaCha8Rng::seed_from_u64(3), 3, 30);
        let b = random_scene(&mut ChaCha8Rng::seed_from_u64(3), 3, 30);
        assert_eq!(a, b);
    }
}
