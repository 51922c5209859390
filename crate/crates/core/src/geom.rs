//! Exact planar primitives.
//!
//! Every predicate in the crate goes through this module. Coordinates are
//! arbitrary-precision rationals; integer inputs take an `i128` fast path so
//! that scenes with integral vertices stay cheap.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational coordinate, always in canonical (reduced) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coord(BigRational);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid coordinate literal `{0}`")]
pub struct CoordParseError(pub String);

impl Coord {
    pub fn zero() -> Self {
        Coord(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Coord(BigRational::from_integer(BigInt::from(v)))
    }

    /// `num / den`; panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coord(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Coord(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Integer value when the coordinate is integral and fits in `i64`.
    #[inline]
    pub fn as_i64(&self) -> Option<i64> {
        if self.0.denom().is_one() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        Coord(self.0.abs())
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coord {
    type Err = CoordParseError;

    /// Accepts integers, decimals (`-3.25`) and fractions (`7/2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CoordParseError(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Coord(BigRational::new(n, d)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let mut r = BigRational::new(numer, denom);
        if neg {
            r = -r;
        }
        Ok(Coord(r))
    }
}

macro_rules! coord_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Coord> for &Coord {
            type Output = Coord;
            #[inline]
            fn $m(self, rhs: &Coord) -> Coord {
                Coord((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Coord> for Coord {
            type Output = Coord;
            #[inline]
            fn $m(self, rhs: Coord) -> Coord {
                Coord(self.0.$m(rhs.0))
            }
        }
    };
}
coord_binop!(Add, add);
coord_binop!(Sub, sub);
coord_binop!(Mul, mul);

impl std::ops::Div<&Coord> for &Coord {
    type Output = Coord;
    fn div(self, rhs: &Coord) -> Coord {
        assert!(!rhs.is_zero(), "division by zero coordinate");
        Coord(&self.0 / &rhs.0)
    }
}

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord(-&self.0)
    }
}

impl From<i64> for Coord {
    fn from(v: i64) -> Self {
        Coord::from_int(v)
    }
}

/// A point (or a free vector, where the context says so).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point { x: Coord::from_int(x), y: Coord::from_int(y) }
    }

    pub fn parse(x: &str, y: &str) -> Result<Self, CoordParseError> {
        Ok(Point { x: x.parse()?, y: y.parse()? })
    }

    pub fn as_i64(&self) -> Option<(i64, i64)> {
        Some((self.x.as_i64()?, self.y.as_i64()?))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn add(&self, o: &Point) -> Point {
        Point { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn scale(&self, s: &Coord) -> Point {
        Point { x: &self.x * s, y: &self.y * s }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// Sign of the cross product `a × b` of two vectors.
pub fn cross_sign(a: &Point, b: &Point) -> Ordering {
    if let (Some((ax, ay)), Some((bx, by))) = (a.as_i64(), b.as_i64()) {
        if ax.unsigned_abs() < (1 << 62)
            && ay.unsigned_abs() < (1 << 62)
            && bx.unsigned_abs() < (1 << 62)
            && by.unsigned_abs() < (1 << 62)
        {
            let v = (ax as i128) * (by as i128) - (ay as i128) * (bx as i128);
            return v.cmp(&0);
        }
    }
    let l = &a.x * &b.y;
    let r = &a.y * &b.x;
    l.cmp(&r)
}

/// Sign of the dot product.
pub fn dot_sign(a: &Point, b: &Point) -> Ordering {
    if let (Some((ax, ay)), Some((bx, by))) = (a.as_i64(), b.as_i64()) {
        if ax.unsigned_abs() < (1 << 62)
            && ay.unsigned_abs() < (1 << 62)
            && bx.unsigned_abs() < (1 << 62)
            && by.unsigned_abs() < (1 << 62)
        {
            let v = (ax as i128) * (bx as i128) + (ay as i128) * (by as i128);
            return v.cmp(&0);
        }
    }
    let l = &a.x * &b.x;
    let r = -&(&a.y * &b.y);
    l.cmp(&r)
}

pub fn cross(a: &Point, b: &Point) -> Coord {
    &(&a.x * &b.y) - &(&a.y * &b.x)
}

pub fn dot(a: &Point, b: &Point) -> Coord {
    &(&a.x * &b.x) + &(&a.y * &b.y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Exact orientation of the triangle `abc`.
pub fn orientation(a: &Point, b: &Point, c: &Point) -> Orientation {
    if let (Some((ax, ay)), Some((bx, by)), Some((cx, cy))) = (a.as_i64(), b.as_i64(), c.as_i64()) {
        const LIM: u64 = 1 << 60;
        if [ax, ay, bx, by, cx, cy].iter().all(|v| v.unsigned_abs() < LIM) {
            let v = (bx as i128 - ax as i128) * (cy as i128 - ay as i128)
                - (by as i128 - ay as i128) * (cx as i128 - ax as i128);
            return match v.cmp(&0) {
                Ordering::Greater => Orientation::Left,
                Ordering::Less => Orientation::Right,
                Ordering::Equal => Orientation::Collinear,
            };
        }
    }
    match cross_sign(&b.sub(a), &c.sub(a)) {
        Ordering::Greater => Orientation::Left,
        Ordering::Less => Orientation::Right,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// Twice the signed area of a closed ring (positive for counter-clockwise).
pub fn signed_area2(ring: &[Point]) -> Coord {
    let n = ring.len();
    let mut acc = Coord::zero();
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        acc = &acc + &cross(a, b);
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentMode {
    /// Relative interiors only; shared endpoints do not count.
    Open,
    Closed,
}

/// `p` lies on the closed segment `ab` (`a != b`).
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orientation(a, b, p) == Orientation::Collinear && in_box(a, b, p)
}

/// `p` lies strictly between `a` and `b` on segment `ab`.
pub fn strictly_inside_segment(a: &Point, b: &Point, p: &Point) -> bool {
    on_segment(a, b, p) && p != a && p != b
}

fn in_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (xl, xh) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (yl, yh) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    &p.x >= xl && &p.x <= xh && &p.y >= yl && &p.y <= yh
}

/// Closed mode: the closed segments share a point. Open mode: some point of
/// the relative interior of one segment lies on the other segment.
pub fn segments_intersect(s1: &Segment, s2: &Segment, mode: SegmentMode) -> bool {
    let (a, b, c, d) = (&s1.a, &s1.b, &s2.a, &s2.b);
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    use Orientation::*;
    match mode {
        SegmentMode::Closed => {
            if o1 != o2 && o3 != o4 && o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
                return true;
            }
            on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
        }
        SegmentMode::Open => {
            if o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
                return o1 != o2 && o3 != o4;
            }
            if o1 == Collinear && o2 == Collinear {
                // Collinear: overlap of positive length, or an interior point
                // of one touching the other.
                return strictly_inside_segment(a, b, c)
                    || strictly_inside_segment(a, b, d)
                    || strictly_inside_segment(c, d, a)
                    || strictly_inside_segment(c, d, b)
                    || (a == c && b == d)
                    || (a == d && b == c);
            }
            // One endpoint touches the other segment.
            strictly_inside_segment(a, b, c)
                || strictly_inside_segment(a, b, d)
                || strictly_inside_segment(c, d, a)
                || strictly_inside_segment(c, d, b)
        }
    }
}

/// Proper crossing: the segments meet in exactly one point interior to both.
pub fn segments_cross_properly(s1: &Segment, s2: &Segment) -> bool {
    let o1 = orientation(&s1.a, &s1.b, &s2.a);
    let o2 = orientation(&s1.a, &s1.b, &s2.b);
    let o3 = orientation(&s2.a, &s2.b, &s1.a);
    let o4 = orientation(&s2.a, &s2.b, &s1.b);
    use Orientation::*;
    o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear && o1 != o2 && o3 != o4
}

/// Ray with a nonzero direction vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ray {
    pub origin: Point,
    pub dir: Point,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("ray direction must be nonzero")]
    ZeroDirection,
    #[error("cone must open counter-clockwise by strictly less than a half turn")]
    InvalidCone,
}

impl Ray {
    pub fn new(origin: Point, dir: Point) -> Result<Self, GeomError> {
        if dir.is_zero() {
            return Err(GeomError::ZeroDirection);
        }
        Ok(Ray { origin, dir })
    }

    pub fn through(origin: &Point, p: &Point) -> Result<Self, GeomError> {
        Ray::new(origin.clone(), p.sub(origin))
    }
}

/// First hit of a ray with a closed segment: the point and the exact ray
/// parameter `t >= 0` (in units of the direction vector).
pub fn ray_segment_hit(r: &Ray, s: &Segment) -> Option<(Point, Coord)> {
    let d = &r.dir;
    let e = s.b.sub(&s.a);
    let w = s.a.sub(&r.origin);
    let denom = cross(d, &e);
    if denom.is_zero() {
        // Parallel. Only a collinear overlap can hit; take the nearest
        // segment point at t >= 0.
        if !cross(&w, d).is_zero() {
            return None;
        }
        let dd = dot(d, d);
        let ta = &dot(&w, d) / &dd;
        let tb = &dot(&s.b.sub(&r.origin), d) / &dd;
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        if hi.signum() < 0 {
            return None;
        }
        let t = if lo.signum() < 0 { Coord::zero() } else { lo };
        let p = r.origin.add(&d.scale(&t));
        return Some((p, t));
    }
    let t = &cross(&w, &e) / &denom;
    let u = &cross(&w, d) / &denom;
    if t.signum() < 0 || u.signum() < 0 || u > Coord::from_int(1) {
        return None;
    }
    let p = r.origin.add(&d.scale(&t));
    Some((p, t))
}

/// Intersection of the supporting line of ray `r` with the supporting line
/// of segment `s`, when not parallel.
pub fn ray_line_point(origin: &Point, dir: &Point, a: &Point, b: &Point) -> Option<Point> {
    let e = b.sub(a);
    let denom = cross(dir, &e);
    if denom.is_zero() {
        return None;
    }
    let t = &cross(&a.sub(origin), &e) / &denom;
    Some(origin.add(&dir.scale(&t)))
}

/// Apex plus two bounding rays, opening counter-clockwise from `left` to
/// `right` by an angle strictly inside `(0, π)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cone {
    pub apex: Point,
    pub left: Point,
    pub right: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Include,
    Exclude,
}

impl Cone {
    /// `left` and `right` are direction vectors.
    pub fn new(apex: Point, left: Point, right: Point) -> Result<Self, GeomError> {
        if left.is_zero() || right.is_zero() {
            return Err(GeomError::ZeroDirection);
        }
        if cross_sign(&left, &right) != Ordering::Greater {
            return Err(GeomError::InvalidCone);
        }
        Ok(Cone { apex, left, right })
    }

    pub fn from_points(apex: Point, l: &Point, r: &Point) -> Result<Self, GeomError> {
        let left = l.sub(&apex);
        let right = r.sub(&apex);
        Cone::new(apex, left, right)
    }

    pub fn left_ray(&self) -> Ray {
        Ray { origin: self.apex.clone(), dir: self.left.clone() }
    }

    pub fn right_ray(&self) -> Ray {
        Ray { origin: self.apex.clone(), dir: self.right.clone() }
    }

    /// Direction test (the direction need not be normalised).
    pub fn contains_dir(&self, d: &Point, boundary: Boundary) -> bool {
        dir_in_cone(&self.left, &self.right, d, boundary)
    }

    pub fn contains(&self, p: &Point, boundary: Boundary) -> bool {
        assert!(p != &self.apex, "cone_contains: point equals apex");
        self.contains_dir(&p.sub(&self.apex), boundary)
    }
}

/// Direction `d` lies angularly between `l` and `r` (which span less than π).
pub fn dir_in_cone(l: &Point, r: &Point, d: &Point, boundary: Boundary) -> bool {
    let a = cross_sign(l, d);
    let b = cross_sign(d, r);
    match boundary {
        Boundary::Exclude => a == Ordering::Greater && b == Ordering::Greater,
        Boundary::Include => {
            let on_l = a == Ordering::Equal && dot_sign(l, d) == Ordering::Greater;
            let on_r = b == Ordering::Equal && dot_sign(r, d) == Ordering::Greater;
            (a == Ordering::Greater && b == Ordering::Greater) || on_l || on_r
        }
    }
}

pub fn cone_contains(c: &Cone, p: &Point, boundary: Boundary) -> bool {
    c.contains(p, boundary)
}

/// Same direction (parallel, not opposite).
pub fn same_dir(a: &Point, b: &Point) -> bool {
    cross_sign(a, b) == Ordering::Equal && dot_sign(a, b) == Ordering::Greater
}

/// Exact monotone key for the counter-clockwise angle of a direction from
/// the positive x-axis: a quadrant index plus a rational in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PseudoAngle {
    quadrant: u8,
    frac: BigRational,
}

impl PseudoAngle {
    pub fn of_dir(d: &Point) -> Self {
        assert!(!d.is_zero(), "pseudo-angle of zero vector");
        let (x, y) = (d.x.as_big(), d.y.as_big());
        let zero = BigRational::zero();
        let (quadrant, num, den) = if x > &zero && y >= &zero {
            (0, y.clone(), x + y)
        } else if x <= &zero && y > &zero {
            (1, -x, y - x)
        } else if x < &zero && y <= &zero {
            (2, -y, -x - y)
        } else {
            (3, x.clone(), x - y)
        };
        PseudoAngle { quadrant, frac: num / den }
    }

    /// Angle of `d` measured counter-clockwise from the direction `base`.
    pub fn relative(base: &Point, d: &Point) -> Self {
        let rotated = Point { x: dot(base, d), y: cross(base, d) };
        PseudoAngle::of_dir(&rotated)
    }

    pub fn quadrant(&self) -> u8 {
        self.quadrant
    }
}

pub fn pseudo_angle(origin: &Point, p: &Point) -> PseudoAngle {
    assert!(origin != p, "pseudo_angle: point equals origin");
    PseudoAngle::of_dir(&p.sub(origin))
}

/// Counter-clockwise angular comparison of two directions around the
/// positive x-axis.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    fn half(d: &Point) -> u8 {
        if d.y.signum() > 0 || (d.y.is_zero() && d.x.signum() > 0) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| cross_sign(b, a))
}

/// Strict point-in-triangle test (interior only).
pub fn in_open_triangle(a: &Point, b: &Point, c: &Point, p: &Point) -> bool {
    let o = orientation(a, b, c);
    if o == Orientation::Collinear {
        return false;
    }
    orientation(a, b, p) == o && orientation(b, c, p) == o && orientation(c, a, p) == o
}

/// The open segment `pq` meets the open triangle `abc`.
pub fn open_segment_meets_open_triangle(p: &Point, q: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    if in_open_triangle(a, b, c, p) || in_open_triangle(a, b, c, q) {
        return true;
    }
    let s = Segment::new(p.clone(), q.clone());
    let edges = [(a, b), (b, c), (c, a)];
    if edges.iter().any(|(u, v)| segments_cross_properly(&s, &Segment::new((*u).clone(), (*v).clone()))) {
        return true;
    }
    // Passing through a corner or along an edge: check the midpoint of each
    // sub-segment cut at the triangle's corners lying on pq.
    let mut cuts: Vec<Point> = vec![p.clone(), q.clone()];
    for v in [a, b, c] {
        if strictly_inside_segment(p, q, v) {
            cuts.push(v.clone());
        }
    }
    for (u, v) in edges {
        let e = Segment::new(u.clone(), v.clone());
        if let Some(x) = segment_intersection_point(&s, &e) {
            cuts.push(x);
        }
    }
    let d = q.sub(p);
    cuts.sort_by_key(|u| dot(&u.sub(p), &d));
    cuts.dedup();
    let half = Coord::ratio(1, 2);
    cuts.windows(2).any(|w| {
        let m = w[0].add(&w[1]).scale(&half);
        in_open_triangle(a, b, c, &m)
    })
}

/// Intersection point of two non-parallel segments, when they meet.
pub fn segment_intersection_point(s1: &Segment, s2: &Segment) -> Option<Point> {
    let d = s1.b.sub(&s1.a);
    let e = s2.b.sub(&s2.a);
    let denom = cross(&d, &e);
    if denom.is_zero() {
        return None;
    }
    let w = s2.a.sub(&s1.a);
    let t = &cross(&w, &e) / &denom;
    let u = &cross(&w, &d) / &denom;
    let one = Coord::from_int(1);
    if t.signum() < 0 || t > one || u.signum() < 0 || u > one {
        return None;
    }
    Some(s1.a.add(&d.scale(&t)))
}

/// Crossing-number point-in-ring test for points off the boundary. Works for
/// weakly simple rings (a vertex may repeat).
pub fn point_in_ring(ring: &[Point], p: &Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        let a_above = a.y > p.y;
        let b_above = b.y > p.y;
        if a_above != b_above {
            // x-coordinate of the crossing compared with p.x, exactly.
            let o = orientation(a, b, p);
            let upward = b.y > a.y;
            if (upward && o == Orientation::Left) || (!upward && o == Orientation::Right) {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn point_on_ring(ring: &[Point], p: &Point) -> bool {
    let n = ring.len();
    (0..n).any(|i| on_segment(&ring[i], &ring[(i + 1) % n], p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)), Orientation::Left);
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(2, 0)), Orientation::Collinear);
        assert_eq!(orientation(&p(0, 0), &p(0, 1), &p(1, 0)), Orientation::Right);
    }

    #[test]
    fn orientation_rational_path_agrees() {
        let a = Point::new(Coord::ratio(1, 3), Coord::ratio(2, 7));
        let b = Point::new(Coord::ratio(5, 3), Coord::ratio(2, 7));
        let c = Point::new(Coord::ratio(1, 1), Coord::ratio(-1, 9));
        assert_eq!(orientation(&a, &b, &c), Orientation::Right);
    }

    #[test]
    fn segment_examples() {
        let s = |a: (i64, i64), b: (i64, i64)| Segment::new(p(a.0, a.1), p(b.0, b.1));
        assert!(segments_intersect(&s((0, 0), (2, 2)), &s((0, 2), (2, 0)), SegmentMode::Open));
        assert!(!segments_intersect(&s((0, 0), (1, 0)), &s((1, 0), (2, 0)), SegmentMode::Open));
        assert!(segments_intersect(&s((0, 0), (1, 0)), &s((1, 0), (2, 0)), SegmentMode::Closed));
        assert!(segments_intersect(&s((0, 0), (2, 0)), &s((1, 0), (1, 1)), SegmentMode::Open));
    }

    #[test]
    fn cone_examples() {
        let c = Cone::new(p(0, 0), p(1, -1), p(1, 1)).unwrap();
        assert!(c.contains(&p(5, 0), Boundary::Include));
        assert!(!c.contains(&p(0, 5), Boundary::Include));
        assert!(c.contains(&p(3, 3), Boundary::Include));
        assert!(!c.contains(&p(3, 3), Boundary::Exclude));
        assert_eq!(Cone::new(p(0, 0), p(1, 1), p(1, -1)), Err(GeomError::InvalidCone));
        assert_eq!(Cone::new(p(0, 0), p(1, 0), p(-1, 0)), Err(GeomError::InvalidCone));
    }

    #[test]
    fn pseudo_angle_examples() {
        let o = p(0, 0);
        let k0 = pseudo_angle(&o, &p(1, 0));
        for q in [p(0, 1), p(-1, 0), p(0, -1), p(3, -1), p(-2, 5)] {
            assert!(k0 < pseudo_angle(&o, &q));
        }
        assert!(pseudo_angle(&o, &p(0, 1)) < pseudo_angle(&o, &p(-1, 0)));
        assert!(pseudo_angle(&o, &p(-1, 0)) < pseudo_angle(&o, &p(0, -1)));
        assert_eq!(pseudo_angle(&o, &p(2, 0)), pseudo_angle(&o, &p(7, 0)));
    }

    #[test]
    fn ray_hits() {
        let r = Ray::new(p(0, 0), p(1, 0)).unwrap();
        let (hit, t) = ray_segment_hit(&r, &Segment::new(p(5, -1), p(5, 1))).unwrap();
        assert_eq!(hit, p(5, 0));
        assert_eq!(t, Coord::from_int(5));
        assert!(ray_segment_hit(&r, &Segment::new(p(-5, -1), p(-5, 1))).is_none());
        let r = Ray::new(p(0, 0), p(1, 1)).unwrap();
        let (hit, t) = ray_segment_hit(&r, &Segment::new(p(0, 2), p(2, 0))).unwrap();
        assert_eq!(hit, p(1, 1));
        assert_eq!(t, Coord::from_int(1));
        assert_eq!(Ray::new(p(0, 0), p(0, 0)), Err(GeomError::ZeroDirection));
    }

    #[test]
    fn coord_parsing_canonicalises() {
        assert_eq!("3.5".parse::<Coord>().unwrap(), "7/2".parse::<Coord>().unwrap());
        assert_eq!("-0.25".parse::<Coord>().unwrap(), Coord::ratio(-1, 4));
        assert_eq!("14/4".parse::<Coord>().unwrap().to_string(), "7/2");
        assert!("1/0".parse::<Coord>().is_err());
        assert!("abc".parse::<Coord>().is_err());
        assert!("".parse::<Coord>().is_err());
    }

    #[test]
    fn triangle_meeting() {
        let (a, b, c) = (p(0, 0), p(4, 0), p(0, 4));
        assert!(open_segment_meets_open_triangle(&p(-1, 1), &p(5, 1), &a, &b, &c));
        // Along an edge: no interior contact.
        assert!(!open_segment_meets_open_triangle(&p(-1, 0), &p(5, 0), &a, &b, &c));
        // Through a corner into the interior.
        assert!(open_segment_meets_open_triangle(&p(-1, -1), &p(3, 3), &a, &b, &c));
        // Touching a corner only.
        assert!(!open_segment_meets_open_triangle(&p(-1, 1), &p(1, -1), &a, &b, &c));
    }

    #[test]
    fn ring_membership() {
        let sq = vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)];
        assert!(point_in_ring(&sq, &p(2, 2)));
        assert!(!point_in_ring(&sq, &p(5, 2)));
        assert!(point_on_ring(&sq, &p(4, 1)));
    }
}
