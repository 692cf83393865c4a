//! Exact rational geometric primitives: predicates, convex hulls, convex
//! clipping, areas and sample-based Hausdorff distance.
//!
//! Everything that feeds a sign decision elsewhere in the crate goes through
//! this module and is computed over arbitrary-precision rationals. There are
//! no epsilon comparisons on this path.

use crate::GeoError;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational scalar used throughout the polygon pipeline.
pub type Rat = BigRational;

/// Convert an `f64` to the exactly equal rational. Panics on non-finite input.
pub fn rat_from_f64(v: f64) -> Rat {
    Rat::from_f64(v).expect("finite float")
}

pub fn rat_to_f64(v: &Rat) -> f64 {
    v.to_f64().expect("rational fits in f64 range")
}

/// A point of the plane with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat2 {
    pub x: Rat,
    pub y: Rat,
}

impl fmt::Debug for Rat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Rat2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        Rat2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Rat2::new(Rat::from_i64(x).unwrap(), Rat::from_i64(y).unwrap())
    }

    /// Exact conversion; every finite `f64` is a rational.
    pub fn from_f64s(x: f64, y: f64) -> Self {
        Rat2::new(rat_from_f64(x), rat_from_f64(y))
    }

    pub fn to_p2(&self) -> P2 {
        P2::new(rat_to_f64(&self.x), rat_to_f64(&self.y))
    }

    pub fn dot(&self, other: &Rat2) -> Rat {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Rat2) -> Rat {
        &self.x * &other.y - &self.y * &other.x
    }

    /// Counterclockwise quarter turn.
    pub fn rot90(&self) -> Rat2 {
        Rat2::new(-self.y.clone(), self.x.clone())
    }

    pub fn scale(&self, s: &Rat) -> Rat2 {
        Rat2::new(&self.x * s, &self.y * s)
    }

    pub fn midpoint(&self, other: &Rat2) -> Rat2 {
        let half = Rat::new(1.into(), 2.into());
        Rat2::new((&self.x + &other.x) * &half, (&self.y + &other.y) * &half)
    }

    pub fn norm2(&self) -> Rat {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl Add for &Rat2 {
    type Output = Rat2;
    fn add(self, rhs: &Rat2) -> Rat2 {
        Rat2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &Rat2 {
    type Output = Rat2;
    fn sub(self, rhs: &Rat2) -> Rat2 {
        Rat2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &Rat2 {
    type Output = Rat2;
    fn neg(self) -> Rat2 {
        Rat2::new(-self.x.clone(), -self.y.clone())
    }
}

impl Mul<&Rat> for &Rat2 {
    type Output = Rat2;
    fn mul(self, rhs: &Rat) -> Rat2 {
        self.scale(rhs)
    }
}

/// A segment with exact endpoints. `a == b` is allowed and flags a
/// degenerate (singleton) segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Rat2,
    pub b: Rat2,
}

impl Segment {
    pub fn new(a: Rat2, b: Rat2) -> Self {
        Segment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn midpoint(&self) -> Rat2 {
        self.a.midpoint(&self.b)
    }

    /// Exact containment of a point in the closed segment.
    pub fn contains(&self, p: &Rat2) -> bool {
        let d = &self.b - &self.a;
        let w = p - &self.a;
        if !d.cross(&w).is_zero() {
            return false;
        }
        let t = d.dot(&w);
        !t.is_negative() && t <= d.norm2()
    }

    /// Exact containment in the relative interior.
    pub fn contains_strict(&self, p: &Rat2) -> bool {
        let d = &self.b - &self.a;
        let w = p - &self.a;
        if !d.cross(&w).is_zero() {
            return false;
        }
        let t = d.dot(&w);
        t.is_positive() && t < d.norm2()
    }
}

/// Sign of the cross product `(b - a) x (c - a)`, computed exactly.
/// `+1` is a left (counterclockwise) turn.
pub fn orient(a: &Rat2, b: &Rat2, c: &Rat2) -> i32 {
    let v = &(b - a).cross(&(c - a));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Strictly convex counterclockwise vertex cycle. Collinear boundary points
/// are never stored, so the vertices are exactly the exposed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPolygon {
    verts: Vec<Rat2>,
}

impl HullPolygon {
    /// Validates strict convexity and counterclockwise orientation.
    pub fn new(verts: Vec<Rat2>) -> Result<Self, GeoError> {
        if verts.len() < 3 {
            return Err(GeoError::InvalidBody(
                "hull polygon needs at least 3 vertices".into(),
            ));
        }
        let n = verts.len();
        for i in 0..n {
            if orient(&verts[i], &verts[(i + 1) % n], &verts[(i + 2) % n]) != 1 {
                return Err(GeoError::InvalidBody(
                    "vertex cycle is not strictly convex counterclockwise".into(),
                ));
            }
        }
        Ok(HullPolygon { verts })
    }

    pub fn vertices(&self) -> &[Rat2] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Directed edges in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (&Rat2, &Rat2)> {
        let n = self.verts.len();
        (0..n).map(move |i| (&self.verts[i], &self.verts[(i + 1) % n]))
    }

    /// Strict interior test.
    pub fn contains_strict(&self, p: &Rat2) -> bool {
        self.edges().all(|(a, b)| orient(a, b, p) == 1)
    }

    /// Closed (boundary included) containment test.
    pub fn contains(&self, p: &Rat2) -> bool {
        self.edges().all(|(a, b)| orient(a, b, p) >= 0)
    }

    pub fn translate(&self, t: &Rat2) -> HullPolygon {
        HullPolygon {
            verts: self.verts.iter().map(|v| v + t).collect(),
        }
    }

    /// Minimum squared distance from `p` to the boundary or interior
    /// (zero if contained).
    pub fn dist2(&self, p: &Rat2) -> Rat {
        if self.contains(p) {
            return Rat::zero();
        }
        self.edges()
            .map(|(a, b)| point_segment_dist2(p, a, b))
            .min()
            .unwrap()
    }
}

/// Convex hull output; degenerate hulls are first-class values since a
/// centrally symmetric body's hedgehog collapses to a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hull {
    Point(Rat2),
    Segment(Segment),
    Polygon(HullPolygon),
}

impl Hull {
    pub fn vertex_count(&self) -> usize {
        match self {
            Hull::Point(_) => 1,
            Hull::Segment(_) => 2,
            Hull::Polygon(p) => p.len(),
        }
    }

    pub fn as_polygon(&self) -> Option<&HullPolygon> {
        match self {
            Hull::Polygon(p) => Some(p),
            _ => None,
        }
    }

    /// Exact shoelace area; zero for degenerate hulls.
    pub fn area(&self) -> Rat {
        match self {
            Hull::Polygon(p) => area(p),
            _ => Rat::zero(),
        }
    }

    /// Closed containment.
    pub fn contains(&self, p: &Rat2) -> bool {
        match self {
            Hull::Point(q) => q == p,
            Hull::Segment(s) => s.contains(p),
            Hull::Polygon(poly) => poly.contains(p),
        }
    }

    pub fn points(&self) -> Vec<Rat2> {
        match self {
            Hull::Point(p) => vec![p.clone()],
            Hull::Segment(s) => vec![s.a.clone(), s.b.clone()],
            Hull::Polygon(p) => p.vertices().to_vec(),
        }
    }
}

fn cmp_rat2(a: &Rat2, b: &Rat2) -> Ordering {
    a.x.cmp(&b.x).then_with(|| a.y.cmp(&b.y))
}

/// Convex hull of a point set: the minimal strictly convex counterclockwise
/// cycle. Collinear boundary points are dropped, so the output vertices are
/// the exposed points of the hull. Degenerate inputs yield flagged point or
/// segment hulls.
pub fn convex_hull(points: &[Rat2]) -> Result<Hull, GeoError> {
    if points.is_empty() {
        return Err(GeoError::EmptyInput);
    }
    let mut pts: Vec<Rat2> = points.to_vec();
    pts.sort_by(cmp_rat2);
    pts.dedup();
    if pts.len() == 1 {
        return Ok(Hull::Point(pts.pop().unwrap()));
    }

    // Andrew's monotone chain with strict turns.
    let chain = |iter: &mut dyn Iterator<Item = &Rat2>| -> Vec<Rat2> {
        let mut out: Vec<Rat2> = Vec::new();
        for p in iter {
            while out.len() >= 2 && orient(&out[out.len() - 2], &out[out.len() - 1], p) <= 0 {
                out.pop();
            }
            out.push(p.clone());
        }
        out
    };
    let lower = chain(&mut pts.iter());
    let mut upper = chain(&mut pts.iter().rev());

    let mut verts = lower;
    verts.pop();
    upper.pop();
    verts.extend(upper);

    if verts.len() < 3 {
        // All points collinear: the hull is the extreme segment.
        let a = pts.first().unwrap().clone();
        let b = pts.last().unwrap().clone();
        return Ok(Hull::Segment(Segment::new(a, b)));
    }
    Ok(Hull::Polygon(HullPolygon::new(verts)?))
}

/// Exact shoelace area of a counterclockwise convex polygon.
pub fn area(p: &HullPolygon) -> Rat {
    let mut acc = Rat::zero();
    for (a, b) in p.edges() {
        acc += a.cross(b);
    }
    acc / Rat::from_i64(2).unwrap()
}

/// Intersection of the lines through `(a1, a2)` and `(b1, b2)`.
/// `None` if the lines are parallel (including coincident).
pub fn line_intersection(a1: &Rat2, a2: &Rat2, b1: &Rat2, b2: &Rat2) -> Option<Rat2> {
    let da = a2 - a1;
    let db = b2 - b1;
    let denom = da.cross(&db);
    if denom.is_zero() {
        return None;
    }
    let t = (b1 - a1).cross(&db) / denom;
    Some(a1 + &da.scale(&t))
}

/// Clip a convex cycle against the closed half-plane to the left of the
/// directed line `(a, b)`.
pub fn clip_halfplane(poly: &[Rat2], a: &Rat2, b: &Rat2) -> Vec<Rat2> {
    let mut next: Vec<Rat2> = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for i in 0..n {
        let cur = &poly[i];
        let nxt = &poly[(i + 1) % n];
        let side_cur = orient(a, b, cur);
        let side_nxt = orient(a, b, nxt);
        if side_cur >= 0 {
            next.push(cur.clone());
        }
        if (side_cur > 0 && side_nxt < 0) || (side_cur < 0 && side_nxt > 0) {
            let x = line_intersection(cur, nxt, a, b).expect("crossing edges are not parallel");
            next.push(x);
        }
    }
    next
}

/// Exact intersection of two convex polygons via half-plane clipping.
/// The result may be a lower-dimensional hull; `None` means empty.
pub fn clip_convex(p: &HullPolygon, q: &HullPolygon) -> Result<Option<Hull>, GeoError> {
    let mut current: Vec<Rat2> = p.vertices().to_vec();
    for (a, b) in q.edges() {
        if current.is_empty() {
            break;
        }
        current = clip_halfplane(&current, a, b);
    }
    if current.is_empty() {
        return Ok(None);
    }
    // Re-hull to drop duplicates and collinear points introduced by clipping.
    Ok(Some(convex_hull(&current)?))
}

fn point_segment_dist2(p: &Rat2, a: &Rat2, b: &Rat2) -> Rat {
    let d = b - a;
    let w = p - a;
    let dd = d.norm2();
    if dd.is_zero() {
        return w.norm2();
    }
    let t = d.dot(&w);
    if t.is_negative() {
        w.norm2()
    } else if t > dd {
        (p - b).norm2()
    } else {
        let t = t / dd;
        let proj = a + &d.scale(&t);
        (p - &proj).norm2()
    }
}

/// Squared distance from a point to a closed segment, exactly.
pub fn dist2_point_segment(p: &Rat2, s: &Segment) -> Rat {
    point_segment_dist2(p, &s.a, &s.b)
}

/// Floating point sample point, used wherever geometry is sampled rather
/// than decided.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct P2 {
    pub x: f64,
    pub y: f64,
}

impl P2 {
    pub fn new(x: f64, y: f64) -> Self {
        P2 { x, y }
    }

    pub fn dist(&self, other: &P2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Hausdorff distance between two finite point samples. This approximates
/// the Hausdorff metric of the sampled compact sets; the error is bounded by
/// the sampling density of the inputs.
pub fn hausdorff_distance(a: &[P2], b: &[P2]) -> Result<f64, GeoError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeoError::EmptyInput);
    }
    let directed = |from: &[P2], to: &[P2]| -> f64 {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| p.dist(q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Rat2 {
        Rat2::from_ints(x, y)
    }

    #[test]
    fn orient_canonical() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(2, 0)), 0);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 0)), -1);
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let h = convex_hull(&[p(0, 0), p(4, 0), p(0, 4), p(1, 1)]).unwrap();
        assert_eq!(h.vertex_count(), 3);
        let h = convex_hull(&[p(0, 0), p(2, 0), p(4, 0), p(0, 4)]).unwrap();
        assert_eq!(h.vertex_count(), 3);
        let verts = h.as_polygon().unwrap().vertices();
        assert!(verts.contains(&p(0, 0)) && verts.contains(&p(4, 0)) && verts.contains(&p(0, 4)));
    }

    #[test]
    fn hull_degenerate() {
        assert_eq!(convex_hull(&[p(2, 3)]).unwrap(), Hull::Point(p(2, 3)));
        let h = convex_hull(&[p(0, 0), p(1, 1), p(3, 3)]).unwrap();
        assert_eq!(h, Hull::Segment(Segment::new(p(0, 0), p(3, 3))));
        assert!(convex_hull(&[]).is_err());
    }

    #[test]
    fn triangle_area() {
        let h = convex_hull(&[p(0, 0), p(4, 0), p(0, 4)]).unwrap();
        assert_eq!(h.area(), Rat::from_i64(8).unwrap());
        let sq = convex_hull(&[p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap();
        assert_eq!(sq.area(), Rat::from_i64(1).unwrap());
        let seg = convex_hull(&[p(0, 0), p(2, 2)]).unwrap();
        assert_eq!(seg.area(), Rat::zero());
    }

    #[test]
    fn clip_squares() {
        let a = convex_hull(&[p(0, 0), p(2, 0), p(2, 2), p(0, 2)]).unwrap();
        let b = convex_hull(&[p(1, 1), p(3, 1), p(3, 3), p(1, 3)]).unwrap();
        let i = clip_convex(a.as_polygon().unwrap(), b.as_polygon().unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(i.area(), Rat::from_i64(1).unwrap());
        // Idempotence.
        let a_poly = a.as_polygon().unwrap();
        let same = clip_convex(a_poly, a_poly).unwrap().unwrap();
        assert_eq!(same.area(), a.area());
    }

    #[test]
    fn clip_disjoint() {
        let a = convex_hull(&[p(0, 0), p(1, 0), p(0, 1)]).unwrap();
        let b = convex_hull(&[p(10, 10), p(11, 10), p(10, 11)]).unwrap();
        let r = clip_convex(a.as_polygon().unwrap(), b.as_polygon().unwrap()).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn hausdorff_basics() {
        let a = vec![P2::new(0.0, 0.0)];
        let b = vec![P2::new(3.0, 4.0)];
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 5.0);
        assert!(hausdorff_distance(&a, &[]).is_err());
    }

    #[test]
    fn hausdorff_circle_vs_center() {
        let n = 512;
        let circle: Vec<P2> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                P2::new(t.cos(), t.sin())
            })
            .collect();
        let center = vec![P2::new(0.0, 0.0)];
        let d = hausdorff_distance(&circle, &center).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }
}
