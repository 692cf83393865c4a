//! Convex body representations and their support machinery: exact polygons,
//! arc-gons, Fourier support bodies, the edge-normal fan, long-edge
//! detection, sandwich polygons and arc smoothing.

use crate::kernel::{
    clip_halfplane, convex_hull, orient, rat_from_f64, rat_to_f64, Hull, HullPolygon, P2, Rat,
    Rat2, Segment,
};
use crate::GeoError;
use num_traits::{FromPrimitive, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// A convex polygon: counterclockwise, strictly convex, no duplicate
/// vertices, exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolygon {
    verts: Vec<Rat2>,
}

/// Face of a polygon support query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyFace {
    /// The support set is a single vertex (by index).
    Vertex(usize),
    /// The support set is the edge from vertex `i` to vertex `i + 1`.
    Edge(usize),
}

impl ConvexPolygon {
    pub fn new(verts: Vec<Rat2>) -> Result<Self, GeoError> {
        if verts.len() < 3 {
            return Err(GeoError::InvalidBody("polygon needs >= 3 vertices".into()));
        }
        let n = verts.len();
        for i in 0..n {
            if orient(&verts[i], &verts[(i + 1) % n], &verts[(i + 2) % n]) != 1 {
                return Err(GeoError::InvalidBody(
                    "polygon is not strictly convex counterclockwise".into(),
                ));
            }
        }
        Ok(ConvexPolygon { verts })
    }

    /// Convex hull of an arbitrary point set; fails if the hull degenerates.
    pub fn from_points(points: &[Rat2]) -> Result<Self, GeoError> {
        match convex_hull(points)? {
            Hull::Polygon(h) => Ok(ConvexPolygon {
                verts: h.vertices().to_vec(),
            }),
            _ => Err(GeoError::InvalidBody("point set is degenerate".into())),
        }
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

    pub fn vertex(&self, i: usize) -> &Rat2 {
        &self.verts[i % self.verts.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Segment {
        let n = self.verts.len();
        Segment::new(self.verts[i % n].clone(), self.verts[(i + 1) % n].clone())
    }

    /// Outer normal of edge `i` (unnormalized, exact).
    pub fn outer_normal(&self, i: usize) -> Rat2 {
        let n = self.verts.len();
        let d = &self.verts[(i + 1) % n] - &self.verts[i % n];
        Rat2::new(d.y.clone(), -d.x)
    }

    pub fn to_hull(&self) -> HullPolygon {
        HullPolygon::new(self.verts.clone()).expect("convex polygon is a valid hull")
    }

    pub fn translate(&self, t: &Rat2) -> ConvexPolygon {
        ConvexPolygon {
            verts: self.verts.iter().map(|v| v + t).collect(),
        }
    }

    /// Point reflection through `z`: the polygon `2z - P`. A point
    /// reflection is a half-turn rotation, so the cycle stays
    /// counterclockwise.
    pub fn reflect(&self, z: &Rat2) -> ConvexPolygon {
        let two = Rat::from_i64(2).unwrap();
        let verts: Vec<Rat2> = self
            .verts
            .iter()
            .map(|v| &z.scale(&two) - v)
            .collect();
        ConvexPolygon { verts }
    }

    /// Exact support value and face in direction `u` (any nonzero exact
    /// direction; no normalization needed for face decisions).
    pub fn support(&self, u: &Rat2) -> (Rat, PolyFace) {
        assert!(!u.is_zero(), "support direction must be nonzero");
        let n = self.verts.len();
        let mut best = 0usize;
        let mut best_val = self.verts[0].dot(u);
        for i in 1..n {
            let v = self.verts[i].dot(u);
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        // A convex polygon attains its maximum on a vertex or a single edge.
        let next_val = self.verts[(best + 1) % n].dot(u);
        if next_val == best_val {
            return (best_val, PolyFace::Edge(best));
        }
        let prev = (best + n - 1) % n;
        if self.verts[prev].dot(u) == best_val {
            return (best_val, PolyFace::Edge(prev));
        }
        (best_val, PolyFace::Vertex(best))
    }

    /// Support vertex index; error if the face is an edge.
    pub fn support_vertex(&self, u: &Rat2) -> Result<usize, GeoError> {
        match self.support(u).1 {
            PolyFace::Vertex(i) => Ok(i),
            PolyFace::Edge(_) => Err(GeoError::InternalInvariant(
                "expected singleton support set".into(),
            )),
        }
    }

    pub fn contains_strict(&self, p: &Rat2) -> bool {
        let n = self.verts.len();
        (0..n).all(|i| orient(&self.verts[i], &self.verts[(i + 1) % n], p) == 1)
    }

    pub fn contains(&self, p: &Rat2) -> bool {
        let n = self.verts.len();
        (0..n).all(|i| orient(&self.verts[i], &self.verts[(i + 1) % n], p) >= 0)
    }

    /// True iff some pair of edges is parallel (exact cross-product test).
    pub fn has_parallel_edges(&self) -> bool {
        let n = self.verts.len();
        let normals: Vec<Rat2> = (0..n).map(|i| self.outer_normal(i)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if normals[i].cross(&normals[j]).is_zero() {
                    return true;
                }
            }
        }
        false
    }

    /// Open normal cone at vertex `i`: the pair of outer normals of the
    /// incoming and outgoing edges, spanning counterclockwise.
    pub fn normal_cone(&self, i: usize) -> (Rat2, Rat2) {
        let n = self.verts.len();
        (self.outer_normal((i + n - 1) % n), self.outer_normal(i))
    }

    /// Exact test whether vertices `i` and `j` are opposite: some direction
    /// exposes `i` as a singleton face while its negation exposes `j`.
    pub fn opposite_vertices(&self, i: usize, j: usize) -> bool {
        self.opposite_witness(i, j).is_some()
    }

    /// A direction witnessing the opposition, if one exists: it lies strictly
    /// inside the normal cone of `i` and its negation strictly inside the
    /// normal cone of `j`.
    pub fn opposite_witness(&self, i: usize, j: usize) -> Option<Rat2> {
        if i == j {
            return None;
        }
        let (a1, a2) = self.normal_cone(i);
        let (b1, b2) = self.normal_cone(j);
        open_arc_intersection_dir(&a1, &a2, &(-&b1), &(-&b2)).map(|w| {
            debug_assert!(in_open_arc(&a1, &a2, &w));
            w
        })
    }

    /// A long edge is an edge whose endpoints are opposite vertices (the
    /// edge is itself an affine diameter exposed at both ends). Returns the
    /// first such edge with a witness direction.
    pub fn long_edge(&self) -> Option<(usize, Rat2)> {
        let n = self.verts.len();
        (0..n).find_map(|i| {
            self.opposite_witness(i, (i + 1) % n)
                .map(|w| (i, w))
        })
    }

    pub fn has_long_edge(&self) -> bool {
        self.long_edge().is_some()
    }

    /// Exact central symmetry test; returns the center when symmetric.
    pub fn symmetry_center(&self) -> Option<Rat2> {
        let n = self.verts.len();
        if n % 2 != 0 {
            return None;
        }
        let h = n / 2;
        let c = self.verts[0].midpoint(&self.verts[h]);
        let two = Rat::from_i64(2).unwrap();
        for i in 0..h {
            let mirror = &c.scale(&two) - &self.verts[i];
            if mirror != self.verts[i + h] {
                return None;
            }
        }
        Some(c)
    }

    pub fn centroid(&self) -> Rat2 {
        let n = Rat::from_usize(self.verts.len()).unwrap();
        let mut acc = Rat2::new(Rat::zero(), Rat::zero());
        for v in &self.verts {
            acc = &acc + v;
        }
        acc.scale(&(Rat::one() / n))
    }

    /// Squared distance from a point to the polygon, exactly (zero inside).
    pub fn dist2(&self, p: &Rat2) -> Rat {
        self.to_hull().dist2(p)
    }

    pub fn diameter_f64(&self) -> f64 {
        let pts: Vec<P2> = self.verts.iter().map(|v| v.to_p2()).collect();
        let mut d: f64 = 0.0;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                d = d.max(pts[i].dist(&pts[j]));
            }
        }
        d
    }

    /// Distance from a point to the polygon boundary, in floating point.
    /// Unlike sample-based distances this has no sampling floor.
    pub fn boundary_dist_f64(&self, p: P2) -> f64 {
        let n = self.verts.len();
        (0..n)
            .map(|i| {
                let a = self.verts[i].to_p2();
                let b = self.verts[(i + 1) % n].to_p2();
                let (dx, dy) = (b.x - a.x, b.y - a.y);
                let len2 = dx * dx + dy * dy;
                let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
                p.dist(&P2::new(a.x + t * dx, a.y + t * dy))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Boundary samples for Hausdorff measurements, `per_edge` points per edge.
    pub fn boundary_samples(&self, per_edge: usize) -> Vec<P2> {
        let mut out = Vec::new();
        let n = self.verts.len();
        for i in 0..n {
            let a = self.verts[i].to_p2();
            let b = self.verts[(i + 1) % n].to_p2();
            for k in 0..per_edge {
                let t = k as f64 / per_edge as f64;
                out.push(P2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
            }
        }
        out
    }
}

/// `d` strictly inside the open counterclockwise arc from `a` to `b`
/// (arc span assumed < pi).
pub fn in_open_arc(a: &Rat2, b: &Rat2, d: &Rat2) -> bool {
    a.cross(d).is_positive() && d.cross(b).is_positive()
}

fn in_closed_arc(a: &Rat2, b: &Rat2, d: &Rat2) -> bool {
    // Closed variant, still for arcs of span < pi: allow alignment with an
    // endpoint (same direction, not opposite).
    let on_a = a.cross(d).is_zero() && a.dot(d).is_positive();
    let on_b = b.cross(d).is_zero() && b.dot(d).is_positive();
    on_a || on_b || in_open_arc(a, b, d)
}

/// A direction strictly inside both open arcs `(a1, a2)` and `(b1, b2)`
/// (each of span < pi), or `None` when the intersection is empty.
fn open_arc_intersection_dir(a1: &Rat2, a2: &Rat2, b1: &Rat2, b2: &Rat2) -> Option<Rat2> {
    // The intersection, when nonempty, is an open arc whose endpoints are
    // the later start and the earlier end of the two arcs.
    let start = if in_closed_arc(b1, b2, a1) { a1 } else { b1 };
    let end = if in_closed_arc(b1, b2, a2) { a2 } else { b2 };
    let candidates = [
        start + end,
        a1 + a2,
        b1 + b2,
        a1 + b2,
        b1 + a2,
    ];
    candidates
        .into_iter()
        .find(|w| !w.is_zero() && in_open_arc(a1, a2, w) && in_open_arc(b1, b2, w))
}

/// Exact rotation with rational matrix entries, parametrized by the
/// tangent half-angle `t`: angle = 2 atan(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatRotation {
    pub t: Rat,
}

impl RatRotation {
    pub fn identity() -> Self {
        RatRotation { t: Rat::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.t.is_zero()
    }

    pub fn angle(&self) -> f64 {
        2.0 * rat_to_f64(&self.t).atan()
    }

    pub fn apply(&self, p: &Rat2) -> Rat2 {
        if self.t.is_zero() {
            return p.clone();
        }
        let t2 = &self.t * &self.t;
        let den = Rat::one() + &t2;
        let c = (Rat::one() - &t2) / &den;
        let s = (Rat::from_i64(2).unwrap() * &self.t) / den;
        Rat2::new(&(&p.x * &c) - &(&p.y * &s), &(&p.x * &s) + &(&p.y * &c))
    }

    pub fn inverse(&self) -> RatRotation {
        RatRotation { t: -self.t.clone() }
    }
}

/// One entry of the edge-normal fan: a half-turn-reduced edge normal.
#[derive(Clone, Debug)]
pub struct FanEntry {
    /// Reduced normal direction in the rotated frame; first component > 0.
    pub dir: Rat2,
    /// Angle of `dir` in (-pi/2, pi/2), for reporting.
    pub angle: f64,
    /// Index of the polygon edge this normal belongs to.
    pub edge: usize,
    /// Whether `dir` is the outer normal of that edge (in the rotated frame).
    pub outer: bool,
}

/// The cyclic half-turn-reduced normal order of a polygon without parallel
/// edges, together with the exact rotation that was applied to push every
/// normal off the vertical axis.
#[derive(Clone, Debug)]
pub struct EdgeNormalFan {
    pub rotation: RatRotation,
    pub entries: Vec<FanEntry>,
}

impl EdgeNormalFan {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Outer normal of the underlying edge mapped back to the original frame.
    pub fn original_outer_normal(&self, idx: usize) -> Rat2 {
        let e = &self.entries[idx];
        let d = if e.outer { e.dir.clone() } else { -&e.dir };
        self.rotation.inverse().apply(&d)
    }
}

/// Build the edge-normal fan of `poly`.
///
/// If some edge normal is vertical in the rotated frame, a small exact
/// rotation (tangent half-angle k/257) is tried; only finitely many
/// directions are forbidden, so at most `n + 1` candidates are needed.
pub fn edge_normal_fan(poly: &ConvexPolygon) -> Result<EdgeNormalFan, GeoError> {
    if poly.has_parallel_edges() {
        return Err(GeoError::ParallelEdges);
    }
    let n = poly.len();
    let normals: Vec<Rat2> = (0..n).map(|i| poly.outer_normal(i)).collect();

    let rotation = (0..=n)
        .map(|k| RatRotation {
            t: Rat::new(k.into(), 257.into()),
        })
        .find(|r| normals.iter().all(|nm| !r.apply(nm).x.is_zero()))
        .expect("at most n tangent values are forbidden");

    let mut entries: Vec<FanEntry> = normals
        .iter()
        .enumerate()
        .map(|(edge, nm)| {
            let rn = rotation.apply(nm);
            let outer = rn.x.is_positive();
            let dir = if outer { rn } else { -&rn };
            let angle = rat_to_f64(&dir.y).atan2(rat_to_f64(&dir.x));
            FanEntry {
                dir,
                angle,
                edge,
                outer,
            }
        })
        .collect();
    // Sort by angle in (-pi/2, pi/2): both x components positive, so the
    // cross product decides exactly.
    entries.sort_by(|a, b| {
        if a.dir.cross(&b.dir).is_positive() {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    Ok(EdgeNormalFan { rotation, entries })
}

/// A circular arc given by its center, radius and the closed interval of
/// outer normal angles it covers.
#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub center: P2,
    pub radius: f64,
    /// Normal-angle interval start, in radians.
    pub from: f64,
    /// Normal-angle interval end; `from < to`.
    pub to: f64,
}

impl Arc {
    /// Boundary point with outer normal angle `theta`.
    pub fn point(&self, theta: f64) -> P2 {
        P2::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }
}

/// Strictly convex body bounded by circular arcs meeting at corner points.
/// Arc normal intervals are disjoint and cyclically ordered; the normal
/// gap between consecutive arcs belongs to the shared corner point.
#[derive(Clone, Debug, PartialEq)]
pub struct Arcgon {
    arcs: Vec<Arc>,
}

impl Arcgon {
    pub fn new(arcs: Vec<Arc>) -> Result<Self, GeoError> {
        if arcs.len() < 2 {
            return Err(GeoError::InvalidBody("arcgon needs >= 2 arcs".into()));
        }
        let scale: f64 = arcs
            .iter()
            .map(|a| a.center.x.abs().max(a.center.y.abs()).max(a.radius))
            .fold(1.0, f64::max);
        let tol = 1e-9 * scale;
        let k = arcs.len();
        for (idx, a) in arcs.iter().enumerate() {
            if !(a.radius > 0.0) {
                return Err(GeoError::InvalidBody("arc radius must be positive".into()));
            }
            if !(a.from < a.to) {
                return Err(GeoError::InvalidBody("arc interval must be increasing".into()));
            }
            let b = &arcs[(idx + 1) % k];
            let next_from = if idx + 1 == k { b.from + 2.0 * PI } else { b.from };
            if !(a.to <= next_from + 1e-12) {
                return Err(GeoError::InvalidBody(
                    "arc normal intervals must be disjoint and ordered".into(),
                ));
            }
            // Corner continuity: the end point of this arc is the start
            // point of the next.
            let end = a.point(a.to);
            let start = b.point(b.from);
            if end.dist(&start) > tol {
                return Err(GeoError::InvalidBody(format!(
                    "arcs {idx} and {} do not meet (gap {:.3e})",
                    (idx + 1) % k,
                    end.dist(&start)
                )));
            }
        }
        let total = arcs[0].from + 2.0 * PI - arcs[0].from;
        debug_assert!(total > 0.0);
        Ok(Arcgon { arcs })
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Boundary points sampled uniformly along each arc's normal interval.
    /// Uniform sampling of the *global* normal angle would pile almost all
    /// samples onto the corners, since corners own the normal gaps.
    pub fn boundary_samples(&self, per_arc: usize) -> Vec<P2> {
        let per_arc = per_arc.max(2);
        self.arcs
            .iter()
            .flat_map(|a| {
                (0..=per_arc).map(move |i| {
                    let theta = a.from + (a.to - a.from) * i as f64 / per_arc as f64;
                    a.point(theta)
                })
            })
            .collect()
    }

    fn normalize(&self, theta: f64) -> f64 {
        let base = self.arcs[0].from;
        let mut t = (theta - base).rem_euclid(2.0 * PI) + base;
        if t < base {
            t += 2.0 * PI;
        }
        t
    }

    /// (support value, support derivative, support point) at normal angle
    /// `theta`; the covering arc or corner determines the closed form.
    fn eval(&self, theta: f64) -> (f64, f64, P2) {
        let t = self.normalize(theta);
        let u = P2::new(theta.cos(), theta.sin());
        let up = P2::new(-theta.sin(), theta.cos());
        let k = self.arcs.len();
        for (idx, a) in self.arcs.iter().enumerate() {
            if t >= a.from && t <= a.to {
                let h = a.center.x * u.x + a.center.y * u.y + a.radius;
                let hp = a.center.x * up.x + a.center.y * up.y;
                return (h, hp, a.point(theta));
            }
            let b = &self.arcs[(idx + 1) % k];
            let next_from = if idx + 1 == k { b.from + 2.0 * PI } else { b.from };
            if t > a.to && t < next_from {
                let v = a.point(a.to);
                let h = v.x * u.x + v.y * u.y;
                let hp = v.x * up.x + v.y * up.y;
                return (h, hp, v);
            }
        }
        // theta == base wraps onto the first arc.
        let a = &self.arcs[0];
        let h = a.center.x * u.x + a.center.y * u.y + a.radius;
        let hp = a.center.x * up.x + a.center.y * up.y;
        (h, hp, a.point(theta))
    }
}

/// Truncated Fourier series support function
/// `h(phi) = a0 + sum_j (a_j cos j phi + b_j sin j phi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierBody {
    pub a0: f64,
    /// `(j, a_j, b_j)` terms.
    pub terms: Vec<(u32, f64, f64)>,
}

impl FourierBody {
    /// Validates strict convexity: `h + h'' > 0` on a verification grid.
    pub fn new(a0: f64, terms: Vec<(u32, f64, f64)>) -> Result<Self, GeoError> {
        let body = FourierBody { a0, terms };
        let grid = 2048;
        for g in 0..grid {
            let phi = 2.0 * PI * g as f64 / grid as f64;
            if body.h(phi) + body.h_second(phi) <= 0.0 {
                return Err(GeoError::InvalidBody(
                    "fourier support function is not strictly convex (h + h'' <= 0)".into(),
                ));
            }
        }
        Ok(body)
    }

    pub fn h(&self, phi: f64) -> f64 {
        let mut v = self.a0;
        for &(j, a, b) in &self.terms {
            let jp = j as f64 * phi;
            v += a * jp.cos() + b * jp.sin();
        }
        v
    }

    pub fn h_prime(&self, phi: f64) -> f64 {
        let mut v = 0.0;
        for &(j, a, b) in &self.terms {
            let jf = j as f64;
            let jp = jf * phi;
            v += -a * jf * jp.sin() + b * jf * jp.cos();
        }
        v
    }

    pub fn h_second(&self, phi: f64) -> f64 {
        let mut v = 0.0;
        for &(j, a, b) in &self.terms {
            let jf = j as f64;
            let jp = jf * phi;
            v += -a * jf * jf * jp.cos() - b * jf * jf * jp.sin();
        }
        v
    }
}

/// Strictly convex body with an evaluable support function.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothBody {
    Arcgon(Arcgon),
    Fourier(FourierBody),
}

impl SmoothBody {
    /// Support value at normal angle `theta`.
    pub fn h(&self, theta: f64) -> f64 {
        match self {
            SmoothBody::Arcgon(a) => a.eval(theta).0,
            SmoothBody::Fourier(f) => f.h(theta),
        }
    }

    /// Analytic derivative of the support function in the angle.
    pub fn h_prime(&self, theta: f64) -> f64 {
        match self {
            SmoothBody::Arcgon(a) => a.eval(theta).1,
            SmoothBody::Fourier(f) => f.h_prime(theta),
        }
    }

    /// Unique boundary point with outer normal angle `theta`
    /// (`x = h u + h' u'`).
    pub fn support_point(&self, theta: f64) -> P2 {
        match self {
            SmoothBody::Arcgon(a) => a.eval(theta).2,
            SmoothBody::Fourier(f) => {
                let (c, s) = (theta.cos(), theta.sin());
                let h = f.h(theta);
                let hp = f.h_prime(theta);
                P2::new(h * c - hp * s, h * s + hp * c)
            }
        }
    }

    /// Boundary samples that cover the whole boundary evenly enough for
    /// metric comparisons; `n` is the approximate total count.
    pub fn boundary_samples(&self, n: usize) -> Vec<P2> {
        match self {
            SmoothBody::Arcgon(a) => a.boundary_samples((n / a.arcs().len()).max(8)),
            SmoothBody::Fourier(_) => (0..n)
                .map(|i| self.support_point(2.0 * PI * i as f64 / n as f64))
                .collect(),
        }
    }

    /// Rough scale for tolerances.
    pub fn scale(&self) -> f64 {
        (0..64)
            .map(|i| self.h(2.0 * PI * i as f64 / 64.0).abs())
            .fold(1e-30, f64::max)
    }

    /// Central symmetry probe: fits a center to the odd support part on a
    /// grid and accepts when the residual vanishes numerically.
    pub fn symmetry_center(&self) -> Option<P2> {
        match self {
            SmoothBody::Fourier(f) => {
                let mut center = P2::new(0.0, 0.0);
                for &(j, a, b) in &f.terms {
                    if j == 1 {
                        center = P2::new(a, b);
                    } else if j % 2 == 1 && (a.abs() > 1e-12 || b.abs() > 1e-12) {
                        return None;
                    }
                }
                Some(center)
            }
            SmoothBody::Arcgon(_) => {
                let n = 1024;
                let (mut cx, mut cy) = (0.0, 0.0);
                let odd = |phi: f64| (self.h(phi) - self.h(phi + PI)) / 2.0;
                for i in 0..n {
                    let phi = 2.0 * PI * i as f64 / n as f64;
                    let p = odd(phi);
                    cx += p * phi.cos();
                    cy += p * phi.sin();
                }
                cx *= 2.0 / n as f64;
                cy *= 2.0 / n as f64;
                let tol = 1e-9 * self.scale();
                for i in 0..n {
                    let phi = 2.0 * PI * i as f64 / n as f64;
                    if (odd(phi) - cx * phi.cos() - cy * phi.sin()).abs() > tol {
                        return None;
                    }
                }
                Some(P2::new(cx, cy))
            }
        }
    }
}

/// General body: an exact polygon or a smooth support-function body.
#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Polygon(ConvexPolygon),
    Smooth(SmoothBody),
}

impl Body {
    /// Support value in the (float) direction of angle `theta`.
    pub fn h_f64(&self, theta: f64) -> f64 {
        match self {
            Body::Polygon(p) => {
                let (c, s) = (theta.cos(), theta.sin());
                p.vertices()
                    .iter()
                    .map(|v| rat_to_f64(&v.x) * c + rat_to_f64(&v.y) * s)
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            Body::Smooth(s) => s.h(theta),
        }
    }

    pub fn diameter_f64(&self) -> f64 {
        match self {
            Body::Polygon(p) => p.diameter_f64(),
            Body::Smooth(s) => (0..256)
                .map(|i| {
                    let th = PI * i as f64 / 256.0;
                    s.h(th) + s.h(th + PI)
                })
                .fold(0.0, f64::max),
        }
    }

    /// Center of symmetry as floats, when the body is centrally symmetric.
    pub fn symmetry_center_f64(&self) -> Option<P2> {
        match self {
            Body::Polygon(p) => p.symmetry_center().map(|c| c.to_p2()),
            Body::Smooth(s) => s.symmetry_center(),
        }
    }
}

/// Replace each edge of `poly` by a circular arc of radius `radius` through
/// the edge endpoints, bulging outward. Consecutive arcs meet at the
/// polygon vertices, giving a strictly convex body that converges to the
/// polygon as the radius grows.
pub fn smooth_by_arcs(poly: &ConvexPolygon, radius: f64) -> Result<SmoothBody, GeoError> {
    let n = poly.len();
    let verts: Vec<P2> = poly.vertices().iter().map(|v| v.to_p2()).collect();

    struct EdgeGeom {
        mid: P2,
        normal_angle: f64,
        half_len: f64,
    }
    let geo: Vec<EdgeGeom> = (0..n)
        .map(|i| {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let mid = P2::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
            let normal_angle = (b.y - a.y).atan2(b.x - a.x) - PI / 2.0;
            let half_len = a.dist(&b) / 2.0;
            EdgeGeom {
                mid,
                normal_angle,
                half_len,
            }
        })
        .collect();

    for g in &geo {
        if radius <= g.half_len {
            return Err(GeoError::RadiusTooSmall(format!(
                "radius {radius} does not clear edge of half-length {}",
                g.half_len
            )));
        }
    }
    // Convexity at each vertex: the normal intervals of the incident arcs
    // must stay disjoint inside the vertex's normal gap.
    for i in 0..n {
        let a = &geo[i];
        let b = &geo[(i + 1) % n];
        let gap = (b.normal_angle - a.normal_angle).rem_euclid(2.0 * PI);
        let spread = (a.half_len / radius).asin() + (b.half_len / radius).asin();
        if spread >= gap {
            return Err(GeoError::RadiusTooSmall(format!(
                "radius {radius} rounds across the corner between edges {i} and {}",
                (i + 1) % n
            )));
        }
    }

    let mut base = geo[0].normal_angle;
    let mut arcs = Vec::with_capacity(n);
    for g in &geo {
        // Keep normal angles monotone around the cycle.
        let mut na = g.normal_angle;
        while na < base {
            na += 2.0 * PI;
        }
        base = na;
        let half_span = (g.half_len / radius).asin();
        let sag = (radius * radius - g.half_len * g.half_len).sqrt();
        let center = P2::new(
            g.mid.x - sag * na.cos(),
            g.mid.y - sag * na.sin(),
        );
        arcs.push(Arc {
            center,
            radius,
            from: na - half_span,
            to: na + half_span,
        });
    }
    Ok(SmoothBody::Arcgon(Arcgon::new(arcs)?))
}

/// Search parameters for `sandwich_polygon`; the defaults implement the
/// documented retry schedule.
const SANDWICH_ATTEMPTS: usize = 10;

/// Circumscribe a verified sandwich polygon around `body`: the body in the
/// strict interior, the polygon inside the open epsilon-neighborhood, no
/// parallel edges, no long edge, not centrally symmetric.
///
/// Randomized tangent directions come from the explicit seed, so the result
/// is reproducible.
pub fn sandwich_polygon(body: &Body, eps: f64, seed: u64) -> Result<ConvexPolygon, GeoError> {
    sandwich_polygon_with(body, eps, seed, 16)
}

/// Like [`sandwich_polygon`] but with a chosen starting number of tangent
/// directions; denser polygons start with more hedgehog hull vertices.
pub fn sandwich_polygon_with(
    body: &Body,
    eps: f64,
    seed: u64,
    min_dirs: usize,
) -> Result<ConvexPolygon, GeoError> {
    if !(eps > 0.0) {
        return Err(GeoError::Precondition("epsilon must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diam = body.diameter_f64().max(eps);
    let mut n_dirs = min_dirs.max(8);

    for _attempt in 0..SANDWICH_ATTEMPTS {
        let jitter: f64 = rng.gen_range(0.0..1.0);
        let offset = eps * 0.25;
        if let Some(p) = try_sandwich(body, eps, n_dirs, jitter, offset, diam) {
            return Ok(p);
        }
        n_dirs = n_dirs + n_dirs / 2;
    }
    Err(GeoError::ApproximationFailure(format!(
        "no verified sandwich polygon after {SANDWICH_ATTEMPTS} attempts (eps = {eps})"
    )))
}

fn try_sandwich(
    body: &Body,
    eps: f64,
    n_dirs: usize,
    jitter: f64,
    offset: f64,
    diam: f64,
) -> Option<ConvexPolygon> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    // Big starting box around the body.
    let r = diam * 4.0 + eps * 4.0 + body.h_f64(0.0).abs() + body.h_f64(PI).abs()
        + body.h_f64(PI / 2.0).abs()
        + body.h_f64(-PI / 2.0).abs();
    let mut poly: Vec<Rat2> = vec![
        Rat2::from_f64s(-r, -r),
        Rat2::from_f64s(r, -r),
        Rat2::from_f64s(r, r),
        Rat2::from_f64s(-r, r),
    ];

    for j in 0..n_dirs {
        let theta = 2.0 * PI * ((j as f64 * GOLDEN + jitter) % 1.0);
        let d = Rat2::from_f64s(theta.cos(), theta.sin());
        // Exact support of the body in this (rationalized) direction, with a
        // positive outward offset so the body lands strictly inside.
        let c = match body {
            Body::Polygon(p) => p.support(&d).0 + rat_from_f64(offset),
            Body::Smooth(s) => {
                // Cover the gap between the rationalized direction and the
                // true angle with the offset margin.
                rat_from_f64(s.h(theta) + offset)
            }
        };
        // Clip to the half-plane <x, d> <= c.
        let p0 = d.scale(&(c / d.norm2()));
        let p1 = &p0 + &d.rot90();
        poly = clip_halfplane(&poly, &p0, &p1);
        if poly.len() < 3 {
            return None;
        }
    }

    let hull = match convex_hull(&poly).ok()? {
        Hull::Polygon(h) => h,
        _ => return None,
    };
    let candidate = ConvexPolygon::new(hull.vertices().to_vec()).ok()?;
    verify_sandwich(body, &candidate, eps).then_some(candidate)
}

/// Exact (polygon body) or grid-verified (smooth body) check of the
/// sandwich conditions plus the structural edge conditions.
pub fn verify_sandwich(body: &Body, p: &ConvexPolygon, eps: f64) -> bool {
    if p.has_parallel_edges() || p.has_long_edge() || p.symmetry_center().is_some() {
        return false;
    }
    match body {
        Body::Polygon(k) => {
            let eps2 = rat_from_f64(eps) * rat_from_f64(eps);
            k.vertices().iter().all(|v| p.contains_strict(v))
                && p.vertices().iter().all(|v| k.dist2(v) < eps2)
        }
        Body::Smooth(s) => {
            let grid = 720;
            // Body inside the polygon: every boundary point strictly inside.
            let inside = s
                .boundary_samples(grid)
                .iter()
                .all(|x| p.contains_strict(&Rat2::from_f64s(x.x, x.y)));
            if !inside {
                return false;
            }
            // Polygon inside the eps-neighborhood: vertex distance to the
            // body below eps, measured through the support function.
            p.vertices().iter().all(|v| {
                let vp = v.to_p2();
                let excess = (0..grid)
                    .map(|g| {
                        let th = 2.0 * PI * g as f64 / grid as f64;
                        vp.x * th.cos() + vp.y * th.sin() - s.h(th)
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                excess < eps * 0.999
            })
        }
    }
}
