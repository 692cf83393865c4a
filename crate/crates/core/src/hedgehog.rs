//! Middle lines, middle sets and the middle hedgehog: exact polygonal
//! structure with classified corners, convex hull of the hedgehog, and the
//! smooth parametrization `x(phi) = p(phi) u(phi) + p'(phi) u'(phi)`.

use crate::body::{edge_normal_fan, Body, ConvexPolygon, EdgeNormalFan, PolyFace, SmoothBody};
use crate::kernel::{convex_hull, orient, Hull, P2, Rat2, Segment};
use crate::GeoError;
use std::f64::consts::PI;

/// A middle set `Z(u) = (1/2)[F(K,u) + F(K,-u)]`, either a point
/// (degenerate segment) or a segment, with its source faces.
#[derive(Clone, Debug, PartialEq)]
pub struct MiddleSet {
    /// Fan angle of the defining normal, in the fan's rotated frame.
    pub normal_angle: f64,
    pub seg: Segment,
    /// Index of the polygon edge whose normal defines this set.
    pub edge: usize,
    /// Index of the vertex opposite that edge.
    pub opposite_vertex: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerKind {
    Weak,
    Strong,
}

/// A hedgehog corner `(p + q)/2` for an opposite vertex pair, sitting
/// between two consecutive middle sets.
#[derive(Clone, Debug)]
pub struct Corner {
    pub location: Rat2,
    pub kind: CornerKind,
    /// Vertex indices of the opposite pair `(p, q)`.
    pub opposite_pair: (usize, usize),
    /// Fan indices `(i, i + 1)` of the flanking middle sets.
    pub between: (usize, usize),
}

/// The middle hedgehog of a polygon: a cyclic alternation of middle sets
/// and corners, exact throughout.
#[derive(Clone, Debug)]
pub struct PolygonHedgehog {
    pub fan: EdgeNormalFan,
    /// One middle set per fan entry, in fan order.
    pub middle_sets: Vec<MiddleSet>,
    /// Corner `i` joins middle sets `i` and `i + 1` (cyclically).
    pub corners: Vec<Corner>,
}

impl PolygonHedgehog {
    pub fn weak_count(&self) -> usize {
        self.corners
            .iter()
            .filter(|c| c.kind == CornerKind::Weak)
            .count()
    }

    pub fn strong_count(&self) -> usize {
        self.corners.len() - self.weak_count()
    }

    /// Dense boundary samples of the hedgehog curve for metric comparisons.
    pub fn samples(&self, per_segment: usize) -> Vec<P2> {
        let mut out = Vec::new();
        for ms in &self.middle_sets {
            let a = ms.seg.a.to_p2();
            let b = ms.seg.b.to_p2();
            for k in 0..=per_segment {
                let t = k as f64 / per_segment as f64;
                out.push(P2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
            }
        }
        out
    }
}

/// Sampled middle hedgehog of a strictly convex smooth body.
#[derive(Clone, Debug)]
pub struct SmoothHedgehog {
    /// `(phi, x(phi))` samples, `phi` uniform in `[0, pi)`.
    pub samples: Vec<(f64, P2)>,
}

/// A line `{x : <x, normal> = offset}` with exact data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLine {
    pub normal: Rat2,
    pub offset: crate::kernel::Rat,
}

impl ExactLine {
    pub fn contains(&self, p: &Rat2) -> bool {
        p.dot(&self.normal) == self.offset
    }
}

/// Middle line of a polygon in exact direction `u`:
/// the average of the two opposite support lines.
pub fn middle_line(p: &ConvexPolygon, u: &Rat2) -> ExactLine {
    let (h_pos, _) = p.support(u);
    let (h_neg, _) = p.support(&-u);
    let half = crate::kernel::Rat::new(1.into(), 2.into());
    ExactLine {
        normal: u.clone(),
        offset: (h_pos - h_neg) * half,
    }
}

/// Middle line of any body at normal angle `theta`, as floats:
/// `(unit normal, offset)`.
pub fn middle_line_f64(body: &Body, theta: f64) -> (P2, f64) {
    let h1 = body.h_f64(theta);
    let h2 = body.h_f64(theta + PI);
    (P2::new(theta.cos(), theta.sin()), (h1 - h2) / 2.0)
}

/// Exact middle set of a polygon in direction `u`: the Minkowski midpoint
/// of the faces `F(u)` and `F(-u)`.
pub fn middle_set(p: &ConvexPolygon, u: &Rat2) -> Segment {
    let face_points = |f: PolyFace| -> Vec<Rat2> {
        match f {
            PolyFace::Vertex(i) => vec![p.vertex(i).clone()],
            PolyFace::Edge(i) => {
                let e = p.edge(i);
                vec![e.a, e.b]
            }
        }
    };
    let fa = face_points(p.support(u).1);
    let fb = face_points(p.support(&-u).1);
    let mids: Vec<Rat2> = fa
        .iter()
        .flat_map(|a| fb.iter().map(move |b| a.midpoint(b)))
        .collect();
    match convex_hull(&mids).expect("nonempty") {
        Hull::Point(pt) => Segment::new(pt.clone(), pt),
        Hull::Segment(s) => s,
        Hull::Polygon(_) => unreachable!("midpoint of two parallel faces is one-dimensional"),
    }
}

/// Build the exact middle hedgehog of a polygon without parallel edges.
/// Incremental support-vertex lookup for a monotone counterclockwise sweep
/// of query directions: the support vertex of a convex polygon advances
/// monotonically with the direction, so each query walks forward from the
/// previous answer. Every answer is certified as a strict local (hence
/// global) maximum against both neighbors; a failed certificate falls back
/// to the full scan.
struct SupportCaliper<'a> {
    poly: &'a ConvexPolygon,
    idx: Option<usize>,
}

impl<'a> SupportCaliper<'a> {
    fn new(poly: &'a ConvexPolygon) -> Self {
        SupportCaliper { poly, idx: None }
    }

    fn get(&mut self, d: &Rat2) -> Result<usize, GeoError> {
        let n = self.poly.len();
        let mut i = match self.idx {
            Some(i) => i,
            None => {
                let i = self.poly.support_vertex(d)?;
                self.idx = Some(i);
                return Ok(i);
            }
        };
        let dot = |v: usize| self.poly.vertex(v).dot(d);
        let mut cur = dot(i);
        let mut steps = 0usize;
        loop {
            let j = (i + 1) % n;
            let next = dot(j);
            if next > cur && steps <= n {
                i = j;
                cur = next;
                steps += 1;
            } else {
                break;
            }
        }
        let prev = dot((i + n - 1) % n);
        let next = dot((i + 1) % n);
        if prev > cur || steps > n {
            // The sweep assumption was violated; recover exactly.
            let i = self.poly.support_vertex(d)?;
            self.idx = Some(i);
            return Ok(i);
        }
        if prev == cur || next == cur {
            return Err(GeoError::InternalInvariant(
                "expected singleton support set".into(),
            ));
        }
        self.idx = Some(i);
        Ok(i)
    }
}

pub fn polygon_hedgehog(p: &ConvexPolygon) -> Result<PolygonHedgehog, GeoError> {
    let fan = edge_normal_fan(p)?;
    let k = fan.len();
    let inv = fan.rotation.inverse();

    // The fan directions sweep counterclockwise, so both the co-directed
    // and the opposite support vertices advance monotonically.
    let mut cal_fwd = SupportCaliper::new(p);
    let mut cal_bwd = SupportCaliper::new(p);

    let mut middle_sets = Vec::with_capacity(k);
    for entry in &fan.entries {
        let n_e = p.outer_normal(entry.edge);
        let minus = -&n_e;
        // `-n_e` is a positive multiple of the sweep direction when the fan
        // stores the inner normal, and of its negative otherwise.
        let opp = if entry.outer {
            cal_bwd.get(&minus)?
        } else {
            cal_fwd.get(&minus)?
        };
        let e = p.edge(entry.edge);
        let seg = Segment::new(e.a.midpoint(p.vertex(opp)), e.b.midpoint(p.vertex(opp)));
        middle_sets.push(MiddleSet {
            normal_angle: entry.angle,
            seg,
            edge: entry.edge,
            opposite_vertex: opp,
        });
    }

    let mut cal_p = SupportCaliper::new(p);
    let mut cal_q = SupportCaliper::new(p);
    let mut corners = Vec::with_capacity(k);
    for i in 0..k {
        let j = (i + 1) % k;
        // An exact direction strictly between the two fan angles; across the
        // wrap the second direction continues through its antipode.
        let w_rot = if j != 0 {
            &fan.entries[i].dir + &fan.entries[j].dir
        } else {
            &fan.entries[i].dir - &fan.entries[j].dir
        };
        let w = inv.apply(&w_rot);
        let p_idx = cal_p.get(&w)?;
        let q_idx = cal_q.get(&-&w)?;
        let location = p.vertex(p_idx).midpoint(p.vertex(q_idx));

        // The corner must be the exact shared endpoint of both flanking
        // middle sets.
        for side in [i, j] {
            let seg = &middle_sets[side].seg;
            if seg.a != location && seg.b != location {
                return Err(GeoError::InternalInvariant(format!(
                    "corner between fan entries {i},{j} is not an endpoint of middle set {side}"
                )));
            }
        }

        let kind = classify_corner(p, &fan, i, j, p_idx, q_idx);
        // Redundant geometric cross-check: the flanking middle sets lie on
        // the same side of the line through p and q iff the corner is strong.
        if let Some(same_side) = sets_on_same_side(
            p.vertex(p_idx),
            p.vertex(q_idx),
            &middle_sets[i].seg,
            &middle_sets[j].seg,
            &location,
        ) {
            let expected = if same_side {
                CornerKind::Strong
            } else {
                CornerKind::Weak
            };
            if expected != kind {
                return Err(GeoError::InternalInvariant(format!(
                    "corner classification mismatch between fan entries {i},{j}"
                )));
            }
        }

        corners.push(Corner {
            location,
            kind,
            opposite_pair: (p_idx, q_idx),
            between: (i, j),
        });
    }

    Ok(PolygonHedgehog {
        fan,
        middle_sets,
        corners,
    })
}

/// A corner is weak exactly when its flanking edges hinge on one of the
/// opposite vertices: the edge pair shares a polygon vertex that is `p` or
/// `q`. (Sharing an unrelated vertex, as all edge pairs of a triangle do,
/// does not make a corner weak.)
fn classify_corner(
    p: &ConvexPolygon,
    fan: &EdgeNormalFan,
    i: usize,
    j: usize,
    p_idx: usize,
    q_idx: usize,
) -> CornerKind {
    let n = p.len();
    let e1 = fan.entries[i].edge;
    let e2 = fan.entries[j].edge;
    let verts_of = |e: usize| [e % n, (e + 1) % n];
    let shared: Vec<usize> = verts_of(e1)
        .into_iter()
        .filter(|v| verts_of(e2).contains(v))
        .collect();
    if shared.iter().any(|&v| v == p_idx || v == q_idx) {
        CornerKind::Weak
    } else {
        CornerKind::Strong
    }
}

/// `Some(true)` if both middle sets lie strictly on the same side of the
/// line through the opposite pair, `Some(false)` if strictly on different
/// sides, `None` when a far endpoint sits on the line (no strict decision).
fn sets_on_same_side(
    vp: &Rat2,
    vq: &Rat2,
    za: &Segment,
    zb: &Segment,
    corner: &Rat2,
) -> Option<bool> {
    let far = |s: &Segment| -> Rat2 {
        if &s.a == corner {
            s.b.clone()
        } else {
            s.a.clone()
        }
    };
    let sa = orient(vp, vq, &far(za));
    let sb = orient(vp, vq, &far(zb));
    if sa == 0 || sb == 0 {
        return None;
    }
    Some(sa == sb)
}

/// Convex hull of the hedgehog plus the corners that are hull vertices.
/// Enforces (as a hard internal check) that no weak corner is exposed.
pub fn hedgehog_hull(m: &PolygonHedgehog) -> Result<(Hull, Vec<usize>), GeoError> {
    let pts: Vec<Rat2> = m.corners.iter().map(|c| c.location.clone()).collect();
    let hull = convex_hull(&pts)?;
    let hull_pts = hull.points();
    let mut exposed = Vec::new();
    for (idx, c) in m.corners.iter().enumerate() {
        if hull_pts.contains(&c.location) {
            if c.kind == CornerKind::Weak {
                return Err(GeoError::InternalInvariant(format!(
                    "weak corner {idx} appears as a hull vertex"
                )));
            }
            exposed.push(idx);
        }
    }
    Ok((hull, exposed))
}

/// Number of vertices of the convex hull of the middle hedgehog.
pub fn hull_vertex_count(p: &ConvexPolygon) -> Result<usize, GeoError> {
    let m = polygon_hedgehog(p)?;
    Ok(hedgehog_hull(&m)?.0.vertex_count())
}

/// Odd part of the support function: `p(phi) = [h(u) - h(-u)]/2`.
pub fn odd_support(body: &SmoothBody, phi: f64) -> f64 {
    (body.h(phi) - body.h(phi + PI)) / 2.0
}

/// Analytic derivative of the odd support part.
pub fn odd_support_prime(body: &SmoothBody, phi: f64) -> f64 {
    (body.h_prime(phi) - body.h_prime(phi + PI)) / 2.0
}

/// Middle point `m(u(phi)) = p u + p' u'` of a strictly convex body.
pub fn middle_point(body: &SmoothBody, phi: f64) -> P2 {
    let p = odd_support(body, phi);
    let pp = odd_support_prime(body, phi);
    let (c, s) = (phi.cos(), phi.sin());
    P2::new(p * c - pp * s, p * s + pp * c)
}

/// Sample the middle hedgehog of a strictly convex body at `n` uniformly
/// spaced angles in `[0, pi)`.
pub fn smooth_hedgehog(body: &SmoothBody, n: usize) -> Result<SmoothHedgehog, GeoError> {
    if n < 8 {
        return Err(GeoError::Precondition("need at least 8 samples".into()));
    }
    let samples = (0..n)
        .map(|j| {
            let phi = PI * j as f64 / n as f64;
            (phi, middle_point(body, phi))
        })
        .collect();
    Ok(SmoothHedgehog { samples })
}

/// Intercept diagnostic `f(phi) = p(phi)/cos(phi)` together with a central
/// finite-difference derivative at step `h`.
///
/// The body is expected to be positioned with the reference corner at the
/// origin; the function is undefined at `phi = +-pi/2`.
pub fn midline_intercept(body: &Body, phi: f64, h: f64) -> Result<(f64, f64), GeoError> {
    let f = |x: f64| -> Result<f64, GeoError> {
        let c = x.cos();
        if c.abs() < 1e-9 {
            return Err(GeoError::Precondition(
                "midline intercept undefined near +-pi/2".into(),
            ));
        }
        let p = (body.h_f64(x) - body.h_f64(x + PI)) / 2.0;
        Ok(p / c)
    };
    let val = f(phi)?;
    let fd = (f(phi + h)? - f(phi - h)?) / (2.0 * h);
    Ok((val, fd))
}

/// Closed-form value of the derivative of the intercept diagnostic:
/// `<m(u(phi)), e2> / cos^2(phi)`.
pub fn midline_intercept_slope(body: &SmoothBody, phi: f64) -> f64 {
    let m = middle_point(body, phi);
    m.y / (phi.cos() * phi.cos())
}

/// Exact hedgehog hull count paired with the corner data, convenience for
/// callers that need both.
pub fn hedgehog_with_hull(
    p: &ConvexPolygon,
) -> Result<(PolygonHedgehog, Hull, Vec<usize>), GeoError> {
    let m = polygon_hedgehog(p)?;
    let (hull, exposed) = hedgehog_hull(&m)?;
    Ok((m, hull, exposed))
}

/// Cluster-count the hull vertices of a sampled smooth hedgehog.
///
/// Hull membership is decided exactly on the rationalized samples; samples
/// lying along a straight hull edge wobble by floating-point noise, so
/// near-collinear hull vertices are pruned with a tolerance far above the
/// noise floor and far below real corner turns. The surviving bend points
/// are then merged when closer than `gap` sample steps in angle order.
pub fn clustered_hull_vertex_count(h: &SmoothHedgehog, gap: usize) -> Result<usize, GeoError> {
    let n = h.samples.len();
    let pts: Vec<Rat2> = h
        .samples
        .iter()
        .map(|(_, p)| Rat2::from_f64s(p.x, p.y))
        .collect();
    let hull = convex_hull(&pts)?;
    let hull_pts = hull.points();
    // Hull vertices in angle order, carrying their sample index.
    let mut cycle: Vec<(usize, P2)> = (0..n)
        .filter(|&i| hull_pts.contains(&pts[i]))
        .map(|i| (i, h.samples[i].1))
        .collect();
    if cycle.len() <= 1 {
        return Ok(cycle.len());
    }

    let scale = cycle
        .iter()
        .map(|(_, p)| p.x.abs().max(p.y.abs()))
        .fold(1e-30, f64::max);
    let tol = 1e-10 * scale;
    // Repeatedly remove the flattest vertex while it deviates from its
    // neighbors' chord by less than the noise tolerance.
    while cycle.len() > 3 {
        let m = cycle.len();
        let deviation = |i: usize| -> f64 {
            let a = cycle[(i + m - 1) % m].1;
            let p = cycle[i].1;
            let b = cycle[(i + 1) % m].1;
            let (ex, ey) = (b.x - a.x, b.y - a.y);
            let len = ex.hypot(ey);
            if len == 0.0 {
                return 0.0;
            }
            (ex * (p.y - a.y) - ey * (p.x - a.x)).abs() / len
        };
        let (best, dev) = (0..m)
            .map(|i| (i, deviation(i)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if dev >= tol {
            break;
        }
        cycle.remove(best);
    }

    // Circular gap clustering over the surviving sample indices.
    let m = cycle.len();
    let mut clusters = 0usize;
    for i in 0..m {
        let prev = cycle[(i + m - 1) % m].0;
        let cur = cycle[i].0;
        if (cur + n - prev) % n > gap {
            clusters += 1;
        }
    }
    Ok(clusters.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::FourierBody;
    use crate::kernel::Rat;
    use num_traits::FromPrimitive;

    fn tri() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Rat2::from_ints(0, 0),
            Rat2::from_ints(4, 0),
            Rat2::from_ints(0, 4),
        ])
        .unwrap()
    }

    fn ints(x: i64, y: i64) -> Rat2 {
        Rat2::from_ints(x, y)
    }

    #[test]
    fn middle_line_triangle() {
        let line = middle_line(&tri(), &ints(0, 1));
        // h(0,1) = 4, h(0,-1) = 0: the middle line is y = 2.
        assert_eq!(line.offset, Rat::from_i64(2).unwrap());
        assert!(line.contains(&ints(100, 2)));
    }

    #[test]
    fn middle_line_symmetric() {
        let sq = ConvexPolygon::new(vec![
            ints(-1, -1),
            ints(1, -1),
            ints(1, 1),
            ints(-1, 1),
        ])
        .unwrap();
        let line = middle_line(&sq, &ints(0, 1));
        assert_eq!(line.offset, Rat::from_i64(0).unwrap());
    }

    #[test]
    fn middle_set_triangle() {
        // Downward direction: the bottom edge against the top vertex.
        let z = middle_set(&tri(), &ints(0, -1));
        let expect_a = ints(0, 2);
        let expect_b = ints(2, 2);
        assert!(
            (z.a == expect_a && z.b == expect_b) || (z.a == expect_b && z.b == expect_a),
            "unexpected middle set {z:?}"
        );
        // Z(u) = Z(-u).
        let z2 = middle_set(&tri(), &ints(0, 1));
        assert!(z2.contains(&z.a) && z2.contains(&z.b) && z.contains(&z2.a));
    }

    #[test]
    fn triangle_hedgehog_is_medial() {
        let m = polygon_hedgehog(&tri()).unwrap();
        assert_eq!(m.corners.len(), 3);
        assert_eq!(m.weak_count(), 0);
        let locs: Vec<&Rat2> = m.corners.iter().map(|c| &c.location).collect();
        for expect in [ints(2, 0), ints(0, 2), ints(2, 2)] {
            assert!(locs.contains(&&expect), "missing corner {expect:?}");
        }
        let (hull, exposed) = hedgehog_hull(&m).unwrap();
        assert_eq!(hull.vertex_count(), 3);
        assert_eq!(exposed.len(), 3);
    }

    #[test]
    fn translation_equivariance() {
        let t = tri();
        let shift = ints(13, -5);
        let m1 = polygon_hedgehog(&t).unwrap();
        let m2 = polygon_hedgehog(&t.translate(&shift)).unwrap();
        let locs1: Vec<Rat2> = m1.corners.iter().map(|c| &c.location + &shift).collect();
        for c in &m2.corners {
            assert!(locs1.contains(&c.location));
        }
    }

    #[test]
    fn square_hedgehog_rejected() {
        let sq = ConvexPolygon::new(vec![ints(0, 0), ints(2, 0), ints(2, 2), ints(0, 2)]).unwrap();
        assert!(matches!(
            polygon_hedgehog(&sq),
            Err(GeoError::ParallelEdges)
        ));
    }

    #[test]
    fn smooth_hedgehog_circle_is_center() {
        // Circle of radius 2 centered at (0.5, -0.25):
        // h = 2 + 0.5 cos phi - 0.25 sin phi.
        let f = FourierBody::new(2.0, vec![(1, 0.5, -0.25)]).unwrap();
        let body = SmoothBody::Fourier(f);
        let h = smooth_hedgehog(&body, 64).unwrap();
        for (_, x) in &h.samples {
            assert!((x.x - 0.5).abs() < 1e-12 && (x.y + 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn smooth_hedgehog_fourier_closed_form() {
        let a = 0.1;
        let f = FourierBody::new(1.0, vec![(3, a, 0.0)]).unwrap();
        let body = SmoothBody::Fourier(f);
        let h = smooth_hedgehog(&body, 128).unwrap();
        for (phi, x) in &h.samples {
            let (c, s) = (phi.cos(), phi.sin());
            let p = a * (3.0 * phi).cos();
            let pp = -3.0 * a * (3.0 * phi).sin();
            let ex = P2::new(p * c - pp * s, p * s + pp * c);
            assert!((x.x - ex.x).abs() < 1e-12 && (x.y - ex.y).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_support_antiperiodic() {
        let f = FourierBody::new(1.0, vec![(3, 0.1, 0.02), (2, 0.05, 0.0)]).unwrap();
        let body = SmoothBody::Fourier(f);
        for k in 0..16 {
            let phi = 0.4 * k as f64;
            assert!((odd_support(&body, phi + PI) + odd_support(&body, phi)).abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_of_middle_lines() {
        // Intersection of nearby middle lines converges to the middle point.
        let f = FourierBody::new(1.0, vec![(3, 0.1, 0.0)]).unwrap();
        let body = SmoothBody::Fourier(f.clone());
        let as_body = Body::Smooth(body.clone());
        let phi = 0.7;
        let m = middle_point(&body, phi);
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let (n1, c1) = middle_line_f64(&as_body, phi);
            let (n2, c2) = middle_line_f64(&as_body, phi + eps);
            let det = n1.x * n2.y - n1.y * n2.x;
            let x = P2::new((c1 * n2.y - c2 * n1.y) / det, (n1.x * c2 - n2.x * c1) / det);
            let err = x.dist(&m);
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn intercept_slope_matches_formula() {
        let f = FourierBody::new(1.0, vec![(3, 0.1, 0.05)]).unwrap();
        let body = SmoothBody::Fourier(f);
        let as_body = Body::Smooth(body.clone());
        for k in 0..50 {
            let phi = -1.2 + 2.4 * k as f64 / 49.0;
            let (_, fd) = midline_intercept(&as_body, phi, 1e-4).unwrap();
            let formula = midline_intercept_slope(&body, phi);
            assert!(
                (fd - formula).abs() < 1e-6,
                "phi={phi}: fd={fd} formula={formula}"
            );
        }
    }

    #[test]
    fn intercept_rejects_pole() {
        let f = FourierBody::new(1.0, vec![]).unwrap();
        let body = Body::Smooth(SmoothBody::Fourier(f));
        assert!(midline_intercept(&body, PI / 2.0, 1e-4).is_err());
    }
}
