//! Convexity points: a point `z` is a convexity point of `K` when
//! `(K - z) u (z - K)` is convex. Exact decision for polygons via an area
//! identity, candidate generation from the hedgehog hull, a brute-force
//! grid oracle, and the three-affinely-independent-points verification.

use crate::body::{ConvexPolygon, SmoothBody};
use crate::hedgehog::hedgehog_with_hull;
use crate::kernel::{clip_convex, convex_hull, orient, Hull, Rat, Rat2, P2};
use crate::GeoError;
use num_traits::{FromPrimitive, Zero};
use std::f64::consts::PI;

/// Reflect a polygon through `z`: the body `2z - K`.
pub fn reflect(k: &ConvexPolygon, z: &Rat2) -> ConvexPolygon {
    k.reflect(z)
}

/// Exact convexity-point decision for polygons.
///
/// With `A = K - z`, `B = z - K` and `C` the convex hull of all vertices of
/// both, the union is convex iff
/// `area(C) = area(A) + area(B) - area(A n B)`, a single exact comparison.
pub fn is_convexity_point(k: &ConvexPolygon, z: &Rat2) -> bool {
    let a = k.translate(&-z);
    let b = a.reflect(&Rat2::new(Rat::zero(), Rat::zero()));
    let mut pts: Vec<Rat2> = a.vertices().to_vec();
    pts.extend(b.vertices().iter().cloned());
    let c = convex_hull(&pts).expect("nonempty");
    let inter_area = match clip_convex(&a.to_hull(), &b.to_hull()).expect("valid polygons") {
        Some(h) => h.area(),
        None => Rat::zero(),
    };
    let union_area =
        crate::kernel::area(&a.to_hull()) + crate::kernel::area(&b.to_hull()) - inter_area;
    c.area() == union_area
}

/// Candidate convexity points of a polygon without parallel edges: the hull
/// vertices of its middle hedgehog. Each candidate is re-verified with the
/// exact test; a failure would falsify the implementation and is reported
/// as an internal error.
pub fn candidate_convexity_points(k: &ConvexPolygon) -> Result<Vec<(Rat2, usize)>, GeoError> {
    let (m, _, exposed) = hedgehog_with_hull(k)?;
    let mut out = Vec::with_capacity(exposed.len());
    for idx in exposed {
        let loc = m.corners[idx].location.clone();
        if !is_convexity_point(k, &loc) {
            return Err(GeoError::InternalInvariant(format!(
                "hedgehog hull vertex {loc:?} failed the exact union-convexity test"
            )));
        }
        out.push((loc, idx));
    }
    Ok(out)
}

/// Brute-force oracle: every grid point of the bounding box lying in `K`
/// that passes the exact test. Independent of the hedgehog pipeline.
pub fn brute_force_convexity_points(k: &ConvexPolygon, grid: usize) -> Result<Vec<Rat2>, GeoError> {
    if grid < 16 {
        return Err(GeoError::Precondition("grid resolution must be >= 16".into()));
    }
    let xs: Vec<&Rat> = k.vertices().iter().map(|v| &v.x).collect();
    let ys: Vec<&Rat> = k.vertices().iter().map(|v| &v.y).collect();
    let (xmin, xmax) = (
        (*xs.iter().min().unwrap()).clone(),
        (*xs.iter().max().unwrap()).clone(),
    );
    let (ymin, ymax) = (
        (*ys.iter().min().unwrap()).clone(),
        (*ys.iter().max().unwrap()).clone(),
    );
    let g = Rat::from_usize(grid).unwrap();
    let dx = (&xmax - &xmin) / &g;
    let dy = (&ymax - &ymin) / &g;
    let mut out = Vec::new();
    for i in 0..=grid {
        for j in 0..=grid {
            let z = Rat2::new(
                &xmin + &dx * Rat::from_usize(i).unwrap(),
                &ymin + &dy * Rat::from_usize(j).unwrap(),
            );
            if k.contains(&z) && is_convexity_point(k, &z) {
                out.push(z);
            }
        }
    }
    Ok(out)
}

/// Outcome of the three-affinely-independent-convexity-points check.
#[derive(Clone, Debug)]
pub struct ConvexityReport {
    /// Centrally symmetric bodies short-circuit: the center is the witness.
    pub symmetric: bool,
    pub center: Option<Rat2>,
    /// Candidate points with the index of their source hedgehog corner
    /// (empty when candidates were unavailable and brute force was used).
    pub candidates: Vec<(Rat2, usize)>,
    /// Points that passed the exact union-convexity test.
    pub verified: Vec<Rat2>,
    /// First affinely independent triple among the verified points.
    pub affine_independent_triple: Option<(Rat2, Rat2, Rat2)>,
}

/// First triple (in order) with nonzero orientation determinant.
fn pick_triple(points: &[Rat2]) -> Option<(Rat2, Rat2, Rat2)> {
    let n = points.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for l in (j + 1)..n {
                if orient(&points[i], &points[j], &points[l]) != 0 {
                    return Some((points[i].clone(), points[j].clone(), points[l].clone()));
                }
            }
        }
    }
    None
}

/// Verify on an instance that a non-symmetric polygon has three affinely
/// independent convexity points. Candidates come from the hedgehog hull;
/// polygons with parallel edges fall back to the brute-force grid.
pub fn verify_independent_triple(k: &ConvexPolygon) -> Result<ConvexityReport, GeoError> {
    if let Some(center) = k.symmetry_center() {
        debug_assert!(is_convexity_point(k, &center));
        return Ok(ConvexityReport {
            symmetric: true,
            center: Some(center.clone()),
            candidates: Vec::new(),
            verified: vec![center],
            affine_independent_triple: None,
        });
    }
    let candidates = match candidate_convexity_points(k) {
        Ok(c) => c,
        Err(GeoError::ParallelEdges) => Vec::new(),
        Err(e) => return Err(e),
    };
    let mut verified: Vec<Rat2> = candidates.iter().map(|(p, _)| p.clone()).collect();
    if verified.len() < 3 || pick_triple(&verified).is_none() {
        // Brute-force fallback at growing resolution.
        for grid in [16usize, 32, 64, 128] {
            let mut found = brute_force_convexity_points(k, grid)?;
            for p in found.drain(..) {
                if !verified.contains(&p) {
                    verified.push(p);
                }
            }
            if pick_triple(&verified).is_some() {
                break;
            }
        }
    }
    let triple = pick_triple(&verified);
    Ok(ConvexityReport {
        symmetric: false,
        center: None,
        candidates,
        verified,
        affine_independent_triple: triple,
    })
}

/// Tolerance-mode convexity-point test for smooth bodies.
///
/// Both `K - z` and `z - K` are approximated by dense inscribed polygons of
/// `n` support points; the area defect
/// `area(hull(A u B)) - area(A) - area(B) + area(A n B)` is computed in
/// floating point and compared against `tol * scale^2` plus a
/// discretization allowance. Documented as non-exact.
pub fn is_convexity_point_smooth(body: &SmoothBody, z: P2, n: usize, tol: f64) -> bool {
    let n = n.max(64);
    let a: Vec<P2> = (0..n)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / n as f64;
            let x = body.support_point(th);
            P2::new(x.x - z.x, x.y - z.y)
        })
        .collect();
    let b: Vec<P2> = a.iter().map(|p| P2::new(-p.x, -p.y)).collect();

    let area_a = shoelace(&a);
    let inter = clip_f64(&a, &b);
    let area_i = shoelace(&inter);
    let mut all: Vec<P2> = a.clone();
    all.extend(b.iter().copied());
    let hull = hull_f64(&all);
    let area_c = shoelace(&hull);

    let defect = area_c - (2.0 * area_a - area_i);
    let scale = body.scale() + z.x.abs() + z.y.abs();
    let allowance = 60.0 * scale * scale / (n as f64 * n as f64);
    defect < tol * scale * scale + allowance
}

fn shoelace(p: &[P2]) -> f64 {
    if p.len() < 3 {
        return 0.0;
    }
    let n = p.len();
    (0..n)
        .map(|i| {
            let a = p[i];
            let b = p[(i + 1) % n];
            a.x * b.y - a.y * b.x
        })
        .sum::<f64>()
        / 2.0
}

fn clip_f64(subject: &[P2], clip: &[P2]) -> Vec<P2> {
    let mut cur: Vec<P2> = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if cur.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % n];
        let mut next = Vec::with_capacity(cur.len() + 1);
        let m = cur.len();
        for j in 0..m {
            let p = cur[j];
            let q = cur[(j + 1) % m];
            let sp = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            let sq = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x);
            if sp >= 0.0 {
                next.push(p);
            }
            if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
                let t = sp / (sp - sq);
                next.push(P2::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)));
            }
        }
        cur = next;
    }
    cur
}

fn hull_f64(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: P2, a: P2, b: P2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Exact area of the convex hull of the union, exposed for diagnostics.
pub fn union_hull(k: &ConvexPolygon, z: &Rat2) -> Hull {
    let a = k.translate(&-z);
    let b = a.reflect(&Rat2::new(Rat::zero(), Rat::zero()));
    let mut pts: Vec<Rat2> = a.vertices().to_vec();
    pts.extend(b.vertices().iter().cloned());
    convex_hull(&pts).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::FourierBody;

    fn tri() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Rat2::from_ints(0, 0),
            Rat2::from_ints(4, 0),
            Rat2::from_ints(0, 4),
        ])
        .unwrap()
    }

    #[test]
    fn reflect_involution() {
        let t = tri();
        let z = Rat2::from_ints(1, 2);
        assert_eq!(t.reflect(&z).reflect(&z), t);
        let r = t.reflect(&Rat2::from_ints(0, 0));
        assert!(r.vertices().contains(&Rat2::from_ints(-4, 0)));
        assert!(r.vertices().contains(&Rat2::from_ints(0, -4)));
    }

    #[test]
    fn triangle_midpoints_are_convexity_points() {
        let t = tri();
        for z in [
            Rat2::from_ints(2, 0),
            Rat2::from_ints(0, 2),
            Rat2::from_ints(2, 2),
        ] {
            assert!(is_convexity_point(&t, &z), "{z:?} should be a convexity point");
        }
        let centroid = Rat2::new(Rat::new(4.into(), 3.into()), Rat::new(4.into(), 3.into()));
        assert!(!is_convexity_point(&t, &centroid));
    }

    #[test]
    fn symmetric_center_is_convexity_point() {
        let sq = ConvexPolygon::new(vec![
            Rat2::from_ints(0, 0),
            Rat2::from_ints(2, 0),
            Rat2::from_ints(2, 2),
            Rat2::from_ints(0, 2),
        ])
        .unwrap();
        assert!(is_convexity_point(&sq, &Rat2::from_ints(1, 1)));
        let rep = verify_independent_triple(&sq).unwrap();
        assert!(rep.symmetric);
        assert_eq!(rep.center, Some(Rat2::from_ints(1, 1)));
    }

    #[test]
    fn translation_covariance_and_involution() {
        let t = tri();
        let z = Rat2::from_ints(2, 0);
        let shift = Rat2::from_ints(-3, 11);
        assert_eq!(
            is_convexity_point(&t, &z),
            is_convexity_point(&t.translate(&shift), &(&z + &shift))
        );
        assert_eq!(
            is_convexity_point(&t, &z),
            is_convexity_point(&t.reflect(&z), &z)
        );
    }

    #[test]
    fn triangle_candidates() {
        let c = candidate_convexity_points(&tri()).unwrap();
        assert_eq!(c.len(), 3);
        let locs: Vec<&Rat2> = c.iter().map(|(p, _)| p).collect();
        for expect in [
            Rat2::from_ints(2, 0),
            Rat2::from_ints(0, 2),
            Rat2::from_ints(2, 2),
        ] {
            assert!(locs.contains(&&expect));
        }
    }

    #[test]
    fn independent_triple_on_triangle() {
        let rep = verify_independent_triple(&tri()).unwrap();
        assert!(!rep.symmetric);
        assert!(rep.verified.len() >= 3);
        let (a, b, c) = rep.affine_independent_triple.unwrap();
        assert_ne!(orient(&a, &b, &c), 0);
    }

    #[test]
    fn brute_force_hits_midpoints() {
        let t = tri();
        // Resolution 64 divides the bounding box evenly, so the midpoints
        // are themselves grid points.
        let pts = brute_force_convexity_points(&t, 64).unwrap();
        for expect in [
            Rat2::from_ints(2, 0),
            Rat2::from_ints(0, 2),
            Rat2::from_ints(2, 2),
        ] {
            assert!(pts.contains(&expect));
        }
        assert!(brute_force_convexity_points(&t, 8).is_err());
    }

    #[test]
    fn smooth_tolerance_mode() {
        // Off-center circle: the center of the circle is the only
        // convexity point.
        let f = FourierBody::new(1.0, vec![(1, 0.3, 0.1)]).unwrap();
        let body = SmoothBody::Fourier(f);
        assert!(is_convexity_point_smooth(&body, P2::new(0.3, 0.1), 1024, 1e-9));
        assert!(!is_convexity_point_smooth(&body, P2::new(0.8, 0.1), 1024, 1e-9));
    }
}
