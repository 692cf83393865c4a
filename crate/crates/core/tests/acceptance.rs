//! Acceptance gate: one pass/fail line per criterion, all criteria must
//! hold within their time budgets for the suite to pass.

use hedgehog_core::body::{smooth_by_arcs, Arc, Arcgon, Body, ConvexPolygon, FourierBody, SmoothBody};
use hedgehog_core::convexity::{is_convexity_point, verify_independent_triple};
use hedgehog_core::hedgehog::{
    clustered_hull_vertex_count, hedgehog_with_hull, middle_point, odd_support, odd_support_prime,
    smooth_hedgehog, CornerKind,
};
use hedgehog_core::perturb::{finalize_smooth, increase_hull_vertices, SMOOTH_CERT_SAMPLES};
use hedgehog_core::{Rat2, P2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

fn octagon() -> ConvexPolygon {
    let coords: [(f64, f64); 8] = [
        (6.8, 0.5),
        (10.66, 1.24),
        (12.7, 4.3),
        (12.9, 6.6),
        (8.24, 10.0),
        (1.8, 7.4),
        (1.04, 4.62),
        (2.54, 1.4),
    ];
    ConvexPolygon::new(coords.iter().map(|&(x, y)| Rat2::from_f64s(x, y)).collect()).unwrap()
}

fn triangle() -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Rat2::from_ints(0, 0),
        Rat2::from_ints(4, 0),
        Rat2::from_ints(0, 4),
    ])
    .unwrap()
}

/// Criterion 1: the reference octagon has 8 corners (1 weak, 7 strong) and
/// a 5-vertex hedgehog hull, all exact.
fn octagon_corner_census() -> Result<(), String> {
    let (m, hull, _) = hedgehog_with_hull(&octagon()).map_err(|e| e.to_string())?;
    if m.corners.len() != 8 {
        return Err(format!("expected 8 corners, got {}", m.corners.len()));
    }
    if m.weak_count() != 1 || m.strong_count() != 7 {
        return Err(format!(
            "expected 1 weak / 7 strong, got {} / {}",
            m.weak_count(),
            m.strong_count()
        ));
    }
    if hull.vertex_count() != 5 {
        return Err(format!("expected 5 hull vertices, got {}", hull.vertex_count()));
    }
    Ok(())
}

/// Criterion 2: the right triangle's hedgehog is its medial triangle; all
/// three corners are strong hull vertices, all three are convexity points,
/// and an affinely independent triple is reported.
fn triangle_medial_ground_truth() -> Result<(), String> {
    let tri = triangle();
    let (m, hull, exposed) = hedgehog_with_hull(&tri).map_err(|e| e.to_string())?;
    let expected = [
        Rat2::from_ints(2, 0),
        Rat2::from_ints(0, 2),
        Rat2::from_ints(2, 2),
    ];
    for want in &expected {
        if !m.corners.iter().any(|c| &c.location == want) {
            return Err(format!("missing corner at {want:?}"));
        }
    }
    if m.corners.len() != 3 || m.weak_count() != 0 {
        return Err("expected exactly 3 strong corners".into());
    }
    if hull.vertex_count() != 3 || exposed.len() != 3 {
        return Err("expected all 3 corners on the hull".into());
    }
    for c in &m.corners {
        if !is_convexity_point(&tri, &c.location) {
            return Err(format!("{:?} is not a convexity point", c.location));
        }
    }
    let report = verify_independent_triple(&tri).map_err(|e| e.to_string())?;
    if report.affine_independent_triple.is_none() {
        return Err("no affinely independent triple".into());
    }
    Ok(())
}

/// Seeded corpus of parallel-edge-free random convex polygons with 5..=15
/// vertices.
fn random_corpus(count: usize, seed: u64) -> Vec<ConvexPolygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(5..=15usize);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<Rat2> = angles
            .iter()
            .map(|&a| {
                let r: f64 = rng.gen_range(1.0..3.0);
                Rat2::from_f64s(r * a.cos(), r * a.sin())
            })
            .collect();
        let Ok(poly) = ConvexPolygon::from_points(&pts) else {
            continue;
        };
        if poly.len() < 5 || poly.len() > 15 || poly.has_parallel_edges() {
            continue;
        }
        out.push(poly);
    }
    out
}

/// Criteria 3 and 4 over a shared corpus: every hedgehog hull vertex is a
/// convexity point, and no weak corner is ever a hull vertex.
fn corpus_properties(corpus: &[ConvexPolygon]) -> (Result<(), String>, Result<(), String>) {
    let mut hull_convexity: Result<(), String> = Ok(());
    let mut weak_excluded: Result<(), String> = Ok(());
    for (idx, poly) in corpus.iter().enumerate() {
        let (m, _, exposed) = match hedgehog_with_hull(poly) {
            Ok(v) => v,
            Err(e) => {
                let msg = format!("polygon {idx}: {e}");
                hull_convexity = Err(msg.clone());
                weak_excluded = Err(msg);
                break;
            }
        };
        for &ci in &exposed {
            if hull_convexity.is_ok() && !is_convexity_point(poly, &m.corners[ci].location) {
                hull_convexity = Err(format!("polygon {idx}: hull corner {ci} fails"));
            }
            if weak_excluded.is_ok() && m.corners[ci].kind == CornerKind::Weak {
                weak_excluded = Err(format!("polygon {idx}: weak corner {ci} on hull"));
            }
        }
        if hull_convexity.is_err() && weak_excluded.is_err() {
            break;
        }
    }
    (hull_convexity, weak_excluded)
}

/// Criterion 6: smoothing the final polygon preserves the hull count under
/// the sampled certificate, with distances decreasing along the schedule.
fn smoothing_certificate(q: &ConvexPolygon, eps: f64) -> Result<(), String> {
    let body = Body::Polygon(triangle());
    let (sm, cert) = finalize_smooth(q, &body, eps, 0).map_err(|e| e.to_string())?;
    if cert.steps.len() < 2 {
        return Err("schedule evaluated fewer than two radii".into());
    }
    for w in cert.steps.windows(2) {
        if !(w[1].radius > w[0].radius) {
            return Err("radius schedule not increasing".into());
        }
        if !(w[1].delta < w[0].delta) {
            return Err(format!(
                "distance to the polygon did not decrease: {} -> {}",
                w[0].delta, w[1].delta
            ));
        }
    }
    let last = cert.steps.last().unwrap();
    if last.hedgehog_hull_count != cert.target_count || !last.containment_ok {
        return Err(format!(
            "accepted step count {} != exact count {}",
            last.hedgehog_hull_count, cert.target_count
        ));
    }
    // Independent recount from the returned body.
    let h = smooth_hedgehog(&sm, SMOOTH_CERT_SAMPLES).map_err(|e| e.to_string())?;
    let recount = clustered_hull_vertex_count(&h, 3).map_err(|e| e.to_string())?;
    if recount != cert.target_count {
        return Err(format!("recount {recount} != exact count {}", cert.target_count));
    }
    Ok(())
}

/// Criterion 7: smooth parametrization ground truths.
fn smooth_parametrization() -> Result<(), String> {
    // (a) A circle's middle hedgehog is its center.
    let c = P2::new(1.5, -0.7);
    let circle = SmoothBody::Arcgon(
        Arcgon::new(vec![
            Arc { center: c, radius: 2.0, from: 0.0, to: PI },
            Arc { center: c, radius: 2.0, from: PI, to: 2.0 * PI },
        ])
        .map_err(|e| e.to_string())?,
    );
    let h = smooth_hedgehog(&circle, 512).map_err(|e| e.to_string())?;
    for (phi, x) in &h.samples {
        if (x.x - c.x).abs() > 1e-12 || (x.y - c.y).abs() > 1e-12 {
            return Err(format!("circle hedgehog not constant at phi={phi}"));
        }
    }

    // (b) h = 1 + 0.1 cos 3phi: closed-form midpoint curve.
    let f = SmoothBody::Fourier(FourierBody::new(1.0, vec![(3, 0.1, 0.0)]).map_err(|e| e.to_string())?);
    for i in 0..512 {
        let phi = PI * i as f64 / 512.0;
        let (s, co) = phi.sin_cos();
        let (s3, c3) = (3.0 * phi).sin_cos();
        let want = P2::new(
            0.1 * c3 * co - 0.3 * s3 * (-s),
            0.1 * c3 * s - 0.3 * s3 * co,
        );
        let got = middle_point(&f, phi);
        if (got.x - want.x).abs() > 1e-12 || (got.y - want.y).abs() > 1e-12 {
            return Err(format!("fourier midpoint mismatch at phi={phi}"));
        }
    }

    // (c) Central finite differences of the odd support part match its
    // analytic derivative.
    let step = 1e-4;
    for i in 0..100 {
        let phi = PI * i as f64 / 100.0;
        let fd = (odd_support(&f, phi + step) - odd_support(&f, phi - step)) / (2.0 * step);
        if (fd - odd_support_prime(&f, phi)).abs() > 1e-6 {
            return Err(format!("derivative mismatch at phi={phi}"));
        }
    }
    Ok(())
}

/// Criterion 8: arc smoothings of a fixed polygon have hedgehogs converging
/// to the polygon's hedgehog as the radius grows.
fn smoothing_continuity() -> Result<(), String> {
    let poly = octagon();
    let diam = poly.diameter_f64();
    let m = hedgehog_with_hull(&poly).map_err(|e| e.to_string())?.0;
    let segments: Vec<(P2, P2)> = m
        .middle_sets
        .iter()
        .map(|ms| (ms.seg.a.to_p2(), ms.seg.b.to_p2()))
        .collect();
    let target: Vec<P2> = m.samples(64);
    let mut dists = Vec::new();
    for mult in [10.0, 40.0, 160.0, 640.0] {
        let sm = smooth_by_arcs(&poly, mult * diam).map_err(|e| e.to_string())?;
        // At large radii the smooth hedgehog crosses each straight stretch
        // within a sliver of normal directions, so uniform sampling in phi
        // would miss those traversals entirely. Sample densely inside each
        // elementary interval delimited by arc normal boundaries instead.
        let SmoothBody::Arcgon(ref arcgon) = sm else {
            return Err("expected an arc-gon smoothing".into());
        };
        let mut cuts: Vec<f64> = arcgon
            .arcs()
            .iter()
            .flat_map(|a| [a.from.rem_euclid(PI), a.to.rem_euclid(PI)])
            .collect();
        cuts.push(0.0);
        cuts.push(PI);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut pts: Vec<P2> = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi - lo < 1e-15 {
                continue;
            }
            for k in 0..2048 {
                let phi = lo + (hi - lo) * (k as f64 + 0.5) / 2048.0;
                pts.push(middle_point(&sm, phi));
            }
        }
        // Directed distances: smooth samples against the exact hedgehog
        // segments, and the sampled hedgehog against the smooth samples.
        let d1 = pts
            .iter()
            .map(|p| {
                segments
                    .iter()
                    .map(|&(a, b)| point_segment_dist(*p, a, b))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let d2 = target
            .iter()
            .map(|t| pts.iter().map(|p| t.dist(p)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        dists.push(d1.max(d2));
    }
    if dists.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(format!("distances not decreasing: {dists:?}"));
    }
    if !(dists[3] < 1e-3 * diam) {
        return Err(format!("final distance {} above 1e-3 * diam", dists[3]));
    }
    Ok(())
}

struct Line {
    name: &'static str,
    result: Result<(), String>,
    elapsed: Duration,
    budget: Duration,
}

fn check(name: &'static str, budget_s: f64, f: impl FnOnce() -> Result<(), String>) -> Line {
    let t = Instant::now();
    let result = f();
    Line {
        name,
        result,
        elapsed: t.elapsed(),
        budget: Duration::from_secs_f64(budget_s),
    }
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();

    lines.push(check("1 octagon-corner-census", 1.0, octagon_corner_census));
    lines.push(check("2 triangle-medial-ground-truth", 1.0, triangle_medial_ground_truth));

    let t = Instant::now();
    let corpus = random_corpus(1000, 20260823);
    let (c3, c4) = corpus_properties(&corpus);
    let both = t.elapsed();
    lines.push(Line {
        name: "3 hull-vertex-convexity (1000 random polygons)",
        result: c3,
        elapsed: both,
        budget: Duration::from_secs(120),
    });
    lines.push(Line {
        name: "4 weak-corner-exclusion (same corpus)",
        result: c4,
        elapsed: both,
        budget: Duration::from_secs(120),
    });

    // Criterion 5 produces the polygon criterion 6 consumes.
    let t = Instant::now();
    let body = Body::Polygon(triangle());
    let eps = 0.5;
    let run5 = increase_hull_vertices(&body, eps, 20, 7);
    let (final_poly, result5) = match run5 {
        Ok((q, trace)) => {
            let r = verify_perturbation(&body, eps, &trace);
            (Some(q), r)
        }
        Err(e) => (None, Err(e.to_string())),
    };
    lines.push(Line {
        name: "5 perturbation-monotonicity (target 20, eps 0.5)",
        result: result5,
        elapsed: t.elapsed(),
        budget: Duration::from_secs(30),
    });

    let line6 = match &final_poly {
        Some(q) => check("6 smoothing-certificate", 30.0, || smoothing_certificate(q, eps)),
        None => Line {
            name: "6 smoothing-certificate",
            result: Err("skipped: criterion 5 produced no polygon".into()),
            elapsed: Duration::ZERO,
            budget: Duration::from_secs(30),
        },
    };
    lines.push(line6);

    lines.push(check("7 smooth-parametrization", 5.0, smooth_parametrization));
    lines.push(check("8 smoothing-continuity", 10.0, smoothing_continuity));

    let mut all_ok = true;
    for l in &lines {
        let within = l.elapsed <= l.budget;
        let ok = l.result.is_ok() && within;
        all_ok &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        let detail = match &l.result {
            Ok(()) if !within => format!(" (over budget: {:.2?} > {:.2?})", l.elapsed, l.budget),
            Ok(()) => String::new(),
            Err(e) => format!(" ({e})"),
        };
        println!(
            "criterion {}: {verdict} [{:.2?} / budget {:.2?}]{detail}",
            l.name, l.elapsed, l.budget
        );
    }
    assert!(all_ok, "one or more acceptance criteria failed");
}

/// The trace checks for criterion 5, shared with `perturbation_monotonicity`.
fn verify_perturbation(
    body: &Body,
    _eps: f64,
    trace: &hedgehog_core::perturb::PerturbationTrace,
) -> Result<(), String> {
    let counts = trace.counts();
    if counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("counts not strictly increasing: {counts:?}"));
    }
    if counts.last().copied().unwrap_or(0) <= 20 {
        return Err(format!("final count not above 20: {counts:?}"));
    }
    if !trace.verify(body) {
        return Err("trace failed re-verification".into());
    }
    for (i, step) in trace.steps.iter().enumerate() {
        let Some(cut) = &step.cut else { continue };
        // The cut's corner pair lives on the exact post-cut polygon; the
        // carried polygon may be a re-verified snapped version of it.
        let poly_check = step.polygon_after_cut.as_ref().unwrap_or(&step.polygon);
        let (m, _, exposed) =
            hedgehog_with_hull(poly_check).map_err(|e| format!("step {i}: {e}"))?;
        let find = |loc: &Rat2| m.corners.iter().position(|c| &c.location == loc);
        let (yi, zi) = match (find(&cut.y), find(&cut.z)) {
            (Some(a), Some(b)) if a != b => (a, b),
            _ => return Err(format!("step {i}: y/z not distinct corners")),
        };
        if !exposed.contains(&yi) || !exposed.contains(&zi) {
            return Err(format!("step {i}: y/z not hull vertices"));
        }
        if m.corners[yi].kind != CornerKind::Strong || m.corners[zi].kind != CornerKind::Strong {
            return Err(format!("step {i}: y/z not strong corners"));
        }
        let dz = &cut.z - &cut.y;
        if dz.dot(&cut.support_normal) != Rat2::from_ints(0, 0).x {
            return Err(format!("step {i}: z - y not parallel to the support line"));
        }
    }
    Ok(())
}

/// Euclidean distance from a point to a closed segment.
fn point_segment_dist(p: P2, a: P2, b: P2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    p.dist(&P2::new(a.x + t * dx, a.y + t * dy))
}
