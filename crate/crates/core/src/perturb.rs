//! Constructive perturbation engine: cut an opposite vertex pair of a
//! polygon to strictly increase the number of hull vertices of its middle
//! hedgehog, iterate past a target, then smooth by circular arcs while
//! certifying that the hull vertex count is preserved.
//!
//! Every accepted step is machine-verified: exact containments, exact
//! normal-order checks, exact opposite-pair and hull-vertex certificates.
//! The search schedules only decide *which* parameters to try; they never
//! decide correctness.

use crate::body::{
    sandwich_polygon_with, smooth_by_arcs, verify_sandwich, Body, ConvexPolygon, SmoothBody,
};
use crate::hedgehog::{
    clustered_hull_vertex_count, hedgehog_with_hull, hull_vertex_count, smooth_hedgehog,
    CornerKind, PolygonHedgehog,
};
use crate::kernel::{
    line_intersection, rat_from_f64, Rat, Rat2, P2,
};
use crate::GeoError;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::f64::consts::PI;

/// The chosen hedgehog hull vertex together with a support line touching
/// the hull only there. The line is `{ y : <y, normal> = <x, normal> }`.
#[derive(Clone, Debug)]
pub struct CutTarget {
    /// Index of the corner in the hedgehog's corner list.
    pub corner_index: usize,
    /// The corner location `x`.
    pub x: Rat2,
    /// Outward normal of the strictly supporting line `S`.
    pub support_normal: Rat2,
}

/// Full parameter bundle of one verified cut. All vectors are relative to
/// the vertices they displace: the cut replaces `p` by `p + lambda t_1`,
/// `p + lambda t_2` and `q` by `q + lambda s_1`, `q + lambda s_2`.
#[derive(Clone, Debug)]
pub struct CutConstruction {
    /// Corner being split, `x = (p + q)/2`.
    pub corner: Rat2,
    /// Normal of the support line `S` at the corner.
    pub support_normal: Rat2,
    pub p_index: usize,
    pub q_index: usize,
    pub p: Rat2,
    pub q: Rat2,
    /// Flanking edge with endpoint `p`.
    pub edge_i: usize,
    /// Flanking edge with endpoint `q`.
    pub edge_i1: usize,
    /// The other polygon edge at `p`.
    pub edge_j: usize,
    /// The other polygon edge at `q`.
    pub edge_m: usize,
    pub s: Rat2,
    pub s1: Rat2,
    pub s2: Rat2,
    pub t: Rat2,
    pub t1: Rat2,
    pub t2: Rat2,
    pub tau: Rat,
    pub sigma: Rat,
    pub lambda: Rat,
    /// The separating line near `q` is
    /// `{ y : <y, n_i> = <q, n_i> + lq_offset }` with `n_i` the outer
    /// normal of `edge_i`.
    pub lq_offset: Rat,
    /// Normal angle of the new cut edge at `q`, for reporting.
    pub psi_q: f64,
    /// Normal angle of the new cut edge at `p`, for reporting.
    pub psi_p: f64,
    /// New corner `x + lambda (s_1 + t_2)/2`.
    pub y: Rat2,
    /// New corner `x + lambda (s_2 + t_1)/2`; `z - y` is parallel to `S`.
    pub z: Rat2,
}

/// One recorded perturbation step.
#[derive(Clone, Debug)]
pub struct TraceStep {
    /// The cut that produced this step; `None` for the initial polygon.
    pub cut: Option<CutConstruction>,
    /// Exact output of `apply_cut` before coordinate snapping, kept for
    /// bit-exact replay.
    pub polygon_after_cut: Option<ConvexPolygon>,
    /// The polygon carried into the next step (snapped when possible).
    pub polygon: ConvexPolygon,
    /// Hedgehog hull vertex count of `polygon`.
    pub hull_count: usize,
    pub snapped: bool,
}

/// The full run: strictly increasing hull vertex counts with containment
/// certificates re-checkable from the stored polygons.
#[derive(Clone, Debug)]
pub struct PerturbationTrace {
    pub eps: f64,
    pub steps: Vec<TraceStep>,
}

impl PerturbationTrace {
    pub fn counts(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.hull_count).collect()
    }

    /// Re-verify the whole trace against the inner body: sandwich
    /// conditions for every polygon, strictly increasing counts, and
    /// bit-exact replay of every recorded cut.
    pub fn verify(&self, k: &Body) -> bool {
        let counts = self.counts();
        if counts.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        for (idx, step) in self.steps.iter().enumerate() {
            if !verify_sandwich(k, &step.polygon, self.eps) {
                return false;
            }
            if !matches!(hull_vertex_count(&step.polygon), Ok(c) if c == step.hull_count) {
                return false;
            }
            if let (Some(cut), Some(after)) = (&step.cut, &step.polygon_after_cut) {
                let prev = &self.steps[idx - 1].polygon;
                match apply_cut(prev, cut) {
                    Ok(replayed) => {
                        if &replayed != after {
                            return false;
                        }
                    }
                    Err(_) => return false,
                }
            }
        }
        true
    }
}

/// Pick a hull vertex of the middle hedgehog together with a strictly
/// supporting line. The normal is the sum of the outer normals of the two
/// hull edges meeting there, which lies strictly inside the vertex's
/// normal cone.
pub fn select_cut_target(p: &ConvexPolygon) -> Result<CutTarget, GeoError> {
    select_cut_target_at(p, 0)
}

/// Like [`select_cut_target`] but picks the exposed corner at position
/// `which` (mod the number of exposed corners). Rotating the choice spreads
/// successive cuts around the hull instead of repeatedly subdividing the
/// same normal gap.
pub fn select_cut_target_at(p: &ConvexPolygon, which: usize) -> Result<CutTarget, GeoError> {
    if p.symmetry_center().is_some() {
        return Err(GeoError::Precondition(
            "polygon is centrally symmetric; its hedgehog is a single point".into(),
        ));
    }
    if p.has_long_edge() {
        return Err(GeoError::Precondition("polygon has a long edge".into()));
    }
    let (m, hull, exposed) = hedgehog_with_hull(p)?;
    let hp = hull.as_polygon().ok_or_else(|| {
        GeoError::InternalInvariant("hedgehog hull of an asymmetric polygon degenerated".into())
    })?;
    if exposed.is_empty() {
        return Err(GeoError::InternalInvariant(
            "hedgehog hull has no exposed corner".into(),
        ));
    }
    let corner_index = exposed[which % exposed.len()];
    let x = m.corners[corner_index].location.clone();
    let verts = hp.vertices();
    let n = verts.len();
    let pos = verts
        .iter()
        .position(|v| v == &x)
        .ok_or_else(|| GeoError::InternalInvariant("exposed corner missing from hull".into()))?;
    let edge_normal = |i: usize| -> Rat2 {
        let d = &verts[(i + 1) % n] - &verts[i];
        Rat2::new(d.y.clone(), -d.x)
    };
    let support_normal = &edge_normal((pos + n - 1) % n) + &edge_normal(pos);

    // The line must support the hull at x alone.
    let level = x.dot(&support_normal);
    for v in verts {
        if v != &x && v.dot(&support_normal) >= level {
            return Err(GeoError::InternalInvariant(
                "support line is not strict at the chosen corner".into(),
            ));
        }
    }
    Ok(CutTarget {
        corner_index,
        x,
        support_normal,
    })
}

/// Membership in the open normal gap between two consecutive fan
/// directions `a` and `b` (both half-turn reduced, `x > 0`). When the gap
/// wraps across the vertical axis (`b` is the cyclically first entry), the
/// gap is the union of the ranges after `a` and before `b`.
fn in_fan_gap(a: &Rat2, b: &Rat2, d: &Rat2, wraps: bool) -> bool {
    if wraps {
        a.cross(d).is_positive() || d.cross(b).is_positive()
    } else {
        a.cross(d).is_positive() && d.cross(b).is_positive()
    }
}

/// Strict order of two directions inside the same fan gap: `true` when `u`
/// comes before `v` walking the gap from `a` to `b`.
fn gap_before(a: &Rat2, u: &Rat2, v: &Rat2, wraps: bool) -> bool {
    if wraps {
        // Directions after `a` (upper range) precede directions before `b`.
        let u_upper = a.cross(u).is_positive();
        let v_upper = a.cross(v).is_positive();
        match (u_upper, v_upper) {
            (true, false) => true,
            (false, true) => false,
            _ => u.cross(v).is_positive(),
        }
    } else {
        u.cross(v).is_positive()
    }
}

/// Search schedules for `build_cut`. Values are exact rationals; the
/// outer loops shrink the separating-line offset and the cut extents, the
/// inner loop halves the shrinking factor `lambda`.
const MU_SCHEDULE: [(i64, i64); 5] = [(1, 4), (1, 16), (1, 64), (1, 256), (1, 1024)];
const TAU_SCHEDULE: [(i64, i64); 3] = [(7, 8), (3, 4), (1, 2)];
const SIGMA_FRAC_SCHEDULE: [(i64, i64); 6] = [(1, 16), (1, 4), (1, 2), (3, 4), (1, 64), (1, 256)];
const MAX_LAMBDA_HALVINGS: u32 = 12;

/// Build a verified cut at the selected corner. Both role assignments of
/// the opposite vertex pair are tried; for each, separating-line and
/// extent schedules run until every exact certificate passes.
pub fn build_cut(
    poly: &ConvexPolygon,
    target: &CutTarget,
    k: &Body,
    eps: f64,
) -> Result<CutConstruction, GeoError> {
    build_cut_checked(poly, target, k, eps, false)
}

/// Like [`build_cut`], optionally also requiring the resolution guard: the
/// modified hull region must stay countable by the sampled smooth-hedgehog
/// certificate (wide enough normal gaps, spatially separated corners).
pub fn build_cut_checked(
    poly: &ConvexPolygon,
    target: &CutTarget,
    k: &Body,
    eps: f64,
    guard: bool,
) -> Result<CutConstruction, GeoError> {
    let (m, hull, _) = hedgehog_with_hull(poly)?;
    let old_count = hull.vertex_count();
    let poly_f: Vec<P2> = poly.vertices().iter().map(|v| v.to_p2()).collect();
    let old_float_count = float_screen_count(&poly_f);
    let corner = &m.corners[target.corner_index];
    if corner.location != target.x {
        return Err(GeoError::Precondition(
            "cut target does not match the polygon's hedgehog".into(),
        ));
    }
    let (pa, pb) = corner.opposite_pair;
    for (p_idx, q_idx) in [(pa, pb), (pb, pa)] {
        if let Some(cut) = try_role(
            poly,
            &m,
            old_count,
            target,
            k,
            eps,
            p_idx,
            q_idx,
            corner.between,
            old_float_count,
            guard,
        ) {
            return Ok(cut);
        }
    }
    Err(GeoError::SearchExhausted(format!(
        "no verified cut at corner {:?} after the full schedule",
        target.x
    )))
}

/// Attempt the construction with `p` at `p_idx` and `q` at `q_idx`.
#[allow(clippy::too_many_arguments)]
fn try_role(
    poly: &ConvexPolygon,
    m: &crate::hedgehog::PolygonHedgehog,
    old_count: usize,
    target: &CutTarget,
    k: &Body,
    eps: f64,
    p_idx: usize,
    q_idx: usize,
    between: (usize, usize),
    old_float_count: usize,
    guard: bool,
) -> Option<CutConstruction> {
    let n = poly.len();
    let fan = &m.fan;
    let edge_a = fan.entries[between.0].edge;
    let edge_b = fan.entries[between.1].edge;
    let endpoints = |e: usize| [e % n, (e + 1) % n];

    // The flank with endpoint p is E_i; the other flank must have q.
    let p_on_a = endpoints(edge_a).contains(&p_idx);
    let p_on_b = endpoints(edge_b).contains(&p_idx);
    let (edge_i, edge_i1) = match (p_on_a, p_on_b) {
        (true, false) => (edge_a, edge_b),
        (false, true) => (edge_b, edge_a),
        _ => return None,
    };
    if !endpoints(edge_i1).contains(&q_idx) {
        return None;
    }
    // q must be the vertex opposite E_i: the unique minimizer of <., n_i>.
    let n_i = poly.outer_normal(edge_i);
    if !matches!(poly.support_vertex(&-&n_i), Ok(v) if v == q_idx) {
        return None;
    }

    let other_edge_at = |v: usize, not: usize| -> usize {
        let e1 = (v + n - 1) % n;
        let e2 = v;
        if e1 == not {
            e2
        } else {
            e1
        }
    };
    let edge_j = other_edge_at(p_idx, edge_i);
    let edge_m = other_edge_at(q_idx, edge_i1);

    let p = poly.vertex(p_idx).clone();
    let q = poly.vertex(q_idx).clone();
    let other_end = |e: usize, v: usize| -> Rat2 {
        let [a, b] = endpoints(e);
        if a == v {
            poly.vertex(b).clone()
        } else {
            poly.vertex(a).clone()
        }
    };
    let q_far = other_end(edge_i1, q_idx); // far endpoint of E_{i+1}
    let q_m = other_end(edge_m, q_idx); // far endpoint of E_m
    let p_j = other_end(edge_j, p_idx); // far endpoint of E_j

    // Height gap above q in the n_i direction: L_q must stay below every
    // other vertex.
    let base = q.dot(&n_i);
    let gap = (0..n)
        .filter(|&v| v != q_idx)
        .map(|v| poly.vertex(v).dot(&n_i) - &base)
        .min()?;
    if !gap.is_positive() {
        return None;
    }

    let d_s = target.support_normal.rot90();
    let d_j = &p_j - &p;

    for (mu_n, mu_d) in MU_SCHEDULE {
        let offset = &gap * Rat::new(mu_n.into(), mu_d.into());
        // A point on L_q and its direction (parallel to E_i).
        let lq_point = &q + &n_i.scale(&(&offset / n_i.norm2()));
        let lq_dir = n_i.rot90();
        let lq_b = &lq_point + &lq_dir;

        let s_abs = line_intersection(&lq_point, &lq_b, &q, &q_far)?;
        let s = &s_abs - &q;
        if !poly.edge(edge_i1).contains_strict(&s_abs) {
            continue;
        }
        let s1_abs = line_intersection(&lq_point, &lq_b, &q, &q_m)?;
        let s1 = &s1_abs - &q;
        if !poly.edge(edge_m).contains_strict(&s1_abs) {
            continue;
        }
        let t = &s - &s1;
        if !poly.edge(edge_i).contains_strict(&(&p + &t)) {
            continue;
        }

        // Largest sigma keeping q + sigma s on E_{i+1}.
        let edge_vec = &q_far - &q;
        let frac = s.dot(&edge_vec) / edge_vec.norm2();
        if !frac.is_positive() || frac >= Rat::one() {
            continue;
        }
        let sigma_max = Rat::one() / &frac;

        for (tau_n, tau_d) in TAU_SCHEDULE {
            let tau = Rat::new(tau_n.into(), tau_d.into());
            let t2 = t.scale(&tau);
            if !poly.edge(edge_i).contains_strict(&(&p + &t2)) {
                continue;
            }

            for (sg_n, sg_d) in SIGMA_FRAC_SCHEDULE {
                let sigma =
                    Rat::one() + (&sigma_max - Rat::one()) * Rat::new(sg_n.into(), sg_d.into());
                let s2 = s.scale(&sigma);
                if !poly.edge(edge_i1).contains_strict(&(&q + &s2)) {
                    continue;
                }

                // t_1 from the intersection of the S-parallel line through
                // q + s_1 + t_2 with the E_j-parallel line through q + s_2.
                let a1 = &(&q + &s1) + &t2;
                let a2 = &a1 + &d_s;
                let b1 = &q + &s2;
                let b2 = &b1 + &d_j;
                let inter = match line_intersection(&a1, &a2, &b1, &b2) {
                    Some(x) => x,
                    None => continue,
                };
                let t1 = &inter - &b1;
                if !poly.edge(edge_j).contains_strict(&(&p + &t1)) {
                    continue;
                }
                // The two new corners must differ.
                let yv = &s1 + &t2;
                let zv = &s2 + &t1;
                if yv == zv {
                    continue;
                }
                debug_assert!((&zv - &yv).cross(&d_s).is_zero());

                // Exact normal-order certificate: both cut-edge normals sit
                // strictly inside the fan gap, the q-cut next to the fan
                // direction of the edge at p.
                let reduce = |v: &Rat2| -> Option<Rat2> {
                    let r = fan.rotation.apply(v);
                    if r.x.is_zero() {
                        None
                    } else if r.x.is_positive() {
                        Some(r)
                    } else {
                        Some(-&r)
                    }
                };
                let nq_cut = reduce(&(&s2 - &s1).rot90())?;
                let np_cut = reduce(&(&t2 - &t1).rot90())?;
                let dir_a = &fan.entries[between.0].dir;
                let dir_b = &fan.entries[between.1].dir;
                let wraps = between.1 == 0;
                if !in_fan_gap(dir_a, dir_b, &nq_cut, wraps)
                    || !in_fan_gap(dir_a, dir_b, &np_cut, wraps)
                {
                    continue;
                }
                let p_flank_first = edge_i == edge_a;
                let order_ok = if p_flank_first {
                    gap_before(dir_a, &nq_cut, &np_cut, wraps)
                } else {
                    gap_before(dir_a, &np_cut, &nq_cut, wraps)
                };
                if !order_ok {
                    continue;
                }
                let angle = |d: &Rat2| d.to_p2().y.atan2(d.to_p2().x);
                let psi_q = angle(&nq_cut) + fan.rotation.inverse().angle();
                let psi_p = angle(&np_cut) + fan.rotation.inverse().angle();

                // Shrink lambda until every certificate passes.
                let mut lambda = Rat::one();
                let half = Rat::new(1.into(), 2.into());
                for step in 0..=MAX_LAMBDA_HALVINGS {
                    let cut = CutConstruction {
                        corner: target.x.clone(),
                        support_normal: target.support_normal.clone(),
                        p_index: p_idx,
                        q_index: q_idx,
                        p: p.clone(),
                        q: q.clone(),
                        edge_i,
                        edge_i1,
                        edge_j,
                        edge_m,
                        s: s.clone(),
                        s1: s1.clone(),
                        s2: s2.clone(),
                        t: t.clone(),
                        t1: t1.clone(),
                        t2: t2.clone(),
                        tau: tau.clone(),
                        sigma: sigma.clone(),
                        lambda: lambda.clone(),
                        lq_offset: offset.clone(),
                        psi_q,
                        psi_p,
                        y: &target.x + &yv.scale(&(&lambda * &half)),
                        z: &target.x + &zv.scale(&(&lambda * &half)),
                    };
                    match certify_cut(poly, &cut, k, eps, old_count, old_float_count, guard) {
                        CutCheck::Accept if step > 0 => return Some(cut),
                        CutCheck::Accept | CutCheck::Retry => {
                            lambda *= &half;
                        }
                        CutCheck::Abandon => break,
                    }
                }
            }
        }
    }
    None
}

/// Whether the exposed hedgehog hull corners are resolvable by the sampled
/// count certificate: every exposed corner keeps a normal gap wider than
/// the clustering window at `SMOOTH_CERT_SAMPLES`, and consecutive hull
/// corners stay spatially separated well above the collinearity-pruning
/// tolerance.
fn hull_corners_resolvable(m: &PolygonHedgehog, exposed: &[usize], diam: f64) -> bool {
    hull_corners_resolvable_at(m, exposed, diam, 0..exposed.len())
}

/// Resolution check restricted to the given positions in the exposed-corner
/// cycle (the gap of each listed corner and its distance to the next one).
fn hull_corners_resolvable_at(
    m: &PolygonHedgehog,
    exposed: &[usize],
    diam: f64,
    positions: impl IntoIterator<Item = usize>,
) -> bool {
    let gap_min = 4.0 * PI / SMOOTH_CERT_SAMPLES as f64;
    let dist_min = 5e-7 * diam;
    let nfan = m.fan.len();
    positions.into_iter().all(|w| {
        let c = &m.corners[exposed[w % exposed.len()]];
        let a0 = m.fan.entries[c.between.0].angle;
        let a1 = m.fan.entries[c.between.1 % nfan].angle;
        if (a1 - a0).rem_euclid(PI) < gap_min {
            return false;
        }
        let next = &m.corners[exposed[(w + 1) % exposed.len()]];
        c.location.to_p2().dist(&next.location.to_p2()) >= dist_min
    })
}

enum CutCheck {
    Accept,
    /// Fails for this lambda but smaller lambda can still succeed.
    Retry,
    /// Fails for reasons independent of lambda (edge directions).
    Abandon,
}

/// Splice the four replacement points of a cut into a floating-point copy
/// of the polygon, in boundary order. Returns `None` when the result is
/// not strictly convex within float noise.
fn splice_float(poly: &ConvexPolygon, cut: &CutConstruction) -> Option<Vec<P2>> {
    let n = poly.len();
    let p_t1 = (&cut.p + &cut.t1.scale(&cut.lambda)).to_p2();
    let p_t2 = (&cut.p + &cut.t2.scale(&cut.lambda)).to_p2();
    let q_s1 = (&cut.q + &cut.s1.scale(&cut.lambda)).to_p2();
    let q_s2 = (&cut.q + &cut.s2.scale(&cut.lambda)).to_p2();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        if i == cut.p_index {
            // The replacement on the incoming edge comes first; `t2` moves
            // along `edge_i`, `t1` along the other edge at `p`.
            if cut.edge_i == (cut.p_index + n - 1) % n {
                out.push(p_t2);
                out.push(p_t1);
            } else {
                out.push(p_t1);
                out.push(p_t2);
            }
        } else if i == cut.q_index {
            // `s2` moves along `edge_i1`, `s1` along the other edge at `q`.
            if cut.edge_i1 == (cut.q_index + n - 1) % n {
                out.push(q_s2);
                out.push(q_s1);
            } else {
                out.push(q_s1);
                out.push(q_s2);
            }
        } else {
            out.push(poly.vertex(i).to_p2());
        }
    }
    let m = out.len();
    let scale = out
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(1e-300, f64::max);
    let tol = 1e-13 * scale * scale;
    for i in 0..m {
        let o = out[i];
        let a = out[(i + 1) % m];
        let b = out[(i + 2) % m];
        if (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x) <= tol {
            return None;
        }
    }
    Some(out)
}

/// Approximate middle-hedgehog corner locations of a float polygon: one
/// corner per gap between consecutive half-turn-reduced edge normals, at
/// the midpoint of the supports in the bisecting direction.
fn float_hedgehog_corners(verts: &[P2]) -> Vec<P2> {
    let n = verts.len();
    let mut ang: Vec<f64> = (0..n)
        .map(|i| {
            let dx = verts[(i + 1) % n].x - verts[i].x;
            let dy = verts[(i + 1) % n].y - verts[i].y;
            // Outer normal (dy, -dx), reduced modulo a half turn.
            (-dx).atan2(dy).rem_euclid(PI)
        })
        .collect();
    ang.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let support = |sx: f64, sy: f64| -> P2 {
        let mut best = verts[0];
        let mut bv = f64::NEG_INFINITY;
        for v in verts {
            let d = v.x * sx + v.y * sy;
            if d > bv {
                bv = d;
                best = *v;
            }
        }
        best
    };
    (0..n)
        .map(|w| {
            let a = ang[w];
            let b = if w + 1 < n { ang[w + 1] } else { ang[0] + PI };
            let mid = (a + b) / 2.0;
            let (sx, sy) = (mid.cos(), mid.sin());
            let p = support(sx, sy);
            let q = support(-sx, -sy);
            P2::new((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)
        })
        .collect()
}

/// Hull vertex count of float points, dropping turns below float noise.
fn float_hull_count(pts: &[P2]) -> usize {
    let scale = pts
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(1e-300, f64::max);
    let tol = 1e-13 * scale * scale;
    let mut s: Vec<P2> = pts.to_vec();
    s.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
    });
    fn chain<'a>(pts: impl Iterator<Item = &'a P2>, tol: f64) -> Vec<P2> {
        let mut out: Vec<P2> = Vec::new();
        for p in pts {
            while out.len() >= 2 {
                let o = out[out.len() - 2];
                let a = out[out.len() - 1];
                if (a.x - o.x) * (p.y - o.y) - (a.y - o.y) * (p.x - o.x) <= tol {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(*p);
        }
        out
    }
    let lower = chain(s.iter(), tol);
    let upper = chain(s.iter().rev(), tol);
    (lower.len() + upper.len()).saturating_sub(2).max(1)
}

/// Float screening count for a polygon: the hull vertex count of its
/// approximate hedgehog corners, with the same systematic bias for the old
/// and the new polygon so the increase comparison stays meaningful.
fn float_screen_count(verts: &[P2]) -> usize {
    float_hull_count(&float_hedgehog_corners(verts))
}

/// Run the full certificate battery for one candidate cut.
fn certify_cut(
    poly: &ConvexPolygon,
    cut: &CutConstruction,
    k: &Body,
    eps: f64,
    old_count: usize,
    old_float_count: usize,
    guard: bool,
) -> CutCheck {
    // Floating-point screen: most candidates visibly fail to increase the
    // hull vertex count; reject those before any exact arithmetic. The
    // comparison uses the float count of the current polygon computed by
    // the same approximate pipeline, so systematic bias cancels.
    match splice_float(poly, cut) {
        None => return CutCheck::Retry,
        Some(fl) => {
            if float_screen_count(&fl) <= old_float_count {
                return CutCheck::Retry;
            }
        }
    }
    let new_poly = match apply_cut(poly, cut) {
        Ok(p) => p,
        // Degenerate or parallel edge directions do not move with lambda.
        Err(GeoError::ParallelEdges) => return CutCheck::Abandon,
        Err(_) => return CutCheck::Retry,
    };
    if new_poly.has_long_edge() || new_poly.symmetry_center().is_some() {
        return CutCheck::Abandon;
    }
    // Edges far below the floating-point resolution of the coordinates
    // cannot survive the later smoothing and sampling stages; shrinking
    // lambda only shortens them further.
    let verts_f: Vec<_> = new_poly.vertices().iter().map(|v| v.to_p2()).collect();
    let min_edge = (0..verts_f.len())
        .map(|i| verts_f[i].dist(&verts_f[(i + 1) % verts_f.len()]))
        .fold(f64::INFINITY, f64::min);
    if min_edge < 1e-7 * new_poly.diameter_f64() {
        return CutCheck::Abandon;
    }
    let (m2, hull2, exposed2) = match hedgehog_with_hull(&new_poly) {
        Ok(v) => v,
        Err(_) => return CutCheck::Retry,
    };
    if hull2.vertex_count() <= old_count {
        return CutCheck::Retry;
    }
    // The two new corners must appear as distinct strong corners that are
    // hull vertices.
    let find = |loc: &Rat2| -> Option<usize> {
        m2.corners.iter().position(|c| &c.location == loc)
    };
    let (yi, zi) = match (find(&cut.y), find(&cut.z)) {
        (Some(a), Some(b)) if a != b => (a, b),
        _ => return CutCheck::Retry,
    };
    if m2.corners[yi].kind != CornerKind::Strong || m2.corners[zi].kind != CornerKind::Strong {
        return CutCheck::Retry;
    }
    if !exposed2.contains(&yi) || !exposed2.contains(&zi) {
        return CutCheck::Retry;
    }
    // Optional resolution guard on the modified region: the two new
    // corners and their exposed neighbors (a cut can move a neighbor's gap
    // delimiter). Both guarded quantities degrade as lambda shrinks, so a
    // failure abandons this parameter combination.
    if guard {
        let wy = exposed2.iter().position(|&e| e == yi).unwrap();
        let wz = exposed2.iter().position(|&e| e == zi).unwrap();
        let ne = exposed2.len();
        let local = [
            (wy + ne - 1) % ne,
            wy,
            (wy + 1) % ne,
            (wz + ne - 1) % ne,
            wz,
            (wz + 1) % ne,
        ];
        if !hull_corners_resolvable_at(&m2, &exposed2, new_poly.diameter_f64(), local) {
            return CutCheck::Abandon;
        }
    }
    // Opposite-pair certificates for the four replacement vertices.
    let locate = |pt: &Rat2| new_poly.vertices().iter().position(|v| v == pt);
    let p_t2 = &cut.p + &cut.t2.scale(&cut.lambda);
    let q_s1 = &cut.q + &cut.s1.scale(&cut.lambda);
    let p_t1 = &cut.p + &cut.t1.scale(&cut.lambda);
    let q_s2 = &cut.q + &cut.s2.scale(&cut.lambda);
    match (locate(&p_t2), locate(&q_s1), locate(&p_t1), locate(&q_s2)) {
        (Some(a), Some(b), Some(c), Some(d)) => {
            if !new_poly.opposite_vertices(a, b) || !new_poly.opposite_vertices(c, d) {
                return CutCheck::Retry;
            }
        }
        _ => return CutCheck::Retry,
    }
    // The sandwich containments rarely fail a candidate that got this
    // far, so they run last.
    if !verify_sandwich(k, &new_poly, eps) {
        return CutCheck::Retry;
    }
    CutCheck::Accept
}

/// Apply a cut: the convex hull of the four replacement points and the
/// remaining vertices. Pure in its inputs, so recorded cuts replay to
/// bit-identical polygons.
pub fn apply_cut(poly: &ConvexPolygon, cut: &CutConstruction) -> Result<ConvexPolygon, GeoError> {
    let mut pts: Vec<Rat2> = Vec::with_capacity(poly.len() + 2);
    for (i, v) in poly.vertices().iter().enumerate() {
        if i != cut.p_index && i != cut.q_index {
            pts.push(v.clone());
        }
    }
    let news = [
        &cut.p + &cut.t1.scale(&cut.lambda),
        &cut.p + &cut.t2.scale(&cut.lambda),
        &cut.q + &cut.s1.scale(&cut.lambda),
        &cut.q + &cut.s2.scale(&cut.lambda),
    ];
    pts.extend(news.iter().cloned());
    let out = ConvexPolygon::from_points(&pts)?;
    if out.len() != poly.len() + 2 {
        return Err(GeoError::InternalInvariant(format!(
            "cut produced {} vertices, expected {}",
            out.len(),
            poly.len() + 2
        )));
    }
    for nv in &news {
        if !out.vertices().contains(nv) {
            return Err(GeoError::InternalInvariant(
                "replacement point is not a vertex of the cut polygon".into(),
            ));
        }
    }
    if out.has_parallel_edges() {
        return Err(GeoError::ParallelEdges);
    }
    Ok(out)
}

/// Round every coordinate to the nearest multiple of `2^-bits`. Returns
/// `None` when rounding collapses the polygon.
pub fn snap_dyadic(poly: &ConvexPolygon, bits: u32) -> Option<ConvexPolygon> {
    let scale = Rat::from_integer(BigInt::one() << bits);
    let half = Rat::new(1.into(), 2.into());
    let snap = |r: &Rat| -> Rat { (r * &scale + &half).floor() / &scale };
    let verts: Vec<Rat2> = poly
        .vertices()
        .iter()
        .map(|v| Rat2::new(snap(&v.x), snap(&v.y)))
        .collect();
    ConvexPolygon::new(verts).ok()
}

/// Snap with verification: the snapped polygon must keep the vertex count,
/// the sandwich conditions and the exact hedgehog hull count. Falls back to
/// the unsnapped polygon when no precision level verifies.
fn snap_verified(
    poly: &ConvexPolygon,
    k: &Body,
    eps: f64,
    count: usize,
) -> (ConvexPolygon, bool) {
    for bits in [48u32, 64, 96, 128] {
        if let Some(s) = snap_dyadic(poly, bits) {
            if s.len() == poly.len()
                && verify_sandwich(k, &s, eps)
                && matches!(hull_vertex_count(&s), Ok(c) if c == count)
            {
                return (s, true);
            }
        }
    }
    (poly.clone(), false)
}

/// Drive the hedgehog hull vertex count of a polygon sandwiched around `k`
/// above `target`, one verified cut at a time.
pub fn increase_hull_vertices(
    k: &Body,
    eps: f64,
    target: usize,
    seed: u64,
) -> Result<(ConvexPolygon, PerturbationTrace), GeoError> {
    if !(eps > 0.0) {
        return Err(GeoError::Precondition("epsilon must be positive".into()));
    }
    if k.symmetry_center_f64().is_some() {
        return Err(GeoError::Precondition(
            "body is centrally symmetric; its middle hedgehog is a point".into(),
        ));
    }
    // Denser starting polygons carry more hedgehog hull vertices, so high
    // targets need fewer cuts. The start must itself pass the resolution
    // guard that every later cut maintains.
    let min_dirs = 16.max(3 * target);
    let mut current = sandwich_polygon_with(k, eps, seed, min_dirs)?;
    let mut start_ok = {
        let (m0, _h0, e0) = hedgehog_with_hull(&current)?;
        hull_corners_resolvable(&m0, &e0, current.diameter_f64())
    };
    let fallback = current.clone();
    for attempt in 1..8u64 {
        if start_ok {
            break;
        }
        current = sandwich_polygon_with(k, eps, seed.wrapping_add(attempt), min_dirs)?;
        let (m0, _h0, e0) = hedgehog_with_hull(&current)?;
        start_ok = hull_corners_resolvable(&m0, &e0, current.diameter_f64());
    }
    if !start_ok {
        // No fully resolvable start; proceed with the seeded one and let
        // the later certificates judge the outcome.
        current = fallback;
    }
    let mut count = hull_vertex_count(&current)?;
    // Snapping the start polygon keeps the rational coordinates small for
    // the whole first round of cut candidates.
    let (snapped_start, _) = snap_verified(&current, k, eps, count);
    current = snapped_start;
    let mut trace = PerturbationTrace {
        eps,
        steps: vec![TraceStep {
            cut: None,
            polygon_after_cut: None,
            polygon: current.clone(),
            hull_count: count,
            snapped: false,
        }],
    };

    let max_cuts = target + 32;
    while count <= target {
        if trace.steps.len() > max_cuts {
            return Err(GeoError::SearchExhausted(format!(
                "count stuck at {count} after {} cuts",
                trace.steps.len() - 1
            )));
        }
        // Rotate through the exposed corners so successive cuts spread
        // around the hull; if the schedule finds no verified cut at one
        // corner, fall back to the next.
        let base = trace.steps.len() - 1;
        let mut cut = None;
        let mut last_err = None;
        // Prefer cuts whose hull region stays resolvable by the later
        // sampled smoothing certificate; fall back to unguarded cuts so
        // the count still makes progress on hard polygons.
        'search: for guard in [true, false] {
            for offset in 0..count {
                let tgt = select_cut_target_at(&current, base + offset)?;
                match build_cut_checked(&current, &tgt, k, eps, guard) {
                    Ok(c) => {
                        cut = Some(c);
                        break 'search;
                    }
                    Err(e @ GeoError::SearchExhausted(_)) => last_err = Some(e),
                    Err(e) => return Err(e),
                }
            }
        }
        let cut = match cut {
            Some(c) => c,
            None => {
                return Err(last_err.unwrap_or_else(|| {
                    GeoError::SearchExhausted("no corner admitted a verified cut".into())
                }))
            }
        };
        let after = apply_cut(&current, &cut)?;
        let new_count = hull_vertex_count(&after)?;
        if new_count <= count {
            return Err(GeoError::InternalInvariant(
                "accepted cut did not increase the hull vertex count".into(),
            ));
        }
        // Coordinate snapping caps the growth of rational denominators
        // across cuts; every snap is re-verified.
        let (carried, snapped) = snap_verified(&after, k, eps, new_count);
        trace.steps.push(TraceStep {
            cut: Some(cut),
            polygon_after_cut: Some(after),
            polygon: carried.clone(),
            hull_count: new_count,
            snapped,
        });
        current = carried;
        count = new_count;
    }
    Ok((current, trace))
}

/// One evaluated radius of the smoothing schedule.
#[derive(Clone, Debug)]
pub struct SmoothingStep {
    pub radius: f64,
    /// Sampled Hausdorff distance between the smooth body and the polygon.
    pub delta: f64,
    /// Cluster-counted hull vertex count of the sampled smooth hedgehog.
    pub hedgehog_hull_count: usize,
    pub containment_ok: bool,
}

/// Certificate returned by `finalize_smooth`.
#[derive(Clone, Debug)]
pub struct SmoothCertificate {
    /// Exact hedgehog hull vertex count of the source polygon.
    pub target_count: usize,
    pub steps: Vec<SmoothingStep>,
    pub accepted_radius: f64,
}

/// Number of hedgehog samples used for the smooth count certificate.
pub const SMOOTH_CERT_SAMPLES: usize = 4096;
const SMOOTH_CERT_GAP: usize = 3;

/// Replace the polygon's edges by outward circular arcs, doubling the
/// radius until the smooth body stays inside the epsilon-neighborhood of
/// `k` and its sampled hedgehog hull count equals the polygon's exact
/// count. At least three radii are evaluated so the distance decrease is
/// observable.
pub fn finalize_smooth(
    q: &ConvexPolygon,
    k: &Body,
    eps: f64,
    seed_unused: u64,
) -> Result<(SmoothBody, SmoothCertificate), GeoError> {
    let _ = seed_unused;
    let target_count = hull_vertex_count(q)?;
    if !polygon_contains_body_strict(q, k) {
        return Err(GeoError::Precondition(
            "inner body is not strictly inside the polygon".into(),
        ));
    }
    let diam = q.diameter_f64();
    let mut steps: Vec<SmoothingStep> = Vec::new();

    for i in 0..24u32 {
        let radius = 10.0 * diam * f64::powi(2.0, i as i32);
        let body = match smooth_by_arcs(q, radius) {
            Ok(b) => b,
            Err(GeoError::RadiusTooSmall(_)) => continue,
            Err(e) => return Err(e),
        };
        let m_samples: Vec<P2> = body.boundary_samples(1024);
        // The arcs leave the polygon only outward and meet it at every
        // vertex, so the deviation is measured against the continuous
        // polygon boundary (no sampling floor).
        let delta = m_samples
            .iter()
            .map(|p| q.boundary_dist_f64(*p))
            .fold(0.0, f64::max);
        let containment_ok = m_samples.iter().all(|pt| within_eps(k, *pt, eps));
        let count = clustered_hull_vertex_count(
            &smooth_hedgehog(&body, SMOOTH_CERT_SAMPLES)?,
            SMOOTH_CERT_GAP,
        )?;
        if let Some(prev) = steps.last() {
            if delta >= prev.delta {
                return Err(GeoError::RadiusScheduleExhausted(format!(
                    "smoothing distance stopped decreasing at radius {radius} \
                     before the count certificate was met"
                )));
            }
        }
        steps.push(SmoothingStep {
            radius,
            delta,
            hedgehog_hull_count: count,
            containment_ok,
        });
        if steps.len() >= 3 && containment_ok && count == target_count {
            return Ok((
                body,
                SmoothCertificate {
                    target_count,
                    accepted_radius: radius,
                    steps,
                },
            ));
        }
    }
    Err(GeoError::RadiusScheduleExhausted(format!(
        "no radius reproduced the count {target_count} within the neighborhood"
    )))
}

/// Distance-to-body check for one sampled point: exact for polygon bodies,
/// support-grid bounded for smooth ones.
fn within_eps(k: &Body, pt: P2, eps: f64) -> bool {
    match k {
        Body::Polygon(p) => {
            let eps2 = rat_from_f64(eps) * rat_from_f64(eps);
            p.dist2(&Rat2::from_f64s(pt.x, pt.y)) < eps2
        }
        Body::Smooth(s) => {
            let grid = 720;
            let excess = (0..grid)
                .map(|g| {
                    let th = 2.0 * PI * g as f64 / grid as f64;
                    pt.x * th.cos() + pt.y * th.sin() - s.h(th)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            excess < eps * 0.999
        }
    }
}

/// `k` strictly inside the open interior of the polygon.
fn polygon_contains_body_strict(p: &ConvexPolygon, k: &Body) -> bool {
    match k {
        Body::Polygon(kp) => kp.vertices().iter().all(|v| p.contains_strict(v)),
        Body::Smooth(s) => s
            .boundary_samples(720)
            .iter()
            .all(|x| p.contains_strict(&Rat2::from_f64s(x.x, x.y))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::sandwich_polygon;

    fn tri() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Rat2::from_ints(0, 0),
            Rat2::from_ints(4, 0),
            Rat2::from_ints(0, 4),
        ])
        .unwrap()
    }

    fn tri_body() -> Body {
        Body::Polygon(tri())
    }

    #[test]
    fn select_target_on_sandwich() {
        let body = tri_body();
        let p = sandwich_polygon(&body, 0.5, 11).unwrap();
        let t = select_cut_target(&p).unwrap();
        // Strict support: all other hedgehog corners lie strictly below S.
        let (m, _, _) = hedgehog_with_hull(&p).unwrap();
        let level = t.x.dot(&t.support_normal);
        for c in &m.corners {
            if c.location != t.x {
                assert!(c.location.dot(&t.support_normal) < level);
            }
        }
    }

    #[test]
    fn select_target_rejects_symmetric() {
        let sq = ConvexPolygon::new(vec![
            Rat2::from_ints(0, 0),
            Rat2::from_ints(2, 0),
            Rat2::from_ints(2, 2),
            Rat2::from_ints(0, 2),
        ])
        .unwrap();
        assert!(matches!(
            select_cut_target(&sq),
            Err(GeoError::Precondition(_))
        ));
    }

    #[test]
    fn one_cut_increases_count() {
        let body = tri_body();
        let p = sandwich_polygon(&body, 0.5, 11).unwrap();
        let before = hull_vertex_count(&p).unwrap();
        let target = select_cut_target(&p).unwrap();
        let cut = build_cut(&p, &target, &body, 0.5).unwrap();
        assert!(cut.lambda < Rat::one() && cut.lambda.is_positive());
        let after = apply_cut(&p, &cut).unwrap();
        assert_eq!(after.len(), p.len() + 2);
        assert!(hull_vertex_count(&after).unwrap() > before);
        // z - y parallel to the support line.
        let d = &cut.z - &cut.y;
        assert!(d.cross(&cut.support_normal.rot90()).is_zero());
        assert!(cut.y != cut.z);
    }

    #[test]
    fn replay_is_bit_exact() {
        let body = tri_body();
        let p = sandwich_polygon(&body, 0.5, 11).unwrap();
        let target = select_cut_target(&p).unwrap();
        let cut = build_cut(&p, &target, &body, 0.5).unwrap();
        let a = apply_cut(&p, &cut).unwrap();
        let b = apply_cut(&p, &cut).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn increase_to_six() {
        let body = tri_body();
        let (q, trace) = increase_hull_vertices(&body, 0.5, 6, 5).unwrap();
        let counts = trace.counts();
        assert!(counts.windows(2).all(|w| w[0] < w[1]));
        assert!(*counts.last().unwrap() > 6);
        assert_eq!(hull_vertex_count(&q).unwrap(), *counts.last().unwrap());
        assert!(trace.verify(&body));
    }

    #[test]
    fn increase_rejects_bad_input() {
        assert!(increase_hull_vertices(&tri_body(), -1.0, 5, 1).is_err());
        let sq = ConvexPolygon::new(vec![
            Rat2::from_ints(0, 0),
            Rat2::from_ints(2, 0),
            Rat2::from_ints(2, 2),
            Rat2::from_ints(0, 2),
        ])
        .unwrap();
        assert!(increase_hull_vertices(&Body::Polygon(sq), 0.5, 5, 1).is_err());
    }

    #[test]
    fn snap_roundtrip() {
        let p = tri();
        let s = snap_dyadic(&p, 48).unwrap();
        // Integer coordinates are already dyadic.
        assert_eq!(s, p);
    }

    #[test]
    fn smooth_finalize_small_run() {
        let body = tri_body();
        let (q, _) = increase_hull_vertices(&body, 0.5, 4, 5).unwrap();
        let (m, cert) = finalize_smooth(&q, &body, 0.5, 0).unwrap();
        assert_eq!(cert.target_count, hull_vertex_count(&q).unwrap());
        let last = cert.steps.last().unwrap();
        assert_eq!(last.hedgehog_hull_count, cert.target_count);
        assert!(last.containment_ok);
        for w in cert.steps.windows(2) {
            assert!(w[1].delta < w[0].delta);
        }
        // The smooth body is strictly convex and close to the polygon.
        assert!(matches!(m, SmoothBody::Arcgon(_)));
    }
}
