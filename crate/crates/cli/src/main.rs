//! Command-line front end: parse body description files, run hedgehog,
//! convexity, and perturbation analyses, and emit reports and SVG figures.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 violated precondition
//! (e.g. parallel edges), 4 internal-invariant trap.

mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use hedgehog_core::body::{Body, ConvexPolygon};
use hedgehog_core::convexity::{
    brute_force_convexity_points, is_convexity_point, verify_independent_triple, ConvexityReport,
};
use hedgehog_core::hedgehog::{
    clustered_hull_vertex_count, hedgehog_hull, polygon_hedgehog, smooth_hedgehog, CornerKind,
    PolygonHedgehog,
};
use hedgehog_core::io::{
    body_to_string, certificate_json, parse_body_str, parse_rat, rat_string, trace_json,
};
use hedgehog_core::perturb::{finalize_smooth, increase_hull_vertices};
use hedgehog_core::{GeoError, Hull, Rat2, P2};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hedgehog",
    version,
    about = "Middle hedgehogs, convexity points, and hull-count perturbation of planar convex bodies"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write an SVG figure to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Seed for randomized constructions (decimal).
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Emit a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Middle sets, corners with weak/strong tags, and the hedgehog hull.
    Hedgehog {
        /// Body description file.
        input: PathBuf,
    },
    /// Convexity-point candidates, verdicts, and an affinely independent triple.
    Convexity {
        input: PathBuf,
        /// Cross-check against the brute-force grid oracle at N x N resolution.
        #[arg(long, value_name = "N")]
        oracle: Option<usize>,
    },
    /// Drive the hedgehog hull vertex count above a target within an
    /// epsilon-neighborhood; writes the trace and the final body file.
    Perturb {
        input: PathBuf,
        /// Neighborhood radius (must be positive).
        #[arg(long, value_name = "E")]
        eps: f64,
        /// Required hull vertex count (final count exceeds it).
        #[arg(long, value_name = "K")]
        target: usize,
        /// Also produce the smoothed arc-gon with its count certificate.
        #[arg(long)]
        smooth: bool,
        /// Output path prefix (default: input path without extension).
        #[arg(long, value_name = "PREFIX")]
        out: Option<PathBuf>,
    },
    /// Compose an SVG figure from selected layers.
    Render {
        input: PathBuf,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long, default_value_t = 640)]
        height: u32,
        /// Comma-separated layer list.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "body,hedgehog,hull,corners"
        )]
        layers: Vec<Layer>,
        /// Perturbation trace file, required by the cut-overlay layer.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
    /// Brute-force grid search for convexity points.
    Oracle {
        input: PathBuf,
        /// Grid resolution N (N x N cells over the bounding box).
        #[arg(long, default_value_t = 64, value_name = "N")]
        grid: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Layer {
    Body,
    Hedgehog,
    Hull,
    Corners,
    #[value(name = "convexity-points")]
    ConvexityPoints,
    #[value(name = "affine-diameters")]
    AffineDiameters,
    #[value(name = "cut-overlay")]
    CutOverlay,
}

struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

impl From<GeoError> for Failure {
    fn from(e: GeoError) -> Failure {
        let code = match e {
            GeoError::Parse(_) => 2,
            GeoError::ParallelEdges
            | GeoError::EmptyInput
            | GeoError::InvalidBody(_)
            | GeoError::RadiusTooSmall(_)
            | GeoError::Precondition(_) => 3,
            GeoError::ApproximationFailure(_)
            | GeoError::SearchExhausted(_)
            | GeoError::RadiusScheduleExhausted(_)
            | GeoError::InternalInvariant(_) => 4,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Hedgehog { input } => cmd_hedgehog(&cli, input),
        Cmd::Convexity { input, oracle } => cmd_convexity(&cli, input, *oracle),
        Cmd::Perturb {
            input,
            eps,
            target,
            smooth,
            out,
        } => cmd_perturb(&cli, input, *eps, *target, *smooth, out.as_deref()),
        Cmd::Render {
            input,
            width,
            height,
            layers,
            trace,
        } => cmd_render(&cli, input, *width, *height, layers, trace.as_deref()),
        Cmd::Oracle { input, grid } => cmd_oracle(&cli, input, *grid),
    }
}

fn read_body(path: &Path) -> Result<Body, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_body_str(&text)?)
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// Human-readable point: fixed six-decimal floats, trimmed.
fn pt(p: P2) -> String {
    format!("({}, {})", svg::num(p.x), svg::num(p.y))
}

/// Exact point for JSON reports: `["num/den", "num/den"]`.
fn exact_point(p: &Rat2) -> Value {
    json!([rat_string(&p.x), rat_string(&p.y)])
}

// ---------------------------------------------------------------------------
// hedgehog
// ---------------------------------------------------------------------------

fn cmd_hedgehog(cli: &Cli, input: &Path) -> Result<(), Failure> {
    let body = read_body(input)?;
    match &body {
        Body::Polygon(p) => {
            let m = polygon_hedgehog(p)?;
            let (hull, exposed) = hedgehog_hull(&m)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&hedgehog_report_json(&m, &hull, &exposed))
                        .expect("json")
                );
            } else {
                print_hedgehog_report(&m, &hull, &exposed);
            }
            if let Some(path) = &cli.svg {
                let fig = figure(
                    &body,
                    &[Layer::Body, Layer::Hedgehog, Layer::Hull, Layer::Corners],
                    640,
                    640,
                    None,
                )?;
                write_file(path, &fig)?;
            }
        }
        Body::Smooth(s) => {
            let n = 4096;
            let h = smooth_hedgehog(s, n)?;
            let count = clustered_hull_vertex_count(&h, 3)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "type": "smooth",
                        "samples": n,
                        "hull_vertices_sampled": count,
                    }))
                    .expect("json")
                );
            } else {
                println!("smooth body; hedgehog samples: {n}; hull vertices (sampled): {count}");
            }
            if let Some(path) = &cli.svg {
                let fig = figure(&body, &[Layer::Body, Layer::Hedgehog], 640, 640, None)?;
                write_file(path, &fig)?;
            }
        }
    }
    Ok(())
}

fn print_hedgehog_report(m: &PolygonHedgehog, hull: &Hull, exposed: &[usize]) {
    println!("middle sets: {}", m.middle_sets.len());
    for (i, ms) in m.middle_sets.iter().enumerate() {
        println!(
            "  set {i}: edge {} opposite vertex {}: {} -- {}",
            ms.edge,
            ms.opposite_vertex,
            pt(ms.seg.a.to_p2()),
            pt(ms.seg.b.to_p2())
        );
    }
    for (i, c) in m.corners.iter().enumerate() {
        let kind = match c.kind {
            CornerKind::Weak => "weak",
            CornerKind::Strong => "strong",
        };
        let on_hull = if exposed.contains(&i) {
            "; hull vertex"
        } else {
            ""
        };
        println!(
            "  corner {i}: {kind} at {}; opposite pair ({}, {}){on_hull}",
            pt(c.location.to_p2()),
            c.opposite_pair.0,
            c.opposite_pair.1
        );
    }
    println!(
        "corners: {} (weak {}, strong {}); hull vertices: {}",
        m.corners.len(),
        m.weak_count(),
        m.strong_count(),
        hull.vertex_count()
    );
}

fn hedgehog_report_json(m: &PolygonHedgehog, hull: &Hull, exposed: &[usize]) -> Value {
    json!({
        "type": "polygon",
        "middle_sets": m.middle_sets.iter().map(|ms| json!({
            "edge": ms.edge,
            "opposite_vertex": ms.opposite_vertex,
            "a": exact_point(&ms.seg.a),
            "b": exact_point(&ms.seg.b),
        })).collect::<Vec<_>>(),
        "corners": m.corners.iter().enumerate().map(|(i, c)| json!({
            "location": exact_point(&c.location),
            "kind": match c.kind { CornerKind::Weak => "weak", CornerKind::Strong => "strong" },
            "opposite_pair": [c.opposite_pair.0, c.opposite_pair.1],
            "hull_vertex": exposed.contains(&i),
        })).collect::<Vec<_>>(),
        "weak": m.weak_count(),
        "strong": m.strong_count(),
        "hull_vertices": hull.vertex_count(),
    })
}

// ---------------------------------------------------------------------------
// convexity
// ---------------------------------------------------------------------------

fn cmd_convexity(cli: &Cli, input: &Path, oracle: Option<usize>) -> Result<(), Failure> {
    let body = read_body(input)?;
    let poly = match &body {
        Body::Polygon(p) => p.clone(),
        Body::Smooth(s) => {
            if let Some(center) = s.symmetry_center() {
                if cli.json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "symmetric": true,
                            "center": [center.x, center.y],
                        }))
                        .expect("json")
                    );
                } else {
                    println!(
                        "centrally symmetric; convexity point: center {}",
                        pt(center)
                    );
                }
                return Ok(());
            }
            return Err(GeoError::Precondition(
                "exact convexity verification requires a polygon body".into(),
            )
            .into());
        }
    };
    let report = verify_independent_triple(&poly)?;
    let oracle_hits = match oracle {
        Some(n) => {
            if n < 2 {
                return Err(usage("--oracle grid must be at least 2"));
            }
            Some(brute_force_convexity_points(&poly, n)?)
        }
        None => None,
    };
    if cli.json {
        let mut v = hedgehog_core::io::report_json(&report);
        if let Some(hits) = &oracle_hits {
            v["oracle_hits"] = json!(hits.iter().map(exact_point).collect::<Vec<_>>());
            v["oracle_consistent"] = json!(oracle_consistent(&poly, &report));
        }
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        print_convexity_report(&report);
        if let (Some(hits), Some(n)) = (&oracle_hits, oracle) {
            let ok = oracle_consistent(&poly, &report);
            println!(
                "oracle grid {n}: {} hits; exact candidates accepted by oracle test: {}",
                hits.len(),
                if ok { "yes" } else { "NO" }
            );
        }
    }
    if let Some(path) = &cli.svg {
        let fig = figure(
            &body,
            &[Layer::Body, Layer::Hedgehog, Layer::ConvexityPoints],
            640,
            640,
            None,
        )?;
        write_file(path, &fig)?;
    }
    Ok(())
}

/// Every exactly verified point must pass the same test the grid oracle
/// applies to its own sample points.
fn oracle_consistent(poly: &ConvexPolygon, report: &ConvexityReport) -> bool {
    report.verified.iter().all(|z| is_convexity_point(poly, z))
}

fn print_convexity_report(report: &ConvexityReport) {
    if report.symmetric {
        let c = report.center.as_ref().expect("symmetric report has center");
        println!("centrally symmetric; convexity point: center {}", pt(c.to_p2()));
        return;
    }
    println!("candidates: {}", report.candidates.len());
    for (i, (p, corner)) in report.candidates.iter().enumerate() {
        let verdict = if report.verified.contains(p) {
            "convexity point"
        } else {
            "not a convexity point"
        };
        println!(
            "  candidate {i} at {} (corner {corner}): {verdict}",
            pt(p.to_p2())
        );
    }
    println!("verified convexity points: {}", report.verified.len());
    match &report.affine_independent_triple {
        Some((a, b, c)) => println!(
            "affinely independent triple: {}, {}, {}",
            pt(a.to_p2()),
            pt(b.to_p2()),
            pt(c.to_p2())
        ),
        None => println!("affinely independent triple: none"),
    }
}

// ---------------------------------------------------------------------------
// perturb
// ---------------------------------------------------------------------------

fn cmd_perturb(
    cli: &Cli,
    input: &Path,
    eps: f64,
    target: usize,
    smooth: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(usage("--eps must be a positive finite number"));
    }
    if target < 1 {
        return Err(usage("--target must be at least 1"));
    }
    let body = read_body(input)?;
    let (final_poly, trace) = increase_hull_vertices(&body, eps, target, cli.seed)?;

    let prefix: PathBuf = match out {
        Some(p) => p.to_path_buf(),
        None => input.with_extension(""),
    };
    let with_suffix = |sfx: &str| -> PathBuf {
        let mut name = prefix.file_name().unwrap_or_default().to_os_string();
        name.push(sfx);
        prefix.with_file_name(name)
    };

    let trace_path = with_suffix(".trace.json");
    let final_path = with_suffix(".final.json");
    write_file(
        &trace_path,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&trace_json(&trace)).expect("json")
        ),
    )?;
    write_file(
        &final_path,
        &format!("{}\n", body_to_string(&Body::Polygon(final_poly.clone()))),
    )?;

    let mut smooth_paths: Option<(PathBuf, PathBuf)> = None;
    if smooth {
        let (sm, cert) = finalize_smooth(&final_poly, &body, eps, cli.seed)?;
        let smooth_path = with_suffix(".smooth.json");
        let cert_path = with_suffix(".certificate.json");
        write_file(
            &smooth_path,
            &format!("{}\n", body_to_string(&Body::Smooth(sm))),
        )?;
        write_file(
            &cert_path,
            &format!(
                "{}\n",
                serde_json::to_string_pretty(&certificate_json(&cert)).expect("json")
            ),
        )?;
        smooth_paths = Some((smooth_path, cert_path));
    }

    let counts = trace.counts();
    let cuts = counts.len().saturating_sub(1);
    if cli.json {
        let mut v = json!({
            "counts": counts,
            "cuts": cuts,
            "final_hull_vertices": counts.last().copied().unwrap_or(0),
            "trace": trace_path.display().to_string(),
            "final": final_path.display().to_string(),
        });
        if let Some((sp, cp)) = &smooth_paths {
            v["smooth"] = json!(sp.display().to_string());
            v["certificate"] = json!(cp.display().to_string());
        }
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("counts: {counts:?}");
        println!("cuts: {cuts}");
        println!(
            "final hull vertices: {}",
            counts.last().copied().unwrap_or(0)
        );
        println!("trace: {}", trace_path.display());
        println!("final: {}", final_path.display());
        if let Some((sp, cp)) = &smooth_paths {
            println!("smooth: {}", sp.display());
            println!("certificate: {}", cp.display());
        }
    }

    if let Some(path) = &cli.svg {
        let fig = figure(
            &Body::Polygon(final_poly),
            &[Layer::Body, Layer::Hedgehog, Layer::Hull, Layer::Corners],
            640,
            640,
            None,
        )?;
        write_file(path, &fig)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// render
// ---------------------------------------------------------------------------

fn cmd_render(
    cli: &Cli,
    input: &Path,
    width: u32,
    height: u32,
    layers: &[Layer],
    trace: Option<&Path>,
) -> Result<(), Failure> {
    if width < 64 || height < 64 {
        return Err(usage("--width and --height must be at least 64"));
    }
    if layers.is_empty() {
        return Err(usage("at least one layer is required"));
    }
    let svg_path = cli
        .svg
        .as_ref()
        .ok_or_else(|| usage("render requires --svg PATH"))?;
    let trace_value: Option<Value> = if layers.contains(&Layer::CutOverlay) {
        let path = trace.ok_or_else(|| usage("the cut-overlay layer requires --trace PATH"))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        Some(
            serde_json::from_str(&text)
                .map_err(|e| usage(format!("invalid trace {}: {e}", path.display())))?,
        )
    } else {
        None
    };
    let body = read_body(input)?;
    let fig = figure(&body, layers, width, height, trace_value.as_ref())?;
    write_file(svg_path, &fig)?;
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "svg": svg_path.display().to_string(),
                "width": width,
                "height": height,
            }))
            .expect("json")
        );
    } else {
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

fn cmd_oracle(cli: &Cli, input: &Path, grid: usize) -> Result<(), Failure> {
    if grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let body = read_body(input)?;
    let poly = match &body {
        Body::Polygon(p) => p,
        Body::Smooth(_) => {
            return Err(GeoError::Precondition(
                "the grid oracle requires a polygon body".into(),
            )
            .into())
        }
    };
    let hits = brute_force_convexity_points(poly, grid)?;
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "grid": grid,
                "hits": hits.iter().map(exact_point).collect::<Vec<_>>(),
            }))
            .expect("json")
        );
    } else {
        println!("grid: {grid}");
        println!("hits: {}", hits.len());
        for h in &hits {
            println!("  hit at {}", pt(h.to_p2()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// figure composition
// ---------------------------------------------------------------------------

fn body_outline(body: &Body) -> Vec<P2> {
    match body {
        Body::Polygon(p) => p.vertices().iter().map(Rat2::to_p2).collect(),
        Body::Smooth(s) => s.boundary_samples(512),
    }
}

fn figure(
    body: &Body,
    layers: &[Layer],
    width: u32,
    height: u32,
    trace: Option<&Value>,
) -> Result<String, Failure> {
    let outline = body_outline(body);
    let mut canvas = svg::Canvas::new(width, height, svg::bbox(&outline));

    // Exact hedgehog data is available for polygon bodies only.
    let polygon_data: Option<(PolygonHedgehog, Hull, Vec<usize>)> = match body {
        Body::Polygon(p)
            if layers.iter().any(|l| {
                matches!(
                    l,
                    Layer::Hedgehog
                        | Layer::Hull
                        | Layer::Corners
                        | Layer::AffineDiameters
                        | Layer::ConvexityPoints
                )
            }) =>
        {
            let m = polygon_hedgehog(p)?;
            let (hull, exposed) = hedgehog_hull(&m)?;
            Some((m, hull, exposed))
        }
        _ => None,
    };

    for layer in layers {
        match layer {
            Layer::Body => canvas.polyline(&outline, true, "#333333", false),
            Layer::Hedgehog => match (body, &polygon_data) {
                (Body::Polygon(_), Some((m, _, _))) => {
                    let pts: Vec<P2> = m
                        .middle_sets
                        .iter()
                        .flat_map(|ms| [ms.seg.a.to_p2(), ms.seg.b.to_p2()])
                        .collect();
                    canvas.polyline(&pts, true, "#1f77b4", false);
                }
                (Body::Smooth(s), _) => {
                    let h = smooth_hedgehog(s, 1024)?;
                    let pts: Vec<P2> = h.samples.iter().map(|&(_, p)| p).collect();
                    canvas.polyline(&pts, true, "#1f77b4", false);
                }
                _ => {}
            },
            Layer::Hull => {
                if let Some((_, hull, _)) = &polygon_data {
                    let pts: Vec<P2> = hull.points().iter().map(Rat2::to_p2).collect();
                    canvas.polyline(&pts, true, "#d62728", false);
                }
            }
            Layer::Corners => {
                if let Some((m, _, _)) = &polygon_data {
                    for c in &m.corners {
                        canvas.dot(
                            c.location.to_p2(),
                            "#d62728",
                            c.kind == CornerKind::Strong,
                        );
                    }
                }
            }
            Layer::ConvexityPoints => {
                if let Body::Polygon(p) = body {
                    let report = verify_independent_triple(p)?;
                    if let Some(center) = &report.center {
                        canvas.dot(center.to_p2(), "#2ca02c", true);
                    }
                    for z in &report.verified {
                        canvas.dot(z.to_p2(), "#2ca02c", true);
                    }
                }
            }
            Layer::AffineDiameters => {
                if let (Body::Polygon(p), Some((m, _, _))) = (body, &polygon_data) {
                    for c in &m.corners {
                        let a = p.vertex(c.opposite_pair.0).to_p2();
                        let b = p.vertex(c.opposite_pair.1).to_p2();
                        canvas.segment(a, b, "#999999", true);
                    }
                }
            }
            Layer::CutOverlay => {
                if let Some(v) = trace {
                    draw_cut_overlay(&mut canvas, v)?;
                }
            }
        }
    }
    Ok(canvas.finish())
}

/// Pull a `["num/den", "num/den"]` point out of a trace document.
fn trace_point(v: &Value) -> Result<P2, Failure> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| usage(format!("trace point must be [x, y], got {v}")))?;
    let x = parse_rat(&arr[0])?;
    let y = parse_rat(&arr[1])?;
    Ok(Rat2::new(x, y).to_p2())
}

fn draw_cut_overlay(canvas: &mut svg::Canvas, trace: &Value) -> Result<(), Failure> {
    let steps = trace
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| usage("trace document has no \"steps\" array"))?;
    for step in steps {
        let Some(cut) = step.get("cut") else { continue };
        let get = |key: &str| -> Result<P2, Failure> {
            trace_point(
                cut.get(key)
                    .ok_or_else(|| usage(format!("trace cut missing {key:?}")))?,
            )
        };
        // The two new polygon edges introduced by the cut, and the pair of
        // hedgehog hull corners it certifies.
        canvas.segment(get("s1")?, get("s2")?, "#ff7f0e", false);
        canvas.segment(get("t1")?, get("t2")?, "#ff7f0e", false);
        canvas.dot(get("y")?, "#ff7f0e", true);
        canvas.dot(get("z")?, "#ff7f0e", true);
    }
    Ok(())
}
