//! Acceptance suite: one line per criterion on stdout.
//!
//! Runs without the libtest harness so that every criterion reports even
//! when an earlier one fails. The process fails when a criterion outside
//! `UNATTAINABLE` fails.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gluing::geometry::Point2;
use gluing::kernel::{comparison_angle, cone_distance, model_side, Angle, TriangleSides};
use gluing::links::{build_link, LinkKind};
use gluing::metric::{DiscretizedComplex, Location};
use gluing::model::{arc_geodesic, validate, ComplexSpec, EPoint, FindingCode, Severity};
use gluing::scene::load_scene;
use gluing::verify::{
    antipodal_check, diameter_check, liberman_check, monotonicity_check, verify, CertificateKind, DiameterOutcome,
    Outcome, VerifierConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot hold as stated; they run and report but do not
/// fail the suite.
const UNATTAINABLE: &[u32] = &[1];

const POSITIVE: [&str; 7] =
    ["annulus", "mobius", "paper-cup", "pillowcase", "sphere-sigma", "projective-plane-tau", "double-square"];

type Verdict = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Verdict);

fn scene(name: &str) -> ComplexSpec<f64> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(format!("{name}.scene"));
    load_scene(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display())).spec
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uniform(spec: &ComplexSpec<f64>, rng: &mut ChaCha8Rng) -> Location<f64> {
    let k = rng.gen_range(0..spec.pieces.len());
    let piece = &spec.pieces[k];
    let (lo, hi) = piece.vertices.iter().fold(
        (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), v| (Point2::new(lo.x.min(v.x), lo.y.min(v.y)), Point2::new(hi.x.max(v.x), hi.y.max(v.y))),
    );
    loop {
        let p = Point2::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
        if piece.contains(p) {
            return Location::new(k, p);
        }
    }
}

fn kernel_exactness() -> Verdict {
    let eq = comparison_angle(0.0, &TriangleSides::new(1.0, 1.0, 1.0).unwrap()).unwrap().0;
    check((eq - PI / 3.0).abs() <= 1e-12, || format!("equilateral angle {eq}"))?;
    let hyp = cone_distance(0.0, 3.0, Angle(FRAC_PI_2), 4.0).unwrap();
    check((hyp - 5.0).abs() <= 1e-12, || format!("cone distance {hyp}"))?;

    let grid: Vec<f64> = (1..=10).map(|i| 0.2 * i as f64).collect();
    let mut worst: f64 = 0.0;
    let mut triangles = 0;
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                let Ok(sides) = TriangleSides::new(a, b, c) else { continue };
                let flat = comparison_angle(0.0, &sides).unwrap().0;
                let side = model_side(0.0, b, c, Angle(flat)).unwrap();
                triangles += 1;
                for k in [-1e-4, -1e-5, 1e-5, 1e-4] {
                    worst = worst.max((comparison_angle(k, &sides).unwrap().0 - flat).abs());
                    worst = worst.max((model_side(k, b, c, Angle(flat)).unwrap() - side).abs());
                }
            }
        }
    }
    check(worst <= 1e-6, || format!("largest deviation {worst:.3e} over {triangles} triangles at |κ| ≤ 1e-4"))?;
    Ok(format!("{triangles} triangles, largest deviation {worst:.3e}"))
}

fn predistance_laws() -> Verdict {
    let spec = scene("pillowcase");
    let dc = DiscretizedComplex::new(&spec, 0.01).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (x, y) = (uniform(&spec, &mut rng), uniform(&spec, &mut rng));
        let values: Vec<f64> = (0..=8).map(|m| dc.predistance(x, y, m).unwrap()).collect();
        check(values.windows(2).all(|w| w[1] <= w[0]), || format!("not monotone: {values:?}"))?;
        let d = dc.distance(x, y).unwrap().value;
        check((values[8] - d).abs() <= 1e-12, || format!("|xy|_8 = {} but |xy| = {d}", values[8]))?;
    }
    for _ in 0..100 {
        let (x, z, y) = (uniform(&spec, &mut rng), uniform(&spec, &mut rng), uniform(&spec, &mut rng));
        let (m, l) = (rng.gen_range(0..5), rng.gen_range(0..5));
        let lhs = dc.predistance(x, z, m).unwrap() + dc.predistance(z, y, l).unwrap();
        let rhs = dc.predistance(x, y, m + l).unwrap();
        check(lhs >= rhs - 1e-12, || format!("splicing fails: {lhs} < {rhs} at m={m}, l={l}"))?;
    }
    Ok("100 pairs monotone and stable by m=8; 100 splicings hold".into())
}

/// Shortest length through at most three boundary points of the pillowcase,
/// alternating squares at each point, on a boundary grid of spacing `step`.
fn pillowcase_oracle(x: Location<f64>, y: Location<f64>, step: f64) -> f64 {
    let n = (1.0 / step).round() as usize;
    let mut grid = Vec::with_capacity(4 * n);
    for i in 0..n {
        let t = i as f64 * step;
        grid.extend([Point2::new(t, 0.0), Point2::new(1.0, t), Point2::new(1.0 - t, 1.0), Point2::new(0.0, 1.0 - t)]);
    }
    let dist = |a: Point2<f64>, b: Point2<f64>| ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    let parity = |k: usize| (x.piece + k) % 2;
    let mut best = if x.piece == y.piece { dist(x.point, y.point) } else { f64::INFINITY };
    // layer[k][q]: shortest length from x to grid point q using k crossings
    let mut layer: Vec<f64> = grid.iter().map(|q| dist(x.point, *q)).collect();
    for k in 1..=3 {
        if parity(k) == y.piece {
            for (q, l) in grid.iter().zip(&layer) {
                best = best.min(l + dist(*q, y.point));
            }
        }
        if k == 3 {
            break;
        }
        layer = grid
            .iter()
            .map(|q| grid.iter().zip(&layer).map(|(r, l)| l + dist(*r, *q)).fold(f64::INFINITY, f64::min))
            .collect();
    }
    best
}

fn distance_oracle() -> Verdict {
    let spec = scene("pillowcase");
    let h = 0.005;
    let dc = DiscretizedComplex::new(&spec, h).unwrap();
    let cases = [
        ("centres", Location::new(0, Point2::new(0.5, 0.5)), Location::new(1, Point2::new(0.5, 0.5)), 1.0),
        ("corners", Location::new(0, Point2::new(0.0, 0.0)), Location::new(1, Point2::new(1.0, 1.0)), SQRT_2),
    ];
    let mut notes = Vec::new();
    for (name, x, y, exact) in cases {
        let est = dc.distance(x, y).unwrap();
        let oracle = pillowcase_oracle(x, y, h / 10.0);
        check((est.value - exact).abs() <= est.error_bound, || {
            format!("{name}: {} not within {} of {exact}", est.value, est.error_bound)
        })?;
        check((est.value - oracle).abs() <= est.error_bound, || {
            format!("{name}: {} disagrees with oracle {oracle}", est.value)
        })?;
        check(est.value >= oracle - h / 10.0, || format!("{name}: {} below oracle {oracle}", est.value))?;
        notes.push(format!("{name} {:.6} ± {:.3} (oracle {:.6})", est.value, est.error_bound, oracle));
    }
    let centre = dc.distance(cases[0].1, cases[0].2).unwrap().value;
    check((centre - 1.0).abs() <= 2.0 * h, || format!("centre distance {centre}"))?;
    Ok(notes.join("; "))
}

fn positive_corpus() -> Verdict {
    let config = VerifierConfig::default();
    let mut notes = Vec::new();
    for name in POSITIVE {
        let spec = scene(name);
        let r = verify(&spec, &config).unwrap();
        check(r.certificates.is_empty(), || {
            let kinds: Vec<String> = r.certificates.iter().map(|c| format!("{} {}", c.kind, c.origin)).collect();
            format!("{name}: {} certificates: {}", r.certificates.len(), kinds.join(", "))
        })?;
        notes.push(format!("{name} {}", r.quadruples.tested));
    }
    Ok(format!("no certificates; tested quadruples: {}", notes.join(", ")))
}

fn torn_envelope() -> Verdict {
    let spec = scene("torn-envelope");
    let torn = [Point2::new(1.0, 0.0), Point2::new(3.0, 0.0)];
    let link = build_link(&spec, EPoint { piece: 0, s: 1.0 }).unwrap();
    check(link.kind() == LinkKind::Interval && (link.length() - 2.0 * PI).abs() <= 1e-12, || {
        format!("torn link is {} of length {}", link.kind(), link.length())
    })?;
    check(!link.judge().is_ok(), || "torn link judged ok".into())?;

    let config = VerifierConfig::default();
    let r = verify(&spec, &config).unwrap();
    let near = |p: &Location<f64>| torn.iter().any(|t| t.dist(p.point) <= 1.0);
    let found = r.certificates.iter().find(|c| {
        matches!(c.kind, CertificateKind::Quadruple | CertificateKind::Monotonicity)
            && c.refinement.len() == config.h_schedule.len()
            && c.points.iter().any(|(_, p)| near(p))
    });
    let cert = found.ok_or_else(|| format!("no persistent certificate near the torn point among {}", r.certificates.len()))?;
    Ok(format!(
        "interval(2π) judged violation; {} certificate with final margin {:.4} > {:.4}",
        cert.kind,
        cert.final_margin(),
        cert.refinement.last().unwrap().tolerance
    ))
}

fn three_pi_circle() -> Verdict {
    let spec = scene("three-pi-circle");
    let dc = DiscretizedComplex::new(&spec, 0.01).unwrap();
    match diameter_check(&dc, spec.kappa()).unwrap() {
        DiameterOutcome::Certificate { estimate, error_bound, d_kappa, .. } => {
            check((estimate - 1.5 * PI).abs() <= 0.01, || format!("diameter {estimate}"))?;
            check(estimate - error_bound > d_kappa, || "margin within error".into())?;
            Ok(format!("diameter {estimate:.5} ± {error_bound} > {d_kappa:.5}"))
        }
        other => Err(format!("no certificate: {other:?}")),
    }
}

fn z3_disk() -> Verdict {
    let spec = scene("z3-disk");
    let report = validate(&spec);
    check(report.codes(Severity::Warning).contains(&FindingCode::TheoremHypothesisViolated), || {
        "missing hypothesis warning".into()
    })?;
    let side = spec.pieces[0].side_length(0);
    let link = build_link(&spec, EPoint { piece: 0, s: 0.5 * side }).unwrap();
    check(link.kind() == LinkKind::Graph && link.node_count() == 2 && link.edge_count() == 3, || {
        format!("{} with {} nodes and {} edges", link.kind(), link.node_count(), link.edge_count())
    })?;
    let edges: Vec<f64> = link.sectors.iter().map(|s| s.angle).collect();
    check(edges.iter().all(|e| (e - PI).abs() <= 0.01), || format!("edge lengths {edges:?}"))?;
    let vertex = build_link(&spec, EPoint { piece: 0, s: 0.0 }).unwrap();
    Ok(format!(
        "graph with 2 nodes and 3 edges of length π at side classes; vertex class edges {:.4}",
        vertex.sectors[0].angle
    ))
}

fn quasigeodesics() -> Verdict {
    let h = 0.005;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut paths = 0;
    let mut crossings = 0;
    let mut worst_mono: f64 = f64::NEG_INFINITY;
    let mut worst_anti: f64 = f64::NEG_INFINITY;
    let mut k = 0;
    while paths < 100 {
        let name = POSITIVE[k % POSITIVE.len()];
        k += 1;
        let spec = scene(name);
        let dc = DiscretizedComplex::new(&spec, h).unwrap();
        let mut found = 0;
        while found < 15 && paths < 100 {
            let (x, y) = (uniform(&spec, &mut rng), uniform(&spec, &mut rng));
            let Ok(path) = dc.shortest_path(x, y) else { continue };
            if path.crossings.is_empty() || path.legs.iter().any(|l| l.length() < 10.0 * h) {
                continue;
            }
            let p = uniform(&spec, &mut rng);
            let out = monotonicity_check(&dc, 0.0, &path, p, 4.0, 24).unwrap();
            if let Outcome::Fail { margin, tolerance, .. } = out {
                return Err(format!("{name}: monotonicity fails, margin {margin} > {tolerance}"));
            }
            if let Some(m) = out.margin() {
                worst_mono = worst_mono.max(m);
            }
            for i in 0..path.crossings.len() {
                let out = antipodal_check(&dc, &path, i, 4.0).unwrap();
                if let Outcome::Fail { margin, tolerance, .. } = out {
                    return Err(format!("{name}: antipodal fails, deviation {margin} > {tolerance}"));
                }
                if let Some(m) = out.margin() {
                    worst_anti = worst_anti.max(m);
                }
                crossings += 1;
            }
            paths += 1;
            found += 1;
        }
    }
    Ok(format!(
        "{paths} paths, {crossings} crossings; worst monotonicity rise {worst_mono:.2e}, worst antipodal deviation {worst_anti:.2e}"
    ))
}

fn liberman() -> Verdict {
    let h = 0.01;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut tested = 0;
    let mut worst: f64 = f64::NEG_INFINITY;
    for name in ["double-square", "pillowcase"] {
        let spec = scene(name);
        let dc = DiscretizedComplex::new(&spec, h).unwrap();
        let mut curves = 0;
        while curves < 10 {
            let piece = rng.gen_range(0..spec.pieces.len());
            let len = spec.pieces[piece].boundary_length();
            let a = EPoint { piece, s: rng.gen_range(0.0..len) };
            let b = EPoint { piece, s: rng.gen_range(0.0..len) };
            let Ok(Some(curve)) = arc_geodesic(&spec, a, b) else { continue };
            if curve.length < 0.2 {
                continue;
            }
            let ps: Vec<Location<f64>> = (0..100).map(|_| uniform(&spec, &mut rng)).collect();
            let out = liberman_check(&dc, 0.0, &curve, &ps, 4.0, 8).unwrap();
            if let Outcome::Fail { margin, tolerance, .. } = out {
                return Err(format!("{name}: deficit {margin} > {tolerance}"));
            }
            if let Some(m) = out.margin() {
                worst = worst.max(m);
            }
            curves += 1;
            tested += 1;
        }
    }
    Ok(format!("{tested} curves against 100 points each; worst deficit {worst:.2e}"))
}

fn determinism() -> Verdict {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes/torn-envelope.scene");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_gluing"))
            .args(["verify", path.to_str().unwrap(), "--samples", "2000", "--seed", "5"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    check(a.status.code() == b.status.code(), || "exit codes differ".into())?;
    check(a.stdout == b.stdout, || "reports differ".into())?;
    check(!a.stdout.is_empty(), || "empty report".into())?;
    Ok(format!("{} identical bytes, exit {:?}", a.stdout.len(), a.status.code()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "kernel exactness", Duration::from_secs(1), kernel_exactness),
        (2, "predistance laws", Duration::from_secs(30), predistance_laws),
        (3, "distance oracle agreement", Duration::from_secs(60), distance_oracle),
        (4, "positive corpus", Duration::from_secs(600), positive_corpus),
        (5, "torn envelope", Duration::from_secs(120), torn_envelope),
        (6, "circle of length 3π", Duration::from_secs(5), three_pi_circle),
        (7, "Z/3 disk", Duration::from_secs(5), z3_disk),
        (8, "quasigeodesic properties", Duration::from_secs(300), quasigeodesics),
        (9, "Liberman condition", Duration::from_secs(120), liberman),
        (10, "determinism", Duration::from_secs(120), determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (id, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|note| {
            if elapsed <= limit {
                Ok(note)
            } else {
                Err(format!("took {:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()))
            }
        });
        match result {
            Ok(note) => println!("criterion {id} {name}: pass ({:.2}s) {note}", elapsed.as_secs_f64()),
            Err(why) => {
                let known = UNATTAINABLE.contains(&id);
                if !known {
                    unexpected += 1;
                }
                let tag = if known { "FAIL (unattainable)" } else { "FAIL" };
                println!("criterion {id} {name}: {tag} ({:.2}s) {why}", elapsed.as_secs_f64());
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
