//! Command dispatch for the `gluing` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::metric::{DiscretizedComplex, Location};
use crate::model::{validate, ComplexSpec, ValidationReport, ValidationStatus};
use crate::report::{links_verdict, location, validation_verdict, verify_verdict, Report, Verdict};
use crate::scene::{load_scene, Scene};
use crate::svg::{render, Overlay};
use crate::verify::{all_links, verify, CertificateKind, VerifierConfig, VerifyReport, ViolationCertificate};

#[derive(Debug, Parser)]
#[command(name = "gluing", version, about = "Distances and curvature checks on glued polygonal complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the gluing hypotheses of a scene.
    Validate { scene: PathBuf },
    /// Glued distance between two points, or the m-predistance with `--m`.
    Distance {
        scene: PathBuf,
        /// Start point as `piece:x,y`.
        #[arg(long)]
        from: String,
        /// End point as `piece:x,y`.
        #[arg(long)]
        to: String,
        /// Bound on the number of glued points along the path.
        #[arg(long)]
        m: Option<usize>,
        /// Sample spacing on the glued set.
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        /// Write the path as an SVG drawing.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Sample quadruples, analyse links and check the diameter bound.
    Verify {
        scene: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Directory for one SVG drawing per certificate.
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
    /// Links of all structural boundary classes.
    Links { scene: PathBuf },
    /// Everything, written to a directory.
    Report {
        scene: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Verifier settings that take precedence over the scene file.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated decreasing spacings.
    #[arg(long, value_delimiter = ',')]
    pub h: Option<Vec<f64>>,
    #[arg(long)]
    pub tolfactor: Option<f64>,
    #[arg(long)]
    pub bias: Option<f64>,
}

impl Overrides {
    fn apply(&self, base: &VerifierConfig) -> Result<VerifierConfig> {
        let mut c = base.clone();
        if let Some(n) = self.samples {
            c.sample_count = n;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(h) = &self.h {
            c.h_schedule = h.clone();
        }
        if let Some(t) = self.tolfactor {
            c.angle_tolerance_factor = t;
        }
        if let Some(b) = self.bias {
            c.bias = b;
        }
        c.check()?;
        Ok(c)
    }
}

/// Parses `piece:x,y`.
pub fn parse_location(spec: &ComplexSpec<f64>, s: &str) -> Result<Location<f64>> {
    let bad = || Error::Domain(format!("expected piece:x,y, found '{s}'"));
    let (name, coords) = s.rsplit_once(':').ok_or_else(bad)?;
    let (x, y) = coords.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    let piece = spec.piece_index(name).ok_or_else(|| Error::Domain(format!("unknown piece '{name}'")))?;
    Ok(Location::new(piece, Point2::new(x, y)))
}

/// Overlay for a certificate: its points, plus the tested path for
/// monotonicity and diameter witnesses.
pub fn certificate_overlay(dc: &DiscretizedComplex<f64>, index: usize, cert: &ViolationCertificate) -> Overlay {
    let mut paths = Vec::new();
    let find = |n: &str| cert.points.iter().find(|(m, _)| m == n).map(|(_, p)| *p);
    let ends = match cert.kind {
        CertificateKind::Monotonicity | CertificateKind::Diameter => find("from").zip(find("to")),
        _ => None,
    };
    if let Some((a, b)) = ends {
        if let Ok(path) = dc.shortest_path(a, b) {
            paths.push(path);
        }
    }
    if cert.kind == CertificateKind::Quadruple {
        if let Some(a) = find("a") {
            for n in ["b", "c", "d"] {
                if let Some(path) = find(n).and_then(|p| dc.shortest_path(a, p).ok()) {
                    paths.push(path);
                }
            }
        }
    }
    Overlay { title: format!("certificate {index}: {} ({})", cert.kind, cert.origin), paths, points: cert.points.clone() }
}

fn write_certificate_svgs(spec: &ComplexSpec<f64>, r: &VerifyReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let finest = r.config.h_schedule.last().copied().expect("checked schedule");
    let dc = DiscretizedComplex::new(spec, finest)?;
    for (i, cert) in r.certificates.iter().enumerate() {
        let svg = render(spec, &certificate_overlay(&dc, i, cert));
        std::fs::write(dir.join(format!("certificate-{i}.svg")), svg)?;
    }
    Ok(())
}

fn validated(scene: &Scene, report: &mut Report) -> ValidationReport {
    let v = validate(&scene.spec);
    report.scene(&scene.spec);
    report.validation(&v);
    v
}

fn invalid(v: &ValidationReport) -> bool {
    v.status() == ValidationStatus::Invalid
}

/// Runs a parsed command and returns the report text and verdict.
pub fn execute(command: &Command) -> Result<(String, Verdict)> {
    let mut report = Report::new();
    match command {
        Command::Validate { scene } => {
            let scene = load_scene(scene)?;
            let v = validated(&scene, &mut report);
            Ok((report.finish(validation_verdict(&v)), validation_verdict(&v)))
        }
        Command::Distance { scene, from, to, m, h, svg } => {
            let scene = load_scene(scene)?;
            let v = validated(&scene, &mut report);
            if invalid(&v) {
                return Ok((report.finish(Verdict::Invalid), Verdict::Invalid));
            }
            let spec = &scene.spec;
            let x = parse_location(spec, from)?;
            let y = parse_location(spec, to)?;
            let dc = DiscretizedComplex::new(spec, *h)?;
            report.section("query");
            report.record(&[("from", location(spec, x)), ("to", location(spec, y))]);
            match m {
                Some(m) => report.predistance(*h, *m, dc.predistance(x, y, *m)?),
                None => {
                    let est = dc.distance(x, y)?;
                    let path = if est.value.is_finite() { Some(dc.shortest_path(x, y)?) } else { None };
                    report.distance(spec, *h, &est, path.as_ref());
                    if let (Some(file), Some(path)) = (svg, path) {
                        let overlay = Overlay {
                            title: format!("distance {}", crate::report::real(est.value)),
                            paths: vec![path],
                            points: vec![("from".into(), x), ("to".into(), y)],
                        };
                        std::fs::write(file, render(spec, &overlay))?;
                    }
                }
            }
            Ok((report.finish(Verdict::Pass), Verdict::Pass))
        }
        Command::Verify { scene, overrides, svg_dir } => {
            let scene = load_scene(scene)?;
            let v = validated(&scene, &mut report);
            if invalid(&v) {
                return Ok((report.finish(Verdict::Invalid), Verdict::Invalid));
            }
            let config = overrides.apply(&scene.config)?;
            let r = verify(&scene.spec, &config)?;
            report.links(&r.links);
            report.verify(&scene.spec, &r);
            if let Some(dir) = svg_dir {
                write_certificate_svgs(&scene.spec, &r, dir)?;
            }
            let verdict = verify_verdict(&r);
            Ok((report.finish(verdict), verdict))
        }
        Command::Links { scene } => {
            let scene = load_scene(scene)?;
            let v = validated(&scene, &mut report);
            if invalid(&v) {
                return Ok((report.finish(Verdict::Invalid), Verdict::Invalid));
            }
            if !scene.spec.is_two_dimensional() {
                report.links_unsupported("links need a two-dimensional complex");
                return Ok((report.finish(Verdict::Pass), Verdict::Pass));
            }
            let links = all_links(&scene.spec)?;
            report.links(&links);
            let verdict = links_verdict(&links);
            Ok((report.finish(verdict), verdict))
        }
        Command::Report { scene, overrides, out } => {
            let loaded = load_scene(scene)?;
            let v = validated(&loaded, &mut report);
            std::fs::create_dir_all(out)?;
            std::fs::write(out.join("scene.svg"), render(&loaded.spec, &Overlay::default()))?;
            let verdict = if invalid(&v) {
                Verdict::Invalid
            } else {
                let config = overrides.apply(&loaded.config)?;
                let r = verify(&loaded.spec, &config)?;
                report.links(&r.links);
                report.verify(&loaded.spec, &r);
                write_certificate_svgs(&loaded.spec, &r, out)?;
                verify_verdict(&r)
            };
            let text = report.finish(verdict);
            std::fs::write(out.join("report.txt"), &text)?;
            Ok((text, verdict))
        }
    }
}

/// Entry point shared by the binary and tests; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, verdict)) => {
            let _ = out.write_all(text.as_bytes());
            verdict.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(out, "verdict={}", Verdict::Invalid);
            Verdict::Invalid.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    #[test]
    fn locations() {
        let spec = pillowcase();
        let l = parse_location(&spec, "sq2:0.5,0.25").unwrap();
        assert_eq!(l.piece, 1);
        assert_eq!(l.point, p(0.5, 0.25));
        assert!(parse_location(&spec, "sq3:0,0").is_err());
        assert!(parse_location(&spec, "sq1:0;0").is_err());
        assert!(parse_location(&spec, "sq1").is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let o = Overrides { samples: Some(5), h: Some(vec![0.1, 0.05]), ..Default::default() };
        let c = o.apply(&VerifierConfig::default()).unwrap();
        assert_eq!(c.sample_count, 5);
        assert_eq!(c.h_schedule, vec![0.1, 0.05]);
        assert_eq!(c.seed, 1);
        let bad = Overrides { h: Some(vec![0.1, 0.2]), ..Default::default() };
        assert!(bad.apply(&VerifierConfig::default()).is_err());
    }

    #[test]
    fn usage_errors_exit_with_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["gluing", "frobnicate"], &mut out, &mut err), 2);
        assert_eq!(run(["gluing", "validate", "/nonexistent/scene"], &mut out, &mut err), 2);
        assert!(String::from_utf8(out).unwrap().ends_with("verdict=invalid\n"));
    }
}
