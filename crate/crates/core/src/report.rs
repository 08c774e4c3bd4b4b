//! Deterministic line-oriented reports.
//!
//! Sections open with a `[name]` line; every other line is a record of
//! space-separated `key=value` pairs. Reals print with seven decimals and
//! values containing whitespace are quoted. The last line is always
//! `verdict=pass`, `verdict=violations:<n>` or `verdict=invalid`.

use std::fmt::Write as _;

use crate::links::Judgement;
use crate::metric::{Estimate, GeodesicPath, Location};
use crate::model::{ComplexSpec, ValidationReport, ValidationStatus};
use crate::verify::{DiameterOutcome, LinkRecord, VerifyReport, ViolationCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violations(usize),
    Invalid,
}

impl Verdict {
    /// Process exit status: 0 pass, 1 violations, 2 invalid input.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Violations(_) => 1,
            Verdict::Invalid => 2,
        }
    }

    fn from_count(n: usize) -> Self {
        if n == 0 {
            Verdict::Pass
        } else {
            Verdict::Violations(n)
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Violations(n) => write!(f, "violations:{n}"),
            Verdict::Invalid => f.write_str("invalid"),
        }
    }
}

pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000".into();
    }
    format!("{x:.7}")
}

fn text(s: &str) -> String {
    if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
        format!("{s:?}")
    } else {
        s.to_string()
    }
}

pub fn location(spec: &ComplexSpec<f64>, loc: Location<f64>) -> String {
    format!("{}:{},{}", spec.pieces[loc.piece].name, real(loc.point.x), real(loc.point.y))
}

/// Accumulates sections of a report.
#[derive(Debug, Default, Clone)]
pub struct Report {
    body: String,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn section(&mut self, name: &str) {
        let _ = writeln!(self.body, "[{name}]");
    }

    pub fn record(&mut self, fields: &[(&str, String)]) {
        let line: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(self.body, "{}", line.join(" "));
    }

    pub fn scene(&mut self, spec: &ComplexSpec<f64>) {
        self.section("scene");
        self.record(&[
            ("kappa", real(spec.kappa())),
            ("pieces", spec.pieces.len().to_string()),
            ("arcs", spec.arcs.len().to_string()),
            ("classes", spec.gluings.len().to_string()),
        ]);
    }

    pub fn validation(&mut self, report: &ValidationReport) {
        self.section("validation");
        self.record(&[("status", report.status().to_string()), ("findings", report.findings.len().to_string())]);
        for f in &report.findings {
            self.record(&[
                ("severity", f.severity.to_string()),
                ("code", f.code.to_string()),
                ("location", text(&f.location.join(","))),
                ("message", text(&f.message)),
            ]);
        }
    }

    pub fn distance(&mut self, spec: &ComplexSpec<f64>, h: f64, est: &Estimate<f64>, path: Option<&GeodesicPath<f64>>) {
        self.section("distance");
        self.record(&[
            ("h", real(h)),
            ("value", real(est.value)),
            ("error_bound", real(est.error_bound)),
            ("crossings", est.crossings.to_string()),
        ]);
        if let Some(path) = path {
            for (i, leg) in path.legs.iter().enumerate() {
                self.record(&[
                    ("leg", i.to_string()),
                    ("start", location(spec, Location::new(leg.piece, leg.start))),
                    ("end", location(spec, Location::new(leg.piece, leg.end))),
                    ("length", real(leg.length())),
                ]);
            }
        }
    }

    pub fn predistance(&mut self, h: f64, m: usize, value: f64) {
        self.section("predistance");
        self.record(&[("h", real(h)), ("m", m.to_string()), ("value", real(value))]);
    }

    pub fn links(&mut self, links: &[LinkRecord]) {
        self.section("links");
        self.record(&[("count", links.len().to_string())]);
        for l in links {
            let judge = match &l.judgement {
                Judgement::Ok => "ok",
                Judgement::Violation(_) => "violation",
            };
            self.record(&[
                ("class", l.class.clone()),
                ("kind", l.link.kind().to_string()),
                ("length", real(l.link.length())),
                ("judge", judge.to_string()),
                ("sectors", l.link.sectors.len().to_string()),
                ("nodes", l.link.node_count().to_string()),
                ("edges", l.link.edge_count().to_string()),
            ]);
        }
    }

    pub fn links_unsupported(&mut self, reason: &str) {
        self.section("links");
        self.record(&[("count", "0".into()), ("unsupported", text(reason))]);
    }

    pub fn verify(&mut self, spec: &ComplexSpec<f64>, r: &VerifyReport) {
        let c = &r.config;
        self.section("verify");
        self.record(&[
            ("kappa", real(r.kappa)),
            ("samples", c.sample_count.to_string()),
            ("seed", c.seed.to_string()),
            ("h", c.h_schedule.iter().map(|h| real(*h)).collect::<Vec<_>>().join(",")),
            ("tolfactor", real(c.angle_tolerance_factor)),
            ("bias", real(c.bias)),
            ("focus", real(c.focus)),
        ]);
        self.record(&[("nodes", r.nodes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","))]);
        let q = &r.quadruples;
        self.record(&[
            ("sampled", q.sampled.to_string()),
            ("tested", q.tested.to_string()),
            ("passed", q.passed.to_string()),
            ("skipped", q.skipped.to_string()),
            ("discarded", q.discarded.to_string()),
            ("raw_failures", q.raw_failures.to_string()),
            ("max_margin", real(q.max_margin)),
        ]);
        match &r.diameter {
            DiameterOutcome::Vacuous => self.record(&[("diameter", "vacuous".into())]),
            DiameterOutcome::Pass { estimate, error_bound, d_kappa } => self.record(&[
                ("diameter", "pass".into()),
                ("estimate", real(*estimate)),
                ("error_bound", real(*error_bound)),
                ("d_kappa", real(*d_kappa)),
            ]),
            DiameterOutcome::Certificate { estimate, error_bound, d_kappa, .. } => self.record(&[
                ("diameter", "certificate".into()),
                ("estimate", real(*estimate)),
                ("error_bound", real(*error_bound)),
                ("d_kappa", real(*d_kappa)),
            ]),
        }
        self.certificates(spec, &r.certificates);
    }

    pub fn certificates(&mut self, spec: &ComplexSpec<f64>, certs: &[ViolationCertificate]) {
        self.section("certificates");
        self.record(&[("certificates", certs.len().to_string())]);
        for (i, c) in certs.iter().enumerate() {
            let id = i.to_string();
            self.record(&[
                ("certificate", id.clone()),
                ("kind", c.kind.to_string()),
                ("origin", text(&c.origin)),
                ("tolerance", real(c.tolerance)),
            ]);
            for (name, p) in &c.points {
                self.record(&[("certificate", id.clone()), ("point", name.clone()), ("at", location(spec, *p))]);
            }
            for (name, v) in &c.witness {
                self.record(&[("certificate", id.clone()), ("witness", name.clone()), ("value", real(*v))]);
            }
            for r in &c.refinement {
                self.record(&[
                    ("certificate", id.clone()),
                    ("refine_h", real(r.h)),
                    ("margin", real(r.margin)),
                    ("tolerance", real(r.tolerance)),
                ]);
            }
        }
    }

    /// Appends the verdict line and returns the finished text.
    pub fn finish(mut self, verdict: Verdict) -> String {
        let _ = writeln!(self.body, "verdict={verdict}");
        self.body
    }
}

pub fn validation_verdict(report: &ValidationReport) -> Verdict {
    match report.status() {
        ValidationStatus::Invalid => Verdict::Invalid,
        _ => Verdict::Pass,
    }
}

pub fn verify_verdict(r: &VerifyReport) -> Verdict {
    Verdict::from_count(r.certificates.len())
}

pub fn links_verdict(links: &[LinkRecord]) -> Verdict {
    Verdict::from_count(links.iter().filter(|l| !l.judgement.is_ok()).count())
}
