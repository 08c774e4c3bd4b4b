//! Numerical refutation of lower curvature bounds on a glued complex.
//!
//! Random quadruples are tested against the comparison condition at the
//! coarsest spacing; every failure is re-tested at each finer spacing and
//! only failures that persist become certificates. Boundary classes whose
//! link is not a short circle or interval are probed directly.

mod checks;
mod sampling;

pub use checks::{
    antipodal_check, diameter_check, liberman_check, monotonicity_check, quadruple_test, DiameterOutcome, Outcome,
    Quadruple, QUAD_PAIRS,
};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::d_kappa;
use crate::links::{build_link, structural_points, Direction, Judgement, LinkKind, LinkSpace, LINK_TOLERANCE};
use crate::metric::{DiscretizedComplex, Location};
use crate::model::{ComplexSpec, EPoint};
use sampling::Sampler;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifierConfig {
    pub sample_count: usize,
    pub seed: u64,
    /// Sample spacings, strictly decreasing.
    pub h_schedule: Vec<f64>,
    pub angle_tolerance_factor: f64,
    /// Fraction of apexes drawn near the glued set.
    pub bias: f64,
    /// Distance from the glued set for biased apexes, in units of the
    /// coarsest spacing.
    pub focus: f64,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        Self {
            sample_count: 10_000,
            seed: 1,
            h_schedule: vec![0.02, 0.01, 0.005],
            angle_tolerance_factor: 4.0,
            bias: 0.7,
            focus: 5.0,
        }
    }
}

impl VerifierConfig {
    pub fn check(&self) -> Result<()> {
        if self.h_schedule.is_empty() {
            return Err(Error::Domain("h schedule is empty".into()));
        }
        if self.h_schedule.iter().any(|h| !(*h > 0.0)) {
            return Err(Error::Domain("h schedule entries must be positive".into()));
        }
        if self.h_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Domain("h schedule must be strictly decreasing".into()));
        }
        if !(0.0..=1.0).contains(&self.bias) {
            return Err(Error::Domain(format!("bias {} outside [0, 1]", self.bias)));
        }
        if !(self.angle_tolerance_factor >= 0.0) {
            return Err(Error::Domain("tolerance factor must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Quadruple,
    Monotonicity,
    Liberman,
    Diameter,
    Link,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::Quadruple => "quadruple",
            CertificateKind::Monotonicity => "monotonicity",
            CertificateKind::Liberman => "liberman",
            CertificateKind::Diameter => "diameter",
            CertificateKind::Link => "link",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub h: f64,
    pub margin: f64,
    pub tolerance: f64,
}

/// A witness refuting the curvature bound, with the data needed to
/// re-check it.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationCertificate {
    pub kind: CertificateKind,
    /// Where the witness came from: a sample index or a boundary class.
    pub origin: String,
    pub points: Vec<(String, Location<f64>)>,
    pub witness: Vec<(String, f64)>,
    pub tolerance: f64,
    pub refinement: Vec<Refinement>,
}

impl ViolationCertificate {
    pub fn final_margin(&self) -> f64 {
        self.refinement.last().map_or(f64::INFINITY, |r| r.margin)
    }
}

/// Link at one structural boundary class.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkRecord {
    pub class: String,
    pub point: EPoint<f64>,
    pub location: Location<f64>,
    pub link: LinkSpace<f64>,
    pub judgement: Judgement,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuadrupleStats {
    pub sampled: usize,
    pub tested: usize,
    pub passed: usize,
    pub skipped: usize,
    pub discarded: usize,
    pub raw_failures: usize,
    /// Largest `angle sum − 2π` among tested quadruples.
    pub max_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub kappa: f64,
    pub config: VerifierConfig,
    pub nodes: Vec<usize>,
    pub quadruples: QuadrupleStats,
    pub links: Vec<LinkRecord>,
    pub diameter: DiameterOutcome,
    pub certificates: Vec<ViolationCertificate>,
}

/// Label of a boundary class: the piece name and the coordinates of its
/// first preimage.
pub fn class_label(spec: &ComplexSpec<f64>, p: EPoint<f64>) -> String {
    let q = spec.pieces[p.piece].point_at(p.s);
    format!("{}:{:.7},{:.7}", spec.pieces[p.piece].name, q.x, q.y)
}

/// Links at all structural boundary classes of a two-dimensional complex.
pub fn all_links(spec: &ComplexSpec<f64>) -> Result<Vec<LinkRecord>> {
    structural_points(spec)?
        .into_iter()
        .map(|p| {
            let link = build_link(spec, p)?;
            let judgement = link.judge();
            Ok(LinkRecord {
                class: class_label(spec, p),
                point: p,
                location: Location::new(p.piece, spec.pieces[p.piece].point_at(p.s)),
                link,
                judgement,
            })
        })
        .collect()
}

struct Ladder {
    dcs: Vec<DiscretizedComplex<f64>>,
}

impl Ladder {
    /// Runs a check at every spacing; `Some` when it fails at all of them.
    fn persistent<F>(&self, mut check: F) -> Result<Option<(Vec<Refinement>, Outcome)>>
    where
        F: FnMut(&DiscretizedComplex<f64>) -> Result<Outcome>,
    {
        let mut history = Vec::new();
        let mut last = None;
        for dc in &self.dcs {
            let out = check(dc)?;
            match &out {
                Outcome::Fail { margin, tolerance, .. } => {
                    history.push(Refinement { h: dc.h(), margin: *margin, tolerance: *tolerance })
                }
                _ => return Ok(None),
            }
            last = Some(out);
        }
        Ok(last.map(|o| (history, o)))
    }
}

fn fail_parts(out: Outcome) -> (f64, Vec<(String, f64)>) {
    match out {
        Outcome::Fail { tolerance, witness, .. } => (tolerance, witness),
        _ => unreachable!("persistent outcomes are failures"),
    }
}

/// Three directions of a link, as far apart from each other as the
/// sampled directions allow.
fn spread_directions(link: &LinkSpace<f64>) -> Option<[Direction<f64>; 3]> {
    let dirs = link.sample_directions(24);
    let n = dirs.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = link.distance(dirs[i], dirs[j]);
        }
    }
    let mut best: Option<(f64, [usize; 3])> = None;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = dist[i * n + j].min(dist[i * n + k]).min(dist[j * n + k]);
                if m.is_finite() && best.is_none_or(|(b, _)| m > b + 1e-12) {
                    best = Some((m, [i, j, k]));
                }
            }
        }
    }
    best.filter(|(m, _)| *m > 1e-9).map(|(_, idx)| idx.map(|i| dirs[i]))
}

/// Points at distance `r` from the class along three spread directions;
/// `r` shrinks until all of them lie in their pieces.
/// Probe triples along the given directions, at halving radii no smaller
/// than `min_r`, largest first.
fn probe_points(
    spec: &ComplexSpec<f64>,
    link: &LinkSpace<f64>,
    dirs: &[Direction<f64>; 3],
    min_r: f64,
) -> Vec<[Location<f64>; 3]> {
    let diam = dirs.iter().map(|d| spec.pieces[link.sectors[d.sector].piece].diameter()).fold(f64::INFINITY, f64::min);
    let mut r = (0.25 * diam).min(1.0);
    let mut out = Vec::new();
    while r >= min_r {
        let pts = dirs.map(|d| {
            let s = &link.sectors[d.sector];
            Location::new(s.piece, s.point + link.vector(d) * r)
        });
        if pts.iter().all(|p| spec.pieces[p.piece].contains(p.point)) {
            out.push(pts);
        }
        r *= 0.5;
    }
    out
}

fn probe_class(
    spec: &ComplexSpec<f64>,
    ladder: &Ladder,
    record: &LinkRecord,
    kappa: f64,
    factor: f64,
) -> Result<Vec<ViolationCertificate>> {
    let mut out = Vec::new();
    let finest = ladder.dcs.last().expect("non-empty ladder").h();
    let coarsest = ladder.dcs[0].h();
    let Some(dirs) = spread_directions(&record.link) else { return Ok(out) };
    let apex = record.location;
    let candidates = probe_points(spec, &record.link, &dirs, 10.0 * coarsest.max(finest));
    let mut chosen = None;
    for pts in &candidates {
        let q = Quadruple::measure(&ladder.dcs[0], [apex, pts[0], pts[1], pts[2]])?;
        if matches!(quadruple_test(kappa, &q, q.tolerance(factor))?, Outcome::Fail { .. }) {
            chosen = Some(*pts);
            break;
        }
    }
    let Some([b, c, d]) = chosen.or_else(|| candidates.first().copied()) else {
        return Ok(out);
    };
    let named = |pts: &[(&str, Location<f64>)]| pts.iter().map(|(n, p)| (n.to_string(), *p)).collect::<Vec<_>>();

    let quad = ladder.persistent(|dc| {
        let q = Quadruple::measure(dc, [apex, b, c, d])?;
        quadruple_test(kappa, &q, q.tolerance(factor))
    })?;
    if let Some((refinement, last)) = quad {
        let (tolerance, witness) = fail_parts(last);
        out.push(ViolationCertificate {
            kind: CertificateKind::Quadruple,
            origin: format!("probe {}", record.class),
            points: named(&[("a", apex), ("b", b), ("c", c), ("d", d)]),
            witness,
            tolerance,
            refinement,
        });
    }

    // the path between the two farthest probe directions, watched from the third
    let pairs = [(b, d, c), (b, c, d), (c, d, b)];
    let link = &record.link;
    let spread = |x: usize, y: usize| link.distance(dirs[x], dirs[y]);
    let order = [spread(0, 2), spread(0, 1), spread(1, 2)];
    let k = (0..3).fold(0, |best, i| if order[i] > order[best] { i } else { best });
    let (x, y, watch) = pairs[k];
    let mono = ladder.persistent(|dc| match dc.shortest_path(x, y) {
        Ok(path) => monotonicity_check(dc, kappa, &path, watch, factor, 32),
        Err(_) => Ok(Outcome::Skipped("unreachable".into())),
    })?;
    if let Some((refinement, last)) = mono {
        let (tolerance, witness) = fail_parts(last);
        out.push(ViolationCertificate {
            kind: CertificateKind::Monotonicity,
            origin: format!("probe {}", record.class),
            points: named(&[("from", x), ("to", y), ("p", watch)]),
            witness,
            tolerance,
            refinement,
        });
    }
    Ok(out)
}

/// Runs the full verifier: sampled quadruples, link analysis with probes
/// at violating classes, and the diameter bound.
pub fn verify(spec: &ComplexSpec<f64>, config: &VerifierConfig) -> Result<VerifyReport> {
    config.check()?;
    let kappa = spec.kappa();
    let ladder = Ladder {
        dcs: config.h_schedule.iter().map(|&h| DiscretizedComplex::new(spec, h)).collect::<Result<Vec<_>>>()?,
    };
    let h0 = config.h_schedule[0];
    let factor = config.angle_tolerance_factor;
    let sampler = Sampler::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let samples: Vec<[Location<f64>; 4]> = (0..config.sample_count)
        .map(|_| {
            let apex = if rng.gen::<f64>() < config.bias {
                sampler.near_glued(&mut rng, config.focus * h0)
            } else {
                sampler.uniform(&mut rng)
            };
            [apex, sampler.uniform(&mut rng), sampler.uniform(&mut rng), sampler.uniform(&mut rng)]
        })
        .collect();

    let dk = d_kappa(kappa);
    let coarse = &ladder.dcs[0];
    let evaluated: Vec<Result<(Quadruple, Outcome)>> = samples
        .par_iter()
        .map(|pts| {
            let q = Quadruple::measure(coarse, *pts)?;
            if q.min_pairwise() < 10.0 * h0 {
                return Ok((q, Outcome::Skipped("degenerate".into())));
            }
            if kappa > 0.0 && q.max_pairwise() >= dk - 10.0 * h0 {
                return Ok((q, Outcome::Skipped("distance beyond D_κ".into())));
            }
            let out = quadruple_test(kappa, &q, q.tolerance(factor))?;
            Ok((q, out))
        })
        .collect();

    let mut stats = QuadrupleStats { sampled: samples.len(), max_margin: f64::NEG_INFINITY, ..Default::default() };
    let mut failures = Vec::new();
    for (i, r) in evaluated.into_iter().enumerate() {
        let (_, out) = r?;
        match &out {
            Outcome::Skipped(reason) if reason == "degenerate" => stats.discarded += 1,
            Outcome::Skipped(_) => stats.skipped += 1,
            Outcome::Pass { margin, .. } => {
                stats.tested += 1;
                stats.passed += 1;
                stats.max_margin = stats.max_margin.max(*margin);
            }
            Outcome::Fail { margin, .. } => {
                stats.tested += 1;
                stats.raw_failures += 1;
                stats.max_margin = stats.max_margin.max(*margin);
                failures.push(i);
            }
        }
    }
    if stats.tested == 0 {
        stats.max_margin = 0.0;
    }

    let mut certificates = Vec::new();
    for i in failures {
        let pts = samples[i];
        let persisted = ladder.persistent(|dc| {
            let q = Quadruple::measure(dc, pts)?;
            quadruple_test(kappa, &q, q.tolerance(factor))
        })?;
        if let Some((refinement, last)) = persisted {
            let (tolerance, witness) = fail_parts(last);
            certificates.push(ViolationCertificate {
                kind: CertificateKind::Quadruple,
                origin: format!("sample {i}"),
                points: ["a", "b", "c", "d"].iter().zip(pts).map(|(n, p)| (n.to_string(), p)).collect(),
                witness,
                tolerance,
                refinement,
            });
        }
    }

    let links = if spec.is_two_dimensional() { all_links(spec)? } else { Vec::new() };
    for record in &links {
        let Judgement::Violation(reason) = &record.judgement else { continue };
        let link = &record.link;
        let mut witness = vec![
            ("length".to_string(), link.length()),
            ("nodes".to_string(), link.node_count() as f64),
            ("edges".to_string(), link.edge_count() as f64),
        ];
        let bound = match link.kind() {
            LinkKind::Circle => std::f64::consts::TAU,
            LinkKind::Interval => std::f64::consts::PI,
            LinkKind::Graph => 0.0,
        };
        witness.push(("bound".to_string(), bound));
        certificates.push(ViolationCertificate {
            kind: CertificateKind::Link,
            origin: format!("{} {} ({reason})", record.class, link.kind()),
            points: vec![("class".to_string(), record.location)],
            witness,
            tolerance: LINK_TOLERANCE,
            refinement: Vec::new(),
        });
        certificates.extend(probe_class(spec, &ladder, record, kappa, factor)?);
    }

    let finest = ladder.dcs.last().expect("non-empty ladder");
    let diameter = diameter_check(finest, kappa)?;
    if let DiameterOutcome::Certificate { estimate, error_bound, d_kappa, from, to } = &diameter {
        certificates.push(ViolationCertificate {
            kind: CertificateKind::Diameter,
            origin: "diameter".to_string(),
            points: vec![("from".to_string(), *from), ("to".to_string(), *to)],
            witness: vec![
                ("estimate".to_string(), *estimate),
                ("error_bound".to_string(), *error_bound),
                ("d_kappa".to_string(), *d_kappa),
            ],
            tolerance: *error_bound,
            refinement: vec![Refinement { h: finest.h(), margin: estimate - d_kappa, tolerance: *error_bound }],
        });
    }

    Ok(VerifyReport {
        kappa,
        config: config.clone(),
        nodes: ladder.dcs.iter().map(|dc| dc.nodes().len()).collect(),
        quadruples: stats,
        links,
        diameter,
        certificates,
    })
}
