//! Individual comparison checks on a discretized complex.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::kernel::{comparison_angle, d_kappa, model_side, TriangleSides};
use crate::links::build_link;
use crate::metric::{DiscretizedComplex, Estimate, GeodesicPath, Location};
use crate::model::{BoundaryPath, EPoint};

/// Result of one check: `margin` is the amount by which the tested
/// inequality is violated (negative when it holds with room to spare).
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass { margin: f64, tolerance: f64 },
    Fail { margin: f64, tolerance: f64, witness: Vec<(String, f64)> },
    Skipped(String),
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass { .. })
    }

    pub fn margin(&self) -> Option<f64> {
        match self {
            Outcome::Pass { margin, .. } | Outcome::Fail { margin, .. } => Some(*margin),
            Outcome::Skipped(_) => None,
        }
    }

    pub fn tolerance(&self) -> Option<f64> {
        match self {
            Outcome::Pass { tolerance, .. } | Outcome::Fail { tolerance, .. } => Some(*tolerance),
            Outcome::Skipped(_) => None,
        }
    }

    fn judge(margin: f64, tolerance: f64, witness: impl FnOnce() -> Vec<(String, f64)>) -> Self {
        if margin > tolerance {
            Outcome::Fail { margin, tolerance, witness: witness() }
        } else {
            Outcome::Pass { margin, tolerance }
        }
    }
}

/// Index pairs of the six distances of a quadruple, apex first.
pub const QUAD_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Four points `a, b, c, d` (apex `a`) with their six glued distances.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadruple {
    pub points: [Location<f64>; 4],
    pub distances: [Estimate<f64>; 6],
}

impl Quadruple {
    pub fn measure(dc: &DiscretizedComplex<f64>, points: [Location<f64>; 4]) -> Result<Self> {
        let q = points.map(|p| dc.query(p)).into_iter().collect::<Result<Vec<_>>>()?;
        let fields = [dc.field(&q[0]), dc.field(&q[1]), dc.field(&q[2])];
        let distances = QUAD_PAIRS.map(|(i, j)| fields[i].to(&q[j]));
        Ok(Self { points, distances })
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        let k = QUAD_PAIRS.iter().position(|&p| p == (i, j)).expect("distinct indices below four");
        self.distances[k].value
    }

    pub fn min_pairwise(&self) -> f64 {
        self.distances.iter().map(|d| d.value).fold(f64::INFINITY, f64::min)
    }

    pub fn max_pairwise(&self) -> f64 {
        self.distances.iter().map(|d| d.value).fold(0.0, f64::max)
    }

    /// Angle tolerance from the distance error bounds.
    pub fn tolerance(&self, factor: f64) -> f64 {
        let total: f64 = self.distances.iter().map(|d| d.error_bound).sum();
        factor * total / self.min_pairwise()
    }

    /// Comparison angles `bac`, `cad`, `dab`.
    pub fn angles(&self, kappa: f64) -> Result<[f64; 3]> {
        let d = |i, j| self.distance(i, j);
        let angle = |opp: f64, x: f64, y: f64| comparison_angle(kappa, &TriangleSides::clamped(opp, x, y)).map(|a| a.0);
        Ok([
            angle(d(1, 2), d(0, 1), d(0, 2))?,
            angle(d(2, 3), d(0, 2), d(0, 3))?,
            angle(d(3, 1), d(0, 3), d(0, 1))?,
        ])
    }

    pub fn witness(&self, kappa: f64) -> Vec<(String, f64)> {
        let mut w: Vec<(String, f64)> = Vec::new();
        let names = ["a", "b", "c", "d"];
        for (k, &(i, j)) in QUAD_PAIRS.iter().enumerate() {
            w.push((format!("d_{}{}", names[i], names[j]), self.distances[k].value));
            w.push((format!("err_{}{}", names[i], names[j]), self.distances[k].error_bound));
        }
        if let Ok(a) = self.angles(kappa) {
            w.push(("angle_bac".into(), a[0]));
            w.push(("angle_cad".into(), a[1]));
            w.push(("angle_dab".into(), a[2]));
            w.push(("angle_sum".into(), a.iter().sum()));
        }
        w
    }
}

/// The quadruple comparison: the three comparison angles at the apex sum
/// to at most 2π.
pub fn quadruple_test(kappa: f64, quad: &Quadruple, tol: f64) -> Result<Outcome> {
    if quad.distances.iter().any(|d| !d.value.is_finite()) {
        return Ok(Outcome::Skipped("infinite distance".into()));
    }
    if kappa > 0.0 && quad.max_pairwise() >= d_kappa(kappa) {
        return Ok(Outcome::Skipped("distance beyond D_κ".into()));
    }
    let sum: f64 = quad.angles(kappa)?.iter().sum();
    Ok(Outcome::judge(sum - TAU, tol, || quad.witness(kappa)))
}

/// Along a path from `γ(0)`, the comparison angle
/// `∠̃(|p γ(τ)|; τ, |p γ(0)|)` must not increase.
pub fn monotonicity_check(
    dc: &DiscretizedComplex<f64>,
    kappa: f64,
    path: &GeodesicPath<f64>,
    p: Location<f64>,
    factor: f64,
    grid: usize,
) -> Result<Outcome> {
    let dk = d_kappa(kappa);
    let field = dc.field(&dc.query(p)?);
    let at = |t: f64| -> Result<Estimate<f64>> { Ok(field.to(&dc.query(path.point_at(t))?)) };
    let start = at(0.0)?;
    if !(start.value < dk) || !start.value.is_finite() {
        return Ok(Outcome::Skipped("base distance beyond D_κ".into()));
    }
    let mut samples: Vec<(f64, f64, f64)> = Vec::new();
    for i in 1..=grid {
        let tau = path.total_length * i as f64 / grid as f64;
        let e = at(tau)?;
        if tau >= dk || !(e.value < dk) {
            break;
        }
        let f = comparison_angle(kappa, &TriangleSides::clamped(e.value, tau, start.value))?.0;
        samples.push((tau, f, e.error_bound));
    }
    if samples.len() < 2 || start.value <= 0.0 {
        return Ok(Outcome::Skipped("window too short".into()));
    }
    let mut worst: Option<(f64, f64, usize, usize)> = None;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let (ti, fi, ei) = samples[i];
            let (_, fj, ej) = samples[j];
            let tol = factor * (start.error_bound + ei + ej) / ti.min(start.value);
            let rise = fj - fi;
            if worst.is_none_or(|(m, t, _, _)| rise - tol > m - t) {
                worst = Some((rise, tol, i, j));
            }
        }
    }
    let (margin, tol, i, j) = worst.expect("at least two samples");
    Ok(Outcome::judge(margin, tol, || {
        vec![
            ("base_distance".into(), start.value),
            ("tau_1".into(), samples[i].0),
            ("angle_1".into(), samples[i].1),
            ("tau_2".into(), samples[j].0),
            ("angle_2".into(), samples[j].1),
        ]
    }))
}

/// The four-point form of κ-convexity along a shortest path of the glued
/// set: `|p q₂| ≥ |p̃ q̃₂|` where `q̃₁ q̃₂ q̃₃` is a model segment and
/// `|p̃ q̃₁| = |p q₁|`, `|p̃ q̃₃| = |p q₃|`.
pub fn liberman_check(
    dc: &DiscretizedComplex<f64>,
    kappa: f64,
    curve: &BoundaryPath<f64>,
    ps: &[Location<f64>],
    factor: f64,
    grid: usize,
) -> Result<Outcome> {
    let dk = d_kappa(kappa);
    let spec = dc.spec();
    let len = curve.length;
    let ts: Vec<f64> = (0..=grid).map(|k| len * k as f64 / grid as f64).collect();
    let qs = ts
        .iter()
        .map(|&t| dc.query(Location::new(curve.piece, curve.point_at(spec, t))))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: Option<(f64, f64, Vec<(String, f64)>)> = None;
    let mut tested = 0usize;
    for &p in ps {
        let field = dc.field(&dc.query(p)?);
        let d: Vec<Estimate<f64>> = qs.iter().map(|q| field.to(q)).collect();
        for i in 0..ts.len() {
            for k in i + 2..ts.len() {
                let span = ts[k] - ts[i];
                let (d1, d3) = (d[i].value, d[k].value);
                if !(span <= d1 + d3 && d1 + d3 < 2.0 * dk - span) || !(d1 < dk) || !(span < dk) {
                    continue;
                }
                let alpha = comparison_angle(kappa, &TriangleSides::clamped(d3, d1, span))?;
                for j in i + 1..k {
                    let Ok(model) = model_side(kappa, d1, ts[j] - ts[i], alpha) else { continue };
                    tested += 1;
                    let deficit = model - d[j].value;
                    let lip = d1.max(d3) / model.max(dc.h());
                    let tol = factor * (d[j].error_bound + (d[i].error_bound + d[k].error_bound) * lip.max(1.0));
                    if worst.as_ref().is_none_or(|(m, t, _)| deficit - tol > m - t) {
                        let w = vec![
                            ("p_x".into(), p.point.x),
                            ("p_y".into(), p.point.y),
                            ("t_1".into(), ts[i]),
                            ("t_2".into(), ts[j]),
                            ("t_3".into(), ts[k]),
                            ("d_pq1".into(), d1),
                            ("d_pq2".into(), d[j].value),
                            ("d_pq3".into(), d3),
                            ("model_pq2".into(), model),
                        ];
                        worst = Some((deficit, tol, w));
                    }
                }
            }
        }
    }
    match worst {
        None => Ok(Outcome::Skipped(format!("no admissible triple ({tested} tested)"))),
        Some((margin, tolerance, w)) => Ok(Outcome::judge(margin, tolerance, || w)),
    }
}

/// At an interior crossing of a path the incoming and outgoing directions
/// must be antipodal in the glued link: `|ξζ| + |ηζ| = π` for every `ζ`.
pub fn antipodal_check(dc: &DiscretizedComplex<f64>, path: &GeodesicPath<f64>, crossing: usize, factor: f64) -> Result<Outcome> {
    let spec = dc.spec();
    if !spec.is_two_dimensional() {
        return Err(Error::Unsupported("antipodal check needs a complex of polygons".into()));
    }
    if crossing >= path.crossings.len() {
        return Err(Error::Domain(format!("path has no crossing {crossing}")));
    }
    let (inc, out) = (path.legs[crossing], path.legs[crossing + 1]);
    let shortest = inc.length().min(out.length());
    if shortest <= 0.0 {
        return Ok(Outcome::Skipped("zero-length leg".into()));
    }
    let node = &dc.nodes()[path.crossings[crossing]];
    let rep = node
        .representatives
        .iter()
        .find(|r| r.piece == inc.piece && r.point.dist(inc.end) <= 1e-9)
        .ok_or_else(|| Error::NumericInconsistency("incoming leg does not end at its crossing".into()))?;
    let link = build_link(spec, EPoint { piece: rep.piece, s: rep.s.expect("glued samples lie on the boundary") })?;
    let xi = link.direction(inc.piece, inc.end, inc.start - inc.end);
    let eta = link.direction(out.piece, out.start, out.end - out.start);
    let (Some(xi), Some(eta)) = (xi, eta) else {
        return Err(Error::NumericInconsistency("path direction does not point into its piece".into()));
    };
    let mut margin: f64 = 0.0;
    for zeta in link.sample_directions(16) {
        let dev = (link.distance(xi, zeta) + link.distance(eta, zeta) - PI).abs();
        margin = margin.max(dev);
    }
    let tol = factor * dc.h() / shortest;
    Ok(Outcome::judge(margin, tol, || {
        vec![
            ("link_length".into(), link.length()),
            ("xi_eta".into(), link.distance(xi, eta)),
            ("incoming_leg".into(), inc.length()),
            ("outgoing_leg".into(), out.length()),
        ]
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiameterOutcome {
    Vacuous,
    Pass { estimate: f64, error_bound: f64, d_kappa: f64 },
    Certificate { estimate: f64, error_bound: f64, d_kappa: f64, from: Location<f64>, to: Location<f64> },
}

/// Points at spacing at most `h` along every piece boundary (the whole
/// segment for one-dimensional pieces), vertices included.
fn diameter_candidates(dc: &DiscretizedComplex<f64>) -> Vec<Location<f64>> {
    let mut out = Vec::new();
    for (k, piece) in dc.spec().pieces.iter().enumerate() {
        let len = piece.boundary_length();
        let n = (len / dc.h()).ceil().max(1.0) as usize;
        let end = if piece.is_polygon() { n } else { n + 1 };
        for i in 0..end {
            out.push(Location::new(k, piece.point_at(len * i as f64 / n as f64)));
        }
        for v in &piece.vertices {
            out.push(Location::new(k, *v));
        }
    }
    out
}

/// For κ > 0 every component has diameter at most `D_κ`.
pub fn diameter_check(dc: &DiscretizedComplex<f64>, kappa: f64) -> Result<DiameterOutcome> {
    if kappa <= 0.0 {
        return Ok(DiameterOutcome::Vacuous);
    }
    let dk = d_kappa(kappa);
    let candidates = diameter_candidates(dc);
    let queries = candidates.iter().map(|&c| dc.query(c)).collect::<Result<Vec<_>>>()?;
    let mut best: Option<(Estimate<f64>, usize, usize)> = None;
    let mut largest = 0.0f64;
    for i in 0..queries.len() {
        let field = dc.field(&queries[i]);
        for j in i + 1..queries.len() {
            let e = field.to(&queries[j]);
            if !e.value.is_finite() {
                continue;
            }
            largest = largest.max(e.value);
            if best.is_none_or(|(b, _, _)| e.value - e.error_bound > b.value - b.error_bound) {
                best = Some((e, i, j));
            }
        }
    }
    let Some((e, i, j)) = best else {
        return Ok(DiameterOutcome::Pass { estimate: 0.0, error_bound: 0.0, d_kappa: dk });
    };
    if e.value - e.error_bound > dk {
        Ok(DiameterOutcome::Certificate {
            estimate: e.value,
            error_bound: e.error_bound,
            d_kappa: dk,
            from: candidates[i],
            to: candidates[j],
        })
    } else {
        Ok(DiameterOutcome::Pass { estimate: largest, error_bound: e.error_bound, d_kappa: dk })
    }
}
