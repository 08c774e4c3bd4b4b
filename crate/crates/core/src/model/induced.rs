//! The length metric induced on the glued set, before gluing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::model::{validate::FindingCode, Charts, ComplexSpec, EPoint, Severity, ValidationReport};
use crate::scalar::Scalar;

/// Relative tolerance of the isometry check, in units of the diameter of `E`.
pub const ISOMETRY_TOLERANCE: f64 = 1e-6;

/// A shortest path inside the union of arcs of one piece, listed by boundary
/// positions. Consecutive positions are joined by a straight boundary piece.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPath<S> {
    pub piece: usize,
    pub positions: Vec<S>,
    pub length: S,
}

impl<S: Scalar> BoundaryPath<S> {
    /// Point at arclength `ell` from the start of the path.
    pub fn point_at(&self, spec: &ComplexSpec<S>, ell: S) -> Point2<S> {
        let piece = &spec.pieces[self.piece];
        let mut acc = S::zero();
        for w in self.positions.windows(2) {
            let a = piece.point_at(w[0]);
            let b = piece.point_at(w[1]);
            let len = piece.position_gap(w[0], w[1]);
            if ell <= acc + len || len <= S::zero() {
                let t = if len > S::zero() { ((ell - acc) / len).max(S::zero()).min(S::one()) } else { S::zero() };
                return a.lerp(b, t);
            }
            acc = acc + len;
        }
        piece.point_at(*self.positions.last().expect("path has at least one position"))
    }
}

struct EGraph<S> {
    nodes: Vec<EPoint<S>>,
    adj: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> EGraph<S> {
    fn node(&mut self, charts: &Charts<S>, p: EPoint<S>) -> usize {
        if let Some(i) = self.nodes.iter().position(|q| charts.same_point(*q, p)) {
            return i;
        }
        self.nodes.push(p);
        self.adj.push(Vec::new());
        self.nodes.len() - 1
    }

    fn build(charts: &Charts<S>, extra: &[EPoint<S>]) -> Self {
        let mut g = EGraph { nodes: Vec::new(), adj: Vec::new() };
        let spec = charts.spec();
        for arc in 0..spec.arcs.len() {
            let mut ts = charts.arc_breakpoints(arc);
            for &p in extra {
                ts.extend(charts.arc_params_at(arc, p));
            }
            ts.sort_by(|a, b| crate::scalar::cmp_scalar(*a, *b));
            let ids: Vec<usize> = ts.iter().map(|&t| g.node(charts, charts.arc_point(arc, t))).collect();
            for k in 1..ts.len() {
                let w = ts[k] - ts[k - 1];
                let (i, j) = (ids[k - 1], ids[k]);
                if i != j {
                    g.adj[i].push((j, w));
                    g.adj[j].push((i, w));
                }
            }
        }
        g
    }

    fn shortest(&self, from: usize) -> (Vec<S>, Vec<Option<usize>>) {
        let n = self.nodes.len();
        let mut dist = vec![S::infinity(); n];
        let mut prev = vec![None; n];
        let mut done = vec![false; n];
        dist[from] = S::zero();
        loop {
            let mut best: Option<usize> = None;
            for i in 0..n {
                if !done[i] && dist[i].is_finite() && best.is_none_or(|b| dist[i] < dist[b]) {
                    best = Some(i);
                }
            }
            let Some(u) = best else { break };
            done[u] = true;
            for &(v, w) in &self.adj[u] {
                let nd = dist[u] + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = Some(u);
                }
            }
        }
        (dist, prev)
    }
}

fn require_on_e<S: Scalar>(charts: &Charts<S>, p: EPoint<S>) -> Result<()> {
    if p.piece >= charts.spec().pieces.len() || !charts.on_e(p) {
        return Err(Error::Domain(format!("point (piece {}, s = {}) is not on a declared arc", p.piece, p.s)));
    }
    Ok(())
}

/// Length of the shortest path between two points of `E` that stays in `E`;
/// infinite when they lie in different components of `E`.
pub fn induced_arc_distance<S: Scalar>(spec: &ComplexSpec<S>, p: EPoint<S>, q: EPoint<S>) -> Result<S> {
    let charts = Charts::new(spec)?;
    require_on_e(&charts, p)?;
    require_on_e(&charts, q)?;
    let mut g = EGraph::build(&charts, &[p, q]);
    let (i, j) = (g.node(&charts, p), g.node(&charts, q));
    Ok(g.shortest(i).0[j])
}

/// A shortest path in `E` between two of its points, or `None` when they
/// are not connected within `E`.
pub fn arc_geodesic<S: Scalar>(spec: &ComplexSpec<S>, p: EPoint<S>, q: EPoint<S>) -> Result<Option<BoundaryPath<S>>> {
    let charts = Charts::new(spec)?;
    require_on_e(&charts, p)?;
    require_on_e(&charts, q)?;
    let mut g = EGraph::build(&charts, &[p, q]);
    let (i, j) = (g.node(&charts, p), g.node(&charts, q));
    let (dist, prev) = g.shortest(i);
    if !dist[j].is_finite() {
        return Ok(None);
    }
    let mut chain = vec![j];
    while let Some(k) = prev[*chain.last().unwrap()] {
        chain.push(k);
    }
    chain.reverse();
    Ok(Some(BoundaryPath {
        piece: p.piece,
        positions: chain.iter().map(|&k| g.nodes[k].s).collect(),
        length: dist[j],
    }))
}

/// Checks on random point pairs of `E` that the gluing map preserves the
/// induced length metric.
pub fn gluing_isometry_check<S: Scalar>(spec: &ComplexSpec<S>, samples: usize, seed: u64) -> Result<ValidationReport> {
    let charts = Charts::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let glued: Vec<usize> = (0..spec.arcs.len()).filter(|&a| charts.arc_class(a).is_some()).collect();
    let mut report = ValidationReport::default();
    if glued.is_empty() {
        return Ok(report);
    }
    let draw = |rng: &mut ChaCha8Rng| {
        let arc = glued[rng.gen_range(0..glued.len())];
        let t = S::lit(rng.gen::<f64>()) * charts.arc_length(arc);
        charts.arc_point(arc, t)
    };
    let pairs: Vec<(EPoint<S>, EPoint<S>)> = (0..samples).map(|_| (draw(&mut rng), draw(&mut rng))).collect();

    let mut points: Vec<EPoint<S>> = Vec::new();
    for &(p, q) in &pairs {
        points.extend([p, q, charts.involution(p), charts.involution(q)]);
    }
    let mut g = EGraph::build(&charts, &points);
    let ids: Vec<usize> = points.iter().map(|&p| g.node(&charts, p)).collect();
    let n = g.nodes.len();
    let mut all = vec![Vec::new(); n];
    let mut diameter = S::zero();
    for i in 0..n {
        all[i] = g.shortest(i).0;
        for d in &all[i] {
            if d.is_finite() {
                diameter = diameter.max(*d);
            }
        }
    }
    let tol = S::lit(ISOMETRY_TOLERANCE) * diameter.max(S::lit(1e-300));
    let mut worst = S::zero();
    let mut witness = None;
    for (k, _) in pairs.iter().enumerate() {
        let (p, q, fp, fq) = (ids[4 * k], ids[4 * k + 1], ids[4 * k + 2], ids[4 * k + 3]);
        let (d, fd) = (all[p][q], all[fp][fq]);
        let dev = if d.is_finite() && fd.is_finite() {
            (d - fd).abs()
        } else if d.is_finite() != fd.is_finite() {
            S::infinity()
        } else {
            S::zero()
        };
        if dev > worst {
            worst = dev;
            witness = Some(k);
        }
    }
    if worst > tol {
        let k = witness.unwrap();
        let (p, q) = pairs[k];
        report.push(
            Severity::Error,
            FindingCode::IsometryViolated,
            vec![spec.pieces[p.piece].name.clone(), spec.pieces[q.piece].name.clone()],
            format!(
                "gluing map changes induced distance by {worst} (tolerance {tol}) between s = {} and s = {}",
                p.s, q.s
            ),
        );
    }
    Ok(report)
}
