//! Glued spaces of directions at boundary points of two-dimensional complexes.
//!
//! Every preimage of a point contributes a sector of directions bounded by
//! the two boundary germs through it. Germs are identified when a gluing
//! chart maps one onto the other; the result is a metric graph whose edges
//! are the sectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{ccw_angle, Point2};
use crate::model::{Charts, ComplexSpec, EPoint};
use crate::scalar::{cmp_scalar, Scalar};

/// Slack allowed on link lengths before they count as too long.
pub const LINK_TOLERANCE: f64 = 1e-9;

/// Directions at one preimage: the angle between the boundary germ leaving
/// forward and the one leaving backward, measured through the interior.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector<S> {
    pub piece: usize,
    pub s: S,
    pub point: Point2<S>,
    pub angle: S,
    /// Unit vector of the forward boundary germ.
    pub forward: Point2<S>,
}

/// A direction in a link: a sector and the angle from its forward germ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<S> {
    pub sector: usize,
    pub theta: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    Circle,
    Interval,
    Graph,
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkKind::Circle => "circle",
            LinkKind::Interval => "interval",
            LinkKind::Graph => "graph",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Judgement {
    Ok,
    Violation(String),
}

impl Judgement {
    pub fn is_ok(&self) -> bool {
        matches!(self, Judgement::Ok)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSpace<S> {
    pub sectors: Vec<Sector<S>>,
    /// Germ node of each sector end: `2i` forward, `2i + 1` backward.
    germ_node: Vec<usize>,
    node_count: usize,
    kind: LinkKind,
    length: S,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut k = i;
        while self.0[k] != r {
            let next = self.0[k];
            self.0[k] = r;
            k = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Boundary germs through `p` covered by a glued arc, as
/// `(forward?, class, member, arc parameter)`.
fn glued_germs<S: Scalar>(charts: &Charts<S>, p: EPoint<S>) -> Vec<(bool, usize, usize, S)> {
    let mut out = Vec::new();
    for (arc, t) in charts.arcs_at(p) {
        let Some((class, m)) = charts.arc_class(arc) else { continue };
        let eps = charts.spec().pieces[p.piece].eps();
        let len = charts.arc_length(arc);
        if t < len - eps {
            out.push((true, class, m, t));
        }
        if t > eps {
            out.push((false, class, m, t));
        }
    }
    out
}

/// Builds the glued link at the class of a boundary point.
pub fn build_link<S: Scalar>(spec: &ComplexSpec<S>, p: EPoint<S>) -> Result<LinkSpace<S>> {
    if !spec.is_two_dimensional() {
        return Err(Error::Unsupported("links are built for complexes of polygons only".into()));
    }
    let piece = spec
        .pieces
        .get(p.piece)
        .ok_or_else(|| Error::Domain(format!("no piece with index {}", p.piece)))?;
    if !p.s.is_finite() || p.s < S::zero() || p.s > piece.boundary_length() {
        return Err(Error::Domain(format!("boundary position {} is off piece '{}'", p.s, piece.name)));
    }
    let charts = Charts::new(spec)?;
    let reps = charts.closure(EPoint { piece: p.piece, s: piece.wrap(p.s) });
    let sectors: Vec<Sector<S>> = reps
        .iter()
        .map(|q| {
            let pc = &spec.pieces[q.piece];
            let point = pc.point_at(q.s);
            let (side, _) = pc.side_at(q.s);
            let (a, b) = pc.side(side);
            let forward = (b - a).normalized();
            let angle = match pc.corner_at(q.s) {
                Some(v) => pc.corner_angle(v),
                None => S::PI(),
            };
            Sector { piece: q.piece, s: q.s, point, angle, forward }
        })
        .collect();

    let rep_index = |e: EPoint<S>| reps.iter().position(|r| charts.same_point(*r, e));
    let mut uf = UnionFind((0..2 * reps.len()).collect());
    for (i, q) in reps.iter().enumerate() {
        for (forward, class, m, t) in glued_germs(&charts, *q) {
            let g = &spec.gluings[class];
            let member = g.members[m];
            // direction of the germ along the class parameter
            let along = forward != member.reversed;
            let tau = charts.class_param(class, m, t);
            let targets: Vec<(usize, S, bool)> = if g.self_fold {
                vec![(m, charts.class_length(class) - tau, !along)]
            } else {
                (0..g.members.len()).filter(|&k| k != m).map(|k| (k, tau, along)).collect()
            };
            for (k, tau_k, along_k) in targets {
                let mk = g.members[k];
                let e = charts.arc_point(mk.arc, charts.member_param(class, k, tau_k));
                let forward_k = along_k != mk.reversed;
                if let Some(j) = rep_index(e) {
                    uf.union(2 * i + usize::from(!forward), 2 * j + usize::from(!forward_k));
                }
            }
        }
    }
    let mut label = vec![usize::MAX; 2 * reps.len()];
    let mut germ_node = vec![0; 2 * reps.len()];
    let mut node_count = 0;
    for g in 0..2 * reps.len() {
        let r = uf.find(g);
        if label[r] == usize::MAX {
            label[r] = node_count;
            node_count += 1;
        }
        germ_node[g] = label[r];
    }
    let length = sectors.iter().map(|s| s.angle).fold(S::zero(), |a, b| a + b);
    let kind = classify(&germ_node, node_count, sectors.len());
    Ok(LinkSpace { sectors, germ_node, node_count, kind, length })
}

fn classify(germ_node: &[usize], nodes: usize, edges: usize) -> LinkKind {
    let mut degree = vec![0usize; nodes];
    for &n in germ_node {
        degree[n] += 1;
    }
    let mut uf = UnionFind((0..nodes).collect());
    for e in 0..edges {
        uf.union(germ_node[2 * e], germ_node[2 * e + 1]);
    }
    let connected = (0..nodes).all(|n| uf.find(n) == uf.find(0));
    let ones = degree.iter().filter(|&&d| d == 1).count();
    let others_two = degree.iter().all(|&d| d == 1 || d == 2);
    match (connected, others_two, ones) {
        (true, true, 0) => LinkKind::Circle,
        (true, true, 2) => LinkKind::Interval,
        _ => LinkKind::Graph,
    }
}

impl<S: Scalar> LinkSpace<S> {
    pub fn kind(&self) -> LinkKind {
        self.kind
    }

    /// Total length: the sum of the sector angles.
    pub fn length(&self) -> S {
        self.length
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.sectors.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.node_count];
        for &n in &self.germ_node {
            d[n] += 1;
        }
        d
    }

    /// Endpoint nodes of an edge, forward germ first.
    pub fn edge_nodes(&self, sector: usize) -> (usize, usize) {
        (self.germ_node[2 * sector], self.germ_node[2 * sector + 1])
    }

    /// One-dimensional spaces of curvature ≥ 1 are circles of length at
    /// most 2π and intervals of length at most π.
    pub fn judge(&self) -> Judgement {
        let tol = S::lit(LINK_TOLERANCE);
        match self.kind {
            LinkKind::Circle if self.length <= S::TAU() + tol => Judgement::Ok,
            LinkKind::Interval if self.length <= S::PI() + tol => Judgement::Ok,
            LinkKind::Circle => Judgement::Violation(format!("circle of length {} exceeds 2π", self.length)),
            LinkKind::Interval => Judgement::Violation(format!("interval of length {} exceeds π", self.length)),
            LinkKind::Graph => Judgement::Violation(format!(
                "branching link with {} nodes and {} edges",
                self.node_count,
                self.sectors.len()
            )),
        }
    }

    pub fn description(&self) -> String {
        let mut lengths: Vec<S> = self.sectors.iter().map(|s| s.angle).collect();
        lengths.sort_by(|a, b| cmp_scalar(*a, *b));
        let list: Vec<String> = lengths.iter().map(|l| format!("{:.7}", l.to_f64_lossy())).collect();
        format!("nodes={} edges={} edge_lengths={}", self.node_count, self.sectors.len(), list.join(","))
    }

    /// Direction of a planar vector at the preimage `(piece, s)`, if it
    /// points into the piece.
    pub fn direction(&self, piece: usize, point: Point2<S>, v: Point2<S>) -> Option<Direction<S>> {
        let eps = S::lit(1e-7);
        let (sector, sec) = self
            .sectors
            .iter()
            .enumerate()
            .filter(|(_, s)| s.piece == piece)
            .min_by(|a, b| cmp_scalar(a.1.point.dist(point), b.1.point.dist(point)))?;
        if sec.point.dist(point) > eps.max(S::lit(1e-9)) {
            return None;
        }
        let mut theta = ccw_angle(sec.forward, v);
        if theta > sec.angle + eps {
            // a vector just clockwise of the forward germ
            if S::TAU() - theta <= eps {
                theta = S::zero();
            } else {
                return None;
            }
        }
        Some(Direction { sector, theta: theta.min(sec.angle) })
    }

    /// Planar unit vector of a direction.
    pub fn vector(&self, d: Direction<S>) -> Point2<S> {
        self.sectors[d.sector].forward.rotated(d.theta)
    }

    fn node_distances(&self, from: &[(usize, S)]) -> Vec<S> {
        let n = self.node_count;
        let mut dist = vec![S::infinity(); n];
        for &(v, d) in from {
            dist[v] = dist[v].min(d);
        }
        let mut done = vec![false; n];
        loop {
            let u = (0..n)
                .filter(|&v| !done[v] && dist[v].is_finite())
                .min_by(|&a, &b| cmp_scalar(dist[a], dist[b]).then(a.cmp(&b)));
            let Some(u) = u else { break };
            done[u] = true;
            for (e, s) in self.sectors.iter().enumerate() {
                let (a, b) = self.edge_nodes(e);
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && dist[u] + s.angle < dist[y] {
                        dist[y] = dist[u] + s.angle;
                    }
                }
            }
        }
        dist
    }

    /// Length of the shortest path between two directions in the link.
    pub fn distance(&self, u: Direction<S>, v: Direction<S>) -> S {
        let su = &self.sectors[u.sector];
        let (uf, ub) = self.edge_nodes(u.sector);
        let dist = self.node_distances(&[(uf, u.theta), (ub, su.angle - u.theta)]);
        let (vf, vb) = self.edge_nodes(v.sector);
        let sv = &self.sectors[v.sector];
        let mut best = (dist[vf] + v.theta).min(dist[vb] + sv.angle - v.theta);
        if u.sector == v.sector {
            best = best.min((u.theta - v.theta).abs());
        }
        best
    }

    /// Directions spread evenly along every sector, `per_sector` each.
    pub fn sample_directions(&self, per_sector: usize) -> Vec<Direction<S>> {
        let mut out = Vec::new();
        for (i, s) in self.sectors.iter().enumerate() {
            for k in 0..=per_sector {
                out.push(Direction { sector: i, theta: s.angle * S::lit(k as f64 / per_sector.max(1) as f64) });
            }
        }
        out
    }
}

/// Points whose links describe all local configurations of the glued set:
/// arc ends, corners, fold centres, and one interior point between
/// consecutive breakpoints of every glued arc. One point per class.
pub fn structural_points<S: Scalar>(spec: &ComplexSpec<S>) -> Result<Vec<EPoint<S>>> {
    let charts = Charts::new(spec)?;
    let mut out: Vec<EPoint<S>> = Vec::new();
    let mut seen: Vec<EPoint<S>> = Vec::new();
    for (c, class) in spec.gluings.iter().enumerate() {
        let len = charts.class_length(c);
        let mut taus = Vec::new();
        for (m, member) in class.members.iter().enumerate() {
            for t in charts.arc_breakpoints(member.arc) {
                taus.push(charts.class_param(c, m, t));
            }
        }
        if class.self_fold {
            taus.push(len * S::half());
        }
        taus.sort_by(|a, b| cmp_scalar(*a, *b));
        taus.dedup_by(|a, b| (*a - *b).abs() <= crate::geometry::position_eps(len));
        let mids: Vec<S> = taus.windows(2).map(|w| (w[0] + w[1]) * S::half()).collect();
        taus.extend(mids);
        let first = class.members[0].arc;
        for tau in taus {
            let p = charts.arc_point(first, charts.member_param(c, 0, tau));
            if seen.iter().any(|q| charts.same_point(*q, p)) {
                continue;
            }
            seen.extend(charts.closure(p));
            out.push(p);
        }
    }
    Ok(out)
}
