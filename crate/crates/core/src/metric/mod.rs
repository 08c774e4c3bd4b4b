//! The glued metric on a discretized complex.
//!
//! The glued set is sampled into node classes (all preimages of one point of
//! `E_f`). Two nodes are joined whenever they have representatives in a
//! common piece; the edge weight is the shortest chord between such
//! representatives. Distances are shortest paths through this implicit
//! graph, with the query points attached as transient endpoints.

mod search;

pub use search::{DistanceField, Estimate, GeodesicPath, Leg};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::model::{validate, Charts, ComplexSpec, EPoint, ValidationStatus};
use crate::scalar::{cmp_scalar, Scalar};

/// A point given by the piece it lies in and its planar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location<S> {
    pub piece: usize,
    pub point: Point2<S>,
}

impl<S: Scalar> Location<S> {
    pub fn new(piece: usize, point: Point2<S>) -> Self {
        Self { piece, point }
    }
}

/// One preimage of a point of the glued space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Representative<S> {
    pub piece: usize,
    pub point: Point2<S>,
    /// Boundary position, for representatives on a piece boundary.
    pub s: Option<S>,
}

/// All preimages of one point of the glued space.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeClass<S> {
    pub id: usize,
    pub representatives: Vec<Representative<S>>,
    pub on_e: bool,
}

/// Sampled glued set of a complex at spacing `h`.
#[derive(Debug, Clone)]
pub struct DiscretizedComplex<S> {
    spec: ComplexSpec<S>,
    h: S,
    nodes: Vec<NodeClass<S>>,
    piece_nodes: Vec<Vec<(usize, Point2<S>)>>,
}

const BUCKET: f64 = 1e-7;

struct Registry {
    buckets: HashMap<(usize, i64), Vec<usize>>,
}

impl Registry {
    fn key<S: Scalar>(piece: usize, s: S) -> (usize, i64) {
        (piece, (s.to_f64_lossy() / BUCKET).round() as i64)
    }

    fn find<S: Scalar>(&self, charts: &Charts<S>, nodes: &[NodeClass<S>], p: EPoint<S>) -> Option<usize> {
        let (piece, k) = Self::key(p.piece, p.s);
        for kk in [k - 1, k, k + 1] {
            for &id in self.buckets.get(&(piece, kk)).into_iter().flatten() {
                let hit = nodes[id]
                    .representatives
                    .iter()
                    .any(|r| r.s.is_some_and(|s| charts.same_point(EPoint { piece: r.piece, s }, p)));
                if hit {
                    return Some(id);
                }
            }
        }
        // positions just below the perimeter wrap onto zero
        if p.s > S::zero() && charts.same_point(p, EPoint { piece: p.piece, s: S::zero() }) {
            return self.find(charts, nodes, EPoint { piece: p.piece, s: S::zero() });
        }
        None
    }

    fn insert<S: Scalar>(&mut self, piece: usize, s: S, id: usize) {
        self.buckets.entry(Self::key(piece, s)).or_default().push(id);
    }
}

fn dedup_sorted<S: Scalar>(v: &mut Vec<S>, eps: S) {
    v.sort_by(|a, b| cmp_scalar(*a, *b));
    v.dedup_by(|a, b| (*a - *b).abs() <= eps);
}

impl<S: Scalar> DiscretizedComplex<S> {
    /// Samples every glued arc at spacing at most `h`, always including arc
    /// ends and piece corners, and groups samples into node classes.
    pub fn new(spec: &ComplexSpec<S>, h: S) -> Result<Self> {
        if !(h > S::zero()) {
            return Err(Error::Domain(format!("sample spacing must be positive, got {h}")));
        }
        let report = validate(spec);
        if report.status() == ValidationStatus::Invalid {
            let first = report.findings.iter().find(|f| f.severity == crate::model::Severity::Error);
            return Err(Error::InvalidComplex(first.map_or_else(String::new, |f| format!("{}: {}", f.code, f.message))));
        }
        let charts = Charts::new(spec)?;
        let shortest = (0..spec.arcs.len())
            .map(|a| spec.arc_length(a))
            .filter(|l| *l > S::zero())
            .fold(S::infinity(), |a, b| a.min(b));
        if h > shortest + S::lit(crate::model::LENGTH_TOLERANCE) {
            return Err(Error::Domain(format!("sample spacing {h} exceeds the shortest arc length {shortest}")));
        }

        let mut nodes: Vec<NodeClass<S>> = Vec::new();
        let mut registry = Registry { buckets: HashMap::new() };
        for (c, class) in spec.gluings.iter().enumerate() {
            let len = charts.class_length(c);
            let eps = crate::geometry::position_eps(len);
            let n = if len > S::zero() { (len / h - S::lit(1e-9)).ceil().max(S::one()) } else { S::one() };
            let steps = n.to_usize().unwrap_or(1);
            let mut taus: Vec<S> = (0..=steps)
                .map(|k| if len > S::zero() { len * S::lit(k as f64) / n } else { S::zero() })
                .collect();
            for (m, member) in class.members.iter().enumerate() {
                for t in charts.arc_breakpoints(member.arc) {
                    taus.push(charts.class_param(c, m, t).max(S::zero()).min(len));
                }
            }
            if class.self_fold {
                let mirrored: Vec<S> = taus.iter().map(|&t| len - t).collect();
                taus.extend(mirrored);
            }
            dedup_sorted(&mut taus, eps);
            let first = class.members[0].arc;
            for tau in taus {
                let p = charts.arc_point(first, charts.member_param(c, 0, tau));
                if registry.find(&charts, &nodes, p).is_some() {
                    continue;
                }
                let id = nodes.len();
                let representatives = charts
                    .closure(p)
                    .into_iter()
                    .map(|q| Representative { piece: q.piece, point: spec.pieces[q.piece].point_at(q.s), s: Some(q.s) })
                    .collect::<Vec<_>>();
                for r in &representatives {
                    registry.insert(r.piece, r.s.unwrap(), id);
                }
                nodes.push(NodeClass { id, representatives, on_e: true });
            }
        }

        let mut piece_nodes = vec![Vec::new(); spec.pieces.len()];
        for node in &nodes {
            for r in &node.representatives {
                piece_nodes[r.piece].push((node.id, r.point));
            }
        }
        Ok(Self { spec: spec.clone(), h, nodes, piece_nodes })
    }

    pub fn spec(&self) -> &ComplexSpec<S> {
        &self.spec
    }

    pub fn h(&self) -> S {
        self.h
    }

    pub fn nodes(&self) -> &[NodeClass<S>] {
        &self.nodes
    }

    /// Node samples lying in a piece, with their planar positions there.
    pub fn piece_nodes(&self, piece: usize) -> &[(usize, Point2<S>)] {
        &self.piece_nodes[piece]
    }

    /// Node class containing a boundary point, if it is a sample.
    pub fn node_at(&self, p: EPoint<S>) -> Option<usize> {
        let charts = Charts::new(&self.spec).ok()?;
        self.nodes.iter().position(|n| {
            n.representatives
                .iter()
                .any(|r| r.s.is_some_and(|s| charts.same_point(EPoint { piece: r.piece, s }, p)))
        })
    }

    /// Resolves a location into all of its preimages.
    pub fn query(&self, loc: Location<S>) -> Result<NodeClass<S>> {
        let piece = self
            .spec
            .pieces
            .get(loc.piece)
            .ok_or_else(|| Error::Domain(format!("no piece with index {}", loc.piece)))?;
        if !piece.contains(loc.point) {
            return Err(Error::Domain(format!(
                "point ({}, {}) lies outside piece '{}'",
                loc.point.x, loc.point.y, piece.name
            )));
        }
        let single = NodeClass {
            id: usize::MAX,
            representatives: vec![Representative { piece: loc.piece, point: loc.point, s: None }],
            on_e: false,
        };
        let Some(s) = piece.locate_boundary(loc.point) else { return Ok(single) };
        let charts = Charts::new(&self.spec)?;
        let p = EPoint { piece: loc.piece, s };
        if !charts.arcs_at(p).iter().any(|&(a, _)| charts.arc_class(a).is_some()) {
            return Ok(NodeClass { representatives: vec![Representative { s: Some(s), ..single.representatives[0] }], ..single });
        }
        let mut representatives: Vec<Representative<S>> = charts
            .closure(p)
            .into_iter()
            .map(|q| Representative { piece: q.piece, point: self.spec.pieces[q.piece].point_at(q.s), s: Some(q.s) })
            .collect();
        representatives[0].point = loc.point;
        Ok(NodeClass { id: usize::MAX, representatives, on_e: true })
    }

    /// Query object for a node class, usable as a path endpoint.
    pub fn node_query(&self, id: usize) -> NodeClass<S> {
        self.nodes[id].clone()
    }

    /// Shortest chord between representatives of two classes sharing a piece.
    pub fn chord(a: &NodeClass<S>, b: &NodeClass<S>) -> Option<(S, usize, usize)> {
        let mut best: Option<(S, usize, usize)> = None;
        for (i, ra) in a.representatives.iter().enumerate() {
            for (j, rb) in b.representatives.iter().enumerate() {
                if ra.piece == rb.piece {
                    let d = ra.point.dist(rb.point);
                    if best.is_none_or(|(w, _, _)| d < w) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        best
    }

    /// The m-predistance: shortest connection through at most `m` points of
    /// the glued set.
    pub fn predistance(&self, x: Location<S>, y: Location<S>, m: usize) -> Result<S> {
        let (qx, qy) = (self.query(x)?, self.query(y)?);
        Ok(self.predistance_between(&qx, &qy, m))
    }

    /// Glued distance with its discretization error bound.
    pub fn distance(&self, x: Location<S>, y: Location<S>) -> Result<Estimate<S>> {
        let (qx, qy) = (self.query(x)?, self.query(y)?);
        Ok(self.field(&qx).to(&qy))
    }

    pub fn shortest_path(&self, x: Location<S>, y: Location<S>) -> Result<GeodesicPath<S>> {
        let (qx, qy) = (self.query(x)?, self.query(y)?);
        self.field(&qx)
            .path_to(&qy)
            .ok_or_else(|| Error::Unreachable("the two points lie in different components".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    #[test]
    fn pillowcase_counts() {
        let dc = DiscretizedComplex::new(&pillowcase(), 0.25).unwrap();
        // 4 sides × 4 intervals, corners shared by two sides
        assert_eq!(dc.nodes().len(), 16);
        for n in dc.nodes() {
            assert_eq!(n.representatives.len(), 2);
        }
        for k in 0..5 {
            let s = 0.25 * k as f64;
            assert!(dc.node_at(EPoint { piece: 0, s }).is_some());
        }
    }

    #[test]
    fn fold_pairs_collapse() {
        let dc = DiscretizedComplex::new(&paper_cup(), 0.5).unwrap();
        let mut sizes: Vec<usize> = dc.nodes().iter().map(|n| n.representatives.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 2]);
        let a = dc.node_at(EPoint { piece: 0, s: 0.5 }).unwrap();
        assert_eq!(Some(a), dc.node_at(EPoint { piece: 0, s: 1.5 }));
    }

    #[test]
    fn z3_classes_have_three_representatives() {
        let spec = z3_disk();
        let len = spec.arc_length(0);
        let dc = DiscretizedComplex::new(&spec, len).unwrap();
        assert!(dc.nodes().iter().all(|n| n.representatives.len() == 3));
    }

    #[test]
    fn spacing_must_fit_arcs() {
        assert!(DiscretizedComplex::new(&pillowcase(), 1.5).is_err());
        assert!(DiscretizedComplex::new(&pillowcase(), 0.0).is_err());
    }

    #[test]
    fn query_outside_piece() {
        let dc = DiscretizedComplex::new(&pillowcase(), 0.25).unwrap();
        assert!(matches!(dc.query(Location::new(0, p(1.5, 0.5))), Err(Error::Domain(_))));
        assert_eq!(dc.query(Location::new(0, p(1.0, 0.3))).unwrap().representatives.len(), 2);
    }

    #[test]
    fn samples_are_dense() {
        let spec = pillowcase();
        let h = 0.07;
        let dc = DiscretizedComplex::new(&spec, h).unwrap();
        let mut s: Vec<f64> = dc
            .nodes()
            .iter()
            .flat_map(|n| n.representatives.iter().filter(|r| r.piece == 0).map(|r| r.s.unwrap()))
            .collect();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s.push(4.0);
        assert!(s.windows(2).all(|w| w[1] - w[0] <= h + 1e-12));
    }
}
