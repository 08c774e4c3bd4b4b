use std::cmp::Ordering;

use crate::geometry::Point2;
use crate::metric::{DiscretizedComplex, Location, NodeClass};
use crate::scalar::{cmp_scalar, Scalar};

const NONE: usize = usize::MAX;

/// A distance value with its discretization error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<S> {
    pub value: S,
    pub error_bound: S,
    /// Number of glued-set points the realizing path passes through.
    pub crossings: usize,
}

/// A straight segment of a path inside one piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg<S> {
    pub piece: usize,
    pub start: Point2<S>,
    pub end: Point2<S>,
}

impl<S: Scalar> Leg<S> {
    pub fn length(&self) -> S {
        self.start.dist(self.end)
    }
}

/// Polyline realizing a shortest connection; consecutive legs meet at the
/// listed crossing classes.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath<S> {
    pub total_length: S,
    pub legs: Vec<Leg<S>>,
    pub crossings: Vec<usize>,
}

impl<S: Scalar> GeodesicPath<S> {
    /// Point at arclength `t`, clamped to the path.
    pub fn point_at(&self, t: S) -> Location<S> {
        let mut acc = S::zero();
        for leg in &self.legs {
            let len = leg.length();
            if t <= acc + len {
                let u = if len > S::zero() { ((t - acc) / len).max(S::zero()) } else { S::zero() };
                return Location::new(leg.piece, leg.start.lerp(leg.end, u));
            }
            acc = acc + len;
        }
        let last = self.legs.last().expect("a path has at least one leg");
        Location::new(last.piece, last.end)
    }

    /// Arclength at which the path reaches crossing `i`.
    pub fn crossing_position(&self, i: usize) -> S {
        self.legs[..=i].iter().map(|l| l.length()).fold(S::zero(), |a, b| a + b)
    }
}

/// Relative length difference below which two paths count as tied, so
/// that rounding along collinear chains does not beat a direct chord.
const TIE_TOLERANCE: f64 = 1e-10;

/// Key ordering candidate paths: length, then crossings, then predecessor.
fn better<S: Scalar>(a: (S, u32, usize), b: (S, u32, usize)) -> bool {
    if a.0.is_finite() && b.0.is_finite() {
        let slack = S::lit(TIE_TOLERANCE) * S::one().max(a.0.abs()).max(b.0.abs());
        if (a.0 - b.0).abs() <= slack {
            return (a.1, a.2) < (b.1, b.2);
        }
    }
    match cmp_scalar(a.0, b.0) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => (a.1, a.2) < (b.1, b.2),
    }
}

/// Shortest distances from one source to every node class.
#[derive(Debug, Clone)]
pub struct DistanceField<'a, S> {
    dc: &'a DiscretizedComplex<S>,
    source: NodeClass<S>,
    dist: Vec<S>,
    hops: Vec<u32>,
    pred: Vec<usize>,
}

impl<'a, S: Scalar> DistanceField<'a, S> {
    pub fn source(&self) -> &NodeClass<S> {
        &self.source
    }

    pub fn node_distance(&self, id: usize) -> S {
        self.dist[id]
    }

    fn best_exit(&self, target: &NodeClass<S>) -> (S, u32, usize) {
        let mut best = match DiscretizedComplex::chord(&self.source, target) {
            Some((d, _, _)) => (d, 0, NONE),
            None => (S::infinity(), 0, NONE),
        };
        for r in &target.representatives {
            for &(v, pv) in self.dc.piece_nodes(r.piece) {
                let cand = (self.dist[v] + pv.dist(r.point), self.hops[v], v);
                if better(cand, best) {
                    best = cand;
                }
            }
        }
        best
    }

    pub fn to(&self, target: &NodeClass<S>) -> Estimate<S> {
        let (value, hops, _) = self.best_exit(target);
        let error_bound = if value.is_finite() {
            S::lit((hops + 1) as f64) * self.dc.h()
        } else {
            S::infinity()
        };
        Estimate { value, error_bound, crossings: hops as usize }
    }

    pub fn path_to(&self, target: &NodeClass<S>) -> Option<GeodesicPath<S>> {
        let (value, _, last) = self.best_exit(target);
        if !value.is_finite() {
            return None;
        }
        let mut crossings = Vec::new();
        let mut v = last;
        while v != NONE {
            crossings.push(v);
            v = self.pred[v];
        }
        crossings.reverse();
        let nodes = self.dc.nodes();
        let mut chain: Vec<&NodeClass<S>> = vec![&self.source];
        chain.extend(crossings.iter().map(|&c| &nodes[c]));
        chain.push(target);
        let legs: Vec<Leg<S>> = chain
            .windows(2)
            .map(|w| {
                let (_, i, j) = DiscretizedComplex::chord(w[0], w[1]).expect("consecutive path nodes share a piece");
                let (a, b) = (w[0].representatives[i], w[1].representatives[j]);
                Leg { piece: a.piece, start: a.point, end: b.point }
            })
            .collect();
        let total_length = legs.iter().map(|l| l.length()).fold(S::zero(), |a, b| a + b);
        Some(GeodesicPath { total_length, legs, crossings })
    }
}

impl<S: Scalar> DiscretizedComplex<S> {
    fn seed(&self, source: &NodeClass<S>) -> (Vec<S>, Vec<u32>, Vec<usize>) {
        let n = self.nodes().len();
        let mut dist = vec![S::infinity(); n];
        let mut hops = vec![u32::MAX; n];
        let pred = vec![NONE; n];
        for r in &source.representatives {
            for &(v, pv) in self.piece_nodes(r.piece) {
                let cand = (r.point.dist(pv), 1, NONE);
                if better(cand, (dist[v], hops[v], NONE)) {
                    dist[v] = cand.0;
                    hops[v] = 1;
                }
            }
        }
        (dist, hops, pred)
    }

    /// Single-source shortest paths over the node graph.
    pub fn field(&self, source: &NodeClass<S>) -> DistanceField<'_, S> {
        let n = self.nodes().len();
        let (mut dist, mut hops, mut pred) = self.seed(source);
        let mut done = vec![false; n];
        loop {
            let mut u = NONE;
            for v in 0..n {
                if !done[v] && dist[v].is_finite() && (u == NONE || better((dist[v], hops[v], v), (dist[u], hops[u], u))) {
                    u = v;
                }
            }
            if u == NONE {
                break;
            }
            done[u] = true;
            for r in &self.nodes()[u].representatives {
                for &(v, pv) in self.piece_nodes(r.piece) {
                    if done[v] {
                        continue;
                    }
                    let cand = (dist[u] + r.point.dist(pv), hops[u] + 1, u);
                    if better(cand, (dist[v], hops[v], pred[v])) {
                        dist[v] = cand.0;
                        hops[v] = cand.1;
                        pred[v] = u;
                    }
                }
            }
        }
        DistanceField { dc: self, source: source.clone(), dist, hops, pred }
    }

    pub(crate) fn predistance_between(&self, x: &NodeClass<S>, y: &NodeClass<S>, m: usize) -> S {
        let direct = Self::chord(x, y).map_or(S::infinity(), |c| c.0);
        if m == 0 {
            return direct;
        }
        let (mut layer, _, _) = self.seed(x);
        for _ in 1..m {
            let mut next = layer.clone();
            for (u, node) in self.nodes().iter().enumerate() {
                if !layer[u].is_finite() {
                    continue;
                }
                for r in &node.representatives {
                    for &(v, pv) in self.piece_nodes(r.piece) {
                        let d = layer[u] + r.point.dist(pv);
                        if d < next[v] {
                            next[v] = d;
                        }
                    }
                }
            }
            if next == layer {
                break;
            }
            layer = next;
        }
        let mut best = direct;
        for r in &y.representatives {
            for &(v, pv) in self.piece_nodes(r.piece) {
                best = best.min(layer[v] + pv.dist(r.point));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use proptest::prelude::*;

    fn loc(piece: usize, x: f64, y: f64) -> Location<f64> {
        Location::new(piece, p(x, y))
    }

    #[test]
    fn same_piece_predistance_is_chord() {
        let dc = DiscretizedComplex::new(&pillowcase(), 0.1).unwrap();
        let d = dc.predistance(loc(0, 0.1, 0.2), loc(0, 0.4, 0.6), 0).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn different_pieces_unreachable_without_crossing() {
        let dc = DiscretizedComplex::new(&pillowcase(), 0.1).unwrap();
        assert!(dc.predistance(loc(0, 0.5, 0.5), loc(1, 0.5, 0.5), 0).unwrap().is_infinite());
        let d = dc.predistance(loc(0, 0.5, 0.5), loc(1, 0.5, 0.5), 1).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_points() {
        let dc = DiscretizedComplex::new(&pillowcase(), 0.1).unwrap();
        let e = dc.distance(loc(0, 0.3, 0.3), loc(0, 0.3, 0.3)).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.crossings, 0);
    }

    #[test]
    fn glued_points_coincide() {
        let mut spec = crate::model::ComplexSpec::new(0.0).unwrap();
        spec.add_piece(rect("sq", 1.0, 1.0));
        spec.add_arc("r", "sq", crate::model::ArcSupport::Sides(vec![1])).unwrap();
        spec.add_arc("l", "sq", crate::model::ArcSupport::Sides(vec![3])).unwrap();
        spec.glue("g", &[("r", false), ("l", true)]).unwrap();
        let dc = DiscretizedComplex::new(&spec, 0.1).unwrap();
        let e = dc.distance(loc(0, 0.0, 0.5), loc(0, 1.0, 0.5)).unwrap();
        assert!(e.value.abs() < 1e-15);
    }

    #[test]
    fn center_to_center_path() {
        let dc = DiscretizedComplex::new(&pillowcase(), 0.05).unwrap();
        let path = dc.shortest_path(loc(0, 0.5, 0.5), loc(1, 0.5, 0.5)).unwrap();
        assert_eq!(path.legs.len(), 2);
        assert_eq!(path.crossings.len(), 1);
        for leg in &path.legs {
            assert!((leg.length() - 0.5).abs() < 0.05);
        }
        assert_eq!(path.point_at(0.0), loc(0, 0.5, 0.5));
        assert_eq!(path.point_at(10.0).piece, 1);
    }

    #[test]
    fn within_piece_path_has_one_leg() {
        let dc = DiscretizedComplex::new(&pillowcase(), 0.05).unwrap();
        let path = dc.shortest_path(loc(0, 0.2, 0.5), loc(0, 0.7, 0.5)).unwrap();
        assert_eq!(path.legs.len(), 1);
        assert!(path.crossings.is_empty());
    }

    #[test]
    fn fold_symmetric_pair() {
        // (0.5, 0.1) and (0.9, 0.5) mirror each other across the cup's fold
        let dc = DiscretizedComplex::new(&paper_cup(), 0.01).unwrap();
        let (x, y) = (loc(0, 0.5, 0.1), loc(0, 0.9, 0.5));
        let direct = dc.predistance(x, y, 0).unwrap();
        let path = dc.shortest_path(x, y).unwrap();
        assert!(path.total_length <= direct);
        if path.legs.len() == 2 {
            assert!((path.legs[0].length() - path.legs[1].length()).abs() <= 0.01);
        }
    }

    fn pillow_point() -> impl Strategy<Value = Location<f64>> {
        (0usize..2, 0.02f64..0.98, 0.02f64..0.98).prop_map(|(k, x, y)| loc(k, x, y))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn predistance_monotone_and_stable(x in pillow_point(), y in pillow_point()) {
            let dc = DiscretizedComplex::new(&pillowcase(), 0.1).unwrap();
            let mut prev = f64::INFINITY;
            for m in 0..=9 {
                let d = dc.predistance(x, y, m).unwrap();
                prop_assert!(d <= prev);
                prev = d;
            }
            let e = dc.distance(x, y).unwrap();
            prop_assert!((prev - e.value).abs() <= 1e-12);
        }

        #[test]
        fn splicing(x in pillow_point(), z in pillow_point(), y in pillow_point(), m in 0usize..4, l in 0usize..4) {
            let dc = DiscretizedComplex::new(&pillowcase(), 0.1).unwrap();
            let lhs = dc.predistance(x, z, m).unwrap() + dc.predistance(z, y, l).unwrap();
            let rhs = dc.predistance(x, y, m + l).unwrap();
            prop_assert!(lhs + 1e-12 >= rhs);
        }

        #[test]
        fn symmetric(x in pillow_point(), y in pillow_point()) {
            let dc = DiscretizedComplex::new(&pillowcase(), 0.1).unwrap();
            prop_assert_eq!(dc.distance(x, y).unwrap().value, dc.distance(y, x).unwrap().value);
        }
    }
}
