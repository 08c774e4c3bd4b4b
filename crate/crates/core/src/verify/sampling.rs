//! Random points in a complex, uniform by area or biased toward the glued set.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point2;
use crate::metric::Location;
use crate::model::{Charts, ComplexSpec, PieceKind};

pub(crate) struct Sampler<'a> {
    spec: &'a ComplexSpec<f64>,
    charts: Charts<'a, f64>,
    piece_weights: Vec<f64>,
    glued_arcs: Vec<(usize, f64)>,
}

fn pick(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u * total < acc {
            return i;
        }
    }
    weights.len() - 1
}

impl<'a> Sampler<'a> {
    pub fn new(spec: &'a ComplexSpec<f64>) -> crate::error::Result<Self> {
        let charts = Charts::new(spec)?;
        let two_d = spec.pieces.iter().any(|p| p.is_polygon());
        let piece_weights = spec
            .pieces
            .iter()
            .map(|p| if two_d { p.area() } else { p.boundary_length() })
            .collect();
        let glued_arcs = (0..spec.arcs.len())
            .filter(|&a| charts.arc_class(a).is_some())
            .map(|a| (a, spec.arc_length(a)))
            .collect();
        Ok(Self { spec, charts, piece_weights, glued_arcs })
    }

    pub fn uniform(&self, rng: &mut ChaCha8Rng) -> Location<f64> {
        let k = pick(&self.piece_weights, rng.gen());
        let piece = &self.spec.pieces[k];
        match piece.kind {
            PieceKind::Segment => {
                let (a, b) = piece.side(0);
                Location::new(k, a.lerp(b, rng.gen()))
            }
            PieceKind::Polygon => {
                let v = &piece.vertices;
                let areas: Vec<f64> = (1..v.len() - 1).map(|i| 0.5 * (v[i] - v[0]).cross(v[i + 1] - v[0])).collect();
                let i = pick(&areas, rng.gen()) + 1;
                let (mut s, mut t): (f64, f64) = (rng.gen(), rng.gen());
                if s + t > 1.0 {
                    s = 1.0 - s;
                    t = 1.0 - t;
                }
                Location::new(k, v[0] + (v[i] - v[0]) * s + (v[i + 1] - v[0]) * t)
            }
        }
    }

    /// A point within `radius` of the glued set, or a uniform point when
    /// nothing is glued.
    pub fn near_glued(&self, rng: &mut ChaCha8Rng, radius: f64) -> Location<f64> {
        if self.glued_arcs.is_empty() {
            return self.uniform(rng);
        }
        let lengths: Vec<f64> = self.glued_arcs.iter().map(|&(_, l)| l.max(1e-3)).collect();
        let (arc, len) = self.glued_arcs[pick(&lengths, rng.gen())];
        let e = self.charts.arc_point(arc, rng.gen::<f64>() * len);
        let piece = &self.spec.pieces[e.piece];
        let base = piece.point_at(e.s);
        let r = rng.gen::<f64>() * radius;
        let inward = match piece.kind {
            PieceKind::Polygon => {
                let (side, _) = piece.side_at(e.s);
                let (a, b) = piece.side(side);
                (b - a).normalized().rotated(std::f64::consts::FRAC_PI_2)
            }
            PieceKind::Segment => {
                let (a, b) = piece.side(0);
                let d = (b - a).normalized();
                if base.dist(a) < base.dist(b) {
                    d
                } else {
                    d * -1.0
                }
            }
        };
        let mut q: Point2<f64> = base + inward * r;
        for _ in 0..8 {
            if piece.contains(q) {
                return Location::new(e.piece, q);
            }
            q = base.lerp(q, 0.5);
        }
        Location::new(e.piece, base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use rand::SeedableRng;

    #[test]
    fn samples_lie_in_their_pieces() {
        let spec = z3_disk();
        let s = Sampler::new(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let a = s.uniform(&mut rng);
            assert!(spec.pieces[a.piece].contains(a.point));
            let b = s.near_glued(&mut rng, 0.1);
            assert!(spec.pieces[b.piece].contains(b.point));
            assert!(b.point.norm() > 0.85);
        }
    }

    #[test]
    fn segments_are_sampled_by_length() {
        let spec = three_pi_circle();
        let s = Sampler::new(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut counts = [0usize; 3];
        for _ in 0..3000 {
            counts[s.uniform(&mut rng).piece] += 1;
        }
        assert!(counts.iter().all(|&c| c > 800));
    }
}
