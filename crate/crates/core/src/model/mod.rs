//! Input data model: pieces, boundary arcs and gluing classes.
//!
//! A complex is a disjoint union of strictly convex polygons and segments.
//! The glued set `E` is a union of boundary arcs; gluing classes identify
//! arcs of equal length through their arclength charts.

mod charts;
mod induced;
mod validate;

pub use charts::{Charts, EPoint};
pub use induced::{arc_geodesic, gluing_isometry_check, induced_arc_distance, BoundaryPath};
pub use validate::{validate, Finding, LENGTH_TOLERANCE, FindingCode, Severity, ValidationReport, ValidationStatus};

use crate::error::{Error, Result};
use crate::geometry::{position_eps, Point2};
use crate::kernel::Curvature;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    Polygon,
    Segment,
}

/// A flat convex piece: a counterclockwise polygon or a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece<S> {
    pub name: String,
    pub kind: PieceKind,
    pub vertices: Vec<Point2<S>>,
}

impl<S: Scalar> Piece<S> {
    pub fn polygon(name: impl Into<String>, vertices: Vec<Point2<S>>) -> Self {
        Self { name: name.into(), kind: PieceKind::Polygon, vertices }
    }

    pub fn segment(name: impl Into<String>, a: Point2<S>, b: Point2<S>) -> Self {
        Self { name: name.into(), kind: PieceKind::Segment, vertices: vec![a, b] }
    }

    pub fn is_polygon(&self) -> bool {
        self.kind == PieceKind::Polygon
    }

    /// Number of sides; a segment has a single side.
    pub fn side_count(&self) -> usize {
        match self.kind {
            PieceKind::Polygon => self.vertices.len(),
            PieceKind::Segment => 1,
        }
    }

    pub fn side(&self, i: usize) -> (Point2<S>, Point2<S>) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn side_length(&self, i: usize) -> S {
        let (a, b) = self.side(i);
        a.dist(b)
    }

    /// Boundary position of vertex `i`: arclength from vertex 0 along the
    /// boundary (counterclockwise for polygons, along the segment otherwise).
    pub fn vertex_position(&self, i: usize) -> S {
        (0..i).map(|k| self.side_length(k)).fold(S::zero(), |a, b| a + b)
    }

    /// Perimeter of a polygon, length of a segment.
    pub fn boundary_length(&self) -> S {
        (0..self.side_count()).map(|k| self.side_length(k)).fold(S::zero(), |a, b| a + b)
    }

    pub fn eps(&self) -> S {
        position_eps(self.boundary_length())
    }

    /// Reduces a position to `[0, L)` on a polygon; segments are not wrapped.
    pub fn wrap(&self, s: S) -> S {
        match self.kind {
            PieceKind::Segment => s,
            PieceKind::Polygon => {
                let l = self.boundary_length();
                let mut r = s % l;
                if r < S::zero() {
                    r = r + l;
                }
                if l - r <= self.eps() {
                    r = S::zero();
                }
                r
            }
        }
    }

    /// Distance between two boundary positions along the parameter circle.
    pub fn position_gap(&self, s: S, t: S) -> S {
        match self.kind {
            PieceKind::Segment => (s - t).abs(),
            PieceKind::Polygon => {
                let l = self.boundary_length();
                let d = (self.wrap(s) - self.wrap(t)).abs();
                d.min(l - d)
            }
        }
    }

    pub fn point_at(&self, s: S) -> Point2<S> {
        let s = self.wrap(s);
        let mut acc = S::zero();
        for i in 0..self.side_count() {
            let len = self.side_length(i);
            if s <= acc + len || i + 1 == self.side_count() {
                let (a, b) = self.side(i);
                let t = ((s - acc) / len).max(S::zero()).min(S::one());
                return a.lerp(b, t);
            }
            acc = acc + len;
        }
        self.vertices[0]
    }

    /// Side containing the position together with the offset from its start.
    /// Corners are reported on the side they start.
    pub fn side_at(&self, s: S) -> (usize, S) {
        let s = self.wrap(s);
        let eps = self.eps();
        let mut acc = S::zero();
        for i in 0..self.side_count() {
            let len = self.side_length(i);
            if s < acc + len - eps || i + 1 == self.side_count() {
                return (i, (s - acc).max(S::zero()));
            }
            acc = acc + len;
        }
        (0, S::zero())
    }

    /// Index of the vertex at this boundary position, if any.
    pub fn corner_at(&self, s: S) -> Option<usize> {
        let n = match self.kind {
            PieceKind::Polygon => self.vertices.len(),
            PieceKind::Segment => 2,
        };
        (0..n).find(|&i| self.position_gap(self.vertex_position(i), s) <= self.eps())
    }

    /// Interior angle at vertex `i` of a polygon.
    pub fn corner_angle(&self, i: usize) -> S {
        let n = self.vertices.len();
        let p = self.vertices[i];
        let prev = self.vertices[(i + n - 1) % n];
        let next = self.vertices[(i + 1) % n];
        let u = (next - p).normalized();
        let v = (prev - p).normalized();
        u.dot(v).max(-S::one()).min(S::one()).acos()
    }

    /// Boundary position of a planar point lying on the boundary.
    pub fn locate_boundary(&self, p: Point2<S>) -> Option<S> {
        let eps = self.eps();
        let mut acc = S::zero();
        for i in 0..self.side_count() {
            let (a, b) = self.side(i);
            let len = a.dist(b);
            let d = b - a;
            let t = (p - a).dot(d) / (len * len);
            let foot = a.lerp(b, t.max(S::zero()).min(S::one()));
            if foot.dist(p) <= eps {
                if self.kind == PieceKind::Segment {
                    // only the endpoints are boundary points of a segment
                    let s = acc + t.max(S::zero()).min(S::one()) * len;
                    return if s <= eps {
                        Some(S::zero())
                    } else if (s - len).abs() <= eps {
                        Some(len)
                    } else {
                        None
                    };
                }
                return Some(self.wrap(acc + t.max(S::zero()).min(S::one()) * len));
            }
            acc = acc + len;
        }
        None
    }

    /// Whether the point lies in the closed piece, within the piece tolerance.
    pub fn contains(&self, p: Point2<S>) -> bool {
        let eps = self.eps();
        match self.kind {
            PieceKind::Segment => {
                let (a, b) = self.side(0);
                let len = a.dist(b);
                let t = (p - a).dot(b - a) / (len * len);
                let foot = a.lerp(b, t.max(S::zero()).min(S::one()));
                foot.dist(p) <= eps
            }
            PieceKind::Polygon => (0..self.side_count()).all(|i| {
                let (a, b) = self.side(i);
                (b - a).cross(p - a) / a.dist(b) >= -eps
            }),
        }
    }

    pub fn diameter(&self) -> S {
        let mut d = S::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    pub fn area(&self) -> S {
        if self.kind == PieceKind::Segment {
            return S::zero();
        }
        let n = self.vertices.len();
        let twice = (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .fold(S::zero(), |a, b| a + b);
        twice * S::half()
    }
}

/// Which part of a piece boundary an arc covers.
#[derive(Debug, Clone, PartialEq)]
pub enum ArcSupport<S> {
    /// Consecutive full sides in counterclockwise order.
    Sides(Vec<usize>),
    /// The part of one side between two arclength offsets from its start.
    SubSide { side: usize, from: S, to: S },
    /// An endpoint of a segment piece (a zero-length arc).
    Vertex(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryArc<S> {
    pub name: String,
    pub piece: usize,
    pub support: ArcSupport<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Member {
    pub arc: usize,
    /// The member is traversed backwards: class parameter `τ` sits at arc
    /// parameter `length − τ`.
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GluingClass {
    pub name: String,
    pub members: Vec<Member>,
    /// Single member glued to itself by `t ↦ length − t`.
    pub self_fold: bool,
}

impl GluingClass {
    pub fn pair(name: impl Into<String>, a: Member, b: Member) -> Self {
        Self { name: name.into(), members: vec![a, b], self_fold: false }
    }

    pub fn fold(name: impl Into<String>, arc: usize) -> Self {
        Self { name: name.into(), members: vec![Member { arc, reversed: false }], self_fold: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpec<S> {
    pub pieces: Vec<Piece<S>>,
    pub arcs: Vec<BoundaryArc<S>>,
    pub gluings: Vec<GluingClass>,
    pub curvature: Curvature<S>,
}

impl<S: Scalar> ComplexSpec<S> {
    pub fn new(kappa: S) -> Result<Self> {
        Ok(Self { pieces: Vec::new(), arcs: Vec::new(), gluings: Vec::new(), curvature: Curvature::new(kappa)? })
    }

    pub fn kappa(&self) -> S {
        self.curvature.kappa()
    }

    pub fn piece_index(&self, name: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.name == name)
    }

    pub fn arc_index(&self, name: &str) -> Option<usize> {
        self.arcs.iter().position(|a| a.name == name)
    }

    pub fn add_piece(&mut self, piece: Piece<S>) -> usize {
        self.pieces.push(piece);
        self.pieces.len() - 1
    }

    pub fn add_arc(&mut self, name: impl Into<String>, piece: &str, support: ArcSupport<S>) -> Result<usize> {
        let piece = self
            .piece_index(piece)
            .ok_or_else(|| Error::InvalidComplex(format!("unknown piece '{piece}'")))?;
        self.arcs.push(BoundaryArc { name: name.into(), piece, support });
        Ok(self.arcs.len() - 1)
    }

    /// Adds a class from `(arc name, reversed)` pairs.
    pub fn glue(&mut self, name: impl Into<String>, members: &[(&str, bool)]) -> Result<usize> {
        let members = members
            .iter()
            .map(|(arc, reversed)| {
                self.arc_index(arc)
                    .map(|arc| Member { arc, reversed: *reversed })
                    .ok_or_else(|| Error::InvalidComplex(format!("unknown arc '{arc}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.gluings.push(GluingClass { name: name.into(), members, self_fold: false });
        Ok(self.gluings.len() - 1)
    }

    pub fn fold(&mut self, name: impl Into<String>, arc: &str) -> Result<usize> {
        let arc = self
            .arc_index(arc)
            .ok_or_else(|| Error::InvalidComplex(format!("unknown arc '{arc}'")))?;
        self.gluings.push(GluingClass::fold(name, arc));
        Ok(self.gluings.len() - 1)
    }

    /// Whether every piece is a polygon.
    pub fn is_two_dimensional(&self) -> bool {
        self.pieces.iter().all(|p| p.is_polygon())
    }

    /// Arclength of an arc; zero for segment endpoints.
    pub fn arc_length(&self, arc: usize) -> S {
        let a = &self.arcs[arc];
        let piece = &self.pieces[a.piece];
        match &a.support {
            ArcSupport::Sides(sides) => sides.iter().map(|&i| piece.side_length(i)).fold(S::zero(), |x, y| x + y),
            ArcSupport::SubSide { from, to, .. } => *to - *from,
            ArcSupport::Vertex(_) => S::zero(),
        }
    }

    /// Boundary position where the arc starts.
    pub fn arc_start(&self, arc: usize) -> S {
        let a = &self.arcs[arc];
        let piece = &self.pieces[a.piece];
        match &a.support {
            ArcSupport::Sides(sides) => piece.vertex_position(sides.first().copied().unwrap_or(0)),
            ArcSupport::SubSide { side, from, .. } => piece.vertex_position(*side) + *from,
            ArcSupport::Vertex(v) => piece.vertex_position(*v),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    pub fn rect(name: &str, w: f64, h: f64) -> Piece<f64> {
        Piece::polygon(name, vec![p(0.0, 0.0), p(w, 0.0), p(w, h), p(0.0, h)])
    }

    /// Two unit squares with side `i` of one glued to side `i` of the other.
    pub fn pillowcase() -> ComplexSpec<f64> {
        let mut s = ComplexSpec::new(0.0).unwrap();
        s.add_piece(rect("sq1", 1.0, 1.0));
        s.add_piece(rect("sq2", 1.0, 1.0));
        for i in 0..4 {
            s.add_arc(format!("a{i}"), "sq1", ArcSupport::Sides(vec![i])).unwrap();
            s.add_arc(format!("b{i}"), "sq2", ArcSupport::Sides(vec![i])).unwrap();
            s.glue(format!("g{i}"), &[(&format!("a{i}"), false), (&format!("b{i}"), false)]).unwrap();
        }
        s
    }

    /// Unit square with the two sides meeting at (1, 0) folded onto each other.
    pub fn paper_cup() -> ComplexSpec<f64> {
        let mut s = ComplexSpec::new(0.0).unwrap();
        s.add_piece(rect("sq", 1.0, 1.0));
        s.add_arc("e", "sq", ArcSupport::Sides(vec![0, 1])).unwrap();
        s.fold("f", "e").unwrap();
        s
    }

    /// 4×2 rectangle with the middle half of the bottom side folded.
    pub fn torn_envelope() -> ComplexSpec<f64> {
        let mut s = ComplexSpec::new(0.0).unwrap();
        s.add_piece(rect("r", 4.0, 2.0));
        s.add_arc("t", "r", ArcSupport::SubSide { side: 0, from: 1.0, to: 3.0 }).unwrap();
        s.fold("f", "t").unwrap();
        s
    }

    pub fn regular_polygon(name: &str, n: usize, radius: f64) -> Piece<f64> {
        let verts = (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                p(radius * a.cos(), radius * a.sin())
            })
            .collect();
        Piece::polygon(name, verts)
    }

    /// Regular 96-gon whose boundary is cut into three arcs glued by rotation.
    pub fn z3_disk() -> ComplexSpec<f64> {
        let mut s = ComplexSpec::new(0.0).unwrap();
        s.add_piece(regular_polygon("disk", 96, 1.0));
        for k in 0..3 {
            s.add_arc(format!("c{k}"), "disk", ArcSupport::Sides((32 * k..32 * (k + 1)).collect())).unwrap();
        }
        s.glue("rot", &[("c0", false), ("c1", false), ("c2", false)]).unwrap();
        s
    }

    /// Three segments of length π glued end to end into a circle.
    pub fn three_pi_circle() -> ComplexSpec<f64> {
        let pi = std::f64::consts::PI;
        let mut s = ComplexSpec::new(1.0).unwrap();
        for k in 0..3 {
            let y = 2.0 * k as f64;
            s.add_piece(Piece::segment(format!("I{k}"), p(0.0, y), p(pi, y)));
            s.add_arc(format!("s{k}"), &format!("I{k}"), ArcSupport::Vertex(0)).unwrap();
            s.add_arc(format!("e{k}"), &format!("I{k}"), ArcSupport::Vertex(1)).unwrap();
        }
        s.glue("j01", &[("e0", false), ("s1", false)]).unwrap();
        s.glue("j12", &[("e1", false), ("s2", false)]).unwrap();
        s.glue("j20", &[("e2", false), ("s0", false)]).unwrap();
        s
    }
}
