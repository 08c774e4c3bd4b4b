use crate::error::{Error, Result};
use crate::model::{ArcSupport, ComplexSpec, PieceKind};
use crate::scalar::Scalar;

/// A point on a piece boundary, addressed by its boundary position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EPoint<S> {
    pub piece: usize,
    pub s: S,
}

#[derive(Debug, Clone)]
struct ArcChart<S> {
    piece: usize,
    start: S,
    length: S,
    /// The arc is the whole boundary circle of its piece.
    closed: bool,
    class: Option<(usize, usize)>,
}

/// Arclength charts of all arcs and the maps between them induced by the
/// gluing classes.
///
/// Members of a class are parametrized proportionally to the first member,
/// so classes whose arcs differ in length still define a (non-isometric)
/// constant-speed identification.
#[derive(Debug, Clone)]
pub struct Charts<'a, S> {
    spec: &'a ComplexSpec<S>,
    arcs: Vec<ArcChart<S>>,
}

impl<'a, S: Scalar> Charts<'a, S> {
    pub fn new(spec: &'a ComplexSpec<S>) -> Result<Self> {
        let mut arcs = Vec::with_capacity(spec.arcs.len());
        for (i, arc) in spec.arcs.iter().enumerate() {
            let piece = spec
                .pieces
                .get(arc.piece)
                .ok_or_else(|| Error::InvalidComplex(format!("arc '{}' refers to a missing piece", arc.name)))?;
            let ok = match (&arc.support, piece.kind) {
                (ArcSupport::Sides(sides), PieceKind::Polygon) => {
                    !sides.is_empty() && sides.iter().all(|&k| k < piece.side_count())
                }
                (ArcSupport::SubSide { side, .. }, PieceKind::Polygon) => *side < piece.side_count(),
                (ArcSupport::Vertex(v), PieceKind::Segment) => *v < 2,
                _ => false,
            };
            if !ok {
                return Err(Error::InvalidComplex(format!("arc '{}' does not fit its piece", arc.name)));
            }
            let length = spec.arc_length(i);
            let closed = piece.is_polygon() && (length - piece.boundary_length()).abs() <= piece.eps();
            arcs.push(ArcChart { piece: arc.piece, start: spec.arc_start(i), length, closed, class: None });
        }
        for (c, class) in spec.gluings.iter().enumerate() {
            for (m, member) in class.members.iter().enumerate() {
                let chart = arcs
                    .get_mut(member.arc)
                    .ok_or_else(|| Error::InvalidComplex(format!("class '{}' refers to a missing arc", class.name)))?;
                if chart.class.is_some() {
                    return Err(Error::InvalidComplex(format!(
                        "arc '{}' belongs to more than one gluing class",
                        spec.arcs[member.arc].name
                    )));
                }
                chart.class = Some((c, m));
            }
        }
        Ok(Self { spec, arcs })
    }

    pub fn spec(&self) -> &'a ComplexSpec<S> {
        self.spec
    }

    pub fn arc_length(&self, arc: usize) -> S {
        self.arcs[arc].length
    }

    pub fn arc_piece(&self, arc: usize) -> usize {
        self.arcs[arc].piece
    }

    pub fn arc_class(&self, arc: usize) -> Option<(usize, usize)> {
        self.arcs[arc].class
    }

    /// Length of a class in the units of its first member.
    pub fn class_length(&self, class: usize) -> S {
        self.arcs[self.spec.gluings[class].members[0].arc].length
    }

    pub fn arc_point(&self, arc: usize, t: S) -> EPoint<S> {
        let a = &self.arcs[arc];
        let piece = &self.spec.pieces[a.piece];
        EPoint { piece: a.piece, s: piece.wrap(a.start + t) }
    }

    /// Arc parameters at which the arc passes through boundary position `s`.
    /// A closed arc passes through its start at both `0` and `length`.
    pub fn arc_params_at(&self, arc: usize, p: EPoint<S>) -> Vec<S> {
        let a = &self.arcs[arc];
        if a.piece != p.piece {
            return Vec::new();
        }
        let piece = &self.spec.pieces[a.piece];
        let eps = piece.eps();
        if piece.kind == PieceKind::Segment {
            return if (p.s - a.start).abs() <= eps { vec![S::zero()] } else { Vec::new() };
        }
        let d = piece.wrap(p.s - a.start);
        if a.closed {
            if d <= eps {
                return vec![S::zero(), a.length];
            }
            return vec![d.min(a.length)];
        }
        if d <= a.length + eps {
            vec![d.min(a.length)]
        } else {
            Vec::new()
        }
    }

    /// Arcs through the point, with the parameters where they pass it.
    pub fn arcs_at(&self, p: EPoint<S>) -> Vec<(usize, S)> {
        let mut out = Vec::new();
        for arc in 0..self.arcs.len() {
            for t in self.arc_params_at(arc, p) {
                out.push((arc, t));
            }
        }
        out
    }

    pub fn on_e(&self, p: EPoint<S>) -> bool {
        !self.arcs_at(p).is_empty()
    }

    /// Class parameter of member `m` at arc parameter `t`.
    pub fn class_param(&self, class: usize, m: usize, t: S) -> S {
        let g = &self.spec.gluings[class];
        let member = g.members[m];
        let len = self.arcs[member.arc].length;
        let base = self.class_length(class);
        let t = if member.reversed { len - t } else { t };
        if len > S::zero() {
            t * base / len
        } else {
            t
        }
    }

    /// Arc parameter of member `m` at class parameter `tau`.
    pub fn member_param(&self, class: usize, m: usize, tau: S) -> S {
        let g = &self.spec.gluings[class];
        let member = g.members[m];
        let len = self.arcs[member.arc].length;
        let base = self.class_length(class);
        let t = if base > S::zero() { tau * len / base } else { tau };
        if member.reversed {
            len - t
        } else {
            t
        }
    }

    /// Points directly identified with `p` by one application of a gluing map.
    pub fn images(&self, p: EPoint<S>) -> Vec<EPoint<S>> {
        let mut out = Vec::new();
        for (arc, t) in self.arcs_at(p) {
            let Some((class, m)) = self.arcs[arc].class else { continue };
            let g = &self.spec.gluings[class];
            let tau = self.class_param(class, m, t);
            if g.self_fold {
                let len = self.class_length(class);
                out.push(self.arc_point(arc, self.member_param(class, m, len - tau)));
            } else {
                for k in 0..g.members.len() {
                    if k != m {
                        out.push(self.arc_point(g.members[k].arc, self.member_param(class, k, tau)));
                    }
                }
            }
        }
        out
    }

    /// Equivalence class of `p` under the relation generated by the gluing;
    /// `p` comes first.
    pub fn closure(&self, p: EPoint<S>) -> Vec<EPoint<S>> {
        let mut out = vec![p];
        let mut i = 0;
        while i < out.len() {
            for q in self.images(out[i]) {
                if !out.iter().any(|r| self.same_point(*r, q)) {
                    out.push(q);
                }
            }
            i += 1;
        }
        out
    }

    pub fn same_point(&self, a: EPoint<S>, b: EPoint<S>) -> bool {
        a.piece == b.piece && self.spec.pieces[a.piece].position_gap(a.s, b.s) <= self.spec.pieces[a.piece].eps()
    }

    /// Images of `p` under the gluing used as a map: the other member of a
    /// pair, the mirror point of a fold, the next member of larger classes.
    /// Points off the glued set map to themselves.
    pub fn involution(&self, p: EPoint<S>) -> EPoint<S> {
        for (arc, t) in self.arcs_at(p) {
            let Some((class, m)) = self.arcs[arc].class else { continue };
            let g = &self.spec.gluings[class];
            let tau = self.class_param(class, m, t);
            return if g.self_fold {
                self.arc_point(arc, self.member_param(class, m, self.class_length(class) - tau))
            } else {
                let k = (m + 1) % g.members.len();
                self.arc_point(g.members[k].arc, self.member_param(class, k, tau))
            };
        }
        p
    }

    /// Breakpoints of an arc: its ends and the piece corners inside it.
    pub fn arc_breakpoints(&self, arc: usize) -> Vec<S> {
        let a = &self.arcs[arc];
        let piece = &self.spec.pieces[a.piece];
        let mut ts = vec![S::zero(), a.length];
        if piece.is_polygon() {
            let eps = piece.eps();
            for v in 0..piece.vertices.len() {
                let d = piece.wrap(piece.vertex_position(v) - a.start);
                if d > eps && d < a.length - eps {
                    ts.push(d);
                }
            }
        }
        ts.sort_by(|x, y| crate::scalar::cmp_scalar(*x, *y));
        ts.dedup_by(|x, y| (*x - *y).abs() <= piece.eps());
        ts
    }
}
