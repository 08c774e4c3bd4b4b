//! Structural checks of the gluing hypotheses.

use std::fmt;

use crate::kernel::d_kappa;
use crate::model::{ArcSupport, ComplexSpec, PieceKind};
use crate::scalar::Scalar;

/// Class lengths must agree to this absolute tolerance.
pub const LENGTH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FindingCode {
    NoPieces,
    UnresolvedId,
    DegeneratePiece,
    NonConvexPiece,
    ArcKindMismatch,
    ArcOutOfRange,
    ArcNotContiguous,
    ArcOverlap,
    ArcInMultipleClasses,
    EmptyClass,
    FoldClassSize,
    ClassLengthMismatch,
    TheoremHypothesisViolated,
    NotStructurallyExtremal,
    NotKappaExtremal,
    SpadeCondition,
    IsometryViolated,
}

impl FindingCode {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingCode::NoPieces => "NO_PIECES",
            FindingCode::UnresolvedId => "UNRESOLVED_ID",
            FindingCode::DegeneratePiece => "DEGENERATE_PIECE",
            FindingCode::NonConvexPiece => "NON_CONVEX_PIECE",
            FindingCode::ArcKindMismatch => "ARC_KIND_MISMATCH",
            FindingCode::ArcOutOfRange => "ARC_OUT_OF_RANGE",
            FindingCode::ArcNotContiguous => "ARC_NOT_CONTIGUOUS",
            FindingCode::ArcOverlap => "ARC_OVERLAP",
            FindingCode::ArcInMultipleClasses => "ARC_IN_MULTIPLE_CLASSES",
            FindingCode::EmptyClass => "EMPTY_CLASS",
            FindingCode::FoldClassSize => "FOLD_CLASS_SIZE",
            FindingCode::ClassLengthMismatch => "CLASS_LENGTH_MISMATCH",
            FindingCode::TheoremHypothesisViolated => "THEOREM_HYPOTHESIS_VIOLATED",
            FindingCode::NotStructurallyExtremal => "NOT_STRUCTURALLY_EXTREMAL",
            FindingCode::NotKappaExtremal => "NOT_KAPPA_EXTREMAL",
            FindingCode::SpadeCondition => "SPADE_CONDITION",
            FindingCode::IsometryViolated => "ISOMETRY_VIOLATED",
        }
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub code: FindingCode,
    pub message: String,
    /// Ids of the pieces, arcs or classes involved.
    pub location: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationStatus {
    Valid,
    ValidWithWarnings,
    Invalid,
}

impl fmt::Display for ValidationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValidationStatus::Valid => "valid",
            ValidationStatus::ValidWithWarnings => "valid-with-warnings",
            ValidationStatus::Invalid => "invalid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn push(&mut self, severity: Severity, code: FindingCode, location: Vec<String>, message: impl Into<String>) {
        self.findings.push(Finding { severity, code, message: message.into(), location });
    }

    pub fn status(&self) -> ValidationStatus {
        let worst = self.findings.iter().map(|f| f.severity).max();
        match worst {
            Some(Severity::Error) => ValidationStatus::Invalid,
            Some(Severity::Warning) => ValidationStatus::ValidWithWarnings,
            _ => ValidationStatus::Valid,
        }
    }

    pub fn has(&self, code: FindingCode) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }

    pub fn codes(&self, severity: Severity) -> Vec<FindingCode> {
        self.findings.iter().filter(|f| f.severity == severity).map(|f| f.code).collect()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
    }
}

pub fn validate<S: Scalar>(spec: &ComplexSpec<S>) -> ValidationReport {
    let mut r = ValidationReport::default();
    if spec.pieces.is_empty() {
        r.push(Severity::Error, FindingCode::NoPieces, vec![], "complex has no pieces");
        return r;
    }
    check_pieces(spec, &mut r);
    let arcs_ok = check_arcs(spec, &mut r);
    check_classes(spec, arcs_ok, &mut r);
    if arcs_ok {
        check_overlaps(spec, &mut r);
        check_kappa_extremal(spec, &mut r);
    }
    if spec.kappa() > S::zero()
        && !spec.pieces.is_empty()
        && spec.pieces.iter().all(|p| p.kind == PieceKind::Segment)
        && spec.pieces.len() > 2
    {
        r.push(
            Severity::Warning,
            FindingCode::TheoremHypothesisViolated,
            spec.pieces.iter().map(|p| p.name.clone()).collect(),
            format!(
                "one-dimensional complex with {} components and positive curvature; at most two are allowed",
                spec.pieces.len()
            ),
        );
    }
    if arcs_ok && !spec.arcs.is_empty() {
        r.push(
            Severity::Info,
            FindingCode::SpadeCondition,
            spec.arcs.iter().map(|a| a.name.clone()).collect(),
            "glued set is a union of boundary arcs of convex pieces; its induced length metric is the boundary path metric",
        );
    }
    r
}

fn check_pieces<S: Scalar>(spec: &ComplexSpec<S>, r: &mut ValidationReport) {
    for piece in &spec.pieces {
        let loc = vec![piece.name.clone()];
        let eps = piece.eps();
        match piece.kind {
            PieceKind::Segment => {
                if piece.vertices.len() != 2 || piece.vertices[0].dist(piece.vertices[1]) <= eps {
                    r.push(Severity::Error, FindingCode::DegeneratePiece, loc, "segment must have two distinct endpoints");
                }
            }
            PieceKind::Polygon => {
                let n = piece.vertices.len();
                if n < 3 {
                    r.push(Severity::Error, FindingCode::DegeneratePiece, loc, "polygon needs at least three vertices");
                    continue;
                }
                if (0..n).any(|i| piece.side_length(i) <= eps) {
                    r.push(Severity::Error, FindingCode::DegeneratePiece, loc, "polygon has repeated vertices");
                    continue;
                }
                let convex = (0..n).all(|i| {
                    let a = piece.vertices[i];
                    let b = piece.vertices[(i + 1) % n];
                    let c = piece.vertices[(i + 2) % n];
                    (b - a).cross(c - b) > eps * (b - a).norm()
                });
                // all left turns and a total turn of one revolution
                let turning = (0..n)
                    .map(|i| {
                        let a = piece.vertices[i];
                        let b = piece.vertices[(i + 1) % n];
                        let c = piece.vertices[(i + 2) % n];
                        crate::geometry::ccw_angle(b - a, c - b)
                    })
                    .fold(S::zero(), |x, y| x + y);
                let convex = convex && (turning - S::TAU()).abs() < S::lit(1e-6);
                if !convex {
                    r.push(
                        Severity::Error,
                        FindingCode::NonConvexPiece,
                        loc,
                        "polygon is not strictly convex and counterclockwise",
                    );
                }
            }
        }
    }
}

/// Returns whether every arc resolves and fits its piece.
fn check_arcs<S: Scalar>(spec: &ComplexSpec<S>, r: &mut ValidationReport) -> bool {
    let mut ok = true;
    for arc in &spec.arcs {
        let loc = vec![arc.name.clone()];
        let Some(piece) = spec.pieces.get(arc.piece) else {
            r.push(Severity::Error, FindingCode::UnresolvedId, loc, "arc refers to a missing piece");
            ok = false;
            continue;
        };
        let loc = vec![arc.name.clone(), piece.name.clone()];
        match (&arc.support, piece.kind) {
            (ArcSupport::Sides(sides), PieceKind::Polygon) => {
                if sides.is_empty() || sides.iter().any(|&s| s >= piece.side_count()) {
                    r.push(Severity::Error, FindingCode::ArcOutOfRange, loc, "side index out of range");
                    ok = false;
                } else if sides.len() > piece.side_count()
                    || sides.windows(2).any(|w| w[1] != (w[0] + 1) % piece.side_count())
                {
                    r.push(
                        Severity::Error,
                        FindingCode::ArcNotContiguous,
                        loc,
                        "sides must be consecutive in counterclockwise order",
                    );
                    ok = false;
                }
            }
            (ArcSupport::SubSide { side, from, to }, PieceKind::Polygon) => {
                if *side >= piece.side_count() {
                    r.push(Severity::Error, FindingCode::ArcOutOfRange, loc, "side index out of range");
                    ok = false;
                    continue;
                }
                let len = piece.side_length(*side);
                let eps = piece.eps();
                if !(*from >= -eps && *to <= len + eps && *to - *from > eps) {
                    r.push(
                        Severity::Error,
                        FindingCode::ArcOutOfRange,
                        loc,
                        format!("sub-side range [{from}, {to}] not inside side of length {len}"),
                    );
                    ok = false;
                } else if *from > eps || *to < len - eps {
                    r.push(
                        Severity::Warning,
                        FindingCode::NotStructurallyExtremal,
                        loc,
                        "arc ends in the interior of a side; the glued space may lose its curvature bound there",
                    );
                }
            }
            (ArcSupport::Vertex(v), PieceKind::Segment) => {
                if *v >= 2 {
                    r.push(Severity::Error, FindingCode::ArcOutOfRange, loc, "segment vertex must be 0 or 1");
                    ok = false;
                }
            }
            _ => {
                r.push(
                    Severity::Error,
                    FindingCode::ArcKindMismatch,
                    loc,
                    "polygon arcs use sides, segment arcs use vertices",
                );
                ok = false;
            }
        }
    }
    ok
}

fn check_classes<S: Scalar>(spec: &ComplexSpec<S>, arcs_ok: bool, r: &mut ValidationReport) {
    let mut owner: Vec<Option<usize>> = vec![None; spec.arcs.len()];
    for (ci, class) in spec.gluings.iter().enumerate() {
        let loc = vec![class.name.clone()];
        if class.members.is_empty() {
            r.push(Severity::Error, FindingCode::EmptyClass, loc, "gluing class has no members");
            continue;
        }
        if class.members.iter().any(|m| m.arc >= spec.arcs.len()) {
            r.push(Severity::Error, FindingCode::UnresolvedId, loc, "gluing class refers to a missing arc");
            continue;
        }
        for m in &class.members {
            match owner[m.arc] {
                Some(prev) if prev != ci => r.push(
                    Severity::Error,
                    FindingCode::ArcInMultipleClasses,
                    vec![spec.arcs[m.arc].name.clone(), spec.gluings[prev].name.clone(), class.name.clone()],
                    "arc belongs to more than one gluing class",
                ),
                Some(_) => r.push(
                    Severity::Error,
                    FindingCode::ArcInMultipleClasses,
                    vec![spec.arcs[m.arc].name.clone(), class.name.clone()],
                    "arc listed twice in one class",
                ),
                None => owner[m.arc] = Some(ci),
            }
        }
        if class.self_fold && class.members.len() != 1 {
            r.push(Severity::Error, FindingCode::FoldClassSize, loc.clone(), "a fold has exactly one member");
        }
        if arcs_ok {
            let lengths: Vec<S> = class.members.iter().map(|m| spec.arc_length(m.arc)).collect();
            let l0 = lengths[0];
            if lengths.iter().any(|&l| (l - l0).abs() > S::lit(LENGTH_TOLERANCE)) {
                let mut names = loc.clone();
                names.extend(class.members.iter().map(|m| spec.arcs[m.arc].name.clone()));
                r.push(
                    Severity::Error,
                    FindingCode::ClassLengthMismatch,
                    names,
                    format!(
                        "member lengths differ: {}",
                        lengths.iter().map(|l| format!("{l}")).collect::<Vec<_>>().join(", ")
                    ),
                );
            }
        }
        if class.members.len() >= 3 {
            r.push(
                Severity::Warning,
                FindingCode::TheoremHypothesisViolated,
                loc,
                format!("class of {} arcs is not an involution", class.members.len()),
            );
        }
    }
}

fn check_overlaps<S: Scalar>(spec: &ComplexSpec<S>, r: &mut ValidationReport) {
    for (pi, piece) in spec.pieces.iter().enumerate() {
        if !piece.is_polygon() {
            continue;
        }
        let eps = piece.eps();
        let per = piece.boundary_length();
        let arcs: Vec<usize> = (0..spec.arcs.len()).filter(|&a| spec.arcs[a].piece == pi).collect();
        for (i, &a) in arcs.iter().enumerate() {
            for &b in &arcs[i + 1..] {
                // interval overlap on the circle of circumference `per`
                let (sa, la) = (spec.arc_start(a), spec.arc_length(a));
                let (sb, lb) = (spec.arc_start(b), spec.arc_length(b));
                let d = piece.wrap(sb - sa);
                let overlap_ab = (la - d).max(S::zero());
                let overlap_ba = (lb - (per - d)).max(S::zero());
                let overlap = overlap_ab.max(overlap_ba).min(la).min(lb);
                let full = la >= per - eps || lb >= per - eps;
                if overlap > eps || (full && la > eps && lb > eps) {
                    r.push(
                        Severity::Error,
                        FindingCode::ArcOverlap,
                        vec![spec.arcs[a].name.clone(), spec.arcs[b].name.clone()],
                        "arcs overlap beyond their endpoints",
                    );
                }
            }
        }
    }
}

fn check_kappa_extremal<S: Scalar>(spec: &ComplexSpec<S>, r: &mut ValidationReport) {
    let kappa = spec.kappa();
    if kappa <= S::zero() {
        return;
    }
    let half = d_kappa(kappa) * S::half();
    for (pi, piece) in spec.pieces.iter().enumerate() {
        let arcs: Vec<usize> = (0..spec.arcs.len()).filter(|&a| spec.arcs[a].piece == pi).collect();
        let loc = vec![piece.name.clone()];
        if arcs.is_empty() {
            if piece.diameter() > half {
                r.push(
                    Severity::Error,
                    FindingCode::NotKappaExtremal,
                    loc,
                    format!("piece without glued set has diameter {} > D_κ/2 = {half}", piece.diameter()),
                );
            }
            continue;
        }
        let single_point = arcs.iter().all(|&a| spec.arc_length(a) <= piece.eps())
            && arcs.iter().all(|&a| piece.position_gap(spec.arc_start(a), spec.arc_start(arcs[0])) <= piece.eps());
        if single_point {
            let x = piece.point_at(spec.arc_start(arcs[0]));
            let reach = piece.vertices.iter().map(|v| v.dist(x)).fold(S::zero(), S::max);
            if reach > half {
                r.push(
                    Severity::Error,
                    FindingCode::NotKappaExtremal,
                    loc,
                    format!("one-point glued set does not see the whole piece within D_κ/2 = {half}"),
                );
            }
        }
    }
}
