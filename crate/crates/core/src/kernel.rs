//! Model-space trigonometry for the plane of constant curvature `kappa`.
//!
//! `sn`, `cs`, `tg` and `rho` are the generalized sine, cosine, tangent and
//! the primitive of `sn`. Comparison angles, cone distances and the inverse
//! problem (third side from a hinge) are evaluated through half-angle forms
//!
//! ```text
//! sin²(α/2) = sn((A+B−C)/2) · sn((A−B+C)/2) / (sn B · sn C)
//! sn(A/2)²  = sn((B−C)/2)² + sn B · sn C · sin²(α/2)
//! ```
//!
//! which are algebraically identical to the `cs`-law but do not cancel
//! catastrophically for small or thin triangles.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Guard for arcsine/arccosine arguments: values within this distance of
/// the admissible interval are clamped, anything beyond is an error.
pub const ARG_GUARD: f64 = 1e-12;

/// Curvature of the model plane together with its diameter `D_κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature<S> {
    kappa: S,
}

impl<S: Scalar> Curvature<S> {
    pub fn new(kappa: S) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::Domain(format!("curvature must be finite, got {kappa}")));
        }
        Ok(Self { kappa })
    }

    pub fn kappa(&self) -> S {
        self.kappa
    }

    /// `π/√κ` for positive curvature, `+∞` otherwise.
    pub fn d_kappa(&self) -> S {
        d_kappa(self.kappa)
    }
}

/// An angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle<S>(pub S);

impl<S: Scalar> Angle<S> {
    pub fn value(self) -> S {
        self.0
    }
}

/// Side lengths `(A; B, C)` of a triangle, `A` opposite the vertex whose
/// angle is asked for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides<S> {
    a: S,
    b: S,
    c: S,
}

impl<S: Scalar> TriangleSides<S> {
    /// Validates non-negativity and the triangle inequality. A relative slack
    /// of [`ARG_GUARD`] absorbs roundoff in the inputs.
    pub fn new(a: S, b: S, c: S) -> Result<Self> {
        for (name, v) in [("A", a), ("B", b), ("C", c)] {
            if !(v.is_finite() && v >= S::zero()) {
                return Err(Error::Domain(format!("side {name} must be finite and >= 0, got {v}")));
            }
        }
        let slack = S::lit(ARG_GUARD) * (S::one() + a + b + c);
        if a > b + c + slack || a + slack < (b - c).abs() {
            return Err(Error::Domain(format!(
                "sides ({a}; {b}, {c}) violate the triangle inequality"
            )));
        }
        Ok(Self::clamped(a, b, c))
    }

    /// Projects approximate metric data onto a valid triangle by clamping the
    /// opposite side `A` into `[|B − C|, B + C]`.
    pub fn clamped(a: S, b: S, c: S) -> Self {
        let b = b.max(S::zero());
        let c = c.max(S::zero());
        let a = a.max((b - c).abs()).min(b + c);
        Self { a, b, c }
    }

    pub fn a(&self) -> S {
        self.a
    }

    pub fn b(&self) -> S {
        self.b
    }

    pub fn c(&self) -> S {
        self.c
    }
}

pub fn d_kappa<S: Scalar>(kappa: S) -> S {
    if kappa > S::zero() {
        S::PI() / kappa.sqrt()
    } else {
        S::infinity()
    }
}

/// Generalized sine: the solution of `sn'' + κ sn = 0`, `sn(0) = 0`, `sn'(0) = 1`.
pub fn sn<S: Scalar>(kappa: S, t: S) -> S {
    if kappa > S::zero() {
        let k = kappa.sqrt();
        (k * t).sin() / k
    } else if kappa < S::zero() {
        let k = (-kappa).sqrt();
        (k * t).sinh() / k
    } else {
        t
    }
}

/// Generalized cosine, the derivative of [`sn`].
pub fn cs<S: Scalar>(kappa: S, t: S) -> S {
    if kappa > S::zero() {
        (kappa.sqrt() * t).cos()
    } else if kappa < S::zero() {
        ((-kappa).sqrt() * t).cosh()
    } else {
        S::one()
    }
}

/// `sn / cs`; undefined where `cs` vanishes.
pub fn tg<S: Scalar>(kappa: S, t: S) -> Result<S> {
    let c = cs(kappa, t);
    if c.abs() <= S::lit(ARG_GUARD) {
        return Err(Error::Domain(format!("tg_{kappa} undefined at t = {t} (cs = 0)")));
    }
    Ok(sn(kappa, t) / c)
}

/// `ρ_κ(t) = ∫₀ᵗ sn_κ`, evaluated as `2 sn_κ(t/2)²`.
pub fn rho<S: Scalar>(kappa: S, t: S) -> Result<S> {
    if !(t >= S::zero()) {
        return Err(Error::Domain(format!("rho requires t >= 0, got {t}")));
    }
    let s = sn(kappa, t * S::half());
    Ok(S::two() * s * s)
}

/// Inverse of `sn` on `[0, D_κ/2]`.
fn asn<S: Scalar>(kappa: S, y: S) -> Result<S> {
    if kappa > S::zero() {
        let k = kappa.sqrt();
        let arg = k * y;
        if arg > S::one() + S::lit(ARG_GUARD) {
            return Err(Error::Domain(format!("sn_{kappa} does not reach {y}")));
        }
        Ok(arg.min(S::one()).asin() / k)
    } else if kappa < S::zero() {
        let k = (-kappa).sqrt();
        Ok((k * y).asinh() / k)
    } else {
        Ok(y)
    }
}

/// Clamps a value expected in `[0, 1]`, failing beyond the roundoff guard.
fn unit_interval<S: Scalar>(x: S, what: &str) -> Result<S> {
    let g = S::lit(ARG_GUARD);
    if !(x >= -g && x <= S::one() + g) {
        return Err(Error::NumericInconsistency(format!("{what} = {x} outside [0, 1]")));
    }
    Ok(x.max(S::zero()).min(S::one()))
}

/// The κ-comparison angle `∠̃_κ(A; B, C)` opposite to `A`.
///
/// Degenerate configurations (`B·C = 0`, or perimeter `≥ 2 D_κ` for κ > 0)
/// give 0. The κ = 0 case is the Euclidean law of cosines.
pub fn comparison_angle<S: Scalar>(kappa: S, sides: &TriangleSides<S>) -> Result<Angle<S>> {
    let (a, b, c) = (sides.a, sides.b, sides.c);
    if b * c <= S::zero() {
        return Ok(Angle(S::zero()));
    }
    if kappa > S::zero() && a + b + c >= S::two() * d_kappa(kappa) {
        return Ok(Angle(S::zero()));
    }
    let u = (a + b - c) * S::half();
    let v = (a - b + c) * S::half();
    let hav = if kappa == S::zero() {
        (u * v) / (b * c)
    } else {
        (sn(kappa, u) * sn(kappa, v)) / (sn(kappa, b) * sn(kappa, c))
    };
    let hav = unit_interval(hav, "sin²(α/2)")?;
    Ok(Angle(S::two() * hav.sqrt().asin()))
}

/// κ-cone distance between `(a, ξ)` and `(b, η)` with `|ξη| = sigma`.
/// Angles beyond π are capped at π.
pub fn cone_distance<S: Scalar>(kappa: S, a: S, sigma: Angle<S>, b: S) -> Result<S> {
    let half_d = d_kappa(kappa) * S::half();
    for (name, r) in [("a", a), ("b", b)] {
        if !(r >= S::zero() && r < half_d) {
            return Err(Error::Domain(format!("cone radius {name} = {r} outside [0, D_κ/2)")));
        }
    }
    if !(sigma.0 >= S::zero()) {
        return Err(Error::Domain(format!("cone angle must be >= 0, got {}", sigma.0)));
    }
    let s = sigma.0.min(S::PI());
    third_side(kappa, a, b, s)
}

/// Side opposite to angle `alpha` in the model triangle with adjacent sides
/// `B` and `C`; inverse of [`comparison_angle`] in its first argument.
pub fn model_side<S: Scalar>(kappa: S, b: S, c: S, alpha: Angle<S>) -> Result<S> {
    let d = d_kappa(kappa);
    if !(alpha.0 >= S::zero() && alpha.0 <= S::PI()) {
        return Err(Error::Domain(format!("hinge angle {} outside [0, π]", alpha.0)));
    }
    if !(b >= S::zero() && c >= S::zero() && b < d && c < d) {
        return Err(Error::Domain(format!("hinge sides ({b}, {c}) must lie in [0, D_κ)")));
    }
    let a = third_side(kappa, b, c, alpha.0)?;
    if kappa > S::zero() && b * c > S::zero() && a + b + c >= S::two() * d {
        return Err(Error::Domain(format!(
            "no model triangle with sides ({b}, {c}) and angle {}",
            alpha.0
        )));
    }
    Ok(a)
}

fn third_side<S: Scalar>(kappa: S, b: S, c: S, alpha: S) -> Result<S> {
    let h = (alpha * S::half()).sin();
    if kappa == S::zero() {
        let d = b - c;
        return Ok((d * d + S::lit(4.0) * b * c * h * h).sqrt());
    }
    let sd = sn(kappa, (b - c) * S::half());
    let y2 = sd * sd + sn(kappa, b) * sn(kappa, c) * h * h;
    if y2 < S::zero() {
        return Err(Error::Domain(format!(
            "no model triangle with sides ({b}, {c}) and angle {alpha}"
        )));
    }
    Ok(S::two() * asn(kappa, y2.sqrt())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn angle(k: f64, a: f64, b: f64, c: f64) -> f64 {
        comparison_angle(k, &TriangleSides::new(a, b, c).unwrap()).unwrap().0
    }

    #[test]
    fn sn_examples() {
        assert_eq!(sn(0.0, 2.5), 2.5);
        assert!((sn(1.0, PI / 2.0) - 1.0).abs() < 1e-15);
        assert!((sn(-4.0, 0.3) - (0.6f64).sinh() / 2.0).abs() < 1e-15);
    }

    /// Composite Simpson rule for `∫₀ᵗ sn_κ`, independent of the closed form.
    fn rho_quadrature(kappa: f64, t: f64) -> f64 {
        let n = 2000;
        let h = t / n as f64;
        let mut acc = sn(kappa, 0.0) + sn(kappa, t);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * sn(kappa, i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn rho_matches_quadrature() {
        let expected = rho_quadrature(-1.0, 1.0);
        assert!((expected - 0.5430806348152437).abs() < 1e-12);
        assert!((rho(-1.0, 1.0).unwrap() - expected).abs() < 1e-12);
        for &k in &[-2.0, -0.3, 0.0, 0.5, 1.0] {
            for &t in &[0.1, 0.7, 1.3] {
                assert!((rho(k, t).unwrap() - rho_quadrature(k, t)).abs() < 1e-11);
            }
        }
        assert!((rho(0.0f64, 3.0).unwrap() - 4.5).abs() < 1e-15);
        assert!(rho(1.0, -0.1).is_err());
    }

    #[test]
    fn tg_domain() {
        assert!((tg(1.0, PI / 4.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(tg(1.0, PI / 2.0).is_err());
        assert_eq!(tg(0.0, 3.0).unwrap(), 3.0);
    }

    #[test]
    fn comparison_angle_examples() {
        assert!((angle(0.0, 1.0, 1.0, 1.0) - PI / 3.0).abs() < 1e-12);
        assert_eq!(angle(1.0, 1.0, 0.0, 1.0), 0.0);
        let h = PI / 2.0;
        assert!((angle(1.0, h, h, h) - PI / 2.0).abs() < 1e-12);
        // perimeter reaching 2 D_κ is degenerate
        assert_eq!(angle(1.0, PI, PI / 2.0, PI / 2.0), 0.0);
        // straight angle
        assert!((angle(0.0, 2.0, 1.0, 1.0) - PI).abs() < 1e-12);
        assert!((angle(-1.0, 2.0, 1.0, 1.0) - PI).abs() < 1e-12);
    }

    #[test]
    fn comparison_angle_matches_cs_law() {
        // direct cs-law evaluation for well-conditioned triangles
        for &k in &[-1.5f64, -0.2, 0.3, 1.0] {
            let (a, b, c): (f64, f64, f64) = (0.9, 0.7, 0.8);
            let direct = ((cs(k, a) - cs(k, b) * cs(k, c)) / (k * sn(k, b) * sn(k, c))).acos();
            assert!((angle(k, a, b, c) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_sides_reject_invalid() {
        assert!(TriangleSides::new(3.0, 1.0, 1.0).is_err());
        assert!(TriangleSides::new(-1.0, 1.0, 1.0).is_err());
        assert!(TriangleSides::new(f64::NAN, 1.0, 1.0).is_err());
        let t = TriangleSides::clamped(3.0, 1.0, 1.0);
        assert_eq!(t.a(), 2.0);
    }

    #[test]
    fn cone_distance_examples() {
        assert!((cone_distance(0.0, 3.0, Angle(PI / 2.0), 4.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((cone_distance(0.0, 1.0, Angle(PI), 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((cone_distance(0.0, 1.0, Angle(2.0 * PI), 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((cone_distance(1.0f64, 0.5, Angle(0.0), 1.2).unwrap() - 0.7).abs() < 1e-12);
        assert!(cone_distance(1.0, PI / 2.0, Angle(0.1), 0.2).is_err());
        assert!(cone_distance(1.0, -0.1, Angle(0.1), 0.2).is_err());
    }

    #[test]
    fn cone_distance_spherical_cs_law() {
        let (k, a, b, s): (f64, f64, f64, f64) = (1.0, 0.6, 1.1, 1.9);
        let direct = (cs(k, a) * cs(k, b) + k * sn(k, a) * sn(k, b) * s.cos()).acos();
        assert!((cone_distance(k, a, Angle(s), b).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn model_side_examples() {
        assert!((model_side(0.0, 1.0, 1.0, Angle(PI / 3.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((model_side(0.0, 3.0, 4.0, Angle(PI / 2.0)).unwrap() - 5.0).abs() < 1e-12);
        let h = PI / 2.0;
        assert!((model_side(1.0, h, h, Angle(h)).unwrap() - h).abs() < 1e-12);
        assert!(model_side(1.0, 3.0, 3.0, Angle(PI)).is_err());
        assert!(model_side(0.0, 1.0, 1.0, Angle(4.0)).is_err());
    }

    #[test]
    fn f32_agrees_with_f64() {
        let a64 = angle(0.5, 0.9, 0.7, 0.8);
        let s32 = TriangleSides::new(0.9f32, 0.7, 0.8).unwrap();
        let a32 = comparison_angle(0.5f32, &s32).unwrap().0;
        assert!((a32 as f64 - a64).abs() < 1e-5);
    }

    fn valid_hinge() -> impl Strategy<Value = (f64, f64, f64, f64)> {
        (-2.0f64..2.0, 0.05f64..1.5, 0.05f64..1.5, 0.0f64..PI)
    }

    proptest! {
        #[test]
        fn model_side_round_trip((k, b, c, alpha) in valid_hinge()) {
            // keep the triangle well inside the model plane for κ > 0
            prop_assume!(k <= 0.0 || (b + c) * k.sqrt() < 0.9 * PI);
            let a = model_side(k, b, c, Angle(alpha)).unwrap();
            let back = comparison_angle(k, &TriangleSides::clamped(a, b, c)).unwrap().0;
            prop_assert!((back - alpha).abs() < 1e-10, "alpha={alpha} back={back}");
        }

        #[test]
        fn monotone_in_opposite_side(k in -1.0f64..1.0, b in 0.1f64..1.2, c in 0.1f64..1.2,
                                     s in 0.0f64..1.0, ds in 0.0f64..0.5) {
            let lo = (b - c).abs();
            let hi = b + c;
            let a1 = lo + s * (hi - lo);
            let a2 = (a1 + ds * (hi - lo)).min(hi);
            let t1 = comparison_angle(k, &TriangleSides::new(a1, b, c).unwrap()).unwrap().0;
            let t2 = comparison_angle(k, &TriangleSides::new(a2, b, c).unwrap()).unwrap().0;
            prop_assert!(t2 >= t1 - 1e-12);
        }

        #[test]
        fn cone_distance_triangle_inequality(k in -1.0f64..1.0,
                                             r in proptest::array::uniform3(0.0f64..1.4),
                                             th in proptest::array::uniform3(0.0f64..(2.0 * PI))) {
            // three points on the cone over a circle of length 2π
            let circ = |x: f64, y: f64| { let d = (x - y).abs(); d.min(2.0 * PI - d) };
            let d = |i: usize, j: usize| cone_distance(k, r[i], Angle(circ(th[i], th[j])), r[j]).unwrap();
            let slack = 1e-12;
            prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + slack);
            prop_assert!(d(0, 1) <= d(0, 2) + d(2, 1) + slack);
            prop_assert!(d(1, 2) <= d(1, 0) + d(0, 2) + slack);
            prop_assert!((d(0, 1) - d(1, 0)).abs() <= 1e-15);
        }
    }
}
