//! Proper motions of the neutral 4-space, the spinor map
//! `SL(2,R) × SL(2,R) → SO(2,2)` and the linear-fractional action on
//! Weierstrass data.

use std::ops::Mul;

use crate::algebra::{Vec4, METRIC};
use crate::error::{Error, Result};
use crate::funcs::Fn1;
use crate::nullcurve::{CanonicalPair, Interval, Sign, WeierstrassTriple, DEFAULT_AUDIT_N};

pub const SL2_TOL: f64 = 1e-10;

/// Row-major 2×2 real matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Checked constructor for `SL(2,R)`.
    pub fn sl2(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Mat2::new(a, b, c, d);
        m.check_sl2()?;
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn check_sl2(&self) -> Result<()> {
        let det = self.det();
        if (det - 1.0).abs() > SL2_TOL || !det.is_finite() {
            return Err(Error::NotSl2 { det });
        }
        Ok(())
    }

    /// Inverse; for unimodular matrices this is the adjugate.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det == 0.0 {
            return Err(Error::DegenerateDet);
        }
        Ok(Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det))
    }

    pub fn scale(&self, k: f64) -> Mat2 {
        Mat2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// `S(x) = [[x4 − x3, x1 + x2], [x1 − x2, x4 + x3]]`, with `det S = ⟨x, x⟩`.
pub fn spinor_matrix(x: Vec4) -> Mat2 {
    let [x1, x2, x3, x4] = x.0;
    Mat2::new(x4 - x3, x1 + x2, x1 - x2, x4 + x3)
}

/// Inverse of [`spinor_matrix`].
pub fn vector_from_spinor(s: Mat2) -> Vec4 {
    Vec4::new(0.5 * (s.b + s.c), 0.5 * (s.b - s.c), 0.5 * (s.d - s.a), 0.5 * (s.a + s.d))
}

/// Linear-fractional map `x ↦ (a x + b)/(c x + d)` normalized to `ad − bc = ±1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() {
            return Err(Error::Parameter("non-finite Mobius coefficients".into()));
        }
        if det == 0.0 {
            return Err(Error::DegenerateDet);
        }
        let k = 1.0 / det.abs().sqrt();
        Ok(Mobius { a: a * k, b: b * k, c: c * k, d: d * k })
    }

    pub fn translation(shift: f64) -> Self {
        Mobius { a: 1.0, b: shift, c: 0.0, d: 1.0 }
    }

    /// `x ↦ −x`, determinant `−1`.
    pub fn negation() -> Self {
        Mobius { a: -1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// The map read off the first spinor matrix, `B1 = [[a1, b1], [c1, d1]]`.
    pub fn from_left(b1: &Mat2) -> Result<Self> {
        Mobius::new(b1.a, b1.b, b1.c, b1.d)
    }

    /// The map read off the second spinor matrix, `B2 = [[a2, −b2], [−c2, d2]]`.
    pub fn from_right(b2: &Mat2) -> Result<Self> {
        Mobius::new(b2.a, -b2.b, -b2.c, b2.d)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn det_sign(&self) -> Sign {
        Sign::of(self.det())
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        let den = self.c * x + self.d;
        if den == 0.0 {
            return Err(Error::Pole { t: x });
        }
        Ok((self.a * x + self.b) / den)
    }

    /// Denominator `c x + d`.
    pub fn denominator(&self, x: f64) -> f64 {
        self.c * x + self.d
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|x| x.is_finite())
    }
}

/// Affine motion `x ↦ A x + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Motion4 {
    pub a: [[f64; 4]; 4],
    pub b: Vec4,
}

impl Motion4 {
    pub const IDENTITY: Motion4 = Motion4 {
        a: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        b: Vec4::ZERO,
    };

    /// Checked constructor: `AᵀGA = G` and `det A = 1` within `tol·max(1, |A|²)`.
    pub fn new(a: [[f64; 4]; 4], b: Vec4, tol: f64) -> Result<Self> {
        let m = Motion4 { a, b };
        let scale = m.max_abs().powi(2).max(1.0);
        let iso = m.isometry_defect();
        if iso > tol * scale {
            return Err(Error::Parameter(format!("not an isometry: max|AᵀGA − G| = {iso:e}")));
        }
        let det = m.det();
        if (det - 1.0).abs() > tol * scale * scale {
            return Err(Error::Parameter(format!("not proper: det A = {det}")));
        }
        Ok(m)
    }

    pub fn translation(b: Vec4) -> Self {
        Motion4 { b, ..Motion4::IDENTITY }
    }

    /// `(x1, x2, x3, x4) ↦ (x1, x2, −x3, −x4)`: proper but not orthochronous.
    pub fn flip34() -> Self {
        let mut a = Motion4::IDENTITY.a;
        a[2][2] = -1.0;
        a[3][3] = -1.0;
        Motion4 { a, b: Vec4::ZERO }
    }

    /// Rotation by `theta` in the spacelike `(x2, x4)` plane.
    pub fn rotation24(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let mut a = Motion4::IDENTITY.a;
        a[1][1] = c;
        a[1][3] = -s;
        a[3][1] = s;
        a[3][3] = c;
        Motion4 { a, b: Vec4::ZERO }
    }

    /// Linear part applied to a vector.
    pub fn linear(&self, x: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| (0..4).map(|k| self.a[i][k] * x.0[k]).sum()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Motion4) -> Motion4 {
        let a = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|k| self.a[i][k] * other.a[k][j]).sum())
        });
        Motion4 { a, b: self.linear(other.b) + self.b }
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// `max |AᵀGA − G|`.
    pub fn isometry_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let v: f64 = (0..4).map(|k| self.a[k][i] * METRIC[k] * self.a[k][j]).sum();
                let g = if i == j { METRIC[i] } else { 0.0 };
                worst = worst.max((v - g).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> f64 {
        let col = |j: usize| Vec4(std::array::from_fn(|i| self.a[i][j]));
        crate::algebra::det4(col(0), col(1), col(2), col(3))
    }
}

/// Linear motion induced by `S ↦ B1 S B2⁻¹`.
pub fn motion_from_spinors(b1: &Mat2, b2: &Mat2) -> Result<Motion4> {
    b1.check_sl2()?;
    b2.check_sl2()?;
    let b2_inv = b2.inverse()?;
    let mut a = [[0.0; 4]; 4];
    for j in 0..4 {
        let col = vector_from_spinor(*b1 * spinor_matrix(Vec4::basis(j)) * b2_inv);
        for i in 0..4 {
            a[i][j] = col.0[i];
        }
    }
    Ok(Motion4 { a, b: Vec4::ZERO })
}

pub fn apply_motion(m: &Motion4, x: Vec4) -> Vec4 {
    m.linear(x) + m.b
}

/// A rotation moving a null tangent off the `ξ1 = ξ2` chart boundary, if one is needed.
pub fn recovery_chart_rotation(xi: Vec4) -> Option<Motion4> {
    let norm = xi.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    let ok = |v: Vec4| (v.0[0] - v.0[1]).abs() > 1e-6 * norm;
    if ok(xi) {
        return None;
    }
    [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
        .iter()
        .map(|&th| Motion4::rotation24(th))
        .find(|m| ok(m.linear(xi)))
}

fn check_poles(g: &Fn1, m: &Mobius, domain: &Interval, audit_n: usize) -> Result<()> {
    if m.c == 0.0 {
        return Ok(());
    }
    let mut sign = None;
    for t in domain.grid(audit_n) {
        let den = m.denominator(g.eval(t)?);
        if den.abs() <= 1e-12 * (m.c.abs() + m.d.abs()) || sign.is_some_and(|s| s != Sign::of(den)) {
            return Err(Error::Pole { t });
        }
        sign = Some(Sign::of(den));
    }
    Ok(())
}

/// `f̂ = f (c1 g + d1)(c2 h + d2)`, `ĝ = (a1 g + b1)/(c1 g + d1)`, `ĥ = (a2 h + b2)/(c2 h + d2)`.
pub fn transform_triple(tr: &WeierstrassTriple, m1: &Mobius, m2: &Mobius) -> Result<WeierstrassTriple> {
    check_poles(&tr.g, m1, &tr.domain, DEFAULT_AUDIT_N)?;
    check_poles(&tr.h, m2, &tr.domain, DEFAULT_AUDIT_N)?;
    let den1 = tr.g.linear_fractional(m1.c, m1.d, 0.0, 1.0);
    let den2 = tr.h.linear_fractional(m2.c, m2.d, 0.0, 1.0);
    let f = tr.f.times(&den1).times(&den2);
    let g = tr.g.linear_fractional(m1.a, m1.b, m1.c, m1.d);
    let h = tr.h.linear_fractional(m2.a, m2.b, m2.c, m2.d);
    Ok(WeierstrassTriple::new(f, g, h, tr.domain))
}

/// The same action on a natural-parameter pair; the parameter stays natural
/// because both maps have `|det| = 1`.
pub fn transform_pair(p: &CanonicalPair, m1: &Mobius, m2: &Mobius) -> Result<CanonicalPair> {
    check_poles(&p.g, m1, &p.domain, DEFAULT_AUDIT_N)?;
    check_poles(&p.h, m2, &p.domain, DEFAULT_AUDIT_N)?;
    let mid = 0.5 * (p.domain.min + p.domain.max);
    let s = m1.denominator(p.g.eval(mid)?) * m2.denominator(p.h.eval(mid)?);
    let omega = if s < 0.0 { p.omega.flip() } else { p.omega };
    let g = p.g.linear_fractional(m1.a, m1.b, m1.c, m1.d);
    let h = p.h.linear_fractional(m2.a, m2.b, m2.c, m2.d);
    Ok(CanonicalPair::new(g, h, omega, p.domain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::inner;
    use crate::nullcurve::{alpha_prime, NullCurve};
    use proptest::prelude::*;

    fn sl2_from(a: f64, b: f64, c: f64) -> Mat2 {
        // d chosen so that ad − bc = 1
        Mat2::new(a, b, c, (1.0 + b * c) / a)
    }

    fn sl2() -> impl Strategy<Value = Mat2> {
        (prop_oneof![0.3..3.0f64, -3.0..-0.3f64], -2.0..2.0f64, -2.0..2.0f64)
            .prop_map(|(a, b, c)| sl2_from(a, b, c))
    }

    fn vec4() -> impl Strategy<Value = Vec4> {
        prop::array::uniform4(-5.0..5.0f64).prop_map(Vec4)
    }

    #[test]
    fn spinor_examples() {
        assert_eq!(spinor_matrix(Vec4::basis(3)), Mat2::IDENTITY);
        let n = spinor_matrix(Vec4::new(1.0, 1.0, 0.0, 0.0));
        assert_eq!(n, Mat2::new(0.0, 2.0, 0.0, 0.0));
        assert_eq!(n.det(), 0.0);
        let e1 = spinor_matrix(Vec4::basis(0));
        assert_eq!(e1, Mat2::new(0.0, 1.0, 1.0, 0.0));
        assert_eq!(e1.det(), -1.0);
    }

    #[test]
    fn kernel_maps_to_identity() {
        let id = motion_from_spinors(&Mat2::IDENTITY, &Mat2::IDENTITY).unwrap();
        assert_eq!(id.a, Motion4::IDENTITY.a);
        let m = Mat2::IDENTITY.scale(-1.0);
        assert_eq!(motion_from_spinors(&m, &m).unwrap().a, Motion4::IDENTITY.a);
    }

    #[test]
    fn shear_is_proper_isometry() {
        let a = motion_from_spinors(&Mat2::new(1.0, 1.0, 0.0, 1.0), &Mat2::IDENTITY).unwrap();
        assert!(a.isometry_defect() <= 1e-12);
        assert!((a.det() - 1.0).abs() <= 1e-12);
        assert!(Motion4::new(a.a, Vec4::ZERO, 1e-12).is_ok());
    }

    #[test]
    fn rejects_non_sl2() {
        let r = motion_from_spinors(&Mat2::new(2.0, 0.0, 0.0, 1.0), &Mat2::IDENTITY);
        assert!(matches!(r, Err(Error::NotSl2 { .. })));
    }

    #[test]
    fn transform_examples() {
        let d = Interval::new(0.0, 1.0).unwrap();
        let tr = WeierstrassTriple::parse("1 + t", "t", "t^2", d).unwrap();
        let same = transform_triple(&tr, &Mobius::IDENTITY, &Mobius::IDENTITY).unwrap();
        let shifted = transform_triple(&tr, &Mobius::translation(1.0), &Mobius::IDENTITY).unwrap();
        for t in [0.0, 0.4, 1.0] {
            let (a, b) = (tr.point(t).unwrap(), same.point(t).unwrap());
            assert_eq!((a.f, a.g, a.h), (b.f, b.g, b.h));
            let s = shifted.point(t).unwrap();
            assert_eq!((s.f, s.g, s.h), (a.f, a.g + 1.0, a.h));
        }
        let inv = Mobius::new(0.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(transform_triple(&tr, &inv, &Mobius::IDENTITY).unwrap_err(), Error::Pole { t: 0.0 });
    }

    #[test]
    fn negation_twice_is_identity() {
        let d = Interval::new(-1.0, 1.0).unwrap();
        let tr = WeierstrassTriple::parse("2", "t + t^3", "exp(t)", d).unwrap();
        let n = Mobius::negation();
        let once = transform_triple(&tr, &n, &n).unwrap();
        let twice = transform_triple(&once, &n, &n).unwrap();
        let flip = Motion4::flip34();
        for t in [-0.7, 0.0, 0.9] {
            let (a, b) = (tr.point(t).unwrap(), twice.point(t).unwrap());
            assert_eq!((a.f, a.g, a.h), (b.f, b.g, b.h));
            let o = once.point(t).unwrap();
            assert_eq!((o.f, o.g, o.h), (a.f, -a.g, -a.h));
            let lhs = alpha_prime(&once, t).unwrap();
            let rhs = flip.linear(alpha_prime(&tr, t).unwrap());
            assert!((lhs - rhs).max_abs() < 1e-14);
        }
        let m = Mobius::new(-1.0, 0.0, 0.0, -1.0).unwrap();
        let same = transform_triple(&tr, &m, &m).unwrap();
        let (a, b) = (tr.point(0.3).unwrap(), same.point(0.3).unwrap());
        assert_eq!((a.f, a.g, a.h), (b.f, b.g, b.h));
    }

    #[test]
    fn chart_rotation_escapes() {
        let xi = Vec4::new(1.0, 1.0, 0.0, 0.0);
        let r = recovery_chart_rotation(xi).unwrap();
        let moved = r.linear(xi);
        assert!(crate::nullcurve::triple_from_jet(moved).is_ok());
        assert!(inner(moved, moved).abs() < 1e-15);
        assert!(recovery_chart_rotation(Vec4::new(1.0, -1.0, 0.0, 0.0)).is_none());
    }

    #[test]
    fn mobius_normalizes() {
        let m = Mobius::new(2.0, 0.0, 0.0, 2.0).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-15);
        assert_eq!(Mobius::new(1.0, 2.0, 2.0, 4.0), Err(Error::DegenerateDet));
        assert!((Mobius::negation().det() + 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn spinor_det_is_square(x in vec4()) {
            let s = spinor_matrix(x);
            let q = inner(x, x);
            let scale = x.0.iter().map(|v| v * v).sum::<f64>();
            prop_assert!((s.det() - q).abs() <= 4.0 * f64::EPSILON * (1.0 + scale));
            prop_assert!((vector_from_spinor(s) - x).max_abs() <= 4.0 * f64::EPSILON * x.max_abs());
        }

        #[test]
        fn spinor_motion_is_proper_isometry(b1 in sl2(), b2 in sl2()) {
            let m = motion_from_spinors(&b1, &b2).unwrap();
            let scale = m.max_abs().powi(2).max(1.0);
            prop_assert!(m.isometry_defect() <= 1e-12 * scale);
            prop_assert!((m.det() - 1.0).abs() <= 1e-12 * scale * scale);
        }

        #[test]
        fn motions_preserve_inner_and_compose(b1 in sl2(), b2 in sl2(), b3 in sl2(), x in vec4(), y in vec4(), t in vec4()) {
            let m1 = Motion4 { b: t, ..motion_from_spinors(&b1, &b2).unwrap() };
            let m2 = motion_from_spinors(&b3, &b1).unwrap();
            let s = m1.max_abs().powi(2).max(1.0) * 100.0;
            prop_assert!((inner(m1.linear(x), m1.linear(y)) - inner(x, y)).abs() <= 1e-11 * s);
            let lhs = apply_motion(&m2, apply_motion(&m1, x));
            let rhs = apply_motion(&m2.compose(&m1), x);
            prop_assert!((lhs - rhs).max_abs() <= 1e-11 * s * m2.max_abs().max(1.0));
            prop_assert_eq!(apply_motion(&Motion4::IDENTITY, x), x);
        }

        #[test]
        fn mobius_matches_spinor_motion(b1 in sl2(), b2 in sl2(), t in -0.9..0.9f64) {
            let d = Interval::new(-1.0, 1.0).unwrap();
            let tr = WeierstrassTriple::parse("1 + t^2/3", "sin(t)/4", "t/5 + t^3/7", d).unwrap();
            let m1 = Mobius::from_left(&b1).unwrap();
            let m2 = Mobius::from_right(&b2).unwrap();
            // skip draws with a pole in the window
            if let Ok(moved) = transform_triple(&tr, &m1, &m2) {
                let a = motion_from_spinors(&b1, &b2).unwrap();
                let lhs = alpha_prime(&moved, t).unwrap();
                let rhs = a.linear(alpha_prime(&tr, t).unwrap());
                prop_assert!((lhs - rhs).max_abs() <= 1e-9 * rhs.max_abs().max(1e-300), "{:?} vs {:?}", lhs, rhs);
            }
        }
    }
}
