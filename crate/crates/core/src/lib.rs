//! Minimal Lorentz surfaces in the neutral 4-space `R⁴₂` from Weierstrass data.
//!
//! Null curves are given by Weierstrass triples `(f, g, h)` or by natural
//! pairs `(g, h, ω)`. Two of them generate a minimal Lorentz surface whose
//! Gauss curvature `K` and normal curvature `κ` are computed along three
//! independent formula paths and checked against the natural equations by
//! finite differences.

pub mod algebra;
pub mod curvature;
pub mod equivalence;
pub mod error;
pub mod export;
pub mod funcs;
pub mod motions;
pub mod nullcurve;
pub mod pdeverify;
pub mod quad;
pub mod surface;

pub use algebra::{DVec4, Double, Vec4};
pub use curvature::CurvaturePair;
pub use equivalence::Quadruple;
pub use error::{Error, Result};
pub use funcs::Fn1;
pub use motions::{Mat2, Mobius, Motion4};
pub use nullcurve::{CanonicalPair, CurveJet, Generator, Interval, NullCurve, Sign, WeierstrassTriple};
pub use pdeverify::{ResidualReport, ScalarGrid};
pub use quad::CancelToken;
pub use surface::{MinimalSurface, Region, SurfaceSample, SurfaceType};

/// Generators of the example surfaces with `ω` chosen so that `E < 0`.
pub mod examples {
    use crate::nullcurve::{enneper_curve, CanonicalPair, Sign};
    use crate::{MinimalSurface, Result};

    /// `(α_{2,1}, α_{1,2})`, first type.
    pub fn m1() -> Result<MinimalSurface> {
        pair(2.0, 1.0, 1.0, 2.0, (0.5, 0.5))
    }

    /// `(α_{2,−1}, α_{1,−2})`, second type.
    pub fn m2() -> Result<MinimalSurface> {
        pair(2.0, -1.0, 1.0, -2.0, (0.5, 0.5))
    }

    /// `(α_{2,1}, α_{1,−2})`, third type.
    pub fn m3() -> Result<MinimalSurface> {
        pair(2.0, 1.0, 1.0, -2.0, (1.0, 0.0))
    }

    /// `(α_{k1,l1}, α_{k2,l2})` with `ω1 = 1` and `ω2` making `E < 0` at `(u, v)`
    /// (or `ω2 = 1` when `E` vanishes there).
    pub fn pair(k1: f64, l1: f64, k2: f64, l2: f64, at: (f64, f64)) -> Result<MinimalSurface> {
        let p1 = enneper_curve(k1, l1, Sign::Plus)?;
        let p2 = enneper_curve(k2, l2, Sign::Plus)?;
        let omega2 = omega_for_negative_e(&p1, &p2, at);
        MinimalSurface::new(p1, p2.with_omega(omega2))
    }

    fn omega_for_negative_e(p1: &CanonicalPair, p2: &CanonicalPair, (u, v): (f64, f64)) -> Sign {
        let (t1, t2) = (u + v, u - v);
        let gh = |a: &CanonicalPair, b: &CanonicalPair| -> Option<f64> {
            Some((a.g.eval(t1).ok()? - b.g.eval(t2).ok()?) * (a.h.eval(t1).ok()? - b.h.eval(t2).ok()?))
        };
        // E has the sign of −ω1ω2(g1 − g2)(h1 − h2)
        match gh(p1, p2) {
            Some(x) if x < 0.0 => Sign::Minus,
            _ => Sign::Plus,
        }
    }
}
