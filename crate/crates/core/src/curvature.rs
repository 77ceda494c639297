//! Gauss curvature `K` and normal curvature `κ` of a minimal Lorentz surface
//! along three formula paths: curve jets, Weierstrass triples, and canonical pairs.

use crate::algebra::{det4, inner, wedge_inner, Vec4};
use crate::error::{Error, Result};
use crate::nullcurve::{CanonicalPair, CurveJet, NullCurve, Sign};

/// Relative guard on `⟨α′1, α′2⟩`, scaled by `|α′1|∞·|α′2|∞`.
pub const EPS_E: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvaturePair {
    pub k: f64,
    pub kappa: f64,
    /// `K² − κ²`.
    pub discriminant: f64,
}

impl CurvaturePair {
    pub fn new(k: f64, kappa: f64) -> Self {
        CurvaturePair { k, kappa, discriminant: k * k - kappa * kappa }
    }

    /// `max(|K|, |κ|)`, the scale used for relative comparisons.
    pub fn scale(&self) -> f64 {
        self.k.abs().max(self.kappa.abs())
    }

    /// Largest component difference relative to the scale of `self`.
    pub fn rel_diff(&self, other: &CurvaturePair) -> f64 {
        let d = (self.k - other.k).abs().max((self.kappa - other.kappa).abs());
        let s = self.scale();
        if s == 0.0 {
            d
        } else {
            d / s
        }
    }
}

fn guard(a1: Vec4, a2: Vec4) -> Result<f64> {
    let ip = inner(a1, a2);
    if ip.abs() < EPS_E * a1.max_abs() * a2.max_abs() || ip == 0.0 {
        return Err(Error::Singular { value: ip.abs() });
    }
    Ok(ip)
}

/// `K = −4⟨α′1∧α″1, α′2∧α″2⟩/⟨α′1,α′2⟩³`, `κ = −4 det(α′1, α′2, α″1, α″2)/⟨α′1,α′2⟩³`.
pub fn curvature_from_jets(j1: &CurveJet, j2: &CurveJet) -> Result<CurvaturePair> {
    let ip = guard(j1.alpha_p, j2.alpha_p)?;
    let c = -4.0 / (ip * ip * ip);
    let k = c * wedge_inner(j1.alpha_p, j1.alpha_pp, j2.alpha_p, j2.alpha_pp);
    let kappa = c * det4(j1.alpha_p, j2.alpha_p, j1.alpha_pp, j2.alpha_pp);
    Ok(CurvaturePair::new(k, kappa))
}

/// Rational formulas in `f_i, g_i, h_i` and their derivatives.
pub fn curvature_from_triples(
    c1: &(impl NullCurve + ?Sized),
    c2: &(impl NullCurve + ?Sized),
    t1: f64,
    t2: f64,
) -> Result<CurvaturePair> {
    let p1 = c1.point(t1)?;
    let p2 = c2.point(t2)?;
    guard(p1.alpha_prime(), p2.alpha_prime())?;
    let dg = p1.g - p2.g;
    let dh = p1.h - p2.h;
    let c = 2.0 / (p1.f * p2.f * dg * dh);
    let a = p1.dg * p2.dg / (dg * dg);
    let b = p1.dh * p2.dh / (dh * dh);
    Ok(CurvaturePair::new(c * (a + b), c * (a - b)))
}

/// Closed form in natural parameters with `δ = sign(−ω1ω2(g1 − g2)(h1 − h2))`.
pub fn curvature_canonical(p1: &CanonicalPair, p2: &CanonicalPair, t1: f64, t2: f64) -> Result<CurvaturePair> {
    let a1 = p1.alpha_prime(t1)?;
    let a2 = p2.alpha_prime(t2)?;
    guard(a1, a2)?;
    let (g1, h1) = (p1.g.eval(t1)?, p1.h.eval(t1)?);
    let (g2, h2) = (p2.g.eval(t2)?, p2.h.eval(t2)?);
    let delta = -p1.omega.value() * p2.omega.value() * ((g1 - g2) * (h1 - h2)).signum();
    canonical_values(
        Sign::of(delta),
        [g1, p1.g.eval_derivative(t1)?, h1, p1.h.eval_derivative(t1)?],
        [g2, p2.g.eval_derivative(t2)?, h2, p2.h.eval_derivative(t2)?],
    )
}

/// `−δ·8√|g′1h′1g′2h′2|/|(g1−g2)(h1−h2)| · (g′1g′2/(g1−g2)² ± h′1h′2/(h1−h2)²)`
/// from `[g, g′, h, h′]` at each parameter.
pub fn canonical_values(delta: Sign, v1: [f64; 4], v2: [f64; 4]) -> Result<CurvaturePair> {
    let [g1, dg1, h1, dh1] = v1;
    let [g2, dg2, h2, dh2] = v2;
    let dg = g1 - g2;
    let dh = h1 - h2;
    let gh = (dg * dh).abs();
    let root = (dg1 * dh1 * dg2 * dh2).abs().sqrt();
    let size = |g: f64, h: f64, p: f64| {
        let m = (g * h + 1.0).abs().max((g * h - 1.0).abs()).max((h - g).abs()).max((h + g).abs());
        m / (2.0 * p.abs().sqrt())
    };
    // ⟨α′1, α′2⟩ = 2E and |E| = |GH|/(4 root)
    let ip = gh / (2.0 * root);
    if ip < EPS_E * size(g1, h1, dg1 * dh1) * size(g2, h2, dg2 * dh2) || gh == 0.0 {
        return Err(Error::Singular { value: ip });
    }
    let c = -delta.value() * 8.0 * root / gh;
    let a = dg1 * dg2 / (dg * dg);
    let b = dh1 * dh2 / (dh * dh);
    Ok(CurvaturePair::new(c * (a + b), c * (a - b)))
}

/// `|(K² − κ²) − 16 α″1² α″2² / ⟨α′1, α′2⟩⁴|`.
pub fn discriminant_identity_check(j1: &CurveJet, j2: &CurveJet) -> Result<f64> {
    let c = curvature_from_jets(j1, j2)?;
    let ip = inner(j1.alpha_p, j2.alpha_p);
    let rhs = 16.0 * inner(j1.alpha_pp, j1.alpha_pp) * inner(j2.alpha_pp, j2.alpha_pp) / ip.powi(4);
    Ok((c.discriminant - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullcurve::{enneper_curve, Interval, WeierstrassTriple};

    fn m1() -> (CanonicalPair, CanonicalPair) {
        (enneper_curve(2.0, 1.0, Sign::Plus).unwrap(), enneper_curve(1.0, 2.0, Sign::Plus).unwrap())
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn m1_spot_value_all_paths() {
        let (p1, p2) = m1();
        let c = curvature_canonical(&p1, &p2, 1.0, 0.0).unwrap();
        assert!(close(c.k, 20.0, 1e-14) && close(c.kappa, -12.0, 1e-14));
        let j = curvature_from_jets(&p1.jet(1.0).unwrap(), &p2.jet(0.0).unwrap()).unwrap();
        assert!(close(j.k, 20.0, 1e-13) && close(j.kappa, -12.0, 1e-13));
        let t = curvature_from_triples(&p1, &p2, 1.0, 0.0).unwrap();
        assert!(close(t.k, 20.0, 1e-13) && close(t.kappa, -12.0, 1e-13));
        assert!(close(c.discriminant, 256.0, 1e-13));
    }

    #[test]
    fn m1_grid_matches_isothermal_display() {
        let (p1, p2) = m1();
        for i in 0..20 {
            for j in 0..20 {
                let (u, v) = (0.35 + 0.3 * i as f64 / 19.0, 0.35 + 0.3 * j as f64 / 19.0);
                let d = (u * u - 9.0 * v * v).abs().powi(3);
                let k = (64.0 * u * u + 576.0 * v * v) / d;
                let kappa = -384.0 * u * v / d;
                let c = curvature_canonical(&p1, &p2, u + v, u - v).unwrap();
                let jet = curvature_from_jets(&p1.jet(u + v).unwrap(), &p2.jet(u - v).unwrap()).unwrap();
                let s = k.abs().max(kappa.abs());
                assert!((c.k - k).abs() <= 1e-12 * s && (c.kappa - kappa).abs() <= 1e-12 * s);
                assert!(jet.rel_diff(&c) <= 1e-9);
            }
        }
    }

    #[test]
    fn m3_spot_value() {
        let p1 = enneper_curve(2.0, 1.0, Sign::Plus).unwrap();
        let p2 = enneper_curve(1.0, -2.0, Sign::Plus).unwrap();
        // ω2 so that E < 0 at (1, 1): E ∝ δ = sign(−ω1ω2 G H) with G = 1, H = 3
        let c = curvature_canonical(&p1, &p2, 1.0, 1.0).unwrap();
        assert!(close(c.k, 256.0 / 27.0, 1e-13) && close(c.kappa, 320.0 / 27.0, 1e-13));
        assert!(c.discriminant < 0.0);
    }

    #[test]
    fn parallel_toy_is_flat() {
        let j1 = CurveJet { t: 0.0, alpha_p: Vec4::new(1.0, -1.0, 0.0, 0.0), alpha_pp: Vec4::ZERO };
        let j2 = CurveJet { t: 0.0, alpha_p: Vec4::new(1.0, 1.0, 0.0, 0.0), alpha_pp: Vec4::ZERO };
        let c = curvature_from_jets(&j1, &j2).unwrap();
        assert_eq!((c.k, c.kappa), (0.0, 0.0));
        assert_eq!(discriminant_identity_check(&j1, &j2).unwrap(), 0.0);
    }

    #[test]
    fn singular_is_withheld() {
        let (p1, _) = m1();
        let p2 = enneper_curve(2.0, 1.0, Sign::Plus).unwrap();
        assert!(matches!(curvature_canonical(&p1, &p2, 0.5, 0.5), Err(Error::Singular { .. })));
        assert!(matches!(curvature_from_triples(&p1, &p2, 0.5, 0.5), Err(Error::Singular { .. })));
    }

    #[test]
    fn triple_symmetries() {
        let d = Interval::new(-2.0, 2.0).unwrap();
        let a = WeierstrassTriple::parse("1 + t^2", "t", "exp(t)", d).unwrap();
        let b = WeierstrassTriple::parse("2", "t^3 + 3*t", "-t", d).unwrap();
        let (t1, t2) = (0.3, -0.4);
        let base = curvature_from_triples(&a, &b, t1, t2).unwrap();
        let swapped = curvature_from_triples(&b, &a, t2, t1).unwrap();
        assert!(base.rel_diff(&swapped) < 1e-14);
        let na = WeierstrassTriple::parse("1 + t^2", "t", "-exp(t)", d).unwrap();
        // h → −h flips E unless one f flips too; the invariance holds at fixed sign of E
        let nb = WeierstrassTriple::parse("-2", "t^3 + 3*t", "t", d).unwrap();
        assert!(base.rel_diff(&curvature_from_triples(&na, &nb, t1, t2).unwrap()) < 1e-14);
        let sa = WeierstrassTriple::parse("3*(1 + t^2)", "t", "exp(t)", d).unwrap();
        let sb = WeierstrassTriple::parse("6", "t^3 + 3*t", "-t", d).unwrap();
        let scaled = curvature_from_triples(&sa, &sb, t1, t2).unwrap();
        // both f scaled by 3: the product f1 f2 scales by 9
        assert!(close(scaled.k * 9.0, base.k, 1e-14) && close(scaled.kappa * 9.0, base.kappa, 1e-14));
        let jets = curvature_from_jets(&a.jet(t1).unwrap(), &b.jet(t2).unwrap()).unwrap();
        assert!(base.rel_diff(&jets) < 1e-10);
        let r = discriminant_identity_check(&a.jet(t1).unwrap(), &b.jet(t2).unwrap()).unwrap();
        assert!(r <= 1e-9 * (1.0 + base.discriminant.abs()));
    }
}
