//! Minimal Lorentz surfaces `x(u, v) = (α1(u + v) + α2(u − v))/2` built from
//! two null-curve generators.

use std::fmt;

use rayon::prelude::*;

use crate::algebra::{inner, DVec4, Vec4};
use crate::curvature::{self, CurvaturePair, EPS_E};
use crate::error::{Error, Result};
use crate::nullcurve::{
    integrate_curve_with, is_nondegenerate, Generator, Interval, NullCurve, Sign, DEFAULT_AUDIT_N,
};
use crate::quad::CancelToken;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceType {
    First,
    Second,
    Third,
    NotGeneral,
}

impl SurfaceType {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceType::First => "first",
            SurfaceType::Second => "second",
            SurfaceType::Third => "third",
            SurfaceType::NotGeneral => "not_general",
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rectangle in isothermal coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Region {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Result<Self> {
        let ok = [u0, u1, v0, v1].iter().all(|x| x.is_finite()) && u0 <= u1 && v0 <= v1;
        if !ok {
            return Err(Error::Parameter(format!("invalid region {u0},{u1},{v0},{v1}")));
        }
        Ok(Region { u: (u0, u1), v: (v0, v1) })
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u.0 + self.u.1), 0.5 * (self.v.0 + self.v.1))
    }

    /// Ranges of `t1 = u + v` and `t2 = u − v` covered by the rectangle.
    pub fn isotropic_ranges(&self) -> ((f64, f64), (f64, f64)) {
        ((self.u.0 + self.v.0, self.u.1 + self.v.1), (self.u.0 - self.v.1, self.u.1 - self.v.0))
    }

    /// `n` equally spaced values of `range` (a single midpoint when `n = 1`).
    pub fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![0.5 * (range.0 + range.1)],
            _ => {
                let step = (range.1 - range.0) / (n - 1) as f64;
                (0..n).map(|i| if i + 1 == n { range.1 } else { range.0 + step * i as f64 }).collect()
            }
        }
    }
}

pub fn to_isotropic(u: f64, v: f64) -> (f64, f64) {
    (u + v, u - v)
}

pub fn to_isothermal(t1: f64, t2: f64) -> (f64, f64) {
    (0.5 * (t1 + t2), 0.5 * (t1 - t2))
}

#[derive(Clone, Debug)]
pub struct MinimalSurface {
    gen1: Generator,
    gen2: Generator,
    base1: f64,
    base2: f64,
    kind: SurfaceType,
    renumbered: bool,
}

fn base_point(d: &Interval) -> f64 {
    if d.contains(0.0) {
        0.0
    } else {
        d.min
    }
}

impl MinimalSurface {
    /// Classifies the pair; third-type surfaces are renumbered so that `α″1² > 0 > α″2²`.
    pub fn new(gen1: impl Into<Generator>, gen2: impl Into<Generator>) -> Result<Self> {
        let (mut gen1, mut gen2) = (gen1.into(), gen2.into());
        let character = |g: &Generator| -> Result<Sign> {
            let a = is_nondegenerate(g, DEFAULT_AUDIT_N)?;
            a.sign.filter(|_| a.ok).ok_or_else(|| {
                Error::NotGeneralType(format!("alpha''^2 vanishes near t={}", a.first_failure.unwrap_or(f64::NAN)))
            })
        };
        let (s1, s2) = (character(&gen1)?, character(&gen2)?);
        let (kind, renumbered) = match (s1, s2) {
            (Sign::Plus, Sign::Plus) => (SurfaceType::First, false),
            (Sign::Minus, Sign::Minus) => (SurfaceType::Second, false),
            (Sign::Plus, Sign::Minus) => (SurfaceType::Third, false),
            (Sign::Minus, Sign::Plus) => (SurfaceType::Third, true),
        };
        if renumbered {
            std::mem::swap(&mut gen1, &mut gen2);
        }
        let (base1, base2) = (base_point(&gen1.domain()), base_point(&gen2.domain()));
        Ok(MinimalSurface { gen1, gen2, base1, base2, kind, renumbered })
    }

    pub fn gen1(&self) -> &Generator {
        &self.gen1
    }

    pub fn gen2(&self) -> &Generator {
        &self.gen2
    }

    pub fn classify(&self) -> SurfaceType {
        self.kind
    }

    /// True when the generators were swapped to put the spacelike one first.
    pub fn renumbered(&self) -> bool {
        self.renumbered
    }

    pub fn is_canonical(&self) -> bool {
        self.gen1.as_canonical().is_some() && self.gen2.as_canonical().is_some()
    }

    pub fn base_points(&self) -> (f64, f64) {
        (self.base1, self.base2)
    }

    fn check(&self, t1: f64, t2: f64) -> Result<()> {
        for (t, d) in [(t1, self.gen1.domain()), (t2, self.gen2.domain())] {
            if !d.contains(t) {
                return Err(Error::domain(t, format!("outside generator domain [{}, {}]", d.min, d.max)));
            }
        }
        Ok(())
    }

    /// Checks that the rectangle maps into both generator domains.
    pub fn check_region(&self, r: &Region) -> Result<()> {
        let ((a1, b1), (a2, b2)) = r.isotropic_ranges();
        self.check(a1, a2)?;
        self.check(b1, b2)
    }

    pub fn position(&self, u: f64, v: f64) -> Result<Vec4> {
        self.position_with(u, v, None)
    }

    pub fn position_with(&self, u: f64, v: f64, cancel: Option<&CancelToken>) -> Result<Vec4> {
        let (t1, t2) = to_isotropic(u, v);
        self.check(t1, t2)?;
        let a1 = integrate_curve_with(&self.gen1, self.base1, t1, cancel)?;
        let a2 = integrate_curve_with(&self.gen2, self.base2, t2, cancel)?;
        Ok((a1 + a2).scale(0.5))
    }

    /// `x_{t1} = α′1(t1)/2`, `x_{t2} = α′2(t2)/2`.
    pub fn tangents(&self, u: f64, v: f64) -> Result<(Vec4, Vec4)> {
        let (t1, t2) = to_isotropic(u, v);
        Ok((self.gen1.alpha_prime(t1)?.scale(0.5), self.gen2.alpha_prime(t2)?.scale(0.5)))
    }

    fn e_guard(&self, t1: f64, t2: f64) -> Result<(f64, f64)> {
        let (a1, a2) = (self.gen1.alpha_prime(t1)?, self.gen2.alpha_prime(t2)?);
        Ok((0.5 * inner(a1, a2), 0.5 * EPS_E * a1.max_abs() * a2.max_abs()))
    }

    /// `E = −f1 f2 (g1 − g2)(h1 − h2)`, in canonical form when both generators are natural.
    pub fn induced_e(&self, u: f64, v: f64) -> Result<f64> {
        let (t1, t2) = to_isotropic(u, v);
        self.check(t1, t2)?;
        let (_, eps) = self.e_guard(t1, t2)?;
        let e = match (self.gen1.as_canonical(), self.gen2.as_canonical()) {
            (Some(p1), Some(p2)) => {
                let gh = (p1.g.eval(t1)? - p2.g.eval(t2)?) * (p1.h.eval(t1)? - p2.h.eval(t2)?);
                let delta = (-p1.omega.value() * p2.omega.value() * gh).signum();
                let root = (p1.gh_prime(t1)? * p2.gh_prime(t2)?).abs().sqrt();
                delta * gh.abs() / (4.0 * root)
            }
            _ => {
                let (p1, p2) = (self.gen1.point(t1)?, self.gen2.point(t2)?);
                -p1.f * p2.f * (p1.g - p2.g) * (p1.h - p2.h)
            }
        };
        if e.abs() < eps || e == 0.0 {
            return Err(Error::Degenerate { t: t1, value: e });
        }
        Ok(e)
    }

    /// `Φ = α′1 q̄ + α′2 q`.
    pub fn gauss_map(&self, u: f64, v: f64) -> Result<DVec4> {
        let (t1, t2) = to_isotropic(u, v);
        self.check(t1, t2)?;
        Ok(DVec4::from_null(self.gen1.alpha_prime(t1)?, self.gen2.alpha_prime(t2)?))
    }

    /// `(K, κ)` by the canonical formula when both generators are natural, else by triples.
    pub fn curvature(&self, u: f64, v: f64) -> Result<CurvaturePair> {
        let (t1, t2) = to_isotropic(u, v);
        self.check(t1, t2)?;
        match (self.gen1.as_canonical(), self.gen2.as_canonical()) {
            (Some(p1), Some(p2)) => curvature::curvature_canonical(p1, p2, t1, t2),
            _ => curvature::curvature_from_triples(&self.gen1, &self.gen2, t1, t2),
        }
    }

    /// Fails when `E` vanishes or changes sign on an `n × n` audit grid of the rectangle.
    pub fn audit_region(&self, r: &Region, n: usize) -> Result<Sign> {
        self.check_region(r)?;
        let mut sign = None;
        for &u in &Region::axis(r.u, n) {
            for &v in &Region::axis(r.v, n) {
                let e = self.induced_e(u, v).map_err(|_| {
                    Error::Audit(format!("E vanishes at (u, v) = ({u}, {v}): g1 = g2 or h1 = h2"))
                })?;
                if sign.is_some_and(|s| s != Sign::of(e)) {
                    return Err(Error::Audit(format!("E changes sign near (u, v) = ({u}, {v})")));
                }
                sign = Some(Sign::of(e));
            }
        }
        sign.ok_or(Error::EmptyGrid)
    }

    /// Row-major samples (`u` outer, `v` inner); singular points are flagged, not dropped.
    pub fn sample_grid(&self, r: &Region, nu: usize, nv: usize, with_positions: bool) -> Result<Vec<SurfaceSample>> {
        self.sample_grid_with(r, nu, nv, with_positions, None)
    }

    pub fn sample_grid_with(
        &self,
        r: &Region,
        nu: usize,
        nv: usize,
        with_positions: bool,
        cancel: Option<&CancelToken>,
    ) -> Result<Vec<SurfaceSample>> {
        if nu == 0 || nv == 0 {
            return Err(Error::Parameter("grid needs at least one point per axis".into()));
        }
        self.check_region(r)?;
        let us = Region::axis(r.u, nu);
        let vs = Region::axis(r.v, nv);
        let samples: Vec<SurfaceSample> = (0..nu * nv)
            .into_par_iter()
            .map(|idx| {
                if cancel.is_some_and(CancelToken::is_cancelled) {
                    return Err(Error::Cancelled);
                }
                self.sample(us[idx / nv], vs[idx % nv], with_positions, cancel)
            })
            .collect::<Result<_>>()?;
        if samples.iter().all(|s| s.singular) {
            return Err(Error::EmptyGrid);
        }
        Ok(samples)
    }

    fn sample(&self, u: f64, v: f64, with_position: bool, cancel: Option<&CancelToken>) -> Result<SurfaceSample> {
        let (t1, t2) = to_isotropic(u, v);
        let x = if with_position { self.position_with(u, v, cancel)? } else { Vec4([f64::NAN; 4]) };
        let (e, curv) = match self.induced_e(u, v) {
            Ok(e) => (e, self.curvature(u, v).ok()),
            Err(Error::Degenerate { value, .. }) => (value, None),
            Err(err) => return Err(err),
        };
        Ok(SurfaceSample {
            u,
            v,
            t1,
            t2,
            x,
            e,
            k: curv.map_or(f64::NAN, |c| c.k),
            kappa: curv.map_or(f64::NAN, |c| c.kappa),
            surface_type: self.kind,
            singular: curv.is_none(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceSample {
    pub u: f64,
    pub v: f64,
    pub t1: f64,
    pub t2: f64,
    /// NaN when positions were not requested.
    pub x: Vec4,
    pub e: f64,
    /// NaN at singular points.
    pub k: f64,
    pub kappa: f64,
    pub surface_type: SurfaceType,
    pub singular: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullcurve::{enneper_curve, CanonicalPair, WeierstrassTriple};

    fn pair(k: f64, l: f64, w: Sign) -> CanonicalPair {
        enneper_curve(k, l, w).unwrap()
    }

    fn m1() -> MinimalSurface {
        MinimalSurface::new(pair(2.0, 1.0, Sign::Plus), pair(1.0, 2.0, Sign::Plus)).unwrap()
    }

    #[test]
    fn degenerate_generators_are_rejected() {
        let d = Interval::new(-2.0, 2.0).unwrap();
        let s = MinimalSurface::new(
            WeierstrassTriple::parse("1", "0", "t", d).unwrap(),
            WeierstrassTriple::parse("1", "t", "0", d).unwrap(),
        );
        assert!(matches!(s, Err(Error::NotGeneralType(_))));
        let e = MinimalSurface::new(pair(1.0, 1.0, Sign::Plus), pair(1.0, 1.0, Sign::Plus)).unwrap();
        assert_eq!(e.position(0.0, 0.0).unwrap(), Vec4::ZERO);
    }

    #[test]
    fn position_matches_antiderivative() {
        let s = MinimalSurface::new(pair(1.0, 1.0, Sign::Plus), pair(1.0, 1.0, Sign::Plus)).unwrap();
        let a = |t: f64| Vec4::new((t.powi(3) / 3.0 + t) / 2.0, (t.powi(3) / 3.0 - t) / 2.0, 0.0, t * t / 2.0);
        let (u, v) = (0.4, -0.3);
        let expect = (a(u + v) + a(u - v)).scale(0.5);
        assert!((s.position(u, v).unwrap() - expect).max_abs() < 1e-12);
    }

    #[test]
    fn m1_e_and_type() {
        let s = m1();
        assert_eq!(s.classify(), SurfaceType::First);
        assert!((s.induced_e(0.5, 0.5).unwrap() + 0.25).abs() < 1e-15);
        let tr = MinimalSurface::new(
            Generator::Triple(pair(2.0, 1.0, Sign::Plus).to_triple()),
            Generator::Triple(pair(1.0, 2.0, Sign::Plus).to_triple()),
        )
        .unwrap();
        assert!((tr.induced_e(0.5, 0.5).unwrap() + 0.25).abs() < 1e-14);
        for &(u, v) in &[(0.4, 0.6), (0.61, 0.37), (1.0, -0.1)] {
            let (a, b) = (s.induced_e(u, v).unwrap(), tr.induced_e(u, v).unwrap());
            assert!((a - b).abs() <= 1e-9 * a.abs());
        }
        // g1 = g2 on the diagonal t1 = t2 of α_{2,1} against itself
        let same = MinimalSurface::new(pair(2.0, 1.0, Sign::Plus), pair(2.0, 1.0, Sign::Plus)).unwrap();
        assert!(matches!(same.induced_e(0.5, 0.0), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn types_of_examples() {
        let m2 = MinimalSurface::new(pair(2.0, -1.0, Sign::Plus), pair(1.0, -2.0, Sign::Plus)).unwrap();
        assert_eq!(m2.classify(), SurfaceType::Second);
        let m3 = MinimalSurface::new(pair(2.0, 1.0, Sign::Plus), pair(1.0, -2.0, Sign::Plus)).unwrap();
        assert_eq!(m3.classify(), SurfaceType::Third);
        assert!(!m3.renumbered());
        let swapped = MinimalSurface::new(pair(1.0, -2.0, Sign::Plus), pair(2.0, 1.0, Sign::Plus)).unwrap();
        assert_eq!(swapped.classify(), SurfaceType::Third);
        assert!(swapped.renumbered());
        assert_eq!(swapped.gen1().alpha_pp_sq(0.3).unwrap(), 1.0);
    }

    #[test]
    fn gauss_map_identities() {
        let s = m1();
        for &(u, v) in &[(0.4, 0.5), (0.55, 0.62)] {
            let phi = s.gauss_map(u, v).unwrap();
            let sq = phi.sq();
            assert!(sq.re.abs() < 1e-12 && sq.im.abs() < 1e-12);
            let n = phi.norm_sq();
            let e = s.induced_e(u, v).unwrap();
            assert!((n.re - 2.0 * e).abs() <= 1e-9 * e.abs() && n.im.abs() < 1e-12);
            let (a, b) = n.null_decompose();
            let (x1, x2) = s.tangents(u, v).unwrap();
            let ip = 4.0 * inner(x1, x2);
            assert!((a - ip).abs() < 1e-12 && (b - ip).abs() < 1e-12);
        }
    }

    #[test]
    fn grids_and_singular_flags() {
        let s = m1();
        let r = Region::new(0.3, 0.7, 0.3, 0.7).unwrap();
        let g = s.sample_grid(&r, 9, 9, false).unwrap();
        assert_eq!(g.len(), 81);
        assert!(g.iter().all(|p| !p.singular));
        let one = s.sample_grid(&Region::new(0.5, 0.5, 0.5, 0.5).unwrap(), 1, 1, true).unwrap();
        assert_eq!(one[0].x, s.position(0.5, 0.5).unwrap());
        assert!((one[0].k - 20.0).abs() < 1e-12);
        // the singular line u = 3v crosses this rectangle at v = 0.2
        let straddle = s.sample_grid(&Region::new(0.6, 0.6, 0.1, 0.3).unwrap(), 1, 21, false).unwrap();
        assert!(straddle.iter().any(|p| p.singular));
    }

    #[test]
    fn harmonic_and_null_coordinates() {
        let s = m1();
        let (u, v, h) = (0.5, 0.45, 1e-3);
        let x = |a: f64, b: f64| s.position(a, b).unwrap();
        let xuu = (x(u + h, v) - x(u, v).scale(2.0) + x(u - h, v)).scale(1.0 / (h * h));
        let xvv = (x(u, v + h) - x(u, v).scale(2.0) + x(u, v - h)).scale(1.0 / (h * h));
        let scale = x(u, v).max_abs().max(1.0);
        assert!((xuu - xvv).max_abs() <= 1e-6 * scale);
        let (t1, t2) = to_isotropic(u, v);
        let ht = 1e-5;
        let xt = |a: f64, b: f64| s.position(to_isothermal(a, b).0, to_isothermal(a, b).1).unwrap();
        let d1 = (xt(t1 + ht, t2) - xt(t1 - ht, t2)).scale(0.5 / ht);
        let d2 = (xt(t1, t2 + ht) - xt(t1, t2 - ht)).scale(0.5 / ht);
        assert!(d1.sq().abs() <= 1e-8 && d2.sq().abs() <= 1e-8);
        let (a, b) = s.tangents(u, v).unwrap();
        assert!((d1 - a).max_abs() < 1e-8 && (d2 - b).max_abs() < 1e-8);
    }

    #[test]
    fn audit_detects_vanishing_e() {
        let e = MinimalSurface::new(pair(1.0, 1.0, Sign::Plus), pair(1.0, 1.0, Sign::Plus)).unwrap();
        let r = Region::new(0.5, 1.5, -0.5, 0.5).unwrap();
        assert!(matches!(e.audit_region(&r, 21), Err(Error::Audit(_))));
        assert_eq!(m1().audit_region(&Region::new(0.35, 0.65, 0.35, 0.65).unwrap(), 21).unwrap(), Sign::Minus);
    }
}
