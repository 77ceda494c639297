//! Finite-difference check that `(K, κ)` fields satisfy the natural equations
//!
//! ```text
//! ⁴√|K² − κ²| · Δʰ ln|K² − κ²|          = 8δK
//! ⁴√|K² − κ²| · Δʰ ln|(K + κ)/(K − κ)|  = 4δκ
//! ```
//!
//! with `Δʰ = ∂²/∂u² − ∂²/∂v²` and `δ = sign E`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::nullcurve::Sign;
use crate::surface::{MinimalSurface, Region};

pub const MIN_AXIS: usize = 5;
pub const DEFAULT_TOL: f64 = 1e-2;

/// Values on a uniform `nu × nv` grid, row-major with `u` outer.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarGrid {
    pub u0: f64,
    pub v0: f64,
    pub du: f64,
    pub dv: f64,
    pub nu: usize,
    pub nv: usize,
    pub values: Vec<f64>,
    /// `true` where the value is valid.
    pub mask: Vec<bool>,
}

impl ScalarGrid {
    pub fn new(u0: f64, v0: f64, du: f64, dv: f64, nu: usize, nv: usize, values: Vec<f64>, mask: Vec<bool>) -> Result<Self> {
        if !(du > 0.0 && dv > 0.0 && du.is_finite() && dv.is_finite()) {
            return Err(Error::Parameter("grid steps must be positive".into()));
        }
        if nu < MIN_AXIS || nv < MIN_AXIS {
            return Err(Error::Parameter(format!("grid needs at least {MIN_AXIS} points per axis")));
        }
        if values.len() != nu * nv || mask.len() != nu * nv {
            return Err(Error::Parameter("grid data length mismatch".into()));
        }
        Ok(ScalarGrid { u0, v0, du, dv, nu, nv, values, mask })
    }

    /// Samples `f`; `None` or non-finite values are masked.
    pub fn from_fn(
        u0: f64,
        v0: f64,
        du: f64,
        dv: f64,
        nu: usize,
        nv: usize,
        f: impl Fn(f64, f64) -> Option<f64> + Sync,
    ) -> Result<Self> {
        let vals: Vec<Option<f64>> = (0..nu * nv)
            .into_par_iter()
            .map(|k| f(u0 + du * (k / nv) as f64, v0 + dv * (k % nv) as f64).filter(|x| x.is_finite()))
            .collect();
        let mask = vals.iter().map(Option::is_some).collect();
        let values = vals.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        ScalarGrid::new(u0, v0, du, dv, nu, nv, values, mask)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nv + j
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let k = self.index(i, j);
        self.mask[k].then(|| self.values[k])
    }

    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (self.u0 + self.du * i as f64, self.v0 + self.dv * j as f64)
    }

    fn same_shape(&self, o: &ScalarGrid) -> bool {
        self.nu == o.nu && self.nv == o.nv && self.u0 == o.u0 && self.v0 == o.v0 && self.du == o.du && self.dv == o.dv
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|m| !**m).count()
    }
}

/// `(g[i+1,j] − 2g[i,j] + g[i−1,j])/du² − (g[i,j+1] − 2g[i,j] + g[i,j−1])/dv²`.
pub fn hyperbolic_laplacian(g: &ScalarGrid, i: usize, j: usize) -> Result<f64> {
    if i == 0 || j == 0 || i + 1 >= g.nu || j + 1 >= g.nv {
        return Err(Error::Stencil { i, j });
    }
    let at = |a: usize, b: usize| g.get(a, b).ok_or(Error::Stencil { i, j });
    let c = at(i, j)?;
    let uu = (at(i + 1, j)? - 2.0 * c + at(i - 1, j)?) / (g.du * g.du);
    let vv = (at(i, j + 1)? - 2.0 * c + at(i, j - 1)?) / (g.dv * g.dv);
    Ok(uu - vv)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    pub r1_max: f64,
    pub r1_rms: f64,
    pub r2_max: f64,
    pub r2_rms: f64,
    /// `±1`, or `0` when `E` changes sign across the grid.
    pub delta: f64,
    pub interior: usize,
    /// Grid points excluded by singularity or logarithm guards.
    pub masked: usize,
}

impl ResidualReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.r1_max <= tol && self.r2_max <= tol
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "r1_max={}", fmt_f64(self.r1_max))?;
        writeln!(f, "r1_rms={}", fmt_f64(self.r1_rms))?;
        writeln!(f, "r2_max={}", fmt_f64(self.r2_max))?;
        writeln!(f, "r2_rms={}", fmt_f64(self.r2_rms))?;
        writeln!(f, "delta={}", fmt_f64(self.delta))?;
        writeln!(f, "interior={}", self.interior)?;
        writeln!(f, "masked={}", self.masked)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointResidual {
    pub u: f64,
    pub v: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Residuals with a single `δ`.
pub fn natural_eq_residuals(k: &ScalarGrid, kappa: &ScalarGrid, delta: Sign) -> Result<ResidualReport> {
    residuals_with(k, kappa, |_| delta.value()).map(|(r, _)| r)
}

/// Residuals with a per-point `δ` (given by grid index), plus the per-point values.
pub fn residuals_with(
    k: &ScalarGrid,
    kappa: &ScalarGrid,
    delta_at: impl Fn(usize) -> f64,
) -> Result<(ResidualReport, Vec<PointResidual>)> {
    if !k.same_shape(kappa) {
        return Err(Error::Parameter("K and kappa grids differ in shape".into()));
    }
    let n = k.values.len();
    let mut disc = vec![f64::NAN; n];
    let mut ratio = vec![f64::NAN; n];
    let mut mask = vec![false; n];
    for idx in 0..n {
        if !(k.mask[idx] && kappa.mask[idx]) {
            continue;
        }
        let (a, b) = (k.values[idx], kappa.values[idx]);
        let eps = 1e-8 * (1.0 + a * a + b * b);
        let d = a * a - b * b;
        if d.abs() < eps || (a + b).abs() < eps || (a - b).abs() < eps {
            continue;
        }
        disc[idx] = d.abs().ln();
        ratio[idx] = ((a + b) / (a - b)).abs().ln();
        mask[idx] = true;
    }
    let masked = mask.iter().filter(|m| !**m).count();
    let l1 = ScalarGrid { values: disc, mask: mask.clone(), ..k.clone() };
    let l2 = ScalarGrid { values: ratio, mask, ..k.clone() };
    let mut points = Vec::new();
    let (mut m1, mut s1, mut m2, mut s2) = (0.0_f64, 0.0, 0.0_f64, 0.0);
    let mut deltas = None::<f64>;
    let mut mixed = false;
    for i in 1..k.nu - 1 {
        for j in 1..k.nv - 1 {
            let (Ok(lap1), Ok(lap2)) = (hyperbolic_laplacian(&l1, i, j), hyperbolic_laplacian(&l2, i, j)) else {
                continue;
            };
            let idx = k.index(i, j);
            let (a, b) = (k.values[idx], kappa.values[idx]);
            let delta = delta_at(idx);
            if deltas.is_some_and(|d| d != delta) {
                mixed = true;
            }
            deltas = Some(delta);
            let w = (a * a - b * b).abs().sqrt().sqrt();
            let r1 = w * lap1 - 8.0 * delta * a;
            let r2 = w * lap2 - 4.0 * delta * b;
            m1 = m1.max(r1.abs());
            m2 = m2.max(r2.abs());
            s1 += r1 * r1;
            s2 += r2 * r2;
            let (u, v) = k.coords(i, j);
            points.push(PointResidual { u, v, r1, r2 });
        }
    }
    let interior = points.len();
    if interior == 0 {
        return Err(Error::EmptyGrid);
    }
    let report = ResidualReport {
        r1_max: m1,
        r1_rms: (s1 / interior as f64).sqrt(),
        r2_max: m2,
        r2_rms: (s2 / interior as f64).sqrt(),
        delta: if mixed { 0.0 } else { deltas.unwrap_or(0.0) },
        interior,
        masked,
    };
    Ok((report, points))
}

/// `(K, κ, E)` grids of a surface over a rectangle with step close to `h`.
pub struct SurfaceGrids {
    pub k: ScalarGrid,
    pub kappa: ScalarGrid,
    pub e: ScalarGrid,
}

fn axis_count(range: (f64, f64), h: f64) -> Result<usize> {
    let len = range.1 - range.0;
    if !(h > 0.0 && h.is_finite()) || !(len > 0.0) {
        return Err(Error::Parameter(format!("need positive step and nonempty range (h={h}, len={len})")));
    }
    Ok(((len / h).round() as usize + 1).max(MIN_AXIS))
}

pub fn surface_grids(s: &MinimalSurface, r: &Region, h: f64) -> Result<SurfaceGrids> {
    let (nu, nv) = (axis_count(r.u, h)?, axis_count(r.v, h)?);
    let samples = s.sample_grid(r, nu, nv, false)?;
    let du = (r.u.1 - r.u.0) / (nu - 1) as f64;
    let dv = (r.v.1 - r.v.0) / (nv - 1) as f64;
    let mask: Vec<bool> = samples.iter().map(|p| !p.singular).collect();
    let grid = |vals: Vec<f64>| ScalarGrid::new(r.u.0, r.v.0, du, dv, nu, nv, vals, mask.clone());
    Ok(SurfaceGrids {
        k: grid(samples.iter().map(|p| p.k).collect())?,
        kappa: grid(samples.iter().map(|p| p.kappa).collect())?,
        e: grid(samples.iter().map(|p| p.e).collect())?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub pass: bool,
    pub report: ResidualReport,
    pub points: Vec<PointResidual>,
}

/// Requires natural-parameter generators; `δ` comes from the sign of `E` at each point.
pub fn verify_surface(s: &MinimalSurface, r: &Region, h: f64, tol: f64) -> Result<Verification> {
    if !s.is_canonical() {
        return Err(Error::NotCanonical);
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let grids = surface_grids(s, r, h)?;
    verify_grids(&grids.k, &grids.kappa, &grids.e, tol)
}

/// Verification of given grids with `δ = sign E` pointwise.
pub fn verify_grids(k: &ScalarGrid, kappa: &ScalarGrid, e: &ScalarGrid, tol: f64) -> Result<Verification> {
    let (report, points) = residuals_with(k, kappa, |idx| Sign::of(e.values[idx]).value())?;
    Ok(Verification { pass: report.passes(tol), report, points })
}

/// Ratios `r(h)/r(h/2)` for both equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convergence {
    pub coarse: ResidualReport,
    pub fine: ResidualReport,
    pub ratio1: f64,
    pub ratio2: f64,
}

impl Convergence {
    /// Observed orders `log2(ratio)`.
    pub fn orders(&self) -> (f64, f64) {
        (self.ratio1.log2(), self.ratio2.log2())
    }
}

pub fn convergence(s: &MinimalSurface, r: &Region, h: f64) -> Result<Convergence> {
    let coarse = verify_surface(s, r, h, f64::INFINITY)?.report;
    let fine = verify_surface(s, r, 0.5 * h, f64::INFINITY)?.report;
    Ok(Convergence { coarse, fine, ratio1: coarse.r1_max / fine.r1_max, ratio2: coarse.r2_max / fine.r2_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullcurve::enneper_curve;

    fn grid(f: impl Fn(f64, f64) -> f64 + Sync) -> ScalarGrid {
        ScalarGrid::from_fn(-0.3, 0.2, 0.1, 0.05, 7, 9, |u, v| Some(f(u, v))).unwrap()
    }

    #[test]
    fn laplacian_on_quadratics() {
        let g = grid(|u, _| u * u);
        assert!((hyperbolic_laplacian(&g, 3, 4).unwrap() - 2.0).abs() < 1e-12);
        assert!(hyperbolic_laplacian(&grid(|u, v| u * u + v * v), 2, 2).unwrap().abs() < 1e-11);
        assert!(hyperbolic_laplacian(&grid(|u, v| u * v), 2, 5).unwrap().abs() < 1e-12);
        assert_eq!(hyperbolic_laplacian(&g, 0, 3), Err(Error::Stencil { i: 0, j: 3 }));
    }

    #[test]
    fn masked_neighbours_break_stencil() {
        let mut g = grid(|u, _| u);
        let k = g.index(3, 3);
        g.mask[k] = false;
        assert!(matches!(hyperbolic_laplacian(&g, 3, 4), Err(Error::Stencil { .. })));
    }

    fn m1_closed_form(h: f64) -> (ScalarGrid, ScalarGrid) {
        let n = (0.3 / h).round() as usize + 1;
        let k = ScalarGrid::from_fn(0.35, 0.35, h, h, n, n, |u, v| {
            Some((64.0 * u * u + 576.0 * v * v) / (u * u - 9.0 * v * v).abs().powi(3))
        })
        .unwrap();
        let kappa =
            ScalarGrid::from_fn(0.35, 0.35, h, h, n, n, |u, v| Some(-384.0 * u * v / (u * u - 9.0 * v * v).abs().powi(3)))
                .unwrap();
        (k, kappa)
    }

    #[test]
    fn closed_form_converges_at_second_order() {
        let (k, c) = m1_closed_form(4e-3);
        let (k2, c2) = m1_closed_form(2e-3);
        let a = natural_eq_residuals(&k, &c, Sign::Minus).unwrap();
        let b = natural_eq_residuals(&k2, &c2, Sign::Minus).unwrap();
        for ratio in [a.r1_max / b.r1_max, a.r2_max / b.r2_max] {
            assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        }
        // the wrong δ leaves an O(K) residual
        let wrong = natural_eq_residuals(&k, &c, Sign::Plus).unwrap();
        assert!(wrong.r1_max > 100.0 * a.r1_max);
    }

    #[test]
    fn pipeline_matches_closed_form() {
        let s = MinimalSurface::new(
            enneper_curve(2.0, 1.0, Sign::Plus).unwrap(),
            enneper_curve(1.0, 2.0, Sign::Plus).unwrap(),
        )
        .unwrap();
        let r = Region::new(0.35, 0.65, 0.35, 0.65).unwrap();
        let v = verify_surface(&s, &r, 4e-3, 1.0).unwrap();
        let (k, c) = m1_closed_form(0.3 / 75.0);
        let f = natural_eq_residuals(&k, &c, Sign::Minus).unwrap();
        assert_eq!(v.report.delta, -1.0);
        assert_eq!(v.report.interior, f.interior);
        assert!((v.report.r1_max - f.r1_max).abs() <= 1e-8 * f.r1_max.max(1.0));
        assert!((v.report.r2_max - f.r2_max).abs() <= 1e-8 * f.r2_max.max(1.0));
    }

    #[test]
    fn corrupted_kappa_fails() {
        let (k, c) = m1_closed_form(4e-3);
        let bad = ScalarGrid { values: c.values.iter().map(|x| x * 1.01).collect(), ..c.clone() };
        let good = natural_eq_residuals(&k, &c, Sign::Minus).unwrap();
        let worse = natural_eq_residuals(&k, &bad, Sign::Minus).unwrap();
        assert!(worse.r2_max > 10.0 * good.r2_max);
    }

    #[test]
    fn log_singular_points_are_masked() {
        // K = κ on the line v = 0
        let k = grid(|u, _| 1.0 + u * u);
        let c = grid(|u, v| if v.abs() < 1e-12 { 1.0 + u * u } else { 0.5 });
        let r = natural_eq_residuals(&k, &c, Sign::Plus);
        assert!(r.is_ok());
        let bad = grid(|u, _| 1.0 + u * u);
        assert_eq!(natural_eq_residuals(&k, &bad, Sign::Plus), Err(Error::EmptyGrid));
    }

    #[test]
    fn raw_triples_are_rejected() {
        let s = MinimalSurface::new(
            enneper_curve(2.0, 1.0, Sign::Plus).unwrap().to_triple(),
            enneper_curve(1.0, 2.0, Sign::Plus).unwrap().to_triple(),
        )
        .unwrap();
        let r = Region::new(0.35, 0.65, 0.35, 0.65).unwrap();
        assert_eq!(verify_surface(&s, &r, 1e-2, 1e-2), Err(Error::NotCanonical));
    }

    #[test]
    fn report_format() {
        let r = ResidualReport { r1_max: 0.5, r1_rms: 0.25, r2_max: 1e-7, r2_rms: 0.0, delta: -1.0, interior: 9, masked: 0 };
        assert_eq!(r.to_string(), "r1_max=0.5\nr1_rms=0.25\nr2_max=1e-7\nr2_rms=0\ndelta=-1\ninterior=9\nmasked=0\n");
    }
}
