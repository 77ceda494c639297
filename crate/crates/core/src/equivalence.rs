//! Quadruples `(g1, h1, g2, h2)` of natural-parameter Weierstrass functions,
//! their Möbius action, and the same-solution test on `(K, κ)` fields.

use rayon::prelude::*;

use crate::curvature::{canonical_values, CurvaturePair};
use crate::error::{Error, Result};
use crate::funcs::Fn1;
use crate::motions::Mobius;
use crate::nullcurve::{CanonicalPair, Interval, Sign, DEFAULT_AUDIT_N, EPS_DEG};
use crate::surface::{to_isotropic, Region};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const ABS_FLOOR: f64 = 1e-12;
/// Largest fraction of points whose masks may differ before grids are incomparable.
pub const MAX_MASK_MISMATCH: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct Quadruple {
    pub g1: Fn1,
    pub h1: Fn1,
    pub g2: Fn1,
    pub h2: Fn1,
    pub dom1: Interval,
    pub dom2: Interval,
}

fn audit_product(g: &Fn1, h: &Fn1, dom: &Interval) -> Result<()> {
    let mut sign = None;
    for t in dom.grid(DEFAULT_AUDIT_N) {
        let p = g.eval_derivative(t)? * h.eval_derivative(t)?;
        if p.abs() < EPS_DEG || sign.is_some_and(|s| s != Sign::of(p)) {
            return Err(Error::Degenerate { t, value: p });
        }
        sign = Some(Sign::of(p));
    }
    Ok(())
}

impl Quadruple {
    /// Audits `g′1h′1 ≠ 0` and `g′2h′2 ≠ 0` on the domains.
    pub fn new(g1: Fn1, h1: Fn1, g2: Fn1, h2: Fn1, dom1: Interval, dom2: Interval) -> Result<Self> {
        audit_product(&g1, &h1, &dom1)?;
        audit_product(&g2, &h2, &dom2)?;
        Ok(Quadruple { g1, h1, g2, h2, dom1, dom2 })
    }

    pub fn parse(exprs: [&str; 4], dom1: Interval, dom2: Interval) -> Result<Self> {
        let [g1, h1, g2, h2] = exprs;
        Quadruple::new(Fn1::parse(g1)?, Fn1::parse(h1)?, Fn1::parse(g2)?, Fn1::parse(h2)?, dom1, dom2)
    }

    pub fn from_pairs(p1: &CanonicalPair, p2: &CanonicalPair) -> Result<Self> {
        Quadruple::new(p1.g.clone(), p1.h.clone(), p2.g.clone(), p2.h.clone(), p1.domain, p2.domain)
    }

    pub fn to_pairs(&self, omega1: Sign, omega2: Sign) -> (CanonicalPair, CanonicalPair) {
        (
            CanonicalPair::new(self.g1.clone(), self.h1.clone(), omega1, self.dom1),
            CanonicalPair::new(self.g2.clone(), self.h2.clone(), omega2, self.dom2),
        )
    }

    /// `[g1, h1, g2, h2]` at `(t1, t2)`.
    pub fn values(&self, t1: f64, t2: f64) -> Result<[f64; 4]> {
        Ok([self.g1.eval(t1)?, self.h1.eval(t1)?, self.g2.eval(t2)?, self.h2.eval(t2)?])
    }

    fn check(&self, t1: f64, t2: f64) -> Result<()> {
        for (t, d) in [(t1, &self.dom1), (t2, &self.dom2)] {
            if !d.contains(t) {
                return Err(Error::domain(t, format!("outside quadruple domain [{}, {}]", d.min, d.max)));
            }
        }
        Ok(())
    }

    /// Canonical-form `(K, κ)` with an explicit `δ`.
    pub fn curvature(&self, delta: Sign, t1: f64, t2: f64) -> Result<CurvaturePair> {
        self.check(t1, t2)?;
        canonical_values(
            delta,
            [self.g1.eval(t1)?, self.g1.eval_derivative(t1)?, self.h1.eval(t1)?, self.h1.eval_derivative(t1)?],
            [self.g2.eval(t2)?, self.g2.eval_derivative(t2)?, self.h2.eval(t2)?, self.h2.eval_derivative(t2)?],
        )
    }

    /// `(K, κ)` on an `nu × nv` grid of the rectangle; `None` where singular.
    pub fn curvature_grid(&self, delta: Sign, r: &Region, nu: usize, nv: usize) -> Result<Vec<Option<CurvaturePair>>> {
        let us = Region::axis(r.u, nu);
        let vs = Region::axis(r.v, nv);
        (0..nu * nv)
            .into_par_iter()
            .map(|k| {
                let (t1, t2) = to_isotropic(us[k / nv], vs[k % nv]);
                match self.curvature(delta, t1, t2) {
                    Ok(c) => Ok(Some(c)),
                    Err(Error::Singular { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect()
    }
}

fn check_poles(f: &Fn1, m: &Mobius, dom: &Interval) -> Result<()> {
    if m.c == 0.0 {
        return Ok(());
    }
    let mut sign = None;
    for t in dom.grid(DEFAULT_AUDIT_N) {
        let den = m.denominator(f.eval(t)?);
        if den.abs() <= 1e-12 * (m.c.abs() + m.d.abs()) || sign.is_some_and(|s| s != Sign::of(den)) {
            return Err(Error::Pole { t });
        }
        sign = Some(Sign::of(den));
    }
    Ok(())
}

/// `ĝ_i = (a1 g_i + b1)/(c1 g_i + d1)`, `ĥ_i = (a2 h_i + b2)/(c2 h_i + d2)`.
pub fn mobius_apply_quadruple(q: &Quadruple, m1: &Mobius, m2: &Mobius) -> Result<Quadruple> {
    if !(m1.is_finite() && m2.is_finite()) {
        return Err(Error::Parameter("non-finite Mobius coefficients".into()));
    }
    if m1.det() == 0.0 || m2.det() == 0.0 {
        return Err(Error::DegenerateDet);
    }
    check_poles(&q.g1, m1, &q.dom1)?;
    check_poles(&q.g2, m1, &q.dom2)?;
    check_poles(&q.h1, m2, &q.dom1)?;
    check_poles(&q.h2, m2, &q.dom2)?;
    let lf = |f: &Fn1, m: &Mobius| f.linear_fractional(m.a, m.b, m.c, m.d);
    Quadruple::new(lf(&q.g1, m1), lf(&q.h1, m2), lf(&q.g2, m1), lf(&q.h2, m2), q.dom1, q.dom2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub same: bool,
    /// Largest `|Δ| / max(scale, floor)` over points valid in both grids.
    pub max_rel_diff: f64,
    pub compared: usize,
    pub mask_mismatch: usize,
}

/// Entrywise comparison of the canonical `(K, κ)` fields on a grid of the rectangle.
pub fn same_solution(qa: &Quadruple, qb: &Quadruple, delta: Sign, r: &Region, nu: usize, nv: usize, tol: f64) -> Result<Comparison> {
    let a = qa.curvature_grid(delta, r, nu, nv)?;
    let b = qb.curvature_grid(delta, r, nu, nv)?;
    compare_fields(&a, &b, tol)
}

pub fn compare_fields(a: &[Option<CurvaturePair>], b: &[Option<CurvaturePair>], tol: f64) -> Result<Comparison> {
    if a.len() != b.len() {
        return Err(Error::Parameter("grids differ in size".into()));
    }
    let total = a.len();
    let mismatch = a.iter().zip(b).filter(|(x, y)| x.is_some() != y.is_some()).count();
    if mismatch as f64 > MAX_MASK_MISMATCH * total as f64 {
        return Err(Error::Incomparable { differing: mismatch, total });
    }
    let mut worst = 0.0_f64;
    let mut compared = 0;
    let mut same = true;
    for (x, y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x, y) {
            compared += 1;
            let scale = x.scale().max(y.scale());
            let d = (x.k - y.k).abs().max((x.kappa - y.kappa).abs());
            if d > tol * scale + ABS_FLOOR {
                same = false;
            }
            worst = worst.max(d / scale.max(ABS_FLOOR));
        }
    }
    if compared == 0 {
        return Err(Error::EmptyGrid);
    }
    Ok(Comparison { same, max_rel_diff: worst, compared, mask_mismatch: mismatch })
}

/// Heuristic witness: the Möbius map sending `x_k ↦ y_k` for three distinct points,
/// via `CR(y, y1, y2, y3) = CR(x, x1, x2, x3)`. Does not decide equivalence.
pub fn fit_mobius(x: [f64; 3], y: [f64; 3]) -> Result<Mobius> {
    // matrix sending (z1, z2, z3) ↦ (0, ∞, 1)
    fn to_standard(z: [f64; 3]) -> Result<[f64; 4]> {
        let [z1, z2, z3] = z;
        let (a, b, c, d) = (z3 - z2, -z1 * (z3 - z2), z3 - z1, -z2 * (z3 - z1));
        if a * d - b * c == 0.0 {
            return Err(Error::DegenerateDet);
        }
        Ok([a, b, c, d])
    }
    let p = to_standard(x)?;
    let [a, b, c, d] = to_standard(y)?;
    // inverse of q is adj(q)
    let qi = [d, -b, -c, a];
    let m = [
        qi[0] * p[0] + qi[1] * p[2],
        qi[0] * p[1] + qi[1] * p[3],
        qi[2] * p[0] + qi[3] * p[2],
        qi[2] * p[1] + qi[3] * p[3],
    ];
    Mobius::new(m[0], m[1], m[2], m[3])
}
