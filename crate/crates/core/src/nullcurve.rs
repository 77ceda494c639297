//! Null curves of the neutral 4-space in Weierstrass form
//! `α′ = f·(gh + 1, gh − 1, h − g, h + g)`.
//!
//! Two carriers are provided: [`WeierstrassTriple`] for arbitrary parameters
//! and [`CanonicalPair`] for natural (pseudo arc-length) parameters, where
//! `f = ω / (2√|g′h′|)` is implied by `(g, h, ω)`.

use std::sync::Arc;

use crate::algebra::{inner, Vec4};
use crate::error::{Error, Result};
use crate::funcs::{expr, Fn1, Table};
use crate::quad::{self, CancelToken};

/// Degeneracy guard for `|α″²|`.
pub const EPS_DEG: f64 = 1e-10;
/// Relative guard for the `ξ1 − ξ2 ≠ 0` recovery chart.
pub const EPS_REC: f64 = 1e-12;
pub const DEFAULT_GRID_N: usize = 2048;
pub const DEFAULT_AUDIT_N: usize = 1001;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::Parameter(format!("invalid interval [{min}, {max}]")));
        }
        Ok(Interval { min, max })
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * (self.max - self.min).max(1.0);
        t >= self.min - slack && t <= self.max + slack
    }

    pub fn len(&self) -> f64 {
        self.max - self.min
    }

    /// `n ≥ 2` equally spaced points including both ends.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(2);
        let step = self.len() / (n - 1) as f64;
        (0..n).map(move |i| if i + 1 == n { self.max } else { self.min + step * i as f64 })
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.min.max(other.min), self.max.min(other.max)).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Weierstrass data and the derivatives needed for `α′` and `α″` at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeierstrassPoint {
    pub f: f64,
    pub df: f64,
    pub g: f64,
    pub dg: f64,
    pub ddg: f64,
    pub h: f64,
    pub dh: f64,
    pub ddh: f64,
}

impl WeierstrassPoint {
    fn direction(&self) -> Vec4 {
        let (g, h) = (self.g, self.h);
        Vec4::new(g * h + 1.0, g * h - 1.0, h - g, h + g)
    }

    fn direction_prime(&self) -> Vec4 {
        let m = self.dg * self.h + self.g * self.dh;
        Vec4::new(m, m, self.dh - self.dg, self.dh + self.dg)
    }

    pub fn alpha_prime(&self) -> Vec4 {
        self.direction().scale(self.f)
    }

    pub fn alpha_pp(&self) -> Vec4 {
        self.direction().scale(self.df) + self.direction_prime().scale(self.f)
    }

    /// `α″² = 4 f² g′ h′`.
    pub fn alpha_pp_sq(&self) -> f64 {
        4.0 * self.f * self.f * self.dg * self.dh
    }

    /// `d(α″²)/dt`.
    fn alpha_pp_sq_prime(&self) -> f64 {
        8.0 * self.f * self.df * self.dg * self.dh
            + 4.0 * self.f * self.f * (self.ddg * self.dh + self.dg * self.ddh)
    }
}

/// First and second derivative of a curve at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet {
    pub t: f64,
    pub alpha_p: Vec4,
    pub alpha_pp: Vec4,
}

impl CurveJet {
    /// `|α′²|` relative to `|α′|∞²`.
    pub fn null_defect(&self) -> f64 {
        let s = self.alpha_p.max_abs();
        if s == 0.0 {
            return 0.0;
        }
        inner(self.alpha_p, self.alpha_p).abs() / (s * s)
    }
}

/// Common interface of the two null-curve carriers.
pub trait NullCurve: Send + Sync {
    fn domain(&self) -> Interval;

    fn point(&self, t: f64) -> Result<WeierstrassPoint>;

    /// Only `f` and `g′, h′` are needed for `α″²`; carriers may override.
    fn alpha_pp_sq(&self, t: f64) -> Result<f64> {
        self.point(t).map(|p| p.alpha_pp_sq())
    }

    fn alpha_prime(&self, t: f64) -> Result<Vec4>;

    fn jet(&self, t: f64) -> Result<CurveJet> {
        let p = self.point(t)?;
        Ok(CurveJet { t, alpha_p: p.alpha_prime(), alpha_pp: p.alpha_pp() })
    }
}

fn check_domain(domain: &Interval, t: f64) -> Result<()> {
    if domain.contains(t) {
        Ok(())
    } else {
        Err(Error::domain(t, format!("outside [{}, {}]", domain.min, domain.max)))
    }
}

/// `(f, g, h)` with derivatives cached at construction.
#[derive(Clone, Debug)]
pub struct WeierstrassTriple {
    pub f: Fn1,
    pub g: Fn1,
    pub h: Fn1,
    pub domain: Interval,
    dg: Fn1,
    dh: Fn1,
}

impl WeierstrassTriple {
    pub fn new(f: Fn1, g: Fn1, h: Fn1, domain: Interval) -> Self {
        let dg = g.derivative();
        let dh = h.derivative();
        WeierstrassTriple { f, g, h, domain, dg, dh }
    }

    pub fn parse(f: &str, g: &str, h: &str, domain: Interval) -> Result<Self> {
        Ok(Self::new(Fn1::parse(f)?, Fn1::parse(g)?, Fn1::parse(h)?, domain))
    }

    /// Checks `f ≠ 0` on an audit grid of the domain.
    pub fn audit_f(&self, audit_n: usize) -> Result<()> {
        let mut sign = None;
        for t in self.domain.grid(audit_n) {
            let f = self.f.eval(t)?;
            if f == 0.0 || sign.is_some_and(|s| s != Sign::of(f)) {
                return Err(Error::Audit(format!("f vanishes near t={t}")));
            }
            sign = Some(Sign::of(f));
        }
        Ok(())
    }
}

impl NullCurve for WeierstrassTriple {
    fn domain(&self) -> Interval {
        self.domain
    }

    fn point(&self, t: f64) -> Result<WeierstrassPoint> {
        check_domain(&self.domain, t)?;
        Ok(WeierstrassPoint {
            f: self.f.eval(t)?,
            df: self.f.eval_derivative(t)?,
            g: self.g.eval(t)?,
            dg: self.g.eval_derivative(t)?,
            ddg: self.dg.eval_derivative(t)?,
            h: self.h.eval(t)?,
            dh: self.h.eval_derivative(t)?,
            ddh: self.dh.eval_derivative(t)?,
        })
    }

    fn alpha_pp_sq(&self, t: f64) -> Result<f64> {
        check_domain(&self.domain, t)?;
        let f = self.f.eval(t)?;
        Ok(4.0 * f * f * self.g.eval_derivative(t)? * self.h.eval_derivative(t)?)
    }

    fn alpha_prime(&self, t: f64) -> Result<Vec4> {
        alpha_prime(self, t)
    }
}

/// `α′ = f·(gh + 1, gh − 1, h − g, h + g)` for a triple.
pub fn alpha_prime(tr: &WeierstrassTriple, t: f64) -> Result<Vec4> {
    check_domain(&tr.domain, t)?;
    let (f, g, h) = (tr.f.eval(t)?, tr.g.eval(t)?, tr.h.eval(t)?);
    Ok(Vec4::new(g * h + 1.0, g * h - 1.0, h - g, h + g).scale(f))
}

pub fn alpha_pp_sq(curve: &impl NullCurve, t: f64) -> Result<f64> {
    curve.alpha_pp_sq(t)
}

/// Pointwise recovery of `(f, g, h)` from a null tangent `ξ`.
pub fn triple_from_jet(xi: Vec4) -> Result<(f64, f64, f64)> {
    let [x1, x2, x3, x4] = xi.0;
    let gap = x1 - x2;
    let norm = xi.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if gap.abs() <= EPS_REC * norm {
        return Err(Error::Recovery { gap: gap.abs() });
    }
    Ok((gap / 2.0, (x4 - x3) / gap, (x4 + x3) / gap))
}

/// `(g, h, ω)` in natural parametrization.
#[derive(Clone, Debug)]
pub struct CanonicalPair {
    pub g: Fn1,
    pub h: Fn1,
    pub omega: Sign,
    pub domain: Interval,
    dg: Fn1,
    dh: Fn1,
}

impl CanonicalPair {
    pub fn new(g: Fn1, h: Fn1, omega: Sign, domain: Interval) -> Self {
        let dg = g.derivative();
        let dh = h.derivative();
        CanonicalPair { g, h, omega, domain, dg, dh }
    }

    pub fn parse(g: &str, h: &str, omega: Sign, domain: Interval) -> Result<Self> {
        Ok(Self::new(Fn1::parse(g)?, Fn1::parse(h)?, omega, domain))
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_omega(mut self, omega: Sign) -> Self {
        self.omega = omega;
        self
    }

    /// `g′h′` at `t`.
    pub fn gh_prime(&self, t: f64) -> Result<f64> {
        check_domain(&self.domain, t)?;
        Ok(self.g.eval_derivative(t)? * self.h.eval_derivative(t)?)
    }

    /// The implied triple with `f = ω / (2·√√((g′h′)²))` built symbolically.
    pub fn to_triple(&self) -> WeierstrassTriple {
        use expr::{call, div, mul, num, pow};
        use crate::funcs::Func;
        let prod = mul(self.g.derivative_expr().clone(), self.h.derivative_expr().clone());
        let root = call(Func::Sqrt, call(Func::Sqrt, pow(prod, 2)));
        let f = div(num(self.omega.value()), mul(num(2.0), root));
        WeierstrassTriple::new(Fn1::from_expr(f), self.g.clone(), self.h.clone(), self.domain)
    }

    /// Checks `g′h′ ≠ 0` with constant sign on an audit grid.
    pub fn audit(&self, audit_n: usize) -> Result<Sign> {
        let mut sign = None;
        for t in self.domain.grid(audit_n) {
            let p = self.gh_prime(t)?;
            if p.abs() < EPS_DEG || sign.is_some_and(|s| s != Sign::of(p)) {
                return Err(Error::Degenerate { t, value: p });
            }
            sign = Some(Sign::of(p));
        }
        Ok(sign.unwrap_or(Sign::Plus))
    }
}

impl NullCurve for CanonicalPair {
    fn domain(&self) -> Interval {
        self.domain
    }

    fn point(&self, t: f64) -> Result<WeierstrassPoint> {
        check_domain(&self.domain, t)?;
        let (g, dg, ddg) = (self.g.eval(t)?, self.g.eval_derivative(t)?, self.dg.eval_derivative(t)?);
        let (h, dh, ddh) = (self.h.eval(t)?, self.h.eval_derivative(t)?, self.dh.eval_derivative(t)?);
        let p = dg * dh;
        if p.abs() < EPS_DEG {
            return Err(Error::Degenerate { t, value: 4.0 * p });
        }
        let w = self.omega.value();
        let ap = p.abs();
        let f = w / (2.0 * ap.sqrt());
        let dp = p.signum() * (ddg * dh + dg * ddh);
        let df = -0.25 * w * dp / (ap * ap.sqrt());
        Ok(WeierstrassPoint { f, df, g, dg, ddg, h, dh, ddh })
    }

    fn alpha_pp_sq(&self, t: f64) -> Result<f64> {
        let p = self.gh_prime(t)?;
        if p.abs() < EPS_DEG {
            return Err(Error::Degenerate { t, value: 4.0 * p });
        }
        // 4 f² g′h′ with f² = 1/(4|g′h′|)
        Ok(p.signum())
    }

    fn alpha_prime(&self, t: f64) -> Result<Vec4> {
        check_domain(&self.domain, t)?;
        let (g, h) = (self.g.eval(t)?, self.h.eval(t)?);
        let p = self.g.eval_derivative(t)? * self.h.eval_derivative(t)?;
        if p.abs() < EPS_DEG {
            return Err(Error::Degenerate { t, value: 4.0 * p });
        }
        let f = self.omega.value() / (2.0 * p.abs().sqrt());
        Ok(Vec4::new(g * h + 1.0, g * h - 1.0, h - g, h + g).scale(f))
    }
}

/// Either carrier, for code that accepts both.
#[derive(Clone, Debug)]
pub enum Generator {
    Triple(WeierstrassTriple),
    Canonical(CanonicalPair),
}

impl Generator {
    pub fn as_canonical(&self) -> Option<&CanonicalPair> {
        match self {
            Generator::Canonical(p) => Some(p),
            Generator::Triple(_) => None,
        }
    }

    pub fn to_triple(&self) -> WeierstrassTriple {
        match self {
            Generator::Triple(t) => t.clone(),
            Generator::Canonical(p) => p.to_triple(),
        }
    }

    pub fn g(&self) -> &Fn1 {
        match self {
            Generator::Triple(t) => &t.g,
            Generator::Canonical(p) => &p.g,
        }
    }

    pub fn h(&self) -> &Fn1 {
        match self {
            Generator::Triple(t) => &t.h,
            Generator::Canonical(p) => &p.h,
        }
    }

    fn inner(&self) -> &dyn NullCurve {
        match self {
            Generator::Triple(t) => t,
            Generator::Canonical(p) => p,
        }
    }
}

impl From<WeierstrassTriple> for Generator {
    fn from(t: WeierstrassTriple) -> Self {
        Generator::Triple(t)
    }
}

impl From<CanonicalPair> for Generator {
    fn from(p: CanonicalPair) -> Self {
        Generator::Canonical(p)
    }
}

impl NullCurve for Generator {
    fn domain(&self) -> Interval {
        self.inner().domain()
    }
    fn point(&self, t: f64) -> Result<WeierstrassPoint> {
        self.inner().point(t)
    }
    fn alpha_pp_sq(&self, t: f64) -> Result<f64> {
        self.inner().alpha_pp_sq(t)
    }
    fn alpha_prime(&self, t: f64) -> Result<Vec4> {
        self.inner().alpha_prime(t)
    }
}

/// Outcome of the `g′h′ ≠ 0` audit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NondegeneracyAudit {
    pub ok: bool,
    /// Sign of `g′h′` (the causal character of `α″`) when `ok`.
    pub sign: Option<Sign>,
    pub first_failure: Option<f64>,
}

pub fn is_nondegenerate(curve: &impl NullCurve, audit_n: usize) -> Result<NondegeneracyAudit> {
    if audit_n < 2 {
        return Err(Error::Parameter("audit grid needs at least 2 points".into()));
    }
    let dom = curve.domain();
    let mut sign = None;
    for t in dom.grid(audit_n) {
        let p = curve.point(t)?;
        let q = p.dg * p.dh;
        if q.abs() < EPS_DEG || sign.is_some_and(|s| s != Sign::of(q)) {
            return Ok(NondegeneracyAudit { ok: false, sign: None, first_failure: Some(t) });
        }
        sign = Some(Sign::of(q));
    }
    Ok(NondegeneracyAudit { ok: true, sign, first_failure: None })
}

fn quarter_root(curve: &(impl NullCurve + ?Sized), t: f64) -> Result<f64> {
    let a = curve.alpha_pp_sq(t)?;
    if a.abs() < EPS_DEG {
        return Err(Error::Degenerate { t, value: a });
    }
    Ok(a.abs().sqrt().sqrt())
}

/// `s(t) = ∫_{t0}^{t} |α″²|^{1/4}`.
pub fn natural_parameter(curve: &impl NullCurve, t0: f64, t: f64) -> Result<f64> {
    natural_parameter_with(curve, t0, t, None)
}

pub fn natural_parameter_with(
    curve: &impl NullCurve,
    t0: f64,
    t: f64,
    cancel: Option<&CancelToken>,
) -> Result<f64> {
    quad::integrate_scalar(|x| quarter_root(curve, x), t0, t, quad::DEFAULT_TOL, cancel)
}

/// Tabulated natural parameter on an interval with numerical inverse.
pub struct NaturalParameter<'a, C: NullCurve + ?Sized> {
    curve: &'a C,
    nodes_t: Vec<f64>,
    nodes_s: Vec<f64>,
}

impl<'a, C: NullCurve + ?Sized> NaturalParameter<'a, C> {
    /// Nodes on `span` with `s(t0) = 0`.
    pub fn new(
        curve: &'a C,
        t0: f64,
        span: Interval,
        nodes: usize,
        cancel: Option<&CancelToken>,
    ) -> Result<Self> {
        if !span.contains(t0) {
            return Err(Error::Parameter(format!("base point {t0} outside span")));
        }
        let nodes_t: Vec<f64> = span.grid(nodes.max(8)).collect();
        let mut nodes_s = Vec::with_capacity(nodes_t.len());
        let mut acc = 0.0;
        nodes_s.push(0.0);
        for w in nodes_t.windows(2) {
            acc += quad::integrate_scalar(|x| quarter_root(curve, x), w[0], w[1], quad::DEFAULT_TOL, cancel)?;
            nodes_s.push(acc);
        }
        let mut me = NaturalParameter { curve, nodes_t, nodes_s };
        let shift = me.s(t0)?;
        me.nodes_s.iter_mut().for_each(|s| *s -= shift);
        Ok(me)
    }

    pub fn range(&self) -> Interval {
        Interval { min: self.nodes_s[0], max: *self.nodes_s.last().unwrap() }
    }

    fn segment_of_t(&self, t: f64) -> usize {
        self.nodes_t.partition_point(|&x| x <= t).saturating_sub(1).min(self.nodes_t.len() - 2)
    }

    pub fn s(&self, t: f64) -> Result<f64> {
        let j = self.segment_of_t(t);
        let tail = quad::integrate_scalar(
            |x| quarter_root(self.curve, x),
            self.nodes_t[j],
            t,
            quad::DEFAULT_TOL,
            None,
        )?;
        Ok(self.nodes_s[j] + tail)
    }

    /// Inverse by bracketing plus safeguarded Newton.
    pub fn t_of(&self, s: f64) -> Result<f64> {
        let r = self.range();
        if !(s >= r.min - 1e-12 && s <= r.max + 1e-12) {
            return Err(Error::domain(s, "natural parameter outside tabulated range"));
        }
        let j = self.nodes_s.partition_point(|&x| x <= s).saturating_sub(1).min(self.nodes_s.len() - 2);
        let (mut lo, mut hi) = (self.nodes_t[j], self.nodes_t[j + 1]);
        let (s_lo, s_hi) = (self.nodes_s[j], self.nodes_s[j + 1]);
        let mut t = lo + (hi - lo) * ((s - s_lo) / (s_hi - s_lo)).clamp(0.0, 1.0);
        let tol = 1e-12 * s.abs().max(1.0);
        for _ in 0..60 {
            let tail = quad::integrate_scalar(|x| quarter_root(self.curve, x), self.nodes_t[j], t, quad::DEFAULT_TOL * 1e-2, None)?;
            let resid = s_lo + tail - s;
            if resid.abs() <= tol {
                return Ok(t);
            }
            if resid > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let slope = quarter_root(self.curve, t)?;
            let newton = t - resid / slope;
            t = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
                return Ok(t);
            }
        }
        Ok(t)
    }
}

/// Reparametrize by the natural parameter with `s(domain.min) = 0`.
pub fn reparametrize_natural(curve: &impl NullCurve, grid_n: usize) -> Result<CanonicalPair> {
    reparametrize_natural_from(curve, curve.domain().min, grid_n, None)
}

/// Reparametrize with `s(t0) = 0`; the pair's domain is the image of the curve's domain.
pub fn reparametrize_natural_from(
    curve: &impl NullCurve,
    t0: f64,
    grid_n: usize,
    cancel: Option<&CancelToken>,
) -> Result<CanonicalPair> {
    let dom = curve.domain();
    let audit = is_nondegenerate(curve, DEFAULT_AUDIT_N)?;
    if !audit.ok {
        let t = audit.first_failure.unwrap_or(dom.min);
        return Err(Error::Degenerate { t, value: curve.alpha_pp_sq(t).unwrap_or(0.0) });
    }
    let grid_n = grid_n.max(Table::MIN_KNOTS);
    let param = NaturalParameter::new(curve, t0, dom, grid_n, cancel)?;
    let range = param.range();
    let knots: Vec<f64> = range.grid(grid_n).collect();
    let mut g_samples = Vec::with_capacity(grid_n);
    let mut h_samples = Vec::with_capacity(grid_n);
    let mut omega = None;
    for &s in &knots {
        if cancel.is_some_and(CancelToken::is_cancelled) {
            return Err(Error::Cancelled);
        }
        let t = param.t_of(s)?.clamp(dom.min, dom.max);
        let p = curve.point(t)?;
        let a = p.alpha_pp_sq();
        if a.abs() < EPS_DEG {
            return Err(Error::Degenerate { t, value: a });
        }
        let da = p.alpha_pp_sq_prime();
        let tp = a.abs().powf(-0.25);
        let tpp = -0.25 * a.abs().powf(-1.25) * a.signum() * da * tp;
        g_samples.push(vec![p.g, p.dg * tp, p.ddg * tp * tp + p.dg * tpp]);
        h_samples.push(vec![p.h, p.dh * tp, p.ddh * tp * tp + p.dh * tpp]);
        let w = Sign::of(p.f);
        if p.f == 0.0 || omega.is_some_and(|o| o != w) {
            return Err(Error::Audit(format!("f vanishes near t={t}")));
        }
        omega = Some(w);
    }
    let g = Fn1::from_table(Arc::new(Table::from_samples(knots.clone(), &g_samples)?));
    let h = Fn1::from_table(Arc::new(Table::from_samples(knots, &h_samples)?));
    Ok(CanonicalPair::new(g, h, omega.unwrap_or(Sign::Plus), range))
}

/// The `α_{k,l}` family: `g = k t`, `h = l t` on `[-10, 10]`.
pub fn enneper_curve(k: f64, l: f64, omega: Sign) -> Result<CanonicalPair> {
    if k == 0.0 || l == 0.0 || !k.is_finite() || !l.is_finite() {
        return Err(Error::Parameter(format!("enneper curve needs nonzero k, l (got {k}, {l})")));
    }
    let domain = Interval { min: -10.0, max: 10.0 };
    Ok(CanonicalPair::new(Fn1::linear(k, 0.0), Fn1::linear(l, 0.0), omega, domain))
}

/// `α(t) = ∫_{t0}^{t} α′`, so that `α(t0) = 0`.
pub fn integrate_curve(curve: &impl NullCurve, t0: f64, t: f64) -> Result<Vec4> {
    integrate_curve_with(curve, t0, t, None)
}

pub fn integrate_curve_with(
    curve: &(impl NullCurve + ?Sized),
    t0: f64,
    t: f64,
    cancel: Option<&CancelToken>,
) -> Result<Vec4> {
    check_domain(&curve.domain(), t)?;
    quad::integrate(|x| curve.alpha_prime(x).map(|v| v.0), t0, t, quad::DEFAULT_TOL, cancel).map(Vec4)
}
