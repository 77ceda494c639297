//! Adaptive Gauss–Kronrod (7/15) quadrature with interval bisection.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 40;

/// Cooperative cancellation flag shared between a caller and long integrations.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

type Rule<const N: usize> = ([f64; N], f64);

fn kronrod<const N: usize>(
    f: &mut impl FnMut(f64) -> Result<[f64; N]>,
    a: f64,
    b: f64,
) -> Result<Rule<N>> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc.map(|v| v * WGK[7]);
    let mut g = fc.map(|v| v * WG[3]);
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        for n in 0..N {
            let s = f1[n] + f2[n];
            k[n] += WGK[j] * s;
            if j % 2 == 1 {
                g[n] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0_f64;
    for n in 0..N {
        k[n] *= h;
        g[n] *= h;
        err = err.max((k[n] - g[n]).abs());
    }
    Ok((k, err))
}

/// Integrate a vector-valued integrand over `[a, b]` (either orientation).
///
/// Intervals are bisected until the Gauss/Kronrod difference is below the
/// length-proportional share of `tol`, or a rounding floor, or `MAX_DEPTH`.
pub fn integrate<const N: usize>(
    mut f: impl FnMut(f64) -> Result<[f64; N]>,
    a: f64,
    b: f64,
    tol: f64,
    cancel: Option<&CancelToken>,
) -> Result<[f64; N]> {
    if a == b {
        return Ok([0.0; N]);
    }
    if b < a {
        return integrate(f, b, a, tol, cancel).map(|v| v.map(|x| -x));
    }
    let total = b - a;
    let mut sum = [0.0; N];
    let mut stack = vec![(a, b, 0u32, kronrod(&mut f, a, b)?)];
    while let Some((lo, hi, depth, (est, err))) = stack.pop() {
        if cancel.is_some_and(CancelToken::is_cancelled) {
            return Err(Error::Cancelled);
        }
        let scale = est.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let local_tol = (tol * (hi - lo) / total).max(64.0 * f64::EPSILON * scale);
        if err <= local_tol || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH && err > local_tol.max(1e3 * tol) {
                return Err(Error::Quadrature { a: lo, b: hi });
            }
            for n in 0..N {
                sum[n] += est[n];
            }
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi, depth + 1, kronrod(&mut f, mid, hi)?));
        stack.push((lo, mid, depth + 1, kronrod(&mut f, lo, mid)?));
    }
    Ok(sum)
}

pub fn integrate_scalar(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
    cancel: Option<&CancelToken>,
) -> Result<f64> {
    integrate(|t| f(t).map(|v| [v]), a, b, tol, cancel).map(|v| v[0])
}
