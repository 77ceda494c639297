use crate::error::{Error, Result};

/// Pointwise samples of a function and of its successive derivatives.
///
/// `levels[k][i]` is the k-th derivative at `knots[i]`. Order `k` is
/// evaluated by cubic Hermite interpolation on `(levels[b], levels[b+1])`
/// with `b = min(k, levels.len() - 2)`, differentiated `k - b` times.
#[derive(Debug)]
pub struct Table {
    knots: Vec<f64>,
    levels: Vec<Vec<f64>>,
}

impl Table {
    pub const MIN_KNOTS: usize = 4;

    pub fn new(knots: Vec<f64>, levels: Vec<Vec<f64>>) -> Result<Self> {
        if knots.len() < Self::MIN_KNOTS {
            return Err(Error::InvalidTable(format!(
                "need at least {} knots, got {}",
                Self::MIN_KNOTS,
                knots.len()
            )));
        }
        if levels.len() < 2 {
            return Err(Error::InvalidTable("need values and first derivatives".into()));
        }
        if levels.iter().any(|l| l.len() != knots.len()) {
            return Err(Error::InvalidTable("level length differs from knot count".into()));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTable("knots must be strictly increasing".into()));
        }
        if knots.iter().chain(levels.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidTable("non-finite entry".into()));
        }
        Ok(Table { knots, levels })
    }

    /// Build from a sampled function given as `(value, derivative, ...)` at each knot.
    pub fn from_samples(knots: Vec<f64>, samples: &[Vec<f64>]) -> Result<Self> {
        let depth = samples.first().map_or(0, Vec::len);
        if samples.iter().any(|s| s.len() != depth) {
            return Err(Error::InvalidTable("ragged samples".into()));
        }
        let levels = (0..depth)
            .map(|k| samples.iter().map(|s| s[k]).collect())
            .collect();
        Table::new(knots, levels)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn level(&self, k: usize) -> Option<&[f64]> {
        self.levels.get(k).map(Vec::as_slice)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn eval(&self, order: usize, t: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        let slack = 1e-12 * (hi - lo);
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::domain(t, format!("outside table range [{lo}, {hi}]")));
        }
        let t = t.clamp(lo, hi);
        let base = order.min(self.levels.len() - 2);
        let extra = order - base;
        if extra > 2 {
            return Err(Error::domain(t, "derivative order exceeds table depth"));
        }
        let i = self
            .knots
            .partition_point(|&k| k <= t)
            .saturating_sub(1)
            .min(self.knots.len() - 2);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let s = (t - x0) / h;
        let (y0, y1) = (self.levels[base][i], self.levels[base][i + 1]);
        let (m0, m1) = (self.levels[base + 1][i] * h, self.levels[base + 1][i + 1] * h);
        let (s2, s3) = (s * s, s * s * s);
        let v = match extra {
            0 => {
                (2.0 * s3 - 3.0 * s2 + 1.0) * y0
                    + (s3 - 2.0 * s2 + s) * m0
                    + (-2.0 * s3 + 3.0 * s2) * y1
                    + (s3 - s2) * m1
            }
            1 => {
                ((6.0 * s2 - 6.0 * s) * y0
                    + (3.0 * s2 - 4.0 * s + 1.0) * m0
                    + (-6.0 * s2 + 6.0 * s) * y1
                    + (3.0 * s2 - 2.0 * s) * m1)
                    / h
            }
            _ => {
                ((12.0 * s - 6.0) * y0
                    + (6.0 * s - 4.0) * m0
                    + (-12.0 * s + 6.0) * y1
                    + (6.0 * s - 2.0) * m1)
                    / (h * h)
            }
        };
        Ok(v)
    }
}
