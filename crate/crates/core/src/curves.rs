//! Shape-preserving interpolation of treasury par-yield knots.
//!
//! Knot derivatives follow Fritsch–Carlson: at interior knots, the weighted
//! harmonic mean of the adjacent secants when they share a sign and zero
//! otherwise; at the ends, the one-sided three-point estimate clamped so
//! it neither flips sign nor exceeds three times the end secant.

use std::io::Write;

use chrono::NaiveDate;
use thiserror::Error;

use crate::market_data::ParYieldCurve;

/// Option maturities below this use the first knot's rate (one month).
pub const FLOOR_MATURITY: f64 = 1.0 / 12.0;

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("need at least 2 knots, got {0}")]
    TooFewKnots(usize),
    #[error("knot abscissae must be strictly increasing (at index {0})")]
    NotIncreasing(usize),
    #[error("knot values must be finite")]
    NonFinite,
    #[error("x and y lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// Monotone piecewise cubic Hermite interpolant over sorted knots.
///
/// Outside the knot range the interpolant is extended flat.
#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if sign(d) != sign(del0) {
        0.0
    } else if sign(del0) != sign(del1) && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

impl Pchip {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, CurveError> {
        let n = xs.len();
        if n != ys.len() {
            return Err(CurveError::LengthMismatch(n, ys.len()));
        }
        if n < 2 {
            return Err(CurveError::TooFewKnots(n));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(CurveError::NonFinite);
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(CurveError::NotIncreasing(i + 1));
        }

        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = delta[0];
            slopes[1] = delta[0];
        } else {
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
            for i in 1..n - 1 {
                let (a, b) = (delta[i - 1], delta[i]);
                if a == 0.0 || b == 0.0 || sign(a) != sign(b) {
                    continue;
                }
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                slopes[i] = (w1 + w2) / (w1 / a + w2 / b);
            }
        }
        Ok(Pchip { xs, ys, slopes })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Derivative assigned to each knot.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Index of the segment `[x_i, x_{i+1}]` holding `x`, for `x` in range.
    fn segment(&self, x: f64) -> usize {
        let i = self.xs.partition_point(|&k| k <= x);
        i.saturating_sub(1).min(self.xs.len() - 2)
    }

    fn eval_on(&self, i: usize, x: f64) -> f64 {
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    fn deriv_on(&self, i: usize, x: f64) -> f64 {
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let d00 = (6.0 * t2 - 6.0 * t) / h;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / h;
        let d11 = 3.0 * t2 - 2.0 * t;
        d00 * self.ys[i] + d10 * self.slopes[i] + d01 * self.ys[i + 1] + d11 * self.slopes[i + 1]
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.segment(x);
        // Exact at knots, independent of rounding in the basis functions.
        if x == self.xs[i] {
            return self.ys[i];
        }
        self.eval_on(i, x)
    }

    /// Derivative of the segment polynomial to the left of `x`, i.e. on the
    /// segment ending at or after `x`. Zero outside the knot range.
    pub fn derivative_left(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&k| k < x) - 1;
        self.deriv_on(i, x)
    }

    /// Derivative of the segment polynomial to the right of `x`.
    pub fn derivative_right(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x >= self.xs[n - 1] {
            return 0.0;
        }
        self.deriv_on(self.segment(x), x)
    }
}

/// A par-yield curve fitted for lookup at arbitrary maturities.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolatedCurve {
    pub curve_date: NaiveDate,
    pub interpolant: Pchip,
    pub floor_maturity: f64,
}

/// Fits a PCHIP interpolant through a par curve's (maturity, rate) knots.
pub fn fit_pchip(curve: &ParYieldCurve) -> Result<InterpolatedCurve, CurveError> {
    let xs = curve.points.iter().map(|p| p.maturity).collect();
    let ys = curve.points.iter().map(|p| p.rate).collect();
    Ok(InterpolatedCurve {
        curve_date: curve.curve_date,
        interpolant: Pchip::new(xs, ys)?,
        floor_maturity: FLOOR_MATURITY,
    })
}

impl InterpolatedCurve {
    /// Market rate at an option maturity.
    ///
    /// Below one month the one-month rate is used; past the last knot the
    /// last knot's rate is used.
    pub fn market_rate(&self, ttm_years: f64) -> f64 {
        self.interpolant.evaluate(ttm_years.max(self.floor_maturity))
    }

    /// Samples `(ttm, rate)` on the given grid.
    pub fn sample(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&t| (t, self.market_rate(t))).collect()
    }

    /// Writes CSV `ttm_years,rate` sampled on `grid`.
    pub fn write_csv<W: Write>(&self, writer: W, grid: &[f64]) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["ttm_years", "rate"])?;
        for (t, r) in self.sample(grid) {
            w.write_record([crate::export::fmt_num(t), crate::export::fmt_num(r)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evenly spaced grid `step, 2·step, ...` up to and including `end`.
pub fn uniform_grid(step: f64, end: f64) -> Vec<f64> {
    let n = (end / step).floor() as usize;
    (1..=n).map(|i| i as f64 * step).collect()
}
