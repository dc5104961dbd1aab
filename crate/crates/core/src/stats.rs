//! Box-whisker summaries.
//!
//! Quartiles interpolate linearly between order statistics (the "type 7"
//! rule: position `(n − 1)·p` in the sorted sample). Whiskers reach the most
//! extreme observations inside the Tukey fences `q1 − 1.5·IQR` and
//! `q3 + 1.5·IQR`; everything beyond is an outlier.

use std::io::Write;

use thiserror::Error;

use crate::aggregation::MoneynessBinning;
use crate::export::fmt_num;
use crate::parity::ImpliedYieldSurface;

pub const TUKEY_FENCE: f64 = 1.5;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("cannot summarize an empty sample")]
    Empty,
    #[error("sample contains a non-finite value")]
    NonFinite,
}

/// Type-7 quantile of an already sorted, non-empty sample.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Median of a non-empty sample; the mean of the central pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxWhiskerSummary {
    pub n: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub lower_whisker: f64,
    pub upper_whisker: f64,
    /// Ascending.
    pub outliers: Vec<f64>,
}

impl BoxWhiskerSummary {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }

    pub fn fences(&self) -> (f64, f64) {
        let iqr = self.iqr();
        (self.q1 - TUKEY_FENCE * iqr, self.q3 + TUKEY_FENCE * iqr)
    }
}

pub fn summarize(values: &[f64]) -> Result<BoxWhiskerSummary, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&v, 0.25);
    let q3 = quantile_sorted(&v, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - TUKEY_FENCE * iqr, q3 + TUKEY_FENCE * iqr);
    let inside = || v.iter().copied().filter(|&x| x >= lo_fence && x <= hi_fence);
    // q1 and q3 lie between order statistics inside the fences, so `inside` is never empty.
    let lower_whisker = inside().next().unwrap_or(q1);
    let upper_whisker = inside().next_back().unwrap_or(q3);
    let outliers = v
        .iter()
        .copied()
        .filter(|&x| x < lo_fence || x > hi_fence)
        .collect();
    Ok(BoxWhiskerSummary {
        n: v.len(),
        q1,
        median: quantile_sorted(&v, 0.5),
        q3,
        lower_whisker,
        upper_whisker,
        outliers,
    })
}

/// A summary with the key it was grouped by (maturity in years, or a bin's
/// representative moneyness).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub key: f64,
    pub summary: BoxWhiskerSummary,
}

/// One summary per maturity, ascending.
pub fn summarize_by_maturity(surface: &ImpliedYieldSurface) -> Vec<GroupSummary> {
    surface
        .by_maturity()
        .into_iter()
        .map(|(ttm, group)| {
            let ys: Vec<f64> = group.iter().map(|p| p.implied_yield).collect();
            GroupSummary {
                key: ttm,
                summary: summarize(&ys).expect("surface yields are finite"),
            }
        })
        .collect()
}

/// One summary per occupied bin, ascending by representative moneyness.
pub fn summarize_by_moneyness(binning: &MoneynessBinning) -> Vec<GroupSummary> {
    binning
        .occupied()
        .map(|b| {
            let ys: Vec<f64> = b.members.iter().map(|m| m.implied_yield).collect();
            GroupSummary {
                key: b.representative.expect("occupied bins have a representative"),
                summary: summarize(&ys).expect("surface yields are finite"),
            }
        })
        .collect()
}

/// CSV `group,q1,median,q3,lo_whisker,hi_whisker,n_outliers`.
pub fn write_summaries<W: Write>(writer: W, groups: &[GroupSummary]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["group", "q1", "median", "q3", "lo_whisker", "hi_whisker", "n_outliers"])?;
    for g in groups {
        let s = &g.summary;
        w.write_record([
            fmt_num(g.key),
            fmt_num(s.q1),
            fmt_num(s.median),
            fmt_num(s.q3),
            fmt_num(s.lower_whisker),
            fmt_num(s.upper_whisker),
            s.outliers.len().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Outlier sidecar, CSV `group,value`.
pub fn write_outliers<W: Write>(writer: W, groups: &[GroupSummary]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["group", "value"])?;
    for g in groups {
        for &o in &g.summary.outliers {
            w.write_record([fmt_num(g.key), fmt_num(o)])?;
        }
    }
    w.flush()?;
    Ok(())
}
