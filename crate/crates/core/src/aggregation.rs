//! Collapsing the strike dimension of an implied-yield surface.
//!
//! Two per-maturity reductions are provided: the median over strikes and the
//! single contract nearest the money. Both can be compared against a fitted
//! market curve with [`dislocation`].

use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::InterpolatedCurve;
use crate::parity::ImpliedYieldSurface;
use crate::stats::median;

/// Default half-width around `M = 1` for an ATM contract.
pub const DEFAULT_ATM_TOLERANCE: f64 = 0.02;
pub const DEFAULT_BIN_COUNT: usize = 25;
/// Moneyness distances closer than this are treated as equal.
pub const ATM_TIE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum AggregationError {
    #[error("surface has no points")]
    EmptySurface,
    #[error("no ATM contracts within tolerance {0}")]
    NoAtmContracts(f64),
    #[error("bin count must be at least 1")]
    ZeroBins,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationMethod {
    Median,
    Atm,
}

impl fmt::Display for AggregationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregationMethod::Median => "median",
            AggregationMethod::Atm => "atm",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregatedPoint {
    pub ttm_years: f64,
    pub value: f64,
    /// Number of strikes behind `value`.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedCurve {
    pub trade_date: NaiveDate,
    pub method: AggregationMethod,
    /// Sorted by maturity.
    pub points: Vec<AggregatedPoint>,
    /// Maturities skipped because no contract was close enough to ATM.
    pub omitted: usize,
}

/// Median implied yield over strikes at each maturity. An even number of
/// strikes averages the two central values.
pub fn median_curve(surface: &ImpliedYieldSurface) -> Result<AggregatedCurve, AggregationError> {
    if surface.points.is_empty() {
        return Err(AggregationError::EmptySurface);
    }
    let points = surface
        .by_maturity()
        .into_iter()
        .map(|(ttm, group)| {
            let ys: Vec<f64> = group.iter().map(|p| p.implied_yield).collect();
            AggregatedPoint {
                ttm_years: ttm,
                value: median(&ys),
                support: ys.len(),
            }
        })
        .collect();
    Ok(AggregatedCurve {
        trade_date: surface.trade_date,
        method: AggregationMethod::Median,
        points,
        omitted: 0,
    })
}

/// At each maturity, the yield of the strike minimizing `|M − 1|`.
///
/// Ties go to the lower strike. Maturities whose nearest contract is
/// further than `tol` from `M = 1` are dropped and counted in
/// [`AggregatedCurve::omitted`].
pub fn atm_curve(
    surface: &ImpliedYieldSurface,
    tol: f64,
) -> Result<AggregatedCurve, AggregationError> {
    if surface.points.is_empty() {
        return Err(AggregationError::EmptySurface);
    }
    let mut points = Vec::new();
    let mut omitted = 0;
    for (ttm, group) in surface.by_maturity() {
        // Groups are sorted by strike, so only a clear improvement replaces
        // the incumbent and ties keep the lower strike. Distances within
        // ATM_TIE of each other count as tied so that rounding in K/S cannot
        // flip the choice.
        let mut best = &group[0];
        for p in &group[1..] {
            if (p.moneyness - 1.0).abs() < (best.moneyness - 1.0).abs() - ATM_TIE {
                best = p;
            }
        }
        if (best.moneyness - 1.0).abs() > tol {
            omitted += 1;
            continue;
        }
        points.push(AggregatedPoint {
            ttm_years: ttm,
            value: best.implied_yield,
            support: 1,
        });
    }
    if points.is_empty() {
        return Err(AggregationError::NoAtmContracts(tol));
    }
    Ok(AggregatedCurve {
        trade_date: surface.trade_date,
        method: AggregationMethod::Atm,
        points,
        omitted,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinMember {
    pub ttm_years: f64,
    pub strike: f64,
    pub moneyness: f64,
    pub implied_yield: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoneynessBin {
    pub lower: f64,
    pub upper: f64,
    /// Median member strike over spot; `None` for an empty bin.
    pub representative: Option<f64>,
    pub members: Vec<BinMember>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoneynessBinning {
    pub trade_date: NaiveDate,
    pub spot: f64,
    /// `bins.len() + 1` ascending edges.
    pub edges: Vec<f64>,
    pub bins: Vec<MoneynessBin>,
}

impl MoneynessBinning {
    pub fn occupied(&self) -> impl Iterator<Item = &MoneynessBin> {
        self.bins.iter().filter(|b| !b.members.is_empty())
    }
}

/// Groups surface points into `bin_count` equal-width moneyness bins over
/// the observed range. Bins are half-open `[lo, hi)` except the last, which
/// is closed.
pub fn bin_by_moneyness(
    surface: &ImpliedYieldSurface,
    bin_count: usize,
) -> Result<MoneynessBinning, AggregationError> {
    if bin_count == 0 {
        return Err(AggregationError::ZeroBins);
    }
    if surface.points.is_empty() {
        return Err(AggregationError::EmptySurface);
    }
    let (lo, hi) = surface
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.moneyness), hi.max(p.moneyness))
        });
    let width = (hi - lo) / bin_count as f64;
    let mut edges: Vec<f64> = (0..bin_count).map(|i| lo + i as f64 * width).collect();
    edges.push(hi);

    let mut bins: Vec<MoneynessBin> = edges
        .windows(2)
        .map(|e| MoneynessBin {
            lower: e[0],
            upper: e[1],
            representative: None,
            members: Vec::new(),
        })
        .collect();
    for p in &surface.points {
        // Last edge whose value is <= M, capped at the final bin.
        let i = edges[..bin_count]
            .partition_point(|&e| e <= p.moneyness)
            .saturating_sub(1);
        bins[i].members.push(BinMember {
            ttm_years: p.ttm_years,
            strike: p.strike,
            moneyness: p.moneyness,
            implied_yield: p.implied_yield,
        });
    }
    for b in &mut bins {
        if !b.members.is_empty() {
            let strikes: Vec<f64> = b.members.iter().map(|m| m.strike).collect();
            b.representative = Some(median(&strikes) / surface.spot);
        }
    }
    Ok(MoneynessBinning {
        trade_date: surface.trade_date,
        spot: surface.spot,
        edges,
        bins,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DislocationPoint {
    pub ttm_years: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DislocationSeries {
    pub trade_date: NaiveDate,
    pub method: AggregationMethod,
    pub points: Vec<DislocationPoint>,
}

/// Aggregated yield minus the market rate at the same maturity.
pub fn dislocation(agg: &AggregatedCurve, curve: &InterpolatedCurve) -> DislocationSeries {
    DislocationSeries {
        trade_date: agg.trade_date,
        method: agg.method,
        points: agg
            .points
            .iter()
            .map(|p| DislocationPoint {
                ttm_years: p.ttm_years,
                delta: p.value - curve.market_rate(p.ttm_years),
            })
            .collect(),
    }
}
