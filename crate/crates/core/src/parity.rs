//! Discount factors and implied yields from put-call parity.
//!
//! For a European call/put pair on the same strike `K` and expiry `T`,
//! parity gives the zero-bond price directly:
//!
//! ```text
//! Λ(t, T, K) = (S_t + P − C) / K
//! Y(t, T, K) = −ln Λ / (T − t)
//! ```
//!
//! `Y > 0` exactly when `S + P < K + C` and `Y < 0` when `S + P > K + C`.

use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market_data::{PutCallPair, DAYS_PER_YEAR};

/// Implied yields within this distance of zero are classed as zero.
pub const ZERO_YIELD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ParityError {
    #[error("non-positive discount factor {0}")]
    NonPositiveDiscountFactor(f64),
    #[error("non-positive time to maturity {0}")]
    NonPositiveMaturity(f64),
    #[error("no pairs to build a surface from")]
    Empty,
    #[error("no valid pairs: every discount factor was non-positive")]
    NoValidPairs,
    #[error("pairs span several trade dates ({0} and {1})")]
    MixedTradeDates(NaiveDate, NaiveDate),
    #[error("cluster split needs at least one maturity")]
    NoMaturities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Positive,
    Negative,
    Zero,
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignClass::Positive => "positive",
            SignClass::Negative => "negative",
            SignClass::Zero => "zero",
        })
    }
}

impl SignClass {
    /// Whether `yield_` is consistent with this class.
    pub fn agrees_with(self, yield_: f64) -> bool {
        let near_zero = yield_.abs() <= ZERO_YIELD_TOLERANCE;
        match self {
            SignClass::Zero => near_zero,
            SignClass::Positive => yield_ > 0.0 || near_zero,
            SignClass::Negative => yield_ < 0.0 || near_zero,
        }
    }
}

/// Parity discount factor `(S + P − C) / K`. May be non-positive on bad
/// quotes; callers decide what to do with those.
pub fn discount_factor(pair: &PutCallPair) -> f64 {
    (pair.spot + pair.put_price - pair.call_price) / pair.strike
}

/// Continuously compounded yield `−ln(df) / ttm`.
pub fn implied_yield(df: f64, ttm_years: f64) -> Result<f64, ParityError> {
    if !(df > 0.0) {
        return Err(ParityError::NonPositiveDiscountFactor(df));
    }
    if !(ttm_years > 0.0) {
        return Err(ParityError::NonPositiveMaturity(ttm_years));
    }
    Ok(-df.ln() / ttm_years)
}

/// Sign regime from the raw prices, compared exactly.
pub fn classify_sign(pair: &PutCallPair) -> SignClass {
    let lhs = pair.spot + pair.put_price;
    let rhs = pair.strike + pair.call_price;
    if lhs < rhs {
        SignClass::Positive
    } else if lhs > rhs {
        SignClass::Negative
    } else {
        SignClass::Zero
    }
}

/// How a surface's maturities are split into short- and long-term groups.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum ClusterRule {
    /// Split at the gap that is largest relative to the gap before it.
    /// Finds where the dense run of short-dated expiries ends even when
    /// the long-dated tail has wider absolute gaps.
    #[default]
    RelativeGap,
    /// Split at the midpoint of the widest gap between sorted maturities.
    LargestGap,
    /// Fixed boundary in calendar days.
    Fixed { days: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cluster {
    Short,
    Long,
}

impl fmt::Display for Cluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cluster::Short => "short",
            Cluster::Long => "long",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterSplit {
    /// Year fraction; maturities `<=` this are short-term.
    pub boundary: f64,
    /// Set when only one distinct maturity was present.
    pub degenerate: bool,
}

/// Finds the short/long boundary for a set of maturities (year fractions).
pub fn split_clusters(maturities: &[f64], rule: ClusterRule) -> Result<ClusterSplit, ParityError> {
    if let ClusterRule::Fixed { days } = rule {
        return Ok(ClusterSplit {
            boundary: days / DAYS_PER_YEAR,
            degenerate: false,
        });
    }
    let mut m: Vec<f64> = maturities.to_vec();
    m.sort_by(f64::total_cmp);
    m.dedup();
    match m.len() {
        0 => return Err(ParityError::NoMaturities),
        1 => {
            return Ok(ClusterSplit {
                boundary: m[0] + 1.0 / DAYS_PER_YEAR,
                degenerate: true,
            })
        }
        _ => {}
    }
    let gaps: Vec<f64> = m.windows(2).map(|w| w[1] - w[0]).collect();
    let score = |i: usize| match rule {
        ClusterRule::LargestGap => gaps[i],
        _ if i == 0 => 1.0,
        _ => gaps[i] / gaps[i - 1],
    };
    // Strictly greater keeps the earliest gap on ties.
    let mut best = 0;
    for i in 1..gaps.len() {
        if score(i) > score(best) {
            best = i;
        }
    }
    Ok(ClusterSplit {
        boundary: 0.5 * (m[best] + m[best + 1]),
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpliedYieldPoint {
    pub ttm_years: f64,
    pub strike: f64,
    pub moneyness: f64,
    pub discount_factor: f64,
    pub implied_yield: f64,
    pub sign_class: SignClass,
}

/// A pair whose discount factor was non-positive.
#[derive(Debug, Clone, PartialEq)]
pub struct InvalidPair {
    pub pair: PutCallPair,
    pub discount_factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpliedYieldSurface {
    pub trade_date: NaiveDate,
    pub spot: f64,
    /// Sorted by (ttm, strike).
    pub points: Vec<ImpliedYieldPoint>,
    pub cluster_boundary: f64,
}

impl ImpliedYieldSurface {
    pub fn cluster_of(&self, ttm_years: f64) -> Cluster {
        if ttm_years <= self.cluster_boundary {
            Cluster::Short
        } else {
            Cluster::Long
        }
    }

    /// The points on one side of the boundary, as a surface of their own.
    pub fn subset(&self, cluster: Cluster) -> ImpliedYieldSurface {
        ImpliedYieldSurface {
            trade_date: self.trade_date,
            spot: self.spot,
            points: self
                .points
                .iter()
                .filter(|p| self.cluster_of(p.ttm_years) == cluster)
                .cloned()
                .collect(),
            cluster_boundary: self.cluster_boundary,
        }
    }

    /// Distinct maturities in ascending order.
    pub fn maturities(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.points.iter().map(|p| p.ttm_years).collect();
        m.dedup();
        m
    }

    /// Points grouped by maturity, in ascending order.
    pub fn by_maturity(&self) -> Vec<(f64, &[ImpliedYieldPoint])> {
        self.points
            .chunk_by(|a, b| a.ttm_years == b.ttm_years)
            .map(|g| (g[0].ttm_years, g))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceBuild {
    pub surface: ImpliedYieldSurface,
    pub diagnostics: Vec<InvalidPair>,
    pub degenerate_split: bool,
}

/// Computes the implied-yield point for one pair, or the reason it has none.
pub fn yield_point(pair: &PutCallPair) -> Result<ImpliedYieldPoint, ParityError> {
    let df = discount_factor(pair);
    let y = implied_yield(df, pair.ttm_years)?;
    let sign_class = if y.abs() <= ZERO_YIELD_TOLERANCE {
        SignClass::Zero
    } else {
        classify_sign(pair)
    };
    Ok(ImpliedYieldPoint {
        ttm_years: pair.ttm_years,
        strike: pair.strike,
        moneyness: pair.moneyness,
        discount_factor: df,
        implied_yield: y,
        sign_class,
    })
}

/// Builds the implied-yield surface for one trade date.
///
/// Pairs with a non-positive discount factor are kept aside in
/// [`SurfaceBuild::diagnostics`]; `points.len() + diagnostics.len()`
/// always equals `pairs.len()`.
pub fn build_surface(pairs: &[PutCallPair], rule: ClusterRule) -> Result<SurfaceBuild, ParityError> {
    let first = pairs.first().ok_or(ParityError::Empty)?;
    if let Some(p) = pairs.iter().find(|p| p.trade_date != first.trade_date) {
        return Err(ParityError::MixedTradeDates(first.trade_date, p.trade_date));
    }
    let mut points = Vec::with_capacity(pairs.len());
    let mut diagnostics = Vec::new();
    for pair in pairs {
        match yield_point(pair) {
            Ok(p) => points.push(p),
            Err(_) => diagnostics.push(InvalidPair {
                pair: pair.clone(),
                discount_factor: discount_factor(pair),
            }),
        }
    }
    if points.is_empty() {
        return Err(ParityError::NoValidPairs);
    }
    points.sort_by(|a, b| {
        a.ttm_years
            .total_cmp(&b.ttm_years)
            .then(a.strike.total_cmp(&b.strike))
    });
    let maturities: Vec<f64> = points.iter().map(|p| p.ttm_years).collect();
    let split = split_clusters(&maturities, rule)?;
    Ok(SurfaceBuild {
        surface: ImpliedYieldSurface {
            trade_date: first.trade_date,
            spot: first.spot,
            points,
            cluster_boundary: split.boundary,
        },
        diagnostics,
        degenerate_split: split.degenerate,
    })
}
