//! Zero-coupon yield curves implied by put-call parity on European index
//! options, and the tools to compare them with treasury par yields.
//!
//! The pipeline for one trading day:
//!
//! 1. [`market_data`] reads an option chain and pairs calls with puts.
//! 2. [`parity`] turns every pair into a discount factor and implied yield,
//!    giving a surface over maturity and strike.
//! 3. [`aggregation`] reduces the strike dimension (median or at-the-money)
//!    and measures the gap to a market curve fitted by [`curves`].
//! 4. [`stats`] summarizes yield distributions by maturity or moneyness.
//!
//! [`synthetic`] builds markets with a known rate to check the whole chain.
//!
//! ```
//! use parity_curve::market_data::PutCallPair;
//! use parity_curve::parity::{discount_factor, implied_yield};
//!
//! let t = "2024-10-09".parse().unwrap();
//! let e = "2025-10-09".parse().unwrap();
//! let pair = PutCallPair::new(t, e, 105.0, 5.00, 7.90, 100.0);
//! let df = discount_factor(&pair);
//! assert!((df - 0.98).abs() < 1e-12);
//! let y = implied_yield(df, pair.ttm_years).unwrap();
//! assert!(y > 0.0);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aggregation;
pub mod curves;
pub mod export;
pub mod market_data;
pub mod parity;
pub mod stats;
pub mod synthetic;

// The guide under `book/` is compiled as doctests so its snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/parity.md")]
    mod parity {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/aggregation.md")]
    mod aggregation {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
    #[doc = include_str!("../../../book/src/synthetic.md")]
    mod synthetic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
