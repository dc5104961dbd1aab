//! CSV writers for surfaces and curves, and the fixed-precision number format
//! every derived output uses.

use std::io::Write;

use crate::aggregation::{AggregatedCurve, DislocationSeries};
use crate::parity::ImpliedYieldSurface;

/// Significant digits in every derived numeric output.
pub const SIGNIFICANT_DIGITS: usize = 10;

/// Formats `x` with ten significant digits. Plain notation for magnitudes
/// in `[1e-5, 1e15)`, scientific otherwise. Zero (of either sign) is `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    // Exponent after rounding, so 9.9999999999 counts as 1e1.
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-5..15).contains(&exp) {
        return sci;
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// `x` rounded to ten significant digits.
pub fn round_sig(x: f64) -> f64 {
    fmt_num(x).parse().unwrap_or(x)
}

/// Surface CSV `ttm_years,strike,moneyness,discount_factor,implied_yield,sign_class,cluster`.
pub fn write_surface<W: Write>(writer: W, surface: &ImpliedYieldSurface) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "ttm_years",
        "strike",
        "moneyness",
        "discount_factor",
        "implied_yield",
        "sign_class",
        "cluster",
    ])?;
    for p in &surface.points {
        w.write_record([
            fmt_num(p.ttm_years),
            fmt_num(p.strike),
            fmt_num(p.moneyness),
            fmt_num(p.discount_factor),
            fmt_num(p.implied_yield),
            p.sign_class.to_string(),
            surface.cluster_of(p.ttm_years).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Aggregated curve CSV `ttm_years,value,support`.
pub fn write_aggregated<W: Write>(writer: W, curve: &AggregatedCurve) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["ttm_years", "value", "support"])?;
    for p in &curve.points {
        w.write_record([fmt_num(p.ttm_years), fmt_num(p.value), p.support.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Dislocation CSV `ttm_years,delta`.
pub fn write_dislocation<W: Write>(writer: W, series: &DislocationSeries) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["ttm_years", "delta"])?;
    for p in &series.points {
        w.write_record([fmt_num(p.ttm_years), fmt_num(p.delta)])?;
    }
    w.flush()?;
    Ok(())
}
