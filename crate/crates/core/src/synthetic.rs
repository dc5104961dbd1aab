//! A synthetic market with a known risk-neutral measure.
//!
//! Option chains are priced with Black–Scholes under a constant short rate,
//! so every noise-free put/call pair recovers that rate exactly through
//! parity. Zero bonds are priced independently by simulating the short rate
//! and averaging the discount factor `exp(−∫ r ds)` over paths. When both
//! routes agree, bonds and options are priced under one measure.

use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market_data::{year_fraction, OptionKind, OptionQuote, SpotQuote};

#[derive(Debug, Error, PartialEq)]
pub enum SyntheticError {
    #[error("invalid model: {0}")]
    InvalidModel(&'static str),
    #[error("option chains need a constant short rate")]
    NonConstantRate,
    #[error("maturity must be after valuation time (t={t}, T={maturity})")]
    BadHorizon { t: f64, maturity: f64 },
    #[error("need at least {min} paths, got {got}")]
    TooFewPaths { min: usize, got: usize },
    #[error("step count must be positive")]
    NoSteps,
    #[error("invalid noise spec: {0}")]
    InvalidNoise(&'static str),
}

pub const MIN_PATHS: usize = 100;
pub const STEPS_PER_YEAR: usize = 252;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VasicekParams {
    /// Mean-reversion speed.
    pub a: f64,
    /// Long-run level.
    pub b: f64,
    pub sigma: f64,
    pub r0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ShortRateModel {
    Constant { rate: f64 },
    /// `dr = a(b − r) dt + σ dW` under the pricing measure.
    Vasicek(VasicekParams),
}

impl ShortRateModel {
    pub fn validate(&self) -> Result<(), SyntheticError> {
        match *self {
            ShortRateModel::Constant { rate } if !rate.is_finite() => {
                Err(SyntheticError::InvalidModel("rate must be finite"))
            }
            ShortRateModel::Vasicek(p) if !(p.a > 0.0) => {
                Err(SyntheticError::InvalidModel("mean reversion must be positive"))
            }
            ShortRateModel::Vasicek(p) if !(p.sigma >= 0.0) => {
                Err(SyntheticError::InvalidModel("rate volatility must be non-negative"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquityModel {
    pub spot: f64,
    pub volatility: f64,
    /// Real-world drift. Pricing never uses it; it only fixes the market
    /// price of risk.
    pub drift: f64,
}

impl EquityModel {
    pub fn validate(&self) -> Result<(), SyntheticError> {
        if !(self.spot > 0.0) {
            return Err(SyntheticError::InvalidModel("spot must be positive"));
        }
        if !(self.volatility > 0.0) {
            return Err(SyntheticError::InvalidModel("volatility must be positive"));
        }
        Ok(())
    }

    /// `(μ − r) / σ`, the drift change between real-world and pricing measures.
    pub fn market_price_of_risk(&self, rate: f64) -> f64 {
        (self.drift - rate) / self.volatility
    }
}

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Black–Scholes price of a European option on a non-dividend asset.
pub fn bs_price(kind: OptionKind, spot: f64, strike: f64, rate: f64, vol: f64, tau: f64) -> f64 {
    let sd = vol * tau.sqrt();
    let d1 = ((spot / strike).ln() + (rate + 0.5 * vol * vol) * tau) / sd;
    let d2 = d1 - sd;
    let df = (-rate * tau).exp();
    match kind {
        OptionKind::Call => spot * norm_cdf(d1) - strike * df * norm_cdf(d2),
        OptionKind::Put => strike * df * norm_cdf(-d2) - spot * norm_cdf(-d1),
    }
}

/// How stale quotes are priced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum StaleModel {
    /// Priced off an earlier spot `S0·(1 − max_shift·u)`, `u ~ U(0, 1]`.
    ShiftedSpot { max_shift: f64 },
    /// Fresh price plus an error of `S0·scale·u·|M − 1|`, `u ~ U[0.5, 1]`,
    /// signed so that the parity discount factor rises.
    MoneynessProportional { scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Absolute half-width of the bid/ask around the quoted price.
    pub half_spread: f64,
    /// Probability that a quote on `stale_leg` is stale.
    pub stale_fraction: f64,
    pub stale_leg: OptionKind,
    pub stale: StaleModel,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        NoiseSpec {
            half_spread: 0.0,
            stale_fraction: 0.0,
            stale_leg: OptionKind::Put,
            stale: StaleModel::ShiftedSpot { max_shift: 0.0 },
            seed: 0,
        }
    }

    fn validate(&self) -> Result<(), SyntheticError> {
        if !(self.half_spread >= 0.0) {
            return Err(SyntheticError::InvalidNoise("half spread must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.stale_fraction) {
            return Err(SyntheticError::InvalidNoise("stale fraction must be in [0, 1]"));
        }
        Ok(())
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec::none()
    }
}

/// Where quotes are generated: one strike `M·S0` per moneyness per maturity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainGrid {
    pub trade_date: NaiveDate,
    /// Calendar days to expiry.
    pub maturities_days: Vec<u32>,
    pub moneyness: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticChain {
    pub spot: SpotQuote,
    pub quotes: Vec<OptionQuote>,
    pub ground_truth_rate: f64,
    /// `(ttm_years, exp(−r·ttm))` per maturity.
    pub discount_factors: Vec<(f64, f64)>,
    pub stale_quotes: usize,
}

/// Generates a Black–Scholes option chain under a constant short rate.
pub fn generate_chain(
    equity: &EquityModel,
    rate: &ShortRateModel,
    grid: &ChainGrid,
    noise: &NoiseSpec,
) -> Result<SyntheticChain, SyntheticError> {
    equity.validate()?;
    rate.validate()?;
    noise.validate()?;
    let ShortRateModel::Constant { rate: r } = *rate else {
        return Err(SyntheticError::NonConstantRate);
    };
    if grid.moneyness.iter().any(|m| !(*m > 0.0)) {
        return Err(SyntheticError::InvalidModel("moneyness must be positive"));
    }
    if grid.maturities_days.contains(&0) {
        return Err(SyntheticError::InvalidModel("maturities must be at least one day"));
    }

    let s0 = equity.spot;
    let vol = equity.volatility;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut quotes = Vec::with_capacity(2 * grid.maturities_days.len() * grid.moneyness.len());
    let mut discount_factors = Vec::new();
    let mut stale_quotes = 0;

    let mut days = grid.maturities_days.clone();
    days.sort_unstable();
    days.dedup();
    for d in days {
        let expiry = grid.trade_date + Days::new(u64::from(d));
        let tau = year_fraction(grid.trade_date, expiry);
        discount_factors.push((tau, (-r * tau).exp()));
        for &m in &grid.moneyness {
            let strike = m * s0;
            for kind in [OptionKind::Call, OptionKind::Put] {
                let mut price = bs_price(kind, s0, strike, r, vol, tau);
                // Draws happen for every quote so the stream layout does not
                // depend on which leg is contaminated.
                let stale_draw: f64 = rng.random();
                let u: f64 = 1.0 - rng.random::<f64>();
                if kind == noise.stale_leg && stale_draw < noise.stale_fraction {
                    stale_quotes += 1;
                    price = match noise.stale {
                        StaleModel::ShiftedSpot { max_shift } => {
                            bs_price(kind, s0 * (1.0 - max_shift * u), strike, r, vol, tau)
                        }
                        StaleModel::MoneynessProportional { scale } => {
                            let err = s0 * scale * (0.5 + 0.5 * u) * (m - 1.0).abs();
                            match kind {
                                OptionKind::Put => price + err,
                                OptionKind::Call => (price - err).max(0.0),
                            }
                        }
                    };
                }
                let h = noise.half_spread;
                let (bid, ask) = if h == 0.0 {
                    (price, price)
                } else if price > h {
                    (price - h, price + h)
                } else {
                    (0.0, price + h)
                };
                quotes.push(OptionQuote {
                    trade_date: grid.trade_date,
                    expiry,
                    strike,
                    kind,
                    bid,
                    ask,
                    last: price,
                    volume: 0,
                    open_interest: 0,
                });
            }
        }
    }
    Ok(SyntheticChain {
        spot: SpotQuote {
            trade_date: grid.trade_date,
            spot: s0,
        },
        quotes,
        ground_truth_rate: r,
        discount_factors,
        stale_quotes,
    })
}

/// Closed-form Vasicek zero-bond price `A(τ)·exp(−B(τ)·r0)`.
pub fn vasicek_bond_analytic(p: &VasicekParams, tau: f64) -> f64 {
    if tau == 0.0 {
        return 1.0;
    }
    let b_tau = (1.0 - (-p.a * tau).exp()) / p.a;
    let s2 = p.sigma * p.sigma;
    let ln_a = (b_tau - tau) * (p.a * p.a * p.b - 0.5 * s2) / (p.a * p.a) - s2 * b_tau * b_tau / (4.0 * p.a);
    (ln_a - b_tau * p.r0).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub price: f64,
    pub stderr: f64,
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Mean and standard error, summed pairwise around the first sample so that
/// identical samples give an exact mean and zero error.
fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let shift = samples[0];
    let dev: Vec<f64> = samples.iter().map(|x| x - shift).collect();
    let sq: Vec<f64> = dev.iter().map(|d| d * d).collect();
    let s1 = pairwise_sum(&dev);
    let s2 = pairwise_sum(&sq);
    let var = ((s2 - s1 * s1 / n) / (n - 1.0)).max(0.0);
    (shift + s1 / n, (var / n).sqrt())
}

/// Monte Carlo price of a unit zero bond, `E[exp(−∫_t^T r_s ds)]`.
///
/// Vasicek paths use Euler steps with the integral taken by the trapezoid
/// rule. Path `i` draws from its own ChaCha stream `i` under `seed`, so the
/// estimate is identical however the paths are scheduled.
pub fn mc_zero_bond(
    model: &ShortRateModel,
    t: f64,
    maturity: f64,
    paths: usize,
    steps: usize,
    seed: u64,
) -> Result<McEstimate, SyntheticError> {
    model.validate()?;
    if !(maturity > t) {
        return Err(SyntheticError::BadHorizon { t, maturity });
    }
    if paths < MIN_PATHS {
        return Err(SyntheticError::TooFewPaths {
            min: MIN_PATHS,
            got: paths,
        });
    }
    if steps == 0 {
        return Err(SyntheticError::NoSteps);
    }
    let tau = maturity - t;
    let samples: Vec<f64> = match *model {
        ShortRateModel::Constant { rate } => vec![(-rate * tau).exp(); paths],
        ShortRateModel::Vasicek(p) => {
            let h = tau / steps as f64;
            let sqrt_h = h.sqrt();
            (0..paths)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    let mut r = p.r0;
                    let mut integral = 0.0;
                    for _ in 0..steps {
                        let z: f64 = rng.sample(StandardNormal);
                        let next = r + p.a * (p.b - r) * h + p.sigma * sqrt_h * z;
                        integral += 0.5 * (r + next) * h;
                        r = next;
                    }
                    (-integral).exp()
                })
                .collect()
        }
    };
    let (price, stderr) = mean_stderr(&samples);
    Ok(McEstimate {
        price,
        stderr,
        paths,
        steps,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn black_scholes_reference_values() {
        // 40-digit evaluation of the closed form.
        let c = bs_price(OptionKind::Call, 100.0, 100.0, 0.05, 0.2, 1.0);
        let p = bs_price(OptionKind::Put, 100.0, 100.0, 0.05, 0.2, 1.0);
        assert!((c - 10.450_583_572_185_567).abs() < 1e-12, "{c}");
        assert!((p - 5.573_526_022_256_968).abs() < 1e-12, "{p}");
    }

    #[test]
    fn zero_vol_limit() {
        let c = bs_price(OptionKind::Call, 100.0, 90.0, 0.0, 1e-12, 0.5);
        let p = bs_price(OptionKind::Put, 100.0, 90.0, 0.0, 1e-12, 0.5);
        assert!((c - 10.0).abs() < 1e-12);
        assert!(p.abs() < 1e-12);
    }

    #[test]
    fn vasicek_closed_form() {
        let p = VasicekParams {
            a: 0.1,
            b: 0.05,
            sigma: 0.01,
            r0: 0.03,
        };
        assert_eq!(vasicek_bond_analytic(&p, 0.0), 1.0);
        // Reference from the Gaussian integrated-rate route, 30 digits.
        assert!((vasicek_bond_analytic(&p, 1.0) - 0.969_522_098_713_838_5).abs() < 1e-14);
        let fast = VasicekParams {
            a: 1e4,
            sigma: 0.0,
            ..p
        };
        assert!((vasicek_bond_analytic(&fast, 2.0) - (-0.1f64).exp()).abs() < 1e-5);
    }

    #[test]
    fn constant_rate_bond_is_exact() {
        let m = ShortRateModel::Constant { rate: 0.05 };
        let e = mc_zero_bond(&m, 0.0, 2.0, 1000, 10, 7).unwrap();
        assert_eq!(e.price, (-0.1f64).exp());
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn noise_free_vasicek_matches_ode() {
        let p = VasicekParams {
            a: 0.5,
            b: 0.05,
            sigma: 0.0,
            r0: 0.01,
        };
        let exact = vasicek_bond_analytic(&p, 1.0);
        let coarse = mc_zero_bond(&ShortRateModel::Vasicek(p), 0.0, 1.0, 100, 50, 1).unwrap();
        let fine = mc_zero_bond(&ShortRateModel::Vasicek(p), 0.0, 1.0, 100, 500, 1).unwrap();
        assert_eq!(coarse.stderr, 0.0);
        let (e1, e2) = ((coarse.price - exact).abs(), (fine.price - exact).abs());
        assert!(e1 < 1e-4);
        // First order: ten times the steps, about a tenth of the error.
        assert!(e2 < e1 / 5.0, "{e1} {e2}");
    }

    #[test]
    fn mc_rejects_bad_inputs() {
        let m = ShortRateModel::Constant { rate: 0.05 };
        assert!(matches!(
            mc_zero_bond(&m, 1.0, 1.0, 1000, 10, 0),
            Err(SyntheticError::BadHorizon { .. })
        ));
        assert!(matches!(
            mc_zero_bond(&m, 0.0, 1.0, 10, 10, 0),
            Err(SyntheticError::TooFewPaths { .. })
        ));
        assert_eq!(mc_zero_bond(&m, 0.0, 1.0, 1000, 0, 0), Err(SyntheticError::NoSteps));
        let bad = ShortRateModel::Vasicek(VasicekParams {
            a: 0.0,
            b: 0.05,
            sigma: 0.01,
            r0: 0.03,
        });
        assert!(mc_zero_bond(&bad, 0.0, 1.0, 1000, 10, 0).is_err());
    }

    #[test]
    fn market_price_of_risk() {
        let eq = EquityModel {
            spot: 100.0,
            volatility: 0.2,
            drift: 0.08,
        };
        assert!((eq.market_price_of_risk(0.03) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn chain_needs_constant_rate() {
        let eq = EquityModel {
            spot: 100.0,
            volatility: 0.2,
            drift: 0.05,
        };
        let grid = ChainGrid {
            trade_date: "2024-10-09".parse().unwrap(),
            maturities_days: vec![30],
            moneyness: vec![1.0],
        };
        let vasicek = ShortRateModel::Vasicek(VasicekParams {
            a: 0.1,
            b: 0.05,
            sigma: 0.01,
            r0: 0.03,
        });
        assert_eq!(
            generate_chain(&eq, &vasicek, &grid, &NoiseSpec::none()),
            Err(SyntheticError::NonConstantRate)
        );
    }
}
