//! Acceptance suite.
//!
//! Runs every criterion, prints one `PASS`/`FAIL` line for each and exits
//! non-zero if any failed. All tolerances are pinned below.

use std::cell::Cell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use parity_curve::aggregation::{atm_curve, bin_by_moneyness, dislocation, median_curve, DEFAULT_ATM_TOLERANCE};
use parity_curve::curves::{fit_pchip, Pchip, FLOOR_MATURITY};
use parity_curve::market_data::{
    fill_missing_date, pair_contracts, read_option_chain, read_par_yields, write_option_chain, CurvePoint,
    IngestConfig, OptionKind, ParYieldCurve, PriceRule, PutCallPair,
};
use parity_curve::parity::{build_surface, classify_sign, discount_factor, implied_yield, ClusterRule, SignClass};
use parity_curve::stats::summarize_by_moneyness;
use parity_curve::synthetic::{
    generate_chain, mc_zero_bond, vasicek_bond_analytic, ChainGrid, EquityModel, NoiseSpec, ShortRateModel,
    StaleModel, VasicekParams, STEPS_PER_YEAR,
};

// 1. Flat-rate round trip.
const FLAT_RATE: f64 = 0.03;
const FLAT_MAX_ERROR: f64 = 1e-10;
const FLAT_MIN_PAIRS: usize = 500;
const FLAT_RUNTIME: Duration = Duration::from_secs(1);

// 2. Single pricing measure.
const EMM_PATHS: usize = 100_000;
const EMM_MAX_ERROR: f64 = 1e-10;
const EMM_SIGMAS: f64 = 3.0;
const EMM_RUNTIME: Duration = Duration::from_secs(10);

// 3. Vasicek oracle.
const VASICEK: VasicekParams = VasicekParams {
    a: 0.1,
    b: 0.05,
    sigma: 0.01,
    r0: 0.03,
};
const VASICEK_PATHS: usize = 100_000;
const VASICEK_STEPS: usize = 252;
const VASICEK_SEED: u64 = 1;
const VASICEK_SIGMAS: f64 = 3.0;
const VASICEK_MAX_STDERR: f64 = 5e-5;
const VASICEK_RUNTIME: Duration = Duration::from_secs(10);
// Calibration across seeds, so the pinned seed is not the whole story.
const CALIBRATION_SEEDS: u64 = 20;
const CALIBRATION_MIN_WITHIN: usize = 19;
const CALIBRATION_MAX_MEAN_Z: f64 = 1.0;

// 4. PCHIP.
const PCHIP_SETS: u32 = 1_000;
const PCHIP_KNOT_TOL: f64 = 1e-14;
const PCHIP_C1_TOL: f64 = 1e-8;
const PCHIP_FD_STEP: f64 = 1e-6;
const PCHIP_OVERSHOOT_TOL: f64 = 1e-15;

// 5. Sign coherence.
const SIGN_PAIRS: u32 = 10_000;

// 6. Contamination.
const CONTAMINATION_CASES: u32 = 256;
const CONTAMINATION_BINS: usize = 25;
const CONTAMINATION_MAX_OFFSET: f64 = 0.0025;
const ATM_BEATS_MEDIAN_SHARE: f64 = 0.9;

const MATURITIES: [u32; 14] = [7, 14, 21, 30, 44, 73, 101, 164, 255, 437, 801, 1165, 1529, 1825];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn trade_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 10, 9).unwrap()
}

fn equity() -> EquityModel {
    EquityModel {
        spot: 100.0,
        volatility: 0.2,
        drift: 0.07,
    }
}

fn moneyness_grid(offset: f64) -> Vec<f64> {
    (0..25).map(|i| 0.7 + 0.025 * f64::from(i) + offset).collect()
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn flat_rate_round_trip() -> Outcome {
    let start = Instant::now();
    let mut days: Vec<u32> = (7..=1825).step_by(7).collect();
    days.push(1825);
    let grid = ChainGrid {
        trade_date: trade_date(),
        maturities_days: days,
        moneyness: moneyness_grid(0.0),
    };
    let chain = generate_chain(&equity(), &ShortRateModel::Constant { rate: FLAT_RATE }, &grid, &NoiseSpec::none())
        .map_err(|e| e.to_string())?;
    let mut file = Vec::new();
    write_option_chain(&mut file, &[chain.spot], &chain.quotes).map_err(|e| e.to_string())?;
    let loaded = read_option_chain(file.as_slice(), &IngestConfig { strict: true }).map_err(|e| e.to_string())?;
    let pairs = pair_contracts(&loaded.quotes, loaded.spots[0], PriceRule::Mid).pairs;
    let surface = build_surface(&pairs, ClusterRule::default()).map_err(|e| e.to_string())?.surface;
    let elapsed = start.elapsed();

    let worst = surface
        .points
        .iter()
        .map(|p| (p.implied_yield - FLAT_RATE).abs())
        .fold(0.0, f64::max);
    check(surface.points.len() >= FLAT_MIN_PAIRS, || format!("only {} pairs", surface.points.len()))?;
    check(surface.points.len() == pairs.len(), || "pairs lost to diagnostics".into())?;
    check(worst <= FLAT_MAX_ERROR, || format!("max |Y - r| = {worst:e}"))?;
    within_time(elapsed, FLAT_RUNTIME)?;
    Ok(format!("{} pairs, max |Y - r| = {worst:.1e}, {elapsed:.2?}", surface.points.len()))
}

fn single_measure() -> Outcome {
    let start = Instant::now();
    let grid = ChainGrid {
        trade_date: trade_date(),
        maturities_days: MATURITIES.to_vec(),
        moneyness: moneyness_grid(0.0),
    };
    let rate = ShortRateModel::Constant { rate: FLAT_RATE };
    let chain = generate_chain(&equity(), &rate, &grid, &NoiseSpec::none()).map_err(|e| e.to_string())?;
    let surface = build_surface(&pair_contracts(&chain.quotes, chain.spot, PriceRule::Mid).pairs, ClusterRule::default())
        .map_err(|e| e.to_string())?
        .surface;
    let mut worst: f64 = 0.0;
    for (tau, group) in surface.by_maturity() {
        let steps = (STEPS_PER_YEAR as f64 * tau).ceil() as usize;
        let mc = mc_zero_bond(&rate, 0.0, tau, EMM_PATHS, steps, 0).map_err(|e| e.to_string())?;
        check(mc.stderr == 0.0, || format!("stderr {} at tau {tau}", mc.stderr))?;
        for p in group {
            let err = (p.discount_factor - mc.price).abs();
            check(err <= EMM_SIGMAS * mc.stderr + EMM_MAX_ERROR, || {
                format!("tau {tau}, K {}: parity {} vs bond {}", p.strike, p.discount_factor, mc.price)
            })?;
            worst = worst.max(err);
        }
    }
    let elapsed = start.elapsed();
    within_time(elapsed, EMM_RUNTIME)?;
    Ok(format!(
        "{} maturities x {} strikes, stderr 0, max |parity - bond| = {worst:.1e}, {elapsed:.2?}",
        MATURITIES.len(),
        25
    ))
}

fn vasicek_oracle() -> Outcome {
    let model = ShortRateModel::Vasicek(VASICEK);
    let exact = vasicek_bond_analytic(&VASICEK, 1.0);
    let start = Instant::now();
    let mc = mc_zero_bond(&model, 0.0, 1.0, VASICEK_PATHS, VASICEK_STEPS, VASICEK_SEED).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let z = (mc.price - exact) / mc.stderr;
    check(z.abs() <= VASICEK_SIGMAS, || format!("price {} vs {exact}: z = {z:.2}", mc.price))?;
    check(mc.stderr < VASICEK_MAX_STDERR, || format!("stderr {}", mc.stderr))?;
    within_time(elapsed, VASICEK_RUNTIME)?;

    let mut zs = Vec::new();
    for seed in 0..CALIBRATION_SEEDS {
        let m = mc_zero_bond(&model, 0.0, 1.0, VASICEK_PATHS, VASICEK_STEPS, seed).map_err(|e| e.to_string())?;
        zs.push((m.price - exact) / m.stderr);
    }
    let within = zs.iter().filter(|z| z.abs() <= VASICEK_SIGMAS).count();
    let mean_z = zs.iter().sum::<f64>() / zs.len() as f64;
    check(within >= CALIBRATION_MIN_WITHIN, || format!("{within}/{CALIBRATION_SEEDS} seeds within 3 SE: {zs:.2?}"))?;
    check(mean_z.abs() < CALIBRATION_MAX_MEAN_Z, || format!("mean z {mean_z:.2} over seeds"))?;
    Ok(format!(
        "price {:.10} vs {exact:.10}, z = {z:.2}, stderr {:.2e}, {elapsed:.2?}; seeds 0..{CALIBRATION_SEEDS}: {within} within 3 SE, mean z {mean_z:.2}",
        mc.price, mc.stderr
    ))
}

fn monotone_knots() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..14)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(1.0f64 / 12.0..5.0, n - 1),
                0.0f64..0.05,
                prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0f64..0.01], n - 1),
                any::<bool>(),
            )
        })
        .prop_map(|(gaps, y0, steps, rising)| {
            let mut xs = vec![1.0 / 12.0];
            let mut ys = vec![y0];
            for (g, s) in gaps.iter().zip(&steps) {
                xs.push(xs[xs.len() - 1] + g);
                ys.push(ys[ys.len() - 1] + if rising { *s } else { -*s });
            }
            (xs, ys)
        })
}

fn pchip_suite() -> Outcome {
    let worst_knot = Cell::new(0.0f64);
    let worst_c1 = Cell::new(0.0f64);
    let sets = Cell::new(0u32);
    let result = runner(PCHIP_SETS).run(&monotone_knots(), |(xs, ys)| {
        sets.set(sets.get() + 1);
        let p = Pchip::new(xs.clone(), ys.clone()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for (x, y) in xs.iter().zip(&ys) {
            let e = (p.evaluate(*x) - y).abs();
            worst_knot.set(worst_knot.get().max(e));
            prop_assert!(e <= PCHIP_KNOT_TOL, "knot error {} at {}", e, x);
        }
        let h = PCHIP_FD_STEP;
        for &x in &xs[1..xs.len() - 1] {
            let f = |t: f64| p.evaluate(t);
            let left = (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h);
            let right = (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
            let analytic = (p.derivative_left(x) - p.derivative_right(x)).abs();
            let m = (left - right).abs().max(analytic);
            worst_c1.set(worst_c1.get().max(m));
            prop_assert!(m <= PCHIP_C1_TOL, "C1 mismatch {} at {}", m, x);
        }
        for i in 0..xs.len() - 1 {
            let (lo, hi) = (ys[i].min(ys[i + 1]), ys[i].max(ys[i + 1]));
            for k in 0..=100 {
                let x = xs[i] + (xs[i + 1] - xs[i]) * f64::from(k) / 100.0;
                let v = p.evaluate(x);
                prop_assert!(
                    v >= lo - PCHIP_OVERSHOOT_TOL && v <= hi + PCHIP_OVERSHOOT_TOL,
                    "overshoot {} outside [{}, {}] at {}",
                    v,
                    lo,
                    hi,
                    x
                );
            }
        }
        Ok(())
    });
    result.map_err(|e| e.to_string())?;

    // Below one month the market rate is the one-month rate, bit for bit.
    let months = [1.0, 2.0, 3.0, 4.0, 6.0, 12.0, 24.0, 36.0, 60.0, 84.0, 120.0, 240.0, 360.0];
    let rates = [4.96, 4.87, 4.74, 4.66, 4.50, 4.24, 4.01, 3.91, 3.88, 3.96, 4.06, 4.38, 4.35];
    let par = ParYieldCurve {
        curve_date: trade_date(),
        points: months
            .iter()
            .zip(rates)
            .map(|(m, r)| CurvePoint {
                maturity: m / 12.0,
                rate: r / 100.0,
            })
            .collect(),
        complete: true,
    };
    let curve = fit_pchip(&par).map_err(|e| e.to_string())?;
    let one_month = par.points[0].rate;
    for days in [1.0, 7.0, 10.0, 20.0, 30.0] {
        let r = curve.market_rate(days / 365.0);
        check(r.to_bits() == one_month.to_bits(), || format!("{days} days: {r} != {one_month}"))?;
    }
    check(curve.market_rate(FLOOR_MATURITY) == one_month, || "floor maturity".into())?;
    Ok(format!(
        "{} monotone sets: max knot error {:.1e}, max C1 mismatch {:.1e}, no overshoot; sub-month floor exact",
        sets.get(),
        worst_knot.get(),
        worst_c1.get()
    ))
}

fn valid_pair() -> impl Strategy<Value = PutCallPair> {
    let general = (10.0f64..5000.0, 0.5f64..1.5, 1u64..3650, 0.6f64..1.4, 0.0f64..1.0).prop_map(
        |(spot, m, days, df, put_frac)| {
            let strike = m * spot;
            let mut put = put_frac * strike;
            let mut call = spot + put - df * strike;
            if call < 0.0 {
                put -= call;
                call = 0.0;
            }
            PutCallPair::new(trade_date(), trade_date() + chrono::Days::new(days), strike, call, put, spot)
        },
    );
    // Whole-dollar prices make S + P and K + C exact, so parity can hold
    // with equality and the zero class gets exercised.
    let whole = (150u32..5000, 0u32..200, 0u32..300, 1u64..3650, -1i32..=1).prop_map(|(spot, strike_off, call, days, skew)| {
        let strike = f64::from(spot) - 100.0 + f64::from(strike_off);
        let spot = f64::from(spot);
        let call = f64::from(call);
        let put = (strike + call - spot + f64::from(skew)).max(0.0);
        PutCallPair::new(trade_date(), trade_date() + chrono::Days::new(days), strike, call, put, spot)
    });
    prop_oneof![3 => general, 1 => whole]
}

fn sign_coherence() -> Outcome {
    let (n, zero, neg) = (Cell::new(0u32), Cell::new(0u32), Cell::new(0u32));
    let result = runner(SIGN_PAIRS).run(&valid_pair(), |pair| {
        let df = discount_factor(&pair);
        prop_assume!(df > 0.0);
        n.set(n.get() + 1);
        let y = implied_yield(df, pair.ttm_years).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let class = classify_sign(&pair);
        match class {
            SignClass::Zero => zero.set(zero.get() + 1),
            SignClass::Negative => neg.set(neg.get() + 1),
            SignClass::Positive => {}
        }
        prop_assert!(class.agrees_with(y), "{:?} vs Y = {:e} for {:?}", class, y, pair);
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    let n = n.get();
    check(n >= SIGN_PAIRS, || format!("only {n} valid pairs"))?;
    Ok(format!("{n} pairs agree ({} zero, {} negative)", zero.get(), neg.get()))
}

fn flat_market(rate: f64) -> parity_curve::curves::InterpolatedCurve {
    let months = [1.0, 2.0, 3.0, 4.0, 6.0, 12.0, 24.0, 36.0, 60.0, 84.0, 120.0, 240.0, 360.0];
    let par = ParYieldCurve {
        curve_date: trade_date(),
        points: months.iter().map(|m| CurvePoint { maturity: m / 12.0, rate }).collect(),
        complete: true,
    };
    fit_pchip(&par).unwrap()
}

/// Every put carries a price error proportional to |M - 1|, on a 0.70-1.30
/// grid shifted by a small offset so the ATM strike is not exactly at M = 1.
fn contamination() -> Outcome {
    let strategy = (
        any::<u64>(),
        -CONTAMINATION_MAX_OFFSET..=CONTAMINATION_MAX_OFFSET,
        0.01f64..0.2,
        0.1f64..0.4,
        0.0f64..0.06,
    );
    let worst_share = Cell::new(1.0f64);
    let cases = Cell::new(0u32);
    let result = runner(CONTAMINATION_CASES).run(&strategy, |(seed, offset, scale, vol, r)| {
        cases.set(cases.get() + 1);
        let noise = NoiseSpec {
            half_spread: 0.0,
            stale_fraction: 1.0,
            stale_leg: OptionKind::Put,
            stale: StaleModel::MoneynessProportional { scale },
            seed,
        };
        let grid = ChainGrid {
            trade_date: trade_date(),
            maturities_days: MATURITIES.to_vec(),
            moneyness: moneyness_grid(offset),
        };
        let eq = EquityModel { volatility: vol, ..equity() };
        let chain = generate_chain(&eq, &ShortRateModel::Constant { rate: r }, &grid, &noise)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let pairs = pair_contracts(&chain.quotes, chain.spot, PriceRule::Mid).pairs;
        let surface = build_surface(&pairs, ClusterRule::default())
            .map_err(|e| TestCaseError::fail(e.to_string()))?
            .surface;

        let groups = summarize_by_moneyness(&bin_by_moneyness(&surface, CONTAMINATION_BINS).unwrap());
        let atm = groups
            .iter()
            .min_by(|a, b| (a.key - 1.0).abs().total_cmp(&(b.key - 1.0).abs()))
            .unwrap();
        for g in &groups {
            if g.key != atm.key {
                prop_assert!(
                    g.summary.iqr() > atm.summary.iqr(),
                    "bin {} IQR {} <= ATM bin {} IQR {}",
                    g.key,
                    g.summary.iqr(),
                    atm.key,
                    atm.summary.iqr()
                );
            }
        }

        let market = flat_market(r);
        let d_med = dislocation(&median_curve(&surface).unwrap(), &market);
        let d_atm = dislocation(&atm_curve(&surface, DEFAULT_ATM_TOLERANCE).unwrap(), &market);
        let mut wins = 0;
        for m in &d_med.points {
            if let Some(a) = d_atm.points.iter().find(|a| a.ttm_years == m.ttm_years) {
                if a.delta.abs() <= m.delta.abs() {
                    wins += 1;
                }
            }
        }
        let share = f64::from(wins) / d_med.points.len() as f64;
        worst_share.set(worst_share.get().min(share));
        prop_assert!(share >= ATM_BEATS_MEDIAN_SHARE, "ATM beats median at only {:.0}% of maturities", share * 100.0);
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    Ok(format!(
        "{} contaminated chains: M~1 bin has the strictly smallest IQR in all; |dATM| <= |dmed| at >= {:.0}% of maturities",
        cases.get(),
        worst_share.get() * 100.0
    ))
}

fn holiday_gap_fill() -> Outcome {
    let text = std::fs::read_to_string(data_dir().join("par_yields.csv")).map_err(|e| e.to_string())?;
    let load = read_par_yields(text.as_bytes()).map_err(|e| e.to_string())?;
    let day = |d: u32| NaiveDate::from_ymd_opt(2024, 10, d).unwrap();
    let before = load.curves.iter().find(|c| c.curve_date == day(11)).ok_or("no 11 Oct curve")?;
    let after = load.curves.iter().find(|c| c.curve_date == day(15)).ok_or("no 15 Oct curve")?;
    let filled = fill_missing_date(&load.curves, day(14)).map_err(|e| e.to_string())?;
    check(filled.points.len() == 13, || format!("{} tenors", filled.points.len()))?;
    for ((f, a), b) in filled.points.iter().zip(&before.points).zip(&after.points) {
        let mean = (a.rate + b.rate) / 2.0;
        check(f.maturity == a.maturity && f.rate.to_bits() == mean.to_bits(), || {
            format!("tenor {}: {} != {mean}", f.maturity, f.rate)
        })?;
    }
    Ok("14 Oct 2024 = per-tenor mean of 11 and 15 Oct at all 13 tenors, bit for bit".into())
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

fn cli(args: &[&str], threads: &str) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_parity-curve"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .env_remove("PARITY_CURVE_OUT")
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn dir_contents(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files = Vec::new();
    for e in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let e = e.map_err(|e| e.to_string())?;
        files.push((e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).map_err(|e| e.to_string())?));
    }
    files.sort();
    Ok(files)
}

fn same_outputs(a: &Path, b: &Path) -> Result<usize, String> {
    let (fa, fb) = (dir_contents(a)?, dir_contents(b)?);
    let names = |f: &[(String, Vec<u8>)]| f.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
    check(names(&fa) == names(&fb), || format!("file sets differ: {:?} vs {:?}", names(&fa), names(&fb)))?;
    for ((name, x), (_, y)) in fa.iter().zip(&fb) {
        check(x == y, || format!("{name} differs between runs"))?;
    }
    Ok(fa.len())
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |s: &str| tmp.path().join(s).to_string_lossy().into_owned();
    let synth = |out: &str, seed: &str| {
        vec![
            "synth".to_string(),
            "--trade-date".into(),
            "2024-10-14".into(),
            "--half-spread".into(),
            "0.05".into(),
            "--stale-fraction".into(),
            "0.2".into(),
            "--stale-size".into(),
            "0.01".into(),
            "--seed".into(),
            seed.into(),
            "--out-dir".into(),
            out.into(),
        ]
    };
    let run = |args: Vec<String>, threads: &str| cli(&args.iter().map(String::as_str).collect::<Vec<_>>(), threads);
    run(synth(&p("synth_a"), "7"), "1")?;
    run(synth(&p("synth_b"), "7"), "4")?;
    run(synth(&p("synth_c"), "8"), "1")?;
    let mut files = same_outputs(p("synth_a").as_ref(), p("synth_b").as_ref())?;
    check(same_outputs(p("synth_a").as_ref(), p("synth_c").as_ref()).is_err(), || {
        "a different seed produced identical output".into()
    })?;

    let chain = p("synth_a/chain.csv");
    let treasury = data_dir().join("par_yields.csv").to_string_lossy().into_owned();
    for method in ["median", "atm"] {
        for (out, threads) in [("a", "1"), ("b", "4")] {
            let dir = p(&format!("compare_{method}_{out}"));
            cli(
                &["compare", &chain, &treasury, "--method", method, "--format", "csv,json,svg", "--out-dir", &dir],
                threads,
            )?;
        }
        files += same_outputs(
            p(&format!("compare_{method}_a")).as_ref(),
            p(&format!("compare_{method}_b")).as_ref(),
        )?;
    }
    for (out, threads) in [("mc_a", "1"), ("mc_b", "4")] {
        cli(&["mc-bond", "--model", "vasicek", "--paths", "20000", "--seed", "3", "--out-dir", &p(out)], threads)?;
    }
    files += same_outputs(p("mc_a").as_ref(), p("mc_b").as_ref())?;
    Ok(format!("synth, compare (median, atm) and mc-bond reruns byte-identical across 1 and 4 threads ({files} files)"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("flat-rate round trip", flat_rate_round_trip),
        ("single pricing measure", single_measure),
        ("Vasicek oracle", vasicek_oracle),
        ("PCHIP suite", pchip_suite),
        ("sign coherence", sign_coherence),
        ("contamination narrows at M = 1", contamination),
        ("holiday gap-fill", holiday_gap_fill),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(msg)
        });
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
