use anyhow::{anyhow, bail, Context, Result};
use chrono::NaiveDate;
use serde::Serialize;
use serde_json::json;

use parity_curve::aggregation::{
    atm_curve, bin_by_moneyness, dislocation, median_curve, AggregatedCurve, AggregationError,
    AggregationMethod, DislocationSeries,
};
use parity_curve::curves::{fit_pchip, uniform_grid, InterpolatedCurve};
use parity_curve::export::{round_sig, write_aggregated, write_dislocation, write_surface};
use parity_curve::market_data::{
    fill_missing_date, load_option_chain, load_par_yields, pair_contracts, write_option_chain,
    write_rejects, IngestConfig, OptionChain, DAYS_PER_YEAR,
};
use parity_curve::parity::{build_surface, Cluster, ImpliedYieldSurface, SignClass, SurfaceBuild};
use parity_curve::stats::{summarize_by_maturity, summarize_by_moneyness, write_outliers, write_summaries, GroupSummary};
use parity_curve::synthetic::{
    generate_chain, mc_zero_bond, ChainGrid, EquityModel, NoiseSpec, ShortRateModel, StaleModel,
    VasicekParams, STEPS_PER_YEAR,
};

use crate::output::{InputFile, Manifest, OutDir, TreasuryInfo};
use crate::svg::{box_plot, line_chart, Series};
use crate::{
    ChainArgs, CompareArgs, Format, GroupBy, McBondArgs, RateModelKind, StaleKind, StatsArgs,
    SurfaceArgs, SynthArgs,
};

const CLUSTERS: [Cluster; 2] = [Cluster::Short, Cluster::Long];

fn chain_config(a: &ChainArgs) -> serde_json::Value {
    json!({
        "price_rule": a.price_rule,
        "cluster": a.cluster,
        "strict": a.strict,
        "date": a.date.map(|d| d.to_string()),
    })
}

fn pick_date(chain: &OptionChain, requested: Option<NaiveDate>) -> Result<NaiveDate> {
    let dates = chain.trade_dates();
    match (requested, dates.as_slice()) {
        (Some(d), _) if dates.contains(&d) => Ok(d),
        (Some(d), _) => bail!("trade date {d} not found in chain"),
        (None, []) => bail!("chain has no spot rows"),
        (None, [d]) => Ok(*d),
        (None, _) => bail!(
            "chain holds {} trade dates ({} to {}); choose one with --date",
            dates.len(),
            dates[0],
            dates[dates.len() - 1]
        ),
    }
}

/// Load, pair and build the surface; writes `rejects.csv` and
/// `diagnostics.csv` along the way.
fn prepare(a: &ChainArgs, manifest: &mut Manifest, out: &mut OutDir) -> Result<SurfaceBuild> {
    manifest.inputs.push(InputFile::hash(&a.chain)?);
    let chain = load_option_chain(&a.chain, &IngestConfig { strict: a.strict })
        .with_context(|| format!("loading {}", a.chain.display()))?;
    out.write_with("rejects.csv", |w| write_rejects(w, &chain.rejects))?;
    let date = pick_date(&chain, a.date)?;
    let spot = chain.spot_on(date).expect("picked dates have a spot");
    let on_date = chain.quotes.iter().filter(|q| q.trade_date == date).count();
    let pairing = pair_contracts(&chain.quotes, spot, a.price_rule);

    manifest.trade_date = Some(date.to_string());
    let c = &mut manifest.counts;
    c.insert("quotes".into(), on_date);
    c.insert("rejected_rows".into(), chain.rejects.len());
    c.insert("pairs".into(), pairing.pairs.len());
    c.insert("unmatched".into(), pairing.unmatched);
    c.insert("unpriced".into(), pairing.unpriced);
    c.insert("duplicates".into(), pairing.duplicates);
    c.insert("expired".into(), pairing.expired);
    c.insert("other_date".into(), pairing.other_date);

    let build = build_surface(&pairing.pairs, a.cluster).map_err(|e| anyhow!(e))?;
    out.write_with("diagnostics.csv", |w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["expiry", "strike", "call_price", "put_price", "spot", "discount_factor"])?;
        for d in &build.diagnostics {
            let p = &d.pair;
            w.write_record([
                p.expiry.to_string(),
                p.strike.to_string(),
                p.call_price.to_string(),
                p.put_price.to_string(),
                p.spot.to_string(),
                parity_curve::export::fmt_num(d.discount_factor),
            ])?;
        }
        w.flush().map_err(csv::Error::from)
    })?;

    let s = &build.surface;
    let c = &mut manifest.counts;
    c.insert("invalid_discount_factors".into(), build.diagnostics.len());
    c.insert("surface_points".into(), s.points.len());
    c.insert(
        "negative_yields".into(),
        s.points.iter().filter(|p| p.sign_class == SignClass::Negative).count(),
    );
    c.insert("maturities".into(), s.maturities().len());
    manifest.cluster_boundary_years = Some(round_sig(s.cluster_boundary));
    if build.degenerate_split {
        manifest
            .warnings
            .push("only one maturity; all points are in the short cluster".into());
    }
    if !build.diagnostics.is_empty() {
        manifest.warnings.push(format!(
            "{} pairs had a non-positive discount factor (see diagnostics.csv)",
            build.diagnostics.len()
        ));
    }
    if !chain.rejects.is_empty() {
        manifest
            .warnings
            .push(format!("{} rows rejected (see rejects.csv)", chain.rejects.len()));
    }
    Ok(build)
}

#[derive(Serialize)]
struct JsonPoint {
    ttm_years: f64,
    strike: f64,
    moneyness: f64,
    discount_factor: f64,
    implied_yield: f64,
    sign_class: SignClass,
    cluster: Cluster,
}

fn surface_json(s: &ImpliedYieldSurface) -> serde_json::Value {
    let points: Vec<JsonPoint> = s
        .points
        .iter()
        .map(|p| JsonPoint {
            ttm_years: round_sig(p.ttm_years),
            strike: round_sig(p.strike),
            moneyness: round_sig(p.moneyness),
            discount_factor: round_sig(p.discount_factor),
            implied_yield: round_sig(p.implied_yield),
            sign_class: p.sign_class,
            cluster: s.cluster_of(p.ttm_years),
        })
        .collect();
    json!({
        "trade_date": s.trade_date.to_string(),
        "spot": s.spot,
        "cluster_boundary_years": round_sig(s.cluster_boundary),
        "points": points,
    })
}

pub fn surface(a: &SurfaceArgs) -> Result<()> {
    let mut out = OutDir::create(&a.out.out_dir)?;
    let mut manifest = Manifest::new(
        "surface",
        json!({ "chain": chain_config(&a.chain), "format": a.out.format }),
    );
    let build = prepare(&a.chain, &mut manifest, &mut out)?;
    let s = &build.surface;
    if a.out.wants(Format::Csv) {
        out.write_with("surface.csv", |w| write_surface(w, s))?;
    }
    if a.out.wants(Format::Json) {
        out.write_json("surface.json", &surface_json(s))?;
    }
    if a.out.wants(Format::Svg) {
        let series: Vec<Series> = CLUSTERS
            .iter()
            .map(|&c| Series {
                label: if c == Cluster::Short { "short" } else { "long" },
                points: s
                    .points
                    .iter()
                    .filter(|p| s.cluster_of(p.ttm_years) == c)
                    .map(|p| (p.ttm_years, p.implied_yield))
                    .collect(),
                scatter: true,
            })
            .collect();
        let title = format!("Implied yields, {}", s.trade_date);
        out.write_bytes(
            "surface.svg",
            line_chart(&title, "time to maturity (years)", "implied yield", &series).as_bytes(),
        )?;
    }
    out.finish(manifest)
}

fn market_curve_for(a: &CompareArgs, date: NaiveDate, manifest: &mut Manifest) -> Result<InterpolatedCurve> {
    manifest.inputs.push(InputFile::hash(&a.treasury)?);
    let load = load_par_yields(&a.treasury).with_context(|| format!("loading {}", a.treasury.display()))?;
    manifest.warnings.extend(load.warnings.iter().cloned());
    let curve = match load.curves.iter().find(|c| c.curve_date == date) {
        Some(c) => {
            if !c.complete {
                manifest
                    .warnings
                    .push(format!("treasury curve for {date} has blank tenors; fitted without them"));
            }
            manifest.treasury = Some(TreasuryInfo {
                curve_date: date.to_string(),
                gap_filled: false,
                filled_from: None,
            });
            c.clone()
        }
        None => {
            let filled = fill_missing_date(&load.curves, date)
                .with_context(|| format!("no treasury curve for {date}"))?;
            let before = load.curves.iter().filter(|c| c.curve_date < date).map(|c| c.curve_date).max();
            let after = load.curves.iter().filter(|c| c.curve_date > date).map(|c| c.curve_date).min();
            let (before, after) = (before.expect("filled"), after.expect("filled"));
            manifest.warnings.push(format!(
                "no treasury curve for {date}; using the mean of {before} and {after}"
            ));
            manifest.treasury = Some(TreasuryInfo {
                curve_date: date.to_string(),
                gap_filled: true,
                filled_from: Some([before.to_string(), after.to_string()]),
            });
            filled
        }
    };
    fit_pchip(&curve).map_err(|e| anyhow!("fitting treasury curve for {date}: {e}"))
}

#[derive(Serialize)]
struct ClusterJson {
    cluster: Cluster,
    implied: Vec<[f64; 3]>,
    dislocation: Vec<[f64; 2]>,
    omitted: usize,
}

pub fn compare(a: &CompareArgs) -> Result<()> {
    if !(a.curve_step_days > 0.0) {
        bail!("--curve-step-days must be positive");
    }
    let mut out = OutDir::create(&a.out.out_dir)?;
    let mut manifest = Manifest::new(
        "compare",
        json!({
            "chain": chain_config(&a.chain),
            "method": a.method,
            "atm_tolerance": a.atm_tol,
            "curve_step_days": a.curve_step_days,
            "format": a.out.format,
        }),
    );
    let build = prepare(&a.chain, &mut manifest, &mut out)?;
    let s = &build.surface;
    let market = market_curve_for(a, s.trade_date, &mut manifest)?;
    let grid = uniform_grid(a.curve_step_days / DAYS_PER_YEAR, 30.0);
    if a.out.wants(Format::Csv) {
        out.write_with("market_curve.csv", |w| market.write_csv(w, &grid))?;
    }

    let m = a.method;
    let mut produced: Vec<(Cluster, AggregatedCurve, DislocationSeries)> = Vec::new();
    for c in CLUSTERS {
        let sub = s.subset(c);
        if sub.points.is_empty() {
            continue;
        }
        let agg = match m {
            AggregationMethod::Median => median_curve(&sub),
            AggregationMethod::Atm => atm_curve(&sub, a.atm_tol),
        };
        let agg = match agg {
            Ok(agg) => agg,
            Err(AggregationError::NoAtmContracts(tol)) => {
                manifest.warnings.push(format!(
                    "{c} cluster: no contract within {tol} of ATM at any maturity; cluster skipped"
                ));
                manifest.counts.insert(format!("atm_omitted_{c}"), sub.maturities().len());
                continue;
            }
            Err(e) => return Err(anyhow!(e)),
        };
        if m == AggregationMethod::Atm {
            manifest.counts.insert(format!("atm_omitted_{c}"), agg.omitted);
            if agg.omitted > 0 {
                manifest.warnings.push(format!(
                    "{c} cluster: {} maturities had no contract within {} of ATM",
                    agg.omitted, a.atm_tol
                ));
            }
        }
        let dis = dislocation(&agg, &market);
        if a.out.wants(Format::Csv) {
            out.write_with(&format!("implied_{m}_{c}.csv"), |w| write_aggregated(w, &agg))?;
            out.write_with(&format!("dislocation_{m}_{c}.csv"), |w| write_dislocation(w, &dis))?;
        }
        if a.out.wants(Format::Svg) {
            let lo = agg.points.first().map_or(0.0, |p| p.ttm_years);
            let hi = agg.points.last().map_or(0.0, |p| p.ttm_years);
            let n = 200;
            let market_pts = (0..=n)
                .map(|i| lo + (hi - lo) * i as f64 / n as f64)
                .map(|t| (t, market.market_rate(t)))
                .collect();
            let series = [
                Series {
                    label: "option-implied",
                    points: agg.points.iter().map(|p| (p.ttm_years, p.value)).collect(),
                    scatter: false,
                },
                Series {
                    label: "treasury",
                    points: market_pts,
                    scatter: false,
                },
            ];
            let title = format!("{m} implied vs treasury, {c} term, {}", s.trade_date);
            out.write_bytes(
                &format!("compare_{m}_{c}.svg"),
                line_chart(&title, "time to maturity (years)", "yield", &series).as_bytes(),
            )?;
        }
        produced.push((c, agg, dis));
    }
    if produced.is_empty() {
        bail!("no cluster produced an aggregated curve");
    }
    if a.out.wants(Format::Json) {
        let clusters: Vec<ClusterJson> = produced
            .iter()
            .map(|(c, agg, dis)| ClusterJson {
                cluster: *c,
                implied: agg
                    .points
                    .iter()
                    .map(|p| [round_sig(p.ttm_years), round_sig(p.value), p.support as f64])
                    .collect(),
                dislocation: dis
                    .points
                    .iter()
                    .map(|p| [round_sig(p.ttm_years), round_sig(p.delta)])
                    .collect(),
                omitted: agg.omitted,
            })
            .collect();
        let market_pts: Vec<[f64; 2]> = market
            .sample(&grid)
            .into_iter()
            .map(|(t, r)| [round_sig(t), round_sig(r)])
            .collect();
        out.write_json(
            &format!("compare_{m}.json"),
            &json!({
                "trade_date": s.trade_date.to_string(),
                "method": m,
                "columns": { "implied": ["ttm_years", "value", "support"], "dislocation": ["ttm_years", "delta"], "market_curve": ["ttm_years", "rate"] },
                "clusters": clusters,
                "market_curve": market_pts,
            }),
        )?;
    }
    out.finish(manifest)
}

pub fn stats(a: &StatsArgs) -> Result<()> {
    let mut out = OutDir::create(&a.out.out_dir)?;
    let mut manifest = Manifest::new(
        "stats",
        json!({
            "chain": chain_config(&a.chain),
            "groupby": a.groupby,
            "bins": a.bins,
            "format": a.out.format,
        }),
    );
    let build = prepare(&a.chain, &mut manifest, &mut out)?;
    let s = &build.surface;
    let g = match a.groupby {
        GroupBy::Maturity => "maturity",
        GroupBy::Moneyness => "moneyness",
    };
    let scopes = [("all", s.clone()), ("short", s.subset(Cluster::Short)), ("long", s.subset(Cluster::Long))];
    let mut json_scopes = serde_json::Map::new();
    for (scope, sub) in &scopes {
        if sub.points.is_empty() {
            manifest.warnings.push(format!("{scope} cluster is empty; no summaries written"));
            continue;
        }
        let groups: Vec<GroupSummary> = match a.groupby {
            GroupBy::Maturity => summarize_by_maturity(sub),
            GroupBy::Moneyness => summarize_by_moneyness(&bin_by_moneyness(sub, a.bins).map_err(|e| anyhow!(e))?),
        };
        manifest.counts.insert(format!("groups_{scope}"), groups.len());
        manifest.counts.insert(
            format!("outliers_{scope}"),
            groups.iter().map(|g| g.summary.outliers.len()).sum(),
        );
        if a.out.wants(Format::Csv) {
            out.write_with(&format!("stats_{g}_{scope}.csv"), |w| write_summaries(w, &groups))?;
            out.write_with(&format!("stats_{g}_{scope}_outliers.csv"), |w| write_outliers(w, &groups))?;
        }
        if a.out.wants(Format::Svg) {
            let title = format!("Implied yields by {g}, {scope}, {}", s.trade_date);
            let x_label = match a.groupby {
                GroupBy::Maturity => "maturity group (ascending)",
                GroupBy::Moneyness => "moneyness bin (ascending)",
            };
            out.write_bytes(&format!("stats_{g}_{scope}.svg"), box_plot(&title, x_label, &groups).as_bytes())?;
        }
        if a.out.wants(Format::Json) {
            let rows: Vec<serde_json::Value> = groups
                .iter()
                .map(|gs| {
                    let b = &gs.summary;
                    json!({
                        "group": round_sig(gs.key),
                        "n": b.n,
                        "q1": round_sig(b.q1),
                        "median": round_sig(b.median),
                        "q3": round_sig(b.q3),
                        "lo_whisker": round_sig(b.lower_whisker),
                        "hi_whisker": round_sig(b.upper_whisker),
                        "outliers": b.outliers.iter().map(|&o| round_sig(o)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json_scopes.insert(scope.to_string(), rows.into());
        }
    }
    if a.out.wants(Format::Json) {
        out.write_json(&format!("stats_{g}.json"), &json_scopes)?;
    }
    out.finish(manifest)
}

/// Parses `a,b,c` or `start:end:step` (inclusive of `end` up to rounding).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if let Some((start, rest)) = spec.split_once(':') {
        let (end, step) = rest
            .split_once(':')
            .ok_or_else(|| anyhow!("range `{spec}` must be start:end:step"))?;
        let (start, end, step): (f64, f64, f64) = (start.trim().parse()?, end.trim().parse()?, step.trim().parse()?);
        if !(step > 0.0) || !(end >= start) {
            bail!("range `{spec}` needs step > 0 and end >= start");
        }
        let n = ((end - start) / step + 1e-9).floor() as usize;
        // Snap to 12 decimals so 0.7 + 3·0.025 prints as 0.775.
        return Ok((0..=n)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect());
    }
    spec.split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad grid value `{v}`")))
        .collect()
}

fn parse_days(spec: &str) -> Result<Vec<u32>> {
    parse_grid(spec)?
        .into_iter()
        .map(|d| {
            if d >= 1.0 && d.fract() == 0.0 && d <= f64::from(u32::MAX) {
                Ok(d as u32)
            } else {
                Err(anyhow!("maturity `{d}` is not a whole number of days >= 1"))
            }
        })
        .collect()
}

pub fn synth(a: &SynthArgs) -> Result<()> {
    let mut out = OutDir::create(&a.out.out_dir)?;
    let mut manifest = Manifest::new("synth", serde_json::to_value(a)?);
    let grid = ChainGrid {
        trade_date: a.trade_date,
        maturities_days: parse_days(&a.maturities)?,
        moneyness: parse_grid(&a.moneyness)?,
    };
    let equity = EquityModel {
        spot: a.spot,
        volatility: a.vol,
        drift: a.drift,
    };
    let noise = NoiseSpec {
        half_spread: a.half_spread,
        stale_fraction: a.stale_fraction,
        stale_leg: a.stale_leg,
        stale: match a.stale_model {
            StaleKind::ShiftedSpot => StaleModel::ShiftedSpot { max_shift: a.stale_size },
            StaleKind::Moneyness => StaleModel::MoneynessProportional { scale: a.stale_size },
        },
        seed: a.seed,
    };
    let chain = generate_chain(&equity, &ShortRateModel::Constant { rate: a.rate }, &grid, &noise)
        .map_err(|e| anyhow!(e))?;
    out.write_with("chain.csv", |w| write_option_chain(w, &[chain.spot], &chain.quotes))?;
    manifest.trade_date = Some(a.trade_date.to_string());
    manifest.counts.insert("quotes".into(), chain.quotes.len());
    manifest.counts.insert("stale_quotes".into(), chain.stale_quotes);
    manifest.counts.insert("maturities".into(), chain.discount_factors.len());
    out.finish(manifest)
}

pub fn mc_bond(a: &McBondArgs) -> Result<()> {
    let model = match a.model {
        RateModelKind::Constant => ShortRateModel::Constant { rate: a.rate },
        RateModelKind::Vasicek => ShortRateModel::Vasicek(VasicekParams {
            a: a.a,
            b: a.b,
            sigma: a.sigma,
            r0: a.r0,
        }),
    };
    let tau = a.maturity - a.t;
    let steps = a
        .steps
        .unwrap_or_else(|| ((STEPS_PER_YEAR as f64 * tau).ceil() as usize).max(1));
    let est = mc_zero_bond(&model, a.t, a.maturity, a.paths, steps, a.seed).map_err(|e| anyhow!(e))?;
    let result = json!({
        "price": round_sig(est.price),
        "stderr": round_sig(est.stderr),
        "paths": est.paths,
        "steps": est.steps,
        "seed": est.seed,
    });
    let mut out = OutDir::create(&a.out.out_dir)?;
    out.write_json("mc_bond.json", &result)?;
    println!("{}", serde_json::to_string(&result)?);
    let mut config = serde_json::to_value(a)?;
    config["steps"] = steps.into();
    out.finish(Manifest::new("mc-bond", config))
}
