//! Option-chain and treasury par-yield ingestion.
//!
//! Two CSV formats are read here:
//!
//! | File      | Header                                                              |
//! |-----------|---------------------------------------------------------------------|
//! | chain     | `trade_date,expiry,kind,strike,bid,ask,last,volume,open_interest`   |
//! | treasury  | `Date,1 Mo,2 Mo,3 Mo,4 Mo,6 Mo,1 Yr,2 Yr,3 Yr,5 Yr,7 Yr,10 Yr,...` |
//!
//! Chain dates are ISO-8601. Each trade date carries exactly one row with
//! `kind=spot` whose `last` column is the index level; its other numeric
//! columns may be blank. Treasury dates are `MM/DD/YYYY` and cells are in
//! percent. All rates leave this module as decimals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Days per year used for every time-to-maturity (ACT/365).
pub const DAYS_PER_YEAR: f64 = 365.0;

pub const CHAIN_HEADER: [&str; 9] = [
    "trade_date",
    "expiry",
    "kind",
    "strike",
    "bid",
    "ask",
    "last",
    "volume",
    "open_interest",
];

/// Treasury tenor columns, in months, that make up a standard par curve.
pub const STANDARD_TENOR_MONTHS: [u32; 13] = [1, 2, 3, 4, 6, 12, 24, 36, 60, 84, 120, 240, 360];

#[derive(Debug, Error)]
pub enum MarketDataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("no spot row for trade date {0}")]
    MissingSpot(NaiveDate),
    #[error("duplicate spot rows for trade date {0}")]
    DuplicateSpot(NaiveDate),
    #[error("row {row}: {reason}")]
    RejectedRow { row: u64, reason: RejectReason },
    #[error("treasury header: {0}")]
    TenorHeader(String),
    #[error("no curve on or around {0}: {1}")]
    MissingNeighbor(NaiveDate, &'static str),
    #[error("curve for {0} is incomplete")]
    IncompleteCurve(NaiveDate),
    #[error("curves for {0} and {1} have different tenor sets")]
    TenorMismatch(NaiveDate, NaiveDate),
    #[error("target date {0} already present")]
    DatePresent(NaiveDate),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

impl fmt::Display for OptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptionKind::Call => "call",
            OptionKind::Put => "put",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptionQuote {
    pub trade_date: NaiveDate,
    pub expiry: NaiveDate,
    pub strike: f64,
    pub kind: OptionKind,
    pub bid: f64,
    pub ask: f64,
    pub last: f64,
    pub volume: u64,
    pub open_interest: u64,
}

impl OptionQuote {
    /// Checks the quote invariants, returning the first violation.
    pub fn validate(&self) -> Result<(), RejectReason> {
        if self.expiry < self.trade_date {
            return Err(RejectReason::ExpiryBeforeTradeDate);
        }
        if !(self.strike > 0.0) || !self.strike.is_finite() {
            return Err(RejectReason::NonPositiveStrike);
        }
        for p in [self.bid, self.ask, self.last] {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(RejectReason::NegativePrice);
            }
        }
        if self.bid > 0.0 && self.ask > 0.0 && self.bid > self.ask {
            return Err(RejectReason::CrossedMarket);
        }
        Ok(())
    }

    /// Price under `rule`, or `None` when the contract has no usable price.
    pub fn price(&self, rule: PriceRule) -> Option<f64> {
        let mid = (self.bid > 0.0 && self.ask > 0.0).then_some(0.5 * (self.bid + self.ask));
        let last = (self.last > 0.0).then_some(self.last);
        match rule {
            PriceRule::Mid => mid.or(last),
            PriceRule::Last => last.or(mid),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpotQuote {
    pub trade_date: NaiveDate,
    pub spot: f64,
}

/// Why a chain row was not retained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    CrossedMarket,
    ExpiryBeforeTradeDate,
    NonPositiveStrike,
    NegativePrice,
    NonPositiveSpot,
    UnknownKind(String),
    Unparseable { field: &'static str, raw: String },
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::CrossedMarket => f.write_str("crossed market"),
            RejectReason::ExpiryBeforeTradeDate => f.write_str("expiry before trade date"),
            RejectReason::NonPositiveStrike => f.write_str("non-positive strike"),
            RejectReason::NegativePrice => f.write_str("negative price"),
            RejectReason::NonPositiveSpot => f.write_str("non-positive spot"),
            RejectReason::UnknownKind(k) => write!(f, "unknown kind '{k}'"),
            RejectReason::Unparseable { field, raw } => {
                write!(f, "cannot parse {field} from '{raw}'")
            }
        }
    }
}

/// One rejected row. `row` is the 1-based line number in the file (the
/// header is line 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    pub row: u64,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestConfig {
    /// Fail on the first rejected row instead of collecting it.
    pub strict: bool,
}

#[derive(Debug, Clone, Default)]
pub struct OptionChain {
    pub quotes: Vec<OptionQuote>,
    /// One per trade date, sorted by date.
    pub spots: Vec<SpotQuote>,
    pub rejects: Vec<Reject>,
}

impl OptionChain {
    pub fn trade_dates(&self) -> Vec<NaiveDate> {
        self.spots.iter().map(|s| s.trade_date).collect()
    }

    pub fn spot_on(&self, date: NaiveDate) -> Option<SpotQuote> {
        self.spots.iter().copied().find(|s| s.trade_date == date)
    }

    pub fn quotes_on(&self, date: NaiveDate) -> Vec<OptionQuote> {
        self.quotes
            .iter()
            .filter(|q| q.trade_date == date)
            .cloned()
            .collect()
    }
}

#[derive(Debug, Deserialize)]
struct RawChainRow {
    trade_date: String,
    expiry: String,
    kind: String,
    strike: String,
    bid: String,
    ask: String,
    last: String,
    volume: String,
    open_interest: String,
}

enum ChainRow {
    Spot(SpotQuote),
    Quote(OptionQuote),
}

fn parse_date(field: &'static str, raw: &str) -> Result<NaiveDate, RejectReason> {
    NaiveDate::parse_from_str(raw.trim(), "%Y-%m-%d").map_err(|_| RejectReason::Unparseable {
        field,
        raw: raw.to_string(),
    })
}

fn parse_f64(field: &'static str, raw: &str, blank_as_zero: bool) -> Result<f64, RejectReason> {
    let s = raw.trim();
    if s.is_empty() && blank_as_zero {
        return Ok(0.0);
    }
    s.parse::<f64>().map_err(|_| RejectReason::Unparseable {
        field,
        raw: raw.to_string(),
    })
}

fn parse_count(field: &'static str, raw: &str) -> Result<u64, RejectReason> {
    let s = raw.trim();
    if s.is_empty() {
        return Ok(0);
    }
    s.parse::<u64>().map_err(|_| RejectReason::Unparseable {
        field,
        raw: raw.to_string(),
    })
}

impl RawChainRow {
    fn decode(&self) -> Result<ChainRow, RejectReason> {
        let trade_date = parse_date("trade_date", &self.trade_date)?;
        let kind = match self.kind.trim().to_ascii_lowercase().as_str() {
            "spot" => {
                let spot = parse_f64("last", &self.last, false)?;
                if !(spot > 0.0) || !spot.is_finite() {
                    return Err(RejectReason::NonPositiveSpot);
                }
                return Ok(ChainRow::Spot(SpotQuote { trade_date, spot }));
            }
            "call" | "c" => OptionKind::Call,
            "put" | "p" => OptionKind::Put,
            other => return Err(RejectReason::UnknownKind(other.to_string())),
        };
        let quote = OptionQuote {
            trade_date,
            expiry: parse_date("expiry", &self.expiry)?,
            strike: parse_f64("strike", &self.strike, false)?,
            kind,
            bid: parse_f64("bid", &self.bid, true)?,
            ask: parse_f64("ask", &self.ask, true)?,
            last: parse_f64("last", &self.last, true)?,
            volume: parse_count("volume", &self.volume)?,
            open_interest: parse_count("open_interest", &self.open_interest)?,
        };
        quote.validate()?;
        Ok(ChainRow::Quote(quote))
    }
}

/// Reads a chain CSV from any reader. See [`load_option_chain`].
pub fn read_option_chain<R: Read>(
    reader: R,
    config: &IngestConfig,
) -> Result<OptionChain, MarketDataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.to_string()).collect();
    if header.iter().map(String::as_str).ne(CHAIN_HEADER) {
        return Err(MarketDataError::Header {
            expected: CHAIN_HEADER.join(","),
            found: header.join(","),
        });
    }

    let mut chain = OptionChain::default();
    let mut spots: BTreeMap<NaiveDate, SpotQuote> = BTreeMap::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = rdr.position().line() + 1;
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) if e.is_io_error() => return Err(e.into()),
            Err(e) => {
                let reason = RejectReason::Unparseable {
                    field: "row",
                    raw: e.to_string(),
                };
                if config.strict {
                    return Err(MarketDataError::RejectedRow { row: line, reason });
                }
                chain.rejects.push(Reject { row: line, reason });
                continue;
            }
        }
        let row = record.position().map(|p| p.line()).unwrap_or(line);
        let decoded = record
            .deserialize::<RawChainRow>(None)
            .map_err(|e| RejectReason::Unparseable {
                field: "row",
                raw: e.to_string(),
            })
            .and_then(|raw| raw.decode());
        match decoded {
            Ok(ChainRow::Spot(s)) => {
                if spots.insert(s.trade_date, s).is_some() {
                    return Err(MarketDataError::DuplicateSpot(s.trade_date));
                }
            }
            Ok(ChainRow::Quote(q)) => chain.quotes.push(q),
            Err(reason) if config.strict => {
                return Err(MarketDataError::RejectedRow { row, reason })
            }
            Err(reason) => chain.rejects.push(Reject { row, reason }),
        }
    }

    let quote_dates: BTreeSet<NaiveDate> = chain.quotes.iter().map(|q| q.trade_date).collect();
    if let Some(d) = quote_dates.iter().find(|d| !spots.contains_key(d)) {
        return Err(MarketDataError::MissingSpot(*d));
    }
    chain.spots = spots.into_values().collect();
    chain.quotes.sort_by(|a, b| {
        (a.trade_date, a.expiry, a.kind)
            .cmp(&(b.trade_date, b.expiry, b.kind))
            .then(a.strike.total_cmp(&b.strike))
    });
    Ok(chain)
}

/// Loads and validates an option-chain CSV file.
///
/// Rows that break an [`OptionQuote`] invariant land in
/// [`OptionChain::rejects`] unless `config.strict` is set. A trade date
/// with quotes but no spot row, or with two spot rows, is a hard error.
pub fn load_option_chain(
    path: impl AsRef<Path>,
    config: &IngestConfig,
) -> Result<OptionChain, MarketDataError> {
    let file = std::fs::File::open(path)?;
    read_option_chain(std::io::BufReader::new(file), config)
}

/// Writes a chain in the ingest schema. Spot rows come first per date,
/// then quotes ordered by expiry, kind and strike. Numbers use the
/// shortest representation that parses back to the same `f64`.
pub fn write_option_chain<W: Write>(
    writer: W,
    spots: &[SpotQuote],
    quotes: &[OptionQuote],
) -> Result<(), MarketDataError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CHAIN_HEADER)?;
    let mut spots = spots.to_vec();
    spots.sort_by_key(|s| s.trade_date);
    let mut quotes: Vec<&OptionQuote> = quotes.iter().collect();
    quotes.sort_by(|a, b| {
        (a.trade_date, a.expiry, a.kind)
            .cmp(&(b.trade_date, b.expiry, b.kind))
            .then(a.strike.total_cmp(&b.strike))
    });
    for s in &spots {
        let date = s.trade_date.to_string();
        w.write_record([
            date.as_str(),
            date.as_str(),
            "spot",
            "",
            "",
            "",
            &s.spot.to_string(),
            "",
            "",
        ])?;
        for q in quotes.iter().filter(|q| q.trade_date == s.trade_date) {
            w.write_record([
                q.trade_date.to_string(),
                q.expiry.to_string(),
                q.kind.to_string(),
                q.strike.to_string(),
                q.bid.to_string(),
                q.ask.to_string(),
                q.last.to_string(),
                q.volume.to_string(),
                q.open_interest.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Rejects report as CSV `row,reason`.
pub fn write_rejects<W: Write>(writer: W, rejects: &[Reject]) -> Result<(), MarketDataError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["row", "reason"])?;
    for r in rejects {
        w.write_record([r.row.to_string(), r.reason.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// How a single contract price is chosen from its quote.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriceRule {
    /// Bid/ask midpoint when both sides are positive, otherwise last.
    #[default]
    Mid,
    /// Last trade when positive, otherwise the midpoint.
    Last,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PutCallPair {
    pub trade_date: NaiveDate,
    pub expiry: NaiveDate,
    pub strike: f64,
    pub call_price: f64,
    pub put_price: f64,
    pub spot: f64,
    pub ttm_years: f64,
    pub moneyness: f64,
}

impl PutCallPair {
    /// Builds a pair, deriving `ttm_years` (ACT/365) and `moneyness`.
    pub fn new(
        trade_date: NaiveDate,
        expiry: NaiveDate,
        strike: f64,
        call_price: f64,
        put_price: f64,
        spot: f64,
    ) -> Self {
        PutCallPair {
            trade_date,
            expiry,
            strike,
            call_price,
            put_price,
            spot,
            ttm_years: year_fraction(trade_date, expiry),
            moneyness: strike / spot,
        }
    }
}

/// ACT/365 year fraction between two dates.
pub fn year_fraction(from: NaiveDate, to: NaiveDate) -> f64 {
    (to - from).num_days() as f64 / DAYS_PER_YEAR
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pairing {
    /// Sorted by expiry, then strike.
    pub pairs: Vec<PutCallPair>,
    /// Calls or puts without a counterpart at the same (expiry, strike).
    pub unmatched: usize,
    /// Contracts with no positive price under the rule.
    pub unpriced: usize,
    /// Contracts sharing (expiry, strike, kind) with another quote.
    pub duplicates: usize,
    /// Contracts expiring on the trade date.
    pub expired: usize,
    /// Quotes from a trade date other than the spot's.
    pub other_date: usize,
}

impl Pairing {
    pub fn dropped(&self) -> usize {
        self.unmatched + self.unpriced + self.duplicates + self.expired + self.other_date
    }
}

#[derive(Default)]
struct Slot<'a> {
    call: Vec<&'a OptionQuote>,
    put: Vec<&'a OptionQuote>,
}

/// Matches calls with puts on (expiry, strike).
///
/// The result does not depend on the order of `quotes`. Keys with more than
/// one quote of the same kind are dropped whole and counted as duplicates.
pub fn pair_contracts(quotes: &[OptionQuote], spot: SpotQuote, rule: PriceRule) -> Pairing {
    let mut out = Pairing::default();
    let mut slots: BTreeMap<(NaiveDate, u64), Slot<'_>> = BTreeMap::new();
    for q in quotes {
        if q.trade_date != spot.trade_date {
            out.other_date += 1;
            continue;
        }
        // Strikes are positive finite, so their bit patterns sort numerically.
        let slot = slots.entry((q.expiry, q.strike.to_bits())).or_default();
        match q.kind {
            OptionKind::Call => slot.call.push(q),
            OptionKind::Put => slot.put.push(q),
        }
    }
    for ((expiry, _), slot) in slots {
        let (nc, np) = (slot.call.len(), slot.put.len());
        if nc > 1 || np > 1 {
            out.duplicates += nc + np;
            continue;
        }
        let (Some(call), Some(put)) = (slot.call.first(), slot.put.first()) else {
            out.unmatched += nc + np;
            continue;
        };
        if expiry <= spot.trade_date {
            out.expired += 2;
            continue;
        }
        match (call.price(rule), put.price(rule)) {
            (Some(c), Some(p)) => out.pairs.push(PutCallPair::new(
                spot.trade_date,
                expiry,
                call.strike,
                c,
                p,
                spot.spot,
            )),
            _ => out.unpriced += 2,
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// Year fraction.
    pub maturity: f64,
    /// Decimal per annum.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParYieldCurve {
    pub curve_date: NaiveDate,
    pub points: Vec<CurvePoint>,
    /// False when a tenor cell was blank; the tenor is then absent from `points`.
    pub complete: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ParYieldLoad {
    /// Sorted by date.
    pub curves: Vec<ParYieldCurve>,
    pub warnings: Vec<String>,
}

/// Parses a treasury tenor label such as `1 Mo`, `1.5 Month`, `6 Wk`,
/// `10 Yr`. Returns the tenor in months.
pub fn parse_tenor_months(label: &str) -> Option<f64> {
    let label = label.trim();
    let split = label.find(|c: char| !(c.is_ascii_digit() || c == '.'))?;
    let n: f64 = label[..split].parse().ok()?;
    let unit = label[split..].trim().to_ascii_lowercase();
    match unit.as_str() {
        "wk" | "wks" | "week" | "weeks" => Some(n * 12.0 / 52.0),
        "mo" | "mos" | "month" | "months" => Some(n),
        "yr" | "yrs" | "year" | "years" => Some(n * 12.0),
        _ => None,
    }
}

fn standard_tenor(months: f64) -> Option<u32> {
    STANDARD_TENOR_MONTHS
        .iter()
        .copied()
        .find(|&m| m as f64 == months)
}

/// Reads treasury par yields from any reader. See [`load_par_yields`].
pub fn read_par_yields<R: Read>(reader: R) -> Result<ParYieldLoad, MarketDataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut out = ParYieldLoad::default();
    let header = rdr.headers()?.clone();
    if header.iter().all(|h| h.is_empty()) {
        out.warnings.push("empty treasury file".to_string());
        return Ok(out);
    }
    if !header.get(0).is_some_and(|h| h.eq_ignore_ascii_case("date")) {
        return Err(MarketDataError::TenorHeader(
            "first column must be `Date`".to_string(),
        ));
    }

    // (column index, months); non-standard tenors are skipped.
    let mut columns: Vec<(usize, u32)> = Vec::new();
    let mut prev: Option<f64> = None;
    for (i, label) in header.iter().enumerate().skip(1) {
        let months = parse_tenor_months(label)
            .ok_or_else(|| MarketDataError::TenorHeader(format!("unrecognized tenor `{label}`")))?;
        if prev.is_some_and(|p| months <= p) {
            return Err(MarketDataError::TenorHeader(format!(
                "tenor `{label}` is duplicated or out of order"
            )));
        }
        prev = Some(months);
        if let Some(m) = standard_tenor(months) {
            columns.push((i, m));
        } else {
            out.warnings.push(format!("ignoring non-standard tenor `{label}`"));
        }
    }
    for m in STANDARD_TENOR_MONTHS {
        if !columns.iter().any(|&(_, c)| c == m) {
            out.warnings.push(format!("standard tenor of {m} months absent from header"));
        }
    }

    let mut by_date: BTreeMap<NaiveDate, ParYieldCurve> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let raw_date = rec.get(0).unwrap_or("");
        let Ok(curve_date) = NaiveDate::parse_from_str(raw_date, "%m/%d/%Y") else {
            out.warnings.push(format!("line {line}: bad date '{raw_date}', row skipped"));
            continue;
        };
        let mut complete = columns.len() == STANDARD_TENOR_MONTHS.len();
        let mut points = Vec::with_capacity(columns.len());
        for &(i, months) in &columns {
            let cell = rec.get(i).unwrap_or("");
            match cell.parse::<f64>() {
                Ok(pct) if pct.is_finite() => points.push(CurvePoint {
                    maturity: months as f64 / 12.0,
                    rate: pct / 100.0,
                }),
                _ => complete = false,
            }
        }
        if !complete {
            out.warnings.push(format!("curve {curve_date} is incomplete"));
        }
        if by_date
            .insert(
                curve_date,
                ParYieldCurve {
                    curve_date,
                    points,
                    complete,
                },
            )
            .is_some()
        {
            out.warnings.push(format!("duplicate curve {curve_date}, last row kept"));
        }
    }
    if by_date.is_empty() {
        out.warnings.push("treasury file has no data rows".to_string());
    }
    out.curves = by_date.into_values().collect();
    Ok(out)
}

/// Loads a US Treasury daily par-yield CSV, one curve per business date.
pub fn load_par_yields(path: impl AsRef<Path>) -> Result<ParYieldLoad, MarketDataError> {
    let file = std::fs::File::open(path)?;
    read_par_yields(std::io::BufReader::new(file))
}

/// Synthesizes a curve for a date with no publication (e.g. a federal
/// holiday) as the per-tenor mean of the nearest earlier and later curves.
pub fn fill_missing_date(
    curves: &[ParYieldCurve],
    target: NaiveDate,
) -> Result<ParYieldCurve, MarketDataError> {
    if curves.iter().any(|c| c.curve_date == target) {
        return Err(MarketDataError::DatePresent(target));
    }
    let before = curves
        .iter()
        .filter(|c| c.curve_date < target)
        .max_by_key(|c| c.curve_date)
        .ok_or(MarketDataError::MissingNeighbor(target, "no earlier curve"))?;
    let after = curves
        .iter()
        .filter(|c| c.curve_date > target)
        .min_by_key(|c| c.curve_date)
        .ok_or(MarketDataError::MissingNeighbor(target, "no later curve"))?;
    for c in [before, after] {
        if !c.complete {
            return Err(MarketDataError::IncompleteCurve(c.curve_date));
        }
    }
    if before.points.len() != after.points.len()
        || before
            .points
            .iter()
            .zip(&after.points)
            .any(|(a, b)| a.maturity != b.maturity)
    {
        return Err(MarketDataError::TenorMismatch(before.curve_date, after.curve_date));
    }
    let points = before
        .points
        .iter()
        .zip(&after.points)
        .map(|(a, b)| CurvePoint {
            maturity: a.maturity,
            rate: 0.5 * (a.rate + b.rate),
        })
        .collect();
    Ok(ParYieldCurve {
        curve_date: target,
        points,
        complete: true,
    })
}
