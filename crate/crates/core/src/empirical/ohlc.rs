//! OHLC bars: CSV ingestion with per-row validation, the log-price s-stat
//! of a bar, and synthetic bars built from simulated paths.

use std::fmt;
use std::io::{Read, Write};

use chrono::{DateTime, Duration, Utc};

use crate::error::{Error, Result};
use crate::sdensity::ScaledValue;
use crate::simulation::{simulate_indexed, PathSpec};

pub const HEADER: [&str; 5] = ["timestamp", "open", "high", "low", "close"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhlcBar {
    pub timestamp: DateTime<Utc>,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectReason {
    /// A price is zero or negative.
    NegativePrice,
    HighBelowBody,
    LowAboveBody,
    /// `high == low`: the bar carries no extremum information.
    ZeroRange,
    ParseError,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::NegativePrice => "NEGATIVE_PRICE",
            RejectReason::HighBelowBody => "HIGH_BELOW_BODY",
            RejectReason::LowAboveBody => "LOW_ABOVE_BODY",
            RejectReason::ZeroRange => "ZERO_RANGE",
            RejectReason::ParseError => "PARSE_ERROR",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl OhlcBar {
    /// Validate the price ordering. Zero-range bars are accepted here; ingestion rejects them.
    pub fn new(timestamp: DateTime<Utc>, open: f64, high: f64, low: f64, close: f64) -> std::result::Result<Self, RejectReason> {
        let prices = [open, high, low, close];
        if prices.iter().any(|p| !p.is_finite()) {
            return Err(RejectReason::ParseError);
        }
        if prices.iter().any(|&p| p <= 0.0) {
            return Err(RejectReason::NegativePrice);
        }
        if high < open.max(close) {
            return Err(RejectReason::HighBelowBody);
        }
        if low > open.min(close) {
            return Err(RejectReason::LowAboveBody);
        }
        Ok(OhlcBar {
            timestamp,
            open,
            high,
            low,
            close,
        })
    }

    pub fn is_zero_range(&self) -> bool {
        self.high == self.low
    }
}

/// One rejected data row. `row` counts data rows from 1 (the header is not counted).
#[derive(Debug, Clone, PartialEq)]
pub struct RowDiagnostic {
    pub row: u64,
    pub reason: RejectReason,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ingested {
    pub bars: Vec<OhlcBar>,
    pub diagnostics: Vec<RowDiagnostic>,
}

fn parse_row(fields: &csv::StringRecord, columns: &[usize; 5]) -> std::result::Result<OhlcBar, (RejectReason, String)> {
    if fields.len() != HEADER.len() {
        return Err((
            RejectReason::ParseError,
            format!("expected {} fields, found {}", HEADER.len(), fields.len()),
        ));
    }
    let raw = |k: usize| fields.get(columns[k]).unwrap_or("").trim();
    let timestamp = DateTime::parse_from_rfc3339(raw(0))
        .map_err(|e| (RejectReason::ParseError, format!("timestamp {:?}: {e}", raw(0))))?
        .with_timezone(&Utc);
    let mut prices = [0.0; 4];
    for (k, slot) in prices.iter_mut().enumerate() {
        let text = raw(k + 1);
        *slot = text
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| (RejectReason::ParseError, format!("{} {text:?} is not a finite number", HEADER[k + 1])))?;
    }
    let [open, high, low, close] = prices;
    let bar = OhlcBar::new(timestamp, open, high, low, close).map_err(|r| (r, format!("open={open} high={high} low={low} close={close}")))?;
    if bar.is_zero_range() {
        return Err((RejectReason::ZeroRange, format!("high = low = {high}")));
    }
    Ok(bar)
}

/// Read `timestamp,open,high,low,close` rows, keeping valid bars in input order.
///
/// A missing or unexpected header is a format error; every other problem
/// rejects only its row.
pub fn ingest_ohlc_csv<R: Read>(stream: R) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(stream);
    let header = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) if e.is_io_error() => return Err(e.into()),
        Err(e) => return Err(Error::Format(format!("unreadable header: {e}"))),
    };
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names.len() != HEADER.len() {
        return Err(Error::Format(format!("expected header {}, found {:?}", HEADER.join(","), names)));
    }
    let mut columns = [0usize; 5];
    for (k, want) in HEADER.iter().enumerate() {
        columns[k] = names
            .iter()
            .position(|n| n.eq_ignore_ascii_case(want))
            .ok_or_else(|| Error::Format(format!("header is missing column {want:?}, found {names:?}")))?;
    }

    let mut out = Ingested::default();
    let mut record = csv::StringRecord::new();
    let mut row = 0u64;
    loop {
        row += 1;
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => match parse_row(&record, &columns) {
                Ok(bar) => out.bars.push(bar),
                Err((reason, detail)) => out.diagnostics.push(RowDiagnostic { row, reason, detail }),
            },
            Err(e) if e.is_io_error() => return Err(e.into()),
            Err(e) => out.diagnostics.push(RowDiagnostic {
                row,
                reason: RejectReason::ParseError,
                detail: e.to_string(),
            }),
        }
    }
    Ok(out)
}

/// `(ln close - ln open) / (ln high - ln low)`.
pub fn bar_s_stat(bar: &OhlcBar) -> Result<ScaledValue> {
    if !(bar.high > bar.low) {
        return Err(Error::DegenerateBar);
    }
    let v = (bar.close.ln() - bar.open.ln()) / (bar.high.ln() - bar.low.ln());
    ScaledValue::new(v.clamp(-1.0, 1.0))
}

/// Recipe for synthetic bars: each bar is one Wiener path of `steps_per_bar`
/// steps in log-price with standard deviation `vol_per_bar` over the bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticBars {
    pub n_bars: usize,
    pub steps_per_bar: usize,
    pub vol_per_bar: f64,
    pub start_price: f64,
    pub start: DateTime<Utc>,
    pub bar_seconds: i64,
    pub seed: u64,
}

/// Bars whose opens chain from the previous close; bar `i` uses path stream `i`.
pub fn synthesize_bars(recipe: &SyntheticBars) -> Result<Vec<OhlcBar>> {
    if !(recipe.start_price.is_finite() && recipe.start_price > 0.0) {
        return Err(Error::domain("start price must be finite and > 0"));
    }
    let spec = PathSpec::wiener(0.0, recipe.vol_per_bar, 1.0, recipe.steps_per_bar, recipe.seed)?;
    let mut bars = Vec::with_capacity(recipe.n_bars);
    let mut open = recipe.start_price;
    for i in 0..recipe.n_bars {
        let path = simulate_indexed(&spec, i as u64)?;
        let close = open * path.terminal.exp();
        let bar = OhlcBar {
            timestamp: recipe.start + Duration::seconds(recipe.bar_seconds * i as i64),
            open,
            high: (open * path.maximum.exp()).max(open.max(close)),
            low: (open * path.minimum.exp()).min(open.min(close)),
            close,
        };
        bars.push(bar);
        open = close;
    }
    Ok(bars)
}

/// Move every high and low a `fraction` of the way toward the bar body,
/// imitating extrema that were estimated from too few observations.
pub fn compress_wicks(bars: &[OhlcBar], fraction: f64) -> Vec<OhlcBar> {
    bars.iter()
        .map(|b| {
            let top = b.open.max(b.close);
            let bottom = b.open.min(b.close);
            OhlcBar {
                high: b.high - fraction * (b.high - top),
                low: b.low + fraction * (bottom - b.low),
                ..*b
            }
        })
        .collect()
}

/// Shortest round-trip decimals, so re-ingesting reproduces the bars exactly.
pub fn write_ohlc_csv<W: Write>(bars: &[OhlcBar], mut out: W) -> Result<()> {
    writeln!(out, "{}", HEADER.join(","))?;
    for b in bars {
        writeln!(
            out,
            "{},{},{},{},{}",
            b.timestamp.format("%Y-%m-%dT%H:%M:%SZ"),
            b.open, b.high, b.low, b.close
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingest(text: &str) -> Result<Ingested> {
        ingest_ohlc_csv(text.as_bytes())
    }

    #[test]
    fn accepts_a_valid_row() {
        let got = ingest("timestamp,open,high,low,close\n2020-01-02T00:00:00Z,1.10,1.12,1.09,1.11\n").unwrap();
        assert_eq!(got.bars.len(), 1);
        assert!(got.diagnostics.is_empty());
        assert_eq!(got.bars[0].high, 1.12);
        assert_eq!(got.bars[0].timestamp.to_rfc3339(), "2020-01-02T00:00:00+00:00");
    }

    #[test]
    fn rejection_codes() {
        let text = "timestamp,open,high,low,close\n\
            2020-01-02T00:00:00Z,1.10,1.05,1.00,1.02\n\
            2020-01-03T00:00:00Z,1.10,1.20,1.15,1.12\n\
            2020-01-04T00:00:00Z,1.10,1.10,1.10,1.10\n\
            2020-01-05T00:00:00Z,-1.0,1.10,1.00,1.05\n\
            2020-01-06T00:00:00Z,abc,1.10,1.00,1.05\n\
            not-a-time,1.0,1.1,0.9,1.0\n\
            2020-01-08T00:00:00Z,1.0,1.1\n\
            2020-01-09T00:00:00Z,1.00,1.04,0.99,1.02\n";
        let got = ingest(text).unwrap();
        let codes: Vec<(u64, &str)> = got.diagnostics.iter().map(|d| (d.row, d.reason.code())).collect();
        assert_eq!(
            codes,
            vec![
                (1, "HIGH_BELOW_BODY"),
                (2, "LOW_ABOVE_BODY"),
                (3, "ZERO_RANGE"),
                (4, "NEGATIVE_PRICE"),
                (5, "PARSE_ERROR"),
                (6, "PARSE_ERROR"),
                (7, "PARSE_ERROR"),
            ]
        );
        assert_eq!(got.bars.len(), 1);
        assert_eq!(got.bars[0].close, 1.02);
    }

    #[test]
    fn header_problems_are_fatal() {
        assert!(matches!(ingest(""), Err(Error::Format(_))));
        assert!(matches!(ingest("time,open,high,low,close\n"), Err(Error::Format(_))));
        assert!(matches!(ingest("timestamp,open,high,low,close,volume\n"), Err(Error::Format(_))));
        // reordered columns are fine
        let got = ingest("open,high,low,close,timestamp\n1.0,1.1,0.9,1.05,2020-01-01T00:00:00Z\n").unwrap();
        assert_eq!(got.bars.len(), 1);
    }

    #[test]
    fn s_stat_of_bars() {
        let t = DateTime::parse_from_rfc3339("2020-01-01T00:00:00Z").unwrap().with_timezone(&Utc);
        let up = OhlcBar::new(t, 1.0, 1.1, 1.0, 1.1).unwrap();
        assert_eq!(bar_s_stat(&up).unwrap().get(), 1.0);
        let doji = OhlcBar::new(t, 1.05, 1.10, 1.00, 1.05).unwrap();
        assert_eq!(bar_s_stat(&doji).unwrap().get(), 0.0);
        let bar = OhlcBar::new(t, 1.00, 1.04, 0.99, 1.02).unwrap();
        let want = (1.02f64.ln() - 1.0f64.ln()) / (1.04f64.ln() - 0.99f64.ln());
        // 0.0198026273 / 0.0492710490
        assert!((want - 0.401_912_029_383_698_5).abs() < 1e-12);
        assert!((bar_s_stat(&bar).unwrap().get() - want).abs() < 1e-15);
        let flat = OhlcBar::new(t, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(bar_s_stat(&flat), Err(Error::DegenerateBar)));
    }

    #[test]
    fn synthetic_bars_round_trip_through_csv() {
        let recipe = SyntheticBars {
            n_bars: 50,
            steps_per_bar: 100,
            vol_per_bar: 0.01,
            start_price: 1.1,
            start: DateTime::parse_from_rfc3339("2020-01-01T00:00:00Z").unwrap().with_timezone(&Utc),
            bar_seconds: 3600,
            seed: 4,
        };
        let bars = synthesize_bars(&recipe).unwrap();
        for w in bars.windows(2) {
            assert_eq!(w[0].close, w[1].open);
        }
        let mut buf = Vec::new();
        write_ohlc_csv(&bars, &mut buf).unwrap();
        let back = ingest_ohlc_csv(buf.as_slice()).unwrap();
        assert!(back.diagnostics.is_empty());
        assert_eq!(back.bars, bars);

        let squeezed = compress_wicks(&bars, 0.2);
        for (a, b) in bars.iter().zip(&squeezed) {
            assert!(b.high <= a.high && b.low >= a.low);
            assert!(b.high >= b.open.max(b.close) && b.low <= b.open.min(b.close));
            assert!(bar_s_stat(b).unwrap().get().abs() >= bar_s_stat(a).unwrap().get().abs() - 1e-15);
        }
    }
}
