//! Regenerates `fixtures/synthetic_fx_bars.csv`.
//!
//! Hourly bars from a driftless log-price Wiener process, each bar built from
//! 2000 sub-steps. Run with `cargo run --release -p srange-core --example make_fixture [path]`.

use std::fs::File;
use std::io::BufWriter;

use srange_core::empirical::{synthesize_bars, write_ohlc_csv, SyntheticBars};

fn recipe() -> SyntheticBars {
    SyntheticBars {
        n_bars: 10_000,
        steps_per_bar: 2000,
        vol_per_bar: 0.005,
        start_price: 1.1,
        start: "2020-01-01T00:00:00Z".parse().expect("static timestamp"),
        bar_seconds: 3600,
        seed: 20_200_101,
    }
}

fn main() -> srange_core::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/synthetic_fx_bars.csv").to_string());
    let bars = synthesize_bars(&recipe())?;
    write_ohlc_csv(&bars, BufWriter::new(File::create(&path)?))?;
    eprintln!("wrote {} bars to {path}", bars.len());
    Ok(())
}
