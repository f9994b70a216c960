//! Writes CSV and SVG versions of the information-per-window charts for
//! every scheme, and of the mask rejection-rate chart.
//!
//! Usage: cargo run --release --example reproduce_figures -- [out_dir]

use std::fs;
use std::path::PathBuf;

use addrhash::mask::DEFAULT_MASK_SIZES;
use addrhash::svg::{rejection_chart, sweep_chart};
use addrhash::{rejection_curve, sweep, synthesize, HashScheme, RejectionModel, SynthConfig};

fn main() -> addrhash::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "figures".into())
        .into();
    fs::create_dir_all(&out)?;

    let trace = synthesize(&SynthConfig::default())?;
    for scheme in [
        HashScheme::AddressBits,
        HashScheme::crc32(),
        HashScheme::fletcher(),
        HashScheme::ModChecksum,
        HashScheme::XorFold,
    ] {
        let report = sweep(&trace, &scheme, 1..=8, 0..=scheme.width() - 1)?;
        fs::write(out.join(format!("{}.csv", scheme.name())), report.to_csv())?;
        fs::write(
            out.join(format!("{}.svg", scheme.name())),
            sweep_chart(&report).render(),
        )?;
    }

    let ks: Vec<u64> = (1..=100).collect();
    let curve = rejection_curve(&DEFAULT_MASK_SIZES, &ks, &RejectionModel::Analytic)?;
    fs::write(out.join("mask.csv"), curve.to_csv())?;
    fs::write(out.join("mask.svg"), rejection_chart(&curve).render())?;
    println!("wrote charts to {}", out.display());
    Ok(())
}
