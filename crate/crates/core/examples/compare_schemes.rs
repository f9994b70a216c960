//! Mean information of 8-bit windows for every scheme, over several seeds.
//!
//! With a few hundred stations the good schemes all sit near the ceiling
//! for 8 bits, so differences between them are of the order of the
//! seed-to-seed spread printed here.

use addrhash::{sweep, synthesize, HashScheme, SynthConfig};

fn main() -> addrhash::Result<()> {
    let seeds: Vec<u64> = (0..10).collect();
    println!("{:<12} {:>8} {:>8}", "scheme", "mean", "sd");
    for scheme in HashScheme::all() {
        let means: Vec<f64> = seeds
            .iter()
            .map(|&seed| {
                let trace = synthesize(&SynthConfig {
                    stations: 500,
                    seed,
                    ..SynthConfig::default()
                })?;
                let width = scheme.width();
                let report = sweep(&trace, &scheme, 8..=8, 0..=width - 8)?;
                Ok(report.mean_for_length(8).unwrap())
            })
            .collect::<addrhash::Result<_>>()?;
        let mean = means.iter().sum::<f64>() / means.len() as f64;
        let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
        println!("{:<12} {mean:>8.3} {:>8.3}", scheme.name(), var.sqrt());
    }
    Ok(())
}
