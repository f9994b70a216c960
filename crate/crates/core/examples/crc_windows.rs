//! Every bit window of the CRC is about equally informative, and m bits give
//! close to m bits of information.

use addrhash::{sweep, synthesize, HashScheme, SynthConfig};

fn main() -> addrhash::Result<()> {
    let trace = synthesize(&SynthConfig {
        stations: 500,
        ..SynthConfig::default()
    })?;
    for scheme in [HashScheme::crc32(), HashScheme::crc16(), HashScheme::crc8()] {
        let width = scheme.width();
        let report = sweep(&trace, &scheme, 1..=8, 0..=width - 1)?;
        println!("{scheme} ({width} bits)");
        for m in 1..=8 {
            let rows: Vec<f64> = report.rows_for_length(m).map(|r| r.info_bits).collect();
            let min = rows.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = rows.iter().cloned().fold(0.0, f64::max);
            println!(
                "  m={m}: min {min:.3}  mean {:.3}  max {max:.3}",
                report.mean_for_length(m).unwrap()
            );
        }
    }
    Ok(())
}
