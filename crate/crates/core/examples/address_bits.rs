//! Information in raw address bits over a single-vendor trace.
//!
//! The vendor prefix (bits 0..24) carries nothing; the serial octets are
//! where a bit-extraction hash should look.

use addrhash::{sweep, synthesize, HashScheme, SynthConfig, VendorPrefix};

fn main() -> addrhash::Result<()> {
    let trace = synthesize(&SynthConfig {
        stations: 300,
        frames: 50_000,
        prefixes: vec![VendorPrefix::new([0x08, 0x00, 0x2b], 1.0)],
        ..SynthConfig::default()
    })?;
    let report = sweep(&trace, &HashScheme::AddressBits, 8..=8, 0..=40)?;

    println!("start  bits");
    for row in &report.rows {
        let bar = "#".repeat((row.info_bits * 4.0).round() as usize);
        println!("{:>5}  {:6.3} {bar}", row.start, row.info_bits);
    }
    for (octet, start) in [(4, 24), (5, 32), (6, 40)] {
        let row = report.rows.iter().find(|r| r.start == start).unwrap();
        println!("octet b[{octet}]: {:.3} bits", row.info_bits);
    }
    Ok(())
}
