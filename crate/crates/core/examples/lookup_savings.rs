//! Replaying a trace against a hashed table saves exactly as many
//! binary-search lookups per frame as the hash's information content.

use addrhash::{bucket, simulate_lookups, synthesize, BitWindow, HashScheme, SynthConfig};

fn main() -> addrhash::Result<()> {
    let trace = synthesize(&SynthConfig {
        stations: 400,
        frames: 20_000,
        skew: 1.2,
        ..SynthConfig::default()
    })?;
    println!(
        "R = {}, N = {}, full binary search = {:.3} lookups",
        trace.frame_count(),
        trace.distinct_count(),
        (2.0 * trace.distinct_count() as f64).log2()
    );
    println!(
        "{:<8} {:>6} {:>10} {:>10} {:>10} {:>10}",
        "scheme", "window", "lookups", "saved", "info", "H(p)"
    );
    for (scheme, window) in [
        (HashScheme::AddressBits, "0:8"),
        (HashScheme::AddressBits, "32:8"),
        (HashScheme::crc32(), "0:8"),
        (HashScheme::fletcher(), "8:8"),
        (HashScheme::ModChecksum, "0:8"),
        (HashScheme::XorFold, "0:8"),
        (HashScheme::crc32(), "0:12"),
    ] {
        let window: BitWindow = window.parse()?;
        let cost = simulate_lookups(&trace, &scheme, window)?;
        let dist = bucket(&trace, &scheme, window)?;
        println!(
            "{:<8} {:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            scheme.name(),
            window.to_string(),
            cost.avg_lookups,
            cost.saved,
            dist.info_content(),
            dist.address_entropy()
        );
    }
    Ok(())
}
