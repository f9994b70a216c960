//! Sizing an M x 1 hash mask for a multicast receive filter.

use addrhash::mask::power_of_two_window;
use addrhash::{
    analytic_rejection_rate, approx_rejection_rate, build_mask, empirical_rejection_rate,
    mask_size_for, Address, HashScheme,
};

fn main() -> addrhash::Result<()> {
    let k = 10;
    println!("k = {k} wanted addresses");
    println!(
        "{:>5} {:>10} {:>10} {:>16}",
        "M", "(1-1/M)^k", "1-k/M", "crc32 empirical"
    );
    for m in [2u64, 4, 8, 16, 32, 64, 128, 512] {
        let est =
            empirical_rejection_rate(&HashScheme::crc32(), power_of_two_window(m)?, k, 20_000, 1)?;
        println!(
            "{m:>5} {:>10.4} {:>10.4} {:>9.4} ±{:.4}",
            analytic_rejection_rate(k as u64, m),
            approx_rejection_rate(k as u64, m),
            est.rate,
            est.ci_half_width()
        );
    }

    for target in [0.5, 0.8, 0.9, 0.98] {
        let s = mask_size_for(target, k as u64)?;
        println!(
            "reject {:>4.0}% of unwanted frames: M = {} (achieves {:.3}); linear rule says {}",
            target * 100.0,
            s.mask_size,
            s.rate,
            s.linear_size
        );
    }

    let wanted: Vec<Address> = [
        "01-00-5e-00-00-01",
        "01-00-5e-00-00-fb",
        "33-33-00-00-00-01",
        "01-80-c2-00-00-00",
        "ab-00-00-04-00-00",
    ]
    .iter()
    .map(|s| s.parse())
    .collect::<addrhash::Result<_>>()?;
    let mask = build_mask(&wanted, &HashScheme::crc32(), power_of_two_window(64)?)?;
    println!(
        "64-bit mask for {} groups: {} ({} bits set, rejects {:.1}% of random traffic)",
        mask.wanted_count(),
        mask.to_hex(),
        mask.set_bits(),
        100.0 * mask.clear_fraction()
    );
    Ok(())
}
