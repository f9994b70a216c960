//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::time::{Duration, Instant};

use addrhash::{
    analytic_rejection_rate, build_mask, empirical_rejection_rate, mask_size_for, simulate_lookups,
    sweep, synthesize, trace::SuffixAllocation, Address, BitWindow, Crc, HashScheme, SynthConfig,
    Trace, VendorPrefix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_address(rng: &mut impl Rng) -> Address {
    Address::from_u64(rng.gen::<u64>() & ((1 << 48) - 1))
}

/// N = 500 stations over three vendor prefixes, Zipf skew 1, R = 100 000.
fn comparison_trace() -> Trace {
    synthesize(&SynthConfig {
        stations: 500,
        frames: 100_000,
        skew: 1.0,
        prefixes: vec![
            VendorPrefix::new([0x08, 0x00, 0x2b], 6.0),
            VendorPrefix::new([0xaa, 0x00, 0x04], 3.0),
            VendorPrefix::new([0x08, 0x00, 0x20], 1.0),
        ],
        suffixes: SuffixAllocation::default(),
        seed: SynthConfig::DEFAULT_SEED,
    })
    .expect("valid config")
}

fn mask_data_points() -> Outcome {
    let r8 = analytic_rejection_rate(10, 8);
    let r512 = analytic_rejection_rate(10, 512);
    ensure((r8 - 0.2631).abs() <= 0.005, || {
        format!("k=10 M=8 gave {r8}")
    })?;
    ensure((r512 - 0.9806).abs() <= 0.005, || {
        format!("k=10 M=512 gave {r512}")
    })?;
    Ok(format!("M=8: {r8:.4}, M=512: {r512:.4}"))
}

fn linear_regime() -> Outcome {
    let mut checked = 0;
    let mut worst = 0.0f64;
    for k in 1..=64u64 {
        for m in 2..=4096u64 {
            if m < 10 * k {
                continue;
            }
            let diff = (analytic_rejection_rate(k, m) - (1.0 - k as f64 / m as f64)).abs();
            let bound = (k * k) as f64 / (m * m) as f64;
            ensure(diff <= bound, || {
                format!("k={k} M={m}: |diff| {diff} > {bound}")
            })?;
            worst = worst.max(diff / bound);
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} grid points, worst diff/bound {worst:.3}"
    ))
}

fn five_times_rule() -> Outcome {
    for k in 1..=100u64 {
        let s = mask_size_for(0.8, k).map_err(|e| e.to_string())?;
        ensure(s.linear_size == 5 * k, || {
            format!("k={k}: linear size {} != {}", s.linear_size, 5 * k)
        })?;
    }
    Ok("linear size 5k for k = 1..100".into())
}

fn lookup_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let schemes = HashScheme::all();
    let mut worst = 0.0f64;
    for case in 0..200 {
        let stations = rng.gen_range(1..=600);
        let prefixes = (0..rng.gen_range(1..=4))
            .map(|_| VendorPrefix::new(rng.gen(), rng.gen_range(0.5..4.0)))
            .collect();
        let trace = synthesize(&SynthConfig {
            stations,
            frames: 10_000,
            skew: rng.gen_range(0.0..2.0),
            prefixes,
            suffixes: SuffixAllocation::default(),
            seed: rng.gen(),
        })
        .map_err(|e| e.to_string())?;
        let scheme = &schemes[rng.gen_range(0..schemes.len())];
        let length = rng.gen_range(1..=scheme.width().min(16));
        let start = rng.gen_range(0..=scheme.width() - length);
        let window = BitWindow::new(start, length).unwrap();
        let info = addrhash::bucket(&trace, scheme, window)
            .map_err(|e| e.to_string())?
            .info_content();
        let saved = simulate_lookups(&trace, scheme, window)
            .map_err(|e| e.to_string())?
            .saved;
        let diff = (saved - info).abs();
        ensure(diff <= 1e-9, || {
            format!("case {case}: {scheme} {window}: saved {saved} vs info {info}")
        })?;
        worst = worst.max(diff);
    }
    Ok(format!("200 triples, max |saved - info| = {worst:.2e}"))
}

fn crc_near_optimal() -> Outcome {
    let trace = comparison_trace();
    let report = sweep(&trace, &HashScheme::crc32(), 1..=8, 0..=31).map_err(|e| e.to_string())?;
    let mut worst = f64::INFINITY;
    for row in &report.rows {
        let ratio = row.info_bits / f64::from(row.length);
        ensure(ratio >= 0.9, || {
            format!(
                "window {}:{} has {} bits",
                row.start, row.length, row.info_bits
            )
        })?;
        worst = worst.min(ratio);
    }
    Ok(format!(
        "{} windows, min info/m = {worst:.4}",
        report.rows.len()
    ))
}

fn prefix_deadness() -> Outcome {
    let trace = synthesize(&SynthConfig {
        stations: 500,
        frames: 100_000,
        skew: 1.0,
        prefixes: vec![VendorPrefix::new([0x08, 0x00, 0x2b], 1.0)],
        suffixes: SuffixAllocation::default(),
        seed: SynthConfig::DEFAULT_SEED,
    })
    .map_err(|e| e.to_string())?;
    let report =
        sweep(&trace, &HashScheme::AddressBits, 8..=8, 0..=16).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for row in &report.rows {
        ensure(row.info_bits < 2.0, || {
            format!("window {}:8 has {} bits", row.start, row.info_bits)
        })?;
        worst = worst.max(row.info_bits);
    }
    Ok(format!(
        "{} windows, max {worst:.4} bits",
        report.rows.len()
    ))
}

fn scheme_ranking() -> Outcome {
    let trace = comparison_trace();
    let mean8 = |scheme: HashScheme| -> Result<f64, String> {
        let width = scheme.width();
        let report = sweep(&trace, &scheme, 8..=8, 0..=width - 8).map_err(|e| e.to_string())?;
        Ok(report.mean_for_length(8).expect("8-bit rows"))
    };
    let crc = mean8(HashScheme::crc32())?;
    let fletcher = mean8(HashScheme::fletcher())?;
    let modsum = mean8(HashScheme::ModChecksum)?;
    let xor = mean8(HashScheme::XorFold)?;
    let summary = format!("crc32 {crc:.4} fletcher {fletcher:.4} modsum {modsum:.4} xor {xor:.4}");
    ensure(crc >= fletcher, || format!("crc32 < fletcher: {summary}"))?;
    ensure(fletcher >= modsum, || {
        format!("fletcher < modsum: {summary}")
    })?;
    ensure(xor >= 0.9 * crc, || format!("xor < 0.9 crc32: {summary}"))?;
    Ok(summary)
}

fn perfect_rejection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let schemes = HashScheme::all();
    let mut masks = 0;
    for i in 0..1_000 {
        let scheme = &schemes[i % schemes.len()];
        let max_len = scheme.width().min(9);
        let length = rng.gen_range(3..=max_len);
        let start = rng.gen_range(0..=scheme.width() - length);
        let window = BitWindow::new(start, length).unwrap();
        let k = rng.gen_range(1..=64);
        let wanted: Vec<Address> = (0..k).map(|_| random_address(&mut rng)).collect();
        let mask = build_mask(&wanted, scheme, window).map_err(|e| e.to_string())?;
        if let Some(a) = wanted.iter().find(|a| !mask.accepts(a)) {
            return Err(format!("{scheme} {window}: wanted {a} rejected"));
        }
        masks += 1;
    }
    Ok(format!("{masks} masks, no false negatives"))
}

fn monte_carlo_agreement() -> Outcome {
    let window = BitWindow::new(0, 3).unwrap();
    let est = empirical_rejection_rate(&HashScheme::crc32(), window, 10, 100_000, 2024)
        .map_err(|e| e.to_string())?;
    let expected = 0.2631;
    let se = est.standard_error();
    let z = (est.rate - expected).abs() / se;
    ensure(z <= 3.0, || {
        format!(
            "rate {} is {z:.2} standard errors from {expected}",
            est.rate
        )
    })?;
    Ok(format!("rate {:.4}, {z:.2} standard errors", est.rate))
}

/// MSB-first shift register, one message bit per step.
fn crc_oracle(width: u32, poly: u32, init: u32, data: &[u8]) -> u32 {
    let mask = if width == 32 {
        u32::MAX
    } else {
        (1 << width) - 1
    };
    let mut reg = init;
    for &byte in data {
        for bit in (0..8).rev() {
            let feedback = ((reg >> (width - 1)) & 1) ^ u32::from((byte >> bit) & 1);
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= poly;
            }
        }
    }
    reg
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for crc in [Crc::ieee_802(), Crc::ccitt16(), Crc::crc8()] {
        for _ in 0..10_000 {
            let a = random_address(&mut rng);
            let fast = crc.checksum(&a.octets());
            let slow = crc_oracle(crc.width(), crc.poly(), crc.init(), &a.octets());
            ensure(fast == slow, || {
                format!("CRC-{} of {a}: {fast:#x} vs oracle {slow:#x}", crc.width())
            })?;
        }
    }
    let f1 = addrhash::fletcher(&"01-00-00-00-00-00".parse().unwrap()).bits();
    let f2 = addrhash::fletcher(&"01-02-03-04-05-06".parse().unwrap()).bits();
    ensure(f1 == 0x0106 && f2 == 0x1538, || {
        format!("fletcher vectors gave {f1:#06x}, {f2:#06x}")
    })?;
    Ok("3 polynomials x 10000 addresses; fletcher 0x0106, 0x1538".into())
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "mask data points",
            budget: Duration::from_secs(1),
            check: mask_data_points,
        },
        Criterion {
            id: 2,
            name: "linear regime",
            budget: Duration::from_secs(1),
            check: linear_regime,
        },
        Criterion {
            id: 3,
            name: "5x rule",
            budget: Duration::from_secs(1),
            check: five_times_rule,
        },
        Criterion {
            id: 4,
            name: "lookup identity",
            budget: Duration::from_secs(10),
            check: lookup_identity,
        },
        Criterion {
            id: 5,
            name: "CRC near-optimality",
            budget: Duration::from_secs(30),
            check: crc_near_optimal,
        },
        Criterion {
            id: 6,
            name: "prefix deadness",
            budget: Duration::from_secs(10),
            check: prefix_deadness,
        },
        Criterion {
            id: 7,
            name: "scheme ranking",
            budget: Duration::from_secs(30),
            check: scheme_ranking,
        },
        Criterion {
            id: 8,
            name: "perfect rejection",
            budget: Duration::from_secs(10),
            check: perfect_rejection,
        },
        Criterion {
            id: 9,
            name: "Monte-Carlo agreement",
            budget: Duration::from_secs(10),
            check: monte_carlo_agreement,
        },
        Criterion {
            id: 10,
            name: "oracle equivalences",
            budget: Duration::from_secs(5),
            check: oracle_equivalence,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let started = Instant::now();
        let outcome = (c.check)();
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!(
                "{detail}; took {elapsed:.2?}, budget {:?}",
                c.budget
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {:<24} {detail} ({elapsed:.2?})", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2} {:<24} {why}", c.id, c.name);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
