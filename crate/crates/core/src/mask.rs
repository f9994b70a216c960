//! M x 1 bit hash-mask rejection filters.
//!
//! A frame is accepted iff the mask bit at its address's hash index is set.
//! Wanted addresses are never rejected; an unwanted address is rejected
//! when it lands on a clear bit. With k wanted addresses spread uniformly
//! over M cells the expected fraction of clear bits is `(1 - 1/M)^k`,
//! which tends to `1 - k/M` once M is much larger than k.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::address::Address;
use crate::error::{Error, Result};
use crate::hash::{BitWindow, HashScheme};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashMask {
    bits: Vec<bool>,
    scheme: HashScheme,
    window: BitWindow,
    wanted: usize,
}

impl HashMask {
    /// A mask with no bits set, which rejects everything.
    pub fn empty(scheme: HashScheme, window: BitWindow) -> Result<Self> {
        window.check(scheme.width())?;
        Ok(Self {
            bits: vec![false; window.cells()],
            scheme,
            window,
            wanted: 0,
        })
    }

    /// Sets the bit of every address in `wanted`; duplicates count once.
    pub fn build(wanted: &[Address], scheme: HashScheme, window: BitWindow) -> Result<Self> {
        if wanted.is_empty() {
            return Err(Error::EmptyWantedSet);
        }
        let mut mask = Self::empty(scheme, window)?;
        let unique: BTreeSet<&Address> = wanted.iter().collect();
        for addr in &unique {
            let cell = mask.cell(addr);
            mask.bits[cell] = true;
        }
        mask.wanted = unique.len();
        Ok(mask)
    }

    fn cell(&self, addr: &Address) -> usize {
        let v = self.scheme.hash(addr);
        self.window.extract_unchecked(v.bits(), v.width()) as usize
    }

    pub fn accepts(&self, addr: &Address) -> bool {
        self.bits[self.cell(addr)]
    }

    /// M.
    pub fn size(&self) -> usize {
        self.bits.len()
    }

    /// k, the number of distinct wanted addresses.
    pub fn wanted_count(&self) -> usize {
        self.wanted
    }

    pub fn set_bits(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn bit(&self, cell: usize) -> bool {
        self.bits[cell]
    }

    pub fn scheme(&self) -> &HashScheme {
        &self.scheme
    }

    pub fn window(&self) -> BitWindow {
        self.window
    }

    /// Fraction of clear bits; the rejection rate for uniformly hashed
    /// unwanted addresses.
    pub fn clear_fraction(&self) -> f64 {
        1.0 - self.set_bits() as f64 / self.size() as f64
    }

    /// Hex digits, cell 0 in the most significant bit of the first digit.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|nibble| {
                let v = nibble
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << (3 - i)));
                char::from_digit(v, 16).expect("nibble")
            })
            .collect()
    }
}

pub fn build_mask(wanted: &[Address], scheme: &HashScheme, window: BitWindow) -> Result<HashMask> {
    HashMask::build(wanted, scheme.clone(), window)
}

pub fn filter_accepts(mask: &HashMask, addr: &Address) -> bool {
    mask.accepts(addr)
}

/// `(1 - 1/M)^k`.
pub fn analytic_rejection_rate(k: u64, mask_size: u64) -> f64 {
    assert!(mask_size >= 1, "mask size must be at least 1");
    (1.0 - 1.0 / mask_size as f64).powf(k as f64)
}

/// `max(0, 1 - k/M)`.
pub fn approx_rejection_rate(k: u64, mask_size: u64) -> f64 {
    assert!(mask_size >= 1, "mask size must be at least 1");
    (1.0 - k as f64 / mask_size as f64).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskSizing {
    /// Smallest power of two whose analytic rate meets the target.
    pub mask_size: u64,
    /// Rate achieved by `mask_size`.
    pub rate: f64,
    /// `ceil(k / (1 - target))` from the linear approximation.
    pub linear_size: u64,
}

pub fn mask_size_for(target_rate: f64, k: u64) -> Result<MaskSizing> {
    if !(0.0..1.0).contains(&target_rate) {
        return Err(Error::Unsatisfiable(target_rate));
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "wanted count must be at least 1".into(),
        ));
    }
    let mut mask_size = 1u64;
    while analytic_rejection_rate(k, mask_size) < target_rate {
        mask_size = mask_size
            .checked_mul(2)
            .ok_or(Error::Unsatisfiable(target_rate))?;
    }

    // 1 - 0.8 is not exactly 0.2 in binary; snap quotients within rounding
    // noise of an integer before taking the ceiling.
    let linear = k as f64 / (1.0 - target_rate);
    let nearest = linear.round();
    let linear_size = if (linear - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        linear.ceil()
    } as u64;

    Ok(MaskSizing {
        mask_size,
        rate: analytic_rejection_rate(k, mask_size),
        linear_size,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalRate {
    pub rate: f64,
    pub trials: u64,
}

impl EmpiricalRate {
    pub fn standard_error(&self) -> f64 {
        (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }

    /// Normal-approximation 95% half-width.
    pub fn ci_half_width(&self) -> f64 {
        1.96 * self.standard_error()
    }
}

fn random_address<R: Rng>(rng: &mut R) -> Address {
    Address::from_u64(rng.gen::<u64>() & ((1 << 48) - 1))
}

/// Monte-Carlo rejection rate: each trial draws k distinct wanted addresses
/// and one unwanted address uniformly from the 48-bit space.
///
/// Trial t uses stream t of a ChaCha generator keyed by `seed`, so the
/// result does not depend on how trials are scheduled.
pub fn empirical_rejection_rate(
    scheme: &HashScheme,
    window: BitWindow,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalRate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    window.check(scheme.width())?;
    let width = scheme.width();
    let cells = window.cells();

    let rejected = (0..trials)
        .into_par_iter()
        .map_init(
            || (vec![false; cells], HashSet::with_capacity(k)),
            |(bits, wanted), trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                bits.fill(false);
                wanted.clear();
                while wanted.len() < k {
                    let a = random_address(&mut rng);
                    if wanted.insert(a) {
                        let v = scheme.hash(&a).bits();
                        bits[window.extract_unchecked(v, width) as usize] = true;
                    }
                }
                let unwanted = loop {
                    let a = random_address(&mut rng);
                    if !wanted.contains(&a) {
                        break a;
                    }
                };
                let v = scheme.hash(&unwanted).bits();
                !bits[window.extract_unchecked(v, width) as usize]
            },
        )
        .filter(|&r| r)
        .count() as u64;

    Ok(EmpiricalRate {
        rate: rejected as f64 / trials as f64,
        trials,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum RejectionModel {
    Analytic,
    Approximate,
    Empirical {
        scheme: HashScheme,
        trials: u64,
        seed: u64,
    },
}

impl RejectionModel {
    pub fn tag(&self) -> &'static str {
        match self {
            RejectionModel::Analytic => "analytic",
            RejectionModel::Approximate => "approximate",
            RejectionModel::Empirical { .. } => "empirical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub mask_size: u64,
    pub k: u64,
    pub rate: f64,
    pub ci_half_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RejectionCurve {
    pub model: &'static str,
    /// Ordered by (mask size, k).
    pub rows: Vec<CurveRow>,
}

impl RejectionCurve {
    pub const CSV_HEADER: &'static str = "model,M,k,rate,ci_halfwidth";

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            write!(
                out,
                "{},{},{},{:.15},",
                self.model, row.mask_size, row.k, row.rate
            )
            .expect("writing to a String");
            if let Some(ci) = row.ci_half_width {
                write!(out, "{ci:.15}").expect("writing to a String");
            }
            out.push('\n');
        }
        out
    }

    pub fn rate(&self, k: u64, mask_size: u64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.k == k && r.mask_size == mask_size)
            .map(|r| r.rate)
    }
}

/// Mask sizes of the classic rejection-rate chart.
pub const DEFAULT_MASK_SIZES: [u64; 8] = [2, 4, 8, 16, 32, 64, 128, 512];

pub fn rejection_curve(
    mask_sizes: &[u64],
    ks: &[u64],
    model: &RejectionModel,
) -> Result<RejectionCurve> {
    if mask_sizes.is_empty() || ks.is_empty() {
        return Err(Error::InvalidArgument(
            "mask size and k lists must be non-empty".into(),
        ));
    }
    if let Some(&m) = mask_sizes.iter().find(|&&m| m == 0) {
        return Err(Error::InvalidArgument(format!(
            "mask size {m} must be at least 1"
        )));
    }
    let mut sizes = mask_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();

    let mut rows = Vec::with_capacity(sizes.len() * ks.len());
    for &mask_size in &sizes {
        let window = match model {
            RejectionModel::Empirical { .. } => Some(power_of_two_window(mask_size)?),
            _ => None,
        };
        for &k in &ks {
            let (rate, ci_half_width) = match model {
                RejectionModel::Analytic => (analytic_rejection_rate(k, mask_size), None),
                RejectionModel::Approximate => (approx_rejection_rate(k, mask_size), None),
                RejectionModel::Empirical {
                    scheme,
                    trials,
                    seed,
                } => {
                    let window = window.expect("set for empirical model");
                    let est = empirical_rejection_rate(scheme, window, k as usize, *trials, *seed)?;
                    (est.rate, Some(est.ci_half_width()))
                }
            };
            rows.push(CurveRow {
                mask_size,
                k,
                rate,
                ci_half_width,
            });
        }
    }
    Ok(RejectionCurve {
        model: model.tag(),
        rows,
    })
}

/// Window `0:log2(M)` for a power-of-two M.
pub fn power_of_two_window(mask_size: u64) -> Result<BitWindow> {
    if mask_size < 2 || !mask_size.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "mask size {mask_size} is not a power of two >= 2"
        )));
    }
    BitWindow::new(0, mask_size.trailing_zeros())
}
