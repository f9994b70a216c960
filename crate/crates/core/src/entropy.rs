//! Information content of a hash bucketing over an address trace.
//!
//! Hashing a table of N addresses into cells of n_i entries saves
//! `log2(2N) - log2(2 n_i)` binary-search lookups for every frame whose
//! address lands in cell i. Averaged over R frames that is
//! `sum_i -q_i log2(p_i)` with `p_i = n_i / N` and `q_i = r_i / R`.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hash::{BitWindow, HashScheme};
use crate::trace::Trace;

/// Per-cell address and frame counts after hashing a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDistribution {
    n: Vec<u64>,
    r: Vec<u64>,
    distinct: u64,
    frames: u64,
}

impl CellDistribution {
    /// Builds a distribution from raw cell counts, checking its invariants.
    pub fn from_counts(n: Vec<u64>, r: Vec<u64>) -> Result<Self> {
        if n.len() != r.len() || n.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "cell count vectors have lengths {} and {}",
                n.len(),
                r.len()
            )));
        }
        if let Some(i) = (0..n.len()).find(|&i| (n[i] == 0) != (r[i] == 0)) {
            return Err(Error::InvalidArgument(format!(
                "cell {i} has n = {} but r = {}",
                n[i], r[i]
            )));
        }
        let distinct = n.iter().sum();
        let frames = r.iter().sum();
        if distinct == 0 {
            return Err(Error::EmptyTrace);
        }
        Ok(Self {
            n,
            r,
            distinct,
            frames,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.n.len()
    }

    /// n_i, distinct addresses per cell.
    pub fn addresses(&self) -> &[u64] {
        &self.n
    }

    /// r_i, frames per cell.
    pub fn references(&self) -> &[u64] {
        &self.r
    }

    pub fn distinct_count(&self) -> u64 {
        self.distinct
    }

    pub fn frame_count(&self) -> u64 {
        self.frames
    }

    pub fn p(&self, cell: usize) -> f64 {
        self.n[cell] as f64 / self.distinct as f64
    }

    pub fn q(&self, cell: usize) -> f64 {
        self.r[cell] as f64 / self.frames as f64
    }

    pub fn occupied_cells(&self) -> usize {
        self.n.iter().filter(|&&n| n > 0).count()
    }

    /// `sum_i -q_i log2(p_i)`: expected lookups saved per frame, in bits.
    pub fn info_content(&self) -> f64 {
        let total: f64 = (0..self.cell_count())
            .filter(|&i| self.r[i] > 0)
            .map(|i| -self.q(i) * self.p(i).log2())
            .sum();
        total.max(0.0)
    }

    /// `sum_i -p_i log2(p_i)`: the entropy when every address is equally
    /// referenced.
    pub fn address_entropy(&self) -> f64 {
        let total: f64 = (0..self.cell_count())
            .filter(|&i| self.n[i] > 0)
            .map(|i| {
                let p = self.p(i);
                -p * p.log2()
            })
            .sum();
        total.max(0.0)
    }
}

pub fn info_content(dist: &CellDistribution) -> f64 {
    dist.info_content()
}

pub fn address_entropy(dist: &CellDistribution) -> f64 {
    dist.address_entropy()
}

/// Counts addresses and frames per cell of `window` over `scheme`.
pub fn bucket(trace: &Trace, scheme: &HashScheme, window: BitWindow) -> Result<CellDistribution> {
    window.check(scheme.width())?;
    let values: Vec<u64> = trace
        .distinct()
        .iter()
        .map(|a| scheme.hash(a).bits())
        .collect();
    Ok(bucket_values(
        &values,
        trace.counts(),
        scheme.width(),
        window,
    ))
}

/// `values[j]` is the hash of distinct address j, which is referenced
/// `counts[j]` times. The window must already fit `width`.
fn bucket_values(
    values: &[u64],
    counts: &[u64],
    width: u32,
    window: BitWindow,
) -> CellDistribution {
    let mut n = vec![0u64; window.cells()];
    let mut r = vec![0u64; window.cells()];
    for (&v, &c) in values.iter().zip(counts) {
        let cell = window.extract_unchecked(v, width) as usize;
        n[cell] += 1;
        r[cell] += c;
    }
    CellDistribution {
        distinct: values.len() as u64,
        frames: counts.iter().sum(),
        n,
        r,
    }
}

/// Lookup cost of a frame-by-frame replay of the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookupCost {
    /// `log2(2N)`: binary search over the whole table.
    pub baseline: f64,
    /// Mean of `log2(2 n_i)` over frames.
    pub avg_lookups: f64,
    /// `baseline - avg_lookups`.
    pub saved: f64,
    /// Mean of `1 + ceil(log2 n_i)`, whole comparison steps.
    pub avg_integer_lookups: f64,
}

/// Replays every frame of the trace against the hashed table and averages
/// the binary-search cost of the subtable it lands in.
pub fn simulate_lookups(
    trace: &Trace,
    scheme: &HashScheme,
    window: BitWindow,
) -> Result<LookupCost> {
    window.check(scheme.width())?;
    let mut subtable = vec![0u64; window.cells()];
    for a in trace.distinct() {
        subtable[scheme.index(a, window)? as usize] += 1;
    }

    let mut real = 0.0;
    let mut integer = 0u64;
    for a in trace.refs() {
        let n = subtable[scheme.index(a, window)? as usize];
        real += (2.0 * n as f64).log2();
        integer += 1 + u64::from(n.next_power_of_two().trailing_zeros());
    }
    let frames = trace.frame_count() as f64;
    let baseline = (2.0 * trace.distinct_count() as f64).log2();
    let avg_lookups = real / frames;
    Ok(LookupCost {
        baseline,
        avg_lookups,
        saved: baseline - avg_lookups,
        avg_integer_lookups: integer as f64 / frames,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub start: u32,
    pub length: u32,
    pub info_bits: f64,
}

/// Information content for every bit window in a range, ordered by
/// (length, start).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub scheme: String,
    /// Output width of the scheme, the upper bound of the start axis.
    pub width: u32,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub const CSV_HEADER: &'static str = "scheme,start_bit,window_len,info_bits";

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.rows.len() + 1));
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{:.15}",
                self.scheme, row.start, row.length, row.info_bits
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn rows_for_length(&self, length: u32) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.length == length)
    }

    pub fn mean_for_length(&self, length: u32) -> Option<f64> {
        let (sum, count) = self
            .rows_for_length(length)
            .fold((0.0, 0usize), |(s, c), r| (s + r.info_bits, c + 1));
        (count > 0).then(|| sum / count as f64)
    }
}

/// Sweeps windows with `length` in `lengths` and `start` in `starts`,
/// keeping only those that fit the scheme's output.
pub fn sweep(
    trace: &Trace,
    scheme: &HashScheme,
    lengths: RangeInclusive<u32>,
    starts: RangeInclusive<u32>,
) -> Result<SweepReport> {
    let width = scheme.width();
    let mut windows = Vec::new();
    for length in lengths {
        BitWindow::new(0, length)?;
        for start in starts.clone() {
            let w = BitWindow::new(start, length)?;
            if w.fits(width) {
                windows.push(w);
            }
        }
    }
    if windows.is_empty() {
        return Err(Error::EmptySweep { width });
    }

    let values: Vec<u64> = trace
        .distinct()
        .iter()
        .map(|a| scheme.hash(a).bits())
        .collect();
    let rows = windows
        .par_iter()
        .map(|&w| SweepRow {
            start: w.start(),
            length: w.length(),
            info_bits: bucket_values(&values, trace.counts(), width, w).info_content(),
        })
        .collect();
    Ok(SweepReport {
        scheme: scheme.name().to_string(),
        width,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::Address;

    fn w(start: u32, length: u32) -> BitWindow {
        BitWindow::new(start, length).unwrap()
    }

    #[test]
    fn single_address_occupies_one_cell() {
        let a = Address::new([1, 2, 3, 4, 5, 6]);
        let t = Trace::from_refs(vec![a; 7]).unwrap();
        for scheme in HashScheme::all() {
            let d = bucket(&t, &scheme, w(0, 3)).unwrap();
            assert_eq!(d.cell_count(), 8);
            assert_eq!(d.occupied_cells(), 1);
            let cell = scheme.index(&a, w(0, 3)).unwrap() as usize;
            assert_eq!((d.addresses()[cell], d.references()[cell]), (1, 7));
            assert_eq!(d.info_content(), 0.0);
            assert_eq!(d.address_entropy(), 0.0);
        }
    }

    #[test]
    fn low_bits_of_fourth_octet() {
        let refs: Vec<Address> = (0..4u8).map(|b| Address::new([0, 0, 0, b, 0, 0])).collect();
        let t = Trace::from_refs(refs).unwrap();
        let d = bucket(&t, &HashScheme::AddressBits, w(30, 2)).unwrap();
        assert_eq!(d.addresses(), [1, 1, 1, 1]);
        assert_eq!(d.references(), [1, 1, 1, 1]);
        assert!((d.info_content() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_spread_gives_m_bits() {
        for m in 1..=6u32 {
            let refs: Vec<Address> = (0..1u64 << m).map(Address::from_u64).collect();
            let t = Trace::from_refs(refs).unwrap();
            let d = bucket(&t, &HashScheme::AddressBits, w(48 - m, m)).unwrap();
            assert!((d.info_content() - m as f64).abs() < 1e-12);
            assert!((d.address_entropy() - m as f64).abs() < 1e-12);
            let cost = simulate_lookups(&t, &HashScheme::AddressBits, w(48 - m, m)).unwrap();
            assert!((cost.avg_lookups - 1.0).abs() < 1e-12);
            assert!((cost.saved - m as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_bucketing_saves_nothing() {
        let refs: Vec<Address> = (0..5u64).map(Address::from_u64).collect();
        let t = Trace::from_refs(refs).unwrap();
        let cost = simulate_lookups(&t, &HashScheme::AddressBits, w(0, 4)).unwrap();
        assert!(cost.saved.abs() < 1e-12);
        assert!((cost.avg_lookups - 10f64.log2()).abs() < 1e-12);
        assert_eq!(cost.avg_integer_lookups, 4.0);
    }

    #[test]
    fn from_counts_checks_invariants() {
        assert!(CellDistribution::from_counts(vec![1, 0], vec![0, 0]).is_err());
        assert!(CellDistribution::from_counts(vec![1, 0], vec![1]).is_err());
        assert!(CellDistribution::from_counts(vec![0, 0], vec![0, 0]).is_err());
        let d = CellDistribution::from_counts(vec![1, 3], vec![5, 5]).unwrap();
        assert_eq!((d.distinct_count(), d.frame_count()), (4, 10));
        // 0.5 * 2 + 0.5 * log2(4/3)
        let expected = 0.5 * 2.0 + 0.5 * (4.0f64 / 3.0).log2();
        assert!((d.info_content() - expected).abs() < 1e-12);
    }

    #[test]
    fn sweep_shape_and_errors() {
        let refs: Vec<Address> = (0..50u64).map(|i| Address::from_u64(i * 7919)).collect();
        let t = Trace::from_refs(refs).unwrap();
        let report = sweep(&t, &HashScheme::crc32(), 1..=8, 0..=31).unwrap();
        let expected_rows: usize = (1..=8).map(|m| 33 - m).sum();
        assert_eq!(report.rows.len(), expected_rows);
        let mut sorted = report.rows.clone();
        sorted.sort_by_key(|r| (r.length, r.start));
        assert_eq!(sorted, report.rows);

        assert!(matches!(
            sweep(&t, &HashScheme::XorFold, 1..=4, 8..=12),
            Err(Error::EmptySweep { width: 8 })
        ));
        assert!(sweep(&t, &HashScheme::XorFold, 0..=2, 0..=0).is_err());

        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(SweepReport::CSV_HEADER));
        assert!(lines.next().unwrap().starts_with("crc32,0,1,"));
    }

    #[test]
    fn sweep_of_single_address_is_zero() {
        let t = Trace::from_refs(vec![Address::from_u64(99); 3]).unwrap();
        let report = sweep(&t, &HashScheme::AddressBits, 1..=1, 0..=47).unwrap();
        assert_eq!(report.rows.len(), 48);
        assert!(report.rows.iter().all(|r| r.info_bits == 0.0));
    }
}
