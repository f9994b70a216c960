//! Address reference traces: text ingestion and seeded synthesis.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::address::{parse_octets, Address};
use crate::error::{Error, Result};

/// An ordered sequence of destination address references.
///
/// `distinct` is sorted and `counts[j]` is the number of frames addressed
/// to `distinct[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    refs: Vec<Address>,
    distinct: Vec<Address>,
    counts: Vec<u64>,
}

impl Trace {
    pub fn from_refs(refs: Vec<Address>) -> Result<Self> {
        if refs.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let mut tally: HashMap<Address, u64> = HashMap::new();
        for a in &refs {
            *tally.entry(*a).or_default() += 1;
        }
        let mut pairs: Vec<(Address, u64)> = tally.into_iter().collect();
        pairs.sort_unstable_by_key(|&(a, _)| a);
        let (distinct, counts) = pairs.into_iter().unzip();
        Ok(Self {
            refs,
            distinct,
            counts,
        })
    }

    pub fn refs(&self) -> &[Address] {
        &self.refs
    }

    pub fn distinct(&self) -> &[Address] {
        &self.distinct
    }

    /// Frame counts aligned with [`Trace::distinct`].
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// R, the number of frames.
    pub fn frame_count(&self) -> usize {
        self.refs.len()
    }

    /// N, the number of distinct addresses.
    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for a in &self.refs {
            writeln!(out, "{a}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::with_capacity(self.refs.len() * 18);
        self.write_to(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn stats(&self, top: usize) -> TraceStats {
        trace_stats(self, top)
    }
}

/// Reads one address per line. Blank lines and `#` comments are skipped.
pub fn parse_trace<R: BufRead>(input: R) -> Result<Trace> {
    let mut refs = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let addr = text.parse().map_err(|_| Error::LineSyntax {
            line: i + 1,
            text: text.to_string(),
            reason: "not a 48-bit hex address".to_string(),
        })?;
        refs.push(addr);
    }
    Trace::from_refs(refs)
}

/// A three-octet vendor prefix with a relative selection weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VendorPrefix {
    pub oui: [u8; 3],
    pub weight: f64,
}

impl VendorPrefix {
    pub fn new(oui: [u8; 3], weight: f64) -> Self {
        Self { oui, weight }
    }
}

impl fmt::Display for VendorPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.oui;
        write!(f, "{:02x}:{:02x}:{:02x}@{}", o[0], o[1], o[2], self.weight)
    }
}

/// `aa:bb:cc` or `aa:bb:cc@weight`; weight defaults to 1.
impl FromStr for VendorPrefix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::PrefixSyntax(s.to_string());
        let (oui, weight) = match s.trim().split_once('@') {
            Some((o, w)) => (o, w.trim().parse::<f64>().map_err(|_| bad())?),
            None => (s.trim(), 1.0),
        };
        let oui = parse_octets::<3>(oui.trim()).ok_or_else(bad)?;
        Ok(Self { oui, weight })
    }
}

/// How the low three octets (the vendor-assigned serial) are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuffixAllocation {
    /// Independent uniform draws without replacement.
    Uniform,
    /// Runs of consecutive serials per vendor, as when equipment is bought
    /// in batches. Each run starts at a random serial, holds on average
    /// `mean_batch` stations and advances by `1..=max_gap` per station.
    Batched { mean_batch: u32, max_gap: u32 },
}

impl Default for SuffixAllocation {
    fn default() -> Self {
        SuffixAllocation::Batched {
            mean_batch: 16,
            max_gap: 8,
        }
    }
}

impl FromStr for SuffixAllocation {
    type Err = Error;

    /// `uniform`, `batched` or `batched:<mean_batch>:<max_gap>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Config(format!(
                "suffix allocation {s:?} is not uniform or batched[:mean:gap]"
            ))
        };
        let mut parts = s.trim().split(':');
        match parts.next() {
            Some("uniform") if parts.next().is_none() => Ok(SuffixAllocation::Uniform),
            Some("batched") => {
                let rest: Vec<&str> = parts.collect();
                match rest.as_slice() {
                    [] => Ok(SuffixAllocation::default()),
                    [mean, gap] => Ok(SuffixAllocation::Batched {
                        mean_batch: mean.parse().map_err(|_| bad())?,
                        max_gap: gap.parse().map_err(|_| bad())?,
                    }),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub stations: usize,
    pub frames: usize,
    /// Zipf exponent of station popularity; 0 is uniform.
    pub skew: f64,
    pub prefixes: Vec<VendorPrefix>,
    pub suffixes: SuffixAllocation,
    pub seed: u64,
}

impl SynthConfig {
    pub const DEFAULT_SEED: u64 = 0x1989_0593;

    pub fn validate(&self) -> Result<()> {
        if self.stations == 0 {
            return Err(Error::Config("stations must be at least 1".into()));
        }
        if self.frames < self.stations {
            return Err(Error::Config(format!(
                "frames ({}) must be at least stations ({})",
                self.frames, self.stations
            )));
        }
        if !(self.skew.is_finite() && self.skew >= 0.0) {
            return Err(Error::Config(format!("skew {} must be >= 0", self.skew)));
        }
        if self.prefixes.is_empty() {
            return Err(Error::Config(
                "at least one vendor prefix is required".into(),
            ));
        }
        if let Some(p) = self
            .prefixes
            .iter()
            .find(|p| !(p.weight.is_finite() && p.weight > 0.0))
        {
            return Err(Error::Config(format!(
                "prefix weight must be positive: {p}"
            )));
        }
        if let SuffixAllocation::Batched {
            mean_batch,
            max_gap,
        } = self.suffixes
        {
            if mean_batch == 0 || max_gap == 0 {
                return Err(Error::Config(
                    "batched suffixes need mean_batch and max_gap of at least 1".into(),
                ));
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines; `prefix` lines replace the default
    /// prefix list on first use and append afterwards.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut replaced_prefixes = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line_err = |reason: &str| Error::LineSyntax {
                line: i + 1,
                text: line.to_string(),
                reason: reason.to_string(),
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| line_err("expected key = value"))?;
            let value = value.trim();
            match key.trim() {
                "stations" => self.stations = value.parse().map_err(|_| line_err("bad integer"))?,
                "frames" => self.frames = value.parse().map_err(|_| line_err("bad integer"))?,
                "skew" => self.skew = value.parse().map_err(|_| line_err("bad number"))?,
                "seed" => self.seed = value.parse().map_err(|_| line_err("bad integer"))?,
                "suffixes" => {
                    self.suffixes = value
                        .parse()
                        .map_err(|_| line_err("bad suffix allocation"))?
                }
                "prefix" => {
                    if !replaced_prefixes {
                        self.prefixes.clear();
                        replaced_prefixes = true;
                    }
                    self.prefixes
                        .push(value.parse().map_err(|_| line_err("bad prefix"))?);
                }
                _ => return Err(line_err("unknown key")),
            }
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }
}

impl Default for SynthConfig {
    /// Three vendor blocks, 495 stations, 100 000 frames, Zipf skew 1.
    fn default() -> Self {
        Self {
            stations: 495,
            frames: 100_000,
            skew: 1.0,
            prefixes: vec![
                VendorPrefix::new([0x08, 0x00, 0x2b], 6.0),
                VendorPrefix::new([0xaa, 0x00, 0x04], 3.0),
                VendorPrefix::new([0x08, 0x00, 0x20], 1.0),
            ],
            suffixes: SuffixAllocation::default(),
            seed: Self::DEFAULT_SEED,
        }
    }
}

/// Low three octets available to stations; they are unique across the trace.
const SUFFIX_SPACE: u64 = 1 << 24;

/// Generates a trace with exactly `stations` distinct addresses and
/// `frames` references.
///
/// Every station is referenced once; the remaining `frames - stations`
/// references follow a Zipf law over stations in generation order. The
/// frame order is then shuffled.
pub fn synthesize(config: &SynthConfig) -> Result<Trace> {
    config.validate()?;
    if config.stations as u64 > SUFFIX_SPACE {
        return Err(Error::Capacity {
            requested: config.stations as u64,
            available: SUFFIX_SPACE,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let prefix_pick = WeightedIndex::new(config.prefixes.iter().map(|p| p.weight))
        .map_err(|e| Error::Config(e.to_string()))?;
    let vendors: Vec<usize> = (0..config.stations)
        .map(|_| prefix_pick.sample(&mut rng))
        .collect();
    let serials = match config.suffixes {
        SuffixAllocation::Uniform => {
            rand::seq::index::sample(&mut rng, SUFFIX_SPACE as usize, config.stations)
                .iter()
                .map(|s| s as u32)
                .collect()
        }
        SuffixAllocation::Batched {
            mean_batch,
            max_gap,
        } => batched_serials(
            &mut rng,
            &vendors,
            config.prefixes.len(),
            mean_batch,
            max_gap,
        ),
    };
    let stations: Vec<Address> = vendors
        .iter()
        .zip(&serials)
        .map(|(&v, serial)| {
            let oui = config.prefixes[v].oui;
            let s = serial.to_be_bytes();
            Address::new([oui[0], oui[1], oui[2], s[1], s[2], s[3]])
        })
        .collect();

    let mut refs = Vec::with_capacity(config.frames);
    refs.extend_from_slice(&stations);
    let extra = config.frames - config.stations;
    if extra > 0 {
        let popularity =
            WeightedIndex::new((1..=stations.len()).map(|rank| (rank as f64).powf(-config.skew)))
                .map_err(|e| Error::Config(e.to_string()))?;
        refs.extend((0..extra).map(|_| stations[popularity.sample(&mut rng)]));
    }
    refs.shuffle(&mut rng);
    Trace::from_refs(refs)
}

/// One serial per station, unique across the whole trace. A taken serial
/// is skipped by probing forward.
fn batched_serials<R: Rng>(
    rng: &mut R,
    vendors: &[usize],
    vendor_count: usize,
    mean_batch: u32,
    max_gap: u32,
) -> Vec<u32> {
    let space = SUFFIX_SPACE as u32;
    // (next serial, stations left in the run) per vendor
    let mut runs: Vec<(u32, u32)> = vec![(0, 0); vendor_count];
    let mut used = HashSet::with_capacity(vendors.len());
    vendors
        .iter()
        .map(|&v| {
            let run = &mut runs[v];
            if run.1 == 0 {
                *run = (
                    rng.gen_range(0..space),
                    rng.gen_range(1..=2 * mean_batch - 1),
                );
            }
            let mut serial = run.0 % space;
            while !used.insert(serial) {
                serial = (serial + 1) % space;
            }
            run.0 = serial + rng.gen_range(1..=max_gap);
            run.1 -= 1;
            serial
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStats {
    pub frames: usize,
    pub distinct: usize,
    /// Most referenced addresses, ties broken by address order.
    pub top: Vec<(Address, u64)>,
    /// Fraction of frames sent to the addresses in `top`.
    pub top_share: f64,
    /// Fewest addresses that together receive at least half the frames.
    pub stations_for_half: usize,
    /// Fewest addresses that together receive at least 90% of the frames.
    pub stations_for_90pct: usize,
}

impl fmt::Display for TraceStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "frames\t{}", self.frames)?;
        writeln!(f, "distinct\t{}", self.distinct)?;
        writeln!(f, "top_share\t{:.6}", self.top_share)?;
        writeln!(f, "stations_for_50pct\t{}", self.stations_for_half)?;
        writeln!(f, "stations_for_90pct\t{}", self.stations_for_90pct)?;
        for (addr, count) in &self.top {
            writeln!(f, "{addr}\t{count}")?;
        }
        Ok(())
    }
}

pub fn trace_stats(trace: &Trace, top: usize) -> TraceStats {
    let mut ranked: Vec<(Address, u64)> = trace
        .distinct()
        .iter()
        .copied()
        .zip(trace.counts().iter().copied())
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let frames = trace.frame_count() as u64;
    let covering = |fraction: f64| {
        let need = (fraction * frames as f64).ceil() as u64;
        let mut acc = 0;
        ranked
            .iter()
            .position(|&(_, c)| {
                acc += c;
                acc >= need
            })
            .map_or(ranked.len(), |p| p + 1)
    };
    let stations_for_half = covering(0.5);
    let stations_for_90pct = covering(0.9);

    ranked.truncate(top);
    let top_frames: u64 = ranked.iter().map(|&(_, c)| c).sum();
    TraceStats {
        frames: trace.frame_count(),
        distinct: trace.distinct_count(),
        top_share: top_frames as f64 / frames as f64,
        top: ranked,
        stations_for_half,
        stations_for_90pct,
    }
}
