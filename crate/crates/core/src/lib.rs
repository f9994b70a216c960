//! Hash functions for 48-bit station addresses and tools to compare them.
//!
//! * [`hash`]: bit extraction, CRC-32/16/8, Fletcher, mod-checksum and XOR
//!   fold, plus bit-window selection of the result.
//! * [`trace`]: address reference traces, read from text or synthesized.
//! * [`entropy`]: lookups saved per frame (information content) for a
//!   scheme and window over a trace, and window sweeps.
//! * [`mask`]: M x 1 bit hash-mask filters and their rejection rates.
//! * [`cli`]: the `addrhash` command line.

pub mod address;
pub mod cli;
pub mod crc;
pub mod entropy;
pub mod error;
pub mod hash;
pub mod mask;
pub mod svg;
pub mod trace;

pub use address::Address;
pub use crc::Crc;
pub use entropy::{
    address_entropy, bucket, info_content, simulate_lookups, sweep, CellDistribution, LookupCost,
    SweepReport, SweepRow,
};
pub use error::{Error, Result};
pub use hash::{
    bit_extract, crc, fletcher, fletcher_with, hash_index, mod_checksum, xor_fold, BitWindow,
    FletcherModulus, HashScheme, HashValue, SchemeKind,
};
pub use mask::{
    analytic_rejection_rate, approx_rejection_rate, build_mask, empirical_rejection_rate,
    filter_accepts, mask_size_for, rejection_curve, EmpiricalRate, HashMask, MaskSizing,
    RejectionCurve, RejectionModel,
};
pub use trace::{
    parse_trace, synthesize, trace_stats, SuffixAllocation, SynthConfig, Trace, TraceStats,
    VendorPrefix,
};
