//! The hash schemes compared for address lookup, and bit-window extraction
//! from their outputs.

use std::fmt;
use std::str::FromStr;

use crate::address::Address;
use crate::crc::Crc;
use crate::error::{Error, Result};

/// A hash output of `width` bits. Bit index 0 is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HashValue {
    bits: u64,
    width: u32,
}

impl HashValue {
    /// Panics if `width` is outside `1..=48` or `bits` does not fit.
    pub fn new(bits: u64, width: u32) -> Self {
        assert!((1..=48).contains(&width), "hash width {width} out of range");
        assert!(bits >> width == 0, "{bits:#x} wider than {width} bits");
        Self { bits, width }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn extract(&self, window: BitWindow) -> Result<u32> {
        window.check(self.width)?;
        Ok(window.extract_unchecked(self.bits, self.width))
    }
}

/// Bits `start..start + length` of a value, most significant first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWindow {
    start: u32,
    length: u32,
}

impl BitWindow {
    pub const MAX_LENGTH: u32 = 16;

    pub fn new(start: u32, length: u32) -> Result<Self> {
        if !(1..=Self::MAX_LENGTH).contains(&length) {
            return Err(Error::WindowLength(length));
        }
        Ok(Self { start, length })
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// Number of cells the window indexes, `2^length`.
    pub fn cells(&self) -> usize {
        1 << self.length
    }

    pub fn fits(&self, width: u32) -> bool {
        self.start
            .checked_add(self.length)
            .is_some_and(|end| end <= width)
    }

    pub(crate) fn check(&self, width: u32) -> Result<()> {
        if self.fits(width) {
            Ok(())
        } else {
            Err(Error::WindowOutOfRange {
                start: self.start,
                length: self.length,
                width,
            })
        }
    }

    #[inline]
    pub(crate) fn extract_unchecked(&self, bits: u64, width: u32) -> u32 {
        let shift = width - self.start - self.length;
        ((bits >> shift) & ((1u64 << self.length) - 1)) as u32
    }
}

impl fmt::Display for BitWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.length)
    }
}

/// `start:length`.
impl FromStr for BitWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("window {s:?} is not start:length"));
        let (start, length) = s.split_once(':').ok_or_else(bad)?;
        let start = start.trim().parse().map_err(|_| bad())?;
        let length = length.trim().parse().map_err(|_| bad())?;
        BitWindow::new(start, length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    AddressBits,
    Crc32Ieee802,
    Crc16,
    Crc8,
    Fletcher,
    ModChecksum,
    XorFold,
}

/// Reduction applied to each Fletcher accumulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FletcherModulus {
    /// One's-complement style, as in the published checksum.
    #[default]
    Mod255,
    /// Plain 8-bit register wraparound.
    Mod256,
}

impl FletcherModulus {
    fn value(self) -> u32 {
        match self {
            FletcherModulus::Mod255 => 255,
            FletcherModulus::Mod256 => 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HashScheme {
    /// The address itself, 48 bits wide.
    AddressBits,
    Crc(Crc),
    Fletcher(FletcherModulus),
    ModChecksum,
    XorFold,
}

impl HashScheme {
    /// Identifiers accepted by [`HashScheme::from_str`], in listing order.
    pub const NAMES: [&'static str; 8] = [
        "bits",
        "crc32",
        "crc16",
        "crc8",
        "fletcher",
        "fletcher256",
        "modsum",
        "xor",
    ];

    pub fn crc32() -> Self {
        HashScheme::Crc(Crc::ieee_802())
    }

    pub fn crc16() -> Self {
        HashScheme::Crc(Crc::ccitt16())
    }

    pub fn crc8() -> Self {
        HashScheme::Crc(Crc::crc8())
    }

    pub fn fletcher() -> Self {
        HashScheme::Fletcher(FletcherModulus::Mod255)
    }

    /// Every named scheme, in [`HashScheme::NAMES`] order.
    pub fn all() -> Vec<HashScheme> {
        Self::NAMES
            .iter()
            .map(|n| n.parse().expect("listed names parse"))
            .collect()
    }

    pub fn kind(&self) -> SchemeKind {
        match self {
            HashScheme::AddressBits => SchemeKind::AddressBits,
            HashScheme::Crc(c) => match c.width() {
                32 => SchemeKind::Crc32Ieee802,
                16 => SchemeKind::Crc16,
                _ => SchemeKind::Crc8,
            },
            HashScheme::Fletcher(_) => SchemeKind::Fletcher,
            HashScheme::ModChecksum => SchemeKind::ModChecksum,
            HashScheme::XorFold => SchemeKind::XorFold,
        }
    }

    pub fn width(&self) -> u32 {
        match self {
            HashScheme::AddressBits => Address::BITS,
            HashScheme::Crc(c) => c.width(),
            HashScheme::Fletcher(_) | HashScheme::ModChecksum => 16,
            HashScheme::XorFold => 8,
        }
    }

    /// Short identifier; round-trips through `FromStr` for the presets.
    pub fn name(&self) -> &'static str {
        match self {
            HashScheme::AddressBits => "bits",
            HashScheme::Crc(c) => match c.width() {
                32 => "crc32",
                16 => "crc16",
                _ => "crc8",
            },
            HashScheme::Fletcher(FletcherModulus::Mod255) => "fletcher",
            HashScheme::Fletcher(FletcherModulus::Mod256) => "fletcher256",
            HashScheme::ModChecksum => "modsum",
            HashScheme::XorFold => "xor",
        }
    }

    pub fn hash(&self, addr: &Address) -> HashValue {
        match self {
            HashScheme::AddressBits => HashValue::new(addr.to_u64(), Address::BITS),
            HashScheme::Crc(c) => crc(addr, c),
            HashScheme::Fletcher(m) => fletcher_with(addr, *m),
            HashScheme::ModChecksum => mod_checksum(addr),
            HashScheme::XorFold => xor_fold(addr),
        }
    }

    /// Hash `addr` and select `window` of the result as a cell index.
    pub fn index(&self, addr: &Address, window: BitWindow) -> Result<u32> {
        self.hash(addr).extract(window)
    }
}

impl fmt::Display for HashScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HashScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "bits" => HashScheme::AddressBits,
            "crc32" => HashScheme::crc32(),
            "crc16" => HashScheme::crc16(),
            "crc8" => HashScheme::crc8(),
            "fletcher" => HashScheme::Fletcher(FletcherModulus::Mod255),
            "fletcher256" => HashScheme::Fletcher(FletcherModulus::Mod256),
            "modsum" => HashScheme::ModChecksum,
            "xor" => HashScheme::XorFold,
            _ => return Err(Error::UnknownScheme(s.to_string())),
        })
    }
}

/// Bits `window` of the raw address.
pub fn bit_extract(addr: &Address, window: BitWindow) -> Result<u32> {
    window.check(Address::BITS)?;
    Ok(window.extract_unchecked(addr.to_u64(), Address::BITS))
}

pub fn crc(addr: &Address, crc: &Crc) -> HashValue {
    HashValue::new(u64::from(crc.checksum(&addr.octets())), crc.width())
}

/// Fletcher checksum with the default modulus 255.
pub fn fletcher(addr: &Address) -> HashValue {
    fletcher_with(addr, FletcherModulus::Mod255)
}

/// `C[0]` in the high octet, `C[1]` in the low octet.
pub fn fletcher_with(addr: &Address, modulus: FletcherModulus) -> HashValue {
    let m = modulus.value();
    let (c0, c1) = addr.octets().iter().fold((0u32, 0u32), |(c0, c1), &b| {
        let c0 = (c0 + u32::from(b)) % m;
        (c0, (c1 + c0) % m)
    });
    HashValue::new(u64::from((c0 << 8) | c1), 16)
}

/// `(2^8 (4 b1 + 2 b3 + b5) + (4 b2 + 2 b4 + b6)) mod 65535`.
pub fn mod_checksum(addr: &Address) -> HashValue {
    let b = addr.octets().map(u32::from);
    let high = 4 * b[0] + 2 * b[2] + b[4];
    let low = 4 * b[1] + 2 * b[3] + b[5];
    HashValue::new(u64::from(((high << 8) + low) % 0xFFFF), 16)
}

pub fn xor_fold(addr: &Address) -> HashValue {
    let x = addr.octets().iter().fold(0u8, |acc, &b| acc ^ b);
    HashValue::new(u64::from(x), 8)
}

pub fn hash_index(addr: &Address, scheme: &HashScheme, window: BitWindow) -> Result<u32> {
    scheme.index(addr, window)
}
