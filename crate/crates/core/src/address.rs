use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A 48-bit station address.
///
/// Octets are stored in wire order, so `octets()[0]` is the first octet
/// transmitted. Bit index 0 is the most significant bit of that octet and
/// bit index 47 the least significant bit of the last one; bits 32..40 are
/// therefore exactly the fifth octet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address([u8; 6]);

impl Address {
    pub const BITS: u32 = 48;

    pub const fn new(octets: [u8; 6]) -> Self {
        Self(octets)
    }

    pub const fn octets(&self) -> [u8; 6] {
        self.0
    }

    /// The address as a big-endian 48-bit integer (first octet highest).
    pub fn to_u64(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &b| (acc << 8) | u64::from(b))
    }

    /// Builds an address from the low 48 bits of `value`.
    pub fn from_u64(value: u64) -> Self {
        let mut octets = [0u8; 6];
        for (i, o) in octets.iter_mut().enumerate() {
            *o = (value >> (40 - 8 * i)) as u8;
        }
        Self(octets)
    }
}

impl From<[u8; 6]> for Address {
    fn from(octets: [u8; 6]) -> Self {
        Self(octets)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.0;
        write!(
            f,
            "{:02x}-{:02x}-{:02x}-{:02x}-{:02x}-{:02x}",
            o[0], o[1], o[2], o[3], o[4], o[5]
        )
    }
}

/// Parses `count` hex octet pairs separated by a single consistent `-` or `:`.
pub(crate) fn parse_octets<const N: usize>(s: &str) -> Option<[u8; N]> {
    let sep = if s.contains(':') { ':' } else { '-' };
    let mut out = [0u8; N];
    let mut parts = s.split(sep);
    for slot in out.iter_mut() {
        let part = parts.next()?;
        if part.len() != 2 || !part.bytes().all(|b| b.is_ascii_hexdigit()) {
            return None;
        }
        *slot = u8::from_str_radix(part, 16).ok()?;
    }
    if parts.next().is_some() {
        return None;
    }
    Some(out)
}

impl FromStr for Address {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_octets::<6>(s.trim())
            .map(Address)
            .ok_or_else(|| Error::AddressSyntax(s.to_string()))
    }
}
