//! Table-driven, MSB-first CRC over short octet strings.
//!
//! The register is not reflected and there is no final complement. The
//! initial register is configurable; the IEEE 802 preset starts from all
//! ones, the 16- and 8-bit presets from zero.

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Crc {
    width: u32,
    poly: u32,
    init: u32,
    table: Box<[u32; 256]>,
}

impl std::fmt::Debug for Crc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Crc")
            .field("width", &self.width)
            .field("poly", &format_args!("{:#x}", self.poly))
            .field("init", &format_args!("{:#x}", self.init))
            .finish()
    }
}

impl Crc {
    pub const IEEE_802_POLY: u32 = 0x04C1_1DB7;
    pub const CCITT_POLY: u32 = 0x1021;
    pub const CRC8_POLY: u32 = 0x07;

    /// `poly` is the generator without its leading `x^width` term.
    pub fn new(width: u32, poly: u32, init: u32) -> Result<Self> {
        if !matches!(width, 8 | 16 | 32) {
            return Err(Error::CrcParameters(format!(
                "width {width} is not one of 8, 16, 32"
            )));
        }
        let mask = width_mask(width);
        if poly & !mask != 0 || init & !mask != 0 {
            return Err(Error::CrcParameters(format!(
                "polynomial {poly:#x} or initial register {init:#x} wider than {width} bits"
            )));
        }
        if poly & 1 == 0 {
            return Err(Error::CrcParameters(format!(
                "polynomial {poly:#x} has no x^0 term"
            )));
        }
        Ok(Self {
            width,
            poly,
            init,
            table: build_table(width, poly),
        })
    }

    pub fn ieee_802() -> Self {
        Self::new(32, Self::IEEE_802_POLY, u32::MAX).expect("valid preset")
    }

    pub fn ccitt16() -> Self {
        Self::new(16, Self::CCITT_POLY, 0).expect("valid preset")
    }

    pub fn crc8() -> Self {
        Self::new(8, Self::CRC8_POLY, 0).expect("valid preset")
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn init(&self) -> u32 {
        self.init
    }

    pub fn checksum(&self, data: &[u8]) -> u32 {
        let shift = self.width - 8;
        let mask = width_mask(self.width);
        data.iter().fold(self.init, |reg, &byte| {
            let idx = ((reg >> shift) as u8 ^ byte) as usize;
            ((reg << 8) ^ self.table[idx]) & mask
        })
    }
}

fn width_mask(width: u32) -> u32 {
    if width == 32 {
        u32::MAX
    } else {
        (1 << width) - 1
    }
}

fn build_table(width: u32, poly: u32) -> Box<[u32; 256]> {
    let top = 1u32 << (width - 1);
    let mask = width_mask(width);
    let mut table = Box::new([0u32; 256]);
    for (i, slot) in table.iter_mut().enumerate() {
        let mut reg = (i as u32) << (width - 8);
        for _ in 0..8 {
            reg = if reg & top != 0 {
                (reg << 1) ^ poly
            } else {
                reg << 1
            };
        }
        *slot = reg & mask;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Crc::new(12, 0x80f, 0).is_err());
        assert!(Crc::new(8, 0x107, 0).is_err());
        assert!(Crc::new(8, 0x06, 0).is_err());
        assert!(Crc::new(16, 0x1021, 0x1_0000).is_err());
    }

    #[test]
    fn known_check_values() {
        // Standard "123456789" check values for the same conventions:
        // CRC-32/MPEG-2, CRC-16/XMODEM, CRC-8/SMBUS.
        assert_eq!(Crc::ieee_802().checksum(b"123456789"), 0x0376_E6E7);
        assert_eq!(Crc::ccitt16().checksum(b"123456789"), 0x31C3);
        assert_eq!(Crc::crc8().checksum(b"123456789"), 0xF4);
    }
}
