//! MSB-first bit packing over `Vec<bool>`.

use crate::error::{Error, Result};

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn put(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value >> width == 0);
        for k in (0..width).rev() {
            self.bits.push((value >> k) & 1 == 1);
        }
    }

    /// Two's-complement signed field.
    pub fn put_signed(&mut self, value: i64, width: u32) {
        let mask = if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        self.put(value as u64 & mask, width);
    }

    pub fn extend(&mut self, bits: &[bool]) {
        self.bits.extend_from_slice(bits);
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        Self { bits, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [bool]> {
        if self.remaining() < n {
            return Err(Error::TruncatedStream(what));
        }
        let out = &self.bits[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn get(&mut self, width: u32, what: &'static str) -> Result<u64> {
        Ok(self
            .take(width as usize, what)?
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn get_signed(&mut self, width: u32, what: &'static str) -> Result<i64> {
        let raw = self.get(width, what)?;
        let shift = 64 - width;
        Ok(((raw << shift) as i64) >> shift)
    }

    pub fn rest(&mut self) -> &'a [bool] {
        let out = &self.bits[self.pos..];
        self.pos = self.bits.len();
        out
    }
}

/// Bytes to bits, most significant bit of each byte first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |k| (b >> k) & 1 == 1))
        .collect()
}

/// Inverse of [`bytes_to_bits`]; a trailing partial byte is zero-padded.
pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &b)| acc | ((b as u8) << (7 - k)))
        })
        .collect()
}
