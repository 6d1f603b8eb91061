//! Fixed-layout header carried in the LSBs of frame pixels.
//!
//! Layout, MSB-first: magic (8) · version (4) · pass count (2), then per pass
//! `l_p`, `l_z`, `r_p`, `r_z` as 12-bit two's complement and the pass bit
//! count as 24-bit unsigned.

use super::bits::{BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::histogram::ShiftParams;

pub const MAGIC: u8 = 0xA7;
pub const VERSION: u8 = 1;
pub const PREFIX_BITS: usize = 14;
pub const PASS_BITS: usize = 72;
const PARAM_BITS: u32 = 12;
const COUNT_BITS: u32 = 24;
pub const MAX_PASS_BITS: usize = (1 << COUNT_BITS) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassHeader {
    pub params: ShiftParams,
    /// Stream bits embedded in the pass.
    pub bit_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StegoHeader {
    pub passes: Vec<PassHeader>,
}

impl StegoHeader {
    pub fn pass_count(&self) -> usize {
        self.passes.len()
    }

    pub fn bit_len(&self) -> usize {
        header_bit_len(self.pass_count())
    }
}

/// `14 + 72·passes`.
pub const fn header_bit_len(passes: usize) -> usize {
    PREFIX_BITS + PASS_BITS * passes
}

pub fn encode_header(h: &StegoHeader) -> Result<Vec<bool>> {
    let n = h.pass_count();
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "pass count {n} not in 1..=2"
        )));
    }
    let mut w = BitWriter::new();
    w.put(MAGIC as u64, 8);
    w.put(VERSION as u64, 4);
    w.put(n as u64, 2);
    for p in &h.passes {
        if p.bit_count > MAX_PASS_BITS {
            return Err(Error::InvalidArgument(format!(
                "pass carries {} bits, header allows at most {MAX_PASS_BITS}",
                p.bit_count
            )));
        }
        let ShiftParams { l_p, l_z, r_p, r_z } = p.params;
        for v in [l_p, l_z, r_p, r_z] {
            if !(-2048..=2047).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "bin {v} does not fit 12 bits"
                )));
            }
            w.put_signed(v as i64, PARAM_BITS);
        }
        w.put(p.bit_count as u64, COUNT_BITS);
    }
    Ok(w.into_bits())
}

/// Reads magic, version and pass count.
pub fn decode_prefix(bits: &[bool]) -> Result<usize> {
    if bits.len() < PREFIX_BITS {
        return Err(Error::InvalidHeader("truncated"));
    }
    let mut r = BitReader::new(bits);
    let magic = r.get(8, "magic")?;
    let version = r.get(4, "version")?;
    if magic != MAGIC as u64 || version != VERSION as u64 {
        return Err(Error::NotStego);
    }
    match r.get(2, "pass count")? {
        n @ 1..=2 => Ok(n as usize),
        _ => Err(Error::InvalidHeader("pass count")),
    }
}

pub fn decode_header(bits: &[bool]) -> Result<StegoHeader> {
    let n = decode_prefix(bits)?;
    if bits.len() < header_bit_len(n) {
        return Err(Error::InvalidHeader("truncated"));
    }
    let mut r = BitReader::new(&bits[PREFIX_BITS..]);
    let mut passes = Vec::with_capacity(n);
    for _ in 0..n {
        let mut field = || -> Result<i32> { Ok(r.get_signed(PARAM_BITS, "bin")? as i32) };
        let (l_p, l_z, r_p, r_z) = (field()?, field()?, field()?, field()?);
        let params = ShiftParams { l_p, l_z, r_p, r_z };
        if !params.is_ordered() {
            return Err(Error::InvalidHeader("bin order"));
        }
        let bit_count = r.get(COUNT_BITS, "bit count")? as usize;
        passes.push(PassHeader { params, bit_count });
    }
    Ok(StegoHeader { passes })
}
