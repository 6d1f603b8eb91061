//! Overflow/underflow pre-adjustment and its location map.
//!
//! Every interior 0 becomes 1 and every interior 255 becomes 254 before any
//! pass runs; the map records where. Wire format: a 20-bit total bit length,
//! then per entry a `⌈log2(w·h)⌉`-bit linear index and one flag bit
//! (1 when the original value was 255).

use super::bits::{BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::image_io::GrayImage;
use crate::lattice::{is_interior, Site};

pub const LENGTH_BITS: u32 = 20;
pub const MAX_MAP_BITS: usize = (1 << LENGTH_BITS) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapEntry {
    /// Row-major pixel index.
    pub index: usize,
    /// `true` when the original intensity was 255, `false` for 0.
    pub was_max: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocationMap {
    pub entries: Vec<MapEntry>,
}

/// Bits per linear index for a `width × height` image.
pub fn index_bits(width: usize, height: usize) -> u32 {
    let n = (width * height) as u64;
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

impl LocationMap {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Size of the entry list in bits, excluding the length field.
    pub fn body_bits(&self, width: usize, height: usize) -> usize {
        self.entries.len() * (index_bits(width, height) as usize + 1)
    }

    /// Length field plus entries.
    pub fn encode(&self, width: usize, height: usize) -> Result<Vec<bool>> {
        let body = self.body_bits(width, height);
        if body > MAX_MAP_BITS {
            return Err(Error::PathologicalBoundary(body));
        }
        let ib = index_bits(width, height);
        let mut w = BitWriter::new();
        w.put(body as u64, LENGTH_BITS);
        for e in &self.entries {
            w.put(e.index as u64, ib);
            w.put(e.was_max as u64, 1);
        }
        Ok(w.into_bits())
    }

    pub fn decode(reader: &mut BitReader<'_>, width: usize, height: usize) -> Result<Self> {
        let body = reader.get(LENGTH_BITS, "location map length")? as usize;
        let per_entry = index_bits(width, height) as usize + 1;
        if !body.is_multiple_of(per_entry) {
            return Err(Error::TruncatedStream("location map length"));
        }
        let mut entries = Vec::with_capacity(body / per_entry);
        let mut previous: Option<usize> = None;
        for _ in 0..body / per_entry {
            let index = reader.get(per_entry as u32 - 1, "location map entry")? as usize;
            let was_max = reader.get(1, "location map flag")? == 1;
            let site = Site::from_linear(index, width);
            if index >= width * height
                || !is_interior(site.i, site.j, width, height)
                || previous.is_some_and(|p| p >= index)
            {
                return Err(Error::MapIndexOutOfRange(index));
            }
            previous = Some(index);
            entries.push(MapEntry { index, was_max });
        }
        Ok(Self { entries })
    }

    /// Puts the recorded 0/255 values back.
    pub fn restore(&self, img: &mut GrayImage) -> Result<()> {
        let len = img.pixels().len();
        for e in &self.entries {
            if e.index >= len {
                return Err(Error::MapIndexOutOfRange(e.index));
            }
            let px = &mut img.pixels_mut()[e.index];
            *px = match (e.was_max, *px) {
                (true, 254) => 255,
                (false, 1) => 0,
                _ => return Err(Error::CorruptStego),
            };
        }
        Ok(())
    }
}

/// Moves interior extremes one step inward and records them.
pub fn boundary_sweep(img: &GrayImage) -> Result<(GrayImage, LocationMap)> {
    let (w, h) = (img.width(), img.height());
    let mut out = img.clone();
    let mut map = LocationMap::default();
    for i in 0..h {
        for j in 0..w {
            if !is_interior(i, j, w, h) {
                continue;
            }
            let v = img.get(i, j);
            if v == 0 || v == 255 {
                out.set(i, j, if v == 0 { 1 } else { 254 });
                map.entries.push(MapEntry {
                    index: i * w + j,
                    was_max: v == 255,
                });
            }
        }
    }
    let body = map.body_bits(w, h);
    if body > MAX_MAP_BITS {
        return Err(Error::PathologicalBoundary(body));
    }
    Ok((out, map))
}
