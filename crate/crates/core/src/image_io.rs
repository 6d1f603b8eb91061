//! 8-bit grayscale rasters, the binary PGM container, and PSNR.
//!
//! Only `P5` with maxval 255 is read or written. The writer always emits the
//! canonical header `P5\n<w> <h>\n255\n`, so `save_pgm(load_pgm(b))` equals `b`
//! whenever `b` was itself canonical.

use std::path::Path;

use thiserror::Error;

use crate::error::{Error, Result};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgmError {
    #[error("malformed magic: expected P5")]
    BadMagic,
    #[error("malformed header: {0}")]
    BadHeader(&'static str),
    #[error("unsupported maxval {0}")]
    UnsupportedMaxval(u32),
    #[error("truncated raster: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("zero image dimension")]
    ZeroDimension,
}

impl PgmError {
    pub fn name(&self) -> &'static str {
        match self {
            PgmError::BadMagic => "pgm_bad_magic",
            PgmError::BadHeader(_) => "pgm_bad_header",
            PgmError::UnsupportedMaxval(_) => "pgm_unsupported_maxval",
            PgmError::Truncated { .. } => "pgm_truncated",
            PgmError::ZeroDimension => "pgm_zero_dimension",
        }
    }
}

/// Row-major 8-bit grayscale image.
#[derive(Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GrayImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(PgmError::ZeroDimension.into());
        }
        if pixels.len() != width * height {
            return Err(PgmError::Truncated {
                expected: width * height,
                found: pixels.len(),
            }
            .into());
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "zero image dimension");
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "zero image dimension");
        let mut pixels = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                pixels.push(f(i, j));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    /// Intensity at row `i`, column `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.pixels[i * self.width + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u8) {
        self.pixels[i * self.width + j] = value;
    }

    pub fn same_dimensions(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, field: &'static str) -> std::result::Result<u32, PgmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PgmError::BadHeader(field));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PgmError::BadHeader(field))
    }
}

/// Parses a binary PGM. Comment lines are allowed anywhere in the header.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(PgmError::BadMagic.into());
    }
    let mut cursor = HeaderCursor { bytes, pos: 2 };
    if cursor.pos < bytes.len()
        && !bytes[cursor.pos].is_ascii_whitespace()
        && bytes[cursor.pos] != b'#'
    {
        return Err(PgmError::BadMagic.into());
    }
    let width = cursor.number("width")? as usize;
    let height = cursor.number("height")? as usize;
    let maxval = cursor.number("maxval")?;
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval(maxval).into());
    }
    if width == 0 || height == 0 {
        return Err(PgmError::ZeroDimension.into());
    }
    // Exactly one whitespace byte separates maxval from the raster.
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(PgmError::Truncated {
                expected: width * height,
                found: 0,
            }
            .into())
        }
    }
    let raster = &bytes[cursor.pos..];
    let expected = width * height;
    if raster.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            found: raster.len(),
        }
        .into());
    }
    GrayImage::new(width, height, raster[..expected].to_vec())
}

pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.pixels);
    out
}

pub fn read_pgm_file(path: impl AsRef<Path>) -> Result<GrayImage> {
    load_pgm(&std::fs::read(path)?)
}

pub fn write_pgm_file(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    std::fs::write(path, save_pgm(img))?;
    Ok(())
}

/// Sum of squared intensity differences.
pub fn squared_error_sum(a: &GrayImage, b: &GrayImage) -> Result<u64> {
    if !a.same_dimensions(b) {
        return Err(Error::DimensionMismatch(
            a.width, a.height, b.width, b.height,
        ));
    }
    Ok(a.pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum())
}

/// `10·log10(255² / MSE)`; `f64::INFINITY` when the images are identical.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    let sse = squared_error_sum(a, b)?;
    if sse == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse as f64 / (a.pixels.len() as f64);
    Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
}

/// Renders a PSNR for text output; infinite values print as `inf`.
pub fn format_psnr(db: f64) -> String {
    if db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{db:.4}")
    }
}
