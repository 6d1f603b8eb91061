//! Blind reversible embedding and extraction.
//!
//! Embedding runs in this order:
//!
//! 1. Interior 0/255 pixels are moved to 1/254 and recorded in a location map.
//! 2. The LSBs of the first header-length frame pixels (raster order) are
//!    saved and replaced by the header. Frame pixels are never touched by a
//!    pass, but they are read as diagonal context, so the header has to be in
//!    place before any pass runs.
//! 3. Pass 1 (Cross sites) carries the saved LSBs, the location map and the
//!    first half of the secret; pass 2 (Dot sites) carries the rest.
//!
//! Shift parameters are first chosen on the image without the header, then
//! checked against the sequences seen once the header is written, and
//! re-selected until every pass fits.
//!
//! Extraction reads the header, undoes the passes in reverse order, restores
//! the saved LSBs and finally the location map.

pub mod bits;
pub mod header;
pub mod location_map;
pub mod pass;
pub mod scramble;

use crate::complexity::ordered_ppe_sequence;
use crate::error::{Error, Result};
use crate::histogram::{select_parameters, SelectionConfig, ShiftParams};
use crate::image_io::{psnr, GrayImage};
use crate::lattice::{is_interior, margin_sites, Parity, Site, PASS_ORDER};
use crate::predictor::PeRecord;

use bits::BitReader;
pub use header::{decode_header, encode_header, header_bit_len, PassHeader, StegoHeader};
pub use location_map::{boundary_sweep, LocationMap, MapEntry};
pub use pass::{embed_pass, extract_pass};

/// Header parameters written for a pass that carries no bits.
const IDLE_PARAMS: ShiftParams = ShiftParams {
    l_p: -1,
    l_z: -2,
    r_p: 0,
    r_z: 2,
};

const MAX_ATTEMPTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedOptions {
    /// 1 (Cross only) or 2 (Cross then Dot).
    pub passes: usize,
    /// Prefix step for parameter selection; defaults to the pass payload.
    pub step: Option<usize>,
    /// Scrambles the secret with a keyed pad when set.
    pub key: Option<String>,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        Self {
            passes: 2,
            step: None,
            key: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PassReport {
    pub target: Parity,
    pub params: ShiftParams,
    /// Stream bits carried, including overhead in pass 1.
    pub bits: usize,
    /// Sequence positions visited.
    pub visited: usize,
    /// Prefix length of the histogram the parameters were chosen on.
    pub prefix_len: usize,
}

#[derive(Debug, Clone)]
pub struct EmbedResult {
    pub marked: GrayImage,
    pub passes: Vec<PassReport>,
    pub map_entries: usize,
    pub secret_bits: usize,
    /// Against the unmodified cover.
    pub psnr: f64,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub secret: Vec<bool>,
    pub recovered: GrayImage,
    pub header: StegoHeader,
}

/// Frame pixels whose LSBs hold the header of a `passes`-pass embedding.
pub fn header_sites(width: usize, height: usize, passes: usize) -> Result<Vec<Site>> {
    let needed = header_bit_len(passes);
    let sites: Vec<Site> = margin_sites(width, height).take(needed).collect();
    if sites.len() < needed {
        return Err(Error::ImageTooSmall {
            needed,
            available: sites.len(),
        });
    }
    Ok(sites)
}

fn read_lsbs(img: &GrayImage, sites: &[Site]) -> Vec<bool> {
    sites.iter().map(|s| img.get(s.i, s.j) & 1 == 1).collect()
}

fn write_lsbs(img: &mut GrayImage, sites: &[Site], bits: &[bool]) {
    for (s, &b) in sites.iter().zip(bits) {
        let v = img.get(s.i, s.j);
        img.set(s.i, s.j, (v & !1) | b as u8);
    }
}

fn select_for(
    seq: &[PeRecord],
    bits: usize,
    step: Option<usize>,
    pass: usize,
) -> Result<(ShiftParams, usize)> {
    let ppes: Vec<i32> = seq.iter().map(|r| r.e_plus).collect();
    let cfg = SelectionConfig {
        rho: bits,
        step: step.unwrap_or(bits).max(1),
    };
    match select_parameters(&ppes, cfg) {
        Ok(sel) => Ok((sel.params, sel.prefix_len)),
        Err(Error::SelectionFailed(_)) => Err(Error::CapacityTooSmall {
            pass: pass + 1,
            bits,
        }),
        Err(e) => Err(e),
    }
}

/// Splits the (possibly scrambled) secret and prepends the pass-1 overhead.
fn build_streams(
    carried: &[bool],
    map_bits: &[bool],
    secret: &[bool],
    passes: usize,
) -> Vec<Vec<bool>> {
    let first_share = if passes == 2 {
        secret.len().div_ceil(2)
    } else {
        secret.len()
    };
    let mut first = Vec::with_capacity(carried.len() + map_bits.len() + first_share);
    first.extend_from_slice(carried);
    first.extend_from_slice(map_bits);
    first.extend_from_slice(&secret[..first_share]);
    let mut streams = vec![first];
    if passes == 2 {
        streams.push(secret[first_share..].to_vec());
    }
    streams
}

/// Hides `secret` in `cover`.
pub fn embed(cover: &GrayImage, secret: &[bool], opts: &EmbedOptions) -> Result<EmbedResult> {
    if !(1..=2).contains(&opts.passes) {
        return Err(Error::InvalidArgument(format!(
            "passes must be 1 or 2, got {}",
            opts.passes
        )));
    }
    if opts.step == Some(0) {
        return Err(Error::InvalidArgument(
            "step size must be at least 1".into(),
        ));
    }
    let (w, h) = (cover.width(), cover.height());
    if w < 8 || h < 8 {
        return Err(Error::ImageTooSmall {
            needed: 8,
            available: w.min(h),
        });
    }
    let sites = header_sites(w, h, opts.passes)?;

    let (swept, map) = boundary_sweep(cover)?;
    let carried = read_lsbs(&swept, &sites);
    let secret = match &opts.key {
        Some(k) => scramble::apply_key(secret, k),
        None => secret.to_vec(),
    };
    let streams = build_streams(&carried, &map.encode(w, h)?, &secret, opts.passes);
    for (p, s) in streams.iter().enumerate() {
        if s.len() > header::MAX_PASS_BITS {
            return Err(Error::CapacityTooSmall {
                pass: p + 1,
                bits: s.len(),
            });
        }
    }

    // Initial choice on the header-free image.
    let mut guess: Vec<(ShiftParams, usize)> = Vec::with_capacity(opts.passes);
    let mut img = swept.clone();
    for (p, stream) in streams.iter().enumerate() {
        if stream.is_empty() {
            guess.push((IDLE_PARAMS, 0));
            continue;
        }
        let seq = ordered_ppe_sequence(&img, PASS_ORDER[p]);
        let chosen = select_for(&seq, stream.len(), opts.step, p)?;
        pass::embed_along(&mut img, &seq, &chosen.0, stream)?;
        guess.push(chosen);
    }

    for _ in 0..MAX_ATTEMPTS {
        let mut img = swept.clone();
        let header = StegoHeader {
            passes: guess
                .iter()
                .zip(&streams)
                .map(|(g, s)| PassHeader {
                    params: g.0,
                    bit_count: s.len(),
                })
                .collect(),
        };
        write_lsbs(&mut img, &sites, &encode_header(&header)?);

        let mut stable = true;
        let mut reports = Vec::with_capacity(opts.passes);
        for (p, stream) in streams.iter().enumerate() {
            let target = PASS_ORDER[p];
            if stream.is_empty() {
                reports.push(PassReport {
                    target,
                    params: guess[p].0,
                    bits: 0,
                    visited: 0,
                    prefix_len: 0,
                });
                continue;
            }
            let seq = ordered_ppe_sequence(&img, target);
            if !pass::params_fit(&seq, &guess[p].0, stream.len()) {
                guess[p] = select_for(&seq, stream.len(), opts.step, p)?;
                stable = false;
            }
            let visited = pass::embed_along(&mut img, &seq, &guess[p].0, stream)?;
            reports.push(PassReport {
                target,
                params: guess[p].0,
                bits: stream.len(),
                visited,
                prefix_len: guess[p].1,
            });
        }
        if stable {
            let db = psnr(cover, &img)?;
            return Ok(EmbedResult {
                marked: img,
                passes: reports,
                map_entries: map.len(),
                secret_bits: secret.len(),
                psnr: db,
            });
        }
    }
    Err(Error::ParamsUnstable(MAX_ATTEMPTS))
}

/// Decodes the header of a marked image.
pub fn read_header(marked: &GrayImage) -> Result<StegoHeader> {
    let margin: Vec<Site> = margin_sites(marked.width(), marked.height())
        .take(header_bit_len(2))
        .collect();
    if margin.len() < header::PREFIX_BITS {
        return Err(Error::NotStego);
    }
    let passes = header::decode_prefix(&read_lsbs(marked, &margin[..header::PREFIX_BITS]))?;
    let len = header_bit_len(passes);
    if margin.len() < len {
        return Err(Error::InvalidHeader("truncated"));
    }
    decode_header(&read_lsbs(marked, &margin[..len]))
}

/// Recovers the secret and the original cover from a marked image.
pub fn extract(marked: &GrayImage, key: Option<&str>) -> Result<Extraction> {
    let (w, h) = (marked.width(), marked.height());
    let header = read_header(marked)?;
    let sites = header_sites(w, h, header.pass_count())?;

    let mut img = marked.clone();
    let mut streams = vec![Vec::new(); header.pass_count()];
    for p in (0..header.pass_count()).rev() {
        let ph = &header.passes[p];
        let (bits, _) = extract_pass(&mut img, PASS_ORDER[p], &ph.params, ph.bit_count)?;
        streams[p] = bits;
    }

    let mut reader = BitReader::new(&streams[0]);
    let carried = reader.take(sites.len(), "saved header LSBs")?;
    write_lsbs(&mut img, &sites, carried);
    let map = LocationMap::decode(&mut reader, w, h)?;
    map.restore(&mut img)?;

    let mut secret = reader.rest().to_vec();
    for s in &streams[1..] {
        secret.extend_from_slice(s);
    }
    if let Some(k) = key {
        secret = scramble::apply_key(&secret, k);
    }
    Ok(Extraction {
        secret,
        recovered: img,
        header,
    })
}

/// Checks that `marked` differs from the swept cover by at most one level,
/// and only at interior sites or header pixels.
pub fn verify_unit_modification(
    adjusted: &GrayImage,
    marked: &GrayImage,
    passes: usize,
) -> Result<()> {
    if !adjusted.same_dimensions(marked) {
        return Err(Error::DimensionMismatch(
            adjusted.width(),
            adjusted.height(),
            marked.width(),
            marked.height(),
        ));
    }
    let (w, h) = (adjusted.width(), adjusted.height());
    let header: std::collections::HashSet<Site> = header_sites(w, h, passes)?.into_iter().collect();
    for i in 0..h {
        for j in 0..w {
            let d = (adjusted.get(i, j) as i32 - marked.get(i, j) as i32).abs();
            if d > 1 {
                return Err(Error::RoundTrip(format!("pixel ({i}, {j}) moved by {d}")));
            }
            if d == 1 && !is_interior(i, j, w, h) && !header.contains(&Site::new(i, j)) {
                return Err(Error::RoundTrip(format!("frame pixel ({i}, {j}) modified")));
            }
        }
    }
    Ok(())
}
