//! Payload/distortion sweep over a set of covers.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use crate::codec::{self, boundary_sweep, EmbedOptions};
use crate::error::{Error, Result};
use crate::histogram::ShiftParams;
use crate::image_io::{format_psnr, psnr, read_pgm_file, write_pgm_file, GrayImage};

pub const DEFAULT_SEED: u64 = 0x5EED_2013;
pub const DEFAULT_PAYLOADS: [usize; 5] = [0, 1_000, 5_000, 10_000, 20_000];

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub images: Vec<PathBuf>,
    pub payloads: Vec<usize>,
    pub passes: usize,
    pub step: Option<usize>,
    pub seed: u64,
    /// Marked images are written here and read back for the PSNR column.
    pub marked_dir: PathBuf,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub image: String,
    pub payload_bits: usize,
    pub passes: usize,
    pub psnr_db: f64,
    pub params: Vec<ShiftParams>,
    pub seconds: f64,
}

/// The first `n` bits of the stream produced by `seed`.
pub fn secret_bits(seed: u64, n: usize) -> Vec<bool> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..n).map(|_| rng.gen()).collect()
}

fn image_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Embeds, saves, reloads, verifies and measures one (image, payload) cell.
pub fn run_cell(
    name: &str,
    cover: &GrayImage,
    payload: usize,
    cfg: &BenchConfig,
) -> Result<BenchRow> {
    let start = Instant::now();
    let secret = secret_bits(cfg.seed, payload);
    let opts = EmbedOptions {
        passes: cfg.passes,
        step: cfg.step,
        key: None,
    };
    let res = codec::embed(cover, &secret, &opts)?;
    let path = cfg
        .marked_dir
        .join(format!("{name}_{payload}_p{}.pgm", cfg.passes));
    write_pgm_file(&path, &res.marked)?;
    let marked = read_pgm_file(&path)?;

    let out = codec::extract(&marked, None)?;
    if out.secret != secret {
        return Err(Error::RoundTrip(format!(
            "{name} @ {payload}: secret differs"
        )));
    }
    if &out.recovered != cover {
        return Err(Error::RoundTrip(format!(
            "{name} @ {payload}: cover differs"
        )));
    }
    let (adjusted, _) = boundary_sweep(cover)?;
    codec::verify_unit_modification(&adjusted, &marked, cfg.passes)?;

    Ok(BenchRow {
        image: name.to_string(),
        payload_bits: payload,
        passes: cfg.passes,
        psnr_db: psnr(cover, &marked)?,
        params: res.passes.iter().map(|p| p.params).collect(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every cell, in parallel, returning rows in input order.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    std::fs::create_dir_all(&cfg.marked_dir)?;
    let covers = cfg
        .images
        .iter()
        .map(|p| Ok((image_name(p), read_pgm_file(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, usize)> = (0..covers.len())
        .flat_map(|k| cfg.payloads.iter().map(move |&p| (k, p)))
        .collect();
    cells
        .par_iter()
        .map(|&(k, payload)| run_cell(&covers[k].0, &covers[k].1, payload, cfg))
        .collect()
}

pub fn write_csv<W: Write>(mut out: W, rows: &[BenchRow], seed: u64) -> Result<()> {
    writeln!(out, "# secret: xoshiro256++ bit stream, seed {seed}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "image",
        "payload_bits",
        "passes",
        "psnr_db",
        "lp1",
        "lz1",
        "rp1",
        "rz1",
        "lp2",
        "lz2",
        "rp2",
        "rz2",
        "seconds",
    ])?;
    for r in rows {
        let mut rec = vec![
            r.image.clone(),
            r.payload_bits.to_string(),
            r.passes.to_string(),
            format_psnr(r.psnr_db),
        ];
        for k in 0..2 {
            match r.params.get(k) {
                Some(p) => rec.extend([p.l_p, p.l_z, p.r_p, p.r_z].map(|v| v.to_string())),
                None => rec.extend(std::iter::repeat_n(String::new(), 4)),
            }
        }
        rec.push(format!("{:.3}", r.seconds));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn secret_is_reproducible() {
        assert_eq!(secret_bits(7, 100), secret_bits(7, 100));
        assert_eq!(secret_bits(7, 100)[..40], secret_bits(7, 40)[..]);
        assert_ne!(secret_bits(7, 100), secret_bits(8, 100));
    }

    #[test]
    fn csv_layout() {
        let p = ShiftParams {
            l_p: -1,
            l_z: -5,
            r_p: 0,
            r_z: 4,
        };
        let rows = vec![
            BenchRow {
                image: "a".into(),
                payload_bits: 10,
                passes: 1,
                psnr_db: 60.123456,
                params: vec![p],
                seconds: 0.5,
            },
            BenchRow {
                image: "b".into(),
                payload_bits: 0,
                passes: 2,
                psnr_db: f64::INFINITY,
                params: vec![p, p],
                seconds: 0.25,
            },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows, 42).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# secret: xoshiro256++ bit stream, seed 42");
        assert_eq!(
            lines[1],
            "image,payload_bits,passes,psnr_db,lp1,lz1,rp1,rz1,lp2,lz2,rp2,rz2,seconds"
        );
        assert_eq!(lines[2], "a,10,1,60.1235,-1,-5,0,4,,,,,0.500");
        assert_eq!(lines[3], "b,0,2,inf,-1,-5,0,4,-1,-5,0,4,0.250");
    }
}
