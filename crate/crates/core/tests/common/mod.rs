#![allow(dead_code)]

use std::path::PathBuf;

use ppe_rdh::image_io::read_pgm_file;
use ppe_rdh::GrayImage;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.pgm"))
}

pub fn load_fixture(name: &str) -> Option<GrayImage> {
    let path = fixture(name);
    path.exists()
        .then(|| read_pgm_file(&path).expect("fixture loads"))
}

pub fn random_bits(n: usize, seed: u64) -> Vec<bool> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..n).map(|_| rng.gen()).collect()
}

/// Synthetic cover of one of four kinds, chosen by `seed`: smooth waves,
/// piecewise-flat blocks, waves with saturated patches, or plain noise.
pub fn random_cover(seed: u64) -> GrayImage {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let w = rng.gen_range(64..=128);
    let h = rng.gen_range(64..=128);
    let kind = seed % 4;
    let (fx, fy) = (rng.gen_range(4.0..30.0), rng.gen_range(4.0..30.0));
    let (base, amp) = (rng.gen_range(60.0..190.0), rng.gen_range(10.0..60.0));
    let noise = rng.gen_range(0..=2);
    let block = rng.gen_range(4..16usize);
    let levels: Vec<u8> = (0..64).map(|_| rng.gen_range(20..235)).collect();
    let mut img = GrayImage::from_fn(w, h, |i, j| match kind {
        1 => levels[((i / block) * 7 + j / block) % levels.len()],
        3 => 0,
        _ => (base + amp * ((i as f64) / fy).sin() * ((j as f64) / fx).cos()) as u8,
    });
    for px in img.pixels_mut() {
        *px = if kind == 3 {
            rng.gen()
        } else {
            (*px as i32 + rng.gen_range(-noise..=noise)).clamp(0, 255) as u8
        };
    }
    if kind == 2 {
        for _ in 0..rng.gen_range(1..6) {
            let (i0, j0) = (rng.gen_range(0..h - 8), rng.gen_range(0..w - 8));
            let v = if rng.gen() { 0 } else { 255 };
            for i in i0..i0 + rng.gen_range(2..8) {
                for j in j0..j0 + rng.gen_range(2..8) {
                    img.set(i, j, v);
                }
            }
        }
    }
    img
}
