//! One histogram-shifting pass over the sites of a single parity.

use crate::complexity::ordered_ppe_sequence;
use crate::error::{Error, Result};
use crate::histogram::ShiftParams;
use crate::image_io::GrayImage;
use crate::lattice::Parity;
use crate::predictor::PeRecord;

/// Marked PPE for one value; consumes `bit` only at a peak.
#[inline]
pub fn mark_ppe(e_plus: i32, p: &ShiftParams, bit: Option<bool>) -> (i32, bool) {
    if e_plus == p.l_p {
        let b = bit.unwrap_or(false);
        (e_plus - b as i32, true)
    } else if e_plus == p.r_p {
        let b = bit.unwrap_or(false);
        (e_plus + b as i32, true)
    } else if (p.l_z..p.l_p).contains(&e_plus) {
        (e_plus - 1, false)
    } else if (p.r_p + 1..=p.r_z).contains(&e_plus) {
        (e_plus + 1, false)
    } else {
        (e_plus, false)
    }
}

/// Original PPE and the carried bit, if any, for one marked value.
#[inline]
pub fn unmark_ppe(e_star: i32, p: &ShiftParams) -> (i32, Option<bool>) {
    if e_star == p.l_p || e_star == p.r_p {
        (e_star, Some(false))
    } else if e_star == p.l_p - 1 {
        (p.l_p, Some(true))
    } else if e_star == p.r_p + 1 {
        (p.r_p, Some(true))
    } else if (p.l_z..p.l_p - 1).contains(&e_star) {
        (e_star + 1, None)
    } else if (p.r_p + 2..=p.r_z).contains(&e_star) {
        (e_star - 1, None)
    } else {
        (e_star, None)
    }
}

/// `true` when `params` can carry `bits` over `seq` reversibly: enough peak
/// occurrences appear before any occupied zero bin.
pub fn params_fit(seq: &[PeRecord], params: &ShiftParams, bits: usize) -> bool {
    if bits == 0 {
        return true;
    }
    let mut carried = 0;
    for r in seq {
        if r.e_plus == params.l_z || r.e_plus == params.r_z {
            return false;
        }
        if r.e_plus == params.l_p || r.e_plus == params.r_p {
            carried += 1;
            if carried == bits {
                return true;
            }
        }
    }
    false
}

/// Embeds `bits` along a precomputed sequence; returns positions visited.
pub fn embed_along(
    img: &mut GrayImage,
    seq: &[PeRecord],
    params: &ShiftParams,
    bits: &[bool],
) -> Result<usize> {
    if bits.is_empty() {
        return Ok(0);
    }
    let mut next = 0;
    for (pos, r) in seq.iter().enumerate() {
        let (e_star, used) = mark_ppe(r.e_plus, params, Some(bits[next]));
        let value = r.u_plus + r.e_prime + e_star;
        if !(0..=255).contains(&value) {
            return Err(Error::InvalidArgument(format!(
                "marked value {value} at ({}, {}) leaves [0, 255]",
                r.site.i, r.site.j
            )));
        }
        img.set(r.site.i, r.site.j, value as u8);
        if used {
            next += 1;
            if next == bits.len() {
                return Ok(pos + 1);
            }
        }
    }
    Err(Error::CapacityExceeded {
        remaining: bits.len() - next,
    })
}

/// Extracts `bit_count` bits along a precomputed sequence, restoring pixels
/// in place; returns the bits and positions visited.
pub fn extract_along(
    img: &mut GrayImage,
    seq: &[PeRecord],
    params: &ShiftParams,
    bit_count: usize,
) -> Result<(Vec<bool>, usize)> {
    let mut bits = Vec::with_capacity(bit_count);
    if bit_count == 0 {
        return Ok((bits, 0));
    }
    for (pos, r) in seq.iter().enumerate() {
        let marked = img.get(r.site.i, r.site.j) as i32;
        let e_star = marked - r.u_plus - r.e_prime;
        let (e_plus, bit) = unmark_ppe(e_star, params);
        let value = r.u_plus + r.e_prime + e_plus;
        if !(0..=255).contains(&value) {
            return Err(Error::CorruptStego);
        }
        img.set(r.site.i, r.site.j, value as u8);
        if let Some(b) = bit {
            bits.push(b);
            if bits.len() == bit_count {
                return Ok((bits, pos + 1));
            }
        }
    }
    Err(Error::CorruptStego)
}

/// Histogram-shifting embed over the `target` sites of `img`.
pub fn embed_pass(
    img: &mut GrayImage,
    target: Parity,
    params: &ShiftParams,
    bits: &[bool],
) -> Result<usize> {
    let seq = ordered_ppe_sequence(img, target);
    embed_along(img, &seq, params, bits)
}

/// Inverse of [`embed_pass`].
pub fn extract_pass(
    img: &mut GrayImage,
    target: Parity,
    params: &ShiftParams,
    bit_count: usize,
) -> Result<(Vec<bool>, usize)> {
    let seq = ordered_ppe_sequence(img, target);
    extract_along(img, &seq, params, bit_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::location_map::boundary_sweep;
    use crate::histogram::{select_parameters, SelectionConfig};
    use crate::lattice::{embeddable_sites, is_interior, parity_of, Site};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256PlusPlus;

    const P: ShiftParams = ShiftParams {
        l_p: -1,
        l_z: -4,
        r_p: 0,
        r_z: 3,
    };

    #[test]
    fn left_peak_carries_bit() {
        assert_eq!(mark_ppe(-1, &P, Some(true)), (-2, true));
        assert_eq!(mark_ppe(-1, &P, Some(false)), (-1, true));
        assert_eq!(mark_ppe(0, &P, Some(true)), (1, true));
    }

    #[test]
    fn shifted_and_untouched() {
        assert_eq!(mark_ppe(-3, &P, Some(true)), (-4, false));
        assert_eq!(mark_ppe(-3, &P, Some(false)), (-4, false));
        assert_eq!(mark_ppe(-4, &P, None), (-5, false));
        assert_eq!(mark_ppe(3, &P, None), (4, false));
        assert_eq!(mark_ppe(-5, &P, None), (-5, false));
        assert_eq!(mark_ppe(4, &P, None), (4, false));
    }

    #[test]
    fn decoding_cases() {
        assert_eq!(unmark_ppe(-2, &P), (-1, Some(true)));
        assert_eq!(unmark_ppe(1, &P), (0, Some(true)));
        assert_eq!(unmark_ppe(-1, &P), (-1, Some(false)));
        assert_eq!(unmark_ppe(-4, &P), (-3, None));
        assert_eq!(unmark_ppe(3, &P), (2, None));
        assert_eq!(unmark_ppe(4, &P), (4, None));
        assert_eq!(unmark_ppe(9, &P), (9, None));
        assert_eq!(unmark_ppe(-6, &P), (-6, None));
    }

    proptest! {
        #[test]
        fn unmark_inverts_mark(e in -20i32..20, b: bool, l_z in -8i32..0, a in 1i32..4, c in 1i32..4, d in 1i32..6) {
            let p = ShiftParams { l_z, l_p: l_z + a, r_p: l_z + a + c, r_z: l_z + a + c + d };
            // Occupied zero bins are excluded before marking.
            prop_assume!(e != p.l_z && e != p.r_z);
            let (marked, used) = mark_ppe(e, &p, Some(b));
            prop_assert!((marked - e).abs() <= 1);
            let (back, bit) = unmark_ppe(marked, &p);
            prop_assert_eq!(back, e);
            prop_assert_eq!(bit.is_some(), used);
            if used {
                prop_assert_eq!(bit, Some(b));
            }
        }
    }

    fn textured(w: usize, h: usize, seed: u64) -> GrayImage {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let mut img = GrayImage::from_fn(w, h, |i, j| {
            (100.0 + 60.0 * ((i as f64) / 9.0).sin() * ((j as f64) / 7.0).cos()) as u8
        });
        for px in img.pixels_mut() {
            *px = (*px as i32 + rng.gen_range(-3..=3)).clamp(0, 255) as u8;
        }
        img
    }

    #[test]
    fn pass_round_trip_both_parities() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
        for target in [Parity::Cross, Parity::Dot] {
            let (cover, _) = boundary_sweep(&textured(48, 40, 11)).unwrap();
            let seq = ordered_ppe_sequence(&cover, target);
            let ppes: Vec<i32> = seq.iter().map(|r| r.e_plus).collect();
            let bits: Vec<bool> = (0..150).map(|_| rng.gen()).collect();
            let sel = select_parameters(
                &ppes,
                SelectionConfig {
                    rho: bits.len(),
                    step: bits.len(),
                },
            )
            .unwrap();
            let mut marked = cover.clone();
            let visited = embed_pass(&mut marked, target, &sel.params, &bits).unwrap();
            assert!(visited <= sel.prefix_len);

            for s in (0..40).flat_map(|i| (0..48).map(move |j| Site::new(i, j))) {
                let d = (marked.get(s.i, s.j) as i32 - cover.get(s.i, s.j) as i32).abs();
                assert!(d <= 1);
                if d == 1 {
                    assert!(is_interior(s.i, s.j, 48, 40) && parity_of(s) == target);
                }
            }

            let mut restored = marked.clone();
            let (out, replayed) =
                extract_pass(&mut restored, target, &sel.params, bits.len()).unwrap();
            assert_eq!(out, bits);
            assert_eq!(replayed, visited);
            assert_eq!(restored, cover);
        }
    }

    #[test]
    fn capacity_exceeded() {
        let mut img = GrayImage::filled(8, 8, 100);
        let p = ShiftParams {
            l_p: 0,
            l_z: -1,
            r_p: 1,
            r_z: 2,
        };
        let n = embeddable_sites(8, 8, Parity::Cross).len();
        let err = embed_pass(&mut img, Parity::Cross, &p, &vec![true; n + 3]).unwrap_err();
        assert!(matches!(err, Error::CapacityExceeded { remaining: 3 }));
    }

    #[test]
    fn extraction_runs_out() {
        let mut img = GrayImage::filled(8, 8, 100);
        let p = ShiftParams {
            l_p: 5,
            l_z: 4,
            r_p: 6,
            r_z: 7,
        };
        assert!(matches!(
            extract_pass(&mut img, Parity::Dot, &p, 1),
            Err(Error::CorruptStego)
        ));
    }

    #[test]
    fn fit_check() {
        let img = GrayImage::filled(10, 10, 50);
        let seq = ordered_ppe_sequence(&img, Parity::Cross);
        let n = seq.len();
        let p = ShiftParams {
            l_p: 0,
            l_z: -1,
            r_p: 1,
            r_z: 2,
        };
        assert!(params_fit(&seq, &p, n));
        assert!(!params_fit(&seq, &p, n + 1));
        let occupied_zero = ShiftParams {
            l_p: 1,
            l_z: 0,
            r_p: 2,
            r_z: 3,
        };
        assert!(!params_fit(&seq, &occupied_zero, 1));
    }
}
