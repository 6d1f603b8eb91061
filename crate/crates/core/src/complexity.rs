//! Local complexity and the ordered PPE sequence shared by both ends.

use crate::error::{Error, Result};
use crate::image_io::GrayImage;
use crate::lattice::{embeddable_sites, is_interior, parity_of, Parity, Site};
use crate::predictor::{self, PeRecord};

/// The six pairwise absolute differences among the axial neighbours, in the
/// order up–right, up–down, up–left, right–down, right–left, down–left.
pub fn neighbour_differences(img: &GrayImage, i: usize, j: usize) -> [u32; 6] {
    let up = img.get(i - 1, j) as i32;
    let right = img.get(i, j + 1) as i32;
    let down = img.get(i + 1, j) as i32;
    let left = img.get(i, j - 1) as i32;
    [
        up.abs_diff(right),
        up.abs_diff(down),
        up.abs_diff(left),
        right.abs_diff(down),
        right.abs_diff(left),
        down.abs_diff(left),
    ]
}

/// `6·Σϱ² − (Σϱ)² = 36·ε²`, an exact integer sort key.
#[inline]
pub fn complexity_key(img: &GrayImage, i: usize, j: usize) -> u64 {
    let d = neighbour_differences(img, i, j);
    let sum: u64 = d.iter().map(|&x| x as u64).sum();
    let sum_sq: u64 = d.iter().map(|&x| (x as u64) * (x as u64)).sum();
    6 * sum_sq - sum * sum
}

#[inline]
pub fn epsilon_from_key(key: u64) -> f64 {
    (key as f64).sqrt() / 6.0
}

/// Population standard deviation of the six neighbour differences.
pub fn local_complexity(img: &GrayImage, site: Site) -> Result<f64> {
    if site.i < 1 || site.j < 1 || site.i + 1 >= img.height() || site.j + 1 >= img.width() {
        return Err(Error::SiteOutsideInterior(site.i, site.j));
    }
    Ok(epsilon_from_key(complexity_key(img, site.i, site.j)))
}

/// Every embeddable site of `target` with its PPE chain, ordered by local
/// complexity ascending and then raster order.
///
/// Nothing here reads a target-parity pixel except the site's own value, so
/// the order and the `u_plus`/`e_prime` of each record survive any change to
/// target-parity pixels.
pub fn ordered_ppe_sequence(img: &GrayImage, target: Parity) -> Vec<PeRecord> {
    let (w, h) = (img.width(), img.height());
    let sites = embeddable_sites(w, h, target);
    if sites.is_empty() {
        return Vec::new();
    }

    // Diagonal prediction errors of the context sites, computed once.
    let context = target.other();
    let mut context_err = vec![0i32; w * h];
    for i in 1..h - 1 {
        let first = if parity_of(Site::new(i, 1)) == context {
            1
        } else {
            2
        };
        for j in (first..w - 1).step_by(2) {
            context_err[i * w + j] = predictor::diagonal_error(img, i, j);
        }
    }

    let mut records: Vec<PeRecord> = sites
        .into_iter()
        .map(|site| {
            let (i, j) = (site.i, site.j);
            debug_assert!(is_interior(i, j, w, h));
            let u_plus = predictor::axial_prediction(img, i, j);
            let e = img.get(i, j) as i32 - u_plus;
            let e_prime = predictor::predicted_error([
                context_err[(i - 1) * w + j],
                context_err[i * w + j + 1],
                context_err[(i + 1) * w + j],
                context_err[i * w + j - 1],
            ]);
            let key = complexity_key(img, i, j);
            PeRecord {
                site,
                u_plus,
                e,
                e_prime,
                e_plus: e - e_prime,
                complexity_key: key,
                epsilon: epsilon_from_key(key),
            }
        })
        .collect();
    // Stable: equal keys keep raster order.
    records.sort_by_key(|r| r.complexity_key);
    records
}
