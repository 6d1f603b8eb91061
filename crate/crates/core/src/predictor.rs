//! Pixel and prediction-error predictors.
//!
//! Target sites are interpolated from their four axial neighbours; each of
//! those neighbours is in turn interpolated from its four diagonal neighbours,
//! which share its parity. All variances are kept as exact integers scaled by
//! a common factor, so predictions are bit-reproducible everywhere.

use num_rational::Ratio;

use crate::complexity;
use crate::error::{Error, Result};
use crate::image_io::GrayImage;
use crate::lattice::{is_interior, Site};

/// Intermediates of one weighted two-direction interpolation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SitePrediction {
    pub u_prime: Ratio<i64>,
    pub u_dprime: Ratio<i64>,
    pub sigma_prime: Ratio<i64>,
    pub sigma_dprime: Ratio<i64>,
    pub w: Ratio<i64>,
    pub u_plus: i32,
}

/// Prediction-error chain of one target site.
#[derive(Debug, Clone, PartialEq)]
pub struct PeRecord {
    pub site: Site,
    /// Axial prediction of the pixel.
    pub u_plus: i32,
    /// `u - u_plus`.
    pub e: i32,
    /// Rounded mean of the four neighbouring prediction errors.
    pub e_prime: i32,
    /// `e - e_prime`.
    pub e_plus: i32,
    /// `6·Σϱ² − (Σϱ)²`, orders sites exactly like `epsilon`.
    pub complexity_key: u64,
    pub epsilon: f64,
}

/// Rounds `num / den` to the nearest integer, ties away from zero. `den > 0`.
#[inline]
pub fn round_div(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0);
    if num >= 0 {
        (2 * num + den) / (2 * den)
    } else {
        -((-2 * num + den) / (2 * den))
    }
}

/// One interpolation in scaled integer form: `u' = a/2`, `u'' = b/2`,
/// `σ' = s1/scale`, `σ'' = s2/scale`.
#[derive(Debug, Clone, Copy)]
struct Interp {
    a: i64,
    b: i64,
    s1: i64,
    s2: i64,
    scale: i64,
}

impl Interp {
    #[inline]
    fn u_plus(&self) -> i32 {
        // w·u' + (1−w)·u'' = (σ''·u' + σ'·u'') / (σ' + σ'')
        let v = if self.s1 + self.s2 == 0 {
            round_div(self.a + self.b, 4)
        } else {
            round_div(self.s2 * self.a + self.s1 * self.b, 2 * (self.s1 + self.s2))
        };
        v as i32
    }

    fn to_prediction(self) -> SitePrediction {
        let w = if self.s1 + self.s2 == 0 {
            Ratio::new(1, 2)
        } else {
            Ratio::new(self.s2, self.s1 + self.s2)
        };
        SitePrediction {
            u_prime: Ratio::new(self.a, 2),
            u_dprime: Ratio::new(self.b, 2),
            sigma_prime: Ratio::new(self.s1, self.scale),
            sigma_dprime: Ratio::new(self.s2, self.scale),
            w,
            u_plus: self.u_plus(),
        }
    }
}

#[inline]
fn sq(x: i64) -> i64 {
    x * x
}

/// Horizontal pair `(left, right)`, vertical pair `(up, down)`; variances
/// centred on `(u' + u'')/2`, scaled by 48.
#[inline]
fn axial_interp(left: i64, right: i64, up: i64, down: i64) -> Interp {
    let a = left + right;
    let b = up + down;
    let c4 = a + b;
    let s1 = sq(4 * left - c4) + sq(a - b) + sq(4 * right - c4);
    let s2 = sq(4 * up - c4) + sq(b - a) + sq(4 * down - c4);
    Interp {
        a,
        b,
        s1,
        s2,
        scale: 48,
    }
}

/// Main-diagonal pair `(nw, se)`, anti-diagonal pair `(ne, sw)`; variances
/// centred on the site's own value, scaled by 12.
#[inline]
fn diagonal_interp(nw: i64, se: i64, ne: i64, sw: i64, center: i64) -> Interp {
    let a = nw + se;
    let b = ne + sw;
    let c2 = 2 * center;
    let s1 = sq(2 * nw - c2) + sq(a - c2) + sq(2 * se - c2);
    let s2 = sq(2 * ne - c2) + sq(b - c2) + sq(2 * sw - c2);
    Interp {
        a,
        b,
        s1,
        s2,
        scale: 12,
    }
}

#[inline]
fn axial_at(img: &GrayImage, i: usize, j: usize) -> Interp {
    axial_interp(
        img.get(i, j - 1) as i64,
        img.get(i, j + 1) as i64,
        img.get(i - 1, j) as i64,
        img.get(i + 1, j) as i64,
    )
}

#[inline]
fn diagonal_at(img: &GrayImage, i: usize, j: usize) -> Interp {
    diagonal_interp(
        img.get(i - 1, j - 1) as i64,
        img.get(i + 1, j + 1) as i64,
        img.get(i - 1, j + 1) as i64,
        img.get(i + 1, j - 1) as i64,
        img.get(i, j) as i64,
    )
}

fn has_diagonal_context(img: &GrayImage, site: Site) -> bool {
    site.i >= 1 && site.j >= 1 && site.i + 1 < img.height() && site.j + 1 < img.width()
}

/// Weighted horizontal/vertical interpolation of an interior site.
pub fn predict_axial(img: &GrayImage, site: Site) -> Result<SitePrediction> {
    if !is_interior(site.i, site.j, img.width(), img.height()) {
        return Err(Error::SiteOutsideInterior(site.i, site.j));
    }
    Ok(axial_at(img, site.i, site.j).to_prediction())
}

/// Weighted two-diagonal interpolation of a context site.
pub fn predict_diagonal(img: &GrayImage, site: Site) -> Result<SitePrediction> {
    if !has_diagonal_context(img, site) {
        return Err(Error::SiteOutsideInterior(site.i, site.j));
    }
    Ok(diagonal_at(img, site.i, site.j).to_prediction())
}

/// Prediction error of a context site from its diagonal interpolation.
#[inline]
pub(crate) fn diagonal_error(img: &GrayImage, i: usize, j: usize) -> i32 {
    img.get(i, j) as i32 - diagonal_at(img, i, j).u_plus()
}

#[inline]
pub(crate) fn axial_prediction(img: &GrayImage, i: usize, j: usize) -> i32 {
    axial_at(img, i, j).u_plus()
}

/// Rounded mean of the four axial-neighbour prediction errors.
#[inline]
pub fn predicted_error(neighbour_errors: [i32; 4]) -> i32 {
    let sum: i64 = neighbour_errors.iter().map(|&e| e as i64).sum();
    round_div(sum, 4) as i32
}

/// Full prediction-error chain of one interior site.
pub fn ppe_of(img: &GrayImage, site: Site) -> Result<PeRecord> {
    if !is_interior(site.i, site.j, img.width(), img.height()) {
        return Err(Error::SiteOutsideInterior(site.i, site.j));
    }
    let (i, j) = (site.i, site.j);
    let u_plus = axial_prediction(img, i, j);
    let e = img.get(i, j) as i32 - u_plus;
    let e_prime = predicted_error([
        diagonal_error(img, i - 1, j),
        diagonal_error(img, i, j + 1),
        diagonal_error(img, i + 1, j),
        diagonal_error(img, i, j - 1),
    ]);
    let complexity_key = complexity::complexity_key(img, i, j);
    Ok(PeRecord {
        site,
        u_plus,
        e,
        e_prime,
        e_plus: e - e_prime,
        complexity_key,
        epsilon: complexity::epsilon_from_key(complexity_key),
    })
}
