//! Reversible data hiding in 8-bit grayscale images.
//!
//! Each checkerboard class is embedded in turn. A pixel is predicted from its
//! four axial neighbours, and that prediction error is itself predicted from
//! the diagonal neighbours' errors. The remaining error (PPE) is histogram
//! shifted around two peak bins. Low-complexity sites are visited first.
//!
//! ```
//! use ppe_rdh::{codec, GrayImage};
//!
//! let cover = GrayImage::from_fn(64, 64, |i, j| (100 + (i + j) / 4) as u8);
//! let secret = vec![true, false, true, true];
//! let res = codec::embed(&cover, &secret, &codec::EmbedOptions::default()).unwrap();
//! let out = codec::extract(&res.marked, None).unwrap();
//! assert_eq!(out.secret, secret);
//! assert_eq!(out.recovered, cover);
//! ```

pub mod bench;
pub mod codec;
pub mod complexity;
pub mod error;
pub mod histogram;
pub mod image_io;
pub mod lattice;
pub mod predictor;

pub use error::{Error, Result};
pub use image_io::GrayImage;
