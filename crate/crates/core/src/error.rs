use thiserror::Error;

use crate::image_io::PgmError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pgm(#[from] PgmError),

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("site ({0}, {1}) lacks the context required for prediction")]
    SiteOutsideInterior(usize, usize),

    #[error("PPE value {0} outside [-510, 510]")]
    PpeOutOfRange(i32),

    #[error("histogram saturated: no empty bin on the {0} side")]
    HistogramSaturated(&'static str),

    #[error("insufficient capacity: no bin pair carries {0} bits")]
    InsufficientCapacity(usize),

    #[error("parameter selection failed for a payload of {0} bits")]
    SelectionFailed(usize),

    #[error("image capacity too small for payload ({bits} bits in pass {pass})")]
    CapacityTooSmall { pass: usize, bits: usize },

    #[error("capacity exceeded: {remaining} bits left when the sequence ended")]
    CapacityExceeded { remaining: usize },

    #[error("pathological boundary density: location map needs {0} bits")]
    PathologicalBoundary(usize),

    #[error("image too small: {needed} header pixels required, {available} available")]
    ImageTooSmall { needed: usize, available: usize },

    #[error("not a PPE-RDH image")]
    NotStego,

    #[error("invalid header: {0}")]
    InvalidHeader(&'static str),

    #[error("corrupt or truncated stego image")]
    CorruptStego,

    #[error("truncated embedded stream: {0}")]
    TruncatedStream(&'static str),

    #[error("location map index {0} out of range")]
    MapIndexOutOfRange(usize),

    #[error("could not find consistent embedding parameters after {0} attempts")]
    ParamsUnstable(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("round trip verification failed: {0}")]
    RoundTrip(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable identifier, printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Pgm(e) => e.name(),
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::SiteOutsideInterior(..) => "site_outside_interior",
            Error::PpeOutOfRange(_) => "ppe_out_of_range",
            Error::HistogramSaturated(_) => "histogram_saturated",
            Error::InsufficientCapacity(_) => "insufficient_capacity",
            Error::SelectionFailed(_) => "selection_failed",
            Error::CapacityTooSmall { .. } => "capacity_too_small",
            Error::CapacityExceeded { .. } => "capacity_exceeded",
            Error::PathologicalBoundary(_) => "pathological_boundary_density",
            Error::ImageTooSmall { .. } => "image_too_small",
            Error::NotStego => "not_stego_image",
            Error::InvalidHeader(_) => "invalid_header",
            Error::CorruptStego => "corrupt_stego",
            Error::TruncatedStream(_) => "truncated_stream",
            Error::MapIndexOutOfRange(_) => "map_index_out_of_range",
            Error::ParamsUnstable(_) => "params_unstable",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::RoundTrip(_) => "round_trip_failed",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
        }
    }
}
