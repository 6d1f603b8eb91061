//! Checkerboard partition of the pixel grid.
//!
//! A site `(i, j)` is `Cross` when `i + j` is odd and `Dot` otherwise. Only
//! sites at least two pixels away from every border are ever embedded; the
//! outer two-pixel frame provides diagonal context and hosts the header.

/// Pixel position, `i` is the row and `j` the column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub i: usize,
    pub j: usize,
}

impl Site {
    pub const fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    #[inline]
    pub fn linear(self, width: usize) -> usize {
        self.i * width + self.j
    }

    #[inline]
    pub fn from_linear(index: usize, width: usize) -> Self {
        Self::new(index / width, index % width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Cross,
    Dot,
}

impl Parity {
    pub fn other(self) -> Parity {
        match self {
            Parity::Cross => Parity::Dot,
            Parity::Dot => Parity::Cross,
        }
    }
}

/// Embedding order of the passes.
pub const PASS_ORDER: [Parity; 2] = [Parity::Cross, Parity::Dot];

/// Width of the frame excluded from embedding.
pub const MARGIN: usize = 2;

pub fn parity_of(site: Site) -> Parity {
    if (site.i + site.j) % 2 == 1 {
        Parity::Cross
    } else {
        Parity::Dot
    }
}

/// True when `(i, j)` lies in the embeddable interior of a `width × height` grid.
#[inline]
pub fn is_interior(i: usize, j: usize, width: usize, height: usize) -> bool {
    i >= MARGIN && j >= MARGIN && i + MARGIN < height && j + MARGIN < width
}

/// Interior sites of the given parity in raster order.
pub fn embeddable_sites(width: usize, height: usize, target: Parity) -> Vec<Site> {
    if width < 2 * MARGIN + 1 || height < 2 * MARGIN + 1 {
        return Vec::new();
    }
    let mut sites = Vec::with_capacity((width - 2 * MARGIN) * (height - 2 * MARGIN) / 2 + 1);
    for i in MARGIN..height - MARGIN {
        let first = if parity_of(Site::new(i, MARGIN)) == target {
            MARGIN
        } else {
            MARGIN + 1
        };
        sites.extend((first..width - MARGIN).step_by(2).map(|j| Site::new(i, j)));
    }
    sites
}

/// Number of interior sites (both parities).
pub fn interior_len(width: usize, height: usize) -> usize {
    width.saturating_sub(2 * MARGIN) * height.saturating_sub(2 * MARGIN)
}

/// Frame (non-interior) sites in raster order; these hold the header.
pub fn margin_sites(width: usize, height: usize) -> impl Iterator<Item = Site> {
    (0..height).flat_map(move |i| {
        (0..width)
            .filter(move |&j| !is_interior(i, j, width, height))
            .map(move |j| Site::new(i, j))
    })
}
