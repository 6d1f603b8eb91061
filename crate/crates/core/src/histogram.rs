//! PPE histogram and selection of the two peak–zero bin pairs.

use crate::error::{Error, Result};

/// Largest PPE magnitude: `|e - e'|` with both terms in `[-255, 255]`.
pub const PPE_LIMIT: i32 = 510;
const BINS: usize = (2 * PPE_LIMIT + 1) as usize;

#[derive(Clone, PartialEq, Eq)]
pub struct PpeHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl std::fmt::Debug for PpeHistogram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let nonzero: Vec<_> = self.nonzero().collect();
        f.debug_struct("PpeHistogram")
            .field("total", &self.total)
            .field("bins", &nonzero)
            .finish()
    }
}

impl Default for PpeHistogram {
    fn default() -> Self {
        Self::new()
    }
}

impl PpeHistogram {
    pub fn new() -> Self {
        Self {
            counts: vec![0; BINS],
            total: 0,
        }
    }

    /// Histogram with the given `(bin, count)` pairs.
    pub fn from_counts(pairs: impl IntoIterator<Item = (i32, u64)>) -> Result<Self> {
        let mut h = Self::new();
        for (x, c) in pairs {
            let slot = Self::slot(x)?;
            h.counts[slot] += c;
            h.total += c;
        }
        Ok(h)
    }

    #[inline]
    fn slot(x: i32) -> Result<usize> {
        if !(-PPE_LIMIT..=PPE_LIMIT).contains(&x) {
            return Err(Error::PpeOutOfRange(x));
        }
        Ok((x + PPE_LIMIT) as usize)
    }

    pub fn add(&mut self, x: i32) -> Result<()> {
        let slot = Self::slot(x)?;
        self.counts[slot] += 1;
        self.total += 1;
        Ok(())
    }

    /// Count of bin `x`; bins outside the representable range are empty.
    #[inline]
    pub fn get(&self, x: i32) -> u64 {
        if (-PPE_LIMIT..=PPE_LIMIT).contains(&x) {
            self.counts[(x + PPE_LIMIT) as usize]
        } else {
            0
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (i32, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k as i32 - PPE_LIMIT, c))
    }

    /// Sum of the two largest bins.
    pub fn top_two_sum(&self) -> u64 {
        let (mut first, mut second) = (0, 0);
        for &c in &self.counts {
            if c > first {
                second = first;
                first = c;
            } else if c > second {
                second = c;
            }
        }
        first + second
    }
}

pub fn build_histogram(ppes: &[i32]) -> Result<PpeHistogram> {
    let mut h = PpeHistogram::new();
    for &x in ppes {
        h.add(x)?;
    }
    Ok(h)
}

/// The two peak–zero bin pairs; `l_z < l_p < r_p < r_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShiftParams {
    pub l_p: i32,
    pub l_z: i32,
    pub r_p: i32,
    pub r_z: i32,
}

impl ShiftParams {
    pub fn new(l_p: i32, l_z: i32, r_p: i32, r_z: i32) -> Result<Self> {
        let p = Self { l_p, l_z, r_p, r_z };
        if !p.is_ordered() {
            return Err(Error::InvalidArgument(format!(
                "shift parameters must satisfy l_z < l_p < r_p < r_z, got {p:?}"
            )));
        }
        Ok(p)
    }

    pub fn is_ordered(&self) -> bool {
        self.l_z < self.l_p && self.l_p < self.r_p && self.r_p < self.r_z
    }

    /// `true` when `x` lies in a range that gets shifted by one.
    #[inline]
    pub fn is_shifted(&self, x: i32) -> bool {
        (self.l_z..self.l_p).contains(&x) || (self.r_p + 1..=self.r_z).contains(&x)
    }
}

/// Smallest-magnitude empty bins with `x < 0` and `x > 1`.
pub fn find_zero_bins(h: &PpeHistogram) -> Result<(i32, i32)> {
    let l_z = (-PPE_LIMIT..0)
        .rev()
        .find(|&x| h.get(x) == 0)
        .ok_or(Error::HistogramSaturated("left"))?;
    let r_z = (2..=PPE_LIMIT)
        .find(|&x| h.get(x) == 0)
        .ok_or(Error::HistogramSaturated("right"))?;
    Ok((l_z, r_z))
}

/// Chosen peak pair with the value of the minimised objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakChoice {
    pub l_p: i32,
    pub r_p: i32,
    /// Population of the bins that get shifted, `[l_z, l_p) ∪ (r_p, r_z]`.
    pub shifted_mass: u64,
    /// `ρ/2 + shifted_mass`.
    pub objective: f64,
}

type Rank = (u64, i32, i32, i32);

/// Candidate ordering: least shifted mass, then narrowest shifted range,
/// then the largest `x_l`, then the smallest `x_r`.
#[inline]
fn rank(l_z: i32, r_z: i32, x_l: i32, x_r: i32, mass: u64) -> Rank {
    (mass, (x_l - l_z) + (r_z - x_r), -x_l, x_r)
}

fn check_zero_bins(l_z: i32, r_z: i32) -> Result<()> {
    if l_z >= r_z {
        return Err(Error::InvalidArgument(format!(
            "zero bins out of order: {l_z} >= {r_z}"
        )));
    }
    Ok(())
}

/// Peak pair inside `(l_z, r_z)` minimising the shifted population subject
/// to `h(x_l) + h(x_r) ≥ ρ`. Enumerates all pairs in `O(|r_z − l_z|²)`
/// using prefix sums.
pub fn select_peaks(h: &PpeHistogram, l_z: i32, r_z: i32, rho: usize) -> Result<PeakChoice> {
    check_zero_bins(l_z, r_z)?;
    // prefix[k] = Σ h(l_z + t) for t < k, over [l_z, r_z].
    let span = (r_z - l_z + 1) as usize;
    let mut prefix = Vec::with_capacity(span + 1);
    prefix.push(0u64);
    for x in l_z..=r_z {
        prefix.push(prefix.last().unwrap() + h.get(x));
    }
    let sum = |from: i32, to_exclusive: i32| -> u64 {
        prefix[(to_exclusive - l_z) as usize] - prefix[(from - l_z) as usize]
    };

    let mut best: Option<(Rank, i32, i32, u64)> = None;
    for x_l in l_z + 1..r_z {
        let left = sum(l_z, x_l);
        let h_l = h.get(x_l);
        for x_r in x_l + 1..r_z {
            if h_l + h.get(x_r) < rho as u64 {
                continue;
            }
            let mass = left + sum(x_r + 1, r_z + 1);
            let key = rank(l_z, r_z, x_l, x_r, mass);
            if best.as_ref().is_none_or(|b| key < b.0) {
                best = Some((key, x_l, x_r, mass));
            }
        }
    }
    let (_, l_p, r_p, mass) = best.ok_or(Error::InsufficientCapacity(rho))?;
    Ok(PeakChoice {
        l_p,
        r_p,
        shifted_mass: mass,
        objective: rho as f64 / 2.0 + mass as f64,
    })
}

/// Exhaustive reference for [`select_peaks`]: sums every shifted bin of every
/// candidate directly and scans the whole candidate list for the minimum.
pub fn select_peaks_oracle(h: &PpeHistogram, l_z: i32, r_z: i32, rho: usize) -> Result<PeakChoice> {
    check_zero_bins(l_z, r_z)?;
    let mut candidates = Vec::new();
    for x_l in l_z + 1..r_z {
        for x_r in x_l + 1..r_z {
            if h.get(x_l) + h.get(x_r) >= rho as u64 {
                let mass: u64 = (l_z..x_l).chain(x_r + 1..=r_z).map(|k| h.get(k)).sum();
                candidates.push((x_l, x_r, mass));
            }
        }
    }
    let &(l_p, r_p, mass) = candidates
        .iter()
        .min_by_key(|&&(x_l, x_r, mass)| rank(l_z, r_z, x_l, x_r, mass))
        .ok_or(Error::InsufficientCapacity(rho))?;
    Ok(PeakChoice {
        l_p,
        r_p,
        shifted_mass: mass,
        objective: rho as f64 / 2.0 + mass as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionConfig {
    /// Bits that must be carried.
    pub rho: usize,
    /// Prefix growth step.
    pub step: usize,
}

/// Outcome of the incremental parameter search.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub params: ShiftParams,
    /// Prefix length whose histogram produced `params`.
    pub prefix_len: usize,
    pub choice: PeakChoice,
}

/// Grows the histogram over the ordered PPEs `step` values at a time and
/// returns the first prefix for which a feasible pair of peak–zero bins exists.
pub fn select_parameters(ppes: &[i32], cfg: SelectionConfig) -> Result<Selection> {
    if cfg.rho == 0 {
        return Err(Error::InvalidArgument(
            "payload size must be at least 1".into(),
        ));
    }
    if cfg.step == 0 {
        return Err(Error::InvalidArgument(
            "step size must be at least 1".into(),
        ));
    }
    let total = ppes.len();
    let mut h = PpeHistogram::new();
    for (idx, &x) in ppes.iter().enumerate() {
        h.add(x)?;
        let k = idx + 1;
        if k % cfg.step != 0 && k != total {
            continue;
        }
        if h.top_two_sum() < cfg.rho as u64 {
            continue;
        }
        // A saturated side or an infeasible window keeps the prefix growing.
        let Ok((l_z, r_z)) = find_zero_bins(&h) else {
            continue;
        };
        let Ok(choice) = select_peaks(&h, l_z, r_z, cfg.rho) else {
            continue;
        };
        return Ok(Selection {
            params: ShiftParams {
                l_p: choice.l_p,
                l_z,
                r_p: choice.r_p,
                r_z,
            },
            prefix_len: k,
            choice,
        });
    }
    Err(Error::SelectionFailed(cfg.rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn worked_histogram() -> PpeHistogram {
        PpeHistogram::from_counts([(-2, 5), (-1, 20), (0, 30), (1, 18), (2, 4)]).unwrap()
    }

    #[test]
    fn build_examples() {
        let h = build_histogram(&[]).unwrap();
        assert_eq!(h.total(), 0);
        assert_eq!(h.nonzero().count(), 0);

        let h = build_histogram(&[0, 0, 1, -1]).unwrap();
        assert_eq!((h.get(0), h.get(1), h.get(-1)), (2, 1, 1));

        let h = build_histogram(&vec![0; 258_064]).unwrap();
        assert_eq!(h.get(0), 258_064);
        assert_eq!(h.total(), 258_064);

        assert!(matches!(
            build_histogram(&[511]),
            Err(Error::PpeOutOfRange(511))
        ));
    }

    #[test]
    fn zero_bins_worked_example() {
        assert_eq!(find_zero_bins(&worked_histogram()).unwrap(), (-3, 3));
    }

    #[test]
    fn zero_bins_single_peak() {
        let h = PpeHistogram::from_counts([(0, 1000)]).unwrap();
        assert_eq!(find_zero_bins(&h).unwrap(), (-1, 2));
        // Bin 1 is skipped even when empty.
        let h = PpeHistogram::from_counts([(0, 10), (2, 3)]).unwrap();
        assert_eq!(find_zero_bins(&h).unwrap(), (-1, 3));
    }

    #[test]
    fn zero_bins_saturated() {
        let h = PpeHistogram::from_counts((-PPE_LIMIT..0).map(|x| (x, 1))).unwrap();
        assert!(matches!(
            find_zero_bins(&h),
            Err(Error::HistogramSaturated("left"))
        ));
        let h = PpeHistogram::from_counts((2..=PPE_LIMIT).map(|x| (x, 1))).unwrap();
        assert!(matches!(
            find_zero_bins(&h),
            Err(Error::HistogramSaturated("right"))
        ));
    }

    #[test]
    fn peaks_worked_example() {
        let h = worked_histogram();
        let fast = select_peaks(&h, -3, 3, 40).unwrap();
        assert_eq!((fast.l_p, fast.r_p), (-1, 0));
        assert_eq!(fast.shifted_mass, 27);
        assert_eq!(fast.objective, 47.0);
        let slow = select_peaks_oracle(&h, -3, 3, 40).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn peaks_infeasible() {
        let h = worked_histogram();
        assert!(matches!(
            select_peaks(&h, -3, 3, 51),
            Err(Error::InsufficientCapacity(51))
        ));
        assert!(matches!(
            select_peaks_oracle(&h, -3, 3, 51),
            Err(Error::InsufficientCapacity(51))
        ));
    }

    #[test]
    fn peaks_single_bin() {
        let h = PpeHistogram::from_counts([(0, 100_000)]).unwrap();
        let c = select_peaks(&h, -1, 2, 1).unwrap();
        assert_eq!((c.l_p, c.r_p, c.shifted_mass), (0, 1, 0));
        assert_eq!(c.objective, 0.5);
        assert_eq!(select_peaks_oracle(&h, -1, 2, 1).unwrap(), c);
    }

    #[test]
    fn selection_stops_at_first_feasible_step() {
        let s = select_parameters(&[0; 10], SelectionConfig { rho: 4, step: 5 }).unwrap();
        assert_eq!(s.prefix_len, 5);
        assert_eq!(
            s.params,
            ShiftParams {
                l_p: 0,
                l_z: -1,
                r_p: 1,
                r_z: 2
            }
        );
    }

    #[test]
    fn selection_fails_beyond_length() {
        assert!(matches!(
            select_parameters(&[0; 10], SelectionConfig { rho: 11, step: 2 }),
            Err(Error::SelectionFailed(11))
        ));
    }

    #[test]
    fn selection_full_step_uses_whole_sequence() {
        let ppes = [0, 1, -1, 0, 2, 0, -1, 1, 0, 0, 3];
        let s = select_parameters(
            &ppes,
            SelectionConfig {
                rho: 3,
                step: ppes.len(),
            },
        )
        .unwrap();
        assert_eq!(s.prefix_len, ppes.len());
        let h = build_histogram(&ppes).unwrap();
        let (l_z, r_z) = find_zero_bins(&h).unwrap();
        assert_eq!((s.params.l_z, s.params.r_z), (l_z, r_z));
        assert_eq!(s.choice, select_peaks(&h, l_z, r_z, 3).unwrap());
    }

    #[test]
    fn selection_checks_final_partial_step() {
        // 7 values with step 5: checked at k = 5 (infeasible) and k = 7.
        let ppes = [0, 0, 0, 0, 5, 0, 0];
        let s = select_parameters(&ppes, SelectionConfig { rho: 6, step: 5 }).unwrap();
        assert_eq!(s.prefix_len, 7);
    }

    prop_compose! {
        fn small_histogram()(l_z in -20i32..=-1, width in 3i32..=40)
            (counts in proptest::collection::vec(prop_oneof![Just(0u64), 0u64..60], (width - 1) as usize),
             l_z in Just(l_z), width in Just(width))
            -> (PpeHistogram, i32, i32) {
            let r_z = l_z + width;
            let pairs = counts.into_iter().enumerate().map(|(k, c)| (l_z + 1 + k as i32, c));
            (PpeHistogram::from_counts(pairs).unwrap(), l_z, r_z)
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn fast_selection_matches_oracle((h, l_z, r_z) in small_histogram(), rho in 1usize..120) {
            let fast = select_peaks(&h, l_z, r_z, rho);
            let slow = select_peaks_oracle(&h, l_z, r_z, rho);
            match (fast, slow) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a, b);
                    prop_assert!(h.get(a.l_p) + h.get(a.r_p) >= rho as u64);
                    prop_assert!(l_z < a.l_p && a.l_p < a.r_p && a.r_p < r_z);
                }
                (Err(Error::InsufficientCapacity(x)), Err(Error::InsufficientCapacity(y))) => prop_assert_eq!(x, y),
                (a, b) => prop_assert!(false, "disagreement: {:?} vs {:?}", a, b),
            }
        }

        #[test]
        fn selected_params_respect_prefix(ppes in proptest::collection::vec(-6i32..=6, 1..300), rho in 1usize..80, step in 1usize..50) {
            if let Ok(s) = select_parameters(&ppes, SelectionConfig { rho, step }) {
                let h = build_histogram(&ppes[..s.prefix_len]).unwrap();
                prop_assert!(s.params.is_ordered());
                prop_assert_eq!(h.get(s.params.l_z), 0);
                prop_assert_eq!(h.get(s.params.r_z), 0);
                prop_assert!(h.get(s.params.l_p) + h.get(s.params.r_p) >= rho as u64);
                prop_assert!(s.prefix_len % step == 0 || s.prefix_len == ppes.len());
            }
        }
    }
}
