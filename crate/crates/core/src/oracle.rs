//! Independent ground truth for the analytic kernel.
//!
//! Two routes, neither of which shares code with [`crate::kernel`]:
//!
//! * **Exact expectation**: the defining sums evaluated term by term in
//!   arbitrary-precision rationals.
//! * **Recipe books**: the stochastic model realized explicitly. Every subset
//!   of `n` capabilities (an `n`-bit mask) is drawn viable independently with
//!   probability `rho^popcount`, and realized counts are averaged over many
//!   independent books.
//!
//! # Sampling schedule
//!
//! A book for `(n, rho, seed)` is produced by a `ChaCha8Rng` seeded with
//! `SeedableRng::seed_from_u64(seed)`. Masks are visited in ascending order
//! `0..2^n` and each consumes exactly one `f64` from `Rng::random::<f64>()`.
//! The mask is viable iff that draw is below `rho^s`, where the thresholds are
//! built by repeated multiplication `t_0 = 1, t_s = t_{s-1} * rho`.
//!
//! Replicate `i` of a Monte-Carlo run with master seed `m` uses the book seed
//! [`replicate_seed`]`(m, i) = splitmix64(m + (i + 1) * 0x9E3779B97F4A7C15)`
//! (wrapping arithmetic), so replicates are independent of execution order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Rho, WindowRadius};

/// Largest `n` a recipe book may be enumerated for.
pub const MAX_BOOK_N: u32 = 24;
/// Largest `n` accepted by [`exact_expectation`].
pub const MAX_EXACT_N: u32 = 64;

/// A probability in `(0, 1]` held as a reduced big rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalProb(BigRational);

impl RationalProb {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self> {
        let denominator = denominator.into();
        if denominator.is_zero() {
            return Err(Error::param("rho", "zero denominator"));
        }
        Self::from_ratio(BigRational::new(numerator.into(), denominator))
    }

    fn from_ratio(value: BigRational) -> Result<Self> {
        if value.is_positive() && value <= BigRational::one() {
            Ok(RationalProb(value))
        } else {
            Err(Error::param("rho", format!("{value} is outside (0, 1]")))
        }
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }

    pub fn to_rho(&self) -> Result<Rho> {
        Rho::new(self.to_f64())
    }
}

impl FromStr for RationalProb {
    type Err = Error;

    /// Accepts `p/q` or a plain decimal such as `0.25`, converted exactly.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::param("rho", format!("cannot parse `{s}` as a rational"));
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            return RationalProb::new(num, den);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
        RationalProb::new(num, den)
    }
}

impl fmt::Display for RationalProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Nearest-ish `f64` of a big rational (within a couple of ulps).
pub fn ratio_to_f64(value: &BigRational) -> f64 {
    if let Some(x) = value.to_f64() {
        return x;
    }
    // Fallback: scale both sides down to 64 significant bits.
    let num = value.numer();
    let den = value.denom();
    let shift = num.bits().max(den.bits()).saturating_sub(64);
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact expected variety and average complexity over the window of `(n, l, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactExpectation {
    pub variety: BigRational,
    pub avg_complexity: BigRational,
}

impl ExactExpectation {
    pub fn variety_f64(&self) -> f64 {
        ratio_to_f64(&self.variety)
    }

    pub fn avg_complexity_f64(&self) -> f64 {
        ratio_to_f64(&self.avg_complexity)
    }
}

pub fn exact_expectation(
    n: u32,
    l: u32,
    r: WindowRadius,
    rho: &RationalProb,
) -> Result<ExactExpectation> {
    if n > MAX_EXACT_N {
        return Err(Error::SizeLimit {
            what: "n",
            value: u64::from(n),
            max: u64::from(MAX_EXACT_N),
        });
    }
    if l > n {
        return Err(Error::param("l", format!("l = {l} exceeds n = {n}")));
    }
    let s_min = match r {
        WindowRadius::Bounded(r) => l.saturating_sub(r),
        WindowRadius::Unbounded => 0,
    };
    let mut binomial = BigInt::one();
    let mut rho_pow = BigRational::one();
    let mut count = BigRational::zero();
    let mut length = BigRational::zero();
    for s in 0..=l {
        if s >= s_min {
            let term = BigRational::from_integer(binomial.clone()) * &rho_pow;
            length += &term * BigInt::from(s);
            count += term;
        }
        // C(n, s+1) = C(n, s) (n - s) / (s + 1), exact at every step.
        let (q, rem) = (binomial * BigInt::from(n - s)).div_rem(&BigInt::from(s + 1));
        debug_assert!(rem.is_zero());
        binomial = q;
        rho_pow *= rho.as_ratio();
    }
    let avg_complexity = &length / &count;
    Ok(ExactExpectation {
        variety: count,
        avg_complexity,
    })
}

/// The sampled set of viable capability combinations, as ascending bit masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecipeBook {
    n: u32,
    viable: Vec<u32>,
}

impl RecipeBook {
    /// Builds a book from explicit masks; masks are sorted and deduplicated.
    pub fn from_masks(n: u32, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_book_size(n)?;
        let mut viable: Vec<u32> = masks.into_iter().collect();
        if let Some(&bad) = viable.iter().find(|&&m| u64::from(m) >> n != 0) {
            return Err(Error::param("mask", format!("{bad:#x} has bits beyond n = {n}")));
        }
        viable.sort_unstable();
        viable.dedup();
        Ok(RecipeBook { n, viable })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn masks(&self) -> &[u32] {
        &self.viable
    }

    pub fn len(&self) -> usize {
        self.viable.len()
    }

    pub fn is_empty(&self) -> bool {
        self.viable.is_empty()
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.viable.binary_search(&mask).is_ok()
    }
}

fn check_book_size(n: u32) -> Result<()> {
    if n > MAX_BOOK_N {
        Err(Error::SizeLimit {
            what: "n",
            value: u64::from(n),
            max: u64::from(MAX_BOOK_N),
        })
    } else {
        Ok(())
    }
}

fn thresholds(n: u32, rho: f64) -> Vec<f64> {
    let mut t = Vec::with_capacity(n as usize + 1);
    let mut p = 1.0;
    for _ in 0..=n {
        t.push(p);
        p *= rho;
    }
    t
}

/// Walks the sampling schedule, calling `visit` for every viable mask.
fn sample_masks(n: u32, rho: f64, seed: u64, mut visit: impl FnMut(u32)) {
    let thresholds = thresholds(n, rho);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for mask in 0..(1u32 << n) {
        let u: f64 = rng.random();
        if u < thresholds[mask.count_ones() as usize] {
            visit(mask);
        }
    }
}

pub fn sample_recipe_book(n: u32, rho: f64, seed: u64) -> Result<RecipeBook> {
    check_book_size(n)?;
    let rho = Rho::new(rho)?.get();
    let mut viable = Vec::new();
    sample_masks(n, rho, seed, |m| viable.push(m));
    Ok(RecipeBook { n, viable })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedStats {
    pub variety: u64,
    pub total_length: u64,
}

struct WindowFilter {
    lo: u32,
    hi: u32,
}

impl WindowFilter {
    fn new(n: u32, l: u32, r: WindowRadius) -> Result<Self> {
        if l > n {
            return Err(Error::param("l", format!("l = {l} exceeds n = {n}")));
        }
        let lo = match r {
            WindowRadius::Bounded(r) => l.saturating_sub(r),
            WindowRadius::Unbounded => 0,
        };
        Ok(WindowFilter { lo, hi: l })
    }

    fn accumulate(&self, stats: &mut RealizedStats, mask: u32) {
        let s = mask.count_ones();
        if (self.lo..=self.hi).contains(&s) {
            stats.variety += 1;
            stats.total_length += u64::from(s);
        }
    }
}

/// Counts the book's products whose length lies in `[max(0, l - r), l]`.
pub fn realized_stats(book: &RecipeBook, l: u32, r: WindowRadius) -> Result<RealizedStats> {
    let filter = WindowFilter::new(book.n, l, r)?;
    let mut stats = RealizedStats {
        variety: 0,
        total_length: 0,
    };
    for &mask in &book.viable {
        filter.accumulate(&mut stats, mask);
    }
    Ok(stats)
}

/// SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Book seed of replicate `index` under `master_seed`.
pub fn replicate_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean_variety: f64,
    pub mean_total_length: f64,
    /// `mean_total_length / mean_variety`, the estimator comparable with the kernel.
    pub ratio_avg_complexity: f64,
    /// Mean of per-book average lengths over books with a non-empty window.
    /// Biased relative to the kernel; reported only.
    pub mean_book_ratio: Option<f64>,
    /// Standard error of `mean_variety`.
    pub se_variety: f64,
    pub replicates: u64,
    pub seed: u64,
}

pub fn monte_carlo_estimate(
    n: u32,
    l: u32,
    r: WindowRadius,
    rho: f64,
    replicates: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_book_size(n)?;
    let rho = Rho::new(rho)?.get();
    if replicates < 2 {
        return Err(Error::param("replicates", "need at least 2"));
    }
    let filter = WindowFilter::new(n, l, r)?;
    let per_book: Vec<RealizedStats> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut stats = RealizedStats {
                variety: 0,
                total_length: 0,
            };
            sample_masks(n, rho, replicate_seed(seed, i), |m| {
                filter.accumulate(&mut stats, m)
            });
            stats
        })
        .collect();

    // Integer accumulation keeps the result independent of reduction order.
    let sum_v: u128 = per_book.iter().map(|s| u128::from(s.variety)).sum();
    let sum_v2: u128 = per_book
        .iter()
        .map(|s| u128::from(s.variety) * u128::from(s.variety))
        .sum();
    let sum_len: u128 = per_book.iter().map(|s| u128::from(s.total_length)).sum();
    let reps = u128::from(replicates);

    let mean_variety = sum_v as f64 / replicates as f64;
    let mean_total_length = sum_len as f64 / replicates as f64;
    let ratio_avg_complexity = sum_len as f64 / sum_v as f64;
    // Unbiased variance: (R * sum v^2 - (sum v)^2) / (R (R - 1)), numerator exact.
    let spread = reps * sum_v2 - sum_v * sum_v;
    let variance = spread as f64 / (replicates as f64 * (replicates - 1) as f64);
    let se_variety = (variance / replicates as f64).sqrt();

    let nonempty: Vec<f64> = per_book
        .iter()
        .filter(|s| s.variety > 0)
        .map(|s| s.total_length as f64 / s.variety as f64)
        .collect();
    let mean_book_ratio =
        (!nonempty.is_empty()).then(|| nonempty.iter().sum::<f64>() / nonempty.len() as f64);

    Ok(McEstimate {
        mean_variety,
        mean_total_length,
        ratio_avg_complexity,
        mean_book_ratio,
        se_variety,
        replicates,
        seed,
    })
}
