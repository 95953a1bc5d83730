//! Tails of the hypergeometric distribution.
//!
//! `X` counts successes in `draws` items taken without replacement from a
//! population of `population` items, `successes` of which are successes.
//! Probabilities are built from pmf ratios starting at the mode and
//! normalised by their total, so each tail is a sum of terms no larger than
//! one and the two complementary tails add up to one up to rounding.

use super::{Direction, InductionError};

/// A fixed hypergeometric law with precomputed cumulative sums.
#[derive(Debug, Clone)]
pub struct HypergeometricDist {
    lo: usize,
    /// `below[i]` = sum of the weights for `lo..lo+i`.
    below: Vec<f64>,
    /// `above[i]` = sum of the weights for `lo+i..=hi`.
    above: Vec<f64>,
    total: f64,
}

impl HypergeometricDist {
    pub fn new(successes: u64, draws: u64, population: u64) -> Result<Self, InductionError> {
        if successes > population || draws > population {
            return Err(InductionError::Domain(format!(
                "need successes ≤ population and draws ≤ population, got K={successes}, n={draws}, N={population}"
            )));
        }
        let (big_k, n, big_n) = (successes as f64, draws as f64, population as f64);
        let lo = (draws + successes).saturating_sub(population) as usize;
        let hi = successes.min(draws) as usize;
        // Mode of the law: floor((n+1)(K+1)/(N+2)), clamped to the support.
        let mode = (((draws + 1) as u128 * (successes + 1) as u128) / (population + 2) as u128) as usize;
        let mode = mode.clamp(lo, hi);

        let len = hi - lo + 1;
        let mut w = vec![0.0; len];
        w[mode - lo] = 1.0;
        // P(j+1)/P(j) = (K-j)(n-j) / ((j+1)(N-K-n+j+1))
        for j in mode..hi {
            let jf = j as f64;
            let ratio = (big_k - jf) * (n - jf) / ((jf + 1.0) * (big_n - big_k - n + jf + 1.0));
            w[j + 1 - lo] = w[j - lo] * ratio;
        }
        for j in (lo..mode).rev() {
            let jf = j as f64;
            let ratio = ((jf + 1.0) * (big_n - big_k - n + jf + 1.0)) / ((big_k - jf) * (n - jf));
            w[j - lo] = w[j + 1 - lo] * ratio;
        }

        let mut below = Vec::with_capacity(len + 1);
        let mut acc = 0.0;
        below.push(0.0);
        for x in &w {
            acc += x;
            below.push(acc);
        }
        let mut above = vec![0.0; len + 1];
        let mut acc = 0.0;
        for i in (0..len).rev() {
            acc += w[i];
            above[i] = acc;
        }
        let total = above[0];
        Ok(Self { lo, below, above, total })
    }

    /// Smallest value with positive probability.
    pub fn min_value(&self) -> usize {
        self.lo
    }

    /// Largest value with positive probability.
    pub fn max_value(&self) -> usize {
        self.lo + self.below.len() - 2
    }

    /// `P(X = k)`.
    pub fn pmf(&self, k: usize) -> f64 {
        if k < self.lo || k > self.max_value() {
            return 0.0;
        }
        let i = k - self.lo;
        (self.below[i + 1] - self.below[i]).max(0.0) / self.total
    }

    /// `P(X ≥ k)`.
    pub fn over(&self, k: usize) -> f64 {
        if k <= self.lo {
            return 1.0;
        }
        let i = k - self.lo;
        if i >= self.above.len() {
            return 0.0;
        }
        (self.above[i] / self.total).min(1.0)
    }

    /// `P(X ≤ k)`.
    pub fn under(&self, k: usize) -> f64 {
        if k >= self.max_value() {
            return 1.0;
        }
        if k < self.lo {
            return 0.0;
        }
        (self.below[k - self.lo + 1] / self.total).min(1.0)
    }

    pub fn tail(&self, k: usize, direction: Direction) -> f64 {
        match direction {
            Direction::Over => self.over(k),
            Direction::Under => self.under(k),
        }
    }
}

/// `P(X ≥ k)` (over) or `P(X ≤ k)` (under) for `X ~ H(population, successes, draws)`.
///
/// ```
/// use metonymy::induction::{hypergeom_tail, Direction};
/// let p = hypergeom_tail(3, 4, 5, 20, Direction::Over).unwrap();
/// assert!((p - 496.0 / 15504.0).abs() < 1e-12);
/// ```
pub fn hypergeom_tail(k: u64, successes: u64, draws: u64, population: u64, direction: Direction) -> Result<f64, InductionError> {
    if k > successes.min(draws) {
        return Err(InductionError::Domain(format!(
            "k={k} exceeds min(K={successes}, n={draws})"
        )));
    }
    if successes > population || draws > population {
        return Err(InductionError::Domain(format!(
            "need successes ≤ population and draws ≤ population, got K={successes}, n={draws}, N={population}"
        )));
    }
    // Same walk as `HypergeometricDist::new`, accumulating the tail and the
    // total on the fly instead of storing the weights.
    let (big_k, n, big_n) = (successes as f64, draws as f64, population as f64);
    let lo = (draws + successes).saturating_sub(population);
    let hi = successes.min(draws);
    let mode = (((draws + 1) as u128 * (successes + 1) as u128) / (population + 2) as u128) as u64;
    let mode = mode.clamp(lo, hi);
    let in_tail = |j: u64| match direction {
        Direction::Over => j >= k,
        Direction::Under => j <= k,
    };

    let mut total = 1.0;
    let mut tail = if in_tail(mode) { 1.0 } else { 0.0 };
    let mut w = 1.0;
    for j in mode..hi {
        let jf = j as f64;
        w *= (big_k - jf) * (n - jf) / ((jf + 1.0) * (big_n - big_k - n + jf + 1.0));
        total += w;
        if in_tail(j + 1) {
            tail += w;
        }
    }
    let mut w = 1.0;
    for j in (lo..mode).rev() {
        let jf = j as f64;
        w *= ((jf + 1.0) * (big_n - big_k - n + jf + 1.0)) / ((big_k - jf) * (n - jf));
        total += w;
        if in_tail(j) {
            tail += w;
        }
    }
    Ok((tail / total).min(1.0))
}
