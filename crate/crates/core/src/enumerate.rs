//! Exhaustive flip-set generation and the entropy census.

use rayon::prelude::*;
use serde::Serialize;

use crate::covers::cover_size_twice;
use crate::error::{Error, Result};
use crate::lattice::{HalfInteger, IntervalZ, SpinFlipSet};

/// Largest census radius accepted before refusing with a resource error.
pub const CENSUS_R_LIMIT: u32 = 20;

/// Lexicographic stream of every even subset (non-empty, at most `max_cardinality`
/// flips) of the dual points `x + 1/2`, `x ∈ window`.
#[derive(Debug, Clone)]
pub struct FlipSets {
    points: Vec<i64>,
    cap: usize,
    chosen: Vec<usize>,
    done: bool,
}

impl FlipSets {
    fn advance(&mut self) -> bool {
        let n = self.points.len();
        if let Some(&last) = self.chosen.last() {
            if self.chosen.len() < self.cap && last + 1 < n {
                self.chosen.push(last + 1);
                return true;
            }
        } else if n > 0 && self.cap > 0 {
            self.chosen.push(0);
            return true;
        } else {
            return false;
        }
        while let Some(last) = self.chosen.pop() {
            if last + 1 < n {
                self.chosen.push(last + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for FlipSets {
    type Item = SpinFlipSet;

    fn next(&mut self) -> Option<SpinFlipSet> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                break;
            }
            if self.chosen.len() % 2 == 0 {
                let flips = self.chosen.iter().map(|&i| HalfInteger::right_of(self.points[i])).collect();
                return Some(SpinFlipSet::from_sorted_unchecked(flips));
            }
        }
        None
    }
}

pub fn enumerate_flip_sets(window: IntervalZ, max_cardinality: usize) -> Result<FlipSets> {
    if max_cardinality < 2 || max_cardinality % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "max_cardinality must be even and at least 2, got {max_cardinality}"
        )));
    }
    Ok(FlipSets { points: window.iter().collect(), cap: max_cardinality, chosen: Vec::new(), done: false })
}

/// `Σ_j (1 + ⌊log₂(b_{j+1} − b_j)⌋)` over consecutive flips.
pub fn log_length(gamma: &SpinFlipSet) -> Result<u64> {
    if gamma.len() < 2 {
        return Err(Error::InvalidParameter("log_length needs at least two flips".into()));
    }
    let t = gamma.twice_values();
    Ok(t.windows(2).map(|w| 1 + (63 - (((w[1] - w[0]) / 2) as u64).leading_zeros()) as u64).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CensusRow {
    #[serde(rename = "R")]
    pub r: u32,
    pub count_exact: u64,
    pub bound: f64,
    pub ratio: f64,
}

impl CensusRow {
    /// `count ≤ 2^{5R/2}` decided in integer arithmetic.
    pub fn within_bound(&self) -> bool {
        let c = self.count_exact as u128;
        c * c <= 1u128 << (5 * self.r)
    }
}

/// `|C(R)| = |{γ : 0 ∈ V(γ), N(γ) ≤ R}|` for `R = 2..=r_max`.
pub fn census(r_max: u32) -> Result<Vec<CensusRow>> {
    if r_max < 2 {
        return Err(Error::InvalidParameter(format!("census needs R_max ≥ 2, got {r_max}")));
    }
    if r_max > CENSUS_R_LIMIT {
        return Err(Error::Resource(format!("census R_max = {r_max} exceeds the supported limit {CENSUS_R_LIMIT}")));
    }
    let hist = cover_size_histogram(r_max);
    let mut rows = Vec::new();
    let mut running = 0u64;
    for r in 0..=r_max {
        running += hist[r as usize];
        if r >= 2 {
            let bound = (2.5 * r as f64).exp2();
            rows.push(CensusRow { r, count_exact: running, bound, ratio: running as f64 / bound });
        }
    }
    Ok(rows)
}

/// Histogram of `N(γ)` over flip sets with `0 ∈ V(γ)` and `N(γ) ≤ r_max`.
///
/// Sets are grown shell by shell: the outer flips fix the diameter and hence
/// `n₀`, and interior flips are added left to right. `N` can only grow when a
/// flip is added without changing `n₀`, so a branch is cut as soon as its
/// partial set exceeds `r_max`.
pub(crate) fn cover_size_histogram(r_max: u32) -> Vec<u64> {
    let max_diam = (r_max as f64 / 2.0).exp2().floor() as i64;
    // twice values of the leftmost flip: b₁ ≤ -1/2 and b₁ ≥ 1/2 - diam
    let firsts: Vec<i64> = (0..max_diam).map(|k| -2 * k - 1).collect();
    firsts
        .par_iter()
        .map(|&first| {
            let mut hist = vec![0u64; r_max as usize + 1];
            let mut last = 1;
            while (last - first) / 2 <= max_diam {
                let diam = (last - first) / 2;
                let n0 = 63 - (diam as u64).leading_zeros();
                if 2 * (n0 as u64 + 1) <= r_max as u64 {
                    let mut buf = vec![first];
                    grow(&mut buf, first + 2, last, n0, r_max, &mut hist);
                }
                last += 2;
            }
            hist
        })
        .reduce(
            || vec![0u64; r_max as usize + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

fn grow(buf: &mut Vec<i64>, next: i64, last: i64, n0: u32, r_max: u32, hist: &mut [u64]) {
    buf.push(last);
    let n = cover_size_twice(buf, n0);
    buf.pop();
    if n > r_max as u64 {
        return;
    }
    if buf.len() % 2 == 1 {
        hist[n as usize] += 1;
    }
    let mut t = next;
    while t < last {
        buf.push(t);
        grow(buf, t + 2, last, n0, r_max, hist);
        buf.pop();
        t += 2;
    }
}
