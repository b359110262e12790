//! Multiscale open covers of spin-flip sets and the scale map bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SpinFlipSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourParams {
    #[serde(rename = "M")]
    pub m: f64,
    pub a: f64,
}

impl ContourParams {
    pub fn new(m: f64, a: f64) -> Result<Self> {
        if !(m > 1.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("M must be a real > 1, got {m}")));
        }
        if !(a > 1.0 && a < 2.0) {
            return Err(Error::InvalidParameter(format!("a must lie in (1, 2), got {a}")));
        }
        Ok(ContourParams { m, a })
    }

    /// `M · d^a`, the separation two parts must exceed when the smaller has diameter `d`.
    pub fn separation(&self, diam: i64) -> f64 {
        self.m * (diam as f64).powf(self.a)
    }

    /// `2M · 2^{an}`, the isolation distance at scale `n`.
    pub fn isolation(&self, n: u32) -> f64 {
        2.0 * self.m * (self.a * n as f64).exp2()
    }

    pub fn log2_8m(&self) -> f64 {
        (8.0 * self.m).log2()
    }
}

/// Open interval `(left, left + 2^scale)` with integer endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenInterval {
    pub left: i64,
    pub scale: u32,
}

impl OpenInterval {
    pub fn right(&self) -> i64 {
        self.left + (1i64 << self.scale)
    }

    pub fn contains_twice(&self, t: i64) -> bool {
        2 * self.left < t && t < 2 * self.right()
    }

    /// Infimum distance between the two open intervals.
    pub fn dist(&self, other: &OpenInterval) -> i64 {
        if self.right() <= other.left {
            other.left - self.right()
        } else if other.right() <= self.left {
            self.left - other.right()
        } else {
            0
        }
    }

    /// Flips of `gamma` inside the interval.
    pub fn flips_in(&self, gamma: &SpinFlipSet) -> usize {
        gamma.count_between_twice(2 * self.left, 2 * self.right())
    }
}

impl Serialize for OpenInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.left, self.right()].serialize(s)
    }
}

/// `⌊log₂ diam γ⌋`.
pub fn top_scale(gamma: &SpinFlipSet) -> Result<u32> {
    let d = gamma.diam()?;
    Ok(63 - (d as u64).leading_zeros())
}

/// Greedy leftmost cover: each interval opens half a unit left of the first
/// uncovered flip.
pub fn canonical_cover(gamma: &SpinFlipSet, n: u32) -> Result<Vec<OpenInterval>> {
    if gamma.is_empty() {
        return Err(Error::EmptyContour);
    }
    if n > 60 {
        return Err(Error::InvalidParameter(format!("scale {n} too large")));
    }
    let mut out = Vec::new();
    let mut reach = i64::MIN;
    for f in gamma.flips() {
        if f.twice() < reach {
            continue;
        }
        let iv = OpenInterval { left: f.floor(), scale: n };
        reach = 2 * iv.right();
        out.push(iv);
    }
    Ok(out)
}

/// `N(γ) = Σ_{n=0}^{n₀} |I_n(γ)|`.
pub fn cover_size(gamma: &SpinFlipSet) -> Result<u64> {
    let n0 = top_scale(gamma)?;
    let mut total = 0u64;
    for n in 0..=n0 {
        total += canonical_cover(gamma, n)?.len() as u64;
    }
    Ok(total)
}

/// Count-only variant of [`cover_size`] for hot loops over sorted twice values.
pub(crate) fn cover_size_twice(t: &[i64], n0: u32) -> u64 {
    let mut total = 0u64;
    for n in 0..=n0 {
        let width = 2i64 << n;
        let mut reach = i64::MIN;
        for &f in t {
            if f >= reach {
                reach = (f - 1) + width;
                total += 1;
            }
        }
    }
    total
}

/// Members of `I_n(γ)` at distance at least `2M·2^{an}` from every other member.
pub fn isolated_cover(gamma: &SpinFlipSet, n: u32, params: &ContourParams) -> Result<Vec<OpenInterval>> {
    let n0 = top_scale(gamma)?;
    if n < 1 || n > n0 {
        return Err(Error::InvalidParameter(format!("isolated cover needs 1 ≤ n ≤ n₀ = {n0}, got {n}")));
    }
    let cover = canonical_cover(gamma, n)?;
    Ok(isolated_members(&cover, params.isolation(n)))
}

fn isolated_members(cover: &[OpenInterval], threshold: f64) -> Vec<OpenInterval> {
    // the cover is sorted and disjoint, so only the neighbours matter
    (0..cover.len())
        .filter(|&i| {
            let left_ok = i == 0 || cover[i - 1].dist(&cover[i]) as f64 >= threshold;
            let right_ok = i + 1 == cover.len() || cover[i].dist(&cover[i + 1]) as f64 >= threshold;
            left_ok && right_ok
        })
        .map(|i| cover[i])
        .collect()
}

/// `N′(γ) = |γ| + Σ_{n=1}^{n₀} |I′_n(γ)|`.
pub fn isolated_cover_size(gamma: &SpinFlipSet, params: &ContourParams) -> Result<u64> {
    let n0 = top_scale(gamma)?;
    let mut total = gamma.len() as u64;
    for n in 1..=n0 {
        total += isolated_cover(gamma, n, params)?.len() as u64;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverFamily {
    pub n0: u32,
    pub cover: Vec<Vec<OpenInterval>>,
    /// `isolated[0]` is scale 1.
    pub isolated: Vec<Vec<OpenInterval>>,
    pub cover_size: u64,
    pub isolated_cover_size: u64,
}

pub fn cover_family(gamma: &SpinFlipSet, params: &ContourParams) -> Result<CoverFamily> {
    let n0 = top_scale(gamma)?;
    let cover: Vec<Vec<OpenInterval>> = (0..=n0).map(|n| canonical_cover(gamma, n)).collect::<Result<_>>()?;
    let isolated: Vec<Vec<OpenInterval>> =
        (1..=n0).map(|n| isolated_members(&cover[n as usize], params.isolation(n))).collect();
    let cover_size = cover.iter().map(|c| c.len() as u64).sum();
    let isolated_cover_size = gamma.len() as u64 + isolated.iter().map(|c| c.len() as u64).sum::<u64>();
    Ok(CoverFamily { n0, cover, isolated, cover_size, isolated_cover_size })
}

/// `s(n) = ⌊(n − log₂(8M))/a⌋`.
pub fn scale_map(n: i64, params: &ContourParams) -> i64 {
    ((n as f64 - params.log2_8m()) / params.a).floor() as i64
}

/// `n̄ = ⌈a + log₂(8M)⌉`.
pub fn nbar(params: &ContourParams) -> i64 {
    (params.a + params.log2_8m()).ceil() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleChainStats {
    pub n: i64,
    pub l_n: u32,
    pub lower: f64,
    pub upper: f64,
    pub bounds_ok: bool,
}

/// `l(n) = max{m : s^m(n) > 0}` with the two-sided logarithmic bracket.
pub fn scale_chain_stats(n: i64, params: &ContourParams) -> Result<ScaleChainStats> {
    let nb = nbar(params);
    if n < nb {
        return Err(Error::InvalidParameter(format!("scale chain needs n ≥ n̄ = {nb}, got {n}")));
    }
    let mut l = 0u32;
    let mut cur = n;
    loop {
        cur = scale_map(cur, params);
        if cur <= 0 {
            break;
        }
        l += 1;
    }
    let (a, lg, nf) = (params.a, params.log2_8m(), n as f64);
    let log_a = |x: f64| x.ln() / a.ln();
    let lower = -1.0 + log_a(((a - 1.0) * nf + a + lg) / ((2.0 * a - 1.0) + lg));
    let upper = log_a(((a - 1.0) * nf + lg) / ((a - 1.0) + lg));
    let lf = l as f64;
    Ok(ScaleChainStats { n, l_n: l, lower, upper, bounds_ok: lower <= lf && lf <= upper })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleFiberCount {
    pub m: u32,
    pub j: i64,
    pub count: u64,
    pub bound: f64,
}

/// `|S_{m,j}| = |{n ≤ n_max : s^m(n) = j}|` against `(3a/(a−1))·a^m`.
pub fn scale_fiber_census(params: &ContourParams, m_max: u32, j_max: i64, n_max: i64) -> Vec<ScaleFiberCount> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        let bound = 3.0 * params.a / (params.a - 1.0) * params.a.powi(m as i32);
        for j in 1..=j_max {
            let count = (1..=n_max)
                .filter(|&n| {
                    let mut cur = n;
                    for _ in 0..m {
                        cur = scale_map(cur, params);
                    }
                    cur == j
                })
                .count() as u64;
            out.push(ScaleFiberCount { m, j, count, bound });
        }
    }
    out
}
