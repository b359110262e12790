//! (M,a)-irreducibility, the (M,a)-partition of a boundary, the nesting
//! order and the negative/positive site sets of a family.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::covers::ContourParams;
use crate::error::{Error, Result};
use crate::lattice::{HalfInteger, SpinFlipSet};

/// A split of `γ` into the contiguous run `flips[start..end]` and the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub start: usize,
    pub end: usize,
}

/// Finds a bipartition with `dist > M·min(diam)^a`, if any.
///
/// A point of either side inside the hull of the smaller-diameter side is
/// within `diam` of it, which is below `M·diam^a`, so the smaller side of any
/// valid split is a contiguous run of flips. Scanning all proper even runs is
/// therefore exhaustive.
pub fn find_split(flips: &[HalfInteger], params: &ContourParams) -> Option<Split> {
    let k = flips.len();
    let t = |i: usize| flips[i].twice();
    for start in 0..k {
        for end in ((start + 2)..=k).step_by(2) {
            if start == 0 && end == k {
                continue;
            }
            let run_diam = (t(end - 1) - t(start)) / 2;
            let gap_left = if start > 0 { t(start) - t(start - 1) } else { i64::MAX };
            let gap_right = if end < k { t(end) - t(end - 1) } else { i64::MAX };
            let dist = gap_left.min(gap_right) / 2;
            let rest_lo = if start > 0 { t(0) } else { t(end) };
            let rest_hi = if end < k { t(k - 1) } else { t(start - 1) };
            let rest_diam = (rest_hi - rest_lo) / 2;
            if dist as f64 > params.separation(run_diam.min(rest_diam)) {
                return Some(Split { start, end });
            }
        }
    }
    None
}

pub fn is_irreducible(gamma: &SpinFlipSet, params: &ContourParams) -> Result<bool> {
    if gamma.is_empty() {
        return Err(Error::EmptyContour);
    }
    Ok(find_split(gamma.flips(), params).is_none())
}

/// `dist(γ₁,γ₂) > M·min(diam γ₁, diam γ₂)^a`.
pub fn well_separated(g1: &SpinFlipSet, g2: &SpinFlipSet, params: &ContourParams) -> Result<bool> {
    let d = g1.dist(g2)?;
    Ok(d as f64 > params.separation(g1.diam()?.min(g2.diam()?)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourPartition {
    pub parts: Vec<SpinFlipSet>,
    pub params: ContourParams,
    pub source: SpinFlipSet,
}

impl ContourPartition {
    pub fn externals(&self) -> Vec<SpinFlipSet> {
        externals(&self.parts)
    }

    pub fn view(&self, external: &SpinFlipSet) -> Result<PartitionView> {
        partition_view(&self.parts, external)
    }
}

fn split_to_fixpoint(flips: Vec<HalfInteger>, params: &ContourParams, out: &mut Vec<Vec<HalfInteger>>) {
    let mut stack = vec![flips];
    while let Some(part) = stack.pop() {
        match find_split(&part, params) {
            Some(Split { start, end }) => {
                let run = part[start..end].to_vec();
                let rest: Vec<HalfInteger> = part[..start].iter().chain(&part[end..]).copied().collect();
                stack.push(run);
                stack.push(rest);
            }
            None => out.push(part),
        }
    }
}

/// The (M,a)-partition: split reducible parts until every part is
/// irreducible, then merge and re-split any pair violating the separation
/// property until nothing changes.
pub fn partition(flips: &SpinFlipSet, params: &ContourParams) -> Result<ContourPartition> {
    if flips.len() % 2 != 0 {
        return Err(Error::OddCardinality(flips.len()));
    }
    let mut parts = Vec::new();
    if !flips.is_empty() {
        split_to_fixpoint(flips.flips().to_vec(), params, &mut parts);
    }
    let cap = flips.len() * flips.len() + 1;
    let mut rounds = 0;
    loop {
        let as_sets: Vec<SpinFlipSet> = parts.iter().map(|p| SpinFlipSet::from_sorted_unchecked(p.clone())).collect();
        let mut violation = None;
        'search: for i in 0..as_sets.len() {
            for j in i + 1..as_sets.len() {
                if !well_separated(&as_sets[i], &as_sets[j], params)? {
                    violation = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = violation else { break };
        rounds += 1;
        if rounds > cap {
            return Err(Error::Certification(format!("fixpoint not reached after {cap} rounds")));
        }
        let mut merged: Vec<HalfInteger> = parts[i].iter().chain(&parts[j]).copied().collect();
        merged.sort_unstable();
        parts.remove(j);
        parts.remove(i);
        // merged parts are kept whole; only a fresh reducibility split may divide them
        match find_split(&merged, params) {
            Some(_) => split_to_fixpoint(merged, params, &mut parts),
            None => parts.push(merged),
        }
    }
    let mut parts: Vec<SpinFlipSet> = parts.into_iter().map(SpinFlipSet::from_sorted_unchecked).collect();
    parts.sort();
    Ok(ContourPartition { parts, params: *params, source: flips.clone() })
}

/// Operational compatibility: the family is exactly the partition of its union.
pub fn is_compatible_family(parts: &[SpinFlipSet], params: &ContourParams) -> Result<bool> {
    let union = SpinFlipSet::union(parts)?;
    let mut sorted = parts.to_vec();
    sorted.sort();
    Ok(partition(&union, params)?.parts == sorted)
}

/// `γ < γ′`: `γ` sits inside one open gap `(b′_j, b′_{j+1})` of `γ′`.
pub fn is_nested_in(inner: &SpinFlipSet, outer: &SpinFlipSet) -> bool {
    gap_index(inner, outer).is_some()
}

/// Index `j` (0-based) with `inner ⊂ (b_j, b_{j+1})` of `outer`.
fn gap_index(inner: &SpinFlipSet, outer: &SpinFlipSet) -> Option<usize> {
    let (lo, hi) = (inner.first()?, inner.last()?);
    let b = outer.flips();
    let idx = b.partition_point(|&x| x < lo);
    (idx >= 1 && idx < b.len() && hi < b[idx]).then(|| idx - 1)
}

fn volumes_intersect(g1: &SpinFlipSet, g2: &SpinFlipSet) -> bool {
    match (g1.first(), g1.last(), g2.first(), g2.last()) {
        (Some(a1), Some(b1), Some(a2), Some(b2)) => a1.ceil().max(a2.ceil()) <= b1.floor().min(b2.floor()),
        _ => false,
    }
}

pub fn is_well_ordered(parts: &[SpinFlipSet]) -> bool {
    for (i, g) in parts.iter().enumerate() {
        for h in &parts[i + 1..] {
            if !is_nested_in(g, h) && !is_nested_in(h, g) && volumes_intersect(g, h) {
                return false;
            }
        }
    }
    true
}

/// Maximal elements under the nesting order.
pub fn externals(parts: &[SpinFlipSet]) -> Vec<SpinFlipSet> {
    parts
        .iter()
        .filter(|g| !parts.iter().any(|h| h != *g && is_nested_in(g, h)))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionView {
    pub externals: Vec<SpinFlipSet>,
    pub gamma: SpinFlipSet,
    /// `Γ(γ)`: parts nested below `γ`, and `γ` itself.
    pub gamma_closure: Vec<SpinFlipSet>,
    /// `Γ₋(γ)`: parts inside a minus block of `γ`.
    pub interior_minus: Vec<SpinFlipSet>,
    /// `Γ₊(γ)`: parts inside a plus gap of `γ`.
    pub interior_plus: Vec<SpinFlipSet>,
}

pub fn partition_view(parts: &[SpinFlipSet], gamma: &SpinFlipSet) -> Result<PartitionView> {
    if !parts.contains(gamma) {
        return Err(Error::InvalidParameter(format!("{gamma} is not a part of the family")));
    }
    let mut closure = vec![gamma.clone()];
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for p in parts {
        if let Some(j) = gap_index(p, gamma) {
            closure.push(p.clone());
            if j % 2 == 0 {
                minus.push(p.clone());
            } else {
                plus.push(p.clone());
            }
        }
    }
    closure.sort();
    Ok(PartitionView { externals: externals(parts), gamma: gamma.clone(), gamma_closure: closure, interior_minus: minus, interior_plus: plus })
}

/// `N(Γ)`: minus sites of the configuration whose boundary is the union.
pub fn negative_set(parts: &[SpinFlipSet]) -> Result<BTreeSet<i64>> {
    Ok(SpinFlipSet::union(parts)?.minus_sites().into_iter().collect())
}

/// `P(Γ) = V(Γ) ∖ N(Γ)` with `V(Γ)` the union of the part volumes.
pub fn positive_part(parts: &[SpinFlipSet]) -> Result<BTreeSet<i64>> {
    let neg = negative_set(parts)?;
    let mut vol = BTreeSet::new();
    for p in parts {
        if let (Some(a), Some(b)) = (p.first(), p.last()) {
            vol.extend(a.ceil()..=b.floor());
        }
    }
    Ok(vol.difference(&neg).copied().collect())
}
