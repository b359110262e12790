//! Dual-lattice geometry: half-integer spin flips, configurations and their interiors.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `Z + 1/2`, stored as the odd integer `2x + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub fn from_twice(twice_value: i64) -> Result<Self> {
        if twice_value.rem_euclid(2) == 1 {
            Ok(HalfInteger(twice_value))
        } else {
            Err(Error::EvenTwiceValue(twice_value))
        }
    }

    /// The half-integer `x + 1/2`.
    pub fn right_of(x: i64) -> Self {
        HalfInteger(2 * x + 1)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    /// Largest integer below the point.
    pub fn floor(self) -> i64 {
        (self.0 - 1) / 2
    }

    /// Smallest integer above the point.
    pub fn ceil(self) -> i64 {
        (self.0 + 1) / 2
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl TryFrom<i64> for HalfInteger {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        HalfInteger::from_twice(v)
    }
}

impl From<HalfInteger> for i64 {
    fn from(h: HalfInteger) -> i64 {
        h.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// Closed integer interval `[lo, hi]`. Empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalZ {
    pub lo: i64,
    pub hi: i64,
}

impl IntervalZ {
    pub fn new(lo: i64, hi: i64) -> Self {
        IntervalZ { lo, hi }
    }

    pub fn empty() -> Self {
        IntervalZ { lo: 0, hi: -1 }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo) as u64 + 1
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn intersects(&self, other: &IntervalZ) -> bool {
        !self.is_empty() && !other.is_empty() && self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Finite even subset of the dual lattice, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SpinFlipSet {
    flips: Vec<HalfInteger>,
}

impl SpinFlipSet {
    pub fn empty() -> Self {
        SpinFlipSet { flips: Vec::new() }
    }

    pub fn from_twice_values(values: &[i64]) -> Result<Self> {
        let mut flips = Vec::with_capacity(values.len());
        for (i, &v) in values.iter().enumerate() {
            let h = HalfInteger::from_twice(v)?;
            if let Some(&prev) = flips.last() {
                if h <= prev {
                    return Err(Error::NotStrictlyIncreasing(i));
                }
            }
            flips.push(h);
        }
        if flips.len() % 2 != 0 {
            return Err(Error::OddCardinality(flips.len()));
        }
        Ok(SpinFlipSet { flips })
    }

    /// Builds a set from arbitrary odd integers, sorting and checking parity.
    pub fn from_unsorted(mut values: Vec<i64>) -> Result<Self> {
        values.sort_unstable();
        SpinFlipSet::from_twice_values(&values)
    }

    /// Caller guarantees sorted, odd, duplicate-free, even length.
    pub(crate) fn from_sorted_unchecked(flips: Vec<HalfInteger>) -> Self {
        debug_assert!(flips.len() % 2 == 0);
        debug_assert!(flips.windows(2).all(|w| w[0] < w[1]));
        SpinFlipSet { flips }
    }

    /// `{1/2, n + 1/2}`: a bubble of `n` minus spins on `1..=n`.
    pub fn bubble(n: u64) -> Self {
        SpinFlipSet {
            flips: vec![HalfInteger(1), HalfInteger(2 * n as i64 + 1)],
        }
    }

    pub fn flips(&self) -> &[HalfInteger] {
        &self.flips
    }

    pub fn twice_values(&self) -> Vec<i64> {
        self.flips.iter().map(|h| h.0).collect()
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    pub fn first(&self) -> Option<HalfInteger> {
        self.flips.first().copied()
    }

    pub fn last(&self) -> Option<HalfInteger> {
        self.flips.last().copied()
    }

    pub fn contains(&self, h: HalfInteger) -> bool {
        self.flips.binary_search(&h).is_ok()
    }

    /// `b_{2m} - b_1`.
    pub fn diam(&self) -> Result<i64> {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => Ok((b.0 - a.0) / 2),
            _ => Err(Error::EmptyContour),
        }
    }

    /// Minimum pairwise distance between the two sets.
    pub fn dist(&self, other: &SpinFlipSet) -> Result<i64> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptyContour);
        }
        let (a, b) = (&self.flips, &other.flips);
        let (mut i, mut j) = (0, 0);
        let mut best = i64::MAX;
        while i < a.len() && j < b.len() {
            best = best.min((a[i].0 - b[j].0).abs());
            if a[i] < b[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(best / 2)
    }

    /// Union of disjoint sets. Fails on overlap.
    pub fn union<'a, I: IntoIterator<Item = &'a SpinFlipSet>>(sets: I) -> Result<Self> {
        let mut all: Vec<HalfInteger> = sets.into_iter().flat_map(|s| s.flips.iter().copied()).collect();
        all.sort_unstable();
        for (i, w) in all.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::NotStrictlyIncreasing(i + 1));
            }
        }
        Ok(SpinFlipSet { flips: all })
    }

    /// Set difference; the result must stay even.
    pub fn difference(&self, other: &SpinFlipSet) -> Result<Self> {
        let flips: Vec<HalfInteger> = self.flips.iter().copied().filter(|h| !other.contains(*h)).collect();
        if flips.len() % 2 != 0 {
            return Err(Error::OddCardinality(flips.len()));
        }
        Ok(SpinFlipSet { flips })
    }

    pub fn is_subset_of(&self, other: &SpinFlipSet) -> bool {
        self.flips.iter().all(|h| other.contains(*h))
    }

    /// Number of flips strictly between the reals `lo` and `hi` given as twice values.
    pub fn count_between_twice(&self, lo2: i64, hi2: i64) -> usize {
        let start = self.flips.partition_point(|h| h.0 <= lo2);
        let end = self.flips.partition_point(|h| h.0 < hi2);
        end.saturating_sub(start)
    }

    /// Sites carrying a minus spin in `configuration(self, +1)`.
    pub fn minus_sites(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for pair in self.flips.chunks(2) {
            out.extend(pair[0].ceil()..=pair[1].floor());
        }
        out
    }
}

impl TryFrom<Vec<i64>> for SpinFlipSet {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        SpinFlipSet::from_twice_values(&v)
    }
}

impl From<SpinFlipSet> for Vec<i64> {
    fn from(s: SpinFlipSet) -> Vec<i64> {
        s.twice_values()
    }
}

impl fmt::Display for SpinFlipSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for h in &self.flips {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{}", h.0)?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for SpinFlipSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SpinFlipSet::empty());
        }
        let values = s
            .split(',')
            .map(|tok| tok.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{tok:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        SpinFlipSet::from_twice_values(&values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("unknown sign {s:?}"))),
        }
    }
}

/// Spin configuration with homogeneous boundary sign. `minus_sites` are the
/// sites whose spin is opposite to the boundary, so for `Sign::Plus` they are
/// exactly the sites with `σ_x = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub minus_sites: BTreeSet<i64>,
    pub boundary_sign: Sign,
}

impl Configuration {
    pub fn homogeneous(boundary_sign: Sign) -> Self {
        Configuration { minus_sites: BTreeSet::new(), boundary_sign }
    }

    pub fn spin(&self, x: i64) -> i8 {
        let s = self.boundary_sign.value();
        if self.minus_sites.contains(&x) {
            -s
        } else {
            s
        }
    }
}

pub fn boundary(config: &Configuration) -> SpinFlipSet {
    let mut flips = Vec::new();
    let mut iter = config.minus_sites.iter().copied().peekable();
    while let Some(start) = iter.next() {
        let mut end = start;
        while iter.peek() == Some(&(end + 1)) {
            end += 1;
            iter.next();
        }
        flips.push(HalfInteger::right_of(start - 1));
        flips.push(HalfInteger::right_of(end));
    }
    SpinFlipSet::from_sorted_unchecked(flips)
}

pub fn configuration(gamma: &SpinFlipSet, boundary_sign: Sign) -> Configuration {
    Configuration { minus_sites: gamma.minus_sites().into_iter().collect(), boundary_sign }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interiors {
    pub minus_blocks: Vec<IntervalZ>,
    pub plus_blocks: Vec<IntervalZ>,
    pub volume: IntervalZ,
}

impl Interiors {
    pub fn minus_count(&self) -> u64 {
        self.minus_blocks.iter().map(IntervalZ::len).sum()
    }

    pub fn plus_count(&self) -> u64 {
        self.plus_blocks.iter().map(IntervalZ::len).sum()
    }
}

pub fn interiors(gamma: &SpinFlipSet) -> Result<Interiors> {
    let b = gamma.flips();
    if b.is_empty() {
        return Err(Error::EmptyContour);
    }
    let minus_blocks = b.chunks(2).map(|p| IntervalZ::new(p[0].ceil(), p[1].floor())).collect();
    let plus_blocks = (1..b.len() - 1)
        .step_by(2)
        .map(|i| IntervalZ::new(b[i].ceil(), b[i + 1].floor()))
        .collect();
    let volume = IntervalZ::new(b[0].ceil(), b[b.len() - 1].floor());
    Ok(Interiors { minus_blocks, plus_blocks, volume })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[i64]) -> SpinFlipSet {
        SpinFlipSet::from_twice_values(v).unwrap()
    }

    fn config(sites: &[i64]) -> Configuration {
        Configuration { minus_sites: sites.iter().copied().collect(), boundary_sign: Sign::Plus }
    }

    // Brute-force boundary: scan every adjacent pair over a padded window.
    fn boundary_scan(c: &Configuration) -> Vec<i64> {
        let (lo, hi) = match (c.minus_sites.first(), c.minus_sites.last()) {
            (Some(&a), Some(&b)) => (a - 2, b + 2),
            _ => return vec![],
        };
        (lo..hi).filter(|&x| c.spin(x) != c.spin(x + 1)).map(|x| 2 * x + 1).collect()
    }

    #[test]
    fn rejects_even_and_unsorted() {
        assert_eq!(HalfInteger::from_twice(2), Err(Error::EvenTwiceValue(2)));
        assert!(HalfInteger::from_twice(-3).is_ok());
        assert_eq!(SpinFlipSet::from_twice_values(&[3, 1]), Err(Error::NotStrictlyIncreasing(1)));
        assert_eq!(SpinFlipSet::from_twice_values(&[1, 3, 5]), Err(Error::OddCardinality(3)));
    }

    #[test]
    fn floor_ceil_negative() {
        let h = HalfInteger::from_twice(-1).unwrap();
        assert_eq!((h.floor(), h.ceil()), (-1, 0));
        let h = HalfInteger::from_twice(-7).unwrap();
        assert_eq!((h.floor(), h.ceil()), (-4, -3));
    }

    #[test]
    fn boundary_examples() {
        assert!(boundary(&Configuration::homogeneous(Sign::Plus)).is_empty());
        assert_eq!(boundary(&config(&[0])).twice_values(), vec![-1, 1]);
        assert_eq!(boundary(&config(&[1, 2, 3, 7])).twice_values(), vec![1, 7, 13, 15]);
    }

    #[test]
    fn configuration_examples() {
        assert!(configuration(&SpinFlipSet::empty(), Sign::Plus).minus_sites.is_empty());
        assert_eq!(configuration(&set(&[-1, 1]), Sign::Plus), config(&[0]));
        assert_eq!(configuration(&set(&[1, 7, 13, 15]), Sign::Plus), config(&[1, 2, 3, 7]));
    }

    #[test]
    fn interiors_examples() {
        let i = interiors(&set(&[-1, 1])).unwrap();
        assert_eq!(i.minus_blocks, vec![IntervalZ::new(0, 0)]);
        assert!(i.plus_blocks.is_empty());
        assert_eq!(i.volume, IntervalZ::new(0, 0));

        let i = interiors(&set(&[1, 7, 13, 15])).unwrap();
        assert_eq!(i.minus_blocks, vec![IntervalZ::new(1, 3), IntervalZ::new(7, 7)]);
        assert_eq!(i.plus_blocks, vec![IntervalZ::new(4, 6)]);
        assert_eq!(i.volume, IntervalZ::new(1, 7));

        let i = interiors(&SpinFlipSet::bubble(9)).unwrap();
        assert_eq!(i.minus_blocks, vec![IntervalZ::new(1, 9)]);
        assert_eq!(i.plus_count(), 0);

        assert_eq!(interiors(&SpinFlipSet::empty()), Err(Error::EmptyContour));
    }

    #[test]
    fn diam_dist_examples() {
        assert_eq!(set(&[1, 3]).diam(), Ok(1));
        assert_eq!(set(&[1, 9]).diam(), Ok(4));
        // exhaustive pair minimum over the four pairs: |11/2 - 3/2| = 4
        let (a, b) = (set(&[1, 3]), set(&[11, 13]));
        let brute = [1i64, 3]
            .iter()
            .flat_map(|x| [11i64, 13].map(|y| (y - x).abs() / 2))
            .min()
            .unwrap();
        assert_eq!(brute, 4);
        assert_eq!(a.dist(&b), Ok(brute));
        assert_eq!(SpinFlipSet::empty().diam(), Err(Error::EmptyContour));
        assert_eq!(a.dist(&SpinFlipSet::empty()), Err(Error::EmptyContour));
    }

    #[test]
    fn text_form() {
        let s: SpinFlipSet = "1,7,13,15".parse().unwrap();
        assert_eq!(s, set(&[1, 7, 13, 15]));
        assert_eq!(s.to_string(), "1,7,13,15");
        assert_eq!("".parse::<SpinFlipSet>(), Ok(SpinFlipSet::empty()));
        assert_eq!(" -1, 1 ".parse::<SpinFlipSet>(), Ok(set(&[-1, 1])));
        assert!("1,x".parse::<SpinFlipSet>().is_err());
        assert!("1,2".parse::<SpinFlipSet>().is_err());
    }

    #[test]
    fn minus_boundary_round_trip() {
        let c = Configuration { minus_sites: [-2, -1, 4].into_iter().collect(), boundary_sign: Sign::Minus };
        let g = boundary(&c);
        assert_eq!(g.twice_values(), boundary_scan(&c));
        assert_eq!(configuration(&g, Sign::Minus), c);
        assert_eq!(c.spin(-2), 1);
        assert_eq!(c.spin(0), -1);
    }

    fn arb_sites() -> impl Strategy<Value = BTreeSet<i64>> {
        proptest::collection::btree_set(-40i64..40, 0..20)
    }

    fn arb_flips() -> impl Strategy<Value = SpinFlipSet> {
        proptest::collection::btree_set(-40i64..40, 0..16).prop_map(|s| {
            let mut v: Vec<i64> = s.into_iter().map(|x| 2 * x + 1).collect();
            if v.len() % 2 == 1 {
                v.pop();
            }
            SpinFlipSet::from_twice_values(&v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn config_round_trip(sites in arb_sites(), minus in any::<bool>()) {
            let sign = if minus { Sign::Minus } else { Sign::Plus };
            let c = Configuration { minus_sites: sites, boundary_sign: sign };
            let g = boundary(&c);
            prop_assert_eq!(g.len() % 2, 0);
            prop_assert_eq!(g.twice_values(), boundary_scan(&c));
            prop_assert_eq!(configuration(&g, sign), c);
        }

        #[test]
        fn flips_round_trip(g in arb_flips()) {
            prop_assert_eq!(boundary(&configuration(&g, Sign::Plus)), g.clone());
            let parsed: SpinFlipSet = g.to_string().parse().unwrap();
            prop_assert_eq!(parsed, g);
        }

        #[test]
        fn volume_splits(g in arb_flips()) {
            prop_assume!(!g.is_empty());
            let i = interiors(&g).unwrap();
            prop_assert_eq!(i.minus_count() + i.plus_count(), i.volume.len());
            prop_assert_eq!(i.minus_count() as usize, g.minus_sites().len());
            prop_assert_eq!(i.volume.len() as i64, g.diam().unwrap());
        }
    }
}
