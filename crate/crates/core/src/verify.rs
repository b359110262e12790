//! Exhaustive sweeps over configurations and contour corpora, each reduced
//! to a violation count and the tightest observed instance.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{c_of, energy_bracket};
use crate::contours::{externals, is_irreducible, partition};
use crate::covers::{cover_family, cover_size, isolated_cover_size, ContourParams, OpenInterval};
use crate::energy::{epsilon_j, field_energy, hamiltonian, tail_sum, FieldProfile, ModelParams};
use crate::error::{Error, Result};
use crate::lattice::{boundary, Configuration, Sign, SpinFlipSet};

/// Largest half-width accepted by the configuration sweeps (`2^{2L+1}` states).
pub const SWEEP_L_LIMIT: u32 = 10;

const EPSILON_PROBE: u32 = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Removal { flips: SpinFlipSet, contour: SpinFlipSet },
    Contour { contour: SpinFlipSet },
    Tail { n: u64, m: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lemma_id: String,
    pub corpus: String,
    pub instances_checked: u64,
    pub violations: u64,
    /// Instances whose right-hand side is negative; never counted as evidence.
    pub vacuous: u64,
    /// Minimum slack over non-vacuous instances.
    pub extremal_margin: Option<f64>,
    pub witness: Option<Witness>,
    pub extra: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Translation-normalised flip sets (first flip at `1/2`) with at most
/// `max_flips` flips and diameter at most `max_diam`, kept when
/// `(M,a)`-irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusSpec {
    pub max_flips: usize,
    pub max_diam: i64,
    pub contour: ContourParams,
}

impl CorpusSpec {
    pub fn describe(&self) -> String {
        format!(
            "irreducible flip sets, |γ| ≤ {}, diam ≤ {}, first flip 1/2, (M,a)=({},{})",
            self.max_flips, self.max_diam, self.contour.m, self.contour.a
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub spec: CorpusSpec,
    pub sets: Vec<SpinFlipSet>,
}

impl Corpus {
    pub fn generate(spec: CorpusSpec) -> Result<Corpus> {
        if spec.max_flips < 2 || spec.max_diam < 1 {
            return Err(Error::InvalidParameter("corpus needs max_flips ≥ 2 and max_diam ≥ 1".into()));
        }
        let tails: Vec<i64> = (1..=spec.max_diam).map(|d| 2 * d + 1).collect();
        let mut raw = Vec::new();
        let mut buf = vec![1i64];
        subsets(&tails, 0, spec.max_flips, &mut buf, &mut raw);
        let sets: Result<Vec<Option<SpinFlipSet>>> = raw
            .into_par_iter()
            .map(|t| {
                let g = SpinFlipSet::from_twice_values(&t)?;
                Ok(if is_irreducible(&g, &spec.contour)? { Some(g) } else { None })
            })
            .collect();
        let mut sets: Vec<SpinFlipSet> = sets?.into_iter().flatten().collect();
        sets.sort();
        Ok(Corpus { spec, sets })
    }

    pub fn from_sets(spec: CorpusSpec, sets: Vec<SpinFlipSet>) -> Corpus {
        Corpus { spec, sets }
    }
}

fn subsets(pool: &[i64], from: usize, cap: usize, buf: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if buf.len() % 2 == 0 {
        out.push(buf.clone());
    }
    if buf.len() == cap {
        return;
    }
    for i in from..pool.len() {
        buf.push(pool[i]);
        subsets(pool, i + 1, cap, buf, out);
        buf.pop();
    }
}

/// Every flip set `∂σ` for `σ ∈ Ω⁺_L` other than the all-plus state.
pub fn box_boundaries(l: u32) -> Result<Vec<SpinFlipSet>> {
    if l == 0 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    if l > SWEEP_L_LIMIT {
        return Err(Error::Resource(format!("L = {l} exceeds the sweep limit {SWEEP_L_LIMIT}")));
    }
    let sites = 2 * l as u64 + 1;
    Ok((1u64..1 << sites)
        .map(|mask| {
            let minus_sites: BTreeSet<i64> =
                (0..sites).filter(|i| mask >> i & 1 == 1).map(|i| i as i64 - l as i64).collect();
            boundary(&Configuration { minus_sites, boundary_sign: Sign::Plus })
        })
        .collect())
}

#[derive(Debug, Clone)]
struct Outcome {
    index: usize,
    violation: bool,
    vacuous: bool,
    margin: Option<f64>,
    witness: Witness,
    stats: [f64; 2],
}

#[derive(Debug, Clone)]
struct Tally {
    checked: u64,
    violations: u64,
    vacuous: u64,
    best: Option<(f64, usize, Witness)>,
    stat_min: f64,
    stat_max: f64,
}

impl Tally {
    fn empty() -> Tally {
        Tally { checked: 0, violations: 0, vacuous: 0, best: None, stat_min: f64::INFINITY, stat_max: f64::NEG_INFINITY }
    }

    fn push(mut self, o: Outcome) -> Tally {
        self.checked += 1;
        self.violations += o.violation as u64;
        self.vacuous += o.vacuous as u64;
        self.stat_min = self.stat_min.min(o.stats[0]);
        self.stat_max = self.stat_max.max(o.stats[1]);
        if let Some(m) = o.margin {
            self.best = pick(self.best, Some((m, o.index, o.witness)));
        }
        self
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.violations += other.violations;
        self.vacuous += other.vacuous;
        self.stat_min = self.stat_min.min(other.stat_min);
        self.stat_max = self.stat_max.max(other.stat_max);
        self.best = pick(self.best, other.best);
        self
    }

    fn report(self, lemma_id: &str, corpus: String, stat_names: [&str; 2]) -> VerificationReport {
        let mut extra = BTreeMap::new();
        if self.checked > 0 {
            if !stat_names[0].is_empty() {
                extra.insert(stat_names[0].to_string(), self.stat_min);
            }
            if !stat_names[1].is_empty() {
                extra.insert(stat_names[1].to_string(), self.stat_max);
            }
        }
        let (extremal_margin, witness) = match self.best {
            Some((m, _, w)) => (Some(m), Some(w)),
            None => (None, None),
        };
        VerificationReport {
            lemma_id: lemma_id.to_string(),
            corpus,
            instances_checked: self.checked,
            violations: self.violations,
            vacuous: self.vacuous,
            extremal_margin,
            witness,
            extra,
        }
    }
}

/// Smaller margin wins; ties go to the earlier instance so the reduction is
/// independent of scheduling.
fn pick(a: Option<(f64, usize, Witness)>, b: Option<(f64, usize, Witness)>) -> Option<(f64, usize, Witness)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

fn run<F>(items: usize, f: F) -> Result<Tally>
where
    F: Fn(usize) -> Result<Vec<Outcome>> + Sync,
{
    (0..items)
        .into_par_iter()
        .map(|i| f(i).map(|os| os.into_iter().fold(Tally::empty(), Tally::push)))
        .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))
}

/// Certified slack in `H(Γ) − H(Γ∖γ) ≥ bracket · H(γ)` for one external contour.
/// Returns `(margin, observed ratio)`.
pub fn energy_estimate_margin(
    flips: &SpinFlipSet,
    contour: &SpinFlipSet,
    params: &ModelParams,
    bracket: f64,
) -> Result<(f64, f64)> {
    let rest = flips.difference(contour)?;
    let h_all = hamiltonian(flips, params)?;
    let h_rest = hamiltonian(&rest, params)?;
    let h_g = hamiltonian(contour, params)?;
    let lhs_lower = (h_all.lower() - h_rest.upper()) * (1.0 - 2.0 * f64::EPSILON);
    let rhs_upper = if bracket >= 0.0 { bracket * h_g.upper() * (1.0 + 2.0 * f64::EPSILON) } else { bracket * h_g.lower() };
    Ok((lhs_lower - rhs_upper, (h_all.value - h_rest.value) / h_g.value))
}

pub fn sweep_energy_estimate(l: u32, params: &ModelParams, contour: &ContourParams) -> Result<VerificationReport> {
    let configs = box_boundaries(l)?;
    let bracket = energy_bracket(params.alpha, contour)?;
    let tally = run(configs.len(), |i| {
        let flips = &configs[i];
        let parts = partition(flips, contour)?.parts;
        externals(&parts)
            .into_iter()
            .map(|g| {
                let (margin, ratio) = energy_estimate_margin(flips, &g, params, bracket)?;
                let vacuous = bracket < 0.0;
                Ok(Outcome {
                    index: i,
                    violation: margin < 0.0,
                    vacuous,
                    margin: if vacuous { None } else { Some(margin) },
                    witness: Witness::Removal { flips: flips.clone(), contour: g },
                    stats: [ratio, ratio],
                })
            })
            .collect()
    })?;
    let mut report = tally.report(
        "energy-estimate",
        format!("all σ ∈ Ω⁺_L, L={l}, every external contour, alpha={}, (M,a)=({},{})", params.alpha, contour.m, contour.a),
        ["min_ratio", "max_ratio"],
    );
    report.extra.insert("bracket".into(), bracket);
    Ok(report)
}

/// Certified slack in `H_J(γ) ≥ ε N′(γ)`.
pub fn geometric_estimate_margin(gamma: &SpinFlipSet, params: &ModelParams, contour: &ContourParams, epsilon: f64) -> Result<(f64, f64)> {
    let h = hamiltonian(gamma, params)?;
    let n_iso = isolated_cover_size(gamma, contour)? as f64;
    let rhs_upper = epsilon * n_iso * (1.0 + 2.0 * f64::EPSILON);
    Ok((h.lower() - rhs_upper, h.value / n_iso))
}

pub fn sweep_geometric_estimate(corpus: &Corpus, params: &ModelParams, contour: &ContourParams) -> Result<VerificationReport> {
    let epsilon = epsilon_j(params, EPSILON_PROBE)?;
    let tally = run(corpus.sets.len(), |i| {
        let g = &corpus.sets[i];
        let (margin, ratio) = geometric_estimate_margin(g, params, contour, epsilon)?;
        Ok(vec![Outcome {
            index: i,
            violation: margin < 0.0,
            vacuous: false,
            margin: Some(margin),
            witness: Witness::Contour { contour: g.clone() },
            stats: [ratio, ratio],
        }])
    })?;
    let mut report = tally.report(
        "geometric-estimate",
        format!("{}, alpha={}", corpus.spec.describe(), params.alpha),
        ["min_ratio", ""],
    );
    report.extra.insert("epsilon_lower".into(), epsilon);
    Ok(report)
}

/// Slack in `N(γ) ≤ c N′(γ)` using a value of `c` rounded down.
pub fn cover_relation_margin(gamma: &SpinFlipSet, contour: &ContourParams, c_lower: f64) -> Result<(f64, f64)> {
    let n = cover_size(gamma)? as f64;
    let n_iso = isolated_cover_size(gamma, contour)? as f64;
    Ok((c_lower * n_iso - n, n / n_iso))
}

pub fn sweep_cover_relation(corpus: &Corpus, contour: &ContourParams) -> Result<VerificationReport> {
    let c = c_of(contour)?;
    let c_lower = c * (1.0 - 1e-12);
    let tally = run(corpus.sets.len(), |i| {
        let g = &corpus.sets[i];
        let (margin, ratio) = cover_relation_margin(g, contour, c_lower)?;
        Ok(vec![Outcome {
            index: i,
            violation: margin < 0.0,
            vacuous: false,
            margin: Some(margin),
            witness: Witness::Contour { contour: g.clone() },
            stats: [ratio, ratio],
        }])
    })?;
    let mut report = tally.report("cover-relation", corpus.spec.describe(), ["", "max_ratio"]);
    report.extra.insert("c_Ma".into(), c);
    Ok(report)
}

/// Integer blocks `(I_−, I_+)` flanking an isolated interval `(a, b)` of scale n.
pub fn flanking_blocks(interval: &OpenInterval) -> ((i64, i64), (i64, i64)) {
    let half = 1i64 << (interval.scale - 1);
    let (a, b) = (interval.left, interval.right());
    ((a - half + 1, a), (b, b + half - 1))
}

fn blocks_meet(x: (i64, i64), y: (i64, i64)) -> bool {
    x.0 <= y.1 && y.0 <= x.1
}

/// Checks for one contour: no flips inside the flanking blocks, `χ_γ = 1` on
/// every product pair, and disjoint products across isolated intervals.
/// Returns `(ok, isolation slack, isolated count, product pairs checked)`.
pub fn interval_disjointness_instance(gamma: &SpinFlipSet, contour: &ContourParams) -> Result<(bool, Option<f64>, u64, u64)> {
    let fam = cover_family(gamma, contour)?;
    let mut isolated = Vec::new();
    let mut slack: Option<f64> = None;
    for (k, members) in fam.isolated.iter().enumerate() {
        let n = k as u32 + 1;
        let cover = &fam.cover[n as usize];
        for iv in members {
            isolated.push(*iv);
            let nearest = cover.iter().filter(|o| *o != iv).map(|o| iv.dist(o) as f64).fold(f64::INFINITY, f64::min);
            let s = nearest - contour.isolation(n);
            if s.is_finite() {
                slack = Some(slack.map_or(s, |t| t.min(s)));
            }
        }
    }
    let mut ok = true;
    let mut pairs = 0u64;
    let blocks: Vec<_> = isolated.iter().map(flanking_blocks).collect();
    for &(minus, plus) in &blocks {
        // a flip strictly between two sites of a block lies inside it
        ok &= gamma.count_between_twice(2 * minus.0, 2 * minus.1) == 0;
        ok &= gamma.count_between_twice(2 * plus.0, 2 * plus.1) == 0;
        for x in minus.0..=minus.1 {
            for y in plus.0..=plus.1 {
                pairs += 1;
                ok &= gamma.count_between_twice(2 * x, 2 * y) % 2 == 1;
            }
        }
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let ((m1, p1), (m2, p2)) = (blocks[i], blocks[j]);
            let same = blocks_meet(m1, m2) && blocks_meet(p1, p2);
            let crossed = blocks_meet(m1, p2) && blocks_meet(p1, m2);
            ok &= !(same || crossed);
        }
    }
    Ok((ok, slack, isolated.len() as u64, pairs))
}

pub fn sweep_interval_disjointness(corpus: &Corpus, contour: &ContourParams) -> Result<VerificationReport> {
    let tally = run(corpus.sets.len(), |i| {
        let g = &corpus.sets[i];
        let (ok, slack, count, pairs) = interval_disjointness_instance(g, contour)?;
        Ok(vec![Outcome {
            index: i,
            violation: !ok,
            vacuous: false,
            margin: slack,
            witness: Witness::Contour { contour: g.clone() },
            stats: [pairs as f64, count as f64],
        }])
    })?;
    let mut report = tally.report("interval-disjointness", corpus.spec.describe(), ["", "max_isolated_intervals"]);
    let total_isolated: u64 = corpus
        .sets
        .par_iter()
        .map(|g| isolated_cover_size(g, contour).map(|n| n - g.len() as u64))
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    report.extra.insert("isolated_intervals".into(), total_isolated as f64);
    Ok(report)
}

/// Slack in `|E_h(Γ) − E_h(Γ∖γ)| ≤ E_h(γ)` and whether the sites changed by
/// removing γ are exactly `I_−(γ)`, which makes the bound hold exactly.
pub fn field_difference_margin(flips: &SpinFlipSet, contour: &SpinFlipSet, profile: &FieldProfile) -> Result<(f64, bool)> {
    let rest = flips.difference(contour)?;
    let all: BTreeSet<i64> = flips.minus_sites().into_iter().collect();
    let without: BTreeSet<i64> = rest.minus_sites().into_iter().collect();
    let changed: BTreeSet<i64> = all.symmetric_difference(&without).copied().collect();
    let inside: BTreeSet<i64> = contour.minus_sites().into_iter().collect();
    let exact = changed == inside;
    let (e_all, e_rest, e_g) = (field_energy(flips, profile), field_energy(&rest, profile), field_energy(contour, profile));
    let margin = e_g - (e_all - e_rest).abs();
    let allowance = (all.len() + without.len() + inside.len() + 4) as f64 * f64::EPSILON * (e_all + e_rest + e_g);
    Ok((margin, exact && margin >= -allowance))
}

pub fn sweep_field_difference(l: u32, profile: &FieldProfile, contour: &ContourParams) -> Result<VerificationReport> {
    if !(profile.h_star >= 0.0) {
        return Err(Error::InvalidParameter(format!("field must be non-negative, got h_star = {}", profile.h_star)));
    }
    let configs = box_boundaries(l)?;
    let tally = run(configs.len(), |i| {
        let flips = &configs[i];
        let parts = partition(flips, contour)?.parts;
        externals(&parts)
            .into_iter()
            .map(|g| {
                let (margin, ok) = field_difference_margin(flips, &g, profile)?;
                Ok(Outcome {
                    index: i,
                    violation: !ok,
                    vacuous: false,
                    margin: Some(margin),
                    witness: Witness::Removal { flips: flips.clone(), contour: g },
                    stats: [margin, margin],
                })
            })
            .collect()
    })?;
    Ok(tally.report(
        "field-difference",
        format!(
            "all σ ∈ Ω⁺_L, L={l}, every external contour, h_*={}, δ={}, R={}, (M,a)=({},{})",
            profile.h_star, profile.delta, profile.truncation_radius, contour.m, contour.a
        ),
        ["", ""],
    ))
}

/// `αM^{1−α} − Σ_{r≥nM} J(r) / Σ_{r≥n} J(r)` with the ratio rounded up.
pub fn ratio_tail_margin(n: u64, m: u64, params: &ModelParams) -> (f64, f64) {
    let num = tail_sum(params.alpha, n * m);
    let den = tail_sum(params.alpha, n);
    let ratio_upper = num.upper() / den.lower() * (1.0 + 2.0 * f64::EPSILON);
    let bound = params.alpha * (m as f64).powf(1.0 - params.alpha);
    (bound - ratio_upper, num.value / den.value)
}

pub fn ratio_tail_check(params: &ModelParams, m_list: &[u64], n_max: u64) -> Result<VerificationReport> {
    if m_list.is_empty() || m_list.iter().any(|&m| m < 1) {
        return Err(Error::InvalidParameter("M values must be positive integers".into()));
    }
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let cells = m_list.len() * n_max as usize;
    let tally = run(cells, |i| {
        let m = m_list[i / n_max as usize];
        let n = (i % n_max as usize) as u64 + 1;
        let (margin, ratio) = ratio_tail_margin(n, m, params);
        Ok(vec![Outcome {
            index: i,
            violation: margin < 0.0,
            vacuous: false,
            margin: Some(margin),
            witness: Witness::Tail { n, m },
            stats: [ratio, ratio],
        }])
    })?;
    Ok(tally.report(
        "ratio-tail",
        format!("n = 1..={n_max}, M ∈ {m_list:?}, alpha={}", params.alpha),
        ["min_ratio", "max_ratio"],
    ))
}
