//! Single-site Metropolis sampling on `Λ = [−L, L]` with every site outside
//! `Λ` frozen to the boundary sign.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{perturbed_hamiltonian, tail_sum, FieldProfile, ModelParams};
use crate::error::{Error, Result};
use crate::lattice::{boundary, Configuration, Sign};

/// Largest half-width for exact enumeration (`2L+1 ≤ 22` sites).
pub const EXACT_L_LIMIT: u32 = 10;

/// Number of trace points kept at most.
const TRACE_POINTS: u64 = 1000;

const BATCHES: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSpec {
    #[serde(rename = "L")]
    pub l: u32,
    pub beta: f64,
    pub model_params: ModelParams,
    pub profile: FieldProfile,
    pub boundary_sign: Sign,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
}

impl ChainSpec {
    pub fn validate(&self) -> Result<()> {
        if self.l < 1 {
            return Err(Error::InvalidParameter("L must be at least 1".into()));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be a non-negative real, got {}", self.beta)));
        }
        if self.steps <= self.burn_in {
            return Err(Error::InvalidParameter(format!(
                "steps ({}) must exceed burn_in ({})",
                self.steps, self.burn_in
            )));
        }
        ModelParams::new(self.model_params.alpha, self.model_params.tol)?;
        FieldProfile::new(self.profile.h_star, self.profile.delta, self.profile.truncation_radius)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub step: u64,
    pub magnetization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainResult {
    pub seed: u64,
    pub mean_sigma0: f64,
    pub stderr: f64,
    pub acceptance_rate: f64,
    pub magnetization_trace: Vec<TracePoint>,
}

/// Chain state with cached local fields `Σ_{y≠x} J_{xy} σ_y + h_x`, the sum
/// running over `Λ` and the frozen exterior.
pub(crate) struct Sampler {
    l: i64,
    beta: f64,
    spins: Vec<i8>,
    local: Vec<f64>,
    /// `J(d)` for `d = 0..=2·(2L+1)`; entry 0 unused.
    coupling: Vec<f64>,
}

impl Sampler {
    pub(crate) fn new(spec: &ChainSpec) -> Result<Sampler> {
        spec.validate()?;
        let l = spec.l as i64;
        let n = (2 * l + 1) as usize;
        let params = &spec.model_params;
        let coupling: Vec<f64> = (0..=2 * n as u64).map(|d| if d == 0 { 0.0 } else { params.coupling(d) }).collect();
        let b = spec.boundary_sign.value() as f64;
        let mut local = vec![0.0; n];
        for (i, slot) in local.iter_mut().enumerate() {
            let x = i as i64 - l;
            let right = tail_sum(params.alpha, (l - x + 1) as u64);
            let left = tail_sum(params.alpha, (x + l + 1) as u64);
            if right.error_bound + left.error_bound > params.tol {
                return Err(Error::Certification(format!("boundary field at site {x} exceeds tolerance")));
            }
            // start from the homogeneous boundary state
            let inside: f64 = (0..n).filter(|&j| j != i).map(|j| coupling[i.abs_diff(j)]).sum();
            *slot = b * (right.value + left.value + inside) + spec.profile.at(x);
        }
        Ok(Sampler { l, beta: spec.beta, spins: vec![spec.boundary_sign.value(); n], local, coupling })
    }

    pub(crate) fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub(crate) fn delta_energy(&self, i: usize) -> f64 {
        2.0 * self.spins[i] as f64 * self.local[i]
    }

    /// Proposes a flip at site index `i`; returns whether it was accepted.
    pub(crate) fn try_flip(&mut self, i: usize, u: f64) -> bool {
        let de = self.delta_energy(i);
        if de > 0.0 && u >= (-self.beta * de).exp() {
            return false;
        }
        let new = -self.spins[i];
        self.spins[i] = new;
        let shift = 2.0 * new as f64;
        for (j, f) in self.local.iter_mut().enumerate() {
            if j != i {
                *f += shift * self.coupling[i.abs_diff(j)];
            }
        }
        true
    }

    fn origin(&self) -> i8 {
        self.spins[self.l as usize]
    }
}

pub fn run_chain(spec: &ChainSpec) -> Result<ChainResult> {
    let mut sampler = Sampler::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = sampler.spins().len();
    let mut total: i64 = sampler.spins().iter().map(|&s| s as i64).sum();
    let recorded = spec.steps - spec.burn_in;
    let batch_len = (recorded / BATCHES).max(1);
    let every = (spec.steps / TRACE_POINTS).max(1);
    let (mut accepted, mut sum, mut batch_sum, mut batch_count) = (0u64, 0i64, 0i64, 0u64);
    let mut batch_means = Vec::new();
    let mut trace = Vec::new();
    for step in 0..spec.steps {
        let i = rng.gen_range(0..n);
        let u: f64 = rng.gen();
        if sampler.try_flip(i, u) {
            accepted += 1;
            total += 2 * sampler.spins()[i] as i64;
        }
        if step >= spec.burn_in {
            let s0 = sampler.origin() as i64;
            sum += s0;
            batch_sum += s0;
            batch_count += 1;
            if batch_count == batch_len {
                batch_means.push(batch_sum as f64 / batch_len as f64);
                batch_sum = 0;
                batch_count = 0;
            }
        }
        if (step + 1) % every == 0 {
            trace.push(TracePoint { step: step + 1, magnetization: total as f64 / n as f64 });
        }
    }
    let mean = sum as f64 / recorded as f64;
    let k = batch_means.len() as f64;
    let stderr = if batch_means.len() > 1 {
        let bm = batch_means.iter().sum::<f64>() / k;
        (batch_means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    } else {
        f64::NAN
    };
    Ok(ChainResult {
        seed: spec.seed,
        mean_sigma0: mean,
        stderr,
        acceptance_rate: accepted as f64 / spec.steps as f64,
        magnetization_trace: trace,
    })
}

/// Independent chains, one per seed, returned in seed order.
pub fn run_chains(spec: &ChainSpec, seeds: &[u64]) -> Result<Vec<ChainResult>> {
    seeds.par_iter().map(|&seed| run_chain(&ChainSpec { seed, ..*spec })).collect()
}

/// `⟨σ₀⟩` by summing over all `2^{2L+1}` configurations with certified
/// Hamiltonians.
pub fn exact_expectation(
    l: u32,
    params: &ModelParams,
    profile: &FieldProfile,
    beta: f64,
    boundary_sign: Sign,
) -> Result<f64> {
    if l < 1 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    if l > EXACT_L_LIMIT {
        return Err(Error::Resource(format!("exact enumeration needs 2L+1 ≤ 22 sites, got L = {l}")));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be a non-negative real, got {beta}")));
    }
    let sites = 2 * l as u64 + 1;
    let li = l as i64;
    let mut states = Vec::with_capacity(1 << sites);
    for mask in 0u64..1 << sites {
        let minus_sites = (0..sites).filter(|i| mask >> i & 1 == 1).map(|i| i as i64 - li).collect();
        let config = Configuration { minus_sites, boundary_sign };
        let e = perturbed_hamiltonian(&boundary(&config), params, profile, boundary_sign)?;
        states.push((e.value, config.spin(0)));
    }
    let e_min = states.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let (mut z, mut m) = (0.0, 0.0);
    for (e, s0) in states {
        let w = (-beta * (e - e_min)).exp();
        z += w;
        m += w * s0 as f64;
    }
    Ok(m / z)
}
