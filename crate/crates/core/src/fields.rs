//! Stability of the ordered phase under a decaying field `h_* |x|^{-δ}`:
//! bubble energies, top-n field mass and the min-max criterion.

use serde::Serialize;

use crate::energy::{tail_sum, CertifiedValue, FieldProfile, ModelParams};
use crate::error::{Error, Result};

pub const DEFAULT_SCAN_LIMIT: u64 = 10_000;

/// Exponents closer than this are treated as the critical case `δ = α − 1`.
const CRITICAL_SLACK: f64 = 1e-12;

/// `H̲_J(n) = H_J({1/2, n+1/2}) = 4 Σ_{d=1}^{n} Σ_{r≥d} r^{-α}`.
pub fn bubble_energy(n: u64, params: &ModelParams) -> Result<CertifiedValue> {
    if n == 0 {
        return Err(Error::InvalidParameter("bubble size must be at least 1".into()));
    }
    Ok(*bubble_energies(n, params)?.last().expect("n ≥ 1"))
}

/// `H̲_J(1..=n_max)`, built incrementally.
pub fn bubble_energies(n_max: u64, params: &ModelParams) -> Result<Vec<CertifiedValue>> {
    if params.tol == 0.0 {
        return Err(Error::ZeroTolerance);
    }
    let out = bubble_brackets(n_max, params.alpha);
    if let Some(i) = out.iter().position(|b| b.error_bound > params.tol) {
        return Err(Error::Certification(format!("bubble energy at n={} exceeds tolerance", i + 1)));
    }
    Ok(out)
}

/// Same sums with whatever error bound the arithmetic allows; used where only
/// a certified lower bound matters.
fn bubble_brackets(n_max: u64, alpha: f64) -> Vec<CertifiedValue> {
    let mut out = Vec::with_capacity(n_max as usize);
    let (mut sum, mut err) = (0.0, 0.0);
    for d in 1..=n_max {
        let t = tail_sum(alpha, d);
        sum += t.value;
        err += t.error_bound;
        let value = 4.0 * sum;
        let error_bound = 4.0 * err + (d as f64 + 4.0) * f64::EPSILON * value;
        out.push(CertifiedValue { value, error_bound });
    }
    out
}

/// The closed-form lower bound on `H̲_J(n)`.
pub fn bubble_lower_closed_form(n: u64, alpha: f64) -> f64 {
    let nf = n as f64;
    if alpha == 2.0 {
        4.0 + 4.0 * (1.0 + nf).ln() - 4.0 * 2f64.ln()
    } else {
        let p = 2.0 - alpha;
        4.0 + 4.0 / ((alpha - 1.0) * p) * ((nf + 1.0).powf(p) - 2f64.powf(p))
    }
}

/// Site magnitudes in decreasing order of `ĥ`: `0, ±1, ±2, …`, or
/// `±(R+1), ±(R+2), …` when truncated.
fn ranked_sites(profile: &FieldProfile) -> impl Iterator<Item = i64> {
    let r = profile.truncation_radius as i64;
    let head = if r == 0 { Some(0) } else { None };
    head.into_iter().chain((r.max(0) + 1..).flat_map(|k| [k, -k]))
}

/// `Ē_ĥ(n)`: the `n` largest values of `2ĥ` summed.
pub fn max_field_energy(n: u64, profile: &FieldProfile) -> f64 {
    ranked_sites(profile).take(n as usize).map(|x| 2.0 * profile.at(x)).sum()
}

/// `Ē_ĥ(1..=n_max)`, built incrementally.
pub fn max_field_energies(n_max: u64, profile: &FieldProfile) -> Vec<f64> {
    let mut acc = 0.0;
    ranked_sites(profile)
        .take(n_max as usize)
        .map(|x| {
            acc += 2.0 * profile.at(x);
            acc
        })
        .collect()
}

/// The upper bounds on `Ē` in the form they are usually quoted:
/// `h_*(3 + 2n^{1-δ}/(1-δ))`, `h_*(3 + 2 log n)` and, truncated,
/// `2h_*((R+1)^{-δ} + [(R+n)^{1-δ} − (R+1)^{1-δ}]/(1-δ))`. These undercount
/// the two sites per radius and fail for large `n`; see
/// [`field_mass_upper`] for a valid replacement.
pub fn quoted_field_upper(n: u64, profile: &FieldProfile) -> Option<f64> {
    let (h, d, nf) = (profile.h_star, profile.delta, n as f64);
    let r = profile.truncation_radius as f64;
    if profile.truncation_radius == 0 {
        if d < 1.0 {
            Some(h * (3.0 + 2.0 * nf.powf(1.0 - d) / (1.0 - d)))
        } else if d == 1.0 {
            Some(h * (3.0 + 2.0 * nf.ln()))
        } else {
            None
        }
    } else if d < 1.0 {
        Some(2.0 * h * ((r + 1.0).powf(-d) + ((r + nf).powf(1.0 - d) - (r + 1.0).powf(1.0 - d)) / (1.0 - d)))
    } else {
        None
    }
}

/// Integral bound for `Σ_{k=1}^{K} k^{-δ}`.
fn power_sum_upper(k: f64, delta: f64) -> f64 {
    if k < 1.0 {
        0.0
    } else if delta < 1.0 {
        k.powf(1.0 - delta) / (1.0 - delta)
    } else if delta == 1.0 {
        1.0 + k.ln()
    } else {
        1.0 + (1.0 - k.powf(1.0 - delta)) / (delta - 1.0)
    }
}

/// Integral bound for `Σ_{k=R+1}^{R+K} k^{-δ}`, `R ≥ 1`.
fn shifted_power_sum_upper(r: f64, k: f64, delta: f64) -> f64 {
    if delta < 1.0 {
        ((r + k).powf(1.0 - delta) - r.powf(1.0 - delta)) / (1.0 - delta)
    } else if delta == 1.0 {
        ((r + k) / r).ln()
    } else {
        (r.powf(1.0 - delta) - (r + k).powf(1.0 - delta)) / (delta - 1.0)
    }
}

/// A valid closed-form upper bound on `Ē_ĥ(n)` counting both sites at each radius.
pub fn field_mass_upper(n: u64, profile: &FieldProfile) -> f64 {
    let (h, d) = (profile.h_star, profile.delta);
    if profile.truncation_radius == 0 {
        let k = ((n as f64) - 1.0).max(0.0) / 2.0;
        2.0 * h * (1.0 + 2.0 * power_sum_upper(k.ceil(), d))
    } else {
        let k = (n as f64 / 2.0).ceil();
        4.0 * h * shifted_power_sum_upper(profile.truncation_radius as f64, k, d)
    }
}

/// `2K_α = (8−4α)/(2^{3−α}+6−3α)` for `α < 2`, and `4/(3 + 2 log 2)` at `α = 2`.
pub fn critical_amplitude(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (1, 2], got {alpha}")));
    }
    if alpha == 2.0 {
        Ok(4.0 / (3.0 + 2.0 * 2f64.ln()))
    } else {
        Ok((8.0 - 4.0 * alpha) / ((3.0 - alpha).exp2() + 6.0 - 3.0 * alpha))
    }
}

/// Threshold beyond which `K x^ν ≥ (x+y)^μ − (y+1)^μ` for every `x ≥ 1`.
pub fn ybar(k: f64, mu: f64, nu: f64) -> Result<f64> {
    if !(k > 0.0 && 0.0 < mu && mu < nu && nu < 1.0) {
        return Err(Error::InvalidParameter(format!("ybar needs K > 0 and 0 < mu < nu < 1, got K={k}, mu={mu}, nu={nu}")));
    }
    let gap = nu - mu;
    let ratio = (1.0 - nu) / (1.0 - mu);
    Ok((mu / (k * nu)).powf(1.0 / gap) * (ratio.powf((1.0 - nu) / gap) - ratio.powf((1.0 - mu) / gap)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityDecision {
    Stable,
    NeedsSmallH,
    OutsideTheorem,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityConstants {
    #[serde(rename = "K_alpha")]
    pub k_alpha: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    pub ybar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityCertificate {
    pub decision: StabilityDecision,
    pub eta: f64,
    pub truncation_radius: u64,
    pub scan_limit: u64,
    pub constants: StabilityConstants,
    /// Exponent used for the radius formulas (differs from δ only when δ = 1 < α⁻¹·2).
    pub radius_delta: f64,
    /// Radius suggested by `2·max{R₁,R₂}` before any enlargement.
    pub formula_radius: u64,
    pub scan_sup: f64,
    pub tail_bound: f64,
}

/// Upper bound on `sup_{n ≥ from} field_mass_upper(n) / bubble_lower_closed_form(n)`.
///
/// Both are increasing in `n`, so on a geometric grid `n_i` each cell is
/// bounded by `U(n_{i+1}) / L(n_i)`; past the grid a form monotone in `n` takes over.
pub fn tail_ratio_bound(alpha: f64, profile: &FieldProfile, from: u64) -> f64 {
    let from = from.max(3);
    let far = from.max(profile.truncation_radius.saturating_mul(1_000_000)).max(1_000_000);
    let mut sup: f64 = 0.0;
    let mut n = from;
    while n < far {
        let next = (n + n / 64 + 1).min(far);
        sup = sup.max(field_mass_upper(next, profile) / bubble_lower_closed_form(n, alpha));
        n = next;
    }
    sup.max(asymptotic_ratio_bound(alpha, profile, far))
}

fn asymptotic_ratio_bound(alpha: f64, profile: &FieldProfile, from: u64) -> f64 {
    let n = from.max(3) as f64;
    let (h, d) = (profile.h_star, profile.delta);
    let r = profile.truncation_radius as f64;
    // numerator ≤ a + b·n^q  (or a + b·ln n when `log` is set)
    let (a, b, q, log) = if profile.truncation_radius == 0 {
        if d < 1.0 {
            (2.0 * h, 4.0 * h * (d - 1.0).exp2() / (1.0 - d), 1.0 - d, false)
        } else if d == 1.0 {
            (2.0 * h * (3.0 - 2.0 * 2f64.ln()), 4.0 * h, 0.0, true)
        } else {
            (2.0 * h * (3.0 + 2.0 / (d - 1.0)), 0.0, 0.0, false)
        }
    } else if d < 1.0 {
        (0.0, 4.0 * h * (1.0 + r / n).powf(1.0 - d) / (1.0 - d), 1.0 - d, false)
    } else if d == 1.0 {
        (4.0 * h * ((1.0 + r / n).ln() - r.ln()), 4.0 * h, 0.0, true)
    } else {
        (4.0 * h * r.powf(1.0 - d) / (d - 1.0), 0.0, 0.0, false)
    };
    if alpha == 2.0 {
        // (a + b ln n)/(c0 + 4 ln n) is monotone in ln n
        let c0 = 4.0 - 4.0 * 2f64.ln();
        let at_start = if log { (a + b * n.ln()) / (c0 + 4.0 * n.ln()) } else { a / (c0 + 4.0 * n.ln()) };
        let limit = if log { b / 4.0 } else { 0.0 };
        at_start.max(limit)
    } else {
        let p = 2.0 - alpha;
        let dp = 4.0 / ((alpha - 1.0) * p) * (1.0 - (2.0 / n).powf(p));
        let (b, q) = if log {
            // ln n ≤ n^s/(e·s) with s = p/2
            let s = p / 2.0;
            (b / (std::f64::consts::E * s), s)
        } else {
            (b, q)
        };
        a.max(0.0) / (dp * n.powf(p)) + b * n.powf(q - p) / dp
    }
}

fn scan_ratio(profile: &FieldProfile, bubbles: &[CertifiedValue]) -> f64 {
    let fields = max_field_energies(bubbles.len() as u64, profile);
    fields.iter().zip(bubbles).map(|(e, h)| e / h.lower()).fold(0.0, f64::max)
}

fn radii(alpha: f64, delta: f64, h_star: f64) -> Result<(f64, f64, f64, f64)> {
    let k_alpha = critical_amplitude(alpha)? / 2.0;
    if h_star == 0.0 {
        return Ok((k_alpha, 0.0, 0.0, 0.0));
    }
    let r1 = (2.0 * h_star / (3.0 * k_alpha)).powf(1.0 / delta);
    let k = k_alpha * (1.0 - delta) / (h_star * (2.0 - alpha));
    let y = ybar(k, 1.0 - delta, 2.0 - alpha)?;
    Ok((k_alpha, r1, y, y))
}

pub fn stability_certificate(params: &ModelParams, profile: &FieldProfile, scan_limit: u64) -> Result<StabilityCertificate> {
    let (alpha, delta, h_star) = (params.alpha, profile.delta, profile.h_star);
    ModelParams::new(alpha, params.tol)?;
    FieldProfile::new(h_star, delta, 0)?;
    if scan_limit < 16 {
        return Err(Error::InvalidParameter(format!("scan_limit must be at least 16, got {scan_limit}")));
    }
    let base = FieldProfile { truncation_radius: 0, ..*profile };
    let crit = critical_amplitude(alpha)?;
    let k_alpha = crit / 2.0;
    let blank = StabilityConstants { k_alpha, r1: 0.0, r2: 0.0, ybar: 0.0 };
    let critical = (delta - (alpha - 1.0)).abs() <= CRITICAL_SLACK;

    if delta < alpha - 1.0 && !critical {
        return Ok(StabilityCertificate {
            decision: StabilityDecision::OutsideTheorem,
            eta: f64::NAN,
            truncation_radius: 0,
            scan_limit,
            constants: blank,
            radius_delta: delta,
            formula_radius: 0,
            scan_sup: f64::NAN,
            tail_bound: f64::NAN,
        });
    }

    if params.tol == 0.0 {
        return Err(Error::ZeroTolerance);
    }
    let bubbles = bubble_brackets(scan_limit, alpha);

    if critical {
        let eta_rule = h_star / crit;
        let scan_sup = scan_ratio(&base, &bubbles);
        let tail_bound = tail_ratio_bound(alpha, &base, scan_limit);
        let eta = eta_rule.max(scan_sup).max(tail_bound);
        let decision =
            if h_star < crit && eta < 1.0 { StabilityDecision::Stable } else { StabilityDecision::NeedsSmallH };
        return Ok(StabilityCertificate {
            decision,
            eta,
            truncation_radius: 0,
            scan_limit,
            constants: blank,
            radius_delta: delta,
            formula_radius: 0,
            scan_sup,
            tail_bound,
        });
    }

    // sub-critical decay: choose a truncation radius, then certify by scan plus tail
    let (radius_delta, constants, formula_radius) = if delta < 1.0 || (delta == 1.0 && alpha < 2.0) {
        let rd = if delta < 1.0 { delta } else { alpha / 2.0 };
        let (k_alpha, r1, r2, y) = radii(alpha, rd, h_star)?;
        let r = (2.0 * r1.max(r2)).ceil();
        (rd, StabilityConstants { k_alpha, r1, r2, ybar: y }, r as u64)
    } else {
        (delta, blank, 0)
    };

    let mut radius = formula_radius;
    let mut attempts = 0;
    loop {
        let prof = base.truncated(radius);
        let scan_sup = scan_ratio(&prof, &bubbles);
        let tail_bound = tail_ratio_bound(alpha, &prof, scan_limit);
        let eta = scan_sup.max(tail_bound);
        if eta < 1.0 {
            return Ok(StabilityCertificate {
                decision: StabilityDecision::Stable,
                eta,
                truncation_radius: radius,
                scan_limit,
                constants,
                radius_delta,
                formula_radius,
                scan_sup,
                tail_bound,
            });
        }
        attempts += 1;
        if attempts > 40 {
            return Err(Error::Certification("no truncation radius up to 2^40 certifies the field".into()));
        }
        radius = (radius * 2).max(1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SpinFlipSet;
    use std::f64::consts::PI;

    fn params(alpha: f64) -> ModelParams {
        ModelParams::with_alpha(alpha).unwrap()
    }

    fn field(h: f64, d: f64, r: u64) -> FieldProfile {
        FieldProfile::new(h, d, r).unwrap()
    }

    #[test]
    fn bubble_examples() {
        let b = bubble_energy(1, &params(2.0)).unwrap();
        assert!((b.value - 2.0 * PI * PI / 3.0).abs() <= b.error_bound + 1e-15);
        assert!((b.value - 6.57974).abs() < 1e-5);
        for &alpha in &[1.2, 1.5, 1.9, 2.0] {
            let p = params(alpha);
            assert!(bubble_energies(100, &p).unwrap().iter().all(|b| b.error_bound <= p.tol));
            let all = bubble_brackets(2000, alpha);
            for (i, h) in all.iter().enumerate() {
                let n = i as u64 + 1;
                assert!(h.lower() >= bubble_lower_closed_form(n, alpha), "alpha={alpha} n={n}");
            }
            for n in [1u64, 2, 7, 40] {
                let direct = crate::energy::hamiltonian(&SpinFlipSet::bubble(n), &p).unwrap();
                let h = all[n as usize - 1];
                assert!((direct.value - h.value).abs() <= direct.error_bound + h.error_bound, "n={n}");
            }
        }
        assert!(bubble_energy(0, &params(2.0)).is_err());
    }

    #[test]
    fn max_field_examples() {
        assert_eq!(max_field_energy(1, &field(1.0, 0.5, 0)), 2.0);
        for d in [0.3, 1.0, 2.5] {
            assert_eq!(max_field_energy(3, &field(1.0, d, 0)), 6.0);
        }
        assert!((max_field_energy(1, &field(1.0, 1.0, 2)) - 2.0 / 3.0).abs() < 1e-15);
        let inc = max_field_energies(50, &field(0.7, 0.8, 3));
        for (i, v) in inc.iter().enumerate() {
            assert!((v - max_field_energy(i as u64 + 1, &field(0.7, 0.8, 3))).abs() < 1e-12);
        }
    }

    /// Sort every site in a wide window by field value and take the top n.
    fn top_n_brute(n: usize, profile: &FieldProfile) -> f64 {
        let mut v: Vec<f64> = (-5000i64..=5000).map(|x| 2.0 * profile.at(x)).collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v[..n].iter().sum()
    }

    #[test]
    fn max_field_matches_sorting() {
        for prof in [field(1.0, 0.5, 0), field(0.3, 1.0, 4), field(2.0, 1.7, 1)] {
            for n in [1usize, 2, 5, 31, 200] {
                assert!((max_field_energy(n as u64, &prof) - top_n_brute(n, &prof)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn quoted_field_bounds_hold_small_fail_large() {
        // small n: the quoted bounds hold
        for d in [0.3, 0.5, 0.9] {
            let prof = field(1.0, d, 0);
            for n in 1..=10u64 {
                assert!(max_field_energy(n, &prof) <= quoted_field_upper(n, &prof).unwrap(), "d={d} n={n}");
            }
        }
        // large n: they undercount by a factor tending to 2^δ
        let prof = field(1.0, 0.5, 0);
        assert!(max_field_energy(10_000, &prof) > quoted_field_upper(10_000, &prof).unwrap());
        let prof = field(1.0, 1.0, 0);
        assert!(max_field_energy(10, &prof) > quoted_field_upper(10, &prof).unwrap());
        let prof = field(1.0, 0.5, 2);
        assert!(max_field_energy(10, &prof) > quoted_field_upper(10, &prof).unwrap());
    }

    #[test]
    fn corrected_field_bound_holds() {
        for prof in [field(1.0, 0.3, 0), field(1.0, 0.5, 0), field(1.0, 1.0, 0), field(1.0, 1.5, 0),
                     field(1.0, 0.5, 2), field(1.0, 0.5, 17), field(1.0, 1.0, 3), field(1.0, 2.0, 5)] {
            let all = max_field_energies(20_000, &prof);
            for (i, e) in all.iter().enumerate() {
                let n = i as u64 + 1;
                assert!(*e <= field_mass_upper(n, &prof) * (1.0 + 1e-12), "{prof:?} n={n}");
            }
        }
    }

    #[test]
    fn tail_bound_dominates_grid() {
        for (alpha, prof) in [(1.5, field(0.3, 0.5, 0)), (2.0, field(0.8, 1.0, 0)), (1.5, field(1.0, 0.7, 5)),
                              (1.5, field(0.5, 1.0, 3)), (2.0, field(0.5, 1.5, 0)), (1.2, field(2.0, 1.3, 2))] {
            let from = 100u64;
            let t = tail_ratio_bound(alpha, &prof, from);
            let mut n = from;
            while n < 100_000_000 {
                let r = field_mass_upper(n, &prof) / bubble_lower_closed_form(n, alpha);
                assert!(r <= t * (1.0 + 1e-12), "alpha={alpha} {prof:?} n={n} r={r} t={t}");
                n = n * 5 / 4 + 1;
            }
        }
    }

    #[test]
    fn critical_examples() {
        let c = critical_amplitude(1.5).unwrap();
        assert!((c - 2.0 / (2f64.powf(1.5) + 1.5)).abs() < 1e-15);
        assert!((c - 0.4620616).abs() < 1e-7);
        let c2 = critical_amplitude(2.0).unwrap();
        assert!((c2 - 0.9119315).abs() < 1e-7);
        assert!(critical_amplitude(1.0).is_err());
        assert!(critical_amplitude(1.999999).unwrap() < 1e-5);
    }

    #[test]
    fn ybar_examples() {
        let (k, mu, nu) = (0.4, 0.3, 0.6);
        let f = |x: f64, y: f64| k * x.powf(nu) - ((x + y).powf(mu) - (y + 1.0).powf(mu));
        let y = ybar(k, mu, nu).unwrap();
        assert!(y > 0.0);
        for yy in [0.0, 1.0, 100.0] {
            assert!((f(1.0, yy) - k).abs() < 1e-12);
        }
        let y1 = 1.01 * y;
        let mut x = 1.0;
        while x <= 1e4 {
            assert!(f(x, y1) >= 0.0, "x={x}");
            x *= 1.05;
        }
        assert!(ybar(0.8, mu, nu).unwrap() < y);
        assert!(ybar(k, 0.6, 0.3).is_err());
        assert!(ybar(-1.0, mu, nu).is_err());
    }

    #[test]
    fn ybar_matches_closed_radius() {
        let (alpha, delta, h) = (1.5f64, 0.7f64, 0.9f64);
        let k_alpha = critical_amplitude(alpha).unwrap() / 2.0;
        let via = ybar(k_alpha * (1.0 - delta) / (h * (2.0 - alpha)), 1.0 - delta, 2.0 - alpha).unwrap();
        let g = delta - (alpha - 1.0);
        let p = (alpha - 1.0) / delta;
        let closed = (p.powf((alpha - 1.0) / g) - p.powf(delta / g)) * (h / k_alpha).powf(1.0 / g);
        assert!((via - closed).abs() <= 1e-12 * closed.abs().max(1.0));
    }

    #[test]
    fn stability_examples() {
        let s = stability_certificate(&params(1.5), &field(0.3, 0.5, 0), DEFAULT_SCAN_LIMIT).unwrap();
        assert_eq!(s.decision, StabilityDecision::Stable);
        assert!((s.eta - 0.6492).abs() < 1e-4, "{s:?}");
        assert_eq!(s.truncation_radius, 0);

        let s = stability_certificate(&params(2.0), &field(0.8, 1.0, 0), DEFAULT_SCAN_LIMIT).unwrap();
        assert_eq!(s.decision, StabilityDecision::Stable, "{s:?}");
        assert!(s.eta < 1.0);

        for h in [0.0, 0.1, 5.0] {
            let s = stability_certificate(&params(1.5), &field(h, 0.3, 0), DEFAULT_SCAN_LIMIT).unwrap();
            assert_eq!(s.decision, StabilityDecision::OutsideTheorem);
        }
        let s = stability_certificate(&params(1.5), &field(0.5, 0.5, 0), DEFAULT_SCAN_LIMIT).unwrap();
        assert_eq!(s.decision, StabilityDecision::NeedsSmallH);
    }

    #[test]
    fn subcritical_branches_certify() {
        for (alpha, h, d) in [(1.5, 0.3, 0.7), (1.5, 3.0, 0.7), (1.2, 1.0, 0.5), (1.5, 1.0, 1.0), (2.0, 4.0, 1.5), (1.5, 10.0, 3.0)] {
            let s = stability_certificate(&params(alpha), &field(h, d, 0), 2000).unwrap();
            assert_eq!(s.decision, StabilityDecision::Stable, "{s:?}");
            assert!(s.eta < 1.0);
            let prof = field(h, d, s.truncation_radius);
            let bubbles = bubble_brackets(2000, alpha);
            for (n, b) in bubbles.iter().enumerate() {
                assert!(max_field_energy(n as u64 + 1, &prof) <= s.eta * b.lower());
            }
        }
        let s = stability_certificate(&params(1.5), &field(1.0, 1.0, 0), 2000).unwrap();
        assert_eq!(s.radius_delta, 0.75);
    }
}
