//! Closed-form Peierls constants and the temperature threshold.

use serde::Serialize;

use crate::covers::ContourParams;
use crate::energy::{epsilon_j, tail_sum, CertifiedValue, ModelParams};
use crate::error::{Error, Result};

/// Block count used when certifying `ε_J`.
const EPSILON_PROBE: u32 = 16;

/// `ζ(s) = Σ_{r≥1} r^{-s}`, `s > 1`.
pub fn zeta(s: f64) -> Result<CertifiedValue> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("zeta needs s > 1, got {s}")));
    }
    Ok(tail_sum(s, 1))
}

/// `C(a) = 2^{a+3} / (2^{a-1} − 1)`.
pub fn energy_constant(a: f64) -> Result<f64> {
    if !(a > 1.0 && a < 2.0) {
        return Err(Error::InvalidParameter(format!("a must lie in (1, 2), got {a}")));
    }
    Ok((a + 3.0).exp2() / ((a - 1.0).exp2() - 1.0))
}

/// `1 − C(a)/M − 4αM^{1−α}`, the factor in the energy estimate for removing an
/// external contour.
pub fn energy_bracket(alpha: f64, contour: &ContourParams) -> Result<f64> {
    let m = contour.m;
    Ok(1.0 - energy_constant(contour.a)? / m - 4.0 * alpha * m.powf(1.0 - alpha))
}

pub fn cover_validity(contour: &ContourParams) -> bool {
    3.0 / (2.0 - contour.a) <= contour.log2_8m()
}

/// `c(M,a) = 6 (2a/(a−1))^p ζ(p) (log₂ 8M)^p` with `p = log_a 2`.
pub fn c_of(contour: &ContourParams) -> Result<f64> {
    if !(contour.a > 1.0 && contour.a < 2.0) {
        return Err(Error::InvalidParameter(format!("a must lie in (1, 2), got {}", contour.a)));
    }
    if !cover_validity(contour) {
        return Err(Error::InvalidParameter(format!(
            "M too small for a: need 3/(2-a) = {} ≤ log2(8M) = {}",
            3.0 / (2.0 - contour.a),
            contour.log2_8m()
        )));
    }
    let a = contour.a;
    let p = 2f64.ln() / a.ln();
    let z = zeta(p)?;
    Ok(6.0 * (2.0 * a / (a - 1.0)).powf(p) * z.upper() * contour.log2_8m().powf(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeierlsConstants {
    #[serde(rename = "C2")]
    pub c2: f64,
    pub epsilon_lower: f64,
    #[serde(rename = "c_Ma")]
    pub c_ma: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "C3")]
    pub c3: f64,
    pub eta: f64,
    /// `1 − C(a)/M − 4αM^{1−α}` at these parameters.
    pub energy_bracket: f64,
    /// The `(1−η)/2` factor presumes the bracket is at least one half.
    pub bracket_at_least_half: bool,
}

pub fn peierls_constants(params: &ModelParams, contour: &ContourParams, eta: f64) -> Result<PeierlsConstants> {
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!("eta must lie in [0, 1), got {eta}")));
    }
    let c_ma = c_of(contour)?;
    let epsilon_lower = epsilon_j(params, EPSILON_PROBE)?;
    if !(epsilon_lower > 0.0 && c_ma > 0.0) {
        return Err(Error::InvalidParameter("Peierls constants must be positive".into()));
    }
    let k = c_ma / epsilon_lower;
    let bracket = energy_bracket(params.alpha, contour)?;
    Ok(PeierlsConstants {
        c2: 2.5 * 2f64.ln(),
        epsilon_lower,
        c_ma,
        k,
        c3: (1.0 - eta) / (2.0 * k),
        eta,
        energy_bracket: bracket,
        bracket_at_least_half: bracket >= 0.5,
    })
}

/// `Σ_{R≥1} e^{xR} = e^x / (1 − e^x)` for `x < 0`.
pub fn peierls_series(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::InvalidParameter(format!("series diverges at x = {x}")));
    }
    Ok(x.exp() / -x.exp_m1())
}

/// Smallest `β` with `peierls_series(C₂ − βC₃) ≤ target`.
pub fn beta_threshold(constants: &PeierlsConstants, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!("target must lie in (0, 1), got {target}")));
    }
    if !(constants.c3 > 0.0 && constants.c2 > 0.0) {
        return Err(Error::InvalidParameter("Peierls constants must be positive".into()));
    }
    Ok((constants.c2 - (target / (1.0 + target)).ln()) / constants.c3)
}
