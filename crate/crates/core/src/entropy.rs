//! Parameterized entropy functionals of a density matrix.
//!
//! Rényi and von Neumann entropies are in bits. `F_q`, Tsallis and the
//! unified-(r, s) entropy are algebraic in `Tr ρ^r` and carry no logarithm.
//! Where the unified entropy is evaluated at one of its limits
//! (`s → 0` or `r → 1`) it returns the limit value itself, which is a
//! natural-log quantity: `ln Tr ρ^r / (1 - r)` and `-Tr ρ ln ρ`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{invalid, Result};
use crate::tensor::trace_power;

/// Eigenvalues at or below this are dropped from logarithms and
/// non-integer powers (`0 · log 0 := 0`).
pub const LOG_FLOOR: f64 = 1e-12;
/// Eigenvalues above this count toward the rank.
pub const RANK_TOL: f64 = 1e-9;
/// Parameters within this distance of a singular point use the limit form.
pub const LIMIT_TOL: f64 = 1e-9;

const MAX_MATMUL_POWER: u32 = 8;

fn check_param(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        invalid(format!("{name} must be finite, got {x}"))
    }
}

/// `Tr ρ^p` for `p > 0`. Integer powers up to 8 go through matrix
/// multiplication; everything else through the clipped spectrum.
pub fn power_sum(rho: &DensityMatrix, p: f64) -> Result<f64> {
    check_param("power", p)?;
    if p <= 0.0 {
        return invalid(format!("power_sum needs p > 0, got {p}"));
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    if p.fract() == 0.0 && p >= 2.0 && p <= MAX_MATMUL_POWER as f64 {
        return trace_power(rho.matrix(), p as u32);
    }
    Ok(rho
        .spectrum()
        .iter()
        .filter(|&&l| l > LOG_FLOOR)
        .map(|&l| (p * l.ln()).exp())
        .sum())
}

/// `F_q(ρ) = 1 - Tr ρ^q` for real `q ≥ 2`.
pub fn f_q(rho: &DensityMatrix, q: f64) -> Result<f64> {
    check_param("q", q)?;
    if q < 2.0 {
        return invalid(format!("F_q needs q >= 2, got {q}"));
    }
    Ok(1.0 - power_sum(rho, q)?)
}

/// Von Neumann entropy `-Σ λ log₂ λ` in bits.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    von_neumann_nats(rho) / LN_2
}

/// Von Neumann entropy `-Σ λ ln λ` in nats.
pub fn von_neumann_nats(rho: &DensityMatrix) -> f64 {
    -rho.spectrum().iter().filter(|&&l| l > LOG_FLOOR).map(|&l| l * l.ln()).sum::<f64>()
}

/// `log₂ rank(ρ)`.
pub fn renyi0(rho: &DensityMatrix) -> f64 {
    let rank = rho.spectrum().iter().filter(|&&l| l > RANK_TOL).count();
    (rank as f64).log2()
}

/// Rényi entropy `log₂(Tr ρ^r) / (1 - r)` in bits, `r ≥ 0`.
///
/// `r = 0` is the log-rank and `r` within `LIMIT_TOL` of 1 is the von
/// Neumann entropy, both in bits.
pub fn renyi(rho: &DensityMatrix, r: f64) -> Result<f64> {
    check_param("r", r)?;
    if r < 0.0 {
        return invalid(format!("Renyi entropy needs r >= 0, got {r}"));
    }
    if r == 0.0 {
        return Ok(renyi0(rho));
    }
    if (r - 1.0).abs() < LIMIT_TOL {
        return Ok(von_neumann(rho));
    }
    Ok(power_sum(rho, r)?.log2() / (1.0 - r))
}

/// Tsallis entropy `(Tr ρ^r - 1) / (1 - r)`, `r > 0`; the `r → 1` limit is
/// the von Neumann entropy in nats.
pub fn tsallis(rho: &DensityMatrix, r: f64) -> Result<f64> {
    check_param("r", r)?;
    if r <= 0.0 {
        return invalid(format!("Tsallis entropy needs r > 0, got {r}"));
    }
    if (r - 1.0).abs() < LIMIT_TOL {
        return Ok(von_neumann_nats(rho));
    }
    Ok((power_sum(rho, r)? - 1.0) / (1.0 - r))
}

/// Unified-(r, s) entropy `[(Tr ρ^r)^s - 1] / ((1 - r) s)` for `r, s ≥ 0`.
///
/// Near `r = 1` this returns `-Tr ρ ln ρ` (independent of `s`); near
/// `s = 0` it returns `ln Tr ρ^r / (1 - r)`, i.e. the Rényi entropy in nats.
pub fn unified_entropy(rho: &DensityMatrix, r: f64, s: f64) -> Result<f64> {
    check_param("r", r)?;
    check_param("s", s)?;
    if r < 0.0 || s < 0.0 {
        return invalid(format!("unified entropy needs r, s >= 0, got r={r}, s={s}"));
    }
    if (r - 1.0).abs() < LIMIT_TOL {
        return Ok(von_neumann_nats(rho));
    }
    if s < LIMIT_TOL {
        return Ok(renyi(rho, r)? * LN_2);
    }
    let p = if r == 0.0 {
        rho.spectrum().iter().filter(|&&l| l > RANK_TOL).count() as f64
    } else {
        power_sum(rho, r)?
    };
    Ok((p.powf(s) - 1.0) / ((1.0 - r) * s))
}

/// Selects one entropy functional together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntropyParams {
    Fq { q: f64 },
    Unified { r: f64, s: f64 },
    Renyi { r: f64 },
    Tsallis { r: f64 },
    VonNeumann,
    Renyi0,
}

impl EntropyParams {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        match *self {
            EntropyParams::Fq { q } => f_q(rho, q),
            EntropyParams::Unified { r, s } => unified_entropy(rho, r, s),
            EntropyParams::Renyi { r } => renyi(rho, r),
            EntropyParams::Tsallis { r } => tsallis(rho, r),
            EntropyParams::VonNeumann => Ok(von_neumann(rho)),
            EntropyParams::Renyi0 => Ok(renyi0(rho)),
        }
    }
}
