//! Calibration data with known ground truth.
//!
//! Every generator is a pure function of `(params, n, seed)`. Randomness comes
//! from ChaCha8 seeded through `seed_from_u64`, which is specified bit-for-bit
//! and therefore reproduces on every platform.

use std::f64::consts::PI;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::durations::{check_grid, DurationSeries, SurvivalCurve};
use crate::error::{param, Result};
use crate::special::{mittag_leffler_neg, DEFAULT_Z_SWITCH};

/// Ground-truth finite exponential mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    weights: Vec<f64>,
    rates: Vec<f64>,
}

impl MixtureSpec {
    pub fn new(weights: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != rates.len() {
            return Err(param("mixture", "needs matching, non-empty weight and rate lists"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(param("mixture", "weights must be non-negative"));
        }
        if rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(param("mixture", "rates must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(param("mixture", format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights, rates })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![rate])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn mean(&self) -> f64 {
        self.weights.iter().zip(&self.rates).map(|(w, r)| w / r).sum()
    }

    /// `Σ a_i exp(−λ_i τ)` on the grid.
    pub fn survival(&self, taus: &[f64]) -> Result<SurvivalCurve> {
        check_grid(taus)?;
        let psi = taus
            .iter()
            .map(|&t| self.weights.iter().zip(&self.rates).map(|(a, l)| a * (-l * t).exp()).sum())
            .collect();
        SurvivalCurve::new(taus.to_vec(), psi, 0)
    }
}

/// Mittag-Leffler waiting-time law with survival `E_β(−(τ/γ)^β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    beta: f64,
    gamma: f64,
}

impl MlParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(param("beta", format!("{beta} is outside (0, 1]")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(param("gamma", format!("{gamma} must be a positive scale")));
        }
        Ok(Self { beta, gamma })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < 1 {
        return Err(param("n", "at least one sample is required"));
    }
    Ok(())
}

/// i.i.d. draws: component `i` with probability `a_i`, then `−ln(U)/λ_i`.
/// Two uniforms are consumed per draw, including the single-component case.
pub fn gen_mixture(spec: &MixtureSpec, n: usize, seed: u64) -> Result<DurationSeries> {
    check_count(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = spec.weights.len() - 1;
    let values = (0..n)
        .map(|_| {
            let pick: f64 = rng.sample(Open01);
            let u: f64 = rng.sample(Open01);
            let mut acc = 0.0;
            let mut comp = last;
            for (i, w) in spec.weights.iter().enumerate() {
                acc += w;
                if pick < acc {
                    comp = i;
                    break;
                }
            }
            -u.ln() / spec.rates[comp]
        })
        .collect();
    DurationSeries::new(values)
}

pub fn gen_exponential(rate: f64, n: usize, seed: u64) -> Result<DurationSeries> {
    gen_mixture(&MixtureSpec::exponential(rate)?, n, seed)
}

/// i.i.d. Mittag-Leffler draws via
/// `X = −γ ln(U) (sin(βπ)/tan(βπV) − cos(βπ))^{1/β}` with independent `U, V`.
/// At `β = 1` the bracket is exactly 1 and `X = −γ ln(U)`.
pub fn gen_mittag_leffler(p: MlParams, n: usize, seed: u64) -> Result<DurationSeries> {
    check_count(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (beta, gamma) = (p.beta, p.gamma);
    let (s, c) = (beta * PI).sin_cos();
    let values = (0..n)
        .map(|_| {
            let u: f64 = rng.sample(Open01);
            let v: f64 = rng.sample(Open01);
            if beta == 1.0 {
                return -gamma * u.ln();
            }
            let mut bracket = s / (beta * PI * v).tan() - c;
            if bracket <= 0.0 {
                // same quantity, sin(βπ(1−V)) / sin(βπV), without the cancellation near V = 1
                bracket = (beta * PI * (1.0 - v)).sin() / (beta * PI * v).sin();
            }
            -gamma * u.ln() * bracket.powf(1.0 / beta)
        })
        .collect();
    DurationSeries::new(values)
}

/// Analytic survival `E_β(−(τ/γ)^β)` with the default branch switch.
pub fn ml_survival(p: MlParams, taus: &[f64]) -> Result<SurvivalCurve> {
    ml_survival_with(p, taus, DEFAULT_Z_SWITCH)
}

pub fn ml_survival_with(p: MlParams, taus: &[f64], z_switch: f64) -> Result<SurvivalCurve> {
    check_grid(taus)?;
    if taus[0] < 0.0 {
        return Err(param("taus", "grid values must be non-negative"));
    }
    let psi = taus
        .iter()
        .map(|&t| {
            if p.beta == 1.0 {
                (-t / p.gamma).exp()
            } else {
                mittag_leffler_neg(p.beta, (t / p.gamma).powf(p.beta), z_switch)
            }
        })
        .collect();
    SurvivalCurve::new(taus.to_vec(), psi, 0)
}
