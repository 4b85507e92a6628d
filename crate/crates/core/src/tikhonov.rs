//! Tikhonov-regularized inversion of `Ψ = K g` and KS-driven choice of the regularization strength.
//!
//! For a fixed `μ > 0` the minimizer of `‖K g − Ψ‖² + μ ‖g‖²` solves the
//! normal equations `(KᵀK + μI) g = KᵀΨ`. The system matrix is symmetric
//! positive definite for any `μ > 0`, so it is factored with a Cholesky
//! decomposition rather than inverted. No positivity constraint is imposed on
//! `g`; negative mass is reported instead.
//!
//! The kernel is far too ill-conditioned for generalized cross-validation or
//! the L-curve to be informative, so `μ` is picked by sweeping many values and
//! keeping the one whose rebuilt survival `K ĝ_μ` passes the KS test best.

use nalgebra::{Cholesky, DMatrix, DVector};
use rayon::prelude::*;

use crate::durations::SurvivalCurve;
use crate::error::{param, Error, Result};
use crate::gof::{ks_report, KsReport};
use crate::kernel::KernelMatrix;
use crate::spacing::log_spaced;

/// A spectrum stored as probability mass per λ grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    lambdas: Vec<f64>,
    masses: Vec<f64>,
    total_mass: f64,
}

impl SpectrumGrid {
    pub fn new(lambdas: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if lambdas.len() != masses.len() {
            return Err(Error::Dimension(format!(
                "{} rates but {} masses",
                lambdas.len(),
                masses.len()
            )));
        }
        let total_mass = masses.iter().sum();
        Ok(Self {
            lambdas,
            masses,
            total_mass,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// `|Σ g_i − 1|`; normalization is reported, never enforced.
    pub fn normalization_error(&self) -> f64 {
        (self.total_mass - 1.0).abs()
    }

    pub fn negative_count(&self) -> usize {
        self.masses.iter().filter(|&&m| m < 0.0).count()
    }

    /// Sum of the negative masses (≤ 0).
    pub fn negative_mass(&self) -> f64 {
        self.masses.iter().filter(|&&m| m < 0.0).sum()
    }

    /// Mean rate `Σ λ_i g_i / Σ g_i`.
    pub fn centroid(&self) -> f64 {
        let weighted: f64 = self.lambdas.iter().zip(&self.masses).map(|(l, m)| l * m).sum();
        weighted / self.total_mass
    }

    /// Copy scaled to unit total mass, for display.
    pub fn renormalized(&self) -> Self {
        let masses = self.masses.iter().map(|m| m / self.total_mass).collect();
        Self::new(self.lambdas.clone(), masses).expect("lengths unchanged")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TikhonovSolution {
    pub mu: f64,
    pub spectrum: SpectrumGrid,
    /// `K ĝ_μ` on the kernel's τ grid, unclipped.
    pub rebuilt: SurvivalCurve,
    pub ks: KsReport,
}

/// `‖K g − Ψ‖² + μ ‖g‖²`. With `μ = 0` this is the plain least-squares functional.
pub fn eval_objective(k: &DMatrix<f64>, g: &[f64], psi: &[f64], mu: f64) -> Result<f64> {
    if k.ncols() != g.len() || k.nrows() != psi.len() {
        return Err(Error::Dimension(format!(
            "K is {}x{}, g has {} entries, psi has {}",
            k.nrows(),
            k.ncols(),
            g.len(),
            psi.len()
        )));
    }
    let g = DVector::from_column_slice(g);
    let residual = k * &g - DVector::from_column_slice(psi);
    Ok(residual.norm_squared() + mu * g.norm_squared())
}

/// `KᵀK` and `KᵀΨ`, formed once and reused across a μ sweep.
#[derive(Debug, Clone)]
pub struct NormalEquations {
    gram: DMatrix<f64>,
    rhs: DVector<f64>,
}

impl NormalEquations {
    pub fn new(k: &DMatrix<f64>, psi: &[f64]) -> Result<Self> {
        if k.nrows() != psi.len() {
            return Err(Error::Dimension(format!(
                "K has {} rows but psi has {} entries",
                k.nrows(),
                psi.len()
            )));
        }
        Ok(Self {
            gram: k.tr_mul(k),
            rhs: k.tr_mul(&DVector::from_column_slice(psi)),
        })
    }

    /// `‖KᵀΨ‖`, the scale of the optimality residual.
    pub fn rhs_norm(&self) -> f64 {
        self.rhs.norm()
    }

    /// Solves `(KᵀK + μI) g = KᵀΨ`.
    pub fn solve(&self, mu: f64) -> Result<Vec<f64>> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(param("mu", format!("{mu} must be positive and finite")));
        }
        let mut system = self.gram.clone();
        for d in 0..system.nrows() {
            system[(d, d)] += mu;
        }
        let chol = Cholesky::new(system).ok_or(Error::Factorization { mu })?;
        let g = chol.solve(&self.rhs);
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Factorization { mu });
        }
        Ok(g.as_slice().to_vec())
    }
}

/// Regularized spectrum for one `μ`, scored against `psi` with the KS test.
///
/// `psi` must be sampled on the kernel's τ grid; its `n_source` is the KS sample size.
pub fn solve_tikhonov(kernel: &KernelMatrix, psi: &SurvivalCurve, mu: f64) -> Result<TikhonovSolution> {
    check_alignment(kernel, psi)?;
    let normal = NormalEquations::new(kernel.entries(), psi.psi())?;
    finish(kernel, psi, &normal, mu, psi.n_source())
}

fn check_alignment(kernel: &KernelMatrix, psi: &SurvivalCurve) -> Result<()> {
    if kernel.taus() != psi.taus() {
        return Err(Error::Dimension(format!(
            "survival curve has {} grid points; kernel expects the 1..{} s grid",
            psi.len(),
            kernel.n_tau()
        )));
    }
    Ok(())
}

fn finish(
    kernel: &KernelMatrix,
    psi: &SurvivalCurve,
    normal: &NormalEquations,
    mu: f64,
    n_eff: usize,
) -> Result<TikhonovSolution> {
    let masses = normal.solve(mu)?;
    let rebuilt = kernel.entries() * DVector::from_column_slice(&masses);
    let rebuilt = SurvivalCurve::new(kernel.taus().to_vec(), rebuilt.as_slice().to_vec(), 0)?;
    let ks = ks_report(&rebuilt, psi, n_eff)?;
    Ok(TikhonovSolution {
        mu,
        spectrum: SpectrumGrid::new(kernel.lambdas().to_vec(), masses)?,
        rebuilt,
        ks,
    })
}

/// Outcome of [`sweep_mu`]: one entry per requested `μ`, in input order.
#[derive(Debug)]
pub struct MuSweep {
    pub results: Vec<(f64, Result<TikhonovSolution>)>,
    /// Index into `results` of the highest KS p-value.
    pub best: usize,
}

impl MuSweep {
    pub fn best_solution(&self) -> &TikhonovSolution {
        self.results[self.best]
            .1
            .as_ref()
            .expect("best index always points at a successful solve")
    }

    pub fn solutions(&self) -> impl Iterator<Item = &TikhonovSolution> {
        self.results.iter().filter_map(|(_, r)| r.as_ref().ok())
    }
}

/// Solves for every `μ` and picks the best KS p-value, breaking ties toward larger `μ`.
///
/// Solves run in parallel on the current rayon pool; results keep the input order.
/// Failed solves are kept in the output and excluded from the choice.
pub fn sweep_mu(kernel: &KernelMatrix, psi: &SurvivalCurve, mus: &[f64], n_eff: usize) -> Result<MuSweep> {
    if mus.is_empty() {
        return Err(param("mus", "sweep needs at least one value"));
    }
    if let Some(bad) = mus.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        return Err(param("mus", format!("{bad} is not a positive regularization strength")));
    }
    check_alignment(kernel, psi)?;
    let normal = NormalEquations::new(kernel.entries(), psi.psi())?;
    let results: Vec<(f64, Result<TikhonovSolution>)> = mus
        .par_iter()
        .map(|&mu| (mu, finish(kernel, psi, &normal, mu, n_eff)))
        .collect();

    let mut best: Option<(usize, f64, f64)> = None;
    for (idx, (mu, outcome)) in results.iter().enumerate() {
        let Ok(sol) = outcome else { continue };
        let p = sol.ks.p_value;
        let better = match best {
            None => true,
            Some((_, best_p, best_mu)) => p > best_p || (p == best_p && *mu > best_mu),
        };
        if better {
            best = Some((idx, p, *mu));
        }
    }
    let (best, _, _) = best.ok_or(Error::AllSolvesFailed)?;
    Ok(MuSweep { results, best })
}

/// 200 log-spaced values on `[1e-6, 1e2]`.
pub fn default_mu_sweep() -> Vec<f64> {
    log_spaced(1e-6, 1e2, 200)
}
