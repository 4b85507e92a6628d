//! The discretized exponential kernel `k_ji = exp(-λ_i τ_j)` with `λ_i = h·i`, `τ_j = j`.

use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{param, Result};

/// Laplace kernel sampled on the λ grid `h·1..h·n_lambda` and the τ grid `1..n_tau` seconds.
///
/// Rows are indexed by τ and columns by λ, so `entries * g` maps a spectrum
/// (probability mass per λ grid point) to survival values on the τ grid.
/// There is no `Δλ` quadrature weight: a normalized spectrum has `Σ g_i ≈ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    h: f64,
    lambdas: Vec<f64>,
    taus: Vec<f64>,
    entries: DMatrix<f64>,
}

/// Square `n × n` kernel, the τ_max × τ_max layout.
pub fn assemble_kernel(h: f64, n: usize) -> Result<KernelMatrix> {
    KernelMatrix::new(h, n, n)
}

impl KernelMatrix {
    pub fn new(h: f64, n_lambda: usize, n_tau: usize) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(param("h", format!("{h} must be a positive finite spacing")));
        }
        if n_lambda < 1 || n_tau < 1 {
            return Err(param("n", "grid sizes must be at least 1"));
        }
        let lambdas = (1..=n_lambda).map(|i| h * i as f64).collect();
        let taus = (1..=n_tau).map(|j| j as f64).collect();
        // h·(i·j) with an integer product keeps the square case exactly symmetric.
        let entries = DMatrix::from_fn(n_tau, n_lambda, |j, i| (-h * ((i + 1) * (j + 1)) as f64).exp());
        Ok(Self {
            h,
            lambdas,
            taus,
            entries,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_lambda(&self) -> usize {
        self.lambdas.len()
    }

    pub fn n_tau(&self) -> usize {
        self.taus.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    /// `n_tau × n_lambda` matrix; entry `(j, i)` is `exp(-h·(i+1)·(j+1))`.
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Ratio of largest to smallest entry, `exp(h·(n_lambda·n_tau − 1))`.
    ///
    /// At the default GE-scale setup (h = 0.0015, n = 196) this is about 1.05e25.
    pub fn conditioning_ratio(&self) -> f64 {
        self.log_conditioning_ratio().exp()
    }

    pub fn log_conditioning_ratio(&self) -> f64 {
        self.h * (self.n_lambda() * self.n_tau() - 1) as f64
    }

    /// Row-major CSV dump, one τ row per line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for row in self.entries.row_iter() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

pub fn conditioning_ratio(kernel: &KernelMatrix) -> f64 {
    kernel.conditioning_ratio()
}
