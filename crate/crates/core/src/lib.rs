//! Activity spectra of waiting-time processes.
//!
//! A stream of waiting times whose survival function is a mixture of
//! exponentials, `Ψ(τ) = ∫ g(λ) e^{−λτ} dλ`, is inverted for the activity
//! spectrum `g` in two ways:
//!
//! - [`tikhonov`]: discretize the Laplace kernel ([`kernel`]) and solve the
//!   regularized least-squares problem for a sweep of strengths, keeping the
//!   one whose rebuilt survival passes the KS test ([`gof`]) best;
//! - [`delta_comb`]: cut the stream into windows of roughly constant activity
//!   and give each window one exponential.
//!
//! [`synthetic`] produces exponential, mixture and Mittag-Leffler samples with
//! known ground truth for calibration.
//!
//! ```
//! use spectrakit::durations::{empirical_survival, integer_grid};
//! use spectrakit::kernel::assemble_kernel;
//! use spectrakit::synthetic::gen_exponential;
//! use spectrakit::spacing::log_spaced;
//! use spectrakit::tikhonov::sweep_mu;
//!
//! let series = gen_exponential(1.0 / 8.85, 5_000, 1)?;
//! let kernel = assemble_kernel(0.0015, 196)?;
//! let psi = empirical_survival(&series, &integer_grid(196))?;
//! let sweep = sweep_mu(&kernel, &psi, &log_spaced(1e-4, 1.0, 20), series.len())?;
//! assert!(sweep.best_solution().ks.p_value > 0.01);
//! # Ok::<(), spectrakit::Error>(())
//! ```

pub mod delta_comb;
pub mod durations;
mod error;
pub mod gof;
pub mod io;
pub mod kernel;
pub mod spacing;
pub mod special;
pub mod synthetic;
pub mod tikhonov;

pub use error::{Error, Result};

// Book chapters are compiled as doctests so their snippets cannot drift.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/survival.md")]
    mod survival {}
    #[doc = include_str!("../../../book/src/kernel.md")]
    mod kernel {}
    #[doc = include_str!("../../../book/src/tikhonov.md")]
    mod tikhonov {}
    #[doc = include_str!("../../../book/src/delta-comb.md")]
    mod delta_comb {}
    #[doc = include_str!("../../../book/src/goodness-of-fit.md")]
    mod goodness_of_fit {}
    #[doc = include_str!("../../../book/src/synthetic.md")]
    mod synthetic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
