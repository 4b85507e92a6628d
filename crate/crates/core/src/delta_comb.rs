//! Delta-comb spectra: split the duration stream into windows of roughly
//! constant activity and give each window one exponential component.
//!
//! A window collects the fewest consecutive durations whose sum is strictly
//! larger than `ΔT`. Window `j` contributes rate `λ_j = N_j / T_j` and weight
//! `a_j = N_j / N`. The next window starts right after the last duration of
//! the previous one. Durations left over at the end (their sum never exceeds
//! `ΔT`) form a final window by default, which keeps `Σ a_j = 1` exact.

use rayon::prelude::*;

use crate::durations::{check_grid, DurationSeries, SurvivalCurve};
use crate::error::{param, Error, Result};
use crate::gof::{ks_report, KsReport};
use crate::spacing::log_spaced;

/// What to do with trailing durations that never fill a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailPolicy {
    /// Emit them as a final, shorter window.
    #[default]
    Keep,
    /// Discard them and renormalize the remaining weights.
    Drop,
}

/// A finite exponential mixture with its window bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaComb {
    weights: Vec<f64>,
    rates: Vec<f64>,
    delta_t: f64,
    window_counts: Vec<usize>,
    window_sums: Vec<f64>,
    dropped_tail: usize,
}

impl DeltaComb {
    /// Rebuilds a comb from per-window counts and sums; weights are `N_j / Σ N`.
    pub fn from_windows(delta_t: f64, window_counts: Vec<usize>, window_sums: Vec<f64>) -> Result<Self> {
        if window_counts.len() != window_sums.len() {
            return Err(Error::Dimension(format!(
                "{} window counts but {} window sums",
                window_counts.len(),
                window_sums.len()
            )));
        }
        if window_counts.is_empty() {
            return Err(param("windows", "a comb needs at least one window"));
        }
        if window_counts.contains(&0) || window_sums.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(param("windows", "every window needs a positive count and sum"));
        }
        let total: usize = window_counts.iter().sum();
        let weights = window_counts.iter().map(|&c| c as f64 / total as f64).collect();
        let rates = window_counts
            .iter()
            .zip(&window_sums)
            .map(|(&c, &s)| c as f64 / s)
            .collect();
        Ok(Self {
            weights,
            rates,
            delta_t,
            window_counts,
            window_sums,
            dropped_tail: 0,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Number of windows, M.
    pub fn m(&self) -> usize {
        self.weights.len()
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn window_counts(&self) -> &[usize] {
        &self.window_counts
    }

    pub fn window_sums(&self) -> &[f64] {
        &self.window_sums
    }

    /// Durations discarded under [`TailPolicy::Drop`].
    pub fn dropped_tail(&self) -> usize {
        self.dropped_tail
    }

    pub fn max_rate(&self) -> f64 {
        self.rates.iter().copied().fold(0.0, f64::max)
    }
}

pub fn fit_comb(series: &DurationSeries, delta_t: f64) -> Result<DeltaComb> {
    fit_comb_with(series, delta_t, TailPolicy::Keep)
}

pub fn fit_comb_with(series: &DurationSeries, delta_t: f64, tail: TailPolicy) -> Result<DeltaComb> {
    if !(delta_t.is_finite() && delta_t > 0.0) {
        return Err(param("delta_t", format!("{delta_t} must be a positive window length")));
    }
    let mut counts = Vec::new();
    let mut sums = Vec::new();
    let (mut count, mut sum) = (0usize, 0.0f64);
    for &tau in series.values() {
        count += 1;
        sum += tau;
        if sum > delta_t {
            counts.push(count);
            sums.push(sum);
            count = 0;
            sum = 0.0;
        }
    }
    let mut dropped = 0;
    if count > 0 {
        match tail {
            TailPolicy::Keep => {
                counts.push(count);
                sums.push(sum);
            }
            TailPolicy::Drop if !counts.is_empty() => dropped = count,
            TailPolicy::Drop => {
                return Err(param("delta_t", "no window fills before the data ends; nothing left after dropping the tail"))
            }
        }
    }
    let mut comb = DeltaComb::from_windows(delta_t, counts, sums)?;
    comb.dropped_tail = dropped;
    Ok(comb)
}

/// `Ψ(τ) = Σ a_i exp(−λ_i τ)` on the grid.
pub fn comb_survival(comb: &DeltaComb, taus: &[f64]) -> Result<SurvivalCurve> {
    check_grid(taus)?;
    let psi = taus
        .iter()
        .map(|&tau| {
            comb.weights
                .iter()
                .zip(&comb.rates)
                .map(|(a, l)| a * (-l * tau).exp())
                .sum()
        })
        .collect();
    SurvivalCurve::new(taus.to_vec(), psi, 0)
}

/// Outcome of [`sweep_delta_t`], in input order.
#[derive(Debug, Clone)]
pub struct CombSweep {
    pub results: Vec<(DeltaComb, KsReport)>,
    pub best: usize,
}

impl CombSweep {
    pub fn best_comb(&self) -> &DeltaComb {
        &self.results[self.best].0
    }
}

/// Fits one comb per `ΔT` and scores each against the empirical survival on `taus`.
/// The highest KS p-value wins; ties go to the larger `ΔT`.
pub fn sweep_delta_t(series: &DurationSeries, dts: &[f64], taus: &[f64], tail: TailPolicy) -> Result<CombSweep> {
    if dts.is_empty() {
        return Err(param("delta_t", "sweep needs at least one value"));
    }
    let empirical = crate::durations::empirical_survival(series, taus)?;
    let results = dts
        .par_iter()
        .map(|&dt| {
            let comb = fit_comb_with(series, dt, tail)?;
            let model = comb_survival(&comb, taus)?;
            let ks = ks_report(&model, &empirical, series.len())?;
            Ok((comb, ks))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (idx, (comb, ks)) in results.iter().enumerate().skip(1) {
        let (best_comb, best_ks) = &results[best];
        if ks.p_value > best_ks.p_value || (ks.p_value == best_ks.p_value && comb.delta_t > best_comb.delta_t) {
            best = idx;
        }
    }
    Ok(CombSweep { results, best })
}

/// 30 log-spaced window lengths on `[10 τ₀, N τ₀ / 5]`, i.e. windows of
/// roughly 10 to N/5 events. Collapses to `[10 τ₀]` for very short series.
pub fn default_delta_t_sweep(series: &DurationSeries) -> Vec<f64> {
    let lo = 10.0 * series.mean();
    let hi = series.len() as f64 * series.mean() / 5.0;
    if hi <= lo {
        vec![lo]
    } else {
        log_spaced(lo, hi, 30)
    }
}

/// Kernel spacing whose λ grid `h, 2h, …, n h` reaches `margin` times the comb's largest rate.
pub fn estimate_h(comb: &DeltaComb, n: usize, margin: f64) -> Result<f64> {
    if n < 1 {
        return Err(param("n", "grid size must be at least 1"));
    }
    if !(margin.is_finite() && margin >= 1.0) {
        return Err(param("margin", format!("{margin} must be at least 1")));
    }
    Ok(margin * comb.max_rate() / n as f64)
}

/// Default `estimate_h` margin.
pub const DEFAULT_H_MARGIN: f64 = 1.3;

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: Vec<f64>) -> DurationSeries {
        DurationSeries::new(values).unwrap()
    }

    #[test]
    fn strict_inequality_windows() {
        let comb = fit_comb(&series(vec![1.0; 22]), 10.0).unwrap();
        assert_eq!(comb.m(), 2);
        assert_eq!(comb.window_counts(), &[11, 11]);
        assert_eq!(comb.window_sums(), &[11.0, 11.0]);
        assert_eq!(comb.rates(), &[1.0, 1.0]);
        assert_eq!(comb.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn single_duration() {
        let comb = fit_comb(&series(vec![5.0]), 1.0).unwrap();
        assert_eq!(comb.m(), 1);
        assert_eq!(comb.rates(), &[0.2]);
        assert_eq!(comb.weights(), &[1.0]);
    }

    #[test]
    fn tail_window_kept_or_dropped() {
        let s = series(vec![1.0; 25]);
        let kept = fit_comb(&s, 10.0).unwrap();
        assert_eq!(kept.window_counts(), &[11, 11, 3]);
        assert!((kept.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let dropped = fit_comb_with(&s, 10.0, TailPolicy::Drop).unwrap();
        assert_eq!(dropped.window_counts(), &[11, 11]);
        assert_eq!(dropped.dropped_tail(), 3);
        assert_eq!(dropped.weights(), &[0.5, 0.5]);

        assert!(fit_comb_with(&series(vec![1.0; 3]), 10.0, TailPolicy::Drop).is_err());
    }

    #[test]
    fn rejects_bad_window() {
        let s = series(vec![1.0]);
        assert!(fit_comb(&s, 0.0).is_err());
        assert!(fit_comb(&s, -2.0).is_err());
        assert!(fit_comb(&s, f64::NAN).is_err());
    }

    #[test]
    fn survival_values() {
        let single = DeltaComb::from_windows(1.0, vec![1], vec![1.0]).unwrap();
        let c = comb_survival(&single, &[0.0, 1.0]).unwrap();
        assert_eq!(c.psi()[0], 1.0);
        assert!((c.psi()[1] - (-1.0f64).exp()).abs() < 1e-15);

        // rates 1 and 2, equal weights: 0.5 e^-1 + 0.5 e^-2
        let even = DeltaComb::from_windows(1.0, vec![2, 2], vec![2.0, 1.0]).unwrap();
        let v = comb_survival(&even, &[1.0]).unwrap().psi()[0];
        assert!((v - 0.251_607_362_204_027_5).abs() < 1e-15);
    }

    #[test]
    fn estimate_h_formula() {
        let unit = DeltaComb::from_windows(1.0, vec![1], vec![1.0]).unwrap();
        assert!((estimate_h(&unit, 100, 1.0).unwrap() - 0.01).abs() < 1e-15);
        let a = estimate_h(&unit, 100, 1.0).unwrap();
        let b = estimate_h(&unit, 100, 2.0).unwrap();
        assert_eq!(b, 2.0 * a);
        assert!(estimate_h(&unit, 100, 0.5).is_err());
        assert!(estimate_h(&unit, 0, 1.3).is_err());

        // max rate 0.226 s⁻¹ ≈ 2/8.85
        let ge = DeltaComb::from_windows(1000.0, vec![226], vec![1000.0]).unwrap();
        let h = estimate_h(&ge, 196, DEFAULT_H_MARGIN).unwrap();
        assert!((h - 0.0015).abs() < 0.00002, "h = {h}");
    }

    #[test]
    fn single_dt_sweep() {
        let s = series(vec![1.0, 2.0, 0.5, 3.0, 1.5]);
        let sweep = sweep_delta_t(&s, &[2.0], &[1.0, 2.0, 3.0], TailPolicy::Keep).unwrap();
        assert_eq!(sweep.best, 0);
        assert!(sweep_delta_t(&s, &[], &[1.0], TailPolicy::Keep).is_err());
        assert!(sweep_delta_t(&s, &[0.0], &[1.0], TailPolicy::Keep).is_err());
    }

    #[test]
    fn sweep_ties_prefer_larger_window() {
        // identical durations: every window has rate 0.5 and every fit is equally (and
        // overwhelmingly) rejected, so all p-values are exactly 0
        let s = series(vec![2.0; 4096]);
        let sweep = sweep_delta_t(&s, &[5.0, 30.0, 10.0], &[1.0, 2.0, 3.0], TailPolicy::Keep).unwrap();
        assert_eq!(sweep.best, 1);
    }

    #[test]
    fn default_sweep_brackets() {
        let s = series(vec![2.0; 1000]);
        let dts = default_delta_t_sweep(&s);
        assert_eq!(dts.len(), 30);
        assert_eq!(dts[0], 20.0);
        assert!((dts[29] - 400.0).abs() < 1e-9);
        assert_eq!(default_delta_t_sweep(&series(vec![1.0; 5])), vec![10.0]);
    }

    proptest::proptest! {
        #[test]
        fn windows_partition_the_series(
            values in proptest::collection::vec(0.01f64..50.0, 1..300),
            dt in 0.5f64..500.0,
        ) {
            let s = series(values);
            let comb = fit_comb(&s, dt).unwrap();
            proptest::prop_assert_eq!(comb.window_counts().iter().sum::<usize>(), s.len());
            proptest::prop_assert!((comb.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            proptest::prop_assert_eq!(comb.m(), comb.rates().len());
            for j in 0..comb.m() {
                proptest::prop_assert_eq!(comb.rates()[j], comb.window_counts()[j] as f64 / comb.window_sums()[j]);
                // all but the tail window overshoot ΔT
                if j + 1 < comb.m() {
                    proptest::prop_assert!(comb.window_sums()[j] > dt);
                }
            }
            let mut grid = vec![0.0];
            grid.extend(s.default_grid());
            let curve = comb_survival(&comb, &grid).unwrap();
            proptest::prop_assert!((curve.psi()[0] - 1.0).abs() < 1e-12);
            proptest::prop_assert!(curve.psi().windows(2).all(|w| w[1] <= w[0]));
            proptest::prop_assert!(curve.psi().iter().all(|&p| p > 0.0 && p <= 1.0 + 1e-12));
        }
    }
}
