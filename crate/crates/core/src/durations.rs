//! Waiting-time ingestion and the empirical survival function.

use std::io::{BufRead, Write};

use crate::error::{param, Error, Result};

/// How the numbers in an input stream are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputMode {
    /// Each number is a waiting time in seconds.
    #[default]
    Durations,
    /// Each number is an event time in seconds; durations are successive differences.
    Timestamps,
}

/// Filtering applied while loading.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    pub mode: InputMode,
    /// Durations strictly above this bound are excluded (session gaps, overnight breaks).
    pub max_duration: Option<f64>,
}

/// An ordered sequence of strictly positive waiting times with summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct DurationSeries {
    values: Vec<f64>,
    mean: f64,
    max: f64,
}

impl DurationSeries {
    /// Builds a series, rejecting empty input and any value that is not finite and positive.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoDurations);
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(param("durations", format!("{bad} is not a positive finite duration")));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let max = values.iter().copied().fold(f64::MIN, f64::max);
        Ok(Self { values, mean, max })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Mean waiting time, τ₀.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Largest waiting time, τ_max.
    pub fn max(&self) -> f64 {
        self.max
    }

    /// Integer-second grid `1..=ceil(τ_max)`.
    pub fn default_grid(&self) -> Vec<f64> {
        integer_grid(self.max.ceil() as usize)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Result of [`load_durations`]: the series plus filtering bookkeeping.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub series: DurationSeries,
    /// Non-positive entries (or differences, in timestamp mode) that were dropped.
    pub dropped: usize,
    /// Entries removed by `max_duration`.
    pub excluded: usize,
}

/// Parses newline-separated numbers. Blank lines and lines starting with `#` are skipped.
pub fn load_durations<R: BufRead>(source: R, mode: InputMode) -> Result<Loaded> {
    load_durations_with(
        source,
        LoadOptions {
            mode,
            max_duration: None,
        },
    )
}

pub fn load_durations_with<R: BufRead>(source: R, opts: LoadOptions) -> Result<Loaded> {
    if let Some(cap) = opts.max_duration {
        if !(cap > 0.0) {
            return Err(param("max_duration", "must be positive"));
        }
    }
    let mut raw = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            text: text.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: idx + 1,
                text: text.to_string(),
            });
        }
        raw.push(value);
    }

    let candidates: Vec<f64> = match opts.mode {
        InputMode::Durations => raw,
        InputMode::Timestamps => raw.windows(2).map(|w| w[1] - w[0]).collect(),
    };

    let mut dropped = 0;
    let mut excluded = 0;
    let mut values = Vec::with_capacity(candidates.len());
    for v in candidates {
        if v <= 0.0 {
            dropped += 1;
        } else if opts.max_duration.is_some_and(|cap| v > cap) {
            excluded += 1;
        } else {
            values.push(v);
        }
    }
    Ok(Loaded {
        series: DurationSeries::new(values)?,
        dropped,
        excluded,
    })
}

/// Writes one duration per line in the format [`load_durations`] reads back.
pub fn write_durations<W: Write>(mut out: W, series: &DurationSeries) -> Result<()> {
    for v in series.values() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

/// A survival function sampled on a strictly increasing τ grid.
///
/// Empirical and analytic curves lie in `[0, 1]` and are non-increasing.
/// Curves rebuilt from an unconstrained Tikhonov spectrum are stored as
/// computed and may violate both; see [`SurvivalCurve::is_proper`].
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    taus: Vec<f64>,
    psi: Vec<f64>,
    n_source: usize,
}

impl SurvivalCurve {
    /// `n_source` is the number of underlying durations, or 0 for model curves.
    pub fn new(taus: Vec<f64>, psi: Vec<f64>, n_source: usize) -> Result<Self> {
        check_grid(&taus)?;
        if taus.len() != psi.len() {
            return Err(Error::Dimension(format!(
                "{} grid points but {} survival values",
                taus.len(),
                psi.len()
            )));
        }
        Ok(Self {
            taus,
            psi,
            n_source,
        })
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn n_source(&self) -> usize {
        self.n_source
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// True when every value is in `[0, 1]` and the curve never increases.
    pub fn is_proper(&self) -> bool {
        self.psi.iter().all(|p| (0.0..=1.0).contains(p))
            && self.psi.windows(2).all(|w| w[1] <= w[0])
    }
}

/// `1.0, 2.0, ..., n as f64`.
pub fn integer_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|j| j as f64).collect()
}

pub(crate) fn check_grid(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(param("taus", "grid is empty"));
    }
    if taus.iter().any(|t| !t.is_finite()) {
        return Err(param("taus", "grid contains a non-finite value"));
    }
    if taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(param("taus", "grid is not strictly increasing"));
    }
    Ok(())
}

/// Ψ̂(τ) = #{τ_i ≥ τ} / n on the given grid.
///
/// The `≥` convention makes Ψ̂ at a unique largest sample exactly `1/n`, so the
/// dynamic range of the curve over `[min, τ_max]` equals the sample count.
pub fn empirical_survival(series: &DurationSeries, taus: &[f64]) -> Result<SurvivalCurve> {
    check_grid(taus)?;
    if taus[0] < 0.0 {
        return Err(param("taus", "grid values must be non-negative"));
    }
    let mut sorted = series.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let psi = taus
        .iter()
        .map(|&tau| {
            let below = sorted.partition_point(|&v| v < tau);
            (n - below) as f64 / n as f64
        })
        .collect();
    SurvivalCurve::new(taus.to_vec(), psi, n)
}
