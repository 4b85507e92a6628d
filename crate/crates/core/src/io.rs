//! CSV formats for curves, spectra, combs and sweep reports.
//!
//! Floats are written with Rust's shortest round-trip representation, so
//! reading a file back reproduces the written values exactly.

use std::io::{Read, Write};

use crate::delta_comb::{CombSweep, DeltaComb};
use crate::durations::SurvivalCurve;
use crate::error::{Error, Result};
use crate::tikhonov::{MuSweep, SpectrumGrid};

pub const SURVIVAL_HEADER: [&str; 2] = ["tau", "psi"];
pub const SPECTRUM_HEADER: [&str; 2] = ["lambda", "g"];
pub const MU_SWEEP_HEADER: [&str; 5] = ["mu", "ks_statistic", "ks_pvalue", "neg_mass", "total_mass"];
pub const COMB_HEADER: [&str; 4] = ["lambda", "weight", "window_count", "window_sum"];
pub const DT_SWEEP_HEADER: [&str; 4] = ["delta_t", "m", "ks_statistic", "ks_pvalue"];
pub const COMPARISON_HEADER: [&str; 3] = ["tau", "empirical", "model"];

fn writer<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush()?;
    Ok(())
}

pub fn write_survival<W: Write>(out: W, curve: &SurvivalCurve) -> Result<()> {
    let mut w = writer(out, &SURVIVAL_HEADER)?;
    for (t, p) in curve.taus().iter().zip(curve.psi()) {
        w.write_record([t.to_string(), p.to_string()])?;
    }
    finish(w)
}

/// Two curves on the same grid side by side.
pub fn write_comparison<W: Write>(out: W, empirical: &SurvivalCurve, model: &SurvivalCurve) -> Result<()> {
    if empirical.taus() != model.taus() {
        return Err(Error::Dimension("curves are sampled on different grids".into()));
    }
    let mut w = writer(out, &COMPARISON_HEADER)?;
    for ((t, e), m) in empirical.taus().iter().zip(empirical.psi()).zip(model.psi()) {
        w.write_record([t.to_string(), e.to_string(), m.to_string()])?;
    }
    finish(w)
}

pub fn write_spectrum<W: Write>(out: W, spectrum: &SpectrumGrid) -> Result<()> {
    let mut w = writer(out, &SPECTRUM_HEADER)?;
    for (l, g) in spectrum.lambdas().iter().zip(spectrum.masses()) {
        w.write_record([l.to_string(), g.to_string()])?;
    }
    finish(w)
}

/// Failed solves are written with `NaN` in every score column.
pub fn write_mu_sweep<W: Write>(out: W, sweep: &MuSweep) -> Result<()> {
    let mut w = writer(out, &MU_SWEEP_HEADER)?;
    for (mu, outcome) in &sweep.results {
        let row = match outcome {
            Ok(sol) => [
                mu.to_string(),
                sol.ks.statistic.to_string(),
                sol.ks.p_value.to_string(),
                sol.spectrum.negative_mass().to_string(),
                sol.spectrum.total_mass().to_string(),
            ],
            Err(_) => [mu.to_string(), "NaN".into(), "NaN".into(), "NaN".into(), "NaN".into()],
        };
        w.write_record(row)?;
    }
    finish(w)
}

pub fn write_comb<W: Write>(out: W, comb: &DeltaComb) -> Result<()> {
    let mut w = writer(out, &COMB_HEADER)?;
    for j in 0..comb.m() {
        w.write_record([
            comb.rates()[j].to_string(),
            comb.weights()[j].to_string(),
            comb.window_counts()[j].to_string(),
            comb.window_sums()[j].to_string(),
        ])?;
    }
    finish(w)
}

pub fn write_dt_sweep<W: Write>(out: W, sweep: &CombSweep) -> Result<()> {
    let mut w = writer(out, &DT_SWEEP_HEADER)?;
    for (comb, ks) in &sweep.results {
        w.write_record([
            comb.delta_t().to_string(),
            comb.m().to_string(),
            ks.statistic.to_string(),
            ks.p_value.to_string(),
        ])?;
    }
    finish(w)
}

fn read_rows<R: Read>(input: R, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let found = r.headers()?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Csv(format!(
            "expected header {:?}, found {:?}",
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let rows: Vec<csv::StringRecord> = r.records().collect::<Result<_, _>>()?;
    Ok(rows)
}

fn field<T: std::str::FromStr>(row: &csv::StringRecord, idx: usize) -> Result<T> {
    let text = row.get(idx).ok_or_else(|| Error::Csv(format!("missing column {idx}")))?;
    text.trim()
        .parse()
        .map_err(|_| Error::Csv(format!("cannot parse {text:?} in column {idx}")))
}

pub fn read_survival<R: Read>(input: R) -> Result<SurvivalCurve> {
    let rows = read_rows(input, &SURVIVAL_HEADER)?;
    let taus = rows.iter().map(|r| field(r, 0)).collect::<Result<Vec<f64>>>()?;
    let psi = rows.iter().map(|r| field(r, 1)).collect::<Result<Vec<f64>>>()?;
    SurvivalCurve::new(taus, psi, 0)
}

pub fn read_spectrum<R: Read>(input: R) -> Result<SpectrumGrid> {
    let rows = read_rows(input, &SPECTRUM_HEADER)?;
    let lambdas = rows.iter().map(|r| field(r, 0)).collect::<Result<Vec<f64>>>()?;
    let masses = rows.iter().map(|r| field(r, 1)).collect::<Result<Vec<f64>>>()?;
    SpectrumGrid::new(lambdas, masses)
}

/// Rebuilds a comb from its CSV; the window length is not stored in the file.
pub fn read_comb<R: Read>(input: R, delta_t: f64) -> Result<DeltaComb> {
    let rows = read_rows(input, &COMB_HEADER)?;
    let counts = rows.iter().map(|r| field(r, 2)).collect::<Result<Vec<usize>>>()?;
    let sums = rows.iter().map(|r| field(r, 3)).collect::<Result<Vec<f64>>>()?;
    DeltaComb::from_windows(delta_t, counts, sums)
}
