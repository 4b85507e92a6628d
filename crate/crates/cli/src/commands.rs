use std::fs::File;
use std::io::BufReader;

use anyhow::{bail, Context, Result};
use spectrakit::delta_comb::{
    comb_survival, default_delta_t_sweep, estimate_h, sweep_delta_t, CombSweep, TailPolicy,
};
use spectrakit::durations::{
    empirical_survival, integer_grid, load_durations_with, write_durations, DurationSeries, InputMode,
    LoadOptions,
};
use spectrakit::io;
use spectrakit::kernel::assemble_kernel;
use spectrakit::synthetic::{gen_exponential, gen_mittag_leffler, gen_mixture, MixtureSpec, MlParams};
use spectrakit::tikhonov::{default_mu_sweep, sweep_mu};

use crate::output::Outputs;
use crate::svg::{Line, Plot, Stroke};
use crate::sweep_arg::parse_sweep;
use crate::{CombArgs, GenArgs, InputArgs, SurvivalArgs, TikhonovArgs};

const DEFAULT_H: f64 = 0.0015;

fn header(command: &str, fields: &[(&str, String)]) {
    eprintln!("# spectrakit {command} {}", env!("CARGO_PKG_VERSION"));
    for (k, v) in fields {
        eprintln!("#   {k}: {v}");
    }
}

fn load(args: &InputArgs) -> Result<DurationSeries> {
    let file = File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let opts = LoadOptions {
        mode: if args.timestamps {
            InputMode::Timestamps
        } else {
            InputMode::Durations
        },
        max_duration: args.max_duration,
    };
    let loaded =
        load_durations_with(BufReader::new(file), opts).with_context(|| format!("reading {}", args.input.display()))?;
    eprintln!(
        "#   loaded {} durations from {} ({} non-positive dropped, {} above cap excluded)",
        loaded.series.len(),
        args.input.display(),
        loaded.dropped,
        loaded.excluded
    );
    Ok(loaded.series)
}

fn input_fields(args: &InputArgs) -> Vec<(&'static str, String)> {
    vec![
        ("input", args.input.display().to_string()),
        ("mode", if args.timestamps { "timestamps" } else { "durations" }.into()),
        (
            "max duration",
            args.max_duration.map_or("none (default)".into(), |m| m.to_string()),
        ),
    ]
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> spectrakit::Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn parse_mixture(text: &str) -> Result<MixtureSpec> {
    let mut weights = Vec::new();
    let mut rates = Vec::new();
    for pair in text.split(',') {
        let Some((w, r)) = pair.split_once(':') else {
            bail!("mixture component {pair:?} must be weight:rate");
        };
        weights.push(w.trim().parse::<f64>().with_context(|| format!("bad weight in {pair:?}"))?);
        rates.push(r.trim().parse::<f64>().with_context(|| format!("bad rate in {pair:?}"))?);
    }
    Ok(MixtureSpec::new(weights, rates)?)
}

pub fn gen(a: GenArgs) -> Result<()> {
    let (model, series) = if a.exp {
        let rate = a.rate.expect("clap enforces --rate with --exp");
        (format!("exponential rate={rate}"), gen_exponential(rate, a.n, a.seed)?)
    } else if a.ml {
        let p = MlParams::new(a.beta, a.gamma)?;
        (
            format!("mittag-leffler beta={} gamma={}", a.beta, a.gamma),
            gen_mittag_leffler(p, a.n, a.seed)?,
        )
    } else {
        let text = a.mixture.as_deref().expect("clap enforces one model");
        let spec = parse_mixture(text)?;
        (format!("mixture {text}"), gen_mixture(&spec, a.n, a.seed)?)
    };
    header(
        "gen",
        &[
            ("model", model.clone()),
            ("n", a.n.to_string()),
            ("seed", a.seed.to_string()),
        ],
    );
    let mut buf = format!("# spectrakit gen\n# model: {model}\n# n={} seed={}\n", a.n, a.seed).into_bytes();
    write_durations(&mut buf, &series)?;
    let mut out = Outputs::default();
    out.file_or_stdout(a.out, buf);
    out.commit()?;
    Ok(())
}

fn survival_plot(title: &str, taus: &[f64], curves: Vec<(&str, Vec<f64>, Stroke, &'static str)>) -> String {
    Plot {
        title: title.into(),
        x_label: "tau (s)".into(),
        y_label: "survival".into(),
        log_y: true,
        lines: curves
            .into_iter()
            .map(|(label, ys, stroke, color)| Line {
                label: label.into(),
                points: taus.iter().copied().zip(ys).collect(),
                stroke,
                color,
            })
            .collect(),
        ..Plot::default()
    }
    .render()
}

pub fn survival(a: SurvivalArgs) -> Result<()> {
    header("survival", &input_fields(&a.input));
    let series = load(&a.input)?;
    let taus = series.default_grid();
    let psi = empirical_survival(&series, &taus)?;
    let mut out = Outputs::default();
    out.file_or_stdout(a.out, csv_bytes(|b| io::write_survival(b, &psi))?);
    if let Some(path) = a.plot {
        let tau0 = series.mean();
        let reference = taus.iter().map(|t| (-t / tau0).exp()).collect();
        let svg = survival_plot(
            "Survival function",
            &taus,
            vec![
                ("empirical", psi.psi().to_vec(), Stroke::Solid, "black"),
                ("exp(-tau/tau0)", reference, Stroke::Dotted, "crimson"),
            ],
        );
        out.file(path, svg.into_bytes());
    }
    report(out.commit()?);
    Ok(())
}

fn report(written: Vec<std::path::PathBuf>) {
    for p in written {
        eprintln!("#   wrote {}", p.display());
    }
}

fn describe_sweep(values: &[f64]) -> String {
    match values {
        [v] => v.to_string(),
        _ => format!(
            "{} values in [{}, {}]",
            values.len(),
            values.iter().copied().fold(f64::INFINITY, f64::min),
            values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        ),
    }
}

fn comb_sweep_for(series: &DurationSeries, dts: &[f64], n: usize, tail: TailPolicy) -> Result<CombSweep> {
    Ok(sweep_delta_t(series, dts, &integer_grid(n), tail)?)
}

pub fn tikhonov(a: TikhonovArgs) -> Result<()> {
    if a.n < 1 {
        bail!("invalid parameter n: grid size must be at least 1");
    }
    if let Some(h) = a.h {
        if !(h.is_finite() && h > 0.0) {
            bail!("invalid parameter h: {h} must be a positive finite spacing");
        }
    }
    let mus = match &a.mu {
        Some(text) => parse_sweep(text).context("parsing --mu")?,
        None => default_mu_sweep(),
    };
    let mut fields = input_fields(&a.input);
    fields.push(("n", format!("{}{}", a.n, if a.n == 196 { " (default)" } else { "" })));
    fields.push((
        "h",
        match (a.auto_h, a.h) {
            (true, _) => format!("auto from best delta comb, margin {}", a.margin),
            (false, Some(h)) => h.to_string(),
            (false, None) => format!("{DEFAULT_H} (default)"),
        },
    ));
    fields.push((
        "mu",
        format!("{}{}", describe_sweep(&mus), if a.mu.is_none() { " (default)" } else { "" }),
    ));
    fields.push(("out dir", a.out_dir.display().to_string()));
    header("tikhonov", &fields);

    let series = load(&a.input)?;
    let h = if a.auto_h {
        let dts = default_delta_t_sweep(&series);
        let sweep = comb_sweep_for(&series, &dts, a.n, TailPolicy::Keep)?;
        let best = sweep.best_comb();
        let h = estimate_h(best, a.n, a.margin)?;
        eprintln!(
            "#   auto h: best delta T {} (max rate {}) gives h = {h}",
            best.delta_t(),
            best.max_rate()
        );
        h
    } else {
        a.h.unwrap_or(DEFAULT_H)
    };
    let kernel = assemble_kernel(h, a.n)?;
    let psi = empirical_survival(&series, kernel.taus())?;
    let sweep = sweep_mu(&kernel, &psi, &mus, series.len())?;
    let best = sweep.best_solution();
    let failed = sweep.results.iter().filter(|(_, r)| r.is_err()).count();
    eprintln!(
        "#   best mu {} : KS p = {:.6}, D = {:.6}, mass {:.6}, centroid {:.6}, {} failed solves",
        best.mu,
        best.ks.p_value,
        best.ks.statistic,
        best.spectrum.total_mass(),
        best.spectrum.centroid(),
        failed
    );

    let spectrum = if a.renormalize {
        best.spectrum.renormalized()
    } else {
        best.spectrum.clone()
    };
    let dir = &a.out_dir;
    let mut out = Outputs::default();
    out.file(dir.join("tikhonov_sweep.csv"), csv_bytes(|b| io::write_mu_sweep(b, &sweep))?);
    out.file(dir.join("tikhonov_spectrum.csv"), csv_bytes(|b| io::write_spectrum(b, &spectrum))?);
    out.file(
        dir.join("tikhonov_survival.csv"),
        csv_bytes(|b| io::write_comparison(b, &psi, &best.rebuilt))?,
    );
    if a.plot {
        let points = sweep
            .results
            .iter()
            .filter_map(|(mu, r)| r.as_ref().ok().map(|s| (*mu, s.ks.p_value)))
            .collect();
        out.file(dir.join("tikhonov_pvalue.svg"), pvalue_plot("KS probability vs mu", "mu", points, true));
        let svg = survival_plot(
            &format!("Rebuilt survival, mu = {}", best.mu),
            kernel.taus(),
            vec![
                ("empirical", psi.psi().to_vec(), Stroke::Solid, "black"),
                ("rebuilt", best.rebuilt.psi().to_vec(), Stroke::Dotted, "crimson"),
            ],
        );
        out.file(dir.join("tikhonov_survival.svg"), svg.into_bytes());
    }
    report(out.commit()?);
    Ok(())
}

fn pvalue_plot(title: &str, x_label: &str, points: Vec<(f64, f64)>, log_x: bool) -> Vec<u8> {
    Plot {
        title: title.into(),
        x_label: x_label.into(),
        y_label: "KS p-value".into(),
        log_x,
        lines: vec![Line {
            label: "p-value".into(),
            points,
            stroke: Stroke::Solid,
            color: "black",
        }],
        ..Plot::default()
    }
    .render()
    .into_bytes()
}

pub fn comb(a: CombArgs) -> Result<()> {
    if a.n < 1 {
        bail!("invalid parameter n: grid size must be at least 1");
    }
    let explicit = match &a.dt {
        Some(text) => {
            let dts = parse_sweep(text).context("parsing --dt")?;
            if let Some(bad) = dts.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
                bail!("invalid parameter dt: {bad} must be a positive window length");
            }
            Some(dts)
        }
        None => None,
    };
    let tail = if a.drop_tail { TailPolicy::Drop } else { TailPolicy::Keep };
    let mut fields = input_fields(&a.input);
    fields.push((
        "dt",
        explicit
            .as_deref()
            .map_or("30 log-spaced in [10 tau0, N tau0 / 5] (default)".into(), describe_sweep),
    ));
    fields.push(("tail", if a.drop_tail { "drop" } else { "keep (default)" }.into()));
    fields.push(("n", format!("{}{}", a.n, if a.n == 196 { " (default)" } else { "" })));
    fields.push(("out dir", a.out_dir.display().to_string()));
    header("comb", &fields);

    let series = load(&a.input)?;
    let dts = explicit.unwrap_or_else(|| default_delta_t_sweep(&series));
    let taus = integer_grid(a.n);
    let sweep = comb_sweep_for(&series, &dts, a.n, tail)?;
    let (best, ks) = &sweep.results[sweep.best];
    eprintln!(
        "#   best delta T {} : {} windows, KS p = {:.6}, D = {:.6}",
        best.delta_t(),
        best.m(),
        ks.p_value,
        ks.statistic
    );
    let empirical = empirical_survival(&series, &taus)?;
    let model = comb_survival(best, &taus)?;

    let dir = &a.out_dir;
    let mut out = Outputs::default();
    out.file(dir.join("comb_sweep.csv"), csv_bytes(|b| io::write_dt_sweep(b, &sweep))?);
    out.file(dir.join("comb.csv"), csv_bytes(|b| io::write_comb(b, best))?);
    out.file(
        dir.join("comb_survival.csv"),
        csv_bytes(|b| io::write_comparison(b, &empirical, &model))?,
    );
    if a.plot {
        let points = sweep.results.iter().map(|(c, k)| (c.delta_t(), k.p_value)).collect();
        out.file(
            dir.join("comb_pvalue.svg"),
            pvalue_plot("KS probability vs time interval", "delta T (s)", points, false),
        );
        let svg = survival_plot(
            &format!("Delta comb, delta T = {}", best.delta_t()),
            &taus,
            vec![
                ("empirical", empirical.psi().to_vec(), Stroke::Solid, "black"),
                ("delta comb", model.psi().to_vec(), Stroke::Dotted, "crimson"),
            ],
        );
        out.file(dir.join("comb_survival.svg"), svg.into_bytes());
    }
    report(out.commit()?);
    Ok(())
}
