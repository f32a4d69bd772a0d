use std::fs;
use std::path::Path;

use permwig::free::{a1a2_example_moment, semicircular_moment};
use permwig::perm::{condition_report, stats};
use permwig::spectra::{anticommutator_spectrum, histogram, ks_distance, nu_sp_cdf, nu_sp_density, nu_sp_support, write_two_column};
use permwig::traffic::{classify_double_tree, expected_injective_traffic, predicted_injective};
use permwig::wigner::{trace_moment_exact, trace_moment_mc};
use permwig::{Complex64, CovarianceSpec, PairReport, PermStats};
use serde::Serialize;

use crate::config::{Experiment, ExperimentConfig, DEFAULT_BINS};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub operation: &'static str,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The machine-readable result record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub provenance: Provenance,
    pub input: ExperimentConfig,
    pub results: toml::Value,
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report is always representable")
    }
}

/// What a runner hands back for the generic checks.
struct Outcome {
    results: toml::Value,
    /// Value at the largest dimension, with its standard error when stochastic.
    headline: Option<(Complex64, f64)>,
    /// `|value|` along the dimension list.
    series: Vec<f64>,
    ks: Option<f64>,
    files: Vec<(&'static str, String)>,
}

impl Outcome {
    fn new<T: Serialize>(results: &T) -> Result<Self, CliError> {
        Ok(Outcome {
            results: toml::Value::try_from(results).map_err(|e| CliError::Output(e.to_string()))?,
            headline: None,
            series: vec![],
            ks: None,
            files: vec![],
        })
    }
}

#[derive(Serialize)]
struct MomentRow {
    n: usize,
    estimate: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<usize>,
}

#[derive(Serialize)]
struct StatsRow {
    member: usize,
    family: String,
    fp_fraction: f64,
    tp_fraction: f64,
    grid_fraction: f64,
    stats: PermStats,
}

#[derive(Serialize)]
struct TrafficRow {
    n: usize,
    injective_state: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted: Option<f64>,
}

#[derive(Serialize)]
struct TrafficResults {
    graph: String,
    double_tree: bool,
    congruent_classes: usize,
    rows: Vec<TrafficRow>,
}

#[derive(Serialize)]
struct SpectrumResults {
    n: usize,
    permutation: String,
    ks_distance: f64,
    min_eigenvalue: f64,
    max_eigenvalue: f64,
    second_moment: f64,
    support: f64,
    histogram_dropped: usize,
}

#[derive(Serialize)]
struct NcResults {
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
}

#[derive(Serialize)]
struct Rows<T> {
    rows: Vec<T>,
}

fn perm_stats(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut last = None;
    for n in cfg.sizes()? {
        for (m, sigma) in cfg.family_at(n)?.iter().enumerate() {
            let s = stats(sigma);
            last = Some(Complex64::new(s.fp_fraction(), s.tp_fraction()));
            rows.push(StatsRow {
                member: m + 1,
                family: cfg.family[m].clone(),
                fp_fraction: s.fp_fraction(),
                tp_fraction: s.tp_fraction(),
                grid_fraction: s.grid_fraction(),
                stats: s,
            });
        }
    }
    let mut out = Outcome::new(&Rows { rows })?;
    out.headline = last.map(|v| (v, 0.0));
    Ok(out)
}

fn condition(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let beta = cfg.entry_spec()?.beta();
    let sizes = cfg.sizes()?;
    let members = cfg.family.len();
    let report = condition_report(members, beta, &sizes, |m, n| {
        cfg.permutation(m, n).map_err(|e| permwig::Error::InvalidParameter(e.to_string()))
    })?;
    let last = members - 1;
    let headline = report.trend(0, last).last().map(|p| (p.predicted_k, 0.0));
    let series = report.trend(0, last).iter().map(|p| p.predicted_k.norm()).collect();
    let pairs: Vec<PairReport> = report.pairs;
    let mut out = Outcome::new(&Rows { rows: pairs })?;
    out.headline = headline;
    out.series = series;
    Ok(out)
}

fn moments(cfg: &ExperimentConfig, exact: bool) -> Result<Outcome, CliError> {
    let spec = cfg.entry_spec()?;
    let word = cfg.word()?;
    let mut rows = Vec::new();
    for n in cfg.sizes()? {
        let perms = cfg.family_at(n)?;
        rows.push(if exact {
            MomentRow {
                n,
                estimate: trace_moment_exact(&spec, &perms, &word, n)?,
                stderr: None,
                trials: None,
            }
        } else {
            let est = trace_moment_mc(&spec, &perms, &word, n, cfg.trials(), cfg.seed)?;
            MomentRow {
                n,
                estimate: est.estimate,
                stderr: Some(est.stderr),
                trials: Some(est.trials),
            }
        });
    }
    let headline = rows.last().map(|r| (r.estimate, r.stderr.unwrap_or(0.0)));
    let series = rows.iter().map(|r| r.estimate.norm()).collect();
    let mut out = Outcome::new(&Rows { rows })?;
    out.headline = headline;
    out.series = series;
    Ok(out)
}

fn traffic(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spec = cfg.entry_spec()?;
    let graph = cfg.graph.as_ref().expect("validated").build()?;
    let report = classify_double_tree(&graph);
    let beta = spec.beta();
    let mut rows = Vec::new();
    for n in cfg.sizes()? {
        let perms = cfg.family_at(n)?;
        // covariance read off the permutations at this N, real beta only
        let predicted = if beta.im == 0.0 {
            let m = perms.len();
            let mut k = vec![vec![0.0; m]; m];
            let mut j = vec![vec![0.0; m]; m];
            for a in 0..m {
                for b in 0..m {
                    let p = permwig::perm::pair_report(a, b, &perms[a], &perms[b], beta)?;
                    k[a][b] = p.predicted_k.re;
                    j[a][b] = p.predicted_j.re;
                }
            }
            Some(predicted_injective(&graph, &CovarianceSpec::new(k, j)?)?)
        } else {
            None
        };
        rows.push(TrafficRow {
            n,
            injective_state: expected_injective_traffic(&graph, &spec, &perms, n)?,
            predicted,
        });
    }
    let headline = rows.last().map(|r| (r.injective_state, 0.0));
    let series = rows.iter().map(|r| r.injective_state.norm()).collect();
    let mut out = Outcome::new(&TrafficResults {
        graph: graph.to_text(),
        double_tree: report.is_double_tree,
        congruent_classes: report.congruent_count(),
        rows,
    })?;
    out.headline = headline;
    out.series = series;
    Ok(out)
}

fn spectrum(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spec = cfg.entry_spec()?;
    let n = cfg.sizes()?[0];
    let perms = cfg.family_at(n)?;
    let sample = anticommutator_spectrum(&spec, &perms[0], &perms[1], n, cfg.seed)?;
    let ev = &sample.eigenvalues;
    let ks = ks_distance(ev, nu_sp_cdf)?;
    let s = nu_sp_support();
    let range = (-s.max(-ev[0]), s.max(ev[ev.len() - 1]));
    let hist = histogram(ev, cfg.bins.unwrap_or(DEFAULT_BINS), Some(range))?;
    let mut hist_csv = Vec::new();
    write_two_column(&mut hist_csv, ("x", "density"), hist.centers().into_iter().zip(hist.density.iter().copied()))?;
    let mut dens_csv = Vec::new();
    let grid = (0..=400).map(|i| {
        let x = -s + 2.0 * s * i as f64 / 400.0;
        (x, nu_sp_density(x))
    });
    write_two_column(&mut dens_csv, ("x", "density"), grid)?;
    let mut out = Outcome::new(&SpectrumResults {
        n,
        permutation: sample.permutation.clone(),
        ks_distance: ks,
        min_eigenvalue: ev[0],
        max_eigenvalue: ev[ev.len() - 1],
        second_moment: ev.iter().map(|x| x * x).sum::<f64>() / n as f64,
        support: s,
        histogram_dropped: hist.dropped,
    })?;
    out.ks = Some(ks);
    out.files = vec![
        ("histogram.csv", String::from_utf8(hist_csv).expect("ascii")),
        ("density.csv", String::from_utf8(dens_csv).expect("ascii")),
    ];
    Ok(out)
}

fn nc_moment(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let res = if !cfg.operator_word.is_empty() {
        let r = a1a2_example_moment(&cfg.operator_word)?;
        NcResults {
            value: r.to_f64(),
            exact: Some(r.to_string()),
        }
    } else {
        let word = cfg.word()?;
        NcResults {
            value: semicircular_moment(word.labels(), &cfg.covariance()?)?,
            exact: None,
        }
    };
    let v = res.value;
    let mut out = Outcome::new(&res)?;
    out.headline = Some((Complex64::new(v, 0.0), 0.0));
    Ok(out)
}

fn checks(cfg: &ExperimentConfig, out: &Outcome) -> Result<Vec<CheckOutcome>, CliError> {
    let c = &cfg.check;
    let mut v = Vec::new();
    if let Some([re, im]) = c.target {
        let (value, se) = out
            .headline
            .ok_or_else(|| CliError::Config(format!("{} has no value to compare with a target", cfg.experiment.name())))?;
        let tol = c.abs_tol.unwrap_or(0.0).max(c.se_mult.unwrap_or(0.0) * se);
        let dist = (value - Complex64::new(re, im)).norm();
        v.push(CheckOutcome {
            name: "target".into(),
            value: dist,
            tolerance: tol,
            pass: dist <= tol,
        });
    }
    if let Some(max) = c.ks_max {
        let ks = out
            .ks
            .ok_or_else(|| CliError::Config("ks_max applies to spectrum runs only".into()))?;
        v.push(CheckOutcome {
            name: "ks_distance".into(),
            value: ks,
            tolerance: max,
            pass: ks <= max,
        });
    }
    if c.nonincreasing {
        let worst = out.series.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        v.push(CheckOutcome {
            name: "nonincreasing".into(),
            value: worst,
            tolerance: 0.0,
            pass: worst <= 0.0,
        });
    }
    Ok(v)
}

/// Runs one experiment. Nothing is written; see [`write_outputs`].
pub fn run(cfg: &ExperimentConfig) -> Result<(Report, Vec<(&'static str, String)>), CliError> {
    cfg.validate()?;
    let out = match cfg.experiment {
        Experiment::PermStats => perm_stats(cfg)?,
        Experiment::ConditionReport => condition(cfg)?,
        Experiment::MomentMc => moments(cfg, false)?,
        Experiment::MomentExact => moments(cfg, true)?,
        Experiment::TrafficCheck => traffic(cfg)?,
        Experiment::Spectrum => spectrum(cfg)?,
        Experiment::NcMoment => nc_moment(cfg)?,
    };
    let checks = checks(cfg, &out)?;
    let report = Report {
        provenance: Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            operation: cfg.experiment.name(),
            seed: cfg.seed,
        },
        // the output location is not an input
        input: ExperimentConfig {
            out: None,
            ..cfg.clone()
        },
        results: out.results,
        checks,
    };
    Ok((report, out.files))
}

/// Writes `result.toml` and any CSVs into `dir`.
pub fn write_outputs(dir: &Path, report: &Report, files: &[(&'static str, String)]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Output(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("result.toml"), report.to_toml()).map_err(io)?;
    for (name, body) in files {
        fs::write(dir.join(name), body).map_err(io)?;
    }
    Ok(())
}
