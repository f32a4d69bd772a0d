//! Built-in experiment recipes.

use permwig::free::OpMatrix;
use permwig::{DiagKind, EntryConfig, EntryKind};

use crate::config::{Check, CovarianceConfig, Experiment, ExperimentConfig, GraphConfig};
use crate::CliError;

pub struct Recipe {
    pub name: &'static str,
    /// What the run reproduces.
    pub about: &'static str,
    pub config: ExperimentConfig,
}

fn gaussian(re: f64, im: f64) -> EntryConfig {
    EntryConfig {
        kind: EntryKind::Gaussian,
        beta: [re, im],
        diag_kind: DiagKind::GaussianReal,
        diag_variance: 1.0,
        seed: None,
        atoms: vec![],
        max_order: None,
    }
}

fn rademacher() -> EntryConfig {
    EntryConfig {
        kind: EntryKind::RademacherReal,
        beta: [1.0, 0.0],
        diag_kind: DiagKind::RademacherReal,
        ..gaussian(1.0, 0.0)
    }
}

fn base(experiment: Experiment, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        experiment,
        seed,
        n: None,
        n_list: vec![],
        trials: None,
        word: vec![],
        family: vec![],
        operator_word: vec![],
        bins: None,
        out: None,
        entry: None,
        graph: None,
        covariance: None,
        check: Check::default(),
    }
}

fn family(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn moment(names: &[&str], word: &[usize], entry: EntryConfig, target: [f64; 2], seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        n: Some(1000),
        trials: Some(50),
        word: word.to_vec(),
        family: family(names),
        entry: Some(entry),
        check: Check {
            target: Some(target),
            abs_tol: Some(0.03),
            se_mult: Some(3.0),
            ..Check::default()
        },
        ..base(Experiment::MomentMc, seed)
    }
}

fn spectrum(names: &[&str], entry: EntryConfig, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        n: Some(2000),
        family: family(names),
        entry: Some(entry),
        bins: Some(80),
        check: Check {
            ks_max: Some(0.04),
            ..Check::default()
        },
        ..base(Experiment::Spectrum, seed)
    }
}

pub fn all() -> Vec<Recipe> {
    vec![
        Recipe {
            name: "rho-fourth-moment",
            about: "tr(W W^rho W W^rho) at beta = 1 tends to 2(b^2+b+1)/3 = 2",
            config: moment(&["identity", "rho"], &[1, 2, 1, 2], gaussian(1.0, 0.0), [2.0, 0.0], 1001),
        },
        Recipe {
            name: "rho-stats",
            about: "rho fixes and transposes half of the entries each",
            config: ExperimentConfig {
                n_list: vec![100, 1000],
                family: family(&["rho"]),
                check: Check {
                    target: Some([0.5, 0.5]),
                    abs_tol: Some(0.002),
                    ..Check::default()
                },
                ..base(Experiment::PermStats, 1002)
            },
        },
        Recipe {
            name: "rho-exact-small",
            about: "exact fourth mixed moment of identity and rho at N = 4",
            config: ExperimentConfig {
                n: Some(4),
                word: vec![1, 2, 1, 2],
                family: family(&["identity", "rho"]),
                entry: Some(gaussian(1.0, 0.0)),
                ..base(Experiment::MomentExact, 1003)
            },
        },
        Recipe {
            name: "eta-counterexample",
            about: "eta has no fixed or transposed points, yet tr(W W^eta W W^eta) tends to b^2/3",
            config: moment(&["identity", "eta"], &[1, 2, 1, 2], gaussian(1.0, 0.0), [1.0 / 3.0, 0.0], 1004),
        },
        Recipe {
            name: "eta-stats",
            about: "eta avoids fixed and transposed points",
            config: ExperimentConfig {
                n: Some(1000),
                family: family(&["eta"]),
                check: Check {
                    target: Some([0.0, 0.0]),
                    abs_tol: Some(0.0),
                    ..Check::default()
                },
                ..base(Experiment::PermStats, 1005)
            },
        },
        Recipe {
            name: "transpose-moments",
            about: "tr(W W W^T W^T) at beta = i tends to 1 + 2/3 - 1/3 = 4/3",
            config: moment(&["identity", "transpose"], &[1, 1, 2, 2], gaussian(0.0, 1.0), [4.0 / 3.0, 0.0], 1006),
        },
        Recipe {
            name: "a1a2",
            about: "operator-matrix moment of A1 A1 A2 A2 equals 29/27",
            config: ExperimentConfig {
                operator_word: vec![OpMatrix::A1, OpMatrix::A1, OpMatrix::A2, OpMatrix::A2],
                check: Check {
                    target: Some([29.0 / 27.0, 0.0]),
                    abs_tol: Some(1e-12),
                    ..Check::default()
                },
                ..base(Experiment::NcMoment, 1007)
            },
        },
        Recipe {
            name: "semicircle-fourth",
            about: "fourth moment of a standard semicircular variable is 2",
            config: ExperimentConfig {
                word: vec![1, 1, 1, 1],
                covariance: Some(CovarianceConfig {
                    k: vec![vec![1.0]],
                    j: None,
                }),
                check: Check {
                    target: Some([2.0, 0.0]),
                    abs_tol: Some(1e-12),
                    ..Check::default()
                },
                ..base(Experiment::NcMoment, 1008)
            },
        },
        Recipe {
            name: "spectrum-zeta",
            about: "anticommutator spectrum for zeta(2) at beta = -1 follows the symmetric Poisson law",
            config: spectrum(&["identity", "zeta(2)"], gaussian(-1.0, 0.0), 1009),
        },
        Recipe {
            name: "spectrum-zeta-3",
            about: "anticommutator spectrum for zeta(3) at beta = -1/2 follows the symmetric Poisson law",
            config: spectrum(&["identity", "zeta(3)"], gaussian(-0.5, 0.0), 1010),
        },
        Recipe {
            name: "spectrum-anti-transpose",
            about: "anticommutator spectrum for the anti-transpose with real Rademacher entries",
            config: spectrum(&["identity", "anti_transpose"], rademacher(), 1011),
        },
        Recipe {
            name: "identity-transpose-conditions",
            about: "fixed, transposed and grid proportions for identity and transpose",
            config: ExperimentConfig {
                n_list: vec![100, 200, 400],
                family: family(&["identity", "transpose"]),
                entry: Some(gaussian(0.5, 0.0)),
                check: Check {
                    target: Some([0.5, 0.0]),
                    abs_tol: Some(0.01),
                    ..Check::default()
                },
                ..base(Experiment::ConditionReport, 1012)
            },
        },
        Recipe {
            name: "zeta-covariance",
            about: "opposing two-vertex state for identity and zeta(2) at beta = 1/2 tends to 1/2 + beta/2",
            config: ExperimentConfig {
                n: Some(500),
                family: family(&["identity", "zeta(2)"]),
                entry: Some(gaussian(0.5, 0.0)),
                graph: Some(GraphConfig {
                    vertices: 2,
                    edges: vec![[2, 1, 1], [1, 2, 2]],
                }),
                check: Check {
                    target: Some([0.75, 0.0]),
                    abs_tol: Some(0.05),
                    ..Check::default()
                },
                ..base(Experiment::TrafficCheck, 1013)
            },
        },
        Recipe {
            name: "anti-transpose-trend",
            about: "three-vertex path state for identity and anti-transpose decays in N",
            config: ExperimentConfig {
                n_list: vec![20, 40, 80],
                family: family(&["identity", "anti_transpose"]),
                entry: Some(gaussian(0.5, 0.0)),
                graph: Some(GraphConfig {
                    vertices: 3,
                    edges: vec![[2, 1, 1], [3, 2, 2]],
                }),
                check: Check {
                    target: Some([0.0, 0.0]),
                    abs_tol: Some(0.1),
                    nonincreasing: true,
                    ..Check::default()
                },
                ..base(Experiment::TrafficCheck, 1014)
            },
        },
    ]
}

pub fn find(name: &str) -> Result<Recipe, CliError> {
    all()
        .into_iter()
        .find(|r| r.name == name)
        .ok_or_else(|| CliError::Config(format!("unknown recipe `{name}` (see `permwig recipes`)")))
}
