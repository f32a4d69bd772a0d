use std::path::{Path, PathBuf};

use permwig::free::OpMatrix;
use permwig::perm::TABLE_MAX_N;
use permwig::traffic::Edge;
use permwig::wigner::MAX_N;
use permwig::{CovarianceSpec, EntryConfig, EntryPermutation, EntrySpec, NamedFamily, TestGraph, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    PermStats,
    ConditionReport,
    MomentMc,
    MomentExact,
    TrafficCheck,
    Spectrum,
    NcMoment,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::PermStats,
        Experiment::ConditionReport,
        Experiment::MomentMc,
        Experiment::MomentExact,
        Experiment::TrafficCheck,
        Experiment::Spectrum,
        Experiment::NcMoment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::PermStats => "perm_stats",
            Experiment::ConditionReport => "condition_report",
            Experiment::MomentMc => "moment_mc",
            Experiment::MomentExact => "moment_exact",
            Experiment::TrafficCheck => "traffic_check",
            Experiment::Spectrum => "spectrum",
            Experiment::NcMoment => "nc_moment",
        }
    }
}

/// A test graph with 1-based `[src, tgt, label]` edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    pub vertices: usize,
    pub edges: Vec<[usize; 3]>,
}

impl GraphConfig {
    pub fn build(&self) -> Result<TestGraph, CliError> {
        let edges = self
            .edges
            .iter()
            .map(|&[s, t, l]| {
                if s == 0 || t == 0 || l == 0 {
                    return Err(CliError::Config("graph edges are 1-based".into()));
                }
                Ok(Edge {
                    src: s - 1,
                    tgt: t - 1,
                    label: l - 1,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TestGraph::new(self.vertices, edges)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceConfig {
    pub k: Vec<Vec<f64>>,
    /// Defaults to `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<f64>>>,
}

/// Declared tolerance checks. Each applies to the experiment's headline value
/// at the largest dimension.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    /// `[re, im]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    /// Multiple of the standard error added to the allowance for stochastic values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_mult: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_max: Option<f64>,
    /// `|value|` must not increase along the dimension list.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nonincreasing: bool,
}

impl Check {
    pub fn is_empty(&self) -> bool {
        self == &Check::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_list: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// 1-based labels into `family`, or into the covariance for `nc_moment`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub word: Vec<usize>,
    /// Named families (`rho`, `zeta(2)`, ...), `random`, or `table:PATH`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub family: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operator_word: Vec<OpMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry: Option<EntryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<CovarianceConfig>,
    #[serde(default, skip_serializing_if = "Check::is_empty")]
    pub check: Check,
}

pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_BINS: usize = 80;

#[derive(Clone, Debug)]
pub enum Member {
    Named(NamedFamily),
    Random,
    Table(PathBuf),
}

impl Member {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if s == "random" {
            return Ok(Member::Random);
        }
        if let Some(p) = s.strip_prefix("table:") {
            return Ok(Member::Table(PathBuf::from(p)));
        }
        s.parse::<NamedFamily>()
            .map(Member::Named)
            .map_err(|e| CliError::Config(format!("family member `{s}`: {e}")))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    /// `n_list`, or `[n]` when only `n` is given.
    pub fn sizes(&self) -> Result<Vec<usize>, CliError> {
        let sizes = match (&self.n, self.n_list.is_empty()) {
            (Some(_), false) => return Err(CliError::Config("give either `n` or `n_list`, not both".into())),
            (Some(n), true) => vec![*n],
            (None, false) => self.n_list.clone(),
            (None, true) => return Err(CliError::Config("missing `n` or `n_list`".into())),
        };
        if let Some(&bad) = sizes.iter().find(|&&n| n == 0 || n > MAX_N) {
            return Err(CliError::Config(format!("dimension {bad} outside 1..={MAX_N}")));
        }
        Ok(sizes)
    }

    pub fn members(&self) -> Result<Vec<Member>, CliError> {
        self.family.iter().map(|s| Member::parse(s)).collect()
    }

    /// Builds member `m` of the family at dimension `n`. Random members draw
    /// from a stream keyed by the member index.
    pub fn permutation(&self, m: usize, n: usize) -> Result<EntryPermutation, CliError> {
        let members = self.members()?;
        let member = members
            .get(m)
            .ok_or_else(|| CliError::Config(format!("family has no member {}", m + 1)))?;
        Ok(match member {
            Member::Named(f) => EntryPermutation::named(*f, n)?,
            Member::Random => {
                if n > TABLE_MAX_N {
                    return Err(CliError::Config(format!("random members need n <= {TABLE_MAX_N}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(1 + m as u64);
                EntryPermutation::random_symmetric(n, &mut rng)?
            }
            Member::Table(path) => {
                let f = std::fs::File::open(path)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                let p = EntryPermutation::read_table(std::io::BufReader::new(f))?;
                if p.n() != n {
                    return Err(CliError::Config(format!(
                        "{} has dimension {}, experiment wants {n}",
                        path.display(),
                        p.n()
                    )));
                }
                p
            }
        })
    }

    pub fn family_at(&self, n: usize) -> Result<Vec<EntryPermutation>, CliError> {
        (0..self.family.len()).map(|m| self.permutation(m, n)).collect()
    }

    pub fn entry_spec(&self) -> Result<EntrySpec, CliError> {
        let cfg = self
            .entry
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [entry] section".into()))?;
        Ok(EntrySpec::from_config(cfg)?)
    }

    pub fn word(&self) -> Result<Word, CliError> {
        Word::from_one_based(&self.word).map_err(|e| CliError::Config(format!("word: {e}")))
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    pub fn covariance(&self) -> Result<CovarianceSpec, CliError> {
        let c = self
            .covariance
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [covariance] section".into()))?;
        Ok(CovarianceSpec::new(c.k.clone(), c.j.clone().unwrap_or_else(|| c.k.clone()))?)
    }

    /// Static checks that need no heavy computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let need_family = |min: usize| -> Result<(), CliError> {
            if self.family.len() < min {
                return Err(CliError::Config(format!(
                    "{} needs at least {min} family member(s)",
                    self.experiment.name()
                )));
            }
            self.members().map(|_| ())
        };
        let word_in_family = || -> Result<(), CliError> {
            let w = self.word()?;
            if w.max_label() >= self.family.len() {
                return Err(CliError::Config(format!(
                    "word label {} exceeds family size {}",
                    w.max_label() + 1,
                    self.family.len()
                )));
            }
            Ok(())
        };
        match self.experiment {
            Experiment::PermStats => {
                self.sizes()?;
                need_family(1)?;
            }
            Experiment::ConditionReport => {
                self.sizes()?;
                need_family(1)?;
                self.entry_spec()?;
            }
            Experiment::MomentMc | Experiment::MomentExact => {
                self.sizes()?;
                need_family(1)?;
                self.entry_spec()?;
                word_in_family()?;
                if self.experiment == Experiment::MomentMc && self.trials() < 2 {
                    return Err(CliError::Config("trials must be at least 2".into()));
                }
            }
            Experiment::TrafficCheck => {
                self.sizes()?;
                need_family(1)?;
                self.entry_spec()?;
                let g = self
                    .graph
                    .as_ref()
                    .ok_or_else(|| CliError::Config("missing [graph] section".into()))?
                    .build()?;
                if g.max_label().is_some_and(|l| l >= self.family.len()) {
                    return Err(CliError::Config("graph label exceeds family size".into()));
                }
            }
            Experiment::Spectrum => {
                let sizes = self.sizes()?;
                if sizes.len() != 1 {
                    return Err(CliError::Config("spectrum takes a single `n`".into()));
                }
                if self.family.len() != 2 {
                    return Err(CliError::Config("spectrum needs exactly two family members".into()));
                }
                self.members()?;
                self.entry_spec()?;
                if self.bins == Some(0) {
                    return Err(CliError::Config("bins must be positive".into()));
                }
            }
            Experiment::NcMoment => match (self.operator_word.is_empty(), self.word.is_empty()) {
                (false, true) => {}
                (true, false) => {
                    let cov = self.covariance()?;
                    if self.word()?.max_label() >= cov.labels() {
                        return Err(CliError::Config("word label exceeds covariance size".into()));
                    }
                }
                _ => {
                    return Err(CliError::Config(
                        "nc_moment takes exactly one of `word` (with [covariance]) or `operator_word`".into(),
                    ))
                }
            },
        }
        Ok(())
    }
}
