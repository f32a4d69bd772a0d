//! Laws of a single matrix entry.
//!
//! Off-diagonal entries are complex, centered, of unit variance `E|X|^2 = 1` and
//! pseudovariance `E[X^2] = beta`. Diagonal entries are real and centered. Every
//! law carries an exact table of mixed moments `E[X^p conj(X)^q]`, which is what
//! the exact expectation oracles in [`crate::wigner`] and [`crate::traffic`] consume.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 8;

const TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Gaussian,
    RademacherReal,
    /// `(X + iX)/sqrt(2)` with `X = ±1`, pseudovariance `i`.
    RademacherComplexXix,
    /// Finite atomic law given by `(value, weight)` pairs.
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagKind {
    GaussianReal,
    RademacherReal,
}

/// Serializable form of an [`EntrySpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryConfig {
    pub kind: EntryKind,
    /// `[re, im]`; ignored for the Rademacher kinds and for tables.
    #[serde(default)]
    pub beta: [f64; 2],
    #[serde(default = "default_diag_kind")]
    pub diag_kind: DiagKind,
    #[serde(default = "default_diag_variance")]
    pub diag_variance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Atoms `[re, im, weight]` for `kind = "table"`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
}

fn default_diag_kind() -> DiagKind {
    DiagKind::GaussianReal
}

fn default_diag_variance() -> f64 {
    1.0
}

#[derive(Clone, Debug)]
pub struct EntrySpec {
    kind: EntryKind,
    beta: Complex64,
    diag_kind: DiagKind,
    diag_variance: f64,
    atoms: Vec<(Complex64, f64)>,
    max_order: usize,
    // moments[p][q] = E[X^p conj(X)^q] for p + q <= max_order
    moments: Vec<Vec<Complex64>>,
    diag_moments: Vec<f64>,
    moment_bounds: Vec<f64>,
}

impl EntrySpec {
    /// Complex Gaussian entry with pseudovariance `beta`, `|beta| <= 1`.
    pub fn gaussian(beta: Complex64) -> Result<Self> {
        if !(beta.re.is_finite() && beta.im.is_finite()) || beta.norm() > 1.0 + TOL {
            return Err(Error::InvalidSpec(format!(
                "pseudovariance {beta} must lie in the closed unit disc"
            )));
        }
        Self::build(EntryKind::Gaussian, beta, Vec::new())
    }

    pub fn gaussian_real_beta(beta: f64) -> Result<Self> {
        Self::gaussian(Complex64::new(beta, 0.0))
    }

    pub fn rademacher_real() -> Self {
        Self::build(EntryKind::RademacherReal, Complex64::new(1.0, 0.0), Vec::new())
            .expect("fixed law is valid")
    }

    pub fn rademacher_complex_xix() -> Self {
        Self::build(
            EntryKind::RademacherComplexXix,
            Complex64::new(0.0, 1.0),
            Vec::new(),
        )
        .expect("fixed law is valid")
    }

    /// Atomic law. Weights must be positive and sum to one; the law must be
    /// centered with unit variance. The pseudovariance is derived.
    pub fn table(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidSpec("table law has no atoms".into()));
        }
        if atoms.iter().any(|&(x, w)| !(w > 0.0) || !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::InvalidSpec("table weights must be positive and finite".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSpec(format!("table weights sum to {total}, not 1")));
        }
        let mean: Complex64 = atoms.iter().map(|&(x, w)| x * w).sum();
        if mean.norm() > 1e-9 {
            return Err(Error::InvalidSpec(format!("table law has mean {mean}, not 0")));
        }
        let var: f64 = atoms.iter().map(|&(x, w)| x.norm_sqr() * w).sum();
        if (var - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSpec(format!("table law has variance {var}, not 1")));
        }
        let beta: Complex64 = atoms.iter().map(|&(x, w)| x * x * w).sum();
        Self::build(EntryKind::Table, beta, atoms)
    }

    pub fn with_diagonal(mut self, kind: DiagKind, variance: f64) -> Result<Self> {
        if !(variance >= 0.0) || !variance.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "diagonal variance {variance} must be finite and nonnegative"
            )));
        }
        self.diag_kind = kind;
        self.diag_variance = variance;
        self.refresh_tables();
        Ok(self)
    }

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self.refresh_tables();
        self
    }

    fn build(kind: EntryKind, beta: Complex64, atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        let mut spec = EntrySpec {
            kind,
            beta,
            diag_kind: DiagKind::GaussianReal,
            diag_variance: 1.0,
            atoms,
            max_order: DEFAULT_MAX_ORDER,
            moments: Vec::new(),
            diag_moments: Vec::new(),
            moment_bounds: Vec::new(),
        };
        spec.refresh_tables();
        Ok(spec)
    }

    fn refresh_tables(&mut self) {
        let m = self.max_order;
        self.moments = (0..=m)
            .map(|p| (0..=m - p).map(|q| self.compute_mixed_moment(p, q)).collect())
            .collect();
        self.diag_moments = (0..=m).map(|k| self.compute_diag_moment(k)).collect();
        self.moment_bounds = (0..=m).map(|l| self.compute_moment_bound(l)).collect();
    }

    fn compute_mixed_moment(&self, p: usize, q: usize) -> Complex64 {
        match self.kind {
            EntryKind::Gaussian => wick_moment(p, q, self.beta),
            EntryKind::RademacherReal => {
                if (p + q) % 2 == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            EntryKind::RademacherComplexXix => {
                // X = eps * e^{i pi/4}, so X^p conj(X)^q = eps^{p+q} e^{i pi (p-q)/4}
                if (p + q) % 2 == 0 {
                    let angle = std::f64::consts::FRAC_PI_4 * (p as f64 - q as f64);
                    Complex64::from_polar(1.0, angle)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            EntryKind::Table => self
                .atoms
                .iter()
                .map(|&(x, w)| x.powu(p as u32) * x.conj().powu(q as u32) * w)
                .sum(),
        }
    }

    fn compute_diag_moment(&self, k: usize) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        let scale = self.diag_variance.powi(k as i32 / 2);
        match self.diag_kind {
            DiagKind::GaussianReal => scale * double_factorial(k as i64 - 1),
            DiagKind::RademacherReal => scale,
        }
    }

    // Upper bound on E|entry|^l over both diagonal and off-diagonal entries.
    fn compute_moment_bound(&self, l: usize) -> f64 {
        let off = match self.kind {
            // |X|^2 = a G1^2 + b G2^2 with a + b = 1; convexity of t -> t^{l/2}
            // bounds E|X|^l by E|G|^l for l >= 2, Jensen gives E|X| <= 1.
            EntryKind::Gaussian => {
                if l < 2 {
                    1.0
                } else {
                    abs_gaussian_moment(l)
                }
            }
            EntryKind::RademacherReal | EntryKind::RademacherComplexXix => 1.0,
            EntryKind::Table => self
                .atoms
                .iter()
                .map(|&(x, w)| x.norm().powi(l as i32) * w)
                .sum(),
        };
        let diag = self.diag_variance.powf(l as f64 / 2.0)
            * match self.diag_kind {
                DiagKind::GaussianReal => abs_gaussian_moment(l),
                DiagKind::RademacherReal => 1.0,
            };
        off.max(diag)
    }

    pub fn kind(&self) -> EntryKind {
        self.kind
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn diag_kind(&self) -> DiagKind {
        self.diag_kind
    }

    pub fn diag_variance(&self) -> f64 {
        self.diag_variance
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `m_l` for `l = 0..=max_order`.
    pub fn moment_bounds(&self) -> &[f64] {
        &self.moment_bounds
    }

    pub fn atoms(&self) -> &[(Complex64, f64)] {
        &self.atoms
    }

    /// True when every off-diagonal sample is real.
    pub fn is_real(&self) -> bool {
        match self.kind {
            EntryKind::Gaussian => self.beta.im == 0.0 && self.beta.re == 1.0,
            EntryKind::RademacherReal => true,
            EntryKind::RademacherComplexXix => false,
            EntryKind::Table => self.atoms.iter().all(|a| a.0.im == 0.0),
        }
    }

    /// Exact `E[X^p conj(X)^q]` of an off-diagonal entry.
    pub fn mixed_moment(&self, p: usize, q: usize) -> Result<Complex64> {
        if p + q > self.max_order {
            return Err(Error::OrderExceeded {
                order: p + q,
                cap: self.max_order,
            });
        }
        Ok(self.moments[p][q])
    }

    /// Exact `E[D^k]` of a diagonal entry.
    pub fn diagonal_moment(&self, k: usize) -> Result<f64> {
        if k > self.max_order {
            return Err(Error::OrderExceeded {
                order: k,
                cap: self.max_order,
            });
        }
        Ok(self.diag_moments[k])
    }

    pub fn sample_entry<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match self.kind {
            EntryKind::Gaussian => {
                let g1: f64 = StandardNormal.sample(rng);
                let g2: f64 = StandardNormal.sample(rng);
                if self.beta.im == 0.0 {
                    let b = self.beta.re;
                    Complex64::new(((1.0 + b) / 2.0).sqrt() * g1, ((1.0 - b) / 2.0).sqrt() * g2)
                } else {
                    let r = self.beta.norm();
                    let half = Complex64::from_polar(1.0, self.beta.arg() / 2.0);
                    half * Complex64::new(((1.0 + r) / 2.0).sqrt() * g1, ((1.0 - r) / 2.0).sqrt() * g2)
                }
            }
            EntryKind::RademacherReal => Complex64::new(rademacher(rng), 0.0),
            EntryKind::RademacherComplexXix => {
                let x = rademacher(rng) * std::f64::consts::FRAC_1_SQRT_2;
                Complex64::new(x, x)
            }
            EntryKind::Table => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(x, w) in &self.atoms {
                    acc += w;
                    if u < acc {
                        return x;
                    }
                }
                self.atoms[self.atoms.len() - 1].0
            }
        }
    }

    pub fn sample_diagonal<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let sd = self.diag_variance.sqrt();
        match self.diag_kind {
            DiagKind::GaussianReal => {
                let g: f64 = StandardNormal.sample(rng);
                sd * g
            }
            DiagKind::RademacherReal => sd * rademacher(rng),
        }
    }

    pub fn from_config(cfg: &EntryConfig) -> Result<Self> {
        let spec = match cfg.kind {
            EntryKind::Gaussian => Self::gaussian(Complex64::new(cfg.beta[0], cfg.beta[1]))?,
            EntryKind::RademacherReal => Self::rademacher_real(),
            EntryKind::RademacherComplexXix => Self::rademacher_complex_xix(),
            EntryKind::Table => Self::table(
                cfg.atoms
                    .iter()
                    .map(|a| (Complex64::new(a[0], a[1]), a[2]))
                    .collect(),
            )?,
        };
        let spec = spec.with_diagonal(cfg.diag_kind, cfg.diag_variance)?;
        Ok(match cfg.max_order {
            Some(m) => spec.with_max_order(m),
            None => spec,
        })
    }

    pub fn to_config(&self, seed: Option<u64>) -> EntryConfig {
        EntryConfig {
            kind: self.kind,
            beta: [self.beta.re, self.beta.im],
            diag_kind: self.diag_kind,
            diag_variance: self.diag_variance,
            seed,
            atoms: self.atoms.iter().map(|&(x, w)| [x.re, x.im, w]).collect(),
            max_order: (self.max_order != DEFAULT_MAX_ORDER).then_some(self.max_order),
        }
    }
}

fn rademacher<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// `E|G|^l` for a standard real Gaussian.
fn abs_gaussian_moment(l: usize) -> f64 {
    if l % 2 == 0 {
        double_factorial(l as i64 - 1)
    } else {
        let k = (l - 1) / 2;
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        2f64.powi(k as i32) * fact * (2.0 / std::f64::consts::PI).sqrt()
    }
}

/// Wick sum over all pairings of `p` copies of `X` and `q` copies of `conj(X)`,
/// with `E[X X] = beta`, `E[conj X conj X] = conj(beta)`, `E[X conj X] = 1`.
fn wick_moment(p: usize, q: usize, beta: Complex64) -> Complex64 {
    let mut symbols: Vec<bool> = Vec::with_capacity(p + q);
    symbols.extend(std::iter::repeat(true).take(p));
    symbols.extend(std::iter::repeat(false).take(q));
    wick_pairings(&mut symbols, beta)
}

fn wick_pairings(symbols: &mut Vec<bool>, beta: Complex64) -> Complex64 {
    if symbols.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    if symbols.len() % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let first = symbols[0];
    let mut total = Complex64::new(0.0, 0.0);
    for partner in 1..symbols.len() {
        let other = symbols[partner];
        let value = match (first, other) {
            (true, true) => beta,
            (false, false) => beta.conj(),
            _ => Complex64::new(1.0, 0.0),
        };
        if value == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut rest: Vec<bool> = symbols
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 0 && i != partner)
            .map(|(_, &s)| s)
            .collect();
        total += value * wick_pairings(&mut rest, beta);
    }
    total
}
