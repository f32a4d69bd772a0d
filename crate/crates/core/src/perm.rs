//! Symmetric permutations of the entry set `[N]^2`.
//!
//! A permutation is symmetric when it commutes with the transpose
//! `(j, k) -> (k, j)`; permuting the entries of a Hermitian matrix by such a map
//! yields a Hermitian matrix again. Indices are 0-based in the API and 1-based in
//! table files and error messages.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension for which a permutation may be materialized as a table.
pub const TABLE_MAX_N: usize = 2048;

/// Closed-form permutation families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum NamedFamily {
    Identity,
    Transpose,
    /// Transpose with respect to the anti-diagonal: `(j, k) -> (N+1-k, N+1-j)`.
    AntiTranspose,
    /// Fixes `(j, k)` when `max(j, k)` is odd, transposes it otherwise.
    Rho,
    /// Cyclic shift of the entries above the diagonal within each column,
    /// moved to the transposed side. See [`eta_forward`] for boundary handling.
    Eta,
    /// Fixes `(j, k)` when `n | j + k`, transposes it otherwise.
    Zeta { n: u32 },
}

impl NamedFamily {
    pub fn is_involution(self) -> bool {
        !matches!(self, NamedFamily::Eta)
    }
}

impl fmt::Display for NamedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedFamily::Identity => write!(f, "identity"),
            NamedFamily::Transpose => write!(f, "transpose"),
            NamedFamily::AntiTranspose => write!(f, "anti_transpose"),
            NamedFamily::Rho => write!(f, "rho"),
            NamedFamily::Eta => write!(f, "eta"),
            NamedFamily::Zeta { n } => write!(f, "zeta({n})"),
        }
    }
}

impl FromStr for NamedFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "identity" | "id" => NamedFamily::Identity,
            "transpose" => NamedFamily::Transpose,
            "anti_transpose" | "anti-transpose" => NamedFamily::AntiTranspose,
            "rho" => NamedFamily::Rho,
            "eta" => NamedFamily::Eta,
            _ => {
                let inner = s
                    .strip_prefix("zeta(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown permutation family `{s}`")))?;
                let n: u32 = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad zeta parameter `{inner}`")))?;
                NamedFamily::Zeta { n }
            }
        })
    }
}

#[derive(Debug)]
struct Table {
    fwd: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Clone, Debug)]
enum Rule {
    Named { family: NamedFamily, inverted: bool },
    Table(Arc<Table>, bool),
    /// `outer ∘ inner`
    Composed(Arc<EntryPermutation>, Arc<EntryPermutation>),
}

/// A symmetric bijection of `[N]^2`.
#[derive(Clone, Debug)]
pub struct EntryPermutation {
    n: usize,
    rule: Rule,
}

impl EntryPermutation {
    pub fn named(family: NamedFamily, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if let NamedFamily::Zeta { n: 0 } = family {
            return Err(Error::InvalidParameter("zeta requires n >= 1".into()));
        }
        Ok(EntryPermutation {
            n,
            rule: Rule::Named {
                family,
                inverted: false,
            },
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::named(NamedFamily::Identity, n)
    }

    /// Builds a permutation from its action `images[j * n + k] = sigma(j, k)`
    /// (0-based). Bijectivity and symmetry are checked exhaustively.
    pub fn from_images(n: usize, images: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > TABLE_MAX_N {
            return Err(Error::InvalidParameter(format!(
                "table dimension {n} outside 1..={TABLE_MAX_N}"
            )));
        }
        if images.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: images.len(),
            });
        }
        let mut fwd = vec![0u32; n * n];
        let mut inv = vec![u32::MAX; n * n];
        for (idx, &(a, b)) in images.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::NotBijective(format!(
                    "image ({}, {}) out of range",
                    a + 1,
                    b + 1
                )));
            }
            let target = a * n + b;
            if inv[target] != u32::MAX {
                return Err(Error::NotBijective(format!("({}, {}) is hit twice", a + 1, b + 1)));
            }
            inv[target] = idx as u32;
            fwd[idx] = target as u32;
        }
        for j in 0..n {
            for k in 0..n {
                let (a, b) = images[j * n + k];
                if images[k * n + j] != (b, a) {
                    return Err(Error::Asymmetric { row: j + 1, col: k + 1 });
                }
            }
        }
        Ok(EntryPermutation {
            n,
            rule: Rule::Table(Arc::new(Table { fwd, inv }), false),
        })
    }

    /// Uniformly random symmetric permutation: the diagonal is permuted, and the
    /// unordered off-diagonal classes are permuted with random orientation.
    pub fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > TABLE_MAX_N {
            return Err(Error::InvalidParameter(format!(
                "table dimension {n} outside 1..={TABLE_MAX_N}"
            )));
        }
        let mut images = vec![(0, 0); n * n];
        let mut diag: Vec<usize> = (0..n).collect();
        diag.shuffle(rng);
        for (j, &d) in diag.iter().enumerate() {
            images[j * n + j] = (d, d);
        }
        let classes: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .collect();
        let mut targets = classes.clone();
        targets.shuffle(rng);
        for (&(j, k), &(a, b)) in classes.iter().zip(&targets) {
            let (a, b) = if rng.random::<bool>() { (a, b) } else { (b, a) };
            images[j * n + k] = (a, b);
            images[k * n + j] = (b, a);
        }
        Self::from_images(n, &images)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Family name, when the permutation is a (possibly inverted) closed form.
    pub fn family(&self) -> Option<(NamedFamily, bool)> {
        match self.rule {
            Rule::Named { family, inverted } => Some((family, inverted)),
            _ => None,
        }
    }

    #[inline]
    pub fn apply(&self, j: usize, k: usize) -> (usize, usize) {
        match &self.rule {
            Rule::Named { family, inverted } => eval_named(*family, *inverted, self.n, j, k),
            Rule::Table(t, inverted) => {
                let idx = if *inverted { t.inv[j * self.n + k] } else { t.fwd[j * self.n + k] } as usize;
                (idx / self.n, idx % self.n)
            }
            Rule::Composed(outer, inner) => {
                let (a, b) = inner.apply(j, k);
                outer.apply(a, b)
            }
        }
    }

    #[inline]
    pub fn apply_inverse(&self, j: usize, k: usize) -> (usize, usize) {
        match &self.rule {
            Rule::Named { family, inverted } => eval_named(*family, !*inverted, self.n, j, k),
            Rule::Table(t, inverted) => {
                let idx = if *inverted { t.fwd[j * self.n + k] } else { t.inv[j * self.n + k] } as usize;
                (idx / self.n, idx % self.n)
            }
            Rule::Composed(outer, inner) => {
                let (a, b) = outer.apply_inverse(j, k);
                inner.apply_inverse(a, b)
            }
        }
    }

    pub fn inverse(&self) -> EntryPermutation {
        let rule = match &self.rule {
            Rule::Named { family, inverted } => Rule::Named {
                family: *family,
                inverted: !*inverted,
            },
            Rule::Table(t, inverted) => Rule::Table(Arc::clone(t), !*inverted),
            Rule::Composed(outer, inner) => {
                Rule::Composed(Arc::new(inner.inverse()), Arc::new(outer.inverse()))
            }
        };
        EntryPermutation { n: self.n, rule }
    }

    /// `outer ∘ inner`: applies `inner` first.
    pub fn compose(outer: &EntryPermutation, inner: &EntryPermutation) -> Result<EntryPermutation> {
        if outer.n != inner.n {
            return Err(Error::DimensionMismatch {
                expected: outer.n,
                got: inner.n,
            });
        }
        Ok(EntryPermutation {
            n: outer.n,
            rule: Rule::Composed(Arc::new(outer.clone()), Arc::new(inner.clone())),
        })
    }

    /// The relative permutation `other^{-1} ∘ self` governing the joint law of
    /// `W^self` and `W^other`.
    pub fn relative_to(&self, other: &EntryPermutation) -> Result<EntryPermutation> {
        Self::compose(&other.inverse(), self)
    }

    /// Materializes the permutation as a table (N at most [`TABLE_MAX_N`]).
    pub fn to_table(&self) -> Result<EntryPermutation> {
        let n = self.n;
        if n > TABLE_MAX_N {
            return Err(Error::BudgetExceeded {
                what: "permutation table",
                needed: (n * n) as f64,
                cap: (TABLE_MAX_N * TABLE_MAX_N) as f64,
            });
        }
        let images: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| self.apply(j, k))
            .collect();
        Self::from_images(n, &images)
    }

    /// Exhaustive check of bijectivity, symmetry and `inverse ∘ self = id`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let mut seen = vec![false; n * n];
        for j in 0..n {
            for k in 0..n {
                let (a, b) = self.apply(j, k);
                if a >= n || b >= n {
                    return Err(Error::NotBijective(format!(
                        "({}, {}) maps outside [N]^2",
                        j + 1,
                        k + 1
                    )));
                }
                if std::mem::replace(&mut seen[a * n + b], true) {
                    return Err(Error::NotBijective(format!("({}, {}) is hit twice", a + 1, b + 1)));
                }
                if self.apply(k, j) != (b, a) {
                    return Err(Error::Asymmetric { row: j + 1, col: k + 1 });
                }
                if self.apply_inverse(a, b) != (j, k) {
                    return Err(Error::NotBijective(format!(
                        "inverse disagrees at ({}, {})",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Writes `N` on the first line, then `j k → j' k'` (1-based) for every entry.
    pub fn write_table<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.n)?;
        for j in 0..self.n {
            for k in 0..self.n {
                let (a, b) = self.apply(j, k);
                writeln!(w, "{} {} → {} {}", j + 1, k + 1, a + 1, b + 1)?;
            }
        }
        Ok(())
    }

    /// Reads the format of [`write_table`](Self::write_table). `->` is accepted
    /// in place of `→`.
    pub fn read_table<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('#') => None,
            other => Some((i + 1, other)),
        });
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing dimension line".into(),
        })?;
        let header = header?;
        let n: usize = header.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("bad dimension `{}`", header.trim()),
        })?;
        if n == 0 || n > TABLE_MAX_N {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("dimension {n} outside 1..={TABLE_MAX_N}"),
            });
        }
        let mut images = vec![None; n * n];
        for (line_no, line) in lines {
            let line = line?;
            let normalized = line.replace("->", " ").replace('→', " ");
            let nums: Vec<usize> = normalized
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("expected `j k → j' k'`, got `{line}`"),
                })?;
            if nums.len() != 4 || nums.iter().any(|&x| x == 0 || x > n) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected four indices in 1..={n}, got `{line}`"),
                });
            }
            let slot = &mut images[(nums[0] - 1) * n + nums[1] - 1];
            if slot.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("entry ({}, {}) listed twice", nums[0], nums[1]),
                });
            }
            *slot = Some((nums[2] - 1, nums[3] - 1));
        }
        let images: Vec<(usize, usize)> = images
            .into_iter()
            .enumerate()
            .map(|(idx, v)| {
                v.ok_or(Error::Parse {
                    line: 0,
                    msg: format!("entry ({}, {}) missing", idx / n + 1, idx % n + 1),
                })
            })
            .collect::<Result<_>>()?;
        Self::from_images(n, &images)
    }
}

fn eval_named(family: NamedFamily, inverted: bool, n: usize, j: usize, k: usize) -> (usize, usize) {
    match family {
        NamedFamily::Identity => (j, k),
        NamedFamily::Transpose => (k, j),
        NamedFamily::AntiTranspose => (n - 1 - k, n - 1 - j),
        NamedFamily::Rho => {
            if (j.max(k) + 1) % 2 == 1 {
                (j, k)
            } else {
                (k, j)
            }
        }
        NamedFamily::Zeta { n: m } => {
            if (j + k + 2) % m as usize == 0 {
                (j, k)
            } else {
                (k, j)
            }
        }
        NamedFamily::Eta => {
            let (a, b) = if inverted {
                eta_inverse(n, j + 1, k + 1)
            } else {
                eta_forward(n, j + 1, k + 1)
            };
            (a - 1, b - 1)
        }
    }
}

// 1-based. The column-2 class {1,2} has a single-element shift cycle, so the
// literal rule would send (1,2) to its transpose; for N >= 3 the classes {1,2}
// and {2,3} are rerouted so that no entry is fixed or transposed.
const ETA_BOUNDARY: [((usize, usize), (usize, usize)); 4] = [
    ((1, 2), (3, 1)),
    ((2, 1), (1, 3)),
    ((2, 3), (1, 2)),
    ((3, 2), (2, 1)),
];

/// Shift within `{1, ..., k-1}`: `+1` for odd `k`, `-1` for even `k`, cyclically.
fn eta_shift(k: usize, j: usize, inverse: bool) -> usize {
    let len = k - 1;
    let up = (k % 2 == 1) != inverse;
    if up {
        if j == len { 1 } else { j + 1 }
    } else if j == 1 {
        len
    } else {
        j - 1
    }
}

/// `eta(j, k)` in 1-based indices.
///
/// * `j < k`, `k` odd: `(k, j+1)`, with `(k-1, k) -> (k, 1)`;
/// * `j < k`, `k` even: `(k, j-1)`, with `(1, k) -> (k, k-1)`;
/// * `j > k`: transpose of `eta(k, j)`;
/// * `j = k`: `(j+1, j+1)`, wrapping `(N, N) -> (1, 1)`.
pub fn eta_forward(n: usize, j: usize, k: usize) -> (usize, usize) {
    if j == k {
        let d = if j == n { 1 } else { j + 1 };
        return (d, d);
    }
    if n >= 3 {
        if let Some(&(_, out)) = ETA_BOUNDARY.iter().find(|(inp, _)| *inp == (j, k)) {
            return out;
        }
    }
    if j < k {
        (k, eta_shift(k, j, false))
    } else {
        let (a, b) = eta_forward(n, k, j);
        (b, a)
    }
}

pub fn eta_inverse(n: usize, j: usize, k: usize) -> (usize, usize) {
    if j == k {
        let d = if j == 1 { n } else { j - 1 };
        return (d, d);
    }
    if n >= 3 {
        if let Some(&(inp, _)) = ETA_BOUNDARY.iter().find(|(_, out)| *out == (j, k)) {
            return inp;
        }
    }
    if j < k {
        (k, eta_shift(k, j, true))
    } else {
        (eta_shift(j, k, true), j)
    }
}

/// Fixed-point, transposed-point and grid statistics of a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermStats {
    pub n: usize,
    pub fp_count: u64,
    pub tp_count: u64,
    pub grid_count: u64,
    pub fp_row_min: u64,
    pub fp_row_max: u64,
    pub tp_row_min: u64,
    pub tp_row_max: u64,
    /// `#{(j,k,l) distinct : sigma(j,k) = (l,k)}`
    pub gamma_count: u64,
    /// `#{(j,k,l) distinct : sigma(j,k) = (k,l)}`
    pub chi_count: u64,
}

impl PermStats {
    pub fn fp_fraction(&self) -> f64 {
        self.fp_count as f64 / (self.n * self.n) as f64
    }

    pub fn tp_fraction(&self) -> f64 {
        self.tp_count as f64 / (self.n * self.n) as f64
    }

    pub fn grid_fraction(&self) -> f64 {
        self.grid_count as f64 / (self.n * self.n) as f64
    }
}

/// Per-row counts `#FP(sigma, j)` and `#TP(sigma, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCounts {
    pub fp: Vec<u32>,
    pub tp: Vec<u32>,
}

#[derive(Default)]
struct Scan {
    grid: u64,
    gamma: u64,
    chi: u64,
}

fn scan(sigma: &EntryPermutation) -> (RowCounts, Scan) {
    let n = sigma.n;
    let mut rows = RowCounts {
        fp: vec![0; n],
        tp: vec![0; n],
    };
    let mut acc = Scan::default();
    for j in 0..n {
        let (mut fp, mut tp) = (0u32, 0u32);
        for k in 0..n {
            let (a, b) = sigma.apply(j, k);
            let fixed = a == j && b == k;
            let transposed = a == k && b == j;
            fp += fixed as u32;
            tp += transposed as u32;
            if !fixed && !transposed && (a == j || a == k || b == j || b == k) {
                acc.grid += 1;
            }
            if j != k {
                if b == k && a != j && a != k {
                    acc.gamma += 1;
                }
                if a == k && b != j && b != k {
                    acc.chi += 1;
                }
            }
        }
        rows.fp[j] = fp;
        rows.tp[j] = tp;
    }
    (rows, acc)
}

pub fn row_counts(sigma: &EntryPermutation) -> RowCounts {
    scan(sigma).0
}

/// Exact statistics by a single `O(N^2)` scan.
pub fn stats(sigma: &EntryPermutation) -> PermStats {
    let (rows, acc) = scan(sigma);
    let minmax = |v: &[u32]| {
        v.iter()
            .fold((u64::MAX, 0u64), |(lo, hi), &x| (lo.min(x as u64), hi.max(x as u64)))
    };
    let (fp_row_min, fp_row_max) = minmax(&rows.fp);
    let (tp_row_min, tp_row_max) = minmax(&rows.tp);
    PermStats {
        n: sigma.n,
        fp_count: rows.fp.iter().map(|&x| x as u64).sum(),
        tp_count: rows.tp.iter().map(|&x| x as u64).sum(),
        grid_count: acc.grid,
        fp_row_min,
        fp_row_max,
        tp_row_min,
        tp_row_max,
        gamma_count: acc.gamma,
        chi_count: acc.chi,
    }
}

/// Empirical hypotheses for one ordered pair `(i, i')` at one dimension, computed
/// from the relative permutation `sigma_{i'}^{-1} ∘ sigma_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub i: usize,
    pub i_prime: usize,
    pub n: usize,
    /// `#FP / N^2`
    pub a: f64,
    /// `#TP / N^2`
    pub b: f64,
    pub fp_row_gap: f64,
    pub tp_row_gap: f64,
    pub grid_fraction: f64,
    /// Componentwise extremes over rows of `(#FP(j) + beta #TP(j)) / N`.
    pub combined_row_min: Complex64,
    pub combined_row_max: Complex64,
    /// `(gamma - chi) / N^2`
    pub gamma_chi_signed: f64,
    /// `(#FP + #TP) / N^2`, the averaged freeness quantity.
    pub fp_tp_fraction: f64,
    /// Predicted covariance `a + b beta`.
    pub predicted_k: Complex64,
    /// Predicted pseudocovariance `a beta + b`.
    pub predicted_j: Complex64,
    pub stats: PermStats,
}

impl PairReport {
    pub fn combined_row_gap(&self) -> f64 {
        (self.combined_row_max - self.combined_row_min).norm()
    }

    /// Row-homogeneity of the fixed and transposed proportions fails by more
    /// than `threshold`.
    pub fn inhomogeneous(&self, threshold: f64) -> bool {
        self.fp_row_gap > threshold || self.tp_row_gap > threshold
    }
}

pub fn pair_report(
    i: usize,
    i_prime: usize,
    sigma_i: &EntryPermutation,
    sigma_ip: &EntryPermutation,
    beta: Complex64,
) -> Result<PairReport> {
    let rel = sigma_i.relative_to(sigma_ip)?;
    let n = rel.n;
    let (rows, acc) = scan(&rel);
    let nf = n as f64;
    let st = {
        let minmax = |v: &[u32]| {
            v.iter()
                .fold((u64::MAX, 0u64), |(lo, hi), &x| (lo.min(x as u64), hi.max(x as u64)))
        };
        let (fp_row_min, fp_row_max) = minmax(&rows.fp);
        let (tp_row_min, tp_row_max) = minmax(&rows.tp);
        PermStats {
            n,
            fp_count: rows.fp.iter().map(|&x| x as u64).sum(),
            tp_count: rows.tp.iter().map(|&x| x as u64).sum(),
            grid_count: acc.grid,
            fp_row_min,
            fp_row_max,
            tp_row_min,
            tp_row_max,
            gamma_count: acc.gamma,
            chi_count: acc.chi,
        }
    };
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (&fp, &tp) in rows.fp.iter().zip(&rows.tp) {
        let v = (Complex64::new(fp as f64, 0.0) + beta * tp as f64) / nf;
        lo = Complex64::new(lo.re.min(v.re), lo.im.min(v.im));
        hi = Complex64::new(hi.re.max(v.re), hi.im.max(v.im));
    }
    let a = st.fp_fraction();
    let b = st.tp_fraction();
    Ok(PairReport {
        i,
        i_prime,
        n,
        a,
        b,
        fp_row_gap: (st.fp_row_max - st.fp_row_min) as f64 / nf,
        tp_row_gap: (st.tp_row_max - st.tp_row_min) as f64 / nf,
        grid_fraction: st.grid_fraction(),
        combined_row_min: lo,
        combined_row_max: hi,
        gamma_chi_signed: (st.gamma_count as f64 - st.chi_count as f64) / (nf * nf),
        fp_tp_fraction: a + b,
        predicted_k: Complex64::new(a, 0.0) + beta * b,
        predicted_j: beta * a + b,
        stats: st,
    })
}

/// Reports for every ordered pair of family members at every dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub beta: Complex64,
    pub n_list: Vec<usize>,
    pub pairs: Vec<PairReport>,
}

impl ConditionReport {
    /// The reports for `(i, i')` ordered by dimension.
    pub fn trend(&self, i: usize, i_prime: usize) -> Vec<&PairReport> {
        let mut v: Vec<&PairReport> = self
            .pairs
            .iter()
            .filter(|p| p.i == i && p.i_prime == i_prime)
            .collect();
        v.sort_by_key(|p| p.n);
        v
    }
}

/// Builds the family at each dimension with `build(member, n)` and reports every
/// ordered pair.
pub fn condition_report<F>(members: usize, beta: Complex64, n_list: &[usize], mut build: F) -> Result<ConditionReport>
where
    F: FnMut(usize, usize) -> Result<EntryPermutation>,
{
    let mut pairs = Vec::new();
    for &n in n_list {
        let family: Vec<EntryPermutation> = (0..members).map(|m| build(m, n)).collect::<Result<_>>()?;
        for (m, sigma) in family.iter().enumerate() {
            if sigma.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: sigma.n(),
                });
            }
            let _ = m;
        }
        for i in 0..members {
            for ip in 0..members {
                pairs.push(pair_report(i, ip, &family[i], &family[ip], beta)?);
            }
        }
    }
    Ok(ConditionReport {
        beta,
        n_list: n_list.to_vec(),
        pairs,
    })
}

pub fn condition_report_named(families: &[NamedFamily], beta: Complex64, n_list: &[usize]) -> Result<ConditionReport> {
    condition_report(families.len(), beta, n_list, |m, n| EntryPermutation::named(families[m], n))
}
