//! Wigner matrices, their entry-permuted copies and mixed trace moments.

use std::collections::HashMap;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entry::EntrySpec;
use crate::error::{Error, Result};
use crate::perm::EntryPermutation;

/// Largest dimension accepted by the samplers.
pub const MAX_N: usize = 16384;

/// Default cap on the number of index maps visited by [`trace_moment_exact`].
pub const EXACT_BUDGET: f64 = 1e7;

/// An `N x N` Hermitian matrix with entries `X(j, k) / sqrt(N)`.
#[derive(Clone, Debug)]
pub struct WignerMatrix {
    mat: Mat<Complex64>,
}

impl WignerMatrix {
    /// Wraps a matrix after checking that it is square and Hermitian to `1e-12`.
    pub fn from_mat(mat: Mat<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        let dev = hermitian_deviation(&mat);
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        Ok(WignerMatrix { mat })
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.mat[(j, k)]
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<Complex64> {
        self.mat
    }

    /// Normalized trace `(1/N) sum_j W(j, j)`.
    pub fn trace(&self) -> Complex64 {
        normalized_trace(&self.mat)
    }

    fn to_real(&self) -> Mat<f64> {
        Mat::from_fn(self.n(), self.n(), |j, k| self.mat[(j, k)].re)
    }
}

/// Largest `|M(j,k) - conj(M(k,j))|`.
pub fn hermitian_deviation(m: &Mat<Complex64>) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut dev = 0.0f64;
    for j in 0..n {
        for k in j..n {
            dev = dev.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    dev
}

pub fn normalized_trace(m: &Mat<Complex64>) -> Complex64 {
    let n = m.nrows();
    (0..n).map(|j| m[(j, j)]).sum::<Complex64>() / n as f64
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidParameter(format!("dimension {n} outside 1..={MAX_N}")));
    }
    Ok(())
}

/// Samples from an explicit stream: the diagonal first, then the strict upper
/// triangle row by row.
pub fn sample_wigner_with<R: Rng + ?Sized>(spec: &EntrySpec, n: usize, rng: &mut R) -> Result<WignerMatrix> {
    check_n(n)?;
    let scale = 1.0 / (n as f64).sqrt();
    let mut mat = Mat::<Complex64>::zeros(n, n);
    for j in 0..n {
        mat[(j, j)] = Complex64::new(spec.sample_diagonal(rng) * scale, 0.0);
    }
    for j in 0..n {
        for k in j + 1..n {
            let x = spec.sample_entry(rng) * scale;
            mat[(j, k)] = x;
            mat[(k, j)] = x.conj();
        }
    }
    Ok(WignerMatrix { mat })
}

pub fn sample_wigner(spec: &EntrySpec, n: usize, seed: u64) -> Result<WignerMatrix> {
    sample_wigner_with(spec, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `W^sigma(j, k) = W(sigma(j, k))`.
///
/// [`EntryPermutation`] values are symmetric by construction, so the result is
/// Hermitian whenever `w` is.
pub fn permute_entries(w: &WignerMatrix, sigma: &EntryPermutation) -> Result<WignerMatrix> {
    if w.n() != sigma.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: sigma.n(),
        });
    }
    let n = w.n();
    let mat = Mat::from_fn(n, n, |j, k| {
        let (a, b) = sigma.apply(j, k);
        w.mat[(a, b)]
    });
    Ok(WignerMatrix { mat })
}

/// A nonempty sequence of 0-based indices into a permutation family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidParameter("word must be nonempty".into()));
        }
        Ok(Word(labels))
    }

    /// Parses 1-based labels, as written in configs and reports.
    pub fn from_one_based(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::InvalidParameter("word labels are 1-based".into()));
        }
        Self::new(labels.iter().map(|l| l - 1).collect())
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_label(&self) -> usize {
        *self.0.iter().max().expect("nonempty")
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Every word of length `1..=max_len` over `alphabet` labels.
    pub fn all_up_to(alphabet: usize, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..max_len {
            layer = layer
                .into_iter()
                .flat_map(|w| {
                    (0..alphabet).map(move |l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
            out.extend(layer.iter().cloned().map(Word));
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Word {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<usize> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl std::fmt::Display for Word {
    /// 1-based, dash separated.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| (l + 1).to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

fn check_family(perms: &[EntryPermutation], word: &Word, n: usize) -> Result<()> {
    check_n(n)?;
    if word.max_label() >= perms.len() {
        return Err(Error::InvalidParameter(format!(
            "word label {} refers past the {} permutations supplied",
            word.max_label() + 1,
            perms.len()
        )));
    }
    for p in perms {
        if p.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.n(),
            });
        }
    }
    Ok(())
}

/// Sample mean and standard error of a complex statistic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: Complex64,
    /// `sqrt((var(re) + var(im)) / trials)` with unbiased variances.
    pub stderr: f64,
    pub trials: usize,
}

impl McEstimate {
    pub fn from_samples(xs: &[Complex64]) -> Result<Self> {
        let t = xs.len();
        if t < 2 {
            return Err(Error::InvalidParameter("at least two trials are required".into()));
        }
        let mean = xs.iter().sum::<Complex64>() / t as f64;
        let (vr, vi) = xs.iter().fold((0.0, 0.0), |(vr, vi), x| {
            let d = x - mean;
            (vr + d.re * d.re, vi + d.im * d.im)
        });
        let var = (vr + vi) / (t - 1) as f64;
        Ok(McEstimate {
            estimate: mean,
            stderr: (var / t as f64).sqrt(),
            trials: t,
        })
    }

    /// `|estimate - target| <= max(k * stderr, floor)`.
    pub fn within(&self, target: Complex64, k: f64, floor: f64) -> bool {
        (self.estimate - target).norm() <= (k * self.stderr).max(floor)
    }
}

trait Scalar: Copy + std::ops::Mul<Output = Self> + std::iter::Sum {
    fn to_c64(self) -> Complex64;
    fn product(a: &Mat<Self>, b: &Mat<Self>) -> Mat<Self>;
}

impl Scalar for f64 {
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }

    fn product(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
        let mut c = Mat::zeros(a.nrows(), b.ncols());
        matmul(c.as_mut(), Accum::Replace, a.as_ref(), b.as_ref(), 1.0, Par::Seq);
        c
    }
}

impl Scalar for Complex64 {
    fn to_c64(self) -> Complex64 {
        self
    }

    fn product(a: &Mat<Complex64>, b: &Mat<Complex64>) -> Mat<Complex64> {
        let mut c = Mat::zeros(a.nrows(), b.ncols());
        matmul(
            c.as_mut(),
            Accum::Replace,
            a.as_ref(),
            b.as_ref(),
            Complex64::new(1.0, 0.0),
            Par::Seq,
        );
        c
    }
}

fn permuted<T: Copy>(base: &Mat<T>, sigma: &EntryPermutation) -> Mat<T> {
    let n = base.nrows();
    if let Some((crate::perm::NamedFamily::Identity, _)) = sigma.family() {
        return base.clone();
    }
    Mat::from_fn(n, n, |j, k| {
        let (a, b) = sigma.apply(j, k);
        base[(a, b)]
    })
}

struct ProductCache<'a, T> {
    copies: &'a HashMap<usize, Mat<T>>,
    memo: HashMap<Vec<usize>, Mat<T>>,
}

impl<T: Scalar> ProductCache<'_, T> {
    // product of the copies named by `labels`, left to right
    fn get(&mut self, labels: &[usize]) -> &Mat<T> {
        if !self.memo.contains_key(labels) {
            let m = if labels.len() == 1 {
                self.copies[&labels[0]].clone()
            } else {
                let (init, last) = labels.split_at(labels.len() - 1);
                let left = self.get(init).clone();
                T::product(&left, &self.copies[&last[0]])
            };
            self.memo.insert(labels.to_vec(), m);
        }
        &self.memo[labels]
    }
}

fn word_trace<T: Scalar>(base: &Mat<T>, perms: &[EntryPermutation], word: &Word) -> Complex64 {
    let n = base.nrows();
    let labels = word.labels();
    let mut copies = HashMap::new();
    for &l in labels {
        copies.entry(l).or_insert_with(|| permuted(base, &perms[l]));
    }
    if labels.len() == 1 {
        let m = &copies[&labels[0]];
        return (0..n).map(|j| m[(j, j)]).sum::<T>().to_c64() / n as f64;
    }
    let mut cache = ProductCache {
        copies: &copies,
        memo: HashMap::new(),
    };
    let half = labels.len().div_ceil(2);
    let left = cache.get(&labels[..half]).clone();
    let right = cache.get(&labels[half..]);
    // tr(LR) as a contraction, saving the last product
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            acc += (left[(j, k)] * right[(k, j)]).to_c64();
        }
    }
    acc / n as f64
}

/// Monte-Carlo estimate of `E[tr(W^{sigma_{i(1)}} ... W^{sigma_{i(n)}})]`.
///
/// Every trial draws one `W` from stream `t` of the seeded generator and forms
/// all permuted copies in the word from it.
pub fn trace_moment_mc(
    spec: &EntrySpec,
    perms: &[EntryPermutation],
    word: &Word,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_family(perms, word, n)?;
    if trials < 2 {
        return Err(Error::InvalidParameter("at least two trials are required".into()));
    }
    let samples: Vec<Complex64> = (0..trials)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let w = sample_wigner_with(spec, n, &mut rng)?;
            Ok(if spec.is_real() {
                word_trace(&w.to_real(), perms, word)
            } else {
                word_trace(&w.mat, perms, word)
            })
        })
        .collect::<Result<_>>()?;
    McEstimate::from_samples(&samples)
}

/// Accumulates the exponents of each entry class met along an index map.
#[derive(Default)]
pub(crate) struct ClassTally {
    // (a, b) with a < b -> (holomorphic, antiholomorphic) counts
    off: HashMap<(usize, usize), (usize, usize)>,
    diag: HashMap<usize, usize>,
}

impl ClassTally {
    pub(crate) fn clear(&mut self) {
        self.off.clear();
        self.diag.clear();
    }

    /// Registers one occurrence of the entry `X(a, b)`.
    #[inline]
    pub(crate) fn push(&mut self, a: usize, b: usize) {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => self.off.entry((a, b)).or_default().0 += 1,
            Greater => self.off.entry((b, a)).or_default().1 += 1,
            Equal => *self.diag.entry(a).or_default() += 1,
        }
    }

    /// `E[prod X]` over the registered occurrences.
    pub(crate) fn expectation(&self, spec: &EntrySpec) -> Result<Complex64> {
        let mut val = Complex64::new(1.0, 0.0);
        for &(p, q) in self.off.values() {
            if p + q == 1 {
                return Ok(Complex64::new(0.0, 0.0));
            }
        }
        for &k in self.diag.values() {
            if k == 1 {
                return Ok(Complex64::new(0.0, 0.0));
            }
        }
        for &(p, q) in self.off.values() {
            val *= spec.mixed_moment(p, q)?;
        }
        for &k in self.diag.values() {
            val *= spec.diagonal_moment(k)?;
        }
        Ok(val)
    }
}

/// Exact `E[tr(W^{sigma_{i(1)}} ... W^{sigma_{i(n)}})]` by summing over all
/// `N^n` index maps.
pub fn trace_moment_exact(spec: &EntrySpec, perms: &[EntryPermutation], word: &Word, n: usize) -> Result<Complex64> {
    trace_moment_exact_with_budget(spec, perms, word, n, EXACT_BUDGET)
}

pub fn trace_moment_exact_with_budget(
    spec: &EntrySpec,
    perms: &[EntryPermutation],
    word: &Word,
    n: usize,
    budget: f64,
) -> Result<Complex64> {
    check_family(perms, word, n)?;
    let len = word.len();
    let needed = (n as f64).powi(len as i32);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "exact trace moment",
            needed,
            cap: budget,
        });
    }
    let labels = word.labels();
    let mut phi = vec![0usize; len];
    let mut tally = ClassTally::default();
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        tally.clear();
        for k in 0..len {
            let (a, b) = perms[labels[k]].apply(phi[k], phi[(k + 1) % len]);
            tally.push(a, b);
        }
        total += tally.expectation(spec)?;
        // odometer
        let mut pos = 0;
        loop {
            if pos == len {
                let scale = (n as f64).powf(1.0 + len as f64 / 2.0);
                return Ok(total / scale);
            }
            phi[pos] += 1;
            if phi[pos] < n {
                break;
            }
            phi[pos] = 0;
            pos += 1;
        }
    }
}
