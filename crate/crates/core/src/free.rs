//! Noncrossing partitions, semicircular moments and free cumulants.

use std::collections::BTreeMap;

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NC_MAX_N: usize = 12;
pub const NC2_MAX_N: usize = 16;
pub const CUMULANT_MAX_N: usize = 8;
pub const A1A2_MAX_LEN: usize = 8;

type Blocks = Vec<Vec<usize>>;

/// A partition of `{0, ..., n-1}` into sorted blocks with no crossings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NCPartition {
    n: usize,
    blocks: Blocks,
}

impl NCPartition {
    /// Validates that `blocks` partition `[n]` without crossings. Blocks are
    /// sorted internally and ordered by their least element.
    pub fn new(n: usize, mut blocks: Blocks) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidParameter("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidParameter(format!("element {x} repeated or out of range")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter("blocks do not cover [n]".into()));
        }
        if !is_noncrossing(&blocks) {
            return Err(Error::InvalidParameter("partition is crossing".into()));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(NCPartition { n, blocks })
    }

    fn from_sorted(n: usize, mut blocks: Blocks) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        NCPartition { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }
}

/// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> bool {
    for (i, b) in blocks.iter().enumerate() {
        let mut b = b.clone();
        b.sort_unstable();
        for (j, c) in blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            for w in b.windows(2) {
                let inside = c.iter().any(|&x| w[0] < x && x < w[1]);
                let outside = c.iter().any(|&x| x < w[0] || x > w[1]);
                if inside && outside {
                    return false;
                }
            }
        }
    }
    true
}

pub fn catalan(n: usize) -> u64 {
    let mut c = 1u64;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

// noncrossing partitions of the interval [lo, hi)
fn nc_interval(lo: usize, hi: usize) -> Vec<Blocks> {
    if lo >= hi {
        return vec![vec![]];
    }
    grow_block(vec![lo], hi)
}

// partitions whose first block starts with `block` and may take further elements
fn grow_block(block: Vec<usize>, hi: usize) -> Vec<Blocks> {
    let last = *block.last().expect("nonempty");
    let mut out = Vec::new();
    for tail in nc_interval(last + 1, hi) {
        let mut p = vec![block.clone()];
        p.extend(tail);
        out.push(p);
    }
    for nx in last + 1..hi {
        let gaps = nc_interval(last + 1, nx);
        let mut b = block.clone();
        b.push(nx);
        for rest in grow_block(b, hi) {
            for g in &gaps {
                let mut p = rest.clone();
                p.extend(g.iter().cloned());
                out.push(p);
            }
        }
    }
    out
}

/// All noncrossing partitions of `[n]`, `n <= 12`.
pub fn enumerate_nc(n: usize) -> Result<Vec<NCPartition>> {
    if n > NC_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "noncrossing partitions",
            needed: catalan(n) as f64,
            cap: catalan(NC_MAX_N) as f64,
        });
    }
    Ok(nc_interval(0, n).into_iter().map(|b| NCPartition::from_sorted(n, b)).collect())
}

fn pairings_interval(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
    if lo >= hi {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for m in (lo + 1..hi).step_by(2) {
        let inner = pairings_interval(lo + 1, m);
        let outer = pairings_interval(m + 1, hi);
        for a in &inner {
            for b in &outer {
                let mut p = Vec::with_capacity(1 + a.len() + b.len());
                p.push((lo, m));
                p.extend_from_slice(a);
                p.extend_from_slice(b);
                out.push(p);
            }
        }
    }
    out
}

/// All noncrossing pair partitions of `[n]`, `n <= 16`; empty for odd `n`.
pub fn enumerate_nc2(n: usize) -> Result<Vec<NCPartition>> {
    if n > NC2_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "noncrossing pairings",
            needed: catalan(n / 2) as f64,
            cap: catalan(NC2_MAX_N / 2) as f64,
        });
    }
    if n % 2 == 1 {
        return Ok(vec![]);
    }
    Ok(pairings_interval(0, n)
        .into_iter()
        .map(|p| NCPartition::from_sorted(n, p.into_iter().map(|(a, b)| vec![a, b]).collect()))
        .collect())
}

/// Sum over noncrossing pairings of `prod weight(word[a], word[b])`, by the
/// interval recursion on the partner of the first letter.
fn nc2_sum<T, F>(len: usize, weight: F) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<Output = T> + From<f64>,
    F: Fn(usize, usize) -> T,
{
    if len % 2 == 1 {
        return T::from(0.0);
    }
    // m[i][j] for the interval [i, j)
    let mut m = vec![vec![T::from(0.0); len + 1]; len + 1];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::from(1.0);
    }
    for width in (2..=len).step_by(2) {
        for i in 0..=len - width {
            let j = i + width;
            let mut acc = T::from(0.0);
            for p in (i + 1..j).step_by(2) {
                acc = acc + weight(i, p) * m[i + 1][p] * m[p + 1][j];
            }
            m[i][j] = acc;
        }
    }
    m[0][len]
}

/// Covariance `K` and pseudocovariance `J` of a semicircular traffic family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceSpec {
    pub k: Vec<Vec<f64>>,
    pub j: Vec<Vec<f64>>,
}

impl CovarianceSpec {
    /// Checks shapes and symmetry. Indefinite `K` is accepted; see
    /// [`is_psd`](Self::is_psd).
    pub fn new(k: Vec<Vec<f64>>, j: Vec<Vec<f64>>) -> Result<Self> {
        let s = CovarianceSpec { k, j };
        s.validate()?;
        Ok(s)
    }

    /// `K` only, with `J = K` (real entries, beta = 1 convention).
    pub fn from_k(k: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(k.clone(), k)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.k.len();
        for (name, m) in [("K", &self.k), ("J", &self.j)] {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidCovariance(format!("{name} must be {n} x {n}")));
            }
            for a in 0..n {
                for b in 0..n {
                    if !m[a][b].is_finite() || (m[a][b] - m[b][a]).abs() > 1e-12 {
                        return Err(Error::InvalidCovariance(format!(
                            "{name} is not symmetric at ({}, {})",
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn labels(&self) -> usize {
        self.k.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.k.len();
        if n == 0 {
            return 0.0;
        }
        let m = Mat::from_fn(n, n, |a, b| self.k[a][b]);
        m.self_adjoint_eigenvalues(Side::Lower)
            .map(|ev| ev.into_iter().fold(f64::INFINITY, f64::min))
            .unwrap_or(f64::NAN)
    }

    /// `K` is positive semidefinite up to `1e-12`.
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -1e-12
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        if let Some(&l) = word.iter().find(|&&l| l >= self.labels()) {
            return Err(Error::InvalidParameter(format!(
                "label {} outside the {} covariance labels",
                l + 1,
                self.labels()
            )));
        }
        Ok(())
    }
}

/// `sum over NC_2(n) of prod K(word[a], word[b])`.
pub fn semicircular_moment(word: &[usize], cov: &CovarianceSpec) -> Result<f64> {
    cov.check_word(word)?;
    Ok(nc2_sum(word.len(), |a, b| cov.k[word[a]][word[b]]))
}

/// A letter of a *-word: a variable label and whether it is starred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StarVar {
    pub label: usize,
    pub star: bool,
}

impl StarVar {
    pub fn plain(label: usize) -> Self {
        StarVar { label, star: false }
    }

    pub fn starred(label: usize) -> Self {
        StarVar { label, star: true }
    }

    pub fn adjoint(self) -> Self {
        StarVar {
            label: self.label,
            star: !self.star,
        }
    }
}

/// Second free cumulants of a *-family whose higher cumulants vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct StarCovariance {
    labels: usize,
    table: Vec<Complex64>,
}

impl StarCovariance {
    pub fn new(labels: usize) -> Self {
        StarCovariance {
            labels,
            table: vec![Complex64::new(0.0, 0.0); 4 * labels * labels],
        }
    }

    fn idx(&self, x: StarVar, y: StarVar) -> usize {
        let i = 2 * x.label + x.star as usize;
        let j = 2 * y.label + y.star as usize;
        i * 2 * self.labels + j
    }

    pub fn labels(&self) -> usize {
        self.labels
    }

    pub fn get(&self, x: StarVar, y: StarVar) -> Complex64 {
        self.table[self.idx(x, y)]
    }

    /// Sets `k2(x, y) = v` and `k2(y*, x*) = conj(v)`.
    pub fn set(&mut self, x: StarVar, y: StarVar, v: Complex64) -> Result<()> {
        if x.label >= self.labels || y.label >= self.labels {
            return Err(Error::InvalidParameter("label out of range".into()));
        }
        let a = self.idx(x, y);
        let b = self.idx(y.adjoint(), x.adjoint());
        if a == b && v.im != 0.0 {
            return Err(Error::InvalidCovariance("k2(x, x*) must be real".into()));
        }
        self.table[a] = v;
        self.table[b] = v.conj();
        Ok(())
    }

    /// Standard semicircular: `s = s*` with `k2 = 1` in every star pattern.
    pub fn set_semicircular(&mut self, label: usize) -> Result<()> {
        for a in [false, true] {
            for b in [false, true] {
                self.set(StarVar { label, star: a }, StarVar { label, star: b }, Complex64::new(1.0, 0.0))?;
            }
        }
        Ok(())
    }

    /// Standard circular: `k2(c, c*) = k2(c*, c) = 1`, `k2(c, c) = k2(c*, c*) = 0`.
    pub fn set_circular(&mut self, label: usize) -> Result<()> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        self.set(StarVar::plain(label), StarVar::starred(label), one)?;
        self.set(StarVar::starred(label), StarVar::plain(label), one)?;
        self.set(StarVar::plain(label), StarVar::plain(label), zero)?;
        Ok(())
    }

    /// `k2[x, y] = conj(k2[y*, x*])` for every pair.
    pub fn satisfies_adjoint_rule(&self) -> bool {
        let vars: Vec<StarVar> = (0..self.labels)
            .flat_map(|l| [StarVar::plain(l), StarVar::starred(l)])
            .collect();
        vars.iter().all(|&x| {
            vars.iter()
                .all(|&y| (self.get(x, y) - self.get(y.adjoint(), x.adjoint()).conj()).norm() == 0.0)
        })
    }
}

/// `phi(word)` for a family with only second cumulants.
pub fn star_nc2_moment(word: &[StarVar], cov: &StarCovariance) -> Result<Complex64> {
    if word.iter().any(|v| v.label >= cov.labels()) {
        return Err(Error::InvalidParameter("label out of range".into()));
    }
    Ok(nc2_sum(word.len(), |a, b| cov.get(word[a], word[b])))
}

/// The two operator matrices of the 3 x 3 example.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpMatrix {
    A1,
    A2,
}

// labels: s1, s2, s3 = 0, 1, 2 and c1, c2, c3 = 3, 4, 5
fn a_entry(m: OpMatrix, r: usize, c: usize) -> StarVar {
    const A1: [[(usize, bool); 3]; 3] = [
        [(0, false), (3, false), (4, false)],
        [(3, true), (1, false), (5, false)],
        [(4, true), (5, true), (2, false)],
    ];
    const A2: [[(usize, bool); 3]; 3] = [
        [(2, false), (5, false), (3, false)],
        [(5, true), (0, false), (4, false)],
        [(3, true), (4, true), (1, false)],
    ];
    let (label, star) = match m {
        OpMatrix::A1 => A1[r][c],
        OpMatrix::A2 => A2[r][c],
    };
    StarVar { label, star }
}

/// A reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 { a.abs() } else { gcd(b, a % b) }
        }
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ratio {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `(tr ⊗ phi)` of a word in `A1, A2`, expanding the matrix trace over all
/// `3^n` index tuples.
pub fn a1a2_example_moment(word: &[OpMatrix]) -> Result<Ratio> {
    let n = word.len();
    if n > A1A2_MAX_LEN {
        return Err(Error::BudgetExceeded {
            what: "operator-matrix expansion",
            needed: 3f64.powi(n as i32),
            cap: 3f64.powi(A1A2_MAX_LEN as i32),
        });
    }
    if n == 0 {
        return Ok(Ratio::new(1, 1));
    }
    let mut cov = StarCovariance::new(6);
    for l in 0..3 {
        cov.set_semicircular(l)?;
        cov.set_circular(l + 3)?;
    }
    let mut idx = vec![0usize; n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut letters = Vec::with_capacity(n);
    'outer: loop {
        letters.clear();
        for k in 0..n {
            letters.push(a_entry(word[k], idx[k], idx[(k + 1) % n]));
        }
        total += star_nc2_moment(&letters, &cov)?;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < 3 {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    // every pairing weight is 0 or 1, so the sum is an exact integer count
    debug_assert!(total.im == 0.0 && total.re.fract() == 0.0);
    let count = total.re.round() as i64;
    if n % 2 == 1 {
        return Ok(Ratio::new(0, 1));
    }
    Ok(Ratio::new(count, 3i64.pow(1 + n as u32 / 2)))
}

/// Mixed moments or cumulants indexed by label words of length `1..=order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordTable {
    pub labels: usize,
    pub order: usize,
    pub values: BTreeMap<Vec<usize>, f64>,
}

impl WordTable {
    /// Tabulates `f` on every word.
    pub fn from_fn<F: FnMut(&[usize]) -> f64>(labels: usize, order: usize, mut f: F) -> Self {
        let mut values = BTreeMap::new();
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..order {
            layer = layer
                .into_iter()
                .flat_map(|w| {
                    (0..labels).map(move |l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
            for w in &layer {
                values.insert(w.clone(), f(w));
            }
        }
        WordTable { labels, order, values }
    }

    pub fn get(&self, word: &[usize]) -> f64 {
        self.values[word]
    }
}

fn restrict(word: &[usize], block: &[usize]) -> Vec<usize> {
    block.iter().map(|&i| word[i]).collect()
}

fn check_order(order: usize) -> Result<()> {
    if order > CUMULANT_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "cumulant order",
            needed: order as f64,
            cap: CUMULANT_MAX_N as f64,
        });
    }
    Ok(())
}

/// Mixed free cumulants from mixed moments, by peeling off the full block:
/// `kappa(w) = phi(w) - sum over NC(n) \ {1_n} of kappa_pi(w)`.
pub fn free_cumulants_from_moments(moments: &WordTable) -> Result<WordTable> {
    check_order(moments.order)?;
    let parts: Vec<Vec<NCPartition>> = (0..=moments.order).map(enumerate_nc).collect::<Result<_>>()?;
    let mut kappa = WordTable {
        labels: moments.labels,
        order: moments.order,
        values: BTreeMap::new(),
    };
    // BTreeMap order is lexicographic, not by length, so sweep by length
    for len in 1..=moments.order {
        let words: Vec<Vec<usize>> = moments.values.keys().filter(|w| w.len() == len).cloned().collect();
        for w in words {
            let mut v = moments.get(&w);
            for pi in &parts[len] {
                if pi.blocks().len() == 1 {
                    continue;
                }
                v -= pi
                    .blocks()
                    .iter()
                    .map(|b| kappa.values[&restrict(&w, b)])
                    .product::<f64>();
            }
            kappa.values.insert(w, v);
        }
    }
    Ok(kappa)
}

/// Mixed moments `phi(w) = sum over NC(n) of kappa_pi(w)`.
pub fn moments_from_cumulants(kappa: &WordTable) -> Result<WordTable> {
    check_order(kappa.order)?;
    let parts: Vec<Vec<NCPartition>> = (0..=kappa.order).map(enumerate_nc).collect::<Result<_>>()?;
    let values = kappa
        .values
        .keys()
        .map(|w| {
            let v = parts[w.len()]
                .iter()
                .map(|pi| pi.blocks().iter().map(|b| kappa.get(&restrict(w, b))).product::<f64>())
                .sum();
            (w.clone(), v)
        })
        .collect();
    Ok(WordTable {
        labels: kappa.labels,
        order: kappa.order,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        let p2 = enumerate_nc2(2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].blocks(), &[vec![0, 1]]);
        assert_eq!(enumerate_nc2(4).unwrap().len(), 2);
        assert_eq!(enumerate_nc2(5).unwrap().len(), 0);
        assert_eq!(enumerate_nc(4).unwrap().len(), 14);
        assert_eq!(enumerate_nc(0).unwrap().len(), 1);
        assert!(enumerate_nc(13).is_err());
        assert!(enumerate_nc2(18).is_err());
    }

    #[test]
    fn catalan_numbers() {
        let want = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        for (n, &c) in want.iter().enumerate() {
            assert_eq!(catalan(n), c);
        }
    }

    #[test]
    fn crossing_rejected() {
        assert!(!is_noncrossing(&[vec![0, 2], vec![1, 3]]));
        assert!(is_noncrossing(&[vec![0, 3], vec![1, 2]]));
        assert!(NCPartition::new(4, vec![vec![0, 2], vec![1, 3]]).is_err());
        assert!(NCPartition::new(4, vec![vec![0, 1], vec![1, 3]]).is_err());
        assert!(NCPartition::new(4, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn semicircular_examples() {
        let one = CovarianceSpec::from_k(vec![vec![1.0]]).unwrap();
        assert_eq!(semicircular_moment(&[0, 0, 0, 0], &one).unwrap(), 2.0);
        assert_eq!(semicircular_moment(&[0, 0, 0], &one).unwrap(), 0.0);
        let c = 0.3;
        let k = CovarianceSpec::from_k(vec![vec![1.0, c], vec![c, 1.0]]).unwrap();
        assert!((semicircular_moment(&[0, 1, 0, 1], &k).unwrap() - 2.0 * c * c).abs() < 1e-15);
        assert!(semicircular_moment(&[0, 2], &k).is_err());
    }

    #[test]
    fn interval_recursion_matches_enumeration() {
        let k = CovarianceSpec::from_k(vec![vec![1.0, 0.4, -0.2], vec![0.4, 2.0, 0.1], vec![-0.2, 0.1, 0.7]]).unwrap();
        let word = [0, 1, 2, 2, 1, 0, 1, 1, 0, 2];
        let brute: f64 = enumerate_nc2(word.len())
            .unwrap()
            .iter()
            .map(|p| p.blocks().iter().map(|b| k.k[word[b[0]]][word[b[1]]]).product::<f64>())
            .sum();
        assert!((semicircular_moment(&word, &k).unwrap() - brute).abs() < 1e-14);
    }

    #[test]
    fn indefinite_k_is_flagged_not_rejected() {
        let k = CovarianceSpec::from_k(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(!k.is_psd());
        assert!((k.min_eigenvalue() + 1.0).abs() < 1e-12);
        assert!(semicircular_moment(&[0, 1], &k).is_ok());
        assert!(CovarianceSpec::from_k(vec![vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn circular_words() {
        let mut cov = StarCovariance::new(2);
        cov.set_circular(0).unwrap();
        cov.set_semicircular(1).unwrap();
        assert!(cov.satisfies_adjoint_rule());
        let c = StarVar::plain(0);
        let cs = StarVar::starred(0);
        let s = StarVar::plain(1);
        assert_eq!(star_nc2_moment(&[c, cs, c, cs], &cov).unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(star_nc2_moment(&[c, c], &cov).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(star_nc2_moment(&[s, s, s, s], &cov).unwrap(), Complex64::new(2.0, 0.0));
        // c c* c* c: only the outer/inner pairing survives
        assert_eq!(star_nc2_moment(&[c, cs, cs, c], &cov).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn star_set_keeps_adjoint_rule() {
        let mut cov = StarCovariance::new(2);
        cov.set(StarVar::plain(0), StarVar::plain(1), Complex64::new(0.2, 0.5)).unwrap();
        assert!(cov.satisfies_adjoint_rule());
        assert_eq!(
            cov.get(StarVar::starred(1), StarVar::starred(0)),
            Complex64::new(0.2, -0.5)
        );
        assert!(cov
            .set(StarVar::plain(0), StarVar::starred(0), Complex64::new(0.0, 1.0))
            .is_err());
    }

    #[test]
    fn operator_matrix_example() {
        use OpMatrix::*;
        assert_eq!(a1a2_example_moment(&[A1, A2]).unwrap(), Ratio::new(0, 1));
        assert_eq!(a1a2_example_moment(&[A1, A1, A2, A2]).unwrap(), Ratio::new(29, 27));
        assert_eq!(a1a2_example_moment(&[A1, A1]).unwrap(), Ratio::new(1, 1));
        assert_eq!(a1a2_example_moment(&[A2, A2, A2, A2]).unwrap(), Ratio::new(2, 1));
        assert_eq!(a1a2_example_moment(&[A1, A2, A1]).unwrap(), Ratio::new(0, 1));
        assert!(a1a2_example_moment(&[A1; 9]).is_err());
    }

    #[test]
    fn semicircle_cumulants() {
        let one = CovarianceSpec::from_k(vec![vec![1.0]]).unwrap();
        let m = WordTable::from_fn(1, 8, |w| semicircular_moment(w, &one).unwrap());
        let k = free_cumulants_from_moments(&m).unwrap();
        assert!((k.get(&[0, 0]) - 1.0).abs() < 1e-12);
        for len in [1, 3, 4, 5, 6, 7, 8] {
            assert!(k.get(&vec![0; len]).abs() < 1e-12, "kappa_{len}");
        }
    }

    #[test]
    fn free_pair_has_no_mixed_cumulants() {
        let diag = CovarianceSpec::from_k(vec![vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let m = WordTable::from_fn(2, 6, |w| semicircular_moment(w, &diag).unwrap());
        let k = free_cumulants_from_moments(&m).unwrap();
        assert!(k.get(&[0, 1]).abs() < 1e-12);
        assert!(k.get(&[1, 0]).abs() < 1e-12);
        for (w, v) in &k.values {
            if w.len() != 2 || w[0] != w[1] {
                assert!(v.abs() < 1e-12, "{w:?} -> {v}");
            }
        }
    }

    #[test]
    fn cumulant_round_trip() {
        let kappa = WordTable::from_fn(2, 6, |w| {
            let h = w.iter().fold(7u64, |h, &l| h.wrapping_mul(31).wrapping_add(l as u64 + 1));
            ((h % 1000) as f64) / 500.0 - 1.0
        });
        let back = free_cumulants_from_moments(&moments_from_cumulants(&kappa).unwrap()).unwrap();
        for (w, v) in &kappa.values {
            assert!((back.get(w) - v).abs() < 1e-12);
        }
    }
}
