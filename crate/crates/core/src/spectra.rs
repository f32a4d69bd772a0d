//! Anticommutator spectra and the symmetric Poisson law.

use std::io::Write;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entry::EntrySpec;
use crate::error::{Error, Result};
use crate::perm::EntryPermutation;
use crate::wigner::{hermitian_deviation, permute_entries, sample_wigner};

/// Inputs further than this from Hermitian are rejected.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// `[A, B] = AB + BA` for Hermitian `A`, `B`, formed as `AB + (AB)^*`.
pub fn anticommutator(a: &Mat<Complex64>, b: &Mat<Complex64>) -> Result<Mat<Complex64>> {
    check_pair(a.nrows(), a.ncols(), b.nrows(), b.ncols())?;
    for m in [a, b] {
        let dev = hermitian_deviation(m);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
    }
    let n = a.nrows();
    let mut ab = Mat::<Complex64>::zeros(n, n);
    matmul(ab.as_mut(), Accum::Replace, a.as_ref(), b.as_ref(), Complex64::new(1.0, 0.0), Par::Seq);
    Ok(Mat::from_fn(n, n, |j, k| ab[(j, k)] + ab[(k, j)].conj()))
}

fn anticommutator_real(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
    let n = a.nrows();
    let mut ab = Mat::<f64>::zeros(n, n);
    matmul(ab.as_mut(), Accum::Replace, a.as_ref(), b.as_ref(), 1.0, Par::Seq);
    Mat::from_fn(n, n, |j, k| ab[(j, k)] + ab[(k, j)])
}

fn check_pair(ar: usize, ac: usize, br: usize, bc: usize) -> Result<()> {
    if ar != ac {
        return Err(Error::DimensionMismatch { expected: ar, got: ac });
    }
    if br != ar || bc != ar {
        return Err(Error::DimensionMismatch {
            expected: ar,
            got: if br != ar { br } else { bc },
        });
    }
    Ok(())
}

fn check_hermitian(m: &Mat<Complex64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigenvalues_hermitian(m: &Mat<Complex64>) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut ev = m.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::NoConvergence)?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

fn eigenvalues_symmetric(m: &Mat<f64>) -> Result<Vec<f64>> {
    let mut ev = m.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::NoConvergence)?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenvalues with unit eigenvectors as the columns of the returned matrix.
pub fn eigen_hermitian(m: &Mat<Complex64>) -> Result<(Vec<f64>, Mat<Complex64>)> {
    check_hermitian(m)?;
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|_| Error::NoConvergence)?;
    let s = evd.S().column_vector();
    let values = (0..m.nrows()).map(|i| s[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Sorted eigenvalues together with how they were produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub eigenvalues: Vec<f64>,
    pub n: usize,
    pub beta: Complex64,
    pub permutation: String,
    pub seed: u64,
}

/// Spectrum of `[W^{sigma_a}, W^{sigma_b}]` for one sampled `W`.
pub fn anticommutator_spectrum(
    spec: &EntrySpec,
    sigma_a: &EntryPermutation,
    sigma_b: &EntryPermutation,
    n: usize,
    seed: u64,
) -> Result<SpectrumSample> {
    let w = sample_wigner(spec, n, seed)?;
    let a = permute_entries(&w, sigma_a)?;
    let b = permute_entries(&w, sigma_b)?;
    let eigenvalues = if spec.is_real() {
        let re = |m: &Mat<Complex64>| Mat::from_fn(n, n, |j, k| m[(j, k)].re);
        eigenvalues_symmetric(&anticommutator_real(&re(a.as_mat()), &re(b.as_mat())))?
    } else {
        eigenvalues_hermitian(&anticommutator(a.as_mat(), b.as_mat())?)?
    };
    let name = |s: &EntryPermutation| match s.family() {
        Some((f, false)) => f.to_string(),
        Some((f, true)) => format!("inverse({f})"),
        None => "table".to_string(),
    };
    Ok(SpectrumSample {
        eigenvalues,
        n,
        beta: spec.beta(),
        permutation: format!("{},{}", name(sigma_a), name(sigma_b)),
        seed,
    })
}

/// Right end of the support, `sqrt((11 + 5 sqrt 5) / 2)`.
pub fn nu_sp_support() -> f64 {
    ((11.0 + 5.0 * 5f64.sqrt()) / 2.0).sqrt()
}

/// Density of the symmetric Poisson law.
///
/// With `A = (18x^2+1)/27`, `B = sqrt(x^2(1+11x^2-x^4)/27)`, `a = cbrt(A+B)` and
/// `b = cbrt(A-B)`, the closed form reduces to `sqrt 3 / (2 pi |x|) (a - b)`
/// because `a b = (3x^2+1)/9`. Writing `a - b = 2B / (a^2 + ab + b^2)` removes
/// the `1/|x|` and gives the finite value `1/pi` at the origin.
pub fn nu_sp_density(x: f64) -> f64 {
    let x2 = x * x;
    let r = 1.0 + 11.0 * x2 - x2 * x2;
    if !x.is_finite() || x.abs() > nu_sp_support() || r < 0.0 {
        return 0.0;
    }
    let s = (r / 27.0).sqrt();
    let big_a = (18.0 * x2 + 1.0) / 27.0;
    let big_b = x.abs() * s;
    // A > B always: 729 (A^2 - B^2) = (3x^2 + 1)^3
    let a = (big_a + big_b).cbrt();
    let b = (big_a - big_b).cbrt();
    3f64.sqrt() / (2.0 * std::f64::consts::PI) * 2.0 * s / (a * a + a * b + b * b)
}

fn integrate_density(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    quadrature::double_exponential::integrate(nu_sp_density, lo, hi, 1e-12).integral
}

/// `nu_SP((-inf, x])`, by quadrature from the origin.
pub fn nu_sp_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let s = nu_sp_support();
    let half = integrate_density(0.0, x.abs().min(s));
    let v = if x >= 0.0 { 0.5 + half } else { 0.5 - half };
    v.clamp(0.0, 1.0)
}

/// Quantile function by bisection on [`nu_sp_cdf`].
pub fn nu_sp_quantile(p: f64) -> f64 {
    let s = nu_sp_support();
    let (mut lo, mut hi) = (-s, s);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if nu_sp_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Kolmogorov-Smirnov distance between the empirical law of `sample` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    Ok(xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i + 1) as f64 / n - f).max(f - i as f64 / n)
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    /// Counts divided by `total * width`, so the bars integrate to 1.
    pub density: Vec<f64>,
    /// Sample points outside the range, not counted.
    pub dropped: usize,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

/// Normalized histogram on `range`, or on the sample's span when `None`
/// (widened by 0.5 each side if the span is a single point).
pub fn histogram(sample: &[f64], bins: usize, range: Option<(f64, f64)>) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidHistogram("bin count must be positive".into()));
    }
    let (lo, hi) = match range {
        Some(r) => r,
        None => {
            if sample.is_empty() {
                return Err(Error::EmptySample);
            }
            let lo = sample.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if lo == hi { (lo - 0.5, hi + 0.5) } else { (lo, hi) }
        }
    };
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidHistogram(format!("empty range [{lo}, {hi}]")));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut dropped = 0;
    for &x in sample {
        if !(lo..=hi).contains(&x) {
            dropped += 1;
            continue;
        }
        let b = (((x - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let total = (sample.len() - dropped).max(1) as f64;
    Ok(Histogram {
        edges: (0..=bins).map(|i| lo + width * i as f64).collect(),
        density: counts.iter().map(|&c| c as f64 / (total * width)).collect(),
        dropped,
    })
}

/// Writes `x,value` rows under a header line.
pub fn write_two_column<W: Write>(mut w: W, header: (&str, &str), rows: impl IntoIterator<Item = (f64, f64)>) -> Result<()> {
    writeln!(w, "{},{}", header.0, header.1)?;
    for (x, v) in rows {
        writeln!(w, "{x},{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn anticommutator_identities() {
        let n = 4;
        let id = Mat::from_fn(n, n, |j, k| if j == k { c(1.0) } else { c(0.0) });
        let b = Mat::from_fn(n, n, |j, k| {
            if j == k {
                c(j as f64)
            } else if j < k {
                Complex64::new(1.0, (j + k) as f64)
            } else {
                Complex64::new(1.0, -((j + k) as f64))
            }
        });
        let ib = anticommutator(&id, &b).unwrap();
        let bb = anticommutator(&b, &b).unwrap();
        let sq = &b * &b;
        for j in 0..n {
            for k in 0..n {
                assert!((ib[(j, k)] - b[(j, k)] * 2.0).norm() < 1e-14);
                assert!((bb[(j, k)] - sq[(j, k)] * 2.0).norm() < 1e-12);
            }
        }
        let bad = Mat::from_fn(n, n, |j, k| c((j * n + k) as f64));
        assert!(matches!(anticommutator(&bad, &b), Err(Error::NotHermitian(_))));
        assert!(anticommutator(&Mat::zeros(3, 3), &b).is_err());
    }

    #[test]
    fn small_eigenproblems() {
        let d = Mat::from_fn(3, 3, |j, k| if j == k { c([2.0, -1.0, 0.5][j]) } else { c(0.0) });
        assert_eq!(eigenvalues_hermitian(&d).unwrap(), vec![-1.0, 0.5, 2.0]);
        let x = Mat::from_fn(2, 2, |j, k| if j != k { c(1.0) } else { c(0.0) });
        let ev = eigenvalues_hermitian(&x).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
        let skew = Mat::from_fn(2, 2, |j, k| if j < k { c(1.0) } else { c(0.0) });
        assert!(eigenvalues_hermitian(&skew).is_err());
    }

    #[test]
    fn density_shape() {
        let s = nu_sp_support();
        assert!((s - 3.3301906767855614).abs() < 1e-12);
        assert!((nu_sp_density(0.0) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(nu_sp_density(s + 1e-9), 0.0);
        assert!(nu_sp_density(s - 1e-9) < 1e-3);
        for x in [0.1, 0.7, 1.3, 2.9, 3.3] {
            assert_eq!(nu_sp_density(x), nu_sp_density(-x));
        }
    }

    #[test]
    fn stable_form_matches_closed_form() {
        // the formula as written, away from the origin
        let closed = |x: f64| {
            let x2 = x * x;
            let r = (18.0 * x2 + 1.0) / 27.0 - (x2 * (1.0 + 11.0 * x2 - x2 * x2) / 27.0).sqrt();
            let cb = r.cbrt();
            3f64.sqrt() / (2.0 * std::f64::consts::PI * x.abs()) * ((3.0 * x2 + 1.0) / (9.0 * cb) - cb)
        };
        for i in 1..330 {
            let x = i as f64 * 0.01;
            let (a, b) = (nu_sp_density(x), closed(x));
            assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "x={x}: {a} vs {b}");
        }
        // near zero the closed form approaches the same limit
        assert!((closed(1e-6) - 1.0 / std::f64::consts::PI).abs() < 1e-6);
    }

    #[test]
    fn cdf_endpoints() {
        let s = nu_sp_support();
        assert!(nu_sp_cdf(-s).abs() < 1e-9);
        assert!((nu_sp_cdf(s) - 1.0).abs() < 1e-9);
        assert!((nu_sp_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((nu_sp_quantile(0.5)).abs() < 1e-12);
    }

    #[test]
    fn ks_examples() {
        let cdf = |x: f64| if x < 0.0 { 0.0 } else if x > 1.0 { 1.0 } else { x };
        assert!((ks_distance(&[0.5], cdf).unwrap() - 0.5).abs() < 1e-15);
        let shifted: Vec<f64> = (0..100).map(|i| 10.0 + i as f64 / 100.0).collect();
        assert!((ks_distance(&shifted, cdf).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(ks_distance(&[], cdf), Err(Error::EmptySample)));
    }

    #[test]
    fn histogram_cases() {
        assert!(histogram(&[1.0], 0, None).is_err());
        assert!(histogram(&[1.0], 4, Some((1.0, 1.0))).is_err());
        let one = histogram(&[2.0], 1, None).unwrap();
        assert_eq!(one.density, vec![1.0]);
        let uniform: Vec<f64> = (0..10000).map(|i| (i as f64 + 0.5) / 10000.0).collect();
        let h = histogram(&uniform, 10, Some((0.0, 1.0))).unwrap();
        assert!(h.density.iter().all(|&d| (d - 1.0).abs() < 1e-9));
        let area: f64 = h.density.iter().sum::<f64>() * 0.1;
        assert!((area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_column_output() {
        let mut buf = Vec::new();
        write_two_column(&mut buf, ("x", "density"), [(0.0, 1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,density\n0,1\n0.5,2\n");
    }
}
