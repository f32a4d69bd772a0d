use permwig::{Complex64, DiagKind, EntrySpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn beta_strategy() -> impl Strategy<Value = Complex64> {
    (0.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn spec_strategy() -> impl Strategy<Value = EntrySpec> {
    prop_oneof![
        beta_strategy().prop_map(|b| EntrySpec::gaussian(b).unwrap()),
        Just(EntrySpec::rademacher_real()),
        Just(EntrySpec::rademacher_complex_xix()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_variance(spec in spec_strategy()) {
        prop_assert!((spec.mixed_moment(1, 1).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn conjugate_symmetry(spec in spec_strategy(), p in 0usize..5, q in 0usize..4) {
        let a = spec.mixed_moment(p, q).unwrap();
        let b = spec.mixed_moment(q, p).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn moments_within_bounds(spec in spec_strategy()) {
        let bounds = spec.moment_bounds().to_vec();
        for l in 0..=spec.max_order() {
            for p in 0..=l {
                let m = spec.mixed_moment(p, l - p).unwrap().norm();
                prop_assert!(m <= bounds[l] + 1e-12, "|E X^{} X*^{}| = {} > {}", p, l - p, m, bounds[l]);
            }
        }
    }

    #[test]
    fn pseudovariance_in_disc(beta in beta_strategy()) {
        let spec = EntrySpec::gaussian(beta).unwrap();
        prop_assert!((spec.mixed_moment(2, 0).unwrap() - beta).norm() < 1e-12);
        prop_assert!(spec.beta().norm() <= 1.0 + 1e-12);
    }
}

#[test]
fn outside_disc_rejected() {
    assert!(EntrySpec::gaussian(Complex64::new(0.9, 0.9)).is_err());
}

// Empirical mixed moments from 1e5 draws against the exact table, per p + q <= 4.
#[test]
fn sample_matches_analytic() {
    let specs = [
        EntrySpec::gaussian(Complex64::new(0.0, 0.0)).unwrap(),
        EntrySpec::gaussian(Complex64::new(-0.5, 0.0)).unwrap(),
        EntrySpec::gaussian(Complex64::new(0.3, 0.6)).unwrap(),
        EntrySpec::rademacher_real(),
        EntrySpec::rademacher_complex_xix(),
    ];
    let draws = 100_000;
    for (si, spec) in specs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(si as u64);
        let xs: Vec<Complex64> = (0..draws).map(|_| spec.sample_entry(&mut rng)).collect();
        for l in 1..=4 {
            for p in 0..=l {
                let q = l - p;
                let vals: Vec<Complex64> = xs.iter().map(|x| x.powu(p as u32) * x.conj().powu(q as u32)).collect();
                let mean = vals.iter().sum::<Complex64>() / draws as f64;
                let var = vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (draws - 1) as f64;
                let se = (var / draws as f64).sqrt();
                let exact = spec.mixed_moment(p, q).unwrap();
                assert!(
                    (mean - exact).norm() <= 4.0 * se + 1e-12,
                    "spec {si} p={p} q={q}: {mean} vs {exact} (se {se})"
                );
            }
        }
    }
}

#[test]
fn diagonal_is_real_with_configured_variance() {
    let spec = EntrySpec::rademacher_real().with_diagonal(DiagKind::GaussianReal, 3.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 100_000;
    let var = (0..n).map(|_| spec.sample_diagonal(&mut rng).powi(2)).sum::<f64>() / n as f64;
    assert!((var - 3.0).abs() < 0.06);
}
