use permwig::free::{
    catalan, enumerate_nc, enumerate_nc2, free_cumulants_from_moments, is_noncrossing, moments_from_cumulants,
    semicircular_moment,
};
use permwig::{CovarianceSpec, WordTable};
use proptest::prelude::*;

#[test]
fn enumeration_sizes() {
    for n in 0..=10 {
        let all = enumerate_nc(n).unwrap();
        assert_eq!(all.len() as u64, catalan(n), "NC({n})");
        let mut uniq = all.clone();
        uniq.sort_by(|a, b| a.blocks().cmp(b.blocks()));
        uniq.dedup();
        assert_eq!(uniq.len(), all.len(), "duplicates in NC({n})");
        assert!(all.iter().all(|p| is_noncrossing(p.blocks())));
    }
    for m in 0..=8 {
        assert_eq!(enumerate_nc2(2 * m).unwrap().len() as u64, catalan(m));
    }
}

fn diag_cov(labels: usize) -> impl Strategy<Value = CovarianceSpec> {
    proptest::collection::vec(0.1f64..3.0, labels).prop_map(|d| {
        let n = d.len();
        let k: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| if a == b { d[a] } else { 0.0 }).collect()).collect();
        CovarianceSpec::from_k(k).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // no noncrossing pairing matches equal labels in a word whose adjacent
    // letters (cyclically) differ and whose labels alternate between two values
    #[test]
    fn diagonal_k_kills_alternating_words(cov in diag_cov(3), a in 0usize..3, b in 0usize..3, half in 2usize..6) {
        prop_assume!(a != b);
        let word: Vec<usize> = (0..2 * half).map(|i| if i % 2 == 0 { a } else { b }).collect();
        prop_assert_eq!(semicircular_moment(&word, &cov).unwrap(), 0.0);
    }

    #[test]
    fn cumulant_round_trip(vals in proptest::collection::vec(-1.0f64..1.0, 2 + 4 + 8 + 16 + 32 + 64)) {
        let mut it = vals.into_iter();
        let kappa = WordTable::from_fn(2, 6, |_| it.next().unwrap());
        let back = free_cumulants_from_moments(&moments_from_cumulants(&kappa).unwrap()).unwrap();
        for (w, v) in &kappa.values {
            prop_assert!((back.get(w) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn pairings_have_blocks_of_two(m in 1usize..=7) {
        for p in enumerate_nc2(2 * m).unwrap() {
            prop_assert!(p.is_pairing());
        }
    }
}
