use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qmflab::modgroup::{cusp_equivalent, in_gamma_m, random_gamma_m, MoebiusMap, RationalCusp};
use qmflab::qknots::{gauss_binomial, ExactBackend, RootOfUnity};

fn cusp() -> impl Strategy<Value = RationalCusp> {
    (-20i64..=20, 1i64..=12).prop_map(|(p, q)| RationalCusp::new(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_matrices_lie_in_the_group(m in 1u32..=12, seed in any::<u64>(), neg in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gamma_m(m, 10_000, neg, &mut rng);
        prop_assert!(in_gamma_m(m, &g));
        prop_assert!(g.max_abs_entry() <= 10_000);
        prop_assert_eq!(g.d < 0, neg);
        let back: MoebiusMap = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn cusp_equivalence_is_symmetric_with_valid_witnesses(m in 1u32..=4, a in cusp(), b in cusp()) {
        let (ab, w) = cusp_equivalent(m, &a, &b);
        let (ba, _) = cusp_equivalent(m, &b, &a);
        prop_assert_eq!(ab, ba);
        if let Some(g) = w {
            prop_assert!(in_gamma_m(m, &g));
            prop_assert_eq!(g.apply_cusp(&a), b);
        }
    }

    #[test]
    fn gauss_binomials_are_symmetric(p in 0i64..12, n in 1i64..13, k in 0usize..8) {
        let root = RootOfUnity::new(p % n, n).unwrap();
        let b = ExactBackend::new(&root);
        let n_top = k + 3;
        prop_assert_eq!(gauss_binomial(&b, n_top, k), gauss_binomial(&b, n_top, n_top - k));
    }
}
