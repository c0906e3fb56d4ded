use giambelli::kernels::DiscreteKernel;
use giambelli::ope::{DiscreteMeasure, EnsembleSpec};
use giambelli::scalar::{q, qi, GaussQ, Q};
use giambelli::symfunc::{schur_at_points, schur_bialternant};
use giambelli::zmeasure::{giambelli_expectation_check, transition_prob, weight_n, MixedZParams, ZParams};
use giambelli::{enumerate_partitions, HalfInt, Partition};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(0i64..7, 0..6).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_parts(&v).unwrap()
    })
}

/// Admissible `(z, z′)` with small denominators, from either series.
fn zparams() -> impl Strategy<Value = ZParams> {
    prop_oneof![
        (1i64..12, 1i64..12, -2i64..3).prop_filter_map("non-integer pair", |(a, b, m)| {
            let z = qi(m) + q(a, 12);
            let zp = qi(m) + q(b, 12);
            ZParams::new(GaussQ::new(z, Q::zero()), GaussQ::new(zp, Q::zero())).ok()
        }),
        (-6i64..6, 1i64..6).prop_map(|(a, b)| {
            let re = q(2 * a + 1, 4);
            ZParams::new(GaussQ::new(re.clone(), q(b, 3)), GaussQ::new(re, -q(b, 3))).unwrap()
        }),
    ]
}

fn xi() -> impl Strategy<Value = Q> {
    (1i64..20).prop_map(|k| q(k, 20))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpose_is_an_involution(lam in partition()) {
        prop_assert_eq!(lam.transpose().transpose(), lam.clone());
        prop_assert_eq!(lam.transpose().size(), lam.size());
    }

    #[test]
    fn frobenius_round_trip(lam in partition()) {
        let f = lam.frobenius();
        prop_assert_eq!(f.p.iter().sum::<usize>() + f.q.iter().sum::<usize>() + f.d(), lam.size());
        prop_assert_eq!(Partition::from_frobenius(&f).unwrap(), lam.clone());
        let cfg = lam.lattice_config();
        prop_assert!(cfg.is_balanced());
        prop_assert_eq!(cfg.to_partition().unwrap(), lam);
    }

    #[test]
    fn dimension_satisfies_branching(lam in partition()) {
        prop_assume!(!lam.is_empty());
        let below: num_bigint::BigUint = lam.predecessors().iter().map(|(mu, _)| mu.dim()).sum();
        prop_assert_eq!(below, lam.dim());
    }

    #[test]
    fn level_weights_sum_to_one(zp in zparams(), n in 0usize..6) {
        let total: Q = enumerate_partitions(n).iter().map(|l| weight_n(l, &zp)).sum();
        prop_assert_eq!(total, Q::one());
    }

    #[test]
    fn transitions_are_stochastic(zp in zparams(), mu in partition()) {
        let total: Q = mu.successors().iter().map(|(l, _)| transition_prob(&mu, l, &zp).unwrap()).sum();
        prop_assert_eq!(total, Q::one());
    }

    #[test]
    fn averaged_giambelli_is_exact(zp in zparams(), x in xi(), lam in partition()) {
        let mp = MixedZParams::new(zp, x).unwrap();
        prop_assert!(giambelli_expectation_check(&lam, &mp).is_zero());
    }

    #[test]
    fn schur_forms_agree(lam in partition(), xs in prop::collection::vec((-9i64..10, 1i64..5), 1..5)) {
        let xs: Vec<Q> = xs.into_iter().enumerate().map(|(i, (a, b))| q(a, b) + qi(20 * i as i64)).collect();
        prop_assert_eq!(schur_bialternant(&lam, &xs).unwrap(), schur_at_points(&lam, &xs));
    }

    #[test]
    fn ensembles_are_normalized_and_determinantal(
        raw in prop::collection::btree_map(-6i64..7, 1i64..5, 2..7),
        n in 1usize..4,
        pick in prop::collection::vec(any::<prop::sample::Index>(), 1..4),
    ) {
        prop_assume!(n <= raw.len());
        let atoms: Vec<Q> = raw.keys().map(|&a| q(a, 2)).collect();
        let weights: Vec<Q> = raw.values().map(|&w| q(w, 3)).collect();
        let spec = EnsembleSpec::new(DiscreteMeasure::new(atoms.clone(), weights).unwrap(), n).unwrap();
        let total: Q = spec.configurations().map(|(_, p)| p.clone()).sum();
        prop_assert_eq!(total, Q::one());
        prop_assert_eq!(spec.partition_function(), spec.hankel_determinant());
        let mut y: Vec<Q> = pick.iter().map(|i| atoms[i.index(atoms.len())].clone()).collect();
        y.sort();
        y.dedup();
        let brute = spec.rho_brute(&y).unwrap();
        prop_assert_eq!(spec.rho_from(&y, |a, b| spec.cd_kernel(a, b)).unwrap(), brute.clone());
        prop_assert_eq!(spec.rho_from(&y, |a, b| spec.residue_kernel(a, b)).unwrap(), brute);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn one_and_two_point_functions_are_probabilities(zp in zparams(), x in xi(), a in -9i64..9, b in -9i64..9) {
        let mp = MixedZParams::new(zp, x).unwrap();
        let k = DiscreteKernel::new(&mp);
        let (x, y) = (HalfInt::from_floor(a), HalfInt::from_floor(b));
        let r1 = k.rho(&[x]).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&r1), "ρ₁ = {}", r1);
        if a != b {
            let r2 = k.rho(&[x, y]).unwrap();
            prop_assert!(r2 >= -1e-9 && r2 <= r1 + 1e-9, "ρ₂ = {} > ρ₁ = {}", r2, r1);
        }
    }
}
