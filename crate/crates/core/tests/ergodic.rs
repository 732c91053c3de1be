use proptest::prelude::*;
use solyanik_core::ergodic::*;
use solyanik_core::rational::ratio;
use solyanik_core::tauberian::Witness;
use solyanik_core::*;

/// `Z_a x Z_b` relabelled by a permutation, with the maps replaced by powers.
fn relabelled_pair(a: usize, b: usize, perm: &[usize], p1: usize, p2: usize) -> FiniteSystem {
    let base = FiniteSystem::product_cyclic(&[a, b]).unwrap();
    let size = a * b;
    let power = |map: &[usize], k: usize| -> Vec<usize> {
        (0..size).map(|x| (0..k).fold(x, |y, _| map[y])).collect()
    };
    let maps = [power(&base.maps()[0], p1), power(&base.maps()[1], p2)]
        .iter()
        .map(|m| {
            let mut out = vec![0; size];
            for x in 0..size {
                out[perm[x]] = perm[m[x]];
            }
            out
        })
        .collect();
    FiniteSystem::new(base.weights().to_vec(), maps).unwrap()
}

fn system_strategy() -> impl Strategy<Value = FiniteSystem> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(a, b)| {
            (Just(a), Just(b), Just((0..a * b).collect::<Vec<_>>()).prop_shuffle(), 1..=a, 1..=b)
        })
        .prop_map(|(a, b, perm, p1, p2)| relabelled_pair(a, b, &perm, p1, p2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identity_on_relabelled_products(sys in system_strategy(), mask in any::<u64>(), r in 1i64..=3, t in 1i64..=2, kind in prop::sample::select(vec![BasisKind::Box, BasisKind::CenteredBall, BasisKind::UncenteredBall])) {
        let family = FamilySpec::new(kind, 2, r).enumerate(DEFAULT_ENUMERATION_CAP).unwrap();
        let set = atoms_from_mask(sys.size(), mask);
        let report = transference_identity_check(&sys, &set, &family, t).unwrap();
        prop_assert!(report.pass, "{:?}", report.counterexample);
    }

    #[test]
    fn finite_horizon_chain_holds(sys in system_strategy(), mask in any::<u64>(), r in 1i64..=2, t in 1i64..=3, a in 1u64..10) {
        let family = BasisFamily::boxes(2, r, DEFAULT_ENUMERATION_CAP).unwrap();
        let set = atoms_from_mask(sys.size(), mask);
        let chain = horizon_chain(&sys, &set, &family, &ratio(a, 10), t).unwrap();
        prop_assert!(chain.holds(), "{chain:?}");
    }

    #[test]
    fn wiener_bound_on_relabelled_products(sys in system_strategy(), mask in 1u64..(1 << 16), a in 1u64..20) {
        let set = atoms_from_mask(sys.size(), mask);
        prop_assume!(set.iter().any(|&b| b));
        let (lhs, rhs) = wiener_sides(&sys, &set, &ratio(a, 20), 2 * sys.size()).unwrap();
        prop_assert!(lhs <= rhs);
    }
}

#[test]
fn exhaustive_ergodic_value_is_reproduced_by_its_witness() {
    let sys = FiniteSystem::product_cyclic(&[7]).unwrap();
    let family = BasisFamily::centered_balls(1, 8, DEFAULT_ENUMERATION_CAP).unwrap();
    let grid = [ratio(1, 2), ratio(2, 3), ratio(3, 4), ratio(9, 10)];
    let sweep = ergodic_tauberian_sweep(&sys, &family, &grid, 20).unwrap();
    let mut previous = None;
    for est in &sweep {
        let Witness::Atoms(atoms) = &est.witness else { panic!("atoms expected") };
        let set: Vec<bool> = (0..sys.size()).map(|i| atoms.contains(&i)).collect();
        let field = ergodic_maximal_field(&sys, &set, &family).unwrap();
        let level = ergodic_level_measure(&sys, &field, &est.alpha).unwrap();
        assert_eq!(level / sys.measure(&set), est.value);
        assert!(est.value >= ratio(1, 1));
        if let Some(p) = previous {
            assert!(est.value <= p);
        }
        previous = Some(est.value.clone());
    }
}

#[test]
fn exhaustive_matches_brute_force_with_uneven_weights() {
    // two orbits of sizes 2 and 3 with different weights
    let weights = vec![ratio(1, 4), ratio(1, 4), ratio(1, 6), ratio(1, 6), ratio(1, 6)];
    let sys = FiniteSystem::new(weights, vec![vec![1, 0, 3, 4, 2]]).unwrap();
    let family = BasisFamily::boxes(1, 4, DEFAULT_ENUMERATION_CAP).unwrap();
    let alpha = ratio(2, 5);
    let est = ergodic_tauberian_exhaustive(&sys, &family, &alpha, 20).unwrap();
    let mut best = ratio(0, 1);
    for mask in 1u64..32 {
        let set = atoms_from_mask(5, mask);
        let field = ergodic_maximal_field(&sys, &set, &family).unwrap();
        let value = ergodic_level_measure(&sys, &field, &alpha).unwrap() / sys.measure(&set);
        best = best.max(value);
    }
    assert_eq!(est.value, best);
}

#[test]
fn exhaustive_respects_the_atom_cap() {
    let sys = FiniteSystem::product_cyclic(&[5, 5]).unwrap();
    let family = BasisFamily::boxes(2, 2, DEFAULT_ENUMERATION_CAP).unwrap();
    let err = ergodic_tauberian_exhaustive(&sys, &family, &ratio(1, 2), 20).unwrap_err();
    assert!(err.is_cap_exceeded());
}
