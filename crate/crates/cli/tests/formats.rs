use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use solyanik::formats::{read_family, read_set, read_system, write_family, write_set, write_system};
use solyanik::systems::relabelled_pair;
use solyanik_core::{BasisKind, FamilySpec, LatticeSet, Window};

fn set_strategy() -> impl Strategy<Value = LatticeSet> {
    (1usize..=3)
        .prop_flat_map(|dim| {
            let corners = prop::collection::vec((-5i64..=5, 0i64..4), dim);
            corners.prop_flat_map(|c| {
                let lo: Vec<i64> = c.iter().map(|p| p.0).collect();
                let hi: Vec<i64> = c.iter().map(|p| p.0 + p.1).collect();
                let cells = c.iter().map(|p| p.1 as usize + 1).product::<usize>();
                (Just(lo), Just(hi), prop::collection::vec(any::<bool>(), cells))
            })
        })
        .prop_map(|(lo, hi, cells)| LatticeSet::from_indicator(Window::new(lo, hi).unwrap(), &cells))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sets_round_trip(set in set_strategy()) {
        prop_assert_eq!(read_set("set", &write_set(&set)).unwrap(), set);
    }

    #[test]
    fn families_round_trip(kind in prop::sample::select(BasisKind::ALL.to_vec()), dim in 1usize..=2, r in 1i64..=4, q in 1u64..=2) {
        let (dim, q) = match kind {
            BasisKind::OneSided => (1, 1),
            BasisKind::UncenteredBall => (dim, q),
            _ => (dim, 1),
        };
        let family = FamilySpec::new(kind, dim, r).with_q(q).enumerate(1_000_000).unwrap();
        let parsed = read_family("family", &write_family(&family, q)).unwrap();
        prop_assert_eq!(parsed.q, q);
        prop_assert_eq!(parsed.family.trace_set(), family.trace_set());
        prop_assert_eq!((parsed.family.kind(), parsed.family.truncation()), (kind, r));
    }

    #[test]
    fn systems_round_trip(x in 1usize..=4, y in 1usize..=4, seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..x * y).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let sys = relabelled_pair(x, y, 1, y.min(2), &perm).unwrap();
        let parsed = read_system("system", &write_system(&sys)).unwrap();
        prop_assert_eq!(parsed.weights(), sys.weights());
        prop_assert_eq!(parsed.maps(), sys.maps());
    }
}
