use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use proptest::prelude::*;
use solyanik_core::lattice::{box_average, lift_measure, lifted_box_average};
use solyanik_core::maximal::default_window;
use solyanik_core::rational::ratio;
use solyanik_core::*;

type FamilyCache = Mutex<HashMap<(BasisKind, usize, i64), Arc<BasisFamily>>>;

fn family(kind: BasisKind, n: usize, r: i64) -> Arc<BasisFamily> {
    static CACHE: OnceLock<FamilyCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().unwrap().get(&(kind, n, r)) {
        return f.clone();
    }
    let f = Arc::new(
        FamilySpec::new(kind, n, r).with_q(2).enumerate(DEFAULT_ENUMERATION_CAP).unwrap(),
    );
    cache.lock().unwrap().insert((kind, n, r), f.clone());
    f
}

/// A window of dimension `n` and a random subset of it.
fn set_strategy(n: usize, max_side: usize) -> impl Strategy<Value = LatticeSet> {
    (
        prop::collection::vec(-3i64..3, n),
        prop::collection::vec(1usize..=max_side, n),
        any::<u64>(),
        0.05f64..0.95,
    )
        .prop_map(|(lo, sides, seed, density)| {
            let hi: Vec<i64> = lo.iter().zip(&sides).map(|(l, s)| l + *s as i64 - 1).collect();
            let w = Window::new(lo, hi).unwrap();
            let mut state = seed | 1;
            let cells: Vec<bool> = (0..w.cell_count())
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % 1000) as f64 / 1000.0 < density
                })
                .collect();
            LatticeSet::from_indicator(w, &cells)
        })
}

fn kind_strategy(n: usize) -> impl Strategy<Value = BasisKind> {
    if n == 1 {
        prop::sample::select(BasisKind::ALL.to_vec()).boxed()
    } else {
        prop::sample::select(vec![BasisKind::Box, BasisKind::CenteredBall, BasisKind::UncenteredBall])
            .boxed()
    }
}

fn instance() -> impl Strategy<Value = (LatticeSet, BasisKind, i64)> {
    (1usize..=3).prop_flat_map(|n| {
        let side = if n == 3 { 4 } else { 8 };
        let r_max = if n == 3 { 3 } else { 4 };
        (set_strategy(n, side), kind_strategy(n), 1i64..=r_max)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn fast_field_matches_naive((set, kind, r) in instance()) {
        let f = family(kind, set.dim(), r);
        let w = default_window(&set, &f).unwrap();
        prop_assert_eq!(maximal_field(&set, &f, &w).unwrap(), maximal_field_naive(&set, &f, &w).unwrap());
    }

    #[test]
    fn field_is_translation_covariant((set, kind, r) in instance(), shift in prop::collection::vec(-5i64..5, 3)) {
        let n = set.dim();
        let f = family(kind, n, r);
        let shift = &shift[..n];
        let w = default_window(&set, &f).unwrap();
        let moved = set.translate(shift).unwrap();
        let field = maximal_field(&set, &f, &w).unwrap();
        let moved_field = maximal_field(&moved, &f, &w.translate(shift).unwrap()).unwrap();
        prop_assert_eq!(field.values(), moved_field.values());
    }

    #[test]
    fn field_vanishes_outside_the_dilation((set, kind, r) in instance()) {
        let f = family(kind, set.dim(), r);
        let wide = set.window().dilate(r + 1).unwrap();
        let field = maximal_field(&set, &f, &wide).unwrap();
        let reach = default_window(&set, &f).unwrap();
        for (m, v) in field.iter() {
            if !reach.contains(&m) {
                prop_assert_eq!(v, &ratio(0, 1));
            }
            if set.contains(&m) {
                prop_assert_eq!(v, &ratio(1, 1));
            }
        }
    }

    #[test]
    fn larger_families_dominate((set, _kind, r) in instance()) {
        let n = set.dim();
        let centered = family(BasisKind::CenteredBall, n, r);
        let uncentered = family(BasisKind::UncenteredBall, n, r);
        let boxes = family(BasisKind::Box, n, r);
        let bigger_boxes = family(BasisKind::Box, n, r + 1);
        prop_assert!(centered.is_subfamily_of(&uncentered));
        prop_assert!(boxes.is_subfamily_of(&bigger_boxes));
        let w = set.window().dilate(r).unwrap();
        for (small, big) in [(&centered, &uncentered), (&boxes, &bigger_boxes)] {
            let a = maximal_field(&set, small, &w).unwrap();
            let b = maximal_field(&set, big, &w).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!(x <= y);
            }
        }
    }

    #[test]
    fn level_sets_are_antitone((set, kind, r) in instance(), a in 1u64..20, b in 1u64..20) {
        let f = family(kind, set.dim(), r);
        let field = maximal_field(&set, &f, &default_window(&set, &f).unwrap()).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        let low = field.level_set(&ratio(lo, 20)).unwrap();
        let high = field.level_set(&ratio(hi, 20)).unwrap();
        prop_assert!(high.is_subset(&low));
        prop_assert!(set.iter().all(|p| high.contains(p)));
    }

    #[test]
    fn lift_identity((set, _kind, r) in instance(), pick in any::<prop::sample::Index>(), m in prop::collection::vec(-6i64..6, 3)) {
        let f = family(BasisKind::Box, set.dim(), r);
        let element = pick.get(f.elements());
        let m = &m[..set.dim()];
        prop_assert_eq!(
            lifted_box_average(&set, m, element).unwrap(),
            box_average(&set, m, element).unwrap()
        );
        prop_assert_eq!(lift_measure(&set), set.len() as u64);
    }
}

#[test]
fn one_dimensional_uncentered_with_unit_grid_is_the_box_family() {
    for r in 1..=6 {
        let boxes = BasisFamily::boxes(1, r, DEFAULT_ENUMERATION_CAP).unwrap();
        let balls = BasisFamily::uncentered_balls(1, r, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(boxes.trace_set(), balls.trace_set());
    }
}
