//! Property-based checks: Boolean-algebra identities of the interval
//! measure, metric axioms, and group invariance of the wall pseudo-metrics.

use proptest::prelude::*;
use wallspace::cube::{standard_cubing, tree_wallspace};
use wallspace::group::free::FreeWord;
use wallspace::interval::{Density, IntervalSet};
use wallspace::space::{folner_wallspace, FolnerSchedule, Point};

const EPS: f64 = 1e-9;

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((-40i64..40, 1i64..12), 0..6).prop_map(|raw| {
        IntervalSet::from_intervals(
            raw.into_iter()
                .map(|(lo, w)| (lo as f64 / 2.0, (lo + w) as f64 / 2.0)),
        )
    })
}

fn lattice_point(n: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(-15i64..=15, n).prop_map(Point::lattice)
}

fn word() -> impl Strategy<Value = FreeWord> {
    prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..8)
        .prop_map(FreeWord::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // measure is a valuation: m(A Δ B) = m(A) + m(B) - 2 m(A ∩ B)
    #[test]
    fn symmetric_difference_valuation(a in interval_set(), b in interval_set()) {
        for density in [Density::Lebesgue, Density::UniformAtoms { weight: 0.5 }] {
            let lhs = density.measure(&a.symmetric_difference(&b));
            let rhs = density.measure(&a) + density.measure(&b)
                - 2.0 * density.measure(&a.intersection(&b));
            prop_assert!((lhs - rhs).abs() < EPS);
        }
    }

    #[test]
    fn union_intersection_additive(a in interval_set(), b in interval_set()) {
        for density in [Density::Lebesgue, Density::UniformAtoms { weight: 1.0 }] {
            let lhs = density.measure(&a.union(&b)) + density.measure(&a.intersection(&b));
            let rhs = density.measure(&a) + density.measure(&b);
            prop_assert!((lhs - rhs).abs() < EPS);
        }
    }

    #[test]
    fn difference_complements(a in interval_set(), b in interval_set()) {
        let rebuilt = a.difference(&b).union(&a.intersection(&b));
        prop_assert!((rebuilt.lebesgue() - a.lebesgue()).abs() < EPS);
        prop_assert!(a.difference(&b).intersection(&b).lebesgue() < EPS);
    }

    // standard cubing: metric axioms and translation invariance
    #[test]
    fn cubing_metric_axioms(
        p in lattice_point(3),
        q in lattice_point(3),
        r in lattice_point(3),
        g in prop::collection::vec(-10i64..=10, 3),
    ) {
        let w = standard_cubing(3);
        let d = |a: &Point, b: &Point| w.pseudometric(a, b);
        prop_assert_eq!(d(&p, &p), 0.0);
        prop_assert_eq!(d(&p, &q), d(&q, &p));
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + EPS);
        let shift = |a: &Point| {
            Point::lattice(a.ints.iter().zip(&g).map(|(&x, &t)| x + t))
        };
        prop_assert_eq!(d(&shift(&p), &shift(&q)), d(&p, &q));
    }

    // tree wallspace: # is the word metric, invariant under left translation
    #[test]
    fn tree_metric_matches_words(u in word(), v in word(), g in word()) {
        let w = tree_wallspace(2);
        let d = w.pseudometric(&Point::tree(u.clone()), &Point::tree(v.clone()));
        prop_assert_eq!(d, u.distance(&v) as f64);
        let dg = w.pseudometric(
            &Point::tree(g.mul(&u)),
            &Point::tree(g.mul(&v)),
        );
        prop_assert_eq!(dg, d);
    }

    // Fölner wallspace: pseudo-metric axioms and translation invariance
    #[test]
    fn folner_metric_axioms(
        p in lattice_point(2),
        q in lattice_point(2),
        r in lattice_point(2),
        g in prop::collection::vec(-6i64..=6, 2),
    ) {
        let w = folner_wallspace(2, &FolnerSchedule::standard(2, 3));
        let d = |a: &Point, b: &Point| w.pseudometric(a, b);
        prop_assert_eq!(d(&p, &p), 0.0);
        prop_assert_eq!(d(&p, &q), d(&q, &p));
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + EPS);
        let shift = |a: &Point| {
            Point::lattice(a.ints.iter().zip(&g).map(|(&x, &t)| x + t))
        };
        prop_assert!((d(&shift(&p), &shift(&q)) - d(&p, &q)).abs() < EPS);
    }
}
