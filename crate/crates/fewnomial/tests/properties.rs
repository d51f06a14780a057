use proptest::prelude::*;

use fewnomial::bounds::{
    best_root_bound, component_bounds, curve_feature_bounds, khovanski_fewnomial, ExtInt,
};
use fewnomial::curves::{count_curve_features_with, MomentumMap};
use fewnomial::num::max_norm_dist;
use fewnomial::polytope::{minkowski_sum, normalized_area, Polygon, PolytopeInfo};
use fewnomial::reduce::count_roots;
use fewnomial::transform::{apply_monomial_map, MonomialMap};
use fewnomial::univar::{isolate_expsum_roots, sign_alternations, ExponentialSum};
use fewnomial::{Fewnomial, FewnomialSystem, Term};

fn coeff() -> impl Strategy<Value = f64> {
    (0.2f64..3.0, any::<bool>()).prop_map(|(c, s)| if s { c } else { -c })
}

fn fewnomial(n: usize, m: usize, spread: f64) -> impl Strategy<Value = Fewnomial> {
    prop::collection::vec((coeff(), prop::collection::vec(-spread..spread, n)), m).prop_map(
        move |ts| {
            Fewnomial::new(n, ts.into_iter().map(|(c, a)| Term::new(c, a)).collect()).unwrap()
        },
    )
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-1.5f64..1.5).prop_map(f64::exp), n)
}

fn invertible_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2), 2).prop_filter(
        "well conditioned",
        |m| {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            det.abs() > 0.3
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_gradient_matches_finite_differences(f in fewnomial(3, 4, 3.0), x in point(3)) {
        let g = f.log_gradient(&x).unwrap();
        for i in 0..3 {
            let h = 1e-6f64;
            let mut up = x.clone();
            let mut dn = x.clone();
            up[i] *= h.exp();
            dn[i] *= (-h).exp();
            let fd = (f.evaluate(&up).unwrap() - f.evaluate(&dn).unwrap()) / (2.0 * h);
            let scale = f.terms().iter().map(|t| (t.coeff * t.exponent[i]).abs() * x.iter().zip(&t.exponent).map(|(v, a)| v.powf(*a)).product::<f64>()).sum::<f64>();
            prop_assert!((fd - g[i]).abs() <= 1e-6 * scale.max(1e-12));
        }
    }

    #[test]
    fn log_derivative_agrees_with_gradient(f in fewnomial(2, 5, 3.0), x in point(2)) {
        let g = f.log_gradient(&x).unwrap();
        for (i, gi) in g.iter().enumerate() {
            let d = f.log_derivative(i).evaluate(&x).unwrap();
            prop_assert!((d - gi).abs() <= 1e-10 * (1.0 + d.abs()));
        }
    }

    #[test]
    fn monomial_map_round_trip(m in invertible_matrix(), shift in prop::collection::vec(-1.0f64..1.0, 2), y in point(2)) {
        let mut map = MonomialMap::from_matrix(&m).unwrap();
        map.shift = shift;
        let x = map.to_original(&y).unwrap();
        let back = map.to_mapped(&x).unwrap();
        prop_assert!(max_norm_dist(&back, &y) <= 1e-9 * y.iter().cloned().fold(1.0, f64::max));
    }

    #[test]
    fn mapped_fewnomial_is_composition(f in fewnomial(2, 4, 2.0), m in invertible_matrix(), y in point(2)) {
        let map = MonomialMap::from_matrix(&m).unwrap();
        let g = map.apply(&f).unwrap();
        let x = map.to_original(&y).unwrap();
        let (lhs, rhs) = (g.evaluate(&y).unwrap(), f.evaluate(&x).unwrap());
        let scale = f.evaluate_with_scale(&x).unwrap().1;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale.max(1e-300));
    }

    #[test]
    fn descartes_bounds_isolated_roots(terms in prop::collection::vec((coeff(), -5.0f64..5.0), 1..7)) {
        let mut terms = terms;
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        terms.dedup_by(|a, b| (a.1 - b.1).abs() < 1e-3);
        let es = ExponentialSum::new(&terms).unwrap();
        let r = isolate_expsum_roots(&es, 0.0, f64::INFINITY).unwrap();
        let coeffs: Vec<f64> = terms.iter().map(|t| t.0).collect();
        prop_assert!(r.count_range[1] <= sign_alternations(&coeffs));
        for t in r.values() {
            prop_assert!(t > 0.0);
        }
    }

    #[test]
    fn minkowski_area_is_superadditive(
        p in prop::collection::vec(prop::array::uniform2(-3.0f64..3.0), 3..7),
        q in prop::collection::vec(prop::array::uniform2(-3.0f64..3.0), 3..7),
    ) {
        let (Ok(p), Ok(q)) = (Polygon::hull(&p), Polygon::hull(&q)) else { return Ok(()) };
        let s = minkowski_sum(&p, &q);
        prop_assert!(normalized_area(&s) + 1e-9 >= normalized_area(&p) + normalized_area(&q));
    }

    #[test]
    fn momentum_map_round_trip(pts in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 3..8), z in prop::collection::vec(-1.0f64..1.0, 2)) {
        let Ok(info) = PolytopeInfo::from_points(&pts) else { return Ok(()) };
        let Ok(map) = MomentumMap::new(&info) else { return Ok(()) };
        let q = map.forward_log(&z);
        prop_assert!(map.boundary_distance(&q) > 0.0);
        if let Ok(w) = map.inverse_log(&q) {
            prop_assert!(max_norm_dist(&map.forward_log(&w), &q) < 1e-6);
        }
    }

    #[test]
    fn khovanski_is_monotone(n in 1u64..5, mu in 0u64..12) {
        prop_assert!(khovanski_fewnomial(n, mu) <= khovanski_fewnomial(n, mu + 1));
        prop_assert!(khovanski_fewnomial(n, mu) <= khovanski_fewnomial(n + 1, mu));
    }

    #[test]
    fn component_bounds_are_ordered(n in 1u64..5, m in 1u64..9) {
        let b = component_bounds(n, m).unwrap();
        prop_assert!(b.compact_lower.value <= b.compact_upper.value);
        prop_assert!(b.non_compact_lower.value <= b.non_compact_upper.value);
        prop_assert!(b.compact_upper.value <= b.total_upper.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trinomial_pair_count_respects_bound(f in fewnomial(2, 3, 3.0), g in fewnomial(2, 3, 3.0)) {
        let sys = FewnomialSystem::new(vec![f, g]).unwrap();
        let Ok(r) = count_roots(&sys) else { return Ok(()) };
        let bound = best_root_bound(&sys).unwrap().value;
        prop_assert!(ExtInt::from(r.count() as u64) <= bound);
        prop_assert!(r.count() <= 5);
    }

    #[test]
    fn root_count_is_invariant_under_monomial_maps(f in fewnomial(2, 3, 2.0), g in fewnomial(2, 3, 2.0), m in invertible_matrix()) {
        let sys = FewnomialSystem::new(vec![f, g]).unwrap();
        let map = MonomialMap::from_matrix(&m).unwrap();
        let mapped = apply_monomial_map(&sys, &map).unwrap();
        let (Ok(a), Ok(b)) = (count_roots(&sys), count_roots(&mapped)) else { return Ok(()) };
        if a.certified && b.certified && a.roots.iter().chain(&b.roots).all(|r| !r.suspect) {
            prop_assert_eq!(a.count(), b.count());
            for r in &b.roots {
                let x = map.to_original(&r.x).unwrap();
                let scale = x.iter().cloned().fold(1.0, f64::max);
                prop_assert!(a.roots.iter().any(|p| max_norm_dist(&p.x, &x) <= 1e-6 * scale));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn trinomial_curve_features_within_bounds(f in fewnomial(2, 3, 3.0)) {
        let b = curve_feature_bounds(3, None);
        let c = count_curve_features_with(&f, 8.0, 256).unwrap();
        prop_assert!(ExtInt::from(c.inflections as u64) <= b.inflections.value);
        prop_assert!(ExtInt::from(c.vertical as u64) <= b.vertical.value);
    }
}
