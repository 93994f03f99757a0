use std::sync::Arc;

use proptest::prelude::*;

use dissect_core::complexes::{check_bounds, euler_audit, mismatched_regions, validate, SimplexFamily, Status};
use dissect_core::exactgeom::{det, int, simplex_volume, strict_common_point, HalfspaceSystem};
use dissect_core::extremal::{model_for, solve, Budget, Mode, Sense};
use dissect_core::families::placing_triangulation;
use dissect_core::simplexrel::{classify_pair, enumerate_simplices, PairRelation};
use dissect_core::{PointConfiguration, Rat};

use dissect_verify::oracle_relation;

const BUDGET: u64 = 2_000_000;

fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), n)
}

fn to_rat(m: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Full-dimensional integer point sets, possibly with interior points.
fn configuration(min: usize, max: usize) -> impl Strategy<Value = Arc<PointConfiguration>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 3), min..=max).prop_filter_map("degenerate", |rows| {
        PointConfiguration::from_ints(&rows).ok().map(Arc::new)
    })
}

/// Distinct lifts onto the paraboloid z = x^2 + y^2: every point is a vertex.
fn convex_configuration(min: usize, max: usize) -> impl Strategy<Value = Arc<PointConfiguration>> {
    prop::collection::btree_set((-2i64..=2, -2i64..=2), min..=max).prop_filter_map("degenerate", |xy| {
        let rows: Vec<Vec<i64>> = xy.into_iter().map(|(x, y)| vec![x, y, x * x + y * y]).collect();
        PointConfiguration::from_ints(&rows).ok().map(Arc::new)
    })
}

fn optimum(config: &Arc<PointConfiguration>, mode: Mode, sense: Sense) -> dissect_core::extremal::SolveResult {
    let model = model_for(config, mode, sense).unwrap();
    let r = solve(&model, Budget::nodes(BUDGET)).unwrap();
    assert!(r.proven, "{mode:?} {sense:?} not proven within {BUDGET} nodes");
    r
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn det_is_alternating_and_multilinear(m in small_matrix(4), row in prop::collection::vec(-4i64..=4, 4), k in -3i64..=3) {
        let base = det(&to_rat(&m)).unwrap();
        let mut swapped = m.clone();
        swapped.swap(0, 2);
        prop_assert_eq!(det(&to_rat(&swapped)).unwrap(), -base.clone());
        let mut scaled = m.clone();
        scaled[1] = scaled[1].iter().map(|x| x * k).collect();
        prop_assert_eq!(det(&to_rat(&scaled)).unwrap(), &base * int(k));
        let mut replaced = m.clone();
        replaced[1] = row.clone();
        let mut summed = m.clone();
        summed[1] = m[1].iter().zip(&row).map(|(x, y)| x + y).collect();
        prop_assert_eq!(det(&to_rat(&summed)).unwrap(), base + det(&to_rat(&replaced)).unwrap());
    }

    #[test]
    fn det_is_multiplicative(a in small_matrix(3), b in small_matrix(3)) {
        let ab = mat_mul(&a, &b);
        prop_assert_eq!(
            det(&to_rat(&ab)).unwrap(),
            det(&to_rat(&a)).unwrap() * det(&to_rat(&b)).unwrap()
        );
    }

    #[test]
    fn volume_ignores_vertex_order_and_unimodular_maps(
        config in configuration(4, 4),
        perm in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle(),
        shear in -3i64..=3,
        shift in prop::collection::vec(-5i64..=5, 3),
    ) {
        let v = simplex_volume(&config, &[0, 1, 2, 3]).unwrap();
        prop_assert_eq!(simplex_volume(&config, &perm).unwrap(), v.clone());
        // x' = x + shear * y, then translate: determinant one
        let mapped: Vec<Vec<i64>> = (0..4)
            .map(|i| {
                let p: Vec<i64> = config.point(i).0.iter().map(|r| r.to_integer().try_into().unwrap()).collect();
                vec![p[0] + shear * p[1] + shift[0], p[1] + shift[1], p[2] + shift[2]]
            })
            .collect();
        let image = PointConfiguration::from_ints(&mapped).unwrap();
        prop_assert_eq!(simplex_volume(&image, &[0, 1, 2, 3]).unwrap(), v);
    }

    #[test]
    fn classification_matches_the_oracle(config in configuration(5, 7)) {
        let simplices = enumerate_simplices(&config);
        for (i, a) in simplices.iter().enumerate() {
            for b in &simplices[..i] {
                let r = classify_pair(&config, a, b).unwrap();
                prop_assert_eq!(r, classify_pair(&config, b, a).unwrap());
                prop_assert_eq!(r, oracle_relation(&config, &a.labels, &b.labels), "{:?} {:?}", a.labels, b.labels);
                let sys = |s: &[usize]| {
                    let pts: Vec<_> = s.iter().map(|&l| config.point(l)).collect();
                    HalfspaceSystem::from_simplex(&pts).unwrap()
                };
                let lp = strict_common_point(&sys(&a.labels), &sys(&b.labels)).unwrap();
                prop_assert_eq!(lp.feasible, r == PairRelation::InteriorOverlap);
            }
        }
    }

    #[test]
    fn placing_triangulations_satisfy_the_edge_identity(
        config in configuration(5, 9),
        seed in any::<u64>(),
    ) {
        let n = config.len();
        let mut order: Vec<usize> = (0..n).collect();
        // deterministic rotation plus reversal from the seed
        order.rotate_left((seed % n as u64) as usize);
        if seed & 1 == 1 {
            order.reverse();
        }
        let t = placing_triangulation(&config, &order).unwrap();
        prop_assert_eq!(t.volume(), config.total_volume().unwrap());
        prop_assert!(euler_audit(&t).unwrap().holds());
    }

    #[test]
    fn validation_ignores_insertion_order(config in configuration(5, 8), rot in 0usize..16) {
        let order: Vec<usize> = (0..config.len()).collect();
        let t = placing_triangulation(&config, &order).unwrap();
        let mut sets = t.label_sets();
        let k = rot % sets.len();
        sets.rotate_left(k);
        sets.reverse();
        let shuffled = SimplexFamily::new(config.clone(), &sets).unwrap();
        prop_assert_eq!(validate(&shuffled).status, Status::Triangulation);
        let mut overlapping = sets.clone();
        overlapping.push(sets[0].clone());
        let family = SimplexFamily::new(config.clone(), &overlapping);
        if let Ok(f) = family {
            prop_assert_eq!(validate(&f).status, Status::Invalid);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn extremal_values_nest_and_certify(config in convex_configuration(5, 8)) {
        let min_t = optimum(&config, Mode::Triangulation, Sense::Min);
        let min_d = optimum(&config, Mode::Dissection, Sense::Min);
        let max_t = optimum(&config, Mode::Triangulation, Sense::Max);
        let max_d = optimum(&config, Mode::Dissection, Sense::Max);
        prop_assert!(min_d.optimum <= min_t.optimum);
        prop_assert!(min_t.optimum <= max_t.optimum);
        prop_assert!(max_t.optimum <= max_d.optimum);
        for r in [&min_t, &max_t] {
            let mut c = r.certificate.clone();
            prop_assert_eq!(c.validate().status, Status::Triangulation);
            prop_assert!(euler_audit(&c).unwrap().holds());
        }
        let n = config.len();
        for r in [&min_d, &max_d] {
            let mut c = r.certificate.clone();
            let status = c.validate().status;
            prop_assert!(status.is_dissection());
            if status == Status::Dissection {
                let b = check_bounds(&c).unwrap();
                prop_assert!(b.ok);
                prop_assert!(n - 2 <= c.size() && c.size() <= (n - 2) * (n - 3) / 2);
                prop_assert!(!mismatched_regions(&c).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn optima_ignore_label_order(
        config in convex_configuration(5, 7),
        perm_seed in prop::collection::vec(any::<u32>(), 7),
    ) {
        let n = config.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| perm_seed[i]);
        let permuted = Arc::new(
            PointConfiguration::new(3, perm.iter().map(|&i| config.point(i).clone()).collect()).unwrap(),
        );
        for (mode, sense) in [
            (Mode::Triangulation, Sense::Min),
            (Mode::Triangulation, Sense::Max),
            (Mode::Dissection, Sense::Max),
        ] {
            prop_assert_eq!(optimum(&config, mode, sense).optimum, optimum(&permuted, mode, sense).optimum);
        }
    }
}
