use std::collections::BTreeMap;

use flagtrop::exactalg::{integer_left_inverse, poly_eval, rat, rat_int};
use flagtrop::flagcomb::{positive_distinguished_subexpression, w0_word};
use flagtrop::flagmat::is_flag_matroid;
use flagtrop::mrcells::{certify_tnn_flag, phi, reconstruct_from_extremal, recover_parameters};
use flagtrop::plucker::generate_all;
use flagtrop::tropic::{
    in_fldr, in_fldr_nonneg, in_three_term_dressian_nonneg, in_tnn_tropical_flag_variety,
    puiseux_valuation_check, trop_evaluate, trop_phi, trop_psi,
};
use flagtrop::{CellAtlas, Coords, Mat, Permutation, Poly, Rat, Subset, TropVal, TropicalPoint};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn positive_rat() -> impl Strategy<Value = Rat> {
    (1i64..=12, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

fn rational_matrix(n: usize) -> impl Strategy<Value = Mat<Rat>> {
    prop::collection::vec(small_rat(), n * n)
        .prop_map(move |entries| Mat::new(n, n, entries).unwrap())
        .prop_filter("invertible", |m| !m.determinant().unwrap().is_zero())
}

fn cell_index(n: usize) -> impl Strategy<Value = usize> {
    let len = CellAtlas::for_n(n).unwrap().len();
    0..len
}

fn poly3() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), -4i64..=4), 0..5)
        .prop_map(|terms| Poly::from_terms(3, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n as u8).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::new(images).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relations_vanish_on_matrices(m in (3usize..=5).prop_flat_map(rational_matrix)) {
        let p = m.all_pluecker().unwrap();
        for rel in generate_all(m.rows()).unwrap().iter() {
            prop_assert!(rel.evaluate(&p).unwrap().is_zero(), "{rel}");
        }
    }

    #[test]
    fn row_operations_rescale_levels(m in rational_matrix(4), f in small_rat()) {
        // adding a multiple of row 1 to row 3 leaves every coordinate fixed
        let mut m2 = m.clone();
        for c in 0..4 {
            let v = m2.get(2, c) + &f * m.get(0, c);
            m2.set(2, c, v);
        }
        prop_assert_eq!(m.all_pluecker().unwrap(), m2.all_pluecker().unwrap());
    }

    #[test]
    fn poly_arithmetic_matches_evaluation(
        p in poly3(),
        q in poly3(),
        x in prop::collection::vec(small_rat(), 3),
    ) {
        let (pv, qv) = (poly_eval(&p, &x).unwrap(), poly_eval(&q, &x).unwrap());
        prop_assert_eq!(poly_eval(&(&p * &q), &x).unwrap(), &pv * &qv);
        prop_assert_eq!(poly_eval(&(&p + &q), &x).unwrap(), &pv + &qv);
        prop_assert_eq!(poly_eval(&(&p - &q), &x).unwrap(), &pv - &qv);
    }

    #[test]
    fn pds_is_positive_distinguished(w in permutation(5), v in permutation(5)) {
        let word = positive_distinguished_subexpression(&w0_word(5), &w).unwrap().induced_word();
        prop_assert!(word.is_reduced());
        prop_assert_eq!(word.product(), w.clone());
        match positive_distinguished_subexpression(&word, &v) {
            Ok(sub) => {
                prop_assert!(v.bruhat_leq(&w).unwrap());
                prop_assert!(sub.is_positive_distinguished());
                prop_assert_eq!(sub.product(), v);
            }
            Err(_) => prop_assert!(!v.bruhat_leq(&w).unwrap()),
        }
    }

    #[test]
    fn bruhat_is_compatible_with_length(v in permutation(5), w in permutation(5)) {
        if v.bruhat_leq(&w).unwrap() {
            prop_assert!(v.length() <= w.length());
            prop_assert_eq!(w.bruhat_leq(&v).unwrap(), v == w);
        }
        prop_assert!(Permutation::identity(5).bruhat_leq(&v).unwrap());
        prop_assert!(v.bruhat_leq(&Permutation::longest(5)).unwrap());
    }

    #[test]
    fn unimodular_systems_invert(ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..12)) {
        // a 4x3 matrix [I; 0] scrambled by unimodular row operations
        let mut rows: Vec<Vec<i64>> = (0..4).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
        for (a, b, f) in ops {
            if a != b {
                for j in 0..3 {
                    rows[a][j] += f * rows[b][j];
                }
            }
        }
        let l = integer_left_inverse(&rows, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: i64 = (0..4).map(|k| l[i][k] * rows[k][j]).sum();
                prop_assert_eq!(v, i64::from(i == j));
            }
        }
    }

    #[test]
    fn cell_points_are_nonnegative_and_certified(
        (idx, a) in cell_index(4).prop_flat_map(|i| {
            let r = CellAtlas::for_n(4).unwrap().cells()[i].dimension();
            (Just(i), prop::collection::vec(positive_rat(), r))
        })
    ) {
        let atlas = CellAtlas::for_n(4).unwrap();
        let cell = &atlas.cells()[idx];
        let p = phi(cell, &a).unwrap();
        prop_assert!(p.iter().all(|(s, x)| !x.is_zero() == cell.support().contains(&s)));
        prop_assert!(is_flag_matroid(cell.support()));
        prop_assert_eq!(&recover_parameters(cell, &p).unwrap(), &a);
        let cert = certify_tnn_flag(&atlas, &p).unwrap().unwrap();
        prop_assert_eq!((&cert.v, &cert.w), (cell.v(), cell.w()));

        let extremal: BTreeMap<Subset, Rat> =
            cell.extremal().iter().map(|s| (s, p.get(&s).clone())).collect();
        prop_assert_eq!(reconstruct_from_extremal(cell, &extremal).unwrap(), p);
    }

    #[test]
    fn scaled_points_recover_the_same_parameters(
        (idx, a, scale) in cell_index(4).prop_flat_map(|i| {
            let r = CellAtlas::for_n(4).unwrap().cells()[i].dimension();
            (Just(i), prop::collection::vec(positive_rat(), r), prop::collection::vec(positive_rat(), 3))
        })
    ) {
        let atlas = CellAtlas::for_n(4).unwrap();
        let cell = &atlas.cells()[idx];
        let p = phi(cell, &a).unwrap();
        let mut scaled = p.clone();
        for (s, x) in p.iter() {
            scaled.set(&s, x * &scale[s.len() - 1]);
        }
        prop_assert_eq!(recover_parameters(cell, &scaled).unwrap(), a);
    }

    #[test]
    fn tropical_image_points(
        (idx, c) in cell_index(4).prop_flat_map(|i| {
            let r = CellAtlas::for_n(4).unwrap().cells()[i].dimension();
            (Just(i), prop::collection::vec(-10i64..=10, r))
        })
    ) {
        let atlas = CellAtlas::for_n(4).unwrap();
        let cell = &atlas.cells()[idx];
        let c_rat: Vec<Rat> = c.iter().map(|&x| rat_int(x)).collect();
        let p = trop_phi(cell, &c_rat).unwrap();
        prop_assert_eq!(&p.support(), cell.support());
        prop_assert!(in_fldr_nonneg(&p).unwrap());
        prop_assert!(in_three_term_dressian_nonneg(&p).unwrap());
        prop_assert!(in_tnn_tropical_flag_variety(&atlas, &p).unwrap());
        prop_assert_eq!(trop_psi(cell, &p).unwrap(), c_rat);
        prop_assert!(puiseux_valuation_check(cell, &c).unwrap());
    }

    #[test]
    fn predicates_ignore_level_shifts(
        values in prop::collection::vec(prop::option::weighted(0.85, -3i64..=3), 14),
        shifts in prop::collection::vec(-5i64..=5, 3),
    ) {
        let coords = Coords::from_values(4, values.iter().map(|v| v.map_or(TropVal::Inf, TropVal::int)).collect());
        let shifted = Coords::from_fn(4, |s| coords.get(&s) + &TropVal::int(shifts[s.len() - 1]));
        for rel in generate_all(4).unwrap().iter() {
            let (a, b) = (trop_evaluate(rel, &coords).unwrap(), trop_evaluate(rel, &shifted).unwrap());
            prop_assert_eq!(a.is_solution, b.is_solution);
            prop_assert_eq!(a.is_positive_solution, b.is_positive_solution);
            prop_assert!(!a.is_positive_solution || a.is_solution);
        }
        if let (Ok(p), Ok(q)) = (TropicalPoint::new(coords), TropicalPoint::new(shifted)) {
            prop_assert_eq!(&p, &q);
            prop_assert_eq!(in_fldr(&p).unwrap(), in_fldr(&q).unwrap());
        }
    }

    #[test]
    fn nonneg_dressian_supports_are_flag_matroids(
        values in prop::collection::vec(prop::option::weighted(0.6, -2i64..=2), 14),
    ) {
        let coords = Coords::from_values(4, values.iter().map(|v| v.map_or(TropVal::Inf, TropVal::int)).collect());
        if let Ok(p) = TropicalPoint::new(coords) {
            if in_fldr_nonneg(&p).unwrap() {
                prop_assert!(is_flag_matroid(&p.support()), "{p}");
            }
        }
    }
}
