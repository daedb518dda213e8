//! Property tests for the algebraic invariants of the exact layers.

use mvaut_core::exactq::{rat, ratio, QMatrix, Rational, Subspace};
use mvaut_core::mpoly::MultiPoly;
use mvaut_core::varieties::{
    defining_poly, gram_from_squared, measure_squared, rigidity_matrix, squared_from_gram,
    Configuration, EdgeIndex,
};
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=8).prop_map(|(n, d)| ratio(n, d))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    proptest::collection::vec(small_rational(), rows * cols).prop_map(move |data| {
        QMatrix::from_rows((0..rows).map(|i| data[i * cols..(i + 1) * cols].to_vec()).collect())
    })
}

fn any_small_matrix() -> impl Strategy<Value = QMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))
}

fn small_poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(
        (proptest::collection::vec(0u16..=2, nvars), -5i64..=5),
        0..=4,
    )
    .prop_map(move |terms| {
        let mut p = MultiPoly::zero(nvars);
        for (exps, c) in terms {
            p.add_term(mvaut_core::mpoly::Monomial(exps), rat(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(m in any_small_matrix()) {
        let once = m.rref().rref;
        let twice = once.rref().rref;
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn rank_equals_transpose_rank(m in any_small_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn nullspace_vectors_annihilate(m in any_small_matrix()) {
        let kernel = Subspace::nullspace(&m);
        for i in 0..kernel.dim() {
            let x = kernel.basis().row(i).to_vec();
            prop_assert!(m.mul_vec(&x).iter().all(Rational::is_zero));
        }
        prop_assert_eq!(kernel.dim(), m.cols() - m.rank());
    }

    #[test]
    fn dimension_formula(a in matrix(2, 4), b in matrix(2, 4)) {
        let s1 = Subspace::from_spanning_rows(&a);
        let s2 = Subspace::from_spanning_rows(&b);
        let meet = s1.intersect(&s2).unwrap();
        let join = s1.sum(&s2).unwrap();
        prop_assert_eq!(s1.dim() + s2.dim(), meet.dim() + join.dim());
        prop_assert!(join.contains(&s1).unwrap() && join.contains(&s2).unwrap());
        prop_assert!(s1.contains(&meet).unwrap() && s2.contains(&meet).unwrap());
    }

    #[test]
    fn composition_is_functorial(p in small_poly(3), a in matrix(3, 3), b in matrix(3, 3)) {
        let lhs = p.compose_linear(&a).unwrap().compose_linear(&b).unwrap();
        let rhs = p.compose_linear(&(&a * &b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn invertible_composition_preserves_degree(p in small_poly(3), a in matrix(3, 3)) {
        prop_assume!(!a.det().is_zero());
        prop_assert_eq!(p.compose_linear(&a).unwrap().total_degree(), p.total_degree());
    }

    #[test]
    fn proportionality_is_symmetric_up_to_inversion(
        p in small_poly(3),
        c in (1i64..=7).prop_map(rat),
    ) {
        prop_assume!(!p.is_zero());
        let q = p.scale(&c);
        let forward = q.proportional(&p).unwrap();
        let backward = p.proportional(&q).unwrap();
        prop_assert_eq!(&forward, &c);
        prop_assert_eq!(&forward * &backward, rat(1));
    }

    #[test]
    fn gram_round_trip(m in proptest::collection::vec(small_rational(), 6)) {
        let g = gram_from_squared(&m, 4).unwrap();
        prop_assert_eq!(squared_from_gram(&g), m);
    }

    #[test]
    fn squared_polynomial_vanishes_on_measurements(
        coords in proptest::collection::vec(-9i64..=9, 8),
    ) {
        let p = Configuration::from_int_points(
            2,
            &[&coords[0..2], &coords[2..4], &coords[4..6], &coords[6..8]],
        );
        let m = measure_squared(&p);
        let dp = defining_poly(2).unwrap();
        prop_assert!(dp.squared.eval(&m).unwrap().is_zero());
    }

    #[test]
    fn rigidity_rank_is_bounded(coords in proptest::collection::vec(-9i64..=9, 8)) {
        let p = Configuration::from_int_points(
            2,
            &[&coords[0..2], &coords[2..4], &coords[4..6], &coords[6..8]],
        );
        let edges = EdgeIndex::new(4).edges();
        let r = rigidity_matrix(&p, &edges).unwrap();
        let bound = edges.len().min(if p.affine_span_dim() == 2 { 5 } else { 8 });
        prop_assert!(r.rank() <= bound);
    }
}
