//! Property-based invariants for the exact linear algebra kernel.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use polcert::matrix::{det_bareiss, int_mat_from_i64, mat_mul, smith_normal_form};
use polcert::pullback::{r3, r3_primitive};
use polcert::{parse_lattice, LatticeVector};
use proptest::prelude::*;

fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_diagonal_divisibility_chain(raw in small_matrix(4)) {
        let m = int_mat_from_i64(&raw);
        let (u, d, v) = smith_normal_form(&m);
        // U * M * V = D
        prop_assert_eq!(mat_mul(&mat_mul(&u, &m), &v), d.clone());
        // U and V unimodular
        prop_assert_eq!(det_bareiss(&u).abs(), BigInt::one());
        prop_assert_eq!(det_bareiss(&v).abs(), BigInt::one());
        // D diagonal, nonnegative, each entry dividing the next
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    prop_assert!(d[i][j].is_zero());
                }
            }
            prop_assert!(!d[i][i].is_negative());
            if i > 0 && !d[i - 1][i - 1].is_zero() {
                prop_assert!((&d[i][i] % &d[i - 1][i - 1]).is_zero());
            }
        }
        // |det| preserved
        prop_assert_eq!(det_bareiss(&m).abs(), det_bareiss(&d).abs());
    }

    #[test]
    fn complement_determinant_guard(coords in prop::collection::vec(-3i64..=3, 4)) {
        // in A1+A3, the complement of a primitive nonzero v satisfies
        // |det(v_perp)| * div(v)^2 = |v^2| * |det L|
        let l = parse_lattice("A1+A3").unwrap().evaluate().unwrap();
        let v = LatticeVector(coords);
        prop_assume!(v.0.iter().any(|&x| x != 0));
        let g = v.0.iter().fold(0i64, |a, &b| num_integer::gcd(a, b.abs()));
        prop_assume!(g == 1);
        let norm = l.norm(&v);
        prop_assume!(norm != 0);
        let div = (0..4)
            .map(|i| l.inner(&v, &LatticeVector((0..4).map(|j| (i == j) as i64).collect())))
            .fold(0i64, |a, b| num_integer::gcd(a, b.abs()));
        let (comp, _) = l.orthogonal_complement(&v).unwrap();
        let lhs = comp.determinant().abs() * BigInt::from(div * div);
        let rhs = (BigInt::from(norm) * l.determinant()).abs();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn three_squares_scaling(n in 1i64..=200) {
        prop_assert_eq!(r3(4 * n), r3(n));
        prop_assert!(r3_primitive(n) <= r3(n));
    }
}
