//! Randomized algebraic invariants of the exact linear-algebra layer, over
//! both supported fields. Entries are small integers pushed into the field,
//! so every identity is checked exactly — any failure is a real bug, never
//! a tolerance artifact.

use proptest::prelude::*;
use repfun::{FieldSpec, LinalgError, Matrix};

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rational), Just(FieldSpec::Prime(5))]
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (field_strategy(), 0..=max_dim, 0..=max_dim).prop_flat_map(|(field, r, c)| {
        proptest::collection::vec(-20i64..=20, r * c).prop_map(move |entries| {
            Matrix::from_fn(field, r, c, |i, j| field.from_i64(entries[i * c + j]))
        })
    })
}

fn square_strategy(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (field_strategy(), 1..=max_dim).prop_flat_map(|(field, n)| {
        proptest::collection::vec(-20i64..=20, n * n).prop_map(move |entries| {
            Matrix::from_fn(field, n, n, |i, j| field.from_i64(entries[i * n + j]))
        })
    })
}

/// three matrices over one shared field, for the Kronecker laws
fn matrix_triple_strategy(max_dim: usize) -> impl Strategy<Value = (Matrix, Matrix, Matrix)> {
    (field_strategy(), proptest::collection::vec(0..=max_dim, 6)).prop_flat_map(
        |(field, dims)| {
            let (ra, ca, rb, cb, rc, cc) =
                (dims[0], dims[1], dims[2], dims[3], dims[4], dims[5]);
            proptest::collection::vec(-20i64..=20, ra * ca + rb * cb + rc * cc).prop_map(
                move |e| {
                    let a = Matrix::from_fn(field, ra, ca, |i, j| field.from_i64(e[i * ca + j]));
                    let b = Matrix::from_fn(field, rb, cb, |i, j| {
                        field.from_i64(e[ra * ca + i * cb + j])
                    });
                    let c = Matrix::from_fn(field, rc, cc, |i, j| {
                        field.from_i64(e[ra * ca + rb * cb + i * cc + j])
                    });
                    (a, b, c)
                },
            )
        },
    )
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in matrix_strategy(6)) {
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&twice.matrix, &once.matrix);
        prop_assert_eq!(twice.rank, once.rank);
        prop_assert_eq!(twice.pivots, once.pivots);
    }

    #[test]
    fn rank_is_invariant_under_transpose(m in matrix_strategy(6)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_basis_is_annihilated_exactly(m in matrix_strategy(6)) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.rows(), m.cols());
        prop_assert_eq!(kernel.cols(), m.cols() - m.rank());
        prop_assert!(m.mul(&kernel).is_zero());
        // the basis columns are independent
        prop_assert_eq!(kernel.rank(), kernel.cols());
    }

    #[test]
    fn kron_is_associative((a, b, c) in matrix_triple_strategy(3)) {
        let left = a.kron(&b).unwrap().kron(&c).unwrap();
        let right = a.kron(&b.kron(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_succeeds_exactly_on_full_rank(m in square_strategy(6)) {
        match m.inverse() {
            Ok(inv) => {
                prop_assert_eq!(m.rank(), m.rows());
                prop_assert!(inv.mul(&m).is_identity());
                prop_assert!(m.mul(&inv).is_identity());
            }
            Err(LinalgError::Singular) => prop_assert!(m.rank() < m.rows()),
            Err(e) => prop_assert!(false, "unexpected error: {e}"),
        }
    }

    #[test]
    fn solve_recovers_a_constructed_solution(
        m in matrix_strategy(6),
        seed in proptest::collection::vec(-20i64..=20, 0..=6),
    ) {
        let field = m.field();
        let x = Matrix::from_fn(field, m.cols(), 1, |i, _| {
            field.from_i64(seed.get(i).copied().unwrap_or(1))
        });
        let rhs = m.mul(&x);
        let solved = m.solve_linear(&rhs).unwrap();
        match solved {
            Some(y) => prop_assert_eq!(m.mul(&y), rhs),
            None => prop_assert!(false, "a solution exists by construction"),
        }
    }
}
