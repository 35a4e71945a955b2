//! Shared fixture groups for integration tests.

use covar_core::{DenseMatrix, FiniteGroupRep};

pub fn mat(rows: usize, cols: usize, e: &[i64]) -> DenseMatrix {
    DenseMatrix::from_i64(rows, cols, e).unwrap()
}

pub fn c2_sign() -> FiniteGroupRep {
    FiniteGroupRep::close(1, 1, &[mat(1, 1, &[-1])], &[mat(1, 1, &[-1])], 100).unwrap()
}

pub fn c2_trivial() -> FiniteGroupRep {
    FiniteGroupRep::close(1, 1, &[mat(1, 1, &[-1])], &[mat(1, 1, &[1])], 100).unwrap()
}

pub fn s2_perm_trivial() -> FiniteGroupRep {
    FiniteGroupRep::close(2, 1, &[mat(2, 2, &[0, 1, 1, 0])], &[mat(1, 1, &[1])], 100).unwrap()
}

pub fn s2_perm_sign() -> FiniteGroupRep {
    FiniteGroupRep::close(2, 1, &[mat(2, 2, &[0, 1, 1, 0])], &[mat(1, 1, &[-1])], 100).unwrap()
}

pub fn c2c2_standard() -> FiniteGroupRep {
    FiniteGroupRep::close(
        2,
        2,
        &[mat(2, 2, &[-1, 0, 0, 1]), mat(2, 2, &[1, 0, 0, -1])],
        &[mat(2, 2, &[-1, 0, 0, 1]), mat(2, 2, &[1, 0, 0, -1])],
        100,
    )
    .unwrap()
}

pub fn s3_gens() -> Vec<DenseMatrix> {
    vec![
        mat(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]),
        mat(3, 3, &[0, 1, 0, 0, 0, 1, 1, 0, 0]),
    ]
}

pub fn s3_perm_trivial() -> FiniteGroupRep {
    FiniteGroupRep::close(3, 1, &s3_gens(), &[mat(1, 1, &[1]), mat(1, 1, &[1])], 100).unwrap()
}

/// Sign of a permutation matrix rep: transposition ↦ −1, 3-cycle ↦ +1.
pub fn s3_perm_sign() -> FiniteGroupRep {
    FiniteGroupRep::close(3, 1, &s3_gens(), &[mat(1, 1, &[-1]), mat(1, 1, &[1])], 100).unwrap()
}

/// Every fixture group used by the acceptance-style sweeps.
pub fn all_fixtures() -> Vec<(&'static str, FiniteGroupRep)> {
    vec![
        ("c2_sign", c2_sign()),
        ("c2_trivial", c2_trivial()),
        ("s2_perm_trivial", s2_perm_trivial()),
        ("s2_perm_sign", s2_perm_sign()),
        ("c2c2_standard", c2c2_standard()),
        ("s3_perm_trivial", s3_perm_trivial()),
        ("s3_perm_sign", s3_perm_sign()),
    ]
}
