//! Fixtures shared by the benchmarks.

use specpencil_core::{construct, pencil, CycNumber, ExactMatrix, Permutation, VarSet};

/// Pencil x·A + y·B + z·AB − I for the Fourier pair of order n.
pub fn fourier_pencil(n: usize) -> ExactMatrix {
    let a = construct::omega_diag(n);
    let b = construct::b_hat(n);
    let ab = a.matmul(&b).expect("square");
    pencil(&[a, b, ab], VarSet::xyz()).expect("same size")
}

/// A non-affine pair for n = 5, so B is dense.
pub fn dense_pair() -> (Permutation, Permutation) {
    (Permutation::new(vec![0, 1, 3, 2, 4]).expect("bijection"), Permutation::new(vec![1, 0, 2, 4, 3]).expect("bijection"))
}

/// Σ_k (k+1)/(k+2)·w^k at conductor m.
pub fn dense_number(m: u32) -> CycNumber {
    (0..m as i64).fold(CycNumber::zero(), |acc, k| {
        acc + specpencil_core::root_of_unity(m, k) * CycNumber::from_ratio(k + 1, k + 2)
    })
}
