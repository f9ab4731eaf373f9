use proptest::prelude::*;
use specpencil_core::construct::{h4_family_at, is_complex_hadamard};
use specpencil_core::perms::{affine_group, enumerate_sn};
use specpencil_core::{b_from_hadamard, b_hat, fourier_matrix, root_of_unity, BigRational, CycNumber, ExactMatrix, Permutation};

const CONDUCTORS: [u32; 5] = [3, 4, 5, 8, 12];

fn number(m: u32) -> impl Strategy<Value = CycNumber> {
    prop::collection::vec((0..m as i64, -4i64..=4, 1i64..=3), 0..4).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(CycNumber::zero(), |acc, (k, a, b)| acc.add(&root_of_unity(m, k).scale(&BigRational::new(a.into(), b.into()))))
    })
}

fn matrix(m: u32, n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(number(m), n * n)
        .prop_map(move |v| ExactMatrix::from_constants(v.chunks(n).map(|r| r.to_vec()).collect()).unwrap())
}

fn det(a: &ExactMatrix) -> CycNumber {
    a.determinant().unwrap().constant_value().unwrap_or_else(CycNumber::zero)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn determinant_is_multiplicative(
        (a, b) in (0usize..5, 1usize..=3).prop_flat_map(|(ci, n)| (matrix(CONDUCTORS[ci], n), matrix(CONDUCTORS[ci], n)))
    ) {
        let ab = a.matmul(&b).unwrap();
        prop_assert_eq!(det(&ab), det(&a).mul(&det(&b)));
    }

    #[test]
    fn adjoint_determinant_is_conjugate(
        a in (0usize..5, 1usize..=4).prop_flat_map(|(ci, n)| matrix(CONDUCTORS[ci], n))
    ) {
        prop_assert_eq!(det(&a.adjoint().unwrap()), det(&a).conjugate());
    }

    #[test]
    fn fast_determinant_agrees_with_expansion(a in (1usize..=5).prop_flat_map(|n| matrix(8, n))) {
        prop_assert!(a.determinant().unwrap() == a.determinant_naive().unwrap());
    }
}

#[test]
fn permutation_matrices_have_unit_determinant() {
    for n in 1..=5 {
        for p in enumerate_sn(n).unwrap() {
            let d = det(&p.matrix());
            assert!(d == CycNumber::one() || d == CycNumber::from_int(-1), "{:?}", p.images());
        }
    }
}

#[test]
fn shift_relations() {
    for n in 2..=8 {
        assert!(b_hat(n).pow(n as u32).unwrap().is_identity(), "n = {n}");
        assert!(b_from_hadamard(&fourier_matrix(n)).unwrap() == b_hat(n), "n = {n}");
    }
}

#[test]
fn h4_family_is_hadamard_on_24th_roots() {
    for k in 0..24 {
        assert!(is_complex_hadamard(&h4_family_at(&root_of_unity(24, k)).unwrap()), "k = {k}");
    }
}

#[test]
fn affine_group_is_closed() {
    for n in [4, 5] {
        let g = affine_group(n);
        for p in &g {
            assert!(p.inverse().in_affine_group());
            for q in &g {
                assert!(p.compose(q).unwrap().in_affine_group());
            }
        }
        let members = enumerate_sn(n).unwrap().filter(Permutation::in_affine_group).count();
        assert_eq!(members, g.len());
    }
}
