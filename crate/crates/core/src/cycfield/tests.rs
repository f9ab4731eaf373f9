use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn z(m: u32, k: i64) -> CycNumber {
    root_of_unity(m, k)
}

#[test]
fn cyclotomic_examples() {
    assert_eq!(cyclotomic_polynomial(1), vec![q(-1, 1), q(1, 1)]);
    assert_eq!(cyclotomic_polynomial(4), vec![q(1, 1), q(0, 1), q(1, 1)]);
    assert_eq!(
        cyclotomic_polynomial(12),
        vec![q(1, 1), q(0, 1), q(-1, 1), q(0, 1), q(1, 1)]
    );
}

#[test]
fn roots_of_unity() {
    let i = z(4, 1);
    assert_eq!(i.conductor(), 4);
    assert_eq!(i.coeffs(), vec![q(0, 1), q(1, 1)]);
    assert!((z(3, 1) + z(3, 2) + CycNumber::one()).is_zero());
    assert_eq!(z(5, 2) * z(5, 4), z(5, 1));
    assert!(z(7, 0).is_one());
    assert_eq!(z(6, -1), z(6, 5));
}

#[test]
fn inverse_of_one_plus_zeta8() {
    let a = CycNumber::one() + z(8, 1);
    let inv = a.inv().unwrap();
    assert!((inv.clone() * &a).is_one());
    // (1 + ζ8)^{-1} = (1 - ζ8 + ζ8^2 - ζ8^3) / 2 since ζ8^4 = -1
    let expected = CycNumber::from_coeffs(8, &[q(1, 2), q(-1, 2), q(1, 2), q(-1, 2)]);
    assert_eq!(inv, expected);
}

#[test]
fn inverse_of_zero_fails() {
    assert_eq!(CycNumber::zero().inv(), Err(Error::DivisionByZero));
    assert_eq!(z(5, 0).sub(&CycNumber::one()).inv(), Err(Error::DivisionByZero));
}

#[test]
fn mixed_conductor_product() {
    let p = z(2, 1) * z(3, 1);
    assert_eq!(p.conductor(), 6);
    assert_eq!(p, z(6, 5));
    assert_eq!(p.coeffs(), z(6, 5).coeffs());
}

#[test]
fn conjugation() {
    assert_eq!(z(5, 1).conjugate(), z(5, 4));
    let r = CycNumber::from_ratio(3, 7);
    assert_eq!(r.conjugate(), r);
    assert!(z(12, 5).is_unimodular());
    assert!(!CycNumber::from_int(2).is_unimodular());
}

#[test]
fn promotion() {
    assert_eq!(z(3, 1).promote(6).unwrap().coeffs(), z(6, 2).coeffs());
    assert!(CycNumber::one().promote(24).unwrap().is_one());
    assert_eq!(
        z(4, 1).promote(6),
        Err(Error::ConductorMismatch { from: 4, to: 6 })
    );
}

#[test]
fn demotion_recognizes_subfields() {
    let x = z(3, 1) + CycNumber::from_ratio(2, 5);
    let up = x.promote(24).unwrap();
    let down = up.demote(3).unwrap();
    assert_eq!(down.conductor(), 3);
    assert_eq!(down.coeffs(), x.coeffs());
    assert!(z(8, 1).promote(24).unwrap().demote(3).is_none());
    // √2 = ζ8 + ζ8^7 does not lie in Q(ζ4)
    assert!((z(8, 1) + z(8, 7)).demote(4).is_none());
    assert_eq!((z(8, 2) + z(8, 6)).demote(1), Some(CycNumber::zero()));
}

#[test]
fn text_rendering() {
    let x = CycNumber::from_ratio(1, 5) + CycNumber::from_ratio(2, 5) * z(5, 3);
    assert_eq!(x.to_string(), "conductor 5: 1/5 + 2/5*w^3");
    assert_eq!(z(5, 1).neg().terms_string(), "-w");
    assert_eq!(CycNumber::zero().terms_string(), "0");
    assert_eq!((CycNumber::one() - z(8, 2)).terms_string(), "1 - w^2");
}

#[test]
fn triples_round_trip() {
    let x = CycNumber::from_ratio(-3, 4) + z(12, 3).scale(&q(5, 9));
    let t = x.term_triples();
    let back = CycNumber::from_term_triples(x.conductor(), &t).unwrap();
    assert_eq!(back, x);
}

#[test]
fn large_values_spill_to_big() {
    let big = CycNumber::from_int(i64::MAX) + z(5, 1);
    let sq = big.clone() * &big;
    let back = sq.div(&big).unwrap();
    assert_eq!(back, big);
    let h = CycNumber::from_ratio(1, i64::MAX).pow(3);
    assert!((h * CycNumber::from_int(i64::MAX).pow(3)).is_one());
}

#[test]
fn powers_and_root_sums() {
    for m in [2u32, 3, 4, 5, 7, 8, 9, 12, 15] {
        let mut sum = CycNumber::zero();
        for k in 0..m as i64 {
            assert!(z(m, k).pow(m).is_one());
            sum = sum + z(m, k);
        }
        assert!(sum.is_zero(), "m = {m}");
    }
}

const CONDUCTORS: [u32; 5] = [3, 4, 5, 8, 12];

fn element() -> impl Strategy<Value = CycNumber> {
    (0..CONDUCTORS.len()).prop_flat_map(|i| {
        let m = CONDUCTORS[i];
        let phi = euler_phi(m) as usize;
        prop::collection::vec((-9i64..=9, 1i64..=6), phi).prop_map(move |cs| {
            let coeffs: Vec<BigRational> = cs.iter().map(|&(n, d)| q(n, d)).collect();
            CycNumber::from_coeffs(m, &coeffs)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(a in element(), b in element(), c in element()) {
        prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((a.inv().unwrap() * &a).is_one());
        }
    }

    #[test]
    fn conjugate_is_a_ring_homomorphism(a in element(), b in element()) {
        prop_assert_eq!((&a * &b).conjugate(), a.conjugate() * b.conjugate());
        prop_assert_eq!((&a + &b).conjugate(), a.conjugate() + b.conjugate());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
    }

    #[test]
    fn equality_is_coefficientwise(a in element(), b in element()) {
        let l = num_integer::Integer::lcm(&a.conductor(), &b.conductor());
        let same = a.promote(l).unwrap().coeffs() == b.promote(l).unwrap().coeffs();
        prop_assert_eq!(a == b, same);
        prop_assert_eq!(a == b, (&a - &b).is_zero());
    }

    #[test]
    fn promote_demote_round_trip(a in element(), factor in 1u32..4) {
        let m = a.conductor();
        let up = a.promote(m * factor).unwrap();
        prop_assert_eq!(&up, &a);
        let down = up.demote(m).unwrap();
        prop_assert!((&down - &a).is_zero());
    }
}
