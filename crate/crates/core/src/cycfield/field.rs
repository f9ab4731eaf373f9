use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Per-conductor tables, built once and shared for the life of the process.
#[derive(Debug)]
pub(crate) struct Field {
    pub(crate) m: u32,
    pub(crate) phi: usize,
    /// Φ_m, lowest degree first; monic, so `cyclo[phi] == 1`.
    pub(crate) cyclo: Vec<i64>,
    /// `powers[e]` is x^e mod Φ_m for 0 <= e < m.
    pub(crate) powers: Vec<Vec<i64>>,
}

type Registry = RwLock<HashMap<u32, &'static OnceLock<Field>>>;

static REGISTRY: OnceLock<Registry> = OnceLock::new();

pub(crate) fn field(m: u32) -> &'static Field {
    assert!(m >= 1, "conductor must be positive");
    let registry = REGISTRY.get_or_init(Default::default);
    let existing = registry.read().expect("field registry poisoned").get(&m).copied();
    let slot = match existing {
        Some(slot) => slot,
        None => *registry
            .write()
            .expect("field registry poisoned")
            .entry(m)
            .or_insert_with(|| Box::leak(Box::new(OnceLock::new()))),
    };
    // The registry lock is released here, so building Φ_m may recurse into
    // proper divisors without deadlocking.
    slot.get_or_init(|| Field::build(m))
}

impl Field {
    fn build(m: u32) -> Field {
        let cyclo_big = cyclotomic_integer(m);
        let cyclo: Vec<i64> = cyclo_big
            .iter()
            .map(|c| c.to_i64().expect("cyclotomic coefficient exceeds i64"))
            .collect();
        let phi = cyclo.len() - 1;

        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        if phi > 0 {
            cur[0] = 1;
        }
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x, then fold the degree-phi coefficient back
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] = cur[i]
                        .checked_sub(top.checked_mul(cyclo[i]).expect("overflow in x^e mod Φ"))
                        .expect("overflow in x^e mod Φ");
                }
            }
        }
        Field { m, phi, cyclo, powers }
    }
}

fn divisors(m: u32) -> impl Iterator<Item = u32> {
    (1..=m).filter(move |d| m.is_multiple_of(*d))
}

/// Integer coefficients of Φ_m, by exact division of x^m - 1 by Φ_d for
/// every proper divisor d of m.
fn cyclotomic_integer(m: u32) -> Vec<BigInt> {
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[m as usize] = BigInt::from(1);
    for d in divisors(m).filter(|&d| d < m) {
        poly = div_monic(&poly, &field(d).cyclo);
    }
    poly
}

/// Exact quotient of `num` by a monic divisor; panics if the remainder is nonzero.
fn div_monic(num: &[BigInt], den: &[i64]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem: Vec<BigInt> = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Coefficients of the m-th cyclotomic polynomial, constant term first.
///
/// Panics if `m == 0`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigRational> {
    field(m)
        .cyclo
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

/// Euler's totient, which is also the degree of Φ_m.
pub fn euler_phi(m: u32) -> u32 {
    let mut result = m;
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(m: u32) -> Vec<i64> {
        field(m).cyclo.clone()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(ints(1), vec![-1, 1]);
        assert_eq!(ints(2), vec![1, 1]);
        assert_eq!(ints(3), vec![1, 1, 1]);
        assert_eq!(ints(4), vec![1, 0, 1]);
        assert_eq!(ints(6), vec![1, -1, 1]);
        assert_eq!(ints(8), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn phi_12_by_division() {
        // x^12 - 1 = Φ1 Φ2 Φ3 Φ4 Φ6 Φ12
        let mut prod: Vec<BigInt> = vec![BigInt::from(1)];
        for d in [1u32, 2, 3, 4, 6] {
            let f = &field(d).cyclo;
            let mut out = vec![BigInt::zero(); prod.len() + f.len() - 1];
            for (i, a) in prod.iter().enumerate() {
                for (j, &b) in f.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            prod = out;
        }
        let mut x12 = vec![BigInt::zero(); 13];
        x12[0] = BigInt::from(-1);
        x12[12] = BigInt::from(1);
        let phi12: Vec<i64> = div_monic(&x12, &prod.iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>())
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect();
        assert_eq!(phi12, vec![1, 0, -1, 0, 1]);
        assert_eq!(ints(12), phi12);
    }

    #[test]
    fn degree_is_totient() {
        for m in 1..=60 {
            assert_eq!(field(m).phi as u32, euler_phi(m), "m = {m}");
        }
    }

    #[test]
    fn power_table_wraps() {
        let f = field(5);
        // x^4 = -1 - x - x^2 - x^3 mod Φ5
        assert_eq!(f.powers[4], vec![-1, -1, -1, -1]);
        assert_eq!(f.powers[0], vec![1, 0, 0, 0]);
    }

    #[test]
    fn concurrent_first_use() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| field(210).phi))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), 48);
        }
    }
}
