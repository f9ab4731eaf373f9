//! Coefficient vectors over a common denominator.
//!
//! `Small` is used whenever every value fits in an `i64`; intermediate work is
//! done in checked `i128` and spills into `Big` on overflow. After
//! normalization the denominator is positive, coprime to the content of the
//! numerators, and equals 1 for zero, so derived equality is value equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use super::field::Field;

pub(crate) type SmallNum = SmallVec<[i64; 8]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Coeffs {
    Small { num: SmallNum, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Coeffs {
    pub(crate) fn zero(len: usize) -> Coeffs {
        Coeffs::Small { num: SmallVec::from_elem(0, len), den: 1 }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            Coeffs::Small { num, .. } => num.iter().all(|&c| c == 0),
            Coeffs::Big { num, .. } => num.iter().all(Zero::is_zero),
        }
    }

    /// Numerators and denominator as big integers.
    pub(crate) fn to_big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Coeffs::Small { num, den } => {
                (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den))
            }
            Coeffs::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    pub(crate) fn from_i128(mut num: Vec<i128>, mut den: i128) -> Coeffs {
        debug_assert!(den != 0);
        if den < 0 {
            // i128::MIN cannot occur: inputs are products of i64 values
            den = -den;
            for c in num.iter_mut() {
                *c = -*c;
            }
        }
        if num.iter().all(|&c| c == 0) {
            return Coeffs::zero(num.len());
        }
        if den != 1 {
            let mut g = den as u128;
            for &c in &num {
                if g == 1 {
                    break;
                }
                g = gcd_u128(g, c.unsigned_abs());
            }
            if g > 1 {
                let g = g as i128;
                den /= g;
                for c in num.iter_mut() {
                    *c /= g;
                }
            }
        }
        let small: Option<SmallNum> = num.iter().map(|&c| i64::try_from(c).ok()).collect();
        match (small, i64::try_from(den)) {
            (Some(num), Ok(den)) => Coeffs::Small { num, den },
            _ => Coeffs::Big {
                num: num.into_iter().map(BigInt::from).collect(),
                den: BigInt::from(den),
            },
        }
    }

    pub(crate) fn from_big(mut num: Vec<BigInt>, mut den: BigInt) -> Coeffs {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if num.iter().all(Zero::is_zero) {
            return Coeffs::zero(num.len());
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            den /= &g;
            for c in num.iter_mut() {
                *c /= &g;
            }
        }
        let small: Option<SmallNum> = num.iter().map(ToPrimitive::to_i64).collect();
        match (small, den.to_i64()) {
            (Some(num), Some(den)) => Coeffs::Small { num, den },
            _ => Coeffs::Big { num, den },
        }
    }

    pub(crate) fn neg(&self) -> Coeffs {
        match self {
            Coeffs::Small { num, den } => {
                let negated: Option<SmallNum> = num.iter().map(|c| c.checked_neg()).collect();
                match negated {
                    Some(num) => Coeffs::Small { num, den: *den },
                    None => {
                        let (num, den) = self.to_big();
                        Coeffs::from_big(num.into_iter().map(|c| -c).collect(), den)
                    }
                }
            }
            Coeffs::Big { num, den } => Coeffs::Big {
                num: num.iter().map(|c| -c).collect(),
                den: den.clone(),
            },
        }
    }

    pub(crate) fn add(&self, other: &Coeffs) -> Coeffs {
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) = (self, other) {
            if let Some(c) = add_small(a, *da, b, *db) {
                return c;
            }
        }
        let (a, da) = self.to_big();
        let (b, db) = other.to_big();
        let l = da.lcm(&db);
        let fa = &l / &da;
        let fb = &l / &db;
        let num = a.iter().zip(&b).map(|(x, y)| x * &fa + y * &fb).collect();
        Coeffs::from_big(num, l)
    }

    /// Product reduced modulo Φ_m.
    pub(crate) fn mul(&self, other: &Coeffs, field: &Field) -> Coeffs {
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) = (self, other) {
            if let Some(c) = mul_small(a, *da, b, *db, field) {
                return c;
            }
        }
        let (a, da) = self.to_big();
        let (b, db) = other.to_big();
        let phi = field.phi;
        let mut r = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[i + j] += x * y;
            }
        }
        for d in (phi..2 * phi - 1).rev() {
            let c = std::mem::take(&mut r[d]);
            if c.is_zero() {
                continue;
            }
            for i in 0..phi {
                r[d - phi + i] -= &c * field.cyclo[i];
            }
        }
        r.truncate(phi);
        Coeffs::from_big(r, da * db)
    }

    /// Multiply every numerator by the rational `p / q`.
    pub(crate) fn scale(&self, p: &BigInt, q: &BigInt) -> Coeffs {
        let (num, den) = self.to_big();
        Coeffs::from_big(num.into_iter().map(|c| c * p).collect(), den * q)
    }

    /// Σ_k c_k · image(k), where each image is an integer vector of `out_len`.
    pub(crate) fn map_basis<'a>(
        &self,
        out_len: usize,
        image: impl Fn(usize) -> &'a [i64],
    ) -> Coeffs {
        if let Coeffs::Small { num, den } = self {
            let mut r = vec![0i128; out_len];
            let mut ok = true;
            'outer: for (k, &c) in num.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (slot, &v) in r.iter_mut().zip(image(k)) {
                    match (c as i128).checked_mul(v as i128).and_then(|p| slot.checked_add(p)) {
                        Some(s) => *slot = s,
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                return Coeffs::from_i128(r, *den as i128);
            }
        }
        let (num, den) = self.to_big();
        let mut r = vec![BigInt::zero(); out_len];
        for (k, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, &v) in r.iter_mut().zip(image(k)) {
                *slot += c * v;
            }
        }
        Coeffs::from_big(r, den)
    }
}

fn add_small(a: &[i64], da: i64, b: &[i64], db: i64) -> Option<Coeffs> {
    let (da, db) = (da as i128, db as i128);
    let num: Vec<i128> = if da == db {
        a.iter().zip(b).map(|(&x, &y)| x as i128 + y as i128).collect()
    } else {
        let g = gcd_u128(da as u128, db as u128) as i128;
        let fa = db / g;
        let fb = da / g;
        let l = da.checked_mul(fa)?;
        let num = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| (x as i128).checked_mul(fa)?.checked_add((y as i128).checked_mul(fb)?))
            .collect::<Option<Vec<i128>>>()?;
        return Some(Coeffs::from_i128(num, l));
    };
    Some(Coeffs::from_i128(num, da))
}

fn mul_small(a: &[i64], da: i64, b: &[i64], db: i64, field: &Field) -> Option<Coeffs> {
    let phi = field.phi;
    let mut r = [0i128; 64];
    let mut heap;
    let r: &mut [i128] = if 2 * phi - 1 <= r.len() {
        &mut r[..2 * phi - 1]
    } else {
        heap = vec![0i128; 2 * phi - 1];
        &mut heap[..]
    };
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let p = (x as i128) * (y as i128);
            r[i + j] = r[i + j].checked_add(p)?;
        }
    }
    for d in (phi..2 * phi - 1).rev() {
        let c = r[d];
        if c == 0 {
            continue;
        }
        r[d] = 0;
        for i in 0..phi {
            let k = field.cyclo[i];
            if k != 0 {
                r[d - phi + i] = r[d - phi + i].checked_sub(c.checked_mul(k as i128)?)?;
            }
        }
    }
    let den = (da as i128) * (db as i128);
    Some(Coeffs::from_i128(r[..phi].to_vec(), den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_sign_and_content() {
        let c = Coeffs::from_i128(vec![2, -4], -6);
        assert_eq!(c, Coeffs::Small { num: SmallVec::from_slice(&[-1, 2]), den: 3 });
        assert_eq!(Coeffs::from_i128(vec![0, 0], 7), Coeffs::zero(2));
    }

    #[test]
    fn spills_and_returns() {
        let big = i64::MAX as i128 * 4;
        let c = Coeffs::from_i128(vec![big], 1);
        assert!(matches!(c, Coeffs::Big { .. }));
        let back = Coeffs::from_i128(vec![big], 4);
        assert_eq!(back, Coeffs::Small { num: SmallVec::from_slice(&[i64::MAX]), den: 1 });
    }

    #[test]
    fn binary_gcd() {
        assert_eq!(gcd_u128(12, 18), 6);
        assert_eq!(gcd_u128(0, 5), 5);
        assert_eq!(gcd_u128(17, 1), 1);
        assert_eq!(gcd_u128(1 << 70, 1 << 65), 1 << 65);
    }
}
