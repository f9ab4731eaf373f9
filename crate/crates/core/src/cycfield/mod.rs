//! Exact arithmetic in cyclotomic fields.
//!
//! A [`CycNumber`] is an element of Q(ζ_m) written as Σ c_k ζ_m^k with
//! 0 <= k < φ(m), i.e. reduced modulo the m-th cyclotomic polynomial. That
//! representation is unique, so zero testing and equality at a common
//! conductor are coefficient comparisons. Operands with different conductors
//! are promoted to the least common multiple before any arithmetic.

mod coeffs;
mod field;
mod text;

pub(crate) use text::fmt_rational;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};
use coeffs::Coeffs;
pub use field::{cyclotomic_polynomial, euler_phi};
use field::{field, Field};

#[derive(Clone)]
pub struct CycNumber {
    field: &'static Field,
    coeffs: Coeffs,
}

/// ζ_m^k as a field element.
pub fn root_of_unity(m: u32, k: i64) -> CycNumber {
    CycNumber::root_of_unity(m, k)
}

impl CycNumber {
    pub fn zero() -> CycNumber {
        CycNumber { field: field(1), coeffs: Coeffs::zero(1) }
    }

    pub fn one() -> CycNumber {
        CycNumber::from_int(1)
    }

    pub fn from_int(v: i64) -> CycNumber {
        CycNumber::from_ratio(v, 1)
    }

    /// `num / den` as a rational element; panics when `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> CycNumber {
        assert!(den != 0, "zero denominator");
        CycNumber { field: field(1), coeffs: Coeffs::from_i128(vec![num as i128], den as i128) }
    }

    pub fn from_rational(q: &BigRational) -> CycNumber {
        CycNumber {
            field: field(1),
            coeffs: Coeffs::from_big(vec![q.numer().clone()], q.denom().clone()),
        }
    }

    /// The element Σ coeffs[k]·ζ_m^k; `coeffs` may be any length and is
    /// reduced modulo Φ_m.
    pub fn from_coeffs(m: u32, coeffs: &[BigRational]) -> CycNumber {
        let f = field(m);
        let mut acc = CycNumber::zero_at(f);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = CycNumber::root_of_unity(m, k as i64).scale(c);
            acc = acc.add_same(&term);
        }
        acc
    }

    pub fn root_of_unity(m: u32, k: i64) -> CycNumber {
        let f = field(m);
        let e = k.rem_euclid(m as i64) as usize;
        let num: Vec<i128> = f.powers[e].iter().map(|&c| c as i128).collect();
        CycNumber { field: f, coeffs: Coeffs::from_i128(num, 1) }
    }

    fn zero_at(f: &'static Field) -> CycNumber {
        CycNumber { field: f, coeffs: Coeffs::zero(f.phi) }
    }

    pub fn conductor(&self) -> u32 {
        self.field.m
    }

    /// Conductor 1 when the value is rational, the storage conductor otherwise.
    pub fn effective_conductor(&self) -> u32 {
        if self.is_rational() {
            1
        } else {
            self.field.m
        }
    }

    /// The φ(m) coefficients of the canonical form.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let (num, den) = self.coeffs.to_big();
        num.into_iter().map(|c| BigRational::new(c, den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn is_one(&self) -> bool {
        match &self.coeffs {
            Coeffs::Small { num, den } => {
                *den == 1 && num[0] == 1 && num[1..].iter().all(|&c| c == 0)
            }
            Coeffs::Big { .. } => false,
        }
    }

    pub fn is_rational(&self) -> bool {
        match &self.coeffs {
            Coeffs::Small { num, .. } => num[1..].iter().all(|&c| c == 0),
            Coeffs::Big { num, .. } => num[1..].iter().all(Zero::is_zero),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            let (num, den) = self.coeffs.to_big();
            Some(BigRational::new(num[0].clone(), den))
        } else {
            None
        }
    }

    /// Same value represented at conductor `m2`, which must be a multiple of
    /// the current conductor.
    pub fn promote(&self, m2: u32) -> Result<CycNumber> {
        let m = self.field.m;
        if m2 == 0 || !m2.is_multiple_of(m) {
            return Err(Error::ConductorMismatch { from: m, to: m2 });
        }
        if m2 == m {
            return Ok(self.clone());
        }
        let dst = field(m2);
        let step = (m2 / m) as usize;
        let coeffs = self.coeffs.map_basis(dst.phi, |k| &dst.powers[k * step]);
        Ok(CycNumber { field: dst, coeffs })
    }

    /// Rewrites the value at conductor `m2`, which must be a multiple of the
    /// effective conductor.
    pub fn rebase(&self, m2: u32) -> Result<CycNumber> {
        if m2 != 0 && m2.is_multiple_of(self.field.m) {
            return self.promote(m2);
        }
        match self.to_rational() {
            Some(r) => CycNumber::from_rational(&r).promote(m2),
            None => Err(Error::ConductorMismatch { from: self.field.m, to: m2 }),
        }
    }

    /// Rewrites the value at conductor `d` (a divisor of the current
    /// conductor) if it lies in Q(ζ_d); `None` otherwise.
    pub fn demote(&self, d: u32) -> Option<CycNumber> {
        let m = self.field.m;
        if d == 0 || !m.is_multiple_of(d) {
            return None;
        }
        // Solve Σ_j a_j · promote(ζ_d^j) = self over Q.
        let small = field(d);
        let step = (m / d) as usize;
        let basis: Vec<Vec<BigRational>> = (0..small.phi)
            .map(|j| {
                self.field.powers[j * step]
                    .iter()
                    .map(|&c| BigRational::from_integer(BigInt::from(c)))
                    .collect()
            })
            .collect();
        let target = self.coeffs();
        let solution = solve_columns(&basis, &target)?;
        Some(CycNumber::from_coeffs(d, &solution))
    }

    fn pair_at_common(&self, other: &CycNumber) -> (CycNumber, CycNumber) {
        let l = self.field.m.lcm(&other.field.m);
        (
            self.promote(l).expect("lcm is a multiple"),
            other.promote(l).expect("lcm is a multiple"),
        )
    }

    fn add_same(&self, other: &CycNumber) -> CycNumber {
        debug_assert_eq!(self.field.m, other.field.m);
        CycNumber { field: self.field, coeffs: self.coeffs.add(&other.coeffs) }
    }

    fn mul_same(&self, other: &CycNumber) -> CycNumber {
        debug_assert_eq!(self.field.m, other.field.m);
        CycNumber { field: self.field, coeffs: self.coeffs.mul(&other.coeffs, self.field) }
    }

    pub fn add(&self, other: &CycNumber) -> CycNumber {
        if self.field.m == other.field.m {
            return self.add_same(other);
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (a, b) = self.pair_at_common(other);
        a.add_same(&b)
    }

    pub fn sub(&self, other: &CycNumber) -> CycNumber {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycNumber {
        CycNumber { field: self.field, coeffs: self.coeffs.neg() }
    }

    pub fn mul(&self, other: &CycNumber) -> CycNumber {
        if self.field.m == other.field.m {
            return self.mul_same(other);
        }
        if let Some(q) = other.rational_scalar() {
            return self.scale(&q);
        }
        if let Some(q) = self.rational_scalar() {
            return other.scale(&q);
        }
        let (a, b) = self.pair_at_common(other);
        a.mul_same(&b)
    }

    /// Conductor-1 values only; used to skip promotion when scaling.
    fn rational_scalar(&self) -> Option<BigRational> {
        if self.field.m == 1 {
            self.to_rational()
        } else {
            None
        }
    }

    /// Multiply by a rational.
    pub fn scale(&self, q: &BigRational) -> CycNumber {
        CycNumber { field: self.field, coeffs: self.coeffs.scale(q.numer(), q.denom()) }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_m.
    pub fn inv(&self) -> Result<CycNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            let inv = q.recip();
            return CycNumber::from_rational(&inv).promote(self.field.m);
        }
        let modulus: Vec<BigRational> = cyclotomic_polynomial(self.field.m);
        let u = poly_inverse_mod(&self.coeffs(), &modulus);
        Ok(CycNumber::from_coeffs(self.field.m, &u))
    }

    pub fn div(&self, other: &CycNumber) -> Result<CycNumber> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> CycNumber {
        let mut base = self.clone();
        let mut acc = CycNumber::one().promote(self.field.m).expect("1 divides m");
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, e: i64) -> Result<CycNumber> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u32))
        }
    }

    /// The automorphism ζ_m ↦ ζ_m^(m-1), i.e. complex conjugation.
    pub fn conjugate(&self) -> CycNumber {
        let f = self.field;
        let m = f.m as usize;
        let coeffs = self.coeffs.map_basis(f.phi, |k| &f.powers[(m - k) % m]);
        CycNumber { field: f, coeffs }
    }

    /// a · conj(a), a non-negative real (totally positive) element.
    pub fn abs_squared(&self) -> CycNumber {
        self.mul_same(&self.conjugate())
    }

    pub fn is_unimodular(&self) -> bool {
        self.abs_squared().is_one()
    }

    /// `[k, numerator, denominator]` triples for the nonzero coefficients.
    pub fn term_triples(&self) -> Vec<(usize, BigInt, BigInt)> {
        let (num, den) = self.coeffs.to_big();
        num.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let q = BigRational::new(c, den.clone());
                (k, q.numer().clone(), q.denom().clone())
            })
            .collect()
    }

    pub fn from_term_triples(m: u32, triples: &[(usize, BigInt, BigInt)]) -> Result<CycNumber> {
        if m == 0 {
            return Err(Error::Parse("conductor must be positive".into()));
        }
        // exponents are taken mod m, so w^m reads as 1
        let m_len = m as usize;
        let len = triples.iter().map(|t| t.0 % m_len + 1).max().unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); len];
        for (k, n, d) in triples {
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            coeffs[k % m_len] += BigRational::new(n.clone(), d.clone());
        }
        Ok(CycNumber::from_coeffs(m, &coeffs))
    }
}

/// Solve Σ_j x_j · columns[j] = target over Q, returning None when the system
/// is inconsistent. Columns are assumed linearly independent.
fn solve_columns(columns: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let cols = columns.len();
    let mut aug: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(pivot_row, p);
        let inv = aug[pivot_row][col].recip();
        for v in aug[pivot_row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot = aug[pivot_row].clone();
                for (x, p) in aug[r].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dn = den.len() - 1;
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = den[dn].recip();
    let mut quot = vec![BigRational::zero(); rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dn] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            let delta = &c * d;
            rem[i + j] -= delta;
        }
        quot[i] = c;
    }
    rem.truncate(dn);
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// u with u·a ≡ 1 (mod modulus); `a` must be nonzero modulo an irreducible
/// modulus.
fn poly_inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Vec<BigRational> {
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<BigRational> = Vec::new();
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    assert_eq!(r0.len(), 1, "gcd with Φ_m must be a nonzero constant");
    let c = r0[0].recip();
    let mut u: Vec<BigRational> = s0.iter().map(|x| x * &c).collect();
    trim(&mut u);
    u
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &CycNumber) -> bool {
        if self.field.m == other.field.m {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.pair_at_common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

impl Default for CycNumber {
    fn default() -> Self {
        CycNumber::zero()
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber({self})")
    }
}

impl From<i64> for CycNumber {
    fn from(v: i64) -> Self {
        CycNumber::from_int(v)
    }
}

impl From<&BigRational> for CycNumber {
    fn from(q: &BigRational) -> Self {
        CycNumber::from_rational(q)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                CycNumber::$method(self, rhs)
            }
        }
        impl $trait<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                CycNumber::$method(&self, &rhs)
            }
        }
        impl $trait<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                CycNumber::$method(&self, rhs)
            }
        }
        impl $assign_trait<&CycNumber> for CycNumber {
            fn $assign_method(&mut self, rhs: &CycNumber) {
                *self = CycNumber::$method(self, rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber::neg(self)
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber::neg(&self)
    }
}

#[cfg(test)]
mod tests;
