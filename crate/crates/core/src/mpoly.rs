//! Sparse multivariate polynomials with cyclotomic coefficients.
//!
//! Variables come from the fixed alphabet `x, y, z, z1, z2`, in that order.
//! Monomials are compared graded-lexicographically: total degree first, then
//! exponents position by position, with a larger exponent of an earlier
//! variable ranking higher (so `x^3 > y^3 > z^3 > 1`). Terms print in
//! descending order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::Signed;

use crate::cycfield::{fmt_rational, CycNumber};
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    X,
    Y,
    Z,
    Z1,
    Z2,
}

impl Var {
    pub const ALL: [Var; MAX_VARS] = [Var::X, Var::Y, Var::Z, Var::Z1, Var::Z2];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::Z1 => "z1",
            Var::Z2 => "z2",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_name(name: &str) -> Result<Var> {
        Var::ALL
            .into_iter()
            .find(|v| v.name() == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered subset of the variable alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u8);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    /// Builds a set from variables listed in canonical order without repeats.
    pub fn new(vars: &[Var]) -> Result<VarSet> {
        let mut bits = 0u8;
        let mut last: Option<Var> = None;
        for &v in vars {
            if last.is_some_and(|l| l >= v) {
                return Err(Error::Parse(format!(
                    "variables must be distinct and ordered x < y < z < z1 < z2, got {}",
                    vars.iter().map(|v| v.name()).collect::<Vec<_>>().join(", ")
                )));
            }
            bits |= 1 << v.index();
            last = Some(v);
        }
        Ok(VarSet(bits))
    }

    pub fn parse<S: AsRef<str>>(names: &[S]) -> Result<VarSet> {
        let vars = names
            .iter()
            .map(|n| Var::from_name(n.as_ref().trim()))
            .collect::<Result<Vec<_>>>()?;
        VarSet::new(&vars)
    }

    pub fn xyz() -> VarSet {
        VarSet::new(&[Var::X, Var::Y, Var::Z]).expect("canonical order")
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn vars(self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.contains(v)).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn without(self, v: Var) -> VarSet {
        VarSet(self.0 & !(1 << v.index()))
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn names(self) -> Vec<String> {
        self.vars().into_iter().map(|v| v.name().to_string()).collect()
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(", "))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Exponent vector indexed by [`Var::index`]; absent variables have exponent 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial([u16; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(v: Var, e: u16) -> Monomial {
        let mut exps = [0; MAX_VARS];
        exps[v.index()] = e;
        Monomial(exps)
    }

    pub fn from_exponents(exps: [u16; MAX_VARS]) -> Monomial {
        Monomial(exps)
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn exponents(&self) -> [u16; MAX_VARS] {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn support(&self) -> VarSet {
        let mut bits = 0u8;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                bits |= 1 << i;
            }
        }
        VarSet(bits)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = self.0;
        for (o, e) in out.iter_mut().zip(other.0) {
            *o += e;
        }
        Monomial(out)
    }

    fn with_exponent(&self, v: Var, e: u16) -> Monomial {
        let mut out = self.0;
        out[v.index()] = e;
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Var::ALL
            .into_iter()
            .filter(|v| self.exponent(*v) > 0)
            .map(|v| match self.exponent(v) {
                1 => v.name().to_string(),
                e => format!("{}^{}", v.name(), e),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: VarSet,
    terms: BTreeMap<Monomial, CycNumber>,
}

impl MPoly {
    pub fn zero(vars: VarSet) -> MPoly {
        MPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: VarSet) -> MPoly {
        MPoly::constant(CycNumber::one(), vars)
    }

    pub fn constant(c: CycNumber, vars: VarSet) -> MPoly {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::ONE, c);
        }
        p
    }

    pub fn var(v: Var, vars: VarSet) -> Result<MPoly> {
        if !vars.contains(v) {
            return Err(Error::VariableNotPresent(v.name().to_string()));
        }
        let mut p = MPoly::zero(vars);
        p.terms.insert(Monomial::var(v, 1), CycNumber::one());
        Ok(p)
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, summing repeats.
    pub fn from_terms(
        vars: VarSet,
        terms: impl IntoIterator<Item = (Monomial, CycNumber)>,
    ) -> Result<MPoly> {
        let mut p = MPoly::zero(vars);
        for (m, c) in terms {
            if !m.support().is_subset(vars) {
                return Err(Error::VarSetMismatch {
                    left: m.support().to_string(),
                    right: vars.to_string(),
                });
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: &CycNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<CycNumber> {
        if self.is_constant() {
            Some(self.terms.get(&Monomial::ONE).cloned().unwrap_or_else(CycNumber::zero))
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycNumber)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> CycNumber {
        self.terms.get(m).cloned().unwrap_or_else(CycNumber::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &CycNumber)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    /// Least common multiple of the coefficients' conductors, treating
    /// rational coefficients as conductor 1.
    pub fn conductor(&self) -> u32 {
        self.terms.values().fold(1, |acc, c| acc.lcm(&c.effective_conductor()))
    }

    /// Same polynomial over a larger variable set.
    pub fn lift(&self, vars: VarSet) -> Result<MPoly> {
        if !self.vars.is_subset(vars) {
            return Err(Error::VarSetMismatch {
                left: self.vars.to_string(),
                right: vars.to_string(),
            });
        }
        Ok(MPoly { vars, terms: self.terms.clone() })
    }

    fn check_vars(&self, other: &MPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarSetMismatch {
                left: self.vars.to_string(),
                right: other.vars.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_vars(other)?;
        let mut out = MPoly::zero(self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(mb), &ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &CycNumber) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.vars);
        }
        MPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, v)| (*m, v.mul(c))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The polynomial in the remaining variables multiplying `v^d`.
    pub fn coefficient_of(&self, v: Var, d: u16) -> Result<MPoly> {
        if !self.vars.contains(v) {
            return Err(Error::VariableNotPresent(v.name().to_string()));
        }
        let mut out = MPoly::zero(self.vars.without(v));
        for (m, c) in &self.terms {
            if m.exponent(v) == d {
                out.terms.insert(m.with_exponent(v, 0), c.clone());
            }
        }
        Ok(out)
    }

    /// Evaluates `v = c`; the result no longer carries `v`.
    pub fn substitute(&self, v: Var, c: &CycNumber) -> Result<MPoly> {
        if !self.vars.contains(v) {
            return Err(Error::VariableNotPresent(v.name().to_string()));
        }
        let max = self.degree_in(v).unwrap_or(0);
        let mut powers = Vec::with_capacity(max as usize + 1);
        let mut acc = CycNumber::one();
        for _ in 0..=max {
            powers.push(acc.clone());
            acc = acc.mul(c);
        }
        let mut out = MPoly::zero(self.vars.without(v));
        for (m, coeff) in &self.terms {
            let scaled = coeff.mul(&powers[m.exponent(v) as usize]);
            out.add_term(m.with_exponent(v, 0), &scaled);
        }
        Ok(out)
    }

    /// Some(c) when `other == c * self` for a nonzero scalar c; the zero
    /// polynomial is proportional only to itself (ratio 1).
    pub fn proportionality(&self, other: &MPoly) -> Option<CycNumber> {
        is_proportional(self, other)
    }

    /// Canonical text with coefficients rendered at conductor `m`.
    pub fn render_at(&self, m: u32) -> String {
        let mut out = String::new();
        for (mono, c) in self.terms() {
            let (negative, body) = render_coefficient(c, m);
            let text = match (mono == &Monomial::ONE, body.as_deref()) {
                (true, None) => "1".to_string(),
                (true, Some(b)) => b.to_string(),
                (false, None) => mono.to_string(),
                (false, Some(b)) => format!("{b}*{mono}"),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&text);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Returns (negated, body) where body is None for a unit coefficient ±1.
fn render_coefficient(c: &CycNumber, m: u32) -> (bool, Option<String>) {
    if let Some(q) = c.to_rational() {
        let mag = q.abs();
        let body = if num_traits::One::is_one(&mag) { None } else { Some(fmt_rational(&mag)) };
        (q.is_negative(), body)
    } else {
        (false, Some(format!("({})", c.terms_string_at(m))))
    }
}

/// Some(c) with `q == c * p` and c nonzero, else None. Leading terms in the
/// graded order fix the candidate scalar, which is then checked on every term.
pub fn is_proportional(p: &MPoly, q: &MPoly) -> Option<CycNumber> {
    match (p.leading_term(), q.leading_term()) {
        (None, None) => Some(CycNumber::one()),
        (None, _) | (_, None) => None,
        (Some((mp, cp)), Some((mq, cq))) => {
            if mp != mq || p.terms.len() != q.terms.len() {
                return None;
            }
            let ratio = cq.div(cp).ok()?;
            let all = p.terms.iter().all(|(m, c)| match q.terms.get(m) {
                Some(d) => c.mul(&ratio) == *d,
                None => false,
            });
            all.then_some(ratio)
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_at(self.conductor()))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{} | conductor {}]({})", self.vars, self.conductor(), self)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    /// Panics on a variable-set mismatch; see [`MPoly::try_add`].
    fn add(self, rhs: &MPoly) -> MPoly {
        self.try_add(rhs).expect("MPoly addition")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.try_sub(rhs).expect("MPoly subtraction")
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.try_mul(rhs).expect("MPoly multiplication")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::root_of_unity;
    use proptest::prelude::*;

    fn xyz() -> VarSet {
        VarSet::xyz()
    }

    fn v(var: Var) -> MPoly {
        MPoly::var(var, xyz()).unwrap()
    }

    fn c(n: i64) -> MPoly {
        MPoly::constant(CycNumber::from_int(n), xyz())
    }

    #[test]
    fn binomial_square() {
        let s = &v(Var::X) + &v(Var::Y);
        let sq = s.pow(2);
        let expected = &(&v(Var::X).pow(2) + &(&c(2) * &(&v(Var::X) * &v(Var::Y)))) + &v(Var::Y).pow(2);
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");
        assert_eq!(s.pow(0), MPoly::one(xyz()));
    }

    #[test]
    fn cube_with_root_of_unity() {
        let vars = VarSet::parse(&["z1", "z2"]).unwrap();
        let w = root_of_unity(3, 1);
        let lin = &MPoly::var(Var::Z1, vars).unwrap().scalar_mul(&w) + &MPoly::var(Var::Z2, vars).unwrap();
        let cube = lin.pow(3);
        assert_eq!(cube.num_terms(), 4);
        let z1 = MPoly::var(Var::Z1, vars).unwrap();
        let z2 = MPoly::var(Var::Z2, vars).unwrap();
        let lead = cube.coefficient_of(Var::Z1, 3).unwrap();
        assert_eq!(lead, MPoly::one(VarSet::parse(&["z2"]).unwrap()));
        let mixed = cube.coefficient(&Monomial::from_exponents([0, 0, 0, 2, 1]));
        assert_eq!(mixed, CycNumber::from_int(3) * w.pow(2));
        let _ = (z1, z2);
    }

    #[test]
    fn coefficient_extraction() {
        let p = &(&v(Var::Z).pow(2) * &(&v(Var::X) + &c(1))) + &(&v(Var::Z) * &v(Var::Y));
        let xy = VarSet::parse(&["x", "y"]).unwrap();
        let expected = &MPoly::var(Var::X, xy).unwrap() + &MPoly::one(xy);
        assert_eq!(p.coefficient_of(Var::Z, 2).unwrap(), expected);
        assert!(p.coefficient_of(Var::Z, 5).unwrap().is_zero());
        assert_eq!(
            p.coefficient_of(Var::Z1, 0),
            Err(Error::VariableNotPresent("z1".into()))
        );
    }

    #[test]
    fn substitution() {
        let x = VarSet::parse(&["x"]).unwrap();
        let p = &MPoly::var(Var::X, x).unwrap().pow(2) - &MPoly::one(x);
        assert!(p.substitute(Var::X, &CycNumber::one()).unwrap().is_zero());
        let q = &v(Var::X) + &v(Var::Y);
        let r = q.substitute(Var::X, &root_of_unity(3, 1)).unwrap();
        assert_eq!(r.vars(), VarSet::parse(&["y", "z"]).unwrap());
        assert_eq!(r.to_string(), "y + (w)");
    }

    #[test]
    fn proportionality_examples() {
        let p = &(&v(Var::X).pow(2) + &v(Var::Y)) - &c(3);
        let two_p = p.scalar_mul(&CycNumber::from_int(2));
        assert_eq!(is_proportional(&two_p, &p), Some(CycNumber::from_ratio(1, 2)));
        let a = &v(Var::X).pow(2) + &v(Var::Y).pow(2);
        let b = &v(Var::X).pow(2) - &v(Var::Y).pow(2);
        assert_eq!(is_proportional(&a, &b), None);
        let zero = MPoly::zero(xyz());
        assert_eq!(is_proportional(&zero, &zero), Some(CycNumber::one()));
        assert_eq!(is_proportional(&zero, &a), None);
        assert_eq!(is_proportional(&a, &zero), None);
    }

    #[test]
    fn mismatched_vars() {
        let a = MPoly::var(Var::X, VarSet::parse(&["x"]).unwrap()).unwrap();
        let b = v(Var::X);
        assert!(matches!(a.try_add(&b), Err(Error::VarSetMismatch { .. })));
        assert_eq!(a.lift(xyz()).unwrap().try_add(&b).unwrap(), b.scalar_mul(&CycNumber::from_int(2)));
        assert!(VarSet::parse(&["y", "x"]).is_err());
        assert!(VarSet::parse(&["w"]).is_err());
    }

    #[test]
    fn rendering_is_graded_lex() {
        let p = &(&(&v(Var::Z).pow(3) + &v(Var::X).pow(3)) + &v(Var::Y).pow(3)) - &c(1);
        assert_eq!(p.to_string(), "x^3 + y^3 + z^3 - 1");
        let q = &(&c(1) - &v(Var::X).pow(2)) + &v(Var::Z).pow(2);
        assert_eq!(q.to_string(), "-x^2 + z^2 + 1");
        let w = MPoly::constant(CycNumber::one() + root_of_unity(5, 2), xyz());
        let r = &(&w * &v(Var::X)) - &c(2);
        assert_eq!(r.to_string(), "(1 + w^2)*x - 2");
        assert_eq!(MPoly::zero(xyz()).to_string(), "0");
    }

    fn small_poly() -> impl Strategy<Value = MPoly> {
        let term = (0u16..3, 0u16..3, 0u16..2, -4i64..=4, 0i64..4);
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            MPoly::from_terms(
                VarSet::xyz(),
                ts.into_iter().map(|(a, b, c, n, k)| {
                    (
                        Monomial::from_exponents([a, b, c, 0, 0]),
                        CycNumber::from_int(n) * root_of_unity(4, k),
                    )
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn degree_is_additive(a in small_poly(), b in small_poly()) {
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!(
                    (&a * &b).total_degree().unwrap(),
                    a.total_degree().unwrap() + b.total_degree().unwrap()
                );
            }
        }

        #[test]
        fn coefficients_reassemble(p in small_poly()) {
            let mut sum = MPoly::zero(p.vars());
            let zp = MPoly::var(Var::Z, p.vars()).unwrap();
            for d in 0..=p.degree_in(Var::Z).unwrap_or(0) {
                let part = p.coefficient_of(Var::Z, d).unwrap().lift(p.vars()).unwrap();
                sum = &sum + &(&part * &zp.pow(d as u32));
            }
            prop_assert_eq!(sum, p);
        }

        #[test]
        fn substitution_commutes_with_mul(a in small_poly(), b in small_poly(), k in 0i64..8) {
            let t = root_of_unity(8, k);
            let lhs = (&a * &b).substitute(Var::Y, &t).unwrap();
            let rhs = &a.substitute(Var::Y, &t).unwrap() * &b.substitute(Var::Y, &t).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn printing_is_deterministic(p in small_poly()) {
            let rebuilt = MPoly::from_terms(p.vars(), p.terms().map(|(m, c)| (*m, c.clone()))).unwrap();
            prop_assert_eq!(rebuilt.to_string(), p.to_string());
        }
    }
}
