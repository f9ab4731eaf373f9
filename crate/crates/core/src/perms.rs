//! Permutations of {0, …, n−1}, their matrices, and the affine group
//! G_n = { j ↦ q·j + m mod n : gcd(q, n) = 1 }.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cycfield::CycNumber;
use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::mpoly::MPoly;

pub const MAX_ENUMERATION: usize = 8;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    /// j ↦ j + 1 mod n.
    pub fn cycle(n: usize) -> Permutation {
        Permutation { images: (0..n).map(|j| (j + 1) % n).collect() }
    }

    /// j ↦ q·j + m mod n; errors unless gcd(q, n) = 1.
    pub fn affine(n: usize, q: usize, m: usize) -> Result<Permutation> {
        if n == 0 || q.gcd(&n) != 1 {
            return Err(Error::InvalidPermutation(format!("q = {q} is not a unit mod {n}")));
        }
        Ok(Permutation { images: (0..n).map(|j| (q * j + m) % n).collect() })
    }

    /// Builds a permutation from disjoint 0-based cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::InvalidPermutation(format!("bad cycle {cycle:?} for n = {n}")));
                }
                touched[a] = true;
                images[a] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    /// Parses `[2,0,1]` (image array) or `(0,1,2)(3,4)` (0-based cycles, size
    /// given by `n`).
    pub fn parse(text: &str, n: Option<usize>) -> Result<Permutation> {
        let t = text.trim();
        if t.starts_with('[') {
            return t.parse();
        }
        let n = n.ok_or_else(|| Error::Parse("cycle notation needs an explicit size".into()))?;
        if !t.is_empty() && !t.ends_with(')') {
            return Err(Error::Parse(format!("unterminated cycle in `{t}`")));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for chunk in t.split(')').map(str::trim).filter(|c| !c.is_empty()) {
            let body = chunk
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("malformed cycle `{chunk})`")))?;
            let cycle = body
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|e| Error::Parse(format!("`{s}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(n, &refs)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    /// (self ∘ other)(j) = self(other(j)).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "cannot compose permutations of {} and {} points",
                self.len(),
                other.len()
            )));
        }
        Ok(Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (j, &p) in self.images.iter().enumerate() {
            inv[p] = j;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &p)| j == p)
    }

    /// 0/1 matrix with a one at (p(j), j), so that
    /// `matrix(p ∘ q) = matrix(p) · matrix(q)`.
    pub fn matrix(&self) -> ExactMatrix {
        let n = self.len();
        let mut m = ExactMatrix::zeros(n, n, crate::mpoly::VarSet::EMPTY);
        for (j, &p) in self.images.iter().enumerate() {
            m.set(p, j, MPoly::constant(CycNumber::one(), crate::mpoly::VarSet::EMPTY))
                .expect("same variable set");
        }
        m
    }

    /// Witness (q, m) with p(j) = q·j + m mod n, if p lies in G_n.
    pub fn affine_witness(&self) -> Option<(usize, usize)> {
        let n = self.len();
        if n == 0 {
            return None;
        }
        if n == 1 {
            return Some((1, 0));
        }
        // m = p(0) and q = p(1) − p(0) are forced; check the rest.
        let m = self.images[0];
        let q = (self.images[1] + n - m) % n;
        let fits = q.gcd(&n) == 1 && (0..n).all(|j| self.images[j] == (q * j + m) % n);
        fits.then_some((q, m))
    }

    pub fn in_affine_group(&self) -> bool {
        self.affine_witness().is_some()
    }
}

pub fn perm_matrix(p: &Permutation) -> ExactMatrix {
    p.matrix()
}

pub fn in_affine_group(p: &Permutation) -> Option<(usize, usize)> {
    p.affine_witness()
}

/// All n! permutations in lexicographic order of their image arrays.
pub fn enumerate_sn(n: usize) -> Result<SymmetricGroupIter> {
    if n > MAX_ENUMERATION {
        return Err(Error::SizeLimit { size: n, limit: MAX_ENUMERATION });
    }
    Ok(SymmetricGroupIter { next: Some((0..n).collect()) })
}

pub struct SymmetricGroupIter {
    next: Option<Vec<usize>>,
}

impl Iterator for SymmetricGroupIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lexicographic(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

fn next_lexicographic(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let Some(i) = (0..a.len() - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).expect("a[i+1] > a[i]");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// The elements of G_n in lexicographic order.
pub fn affine_group(n: usize) -> Vec<Permutation> {
    let set: BTreeSet<Permutation> = (1..n.max(2))
        .filter(|q| q.gcd(&n) == 1)
        .flat_map(|q| (0..n).map(move |m| Permutation::affine(n, q, m).expect("unit q")))
        .collect();
    if n == 1 {
        return vec![Permutation::identity(1)];
    }
    set.into_iter().collect()
}

/// Closure of `gens` under composition (breadth first). For a finite group
/// this is also closed under inverses.
pub fn generated_subgroup(gens: &[Permutation]) -> Result<BTreeSet<Permutation>> {
    let Some(first) = gens.first() else {
        return Err(Error::Dimension("no generators".into()));
    };
    let n = first.len();
    if gens.iter().any(|g| g.len() != n) {
        return Err(Error::Dimension("generators act on different point sets".into()));
    }
    let mut seen = BTreeSet::new();
    let identity = Permutation::identity(n);
    seen.insert(identity.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.compose(&p)?;
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    Ok(seen)
}

/// Converts a 1-based cycle, as written for a computer algebra system's
/// `SymmetricGroup(n)`, into a 0-based permutation.
pub fn one_based_cycle(n: usize, cycle: &[usize]) -> Result<Permutation> {
    let zero_based: Vec<usize> = cycle
        .iter()
        .map(|&c| c.checked_sub(1).ok_or_else(|| Error::InvalidPermutation("0 in 1-based cycle".into())))
        .collect::<Result<_>>()?;
    Permutation::from_cycles(n, &[&zero_based])
}

/// The generators (1,2,3,4) and (1,3) of G_4 in S_4.
pub fn g4_generators() -> [Permutation; 2] {
    [
        one_based_cycle(4, &[1, 2, 3, 4]).expect("valid cycle"),
        one_based_cycle(4, &[1, 3]).expect("valid cycle"),
    ]
}

/// The generators (1,2,3,4,5) and (1,2,4,3) of G_5 in S_5.
pub fn g5_generators() -> [Permutation; 2] {
    [
        one_based_cycle(5, &[1, 2, 3, 4, 5]).expect("valid cycle"),
        one_based_cycle(5, &[1, 2, 4, 3]).expect("valid cycle"),
    ]
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Permutation> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected `[a,b,...]`, got `{s}`")))?;
        if body.trim().is_empty() {
            return Ok(Permutation::identity(0));
        }
        let images = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Permutation> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::euler_phi;
    use proptest::prelude::*;

    fn p(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    #[test]
    fn group_operations() {
        let c = p(&[1, 2, 0]);
        assert_eq!(c.inverse(), p(&[2, 0, 1]));
        assert!(c.compose(&c.inverse()).unwrap().is_identity());
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(c.compose(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn matrices() {
        assert!(Permutation::identity(4).matrix().is_identity());
        let q = p(&[2, 0, 3, 1]);
        let r = p(&[1, 3, 0, 2]);
        assert_eq!(q.compose(&r).unwrap().matrix(), q.matrix().matmul(&r.matrix()).unwrap());
        assert_eq!(q.matrix().adjoint().unwrap(), q.inverse().matrix());
        for q in enumerate_sn(4).unwrap() {
            let d = q.matrix().determinant().unwrap().constant_value().unwrap();
            assert!(d.is_one() || (d + CycNumber::one()).is_zero());
        }
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_sn(3).unwrap().count(), 6);
        let all: Vec<_> = enumerate_sn(5).unwrap().collect();
        assert_eq!(all.len(), 120);
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 120);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], Permutation::identity(5));
        assert!(matches!(enumerate_sn(9), Err(Error::SizeLimit { .. })));
        assert_eq!(enumerate_sn(0).unwrap().count(), 1);
    }

    #[test]
    fn affine_membership() {
        assert_eq!(Permutation::identity(4).affine_witness(), Some((1, 0)));
        assert_eq!(p(&[1, 0, 2, 3]).affine_witness(), None);
        // exhaustive oracle over (q, m) for the transposition
        let t = p(&[1, 0, 2, 3]);
        for q in [1usize, 3] {
            for m in 0..4 {
                assert_ne!(Permutation::affine(4, q, m).unwrap(), t);
            }
        }
        let count = enumerate_sn(5).unwrap().filter(Permutation::in_affine_group).count();
        assert_eq!(count, 20);
        assert_eq!(Permutation::affine(5, 2, 3).unwrap().affine_witness(), Some((2, 3)));
        assert!(Permutation::affine(4, 2, 0).is_err());
    }

    #[test]
    fn affine_count_matches_n_phi_n() {
        for n in 3..=6usize {
            let count = enumerate_sn(n).unwrap().filter(Permutation::in_affine_group).count();
            assert_eq!(count, n * euler_phi(n as u32) as usize, "n = {n}");
            assert_eq!(affine_group(n).len(), count);
        }
    }

    #[test]
    fn affine_set_is_a_subgroup() {
        for n in [4usize, 5] {
            let g = affine_group(n);
            for a in &g {
                assert!(a.inverse().in_affine_group());
                for b in &g {
                    assert!(a.compose(b).unwrap().in_affine_group());
                }
            }
        }
    }

    #[test]
    fn one_based_conversion_is_pinned() {
        let [g1, g2] = g4_generators();
        assert_eq!(g1, p(&[1, 2, 3, 0]));
        assert_eq!(g2, p(&[2, 1, 0, 3]));
        let [h1, h2] = g5_generators();
        assert_eq!(h1, p(&[1, 2, 3, 4, 0]));
        assert_eq!(h2, p(&[1, 3, 0, 2, 4]));
    }

    #[test]
    fn generators_produce_affine_groups() {
        let g4: Vec<_> = generated_subgroup(&g4_generators()).unwrap().into_iter().collect();
        assert_eq!(g4, affine_group(4));
        assert_eq!(g4.len(), 8);
        let g5: Vec<_> = generated_subgroup(&g5_generators()).unwrap().into_iter().collect();
        assert_eq!(g5, affine_group(5));
        assert_eq!(g5.len(), 20);
        let trivial = generated_subgroup(&[Permutation::identity(3)]).unwrap();
        assert_eq!(trivial.len(), 1);
    }

    #[test]
    fn text_forms() {
        let q: Permutation = "[2,0,1]".parse().unwrap();
        assert_eq!(q.to_string(), "[2,0,1]");
        assert_eq!(Permutation::parse("(0,2,1)", Some(3)).unwrap(), q);
        assert_eq!(Permutation::parse("(0,1)(2,3)", Some(4)).unwrap(), p(&[1, 0, 3, 2]));
        assert!(Permutation::parse("(0,1", Some(3)).is_err());
        assert!("[0,0]".parse::<Permutation>().is_err());
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(json, "[2,0,1]");
        assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), q);
    }

    fn perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn associativity(a in perm(6), b in perm(6), c in perm(6)) {
            prop_assert_eq!(
                a.compose(&b).unwrap().compose(&c).unwrap(),
                a.compose(&b.compose(&c).unwrap()).unwrap()
            );
        }
    }
}
