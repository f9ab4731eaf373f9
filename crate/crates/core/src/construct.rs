//! Concrete matrices (the diagonal of roots of unity, Fourier matrices, the
//! cyclic shifts, the 4×4 one-parameter family) and Hadamard predicates.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::cycfield::{root_of_unity, BigRational, CycNumber};
use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::perms::{enumerate_sn, Permutation};

/// Largest order accepted by [`hadamard_similar`].
pub const SIMILARITY_LIMIT: usize = 5;

/// diag(1, ζ_n, ζ_n², …, ζ_n^(n−1)).
pub fn omega_diag(n: usize) -> ExactMatrix {
    let values: Vec<CycNumber> = (0..n).map(|k| root_of_unity(n as u32, k as i64)).collect();
    ExactMatrix::diag(&values)
}

/// F_n with entries ζ_n^(j·k), 0-based.
pub fn fourier_matrix(n: usize) -> ExactMatrix {
    let rows = (0..n)
        .map(|j| (0..n).map(|k| root_of_unity(n as u32, (j * k) as i64)).collect())
        .collect();
    ExactMatrix::from_constants(rows).expect("square by construction")
}

/// (1/n)·h*·A·h for A = [`omega_diag`].
pub fn b_from_hadamard(h: &ExactMatrix) -> Result<ExactMatrix> {
    if !h.is_square() {
        return Err(Error::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    let n = h.rows();
    let scale = CycNumber::from_ratio(1, n as i64);
    Ok(h.adjoint()?.matmul(&omega_diag(n))?.matmul(h)?.scalar_mul(&scale))
}

/// Cyclic down-shift: ones on the subdiagonal and in the top-right corner,
/// i.e. the matrix of j ↦ j + 1 mod n.
pub fn b_hat(n: usize) -> ExactMatrix {
    Permutation::cycle(n).matrix()
}

/// Cyclic up-shift: ones on the superdiagonal and in the bottom-left corner.
pub fn b_hat_hat(n: usize) -> ExactMatrix {
    Permutation::cycle(n).inverse().matrix()
}

/// j ↦ n−2−j for j < n−1, fixing n−1; conjugates [`b_hat`] into
/// [`b_hat_hat`].
pub fn hat_permutation(n: usize) -> Permutation {
    let images = (0..n).map(|j| if j + 1 < n { n - 2 - j } else { n - 1 }).collect();
    Permutation::new(images).expect("a bijection")
}

/// The 4×4 complex Hadamard matrix with unimodular parameter t:
/// rows (1,1,1,1), (1,t,−1,−t), (1,−1,1,−1), (1,−t,−1,t).
pub fn h4_family_at(t: &CycNumber) -> Result<ExactMatrix> {
    if !t.is_unimodular() {
        return Err(Error::NotUnimodular(t.to_string()));
    }
    let one = CycNumber::one();
    let m1 = -&one;
    let mt = -t;
    ExactMatrix::from_constants(vec![
        vec![one.clone(), one.clone(), one.clone(), one.clone()],
        vec![one.clone(), t.clone(), m1.clone(), mt.clone()],
        vec![one.clone(), m1.clone(), one.clone(), m1.clone()],
        vec![one, mt, m1, t.clone()],
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HadamardViolation {
    NotSquare,
    NonConstant { row: usize, col: usize },
    NotUnimodular { row: usize, col: usize },
    NotOrthogonal { row1: usize, row2: usize },
}

/// The first reason `h` fails to be a complex Hadamard matrix, if any.
pub fn hadamard_violation(h: &ExactMatrix) -> Option<HadamardViolation> {
    if !h.is_square() {
        return Some(HadamardViolation::NotSquare);
    }
    let n = h.rows();
    let mut entries = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            let Ok(v) = h.constant_at(r, c) else {
                return Some(HadamardViolation::NonConstant { row: r, col: c });
            };
            if !v.is_unimodular() {
                return Some(HadamardViolation::NotUnimodular { row: r, col: c });
            }
            row.push(v);
        }
        entries.push(row);
    }
    // unimodular entries give diagonal n automatically; check off-diagonal
    for a in 0..n {
        for b in a + 1..n {
            let dot = entries[a]
                .iter()
                .zip(&entries[b])
                .fold(CycNumber::zero(), |acc, (u, v)| acc + u.mul(&v.conjugate()));
            if !dot.is_zero() {
                return Some(HadamardViolation::NotOrthogonal { row1: a, row2: b });
            }
        }
    }
    None
}

impl fmt::Display for HadamardViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HadamardViolation::NotSquare => write!(f, "matrix is not square"),
            HadamardViolation::NonConstant { row, col } => write!(f, "entry ({row}, {col}) is not a constant"),
            HadamardViolation::NotUnimodular { row, col } => write!(f, "entry ({row}, {col}) is not unimodular"),
            HadamardViolation::NotOrthogonal { row1, row2 } => write!(f, "rows {row1} and {row2} are not orthogonal"),
        }
    }
}

pub fn is_complex_hadamard(h: &ExactMatrix) -> bool {
    hadamard_violation(h).is_none()
}

/// Witness for h2 = Λ1·P1·h1·P2·Λ2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimilarityWitness {
    pub lambda1: Vec<CycNumber>,
    pub p1: Permutation,
    pub p2: Permutation,
    pub lambda2: Vec<CycNumber>,
}

impl SimilarityWitness {
    /// Recomputes Λ1·P1·h1·P2·Λ2.
    pub fn apply(&self, h1: &ExactMatrix) -> Result<ExactMatrix> {
        ExactMatrix::diag(&self.lambda1)
            .matmul(&self.p1.matrix())?
            .matmul(h1)?
            .matmul(&self.p2.matrix())?
            .matmul(&ExactMatrix::diag(&self.lambda2))
    }
}

/// Searches S_n × S_n for a Hadamard similarity h2 = Λ1·P1·h1·P2·Λ2 with
/// unimodular diagonals. For each permutation pair the entrywise ratio
/// r_jk = h2_jk / (P1·h1·P2)_jk must factor as λ_j·μ_k; the gauge is fixed
/// by μ_0 = 1, so λ_0 = r_00.
pub fn hadamard_similar(h1: &ExactMatrix, h2: &ExactMatrix) -> Result<Option<SimilarityWitness>> {
    for h in [h1, h2] {
        if !h.is_square() {
            return Err(Error::NotSquare { rows: h.rows(), cols: h.cols() });
        }
    }
    let n = h1.rows();
    if h2.rows() != n {
        return Err(Error::Dimension(format!("{n}x{n} vs {}x{}", h2.rows(), h2.cols())));
    }
    if n > SIMILARITY_LIMIT {
        return Err(Error::SizeLimit { size: n, limit: SIMILARITY_LIMIT });
    }
    let a = h1.to_constants()?;
    let b = h2.to_constants()?;
    let mut a_inv = Vec::with_capacity(n);
    for (r, row) in a.iter().enumerate() {
        let mut inv_row = Vec::with_capacity(n);
        for (c, v) in row.iter().enumerate() {
            inv_row.push(v.inv().map_err(|_| Error::ZeroEntry { row: r, col: c })?);
        }
        a_inv.push(inv_row);
    }
    let perms: Vec<Permutation> = enumerate_sn(n)?.collect();
    let witness = perms.par_iter().find_map_first(|p1| {
        let p1_inv = p1.inverse();
        perms.iter().find_map(|p2| {
            // (P1·h1·P2)_jk = h1[p1⁻¹(j)][p2(k)]
            let ratio = |j: usize, k: usize| b[j][k].mul(&a_inv[p1_inv.apply(j)][p2.apply(k)]);
            let lambda0 = ratio(0, 0);
            if !lambda0.is_unimodular() {
                return None;
            }
            let lambda0_inv = lambda0.conjugate();
            let mu: Vec<CycNumber> = (0..n).map(|k| ratio(0, k).mul(&lambda0_inv)).collect();
            let lambda: Vec<CycNumber> = (0..n).map(|j| ratio(j, 0)).collect();
            if !mu.iter().chain(&lambda).all(CycNumber::is_unimodular) {
                return None;
            }
            let rank_one = (1..n).all(|j| (1..n).all(|k| ratio(j, k) == lambda[j].mul(&mu[k])));
            rank_one.then(|| SimilarityWitness {
                lambda1: lambda,
                p1: p1.clone(),
                p2: p2.clone(),
                lambda2: mu,
            })
        })
    });
    Ok(witness)
}

/// Unimodular diagonal D with D*·b1·D = b2, if one exists. Entries must
/// agree in support; the phases are propagated along the support graph
/// starting from d_0 = 1 in each connected component.
pub fn diagonal_conjugation(b1: &ExactMatrix, b2: &ExactMatrix) -> Result<Option<Vec<CycNumber>>> {
    if !b1.is_square() || b1.rows() != b2.rows() || b1.cols() != b2.cols() {
        return Err(Error::Dimension("diagonal conjugation needs equal square shapes".into()));
    }
    let n = b1.rows();
    let x = b1.to_constants()?;
    let y = b2.to_constants()?;
    // ratio[j][k] = conj(d_j)·d_k where both entries are nonzero
    let mut ratio: Vec<Vec<Option<CycNumber>>> = vec![vec![None; n]; n];
    for j in 0..n {
        for k in 0..n {
            match (x[j][k].is_zero(), y[j][k].is_zero()) {
                (true, true) => {}
                (false, false) => ratio[j][k] = Some(y[j][k].div(&x[j][k])?),
                _ => return Ok(None),
            }
        }
    }
    let mut d: Vec<Option<CycNumber>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(CycNumber::one());
        let mut queue = VecDeque::from([start]);
        while let Some(j) = queue.pop_front() {
            let dj = d[j].clone().expect("assigned");
            for k in 0..n {
                // d_k = d_j·r_jk from the (j,k) entry, d_k = d_j / r_kj from (k,j)
                let mut candidates = Vec::new();
                if let Some(r) = &ratio[j][k] {
                    candidates.push(dj.mul(r));
                }
                if let Some(r) = &ratio[k][j] {
                    candidates.push(dj.div(r)?);
                }
                for c in candidates {
                    match &d[k] {
                        None => {
                            d[k] = Some(c);
                            queue.push_back(k);
                        }
                        Some(existing) if *existing != c => return Ok(None),
                        Some(_) => {}
                    }
                }
            }
        }
    }
    let d: Vec<CycNumber> = d.into_iter().map(|v| v.expect("every index visited")).collect();
    if !d.iter().all(CycNumber::is_unimodular) {
        return Ok(None);
    }
    let lambda = ExactMatrix::diag(&d);
    let check = lambda.adjoint()?.matmul(b1)?.matmul(&lambda)?;
    Ok((check == *b2).then_some(d))
}

/// For B = (1/n)·h*·A·h, verifies constructively that column j of h* is an
/// eigenvector of B with eigenvalue ζ_n^j, then reports whether √n times
/// the transition matrix to that eigenbasis is complex Hadamard.
///
/// With G = h*/√n the transition matrix, √n·G = h*, so the check reduces to
/// [`is_complex_hadamard`] on h* without leaving Q(ζ_m).
pub fn transition_is_hadamard(h: &ExactMatrix) -> Result<bool> {
    if !h.is_square() {
        return Err(Error::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    let n = h.rows();
    let adj = h.adjoint()?;
    let gram = adj.matmul(h)?;
    let n_identity = ExactMatrix::identity(n).scalar_mul(&CycNumber::from_int(n as i64));
    if gram != n_identity {
        return Err(Error::NotScaledUnitary);
    }
    let b = b_from_hadamard(h)?;
    let bw = b.matmul(&adj)?;
    for j in 0..n {
        let eigenvalue = root_of_unity(n as u32, j as i64);
        for r in 0..n {
            let lhs = bw.constant_at(r, j)?;
            let rhs = adj.constant_at(r, j)?.mul(&eigenvalue);
            if lhs != rhs {
                return Err(Error::EigenVerification { column: j });
            }
        }
    }
    Ok(is_complex_hadamard(&adj))
}

/// √2·[[3/5, −4/5], [4/5, 3/5]] over Q(ζ_8): h*h = 2I but its entries are not
/// unimodular.
pub fn scaled_rotation_example() -> ExactMatrix {
    let sqrt2 = root_of_unity(8, 1) + root_of_unity(8, 7);
    let frac = |n: i64| sqrt2.scale(&BigRational::new(n.into(), 5.into()));
    ExactMatrix::from_constants(vec![vec![frac(3), frac(-4)], vec![frac(4), frac(3)]])
        .expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::CycNumber;

    fn z(m: u32, k: i64) -> CycNumber {
        root_of_unity(m, k)
    }

    fn n_identity(n: usize) -> ExactMatrix {
        ExactMatrix::identity(n).scalar_mul(&CycNumber::from_int(n as i64))
    }

    #[test]
    fn omega_diag_examples() {
        assert_eq!(omega_diag(2), ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]).unwrap());
        assert_eq!(omega_diag(4), ExactMatrix::diag(&[z(4, 0), z(4, 1), z(4, 2), z(4, 3)]));
        for n in 1..=6 {
            assert!(omega_diag(n).pow(n as u32).unwrap().is_identity());
        }
    }

    #[test]
    fn fourier_examples() {
        assert_eq!(fourier_matrix(2), ExactMatrix::from_ints(&[&[1, 1], &[1, -1]]).unwrap());
        for n in 1..=8 {
            let f = fourier_matrix(n);
            assert_eq!(f.matmul(&f.adjoint().unwrap()).unwrap(), n_identity(n));
            for k in 0..n {
                assert!(f.constant_at(0, k).unwrap().is_one());
                assert!(f.constant_at(k, 0).unwrap().is_one());
            }
        }
        assert_eq!(fourier_matrix(4).adjoint().unwrap().matmul(&fourier_matrix(4)).unwrap(), n_identity(4));
    }

    #[test]
    fn shift_matrices() {
        assert_eq!(b_hat(3), ExactMatrix::from_ints(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]).unwrap());
        assert_eq!(b_hat_hat(3), ExactMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]).unwrap());
        for n in 2..=8 {
            assert!(b_hat(n).pow(n as u32).unwrap().is_identity());
            assert_eq!(b_from_hadamard(&fourier_matrix(n)).unwrap(), b_hat(n));
            let f = fourier_matrix(n);
            let hh = f
                .matmul(&omega_diag(n))
                .unwrap()
                .matmul(&f.adjoint().unwrap())
                .unwrap()
                .scalar_mul(&CycNumber::from_ratio(1, n as i64));
            assert_eq!(hh, b_hat_hat(n));
            let p = hat_permutation(n).matrix();
            assert_eq!(p.adjoint().unwrap().matmul(&b_hat(n)).unwrap().matmul(&p).unwrap(), b_hat_hat(n));
        }
    }

    #[test]
    fn b_from_fourier_two() {
        let b = b_from_hadamard(&fourier_matrix(2)).unwrap();
        assert_eq!(b, ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap());
    }

    #[test]
    fn diagonal_phases_conjugate_b() {
        let n = 4;
        let l1 = ExactMatrix::diag(&[z(8, 1), z(8, 3), z(8, 0), z(8, 6)]);
        let l2 = ExactMatrix::diag(&[z(8, 5), z(8, 2), z(8, 7), z(8, 1)]);
        let h = l1.matmul(&fourier_matrix(n)).unwrap().matmul(&l2).unwrap();
        let expected = l2.adjoint().unwrap().matmul(&b_hat(n)).unwrap().matmul(&l2).unwrap();
        assert_eq!(b_from_hadamard(&h).unwrap(), expected);
    }

    #[test]
    fn h4_family() {
        let i = z(4, 1);
        let h = h4_family_at(&i).unwrap();
        assert_eq!(h, fourier_matrix(4));
        for k in 0..24 {
            assert!(is_complex_hadamard(&h4_family_at(&z(24, k)).unwrap()), "k = {k}");
        }
        let h1 = h4_family_at(&CycNumber::one()).unwrap();
        assert!(is_complex_hadamard(&h1));
        assert!(matches!(h4_family_at(&CycNumber::from_int(2)), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn hadamard_predicate() {
        for n in 2..=12 {
            assert!(is_complex_hadamard(&fourier_matrix(n)), "n = {n}");
        }
        let two = ExactMatrix::identity(2).scalar_mul(&CycNumber::from_int(2));
        assert_eq!(hadamard_violation(&two), Some(HadamardViolation::NotUnimodular { row: 0, col: 0 }));
        let ones = ExactMatrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(hadamard_violation(&ones), Some(HadamardViolation::NotOrthogonal { row1: 0, row2: 1 }));
    }

    #[test]
    fn similarity() {
        let f4 = fourier_matrix(4);
        let w = hadamard_similar(&f4, &f4).unwrap().unwrap();
        assert!(w.p1.is_identity() && w.p2.is_identity());
        assert!(w.lambda1.iter().chain(&w.lambda2).all(CycNumber::is_one));

        let minus_i = h4_family_at(&z(4, 3)).unwrap();
        let w = hadamard_similar(&f4, &minus_i).unwrap().expect("t = -i is similar to F4");
        assert_eq!(w.apply(&f4).unwrap(), minus_i);
        let back = hadamard_similar(&minus_i, &f4).unwrap().expect("symmetric");
        assert_eq!(back.apply(&minus_i).unwrap(), f4);

        let eighth = h4_family_at(&z(8, 1)).unwrap();
        assert!(hadamard_similar(&eighth, &f4).unwrap().is_none());
        assert!(hadamard_similar(&f4, &eighth).unwrap().is_none());
        assert!(matches!(
            hadamard_similar(&fourier_matrix(6), &fourier_matrix(6)),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn similarity_recovers_random_witness() {
        let f5 = fourier_matrix(5);
        let l1 = ExactMatrix::diag(&[z(10, 3), z(10, 1), z(10, 0), z(10, 7), z(10, 9)]);
        let l2 = ExactMatrix::diag(&[z(10, 2), z(10, 5), z(10, 4), z(10, 1), z(10, 8)]);
        let p1 = Permutation::new(vec![3, 0, 4, 1, 2]).unwrap();
        let p2 = Permutation::new(vec![1, 4, 2, 0, 3]).unwrap();
        let h2 = l1
            .matmul(&p1.matrix())
            .unwrap()
            .matmul(&f5)
            .unwrap()
            .matmul(&p2.matrix())
            .unwrap()
            .matmul(&l2)
            .unwrap();
        let w = hadamard_similar(&f5, &h2).unwrap().unwrap();
        assert_eq!(w.apply(&f5).unwrap(), h2);
    }

    #[test]
    fn transition_matrix() {
        for n in 2..=6 {
            assert!(transition_is_hadamard(&fourier_matrix(n)).unwrap());
        }
        let p1 = Permutation::new(vec![2, 0, 3, 1]).unwrap().matrix();
        let p2 = Permutation::new(vec![1, 3, 0, 2]).unwrap().matrix();
        let h = p1.matmul(&fourier_matrix(4)).unwrap().matmul(&p2).unwrap();
        assert!(transition_is_hadamard(&h).unwrap());
        let rot = scaled_rotation_example();
        assert!(!transition_is_hadamard(&rot).unwrap());
        let not_unitary = ExactMatrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(transition_is_hadamard(&not_unitary), Err(Error::NotScaledUnitary));
    }

    #[test]
    fn diagonal_conjugations() {
        let d = vec![z(3, 0), z(3, 1), z(3, 2)];
        let lambda = ExactMatrix::diag(&d);
        let b = b_hat(3);
        let conj = lambda.adjoint().unwrap().matmul(&b).unwrap().matmul(&lambda).unwrap();
        let found = diagonal_conjugation(&b, &conj).unwrap().unwrap();
        let lf = ExactMatrix::diag(&found);
        assert_eq!(lf.adjoint().unwrap().matmul(&b).unwrap().matmul(&lf).unwrap(), conj);
        assert!(diagonal_conjugation(&b_hat(3), &b_hat_hat(3)).unwrap().is_none());
    }
}
