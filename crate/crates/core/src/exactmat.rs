//! Dense matrices with polynomial entries and exact determinants.

use std::fmt;

use num_integer::Integer;

use crate::cycfield::CycNumber;
use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Monomial, Var, VarSet};

pub const NAIVE_DETERMINANT_LIMIT: usize = 6;

/// Row-major matrix whose entries all live over one [`VarSet`]. Constant
/// matrices use the empty variable set and are lifted on demand when combined
/// with polynomial matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    vars: VarSet,
    entries: Vec<MPoly>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, vars: VarSet) -> ExactMatrix {
        ExactMatrix { rows, cols, vars, entries: vec![MPoly::zero(vars); rows * cols] }
    }

    pub fn identity(n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(n, n, VarSet::EMPTY);
        for i in 0..n {
            m.entries[i * n + i] = MPoly::one(VarSet::EMPTY);
        }
        m
    }

    pub fn diag(values: &[CycNumber]) -> ExactMatrix {
        let n = values.len();
        let mut m = ExactMatrix::zeros(n, n, VarSet::EMPTY);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = MPoly::constant(v.clone(), VarSet::EMPTY);
        }
        m
    }

    /// Constant matrix from rows of scalars; all rows must have equal length.
    pub fn from_constants(rows: Vec<Vec<CycNumber>>) -> Result<ExactMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries = rows
            .into_iter()
            .flatten()
            .map(|v| MPoly::constant(v, VarSet::EMPTY))
            .collect();
        Ok(ExactMatrix { rows: r, cols: c, vars: VarSet::EMPTY, entries })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<ExactMatrix> {
        ExactMatrix::from_constants(
            rows.iter().map(|r| r.iter().map(|&v| CycNumber::from_int(v)).collect()).collect(),
        )
    }

    pub fn from_entries(rows: usize, cols: usize, vars: VarSet, entries: Vec<MPoly>) -> Result<ExactMatrix> {
        if rows * cols != entries.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e.lift(vars)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { rows, cols, vars, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &MPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: MPoly) -> Result<()> {
        self.entries[r * self.cols + c] = value.lift(self.vars)?;
        Ok(())
    }

    pub fn entries(&self) -> &[MPoly] {
        &self.entries
    }

    /// The scalar at (r, c) when that entry is constant.
    pub fn constant_at(&self, r: usize, c: usize) -> Result<CycNumber> {
        self.get(r, c).constant_value().ok_or(Error::NonConstantEntry { row: r, col: c })
    }

    /// All entries as scalars; errors on the first non-constant entry.
    pub fn to_constants(&self) -> Result<Vec<Vec<CycNumber>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.constant_at(r, c)).collect())
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(MPoly::is_constant)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MPoly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == ExactMatrix::identity(self.rows).lift(self.vars).expect("empty set lifts")
    }

    /// Common conductor of all entries.
    pub fn conductor(&self) -> u32 {
        self.entries.iter().fold(1, |acc, e| acc.lcm(&e.conductor()))
    }

    pub fn lift(&self, vars: VarSet) -> Result<ExactMatrix> {
        if vars == self.vars {
            return Ok(self.clone());
        }
        let entries = self.entries.iter().map(|e| e.lift(vars)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, vars, entries })
    }

    /// Lifts both operands to a shared variable set. Only the empty set is
    /// lifted implicitly.
    fn unify(&self, other: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
        if self.vars == other.vars {
            Ok((self.clone(), other.clone()))
        } else if self.vars.is_empty() {
            Ok((self.lift(other.vars)?, other.clone()))
        } else if other.vars.is_empty() {
            Ok((self.clone(), other.lift(self.vars)?))
        } else {
            Err(Error::VarSetMismatch { left: self.vars.to_string(), right: other.vars.to_string() })
        }
    }

    pub fn matmul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.unify(other)?;
        let mut out = ExactMatrix::zeros(a.rows, b.cols, a.vars);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = MPoly::zero(a.vars);
                for k in 0..a.cols {
                    let (x, y) = (a.get(i, k), b.get(k, j));
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    acc = &acc + &(x * y);
                }
                out.entries[i * b.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn matadd(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.unify(other)?;
        let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| x + y).collect();
        Ok(ExactMatrix { entries, ..a })
    }

    pub fn matsub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.matadd(&other.neg())
    }

    pub fn neg(&self) -> ExactMatrix {
        ExactMatrix { entries: self.entries.iter().map(MPoly::neg).collect(), ..self.clone() }
    }

    pub fn scalar_mul(&self, c: &CycNumber) -> ExactMatrix {
        ExactMatrix { entries: self.entries.iter().map(|e| e.scalar_mul(c)).collect(), ..self.clone() }
    }

    /// Multiplies every entry by a polynomial over the same variables.
    pub fn poly_mul(&self, p: &MPoly) -> Result<ExactMatrix> {
        let m = self.lift(p.vars())?;
        let entries = m.entries.iter().map(|e| e.try_mul(p)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { entries, ..m })
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.cols, self.rows, self.vars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Conjugate transpose; only defined for constant matrices.
    pub fn adjoint(&self) -> Result<ExactMatrix> {
        let mut out = ExactMatrix::zeros(self.cols, self.rows, self.vars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.constant_at(i, j)?;
                out.entries[j * self.rows + i] = MPoly::constant(v.conjugate(), self.vars);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<ExactMatrix> {
        self.require_square()?;
        let mut acc = ExactMatrix::identity(self.rows).lift(self.vars)?;
        for _ in 0..e {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    /// Every entry re-expressed at conductor `m`.
    pub fn promote(&self, m: u32) -> Result<ExactMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                MPoly::from_terms(
                    e.vars(),
                    e.terms().map(|(mono, c)| Ok((*mono, c.rebase(m)?))).collect::<Result<Vec<_>>>()?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { entries, ..self.clone() })
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Exact determinant by Laplace expansion with memoized minors.
    ///
    /// `minors[S]` holds the determinant of the first |S| rows restricted to
    /// the column subset S; each layer expands along its last row, for
    /// n·2^(n-1) entry multiplications in total.
    pub fn determinant(&self) -> Result<MPoly> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(MPoly::one(self.vars));
        }
        if n > 20 {
            return Err(Error::SizeLimit { size: n, limit: 20 });
        }
        let mut minors: Vec<Option<MPoly>> = vec![None; 1 << n];
        minors[0] = Some(MPoly::one(self.vars));
        let mut layer: Vec<usize> = vec![0];
        for k in 1..=n {
            let row = k - 1;
            let mut next = Vec::new();
            for set in subsets_of_size(n, k) {
                let mut acc = MPoly::zero(self.vars);
                let mut pos = 0usize;
                for col in 0..n {
                    if set & (1 << col) == 0 {
                        continue;
                    }
                    let entry = self.get(row, col);
                    let rest = set & !(1 << col);
                    if let (false, Some(minor)) = (entry.is_zero(), &minors[rest]) {
                        if !minor.is_zero() {
                            let term = entry * minor;
                            // column `col` sits at position `pos` within the set
                            acc = if (row + pos).is_multiple_of(2) { &acc + &term } else { &acc - &term };
                        }
                    }
                    pos += 1;
                }
                minors[set] = Some(acc);
                next.push(set);
            }
            for s in layer {
                minors[s] = None;
            }
            layer = next;
        }
        Ok(minors[(1 << n) - 1].take().expect("full set computed"))
    }

    /// Signed sum over all permutations. Exists as an independent check on
    /// [`ExactMatrix::determinant`]; limited to n <= 6.
    pub fn determinant_naive(&self) -> Result<MPoly> {
        self.require_square()?;
        let n = self.rows;
        if n > NAIVE_DETERMINANT_LIMIT {
            return Err(Error::SizeLimit { size: n, limit: NAIVE_DETERMINANT_LIMIT });
        }
        let mut total = MPoly::zero(self.vars);
        let mut perm: Vec<usize> = (0..n).collect();
        heap_permutations(&mut perm, n, &mut |p| {
            let mut term = MPoly::one(self.vars);
            for (i, &j) in p.iter().enumerate() {
                term = &term * self.get(i, j);
                if term.is_zero() {
                    return;
                }
            }
            total = if inversion_parity(p) { &total - &term } else { &total + &term };
        });
        Ok(total)
    }
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = usize> {
    (0usize..1 << n).filter(move |s| s.count_ones() as usize == k)
}

fn inversion_parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

fn heap_permutations(a: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(a);
        return;
    }
    heap_permutations(a, k - 1, visit);
    for i in 0..k - 1 {
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
        heap_permutations(a, k - 1, visit);
    }
}

/// Σ_i vars[i]·coeffs[i] − I, with the coefficient matrices paired with the
/// variables of `vars` in canonical order. All entries are promoted to one
/// conductor.
pub fn pencil(coeff_matrices: &[ExactMatrix], vars: VarSet) -> Result<ExactMatrix> {
    let var_list: Vec<Var> = vars.vars();
    if var_list.len() != coeff_matrices.len() {
        return Err(Error::Dimension(format!(
            "{} matrices for {} variables",
            coeff_matrices.len(),
            var_list.len()
        )));
    }
    let n = coeff_matrices.first().map_or(0, ExactMatrix::rows);
    for m in coeff_matrices {
        if !m.is_square() || m.rows() != n {
            return Err(Error::Dimension(format!(
                "pencil needs square {n}x{n} matrices, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let conductor = coeff_matrices.iter().fold(1u32, |acc, m| acc.lcm(&m.conductor()));
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut terms: Vec<(Monomial, CycNumber)> = Vec::new();
            for (m, &v) in coeff_matrices.iter().zip(&var_list) {
                let c = m.constant_at(i, j)?;
                if !c.is_zero() {
                    terms.push((Monomial::var(v, 1), c.rebase(conductor)?));
                }
            }
            if i == j {
                terms.push((Monomial::ONE, CycNumber::from_int(-1).promote(conductor)?));
            }
            entries.push(MPoly::from_terms(vars, terms)?);
        }
    }
    ExactMatrix::from_entries(n, n, vars, entries)
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} over {}", self.rows, self.cols, self.vars)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.conductor();
        writeln!(f, "conductor {m}")?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).render_at(m)).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::root_of_unity;

    fn z(m: u32, k: i64) -> CycNumber {
        root_of_unity(m, k)
    }

    #[test]
    fn identity_is_neutral() {
        let m = ExactMatrix::from_ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).unwrap();
        assert_eq!(ExactMatrix::identity(3).matmul(&m).unwrap(), m);
        assert!(ExactMatrix::identity(3).is_identity());
    }

    #[test]
    fn adjoint_of_diagonal() {
        let d = ExactMatrix::diag(&[z(5, 1), z(5, 2)]);
        assert_eq!(d.adjoint().unwrap(), ExactMatrix::diag(&[z(5, 4), z(5, 3)]));
        assert_eq!(d.adjoint().unwrap().adjoint().unwrap(), d);
    }

    #[test]
    fn adjoint_rejects_polynomials() {
        let p = pencil(&[ExactMatrix::identity(2)], VarSet::parse(&["x"]).unwrap()).unwrap();
        assert_eq!(p.adjoint(), Err(Error::NonConstantEntry { row: 0, col: 0 }));
    }

    #[test]
    fn small_determinants() {
        let d = ExactMatrix::diag(&[CycNumber::one(), z(3, 1), z(3, 2)]);
        assert!(d.determinant().unwrap().constant_value().unwrap().is_one());
        assert!(ExactMatrix::identity(5).determinant_naive().unwrap().constant_value().unwrap().is_one());
        let rep = ExactMatrix::from_ints(&[&[1, 2, 3], &[1, 2, 3], &[0, 1, 5]]).unwrap();
        assert!(rep.determinant().unwrap().is_zero());
        assert!(rep.determinant_naive().unwrap().is_zero());
        let m = ExactMatrix::from_ints(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).unwrap();
        assert_eq!(m.determinant().unwrap().constant_value().unwrap(), CycNumber::from_int(6));
    }

    #[test]
    fn two_by_two_fourier_pencil() {
        // A = diag(1, -1), B = [[0,1],[1,0]], AB = [[0,1],[-1,0]]
        let a = ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]).unwrap();
        let b = ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        let ab = a.matmul(&b).unwrap();
        let p = pencil(&[a, b, ab], VarSet::xyz()).unwrap();
        assert_eq!(p.get(0, 0).to_string(), "x - 1");
        assert_eq!(p.get(0, 1).to_string(), "y + z");
        assert_eq!(p.get(1, 0).to_string(), "y - z");
        assert_eq!(p.get(1, 1).to_string(), "-x - 1");
        let det = p.determinant().unwrap();
        assert_eq!(det.to_string(), "-x^2 - y^2 + z^2 + 1");
        assert_eq!(det, p.determinant_naive().unwrap());
    }

    #[test]
    fn dimension_errors() {
        let a = ExactMatrix::from_ints(&[&[1, 2, 3]]).unwrap();
        assert_eq!(a.determinant(), Err(Error::NotSquare { rows: 1, cols: 3 }));
        assert!(matches!(a.matmul(&a), Err(Error::Dimension(_))));
        assert!(matches!(
            ExactMatrix::identity(7).determinant_naive(),
            Err(Error::SizeLimit { size: 7, limit: 6 })
        ));
        assert!(matches!(ExactMatrix::from_ints(&[&[1, 2], &[3]]), Err(Error::Dimension(_))));
    }

    #[test]
    fn pencil_single_matrix() {
        let a = ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]).unwrap();
        let x = VarSet::parse(&["x"]).unwrap();
        let p = pencil(&[a], x).unwrap();
        assert_eq!(p.get(0, 0).to_string(), "x - 1");
        assert!(p.get(0, 1).is_zero());
        assert_eq!(p.get(1, 1).to_string(), "-x - 1");
        assert!(matches!(pencil(&[], x), Err(Error::Dimension(_))));
    }
}
