//! Joint-spectrum polynomials, the Fourier target surfaces, and exact checks
//! of the finite-matrix operator identities satisfied by the Fourier pair.

use serde::Serialize;

use crate::construct::{b_hat, b_hat_hat, diagonal_conjugation, omega_diag};
use crate::cycfield::{root_of_unity, CycNumber};
use crate::error::{Error, Result};
use crate::exactmat::{pencil, ExactMatrix};
use crate::mpoly::{is_proportional, MPoly, Var, VarSet};

/// det(Σ vars[i]·matrices[i] − I); the proper joint spectrum is its zero set.
pub fn joint_spectrum_poly(matrices: &[ExactMatrix], vars: VarSet) -> Result<MPoly> {
    pencil(matrices, vars)?.determinant()
}

fn var(v: Var, vars: VarSet) -> MPoly {
    MPoly::var(v, vars).expect("variable is in the set")
}

fn sign(n: usize) -> CycNumber {
    CycNumber::from_int(if n % 2 == 1 { 1 } else { -1 })
}

/// x^n + y^n + (−1)^(n−1)·z^n − 1.
pub fn fourier_surface_3(n: usize) -> MPoly {
    let vars = VarSet::xyz();
    let e = n as u32;
    let sum = &var(Var::X, vars).pow(e) + &var(Var::Y, vars).pow(e);
    let z = var(Var::Z, vars).pow(e).scalar_mul(&sign(n));
    &(&sum + &z) - &MPoly::one(vars)
}

pub fn four_var_set() -> VarSet {
    VarSet::new(&[Var::X, Var::Y, Var::Z1, Var::Z2]).expect("canonical order")
}

/// x^n + y^n + (−1)^(n−1)·(ζ_n·z1 + z2)^n − 1, fully expanded.
pub fn fourier_surface_4(n: usize) -> MPoly {
    let vars = four_var_set();
    let e = n as u32;
    let w = root_of_unity(n as u32, 1);
    let lin = &var(Var::Z1, vars).scalar_mul(&w) + &var(Var::Z2, vars);
    let sum = &var(Var::X, vars).pow(e) + &var(Var::Y, vars).pow(e);
    &(&sum + &lin.pow(e).scalar_mul(&sign(n))) - &MPoly::one(vars)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Surface {
    ThreeVar,
    FourVar,
}

impl Surface {
    pub fn target(self, n: usize) -> MPoly {
        match self {
            Surface::ThreeVar => fourier_surface_3(n),
            Surface::FourVar => fourier_surface_4(n),
        }
    }

    pub fn vars(self) -> VarSet {
        match self {
            Surface::ThreeVar => VarSet::xyz(),
            Surface::FourVar => four_var_set(),
        }
    }
}

/// Computed spectrum polynomial against a target surface.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub description: String,
    pub computed: MPoly,
    pub target: MPoly,
    /// `computed == ratio · target` when present.
    pub ratio: Option<CycNumber>,
}

impl SpectrumReport {
    pub fn proportional(&self) -> bool {
        self.ratio.is_some()
    }

    /// Degree n with total degree n forces every component to appear once;
    /// reported alongside proportionality.
    pub fn degree(&self) -> Option<u32> {
        self.computed.total_degree()
    }
}

pub fn is_fourier_spectrum(
    matrices: &[ExactMatrix],
    vars: VarSet,
    n: usize,
    which: Surface,
    description: impl Into<String>,
) -> Result<SpectrumReport> {
    let computed = joint_spectrum_poly(matrices, vars)?;
    let target = which.target(n);
    let ratio = is_proportional(&target, &computed);
    Ok(SpectrumReport { description: description.into(), computed, target, ratio })
}

/// The Fourier pair's matrices (A, B̂, A·B̂) or (A, B̂, A·B̂, B̂·A).
pub fn fourier_tuple(n: usize, which: Surface) -> Result<Vec<ExactMatrix>> {
    let a = omega_diag(n);
    let b = b_hat(n);
    let ab = a.matmul(&b)?;
    Ok(match which {
        Surface::ThreeVar => vec![a, b, ab],
        Surface::FourVar => {
            let ba = b.matmul(&a)?;
            vec![a, b, ab, ba]
        }
    })
}

/// Projection onto the eigenvalue-1 eigenspace of A: diag(1, 0, …, 0).
pub fn projection_p0(n: usize) -> ExactMatrix {
    let mut d = vec![CycNumber::zero(); n];
    if n > 0 {
        d[0] = CycNumber::one();
    }
    ExactMatrix::diag(&d)
}

/// diag(0, 1/(ζ−1), 1/(ζ²−1), …, 1/(ζ^(n−1)−1)) for ζ = ζ_n.
pub fn resolvent_t(n: usize) -> ExactMatrix {
    let d: Vec<CycNumber> = (0..n)
        .map(|k| {
            if k == 0 {
                CycNumber::zero()
            } else {
                (root_of_unity(n as u32, k as i64) - CycNumber::one())
                    .inv()
                    .expect("ζ^k ≠ 1 for 0 < k < n")
            }
        })
        .collect();
    ExactMatrix::diag(&d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub checks: Vec<IdentityCheck>,
}

impl MomentReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Evaluates each moment identity exactly for A = diag of n-th roots of
/// unity and the given B, recording pass/fail per identity.
pub fn verify_moment_relations(b: &ExactMatrix, n: usize) -> Result<MomentReport> {
    if !b.is_square() || b.rows() != n {
        return Err(Error::Dimension(format!("B must be {n}x{n}")));
    }
    if n < 2 {
        return Err(Error::Dimension("moment identities need n >= 2".into()));
    }
    let a = omega_diag(n);
    let p0 = projection_p0(n);
    let t = resolvent_t(n);
    let id = ExactMatrix::identity(n);
    let ab = a.matmul(b)?;
    let bt = b.matmul(&t)?;
    let abt = ab.matmul(&t)?;
    let zero = ExactMatrix::zeros(n, n, b.vars());
    let inv_n = CycNumber::from_ratio(1, n as i64);
    let mut checks = Vec::new();
    fn push(checks: &mut Vec<IdentityCheck>, name: String, lhs: ExactMatrix, rhs: &ExactMatrix) {
        checks.push(IdentityCheck { name, passed: lhs == *rhs });
    }
    let sandwich = |m: &ExactMatrix| -> Result<ExactMatrix> { p0.matmul(m)?.matmul(&p0) };

    let rhs = id.matsub(&p0)?.matadd(&t)?;
    push(&mut checks, "A*T = I - P0 + T".into(), a.matmul(&t)?, &rhs);
    push(&mut checks, "T*A = I - P0 + T".into(), t.matmul(&a)?, &rhs);

    // P0 (BT)^k B P0 and P0 (ABT)^k AB P0
    let mut bt_pow = id.clone();
    let mut abt_pow = id.clone();
    for k in 0..n {
        let lhs_b = sandwich(&bt_pow.matmul(b)?)?;
        let lhs_ab = sandwich(&abt_pow.matmul(&ab)?)?;
        if k + 1 < n {
            push(&mut checks, format!("P0*(B*T)^{k}*B*P0 = 0"), lhs_b, &zero);
            push(&mut checks, format!("P0*(A*B*T)^{k}*A*B*P0 = 0"), lhs_ab, &zero);
        } else {
            let s = if (n - 1).is_multiple_of(2) { inv_n.clone() } else { -&inv_n };
            push(&mut checks, format!("P0*(B*T)^{k}*B*P0 = (-1)^{k}/{n} P0"), lhs_b, &p0.scalar_mul(&s));
            push(&mut checks, format!("P0*(A*B*T)^{k}*A*B*P0 = 1/{n} P0"), lhs_ab, &p0.scalar_mul(&inv_n));
        }
        bt_pow = bt_pow.matmul(&bt)?;
        abt_pow = abt_pow.matmul(&abt)?;
    }

    // P0 B^k P0
    let mut b_pow = b.clone();
    for k in 1..=n {
        let lhs = sandwich(&b_pow)?;
        if k < n {
            push(&mut checks, format!("P0*B^{k}*P0 = 0"), lhs, &zero);
        } else {
            push(&mut checks, format!("P0*B^{n}*P0 = P0"), lhs.clone(), &p0);
            let inner = b_pow.get(0, 0).constant_value();
            checks.push(IdentityCheck {
                name: format!("<B^{n} e0, e0> = 1"),
                passed: inner.is_some_and(|v| v.is_one()),
            });
        }
        b_pow = b_pow.matmul(b)?;
    }

    // P0 B^r AB P0
    let mut b_pow = b.clone();
    for r in 1..n {
        let lhs = sandwich(&b_pow.matmul(&ab)?)?;
        if r + 1 < n {
            push(&mut checks, format!("P0*B^{r}*A*B*P0 = 0"), lhs, &zero);
        } else {
            let w = root_of_unity(n as u32, 1);
            push(&mut checks, format!("P0*B^{r}*A*B*P0 = w P0"), lhs, &p0.scalar_mul(&w));
        }
        b_pow = b_pow.matmul(b)?;
    }

    Ok(MomentReport { n, checks })
}

#[derive(Clone, Debug)]
pub struct Remark27Report {
    pub relations: Vec<IdentityCheck>,
    pub spectra: Vec<SpectrumReport>,
    /// Diagonal unitary D with D*·B̂·D equal to the other B, if one exists.
    pub diagonal_equivalence: Option<Vec<CycNumber>>,
}

impl Remark27Report {
    pub fn relations_hold(&self) -> bool {
        self.relations.iter().all(|c| c.passed)
    }

    pub fn spectra_match(&self) -> bool {
        self.spectra.iter().all(SpectrumReport::proportional)
    }

    pub fn passed(&self) -> bool {
        self.relations_hold() && self.spectra_match() && self.diagonal_equivalence.is_none()
    }
}

/// x^3 + y^3 − 1 over {x, y}.
pub fn fermat_cubic_xy() -> MPoly {
    let vars = VarSet::new(&[Var::X, Var::Y]).expect("canonical order");
    &(&var(Var::X, vars).pow(3) + &var(Var::Y, vars).pow(3)) - &MPoly::one(vars)
}

/// The two order-3 pairs (A, B̂_3) and (A, B̂̂_3): both satisfy
/// g1³ = g2³ = (g1g2)³ = (g1g2²)³ = e, both have spectrum x³ + y³ = 1, and
/// no diagonal unitary conjugation (which fixes A) maps one B to the other.
pub fn verify_counterexample_27() -> Result<Remark27Report> {
    let a = omega_diag(3);
    let xy = VarSet::new(&[Var::X, Var::Y]).expect("canonical order");
    let target = fermat_cubic_xy();
    let mut relations = Vec::new();
    let mut spectra = Vec::new();
    for (label, b) in [("B^", b_hat(3)), ("B^^", b_hat_hat(3))] {
        let ab = a.matmul(&b)?;
        let abb = ab.matmul(&b)?;
        for (name, m) in [("A", &a), ("B", &b), ("A*B", &ab), ("A*B^2", &abb)] {
            relations.push(IdentityCheck {
                name: format!("({name})^3 = I  [B = {label}]"),
                passed: m.pow(3)?.is_identity(),
            });
        }
        let computed = joint_spectrum_poly(&[a.clone(), b.clone()], xy)?;
        let ratio = is_proportional(&target, &computed);
        spectra.push(SpectrumReport {
            description: format!("sigma_p(A, {label})"),
            computed,
            target: target.clone(),
            ratio,
        });
    }
    let diagonal_equivalence = diagonal_conjugation(&b_hat(3), &b_hat_hat(3))?;
    Ok(Remark27Report { relations, spectra, diagonal_equivalence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{b_from_hadamard, fourier_matrix};
    use crate::perms::Permutation;

    #[test]
    fn fourier_surfaces() {
        assert_eq!(fourier_surface_3(2).to_string(), "x^2 + y^2 - z^2 - 1");
        assert_eq!(fourier_surface_3(3).to_string(), "x^3 + y^3 + z^3 - 1");
        // ζ2 = −1: x² + y² − (−z1 + z2)² − 1
        assert_eq!(fourier_surface_4(2).to_string(), "x^2 + y^2 - z1^2 + 2*z1*z2 - z2^2 - 1");
    }

    #[test]
    fn two_by_two_spectrum() {
        let a = omega_diag(2);
        let b = b_from_hadamard(&fourier_matrix(2)).unwrap();
        let ab = a.matmul(&b).unwrap();
        let p = joint_spectrum_poly(&[a, b, ab], VarSet::xyz()).unwrap();
        assert_eq!(p.to_string(), "-x^2 - y^2 + z^2 + 1");
        assert_eq!(is_proportional(&fourier_surface_3(2), &p), Some(CycNumber::from_int(-1)));
    }

    #[test]
    fn order_three_pair() {
        let xy = VarSet::new(&[Var::X, Var::Y]).unwrap();
        let p = joint_spectrum_poly(&[omega_diag(3), b_hat(3)], xy).unwrap();
        assert!(is_proportional(&fermat_cubic_xy(), &p).is_some());
    }

    #[test]
    fn identity_spectrum_is_power() {
        let x = VarSet::new(&[Var::X]).unwrap();
        for n in 1..=5 {
            let p = joint_spectrum_poly(&[ExactMatrix::identity(n)], x).unwrap();
            let xm1 = &MPoly::var(Var::X, x).unwrap() - &MPoly::one(x);
            assert_eq!(p, xm1.pow(n as u32));
        }
    }

    #[test]
    fn diagonal_single_pencil() {
        let x = VarSet::new(&[Var::X]).unwrap();
        for n in 2..=6 {
            let p = joint_spectrum_poly(&[omega_diag(n)], x).unwrap();
            let xn = &MPoly::var(Var::X, x).unwrap().pow(n as u32) - &MPoly::one(x);
            assert!(is_proportional(&xn, &p).is_some());
        }
    }

    #[test]
    fn projections_and_resolvent() {
        for n in 2..=6 {
            let p0 = projection_p0(n);
            let a = omega_diag(n);
            let t = resolvent_t(n);
            assert_eq!(p0.matmul(&p0).unwrap(), p0);
            assert_eq!(p0.matmul(&a).unwrap(), p0);
            assert_eq!(a.matmul(&p0).unwrap(), p0);
            assert!(t.matmul(&p0).unwrap().is_zero());
            assert!(p0.matmul(&t).unwrap().is_zero());
        }
    }

    #[test]
    fn moment_relations() {
        let r = verify_moment_relations(&b_hat(5), 5).unwrap();
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let r3 = verify_moment_relations(&b_hat(3), 3).unwrap();
        let c = r3.checks.iter().find(|c| c.name.starts_with("P0*(B*T)^2*B*P0")).unwrap();
        assert!(c.passed);
        let b = b_hat(3);
        let lhs = projection_p0(3)
            .matmul(&b.matmul(&resolvent_t(3)).unwrap().pow(2).unwrap())
            .unwrap()
            .matmul(&b)
            .unwrap()
            .matmul(&projection_p0(3))
            .unwrap();
        // (−1)^(n−1)/n = 1/3 at n = 3
        assert_eq!(lhs, projection_p0(3).scalar_mul(&CycNumber::from_ratio(1, 3)));

        let bad = verify_moment_relations(&ExactMatrix::identity(3), 3).unwrap();
        let failed: Vec<_> = bad.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"P0*B^1*P0 = 0"));
    }

    #[test]
    fn counterexample() {
        let r = verify_counterexample_27().unwrap();
        assert_eq!(r.relations.len(), 8);
        assert!(r.relations_hold());
        assert!(r.spectra_match());
        assert!(r.diagonal_equivalence.is_none());
        assert!(r.passed());
    }

    #[test]
    fn permutation_conjugation_invariance() {
        let n = 4;
        let a = omega_diag(n);
        let b = b_hat(n);
        let ab = a.matmul(&b).unwrap();
        let base = joint_spectrum_poly(&[a.clone(), b.clone(), ab.clone()], VarSet::xyz()).unwrap();
        for images in [vec![2, 0, 3, 1], vec![3, 2, 1, 0], vec![1, 0, 2, 3]] {
            let p = Permutation::new(images).unwrap().matrix();
            let ps = p.adjoint().unwrap();
            let conj = |m: &ExactMatrix| ps.matmul(m).unwrap().matmul(&p).unwrap();
            let q = joint_spectrum_poly(&[conj(&a), conj(&b), conj(&ab)], VarSet::xyz()).unwrap();
            assert_eq!(q, base);
        }
    }
}
