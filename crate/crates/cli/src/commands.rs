use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use specpencil_core::construct::{self, hadamard_similar, hadamard_violation, transition_is_hadamard, HadamardViolation};
use specpencil_core::format::{matrix_from_json, matrix_to_json, CycJson, PolyJson};
use specpencil_core::search::{self, SampleSpec, ScanOptions};
use specpencil_core::spectra::{self, Surface};
use specpencil_core::{ExactMatrix, MPoly, Var, VarSet};

use crate::{Cli, Command, Hadamard, MatrixKind, Verify};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: String, source: specpencil_core::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] specpencil_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Fourier,
    Relations,
    Remark27,
    Lemma41,
    Classify,
    ScanH4,
    HadamardCheck,
    HadamardSimilar,
    Spectrum,
    Matrix,
}

pub struct Outcome {
    pub kind: Kind,
    pub report: Value,
    pub passed: bool,
}

fn in_range(name: &str, n: usize, lo: usize, hi: usize) -> CliResult<()> {
    if (lo..=hi).contains(&n) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must be in {lo}..={hi}, got {n}")))
    }
}

pub fn poly_value(p: &MPoly) -> CliResult<Value> {
    Ok(json!({ "text": p.to_string(), "poly": PolyJson::from_poly(p)? }))
}

fn read_matrix(path: &Path) -> CliResult<ExactMatrix> {
    let text =
        fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    matrix_from_json(&text).map_err(|source| CliError::Input { path: path.display().to_string(), source })
}

fn require_constant_square(path: &Path, m: &ExactMatrix) -> CliResult<()> {
    let input = |source| CliError::Input { path: path.display().to_string(), source };
    if !m.is_square() {
        return Err(input(specpencil_core::Error::NotSquare { rows: m.rows(), cols: m.cols() }));
    }
    if m.rows() == 0 {
        return Err(input(specpencil_core::Error::Dimension("empty matrix".into())));
    }
    m.to_constants().map_err(input)?;
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Verify(Verify::Fourier { n, four_var }) => verify_fourier(*n, *four_var),
        Command::Verify(Verify::Relations { n }) => verify_relations(*n),
        Command::Verify(Verify::Remark27) => verify_remark27(),
        Command::Verify(Verify::Lemma41 { n, samples }) => verify_lemma41(*n, cli.seed, *samples),
        Command::Classify(args) => classify(args),
        Command::ScanH4(args) => scan_h4(&args.samples, args.workers as usize),
        Command::Hadamard(Hadamard::Check { file }) => hadamard_check(file),
        Command::Hadamard(Hadamard::Similar { file1, file2 }) => similar(file1, file2),
        Command::Spectrum(args) => spectrum(&args.files, args.vars.as_deref()),
        Command::Matrix(args) => matrix(args.kind, args.n),
    }
}

fn verify_fourier(n: usize, four_var: bool) -> CliResult<Outcome> {
    let which = if four_var { Surface::FourVar } else { Surface::ThreeVar };
    in_range("--n", n, 2, if four_var { 6 } else { 8 })?;
    let matrices = spectra::fourier_tuple(n, which)?;
    let labels = if four_var { "(A, B, AB, BA)" } else { "(A, B, AB)" };
    let r = spectra::is_fourier_spectrum(&matrices, which.vars(), n, which, labels)?;
    let report = json!({
        "n": n,
        "matrices": labels,
        "vars": which.vars().names(),
        "computed": poly_value(&r.computed)?,
        "target": poly_value(&r.target)?,
        "ratio": r.ratio.as_ref().map(CycJson::from),
        "passed": r.proportional(),
    });
    Ok(Outcome { kind: Kind::Fourier, passed: r.proportional(), report })
}

fn verify_relations(n: usize) -> CliResult<Outcome> {
    in_range("--n", n, 2, 8)?;
    let r = spectra::verify_moment_relations(&construct::b_hat(n), n)?;
    let passed = r.all_passed();
    let report = json!({ "n": n, "checks": r.checks, "passed": passed });
    Ok(Outcome { kind: Kind::Relations, passed, report })
}

fn verify_remark27() -> CliResult<Outcome> {
    let r = spectra::verify_counterexample_27()?;
    let spectra = r
        .spectra
        .iter()
        .map(|s| {
            Ok(json!({
                "matrices": s.description,
                "computed": poly_value(&s.computed)?,
                "target": poly_value(&s.target)?,
                "ratio": s.ratio.as_ref().map(CycJson::from),
            }))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let report = json!({
        "relations": r.relations,
        "spectra": spectra,
        "diagonal_equivalence": r.diagonal_equivalence,
        "passed": r.passed(),
    });
    Ok(Outcome { kind: Kind::Remark27, passed: r.passed(), report })
}

fn verify_lemma41(n: usize, seed: u64, samples: usize) -> CliResult<Outcome> {
    in_range("--n", n, 2, 6)?;
    in_range("--samples", samples, 0, 50)?;
    let r = search::verify_lemma_4_1_equivalences(n, seed, samples)?;
    let passed = r.all_verified;
    Ok(Outcome { kind: Kind::Lemma41, passed, report: serde_json::to_value(&r).expect("report serializes") })
}

fn classify(args: &crate::ClassifyArgs) -> CliResult<Outcome> {
    // fail on an unwritable path before the scan
    let out = match &args.out {
        Some(path) => Some((
            path,
            fs::File::create(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
        )),
        None => None,
    };
    let opts = ScanOptions { workers: args.workers as usize, fail_fast: args.fail_fast };
    let mut r = search::classify_permutation_pairs(args.n as usize, opts)?;
    if args.no_timing {
        r = r.without_timing();
    }
    if let Some((path, mut file)) = out {
        use std::io::Write;
        let mut text = r.to_json();
        text.push('\n');
        file.write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }
    let passed = r.matches;
    Ok(Outcome { kind: Kind::Classify, passed, report: serde_json::to_value(&r).expect("report serializes") })
}

fn scan_h4(samples: &str, workers: usize) -> CliResult<Outcome> {
    let spec = SampleSpec::parse(samples).map_err(|e| CliError::Usage(format!("--samples: {e}")))?;
    let r = search::scan_h4_family(&spec.samples(), workers)?;
    let passed = r.all_vanish_iff_pm_i;
    Ok(Outcome { kind: Kind::ScanH4, passed, report: serde_json::to_value(&r).expect("report serializes") })
}

fn hadamard_check(path: &Path) -> CliResult<Outcome> {
    let h = read_matrix(path)?;
    require_constant_square(path, &h)?;
    let violation = hadamard_violation(&h);
    let transition = match violation {
        None => Some(match transition_is_hadamard(&h) {
            Ok(v) => v,
            Err(specpencil_core::Error::NotScaledUnitary | specpencil_core::Error::EigenVerification { .. }) => false,
            Err(e) => return Err(e.into()),
        }),
        Some(_) => None,
    };
    let passed = violation.is_none() && transition == Some(true);
    let report = json!({
        "file": path.display().to_string(),
        "n": h.rows(),
        "hadamard": violation.is_none(),
        "violation": violation.as_ref().map(|v: &HadamardViolation| json!({ "detail": v.to_string(), "at": v })),
        "transition_hadamard": transition,
        "passed": passed,
    });
    Ok(Outcome { kind: Kind::HadamardCheck, passed, report })
}

fn similar(p1: &Path, p2: &Path) -> CliResult<Outcome> {
    let h1 = read_matrix(p1)?;
    let h2 = read_matrix(p2)?;
    require_constant_square(p1, &h1)?;
    require_constant_square(p2, &h2)?;
    if h1.rows() != h2.rows() {
        return Err(CliError::Usage(format!("orders differ: {} vs {}", h1.rows(), h2.rows())));
    }
    let w = hadamard_similar(&h1, &h2)?;
    let passed = w.is_some();
    let report = json!({
        "files": [p1.display().to_string(), p2.display().to_string()],
        "n": h1.rows(),
        "similar": passed,
        "witness": w,
    });
    Ok(Outcome { kind: Kind::HadamardSimilar, passed, report })
}

fn default_vars(k: usize) -> CliResult<VarSet> {
    let vars: &[Var] = match k {
        1 => &[Var::X],
        2 => &[Var::X, Var::Y],
        3 => &[Var::X, Var::Y, Var::Z],
        4 => &[Var::X, Var::Y, Var::Z1, Var::Z2],
        5 => &[Var::X, Var::Y, Var::Z, Var::Z1, Var::Z2],
        _ => return Err(CliError::Usage(format!("at most 5 matrices are supported, got {k}"))),
    };
    Ok(VarSet::new(vars)?)
}

fn spectrum(files: &[std::path::PathBuf], vars: Option<&[String]>) -> CliResult<Outcome> {
    let matrices = files
        .iter()
        .map(|f| {
            let m = read_matrix(f)?;
            require_constant_square(f, &m)?;
            Ok(m)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let vars = match vars {
        Some(names) => VarSet::parse(names).map_err(|e| CliError::Usage(format!("--vars: {e}")))?,
        None => default_vars(matrices.len())?,
    };
    if vars.len() != matrices.len() {
        return Err(CliError::Usage(format!("{} variables for {} matrices", vars.len(), matrices.len())));
    }
    let n = matrices[0].rows();
    if let Some((f, m)) = files.iter().zip(&matrices).find(|(_, m)| m.rows() != n) {
        return Err(CliError::Usage(format!("{}: {}x{} differs from {n}x{n}", f.display(), m.rows(), m.cols())));
    }
    let p = spectra::joint_spectrum_poly(&matrices, vars)?;
    let report = json!({
        "files": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
        "n": n,
        "vars": vars.names(),
        "spectrum": poly_value(&p)?,
    });
    Ok(Outcome { kind: Kind::Spectrum, passed: true, report })
}

fn matrix(kind: MatrixKind, n: usize) -> CliResult<Outcome> {
    in_range("--n", n, 1, 16)?;
    let m = match kind {
        MatrixKind::Omega => construct::omega_diag(n),
        MatrixKind::Fourier => construct::fourier_matrix(n),
        MatrixKind::BHat => construct::b_hat(n),
        MatrixKind::BHatHat => construct::b_hat_hat(n),
    };
    let report: Value = serde_json::from_str(&matrix_to_json(&m)?).expect("valid JSON");
    Ok(Outcome { kind: Kind::Matrix, passed: true, report })
}
