//! Exhaustive scans over permutation pairs.
//!
//! Every scan is a map over an index range followed by an ordered collect, so
//! the worker count never changes the report.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{b_from_hadamard, b_hat, b_hat_hat, diagonal_conjugation, fourier_matrix, h4_family_at, hat_permutation, omega_diag};
use crate::cycfield::{root_of_unity, CycNumber};
use crate::error::{Error, Result};
use crate::exactmat::{pencil, ExactMatrix};
use crate::mpoly::{is_proportional, MPoly, Var, VarSet};
use crate::perms::{affine_group, enumerate_sn, Permutation};
use crate::spectra::fourier_surface_3;

/// (P1, P2) as image arrays.
pub type PermPair = [Vec<usize>; 2];

fn pair(p1: &Permutation, p2: &Permutation) -> PermPair {
    [p1.images().to_vec(), p2.images().to_vec()]
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Dimension(format!("cannot start {workers} workers: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub workers: usize,
    /// Stop at the first pair whose outcome contradicts the prediction.
    pub fail_fast: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { workers: 1, fail_fast: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub pairs_total: usize,
    pub pairs_scanned: usize,
    pub fourier_pairs: Vec<PermPair>,
    pub predicted: Vec<PermPair>,
    /// Scanned pairs on which the spectrum and the prediction disagree.
    pub mismatches: Vec<PermPair>,
    #[serde(rename = "match")]
    pub matches: bool,
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl ClassificationReport {
    /// The report minus wall-clock timing; byte-stable across runs.
    pub fn without_timing(&self) -> ClassificationReport {
        ClassificationReport { elapsed_ms: None, ..self.clone() }
    }

    /// Pretty JSON with one permutation pair per line.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("plain data serializes");
        let serde_json::Value::Object(fields) = value else { unreachable!("a struct serializes to an object") };
        let mut out = String::from("{\n");
        let last = fields.len().saturating_sub(1);
        for (i, (key, v)) in fields.iter().enumerate() {
            let body = match v {
                serde_json::Value::Array(items) if !items.is_empty() => {
                    let lines: Vec<String> = items.iter().map(|x| format!("    {x}")).collect();
                    format!("[\n{}\n  ]", lines.join(",\n"))
                }
                other => other.to_string(),
            };
            let comma = if i == last { "" } else { "," };
            out.push_str(&format!("  {}: {body}{comma}\n", serde_json::Value::String(key.clone())));
        }
        out.push('}');
        out
    }
}

/// B(P1, P2) = (1/n)·H*·A·H for H = P1·F_n·P2, computed entrywise from
/// exponents: B[k][l] = (1/n)·Σ_j ζ^(j + q(j)·(p2(l) − p2(k))) with q = P1⁻¹.
pub fn fourier_pair_b(p1: &Permutation, p2: &Permutation) -> ExactMatrix {
    let n = p1.len();
    let q = p1.inverse();
    let mut counts = vec![0i64; n];
    let rows: Vec<Vec<CycNumber>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| {
                    counts.iter_mut().for_each(|c| *c = 0);
                    let d = (n + p2.apply(l) - p2.apply(k)) % n;
                    for j in 0..n {
                        counts[(j + q.apply(j) * d) % n] += 1;
                    }
                    counts
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .fold(CycNumber::zero(), |acc, (e, &c)| {
                            acc + root_of_unity(n as u32, e as i64) * CycNumber::from_ratio(c, n as i64)
                        })
                })
                .collect()
        })
        .collect();
    ExactMatrix::from_constants(rows).expect("square by construction")
}

/// det(x·A + y·B + z·AB − I) for B = B(P1, P2).
pub fn pair_spectrum(p1: &Permutation, p2: &Permutation) -> Result<MPoly> {
    let a = omega_diag(p1.len());
    let b = fourier_pair_b(p1, p2);
    let ab = a.matmul(&b)?;
    pencil(&[a, b, ab], VarSet::xyz())?.determinant()
}

/// G_n = {j ↦ q·j + m mod n : gcd(q, n) = 1}.
pub fn group_g(n: usize) -> BTreeSet<Permutation> {
    affine_group(n).into_iter().collect()
}

/// Scans all of S_n × S_n and compares the pairs with a Fourier spectrum to
/// {P1 ∈ G_n or P2 ∈ G_n}.
pub fn classify_permutation_pairs(n: usize, opts: ScanOptions) -> Result<ClassificationReport> {
    if !(2..=5).contains(&n) {
        return Err(Error::SizeLimit { size: n, limit: 5 });
    }
    let start = Instant::now();
    let perms: Vec<Permutation> = enumerate_sn(n)?.collect();
    let g = group_g(n);
    let target = fourier_surface_3(n);
    let size = perms.len();
    let total = size * size;
    let predicted_at = |idx: usize| g.contains(&perms[idx / size]) || g.contains(&perms[idx % size]);
    let stop = AtomicBool::new(false);

    let outcomes: Vec<Option<bool>> = pool(opts.workers)?.install(|| {
        (0..total)
            .into_par_iter()
            .with_min_len(16)
            .map(|idx| {
                if stop.load(Ordering::Relaxed) {
                    return Ok(None);
                }
                let det = pair_spectrum(&perms[idx / size], &perms[idx % size])?;
                let fourier = is_proportional(&target, &det).is_some();
                if opts.fail_fast && fourier != predicted_at(idx) {
                    stop.store(true, Ordering::Relaxed);
                }
                Ok(Some(fourier))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut fourier_pairs = Vec::new();
    let mut predicted = Vec::new();
    let mut mismatches = Vec::new();
    let mut scanned = 0;
    for (idx, outcome) in outcomes.iter().enumerate() {
        let pp = pair(&perms[idx / size], &perms[idx % size]);
        let expect = predicted_at(idx);
        if let Some(fourier) = *outcome {
            scanned += 1;
            if fourier {
                fourier_pairs.push(pp.clone());
            }
            if fourier != expect {
                mismatches.push(pp.clone());
            }
        }
        if expect {
            predicted.push(pp);
        }
    }
    let complete = scanned == total;
    let matches = complete && fourier_pairs == predicted;
    Ok(ClassificationReport {
        n,
        pairs_total: total,
        pairs_scanned: scanned,
        fourier_pairs,
        predicted,
        mismatches,
        matches,
        complete,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// Which values of t the H4(t) scan should use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleSpec {
    /// All m-th roots of unity w^0, …, w^(m−1).
    Conductor(u32),
}

impl SampleSpec {
    pub fn parse(text: &str) -> Result<SampleSpec> {
        let (kind, value) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected conductor:M, got {text:?}")))?;
        match kind.trim() {
            "conductor" => {
                let m: u32 = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("conductor:M needs a positive integer, got {value:?}")))?;
                if m == 0 || m > 360 {
                    return Err(Error::Parse(format!("conductor {m} outside 1..=360")));
                }
                Ok(SampleSpec::Conductor(m))
            }
            other => Err(Error::Parse(format!("unknown sample kind {other:?}"))),
        }
    }

    pub fn samples(&self) -> Vec<CycNumber> {
        match *self {
            SampleSpec::Conductor(m) => (0..m).map(|k| root_of_unity(m, k as i64)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H4Sample {
    pub t: CycNumber,
    pub t_text: String,
    pub is_plus_minus_i: bool,
    pub vanishing_pairs: usize,
    pub any_vanish: bool,
    pub all_vanish: bool,
    /// The first pair (in enumeration order) with a nonzero coefficient.
    pub first_nonvanishing: Option<PermPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H4ScanReport {
    pub pairs_per_sample: usize,
    /// The test is exact vanishing of the whole z^2 coefficient, which is
    /// stronger than vanishing of its real part.
    pub criterion: String,
    pub samples: Vec<H4Sample>,
    /// The coefficient vanishes on every pair exactly when t = ±i.
    pub all_vanish_iff_pm_i: bool,
    /// Some pair gives a vanishing coefficient exactly when t = ±i.
    pub some_vanish_iff_pm_i: bool,
}

/// `exp(2*pi*i*k/m)` for a root of unity at its conductor m, else the
/// canonical text.
fn sample_label(t: &CycNumber) -> String {
    let m = t.conductor();
    match (0..m).find(|&k| root_of_unity(m, k as i64) == *t) {
        Some(0) => "1".into(),
        Some(k) => {
            let g = num_integer::gcd(k, m);
            format!("exp(2*pi*i*{}/{})", k / g, m / g)
        }
        None => t.to_string(),
    }
}

/// z^2 coefficient of det(z·A·B − I), B built from P1·H·P2.
pub fn h4_z2_coefficient(h: &ExactMatrix, p1: &Permutation, p2: &Permutation) -> Result<MPoly> {
    let a = omega_diag(4);
    let ph = p1.matrix().matmul(h)?.matmul(&p2.matrix())?;
    let ab = a.matmul(&b_from_hadamard(&ph)?)?;
    let z = VarSet::new(&[Var::Z]).expect("single variable");
    pencil(&[ab], z)?.determinant()?.coefficient_of(Var::Z, 2)
}

pub fn scan_h4_family(samples: &[CycNumber], workers: usize) -> Result<H4ScanReport> {
    let hs = samples.iter().map(h4_family_at).collect::<Result<Vec<_>>>()?;
    let perms: Vec<Permutation> = enumerate_sn(4)?.collect();
    let size = perms.len();
    let i = root_of_unity(4, 1);
    let minus_i = -&i;
    let vanish: Vec<Vec<bool>> = pool(workers)?.install(|| {
        hs.par_iter()
            .map(|h| {
                (0..size * size)
                    .into_par_iter()
                    .map(|idx| Ok(h4_z2_coefficient(h, &perms[idx / size], &perms[idx % size])?.is_zero()))
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let samples: Vec<H4Sample> = samples
        .iter()
        .zip(&vanish)
        .map(|(t, v)| {
            let first = v.iter().position(|z| !z).map(|idx| pair(&perms[idx / size], &perms[idx % size]));
            let vanishing = v.iter().filter(|z| **z).count();
            H4Sample {
                t: t.clone(),
                t_text: sample_label(t),
                is_plus_minus_i: *t == i || *t == minus_i,
                vanishing_pairs: vanishing,
                any_vanish: vanishing > 0,
                all_vanish: first.is_none(),
                first_nonvanishing: first,
            }
        })
        .collect();
    Ok(H4ScanReport {
        pairs_per_sample: size * size,
        criterion: "exact vanishing of the z^2 coefficient".into(),
        all_vanish_iff_pm_i: samples.iter().all(|s| s.all_vanish == s.is_plus_minus_i),
        some_vanish_iff_pm_i: samples.iter().all(|s| s.any_vanish == s.is_plus_minus_i),
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaCase {
    /// P1 ∈ G_n: B = Λ*·P*·B̂·P·Λ.
    LeftAffine,
    /// P2 ∈ G_n: B = (1/n)·F*·P*·A·P·F.
    RightAffine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaWitness {
    pub case: LemmaCase,
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    /// (q, m) of whichever permutation is affine.
    pub affine: (usize, usize),
    /// Each row and column of B holds exactly one nonzero entry, and all of
    /// them are one common n-th root of unity (left case only).
    pub monomial_common_root: Option<bool>,
    pub permutation: Option<Vec<usize>>,
    /// Diagonal of Λ (left case only).
    pub lambda: Option<Vec<CycNumber>>,
    pub verified: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub n: usize,
    pub seed: u64,
    /// F·A·F*/n equals the up-shift and P̂*·B̂·P̂ equals it too.
    pub hats_identity: bool,
    pub witnesses: Vec<LemmaWitness>,
    pub all_verified: bool,
}

/// The single root of unity shared by all nonzero entries when every row and
/// column has exactly one nonzero entry.
fn monomial_root(b: &ExactMatrix, n: usize) -> Option<CycNumber> {
    let mut common: Option<CycNumber> = None;
    for i in 0..n {
        let row_nz = (0..n).filter(|&j| !b.get(i, j).is_zero()).count();
        let col_nz = (0..n).filter(|&j| !b.get(j, i).is_zero()).count();
        if row_nz != 1 || col_nz != 1 {
            return None;
        }
    }
    for i in 0..n {
        for j in 0..n {
            let c = b.constant_at(i, j).ok()?;
            if c.is_zero() {
                continue;
            }
            match &common {
                None => common = Some(c),
                Some(w) if *w != c => return None,
                _ => {}
            }
        }
    }
    let w = common?;
    w.pow(n as u32).is_one().then_some(w)
}

/// Permutation P with P*·B̂·P having the support of `b`; `b` must be a
/// monomial matrix whose support is an n-cycle.
fn cycle_relabeling(b: &ExactMatrix, n: usize) -> Option<Permutation> {
    // sigma(j) is the row of the nonzero entry in column j
    let sigma: Vec<usize> = (0..n).map(|j| (0..n).find(|&i| !b.get(i, j).is_zero())).collect::<Option<_>>()?;
    let mut images = vec![usize::MAX; n];
    let mut j = 0;
    for k in 0..n {
        if images[j] != usize::MAX {
            return None;
        }
        images[j] = k;
        j = sigma[j];
    }
    if j != 0 {
        return None;
    }
    Permutation::new(images).ok()
}

fn left_witness(p1: &Permutation, p2: &Permutation, b: &ExactMatrix) -> Result<LemmaWitness> {
    let n = p1.len();
    let mut w = LemmaWitness {
        case: LemmaCase::LeftAffine,
        p1: p1.images().to_vec(),
        p2: p2.images().to_vec(),
        affine: p1.affine_witness().expect("caller passes an affine P1"),
        monomial_common_root: Some(monomial_root(b, n).is_some()),
        permutation: None,
        lambda: None,
        verified: false,
        note: None,
    };
    let Some(p) = cycle_relabeling(b, n) else {
        w.note = Some("support of B is not a single n-cycle".into());
        return Ok(w);
    };
    let pm = p.matrix();
    let c = pm.adjoint()?.matmul(&b_hat(n))?.matmul(&pm)?;
    let Some(lambda) = diagonal_conjugation(&c, b)? else {
        w.permutation = Some(p.images().to_vec());
        w.note = Some("no diagonal conjugation onto the relabelled shift".into());
        return Ok(w);
    };
    let lm = ExactMatrix::diag(&lambda);
    let rebuilt = lm.adjoint()?.matmul(&c)?.matmul(&lm)?;
    let roots = lambda.iter().all(|l| l.pow(n as u32).is_one());
    w.verified = rebuilt == *b && roots && w.monomial_common_root == Some(true);
    w.permutation = Some(p.images().to_vec());
    w.lambda = Some(lambda);
    Ok(w)
}

fn right_witness(p1: &Permutation, p2: &Permutation, b: &ExactMatrix) -> Result<LemmaWitness> {
    let n = p1.len();
    let mut w = LemmaWitness {
        case: LemmaCase::RightAffine,
        p1: p1.images().to_vec(),
        p2: p2.images().to_vec(),
        affine: p2.affine_witness().expect("caller passes an affine P2"),
        monomial_common_root: None,
        permutation: None,
        lambda: None,
        verified: false,
        note: None,
    };
    let f = fourier_matrix(n);
    let inv_n = CycNumber::from_ratio(1, n as i64);
    let delta = f.matmul(b)?.matmul(&f.adjoint()?)?.scalar_mul(&inv_n);
    // delta must be diag(w^e_0, …, w^e_{n-1}) with e a permutation
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        let d = delta.constant_at(j, j)?;
        let e = (0..n).find(|&e| d == root_of_unity(n as u32, e as i64));
        let off_diagonal_zero = (0..n).all(|k| k == j || delta.get(j, k).is_zero());
        match e {
            Some(e) if off_diagonal_zero => images.push(e),
            _ => {
                w.note = Some("F·B·F*/n is not a diagonal of n-th roots".into());
                return Ok(w);
            }
        }
    }
    let Ok(p) = Permutation::new(images) else {
        w.note = Some("diagonal of F·B·F*/n repeats a root".into());
        return Ok(w);
    };
    let pm = p.matrix();
    let pap = pm.adjoint()?.matmul(&omega_diag(n))?.matmul(&pm)?;
    let rebuilt = f.adjoint()?.matmul(&pap)?.matmul(&f)?.scalar_mul(&inv_n);
    w.verified = rebuilt == *b;
    w.permutation = Some(p.images().to_vec());
    Ok(w)
}

fn hats_identity(n: usize) -> Result<bool> {
    let f = fourier_matrix(n);
    let inv_n = CycNumber::from_ratio(1, n as i64);
    let fa = f.matmul(&omega_diag(n))?.matmul(&f.adjoint()?)?.scalar_mul(&inv_n);
    let ph = hat_permutation(n).matrix();
    let conj = ph.adjoint()?.matmul(&b_hat(n))?.matmul(&ph)?;
    Ok(fa == b_hat_hat(n) && conj == b_hat_hat(n))
}

/// For every affine P1 pairs it with the identity and `samples` random P2,
/// exhibiting Λ and P with B(P1, P2) = Λ*·P*·B̂·P·Λ; symmetrically for every
/// affine P2 exhibits P with B(P1, P2) = (1/n)·F*·P*·A·P·F.
pub fn verify_lemma_4_1_equivalences(n: usize, seed: u64, samples: usize) -> Result<LemmaReport> {
    if !(2..=6).contains(&n) {
        return Err(Error::SizeLimit { size: n, limit: 6 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_perm = || {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rng);
        Permutation::new(images).expect("shuffled identity")
    };
    let id = Permutation::identity(n);
    let mut jobs = Vec::new();
    for g in affine_group(n) {
        let others: Vec<Permutation> = std::iter::once(id.clone()).chain((0..samples).map(|_| random_perm())).collect();
        for other in others {
            jobs.push((LemmaCase::LeftAffine, g.clone(), other.clone()));
            jobs.push((LemmaCase::RightAffine, other, g.clone()));
        }
    }
    let witnesses = jobs
        .par_iter()
        .map(|(case, p1, p2)| {
            let b = fourier_pair_b(p1, p2);
            match case {
                LemmaCase::LeftAffine => left_witness(p1, p2, &b),
                LemmaCase::RightAffine => right_witness(p1, p2, &b),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let hats = hats_identity(n)?;
    let all_verified = hats && witnesses.iter().all(|w| w.verified);
    Ok(LemmaReport { n, seed, hats_identity: hats, witnesses, all_verified })
}
