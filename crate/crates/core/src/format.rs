//! JSON formats for cyclotomic numbers, polynomials and matrices.
//!
//! A number is `{"conductor": m, "terms": [[k, num, den], ...]}` meaning
//! Σ num/den · w^k with w = exp(2πi/m). Inside polynomials and matrices the
//! conductor is stated once at the top and each coefficient is just the list
//! of triples. Integers that do not fit in an i64 are written as strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cycfield::CycNumber;
use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::mpoly::{MPoly, Monomial, Var, VarSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => JsonInt::Small(s),
            None => JsonInt::Big(v.to_string()),
        }
    }
}

impl JsonInt {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => {
                BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
            }
        }
    }
}

pub type Triple = (usize, JsonInt, JsonInt);

pub fn triples_of(c: &CycNumber) -> Vec<Triple> {
    c.term_triples().iter().map(|(k, n, d)| (*k, n.into(), d.into())).collect()
}

pub fn number_from_triples(m: u32, triples: &[Triple]) -> Result<CycNumber> {
    let big = triples
        .iter()
        .map(|(k, n, d)| Ok((*k, n.to_bigint()?, d.to_bigint()?)))
        .collect::<Result<Vec<_>>>()?;
    CycNumber::from_term_triples(m, &big)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycJson {
    pub conductor: u32,
    pub terms: Vec<Triple>,
}

impl From<&CycNumber> for CycJson {
    fn from(c: &CycNumber) -> Self {
        CycJson { conductor: c.conductor(), terms: triples_of(c) }
    }
}

impl CycJson {
    pub fn to_number(&self) -> Result<CycNumber> {
        number_from_triples(self.conductor, &self.terms)
    }
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CycJson::deserialize(d)?.to_number().map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u16>,
    pub coeff: Vec<Triple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub conductor: u32,
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub conductor: u32,
    pub vars: Vec<String>,
    pub rows: Vec<Vec<Vec<TermJson>>>,
}

fn poly_terms(p: &MPoly, conductor: u32) -> Result<Vec<TermJson>> {
    let vars = p.vars().vars();
    p.terms()
        .map(|(mono, c)| {
            let e = mono.exponents();
            Ok(TermJson {
                exponents: vars.iter().map(|v| e[v.index()]).collect(),
                coeff: triples_of(&c.rebase(conductor)?),
            })
        })
        .collect()
}

fn poly_from_terms(vars: VarSet, conductor: u32, terms: &[TermJson], at: &str) -> Result<MPoly> {
    let list: Vec<Var> = vars.vars();
    let mut out = Vec::with_capacity(terms.len());
    for (t, term) in terms.iter().enumerate() {
        if term.exponents.len() != list.len() {
            return Err(Error::Parse(format!(
                "{at}[{t}]: expected {} exponents, got {}",
                list.len(),
                term.exponents.len()
            )));
        }
        let mut exps = [0u16; crate::mpoly::MAX_VARS];
        for (v, &e) in list.iter().zip(&term.exponents) {
            exps[v.index()] = e;
        }
        let mono = Monomial::from_exponents(exps);
        let c = number_from_triples(conductor, &term.coeff)
            .map_err(|e| Error::Parse(format!("{at}[{t}].coeff: {e}")))?;
        out.push((mono, c));
    }
    MPoly::from_terms(vars, out)
}

fn check_conductor(m: u32) -> Result<()> {
    if m == 0 || m > 10_000 {
        return Err(Error::Parse(format!("conductor: {m} is out of range 1..=10000")));
    }
    Ok(())
}

fn parse_vars(names: &[String]) -> Result<VarSet> {
    VarSet::parse(names).map_err(|e| Error::Parse(format!("vars: {e}")))
}

impl PolyJson {
    pub fn from_poly(p: &MPoly) -> Result<PolyJson> {
        let conductor = p.conductor();
        Ok(PolyJson { conductor, vars: p.vars().names(), terms: poly_terms(p, conductor)? })
    }

    pub fn to_poly(&self) -> Result<MPoly> {
        check_conductor(self.conductor)?;
        let vars = parse_vars(&self.vars)?;
        poly_from_terms(vars, self.conductor, &self.terms, "terms")
    }
}

impl MatrixJson {
    pub fn from_matrix(m: &ExactMatrix) -> Result<MatrixJson> {
        let conductor = m.conductor();
        let rows = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| poly_terms(m.get(i, j), conductor)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixJson { conductor, vars: m.vars().names(), rows })
    }

    pub fn to_matrix(&self) -> Result<ExactMatrix> {
        check_conductor(self.conductor)?;
        let vars = parse_vars(&self.vars)?;
        let rows = self.rows.len();
        let cols = self.rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows * cols);
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "rows[{i}]: expected {cols} entries like rows[0], got {}",
                    row.len()
                )));
            }
            for (j, entry) in row.iter().enumerate() {
                entries.push(poly_from_terms(vars, self.conductor, entry, &format!("rows[{i}][{j}]"))?);
            }
        }
        ExactMatrix::from_entries(rows, cols, vars, entries)
    }
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

/// Parses a matrix document; errors carry the line and column (syntax) or the
/// JSON path (content) of the first problem.
pub fn matrix_from_json(text: &str) -> Result<ExactMatrix> {
    let doc: MatrixJson = serde_json::from_str(text).map_err(|e| json_error("invalid matrix JSON", e))?;
    doc.to_matrix()
}

pub fn matrix_to_json(m: &ExactMatrix) -> Result<String> {
    let doc = MatrixJson::from_matrix(m)?;
    Ok(serde_json::to_string_pretty(&doc).expect("plain data serializes"))
}

pub fn poly_from_json(text: &str) -> Result<MPoly> {
    let doc: PolyJson = serde_json::from_str(text).map_err(|e| json_error("invalid polynomial JSON", e))?;
    doc.to_poly()
}

pub fn poly_to_json(p: &MPoly) -> Result<String> {
    let doc = PolyJson::from_poly(p)?;
    Ok(serde_json::to_string_pretty(&doc).expect("plain data serializes"))
}

pub fn number_from_json(text: &str) -> Result<CycNumber> {
    let doc: CycJson = serde_json::from_str(text).map_err(|e| json_error("invalid number JSON", e))?;
    doc.to_number()
}
