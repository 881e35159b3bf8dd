//! The hermitian family of deformation parameters `q_ij` over a finite ordered
//! alphabet.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{QuonError, Result};
use crate::perm::{Letter, Word};
use crate::scalar::{parse_rational, rational_from_f64, GaussRat, Scalar, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix<S> {
    labels: Vec<String>,
    entries: Vec<S>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Ordered pairs `(i, j)` with `q_ji != conj(q_ij)`, each listed once with `i <= j`.
    pub hermiticity_violations: Vec<(Letter, Letter)>,
    /// Pairs with `|q_ij| >= 1`; only populated in strict mode.
    pub disc_violations: Vec<(Letter, Letter)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hermiticity_violations.is_empty() && self.disc_violations.is_empty()
    }
}

impl<S: Scalar> QMatrix<S> {
    /// Builds from a dense row-major table. No validation is done here.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<S>>) -> Self {
        let m = labels.len();
        assert_eq!(table.len(), m);
        let entries = table
            .into_iter()
            .flat_map(|row| {
                assert_eq!(row.len(), m);
                row
            })
            .collect();
        QMatrix { labels, entries }
    }

    /// Alphabet `"1".."m"` with all parameters zero.
    pub fn zeros(m: usize) -> Self {
        QMatrix {
            labels: (1..=m).map(|i| i.to_string()).collect(),
            entries: vec![S::zero(); m * m],
        }
    }

    /// Alphabet `"1".."m"` with every parameter equal to `q`.
    pub fn single_parameter(m: usize, q: S) -> Self {
        QMatrix {
            labels: (1..=m).map(|i| i.to_string()).collect(),
            entries: vec![q; m * m],
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, l: Letter) -> &str {
        &self.labels[l]
    }

    pub fn letter(&self, label: &str) -> Result<Letter> {
        self.labels
            .iter()
            .position(|x| x == label)
            .ok_or_else(|| QuonError::UnknownLetter(label.to_string()))
    }

    pub fn get(&self, i: Letter, j: Letter) -> &S {
        &self.entries[i * self.labels.len() + j]
    }

    /// Sets `q_ij` and `q_ji = conj(q_ij)` together.
    pub fn set_hermitian(&mut self, i: Letter, j: Letter, v: S) {
        let m = self.labels.len();
        self.entries[j * m + i] = v.conj();
        self.entries[i * m + j] = v;
    }

    pub fn set_raw(&mut self, i: Letter, j: Letter, v: S) {
        let m = self.labels.len();
        self.entries[i * m + j] = v;
    }

    pub fn validate(&self, strict: bool) -> ValidationReport {
        let m = self.size();
        let mut report = ValidationReport::default();
        for i in 0..m {
            for j in i..m {
                let a = canonical(self.get(i, j));
                let b = canonical(&self.get(j, i).conj());
                if a != b {
                    report.hermiticity_violations.push((i, j));
                }
            }
        }
        if strict {
            for i in 0..m {
                for j in 0..m {
                    if !self.get(i, j).modulus_lt_one() {
                        report.disc_violations.push((i, j));
                    }
                }
            }
        }
        report
    }

    /// Validates and turns the first violation into an error.
    pub fn check(&self, strict: bool) -> Result<()> {
        let r = self.validate(strict);
        if let Some(&(i, j)) = r.hermiticity_violations.first() {
            return Err(QuonError::NonHermitian(
                self.labels[i].clone(),
                self.labels[j].clone(),
            ));
        }
        if let Some(&(i, j)) = r.disc_violations.first() {
            return Err(QuonError::OutsideUnitDisc(
                self.labels[i].clone(),
                self.labels[j].clone(),
            ));
        }
        Ok(())
    }

    /// Largest `|q_ij|`.
    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|e| e.magnitude()).fold(0.0, f64::max)
    }

    /// The family restricted to the listed letters, in the given order.
    pub fn restrict(&self, letters: &[Letter]) -> QMatrix<S> {
        let labels = letters.iter().map(|&l| self.labels[l].clone()).collect();
        let table = letters
            .iter()
            .map(|&i| letters.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        QMatrix::from_table(labels, table)
    }

    /// Same parameters in another scalar field.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> QMatrix<T> {
        QMatrix {
            labels: self.labels.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_c64(&self) -> QMatrix<C64> {
        self.map(|s| s.to_c64())
    }

    pub fn word_label(&self, w: &Word) -> String {
        self.join_labels(w.letters())
    }

    pub fn join_labels(&self, letters: &[Letter]) -> String {
        let single = self.labels.iter().all(|l| l.chars().count() == 1);
        let parts: Vec<&str> = letters.iter().map(|&l| self.labels[l].as_str()).collect();
        if single {
            parts.concat()
        } else {
            parts.join(",")
        }
    }

    /// Parses `"113"` (single-character labels) or `"1,1,3"`.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let tokens: Vec<String> = if text.contains(',') {
            text.split(',').map(|t| t.trim().to_string()).collect()
        } else if self.labels.iter().all(|l| l.chars().count() == 1) {
            text.chars().map(|c| c.to_string()).collect()
        } else {
            vec![text.to_string()]
        };
        Ok(Word::new(
            tokens
                .iter()
                .map(|t| self.letter(t))
                .collect::<Result<Vec<_>>>()?,
        ))
    }

    pub fn to_json(&self) -> Value
    where
        S: crate::scalar::ToJsonPair,
    {
        let mut q = serde_json::Map::new();
        for i in 0..self.size() {
            for j in 0..self.size() {
                q.insert(
                    format!("{},{}", self.labels[i], self.labels[j]),
                    self.get(i, j).to_json_pair(),
                );
            }
        }
        serde_json::json!({ "alphabet": self.labels, "q": q })
    }
}

fn canonical<S: Scalar>(s: &S) -> S {
    // `-0.0 == 0.0` already holds for floats, so equality is the canonical form
    s.clone()
}

/// Reads a scalar component: a JSON number or a string such as `"3/10"`.
trait Component: Sized {
    fn from_json(v: &Value) -> Result<Self>;
}

impl Component for f64 {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| QuonError::Invalid(format!("bad number {n}"))),
            Value::String(s) => {
                let r = parse_rational(s)
                    .ok_or_else(|| QuonError::Invalid(format!("bad number {s:?}")))?;
                use num_traits::ToPrimitive;
                r.to_f64()
                    .ok_or_else(|| QuonError::Invalid(format!("bad number {s:?}")))
            }
            other => Err(QuonError::Invalid(format!("expected a number, got {other}"))),
        }
    }
}

impl Component for BigRational {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(BigRational::from_integer(BigInt::from(i)))
                } else {
                    let f = n
                        .as_f64()
                        .ok_or_else(|| QuonError::Invalid(format!("bad number {n}")))?;
                    Ok(rational_from_f64(f))
                }
            }
            Value::String(s) => {
                parse_rational(s).ok_or_else(|| QuonError::Invalid(format!("bad number {s:?}")))
            }
            other => Err(QuonError::Invalid(format!("expected a number, got {other}"))),
        }
    }
}

/// Scalars that can be read from the `[re, im]` JSON input format.
pub trait FromJsonPair: Scalar {
    fn from_json_pair(v: &Value) -> Result<Self>;
}

fn pair_parts(v: &Value) -> Result<(&Value, Option<&Value>)> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok((&a[0], Some(&a[1]))),
        Value::Array(a) if a.len() == 1 => Ok((&a[0], None)),
        Value::Number(_) | Value::String(_) => Ok((v, None)),
        other => Err(QuonError::Invalid(format!(
            "expected [re, im], got {other}"
        ))),
    }
}

impl FromJsonPair for C64 {
    fn from_json_pair(v: &Value) -> Result<Self> {
        let (re, im) = pair_parts(v)?;
        Ok(C64::new(
            f64::from_json(re)?,
            im.map(f64::from_json).transpose()?.unwrap_or(0.0),
        ))
    }
}

impl FromJsonPair for GaussRat {
    fn from_json_pair(v: &Value) -> Result<Self> {
        let (re, im) = pair_parts(v)?;
        Ok(Complex::new(
            BigRational::from_json(re)?,
            im.map(BigRational::from_json)
                .transpose()?
                .unwrap_or_else(BigRational::zero),
        ))
    }
}

impl<S: FromJsonPair> QMatrix<S> {
    /// Parses `{"alphabet": [...], "q": {"i,j": [re, im], ...}}`.
    ///
    /// A pair given in only one direction is completed by conjugation; pairs given
    /// in neither direction are zero. Explicit pairs that are not conjugate to
    /// each other are rejected.
    pub fn from_json(v: &Value) -> Result<Self> {
        let alphabet = v
            .get("alphabet")
            .and_then(Value::as_array)
            .ok_or_else(|| QuonError::Invalid("missing `alphabet` array".into()))?;
        let labels: Vec<String> = alphabet
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                other => Err(QuonError::Invalid(format!("bad alphabet entry {other}"))),
            })
            .collect::<Result<_>>()?;
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() || labels.is_empty() {
            return Err(QuonError::Invalid("alphabet must be non-empty and distinct".into()));
        }
        let mut out = QMatrix::<S>::zeros(labels.len());
        out.labels = labels;

        let mut given: BTreeMap<(Letter, Letter), S> = BTreeMap::new();
        if let Some(qmap) = v.get("q") {
            let qmap = qmap
                .as_object()
                .ok_or_else(|| QuonError::Invalid("`q` must be an object".into()))?;
            for (key, val) in qmap {
                let (a, b) = key
                    .split_once(',')
                    .ok_or_else(|| QuonError::Invalid(format!("bad key {key:?}")))?;
                let i = out.letter(a.trim())?;
                let j = out.letter(b.trim())?;
                given.insert((i, j), S::from_json_pair(val)?);
            }
        }
        for (&(i, j), val) in &given {
            match given.get(&(j, i)) {
                Some(other) if *other != val.conj() => {
                    return Err(QuonError::ConflictingEntries(
                        out.labels[i].clone(),
                        out.labels[j].clone(),
                    ));
                }
                _ => out.set_hermitian(i, j, val.clone()),
            }
        }
        out.check(false)?;
        Ok(out)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)?;
        Self::from_json(&v)
    }
}

/// Hermitian parameters with off-diagonal entries uniform on the disc of the
/// given radius and real diagonal entries uniform on `(-radius, radius)`.
pub fn random_qmatrix(m: usize, radius: f64, rng: &mut impl Rng) -> QMatrix<C64> {
    let mut q = QMatrix::<C64>::zeros(m);
    for i in 0..m {
        q.set_raw(i, i, C64::new(radius * (2.0 * rng.random::<f64>() - 1.0), 0.0));
        for j in i + 1..m {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            q.set_hermitian(i, j, C64::from_polar(r, theta));
        }
    }
    q
}

/// Gaussian-rational parameters with denominator `den`, numerators drawn so that
/// every modulus is strictly below `radius` (itself at most one).
pub fn random_exact_qmatrix(m: usize, den: i64, radius: f64, rng: &mut impl Rng) -> QMatrix<GaussRat> {
    let bound = (radius * den as f64).floor() as i64;
    let ratio = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(den));
    let mut q = QMatrix::<GaussRat>::zeros(m);
    for i in 0..m {
        let a = rng.random_range(-bound..=bound);
        let a = if (a as f64) >= radius * den as f64 { a - 1 } else { a };
        q.set_raw(i, i, Complex::new(ratio(a), BigRational::zero()));
        for j in i + 1..m {
            loop {
                let a = rng.random_range(-bound..=bound);
                let b = rng.random_range(-bound..=bound);
                let r2 = (a * a + b * b) as f64;
                if r2 < (radius * den as f64).powi(2) && (a * a + b * b) < den * den {
                    q.set_hermitian(i, j, Complex::new(ratio(a), ratio(b)));
                    break;
                }
            }
        }
    }
    q
}

/// Deterministic generator for the randomized suites.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
