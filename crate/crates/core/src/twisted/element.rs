use std::collections::BTreeMap;
use std::ops::Mul;

use num_complex::Complex;
use num_traits::Zero;
use serde_json::{json, Value};

use super::monomial::LaurentMonomial;
use super::specialized::SpecializedElement;
use crate::error::{QuonError, Result};
use crate::params::QMatrix;
use crate::perm::{Permutation, SizeCap, Word};
use crate::scalar::Scalar;

/// Integer Gaussian scalars; every element built here has integer coefficients.
pub type Gauss = Complex<i64>;

/// A formal sum of Laurent monomials.
pub type Coefficient = BTreeMap<LaurentMonomial, Gauss>;

/// An element `Σ_π c_π π` of the twisted group algebra on `S_n`, coefficients
/// written to the left of the permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedElement {
    n: usize,
    terms: BTreeMap<Permutation, Coefficient>,
}

fn add_into(c: &mut Coefficient, m: LaurentMonomial, v: Gauss) {
    let e = c.entry(m).or_insert_with(Gauss::zero);
    *e += v;
    if e.is_zero() {
        c.retain(|_, x| !x.is_zero());
    }
}

impl TwistedElement {
    pub fn zero(n: usize) -> Self {
        TwistedElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize) -> Self {
        Self::monomial(n, LaurentMonomial::unit(), Gauss::new(1, 0))
    }

    /// A scalar multiple of a monomial, sitting on the identity permutation.
    pub fn monomial(n: usize, m: LaurentMonomial, c: Gauss) -> Self {
        Self::term(Permutation::identity(n), m, c)
    }

    /// The bare permutation `π`, without its inversion monomial.
    pub fn perm(p: Permutation) -> Self {
        Self::term(p, LaurentMonomial::unit(), Gauss::new(1, 0))
    }

    /// `π̃ = Q_π π`.
    pub fn lift(p: &Permutation) -> Self {
        Self::term(p.clone(), LaurentMonomial::of_inversions(p), Gauss::new(1, 0))
    }

    pub fn term(p: Permutation, m: LaurentMonomial, c: Gauss) -> Self {
        let n = p.degree();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, BTreeMap::from([(m, c)]));
        }
        TwistedElement { n, terms }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, Coefficient> {
        &self.terms
    }

    pub fn coefficient(&self, p: &Permutation) -> Option<&Coefficient> {
        self.terms.get(p)
    }

    pub fn support(&self) -> impl Iterator<Item = &Permutation> {
        self.terms.keys()
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(QuonError::DegreeMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            let slot = out.terms.entry(p.clone()).or_default();
            for (m, v) in c {
                add_into(slot, m.clone(), v * sign);
            }
            if slot.is_empty() {
                out.terms.remove(p);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> Self {
        self.scale(Gauss::new(-1, 0))
    }

    pub fn scale(&self, s: Gauss) -> Self {
        let mut out = Self::zero(self.n);
        if s.is_zero() {
            return out;
        }
        for (p, c) in &self.terms {
            out.terms
                .insert(p.clone(), c.iter().map(|(m, v)| (m.clone(), v * s)).collect());
        }
        out
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        Self::unit(self.n).sub(self).expect("same degree")
    }

    /// Twisted product: `(a σ)(b π) = a σ(b) (σπ)` with `σ(Q_{k,l}) = Q_{σ(k),σ(l)}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut terms: BTreeMap<Permutation, Coefficient> = BTreeMap::new();
        for (s, a) in &self.terms {
            for (p, b) in &other.terms {
                let slot = terms.entry(s * p).or_default();
                for (m2, v2) in b {
                    let moved = m2.permute(s);
                    for (m1, v1) in a {
                        add_into(slot, m1.mul(&moved), v1 * v2);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_empty());
        Ok(TwistedElement { n: self.n, terms })
    }

    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a TwistedElement>) -> Result<Self> {
        factors
            .into_iter()
            .try_fold(Self::unit(n), |acc, x| acc.multiply(x))
    }

    pub fn sum<'a>(n: usize, terms: impl IntoIterator<Item = &'a TwistedElement>) -> Result<Self> {
        terms.into_iter().try_fold(Self::zero(n), |acc, x| acc.add(x))
    }

    /// Image under `S_n ⊂ S_m`, fixing the points `n+1..=m`.
    pub fn embed(&self, m: usize) -> Self {
        TwistedElement {
            n: m,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.embed(m), c.clone()))
                .collect(),
        }
    }

    /// Restricts to the permutations accepted by `keep`.
    pub fn component(&self, keep: impl Fn(&Permutation) -> bool) -> Self {
        TwistedElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Value of the coefficient of `p` after `Q_{k,l} ↦ q[w_k, w_l]`.
    pub fn evaluate_coefficient<S: Scalar>(c: &Coefficient, q: &QMatrix<S>, word: &Word) -> Result<S> {
        let mut v = S::zero();
        for (m, s) in c {
            let scalar = S::from_c64(num_complex::Complex::new(s.re as f64, s.im as f64));
            v = v + scalar * m.evaluate(q, word)?;
        }
        Ok(v)
    }

    /// Regular-representation matrix at base word `word`; see [`SpecializedElement`].
    pub fn specialize<S: Scalar>(&self, q: &QMatrix<S>, word: &Word, cap: SizeCap) -> Result<SpecializedElement<S>> {
        if word.len() != self.n {
            return Err(QuonError::DegreeMismatch {
                expected: self.n,
                got: word.len(),
            });
        }
        SpecializedElement::from_element(self, q, word, cap)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(p, c)| {
                    let monomials: Vec<Value> = c
                        .iter()
                        .map(|(m, s)| {
                            let pairs: serde_json::Map<String, Value> = m
                                .exponents()
                                .iter()
                                .map(|(&(k, l), &e)| (format!("{k},{l}"), json!(e)))
                                .collect();
                            json!({ "pairs": pairs, "scalar": [s.re, s.im] })
                        })
                        .collect();
                    json!({ "perm": p.one_line(), "monomials": monomials })
                })
                .collect(),
        )
    }
}

impl Mul for &TwistedElement {
    type Output = TwistedElement;

    /// Panics on a degree mismatch; use [`TwistedElement::multiply`] to get an error.
    fn mul(self, rhs: &TwistedElement) -> TwistedElement {
        self.multiply(rhs).expect("degree mismatch in twisted product")
    }
}
