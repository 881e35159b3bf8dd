use std::collections::BTreeMap;
use std::fmt;

use crate::error::{QuonError, Result};
use crate::params::QMatrix;
use crate::perm::{Permutation, Word};
use crate::scalar::Scalar;

/// A Laurent monomial `∏ Q_{k,l}^{e_kl}` in commuting indeterminates indexed by
/// ordered pairs of distinct positions `1 <= k, l <= n`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentMonomial(BTreeMap<(usize, usize), i32>);

impl LaurentMonomial {
    pub fn unit() -> Self {
        LaurentMonomial(BTreeMap::new())
    }

    /// `Q_{k,l}`.
    pub fn var(k: usize, l: usize) -> Self {
        assert!(k != l && k > 0 && l > 0, "Q_{{{k},{l}}} is not an indeterminate");
        LaurentMonomial(BTreeMap::from([((k, l), 1)]))
    }

    /// `Q_{{k,l}} = Q_{k,l} Q_{l,k}`.
    pub fn brace(k: usize, l: usize) -> Self {
        Self::var(k, l).mul(&Self::var(l, k))
    }

    /// `Q_T = ∏_{k ≠ l ∈ T} Q_{k,l}`.
    pub fn set(t: &[usize]) -> Self {
        let mut m = Self::unit();
        for &k in t {
            for &l in t {
                if k != l {
                    m = m.mul(&Self::var(k, l));
                }
            }
        }
        m
    }

    /// `Q_π`: one factor `Q_{π(k),π(l)}` per inversion `(k, l)` of `π`.
    pub fn of_inversions(p: &Permutation) -> Self {
        let mut m = Self::unit();
        for (k, l) in p.inversions() {
            m = m.mul(&Self::var(p.apply(k), p.apply(l)));
        }
        m
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<(usize, usize), i32> {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (&kl, &e) in &other.0 {
            let v = out.entry(kl).or_insert(0);
            *v += e;
            if *v == 0 {
                out.remove(&kl);
            }
        }
        LaurentMonomial(out)
    }

    pub fn inverse(&self) -> Self {
        LaurentMonomial(self.0.iter().map(|(&kl, &e)| (kl, -e)).collect())
    }

    pub fn pow(&self, e: i32) -> Self {
        LaurentMonomial(
            self.0
                .iter()
                .filter(|_| e != 0)
                .map(|(&kl, &x)| (kl, x * e))
                .collect(),
        )
    }

    /// The action `π Q_{k,l} π⁻¹ = Q_{π(k),π(l)}`.
    pub fn permute(&self, p: &Permutation) -> Self {
        LaurentMonomial(
            self.0
                .iter()
                .map(|(&(k, l), &e)| ((p.apply(k), p.apply(l)), e))
                .collect(),
        )
    }

    /// Largest position index that occurs.
    pub fn max_index(&self) -> usize {
        self.0.keys().map(|&(k, l)| k.max(l)).max().unwrap_or(0)
    }

    /// Substitutes `Q_{k,l} ↦ q[w_k, w_l]`.
    pub fn evaluate<S: Scalar>(&self, q: &QMatrix<S>, word: &Word) -> Result<S> {
        let mut v = S::one();
        for (&(k, l), &e) in &self.0 {
            let x = q.get(word.at(k), word.at(l));
            if e < 0 && x.is_zero() {
                return Err(QuonError::ZeroDivision);
            }
            v = v * x.powi(e);
        }
        Ok(v)
    }
}

impl fmt::Debug for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(&(k, l), &e)| {
                if e == 1 {
                    format!("Q{k}{l}")
                } else {
                    format!("Q{k}{l}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
