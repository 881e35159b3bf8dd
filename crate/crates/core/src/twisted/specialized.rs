use std::collections::HashMap;

use super::element::TwistedElement;
use super::monomial::LaurentMonomial;
use crate::error::{QuonError, Result};
use crate::linalg::Matrix;
use crate::params::QMatrix;
use crate::perm::{johnson_trotter, Permutation, SizeCap, Word};
use crate::scalar::Scalar;

/// A twisted-algebra element evaluated at a base word `w`.
///
/// The coefficient `c_π` of an element depends on the word it multiplies, so the
/// specialization is stored as the `n! x n!` matrix
///
/// ```text
/// L[σ][σπ] = c_π evaluated at w.σ
/// ```
///
/// with rows and columns in Johnson-Trotter order. This is a homomorphism:
/// `L(xy) = L(x) L(y)`, and row `σ` lists the expansion of the monomial
/// `a_{w.σ}` multiplied on the right by the element.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializedElement<S> {
    word: Word,
    perms: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    matrix: Matrix<S>,
}

impl<S: Scalar> SpecializedElement<S> {
    fn with_matrix(
        word: &Word,
        cap: SizeCap,
        f: impl FnOnce(&[Permutation], &HashMap<Permutation, usize>) -> Result<Matrix<S>>,
    ) -> Result<Self> {
        let perms = if word.is_empty() {
            vec![Permutation::identity(0)]
        } else {
            johnson_trotter(word.len(), cap)?
        };
        let index: HashMap<Permutation, usize> =
            perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let matrix = f(&perms, &index)?;
        Ok(SpecializedElement {
            word: word.clone(),
            perms,
            index,
            matrix,
        })
    }

    pub fn from_element(x: &TwistedElement, q: &QMatrix<S>, word: &Word, cap: SizeCap) -> Result<Self> {
        Self::with_matrix(word, cap, |perms, index| {
            let size = perms.len();
            let mut m = Matrix::<S>::zeros(size, size);
            for (r, s) in perms.iter().enumerate() {
                let ws = word.act(s);
                for (p, c) in x.terms() {
                    let v = TwistedElement::evaluate_coefficient(c, q, &ws)?;
                    let col = index[&(s * p)];
                    m[(r, col)] = m[(r, col)].clone() + v;
                }
            }
            Ok(m)
        })
    }

    pub fn identity(word: &Word, cap: SizeCap) -> Result<Self> {
        Self::with_matrix(word, cap, |perms, _| Ok(Matrix::identity(perms.len())))
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn position(&self, p: &Permutation) -> usize {
        self.index[p]
    }

    fn check_word(&self, other: &Self) -> Result<()> {
        if self.word != other.word {
            return Err(QuonError::Invalid(format!(
                "specialized at different words {:?} and {:?}",
                self.word.letters(),
                other.word.letters()
            )));
        }
        Ok(())
    }

    fn same_shape(&self, matrix: Matrix<S>) -> Self {
        SpecializedElement {
            word: self.word.clone(),
            perms: self.perms.clone(),
            index: self.index.clone(),
            matrix,
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_word(other)?;
        Ok(self.same_shape(self.matrix.mul(&other.matrix)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_word(other)?;
        Ok(self.same_shape(self.matrix.add(&other.matrix)))
    }

    /// The element whose regular-representation matrix is the inverse matrix.
    pub fn invert(&self) -> Result<Self> {
        Ok(self.same_shape(self.matrix.inverse_by_pivots()?))
    }

    /// `max |L(self) - L(other)|`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_word(other)?;
        Ok(self.matrix.max_abs_diff(&other.matrix))
    }

    /// The values `c_π(w.σ)` for every `σ`, in row order.
    pub fn coefficient_of(&self, p: &Permutation) -> Vec<S> {
        self.perms
            .iter()
            .enumerate()
            .map(|(r, s)| self.matrix[(r, self.index[&(s * p)])].clone())
            .collect()
    }

    /// Keeps only the permutations accepted by `keep` (zeroes the rest).
    pub fn component(&self, keep: impl Fn(&Permutation) -> bool) -> Self {
        let mut m = Matrix::zeros(self.perms.len(), self.perms.len());
        for (r, s) in self.perms.iter().enumerate() {
            for p in self.perms.iter().filter(|p| keep(p)) {
                let c = self.index[&(s * p)];
                m[(r, c)] = self.matrix[(r, c)].clone();
            }
        }
        self.same_shape(m)
    }

    /// Matrix of the right action `a_j ↦ a_j . x` on the distinct rearrangements of
    /// the base word, in column convention: entry `[j'][j]` is the coefficient of
    /// `a_{j'}` in `a_j . x`. Labels are in first-occurrence Johnson-Trotter order.
    /// With `first_letter_fixed`, rows and columns are restricted to words sharing
    /// the base word's first letter.
    pub fn right_mult_matrix(&self, first_letter_fixed: bool) -> (Vec<Word>, Matrix<S>) {
        let mut labels: Vec<Word> = Vec::new();
        let mut rows_of: Vec<usize> = Vec::new();
        let mut label_index: HashMap<Word, usize> = HashMap::new();
        for (r, s) in self.perms.iter().enumerate() {
            let w = self.word.act(s);
            if first_letter_fixed && !w.is_empty() && w.at(1) != self.word.at(1) {
                continue;
            }
            if !label_index.contains_key(&w) {
                label_index.insert(w.clone(), labels.len());
                labels.push(w);
                rows_of.push(r);
            }
        }
        let size = labels.len();
        let mut m = Matrix::<S>::zeros(size, size);
        for (col, &r) in rows_of.iter().enumerate() {
            for (c, s) in self.perms.iter().enumerate() {
                if let Some(&row) = label_index.get(&self.word.act(s)) {
                    m[(row, col)] = m[(row, col)].clone() + self.matrix[(r, c)].clone();
                }
            }
        }
        (labels, m)
    }
}

/// The closed form of `γ̄_n⁻¹` at base word `w`:
///
/// ```text
/// γ̄_n⁻¹ = Σ_π π̃ · ∏_{π(i) > π(i+1)} Q_{{1..i}} / ∏_{m=2}^{n} (1 - Q_{{1..m}})
/// ```
///
/// with the rational coefficient to the right of `π̃`, so that moving it left
/// applies `π` to its subscripts.
pub fn gamma_bar_inverse_closed<S: Scalar>(n: usize, q: &QMatrix<S>, word: &Word, cap: SizeCap) -> Result<SpecializedElement<S>> {
    if word.len() != n {
        return Err(QuonError::DegreeMismatch {
            expected: n,
            got: word.len(),
        });
    }
    let set = |m: usize| LaurentMonomial::set(&(1..=m).collect::<Vec<_>>());
    SpecializedElement::with_matrix(word, cap, |perms, index| {
        let size = perms.len();
        let mut out = Matrix::<S>::zeros(size, size);
        for p in perms {
            let mut num = LaurentMonomial::of_inversions(p);
            for i in 1..n {
                if p.apply(i) > p.apply(i + 1) {
                    num = num.mul(&set(i).permute(p));
                }
            }
            let den: Vec<LaurentMonomial> = (2..=n).map(|m| set(m).permute(p)).collect();
            for (r, s) in perms.iter().enumerate() {
                let ws = word.act(s);
                let mut d = S::one();
                for f in &den {
                    d = d * (S::one() - f.evaluate(q, &ws)?);
                }
                if d.is_zero() {
                    return Err(QuonError::ZeroDivision);
                }
                out[(r, index[&(s * p)])] = num.evaluate(q, &ws)? / d;
            }
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::gram_generic;
    use crate::params::{random_exact_qmatrix, seeded_rng};
    use crate::perm::Weight;
    use crate::scalar::GaussRat;
    use crate::twisted::zagier::{zagier, ZagierKind};

    #[test]
    fn alpha_realizes_the_gram_block() {
        let q = random_exact_qmatrix(3, 7, 0.9, &mut seeded_rng(2));
        let cap = SizeCap::default();
        for n in 1..=3 {
            let w = Weight::new((0..n).collect());
            let a = zagier(&ZagierKind::Alpha(n), cap).unwrap();
            let s = a.specialize(&q, &w.as_word(), cap).unwrap();
            let (labels, r) = s.right_mult_matrix(false);
            let block = gram_generic(&w, &q, cap).unwrap();
            assert_eq!(labels, block.labels);
            assert_eq!(r, block.matrix);
        }
    }

    #[test]
    fn unit_gives_identity() {
        let q = random_exact_qmatrix(2, 7, 0.9, &mut seeded_rng(2));
        let cap = SizeCap::default();
        let w = Word::new(vec![0, 1, 0]);
        let s = TwistedElement::unit(3).specialize(&q, &w, cap).unwrap();
        assert_eq!(s, SpecializedElement::<GaussRat>::identity(&w, cap).unwrap());
        let (labels, r) = s.right_mult_matrix(false);
        assert_eq!(labels.len(), 3);
        assert_eq!(r, Matrix::identity(3));
    }

    #[test]
    fn specialization_is_a_homomorphism() {
        let q = random_exact_qmatrix(3, 5, 0.9, &mut seeded_rng(8));
        let cap = SizeCap::default();
        let w = Word::new(vec![2, 0, 1]);
        let a = zagier(&ZagierKind::Beta(3), cap).unwrap();
        let b = zagier(&ZagierKind::GammaBar(3), cap).unwrap();
        let ab = (&a * &b).specialize(&q, &w, cap).unwrap();
        let sa = a.specialize(&q, &w, cap).unwrap();
        let sb = b.specialize(&q, &w, cap).unwrap();
        assert_eq!(ab, sa.multiply(&sb).unwrap());
    }

    #[test]
    fn zero_parameters_kill_inverted_terms() {
        let q = QMatrix::<GaussRat>::zeros(2);
        let cap = SizeCap::default();
        let t = TwistedElement::lift(&Permutation::from_images(vec![2, 1]).unwrap());
        let s = t.specialize(&q, &Word::new(vec![0, 1]), cap).unwrap();
        assert_eq!(*s.matrix(), Matrix::zeros(2, 2));
    }
}
