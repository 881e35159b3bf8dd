//! Brute-force Fock representation: creation-word states, operator polynomials in
//! `a_i` and `a_i†`, and their action by commuting annihilators to the right with
//! `a_i a_j† = q_ij a_j† a_i + δ_ij` until they reach the vacuum.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::params::QMatrix;
use crate::perm::{Letter, Word};
use crate::scalar::{Scalar, ToJsonPair};

/// A finite combination of states `a_{w_1}† … a_{w_n}† |0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> Default for FockVector<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> FockVector<S> {
    pub fn zero() -> Self {
        FockVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum() -> Self {
        Self::basis(Word::empty())
    }

    pub fn basis(w: Word) -> Self {
        FockVector {
            terms: BTreeMap::from([(w, S::one())]),
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, S> {
        &self.terms
    }

    pub fn get(&self, w: &Word) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_insert_with(S::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Largest amplitude modulus; `0` for the zero vector.
    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// `a_l† self`.
    pub fn create(&self, l: Letter) -> Self {
        FockVector {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.push(l);
                    v.extend_from_slice(w.letters());
                    (Word::new(v), c.clone())
                })
                .collect(),
        }
    }

    /// `a_l self`, in closed form: on `|j⟩` this is the twisted derivative
    /// `Σ_{p : j_p = l} q_{l j_1} … q_{l j_{p-1}} |j without position p⟩`.
    pub fn annihilate(&self, l: Letter, q: &QMatrix<S>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut prefix = c.clone();
            for (p, &x) in w.letters().iter().enumerate() {
                if x == l {
                    out.add_term(w.omit(p + 1), prefix.clone());
                }
                prefix = prefix * q.get(l, x).clone();
                if prefix.is_zero() {
                    break;
                }
            }
        }
        out
    }

    /// `⟨self | other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self, q: &QMatrix<S>) -> S {
        let mut acc = S::zero();
        for (u, a) in &self.terms {
            for (w, b) in &other.terms {
                if u.len() == w.len() {
                    acc = acc + a.conj() * b.clone() * inner_product(u, w, q);
                }
            }
        }
        acc
    }

    pub fn to_json(&self, q: &QMatrix<S>) -> Value
    where
        S: ToJsonPair,
    {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| json!({ "word": label_list(w, q), "amplitude": c.to_json_pair() }))
                .collect(),
        )
    }
}

fn label_list<S: Scalar>(w: &Word, q: &QMatrix<S>) -> Vec<String> {
    w.letters().iter().map(|&l| q.label(l).to_string()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MixedLetter {
    Create(Letter),
    Annihilate(Letter),
}

impl MixedLetter {
    pub fn dagger(self) -> Self {
        match self {
            MixedLetter::Create(l) => MixedLetter::Annihilate(l),
            MixedLetter::Annihilate(l) => MixedLetter::Create(l),
        }
    }
}

/// A product of creators and annihilators, read left to right.
pub type MixedMonomial = Vec<MixedLetter>;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPolynomial<S> {
    terms: BTreeMap<MixedMonomial, S>,
}

impl<S: Scalar> OperatorPolynomial<S> {
    pub fn zero() -> Self {
        OperatorPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), S::one())
    }

    pub fn monomial(m: MixedMonomial, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn create(l: Letter) -> Self {
        Self::monomial(vec![MixedLetter::Create(l)], S::one())
    }

    pub fn annihilate(l: Letter) -> Self {
        Self::monomial(vec![MixedLetter::Annihilate(l)], S::one())
    }

    /// `a_{w_1} … a_{w_n}`.
    pub fn annihilator_word(w: &Word) -> Self {
        Self::monomial(w.letters().iter().map(|&l| MixedLetter::Annihilate(l)).collect(), S::one())
    }

    /// `a_{w_1}† … a_{w_n}†`.
    pub fn creator_word(w: &Word) -> Self {
        Self::monomial(w.letters().iter().map(|&l| MixedLetter::Create(l)).collect(), S::one())
    }

    pub fn terms(&self) -> &BTreeMap<MixedMonomial, S> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[MixedLetter]) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: MixedMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(S::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add_term(m, x.clone() * y.clone());
            }
        }
        out
    }

    /// `[x, y]_c = x y - c y x`.
    pub fn q_commutator(x: &Self, y: &Self, c: &S) -> Self {
        x.mul(y).sub(&y.mul(x).scale(c))
    }

    /// The anti-involution: reverses each monomial, swaps creators and
    /// annihilators and conjugates the amplitudes.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.iter().rev().map(|x| x.dagger()).collect(), c.conj());
        }
        out
    }

    /// Acts on a state by literal rewriting. In each step the leftmost annihilator
    /// whose right neighbour is a creator or the vacuum moves one place right:
    /// `a_i a_j† → q_ij a_j† a_i + δ_ij`, and `a_i |0⟩ → 0`. Sequences reached along
    /// different paths are merged, so the work stays polynomial.
    pub fn apply(&self, v: &FockVector<S>, q: &QMatrix<S>) -> FockVector<S> {
        let mut pending: BTreeMap<MixedMonomial, S> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (w, a) in v.terms() {
                let mut seq = m.clone();
                seq.extend(w.letters().iter().map(|&l| MixedLetter::Create(l)));
                add_to(&mut pending, seq, c.clone() * a.clone());
            }
        }
        let mut out = FockVector::zero();
        while let Some((seq, c)) = pending.pop_first() {
            let step = seq.iter().enumerate().position(|(i, x)| {
                matches!(x, MixedLetter::Annihilate(_))
                    && !matches!(seq.get(i + 1), Some(MixedLetter::Annihilate(_)))
            });
            let Some(i) = step else {
                let letters = seq
                    .iter()
                    .map(|x| match x {
                        MixedLetter::Create(l) => *l,
                        MixedLetter::Annihilate(_) => unreachable!("no annihilators left"),
                    })
                    .collect();
                out.add_term(Word::new(letters), c);
                continue;
            };
            let MixedLetter::Annihilate(a) = seq[i] else { unreachable!() };
            let Some(&MixedLetter::Create(b)) = seq.get(i + 1) else {
                continue; // annihilator on the vacuum
            };
            let f = q.get(a, b).clone();
            if !f.is_zero() {
                let mut swapped = seq.clone();
                swapped.swap(i, i + 1);
                add_to(&mut pending, swapped, c.clone() * f);
            }
            if a == b {
                let mut contracted = seq.clone();
                contracted.drain(i..i + 2);
                add_to(&mut pending, contracted, c);
            }
        }
        out
    }

    pub fn to_json(&self, q: &QMatrix<S>) -> Value
    where
        S: ToJsonPair,
    {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let letters: Vec<Value> = m
                        .iter()
                        .map(|x| match x {
                            MixedLetter::Create(l) => json!(["cre", q.label(*l)]),
                            MixedLetter::Annihilate(l) => json!(["ann", q.label(*l)]),
                        })
                        .collect();
                    json!({ "monomial": letters, "scalar": c.to_json_pair() })
                })
                .collect(),
        )
    }
}

fn add_to<S: Scalar>(map: &mut BTreeMap<MixedMonomial, S>, seq: MixedMonomial, c: S) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(seq.clone()).or_insert_with(S::zero);
    *slot = slot.clone() + c;
    if slot.is_zero() {
        map.remove(&seq);
    }
}

/// `⟨u|w⟩ = ⟨0| a_{u_n} … a_{u_1} a_{w_1}† … a_{w_m}† |0⟩`.
pub fn inner_product<S: Scalar>(u: &Word, w: &Word, q: &QMatrix<S>) -> S {
    if u.len() != w.len() || u.weight() != w.weight() {
        return S::zero();
    }
    let mut v = FockVector::basis(w.clone());
    for &l in u.letters() {
        v = v.annihilate(l, q);
    }
    v.get(&Word::empty())
}

/// Gram matrix `G[a][b] = ⟨words_a | words_b⟩`.
pub fn gram_matrix<S: Scalar>(words: &[Word], q: &QMatrix<S>) -> crate::linalg::Matrix<S> {
    crate::linalg::Matrix::from_fn(words.len(), words.len(), |a, b| {
        inner_product(&words[a], &words[b], q)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{random_exact_qmatrix, seeded_rng};
    use crate::scalar::GaussRat;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn w(v: &[Letter]) -> Word {
        Word::new(v.to_vec())
    }

    #[test]
    fn vacuum_is_killed() {
        let q = random_exact_qmatrix(2, 5, 0.9, &mut seeded_rng(1));
        let a = OperatorPolynomial::<GaussRat>::annihilate(0);
        assert!(a.apply(&FockVector::vacuum(), &q).is_zero());
        let aa = a.mul(&OperatorPolynomial::create(0));
        assert_eq!(aa.apply(&FockVector::vacuum(), &q), FockVector::vacuum());
    }

    #[test]
    fn single_rewrite_with_parameter() {
        let q = random_exact_qmatrix(2, 5, 0.9, &mut seeded_rng(4));
        let op = OperatorPolynomial::<GaussRat>::annihilate(0)
            .mul(&OperatorPolynomial::create(1))
            .mul(&OperatorPolynomial::create(0));
        let got = op.apply(&FockVector::vacuum(), &q);
        let expected = FockVector::basis(w(&[1])).scale(q.get(0, 1));
        assert_eq!(got, expected);
    }

    #[test]
    fn inner_product_examples() {
        let q = random_exact_qmatrix(3, 7, 0.9, &mut seeded_rng(6));
        assert_eq!(inner_product(&w(&[0, 1]), &w(&[0, 1]), &q), GaussRat::one());
        assert_eq!(inner_product(&w(&[0, 1]), &w(&[1, 0]), &q), q.get(0, 1).clone());
        let (q11, q13) = (q.get(0, 0).clone(), q.get(0, 2).clone());
        assert_eq!(
            inner_product(&w(&[0, 0, 2]), &w(&[0, 2, 0]), &q),
            q13.clone() + q11 * q13
        );
        assert!(inner_product(&w(&[0]), &w(&[1]), &q).is_zero());
    }

    #[test]
    fn closed_form_annihilation_matches_rewriting() {
        let q = random_exact_qmatrix(3, 7, 0.9, &mut seeded_rng(12));
        for word in [w(&[0, 1, 0]), w(&[2, 0, 1, 0]), w(&[1, 1, 1])] {
            let v = FockVector::basis(word);
            for l in 0..3 {
                let lit = OperatorPolynomial::<GaussRat>::annihilate(l).apply(&v, &q);
                assert_eq!(lit, v.annihilate(l, &q));
            }
        }
    }

    fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0usize..3, 0..=max_len).prop_map(Word::new)
    }

    fn mixed_strategy() -> impl Strategy<Value = MixedMonomial> {
        proptest::collection::vec(
            prop_oneof![
                (0usize..3).prop_map(MixedLetter::Create),
                (0usize..3).prop_map(MixedLetter::Annihilate)
            ],
            0..4,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn inner_product_is_hermitian(u in word_strategy(4), v in word_strategy(4), seed in 0u64..1000) {
            let q = random_exact_qmatrix(3, 7, 0.9, &mut seeded_rng(seed));
            prop_assert_eq!(inner_product(&u, &v, &q), inner_product(&v, &u, &q).conj());
        }

        #[test]
        fn dagger_is_adjoint(m in mixed_strategy(), u in word_strategy(3), v in word_strategy(3), seed in 0u64..1000) {
            let q = random_exact_qmatrix(3, 7, 0.9, &mut seeded_rng(seed));
            let op = OperatorPolynomial::monomial(m, GaussRat::one());
            prop_assert_eq!(op.dagger().dagger(), op.clone());
            let (bu, bv) = (FockVector::basis(u), FockVector::basis(v));
            let lhs = op.apply(&bu, &q).inner(&bv, &q);
            let rhs = bu.inner(&op.dagger().apply(&bv, &q), &q);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
