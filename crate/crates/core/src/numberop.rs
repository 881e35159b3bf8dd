//! Number operators `N_k` as normally ordered series `Σ X_i† Y_i`.
//!
//! `Y_i` is the iterated q-commutator of annihilators, and `X_i† = Σ_j c_{j,i} Y_j†`
//! over the words `j = i.π` with `π ∈ S_1 × S_{n-1}`. The coefficients come from
//! inverting the positional block of `i` (expanded form) or its orbit-summed
//! reduction under `Stab_i ∩ S_1 × S_{n-1}` (reduced form). An independent route
//! solves for the same coefficients from `N_k |i⟩ = count_k(i) |i⟩` by dense
//! linear algebra on the Fock oracle.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{QuonError, Result};
use crate::fock::{gram_matrix, FockVector, MixedLetter, OperatorPolynomial};
use crate::gram::{orbit_block, positional_block};
use crate::linalg::{pseudo_inverse, Matrix};
use crate::params::QMatrix;
use crate::perm::{johnson_trotter, Letter, Permutation, SizeCap, Word, YoungSubgroup};
use crate::scalar::{Scalar, ToJsonPair, C64};
use crate::twisted::{zagier, ZagierKind};

/// `Y_i` together with its expansion in annihilator monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct YElement<S> {
    pub word: Word,
    pub body: OperatorPolynomial<S>,
}

/// `Y_{i_1} = a_{i_1}`, `Y_{i_1…i_n} = Y_{i_1…i_{n-1}} a_{i_n} - q_{i_n i_1} … q_{i_n i_{n-1}} a_{i_n} Y_{i_1…i_{n-1}}`.
pub fn y_element<S: Scalar>(word: &Word, q: &QMatrix<S>) -> YElement<S> {
    assert!(!word.is_empty(), "Y of the empty word");
    let letters = word.letters();
    let mut body = OperatorPolynomial::annihilate(letters[0]);
    for m in 1..letters.len() {
        let x = letters[m];
        let f = letters[..m]
            .iter()
            .fold(S::one(), |acc, &y| acc * q.get(x, y).clone());
        let a = OperatorPolynomial::annihilate(x);
        body = body.mul(&a).sub(&a.mul(&body).scale(&f));
    }
    #[cfg(debug_assertions)]
    {
        debug_assert_eq!(body, y_commutator(word, q));
        if word.len() <= 4 {
            let via_gamma = y_from_gamma_bar(word, q, SizeCap::default()).expect("γ̄ specialization");
            debug_assert!(S::EXACT && via_gamma == body || !S::EXACT && via_gamma.sub(&body).terms().values().all(|v| v.magnitude() < 1e-9));
        }
    }
    YElement {
        word: word.clone(),
        body,
    }
}

/// The iterated q-commutator `[…[[a_{i_1}, a_{i_2}]_{q_{i_2 i_1}}, a_{i_3}]_{q_{i_3 i_1} q_{i_3 i_2}} …]`.
pub fn y_commutator<S: Scalar>(word: &Word, q: &QMatrix<S>) -> OperatorPolynomial<S> {
    let letters = word.letters();
    let mut acc = OperatorPolynomial::annihilate(letters[0]);
    for m in 1..letters.len() {
        let c = letters[..m]
            .iter()
            .fold(S::one(), |p, &y| p * q.get(letters[m], y).clone());
        acc = OperatorPolynomial::q_commutator(&acc, &OperatorPolynomial::annihilate(letters[m]), &c);
    }
    acc
}

/// `(a_{i_1} … a_{i_n}) . γ̄_n`, reading the first row of the specialized element.
pub fn y_from_gamma_bar<S: Scalar>(word: &Word, q: &QMatrix<S>, cap: SizeCap) -> Result<OperatorPolynomial<S>> {
    let n = word.len();
    let g = zagier(&ZagierKind::GammaBar(n), cap)?.specialize(q, word, cap)?;
    let id = g.position(&Permutation::identity(n));
    let mut out = OperatorPolynomial::zero();
    for p in g.perms() {
        let c = g.matrix()[(id, g.position(p))].clone();
        out.add_term(
            word.act(p).letters().iter().map(|&l| MixedLetter::Annihilate(l)).collect(),
            c,
        );
    }
    Ok(out)
}

impl<S: Scalar> YElement<S> {
    /// `Y_i v`.
    pub fn apply(&self, v: &FockVector<S>, q: &QMatrix<S>) -> FockVector<S> {
        apply_annihilators(&self.body, v, q)
    }

    /// `Y_i† v`.
    pub fn apply_dagger(&self, v: &FockVector<S>) -> FockVector<S> {
        apply_creators(&self.body.dagger(), v)
    }

    /// `Y_i† |0⟩`.
    pub fn dagger_on_vacuum(&self) -> FockVector<S> {
        self.apply_dagger(&FockVector::vacuum())
    }
}

/// Applies a polynomial whose monomials are all annihilators.
fn apply_annihilators<S: Scalar>(op: &OperatorPolynomial<S>, v: &FockVector<S>, q: &QMatrix<S>) -> FockVector<S> {
    let mut out = FockVector::zero();
    for (m, c) in op.terms() {
        let mut w = v.clone();
        for x in m.iter().rev() {
            let MixedLetter::Annihilate(l) = x else {
                return op.apply(v, q);
            };
            w = w.annihilate(*l, q);
            if w.is_zero() {
                break;
            }
        }
        out = out.add(&w.scale(c));
    }
    out
}

/// Applies a polynomial whose monomials are all creators.
fn apply_creators<S: Scalar>(op: &OperatorPolynomial<S>, v: &FockVector<S>) -> FockVector<S> {
    let mut out = FockVector::zero();
    for (m, c) in op.terms() {
        let mut w = v.clone();
        for x in m.iter().rev() {
            let MixedLetter::Create(l) = x else {
                panic!("apply_creators on a monomial containing an annihilator");
            };
            w = w.create(*l);
        }
        out = out.add(&w.scale(c));
    }
    out
}

/// Left twisted derivative on a creation monomial:
/// `∂_l(a_{j_1}† … a_{j_n}†) = Σ_{p : j_p = l} q_{l j_1} … q_{l j_{p-1}} a_{j_1}† … (omit p) … a_{j_n}†`.
pub fn twisted_derivative<S: Scalar>(l: Letter, m: &Word, q: &QMatrix<S>) -> OperatorPolynomial<S> {
    let mut out = OperatorPolynomial::zero();
    for (w, c) in FockVector::basis(m.clone()).annihilate(l, q).terms() {
        out.add_term(w.letters().iter().map(|&x| MixedLetter::Create(x)).collect(), c.clone());
    }
    out
}

/// `d^{(j)}_i = q_{i_j i_{j+1}} … q_{i_j i_n} (1 - |q_{i_j i_1} … q_{i_j i_{j-1}}|²)` for `2 <= j <= n`.
pub fn d_coefficient<S: Scalar>(j: usize, word: &Word, q: &QMatrix<S>) -> Result<S> {
    let n = word.len();
    if j < 2 || j > n {
        return Err(QuonError::IndexOutOfRange(format!(
            "d^({j}) needs 2 <= j <= {n}"
        )));
    }
    let x = word.at(j);
    let suffix = (j + 1..=n).fold(S::one(), |acc, m| acc * q.get(x, word.at(m)).clone());
    let prefix = (1..j).fold(S::one(), |acc, m| acc * q.get(x, word.at(m)).clone());
    Ok(suffix * (S::one() - prefix.norm_sqr()))
}

/// `e_{j,i}` from the recursion `e_{j,i} = Σ_{r >= 2, i_r = l} d^{(r)}_i e_{j', i_r̂}`, where `l`
/// is the last letter of `j`, `j'` drops it and `i_r̂` omits position `r` of `i`.
pub fn e_coefficient<S: Scalar>(j: &Word, i: &Word, q: &QMatrix<S>) -> S {
    let n = i.len();
    if j.len() != n || j.weight() != i.weight() || n == 0 || j.at(1) != i.at(1) {
        return S::zero();
    }
    if n == 1 {
        return S::one();
    }
    let l = j.at(n);
    let head = Word::new(j.letters()[..n - 1].to_vec());
    (2..=n)
        .filter(|&r| i.at(r) == l)
        .fold(S::zero(), |acc, r| {
            let d = d_coefficient(r, i, q).expect("2 <= r <= n");
            acc + d * e_coefficient(&head, &i.omit(r), q)
        })
}

/// Permutations fixing the point 1, in Johnson-Trotter order.
fn first_fixed(n: usize, cap: SizeCap) -> Result<Vec<Permutation>> {
    Ok(johnson_trotter(n, cap)?
        .into_iter()
        .filter(|p| p.apply(1) == 1)
        .collect())
}

/// The transition matrix `E[j][i] = e_{j,i}` over the words `i.π`, `π ∈ S_1 × S_{n-1}`,
/// of a word with distinct letters.
pub fn transition_matrix<S: Scalar>(word: &Word, q: &QMatrix<S>, cap: SizeCap) -> Result<(Vec<Word>, Matrix<S>)> {
    if !word.has_distinct_letters() {
        return Err(QuonError::Invalid("transition matrix needs distinct letters".into()));
    }
    let labels: Vec<Word> = first_fixed(word.len(), cap)?.iter().map(|p| word.act(p)).collect();
    let m = Matrix::from_fn(labels.len(), labels.len(), |a, b| {
        e_coefficient(&labels[a], &labels[b], q)
    });
    Ok((labels, m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionMode {
    /// Coefficients from the full positional block, one term per `π ∈ S_1 × S_{n-1}`.
    Expanded,
    /// Coefficients from the block reduced by `Stab_i ∩ S_1 × S_{n-1}`, one term per coset.
    Reduced,
}

/// One term `c (Y_{i.π})† Y_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerm<S> {
    pub word: Word,
    pub coset: Permutation,
    pub partner: Word,
    pub coefficient: S,
}

/// `X_i† Y_i` for one word `i`.
#[derive(Debug, Clone)]
struct Block<S> {
    y: YElement<S>,
    x_dagger: OperatorPolynomial<S>,
}

/// `N_k = a_k† a_k + Σ_{2 <= |i| <= max_degree, i_1 = k} X_i† Y_i`.
#[derive(Debug, Clone)]
pub struct NumberOperatorExpansion<S> {
    pub k: Letter,
    pub alphabet_size: usize,
    pub max_degree: usize,
    pub mode: ExpansionMode,
    pub terms: Vec<ExpansionTerm<S>>,
    blocks: Vec<Block<S>>,
}

/// All words of length `n` over `m` letters starting with `k`, in lexicographic order.
pub fn words_starting_with(k: Letter, m: usize, n: usize) -> Vec<Word> {
    let mut out = vec![vec![k]];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Word::new).collect()
}

fn terms_for_word<S: Scalar>(i: &Word, q: &QMatrix<S>, mode: ExpansionMode, cap: SizeCap) -> Result<Vec<ExpansionTerm<S>>> {
    let n = i.len();
    let id = Permutation::identity(n);
    match mode {
        ExpansionMode::Expanded => {
            let block = positional_block(i, q, cap)?;
            let inv = block.matrix.inverse_by_pivots()?;
            let row = block.position(&id);
            Ok(first_fixed(n, cap)?
                .into_iter()
                .map(|p| ExpansionTerm {
                    word: i.clone(),
                    partner: i.act(&p),
                    coefficient: inv[(row, block.position(&p))].clone(),
                    coset: p,
                })
                .collect())
        }
        ExpansionMode::Reduced => {
            let h = i
                .stabilizer()
                .intersect(&YoungSubgroup::from_composition(&[1, n - 1]));
            let (reps, m) = orbit_block(i, &h, q, cap)?;
            let inv = m.inverse_by_pivots()?;
            let row = reps.iter().position(|p| *p == id).expect("identity coset");
            Ok(reps
                .iter()
                .enumerate()
                .filter(|(_, p)| p.apply(1) == 1)
                .map(|(c, p)| ExpansionTerm {
                    word: i.clone(),
                    partner: i.act(p),
                    coefficient: inv[(row, c)].clone(),
                    coset: p.clone(),
                })
                .collect())
        }
    }
}

/// Builds the expansion of `N_k` up to words of length `max_degree`.
pub fn expansion<S: Scalar>(
    k: Letter,
    q: &QMatrix<S>,
    max_degree: usize,
    mode: ExpansionMode,
    cap: SizeCap,
) -> Result<NumberOperatorExpansion<S>> {
    if k >= q.size() {
        return Err(QuonError::UnknownLetter(k.to_string()));
    }
    if max_degree == 0 {
        return Err(QuonError::Invalid("max_degree must be at least 1".into()));
    }
    cap.check(max_degree)?;
    let words: Vec<Word> = (2..=max_degree)
        .flat_map(|n| words_starting_with(k, q.size(), n))
        .collect();
    let per_word: Vec<Vec<ExpansionTerm<S>>> = words
        .par_iter()
        .map(|i| terms_for_word(i, q, mode, cap))
        .collect::<Result<_>>()?;
    let mut terms = vec![ExpansionTerm {
        word: Word::new(vec![k]),
        coset: Permutation::identity(1),
        partner: Word::new(vec![k]),
        coefficient: S::one(),
    }];
    terms.extend(per_word.into_iter().flatten());
    Ok(NumberOperatorExpansion::from_terms(k, q, max_degree, mode, terms))
}

/// The minimal-length `π` with `π(1) = 1` and `i.π = j`, if any.
fn rearrangement(i: &Word, j: &Word) -> Option<Permutation> {
    if i.len() != j.len() || i.weight() != j.weight() || i.is_empty() || i.at(1) != j.at(1) {
        return None;
    }
    let mut used = vec![false; i.len()];
    used[0] = true;
    let mut images = vec![1];
    for &l in &j.letters()[1..] {
        let r = (1..i.len()).find(|&r| !used[r] && i.letters()[r] == l)?;
        used[r] = true;
        images.push(r + 1);
    }
    Permutation::from_images(images).ok()
}

impl<S: Scalar> NumberOperatorExpansion<S> {
    fn from_terms(k: Letter, q: &QMatrix<S>, max_degree: usize, mode: ExpansionMode, terms: Vec<ExpansionTerm<S>>) -> Self {
        let mut grouped: BTreeMap<&Word, OperatorPolynomial<S>> = BTreeMap::new();
        let mut ys: HashMap<Word, YElement<S>> = HashMap::new();
        for t in &terms {
            for w in [&t.word, &t.partner] {
                ys.entry(w.clone()).or_insert_with(|| y_element(w, q));
            }
        }
        for t in &terms {
            let yj = ys[&t.partner].body.dagger().scale(&t.coefficient);
            let slot = grouped.entry(&t.word).or_insert_with(OperatorPolynomial::zero);
            *slot = slot.add(&yj);
        }
        let blocks = grouped
            .into_iter()
            .map(|(w, x_dagger)| Block {
                y: ys[w].clone(),
                x_dagger,
            })
            .collect();
        NumberOperatorExpansion {
            k,
            alphabet_size: q.size(),
            max_degree,
            mode,
            terms,
            blocks,
        }
    }

    /// Builds an expansion from aggregated coefficients `c_{j,i}`.
    pub fn from_coefficients(
        k: Letter,
        q: &QMatrix<S>,
        max_degree: usize,
        coefficients: &BTreeMap<(Word, Word), S>,
    ) -> Self {
        let terms = coefficients
            .iter()
            .map(|((j, i), c)| ExpansionTerm {
                word: i.clone(),
                coset: rearrangement(i, j).expect("j is a first-letter-fixed rearrangement of i"),
                partner: j.clone(),
                coefficient: c.clone(),
            })
            .collect();
        Self::from_terms(k, q, max_degree, ExpansionMode::Reduced, terms)
    }

    /// Coefficients summed per pair `(j, i)` of distinct words.
    pub fn coefficients(&self) -> BTreeMap<(Word, Word), S> {
        let mut out: BTreeMap<(Word, Word), S> = BTreeMap::new();
        for t in &self.terms {
            let slot = out
                .entry((t.partner.clone(), t.word.clone()))
                .or_insert_with(S::zero);
            *slot = slot.clone() + t.coefficient.clone();
        }
        out
    }

    /// `X_i†` for a word `i` of the expansion.
    pub fn x_dagger(&self, i: &Word) -> Option<&OperatorPolynomial<S>> {
        self.blocks.iter().find(|b| b.y.word == *i).map(|b| &b.x_dagger)
    }

    /// Applies the truncated series; words longer than `max_degree` are rejected
    /// because the missing terms would act on them.
    pub fn apply(&self, v: &FockVector<S>, q: &QMatrix<S>) -> Result<FockVector<S>> {
        if let Some(len) = v.terms().keys().map(Word::len).max() {
            if len > self.max_degree {
                return Err(QuonError::Truncation {
                    max_degree: self.max_degree,
                    len,
                });
            }
        }
        Ok(self.apply_unchecked(v, q))
    }

    fn apply_unchecked(&self, v: &FockVector<S>, q: &QMatrix<S>) -> FockVector<S> {
        let max_len = v.terms().keys().map(Word::len).max().unwrap_or(0);
        let mut out = FockVector::zero();
        for b in self.blocks.iter().filter(|b| b.y.word.len() <= max_len) {
            let inner = b.y.apply(v, q);
            if !inner.is_zero() {
                out = out.add(&apply_creators(&b.x_dagger, &inner));
            }
        }
        out
    }

    pub fn to_json(&self, q: &QMatrix<S>) -> Value
    where
        S: ToJsonPair,
    {
        let labels = |w: &Word| w.letters().iter().map(|&l| q.label(l).to_string()).collect::<Vec<_>>();
        let mut ys: HashMap<&Word, Value> = HashMap::new();
        for b in &self.blocks {
            ys.insert(&b.y.word, b.y.body.to_json(q));
        }
        Value::Array(
            self.terms
                .iter()
                .map(|t| {
                    json!({
                        "word": labels(&t.word),
                        "coset": t.coset.images(),
                        "partner": labels(&t.partner),
                        "coefficient": t.coefficient.to_json_pair(),
                        "Y": ys.get(&t.word).cloned().unwrap_or(Value::Null),
                    })
                })
                .collect(),
        )
    }
}

/// Applies a truncated number-operator series to a state.
pub fn act_series<S: Scalar>(expansion: &NumberOperatorExpansion<S>, v: &FockVector<S>, q: &QMatrix<S>) -> Result<FockVector<S>> {
    expansion.apply(v, q)
}

/// `Σ_k E_k N_k v`.
pub fn hamiltonian_apply<S: Scalar>(
    energies: &BTreeMap<Letter, f64>,
    expansions: &[NumberOperatorExpansion<S>],
    v: &FockVector<S>,
    q: &QMatrix<S>,
) -> Result<FockVector<S>> {
    let mut out = FockVector::zero();
    for (&k, &e) in energies {
        let n = expansions
            .iter()
            .find(|x| x.k == k)
            .ok_or_else(|| QuonError::Invalid(format!("no expansion for letter {k}")))?;
        out = out.add(&n.apply(v, q)?.scale(&S::from_c64(C64::new(e, 0.0))));
    }
    Ok(out)
}

/// Result of the independent linear solve.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub expansion: NumberOperatorExpansion<C64>,
    /// Largest residual of the per-weight systems.
    pub residual: f64,
}

/// Solves for `c_{j,i}` weight by weight, shortest first: on the span of a weight's
/// words the unknown part `Σ c_{j,i} Y_j† Y_i` has matrix `Yv C Yv† G`, where the
/// columns of `Yv` are `Y_i† |0⟩` and `G` is the Fock Gram matrix, and it must equal
/// `count_k - (lower-degree terms)`.
pub fn solve_coefficients_oracle(k: Letter, q: &QMatrix<C64>, max_degree: usize, cap: SizeCap) -> Result<OracleSolution> {
    if k >= q.size() {
        return Err(QuonError::UnknownLetter(k.to_string()));
    }
    cap.check(max_degree)?;
    let mut coefficients: BTreeMap<(Word, Word), C64> = BTreeMap::new();
    coefficients.insert((Word::new(vec![k]), Word::new(vec![k])), C64::new(1.0, 0.0));
    let mut residual: f64 = 0.0;
    for n in 2..=max_degree {
        let partial = NumberOperatorExpansion::from_coefficients(k, q, n - 1, &coefficients);
        for weight in crate::gram::weights_of_length(q.size(), n) {
            if !weight.letters().contains(&k) {
                continue;
            }
            let words = distinct_rearrangements(&weight.as_word());
            let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(t, w)| (w, t)).collect();
            let kw: Vec<Word> = words.iter().filter(|w| w.at(1) == k).cloned().collect();
            let size = words.len();

            let mut r = Matrix::<C64>::zeros(size, size);
            for (t, w) in words.iter().enumerate() {
                r[(t, t)] = C64::new(w.count(k) as f64, 0.0);
                for (u, d) in partial.apply_unchecked(&FockVector::basis(w.clone()), q).terms() {
                    r[(index[u], t)] -= d;
                }
            }
            let mut yv = Matrix::<C64>::zeros(size, kw.len());
            for (t, i) in kw.iter().enumerate() {
                for (u, d) in y_element(i, q).dagger_on_vacuum().terms() {
                    yv[(index[u], t)] += d;
                }
            }
            let g = gram_matrix(&words, q);
            let g_inv = g.inverse_by_pivots()?;
            let p = pseudo_inverse(&yv)?;
            let p_adj = pseudo_inverse(&yv.adjoint())?;
            let c = p.mul(&r).mul(&g_inv).mul(&p_adj);
            let res = yv.mul(&c).mul(&yv.adjoint()).mul(&g).max_abs_diff(&r);
            if res > 1e-8 {
                return Err(QuonError::Inconsistent(res));
            }
            residual = residual.max(res);
            for (a, j) in kw.iter().enumerate() {
                for (b, i) in kw.iter().enumerate() {
                    coefficients.insert((j.clone(), i.clone()), c[(a, b)]);
                }
            }
        }
    }
    Ok(OracleSolution {
        expansion: NumberOperatorExpansion::from_coefficients(k, q, max_degree, &coefficients),
        residual,
    })
}

/// Distinct rearrangements of a word, sorted.
pub fn distinct_rearrangements(w: &Word) -> Vec<Word> {
    let mut letters = w.letters().to_vec();
    letters.sort_unstable();
    let mut out = vec![Word::new(letters.clone())];
    // next lexicographic permutation until exhausted
    loop {
        let Some(i) = (1..letters.len()).rev().find(|&i| letters[i - 1] < letters[i]) else {
            return out;
        };
        let j = (i..letters.len()).rev().find(|&j| letters[j] > letters[i - 1]).expect("pivot");
        letters.swap(i - 1, j);
        letters[i..].reverse();
        out.push(Word::new(letters.clone()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{random_exact_qmatrix, random_qmatrix, seeded_rng};
    use crate::scalar::GaussRat;
    use num_traits::{One, Zero};

    fn w(v: &[Letter]) -> Word {
        Word::new(v.to_vec())
    }

    fn cap() -> SizeCap {
        SizeCap::default()
    }

    #[test]
    fn short_y_elements() {
        let q = random_exact_qmatrix(3, 7, 0.9, &mut seeded_rng(1));
        assert_eq!(y_element(&w(&[2]), &q).body, OperatorPolynomial::annihilate(2));
        let y = y_element(&w(&[0, 1]), &q).body;
        let expected = OperatorPolynomial::annihilator_word(&w(&[0, 1]))
            .sub(&OperatorPolynomial::annihilator_word(&w(&[1, 0])).scale(q.get(1, 0)));
        assert_eq!(y, expected);
    }

    #[test]
    fn y_at_zero_parameters_is_the_monomial() {
        let q = QMatrix::<GaussRat>::zeros(3);
        let word = w(&[0, 2, 1, 0]);
        assert_eq!(y_element(&word, &q).body, OperatorPolynomial::annihilator_word(&word));
    }

    #[test]
    fn twisted_derivative_examples() {
        let q = random_exact_qmatrix(2, 7, 0.9, &mut seeded_rng(2));
        assert_eq!(twisted_derivative(0, &w(&[0]), &q), OperatorPolynomial::one());
        assert!(twisted_derivative(0, &w(&[1]), &q).is_zero());
        assert_eq!(
            twisted_derivative(0, &w(&[1, 0]), &q),
            OperatorPolynomial::creator_word(&w(&[1])).scale(q.get(0, 1))
        );
    }

    #[test]
    fn d_coefficient_examples() {
        let q = random_exact_qmatrix(3, 7, 0.9, &mut seeded_rng(3));
        assert_eq!(
            d_coefficient(2, &w(&[0, 1]), &q).unwrap(),
            GaussRat::one() - q.get(1, 0).norm_sqr()
        );
        let zero = QMatrix::<GaussRat>::zeros(3);
        assert!(d_coefficient(2, &w(&[0, 1, 2]), &zero).unwrap().is_zero());
        assert_eq!(d_coefficient(3, &w(&[0, 1, 2]), &zero).unwrap(), GaussRat::one());
        assert!(d_coefficient(1, &w(&[0, 1]), &q).is_err());
        assert!(d_coefficient(3, &w(&[0, 1]), &q).is_err());
    }

    #[test]
    fn degree_one_and_two() {
        let q = random_exact_qmatrix(2, 7, 0.9, &mut seeded_rng(4));
        let n1 = expansion(0, &q, 1, ExpansionMode::Expanded, cap()).unwrap();
        assert_eq!(n1.terms.len(), 1);
        assert_eq!(n1.terms[0].coefficient, GaussRat::one());
        let n2 = expansion(0, &q, 2, ExpansionMode::Expanded, cap()).unwrap();
        let c = n2.coefficients()[&(w(&[0, 1]), w(&[0, 1]))].clone();
        assert_eq!(c, GaussRat::one() / (GaussRat::one() - q.get(0, 1).norm_sqr()));
    }

    #[test]
    fn diagonal_on_short_words_exactly() {
        let q = random_exact_qmatrix(2, 5, 0.9, &mut seeded_rng(5));
        for mode in [ExpansionMode::Expanded, ExpansionMode::Reduced] {
            let nk = expansion(0, &q, 3, mode, cap()).unwrap();
            for n in 0..=3 {
                for word in (0..2usize.pow(n as u32)).map(|b| {
                    Word::new((0..n).map(|r| (b >> r) & 1).collect())
                }) {
                    let v = FockVector::basis(word.clone());
                    let got = nk.apply(&v, &q).unwrap();
                    let expected = v.scale(&GaussRat::from_i64(word.count(0) as i64));
                    assert_eq!(got, expected, "{mode:?} {:?}", word.letters());
                }
            }
        }
    }

    #[test]
    fn truncation_is_reported() {
        let q = QMatrix::<C64>::zeros(1);
        let nk = expansion(0, &q, 2, ExpansionMode::Expanded, cap()).unwrap();
        let r = nk.apply(&FockVector::basis(w(&[0, 0, 0])), &q);
        assert!(matches!(r, Err(QuonError::Truncation { max_degree: 2, len: 3 })));
    }

    #[test]
    fn oracle_matches_expansion_at_degree_three() {
        let q = random_qmatrix(3, 0.9, &mut seeded_rng(6));
        let nk = expansion(1, &q, 3, ExpansionMode::Expanded, cap()).unwrap();
        let oracle = solve_coefficients_oracle(1, &q, 3, cap()).unwrap();
        let a = nk.coefficients();
        let b = oracle.expansion.coefficients();
        assert_eq!(a.len(), b.len());
        for (key, v) in &a {
            assert!((v - b[key]).norm() < 1e-9, "{key:?}");
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let q = random_qmatrix(2, 0.9, &mut seeded_rng(7));
        let ns: Vec<_> = (0..2)
            .map(|k| expansion(k, &q, 2, ExpansionMode::Reduced, cap()).unwrap())
            .collect();
        let v = FockVector::basis(w(&[0, 0]));
        let zero_e = BTreeMap::from([(0, 0.0), (1, 0.0)]);
        assert!(hamiltonian_apply(&zero_e, &ns, &v, &q).unwrap().max_norm() < 1e-12);
        let e = BTreeMap::from([(0, 2.0)]);
        let got = hamiltonian_apply(&e, &ns, &v, &q).unwrap();
        assert!(got.sub(&v.scale(&C64::new(4.0, 0.0))).max_norm() < 1e-9);
        assert!(hamiltonian_apply(&e, &ns, &FockVector::vacuum(), &q).unwrap().is_zero());
    }

    #[test]
    fn rearrangements_are_distinct() {
        assert_eq!(distinct_rearrangements(&w(&[0, 0, 2])).len(), 3);
        assert_eq!(distinct_rearrangements(&w(&[2, 1, 0])).len(), 6);
        assert_eq!(distinct_rearrangements(&w(&[])).len(), 1);
        assert_eq!(words_starting_with(1, 3, 3).len(), 9);
    }
}
