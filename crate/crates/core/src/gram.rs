//! Gram blocks `A^ν` of the Fock inner product, one per weight.
//!
//! For a word `w` of length `n` the positional block has rows and columns indexed
//! by `S_n` in Johnson-Trotter order, with
//!
//! ```text
//! Â_w(π, σ) = ∏_{(r,s) ∈ I(σ⁻¹π)} q[w_π(r), w_π(s)]
//! ```
//!
//! and for a generic weight it is the Gram matrix itself: entry `(π, σ)` is
//! `⟨ν.π | ν.σ⟩`. A weight with repeated letters has stabilizer `H`; its block is
//! indexed by minimal representatives of `H \ S_n` and obtained by summing the
//! positional block over orbits, `A(π̃, σ̃) = Σ_{h ∈ H} Â(π, hσ)`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{QuonError, Result};
use crate::linalg::{min_eigenvalue, Matrix};
use crate::params::QMatrix;
use crate::perm::{coset_reps, johnson_trotter, Letter, Permutation, SizeCap, Weight, Word, YoungSubgroup};
use crate::scalar::{Scalar, ToJsonPair};

#[derive(Debug, Clone, PartialEq)]
pub struct GramBlock<S> {
    pub weight: Weight,
    /// Rearrangements of the weight labelling rows and columns.
    pub labels: Vec<Word>,
    /// The coset representative producing each label from the sorted weight.
    pub reps: Vec<Permutation>,
    pub matrix: Matrix<S>,
}

/// An inverse together with `max |A A⁻¹ - I|`.
#[derive(Debug, Clone)]
pub struct Inverse<S> {
    pub labels: Vec<Word>,
    pub matrix: Matrix<S>,
    pub residual: f64,
}

/// The `n! x n!` block of a word, indexed by permutations.
#[derive(Debug, Clone)]
pub struct PositionalBlock<S> {
    pub word: Word,
    pub perms: Vec<Permutation>,
    pub index: HashMap<Permutation, usize>,
    pub matrix: Matrix<S>,
}

impl<S> PositionalBlock<S> {
    pub fn position(&self, p: &Permutation) -> usize {
        self.index[p]
    }
}

/// `∏_{(r,s) ∈ I(σ⁻¹π)} q[w_π(r), w_π(s)]`.
pub fn positional_entry<S: Scalar>(word: &Word, pi: &Permutation, sigma: &Permutation, q: &QMatrix<S>) -> S {
    let tau = &sigma.inverse() * pi;
    let mut v = S::one();
    for (r, s) in tau.inversions() {
        v = v * q.get(word.at(pi.apply(r)), word.at(pi.apply(s))).clone();
    }
    v
}

pub fn positional_block<S: Scalar>(word: &Word, q: &QMatrix<S>, cap: SizeCap) -> Result<PositionalBlock<S>> {
    let perms = johnson_trotter(word.len(), cap)?;
    let index = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let matrix = Matrix::from_fn(perms.len(), perms.len(), |r, c| {
        positional_entry(word, &perms[r], &perms[c], q)
    });
    Ok(PositionalBlock {
        word: word.clone(),
        perms,
        index,
        matrix,
    })
}

/// Orbit-summed block of a word under a subgroup `H` of its stabilizer, indexed by
/// the minimal representatives of `H \ S_n`.
pub fn orbit_block<S: Scalar>(
    word: &Word,
    subgroup: &YoungSubgroup,
    q: &QMatrix<S>,
    cap: SizeCap,
) -> Result<(Vec<Permutation>, Matrix<S>)> {
    let n = word.len();
    cap.check(n)?;
    if n == 0 {
        return Ok((vec![Permutation::identity(0)], Matrix::identity(1)));
    }
    let reps: Vec<Permutation> = coset_reps(subgroup, cap)?.into_iter().map(|c| c.rep).collect();
    let elements = subgroup.elements();
    let matrix = Matrix::from_fn(reps.len(), reps.len(), |r, c| {
        elements.iter().fold(S::zero(), |acc, h| {
            acc + positional_entry(word, &reps[r], &(h * &reps[c]), q)
        })
    });
    Ok((reps, matrix))
}

fn labelled<S: Scalar>(weight: &Weight, reps: Vec<Permutation>, matrix: Matrix<S>) -> GramBlock<S> {
    let base = weight.as_word();
    GramBlock {
        weight: weight.clone(),
        labels: reps.iter().map(|p| base.act(p)).collect(),
        reps,
        matrix,
    }
}

/// Block of a weight with distinct letters.
pub fn gram_generic<S: Scalar>(weight: &Weight, q: &QMatrix<S>, cap: SizeCap) -> Result<GramBlock<S>> {
    if !weight.is_generic() {
        return Err(QuonError::Invalid(format!(
            "weight {:?} has repeated letters",
            weight.letters()
        )));
    }
    check_letters(weight, q)?;
    if weight.is_empty() {
        return Ok(vacuum_block());
    }
    let block = positional_block(&weight.as_word(), q, cap)?;
    Ok(labelled(weight, block.perms, block.matrix))
}

/// Block of any weight, computed directly from the stabilizer-orbit sums.
pub fn gram_weight<S: Scalar>(weight: &Weight, q: &QMatrix<S>, cap: SizeCap) -> Result<GramBlock<S>> {
    check_letters(weight, q)?;
    if weight.is_empty() {
        return Ok(vacuum_block());
    }
    let (reps, matrix) = orbit_block(&weight.as_word(), &weight.stabilizer(), q, cap)?;
    Ok(labelled(weight, reps, matrix))
}

/// Block of any weight, computed by building the generic block on `n` fresh
/// letters, substituting the weight's letters and summing rows over stabilizer
/// orbits. Always pays the full `n!` cost.
pub fn reduce_from_generic<S: Scalar>(weight: &Weight, q: &QMatrix<S>, cap: SizeCap) -> Result<GramBlock<S>> {
    check_letters(weight, q)?;
    let n = weight.len();
    cap.check(n)?;
    if n == 0 {
        return Ok(vacuum_block());
    }
    let letters = weight.letters();
    let fresh = QMatrix::from_table(
        (1..=n).map(|i| i.to_string()).collect(),
        (0..n)
            .map(|a| (0..n).map(|b| q.get(letters[a], letters[b]).clone()).collect())
            .collect(),
    );
    let generic = gram_generic(&Weight::new((0..n).collect()), &fresh, cap)?;
    let index: HashMap<&Permutation, usize> =
        generic.reps.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let stab = weight.stabilizer();
    let elements = stab.elements();
    let reps: Vec<Permutation> = coset_reps(&stab, cap)?.into_iter().map(|c| c.rep).collect();
    let matrix = Matrix::from_fn(reps.len(), reps.len(), |r, c| {
        let row = index[&reps[r]];
        elements.iter().fold(S::zero(), |acc, h| {
            acc + generic.matrix[(row, index[&(h * &reps[c])])].clone()
        })
    });
    Ok(labelled(weight, reps, matrix))
}

fn vacuum_block<S: Scalar>() -> GramBlock<S> {
    GramBlock {
        weight: Weight::new(vec![]),
        labels: vec![Word::empty()],
        reps: vec![Permutation::identity(0)],
        matrix: Matrix::identity(1),
    }
}

fn check_letters<S: Scalar>(weight: &Weight, q: &QMatrix<S>) -> Result<()> {
    match weight.letters().iter().find(|&&l| l >= q.size()) {
        Some(l) => Err(QuonError::UnknownLetter(l.to_string())),
        None => Ok(()),
    }
}

/// All weights of length `n` over an alphabet of `m` letters, in lexicographic order.
pub fn weights_of_length(m: usize, n: usize) -> Vec<Weight> {
    fn rec(m: usize, n: usize, start: Letter, prefix: &mut Vec<Letter>, out: &mut Vec<Weight>) {
        if prefix.len() == n {
            out.push(Weight::new(prefix.clone()));
            return;
        }
        for l in start..m {
            prefix.push(l);
            rec(m, n, l, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Every block of every weight of length `0..=n_max`, shortest first and
/// lexicographic within a length. Blocks are built in parallel.
pub fn decompose<S: Scalar>(n_max: usize, q: &QMatrix<S>, cap: SizeCap) -> Result<Vec<GramBlock<S>>> {
    cap.check(n_max)?;
    let weights: Vec<Weight> = (0..=n_max)
        .flat_map(|n| weights_of_length(q.size(), n))
        .collect();
    weights.par_iter().map(|w| gram_weight(w, q, cap)).collect()
}

impl<S: Scalar> GramBlock<S> {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn determinant(&self) -> S {
        self.matrix.determinant()
    }

    pub fn invert(&self) -> Result<Inverse<S>> {
        let inv = self.matrix.inverse()?;
        let residual = self.matrix.inverse_residual(&inv);
        Ok(Inverse {
            labels: self.labels.clone(),
            matrix: inv,
            residual,
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.matrix.to_c64())
    }

    /// `max |W A W - Aᵀ|` where `W` reverses the rows, for generic blocks.
    /// Reversal of positions is `π ↦ π w_n`, which is not a reordering of rows in
    /// Johnson-Trotter order, so the pairing goes through the labels.
    pub fn reversal_residual(&self) -> f64 {
        let index: HashMap<&Word, usize> = self.labels.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let rev: Vec<usize> = self.labels.iter().map(|w| index[&w.reversed()]).collect();
        let n = self.size();
        let conj = Matrix::from_fn(n, n, |r, c| self.matrix[(rev[r], rev[c])].clone());
        conj.max_abs_diff(&self.matrix.transpose())
    }

    pub fn to_json(&self, q: &QMatrix<S>) -> Value
    where
        S: ToJsonPair,
    {
        json!({
            "weight": self.weight.letters().iter().map(|&l| q.label(l)).collect::<Vec<_>>(),
            "labels": self.labels.iter()
                .map(|w| w.letters().iter().map(|&l| q.label(l)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "matrix": self.matrix.to_json(),
        })
    }
}

impl<S: Scalar> Inverse<S> {
    pub fn to_json(&self, q: &QMatrix<S>) -> Value
    where
        S: ToJsonPair,
    {
        json!({
            "labels": self.labels.iter()
                .map(|w| w.letters().iter().map(|&l| q.label(l)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "matrix": self.matrix.to_json(),
            "residual": self.residual,
        })
    }
}
