//! Permutations of `1..=n` in one-line notation, words over an alphabet and the
//! Young subgroups that stabilize them.
//!
//! A single convention is used everywhere: permutations act on the right of words
//! by permuting positions, `(w.p)[r] = w[p(r)]`, and the product `p * s` is the
//! composite `r -> p(s(r))`, so that `w.(p * s) = (w.p).s`.

use std::fmt;
use std::ops::Mul;

use crate::error::{QuonError, Result};

/// Default bound on the word length `n`; blocks have up to `n!` rows.
pub const DEFAULT_SIZE_CAP: usize = 8;

/// Upper bound on `n` for anything that enumerates `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCap(pub usize);

impl Default for SizeCap {
    fn default() -> Self {
        SizeCap(DEFAULT_SIZE_CAP)
    }
}

impl SizeCap {
    /// Reads `QUONLAB_SIZE_CAP`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var("QUONLAB_SIZE_CAP")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(SizeCap)
            .unwrap_or_default()
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.0 {
            Err(QuonError::SizeCap { n, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Builds a permutation from one-line notation with 1-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(QuonError::Invalid(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `p(r)` for 1-based `r`.
    pub fn apply(&self, r: usize) -> usize {
        self.images[r - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (r, &v) in self.images.iter().enumerate() {
            inv[v - 1] = r + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(r, &v)| v == r + 1)
    }

    /// Position pairs `(r, s)` with `r < s` and `p(r) > p(s)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.images.len();
        let mut out = Vec::new();
        for r in 0..n {
            for s in r + 1..n {
                if self.images[r] > self.images[s] {
                    out.push((r + 1, s + 1));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        let n = self.images.len();
        (0..n)
            .map(|r| (r + 1..n).filter(|&s| self.images[r] > self.images[s]).count())
            .sum()
    }

    /// Embeds into `S_m` (m >= n) fixing the points `n+1..=m`.
    pub fn embed(&self, m: usize) -> Self {
        let mut images = self.images.clone();
        images.extend(self.images.len() + 1..=m);
        Permutation { images }
    }

    pub fn one_line(&self) -> String {
        let sep = if self.images.len() > 9 { "," } else { "" };
        self.images
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// `(self * rhs)(r) = self(rhs(r))`.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch");
        Permutation {
            images: rhs.images.iter().map(|&v| self.images[v - 1]).collect(),
        }
    }
}

impl Mul for Permutation {
    type Output = Permutation;
    fn mul(self, rhs: Permutation) -> Permutation {
        &self * &rhs
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.one_line())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

/// All of `S_n` in Johnson-Trotter order: consecutive entries differ by one
/// adjacent transposition. For `n = 3` this is `123, 132, 312, 321, 231, 213`.
pub fn johnson_trotter(n: usize, cap: SizeCap) -> Result<Vec<Permutation>> {
    cap.check(n)?;
    if n == 0 {
        return Ok(vec![Permutation::identity(0)]);
    }
    let mut list: Vec<Vec<usize>> = vec![vec![1]];
    for m in 2..=n {
        let mut next = Vec::with_capacity(list.len() * m);
        for (idx, p) in list.iter().enumerate() {
            // the new largest element sweeps right-to-left, then left-to-right
            let positions: Box<dyn Iterator<Item = usize>> = if idx % 2 == 0 {
                Box::new((0..m).rev())
            } else {
                Box::new(0..m)
            };
            for pos in positions {
                let mut q = p.clone();
                q.insert(pos, m);
                next.push(q);
            }
        }
        list = next;
    }
    Ok(list
        .into_iter()
        .map(|images| Permutation { images })
        .collect())
}

/// Distinguished permutations used by the twisted algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Special {
    /// `t_{k,l}`: `k -> l` and `m -> m-1` for `k < m <= l`; `t_{k,k}` is the identity.
    Cycle(usize, usize),
    /// `t_k = t_{k,k+1}`.
    Adjacent(usize),
    /// `w_n = n ... 2 1`.
    Longest,
}

pub fn special(kind: Special, n: usize) -> Result<Permutation> {
    match kind {
        Special::Cycle(k, l) => {
            if k == 0 || k > l || l > n {
                return Err(QuonError::IndexOutOfRange(format!(
                    "cycle({k},{l}) in S_{n}"
                )));
            }
            let mut images: Vec<usize> = (1..=n).collect();
            if k < l {
                images[k - 1] = l;
                for m in k + 1..=l {
                    images[m - 1] = m - 1;
                }
            }
            Ok(Permutation { images })
        }
        Special::Adjacent(k) => {
            if k == 0 || k + 1 > n {
                return Err(QuonError::IndexOutOfRange(format!("t_{k} in S_{n}")));
            }
            special(Special::Cycle(k, k + 1), n)
        }
        Special::Longest => Ok(Permutation {
            images: (1..=n).rev().collect(),
        }),
    }
}

pub fn cycle(k: usize, l: usize, n: usize) -> Permutation {
    special(Special::Cycle(k, l), n).expect("cycle indices in range")
}

pub fn longest(n: usize) -> Permutation {
    Permutation {
        images: (1..=n).rev().collect(),
    }
}

/// Alphabet letters are indices into the ordered alphabet of a `QMatrix`.
pub type Letter = usize;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letter at 1-based position `r`.
    pub fn at(&self, r: usize) -> Letter {
        self.0[r - 1]
    }

    /// Right action: `(w.p)[r] = w[p(r)]`.
    pub fn act(&self, p: &Permutation) -> Word {
        assert_eq!(p.degree(), self.len(), "word/permutation length mismatch");
        Word(p.images().iter().map(|&v| self.0[v - 1]).collect())
    }

    pub fn weight(&self) -> Weight {
        let mut letters = self.0.clone();
        letters.sort_unstable();
        Weight(letters)
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn has_distinct_letters(&self) -> bool {
        let mut s = self.0.clone();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    }

    /// Removes the 1-based position `r`.
    pub fn omit(&self, r: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(r - 1);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Positions grouped by letter: the stabilizer `{h : w.h = w}` as a Young subgroup.
    pub fn stabilizer(&self) -> YoungSubgroup {
        let mut blocks: Vec<(Letter, Vec<usize>)> = Vec::new();
        for (r, &l) in self.0.iter().enumerate() {
            match blocks.iter_mut().find(|(x, _)| *x == l) {
                Some((_, b)) => b.push(r + 1),
                None => blocks.push((l, vec![r + 1])),
            }
        }
        YoungSubgroup::new(self.len(), blocks.into_iter().map(|(_, b)| b).collect())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// A weakly increasing word; labels one block of the Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Vec<Letter>);

impl Weight {
    pub fn new(mut letters: Vec<Letter>) -> Self {
        letters.sort_unstable();
        Weight(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn is_generic(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Run lengths `n_1, ..., n_p` of equal letters.
    pub fn runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            runs.push(j - i);
            i = j;
        }
        runs
    }

    /// `H_nu`: the product of symmetric groups on the runs.
    pub fn stabilizer(&self) -> YoungSubgroup {
        YoungSubgroup::from_composition(&self.runs())
    }

    /// Number of distinct rearrangements, `n! / (n_1! ... n_p!)`.
    pub fn rearrangement_count(&self) -> usize {
        let fact = |k: usize| (1..=k).product::<usize>();
        fact(self.len()) / self.runs().into_iter().map(fact).product::<usize>()
    }
}

/// Subgroup of `S_n` permuting each block of a set partition of `{1..n}` and
/// fixing the partition blockwise. Acts on permutations from the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoungSubgroup {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl YoungSubgroup {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        YoungSubgroup { n, blocks }
    }

    pub fn trivial(n: usize) -> Self {
        YoungSubgroup::new(n, (1..=n).map(|r| vec![r]).collect())
    }

    /// `S_{n_1} x ... x S_{n_k}` on consecutive blocks.
    pub fn from_composition(parts: &[usize]) -> Self {
        let mut blocks = Vec::new();
        let mut start = 1;
        for &m in parts {
            blocks.push((start..start + m).collect());
            start += m;
        }
        YoungSubgroup::new(start - 1, blocks)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn order(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| (1..=b.len()).product::<usize>())
            .product()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&v| b.binary_search(&p.apply(v)).is_ok()))
    }

    /// Refines by splitting every block against `other`'s blocks.
    pub fn intersect(&self, other: &YoungSubgroup) -> YoungSubgroup {
        let mut blocks = Vec::new();
        for a in &self.blocks {
            for b in &other.blocks {
                let common: Vec<usize> = a.iter().copied().filter(|v| b.contains(v)).collect();
                if !common.is_empty() {
                    blocks.push(common);
                }
            }
        }
        YoungSubgroup::new(self.n, blocks)
    }

    /// Every element, enumerated as products of block permutations.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.n)];
        for b in &self.blocks {
            let local = all_permutations(b.len());
            let mut next = Vec::with_capacity(out.len() * local.len());
            for h in &out {
                for lp in &local {
                    let mut images = h.images.clone();
                    for (i, &v) in b.iter().enumerate() {
                        images[v - 1] = b[lp[i] - 1];
                    }
                    next.push(Permutation { images });
                }
            }
            out = next;
        }
        out
    }

    /// The minimal-length element of the coset `H p`: within every block, the
    /// values are reassigned in increasing order of the positions holding them.
    pub fn min_coset_rep(&self, p: &Permutation) -> Permutation {
        let mut images = p.images.clone();
        for b in &self.blocks {
            let mut positions: Vec<usize> = (0..self.n)
                .filter(|&r| b.binary_search(&p.images[r]).is_ok())
                .collect();
            positions.sort_unstable();
            for (pos, &v) in positions.iter().zip(b.iter()) {
                images[*pos] = v;
            }
        }
        Permutation { images }
    }
}

fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let m = used.len();
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for v in 0..m {
            if !used[v] {
                used[v] = true;
                prefix.push(v + 1);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// A right coset `H p` together with its minimal-length representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetRep {
    pub rep: Permutation,
    /// Index of the coset in first-occurrence Johnson-Trotter order.
    pub coset: usize,
}

/// Minimal-length representatives of `H \ S_n`, ordered by the first member of
/// each coset to appear in Johnson-Trotter order.
pub fn coset_reps(subgroup: &YoungSubgroup, cap: SizeCap) -> Result<Vec<CosetRep>> {
    let all = johnson_trotter(subgroup.degree(), cap)?;
    Ok(first_occurrence_reps(subgroup, &all))
}

pub(crate) fn first_occurrence_reps(subgroup: &YoungSubgroup, order: &[Permutation]) -> Vec<CosetRep> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for p in order {
        let rep = subgroup.min_coset_rep(p);
        if seen.insert(rep.clone()) {
            let coset = out.len();
            out.push(CosetRep { rep, coset });
        }
    }
    out
}
