//! Randomized and exhaustive invariant suites.
//!
//! Each suite returns a [`SuiteReport`] with the worst residual seen and a list of
//! failed checks. Errors raised by the library inside a suite (a singular block at
//! a strict point, say) count as failures rather than aborting the run.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{QuonError, Result};
use crate::fock::{gram_matrix, inner_product, FockVector, MixedLetter, OperatorPolynomial};
use crate::gram::{decompose, gram_weight, reduce_from_generic, weights_of_length};
use crate::linalg::{min_eigenvalue, Matrix};
use crate::numberop::{
    d_coefficient, distinct_rearrangements, expansion, hamiltonian_apply, solve_coefficients_oracle,
    transition_matrix, y_element, ExpansionMode, NumberOperatorExpansion,
};
use crate::params::{random_exact_qmatrix, random_qmatrix, seeded_rng, QMatrix};
use crate::perm::{
    coset_reps, cycle, johnson_trotter, longest, Letter, Permutation, SizeCap, Weight, Word, YoungSubgroup,
};
use crate::scalar::{GaussRat, Scalar, C64};
use crate::twisted::{gamma_alternating, gamma_bar_inverse_closed, zagier, SpecializedElement, TwistedElement, ZagierKind};

/// Radius of the disc the random parameters are drawn from.
pub const RADIUS: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub failures: Vec<String>,
    /// Extra figures worth reporting, such as the smallest eigenvalue seen.
    pub notes: BTreeMap<String, f64>,
}

impl SuiteReport {
    pub fn new(name: &str, tolerance: f64) -> Self {
        SuiteReport {
            name: name.to_string(),
            checks: 0,
            max_residual: 0.0,
            tolerance,
            failures: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    /// Records a residual; anything above the tolerance (or NaN) is a failure.
    pub fn residual(&mut self, r: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if r.is_nan() || r > self.tolerance {
            self.failures.push(format!("{}: residual {r:e}", what()));
        }
        if r.is_nan() {
            self.max_residual = f64::NAN;
        } else if !self.max_residual.is_nan() {
            self.max_residual = self.max_residual.max(r);
        }
    }

    /// Records an exact check.
    pub fn holds(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records a library error as a failed check.
    pub fn error(&mut self, what: &str, e: &QuonError) {
        self.checks += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    pub fn note_min(&mut self, key: &str, v: f64) {
        let slot = self.notes.entry(key.to_string()).or_insert(f64::INFINITY);
        *slot = slot.min(v);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && !self.max_residual.is_nan()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "passed": self.passed(),
            "checks": self.checks,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "failures": self.failures,
            "notes": self.notes,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub cap: SizeCap,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            samples: 3,
            cap: SizeCap::default(),
        }
    }
}

pub const SUITES: &[&str] = &[
    "permutations",
    "params",
    "gram-structure",
    "positivity",
    "gram-oracle",
    "gram-inverse",
    "twisted",
    "fock",
    "y-elements",
    "derivative",
    "transition",
    "diagonality",
    "commutator",
    "modes",
    "independence",
    "oracle",
    "single-oscillator",
    "hamiltonian",
];

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let (seed, s, cap) = (cfg.seed, cfg.samples, cfg.cap);
    Ok(match name {
        "permutations" => permutations(6, cap),
        "params" => params(seed, s),
        "gram-structure" => gram_structure(seed, s, 3, 5, cap),
        "positivity" => positivity(seed, s, 3, 4, cap),
        "gram-oracle" => gram_oracle(seed, s, 3, 4, cap),
        "gram-inverse" => gram_inverse(seed, s, 3, 4, cap),
        "twisted" => twisted(seed, s, 5, cap),
        "fock" => fock(seed, s, 3, 3),
        "y-elements" => y_elements(seed, s, 3, 4, cap),
        "derivative" => derivative(seed, s, 3, cap),
        "transition" => transition(seed, s, 5, cap),
        "diagonality" => diagonality(seed, s, 3, 4, cap),
        "commutator" => commutator(seed, s, 3, 4, cap),
        "modes" => modes(seed, s, 3, 4, cap),
        "independence" => independence(seed, s, 3, 4, cap),
        "oracle" => oracle(seed, s, 3, 4, cap),
        "single-oscillator" => single_oscillator(seed, s, 5, cap),
        "hamiltonian" => hamiltonian(seed, s, 3, 3, cap),
        other => return Err(QuonError::Invalid(format!("unknown suite `{other}`"))),
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|name| run_suite(name, cfg).expect("listed suite"))
        .collect()
}

/// Every word of length `0..=n` over `m` letters, shortest first.
pub fn all_words(m: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..m).map(move |l| {
                    let mut v = w.letters().to_vec();
                    v.push(l);
                    Word::new(v)
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn label(w: &Word) -> String {
    w.letters().iter().map(|l| (l + 1).to_string()).collect()
}

fn sample(seed: u64, i: usize) -> rand_chacha::ChaCha8Rng {
    seeded_rng(seed.wrapping_mul(1_000_003).wrapping_add(i as u64))
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

pub fn permutations(n_max: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("permutations", 0.0);
    for n in 1..=n_max {
        let all = match johnson_trotter(n, cap) {
            Ok(v) => v,
            Err(e) => {
                r.error(&format!("johnson_trotter({n})"), &e);
                continue;
            }
        };
        let distinct: std::collections::HashSet<&Permutation> = all.iter().collect();
        r.holds(
            distinct.len() == all.len() && all.len() == (1..=n).product::<usize>(),
            || format!("n={n}: order is not a listing of S_n"),
        );
        for pair in all.windows(2) {
            let diff: Vec<usize> = (0..n).filter(|&i| pair[0].images()[i] != pair[1].images()[i]).collect();
            r.holds(diff.len() == 2 && diff[1] == diff[0] + 1, || {
                format!("{} -> {} is not an adjacent swap", pair[0], pair[1])
            });
        }
        let w = longest(n);
        for p in &all {
            r.holds(p.length() + (p * &w).length() == n * (n - 1) / 2, || {
                format!("inversion complement fails for {p}")
            });
        }
        if n <= 5 {
            for parts in compositions(n) {
                let h = YoungSubgroup::from_composition(&parts);
                match coset_reps(&h, cap) {
                    Ok(reps) => {
                        let mut seen = std::collections::HashSet::new();
                        for c in &reps {
                            for g in h.elements() {
                                seen.insert(&g * &c.rep);
                            }
                        }
                        r.holds(
                            seen.len() == all.len() && reps.len() * h.order() == all.len(),
                            || format!("cosets of S_{parts:?} do not partition S_{n}"),
                        );
                    }
                    Err(e) => r.error(&format!("coset_reps {parts:?}"), &e),
                }
            }
        }
    }
    r
}

pub fn params(seed: u64, samples: usize) -> SuiteReport {
    let mut r = SuiteReport::new("params", 0.0);
    for i in 0..samples {
        let q = random_qmatrix(3, RADIUS, &mut sample(seed, i));
        r.holds(q.validate(true).is_valid(), || format!("sample {i} rejected"));
        r.holds((0..3).all(|l| q.get(l, l).is_real()), || format!("sample {i}: complex diagonal"));
        for keep in [vec![0], vec![0, 2], vec![2, 1]] {
            r.holds(q.restrict(&keep).validate(true).is_valid(), || {
                format!("sample {i}: restriction to {keep:?} rejected")
            });
        }
    }
    r
}

fn weights_up_to(m: usize, n_max: usize) -> Vec<Weight> {
    (1..=n_max).flat_map(|n| weights_of_length(m, n)).collect()
}

pub fn gram_structure(seed: u64, samples: usize, m: usize, n_max: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("gram-structure", 1e-12);
    for i in 0..samples {
        let q = random_qmatrix(m, RADIUS, &mut sample(seed, i));
        for weight in weights_up_to(m, n_max) {
            let tag = || format!("sample {i} weight {}", label(&weight.as_word()));
            let block = match gram_weight(&weight, &q, cap) {
                Ok(b) => b,
                Err(e) => {
                    r.error(&tag(), &e);
                    continue;
                }
            };
            let a = &block.matrix;
            r.residual(a.max_abs_diff(&a.adjoint()), || format!("{} hermiticity", tag()));
            if weight.is_generic() {
                let diag = (0..a.rows()).map(|d| (a[(d, d)] - C64::new(1.0, 0.0)).norm()).fold(0.0, f64::max);
                r.residual(diag, || format!("{} unit diagonal", tag()));
                r.residual(block.reversal_residual(), || format!("{} reversal", tag()));
            }
            match reduce_from_generic(&weight, &q, cap) {
                Ok(red) => {
                    r.holds(red.labels == block.labels, || format!("{} reduction labels", tag()));
                    r.residual(red.matrix.max_abs_diff(a), || format!("{} reduction", tag()));
                }
                Err(e) => r.error(&tag(), &e),
            }
        }
    }
    r
}

pub fn positivity(seed: u64, samples: usize, m: usize, n_max: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("positivity", 0.0);
    for i in 0..samples {
        let q = random_qmatrix(m, RADIUS, &mut sample(seed, i));
        match decompose(n_max, &q, cap) {
            Ok(blocks) => {
                for b in blocks {
                    let ev = b.min_eigenvalue();
                    r.note_min("min_eigenvalue", ev);
                    r.holds(ev > 0.0, || {
                        format!("sample {i} weight {}: eigenvalue {ev:e}", label(&b.weight.as_word()))
                    });
                }
            }
            Err(e) => r.error(&format!("sample {i}"), &e),
        }
    }
    r
}

/// Block entries against Fock inner products, exactly.
pub fn gram_oracle(seed: u64, samples: usize, m: usize, n_max: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("gram-oracle", 0.0);
    for i in 0..samples {
        let q = random_exact_qmatrix(m, 7, RADIUS, &mut sample(seed, i));
        for weight in weights_up_to(m, n_max) {
            match gram_weight(&weight, &q, cap) {
                Ok(b) => {
                    let g = gram_matrix(&b.labels, &q);
                    r.holds(g == b.matrix, || {
                        format!("sample {i} weight {}", label(&weight.as_word()))
                    });
                }
                Err(e) => r.error(&format!("sample {i}"), &e),
            }
        }
    }
    r
}

pub fn gram_inverse(seed: u64, samples: usize, m: usize, n_max: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("gram-inverse", 1e-10);
    for i in 0..samples {
        let q = random_qmatrix(m, RADIUS, &mut sample(seed, i));
        match decompose(n_max, &q, cap) {
            Ok(blocks) => {
                for b in blocks {
                    match b.invert() {
                        Ok(inv) => r.residual(inv.residual, || {
                            format!("sample {i} weight {}", label(&b.weight.as_word()))
                        }),
                        Err(e) => r.error(&format!("sample {i}"), &e),
                    }
                }
            }
            Err(e) => r.error(&format!("sample {i}"), &e),
        }
    }
    r
}

/// The named elements the twisted suite needs at one degree.
struct Elements {
    alpha: TwistedElement,
    alpha_prev: TwistedElement,
    beta_product: TwistedElement,
    beta: TwistedElement,
    gamma: TwistedElement,
    gamma_alt: TwistedElement,
    delta: TwistedElement,
    gamma_bar: TwistedElement,
    swap_factor: TwistedElement,
    xi: TwistedElement,
    alpha_mid: TwistedElement,
    eta: TwistedElement,
    w: TwistedElement,
}

fn elements(n: usize, cap: SizeCap) -> Result<Elements> {
    let z = |k: ZagierKind| zagier(&k, cap);
    let betas: Vec<TwistedElement> = (2..=n)
        .map(|m| z(ZagierKind::Beta(m)).map(|b| b.embed(n)))
        .collect::<Result<_>>()?;
    let mid = if n == 2 { vec![1, 1] } else { vec![1, n - 2, 1] };
    let swap = TwistedElement::lift(&cycle(n - 1, n, n));
    Ok(Elements {
        alpha: z(ZagierKind::Alpha(n))?,
        alpha_prev: z(ZagierKind::AlphaComp(vec![n - 1, 1]))?,
        beta_product: TwistedElement::product(n, &betas)?,
        beta: z(ZagierKind::Beta(n))?,
        gamma: z(ZagierKind::Gamma(n))?,
        gamma_alt: gamma_alternating(n, cap)?,
        delta: z(ZagierKind::Delta(n))?,
        gamma_bar: z(ZagierKind::GammaBar(n))?,
        swap_factor: swap.multiply(&TwistedElement::lift(&cycle(1, n, n)))?.one_minus(),
        xi: z(ZagierKind::Xi(n))?,
        alpha_mid: z(ZagierKind::AlphaComp(mid))?,
        eta: z(ZagierKind::Eta(n))?,
        w: TwistedElement::perm(longest(n)),
    })
}

fn twisted_sample(r: &mut SuiteReport, e: &Elements, n: usize, q: &QMatrix<C64>, tag: &str, cap: SizeCap) -> Result<()> {
    let word = Word::new((0..n).collect());
    let s = |x: &TwistedElement| x.specialize(q, &word, cap);
    let (alpha, alpha_prev, delta) = (s(&e.alpha)?, s(&e.alpha_prev)?, s(&e.delta)?);
    r.residual(alpha.distance(&s(&e.beta_product)?)?, || format!("{tag} alpha = product of betas"));
    r.residual(
        s(&e.beta)?.multiply(&s(&e.gamma)?)?.distance(&delta)?,
        || format!("{tag} beta gamma = delta"),
    );
    let lhs = alpha_prev.multiply(&s(&e.swap_factor)?)?;
    let rhs = s(&e.xi)?.multiply(&s(&e.alpha_mid)?)?;
    r.residual(lhs.distance(&rhs)?, || format!("{tag} swap factor identity"));
    let w = s(&e.w)?;
    r.residual(
        w.multiply(&s(&e.eta)?)?.multiply(&w)?.distance(&s(&e.xi)?)?,
        || format!("{tag} w eta w = xi"),
    );
    r.residual(s(&e.gamma_alt)?.distance(&s(&e.gamma)?)?, || format!("{tag} alternating gamma"));

    let keep = |p: &Permutation| p.apply(1) == 1 && p.apply(n) == n;
    let left = alpha.invert()?.component(keep);
    let right = delta.invert()?.multiply(&alpha_prev.invert()?)?.component(keep);
    r.residual(left.distance(&right)?, || format!("{tag} inverse of alpha on the fixed-ends component"));

    let gb = s(&e.gamma_bar)?;
    let gb_inv = gb.invert()?;
    r.residual(
        gb.multiply(&gb_inv)?.distance(&SpecializedElement::identity(&word, cap)?)?,
        || format!("{tag} gamma_bar inverse"),
    );
    r.residual(
        gamma_bar_inverse_closed(n, q, &word, cap)?.distance(&gb_inv)?,
        || format!("{tag} gamma_bar inverse closed form"),
    );
    Ok(())
}

pub fn twisted(seed: u64, samples: usize, n_max: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("twisted", 1e-10);
    for n in 2..=n_max {
        let e = match elements(n, cap) {
            Ok(e) => e,
            Err(err) => {
                r.error(&format!("n={n}"), &err);
                continue;
            }
        };
        if n <= 4 {
            r.holds(e.gamma_alt == e.gamma, || format!("n={n}: alternating gamma, symbolic"));
            let swap_identity = e
                .alpha_prev
                .multiply(&e.swap_factor)
                .and_then(|l| e.xi.multiply(&e.alpha_mid).map(|r| l == r));
            r.holds(matches!(swap_identity, Ok(true)), || format!("n={n}: swap factor identity, symbolic"));
        }
        for i in 0..samples {
            let q = random_qmatrix(n, RADIUS, &mut sample(seed, i));
            let tag = format!("n={n} sample {i}");
            if let Err(err) = twisted_sample(&mut r, &e, n, &q, &tag, cap) {
                r.error(&tag, &err);
            }
        }
    }
    r
}

pub fn fock(seed: u64, samples: usize, m: usize, n_max: usize) -> SuiteReport {
    let mut r = SuiteReport::new("fock", 1e-12);
    let words = all_words(m, n_max);
    for i in 0..samples {
        let mut rng = sample(seed, i);
        let q = random_qmatrix(m, RADIUS, &mut rng);
        for u in &words {
            for w in &words {
                let d = (inner_product(u, w, &q) - inner_product(w, u, &q).conj()).norm();
                r.residual(d, || format!("sample {i} <{}|{}>", label(u), label(w)));
            }
        }
        for t in 0..20 {
            let len = rng.random_range(1..=3);
            let op: Vec<MixedLetter> = (0..len)
                .map(|_| {
                    let l = rng.random_range(0..m);
                    if rng.random_bool(0.5) {
                        MixedLetter::Create(l)
                    } else {
                        MixedLetter::Annihilate(l)
                    }
                })
                .collect();
            let op = OperatorPolynomial::monomial(op, C64::new(rng.random(), rng.random()));
            let u = FockVector::basis(words[rng.random_range(0..words.len())].clone());
            let w = FockVector::basis(words[rng.random_range(0..words.len())].clone());
            let lhs = op.apply(&u, &q).inner(&w, &q);
            let rhs = u.inner(&op.dagger().apply(&w, &q), &q);
            r.residual((lhs - rhs).norm(), || format!("sample {i} adjoint trial {t}"));
        }
    }
    r
}

/// Recursion, q-commutator and `γ̄_n` constructions of `Y_i`, exactly, plus the
/// unit leading coefficient.
pub fn y_elements(seed: u64, samples: usize, m: usize, n_max: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("y-elements", 0.0);
    for i in 0..samples {
        let q = random_exact_qmatrix(m, 7, RADIUS, &mut sample(seed, i));
        for word in all_words(m, n_max).into_iter().filter(|w| !w.is_empty()) {
            let y = y_element(&word, &q);
            let tag = || format!("sample {i} Y_{}", label(&word));
            r.holds(y.body == crate::numberop::y_commutator(&word, &q), || format!("{} commutator form", tag()));
            match crate::numberop::y_from_gamma_bar(&word, &q, cap) {
                Ok(g) => r.holds(g == y.body, || format!("{} gamma_bar form", tag())),
                Err(e) => r.error(&tag(), &e),
            }
            let lead: Vec<MixedLetter> = word.letters().iter().map(|&l| MixedLetter::Annihilate(l)).collect();
            let ok = if word.has_distinct_letters() {
                y.body.coefficient(&lead) == GaussRat::from_i64(1)
            } else {
                !y.body.coefficient(&lead).is_zero() || y.body.is_zero()
            };
            r.holds(ok, || format!("{} leading coefficient", tag()));
        }
    }
    r
}

fn derivative_check<S: Scalar>(r: &mut SuiteReport, word: &Word, q: &QMatrix<S>, tag: &str) {
    let lhs_base = y_element(word, q).dagger_on_vacuum();
    for l in 0..q.size() {
        let lhs = lhs_base.annihilate(l, q);
        let mut rhs = FockVector::zero();
        for j in 2..=word.len() {
            if word.at(j) == l {
                let d = d_coefficient(j, word, q).expect("2 <= j <= n");
                rhs = rhs.add(&y_element(&word.omit(j), q).dagger_on_vacuum().scale(&d));
            }
        }
        let diff = lhs.sub(&rhs);
        if S::EXACT {
            r.holds(diff.is_zero(), || format!("{tag} l={}", l + 1));
        } else {
            r.residual(diff.max_norm(), || format!("{tag} l={}", l + 1));
        }
    }
}

/// `∂_l (Y_i)† = Σ_{j >= 2, i_j = l} d^{(j)}_i (Y_{i without j})†`: exactly on every
/// word of length 2..=4, in double precision on random words of length 5.
pub fn derivative(seed: u64, samples: usize, m: usize, _cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("derivative", 1e-12);
    for i in 0..samples {
        let q = random_exact_qmatrix(m, 7, RADIUS, &mut sample(seed, i));
        for word in all_words(m, 4).into_iter().filter(|w| w.len() >= 2) {
            derivative_check(&mut r, &word, &q, &format!("sample {i} exact {}", label(&word)));
        }
        let mut rng = sample(seed, i + 10_000);
        let qd = random_qmatrix(m, RADIUS, &mut rng);
        for t in 0..10 {
            let word = Word::new((0..5).map(|_| rng.random_range(0..m)).collect());
            derivative_check(&mut r, &word, &qd, &format!("sample {i} trial {t} {}", label(&word)));
        }
    }
    r
}

/// The `e`-recursion against the right-multiplication matrix of
/// `w_n α̃_{n-1,1} δ̃_n w_n`, and `E` against the inverse of the coefficient matrix.
pub fn transition(seed: u64, samples: usize, n_max: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("transition", 1e-10);
    for n in 2..=n_max {
        let x = (|| -> Result<TwistedElement> {
            let w = TwistedElement::perm(longest(n));
            let inner = zagier(&ZagierKind::AlphaComp(vec![n - 1, 1]), cap)?
                .multiply(&zagier(&ZagierKind::Delta(n), cap)?)?;
            w.multiply(&inner)?.multiply(&w)
        })();
        let x = match x {
            Ok(x) => x,
            Err(e) => {
                r.error(&format!("n={n}"), &e);
                continue;
            }
        };
        for i in 0..samples {
            let mut rng = sample(seed, i);
            let q = random_qmatrix(n, RADIUS, &mut rng);
            let mut letters: Vec<Letter> = (0..n).collect();
            // a shuffled base word, so the check is not tied to sorted order
            for a in (1..n).rev() {
                letters.swap(a, rng.random_range(0..=a));
            }
            let word = Word::new(letters);
            let tag = format!("n={n} sample {i} word {}", label(&word));
            let step = || -> Result<(f64, f64)> {
                let (labels, e) = transition_matrix(&word, &q, cap)?;
                let (right_labels, rm) = x.specialize(&q, &word, cap)?.right_mult_matrix(true);
                if labels != right_labels {
                    return Err(QuonError::Invalid("label order differs".into()));
                }
                let nk = expansion_at(&word, &q, cap)?;
                let c = Matrix::from_fn(labels.len(), labels.len(), |a, b| {
                    nk.get(&(labels[a].clone(), labels[b].clone())).copied().unwrap_or_default()
                });
                Ok((e.max_abs_diff(&rm), c.inverse_residual(&e)))
            };
            match step() {
                Ok((d1, d2)) => {
                    r.residual(d1, || format!("{tag} E vs right multiplication"));
                    r.residual(d2, || format!("{tag} E vs inverse coefficients"));
                }
                Err(e) => r.error(&tag, &e),
            }
        }
    }
    r
}

/// Coefficients `c_{j,i}` of every pair of first-letter-fixed rearrangements of
/// `word`, from the expanded form.
fn expansion_at(word: &Word, q: &QMatrix<C64>, cap: SizeCap) -> Result<BTreeMap<(Word, Word), C64>> {
    let n = word.len();
    let fixed: Vec<Permutation> = johnson_trotter(n, cap)?.into_iter().filter(|p| p.apply(1) == 1).collect();
    let mut out = BTreeMap::new();
    for base in fixed.iter().map(|p| word.act(p)) {
        let block = crate::gram::positional_block(&base, q, cap)?;
        let inv = block.matrix.inverse_by_pivots()?;
        let id = block.position(&Permutation::identity(n));
        for p in &fixed {
            out.insert((base.act(p), base.clone()), inv[(id, block.position(p))]);
        }
    }
    Ok(out)
}

fn expansions<S: Scalar>(q: &QMatrix<S>, d: usize, mode: ExpansionMode, cap: SizeCap) -> Result<Vec<NumberOperatorExpansion<S>>> {
    (0..q.size()).map(|k| expansion(k, q, d, mode, cap)).collect()
}

fn diagonality_check<S: Scalar>(r: &mut SuiteReport, nk: &NumberOperatorExpansion<S>, q: &QMatrix<S>, tag: &str) {
    for word in all_words(q.size(), nk.max_degree) {
        let v = FockVector::basis(word.clone());
        match nk.apply(&v, q) {
            Ok(got) => {
                let diff = got.sub(&v.scale(&S::from_i64(word.count(nk.k) as i64)));
                if S::EXACT {
                    r.holds(diff.is_zero(), || format!("{tag} N_{} on {}", nk.k + 1, label(&word)));
                } else {
                    r.residual(diff.max_norm(), || format!("{tag} N_{} on {}", nk.k + 1, label(&word)));
                }
            }
            Err(e) => r.error(tag, &e),
        }
    }
}

/// `N_k |i⟩ = count_k(i) |i⟩` on every basis word within the truncation, in both
/// modes; exactly at a rational point for degree 3.
pub fn diagonality(seed: u64, samples: usize, m: usize, d: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("diagonality", 1e-9);
    for i in 0..samples {
        let q = random_qmatrix(m, RADIUS, &mut sample(seed, i));
        for mode in [ExpansionMode::Expanded, ExpansionMode::Reduced] {
            match expansions(&q, d, mode, cap) {
                Ok(ns) => ns.iter().for_each(|nk| diagonality_check(&mut r, nk, &q, &format!("sample {i} {mode:?}"))),
                Err(e) => r.error(&format!("sample {i} {mode:?}"), &e),
            }
        }
    }
    let qe = random_exact_qmatrix(m, 5, RADIUS, &mut sample(seed, samples));
    match expansions(&qe, d.min(3), ExpansionMode::Reduced, cap) {
        Ok(ns) => ns.iter().for_each(|nk| diagonality_check(&mut r, nk, &qe, "exact")),
        Err(e) => r.error("exact", &e),
    }
    r
}

/// `(N_k a_l† - a_l† N_k)|i⟩ = δ_kl a_k†|i⟩` for `|i| < max_degree`.
pub fn commutator(seed: u64, samples: usize, m: usize, d: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("commutator", 1e-9);
    for i in 0..samples {
        let q = random_qmatrix(m, RADIUS, &mut sample(seed, i));
        let ns = match expansions(&q, d, ExpansionMode::Reduced, cap) {
            Ok(ns) => ns,
            Err(e) => {
                r.error(&format!("sample {i}"), &e);
                continue;
            }
        };
        for nk in &ns {
            for word in all_words(m, d - 1) {
                let v = FockVector::basis(word.clone());
                for l in 0..m {
                    let lhs = nk
                        .apply(&v.create(l), &q)
                        .and_then(|a| nk.apply(&v, &q).map(|b| a.sub(&b.create(l))));
                    match lhs {
                        Ok(lhs) => {
                            let rhs = if l == nk.k { v.create(l) } else { FockVector::zero() };
                            r.residual(lhs.sub(&rhs).max_norm(), || {
                                format!("sample {i} k={} l={} on {}", nk.k + 1, l + 1, label(&word))
                            });
                        }
                        Err(e) => r.error(&format!("sample {i}"), &e),
                    }
                }
            }
        }
    }
    r
}

/// Expanded and reduced forms act identically on every basis word.
pub fn modes(seed: u64, samples: usize, m: usize, d: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("modes", 1e-9);
    for i in 0..samples {
        let q = random_qmatrix(m, RADIUS, &mut sample(seed, i));
        let pair = expansions(&q, d, ExpansionMode::Expanded, cap)
            .and_then(|a| expansions(&q, d, ExpansionMode::Reduced, cap).map(|b| (a, b)));
        let (ex, red) = match pair {
            Ok(p) => p,
            Err(e) => {
                r.error(&format!("sample {i}"), &e);
                continue;
            }
        };
        for (a, b) in ex.iter().zip(&red) {
            for word in all_words(m, d) {
                let v = FockVector::basis(word.clone());
                match (a.apply(&v, &q), b.apply(&v, &q)) {
                    (Ok(x), Ok(y)) => r.residual(x.sub(&y).max_norm(), || {
                        format!("sample {i} N_{} on {}", a.k + 1, label(&word))
                    }),
                    (Err(e), _) | (_, Err(e)) => r.error(&format!("sample {i}"), &e),
                }
            }
        }
    }
    r
}

/// The vectors `Y_j† |0⟩` over the distinct rearrangements `j` of a word are
/// linearly independent: their Gram matrix has a positive smallest eigenvalue.
pub fn independence(seed: u64, samples: usize, m: usize, n_max: usize, _cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("independence", 0.0);
    for i in 0..samples {
        let q = random_qmatrix(m, RADIUS, &mut sample(seed, i));
        for weight in weights_up_to(m, n_max) {
            let vecs: Vec<FockVector<C64>> = distinct_rearrangements(&weight.as_word())
                .iter()
                .map(|j| y_element(j, &q).dagger_on_vacuum())
                .collect();
            let g = Matrix::from_fn(vecs.len(), vecs.len(), |a, b| vecs[a].inner(&vecs[b], &q));
            let ev = min_eigenvalue(&g);
            r.note_min("min_eigenvalue", ev);
            r.holds(ev > 1e-12, || {
                format!("sample {i} weight {}: eigenvalue {ev:e}", label(&weight.as_word()))
            });
        }
    }
    r
}

/// Coefficients of the expanded form against the direct linear solve.
pub fn oracle(seed: u64, samples: usize, m: usize, d: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("oracle", 1e-9);
    for i in 0..samples {
        let q = random_qmatrix(m, RADIUS, &mut sample(seed, i));
        for k in 0..m {
            let tag = format!("sample {i} k={}", k + 1);
            let pair = expansion(k, &q, d, ExpansionMode::Expanded, cap)
                .and_then(|a| solve_coefficients_oracle(k, &q, d, cap).map(|b| (a, b)));
            match pair {
                Ok((ex, sol)) => {
                    let a = ex.coefficients();
                    let b = sol.expansion.coefficients();
                    r.holds(a.len() == b.len(), || format!("{tag}: term counts differ"));
                    for (key, v) in &a {
                        let other = b.get(key).copied().unwrap_or(C64::new(f64::NAN, 0.0));
                        r.residual((v - other).norm(), || {
                            format!("{tag} c({},{})", label(&key.0), label(&key.1))
                        });
                    }
                    r.notes
                        .entry("max_solve_residual".into())
                        .and_modify(|x| *x = x.max(sol.residual))
                        .or_insert(sol.residual);
                }
                Err(e) => r.error(&tag, &e),
            }
        }
    }
    r
}

/// One letter with real `q_kk`: `N |k^n⟩ = n |k^n⟩`.
pub fn single_oscillator(seed: u64, samples: usize, d: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("single-oscillator", 1e-9);
    for i in 0..samples {
        let qkk = sample(seed, i).random_range(-0.9..0.99);
        let mut q = QMatrix::<C64>::zeros(1);
        q.set_raw(0, 0, C64::new(qkk, 0.0));
        for mode in [ExpansionMode::Expanded, ExpansionMode::Reduced] {
            match expansion(0, &q, d, mode, cap) {
                Ok(nk) => diagonality_check(&mut r, &nk, &q, &format!("sample {i} q={qkk:.4} {mode:?}")),
                Err(e) => r.error(&format!("sample {i}"), &e),
            }
        }
    }
    r
}

/// `H |i⟩ = Σ_k E_k count_k(i) |i⟩`.
pub fn hamiltonian(seed: u64, samples: usize, m: usize, d: usize, cap: SizeCap) -> SuiteReport {
    let mut r = SuiteReport::new("hamiltonian", 1e-9);
    for i in 0..samples {
        let mut rng = sample(seed, i);
        let q = random_qmatrix(m, RADIUS, &mut rng);
        let energies: BTreeMap<Letter, f64> = (0..m).map(|k| (k, rng.random_range(-2.0..2.0))).collect();
        let ns = match expansions(&q, d, ExpansionMode::Reduced, cap) {
            Ok(ns) => ns,
            Err(e) => {
                r.error(&format!("sample {i}"), &e);
                continue;
            }
        };
        for word in all_words(m, d) {
            let v = FockVector::basis(word.clone());
            let e: f64 = energies.iter().map(|(&k, &e)| e * word.count(k) as f64).sum();
            match hamiltonian_apply(&energies, &ns, &v, &q) {
                Ok(h) => r.residual(h.sub(&v.scale(&C64::new(e, 0.0))).max_norm(), || {
                    format!("sample {i} on {}", label(&word))
                }),
                Err(err) => r.error(&format!("sample {i}"), &err),
            }
        }
    }
    r
}
