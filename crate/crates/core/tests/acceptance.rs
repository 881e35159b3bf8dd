//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria whose literal statement does not hold for the published formulas are
//! listed in `KNOWN_RED`. They are still evaluated as stated and reported as FAIL;
//! the test asserts that they keep failing so a change in behaviour is noticed.

use std::time::{Duration, Instant};

use num_traits::One;
use quonlab::gram::gram_weight;
use quonlab::params::{random_exact_qmatrix, seeded_rng};
use quonlab::verify::{self, SuiteReport};
use quonlab::{GaussRat, Matrix, QMatrix, Scalar, SizeCap, Weight, Word, C64};

const SEED: u64 = 2024;
const POINTS: usize = 20;
const KNOWN_RED: &[&str] = &["2", "3b"];

struct Line {
    id: &'static str,
    passed: bool,
    text: String,
}

fn line(id: &'static str, passed: bool, what: &str, detail: String, elapsed: Duration) -> Line {
    let text = format!(
        "{} criterion {id}: {what} | {detail} | {:.2}s",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    println!("{text}");
    Line { id, passed, text }
}

fn suite_line(id: &'static str, what: &str, reports: &[SuiteReport], started: Instant, budget: Option<Duration>) -> Line {
    let elapsed = started.elapsed();
    let mut passed = reports.iter().all(SuiteReport::passed);
    let mut detail: Vec<String> = reports
        .iter()
        .map(|r| {
            let mut s = format!(
                "{}: {} checks, max residual {:.3e} (tol {:.0e})",
                r.name, r.checks, r.max_residual, r.tolerance
            );
            for (k, v) in &r.notes {
                s.push_str(&format!(", {k} {v:.3e}"));
            }
            if let Some(f) = r.failures.first() {
                s.push_str(&format!(", {} failures, first: {f}", r.failures.len()));
            }
            s
        })
        .collect();
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            detail.push(format!("over the {}s budget", b.as_secs()));
        }
    }
    line(id, passed, what, detail.join("; "), elapsed)
}

fn exact_points() -> Vec<QMatrix<GaussRat>> {
    (0..POINTS)
        .map(|i| random_exact_qmatrix(3, 11, 0.9, &mut seeded_rng(SEED + i as u64)))
        .collect()
}

// Letters 1, 2, 3 of the printed examples are indices 0, 1, 2.
fn qq<S: Scalar>(q: &QMatrix<S>, i: usize, j: usize) -> S {
    q.get(i - 1, j - 1).clone()
}

fn printed_a12<S: Scalar>(q: &QMatrix<S>) -> Matrix<S> {
    Matrix::from_rows(vec![vec![S::one(), qq(q, 1, 2)], vec![qq(q, 2, 1), S::one()]])
}

fn printed_a123<S: Scalar>(q: &QMatrix<S>) -> Matrix<S> {
    let g = |i, j| qq(q, i, j);
    let one = S::one;
    Matrix::from_rows(vec![
        vec![one(), g(2, 3), g(1, 3) * g(2, 3), g(1, 2) * g(1, 3) * g(2, 3), g(1, 2) * g(1, 3), g(1, 2)],
        vec![g(3, 2), one(), g(1, 3), g(1, 2) * g(1, 3), g(1, 2) * g(1, 3) * g(3, 2), g(1, 2) * g(3, 2)],
        vec![g(3, 1) * g(3, 2), g(3, 1), one(), g(1, 2), g(1, 2) * g(3, 2), g(1, 2) * g(3, 1) * g(3, 2)],
        vec![g(2, 1) * g(3, 1) * g(3, 2), g(2, 1) * g(3, 1), g(2, 1), one(), g(3, 2), g(3, 1) * g(3, 2)],
        vec![g(2, 1) * g(3, 1), g(2, 1) * g(3, 1) * g(2, 3), g(2, 1) * g(2, 3), g(2, 3), one(), g(3, 1)],
        vec![g(2, 1), g(2, 1) * g(2, 3), g(2, 1) * g(1, 3) * g(2, 3), g(1, 3) * g(2, 3), g(1, 3), one()],
    ])
}

fn printed_a113<S: Scalar>(q: &QMatrix<S>) -> Matrix<S> {
    let (q11, q13, q31) = (qq(q, 1, 1), qq(q, 1, 3), qq(q, 3, 1));
    let one = S::one();
    Matrix::from_rows(vec![
        vec![one.clone() + q11.clone(), q13.clone() + q11.clone() * q13.clone(), q13.clone() * q13.clone() + q11.clone() * q13.clone() * q13.clone()],
        vec![q31.clone() + q11.clone() * q31.clone(), one.clone() + q11.clone() * q13.clone() * q31.clone(), q13.clone() + q11.clone() * q13.clone()],
        vec![q31.clone() * q31.clone() + q11.clone() * q31.clone() * q31.clone(), q31.clone() + q11.clone() * q31.clone(), one + q11],
    ])
}

fn delta12<S: Scalar>(q: &QMatrix<S>) -> S {
    S::one() - qq(q, 1, 2) * qq(q, 2, 1)
}

fn delta123<S: Scalar>(q: &QMatrix<S>) -> S {
    let (a, b, c) = abc(q);
    (S::one() - c.clone()) * (S::one() - b.clone()) * (S::one() - a.clone()) * (S::one() - c * b * a)
}

fn delta113<S: Scalar>(q: &QMatrix<S>) -> S {
    let q11 = qq(q, 1, 1);
    let m = qq(q, 1, 3) * qq(q, 3, 1);
    (S::one() + q11.clone()) * (S::one() - m.clone()) * (S::one() - q11 * m)
}

/// `a = |q_23|²`, `b = |q_13|²`, `c = |q_12|²`.
fn abc<S: Scalar>(q: &QMatrix<S>) -> (S, S, S) {
    (qq(q, 2, 3).norm_sqr(), qq(q, 1, 3).norm_sqr(), qq(q, 1, 2).norm_sqr())
}

/// The printed `M^{123}` table; `corrected` multiplies entry (312,123) by `c`.
fn printed_m123<S: Scalar>(q: &QMatrix<S>, corrected: bool) -> Matrix<S> {
    let (a, b, c) = abc(q);
    let one = S::one;
    let m = |x: &S| x.clone() - one();
    let p = |x: &S| one() - x.clone();
    let m312_123 = if corrected { c.clone() * m(&a) * p(&b) } else { m(&a) * p(&b) };
    Matrix::from_rows(vec![
        vec![p(&(a.clone() * c.clone())) * p(&b), m(&b) * p(&c), c.clone() * m(&b) * p(&a), p(&(a.clone() * c.clone())) * p(&b), a.clone() * m(&b) * p(&c), m(&b) * p(&a)],
        vec![m(&c) * p(&b), p(&(a.clone() * b.clone())) * p(&c), m(&c) * p(&a), a.clone() * m(&c) * p(&b), p(&(a.clone() * b.clone())) * p(&c), b.clone() * m(&c) * p(&a)],
        vec![m312_123, m(&a) * p(&c), p(&(b.clone() * c.clone())) * p(&a), m(&a) * p(&b), b.clone() * m(&a) * p(&c), p(&(b.clone() * c.clone())) * p(&a)],
        vec![p(&(a.clone() * c.clone())) * p(&b), a.clone() * m(&b) * p(&c), m(&b) * p(&a), p(&(a.clone() * c.clone())) * p(&b), m(&b) * p(&c), c.clone() * m(&b) * p(&a)],
        vec![a.clone() * m(&c) * p(&b), p(&(a.clone() * b.clone())) * p(&c), b.clone() * m(&c) * p(&a), m(&c) * p(&b), p(&(a.clone() * b.clone())) * p(&c), m(&c) * p(&a)],
        vec![m(&a) * p(&b), b.clone() * m(&a) * p(&c), p(&(b.clone() * c.clone())) * p(&a), c.clone() * m(&a) * p(&b), m(&a) * p(&c), p(&(b * c.clone())) * p(&a)],
    ])
}

fn printed_inv113<S: Scalar>(q: &QMatrix<S>) -> Matrix<S> {
    let (q11, q13, q31) = (qq(q, 1, 1), qq(q, 1, 3), qq(q, 3, 1));
    let one = S::one;
    let s = one() + q11.clone();
    let rows = vec![
        vec![one(), S::zero() - s.clone() * q13.clone(), q11.clone() * q13.clone() * q13.clone()],
        vec![S::zero() - q31.clone() * s.clone(), s.clone() * (one() + q13.clone() * q31.clone()), S::zero() - s.clone() * q13.clone()],
        vec![q31.clone() * q31.clone() * q11, S::zero() - q31 * s, one()],
    ];
    Matrix::from_rows(rows).scale(&(one() / delta113(q)))
}

fn weight(letters: &[usize]) -> Weight {
    Weight::new(letters.to_vec())
}

fn words(labels: &[&str]) -> Vec<Word> {
    labels
        .iter()
        .map(|s| Word::new(s.bytes().map(|b| (b - b'1') as usize).collect()))
        .collect()
}

type Printed = fn(&QMatrix<GaussRat>) -> Matrix<GaussRat>;

fn criterion_1(cap: SizeCap) -> Line {
    let started = Instant::now();
    let mut bad = Vec::new();
    let mut checks = 0;
    let cases: Vec<(&str, Weight, Vec<&str>, Printed)> = vec![
        ("1", weight(&[0]), vec!["1"], |_| Matrix::identity(1)),
        ("12", weight(&[0, 1]), vec!["12", "21"], printed_a12),
        ("123", weight(&[0, 1, 2]), vec!["123", "132", "312", "321", "231", "213"], printed_a123),
        ("11", weight(&[0, 0]), vec!["11"], |q| Matrix::from_rows(vec![vec![GaussRat::one() + qq(q, 1, 1)]])),
        ("113", weight(&[0, 0, 2]), vec!["113", "131", "311"], printed_a113),
    ];
    for (i, q) in exact_points().iter().enumerate() {
        for (name, w, labels, printed) in &cases {
            checks += 1;
            let block = gram_weight(w, q, cap).expect("block");
            if block.labels != words(labels) || block.matrix != printed(q) {
                bad.push(format!("point {i} weight {name}"));
            }
        }
    }
    let elapsed = started.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(5);
    line(
        "1",
        ok,
        "printed Gram blocks 1, 12, 123, 11, 113 (exact, 20 points, < 5 s)",
        format!("{checks} exact comparisons, mismatches {bad:?}"),
        elapsed,
    )
}

fn criterion_2(cap: SizeCap) -> Line {
    let started = Instant::now();
    let mut exact_bad: Vec<String> = Vec::new();
    let mut worst_rel: f64 = 0.0;
    let mut worst_by_weight = [0.0f64; 3];
    for (i, q) in exact_points().iter().enumerate() {
        let qd = q.to_c64();
        let cases: [(&str, Weight, GaussRat, C64); 3] = [
            ("12", weight(&[0, 1]), delta12(q), delta12(&qd)),
            ("123", weight(&[0, 1, 2]), delta123(q), delta123(&qd)),
            ("113", weight(&[0, 0, 2]), delta113(q), delta113(&qd)),
        ];
        for (t, (name, w, de, dd)) in cases.into_iter().enumerate() {
            if gram_weight(&w, q, cap).unwrap().determinant() != de {
                exact_bad.push(format!("{name}@{i}"));
            }
            let det = gram_weight(&w, &qd, cap).unwrap().determinant();
            let rel = (det - dd).norm() / dd.norm();
            worst_rel = worst_rel.max(rel);
            worst_by_weight[t] = worst_by_weight[t].max(rel);
        }
    }
    let ok = exact_bad.is_empty() && worst_rel < 1e-12;
    let mut weights_failing: Vec<&str> = ["12", "123", "113"]
        .iter()
        .zip(worst_by_weight)
        .filter(|(_, r)| *r >= 1e-12)
        .map(|(n, _)| *n)
        .collect();
    weights_failing.dedup();
    line(
        "2",
        ok,
        "det A^12 = Δ^12, det A^123 = Δ^123, det A^113 = Δ^113 (exact and rel. < 1e-12)",
        format!(
            "exact mismatches at {} of {} evaluations, worst relative error {worst_rel:.3e}, failing weights {weights_failing:?}",
            exact_bad.len(),
            3 * POINTS
        ),
        started.elapsed(),
    )
}

fn criterion_3(cap: SizeCap) -> Vec<Line> {
    let started = Instant::now();
    let (mut e113, mut e123, mut e123c) = (0.0f64, 0.0f64, 0.0f64);
    for q in exact_points().iter().map(QMatrix::to_c64) {
        let inv113 = gram_weight(&weight(&[0, 0, 2]), &q, cap).unwrap().invert().unwrap().matrix;
        e113 = e113.max(inv113.max_abs_diff(&printed_inv113(&q)));
        let a = gram_weight(&weight(&[0, 1, 2]), &q, cap).unwrap();
        let inv = a.invert().unwrap().matrix;
        let scale = C64::new(1.0, 0.0) / delta123(&q);
        e123 = e123.max(inv.max_abs_diff(&a.matrix.schur(&printed_m123(&q, false)).scale(&scale)));
        e123c = e123c.max(inv.max_abs_diff(&a.matrix.schur(&printed_m123(&q, true)).scale(&scale)));
    }
    let elapsed = started.elapsed();
    vec![
        line("3a", e113 < 1e-10, "[A^113]^-1 equals the printed closed form (20 points, < 1e-10)", format!("max abs error {e113:.3e}"), elapsed),
        line("3b", e123 < 1e-10, "[A^123]^-1 equals (1/Δ^123) A^123 * M^123 with the printed table (< 1e-10)", format!("max abs error {e123:.3e}"), elapsed),
        line(
            "3c",
            e123c < 1e-10,
            "same with entry (312,123) of M^123 read as c(a-1)(1-b) (< 1e-10)",
            format!("max abs error {e123c:.3e}"),
            elapsed,
        ),
    ]
}

#[test]
fn acceptance() {
    let cap = SizeCap::default();
    let mut lines = vec![criterion_1(cap), criterion_2(cap)];
    lines.extend(criterion_3(cap));

    let t = Instant::now();
    let r = verify::gram_oracle(SEED, 3, 3, 4, cap);
    lines.push(suite_line("4", "Gram entries equal Fock inner products, n <= 4, 3 letters, exact (< 30 s)", &[r], t, Some(Duration::from_secs(30))));

    let t = Instant::now();
    let r = verify::gram_structure(SEED, 50, 3, 5, cap);
    lines.push(suite_line("5", "unit diagonal, hermiticity, reversal, reduction; n <= 5, 50 points (< 1e-12)", &[r], t, None));

    let t = Instant::now();
    let r = verify::positivity(SEED, 50, 3, 4, cap);
    lines.push(suite_line("6", "every block positive definite, n <= 4, 50 points", &[r], t, None));

    let t = Instant::now();
    let r = verify::twisted(SEED, 20, 5, cap);
    lines.push(suite_line("7", "twisted-algebra identities, n <= 5, 20 points (< 1e-10), symbolic n <= 4", &[r], t, None));

    let t = Instant::now();
    let r = verify::transition(SEED, 20, 5, cap);
    lines.push(suite_line("8", "transition matrix equals right multiplication by w α δ w, n <= 5 (< 1e-10)", &[r], t, None));

    let t = Instant::now();
    let reports = vec![
        verify::diagonality(SEED, 20, 3, 4, cap),
        verify::modes(SEED, 20, 3, 4, cap),
        verify::oracle(SEED, 20, 3, 4, cap),
    ];
    lines.push(suite_line("9", "N_k diagonal, modes agree, oracle coefficients agree; 3 letters, degree 4, 20 points (< 1e-9, < 2 min)", &reports, t, Some(Duration::from_secs(120))));

    let t = Instant::now();
    let r = verify::single_oscillator(SEED, 20, 5, cap);
    lines.push(suite_line("10", "single letter: N |k^n> = n |k^n>, n <= 5 (< 1e-9)", &[r], t, None));

    let unexpected: Vec<&str> = lines
        .iter()
        .filter(|l| l.passed == KNOWN_RED.contains(&l.id))
        .map(|l| l.text.as_str())
        .collect();
    assert!(unexpected.is_empty(), "criteria off their expected status:\n{}", unexpected.join("\n"));
}
