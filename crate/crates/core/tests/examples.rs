//! Worked examples for each public operation, in exact arithmetic where the
//! expected value is a polynomial in the parameters.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use quonlab::fock::{inner_product, MixedLetter};
use quonlab::gram::{decompose, gram_generic, gram_weight, reduce_from_generic};
use quonlab::numberop::{
    act_series, d_coefficient, expansion, hamiltonian_apply, solve_coefficients_oracle, transition_matrix,
    twisted_derivative, y_element,
};
use quonlab::params::{random_exact_qmatrix, random_qmatrix, seeded_rng};
use quonlab::perm::{coset_reps, johnson_trotter, special, Special};
use quonlab::scalar::gauss;
use quonlab::twisted::{zagier, LaurentMonomial, Gauss};
use quonlab::{
    ExpansionMode, FockVector, GaussRat, Matrix, OperatorPolynomial, Permutation, QMatrix, QuonError, SizeCap,
    TwistedElement, Weight, Word, YoungSubgroup, ZagierKind, C64,
};

fn cap() -> SizeCap {
    SizeCap::default()
}

fn p(s: &str) -> Permutation {
    Permutation::from_images(s.bytes().map(|b| (b - b'0') as usize).collect()).unwrap()
}

/// Words written with letters 1, 2, 3 map to indices 0, 1, 2.
fn w(s: &str) -> Word {
    Word::new(s.bytes().map(|b| (b - b'1') as usize).collect())
}

fn weight(s: &str) -> Weight {
    w(s).weight()
}

fn exact_q(seed: u64) -> QMatrix<GaussRat> {
    random_exact_qmatrix(3, 9, 0.9, &mut seeded_rng(seed))
}

fn g(q: &QMatrix<GaussRat>, i: usize, j: usize) -> GaussRat {
    q.get(i - 1, j - 1).clone()
}

#[test]
fn inversion_sets() {
    assert!(p("123").inversions().is_empty());
    assert_eq!(p("321").inversions(), vec![(1, 2), (1, 3), (2, 3)]);
    assert_eq!(p("132").inversions(), vec![(2, 3)]);
}

#[test]
fn johnson_trotter_orders() {
    let lines = |n| johnson_trotter(n, cap()).unwrap().iter().map(|p| p.one_line()).collect::<Vec<_>>();
    assert_eq!(lines(1), ["1"]);
    assert_eq!(lines(2), ["12", "21"]);
    assert_eq!(lines(3), ["123", "132", "312", "321", "231", "213"]);
}

#[test]
fn special_permutations() {
    assert_eq!(special(Special::Cycle(1, 3), 3).unwrap().one_line(), "312");
    assert_eq!(special(Special::Adjacent(1), 2).unwrap().one_line(), "21");
    assert_eq!(special(Special::Longest, 4).unwrap().one_line(), "4321");
}

#[test]
fn coset_representatives() {
    let reps = |h: &YoungSubgroup| coset_reps(h, cap()).unwrap().into_iter().map(|c| c.rep).collect::<Vec<_>>();
    assert_eq!(reps(&YoungSubgroup::from_composition(&[2])), vec![Permutation::identity(2)]);
    let labels: Vec<Word> = reps(&YoungSubgroup::from_composition(&[2, 1]))
        .iter()
        .map(|r| w("113").act(r))
        .collect();
    assert_eq!(labels, vec![w("113"), w("131"), w("311")]);
    assert_eq!(reps(&YoungSubgroup::trivial(3)).len(), 6);
}

#[test]
fn parameter_validation() {
    assert!(QMatrix::<C64>::zeros(2).validate(true).is_valid());
    let ok = QMatrix::<C64>::from_json_str(r#"{"alphabet": ["1","2"], "q": {"1,2": [0.3, 0.1], "2,1": [0.3, -0.1]}}"#).unwrap();
    assert!(ok.validate(false).is_valid());
    let mut bad = QMatrix::<C64>::zeros(2);
    bad.set_raw(0, 1, C64::new(0.5, 0.0));
    bad.set_raw(1, 0, C64::new(0.4, 0.0));
    assert!(!bad.validate(false).is_valid());
    assert!(matches!(bad.check(false), Err(QuonError::NonHermitian(..))));
}

#[test]
fn generic_gram_blocks() {
    let q = exact_q(1);
    let a12 = gram_generic(&weight("12"), &q, cap()).unwrap();
    assert_eq!(a12.matrix, Matrix::from_rows(vec![vec![GaussRat::one(), g(&q, 1, 2)], vec![g(&q, 2, 1), GaussRat::one()]]));
    let a123 = gram_generic(&weight("123"), &q, cap()).unwrap();
    let col = |s: &str| a123.labels.iter().position(|l| *l == w(s)).unwrap();
    assert_eq!(a123.matrix[(0, col("213"))], g(&q, 1, 2));
    assert_eq!(a123.matrix[(0, col("321"))], g(&q, 1, 2) * g(&q, 1, 3) * g(&q, 2, 3));
    let zero = QMatrix::<GaussRat>::zeros(3);
    assert_eq!(gram_generic(&weight("123"), &zero, cap()).unwrap().matrix, Matrix::identity(6));
}

#[test]
fn degenerate_gram_blocks() {
    let q = exact_q(2);
    let a11 = gram_weight(&weight("11"), &q, cap()).unwrap();
    assert_eq!(a11.matrix, Matrix::from_rows(vec![vec![GaussRat::one() + g(&q, 1, 1)]]));
    let a113 = gram_weight(&weight("113"), &q, cap()).unwrap();
    assert_eq!(a113.labels, vec![w("113"), w("131"), w("311")]);
    assert_eq!(a113.matrix[(0, 1)], g(&q, 1, 3) + g(&q, 1, 1) * g(&q, 1, 3));
    for s in ["113", "11", "123", "1223"] {
        assert_eq!(reduce_from_generic(&weight(s), &q, cap()).unwrap(), gram_weight(&weight(s), &q, cap()).unwrap(), "{s}");
    }
    assert_eq!(gram_weight(&weight("123"), &q, cap()).unwrap(), gram_generic(&weight("123"), &q, cap()).unwrap());
}

#[test]
fn decomposition_shapes() {
    let q = exact_q(3);
    let two = q.restrict(&[0, 1]);
    let sizes = |n| decompose(n, &two, cap()).unwrap().iter().map(|b| b.size()).collect::<Vec<_>>();
    assert_eq!(sizes(1), vec![1, 1, 1]);
    assert_eq!(sizes(2), vec![1, 1, 1, 1, 2, 1]);
    let blocks = decompose(3, &q, cap()).unwrap();
    let b123 = blocks.iter().find(|b| b.weight == weight("123")).unwrap();
    assert_eq!(b123.size(), 6);
}

#[test]
fn determinant_and_inverse_of_the_two_letter_block() {
    let q = exact_q(4);
    let a = gram_weight(&weight("12"), &q, cap()).unwrap();
    let delta = GaussRat::one() - g(&q, 1, 2).norm_sqr();
    assert_eq!(a.determinant(), delta);
    let expected = Matrix::from_rows(vec![
        vec![GaussRat::one(), GaussRat::zero() - g(&q, 1, 2)],
        vec![GaussRat::zero() - g(&q, 2, 1), GaussRat::one()],
    ])
    .scale(&(GaussRat::one() / delta));
    let inv = a.invert().unwrap();
    assert_eq!(inv.matrix, expected);
    assert_eq!(inv.residual, 0.0);
    assert_eq!(gram_weight(&weight("123"), &QMatrix::<GaussRat>::zeros(3), cap()).unwrap().determinant(), GaussRat::one());
}

#[test]
fn boundary_parameters_are_singular() {
    let mut q = QMatrix::<C64>::zeros(2);
    q.set_hermitian(0, 1, C64::new(0.6, 0.8));
    let a = gram_weight(&weight("12"), &q, cap()).unwrap();
    assert!(matches!(a.invert(), Err(QuonError::Singular { .. })));
    let mut fermi = QMatrix::<C64>::zeros(1);
    fermi.set_raw(0, 0, C64::new(-1.0, 0.0));
    assert!(matches!(gram_weight(&weight("11"), &fermi, cap()).unwrap().invert(), Err(QuonError::Singular { .. })));
}

#[test]
fn lifts_and_products() {
    assert_eq!(TwistedElement::lift(&Permutation::identity(3)), TwistedElement::unit(3));
    let t = TwistedElement::lift(&p("21"));
    assert_eq!(t, TwistedElement::term(p("21"), LaurentMonomial::var(2, 1), Gauss::new(1, 0)));
    let both = LaurentMonomial::var(1, 2).mul(&LaurentMonomial::var(2, 1));
    assert_eq!(&t * &t, TwistedElement::monomial(2, both, Gauss::new(1, 0)));
    let x = zagier(&ZagierKind::Delta(3), cap()).unwrap();
    assert_eq!(&TwistedElement::unit(3) * &x, x);
    let a3 = zagier(&ZagierKind::Alpha(3), cap()).unwrap();
    let b2 = zagier(&ZagierKind::Beta(2), cap()).unwrap().embed(3);
    let b3 = zagier(&ZagierKind::Beta(3), cap()).unwrap();
    assert_eq!(a3, &b2 * &b3);
}

#[test]
fn alpha_two_and_its_specializations() {
    let a2 = zagier(&ZagierKind::Alpha(2), cap()).unwrap();
    let expected = TwistedElement::unit(2)
        .add(&TwistedElement::term(p("21"), LaurentMonomial::var(2, 1), Gauss::new(1, 0)))
        .unwrap();
    assert_eq!(a2, expected);

    let q = exact_q(5);
    let (labels, r) = a2.specialize(&q, &w("12"), cap()).unwrap().right_mult_matrix(false);
    let block = gram_weight(&weight("12"), &q, cap()).unwrap();
    assert_eq!(labels, block.labels);
    assert_eq!(r, block.matrix);

    let zero = QMatrix::<GaussRat>::zeros(2);
    let s = TwistedElement::lift(&p("21")).specialize(&zero, &w("12"), cap()).unwrap();
    assert_eq!(*s.matrix(), Matrix::zeros(2, 2));
}

#[test]
fn single_parameter_alpha_has_inversion_powers() {
    let x = gauss((2, 7), (0, 1));
    let q = QMatrix::single_parameter(3, x.clone());
    let s = zagier(&ZagierKind::Alpha(3), cap()).unwrap().specialize(&q, &w("123"), cap()).unwrap();
    for perm in johnson_trotter(3, cap()).unwrap() {
        let expected = (0..perm.length()).fold(GaussRat::one(), |acc, _| acc * x.clone());
        assert!(s.coefficient_of(&perm).iter().all(|c| *c == expected), "{perm}");
    }
}

#[test]
fn unit_specializations() {
    let q = exact_q(6);
    let s = TwistedElement::unit(3).specialize(&q, &w("113"), cap()).unwrap();
    assert_eq!(s.invert().unwrap(), s);
    let (_, r) = s.right_mult_matrix(false);
    assert_eq!(r, Matrix::identity(3));
}

#[test]
fn two_letter_transition_matrix_inverts_the_degree_two_coefficient() {
    let q = random_qmatrix(3, 0.9, &mut seeded_rng(7));
    let (labels, e) = transition_matrix(&w("13"), &q, cap()).unwrap();
    assert_eq!(labels, vec![w("13")]);
    let oracle = solve_coefficients_oracle(0, &q, 2, cap()).unwrap();
    let c = oracle.expansion.coefficients()[&(w("13"), w("13"))];
    assert!((e[(0, 0)] * c - C64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn fock_rewriting_examples() {
    let q = exact_q(8);
    let vac = FockVector::<GaussRat>::vacuum();
    assert!(OperatorPolynomial::annihilate(0).apply(&vac, &q).is_zero());
    let a1a1d = OperatorPolynomial::annihilate(0).mul(&OperatorPolynomial::create(0));
    assert_eq!(a1a1d.apply(&vac, &q), vac);
    let op = OperatorPolynomial::monomial(
        vec![MixedLetter::Annihilate(0), MixedLetter::Create(1), MixedLetter::Create(0)],
        GaussRat::one(),
    );
    assert_eq!(op.apply(&vac, &q), FockVector::basis(w("2")).scale(&g(&q, 1, 2)));
}

#[test]
fn fock_inner_products() {
    let q = exact_q(9);
    assert_eq!(inner_product(&w("12"), &w("12"), &q), GaussRat::one());
    assert_eq!(inner_product(&w("12"), &w("21"), &q), g(&q, 1, 2));
    assert_eq!(inner_product(&w("113"), &w("131"), &q), g(&q, 1, 3) + g(&q, 1, 1) * g(&q, 1, 3));
}

#[test]
fn number_operator_on_small_states() {
    let q = exact_q(10);
    let n1 = expansion(0, &q, 3, ExpansionMode::Reduced, cap()).unwrap();
    assert!(act_series(&n1, &FockVector::vacuum(), &q).unwrap().is_zero());
    let one = FockVector::basis(w("1"));
    assert_eq!(act_series(&n1, &one, &q).unwrap(), one);
    let s = FockVector::basis(w("121"));
    assert_eq!(act_series(&n1, &s, &q).unwrap(), s.scale(&<GaussRat as quonlab::Scalar>::from_i64(2)));
}

#[test]
fn y_element_examples() {
    let q = exact_q(11);
    assert_eq!(y_element(&w("2"), &q).body, OperatorPolynomial::annihilate(1));
    let y = y_element(&w("13"), &q).body;
    let expected = OperatorPolynomial::annihilator_word(&w("13"))
        .sub(&OperatorPolynomial::annihilator_word(&w("31")).scale(&g(&q, 3, 1)));
    assert_eq!(y, expected);
    let zero = QMatrix::<GaussRat>::zeros(3);
    assert_eq!(y_element(&w("3121"), &zero).body, OperatorPolynomial::annihilator_word(&w("3121")));
}

#[test]
fn twisted_derivative_examples() {
    let q = exact_q(12);
    assert_eq!(twisted_derivative(0, &w("1"), &q), OperatorPolynomial::one());
    assert!(twisted_derivative(0, &w("2"), &q).is_zero());
    assert_eq!(
        twisted_derivative(0, &w("21"), &q),
        OperatorPolynomial::creator_word(&w("2")).scale(&g(&q, 1, 2))
    );
}

#[test]
fn d_coefficient_examples() {
    let q = exact_q(13);
    assert_eq!(d_coefficient(2, &w("12"), &q).unwrap(), GaussRat::one() - g(&q, 2, 1).norm_sqr());
    let zero = QMatrix::<GaussRat>::zeros(3);
    assert!(d_coefficient(2, &w("123"), &zero).unwrap().is_zero());
    assert_eq!(d_coefficient(3, &w("123"), &zero).unwrap(), GaussRat::one());
    assert!(matches!(d_coefficient(4, &w("123"), &q), Err(QuonError::IndexOutOfRange(_))));
}

#[test]
fn expansion_examples() {
    let q = exact_q(14);
    let n1 = expansion(0, &q, 1, ExpansionMode::Expanded, cap()).unwrap();
    assert_eq!(n1.terms.len(), 1);
    assert_eq!(n1.x_dagger(&w("1")), Some(&OperatorPolynomial::create(0)));
    let n2 = expansion(0, &q, 2, ExpansionMode::Expanded, cap()).unwrap();
    let c = n2.coefficients()[&(w("13"), w("13"))].clone();
    assert_eq!(c, GaussRat::one() / (GaussRat::one() - g(&q, 1, 3).norm_sqr()));
}

#[test]
fn oracle_at_degree_two() {
    let q = random_qmatrix(3, 0.9, &mut seeded_rng(15));
    let sol = solve_coefficients_oracle(2, &q, 2, cap()).unwrap();
    let ex = expansion(2, &q, 2, ExpansionMode::Expanded, cap()).unwrap();
    let a = ex.coefficients();
    let b = sol.expansion.coefficients();
    assert_eq!(b[&(w("3"), w("3"))], C64::new(1.0, 0.0));
    for (k, v) in &a {
        assert!((v - b[k]).norm() < 1e-12);
    }
}

#[test]
fn hamiltonian_examples() {
    let q = random_qmatrix(2, 0.9, &mut seeded_rng(16));
    let ns: Vec<_> = (0..2).map(|k| expansion(k, &q, 3, ExpansionMode::Reduced, cap()).unwrap()).collect();
    let s11 = FockVector::basis(w("11"));
    let off = BTreeMap::from([(0, 0.0), (1, 0.0)]);
    assert!(hamiltonian_apply(&off, &ns, &s11, &q).unwrap().max_norm() < 1e-14);
    let e = BTreeMap::from([(0, 2.0)]);
    let h = hamiltonian_apply(&e, &ns, &s11, &q).unwrap();
    assert!(h.sub(&s11.scale(&C64::new(4.0, 0.0))).max_norm() < 1e-12);
    assert!(hamiltonian_apply(&e, &ns, &FockVector::vacuum(), &q).unwrap().is_zero());
    let long = FockVector::basis(w("1111"));
    assert!(matches!(hamiltonian_apply(&e, &ns, &long, &q), Err(QuonError::Truncation { .. })));
}
