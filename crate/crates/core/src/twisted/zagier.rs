use std::fmt;
use std::str::FromStr;

use super::element::{Gauss, TwistedElement};
use super::monomial::LaurentMonomial;
use crate::error::{QuonError, Result};
use crate::perm::{cycle, johnson_trotter, SizeCap, YoungSubgroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZagierKind {
    /// `α̃_n = Σ_{π ∈ S_n} π̃`.
    Alpha(usize),
    /// `α̃_{n_1,…,n_k}`: the same sum over `S_{n_1} × … × S_{n_k}`.
    AlphaComp(Vec<usize>),
    /// `β̃_n = Σ_{k=1}^{n} t̃_{k,n}`.
    Beta(usize),
    /// `γ̃_n = (1 - t̃_{1,n}) … (1 - t̃_{n-1,n})`.
    Gamma(usize),
    /// `δ̃_n = (1 - t̃_{n-1} t̃_{1,n}) … (1 - t̃_{n-1} t̃_{n-1,n})`.
    Delta(usize),
    /// `γ̄_n = (1 - t̃_{1,2}) … (1 - t̃_{1,n})`.
    GammaBar(usize),
    /// `ξ_n = Σ_{k=1}^{n-1} (1 - Q_{{k,k+1}} … Q_{{k,n}}) t̃_{1,k}`.
    Xi(usize),
    /// `η_n = Σ_{k=2}^{n} Q_{k,k+1} … Q_{k,n} (1 - Q_{{k,1}} … Q_{{k,k-1}}) t_{k,n}⁻¹`,
    /// with a bare (unlifted) permutation; this is the form with `w_n η_n w_n = ξ_n`.
    Eta(usize),
}

impl ZagierKind {
    pub fn degree(&self) -> usize {
        match self {
            ZagierKind::AlphaComp(parts) => parts.iter().sum(),
            ZagierKind::Alpha(n)
            | ZagierKind::Beta(n)
            | ZagierKind::Gamma(n)
            | ZagierKind::Delta(n)
            | ZagierKind::GammaBar(n)
            | ZagierKind::Xi(n)
            | ZagierKind::Eta(n) => *n,
        }
    }
}

impl fmt::Display for ZagierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZagierKind::Alpha(n) => write!(f, "alpha({n})"),
            ZagierKind::AlphaComp(parts) => {
                let p: Vec<String> = parts.iter().map(usize::to_string).collect();
                write!(f, "alpha_comp({})", p.join(","))
            }
            ZagierKind::Beta(n) => write!(f, "beta({n})"),
            ZagierKind::Gamma(n) => write!(f, "gamma({n})"),
            ZagierKind::Delta(n) => write!(f, "delta({n})"),
            ZagierKind::GammaBar(n) => write!(f, "gamma_bar({n})"),
            ZagierKind::Xi(n) => write!(f, "xi({n})"),
            ZagierKind::Eta(n) => write!(f, "eta({n})"),
        }
    }
}

/// Parses a kind name with its size, e.g. `("gamma_bar", "4")` or
/// `("alpha_comp", "1,2,1")`.
pub fn parse_kind(name: &str, arg: &str) -> Result<ZagierKind> {
    let bad = || QuonError::Invalid(format!("bad size `{arg}` for {name}"));
    if name == "alpha_comp" {
        let parts = arg
            .split(',')
            .map(|s| usize::from_str(s.trim()).map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(bad());
        }
        return Ok(ZagierKind::AlphaComp(parts));
    }
    let n = usize::from_str(arg.trim()).map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    Ok(match name {
        "alpha" => ZagierKind::Alpha(n),
        "beta" => ZagierKind::Beta(n),
        "gamma" => ZagierKind::Gamma(n),
        "delta" => ZagierKind::Delta(n),
        "gamma_bar" => ZagierKind::GammaBar(n),
        "xi" => ZagierKind::Xi(n),
        "eta" => ZagierKind::Eta(n),
        other => return Err(QuonError::Invalid(format!("unknown element `{other}`"))),
    })
}

fn lifted_cycle(k: usize, l: usize, n: usize) -> TwistedElement {
    TwistedElement::lift(&cycle(k, l, n))
}

fn young_sum(parts: &[usize], cap: SizeCap) -> Result<TwistedElement> {
    let n: usize = parts.iter().sum();
    cap.check(n)?;
    let h = YoungSubgroup::from_composition(parts);
    let lifts: Vec<TwistedElement> = h.elements().iter().map(TwistedElement::lift).collect();
    TwistedElement::sum(n, &lifts)
}

fn monomial_product(factors: impl IntoIterator<Item = LaurentMonomial>) -> LaurentMonomial {
    factors
        .into_iter()
        .fold(LaurentMonomial::unit(), |acc, m| acc.mul(&m))
}

pub fn zagier(kind: &ZagierKind, cap: SizeCap) -> Result<TwistedElement> {
    let n = kind.degree();
    cap.check(n)?;
    let one = Gauss::new(1, 0);
    match kind {
        ZagierKind::Alpha(n) => young_sum(&[*n], cap),
        ZagierKind::AlphaComp(parts) => young_sum(parts, cap),
        ZagierKind::Beta(n) => {
            let terms: Vec<_> = (1..=*n).map(|k| lifted_cycle(k, *n, *n)).collect();
            TwistedElement::sum(*n, &terms)
        }
        ZagierKind::Gamma(n) => {
            let factors: Vec<_> = (1..*n).map(|k| lifted_cycle(k, *n, *n).one_minus()).collect();
            TwistedElement::product(*n, &factors)
        }
        ZagierKind::Delta(n) => {
            let factors: Vec<_> = (1..*n)
                .map(|k| (&lifted_cycle(n - 1, *n, *n) * &lifted_cycle(k, *n, *n)).one_minus())
                .collect();
            TwistedElement::product(*n, &factors)
        }
        ZagierKind::GammaBar(n) => {
            let factors: Vec<_> = (2..=*n).map(|k| lifted_cycle(1, k, *n).one_minus()).collect();
            TwistedElement::product(*n, &factors)
        }
        ZagierKind::Xi(n) => {
            let terms: Vec<_> = (1..*n)
                .map(|k| {
                    let m = monomial_product((k + 1..=*n).map(|l| LaurentMonomial::brace(k, l)));
                    &TwistedElement::monomial(*n, m, one).one_minus() * &lifted_cycle(1, k, *n)
                })
                .collect();
            TwistedElement::sum(*n, &terms)
        }
        ZagierKind::Eta(n) => {
            let terms: Vec<_> = (2..=*n)
                .map(|k| {
                    let suffix = monomial_product((k + 1..=*n).map(|l| LaurentMonomial::var(k, l)));
                    let prefix = monomial_product((1..k).map(|l| LaurentMonomial::brace(k, l)));
                    let coeff = &TwistedElement::monomial(*n, suffix, one)
                        * &TwistedElement::monomial(*n, prefix, one).one_minus();
                    &coeff * &TwistedElement::perm(cycle(k, *n, *n).inverse())
                })
                .collect();
            TwistedElement::sum(*n, &terms)
        }
    }
}

/// `γ̃_n` as the alternating sum `Σ_{k=1}^{n} (-1)^{n-k} Σ_{π ∈ S_{n,k}} (π⁻¹)~` over the
/// permutations with `π(1) < … < π(k) = n > … > π(n)`. Each term is the lift of
/// `π⁻¹`, not the inverse of `π̃`.
pub fn gamma_alternating(n: usize, cap: SizeCap) -> Result<TwistedElement> {
    let mut out = TwistedElement::zero(n);
    for p in johnson_trotter(n, cap)? {
        let images = p.images();
        let k = images.iter().position(|&v| v == n).expect("n is an image") + 1;
        let rising = images[..k].windows(2).all(|w| w[0] < w[1]);
        let falling = images[k - 1..].windows(2).all(|w| w[0] > w[1]);
        if rising && falling {
            let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
            out = out.add(&TwistedElement::lift(&p.inverse()).scale(Gauss::new(sign, 0)))?;
        }
    }
    Ok(out)
}
