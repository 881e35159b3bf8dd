//! Argument handling for the `quonlab` binary.
//!
//! Every command prints one JSON document on standard output. Exit codes: 0 on
//! success, 1 when a verification suite fails, 2 on bad arguments or input, 3 on
//! a singular matrix, 4 when the size cap is exceeded.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quonlab::numberop::{expansion, ExpansionMode};
use quonlab::params::{random_exact_qmatrix, random_qmatrix, seeded_rng, FromJsonPair, QMatrix};
use quonlab::perm::SizeCap;
use quonlab::scalar::{GaussRat, Scalar, ToJsonPair, C64};
use quonlab::twisted::{parse_kind, zagier};
use quonlab::verify::{run_all, run_suite, VerifyConfig, RADIUS};
use quonlab::gram::gram_weight;
use quonlab::QuonError;

#[derive(Debug, Parser)]
#[command(name = "quonlab", version, about = "Gram matrices and number operators for multiparameter quons")]
pub struct Cli {
    /// Parameter file `{"alphabet": [...], "q": {"i,j": [re, im]}}`. Without it a
    /// random hermitian matrix on the disc of radius 0.9 is drawn from `--seed`.
    #[arg(long = "q", global = true)]
    pub q_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Double, global = true)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Alphabet size of the random matrix used when `--q` is absent.
    #[arg(long, default_value_t = 3, global = true)]
    pub letters: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Double,
    Exact,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gram block of a weight, e.g. `113` or `1,1,3`.
    Gram { weight: String },
    /// Determinant of a Gram block as `[re, im]`.
    Det { weight: String },
    /// Inverse of a Gram block with its residual.
    Inv { weight: String },
    /// A named element of the twisted algebra, symbolic or specialized at a word.
    Zagier {
        kind: String,
        /// Degree, or a composition such as `2,1` for `alpha_comp`.
        n: String,
        #[arg(long)]
        word: Option<String>,
    },
    /// Normally ordered expansion of the number operator of a letter.
    NumberOp {
        k: String,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        reduced: bool,
    },
    /// Invariant suites; all of them unless `--suite` is given.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
}

/// Exit code and standard-output document of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
}

pub fn exit_code(e: &QuonError) -> i32 {
    match e {
        QuonError::Singular { .. } | QuonError::ZeroDivision => 3,
        QuonError::SizeCap { .. } => 4,
        _ => 2,
    }
}

fn failure(e: &QuonError) -> Outcome {
    Outcome {
        code: exit_code(e),
        output: json!({ "error": e.to_string() }),
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                code,
                output: json!({ "error": e.to_string() }),
            };
        }
    };
    let cap = SizeCap::from_env();
    if let Command::Verify { suite, samples } = &cli.command {
        return verify(suite.as_deref(), *samples, cli.seed, cap);
    }
    let result = match cli.mode {
        Mode::Double => load::<C64>(&cli, |seed| random_qmatrix(cli.letters, RADIUS, &mut seeded_rng(seed)))
            .and_then(|q| execute(&cli.command, &q, cap)),
        Mode::Exact => load::<GaussRat>(&cli, |seed| random_exact_qmatrix(cli.letters, 10, RADIUS, &mut seeded_rng(seed)))
            .and_then(|q| execute(&cli.command, &q, cap)),
    };
    match result {
        Ok(output) => Outcome { code: 0, output },
        Err(e) => failure(&e),
    }
}

fn load<S: FromJsonPair>(cli: &Cli, random: impl FnOnce(u64) -> QMatrix<S>) -> quonlab::Result<QMatrix<S>> {
    let q = match &cli.q_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| QuonError::Invalid(format!("{}: {e}", path.display())))?;
            QMatrix::from_json_str(&text)?
        }
        None => random(cli.seed),
    };
    q.check(false)?;
    Ok(q)
}

fn execute<S: Scalar + ToJsonPair>(command: &Command, q: &QMatrix<S>, cap: SizeCap) -> quonlab::Result<Value> {
    match command {
        Command::Gram { weight } => Ok(gram_weight(&q.parse_word(weight)?.weight(), q, cap)?.to_json(q)),
        Command::Det { weight } => {
            let block = gram_weight(&q.parse_word(weight)?.weight(), q, cap)?;
            Ok(block.determinant().to_json_pair())
        }
        Command::Inv { weight } => {
            let block = gram_weight(&q.parse_word(weight)?.weight(), q, cap)?;
            Ok(block.invert()?.to_json(q))
        }
        Command::Zagier { kind, n, word } => {
            let kind = parse_kind(kind, n)?;
            let element = zagier(&kind, cap)?;
            match word {
                None => Ok(json!({ "kind": kind.to_string(), "terms": element.to_json() })),
                Some(w) => {
                    let word = q.parse_word(w)?;
                    let s = element.specialize(q, &word, cap)?;
                    Ok(json!({
                        "kind": kind.to_string(),
                        "word": q.word_label(&word),
                        "perms": s.perms().iter().map(|p| p.one_line()).collect::<Vec<_>>(),
                        "matrix": s.matrix().to_json(),
                    }))
                }
            }
        }
        Command::NumberOp { k, max_degree, reduced } => {
            let mode = if *reduced { ExpansionMode::Reduced } else { ExpansionMode::Expanded };
            let nk = expansion(q.letter(k)?, q, *max_degree, mode, cap)?;
            Ok(nk.to_json(q))
        }
        Command::Verify { .. } => unreachable!("handled before loading parameters"),
    }
}

fn verify(suite: Option<&str>, samples: usize, seed: u64, cap: SizeCap) -> Outcome {
    let cfg = VerifyConfig { seed, samples, cap };
    let reports = match suite {
        Some(name) => match run_suite(name, &cfg) {
            Ok(r) => vec![r],
            Err(e) => return failure(&e),
        },
        None => run_all(&cfg),
    };
    let passed = reports.iter().all(|r| r.passed());
    Outcome {
        code: if passed { 0 } else { 1 },
        output: json!({
            "seed": seed,
            "samples": samples,
            "passed": passed,
            "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        }),
    }
}
