//! Command-line driver.
//!
//! Exit codes: 0 when everything passes, 2 when an axiom check, the
//! feasibility stage, or verification fails (the witness goes to
//! stdout as JSON), 3 on parse, precondition, richness, or cap errors.

use crate::actions::parse_action;
use crate::axioms::{check_canc, check_cent, check_ssc, check_trans, derive_consequences};
use crate::io::{
    read_json, representation_file, to_json_string, write_json, AxiomRunFile, IoError, MenuFile,
    ModelFile, PrefsFile,
};
use crate::logic::Signature;
use crate::pipeline::{generate_fixture, roundtrip_many, RoundtripConfig};
use crate::preferences::{PrefError, PreferenceRelation, SEURepresentation};
use crate::rat::rat_to_string;
use crate::representation::{
    build_representation, verify_representation, PairSample, RepError,
};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dorep",
    about = "Underspecified do(φ) actions: axiom checking and expected-utility representation synthesis",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PrefsInput {
    /// Preference file (JSON: partition classes or an embedded scored model).
    #[arg(long)]
    pub prefs: PathBuf,
    /// Menu file (JSON: props + formulas); must agree with the
    /// preference file's menu when both are present.
    #[arg(long)]
    pub menu: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the centering, specificity, transitivity, and cancellation
    /// checks and print a JSON report.
    CheckAxioms {
        #[command(flatten)]
        input: PrefsInput,
        /// Largest cancellation tuple length to sample.
        #[arg(long = "canc-n", default_value_t = 3)]
        canc_n: u32,
        /// Cancellation tuples to sample.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include witnesses in the report on failure.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        emit_witnesses: bool,
    },
    /// Synthesize an expected-utility representation and verify it.
    Synthesize {
        #[command(flatten)]
        input: PrefsInput,
        /// Output path for the representation JSON.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Act-space enumeration cap.
        #[arg(long, default_value_t = crate::actions::DEFAULT_ACT_SPACE_CAP)]
        cap: u64,
        /// Verification pairs when the act space is too large to check
        /// exhaustively.
        #[arg(long, default_value_t = 10_000)]
        pairs: u64,
    },
    /// Interpret an action in a model and print the state map, plus
    /// exact expected utility when the model carries pi and u.
    Evaluate {
        /// Model file (JSON).
        #[arg(long)]
        model: PathBuf,
        /// Action expression, e.g. "if p then do(q); do(!p)".
        #[arg(long)]
        act: String,
    },
    /// Emit a seeded fixture: model, menu, and scored preference files.
    Generate {
        /// Comma-separated proposition names, e.g. "p,q".
        #[arg(long)]
        props: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate, check, synthesize, and verify across a seed range.
    Roundtrip {
        #[arg(long)]
        props: String,
        /// Inclusive seed range, e.g. "1..100", or a single seed.
        #[arg(long)]
        seeds: String,
        #[arg(long, default_value_t = 10_000)]
        pairs: u64,
        #[arg(long, default_value_t = crate::actions::DEFAULT_ACT_SPACE_CAP)]
        cap: u64,
        /// Cancellation budget per seed (0 skips the search).
        #[arg(long = "canc-budget", default_value_t = 0)]
        canc_budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_PRECONDITION
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Pref(#[from] PrefError),
    #[error("{0}")]
    Other(String),
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> CliError {
        CliError::Other(e.to_string())
    }
}

fn parse_props(text: &str) -> Result<Signature, CliError> {
    Signature::new(text.split(',').map(|s| s.trim().to_string()))
        .map_err(|e| CliError::Other(e.to_string()))
}

/// "A..B" inclusive, or a single seed.
fn parse_seeds(text: &str) -> Result<(u64, u64), CliError> {
    if let Some((a, b)) = text.split_once("..") {
        let lo = a.trim().parse::<u64>();
        let hi = b.trim().parse::<u64>();
        if let (Ok(lo), Ok(hi)) = (lo, hi) {
            if lo <= hi {
                return Ok((lo, hi));
            }
        }
        return Err(CliError::Other(format!("invalid seed range {text:?}")));
    }
    let seed = text
        .trim()
        .parse::<u64>()
        .map_err(|_| CliError::Other(format!("invalid seed {text:?}")))?;
    Ok((seed, seed))
}

fn load_prefs(input: &PrefsInput) -> Result<(Signature, crate::actions::Menu, PreferenceRelation), CliError> {
    let external = match &input.menu {
        Some(path) => {
            let menu_file: MenuFile = read_json(path)?;
            Some(menu_file.load()?)
        }
        None => None,
    };
    let prefs_file: PrefsFile = read_json(&input.prefs)?;
    Ok(prefs_file.load(external)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::CheckAxioms {
            input,
            canc_n,
            budget,
            seed,
            out,
            emit_witnesses,
        } => {
            let (_, menu, pr) = load_prefs(&input)?;
            let mut reports = vec![
                check_cent(&pr, &menu)?,
                check_ssc(&pr, &menu)?,
                check_trans(&pr, &menu)?,
                check_canc(&pr, &menu, canc_n, budget, seed)?,
                derive_consequences(&pr, &menu, 2_000, seed)?,
            ];
            if !emit_witnesses {
                for r in &mut reports {
                    r.witness = None;
                }
            }
            let all_pass = reports.iter().all(|r| r.pass);
            let file = AxiomRunFile {
                seed,
                canc_max_n: canc_n,
                canc_budget: budget,
                reports,
                all_pass,
            };
            emit(&out, &to_json_string(&file)?)?;
            Ok(if all_pass { EXIT_OK } else { EXIT_FAIL })
        }

        Command::Synthesize {
            input,
            out,
            seed,
            cap,
            pairs,
        } => {
            let (_, menu, pr) = load_prefs(&input)?;
            let synthesis = match build_representation(&pr, &menu, cap) {
                Ok(s) => s,
                Err(RepError::Axiom(report)) => {
                    let body = serde_json::json!({
                        "stage": report.axiom,
                        "report": report,
                        "seed": seed,
                    });
                    println!("{}", serde_json::to_string_pretty(&body).map_err(IoError::from)?);
                    return Ok(EXIT_FAIL);
                }
                Err(RepError::Infeasible(report)) => {
                    let body = serde_json::json!({
                        "stage": "lp",
                        "certificate": *report,
                        "seed": seed,
                    });
                    println!("{}", serde_json::to_string_pretty(&body).map_err(IoError::from)?);
                    return Ok(EXIT_FAIL);
                }
                Err(other) => return Err(other.into()),
            };
            let outcome = verify_representation(
                &synthesis.representation,
                &pr,
                &menu,
                PairSample::Auto {
                    threshold: 300,
                    samples: pairs,
                    seed,
                },
            )?;
            if let Some((a, b)) = &outcome.witness {
                let body = serde_json::json!({
                    "stage": "verify",
                    "witness": { "left": a, "right": b },
                    "seed": seed,
                });
                println!("{}", serde_json::to_string_pretty(&body).map_err(IoError::from)?);
                return Ok(EXIT_FAIL);
            }
            let file = representation_file(
                &synthesis,
                Some(seed),
                outcome.checked_pairs,
                outcome.exhaustive,
            );
            write_json(&out, &file)?;
            println!(
                "representation written to {} ({} states, {} pairs verified)",
                out.display(),
                file.states.len(),
                outcome.checked_pairs
            );
            Ok(EXIT_OK)
        }

        Command::Evaluate { model, act } => {
            let model_file: ModelFile = read_json(&model)?;
            let loaded = model_file.load()?;
            let sm = loaded.sm;
            let sig = sm.menu().sig().clone();
            let action = parse_action(&act, &sig).map_err(|e| CliError::Other(e.to_string()))?;
            let map = action
                .interpret(&sm)
                .map_err(|e| CliError::Other(e.to_string()))?;
            println!("action: {}", action.display(&sig));
            for (w, to) in map.iter().enumerate() {
                println!(
                    "{} -> {}",
                    sm.model().state_name(w),
                    sm.model().state_name(*to)
                );
            }
            if let (Some(pi), Some(u)) = (loaded.pi, loaded.u) {
                let rep = SEURepresentation::new(sm, pi, u)?;
                let eu = rep.expected_utility_of_map(&map);
                println!("expected utility: {}", rat_to_string(&eu));
            }
            Ok(EXIT_OK)
        }

        Command::Generate { props, seed, out } => {
            let sig = parse_props(&props)?;
            let fixture = generate_fixture(&sig, seed);
            std::fs::create_dir_all(&out).map_err(IoError::from)?;
            let model_file = ModelFile::from_parts(
                fixture.rep.selection_model(),
                Some(fixture.rep.pi()),
                Some(fixture.rep.u()),
            );
            let menu_file = MenuFile::from_menu(&fixture.menu);
            let prefs_file = PrefsFile {
                props: Some(sig.props().to_vec()),
                menu: menu_file.formulas.clone(),
                classes: None,
                model: Some(model_file.clone()),
            };
            write_json(&out.join("model.json"), &model_file)?;
            write_json(&out.join("menu.json"), &menu_file)?;
            write_json(&out.join("prefs.json"), &prefs_file)?;
            println!(
                "fixture for seed {seed} written to {} (model.json, menu.json, prefs.json)",
                out.display()
            );
            Ok(EXIT_OK)
        }

        Command::Roundtrip {
            props,
            seeds,
            pairs,
            cap,
            canc_budget,
            out,
        } => {
            let sig = parse_props(&props)?;
            let (lo, hi) = parse_seeds(&seeds)?;
            let config = RoundtripConfig {
                pairs,
                act_space_cap: cap,
                canc_budget,
                canc_max_n: 3,
            };
            let summary = roundtrip_many(&sig, lo..=hi, &config, &seeds)?;
            let all = summary.passed == summary.total;
            emit(&out, &to_json_string(&summary)?)?;
            Ok(if all { EXIT_OK } else { EXIT_FAIL })
        }
    }
}
