//! Batch command-line surface over the file formats.
//!
//! One invocation runs one subcommand. Exit codes: 0 on success or a
//! verified report, 1 when a verification fails (the report is still
//! printed), 2 on parse or validation errors, 3 when a search space
//! exceeds its cap. Diagnostics go to stderr, reports to stdout. Output is
//! never colored, so `NO_COLOR` is honored trivially.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ColorChoice, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::construct::{
    add_parameter, cokleisli, naturality_square, parameterize, passing_morphism, ConstructError,
};
use crate::core::{DecoratedSpec, SortName};
use crate::dsl::{parse_model, parse_morphism, parse_spec, print_model, print_morphism, print_spec, DslError};
use crate::semantics::{
    check_terminality, models_extending, morphisms_semantically_equal, terminal_extension,
    verify_adding_over, verify_exact_parameterization, verify_passing_over, CheckRecord,
    CheckStatus, FinModel, SemanticsError, VerifyReport, DEFAULT_TABLE_CAP,
};

/// Default bound for carriers of sorts without an explicit `--bound`.
pub const DEFAULT_CARRIER_BOUND: usize = 4;

#[derive(Parser, Debug)]
#[command(
    name = "eqth",
    about = "Decorated equational specifications: parameterization passes and finite-model verification",
    version,
    color = ColorChoice::Never
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_bound(s: &str) -> Result<(String, usize), String> {
    let (sort, size) = s
        .split_once('=')
        .ok_or_else(|| format!("expected SORT=SIZE, found `{}`", s))?;
    let size: usize = size
        .parse()
        .map_err(|_| format!("`{}` is not a carrier size", size))?;
    Ok((sort.to_owned(), size))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a specification file.
    Check {
        spec: PathBuf,
    },
    /// Add a parameter sort threaded through every non-pure op.
    Param {
        spec: PathBuf,
        /// Output .eqth file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Adjoin the parameter constant to a parameterized specification.
    Addconst {
        spec: PathBuf,
        /// Output .eqth file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Build the coKleisli presentation of a parameterized specification.
    Cokleisli {
        spec: PathBuf,
        /// Output .eqth file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Emit the parameter passing morphism of a specification.
    Passing {
        spec: PathBuf,
        /// Output .mor file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Enumerate the finite models of a specification extending a base.
    Models {
        spec: PathBuf,
        /// Partial base model fixing part of the interpretation.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Carrier bound per sort, e.g. --bound A=2 (default 4).
        #[arg(long = "bound", value_parser = parse_bound)]
        bounds: Vec<(String, usize)>,
        /// Cap on candidate tables before refusing to search.
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        cap: u64,
    },
    /// Compute the terminal extension of a base model of the pure part.
    Terminal {
        spec: PathBuf,
        /// Base model of the pure sub-specification (total on it).
        #[arg(long)]
        base: PathBuf,
        /// Output .model file.
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        cap: u64,
    },
    /// Check the model-level bijections and laws.
    Verify {
        spec: PathBuf,
        /// Partial base model, required for exact and terminality.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Which law to check.
        #[arg(long, value_enum)]
        which: WhichCheck,
        /// Morphism file for the naturality check.
        #[arg(long)]
        sigma: Option<PathBuf>,
        /// Target specification of the naturality morphism.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Carrier bound per sort, e.g. --bound A=2 (default 4).
        #[arg(long = "bound", value_parser = parse_bound)]
        bounds: Vec<(String, usize)>,
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        cap: u64,
        /// Emit the machine-readable report instead of text lines.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WhichCheck {
    Adding,
    Passing,
    Exact,
    Terminality,
    Naturality,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{path}: {err}")]
    Parse { path: String, err: DslError },
    #[error("{0}")]
    Construct(#[from] ConstructError),
    #[error("{0}")]
    Semantics(#[from] SemanticsError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Semantics(SemanticsError::SearchSpaceOverflow { .. }) => 3,
            CliError::Parse { err: DslError::Semantics(SemanticsError::SearchSpaceOverflow { .. }), .. } => 3,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    Ok(crate::dsl::SourceFile::load(path)
        .map_err(|err| CliError::Io {
            path: path.display().to_string(),
            err,
        })?
        .text)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|err| CliError::Io {
        path: path.display().to_string(),
        err,
    })
}

fn load_spec(path: &Path) -> Result<DecoratedSpec, CliError> {
    parse_spec(&read(path)?).map_err(|err| CliError::Parse {
        path: path.display().to_string(),
        err,
    })
}

fn load_model(path: &Path, spec: &DecoratedSpec) -> Result<FinModel, CliError> {
    parse_model(&read(path)?, spec).map_err(|err| CliError::Parse {
        path: path.display().to_string(),
        err,
    })
}

/// Bounds for every sort of `spec`: the explicit flags, with the default
/// carrier bound filling the gaps.
fn bound_map(spec: &DecoratedSpec, flags: &[(String, usize)]) -> BTreeMap<SortName, usize> {
    let mut map: BTreeMap<SortName, usize> = spec
        .sorts
        .iter()
        .map(|s| (s.clone(), DEFAULT_CARRIER_BOUND))
        .collect();
    for (s, n) in flags {
        map.insert(SortName::new(s), *n);
    }
    map
}

/// Runs one parsed invocation and returns its exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    }
}

fn report_exit(report: &VerifyReport, json: bool) -> Result<i32, CliError> {
    if json {
        let text = serde_json::to_string_pretty(report)
            .map_err(|e| CliError::Usage(format!("cannot serialize report: {}", e)))?;
        println!("{}", text);
    } else {
        print!("{}", report);
        let passed = report
            .records
            .iter()
            .filter(|r| r.status == CheckStatus::Pass)
            .count();
        println!("verified: {}/{} checks passed", passed, report.records.len());
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Check { spec } => {
            load_spec(&spec)?;
            Ok(0)
        }
        Command::Param { spec, out } => {
            let pr = parameterize(&load_spec(&spec)?)?;
            write(&out, &print_spec(&pr.param_spec))?;
            Ok(0)
        }
        Command::Addconst { spec, out } => {
            let sa = add_parameter(&load_spec(&spec)?)?;
            write(&out, &print_spec(&sa))?;
            Ok(0)
        }
        Command::Cokleisli { spec, out } => {
            let kl = cokleisli(&load_spec(&spec)?)?;
            write(&out, &print_spec(&kl))?;
            Ok(0)
        }
        Command::Passing { spec, out } => {
            let j = passing_morphism(&load_spec(&spec)?)?;
            write(&out, &print_morphism(&j))?;
            Ok(0)
        }
        Command::Models { spec, base, bounds, cap } => {
            let spec = load_spec(&spec)?;
            let base = base.map(|p| load_model(&p, &spec)).transpose()?;
            let bounds = bound_map(&spec, &bounds);
            let models = models_extending(&spec, base.as_ref(), &bounds, cap)?;
            println!("{} models of {}", models.len(), spec.name);
            for m in &models {
                println!();
                print!("{}", print_model(m));
            }
            Ok(0)
        }
        Command::Terminal { spec, base, out, cap } => {
            let spec = load_spec(&spec)?;
            let pr = parameterize(&spec)?;
            let base = load_model(&base, &spec)?;
            let terminal = terminal_extension(&pr, &base, cap)?;
            write(&out, &print_model(&terminal))?;
            let a_len = terminal
                .carrier_len(pr.param_sort())
                .map_err(CliError::Semantics)?;
            println!("terminal parameter carrier has {} elements", a_len);
            Ok(0)
        }
        Command::Verify { spec, base, which, sigma, target, bounds, cap, json } => {
            let spec = load_spec(&spec)?;
            let base_model = base.map(|p| load_model(&p, &spec)).transpose()?;
            let report = match which {
                WhichCheck::Adding => {
                    let pr = parameterize(&spec)?;
                    let bounds = bound_map(&pr.param_spec, &bounds);
                    verify_adding_over(&spec, base_model.as_ref(), &bounds, cap)?
                }
                WhichCheck::Passing => {
                    let pr = parameterize(&spec)?;
                    let bounds = bound_map(&pr.param_spec, &bounds);
                    verify_passing_over(&spec, base_model.as_ref(), &bounds, cap)?
                }
                WhichCheck::Exact => {
                    let base = base_model
                        .as_ref()
                        .ok_or_else(|| CliError::Usage("--which exact needs --base".into()))?;
                    let pr = parameterize(&spec)?;
                    verify_exact_parameterization(&spec, base, &pr, cap)?
                }
                WhichCheck::Terminality => {
                    let base = base_model
                        .as_ref()
                        .ok_or_else(|| CliError::Usage("--which terminality needs --base".into()))?;
                    let pr = parameterize(&spec)?;
                    let terminal = terminal_extension(&pr, base, cap)?;
                    let bounds = bound_map(&pr.param_spec, &bounds);
                    let t = check_terminality(&terminal, &pr, base, &bounds, cap)?;
                    let mut detail = format!(
                        "{} extensions checked, {} witnesses",
                        t.extensions_checked,
                        t.witnesses.len()
                    );
                    if !t.failures.is_empty() {
                        detail.push_str("; failures: ");
                        detail.push_str(&t.failures.join("; "));
                    }
                    let mut report = VerifyReport::default();
                    report.push(CheckRecord::plain("terminality", t.holds, detail));
                    report
                }
                WhichCheck::Naturality => {
                    let sigma_path = sigma
                        .ok_or_else(|| CliError::Usage("--which naturality needs --sigma".into()))?;
                    let target_path = target
                        .ok_or_else(|| CliError::Usage("--which naturality needs --target".into()))?;
                    let target = load_spec(&target_path)?;
                    let sigma = parse_morphism(&read(&sigma_path)?, &spec, &target).map_err(|err| {
                        CliError::Parse {
                            path: sigma_path.display().to_string(),
                            err,
                        }
                    })?;
                    let (left, right) = naturality_square(&sigma)?;
                    let syntactic = left.generator_equal(&right);
                    let bounds = bound_map(&left.target, &bounds);
                    let semantic = morphisms_semantically_equal(&left, &right, &bounds, cap)?;
                    let mut report = VerifyReport::default();
                    report.push(CheckRecord::plain(
                        "naturality(syntactic)",
                        syntactic,
                        format!("composites agree on the generators of `{}`", spec.name),
                    ));
                    report.push(CheckRecord::plain(
                        "naturality(semantic)",
                        semantic,
                        "reducts agree on every bounded model",
                    ));
                    report
                }
            };
            report_exit(&report, json)
        }
    }
}
