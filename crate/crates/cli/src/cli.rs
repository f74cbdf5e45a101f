//! Command-line front end. [`run_cli`] never exits the process; it returns
//! the exit code so tests can drive it in-process.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use ctprof_core::catalog::Competency;
use ctprof_core::corpus::{load_corpus, CorpusError, TaxonomyKind};
use ctprof_core::designer::{DesignQuery, DEFAULT_MAX_SOLUTIONS};
use ctprof_core::profile::PartialProfile;
use ctprof_core::ruleset::{default_ruleset, load_ruleset, Ruleset};
use ctprof_core::schema::to_canonical_json;

use crate::api::{self, ApiError};
use crate::render;
use crate::server;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const RULESET_ENV: &str = "CTPROF_RULESET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Characteristics,
    Competencies,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "ctprof",
    version,
    about = "Profile computational thinking problems against a competency ruleset"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a descriptor or profile document
    Validate { path: PathBuf },
    /// Report which competencies a descriptor or profile can develop
    Analyze {
        path: PathBuf,
        #[arg(long)]
        ruleset: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Print the characteristic profile derived from a descriptor
    Derive { path: PathBuf },
    /// Compare two descriptors or profiles
    Diff {
        before: PathBuf,
        after: PathBuf,
        #[arg(long)]
        ruleset: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Find profiles that develop the given competencies
    Design {
        /// Competencies to develop, comma separated
        #[arg(long, value_delimiter = ',', required = true, num_args = 1)]
        develop: Vec<String>,
        /// Competencies that must stay blocked, comma separated
        #[arg(long, value_delimiter = ',')]
        avoid: Vec<String>,
        /// Fix one dimension, as `dimension=value`
        #[arg(long = "lock", value_name = "DIM=VALUE")]
        locks: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_SOLUTIONS)]
        max_solutions: usize,
        #[arg(long)]
        ruleset: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Aggregate a directory of descriptors into taxonomy tables
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        collapse_groups: bool,
        #[arg(long, value_enum, default_value = "both")]
        kind: KindArg,
        #[arg(long)]
        ruleset: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Run the local HTTP service
    Serve {
        #[arg(long, default_value_t = server::DEFAULT_PORT)]
        port: u16,
        #[arg(long)]
        static_dir: Option<PathBuf>,
        #[arg(long)]
        ruleset: Option<PathBuf>,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A failure with its exit code and diagnostic text.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Self {
        match &e {
            ApiError::Syntax(_) | ApiError::NotFound(_) => Failure::io(e.to_string()),
            ApiError::Invalid { message, issues } => {
                let mut text = message.clone();
                for issue in issues {
                    text.push_str(&format!("\n  {issue}"));
                }
                Failure::invalid(text)
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

fn ruleset(flag: Option<&Path>, env: Option<&str>) -> Result<Arc<Ruleset>, Failure> {
    let path = match (flag, env) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(e)) if !e.is_empty() => PathBuf::from(e),
        _ => return Ok(Arc::new(default_ruleset().clone())),
    };
    let text = read(&path)?;
    load_ruleset(&text)
        .map(Arc::new)
        .map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn competencies(names: &[String], flag: &str) -> Result<BTreeSet<Competency>, Failure> {
    names
        .iter()
        .map(|n| n.trim())
        .filter(|n| !n.is_empty())
        .map(|n| {
            n.parse::<Competency>()
                .map_err(|e| Failure::io(format!("--{flag}: {e}")))
        })
        .collect()
}

fn locks(args: &[String]) -> Result<PartialProfile, Failure> {
    let mut locked = PartialProfile::default();
    for arg in args {
        let (dim, value) = arg
            .split_once('=')
            .ok_or_else(|| Failure::io(format!("--lock `{arg}`: expected dimension=value")))?;
        locked
            .set_text(dim.trim(), value.trim())
            .map_err(|e| Failure::io(format!("--lock `{arg}`: {e}")))?;
    }
    Ok(locked)
}

fn kinds(kind: KindArg) -> Vec<TaxonomyKind> {
    match kind {
        KindArg::Characteristics => vec![TaxonomyKind::Characteristics],
        KindArg::Competencies => vec![TaxonomyKind::Competencies],
        KindArg::Both => vec![TaxonomyKind::Characteristics, TaxonomyKind::Competencies],
    }
}

fn corpus_failure(e: CorpusError) -> Failure {
    match e {
        CorpusError::Invalid { .. } => Failure::invalid(e.to_string()),
        _ => Failure::io(e.to_string()),
    }
}

fn execute(
    command: Command,
    env_ruleset: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let mut emit = |text: &str| {
        out.write_all(text.as_bytes())
            .map_err(|e| Failure::io(format!("cannot write output: {e}")))
    };
    match command {
        Command::Validate { path } => {
            let doc = api::read_document(&read(&path)?)?;
            api::profile_of(&doc)?;
            emit(&format!("{}: valid\n", path.display()))?;
        }
        Command::Analyze {
            path,
            ruleset: flag,
            format,
        } => {
            let rules = ruleset(flag.as_deref(), env_ruleset)?;
            let report = api::analyze_text(&read(&path)?, &rules)?;
            emit(&match format {
                Format::Md => render::render_report_markdown(&report),
                Format::Json => report.to_json(),
            })?;
        }
        Command::Derive { path } => {
            emit(&api::derive_text(&read(&path)?)?.to_json())?;
        }
        Command::Diff {
            before,
            after,
            ruleset: flag,
            format,
        } => {
            let rules = ruleset(flag.as_deref(), env_ruleset)?;
            let diff = api::diff_texts(&read(&before)?, &read(&after)?, &rules)?;
            emit(&match format {
                Format::Md => render::render_diff_markdown(&diff),
                Format::Json => to_canonical_json(&diff),
            })?;
        }
        Command::Design {
            develop,
            avoid,
            locks: lock_args,
            max_solutions,
            ruleset: flag,
            format,
        } => {
            let rules = ruleset(flag.as_deref(), env_ruleset)?;
            let query = DesignQuery {
                develop: competencies(&develop, "develop")?,
                avoid: competencies(&avoid, "avoid")?,
                locked: locks(&lock_args)?,
                max_solutions,
            };
            query.check().map_err(|e| Failure::invalid(e.to_string()))?;
            let value = serde_json::to_value(&query).expect("in-memory serialization cannot fail");
            let solution = api::design_value(&value, &rules)?;
            emit(&match format {
                Format::Md => render::render_solution_markdown(&solution),
                Format::Json => solution.to_json(),
            })?;
            if !solution.feasible {
                let mut text = String::from("design is infeasible");
                for c in &solution.conflicts {
                    text.push_str(&format!("\n  {}", c.explanation));
                }
                return Err(Failure {
                    code: EXIT_INFEASIBLE,
                    message: text,
                });
            }
        }
        Command::Corpus {
            dir,
            collapse_groups,
            kind,
            ruleset: flag,
            format,
        } => {
            let rules = ruleset(flag.as_deref(), env_ruleset)?;
            let corpus = load_corpus(&dir).map_err(corpus_failure)?;
            let tables: Vec<_> = kinds(kind)
                .into_iter()
                .map(|k| api::taxonomy(&corpus, &rules, k, collapse_groups))
                .collect();
            let text = match (format, tables.as_slice()) {
                (Format::Json, [one]) => one.to_json(),
                (Format::Json, many) => {
                    let map: serde_json::Map<String, serde_json::Value> = many
                        .iter()
                        .map(|t| {
                            (
                                t.kind.to_string(),
                                serde_json::to_value(t)
                                    .expect("in-memory serialization cannot fail"),
                            )
                        })
                        .collect();
                    to_canonical_json(&map)
                }
                (Format::Md, tables) => tables
                    .iter()
                    .map(render::render_taxonomy_markdown)
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(&text)?;
        }
        Command::Serve {
            port,
            static_dir,
            ruleset: flag,
        } => {
            let rules = ruleset(flag.as_deref(), env_ruleset)?;
            let state = server::AppState {
                rules,
                corpus: Arc::new(ctprof_core::corpus::bundled_corpus().clone()),
            };
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| Failure::io(format!("cannot start runtime: {e}")))?;
            runtime
                .block_on(async {
                    let listener = server::bind(port).await?;
                    let _ = writeln!(err, "serving on http://127.0.0.1:{port}/");
                    server::serve(listener, server::router(state, static_dir)).await
                })
                .map_err(|e| Failure::io(e.to_string()))?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs one invocation. `args` excludes the program name. `env_ruleset` is
/// the value of `CTPROF_RULESET`, if set.
pub fn run_with_env<I, S>(
    args: I,
    env_ruleset: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv =
        std::iter::once(std::ffi::OsString::from("ctprof")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_IO
                }
            };
        }
    };
    match execute(cli.command, env_ruleset, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// [`run_with_env`] reading `CTPROF_RULESET` from the process environment.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(RULESET_ENV).ok();
    run_with_env(args, env.as_deref(), out, err)
}

/// Runs with captured output and no environment override.
pub fn run_captured<I, S>(args: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let exit_code = run_with_env(args, None, &mut out, &mut err);
    CliOutput {
        exit_code,
        stdout: String::from_utf8_lossy(&out).into_owned(),
        stderr: String::from_utf8_lossy(&err).into_owned(),
    }
}
