//! Command surface: spec documents in, reports out.

pub mod corpus;
pub mod report;
pub mod run;
pub mod spec;

pub use report::{emit, Exit, Format, Record, Report};
pub use run::{execute, Loader, FsLoader};
pub use spec::{emit_doc, parse_doc, parse_spec, Spec, SpecDoc, SpecError, SpecErrors};

use crate::settings::Settings;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug, Clone)]
#[command(name = "endok", version, about = "Exact checks of K0 splitting formulas for finite-dimensional algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
    /// Resolution length bound (default: twice the algebra dimension).
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    #[arg(long, global = true, default_value_t = 10)]
    pub tor_bound: usize,
    #[arg(long, global = true, default_value_t = 64)]
    pub retries: usize,
    #[arg(long, global = true, env = "ENDOK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Candidate idempotents the stratification search may try.
    #[arg(long, global = true, default_value_t = 4096)]
    pub search_budget: usize,
}

impl GlobalArgs {
    pub fn settings(&self) -> Settings {
        Settings { bound: self.bound, tor_bound: self.tor_bound, retries: self.retries, seed: self.seed, search_budget: self.search_budget }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Spec documents.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Algebra to act on (default: the document's `main`, else every algebra).
    #[arg(long)]
    pub algebra: Option<String>,
    /// Work over the opposite algebra, i.e. with right modules.
    #[arg(long)]
    pub opposite: bool,
}

#[derive(Args, Debug, Clone)]
pub struct IdealSel {
    /// Idempotent generating the ideal, e.g. `e1` or `e1 + 1/2*e2`.
    #[arg(long = "e", conflicts_with = "ideal")]
    pub e: Option<String>,
    /// Generator of the two-sided ideal; repeat for several.
    #[arg(long)]
    pub ideal: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Property {
    Covariant,
    XCovariant,
    Contravariant,
    YContravariant,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Summaries of every algebra, module, map and family instance.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Rank of K0 with the Cartan matrix.
    K0(Target),
    /// Hypotheses of the ideal splitting formulas for one ideal.
    CheckIdeal {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        ideal: IdealSel,
    },
    /// Covariance properties of a module map.
    CheckCovariant {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Map name from the document.
        #[arg(long)]
        map: String,
        #[arg(long, value_enum, default_value = "covariant")]
        property: Property,
    },
    /// Tor between a right module and a left module.
    Tor {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Right module (a module over the opposite algebra).
        #[arg(long)]
        left: String,
        /// Left module.
        #[arg(long)]
        right: String,
    },
    /// Quasi-heredity and the longest stratifying chain.
    Stratify(Target),
    /// One splitting formula at the level of K0 ranks.
    Verify {
        #[command(flatten)]
        target: Target,
        /// Statement id, e.g. `ideal-split-projective`, `covariant-split`,
        /// `triangular` or `stratified`.
        #[arg(long)]
        thm: String,
        #[command(flatten)]
        ideal: IdealSel,
        /// Map name from the document, for the map statements.
        #[arg(long)]
        map: Option<String>,
    },
    /// Structure-constant spec of a resolved algebra.
    Construct(Target),
    /// Golden suite; the built-in one unless a directory is given.
    Corpus {
        dir: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::K0(_) => "k0",
            Command::CheckIdeal { .. } => "check-ideal",
            Command::CheckCovariant { .. } => "check-covariant",
            Command::Tor { .. } => "tor",
            Command::Stratify(_) => "stratify",
            Command::Verify { .. } => "verify",
            Command::Construct(_) => "construct",
            Command::Corpus { .. } => "corpus",
        }
    }
}

/// Rendered output of one invocation.
pub struct Outcome {
    pub text: String,
    pub code: i32,
    /// Usage errors go to stderr, reports to stdout.
    pub to_stderr: bool,
}

/// Parses arguments, runs, and renders the report.
pub fn main_with<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let code = if usage { Exit::Input.code() } else { 0 };
            return Outcome { text: e.render().to_string(), code, to_stderr: usage };
        }
    };
    let report = execute(&cli.command, cli.global.settings(), &FsLoader);
    Outcome { text: emit(&report, cli.global.format), code: report.exit.code(), to_stderr: false }
}
