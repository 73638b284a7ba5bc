//! Command-line surface: every subcommand and flag.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use lexiprec::experiments::{Method, SigTest};
use lexiprec::report::ReportFormat;

/// Best-case ranking evaluation: recall-level metrics, lexicographic
/// precision preferences, tie analysis, and significance testing.
#[derive(Debug, Parser)]
#[command(name = "lexiprec", version, subcommand_required = true, arg_required_else_help = true)]
pub struct Cli {
    /// Worker threads for parallel sections; defaults to the available
    /// parallelism. Results never depend on this value.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-topic recall-level metrics for each run.
    Eval(EvalArgs),
    /// Pairwise preference between two runs, topic by topic.
    Compare(CompareArgs),
    /// Tie census over all run pairs: headline rates, rates by level
    /// and by first relevant position, and the decisive-level
    /// distribution.
    Census(CensusArgs),
    /// Agreement analyses: masked-prefix prediction, or agreement with
    /// the full data under label or query removal.
    Agreement(AgreementArgs),
    /// Emit a degraded qrels file or a reduced topic list.
    Degrade(DegradeArgs),
    /// Significance tests over all run pairs, with the share of pairs
    /// each method distinguishes.
    Significance(SignificanceArgs),
    /// Correlation and regression structure across recall levels.
    Backoff(BackoffArgs),
    /// Closed-form combinatorial curves, optionally cross-checked
    /// against independent computations.
    Theory(TheoryArgs),
    /// Generate a synthetic benchmark: a qrels file plus a ladder of
    /// runs of increasing quality.
    Synth(SynthArgs),
}

/// Input files shared by the run-consuming subcommands.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Relevance judgments in the standard qrels format:
    /// `topic iteration document grade`, whitespace separated.
    #[arg(long, value_name = "FILE")]
    pub qrels: PathBuf,

    /// Run files, or directories of run files, in the standard
    /// six-column submission format:
    /// `topic Q0 document rank score tag`. Directory expansion skips
    /// the --qrels file, so runs may live next to their judgments.
    #[arg(long, value_name = "PATH", num_args = 1.., required = true)]
    pub runs: Vec<PathBuf>,

    /// Smallest grade treated as relevant.
    #[arg(long, value_name = "GRADE", default_value_t = 1)]
    pub binarize_threshold: u32,
}

/// Report destination and formatting.
#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,

    /// Destination file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Decimal places for floating-point values (at least 1).
    #[arg(long, value_name = "N", default_value_t = 4)]
    pub precision: usize,

    /// Print preference values as exact rationals instead of rounded
    /// decimals.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl FormatArg {
    pub fn to_report(self) -> ReportFormat {
        match self {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

/// Preference method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    /// Reciprocal-rank difference at recall level 1.
    #[value(name = "delta-rr1")]
    DeltaRr1,
    /// Lexiprecision with the reciprocal-rank difference at the
    /// decisive level as magnitude.
    #[value(name = "rrlp")]
    RrLp,
    /// Lexiprecision reduced to the sign at the decisive level.
    #[value(name = "sgnlp")]
    SgnLp,
}

impl SchemeArg {
    pub fn to_method(self) -> Method {
        match self {
            SchemeArg::DeltaRr1 => Method::DeltaRr1,
            SchemeArg::RrLp => Method::RrLp,
            SchemeArg::SgnLp => Method::SgnLp,
        }
    }
}

/// Significance test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TestArg {
    /// Tukey's honestly-significant-difference test over all runs.
    Hsd,
    /// Per-pair paired test (t-test on magnitudes, sign test on
    /// signs) with Bonferroni correction.
    Paired,
}

impl TestArg {
    pub fn to_test(self) -> SigTest {
        match self {
            TestArg::Hsd => SigTest::Hsd,
            TestArg::Paired => SigTest::Paired,
        }
    }
}

/// Agreement analysis selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AgreementModeArg {
    /// How well the positions after the first relevant one predict the
    /// full preference.
    Masked,
    /// Agreement with the full data when relevance labels are removed.
    Labels,
    /// Agreement with the full data when whole topics are removed.
    Queries,
}

/// What the degrade subcommand removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DegradeModeArg {
    /// Remove relevance labels; affected documents become
    /// non-relevant.
    Labels,
    /// Remove whole topics.
    Queries,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Recall level to evaluate: the utility is the reciprocal rank of
    /// the i-th relevant document, the search length its position.
    /// Topics with fewer relevant documents get empty metric cells.
    #[arg(long, value_name = "I", default_value_t = 1)]
    pub level: u32,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First run file; positive preferences favor this side.
    #[arg(long, value_name = "FILE")]
    pub run_a: PathBuf,

    /// Second run file.
    #[arg(long, value_name = "FILE")]
    pub run_b: PathBuf,

    /// Relevance judgments in the standard qrels format.
    #[arg(long, value_name = "FILE")]
    pub qrels: PathBuf,

    /// Smallest grade treated as relevant.
    #[arg(long, value_name = "GRADE", default_value_t = 1)]
    pub binarize_threshold: u32,

    /// Preference method.
    #[arg(long, value_enum, default_value_t = SchemeArg::RrLp)]
    pub scheme: SchemeArg,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AgreementArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Which agreement analysis to run.
    #[arg(long, value_enum, default_value_t = AgreementModeArg::Masked)]
    pub mode: AgreementModeArg,

    /// Removal fractions in [0, 1), comma separated or repeated;
    /// required by the labels and queries modes.
    #[arg(long, value_name = "F", value_delimiter = ',', num_args = 1..)]
    pub fractions: Vec<f64>,

    /// Random samples per fraction.
    #[arg(long, value_name = "N", default_value_t = 10)]
    pub samples: u32,

    /// Seed for the deterministic sampler.
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DegradeArgs {
    /// Relevance judgments to degrade.
    #[arg(long, value_name = "FILE")]
    pub qrels: PathBuf,

    /// Smallest grade treated as relevant.
    #[arg(long, value_name = "GRADE", default_value_t = 1)]
    pub binarize_threshold: u32,

    /// What to remove.
    #[arg(long, value_enum)]
    pub mode: DegradeModeArg,

    /// Removal fraction in [0, 1).
    #[arg(long, value_name = "F")]
    pub fraction: f64,

    /// Seed for the deterministic sampler.
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    pub seed: u64,

    /// Remove the fraction from every topic separately instead of
    /// globally across the collection (labels mode only).
    #[arg(long)]
    pub stratified: bool,

    /// Destination file; standard output when omitted. Labels mode
    /// writes a qrels file, queries mode one topic id per line.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SignificanceArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Significance test; both run when omitted.
    #[arg(long, value_enum)]
    pub test: Option<TestArg>,

    /// Preference method; all three run when omitted.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,

    /// Familywise significance level, in (0, 1).
    #[arg(long, value_name = "A", default_value_t = 0.05)]
    pub alpha: f64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BackoffArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Deepest recall level in the correlation grid (at least 2).
    #[arg(long, value_name = "L", default_value_t = 10)]
    pub max_level: u32,

    /// Number of deeper levels each regression conditions on.
    #[arg(long, value_name = "H", default_value_t = 3)]
    pub horizon: u32,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group = ArgGroup::new("curve").required(true).args(["tie_prob", "value_count"]))]
pub struct TheoryArgs {
    /// Tabulate the probability that a random arrangement ties a fixed
    /// one at recall level 1, for every first relevant position.
    #[arg(long)]
    pub tie_prob: bool,

    /// Tabulate how the number of distinct metric values grows as
    /// extra relevant documents are added.
    #[arg(long)]
    pub value_count: bool,

    /// Collection size D.
    #[arg(long, value_name = "D")]
    pub corpus: u64,

    /// Number of relevant documents R.
    #[arg(long, value_name = "R")]
    pub relevant: u64,

    /// Largest number of added relevant documents for the value-count
    /// curve.
    #[arg(long, value_name = "K", default_value_t = 10)]
    pub max_extra: u64,

    /// Cross-check every closed-form value against an independent
    /// computation and add a `verified` column. The tie-probability
    /// check enumerates all arrangements, so it needs a small
    /// collection.
    #[arg(long)]
    pub verify: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of topics.
    #[arg(long, value_name = "N")]
    pub topics: u32,

    /// Relevant documents per topic.
    #[arg(long, value_name = "N")]
    pub relevant: u32,

    /// Candidate documents per topic.
    #[arg(long, value_name = "N")]
    pub corpus: u32,

    /// Documents each run retrieves per topic.
    #[arg(long, value_name = "N")]
    pub depth: u32,

    /// Number of runs on the quality ladder.
    #[arg(long, value_name = "N", default_value_t = 4)]
    pub n_runs: u32,

    /// Quality of the best run, in [0, 1]; run j of n is generated at
    /// quality j/(n-1) of this value.
    #[arg(long, value_name = "Q", default_value_t = 0.9)]
    pub quality: f64,

    /// Generator seed.
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    pub seed: u64,

    /// Directory for `qrels.txt` and one `<tag>.run` file per run;
    /// created if missing.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}
