//! `gae`: BLEU scoring, corpus preparation, GAE scoring, the annotation
//! service and comparison reports behind one binary.
//!
//! Exit codes: 0 success, 1 usage, 2 input data, 3 internal.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gae_core::bleu::{BleuConfig, Smoothing, Tokenizer, TokenizerMode};
use gae_core::Execution;

#[derive(Debug, Parser)]
#[command(name = "gae", version, about = "BLEU and grammar-accuracy (GAE) evaluation toolkit")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Corpus (or per-sentence) BLEU of a candidate file against references.
    Bleu(BleuCmd),
    /// Seeded train/valid/test split of a parallel corpus.
    Split(SplitCmd),
    /// Seeded evaluation-set sample of a parallel corpus.
    Sample(SampleCmd),
    /// GAE sentence, category and model scores from annotation lines.
    GaeScore(GaeScoreCmd),
    /// Run the annotation HTTP service.
    Serve(ServeCmd),
    /// BLEU-vs-GAE comparison report.
    Report(ReportCmd),
    /// Pick the highest-BLEU checkpoint per model.
    BestEpoch(BestEpochCmd),
}

#[derive(Debug, Clone, Args)]
pub struct BleuOpts {
    /// Tokenizer: `whitespace` or `punct-split`.
    #[arg(long, default_value = "whitespace", value_parser = parse_tokenizer)]
    pub tokenizer: TokenizerMode,
    /// Lowercase before tokenizing (BLEU is case-sensitive otherwise).
    #[arg(long)]
    pub lowercase: bool,
    /// Highest n-gram order; weights are uniform 1/max-n.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..))]
    pub max_n: u16,
    /// `none` or `add-epsilon[:EPS]` (EPS in (0, 1], default 0.1).
    #[arg(long, default_value = "none", value_parser = parse_smoothing)]
    pub smoothing: Smoothing,
    /// Score segments on one thread.
    #[arg(long)]
    pub sequential: bool,
}

impl BleuOpts {
    pub fn tokenizer(&self) -> Tokenizer {
        Tokenizer::new(self.tokenizer).lowercased(self.lowercase)
    }

    pub fn config(&self) -> BleuConfig {
        BleuConfig::uniform(self.max_n as usize).with_smoothing(self.smoothing)
    }

    pub fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

fn parse_tokenizer(s: &str) -> Result<TokenizerMode, String> {
    s.parse().map_err(|e: gae_core::bleu::BleuError| e.to_string())
}

fn parse_smoothing(s: &str) -> Result<Smoothing, String> {
    let sm: Smoothing = s.parse().map_err(|e: gae_core::bleu::BleuError| e.to_string())?;
    BleuConfig::default()
        .with_smoothing(sm)
        .validate()
        .map_err(|e| e.to_string())?;
    Ok(sm)
}

#[derive(Debug, Args)]
pub struct BleuCmd {
    /// Candidate translations, one per line.
    #[arg(long)]
    pub candidates: PathBuf,
    /// Reference files, line-aligned with the candidates.
    #[arg(long, required = true, num_args = 1..)]
    pub references: Vec<PathBuf>,
    /// Print one sentence BLEU per input line instead of corpus BLEU.
    #[arg(long)]
    pub per_sentence: bool,
    #[command(flatten)]
    pub opts: BleuOpts,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["ratio", "counts"])))]
pub struct SplitCmd {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    /// Directory for {train,valid,test}.{src,tgt} and split.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Relative sizes TRAIN:VALID:TEST, e.g. 98:1:1.
    #[arg(long, value_parser = parse_ratio)]
    pub ratio: Option<[f64; 3]>,
    /// Exact sizes TRAIN,VALID,TEST.
    #[arg(long, value_parser = parse_counts)]
    pub counts: Option<[usize; 3]>,
    /// With --counts, drop pairs beyond the requested sizes.
    #[arg(long, requires = "counts")]
    pub discard_remainder: bool,
    #[arg(long)]
    pub seed: u64,
}

fn parse_ratio(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    let parts: [f64; 3] = parts.try_into().map_err(|_| "expected TRAIN:VALID:TEST".to_string())?;
    if parts.iter().any(|p| !p.is_finite() || *p <= 0.0) {
        return Err("ratio parts must be positive".into());
    }
    Ok(parts)
}

fn parse_counts(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| "expected TRAIN,VALID,TEST".to_string())
}

#[derive(Debug, Args)]
pub struct SampleCmd {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    /// Number of pairs to draw.
    #[arg(short = 'k', long = "size")]
    pub k: usize,
    #[arg(long)]
    pub seed: u64,
    /// Writes PREFIX.src, PREFIX.tgt (and PREFIX.hyp with --candidates).
    #[arg(long)]
    pub out_prefix: PathBuf,
    /// System outputs line-aligned with the corpus, sampled alongside it.
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    /// Also write session items (JSON lines) for the annotation service;
    /// sentence ids are 1-based corpus line numbers. Needs --candidates.
    #[arg(long, requires = "candidates")]
    pub items: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["annotations", "published"])))]
pub struct GaeScoreCmd {
    /// Annotation lines (export format).
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    /// Only score this annotator.
    #[arg(long, requires = "annotations")]
    pub annotator: Option<String>,
    /// Check a published category table (CSV: `category,<model>...`).
    #[arg(long)]
    pub published: Option<PathBuf>,
    /// Sentences behind the published table.
    #[arg(long, default_value_t = 50, requires = "published")]
    pub sentences: usize,
}

#[derive(Debug, Args)]
pub struct ServeCmd {
    #[arg(long, env = "GAE_HOST", default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    #[arg(long, env = "GAE_PORT", default_value_t = 8080)]
    pub port: u16,
    /// Directory holding the event log.
    #[arg(long, env = "GAE_DATA_DIR", default_value = "gae-data")]
    pub data_dir: PathBuf,
    /// Create a session from these items (JSON lines) before serving.
    #[arg(long, requires = "model_label")]
    pub load_items: Option<PathBuf>,
    #[arg(long)]
    pub model_label: Option<String>,
    /// Id for the loaded session; skipped if it already exists.
    #[arg(long, requires = "load_items")]
    pub session_id: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReportCmd {
    /// Session items (JSON lines with sentence_id, source_text,
    /// reference_text, candidate_text).
    #[arg(long)]
    pub items: PathBuf,
    /// Annotation lines for the same sentences.
    #[arg(long)]
    pub annotations: PathBuf,
    /// Use one annotator's table instead of the pooled one.
    #[arg(long)]
    pub annotator: Option<String>,
    #[arg(long, default_value = "model")]
    pub label: String,
    /// Checkpoint that produced the candidates.
    #[arg(long)]
    pub checkpoint: Option<String>,
    /// markdown, csv or json; inferred from --output when omitted.
    #[arg(long)]
    pub format: Option<String>,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 5.0)]
    pub bleu_threshold: f64,
    #[arg(long, default_value_t = 100.0)]
    pub gae_threshold: f64,
    #[command(flatten)]
    pub opts: BleuOpts,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["scores", "checkpoints"])))]
pub struct BestEpochCmd {
    /// CSV `epoch,bleu` or `epoch,<model>,<model>...`.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Directory of per-epoch candidate files (epoch = last number in the name).
    #[arg(long, requires = "references")]
    pub checkpoints: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    pub references: Vec<PathBuf>,
    #[arg(long, default_value = "model")]
    pub label: String,
    #[command(flatten)]
    pub opts: BleuOpts,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = commands::exit_code(&err);
            eprintln!("error: {}", one_line(&err));
            ExitCode::from(code)
        }
    }
}

/// Error chain on one line; causes already quoted by their parent are skipped.
fn one_line(err: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in err.chain() {
        let text = cause.to_string().replace('\n', " ");
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}
