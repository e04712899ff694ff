use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::BufReader;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use gae_core::bleu::{self, BleuError, BleuResult};
use gae_core::corpus::{self, CorpusError, SplitMode, SplitSpec};
use gae_core::gae::{
    self, display_pct, GaeAnnotation, GaeCategory, GaeError, GaeScoreTable, GaeSession,
    PooledScores, SessionItem, TableScope,
};
use gae_core::report::{self, ReportError, ReportFormat, Thresholds};
use gae_core::store::{AnnotationStore, StoreError};
use serde::Serialize;

use crate::{BestEpochCmd, BleuCmd, Cli, Command, GaeScoreCmd, ReportCmd, SampleCmd, ServeCmd, SplitCmd};

#[derive(Debug)]
struct UsageError(String);

#[derive(Debug)]
struct DataError(String);

#[derive(Debug)]
struct InternalError(String);

macro_rules! marker_error {
    ($($t:ident),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl std::error::Error for $t {}
    )*};
}
marker_error!(UsageError, DataError, InternalError);

/// 1 usage, 2 input data, 3 internal.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if cause.is::<InternalError>() {
            return 3;
        }
        if cause.is::<DataError>()
            || cause.is::<BleuError>()
            || cause.is::<GaeError>()
            || cause.is::<CorpusError>()
            || cause.is::<ReportError>()
            || cause.is::<StoreError>()
            || cause.is::<std::io::Error>()
            || cause.is::<serde_json::Error>()
        {
            return 2;
        }
    }
    3
}

pub fn run(cli: Cli) -> Result<()> {
    let json = cli.json;
    match cli.command {
        Command::Bleu(cmd) => run_bleu(cmd, json),
        Command::Split(cmd) => run_split(cmd, json),
        Command::Sample(cmd) => run_sample(cmd, json),
        Command::GaeScore(cmd) => run_gae_score(cmd, json),
        Command::Serve(cmd) => run_serve(cmd),
        Command::Report(cmd) => run_report(cmd, json),
        Command::BestEpoch(cmd) => run_best_epoch(cmd, json),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| InternalError(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn lines(path: &Path) -> Result<Vec<String>> {
    Ok(corpus::read_lines(path)?.0)
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn warn_diagnostics(r: &BleuResult) {
    for d in &r.diagnostics {
        log::warn!("{d}");
    }
}

fn bleu_line(r: &BleuResult) -> String {
    let p: Vec<String> = r.precisions.iter().map(ToString::to_string).collect();
    format!(
        "BLEU = {}  P = {}  BP = {:.4}  c = {}  r = {}  tokenizer = {}{}  smoothing = {}",
        display_pct(r.score),
        p.join(" "),
        r.brevity_penalty,
        r.candidate_length,
        r.effective_reference_length,
        r.tokenizer_mode,
        if r.lowercase { "+lowercase" } else { "" },
        r.smoothing
    )
}

fn run_bleu(cmd: BleuCmd, json: bool) -> Result<()> {
    let candidates = lines(&cmd.candidates)?;
    let references = cmd
        .references
        .iter()
        .map(|p| lines(p))
        .collect::<Result<Vec<_>>>()?;
    let segments = bleu::build_segments(&candidates, &references, cmd.opts.tokenizer())?;
    let config = cmd.opts.config();
    if cmd.per_sentence {
        let results = bleu::sentence_bleus(&segments, &config, cmd.opts.execution())?;
        if json {
            return print_json(&results);
        }
        for r in &results {
            println!("{}", display_pct(r.score));
        }
        return Ok(());
    }
    let result = bleu::bleu_with(&segments, &config, cmd.opts.execution())?;
    warn_diagnostics(&result);
    if json {
        print_json(&result)
    } else {
        println!("{}", bleu_line(&result));
        Ok(())
    }
}

fn run_split(cmd: SplitCmd, json: bool) -> Result<()> {
    let corpus = corpus::load_parallel(&cmd.source, &cmd.target)?;
    let mode = match (cmd.ratio, cmd.counts) {
        (Some(parts), None) => SplitMode::ratio_from_parts(parts)?,
        (None, Some([train, valid, test])) => SplitMode::Counts {
            train,
            valid,
            test,
            discard_remainder: cmd.discard_remainder,
        },
        _ => return Err(UsageError("exactly one of --ratio and --counts is required".into()).into()),
    };
    let split = corpus::split(&corpus, &SplitSpec { mode, seed: cmd.seed })?;
    split.write_to(&cmd.out_dir)?;
    let p = &split.provenance;
    if json {
        print_json(p)
    } else {
        println!(
            "train {} / valid {} / test {} (discarded {}) from {} pairs, seed {} -> {}",
            p.sizes.train,
            p.sizes.valid,
            p.sizes.test,
            p.discarded,
            p.corpus_size,
            p.seed,
            cmd.out_dir.display()
        );
        Ok(())
    }
}

#[derive(Serialize)]
struct SampleSummary {
    k: usize,
    seed: u64,
    corpus_size: usize,
    /// 1-based line numbers of the sampled pairs.
    lines: Vec<usize>,
    files: Vec<PathBuf>,
}

fn run_sample(cmd: SampleCmd, json: bool) -> Result<()> {
    let corpus = corpus::load_parallel(&cmd.source, &cmd.target)?;
    let candidates = match &cmd.candidates {
        Some(p) => {
            let c = lines(p)?;
            if c.len() != corpus.len() {
                return Err(DataError(format!(
                    "{} has {} lines but the corpus has {}",
                    p.display(),
                    c.len(),
                    corpus.len()
                ))
                .into());
            }
            Some(c)
        }
        None => None,
    };
    let idx = corpus::sample_indices(corpus.len(), cmd.k, cmd.seed)?;
    let sample = corpus.subset(&idx);
    let mut files = vec![with_suffix(&cmd.out_prefix, "src"), with_suffix(&cmd.out_prefix, "tgt")];
    sample.write(&files[0], &files[1])?;
    if let Some(c) = &candidates {
        let hyp = with_suffix(&cmd.out_prefix, "hyp");
        corpus::write_lines(&hyp, idx.iter().map(|&i| c[i].as_str()))?;
        files.push(hyp);
    }
    if let (Some(path), Some(c)) = (&cmd.items, &candidates) {
        let mut out = String::new();
        for &i in &idx {
            let item = SessionItem::new(
                (i + 1).to_string(),
                corpus.pairs[i].source.clone(),
                corpus.pairs[i].target.clone(),
                c[i].clone(),
            );
            out.push_str(&serde_json::to_string(&item)?);
            out.push('\n');
        }
        fs::write(path, out).with_context(|| path.display().to_string())?;
        files.push(path.clone());
    }
    let summary = SampleSummary {
        k: cmd.k,
        seed: cmd.seed,
        corpus_size: corpus.len(),
        lines: idx.iter().map(|i| i + 1).collect(),
        files,
    };
    if json {
        print_json(&summary)
    } else {
        println!(
            "sampled {} of {} pairs (seed {}) -> {}",
            summary.k,
            summary.corpus_size,
            summary.seed,
            summary
                .files
                .iter()
                .map(|f| f.display().to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        Ok(())
    }
}

fn read_annotation_file(path: &Path) -> Result<Vec<GaeAnnotation>> {
    let file = fs::File::open(path).with_context(|| path.display().to_string())?;
    gae::read_annotations(BufReader::new(file)).with_context(|| path.display().to_string())
}

/// Session over the annotated sentences, in order of first appearance.
fn session_from_annotations(annotations: Vec<GaeAnnotation>) -> Result<GaeSession> {
    let mut ids: Vec<String> = Vec::new();
    for a in &annotations {
        if !ids.contains(&a.sentence_id) {
            ids.push(a.sentence_id.clone());
        }
    }
    let items = ids.into_iter().map(|id| SessionItem::new(id, "", "", "")).collect();
    let mut session = GaeSession::new("cli", "", items)?;
    for a in annotations {
        session.upsert(a)?;
    }
    Ok(session)
}

fn print_table(t: &GaeScoreTable) {
    match &t.scope {
        TableScope::Annotator(a) => println!("Annotator: {a}"),
        TableScope::Pooled => println!("Pooled: {}", gae::POOLING_RULE),
    }
    println!("Sentences: {}", t.sentence_count);
    println!("\nSentence scores");
    for s in &t.sentence_scores {
        println!("  {:<12} {:>6}", s.sentence_id, display_pct(s.score));
    }
    println!("\nCategory scores");
    for c in GaeCategory::ALL {
        println!("  {:<22} {:>6}", c.key(), display_pct(t.category(c)));
    }
    println!("\nModel score: {}", display_pct(t.model_score));
}

fn run_gae_score(cmd: GaeScoreCmd, json: bool) -> Result<()> {
    if let Some(path) = &cmd.published {
        return run_published(path, cmd.sentences, json);
    }
    let path = cmd.annotations.as_ref().expect("clap group");
    let mut annotations = read_annotation_file(path)?;
    if let Some(who) = &cmd.annotator {
        annotations.retain(|a| &a.annotator_id == who);
        if annotations.is_empty() {
            return Err(DataError(format!("no annotations by `{who}` in {}", path.display())).into());
        }
    }
    if annotations.is_empty() {
        return Err(DataError(format!("{} has no annotations", path.display())).into());
    }
    let scores: PooledScores = gae::pooled_scores(&session_from_annotations(annotations)?);
    if json {
        return print_json(&scores);
    }
    let table = match scores.per_annotator.as_slice() {
        [only] => only,
        _ => scores.pooled.as_ref().expect("non-empty"),
    };
    print_table(table);
    if let Some(agreement) = &scores.agreement {
        println!(
            "\nAgreement ({} annotators, {} shared sentences)",
            scores.per_annotator.len(),
            scores.overlapping_sentences
        );
        for (c, v) in agreement {
            println!("  {:<22} {:>6}", c.key(), display_pct(*v));
        }
    }
    Ok(())
}

fn run_published(path: &Path, sentences: usize, json: bool) -> Result<()> {
    let file = fs::File::open(path).with_context(|| path.display().to_string())?;
    let checks: Vec<_> = report::read_category_table(file)?
        .iter()
        .map(|col| report::check_published(col, sentences))
        .collect();
    if json {
        print_json(&checks)?;
    } else {
        for c in &checks {
            let published = c
                .published_model_score
                .map_or("-".to_string(), |p| format!("{p:.2}"));
            println!(
                "{}: model score {} (published {published}), {}",
                c.model_label,
                display_pct(c.recomputed_model_score),
                if c.passed() { "consistent" } else { "INCONSISTENT" }
            );
            for cat in &c.off_granularity {
                println!("  {} is not a multiple of 100/{sentences}", cat.key());
            }
        }
    }
    if checks.iter().all(|c| c.passed()) {
        Ok(())
    } else {
        Err(DataError("published table failed consistency checks".into()).into())
    }
}

fn read_items(path: &Path) -> Result<Vec<SessionItem>> {
    let text = fs::read_to_string(path).with_context(|| path.display().to_string())?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).with_context(|| format!("{} line {}", path.display(), i + 1))
        })
        .collect()
}

fn run_serve(cmd: ServeCmd) -> Result<()> {
    let mut store = AnnotationStore::open(&cmd.data_dir)?;
    if let Some(path) = &cmd.load_items {
        let items = read_items(path)?;
        let label = cmd.model_label.as_deref().unwrap_or_default();
        let id = match &cmd.session_id {
            Some(id) if store.session(id).is_ok() => {
                log::info!("session {id} already exists; not recreated");
                id.clone()
            }
            Some(id) => {
                store.create_session_with_id(id, label, items)?;
                id.clone()
            }
            None => store.create_session(label, items)?,
        };
        println!("session {id}");
    }
    let config = gae_service::ServiceConfig {
        addr: SocketAddr::new(cmd.host, cmd.port),
        data_dir: cmd.data_dir.clone(),
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| InternalError(e.to_string()))?;
    runtime
        .block_on(gae_service::serve(config, gae_service::shared(store)))
        .map_err(|e| InternalError(format!("server on {}:{}: {e}", cmd.host, cmd.port)).into())
}

fn run_report(cmd: ReportCmd, json: bool) -> Result<()> {
    let format = if json {
        ReportFormat::Json
    } else if let Some(f) = &cmd.format {
        f.parse().map_err(|e: ReportError| UsageError(e.to_string()))?
    } else if let Some(out) = &cmd.output {
        ReportFormat::from_path(out).map_err(|e| UsageError(e.to_string()))?
    } else {
        ReportFormat::Markdown
    };

    let items = read_items(&cmd.items)?;
    let mut session = GaeSession::new("report", cmd.label.clone(), items.clone())?;
    for a in read_annotation_file(&cmd.annotations)? {
        session.upsert(a)?;
    }
    let scores = gae::pooled_scores(&session);
    let table = match &cmd.annotator {
        Some(who) => scores
            .per_annotator
            .into_iter()
            .find(|t| t.scope == TableScope::Annotator(who.clone()))
            .ok_or_else(|| DataError(format!("no annotations by `{who}`")))?,
        None => scores
            .pooled
            .ok_or_else(|| DataError(format!("{} has no annotations", cmd.annotations.display())))?,
    };
    let thresholds = Thresholds {
        bleu_threshold: cmd.bleu_threshold,
        gae_threshold: cmd.gae_threshold,
    };
    let mut report = report::build_comparison(
        &cmd.label,
        &items,
        table,
        cmd.opts.tokenizer(),
        &cmd.opts.config(),
        thresholds,
        cmd.opts.execution(),
    )?;
    report.checkpoint = cmd.checkpoint;
    warn_diagnostics(&report.corpus_bleu);
    let text = report::render_report(&report, format);
    match &cmd.output {
        Some(out) => fs::write(out, text).with_context(|| out.display().to_string())?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct BestEpochOut {
    model_label: String,
    best: report::EpochScore,
    entries: Vec<report::EpochScore>,
}

fn run_best_epoch(cmd: BestEpochCmd, json: bool) -> Result<()> {
    let series = match (&cmd.scores, &cmd.checkpoints) {
        (Some(csv), None) => {
            let file = fs::File::open(csv).with_context(|| csv.display().to_string())?;
            report::read_epoch_csv(file, &cmd.label)?
        }
        (None, Some(dir)) => {
            let (series, _) = report::score_checkpoint_dir(
                dir,
                &cmd.references,
                &cmd.label,
                cmd.opts.tokenizer(),
                &cmd.opts.config(),
                cmd.opts.execution(),
            )?;
            vec![series]
        }
        _ => return Err(anyhow!(UsageError("exactly one of --scores and --checkpoints is required".into()))),
    };
    let out = series
        .iter()
        .map(|s| {
            Ok(BestEpochOut {
                model_label: s.model_label.clone(),
                best: report::best_epoch(s)?,
                entries: s.entries().to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if json {
        return print_json(&out);
    }
    for o in &out {
        println!("{}\t{}\t{:.2}", o.model_label, o.best.epoch, o.best.bleu);
    }
    Ok(())
}
