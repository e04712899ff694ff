//! Checkpoint selection by BLEU and BLEU-vs-GAE comparison reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bleu::{self, BleuConfig, BleuError, BleuResult, SegmentPair, Tokenizer};
use crate::corpus::{self, CorpusError};
use crate::exec::Execution;
use crate::gae::{display_pct, on_granularity, GaeCategory, GaeScoreTable, SessionItem, TableScope};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("epoch series `{0}` is empty")]
    EmptySeries(String),
    #[error("epochs must be strictly increasing: {epoch} follows {previous}")]
    NonIncreasingEpoch { previous: u64, epoch: u64 },
    #[error("BLEU {bleu} at epoch {epoch} is outside [0, 100]")]
    BleuOutOfRange { epoch: u64, bleu: f64 },
    #[error("score table line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("unknown report format `{0}` (expected markdown, csv or json)")]
    UnknownFormat(String),
    #[error("no candidate files with an epoch number in {}", .0.display())]
    NoCheckpoints(PathBuf),
    #[error("epoch {epoch} appears in both {} and {}", first.display(), second.display())]
    DuplicateEpoch {
        epoch: u64,
        first: PathBuf,
        second: PathBuf,
    },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid report document: {0}")]
    Document(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Bleu(#[from] BleuError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochScore {
    pub epoch: u64,
    pub bleu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochScoreSeries {
    pub model_label: String,
    entries: Vec<EpochScore>,
}

impl EpochScoreSeries {
    pub fn new(model_label: impl Into<String>, entries: Vec<EpochScore>) -> Result<Self, ReportError> {
        for w in entries.windows(2) {
            if w[1].epoch <= w[0].epoch {
                return Err(ReportError::NonIncreasingEpoch {
                    previous: w[0].epoch,
                    epoch: w[1].epoch,
                });
            }
        }
        if let Some(e) = entries.iter().find(|e| !(0.0..=100.0).contains(&e.bleu)) {
            return Err(ReportError::BleuOutOfRange {
                epoch: e.epoch,
                bleu: e.bleu,
            });
        }
        Ok(EpochScoreSeries {
            model_label: model_label.into(),
            entries,
        })
    }

    pub fn entries(&self) -> &[EpochScore] {
        &self.entries
    }
}

/// Highest-BLEU entry; ties go to the earliest epoch.
pub fn best_epoch(series: &EpochScoreSeries) -> Result<EpochScore, ReportError> {
    series
        .entries
        .iter()
        .copied()
        .reduce(|best, e| if e.bleu > best.bleu { e } else { best })
        .ok_or_else(|| ReportError::EmptySeries(series.model_label.clone()))
}

/// Reads `epoch,bleu` CSV (one series named `label`) or a wide table
/// `epoch,<model>,<model>,...` (one series per column).
pub fn read_epoch_csv<R: Read>(reader: R, label: &str) -> Result<Vec<EpochScoreSeries>, ReportError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let csv_err = |e: csv::Error| ReportError::Csv {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    };
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.get(0) != Some("epoch") || header.len() < 2 {
        return Err(ReportError::Csv {
            line: 1,
            message: "header must start with `epoch` followed by at least one score column".into(),
        });
    }
    let labels: Vec<String> = if header.len() == 2 && &header[1] == "bleu" {
        vec![label.to_string()]
    } else {
        header.iter().skip(1).map(str::to_string).collect()
    };
    let mut columns: Vec<Vec<EpochScore>> = vec![Vec::new(); labels.len()];
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let field_err = |what: &str, v: &str| ReportError::Csv {
            line,
            message: format!("bad {what} `{v}`"),
        };
        let epoch: u64 = record[0].parse().map_err(|_| field_err("epoch", &record[0]))?;
        for (col, cell) in columns.iter_mut().zip(record.iter().skip(1)) {
            if cell.is_empty() {
                continue;
            }
            let bleu: f64 = cell.parse().map_err(|_| field_err("BLEU", cell))?;
            col.push(EpochScore { epoch, bleu });
        }
    }
    labels
        .into_iter()
        .zip(columns)
        .map(|(l, entries)| EpochScoreSeries::new(l, entries))
        .collect()
}

/// Epoch number of a checkpoint file: the last run of digits in its name.
pub fn epoch_from_file_name(path: &Path) -> Option<u64> {
    let name = path.file_stem()?.to_str()?;
    let digits: String = name
        .chars()
        .rev()
        .skip_while(|c| !c.is_ascii_digit())
        .take_while(|c| c.is_ascii_digit())
        .collect();
    digits.chars().rev().collect::<String>().parse().ok()
}

/// Scores every per-epoch candidate file in `dir` against the reference
/// files. Returns the series and the file behind each epoch.
pub fn score_checkpoint_dir(
    dir: &Path,
    reference_paths: &[PathBuf],
    label: &str,
    tokenizer: Tokenizer,
    config: &BleuConfig,
    exec: Execution,
) -> Result<(EpochScoreSeries, Vec<(u64, PathBuf)>), ReportError> {
    let io_err = |source| ReportError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files: Vec<(u64, PathBuf)> = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if !path.is_file() {
            continue;
        }
        if let Some(epoch) = epoch_from_file_name(&path) {
            files.push((epoch, path));
        }
    }
    if files.is_empty() {
        return Err(ReportError::NoCheckpoints(dir.to_path_buf()));
    }
    files.sort();
    if let Some(w) = files.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(ReportError::DuplicateEpoch {
            epoch: w[0].0,
            first: w[0].1.clone(),
            second: w[1].1.clone(),
        });
    }

    let references = reference_paths
        .iter()
        .map(|p| corpus::read_lines(p).map(|(lines, _)| lines))
        .collect::<Result<Vec<_>, _>>()?;
    let scores = exec.map(&files, |(_, path)| -> Result<f64, ReportError> {
        let (candidates, _) = corpus::read_lines(path)?;
        let segments = bleu::build_segments(&candidates, &references, tokenizer)?;
        Ok(bleu::bleu_with(&segments, config, Execution::Sequential)?.score)
    });
    let entries = files
        .iter()
        .zip(scores)
        .map(|((epoch, _), s)| s.map(|bleu| EpochScore { epoch: *epoch, bleu }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((EpochScoreSeries::new(label, entries)?, files))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceComparison {
    pub sentence_id: String,
    pub sentence_bleu: f64,
    pub gae_sentence_score: f64,
}

/// A sentence is a discrepancy when its BLEU is at most `bleu_threshold`
/// while its GAE score is at least `gae_threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub bleu_threshold: f64,
    pub gae_threshold: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            bleu_threshold: 5.0,
            gae_threshold: 100.0,
        }
    }
}

impl Thresholds {
    pub fn matches(&self, s: &SentenceComparison) -> bool {
        s.sentence_bleu <= self.bleu_threshold && s.gae_sentence_score >= self.gae_threshold
    }
}

/// Ids of discrepant sentences by ascending sentence BLEU (stable).
pub fn find_discrepancies(per_sentence: &[SentenceComparison], thresholds: Thresholds) -> Vec<String> {
    let mut hits: Vec<&SentenceComparison> =
        per_sentence.iter().filter(|s| thresholds.matches(s)).collect();
    hits.sort_by(|a, b| a.sentence_bleu.total_cmp(&b.sentence_bleu));
    hits.into_iter().map(|s| s.sentence_id.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub model_label: String,
    /// Which checkpoint produced the candidates, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<String>,
    /// Config used for both corpus and sentence BLEU.
    pub bleu_config: BleuConfig,
    pub corpus_bleu: BleuResult,
    pub gae_table: GaeScoreTable,
    pub per_sentence: Vec<SentenceComparison>,
    pub thresholds: Thresholds,
    pub discrepancies: Vec<String>,
}

/// Scores each item's candidate against its reference, pairs sentence BLEU
/// with the GAE sentence score, and mines discrepancies. Items without a
/// GAE score count toward corpus BLEU only.
pub fn build_comparison(
    model_label: &str,
    items: &[SessionItem],
    gae_table: GaeScoreTable,
    tokenizer: Tokenizer,
    config: &BleuConfig,
    thresholds: Thresholds,
    exec: Execution,
) -> Result<ComparisonReport, ReportError> {
    let segments = items
        .iter()
        .map(|it| SegmentPair::from_text(&it.candidate_text, &[&it.reference_text], tokenizer))
        .collect::<Result<Vec<_>, _>>()?;
    let corpus_bleu = bleu::bleu_with(&segments, config, exec)?;
    let sentence = bleu::sentence_bleus(&segments, config, exec)?;
    let per_sentence: Vec<SentenceComparison> = items
        .iter()
        .zip(&sentence)
        .filter_map(|(it, b)| {
            gae_table.sentence(&it.sentence_id).map(|g| SentenceComparison {
                sentence_id: it.sentence_id.clone(),
                sentence_bleu: b.score,
                gae_sentence_score: g,
            })
        })
        .collect();
    let discrepancies = find_discrepancies(&per_sentence, thresholds);
    Ok(ComparisonReport {
        model_label: model_label.to_string(),
        checkpoint: None,
        bleu_config: config.clone(),
        corpus_bleu,
        gae_table,
        per_sentence,
        thresholds,
        discrepancies,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl ReportFormat {
    /// From an output path's extension (.md, .csv, .json).
    pub fn from_path(path: &Path) -> Result<Self, ReportError> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or_default();
        ext.parse()
    }
}

impl FromStr for ReportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(ReportError::UnknownFormat(other.to_string())),
        }
    }
}

pub fn render_report(report: &ComparisonReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Markdown => render_markdown(report),
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serializes") + "\n"
        }
    }
}

pub fn parse_json_report(text: &str) -> Result<ComparisonReport, ReportError> {
    serde_json::from_str(text).map_err(|e| ReportError::Document(e.to_string()))
}

fn scope_line(table: &GaeScoreTable) -> String {
    match &table.scope {
        TableScope::Annotator(id) => format!("annotator `{id}`"),
        TableScope::Pooled => format!("pooled over annotators ({})", crate::gae::POOLING_RULE),
    }
}

fn render_markdown(r: &ComparisonReport) -> String {
    let b = &r.corpus_bleu;
    let mut out = String::new();
    let _ = writeln!(out, "# BLEU vs GAE: {}\n", r.model_label);
    if let Some(cp) = &r.checkpoint {
        let _ = writeln!(out, "Checkpoint: `{cp}`\n");
    }

    out.push_str("## BLEU\n\n| Metric | Value |\n|---|---|\n");
    let precisions: Vec<String> = b.precisions.iter().map(ToString::to_string).collect();
    let rows = [
        ("BLEU", display_pct(b.score)),
        ("Precisions", precisions.join(", ")),
        ("Brevity penalty", format!("{:.4}", b.brevity_penalty)),
        ("Candidate length", b.candidate_length.to_string()),
        ("Reference length", b.effective_reference_length.to_string()),
        ("Tokenizer", Tokenizer { mode: b.tokenizer_mode, lowercase: b.lowercase }.to_string()),
        ("Smoothing", b.smoothing.to_string()),
        ("Max n", b.max_n.to_string()),
        ("Segments", b.segments.to_string()),
    ];
    for (k, v) in rows {
        let _ = writeln!(out, "| {k} | {v} |");
    }

    let g = &r.gae_table;
    let _ = writeln!(out, "\n## GAE\n\nScope: {}", scope_line(g));
    match g.total_items {
        Some(total) if g.is_partial() => {
            let _ = writeln!(out, "Sentences: {} of {total} (partial)\n", g.sentence_count);
        }
        _ => {
            let _ = writeln!(out, "Sentences: {}\n", g.sentence_count);
        }
    }
    out.push_str("| Category | Score |\n|---|---|\n");
    for c in GaeCategory::ALL {
        let _ = writeln!(out, "| {} | {} |", c.label(), display_pct(g.category(c)));
    }
    let _ = writeln!(out, "| Model score | {} |", display_pct(g.model_score));

    out.push_str("\n## Sentences\n\n");
    if r.per_sentence.is_empty() {
        out.push_str("_No sentences._\n");
    } else {
        out.push_str("| Sentence | BLEU | GAE | Discrepancy |\n|---|---|---|---|\n");
        for s in &r.per_sentence {
            let flag = if r.discrepancies.contains(&s.sentence_id) { "yes" } else { "" };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {flag} |",
                s.sentence_id,
                display_pct(s.sentence_bleu),
                display_pct(s.gae_sentence_score)
            );
        }
    }

    let _ = writeln!(
        out,
        "\n## Discrepancies\n\nSentence BLEU ≤ {} and GAE ≥ {}.\n",
        display_pct(r.thresholds.bleu_threshold),
        display_pct(r.thresholds.gae_threshold)
    );
    if r.discrepancies.is_empty() {
        out.push_str("None.\n");
    } else {
        for id in &r.discrepancies {
            if let Some(s) = r.per_sentence.iter().find(|s| &s.sentence_id == id) {
                let _ = writeln!(
                    out,
                    "- `{id}`: BLEU {}, GAE {}",
                    display_pct(s.sentence_bleu),
                    display_pct(s.gae_sentence_score)
                );
            }
        }
    }
    out
}

fn render_csv(r: &ComparisonReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |fields: [&str; 5]| w.write_record(fields).expect("in-memory csv");
    row(["kind", "id", "bleu", "gae", "discrepancy"]);
    row([
        "model",
        &r.model_label,
        &display_pct(r.corpus_bleu.score),
        &display_pct(r.gae_table.model_score),
        "",
    ]);
    for c in GaeCategory::ALL {
        row(["category", c.key(), "", &display_pct(r.gae_table.category(c)), ""]);
    }
    for s in &r.per_sentence {
        let flag = r.discrepancies.contains(&s.sentence_id);
        row([
            "sentence",
            &s.sentence_id,
            &display_pct(s.sentence_bleu),
            &display_pct(s.gae_sentence_score),
            if flag { "true" } else { "false" },
        ]);
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

/// One model column of a published category-score table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedGaeColumn {
    pub model_label: String,
    pub category_scores: BTreeMap<GaeCategory, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_model_score: Option<f64>,
}

/// Reads a table with a `category` column of category keys (plus an
/// optional `model_score` row) and one column per model.
pub fn read_category_table<R: Read>(reader: R) -> Result<Vec<PublishedGaeColumn>, ReportError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let csv_err = |e: csv::Error| ReportError::Csv {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    };
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.get(0) != Some("category") || header.len() < 2 {
        return Err(ReportError::Csv {
            line: 1,
            message: "header must be `category` followed by one column per model".into(),
        });
    }
    let mut cols: Vec<PublishedGaeColumn> = header
        .iter()
        .skip(1)
        .map(|l| PublishedGaeColumn {
            model_label: l.to_string(),
            category_scores: BTreeMap::new(),
            published_model_score: None,
        })
        .collect();
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |m: String| ReportError::Csv { line, message: m };
        let key = &record[0];
        let category = if key == "model_score" {
            None
        } else {
            Some(key.parse::<GaeCategory>().map_err(|e| bad(e.to_string()))?)
        };
        for (col, cell) in cols.iter_mut().zip(record.iter().skip(1)) {
            let v: f64 = cell.parse().map_err(|_| bad(format!("bad score `{cell}`")))?;
            match category {
                Some(c) => {
                    col.category_scores.insert(c, v);
                }
                None => col.published_model_score = Some(v),
            }
        }
    }
    for col in &cols {
        if let Some(c) = GaeCategory::ALL.iter().find(|c| !col.category_scores.contains_key(c)) {
            return Err(ReportError::Csv {
                line: 0,
                message: format!("column `{}` has no `{}` row", col.model_label, c.key()),
            });
        }
    }
    Ok(cols)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedCheck {
    pub model_label: String,
    pub recomputed_model_score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_model_score: Option<f64>,
    /// Recomputed and published model scores agree within 0.01.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_score_consistent: Option<bool>,
    /// Categories whose score is not a multiple of 100/sentences.
    pub off_granularity: Vec<GaeCategory>,
}

impl PublishedCheck {
    pub fn passed(&self) -> bool {
        self.model_score_consistent != Some(false) && self.off_granularity.is_empty()
    }
}

/// Re-averages published category scores and checks they are attainable
/// with `sentences` sentences.
pub fn check_published(column: &PublishedGaeColumn, sentences: usize) -> PublishedCheck {
    let values = GaeCategory::ALL.map(|c| column.category_scores[&c]);
    let recomputed = GaeScoreTable::model_score_of(&values);
    PublishedCheck {
        model_label: column.model_label.clone(),
        recomputed_model_score: recomputed,
        published_model_score: column.published_model_score,
        model_score_consistent: column
            .published_model_score
            .map(|p| (p - recomputed).abs() <= 0.01 + 1e-9),
        off_granularity: GaeCategory::ALL
            .into_iter()
            .filter(|c| !on_granularity(column.category_scores[c], sentences))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(label: &str, pts: &[(u64, f64)]) -> EpochScoreSeries {
        EpochScoreSeries::new(
            label,
            pts.iter().map(|&(epoch, bleu)| EpochScore { epoch, bleu }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn best_epoch_ties_go_early() {
        let s = series("m", &[(1, 10.0), (2, 12.0), (3, 12.0), (4, 11.0)]);
        assert_eq!(best_epoch(&s).unwrap(), EpochScore { epoch: 2, bleu: 12.0 });
        let one = series("m", &[(5, 1.0)]);
        assert_eq!(best_epoch(&one).unwrap().epoch, 5);
        assert!(matches!(best_epoch(&series("m", &[])), Err(ReportError::EmptySeries(_))));
    }

    #[test]
    fn series_validation() {
        let e = |epoch, bleu| EpochScore { epoch, bleu };
        assert!(matches!(
            EpochScoreSeries::new("m", vec![e(2, 1.0), e(2, 2.0)]),
            Err(ReportError::NonIncreasingEpoch { .. })
        ));
        assert!(matches!(
            EpochScoreSeries::new("m", vec![e(1, 101.0)]),
            Err(ReportError::BleuOutOfRange { .. })
        ));
    }

    #[test]
    fn csv_narrow_and_wide() {
        let narrow = "epoch,bleu\n100,1.5\n200,2.5\n";
        let s = read_epoch_csv(narrow.as_bytes(), "KO-EN").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].model_label, "KO-EN");
        assert_eq!(best_epoch(&s[0]).unwrap().epoch, 200);

        let wide = "epoch,A,B\n1,5,9\n2,6,8\n";
        let s = read_epoch_csv(wide.as_bytes(), "ignored").unwrap();
        assert_eq!(s[1].model_label, "B");
        assert_eq!(best_epoch(&s[1]).unwrap().epoch, 1);

        assert!(read_epoch_csv("step,bleu\n1,2\n".as_bytes(), "x").is_err());
        assert!(matches!(
            read_epoch_csv("epoch,bleu\n1,abc\n".as_bytes(), "x"),
            Err(ReportError::Csv { line: 2, .. })
        ));
    }

    #[test]
    fn epoch_file_names() {
        assert_eq!(epoch_from_file_name(Path::new("out/model_step_10000.txt")), Some(10000));
        assert_eq!(epoch_from_file_name(Path::new("pred.e7.hyp")), Some(7));
        assert_eq!(epoch_from_file_name(Path::new("readme.txt")), None);
    }

    fn cmp(id: &str, b: f64, g: f64) -> SentenceComparison {
        SentenceComparison {
            sentence_id: id.into(),
            sentence_bleu: b,
            gae_sentence_score: g,
        }
    }

    #[test]
    fn discrepancy_predicate() {
        let rows = [
            cmp("a", 3.0, 100.0),
            cmp("b", 100.0, 100.0),
            cmp("c", 0.0, 700.0 / 9.0),
            cmp("d", 0.0, 100.0),
        ];
        assert_eq!(find_discrepancies(&rows, Thresholds::default()), ["d", "a"]);
    }

    #[test]
    fn published_table_checks() {
        let text = "category,A,B\narticle_or_particle,100,99\nvocabulary_selection,40,40\nsingular_plural,100,100\nmisspelled_word,80,80\nmissing_word,70,70\nadded_word,90,90\nword_order,100,100\ntense,100,100\nsentence_structure,90,90\nmodel_score,85.56,85.00\n";
        let cols = read_category_table(text.as_bytes()).unwrap();
        let a = check_published(&cols[0], 10);
        assert!(a.passed());
        assert!((a.recomputed_model_score - 770.0 / 9.0).abs() < 1e-12);
        let b = check_published(&cols[1], 10);
        assert_eq!(b.off_granularity, [GaeCategory::ArticleOrParticle]);
        assert_eq!(b.model_score_consistent, Some(false));
        assert!(read_category_table("category,A\ntense,1\n".as_bytes()).is_err());
    }

    #[test]
    fn formats() {
        assert_eq!("md".parse::<ReportFormat>().unwrap(), ReportFormat::Markdown);
        assert_eq!(ReportFormat::from_path(Path::new("x/r.json")).unwrap(), ReportFormat::Json);
        assert!(matches!("pdf".parse::<ReportFormat>(), Err(ReportError::UnknownFormat(_))));
    }
}
