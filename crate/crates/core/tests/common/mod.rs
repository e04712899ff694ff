#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use gae_core::bleu::{SegmentPair, TokenizedSentence, Tokenizer, TokenizerMode};
use gae_core::gae::{self, GaeAnnotation, GaeCategory, Judgment, Judgments, SessionItem};
use rand::Rng;

/// Candidate tokens and reference token lists.
pub type RawSegment = (Vec<String>, Vec<Vec<String>>);

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn worked_grid_annotations() -> Vec<GaeAnnotation> {
    let f = File::open(data_path("worked_grid.jsonl")).unwrap();
    gae::read_annotations(BufReader::new(f)).unwrap()
}

pub fn worked_grid_items() -> Vec<SessionItem> {
    std::fs::read_to_string(data_path("worked_grid_items.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn whitespace() -> Tokenizer {
    Tokenizer::new(TokenizerMode::Whitespace)
}

pub fn to_segments(raw: &[RawSegment]) -> Vec<SegmentPair> {
    raw.iter()
        .map(|(c, refs)| {
            SegmentPair::new(
                TokenizedSentence::from_tokens(c.clone(), whitespace()),
                refs.iter()
                    .map(|r| TokenizedSentence::from_tokens(r.clone(), whitespace()))
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}

pub fn words(ids: &[u8]) -> Vec<String> {
    ids.iter().map(|i| format!("w{i}")).collect()
}

pub fn raw_from_ids(ids: &[(Vec<u8>, Vec<Vec<u8>>)]) -> Vec<RawSegment> {
    ids.iter()
        .map(|(c, rs)| (words(c), rs.iter().map(|r| words(r)).collect()))
        .collect()
}

/// Up to 20 segments, alphabet of at most 8 words, lengths 0..=15, 1..=4 references.
pub fn random_corpus<R: Rng>(rng: &mut R) -> Vec<RawSegment> {
    let alphabet = rng.random_range(1..=8u8);
    let sentence = |rng: &mut R| -> Vec<String> {
        let len = rng.random_range(0..=15);
        (0..len).map(|_| format!("w{}", rng.random_range(0..alphabet))).collect()
    };
    let segments = rng.random_range(1..=20);
    (0..segments)
        .map(|_| {
            let cand = sentence(rng);
            let refs = (0..rng.random_range(1..=4)).map(|_| sentence(rng)).collect();
            (cand, refs)
        })
        .collect()
}

pub fn random_grid<R: Rng>(rng: &mut R, sentences: usize) -> Vec<[u8; GaeCategory::COUNT]> {
    (0..sentences)
        .map(|_| std::array::from_fn(|_| rng.random_range(0..=1u8)))
        .collect()
}

pub fn grid_annotations(grid: &[[u8; GaeCategory::COUNT]], annotator: &str) -> Vec<GaeAnnotation> {
    grid.iter()
        .enumerate()
        .map(|(i, bits)| {
            GaeAnnotation::new((i + 1).to_string(), annotator, Judgments::from_bits(*bits).unwrap())
        })
        .collect()
}

pub fn all_ones(sentence_id: &str) -> GaeAnnotation {
    GaeAnnotation::new(sentence_id, "evaluator", Judgments::all(Judgment::NotFlawed))
}

/// Pooled statistics computed by brute force, independent of the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oracle {
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub c: u64,
    pub r: u64,
}

fn occurrences(seq: &[String], gram: &[String]) -> u64 {
    if gram.len() > seq.len() {
        return 0;
    }
    seq.windows(gram.len()).filter(|w| *w == gram).count() as u64
}

pub fn oracle(raw: &[RawSegment], max_n: usize) -> Oracle {
    let mut o = Oracle {
        matches: vec![0; max_n],
        totals: vec![0; max_n],
        c: 0,
        r: 0,
    };
    for (cand, refs) in raw {
        for n in 1..=max_n {
            if cand.len() < n {
                continue;
            }
            let grams: Vec<&[String]> = cand.windows(n).collect();
            o.totals[n - 1] += grams.len() as u64;
            let mut seen: Vec<&[String]> = Vec::new();
            for g in grams {
                if seen.contains(&g) {
                    continue;
                }
                seen.push(g);
                let count = occurrences(cand, g);
                let max_ref = refs.iter().map(|r| occurrences(r, g)).max().unwrap_or(0);
                o.matches[n - 1] += count.min(max_ref);
            }
        }
        let c = cand.len() as u64;
        let mut best = refs[0].len() as u64;
        for r in refs {
            let len = r.len() as u64;
            let (d, bd) = (len.abs_diff(c), best.abs_diff(c));
            if d < bd || (d == bd && len < best) {
                best = len;
            }
        }
        o.c += c;
        o.r += best;
    }
    o
}

/// Unsmoothed uniform-weight BLEU from oracle statistics.
pub fn oracle_score(o: &Oracle) -> f64 {
    if o.c == 0 || o.matches.contains(&0) {
        return 0.0;
    }
    let bp = if o.r == 0 || o.c > o.r {
        1.0
    } else {
        (1.0 - o.r as f64 / o.c as f64).exp()
    };
    let n = o.matches.len() as f64;
    let log_mean: f64 = o
        .matches
        .iter()
        .zip(&o.totals)
        .map(|(&m, &t)| (m as f64 / t as f64).ln() / n)
        .sum();
    100.0 * bp * log_mean.exp()
}
