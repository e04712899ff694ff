//! Line-aligned parallel corpora: loading, seeded train/valid/test splits
//! and evaluation-set sampling.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)` driving a
//! Fisher-Yates shuffle of the pair indices ([`RNG_ALGORITHM`]). Split and
//! sample outputs keep the corpus's original line order.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Identity of the permutation generator, recorded in split provenance.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9, seed_from_u64) + fisher-yates shuffle (rand 0.9 SliceRandom::shuffle)";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: invalid UTF-8 on line {line}", path.display())]
    Utf8 { path: PathBuf, line: usize },
    #[error("source has {source_lines} lines but target has {target_lines}")]
    LineCountMismatch { source_lines: usize, target_lines: usize },
    #[error("invalid split spec: {0}")]
    InvalidSpec(String),
    #[error("split requests {requested} pairs but the corpus has {available}")]
    CountsExceed { requested: usize, available: usize },
    #[error("sample size {k} out of range 1..={size}")]
    SampleSize { k: usize, size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePair {
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub source_path: PathBuf,
    pub target_path: PathBuf,
    pub source_sha256: String,
    pub target_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParallelCorpus {
    pub pairs: Vec<SentencePair>,
    pub origin: Option<Origin>,
    /// Pairs where either side is an empty line.
    pub blank_lines: usize,
}

impl ParallelCorpus {
    pub fn from_pairs<I, S, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let pairs: Vec<SentencePair> = pairs
            .into_iter()
            .map(|(s, t)| SentencePair {
                source: s.into(),
                target: t.into(),
            })
            .collect();
        let blank_lines = count_blank(&pairs);
        ParallelCorpus {
            pairs,
            origin: None,
            blank_lines,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The pairs at `indices`, in the order given.
    pub fn subset(&self, indices: &[usize]) -> ParallelCorpus {
        let pairs: Vec<SentencePair> = indices.iter().map(|&i| self.pairs[i].clone()).collect();
        ParallelCorpus {
            blank_lines: count_blank(&pairs),
            pairs,
            origin: self.origin.clone(),
        }
    }

    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|p| p.source.as_str())
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|p| p.target.as_str())
    }

    /// Writes the two sides as line-aligned files.
    pub fn write(&self, source_path: &Path, target_path: &Path) -> Result<(), CorpusError> {
        write_lines(source_path, self.sources())?;
        write_lines(target_path, self.targets())
    }
}

fn count_blank(pairs: &[SentencePair]) -> usize {
    pairs
        .iter()
        .filter(|p| p.source.is_empty() || p.target.is_empty())
        .count()
}

/// Reads a UTF-8 file as lines (`\n` or `\r\n`), plus the SHA-256 of its bytes.
pub fn read_lines(path: &Path) -> Result<(Vec<String>, String), CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let checksum = hex::encode(Sha256::digest(&bytes));
    let text = std::str::from_utf8(&bytes).map_err(|e| CorpusError::Utf8 {
        path: path.to_path_buf(),
        line: bytes[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1,
    })?;
    let body = text.strip_suffix('\n').unwrap_or(text);
    let lines = if text.is_empty() {
        Vec::new()
    } else {
        body.split('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l).to_string())
            .collect()
    };
    Ok((lines, checksum))
}

pub fn write_lines<'a, I>(path: &Path, lines: I) -> Result<(), CorpusError>
where
    I: IntoIterator<Item = &'a str>,
{
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    for line in lines {
        out.write_all(line.as_bytes()).map_err(io_err)?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn load_parallel(source_path: &Path, target_path: &Path) -> Result<ParallelCorpus, CorpusError> {
    let (sources, source_sha256) = read_lines(source_path)?;
    let (targets, target_sha256) = read_lines(target_path)?;
    if sources.len() != targets.len() {
        return Err(CorpusError::LineCountMismatch {
            source_lines: sources.len(),
            target_lines: targets.len(),
        });
    }
    let mut corpus = ParallelCorpus::from_pairs(sources.into_iter().zip(targets));
    if corpus.blank_lines > 0 {
        log::warn!(
            "{} pair(s) with an empty side in {} / {}",
            corpus.blank_lines,
            source_path.display(),
            target_path.display()
        );
    }
    corpus.origin = Some(Origin {
        source_path: source_path.to_path_buf(),
        target_path: target_path.to_path_buf(),
        source_sha256,
        target_sha256,
    });
    Ok(corpus)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitMode {
    /// Fractions summing to 1; sizes by largest remainder.
    Ratio { train: f64, valid: f64, test: f64 },
    /// Exact sizes. Without `discard_remainder` they must cover the corpus.
    Counts {
        train: usize,
        valid: usize,
        test: usize,
        discard_remainder: bool,
    },
}

impl SplitMode {
    /// Normalizes relative parts such as 98:1:1.
    pub fn ratio_from_parts(parts: [f64; 3]) -> Result<Self, CorpusError> {
        if parts.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(CorpusError::InvalidSpec("ratio parts must be positive".into()));
        }
        let sum: f64 = parts.iter().sum();
        Ok(SplitMode::Ratio {
            train: parts[0] / sum,
            valid: parts[1] / sum,
            test: parts[2] / sum,
        })
    }

    /// Output sizes for a corpus of `n` pairs.
    pub fn sizes(&self, n: usize) -> Result<[usize; 3], CorpusError> {
        match *self {
            SplitMode::Ratio { train, valid, test } => {
                let ratios = [train, valid, test];
                if ratios.iter().any(|r| !r.is_finite() || *r <= 0.0) {
                    return Err(CorpusError::InvalidSpec("ratios must be positive".into()));
                }
                let sum: f64 = ratios.iter().sum();
                if (sum - 1.0).abs() > 1e-9 {
                    return Err(CorpusError::InvalidSpec(format!("ratios sum to {sum}, not 1")));
                }
                Ok(largest_remainder(n, ratios))
            }
            SplitMode::Counts {
                train,
                valid,
                test,
                discard_remainder,
            } => {
                let requested = train + valid + test;
                if requested > n {
                    return Err(CorpusError::CountsExceed {
                        requested,
                        available: n,
                    });
                }
                if requested < n && !discard_remainder {
                    return Err(CorpusError::InvalidSpec(format!(
                        "counts cover {requested} of {n} pairs; pass discard_remainder to drop the rest"
                    )));
                }
                Ok([train, valid, test])
            }
        }
    }
}

/// Floors of the quotas, then leftover units to the largest fractional
/// remainders; ties go train, valid, test.
fn largest_remainder(n: usize, ratios: [f64; 3]) -> [usize; 3] {
    let quotas = ratios.map(|r| n as f64 * r);
    let mut sizes = quotas.map(|q| (q + 1e-9).floor() as usize);
    let assigned: usize = sizes.iter().sum();
    let mut order = [0usize, 1, 2];
    let rem = |i: usize| (quotas[i] - sizes[i] as f64).max(0.0);
    order.sort_by(|&a, &b| rem(b).partial_cmp(&rem(a)).unwrap().then(a.cmp(&b)));
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        sizes[i] += 1;
    }
    sizes
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub mode: SplitMode,
    pub seed: u64,
}

/// Seeded permutation of `0..n`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    idx
}

/// Original pair indices of each split part, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
    pub discarded: Vec<usize>,
}

pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<SplitIndices, CorpusError> {
    let [a, b, c] = spec.mode.sizes(n)?;
    let perm = permutation(n, spec.seed);
    let part = |range: std::ops::Range<usize>| {
        let mut v = perm[range].to_vec();
        v.sort_unstable();
        v
    };
    Ok(SplitIndices {
        train: part(0..a),
        valid: part(a..a + b),
        test: part(a + b..a + b + c),
        discarded: part(a + b + c..n),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub valid: usize,
    pub test: usize,
}

/// Everything needed to reproduce a split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitProvenance {
    pub seed: u64,
    pub rng: String,
    pub mode: SplitMode,
    pub corpus_size: usize,
    pub sizes: SplitSizes,
    pub discarded: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Origin>,
}

#[derive(Debug, Clone)]
pub struct Split {
    pub train: ParallelCorpus,
    pub valid: ParallelCorpus,
    pub test: ParallelCorpus,
    pub provenance: SplitProvenance,
}

pub fn split(corpus: &ParallelCorpus, spec: &SplitSpec) -> Result<Split, CorpusError> {
    let idx = split_indices(corpus.len(), spec)?;
    Ok(Split {
        provenance: SplitProvenance {
            seed: spec.seed,
            rng: RNG_ALGORITHM.to_string(),
            mode: spec.mode,
            corpus_size: corpus.len(),
            sizes: SplitSizes {
                train: idx.train.len(),
                valid: idx.valid.len(),
                test: idx.test.len(),
            },
            discarded: idx.discarded.len(),
            origin: corpus.origin.clone(),
        },
        train: corpus.subset(&idx.train),
        valid: corpus.subset(&idx.valid),
        test: corpus.subset(&idx.test),
    })
}

impl Split {
    /// Writes `{train,valid,test}.{src,tgt}` and `split.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
        fs::create_dir_all(dir).map_err(|source| CorpusError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut written = Vec::new();
        for (name, part) in [("train", &self.train), ("valid", &self.valid), ("test", &self.test)] {
            let src = dir.join(format!("{name}.src"));
            let tgt = dir.join(format!("{name}.tgt"));
            part.write(&src, &tgt)?;
            written.extend([src, tgt]);
        }
        let prov = dir.join("split.json");
        let json = serde_json::to_string_pretty(&self.provenance).expect("provenance serializes");
        fs::write(&prov, json + "\n").map_err(|source| CorpusError::Io {
            path: prov.clone(),
            source,
        })?;
        written.push(prov);
        Ok(written)
    }
}

/// `k` distinct indices of `0..n`, sorted ascending.
pub fn sample_indices(n: usize, k: usize, seed: u64) -> Result<Vec<usize>, CorpusError> {
    if k < 1 || k > n {
        return Err(CorpusError::SampleSize { k, size: n });
    }
    let mut idx = permutation(n, seed);
    idx.truncate(k);
    idx.sort_unstable();
    Ok(idx)
}

/// Seeded sample without replacement, in original corpus order.
pub fn sample_eval_set(corpus: &ParallelCorpus, k: usize, seed: u64) -> Result<ParallelCorpus, CorpusError> {
    Ok(corpus.subset(&sample_indices(corpus.len(), k, seed)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n: usize) -> ParallelCorpus {
        ParallelCorpus::from_pairs((0..n).map(|i| (format!("s{i}"), format!("t{i}"))))
    }

    #[test]
    fn load_three_pairs_and_blank_lines() {
        let dir = tempfile::tempdir().unwrap();
        let (s, t) = (dir.path().join("a.src"), dir.path().join("a.tgt"));
        fs::write(&s, "one\n\nthree\n").unwrap();
        fs::write(&t, "eins\r\nzwei\r\ndrei").unwrap();
        let c = load_parallel(&s, &t).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.pairs[1].source, "");
        assert_eq!(c.pairs[1].target, "zwei");
        assert_eq!(c.pairs[2].target, "drei");
        assert_eq!(c.blank_lines, 1);
        assert_eq!(c.origin.as_ref().unwrap().source_sha256.len(), 64);
    }

    #[test]
    fn load_mismatch_reports_counts() {
        let dir = tempfile::tempdir().unwrap();
        let (s, t) = (dir.path().join("a"), dir.path().join("b"));
        fs::write(&s, "1\n2\n3\n4\n5\n").unwrap();
        fs::write(&t, "1\n2\n3\n4\n5\n6\n").unwrap();
        match load_parallel(&s, &t) {
            Err(CorpusError::LineCountMismatch {
                source_lines,
                target_lines,
            }) => assert_eq!((source_lines, target_lines), (5, 6)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_bad_utf8_names_line() {
        let dir = tempfile::tempdir().unwrap();
        let (s, t) = (dir.path().join("a"), dir.path().join("b"));
        fs::write(&s, b"ok\nfine\nbad \xff here\n").unwrap();
        fs::write(&t, "1\n2\n3\n").unwrap();
        match load_parallel(&s, &t) {
            Err(CorpusError::Utf8 { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn largest_remainder_sizes() {
        let m = SplitMode::ratio_from_parts([98.0, 1.0, 1.0]).unwrap();
        assert_eq!(m.sizes(800_000).unwrap(), [784_000, 8_000, 8_000]);
        assert_eq!(m.sizes(10).unwrap(), [10, 0, 0]);
        let thirds = SplitMode::ratio_from_parts([1.0, 1.0, 1.0]).unwrap();
        assert_eq!(thirds.sizes(10).unwrap(), [4, 3, 3]);
        assert_eq!(thirds.sizes(11).unwrap(), [4, 4, 3]);
        let m = SplitMode::ratio_from_parts([8.0, 1.0, 1.0]).unwrap();
        assert_eq!(m.sizes(7).unwrap(), [5, 1, 1]);
    }

    #[test]
    fn counts_validation() {
        let counts = |discard_remainder| SplitMode::Counts {
            train: 784_000,
            valid: 1_000,
            test: 1_000,
            discard_remainder,
        };
        assert_eq!(counts(true).sizes(800_000).unwrap(), [784_000, 1_000, 1_000]);
        assert!(matches!(counts(false).sizes(800_000), Err(CorpusError::InvalidSpec(_))));
        assert!(matches!(
            counts(true).sizes(700_000),
            Err(CorpusError::CountsExceed { requested: 786_000, available: 700_000 })
        ));
        let bad = SplitMode::Ratio { train: 0.5, valid: 0.2, test: 0.2 };
        assert!(bad.sizes(10).is_err());
        assert!(SplitMode::ratio_from_parts([1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn split_is_a_partition() {
        let spec = SplitSpec {
            mode: SplitMode::Counts {
                train: 60,
                valid: 15,
                test: 10,
                discard_remainder: true,
            },
            seed: 3,
        };
        let idx = split_indices(100, &spec).unwrap();
        let mut all: Vec<usize> = [&idx.train, &idx.valid, &idx.test, &idx.discarded]
            .into_iter()
            .flatten()
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
        assert_eq!(idx.discarded.len(), 15);
    }

    #[test]
    fn split_and_sample_are_seeded() {
        let c = synthetic(500);
        let spec = SplitSpec {
            mode: SplitMode::ratio_from_parts([8.0, 1.0, 1.0]).unwrap(),
            seed: 7,
        };
        let a = split(&c, &spec).unwrap();
        let b = split(&c, &spec).unwrap();
        assert_eq!(a.test, b.test);
        assert_eq!(a.provenance, b.provenance);
        let other = split(&c, &SplitSpec { seed: 8, ..spec }).unwrap();
        assert_ne!(a.test, other.test);

        let s1 = sample_eval_set(&c, 50, 11).unwrap();
        assert_eq!(s1, sample_eval_set(&c, 50, 11).unwrap());
        assert_eq!(s1.len(), 50);
        let pos: Vec<usize> = s1.pairs.iter().map(|p| p.source[1..].parse().unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sample_bounds() {
        let c = synthetic(5);
        assert_eq!(sample_eval_set(&c, 5, 1).unwrap().pairs, c.pairs);
        assert!(matches!(sample_eval_set(&c, 0, 1), Err(CorpusError::SampleSize { .. })));
        assert!(matches!(sample_eval_set(&c, 6, 1), Err(CorpusError::SampleSize { .. })));
    }

    #[test]
    fn write_split_files() {
        let c = synthetic(20);
        let spec = SplitSpec {
            mode: SplitMode::ratio_from_parts([8.0, 1.0, 1.0]).unwrap(),
            seed: 1,
        };
        let dir = tempfile::tempdir().unwrap();
        let files = split(&c, &spec).unwrap().write_to(dir.path()).unwrap();
        assert_eq!(files.len(), 7);
        let prov: SplitProvenance =
            serde_json::from_str(&fs::read_to_string(dir.path().join("split.json")).unwrap()).unwrap();
        assert_eq!(prov.sizes, SplitSizes { train: 16, valid: 2, test: 2 });
        let train = load_parallel(&dir.path().join("train.src"), &dir.path().join("train.tgt")).unwrap();
        assert_eq!(train.len(), 16);
    }
}
