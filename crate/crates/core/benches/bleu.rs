use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use gae_core::bleu::{self, BleuConfig, SegmentPair, Tokenizer, TokenizerMode};
use gae_core::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIZES: [usize; 3] = [100, 1_000, 10_000];

fn sentence(rng: &mut ChaCha8Rng) -> String {
    let len = rng.random_range(10..40);
    (0..len)
        .map(|_| format!("t{}", rng.random_range(0..2_000)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Two references per segment; candidates share about half their tokens
/// with the first reference.
fn corpus(n: usize) -> Vec<SegmentPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let tok = Tokenizer::new(TokenizerMode::Whitespace);
    (0..n)
        .map(|_| {
            let reference = sentence(&mut rng);
            let candidate: Vec<String> = reference
                .split(' ')
                .map(|w| if rng.random_bool(0.5) { w.to_string() } else { format!("x{w}") })
                .collect();
            let refs = [reference, sentence(&mut rng)];
            SegmentPair::from_text(&candidate.join(" "), &refs, tok).unwrap()
        })
        .collect()
}

fn strategies() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn corpus_bleu(c: &mut Criterion) {
    let config = BleuConfig::default();
    let mut group = c.benchmark_group("corpus_bleu");
    for n in SIZES {
        let segments = corpus(n);
        group.throughput(Throughput::Elements(n as u64));
        for (name, exec) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, n), &segments, |b, segs| {
                b.iter(|| bleu::bleu_with(black_box(segs), &config, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn sentence_bleus(c: &mut Criterion) {
    let config = BleuConfig::default();
    let mut group = c.benchmark_group("sentence_bleus");
    for n in SIZES {
        let segments = corpus(n);
        group.throughput(Throughput::Elements(n as u64));
        for (name, exec) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, n), &segments, |b, segs| {
                b.iter(|| bleu::sentence_bleus(black_box(segs), &config, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn tokenize(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lines: Vec<String> = (0..1_000).map(|_| sentence(&mut rng) + ", and more.").collect();
    let mut group = c.benchmark_group("tokenize");
    group.throughput(Throughput::Elements(lines.len() as u64));
    for mode in [TokenizerMode::Whitespace, TokenizerMode::PunctSplit] {
        let tok = Tokenizer::new(mode);
        group.bench_function(mode.name(), |b| {
            b.iter(|| lines.iter().map(|l| tok.tokenize(black_box(l)).len()).sum::<usize>())
        });
    }
    group.finish();
}

criterion_group!(benches, corpus_bleu, sentence_bleus, tokenize);
criterion_main!(benches);
