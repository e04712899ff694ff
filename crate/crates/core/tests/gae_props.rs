mod common;

use std::collections::BTreeMap;

use common::grid_annotations;
use gae_core::gae::{self, GaeAnnotation, GaeCategory, GaeError, GaeSession, Judgment, SessionItem};
use proptest::prelude::*;

type Grid = Vec<[u8; GaeCategory::COUNT]>;

fn grid() -> impl Strategy<Value = Grid> {
    prop::collection::vec(prop::array::uniform9(0..=1u8), 1..=60)
}

fn session(n: usize) -> GaeSession {
    let items = (1..=n).map(|i| SessionItem::new(i.to_string(), "", "", "")).collect();
    GaeSession::new("s", "m", items).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn three_means_coincide(g in grid()) {
        let anns = grid_annotations(&g, "a");
        let t = gae::model_score(&anns).unwrap();
        let s = g.len() as f64;
        let ones: u32 = g.iter().flatten().map(|&b| b as u32).sum();
        let sentence_mean = t.sentence_scores.iter().map(|x| x.score).sum::<f64>() / s;
        let category_mean = t.category_values().iter().sum::<f64>() / 9.0;
        let grand = 100.0 * ones as f64 / (9.0 * s);
        prop_assert!((t.model_score - category_mean).abs() <= 1e-9);
        prop_assert!((t.model_score - sentence_mean).abs() <= 1e-9);
        prop_assert!((t.model_score - grand).abs() <= 1e-9);
    }

    #[test]
    fn scores_are_bounded_and_granular(g in grid()) {
        let t = gae::model_score(&grid_annotations(&g, "a")).unwrap();
        for v in t.category_values() {
            prop_assert!((0.0..=100.0).contains(&v));
            prop_assert!(gae::on_granularity(v, g.len()));
        }
        for s in &t.sentence_scores {
            prop_assert!((0.0..=100.0).contains(&s.score));
        }
    }

    #[test]
    fn flipping_one_judgment_moves_only_its_cells(
        g in grid(),
        row in any::<prop::sample::Index>(),
        col in 0..GaeCategory::COUNT,
    ) {
        let row = row.index(g.len());
        let s = g.len() as f64;
        let mut flipped = g.clone();
        flipped[row][col] ^= 1;
        let up = if flipped[row][col] == 1 { 1.0 } else { -1.0 };
        let a = gae::model_score(&grid_annotations(&g, "a")).unwrap();
        let b = gae::model_score(&grid_annotations(&flipped, "a")).unwrap();
        prop_assert!((b.model_score - a.model_score - up * 100.0 / (9.0 * s)).abs() <= 1e-9);
        for (i, (x, y)) in a.sentence_scores.iter().zip(&b.sentence_scores).enumerate() {
            let d = if i == row { up * 100.0 / 9.0 } else { 0.0 };
            prop_assert!((y.score - x.score - d).abs() <= 1e-9);
        }
        for c in GaeCategory::ALL {
            let d = if c.index() == col { up * 100.0 / s } else { 0.0 };
            prop_assert!((b.category(c) - a.category(c) - d).abs() <= 1e-9);
        }
    }

    #[test]
    fn single_annotator_pool_is_that_annotator(g in grid()) {
        let mut sess = session(g.len());
        for a in grid_annotations(&g, "only") {
            sess.upsert(a).unwrap();
        }
        let p = gae::pooled_scores(&sess);
        let pooled = p.pooled.unwrap();
        prop_assert_eq!(pooled.category_values(), p.per_annotator[0].category_values());
        prop_assert!(p.agreement.is_none());
    }

    #[test]
    fn pooled_is_mean_of_annotators(g1 in grid(), g2 in grid()) {
        let n = g1.len().max(g2.len());
        let mut sess = session(n);
        for a in grid_annotations(&g1, "x").into_iter().chain(grid_annotations(&g2, "y")) {
            sess.upsert(a).unwrap();
        }
        let p = gae::pooled_scores(&sess);
        let pooled = p.pooled.unwrap();
        for c in GaeCategory::ALL {
            let mean = (p.per_annotator[0].category(c) + p.per_annotator[1].category(c)) / 2.0;
            prop_assert!((pooled.category(c) - mean).abs() <= 1e-9);
        }
        let agreement = p.agreement.unwrap();
        prop_assert!(agreement.values().all(|v| (0.0..=100.0).contains(v)));
        prop_assert_eq!(p.overlapping_sentences, g1.len().min(g2.len()));
    }

    #[test]
    fn dropping_any_category_is_rejected(bits in prop::array::uniform9(0..=1u8), drop in 0..GaeCategory::COUNT) {
        let raw: BTreeMap<String, i64> = GaeCategory::ALL
            .into_iter()
            .zip(bits)
            .filter(|(c, _)| c.index() != drop)
            .map(|(c, b)| (c.key().to_string(), b as i64))
            .collect();
        prop_assert_eq!(
            gae::Judgments::from_map(&raw),
            Err(GaeError::MissingCategories(vec![GaeCategory::ALL[drop]]))
        );
    }

    #[test]
    fn annotation_json_round_trip(bits in prop::array::uniform9(0..=1u8), comment in proptest::option::of("[a-z ]{0,12}")) {
        let mut a = GaeAnnotation::new("7", "ann", gae::Judgments::from_bits(bits).unwrap());
        if let Some(c) = comment {
            a = a.with_comment(c);
        }
        let back: GaeAnnotation = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(a, back);
    }
}

#[test]
fn judgments_accept_only_zero_and_one() {
    let mut raw: BTreeMap<String, i64> =
        GaeCategory::ALL.iter().map(|c| (c.key().to_string(), 1)).collect();
    raw.insert("tense".into(), 2);
    assert!(matches!(gae::Judgments::from_map(&raw), Err(GaeError::InvalidJudgment { .. })));
    assert_eq!(Judgment::from_value(2), None);
}
