//! Property-based invariants across the pipeline.

use proptest::prelude::*;

use granulate::arcs::{score_span, ArcConfig, SideLexicon};
use granulate::granularity::{fractional_ranks, spearman};
use granulate::lexicon::Emotion;
use granulate::stats::{bh_correct, welch_t};
use granulate::tokenizer::{match_terms, tokenize, MatchVocab, TokenStream};

proptest! {
    #[test]
    fn tokenizing_texts_separately_equals_streaming(texts in prop::collection::vec(".{0,40}", 0..6)) {
        let stream = TokenStream::from_texts(texts.iter().map(|s| s.as_str()));
        let mut flat = Vec::new();
        let mut indices = Vec::new();
        for (i, t) in texts.iter().enumerate() {
            for tok in tokenize(t) {
                flat.push(tok);
                indices.push(i);
            }
        }
        prop_assert_eq!(stream.tokens, flat);
        prop_assert_eq!(stream.source_utterance_index, indices);
    }

    #[test]
    fn matches_never_overlap(
        tokens in prop::collection::vec("[a-d]{1,2}", 0..20),
        vocab_words in prop::collection::vec("[a-d]{1,2}", 0..6),
        bigrams in prop::collection::vec(("[a-d]{1,2}", "[a-d]{1,2}"), 0..4),
    ) {
        let mut vocab = MatchVocab::new();
        for w in &vocab_words {
            vocab.insert(w);
        }
        for (a, b) in &bigrams {
            vocab.insert(&format!("{a} {b}"));
        }
        let tokens: Vec<String> = tokens;
        let matches = match_terms(&tokens, &vocab, true);
        let mut covered = vec![false; tokens.len()];
        for m in &matches {
            for i in m.position..m.position + m.len {
                prop_assert!(i < tokens.len());
                prop_assert!(!covered[i], "positions must participate in at most one match");
                covered[i] = true;
            }
        }
        // greedy scan is position-sorted
        prop_assert!(matches.windows(2).all(|w| w[0].position < w[1].position));
    }

    #[test]
    fn spearman_invariant_under_monotone_transforms(
        pairs in prop::collection::vec((0u8..8, 0u8..8), 2..60),
        scale in 0.1f64..3.0,
    ) {
        let xs: Vec<f64> = pairs.iter().map(|(a, _)| *a as f64 / 7.0).collect();
        let ys: Vec<f64> = pairs.iter().map(|(_, b)| *b as f64 / 7.0).collect();
        let transformed: Vec<f64> = xs.iter().map(|x| (scale * x).exp() + 2.0).collect();
        match (spearman(&xs, &ys), spearman(&transformed, &ys)) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
            (a, b) => prop_assert_eq!(a.is_none(), b.is_none()),
        }
    }

    #[test]
    fn fractional_ranks_sum_is_invariant(xs in prop::collection::vec(0u8..5, 1..50)) {
        let xs: Vec<f64> = xs.into_iter().map(|v| v as f64).collect();
        let ranks = fractional_ranks(&xs);
        let n = xs.len() as f64;
        prop_assert!((ranks.iter().sum::<f64>() - n * (n + 1.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn bh_adjusted_dominate_raw_and_permute_cleanly(
        ps in prop::collection::vec(0.0f64..=1.0, 1..20),
        swap in (0usize..20, 0usize..20),
    ) {
        let (adjusted, _) = bh_correct(&ps, 0.05);
        for (p, a) in ps.iter().zip(&adjusted) {
            prop_assert!(a >= p);
            prop_assert!(*a <= 1.0);
        }
        let mut permuted = ps.clone();
        let (i, j) = (swap.0 % ps.len(), swap.1 % ps.len());
        permuted.swap(i, j);
        let (adj_perm, _) = bh_correct(&permuted, 0.05);
        let mut back = adj_perm.clone();
        back.swap(i, j);
        for (a, b) in adjusted.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn welch_t_is_antisymmetric(
        a in prop::collection::vec(-5.0f64..5.0, 3..20),
        b in prop::collection::vec(-5.0f64..5.0, 3..20),
    ) {
        if let (Ok(ab), Ok(ba)) = (welch_t(&a, &b), welch_t(&b, &a)) {
            prop_assert!((ab.t + ba.t).abs() < 1e-10);
            prop_assert!((ab.df - ba.df).abs() < 1e-9);
            prop_assert!((ab.p - ba.p).abs() < 1e-10);
        }
    }

    #[test]
    fn span_scores_stay_in_unit_interval(
        tokens in prop::collection::vec("[a-f]", 1..30),
        intensities in prop::collection::vec(0.0f64..=1.0, 6),
    ) {
        let vocabulary = ["a", "b", "c", "d", "e", "f"];
        let side = SideLexicon::new(
            Emotion::Joy,
            vocabulary
                .iter()
                .zip(&intensities)
                .map(|(t, v)| (t.to_string(), *v)),
            &[],
        );
        let tokens: Vec<String> = tokens;
        for denominator in [
            granulate::arcs::Denominator::AllTokens,
            granulate::arcs::Denominator::MatchedTermsOnly,
        ] {
            let cfg = ArcConfig {
                denominator,
                ..ArcConfig::default()
            };
            if let Some(score) = score_span(&tokens, &side, &cfg) {
                prop_assert!((0.0..=1.0).contains(&score), "score {score}");
            }
        }
    }
}

#[test]
fn pair_exclusive_identity_on_random_lexicons() {
    use granulate::lexicon::{EmotionLexicon, ALL_EMOTIONS};
    use std::io::Write as _;

    // deterministic pseudo-random mini lexicons
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for round in 0..20 {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        let n_terms = 5 + (next() % 40) as usize;
        for t in 0..n_terms {
            let mask = 1 + (next() % 255) as u8;
            for (i, e) in ALL_EMOTIONS.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    writeln!(f, "term{round}_{t}\t{e}\t0.5").unwrap();
                }
            }
        }
        let lex = EmotionLexicon::load(f.path()).unwrap();
        for (a, b) in granulate::lexicon::emotion_pairs() {
            let view = lex.pair_exclusive(a, b).unwrap();
            assert_eq!(view.a_exclusive.len() + view.n_common, lex.term_count(a));
            assert_eq!(view.b_exclusive.len() + view.n_common, lex.term_count(b));
            assert!(view
                .a_exclusive
                .keys()
                .all(|t| !view.b_exclusive.contains_key(t)));
        }
    }
}
