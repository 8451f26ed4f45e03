//! Synthetic cohorts with a planted co-endorsement level, used to validate
//! the estimator chain end to end against a known ground truth.
//!
//! Emission model, per utterance: a shared affect event fires with the base
//! rate; each coupled emotion follows the shared stream with probability
//! sqrt(co_endorsement) and otherwise draws an independent event at the same
//! base rate, so every coupled pair's event indicators have correlation
//! exactly `co_endorsement`. Uncoupled emotions emit independently. Emitted
//! terms come from the loaded lexicon's single-emotion term pools, so
//! tokenization, stoplists, bigram suppression and pair exclusion are all
//! exercised downstream.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use chrono::{DateTime, TimeZone, Utc};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{UserTimeline, Utterance};
use crate::error::{Error, Result};
use crate::lexicon::{Emotion, EmotionLexicon, ALL_EMOTIONS};

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub group: String,
    pub n_users: usize,
    /// Utterances per user (T).
    pub utterances_per_user: usize,
    /// Mean tokens per utterance.
    pub tokens_per_utterance: usize,
    /// Uniform jitter around the mean (0 = constant length).
    pub tokens_jitter: usize,
    /// Per-emotion term emission base rate per utterance.
    pub event_rate: f64,
    /// Planted co-endorsement for the coupled emotion set, in [0, 1].
    pub co_endorsement: f64,
    pub coupled_emotions: Vec<Emotion>,
    /// Lexicon terms emitted per firing emotion.
    pub terms_per_emission: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            group: "control".to_string(),
            n_users: 10,
            utterances_per_user: 500,
            tokens_per_utterance: 15,
            tokens_jitter: 0,
            event_rate: 0.3,
            co_endorsement: 0.0,
            coupled_emotions: vec![Emotion::Anger, Emotion::Sadness],
            terms_per_emission: 1,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.event_rate) || !(0.0..=1.0).contains(&self.co_endorsement) {
            return Err(Error::Config(
                "event rate and co-endorsement must lie in [0, 1]".to_string(),
            ));
        }
        if self.utterances_per_user < 1 {
            return Err(Error::Config("utterances per user must be >= 1".to_string()));
        }
        Ok(())
    }
}

/// Expected arc-level Spearman correlation for a coupled pair under this
/// generator, assuming independent per-event magnitudes: the zero atoms of
/// the two score series coincide with probability driven by the coupling,
/// and positive magnitudes are exchangeable. Linear in the co-endorsement.
pub fn expected_arc_spearman(event_rate: f64, co_endorsement: f64) -> f64 {
    let q = event_rate;
    if q <= 0.0 || q >= 1.0 {
        return 0.0;
    }
    let cov = co_endorsement * q * (1.0 - q) / 4.0;
    let var = (1.0 - q).powi(3) / 4.0 + q * (1.0 - q) + q.powi(3) / 3.0 - 0.25;
    cov / var
}

/// Term pools for the generator: single-emotion lexicon terms per emotion
/// plus non-lexicon filler words.
#[derive(Debug, Clone)]
pub struct SynthVocab {
    per_emotion: [Vec<String>; 8],
    filler: Vec<String>,
}

impl SynthVocab {
    /// Samples up to `per_emotion` single-emotion terms for every emotion
    /// from the lexicon (skipping constituents of suppressed bigrams), and
    /// takes filler words from `filler`, dropping any that could match the
    /// lexicon.
    pub fn from_lexicon(
        lexicon: &EmotionLexicon,
        per_emotion: usize,
        filler: &[String],
    ) -> Result<SynthVocab> {
        let mut bigram_parts: HashSet<&str> = HashSet::new();
        for (a, b) in lexicon.suppressed_bigrams() {
            bigram_parts.insert(a);
            bigram_parts.insert(b);
        }
        let mut pools: [Vec<String>; 8] = Default::default();
        for (term, scores) in lexicon.entries() {
            if bigram_parts.contains(term.as_str()) {
                continue;
            }
            let mut emotions = scores.emotions();
            if let (Some((e, _)), None) = (emotions.next(), emotions.next()) {
                pools[e.index()].push(term.clone());
            }
        }
        for e in ALL_EMOTIONS {
            let pool = &mut pools[e.index()];
            if pool.is_empty() {
                return Err(Error::Data(format!(
                    "no exclusive lexicon terms available for emotion {e}"
                )));
            }
            if pool.len() > per_emotion {
                // evenly spaced picks keep the pool spread over the alphabet
                let stride = pool.len() as f64 / per_emotion as f64;
                *pool = (0..per_emotion)
                    .map(|i| pool[(i as f64 * stride) as usize].clone())
                    .collect();
            }
        }
        // sorted so generation never depends on the caller's iteration order
        let mut filler: Vec<String> = filler
            .iter()
            .filter(|w| {
                !lexicon.entries().contains_key(*w)
                    && !lexicon.removed_terms().contains_key(*w)
                    && !bigram_parts.contains(w.as_str())
            })
            .cloned()
            .collect();
        filler.sort();
        filler.dedup();
        if filler.is_empty() {
            return Err(Error::Data(
                "no usable filler words outside the lexicon".to_string(),
            ));
        }
        Ok(SynthVocab {
            per_emotion: pools,
            filler,
        })
    }

    /// Generated non-word filler ("zz0", "zz1", ...), guaranteed outside
    /// any natural-language lexicon.
    pub fn generated_filler(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("zz{i}")).collect()
    }

    pub fn terms_for(&self, e: Emotion) -> &[String] {
        &self.per_emotion[e.index()]
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Deterministic per-user RNG substream derived from (seed, user_id), so
/// generation order and scheduling cannot change the output.
fn user_rng(seed: u64, user_id: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ fnv1a64(user_id.as_bytes())))
}

/// Realized emission statistics for one generated group.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CohortStats {
    pub n_users: usize,
    pub n_utterances: usize,
    /// Utterance fraction where both members of a coupled pair emitted.
    pub co_emission_rates: BTreeMap<String, f64>,
}

/// Ground truth sidecar for a planted two-group run.
#[derive(Debug, Clone, Serialize)]
pub struct SynthTruth {
    pub coupled_emotions: Vec<String>,
    pub groups: BTreeMap<String, GroupTruth>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupTruth {
    pub rho_target: f64,
    pub event_rate: f64,
    /// Expected arc Spearman for each coupled pair under this generator.
    pub analytic_spearman: f64,
    pub expected_co_emission: f64,
    pub seed: u64,
    pub stats: CohortStats,
}

fn base_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap()
}

/// Generates one user's timeline; timestamps strictly increase one minute at
/// a time.
pub fn gen_user(cfg: &SynthConfig, vocab: &SynthVocab, user_index: usize) -> UserTimeline {
    gen_user_with_stats(cfg, vocab, user_index).0
}

fn gen_user_with_stats(
    cfg: &SynthConfig,
    vocab: &SynthVocab,
    user_index: usize,
) -> (UserTimeline, BTreeMap<(Emotion, Emotion), usize>) {
    let mut pair_hits: BTreeMap<(Emotion, Emotion), usize> = BTreeMap::new();
    let user_id = format!("{}_{:04}", cfg.group, user_index);
    let mut rng = user_rng(cfg.seed, &user_id);
    let follow_p = cfg.co_endorsement.sqrt();
    let coupled: BTreeSet<Emotion> = cfg.coupled_emotions.iter().copied().collect();

    let mut utterances = Vec::with_capacity(cfg.utterances_per_user);
    for t in 0..cfg.utterances_per_user {
        let shared = rng.gen::<f64>() < cfg.event_rate;
        let mut fired: Vec<Emotion> = Vec::new();
        for e in ALL_EMOTIONS {
            let fires = if coupled.contains(&e) {
                if rng.gen::<f64>() < follow_p {
                    shared
                } else {
                    rng.gen::<f64>() < cfg.event_rate
                }
            } else {
                rng.gen::<f64>() < cfg.event_rate
            };
            if fires {
                fired.push(e);
            }
        }
        for (i, &a) in fired.iter().enumerate() {
            for &b in &fired[i + 1..] {
                if coupled.contains(&a) && coupled.contains(&b) {
                    *pair_hits.entry((a, b)).or_insert(0) += 1;
                }
            }
        }

        let mut tokens: Vec<String> = Vec::new();
        for &e in &fired {
            let pool = vocab.terms_for(e);
            for _ in 0..cfg.terms_per_emission {
                tokens.push(pool[rng.gen_range(0..pool.len())].clone());
            }
        }
        let jitter = if cfg.tokens_jitter > 0 {
            rng.gen_range(0..=2 * cfg.tokens_jitter) as i64 - cfg.tokens_jitter as i64
        } else {
            0
        };
        let target_len =
            ((cfg.tokens_per_utterance as i64 + jitter).max(1) as usize).max(tokens.len());
        while tokens.len() < target_len {
            tokens.push(vocab.filler[rng.gen_range(0..vocab.filler.len())].clone());
        }
        tokens.shuffle(&mut rng);

        let ts = base_time() + chrono::Duration::minutes(t as i64);
        utterances.push(Utterance {
            timestamp: ts,
            timestamp_raw: ts.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            text: tokens.join(" "),
            lang: Some("en".to_string()),
            line_no: 0,
        });
    }
    let n = utterances.len();
    (
        UserTimeline {
            user_id,
            group: cfg.group.clone(),
            utterances,
            n_raw: n,
            n_kept: n,
        },
        pair_hits,
    )
}

/// Generates a whole group. Users are generated in parallel from their own
/// RNG substreams, so the output does not depend on scheduling.
pub fn gen_cohort(cfg: &SynthConfig, vocab: &SynthVocab) -> Result<(Vec<UserTimeline>, CohortStats)> {
    cfg.validate()?;
    let per_user: Vec<(UserTimeline, BTreeMap<(Emotion, Emotion), usize>)> = (0..cfg.n_users)
        .into_par_iter()
        .map(|i| gen_user_with_stats(cfg, vocab, i))
        .collect();
    let mut pair_hits: BTreeMap<(Emotion, Emotion), usize> = BTreeMap::new();
    let mut timelines = Vec::with_capacity(cfg.n_users);
    for (timeline, hits) in per_user {
        for (pair, n) in hits {
            *pair_hits.entry(pair).or_insert(0) += n;
        }
        timelines.push(timeline);
    }
    let n_utterances = cfg.n_users * cfg.utterances_per_user;
    let co_emission_rates = pair_hits
        .into_iter()
        .map(|((a, b), hits)| (format!("{a}_{b}"), hits as f64 / n_utterances.max(1) as f64))
        .collect();
    Ok((
        timelines,
        CohortStats {
            n_users: cfg.n_users,
            n_utterances,
            co_emission_rates,
        },
    ))
}

fn group_truth(cfg: &SynthConfig, stats: CohortStats) -> GroupTruth {
    let q = cfg.event_rate;
    GroupTruth {
        rho_target: cfg.co_endorsement,
        event_rate: q,
        analytic_spearman: expected_arc_spearman(q, cfg.co_endorsement),
        expected_co_emission: cfg.co_endorsement * q * (1.0 - q) + q * q,
        seed: cfg.seed,
        stats,
    }
}

/// Generates a two-group corpus with co-endorsement planted per group
/// (typically higher for the condition group, so the planted direction is
/// "lower" granularity). Returns the combined corpus, sorted by user id,
/// plus the ground-truth sidecar.
pub fn gen_cohorts(
    cfg_condition: &SynthConfig,
    cfg_control: &SynthConfig,
    vocab: &SynthVocab,
) -> Result<(Vec<UserTimeline>, SynthTruth)> {
    if cfg_condition.group == cfg_control.group {
        return Err(Error::Config(
            "the two cohorts need distinct group labels".to_string(),
        ));
    }
    let (mut corpus, stats_condition) = gen_cohort(cfg_condition, vocab)?;
    let (control, stats_control) = gen_cohort(cfg_control, vocab)?;
    corpus.extend(control);
    corpus.sort_by(|a, b| a.user_id.cmp(&b.user_id));
    let mut groups = BTreeMap::new();
    groups.insert(
        cfg_condition.group.clone(),
        group_truth(cfg_condition, stats_condition),
    );
    groups.insert(cfg_control.group.clone(), group_truth(cfg_control, stats_control));
    Ok((
        corpus,
        SynthTruth {
            coupled_emotions: cfg_condition
                .coupled_emotions
                .iter()
                .map(|e| e.name().to_string())
                .collect(),
            groups,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_vocab() -> SynthVocab {
        let mut per_emotion: [Vec<String>; 8] = Default::default();
        for e in ALL_EMOTIONS {
            per_emotion[e.index()] = (0..5).map(|i| format!("{}{}", e.name(), i)).collect();
        }
        SynthVocab {
            per_emotion,
            filler: SynthVocab::generated_filler(50),
        }
    }

    #[test]
    fn fixed_seed_is_byte_identical() {
        let cfg = SynthConfig {
            n_users: 3,
            utterances_per_user: 20,
            seed: 42,
            ..SynthConfig::default()
        };
        let vocab = tiny_vocab();
        let (a, _) = gen_cohort(&cfg, &vocab).unwrap();
        let (b, _) = gen_cohort(&cfg, &vocab).unwrap();
        for (ta, tb) in a.iter().zip(&b) {
            assert_eq!(ta.user_id, tb.user_id);
            for (ua, ub) in ta.utterances.iter().zip(&tb.utterances) {
                assert_eq!(ua.text, ub.text);
                assert_eq!(ua.timestamp_raw, ub.timestamp_raw);
            }
        }
    }

    #[test]
    fn timestamps_strictly_increase() {
        let cfg = SynthConfig {
            n_users: 1,
            utterances_per_user: 30,
            ..SynthConfig::default()
        };
        let (corpus, _) = gen_cohort(&cfg, &tiny_vocab()).unwrap();
        let times: Vec<_> = corpus[0].utterances.iter().map(|u| u.timestamp).collect();
        assert!(times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_utterance_timeline() {
        let cfg = SynthConfig {
            n_users: 1,
            utterances_per_user: 1,
            ..SynthConfig::default()
        };
        let (corpus, _) = gen_cohort(&cfg, &tiny_vocab()).unwrap();
        assert_eq!(corpus[0].utterances.len(), 1);
    }

    #[test]
    fn empty_cohort() {
        let cfg = SynthConfig {
            n_users: 0,
            ..SynthConfig::default()
        };
        let (corpus, stats) = gen_cohort(&cfg, &tiny_vocab()).unwrap();
        assert!(corpus.is_empty());
        assert_eq!(stats.n_utterances, 0);
    }

    #[test]
    fn realized_co_emission_tracks_target() {
        let cfg = SynthConfig {
            n_users: 10,
            utterances_per_user: 2000,
            co_endorsement: 0.6,
            seed: 7,
            ..SynthConfig::default()
        };
        let (_, stats) = gen_cohort(&cfg, &tiny_vocab()).unwrap();
        let q = cfg.event_rate;
        let expected = cfg.co_endorsement * q * (1.0 - q) + q * q;
        let n = stats.n_utterances as f64;
        let se = (expected * (1.0 - expected) / n).sqrt();
        let realized = stats.co_emission_rates["anger_sadness"];
        assert!(
            (realized - expected).abs() < 3.0 * se,
            "realized {realized} vs expected {expected} (se {se})"
        );
    }

    #[test]
    fn analytic_spearman_shape() {
        assert_eq!(expected_arc_spearman(0.3, 0.0), 0.0);
        let full = expected_arc_spearman(0.3, 1.0);
        assert!(full > 0.95 && full < 1.0, "{full}");
        // linear in the coupling
        let half = expected_arc_spearman(0.3, 0.5);
        assert!((half - full / 2.0).abs() < 1e-12);
    }

    #[test]
    fn distinct_group_labels_required() {
        let cfg = SynthConfig::default();
        assert!(gen_cohorts(&cfg, &cfg, &tiny_vocab()).is_err());
    }
}
