//! Profile computation engine: corpus × lexicon × config → per-user
//! granularity profiles.
//!
//! Matching runs once per utterance against the full lexicon; the 28
//! pair-exclusive views are then just mask checks over the matched entries,
//! which keeps the arithmetic identical to building each pair arc from its
//! own `SideLexicon` (the slower reference path the tests compare against).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::arcs::{windowed_points, ArcConfig, ArcMode, EmotionArc, NoMatchPolicy};
use crate::corpus::UserTimeline;
use crate::granularity::{
    eg_values, eligibility, spearman, EligibilityThresholds, GranularityProfile, PairCorrelation,
};
use crate::lexicon::{emotion_pairs, Emotion, EmotionLexicon, EmotionScores};
use crate::tokenizer::{match_terms, tokenize, MatchVocab};

struct EngineEntry {
    scores: EmotionScores,
}

/// One utterance after matching: token count plus matched lexicon entries
/// (token position, arena id), in token order.
struct MatchedUtterance {
    n_tokens: usize,
    matches: Vec<(usize, u32)>,
}

pub struct ArcEngine {
    entries: Vec<EngineEntry>,
    ids: HashMap<String, u32>,
    vocab: MatchVocab,
    pairs: Vec<(Emotion, Emotion)>,
}

impl ArcEngine {
    pub fn new(lexicon: &EmotionLexicon) -> Self {
        let mut entries = Vec::with_capacity(lexicon.n_terms());
        let mut ids = HashMap::with_capacity(lexicon.n_terms());
        for (term, scores) in lexicon.entries() {
            ids.insert(term.clone(), entries.len() as u32);
            entries.push(EngineEntry { scores: *scores });
        }
        ArcEngine {
            entries,
            ids,
            vocab: lexicon.match_vocab(),
            pairs: emotion_pairs(),
        }
    }

    pub fn pairs(&self) -> &[(Emotion, Emotion)] {
        &self.pairs
    }

    fn match_timeline(&self, timeline: &UserTimeline, cfg: &ArcConfig) -> Vec<MatchedUtterance> {
        timeline
            .utterances
            .iter()
            .map(|u| {
                let tokens = tokenize(&u.text);
                let matches = match_terms(&tokens, &self.vocab, cfg.strip_hashtags)
                    .into_iter()
                    .filter(|m| m.len == 1)
                    .map(|m| (m.position, self.ids[&m.term]))
                    .collect();
                MatchedUtterance {
                    n_tokens: tokens.len(),
                    matches,
                }
            })
            .collect()
    }

    /// Arc points for one lexicon side described by a mask predicate over
    /// entry scores (pair-exclusive: has `a` and not `b`).
    fn side_points(
        &self,
        matched: &[MatchedUtterance],
        emotion: Emotion,
        exclude: Option<Emotion>,
        cfg: &ArcConfig,
    ) -> Vec<Option<f64>> {
        let included = |id: u32| {
            let s = &self.entries[id as usize].scores;
            s.has(emotion) && exclude.map_or(true, |x| !s.has(x))
        };
        match cfg.mode {
            ArcMode::Utterance => matched
                .iter()
                .map(|u| {
                    if u.n_tokens == 0 {
                        return None;
                    }
                    let mut sum = 0.0;
                    let mut count = 0usize;
                    for &(_, id) in &u.matches {
                        if included(id) {
                            sum += self.entries[id as usize].scores.get(emotion).unwrap();
                            count += 1;
                        }
                    }
                    span_score(sum, count, u.n_tokens, cfg)
                })
                .collect(),
            ArcMode::Window => {
                let mut points = Vec::new();
                let mut offset = 0usize;
                let mut contribs: Vec<(usize, f64)> = Vec::new();
                for u in matched {
                    for &(pos, id) in &u.matches {
                        if included(id) {
                            contribs.push((
                                offset + pos,
                                self.entries[id as usize].scores.get(emotion).unwrap(),
                            ));
                        }
                    }
                    offset += u.n_tokens;
                    if cfg.reset_windows_at_utterance {
                        points.extend(windowed_points(offset, &contribs, cfg));
                        offset = 0;
                        contribs.clear();
                    }
                }
                if !cfg.reset_windows_at_utterance {
                    points = windowed_points(offset, &contribs, cfg);
                }
                points
            }
        }
    }

    /// Full pair-exclusive arcs for every emotion pair, as `EmotionArc`
    /// values (used by dumps and the reference-path tests).
    pub fn user_pair_arcs(
        &self,
        timeline: &UserTimeline,
        cfg: &ArcConfig,
    ) -> Vec<((Emotion, Emotion), EmotionArc, EmotionArc)> {
        let matched = self.match_timeline(timeline, cfg);
        self.pairs
            .iter()
            .map(|&(a, b)| {
                let arc = |e, x| {
                    let points = self.side_points(&matched, e, Some(x), cfg);
                    arc_from_points(&timeline.user_id, e, cfg, points, &matched, |id| {
                        let s = &self.entries[id as usize].scores;
                        s.has(e) && !s.has(x)
                    })
                };
                ((a, b), arc(a, b), arc(b, a))
            })
            .collect()
    }

    /// Whole-lexicon arcs for the eight emotions (no pair exclusion).
    pub fn user_emotion_arcs(&self, timeline: &UserTimeline, cfg: &ArcConfig) -> Vec<EmotionArc> {
        let matched = self.match_timeline(timeline, cfg);
        crate::lexicon::ALL_EMOTIONS
            .iter()
            .map(|&e| {
                let points = self.side_points(&matched, e, None, cfg);
                arc_from_points(&timeline.user_id, e, cfg, points, &matched, |id| {
                    self.entries[id as usize].scores.has(e)
                })
            })
            .collect()
    }

    /// One user's granularity profile under the configured arcs and
    /// eligibility thresholds.
    pub fn user_profile(
        &self,
        timeline: &UserTimeline,
        cfg: &ArcConfig,
        thresholds: &EligibilityThresholds,
    ) -> GranularityProfile {
        let matched = self.match_timeline(timeline, cfg);
        let n_scored_utterances = matched.iter().filter(|u| !u.matches.is_empty()).count();
        let mut unique: Vec<u32> = matched
            .iter()
            .flat_map(|u| u.matches.iter().map(|&(_, id)| id))
            .collect();
        unique.sort_unstable();
        unique.dedup();
        let n_unique_lexicon_terms = unique.len();

        let pair_matrix: Vec<PairCorrelation> = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                let pa = self.side_points(&matched, a, Some(b), cfg);
                let pb = self.side_points(&matched, b, Some(a), cfg);
                let (xs, ys) = crate::granularity::align_pairs(&pa, &pb);
                PairCorrelation {
                    emotion_a: a,
                    emotion_b: b,
                    rho: spearman(&xs, &ys),
                    n_points: xs.len(),
                }
            })
            .collect();

        let mut eligible = eligibility(n_scored_utterances, n_unique_lexicon_terms, thresholds);
        if thresholds.require_all_pairs_defined && pair_matrix.iter().any(|p| p.rho.is_none()) {
            eligible = false;
        }
        GranularityProfile {
            user_id: timeline.user_id.clone(),
            group: timeline.group.clone(),
            eg: eg_values(&pair_matrix),
            pair_matrix,
            eligible,
            n_scored_utterances,
            n_unique_lexicon_terms,
        }
    }

    /// Data-parallel profile computation over a corpus; output sorted by
    /// user id regardless of scheduling.
    pub fn profiles(
        &self,
        corpus: &[UserTimeline],
        cfg: &ArcConfig,
        thresholds: &EligibilityThresholds,
    ) -> Vec<GranularityProfile> {
        let mut profiles: Vec<GranularityProfile> = corpus
            .par_iter()
            .map(|t| self.user_profile(t, cfg, thresholds))
            .collect();
        profiles.sort_by(|a, b| a.user_id.cmp(&b.user_id));
        profiles
    }
}

fn span_score(sum: f64, n_matched: usize, span_len: usize, cfg: &ArcConfig) -> Option<f64> {
    if n_matched == 0 {
        return match cfg.no_match_policy {
            NoMatchPolicy::Zero => Some(0.0),
            NoMatchPolicy::Missing => None,
        };
    }
    Some(match cfg.denominator {
        crate::arcs::Denominator::AllTokens => sum / span_len as f64,
        crate::arcs::Denominator::MatchedTermsOnly => sum / n_matched as f64,
    })
}

fn arc_from_points(
    user_id: &str,
    emotion: Emotion,
    cfg: &ArcConfig,
    points: Vec<Option<f64>>,
    matched: &[MatchedUtterance],
    included: impl Fn(u32) -> bool,
) -> EmotionArc {
    let mut unique: Vec<u32> = matched
        .iter()
        .flat_map(|u| u.matches.iter().map(|&(_, id)| id))
        .filter(|&id| included(id))
        .collect();
    unique.sort_unstable();
    unique.dedup();
    let n_valid = points.iter().filter(|p| p.is_some()).count();
    EmotionArc {
        user_id: user_id.to_string(),
        emotion,
        config: cfg.fingerprint(),
        points,
        n_valid,
        n_unique_terms: unique.len(),
    }
}
