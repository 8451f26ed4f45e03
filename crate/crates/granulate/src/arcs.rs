//! Emotion arcs: temporal sequences of lexicon-based emotion scores, built
//! per utterance or over sliding word-count windows.

use std::collections::{BTreeSet, HashMap};

use crate::corpus::UserTimeline;
use crate::lexicon::{EmotionLexicon, Emotion, PairLexicon};
use crate::tokenizer::{match_terms, tokenize, MatchVocab};

/// Arc operationalization: one point per utterance, or one point per
/// word-count window slid over the concatenated token stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcMode {
    Utterance,
    Window,
}

/// What to do with a span containing no lexicon terms: score it 0 or drop
/// the point from the arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoMatchPolicy {
    Zero,
    Missing,
}

/// Span score denominator: all tokens in the span (emotion density) or only
/// the matched terms (mean matched intensity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    AllTokens,
    MatchedTermsOnly,
}

#[derive(Debug, Clone)]
pub struct ArcConfig {
    pub mode: ArcMode,
    pub window_size: usize,
    pub step: usize,
    pub no_match_policy: NoMatchPolicy,
    pub denominator: Denominator,
    /// Include trailing windows shorter than `window_size`. Off by default:
    /// partial windows inflate variance at stream ends.
    pub include_partial_windows: bool,
    /// Restart windows at utterance boundaries instead of spanning them.
    pub reset_windows_at_utterance: bool,
    /// Strip a single leading `#` before lexicon matching.
    pub strip_hashtags: bool,
}

impl Default for ArcConfig {
    fn default() -> Self {
        ArcConfig {
            mode: ArcMode::Utterance,
            window_size: 100,
            step: 1,
            no_match_policy: NoMatchPolicy::Zero,
            denominator: Denominator::AllTokens,
            include_partial_windows: false,
            reset_windows_at_utterance: false,
            strip_hashtags: true,
        }
    }
}

impl ArcConfig {
    pub fn validate(&self) -> crate::error::Result<()> {
        if self.window_size < 1 || self.step < 1 {
            return Err(crate::error::Error::Config(format!(
                "window size and step must be >= 1, got {} and {}",
                self.window_size, self.step
            )));
        }
        Ok(())
    }

    /// Compact description of every scoring-relevant knob; embedded in arcs
    /// and run manifests.
    pub fn fingerprint(&self) -> String {
        let mode = match self.mode {
            ArcMode::Utterance => "utterance".to_string(),
            ArcMode::Window => format!("window{}step{}", self.window_size, self.step),
        };
        format!(
            "{mode};policy={};denom={};partial={};reset={};strip_hashtags={}",
            match self.no_match_policy {
                NoMatchPolicy::Zero => "zero",
                NoMatchPolicy::Missing => "missing",
            },
            match self.denominator {
                Denominator::AllTokens => "all_tokens",
                Denominator::MatchedTermsOnly => "matched_terms_only",
            },
            self.include_partial_windows,
            self.reset_windows_at_utterance,
            self.strip_hashtags,
        )
    }
}

/// One side of a pair-exclusive lexicon view (or a whole-lexicon emotion
/// column), packaged with the matching vocabulary. Suppressed bigrams are in
/// the vocabulary so they consume their tokens but contribute no score.
#[derive(Debug, Clone)]
pub struct SideLexicon {
    pub emotion: Emotion,
    terms: HashMap<String, f64>,
    vocab: MatchVocab,
}

impl SideLexicon {
    pub fn new(
        emotion: Emotion,
        terms: impl IntoIterator<Item = (String, f64)>,
        suppressed_bigrams: &[(String, String)],
    ) -> Self {
        let terms: HashMap<String, f64> = terms.into_iter().collect();
        let mut vocab = MatchVocab::new();
        for term in terms.keys() {
            vocab.insert(term);
        }
        for (a, b) in suppressed_bigrams {
            vocab.insert(&format!("{a} {b}"));
        }
        SideLexicon {
            emotion,
            terms,
            vocab,
        }
    }

    /// The `emotion_a` side of a pair-exclusive view.
    pub fn side_a(pair: &PairLexicon, lexicon: &EmotionLexicon) -> Self {
        Self::new(
            pair.emotion_a,
            pair.a_exclusive.iter().map(|(t, s)| (t.clone(), *s)),
            lexicon.suppressed_bigrams(),
        )
    }

    /// The `emotion_b` side of a pair-exclusive view.
    pub fn side_b(pair: &PairLexicon, lexicon: &EmotionLexicon) -> Self {
        Self::new(
            pair.emotion_b,
            pair.b_exclusive.iter().map(|(t, s)| (t.clone(), *s)),
            lexicon.suppressed_bigrams(),
        )
    }

    /// A whole-lexicon view for one emotion (no pair exclusion); used for
    /// arc dumps and plotting.
    pub fn single(lexicon: &EmotionLexicon, emotion: Emotion) -> Self {
        Self::new(
            emotion,
            lexicon
                .entries()
                .iter()
                .filter_map(|(t, s)| s.get(emotion).map(|v| (t.clone(), v))),
            lexicon.suppressed_bigrams(),
        )
    }

    pub fn intensity(&self, term: &str) -> Option<f64> {
        self.terms.get(term).copied()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Matched unigram contributions within one utterance: (token position,
/// intensity, term). Suppressed bigram hits consume their tokens and emit
/// nothing.
fn matched_contributions(
    tokens: &[String],
    side: &SideLexicon,
    cfg: &ArcConfig,
) -> Vec<(usize, f64, String)> {
    match_terms(tokens, &side.vocab, cfg.strip_hashtags)
        .into_iter()
        .filter(|m| m.len == 1)
        .filter_map(|m| {
            side.intensity(&m.term)
                .map(|v| (m.position, v, m.term))
        })
        .collect()
}

fn span_score(sum: f64, n_matched: usize, span_len: usize, cfg: &ArcConfig) -> Option<f64> {
    if n_matched == 0 {
        return match cfg.no_match_policy {
            NoMatchPolicy::Zero => Some(0.0),
            NoMatchPolicy::Missing => None,
        };
    }
    Some(match cfg.denominator {
        Denominator::AllTokens => sum / span_len as f64,
        Denominator::MatchedTermsOnly => sum / n_matched as f64,
    })
}

/// Scores one token span against a lexicon side: matched intensities summed
/// and divided by the configured denominator. Empty spans are missing
/// regardless of policy.
pub fn score_span(tokens: &[String], side: &SideLexicon, cfg: &ArcConfig) -> Option<f64> {
    if tokens.is_empty() {
        return None;
    }
    let matched = matched_contributions(tokens, side, cfg);
    let sum: f64 = matched.iter().map(|(_, v, _)| v).sum();
    span_score(sum, matched.len(), tokens.len(), cfg)
}

/// A per-user, per-emotion arc under one configuration.
#[derive(Debug, Clone)]
pub struct EmotionArc {
    pub user_id: String,
    pub emotion: Emotion,
    pub config: String,
    pub points: Vec<Option<f64>>,
    pub n_valid: usize,
    pub n_unique_terms: usize,
}

impl EmotionArc {
    fn new(user_id: &str, emotion: Emotion, cfg: &ArcConfig, points: Vec<Option<f64>>, unique: usize) -> Self {
        let n_valid = points.iter().filter(|p| p.is_some()).count();
        EmotionArc {
            user_id: user_id.to_string(),
            emotion,
            config: cfg.fingerprint(),
            points,
            n_valid,
            n_unique_terms: unique,
        }
    }
}

/// Utterance-level arc: one point per kept utterance, in temporal order.
pub fn utterance_arc(timeline: &UserTimeline, side: &SideLexicon, cfg: &ArcConfig) -> EmotionArc {
    let mut points = Vec::with_capacity(timeline.utterances.len());
    let mut unique = BTreeSet::new();
    for u in &timeline.utterances {
        let tokens = tokenize(&u.text);
        if tokens.is_empty() {
            points.push(None);
            continue;
        }
        let matched = matched_contributions(&tokens, side, cfg);
        let sum: f64 = matched.iter().map(|(_, v, _)| v).sum();
        points.push(span_score(sum, matched.len(), tokens.len(), cfg));
        for (_, _, term) in matched {
            unique.insert(term);
        }
    }
    EmotionArc::new(&timeline.user_id, side.emotion, cfg, points, unique.len())
}

/// Rolling sums are recomputed from scratch this often to bound float drift.
const ROLLING_REFRESH: usize = 1 << 20;

/// Sliding-window scores over one token segment via rolling sums. Window
/// starts advance by `step`; full windows only unless partials are enabled.
pub(crate) fn windowed_points(
    n_tokens: usize,
    contributions: &[(usize, f64)],
    cfg: &ArcConfig,
) -> Vec<Option<f64>> {
    windowed_points_with_refresh(n_tokens, contributions, cfg, ROLLING_REFRESH)
}

fn windowed_points_with_refresh(
    n_tokens: usize,
    contributions: &[(usize, f64)],
    cfg: &ArcConfig,
    refresh_every: usize,
) -> Vec<Option<f64>> {
    let w = cfg.window_size;
    if n_tokens == 0 {
        return Vec::new();
    }
    let last_start = if cfg.include_partial_windows {
        n_tokens - 1
    } else if n_tokens >= w {
        n_tokens - w
    } else {
        return Vec::new();
    };

    let mut points = Vec::with_capacity(last_start / cfg.step + 1);
    let mut lo = 0usize; // first contribution with pos >= start
    let mut hi = 0usize; // first contribution with pos >= end
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut windows_since_refresh = 0usize;

    let mut start = 0usize;
    while start <= last_start {
        let end = (start + w).min(n_tokens);
        while lo < contributions.len() && contributions[lo].0 < start {
            sum -= contributions[lo].1;
            count -= 1;
            lo += 1;
        }
        while hi < contributions.len() && contributions[hi].0 < end {
            sum += contributions[hi].1;
            count += 1;
            hi += 1;
        }
        windows_since_refresh += 1;
        if windows_since_refresh >= refresh_every {
            sum = contributions[lo..hi].iter().map(|(_, v)| v).sum();
            windows_since_refresh = 0;
        }
        points.push(span_score(sum, count, end - start, cfg));
        start += cfg.step;
    }
    points
}

/// Word-count-window arc over the timeline's concatenated token stream.
/// Matching runs per utterance (so bigrams never form across posts); windows
/// span utterance boundaries unless the reset flag is set.
pub fn window_arc(timeline: &UserTimeline, side: &SideLexicon, cfg: &ArcConfig) -> EmotionArc {
    let mut unique = BTreeSet::new();
    let mut points = Vec::new();

    let mut segment_tokens = 0usize;
    let mut segment_contribs: Vec<(usize, f64)> = Vec::new();
    for u in &timeline.utterances {
        let tokens = tokenize(&u.text);
        for (pos, v, term) in matched_contributions(&tokens, side, cfg) {
            segment_contribs.push((segment_tokens + pos, v));
            unique.insert(term);
        }
        segment_tokens += tokens.len();
        if cfg.reset_windows_at_utterance {
            points.extend(windowed_points(segment_tokens, &segment_contribs, cfg));
            segment_tokens = 0;
            segment_contribs.clear();
        }
    }
    if !cfg.reset_windows_at_utterance {
        points = windowed_points(segment_tokens, &segment_contribs, cfg);
    }
    EmotionArc::new(&timeline.user_id, side.emotion, cfg, points, unique.len())
}

/// Arc under the configured mode.
pub fn build_arc(timeline: &UserTimeline, side: &SideLexicon, cfg: &ArcConfig) -> EmotionArc {
    match cfg.mode {
        ArcMode::Utterance => utterance_arc(timeline, side, cfg),
        ArcMode::Window => window_arc(timeline, side, cfg),
    }
}
