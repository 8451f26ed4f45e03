//! Word–emotion intensity lexicon: loading, stoplists, valence groups, and
//! pair-exclusive views.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tokenizer::MatchVocab;

/// The eight emotion dimensions, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Emotion {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
}

pub const ALL_EMOTIONS: [Emotion; 8] = [
    Emotion::Anger,
    Emotion::Anticipation,
    Emotion::Disgust,
    Emotion::Fear,
    Emotion::Joy,
    Emotion::Sadness,
    Emotion::Surprise,
    Emotion::Trust,
];

impl Emotion {
    pub fn name(self) -> &'static str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Anticipation => "anticipation",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
            Emotion::Trust => "trust",
        }
    }

    pub fn from_name(s: &str) -> Option<Emotion> {
        ALL_EMOTIONS.iter().copied().find(|e| e.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn valence(self) -> Valence {
        match self {
            Emotion::Joy | Emotion::Trust => Valence::Positive,
            Emotion::Anger | Emotion::Sadness | Emotion::Fear | Emotion::Disgust => {
                Valence::Negative
            }
            Emotion::Anticipation | Emotion::Surprise => Valence::Variable,
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Valence grouping: joy and trust are positive; anger, sadness, fear and
/// disgust are negative; anticipation and surprise carry variable valence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valence {
    Positive,
    Negative,
    Variable,
}

/// The 28 unordered emotion pairs in canonical order.
pub fn emotion_pairs() -> Vec<(Emotion, Emotion)> {
    let mut pairs = Vec::with_capacity(28);
    for i in 0..ALL_EMOTIONS.len() {
        for j in (i + 1)..ALL_EMOTIONS.len() {
            pairs.push((ALL_EMOTIONS[i], ALL_EMOTIONS[j]));
        }
    }
    pairs
}

/// Classification of an emotion pair by its members' valence groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    WithinPositive,
    WithinNegative,
    WithinVariable,
    Cross,
}

pub fn pair_class(a: Emotion, b: Emotion) -> PairClass {
    match (a.valence(), b.valence()) {
        (Valence::Positive, Valence::Positive) => PairClass::WithinPositive,
        (Valence::Negative, Valence::Negative) => PairClass::WithinNegative,
        (Valence::Variable, Valence::Variable) => PairClass::WithinVariable,
        _ => PairClass::Cross,
    }
}

/// Per-term emotion intensities, stored as a small fixed array plus a
/// presence mask.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EmotionScores {
    mask: u8,
    scores: [f64; 8],
}

impl EmotionScores {
    pub fn set(&mut self, e: Emotion, intensity: f64) {
        self.mask |= 1 << e.index();
        self.scores[e.index()] = intensity;
    }

    pub fn get(&self, e: Emotion) -> Option<f64> {
        if self.has(e) {
            Some(self.scores[e.index()])
        } else {
            None
        }
    }

    pub fn has(&self, e: Emotion) -> bool {
        self.mask & (1 << e.index()) != 0
    }

    pub fn emotions(&self) -> impl Iterator<Item = (Emotion, f64)> + '_ {
        ALL_EMOTIONS
            .iter()
            .filter(|e| self.has(**e))
            .map(|e| (*e, self.scores[e.index()]))
    }
}

/// Why a term was removed from the lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    CommonStopword,
    DomainStopword,
    MhcTerm,
}

impl RemovalReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RemovalReason::CommonStopword => "common_stopword",
            RemovalReason::DomainStopword => "domain_stopword",
            RemovalReason::MhcTerm => "mhc_term",
        }
    }
}

/// A stoplist with the removal reason it records.
#[derive(Debug, Clone)]
pub struct Stoplist {
    pub reason: RemovalReason,
    pub unigrams: Vec<String>,
    pub bigrams: Vec<(String, String)>,
}

/// Loads a plain-text stoplist: one term or space-separated bigram per line,
/// `#`-prefixed comment lines allowed.
pub fn load_stoplist(path: &Path, reason: RemovalReason) -> Result<Stoplist> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut unigrams = Vec::new();
    let mut bigrams = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let term = line.to_lowercase();
        let words: Vec<&str> = term.split(' ').collect();
        match words.len() {
            1 => unigrams.push(term),
            2 => bigrams.push((words[0].to_string(), words[1].to_string())),
            _ => {
                return Err(Error::malformed(
                    path,
                    i + 1,
                    format!("stoplist entries are terms or bigrams, got {words:?}"),
                ))
            }
        }
    }
    Ok(Stoplist {
        reason,
        unigrams,
        bigrams,
    })
}

/// Outcome of applying stoplists: how many entries were removed or
/// registered, and which listed terms were not in the lexicon (no-ops).
#[derive(Debug, Default, Clone)]
pub struct StoplistReport {
    pub removed: usize,
    pub suppressed_bigrams: usize,
    pub not_in_lexicon: Vec<String>,
}

/// Term → emotion-intensity lexicon with stoplist provenance and bigram
/// suppression state.
#[derive(Debug, Clone, Default)]
pub struct EmotionLexicon {
    entries: BTreeMap<String, EmotionScores>,
    removed: BTreeMap<String, RemovalReason>,
    suppressed_bigrams: Vec<(String, String)>,
}

impl EmotionLexicon {
    /// Loads the tab-separated intensity lexicon: `term\temotion\tscore`,
    /// one row per (term, emotion) pair; multi-emotion terms merge into one
    /// entry.
    pub fn load(path: &Path) -> Result<EmotionLexicon> {
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut entries: BTreeMap<String, EmotionScores> = BTreeMap::new();
        for (i, line) in content.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (term, emo, score) = match (cols.next(), cols.next(), cols.next(), cols.next()) {
                (Some(t), Some(e), Some(s), None) => (t, e, s),
                _ => {
                    return Err(Error::malformed(
                        path,
                        line_no,
                        "expected 3 tab-separated columns",
                    ))
                }
            };
            let emotion = Emotion::from_name(emo).ok_or_else(|| {
                Error::malformed(path, line_no, format!("unknown emotion label {emo:?}"))
            })?;
            let intensity: f64 = score.parse().map_err(|_| {
                Error::malformed(path, line_no, format!("unparseable score {score:?}"))
            })?;
            if !(0.0..=1.0).contains(&intensity) {
                return Err(Error::malformed(
                    path,
                    line_no,
                    format!("score {intensity} outside [0,1]"),
                ));
            }
            let term = term.to_lowercase();
            let scores = entries.entry(term.clone()).or_default();
            if let Some(existing) = scores.get(emotion) {
                if existing != intensity {
                    return Err(Error::malformed(
                        path,
                        line_no,
                        format!("conflicting scores for ({term}, {emotion}): {existing} vs {intensity}"),
                    ));
                }
            }
            scores.set(emotion, intensity);
        }
        if entries.is_empty() {
            return Err(Error::Data(format!(
                "lexicon {} contains no entries",
                path.display()
            )));
        }
        Ok(EmotionLexicon {
            entries,
            removed: BTreeMap::new(),
            suppressed_bigrams: Vec::new(),
        })
    }

    pub fn entries(&self) -> &BTreeMap<String, EmotionScores> {
        &self.entries
    }

    pub fn removed_terms(&self) -> &BTreeMap<String, RemovalReason> {
        &self.removed
    }

    pub fn suppressed_bigrams(&self) -> &[(String, String)] {
        &self.suppressed_bigrams
    }

    pub fn n_terms(&self) -> usize {
        self.entries.len()
    }

    /// Number of terms annotated for each emotion, in canonical order.
    pub fn emotion_counts(&self) -> [usize; 8] {
        let mut counts = [0usize; 8];
        for scores in self.entries.values() {
            for (e, _) in scores.emotions() {
                counts[e.index()] += 1;
            }
        }
        counts
    }

    pub fn term_count(&self, e: Emotion) -> usize {
        self.emotion_counts()[e.index()]
    }

    /// Applies stoplists in order. Listed unigrams are removed from the
    /// entries with their reason recorded; listed bigrams are registered for
    /// match-time suppression (the bigram blocks its constituent tokens but
    /// its unigram parts stay in the lexicon). Terms not present are
    /// recorded as no-ops.
    pub fn apply_stoplists(&mut self, stoplists: &[Stoplist]) -> StoplistReport {
        let mut report = StoplistReport::default();
        for list in stoplists {
            for term in &list.unigrams {
                if self.entries.remove(term).is_some() {
                    self.removed.insert(term.clone(), list.reason);
                    report.removed += 1;
                } else {
                    report.not_in_lexicon.push(term.clone());
                }
            }
            for bigram in &list.bigrams {
                if !self.suppressed_bigrams.contains(bigram) {
                    self.suppressed_bigrams.push(bigram.clone());
                    report.suppressed_bigrams += 1;
                }
            }
        }
        self.suppressed_bigrams.sort();
        report
    }

    /// Matching vocabulary over this lexicon: every entry term plus every
    /// suppressed bigram (which takes precedence at match time).
    pub fn match_vocab(&self) -> MatchVocab {
        let mut vocab = MatchVocab::new();
        for term in self.entries.keys() {
            vocab.insert(term);
        }
        for (a, b) in &self.suppressed_bigrams {
            vocab.insert(&format!("{a} {b}"));
        }
        vocab
    }

    /// Pair-exclusive view: terms annotated for both emotions are dropped
    /// from both sides.
    pub fn pair_exclusive(&self, a: Emotion, b: Emotion) -> Result<PairLexicon> {
        if a == b {
            return Err(Error::Config(format!(
                "pair-exclusive view requires two distinct emotions, got {a} twice"
            )));
        }
        let mut view = PairLexicon {
            emotion_a: a,
            emotion_b: b,
            a_exclusive: BTreeMap::new(),
            b_exclusive: BTreeMap::new(),
            n_common: 0,
        };
        for (term, scores) in &self.entries {
            match (scores.get(a), scores.get(b)) {
                (Some(_), Some(_)) => view.n_common += 1,
                (Some(sa), None) => {
                    view.a_exclusive.insert(term.clone(), sa);
                }
                (None, Some(sb)) => {
                    view.b_exclusive.insert(term.clone(), sb);
                }
                (None, None) => {}
            }
        }
        Ok(view)
    }
}

/// Pair-exclusive lexicon view for one emotion pair.
#[derive(Debug, Clone)]
pub struct PairLexicon {
    pub emotion_a: Emotion,
    pub emotion_b: Emotion,
    pub a_exclusive: BTreeMap<String, f64>,
    pub b_exclusive: BTreeMap<String, f64>,
    pub n_common: usize,
}
