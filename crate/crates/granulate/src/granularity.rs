//! Per-user emotion granularity: pairwise arc correlations and the five
//! aggregate measures. Granularity is the negative of the average pairwise
//! Spearman correlation, so frequent co-endorsement of a pair pushes its
//! granularity down.

use std::collections::BTreeMap;

use crate::arcs::EmotionArc;
use crate::lexicon::{pair_class, Emotion, PairClass};

/// Fractional (average) ranks, 1-based. Ties share the mean of the ranks
/// they span.
pub fn fractional_ranks(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share the average of ranks i+1..=j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation with average-rank tie handling: the Pearson
/// correlation of the two fractional-rank vectors. Undefined (`None`) for
/// fewer than two pairs or when either rank vector is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    debug_assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return None;
    }
    pearson(&fractional_ranks(xs), &fractional_ranks(ys))
}

/// Drops positions where either side is missing, returning the aligned pair
/// of dense vectors.
pub fn align_pairs(a: &[Option<f64>], b: &[Option<f64>]) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), b.len());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (x, y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x, y) {
            xs.push(*x);
            ys.push(*y);
        }
    }
    (xs, ys)
}

/// Correlation between one pair of per-emotion arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCorrelation {
    pub emotion_a: Emotion,
    pub emotion_b: Emotion,
    /// `None` when undefined: too few paired points or zero rank variance.
    pub rho: Option<f64>,
    pub n_points: usize,
}

/// Spearman correlation of a pair of arcs after pairwise missing-data
/// alignment.
pub fn arc_correlation(a: &EmotionArc, b: &EmotionArc) -> PairCorrelation {
    let (xs, ys) = align_pairs(&a.points, &b.points);
    PairCorrelation {
        emotion_a: a.emotion,
        emotion_b: b.emotion,
        rho: spearman(&xs, &ys),
        n_points: xs.len(),
    }
}

/// Correlations for a full set of per-pair arcs (both arcs of each entry
/// built from the same pair-exclusive view under one config).
pub fn pair_correlations(pairs: &[(EmotionArc, EmotionArc)]) -> Vec<PairCorrelation> {
    pairs.iter().map(|(a, b)| arc_correlation(a, b)).collect()
}

/// The five granularity aggregates plus their raw correlation means (same
/// magnitudes, opposite sign convention).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EgValues {
    pub eg_pos: Option<f64>,
    pub eg_neg: Option<f64>,
    pub eg_var: Option<f64>,
    pub eg_overall: Option<f64>,
    pub eg_cross: Option<f64>,
    pub rho_pos: Option<f64>,
    pub rho_neg: Option<f64>,
    pub rho_var: Option<f64>,
    pub rho_overall: Option<f64>,
    pub rho_cross: Option<f64>,
}

fn mean_defined(rhos: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let defined: Vec<f64> = rhos.flatten().collect();
    if defined.is_empty() {
        None
    } else {
        Some(defined.iter().sum::<f64>() / defined.len() as f64)
    }
}

/// Aggregates the 28 pair correlations into the five granularity measures:
/// within-positive (joy–trust), within-negative (6 pairs), within-variable
/// (anticipation–surprise), overall (the 8 within-group pairs only), and
/// cross-group (the remaining 20). Undefined pairs are excluded from each
/// mean; a measure is undefined only when every pair in its set is.
pub fn eg_values(pairs: &[PairCorrelation]) -> EgValues {
    let of_class = |class: PairClass| {
        mean_defined(
            pairs
                .iter()
                .filter(|p| pair_class(p.emotion_a, p.emotion_b) == class)
                .map(|p| p.rho),
        )
    };
    let rho_pos = of_class(PairClass::WithinPositive);
    let rho_neg = of_class(PairClass::WithinNegative);
    let rho_var = of_class(PairClass::WithinVariable);
    let rho_cross = of_class(PairClass::Cross);
    let rho_overall = mean_defined(
        pairs
            .iter()
            .filter(|p| pair_class(p.emotion_a, p.emotion_b) != PairClass::Cross)
            .map(|p| p.rho),
    );
    EgValues {
        eg_pos: rho_pos.map(|r| -r),
        eg_neg: rho_neg.map(|r| -r),
        eg_var: rho_var.map(|r| -r),
        eg_overall: rho_overall.map(|r| -r),
        eg_cross: rho_cross.map(|r| -r),
        rho_pos,
        rho_neg,
        rho_var,
        rho_overall,
        rho_cross,
    }
}

/// Minimum activity a user needs before their profile enters group
/// statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EligibilityThresholds {
    pub min_scored_utterances: usize,
    pub min_unique_terms: usize,
    /// Strict mode: a user with any undefined pair correlation is dropped
    /// instead of having that pair excluded from the EG means.
    pub require_all_pairs_defined: bool,
}

impl Default for EligibilityThresholds {
    fn default() -> Self {
        EligibilityThresholds {
            min_scored_utterances: 50,
            min_unique_terms: 25,
            require_all_pairs_defined: false,
        }
    }
}

/// Inclusive thresholds: a user with exactly the minimum counts is eligible.
pub fn eligibility(
    n_scored_utterances: usize,
    n_unique_terms: usize,
    thresholds: &EligibilityThresholds,
) -> bool {
    n_scored_utterances >= thresholds.min_scored_utterances
        && n_unique_terms >= thresholds.min_unique_terms
}

/// Per-user granularity profile: the full pair matrix, the five aggregates,
/// and the eligibility gate inputs.
#[derive(Debug, Clone)]
pub struct GranularityProfile {
    pub user_id: String,
    pub group: String,
    pub eg: EgValues,
    pub pair_matrix: Vec<PairCorrelation>,
    pub eligible: bool,
    pub n_scored_utterances: usize,
    pub n_unique_lexicon_terms: usize,
}

impl GranularityProfile {
    /// Pair correlation for one unordered emotion pair.
    pub fn pair(&self, a: Emotion, b: Emotion) -> Option<&PairCorrelation> {
        self.pair_matrix.iter().find(|p| {
            (p.emotion_a == a && p.emotion_b == b) || (p.emotion_a == b && p.emotion_b == a)
        })
    }

    /// Metric map used by the comparison harness; only defined values are
    /// present. Pair metrics carry the granularity sign convention
    /// (negative correlation), so "lower" always means lower granularity.
    pub fn metrics(&self, with_pairs: bool) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        let eg = &self.eg;
        for (name, value) in [
            ("eg_pos", eg.eg_pos),
            ("eg_neg", eg.eg_neg),
            ("eg_var", eg.eg_var),
            ("eg_overall", eg.eg_overall),
            ("eg_cross", eg.eg_cross),
        ] {
            if let Some(v) = value {
                m.insert(name.to_string(), v);
            }
        }
        if with_pairs {
            for p in &self.pair_matrix {
                if let Some(rho) = p.rho {
                    m.insert(
                        format!("eg_pair_{}_{}", p.emotion_a, p.emotion_b),
                        -rho,
                    );
                }
            }
        }
        m
    }
}
