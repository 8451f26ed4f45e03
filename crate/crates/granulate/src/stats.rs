//! Group comparison harness: Welch t-tests with Satterthwaite degrees of
//! freedom, mean-centered Levene variance checks, Benjamini–Hochberg
//! correction, and lower/higher direction labels.

use std::collections::BTreeMap;
use std::fmt;

use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance (ddof = 1).
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Two-sided p for a Student-t statistic, via the regularized incomplete
/// beta function (no cancellation for large |t|).
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    beta_reg(df / 2.0, 0.5, df / (df + t * t)).clamp(0.0, 1.0)
}

/// Survival function of the F distribution.
fn f_survival(x: f64, d1: f64, d2: f64) -> f64 {
    beta_reg(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchResult {
    pub t: f64,
    pub df: f64,
    pub p: f64,
}

fn check_sample(name: &str, xs: &[f64]) -> Result<()> {
    if xs.len() < 2 {
        return Err(Error::Data(format!(
            "sample {name} needs at least 2 values, got {}",
            xs.len()
        )));
    }
    if variance(xs) == 0.0 {
        return Err(Error::Data(format!("sample {name} has zero variance")));
    }
    Ok(())
}

/// Welch's unequal-variance t-test with Welch–Satterthwaite degrees of
/// freedom and a two-sided p-value.
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<WelchResult> {
    check_sample("a", a)?;
    check_sample("b", b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (variance(a) / na, variance(b) / nb);
    let se = (va + vb).sqrt();
    let t = (mean(a) - mean(b)) / se;
    let df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    Ok(WelchResult {
        t,
        df,
        p: student_t_two_sided_p(t, df),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeveneResult {
    pub w: f64,
    pub p: f64,
}

/// Classic mean-centered Levene test for homogeneity of variance across two
/// samples, with an F-distribution p-value.
pub fn levene(a: &[f64], b: &[f64]) -> Result<LeveneResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Data(format!(
            "levene needs at least 2 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let za: Vec<f64> = a.iter().map(|x| (x - mean(a)).abs()).collect();
    let zb: Vec<f64> = b.iter().map(|x| (x - mean(b)).abs()).collect();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let k = 2.0;
    let (ma, mb) = (mean(&za), mean(&zb));
    let grand = (na * ma + nb * mb) / n;
    let between = na * (ma - grand) * (ma - grand) + nb * (mb - grand) * (mb - grand);
    let within: f64 = za.iter().map(|z| (z - ma) * (z - ma)).sum::<f64>()
        + zb.iter().map(|z| (z - mb) * (z - mb)).sum::<f64>();
    if between == 0.0 {
        return Ok(LeveneResult { w: 0.0, p: 1.0 });
    }
    let w = (n - k) / (k - 1.0) * between / within;
    Ok(LeveneResult {
        w,
        p: f_survival(w, k - 1.0, n - k),
    })
}

/// Benjamini–Hochberg step-up correction. Returns adjusted p-values (capped
/// at 1, in input order) and reject flags at level `q`. Invariant under
/// permutation of the inputs.
pub fn bh_correct(p_values: &[f64], q: f64) -> (Vec<f64>, Vec<bool>) {
    let m = p_values.len();
    if m == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p_values[i].partial_cmp(&p_values[j]).unwrap());
    let mut adjusted = vec![0.0; m];
    let mut running_min = 1.0f64;
    for rank in (0..m).rev() {
        let idx = order[rank];
        // ratio first: m/m is exactly 1, so adjusted never rounds below raw
        let candidate = (p_values[idx] * (m as f64 / (rank + 1) as f64)).min(1.0);
        running_min = running_min.min(candidate);
        adjusted[idx] = running_min;
    }
    let reject = adjusted.iter().map(|&p| p <= q).collect();
    (adjusted, reject)
}

/// Direction of a significant difference on the metric scale (group minus
/// control). `--` when the test does not reject.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Higher,
    None,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lower => "lower",
            Direction::Higher => "higher",
            Direction::None => "--",
        })
    }
}

/// Which family the BH correction runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionFamily {
    /// One family per metric, across the compared groups.
    PerMetricAcrossGroups,
    /// A single family over every (metric, group) test.
    Global,
}

impl CorrectionFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrectionFamily::PerMetricAcrossGroups => "per_metric_across_groups",
            CorrectionFamily::Global => "global",
        }
    }
}

/// One per-user observation row: which group the user belongs to and their
/// defined metric values.
#[derive(Debug, Clone)]
pub struct ProfileRow {
    pub user_id: String,
    pub group: String,
    pub eligible: bool,
    pub metrics: BTreeMap<String, f64>,
}

/// One (metric, group-vs-control) test. `error` marks degenerate rows that
/// could not be tested; they are reported, never silently dropped.
#[derive(Debug, Clone)]
pub struct TestResult {
    pub metric: String,
    pub group: String,
    pub control: String,
    pub n_group: usize,
    pub n_control: usize,
    pub t: f64,
    pub df: f64,
    pub p_raw: f64,
    pub p_adjusted: f64,
    pub reject: bool,
    pub direction: Direction,
    pub levene: Option<LeveneResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ComparisonTable {
    pub control: String,
    pub q: f64,
    pub family: CorrectionFamily,
    pub metrics: Vec<String>,
    pub groups: Vec<String>,
    pub rows: Vec<TestResult>,
}

/// Runs each group against the control on every metric, applies BH within
/// the configured family, and labels directions from the sign of
/// (group mean − control mean). The Levene check is computed and reported
/// but never gates the Welch test.
pub fn compare_groups(
    rows: &[ProfileRow],
    control: &str,
    metrics: &[String],
    q: f64,
    family: CorrectionFamily,
) -> Result<ComparisonTable> {
    let mut groups: Vec<String> = rows
        .iter()
        .filter(|r| r.eligible && r.group != control)
        .map(|r| r.group.clone())
        .collect();
    groups.sort();
    groups.dedup();
    if groups.is_empty() {
        return Err(Error::Data(format!(
            "comparison needs at least one non-{control:?} group with eligible users"
        )));
    }
    if !rows.iter().any(|r| r.eligible && r.group == control) {
        return Err(Error::Data(format!(
            "control group {control:?} has no eligible users"
        )));
    }

    let values = |group: &str, metric: &str| -> Vec<f64> {
        rows.iter()
            .filter(|r| r.eligible && r.group == group)
            .filter_map(|r| r.metrics.get(metric).copied())
            .collect()
    };

    let mut results = Vec::new();
    for metric in metrics {
        let control_vals = values(control, metric);
        for group in &groups {
            let group_vals = values(group, metric);
            let mut row = TestResult {
                metric: metric.clone(),
                group: group.clone(),
                control: control.to_string(),
                n_group: group_vals.len(),
                n_control: control_vals.len(),
                t: f64::NAN,
                df: f64::NAN,
                p_raw: f64::NAN,
                p_adjusted: f64::NAN,
                reject: false,
                direction: Direction::None,
                levene: levene(&group_vals, &control_vals).ok(),
                error: None,
            };
            match welch_t(&group_vals, &control_vals) {
                Ok(welch) => {
                    row.t = welch.t;
                    row.df = welch.df;
                    row.p_raw = welch.p;
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            results.push(row);
        }
    }

    // BH within each correction family, over the testable rows only
    let family_key = |row: &TestResult| match family {
        CorrectionFamily::PerMetricAcrossGroups => row.metric.clone(),
        CorrectionFamily::Global => String::new(),
    };
    let mut families: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, row) in results.iter().enumerate() {
        if row.error.is_none() {
            families.entry(family_key(row)).or_default().push(i);
        }
    }
    for indices in families.values() {
        let ps: Vec<f64> = indices.iter().map(|&i| results[i].p_raw).collect();
        let (adjusted, reject) = bh_correct(&ps, q);
        for (k, &i) in indices.iter().enumerate() {
            results[i].p_adjusted = adjusted[k];
            results[i].reject = reject[k];
            if reject[k] {
                let group_vals = values(&results[i].group, &results[i].metric);
                let control_vals = values(&results[i].control, &results[i].metric);
                results[i].direction = if mean(&group_vals) < mean(&control_vals) {
                    Direction::Lower
                } else {
                    Direction::Higher
                };
            }
        }
    }

    Ok(ComparisonTable {
        control: control.to_string(),
        q,
        family,
        metrics: metrics.to_vec(),
        groups,
        rows: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_give_t_zero_p_one() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = welch_t(&a, &a).unwrap();
        assert_eq!(r.t, 0.0);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn zero_variance_is_an_error() {
        let a = [0.0, 0.0, 0.0, 0.0];
        let b = [1.0, 1.0, 1.0, 1.0];
        assert!(welch_t(&a, &b).is_err());
        assert!(welch_t(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn welch_is_antisymmetric() {
        let a = [1.0, 2.5, 3.0, 4.5, 2.2];
        let b = [2.0, 3.5, 4.0, 5.5];
        let ab = welch_t(&a, &b).unwrap();
        let ba = welch_t(&b, &a).unwrap();
        assert!((ab.t + ba.t).abs() < 1e-14);
        assert!((ab.df - ba.df).abs() < 1e-12);
        assert!((ab.p - ba.p).abs() < 1e-14);
    }

    #[test]
    fn levene_sample_vs_itself() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = levene(&a, &a).unwrap();
        assert_eq!(r.w, 0.0);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn bh_hand_computed_step_up() {
        let (adjusted, reject) = bh_correct(&[0.01, 0.02, 0.03, 0.04], 0.05);
        for adj in &adjusted {
            assert!((adj - 0.04).abs() < 1e-15);
        }
        assert!(reject.iter().all(|&r| r));
    }

    #[test]
    fn bh_single_p_is_identity() {
        let (adjusted, reject) = bh_correct(&[0.04], 0.05);
        assert_eq!(adjusted, vec![0.04]);
        assert_eq!(reject, vec![true]);
    }

    #[test]
    fn bh_all_ones_reject_nothing() {
        let (adjusted, reject) = bh_correct(&[1.0, 1.0], 0.05);
        assert_eq!(adjusted, vec![1.0, 1.0]);
        assert!(reject.iter().all(|&r| !r));
    }

    #[test]
    fn bh_adjusted_at_least_raw_and_permutation_invariant() {
        let ps = [0.2, 0.01, 0.8, 0.04, 0.04];
        let (adj, _) = bh_correct(&ps, 0.05);
        for (p, a) in ps.iter().zip(&adj) {
            assert!(a >= p);
            assert!(*a <= 1.0);
        }
        let perm = [0.04, 0.8, 0.2, 0.04, 0.01];
        let (adj_perm, _) = bh_correct(&perm, 0.05);
        let mut s1 = adj.clone();
        let mut s2 = adj_perm.clone();
        s1.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s2.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(s1, s2);
    }

    fn rows_for(groups: &[(&str, &[f64])], metric: &str) -> Vec<ProfileRow> {
        let mut rows = Vec::new();
        for (group, vals) in groups {
            for (i, v) in vals.iter().enumerate() {
                rows.push(ProfileRow {
                    user_id: format!("{group}_{i}"),
                    group: group.to_string(),
                    eligible: true,
                    metrics: BTreeMap::from([(metric.to_string(), *v)]),
                });
            }
        }
        rows
    }

    #[test]
    fn compare_labels_direction_and_swaps_on_relabel() {
        let low: Vec<f64> = (0..40).map(|i| -0.5 + 0.001 * i as f64).collect();
        let high: Vec<f64> = (0..40).map(|i| 0.5 + 0.001 * i as f64).collect();
        let rows = rows_for(&[("mhc", &low), ("control", &high)], "eg_neg");
        let table = compare_groups(
            &rows,
            "control",
            &["eg_neg".to_string()],
            0.05,
            CorrectionFamily::PerMetricAcrossGroups,
        )
        .unwrap();
        assert_eq!(table.rows.len(), 1);
        assert!(table.rows[0].reject);
        assert_eq!(table.rows[0].direction, Direction::Lower);

        // relabel: control <-> mhc swaps the direction, not the reject flag
        let swapped = rows_for(&[("control", &low), ("mhc", &high)], "eg_neg");
        let table2 = compare_groups(
            &swapped,
            "control",
            &["eg_neg".to_string()],
            0.05,
            CorrectionFamily::PerMetricAcrossGroups,
        )
        .unwrap();
        assert!(table2.rows[0].reject);
        assert_eq!(table2.rows[0].direction, Direction::Higher);
        assert!((table2.rows[0].p_raw - table.rows[0].p_raw).abs() < 1e-12);
    }

    #[test]
    fn degenerate_rows_are_marked_not_dropped() {
        let rows = rows_for(&[("mhc", &[1.0]), ("control", &[0.1, 0.2, 0.3])], "eg_pos");
        let table = compare_groups(
            &rows,
            "control",
            &["eg_pos".to_string()],
            0.05,
            CorrectionFamily::Global,
        )
        .unwrap();
        assert_eq!(table.rows.len(), 1);
        assert!(table.rows[0].error.is_some());
        assert!(!table.rows[0].reject);
    }

    #[test]
    fn single_group_input_is_an_error() {
        let rows = rows_for(&[("control", &[0.1, 0.2, 0.3])], "eg_pos");
        assert!(compare_groups(
            &rows,
            "control",
            &["eg_pos".to_string()],
            0.05,
            CorrectionFamily::Global,
        )
        .is_err());
    }
}
