//! Detection and decoding of C3-anchored degree sequences: the sequences for
//! which some choice of maximal index sets makes the parallel step fail.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph_core::{Digraph, DigraphBuilder};
use crate::hh_ops::{maximal_index_sets, MaximalIndexPair, StepError, TiePolicy};
use crate::seq_core::{
    digraphic_diagnosis, slack_profile, DegreePair, IndexSet, Infeasibility,
    IntPairSeq, SlackProfile,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnchorError {
    #[error("sequence is not digraphic: {0}")]
    NotDigraphic(Infeasibility),
    #[error("sequence is not an extreme sequence")]
    NotExtreme,
    #[error(transparent)]
    Step(#[from] StepError),
}

/// The degree shape of an anchored window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnchorCase {
    /// Three indices of degree `(l+1, k+1)`; all are anchors.
    #[serde(rename = "i")]
    Triangle,
    /// `n−1` indices of degree `(l+n−2, k+n−2)` and one anchor of degree `(l+1, k+1)`.
    #[serde(rename = "ii")]
    SingleLow,
    /// One anchor of degree `(l+n−2, k+n−2)` and `n−1` indices of degree `(l+1, k+1)`.
    #[serde(rename = "iii")]
    SingleHigh,
}

impl fmt::Display for AnchorCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnchorCase::Triangle => "i",
            AnchorCase::SingleLow => "ii",
            AnchorCase::SingleHigh => "iii",
        })
    }
}

/// One anchored window of a sequence with the index classes it induces.
///
/// The scaffold occupies positions `k+1..=k+n` of the positive ordering and
/// `l+1..=l+n` of the negative ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorReport {
    #[serde(rename = "case")]
    pub case_tag: AnchorCase,
    pub k: usize,
    pub l: usize,
    pub n: usize,
    pub scaffold: IndexSet,
    pub anchors: IndexSet,
    pub x_pm: IndexSet,
    pub x_plus: IndexSet,
    pub x_minus: IndexSet,
    pub x_zero: IndexSet,
}

impl AnchorReport {
    /// True when the scaffold and the four class sets partition `1..=n_indices`.
    pub fn partitions(&self, n_indices: usize) -> bool {
        let parts = [&self.scaffold, &self.x_pm, &self.x_plus, &self.x_minus, &self.x_zero];
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let union: IndexSet = parts.iter().flat_map(|p| p.iter().copied()).collect();
        total == n_indices && union == (1..=n_indices).collect()
    }

    /// `(l+1, k+1)`: the low scaffold degree.
    pub fn low_degree(&self) -> DegreePair {
        DegreePair::new(self.l as u32 + 1, self.k as u32 + 1)
    }

    /// `(l+n−2, k+n−2)`: the high scaffold degree.
    pub fn high_degree(&self) -> DegreePair {
        DegreePair::new((self.l + self.n - 2) as u32, (self.k + self.n - 2) as u32)
    }
}

/// Maximal windows `(start, n)` with `s[start..=start+n] = (0,1,…,1,0)` and `n ≥ 3`.
fn unit_windows(s: &[i64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for start in 0..s.len() {
        if s[start] != 0 {
            continue;
        }
        let mut end = start + 1;
        while end < s.len() && s[end] == 1 {
            end += 1;
        }
        let n = end - start;
        if end < s.len() && s[end] == 0 && n >= 3 {
            out.push((start, n));
        }
    }
    out
}

fn multiset(pairs: &[DegreePair]) -> BTreeMap<DegreePair, usize> {
    let mut counts = BTreeMap::new();
    for &p in pairs {
        *counts.entry(p).or_insert(0) += 1;
    }
    counts
}

fn case_for(window: &BTreeMap<DegreePair, usize>, k: usize, l: usize, n: usize) -> Option<AnchorCase> {
    let low = DegreePair::new(l as u32 + 1, k as u32 + 1);
    let high = DegreePair::new((l + n - 2) as u32, (k + n - 2) as u32);
    let is = |parts: &[(DegreePair, usize)]| *window == parts.iter().copied().collect();
    if n == 3 && is(&[(low, 3)]) {
        Some(AnchorCase::Triangle)
    } else if n > 3 && is(&[(high, n - 1), (low, 1)]) {
        Some(AnchorCase::SingleLow)
    } else if n > 3 && is(&[(high, 1), (low, n - 1)]) {
        Some(AnchorCase::SingleHigh)
    } else {
        None
    }
}

/// For each degree value of the window, the lowest original indices carrying it.
fn lowest_indices_for(d: &IntPairSeq, window: &BTreeMap<DegreePair, usize>) -> IndexSet {
    window
        .iter()
        .flat_map(|(&pair, &count)| d.indices().filter(move |&j| d.get(j) == pair).take(count))
        .collect()
}

fn report_for(
    d: &IntPairSeq,
    profile: &SlackProfile,
    (k, n): (usize, usize),
    ubar_windows: &[(usize, usize)],
) -> Option<AnchorReport> {
    let positive_window = multiset(&profile.positive.sorted.pairs()[k..k + n]);
    ubar_windows.iter().filter(|&&(_, m)| m == n).find_map(|&(l, _)| {
        let negative_window = multiset(&profile.negative.sorted.pairs()[l..l + n]);
        if negative_window != positive_window {
            return None;
        }
        let case_tag = case_for(&positive_window, k, l, n)?;
        let scaffold = lowest_indices_for(d, &positive_window);
        let anchor_degree = match case_tag {
            AnchorCase::Triangle | AnchorCase::SingleLow => DegreePair::new(l as u32 + 1, k as u32 + 1),
            AnchorCase::SingleHigh => DegreePair::new((l + n - 2) as u32, (k + n - 2) as u32),
        };
        let anchors = scaffold.iter().copied().filter(|&j| d.get(j) == anchor_degree).collect();
        let report = AnchorReport {
            case_tag,
            k,
            l,
            n,
            scaffold,
            anchors,
            x_pm: IndexSet::new(),
            x_plus: IndexSet::new(),
            x_minus: IndexSet::new(),
            x_zero: IndexSet::new(),
        };
        Some(classify_with(profile, report))
    })
}

fn classify_with(profile: &SlackProfile, report: AnchorReport) -> AnchorReport {
    let total = profile.positive.perm.len();
    let (k, l, n) = (report.k, report.l, report.n);
    let first_positive = profile.positive.indices_between(1, k);
    let first_negative = profile.negative.indices_between(1, l);
    let last_positive = profile.positive.indices_between(k + n + 1, total);
    let last_negative = profile.negative.indices_between(l + n + 1, total);
    AnchorReport {
        x_pm: first_positive.intersection(&first_negative).copied().collect(),
        x_plus: first_positive.difference(&first_negative).copied().collect(),
        x_minus: first_negative.difference(&first_positive).copied().collect(),
        x_zero: last_positive.intersection(&last_negative).copied().collect(),
        ..report
    }
}

/// All anchored windows of a digraphic sequence, ordered by their positive-order start.
pub fn detect(d: &IntPairSeq) -> Result<Vec<AnchorReport>, AnchorError> {
    if let Some(diag) = digraphic_diagnosis(d) {
        return Err(AnchorError::NotDigraphic(diag));
    }
    let profile = slack_profile(d);
    let ubar_windows = unit_windows(&profile.ubar_s);
    Ok(unit_windows(&profile.bar_s)
        .into_iter()
        .filter_map(|window| report_for(d, &profile, window, &ubar_windows))
        .collect())
}

/// Union of the anchor sets of every window of `d`.
pub fn anchor_indices(d: &IntPairSeq) -> Result<IndexSet, AnchorError> {
    Ok(detect(d)?.into_iter().flat_map(|r| r.anchors).collect())
}

/// Recomputes the four class sets of `report` from the orderings of `d`.
pub fn classify_from_degrees(d: &IntPairSeq, report: AnchorReport) -> AnchorReport {
    classify_with(&slack_profile(d), report)
}

/// Maximal index sets for `i` whose parallel step leaves a digraphic residual.
///
/// A non-anchor index takes the prefer-disjoint sets. An anchor joins to the class
/// sets above its window plus scaffold members chosen so that the in- and out-sets
/// differ inside the scaffold.
pub fn safe_index_sets(d: &IntPairSeq, i: usize) -> Result<MaximalIndexPair, AnchorError> {
    let reports = detect(d)?;
    let Some(report) = reports.iter().find(|r| r.anchors.contains(&i)) else {
        return Ok(maximal_index_sets(d, i, TiePolicy::PreferDisjoint)?);
    };
    let others: Vec<usize> = report.scaffold.iter().copied().filter(|&j| j != i).collect();
    let (plus_part, minus_part): (Vec<usize>, Vec<usize>) = match report.case_tag {
        AnchorCase::Triangle | AnchorCase::SingleLow => (vec![others[1]], vec![others[0]]),
        AnchorCase::SingleHigh => {
            let m = others.len();
            let without = |skip: usize| -> Vec<usize> {
                others.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &j)| j).collect()
            };
            (without(m - 1), without(m - 2))
        }
    };
    let kplus: IndexSet = report.x_pm.iter().chain(&report.x_plus).copied().chain(plus_part).collect();
    let kminus: IndexSet = report.x_pm.iter().chain(&report.x_minus).copied().chain(minus_part).collect();
    let pair = MaximalIndexPair { i, kplus, kminus };
    pair.validate(d)?;
    Ok(pair)
}

/// The `m` of an extreme sequence: the nonzero support consists of exactly three
/// indices of each degree `(3(m−t)+1, 3t−2)` for `t = 1..=m`.
pub fn is_extreme(d: &IntPairSeq) -> Option<usize> {
    let support: Vec<DegreePair> = d.pairs().iter().copied().filter(|p| !p.is_zero()).collect();
    if support.is_empty() || !support.len().is_multiple_of(3) {
        return None;
    }
    let m = support.len() / 3;
    let expected: BTreeMap<DegreePair, usize> =
        (1..=m).map(|t| (extreme_degree(m, t), 3)).collect();
    (multiset(&support) == expected).then_some(m)
}

fn extreme_degree(m: usize, t: usize) -> DegreePair {
    DegreePair::new((3 * (m - t) + 1) as u32, (3 * t - 2) as u32)
}

/// The realization of an extreme sequence: an ascending 3-cycle on each triple and
/// arcs from every member of triple `t` to every member of each later triple.
pub fn realize_extreme(d: &IntPairSeq) -> Result<Digraph, AnchorError> {
    let m = is_extreme(d).ok_or(AnchorError::NotExtreme)?;
    let triples: Vec<Vec<usize>> = (1..=m)
        .map(|t| {
            let degree = extreme_degree(m, t);
            d.indices().filter(|&j| d.get(j) == degree).collect()
        })
        .collect();
    let mut builder = DigraphBuilder::new(d.len());
    let add = |b: &mut DigraphBuilder, u, v| b.add_arc(u, v).map(|_| ()).expect("extreme arcs are distinct");
    for (t, triple) in triples.iter().enumerate() {
        let (a, b, c) = (triple[0], triple[1], triple[2]);
        add(&mut builder, a, b);
        add(&mut builder, b, c);
        add(&mut builder, c, a);
        for later in &triples[t + 1..] {
            for &u in triple {
                for &v in later {
                    add(&mut builder, u, v);
                }
            }
        }
    }
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hh_ops::parallel_step;
    use crate::seq_core::is_digraphic;

    fn seq(pairs: &[(u32, u32)]) -> IntPairSeq {
        IntPairSeq::from_pairs(pairs)
    }

    fn set(items: &[usize]) -> IndexSet {
        items.iter().copied().collect()
    }

    fn six_vertex() -> IntPairSeq {
        seq(&[(1, 2), (2, 3), (0, 1), (2, 3), (5, 0), (2, 3)])
    }

    fn extreme_two() -> IntPairSeq {
        seq(&[(4, 1), (4, 1), (4, 1), (1, 4), (1, 4), (1, 4)])
    }

    #[test]
    fn detects_c3() {
        let reports = detect(&seq(&[(1, 1); 3])).unwrap();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert_eq!((r.case_tag, r.k, r.l, r.n), (AnchorCase::Triangle, 0, 0, 3));
        assert_eq!(r.scaffold, set(&[1, 2, 3]));
        assert_eq!(r.anchors, set(&[1, 2, 3]));
        assert!(r.x_pm.is_empty() && r.x_plus.is_empty() && r.x_minus.is_empty() && r.x_zero.is_empty());
    }

    #[test]
    fn detects_six_vertex_example() {
        let reports = detect(&six_vertex()).unwrap();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert_eq!((r.case_tag, r.k, r.l, r.n), (AnchorCase::SingleLow, 1, 0, 4));
        assert_eq!(r.scaffold, set(&[1, 2, 4, 6]));
        assert_eq!(r.anchors, set(&[1]));
        assert_eq!(r.x_plus, set(&[5]));
        assert_eq!(r.x_zero, set(&[3]));
        assert!(r.x_pm.is_empty() && r.x_minus.is_empty());
        assert!(r.partitions(6));
    }

    #[test]
    fn no_window_for_a_bidirectional_pair() {
        assert!(detect(&seq(&[(1, 1), (1, 1)])).unwrap().is_empty());
        assert!(matches!(detect(&seq(&[(0, 0), (0, 0), (1, 1)])), Err(AnchorError::NotDigraphic(_))));
    }

    #[test]
    fn extreme_two_has_two_windows() {
        let reports = detect(&extreme_two()).unwrap();
        let starts: Vec<(usize, usize)> = reports.iter().map(|r| (r.k, r.l)).collect();
        assert_eq!(starts, vec![(0, 3), (3, 0)]);
        assert_eq!(anchor_indices(&extreme_two()).unwrap(), set(&[1, 2, 3, 4, 5, 6]));
        let outer = &reports[0];
        assert_eq!(outer.scaffold, set(&[1, 2, 3]));
        assert_eq!(outer.x_minus, set(&[4, 5, 6]));
        let inner = &reports[1];
        assert_eq!(inner.scaffold, set(&[4, 5, 6]));
        assert_eq!(inner.x_plus, set(&[1, 2, 3]));
        assert!(outer.partitions(6) && inner.partitions(6));
    }

    #[test]
    fn safe_sets_examples() {
        let c3 = seq(&[(1, 1); 3]);
        let pair = safe_index_sets(&c3, 1).unwrap();
        assert_eq!((pair.kplus.clone(), pair.kminus.clone()), (set(&[3]), set(&[2])));
        assert!(is_digraphic(&parallel_step(&c3, &pair).unwrap()));
        let six = six_vertex();
        let pair = safe_index_sets(&six, 1).unwrap();
        assert_eq!((pair.kplus.clone(), pair.kminus.clone()), (set(&[4, 5]), set(&[2])));
        assert!(is_digraphic(&parallel_step(&six, &pair).unwrap()));
        let zero = seq(&[(0, 0), (1, 1), (1, 1)]);
        assert_eq!(safe_index_sets(&zero, 1).unwrap(), MaximalIndexPair::empty(1));
    }

    #[test]
    fn extreme_sequences() {
        assert_eq!(is_extreme(&seq(&[(1, 1); 3])), Some(1));
        assert_eq!(is_extreme(&extreme_two()), Some(2));
        assert_eq!(is_extreme(&seq(&[(2, 2); 3])), None);
        assert_eq!(is_extreme(&seq(&[(0, 0), (1, 1), (1, 1), (1, 1)])), Some(1));
        let g = realize_extreme(&extreme_two()).unwrap();
        let mut expected = vec![(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)];
        for u in 1..=3 {
            for v in 4..=6 {
                expected.push((u, v));
            }
        }
        expected.sort_unstable();
        assert_eq!(g.arcs(), expected);
        assert_eq!(g.degree_sequence(), extreme_two());
        assert_eq!(realize_extreme(&seq(&[(2, 2); 2])).unwrap_err(), AnchorError::NotExtreme);
    }
}
