//! Degree-sequence arithmetic: orderings, corrected conjugates, slack
//! sequences and the graphic / digraphic decision tests.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A set of 1-based indices, iterated in ascending order.
pub type IndexSet = BTreeSet<usize>;

/// The (out-degree, in-degree) pair of one vertex.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct DegreePair {
    pub out_deg: u32,
    pub in_deg: u32,
}

impl DegreePair {
    pub const ZERO: DegreePair = DegreePair { out_deg: 0, in_deg: 0 };

    pub const fn new(out_deg: u32, in_deg: u32) -> Self {
        DegreePair { out_deg, in_deg }
    }

    pub fn is_zero(self) -> bool {
        self.out_deg == 0 && self.in_deg == 0
    }

    /// Sort key for `direction`: out-major for positive, in-major for negative.
    pub fn key(self, direction: Direction) -> (u32, u32) {
        match direction {
            Direction::Positive => (self.out_deg, self.in_deg),
            Direction::Negative => (self.in_deg, self.out_deg),
        }
    }
}

impl From<(u32, u32)> for DegreePair {
    fn from((out_deg, in_deg): (u32, u32)) -> Self {
        DegreePair { out_deg, in_deg }
    }
}

impl fmt::Display for DegreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.out_deg, self.in_deg)
    }
}

/// A sequence of non-negative integer degrees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntSeq(Vec<u32>);

impl IntSeq {
    pub fn new(values: Vec<u32>) -> Self {
        IntSeq(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry at 1-based index `i`. Panics when out of range.
    pub fn get(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&v| u64::from(v)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }
}

impl From<Vec<u32>> for IntSeq {
    fn from(values: Vec<u32>) -> Self {
        IntSeq(values)
    }
}

impl FromIterator<u32> for IntSeq {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        IntSeq(iter.into_iter().collect())
    }
}

impl fmt::Display for IntSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (pos, v) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// An indexed sequence of degree pairs. Entry `i` always describes vertex `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPairSeq(Vec<DegreePair>);

impl IntPairSeq {
    pub fn new(pairs: Vec<DegreePair>) -> Self {
        IntPairSeq(pairs)
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        IntPairSeq(pairs.iter().copied().map(DegreePair::from).collect())
    }

    /// Pairs each entry of `out_degs` with the entry of `in_degs` at the same index.
    /// Returns `None` when the lengths differ.
    pub fn from_columns(out_degs: &[u32], in_degs: &[u32]) -> Option<Self> {
        (out_degs.len() == in_degs.len()).then(|| {
            IntPairSeq(
                out_degs
                    .iter()
                    .zip(in_degs)
                    .map(|(&o, &i)| DegreePair::new(o, i))
                    .collect(),
            )
        })
    }

    /// The Eulerian sequence with `d_i⁺ = d_i⁻ = values_i`.
    pub fn symmetric(values: &IntSeq) -> Self {
        IntPairSeq(values.values().iter().map(|&v| DegreePair::new(v, v)).collect())
    }

    pub fn pairs(&self) -> &[DegreePair] {
        &self.0
    }

    pub fn into_pairs(self) -> Vec<DegreePair> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry at 1-based index `i`. Panics when out of range.
    pub fn get(&self, i: usize) -> DegreePair {
        self.0[i - 1]
    }

    /// Copy of the sequence with entry `i` replaced.
    pub fn with(&self, i: usize, pair: DegreePair) -> Self {
        let mut pairs = self.0.clone();
        pairs[i - 1] = pair;
        IntPairSeq(pairs)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        1..=self.0.len()
    }

    pub fn out_sum(&self) -> u64 {
        self.0.iter().map(|p| u64::from(p.out_deg)).sum()
    }

    pub fn in_sum(&self) -> u64 {
        self.0.iter().map(|p| u64::from(p.in_deg)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| p.is_zero())
    }

    /// True when every index has equal out- and in-degree.
    pub fn is_eulerian(&self) -> bool {
        self.0.iter().all(|p| p.out_deg == p.in_deg)
    }

    pub fn out_degrees(&self) -> IntSeq {
        self.0.iter().map(|p| p.out_deg).collect()
    }

    pub fn in_degrees(&self) -> IntSeq {
        self.0.iter().map(|p| p.in_deg).collect()
    }

    /// Indices whose pair is not `(0,0)`, ascending.
    pub fn support(&self) -> IndexSet {
        self.indices().filter(|&i| !self.get(i).is_zero()).collect()
    }
}

impl From<Vec<DegreePair>> for IntPairSeq {
    fn from(pairs: Vec<DegreePair>) -> Self {
        IntPairSeq(pairs)
    }
}

impl FromIterator<DegreePair> for IntPairSeq {
    fn from_iter<T: IntoIterator<Item = DegreePair>>(iter: T) -> Self {
        IntPairSeq(iter.into_iter().collect())
    }
}

impl fmt::Display for IntPairSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (pos, p) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Which lexicographic ordering of degree pairs to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Out-degree first, then in-degree.
    Positive,
    /// In-degree first, then out-degree.
    Negative,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Positive => "positive",
            Direction::Negative => "negative",
        })
    }
}

/// A sequence sorted non-increasingly in one ordering.
///
/// `sorted.get(k) == original.get(perm[k - 1])`; ties keep ascending original index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedView {
    pub sorted: IntPairSeq,
    pub perm: Vec<usize>,
    pub direction: Direction,
}

impl OrderedView {
    /// Original index at 1-based sorted position `k`.
    pub fn index_at(&self, k: usize) -> usize {
        self.perm[k - 1]
    }

    /// Original indices at sorted positions `from..=to` (1-based, inclusive).
    pub fn indices_between(&self, from: usize, to: usize) -> IndexSet {
        if from > to {
            return IndexSet::new();
        }
        self.perm[from - 1..to].iter().copied().collect()
    }
}

/// Indices `1..=N` in the given ordering, greatest first, ties by ascending index.
pub fn ordered_indices(d: &IntPairSeq, direction: Direction) -> Vec<usize> {
    let mut perm: Vec<usize> = d.indices().collect();
    perm.sort_by(|&a, &b| {
        d.get(b)
            .key(direction)
            .cmp(&d.get(a).key(direction))
            .then(a.cmp(&b))
    });
    perm
}

pub fn order(d: &IntPairSeq, direction: Direction) -> OrderedView {
    let perm = ordered_indices(d, direction);
    let sorted = perm.iter().map(|&i| d.get(i)).collect();
    OrderedView { sorted, perm, direction }
}

/// Column counts of the corrected Ferrers diagram, in which row `i` skips column `i`:
/// `result_k = #{i < k : a_i ≥ k−1} + #{i > k : a_i ≥ k}`.
pub fn corrected_conjugate(a: &IntSeq) -> IntSeq {
    let values = a.values();
    let n = values.len();
    (1..=n)
        .map(|k| {
            let before = values[..k - 1]
                .iter()
                .filter(|&&v| v as usize + 1 >= k)
                .count();
            let after = values[k..].iter().filter(|&&v| v as usize >= k).count();
            (before + after) as u32
        })
        .collect()
}

/// Both orderings of a sequence together with their slack sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackProfile {
    pub positive: OrderedView,
    pub negative: OrderedView,
    /// Corrected conjugate of the in-degrees in positive order.
    pub bar_conj: IntSeq,
    /// Corrected conjugate of the out-degrees in negative order.
    pub ubar_conj: IntSeq,
    /// Positive-order slack; length N+1 with `bar_s[0] = 0`.
    pub bar_s: Vec<i64>,
    /// Negative-order slack; length N+1 with `ubar_s[0] = 0`.
    pub ubar_s: Vec<i64>,
}

fn slack(conj: &IntSeq, subtract: impl Iterator<Item = u32>) -> Vec<i64> {
    let mut acc = 0i64;
    let mut out = Vec::with_capacity(conj.len() + 1);
    out.push(0);
    for (&c, s) in conj.values().iter().zip(subtract) {
        acc += i64::from(c) - i64::from(s);
        out.push(acc);
    }
    out
}

pub fn slack_profile(d: &IntPairSeq) -> SlackProfile {
    let positive = order(d, Direction::Positive);
    let negative = order(d, Direction::Negative);
    let bar_conj = corrected_conjugate(&positive.sorted.in_degrees());
    let ubar_conj = corrected_conjugate(&negative.sorted.out_degrees());
    let bar_s = slack(&bar_conj, positive.sorted.pairs().iter().map(|p| p.out_deg));
    let ubar_s = slack(&ubar_conj, negative.sorted.pairs().iter().map(|p| p.in_deg));
    SlackProfile { positive, negative, bar_conj, ubar_conj, bar_s, ubar_s }
}

/// Why a pair sequence is not digraphic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Infeasibility {
    SumMismatch { out_sum: u64, in_sum: u64 },
    /// The first negative slack entry: `position` is 1-based in `direction`'s
    /// ordering and `index` the original index sitting there.
    NegativeSlack {
        direction: Direction,
        position: usize,
        index: usize,
        slack: i64,
    },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::SumMismatch { out_sum, in_sum } => {
                write!(f, "out-degree sum {out_sum} differs from in-degree sum {in_sum}")
            }
            Infeasibility::NegativeSlack { direction, position, index, slack } => write!(
                f,
                "slack {slack} at position {position} of the {direction} ordering (index {index})"
            ),
        }
    }
}

fn first_negative(view: &OrderedView, s: &[i64]) -> Option<Infeasibility> {
    s.iter().position(|&v| v < 0).map(|position| Infeasibility::NegativeSlack {
        direction: view.direction,
        position,
        index: view.index_at(position),
        slack: s[position],
    })
}

/// `None` when `d` is digraphic, otherwise the first violated condition.
pub fn digraphic_diagnosis(d: &IntPairSeq) -> Option<Infeasibility> {
    let (out_sum, in_sum) = (d.out_sum(), d.in_sum());
    if out_sum != in_sum {
        return Some(Infeasibility::SumMismatch { out_sum, in_sum });
    }
    let profile = slack_profile(d);
    let verdict = first_negative(&profile.positive, &profile.bar_s);
    debug_assert_eq!(
        verdict.is_none(),
        profile.ubar_s.iter().all(|&v| v >= 0),
        "positive and negative slack criteria disagree on {d}"
    );
    verdict
}

/// Fulkerson's criterion: equal sums and no negative slack.
pub fn is_digraphic(d: &IntPairSeq) -> bool {
    digraphic_diagnosis(d).is_none()
}

/// Erdős–Gallai, evaluated only where the sorted sequence strictly drops.
pub fn is_graphic(d: &IntSeq) -> bool {
    if !d.sum().is_multiple_of(2) {
        return false;
    }
    let mut sorted: Vec<u64> = d.values().iter().map(|&v| u64::from(v)).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let n = sorted.len();
    let mut prefix = 0u64;
    for k in 1..=n {
        prefix += sorted[k - 1];
        if k < n && sorted[k - 1] == sorted[k] {
            continue;
        }
        let k64 = k as u64;
        let tail: u64 = sorted[k..].iter().map(|&v| v.min(k64)).sum();
        if prefix > k64 * (k64 - 1) + tail {
            return false;
        }
    }
    true
}
