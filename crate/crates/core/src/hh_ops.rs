//! Reduction operators (undirected Havel-Hakimi, Kleitman-Wang in either
//! direction, serial and parallel steps), maximal index set selection and the
//! classical realizers built on them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph_core::{Digraph, DigraphBuilder};
use crate::seq_core::{
    digraphic_diagnosis, ordered_indices, DegreePair, Direction, IndexSet, Infeasibility,
    IntPairSeq, IntSeq,
};

/// How to choose among indices whose degrees tie at the boundary of a maximal set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Lowest indices first, independently for each set.
    LowestIndex,
    /// `kplus` by lowest index, then `kminus` avoids `kplus` members where ties allow.
    #[default]
    PreferDisjoint,
    /// `kplus == kminus`; fails with [`StepError::EqualSetsImpossible`] when ties do not allow it.
    ForceEqual,
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TiePolicy::LowestIndex => "lowest-index",
            TiePolicy::PreferDisjoint => "prefer-disjoint",
            TiePolicy::ForceEqual => "force-equal",
        })
    }
}

/// Which half of a vertex a Kleitman-Wang step lays down.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KwDirection {
    /// Out-arcs `i → kminus`.
    #[default]
    Plus,
    /// In-arcs `kplus → i`.
    Minus,
}

impl KwDirection {
    pub fn opposite(self) -> Self {
        match self {
            KwDirection::Plus => KwDirection::Minus,
            KwDirection::Minus => KwDirection::Plus,
        }
    }
}

/// An index with the sets it is joined to: arcs `kplus → i` and `i → kminus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MaximalIndexPair {
    pub i: usize,
    /// Size `d_i⁻`, maximal in the positive ordering.
    pub kplus: IndexSet,
    /// Size `d_i⁺`, maximal in the negative ordering.
    pub kminus: IndexSet,
}

impl MaximalIndexPair {
    pub fn empty(i: usize) -> Self {
        MaximalIndexPair { i, kplus: IndexSet::new(), kminus: IndexSet::new() }
    }

    /// The arcs a parallel step at this pair lays down.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let into = self.kplus.iter().map(|&j| (j, self.i));
        let out_of = self.kminus.iter().map(|&j| (self.i, j));
        into.chain(out_of).collect()
    }

    /// Checks sizes and maximality of both sets against `d`.
    pub fn validate(&self, d: &IntPairSeq) -> Result<(), StepError> {
        self.validate_half(d, Direction::Positive)?;
        self.validate_half(d, Direction::Negative)
    }

    fn validate_half(&self, d: &IntPairSeq, direction: Direction) -> Result<(), StepError> {
        check_index(d.len(), self.i)?;
        let (set, size) = match direction {
            Direction::Positive => (&self.kplus, d.get(self.i).in_deg),
            Direction::Negative => (&self.kminus, d.get(self.i).out_deg),
        };
        if is_maximal_set(d, self.i, set, size as usize, direction) {
            Ok(())
        } else {
            Err(StepError::InvalidMaximalSet { index: self.i, direction })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("index {0} is out of range")]
    InvalidIndex(usize),
    #[error("index {index} needs {needed} partners but only {available} other indices exist")]
    NotEnoughIndices { index: usize, needed: usize, available: usize },
    #[error("no set serves as both maximal sets for index {index}")]
    EqualSetsImpossible { index: usize },
    #[error("the {direction} set for index {index} is not a maximal index set")]
    InvalidMaximalSet { index: usize, direction: Direction },
    #[error("degree at index {index} would drop below zero")]
    Underflow { index: usize },
}

/// Failure of a realizer.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("sequence is not graphic")]
    NotGraphic,
    #[error("sequence is not digraphic: {0}")]
    NotDigraphic(Infeasibility),
    #[error("sequence is not Eulerian: index {index} has unequal out- and in-degree")]
    NotEulerian { index: usize },
    #[error("sequence is not an extreme sequence")]
    NotExtreme,
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

fn check_index(n: usize, i: usize) -> Result<(), StepError> {
    if i == 0 || i > n {
        Err(StepError::InvalidIndex(i))
    } else {
        Ok(())
    }
}

/// True when `set` has `size` members, excludes `i`, and no index outside
/// `set ∪ {i}` is strictly greater in `direction` than a member.
pub fn is_maximal_set(
    d: &IntPairSeq,
    i: usize,
    set: &IndexSet,
    size: usize,
    direction: Direction,
) -> bool {
    if set.len() != size || set.contains(&i) || set.iter().any(|&j| j == 0 || j > d.len()) {
        return false;
    }
    let Some(floor) = set.iter().map(|&j| d.get(j).key(direction)).min() else {
        return true;
    };
    d.indices()
        .filter(|&j| j != i && !set.contains(&j))
        .all(|j| d.get(j).key(direction) <= floor)
}

/// Candidates for a maximal set of `size` around index `i`: those strictly above the
/// boundary degree (all of which must be taken) and those tied with it.
struct Boundary {
    forced: Vec<usize>,
    tied: Vec<usize>,
    need: usize,
}

fn boundary(d: &IntPairSeq, i: usize, size: usize, direction: Direction) -> Result<Boundary, StepError> {
    let candidates: Vec<usize> =
        ordered_indices(d, direction).into_iter().filter(|&j| j != i).collect();
    if size > candidates.len() {
        return Err(StepError::NotEnoughIndices {
            index: i,
            needed: size,
            available: candidates.len(),
        });
    }
    if size == 0 {
        return Ok(Boundary { forced: Vec::new(), tied: Vec::new(), need: 0 });
    }
    let edge = d.get(candidates[size - 1]).key(direction);
    let forced: Vec<usize> =
        candidates.iter().copied().filter(|&j| d.get(j).key(direction) > edge).collect();
    let tied: Vec<usize> =
        candidates.iter().copied().filter(|&j| d.get(j).key(direction) == edge).collect();
    let need = size - forced.len();
    Ok(Boundary { forced, tied, need })
}

impl Boundary {
    fn lowest(&self) -> IndexSet {
        self.forced.iter().chain(&self.tied[..self.need]).copied().collect()
    }

    fn avoiding(&self, avoid: &IndexSet) -> IndexSet {
        let fresh = self.tied.iter().filter(|j| !avoid.contains(j));
        let reused = self.tied.iter().filter(|j| avoid.contains(j));
        self.forced.iter().copied().chain(fresh.chain(reused).take(self.need).copied()).collect()
    }
}

pub fn maximal_index_sets(
    d: &IntPairSeq,
    i: usize,
    policy: TiePolicy,
) -> Result<MaximalIndexPair, StepError> {
    check_index(d.len(), i)?;
    let DegreePair { out_deg, in_deg } = d.get(i);
    let plus = boundary(d, i, in_deg as usize, Direction::Positive)?;
    let minus = boundary(d, i, out_deg as usize, Direction::Negative)?;
    let (kplus, kminus) = match policy {
        TiePolicy::LowestIndex => (plus.lowest(), minus.lowest()),
        TiePolicy::PreferDisjoint => {
            let kplus = plus.lowest();
            let kminus = minus.avoiding(&kplus);
            (kplus, kminus)
        }
        TiePolicy::ForceEqual => {
            let shared = force_equal(&plus, &minus, out_deg as usize)
                .filter(|_| out_deg == in_deg)
                .ok_or(StepError::EqualSetsImpossible { index: i })?;
            (shared.clone(), shared)
        }
    };
    Ok(MaximalIndexPair { i, kplus, kminus })
}

fn force_equal(plus: &Boundary, minus: &Boundary, size: usize) -> Option<IndexSet> {
    let allowed_plus: IndexSet = plus.forced.iter().chain(&plus.tied).copied().collect();
    let allowed_minus: IndexSet = minus.forced.iter().chain(&minus.tied).copied().collect();
    let allowed: IndexSet = allowed_plus.intersection(&allowed_minus).copied().collect();
    let mut set: IndexSet = plus.forced.iter().chain(&minus.forced).copied().collect();
    if !set.is_subset(&allowed) || set.len() > size || allowed.len() < size {
        return None;
    }
    for &j in &allowed {
        if set.len() == size {
            break;
        }
        set.insert(j);
    }
    Some(set)
}

/// Undirected step: zero `d_i` and decrement every degree in `k`.
pub fn hh_step(d: &IntSeq, i: usize, k: &IndexSet) -> Result<IntSeq, StepError> {
    check_index(d.len(), i)?;
    let values = d.values();
    let size = d.get(i) as usize;
    let maximal = k.len() == size
        && !k.contains(&i)
        && k.iter().all(|&j| (1..=d.len()).contains(&j))
        && {
            let floor = k.iter().map(|&j| d.get(j)).min().unwrap_or(0);
            (1..=d.len()).filter(|&j| j != i && !k.contains(&j)).all(|j| d.get(j) <= floor)
        };
    if !maximal {
        return Err(StepError::InvalidMaximalSet { index: i, direction: Direction::Positive });
    }
    let mut next = values.to_vec();
    next[i - 1] = 0;
    for &j in k {
        next[j - 1] = next[j - 1].checked_sub(1).ok_or(StepError::Underflow { index: j })?;
    }
    Ok(IntSeq::new(next))
}

/// Kleitman-Wang step. `Plus` zeroes `d_i⁺` and decrements in-degrees over `kminus`;
/// `Minus` zeroes `d_i⁻` and decrements out-degrees over `kplus`.
pub fn kw_step(
    d: &IntPairSeq,
    pair: &MaximalIndexPair,
    direction: KwDirection,
) -> Result<IntPairSeq, StepError> {
    let mut next = d.clone().into_pairs();
    match direction {
        KwDirection::Plus => {
            pair.validate_half(d, Direction::Negative)?;
            next[pair.i - 1].out_deg = 0;
            decrement(&mut next, &pair.kminus, |p| &mut p.in_deg)?;
        }
        KwDirection::Minus => {
            pair.validate_half(d, Direction::Positive)?;
            next[pair.i - 1].in_deg = 0;
            decrement(&mut next, &pair.kplus, |p| &mut p.out_deg)?;
        }
    }
    Ok(IntPairSeq::new(next))
}

fn decrement(
    pairs: &mut [DegreePair],
    set: &IndexSet,
    field: impl Fn(&mut DegreePair) -> &mut u32,
) -> Result<(), StepError> {
    for &j in set {
        let slot = field(&mut pairs[j - 1]);
        *slot = slot.checked_sub(1).ok_or(StepError::Underflow { index: j })?;
    }
    Ok(())
}

/// Parallel step: zero index `i` entirely, decrement out-degrees over `kplus` and
/// in-degrees over `kminus`.
pub fn parallel_step(d: &IntPairSeq, pair: &MaximalIndexPair) -> Result<IntPairSeq, StepError> {
    pair.validate(d)?;
    let mut next = d.clone().into_pairs();
    next[pair.i - 1] = DegreePair::ZERO;
    decrement(&mut next, &pair.kplus, |p| &mut p.out_deg)?;
    decrement(&mut next, &pair.kminus, |p| &mut p.in_deg)?;
    Ok(IntPairSeq::new(next))
}

/// Two Kleitman-Wang steps at `i`, `first` then its opposite, each choosing
/// lowest-index maximal sets from the sequence it acts on. Returns the residual and
/// the pair of sets actually used.
pub fn serial_step(
    d: &IntPairSeq,
    i: usize,
    first: KwDirection,
) -> Result<(IntPairSeq, MaximalIndexPair), StepError> {
    let first_pair = maximal_index_sets(d, i, TiePolicy::LowestIndex)?;
    let mid = kw_step(d, &first_pair, first)?;
    let second_pair = maximal_index_sets(&mid, i, TiePolicy::LowestIndex)?;
    let residual = kw_step(&mid, &second_pair, first.opposite())?;
    let used = match first {
        KwDirection::Plus => MaximalIndexPair { i, kplus: second_pair.kplus, kminus: first_pair.kminus },
        KwDirection::Minus => MaximalIndexPair { i, kplus: first_pair.kplus, kminus: second_pair.kminus },
    };
    Ok((residual, used))
}

/// Undirected Havel-Hakimi: repeatedly join the largest remaining degree (lowest
/// index on ties) to the next largest degrees. Edges are returned as arc pairs.
pub fn realize_havel_hakimi(d: &IntSeq) -> Result<Digraph, RealizeError> {
    let n = d.len();
    let mut current = d.clone();
    let mut builder = DigraphBuilder::new(n);
    loop {
        let values = current.values();
        let Some(i) = (1..=n).filter(|&j| values[j - 1] > 0).min_by_key(|&j| (std::cmp::Reverse(values[j - 1]), j)) else {
            break;
        };
        let mut others: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
        others.sort_by_key(|&j| (std::cmp::Reverse(values[j - 1]), j));
        let size = values[i - 1] as usize;
        if size > others.len() {
            return Err(RealizeError::NotGraphic);
        }
        let k: IndexSet = others[..size].iter().copied().collect();
        current = match hh_step(&current, i, &k) {
            Ok(next) => next,
            Err(StepError::Underflow { .. }) => return Err(RealizeError::NotGraphic),
            Err(e) => return Err(RealizeError::InvariantViolation(e.to_string())),
        };
        for &j in &k {
            builder.add_arc(i, j).and_then(|b| b.add_arc(j, i)).map_err(internal)?;
        }
    }
    Ok(builder.build())
}

pub(crate) fn internal(e: impl fmt::Display) -> RealizeError {
    RealizeError::InvariantViolation(e.to_string())
}

/// The `NotDigraphic` error for `d`, or an invariant violation when `d` is in fact
/// digraphic (a step failed that the theory says cannot fail).
pub(crate) fn not_digraphic(d: &IntPairSeq, cause: impl fmt::Display) -> RealizeError {
    match digraphic_diagnosis(d) {
        Some(diag) => RealizeError::NotDigraphic(diag),
        None => RealizeError::InvariantViolation(format!("digraphic {d} failed: {cause}")),
    }
}

/// Kleitman-Wang: repeatedly take the greatest index in positive order whose
/// `direction` coordinate is nonzero and lay down that half with lowest-index maximal sets.
pub fn realize_kleitman_wang(d: &IntPairSeq, direction: KwDirection) -> Result<Digraph, RealizeError> {
    if d.out_sum() != d.in_sum() {
        return Err(not_digraphic(d, "unequal sums"));
    }
    let mut current = d.clone();
    let mut builder = DigraphBuilder::new(d.len());
    let relevant = |p: DegreePair| match direction {
        KwDirection::Plus => p.out_deg,
        KwDirection::Minus => p.in_deg,
    };
    while let Some(i) = ordered_indices(&current, Direction::Positive)
        .into_iter()
        .find(|&j| relevant(current.get(j)) > 0)
    {
        let pair = maximal_index_sets(&current, i, TiePolicy::LowestIndex)
            .map_err(|e| not_digraphic(d, e))?;
        current = kw_step(&current, &pair, direction).map_err(|e| not_digraphic(d, e))?;
        let arcs: Vec<(usize, usize)> = match direction {
            KwDirection::Plus => pair.kminus.iter().map(|&j| (i, j)).collect(),
            KwDirection::Minus => pair.kplus.iter().map(|&j| (j, i)).collect(),
        };
        builder.add_arcs(arcs).map_err(internal)?;
    }
    if !current.is_zero() {
        return Err(not_digraphic(d, "degrees left after all steps"));
    }
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq_core::is_digraphic;

    fn seq(pairs: &[(u32, u32)]) -> IntPairSeq {
        IntPairSeq::from_pairs(pairs)
    }

    fn set(items: &[usize]) -> IndexSet {
        items.iter().copied().collect()
    }

    #[test]
    fn maximal_sets_examples() {
        let four = seq(&[(1, 1); 4]);
        let p = maximal_index_sets(&four, 1, TiePolicy::ForceEqual).unwrap();
        assert_eq!((p.kplus, p.kminus), (set(&[2]), set(&[2])));
        let three = seq(&[(1, 1); 3]);
        let p = maximal_index_sets(&three, 1, TiePolicy::PreferDisjoint).unwrap();
        assert_eq!((p.kplus, p.kminus), (set(&[2]), set(&[3])));
        assert_eq!(
            maximal_index_sets(&seq(&[(2, 2), (0, 0)]), 1, TiePolicy::LowestIndex).unwrap_err(),
            StepError::NotEnoughIndices { index: 1, needed: 2, available: 1 }
        );
    }

    #[test]
    fn force_equal_needs_compatible_ties() {
        // Positive order wants index 2, negative order wants index 3.
        let d = seq(&[(1, 1), (2, 0), (0, 2)]);
        assert_eq!(
            maximal_index_sets(&d, 1, TiePolicy::ForceEqual).unwrap_err(),
            StepError::EqualSetsImpossible { index: 1 }
        );
        let uneven = seq(&[(2, 1), (1, 1), (1, 2)]);
        assert!(maximal_index_sets(&uneven, 1, TiePolicy::ForceEqual).is_err());
    }

    #[test]
    fn hh_step_examples() {
        let s = |v: &[u32]| IntSeq::new(v.to_vec());
        assert_eq!(hh_step(&s(&[1, 1, 1, 1]), 1, &set(&[2])).unwrap(), s(&[0, 0, 1, 1]));
        assert_eq!(hh_step(&s(&[2, 2, 2]), 1, &set(&[2, 3])).unwrap(), s(&[0, 1, 1]));
        assert_eq!(
            hh_step(&s(&[2, 0, 0]), 1, &set(&[2, 3])).unwrap_err(),
            StepError::Underflow { index: 2 }
        );
        assert!(matches!(
            hh_step(&s(&[1, 1, 2]), 1, &set(&[2])),
            Err(StepError::InvalidMaximalSet { .. })
        ));
    }

    #[test]
    fn kw_step_examples() {
        let three = seq(&[(1, 1); 3]);
        let pair = MaximalIndexPair { i: 1, kplus: set(&[2]), kminus: set(&[2]) };
        assert_eq!(kw_step(&three, &pair, KwDirection::Plus).unwrap(), seq(&[(0, 1), (1, 0), (1, 1)]));
        let d = seq(&[(0, 1), (1, 0)]);
        let pair = MaximalIndexPair { i: 1, kplus: set(&[2]), kminus: set(&[]) };
        assert_eq!(kw_step(&d, &pair, KwDirection::Plus).unwrap(), d);
        let d = seq(&[(1, 1), (0, 1)]);
        let pair = MaximalIndexPair { i: 1, kplus: set(&[2]), kminus: set(&[2]) };
        assert_eq!(kw_step(&d, &pair, KwDirection::Plus).unwrap(), seq(&[(0, 1), (0, 0)]));
        assert_eq!(
            kw_step(&d, &pair, KwDirection::Minus).unwrap_err(),
            StepError::Underflow { index: 2 }
        );
    }

    #[test]
    fn parallel_step_examples() {
        let three = seq(&[(1, 1); 3]);
        let trap = MaximalIndexPair { i: 1, kplus: set(&[3]), kminus: set(&[3]) };
        let residual = parallel_step(&three, &trap).unwrap();
        assert_eq!(residual, seq(&[(0, 0), (1, 1), (0, 0)]));
        assert!(!is_digraphic(&residual));
        let good = MaximalIndexPair { i: 1, kplus: set(&[2]), kminus: set(&[3]) };
        let residual = parallel_step(&three, &good).unwrap();
        assert_eq!(residual, seq(&[(0, 0), (0, 1), (1, 0)]));
        assert!(is_digraphic(&residual));
        let four = seq(&[(1, 1); 4]);
        let pair = MaximalIndexPair { i: 1, kplus: set(&[2]), kminus: set(&[2]) };
        assert_eq!(parallel_step(&four, &pair).unwrap(), seq(&[(0, 0), (0, 0), (1, 1), (1, 1)]));
    }

    #[test]
    fn serial_step_on_c3() {
        let three = seq(&[(1, 1); 3]);
        let (residual, used) = serial_step(&three, 1, KwDirection::Plus).unwrap();
        assert_eq!(used.kminus, set(&[2]));
        assert_eq!(residual, parallel_step(&three, &used).unwrap());
    }

    #[test]
    fn havel_hakimi_examples() {
        let g = realize_havel_hakimi(&IntSeq::new(vec![1, 1, 1, 1])).unwrap();
        assert_eq!(g.arcs(), vec![(1, 2), (2, 1), (3, 4), (4, 3)]);
        assert_eq!(realize_havel_hakimi(&IntSeq::new(vec![0, 0])).unwrap().arc_count(), 0);
        assert_eq!(realize_havel_hakimi(&IntSeq::new(vec![3, 1])).unwrap_err(), RealizeError::NotGraphic);
        assert_eq!(realize_havel_hakimi(&IntSeq::new(vec![1])).unwrap_err(), RealizeError::NotGraphic);
    }

    #[test]
    fn kleitman_wang_examples() {
        let three = seq(&[(1, 1); 3]);
        for direction in [KwDirection::Plus, KwDirection::Minus] {
            let g = realize_kleitman_wang(&three, direction).unwrap();
            assert_eq!(g.degree_sequence(), three);
            assert_eq!(g.unpaired_arcs().len(), 3);
        }
        assert!(matches!(
            realize_kleitman_wang(&seq(&[(0, 0), (0, 0), (1, 1)]), KwDirection::Plus),
            Err(RealizeError::NotDigraphic(_))
        ));
        let six = seq(&[(1, 2), (2, 3), (0, 1), (2, 3), (5, 0), (2, 3)]);
        assert_eq!(realize_kleitman_wang(&six, KwDirection::Plus).unwrap().degree_sequence(), six);
    }
}
