//! Parallel Havel-Hakimi realizers that route around anchored indices, and the
//! Eulerian specialization.

use serde::{Deserialize, Serialize};

use crate::anchored::{anchor_indices, is_extreme, realize_extreme, safe_index_sets};
use crate::digraph_core::{Digraph, DigraphBuilder};
use crate::hh_ops::{
    internal, maximal_index_sets, parallel_step, realize_havel_hakimi, realize_kleitman_wang,
    KwDirection, MaximalIndexPair, RealizeError, StepError, TiePolicy,
};
use crate::seq_core::{
    digraphic_diagnosis, is_digraphic, ordered_indices, Direction, IndexSet, IntPairSeq,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Undirected Havel-Hakimi on an Eulerian sequence's out-degrees.
    Hh,
    Kw,
    #[default]
    Parallel,
    ParallelAlt,
    Eulerian,
}

/// Which nonzero index a realizer processes next.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexOrder {
    /// The greatest remaining index in the positive ordering.
    #[default]
    MaxPositiveFirst,
    LowestIndex,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealizeOptions {
    pub method: Method,
    pub tie_policy: TiePolicy,
    pub index_order: IndexOrder,
    pub kw_direction: KwDirection,
}

impl RealizeOptions {
    pub fn new(method: Method) -> Self {
        let tie_policy = match method {
            Method::Eulerian => TiePolicy::ForceEqual,
            _ => TiePolicy::default(),
        };
        RealizeOptions { method, tie_policy, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), RealizeError> {
        if self.method == Method::Eulerian && self.tie_policy != TiePolicy::ForceEqual {
            return Err(RealizeError::InvalidOptions(
                "the eulerian method requires the force-equal tie policy".into(),
            ));
        }
        Ok(())
    }
}

/// Dispatches to the realizer selected by `options`.
pub fn realize(d: &IntPairSeq, options: &RealizeOptions) -> Result<Digraph, RealizeError> {
    options.validate()?;
    match options.method {
        Method::Hh => {
            if let Some(index) = d.indices().find(|&i| d.get(i).out_deg != d.get(i).in_deg) {
                return Err(RealizeError::NotEulerian { index });
            }
            realize_havel_hakimi(&d.out_degrees())
        }
        Method::Kw => realize_kleitman_wang(d, options.kw_direction),
        Method::Parallel => realize_parallel_with(d, options.tie_policy, options.index_order),
        Method::ParallelAlt => realize_parallel_alt_with(d, options.tie_policy, options.index_order),
        Method::Eulerian => realize_eulerian_with(d, options.index_order),
    }
}

fn next_index(d: &IntPairSeq, order: IndexOrder, skip: &IndexSet) -> Option<usize> {
    let usable = |&j: &usize| !d.get(j).is_zero() && !skip.contains(&j);
    match order {
        IndexOrder::MaxPositiveFirst => {
            ordered_indices(d, Direction::Positive).into_iter().find(usable)
        }
        IndexOrder::LowestIndex => d.indices().find(usable),
    }
}

/// Maximal sets under `policy`, with force-equal falling back to prefer-disjoint
/// where ties do not allow equal sets.
fn policy_sets(d: &IntPairSeq, i: usize, policy: TiePolicy) -> Result<MaximalIndexPair, StepError> {
    match maximal_index_sets(d, i, policy) {
        Err(StepError::EqualSetsImpossible { .. }) => {
            maximal_index_sets(d, i, TiePolicy::PreferDisjoint)
        }
        other => other,
    }
}

fn ensure_digraphic(d: &IntPairSeq) -> Result<(), RealizeError> {
    match digraphic_diagnosis(d) {
        Some(diag) => Err(RealizeError::NotDigraphic(diag)),
        None => Ok(()),
    }
}

fn apply(
    builder: &mut DigraphBuilder,
    current: &IntPairSeq,
    pair: &MaximalIndexPair,
) -> Result<IntPairSeq, RealizeError> {
    let residual = parallel_step(current, pair).map_err(internal)?;
    builder.add_arcs(pair.arcs()).map_err(internal)?;
    Ok(residual)
}

pub fn realize_parallel(d: &IntPairSeq) -> Result<Digraph, RealizeError> {
    realize_parallel_with(d, TiePolicy::PreferDisjoint, IndexOrder::MaxPositiveFirst)
}

/// Repeated parallel steps. While the residual has anchors, the lowest anchor is
/// processed with its safe sets; otherwise the next index in `order` takes the
/// `policy` sets, switching to safe sets if those would leave a non-digraphic residual.
pub fn realize_parallel_with(
    d: &IntPairSeq,
    policy: TiePolicy,
    order: IndexOrder,
) -> Result<Digraph, RealizeError> {
    ensure_digraphic(d)?;
    let mut current = d.clone();
    let mut builder = DigraphBuilder::new(d.len());
    while !current.is_zero() {
        let anchors = anchor_indices(&current).map_err(internal)?;
        let next = if let Some(&i) = anchors.first() {
            let pair = safe_index_sets(&current, i).map_err(internal)?;
            apply(&mut builder, &current, &pair)?
        } else {
            let i = next_index(&current, order, &IndexSet::new())
                .ok_or_else(|| internal("nonzero sequence without a nonzero index"))?;
            let pair = policy_sets(&current, i, policy).map_err(internal)?;
            let residual = parallel_step(&current, &pair).map_err(internal)?;
            let pair = if is_digraphic(&residual) {
                pair
            } else {
                safe_index_sets(&current, i).map_err(internal)?
            };
            apply(&mut builder, &current, &pair)?
        };
        if !is_digraphic(&next) {
            return Err(internal(format!("residual {next} of {current} is not digraphic")));
        }
        current = next;
    }
    Ok(builder.build())
}

pub fn realize_parallel_alt(d: &IntPairSeq) -> Result<Digraph, RealizeError> {
    realize_parallel_alt_with(d, TiePolicy::PreferDisjoint, IndexOrder::MaxPositiveFirst)
}

/// Repeated parallel steps at non-anchor indices only; once every remaining nonzero
/// index is an anchor the residual is an extreme sequence, realized directly.
pub fn realize_parallel_alt_with(
    d: &IntPairSeq,
    policy: TiePolicy,
    order: IndexOrder,
) -> Result<Digraph, RealizeError> {
    ensure_digraphic(d)?;
    let mut current = d.clone();
    let mut builder = DigraphBuilder::new(d.len());
    while !current.is_zero() {
        let anchors = anchor_indices(&current).map_err(internal)?;
        let Some(i) = next_index(&current, order, &anchors) else {
            if is_extreme(&current).is_none() {
                return Err(internal(format!("residual {current} is neither zero nor extreme")));
            }
            let tail = realize_extreme(&current).map_err(internal)?;
            builder.add_arcs(tail.arcs()).map_err(internal)?;
            break;
        };
        let pair = policy_sets(&current, i, policy).map_err(internal)?;
        let next = apply(&mut builder, &current, &pair)?;
        if !is_digraphic(&next) {
            return Err(internal(format!(
                "non-anchor index {i} of {current} left a non-digraphic residual {next}"
            )));
        }
        current = next;
    }
    Ok(builder.build())
}

pub fn realize_eulerian(d: &IntPairSeq) -> Result<Digraph, RealizeError> {
    realize_eulerian_with(d, IndexOrder::MaxPositiveFirst)
}

/// For `d_i⁺ = d_i⁻` everywhere: every arc is paired with its reverse except, when the
/// degree sum is odd, the three arcs of one induced directed 3-cycle.
pub fn realize_eulerian_with(d: &IntPairSeq, order: IndexOrder) -> Result<Digraph, RealizeError> {
    if let Some(index) = d.indices().find(|&i| d.get(i).out_deg != d.get(i).in_deg) {
        return Err(RealizeError::NotEulerian { index });
    }
    realize_parallel_alt_with(d, TiePolicy::ForceEqual, order)
}
