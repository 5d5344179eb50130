//! Simple labeled digraphs on vertices `1..=N`, the n-switch, induced 3-cycle
//! search and the six-class partition around a 3-cycle.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seq_core::{DegreePair, IndexSet, IntPairSeq};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("arc ({0},{1}) is already present")]
    DuplicateArc(usize, usize),
    #[error("switch constraint {constraint} violated at pair {position}")]
    SwitchViolation {
        constraint: SwitchConstraint,
        /// 1-based position in the switch set.
        position: usize,
    },
}

/// The requirement of an n-switch that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchConstraint {
    /// A listed pair is not an arc of the graph.
    Membership,
    /// Two pairs share a tail or share a head.
    Distinct,
    /// A rewired pair would be a self-loop (constraint (i)).
    NoLoop,
    /// A rewired pair is already an arc (constraint (ii)).
    NoExistingArc,
}

impl fmt::Display for SwitchConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwitchConstraint::Membership => "membership",
            SwitchConstraint::Distinct => "distinct endpoints",
            SwitchConstraint::NoLoop => "(i)",
            SwitchConstraint::NoExistingArc => "(ii)",
        })
    }
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Dense bit adjacency, kept for both arc directions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = words_for(n);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    fn get(&self, row: usize, col: usize) -> bool {
        let (r, c) = (row - 1, col - 1);
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn set(&mut self, row: usize, col: usize, value: bool) {
        let (r, c) = (row - 1, col - 1);
        let word = &mut self.bits[r * self.words + c / 64];
        if value {
            *word |= 1 << (c % 64);
        } else {
            *word &= !(1 << (c % 64));
        }
    }

    fn row_count(&self, row: usize) -> u32 {
        let start = (row - 1) * self.words;
        self.bits[start..start + self.words].iter().map(|w| w.count_ones()).sum()
    }

    fn row_members(&self, row: usize) -> Vec<usize> {
        let start = (row - 1) * self.words;
        let mut out = Vec::new();
        for (w, &word) in self.bits[start..start + self.words].iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let bit = rest.trailing_zeros() as usize;
                out.push(w * 64 + bit + 1);
                rest &= rest - 1;
            }
        }
        debug_assert!(out.iter().all(|&v| v <= self.n));
        out
    }
}

/// A simple digraph: no self-loops, each ordered pair at most once.
/// Opposite arcs `(u,v)` and `(v,u)` may both be present.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    out_adj: BitMatrix,
    in_adj: BitMatrix,
    arc_count: usize,
}

/// Accumulates arcs and freezes them into a [`Digraph`].
#[derive(Clone, Debug)]
pub struct DigraphBuilder {
    graph: Digraph,
}

impl DigraphBuilder {
    pub fn new(n_vertices: usize) -> Self {
        DigraphBuilder { graph: Digraph::empty(n_vertices) }
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.graph.has_arc(u, v)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<&mut Self, GraphError> {
        self.graph.check_vertex(u)?;
        self.graph.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.graph.has_arc(u, v) {
            return Err(GraphError::DuplicateArc(u, v));
        }
        self.graph.put(u, v, true);
        Ok(self)
    }

    pub fn add_arcs(
        &mut self,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<&mut Self, GraphError> {
        for (u, v) in arcs {
            self.add_arc(u, v)?;
        }
        Ok(self)
    }

    pub fn build(self) -> Digraph {
        self.graph
    }
}

impl Digraph {
    pub fn empty(n_vertices: usize) -> Self {
        Digraph {
            out_adj: BitMatrix::new(n_vertices),
            in_adj: BitMatrix::new(n_vertices),
            arc_count: 0,
        }
    }

    pub fn from_arcs(
        n_vertices: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut builder = DigraphBuilder::new(n_vertices);
        builder.add_arcs(arcs)?;
        Ok(builder.build())
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v == 0 || v > self.n_vertices() {
            Err(GraphError::UnknownVertex(v))
        } else {
            Ok(())
        }
    }

    fn put(&mut self, u: usize, v: usize, present: bool) {
        if self.out_adj.get(u, v) != present {
            self.out_adj.set(u, v, present);
            self.in_adj.set(v, u, present);
            if present {
                self.arc_count += 1;
            } else {
                self.arc_count -= 1;
            }
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.out_adj.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n_vertices()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// False for out-of-range vertices.
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        let n = self.n_vertices();
        (1..=n).contains(&u) && (1..=n).contains(&v) && self.out_adj.get(u, v)
    }

    pub fn out_neighbors(&self, u: usize) -> Vec<usize> {
        self.out_adj.row_members(u)
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.in_adj.row_members(v)
    }

    pub fn out_degree(&self, u: usize) -> u32 {
        self.out_adj.row_count(u)
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.in_adj.row_count(v)
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.vertices()
            .flat_map(|u| self.out_neighbors(u).into_iter().map(move |v| (u, v)))
            .collect()
    }

    /// Arcs whose reverse is absent, in lexicographic order.
    pub fn unpaired_arcs(&self) -> Vec<(usize, usize)> {
        self.arcs().into_iter().filter(|&(u, v)| !self.has_arc(v, u)).collect()
    }

    pub fn degree_sequence(&self) -> IntPairSeq {
        self.vertices()
            .map(|v| DegreePair::new(self.out_degree(v), self.in_degree(v)))
            .collect()
    }
}

impl PartialOrd for Digraph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Digraph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n_vertices()
            .cmp(&other.n_vertices())
            .then_with(|| self.arcs().cmp(&other.arcs()))
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices:", self.n_vertices())?;
        for (u, v) in self.arcs() {
            write!(f, " {u}->{v}")?;
        }
        Ok(())
    }
}

pub fn degree_sequence(g: &Digraph) -> IntPairSeq {
    g.degree_sequence()
}

/// Ordered arcs `((x_1,y_1),…,(x_n,y_n))` to be rewired as `(x_i, y_{i+1 mod n})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchSet {
    pub pairs: Vec<(usize, usize)>,
}

impl SwitchSet {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        SwitchSet { pairs }
    }

    /// The rewired arcs `π(S)`.
    pub fn rewired(&self) -> Vec<(usize, usize)> {
        let n = self.pairs.len();
        (0..n).map(|i| (self.pairs[i].0, self.pairs[(i + 1) % n].1)).collect()
    }

    /// Checks every switch requirement against `g`, reporting the first failure.
    pub fn validate(&self, g: &Digraph) -> Result<(), GraphError> {
        let violation = |constraint, position| GraphError::SwitchViolation { constraint, position };
        for (pos, &(x, y)) in self.pairs.iter().enumerate() {
            if !g.has_arc(x, y) {
                return Err(violation(SwitchConstraint::Membership, pos + 1));
            }
        }
        for (pos, &(x, y)) in self.pairs.iter().enumerate() {
            if self.pairs[..pos].iter().any(|&(a, b)| a == x || b == y) {
                return Err(violation(SwitchConstraint::Distinct, pos + 1));
            }
        }
        let rewired = self.rewired();
        for (pos, &(x, y)) in rewired.iter().enumerate() {
            if x == y {
                return Err(violation(SwitchConstraint::NoLoop, pos + 1));
            }
        }
        for (pos, &(x, y)) in rewired.iter().enumerate() {
            if g.has_arc(x, y) {
                return Err(violation(SwitchConstraint::NoExistingArc, pos + 1));
            }
        }
        Ok(())
    }
}

/// `A' = (A ∖ S) ∪ π(S)`; degree-preserving.
pub fn n_switch(g: &Digraph, s: &SwitchSet) -> Result<Digraph, GraphError> {
    s.validate(g)?;
    let mut out = g.clone();
    for &(x, y) in &s.pairs {
        out.put(x, y, false);
    }
    for (x, y) in s.rewired() {
        out.put(x, y, true);
    }
    Ok(out)
}

/// The subgraph induced on `x`, relabeled `1..=|x|` in ascending original order.
pub fn induced(g: &Digraph, x: &IndexSet) -> Result<Digraph, GraphError> {
    for &v in x {
        g.check_vertex(v)?;
    }
    let members: Vec<usize> = x.iter().copied().collect();
    let mut out = Digraph::empty(members.len());
    for (a, &u) in members.iter().enumerate() {
        for (b, &v) in members.iter().enumerate() {
            if g.has_arc(u, v) {
                out.put(a + 1, b + 1, true);
            }
        }
    }
    Ok(out)
}

/// True when `{a,b,c}` induces exactly a directed 3-cycle.
pub fn is_induced_c3(g: &Digraph, a: usize, b: usize, c: usize) -> bool {
    let forward = g.has_arc(a, b) && g.has_arc(b, c) && g.has_arc(c, a);
    let backward = g.has_arc(b, a) && g.has_arc(c, b) && g.has_arc(a, c);
    forward != backward
}

/// Sorted triples containing `x` that induce a directed 3-cycle, in lexicographic order.
pub fn find_anchored_c3(g: &Digraph, x: usize) -> Result<Vec<[usize; 3]>, GraphError> {
    g.check_vertex(x)?;
    let n = g.n_vertices();
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if a == x || b == x || !is_induced_c3(g, x, a, b) {
                continue;
            }
            let mut triple = [x, a, b];
            triple.sort_unstable();
            out.push(triple);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// How a vertex outside the cycle `u→v→w→u` attaches to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexClass {
    /// No arcs to or from the cycle.
    C0,
    /// Bidirectional with `u` only.
    Upm,
    /// Bidirectional with `v` and `w` only.
    Zpm,
    /// Arcs to all three cycle vertices, none back.
    Cplus,
    /// Arcs from all three cycle vertices, none back.
    Cminus,
    /// Bidirectional with all three cycle vertices.
    Cpm,
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexClass::C0 => "C0",
            VertexClass::Upm => "U±",
            VertexClass::Zpm => "Z±",
            VertexClass::Cplus => "C+",
            VertexClass::Cminus => "C-",
            VertexClass::Cpm => "C±",
        })
    }
}

/// Whether an arc between two classed vertices must be present, must be absent,
/// or is unconstrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcRule {
    Required,
    Forbidden,
    Free,
}

/// The rule for an arc from a vertex of class `from` to a distinct vertex of class `to`.
pub fn arc_rule(from: VertexClass, to: VertexClass) -> ArcRule {
    use ArcRule::{Forbidden as O, Free as F, Required as R};
    use VertexClass::*;
    let slot = |c: VertexClass| match c {
        Cpm => 0,
        Cplus => 1,
        Cminus => 2,
        C0 => 3,
        Upm | Zpm => 4,
    };
    const TABLE: [[ArcRule; 5]; 5] = [
        [R, F, R, F, R],
        [R, F, R, F, R],
        [F, O, F, O, O],
        [F, O, F, O, O],
        [R, O, R, O, O],
    ];
    if from == Zpm && to == Zpm {
        return R;
    }
    TABLE[slot(from)][slot(to)]
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("({0},{1},{2}) does not induce the directed 3-cycle u->v->w->u")]
    NotACycle(usize, usize, usize),
    #[error("vertex {0} attaches to the cycle in no recognised pattern")]
    ClassificationFailure(usize),
    #[error("vertices {upm} in U± and {zpm} in Z± cannot coexist")]
    ExclusiveClasses { upm: usize, zpm: usize },
    #[error("arc ({},{}) from {from} to {to}: expected {}", arc.0, arc.1, if *expected { "present" } else { "absent" })]
    MConstraintViolation {
        from: VertexClass,
        to: VertexClass,
        arc: (usize, usize),
        expected: bool,
    },
}

/// Vertex classes relative to an oriented induced 3-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPartition {
    pub cycle: (usize, usize, usize),
    /// `(vertex, class)` for every vertex off the cycle, ascending by vertex.
    pub classes: Vec<(usize, VertexClass)>,
}

impl ClassPartition {
    pub fn class_of(&self, x: usize) -> Option<VertexClass> {
        self.classes.iter().find(|&&(v, _)| v == x).map(|&(_, c)| c)
    }

    pub fn members(&self, class: VertexClass) -> IndexSet {
        self.classes.iter().filter(|&&(_, c)| c == class).map(|&(v, _)| v).collect()
    }
}

fn class_for(g: &Digraph, x: usize, (u, v, w): (usize, usize, usize)) -> Option<VertexClass> {
    let to = [g.has_arc(x, u), g.has_arc(x, v), g.has_arc(x, w)];
    let from = [g.has_arc(u, x), g.has_arc(v, x), g.has_arc(w, x)];
    match (to, from) {
        ([false, false, false], [false, false, false]) => Some(VertexClass::C0),
        ([true, false, false], [true, false, false]) => Some(VertexClass::Upm),
        ([false, true, true], [false, true, true]) => Some(VertexClass::Zpm),
        ([true, true, true], [false, false, false]) => Some(VertexClass::Cplus),
        ([false, false, false], [true, true, true]) => Some(VertexClass::Cminus),
        ([true, true, true], [true, true, true]) => Some(VertexClass::Cpm),
        _ => None,
    }
}

/// Classifies every vertex off the cycle `u→v→w→u` and checks every pairwise arc rule.
pub fn classify_vertices(
    g: &Digraph,
    cycle: (usize, usize, usize),
) -> Result<ClassPartition, ClassifyError> {
    let (u, v, w) = cycle;
    for x in [u, v, w] {
        g.check_vertex(x)?;
    }
    let oriented = g.has_arc(u, v) && g.has_arc(v, w) && g.has_arc(w, u);
    let distinct = u != v && v != w && u != w;
    if !distinct || !oriented || !is_induced_c3(g, u, v, w) {
        return Err(ClassifyError::NotACycle(u, v, w));
    }
    let mut classes = Vec::new();
    for x in g.vertices().filter(|&x| x != u && x != v && x != w) {
        let class = class_for(g, x, cycle).ok_or(ClassifyError::ClassificationFailure(x))?;
        classes.push((x, class));
    }
    let first = |c| classes.iter().find(|&&(_, k)| k == c).map(|&(x, _)| x);
    if let (Some(upm), Some(zpm)) = (first(VertexClass::Upm), first(VertexClass::Zpm)) {
        return Err(ClassifyError::ExclusiveClasses { upm, zpm });
    }
    for &(x, cx) in &classes {
        for &(y, cy) in &classes {
            if x == y {
                continue;
            }
            let present = g.has_arc(x, y);
            let ok = match arc_rule(cx, cy) {
                ArcRule::Required => present,
                ArcRule::Forbidden => !present,
                ArcRule::Free => true,
            };
            if !ok {
                return Err(ClassifyError::MConstraintViolation {
                    from: cx,
                    to: cy,
                    arc: (x, y),
                    expected: !present,
                });
            }
        }
    }
    Ok(ClassPartition { cycle, classes })
}

/// Tries every rotation and orientation of `triple`, returning the first successful
/// classification or the first error that is not `NotACycle`.
pub fn classify_any_rotation(
    g: &Digraph,
    triple: [usize; 3],
) -> Result<ClassPartition, ClassifyError> {
    let [a, b, c] = triple;
    let mut informative = None;
    for cycle in [(a, b, c), (b, c, a), (c, a, b), (a, c, b), (c, b, a), (b, a, c)] {
        match classify_vertices(g, cycle) {
            Ok(p) => return Ok(p),
            Err(ClassifyError::NotACycle(..)) => {}
            Err(e) => {
                informative.get_or_insert(e);
            }
        }
    }
    Err(informative.unwrap_or(ClassifyError::NotACycle(a, b, c)))
}

/// Orients `triple` as a cycle starting at `anchor` (which must be a member).
pub fn cycle_from(g: &Digraph, triple: [usize; 3], anchor: usize) -> Option<(usize, usize, usize)> {
    let others: Vec<usize> = triple.iter().copied().filter(|&t| t != anchor).collect();
    if others.len() != 2 {
        return None;
    }
    let (p, q) = (others[0], others[1]);
    if g.has_arc(anchor, p) && g.has_arc(p, q) && g.has_arc(q, anchor) {
        Some((anchor, p, q))
    } else if g.has_arc(anchor, q) && g.has_arc(q, p) && g.has_arc(p, anchor) {
        Some((anchor, q, p))
    } else {
        None
    }
}
