//! Finite posets and lattices: covers, joins, semidistributivity,
//! congruences, CN-labelings and interval doubling.

mod cn;
mod congruence;
mod doubling;
mod export;
mod lattice;

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use petgraph::graph::DiGraph;
use thiserror::Error;

pub use cn::{check_cn_labeling, CnCondition, CnViolation};
pub use congruence::Uniformity;
pub use congruence::{Congruence, CongruenceDefect, CongruenceLattice};
pub use doubling::{double, Doubling};
pub use export::PosetJson;
pub use lattice::{local_join_test, Lattice, LatticeFailure, SdFailure};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("element index {0} out of range")]
    BadIndex(usize),
    #[error("relation has a cycle through {0:?}")]
    Cycle(Vec<usize>),
    #[error("cover ({0}, {1}) is implied by transitivity")]
    NotReduced(usize, usize),
    #[error("{0} labels supplied for {1} covers")]
    LabelCount(usize, usize),
    #[error("subset is not order-convex")]
    NotConvex,
    #[error("malformed poset JSON: {0}")]
    Json(String),
}

/// A finite poset stored as its Hasse diagram, with the full order
/// precomputed as up-set bitsets.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    names: Vec<String>,
    covers: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    above: Vec<FixedBitSet>,
    below: Vec<FixedBitSet>,
    linear: Vec<usize>,
}

/// Kahn's algorithm. Returns a linear extension or a cycle witness.
fn topological_order(n: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>, PosetError> {
    let mut out_edges = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(a, b) in edges {
        out_edges[a].push(b);
        indegree[b] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &y in &out_edges[x] {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                queue.push_back(y);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover vertex has a leftover predecessor, so walking
    // predecessors must revisit something.
    let mut pred = vec![usize::MAX; n];
    for &(a, b) in edges {
        if indegree[a] > 0 && indegree[b] > 0 {
            pred[b] = a;
        }
    }
    let mut x = (0..n).find(|&i| indegree[i] > 0).expect("leftover vertex");
    let mut seen = HashMap::new();
    let mut walk = Vec::new();
    while !seen.contains_key(&x) {
        seen.insert(x, walk.len());
        walk.push(x);
        x = pred[x];
    }
    let mut cycle = walk[seen[&x]..].to_vec();
    cycle.reverse();
    Err(PosetError::Cycle(cycle))
}

impl FinitePoset {
    /// Builds a poset from its cover relations. Rejects cycles and covers
    /// that are implied by other covers.
    pub fn from_covers(names: Vec<String>, covers: Vec<(usize, usize)>) -> Result<Self, PosetError> {
        let p = Self::build(names, covers)?;
        for &(x, y) in &p.covers {
            if p.upper[x].iter().any(|&z| z != y && p.above[z].contains(y)) {
                return Err(PosetError::NotReduced(x, y));
            }
        }
        Ok(p)
    }

    /// Builds the poset generated by arbitrary relations `a < b`; the stored
    /// covers are the transitive reduction.
    pub fn from_relations(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        let full = Self::build(names, relations.to_vec())?;
        let n = full.len();
        let mut covers = Vec::new();
        for x in 0..n {
            let mut strict = full.above[x].clone();
            strict.set(x, false);
            for y in strict.ones() {
                // y covers x unless some z strictly between exists.
                let between = strict.ones().any(|z| z != y && full.above[z].contains(y));
                if !between {
                    covers.push((x, y));
                }
            }
        }
        Self::build(full.names, covers)
    }

    /// Builds a poset from a reflexive order predicate.
    pub fn from_order(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self, PosetError> {
        let n = names.len();
        let relations: Vec<(usize, usize)> =
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| x != y && leq(x, y)).collect();
        Self::from_relations(names, &relations)
    }

    fn build(names: Vec<String>, mut covers: Vec<(usize, usize)>) -> Result<Self, PosetError> {
        let n = names.len();
        if let Some(&(a, b)) = covers.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(PosetError::BadIndex(a.max(b)));
        }
        covers.sort_unstable();
        covers.dedup();
        if let Some(&(a, _)) = covers.iter().find(|&&(a, b)| a == b) {
            return Err(PosetError::Cycle(vec![a]));
        }
        let linear = topological_order(n, &covers)?;
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in &covers {
            upper[a].push(b);
            lower[b].push(a);
        }
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for &x in linear.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &y in &upper[x] {
                set.union_with(&above[y]);
            }
            above[x] = set;
        }
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (x, up) in above.iter().enumerate() {
            for y in up.ones() {
                below[y].insert(x);
            }
        }
        Ok(FinitePoset { names, covers, labels: None, upper, lower, above, below, linear })
    }

    /// Attaches one label per cover, in the order of [`FinitePoset::covers`].
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, PosetError> {
        if labels.len() != self.covers.len() {
            return Err(PosetError::LabelCount(labels.len(), self.covers.len()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn label_covers(self, label: impl Fn(usize, usize) -> String) -> Self {
        let labels = self.covers.iter().map(|&(a, b)| label(a, b)).collect();
        FinitePoset { labels: Some(labels), ..self }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn cover_label(&self, x: usize, y: usize) -> Option<&str> {
        let labels = self.labels.as_ref()?;
        let i = self.covers.binary_search(&(x, y)).ok()?;
        Some(&labels[i])
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.covers.binary_search(&(x, y)).is_ok()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// `{ y : x <= y }`.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.above[x]
    }

    /// `{ y : y <= x }`.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.below[x]
    }

    /// A linear extension: every element precedes the elements above it.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lower[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.upper[x].is_empty()).collect()
    }

    pub fn bottom(&self) -> Option<usize> {
        match self.minimal_elements().as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }

    pub fn top(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }

    pub fn dual(&self) -> FinitePoset {
        let covers = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        let dual = Self::build(self.names.clone(), covers).expect("dual of a poset is a poset");
        match &self.labels {
            Some(_) => dual.label_covers(|a, b| self.cover_label(b, a).expect("labelled").to_string()),
            None => dual,
        }
    }

    /// Whether `x <= z <= y` with `x, y` in the set forces `z` into the set.
    pub fn is_order_convex(&self, set: &[usize]) -> bool {
        let members: HashSet<usize> = set.iter().copied().collect();
        set.iter().all(|&x| {
            set.iter()
                .all(|&y| !self.leq(x, y) || self.above[x].intersection(&self.below[y]).all(|z| members.contains(&z)))
        })
    }

    /// Number of order ideals (down-closed subsets).
    pub fn count_order_ideals(&self) -> u64 {
        self.fold_order_ideals(0u64, |acc, _| acc + 1)
    }

    pub fn order_ideals(&self) -> Vec<FixedBitSet> {
        self.fold_order_ideals(Vec::new(), |mut acc, ideal| {
            acc.push(ideal.clone());
            acc
        })
    }

    fn fold_order_ideals<T>(&self, init: T, mut f: impl FnMut(T, &FixedBitSet) -> T) -> T {
        // Decide elements along a linear extension; an element may join only
        // if all its lower covers already did, so every leaf is an ideal.
        fn go<T>(
            p: &FinitePoset,
            k: usize,
            ideal: &mut FixedBitSet,
            acc: T,
            f: &mut impl FnMut(T, &FixedBitSet) -> T,
        ) -> T {
            if k == p.len() {
                return f(acc, ideal);
            }
            let x = p.linear[k];
            let acc = go(p, k + 1, ideal, acc, f);
            if p.lower[x].iter().all(|&y| ideal.contains(y)) {
                ideal.insert(x);
                let acc = go(p, k + 1, ideal, acc, f);
                ideal.set(x, false);
                acc
            } else {
                acc
            }
        }
        let mut ideal = FixedBitSet::with_capacity(self.len());
        go(self, 0, &mut ideal, init, &mut f)
    }

    pub fn hasse_graph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::with_capacity(self.len(), self.covers.len());
        let nodes: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for &(a, b) in &self.covers {
            g.add_edge(nodes[a], nodes[b], ());
        }
        g
    }

    /// Order isomorphism of the underlying posets (labels ignored).
    pub fn is_isomorphic(&self, other: &FinitePoset) -> bool {
        self.len() == other.len()
            && self.covers.len() == other.covers.len()
            && petgraph::algo::is_isomorphic(&self.hasse_graph(), &other.hasse_graph())
    }

    /// Checks that `map` is an order isomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &FinitePoset, map: &[usize]) -> bool {
        if map.len() != self.len() || other.len() != self.len() {
            return false;
        }
        let mut hit = vec![false; other.len()];
        for &y in map {
            if y >= other.len() || std::mem::replace(&mut hit[y], true) {
                return false;
            }
        }
        (0..self.len()).all(|x| (0..self.len()).all(|y| self.leq(x, y) == other.leq(map[x], map[y])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn boolean_square() -> FinitePoset {
        FinitePoset::from_covers(names(4), vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn order_from_covers() {
        let p = boolean_square();
        assert!(p.leq(0, 3));
        assert!(!p.leq(1, 2));
        assert_eq!(p.bottom(), Some(0));
        assert_eq!(p.top(), Some(3));
        assert_eq!(p.count_order_ideals(), 6);
    }

    #[test]
    fn rejects_cycles_and_redundant_covers() {
        let err = FinitePoset::from_covers(names(3), vec![(0, 1), (1, 2), (2, 0)]).unwrap_err();
        let PosetError::Cycle(c) = err else { panic!("expected cycle") };
        assert_eq!(c.len(), 3);
        assert_eq!(
            FinitePoset::from_covers(names(3), vec![(0, 1), (1, 2), (0, 2)]).unwrap_err(),
            PosetError::NotReduced(0, 2)
        );
    }

    #[test]
    fn transitive_reduction() {
        let p = FinitePoset::from_relations(names(3), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn convexity() {
        let chain = FinitePoset::from_covers(names(3), vec![(0, 1), (1, 2)]).unwrap();
        assert!(chain.is_order_convex(&[1, 2]));
        assert!(!chain.is_order_convex(&[0, 2]));
    }

    #[test]
    fn isomorphism_checks() {
        let p = boolean_square();
        let q = FinitePoset::from_covers(names(4), vec![(3, 1), (3, 0), (1, 2), (0, 2)]).unwrap();
        assert!(p.is_isomorphic(&q));
        assert!(p.is_isomorphism(&q, &[3, 1, 0, 2]));
        assert!(!p.is_isomorphism(&q, &[0, 1, 2, 3]));
        let chain = FinitePoset::from_covers(names(4), vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!p.is_isomorphic(&chain));
    }

    #[test]
    fn dual_keeps_labels() {
        let p = boolean_square().label_covers(|a, b| format!("{a}{b}"));
        let d = p.dual();
        assert_eq!(d.cover_label(3, 1), Some("13"));
        assert_eq!(d.bottom(), Some(3));
    }
}
