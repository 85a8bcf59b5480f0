//! Mixed graphs (directed + bidirected edges) and the purely graphical
//! computations: acyclicity, topological order, half-trek reachability,
//! longest directed path, skeleton, collider triples, induced subgraphs.
//!
//! Node labels are arbitrary strings; all computation runs on dense indices.
//! Edge sets are BTreeSets so iteration order is deterministic everywhere.

use crate::error::{Error, Result};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedGraph {
    names: Vec<String>,
    directed: BTreeSet<(usize, usize)>,
    /// stored with the smaller index first
    bidirected: BTreeSet<(usize, usize)>,
}

/// Structural classification flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphClassReport {
    pub acyclic: bool,
    pub bow_free: bool,
    pub is_bap: bool,
    pub is_dag: bool,
    pub ancestral: bool,
}

impl MixedGraph {
    pub fn new(n: usize) -> MixedGraph {
        let names = (0..n).map(|i| format!("v{i}")).collect();
        MixedGraph { names, directed: BTreeSet::new(), bidirected: BTreeSet::new() }
    }

    pub fn with_names(names: Vec<String>) -> MixedGraph {
        MixedGraph { names, directed: BTreeSet::new(), bidirected: BTreeSet::new() }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::NodeOutOfRange(v, self.n()))
        } else {
            Ok(())
        }
    }

    pub fn add_directed(&mut self, tail: usize, head: usize) -> Result<()> {
        self.check_node(tail)?;
        self.check_node(head)?;
        if tail == head {
            return Err(Error::SelfLoop(self.names[tail].clone()));
        }
        if !self.directed.insert((tail, head)) {
            return Err(Error::DuplicateEdge(format!(
                "{} -> {}",
                self.names[tail], self.names[head]
            )));
        }
        Ok(())
    }

    pub fn add_bidirected(&mut self, v: usize, w: usize) -> Result<()> {
        self.check_node(v)?;
        self.check_node(w)?;
        if v == w {
            return Err(Error::SelfLoop(self.names[v].clone()));
        }
        let key = (v.min(w), v.max(w));
        if !self.bidirected.insert(key) {
            return Err(Error::DuplicateEdge(format!("{} <-> {}", self.names[v], self.names[w])));
        }
        Ok(())
    }

    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.directed.iter().copied()
    }

    pub fn bidirected_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bidirected.iter().copied()
    }

    pub fn directed_count(&self) -> usize {
        self.directed.len()
    }

    pub fn bidirected_count(&self) -> usize {
        self.bidirected.len()
    }

    pub fn has_directed(&self, tail: usize, head: usize) -> bool {
        self.directed.contains(&(tail, head))
    }

    pub fn has_bidirected(&self, v: usize, w: usize) -> bool {
        self.bidirected.contains(&(v.min(w), v.max(w)))
    }

    /// Directed in-neighbors, ascending.
    pub fn parents(&self, v: usize) -> Vec<usize> {
        assert!(v < self.n(), "node {v} out of range");
        (0..self.n()).filter(|&w| self.has_directed(w, v)).collect()
    }

    /// Directed out-neighbors, ascending.
    pub fn children(&self, v: usize) -> Vec<usize> {
        assert!(v < self.n(), "node {v} out of range");
        (0..self.n()).filter(|&w| self.has_directed(v, w)).collect()
    }

    /// Bidirected neighbors, ascending.
    pub fn spouses(&self, v: usize) -> Vec<usize> {
        assert!(v < self.n(), "node {v} out of range");
        (0..self.n()).filter(|&w| w != v && self.has_bidirected(v, w)).collect()
    }

    pub fn adjacent(&self, v: usize, w: usize) -> bool {
        self.has_directed(v, w) || self.has_directed(w, v) || self.has_bidirected(v, w)
    }

    /// Number of distinct adjacent nodes across both edge sets.
    pub fn degree(&self, v: usize) -> usize {
        assert!(v < self.n(), "node {v} out of range");
        (0..self.n()).filter(|&w| w != v && self.adjacent(v, w)).count()
    }

    pub fn classify(&self) -> GraphClassReport {
        let acyclic = self.topological_order().is_ok();
        let bow_free = !self
            .directed
            .iter()
            .any(|&(t, h)| self.has_bidirected(t, h));
        let is_bap = acyclic && bow_free;
        let is_dag = acyclic && self.bidirected.is_empty();
        // ancestral: no node is a directed ancestor of one of its spouses
        let ancestral = acyclic && {
            let reach = self.descendant_closure();
            !self
                .bidirected
                .iter()
                .any(|&(v, w)| reach[v].contains(&w) || reach[w].contains(&v))
        };
        GraphClassReport { acyclic, bow_free, is_bap, is_dag, ancestral }
    }

    pub fn is_bap(&self) -> bool {
        self.classify().is_bap
    }

    /// For each v, the set of nodes reachable by a directed path of length >= 1.
    fn descendant_closure(&self) -> Vec<BTreeSet<usize>> {
        let n = self.n();
        let mut reach: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (v, set) in reach.iter_mut().enumerate() {
            let mut stack = self.children(v);
            while let Some(w) = stack.pop() {
                if set.insert(w) {
                    stack.extend(self.children(w));
                }
            }
        }
        reach
    }

    /// Kahn's algorithm with index-order tie-breaking.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for &(_, h) in &self.directed {
            indeg[h] += 1;
        }
        let mut ready: BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for w in self.children(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(Error::CyclicGraph)
        }
    }

    /// Nodes reachable from v by a half-trek: a directed path of length >= 1
    /// from v, or a bidirected step v <-> x followed by a directed path of
    /// length >= 0 from x. BFS, O(n^2).
    pub fn half_trek_reachable(&self, v: usize) -> BTreeSet<usize> {
        assert!(v < self.n(), "node {v} out of range");
        let mut frontier: BTreeSet<usize> = self.children(v).into_iter().collect();
        frontier.extend(self.spouses(v));
        let mut seen = frontier.clone();
        let mut stack: Vec<usize> = frontier.into_iter().collect();
        while let Some(w) = stack.pop() {
            for c in self.children(w) {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        seen
    }

    /// Maximum edge count over all directed paths; 0 if no directed edges.
    pub fn longest_directed_path(&self) -> Result<usize> {
        let order = self.topological_order()?;
        let mut depth = vec![0usize; self.n()];
        for &v in &order {
            for w in self.children(v) {
                depth[w] = depth[w].max(depth[v] + 1);
            }
        }
        Ok(depth.into_iter().max().unwrap_or(0))
    }

    /// Unordered adjacent pairs, smaller index first.
    pub fn skeleton(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for &(t, h) in &self.directed {
            out.insert((t.min(h), t.max(h)));
        }
        out.extend(self.bidirected.iter().copied());
        out
    }

    /// Unordered nonadjacent pairs, smaller index first.
    pub fn nonadjacent_pairs(&self) -> Vec<(usize, usize)> {
        let skel = self.skeleton();
        let mut out = Vec::new();
        for v in 0..self.n() {
            for w in v + 1..self.n() {
                if !skel.contains(&(v, w)) {
                    out.push((v, w));
                }
            }
        }
        out
    }

    fn arrowhead_at(&self, from: usize, at: usize) -> bool {
        self.has_directed(from, at) || self.has_bidirected(from, at)
    }

    /// Triples (u, v, w), u < w, with both edges carrying an arrowhead at v.
    pub fn collider_triples(&self) -> BTreeSet<(usize, usize, usize)> {
        let n = self.n();
        let mut out = BTreeSet::new();
        for v in 0..n {
            for u in 0..n {
                if u == v || !self.arrowhead_at(u, v) {
                    continue;
                }
                for w in u + 1..n {
                    if w == v || !self.arrowhead_at(w, v) {
                        continue;
                    }
                    out.insert((u, v, w));
                }
            }
        }
        out
    }

    /// Collider triples whose endpoints are nonadjacent.
    pub fn v_structures(&self) -> BTreeSet<(usize, usize, usize)> {
        self.collider_triples()
            .into_iter()
            .filter(|&(u, _, w)| !self.adjacent(u, w))
            .collect()
    }

    /// Subgraph on the given nodes with indices compacted; names preserved.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<MixedGraph> {
        for &v in nodes {
            self.check_node(v)?;
        }
        let names = nodes.iter().map(|&v| self.names[v].clone()).collect();
        let mut g = MixedGraph::with_names(names);
        let pos = |v: usize| nodes.iter().position(|&x| x == v);
        for &(t, h) in &self.directed {
            if let (Some(ti), Some(hi)) = (pos(t), pos(h)) {
                g.add_directed(ti, hi)?;
            }
        }
        for &(v, w) in &self.bidirected {
            if let (Some(vi), Some(wi)) = (pos(v), pos(w)) {
                g.add_bidirected(vi, wi)?;
            }
        }
        Ok(g)
    }

    /// Reorders nodes so that names appear in the order given; used to align
    /// two graphs that share a node-name set.
    pub fn permuted_to_names(&self, names: &[String]) -> Result<MixedGraph> {
        if names.len() != self.n() {
            return Err(Error::NodeCountMismatch(self.n(), names.len()));
        }
        let mut perm = Vec::with_capacity(self.n());
        for name in names {
            perm.push(
                self.node_index(name)
                    .ok_or_else(|| Error::NameMismatch(name.clone()))?,
            );
        }
        let mut g = MixedGraph::with_names(names.to_vec());
        let inv = {
            let mut inv = vec![0usize; self.n()];
            for (new, &old) in perm.iter().enumerate() {
                inv[old] = new;
            }
            inv
        };
        for &(t, h) in &self.directed {
            g.add_directed(inv[t], inv[h])?;
        }
        for &(v, w) in &self.bidirected {
            g.add_bidirected(inv[v], inv[w])?;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Figure-style 5-node BAP: a->b->c->d, a<->c, a<->d, isolated e.
    pub(crate) fn chain_with_confounders() -> MixedGraph {
        let mut g = MixedGraph::with_names(
            ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect(),
        );
        g.add_directed(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();
        g.add_directed(2, 3).unwrap();
        g.add_bidirected(0, 2).unwrap();
        g.add_bidirected(0, 3).unwrap();
        g
    }

    /// 5-node ADMG with two bows: a->b, a->c, b->c, c->d, c<->d, c->e, c<->e, d->e.
    fn bowed_admg() -> MixedGraph {
        let mut g = MixedGraph::with_names(
            ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect(),
        );
        g.add_directed(0, 1).unwrap();
        g.add_directed(0, 2).unwrap();
        g.add_directed(1, 2).unwrap();
        g.add_directed(2, 3).unwrap();
        g.add_bidirected(2, 3).unwrap();
        g.add_directed(2, 4).unwrap();
        g.add_bidirected(2, 4).unwrap();
        g.add_directed(3, 4).unwrap();
        g
    }

    /// 5-node BAP: a->b, a->e, c->b, c->e, d->b, d->e, b<->e, c<->d.
    pub(crate) fn double_fan() -> MixedGraph {
        let mut g = MixedGraph::with_names(
            ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect(),
        );
        g.add_directed(0, 1).unwrap();
        g.add_directed(0, 4).unwrap();
        g.add_directed(2, 1).unwrap();
        g.add_directed(2, 4).unwrap();
        g.add_directed(3, 1).unwrap();
        g.add_directed(3, 4).unwrap();
        g.add_bidirected(1, 4).unwrap();
        g.add_bidirected(2, 3).unwrap();
        g
    }

    #[test]
    fn classification() {
        assert!(chain_with_confounders().classify().is_bap);
        assert!(!bowed_admg().classify().bow_free);
        let empty = MixedGraph::new(4).classify();
        assert!(empty.acyclic && empty.bow_free && empty.is_bap && empty.is_dag && empty.ancestral);
        // ancestral check: a -> b with a <-> b's descendant
        let mut g = MixedGraph::new(3);
        g.add_directed(0, 1).unwrap();
        g.add_bidirected(0, 1).unwrap();
        assert!(!g.classify().ancestral);
        assert!(!chain_with_confounders().classify().ancestral); // a <-> c, a ancestor of c
    }

    #[test]
    fn topo_order() {
        let mut g = MixedGraph::new(3);
        g.add_directed(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();
        assert_eq!(g.topological_order().unwrap(), vec![0, 1, 2]);
        let mut cyc = MixedGraph::new(2);
        cyc.add_directed(0, 1).unwrap();
        cyc.add_directed(1, 0).unwrap();
        assert_eq!(cyc.topological_order(), Err(Error::CyclicGraph));
        let mut bi = MixedGraph::new(3);
        bi.add_bidirected(0, 2).unwrap();
        assert_eq!(bi.topological_order().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn neighborhood_queries() {
        let mut g = MixedGraph::new(2);
        g.add_directed(0, 1).unwrap();
        g.add_bidirected(0, 1).unwrap();
        assert_eq!(g.parents(1), vec![0]);
        assert_eq!(g.spouses(1), vec![0]);
        assert_eq!(g.degree(1), 1); // distinct adjacent nodes
        let iso = MixedGraph::new(2);
        assert!(iso.parents(0).is_empty() && iso.spouses(0).is_empty());
        assert_eq!(iso.degree(0), 0);
        assert_eq!(double_fan().parents(1), vec![0, 2, 3]);
    }

    #[test]
    fn half_trek_sets() {
        let mut chain = MixedGraph::new(3);
        chain.add_directed(0, 1).unwrap();
        chain.add_directed(1, 2).unwrap();
        assert_eq!(chain.half_trek_reachable(0), BTreeSet::from([1, 2]));

        let mut g = MixedGraph::new(3);
        g.add_bidirected(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();
        assert_eq!(g.half_trek_reachable(0), BTreeSet::from([1, 2]));

        // 1<->3 with 1->2 (zero-indexed 0<->2, 0->1): 1 in htr(2)
        let mut e = MixedGraph::new(3);
        e.add_directed(0, 1).unwrap();
        e.add_bidirected(0, 2).unwrap();
        assert!(e.half_trek_reachable(2).contains(&1));
    }

    /// Brute-force half-trek reachability by explicit path enumeration.
    fn htr_brute(g: &MixedGraph, v: usize) -> BTreeSet<usize> {
        fn directed_reach(g: &MixedGraph, from: usize, out: &mut BTreeSet<usize>) {
            for c in g.children(from) {
                if out.insert(c) {
                    directed_reach(g, c, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        directed_reach(g, v, &mut out);
        for x in g.spouses(v) {
            out.insert(x);
            directed_reach(g, x, &mut out);
        }
        out
    }

    #[test]
    fn half_trek_matches_brute_force() {
        // all mixed graphs on 3 nodes plus a random batch on 5
        for code in 0..4u32.pow(3) {
            let mut g = MixedGraph::new(3);
            let pairs = [(0, 1), (0, 2), (1, 2)];
            let mut c = code;
            for &(a, b) in &pairs {
                match c % 4 {
                    1 => g.add_directed(a, b).unwrap(),
                    2 => g.add_directed(b, a).unwrap(),
                    3 => g.add_bidirected(a, b).unwrap(),
                    _ => {}
                }
                c /= 4;
            }
            for v in 0..3 {
                assert_eq!(g.half_trek_reachable(v), htr_brute(&g, v));
            }
        }
    }

    #[test]
    fn longest_path() {
        let mut path = MixedGraph::new(4);
        for i in 0..3 {
            path.add_directed(i, i + 1).unwrap();
        }
        assert_eq!(path.longest_directed_path().unwrap(), 3);
        let mut bi = MixedGraph::new(3);
        bi.add_bidirected(0, 1).unwrap();
        assert_eq!(bi.longest_directed_path().unwrap(), 0);
        assert_eq!(chain_with_confounders().longest_directed_path().unwrap(), 3);
    }

    #[test]
    fn colliders_and_v_structures() {
        let mut v = MixedGraph::new(3);
        v.add_directed(0, 2).unwrap();
        v.add_directed(1, 2).unwrap();
        assert_eq!(v.v_structures(), BTreeSet::from([(0, 2, 1)]));
        assert_eq!(v.collider_triples(), BTreeSet::from([(0, 2, 1)]));

        let mut t = MixedGraph::new(3);
        t.add_bidirected(0, 2).unwrap();
        t.add_bidirected(1, 2).unwrap();
        t.add_directed(0, 1).unwrap();
        // colliders at 2 (both bidirected) and at 1 (0 -> 1 plus 2 <-> 1),
        // all shielded
        assert_eq!(t.collider_triples(), BTreeSet::from([(0, 1, 2), (0, 2, 1)]));
        assert!(t.v_structures().is_empty());

        let mut chain = MixedGraph::new(3);
        chain.add_directed(0, 1).unwrap();
        chain.add_directed(1, 2).unwrap();
        assert!(chain.collider_triples().is_empty());
    }

    #[test]
    fn induced_subgraphs() {
        let g = chain_with_confounders();
        let whole = g.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(whole, g);
        let empty = g.induced_subgraph(&[]).unwrap();
        assert_eq!(empty.n(), 0);
        let abc = g.induced_subgraph(&[0, 1, 2]).unwrap();
        assert!(abc.has_directed(0, 1) && abc.has_directed(1, 2) && abc.has_bidirected(0, 2));
        assert_eq!(abc.directed_count(), 2);
        assert_eq!(abc.bidirected_count(), 1);
        // skeleton restriction property
        let skel_sub = abc.skeleton();
        let expect: BTreeSet<(usize, usize)> = g
            .skeleton()
            .into_iter()
            .filter(|&(a, b)| a < 3 && b < 3)
            .collect();
        assert_eq!(skel_sub, expect);
    }

    #[test]
    fn v_structures_subset_of_colliders() {
        for g in [chain_with_confounders(), bowed_admg(), double_fan()] {
            assert!(g.v_structures().is_subset(&g.collider_triples()));
        }
    }
}
