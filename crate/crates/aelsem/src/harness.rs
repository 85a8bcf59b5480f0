//! Enumeration of small graph families, pairwise equivalence-class
//! partitioning, the extremal worst-case graph family, and the timing /
//! false-positive experiment driver.

use crate::criteria::{classify_pair, PairStatus};
use crate::decision::{
    decide_equivalence_stream, decide_inclusion_stream, decide_with_repeats, error_bound_generic,
    Bound,
};
use crate::error::{Error, Result};
use crate::field::{derive_stream, PrimeModulus};
use crate::graph::MixedGraph;
use rand::RngCore;
use std::collections::BTreeMap;
use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFamily {
    /// Every unordered pair carries one of {none, ->, <-, <->}; acyclic only.
    AllBaps,
    /// Every unordered pair carries one of {none, ->, <-}; acyclic only.
    AllDags,
    /// Every unordered pair carries one of {->, <-, <->}; acyclic only.
    CompleteBaps,
}

#[derive(Debug, Clone, Copy)]
pub struct GraphFamilySpec {
    pub family: GraphFamily,
    pub n: usize,
    /// Permits enumerations whose raw candidate count exceeds the safety cap.
    pub allow_large: bool,
}

/// Raw candidate count cap before `allow_large` is required.
const ENUMERATION_CAP: u128 = 50_000_000;

/// Deterministic enumeration: a base-k counter over the ordered list of node
/// pairs, keeping acyclic results. Identical spec, identical output order.
pub fn enumerate(spec: &GraphFamilySpec) -> Result<Vec<MixedGraph>> {
    let n = spec.n;
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|v| (v + 1..n).map(move |w| (v, w))).collect();
    let base: u128 = match spec.family {
        GraphFamily::AllBaps => 4,
        GraphFamily::AllDags | GraphFamily::CompleteBaps => 3,
    };
    let raw = base.checked_pow(pairs.len() as u32).ok_or_else(|| {
        Error::TooLarge(format!("{} pair slots overflow the candidate count", pairs.len()))
    })?;
    if raw > ENUMERATION_CAP && !spec.allow_large {
        return Err(Error::TooLarge(format!(
            "{raw} raw candidates exceeds the cap of {ENUMERATION_CAP}; set allow_large to proceed"
        )));
    }
    let mut out = Vec::new();
    for code in 0..raw {
        let mut g = MixedGraph::new(n);
        let mut c = code;
        let mut ok = true;
        for &(v, w) in &pairs {
            let digit = (c % base) as u8;
            c /= base;
            let choice = match spec.family {
                GraphFamily::AllBaps | GraphFamily::AllDags => digit,
                GraphFamily::CompleteBaps => digit + 1,
            };
            match choice {
                0 => {}
                1 => g.add_directed(v, w)?,
                2 => g.add_directed(w, v)?,
                3 => {
                    if matches!(spec.family, GraphFamily::AllDags) {
                        ok = false;
                        break;
                    }
                    g.add_bidirected(v, w)?;
                }
                _ => unreachable!(),
            }
        }
        if ok && g.topological_order().is_ok() {
            out.push(g);
        }
    }
    Ok(out)
}

/// Worst-case family for the inclusion bound: node 0 feeds node 1; each
/// internal node v has parents {1..v-1} and a bidirected tie to 0; the last
/// node is nonadjacent to s, bidirected to 0 (or to 1 when s = 0), and has
/// every other earlier node as a parent. Returns the graph and its unique
/// nonadjacent pair (s, n-1).
pub fn build_extremal_pair(n: usize, s: usize) -> Result<(MixedGraph, (usize, usize))> {
    if n < 4 {
        return Err(Error::NTooSmall(n));
    }
    if s >= n - 1 {
        return Err(Error::InvalidExtremalNode(s, n));
    }
    let mut g = MixedGraph::new(n);
    g.add_directed(0, 1)?;
    for v in 2..n - 1 {
        g.add_bidirected(0, v)?;
        for w in 1..v {
            g.add_directed(w, v)?;
        }
    }
    let t = n - 1;
    let partner = if s == 0 { 1 } else { 0 };
    g.add_bidirected(partner, t)?;
    for w in 0..t {
        if w != s && w != partner {
            g.add_directed(w, t)?;
        }
    }
    Ok((g, (s, t)))
}

#[derive(Debug, Clone)]
pub struct EquivalenceClassReport {
    /// Index sets into the input sequence; a partition.
    pub classes: Vec<Vec<usize>>,
    pub repeats_used: usize,
    pub prime: u128,
    pub seed: u64,
    /// Pairs merged by the randomized decider where the structural criteria
    /// could not already decide.
    pub undetermined_pairs: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A fresh seed deterministically keyed on (master, index), independent of
/// scheduling order.
fn derive_seed(master: u64, index: u64) -> u64 {
    derive_stream(master, index).next_u64()
}

/// Partitions BAPs into equivalence classes: skeleton buckets are certain,
/// pairs within a bucket go to the randomized decider with k repeats, and a
/// final consistency pass re-checks one spanning pair per merged member.
pub fn partition_classes(
    graphs: &[MixedGraph],
    p: PrimeModulus,
    k: usize,
    master_seed: u64,
) -> Result<EquivalenceClassReport> {
    let len = graphs.len();
    for g in graphs {
        if !g.is_bap() {
            return Err(Error::NotBap("partitioning requires BAP inputs"));
        }
        if g.n() != graphs[0].n() {
            return Err(Error::NodeCountMismatch(graphs[0].n(), g.n()));
        }
    }
    let mut buckets: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
    for (i, g) in graphs.iter().enumerate() {
        buckets.entry(g.skeleton().into_iter().collect()).or_default().push(i);
    }
    let mut uf = UnionFind::new(len);
    let mut undetermined_pairs = 0usize;
    for bucket in buckets.values() {
        for (ai, &i) in bucket.iter().enumerate() {
            for &j in &bucket[ai + 1..] {
                if uf.find(i) == uf.find(j) {
                    continue;
                }
                let pair_seed = derive_seed(master_seed, (i * len + j) as u64);
                let d = decide_with_repeats(k, pair_seed, |rng| {
                    decide_equivalence_stream(&graphs[i], &graphs[j], p, rng, pair_seed)
                })?;
                if d.verdict {
                    uf.union(i, j);
                    if classify_pair(&graphs[i], &graphs[j])?.status == PairStatus::Undetermined {
                        undetermined_pairs += 1;
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..len {
        classes.entry(uf.find(i)).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();

    // consistency pass: every member must still test equivalent to its
    // class representative under fresh randomness
    let spanning: Vec<(usize, usize)> = classes
        .iter()
        .flat_map(|c| c[1..].iter().map(move |&m| (c[0], m)))
        .collect();
    let check = |&(rep, member): &(usize, usize)| -> Result<()> {
        let pair_seed = derive_seed(master_seed, (len * len + rep * len + member) as u64);
        let d = decide_with_repeats(k, pair_seed, |rng| {
            decide_equivalence_stream(&graphs[rep], &graphs[member], p, rng, pair_seed)
        })?;
        if d.verdict {
            Ok(())
        } else {
            Err(Error::InconsistentPartition(rep, member))
        }
    };
    #[cfg(feature = "parallel")]
    spanning.par_iter().try_for_each(check)?;
    #[cfg(not(feature = "parallel"))]
    spanning.iter().try_for_each(check)?;

    Ok(EquivalenceClassReport {
        classes,
        repeats_used: k,
        prime: p.value(),
        seed: master_seed,
        undetermined_pairs,
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub n: usize,
    pub prime: u128,
    pub trials: usize,
    pub mean_time_ms: f64,
    pub false_positive_count: usize,
    pub theoretical_bound: Bound,
}

/// Runs the inclusion decider on ordered pairs of distinct extremal-family
/// graphs (guaranteed non-inclusion instances: their skeletons differ) until
/// at least `trials` verdicts are collected; counts true verdicts as false
/// positives and reports the graph-independent bound.
pub fn table1_experiment(
    n: usize,
    p: PrimeModulus,
    trials: usize,
    master_seed: u64,
) -> Result<ExperimentReport> {
    let family: Vec<MixedGraph> =
        (0..n - 1).map(|s| Ok(build_extremal_pair(n, s)?.0)).collect::<Result<_>>()?;
    let mut instances: Vec<(usize, usize)> = Vec::new();
    for i in 0..family.len() {
        for j in 0..family.len() {
            if i != j {
                instances.push((i, j));
            }
        }
    }
    // warm-up, untimed
    {
        let (i, j) = instances[0];
        let mut rng = derive_stream(master_seed, u64::MAX);
        decide_inclusion_stream(&family[i], &family[j], p, &mut rng, master_seed)?;
    }
    let tasks: Vec<u64> = (0..trials as u64).collect();
    let run = |&t: &u64| -> Result<(f64, bool)> {
        let (i, j) = instances[t as usize % instances.len()];
        let seed = derive_seed(master_seed, t);
        let mut rng = derive_stream(master_seed, t);
        let start = Instant::now();
        let d = decide_inclusion_stream(&family[i], &family[j], p, &mut rng, seed)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        Ok((ms, d.verdict))
    };
    #[cfg(feature = "parallel")]
    let results: Vec<(f64, bool)> = tasks.par_iter().map(run).collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(f64, bool)> = tasks.iter().map(run).collect::<Result<_>>()?;

    let total_ms: f64 = results.iter().map(|(ms, _)| ms).sum();
    let false_positive_count = results.iter().filter(|(_, verdict)| *verdict).count();
    Ok(ExperimentReport {
        n,
        prime: p.value(),
        trials,
        mean_time_ms: total_ms / trials as f64,
        false_positive_count,
        theoretical_bound: error_bound_generic(n, p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{a_values, error_bound_inclusion};
    use num_bigint::BigUint;

    #[test]
    fn enumeration_counts() {
        let all2 = enumerate(&GraphFamilySpec { family: GraphFamily::AllBaps, n: 2, allow_large: false })
            .unwrap();
        assert_eq!(all2.len(), 4);
        let dags3 = enumerate(&GraphFamilySpec { family: GraphFamily::AllDags, n: 3, allow_large: false })
            .unwrap();
        assert_eq!(dags3.len(), 25);
        let dags4 = enumerate(&GraphFamilySpec { family: GraphFamily::AllDags, n: 4, allow_large: false })
            .unwrap();
        assert_eq!(dags4.len(), 543);
        let complete4 = enumerate(&GraphFamilySpec {
            family: GraphFamily::CompleteBaps,
            n: 4,
            allow_large: false,
        })
        .unwrap();
        assert_eq!(complete4.len(), 543);
        assert!(complete4.iter().all(|g| g.is_bap() && g.nonadjacent_pairs().is_empty()));
    }

    #[test]
    fn enumeration_is_deterministic_and_guarded() {
        let spec = GraphFamilySpec { family: GraphFamily::AllBaps, n: 3, allow_large: false };
        assert_eq!(enumerate(&spec).unwrap(), enumerate(&spec).unwrap());
        assert_eq!(enumerate(&spec).unwrap().len(), 62);
        let big = GraphFamilySpec { family: GraphFamily::AllBaps, n: 7, allow_large: false };
        assert!(matches!(enumerate(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn extremal_family_shape() {
        let (g, (s, t)) = build_extremal_pair(5, 1).unwrap();
        assert_eq!((s, t), (1, 4));
        assert!(g.is_bap());
        assert_eq!(g.nonadjacent_pairs(), vec![(1, 4)]);
        assert_eq!(g.longest_directed_path().unwrap(), 4);
        assert!(g.has_bidirected(0, 4));
        // degenerate-s variants still build
        for s in 0..4 {
            let (g, pair) = build_extremal_pair(5, s).unwrap();
            assert!(g.is_bap());
            assert_eq!(g.nonadjacent_pairs(), vec![pair]);
        }
        assert!(build_extremal_pair(3, 0).is_err());
        assert!(build_extremal_pair(5, 4).is_err());
    }

    #[test]
    fn extremal_a_values_closed_form() {
        let (g, _) = build_extremal_pair(8, 1).unwrap();
        let a = a_values(&g).unwrap();
        assert_eq!(a.values[0], BigUint::from(0u32));
        assert_eq!(a.values[1], BigUint::from(1u32));
        // internal nodes: a_v = 3 * 2^(v-2) - 1
        for v in 2..7 {
            assert_eq!(a.values[v], BigUint::from(3u32 * (1u32 << (v - 2)) - 1));
        }
    }

    #[test]
    fn extremal_bound_matches_generic() {
        let p = PrimeModulus::m31();
        for n in 4..=12 {
            for s in 1..=n - 3 {
                let (g, _) = build_extremal_pair(n, s).unwrap();
                let b = error_bound_inclusion(&g, &g, p).unwrap();
                let generic = error_bound_generic(n, p).unwrap();
                assert!(b.same_value(&generic), "mismatch at n={n}, s={s}");
            }
        }
    }

    #[test]
    fn distinct_extremal_graphs_have_distinct_skeletons() {
        let n = 6;
        let family: Vec<MixedGraph> =
            (0..n - 1).map(|s| build_extremal_pair(n, s).unwrap().0).collect();
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                assert_ne!(family[i].skeleton(), family[j].skeleton());
            }
        }
    }

    #[test]
    fn partition_separates_skeleton_mismatches_and_merges_duplicates() {
        let mut a = MixedGraph::new(3);
        a.add_directed(0, 1).unwrap();
        let mut b = MixedGraph::new(3);
        b.add_directed(1, 2).unwrap();
        let report =
            partition_classes(&[a.clone(), b, a], PrimeModulus::m31(), 2, 11).unwrap();
        assert_eq!(report.classes, vec![vec![0, 2], vec![1]]);
        assert_eq!(report.undetermined_pairs, 0);
    }

    #[test]
    fn partition_agrees_with_structural_criteria_at_n3() {
        let graphs = enumerate(&GraphFamilySpec {
            family: GraphFamily::AllBaps,
            n: 3,
            allow_large: false,
        })
        .unwrap();
        let report = partition_classes(&graphs, PrimeModulus::m31(), 2, 5).unwrap();
        // partition must refine/respect the structural verdicts
        let mut in_class = vec![0usize; graphs.len()];
        for (c, members) in report.classes.iter().enumerate() {
            for &m in members {
                in_class[m] = c;
            }
        }
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                match classify_pair(&graphs[i], &graphs[j]).unwrap().status {
                    PairStatus::DefinitelyEquivalent => assert_eq!(in_class[i], in_class[j]),
                    PairStatus::DefinitelyNotEquivalent => assert_ne!(in_class[i], in_class[j]),
                    PairStatus::Undetermined => {}
                }
            }
        }
        // classes are skeleton-sound
        for members in &report.classes {
            let skel = graphs[members[0]].skeleton();
            assert!(members.iter().all(|&m| graphs[m].skeleton() == skel));
        }
        // reproducible
        let again = partition_classes(&graphs, PrimeModulus::m31(), 2, 5).unwrap();
        assert_eq!(report.classes, again.classes);
    }

    #[test]
    fn experiment_smoke() {
        let report = table1_experiment(5, PrimeModulus::m31(), 24, 3).unwrap();
        assert_eq!(report.false_positive_count, 0);
        assert_eq!(report.theoretical_bound.decimal_string(), "4.61e-8");
        assert!(report.mean_time_ms >= 0.0);
    }
}
