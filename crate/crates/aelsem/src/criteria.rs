//! Structural necessary and sufficient conditions for algebraic equivalence
//! of BAPs, and the Verma-Pearl Markov-equivalence check for DAGs.
//!
//! The two conditions leave a gap: same skeleton and v-structures is
//! necessary, same skeleton and collider triples is sufficient. Pairs in
//! between are Undetermined and only the randomized decider can speak.

use crate::error::{Error, Result};
use crate::graph::MixedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStatus {
    DefinitelyEquivalent,
    DefinitelyNotEquivalent,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub status: PairStatus,
    /// skeleton-mismatch | v-structure-mismatch | same-collider-triples | gap
    pub reason: &'static str,
}

fn require_bap(g: &MixedGraph) -> Result<()> {
    let r = g.classify();
    if r.is_bap {
        Ok(())
    } else if r.acyclic {
        Err(Error::NotBap("graph has a bow"))
    } else {
        Err(Error::NotBap("graph has a directed cycle"))
    }
}

pub fn classify_pair(g: &MixedGraph, gp: &MixedGraph) -> Result<PairClassification> {
    require_bap(g)?;
    require_bap(gp)?;
    if g.n() != gp.n() {
        return Err(Error::NodeCountMismatch(g.n(), gp.n()));
    }
    if g.skeleton() != gp.skeleton() {
        return Ok(PairClassification {
            status: PairStatus::DefinitelyNotEquivalent,
            reason: "skeleton-mismatch",
        });
    }
    if g.v_structures() != gp.v_structures() {
        return Ok(PairClassification {
            status: PairStatus::DefinitelyNotEquivalent,
            reason: "v-structure-mismatch",
        });
    }
    if g.collider_triples() == gp.collider_triples() {
        return Ok(PairClassification {
            status: PairStatus::DefinitelyEquivalent,
            reason: "same-collider-triples",
        });
    }
    Ok(PairClassification { status: PairStatus::Undetermined, reason: "gap" })
}

/// Verma-Pearl: two DAGs are Markov equivalent iff they share skeleton and
/// v-structures.
pub fn dag_markov_equivalent(g: &MixedGraph, gp: &MixedGraph) -> Result<bool> {
    for x in [g, gp] {
        if !x.classify().is_dag {
            return Err(Error::NotDag);
        }
    }
    if g.n() != gp.n() {
        return Err(Error::NodeCountMismatch(g.n(), gp.n()));
    }
    Ok(g.skeleton() == gp.skeleton() && g.v_structures() == gp.v_structures())
}
