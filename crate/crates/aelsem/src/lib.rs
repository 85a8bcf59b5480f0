//! Randomized decision engine for linear structural equation models on
//! mixed graphs.
//!
//! Supports three decisions over prime finite fields, each with an exact
//! one-sided error bound: whether a graph imposes a given algebraic
//! constraint on its covariance matrices, whether one graph's algebraic
//! model is contained in another's, and whether two bow-free acyclic path
//! diagrams are algebraically equivalent. A `false` verdict is always
//! certain; a `true` verdict is wrong with probability at most the
//! reported bound.

pub mod constraint;
pub mod criteria;
pub mod decision;
pub mod error;
pub mod field;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod lsem;
pub mod textio;

pub use constraint::{
    build_correlation, build_minor, build_partial_correlation, Constraint, PatternCell,
    PatternMatrixConstraint, PolynomialConstraint,
};
pub use criteria::{classify_pair, dag_markov_equivalent, PairClassification, PairStatus};
pub use decision::{
    a_values, decide_constraint, decide_equivalence, decide_inclusion, decide_with_repeats,
    error_bound_constraint, error_bound_generic, error_bound_inclusion, AVector, Bound, Decision,
    Diagnostics,
};
pub use error::{Error, Result};
pub use field::{
    derive_stream, is_prime, stream_from_seed, FieldElement, Preset, PrimeModulus, RandomStream,
};
pub use graph::{GraphClassReport, MixedGraph};
pub use harness::{
    build_extremal_pair, enumerate, partition_classes, table1_experiment, EquivalenceClassReport,
    ExperimentReport, GraphFamily, GraphFamilySpec,
};
pub use linalg::{all_column_deleted_minors, Matrix};
pub use lsem::{phi, sample_params, sigma_via_trek_rule, Parameters};
pub use textio::{parse_constraint, parse_graph, serialize_graph};
