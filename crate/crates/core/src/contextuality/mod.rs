//! Contextuality analysis: which magnetization projectors commute, which
//! triples form contexts, and whether context marginals admit a joint
//! distribution.

mod feasibility;
mod graph;
mod scan;
mod scenario;
mod simplex;

pub use feasibility::{
    evaluate_functional, joint_feasibility, joint_feasibility_with_limit, joint_residual, product_residual, Certificate,
    FeasibilityResult, JointAtom, Method,
};
pub use graph::{compatibility_graph, compatibility_graph_dense, find_contexts, CompatibilityGraph, ContextTriple, ObservableId};
pub use scan::{commutator_norms, theorem_scan, verify_theorem, TheoremReport, TheoremRow, ENDPOINT_TOLERANCE};
pub use scenario::{ContextScenario, Observable, Probability, DEFAULT_ASSIGNMENT_LIMIT, NORMALIZATION_TOLERANCE};
