//! Compatibility graphs over magnetization projectors and context detection.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::scan::commutator_norms;
use crate::collective::{commutator, projector_tensor_sum, Direction, EnsembleOperator, EnsembleSpec};
use crate::error::{Error, Result};
use crate::su2::HalfInt;

/// The projector `P_outcome(direction)`; `direction_index` refers to the
/// caller's direction list.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObservableId {
    pub direction_index: usize,
    #[serde(skip)]
    pub direction: Direction,
    pub outcome: HalfInt,
}

impl ObservableId {
    /// `d<index>_m<label>`, e.g. `d2_m-1/2`.
    pub fn label(&self) -> String {
        format!("d{}_m{}", self.direction_index, self.outcome)
    }
}

/// Simple undirected graph; an edge joins two commuting projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityGraph {
    nodes: Vec<ObservableId>,
    /// `(a, b)` with `a < b`.
    edges: BTreeSet<(usize, usize)>,
    tolerance: f64,
}

impl CompatibilityGraph {
    pub fn nodes(&self) -> &[ObservableId] {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Edges joining projectors of different directions.
    pub fn cross_direction_edges(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.edges.iter().filter(|(a, b)| self.nodes[*a].direction_index != self.nodes[*b].direction_index)
    }

    /// Plain undirected DOT rendering with quoted `d<index>_m<label>` node ids.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph compatibility {\n");
        for node in &self.nodes {
            let _ = writeln!(out, "  \"{}\";", node.label());
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", self.nodes[*a].label(), self.nodes[*b].label());
        }
        out.push_str("}\n");
        out
    }
}

fn nodes_for(spec: &EnsembleSpec, directions: &[Direction]) -> Result<Vec<ObservableId>> {
    if directions.is_empty() {
        return Err(Error::Domain("at least one direction is required".into()));
    }
    Ok(directions
        .iter()
        .enumerate()
        .flat_map(|(direction_index, direction)| {
            spec.outcomes().into_iter().map(move |outcome| ObservableId { direction_index, direction: *direction, outcome })
        })
        .collect())
}

/// Pairs of direction indices `(a, b)` with `a < b`, in lexicographic order.
fn direction_pairs(count: usize) -> Vec<(usize, usize)> {
    (0..count).flat_map(|a| (a + 1..count).map(move |b| (a, b))).collect()
}

/// Direction pair and its `[m][m']` commutator norms.
type CrossBlock = ((usize, usize), Vec<Vec<f64>>);

fn assemble(
    nodes: Vec<ObservableId>,
    directions: usize,
    per_direction: usize,
    cross: Vec<CrossBlock>,
    tolerance: f64,
) -> CompatibilityGraph {
    let mut edges = BTreeSet::new();
    // projectors along one direction share an eigenbasis
    for d in 0..directions {
        let base = d * per_direction;
        for i in 0..per_direction {
            for k in i + 1..per_direction {
                edges.insert((base + i, base + k));
            }
        }
    }
    for ((a, b), norms) in cross {
        for (i, row) in norms.iter().enumerate() {
            for (k, norm) in row.iter().enumerate() {
                if *norm <= tolerance {
                    edges.insert((a * per_direction + i, b * per_direction + k));
                }
            }
        }
    }
    CompatibilityGraph { nodes, edges, tolerance }
}

/// Builds the graph from block-representation commutators, reducing each
/// direction pair to its relative angle.
pub fn compatibility_graph(spec: &EnsembleSpec, directions: &[Direction], tolerance: f64) -> Result<CompatibilityGraph> {
    let nodes = nodes_for(spec, directions)?;
    let cross = direction_pairs(directions.len())
        .into_par_iter()
        .map(|(a, b)| Ok(((a, b), commutator_norms(spec, directions[a].angle_to(&directions[b]))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(nodes, directions.len(), spec.outcomes().len(), cross, tolerance))
}

/// Same graph from tensor-product projectors built along the actual
/// directions, without the angle reduction. Limited by the dense dimension.
pub fn compatibility_graph_dense(
    spec: &EnsembleSpec,
    directions: &[Direction],
    tolerance: f64,
) -> Result<CompatibilityGraph> {
    let nodes = nodes_for(spec, directions)?;
    spec.dense_dimension()?;
    let outcomes = spec.outcomes();
    let projectors = directions
        .iter()
        .map(|d| outcomes.iter().map(|m| projector_tensor_sum(spec, d, *m)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let cross = direction_pairs(directions.len())
        .into_par_iter()
        .map(|(a, b)| {
            let norms = projectors[a]
                .iter()
                .map(|p| projectors[b].iter().map(|q| Ok(commutator(p, q)?.frobenius_norm())).collect())
                .collect::<Result<Vec<Vec<f64>>>>()?;
            Ok(((a, b), norms))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(nodes, directions.len(), outcomes.len(), cross, tolerance))
}

/// A context triple: `a` commutes with `b` and with `c`, but `b` and `c` do
/// not commute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ContextTriple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

/// All triples `(a; b, c)` with `b < c`, edges `a-b`, `a-c` and no edge
/// `b-c`, in lexicographic order.
pub fn find_contexts(graph: &CompatibilityGraph) -> Vec<ContextTriple> {
    let count = graph.nodes.len();
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); count];
    for &(a, b) in &graph.edges {
        neighbours[a].push(b);
        neighbours[b].push(a);
    }
    let mut out = Vec::new();
    for (a, list) in neighbours.iter_mut().enumerate() {
        list.sort_unstable();
        for (i, &b) in list.iter().enumerate() {
            for &c in &list[i + 1..] {
                if !graph.has_edge(b, c) {
                    out.push(ContextTriple { a, b, c });
                }
            }
        }
    }
    out
}
