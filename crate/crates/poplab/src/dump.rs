//! JSON forms of enumerated trees and correspondence maps.

use poplab_core::correspondence::{CorrespondenceMap, SearchTree};
use poplab_core::{Plan, Problem, SchemaRef};
use serde::{Deserialize, Serialize};

/// One tree node. Step labels are positions in `operator_sequence`, which
/// starts with the `*initial*` and `*final*` pseudo-steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub operator_sequence: Vec<String>,
    /// Direct orderings as `[before, after]` label pairs.
    pub edges: Vec<[usize; 2]>,
    /// Open goals as `[needer label, proposition]`.
    pub goals: Vec<(usize, String)>,
    pub solution: bool,
    pub dead_end: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub ua_id: usize,
    pub to_ids: Vec<usize>,
}

pub const INITIAL_NAME: &str = "*initial*";
pub const FINAL_NAME: &str = "*final*";

pub fn step_names(problem: &Problem, plan: &Plan) -> Vec<String> {
    plan.steps()
        .iter()
        .map(|s| match s.schema {
            SchemaRef::Initial => INITIAL_NAME.to_string(),
            SchemaRef::Final => FINAL_NAME.to_string(),
            SchemaRef::Library(i) => problem.library()[i as usize].name.clone(),
        })
        .collect()
}

pub fn tree_records(problem: &Problem, tree: &SearchTree) -> Vec<NodeRecord> {
    tree.nodes
        .iter()
        .map(|n| NodeRecord {
            id: n.id,
            parent: n.parent,
            depth: n.depth,
            operator_sequence: step_names(problem, &n.plan),
            edges: n.plan.edges().map(|(a, b)| [a, b]).collect(),
            goals: n.goals.iter().map(|g| (g.needer, problem.prop_name(g.condition).to_string())).collect(),
            solution: n.is_solution,
            dead_end: n.is_dead_end,
        })
        .collect()
}

pub fn map_records(map: &CorrespondenceMap) -> Vec<MapRecord> {
    map.images
        .iter()
        .enumerate()
        .map(|(ua_id, ts)| MapRecord { ua_id, to_ids: ts.clone() })
        .collect()
}

pub fn tree_json(problem: &Problem, tree: &SearchTree) -> serde_json::Result<String> {
    serde_json::to_string_pretty(&tree_records(problem, tree))
}

pub fn map_json(map: &CorrespondenceMap) -> serde_json::Result<String> {
    serde_json::to_string_pretty(&map_records(map))
}

pub fn read_tree_json(text: &str) -> serde_json::Result<Vec<NodeRecord>> {
    serde_json::from_str(text)
}
