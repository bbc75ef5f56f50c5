use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{ComponentLabel, StrategyLabel};

use super::PipelineError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub index: usize,
    pub component: ComponentLabel,
    pub strategies: BTreeSet<StrategyLabel>,
}

/// Premise → claim support link. `fallback` marks links added only so the
/// premise is not left dangling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub premise_index: usize,
    pub claim_index: usize,
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentTree {
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<TreeEdge>,
}

impl ArgumentTree {
    pub fn node(&self, index: usize) -> Option<&TreeNode> {
        self.nodes.iter().find(|n| n.index == index)
    }

    pub fn claims(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.component == ComponentLabel::Claim)
    }
}

/// Assembles and checks the tree: nodes are `0..n` in order, strategies sit
/// on premises only, edges run premise → claim without duplicates, and a
/// non-empty tree has a claim.
pub fn build_argument_tree(
    components: &[(usize, ComponentLabel)],
    strategies: &[(usize, BTreeSet<StrategyLabel>)],
    edges: &[TreeEdge],
) -> Result<ArgumentTree, PipelineError> {
    let err = |m: String| Err(PipelineError::Tree(m));
    for (pos, (index, _)) in components.iter().enumerate() {
        if *index != pos {
            return err(format!("node at position {pos} has index {index}"));
        }
    }
    let mut by_index: BTreeMap<usize, &BTreeSet<StrategyLabel>> = BTreeMap::new();
    for (index, set) in strategies {
        match components.get(*index) {
            Some((_, ComponentLabel::Premise)) => {}
            _ => return err(format!("strategies given for non-premise sentence {index}")),
        }
        if set.is_empty() {
            return err(format!("premise {index} has an empty strategy set"));
        }
        if by_index.insert(*index, set).is_some() {
            return err(format!("strategies given twice for sentence {index}"));
        }
    }
    let nodes: Vec<TreeNode> = components
        .iter()
        .map(|&(index, component)| TreeNode {
            index,
            component,
            strategies: by_index.get(&index).map(|s| (*s).clone()).unwrap_or_default(),
        })
        .collect();
    if let Some(p) = nodes.iter().find(|n| n.component == ComponentLabel::Premise && n.strategies.is_empty()) {
        return err(format!("premise {} has no strategies", p.index));
    }
    if !nodes.is_empty() && !nodes.iter().any(|n| n.component == ComponentLabel::Claim) {
        return err("no claim node".into());
    }
    let mut seen = BTreeSet::new();
    for e in edges {
        if components.get(e.premise_index).map(|c| c.1) != Some(ComponentLabel::Premise) {
            return err(format!("edge source {} is not a premise", e.premise_index));
        }
        if components.get(e.claim_index).map(|c| c.1) != Some(ComponentLabel::Claim) {
            return err(format!("edge target {} is not a claim", e.claim_index));
        }
        if !seen.insert((e.premise_index, e.claim_index)) {
            return err(format!("duplicate edge {} -> {}", e.premise_index, e.claim_index));
        }
    }
    Ok(ArgumentTree {
        nodes,
        edges: edges.to_vec(),
    })
}
