use alloc::vec::Vec;

use super::{Evaluator, Objective, Placement, PlacementError, SolverKind};
use crate::model::{DemandSet, NetworkGraph, NodeId};

pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 100_000;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// Scores every `n`-subset of the candidate sites and keeps the best. Ties go
/// to the lexicographically first subset.
pub fn place_exhaustive(
    graph: &NetworkGraph,
    demands: &DemandSet,
    n: usize,
    objective: Objective,
    budget: u128,
) -> Result<Placement, PlacementError> {
    let candidates = graph.candidates();
    if n == 0 {
        return Err(PlacementError::InvalidCount);
    }
    if n > candidates.len() {
        return Err(PlacementError::TooManyTranscoders {
            requested: n,
            candidates: candidates.len(),
        });
    }
    let combinations = binomial(candidates.len(), n);
    if combinations > budget {
        return Err(PlacementError::BudgetExceeded { combinations, budget });
    }
    let eval = Evaluator::new(graph, demands)?;

    let mut idx: Vec<usize> = (0..n).collect();
    let mut subset: Vec<NodeId> = Vec::with_capacity(n);
    let mut best: Option<(f64, Vec<NodeId>)> = None;
    let mut evaluations = 0;
    loop {
        subset.clear();
        subset.extend(idx.iter().map(|&i| candidates[i]));
        let value = eval.objective(objective, &subset);
        evaluations += 1;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, subset.clone()));
        }
        // next combination in lexicographic order
        let Some(pos) = (0..n).rev().find(|&i| idx[i] != i + candidates.len() - n) else {
            break;
        };
        idx[pos] += 1;
        for j in pos + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
    let (value, transcoders) = best.expect("at least one subset");
    let mut placement = Placement::new(SolverKind::Exhaustive, transcoders);
    placement.score = Some(value);
    placement.evaluations = evaluations;
    Ok(placement)
}
