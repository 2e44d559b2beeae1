use alloc::vec::Vec;

use super::Evaluator;
use crate::model::{DemandSet, ModelError, NetworkGraph, NodeId, UNREACHABLE};

/// Single-site fitness: sum over demands of dist(site, client) x bitrate,
/// divided by the site's degree. Isolated sites score `f64::INFINITY`.
pub fn score_location(graph: &NetworkGraph, site: NodeId, demands: &DemandSet) -> Result<f64, ModelError> {
    let eval = Evaluator::with_origins(graph, demands, [site])?;
    Ok(site_score(&eval, eval.index(site)))
}

/// Group fitness: each demand is charged dist x bitrate to the nearest site
/// in `locations`. Unlike [`score_location`] there is no degree divisor.
pub fn group_score(graph: &NetworkGraph, locations: &[NodeId], demands: &DemandSet) -> Result<f64, ModelError> {
    let eval = Evaluator::with_origins(graph, demands, locations.iter().copied())?;
    let sites: Vec<usize> = locations.iter().map(|&n| eval.index(n)).collect();
    Ok(group_score_of(&eval, &sites))
}

pub(crate) fn site_score(eval: &Evaluator<'_>, site: usize) -> f64 {
    let degree = eval.graph().degree_at(site);
    if degree == 0 {
        return f64::INFINITY;
    }
    let mut score = 0.0;
    for (&dest, &rate) in eval.dest_indices().iter().zip(eval.rates()) {
        let d = eval.dist(site, dest);
        if d == UNREACHABLE {
            return f64::INFINITY;
        }
        score += d as f64 * rate;
    }
    score / degree as f64
}

pub(crate) fn group_score_of(eval: &Evaluator<'_>, sites: &[usize]) -> f64 {
    if sites.is_empty() {
        return f64::INFINITY;
    }
    let mut score = 0.0;
    for (&dest, &rate) in eval.dest_indices().iter().zip(eval.rates()) {
        let nearest = sites.iter().map(|&s| eval.dist(s, dest)).min().unwrap_or(UNREACHABLE);
        if nearest == UNREACHABLE {
            return f64::INFINITY;
        }
        score += nearest as f64 * rate;
    }
    score
}
