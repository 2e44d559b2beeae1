use alloc::vec::Vec;

use super::score::{group_score_of, site_score};
use super::{Evaluator, Placement, PlacementError, SolverKind};
use crate::model::{DemandSet, NetworkGraph};

/// Largest accepted separation constant. Larger values give the same
/// placements as 0.1 with more work.
pub const MAX_SEPARATION: f64 = 0.1;

/// How a candidate qualifies for the separation pool.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum PoolRule {
    /// Farther than the separation distance from at least one chosen site.
    #[default]
    AnyChosen,
    /// Farther than the separation distance from every chosen site.
    AllChosen,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HeuristicParams {
    pub transcoder_count: usize,
    pub separation: f64,
    pub pool_rule: PoolRule,
}

impl HeuristicParams {
    pub fn new(transcoder_count: usize, separation: f64) -> Result<Self, PlacementError> {
        if transcoder_count == 0 {
            return Err(PlacementError::InvalidCount);
        }
        if !(separation > 0.0 && separation <= MAX_SEPARATION) {
            return Err(PlacementError::InvalidSeparation(separation));
        }
        Ok(Self {
            transcoder_count,
            separation,
            pool_rule: PoolRule::default(),
        })
    }

    pub fn with_pool_rule(mut self, rule: PoolRule) -> Self {
        self.pool_rule = rule;
        self
    }
}

/// Greedy separation-distance placement.
///
/// The first site minimises [`score_location`](super::score_location). Each
/// further site is the pool member that minimises the group score of the
/// sites chosen so far plus itself, where the pool holds candidates farther
/// than `floor(separation x |V|)` hops from the chosen sites. The separation
/// distance shrinks by one hop whenever the pool comes up empty and keeps
/// the reduced value for later rounds.
pub fn place_heuristic(
    graph: &NetworkGraph,
    demands: &DemandSet,
    params: &HeuristicParams,
) -> Result<Placement, PlacementError> {
    let params = HeuristicParams::new(params.transcoder_count, params.separation)?.with_pool_rule(params.pool_rule);
    let candidates = graph.candidates();
    if candidates.is_empty() {
        return Err(PlacementError::NoCandidates);
    }
    let eval = Evaluator::new(graph, demands)?;
    let cand: Vec<usize> = candidates.iter().map(|&c| eval.index(c)).collect();
    let mut evaluations = 0;

    let mut first = cand[0];
    let mut min_score = f64::INFINITY;
    for &a in &cand {
        let s = site_score(&eval, a);
        evaluations += 1;
        if s < min_score {
            min_score = s;
            first = a;
        }
    }
    let mut chosen = alloc::vec![first];
    let target = params.transcoder_count.min(cand.len());

    // floor for a non-negative product
    let mut sep_dist = (params.separation * graph.node_count() as f64) as i64;
    let mut pool: Vec<usize> = Vec::new();
    while chosen.len() < target {
        loop {
            pool.clear();
            for &a in &cand {
                if chosen.contains(&a) {
                    continue;
                }
                let mut far = chosen.iter().map(|&k| i64::from(eval.dist(a, k)) > sep_dist);
                let qualifies = match params.pool_rule {
                    PoolRule::AnyChosen => far.any(|f| f),
                    PoolRule::AllChosen => far.all(|f| f),
                };
                if qualifies {
                    pool.push(a);
                }
            }
            if !pool.is_empty() || sep_dist < 0 {
                break;
            }
            sep_dist -= 1;
        }

        let mut best = None;
        let mut best_score = f64::INFINITY;
        let mut group = chosen.clone();
        group.push(0);
        for &j in &pool {
            *group.last_mut().expect("group is non-empty") = j;
            let g = group_score_of(&eval, &group);
            evaluations += 1;
            if best.is_none() || g < best_score {
                best_score = g;
                best = Some(j);
            }
        }
        match best {
            Some(j) => chosen.push(j),
            None => break,
        }
    }

    let mut placement = Placement::new(SolverKind::Heuristic, chosen.iter().map(|&i| graph.id_at(i)).collect());
    placement.score = Some(group_score_of(&eval, &chosen));
    placement.truncated = params.transcoder_count > cand.len();
    placement.evaluations = evaluations;
    Ok(placement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CodecRate, Demand, GraphBuilder, NodeId, Roles};
    use alloc::vec;

    #[test]
    fn rejects_out_of_range_separation() {
        assert!(HeuristicParams::new(2, 0.0).is_err());
        assert!(HeuristicParams::new(2, 0.11).is_err());
        assert!(HeuristicParams::new(2, 0.1).is_ok());
        assert!(HeuristicParams::new(0, 0.05).is_err());
    }

    #[test]
    fn single_candidate_any_count() {
        let g = GraphBuilder::new()
            .node(NodeId(0), Roles::SOURCE)
            .node(NodeId(1), Roles::CANDIDATE)
            .node(NodeId(2), Roles::CLIENT)
            .edge(NodeId(0), NodeId(1), 10.0)
            .edge(NodeId(1), NodeId(2), 10.0)
            .build()
            .unwrap();
        let ds = DemandSet::new(&g, vec![Demand::new(NodeId(0), NodeId(2), CodecRate::new("HD", 5.0), "x")]).unwrap();
        for n in [1, 3] {
            let p = place_heuristic(&g, &ds, &HeuristicParams::new(n, 0.1).unwrap()).unwrap();
            assert_eq!(p.transcoders, vec![NodeId(1)]);
            assert_eq!(p.truncated, n > 1);
        }
    }

    #[test]
    fn no_candidates_is_an_error() {
        let g = GraphBuilder::new()
            .node(NodeId(0), Roles::SOURCE)
            .node(NodeId(1), Roles::CLIENT)
            .edge(NodeId(0), NodeId(1), 10.0)
            .build()
            .unwrap();
        let ds = DemandSet::new(&g, vec![]).unwrap();
        assert_eq!(
            place_heuristic(&g, &ds, &HeuristicParams::new(1, 0.1).unwrap()),
            Err(PlacementError::NoCandidates)
        );
    }
}
