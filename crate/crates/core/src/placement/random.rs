use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Placement, PlacementError, SolverKind};
use crate::model::NetworkGraph;

/// Uniform sample of `n` distinct candidate sites, reproducible per seed.
pub fn place_random(graph: &NetworkGraph, n: usize, seed: u64) -> Result<Placement, PlacementError> {
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
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = index::sample(&mut rng, candidates.len(), n).into_iter().map(|i| candidates[i]).collect();
    Ok(Placement::new(SolverKind::Random, picked))
}
