use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Evaluator, Objective, Placement, PlacementError, SolverKind};
use crate::model::{DemandSet, NetworkGraph, NodeId};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GaParams {
    pub generations: usize,
    pub population: usize,
    /// Share of the population replaced by crossover, and separately the
    /// share mutated, each generation.
    pub operator_fraction: f64,
    pub seed: u64,
    pub objective: Objective,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            generations: 10,
            population: 50,
            operator_fraction: 0.5,
            seed: 0,
            objective: Objective::NetworkLoad,
        }
    }
}

impl GaParams {
    fn validate(&self) -> Result<(), PlacementError> {
        if self.population < 2 {
            return Err(PlacementError::InvalidGaParams("population must be at least 2"));
        }
        if !(self.operator_fraction > 0.0 && self.operator_fraction < 1.0) {
            return Err(PlacementError::InvalidGaParams("operator fraction must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaRun {
    pub placement: Placement,
    /// Best fitness after the initial population and after each generation.
    pub best_per_generation: Vec<f64>,
    /// Whether the run ended because the stop score was reached.
    pub stopped_early: bool,
}

type Chromosome = Vec<NodeId>;

struct Ga<'e, 'a> {
    eval: &'e Evaluator<'a>,
    candidates: Vec<NodeId>,
    n: usize,
    objective: Objective,
    rng: ChaCha8Rng,
    evaluations: usize,
}

impl Ga<'_, '_> {
    fn random_chromosome(&mut self) -> Chromosome {
        index::sample(&mut self.rng, self.candidates.len(), self.n)
            .into_iter()
            .map(|i| self.candidates[i])
            .collect()
    }

    fn fitness(&mut self, c: &[NodeId]) -> f64 {
        self.evaluations += 1;
        self.eval.objective(self.objective, c)
    }

    fn scored(&mut self, c: Chromosome) -> (f64, Chromosome) {
        (self.fitness(&c), c)
    }

    fn crossover(&mut self, a: &[NodeId], b: &[NodeId]) -> Chromosome {
        if self.n < 2 {
            return b.to_vec();
        }
        let cut = self.rng.gen_range(1..self.n);
        let mut child = a[..cut].to_vec();
        child.extend_from_slice(&b[cut..]);
        child
    }

    fn mutate(&mut self, c: &mut Chromosome) -> bool {
        let unused: Vec<NodeId> = self.candidates.iter().copied().filter(|x| !c.contains(x)).collect();
        if unused.is_empty() {
            return false;
        }
        let gene = self.rng.gen_range(0..self.n);
        c[gene] = unused[self.rng.gen_range(0..unused.len())];
        true
    }
}

fn has_duplicates(c: &[NodeId]) -> bool {
    c.iter().enumerate().any(|(i, x)| c[..i].contains(x))
}

fn sort_population(pop: &mut [(f64, Chromosome)]) {
    pop.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
}

fn reached(best: f64, stop: Option<f64>) -> bool {
    stop.is_some_and(|s| best <= s + 1e-9 * s.abs().max(1.0))
}

/// Genetic search over length-`n` vectors of distinct candidate sites.
///
/// Each generation keeps the fittest share of the population, refills it
/// with single-point crossover children of random survivor pairs (children
/// with a repeated site are discarded and replaced by fresh random
/// chromosomes), then mutates one gene in a random share of the population.
/// The incumbent best is never mutated. The run stops after
/// `params.generations` generations or as soon as the best fitness is at or
/// below `stop_score`.
pub fn run_ga(
    graph: &NetworkGraph,
    demands: &DemandSet,
    n: usize,
    params: &GaParams,
    stop_score: Option<f64>,
) -> Result<GaRun, PlacementError> {
    params.validate()?;
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
    let eval = Evaluator::new(graph, demands)?;
    let mut ga = Ga {
        eval: &eval,
        candidates,
        n,
        objective: params.objective,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        evaluations: 0,
    };

    let finish = |ga: &Ga<'_, '_>, best: (f64, Chromosome), history: Vec<f64>, stopped: bool| {
        let mut placement = Placement::new(SolverKind::Ga, best.1);
        placement.score = Some(best.0);
        placement.evaluations = ga.evaluations;
        GaRun {
            placement,
            best_per_generation: history,
            stopped_early: stopped,
        }
    };

    // a single possible set: nothing to search
    if n == ga.candidates.len() {
        let only = ga.candidates.clone();
        let best = ga.scored(only);
        let history = alloc::vec![best.0];
        return Ok(finish(&ga, best, history, false));
    }

    let mut pop: Vec<(f64, Chromosome)> = (0..params.population)
        .map(|_| {
            let c = ga.random_chromosome();
            ga.scored(c)
        })
        .collect();
    sort_population(&mut pop);
    let mut history = alloc::vec![pop[0].0];

    let pop_size = params.population;
    let operated = ((params.operator_fraction * pop_size as f64 + 0.5) as usize).clamp(1, pop_size - 1);
    let survivors = pop_size - operated;

    for _ in 0..params.generations {
        if reached(pop[0].0, stop_score) {
            return Ok(finish(&ga, pop.swap_remove(0), history, true));
        }
        pop.truncate(survivors);

        let mut children = Vec::with_capacity(operated);
        while children.len() < operated {
            let (pa, pb) = if survivors >= 2 {
                let pick = index::sample(&mut ga.rng, survivors, 2);
                (pick.index(0), pick.index(1))
            } else {
                (0, 0)
            };
            let child = ga.crossover(&pop[pa].1, &pop[pb].1);
            let child = if has_duplicates(&child) { ga.random_chromosome() } else { child };
            children.push(child);
        }
        // (fitness if still valid, chromosome)
        let mut next: Vec<(Option<f64>, Chromosome)> = pop.drain(..).map(|(f, c)| (Some(f), c)).collect();
        next.extend(children.into_iter().map(|c| (None, c)));

        // index 0 is the incumbent best and is left untouched
        for i in index::sample(&mut ga.rng, pop_size - 1, operated) {
            let (fit, c) = &mut next[i + 1];
            if ga.mutate(c) {
                *fit = None;
            }
        }
        pop = next
            .into_iter()
            .map(|(fit, c)| match fit {
                Some(f) => (f, c),
                None => ga.scored(c),
            })
            .collect();
        sort_population(&mut pop);
        history.push(pop[0].0);
    }
    let stopped = reached(pop[0].0, stop_score);
    Ok(finish(&ga, pop.swap_remove(0), history, stopped))
}

/// [`run_ga`] without the per-generation history.
pub fn place_ga(
    graph: &NetworkGraph,
    demands: &DemandSet,
    n: usize,
    params: &GaParams,
    stop_score: Option<f64>,
) -> Result<Placement, PlacementError> {
    run_ga(graph, demands, n, params, stop_score).map(|r| r.placement)
}
