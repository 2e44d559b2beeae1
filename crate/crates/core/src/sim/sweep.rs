use alloc::vec::Vec;

use super::config::{MigrationKind, SimConfig};
use super::engine::{run_migration, SimError};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GapStats {
    pub n: usize,
    pub mean: f64,
    /// Half-width of the normal-approximation 95% interval.
    pub ci95: f64,
    pub min: f64,
    pub max: f64,
    /// Fewer than two samples: the interval is reported as zero width.
    pub degenerate: bool,
}

pub fn summarize(values: &[f64]) -> Option<GapStats> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (ci95, degenerate) = if n < 2 {
        (0.0, true)
    } else {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        (1.96 * libm::sqrt(var) / libm::sqrt(n as f64), false)
    };
    Some(GapStats { n, mean, ci95, min, max, degenerate })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub kind: MigrationKind,
    pub config_index: usize,
    pub link_rtt: f64,
    /// Gap per completed run, in seed order.
    pub gaps: Vec<f64>,
    pub overlaps: Vec<usize>,
    pub stats: Option<GapStats>,
    /// Runs where the client never saw both transcoders.
    pub incomplete: usize,
    pub seeds: Vec<u64>,
}

/// Runs every (kind, config) pair `reps` times with seeds `base_seed..base_seed + reps`.
pub fn sweep(
    configs: &[SimConfig],
    kinds: &[MigrationKind],
    reps: usize,
    base_seed: u64,
) -> Result<Vec<SweepCell>, SimError> {
    let mut cells = Vec::new();
    for &kind in kinds {
        for (config_index, cfg) in configs.iter().enumerate() {
            let mut cell = SweepCell {
                kind,
                config_index,
                link_rtt: cfg.link_rtt,
                gaps: Vec::with_capacity(reps),
                overlaps: Vec::with_capacity(reps),
                stats: None,
                incomplete: 0,
                seeds: Vec::with_capacity(reps),
            };
            for rep in 0..reps as u64 {
                let seed = base_seed + rep;
                cell.seeds.push(seed);
                let run = run_migration(&cfg.clone().with_seed(seed), kind)?;
                match run.gap {
                    Some(Ok(g)) => {
                        cell.gaps.push(g.gap);
                        cell.overlaps.push(g.overlap_packets);
                    }
                    _ => cell.incomplete += 1,
                }
            }
            cell.stats = summarize(&cell.gaps);
            cells.push(cell);
        }
    }
    Ok(cells)
}
