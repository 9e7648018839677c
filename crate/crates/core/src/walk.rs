//! The lazy flip walk and statistics over its samples.
//!
//! Each step draws one interior edge uniformly; if it is flippable a fair
//! coin decides whether to flip it. The chain is symmetric on the flip graph
//! and lazy, so its stationary law is uniform. How fast it mixes is not
//! known beyond width 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::mesh::FlipMesh;
use crate::triangulation::Triangulation;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_060_101;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    pub grid: GridSpec,
    pub steps: u64,
    pub record_every: u64,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(grid: GridSpec, steps: u64, record_every: u64, seed: u64) -> Result<Self> {
        if record_every == 0 {
            return Err(Error::Precondition("record_every must be positive".into()));
        }
        if steps > 0 && record_every > steps {
            return Err(Error::Precondition(format!("record_every {record_every} exceeds the {steps} steps")));
        }
        Ok(WalkConfig { grid, steps, record_every, seed })
    }

    pub fn sample_count(&self) -> u64 {
        self.steps / self.record_every
    }
}

/// A running walk: the current triangulation and the random stream.
#[derive(Clone, Debug)]
pub struct Walker {
    mesh: FlipMesh,
    rng: ChaCha8Rng,
    edges: usize,
}

impl Walker {
    pub fn new(start: &Triangulation, seed: u64) -> Result<Self> {
        let mesh = FlipMesh::from_triangulation(start)?;
        let edges = mesh.interior_edge_count();
        Ok(Walker { mesh, rng: ChaCha8Rng::seed_from_u64(seed), edges })
    }

    /// One lazy step; returns whether a flip happened.
    #[inline]
    pub fn step(&mut self) -> bool {
        if self.edges == 0 {
            return false;
        }
        let i = self.rng.gen_range(0..self.edges);
        self.mesh.is_flippable(i) && self.rng.gen::<bool>() && self.mesh.flip(i)
    }

    pub fn mesh(&self) -> &FlipMesh {
        &self.mesh
    }
}

/// One step from `t` drawing from `rng`.
pub fn walk_step(t: &Triangulation, rng: &mut impl Rng) -> Result<Triangulation> {
    let mut mesh = FlipMesh::from_triangulation(t)?;
    let edges = mesh.interior_edge_count();
    if edges > 0 {
        let i = rng.gen_range(0..edges);
        if mesh.is_flippable(i) && rng.gen::<bool>() {
            mesh.flip(i);
        }
    }
    Ok(mesh.to_triangulation())
}

/// Walk from the initial triangulation, handing every `record_every`-th state
/// to `on_sample`; returns the number of samples.
pub fn run_walk(cfg: &WalkConfig, mut on_sample: impl FnMut(&FlipMesh)) -> Result<u64> {
    let mut walker = Walker::new(&Triangulation::initial(cfg.grid), cfg.seed)?;
    let samples = cfg.sample_count();
    for _ in 0..samples {
        for _ in 0..cfg.record_every {
            walker.step();
        }
        on_sample(walker.mesh());
    }
    Ok(samples)
}

/// Collected samples as triangulations.
pub fn walk_samples(cfg: &WalkConfig) -> Result<Vec<Triangulation>> {
    let mut out = Vec::new();
    run_walk(cfg, |m| out.push(m.to_triangulation()))?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WalkStats {
    pub samples: u64,
    pub irregular: u64,
    sum_max_edge: f64,
    sum_avg_edge: f64,
    sum_avg_interior: f64,
}

impl WalkStats {
    /// Record one sample: max and mean over all edges, mean over interior edges.
    pub fn add(&mut self, max_edge: f64, avg_edge: f64, avg_interior: f64, regular: bool) {
        self.samples += 1;
        self.irregular += u64::from(!regular);
        self.sum_max_edge += max_edge;
        self.sum_avg_edge += avg_edge;
        self.sum_avg_interior += avg_interior;
    }

    pub fn add_mesh(&mut self, mesh: &FlipMesh, regular: bool) {
        let (max, avg) = mesh.edge_length_stats();
        self.add(max, avg, mesh.interior_edge_mean(), regular);
    }

    pub fn merge(&mut self, other: &WalkStats) {
        self.samples += other.samples;
        self.irregular += other.irregular;
        self.sum_max_edge += other.sum_max_edge;
        self.sum_avg_edge += other.sum_avg_edge;
        self.sum_avg_interior += other.sum_avg_interior;
    }

    fn mean(&self, sum: f64) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            sum / self.samples as f64
        }
    }

    pub fn irregular_fraction(&self) -> f64 {
        self.mean(self.irregular as f64)
    }

    pub fn mean_max_edge(&self) -> f64 {
        self.mean(self.sum_max_edge)
    }

    /// Mean over samples of the mean length over all edges, boundary included.
    pub fn mean_avg_edge(&self) -> f64 {
        self.mean(self.sum_avg_edge)
    }

    /// Mean over samples of the mean length over interior edges.
    pub fn mean_avg_interior_edge(&self) -> f64 {
        self.mean(self.sum_avg_interior)
    }

    /// `irregularity,max_edge,avg_edge,avg_interior_edge`, three decimals each.
    pub fn csv_row(&self) -> String {
        format!(
            "{:.3},{:.3},{:.3},{:.3}",
            self.irregular_fraction(),
            self.mean_max_edge(),
            self.mean_avg_edge(),
            self.mean_avg_interior_edge()
        )
    }
}

/// Statistics of `samples`, with regularity decided by `is_regular`.
pub fn summarize(samples: &[Triangulation], mut is_regular: impl FnMut(&Triangulation) -> bool) -> WalkStats {
    let mut stats = WalkStats::default();
    for t in samples {
        let (max, avg) = t.edge_length_stats();
        let interior = t.interior_edges();
        let inner = if interior.is_empty() {
            0.0
        } else {
            interior.iter().map(|(e, _)| e.length()).sum::<f64>() / interior.len() as f64
        };
        stats.add(max, avg, inner, is_regular(t));
    }
    stats
}
