//! Laplacian smoothing engine and the canonical access trace of one smoothing
//! iteration.
//!
//! Each pass moves every interior vertex to the arithmetic mean of its
//! neighbors' positions. Two update schemes are provided: Jacobi reads all
//! neighbor positions from a start-of-iteration snapshot, which makes the
//! result independent of vertex storage order and of the thread count;
//! Gauss-Seidel reads in-place updated positions and is therefore
//! order-dependent (and restricted to a single thread).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{build_adjacency, global_quality, Adjacency, Mesh};

/// Update scheme for one smoothing pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Jacobi,
    GaussSeidel,
}

/// Why a smoothing run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    GoalReached,
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct SmoothingConfig {
    /// Stop as soon as the global quality reaches this value. The default of
    /// 1.0 is unreachable on any non-equilateral mesh, so runs normally stop
    /// on the epsilon criterion or the iteration cap.
    pub goal_quality: f64,
    /// Stop when an iteration improves the global quality by less than this.
    pub convergence_epsilon: f64,
    pub max_iterations: usize,
    pub scheme: Scheme,
    pub thread_count: usize,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        SmoothingConfig {
            goal_quality: 1.0,
            convergence_epsilon: 0.000005,
            max_iterations: 100,
            scheme: Scheme::Jacobi,
            thread_count: 1,
        }
    }
}

impl SmoothingConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.convergence_epsilon.is_finite() || self.convergence_epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "convergence epsilon must be positive, got {}",
                self.convergence_epsilon
            )));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidConfig("max iterations must be at least 1".into()));
        }
        if self.thread_count < 1 {
            return Err(Error::InvalidConfig("thread count must be at least 1".into()));
        }
        if self.scheme == Scheme::GaussSeidel && self.thread_count != 1 {
            return Err(Error::InvalidConfig(
                "the Gauss-Seidel scheme is order-dependent and only runs single-threaded".into(),
            ));
        }
        if !self.goal_quality.is_finite() || !(0.0..=1.0).contains(&self.goal_quality) {
            return Err(Error::InvalidConfig(format!(
                "goal quality must lie in [0, 1], got {}",
                self.goal_quality
            )));
        }
        Ok(())
    }
}

/// Result of a smoothing run. `quality_per_iteration[0]` is the initial
/// quality, so its length is always `iterations_run + 1`.
#[derive(Debug, Clone)]
pub struct SmoothingReport {
    pub iterations_run: usize,
    pub quality_per_iteration: Vec<f64>,
    pub final_mesh: Mesh,
    pub stop_reason: StopReason,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    iterations: usize,
    qualities: &'a [f64],
    stop_reason: StopReason,
}

impl SmoothingReport {
    pub fn final_quality(&self) -> f64 {
        *self
            .quality_per_iteration
            .last()
            .expect("report always holds the initial quality")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ReportJson {
            iterations: self.iterations_run,
            qualities: &self.quality_per_iteration,
            stop_reason: self.stop_reason,
        })
        .expect("report serialization cannot fail")
    }
}

/// New position of an interior vertex: the mean of its neighbors' positions.
/// The vertex's own position does not enter the sum.
pub fn smooth_vertex(
    v: usize,
    positions: &[(f64, f64)],
    adjacency: &Adjacency,
) -> Result<(f64, f64)> {
    let neighbors = &adjacency.neighbors[v];
    if neighbors.is_empty() {
        return Err(Error::InvalidMesh(format!(
            "vertex {v} has no neighbors; cannot smooth"
        )));
    }
    Ok(centroid(neighbors, positions))
}

fn centroid(neighbors: &[usize], positions: &[(f64, f64)]) -> (f64, f64) {
    let mut sx = 0.0;
    let mut sy = 0.0;
    for &u in neighbors {
        sx += positions[u].0;
        sy += positions[u].1;
    }
    let n = neighbors.len() as f64;
    (sx / n, sy / n)
}

/// One Jacobi pass: every interior vertex moves to the centroid of its
/// neighbors as read from the `snapshot`. The interior list is cut into
/// contiguous blocks, one per worker thread; block boundaries cannot affect
/// the result because all reads go to the snapshot.
fn jacobi_pass(
    positions: &mut [(f64, f64)],
    interior: &[usize],
    adjacency: &Adjacency,
    threads: usize,
) {
    let snapshot: Vec<(f64, f64)> = positions.to_vec();
    let mut updates = vec![(0.0, 0.0); interior.len()];

    if threads <= 1 || interior.len() < 2 {
        for (slot, &v) in updates.iter_mut().zip(interior) {
            *slot = centroid(&adjacency.neighbors[v], &snapshot);
        }
    } else {
        let block = interior.len().div_ceil(threads);
        let snapshot = &snapshot;
        std::thread::scope(|scope| {
            for (idx_block, out_block) in interior.chunks(block).zip(updates.chunks_mut(block)) {
                scope.spawn(move || {
                    for (slot, &v) in out_block.iter_mut().zip(idx_block) {
                        *slot = centroid(&adjacency.neighbors[v], snapshot);
                    }
                });
            }
        });
    }

    for (&v, &p) in interior.iter().zip(&updates) {
        positions[v] = p;
    }
}

fn gauss_seidel_pass(positions: &mut [(f64, f64)], interior: &[usize], adjacency: &Adjacency) {
    for &v in interior {
        positions[v] = centroid(&adjacency.neighbors[v], positions);
    }
}

/// Runs Laplacian smoothing until the goal quality is reached, the
/// per-iteration improvement drops below the epsilon, or the iteration cap is
/// hit — checked in that order. Every iteration smooths each interior vertex
/// exactly once in storage order and then recomputes the global quality.
pub fn run_smoothing(mesh: &Mesh, config: &SmoothingConfig) -> Result<SmoothingReport> {
    config.validate()?;
    let adjacency = build_adjacency(mesh)?;
    let interior = mesh.interior_vertices();
    for &v in &interior {
        if adjacency.neighbors[v].is_empty() {
            return Err(Error::InvalidMesh(format!(
                "interior vertex {v} has no neighbors"
            )));
        }
    }

    let mut work = mesh.clone();
    let mut positions: Vec<(f64, f64)> = work.vertices.iter().map(|v| v.pos()).collect();
    let mut qualities = vec![global_quality(&work, &adjacency)?];

    let stop_reason = loop {
        let current = *qualities.last().expect("nonempty");
        if current >= config.goal_quality {
            break StopReason::GoalReached;
        }
        if qualities.len() >= 2 {
            let previous = qualities[qualities.len() - 2];
            if current - previous < config.convergence_epsilon {
                break StopReason::Converged;
            }
        }
        if qualities.len() > config.max_iterations {
            break StopReason::MaxIterations;
        }

        match config.scheme {
            Scheme::Jacobi => jacobi_pass(&mut positions, &interior, &adjacency, config.thread_count),
            Scheme::GaussSeidel => gauss_seidel_pass(&mut positions, &interior, &adjacency),
        }
        for (vertex, &(x, y)) in work.vertices.iter_mut().zip(&positions) {
            vertex.x = x;
            vertex.y = y;
        }
        qualities.push(global_quality(&work, &adjacency)?);
    };

    Ok(SmoothingReport {
        iterations_run: qualities.len() - 1,
        quality_per_iteration: qualities,
        final_mesh: work,
        stop_reason,
    })
}

/// Canonical access sequence of one smoothing iteration at vertex-record
/// granularity: for each interior vertex `v` in storage order, a read of `v`,
/// a read of each neighbor in adjacency-list order, then the write back to
/// `v`.
pub fn trace_iteration(mesh: &Mesh, adjacency: &Adjacency) -> Vec<u64> {
    let interior = mesh.interior_vertices();
    let len: usize = interior
        .iter()
        .map(|&v| 2 + adjacency.neighbors[v].len())
        .sum();
    let mut trace = Vec::with_capacity(len);
    for &v in &interior {
        trace.push(v as u64);
        for &u in &adjacency.neighbors[v] {
            trace.push(u as u64);
        }
        trace.push(v as u64);
    }
    trace
}
