//! Subcommand implementations.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};

use lms::cache::{model_misses, CacheSpec};
use lms::mesh::{build_adjacency, vertex_qualities, Mesh};
use lms::ordering::{apply_ordering, bfs_order, order_by_strategy, OrderingStrategy, VertexOrdering};
use lms::reuse::{reuse_distances, windowed_means};
use lms::smoothing::{run_smoothing, trace_iteration, SmoothingConfig};

use crate::report::{quantiles_csv, ratio_vs, ComparisonReport, OrderingResult, Quantiles};
use crate::{CompareArgs, GenerateArgs, QualityArgs, ReorderArgs, StrategyArg};

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_mesh(dir: &Path, stem: &str, mesh: &Mesh) -> Result<()> {
    write_file(&dir.join(format!("{stem}.node")), &lms::io::write_node(mesh))?;
    write_file(&dir.join(format!("{stem}.ele")), &lms::io::write_ele(mesh))
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let mesh = lms::synth::generate_synthetic(
        args.synthetic.rows,
        args.synthetic.cols,
        args.jitter,
        args.seed,
    )?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_mesh(&args.out, "mesh", &mesh)?;
    println!(
        "wrote {} vertices, {} triangles to {}",
        mesh.vertex_count(),
        mesh.triangle_count(),
        args.out.join("mesh.{node,ele}").display()
    );
    Ok(())
}

pub fn quality(args: &QualityArgs) -> Result<()> {
    let (mesh, name) = args.source.load()?;
    let adjacency = build_adjacency(&mesh)?;
    let qualities = vertex_qualities(&mesh, &adjacency)?;
    let global = lms::mesh::global_quality(&mesh, &adjacency)?;
    let min = qualities.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = qualities.iter().cloned().fold(0.0f64, f64::max);
    let mut histogram = [0u64; 10];
    for &q in &qualities {
        let bin = ((q * 10.0).floor() as usize).min(9);
        histogram[bin] += 1;
    }
    let summary = serde_json::json!({
        "mesh": name,
        "vertices": mesh.vertex_count(),
        "triangles": mesh.triangle_count(),
        "global_quality": global,
        "min_vertex_quality": min,
        "max_vertex_quality": max,
        "histogram": histogram.to_vec(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

/// Computes the ordering for a CLI strategy choice; the seed feeds the random
/// strategy and `bfs_seed` overrides the BFS start vertex.
fn resolve_ordering(
    strategy: OrderingStrategy,
    mesh: &Mesh,
    adjacency: &lms::mesh::Adjacency,
    qualities: &[f64],
    seed: u64,
    bfs_seed: Option<usize>,
) -> Result<VertexOrdering> {
    let ordering = match strategy {
        OrderingStrategy::Bfs => bfs_order(mesh, adjacency, bfs_seed)?,
        other => order_by_strategy(other, mesh, adjacency, qualities, seed)?,
    };
    Ok(ordering)
}

pub fn reorder(args: &ReorderArgs) -> Result<()> {
    let (mesh, _) = args.source.load()?;
    let adjacency = build_adjacency(&mesh)?;
    let qualities = vertex_qualities(&mesh, &adjacency)?;
    let strategy: OrderingStrategy = args.ordering.into();
    let ordering = resolve_ordering(
        strategy,
        &mesh,
        &adjacency,
        &qualities,
        args.source.seed,
        args.bfs_seed,
    )?;
    let reordered = apply_ordering(&mesh, &ordering)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_mesh(&args.out, "reordered", &reordered)?;
    write_file(
        &args.out.join(format!("ordering_{}.txt", strategy.name())),
        &ordering.to_text(),
    )?;
    println!(
        "{} permutation checksum {:#018x}",
        strategy.name(),
        ordering.checksum()
    );
    Ok(())
}

pub fn compare(args: &CompareArgs) -> Result<()> {
    let (mesh, name) = args.source.load()?;
    anyhow::ensure!(
        args.lat.len() == 3,
        "--lat needs exactly three latencies c2,c3,cm (got {})",
        args.lat.len()
    );
    let spec = CacheSpec {
        l1_bytes: args.l1,
        l2_bytes: args.l2,
        l3_bytes: args.l3,
        element_bytes: args.elem_bytes,
        c2: args.lat[0],
        c3: args.lat[1],
        cm: args.lat[2],
    };
    spec.validate()?;
    let config = SmoothingConfig {
        goal_quality: 1.0,
        convergence_epsilon: args.epsilon,
        max_iterations: args.max_iters,
        scheme: args.scheme.into(),
        thread_count: args.threads,
    };
    config.validate()?;

    let mut strategies: Vec<StrategyArg> = Vec::new();
    for &s in &args.orderings {
        if !strategies.contains(&s) {
            strategies.push(s);
        }
    }

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let adjacency = build_adjacency(&mesh)?;
    let qualities = vertex_qualities(&mesh, &adjacency)?;

    let mut results = Vec::new();
    for &strategy_arg in &strategies {
        let strategy: OrderingStrategy = strategy_arg.into();
        let started = Instant::now();
        let ordering = resolve_ordering(
            strategy,
            &mesh,
            &adjacency,
            &qualities,
            args.source.seed,
            args.bfs_seed,
        )?;
        let reordered = apply_ordering(&mesh, &ordering)?;
        let reordered_adj = build_adjacency(&reordered)?;

        let trace = trace_iteration(&reordered, &reordered_adj);
        let profile = reuse_distances(&trace);
        let model = model_misses(&profile, &spec)?;
        let miss_report = model.report(&spec);
        let smoothing = run_smoothing(&reordered, &config)?;

        write_profile_csv(
            &args.out.join(format!("profile_{}.csv", strategy.name())),
            &trace,
            smoothing.iterations_run.max(1),
        )?;

        let quantile = |q: f64| profile.quantile(q).ok();
        results.push(OrderingResult {
            ordering: strategy.name(),
            iterations: smoothing.iterations_run,
            final_quality: smoothing.final_quality(),
            stop_reason: smoothing.stop_reason,
            n_accesses: trace.len(),
            mean_distance: profile.mean_distance().ok(),
            quantiles: Quantiles {
                q50: quantile(0.5),
                q75: quantile(0.75),
                q90: quantile(0.9),
                q100: quantile(1.0),
            },
            miss_model: miss_report,
            cost_ratio_vs_ori: None,
            mean_distance_ratio_vs_ori: None,
        });
        eprintln!(
            "{}: analyzed in {:.2}s",
            strategy.name(),
            started.elapsed().as_secs_f64()
        );
    }

    let baseline = results
        .iter()
        .find(|r| r.ordering == OrderingStrategy::Original.name())
        .map(|r| (r.miss_model.cost_cycles, r.mean_distance));
    if let Some((base_cost, base_mean)) = baseline {
        for row in &mut results {
            row.cost_ratio_vs_ori = ratio_vs(row.miss_model.cost_cycles, base_cost);
            row.mean_distance_ratio_vs_ori = match (row.mean_distance, base_mean) {
                (Some(mean), Some(base)) if base > 0.0 => Some(mean / base),
                _ => None,
            };
        }
    }

    let report = ComparisonReport {
        mesh: name,
        vertices: mesh.vertex_count(),
        triangles: mesh.triangle_count(),
        seed: args.source.seed,
        scheme: match config.scheme {
            lms::smoothing::Scheme::Jacobi => "jacobi",
            lms::smoothing::Scheme::GaussSeidel => "gauss-seidel",
        },
        orderings: results,
    };
    write_file(
        &args.out.join("comparison.json"),
        &format!("{}\n", serde_json::to_string_pretty(&report)?),
    )?;
    write_file(&args.out.join("quantiles.csv"), &quantiles_csv(&report))?;
    println!(
        "wrote comparison.json, quantiles.csv and {} profile file(s) to {}",
        report.orderings.len(),
        args.out.display()
    );
    Ok(())
}

/// Windowed profile in the shape of the per-iteration reuse plots: the
/// one-iteration trace repeated `iterations` times, each iteration split into
/// up to 100 windows of mean finite distance.
fn write_profile_csv(path: &Path, iteration_trace: &[u64], iterations: usize) -> Result<()> {
    let mut csv = String::from("iteration,window,mean_distance\n");
    let len = iteration_trace.len();
    if len > 0 {
        let mut full = Vec::with_capacity(len * iterations);
        for _ in 0..iterations {
            full.extend_from_slice(iteration_trace);
        }
        let profile = reuse_distances(&full);
        let window_count = len.min(100);
        for iteration in 0..iterations {
            let segment = &profile.distances[iteration * len..(iteration + 1) * len];
            let means = windowed_means(segment, window_count)
                .expect("window count never exceeds segment length");
            for (window, mean) in means.iter().enumerate() {
                csv.push_str(&format!("{},{},{}\n", iteration + 1, window + 1, mean));
            }
        }
    }
    write_file(path, &csv)
}
