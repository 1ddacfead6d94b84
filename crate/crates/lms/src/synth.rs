//! Synthetic test meshes: a structured triangulation of the unit square with
//! an optional random jitter of the interior vertices.
//!
//! The construction is pinned so that independent implementations produce
//! bit-identical meshes:
//!
//! * `rows x cols` vertices at `x = c / (cols-1)`, `y = r / (rows-1)`, stored
//!   row-major (`index = r * cols + c`).
//! * Each grid cell is split along its south-west/north-east diagonal into
//!   triangles `(v00, v01, v11)` and `(v00, v11, v10)`, cells visited
//!   row-major.
//! * One [`SplitMix64`] stream seeded with `seed`. Visiting vertices in
//!   row-major order, each *interior* vertex takes exactly two draws, `dx`
//!   then `dy`, with `dx = (2u - 1) * jitter * hx` where `u` is the draw
//!   mapped to `[0,1)` (see [`crate::rng`]) and `hx = 1/(cols-1)`; `dy` uses
//!   `hy = 1/(rows-1)`. Boundary vertices take no draws and never move.
//!
//! `jitter < 0.5` keeps every vertex strictly inside its cell neighborhood,
//! so cells cannot invert.

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Triangle, Vertex};
use crate::rng::SplitMix64;

/// Generates the jittered unit-square grid described in the module docs.
pub fn generate_synthetic(rows: usize, cols: usize, jitter: f64, seed: u64) -> Result<Mesh> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid needs at least 2x2 vertices, got {rows}x{cols}"
        )));
    }
    if !jitter.is_finite() || !(0.0..0.5).contains(&jitter) {
        return Err(Error::InvalidConfig(format!(
            "jitter must lie in [0, 0.5), got {jitter}"
        )));
    }

    let hx = 1.0 / (cols - 1) as f64;
    let hy = 1.0 / (rows - 1) as f64;
    let mut rng = SplitMix64::new(seed);

    let mut vertices = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let interior = r > 0 && r < rows - 1 && c > 0 && c < cols - 1;
            let mut x = c as f64 * hx;
            let mut y = r as f64 * hy;
            if interior && jitter > 0.0 {
                x += (2.0 * rng.next_unit() - 1.0) * jitter * hx;
                y += (2.0 * rng.next_unit() - 1.0) * jitter * hy;
            } else if interior {
                // keep the stream position independent of the jitter value
                rng.next_u64();
                rng.next_u64();
            }
            vertices.push(Vertex::new(x, y, !interior));
        }
    }

    let mut triangles = Vec::with_capacity(2 * (rows - 1) * (cols - 1));
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            let v00 = r * cols + c;
            let v01 = v00 + 1;
            let v10 = v00 + cols;
            let v11 = v10 + 1;
            triangles.push(Triangle::new(v00, v01, v11));
            triangles.push(Triangle::new(v00, v11, v10));
        }
    }

    Mesh::new(vertices, triangles)
}
