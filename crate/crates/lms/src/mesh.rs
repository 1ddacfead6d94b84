//! Mesh domain types, adjacency construction, boundary classification and the
//! edge-length-ratio quality metric.
//!
//! Vertices are indexed 0-based everywhere inside the crate; file formats that
//! use 1-based indices are translated at the I/O boundary.

use crate::error::{Error, Result};

/// A 2D mesh vertex. `boundary` vertices are pinned: smoothing never moves
/// them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub x: f64,
    pub y: f64,
    pub boundary: bool,
}

impl Vertex {
    pub fn new(x: f64, y: f64, boundary: bool) -> Self {
        Vertex { x, y, boundary }
    }

    pub fn pos(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

/// A linear triangle referencing three distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Triangle {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        Triangle { a, b, c }
    }

    pub fn corners(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }
}

/// An unstructured 2D triangle mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vertex>,
    pub triangles: Vec<Triangle>,
}

impl Mesh {
    /// Builds a mesh and checks the structural invariants: finite
    /// coordinates, triangle corners in range and pairwise distinct.
    pub fn new(vertices: Vec<Vertex>, triangles: Vec<Triangle>) -> Result<Self> {
        let n = vertices.len();
        for (i, v) in vertices.iter().enumerate() {
            if !v.x.is_finite() || !v.y.is_finite() {
                return Err(Error::InvalidMesh(format!(
                    "vertex {i} has non-finite coordinates ({}, {})",
                    v.x, v.y
                )));
            }
        }
        for (t, tri) in triangles.iter().enumerate() {
            let [a, b, c] = tri.corners();
            if a >= n || b >= n || c >= n {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} references vertex out of range (mesh has {n} vertices)"
                )));
            }
            if a == b || b == c || a == c {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} has repeated corners ({a}, {b}, {c})"
                )));
            }
        }
        Ok(Mesh {
            vertices,
            triangles,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Indices of vertices not flagged as boundary, in storage order.
    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| !self.vertices[v].boundary)
            .collect()
    }

    /// Fails if any vertex is referenced by no triangle. Loaders call this:
    /// quality is undefined for a vertex with no attached triangles, so such
    /// meshes are rejected before they enter the pipeline.
    pub fn require_no_isolated(&self) -> Result<()> {
        let mut referenced = vec![false; self.vertices.len()];
        for tri in &self.triangles {
            for c in tri.corners() {
                referenced[c] = true;
            }
        }
        if let Some(v) = referenced.iter().position(|r| !r) {
            return Err(Error::InvalidMesh(format!(
                "vertex {v} is isolated (referenced by no triangle)"
            )));
        }
        Ok(())
    }
}

/// Vertex-to-vertex and vertex-to-triangle incidence, with all lists sorted
/// ascending so downstream traversals are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    /// `neighbors[v]` = distinct vertices sharing a triangle edge with `v`.
    pub neighbors: Vec<Vec<usize>>,
    /// `attached[v]` = indices of triangles incident to `v`.
    pub attached: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }
}

/// Builds the adjacency structure of a mesh.
pub fn build_adjacency(mesh: &Mesh) -> Result<Adjacency> {
    let n = mesh.vertices.len();
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut attached: Vec<Vec<usize>> = vec![Vec::new(); n];

    for (t, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = tri.corners();
        if a >= n || b >= n || c >= n {
            return Err(Error::InvalidMesh(format!(
                "triangle {t} references vertex out of range (mesh has {n} vertices)"
            )));
        }
        for v in [a, b, c] {
            attached[v].push(t);
        }
        for (u, v) in [(a, b), (b, c), (c, a)] {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
    }

    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }
    for list in &mut attached {
        list.sort_unstable();
        list.dedup();
    }
    Ok(Adjacency {
        neighbors,
        attached,
    })
}

/// Derives boundary flags from topology: a vertex is boundary iff it is an
/// endpoint of an edge incident to exactly one triangle.
pub fn classify_boundary(mesh: &Mesh) -> Vec<bool> {
    use std::collections::HashMap;

    let mut edge_count: HashMap<(usize, usize), u32> = HashMap::new();
    for tri in &mesh.triangles {
        let [a, b, c] = tri.corners();
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let key = (u.min(v), u.max(v));
            *edge_count.entry(key).or_insert(0) += 1;
        }
    }

    let mut boundary = vec![false; mesh.vertices.len()];
    for ((u, v), count) in edge_count {
        if count == 1 {
            boundary[u] = true;
            boundary[v] = true;
        }
    }
    boundary
}

fn edge_len(p: (f64, f64), q: (f64, f64)) -> f64 {
    let dx = q.0 - p.0;
    let dy = q.1 - p.1;
    (dx * dx + dy * dy).sqrt()
}

/// Edge-length-ratio quality of a triangle: shortest edge over longest edge.
/// 1 for an equilateral triangle; 0 when exactly two points coincide. Errors
/// when all three points coincide (no longest edge to divide by).
pub fn triangle_quality(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> Result<f64> {
    let edges = [edge_len(p, q), edge_len(q, r), edge_len(r, p)];
    let min = edges.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = edges.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::Domain(
            "triangle quality undefined: all three points coincide".into(),
        ));
    }
    Ok(min / max)
}

fn triangle_quality_of(mesh: &Mesh, t: usize) -> Result<f64> {
    let tri = &mesh.triangles[t];
    triangle_quality(
        mesh.vertices[tri.a].pos(),
        mesh.vertices[tri.b].pos(),
        mesh.vertices[tri.c].pos(),
    )
}

/// Quality of a vertex: arithmetic mean of the qualities of its attached
/// triangles. Errors for an isolated vertex.
pub fn vertex_quality(v: usize, mesh: &Mesh, adjacency: &Adjacency) -> Result<f64> {
    let attached = &adjacency.attached[v];
    if attached.is_empty() {
        return Err(Error::Domain(format!(
            "vertex {v} has no attached triangles; quality undefined"
        )));
    }
    let mut sum = 0.0;
    for &t in attached {
        sum += triangle_quality_of(mesh, t)?;
    }
    Ok(sum / attached.len() as f64)
}

/// Qualities of all vertices, in storage order.
pub fn vertex_qualities(mesh: &Mesh, adjacency: &Adjacency) -> Result<Vec<f64>> {
    let mut tri_quality = Vec::with_capacity(mesh.triangles.len());
    for t in 0..mesh.triangles.len() {
        tri_quality.push(triangle_quality_of(mesh, t)?);
    }
    let mut out = Vec::with_capacity(mesh.vertices.len());
    for v in 0..mesh.vertices.len() {
        let attached = &adjacency.attached[v];
        if attached.is_empty() {
            return Err(Error::Domain(format!(
                "vertex {v} has no attached triangles; quality undefined"
            )));
        }
        let sum: f64 = attached.iter().map(|&t| tri_quality[t]).sum();
        out.push(sum / attached.len() as f64);
    }
    Ok(out)
}

/// Global mesh quality: mean over the per-vertex qualities of all vertices,
/// boundary vertices included.
pub fn global_quality(mesh: &Mesh, adjacency: &Adjacency) -> Result<f64> {
    let qualities = vertex_qualities(mesh, adjacency)?;
    Ok(mean(&qualities))
}

/// Arithmetic mean of a nonempty slice.
pub(crate) fn mean(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    values.iter().sum::<f64>() / values.len() as f64
}
