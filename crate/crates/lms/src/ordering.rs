//! Vertex ordering strategies and mesh relabeling.
//!
//! An ordering is a permutation `perm` with `perm[new_position] =
//! old_vertex_index`. Four strategies are provided: the identity (`ori`), a
//! seeded Fisher-Yates shuffle (`random`), breadth-first traversal (`bfs`),
//! and the reuse-distance-reducing order (`rdr`), a quality-greedy walk that
//! appends each visited vertex's not-yet-ordered neighbors by increasing
//! quality.
//!
//! All strategies are deterministic functions of their declared inputs. Ties
//! on quality are broken by ascending original vertex index.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::{Adjacency, Mesh};
use crate::rng::SplitMix64;

/// A validated permutation of vertex indices; `perm()[k]` is the old index of
/// the vertex stored at new position `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    perm: Vec<usize>,
}

impl VertexOrdering {
    /// Wraps a permutation, rejecting anything non-bijective.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &old in &perm {
            if old >= n || seen[old] {
                return Err(Error::InvalidConfig(format!(
                    "not a permutation of 0..{n}: index {old} repeated or out of range"
                )));
            }
            seen[old] = true;
        }
        Ok(VertexOrdering { perm })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrdering {
            perm: (0..n).collect(),
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `inverse()[old_index]` = new position of that vertex.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (new, &old) in self.perm.iter().enumerate() {
            inv[old] = new;
        }
        inv
    }

    /// FNV-1a over the little-endian permutation entries, for quick
    /// reproducibility checks.
    pub fn checksum(&self) -> u64 {
        let mut hash = 0xcbf2_9ce4_8422_2325u64;
        for &old in &self.perm {
            for byte in (old as u64).to_le_bytes() {
                hash ^= byte as u64;
                hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        hash
    }

    /// One-column text form: the count, then one old index per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(8 * (self.perm.len() + 1));
        out.push_str(&format!("{}\n", self.perm.len()));
        for &old in &self.perm {
            out.push_str(&format!("{old}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing ordering length"))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, format!("invalid ordering length: {first:?}")))?;
        let mut perm = Vec::with_capacity(n);
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let old: usize = line
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("invalid index: {line:?}")))?;
            perm.push(old);
        }
        if perm.len() != n {
            return Err(Error::parse(
                text.lines().count(),
                format!("declared {n} entries but found {}", perm.len()),
            ));
        }
        VertexOrdering::new(perm)
    }
}

/// The four ordering strategies exposed by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderingStrategy {
    Original,
    Random,
    Bfs,
    Rdr,
}

impl OrderingStrategy {
    pub const ALL: [OrderingStrategy; 4] = [
        OrderingStrategy::Original,
        OrderingStrategy::Random,
        OrderingStrategy::Bfs,
        OrderingStrategy::Rdr,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OrderingStrategy::Original => "ori",
            OrderingStrategy::Random => "random",
            OrderingStrategy::Bfs => "bfs",
            OrderingStrategy::Rdr => "rdr",
        }
    }
}

impl FromStr for OrderingStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ori" => Ok(OrderingStrategy::Original),
            "random" => Ok(OrderingStrategy::Random),
            "bfs" => Ok(OrderingStrategy::Bfs),
            "rdr" => Ok(OrderingStrategy::Rdr),
            other => Err(Error::InvalidConfig(format!(
                "unknown ordering strategy {other:?} (expected ori, random, bfs or rdr)"
            ))),
        }
    }
}

impl std::fmt::Display for OrderingStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The mesh's own storage order (identity permutation).
pub fn original_order(mesh: &Mesh) -> VertexOrdering {
    VertexOrdering::identity(mesh.vertex_count())
}

/// Seeded Fisher-Yates shuffle of the identity: for `i` from `n-1` down to 1,
/// swap position `i` with position `next_u64() mod (i+1)`.
pub fn random_order(n: usize, seed: u64) -> VertexOrdering {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(seed);
    for i in (1..n).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    VertexOrdering { perm }
}

/// Breadth-first traversal order. Neighbors are enqueued in ascending index
/// order; when a connected component is exhausted the traversal restarts from
/// the smallest-index unvisited vertex, so the result always covers all
/// vertices.
pub fn bfs_order(
    mesh: &Mesh,
    adjacency: &Adjacency,
    seed_vertex: Option<usize>,
) -> Result<VertexOrdering> {
    use std::collections::VecDeque;

    let n = mesh.vertex_count();
    if let Some(s) = seed_vertex {
        if s >= n {
            return Err(Error::InvalidConfig(format!(
                "BFS seed vertex {s} out of range (mesh has {n} vertices)"
            )));
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();

    let start = |v: usize, order: &mut Vec<usize>, visited: &mut Vec<bool>, queue: &mut VecDeque<usize>| {
        visited[v] = true;
        order.push(v);
        queue.push_back(v);
    };

    if n > 0 {
        start(seed_vertex.unwrap_or(0), &mut order, &mut visited, &mut queue);
    }
    let mut next_restart = 0;
    loop {
        while let Some(v) = queue.pop_front() {
            for &u in &adjacency.neighbors[v] {
                if !visited[u] {
                    start(u, &mut order, &mut visited, &mut queue);
                }
            }
        }
        while next_restart < n && visited[next_restart] {
            next_restart += 1;
        }
        if next_restart == n {
            break;
        }
        start(next_restart, &mut order, &mut visited, &mut queue);
    }
    Ok(VertexOrdering { perm: order })
}

fn sort_by_quality(list: &mut [usize], qualities: &[f64]) {
    list.sort_unstable_by(|&a, &b| {
        qualities[a]
            .total_cmp(&qualities[b])
            .then_with(|| a.cmp(&b))
    });
}

/// Reuse-distance-reducing order.
///
/// The outer loop visits interior vertices by increasing quality. Each
/// not-yet-processed vertex is appended (if not already appended) and its
/// not-yet-processed neighbors, sorted by increasing quality, are appended
/// after it; the walk then advances through the worst-quality unprocessed
/// neighbor and repeats until the neighbor list runs dry. Two flag arrays
/// track the state: `appended` guards against double placement, `processed`
/// guards against revisiting a pivot. Vertices the walk never reaches are
/// appended at the end in ascending index so the result is always a full
/// permutation.
pub fn rdr_order(mesh: &Mesh, adjacency: &Adjacency, qualities: &[f64]) -> Result<VertexOrdering> {
    let n = mesh.vertex_count();
    if qualities.len() != n {
        return Err(Error::InvalidConfig(format!(
            "qualities length {} does not match vertex count {n}",
            qualities.len()
        )));
    }

    let mut perm = Vec::with_capacity(n);
    let mut processed = vec![false; n];
    let mut appended = vec![false; n];

    let unprocessed_neighbors = |v: usize, processed: &[bool]| -> Vec<usize> {
        let mut list: Vec<usize> = adjacency.neighbors[v]
            .iter()
            .copied()
            .filter(|&u| !processed[u])
            .collect();
        sort_by_quality(&mut list, qualities);
        list
    };

    let mut outer = mesh.interior_vertices();
    sort_by_quality(&mut outer, qualities);

    for &i in &outer {
        if processed[i] {
            continue;
        }
        if !appended[i] {
            appended[i] = true;
            perm.push(i);
        }
        processed[i] = true;
        let mut walk = unprocessed_neighbors(i, &processed);
        while !walk.is_empty() {
            for &j in &walk {
                if !appended[j] {
                    appended[j] = true;
                    perm.push(j);
                }
            }
            let pivot = walk[0];
            processed[pivot] = true;
            walk = unprocessed_neighbors(pivot, &processed);
        }
    }

    // Boundary-only pockets and isolated components never enter the walk.
    for (v, done) in appended.iter_mut().enumerate() {
        if !*done {
            *done = true;
            perm.push(v);
        }
    }

    debug_assert!(outer.iter().all(|&v| processed[v]));
    VertexOrdering::new(perm)
}

/// Computes the ordering for a strategy. `seed` feeds the random strategy,
/// `qualities` the reuse-distance-reducing one; BFS starts from vertex 0.
pub fn order_by_strategy(
    strategy: OrderingStrategy,
    mesh: &Mesh,
    adjacency: &Adjacency,
    qualities: &[f64],
    seed: u64,
) -> Result<VertexOrdering> {
    match strategy {
        OrderingStrategy::Original => Ok(original_order(mesh)),
        OrderingStrategy::Random => Ok(random_order(mesh.vertex_count(), seed)),
        OrderingStrategy::Bfs => bfs_order(mesh, adjacency, None),
        OrderingStrategy::Rdr => rdr_order(mesh, adjacency, qualities),
    }
}

/// Relabels a mesh by an ordering: vertex at new position `k` is the old
/// vertex `perm[k]`; triangle corners are remapped through the inverse.
pub fn apply_ordering(mesh: &Mesh, ordering: &VertexOrdering) -> Result<Mesh> {
    if ordering.len() != mesh.vertex_count() {
        return Err(Error::InvalidConfig(format!(
            "ordering length {} does not match vertex count {}",
            ordering.len(),
            mesh.vertex_count()
        )));
    }
    let vertices = ordering
        .perm()
        .iter()
        .map(|&old| mesh.vertices[old])
        .collect();
    let inv = ordering.inverse();
    let triangles = mesh
        .triangles
        .iter()
        .map(|t| crate::mesh::Triangle::new(inv[t.a], inv[t.b], inv[t.c]))
        .collect();
    Mesh::new(vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_adjacency, global_quality, Triangle, Vertex};
    use crate::synth::generate_synthetic;

    #[test]
    fn original_is_identity() {
        let m = generate_synthetic(3, 3, 0.0, 0).unwrap();
        assert_eq!(original_order(&m).perm(), &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        let empty = crate::mesh::Mesh::new(vec![], vec![]).unwrap();
        assert!(original_order(&empty).is_empty());
    }

    #[test]
    fn random_is_deterministic_and_bijective() {
        assert_eq!(random_order(1, 99).perm(), &[0]);
        let a = random_order(10_000, 5);
        let b = random_order(10_000, 5);
        assert_eq!(a, b);
        assert_ne!(a, random_order(10_000, 6));
        // VertexOrdering::new re-validates bijectivity
        VertexOrdering::new(a.perm().to_vec()).unwrap();
        assert_ne!(a.perm(), VertexOrdering::identity(10_000).perm());
    }

    fn path_graph(n: usize) -> (Mesh, Adjacency) {
        // adjacency of a path realized directly; geometry is irrelevant here
        let vertices = (0..n).map(|i| Vertex::new(i as f64, 0.0, true)).collect();
        let mesh = Mesh {
            vertices,
            triangles: vec![],
        };
        let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n.saturating_sub(1) {
            neighbors[i].push(i + 1);
            neighbors[i + 1].push(i);
        }
        for l in &mut neighbors {
            l.sort_unstable();
        }
        let adj = Adjacency {
            neighbors,
            attached: vec![Vec::new(); n],
        };
        (mesh, adj)
    }

    #[test]
    fn bfs_path_and_star() {
        let (mesh, adj) = path_graph(4);
        assert_eq!(bfs_order(&mesh, &adj, Some(0)).unwrap().perm(), &[0, 1, 2, 3]);

        let star = Adjacency {
            neighbors: vec![
                vec![1, 2, 3, 4, 5],
                vec![0],
                vec![0],
                vec![0],
                vec![0],
                vec![0],
            ],
            attached: vec![Vec::new(); 6],
        };
        let mesh = Mesh {
            vertices: vec![Vertex::new(0.0, 0.0, true); 6],
            triangles: vec![],
        };
        assert_eq!(bfs_order(&mesh, &star, None).unwrap().perm(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn bfs_restarts_across_components() {
        let neighbors = vec![vec![1], vec![0], vec![3], vec![2]];
        let adj = Adjacency {
            neighbors,
            attached: vec![Vec::new(); 4],
        };
        let mesh = Mesh {
            vertices: vec![Vertex::new(0.0, 0.0, true); 4],
            triangles: vec![],
        };
        assert_eq!(bfs_order(&mesh, &adj, Some(0)).unwrap().perm(), &[0, 1, 2, 3]);
    }

    #[test]
    fn bfs_seed_out_of_range() {
        let (mesh, adj) = path_graph(3);
        assert!(bfs_order(&mesh, &adj, Some(3)).is_err());
    }

    /// The four-vertex fan: interior vertex c surrounded by a, b, d (K4).
    /// With qualities c=0.3, b=0.5, d=0.7, a=0.9 the order must start
    /// [c, b, d, a]: c is the only interior vertex, then its neighbors by
    /// increasing quality, then the walk continues from b finding everything
    /// already placed.
    #[test]
    fn rdr_hand_traced_fan() {
        let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
        let vertices = vec![
            Vertex::new(1.0, 0.0, true),    // a
            Vertex::new(-0.5, 0.87, true),  // b
            Vertex::new(0.0, 0.0, false),   // c (interior)
            Vertex::new(-0.5, -0.87, true), // d
        ];
        let triangles = vec![
            Triangle::new(c, a, b),
            Triangle::new(c, b, d),
            Triangle::new(c, d, a),
        ];
        let mesh = Mesh::new(vertices, triangles).unwrap();
        let adj = build_adjacency(&mesh).unwrap();
        let mut qualities = vec![0.0; 4];
        qualities[a] = 0.9;
        qualities[b] = 0.5;
        qualities[c] = 0.3;
        qualities[d] = 0.7;
        let ord = rdr_order(&mesh, &adj, &qualities).unwrap();
        assert_eq!(ord.perm(), &[c, b, d, a]);
    }

    #[test]
    fn rdr_equal_qualities_tie_break_by_index() {
        let m = generate_synthetic(4, 4, 0.0, 0).unwrap();
        let adj = build_adjacency(&m).unwrap();
        let qualities = vec![0.5; m.vertex_count()];
        let ord = rdr_order(&m, &adj, &qualities).unwrap();
        assert_eq!(ord.len(), m.vertex_count());
        // outer loop starts from interior vertex 5 (smallest index on ties)
        assert_eq!(ord.perm()[0], 5);
    }

    #[test]
    fn rdr_quality_length_mismatch() {
        let m = generate_synthetic(3, 3, 0.0, 0).unwrap();
        let adj = build_adjacency(&m).unwrap();
        assert!(rdr_order(&m, &adj, &[0.5; 3]).is_err());
    }

    #[test]
    fn rdr_covers_unreached_vertices() {
        // no interior vertices at all: everything lands in the tail append
        let m = generate_synthetic(2, 2, 0.0, 0).unwrap();
        let adj = build_adjacency(&m).unwrap();
        let ord = rdr_order(&m, &adj, &[0.9, 0.1, 0.4, 0.2]).unwrap();
        assert_eq!(ord.perm(), &[0, 1, 2, 3]);
    }

    #[test]
    fn apply_identity_is_noop() {
        let m = generate_synthetic(5, 5, 0.2, 3).unwrap();
        let out = apply_ordering(&m, &original_order(&m)).unwrap();
        assert_eq!(m, out);
    }

    #[test]
    fn apply_then_inverse_round_trips() {
        let m = generate_synthetic(6, 4, 0.25, 11).unwrap();
        let sigma = random_order(m.vertex_count(), 77);
        let forward = apply_ordering(&m, &sigma).unwrap();
        let inverse = VertexOrdering::new(sigma.inverse()).unwrap();
        assert_eq!(apply_ordering(&forward, &inverse).unwrap(), m);
    }

    #[test]
    fn relabeling_preserves_global_quality() {
        let m = generate_synthetic(7, 7, 0.3, 21).unwrap();
        let adj = build_adjacency(&m).unwrap();
        let q0 = global_quality(&m, &adj).unwrap();
        let relabeled = apply_ordering(&m, &random_order(m.vertex_count(), 5)).unwrap();
        let adj2 = build_adjacency(&relabeled).unwrap();
        let q1 = global_quality(&relabeled, &adj2).unwrap();
        assert!((q0 - q1).abs() < 1e-12);
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let m = generate_synthetic(3, 3, 0.0, 0).unwrap();
        let short = VertexOrdering::identity(4);
        assert!(apply_ordering(&m, &short).is_err());
    }

    #[test]
    fn ordering_validation_rejects_duplicates() {
        assert!(VertexOrdering::new(vec![0, 1, 1]).is_err());
        assert!(VertexOrdering::new(vec![0, 3]).is_err());
        VertexOrdering::new(vec![2, 0, 1]).unwrap();
    }

    #[test]
    fn text_round_trip() {
        let ord = random_order(37, 4);
        let text = ord.to_text();
        assert_eq!(VertexOrdering::from_text(&text).unwrap(), ord);
        assert!(VertexOrdering::from_text("3\n0\n1\n").is_err());
        assert!(VertexOrdering::from_text("2\n0\n0\n").is_err());
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in OrderingStrategy::ALL {
            assert_eq!(s.name().parse::<OrderingStrategy>().unwrap(), s);
        }
        assert!("fancy".parse::<OrderingStrategy>().is_err());
    }

    #[test]
    fn checksum_is_stable() {
        let a = random_order(100, 8);
        assert_eq!(a.checksum(), random_order(100, 8).checksum());
        assert_ne!(a.checksum(), random_order(100, 9).checksum());
    }
}
