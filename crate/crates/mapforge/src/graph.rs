//! Simple and multi graphs with exact distance, eccentricity and diameter
//! computations.
//!
//! The exact diameter uses an eccentricity-pruned search in the iFUB style:
//! a double sweep supplies the lower bound and a BFS tree from a central
//! vertex orders the candidates; vertices are examined by decreasing level
//! and the scan stops once two times the current level cannot beat the best
//! eccentricity seen. Plain all-pairs BFS stays available as the oracle for
//! small instances.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    Disconnected,
    LoopInSimpleGraph,
    ParallelEdgeInSimpleGraph,
    VertexOutOfRange,
    MalformedInput { position: usize, message: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Disconnected => write!(f, "graph is not connected"),
            GraphError::LoopInSimpleGraph => write!(f, "loop edge in simple graph"),
            GraphError::ParallelEdgeInSimpleGraph => {
                write!(f, "parallel edge in simple graph")
            }
            GraphError::VertexOutOfRange => write!(f, "vertex id out of range"),
            GraphError::MalformedInput { position, message } => {
                write!(f, "malformed input at line {position}: {message}")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// An undirected graph over dense vertex ids `0..n`. In multigraph mode
/// loops and parallel edges are representable; simple mode rejects both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    multi: bool,
    adj_off: Vec<u32>,
    adj: Vec<u32>,
}

impl SimpleGraph {
    pub fn new_simple(n: usize, edges: Vec<(u32, u32)>) -> Result<SimpleGraph, GraphError> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::VertexOutOfRange);
            }
            if u == v {
                return Err(GraphError::LoopInSimpleGraph);
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::ParallelEdgeInSimpleGraph);
            }
        }
        Ok(Self::build(n, edges, false))
    }

    pub fn new_multi(n: usize, edges: Vec<(u32, u32)>) -> Result<SimpleGraph, GraphError> {
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::VertexOutOfRange);
            }
        }
        Ok(Self::build(n, edges, true))
    }

    fn build(n: usize, edges: Vec<(u32, u32)>, multi: bool) -> SimpleGraph {
        let mut deg = vec![0u32; n];
        for &(u, v) in &edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut adj_off = vec![0u32; n + 1];
        for i in 0..n {
            adj_off[i + 1] = adj_off[i] + deg[i];
        }
        let mut cursor: Vec<u32> = adj_off[..n].to_vec();
        let mut adj = vec![0u32; edges.len() * 2];
        for &(u, v) in &edges {
            adj[cursor[u as usize] as usize] = v;
            cursor[u as usize] += 1;
            adj[cursor[v as usize] as usize] = u;
            cursor[v as usize] += 1;
        }
        SimpleGraph {
            n,
            edges,
            multi,
            adj_off,
            adj,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn is_multi(&self) -> bool {
        self.multi
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[self.adj_off[v as usize] as usize..self.adj_off[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    /// Simplification: drop loops and collapse parallel edges.
    pub fn simplified(&self) -> SimpleGraph {
        let mut set = std::collections::BTreeSet::new();
        for &(u, v) in &self.edges {
            if u != v {
                set.insert((u.min(v), u.max(v)));
            }
        }
        Self::build(self.n, set.into_iter().collect(), false)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        bfs_raw(self, 0).iter().all(|&d| d != u32::MAX)
    }

    /// Text edge-list format: header `n m`, then one `u v` line per edge,
    /// edges written sorted so the encoding is byte-stable.
    pub fn to_edge_list(&self) -> String {
        let mut lines: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        lines.sort();
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in lines {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_edge_list(input: &str, multi: bool) -> Result<SimpleGraph, GraphError> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or(GraphError::MalformedInput {
            position: 1,
            message: "missing header".into(),
        })?;
        let mut it = header.split_whitespace();
        let parse = |tok: Option<&str>, lineno: usize| -> Result<usize, GraphError> {
            tok.and_then(|t| t.parse().ok())
                .ok_or(GraphError::MalformedInput {
                    position: lineno,
                    message: "expected integer".into(),
                })
        };
        let n = parse(it.next(), 1)?;
        let m = parse(it.next(), 1)?;
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u = parse(it.next(), i + 1)? as u32;
            let v = parse(it.next(), i + 1)? as u32;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::MalformedInput {
                position: 1,
                message: format!("header promises {m} edges, found {}", edges.len()),
            });
        }
        if multi {
            SimpleGraph::new_multi(n, edges)
        } else {
            SimpleGraph::new_simple(n, edges)
        }
    }
}

fn bfs_raw(g: &SimpleGraph, src: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n];
    let mut queue = std::collections::VecDeque::new();
    dist[src as usize] = 0;
    queue.push_back(src);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        for &w in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dv + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Exact single-source distances. Errors if some vertex is unreachable.
pub fn bfs_distances(g: &SimpleGraph, src: u32) -> Result<Vec<u32>, GraphError> {
    if src as usize >= g.n {
        return Err(GraphError::VertexOutOfRange);
    }
    let dist = bfs_raw(g, src);
    if dist.iter().any(|&d| d == u32::MAX) {
        return Err(GraphError::Disconnected);
    }
    Ok(dist)
}

pub fn eccentricity(g: &SimpleGraph, v: u32) -> Result<u32, GraphError> {
    Ok(*bfs_distances(g, v)?.iter().max().unwrap())
}

/// Double sweep: returns (lower bound, endpoint, a midpoint of the found
/// near-diametral path).
fn double_sweep(g: &SimpleGraph, start: u32) -> Result<(u32, u32, u32), GraphError> {
    let d0 = bfs_distances(g, start)?;
    let a = (0..g.n as u32).max_by_key(|&v| d0[v as usize]).unwrap();
    // Second sweep with parents so the midpoint can be recovered.
    let mut dist = vec![u32::MAX; g.n];
    let mut parent = vec![u32::MAX; g.n];
    let mut queue = std::collections::VecDeque::new();
    dist[a as usize] = 0;
    queue.push_back(a);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                parent[w as usize] = v;
                queue.push_back(w);
            }
        }
    }
    let b = (0..g.n as u32).max_by_key(|&v| dist[v as usize]).unwrap();
    let lb = dist[b as usize];
    let mut mid = b;
    for _ in 0..lb / 2 {
        mid = parent[mid as usize];
    }
    Ok((lb, b, mid))
}

/// Certified bounds `lower <= diameter <= upper`: lower from a double
/// sweep, upper as twice the eccentricity of the sweep midpoint.
pub fn diameter_bounds(g: &SimpleGraph) -> Result<(u32, u32), GraphError> {
    if g.n <= 1 {
        return Ok((0, 0));
    }
    let (lb, _b, mid) = double_sweep(g, 0)?;
    let ecc_mid = eccentricity(g, mid)?;
    // ecc(mid) is itself a lower bound; 2*ecc(mid) always dominates the
    // diameter by the triangle inequality.
    Ok((lb.max(ecc_mid), 2 * ecc_mid))
}

/// Exact diameter via eccentricity-pruned search.
pub fn diameter_exact(g: &SimpleGraph) -> Result<u32, GraphError> {
    if g.n <= 1 {
        return Ok(0);
    }
    let (mut lb, b, mid) = double_sweep(g, 0)?;
    lb = lb.max(eccentricity(g, b)?);
    let dist_mid = bfs_distances(g, mid)?;
    let ecc_mid = *dist_mid.iter().max().unwrap();
    lb = lb.max(ecc_mid);
    // Bucket vertices by level below mid; scan levels downward. Any vertex
    // at level i has eccentricity at most 2i, so once 2i <= lb nothing
    // deeper can improve the bound.
    let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); ecc_mid as usize + 1];
    for v in 0..g.n as u32 {
        by_level[dist_mid[v as usize] as usize].push(v);
    }
    let mut i = ecc_mid;
    while i > 0 && 2 * i > lb {
        for &v in &by_level[i as usize] {
            let e = eccentricity(g, v)?;
            lb = lb.max(e);
            if 2 * i <= lb {
                break;
            }
        }
        i -= 1;
    }
    Ok(lb)
}

/// All-pairs BFS diameter, the test oracle for small inputs.
pub fn diameter_all_pairs(g: &SimpleGraph) -> Result<u32, GraphError> {
    let mut best = 0;
    for v in 0..g.n as u32 {
        best = best.max(eccentricity(g, v)?);
    }
    Ok(best)
}
