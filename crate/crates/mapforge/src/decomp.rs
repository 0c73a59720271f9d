//! Core, block, and brick decompositions.
//!
//! * `two_connected_core`: Tutte's core decomposition of a rooted map into
//!   its maximal 2-connected submap containing the root edge plus the
//!   pieces hanging at the core's corners, with an exact reassembly.
//! * `block_decomposition`: blocks (maximal 2-connected subgraphs) of a
//!   connected graph and the bipartite block-vertex incidence tree.
//! * `rmt_decomposition`: Tutte's split decomposition of a 2-connected
//!   graph into multiedge, ring, and 3-connected bricks articulated by
//!   virtual edges, computed by iterated split-candidate search and
//!   certified against a brute-force oracle.

use crate::graph::{bfs_distances, GraphError, SimpleGraph};
use crate::map::{alpha, RotationMap};
use std::collections::{HashMap, HashSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompError {
    Disconnected,
    NotTwoConnected,
    TooFewEdges,
    TooLarge { limit: String },
    InvalidRoot,
}

impl fmt::Display for DecompError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompError::Disconnected => write!(f, "input graph is not connected"),
            DecompError::NotTwoConnected => write!(f, "input graph is not 2-connected"),
            DecompError::TooFewEdges => write!(f, "split decomposition needs >= 3 edges"),
            DecompError::TooLarge { limit } => write!(f, "input too large for oracle ({limit})"),
            DecompError::InvalidRoot => write!(f, "root edge id invalid"),
        }
    }
}

impl std::error::Error for DecompError {}

// ---------------------------------------------------------------------
// Blocks of a multigraph.
// ---------------------------------------------------------------------

/// Edge ids grouped into blocks: maximal 2-connected subgraphs, bridges,
/// and loops (each loop is its own block).
pub fn edge_blocks(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u == v {
            blocks.push(vec![i as u32]);
            continue;
        }
        adj[u as usize].push((v, i as u32));
        adj[v as usize].push((u, i as u32));
    }
    let mut disc = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut visited = vec![false; n];
    let mut timer = 1u32;
    let mut estack: Vec<u32> = Vec::new();
    for start in 0..n {
        if visited[start] || adj[start].is_empty() {
            continue;
        }
        let mut stack: Vec<(u32, u32, usize)> = vec![(start as u32, u32::MAX, 0)];
        visited[start] = true;
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            let vu = v as usize;
            if *idx < adj[vu].len() {
                let (to, eid) = adj[vu][*idx];
                *idx += 1;
                if eid == pe {
                    continue;
                }
                let tu = to as usize;
                if visited[tu] {
                    if disc[tu] < disc[vu] {
                        estack.push(eid);
                        low[vu] = low[vu].min(disc[tu]);
                    }
                } else {
                    estack.push(eid);
                    visited[tu] = true;
                    disc[tu] = timer;
                    low[tu] = timer;
                    timer += 1;
                    stack.push((to, eid, 0));
                }
            } else {
                let (_, ve, _) = stack.pop().unwrap();
                if let Some(&(p, _, _)) = stack.last() {
                    let pu = p as usize;
                    low[pu] = low[pu].min(low[vu]);
                    if low[vu] >= disc[pu] {
                        // One block: edges down to and including the tree
                        // edge into v.
                        let mut blk = Vec::new();
                        loop {
                            let top = estack.pop().expect("edge stack holds the block");
                            blk.push(top);
                            if top == ve {
                                break;
                            }
                        }
                        blocks.push(blk);
                    }
                }
            }
        }
    }
    blocks
}

/// Block-vertex incidence tree of a connected graph: nodes are the
/// vertices (0..n) followed by one node per block; edges join each block
/// to the vertices it contains.
#[derive(Debug, Clone)]
pub struct BvTree {
    pub n_vertices: usize,
    /// Vertex sets of the blocks.
    pub block_vertices: Vec<Vec<u32>>,
    /// Edge ids of the blocks (partition of the edge set).
    pub block_edges: Vec<Vec<u32>>,
    /// The incidence tree itself: node ids 0..n are V-nodes, n.. are B-nodes.
    pub tree: SimpleGraph,
}

pub fn block_decomposition(g: &SimpleGraph) -> Result<BvTree, DecompError> {
    if !g.is_connected() {
        return Err(DecompError::Disconnected);
    }
    let n = g.n_vertices();
    let blocks = edge_blocks(n, g.edges());
    let mut block_vertices = Vec::with_capacity(blocks.len());
    let mut tree_edges = Vec::new();
    for (bi, blk) in blocks.iter().enumerate() {
        let mut vs: Vec<u32> = blk
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.edges()[e as usize];
                [u, v]
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        for &v in &vs {
            tree_edges.push((v, (n + bi) as u32));
        }
        block_vertices.push(vs);
    }
    let tree = SimpleGraph::new_simple(n + blocks.len(), tree_edges)
        .expect("incidences are simple");
    debug_assert!(tree.n_edges() == tree.n_vertices() - 1 || n == 1);
    Ok(BvTree {
        n_vertices: n,
        block_vertices,
        block_edges: blocks,
        tree,
    })
}

impl BvTree {
    /// Diameter of the incidence tree (0 for a single vertex).
    pub fn tree_diameter(&self) -> u32 {
        if self.tree.n_edges() == 0 {
            return 0;
        }
        crate::graph::diameter_exact(&self.tree).expect("Bv-tree is connected")
    }

    /// Diameter of each block as a subgraph.
    pub fn block_diameters(&self, g: &SimpleGraph) -> Vec<u32> {
        self.block_edges
            .iter()
            .zip(&self.block_vertices)
            .map(|(edges, vs)| {
                let mut reindex = HashMap::new();
                for (i, &v) in vs.iter().enumerate() {
                    reindex.insert(v, i as u32);
                }
                let es: Vec<(u32, u32)> = edges
                    .iter()
                    .map(|&e| {
                        let (u, v) = g.edges()[e as usize];
                        (reindex[&u], reindex[&v])
                    })
                    .collect();
                let sub = SimpleGraph::new_multi(vs.len(), es).unwrap();
                crate::graph::diameter_exact(&sub).expect("block is connected")
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("{\"blocks\":[");
        for (i, (vs, es)) in self
            .block_vertices
            .iter()
            .zip(&self.block_edges)
            .enumerate()
        {
            if i > 0 {
                s.push(',');
            }
            let mut es = es.clone();
            es.sort_unstable();
            s.push_str(&format!(
                "{{\"vertices\":{:?},\"edges\":{:?}}}",
                vs, es
            ));
        }
        s.push_str("]}");
        s.replace(' ', "")
    }
}

// ---------------------------------------------------------------------
// 2-connected core of a rooted map.
// ---------------------------------------------------------------------

/// Tutte core decomposition: the maximal 2-connected submap containing the
/// root edge, with the pieces indexed by the core's corners (the corner
/// after core half-edge `h` holds `pieces[h]`). Old half-edge ids are kept
/// as witnesses so reassembly is exact.
#[derive(Debug, Clone)]
pub struct CoreDecomposition {
    pub core: RotationMap,
    /// Original half-edge id of each core half-edge.
    pub core_old_ids: Vec<u32>,
    /// Piece at the corner after each core half-edge (empty map if none).
    pub pieces: Vec<RotationMap>,
    /// Original half-edge ids of each piece's half-edges.
    pub piece_old_ids: Vec<Vec<u32>>,
}

pub fn two_connected_core(m: &RotationMap) -> CoreDecomposition {
    assert!(m.n_edges() >= 1, "core of the vertex map is undefined");
    let n_half = m.n_half_edges();
    let blocks = edge_blocks(m.n_vertices(), &m.edge_endpoints());
    let root_edge = m.root() / 2;
    let core_edges: &Vec<u32> = blocks
        .iter()
        .find(|blk| blk.contains(&root_edge))
        .expect("root edge lies in some block");
    let mut in_core = vec![false; n_half];
    for &e in core_edges {
        in_core[2 * e as usize] = true;
        in_core[2 * e as usize + 1] = true;
    }
    // Re-index core halves preserving the pairing.
    let mut sorted_core: Vec<u32> = core_edges.clone();
    sorted_core.sort_unstable();
    let mut new_of_old: HashMap<u32, u32> = HashMap::new();
    let mut core_old_ids = Vec::with_capacity(2 * sorted_core.len());
    for (j, &e) in sorted_core.iter().enumerate() {
        new_of_old.insert(2 * e, 2 * j as u32);
        new_of_old.insert(2 * e + 1, 2 * j as u32 + 1);
        core_old_ids.push(2 * e);
        core_old_ids.push(2 * e + 1);
    }
    // Core rotation: next core half-edge around the vertex.
    let next_core = |h: u32| -> u32 {
        let mut g = m.sigma(h);
        while !in_core[g as usize] {
            g = m.sigma(g);
        }
        g
    };
    let mut core_sigma = vec![0u32; core_old_ids.len()];
    for (new_h, &old_h) in core_old_ids.iter().enumerate() {
        core_sigma[new_h] = new_of_old[&next_core(old_h)];
    }
    let core = RotationMap::build(core_sigma, new_of_old[&m.root()])
        .expect("core is a valid submap");

    // Pieces: the pocket after each core half-edge plus everything
    // reachable from it away from the core.
    let mut pieces = Vec::with_capacity(core_old_ids.len());
    let mut piece_old_ids = Vec::with_capacity(core_old_ids.len());
    for &old_h in &core_old_ids {
        // Pocket: sigma successors of old_h up to the next core half.
        let mut pocket = Vec::new();
        let mut g = m.sigma(old_h);
        while !in_core[g as usize] {
            pocket.push(g);
            g = m.sigma(g);
        }
        if pocket.is_empty() {
            pieces.push(RotationMap::build(Vec::new(), 0).unwrap());
            piece_old_ids.push(Vec::new());
            continue;
        }
        // Closure under alpha and sigma, never crossing core halves; at the
        // attachment vertex the pocket is a contiguous arc so sigma stays
        // inside it until the stop.
        let mut members: HashSet<u32> = pocket.iter().copied().collect();
        let mut stack: Vec<u32> = pocket.clone();
        while let Some(x) = stack.pop() {
            for y in [alpha(x), m.sigma(x)] {
                if !in_core[y as usize] && members.insert(y) {
                    stack.push(y);
                }
            }
        }
        // Re-index.
        let mut piece_edges: Vec<u32> = members.iter().map(|&h| h / 2).collect();
        piece_edges.sort_unstable();
        piece_edges.dedup();
        let mut p_new: HashMap<u32, u32> = HashMap::new();
        let mut olds = Vec::with_capacity(2 * piece_edges.len());
        for (j, &e) in piece_edges.iter().enumerate() {
            p_new.insert(2 * e, 2 * j as u32);
            p_new.insert(2 * e + 1, 2 * j as u32 + 1);
            olds.push(2 * e);
            olds.push(2 * e + 1);
        }
        let pocket_first = pocket[0];
        let pocket_last = *pocket.last().unwrap();
        let mut p_sigma = vec![0u32; olds.len()];
        for (new_h, &oh) in olds.iter().enumerate() {
            let target = if oh == pocket_last {
                pocket_first // close the attachment rotation into a cycle
            } else {
                m.sigma(oh)
            };
            p_sigma[new_h] = p_new[&target];
        }
        let piece = RotationMap::build(p_sigma, p_new[&pocket_first])
            .expect("piece is a valid map");
        pieces.push(piece);
        piece_old_ids.push(olds);
    }
    CoreDecomposition {
        core,
        core_old_ids,
        pieces,
        piece_old_ids,
    }
}

impl CoreDecomposition {
    /// Invert the decomposition, reproducing the original rotation system.
    pub fn reassemble(&self) -> RotationMap {
        let total: usize =
            self.core_old_ids.len() + self.piece_old_ids.iter().map(|v| v.len()).sum::<usize>();
        let mut sigma = vec![u32::MAX; total];
        for (new_h, &old_h) in self.core_old_ids.iter().enumerate() {
            let piece = &self.pieces[new_h];
            if piece.n_half_edges() == 0 {
                sigma[old_h as usize] =
                    self.core_old_ids[self.core.sigma(new_h as u32) as usize];
            } else {
                sigma[old_h as usize] = self.piece_old_ids[new_h][piece.root() as usize];
            }
        }
        for (corner, piece) in self.pieces.iter().enumerate() {
            if piece.n_half_edges() == 0 {
                continue;
            }
            let olds = &self.piece_old_ids[corner];
            // The attachment rotation was closed into a cycle; the half
            // whose sigma is the piece root re-opens toward the core.
            for h in 0..piece.n_half_edges() as u32 {
                let t = piece.sigma(h);
                sigma[olds[h as usize] as usize] = if t == piece.root() {
                    let next_core =
                        self.core_old_ids[self.core.sigma(corner as u32) as usize];
                    next_core
                } else {
                    olds[t as usize]
                };
            }
        }
        RotationMap::build(sigma, self.core_old_ids[self.core.root() as usize])
            .expect("reassembly is a valid map")
    }

    pub fn core_size(&self) -> usize {
        self.core.n_edges()
    }

    pub fn max_piece_diameter(&self) -> u32 {
        self.pieces
            .iter()
            .filter(|p| p.n_half_edges() > 0)
            .map(|p| {
                let g = crate::bijection::map_as_graph(p);
                crate::graph::diameter_exact(&g).expect("piece is connected")
            })
            .max()
            .unwrap_or(0)
    }
}

// ---------------------------------------------------------------------
// Tutte split decomposition (RMT-tree).
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrickKind {
    Ring,
    Multi,
    ThreeConnected,
}

impl BrickKind {
    pub fn letter(self) -> char {
        match self {
            BrickKind::Ring => 'R',
            BrickKind::Multi => 'M',
            BrickKind::ThreeConnected => 'T',
        }
    }
}

/// Edge of a brick: original edge id or virtual edge id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrickEdgeLabel {
    Real(u32),
    Virtual(u32),
}

#[derive(Debug, Clone, Copy)]
pub struct BrickEdge {
    pub u: u32,
    pub v: u32,
    pub label: BrickEdgeLabel,
}

#[derive(Debug, Clone)]
pub struct Brick {
    pub kind: BrickKind,
    pub edges: Vec<BrickEdge>,
}

impl Brick {
    pub fn vertices(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Diameter of the brick graph (virtual edges included).
    pub fn diameter(&self) -> u32 {
        let vs = self.vertices();
        let mut reindex = HashMap::new();
        for (i, &v) in vs.iter().enumerate() {
            reindex.insert(v, i as u32);
        }
        let es: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|e| (reindex[&e.u], reindex[&e.v]))
            .collect();
        let g = SimpleGraph::new_multi(vs.len(), es).unwrap();
        crate::graph::diameter_exact(&g).expect("brick is connected")
    }
}

/// The RMT-tree: bricks articulated by virtual edges, leaves being the
/// real edges of the input graph. Vertices keep their original ids.
#[derive(Debug, Clone)]
pub struct RmtTree {
    pub bricks: Vec<Brick>,
    /// Endpoints (in the original graph) of each virtual edge.
    pub virtual_pairs: Vec<(u32, u32)>,
    /// The two bricks matched by each virtual edge.
    pub virtual_bricks: Vec<(u32, u32)>,
    /// Brick containing each real edge.
    pub real_edge_brick: Vec<u32>,
    n_real_edges: usize,
}

struct PartEdge {
    u: u32,
    v: u32,
    label: BrickEdgeLabel,
}

/// Split-candidate search order, used to certify order-independence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOrder {
    First,
    Last,
}

pub fn rmt_decomposition(g: &SimpleGraph) -> Result<RmtTree, DecompError> {
    rmt_decomposition_with_order(g, SplitOrder::First)
}

pub fn rmt_decomposition_with_order(
    g: &SimpleGraph,
    order: SplitOrder,
) -> Result<RmtTree, DecompError> {
    if g.n_edges() < 3 {
        return Err(DecompError::TooFewEdges);
    }
    if !is_two_connected_graph(g.n_vertices(), g.edges()) {
        return Err(DecompError::NotTwoConnected);
    }
    let mut tree = RmtTree {
        bricks: Vec::new(),
        virtual_pairs: Vec::new(),
        virtual_bricks: Vec::new(),
        real_edge_brick: vec![u32::MAX; g.n_edges()],
        n_real_edges: g.n_edges(),
    };
    let part: Vec<PartEdge> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| PartEdge {
            u,
            v,
            label: BrickEdgeLabel::Real(i as u32),
        })
        .collect();
    let mut stack = vec![part];
    while let Some(part) = stack.pop() {
        match find_split(&part, order) {
            Some((e1_idx, u, v)) => {
                let virt_id = tree.virtual_pairs.len() as u32;
                tree.virtual_pairs.push((u.min(v), u.max(v)));
                tree.virtual_bricks.push((u32::MAX, u32::MAX));
                let mut in_e1 = vec![false; part.len()];
                for &i in &e1_idx {
                    in_e1[i] = true;
                }
                let mut g1 = Vec::with_capacity(e1_idx.len() + 1);
                let mut g2 = Vec::with_capacity(part.len() - e1_idx.len() + 1);
                for (i, e) in part.into_iter().enumerate() {
                    if in_e1[i] {
                        g1.push(e);
                    } else {
                        g2.push(e);
                    }
                }
                g1.push(PartEdge {
                    u,
                    v,
                    label: BrickEdgeLabel::Virtual(virt_id),
                });
                g2.push(PartEdge {
                    u,
                    v,
                    label: BrickEdgeLabel::Virtual(virt_id),
                });
                stack.push(g1);
                stack.push(g2);
            }
            None => {
                let brick_id = tree.bricks.len() as u32;
                let kind = classify_brick(&part);
                let edges: Vec<BrickEdge> = part
                    .iter()
                    .map(|e| BrickEdge {
                        u: e.u,
                        v: e.v,
                        label: e.label,
                    })
                    .collect();
                for e in &edges {
                    match e.label {
                        BrickEdgeLabel::Real(id) => {
                            tree.real_edge_brick[id as usize] = brick_id;
                        }
                        BrickEdgeLabel::Virtual(w) => {
                            let slot = &mut tree.virtual_bricks[w as usize];
                            if slot.0 == u32::MAX {
                                slot.0 = brick_id;
                            } else {
                                debug_assert_eq!(slot.1, u32::MAX);
                                slot.1 = brick_id;
                            }
                        }
                    }
                }
                tree.bricks.push(Brick { kind, edges });
            }
        }
    }
    debug_assert!(tree.virtual_bricks.iter().all(|&(a, b)| a != u32::MAX && b != u32::MAX));
    debug_assert_eq!(tree.bricks.len(), tree.virtual_pairs.len() + 1);
    Ok(tree)
}

/// Multigraph 2-connectivity of a whole graph on `n` vertices: every
/// vertex touched, connected, loopless, and (beyond two vertices) free of
/// cut vertices. Two vertices joined by parallel edges are 2-connected.
pub fn is_two_connected_graph(n: usize, edges: &[(u32, u32)]) -> bool {
    let touched: HashSet<u32> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    if touched.len() < n {
        return false;
    }
    is_two_connected_edge_induced(edges)
}

/// 2-connectivity of the subgraph induced by an edge set (only vertices
/// incident to the edges matter).
pub fn is_two_connected_edge_induced(edges: &[(u32, u32)]) -> bool {
    if edges.is_empty() {
        return false;
    }
    if edges.iter().any(|&(u, v)| u == v) {
        return false;
    }
    let mut touched: Vec<u32> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    touched.sort_unstable();
    touched.dedup();
    let nv = touched.len();
    let mut reindex = HashMap::new();
    for (i, &v) in touched.iter().enumerate() {
        reindex.insert(v, i as u32);
    }
    let les: Vec<(u32, u32)> = edges
        .iter()
        .map(|&(u, v)| (reindex[&u], reindex[&v]))
        .collect();
    let g = SimpleGraph::new_multi(nv, les.clone()).unwrap();
    if !g.is_connected() {
        return false;
    }
    if nv == 2 {
        return edges.len() >= 2;
    }
    edge_blocks(nv, &les).len() == 1
}

fn classify_brick(part: &[PartEdge]) -> BrickKind {
    let mut vs: Vec<u32> = part.iter().flat_map(|e| [e.u, e.v]).collect();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() == 2 {
        return BrickKind::Multi;
    }
    // Ring: every vertex has degree exactly 2 (a simple cycle).
    let mut deg: HashMap<u32, u32> = HashMap::new();
    for e in part {
        *deg.entry(e.u).or_insert(0) += 1;
        *deg.entry(e.v).or_insert(0) += 1;
    }
    if deg.values().all(|&d| d == 2) && part.len() == vs.len() {
        BrickKind::Ring
    } else {
        BrickKind::ThreeConnected
    }
}

/// Search for a split-candidate {E1, E2, u, v}: E1 a separation class that
/// is connected modulo [u, v], E2 the 2-connected remainder, both with at
/// least two edges. Candidate pairs are separation pairs (v a cut vertex
/// of G - u, or u, v joined by parallel edges), which is exhaustive for
/// 2-connected inputs.
fn find_split(part: &[PartEdge], order: SplitOrder) -> Option<(Vec<usize>, u32, u32)> {
    let mut vs: Vec<u32> = part.iter().flat_map(|e| [e.u, e.v]).collect();
    vs.sort_unstable();
    vs.dedup();
    let nv = vs.len();
    let mut reindex = HashMap::new();
    for (i, &v) in vs.iter().enumerate() {
        reindex.insert(v, i as u32);
    }
    let ledges: Vec<(u32, u32)> = part
        .iter()
        .map(|e| (reindex[&e.u], reindex[&e.v]))
        .collect();
    let mut pairs: HashSet<(u32, u32)> = HashSet::new();
    // Parallel pairs.
    let mut seen_pair: HashMap<(u32, u32), u32> = HashMap::new();
    for &(u, v) in &ledges {
        let key = (u.min(v), u.max(v));
        let c = seen_pair.entry(key).or_insert(0);
        *c += 1;
        if *c >= 2 {
            pairs.insert(key);
        }
    }
    // Cut-vertex pairs: v separating G - u.
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nv];
    for (i, &(u, v)) in ledges.iter().enumerate() {
        adj[u as usize].push((v, i as u32));
        adj[v as usize].push((u, i as u32));
    }
    for u in 0..nv as u32 {
        for v in cut_vertices_without(&adj, nv, u) {
            pairs.insert((u.min(v), u.max(v)));
        }
    }
    let mut pairs: Vec<(u32, u32)> = pairs.into_iter().collect();
    pairs.sort_unstable();
    if order == SplitOrder::Last {
        pairs.reverse();
    }
    for &(u, v) in &pairs {
        // Separation classes: components of part - {u, v} by edges.
        let mut comp = vec![u32::MAX; nv];
        let mut next = 0u32;
        for s in 0..nv as u32 {
            if s == u || s == v || comp[s as usize] != u32::MAX {
                continue;
            }
            let mut st = vec![s];
            comp[s as usize] = next;
            while let Some(x) = st.pop() {
                for &(y, _) in &adj[x as usize] {
                    if y != u && y != v && comp[y as usize] == u32::MAX {
                        comp[y as usize] = next;
                        st.push(y);
                    }
                }
            }
            next += 1;
        }
        let mut class_edges: Vec<Vec<usize>> = vec![Vec::new(); next as usize];
        for (i, &(a, b)) in ledges.iter().enumerate() {
            let c = if a != u && a != v {
                comp[a as usize]
            } else if b != u && b != v {
                comp[b as usize]
            } else {
                continue; // uv-edge: always in E2
            };
            class_edges[c as usize].push(i);
        }
        let mut classes: Vec<&Vec<usize>> = class_edges.iter().collect();
        if order == SplitOrder::Last {
            classes.reverse();
        }
        for cls in classes {
            let e1 = cls;
            if e1.len() < 2 || part.len() - e1.len() < 2 {
                continue;
            }
            // E1 is connected modulo [u, v] by construction; check E2.
            let mut in_e1 = vec![false; part.len()];
            for &i in e1 {
                in_e1[i] = true;
            }
            let e2: Vec<(u32, u32)> = ledges
                .iter()
                .enumerate()
                .filter(|(i, _)| !in_e1[*i])
                .map(|(_, &e)| e)
                .collect();
            let e2_orig: Vec<(u32, u32)> = e2
                .iter()
                .map(|&(a, b)| (vs[a as usize], vs[b as usize]))
                .collect();
            if is_two_connected_edge_induced(&e2_orig) {
                return Some((e1.clone(), vs[u as usize], vs[v as usize]));
            }
        }
    }
    None
}

/// Cut vertices of the graph with vertex `skip` removed.
fn cut_vertices_without(adj: &[Vec<(u32, u32)>], n: usize, skip: u32) -> Vec<u32> {
    let mut disc = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut visited = vec![false; n];
    visited[skip as usize] = true;
    let mut timer = 1u32;
    let mut cuts = Vec::new();
    let mut started = false;
    for s in 0..n as u32 {
        if visited[s as usize] {
            continue;
        }
        if started {
            return cuts; // G - skip disconnected: every remaining vertex
                         // pairs with skip; callers treat via components
        }
        started = true;
        let mut root_children = 0u32;
        let mut stack: Vec<(u32, u32, usize)> = vec![(s, u32::MAX, 0)];
        visited[s as usize] = true;
        disc[s as usize] = timer;
        low[s as usize] = timer;
        timer += 1;
        while let Some(&mut (x, pe, ref mut idx)) = stack.last_mut() {
            let xu = x as usize;
            if *idx < adj[xu].len() {
                let (to, eid) = adj[xu][*idx];
                *idx += 1;
                if eid == pe || to == skip {
                    continue;
                }
                let tu = to as usize;
                if visited[tu] {
                    low[xu] = low[xu].min(disc[tu]);
                } else {
                    visited[tu] = true;
                    disc[tu] = timer;
                    low[tu] = timer;
                    timer += 1;
                    if x == s {
                        root_children += 1;
                    }
                    stack.push((to, eid, 0));
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    let pu = p as usize;
                    low[pu] = low[pu].min(low[xu]);
                    if p != s && low[xu] >= disc[pu] && !cuts.contains(&p) {
                        cuts.push(p);
                    }
                }
            }
        }
        if root_children > 1 && !cuts.contains(&s) {
            cuts.push(s);
        }
    }
    cuts
}

impl RmtTree {
    pub fn n_real_edges(&self) -> usize {
        self.n_real_edges
    }

    /// No two matched bricks share a Ring or Multi kind.
    pub fn no_same_kind_adjacency(&self) -> bool {
        self.virtual_bricks.iter().all(|&(a, b)| {
            let (ka, kb) = (
                self.bricks[a as usize].kind,
                self.bricks[b as usize].kind,
            );
            !(ka == kb && (ka == BrickKind::Ring || ka == BrickKind::Multi))
        })
    }

    /// Exact reassembly check: real edges partition across bricks with the
    /// original endpoints, virtual endpoints agree on both sides, and the
    /// brick-virtual incidence graph is a tree.
    pub fn reassembles(&self, g: &SimpleGraph) -> bool {
        let mut seen = vec![false; g.n_edges()];
        for brick in &self.bricks {
            for e in &brick.edges {
                if let BrickEdgeLabel::Real(id) = e.label {
                    if seen[id as usize] {
                        return false;
                    }
                    seen[id as usize] = true;
                    let (u, v) = g.edges()[id as usize];
                    if (e.u, e.v) != (u, v) && (e.v, e.u) != (u, v) {
                        return false;
                    }
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return false;
        }
        for (w, &(u, v)) in self.virtual_pairs.iter().enumerate() {
            let (a, b) = self.virtual_bricks[w];
            for brick_id in [a, b] {
                let hit = self.bricks[brick_id as usize].edges.iter().any(|e| {
                    e.label == BrickEdgeLabel::Virtual(w as u32)
                        && ((e.u.min(e.v), e.u.max(e.v)) == (u, v))
                });
                if !hit {
                    return false;
                }
            }
        }
        // Brick graph with one edge per virtual id must be a tree.
        if self.bricks.len() != self.virtual_pairs.len() + 1 {
            return false;
        }
        let es: Vec<(u32, u32)> = self.virtual_bricks.to_vec();
        let bg = SimpleGraph::new_multi(self.bricks.len(), es).unwrap();
        bg.is_connected()
    }

    /// Diameter of the RMT-tree including the real-edge leaves.
    pub fn tree_diameter(&self) -> u32 {
        let b = self.bricks.len();
        let mut edges: Vec<(u32, u32)> = self.virtual_bricks.to_vec();
        for (leaf, &brick) in self.real_edge_brick.iter().enumerate() {
            edges.push((brick, (b + leaf) as u32));
        }
        let g = SimpleGraph::new_multi(b + self.n_real_edges, edges).unwrap();
        crate::graph::diameter_exact(&g).expect("RMT-tree is connected")
    }

    pub fn max_brick_diameter(&self) -> u32 {
        self.bricks.iter().map(|b| b.diameter()).max().unwrap_or(0)
    }

    /// Stable signature for order-independence comparisons.
    pub fn canonical_signature(&self) -> String {
        let mut brick_sigs: Vec<String> = self
            .bricks
            .iter()
            .map(|b| {
                let mut reals: Vec<u32> = b
                    .edges
                    .iter()
                    .filter_map(|e| match e.label {
                        BrickEdgeLabel::Real(id) => Some(id),
                        _ => None,
                    })
                    .collect();
                reals.sort_unstable();
                let mut virts: Vec<(u32, u32)> = b
                    .edges
                    .iter()
                    .filter_map(|e| match e.label {
                        BrickEdgeLabel::Virtual(_) => Some((e.u.min(e.v), e.u.max(e.v))),
                        _ => None,
                    })
                    .collect();
                virts.sort_unstable();
                format!("{}:{:?}:{:?}", b.kind.letter(), reals, virts)
            })
            .collect();
        brick_sigs.sort();
        brick_sigs.join(";")
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("{\"bricks\":[");
        for (i, b) in self.bricks.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("{{\"kind\":\"{}\",\"edges\":[", b.kind.letter()));
            for (j, e) in b.edges.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                match e.label {
                    BrickEdgeLabel::Real(id) => {
                        s.push_str(&format!("[{},{},\"r{}\"]", e.u, e.v, id))
                    }
                    BrickEdgeLabel::Virtual(id) => {
                        s.push_str(&format!("[{},{},\"v{}\"]", e.u, e.v, id))
                    }
                }
            }
            s.push_str("]}");
        }
        s.push_str("],\"virtual_pairs\":[");
        for (i, &(u, v)) in self.virtual_pairs.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("[{u},{v}]"));
        }
        s.push_str("]}");
        s
    }
}

/// Exact distances in `g` between the endpoints of every virtual edge:
/// returns the per-edge list and the maximum (0 when no virtual edge).
pub fn virtual_edge_stats(
    g: &SimpleGraph,
    rmt: &RmtTree,
) -> Result<(u32, Vec<u32>), GraphError> {
    let mut dists = Vec::with_capacity(rmt.virtual_pairs.len());
    let mut cache: HashMap<u32, Vec<u32>> = HashMap::new();
    for &(u, v) in &rmt.virtual_pairs {
        let d = match cache.get(&u) {
            Some(d) => d[v as usize],
            None => {
                let d = bfs_distances(g, u)?;
                let val = d[v as usize];
                cache.insert(u, d);
                val
            }
        };
        dists.push(d);
    }
    Ok((dists.iter().copied().max().unwrap_or(0), dists))
}

// ---------------------------------------------------------------------
// Brute-force split-candidate oracle.
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SplitCandidate {
    pub e1: Vec<u32>,
    pub u: u32,
    pub v: u32,
}

pub const ORACLE_VERTEX_LIMIT: usize = 12;
pub const ORACLE_EDGE_LIMIT: usize = 22;

/// All split-candidates by exhaustive search over edge bipartitions.
/// Exponential in the edge count, hence the hard size guards.
pub fn brute_force_split_candidates(
    g: &SimpleGraph,
) -> Result<Vec<SplitCandidate>, DecompError> {
    let m = g.n_edges();
    if g.n_vertices() > ORACLE_VERTEX_LIMIT || m > ORACLE_EDGE_LIMIT {
        return Err(DecompError::TooLarge {
            limit: format!(
                "<= {ORACLE_VERTEX_LIMIT} vertices and <= {ORACLE_EDGE_LIMIT} edges"
            ),
        });
    }
    if m < 4 {
        return Ok(Vec::new());
    }
    let edges = g.edges();
    let mut out = Vec::new();
    for mask in 1u32..(1 << m) - 1 {
        let e1: Vec<u32> = (0..m as u32).filter(|&i| mask >> i & 1 == 1).collect();
        if e1.len() < 2 || m - e1.len() < 2 {
            continue;
        }
        let e2: Vec<u32> = (0..m as u32).filter(|&i| mask >> i & 1 == 0).collect();
        // Shared vertices must be exactly two.
        let vs = |ids: &[u32]| -> HashSet<u32> {
            ids.iter()
                .flat_map(|&i| {
                    let (u, v) = edges[i as usize];
                    [u, v]
                })
                .collect()
        };
        let v1 = vs(&e1);
        let v2 = vs(&e2);
        let shared: Vec<u32> = v1.intersection(&v2).copied().collect();
        if shared.len() != 2 {
            continue;
        }
        let (u, v) = (shared[0].min(shared[1]), shared[0].max(shared[1]));
        // Every E1 vertex besides u,v must be absent from E2 and vice
        // versa (the pair separates the two sides).
        // (Already guaranteed: shared = {u, v}.)
        // G[E1] connected modulo [u, v]: u,v not adjacent in E1 and
        // G[E1] - {u, v} connected and nonempty.
        let e1_pairs: Vec<(u32, u32)> = e1.iter().map(|&i| edges[i as usize]).collect();
        if e1_pairs
            .iter()
            .any(|&(a, b)| (a == u && b == v) || (a == v && b == u))
        {
            continue;
        }
        if !connected_without_pair(g.n_vertices(), &e1_pairs, u, v) {
            continue;
        }
        let e2_pairs: Vec<(u32, u32)> = e2.iter().map(|&i| edges[i as usize]).collect();
        if !is_two_connected_edge_induced(&e2_pairs) {
            continue;
        }
        out.push(SplitCandidate { e1, u, v });
    }
    Ok(out)
}

/// Is the edge-induced subgraph minus {u, v} nonempty and connected?
fn connected_without_pair(n: usize, edges: &[(u32, u32)], u: u32, v: u32) -> bool {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut verts = HashSet::new();
    for &(a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
        for x in [a, b] {
            if x != u && x != v {
                verts.insert(x);
            }
        }
    }
    let Some(&start) = verts.iter().next() else {
        return false;
    };
    let mut seen = HashSet::new();
    seen.insert(start);
    let mut st = vec![start];
    while let Some(x) = st.pop() {
        for &y in &adj[x as usize] {
            if y != u && y != v && seen.insert(y) {
                st.push(y);
            }
        }
    }
    seen.len() == verts.len()
}

/// Certify that no brick of the decomposition admits a split-candidate.
pub fn bricks_are_split_free(rmt: &RmtTree) -> Result<bool, DecompError> {
    for brick in &rmt.bricks {
        let vs = brick.vertices();
        let mut reindex = HashMap::new();
        for (i, &v) in vs.iter().enumerate() {
            reindex.insert(v, i as u32);
        }
        let es: Vec<(u32, u32)> = brick
            .edges
            .iter()
            .map(|e| (reindex[&e.u], reindex[&e.v]))
            .collect();
        let g = SimpleGraph::new_multi(vs.len(), es).unwrap();
        if !brute_force_split_candidates(&g)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------
// The chi parameter of networks.
// ---------------------------------------------------------------------

/// The recursive pole-distance bound chi of the network obtained from a
/// 2-connected graph by deleting the root edge: a single-edge network has
/// chi 1; series and parallel compositions add their components; behind a
/// 3-connected brick the networks substituted along a shortest pole path
/// inside the brick are added (the documented upper-bound variant for
/// abstract graphs). Always at least the graph distance between the poles.
pub fn chi_network(g: &SimpleGraph, root_edge: u32) -> Result<u64, DecompError> {
    if root_edge as usize >= g.n_edges() {
        return Err(DecompError::InvalidRoot);
    }
    if g.n_edges() == 2 {
        // Completed graph of the single-edge network: two parallel edges.
        let (u, v) = g.edges()[root_edge as usize];
        let (a, b) = g.edges()[1 - root_edge as usize];
        if (u.min(v), u.max(v)) == (a.min(b), a.max(b)) {
            return Ok(1);
        }
        return Err(DecompError::NotTwoConnected);
    }
    let rmt = rmt_decomposition(g)?;
    let brick = rmt.real_edge_brick[root_edge as usize];
    Ok(chi_across(&rmt, brick, BrickEdgeLabel::Real(root_edge)))
}

fn chi_across(rmt: &RmtTree, brick_id: u32, entering: BrickEdgeLabel) -> u64 {
    let brick = &rmt.bricks[brick_id as usize];
    let enter_pos = brick
        .edges
        .iter()
        .position(|e| e.label == entering)
        .expect("entering edge belongs to the brick");
    let sub = |rmt: &RmtTree, e: &BrickEdge| -> u64 {
        match e.label {
            BrickEdgeLabel::Real(_) => 1,
            BrickEdgeLabel::Virtual(w) => {
                let (a, b) = rmt.virtual_bricks[w as usize];
                let other = if a == brick_id { b } else { a };
                chi_across(rmt, other, BrickEdgeLabel::Virtual(w))
            }
        }
    };
    match brick.kind {
        BrickKind::Ring | BrickKind::Multi => brick
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != enter_pos)
            .map(|(_, e)| sub(rmt, e))
            .sum(),
        BrickKind::ThreeConnected => {
            // Shortest pole path inside the brick avoiding the entering
            // edge; each traversed edge contributes its network's chi.
            let vs = brick.vertices();
            let mut reindex = HashMap::new();
            for (i, &v) in vs.iter().enumerate() {
                reindex.insert(v, i as u32);
            }
            let enter = &brick.edges[enter_pos];
            let (s, t) = (reindex[&enter.u], reindex[&enter.v]);
            let es: Vec<(u32, u32)> = brick
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != enter_pos)
                .map(|(_, e)| (reindex[&e.u], reindex[&e.v]))
                .collect();
            let sg = SimpleGraph::new_multi(vs.len(), es).unwrap();
            // BFS with parent edge tracking over brick edges.
            let mut dist = vec![u32::MAX; vs.len()];
            let mut from: Vec<Option<(u32, usize)>> = vec![None; vs.len()];
            let mut queue = std::collections::VecDeque::new();
            dist[s as usize] = 0;
            queue.push_back(s);
            // edge index within `brick.edges` for each sg edge
            let sg_edge_ids: Vec<usize> = brick
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != enter_pos)
                .map(|(i, _)| i)
                .collect();
            'bfs: while let Some(x) = queue.pop_front() {
                for (k, &(a, b)) in sg.edges().iter().enumerate() {
                    let y = if a == x {
                        b
                    } else if b == x {
                        a
                    } else {
                        continue;
                    };
                    if dist[y as usize] == u32::MAX {
                        dist[y as usize] = dist[x as usize] + 1;
                        from[y as usize] = Some((x, sg_edge_ids[k]));
                        if y == t {
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            let mut total = 0u64;
            let mut cur = t;
            while cur != s {
                let (prev, eid) = from[cur as usize].expect("brick is connected");
                total += sub(rmt, &brick.edges[eid]);
                cur = prev;
            }
            total
        }
    }
}

/// Check the 3-connected-core diameter inequality D(T) <= D(C) on a
/// 2-connected completed graph: when the brick at the root-edge leaf is
/// 3-connected it is the core of the associated network. Returns None
/// when the input has no T-brick at the root (vacuous).
pub fn three_connected_core_bound_check(g: &SimpleGraph, root_edge: u32) -> Result<Option<bool>, DecompError> {
    if g.n_edges() < 3 || root_edge as usize >= g.n_edges() {
        return Ok(None);
    }
    let rmt = rmt_decomposition(g)?;
    let brick = &rmt.bricks[rmt.real_edge_brick[root_edge as usize] as usize];
    if brick.kind != BrickKind::ThreeConnected {
        return Ok(None);
    }
    let d_t = brick.diameter();
    let d_c = crate::graph::diameter_exact(g).map_err(|_| DecompError::Disconnected)?;
    Ok(Some(d_t <= d_c))
}
