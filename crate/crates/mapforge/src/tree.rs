//! Plane and labelled trees: exact-uniform samplers, exhaustive
//! enumerators, heights and label statistics.
//!
//! A plane tree with `n` edges is encoded by its balanced parenthesis word
//! of length `2n` (down-step = open, up-step = close). Uniform sampling
//! uses the cycle lemma: shuffle a word with `n` opens and `n+1` closes;
//! exactly one rotation is a closed ballot word, and dropping its final
//! close leaves a uniform Dyck word.
//!
//! A labelled tree carries an integer label per vertex with root label 0
//! and increments in {-1, 0, +1} along edges; labels are stored absolute so
//! extremes are a single pass.

use crate::rng::Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    TooLarge { limit: usize },
    BadLabels(String),
    MalformedInput { position: usize, message: String },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::TooLarge { limit } => {
                write!(f, "exhaustive enumeration limited to n <= {limit}")
            }
            TreeError::BadLabels(m) => write!(f, "invalid labels: {m}"),
            TreeError::MalformedInput { position, message } => {
                write!(f, "malformed input at {position}: {message}")
            }
        }
    }
}

impl std::error::Error for TreeError {}

/// Rooted plane tree; vertex 0 is the root and vertices are numbered in
/// preorder, so every child id exceeds its parent id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    children: Vec<Vec<u32>>,
    parent: Vec<u32>, // u32::MAX at the root
}

impl PlaneTree {
    pub fn singleton() -> PlaneTree {
        PlaneTree {
            children: vec![Vec::new()],
            parent: vec![u32::MAX],
        }
    }

    /// Build from a balanced parenthesis word (`true` = down an edge).
    pub fn from_dyck(word: &[bool]) -> PlaneTree {
        let n = word.len() / 2;
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        let mut parent = vec![u32::MAX; n + 1];
        let mut stack = vec![0u32];
        let mut next = 1u32;
        for &b in word {
            if b {
                let p = *stack.last().unwrap();
                children[p as usize].push(next);
                parent[next as usize] = p;
                stack.push(next);
                next += 1;
            } else {
                stack.pop();
            }
        }
        debug_assert_eq!(stack, vec![0]);
        PlaneTree { children, parent }
    }

    pub fn to_dyck(&self) -> Vec<bool> {
        let mut word = Vec::with_capacity(2 * self.n_edges());
        // Iterative DFS in plane order.
        let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < self.children[v as usize].len() {
                let c = self.children[v as usize][*i];
                *i += 1;
                word.push(true);
                stack.push((c, 0));
            } else {
                stack.pop();
                if !stack.is_empty() {
                    word.push(false);
                }
            }
        }
        word
    }

    pub fn n_vertices(&self) -> usize {
        self.children.len()
    }

    pub fn n_edges(&self) -> usize {
        self.children.len() - 1
    }

    pub fn children(&self, v: u32) -> &[u32] {
        &self.children[v as usize]
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        let p = self.parent[v as usize];
        (p != u32::MAX).then_some(p)
    }

    /// Depth of every vertex (root 0).
    pub fn depths(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.n_vertices()];
        for v in 1..self.n_vertices() {
            d[v] = d[self.parent[v] as usize] + 1;
        }
        d
    }

    pub fn height(&self) -> u32 {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Tree diameter (longest path, in edges) via two BFS passes.
    pub fn diameter(&self) -> u32 {
        if self.n_vertices() == 1 {
            return 0;
        }
        let far = |src: u32| -> (u32, u32) {
            let mut dist = vec![u32::MAX; self.n_vertices()];
            let mut queue = std::collections::VecDeque::new();
            dist[src as usize] = 0;
            queue.push_back(src);
            let mut best = (src, 0);
            while let Some(v) = queue.pop_front() {
                let dv = dist[v as usize];
                if dv > best.1 {
                    best = (v, dv);
                }
                let mut push = |w: u32| {
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = dv + 1;
                        queue.push_back(w);
                    }
                };
                for &c in &self.children[v as usize] {
                    push(c);
                }
                if let Some(p) = self.parent(v) {
                    push(p);
                }
            }
            best
        };
        let (a, _) = far(0);
        far(a).1
    }

    /// Contour corner sequence: the vertex at each of the `2n` corners in
    /// counterclockwise contour order starting at the root corner (before
    /// the first child). Each visit of a vertex between two of its incident
    /// edges is one corner.
    pub fn contour_vertices(&self) -> Vec<u32> {
        let n = self.n_edges();
        let mut corners = Vec::with_capacity(2 * n);
        if n == 0 {
            return corners;
        }
        let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < self.children[v as usize].len() {
                let c = self.children[v as usize][*i];
                *i += 1;
                corners.push(v);
                stack.push((c, 0));
            } else {
                stack.pop();
                if !stack.is_empty() {
                    corners.push(v);
                }
            }
        }
        debug_assert_eq!(corners.len(), 2 * n);
        corners
    }
}

/// Exactly uniform plane tree with `n` edges (cycle-lemma rotation of a
/// uniformly shuffled lattice word). `n = 0` yields the one-vertex tree.
pub fn sample_plane_tree(n: usize, rng: &mut Rng) -> PlaneTree {
    if n == 0 {
        return PlaneTree::singleton();
    }
    // Word with n opens (+1) and n+1 closes (-1), shuffled uniformly.
    let mut word: Vec<bool> = std::iter::repeat(true)
        .take(n)
        .chain(std::iter::repeat(false).take(n + 1))
        .collect();
    rng.shuffle(&mut word);
    // The unique rotation starting after the first position attaining the
    // minimal prefix sum is a closed ballot word.
    let mut sum = 0i64;
    let mut min = i64::MAX;
    let mut argmin = 0usize;
    for (i, &b) in word.iter().enumerate() {
        sum += if b { 1 } else { -1 };
        if sum < min {
            min = sum;
            argmin = i;
        }
    }
    let len = word.len();
    let dyck: Vec<bool> = (1..len)
        .map(|k| word[(argmin + k) % len])
        .collect();
    debug_assert_eq!(dyck.len(), 2 * n);
    PlaneTree::from_dyck(&dyck)
}

/// Plane tree plus integer vertex labels; root label 0, increments in
/// {-1, 0, +1} along every edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelledTree {
    pub tree: PlaneTree,
    pub labels: Vec<i64>,
}

impl LabelledTree {
    pub fn new(tree: PlaneTree, labels: Vec<i64>) -> Result<LabelledTree, TreeError> {
        if labels.len() != tree.n_vertices() {
            return Err(TreeError::BadLabels("label count mismatch".into()));
        }
        if labels[0] != 0 {
            return Err(TreeError::BadLabels("root label must be 0".into()));
        }
        for v in 1..labels.len() {
            let p = tree.parent[v] as usize;
            if (labels[v] - labels[p]).abs() > 1 {
                return Err(TreeError::BadLabels(format!(
                    "increment out of range on edge {p}-{v}"
                )));
            }
        }
        Ok(LabelledTree { tree, labels })
    }

    pub fn n_edges(&self) -> usize {
        self.tree.n_edges()
    }

    pub fn label_extremes(&self) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for &l in &self.labels {
            lo = lo.min(l);
            hi = hi.max(l);
        }
        (lo, hi)
    }

    /// Label span `l_max - l_min`.
    pub fn label_span(&self) -> i64 {
        let (lo, hi) = self.label_extremes();
        hi - lo
    }

    pub fn height(&self) -> u32 {
        self.tree.height()
    }

    /// Number of black vertices under the parity bicoloring with a black
    /// root (black = even label). This is the weight exponent for the
    /// importance-reweighted estimators at vertex weight x != 1.
    pub fn black_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l.rem_euclid(2) == 0).count()
    }

    /// Text format: parenthesis word line, then space-separated labels.
    pub fn to_text(&self) -> String {
        let word: String = self
            .tree
            .to_dyck()
            .iter()
            .map(|&b| if b { '(' } else { ')' })
            .collect();
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        format!("{}\n{}\n", word, labels.join(" "))
    }

    pub fn from_text(input: &str) -> Result<LabelledTree, TreeError> {
        let mut lines = input.lines();
        let word_line = lines.next().ok_or(TreeError::MalformedInput {
            position: 0,
            message: "missing parenthesis line".into(),
        })?;
        let mut word = Vec::new();
        let mut depth = 0i64;
        for (i, c) in word_line.chars().enumerate() {
            match c {
                '(' => {
                    word.push(true);
                    depth += 1;
                }
                ')' => {
                    word.push(false);
                    depth -= 1;
                    if depth < 0 {
                        return Err(TreeError::MalformedInput {
                            position: i,
                            message: "unbalanced parentheses".into(),
                        });
                    }
                }
                _ => {
                    return Err(TreeError::MalformedInput {
                        position: i,
                        message: format!("unexpected character '{c}'"),
                    })
                }
            }
        }
        if depth != 0 {
            return Err(TreeError::MalformedInput {
                position: word_line.len(),
                message: "unbalanced parentheses".into(),
            });
        }
        let labels_line = lines.next().ok_or(TreeError::MalformedInput {
            position: 1,
            message: "missing labels line".into(),
        })?;
        let labels: Result<Vec<i64>, _> = labels_line
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect();
        let labels = labels.map_err(|e| TreeError::MalformedInput {
            position: 1,
            message: e.to_string(),
        })?;
        LabelledTree::new(PlaneTree::from_dyck(&word), labels)
    }
}

/// Uniform labelled tree with `n` edges: uniform shape times iid uniform
/// increments on {-1, 0, +1} away from the root.
pub fn sample_labelled_tree(n: usize, rng: &mut Rng) -> LabelledTree {
    let tree = sample_plane_tree(n, rng);
    let mut labels = vec![0i64; tree.n_vertices()];
    for v in 1..tree.n_vertices() {
        let p = tree.parent[v] as usize;
        labels[v] = labels[p] + (rng.below(3) as i64 - 1);
    }
    LabelledTree { tree, labels }
}

/// All plane trees with `n` edges, in Dyck-word lexicographic order.
pub fn enumerate_plane_trees(n: usize) -> Vec<PlaneTree> {
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(2 * n);
    fn rec(word: &mut Vec<bool>, open: usize, close: usize, n: usize, out: &mut Vec<PlaneTree>) {
        if open == n && close == n {
            out.push(PlaneTree::from_dyck(word));
            return;
        }
        if open < n {
            word.push(true);
            rec(word, open + 1, close, n, out);
            word.pop();
        }
        if close < open {
            word.push(false);
            rec(word, open, close + 1, n, out);
            word.pop();
        }
    }
    rec(&mut word, 0, 0, n, &mut out);
    out
}

pub const ENUMERATION_LIMIT: usize = 8;

/// Complete duplicate-free list of labelled trees with `n` edges
/// (`Catalan(n) * 3^n` of them); bounded to keep memory at desk scale.
pub fn enumerate_labelled_trees(n: usize) -> Result<Vec<LabelledTree>, TreeError> {
    if n > ENUMERATION_LIMIT {
        return Err(TreeError::TooLarge {
            limit: ENUMERATION_LIMIT,
        });
    }
    let shapes = enumerate_plane_trees(n);
    let mut out = Vec::new();
    for shape in shapes {
        let v = shape.n_vertices();
        let mut incs = vec![0u8; v - 1 + 1]; // incs[1..v] used
        loop {
            let mut labels = vec![0i64; v];
            for w in 1..v {
                labels[w] = labels[shape.parent[w] as usize] + (incs[w] as i64 - 1);
            }
            out.push(LabelledTree {
                tree: shape.clone(),
                labels,
            });
            // Odometer over {0,1,2}^(v-1).
            let mut w = 1;
            loop {
                if w >= v {
                    break;
                }
                if incs[w] < 2 {
                    incs[w] += 1;
                    break;
                }
                incs[w] = 0;
                w += 1;
            }
            if w >= v {
                break;
            }
        }
    }
    Ok(out)
}

/// Vertex colors of a bicolored labelled tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
}

/// Labelled tree with the parity bicoloring: odd labels take one color and
/// even labels the other, fixed by the root's color.
#[derive(Debug, Clone)]
pub struct BicoloredLabelledTree {
    pub tree: LabelledTree,
    pub colors: Vec<Color>,
    pub root_color: Color,
}

pub fn bicolor(t: &LabelledTree, root_color: Color) -> BicoloredLabelledTree {
    let colors = t
        .labels
        .iter()
        .map(|&l| {
            let even = l.rem_euclid(2) == 0;
            match (even, root_color) {
                (true, c) => c,
                (false, Color::Black) => Color::White,
                (false, Color::White) => Color::Black,
            }
        })
        .collect();
    BicoloredLabelledTree {
        tree: t.clone(),
        colors,
        root_color,
    }
}

impl BicoloredLabelledTree {
    /// Bicolored depth of each vertex: bichromatic edges on the root path.
    pub fn bicolored_depths(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.tree.tree.n_vertices()];
        for v in 1..self.tree.tree.n_vertices() {
            let p = self.tree.tree.parent[v] as usize;
            d[v] = d[p] + (self.colors[v] != self.colors[p]) as u32;
        }
        d
    }

    /// White-black depth: edges going white -> black on the root path.
    pub fn white_black_depths(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.tree.tree.n_vertices()];
        for v in 1..self.tree.tree.n_vertices() {
            let p = self.tree.tree.parent[v] as usize;
            let wb = self.colors[p] == Color::White && self.colors[v] == Color::Black;
            d[v] = d[p] + wb as u32;
        }
        d
    }

    pub fn white_black_height(&self) -> u32 {
        self.white_black_depths().into_iter().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn catalan(n: usize) -> u64 {
        // binom(2n, n) / (n+1), exact in u64 for the small n used here.
        let mut c = 1u128;
        for i in 0..n as u128 {
            c = c * (2 * (n as u128) - i) / (i + 1);
        }
        (c / (n as u128 + 1)) as u64
    }

    #[test]
    fn enumeration_counts() {
        for n in 0..=6 {
            assert_eq!(enumerate_plane_trees(n).len() as u64, catalan(n));
        }
        // Catalan(n) * 3^n labelled trees: 3, 18, 135 at n = 1, 2, 3.
        assert_eq!(enumerate_labelled_trees(1).unwrap().len(), 3);
        assert_eq!(enumerate_labelled_trees(2).unwrap().len(), 18);
        assert_eq!(enumerate_labelled_trees(3).unwrap().len(), 135);
        assert_eq!(
            enumerate_labelled_trees(5).unwrap().len() as u64,
            catalan(5) * 3u64.pow(5)
        );
        assert!(matches!(
            enumerate_labelled_trees(9),
            Err(TreeError::TooLarge { .. })
        ));
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        use std::collections::HashSet;
        let trees = enumerate_labelled_trees(3).unwrap();
        let set: HashSet<(Vec<bool>, Vec<i64>)> = trees
            .iter()
            .map(|t| (t.tree.to_dyck(), t.labels.clone()))
            .collect();
        assert_eq!(set.len(), trees.len());
    }

    #[test]
    fn plane_tree_sampler_uniform_n2() {
        // Catalan(2) = 2 shapes, each with frequency 1/2 +- 3 sigma.
        let mut rng = Rng::new(7);
        let reps = 100_000;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..reps {
            let t = sample_plane_tree(2, &mut rng);
            *counts.entry(t.to_dyck()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 2);
        let sigma = (reps as f64 * 0.25).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - reps as f64 / 2.0).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn plane_tree_sampler_uniform_n3() {
        let mut rng = Rng::new(8);
        let reps = 100_000;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..reps {
            let t = sample_plane_tree(3, &mut rng);
            *counts.entry(t.to_dyck()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 5);
        let expect = reps as f64 / 5.0;
        let sigma = (reps as f64 * 0.2 * 0.8).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - expect).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn sampler_n0_and_invariants() {
        let mut rng = Rng::new(3);
        assert_eq!(sample_plane_tree(0, &mut rng).n_vertices(), 1);
        for _ in 0..200 {
            let t = sample_labelled_tree(40, &mut rng);
            assert_eq!(t.labels[0], 0);
            for v in 1..t.tree.n_vertices() {
                let p = t.tree.parent[v] as usize;
                assert!((t.labels[v] - t.labels[p]).abs() <= 1);
            }
            let (lo, hi) = t.label_extremes();
            assert!(lo <= 0 && 0 <= hi);
            assert!(t.label_span() >= hi.max(-lo));
            // |l_v| <= depth(v), hence span <= 2*height.
            let depths = t.tree.depths();
            for v in 0..t.tree.n_vertices() {
                assert!(t.labels[v].unsigned_abs() <= depths[v] as u64);
            }
            assert!(t.label_span() <= 2 * t.height() as i64);
            assert!(t.height() as usize <= t.n_edges());
        }
    }

    #[test]
    fn labelled_sampler_uniform_small() {
        // n=1: 3 equally likely; n=2: 18 equally likely.
        let mut rng = Rng::new(11);
        let reps = 90_000;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..reps {
            let t = sample_labelled_tree(2, &mut rng);
            *counts.entry((t.tree.to_dyck(), t.labels.clone())).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 18);
        let expect = reps as f64 / 18.0;
        let sigma = (expect * (1.0 - 1.0 / 18.0)).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - expect).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn heights_and_spans() {
        // Single vertex.
        let t = LabelledTree::new(PlaneTree::singleton(), vec![0]).unwrap();
        assert_eq!(t.height(), 0);
        assert_eq!(t.label_span(), 0);
        // Path of 2 edges labelled 0,1,2.
        let path = PlaneTree::from_dyck(&[true, true, false, false]);
        let t = LabelledTree::new(path, vec![0, 1, 2]).unwrap();
        assert_eq!(t.height(), 2);
        assert_eq!(t.label_span(), 2);
        assert_eq!(t.label_extremes(), (0, 2));
    }

    #[test]
    fn contour_of_two_edge_path() {
        let path = PlaneTree::from_dyck(&[true, true, false, false]);
        assert_eq!(path.contour_vertices(), vec![0, 1, 2, 1]);
    }

    #[test]
    fn bicolor_and_wb_height() {
        // Single vertex, black root: wb-height 0.
        let t = LabelledTree::new(PlaneTree::singleton(), vec![0]).unwrap();
        assert_eq!(bicolor(&t, Color::Black).white_black_height(), 0);
        // Edge labels 0 -> 1, black root: the only edge is black->white.
        let edge = PlaneTree::from_dyck(&[true, false]);
        let t = LabelledTree::new(edge, vec![0, 1]).unwrap();
        let b = bicolor(&t, Color::Black);
        assert_eq!(b.colors, vec![Color::Black, Color::White]);
        assert_eq!(b.white_black_height(), 0);
        assert_eq!(b.bicolored_depths(), vec![0, 1]);
    }

    #[test]
    fn bicolored_vs_wb_depth_inequality() {
        let mut rng = Rng::new(5);
        for _ in 0..100 {
            let t = sample_labelled_tree(30, &mut rng);
            for root_color in [Color::Black, Color::White] {
                let b = bicolor(&t, root_color);
                let d = b.bicolored_depths();
                let dp = b.white_black_depths();
                for v in 0..t.tree.n_vertices() {
                    let (dv, dpv) = (d[v] as i64, dp[v] as i64);
                    assert!(2 * dpv - 1 <= dv && dv <= 2 * dpv + 1);
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = Rng::new(9);
        let t = sample_labelled_tree(12, &mut rng);
        let txt = t.to_text();
        let back = LabelledTree::from_text(&txt).unwrap();
        assert_eq!(back, t);
        assert!(LabelledTree::from_text("(()\n0 0\n").is_err());
    }

    /// The sampled mean label span at n = 6 agrees with the exact mean
    /// over all Catalan(6) 3^6 labelled trees (an unbiasedness check of
    /// the statistic feeding the scaling experiments).
    #[test]
    fn mean_span_matches_exact_at_n6() {
        let trees = enumerate_labelled_trees(6).unwrap();
        let exact: f64 =
            trees.iter().map(|t| t.label_span() as f64).sum::<f64>() / trees.len() as f64;
        let mut rng = Rng::for_stream(4242, &[6]);
        let reps = 400_000;
        let mc: f64 = (0..reps)
            .map(|_| sample_labelled_tree(6, &mut rng).label_span() as f64)
            .sum::<f64>()
            / reps as f64;
        // std error ~ sigma/sqrt(reps) ~ 0.002
        assert!(
            (mc - exact).abs() < 0.01,
            "sampled mean span {mc} vs exact {exact}"
        );
    }

    /// Chi-squared uniformity against exhaustive enumeration for n <= 4 at
    /// significance 1e-3 (Wilson-Hilferty quantile), 1e6 draws.
    #[test]
    fn chi_squared_uniformity() {
        for n in 2..=4usize {
            let cells_list = enumerate_labelled_trees(n).unwrap();
            let mut index = std::collections::HashMap::new();
            for (i, t) in cells_list.iter().enumerate() {
                index.insert((t.tree.to_dyck(), t.labels.clone()), i);
            }
            let k = cells_list.len();
            let mut counts = vec![0u64; k];
            let reps = 1_000_000usize;
            let mut rng = Rng::for_stream(2024, &[n as u64]);
            for _ in 0..reps {
                let t = sample_labelled_tree(n, &mut rng);
                let i = index[&(t.tree.to_dyck(), t.labels)];
                counts[i] += 1;
            }
            let expect = reps as f64 / k as f64;
            let chi2: f64 = counts
                .iter()
                .map(|&c| {
                    let d = c as f64 - expect;
                    d * d / expect
                })
                .sum();
            // Wilson-Hilferty approximation of the chi-square 0.999 quantile.
            let df = (k - 1) as f64;
            let z = 3.090_232; // standard normal 0.999 quantile
            let q = df * (1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt()).powi(3);
            assert!(
                chi2 < q,
                "chi2 {chi2:.1} exceeds 0.999 quantile {q:.1} at n={n} (df {df})"
            );
        }
    }
}
