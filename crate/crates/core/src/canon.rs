//! Exact canonical forms for edge-colored graphs on a group's elements.
//!
//! Two shapes occur: graphs with only self-loops, whose isomorphism class is
//! just the multiset of loop colors, and complete directed graphs with
//! self-loops, where every ordered pair `(y, z)` carries a color.
//!
//! Complete digraphs are canonized by individualization–refinement: an
//! ordered partition of the vertices (initially by loop color) is refined by
//! the multiset of `(out-color, in-color, neighbour cell)` triples until
//! stable; when a cell is still non-singleton the search branches on each
//! vertex of the first smallest such cell. Every discrete leaf orders the
//! vertices, and the canonical form is the lexicographically least relabeled
//! color matrix over all leaves. Automorphisms found along the way (two
//! leaves with the same matrix) prune subtrees that are images of ones
//! already explored; they never change the result.
//!
//! The byte encoding of a [`CanonicalClass`] is
//! `[mode: u8][n: u32 LE][palette length: u32 LE][palette: u32 LE …][entries: u32 LE …]`
//! where the palette lists the original colors in order of first occurrence
//! in the canonical matrix (row-major) and entries are palette positions.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphMode {
    LoopsOnly,
    CompleteDigraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("graphs have different vertex counts: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("graphs have different modes")]
    ModeMismatch,
}

/// Colors are stored row-major (`colors[y * n + z]` is the color of
/// `y → z`) for complete digraphs, and per vertex for loop-only graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoredGraph {
    n: usize,
    mode: GraphMode,
    colors: Vec<u32>,
}

impl EdgeColoredGraph {
    pub fn loops_only(colors: Vec<u32>) -> Self {
        EdgeColoredGraph {
            n: colors.len(),
            mode: GraphMode::LoopsOnly,
            colors,
        }
    }

    pub fn complete(n: usize, colors: Vec<u32>) -> Self {
        assert_eq!(colors.len(), n * n, "a complete digraph needs n² edge colors");
        EdgeColoredGraph {
            n,
            mode: GraphMode::CompleteDigraph,
            colors,
        }
    }

    pub fn complete_from_fn(n: usize, color: impl Fn(usize, usize) -> u32) -> Self {
        let colors = (0..n).flat_map(|y| (0..n).map(move |z| (y, z))).map(|(y, z)| color(y, z)).collect();
        Self::complete(n, colors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Color of the edge `y → z`; loop-only graphs answer for `y == z`.
    pub fn color(&self, y: usize, z: usize) -> Option<u32> {
        match self.mode {
            GraphMode::CompleteDigraph => Some(self.colors[y * self.n + z]),
            GraphMode::LoopsOnly => (y == z).then(|| self.colors[y]),
        }
    }

    /// Relabels vertex `v` as `sigma[v]`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.n);
        let n = self.n;
        let mut colors = vec![0; self.colors.len()];
        match self.mode {
            GraphMode::LoopsOnly => {
                for v in 0..n {
                    colors[sigma[v]] = self.colors[v];
                }
            }
            GraphMode::CompleteDigraph => {
                for y in 0..n {
                    for z in 0..n {
                        colors[sigma[y] * n + sigma[z]] = self.colors[y * n + z];
                    }
                }
            }
        }
        EdgeColoredGraph {
            n,
            mode: self.mode,
            colors,
        }
    }
}

/// Debug dump: a header line `n mode`, then one line of colors per row (a
/// single line for loop-only graphs).
impl fmt::Display for EdgeColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            GraphMode::LoopsOnly => "loops",
            GraphMode::CompleteDigraph => "complete",
        };
        writeln!(f, "{} {mode}", self.n)?;
        let width = match self.mode {
            GraphMode::LoopsOnly => self.n.max(1),
            GraphMode::CompleteDigraph => self.n.max(1),
        };
        for row in self.colors.chunks(width) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Relabeling-invariant and complete: equal classes ⇔ color-isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalClass(Vec<u8>);

impl CanonicalClass {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    fn encode(mode: GraphMode, n: usize, entries: &[u32]) -> Self {
        let mut palette: Vec<u32> = Vec::new();
        let mut reindexed = Vec::with_capacity(entries.len());
        for &c in entries {
            let pos = match palette.iter().position(|&p| p == c) {
                Some(p) => p,
                None => {
                    palette.push(c);
                    palette.len() - 1
                }
            };
            reindexed.push(pos as u32);
        }
        let mut bytes = Vec::with_capacity(9 + 4 * (palette.len() + entries.len()));
        bytes.push(match mode {
            GraphMode::LoopsOnly => 0,
            GraphMode::CompleteDigraph => 1,
        });
        bytes.extend_from_slice(&(n as u32).to_le_bytes());
        bytes.extend_from_slice(&(palette.len() as u32).to_le_bytes());
        for c in palette.iter().chain(&reindexed) {
            bytes.extend_from_slice(&c.to_le_bytes());
        }
        CanonicalClass(bytes)
    }
}

pub fn canonical_class(g: &EdgeColoredGraph) -> CanonicalClass {
    let (form, _) = canonical_form(g);
    CanonicalClass::encode(form.mode, form.n, &form.colors)
}

/// The canonical representative and a labeling `v ↦ position` that maps
/// `g` onto it.
pub fn canonical_form(g: &EdgeColoredGraph) -> (EdgeColoredGraph, Vec<usize>) {
    match g.mode {
        GraphMode::LoopsOnly => {
            let mut order: Vec<usize> = (0..g.n).collect();
            order.sort_by_key(|&v| (g.colors[v], v));
            let labeling = inverse(&order);
            (g.permute(&labeling), labeling)
        }
        GraphMode::CompleteDigraph => {
            let mut search = Search::new(g);
            let root = search.initial_partition();
            let mut path = Vec::new();
            search.visit(root, &mut path);
            let best = search.best.expect("the search tree has at least one leaf");
            let labeling = inverse(&best.order);
            (EdgeColoredGraph::complete(g.n, best.matrix), labeling)
        }
    }
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        inv[v] = pos;
    }
    inv
}

/// Exhaustive color-isomorphism test by backtracking over all bijections.
/// Exponential; meant as an oracle for small graphs.
pub fn color_isomorphic(a: &EdgeColoredGraph, b: &EdgeColoredGraph) -> Result<bool, CanonError> {
    if a.n != b.n {
        return Err(CanonError::SizeMismatch(a.n, b.n));
    }
    if a.mode != b.mode {
        return Err(CanonError::ModeMismatch);
    }
    let n = a.n;
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_bijection(a, b, 0, &mut image, &mut used))
}

fn extend_bijection(
    a: &EdgeColoredGraph,
    b: &EdgeColoredGraph,
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == a.n {
        return true;
    }
    for w in 0..a.n {
        if used[w] {
            continue;
        }
        let consistent = a.color(v, v) == b.color(w, w)
            && (0..v).all(|u| {
                a.color(u, v) == b.color(image[u], w) && a.color(v, u) == b.color(w, image[u])
            });
        if consistent {
            image[v] = w;
            used[w] = true;
            if extend_bijection(a, b, v + 1, image, used) {
                return true;
            }
            used[w] = false;
        }
    }
    image[v] = usize::MAX;
    false
}

struct Leaf {
    matrix: Vec<u32>,
    order: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    n: usize,
    m: &'a [u32],
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

type Partition = Vec<Vec<usize>>;

impl<'a> Search<'a> {
    fn new(g: &'a EdgeColoredGraph) -> Self {
        Search {
            n: g.n,
            m: &g.colors,
            first: None,
            best: None,
            automorphisms: Vec::new(),
        }
    }

    fn initial_partition(&self) -> Partition {
        let n = self.n;
        let mut loops: Vec<(u32, usize)> = (0..n).map(|v| (self.m[v * n + v], v)).collect();
        loops.sort_unstable();
        let mut cells: Partition = Vec::new();
        for (i, &(c, v)) in loops.iter().enumerate() {
            if i == 0 || loops[i - 1].0 != c {
                cells.push(Vec::new());
            }
            cells.last_mut().unwrap().push(v);
        }
        cells
    }

    /// Splits cells in place by neighbourhood signatures until stable.
    fn refine(&self, mut cells: Partition) -> Partition {
        let n = self.n;
        let mut cell_of = vec![0u32; n];
        let mut sig: Vec<(u32, u32, u32)> = Vec::with_capacity(n);
        loop {
            for (i, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = i as u32;
                }
            }
            let before = cells.len();
            let mut next: Partition = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(u32, u32, u32)>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        sig.clear();
                        sig.extend((0..n).map(|w| (self.m[v * n + w], self.m[w * n + v], cell_of[w])));
                        sig.sort_unstable();
                        (sig.clone(), v)
                    })
                    .collect();
                keyed.sort_unstable();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                        start = i;
                    }
                }
            }
            cells = next;
            if cells.len() == before {
                return cells;
            }
        }
    }

    /// Explores the subtree below `cells`. Returns `Some(depth)` to abandon
    /// everything below the node at `depth` on the current path.
    fn visit(&mut self, cells: Partition, path: &mut Vec<usize>) -> Option<usize> {
        let cells = self.refine(cells);
        let depth = path.len();
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(target) = target else {
            return self.leaf(cells, path);
        };

        let mut explored: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if self.equivalent_to_explored(path, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            path.push(v);
            let jump = self.visit(child, path);
            path.pop();
            match jump {
                Some(d) if d < depth => return Some(d),
                _ => {}
            }
        }
        None
    }

    /// Whether some known automorphism fixing `path` pointwise maps `v` into
    /// the orbit of an explored sibling.
    fn equivalent_to_explored(&self, path: &[usize], explored: &[usize], v: usize) -> bool {
        if explored.is_empty() || self.automorphisms.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for gamma in &self.automorphisms {
            if path.iter().all(|&p| gamma[p] == p) {
                for x in 0..self.n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == root)
    }

    fn leaf(&mut self, cells: Partition, path: &[usize]) -> Option<usize> {
        let n = self.n;
        let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
        let mut matrix = Vec::with_capacity(n * n);
        for &y in &order {
            for &z in &order {
                matrix.push(self.m[y * n + z]);
            }
        }
        let leaf = Leaf {
            matrix,
            order,
            path: path.to_vec(),
        };

        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                matrix: leaf.matrix.clone(),
                order: leaf.order.clone(),
                path: leaf.path.clone(),
            });
            self.best = Some(leaf);
            return None;
        };

        // An equal matrix means `order_ref[p] ↦ order[p]` is an automorphism
        // carrying the reference path onto this one.
        let mut jump = None;
        if leaf.matrix == first.matrix {
            jump = Some(self.record_automorphism(&first.order.clone(), &first.path.clone(), &leaf));
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.matrix.cmp(&best.matrix) {
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
            }
            std::cmp::Ordering::Equal if jump.is_none() => {
                let (order, bpath) = (best.order.clone(), best.path.clone());
                jump = Some(self.record_automorphism(&order, &bpath, &leaf));
            }
            _ => {}
        }
        jump
    }

    fn record_automorphism(&mut self, ref_order: &[usize], ref_path: &[usize], leaf: &Leaf) -> usize {
        let mut gamma = vec![0; self.n];
        for (p, &v) in ref_order.iter().enumerate() {
            gamma[v] = leaf.order[p];
        }
        self.automorphisms.push(gamma);
        ref_path
            .iter()
            .zip(&leaf.path)
            .take_while(|(a, b)| a == b)
            .count()
    }
}
