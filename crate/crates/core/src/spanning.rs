//! Spanning trees of the underlying multigraph and the count of `±H` edges
//! they leave out.
//!
//! `phi(T)` is the number of `±H` edges outside `T`. Minimizing it is a
//! maximum-weight basis problem in the graphic matroid, so the greedy forest
//! that inserts `±H` edges first is optimal. Enumeration is only needed for
//! the full set of optimal trees.

use crate::error::{Error, Result};
use crate::graph::{Components, DecompositionGraph};

/// A spanning tree, as the sorted indices of its edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanningTree {
    edges: Vec<usize>,
}

impl SpanningTree {
    /// Checks that the edge indices form a spanning tree of `g`.
    pub fn new(g: &DecompositionGraph, mut edges: Vec<usize>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let n = g.vertices().len();
        if n == 0 || edges.len() != n - 1 {
            return Err(Error::NotSpanningTree(format!("need {} edges, got {}", n.saturating_sub(1), edges.len())));
        }
        let mut c = Components::new(n);
        for &j in &edges {
            let e = g.edges().get(j).ok_or_else(|| Error::NotSpanningTree(format!("no edge #{j}")))?;
            if !c.union(e.from, e.to) {
                return Err(Error::NotSpanningTree(format!("edge {} closes a cycle", e.id)));
            }
        }
        Ok(SpanningTree { edges })
    }

    pub fn from_ids(g: &DecompositionGraph, ids: &[impl AsRef<str>]) -> Result<Self> {
        let edges = ids
            .iter()
            .map(|id| g.edge_index(id.as_ref()).ok_or_else(|| Error::UnknownEdge(id.as_ref().to_owned())))
            .collect::<Result<_>>()?;
        SpanningTree::new(g, edges)
    }

    pub fn edge_indices(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    pub fn edge_ids(&self, g: &DecompositionGraph) -> Vec<String> {
        self.edges.iter().map(|&j| g.edges()[j].id.clone()).collect()
    }
}

/// Number of `±H` edges outside the tree.
pub fn phi(g: &DecompositionGraph, t: &SpanningTree) -> u64 {
    g.edges().iter().enumerate().filter(|(j, e)| e.is_special() && !t.contains(*j)).count() as u64
}

fn require_connected(g: &DecompositionGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::NotSpanningTree("the graph is disconnected".into()))
    }
}

/// Spanning tree holding as many `±H` edges as possible: `±H` edges are
/// inserted first, in id order, then the forest is completed with the rest.
pub fn greedy_tree(g: &DecompositionGraph) -> Result<SpanningTree> {
    require_connected(g)?;
    let mut c = Components::new(g.vertices().len());
    let mut chosen = Vec::with_capacity(g.vertices().len() - 1);
    for special in [true, false] {
        for (j, e) in g.edges().iter().enumerate() {
            if e.is_special() == special && c.union(e.from, e.to) {
                chosen.push(j);
            }
        }
    }
    chosen.sort_unstable();
    Ok(SpanningTree { edges: chosen })
}

/// Minimum of `phi` over all spanning trees.
pub fn capital_phi(g: &DecompositionGraph) -> Result<u64> {
    Ok(phi(g, &greedy_tree(g)?))
}

/// Number of spanning trees, by the matrix-tree theorem (Bareiss elimination
/// on a reduced Laplacian). Saturates at `u128::MAX` on overflow.
pub fn count_spanning_trees(g: &DecompositionGraph) -> u128 {
    let n = g.vertices().len();
    if n == 0 || !g.is_connected() {
        return 0;
    }
    let size = n - 1;
    let mut lap = vec![vec![0i128; size]; size];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        for (a, b) in [(e.from, e.to), (e.to, e.from)] {
            if a < size {
                lap[a][a] += 1;
                if b < size {
                    lap[a][b] -= 1;
                }
            }
        }
    }
    let mut prev = 1i128;
    for k in 0..size {
        if lap[k][k] == 0 {
            let Some(p) = (k + 1..size).find(|&i| lap[i][k] != 0) else { return 0 };
            lap.swap(k, p);
            // A row swap flips the sign; the count itself is positive so only
            // the magnitude is kept below.
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = lap[i][j]
                    .checked_mul(lap[k][k])
                    .zip(lap[i][k].checked_mul(lap[k][j]))
                    .and_then(|(x, y)| x.checked_sub(y));
                match v {
                    Some(v) => lap[i][j] = v / prev,
                    None => return u128::MAX,
                }
            }
        }
        prev = lap[k][k];
    }
    if size == 0 {
        1
    } else {
        lap[size - 1][size - 1].unsigned_abs()
    }
}

/// Visits every spanning tree in lexicographic order of edge indices.
/// Fails before visiting anything if there are more than `cap` trees.
pub fn for_each_spanning_tree(g: &DecompositionGraph, cap: u64, mut visit: impl FnMut(&SpanningTree)) -> Result<u64> {
    require_connected(g)?;
    let total = count_spanning_trees(g);
    if total > cap as u128 {
        return Err(Error::CapExceeded { what: "spanning trees", needed: total, cap });
    }
    let candidates: Vec<usize> = (0..g.edges().len()).filter(|&j| !g.edges()[j].is_loop()).collect();
    let mut search = TreeSearch {
        g,
        candidates: &candidates,
        need: g.vertices().len() - 1,
        forest: RollbackForest::new(g.vertices().len()),
        chosen: Vec::new(),
        visited: 0,
    };
    search.run(0, &mut visit);
    Ok(search.visited)
}

/// All spanning trees minimizing `phi`, in lexicographic order.
pub fn optimal_trees(g: &DecompositionGraph, cap: u64) -> Result<Vec<SpanningTree>> {
    let best = capital_phi(g)?;
    let mut out = Vec::new();
    for_each_spanning_tree(g, cap, |t| {
        if phi(g, t) == best {
            out.push(t.clone());
        }
    })?;
    Ok(out)
}

struct TreeSearch<'a> {
    g: &'a DecompositionGraph,
    candidates: &'a [usize],
    need: usize,
    forest: RollbackForest,
    chosen: Vec<usize>,
    visited: u64,
}

impl TreeSearch<'_> {
    fn run(&mut self, pos: usize, visit: &mut impl FnMut(&SpanningTree)) {
        if self.chosen.len() == self.need {
            self.visited += 1;
            visit(&SpanningTree { edges: self.chosen.clone() });
            return;
        }
        if self.candidates.len() - pos < self.need - self.chosen.len() {
            return;
        }
        let j = self.candidates[pos];
        let e = &self.g.edges()[j];
        if self.forest.union(e.from, e.to) {
            self.chosen.push(j);
            self.run(pos + 1, visit);
            self.chosen.pop();
            self.forest.undo();
        }
        self.run(pos + 1, visit);
    }
}

/// Union by size without path compression, so unions can be undone.
struct RollbackForest {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<usize>,
}

impl RollbackForest {
    fn new(n: usize) -> Self {
        RollbackForest { parent: (0..n).collect(), size: vec![1; n], history: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] > self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[ra] = rb;
        self.size[rb] += self.size[ra];
        self.history.push(ra);
        true
    }

    fn undo(&mut self) {
        let ra = self.history.pop().expect("undo without union");
        let rb = self.parent[ra];
        self.size[rb] -= self.size[ra];
        self.parent[ra] = ra;
    }
}
