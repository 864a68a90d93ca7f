//! Graph families used by the benchmarks.

use graphman_core::{DecompositionGraph, Gl2Matrix, SeifertData, H};

/// A cycle of `n` pieces `(0, (2,1), (3,1), 0)` in which every `stride`-th (none when `stride` is 0)
/// edge is labeled `H` and the rest `(2 5 / 1 2)`. With `chords`, vertex `i` is
/// also joined to vertex `i + 2` by an `H` edge, which forces the general bound.
pub fn necklace(n: usize, stride: usize, chords: bool) -> DecompositionGraph {
    let piece = SeifertData::from_pairs(0, &[(2, 1), (3, 1)], 0).expect("valid piece");
    let plain = Gl2Matrix::new(2, 5, 1, 2).expect("determinant -1");
    let mut b = DecompositionGraph::builder();
    for i in 0..n {
        b = b.vertex(format!("v{i:02}"), piece.clone());
    }
    for i in 0..n {
        let label = if stride != 0 && i % stride == 0 { H } else { plain };
        b = b.edge(format!("c{i:02}"), format!("v{i:02}"), format!("v{:02}", (i + 1) % n), label);
        if chords && i % 2 == 0 {
            b = b.edge(format!("d{i:02}"), format!("v{i:02}"), format!("v{:02}", (i + 2) % n), H);
        }
    }
    b.build().expect("ids are unique")
}
