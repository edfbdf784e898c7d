//! Fixtures shared by the benchmarks.

use locgen_core::generate::{wires, BitSource};
use locgen_core::onedim::DirectedGraph;
use locgen_core::{Pattern, Region};

/// Square window `[0, n)^2`.
pub fn square(n: i64) -> Region {
    Region::rect(2, 0, n - 1, 0, n - 1)
}

/// A seeded wires tiling of `[0, n)^2`.
pub fn wires_patch(seed: u64, n: i64) -> Pattern {
    wires(&BitSource::Seeded(seed), &square(n))
}

/// A cycle of length `a` and one of length `b` joined by a single edge.
pub fn two_cycles(a: usize, b: usize) -> DirectedGraph {
    let mut g = DirectedGraph::new(a + b);
    for i in 0..a {
        g.add_edge(i, (i + 1) % a);
    }
    for i in 0..b {
        g.add_edge(a + i, a + (i + 1) % b);
    }
    g.add_edge(0, a);
    g
}
