//! Small named instances used across tests, the CLI and the docs.

use crate::multigraph::Multigraph;
use crate::orientation::{FunctionalOrientation, Mark, TwoColoring};

/// Triangular prism whose two triangles have every edge doubled, plus three
/// single spokes `0-3`, `1-4`, `2-5`. Maximum degree 5.
///
/// Edge ids: `0:(0,1) 1:(1,0) 2:(1,2) 3:(1,2) 4:(2,0) 5:(2,0) 6:(3,4) 7:(4,3)
/// 8:(4,5) 9:(4,5) 10:(5,3) 11:(5,3) 12:(0,3) 13:(1,4) 14:(2,5)`.
pub fn doubled_prism() -> Multigraph {
    Multigraph::from_edges(
        6,
        [
            (0, 1),
            (1, 0),
            (1, 2),
            (1, 2),
            (2, 0),
            (2, 0),
            (3, 4),
            (4, 3),
            (4, 5),
            (4, 5),
            (5, 3),
            (5, 3),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
    )
    .expect("static edge list is loopless")
}

/// Valid coloring of [`doubled_prism`]: `{0, 1, 5}` get color 1.
pub fn doubled_prism_valid_coloring() -> TwoColoring {
    TwoColoring::from_bits(vec![1, 1, 0, 0, 0, 1]).expect("bits")
}

/// The orientation drawn alongside the valid coloring: the two doubled pairs
/// `0-1` and `3-4` each form a directed 2-cycle and spoke `2-5` is used both
/// ways. Everything else is undirected.
pub fn doubled_prism_drawn_orientation() -> FunctionalOrientation {
    let mut marks = vec![Mark::Undirected; 15];
    for e in [0, 1, 6, 7] {
        marks[e] = Mark::Forward;
    }
    marks[14] = Mark::Both;
    FunctionalOrientation::new(marks)
}

/// Invalid coloring of [`doubled_prism`]: inner triangle against outer triangle.
pub fn doubled_prism_invalid_coloring() -> TwoColoring {
    TwoColoring::from_bits(vec![1, 1, 1, 0, 0, 0]).expect("bits")
}

/// Triangle with every edge tripled (maximum degree 6). Has no FO 2-coloring.
pub fn tripled_triangle() -> Multigraph {
    let mut g = Multigraph::new(3);
    for (u, v) in [(0, 1), (1, 2), (2, 0)] {
        g.add_edges(u, v, 3).expect("valid");
    }
    g
}

/// The Petersen graph (cubic, 10 vertices).
pub fn petersen() -> Multigraph {
    let mut g = Multigraph::new(10);
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5).expect("valid");
        g.add_edge(i, i + 5).expect("valid");
        g.add_edge(5 + i, 5 + (i + 2) % 5).expect("valid");
    }
    g
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> Multigraph {
    let mut g = Multigraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).expect("valid");
        }
    }
    g
}

/// Cycle on `n >= 2` vertices (`n = 2` gives a doubled edge).
pub fn cycle(n: usize) -> Multigraph {
    let mut g = Multigraph::new(n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n).expect("valid");
    }
    g
}
