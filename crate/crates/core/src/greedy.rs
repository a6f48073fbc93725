//! Greedy defective coloring and the linear-time FO 2-coloring for `Δ <= 5`.
//!
//! Start with every vertex in color 0. While some vertex sees more than
//! `⌊Δ/k⌋` same-colored edge endpoints, move it to the smallest color it sees
//! at most `⌊Δ/k⌋` times; such a color exists by pigeonhole. Every move
//! strictly lowers the number of monochromatic edges, so there are at most
//! `|E|` moves. With `k = 2` and `Δ <= 5` each color class has maximum degree
//! 2, which makes every monochromatic component a path, a cycle or a doubled
//! edge.

use std::collections::VecDeque;

use thiserror::Error;

use crate::multigraph::Multigraph;
use crate::orientation::{orient_for_coloring, FunctionalOrientation, TwoColoring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    #[error("maximum degree {0} exceeds 5; the greedy route needs Δ <= 5")]
    DegreeTooLarge(usize),
    #[error("number of colors must be positive")]
    NoColors,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectiveColoring {
    pub colors: Vec<u32>,
    /// `⌊Δ/k⌋`.
    pub defect_bound: usize,
    pub recolorings: usize,
    /// Neighbor counter adjustments performed after recolorings.
    pub counter_updates: usize,
    /// Monochromatic edges of the final coloring.
    pub monochromatic_edges: usize,
}

/// Monochromatic edge count before the first move and after each move.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PotentialTrace {
    pub values: Vec<usize>,
}

impl PotentialTrace {
    pub fn strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn defective_coloring(g: &Multigraph, k: u32) -> Result<DefectiveColoring, GreedyError> {
    run(g, k, None)
}

/// Like [`defective_coloring`], recording the potential after every move.
pub fn defective_coloring_traced(
    g: &Multigraph,
    k: u32,
) -> Result<(DefectiveColoring, PotentialTrace), GreedyError> {
    let mut trace = PotentialTrace::default();
    let out = run(g, k, Some(&mut trace))?;
    Ok((out, trace))
}

fn run(
    g: &Multigraph,
    k: u32,
    mut trace: Option<&mut PotentialTrace>,
) -> Result<DefectiveColoring, GreedyError> {
    if k == 0 {
        return Err(GreedyError::NoColors);
    }
    let n = g.vertex_count();
    let bound = g.max_degree() / k as usize;
    let inc = g.incidence();
    let mut colors = vec![0u32; n];
    // same[v]: incident edge endpoints whose other end shares v's color.
    let mut same: Vec<usize> = g.degrees().to_vec();
    let mut mono = g.edge_count();
    if let Some(t) = trace.as_deref_mut() {
        t.values.push(mono);
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| same[v] > bound).collect();
    let mut per_color = vec![0usize; k as usize];
    let mut recolorings = 0;
    let mut counter_updates = 0;

    while let Some(u) = queue.pop_front() {
        if same[u] <= bound {
            continue;
        }
        per_color.iter_mut().for_each(|c| *c = 0);
        for &(w, _) in inc.of(u) {
            per_color[colors[w] as usize] += 1;
        }
        let old = colors[u];
        let new = per_color
            .iter()
            .position(|&c| c <= bound)
            .expect("pigeonhole: some color is seen at most ⌊Δ/k⌋ times") as u32;
        debug_assert_ne!(new, old);
        mono = mono - per_color[old as usize] + per_color[new as usize];
        colors[u] = new;
        same[u] = per_color[new as usize];
        for &(w, _) in inc.of(u) {
            if colors[w] == old {
                same[w] -= 1;
                counter_updates += 1;
            } else if colors[w] == new {
                same[w] += 1;
                counter_updates += 1;
                if same[w] == bound + 1 {
                    queue.push_back(w);
                }
            }
        }
        recolorings += 1;
        if let Some(t) = trace.as_deref_mut() {
            t.values.push(mono);
        }
    }

    Ok(DefectiveColoring {
        colors,
        defect_bound: bound,
        recolorings,
        counter_updates,
        monochromatic_edges: mono,
    })
}

/// FO 2-coloring plus matching orientation for graphs with maximum degree at
/// most 5, in time linear in `v + e`.
pub fn fo2color_delta5(
    g: &Multigraph,
) -> Result<(TwoColoring, FunctionalOrientation), GreedyError> {
    let delta = g.max_degree();
    if delta > 5 {
        return Err(GreedyError::DegreeTooLarge(delta));
    }
    let d = defective_coloring(g, 2)?;
    let coloring = TwoColoring::from_bits(d.colors.into_iter().map(|c| c as u8).collect())
        .expect("two colors");
    let orientation = orient_for_coloring(g, &coloring)
        .expect("classes of max degree 2 are acyclic or unicyclic");
    Ok((coloring, orientation))
}
