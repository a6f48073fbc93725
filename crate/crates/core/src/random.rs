//! Seeded random loopless multigraphs with a degree cap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::multigraph::Multigraph;

/// Random loopless multigraph on `vertices` vertices whose degrees
/// (multiplicity-counting) never exceed `max_degree`.
///
/// Draws `2 * vertices * max_degree` uniform vertex pairs and keeps those
/// whose endpoints differ and still have room. Same arguments, same graph,
/// on every platform.
pub fn random_multigraph(vertices: usize, max_degree: usize, seed: u64) -> Multigraph {
    let mut g = Multigraph::new(vertices);
    if vertices < 2 || max_degree == 0 {
        return g;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = vertices * max_degree / 2;
    let attempts = 2 * vertices * max_degree;
    for _ in 0..attempts {
        if g.edge_count() >= target {
            break;
        }
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        if u != v && g.degree(u) < max_degree && g.degree(v) < max_degree {
            g.add_edge(u, v).expect("distinct in-range endpoints");
        }
    }
    g
}
