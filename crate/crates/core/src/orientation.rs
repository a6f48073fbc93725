//! Functional orientations and the FO 2-coloring predicate.
//!
//! A functional orientation directs a subset of edges so every non-isolated
//! vertex has exactly one outgoing edge; an edge may be used in both
//! directions. It is full when no edge is left undirected. A graph has a full
//! functional orientation exactly when each component is acyclic or
//! unicyclic, which makes the FO 2-coloring check a per-component count.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::multigraph::{ComponentSummary, EdgeId, Multigraph, VertexId};

/// Direction mark of one edge `(u, v)` as declared in the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mark {
    /// Directed away from `u`, toward `v`.
    Forward,
    /// Directed away from `v`, toward `u`.
    Reverse,
    /// Both directions: counts as outgoing at both endpoints.
    Both,
    Undirected,
}

impl Mark {
    pub fn as_str(self) -> &'static str {
        match self {
            Mark::Forward => "fwd",
            Mark::Reverse => "rev",
            Mark::Both => "both",
            Mark::Undirected => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "fwd" => Mark::Forward,
            "rev" => Mark::Reverse,
            "both" => Mark::Both,
            "none" => Mark::Undirected,
            _ => return None,
        })
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalOrientation {
    marks: Vec<Mark>,
}

impl FunctionalOrientation {
    pub fn new(marks: Vec<Mark>) -> Self {
        Self { marks }
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn mark(&self, e: EdgeId) -> Mark {
        self.marks[e]
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn count(&self, mark: Mark) -> usize {
        self.marks.iter().filter(|&&m| m == mark).count()
    }

    /// Outgoing mark count per vertex.
    pub fn out_degrees(&self, g: &Multigraph) -> Vec<usize> {
        let mut out = vec![0; g.vertex_count()];
        for (&(u, v), &m) in g.edges().iter().zip(&self.marks) {
            match m {
                Mark::Forward => out[u] += 1,
                Mark::Reverse => out[v] += 1,
                Mark::Both => {
                    out[u] += 1;
                    out[v] += 1;
                }
                Mark::Undirected => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("color value {value} at vertex {vertex} is not 0 or 1")]
pub struct ColorValueError {
    pub vertex: VertexId,
    pub value: u8,
}

/// Total map from vertices to colors `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoColoring {
    colors: Vec<u8>,
}

impl TwoColoring {
    pub fn from_bits(colors: Vec<u8>) -> Result<Self, ColorValueError> {
        if let Some((vertex, &value)) = colors.iter().enumerate().find(|(_, &c)| c > 1) {
            return Err(ColorValueError { vertex, value });
        }
        Ok(Self { colors })
    }

    pub fn uniform(n: usize, color: u8) -> Self {
        assert!(color <= 1);
        Self {
            colors: vec![color; n],
        }
    }

    pub fn color(&self, v: VertexId) -> u8 {
        self.colors[v]
    }

    pub fn set(&mut self, v: VertexId, color: u8) {
        assert!(color <= 1);
        self.colors[v] = color;
    }

    pub fn bits(&self) -> &[u8] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// Witness that no full functional orientation exists: a component with at
/// least two independent cycles.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error(
    "component at vertex {} has cyclomatic number {} (>= 2)",
    .component.smallest_vertex(),
    .component.cyclomatic()
)]
pub struct InfeasibilityCertificate {
    pub component: ComponentSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientError {
    #[error("coloring is not an FO 2-coloring: {} offending component(s)", .0.len())]
    InvalidColoring(Vec<ComponentSummary>),
}

fn directed_from(g: &Multigraph, e: EdgeId, from: VertexId) -> Mark {
    if g.endpoints(e).0 == from {
        Mark::Forward
    } else {
        Mark::Reverse
    }
}

/// Builds a full functional orientation, or returns the first component
/// (by smallest vertex) whose cyclomatic number is at least 2.
///
/// Unicyclic components direct their cycle starting at the smallest cycle
/// vertex toward its smallest cycle neighbor, with tree vertices pointing
/// toward the cycle. Acyclic components mark their smallest edge `Both` and
/// point every other vertex toward it.
pub fn build_full_orientation(
    g: &Multigraph,
) -> Result<FunctionalOrientation, InfeasibilityCertificate> {
    let comps = g.components();
    if let Some(bad) = comps.iter().find(|c| c.cyclomatic() >= 2) {
        return Err(InfeasibilityCertificate {
            component: bad.clone(),
        });
    }
    let n = g.vertex_count();
    let inc = g.incidence();
    let mut marks = vec![Mark::Undirected; g.edge_count()];

    let mut comp_of = vec![0usize; n];
    for (i, c) in comps.iter().enumerate() {
        for &v in &c.vertices {
            comp_of[v] = i;
        }
    }
    let mut anchor = vec![usize::MAX; comps.len()];
    for (e, &(u, _)) in g.edges().iter().enumerate() {
        let c = comp_of[u];
        if anchor[c] == usize::MAX {
            anchor[c] = e;
        }
    }

    // Unicyclic components: strip leaves; what survives is the cycle.
    let mut rem = g.degrees().to_vec();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<VertexId> = (0..n)
        .filter(|&v| comps[comp_of[v]].is_unicyclic() && rem[v] == 1)
        .collect();
    while let Some(v) = queue.pop_front() {
        removed[v] = true;
        let &(w, e) = inc
            .of(v)
            .iter()
            .find(|&&(w, _)| !removed[w])
            .expect("a leaf keeps one live edge");
        marks[e] = directed_from(g, e, v);
        rem[w] -= 1;
        if rem[w] == 1 {
            queue.push_back(w);
        }
    }

    let mut seen = vec![false; n];
    for (ci, comp) in comps.iter().enumerate() {
        if comp.edge_count == 0 {
            continue;
        }
        if comp.is_unicyclic() {
            let start = *comp
                .vertices
                .iter()
                .find(|&&v| !removed[v])
                .expect("unicyclic component keeps its cycle");
            let &(first, first_edge) = inc
                .of(start)
                .iter()
                .filter(|&&(w, _)| !removed[w])
                .min()
                .expect("cycle vertex has cycle neighbors");
            marks[first_edge] = directed_from(g, first_edge, start);
            let (mut cur, mut via) = (first, first_edge);
            while cur != start {
                let &(next, e) = inc
                    .of(cur)
                    .iter()
                    .find(|&&(w, e)| !removed[w] && e != via)
                    .expect("cycle continues");
                marks[e] = directed_from(g, e, cur);
                cur = next;
                via = e;
            }
        } else {
            let e0 = anchor[ci];
            let (u, v) = g.endpoints(e0);
            marks[e0] = Mark::Both;
            seen[u] = true;
            seen[v] = true;
            let mut bfs = VecDeque::from([u, v]);
            while let Some(x) = bfs.pop_front() {
                for &(w, e) in inc.of(x) {
                    if !seen[w] {
                        seen[w] = true;
                        marks[e] = directed_from(g, e, w);
                        bfs.push_back(w);
                    }
                }
            }
        }
    }
    Ok(FunctionalOrientation::new(marks))
}

/// Definition-level check: every vertex touching a marked edge has exactly
/// one outgoing mark. With `require_full`, no edge may be undirected, so this
/// covers every non-isolated vertex.
pub fn check_orientation(g: &Multigraph, o: &FunctionalOrientation, require_full: bool) -> bool {
    if o.len() != g.edge_count() {
        return false;
    }
    if require_full && o.marks().contains(&Mark::Undirected) {
        return false;
    }
    let mut touched = vec![false; g.vertex_count()];
    for (&(u, v), &m) in g.edges().iter().zip(o.marks()) {
        if m != Mark::Undirected {
            touched[u] = true;
            touched[v] = true;
        }
    }
    let out = o.out_degrees(g);
    (0..g.vertex_count()).all(|v| !touched[v] || out[v] == 1)
}

/// Monochromatic components of `c`, in order of smallest vertex.
pub fn monochromatic_components(g: &Multigraph, c: &TwoColoring) -> Vec<ComponentSummary> {
    assert_eq!(c.len(), g.vertex_count(), "coloring must cover every vertex");
    let n = g.vertex_count();
    let mut dsu = DisjointSets::new(n);
    for &(u, v) in g.edges() {
        if c.color(u) == c.color(v) {
            dsu.union(u, v);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut out: Vec<ComponentSummary> = Vec::new();
    for v in 0..n {
        let r = dsu.find(v);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(ComponentSummary {
                vertices: Vec::new(),
                edge_count: 0,
            });
        }
        out[slot[r]].vertices.push(v);
    }
    for &(u, v) in g.edges() {
        if c.color(u) == c.color(v) {
            let r = dsu.find(u);
            out[slot[r]].edge_count += 1;
        }
    }
    out
}

/// Accepts `c` iff every induced monochromatic component is acyclic or
/// unicyclic; otherwise returns every offending component.
pub fn verify_fo2coloring(g: &Multigraph, c: &TwoColoring) -> Result<(), Vec<ComponentSummary>> {
    let bad: Vec<_> = monochromatic_components(g, c)
        .into_iter()
        .filter(|k| k.cyclomatic() >= 2)
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// Orients each monochromatic subgraph fully and leaves bichromatic edges
/// undirected.
pub fn orient_for_coloring(
    g: &Multigraph,
    c: &TwoColoring,
) -> Result<FunctionalOrientation, OrientError> {
    verify_fo2coloring(g, c).map_err(OrientError::InvalidColoring)?;
    let mut marks = vec![Mark::Undirected; g.edge_count()];
    for color in 0..2 {
        let sub = g.induced_subgraph(c, color);
        let local = build_full_orientation(&sub.graph)
            .expect("verified coloring induces acyclic or unicyclic components");
        // Induced edges keep the host's endpoint order, so marks carry over.
        for (i, &host_edge) in sub.edges.iter().enumerate() {
            marks[host_edge] = local.mark(i);
        }
    }
    Ok(FunctionalOrientation::new(marks))
}
