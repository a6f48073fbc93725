//! Loopless undirected multigraphs with stable edge identities.
//!
//! Vertices are dense ids `0..vertex_count`. Each edge keeps the endpoint
//! order it was declared with, and its id is its insertion index. Parallel
//! edges are first-class: degrees, components and cyclomatic numbers all count
//! them with multiplicity.

use std::collections::HashSet;

use petgraph::graph::{NodeIndex, UnGraph};
use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::orientation::TwoColoring;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}: edges must join two distinct vertices")]
    Loop(VertexId),
    #[error("vertex {vertex} out of range (graph has {vertex_count} vertices)")]
    VertexOutOfRange {
        vertex: VertexId,
        vertex_count: usize,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    degree: Vec<usize>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            edges: Vec::new(),
            degree: vec![0; vertex_count],
        }
    }

    /// Builds a graph from an edge list, rejecting loops and bad endpoints.
    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Appends a fresh isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.degree.push(0);
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        for w in [u, v] {
            if w >= self.vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    vertex_count: self.vertex_count,
                });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.edges.push((u, v));
        self.degree[u] += 1;
        self.degree[v] += 1;
        Ok(self.edges.len() - 1)
    }

    /// Adds `count` parallel copies of `u`–`v`.
    pub fn add_edges(
        &mut self,
        u: VertexId,
        v: VertexId,
        count: usize,
    ) -> Result<(), GraphError> {
        for _ in 0..count {
            self.add_edge(u, v)?;
        }
        Ok(())
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    /// Maximum degree, 0 for graphs without edges.
    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Number of parallel edges between `u` and `v`. Linear in the edge count.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| (a == u && b == v) || (a == v && b == u))
            .count()
    }

    /// Incidence lists: for every vertex, `(neighbor, edge id)` in edge order.
    pub fn incidence(&self) -> Incidence {
        Incidence::new(self)
    }

    /// Connected components ordered by their smallest vertex id.
    pub fn components(&self) -> Vec<ComponentSummary> {
        let mut dsu = DisjointSets::new(self.vertex_count);
        for &(u, v) in &self.edges {
            dsu.union(u, v);
        }
        let mut slot = vec![usize::MAX; self.vertex_count];
        let mut out: Vec<ComponentSummary> = Vec::new();
        for v in 0..self.vertex_count {
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
        for &(u, _) in &self.edges {
            let r = dsu.find(u);
            out[slot[r]].edge_count += 1;
        }
        out
    }

    /// Subgraph induced by the vertices of `color`. Vertex and edge order
    /// follow the host; the returned maps translate new ids to host ids.
    pub fn induced_subgraph(&self, coloring: &TwoColoring, color: u8) -> InducedSubgraph {
        assert_eq!(
            coloring.len(),
            self.vertex_count,
            "coloring must cover every vertex"
        );
        let mut local = vec![usize::MAX; self.vertex_count];
        let mut vertices = Vec::new();
        for v in 0..self.vertex_count {
            if coloring.color(v) == color {
                local[v] = vertices.len();
                vertices.push(v);
            }
        }
        let mut graph = Multigraph::new(vertices.len());
        let mut edges = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                graph
                    .add_edge(local[u], local[v])
                    .expect("induced edge endpoints are valid");
                edges.push(e);
            }
        }
        InducedSubgraph {
            graph,
            vertices,
            edges,
        }
    }

    /// Simple graph underlying `self`: one edge per adjacent pair.
    pub fn simple_skeleton(&self) -> UnGraph<(), ()> {
        let mut g = UnGraph::<(), ()>::with_capacity(self.vertex_count, self.edges.len());
        for _ in 0..self.vertex_count {
            g.add_node(());
        }
        let mut seen = HashSet::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                g.add_edge(NodeIndex::new(key.0), NodeIndex::new(key.1), ());
            }
        }
        g
    }

    /// Planarity of the underlying simple graph (left-right planarity test).
    pub fn is_planar(&self) -> bool {
        let skeleton = self.simple_skeleton();
        rustworkx_core::planar::is_planar(&skeleton)
    }
}

/// A connected component with its edge count (parallel edges included).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSummary {
    /// Sorted vertex ids.
    pub vertices: Vec<VertexId>,
    pub edge_count: usize,
}

impl ComponentSummary {
    /// `edge_count - |vertices| + 1`; never negative for a connected component.
    pub fn cyclomatic(&self) -> usize {
        (self.edge_count + 1)
            .checked_sub(self.vertices.len())
            .expect("component has fewer edges than a spanning tree")
    }

    pub fn is_acyclic(&self) -> bool {
        self.cyclomatic() == 0
    }

    pub fn is_unicyclic(&self) -> bool {
        self.cyclomatic() == 1
    }

    pub fn smallest_vertex(&self) -> VertexId {
        self.vertices[0]
    }
}

#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Multigraph,
    /// Local vertex id -> host vertex id.
    pub vertices: Vec<VertexId>,
    /// Local edge id -> host edge id.
    pub edges: Vec<EdgeId>,
}

/// Compressed incidence lists.
#[derive(Clone, Debug)]
pub struct Incidence {
    offsets: Vec<usize>,
    entries: Vec<(VertexId, EdgeId)>,
}

impl Incidence {
    fn new(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in g.edges() {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut entries = vec![(0, 0); offsets[n]];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            entries[fill[u]] = (v, e);
            fill[u] += 1;
            entries[fill[v]] = (u, e);
            fill[v] += 1;
        }
        Self { offsets, entries }
    }

    pub fn of(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use proptest::prelude::*;

    #[test]
    fn add_edge_assigns_sequential_ids() {
        let mut g = Multigraph::new(2);
        assert_eq!(g.add_edge(0, 1), Ok(0));
        assert_eq!((g.degree(0), g.degree(1)), (1, 1));
        assert_eq!(g.add_edge(0, 1), Ok(1));
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.multiplicity(1, 0), 2);
    }

    #[test]
    fn add_edge_rejects_loops_and_bad_vertices() {
        let mut g = Multigraph::new(4);
        assert_eq!(g.add_edge(3, 3), Err(GraphError::Loop(3)));
        assert_eq!(
            g.add_edge(0, 4),
            Err(GraphError::VertexOutOfRange {
                vertex: 4,
                vertex_count: 4
            })
        );
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn triangle_is_one_unicyclic_component() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertices, vec![0, 1, 2]);
        assert_eq!(comps[0].edge_count, 3);
        assert_eq!(comps[0].cyclomatic(), 1);
        assert!(comps[0].is_unicyclic());
    }

    #[test]
    fn tripled_edge_has_cyclomatic_two() {
        let g = Multigraph::from_edges(2, [(0, 1); 3]).unwrap();
        assert_eq!(g.components()[0].cyclomatic(), 2);
    }

    #[test]
    fn doubled_inner_triangle_has_cyclomatic_four() {
        let g = samples::doubled_prism();
        let inner = samples::doubled_prism_invalid_coloring();
        let sub = g.induced_subgraph(&inner, 1);
        let comps = sub.graph.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertices.len(), 3);
        assert_eq!(comps[0].edge_count, 6);
        assert_eq!(comps[0].cyclomatic(), 4);
    }

    #[test]
    fn components_order_by_smallest_vertex() {
        let g = Multigraph::from_edges(6, [(4, 5), (1, 3), (0, 2)]).unwrap();
        let firsts: Vec<_> = g.components().iter().map(|c| c.vertices[0]).collect();
        assert_eq!(firsts, vec![0, 1, 4]);
    }

    #[test]
    fn induced_subgraph_of_absent_color_is_empty() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let c = TwoColoring::uniform(3, 0);
        let sub = g.induced_subgraph(&c, 1);
        assert_eq!(sub.graph.vertex_count(), 0);
        assert_eq!(sub.graph.edge_count(), 0);
    }

    #[test]
    fn induced_subgraph_matches_brute_force_recount() {
        // Independent recount: an edge survives iff both endpoints carry the color.
        let g = samples::doubled_prism();
        let c = samples::doubled_prism_valid_coloring();
        for color in 0..2u8 {
            let sub = g.induced_subgraph(&c, color);
            let expected: Vec<EdgeId> = (0..g.edge_count())
                .filter(|&e| {
                    let (u, v) = g.endpoints(e);
                    c.color(u) == color && c.color(v) == color
                })
                .collect();
            assert_eq!(sub.edges, expected);
            for (i, &e) in sub.edges.iter().enumerate() {
                let (u, v) = sub.graph.endpoints(i);
                assert_eq!((sub.vertices[u], sub.vertices[v]), g.endpoints(e));
            }
        }
        // The black class {0, 1, 5} keeps only the doubled 0-1 pair.
        let black = g.induced_subgraph(&c, 1);
        assert_eq!(black.vertices, vec![0, 1, 5]);
        assert_eq!(black.graph.edge_count(), 2);
    }

    #[test]
    fn proper_coloring_of_square_induces_no_edges() {
        let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = TwoColoring::from_bits(vec![0, 1, 0, 1]).unwrap();
        assert_eq!(g.induced_subgraph(&c, 0).graph.edge_count(), 0);
        assert_eq!(g.induced_subgraph(&c, 1).graph.edge_count(), 0);
    }

    fn complete(n: usize) -> Multigraph {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn classical_planarity_cases() {
        assert!(complete(4).is_planar());
        assert!(!complete(5).is_planar());
        let mut k33 = Multigraph::new(6);
        for u in 0..3 {
            for v in 3..6 {
                k33.add_edges(u, v, 2).unwrap();
            }
        }
        assert!(!k33.is_planar());
        assert!(samples::doubled_prism().is_planar());
        assert!(Multigraph::new(0).is_planar());
    }

    fn arb_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = Multigraph> {
        (2..=max_v).prop_flat_map(move |n| {
            prop::collection::vec((0..n, 0..n), 0..=max_e).prop_map(move |pairs| {
                let mut g = Multigraph::new(n);
                for (u, v) in pairs {
                    if u != v {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            })
        })
    }

    /// DFS that reports whether a component contains a cycle, treating a
    /// repeated edge between the same pair as a 2-cycle.
    fn has_cycle_dfs(g: &Multigraph, comp: &ComponentSummary) -> bool {
        let inc = g.incidence();
        let mut seen = vec![false; g.vertex_count()];
        let mut stack = vec![(comp.vertices[0], usize::MAX)];
        seen[comp.vertices[0]] = true;
        while let Some((v, via)) = stack.pop() {
            for &(w, e) in inc.of(v) {
                if e == via {
                    continue;
                }
                if seen[w] {
                    return true;
                }
                seen[w] = true;
                stack.push((w, e));
            }
        }
        false
    }

    proptest! {
        #[test]
        fn handshake_and_partition(g in arb_graph(9, 20)) {
            let deg_sum: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(deg_sum, 2 * g.edge_count());
            let comps = g.components();
            let e_sum: usize = comps.iter().map(|c| c.edge_count).sum();
            prop_assert_eq!(e_sum, g.edge_count());
            let mut all: Vec<_> = comps.iter().flat_map(|c| c.vertices.clone()).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..g.vertex_count()).collect::<Vec<_>>());
        }

        #[test]
        fn cyclomatic_zero_iff_dfs_finds_no_cycle(g in arb_graph(8, 12)) {
            for c in g.components() {
                prop_assert_eq!(c.is_acyclic(), !has_cycle_dfs(&g, &c));
            }
        }

        #[test]
        fn euler_bound_rejects_dense_simple_graphs(g in arb_graph(9, 40)) {
            let s = g.simple_skeleton();
            let (v, e) = (s.node_count(), s.edge_count());
            if v >= 3 && e > 3 * v - 6 {
                prop_assert!(!g.is_planar());
            }
        }
    }
}
