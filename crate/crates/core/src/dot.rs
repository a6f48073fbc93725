//! Graphviz export. Parallel edges are drawn as separate arcs; port
//! vertices are boxes; colored vertices are filled.

use std::fmt::Write as _;

use crate::multigraph::{Multigraph, VertexId};
use crate::orientation::{FunctionalOrientation, Mark, TwoColoring};
use crate::reduction::WitnessMap;

#[derive(Clone, Copy, Debug, Default)]
pub struct DotOptions<'a> {
    pub ports: &'a [VertexId],
    pub coloring: Option<&'a TwoColoring>,
    pub orientation: Option<&'a FunctionalOrientation>,
}

pub fn to_dot(g: &Multigraph, opts: DotOptions<'_>) -> String {
    let mut is_port = vec![false; g.vertex_count()];
    for &p in opts.ports {
        if p < is_port.len() {
            is_port[p] = true;
        }
    }
    let mut s = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..g.vertex_count() {
        let mut attrs = vec![format!("label=\"{v}\"")];
        if is_port[v] {
            attrs.push("shape=box".into());
        }
        if let Some(c) = opts.coloring {
            let fill = if c.color(v) == 0 { "white" } else { "gray" };
            attrs.push(format!("style=filled fillcolor={fill}"));
        }
        let _ = writeln!(s, "  {v} [{}];", attrs.join(" "));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let dir = match opts.orientation.map(|o| o.mark(e)) {
            Some(Mark::Forward) => " dir=forward",
            Some(Mark::Reverse) => " dir=back",
            Some(Mark::Both) => " dir=both",
            _ => "",
        };
        let _ = writeln!(s, "  {u} -- {v} [id=\"e{e}\"{dir}];");
    }
    s.push_str("}\n");
    s
}

/// Every vertex that is a port of some registered gadget.
pub fn witness_ports(w: &WitnessMap) -> Vec<VertexId> {
    let mut ports: Vec<VertexId> = w
        .gadgets
        .iter()
        .flat_map(|g| g.instance.ports.iter().copied())
        .collect();
    ports.sort_unstable();
    ports.dedup();
    ports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn parallel_edges_are_separate_arcs() {
        let g = Multigraph::from_edges(2, [(0, 1); 3]).unwrap();
        let dot = to_dot(
            &g,
            DotOptions {
                ports: &[0, 1],
                ..Default::default()
            },
        );
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert_eq!(dot.matches("shape=box").count(), 2);
    }

    #[test]
    fn colors_and_marks_are_rendered() {
        let g = samples::doubled_prism();
        let c = samples::doubled_prism_valid_coloring();
        let o = samples::doubled_prism_drawn_orientation();
        let dot = to_dot(
            &g,
            DotOptions {
                ports: &[],
                coloring: Some(&c),
                orientation: Some(&o),
            },
        );
        assert_eq!(dot.matches("fillcolor=gray").count(), 3);
        assert_eq!(dot.matches("dir=both").count(), 1);
    }
}
