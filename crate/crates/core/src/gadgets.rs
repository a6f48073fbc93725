//! Gadget templates: small multigraphs with distinguished ports whose FO
//! 2-colorings realize a fixed relation between the port colors.
//!
//! | gadget | ports | allowed port patterns |
//! |--------|-------|-----------------------|
//! | NOT    | x y   | x != y |
//! | EQ     | x y   | x == y |
//! | NE     | x y   | x != y, built from EQ/NOT/EQ |
//! | OR     | x y z | all but `001` and `110` |
//! | VAR    | x_1..x_n, x̄_1..x̄_m | all x_i equal, all x̄_j equal, x != x̄ |
//!
//! VAR is the path `x_1 = .. = x_n != x̄_1 = .. = x̄_m` of EQ gadgets with one
//! NE in the middle, so its ports line up left to right in port order.
//! | XO     | x x' y y' | x == x', y == y' |
//!
//! Internal vertices are numbered in the order a depth-first search meets
//! them: each sub-gadget's internals are allocated as soon as both of its
//! endpoints exist. This keeps the exact solver's variable order local.
//!
//! Port degrees are at most 4 and internal degrees at most 6, so wiring every
//! port into one EQ keeps the host graph at maximum degree 6.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::exec::Exec;
use crate::multigraph::{Multigraph, VertexId};
use crate::orientation::TwoColoring;
use crate::solver::{self, pattern_string, PortTable, SolveError, SolveLimits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    Not,
    Eq,
    Ne,
    Or,
    /// Variable gadget with `n` positive and `m` negative ports, both >= 1.
    Var { n: usize, m: usize },
    Xo,
}

impl GadgetKind {
    pub const FIXED: [GadgetKind; 5] = [
        GadgetKind::Not,
        GadgetKind::Eq,
        GadgetKind::Ne,
        GadgetKind::Or,
        GadgetKind::Xo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::Not => "not",
            GadgetKind::Eq => "eq",
            GadgetKind::Ne => "ne",
            GadgetKind::Or => "or",
            GadgetKind::Var { .. } => "var",
            GadgetKind::Xo => "xo",
        }
    }

    pub fn port_count(self) -> usize {
        match self {
            GadgetKind::Not | GadgetKind::Eq | GadgetKind::Ne => 2,
            GadgetKind::Or => 3,
            GadgetKind::Var { n, m } => n + m,
            GadgetKind::Xo => 4,
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetKind::Var { n, m } => write!(f, "var({n},{m})"),
            k => f.write_str(k.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("unknown gadget kind {0:?}")]
    UnknownKind(String),
    #[error("VAR gadget needs n >= 1 and m >= 1, got ({n},{m})")]
    EmptyVar { n: usize, m: usize },
    #[error("binding has {got} vertices, gadget has {expected} ports")]
    BindingLength { expected: usize, got: usize },
    #[error("binding vertex {vertex} is not in the host graph")]
    BindingOutOfRange { vertex: VertexId },
    #[error("binding repeats vertex {0}")]
    BindingRepeat(VertexId),
}

impl FromStr for GadgetKind {
    type Err = GadgetError;

    /// Accepts `not`, `eq`, `ne`, `or`, `xo`, `var` (1,1) and `var(n,m)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let kind = match t.as_str() {
            "not" => GadgetKind::Not,
            "eq" => GadgetKind::Eq,
            "ne" => GadgetKind::Ne,
            "or" => GadgetKind::Or,
            "xo" => GadgetKind::Xo,
            "var" => GadgetKind::Var { n: 1, m: 1 },
            _ => {
                let inner = t
                    .strip_prefix("var(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| GadgetError::UnknownKind(s.to_string()))?;
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| GadgetError::UnknownKind(s.to_string()))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| GadgetError::UnknownKind(s.to_string()))
                };
                let (n, m) = (parse(a)?, parse(b)?);
                if n == 0 || m == 0 {
                    return Err(GadgetError::EmptyVar { n, m });
                }
                GadgetKind::Var { n, m }
            }
        };
        Ok(kind)
    }
}

/// Template graph plus port list and the port relation it is meant to realize.
#[derive(Debug)]
pub struct GadgetTemplate {
    pub kind: GadgetKind,
    pub graph: Multigraph,
    /// Ports are always vertices `0..ports.len()`.
    pub ports: Vec<VertexId>,
    pub port_names: Vec<String>,
    /// Declared allowed patterns, sorted; bit `i` is the color of port `i`.
    pub declared: Vec<u32>,
    canonical: OnceLock<Vec<Option<TwoColoring>>>,
}

/// Ports and internal vertex range of one gadget copy inside a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    pub ports: Vec<VertexId>,
    pub internal: Range<VertexId>,
}

impl GadgetInstance {
    /// Host vertex of template vertex `t`.
    pub fn host_vertex(&self, t: VertexId) -> VertexId {
        if t < self.ports.len() {
            self.ports[t]
        } else {
            self.internal.start + (t - self.ports.len())
        }
    }
}

struct Builder {
    g: Multigraph,
}

impl Builder {
    fn with_ports(k: usize) -> Self {
        Self {
            g: Multigraph::new(k),
        }
    }

    fn vertex(&mut self) -> VertexId {
        self.g.add_vertex()
    }

    fn edges(&mut self, u: VertexId, v: VertexId, k: usize) {
        self.g.add_edges(u, v, k).expect("builder edges are valid");
    }

    fn not(&mut self, x: VertexId, y: VertexId) {
        self.edges(x, y, 3);
    }

    fn eq(&mut self, x: VertexId, y: VertexId) {
        let gamma = self.vertex();
        let alpha = self.vertex();
        let beta = self.vertex();
        let [a, b, c, d] = [(); 4].map(|_| self.vertex());
        self.edges(x, gamma, 2);
        self.edges(gamma, y, 2);
        self.edges(gamma, alpha, 1);
        self.edges(alpha, beta, 1);
        self.edges(beta, gamma, 1);
        self.edges(alpha, a, 2);
        self.edges(alpha, b, 2);
        self.not(a, b);
        self.edges(beta, c, 2);
        self.edges(beta, d, 2);
        self.not(c, d);
    }

    fn ne(&mut self, x: VertexId, y: VertexId) {
        let u = self.vertex();
        self.eq(x, u);
        let w = self.vertex();
        self.not(u, w);
        self.eq(w, y);
    }
}

fn build_graph(kind: GadgetKind) -> Multigraph {
    let mut b = Builder::with_ports(kind.port_count());
    match kind {
        GadgetKind::Not => b.not(0, 1),
        GadgetKind::Eq => b.eq(0, 1),
        GadgetKind::Ne => b.ne(0, 1),
        GadgetKind::Or => {
            let (x, y, z) = (0, 1, 2);
            let zeta = b.vertex();
            b.eq(x, zeta);
            let gamma = b.vertex();
            b.eq(y, gamma);
            b.edges(gamma, zeta, 2);
            let eta = b.vertex();
            b.edges(zeta, eta, 2);
            let alpha = b.vertex();
            b.edges(eta, alpha, 2);
            b.eq(alpha, z);
            let beta = b.vertex();
            b.edges(alpha, beta, 2);
            b.edges(beta, gamma, 2);
        }
        GadgetKind::Var { n, m } => {
            for i in 1..n {
                b.eq(i - 1, i);
            }
            b.ne(n - 1, n);
            for j in 1..m {
                b.eq(n + j - 1, n + j);
            }
        }
        GadgetKind::Xo => build_xo(&mut b),
    }
    b.g
}

/// Crossover. Ports `x, x'` carry one wire and `y, y'` the other; the
/// skeleton nodes are numbered 1..17 with 16 unused.
fn build_xo(b: &mut Builder) {
    let (x, xp, y, yp) = (0, 1, 2, 3);
    let mut n = [usize::MAX; 18];
    let mut node = |b: &mut Builder, i: usize| {
        n[i] = b.vertex();
        n[i]
    };
    let n8 = node(b, 8);
    b.edges(n8, x, 2);
    let n7 = node(b, 7);
    b.eq(n7, x);
    b.edges(n7, n8, 1);
    b.edges(n7, y, 2);
    let n6 = node(b, 6);
    b.edges(n6, n7, 1);
    let n15 = node(b, 15);
    b.eq(n6, n15);
    b.eq(n15, y);
    let n5 = node(b, 5);
    b.edges(n5, n6, 1);
    b.edges(n5, n15, 2);
    let n13 = node(b, 13);
    b.edges(n13, n5, 2);
    let n12 = node(b, 12);
    b.edges(n12, n5, 1);
    b.eq(n13, n12);
    b.edges(n12, xp, 2);
    let n11 = node(b, 11);
    b.edges(n11, n12, 1);
    b.eq(n11, xp);
    b.edges(n11, yp, 2);
    let n10 = node(b, 10);
    b.edges(n10, n11, 1);
    let n17 = node(b, 17);
    b.eq(n10, n17);
    b.eq(n17, yp);
    let n9 = node(b, 9);
    b.edges(n9, n10, 1);
    b.edges(n9, n17, 2);
    b.edges(n8, n9, 1);
    let n14 = node(b, 14);
    b.edges(n14, n9, 2);
    b.eq(n14, n8);
    let n1 = node(b, 1);
    b.ne(n1, n6);
    let n2 = node(b, 2);
    b.eq(n1, n2);
    b.eq(n2, n14);
    let n3 = node(b, 3);
    b.eq(n2, n3);
    b.ne(n3, n10);
    let n4 = node(b, 4);
    b.eq(n3, n4);
    b.eq(n4, n1);
    b.eq(n4, n13);
}

fn port_names(kind: GadgetKind) -> Vec<String> {
    let fixed: &[&str] = match kind {
        GadgetKind::Not | GadgetKind::Eq | GadgetKind::Ne => &["x", "y"],
        GadgetKind::Or => &["x", "y", "z"],
        GadgetKind::Xo => &["x", "x'", "y", "y'"],
        GadgetKind::Var { n, m } => {
            return (1..=n)
                .map(|i| format!("x{i}"))
                .chain((1..=m).map(|j| format!("xbar{j}")))
                .collect()
        }
    };
    fixed.iter().map(|s| s.to_string()).collect()
}

fn declared_patterns(kind: GadgetKind) -> Vec<u32> {
    let k = kind.port_count();
    let bit = |p: u32, i: usize| (p >> i) & 1;
    let ok = |p: u32| match kind {
        GadgetKind::Not | GadgetKind::Ne => bit(p, 0) != bit(p, 1),
        GadgetKind::Eq => bit(p, 0) == bit(p, 1),
        GadgetKind::Or => {
            let (x, y, z) = (bit(p, 0), bit(p, 1), bit(p, 2));
            !(x == y && z != x)
        }
        GadgetKind::Var { n, m } => {
            let first = bit(p, 0);
            (0..n).all(|i| bit(p, i) == first) && (n..n + m).all(|j| bit(p, j) != first)
        }
        GadgetKind::Xo => bit(p, 0) == bit(p, 1) && bit(p, 2) == bit(p, 3),
    };
    (0..1u32 << k).filter(|&p| ok(p)).collect()
}

impl GadgetTemplate {
    pub fn build(kind: GadgetKind) -> Result<Self, GadgetError> {
        if let GadgetKind::Var { n, m } = kind {
            if n == 0 || m == 0 {
                return Err(GadgetError::EmptyVar { n, m });
            }
        }
        let graph = build_graph(kind);
        Ok(Self {
            kind,
            ports: (0..kind.port_count()).collect(),
            port_names: port_names(kind),
            declared: declared_patterns(kind),
            graph,
            canonical: OnceLock::new(),
        })
    }

    /// Shared, lazily built template.
    pub fn get(kind: GadgetKind) -> Result<Arc<GadgetTemplate>, GadgetError> {
        static CACHE: OnceLock<Mutex<HashMap<GadgetKind, Arc<GadgetTemplate>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("gadget cache").get(&kind) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(Self::build(kind)?);
        let mut map = cache.lock().expect("gadget cache");
        Ok(Arc::clone(map.entry(kind).or_insert(t)))
    }

    pub fn internal_count(&self) -> usize {
        self.graph.vertex_count() - self.ports.len()
    }

    pub fn declares(&self, pattern: u32) -> bool {
        self.declared.binary_search(&pattern).is_ok()
    }

    /// Lexicographically smallest FO 2-coloring of the template with the
    /// given port pattern, if the pattern is declared. Computed once per
    /// template, unlimited search.
    pub fn canonical_coloring(&self, pattern: u32) -> Option<&TwoColoring> {
        let all = self.canonical.get_or_init(|| {
            let n = self.graph.vertex_count();
            Exec::default().map(self.declared.clone(), |p| {
                let pins = solver::pattern_pins(n, &self.ports, p);
                solver::extend(&self.graph, &pins, SolveLimits::unlimited())
                    .expect("pins are well formed")
                    .witness()
                    .cloned()
            })
        });
        let i = self.declared.binary_search(&pattern).ok()?;
        all[i].as_ref()
    }

    /// Pattern of port colors under a host coloring.
    pub fn pattern_of(colors: &[u8], ports: &[VertexId]) -> u32 {
        ports
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &p)| acc | ((colors[p] as u32) << i))
    }
}

/// Copies `template` into `host`. Ports are identified with `binding`;
/// internal vertices are appended in template order, then all template
/// edges are added in template order.
pub fn instantiate(
    template: &GadgetTemplate,
    host: &mut Multigraph,
    binding: &[VertexId],
) -> Result<GadgetInstance, GadgetError> {
    if binding.len() != template.ports.len() {
        return Err(GadgetError::BindingLength {
            expected: template.ports.len(),
            got: binding.len(),
        });
    }
    for (i, &v) in binding.iter().enumerate() {
        if v >= host.vertex_count() {
            return Err(GadgetError::BindingOutOfRange { vertex: v });
        }
        if binding[..i].contains(&v) {
            return Err(GadgetError::BindingRepeat(v));
        }
    }
    let start = host.vertex_count();
    for _ in 0..template.internal_count() {
        host.add_vertex();
    }
    let inst = GadgetInstance {
        kind: template.kind,
        ports: binding.to_vec(),
        internal: start..host.vertex_count(),
    };
    for &(u, v) in template.graph.edges() {
        host.add_edge(inst.host_vertex(u), inst.host_vertex(v))
            .expect("template edges map to distinct host vertices");
    }
    Ok(inst)
}

/// Solver-backed check of one template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetReport {
    pub kind: GadgetKind,
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub max_port_degree: usize,
    pub table: PortTable,
    pub declared: Vec<u32>,
    /// For EQ only: no FO 2-coloring gives the center the color of `x`.
    pub center_opposite: Option<bool>,
}

impl GadgetReport {
    pub fn table_matches(&self) -> bool {
        self.table.patterns == self.declared
    }

    pub fn passed(&self) -> bool {
        self.table_matches() && self.max_degree <= 6 && self.center_opposite != Some(false)
    }

    pub fn table_strings(&self) -> Vec<String> {
        self.table.pattern_strings()
    }

    pub fn declared_strings(&self) -> Vec<String> {
        let k = self.table.ports.len();
        self.declared.iter().map(|&p| pattern_string(p, k)).collect()
    }
}

/// Computes the realized port table and compares it with the declared one.
pub fn verify_template(
    t: &GadgetTemplate,
    limits: SolveLimits,
    exec: Exec,
) -> Result<GadgetReport, SolveError> {
    let table = solver::port_table_with(&t.graph, &t.ports, limits, exec)?;
    let center_opposite = if t.kind == GadgetKind::Eq {
        let gamma = t.ports.len();
        let mut opposite = true;
        for c in 0..2 {
            let mut pins = vec![None; t.graph.vertex_count()];
            pins[0] = Some(c);
            pins[gamma] = Some(c);
            match solver::extend(&t.graph, &pins, limits)? {
                solver::Outcome::No => {}
                solver::Outcome::Yes(_) => opposite = false,
                solver::Outcome::Indeterminate => {
                    return Err(SolveError::Indeterminate(format!("center={c}")))
                }
            }
        }
        Some(opposite)
    } else {
        None
    };
    Ok(GadgetReport {
        kind: t.kind,
        vertices: t.graph.vertex_count(),
        edges: t.graph.edge_count(),
        max_degree: t.graph.max_degree(),
        max_port_degree: t.ports.iter().map(|&p| t.graph.degree(p)).max().unwrap_or(0),
        table,
        declared: t.declared.clone(),
        center_opposite,
    })
}
