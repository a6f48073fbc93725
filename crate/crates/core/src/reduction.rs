//! 3-CNF to FO 2-coloring compiler.
//!
//! Every variable becomes a VAR gadget with one port per occurrence, every
//! clause two OR gadgets joined by an EQ, and every literal occurrence an EQ
//! "wire" from its VAR port to its OR input. Clause outputs are chained by
//! EQ gadgets, so all of them share one color, read as "true". The result is
//! FO 2-colorable exactly when the formula is satisfiable, with maximum
//! degree 6.
//!
//! [`planarize`] draws the wires as straight segments between a bottom row
//! of VAR ports and a top row of OR inputs and replaces every crossing of two
//! wires by an XO gadget, which yields a planar graph with the same answer.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gadgets::{instantiate, GadgetInstance, GadgetKind, GadgetTemplate};
use crate::multigraph::{Multigraph, VertexId};
use crate::orientation::{verify_fo2coloring, TwoColoring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    /// DIMACS form: `var + 1`, negative when negated.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(x: i64) -> Option<Self> {
        if x == 0 {
            return None;
        }
        Some(Self {
            var: x.unsigned_abs() as usize - 1,
            negated: x < 0,
        })
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("formula needs at least one variable")]
    NoVariables,
    #[error("formula needs at least one clause")]
    NoClauses,
    #[error("clause {clause}: variable {var} out of range (formula has {num_vars})")]
    LiteralOutOfRange {
        clause: usize,
        var: usize,
        num_vars: usize,
    },
    #[error("assignment has {got} values, formula has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("assignment leaves clause {0} unsatisfied")]
    Unsatisfied(usize),
    #[error("coloring has {got} entries, graph has {expected} vertices")]
    ColoringLength { expected: usize, got: usize },
    #[error("coloring is not an FO 2-coloring ({0} offending component(s))")]
    InvalidColoring(usize),
    #[error("decoded assignment leaves clause {0} unsatisfied")]
    Unsound(usize),
    #[error("gadget {index} ({role}) sees undeclared port pattern {pattern}")]
    UndeclaredPattern {
        index: usize,
        role: GadgetRole,
        pattern: String,
    },
}

/// 3-CNF formula; every clause has exactly three literals, repeats allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, ReductionError> {
        if num_vars == 0 {
            return Err(ReductionError::NoVariables);
        }
        if clauses.is_empty() {
            return Err(ReductionError::NoClauses);
        }
        for (clause, lits) in clauses.iter().enumerate() {
            if let Some(l) = lits.iter().find(|l| l.var >= num_vars) {
                return Err(ReductionError::LiteralOutOfRange {
                    clause,
                    var: l.var,
                    num_vars,
                });
            }
        }
        Ok(Self { num_vars, clauses })
    }

    /// Builds from DIMACS-style integer triples.
    pub fn from_dimacs(num_vars: usize, clauses: &[[i64; 3]]) -> Result<Self, ReductionError> {
        let mut out = Vec::with_capacity(clauses.len());
        for (clause, c) in clauses.iter().enumerate() {
            let mut lits = [Literal::pos(0); 3];
            for (slot, &x) in lits.iter_mut().zip(c) {
                *slot = Literal::from_dimacs(x).ok_or(ReductionError::LiteralOutOfRange {
                    clause,
                    var: usize::MAX,
                    num_vars,
                })?;
            }
            out.push(lits);
        }
        Self::new(num_vars, out)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.eval(assignment)))
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.first_unsatisfied(assignment).is_none()
    }

    /// All satisfying assignments, in binary counting order with variable 0
    /// as the low bit.
    pub fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        assert!(self.num_vars <= 24, "enumeration is for small formulas");
        (0u32..1 << self.num_vars)
            .map(|bits| (0..self.num_vars).map(|i| (bits >> i) & 1 == 1).collect())
            .filter(|a: &Vec<bool>| self.evaluate(a))
            .collect()
    }

    fn check_assignment(&self, a: &[bool]) -> Result<(), ReductionError> {
        if a.len() != self.num_vars {
            return Err(ReductionError::AssignmentLength {
                expected: self.num_vars,
                got: a.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Compiled,
    Planarized,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Compiled => "compiled",
            Stage::Planarized => "planarized",
        }
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "compiled" => Ok(Stage::Compiled),
            "planarized" => Ok(Stage::Planarized),
            _ => Err(format!("unknown stage {s:?}")),
        }
    }
}

/// What a registered gadget copy is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetRole {
    Var(usize),
    /// `half` 0 takes the first two literals, 1 the third plus the first's output.
    Or { clause: usize, half: u8 },
    /// EQ from the first OR's output to the second OR's `x`.
    Link(usize),
    /// EQ between the outputs of clauses `i` and `i + 1`.
    Chain(usize),
    /// One EQ segment of a literal wire.
    Wire { wire: usize, segment: usize },
    /// XO at the crossing of two wires, `first < second`.
    Cross { first: usize, second: usize },
}

impl fmt::Display for GadgetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GadgetRole::Var(v) => write!(f, "var:{v}"),
            GadgetRole::Or { clause, half } => write!(f, "or:{clause}:{half}"),
            GadgetRole::Link(c) => write!(f, "link:{c}"),
            GadgetRole::Chain(c) => write!(f, "chain:{c}"),
            GadgetRole::Wire { wire, segment } => write!(f, "wire:{wire}:{segment}"),
            GadgetRole::Cross { first, second } => write!(f, "xo:{first}:{second}"),
        }
    }
}

impl FromStr for GadgetRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad gadget role {s:?}");
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize, String> {
            parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad)
        };
        let role = match (parts[0], parts.len()) {
            ("var", 2) => GadgetRole::Var(num(1)?),
            ("or", 3) => GadgetRole::Or {
                clause: num(1)?,
                half: u8::try_from(num(2)?).map_err(|_| bad())?,
            },
            ("link", 2) => GadgetRole::Link(num(1)?),
            ("chain", 2) => GadgetRole::Chain(num(1)?),
            ("wire", 3) => GadgetRole::Wire {
                wire: num(1)?,
                segment: num(2)?,
            },
            ("xo", 3) => GadgetRole::Cross {
                first: num(1)?,
                second: num(2)?,
            },
            _ => return Err(bad()),
        };
        Ok(role)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisteredGadget {
    pub role: GadgetRole,
    pub instance: GadgetInstance,
}

/// VAR ports of one variable, padding anchors included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarPorts {
    pub positive: Vec<VertexId>,
    pub negative: Vec<VertexId>,
}

impl VarPorts {
    pub fn representative(&self) -> (VertexId, VertexId) {
        (self.positive[0], self.negative[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClausePorts {
    /// OR inputs for literal positions 0, 1, 2.
    pub inputs: [VertexId; 3],
    /// First OR's output and second OR's `x`, joined by the link EQ.
    pub link: [VertexId; 2],
    pub output: VertexId,
}

/// One literal occurrence: a wire from a VAR port to an OR input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireRoute {
    pub clause: usize,
    pub position: usize,
    pub literal: Literal,
    /// VAR port first, OR input last; XO ports in between, bottom to top.
    pub path: Vec<VertexId>,
}

impl WireRoute {
    pub fn var_port(&self) -> VertexId {
        self.path[0]
    }

    pub fn or_port(&self) -> VertexId {
        *self.path.last().expect("paths have two ends")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessMap {
    pub stage: Stage,
    pub formula: CnfFormula,
    pub vars: Vec<VarPorts>,
    pub clauses: Vec<ClausePorts>,
    /// Output of clause 0; its color means "true".
    pub root_output: VertexId,
    /// Indexed by wire id `3 * clause + position`.
    pub wires: Vec<WireRoute>,
    pub gadgets: Vec<RegisteredGadget>,
}

impl WitnessMap {
    pub fn crossing_count(&self) -> usize {
        self.gadgets
            .iter()
            .filter(|g| matches!(g.role, GadgetRole::Cross { .. }))
            .count()
    }

    pub fn gadget_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for g in &self.gadgets {
            *out.entry(g.instance.kind.name().to_string()).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub x: i64,
    pub vertex: VertexId,
}

/// Exact crossing of two wires at height `num / den` in `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub first: usize,
    pub second: usize,
    pub num: i128,
    pub den: i128,
}

impl Crossing {
    fn height_cmp(&self, other: &Crossing) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Bottom row of VAR ports (variables by index, each in port order), top row
/// of OR inputs (clauses by index, literal position order), straight wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoRowLayout {
    pub bottom: Vec<Slot>,
    pub top: Vec<Slot>,
    /// `(bottom slot, top slot)` per wire id.
    pub wires: Vec<(usize, usize)>,
}

impl TwoRowLayout {
    fn canonical(bottom: &[VertexId], top: &[VertexId], wires: Vec<(usize, usize)>) -> Self {
        let slots = |vs: &[VertexId], spread: Option<i64>| -> Vec<Slot> {
            vs.iter()
                .enumerate()
                .map(|(i, &vertex)| {
                    let i = i as i64;
                    Slot {
                        x: spread.map_or(i, |k| k * i + i * i),
                        vertex,
                    }
                })
                .collect()
        };
        // Spread the bottom row until no three wires meet in one point. The
        // quadratic term matters: under pure scaling, wires with equal
        // `bottom + top` index stay concurrent.
        for k in 1..=10_000 {
            let layout = Self {
                bottom: slots(bottom, Some(k)),
                top: slots(top, None),
                wires: wires.clone(),
            };
            if layout.crossings_distinct() {
                return layout;
            }
        }
        unreachable!("some spreading factor separates all crossings")
    }

    fn ends(&self, w: usize) -> (i128, i128) {
        let (b, t) = self.wires[w];
        (self.bottom[b].x as i128, self.top[t].x as i128)
    }

    /// All pairwise wire crossings, by `(first, second)`.
    pub fn crossings(&self) -> Vec<Crossing> {
        let mut out = Vec::new();
        for i in 0..self.wires.len() {
            let (bi, ti) = self.ends(i);
            for j in i + 1..self.wires.len() {
                let (bj, tj) = self.ends(j);
                if (bi - bj) * (ti - tj) >= 0 {
                    continue;
                }
                // b_i + (t_i - b_i) y = b_j + (t_j - b_j) y
                let (mut num, mut den) = (bj - bi, (ti - bi) - (tj - bj));
                if den < 0 {
                    num = -num;
                    den = -den;
                }
                out.push(Crossing {
                    first: i,
                    second: j,
                    num,
                    den,
                });
            }
        }
        out
    }

    /// Crossings on wire `w`, bottom to top.
    pub fn crossings_on(&self, w: usize, all: &[Crossing]) -> Vec<Crossing> {
        let mut on: Vec<Crossing> = all
            .iter()
            .filter(|c| c.first == w || c.second == w)
            .copied()
            .collect();
        on.sort_by(|a, b| a.height_cmp(b));
        on
    }

    fn crossings_distinct(&self) -> bool {
        let all = self.crossings();
        (0..self.wires.len()).all(|w| {
            let on = self.crossings_on(w, &all);
            on.windows(2).all(|p| p[0].height_cmp(&p[1]).is_lt())
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStats {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub crossings: usize,
    pub gadget_counts: BTreeMap<String, usize>,
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub graph: Multigraph,
    pub witness: WitnessMap,
    pub layout: TwoRowLayout,
    pub stats: ReductionStats,
}

impl ReductionOutput {
    pub fn stage(&self) -> Stage {
        self.witness.stage
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.witness.formula
    }
}

struct Build {
    g: Multigraph,
    gadgets: Vec<RegisteredGadget>,
}

impl Build {
    fn fresh(&mut self, k: usize) -> Vec<VertexId> {
        (0..k).map(|_| self.g.add_vertex()).collect()
    }

    fn gadget(&mut self, kind: GadgetKind, role: GadgetRole, ports: &[VertexId]) {
        let t = GadgetTemplate::get(kind).expect("reduction uses valid kinds");
        let instance = instantiate(&t, &mut self.g, ports).expect("reduction binds fresh ports");
        self.gadgets.push(RegisteredGadget { role, instance });
    }
}

pub fn compile(f: &CnfFormula) -> ReductionOutput {
    build(f, Stage::Compiled)
}

/// Planar version of `out`. Vertices shared with the compiled graph keep
/// their ids; planarizing a planarized output returns it unchanged.
pub fn planarize(out: &ReductionOutput) -> ReductionOutput {
    match out.stage() {
        Stage::Planarized => out.clone(),
        Stage::Compiled => build(out.formula(), Stage::Planarized),
    }
}

fn build(f: &CnfFormula, stage: Stage) -> ReductionOutput {
    let mut b = Build {
        g: Multigraph::new(0),
        gadgets: Vec::new(),
    };
    let nv = f.num_vars();
    let mut pos_occ: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut neg_occ: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (c, lits) in f.clauses().iter().enumerate() {
        for (p, l) in lits.iter().enumerate() {
            let w = 3 * c + p;
            if l.negated {
                neg_occ[l.var].push(w);
            } else {
                pos_occ[l.var].push(w);
            }
        }
    }

    let mut vars = Vec::with_capacity(nv);
    let mut wire_var_port = vec![usize::MAX; 3 * f.clauses().len()];
    let mut bottom = Vec::new();
    let mut bottom_slot = vec![usize::MAX; wire_var_port.len()];
    for v in 0..nv {
        let n = pos_occ[v].len().max(1);
        let m = neg_occ[v].len().max(1);
        let ports = b.fresh(n + m);
        b.gadget(GadgetKind::Var { n, m }, GadgetRole::Var(v), &ports);
        for (k, &w) in pos_occ[v].iter().enumerate() {
            wire_var_port[w] = ports[k];
        }
        for (k, &w) in neg_occ[v].iter().enumerate() {
            wire_var_port[w] = ports[n + k];
        }
        for &p in &ports {
            if let Some(w) = wire_var_port.iter().position(|&x| x == p) {
                bottom_slot[w] = bottom.len();
            }
            bottom.push(p);
        }
        vars.push(VarPorts {
            positive: ports[..n].to_vec(),
            negative: ports[n..].to_vec(),
        });
    }

    let mut clauses: Vec<ClausePorts> = Vec::with_capacity(f.clauses().len());
    for c in 0..f.clauses().len() {
        let first = b.fresh(3);
        b.gadget(GadgetKind::Or, GadgetRole::Or { clause: c, half: 0 }, &first);
        let second = b.fresh(3);
        b.gadget(GadgetKind::Or, GadgetRole::Or { clause: c, half: 1 }, &second);
        b.gadget(GadgetKind::Eq, GadgetRole::Link(c), &[first[2], second[0]]);
        if let Some(prev) = clauses.last() {
            b.gadget(GadgetKind::Eq, GadgetRole::Chain(c - 1), &[prev.output, second[2]]);
        }
        clauses.push(ClausePorts {
            inputs: [first[0], first[1], second[1]],
            link: [first[2], second[0]],
            output: second[2],
        });
    }

    let top: Vec<VertexId> = clauses.iter().flat_map(|c| c.inputs).collect();
    let layout = TwoRowLayout::canonical(
        &bottom,
        &top,
        (0..top.len()).map(|w| (bottom_slot[w], w)).collect(),
    );

    let crossings = match stage {
        Stage::Compiled => Vec::new(),
        Stage::Planarized => layout.crossings(),
    };
    let mut xo_ports: BTreeMap<(usize, usize), Vec<VertexId>> = BTreeMap::new();
    let mut wires = Vec::with_capacity(top.len());
    for (w, &or_port) in top.iter().enumerate() {
        let mut path = vec![wire_var_port[w]];
        for x in layout.crossings_on(w, &crossings) {
            let ports = xo_ports.entry((x.first, x.second)).or_insert_with(|| {
                let ports = b.fresh(4);
                b.gadget(
                    GadgetKind::Xo,
                    GadgetRole::Cross {
                        first: x.first,
                        second: x.second,
                    },
                    &ports,
                );
                ports
            });
            let (enter, leave) = if x.first == w {
                (ports[0], ports[1])
            } else {
                (ports[2], ports[3])
            };
            path.push(enter);
            path.push(leave);
        }
        path.push(or_port);
        for (segment, pair) in path.chunks(2).enumerate() {
            b.gadget(GadgetKind::Eq, GadgetRole::Wire { wire: w, segment }, pair);
        }
        wires.push(WireRoute {
            clause: w / 3,
            position: w % 3,
            literal: f.clauses()[w / 3][w % 3],
            path,
        });
    }

    let witness = WitnessMap {
        stage,
        formula: f.clone(),
        vars,
        root_output: clauses[0].output,
        clauses,
        wires,
        gadgets: b.gadgets,
    };
    let stats = ReductionStats {
        vertices: b.g.vertex_count(),
        edges: b.g.edge_count(),
        max_degree: b.g.max_degree(),
        crossings: witness.crossing_count(),
        gadget_counts: witness.gadget_counts(),
    };
    debug_assert!(stats.max_degree <= 6);
    ReductionOutput {
        graph: b.g,
        witness,
        layout,
        stats,
    }
}

/// Coloring of the compiled graph encoding a satisfying assignment, with
/// true as color 0. Gadget internals come from each template's canonical
/// coloring for the port pattern it sees.
pub fn assignment_to_coloring(
    out: &ReductionOutput,
    assignment: &[bool],
) -> Result<TwoColoring, ReductionError> {
    let w = &out.witness;
    let f = &w.formula;
    f.check_assignment(assignment)?;
    if let Some(c) = f.first_unsatisfied(assignment) {
        return Err(ReductionError::Unsatisfied(c));
    }
    let color_of = |truth: bool| if truth { 0u8 } else { 1 };
    let mut colors = vec![0u8; out.graph.vertex_count()];
    for (v, ports) in w.vars.iter().enumerate() {
        for &p in &ports.positive {
            colors[p] = color_of(assignment[v]);
        }
        for &p in &ports.negative {
            colors[p] = color_of(!assignment[v]);
        }
    }
    for wire in &w.wires {
        let c = colors[wire.var_port()];
        for &p in &wire.path {
            colors[p] = c;
        }
    }
    for (c, ports) in w.clauses.iter().enumerate() {
        let lits = &f.clauses()[c];
        let inner = color_of(lits[0].eval(assignment) || lits[1].eval(assignment));
        colors[ports.link[0]] = inner;
        colors[ports.link[1]] = inner;
        colors[ports.output] = color_of(true);
    }
    for (index, reg) in w.gadgets.iter().enumerate() {
        let inst = &reg.instance;
        let t = GadgetTemplate::get(inst.kind).expect("registered kinds are valid");
        let pattern = GadgetTemplate::pattern_of(&colors, &inst.ports);
        let canon = t
            .canonical_coloring(pattern)
            .ok_or_else(|| ReductionError::UndeclaredPattern {
                index,
                role: reg.role,
                pattern: crate::solver::pattern_string(pattern, inst.ports.len()),
            })?;
        for tv in inst.ports.len()..t.graph.vertex_count() {
            colors[inst.host_vertex(tv)] = canon.color(tv);
        }
    }
    let coloring = TwoColoring::from_bits(colors).expect("two colors");
    verify_fo2coloring(&out.graph, &coloring)
        .map_err(|bad| ReductionError::InvalidColoring(bad.len()))?;
    Ok(coloring)
}

/// Reads the assignment off a valid coloring: true is the color of the root
/// output, and a variable is true when its positive port has that color.
pub fn coloring_to_assignment(
    out: &ReductionOutput,
    coloring: &TwoColoring,
) -> Result<Vec<bool>, ReductionError> {
    decode_assignment(&out.graph, &out.witness, coloring)
}

/// [`coloring_to_assignment`] from a graph and witness map alone.
pub fn decode_assignment(
    graph: &Multigraph,
    w: &WitnessMap,
    coloring: &TwoColoring,
) -> Result<Vec<bool>, ReductionError> {
    if coloring.len() != graph.vertex_count() {
        return Err(ReductionError::ColoringLength {
            expected: graph.vertex_count(),
            got: coloring.len(),
        });
    }
    verify_fo2coloring(graph, coloring).map_err(|bad| ReductionError::InvalidColoring(bad.len()))?;
    let truth = coloring.color(w.root_output);
    let a: Vec<bool> = w
        .vars
        .iter()
        .map(|p| coloring.color(p.positive[0]) == truth)
        .collect();
    match w.formula.first_unsatisfied(&a) {
        None => Ok(a),
        Some(c) => Err(ReductionError::Unsound(c)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub stage: Stage,
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub planar: bool,
    pub gadget_counts: BTreeMap<String, usize>,
    pub crossings: usize,
    /// `18 |C|^2 - 6 |C|`.
    pub crossing_bound: usize,
    /// Registry references only existing vertices and accounts for every edge.
    pub registry_consistent: bool,
}

impl AuditReport {
    pub fn degree_ok(&self) -> bool {
        self.max_degree <= 6
    }

    pub fn planarity_ok(&self) -> bool {
        self.stage == Stage::Compiled || self.planar
    }

    pub fn passed(&self) -> bool {
        self.degree_ok()
            && self.planarity_ok()
            && self.crossings <= self.crossing_bound
            && self.registry_consistent
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "stage {}", self.stage.as_str())?;
        writeln!(f, "vertices {}", self.vertices)?;
        writeln!(f, "edges {}", self.edges)?;
        writeln!(f, "max_degree {}", self.max_degree)?;
        match self.stage {
            Stage::Planarized => writeln!(f, "planar {}", self.planar)?,
            Stage::Compiled => writeln!(f, "planar {} (not required)", self.planar)?,
        }
        for (kind, n) in &self.gadget_counts {
            writeln!(f, "gadgets {kind} {n}")?;
        }
        writeln!(f, "crossings {}", self.crossings)?;
        writeln!(f, "crossing_bound {}", self.crossing_bound)?;
        writeln!(f, "registry {}", if self.registry_consistent { "ok" } else { "inconsistent" })?;
        write!(f, "result {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn audit(out: &ReductionOutput) -> AuditReport {
    audit_parts(&out.graph, &out.witness)
}

pub fn audit_parts(graph: &Multigraph, w: &WitnessMap) -> AuditReport {
    let n = graph.vertex_count();
    let c = w.formula.clauses().len();
    let mut edges = 0;
    let mut consistent = true;
    for reg in &w.gadgets {
        let inst = &reg.instance;
        consistent &= inst.ports.iter().all(|&p| p < n) && inst.internal.end <= n;
        match GadgetTemplate::get(inst.kind) {
            Ok(t) => edges += t.graph.edge_count(),
            Err(_) => consistent = false,
        }
    }
    consistent &= edges == graph.edge_count();
    consistent &= w.root_output < n;
    AuditReport {
        stage: w.stage,
        vertices: n,
        edges: graph.edge_count(),
        max_degree: graph.max_degree(),
        planar: graph.is_planar(),
        gadget_counts: w.gadget_counts(),
        crossings: w.crossing_count(),
        crossing_bound: (18 * c * c).saturating_sub(6 * c),
        registry_consistent: consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_clause_sample() -> CnfFormula {
        CnfFormula::from_dimacs(3, &[[1, 2, 3], [-1, -2, -3]]).unwrap()
    }

    #[test]
    fn sample_gadget_counts() {
        let out = compile(&two_clause_sample());
        let counts = &out.stats.gadget_counts;
        assert_eq!(counts["var"], 3);
        assert_eq!(counts["or"], 4);
        // 6 wires, 2 links, 1 chain.
        assert_eq!(counts["eq"], 9);
        assert_eq!(out.stats.max_degree, 6);
        assert_eq!(out.stats.crossings, 0);
    }

    #[test]
    fn repeated_literal_pads_negative_side() {
        let f = CnfFormula::from_dimacs(1, &[[1, 1, 1]]).unwrap();
        let out = compile(&f);
        assert_eq!(out.witness.gadgets[0].instance.kind, GadgetKind::Var { n: 3, m: 1 });
        assert_eq!(out.stats.gadget_counts["or"], 2);
        assert!(!out.witness.gadgets.iter().any(|g| matches!(g.role, GadgetRole::Chain(_))));
    }

    #[test]
    fn sample_layout_has_three_crossings() {
        let out = compile(&two_clause_sample());
        assert_eq!(out.layout.crossings().len(), 3);
        let p = planarize(&out);
        assert_eq!(p.stats.crossings, 3);
        assert_eq!(p.stats.gadget_counts["xo"], 3);
        assert!(p.graph.is_planar());
        assert!(p.stats.max_degree <= 6);
    }

    #[test]
    fn planarize_keeps_compiled_prefix_and_is_idempotent() {
        let out = compile(&two_clause_sample());
        let p = planarize(&out);
        assert_eq!(p.witness.vars, out.witness.vars);
        assert_eq!(p.witness.clauses, out.witness.clauses);
        let again = planarize(&p);
        assert_eq!(again.graph, p.graph);
        assert_eq!(again.witness, p.witness);
    }

    #[test]
    fn assignment_round_trip_on_sample() {
        let f = two_clause_sample();
        let out = compile(&f);
        let a = vec![true, false, false];
        let c = assignment_to_coloring(&out, &a).unwrap();
        assert_eq!(coloring_to_assignment(&out, &c).unwrap(), a);
        assert_eq!(
            assignment_to_coloring(&out, &[true, true, true]),
            Err(ReductionError::Unsatisfied(1))
        );
    }

    #[test]
    fn invalid_coloring_is_rejected() {
        let out = compile(&two_clause_sample());
        let c = TwoColoring::uniform(out.graph.vertex_count(), 0);
        assert!(matches!(
            coloring_to_assignment(&out, &c),
            Err(ReductionError::InvalidColoring(_))
        ));
    }

    #[test]
    fn roles_round_trip() {
        for r in [
            GadgetRole::Var(2),
            GadgetRole::Or { clause: 1, half: 1 },
            GadgetRole::Link(0),
            GadgetRole::Chain(3),
            GadgetRole::Wire { wire: 4, segment: 2 },
            GadgetRole::Cross { first: 1, second: 7 },
        ] {
            assert_eq!(r.to_string().parse::<GadgetRole>(), Ok(r));
        }
        assert!("or:1".parse::<GadgetRole>().is_err());
    }

    #[test]
    fn formula_validation() {
        assert_eq!(CnfFormula::new(0, vec![]), Err(ReductionError::NoVariables));
        assert_eq!(CnfFormula::new(1, vec![]), Err(ReductionError::NoClauses));
        assert!(matches!(
            CnfFormula::new(1, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(0)]]),
            Err(ReductionError::LiteralOutOfRange { clause: 0, var: 1, .. })
        ));
    }

    #[test]
    fn k5_audit_negative_control() {
        let g = crate::samples::complete(5);
        let w = compile(&two_clause_sample()).witness;
        let mut w = w;
        w.stage = Stage::Planarized;
        let r = audit_parts(&g, &w);
        assert!(!r.planar);
        assert!(!r.passed());
    }
}
