//! Line-oriented text formats.
//!
//! * graph: `graph <n>` then one `e <u> <v>` per edge, in edge-id order.
//! * coloring: one `c <vertex> <0|1>` per vertex.
//! * orientation: one `o <edge-id> <fwd|rev|both|none>` per edge.
//! * CNF: DIMACS, clauses of 1 to 3 literals padded by repeating the last.
//! * assignment: DIMACS solution lines, `v 1 -2 3 0`.
//! * witness map: key-value lines, see [`emit_witness`].
//!
//! Blank lines and lines starting with `#` are ignored everywhere except in
//! DIMACS, which uses `c` comments instead.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::gadgets::{GadgetInstance, GadgetKind};
use crate::multigraph::{GraphError, Multigraph};
use crate::orientation::{FunctionalOrientation, Mark, TwoColoring};
use crate::reduction::{
    ClausePorts, CnfFormula, GadgetRole, Literal, RegisteredGadget, Stage, VarPorts, WireRoute,
    WitnessMap,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("{0}")]
    Incomplete(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Non-blank, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("bad {what} {tok:?}")))
}

pub fn emit_graph(g: &Multigraph) -> String {
    let mut s = format!("graph {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "e {u} {v}");
    }
    s
}

pub fn parse_graph(text: &str) -> Result<Multigraph, FormatError> {
    let mut g: Option<Multigraph> = None;
    for (line, toks) in content_lines(text) {
        match (toks[0], &g) {
            ("graph", None) => {
                if toks.len() != 2 {
                    return Err(syntax(line, "expected `graph <vertex count>`"));
                }
                g = Some(Multigraph::new(num(line, toks[1], "vertex count")?));
            }
            ("graph", Some(_)) => return Err(syntax(line, "second `graph` header")),
            ("e", Some(_)) => {
                if toks.len() != 3 {
                    return Err(syntax(line, "expected `e <u> <v>`"));
                }
                let u = num(line, toks[1], "vertex")?;
                let v = num(line, toks[2], "vertex")?;
                g.as_mut()
                    .expect("header seen")
                    .add_edge(u, v)
                    .map_err(|source| FormatError::Graph { line, source })?;
            }
            ("e", None) => return Err(syntax(line, "edge before `graph` header")),
            (other, _) => return Err(syntax(line, format!("unknown record {other:?}"))),
        }
    }
    g.ok_or_else(|| FormatError::Incomplete("missing `graph` header".into()))
}

pub fn emit_coloring(c: &TwoColoring) -> String {
    let mut s = String::new();
    for (v, b) in c.bits().iter().enumerate() {
        let _ = writeln!(s, "c {v} {b}");
    }
    s
}

/// Parses a coloring of exactly `n` vertices, each listed once.
pub fn parse_coloring(text: &str, n: usize) -> Result<TwoColoring, FormatError> {
    let mut bits: Vec<Option<u8>> = vec![None; n];
    for (line, toks) in content_lines(text) {
        if toks.len() != 3 || toks[0] != "c" {
            return Err(syntax(line, "expected `c <vertex> <0|1>`"));
        }
        let v: usize = num(line, toks[1], "vertex")?;
        let b: u8 = num(line, toks[2], "color")?;
        if v >= n {
            return Err(syntax(line, format!("vertex {v} out of range (n = {n})")));
        }
        if b > 1 {
            return Err(syntax(line, format!("color {b} is not 0 or 1")));
        }
        if bits[v].replace(b).is_some() {
            return Err(syntax(line, format!("vertex {v} colored twice")));
        }
    }
    let bits = bits
        .into_iter()
        .enumerate()
        .map(|(v, b)| b.ok_or_else(|| FormatError::Incomplete(format!("vertex {v} has no color"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TwoColoring::from_bits(bits).expect("checked colors"))
}

pub fn emit_orientation(o: &FunctionalOrientation) -> String {
    let mut s = String::new();
    for (e, m) in o.marks().iter().enumerate() {
        let _ = writeln!(s, "o {e} {m}");
    }
    s
}

pub fn parse_orientation(text: &str, edges: usize) -> Result<FunctionalOrientation, FormatError> {
    let mut marks: Vec<Option<Mark>> = vec![None; edges];
    for (line, toks) in content_lines(text) {
        if toks.len() != 3 || toks[0] != "o" {
            return Err(syntax(line, "expected `o <edge> <fwd|rev|both|none>`"));
        }
        let e: usize = num(line, toks[1], "edge id")?;
        let m = Mark::parse(toks[2]).ok_or_else(|| syntax(line, format!("bad mark {:?}", toks[2])))?;
        if e >= edges {
            return Err(syntax(line, format!("edge {e} out of range ({edges} edges)")));
        }
        if marks[e].replace(m).is_some() {
            return Err(syntax(line, format!("edge {e} listed twice")));
        }
    }
    let marks = marks
        .into_iter()
        .enumerate()
        .map(|(e, m)| m.ok_or_else(|| FormatError::Incomplete(format!("edge {e} has no mark"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FunctionalOrientation::new(marks))
}

/// DIMACS CNF. Clauses may span lines; `c` lines are comments and a `%`
/// line ends the clause list.
pub fn parse_cnf(text: &str) -> Result<CnfFormula, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        if l.starts_with('%') {
            break;
        }
        if l.starts_with('p') {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if header.is_some() || toks.len() != 4 || toks[1] != "cnf" {
                return Err(syntax(line, "expected one `p cnf <vars> <clauses>` header"));
            }
            header = Some((num(line, toks[2], "variable count")?, num(line, toks[3], "clause count")?));
            continue;
        }
        let Some((nv, _)) = header else {
            return Err(syntax(line, "clause before `p cnf` header"));
        };
        for tok in l.split_whitespace() {
            let x: i64 = num(line, tok, "literal")?;
            if x == 0 {
                clauses.push(pad_clause(line, &current)?);
                current.clear();
                continue;
            }
            if x.unsigned_abs() as usize > nv {
                return Err(syntax(line, format!("literal {x} out of range ({nv} variables)")));
            }
            current.push(Literal::from_dimacs(x).expect("nonzero"));
        }
        last_line = line;
    }
    let (nv, nc) = header.ok_or_else(|| FormatError::Incomplete("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        clauses.push(pad_clause(last_line, &current)?);
    }
    if clauses.len() != nc {
        return Err(FormatError::Incomplete(format!(
            "header declares {nc} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(nv, clauses).map_err(|e| FormatError::Incomplete(e.to_string()))
}

fn pad_clause(line: usize, lits: &[Literal]) -> Result<[Literal; 3], FormatError> {
    match *lits {
        [] => Err(syntax(line, "empty clause")),
        [a] => Ok([a, a, a]),
        [a, b] => Ok([a, b, b]),
        [a, b, c] => Ok([a, b, c]),
        _ => Err(syntax(line, format!("clause has {} literals; at most 3 allowed", lits.len()))),
    }
}

pub fn emit_cnf(f: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.num_vars(), f.clauses().len());
    for c in f.clauses() {
        let _ = writeln!(s, "{} {} {} 0", c[0], c[1], c[2]);
    }
    s
}

/// DIMACS solution lines (`v ... 0`, `s`/`c` lines ignored); every variable
/// must be given exactly once.
pub fn parse_assignment(text: &str, num_vars: usize) -> Result<Vec<bool>, FormatError> {
    let mut a: Vec<Option<bool>> = vec![None; num_vars];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') || l.starts_with('s') || l.starts_with('#') {
            continue;
        }
        let body = l.strip_prefix('v').unwrap_or(l);
        for tok in body.split_whitespace() {
            let x: i64 = num(line, tok, "literal")?;
            if x == 0 {
                continue;
            }
            let lit = Literal::from_dimacs(x).expect("nonzero");
            if lit.var >= num_vars {
                return Err(syntax(line, format!("literal {x} out of range ({num_vars} variables)")));
            }
            if a[lit.var].replace(!lit.negated).is_some() {
                return Err(syntax(line, format!("variable {} given twice", lit.var + 1)));
            }
        }
    }
    a.into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| FormatError::Incomplete(format!("variable {} missing", v + 1))))
        .collect()
}

pub fn emit_assignment(a: &[bool]) -> String {
    let mut s = String::from("v");
    for (v, &x) in a.iter().enumerate() {
        let lit = if x { v as i64 + 1 } else { -(v as i64 + 1) };
        let _ = write!(s, " {lit}");
    }
    s.push_str(" 0\n");
    s
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Witness map as key-value lines:
///
/// ```text
/// fo2color-witness
/// stage compiled
/// num_vars 3
/// clause 0 1 2 3
/// var 0 pos 0 neg 1
/// clause_ports 0 inputs 40 41 63 link 42 62 output 64
/// root_output 64
/// wire 0 path 0 40
/// gadget var:0 var(1,1) ports 0,1 internal 2 18
/// ```
pub fn emit_witness(w: &WitnessMap) -> String {
    let mut s = String::from("fo2color-witness\n");
    let _ = writeln!(s, "stage {}", w.stage.as_str());
    let _ = writeln!(s, "num_vars {}", w.formula.num_vars());
    for (i, c) in w.formula.clauses().iter().enumerate() {
        let _ = writeln!(s, "clause {i} {} {} {}", c[0], c[1], c[2]);
    }
    for (i, v) in w.vars.iter().enumerate() {
        let _ = writeln!(s, "var {i} pos {} neg {}", join(&v.positive), join(&v.negative));
    }
    for (i, c) in w.clauses.iter().enumerate() {
        let _ = writeln!(
            s,
            "clause_ports {i} inputs {} {} {} link {} {} output {}",
            c.inputs[0], c.inputs[1], c.inputs[2], c.link[0], c.link[1], c.output
        );
    }
    let _ = writeln!(s, "root_output {}", w.root_output);
    for (i, wire) in w.wires.iter().enumerate() {
        let _ = writeln!(s, "wire {i} path {}", join(&wire.path));
    }
    for g in &w.gadgets {
        let _ = writeln!(
            s,
            "gadget {} {} ports {} internal {} {}",
            g.role,
            g.instance.kind,
            join(&g.instance.ports),
            g.instance.internal.start,
            g.instance.internal.end
        );
    }
    s
}

fn list(line: usize, tok: &str) -> Result<Vec<usize>, FormatError> {
    tok.split(',').map(|x| num(line, x, "vertex")).collect()
}

pub fn parse_witness(text: &str) -> Result<WitnessMap, FormatError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, t)) if t == ["fo2color-witness"] => {}
        Some((line, _)) => return Err(syntax(line, "expected `fo2color-witness` header")),
        None => return Err(FormatError::Incomplete("empty witness".into())),
    }
    let mut stage = None;
    let mut num_vars = None;
    let mut clauses: BTreeMap<usize, [Literal; 3]> = BTreeMap::new();
    let mut vars: BTreeMap<usize, VarPorts> = BTreeMap::new();
    let mut ports: BTreeMap<usize, ClausePorts> = BTreeMap::new();
    let mut root_output = None;
    let mut paths: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut gadgets = Vec::new();
    for (line, t) in lines {
        let want = |k: usize| {
            if t.len() == k {
                Ok(())
            } else {
                Err(syntax(line, format!("`{}` takes {} fields", t[0], k - 1)))
            }
        };
        match t[0] {
            "stage" => {
                want(2)?;
                stage = Some(t[1].parse::<Stage>().map_err(|e| syntax(line, e))?);
            }
            "num_vars" => {
                want(2)?;
                num_vars = Some(num::<usize>(line, t[1], "variable count")?);
            }
            "clause" => {
                want(5)?;
                let mut lits = [Literal::pos(0); 3];
                for (slot, tok) in lits.iter_mut().zip(&t[2..]) {
                    *slot = Literal::from_dimacs(num(line, tok, "literal")?)
                        .ok_or_else(|| syntax(line, "literal 0"))?;
                }
                clauses.insert(num(line, t[1], "clause index")?, lits);
            }
            "var" => {
                want(6)?;
                if t[2] != "pos" || t[4] != "neg" {
                    return Err(syntax(line, "expected `var <i> pos <list> neg <list>`"));
                }
                vars.insert(
                    num(line, t[1], "variable index")?,
                    VarPorts {
                        positive: list(line, t[3])?,
                        negative: list(line, t[5])?,
                    },
                );
            }
            "clause_ports" => {
                want(11)?;
                if t[2] != "inputs" || t[6] != "link" || t[9] != "output" {
                    return Err(syntax(line, "malformed `clause_ports`"));
                }
                let v = |i: usize| num::<usize>(line, t[i], "vertex");
                ports.insert(
                    num(line, t[1], "clause index")?,
                    ClausePorts {
                        inputs: [v(3)?, v(4)?, v(5)?],
                        link: [v(7)?, v(8)?],
                        output: v(10)?,
                    },
                );
            }
            "root_output" => {
                want(2)?;
                root_output = Some(num::<usize>(line, t[1], "vertex")?);
            }
            "wire" => {
                want(4)?;
                if t[2] != "path" {
                    return Err(syntax(line, "expected `wire <i> path <list>`"));
                }
                paths.insert(num(line, t[1], "wire index")?, list(line, t[3])?);
            }
            "gadget" => {
                want(8)?;
                if t[3] != "ports" || t[5] != "internal" {
                    return Err(syntax(line, "malformed `gadget`"));
                }
                let role: GadgetRole = t[1].parse().map_err(|e: String| syntax(line, e))?;
                let kind: GadgetKind = t[2].parse().map_err(|e| syntax(line, format!("{e}")))?;
                let start = num(line, t[6], "vertex")?;
                let end = num(line, t[7], "vertex")?;
                gadgets.push(RegisteredGadget {
                    role,
                    instance: GadgetInstance {
                        kind,
                        ports: list(line, t[4])?,
                        internal: start..end,
                    },
                });
            }
            other => return Err(syntax(line, format!("unknown key {other:?}"))),
        }
    }
    let missing = |what: &str| FormatError::Incomplete(format!("witness lacks {what}"));
    let num_vars = num_vars.ok_or_else(|| missing("num_vars"))?;
    let dense = |n: usize, keys: Vec<usize>, what: &str| {
        if keys != (0..n).collect::<Vec<_>>() {
            Err(FormatError::Incomplete(format!("{what} entries are not 0..{n}")))
        } else {
            Ok(())
        }
    };
    let nc = clauses.len();
    dense(nc, clauses.keys().copied().collect(), "clause")?;
    dense(num_vars, vars.keys().copied().collect(), "var")?;
    dense(nc, ports.keys().copied().collect(), "clause_ports")?;
    dense(3 * nc, paths.keys().copied().collect(), "wire")?;
    let formula = CnfFormula::new(num_vars, clauses.into_values().collect())
        .map_err(|e| FormatError::Incomplete(e.to_string()))?;
    let wires = paths
        .into_iter()
        .map(|(w, path)| {
            if path.len() < 2 || path.len() % 2 != 0 {
                return Err(FormatError::Incomplete(format!("wire {w} path has odd length")));
            }
            Ok(WireRoute {
                clause: w / 3,
                position: w % 3,
                literal: formula.clauses()[w / 3][w % 3],
                path,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WitnessMap {
        stage: stage.ok_or_else(|| missing("stage"))?,
        formula,
        vars: vars.into_values().collect(),
        clauses: ports.into_values().collect(),
        root_output: root_output.ok_or_else(|| missing("root_output"))?,
        wires,
        gadgets,
    })
}
