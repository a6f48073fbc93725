//! Exact FO 2-coloring search.
//!
//! Vertices are decided in id order, color 0 first, over a union-find with
//! rollback that tracks each monochromatic component's cyclomatic number; a
//! component reaching 2 is a conflict.
//!
//! Propagation:
//! * an uncolored vertex `w` cannot take color `c` when joining its adjacent
//!   `c`-components `K_1..K_r` (through `e_i` edges each) would give
//!   `Σ (cyc(K_i) - 1 + e_i) >= 2`. A tripled edge to a colored vertex, or a
//!   doubled edge into a unicyclic component, are the common cases. The
//!   members of the blamed components are recorded as the reason.
//! * learned nogoods, watched on two literals.
//!
//! Conflicts are analyzed back to the first unique implication point; the
//! resulting nogood is stored, the search backjumps and flips that literal.
//! Nogoods are implied by the graph and every decision takes the smallest
//! uncolored vertex with color 0, so the first solution found is still the
//! lexicographically smallest one. Counting blocks each solution's decisions
//! and keeps going.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::exec::Exec;
use crate::multigraph::{Multigraph, VertexId};
use crate::orientation::TwoColoring;

/// Environment variable holding the default node budget.
pub const BUDGET_ENV: &str = "FO2_BUDGET_NODES";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveLimits {
    /// Maximum number of search nodes (value attempts).
    pub max_nodes: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl SolveLimits {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes: Some(max_nodes),
            time_budget: None,
        }
    }

    pub fn with_time(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }

    /// Node budget from `FO2_BUDGET_NODES`, unlimited when unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Self::nodes)
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes(TwoColoring),
    No,
    /// A budget ran out before the search finished.
    Indeterminate,
}

impl Outcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, Outcome::Yes(_))
    }

    pub fn witness(&self) -> Option<&TwoColoring> {
        match self {
            Outcome::Yes(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountOutcome {
    Exact(u128),
    Indeterminate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Decisions plus conflicts.
    pub nodes: u64,
    pub conflicts: u64,
    pub forced: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("partial coloring has {got} entries, graph has {expected} vertices")]
    PartialLength { expected: usize, got: usize },
    #[error("partial coloring assigns {value} to vertex {vertex}")]
    BadColor { vertex: VertexId, value: u8 },
    #[error("port {0} listed twice")]
    DuplicatePort(VertexId),
    #[error("port {0} is not a vertex of the graph")]
    PortOutOfRange(VertexId),
    #[error("too many ports ({0}); at most 20 are supported")]
    TooManyPorts(usize),
    #[error("search budget exhausted on port pattern {0}")]
    Indeterminate(String),
}

/// Port patterns that extend to a full FO 2-coloring. Bit `i` of a pattern
/// is the color of `ports[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortTable {
    pub ports: Vec<VertexId>,
    /// Sorted ascending.
    pub patterns: Vec<u32>,
}

impl PortTable {
    pub fn contains(&self, pattern: u32) -> bool {
        self.patterns.binary_search(&pattern).is_ok()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Patterns as strings with `ports[0]` first, e.g. `"01"`.
    pub fn pattern_strings(&self) -> Vec<String> {
        self.patterns
            .iter()
            .map(|&p| pattern_string(p, self.ports.len()))
            .collect()
    }
}

/// Renders `pattern` over `width` ports, port 0 first.
pub fn pattern_string(pattern: u32, width: usize) -> String {
    (0..width)
        .map(|i| if (pattern >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a pattern string produced by [`pattern_string`].
pub fn parse_pattern(s: &str) -> Option<u32> {
    if s.len() > 32 {
        return None;
    }
    s.chars().enumerate().try_fold(0u32, |acc, (i, ch)| match ch {
        '0' => Some(acc),
        '1' => Some(acc | (1 << i)),
        _ => None,
    })
}

pub fn decide(g: &Multigraph, limits: SolveLimits) -> Outcome {
    decide_with_stats(g, limits).0
}

pub fn decide_with_stats(g: &Multigraph, limits: SolveLimits) -> (Outcome, SearchStats) {
    let pins = vec![None; g.vertex_count()];
    let mut s = Search::new(g, limits, Mode::First);
    let out = s.run(&pins);
    (out.into_outcome(), s.stats)
}

/// Number of FO 2-colorings.
pub fn count(g: &Multigraph, limits: SolveLimits) -> CountOutcome {
    let pins = vec![None; g.vertex_count()];
    let mut s = Search::new(g, limits, Mode::Count);
    match s.run(&pins) {
        RunResult::Count(n) => CountOutcome::Exact(n),
        RunResult::Indeterminate => CountOutcome::Indeterminate,
        _ => unreachable!("count mode reports counts"),
    }
}

/// Lexicographically smallest FO 2-coloring agreeing with `partial`.
pub fn extend(
    g: &Multigraph,
    partial: &[Option<u8>],
    limits: SolveLimits,
) -> Result<Outcome, SolveError> {
    extend_with_stats(g, partial, limits).map(|(o, _)| o)
}

pub fn extend_with_stats(
    g: &Multigraph,
    partial: &[Option<u8>],
    limits: SolveLimits,
) -> Result<(Outcome, SearchStats), SolveError> {
    check_partial(g, partial)?;
    let mut s = Search::new(g, limits, Mode::First);
    let out = s.run(partial);
    Ok((out.into_outcome(), s.stats))
}

fn check_partial(g: &Multigraph, partial: &[Option<u8>]) -> Result<(), SolveError> {
    if partial.len() != g.vertex_count() {
        return Err(SolveError::PartialLength {
            expected: g.vertex_count(),
            got: partial.len(),
        });
    }
    if let Some((vertex, value)) = partial
        .iter()
        .enumerate()
        .find_map(|(v, c)| c.filter(|&c| c > 1).map(|c| (v, c)))
    {
        return Err(SolveError::BadColor { vertex, value });
    }
    Ok(())
}

fn check_ports(g: &Multigraph, ports: &[VertexId]) -> Result<(), SolveError> {
    if ports.len() > 20 {
        return Err(SolveError::TooManyPorts(ports.len()));
    }
    let mut seen = vec![false; g.vertex_count()];
    for &p in ports {
        if p >= g.vertex_count() {
            return Err(SolveError::PortOutOfRange(p));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(SolveError::DuplicatePort(p));
        }
    }
    Ok(())
}

/// Pins `ports` to `pattern`, leaving everything else free.
pub fn pattern_pins(n: usize, ports: &[VertexId], pattern: u32) -> Vec<Option<u8>> {
    let mut pins = vec![None; n];
    for (i, &p) in ports.iter().enumerate() {
        pins[p] = Some(((pattern >> i) & 1) as u8);
    }
    pins
}

pub fn port_table(
    g: &Multigraph,
    ports: &[VertexId],
    limits: SolveLimits,
) -> Result<PortTable, SolveError> {
    port_table_with(g, ports, limits, Exec::default())
}

/// Runs one `extend` per pin pattern; patterns are independent and may run
/// concurrently under `exec`.
pub fn port_table_with(
    g: &Multigraph,
    ports: &[VertexId],
    limits: SolveLimits,
    exec: Exec,
) -> Result<PortTable, SolveError> {
    check_ports(g, ports)?;
    let k = ports.len();
    let results = exec.map_range(1usize << k, |p| {
        let pins = pattern_pins(g.vertex_count(), ports, p as u32);
        let mut s = Search::new(g, limits, Mode::First);
        (p as u32, s.run(&pins).into_outcome())
    });
    let mut patterns = Vec::new();
    for (p, out) in results {
        match out {
            Outcome::Yes(_) => patterns.push(p),
            Outcome::No => {}
            Outcome::Indeterminate => {
                return Err(SolveError::Indeterminate(pattern_string(p, k)));
            }
        }
    }
    Ok(PortTable {
        ports: ports.to_vec(),
        patterns,
    })
}

/// Plain `2^v` enumeration of FO 2-colorings, for cross-checking the search
/// on small graphs.
pub fn enumerate_all(g: &Multigraph) -> Vec<TwoColoring> {
    let n = g.vertex_count();
    assert!(n <= 24, "enumeration is for small graphs");
    (0u32..(1 << n))
        .map(|bits| {
            TwoColoring::from_bits((0..n).map(|i| ((bits >> i) & 1) as u8).collect())
                .expect("bits")
        })
        .filter(|c| crate::orientation::verify_fo2coloring(g, c).is_ok())
        .collect()
}

// ---------------------------------------------------------------------------

const NONE: u8 = 2;
const NO_REASON: (u32, u32) = (u32::MAX, u32::MAX);

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    First,
    Count,
}

enum RunResult {
    Found(Vec<u8>),
    Count(u128),
    Unsat,
    Indeterminate,
}

impl RunResult {
    fn into_outcome(self) -> Outcome {
        match self {
            RunResult::Found(bits) => Outcome::Yes(TwoColoring::from_bits(bits).expect("bits")),
            RunResult::Unsat => Outcome::No,
            RunResult::Indeterminate => Outcome::Indeterminate,
            RunResult::Count(_) => unreachable!(),
        }
    }
}

enum Undo {
    Union { child: u32, parent: u32, added: u32 },
    AddEdges { root: u32, added: u32 },
}

/// Literal id `2 * vertex + color`.
fn lit(v: u32, c: u8) -> usize {
    2 * v as usize + c as usize
}

struct Search<'g> {
    g: &'g Multigraph,
    limits: SolveLimits,
    mode: Mode,
    started: Instant,
    stats: SearchStats,
    /// Neighbor lists with multiplicities.
    adj_off: Vec<usize>,
    adj: Vec<(u32, u32)>,
    color: Vec<u8>,
    level: Vec<u32>,
    /// Antecedent vertices (with their current colors) of a forced vertex;
    /// `NO_REASON` for decisions and pins.
    reason_at: Vec<(u32, u32)>,
    reasons: Vec<u32>,
    parent: Vec<u32>,
    size: Vec<u32>,
    edges: Vec<u32>,
    /// Circular member list per component.
    next: Vec<u32>,
    undo: Vec<Undo>,
    trail: Vec<u32>,
    /// Per decision level: trail, undo and reason-arena lengths at its start.
    level_marks: Vec<(usize, usize, usize)>,
    /// Trail prefix already pushed through nogood watches and the queue.
    qhead: usize,
    queue: Vec<u32>,
    queued: Vec<bool>,
    /// Learned nogoods: literal sets that cannot all hold. The first two
    /// literals are watched.
    nogoods: Vec<Vec<u32>>,
    watches: Vec<Vec<u32>>,
    seen: Vec<bool>,
    cursor: usize,
    scratch_roots: Vec<(u32, u32)>,
    /// Copies of learned nogoods as `(vertex, color)` lists (tests only).
    learned_log: Option<Vec<Vec<(u32, u8)>>>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Multigraph, limits: SolveLimits, mode: Mode) -> Self {
        let n = g.vertex_count();
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(2 * g.edge_count());
        for &(u, v) in g.edges() {
            pairs.push((u as u32, v as u32));
            pairs.push((v as u32, u as u32));
        }
        pairs.sort_unstable();
        let mut adj_off = vec![0usize; n + 1];
        let mut adj: Vec<(u32, u32)> = Vec::new();
        let mut i = 0;
        for v in 0..n {
            while i < pairs.len() && pairs[i].0 as usize == v {
                let w = pairs[i].1;
                let mut m = 0;
                while i < pairs.len() && pairs[i] == (v as u32, w) {
                    m += 1;
                    i += 1;
                }
                adj.push((w, m));
            }
            adj_off[v + 1] = adj.len();
        }
        Self {
            g,
            limits,
            mode,
            started: Instant::now(),
            stats: SearchStats::default(),
            adj_off,
            adj,
            color: vec![NONE; n],
            level: vec![0; n],
            reason_at: vec![NO_REASON; n],
            reasons: Vec::new(),
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            edges: vec![0; n],
            next: (0..n as u32).collect(),
            undo: Vec::new(),
            trail: Vec::with_capacity(n),
            level_marks: Vec::new(),
            qhead: 0,
            queue: Vec::new(),
            queued: vec![false; n],
            nogoods: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            seen: vec![false; n],
            cursor: 0,
            scratch_roots: Vec::new(),
            learned_log: None,
        }
    }

    fn current_level(&self) -> u32 {
        self.level_marks.len() as u32
    }

    fn neighbors(&self, v: u32) -> &[(u32, u32)] {
        &self.adj[self.adj_off[v as usize]..self.adj_off[v as usize + 1]]
    }

    fn find(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    fn cyclomatic(&self, root: u32) -> i64 {
        self.edges[root as usize] as i64 - self.size[root as usize] as i64 + 1
    }

    fn members(&self, root: u32, out: &mut Vec<u32>) {
        let mut x = root;
        loop {
            out.push(x);
            x = self.next[x as usize];
            if x == root {
                break;
            }
        }
    }

    fn out_of_budget(&self) -> bool {
        if let Some(max) = self.limits.max_nodes {
            if self.stats.nodes > max {
                return true;
            }
        }
        if let Some(t) = self.limits.time_budget {
            if self.stats.nodes % 256 == 0 && self.started.elapsed() > t {
                return true;
            }
        }
        false
    }

    /// Whether `w` may take color `c`; when it may not, appends to `expl` the
    /// members of a smallest set of adjacent `c`-components that rules it out.
    fn feasible(&mut self, w: u32, c: u8, expl: &mut Vec<u32>) -> bool {
        let mut roots = std::mem::take(&mut self.scratch_roots);
        roots.clear();
        for &(u, m) in self.neighbors(w) {
            if self.color[u as usize] == c {
                let r = self.find(u);
                match roots.iter_mut().find(|(x, _)| *x == r) {
                    Some(entry) => entry.1 += m,
                    None => roots.push((r, m)),
                }
            }
        }
        let gain = |s: &Self, (r, m): (u32, u32)| s.cyclomatic(r) - 1 + m as i64;
        let total: i64 = roots.iter().map(|&x| gain(self, x)).sum();
        let ok = total <= 1;
        if !ok {
            roots.sort_by_key(|&x| std::cmp::Reverse(gain(self, x)));
            let mut acc = 0;
            for &x in &roots {
                if acc >= 2 {
                    break;
                }
                acc += gain(self, x);
                self.members(x.0, expl);
            }
        }
        self.scratch_roots = roots;
        ok
    }

    fn union(&mut self, a: u32, b: u32, added: u32) {
        let (mut p, mut ch) = (a, b);
        if self.size[p as usize] < self.size[ch as usize] {
            std::mem::swap(&mut p, &mut ch);
        }
        self.parent[ch as usize] = p;
        self.size[p as usize] += self.size[ch as usize];
        self.edges[p as usize] += self.edges[ch as usize] + added;
        self.next.swap(p as usize, ch as usize);
        self.undo.push(Undo::Union {
            child: ch,
            parent: p,
            added,
        });
    }

    /// Colors `v` at the current level; on a cyclomatic-2 component returns
    /// its members.
    fn assign(&mut self, v: u32, c: u8, reason: (u32, u32)) -> Result<(), Vec<u32>> {
        self.color[v as usize] = c;
        self.level[v as usize] = self.current_level();
        self.reason_at[v as usize] = reason;
        self.trail.push(v);
        for i in self.adj_off[v as usize]..self.adj_off[v as usize + 1] {
            let (u, m) = self.adj[i];
            if self.color[u as usize] != c {
                continue;
            }
            let (ru, rv) = (self.find(u), self.find(v));
            if ru == rv {
                self.edges[rv as usize] += m;
                self.undo.push(Undo::AddEdges {
                    root: rv,
                    added: m,
                });
            } else {
                self.union(ru, rv, m);
            }
        }
        let r = self.find(v);
        if self.cyclomatic(r) >= 2 {
            let mut expl = Vec::new();
            self.members(r, &mut expl);
            return Err(expl);
        }
        Ok(())
    }

    fn store_reason(&mut self, vs: impl IntoIterator<Item = u32>) -> (u32, u32) {
        let start = self.reasons.len() as u32;
        self.reasons.extend(vs);
        (start, self.reasons.len() as u32)
    }

    fn backjump(&mut self, target: u32) {
        if target >= self.current_level() {
            return;
        }
        let (t, u, r) = self.level_marks[target as usize];
        self.level_marks.truncate(target as usize);
        while self.trail.len() > t {
            let v = self.trail.pop().expect("len > t");
            self.color[v as usize] = NONE;
            self.reason_at[v as usize] = NO_REASON;
            self.cursor = self.cursor.min(v as usize);
        }
        while self.undo.len() > u {
            match self.undo.pop().expect("len > u") {
                Undo::Union {
                    child,
                    parent,
                    added,
                } => {
                    self.next.swap(parent as usize, child as usize);
                    self.edges[parent as usize] -= self.edges[child as usize] + added;
                    self.size[parent as usize] -= self.size[child as usize];
                    self.parent[child as usize] = child;
                }
                Undo::AddEdges { root, added } => self.edges[root as usize] -= added,
            }
        }
        self.reasons.truncate(r);
        self.qhead = self.trail.len();
    }

    fn enqueue_around(&mut self, v: u32) {
        let r = self.find(v);
        let mut x = r;
        loop {
            for i in self.adj_off[x as usize]..self.adj_off[x as usize + 1] {
                let u = self.adj[i].0;
                if self.color[u as usize] == NONE && !self.queued[u as usize] {
                    self.queued[u as usize] = true;
                    self.queue.push(u);
                }
            }
            x = self.next[x as usize];
            if x == r {
                break;
            }
        }
    }

    fn clear_queue(&mut self) {
        for &u in &self.queue {
            self.queued[u as usize] = false;
        }
        self.queue.clear();
    }

    fn lit_true(&self, l: u32) -> bool {
        self.color[(l / 2) as usize] == (l % 2) as u8
    }

    fn lit_false(&self, l: u32) -> bool {
        let c = self.color[(l / 2) as usize];
        c != NONE && c != (l % 2) as u8
    }

    /// Visits nogoods watching literal `l`, which just became true.
    fn propagate_watches(&mut self, l: u32) -> Result<(), Vec<u32>> {
        let mut ws = std::mem::take(&mut self.watches[l as usize]);
        let mut i = 0;
        let mut result = Ok(());
        while i < ws.len() {
            let ni = ws[i] as usize;
            if self.nogoods[ni][0] == l {
                self.nogoods[ni].swap(0, 1);
            }
            let other = self.nogoods[ni][0];
            if self.lit_false(other) {
                i += 1;
                continue;
            }
            let len = self.nogoods[ni].len();
            if let Some(k) = (2..len).find(|&k| !self.lit_true(self.nogoods[ni][k])) {
                self.nogoods[ni].swap(1, k);
                let nl = self.nogoods[ni][1];
                self.watches[nl as usize].push(ni as u32);
                ws.swap_remove(i);
                continue;
            }
            i += 1;
            if self.lit_true(other) {
                result = Err(self.nogoods[ni].iter().map(|&x| x / 2).collect());
                break;
            }
            let rest: Vec<u32> = self.nogoods[ni][1..].iter().map(|&x| x / 2).collect();
            let reason = self.store_reason(rest);
            self.stats.forced += 1;
            if let Err(e) = self.assign(other / 2, 1 - (other % 2) as u8, reason) {
                result = Err(e);
                break;
            }
        }
        let added = std::mem::take(&mut self.watches[l as usize]);
        ws.extend(added);
        self.watches[l as usize] = ws;
        result
    }

    /// Runs nogood watches and the component feasibility check to fixpoint.
    fn propagate(&mut self) -> Result<(), Vec<u32>> {
        let mut e0 = Vec::new();
        let mut e1 = Vec::new();
        loop {
            if self.qhead < self.trail.len() {
                let v = self.trail[self.qhead];
                self.qhead += 1;
                if let Err(e) = self.propagate_watches(lit(v, self.color[v as usize]) as u32) {
                    self.clear_queue();
                    return Err(e);
                }
                self.enqueue_around(v);
                continue;
            }
            let Some(w) = self.queue.pop() else {
                return Ok(());
            };
            self.queued[w as usize] = false;
            if self.color[w as usize] != NONE {
                continue;
            }
            e0.clear();
            e1.clear();
            let ok0 = self.feasible(w, 0, &mut e0);
            let ok1 = self.feasible(w, 1, &mut e1);
            let (c, why) = match (ok0, ok1) {
                (true, true) => continue,
                (false, false) => {
                    e0.extend_from_slice(&e1);
                    self.clear_queue();
                    return Err(e0);
                }
                (false, true) => (1, &e0),
                (true, false) => (0, &e1),
            };
            let reason = self.store_reason(why.iter().copied());
            self.stats.forced += 1;
            if let Err(e) = self.assign(w, c, reason) {
                self.clear_queue();
                return Err(e);
            }
        }
    }

    /// Learns a nogood from a conflict among colored vertices, backjumps and
    /// asserts the flipped literal. Returns false when the conflict holds at
    /// level 0.
    fn resolve_conflict(&mut self, conflict: Vec<u32>) -> bool {
        self.stats.conflicts += 1;
        let Some(top) = conflict.iter().map(|&x| self.level[x as usize]).max() else {
            return false;
        };
        if top == 0 {
            return false;
        }
        // A conflict entirely below the current level is analyzed there.
        self.backjump(top);
        let cur = top;

        let mut learnt: Vec<u32> = Vec::new();
        let mut pending = 0usize;
        let mut touched: Vec<u32> = Vec::new();
        let mut mark = |s: &mut Self, x: u32, learnt: &mut Vec<u32>, pending: &mut usize| {
            let xi = x as usize;
            if s.seen[xi] || s.level[xi] == 0 {
                return;
            }
            s.seen[xi] = true;
            touched.push(x);
            if s.level[xi] == cur {
                *pending += 1;
            } else {
                learnt.push(x);
            }
        };
        for &x in &conflict {
            mark(self, x, &mut learnt, &mut pending);
        }
        let mut idx = self.trail.len();
        let uip = loop {
            idx -= 1;
            let p = self.trail[idx];
            if !self.seen[p as usize] {
                continue;
            }
            pending -= 1;
            if pending == 0 {
                break p;
            }
            let (a, b) = self.reason_at[p as usize];
            debug_assert_ne!((a, b), NO_REASON, "only the decision lacks a reason");
            for k in a..b {
                let x = self.reasons[k as usize];
                mark(self, x, &mut learnt, &mut pending);
            }
        };
        // Drop literals implied by the rest of the nogood.
        let keep: Vec<bool> = learnt
            .iter()
            .map(|&x| {
                let (a, b) = self.reason_at[x as usize];
                (a, b) == NO_REASON
                    || (a..b).any(|k| {
                        let y = self.reasons[k as usize] as usize;
                        !self.seen[y] && self.level[y] != 0
                    })
            })
            .collect();
        let mut learnt: Vec<u32> = learnt
            .into_iter()
            .zip(keep)
            .filter_map(|(x, k)| k.then_some(x))
            .collect();
        for x in touched {
            self.seen[x as usize] = false;
        }

        if let Some(i) = (0..learnt.len()).max_by_key(|&i| self.level[learnt[i] as usize]) {
            learnt.swap(0, i);
        }
        let target = learnt.first().map_or(0, |&x| self.level[x as usize]);
        let old = self.color[uip as usize];
        let literals: Vec<u32> = std::iter::once(lit(uip, old) as u32)
            .chain(learnt.iter().map(|&x| lit(x, self.color[x as usize]) as u32))
            .collect();
        if let Some(log) = self.learned_log.as_mut() {
            log.push(literals.iter().map(|&l| (l / 2, (l % 2) as u8)).collect());
        }
        self.backjump(target);
        if literals.len() >= 2 {
            let id = self.nogoods.len() as u32;
            self.watches[literals[0] as usize].push(id);
            self.watches[literals[1] as usize].push(id);
            self.nogoods.push(literals);
        }
        let reason = self.store_reason(learnt);
        if let Err(e) = self.assign(uip, 1 - old, reason) {
            return self.resolve_conflict(e);
        }
        true
    }

    fn run(&mut self, pins: &[Option<u8>]) -> RunResult {
        let n = self.g.vertex_count();
        for (v, pin) in pins.iter().enumerate() {
            if let Some(c) = *pin {
                if self.assign(v as u32, c, NO_REASON).is_err() {
                    return RunResult::Unsat;
                }
            }
        }
        for v in 0..n {
            if self.color[v] == NONE {
                self.queued[v] = true;
                self.queue.push(v as u32);
            }
        }
        let mut solutions: u128 = 0;
        loop {
            if let Err(conflict) = self.propagate() {
                self.stats.nodes += 1;
                if self.out_of_budget() {
                    return RunResult::Indeterminate;
                }
                if !self.resolve_conflict(conflict) {
                    return match self.mode {
                        Mode::First => RunResult::Unsat,
                        Mode::Count => RunResult::Count(solutions),
                    };
                }
                continue;
            }
            while self.cursor < n && self.color[self.cursor] != NONE {
                self.cursor += 1;
            }
            if self.cursor == n {
                if self.mode == Mode::First {
                    return RunResult::Found(self.color.clone());
                }
                solutions += 1;
                // Block this solution: its decisions cannot all recur.
                let decisions: Vec<u32> = self.level_marks.iter().map(|&(t, _, _)| self.trail[t]).collect();
                if !self.resolve_conflict(decisions) {
                    return RunResult::Count(solutions);
                }
                continue;
            }
            self.stats.nodes += 1;
            if self.out_of_budget() {
                return RunResult::Indeterminate;
            }
            self.level_marks
                .push((self.trail.len(), self.undo.len(), self.reasons.len()));
            let v = self.cursor as u32;
            if let Err(conflict) = self.assign(v, 0, NO_REASON) {
                if !self.resolve_conflict(conflict) {
                    return match self.mode {
                        Mode::First => RunResult::Unsat,
                        Mode::Count => RunResult::Count(solutions),
                    };
                }
            }
        }
    }
}
