//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every expected value is computed here by an independent oracle (brute
//! force over direction marks, brute-force SAT, cross-product segment
//! intersection) rather than read back from the library.

use std::time::{Duration, Instant};

use fo2color::exec::Exec;
use fo2color::gadgets::{verify_template, GadgetKind, GadgetTemplate};
use fo2color::greedy::{defective_coloring_traced, fo2color_delta5};
use fo2color::orientation::{build_full_orientation, check_orientation, verify_fo2coloring};
use fo2color::random::random_multigraph;
use fo2color::reduction::{
    assignment_to_coloring, audit, coloring_to_assignment, compile, planarize, CnfFormula,
    ReductionOutput, TwoRowLayout,
};
use fo2color::solver::{self, CountOutcome, Outcome, SolveLimits};
use fo2color::{samples, Multigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

/// Search budget for reduction instances; exhausting it fails the criterion.
const REDUCTION_BUDGET: u64 = 100_000_000;

// ----------------------------------------------------------------- oracles

/// Whether some vector of Forward/Reverse/Both marks gives every
/// non-isolated vertex out-degree exactly 1.
fn brute_force_full_orientation(g: &Multigraph) -> bool {
    fn go(g: &Multigraph, e: usize, out: &mut [u32]) -> bool {
        if e == g.edge_count() {
            return (0..g.vertex_count()).all(|v| g.degree(v) == 0 || out[v] == 1);
        }
        let (u, v) = g.endpoints(e);
        for (du, dv) in [(1, 0), (0, 1), (1, 1)] {
            out[u] += du;
            out[v] += dv;
            if out[u] <= 1 && out[v] <= 1 && go(g, e + 1, out) {
                out[u] -= du;
                out[v] -= dv;
                return true;
            }
            out[u] -= du;
            out[v] -= dv;
        }
        false
    }
    go(g, 0, &mut vec![0; g.vertex_count()])
}

/// Cyclomatic number of each component via edge-by-edge union-find.
fn cyclomatic_numbers(g: &Multigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut cycles = vec![0usize; n];
    for &(u, v) in g.edges() {
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        if a == b {
            cycles[a] += 1;
        } else {
            parent[a] = b;
            cycles[b] += cycles[a];
        }
    }
    (0..n).filter(|&v| parent[v] == v).map(|v| cycles[v]).collect()
}

fn sat_brute_force(f: &CnfFormula) -> Vec<Vec<bool>> {
    let n = f.num_vars();
    (0u32..1 << n)
        .map(|bits| (0..n).map(|i| (bits >> i) & 1 == 1).collect::<Vec<bool>>())
        .filter(|a| {
            f.clauses().iter().all(|c| {
                c.iter()
                    .any(|l| if l.negated { !a[l.var] } else { a[l.var] })
            })
        })
        .collect()
}

/// Proper crossings of straight wires from `(bottom, 0)` to `(top, 1)`.
fn segment_crossings(layout: &TwoRowLayout) -> usize {
    let pts: Vec<((i128, i128), (i128, i128))> = layout
        .wires
        .iter()
        .map(|&(b, t)| ((layout.bottom[b].x as i128, 0), (layout.top[t].x as i128, 1)))
        .collect();
    let orient = |a: (i128, i128), b: (i128, i128), c: (i128, i128)| {
        ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
    };
    let mut count = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (p1, p2) = pts[i];
            let (q1, q2) = pts[j];
            if orient(p1, p2, q1) * orient(p1, p2, q2) < 0
                && orient(q1, q2, p1) * orient(q1, q2, p2) < 0
            {
                count += 1;
            }
        }
    }
    count
}

// ------------------------------------------------------------------ corpus

fn corpus() -> Vec<CnfFormula> {
    let raw: Vec<(usize, Vec<[i64; 3]>)> = vec![
        (3, vec![[1, 2, 3], [-1, -2, -3]]),
        (1, vec![[1, 1, 1], [-1, -1, -1]]),
        (1, vec![[1, 1, 1]]),
        (1, vec![[-1, -1, -1]]),
        (2, vec![[1, 2, 2]]),
        (3, vec![[1, 2, 3]]),
        (3, vec![[-1, 2, 3]]),
        (3, vec![[1, -2, 3], [-1, 2, -3], [2, 3, -1]]),
        (3, vec![[1, 1, 1], [-1, -1, -1], [2, 3, 3]]),
        (2, vec![[1, 2, 2], [-1, 2, 2], [-2, -2, -2]]),
        (2, vec![[1, 2, 2], [-1, 2, 2], [-2, -2, 1]]),
        (2, vec![[1, 2, 2], [-1, -2, -2], [1, -2, -2]]),
        (2, vec![[1, 1, 1], [-1, 2, 2], [-2, -2, -2]]),
        (3, vec![[1, 2, 3], [1, 2, -3], [1, -2, 3]]),
        (3, vec![[-1, -2, -3], [-1, -2, 3], [-1, 2, -3]]),
        (3, vec![[1, 2, 3], [-1, -2, -3], [1, -2, 3]]),
        (3, vec![[3, 2, 1], [-3, -2, -1], [-1, 2, 3]]),
        (3, vec![[2, 2, 2], [-2, -2, -2], [1, 3, 3]]),
        (2, vec![[1, 2, 2], [1, -2, -2], [-1, 2, 2]]),
        (2, vec![[1, 2, 2], [1, -2, -2], [-1, -1, -1]]),
        (3, vec![[-3, -3, -3], [3, 1, 2], [-1, -2, -2]]),
        (3, vec![[1, 3, 3]]),
        (3, vec![[2, -3, 1], [3, -1, -2]]),
        (3, vec![[1, -1, 2], [-2, -2, -2], [3, 3, -2]]),
        (3, vec![[3, 3, 3], [-3, -3, -3], [1, 2, -1]]),
    ];
    raw.into_iter()
        .map(|(n, c)| CnfFormula::from_dimacs(n, &c).expect("corpus formulas are well formed"))
        .collect()
}

// --------------------------------------------------------------- criteria

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut graphs = Vec::new();
    // Every multiset of at most 6 edges over the pairs of n <= 4 vertices.
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        while let Some((chosen, from)) = stack.pop() {
            graphs.push(
                Multigraph::from_edges(n, chosen.iter().map(|&i| pairs[i])).expect("valid"),
            );
            if chosen.len() < 6 {
                for i in from..pairs.len() {
                    let mut next = chosen.clone();
                    next.push(i);
                    stack.push((next, i));
                }
            }
        }
    }
    let exhaustive = graphs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let n = rng.gen_range(2..=8usize);
        let e = rng.gen_range(0..=10usize);
        let edges: Vec<(usize, usize)> = (0..e)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                (u, v)
            })
            .collect();
        graphs.push(Multigraph::from_edges(n, edges).expect("valid"));
    }
    let failures: Vec<usize> = Exec::default()
        .map((0..graphs.len()).collect(), |i| {
            let g = &graphs[i];
            let built = build_full_orientation(g);
            let by_count = cyclomatic_numbers(g).iter().all(|&c| c <= 1);
            let by_search = brute_force_full_orientation(g);
            let checked = built.as_ref().map_or(true, |o| check_orientation(g, o, true));
            let agree = built.is_ok() == by_count && by_count == by_search && checked;
            (!agree).then_some(i)
        })
        .into_iter()
        .flatten()
        .collect();
    let t = start.elapsed();
    if !failures.is_empty() {
        return Err(format!("{} disagreements, first graph #{}", failures.len(), failures[0]));
    }
    if t > Duration::from_secs(120) {
        return Err(format!("took {t:.2?} (limit 2 min)"));
    }
    Ok(format!("{exhaustive} exhaustive + 500 random graphs agree, {t:.2?}"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let g = samples::doubled_prism();
    verify_fo2coloring(&g, &samples::doubled_prism_valid_coloring())
        .map_err(|bad| format!("coloring (a) rejected: {bad:?}"))?;
    let bad = verify_fo2coloring(&g, &samples::doubled_prism_invalid_coloring())
        .err()
        .ok_or("coloring (b) accepted")?;
    if bad.len() != 2 || bad.iter().any(|c| c.cyclomatic() != 4) {
        return Err(format!("coloring (b): expected two cyclomatic-4 components, got {bad:?}"));
    }
    let c = samples::tripled_triangle();
    if solver::decide(&c, SolveLimits::unlimited()) != Outcome::No {
        return Err("graph (c) not refuted".into());
    }
    if solver::count(&c, SolveLimits::unlimited()) != CountOutcome::Exact(0) {
        return Err("graph (c) count is not 0".into());
    }
    let t = start.elapsed();
    if t > Duration::from_secs(1) {
        return Err(format!("took {t:.2?} (limit 1 s)"));
    }
    Ok(format!("(a) valid, (b) two cyclomatic-4 components, (c) No with count 0, {t:.2?}"))
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let failures: Vec<String> = Exec::default()
        .map_range(1000, |i| {
            let seed = i as u64;
            let n = 1 + (seed.wrapping_mul(7919) % 10_000) as usize;
            let delta = 1 + (i % 5);
            let g = random_multigraph(n, delta, seed);
            let (c, o) = match fo2color_delta5(&g) {
                Ok(x) => x,
                Err(e) => return Some(format!("seed {seed}: {e}")),
            };
            if verify_fo2coloring(&g, &c).is_err() || !check_orientation(&g, &o, false) {
                return Some(format!("seed {seed}: output rejected"));
            }
            let (_, trace) = defective_coloring_traced(&g, 2).expect("k = 2");
            (!trace.strictly_decreasing()).then(|| format!("seed {seed}: potential not decreasing"))
        })
        .into_iter()
        .flatten()
        .collect();
    if let Some(f) = failures.first() {
        return Err(format!("{} failures, first: {f}", failures.len()));
    }
    let sweep = start.elapsed();
    let big = random_multigraph(1_000_000, 5, 2024);
    let t = Instant::now();
    let (c, _) = fo2color_delta5(&big).map_err(|e| e.to_string())?;
    let big_time = t.elapsed();
    verify_fo2coloring(&big, &c).map_err(|_| "10^6-vertex output rejected".to_string())?;
    if big_time > Duration::from_secs(10) {
        return Err(format!("10^6-vertex instance took {big_time:.2?} (limit 10 s)"));
    }
    Ok(format!(
        "1000 random graphs valid with decreasing potential ({sweep:.2?}); 10^6 vertices, {} edges in {big_time:.2?}",
        big.edge_count()
    ))
}

fn criterion_4() -> Verdict {
    let expected: Vec<(GadgetKind, Vec<&str>)> = vec![
        (GadgetKind::Not, vec!["10", "01"]),
        (GadgetKind::Eq, vec!["00", "11"]),
        (GadgetKind::Ne, vec!["10", "01"]),
        (GadgetKind::Or, vec!["000", "100", "010", "101", "011", "111"]),
        (GadgetKind::Var { n: 2, m: 2 }, vec!["1100", "0011"]),
        (GadgetKind::Xo, vec!["0000", "1100", "0011", "1111"]),
    ];
    let mut notes = Vec::new();
    for (kind, want) in expected {
        let start = Instant::now();
        let t = GadgetTemplate::get(kind).map_err(|e| e.to_string())?;
        let r = verify_template(&t, SolveLimits::unlimited(), Exec::default())
            .map_err(|e| format!("{kind}: {e}"))?;
        let elapsed = start.elapsed();
        let mut got = r.table_strings();
        let mut want: Vec<String> = want.into_iter().map(String::from).collect();
        got.sort();
        want.sort();
        if got != want {
            return Err(format!("{kind}: table {got:?}, expected {want:?}"));
        }
        if r.center_opposite == Some(false) {
            return Err("eq: center shares the color of x in some solution".into());
        }
        if elapsed > Duration::from_secs(60) {
            return Err(format!("{kind}: took {elapsed:.2?} (limit 60 s)"));
        }
        notes.push(format!("{kind} {}/{} in {elapsed:.2?}", got.len(), 1 << t.ports.len()));
    }
    Ok(notes.join(", "))
}

struct Solved {
    compiled: ReductionOutput,
    planar: ReductionOutput,
    sat: bool,
    compiled_yes: Outcome,
    planar_yes: Outcome,
}

fn solve_corpus() -> (Vec<Solved>, Duration, Duration) {
    let corpus = corpus();
    let limits = SolveLimits::nodes(REDUCTION_BUDGET);
    let t = Instant::now();
    let compiled: Vec<(ReductionOutput, Outcome)> = Exec::default().map(corpus.clone(), |f| {
        let out = compile(&f);
        let o = solver::decide(&out.graph, limits);
        (out, o)
    });
    let compiled_time = t.elapsed();
    let t = Instant::now();
    let planar: Vec<(ReductionOutput, Outcome)> = Exec::default().map(
        compiled.iter().map(|(o, _)| o).collect(),
        |out| {
            let p = planarize(out);
            let o = solver::decide(&p.graph, limits);
            (p, o)
        },
    );
    let planar_time = t.elapsed();
    let solved = corpus
        .iter()
        .zip(compiled)
        .zip(planar)
        .map(|((f, (c, co)), (p, po))| Solved {
            compiled: c,
            planar: p,
            sat: !sat_brute_force(f).is_empty(),
            compiled_yes: co,
            planar_yes: po,
        })
        .collect();
    (solved, compiled_time, planar_time)
}

fn round_trips(out: &ReductionOutput, decided: &Outcome, i: usize) -> Result<(), String> {
    let f = out.formula();
    if let Outcome::Yes(w) = decided {
        let a = coloring_to_assignment(out, w).map_err(|e| format!("#{i}: decode: {e}"))?;
        if !sat_brute_force(f).contains(&a) {
            return Err(format!("#{i}: decoded assignment does not satisfy"));
        }
    }
    for a in sat_brute_force(f) {
        let c = assignment_to_coloring(out, &a).map_err(|e| format!("#{i}: encode {a:?}: {e}"))?;
        verify_fo2coloring(&out.graph, &c).map_err(|_| format!("#{i}: encoded coloring rejected"))?;
        let back = coloring_to_assignment(out, &c).map_err(|e| format!("#{i}: {e}"))?;
        if back != a {
            return Err(format!("#{i}: {a:?} came back as {back:?}"));
        }
    }
    Ok(())
}

fn criterion_5(solved: &[Solved], t: Duration) -> Verdict {
    let mut sat = 0;
    for (i, s) in solved.iter().enumerate() {
        if s.compiled_yes == Outcome::Indeterminate {
            return Err(format!("#{i}: budget exhausted"));
        }
        if s.compiled_yes.is_yes() != s.sat {
            return Err(format!("#{i}: SAT = {}, decide = {:?}", s.sat, s.compiled_yes.is_yes()));
        }
        round_trips(&s.compiled, &s.compiled_yes, i)?;
        sat += s.sat as usize;
    }
    if t > Duration::from_secs(300) {
        return Err(format!("took {t:.2?} (limit 5 min)"));
    }
    Ok(format!(
        "{} formulas ({sat} satisfiable) equisatisfiable, round trips hold, {t:.2?}",
        solved.len()
    ))
}

fn criterion_6(solved: &[Solved], t: Duration) -> Verdict {
    let mut total_xo = 0;
    for (i, s) in solved.iter().enumerate() {
        let p = &s.planar;
        let c = p.formula().clauses().len();
        let report = audit(p);
        if !report.planar {
            return Err(format!("#{i}: not planar"));
        }
        if report.max_degree > 6 {
            return Err(format!("#{i}: max degree {}", report.max_degree));
        }
        let oracle = segment_crossings(&s.compiled.layout);
        if report.crossings != oracle {
            return Err(format!("#{i}: {} XO gadgets, oracle counts {oracle}", report.crossings));
        }
        if report.crossings > 18 * c * c - 6 * c {
            return Err(format!("#{i}: {} XO gadgets exceed the bound", report.crossings));
        }
        if s.planar_yes == Outcome::Indeterminate {
            return Err(format!("#{i}: budget exhausted"));
        }
        if s.planar_yes.is_yes() != s.compiled_yes.is_yes() {
            return Err(format!("#{i}: planarized answer differs"));
        }
        round_trips(p, &s.planar_yes, i)?;
        total_xo += report.crossings;
    }
    if t > Duration::from_secs(600) {
        return Err(format!("took {t:.2?} (limit 10 min)"));
    }
    Ok(format!("all planar, {total_xo} XO gadgets total matching the oracle, answers agree, {t:.2?}"))
}

fn criterion_7(solved: &[Solved]) -> Verdict {
    let degrees: Vec<usize> = solved
        .iter()
        .flat_map(|s| [s.compiled.graph.max_degree(), s.planar.graph.max_degree()])
        .collect();
    let max = *degrees.iter().max().ok_or("empty corpus")?;
    if max > 6 {
        return Err(format!("max degree {max}"));
    }
    let attained = degrees.iter().filter(|&&d| d == 6).count();
    if attained == 0 {
        return Err("no instance attains degree 6".into());
    }
    Ok(format!("{} graphs, max degree 6 attained by {attained}", degrees.len()))
}

fn main() {
    let mut results: Vec<(u32, &str, Verdict)> = vec![
        (1, "orientation oracle equivalence", criterion_1()),
        (2, "doubled prism and tripled triangle", criterion_2()),
        (3, "greedy route for max degree 5", criterion_3()),
        (4, "gadget port tables", criterion_4()),
    ];
    let (solved, tc, tp) = solve_corpus();
    results.push((5, "reduction equisatisfiability", criterion_5(&solved, tc)));
    results.push((6, "planarization", criterion_6(&solved, tp)));
    results.push((7, "degree audit", criterion_7(&solved)));

    let mut failed = 0;
    for (n, name, verdict) in &results {
        match verdict {
            Ok(msg) => println!("PASS criterion {n} ({name}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}): {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
