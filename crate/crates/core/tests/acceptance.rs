//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use tropdiv::brill_noether::{
    canonical_shape_check, chips_on_each_loop_check, enumerate_tableaux, gp_rho_zero_experiment, has_reduced_shape,
    members_missing_loop, ExperimentReport, Verdict,
};
use tropdiv::chain::{BnParams, ChainOfLoops};
use tropdiv::graph::{Region, Span};
use tropdiv::plfunc::{check_min_chips, check_obstruction, min_combination};
use tropdiv::random::Sampler;
use tropdiv::rational::{q, qi};
use tropdiv::reduce::{is_v_reduced, rank, riemann_roch_sides, v_reduce};
use tropdiv::{Divisor, EdgeId, End, Error, MetricGraph, PlFunction, Point, Q};

struct Line {
    id: usize,
    pass: bool,
    text: String,
}

fn report(id: usize, pass: bool, text: String, start: Instant) -> Line {
    Line {
        id,
        pass,
        text: format!("{text} [{:.1?}]", start.elapsed()),
    }
}

fn riemann_roch() -> Line {
    let start = Instant::now();
    let results: Vec<(usize, usize)> = (2..=4usize)
        .into_par_iter()
        .map(|g| {
            let chain = ChainOfLoops::default_generic(g).unwrap();
            let graph = chain.graph();
            let pts = chain.rank_determining_set();
            let mut s = Sampler::new(100 + g as u64);
            let mut ok = 0;
            for _ in 0..50 {
                let deg = s.range(-2, 2 * g as i64);
                let d = s.divisor(graph, deg, 2, 4);
                ok += riemann_roch_sides(graph, &d, &pts).unwrap().holds() as usize;
            }
            (ok, 50)
        })
        .collect();
    let ok: usize = results.iter().map(|r| r.0).sum();
    report(
        1,
        ok == 150,
        format!("Riemann-Roch on chains g=2..4: {ok}/150 identities exact"),
        start,
    )
}

/// A point of `γ_i` on the 1/4 grid of a loop edge, never `w_i`.
fn loop_point(s: &mut Sampler, chain: &ChainOfLoops, i: usize) -> Point {
    let edges = chain.loop_edges(i);
    let e = if s.below(2) == 0 { edges.top } else { edges.bottom };
    let len = chain.graph().edge(e).length.clone();
    chain.graph().point(e, len * q(s.range(0, 3), 4)).unwrap()
}

fn reduced_classification() -> Line {
    let start = Instant::now();
    let results: Vec<(usize, usize, usize, usize)> = (2..=4usize)
        .into_par_iter()
        .map(|g| {
            let chain = ChainOfLoops::default_generic(g).unwrap();
            let graph = chain.graph();
            let base = chain.wp(g);
            let mut s = Sampler::new(200 + g as u64);
            let (mut ok, mut fix_ok, mut fixed) = (0, 0, 0);
            for _ in 0..100 {
                let deg = s.range(0, 2 * g as i64 - 2);
                let d = s.effective(graph, deg, 4);
                let r = v_reduce(graph, &d, &base).unwrap().reduced;
                ok += (common::looks_reduced(&chain, &r) && has_reduced_shape(&r, &chain)) as usize;
                let mut e = Divisor::zero();
                for i in 1..=g {
                    if s.below(2) == 0 {
                        e.add_point(loop_point(&mut s, &chain, i), 1);
                    }
                }
                let room = 2 * g as i64 - 2 - e.degree();
                e.add_point(base.clone(), s.range(0, room));
                for cand in [&d, &e] {
                    if common::looks_reduced(&chain, cand) {
                        fixed += 1;
                        let back = v_reduce(graph, cand, &base).unwrap().reduced;
                        fix_ok += (back == *cand && is_v_reduced(graph, cand, &base).unwrap()) as usize;
                    }
                }
            }
            (ok, 100, fix_ok, fixed)
        })
        .collect();
    let ok: usize = results.iter().map(|r| r.0).sum();
    let fix_ok: usize = results.iter().map(|r| r.2).sum();
    let fixed: usize = results.iter().map(|r| r.3).sum();
    report(
        2,
        ok == 300 && fix_ok == fixed,
        format!(
            "reduced shape at w_g: {ok}/300 reductions have it; {fix_ok}/{fixed} divisors with it are fixed points"
        ),
        start,
    )
}

fn canonical_shape() -> Line {
    let start = Instant::now();
    let results: Vec<usize> = (2..=4usize)
        .into_par_iter()
        .map(|g| {
            let chain = ChainOfLoops::default_generic(g).unwrap();
            let graph = chain.graph();
            let k = chain.canonical_divisor();
            let mut s = Sampler::new(300 + g as u64);
            let mut ok = 0;
            for _ in 0..100 {
                let steps = s.range(1, 3) as usize;
                let (rep, psi) = s.walk(graph, &k, steps, 4).unwrap();
                let valid = rep.is_effective() && rep == &k + &psi.divisor(graph);
                let found = canonical_shape_check(&rep, &chain).ok();
                ok += (valid && found.is_some_and(|i| common::empty_loops(&chain, &rep).contains(&i))) as usize;
            }
            ok
        })
        .collect();
    let ok: usize = results.iter().sum();
    report(
        3,
        ok == 300,
        format!("random members of |K| on chains g=2..4 miss a loop: {ok}/300"),
        start,
    )
}

struct Run {
    params: BnParams,
    reports: Vec<(ExperimentReport, f64)>,
}

fn run_experiments(params: BnParams) -> Run {
    let chain = ChainOfLoops::default_generic(params.g as usize).unwrap();
    let (rows, cols) = params.shape();
    let reports = enumerate_tableaux(rows as usize, cols as usize)
        .par_iter()
        .map(|t| {
            let start = Instant::now();
            let rep = gp_rho_zero_experiment(params, t, &chain).unwrap();
            (rep, start.elapsed().as_secs_f64())
        })
        .collect();
    Run { params, reports }
}

/// Witnesses, effectivity and the cell bijection, rechecked from the report data.
fn structure_holds(run: &Run) -> bool {
    let chain = ChainOfLoops::default_generic(run.params.g as usize).unwrap();
    let graph = chain.graph();
    run.reports.iter().all(|(rep, _)| {
        let members_ok = rep
            .d_family
            .iter()
            .all(|(dj, phi)| dj.is_effective() && *dj == &rep.d + &phi.divisor(graph))
            && rep
                .e_family
                .iter()
                .all(|(ek, psi)| ek.is_effective() && *ek == &rep.e + &psi.divisor(graph));
        let mut hit = vec![0; chain.genus() + 1];
        let mut cells_ok = true;
        for (j, (dj, _)) in rep.d_family.iter().enumerate() {
            for (k, (ek, _)) in rep.e_family.iter().enumerate() {
                let empty = common::empty_loops(&chain, &(dj + ek));
                cells_ok &= empty == [rep.tableau.get(k, j)];
                for i in empty {
                    hit[i] += 1;
                }
            }
        }
        members_ok && cells_ok && rep.partition_holds && rep.cross_checked && hit[1..].iter().all(|&h| h == 1)
    })
}

fn label(p: &BnParams) -> String {
    format!("({},{},{})", p.g, p.r, p.d)
}

fn rho_zero_structure(runs: &[Run]) -> Line {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for run in runs {
        let ok = structure_holds(run);
        pass &= ok;
        parts.push(format!(
            "{} {} tableaux {}",
            label(&run.params),
            run.reports.len(),
            if ok { "ok" } else { "BROKEN" }
        ));
    }
    let bad = BnParams::new(6, 3, 5);
    let chain = ChainOfLoops::default_generic(6).unwrap();
    let t = enumerate_tableaux(2, 3).remove(0);
    let rejected = matches!(gp_rho_zero_experiment(bad, &t, &chain), Err(Error::Precondition(_)));
    pass &= rejected;
    parts.push(format!(
        "(6,3,5) not evaluable: rho = {}, no rectangular tableau exists{}",
        bad.rho(),
        if rejected {
            ", rejected as expected; (6,2,6) run instead"
        } else {
            ", NOT rejected"
        }
    ));
    report(
        4,
        pass,
        format!("rho=0 bases and loop partition: {}", parts.join("; ")),
        start,
    )
}

fn independence(runs: &[Run]) -> Line {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for run in runs.iter().filter(|r| r.params.g == 4 || r.params.r == 1) {
        let ind = run
            .reports
            .iter()
            .filter(|(r, _)| r.verdict == Verdict::Independent)
            .count();
        let slowest = run.reports.iter().map(|r| r.1).fold(0.0, f64::max);
        pass &= ind == run.reports.len() && slowest < 600.0;
        parts.push(format!(
            "{} {}/{} independent, slowest {:.2}s",
            label(&run.params),
            ind,
            run.reports.len(),
            slowest
        ));
    }
    report(
        5,
        pass,
        format!("tropical independence of {{phi_j + psi_k}}: {}", parts.join("; ")),
        start,
    )
}

/// Up to `n` members of R(D) with distinct incoming slopes along `e_i`.
fn distinct_slope_family(s: &mut Sampler, chain: &ChainOfLoops, d: &Divisor, i: usize, n: usize) -> Vec<PlFunction> {
    let graph = chain.graph();
    let dir = chain.left_direction(i).unwrap();
    let mut out = vec![PlFunction::zero(graph)];
    for _ in 0..40 {
        if out.len() == n {
            break;
        }
        let f = s.in_r(graph, d, 4).unwrap();
        if out.iter().all(|o| o.incoming_slope(dir) != f.incoming_slope(dir)) {
            out.push(f);
        }
    }
    out
}

/// On a loop with `l_i = m_i`, `2 w_i ~ 2 v_i ~ 2 y` for `y` on `e_i`, and both
/// `2 w_i` and `2 y` miss `γ_i`.
fn non_generic_counterexample() -> bool {
    let chain = ChainOfLoops::uniform(2, qi(1))
        .unwrap()
        .extended((qi(1), qi(1)))
        .unwrap();
    let graph = chain.graph();
    let i = 1;
    let d = Divisor::from_terms([(chain.wp(i), 2)]);
    let e_i = chain.left_edge(i).unwrap();
    let y = graph.point(e_i, q(1, 2)).unwrap();
    let red = v_reduce(graph, &d, &y).unwrap();
    if red.reduced != Divisor::from_terms([(y, 2)]) {
        return false;
    }
    let psis = [PlFunction::zero(graph), red.witness];
    let refused = matches!(
        chips_on_each_loop_check(&d, &psis, i, &chain),
        Err(Error::NotGeneric(_))
    );
    refused && members_missing_loop(&d, &psis, i, &chain).is_ok_and(|m| m.len() == 2)
}

fn chips_on_each_loop() -> Line {
    let start = Instant::now();
    let mut s = Sampler::new(600);
    let (mut ok, mut sharp, mut total) = (0, 0, 0);
    while total < 100 {
        let g = 2 + (total % 3) as usize;
        let chain = ChainOfLoops::default_generic(g)
            .unwrap()
            .extended((qi(1), qi(1)))
            .unwrap();
        let deg = s.range(0, 2 * g as i64 - 2);
        let d = s.effective(chain.graph(), deg, 4);
        let i = s.range(1, g as i64) as usize;
        let n = s.range(2, 3) as usize;
        let psis = distinct_slope_family(&mut s, &chain, &d, i, n);
        if psis.len() < 2 {
            continue;
        }
        total += 1;
        if chips_on_each_loop_check(&d, &psis, i, &chain).unwrap() {
            ok += 1;
        }
        sharp += (members_missing_loop(&d, &psis, i, &chain).unwrap().len() == 1) as usize;
    }
    let counter = non_generic_counterexample();
    report(
        6,
        ok == 100 && counter,
        format!(
            "at most one member misses the loop: {ok}/100 generic trials ({sharp} with exactly one miss); \
             non-generic counterexample with two misses {}",
            if counter { "confirmed" } else { "NOT reproduced" }
        ),
        start,
    )
}

fn random_graph(s: &mut Sampler) -> MetricGraph {
    let n = s.range(2, 4) as usize;
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((s.below(v as u64) as usize, v, qi(s.range(1, 3))));
    }
    for _ in 0..s.range(1, 3) {
        let a = s.below(n as u64) as usize;
        let b = s.below(n as u64) as usize;
        if a != b {
            edges.push((a, b, qi(s.range(1, 3))));
        }
    }
    MetricGraph::from_edges(n, &edges).unwrap()
}

/// A vertex star, an edge segment, or everything.
fn random_region(s: &mut Sampler, graph: &MetricGraph) -> Region {
    match s.below(3) {
        0 => {
            let v = tropdiv::VertexId(s.below(graph.vertex_count() as u64) as usize);
            let mut r = Region::empty();
            r.add_vertex(v);
            for dir in graph.directions(v) {
                let len = graph.edge(dir.edge).length.clone();
                let t = &len * q(s.range(1, 4), 4);
                let span = match dir.end {
                    End::Tail => Span::closed(Q::zero(), t),
                    End::Head => Span::closed(&len - t, len),
                };
                r.add_span(dir.edge, span);
            }
            r
        }
        1 => {
            let e = EdgeId(s.below(graph.edge_count() as u64) as usize);
            let len = graph.edge(e).length.clone();
            let a = s.range(1, 3);
            let b = s.range(a, 3);
            let mut r = Region::empty();
            r.add_span(e, Span::closed(&len * q(a, 4), &len * q(b, 4)));
            r
        }
        _ => Region::all(graph),
    }
}

/// θ agrees with the shifted minimum at every breakpoint and midpoint.
fn envelope_matches(graph: &MetricGraph, fs: &[PlFunction], b: &[Q], theta: &PlFunction) -> bool {
    (0..graph.edge_count()).all(|e| {
        let mut xs: Vec<Q> = fs
            .iter()
            .chain([theta])
            .flat_map(|f| f.edge(EdgeId(e)).offsets().to_vec())
            .collect();
        xs.sort();
        xs.dedup();
        let mids: Vec<Q> = xs.windows(2).map(|w| (&w[0] + &w[1]) / qi(2)).collect();
        xs.iter().chain(&mids).all(|x| {
            let m = fs.iter().zip(b).map(|(f, c)| common::eval(f, e, x) + c).min().unwrap();
            common::eval(theta, e, x) == m
        })
    })
}

fn min_chips_and_obstruction() -> Line {
    let start = Instant::now();
    let mut s = Sampler::new(700);
    let (mut ok, mut engaged) = (0, 0);
    for trial in 0..200 {
        let graph = if trial % 2 == 0 {
            ChainOfLoops::default_generic(2 + trial % 3).unwrap().graph().clone()
        } else {
            random_graph(&mut s)
        };
        let deg = s.range(1, 2 * graph.genus().max(1) as i64);
        let d = s.effective(&graph, deg, 4);
        let n = s.range(2, 3) as usize;
        let fs: Vec<PlFunction> = (0..n).map(|_| s.in_r(&graph, &d, 4).unwrap()).collect();
        let b: Vec<Q> = (0..n).map(|_| s.offset(2, 4)).collect();
        let region = random_region(&mut s, &graph);
        let theta = min_combination(&graph, &fs, &b).unwrap();
        engaged += fs.iter().all(|f| (&d + &f.divisor(&graph)).contains_point_in(&region)) as usize;
        let good = check_min_chips(&graph, &d, &fs, &b).unwrap()
            && check_obstruction(&graph, &d, &fs, &b, &region).unwrap()
            && (&d + &theta.divisor(&graph)).is_effective()
            && envelope_matches(&graph, &fs, &b, &theta);
        ok += good as usize;
    }
    report(
        7,
        ok == 200,
        format!(
            "agreement-set chips and connected obstruction: {ok}/200 ({engaged} with the obstruction hypothesis met)"
        ),
        start,
    )
}

fn grid_point(s: &mut Sampler, graph: &MetricGraph) -> Point {
    let e = EdgeId(s.below(graph.edge_count() as u64) as usize);
    let steps: i64 = (&graph.edge(e).length * qi(8)).to_integer().try_into().unwrap();
    graph.point(e, q(s.range(0, steps), 8)).unwrap()
}

fn oracle_agreement() -> Line {
    let start = Instant::now();
    let cases: Vec<(ChainOfLoops, Divisor)> = {
        let mut s = Sampler::new(800);
        (0..50)
            .map(|trial| {
                let g = 2 + trial % 2;
                let mut len = || q(s.range(1, 3), 8);
                let top = (0..g).map(|_| len()).collect();
                let bottom = (0..g).map(|_| len()).collect();
                let bridges = (0..g - 1).map(|_| len()).collect();
                let chain = ChainOfLoops::new(g, top, bottom, bridges).unwrap();
                let mut d = Divisor::zero();
                let deg = s.range(-1, 6);
                let neg = s.range(0, 1);
                for _ in 0..deg + neg {
                    d.add_point(grid_point(&mut s, chain.graph()), 1);
                }
                for _ in 0..neg {
                    d.add_point(grid_point(&mut s, chain.graph()), -1);
                }
                (chain, d)
            })
            .collect()
    };
    let agree = cases
        .par_iter()
        .filter(|(chain, d)| {
            let sub = common::Subdivision::new(chain.graph(), 8);
            rank(chain.graph(), d, &chain.rank_determining_set()).unwrap() == sub.rank(&sub.chips(d))
        })
        .count();
    report(
        8,
        agree == 50,
        format!("rank vs 1/8-subdivision brute force, g<=3, deg<=6: {agree}/50 agree"),
        start,
    )
}

fn main() {
    let start = Instant::now();
    let runs: Vec<Run> = [BnParams::new(4, 1, 3), BnParams::new(6, 1, 4), BnParams::new(6, 2, 6)]
        .into_iter()
        .map(run_experiments)
        .collect();
    let lines = vec![
        riemann_roch(),
        reduced_classification(),
        canonical_shape(),
        rho_zero_structure(&runs),
        independence(&runs),
        chips_on_each_loop(),
        min_chips_and_obstruction(),
        oracle_agreement(),
    ];
    for l in &lines {
        println!(
            "{} criterion {}: {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.text
        );
    }
    let failed = lines.iter().filter(|l| !l.pass).count();
    println!(
        "acceptance: {}/{} passed in {:.1?}",
        lines.len() - failed,
        lines.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
