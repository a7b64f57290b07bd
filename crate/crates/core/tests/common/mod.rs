//! Reference implementations used by the integration tests. None of them call
//! the library's reduction, rank or independence code; library types are only
//! used to carry inputs.
#![allow(dead_code)]

use std::collections::HashMap;

use num_traits::Zero;
use tropdiv::chain::ChainOfLoops;
use tropdiv::rational::qi;
use tropdiv::{Divisor, EdgeId, MetricGraph, PlFunction, Point, Q};

/// A finite multigraph obtained by cutting every edge into pieces of length `1/n`.
pub struct Subdivision {
    adj: Vec<Vec<usize>>,
    /// `(tail, head, pieces, first interior node)` per original edge.
    edges: Vec<(usize, usize, usize, usize)>,
    n: i64,
}

impl Subdivision {
    /// Panics unless every length is a multiple of `1/n`.
    pub fn new(graph: &MetricGraph, n: i64) -> Self {
        let mut count = graph.vertex_count();
        let mut edges = Vec::new();
        for e in graph.edges() {
            let pieces = &e.length * qi(n);
            assert!(pieces.is_integer(), "edge length off the 1/{n} grid");
            let pieces: usize = pieces.to_integer().try_into().unwrap();
            edges.push((e.tail.0, e.head.0, pieces, count));
            count += pieces - 1;
        }
        let mut adj = vec![Vec::new(); count];
        for &(t, h, pieces, first) in &edges {
            let node = |k: usize| match k {
                0 => t,
                k if k == pieces => h,
                k => first + k - 1,
            };
            for k in 0..pieces {
                adj[node(k)].push(node(k + 1));
                adj[node(k + 1)].push(node(k));
            }
        }
        Subdivision { adj, edges, n }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn node(&self, p: &Point) -> usize {
        match p {
            Point::Vertex(v) => v.0,
            Point::Interior { edge, offset } => {
                let (_, _, _, first) = self.edges[edge.0];
                let k = offset * qi(self.n);
                assert!(k.is_integer(), "point off the grid");
                let k: usize = k.to_integer().try_into().unwrap();
                first + k - 1
            }
        }
    }

    pub fn chips(&self, d: &Divisor) -> Vec<i64> {
        let mut c = vec![0; self.node_count()];
        for (p, k) in d.iter() {
            c[self.node(p)] += k;
        }
        c
    }

    fn fire(&self, d: &mut [i64], set: &[bool]) {
        for u in 0..d.len() {
            if set[u] {
                for &w in &self.adj[u] {
                    if !set[w] {
                        d[u] -= 1;
                        d[w] += 1;
                    }
                }
            }
        }
    }

    /// The `q`-reduced divisor equivalent to `d`.
    pub fn reduce(&self, d: &[i64], q: usize) -> Vec<i64> {
        let n = self.node_count();
        let mut d = d.to_vec();
        let mut dist = vec![usize::MAX; n];
        dist[q] = 0;
        let mut queue = std::collections::VecDeque::from([q]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        // Push chips outward until only q can be in debt.
        loop {
            let worst = (0..n).filter(|&v| v != q && d[v] < 0).max_by_key(|&v| dist[v]);
            let Some(v) = worst else { break };
            let set: Vec<bool> = (0..n).map(|u| dist[u] < dist[v]).collect();
            self.fire(&mut d, &set);
        }
        loop {
            let mut burnt = vec![false; n];
            let mut hits = vec![0i64; n];
            burnt[q] = true;
            let mut stack = vec![q];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !burnt[w] {
                        hits[w] += 1;
                        if hits[w] > d[w] {
                            burnt[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            if burnt.iter().all(|&b| b) {
                return d;
            }
            let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
            self.fire(&mut d, &unburnt);
        }
    }

    fn rank_at_least(&self, d: &[i64], k: usize, memo: &mut HashMap<(Vec<i64>, usize), bool>) -> bool {
        let r = self.reduce(d, 0);
        if r[0] < 0 {
            return false;
        }
        if k == 0 {
            return true;
        }
        if let Some(&ans) = memo.get(&(r.clone(), k)) {
            return ans;
        }
        let mut ans = true;
        for v in 0..self.node_count() {
            let mut e = r.clone();
            e[v] -= 1;
            if !self.rank_at_least(&e, k - 1, memo) {
                ans = false;
                break;
            }
        }
        memo.insert((r, k), ans);
        ans
    }

    /// Rank by exhausting `D - v_1 - ... - v_k` over all nodes.
    pub fn rank(&self, d: &[i64]) -> i64 {
        let mut memo = HashMap::new();
        let mut k = 0;
        while self.rank_at_least(d, k, &mut memo) {
            k += 1;
        }
        k as i64 - 1
    }
}

/// Breakpoints of `f` on edge `e`.
fn pieces(f: &PlFunction, e: usize) -> Vec<(Q, Q)> {
    f.edge_functions()[e]
        .breakpoints()
        .map(|(x, v)| (x.clone(), v.clone()))
        .collect()
}

/// Value and right slope of a sampled piece at `x`, which must lie in `[x0, x1]`.
fn line_at(bp: &[(Q, Q)], x: &Q) -> (Q, Q) {
    let k = bp.windows(2).position(|w| *x <= w[1].0).expect("x on edge");
    let (x0, v0) = &bp[k];
    let (x1, v1) = &bp[k + 1];
    let slope = (v1 - v0) / (x1 - x0);
    (v0 + &slope * (x - x0), slope)
}

pub fn eval(f: &PlFunction, e: usize, x: &Q) -> Q {
    line_at(&pieces(f, e), x).0
}

/// Exhaustive check that `min_j (f_j + b_j)` over the members with finite
/// offset is attained at least twice everywhere.
pub fn min_attained_twice(graph: &MetricGraph, fs: &[PlFunction], b: &[Option<Q>]) -> bool {
    let live: Vec<usize> = (0..fs.len()).filter(|&j| b[j].is_some()).collect();
    if live.len() < 2 {
        return false;
    }
    for e in 0..graph.edge_count() {
        let bps: Vec<Vec<(Q, Q)>> = live.iter().map(|&j| pieces(&fs[j], e)).collect();
        let mut xs: Vec<Q> = bps.iter().flat_map(|p| p.iter().map(|(x, _)| x.clone())).collect();
        xs.sort();
        xs.dedup();
        for w in xs.windows(2) {
            let mid = (&w[0] + &w[1]) / qi(2);
            let lines: Vec<(Q, Q)> = live
                .iter()
                .zip(&bps)
                .map(|(&j, p)| {
                    let (v, s) = line_at(p, &mid);
                    (v + b[j].clone().unwrap(), s)
                })
                .collect();
            let at = |x: &Q| -> Vec<Q> { lines.iter().map(|(v, s)| v + s * (x - &mid)).collect() };
            let mut probes = vec![w[0].clone(), w[1].clone()];
            for a in 0..lines.len() {
                for c in a + 1..lines.len() {
                    let ds = &lines[a].1 - &lines[c].1;
                    if !ds.is_zero() {
                        let x = &mid - (&lines[a].0 - &lines[c].0) / ds;
                        if x > w[0] && x < w[1] {
                            probes.push(x);
                        }
                    }
                }
            }
            probes.sort();
            probes.dedup();
            let mut all = probes.clone();
            for p in probes.windows(2) {
                all.push((&p[0] + &p[1]) / qi(2));
            }
            for x in &all {
                let vals = at(x);
                let m = vals.iter().min().unwrap();
                if vals.iter().filter(|v| *v == m).count() < 2 {
                    return false;
                }
            }
        }
    }
    true
}

/// Values of `f_a - f_b` on the segments where the two are parallel.
fn parallel_gaps(graph: &MetricGraph, fa: &PlFunction, fb: &PlFunction) -> Vec<Q> {
    let mut out = Vec::new();
    for e in 0..graph.edge_count() {
        let (pa, pb) = (pieces(fa, e), pieces(fb, e));
        let mut xs: Vec<Q> = pa.iter().chain(&pb).map(|(x, _)| x.clone()).collect();
        xs.sort();
        xs.dedup();
        for w in xs.windows(2) {
            let mid = (&w[0] + &w[1]) / qi(2);
            let (va, sa) = line_at(&pa, &mid);
            let (vb, sb) = line_at(&pb, &mid);
            if sa == sb {
                out.push(va - vb);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Searches offsets for families of at most three functions. With three
/// members, every member of a valid combination is parallel to another one
/// on some segment, so the offsets are sums of parallel gaps along a path.
pub fn brute_dependence(graph: &MetricGraph, fs: &[PlFunction]) -> Option<Vec<Option<Q>>> {
    let n = fs.len();
    assert!(n <= 3, "oracle handles at most three functions");
    let gap = |a: usize, c: usize| parallel_gaps(graph, &fs[a], &fs[c]);
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
        if members.len() < 2 {
            continue;
        }
        let root = members[0];
        let others = &members[1..];
        let candidates: Vec<Vec<Q>> = others
            .iter()
            .map(|&j| {
                let mut c = gap(root, j);
                for &m in others.iter().filter(|&&m| m != j) {
                    for x in gap(root, m) {
                        for y in gap(m, j) {
                            c.push(&x + &y);
                        }
                    }
                }
                c.sort();
                c.dedup();
                c
            })
            .collect();
        let mut idx = vec![0usize; others.len()];
        if candidates.iter().any(|c| c.is_empty()) {
            continue;
        }
        loop {
            let mut b = vec![None; n];
            b[root] = Some(Q::zero());
            for (t, &j) in others.iter().enumerate() {
                b[j] = Some(candidates[t][idx[t]].clone());
            }
            if min_attained_twice(graph, fs, &b) {
                return Some(b);
            }
            let mut t = 0;
            loop {
                if t == idx.len() {
                    break;
                }
                idx[t] += 1;
                if idx[t] < candidates[t].len() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
            if t == idx.len() {
                break;
            }
        }
    }
    None
}

pub enum Place {
    Loop(usize),
    Bridge,
    End,
}

/// Where `p` sits in the chain, read off the edge structure directly.
pub fn place(chain: &ChainOfLoops, p: &Point) -> Place {
    let g = chain.genus();
    let on_loop = |e: EdgeId| (1..=g).find(|&i| chain.loop_edges(i).top == e || chain.loop_edges(i).bottom == e);
    match p {
        Point::Vertex(v) if *v == chain.w(g) => Place::End,
        Point::Vertex(v) => match (1..=g).find(|&i| chain.v(i) == *v) {
            Some(i) => Place::Loop(i),
            None => Place::Bridge,
        },
        Point::Interior { edge, .. } => match on_loop(*edge) {
            Some(i) => Place::Loop(i),
            None => Place::Bridge,
        },
    }
}

pub fn loop_counts(chain: &ChainOfLoops, d: &Divisor) -> (Vec<i64>, i64) {
    let mut loops = vec![0; chain.genus() + 1];
    let mut bridges = 0;
    for (p, c) in d.iter() {
        match place(chain, p) {
            Place::Loop(i) => loops[i] += c,
            Place::Bridge => bridges += c,
            Place::End => {}
        }
    }
    (loops, bridges)
}

/// No chips on bridges (which include `w_i`, `i < g`) and at most one per loop.
pub fn looks_reduced(chain: &ChainOfLoops, d: &Divisor) -> bool {
    let (loops, bridges) = loop_counts(chain, d);
    bridges == 0 && loops.iter().all(|&c| c <= 1)
}

pub fn empty_loops(chain: &ChainOfLoops, d: &Divisor) -> Vec<usize> {
    let (loops, _) = loop_counts(chain, d);
    (1..=chain.genus()).filter(|&i| loops[i] == 0).collect()
}
