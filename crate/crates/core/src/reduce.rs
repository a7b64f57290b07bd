//! Dhar burning, reduced divisors, linear equivalence and rank.
//!
//! Reduction is event driven: each step fires the unburnt region by the
//! largest distance that lets some chip reach the next node of the current
//! subdivision, so every step is exact.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Divisor, EdgeId, MetricGraph, Point, Region, Span, VertexId};
use crate::plfunc::PlFunction;
use crate::rational::Q;

/// Maximum number of firing events in one reduction.
pub const EVENT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub reduced: Divisor,
    /// `reduced = input + div(witness)`, with `witness(base) = 0`.
    pub witness: PlFunction,
    pub events: usize,
}

#[derive(Debug)]
struct Segment {
    edge: EdgeId,
    lo: Q,
    hi: Q,
    /// Node at `lo` and at `hi`.
    a: usize,
    b: usize,
}

/// The graph subdivided at the base point and at every point of a divisor's support.
#[derive(Debug)]
struct Subdivision {
    nodes: Vec<Point>,
    segments: Vec<Segment>,
    incident: Vec<Vec<usize>>,
    /// Segment ids of each edge, in order along the edge.
    per_edge: Vec<Vec<usize>>,
}

impl Subdivision {
    fn new(graph: &MetricGraph, d: &Divisor, base: &Point) -> Self {
        let mut nodes: Vec<Point> = graph.vertices().map(Point::Vertex).collect();
        let mut interior: Vec<BTreeMap<Q, usize>> = vec![BTreeMap::new(); graph.edge_count()];
        for p in d.support().chain(std::iter::once(base)) {
            if let Point::Interior { edge, offset } = p {
                if !interior[edge.0].contains_key(offset) {
                    interior[edge.0].insert(offset.clone(), nodes.len());
                    nodes.push(p.clone());
                }
            }
        }
        let mut segments = Vec::new();
        let mut incident = vec![Vec::new(); nodes.len()];
        let mut per_edge = Vec::with_capacity(graph.edge_count());
        for e in graph.edge_ids() {
            let edge = graph.edge(e);
            let mut stops: Vec<(Q, usize)> = vec![(Q::zero(), edge.tail.0)];
            stops.extend(interior[e.0].iter().map(|(x, &n)| (x.clone(), n)));
            stops.push((edge.length.clone(), edge.head.0));
            let mut ids = Vec::new();
            for w in stops.windows(2) {
                let id = segments.len();
                segments.push(Segment {
                    edge: e,
                    lo: w[0].0.clone(),
                    hi: w[1].0.clone(),
                    a: w[0].1,
                    b: w[1].1,
                });
                incident[w[0].1].push(id);
                incident[w[1].1].push(id);
                ids.push(id);
            }
            per_edge.push(ids);
        }
        Subdivision {
            nodes,
            segments,
            incident,
            per_edge,
        }
    }

    fn node_of(&self, p: &Point) -> usize {
        match p {
            Point::Vertex(v) => v.0,
            _ => self.nodes.iter().position(|n| n == p).expect("point is a node"),
        }
    }

    /// Runs the fire from `base`; returns (burnt nodes, burnt segments).
    fn burn(&self, d: &Divisor, base: usize) -> (Vec<bool>, Vec<bool>) {
        let mut node_burnt = vec![false; self.nodes.len()];
        let mut seg_burnt = vec![false; self.segments.len()];
        let mut count = vec![0i64; self.nodes.len()];
        let mut queue = VecDeque::from([base]);
        node_burnt[base] = true;
        while let Some(n) = queue.pop_front() {
            for &s in &self.incident[n] {
                if seg_burnt[s] {
                    continue;
                }
                seg_burnt[s] = true;
                let seg = &self.segments[s];
                if seg.a == seg.b {
                    continue;
                }
                let other = if seg.a == n { seg.b } else { seg.a };
                count[other] += 1;
                if !node_burnt[other] && count[other] > d.coeff(&self.nodes[other]) {
                    node_burnt[other] = true;
                    queue.push_back(other);
                }
            }
        }
        (node_burnt, seg_burnt)
    }
}

fn require_effective_away(d: &Divisor, base: &Point) -> Result<()> {
    match d.iter().find(|(p, c)| *c < 0 && *p != base) {
        None => Ok(()),
        Some((_, c)) => Err(Error::Precondition(format!(
            "divisor has a negative coefficient {c} away from the base point"
        ))),
    }
}

/// The closed region left unburnt by a fire started at `base`.
///
/// Empty iff `d` is `base`-reduced.
pub fn dhar_unburnt(graph: &MetricGraph, d: &Divisor, base: &Point) -> Result<Region> {
    graph.validate_point(base)?;
    d.validate_on(graph)?;
    require_effective_away(d, base)?;
    let sub = Subdivision::new(graph, d, base);
    let (nodes, segs) = sub.burn(d, sub.node_of(base));
    let mut region = Region::empty();
    for (i, burnt) in nodes.iter().enumerate() {
        if !burnt {
            region.add_point(&sub.nodes[i]);
        }
    }
    for (s, burnt) in segs.iter().enumerate() {
        if !burnt {
            let seg = &sub.segments[s];
            region.add_span(seg.edge, Span::closed(seg.lo.clone(), seg.hi.clone()));
        }
    }
    Ok(region)
}

pub fn is_v_reduced(graph: &MetricGraph, d: &Divisor, base: &Point) -> Result<bool> {
    if d.iter().any(|(p, c)| c < 0 && p != base) {
        return Ok(false);
    }
    Ok(dhar_unburnt(graph, d, base)?.is_empty())
}

/// Accumulates `dist`-style firing functions into a witness.
struct Witness {
    total: Option<PlFunction>,
}

impl Witness {
    fn new(graph: &MetricGraph, track: bool) -> Self {
        Witness {
            total: track.then(|| PlFunction::zero(graph)),
        }
    }

    fn add(&mut self, f: impl FnOnce() -> PlFunction) {
        if let Some(t) = &mut self.total {
            *t = t.add(&f());
        }
    }
}

/// `min(dist(·, U), eps)` where `U` is the unburnt part of the subdivision.
fn firing_function(
    graph: &MetricGraph,
    sub: &Subdivision,
    node_burnt: &[bool],
    seg_burnt: &[bool],
    eps: &Q,
) -> PlFunction {
    let mut pieces = Vec::with_capacity(graph.edge_count());
    for ids in &sub.per_edge {
        let mut pts: Vec<(Q, Q)> = Vec::new();
        let mut push = |x: Q, v: Q| {
            if pts.last().is_none_or(|(px, _)| *px != x) {
                pts.push((x, v));
            }
        };
        for &s in ids {
            let seg = &sub.segments[s];
            if !seg_burnt[s] {
                push(seg.lo.clone(), Q::zero());
                push(seg.hi.clone(), Q::zero());
            } else if !node_burnt[seg.a] {
                push(seg.lo.clone(), Q::zero());
                push(&seg.lo + eps, eps.clone());
                push(seg.hi.clone(), eps.clone());
            } else if !node_burnt[seg.b] {
                push(seg.lo.clone(), eps.clone());
                push(&seg.hi - eps, eps.clone());
                push(seg.hi.clone(), Q::zero());
            } else {
                push(seg.lo.clone(), eps.clone());
                push(seg.hi.clone(), eps.clone());
            }
        }
        pieces.push(pts);
    }
    PlFunction::from_edge_points(graph, pieces)
}

/// Dhar reduction of a divisor that is effective away from `base`.
fn reduce_effective_away(
    graph: &MetricGraph,
    mut d: Divisor,
    base: &Point,
    witness: &mut Witness,
    events: &mut usize,
) -> Result<Divisor> {
    loop {
        let sub = Subdivision::new(graph, &d, base);
        let (node_burnt, seg_burnt) = sub.burn(&d, sub.node_of(base));
        if node_burnt.iter().all(|&b| b) {
            return Ok(d);
        }
        *events += 1;
        if *events > EVENT_CAP {
            return Err(Error::IterationCap {
                what: "divisor reduction",
                cap: EVENT_CAP,
            });
        }
        // Burnt segments touching the unburnt set have exactly one unburnt end.
        let frontier: Vec<usize> = (0..sub.segments.len())
            .filter(|&s| {
                let seg = &sub.segments[s];
                seg_burnt[s] && (!node_burnt[seg.a] || !node_burnt[seg.b])
            })
            .collect();
        let eps = frontier
            .iter()
            .map(|&s| &sub.segments[s].hi - &sub.segments[s].lo)
            .min()
            .expect("a nonempty unburnt set has a frontier");
        for &s in &frontier {
            let seg = &sub.segments[s];
            let (from, to) = if !node_burnt[seg.a] {
                (seg.a, graph.point(seg.edge, &seg.lo + &eps)?)
            } else {
                (seg.b, graph.point(seg.edge, &seg.hi - &eps)?)
            };
            d.add_point(sub.nodes[from].clone(), -1);
            d.add_point(to, 1);
        }
        witness.add(|| firing_function(graph, &sub, &node_burnt, &seg_burnt, &eps));
    }
}

fn reduce_impl(
    graph: &MetricGraph,
    d: &Divisor,
    base: &Point,
    track: bool,
) -> Result<(Divisor, Option<PlFunction>, usize)> {
    graph.validate_point(base)?;
    d.validate_on(graph)?;
    let g = graph.genus() as i64;
    let mut witness = Witness::new(graph, track);
    let mut events = 0;
    let mut cur = d.clone();
    // Trade each negative point p for an effective class: c(g+1)·base - c·p has
    // degree c·g, so its p-reduced form is effective.
    let negatives: Vec<(Point, i64)> = cur
        .iter()
        .filter(|(p, c)| *c < 0 && *p != base)
        .map(|(p, c)| (p.clone(), -c))
        .collect();
    for (p, c) in negatives {
        let x = Divisor::from_terms([(base.clone(), c * (g + 1)), (p.clone(), -c)]);
        let r = reduce_effective_away(graph, x.clone(), &p, &mut witness, &mut events)?;
        debug_assert!(r.is_effective());
        cur = &(&cur + &r) - &x;
    }
    let reduced = reduce_effective_away(graph, cur, base, &mut witness, &mut events)?;
    let witness = witness.total.map(|w| {
        let at = w.evaluate(graph, base).expect("base on graph");
        w.shift(&-at)
    });
    Ok((reduced, witness, events))
}

/// The `base`-reduced divisor equivalent to `d`, with its witness.
pub fn v_reduce(graph: &MetricGraph, d: &Divisor, base: &Point) -> Result<ReductionResult> {
    let (reduced, witness, events) = reduce_impl(graph, d, base, true)?;
    Ok(ReductionResult {
        reduced,
        witness: witness.expect("tracked"),
        events,
    })
}

/// The `base`-reduced divisor equivalent to `d`, without building the witness.
pub fn reduced_divisor(graph: &MetricGraph, d: &Divisor, base: &Point) -> Result<Divisor> {
    reduce_impl(graph, d, base, false).map(|(r, _, _)| r)
}

/// The fixed base point used to compare classes: the first vertex.
pub fn class_base(_graph: &MetricGraph) -> Point {
    Point::Vertex(VertexId(0))
}

/// `Some(ψ)` with `d2 = d1 + div ψ` when the divisors are linearly equivalent.
pub fn is_equivalent(graph: &MetricGraph, d1: &Divisor, d2: &Divisor) -> Result<Option<PlFunction>> {
    if d1.degree() != d2.degree() {
        return Ok(None);
    }
    let base = class_base(graph);
    let r1 = v_reduce(graph, d1, &base)?;
    let r2 = v_reduce(graph, d2, &base)?;
    Ok((r1.reduced == r2.reduced).then(|| r1.witness.sub(&r2.witness)))
}

/// Whether `d` is equivalent to an effective divisor.
pub fn effective_class(graph: &MetricGraph, d: &Divisor, base: &Point) -> Result<bool> {
    if d.degree() < 0 {
        return Ok(false);
    }
    Ok(reduced_divisor(graph, d, base)?.is_effective())
}

/// Rank computation over a fixed finite test set, memoized on reduced forms.
pub struct RankComputer<'g> {
    graph: &'g MetricGraph,
    test_points: Vec<Point>,
    base: Point,
    memo: HashMap<(Divisor, i64), bool>,
}

impl<'g> RankComputer<'g> {
    /// `test_points` must be a rank-determining set of `graph`.
    pub fn new(graph: &'g MetricGraph, test_points: Vec<Point>) -> Self {
        RankComputer {
            graph,
            test_points,
            base: class_base(graph),
            memo: HashMap::new(),
        }
    }

    /// Uses all vertices and edge midpoints.
    pub fn with_default_set(graph: &'g MetricGraph) -> Self {
        Self::new(graph, graph.vertices_and_midpoints())
    }

    pub fn rank(&mut self, d: &Divisor) -> Result<i64> {
        if d.degree() < 0 {
            return Ok(-1);
        }
        let canon = reduced_divisor(self.graph, d, &self.base)?;
        if !canon.is_effective() {
            return Ok(-1);
        }
        let mut k = 0;
        while self.at_least(&canon, k + 1)? {
            k += 1;
        }
        Ok(k)
    }

    /// `canon` is the base-reduced effective representative of its class.
    fn at_least(&mut self, canon: &Divisor, k: i64) -> Result<bool> {
        if k == 0 {
            return Ok(true);
        }
        // The rank never exceeds the coefficient of a reduced divisor's base point.
        if canon.coeff(&self.base) < k || canon.degree() < k {
            return Ok(false);
        }
        if let Some(&hit) = self.memo.get(&(canon.clone(), k)) {
            return Ok(hit);
        }
        let mut reduced_at = Vec::with_capacity(self.test_points.len());
        for p in self.test_points.clone() {
            let rp = if p == self.base {
                canon.clone()
            } else {
                reduced_divisor(self.graph, canon, &p)?
            };
            if rp.coeff(&p) < k {
                self.memo.insert((canon.clone(), k), false);
                return Ok(false);
            }
            reduced_at.push((p, rp));
        }
        let mut ok = true;
        for (p, rp) in reduced_at {
            let child = &rp - &Divisor::point(p);
            let child = reduced_divisor(self.graph, &child, &self.base)?;
            if !self.at_least(&child, k - 1)? {
                ok = false;
                break;
            }
        }
        self.memo.insert((canon.clone(), k), ok);
        Ok(ok)
    }
}

/// Rank of `d`, where `test_points` is a rank-determining set.
pub fn rank(graph: &MetricGraph, d: &Divisor, test_points: &[Point]) -> Result<i64> {
    RankComputer::new(graph, test_points.to_vec()).rank(d)
}

/// Both sides of `r(D) - r(K - D) = deg D - g + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RiemannRoch {
    pub rank: i64,
    pub adjoint_rank: i64,
    pub degree: i64,
    pub genus: i64,
}

impl RiemannRoch {
    pub fn holds(&self) -> bool {
        self.rank - self.adjoint_rank == self.degree - self.genus + 1
    }
}

pub fn riemann_roch_sides(graph: &MetricGraph, d: &Divisor, test_points: &[Point]) -> Result<RiemannRoch> {
    let mut rc = RankComputer::new(graph, test_points.to_vec());
    let k = graph.canonical_divisor();
    Ok(RiemannRoch {
        rank: rc.rank(d)?,
        adjoint_rank: rc.rank(&(&k - d))?,
        degree: d.degree(),
        genus: graph.genus() as i64,
    })
}

/// Evaluates both sides of tropical Riemann-Roch over vertices and edge midpoints.
pub fn riemann_roch_check(graph: &MetricGraph, d: &Divisor) -> Result<bool> {
    Ok(riemann_roch_sides(graph, d, &graph.vertices_and_midpoints())?.holds())
}

/// An edge among `open_edges` whose interior has no point of `d`.
///
/// `d` must be effective and equivalent to the canonical divisor, and the
/// complement of the open edges must be a spanning tree.
pub fn find_unoccupied_edge(graph: &MetricGraph, d: &Divisor, open_edges: &[EdgeId]) -> Result<EdgeId> {
    if !d.is_effective() {
        return Err(Error::Precondition("divisor is not effective".into()));
    }
    let k = graph.canonical_divisor();
    if d.degree() != k.degree() {
        return Err(Error::Precondition(format!(
            "degree {} differs from canonical degree {}",
            d.degree(),
            k.degree()
        )));
    }
    let mut sorted = open_edges.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != open_edges.len() || sorted.len() != graph.genus() {
        return Err(Error::Precondition("need exactly g distinct open edges".into()));
    }
    if !complement_is_tree(graph, &sorted) {
        return Err(Error::Precondition("complement of the open edges is not a tree".into()));
    }
    if is_equivalent(graph, d, &k)?.is_none() {
        return Err(Error::Precondition("divisor is not equivalent to K".into()));
    }
    open_edges
        .iter()
        .copied()
        .find(|e| {
            !d.support()
                .any(|p| matches!(p, Point::Interior { edge, .. } if edge == e))
        })
        .ok_or_else(|| Error::Falsified("every open edge contains a point of a canonical divisor".into()))
}

fn complement_is_tree(graph: &MetricGraph, removed: &[EdgeId]) -> bool {
    let n = graph.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut kept = 0;
    for e in graph.edge_ids().filter(|e| !removed.contains(e)) {
        let edge = graph.edge(e);
        let (a, b) = (find(&mut parent, edge.tail.0), find(&mut parent, edge.head.0));
        if a == b {
            return false;
        }
        parent[a] = b;
        kept += 1;
    }
    kept + 1 == n
}
