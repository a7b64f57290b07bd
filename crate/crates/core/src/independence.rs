//! Tropical dependence of a family of piecewise-linear functions.
//!
//! A family `ψ_0..ψ_n` is dependent when some offsets make the minimum of
//! `ψ_j + b_j` attained at least twice at every point.
//!
//! The decision uses the map `T_j(b) = max_x (min_{k≠j} (ψ_k + b_k) − ψ_j)`:
//! the valid offsets are exactly `{b : T(b) ≤ b}`. `T` is monotone and
//! commutes with adding constants, so the increasing iteration
//! `b_j ← max(b_j, T_j(b))` from `b = 0` stays below every valid `b ≥ 0` and
//! converges to one when any exists. Some valid `b` (if any) has all gaps
//! between sorted offsets at most `R = max (ψ_j − ψ_k)`, so once an offset
//! exceeds `(n − 1)·R` no valid offsets exist.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetricGraph, Point, Region, Span};
use crate::plfunc::{lower_envelope, merged, min_combination, EdgeFunction, Line, PlFunction};
use crate::rational::{qi, Q};

/// Largest family accepted.
pub const MAX_FAMILY: usize = 12;
/// Sweeps of the offset iteration before giving up.
pub const SWEEP_CAP: usize = 20_000;
/// Offset vectors examined by the critical-set search before giving up.
pub const CANDIDATE_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Holds,
    /// The minimum is attained only by `index` near `point`.
    UniqueMinAt {
        point: Point,
        index: usize,
    },
}

impl Verification {
    pub fn holds(&self) -> bool {
        matches!(self, Verification::Holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceCertificate {
    /// `None` marks a member that never attains the minimum.
    pub offsets: Vec<Option<Q>>,
    pub theta: PlFunction,
}

impl DependenceCertificate {
    pub fn finite_members(&self) -> Vec<usize> {
        (0..self.offsets.len()).filter(|&j| self.offsets[j].is_some()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    /// Every offset vector the iteration passed through.
    pub examined: Vec<Vec<Q>>,
    /// For each examined vector, a point where one member is the unique minimum.
    pub witnesses: Vec<Point>,
    /// `(n − 1)·R`.
    pub bound: Q,
    /// The member whose offset passed the bound.
    pub exceeded: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dependence {
    Dependent(DependenceCertificate),
    Independent(IndependenceReport),
}

impl Dependence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Dependence::Independent(_))
    }
}

fn check_family(graph: &MetricGraph, fs: &[PlFunction]) -> Result<()> {
    if fs.len() < 2 {
        return Err(Error::Precondition("dependence needs at least two functions".into()));
    }
    if fs.len() > MAX_FAMILY {
        return Err(Error::SearchCap {
            what: "family size",
            cap: MAX_FAMILY,
        });
    }
    if fs.iter().any(|f| f.edge_functions().len() != graph.edge_count()) {
        return Err(Error::Arity("function defined on a different graph".into()));
    }
    Ok(())
}

/// Pieces of the lower envelope of `ψ_j + b_j` on one edge: `(lo, hi, attainers)`.
fn envelope_pieces(efs: &[&EdgeFunction], b: &[Q]) -> Vec<(Q, Q, Vec<usize>)> {
    let xs = merged(efs);
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (x0, x1) = (&w[0], &w[1]);
        let lines: Vec<Line> = efs
            .iter()
            .zip(b)
            .map(|(f, bj)| Line {
                value: f.value(x0) + bj,
                slope: f.slope_right(x0),
            })
            .collect();
        let env = lower_envelope(&lines, x0, x1);
        for (k, (lo, idx)) in env.iter().enumerate() {
            let hi = env.get(k + 1).map_or(x1, |(x, _)| x);
            let cur = &lines[*idx];
            let same: Vec<usize> = (0..lines.len()).filter(|&j| lines[j] == *cur).collect();
            out.push((lo.clone(), hi.clone(), same));
        }
    }
    out
}

/// Whether the minimum of `ψ_j + b_j` is attained at least twice everywhere.
pub fn verify_dependence(graph: &MetricGraph, fs: &[PlFunction], b: &[Q]) -> Result<Verification> {
    check_family(graph, fs)?;
    if b.len() != fs.len() {
        return Err(Error::Arity(format!("{} functions but {} offsets", fs.len(), b.len())));
    }
    for e in graph.edge_ids() {
        let efs: Vec<&EdgeFunction> = fs.iter().map(|f| f.edge(e)).collect();
        for (lo, hi, same) in envelope_pieces(&efs, b) {
            if same.len() < 2 {
                let point = graph.point(e, (lo + hi) / qi(2))?;
                return Ok(Verification::UniqueMinAt { point, index: same[0] });
            }
        }
    }
    Ok(Verification::Holds)
}

fn attainers_at(graph: &MetricGraph, fs: &[PlFunction], b: &[Q], p: &Point) -> Result<Vec<usize>> {
    let vals: Vec<Q> = fs
        .iter()
        .zip(b)
        .map(|(f, c)| Ok(f.evaluate(graph, p)? + c))
        .collect::<Result<_>>()?;
    let m = vals.iter().min().expect("nonempty").clone();
    Ok((0..vals.len()).filter(|&j| vals[j] == m).collect())
}

/// The open set where the minimum of `ψ_j + b_j` is attained exactly once.
///
/// A single function is uniquely minimal everywhere.
pub fn unique_min_locus(graph: &MetricGraph, fs: &[PlFunction], b: &[Q]) -> Result<Region> {
    if fs.len() == 1 {
        return Ok(Region::all(graph));
    }
    check_family(graph, fs)?;
    let mut region = Region::empty();
    for v in graph.vertices() {
        if attainers_at(graph, fs, b, &Point::Vertex(v))?.len() == 1 {
            region.add_vertex(v);
        }
    }
    for e in graph.edge_ids() {
        let efs: Vec<&EdgeFunction> = fs.iter().map(|f| f.edge(e)).collect();
        let len = graph.edge(e).length.clone();
        let tail_in = region.contains(&Point::Vertex(graph.edge(e).tail));
        let head_in = region.contains(&Point::Vertex(graph.edge(e).head));
        let mut open: Option<Span> = None;
        let mut spans = Vec::new();
        for (lo, hi, same) in envelope_pieces(&efs, b) {
            let lo_unique = if lo.is_zero() {
                tail_in
            } else {
                attainers_at(graph, fs, b, &graph.point(e, lo.clone())?)?.len() == 1
            };
            match (&mut open, same.len() == 1) {
                (Some(s), true) if lo_unique => s.hi = hi,
                (_, true) => {
                    spans.extend(open.take());
                    open = Some(Span {
                        lo,
                        hi,
                        lo_closed: false,
                        hi_closed: false,
                    });
                }
                (_, false) => spans.extend(open.take()),
            }
        }
        spans.extend(open.take());
        for mut s in spans {
            s.lo_closed = s.lo.is_zero() && tail_in;
            s.hi_closed = s.hi == len && head_in;
            region.add_span(e, s);
        }
    }
    Ok(region)
}

fn max_point(graph: &MetricGraph, f: &PlFunction) -> (Q, Point) {
    let mut best: Option<(Q, EdgeId, Q)> = None;
    for (i, ef) in f.edge_functions().iter().enumerate() {
        for (x, v) in ef.breakpoints() {
            if best.as_ref().is_none_or(|(bv, _, _)| v > bv) {
                best = Some((v.clone(), EdgeId(i), x.clone()));
            }
        }
    }
    let (v, e, x) = best.expect("graph has an edge");
    (v, graph.point(e, x).expect("breakpoint on edge"))
}

/// `T_j(b)` and a point where it is attained.
fn raise(graph: &MetricGraph, fs: &[PlFunction], b: &[Q], j: usize) -> Result<(Q, Point)> {
    let others: Vec<PlFunction> = (0..fs.len()).filter(|&k| k != j).map(|k| fs[k].clone()).collect();
    let ob: Vec<Q> = (0..fs.len()).filter(|&k| k != j).map(|k| b[k].clone()).collect();
    let theta = min_combination(graph, &others, &ob)?;
    Ok(max_point(graph, &theta.sub(&fs[j])))
}

fn certificate(graph: &MetricGraph, fs: &[PlFunction], b: Vec<Q>) -> Result<DependenceCertificate> {
    if !verify_dependence(graph, fs, &b)?.holds() {
        return Err(Error::Falsified(
            "offsets accepted by the search fail verification".into(),
        ));
    }
    let theta = min_combination(graph, fs, &b)?;
    let agreement: Vec<bool> = fs
        .iter()
        .zip(&b)
        .map(|(f, c)| {
            !crate::plfunc::agreement_domain(graph, &theta, &f.shift(c))
                .region
                .is_empty()
        })
        .collect();
    let offsets = b.into_iter().zip(agreement).map(|(c, hit)| hit.then_some(c)).collect();
    Ok(DependenceCertificate { offsets, theta })
}

/// Decides dependence. Every certificate is verified; every independence
/// verdict rests on the offset bound described in the module docs.
pub fn find_dependence(graph: &MetricGraph, fs: &[PlFunction]) -> Result<Dependence> {
    check_family(graph, fs)?;
    let n = fs.len();
    let mut spread = Q::zero();
    for j in 0..n {
        for k in 0..n {
            if j != k {
                spread = spread.max(max_point(graph, &fs[j].sub(&fs[k])).0);
            }
        }
    }
    let bound = &spread * qi(n as i64 - 1);
    let mut b = vec![Q::zero(); n];
    let mut examined = Vec::new();
    let mut witnesses = Vec::new();
    for _ in 0..SWEEP_CAP {
        let mut witness = None;
        examined.push(b.clone());
        for j in 0..n {
            let (t, p) = raise(graph, fs, &b, j)?;
            if t > b[j] {
                witness.get_or_insert(p);
                b[j] = t;
                if b[j] > bound {
                    witnesses.extend(witness);
                    return Ok(Dependence::Independent(IndependenceReport {
                        examined,
                        witnesses,
                        bound,
                        exceeded: j,
                    }));
                }
            }
        }
        match witness {
            None => {
                examined.pop();
                return Ok(Dependence::Dependent(certificate(graph, fs, b)?));
            }
            Some(p) => witnesses.push(p),
        }
    }
    // The iteration may approach a valid vector without reaching it.
    match critical_set_search(graph, fs, CANDIDATE_CAP)? {
        Some(c) => Ok(Dependence::Dependent(c)),
        None => Err(Error::SearchCap {
            what: "offset iteration",
            cap: SWEEP_CAP,
        }),
    }
}

/// Values `c` such that `ψ_j − ψ_k ≡ −c` on a piece of positive length, so
/// that `b_j − b_k = c` makes the shifted functions coincide there.
pub fn critical_values(fj: &PlFunction, fk: &PlFunction) -> Vec<Q> {
    let h = fk.sub(fj);
    let mut out = BTreeSet::new();
    for ef in h.edge_functions() {
        let pts: Vec<(&Q, &Q)> = ef.breakpoints().collect();
        for (k, &s) in ef.slopes().iter().enumerate() {
            if s == 0 {
                out.insert(pts[k].1.clone());
            }
        }
    }
    out.into_iter().collect()
}

/// The search over pairwise critical differences: subsets by size, then
/// offset vectors grown one member at a time from a critical difference to
/// an already placed member. Returns the first verified vector found.
pub fn critical_set_search(
    graph: &MetricGraph,
    fs: &[PlFunction],
    cap: usize,
) -> Result<Option<DependenceCertificate>> {
    check_family(graph, fs)?;
    let n = fs.len();
    let mut crit: BTreeMap<(usize, usize), Vec<Q>> = BTreeMap::new();
    for j in 0..n {
        for k in 0..n {
            if j != k {
                crit.insert((j, k), critical_values(&fs[j], &fs[k]));
            }
        }
    }
    let mut budget = cap;
    for size in 2..=n {
        for subset in subsets(n, size) {
            for b in subset_candidates(&subset, &crit, &mut budget)? {
                let sub_fs: Vec<PlFunction> = subset.iter().map(|&j| fs[j].clone()).collect();
                if verify_dependence(graph, &sub_fs, &b)?.holds() {
                    let mut offsets = vec![None; n];
                    for (&j, c) in subset.iter().zip(&b) {
                        offsets[j] = Some(c.clone());
                    }
                    let theta = min_combination(graph, &sub_fs, &b)?;
                    return Ok(Some(DependenceCertificate { offsets, theta }));
                }
            }
        }
    }
    Ok(None)
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            go(j + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Offset vectors on `subset`, first member at 0, in deterministic order.
fn subset_candidates(
    subset: &[usize],
    crit: &BTreeMap<(usize, usize), Vec<Q>>,
    budget: &mut usize,
) -> Result<Vec<Vec<Q>>> {
    let mut layer: BTreeSet<Vec<Option<Q>>> = BTreeSet::new();
    let mut start = vec![None; subset.len()];
    start[0] = Some(Q::zero());
    layer.insert(start);
    for _ in 1..subset.len() {
        let mut next = BTreeSet::new();
        for partial in &layer {
            for u in (0..partial.len()).filter(|&u| partial[u].is_none()) {
                for (a, pa) in partial.iter().enumerate() {
                    let Some(ba) = pa else { continue };
                    for c in &crit[&(subset[u], subset[a])] {
                        let mut ext = partial.clone();
                        ext[u] = Some(ba + c);
                        next.insert(ext);
                        if next.len() > *budget {
                            return Err(Error::SearchCap {
                                what: "critical-set search",
                                cap: CANDIDATE_CAP,
                            });
                        }
                    }
                }
            }
        }
        layer = next;
    }
    *budget -= layer.len();
    Ok(layer
        .into_iter()
        .map(|v| v.into_iter().map(|c| c.expect("complete")).collect())
        .collect())
}
