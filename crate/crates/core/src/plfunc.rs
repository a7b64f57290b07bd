//! Continuous piecewise-linear functions with integer slopes on a metric graph.
//!
//! The order of a function at a point is the sum of its *incoming* slopes, so
//! local maxima carry positive coefficients in `div`. With this convention
//! `D + div(f)` effective is the membership test for `R(D)`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Direction, Divisor, EdgeId, End, MetricGraph, Point, Region, Span};
use crate::rational::{format_q, integer_slope, qi, Q};

/// Restriction of a function to one edge: breakpoints `xs[0] = 0 < ... < xs[n] = len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeFunction {
    xs: Vec<Q>,
    values: Vec<Q>,
    slopes: Vec<i64>,
}

impl EdgeFunction {
    fn from_points(points: Vec<(Q, Q)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidFunction("an edge needs at least two breakpoints".into()));
        }
        let mut xs = Vec::with_capacity(points.len());
        let mut values = Vec::with_capacity(points.len());
        let mut slopes = Vec::with_capacity(points.len() - 1);
        for (k, (x, v)) in points.into_iter().enumerate() {
            if k > 0 {
                let (px, pv) = (&xs[k - 1], &values[k - 1]);
                if &x <= px {
                    return Err(Error::InvalidFunction(format!(
                        "breakpoints not increasing at offset {}",
                        format_q(&x)
                    )));
                }
                let s = integer_slope(px, pv, &x, &v)
                    .ok_or_else(|| Error::InvalidFunction(format!("non-integer slope ending at {}", format_q(&x))))?;
                slopes.push(s);
            }
            xs.push(x);
            values.push(v);
        }
        Ok(EdgeFunction { xs, values, slopes })
    }

    fn linear(len: &Q, start: Q, slope: i64) -> Self {
        let end = &start + qi(slope) * len;
        EdgeFunction {
            xs: vec![Q::zero(), len.clone()],
            values: vec![start, end],
            slopes: vec![slope],
        }
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Q, &Q)> {
        self.xs.iter().zip(&self.values)
    }

    pub fn offsets(&self) -> &[Q] {
        &self.xs
    }

    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    fn len(&self) -> &Q {
        self.xs.last().expect("nonempty")
    }

    /// Index of the piece `[xs[k], xs[k+1]]` containing `x`, preferring the left one.
    fn piece_left(&self, x: &Q) -> usize {
        match self.xs.binary_search(x) {
            Ok(0) => 0,
            Ok(k) => k - 1,
            Err(k) => k - 1,
        }
    }

    fn piece_right(&self, x: &Q) -> usize {
        match self.xs.binary_search(x) {
            Ok(k) => k.min(self.slopes.len() - 1),
            Err(k) => k - 1,
        }
    }

    pub fn value(&self, x: &Q) -> Q {
        let k = self.piece_left(x);
        &self.values[k] + qi(self.slopes[k]) * (x - &self.xs[k])
    }

    /// Slope on `(x - t, x)`.
    pub fn slope_left(&self, x: &Q) -> i64 {
        self.slopes[self.piece_left(x)]
    }

    /// Slope on `(x, x + t)`.
    pub fn slope_right(&self, x: &Q) -> i64 {
        self.slopes[self.piece_right(x)]
    }

    fn simplified(mut self) -> Self {
        let mut k = 1;
        while k < self.slopes.len() {
            if self.slopes[k - 1] == self.slopes[k] {
                self.slopes.remove(k);
                self.xs.remove(k);
                self.values.remove(k);
            } else {
                k += 1;
            }
        }
        self
    }

    fn combine(a: &EdgeFunction, b: &EdgeFunction, f: impl Fn(&Q, &Q) -> Q) -> EdgeFunction {
        let xs = merged(&[a, b]);
        let pts = xs.into_iter().map(|x| {
            let v = f(&a.value(&x), &b.value(&x));
            (x, v)
        });
        EdgeFunction::from_points(pts.collect())
            .expect("sum of integer-slope pieces")
            .simplified()
    }
}

/// Union of breakpoint offsets of several functions on one edge.
pub(crate) fn merged(fs: &[&EdgeFunction]) -> Vec<Q> {
    let set: BTreeSet<&Q> = fs.iter().flat_map(|f| f.xs.iter()).collect();
    set.into_iter().cloned().collect()
}

/// A line `value + slope * (x - x0)` anchored at the left end of a subsegment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Line {
    pub value: Q,
    pub slope: i64,
}

impl Line {
    pub fn at(&self, x0: &Q, x: &Q) -> Q {
        &self.value + qi(self.slope) * (x - x0)
    }
}

/// Lower envelope of `lines` over `[x0, x1]`, as `(x, index of attaining line)` pieces.
///
/// Each entry starts a piece that extends to the next entry (or `x1`). Among
/// lines tied on a piece, the lowest index is reported.
pub(crate) fn lower_envelope(lines: &[Line], x0: &Q, x1: &Q) -> Vec<(Q, usize)> {
    let pick = |x: &Q| {
        let mut best: Option<(Q, i64, usize)> = None;
        for (j, l) in lines.iter().enumerate() {
            let v = l.at(x0, x);
            let better = match &best {
                None => true,
                Some((bv, bs, _)) => v < *bv || (v == *bv && l.slope < *bs),
            };
            if better {
                best = Some((v, l.slope, j));
            }
        }
        best.expect("at least one line").2
    };
    let mut out = Vec::new();
    let mut x = x0.clone();
    let mut cur = pick(&x);
    loop {
        out.push((x.clone(), cur));
        let c = &lines[cur];
        let vc = c.at(x0, &x);
        let mut next: Option<Q> = None;
        for l in lines {
            if l.slope < c.slope {
                let t = &x + (l.at(x0, &x) - &vc) / qi(c.slope - l.slope);
                if t > x && &t < x1 && next.as_ref().is_none_or(|n| &t < n) {
                    next = Some(t);
                }
            }
        }
        match next {
            None => break,
            Some(t) => {
                x = t;
                cur = pick(&x);
            }
        }
    }
    out
}

/// A continuous piecewise-linear function with integer slopes on every edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlFunction {
    edges: Vec<EdgeFunction>,
}

impl PlFunction {
    /// Builds a function from per-edge `(offset, value)` breakpoint lists,
    /// validating integer slopes and continuity at vertices.
    pub fn new(graph: &MetricGraph, pieces: Vec<Vec<(Q, Q)>>) -> Result<Self> {
        if pieces.len() != graph.edge_count() {
            return Err(Error::Arity(format!(
                "function has {} edge lists for {} edges",
                pieces.len(),
                graph.edge_count()
            )));
        }
        let mut edges = Vec::with_capacity(pieces.len());
        for (i, pts) in pieces.into_iter().enumerate() {
            let len = &graph.edge(EdgeId(i)).length;
            let first_ok = pts.first().is_some_and(|(x, _)| x.is_zero());
            let last_ok = pts.last().is_some_and(|(x, _)| x == len);
            if !first_ok || !last_ok {
                return Err(Error::InvalidFunction(format!(
                    "edge {i}: breakpoints must start at 0 and end at the edge length"
                )));
            }
            edges.push(EdgeFunction::from_points(pts)?);
        }
        let f = PlFunction { edges };
        f.check_continuity(graph)?;
        Ok(f)
    }

    fn check_continuity(&self, graph: &MetricGraph) -> Result<()> {
        for v in graph.vertices() {
            let mut value: Option<Q> = None;
            for d in graph.directions(v) {
                let x = self.end_value(graph, *d);
                match &value {
                    None => value = Some(x),
                    Some(v0) if *v0 != x => {
                        return Err(Error::InvalidFunction(format!(
                            "discontinuous at vertex {}: {} vs {}",
                            graph.name(v),
                            format_q(v0),
                            format_q(&x)
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    fn end_value(&self, graph: &MetricGraph, d: Direction) -> Q {
        let f = &self.edges[d.edge.0];
        match d.end {
            End::Tail => f.values[0].clone(),
            End::Head => {
                debug_assert_eq!(f.len(), &graph.edge(d.edge).length);
                f.values.last().expect("nonempty").clone()
            }
        }
    }

    pub fn constant(graph: &MetricGraph, c: Q) -> Self {
        let edges = graph
            .edges()
            .iter()
            .map(|e| EdgeFunction::linear(&e.length, c.clone(), 0))
            .collect();
        PlFunction { edges }
    }

    pub fn zero(graph: &MetricGraph) -> Self {
        Self::constant(graph, Q::zero())
    }

    /// Builds a function edge by edge from already validated pieces.
    pub(crate) fn from_edge_points(graph: &MetricGraph, pieces: Vec<Vec<(Q, Q)>>) -> Self {
        let f = Self::new(graph, pieces).expect("internally constructed function is valid");
        f.simplified()
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeFunction {
        &self.edges[e.0]
    }

    pub fn edge_functions(&self) -> &[EdgeFunction] {
        &self.edges
    }

    fn simplified(self) -> Self {
        PlFunction {
            edges: self.edges.into_iter().map(EdgeFunction::simplified).collect(),
        }
    }

    pub fn evaluate(&self, graph: &MetricGraph, p: &Point) -> Result<Q> {
        graph.validate_point(p)?;
        Ok(match p {
            Point::Vertex(v) => match graph.directions(*v).first() {
                Some(d) => self.end_value(graph, *d),
                None => return Err(Error::PointOffGraph("isolated vertex".into())),
            },
            Point::Interior { edge, offset } => self.edges[edge.0].value(offset),
        })
    }

    /// Slope of the function toward the vertex when arriving along `dir`.
    pub fn incoming_slope(&self, dir: Direction) -> i64 {
        let f = &self.edges[dir.edge.0];
        match dir.end {
            End::Head => *f.slopes.last().expect("nonempty"),
            End::Tail => -f.slopes[0],
        }
    }

    /// Sum of incoming slopes at `p`.
    pub fn order_at(&self, graph: &MetricGraph, p: &Point) -> i64 {
        match p {
            Point::Vertex(v) => graph.directions(*v).iter().map(|d| self.incoming_slope(*d)).sum(),
            Point::Interior { edge, offset } => {
                let f = &self.edges[edge.0];
                f.slope_left(offset) - f.slope_right(offset)
            }
        }
    }

    /// `div(f) = sum ord_p(f) p`; always of degree zero.
    pub fn divisor(&self, graph: &MetricGraph) -> Divisor {
        let mut d = Divisor::zero();
        for v in graph.vertices() {
            let p = Point::Vertex(v);
            let o = self.order_at(graph, &p);
            d.add_point(p, o);
        }
        for (i, f) in self.edges.iter().enumerate() {
            for k in 1..f.slopes.len() {
                d.add_point(
                    Point::Interior {
                        edge: EdgeId(i),
                        offset: f.xs[k].clone(),
                    },
                    f.slopes[k - 1] - f.slopes[k],
                );
            }
        }
        d
    }

    pub fn add(&self, other: &PlFunction) -> PlFunction {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PlFunction) -> PlFunction {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> PlFunction {
        let edges = self
            .edges
            .iter()
            .map(|f| EdgeFunction {
                xs: f.xs.clone(),
                values: f.values.iter().map(|v| -v).collect(),
                slopes: f.slopes.iter().map(|s| -s).collect(),
            })
            .collect();
        PlFunction { edges }
    }

    pub fn shift(&self, c: &Q) -> PlFunction {
        let edges = self
            .edges
            .iter()
            .map(|f| EdgeFunction {
                xs: f.xs.clone(),
                values: f.values.iter().map(|v| v + c).collect(),
                slopes: f.slopes.clone(),
            })
            .collect();
        PlFunction { edges }
    }

    fn zip(&self, other: &PlFunction, op: impl Fn(&Q, &Q) -> Q + Copy) -> PlFunction {
        assert_eq!(self.edges.len(), other.edges.len(), "functions on different graphs");
        let edges = self
            .edges
            .iter()
            .zip(&other.edges)
            .map(|(a, b)| EdgeFunction::combine(a, b, op))
            .collect();
        PlFunction { edges }
    }

    /// Whether `self - other` is constant.
    pub fn differs_by_constant(&self, graph: &MetricGraph, other: &PlFunction) -> bool {
        let d = self.sub(other);
        let c = d.edges[0].values[0].clone();
        let _ = graph;
        d.edges
            .iter()
            .all(|f| f.slopes.iter().all(|&s| s == 0) && f.values[0] == c)
    }

    pub fn is_constant(&self) -> bool {
        self.edges.iter().all(|f| f.slopes.iter().all(|&s| s == 0))
    }

    /// Every breakpoint and vertex of the function, as points.
    pub fn breakpoint_points(&self, graph: &MetricGraph) -> Vec<Point> {
        let mut pts: Vec<Point> = graph.vertices().map(Point::Vertex).collect();
        for (i, f) in self.edges.iter().enumerate() {
            for x in &f.xs[1..f.xs.len() - 1] {
                pts.push(Point::Interior {
                    edge: EdgeId(i),
                    offset: x.clone(),
                });
            }
        }
        pts
    }
}

/// `θ(p) = min_j (f_j(p) + b_j)`, computed with exact crossing points.
pub fn min_combination(graph: &MetricGraph, fs: &[PlFunction], b: &[Q]) -> Result<PlFunction> {
    if fs.is_empty() {
        return Err(Error::Precondition("min_combination of an empty family".into()));
    }
    if fs.len() != b.len() {
        return Err(Error::Arity(format!("{} functions but {} offsets", fs.len(), b.len())));
    }
    let mut pieces = Vec::with_capacity(graph.edge_count());
    for e in graph.edge_ids() {
        let efs: Vec<&EdgeFunction> = fs.iter().map(|f| f.edge(e)).collect();
        let xs = merged(&efs);
        let mut pts: Vec<(Q, Q)> = Vec::new();
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
            for (x, j) in lower_envelope(&lines, x0, x1) {
                let v = lines[j].at(x0, &x);
                pts.push((x, v));
            }
        }
        let last = xs.last().expect("edge has endpoints");
        let v = efs
            .iter()
            .zip(b)
            .map(|(f, bj)| f.value(last) + bj)
            .min()
            .expect("nonempty");
        pts.push((last.clone(), v));
        pieces.push(pts);
    }
    Ok(PlFunction::from_edge_points(graph, pieces))
}

/// Whether `ψ ∈ R(D)`, i.e. `D + div(ψ)` is effective.
pub fn in_r(graph: &MetricGraph, d: &Divisor, psi: &PlFunction) -> bool {
    (d + &psi.divisor(graph)).is_effective()
}

/// The closed set where two functions agree, and its boundary.
#[derive(Debug, Clone)]
pub struct AgreementDomain {
    pub region: Region,
    pub boundary: Vec<Point>,
}

pub fn agreement_domain(graph: &MetricGraph, theta: &PlFunction, psi: &PlFunction) -> AgreementDomain {
    let h = psi.sub(theta);
    let mut region = Region::empty();
    for v in graph.vertices() {
        let p = Point::Vertex(v);
        if h.evaluate(graph, &p).is_ok_and(|x| x.is_zero()) {
            region.add_vertex(v);
        }
    }
    for (i, f) in h.edges.iter().enumerate() {
        let mut spans: Vec<(Q, Q)> = Vec::new();
        let mut push = |lo: Q, hi: Q| match spans.last_mut() {
            Some(last) if last.1 >= lo => {
                if hi > last.1 {
                    last.1 = hi
                }
            }
            _ => spans.push((lo, hi)),
        };
        for k in 0..f.slopes.len() {
            let (x0, x1) = (&f.xs[k], &f.xs[k + 1]);
            let (v0, v1) = (&f.values[k], &f.values[k + 1]);
            if v0.is_zero() && v1.is_zero() {
                push(x0.clone(), x1.clone());
            } else if v0.is_zero() {
                push(x0.clone(), x0.clone());
            } else if (v0.is_positive() && v1.is_negative()) || (v0.is_negative() && v1.is_positive()) {
                let t = x0 - v0 / qi(f.slopes[k]);
                push(t.clone(), t);
            }
            if k + 1 == f.slopes.len() && v1.is_zero() {
                push(x1.clone(), x1.clone());
            }
        }
        for (lo, hi) in spans {
            region.add_span(EdgeId(i), Span::closed(lo, hi));
        }
    }
    let boundary = region.boundary(graph);
    AgreementDomain { region, boundary }
}

fn shifted_family(fs: &[PlFunction], b: &[Q]) -> Vec<PlFunction> {
    fs.iter().zip(b).map(|(f, c)| f.shift(c)).collect()
}

fn require_in_r(graph: &MetricGraph, d: &Divisor, fs: &[PlFunction]) -> Result<()> {
    for (j, f) in fs.iter().enumerate() {
        if !in_r(graph, d, f) {
            return Err(Error::Precondition(format!("function {j} is not in R(D)")));
        }
    }
    Ok(())
}

/// Checks the local description of `D + div θ` on each agreement set
/// `Γ_j = {θ = f_j + b_j}`: a point of `Γ_j` is in `D + div θ` iff it is in
/// `D + div f_j` or on the boundary of `Γ_j`.
pub fn check_min_chips(graph: &MetricGraph, d: &Divisor, fs: &[PlFunction], b: &[Q]) -> Result<bool> {
    require_in_r(graph, d, fs)?;
    let shifted = shifted_family(fs, b);
    let zeros = vec![Q::zero(); fs.len()];
    let theta = min_combination(graph, &shifted, &zeros)?;
    let dt = d + &theta.divisor(graph);
    for f in &shifted {
        let dom = agreement_domain(graph, &theta, f);
        let df = d + &f.divisor(graph);
        let mut candidates: BTreeSet<Point> = dt.support().cloned().collect();
        candidates.extend(df.support().cloned());
        candidates.extend(dom.boundary.iter().cloned());
        for p in candidates.iter().filter(|p| dom.region.contains(p)) {
            let lhs = dt.coeff(p) > 0;
            let rhs = df.coeff(p) > 0 || dom.boundary.contains(p);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// If every `D + div f_j` meets the connected set `region`, so does `D + div θ`.
///
/// Returns `true` when the hypothesis fails (vacuous) or the conclusion holds.
pub fn check_obstruction(
    graph: &MetricGraph,
    d: &Divisor,
    fs: &[PlFunction],
    b: &[Q],
    region: &Region,
) -> Result<bool> {
    require_in_r(graph, d, fs)?;
    let hypothesis = fs.iter().all(|f| (d + &f.divisor(graph)).contains_point_in(region));
    if !hypothesis {
        return Ok(true);
    }
    let theta = min_combination(graph, fs, b)?;
    Ok((d + &theta.divisor(graph)).contains_point_in(region))
}
