//! Metric graphs, their points, divisors on them, and regions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_q, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Which end of an oriented edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Tail,
    Head,
}

/// A tangent direction at a vertex: leaving it into `edge` from `end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    pub edge: EdgeId,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub length: Q,
}

impl Edge {
    pub fn endpoint(&self, end: End) -> VertexId {
        match end {
            End::Tail => self.tail,
            End::Head => self.head,
        }
    }

    /// Offset of the given end: `0` for the tail, the length for the head.
    pub fn end_offset(&self, end: End) -> Q {
        match end {
            End::Tail => Q::zero(),
            End::Head => self.length.clone(),
        }
    }
}

/// A compact connected metric graph with rational edge lengths.
///
/// Edges carry an orientation used only for coordinates. Parallel edges and
/// self-loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    names: Vec<String>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<Direction>>,
}

impl MetricGraph {
    pub fn new(names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut incidence = vec![Vec::new(); names.len()];
        for (i, e) in edges.iter().enumerate() {
            if !e.length.is_positive() {
                return Err(Error::NonPositiveLength(format_q(&e.length)));
            }
            for end in [End::Tail, End::Head] {
                let v = e.endpoint(end);
                let slot = incidence
                    .get_mut(v.0)
                    .ok_or_else(|| Error::InvalidGraph(format!("edge {i} references missing vertex {}", v.0)))?;
                slot.push(Direction { edge: EdgeId(i), end });
            }
        }
        let g = MetricGraph {
            names,
            edges,
            incidence,
        };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Convenience constructor with vertices named by index.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize, Q)]) -> Result<Self> {
        let names = (0..vertex_count).map(|i| i.to_string()).collect();
        let edges = edges
            .iter()
            .map(|(t, h, l)| Edge {
                tail: VertexId(*t),
                head: VertexId(*h),
                length: l.clone(),
            })
            .collect();
        Self::new(names, edges)
    }

    /// A single loop of the given circumference on one vertex.
    pub fn circle(circumference: Q) -> Result<Self> {
        Self::from_edges(1, &[(0, 0, circumference)])
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.names.len()];
        let mut queue = VecDeque::from([VertexId(0)]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for d in &self.incidence[v.0] {
                let e = &self.edges[d.edge.0];
                for w in [e.tail, e.head] {
                    if !seen[w.0] {
                        seen[w.0] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).map(VertexId)
    }

    /// Tangent directions at `v`; a self-loop contributes two.
    pub fn directions(&self, v: VertexId) -> &[Direction] {
        &self.incidence[v.0]
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.incidence[v.0].len()
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.names.len()
    }

    /// The point at `offset` along `edge`, canonicalized to a vertex at either end.
    pub fn point(&self, edge: EdgeId, offset: Q) -> Result<Point> {
        let e = self
            .edges
            .get(edge.0)
            .ok_or_else(|| Error::PointOffGraph(format!("no edge {}", edge.0)))?;
        if offset.is_negative() || offset > e.length {
            return Err(Error::PointOffGraph(format!(
                "offset {} outside edge {} of length {}",
                format_q(&offset),
                edge.0,
                format_q(&e.length)
            )));
        }
        Ok(if offset.is_zero() {
            Point::Vertex(e.tail)
        } else if offset == e.length {
            Point::Vertex(e.head)
        } else {
            Point::Interior { edge, offset }
        })
    }

    pub fn midpoint(&self, edge: EdgeId) -> Point {
        let half = &self.edge(edge).length * q(1, 2);
        self.point(edge, half).expect("midpoint lies on its edge")
    }

    /// Checks that `p` names a location of this graph.
    pub fn validate_point(&self, p: &Point) -> Result<()> {
        match p {
            Point::Vertex(v) if v.0 < self.names.len() => Ok(()),
            Point::Interior { edge, offset } => {
                let e = self
                    .edges
                    .get(edge.0)
                    .ok_or_else(|| Error::PointOffGraph(format!("no edge {}", edge.0)))?;
                if offset.is_positive() && offset < &e.length {
                    Ok(())
                } else {
                    Err(Error::PointOffGraph(format!(
                        "interior offset {} not strictly inside edge {}",
                        format_q(offset),
                        edge.0
                    )))
                }
            }
            Point::Vertex(v) => Err(Error::PointOffGraph(format!("no vertex {}", v.0))),
        }
    }

    /// The `K = sum (valence - 2) v` divisor.
    pub fn canonical_divisor(&self) -> Divisor {
        let mut k = Divisor::zero();
        for v in self.vertices() {
            k.add_point(Point::Vertex(v), self.valence(v) as i64 - 2);
        }
        k
    }

    /// Vertices together with the midpoint of every edge.
    pub fn vertices_and_midpoints(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.vertices().map(Point::Vertex).collect();
        pts.extend(self.edge_ids().map(|e| self.midpoint(e)));
        pts
    }

    pub fn describe_point(&self, p: &Point) -> String {
        match p {
            Point::Vertex(v) => self.names[v.0].clone(),
            Point::Interior { edge, offset } => format!("e{}@{}", edge.0, format_q(offset)),
        }
    }
}

/// A point of a metric graph in canonical form.
///
/// Points at an edge end are always represented as the vertex, so equality
/// does not depend on which incident edge was used to name them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Vertex(VertexId),
    /// Strictly inside `edge`, at `offset` from its tail.
    Interior {
        edge: EdgeId,
        offset: Q,
    },
}

impl Point {
    pub fn as_vertex(&self) -> Option<VertexId> {
        match self {
            Point::Vertex(v) => Some(*v),
            Point::Interior { .. } => None,
        }
    }
}

/// A finite formal integer combination of points; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Divisor {
    terms: BTreeMap<Point, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(p: Point) -> Self {
        Self::from_terms([(p, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Point, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, c) in terms {
            d.add_point(p, c);
        }
        d
    }

    pub fn add_point(&mut self, p: Point, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(p);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, p: &Point) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, i64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.terms.keys()
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.iter().map(|(p, c)| (p.clone(), c * k)))
    }

    /// Part of the divisor lying on `region`.
    pub fn restrict(&self, region: &Region) -> Divisor {
        Divisor::from_terms(
            self.iter()
                .filter(|(p, _)| region.contains(p))
                .map(|(p, c)| (p.clone(), c)),
        )
    }

    /// Degree of the part lying on `region`.
    pub fn degree_on(&self, region: &Region) -> i64 {
        self.iter().filter(|(p, _)| region.contains(p)).map(|(_, c)| c).sum()
    }

    /// Whether some point of `region` carries a strictly positive coefficient.
    pub fn contains_point_in(&self, region: &Region) -> bool {
        self.iter().any(|(p, c)| c > 0 && region.contains(p))
    }

    pub fn validate_on(&self, graph: &MetricGraph) -> Result<()> {
        self.support().try_for_each(|p| graph.validate_point(p))
    }

    pub fn display<'a>(&'a self, graph: &'a MetricGraph) -> impl fmt::Display + 'a {
        DivisorDisplay { d: self, graph }
    }
}

struct DivisorDisplay<'a> {
    d: &'a Divisor,
    graph: &'a MetricGraph,
}

impl fmt::Display for DivisorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.d.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·{}", c, self.graph.describe_point(p))?;
        }
        Ok(())
    }
}

impl Add<&Divisor> for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in rhs.iter() {
            out.add_point(p.clone(), c);
        }
        out
    }
}

impl Sub<&Divisor> for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in rhs.iter() {
            out.add_point(p.clone(), -c);
        }
        out
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        self.scale(-1)
    }
}

impl Add for Divisor {
    type Output = Divisor;
    fn add(self, rhs: Divisor) -> Divisor {
        &self + &rhs
    }
}

impl Sub for Divisor {
    type Output = Divisor;
    fn sub(self, rhs: Divisor) -> Divisor {
        &self - &rhs
    }
}

/// A sub-interval of the open interior of an edge, with explicit endpoint inclusion.
///
/// A degenerate span (`lo == hi`, both closed) is a single point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Span {
    pub fn closed(lo: Q, hi: Q) -> Self {
        Span {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: Q, hi: Q) -> Self {
        Span {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }

    /// Whether the span contains `(x - t, x)` for some `t > 0`.
    fn covers_left_of(&self, x: &Q) -> bool {
        &self.lo < x && x <= &self.hi
    }

    /// Whether the span contains `(x, x + t)` for some `t > 0`.
    fn covers_right_of(&self, x: &Q) -> bool {
        &self.lo <= x && x < &self.hi
    }
}

/// A subset of a metric graph: a set of vertices plus spans of edge interiors.
///
/// Membership of a vertex is decided only by the vertex set; spans describe
/// interior points of edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Region {
    vertices: BTreeSet<VertexId>,
    spans: BTreeMap<EdgeId, Vec<Span>>,
}

impl Region {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The whole graph.
    pub fn all(graph: &MetricGraph) -> Self {
        let mut r = Region::empty();
        for v in graph.vertices() {
            r.add_vertex(v);
        }
        for e in graph.edge_ids() {
            r.add_span(e, Span::closed(Q::zero(), graph.edge(e).length.clone()));
        }
        r
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub fn add_span(&mut self, e: EdgeId, span: Span) {
        self.spans.entry(e).or_default().push(span);
    }

    /// Adds `p` as an isolated point.
    pub fn add_point(&mut self, p: &Point) {
        match p {
            Point::Vertex(v) => self.add_vertex(*v),
            Point::Interior { edge, offset } => self.add_span(*edge, Span::closed(offset.clone(), offset.clone())),
        }
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut out = self.clone();
        out.vertices.extend(other.vertices.iter().copied());
        for (e, ss) in &other.spans {
            out.spans.entry(*e).or_default().extend(ss.iter().cloned());
        }
        out
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn spans(&self, e: EdgeId) -> &[Span] {
        self.spans.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.spans.values().all(Vec::is_empty)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.vertices.contains(v),
            Point::Interior { edge, offset } => self.spans(*edge).iter().any(|s| s.contains(offset)),
        }
    }

    /// Whether the region contains an initial open segment of `dir`.
    pub fn covers_direction(&self, graph: &MetricGraph, dir: Direction) -> bool {
        let at = graph.edge(dir.edge).end_offset(dir.end);
        self.spans(dir.edge).iter().any(|s| match dir.end {
            End::Tail => s.covers_right_of(&at),
            End::Head => s.covers_left_of(&at),
        })
    }

    /// Points of the region with some direction leaving it immediately.
    ///
    /// For a closed region this is its topological boundary.
    pub fn boundary(&self, graph: &MetricGraph) -> Vec<Point> {
        let mut out = Vec::new();
        for &v in &self.vertices {
            if graph.directions(v).iter().any(|&d| !self.covers_direction(graph, d)) {
                out.push(Point::Vertex(v));
            }
        }
        for (&e, spans) in &self.spans {
            let len = &graph.edge(e).length;
            let mut candidates: BTreeSet<Q> = BTreeSet::new();
            for s in spans {
                for (x, closed) in [(&s.lo, s.lo_closed), (&s.hi, s.hi_closed)] {
                    if closed && x.is_positive() && x < len {
                        candidates.insert(x.clone());
                    }
                }
            }
            for x in candidates {
                if !spans.iter().any(|s| s.contains(&x)) {
                    continue;
                }
                let left = spans.iter().any(|s| s.covers_left_of(&x));
                let right = spans.iter().any(|s| s.covers_right_of(&x));
                if !(left && right) {
                    out.push(Point::Interior { edge: e, offset: x });
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn describe(&self, graph: &MetricGraph) -> String {
        let mut parts: Vec<String> = self.vertices.iter().map(|v| graph.name(*v).to_string()).collect();
        for (e, ss) in &self.spans {
            for s in ss {
                parts.push(format!(
                    "e{}{}{},{}{}",
                    e.0,
                    if s.lo_closed { "[" } else { "(" },
                    format_q(&s.lo),
                    format_q(&s.hi),
                    if s.hi_closed { "]" } else { ")" }
                ));
            }
        }
        format!("{{{}}}", parts.join(", "))
    }
}
