//! The chain of `g` loops joined by bridges, and Brill-Noether numerics.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Divisor, Edge, EdgeId, End, MetricGraph, Point, Region, Span, VertexId};
use crate::rational::{format_q, q, qi, rem_euclid, Q};

/// `(g, r, d)` together with `rho = g - (r + 1)(g - d + r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BnParams {
    pub g: i64,
    pub r: i64,
    pub d: i64,
}

impl BnParams {
    pub fn new(g: i64, r: i64, d: i64) -> Self {
        BnParams { g, r, d }
    }

    pub fn rho(&self) -> i64 {
        self.g - (self.r + 1) * (self.g - self.d + self.r)
    }

    /// Tableau shape `(rows, cols) = (g - d + r, r + 1)`.
    pub fn shape(&self) -> (i64, i64) {
        (self.g - self.d + self.r, self.r + 1)
    }
}

/// Lengths of loop `i`: `top` joins `v_i -> w_i` with length `l_i`, `bottom` with `m_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopEdges {
    pub top: EdgeId,
    pub bottom: EdgeId,
}

/// A named cell of the chain's decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    /// Loop `i` minus `w_i` (1-based).
    Loop(usize),
    /// `[w_i, v_{i+1})` (1-based).
    Bridge(usize),
    /// The single point `w_g`.
    EndPoint,
}

/// The chain of loops of genus `g`, optionally with the pendant edges `[w_0, v_1]`
/// and `[w_g, v_{g+1}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainOfLoops {
    genus: usize,
    top_lengths: Vec<Q>,
    bottom_lengths: Vec<Q>,
    bridge_lengths: Vec<Q>,
    pendant_lengths: Option<(Q, Q)>,
    graph: MetricGraph,
    loops: Vec<LoopEdges>,
    bridges: Vec<EdgeId>,
    pendants: Option<(EdgeId, EdgeId)>,
}

impl ChainOfLoops {
    /// Builds the chain from top lengths `l`, bottom lengths `m` and bridge lengths.
    pub fn new(genus: usize, top: Vec<Q>, bottom: Vec<Q>, bridges: Vec<Q>) -> Result<Self> {
        Self::build(genus, top, bottom, bridges, None)
    }

    /// The chain with pendant edges `[w_0, v_1]` and `[w_g, v_{g+1}]` attached.
    pub fn with_pendants(genus: usize, top: Vec<Q>, bottom: Vec<Q>, bridges: Vec<Q>, pendants: (Q, Q)) -> Result<Self> {
        Self::build(genus, top, bottom, bridges, Some(pendants))
    }

    /// Same loops and bridges, with pendants added.
    pub fn extended(&self, pendants: (Q, Q)) -> Result<Self> {
        Self::build(
            self.genus,
            self.top_lengths.clone(),
            self.bottom_lengths.clone(),
            self.bridge_lengths.clone(),
            Some(pendants),
        )
    }

    /// Equal lengths everywhere.
    pub fn uniform(genus: usize, length: Q) -> Result<Self> {
        Self::new(
            genus,
            vec![length.clone(); genus],
            vec![length.clone(); genus],
            vec![length; genus.saturating_sub(1)],
        )
    }

    /// `m_i = 1`, `l_i = 2g - 1 + i/(g + 1)`, bridges of length 1.
    pub fn default_generic(genus: usize) -> Result<Self> {
        let g = genus as i64;
        let top = (1..=g).map(|i| qi(2 * g - 1) + q(i, g + 1)).collect();
        Self::new(genus, top, vec![qi(1); genus], vec![qi(1); genus.saturating_sub(1)])
    }

    fn build(genus: usize, top: Vec<Q>, bottom: Vec<Q>, bridges: Vec<Q>, pendants: Option<(Q, Q)>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::Precondition(format!(
                "chain genus must be at least 2, got {genus}"
            )));
        }
        if top.len() != genus || bottom.len() != genus {
            return Err(Error::Arity(format!(
                "expected {genus} top and bottom lengths, got {} and {}",
                top.len(),
                bottom.len()
            )));
        }
        if bridges.len() != genus - 1 {
            return Err(Error::Arity(format!(
                "expected {} bridge lengths, got {}",
                genus - 1,
                bridges.len()
            )));
        }
        let all = top.iter().chain(&bottom).chain(&bridges);
        let all: Vec<&Q> = match &pendants {
            Some((a, b)) => all.chain([a, b]).collect(),
            None => all.collect(),
        };
        if let Some(bad) = all.iter().find(|x| !x.is_positive()) {
            return Err(Error::NonPositiveLength(format_q(bad)));
        }

        let mut names = Vec::new();
        for i in 1..=genus {
            names.push(format!("v{i}"));
            names.push(format!("w{i}"));
        }
        let v = |i: usize| VertexId(2 * (i - 1));
        let w = |i: usize| VertexId(2 * (i - 1) + 1);
        let mut edges = Vec::new();
        let mut loops = Vec::new();
        let mut bridge_ids = Vec::new();
        for i in 1..=genus {
            loops.push(LoopEdges {
                top: EdgeId(edges.len()),
                bottom: EdgeId(edges.len() + 1),
            });
            edges.push(Edge {
                tail: v(i),
                head: w(i),
                length: top[i - 1].clone(),
            });
            edges.push(Edge {
                tail: v(i),
                head: w(i),
                length: bottom[i - 1].clone(),
            });
            if i < genus {
                bridge_ids.push(EdgeId(edges.len()));
                edges.push(Edge {
                    tail: w(i),
                    head: v(i + 1),
                    length: bridges[i - 1].clone(),
                });
            }
        }
        let pendant_ids = pendants.as_ref().map(|(left, right)| {
            let w0 = VertexId(names.len());
            names.push("w0".into());
            let vg1 = VertexId(names.len());
            names.push(format!("v{}", genus + 1));
            let a = EdgeId(edges.len());
            edges.push(Edge {
                tail: w0,
                head: v(1),
                length: left.clone(),
            });
            let b = EdgeId(edges.len());
            edges.push(Edge {
                tail: w(genus),
                head: vg1,
                length: right.clone(),
            });
            (a, b)
        });
        let graph = MetricGraph::new(names, edges)?;
        Ok(ChainOfLoops {
            genus,
            top_lengths: top,
            bottom_lengths: bottom,
            bridge_lengths: bridges,
            pendant_lengths: pendants,
            graph,
            loops,
            bridges: bridge_ids,
            pendants: pendant_ids,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn top_lengths(&self) -> &[Q] {
        &self.top_lengths
    }

    pub fn bottom_lengths(&self) -> &[Q] {
        &self.bottom_lengths
    }

    pub fn bridge_lengths(&self) -> &[Q] {
        &self.bridge_lengths
    }

    pub fn pendant_lengths(&self) -> Option<&(Q, Q)> {
        self.pendant_lengths.as_ref()
    }

    /// `v_i`, 1-based. With pendants, `v_{g+1}` is also available.
    pub fn v(&self, i: usize) -> VertexId {
        if i == self.genus + 1 && self.pendants.is_some() {
            return VertexId(2 * self.genus + 1);
        }
        assert!((1..=self.genus).contains(&i), "v_{i} out of range");
        VertexId(2 * (i - 1))
    }

    /// `w_i`, 1-based. With pendants, `w_0` is also available.
    pub fn w(&self, i: usize) -> VertexId {
        if i == 0 && self.pendants.is_some() {
            return VertexId(2 * self.genus);
        }
        assert!((1..=self.genus).contains(&i), "w_{i} out of range");
        VertexId(2 * (i - 1) + 1)
    }

    pub fn vp(&self, i: usize) -> Point {
        Point::Vertex(self.v(i))
    }

    pub fn wp(&self, i: usize) -> Point {
        Point::Vertex(self.w(i))
    }

    pub fn loop_edges(&self, i: usize) -> &LoopEdges {
        &self.loops[i - 1]
    }

    /// Bridge `i` from `w_i` to `v_{i+1}`, `1 <= i < g`.
    pub fn bridge(&self, i: usize) -> EdgeId {
        self.bridges[i - 1]
    }

    /// The edge `e_i = [w_{i-1}, v_i]` arriving at `v_i` from the left, `1 <= i <= g + 1`.
    ///
    /// `e_1` and `e_{g+1}` exist only on the extended chain.
    pub fn left_edge(&self, i: usize) -> Option<EdgeId> {
        match (i, self.pendants) {
            (1, Some((a, _))) => Some(a),
            (1, None) => None,
            (i, Some((_, b))) if i == self.genus + 1 => Some(b),
            (i, _) if (2..=self.genus).contains(&i) => Some(self.bridge(i - 1)),
            _ => None,
        }
    }

    /// Circumference `l_i + m_i` of loop `i`.
    pub fn loop_length(&self, i: usize) -> Q {
        &self.top_lengths[i - 1] + &self.bottom_lengths[i - 1]
    }

    /// The point of loop `i` at distance `t` from `w_i` going counterclockwise,
    /// i.e. along the top edge first; `t` is taken modulo the circumference.
    pub fn loop_point_ccw(&self, i: usize, t: &Q) -> Point {
        let t = rem_euclid(t, &self.loop_length(i));
        let l = &self.top_lengths[i - 1];
        let edges = self.loop_edges(i);
        if &t <= l {
            self.graph.point(edges.top, l - &t).expect("on top edge")
        } else {
            self.graph.point(edges.bottom, &t - l).expect("on bottom edge")
        }
    }

    /// Counterclockwise distance from `w_i` of a point on loop `i`.
    pub fn ccw_coordinate(&self, i: usize, p: &Point) -> Option<Q> {
        let edges = self.loop_edges(i);
        let l = &self.top_lengths[i - 1];
        match p {
            Point::Vertex(x) if *x == self.w(i) => Some(Q::zero()),
            Point::Vertex(x) if *x == self.v(i) => Some(l.clone()),
            Point::Interior { edge, offset } if *edge == edges.top => Some(l - offset),
            Point::Interior { edge, offset } if *edge == edges.bottom => Some(l + offset),
            _ => None,
        }
    }

    /// True iff no `l_i / m_i` equals `a / b` with positive integers `a + b <= 2g - 2`.
    pub fn is_generic(&self) -> bool {
        self.genericity_violation().is_none()
    }

    /// The first loop violating genericity, with the offending `(a, b)`.
    pub fn genericity_violation(&self) -> Option<(usize, i64, i64)> {
        let bound = 2 * self.genus as i64 - 2;
        for i in 1..=self.genus {
            let ratio = &self.top_lengths[i - 1] / &self.bottom_lengths[i - 1];
            let (a, b) = (ratio.numer(), ratio.denom());
            // a/b in lowest terms; every other representation is a multiple.
            if a + b <= BigInt::from(bound) {
                let a: i64 = a.try_into().expect("small");
                let b: i64 = b.try_into().expect("small");
                return Some((i, a, b));
            }
        }
        None
    }

    pub fn require_generic(&self) -> Result<()> {
        match self.genericity_violation() {
            None => Ok(()),
            Some((i, a, b)) => Err(Error::NotGeneric(format!(
                "loop {i} has l/m = {a}/{b} with {a} + {b} <= {}",
                2 * self.genus - 2
            ))),
        }
    }

    /// The cell `γ_i`, `br_i` or `{w_g}` as a region.
    pub fn cell(&self, cell: Cell) -> Region {
        let mut r = Region::empty();
        match cell {
            Cell::Loop(i) => {
                r.add_vertex(self.v(i));
                let e = self.loop_edges(i);
                for id in [e.top, e.bottom] {
                    let len = self.graph.edge(id).length.clone();
                    r.add_span(
                        id,
                        Span {
                            lo: Q::zero(),
                            hi: len,
                            lo_closed: true,
                            hi_closed: false,
                        },
                    );
                }
            }
            Cell::Bridge(i) => {
                r.add_vertex(self.w(i));
                let id = self.bridge(i);
                let len = self.graph.edge(id).length.clone();
                r.add_span(
                    id,
                    Span {
                        lo: Q::zero(),
                        hi: len,
                        lo_closed: true,
                        hi_closed: false,
                    },
                );
            }
            Cell::EndPoint => r.add_vertex(self.w(self.genus)),
        }
        r
    }

    /// `γ_1, br_1, ..., γ_g, {w_g}` in order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for i in 1..=self.genus {
            out.push(Cell::Loop(i));
            if i < self.genus {
                out.push(Cell::Bridge(i));
            }
        }
        out.push(Cell::EndPoint);
        out
    }

    /// The cell of the decomposition containing `p`, if `p` is on the chain proper.
    pub fn cell_of(&self, p: &Point) -> Option<Cell> {
        match p {
            Point::Vertex(x) => {
                let i = x.0 / 2 + 1;
                if x.0 >= 2 * self.genus {
                    None
                } else if x.0 % 2 == 0 {
                    Some(Cell::Loop(i))
                } else if i == self.genus {
                    Some(Cell::EndPoint)
                } else {
                    Some(Cell::Bridge(i))
                }
            }
            Point::Interior { edge, .. } => {
                if let Some(i) = self.loops.iter().position(|l| l.top == *edge || l.bottom == *edge) {
                    Some(Cell::Loop(i + 1))
                } else {
                    self.bridges.iter().position(|b| b == edge).map(|i| Cell::Bridge(i + 1))
                }
            }
        }
    }

    /// Loop `i` including `w_i`.
    pub fn closed_loop(&self, i: usize) -> Region {
        let mut r = self.cell(Cell::Loop(i));
        r.add_vertex(self.w(i));
        r
    }

    /// Every vertex and the midpoint of every loop edge.
    pub fn rank_determining_set(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.graph.vertices().map(Point::Vertex).collect();
        for l in &self.loops {
            pts.push(self.graph.midpoint(l.top));
            pts.push(self.graph.midpoint(l.bottom));
        }
        pts
    }

    /// The canonical divisor of the underlying graph.
    pub fn canonical_divisor(&self) -> Divisor {
        self.graph.canonical_divisor()
    }

    /// Direction at `v_i` into the edge `e_i`.
    pub fn left_direction(&self, i: usize) -> Option<crate::graph::Direction> {
        self.left_edge(i)
            .map(|edge| crate::graph::Direction { edge, end: End::Head })
    }
}
