//! JSON file formats. Rationals are strings `"p"` or `"p/q"`; output goes
//! through `serde_json::Value`, whose maps keep keys sorted.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::brill_noether::{ExperimentReport, ShapeProfile};
use crate::chain::ChainOfLoops;
use crate::error::{Error, Result};
use crate::graph::{Divisor, Edge, EdgeId, MetricGraph, Point, VertexId};
use crate::independence::Dependence;
use crate::plfunc::PlFunction;
use crate::rational::{format_q, parse_q, serde_q, serde_q_vec, Q};
use crate::reduce::ReductionResult;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointJson {
    pub edge: usize,
    #[serde(with = "serde_q")]
    pub offset: Q,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub point: PointJson,
    pub coeff: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub tail: usize,
    pub head: usize,
    #[serde(with = "serde_q")]
    pub length: Q,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainJson {
    pub genus: usize,
    #[serde(with = "serde_q_vec")]
    pub top: Vec<Q>,
    #[serde(with = "serde_q_vec")]
    pub bottom: Vec<Q>,
    #[serde(with = "serde_q_vec")]
    pub bridges: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pendants: Option<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BreakpointJson {
    #[serde(with = "serde_q")]
    pub offset: Q,
    #[serde(with = "serde_q")]
    pub value: Q,
}

/// A vertex is written as the end of its first incident edge.
pub fn point_to_json(graph: &MetricGraph, p: &Point) -> PointJson {
    match p {
        Point::Vertex(v) => {
            let dir = graph.directions(*v)[0];
            PointJson {
                edge: dir.edge.0,
                offset: graph.edge(dir.edge).end_offset(dir.end),
            }
        }
        Point::Interior { edge, offset } => PointJson {
            edge: edge.0,
            offset: offset.clone(),
        },
    }
}

pub fn point_from_json(graph: &MetricGraph, p: &PointJson) -> Result<Point> {
    if p.edge >= graph.edge_count() {
        return Err(Error::PointOffGraph(format!("edge {} does not exist", p.edge)));
    }
    graph.point(EdgeId(p.edge), p.offset.clone())
}

pub fn divisor_to_json(graph: &MetricGraph, d: &Divisor) -> Vec<TermJson> {
    d.iter()
        .map(|(p, c)| TermJson {
            point: point_to_json(graph, p),
            coeff: c,
        })
        .collect()
}

pub fn divisor_from_json(graph: &MetricGraph, terms: &[TermJson]) -> Result<Divisor> {
    let mut d = Divisor::zero();
    for t in terms {
        d.add_point(point_from_json(graph, &t.point)?, t.coeff);
    }
    Ok(d)
}

pub fn graph_to_json(graph: &MetricGraph) -> GraphJson {
    GraphJson {
        vertices: graph.names().to_vec(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeJson {
                tail: e.tail.0,
                head: e.head.0,
                length: e.length.clone(),
            })
            .collect(),
    }
}

pub fn graph_from_json(g: &GraphJson) -> Result<MetricGraph> {
    let n = g.vertices.len();
    let edges = g
        .edges
        .iter()
        .map(|e| {
            if e.tail >= n || e.head >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {}–{} names a missing vertex",
                    e.tail, e.head
                )));
            }
            Ok(Edge {
                tail: VertexId(e.tail),
                head: VertexId(e.head),
                length: e.length.clone(),
            })
        })
        .collect::<Result<_>>()?;
    MetricGraph::new(g.vertices.clone(), edges)
}

pub fn chain_to_json(c: &ChainOfLoops) -> ChainJson {
    ChainJson {
        genus: c.genus(),
        top: c.top_lengths().to_vec(),
        bottom: c.bottom_lengths().to_vec(),
        bridges: c.bridge_lengths().to_vec(),
        pendants: c.pendant_lengths().map(|(a, b)| [format_q(a), format_q(b)]),
    }
}

pub fn chain_from_json(c: &ChainJson) -> Result<ChainOfLoops> {
    let base = ChainOfLoops::new(c.genus, c.top.clone(), c.bottom.clone(), c.bridges.clone())?;
    match &c.pendants {
        None => Ok(base),
        Some([a, b]) => base.extended((parse_q(a)?, parse_q(b)?)),
    }
}

pub fn pl_to_json(f: &PlFunction) -> Vec<Vec<BreakpointJson>> {
    f.edge_functions()
        .iter()
        .map(|ef| {
            ef.breakpoints()
                .map(|(x, v)| BreakpointJson {
                    offset: x.clone(),
                    value: v.clone(),
                })
                .collect()
        })
        .collect()
}

pub fn pl_from_json(graph: &MetricGraph, pieces: &[Vec<BreakpointJson>]) -> Result<PlFunction> {
    let pieces = pieces
        .iter()
        .map(|e| e.iter().map(|b| (b.offset.clone(), b.value.clone())).collect())
        .collect();
    PlFunction::new(graph, pieces)
}

/// A graph description file: either a chain of loops or a general graph.
#[allow(clippy::large_enum_variant)]
pub enum GraphFile {
    Chain(ChainOfLoops),
    Graph(MetricGraph),
}

impl GraphFile {
    pub fn graph(&self) -> &MetricGraph {
        match self {
            GraphFile::Chain(c) => c.graph(),
            GraphFile::Graph(g) => g,
        }
    }

    pub fn chain(&self) -> Option<&ChainOfLoops> {
        match self {
            GraphFile::Chain(c) => Some(c),
            GraphFile::Graph(_) => None,
        }
    }
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("genus").is_some() {
        Ok(GraphFile::Chain(chain_from_json(&serde_json::from_value(v)?)?))
    } else {
        Ok(GraphFile::Graph(graph_from_json(&serde_json::from_value(v)?)?))
    }
}

pub fn parse_divisor_file(graph: &MetricGraph, text: &str) -> Result<Divisor> {
    let terms: Vec<TermJson> = serde_json::from_str(text)?;
    divisor_from_json(graph, &terms)
}

fn to_value<T: Serialize>(x: T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

pub fn divisor_value(graph: &MetricGraph, d: &Divisor) -> Value {
    to_value(divisor_to_json(graph, d))
}

pub fn pl_value(f: &PlFunction) -> Value {
    to_value(pl_to_json(f))
}

pub fn chain_value(c: &ChainOfLoops) -> Value {
    to_value(chain_to_json(c))
}

pub fn graph_value(g: &MetricGraph) -> Value {
    to_value(graph_to_json(g))
}

pub fn reduction_value(graph: &MetricGraph, input: &Divisor, base: &Point, r: &ReductionResult) -> Value {
    json!({
        "input": divisor_value(graph, input),
        "base": to_value(point_to_json(graph, base)),
        "reduced": divisor_value(graph, &r.reduced),
        "witness": pl_value(&r.witness),
        "events": r.events,
    })
}

pub fn dependence_value(graph: &MetricGraph, d: &Dependence) -> Value {
    match d {
        Dependence::Dependent(c) => json!({
            "offsets": c.offsets.iter().map(|o| o.as_ref().map_or("inf".to_string(), format_q)).collect::<Vec<_>>(),
            "witness": Value::Null,
        }),
        Dependence::Independent(rep) => json!({
            "witnesses": rep.witnesses.iter().map(|p| to_value(point_to_json(graph, p))).collect::<Vec<_>>(),
            "bound": format_q(&rep.bound),
        }),
    }
}

pub fn shape_value(p: &ShapeProfile) -> Value {
    to_value(p)
}

pub fn experiment_value(rep: &ExperimentReport) -> Value {
    let mut table = Vec::new();
    for (j, row) in rep.empty_cells.iter().enumerate() {
        for (k, empty) in row.iter().enumerate() {
            table.push(json!({ "j": j, "k": k, "empty": empty }));
        }
    }
    json!({
        "g": rep.params.g,
        "r": rep.params.r,
        "d": rep.params.d,
        "tableau": rep.tableau.rows(),
        "verdict": rep.verdict.as_str(),
        "empty_cells": table,
        "partition_holds": rep.partition_holds,
        "cross_checked": rep.cross_checked,
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value renders");
    s.push('\n');
    s
}
