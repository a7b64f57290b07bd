//! Command-line front end. Exit codes: 0 verified, 1 falsified, 2 usage or
//! input error, 3 internal cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::brill_noether::{enumerate_tableaux, gp_rho_zero_experiment, shape_profile, Verdict};
use crate::chain::{BnParams, ChainOfLoops};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point, VertexId};
use crate::json::{self, GraphFile};
use crate::random::Sampler;
use crate::rational::parse_q;
use crate::reduce::{riemann_roch_sides, v_reduce};

#[derive(Debug, Parser)]
#[command(
    name = "tropdiv",
    about = "Exact divisor computations on metric graphs and chains of loops"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a chain of loops (default generic lengths unless --lengths is given).
    ChainNew {
        #[arg(long)]
        g: usize,
        /// Chain JSON file supplying the edge lengths.
        #[arg(long)]
        lengths: Option<PathBuf>,
        #[arg(long)]
        require_generic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a divisor at a base point: `v:<index>`, a vertex name, or `e:<edge>:<offset>`.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        base: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check Riemann-Roch on random divisors of degree in [-2, 2g].
    RrCheck {
        /// Graph or chain JSON file; defaults to the generic chain of genus --g.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the ρ = 0 independence experiment.
    Gp0 {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        d: i64,
        /// Chain JSON file supplying the edge lengths.
        #[arg(long)]
        lengths: Option<PathBuf>,
        /// A tableau index or `all`.
        #[arg(long, default_value = "all")]
        tableau: String,
        #[arg(long)]
        require_generic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report which cells of a chain a divisor meets.
    Shape {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A command's JSON result and whether it verified.
#[derive(Debug)]
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Falsified(_) => 1,
        Error::IterationCap { .. } | Error::SearchCap { .. } => 3,
        _ => 2,
    }
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_chain(path: &PathBuf) -> Result<ChainOfLoops> {
    match json::parse_graph_file(&read(path)?)? {
        GraphFile::Chain(c) => Ok(c),
        GraphFile::Graph(_) => Err(Error::Precondition(format!("{} is not a chain file", path.display()))),
    }
}

/// `v:<index>`, `e:<edge>:<offset>`, or a vertex name.
pub fn parse_base(graph: &MetricGraph, s: &str) -> Result<Point> {
    if let Some(i) = s.strip_prefix("v:") {
        let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad vertex index {i:?}")))?;
        if i >= graph.vertex_count() {
            return Err(Error::PointOffGraph(format!("vertex {i} does not exist")));
        }
        return Ok(Point::Vertex(VertexId(i)));
    }
    if let Some(rest) = s.strip_prefix("e:") {
        let (e, x) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad edge point {s:?}")))?;
        let e: usize = e.parse().map_err(|_| Error::Parse(format!("bad edge index {e:?}")))?;
        return json::point_from_json(
            graph,
            &json::PointJson {
                edge: e,
                offset: parse_q(x)?,
            },
        );
    }
    graph
        .vertex_by_name(s)
        .map(Point::Vertex)
        .ok_or_else(|| Error::PointOffGraph(format!("no vertex named {s:?}")))
}

pub fn cmd_chain_new(g: usize, lengths: Option<&PathBuf>, require_generic: bool) -> Result<Outcome> {
    let chain = match lengths {
        Some(p) => load_chain(p)?,
        None => ChainOfLoops::default_generic(g)?,
    };
    if chain.genus() != g {
        return Err(Error::Arity(format!(
            "lengths file has genus {}, expected {g}",
            chain.genus()
        )));
    }
    if require_generic {
        chain.require_generic()?;
    }
    Ok(Outcome::ok(json::chain_value(&chain)))
}

pub fn cmd_reduce(graph: &PathBuf, divisor: &PathBuf, base: &str) -> Result<Outcome> {
    let gf = json::parse_graph_file(&read(graph)?)?;
    let g = gf.graph();
    let d = json::parse_divisor_file(g, &read(divisor)?)?;
    let base = parse_base(g, base)?;
    let r = v_reduce(g, &d, &base)?;
    Ok(Outcome::ok(json::reduction_value(g, &d, &base, &r)))
}

pub fn cmd_rr_check(
    graph: &MetricGraph,
    trials: usize,
    seed: u64,
    test_points: &[Point],
    warn: &mut dyn Write,
) -> Result<Outcome> {
    if trials == 0 {
        let _ = writeln!(warn, "warning: zero trials requested; nothing was checked");
    }
    let genus = graph.genus() as i64;
    let mut sampler = Sampler::new(seed);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let deg = sampler.range(-2, 2 * genus);
        let d = sampler.divisor(graph, deg, 2, 4);
        let rr = riemann_roch_sides(graph, &d, test_points)?;
        if !rr.holds() {
            failures.push(json!({
                "divisor": json::divisor_value(graph, &d),
                "rank": rr.rank,
                "adjoint_rank": rr.adjoint_rank,
                "degree": rr.degree,
            }));
        }
    }
    let ok = failures.is_empty();
    Ok(Outcome {
        value: json!({ "genus": genus, "seed": seed, "trials": trials, "passed": trials - failures.len(), "failures": failures }),
        ok,
    })
}

pub fn cmd_gp0(params: BnParams, chain: &ChainOfLoops, tableau: &str, timings: &mut dyn Write) -> Result<Outcome> {
    if params.rho() != 0 {
        return Err(Error::Precondition(format!(
            "ρ({}, {}, {}) = {} is not zero",
            params.g,
            params.r,
            params.d,
            params.rho()
        )));
    }
    chain.require_generic()?;
    let (rows, cols) = params.shape();
    let all = enumerate_tableaux(rows as usize, cols as usize);
    let selected: Vec<(usize, _)> = if tableau == "all" {
        all.into_iter().enumerate().collect()
    } else {
        let i: usize = tableau
            .parse()
            .map_err(|_| Error::Parse(format!("bad tableau selector {tableau:?}")))?;
        let t = all
            .get(i)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("only {} tableaux", all.len())))?;
        vec![(i, t)]
    };
    let runs: Vec<_> = selected
        .par_iter()
        .map(|(i, t)| {
            let start = Instant::now();
            gp_rho_zero_experiment(params, t, chain).map(|rep| (*i, rep, start.elapsed()))
        })
        .collect::<Result<_>>()?;
    let mut ok = true;
    let mut reports = Vec::new();
    for (i, rep, took) in runs {
        let _ = writeln!(timings, "tableau {i}: {} in {took:.2?}", rep.verdict.as_str());
        ok &= rep.verdict != Verdict::Dependent && rep.partition_holds && rep.cross_checked;
        let mut v = json::experiment_value(&rep);
        v["index"] = json!(i);
        reports.push(v);
    }
    Ok(Outcome {
        value: Value::Array(reports),
        ok,
    })
}

pub fn cmd_shape(graph: &PathBuf, divisor: &PathBuf) -> Result<Outcome> {
    let chain = load_chain(graph)?;
    let d = json::parse_divisor_file(chain.graph(), &read(divisor)?)?;
    Ok(Outcome::ok(json::shape_value(&shape_profile(&d, &chain)?)))
}

fn dispatch(cmd: &Command, stderr: &mut dyn Write) -> Result<(Outcome, Option<PathBuf>)> {
    Ok(match cmd {
        Command::ChainNew {
            g,
            lengths,
            require_generic,
            out,
        } => (cmd_chain_new(*g, lengths.as_ref(), *require_generic)?, out.clone()),
        Command::Reduce {
            graph,
            divisor,
            base,
            out,
        } => (cmd_reduce(graph, divisor, base)?, out.clone()),
        Command::RrCheck {
            graph,
            g,
            trials,
            seed,
            out,
        } => {
            let gf = match (graph, g) {
                (Some(p), _) => json::parse_graph_file(&read(p)?)?,
                (None, Some(g)) => GraphFile::Chain(ChainOfLoops::default_generic(*g)?),
                (None, None) => return Err(Error::Parse("rr-check needs --graph or --g".into())),
            };
            let pts = match &gf {
                GraphFile::Chain(c) => c.rank_determining_set(),
                GraphFile::Graph(g) => g.vertices_and_midpoints(),
            };
            (cmd_rr_check(gf.graph(), *trials, *seed, &pts, stderr)?, out.clone())
        }
        Command::Gp0 {
            g,
            r,
            d,
            lengths,
            tableau,
            require_generic,
            out,
        } => {
            let params = BnParams::new(*g, *r, *d);
            let chain = match lengths {
                Some(p) => load_chain(p)?,
                None => ChainOfLoops::default_generic((*g).max(0) as usize)?,
            };
            if *require_generic {
                chain.require_generic()?;
            }
            (cmd_gp0(params, &chain, tableau, stderr)?, out.clone())
        }
        Command::Shape { graph, divisor, out } => (cmd_shape(graph, divisor)?, out.clone()),
    })
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.command, stderr) {
        Ok((outcome, out)) => {
            let text = json::render(&outcome.value);
            let written = match out {
                Some(p) => std::fs::write(p, text).map_err(Error::from),
                None => stdout.write_all(text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if outcome.ok {
                0
            } else {
                let _ = writeln!(stderr, "falsified: see report");
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("tropdiv").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn chain_new_default() {
        let (code, out, _) = run_capture(&["chain-new", "--g", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["genus"], 2);
        let (code, _, err) = run_capture(&["chain-new", "--g", "1"]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn base_points() {
        let c = ChainOfLoops::default_generic(2).unwrap();
        let g = c.graph();
        assert_eq!(parse_base(g, "v:1").unwrap(), c.wp(1));
        assert_eq!(parse_base(g, "w2").unwrap(), c.wp(2));
        assert_eq!(parse_base(g, "e:0:0").unwrap(), c.vp(1));
        assert!(parse_base(g, "e:0:1/0").is_err());
        assert!(parse_base(g, "v:9").is_err());
        assert!(parse_base(g, "nowhere").is_err());
    }

    #[test]
    fn gp0_rejects_nonzero_rho() {
        let (code, _, _) = run_capture(&["gp0", "--g", "4", "--r", "1", "--d", "4"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_capture(&["gp0", "--g", "4", "--r", "1", "--d", "3"]);
        assert_eq!(code, 0, "{err}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Falsified("x".into())), 1);
        assert_eq!(exit_code(&Error::SearchCap { what: "x", cap: 1 }), 3);
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
    }
}
