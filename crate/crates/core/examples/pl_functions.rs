//! Piecewise-linear functions, their divisors and shifted minima.

use tropdiv::plfunc::{agreement_domain, check_min_chips, check_obstruction, min_combination};
use tropdiv::rational::{q, qi};
use tropdiv::{Divisor, EdgeId, MetricGraph, PlFunction, Point, Region};

fn main() -> tropdiv::Result<()> {
    // A segment of length 2 with a tent and a ramp.
    let g = MetricGraph::from_edges(2, &[(0, 1, qi(2))])?;
    let tent = PlFunction::new(&g, vec![vec![(qi(0), qi(0)), (qi(1), qi(1)), (qi(2), qi(0))]])?;
    let ramp = PlFunction::new(&g, vec![vec![(qi(0), qi(0)), (qi(2), qi(2))]])?;
    println!("div(tent) = {}", tent.divisor(&g).display(&g));
    println!("div(ramp) = {}", ramp.divisor(&g).display(&g));

    let b = [qi(0), q(-1, 2)];
    let theta = min_combination(&g, &[tent.clone(), ramp.clone()], &b)?;
    println!("div(min(tent, ramp - 1/2)) = {}", theta.divisor(&g).display(&g));
    let dom = agreement_domain(&g, &theta, &tent);
    println!("theta = tent on {}", dom.region.describe(&g));

    // Both functions lie in R(D) for D = 2 v0 + 2 v1 (slopes at the ends are at most 1).
    let d = Divisor::from_terms([
        (Point::Vertex(tropdiv::VertexId(0)), 2),
        (Point::Vertex(tropdiv::VertexId(1)), 2),
    ]);
    let fs = [tent, ramp];
    println!(
        "chips on agreement sets consistent: {}",
        check_min_chips(&g, &d, &fs, &b)?
    );
    let mut middle = Region::empty();
    middle.add_span(EdgeId(0), tropdiv::graph::Span::closed(q(1, 2), q(3, 2)));
    println!(
        "obstruction on [1/2, 3/2]: {}",
        check_obstruction(&g, &d, &fs, &b, &middle)?
    );
    Ok(())
}
