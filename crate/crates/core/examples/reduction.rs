//! Reduce divisors on a chain with Dhar's burning algorithm.

use tropdiv::chain::ChainOfLoops;
use tropdiv::rational::q;
use tropdiv::reduce::{is_equivalent, v_reduce};
use tropdiv::Divisor;

fn main() -> tropdiv::Result<()> {
    let chain = ChainOfLoops::default_generic(3)?;
    let g = chain.graph();
    let top = chain.loop_edges(1).top;
    let d = Divisor::from_terms([
        (chain.vp(1), 2),
        (g.point(top, q(1, 3))?, 1),
        (g.midpoint(chain.bridge(1)), 1),
        (chain.wp(3), -1),
    ]);
    println!("D = {}", d.display(g));
    for base in [chain.wp(3), chain.vp(1)] {
        let r = v_reduce(g, &d, &base)?;
        println!(
            "reduced at {}: {} ({} firing events)",
            g.describe_point(&base),
            r.reduced.display(g),
            r.events
        );
        println!(
            "  witness slopes on the first bridge: {:?}",
            r.witness.edge(chain.bridge(1)).slopes()
        );
    }
    let a = v_reduce(g, &d, &chain.wp(3))?.reduced;
    let b = v_reduce(g, &d, &chain.vp(1))?.reduced;
    println!(
        "the two reduced forms are equivalent: {}",
        is_equivalent(g, &a, &b)?.is_some()
    );
    Ok(())
}
