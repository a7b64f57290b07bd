//! At most one member of a family with distinct slopes misses a loop, on a
//! generic chain; a chain with equal loop edges breaks this.

use tropdiv::brill_noether::{chips_on_each_loop_check, members_missing_loop};
use tropdiv::chain::ChainOfLoops;
use tropdiv::rational::{q, qi};
use tropdiv::reduce::v_reduce;
use tropdiv::{Divisor, PlFunction};

fn main() -> tropdiv::Result<()> {
    for (name, chain) in [
        ("generic", ChainOfLoops::default_generic(2)?.extended((qi(1), qi(1)))?),
        (
            "equal loop edges",
            ChainOfLoops::uniform(2, qi(1))?.extended((qi(1), qi(1)))?,
        ),
    ] {
        let graph = chain.graph();
        let d = Divisor::from_terms([(chain.wp(1), 2)]);
        let y = graph.point(chain.left_edge(1).unwrap(), q(1, 2))?;
        let to_y = v_reduce(graph, &d, &y)?;
        let psis = [PlFunction::zero(graph), to_y.witness];
        println!("{name}: 2 w_1 reduced at y is {}", to_y.reduced.display(graph));
        println!(
            "  members missing loop 1: {:?}",
            members_missing_loop(&d, &psis, 1, &chain)?
        );
        match chips_on_each_loop_check(&d, &psis, 1, &chain) {
            Ok(ok) => println!("  at most one misses: {ok}"),
            Err(e) => println!("  check refused: {e}"),
        }
    }
    Ok(())
}
