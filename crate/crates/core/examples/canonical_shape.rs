//! Random members of |K| on a chain always miss a loop; on a graph with a
//! spanning tree removed, some open edge carries no chip.

use tropdiv::brill_noether::{canonical_shape_check, shape_profile};
use tropdiv::chain::ChainOfLoops;
use tropdiv::random::Sampler;
use tropdiv::reduce::find_unoccupied_edge;

fn main() -> tropdiv::Result<()> {
    let chain = ChainOfLoops::default_generic(4)?;
    let graph = chain.graph();
    let k = chain.canonical_divisor();
    let mut s = Sampler::new(3);
    for _ in 0..5 {
        let (rep, _) = s.walk(graph, &k, 2, 4)?;
        let profile = shape_profile(&rep, &chain)?;
        println!(
            "{}  empty loops {:?}, first {}",
            rep.display(graph),
            profile.empty_loops(),
            canonical_shape_check(&rep, &chain)?
        );
    }
    // Removing one edge per loop leaves a tree; one of the removed edges is chip-free.
    let open: Vec<_> = (1..=4).map(|i| chain.loop_edges(i).bottom).collect();
    let (rep, _) = s.walk(graph, &k, 3, 4)?;
    println!("unoccupied open edge: {:?}", find_unoccupied_edge(graph, &rep, &open)?);
    Ok(())
}
