//! Ranks of random divisors and the Riemann-Roch identity.

use tropdiv::chain::ChainOfLoops;
use tropdiv::random::Sampler;
use tropdiv::reduce::riemann_roch_sides;

fn main() -> tropdiv::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let g = args.next().flatten().unwrap_or(3) as usize;
    let trials = args.next().flatten().unwrap_or(10);
    let chain = ChainOfLoops::default_generic(g)?;
    let graph = chain.graph();
    let pts = chain.rank_determining_set();
    let mut s = Sampler::new(1);
    for _ in 0..trials {
        let deg = s.range(-2, 2 * g as i64);
        let d = s.divisor(graph, deg, 2, 4);
        let rr = riemann_roch_sides(graph, &d, &pts)?;
        println!(
            "deg {:>2}: r(D) = {:>2}, r(K-D) = {:>2}, identity {}",
            rr.degree,
            rr.rank,
            rr.adjoint_rank,
            if rr.holds() { "holds" } else { "FAILS" }
        );
    }
    Ok(())
}
