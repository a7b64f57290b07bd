//! Runs the ρ = 0 independence experiment for every tableau of a shape.
//!
//! Usage: `cargo run --release --example gp_rho_zero -- [g r d]` (default 6 1 4).

use std::time::Instant;

use tropdiv::brill_noether::{enumerate_tableaux, gp_rho_zero_experiment};
use tropdiv::chain::{BnParams, ChainOfLoops};
use tropdiv::independence::Dependence;

fn main() -> tropdiv::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (g, r, d) = match args[..] {
        [g, r, d] => (g, r, d),
        _ => (6, 1, 4),
    };
    let params = BnParams::new(g, r, d);
    let (rows, cols) = params.shape();
    let chain = ChainOfLoops::default_generic(g as usize)?;
    for (idx, t) in enumerate_tableaux(rows as usize, cols as usize).iter().enumerate() {
        let start = Instant::now();
        let rep = gp_rho_zero_experiment(params, t, &chain)?;
        let sweeps = match &rep.dependence {
            Some(Dependence::Independent(ind)) => ind.examined.len(),
            _ => 0,
        };
        println!(
            "tableau {idx} {:?}: {} (partition {}, cross-check {}, {sweeps} sweeps, {:.2?})",
            t.rows(),
            rep.verdict.as_str(),
            rep.partition_holds,
            rep.cross_checked,
            start.elapsed()
        );
    }
    Ok(())
}
