//! Build chains of loops, test genericity and print one as JSON.

use tropdiv::chain::ChainOfLoops;
use tropdiv::json;
use tropdiv::rational::qi;

fn main() -> tropdiv::Result<()> {
    let g = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let chain = ChainOfLoops::default_generic(g)?;
    println!("genus {g}: generic = {}", chain.is_generic());
    println!(
        "canonical divisor: {}",
        chain.canonical_divisor().display(chain.graph())
    );
    println!("rank-determining set has {} points", chain.rank_determining_set().len());

    let equal = ChainOfLoops::uniform(g, qi(1))?;
    match equal.genericity_violation() {
        Some((i, a, b)) => println!("uniform chain fails genericity on loop {i}: l/m = {a}/{b}"),
        None => println!("uniform chain is generic"),
    }
    print!("{}", json::render(&json::chain_value(&chain)));
    Ok(())
}
