//! Which cells of the chain a divisor meets.

use serde::Serialize;

use crate::chain::{Cell, ChainOfLoops};
use crate::error::{Error, Result};
use crate::graph::Divisor;
use crate::plfunc::{in_r, PlFunction};
use crate::reduce::is_equivalent;

/// Occupancy of `γ_1..γ_g` and `br_1..br_{g-1}`, and the coefficient at `w_g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeProfile {
    pub loops: Vec<bool>,
    pub bridges: Vec<bool>,
    pub end_coefficient: i64,
}

impl ShapeProfile {
    /// Indices `i` (1-based) with `γ_i` empty.
    pub fn empty_loops(&self) -> Vec<usize> {
        (1..=self.loops.len()).filter(|&i| !self.loops[i - 1]).collect()
    }
}

pub fn shape_profile(d: &Divisor, chain: &ChainOfLoops) -> Result<ShapeProfile> {
    if !d.is_effective() {
        return Err(Error::Precondition("shape is defined for effective divisors".into()));
    }
    d.validate_on(chain.graph())?;
    let g = chain.genus();
    Ok(ShapeProfile {
        loops: (1..=g)
            .map(|i| d.contains_point_in(&chain.cell(Cell::Loop(i))))
            .collect(),
        bridges: (1..g)
            .map(|i| d.contains_point_in(&chain.cell(Cell::Bridge(i))))
            .collect(),
        end_coefficient: d.coeff(&chain.wp(g)),
    })
}

/// No point on any `br_i` (which includes `w_i`) and at most one point,
/// counted with multiplicity, in each `γ_i`.
pub fn has_reduced_shape(d: &Divisor, chain: &ChainOfLoops) -> bool {
    let g = chain.genus();
    d.is_effective()
        && (1..g).all(|i| !d.contains_point_in(&chain.cell(Cell::Bridge(i))))
        && (1..=g).all(|i| d.degree_on(&chain.cell(Cell::Loop(i))) <= 1)
}

/// An index `i` with `γ_i` free of `d`, for an effective `d ~ K`.
pub fn canonical_shape_check(d: &Divisor, chain: &ChainOfLoops) -> Result<usize> {
    if !d.is_effective() {
        return Err(Error::Precondition("divisor is not effective".into()));
    }
    if is_equivalent(chain.graph(), d, &chain.canonical_divisor())?.is_none() {
        return Err(Error::Precondition("divisor is not equivalent to K".into()));
    }
    shape_profile(d, chain)?
        .empty_loops()
        .first()
        .copied()
        .ok_or_else(|| Error::Falsified("canonical divisor meets every loop".into()))
}

/// Members of `psis` whose divisor `d + div ψ` misses `γ_i`, on a chain with pendants.
///
/// Checks every hypothesis of the at-most-one statement except genericity.
pub fn members_missing_loop(d: &Divisor, psis: &[PlFunction], i: usize, chain: &ChainOfLoops) -> Result<Vec<usize>> {
    let g = chain.genus();
    if chain.pendant_lengths().is_none() {
        return Err(Error::Precondition("chain needs pendant edges at both ends".into()));
    }
    if !(1..=g).contains(&i) {
        return Err(Error::Precondition(format!("loop index {i} out of range")));
    }
    if d.degree() > 2 * g as i64 - 2 {
        return Err(Error::Precondition(format!("degree {} exceeds 2g - 2", d.degree())));
    }
    let graph = chain.graph();
    if let Some(k) = psis.iter().position(|p| !in_r(graph, d, p)) {
        return Err(Error::Precondition(format!("function {k} is not in R(D)")));
    }
    let dir = chain.left_direction(i).expect("pendants present");
    let mut slopes: Vec<i64> = psis.iter().map(|p| p.incoming_slope(dir)).collect();
    slopes.sort_unstable();
    if slopes.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition(format!(
            "incoming slopes at v_{i} are not distinct"
        )));
    }
    let cell = chain.cell(Cell::Loop(i));
    Ok(psis
        .iter()
        .enumerate()
        .filter(|(_, p)| !(d + &p.divisor(graph)).contains_point_in(&cell))
        .map(|(k, _)| k)
        .collect())
}

/// True iff at most one `d + div ψ` misses `γ_i`; requires a generic chain.
pub fn chips_on_each_loop_check(d: &Divisor, psis: &[PlFunction], i: usize, chain: &ChainOfLoops) -> Result<bool> {
    chain.require_generic()?;
    Ok(members_missing_loop(d, psis, i, chain)?.len() <= 1)
}
