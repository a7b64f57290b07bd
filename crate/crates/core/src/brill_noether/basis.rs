//! The divisors attached to a tableau and the explicit family `D_j`, `E_k`.

use num_traits::Zero;

use super::tableau::{tableau_to_dyck, DyckPath, Tableau};
use crate::chain::ChainOfLoops;
use crate::error::{Error, Result};
use crate::graph::Divisor;
use crate::plfunc::PlFunction;
use crate::rational::{qi, rem_euclid, to_int, Q};
use crate::reduce::v_reduce;

fn check_chain(t: &Tableau, chain: &ChainOfLoops) -> Result<()> {
    chain.require_generic()?;
    if t.size() != chain.genus() {
        return Err(Error::Arity(format!(
            "tableau has {} entries but the chain has genus {}",
            t.size(),
            chain.genus()
        )));
    }
    Ok(())
}

/// Counterclockwise position of the chip that entry `i` places on loop `i`,
/// or `None` when `i` is in the last column.
fn chip_position(chain: &ChainOfLoops, path: &DyckPath, t: &Tableau, i: usize) -> Option<Q> {
    let r = t.col_count() - 1;
    let j = t.column_of(i).expect("entry present");
    (j < r).then(|| {
        let m = &chain.bottom_lengths()[i - 1];
        rem_euclid(&(qi(path.coord(i - 1, j)) * m), &chain.loop_length(i))
    })
}

/// `r·v_1` plus one chip on loop `i` for every entry `i` outside the last column.
pub fn tableau_to_divisor(t: &Tableau, chain: &ChainOfLoops) -> Result<Divisor> {
    check_chain(t, chain)?;
    let path = tableau_to_dyck(t)?;
    let r = t.col_count() as i64 - 1;
    let mut d = Divisor::from_terms([(chain.vp(1), r)]);
    for i in 1..=chain.genus() {
        if let Some(x) = chip_position(chain, &path, t, i) {
            d.add_point(chain.loop_point_ccw(i, &x), 1);
        }
    }
    Ok(d)
}

/// The divisor of the transposed tableau.
pub fn adjoint_divisor(t: &Tableau, chain: &ChainOfLoops) -> Result<Divisor> {
    tableau_to_divisor(&t.transpose(), chain)
}

/// A function on the circle of circumference `len`, coordinate `x` measured
/// counterclockwise from `w_i`, whose divisor is `Σ c·x`.
///
/// Returns value samples at the sorted breakpoints (including 0 and `len`).
fn circle_function(points: &[(Q, i64)], len: &Q, extra: &[Q]) -> Result<Vec<(Q, Q)>> {
    let weighted: Q = points.iter().map(|(x, c)| x * qi(*c)).sum();
    let s0 = to_int(&(-weighted / len)).ok_or_else(|| Error::Falsified("loop divisor is not principal".into()))?;
    let mut xs: Vec<Q> = points
        .iter()
        .map(|(x, _)| x.clone())
        .chain(extra.iter().cloned())
        .collect();
    xs.push(Q::zero());
    xs.push(len.clone());
    xs.sort();
    xs.dedup();
    let mut out = Vec::with_capacity(xs.len());
    let mut value = Q::zero();
    let mut slope = s0;
    let mut prev = Q::zero();
    for x in xs {
        value += (&x - &prev) * qi(slope);
        slope -= points.iter().filter(|(p, _)| *p == x).map(|(_, c)| c).sum::<i64>();
        out.push((x.clone(), value.clone()));
        prev = x;
    }
    debug_assert!(out.last().is_some_and(|(_, v)| v.is_zero()));
    Ok(out)
}

/// The divisor `D_j` and `φ_j` with `D_j = D + div φ_j`, `φ_j(w_g) = 0`,
/// built by sliding a pile of `r - j` chips from `v_1` to `w_g`.
pub fn build_dj(t: &Tableau, chain: &ChainOfLoops, j: usize) -> Result<(Divisor, PlFunction)> {
    check_chain(t, chain)?;
    let r = t.col_count() - 1;
    if j > r {
        return Err(Error::Precondition(format!("index {j} exceeds {r}")));
    }
    let path = tableau_to_dyck(t)?;
    let g = chain.genus();
    let graph = chain.graph();
    let pile = |i: usize| if j == r { 0 } else { path.coord(i, j) };

    let mut pieces: Vec<Vec<(Q, Q)>> = vec![Vec::new(); graph.edge_count()];
    let mut level = Q::zero();
    for i in 1..=g {
        let (a, b) = (pile(i - 1), pile(i));
        let l = &chain.top_lengths()[i - 1];
        let len = chain.loop_length(i);
        let mut pts: Vec<(Q, i64)> = vec![(l.clone(), -a), (Q::zero(), b)];
        let chip = chip_position(chain, &path, t, i);
        if let Some(x) = &chip {
            pts.push((x.clone(), -1));
        }
        if t.column_of(i) != Some(j) {
            let weighted: Q = pts.iter().map(|(x, c)| x * qi(*c)).sum();
            pts.push((rem_euclid(&-weighted, &len), 1));
        }
        if pts.iter().map(|(_, c)| c).sum::<i64>() != 0 {
            return Err(Error::Falsified(format!("chip count on loop {i} does not balance")));
        }
        let f = circle_function(&pts, &len, std::slice::from_ref(l))?;
        let at_v = f.iter().find(|(x, _)| x == l).map(|(_, v)| v.clone()).expect("sampled");
        let shift = &level - &at_v;
        let edges = chain.loop_edges(i);
        pieces[edges.top.0] = f
            .iter()
            .filter(|(x, _)| x <= l)
            .rev()
            .map(|(x, v)| (l - x, v + &shift))
            .collect();
        pieces[edges.bottom.0] = f
            .iter()
            .filter(|(x, _)| x >= l)
            .map(|(x, v)| (x - l, if x == &len { shift.clone() } else { v + &shift }))
            .collect();
        level = shift;
        if i < g {
            let br = chain.bridge(i);
            let beta = &chain.bridge_lengths()[i - 1];
            let end = &level + beta * qi(b);
            pieces[br.0] = vec![(Q::zero(), level.clone()), (beta.clone(), end.clone())];
            level = end;
        }
    }
    let phi = PlFunction::new(graph, pieces)?.shift(&-level);
    let d = tableau_to_divisor(t, chain)?;
    let dj = &d + &phi.divisor(graph);
    let pile_part = Divisor::from_terms([(chain.vp(1), j as i64), (chain.wp(g), (r - j) as i64)]);
    if !(&dj - &pile_part).is_effective() {
        return Err(Error::Falsified(format!("D_{j} minus its piles is not effective")));
    }
    Ok((dj, phi))
}

/// `E_k` and `ψ_k`: the same construction on the transpose.
pub fn build_ek(t: &Tableau, chain: &ChainOfLoops, k: usize) -> Result<(Divisor, PlFunction)> {
    build_dj(&t.transpose(), chain, k)
}

/// `D_j` found by reducing `D - j·v_1 - (r-j)·w_g` at `w_g`, with its witness.
///
/// Independent of the pile construction; used to cross-check it.
pub fn basis_member_by_reduction(t: &Tableau, chain: &ChainOfLoops, j: usize) -> Result<(Divisor, PlFunction)> {
    let r = t.col_count() - 1;
    let g = chain.genus();
    let d = tableau_to_divisor(t, chain)?;
    let piles = Divisor::from_terms([(chain.vp(1), j as i64), (chain.wp(g), (r - j) as i64)]);
    let red = v_reduce(chain.graph(), &(&d - &piles), &chain.wp(g))?;
    if !red.reduced.is_effective() {
        return Err(Error::Falsified(format!("no effective divisor of the form D_{j}")));
    }
    Ok((&red.reduced + &piles, red.witness))
}
