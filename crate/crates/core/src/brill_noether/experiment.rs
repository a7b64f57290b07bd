//! The ρ = 0 independence experiment for one tableau.

use num_traits::Zero;

use super::basis::{adjoint_divisor, basis_member_by_reduction, build_dj, build_ek, tableau_to_divisor};
use super::shape::shape_profile;
use super::tableau::Tableau;
use crate::chain::{BnParams, ChainOfLoops};
use crate::error::{Error, Result};
use crate::graph::Divisor;
use crate::independence::{find_dependence, Dependence};
use crate::plfunc::{min_combination, PlFunction};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Independent,
    Dependent,
    /// Fewer than two functions; nothing to decide.
    Trivial,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Independent => "independent",
            Verdict::Dependent => "dependent",
            Verdict::Trivial => "trivial",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub params: BnParams,
    pub tableau: Tableau,
    pub d: Divisor,
    pub e: Divisor,
    /// `(D_j, φ_j)` for `j = 0..=r`.
    pub d_family: Vec<(Divisor, PlFunction)>,
    /// `(E_k, ψ_k)` for `k = 0..g-d+r`.
    pub e_family: Vec<(Divisor, PlFunction)>,
    /// `empty_cells[j][k]`: loops missed by `D_j + E_k`.
    pub empty_cells: Vec<Vec<Vec<usize>>>,
    /// Each `D_j + E_k` misses exactly the loop in row `k`, column `j`.
    pub partition_holds: bool,
    /// The pile construction matched the reduction construction everywhere.
    pub cross_checked: bool,
    /// Offset vectors for which `D + E + div θ` was inspected.
    pub theta_samples: usize,
    pub verdict: Verdict,
    pub dependence: Option<Dependence>,
}

fn check_params(params: &BnParams, t: &Tableau, chain: &ChainOfLoops) -> Result<()> {
    if params.rho() != 0 {
        return Err(Error::Precondition(format!(
            "ρ({}, {}, {}) = {} is not zero",
            params.g,
            params.r,
            params.d,
            params.rho()
        )));
    }
    if params.g as usize != chain.genus() {
        return Err(Error::Arity(format!(
            "genus {} but chain of genus {}",
            params.g,
            chain.genus()
        )));
    }
    let (rows, cols) = params.shape();
    if (t.row_count() as i64, t.col_count() as i64) != (rows, cols) {
        return Err(Error::Arity(format!("tableau shape must be {rows} × {cols}")));
    }
    chain.require_generic()
}

/// For a sampled θ, `D + E + div θ` is effective, misses some loop, and every
/// missed loop `γ_i` is one where the member owning `i` cannot be dropped
/// without changing θ.
fn theta_shape_consistent(chain: &ChainOfLoops, t: &Tableau, de: &Divisor, fs: &[PlFunction], b: &[Q]) -> Result<()> {
    let graph = chain.graph();
    let theta = min_combination(graph, fs, b)?;
    let total = de + &theta.divisor(graph);
    let profile =
        shape_profile(&total, chain).map_err(|_| Error::Falsified("D + E + div θ is not effective".into()))?;
    let empty = profile.empty_loops();
    if empty.is_empty() {
        return Err(Error::Falsified("D + E + div θ meets every loop".into()));
    }
    for i in empty {
        let (k, j) = t.position(i).expect("entry");
        let m = j * t.row_count() + k;
        let rest: Vec<PlFunction> = (0..fs.len()).filter(|&x| x != m).map(|x| fs[x].clone()).collect();
        let rb: Vec<Q> = (0..fs.len()).filter(|&x| x != m).map(|x| b[x].clone()).collect();
        if !rest.is_empty() && min_combination(graph, &rest, &rb)? == theta {
            return Err(Error::Falsified(format!(
                "loop {i} missed although its member is redundant"
            )));
        }
    }
    Ok(())
}

pub fn gp_rho_zero_experiment(params: BnParams, t: &Tableau, chain: &ChainOfLoops) -> Result<ExperimentReport> {
    check_params(&params, t, chain)?;
    let graph = chain.graph();
    let d = tableau_to_divisor(t, chain)?;
    let e = adjoint_divisor(t, chain)?;
    let r = t.col_count() - 1;
    let rows = t.row_count();
    let d_family: Vec<_> = (0..=r).map(|j| build_dj(t, chain, j)).collect::<Result<_>>()?;
    let e_family: Vec<_> = (0..rows).map(|k| build_ek(t, chain, k)).collect::<Result<_>>()?;

    let mut cross_checked = true;
    for (j, (dj, phi)) in d_family.iter().enumerate() {
        let (alt, w) = basis_member_by_reduction(t, chain, j)?;
        cross_checked &= alt == *dj && w.differs_by_constant(graph, phi);
    }
    let tt = t.transpose();
    for (k, (ek, psi)) in e_family.iter().enumerate() {
        let (alt, w) = basis_member_by_reduction(&tt, chain, k)?;
        cross_checked &= alt == *ek && w.differs_by_constant(graph, psi);
    }

    let mut empty_cells = vec![vec![Vec::new(); rows]; r + 1];
    let mut partition_holds = true;
    let mut seen = vec![false; chain.genus() + 1];
    for (j, (dj, _)) in d_family.iter().enumerate() {
        for (k, (ek, _)) in e_family.iter().enumerate() {
            let empty = shape_profile(&(dj + ek), chain)?.empty_loops();
            let expect = t.get(k, j);
            partition_holds &= empty == [expect] && !seen[expect];
            seen[expect] = true;
            empty_cells[j][k] = empty;
        }
    }

    // Member (j, k) sits at index j·rows + k.
    let fs: Vec<PlFunction> = d_family
        .iter()
        .flat_map(|(_, phi)| e_family.iter().map(move |(_, psi)| phi.add(psi)))
        .collect();
    let (verdict, dependence, theta_samples) = if fs.len() < 2 {
        (Verdict::Trivial, None, 0)
    } else {
        let dep = find_dependence(graph, &fs)?;
        let de = &d + &e;
        let mut samples: Vec<Vec<Q>> = vec![vec![Q::zero(); fs.len()]];
        if let Dependence::Independent(rep) = &dep {
            samples.extend(rep.examined.iter().skip(1).take(4).cloned());
        }
        for b in &samples {
            theta_shape_consistent(chain, t, &de, &fs, b)?;
        }
        let verdict = if dep.is_independent() {
            Verdict::Independent
        } else {
            Verdict::Dependent
        };
        (verdict, Some(dep), samples.len())
    };

    Ok(ExperimentReport {
        params,
        tableau: t.clone(),
        d,
        e,
        d_family,
        e_family,
        empty_cells,
        partition_holds,
        cross_checked,
        theta_samples,
        verdict,
        dependence,
    })
}
