//! Brill-Noether constructions on a chain of loops at ρ = 0.

pub mod basis;
pub mod experiment;
pub mod shape;
pub mod tableau;

pub use basis::{adjoint_divisor, basis_member_by_reduction, build_dj, build_ek, tableau_to_divisor};
pub use experiment::{gp_rho_zero_experiment, ExperimentReport, Verdict};
pub use shape::{
    canonical_shape_check, chips_on_each_loop_check, has_reduced_shape, members_missing_loop, shape_profile,
    ShapeProfile,
};
pub use tableau::{enumerate_tableaux, tableau_to_dyck, DyckPath, Tableau};
