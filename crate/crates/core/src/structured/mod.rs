//! Structured operators with difference and `|D|`-difference kernels.

pub mod canonical;
pub mod disk;
pub mod operator;
pub mod recovery;
pub mod schur;

pub use canonical::{
    canonical_from_kernel, fundamental_from_factor, fundamental_from_kernel, hamiltonian_by_dbdl, CanonicalAmplitude,
    CanonicalData,
};
pub use disk::{weyl_disk_approx, DiskOptions, DiskResult, FnHamiltonian, Hamiltonian};
pub use operator::{build_structured_operator, factorize_triangular, grid_size, StructuredOperator, TriangularFactor};
pub use recovery::{
    accelerant_from_potential, potential_from_factor, potential_right_edge, recover_potential, theta_from_factor,
    theta_functions, PotentialMode,
};
pub use schur::schur_recover;
