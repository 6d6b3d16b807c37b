//! Truncated Fock-space states and operations for one and two modes.

mod beam_splitter;
mod entropy;
mod ops;
mod phase_space;
mod state;

pub use beam_splitter::{
    apply_beam_splitter, apply_beam_splitter_density, apply_beam_splitter_density_with_cutoff,
    block_unitary,
};
pub use entropy::{
    mean_photon_number, mean_photon_number_pure, partial_trace, purity, reduced_pure,
    renyi_entropy, renyi_entropy_of, schmidt_spectrum, von_neumann_entropy, Keep, EIGEN_CLAMP,
};
pub use ops::{
    annihilation, creation, displace, make_cat, make_coherent, make_cubic_phase,
    make_cubic_phase_displaced, make_fock, make_squeezed, make_zero_n, momentum, number, position,
    rotate, COHERENT_LEAKAGE_TOL, GATE_LEAKAGE_TOL,
};
pub use phase_space::{
    beta_of, characteristic_function, characteristic_function_pure, displacement_matrix_beta,
    displacement_matrix_element, position_wavefunction, quadrature_density, wigner_function,
};
pub use state::{DensityOperator, Diagnostics, PhasePoint, PureState, SchmidtSpectrum};

/// Default per-mode photon-number cutoff.
pub const DEFAULT_CUTOFF: usize = 60;
