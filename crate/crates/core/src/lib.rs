//! Truncated Fock-space simulation of continuous-variable states:
//! beam-splitter non-Gaussianity measures, the PNR SWAP test, cubic-phase
//! Wigner negativity bounds and homodyne classical shadows.

pub mod cubic;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod rng;
pub mod shadows;
pub mod special;
pub mod swap;

pub use error::{Error, Result};
pub use faer::c64;
pub use faer::Mat;

pub use cubic::{BoundSpec, CubicPhaseParams, NegativityResult};
pub use fock::{DensityOperator, PhasePoint, PureState, SchmidtSpectrum};
pub use gaussian::{GaussianChannelSpec, GaussianState, SymplecticMatrix};
pub use shadows::{ShadowEstimate, ShadowSample};
pub use swap::{EstimatorReport, ProtocolReport};
