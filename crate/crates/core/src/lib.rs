//! Geometric mean flows and Cartan barycenters on the manifold of symmetric
//! positive definite matrices.
//!
//! The crate covers, at desk scale, the Riemannian trace-metric geometry of
//! the positive definite cone ([`spd`]), finitely supported probability
//! measures and their push-forward flows ([`measure`]), exact 1-Wasserstein
//! optimal transport ([`wasserstein`]), the Cartan barycenter and its
//! resolvent and gradient flow ([`barycenter`]), and the barycentric
//! trajectory t ↦ G(X #_t μ) with its derivative, Lie-Trotter limit, and
//! norm-monotonicity scans ([`trajectory`]).

pub mod barycenter;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod rng;
pub mod spd;
pub mod trajectory;
pub mod wasserstein;

pub use barycenter::{
    cartan_barycenter, gradient_flow_integrate, karcher_residual, resolvent,
    riemannian_gradient, Init, SolverOptions, SolverReport,
};
pub use error::{Error, Result};
pub use linalg::{sym_eig, Matrix, SpectralDecomposition, SymMatrix};
pub use measure::DiscreteMeasure;
pub use spd::{
    congruence, geodesic, loewner_leq, mat_exp, recenter, riem_dist, SpdMatrix,
};
pub use trajectory::{
    beta, beta_congruence_reduce, beta_prime_fd, beta_prime_zero, fixed_point_check,
    flow_law_check, lie_trotter_scan, lipschitz_probe, norm_monotonicity_scan,
    FixedPointReport, FlowLawReport, LieTrotterRecord, LipschitzReport, NormScanRow,
    TrajectorySample,
};
pub use wasserstein::{d1w, permutation_oracle, CostMatrix, CouplingPlan};
