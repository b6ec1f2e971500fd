//! Gabor frames and Heisenberg modules over finite abelian groups.
//!
//! Signals are complex vectors indexed by a finite abelian group `G`. The crate provides the
//! time-frequency plane `G x G^`, its measured subgroups and their adjoints, the twisted
//! group algebra with its Schroedinger representation, Gabor frame operators, and the
//! Heisenberg bimodule built from these pieces.

pub mod error;
pub mod gabor;
pub mod group;
pub mod heisenberg;
pub mod json;
pub mod linalg;
pub mod rng;
pub mod shift;
pub mod twisted;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
pub use gabor::{
    analysis, analysis_norm, dual_window, frame_bounds, frame_like, frame_operator, is_frame,
    janssen_frame_operator, reconstruct, spectrum, synthesis, FrameBounds, GaborSystem,
    DEFAULT_FRAME_TOL,
};
pub use group::{
    adjoint_subgroup, all_subgroups, character, default_measures, format_rational, parse_rational,
    subgroup_from_generators, FiniteAbelianGroup, GroupElement, MeasureTable, MeasuredSubgroup,
    Rational, TFPoint,
};
pub use heisenberg::{
    dual_lattice_norm_scaling, figa_check, left_act, left_inner, localization_check,
    module_expansion, module_frame_check, module_frame_operator, module_norm, module_synthesis,
    right_act, right_inner, theta_matrix, FigaCheck, LocalizationCheck, ModuleContext,
    ModuleFrameCheck, NormScaling,
};
pub use linalg::{hermitian_eigen, hermitian_eigenvalues, spectral_norm, CMatrix, HermitianEigen, OperatorMatrix};
pub use num_complex::Complex64;
pub use rng::SignalRng;
pub use shift::{heisenberg_cocycle, modulate, shift_matrix, tf_shift, tf_shift_adjoint, translate};
pub use twisted::{cstar_norm, integrated_rep, involution, l2_localization_inner, trace, twisted_convolve, TwistedSeq};
pub use window::Window;
pub use verify::{verify_suite, IdentityReport, VerifyConfig, VerifyReport};
