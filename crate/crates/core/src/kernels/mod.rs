//! Spectral functions, their Laurent coefficients, the determinantal kernels
//! `T_n(θ;F)` and the checks built on them.

mod checks;
mod fourier;
mod spectral;
mod transition;

pub use checks::{
    check_gamma_limit, check_closed_forms, check_semigroup, check_star, check_star_window,
    check_stochastic, exact_row_sum, gamma_limit_distances, closed_form_entry, star_sides,
};
pub use fourier::FourierSeq;
pub use spectral::{SpectralFunction, Support};
pub use transition::{p0_row, Exactness, KernelRow, RowOptions, TransitionKernel};
pub(crate) use transition::{displacement_shell, signatures_between};
