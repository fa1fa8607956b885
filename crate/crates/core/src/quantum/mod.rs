//! Kernels induced by the quantum random walk: `Q_n(κ)` on signatures and
//! `P_n(κ)` on weights.

mod center;
mod class_function;
mod torus;

pub use center::{
    center_sides, check_center_intertwining, check_center_window, check_morphism, check_qrw, qn_entry,
    qn_row,
};
pub use class_function::{kappa_of, ClassFunction, Provenance, Truncation};
pub use torus::{check_torus, pn_entry, torus_convolution, TorusStep};
