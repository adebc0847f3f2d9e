//! Field theory on the discrete phase space ℕ³ with continuous time.
//!
//! The crate covers the scaled Hermite basis `ξₙ(k)`, partial difference
//! operators on index space, the Dirac algebra with plane-wave spinors, the
//! static Green's functions `G#(n, n̂; μ)` with their finite coincidence
//! values, and the second-order Møller element built from them.
//!
//! Every kernel is generic over the scalar type (`f32` or `f64`) through
//! [`Real`]; the aliases below fix it to `f64`.

// `!(x > 0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod dirac;
pub mod error;
pub mod greens;
pub mod grid;
pub mod hermite;
pub mod momentum;
pub mod quadrature;
pub mod scalar;
pub mod scattering;
pub mod special;
pub mod sum;

pub use dirac::{
    anticommutator_kernel, dirac_adjoint, dirac_mode_residual, energy, gamma_set, low_momentum_u, orthonormality_check,
    s_plus_green, spin_sum, spin_sum_closed_form, spinor_u, spinor_v, Bispinor, FourMomentum, GammaDefect, GammaSet,
    Mat4, MatrixEstimate, RowSpinor, Spin, SpinorKind,
};
pub use error::{Error, Result};
pub use greens::{
    continuum_yukawa, continuum_yukawa_oracle, coulomb_even, coulomb_quadrature, difference_equation_residual,
    euler_beta, g_sharp, g_sharp_axis, g_sharp_tensor, incomplete_gamma_neg_half, v_sharp, w_sharp, yukawa_coincidence,
    Estimate, GreensTable, GreensValue, MassParam,
};
pub use grid::{
    delta_bwd, delta_circle, delta_fwd, delta_sharp, kg_mode_residual, kg_mode_residual_with_omega, laplacian_sharp,
    Axis, GridBox, GridFunction, GridIndex,
};
pub use hermite::{hermite_function, hermite_poly, xi, xi_all, xi_delta_sharp, xi_product, HermiteIndex};
pub use momentum::MomentumVec;
pub use quadrature::{GaussHermite, GaussLegendre, QuadratureConfig};
pub use scalar::Real;
pub use scattering::{
    continuum_moller_reduced, moller_oracle, moller_reduced_element, vertex_axis_sum, MollerElement, MollerKinematics,
    VertexSign, VertexSum, VertexTruncation,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type MomentumVec64 = MomentumVec<f64>;
pub type GridFunction64 = GridFunction<f64>;
pub type GammaSet64 = GammaSet<f64>;
pub type Mat4x64 = Mat4<f64>;
pub type Bispinor64 = Bispinor<f64>;
pub type GreensValue64 = GreensValue<f64>;
pub type Estimate64 = Estimate<f64>;
pub type MollerKinematics64 = MollerKinematics<f64>;
pub type MollerElement64 = MollerElement<f64>;
