//! Hermite polynomials and the phase-carrying scaled Hermite functions
//! `ξₙ(k) = iⁿ e^{−k²/2} Hₙ(k) / (π^{1/4} 2^{n/2} √n!)`.
//!
//! `ξₙ` is evaluated as `iⁿ·ψₙ(k)` where `ψₙ` is the real orthonormal
//! Hermite function, obtained from the normalized three-term recurrence
//!
//! ```text
//! ψₙ₊₁ = k·√(2/(n+1))·ψₙ − √(n/(n+1))·ψₙ₋₁
//! ```
//!
//! which is the `Hₙ` recurrence with the normalization folded in. Neither
//! `Hₙ` nor `n!` is ever formed, so the recurrence is overflow-free for any
//! order; the phase `iⁿ` is applied exactly.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::GridIndex;
use crate::momentum::MomentumVec;
use crate::scalar::{from_usize, lit, pi_quarter_inv, times_i_pow, Real};

/// Basis order `n ≥ 0`.
pub type HermiteIndex = usize;

/// Highest order accepted by [`hermite_poly`].
pub const HERMITE_POLY_MAX_ORDER: usize = 30;

/// Physicists' Hermite polynomial `Hₙ(k)` by `Hₙ₊₁ = 2kHₙ − 2nHₙ₋₁`.
pub fn hermite_poly<T: Real>(n: HermiteIndex, k: T) -> Result<T> {
    if n > HERMITE_POLY_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: HERMITE_POLY_MAX_ORDER,
        });
    }
    let two = lit::<T>(2.0);
    let (mut prev, mut cur) = (T::zero(), T::one());
    for j in 0..n {
        let next = two * k * cur - two * from_usize::<T>(j) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[inline]
fn step_coeffs<T: Real>(j: usize) -> (T, T) {
    let jp1: T = from_usize(j + 1);
    ((lit::<T>(2.0) / jp1).sqrt(), (from_usize::<T>(j) / jp1).sqrt())
}

/// `Hₙ(z) / (2^{n/2} √n!)` for all orders `0..=n_max`.
pub fn normalized_hermite_all<T: Real>(n_max: HermiteIndex, z: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max + 1);
    let (mut prev, mut cur) = (T::zero(), T::one());
    out.push(cur);
    for j in 0..n_max {
        let (a, b) = step_coeffs::<T>(j);
        let next = z * a * cur - b * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `Hₙ(z) / (2^{n/2} √n!)`.
pub fn normalized_hermite<T: Real>(n: HermiteIndex, z: T) -> T {
    let (mut prev, mut cur) = (T::zero(), T::one());
    for j in 0..n {
        let (a, b) = step_coeffs::<T>(j);
        let next = z * a * cur - b * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Real orthonormal Hermite functions `ψ₀(k) … ψ_{n_max}(k)`.
pub fn hermite_functions<T: Real>(n_max: HermiteIndex, k: T) -> Vec<T> {
    let seed = pi_quarter_inv::<T>() * (-(k * k) / lit(2.0)).exp();
    normalized_hermite_all(n_max, k).into_iter().map(|h| h * seed).collect()
}

/// Real orthonormal Hermite function `ψₙ(k)`; `ξₙ(k) = iⁿ·ψₙ(k)`.
pub fn hermite_function<T: Real>(n: HermiteIndex, k: T) -> T {
    let mut prev = T::zero();
    let mut cur = pi_quarter_inv::<T>() * (-(k * k) / lit(2.0)).exp();
    for j in 0..n {
        let (a, b) = step_coeffs::<T>(j);
        let next = k * a * cur - b * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Scaled Hermite function `ξₙ(k)`.
pub fn xi<T: Real>(n: HermiteIndex, k: T) -> Complex<T> {
    times_i_pow(hermite_function(n, k), n)
}

/// `ξ₀(k) … ξ_{n_max}(k)` in one recurrence pass.
pub fn xi_all<T: Real>(n_max: HermiteIndex, k: T) -> Vec<Complex<T>> {
    hermite_functions(n_max, k)
        .into_iter()
        .enumerate()
        .map(|(n, v)| times_i_pow(v, n))
        .collect()
}

/// Plane-wave mode factor `∏ⱼ ξ_{nʲ}(kⱼ)`.
pub fn xi_product<T: Real>(n: GridIndex, k: &MomentumVec<T>) -> Complex<T> {
    (0..3).fold(Complex::new(T::one(), T::zero()), |acc, j| acc * xi(n.0[j], k[j]))
}

/// `−iΔ#` applied to the index of `ξₙ(k)`:
/// `−i/√2·[√(n+1)·ξₙ₊₁(k) − √n·ξₙ₋₁(k)]`, which equals `k·ξₙ(k)`.
pub fn xi_delta_sharp<T: Real>(n: HermiteIndex, k: T) -> Complex<T> {
    let up = xi(n + 1, k) * from_usize::<T>(n + 1).sqrt();
    let down = if n == 0 {
        Complex::new(T::zero(), T::zero())
    } else {
        xi(n - 1, k) * from_usize::<T>(n).sqrt()
    };
    (up - down) * Complex::new(T::zero(), -T::FRAC_1_SQRT_2())
}
