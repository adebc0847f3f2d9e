//! Truncated vertex sums and the second-order Møller reduced matrix element.
//!
//! With `Aₙ = ∏ⱼ ξ_{nʲ}(p₁ⱼ)ξ̄_{nʲ}(p′₁ⱼ)` and `B_n̂ = ∏ⱼ ξ_{n̂ʲ}(p₂ⱼ)ξ̄_{n̂ʲ}(p′₂ⱼ)`
//! the reduced element is
//!
//! ```text
//! M = (g²/4π)·m²/√(E′₁E′₂E₁E₂)·Σ_{n,n̂ ≤ N} Aₙ·G#(n, n̂; μ)·B_n̂.
//! ```
//!
//! Every factor of the double sum is a product over axes, and so is the
//! heat-kernel integrand of `G#`. Exchanging the finite sums with the `v`
//! integral therefore gives, per quadrature node, three independent
//! `(N+1)×(N+1)` bilinear forms instead of an `(N+1)⁶` sum.

use num_complex::Complex;

use crate::dirac::{energy, Spin};
use crate::error::{Error, Result};
use crate::greens::{GreensValue, HeatKernel};
use crate::hermite::xi_all;
use crate::momentum::MomentumVec;
use crate::quadrature::{refine_with, GaussHermite, QuadratureConfig};
use crate::scalar::{lit, times_i_pow, Real};
use crate::sum::pairwise_sum;

/// Per-axis cutoff `N` of the vertex sums (`0 ≤ nʲ ≤ N`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexTruncation {
    n_max: usize,
}

impl VertexTruncation {
    pub const DEFAULT_N_MAX: usize = 64;

    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::domain("VertexTruncation", "n_max must be at least 1"));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

impl Default for VertexTruncation {
    fn default() -> Self {
        Self {
            n_max: Self::DEFAULT_N_MAX,
        }
    }
}

/// Whether a vertex argument enters as `ξₙ` or as its conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexSign {
    Plus,
    Minus,
}

impl VertexSign {
    fn apply<T: Real>(self, z: Complex<T>) -> Complex<T> {
        match self {
            VertexSign::Plus => z,
            VertexSign::Minus => z.conj(),
        }
    }
}

/// A truncated vertex sum and the modulus of its last retained term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexSum<T> {
    pub value: Complex<T>,
    pub tail_report: T,
}

/// `Σ_{n=0}^{N} ξₙ(p)·c(ξₙ(q))·c(ξₙ(k))` for one axis, where `c` conjugates for
/// [`VertexSign::Minus`]. Pointwise this does not converge as `N → ∞`; it is
/// meaningful only inside integrals.
pub fn vertex_axis_sum<T: Real>(
    p: T,
    q: T,
    k: T,
    sign_q: VertexSign,
    sign_k: VertexSign,
    trunc: VertexTruncation,
) -> VertexSum<T> {
    let n = trunc.n_max;
    let (xp, xq, xk) = (xi_all(n, p), xi_all(n, q), xi_all(n, k));
    let terms: Vec<Complex<T>> = (0..=n)
        .map(|i| xp[i] * sign_q.apply(xq[i]) * sign_k.apply(xk[i]))
        .collect();
    VertexSum {
        value: pairwise_sum(&terms),
        tail_report: terms[n].norm(),
    }
}

/// External momenta, masses, coupling and spins of `p₁ + p₂ → p′₁ + p′₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollerKinematics<T> {
    pub p1: MomentumVec<T>,
    pub p2: MomentumVec<T>,
    pub p1_out: MomentumVec<T>,
    pub p2_out: MomentumVec<T>,
    pub m: T,
    pub mu: T,
    pub g: T,
    /// `(r₁, r₂, r′₁, r′₂)`.
    pub spins: [Spin; 4],
}

impl<T: Real> MollerKinematics<T> {
    /// All momenta zero, all spins up.
    pub fn at_rest(m: T, mu: T, g: T) -> Self {
        Self {
            p1: MomentumVec::zero(),
            p2: MomentumVec::zero(),
            p1_out: MomentumVec::zero(),
            p2_out: MomentumVec::zero(),
            m,
            mu,
            g,
            spins: [Spin::Up; 4],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > T::zero() && self.m.is_finite()) {
            return Err(Error::domain(
                "MollerKinematics",
                format!("fermion mass must be positive, got {}", self.m),
            ));
        }
        if !(self.mu >= T::zero() && self.mu.is_finite()) {
            return Err(Error::domain(
                "MollerKinematics",
                format!("boson mass must be non-negative, got {}", self.mu),
            ));
        }
        if !self.g.is_finite() {
            return Err(Error::domain("MollerKinematics", "coupling must be finite"));
        }
        let finite = [self.p1, self.p2, self.p1_out, self.p2_out]
            .iter()
            .all(|p| p.components().iter().all(|c| c.is_finite()));
        if !finite {
            return Err(Error::domain("MollerKinematics", "momenta must be finite"));
        }
        Ok(())
    }

    /// `(E₁, E₂, E′₁, E′₂)`.
    pub fn energies(&self) -> Result<[T; 4]> {
        Ok([
            energy(&self.p1, self.m)?,
            energy(&self.p2, self.m)?,
            energy(&self.p1_out, self.m)?,
            energy(&self.p2_out, self.m)?,
        ])
    }

    /// `|E′₁ + E′₂ − E₁ − E₂|`; the energy delta itself is not evaluated.
    pub fn conservation_defect(&self) -> Result<T> {
        let [e1, e2, e1o, e2o] = self.energies()?;
        Ok((e1o + e2o - e1 - e2).abs())
    }

    /// Every external momentum satisfies `‖p‖ < m/5`.
    pub fn low_momentum_valid(&self) -> bool {
        let limit = self.m / lit(5.0);
        [self.p1, self.p2, self.p1_out, self.p2_out]
            .iter()
            .all(|p| p.norm() < limit)
    }

    /// `r₁ = r′₁` and `r₂ = r′₂`.
    pub fn spins_match(&self) -> bool {
        self.spins[0] == self.spins[2] && self.spins[1] == self.spins[3]
    }

    /// `(g²/4π)·m²/√(E′₁E′₂E₁E₂)`.
    pub fn prefactor(&self) -> Result<T> {
        let [e1, e2, e1o, e2o] = self.energies()?;
        let coupling = self.g * self.g / (lit::<T>(4.0) * T::PI());
        Ok(coupling * self.m * self.m / (e1 * e2 * e1o * e2o).sqrt())
    }
}

/// The discrete reduced element with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollerElement<T> {
    pub value: Complex<T>,
    /// Quadrature refinement disagreement.
    pub err_estimate: f64,
    /// `|M(N) − M(N−2)|`: the contribution of the outermost two index shells.
    pub truncation_tail: f64,
    /// `truncation_tail > cfg.tol`.
    pub truncation_warning: bool,
    pub conservation_defect: T,
    pub low_momentum_valid: bool,
}

/// `aⱼ(n) = ξₙ(pⱼ)·ξ̄ₙ(p′ⱼ)` for `n ≤ N` on each axis.
fn vertex_coefficients<T: Real>(p: &MomentumVec<T>, p_out: &MomentumVec<T>, n_max: usize) -> [Vec<Complex<T>>; 3] {
    [0, 1, 2].map(|j| {
        let (a, b) = (xi_all(n_max, p[j]), xi_all(n_max, p_out[j]));
        a.iter().zip(&b).map(|(x, y)| *x * y.conj()).collect()
    })
}

/// `Σ_{n,n̂ ≤ cut} a(n)·i^{n−n̂}·Q(n,n̂)·b(n̂)` for one axis.
fn axis_bilinear<T: Real>(a: &[Complex<T>], q: &[T], b: &[Complex<T>], size: usize, cut: usize) -> Complex<T> {
    let rows: Vec<Complex<T>> = (0..=cut)
        .map(|n| {
            let terms: Vec<Complex<T>> = (0..=cut)
                .filter(|nh| (n + nh) % 2 == 0)
                .map(|nh| {
                    let phase = (n + 4 * size - nh) % 4;
                    a[n] * times_i_pow(q[n * size + nh], phase) * b[nh]
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&rows)
}

/// `Σ Aₙ·G#(n,n̂)·B_n̂` at cutoffs `N` and `N − 2` in one pass.
fn double_sum<T: Real>(
    a: &[Vec<Complex<T>>; 3],
    b: &[Vec<Complex<T>>; 3],
    mu: T,
    n_max: usize,
    per_panel: usize,
) -> Result<(Complex<T>, Complex<T>)> {
    let size = n_max + 1;
    let hk = HeatKernel::new(mu, n_max, 6 * n_max, per_panel)?;
    let lower = n_max.saturating_sub(2);
    let mut full = Vec::with_capacity(hk.len());
    let mut trimmed = Vec::with_capacity(hk.len());
    for i in 0..hk.len() {
        let q = hk.overlap_matrix(i, n_max);
        let w = hk.weight(i);
        let mut f = Complex::new(w, T::zero());
        let mut t = Complex::new(w, T::zero());
        for j in 0..3 {
            f = f * axis_bilinear(&a[j], &q, &b[j], size, n_max);
            t = t * axis_bilinear(&a[j], &q, &b[j], size, lower);
        }
        full.push(f);
        trimmed.push(t);
    }
    Ok((pairwise_sum(&full), pairwise_sum(&trimmed)))
}

/// The discrete Møller reduced element with the `k`-integral done first through `G#`.
///
/// Mismatched spins give exactly zero.
pub fn moller_reduced_element<T: Real>(
    kin: &MollerKinematics<T>,
    trunc: VertexTruncation,
    cfg: &QuadratureConfig,
) -> Result<MollerElement<T>> {
    kin.validate()?;
    cfg.validate()?;
    let conservation_defect = kin.conservation_defect()?;
    let low_momentum_valid = kin.low_momentum_valid();
    if !kin.spins_match() {
        return Ok(MollerElement {
            value: Complex::new(T::zero(), T::zero()),
            err_estimate: 0.0,
            truncation_tail: 0.0,
            truncation_warning: false,
            conservation_defect,
            low_momentum_valid,
        });
    }
    let n_max = trunc.n_max;
    let a = vertex_coefficients(&kin.p1, &kin.p1_out, n_max);
    let b = vertex_coefficients(&kin.p2, &kin.p2_out, n_max);
    let pre = kin.prefactor()?;
    let mut tail = 0.0;
    let (value, err_estimate) = refine_with(cfg, "moller_reduced_element", |c| {
        let (full, trimmed) = double_sum(&a, &b, kin.mu, n_max, c.gh_nodes / 2)?;
        tail = ((full - trimmed) * pre).norm().to_f64().unwrap_or(f64::NAN);
        Ok(full * pre)
    })?;
    Ok(MollerElement {
        value,
        err_estimate,
        truncation_tail: tail,
        truncation_warning: !(tail <= cfg.tol),
        conservation_defect,
        low_momentum_valid,
    })
}

/// The same truncated element with the order of operations swapped: the vertex
/// sums are formed first as functions of `k`, then the `k`-integral
///
/// ```text
/// ∫ ∏ⱼ [Σₙ aⱼ(n)ξₙ(kⱼ)]·[Σ_n̂ bⱼ(n̂)ξ̄_n̂(kⱼ)] / (k·k + μ²) d³k
/// ```
///
/// is done by an `N³` tensor Gauss–Hermite rule. Requires `μ > 0`.
pub fn moller_oracle<T: Real>(
    kin: &MollerKinematics<T>,
    trunc: VertexTruncation,
    cfg: &QuadratureConfig,
) -> Result<GreensValue<T>> {
    kin.validate()?;
    if !(kin.mu > T::zero()) {
        return Err(Error::domain(
            "moller_oracle",
            "tensor quadrature needs a positive boson mass",
        ));
    }
    if !kin.spins_match() {
        return Ok(GreensValue {
            value: Complex::new(T::zero(), T::zero()),
            err_estimate: 0.0,
        });
    }
    let n_max = trunc.n_max;
    let a = vertex_coefficients(&kin.p1, &kin.p1_out, n_max);
    let b = vertex_coefficients(&kin.p2, &kin.p2_out, n_max);
    let pre = kin.prefactor()?;
    let mu2 = kin.mu * kin.mu;
    let (value, err_estimate) = refine_with(cfg, "moller_oracle", |c| {
        let rule = GaussHermite::<T>::new(c.gh_nodes)?;
        let x = rule.nodes();
        // per axis and node: w̃·[Σ a(n)ξₙ(x)]·[Σ b(n̂)ξ̄_n̂(x)]
        let f: Vec<Vec<Complex<T>>> = (0..3)
            .map(|j| {
                x.iter()
                    .zip(rule.scaled_weights())
                    .map(|(&k, &w)| {
                        let xs = xi_all(n_max, k);
                        let sa: Vec<Complex<T>> = (0..=n_max).map(|n| a[j][n] * xs[n]).collect();
                        let sb: Vec<Complex<T>> = (0..=n_max).map(|n| b[j][n] * xs[n].conj()).collect();
                        pairwise_sum(&sa) * pairwise_sum(&sb) * w
                    })
                    .collect()
            })
            .collect();
        let slabs: Vec<Complex<T>> = (0..x.len())
            .map(|i| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for jj in 0..x.len() {
                    let fij = f[0][i] * f[1][jj];
                    let r2 = x[i] * x[i] + x[jj] * x[jj] + mu2;
                    for kk in 0..x.len() {
                        acc = acc + fij * f[2][kk] / (r2 + x[kk] * x[kk]);
                    }
                }
                acc
            })
            .collect();
        Ok(pairwise_sum(&slabs) * pre)
    })?;
    Ok(GreensValue { value, err_estimate })
}

/// Continuum counterpart `(g²/4π)·m²/√(E′₁E′₂E₁E₂)/(‖q‖² + μ²)` with `q = p₁ − p′₁`.
pub fn continuum_moller_reduced<T: Real>(kin: &MollerKinematics<T>) -> Result<Complex<T>> {
    kin.validate()?;
    if !kin.spins_match() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let q = kin.p1 - kin.p1_out;
    let denom = q.norm_sqr() + kin.mu * kin.mu;
    if denom == T::zero() {
        return Err(Error::domain(
            "continuum_moller_reduced",
            "zero momentum transfer with a massless boson: the continuum propagator diverges",
        ));
    }
    Ok(Complex::new(kin.prefactor()? / denom, T::zero()))
}
