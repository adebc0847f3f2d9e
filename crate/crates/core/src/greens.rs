//! Static discrete Green's functions `G#(n, n̂; μ)` and the potentials built from them.
//!
//! `G#(n, n̂; μ) = ∫ ∏ⱼ ξ_{nʲ}(kⱼ)ξ̄_{n̂ʲ}(kⱼ) / (k·k + μ²) d³k`.
//!
//! The main evaluator writes `1/(k² + μ²) = ∫₀^∞ e^{−t(k² + μ²)} dt` and
//! substitutes `v = (1 + t)^{−1/2}`, giving
//!
//! ```text
//! G#(n, n̂; μ) = 2 ∫₀¹ e^{−μ²(1/v² − 1)} ∏ⱼ Qⱼ(v) dv,
//! Qⱼ(v) = i^{nʲ−n̂ʲ} π^{−1/2} ∫ e^{−u²} h̃_{nʲ}(uv) h̃_{n̂ʲ}(uv) du,
//! ```
//!
//! with `h̃ₙ = Hₙ/(2^{n/2}√n!)`. Each `Qⱼ` is a polynomial in `v`, integrated
//! exactly by Gauss–Hermite in `u`; the `v` integral is smooth (a polynomial
//! when `μ = 0`) and is done by Gauss–Legendre on geometrically shrinking
//! panels toward `v = 0`, where the Gaussian factor switches off.

use std::collections::HashMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{Axis, GridIndex};
use crate::hermite::{normalized_hermite_all, xi_all, HermiteIndex};
use crate::quadrature::{refine_with, GaussHermite, GaussLegendre, QuadratureConfig, SinhTrapezoid};
use crate::scalar::{frac_1_sqrt_pi, from_usize, lit, times_i_pow, Real};
use crate::special::erfcx;
use crate::sum::pairwise_sum;

pub use crate::special::{euler_beta, incomplete_gamma_neg_half};

/// A complex integral together with its refinement disagreement `|v(N) − v(2N)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensValue<T> {
    pub value: Complex<T>,
    pub err_estimate: f64,
}

/// A real value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub err_estimate: f64,
}

/// Boson mass `μ ≥ 0`, fermion mass `m > 0` and coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassParam<T> {
    pub mu: T,
    pub m: T,
    pub g: T,
}

impl<T: Real> MassParam<T> {
    pub fn new(mu: T, m: T, g: T) -> Result<Self> {
        check_boson_mass(mu)?;
        if !(m > T::zero() && m.is_finite()) {
            return Err(Error::domain(
                "MassParam",
                format!("fermion mass must be positive, got {m}"),
            ));
        }
        if !g.is_finite() {
            return Err(Error::domain("MassParam", format!("coupling must be finite, got {g}")));
        }
        Ok(Self { mu, m, g })
    }
}

fn check_boson_mass<T: Real>(mu: T) -> Result<()> {
    if mu >= T::zero() && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "boson mass",
            format!("must be finite and non-negative, got {mu}"),
        ))
    }
}

fn check_positive_mu<T: Real>(what: &'static str, mu: T) -> Result<()> {
    if mu > T::zero() && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, format!("boson mass must be positive, got {mu}")))
    }
}

/// `i^{Σⱼ(nʲ − n̂ʲ)}` as an exponent mod 4.
fn phase_exponent(n: GridIndex, nhat: GridIndex) -> usize {
    let d: isize = (0..3).map(|j| n.0[j] as isize - nhat.0[j] as isize).sum();
    d.rem_euclid(4) as usize
}

fn parity_matches(n: GridIndex, nhat: GridIndex) -> bool {
    (0..3).all(|j| (n.0[j] + nhat.0[j]) % 2 == 0)
}

/// Below `v_min = μ/√(40 + μ²)` the factor `e^{−μ²(1/v² − 1)}` is under `e^{−40}`.
const HEAT_KERNEL_CUTOFF: f64 = 40.0;

/// Quadrature for the heat-kernel representation: `v` nodes with weights
/// `2e^{−μ²(1/v² − 1)}·dv`, and an exact Gauss–Hermite rule for the `u` overlaps.
#[derive(Debug, Clone)]
pub(crate) struct HeatKernel<T> {
    v: Vec<T>,
    w: Vec<T>,
    u: Vec<T>,
    u_weights: Vec<T>,
}

impl<T: Real> HeatKernel<T> {
    /// `max_order`: largest single Hermite order on any axis; `degree`: the
    /// polynomial degree in `v` of the full product `∏ⱼ Qⱼ`.
    pub(crate) fn new(mu: T, max_order: usize, degree: usize, per_panel: usize) -> Result<Self> {
        let per_panel = per_panel.max(degree / 2 + 1);
        let gl = GaussLegendre::<T>::new(per_panel)?;
        let gh = GaussHermite::<T>::new((max_order + 1).max(QuadratureConfig::MIN_NODES))?;
        let mut edges = vec![T::one()];
        if mu > T::zero() {
            let v_min = mu / (lit::<T>(HEAT_KERNEL_CUTOFF) + mu * mu).sqrt();
            let half = lit::<T>(0.5);
            while *edges.last().expect("non-empty") * half > v_min {
                let next = *edges.last().expect("non-empty") * half;
                edges.push(next);
            }
            edges.push(v_min);
        } else {
            edges.push(T::zero());
        }
        edges.reverse();
        let two = lit::<T>(2.0);
        let mut v = Vec::new();
        let mut w = Vec::new();
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (mid, half) = ((a + b) / two, (b - a) / two);
            for (&x, &wx) in gl.nodes().iter().zip(gl.weights()) {
                let vv = mid + half * x;
                let damp = if mu > T::zero() {
                    (-(mu * mu) * (T::one() - vv * vv) / (vv * vv)).exp()
                } else {
                    T::one()
                };
                v.push(vv);
                w.push(two * half * wx * damp);
            }
        }
        Ok(Self {
            v,
            w,
            u: gh.nodes().to_vec(),
            u_weights: gh.weights().to_vec(),
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.v.len()
    }

    pub(crate) fn weight(&self, i: usize) -> T {
        self.w[i]
    }

    /// `h̃ₖ(uᵢ·v)` for `k ≤ n_max`, one vector per `u` node.
    fn hermite_table(&self, v: T, n_max: usize) -> Vec<Vec<T>> {
        self.u.iter().map(|&u| normalized_hermite_all(n_max, u * v)).collect()
    }

    /// Real part of `Qⱼ(v)` (phase removed) for one index pair.
    fn overlap(&self, table: &[Vec<T>], n: usize, nhat: usize) -> T {
        let terms: Vec<T> = table
            .iter()
            .zip(&self.u_weights)
            .map(|(h, &w)| w * h[n] * h[nhat])
            .collect();
        pairwise_sum(&terms) * frac_1_sqrt_pi::<T>()
    }

    /// The `(n_max+1)²` overlaps of node `i`, row-major, phase removed.
    pub(crate) fn overlap_matrix(&self, i: usize, n_max: usize) -> Vec<T> {
        let table = self.hermite_table(self.v[i], n_max);
        let size = n_max + 1;
        let mut out = vec![T::zero(); size * size];
        for a in 0..size {
            for b in a..size {
                if (a + b) % 2 == 1 {
                    continue;
                }
                let q = self.overlap(&table, a, b);
                out[a * size + b] = q;
                out[b * size + a] = q;
            }
        }
        out
    }
}

fn heat_kernel_value<T: Real>(n: GridIndex, nhat: GridIndex, mu: T, per_panel: usize) -> Result<Complex<T>> {
    let max_order = (0..3).map(|j| n.0[j].max(nhat.0[j])).max().unwrap_or(0);
    let degree = n.total() + nhat.total();
    let hk = HeatKernel::new(mu, max_order, degree, per_panel)?;
    let terms: Vec<T> = (0..hk.len())
        .map(|i| {
            let v = hk.v[i];
            let mut prod = hk.weight(i);
            for axis in Axis::ALL {
                let (a, b) = (n.get(axis), nhat.get(axis));
                let table = hk.hermite_table(v, a.max(b));
                prod = prod * hk.overlap(&table, a, b);
            }
            prod
        })
        .collect();
    Ok(times_i_pow(pairwise_sum(&terms), phase_exponent(n, nhat)))
}

/// `G#(n, n̂; μ)` for `μ ≥ 0` via the heat-kernel representation.
///
/// Pairs violating `nʲ ≡ n̂ʲ (mod 2)` on some axis return exactly zero.
pub fn g_sharp<T: Real>(n: GridIndex, nhat: GridIndex, mu: T, cfg: &QuadratureConfig) -> Result<GreensValue<T>> {
    check_boson_mass(mu)?;
    cfg.validate()?;
    if !parity_matches(n, nhat) {
        return Ok(GreensValue {
            value: Complex::new(T::zero(), T::zero()),
            err_estimate: 0.0,
        });
    }
    let (value, err_estimate) = refine_with(cfg, "g_sharp", |c| heat_kernel_value(n, nhat, mu, c.gh_nodes / 2))?;
    Ok(GreensValue { value, err_estimate })
}

/// `G#(n, n̂; μ)` by a plain `N³` tensor Gauss–Hermite rule on `1/(k·k + μ²)`.
///
/// Independent of [`g_sharp`] and much slower to converge for small `μ`,
/// where the integrand has poles at `|k| = ±iμ`; requires `μ > 0`.
pub fn g_sharp_tensor<T: Real>(n: GridIndex, nhat: GridIndex, mu: T, cfg: &QuadratureConfig) -> Result<GreensValue<T>> {
    check_positive_mu("g_sharp_tensor", mu)?;
    let (value, err_estimate) = refine_with(cfg, "g_sharp_tensor", |c| {
        let rule = GaussHermite::<T>::new(c.gh_nodes)?;
        let x = rule.nodes();
        let fac: Vec<Vec<Complex<T>>> = (0..3)
            .map(|j| {
                x.iter()
                    .zip(rule.scaled_weights())
                    .map(|(&xi_node, &w)| {
                        let xs = xi_all(n.0[j].max(nhat.0[j]), xi_node);
                        xs[n.0[j]] * xs[nhat.0[j]].conj() * w
                    })
                    .collect()
            })
            .collect();
        let mu2 = mu * mu;
        let slabs: Vec<Complex<T>> = (0..x.len())
            .map(|a| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for b in 0..x.len() {
                    let ab = fac[0][a] * fac[1][b];
                    let r2 = x[a] * x[a] + x[b] * x[b];
                    for c3 in 0..x.len() {
                        acc = acc + ab * fac[2][c3] / (r2 + x[c3] * x[c3] + mu2);
                    }
                }
                acc
            })
            .collect();
        Ok(pairwise_sum(&slabs))
    })?;
    Ok(GreensValue { value, err_estimate })
}

/// `∫₋₁¹ h̃ₙ(k·y) dy` by Gauss–Legendre (exact: the integrand is a degree-`n` polynomial in `y`).
fn angular_integral<T: Real>(rule: &GaussLegendre<T>, n: HermiteIndex, k: T) -> T {
    let terms: Vec<T> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&y, &w)| w * normalized_hermite_all(n, k * y)[n])
        .collect();
    pairwise_sum(&terms)
}

fn angular_rule<T: Real>(n: HermiteIndex) -> Result<GaussLegendre<T>> {
    GaussLegendre::new((n / 2 + 1).max(QuadratureConfig::MIN_NODES))
}

/// `G#((n¹,0,0), (0,0,0); μ)` by the spherical reduction
///
/// ```text
/// iⁿ (2/√π) ∫₀^∞ e^{−k²} k²/(k² + μ²) ∫₋₁¹ h̃ₙ(ky) dy dk,
/// ```
///
/// with the radial integral on a `k = μ·sinh(s)` trapezoidal rule of
/// `cfg.radial_nodes` intervals. Requires `μ > 0`.
pub fn g_sharp_axis<T: Real>(n1: HermiteIndex, mu: T, cfg: &QuadratureConfig) -> Result<GreensValue<T>> {
    check_positive_mu("g_sharp_axis", mu)?;
    let angular = angular_rule::<T>(n1)?;
    let k_max = from_usize::<T>(2 * n1 + 1).sqrt() + lit(8.0);
    let (value, err_estimate) = refine_with(cfg, "g_sharp_axis", |c| {
        let radial = SinhTrapezoid::new(mu, k_max, c.radial_nodes)?;
        let integral = radial.integrate(|k| {
            let k2 = k * k;
            (-k2).exp() * k2 / (k2 + mu * mu) * angular_integral(&angular, n1, k)
        });
        Ok(integral * lit::<T>(2.0) * frac_1_sqrt_pi::<T>())
    })?;
    Ok(GreensValue {
        value: times_i_pow(value, n1),
        err_estimate,
    })
}

/// Non-singular Yukawa coincidence value `μ·e^{μ²}·Γ(−1/2, μ²) = 2 − 2√π·μ·erfcx(μ)`;
/// equals 2 at `μ = 0`.
pub fn yukawa_coincidence<T: Real>(mu: T) -> Result<T> {
    check_boson_mass(mu)?;
    let two = lit::<T>(2.0);
    Ok(two - two * T::PI().sqrt() * mu * erfcx(mu))
}

/// Closed form `G#((2n¹,0,0), 0; 0) = 2^{n¹+1}·n¹! / ((2n¹+1)·√((2n¹)!))` for the half-index `n¹`.
///
/// Evaluated as `2/(2n¹+1)·√(∏ₖ 2k/(2k−1))`, which cancels the factorials
/// term by term; the product grows only like `√(πn¹)`.
pub fn coulomb_even<T: Real>(n1: HermiteIndex) -> T {
    let mut ratio = T::one();
    for k in 1..=n1 {
        let kf: T = from_usize(k);
        ratio = ratio * (kf + kf) / (kf + kf - T::one());
    }
    lit::<T>(2.0) * ratio.sqrt() / from_usize::<T>(2 * n1 + 1)
}

/// `G#((n,0,0), 0; 0) = iⁿ π^{−1/2} ∫_ℝ e^{−k²} ∫₋₁¹ h̃ₙ(ky) dy dk` by Gauss–Hermite
/// in `k` and Gauss–Legendre in `y`, for the grid index `n` (odd `n` give zero).
pub fn coulomb_quadrature<T: Real>(n: HermiteIndex, cfg: &QuadratureConfig) -> Result<GreensValue<T>> {
    let angular = angular_rule::<T>(n)?;
    let (value, err_estimate) = refine_with(cfg, "coulomb_quadrature", |c| {
        let rule = GaussHermite::<T>::new(c.gh_nodes.max(n / 2 + 1))?;
        Ok(rule.integrate(|k| angular_integral(&angular, n, k)) * frac_1_sqrt_pi::<T>())
    })?;
    Ok(GreensValue {
        value: times_i_pow(value, n),
        err_estimate,
    })
}

/// `W#(n¹, μ) = G#((n¹,0,0), (0,0,0); μ)`: the spherical reduction for `μ > 0`,
/// the closed forms for `μ = 0`. Odd `n¹` are exactly zero by parity.
pub fn w_sharp<T: Real>(n1: HermiteIndex, mu: T, cfg: &QuadratureConfig) -> Result<Estimate<T>> {
    check_boson_mass(mu)?;
    if n1 % 2 == 1 {
        return Ok(Estimate {
            value: T::zero(),
            err_estimate: 0.0,
        });
    }
    if mu == T::zero() {
        return Ok(Estimate {
            value: coulomb_even(n1 / 2),
            err_estimate: 0.0,
        });
    }
    let g = g_sharp_axis(n1, mu, cfg)?;
    Ok(Estimate {
        value: g.value.re,
        err_estimate: g.err_estimate,
    })
}

/// `V#(n¹; μ) = −g²·W#(n¹, μ)`.
pub fn v_sharp<T: Real>(n1: HermiteIndex, mu: T, g: T, cfg: &QuadratureConfig) -> Result<Estimate<T>> {
    let w = w_sharp(n1, mu, cfg)?;
    Ok(Estimate {
        value: -g * g * w.value,
        err_estimate: (g * g).to_f64().unwrap_or(f64::NAN) * w.err_estimate,
    })
}

/// Continuum Yukawa potential `−(g²/4π)·e^{−μr}/r`.
pub fn continuum_yukawa<T: Real>(r: T, mu: T, g: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::domain(
            "continuum_yukawa",
            format!("r must be positive, got {r}"),
        ));
    }
    check_boson_mass(mu)?;
    Ok(-g * g / (lit::<T>(4.0) * T::PI()) * (-mu * r).exp() / r)
}

/// `V(r) = −(1/2π²r)·∫₀^∞ k·sin(rk)/(k² + μ²) dk` evaluated numerically (`g = 1`).
///
/// `k/(k² + μ²) = 1/k − μ²/(k(k² + μ²))`: the first part gives `π/2` exactly,
/// the second is absolutely convergent and is integrated with Gauss–Legendre
/// per half-period of `sin(rk)` up to a cutoff `K` whose tail is bounded by
/// `2μ²/(rK(K² + μ²))`. The bound is added to `err_estimate`.
pub fn continuum_yukawa_oracle<T: Real>(r: T, mu: T, cfg: &QuadratureConfig) -> Result<Estimate<T>> {
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::domain(
            "continuum_yukawa_oracle",
            format!("r must be positive, got {r}"),
        ));
    }
    check_positive_mu("continuum_yukawa_oracle", mu)?;
    let tol: T = lit(cfg.tol);
    let mu2 = mu * mu;
    // 2μ²/(rK³) ≤ tol
    let k_cut = (lit::<T>(2.0) * mu2 / (r * tol)).cbrt().max(lit::<T>(10.0) * mu);
    let half_period = T::PI() / r;
    let panels = (k_cut / half_period).ceil().to_usize().unwrap_or(usize::MAX);
    if panels > 50_000_000 {
        return Err(Error::NonConvergence {
            what: "continuum_yukawa_oracle",
            disagreement: f64::INFINITY,
            limit: cfg.tol,
        });
    }
    let k_end = half_period * from_usize(panels);
    let tail = lit::<T>(2.0) * mu2 / (r * k_end * (k_end * k_end + mu2));
    let (remainder, err) = refine_with(cfg, "continuum_yukawa_oracle", |c| {
        let rule = GaussLegendre::<T>::new((c.gh_nodes / 4).max(QuadratureConfig::MIN_NODES))?;
        let parts: Vec<T> = (0..panels)
            .map(|p| {
                let a = half_period * from_usize(p);
                // near the poles at ±iμ, split into sub-panels no wider than μ
                let pieces = if a < lit::<T>(20.0) * mu {
                    (half_period / mu).ceil().to_usize().unwrap_or(1).max(1)
                } else {
                    1
                };
                let width = half_period / from_usize(pieces);
                let sub: Vec<T> = (0..pieces)
                    .map(|q| {
                        let lo = a + width * from_usize(q);
                        // sin(rk)/k → r as k → 0; Gauss nodes never hit k = 0
                        rule.integrate(lo, lo + width, |k| (r * k).sin() / (k * (k * k + mu2)))
                    })
                    .collect();
                pairwise_sum(&sub)
            })
            .collect();
        Ok(pairwise_sum(&parts))
    })?;
    let integral = T::FRAC_PI_2() - mu2 * remainder;
    let scale = T::one() / (lit::<T>(2.0) * T::PI() * T::PI() * r);
    Ok(Estimate {
        value: -scale * integral,
        err_estimate: (scale * mu2 * tail).to_f64().unwrap_or(f64::NAN) + err,
    })
}

/// Memoized `G#(·, ·; μ)` at fixed `μ` and configuration.
#[derive(Debug, Clone)]
pub struct GreensTable<T> {
    mu: T,
    cfg: QuadratureConfig,
    cache: HashMap<(GridIndex, GridIndex), GreensValue<T>>,
}

impl<T: Real> GreensTable<T> {
    pub fn new(mu: T, cfg: QuadratureConfig) -> Result<Self> {
        check_boson_mass(mu)?;
        cfg.validate()?;
        Ok(Self {
            mu,
            cfg,
            cache: HashMap::new(),
        })
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn get(&mut self, n: GridIndex, nhat: GridIndex) -> Result<GreensValue<T>> {
        if let Some(v) = self.cache.get(&(n, nhat)) {
            return Ok(*v);
        }
        let v = g_sharp(n, nhat, self.mu, &self.cfg)?;
        self.cache.insert((n, nhat), v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }

    /// `|δ^{ab}Δ#ₐΔ#_b G#(·, n̂) − μ²G#(n, n̂) + δ_{nn̂}|`, differences in the first argument.
    ///
    /// Per axis `Δ#Δ# f(n) = ½[√((n+1)(n+2)) f(n+2) − (2n+1) f(n) + √(n(n−1)) f(n−2)]`,
    /// so the stencil touches seven distinct points.
    pub fn difference_equation_residual(&mut self, n: GridIndex, nhat: GridIndex) -> Result<T> {
        let half = lit::<T>(0.5);
        let center = self.get(n, nhat)?.value;
        let mut lap = Complex::new(T::zero(), T::zero());
        for axis in Axis::ALL {
            let k = n.get(axis);
            let kf: T = from_usize(k);
            let up = self.get(n.with(axis, k + 2), nhat)?.value;
            let mut term = up * ((kf + T::one()) * (kf + lit(2.0))).sqrt() - center * (lit::<T>(2.0) * kf + T::one());
            if k >= 2 {
                let down = self.get(n.with(axis, k - 2), nhat)?.value;
                term = term + down * (kf * (kf - T::one())).sqrt();
            }
            lap = lap + term * half;
        }
        let source = if n == nhat { T::one() } else { T::zero() };
        Ok((lap - center * (self.mu * self.mu) + source).norm())
    }
}

/// Residual of the static difference equation at one `(n, n̂)`; see
/// [`GreensTable::difference_equation_residual`].
pub fn difference_equation_residual<T: Real>(
    n: GridIndex,
    nhat: GridIndex,
    mu: T,
    cfg: &QuadratureConfig,
) -> Result<T> {
    GreensTable::new(mu, *cfg)?.difference_equation_residual(n, nhat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn origin() -> GridIndex {
        GridIndex::ORIGIN
    }

    #[test]
    fn yukawa_coincidence_values() {
        assert_relative_eq!(
            yukawa_coincidence(1.0f64).unwrap(),
            0.484_255_687_717_375_6,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            yukawa_coincidence(1e-3f64).unwrap(),
            1.996_459_088_755_946_1,
            max_relative = 1e-14
        );
        assert_eq!(yukawa_coincidence(0.0f64).unwrap(), 2.0);
        assert!(yukawa_coincidence(-1.0f64).is_err());
        // agrees with μ·e^{μ²}·Γ(−1/2, μ²)
        for &mu in &[0.25f64, 0.5, 1.0, 2.0, 4.0] {
            let direct = mu * (mu * mu).exp() * incomplete_gamma_neg_half(mu * mu).unwrap();
            assert_relative_eq!(yukawa_coincidence(mu).unwrap(), direct, max_relative = 1e-12);
        }
    }

    #[test]
    fn g_sharp_coincidence_matches_closed_form() {
        for &mu in &[0.0f64, 1e-3, 0.25, 0.5, 1.0, 2.0, 4.0] {
            let g = g_sharp(origin(), origin(), mu, &cfg()).unwrap();
            assert_relative_eq!(g.value.re, yukawa_coincidence(mu).unwrap(), max_relative = 1e-12);
            assert_eq!(g.value.im, 0.0);
        }
    }

    #[test]
    fn g_sharp_examples() {
        let one = g_sharp(GridIndex::new(1, 0, 0), origin(), 1.0f64, &cfg()).unwrap();
        assert_eq!(one.value, Complex::new(0.0, 0.0));
        let near_coulomb = g_sharp(GridIndex::new(2, 0, 0), origin(), 1e-3f64, &cfg()).unwrap();
        assert!((near_coulomb.value.re - coulomb_even::<f64>(1)).abs() < 5e-3);
        let coulomb = g_sharp(GridIndex::new(2, 0, 0), origin(), 0.0f64, &cfg()).unwrap();
        assert_relative_eq!(coulomb.value.re, coulomb_even::<f64>(1), max_relative = 1e-13);
        let c4 = g_sharp(GridIndex::new(4, 0, 0), origin(), 0.0f64, &cfg()).unwrap();
        assert_relative_eq!(c4.value.re, coulomb_even::<f64>(2), max_relative = 1e-13);
    }

    #[test]
    fn g_sharp_agrees_with_tensor_rule() {
        let tcfg = QuadratureConfig {
            gh_nodes: 48,
            tol: 1e-6,
            ..cfg()
        };
        let cases = [
            (origin(), origin()),
            (GridIndex::new(2, 0, 0), origin()),
            (GridIndex::new(1, 1, 0), GridIndex::new(1, 1, 2)),
            (GridIndex::new(3, 0, 1), GridIndex::new(1, 2, 1)),
        ];
        for (n, nhat) in cases {
            let a = g_sharp(n, nhat, 2.0f64, &cfg()).unwrap().value;
            let b = g_sharp_tensor(n, nhat, 2.0f64, &tcfg).unwrap().value;
            assert!((a - b).norm() < 1e-9, "{n} {nhat}: {a} vs {b}");
        }
    }

    #[test]
    fn axis_reduction_examples() {
        let a0 = g_sharp_axis(0, 1.0f64, &cfg()).unwrap();
        assert_relative_eq!(a0.value.re, yukawa_coincidence(1.0).unwrap(), max_relative = 1e-10);
        assert!(g_sharp_axis(1, 0.5f64, &cfg()).unwrap().value.norm() < 1e-14);
        for n1 in [2usize, 4, 6, 10] {
            let ax = g_sharp_axis(n1, 1.0f64, &cfg()).unwrap();
            let full = g_sharp(GridIndex::new(n1, 0, 0), origin(), 1.0, &cfg()).unwrap();
            assert!((ax.value - full.value).norm() < 1e-10, "{n1}");
        }
        assert!(g_sharp_axis(0, 0.0f64, &cfg()).is_err());
    }

    #[test]
    fn coulomb_closed_form() {
        assert_eq!(coulomb_even::<f64>(0), 2.0);
        assert_relative_eq!(coulomb_even::<f64>(1), 4.0 / (3.0 * 2f64.sqrt()), max_relative = 1e-14);
        assert_relative_eq!(
            coulomb_even::<f64>(2),
            16.0 / (5.0 * 24f64.sqrt()),
            max_relative = 1e-14
        );
        // large indices stay finite
        let big = coulomb_even::<f64>(200);
        assert!(big.is_finite() && big > 0.0);
    }

    #[test]
    fn coulomb_quadrature_values() {
        assert_relative_eq!(
            coulomb_quadrature::<f64>(0, &cfg()).unwrap().value.re,
            2.0,
            max_relative = 1e-12
        );
        assert!(coulomb_quadrature::<f64>(3, &cfg()).unwrap().value.norm() < 1e-10);
        for n1 in 0..=10 {
            let q = coulomb_quadrature::<f64>(2 * n1, &cfg()).unwrap().value;
            assert_relative_eq!(q.re, coulomb_even::<f64>(n1), max_relative = 1e-10);
            assert_eq!(q.im, 0.0);
        }
    }

    #[test]
    fn w_and_v_sharp() {
        assert_eq!(w_sharp(0, 0.0f64, &cfg()).unwrap().value, 2.0);
        assert_relative_eq!(
            w_sharp(2, 0.0f64, &cfg()).unwrap().value,
            0.942_809_041_582_063_1,
            max_relative = 1e-14
        );
        assert_eq!(w_sharp(3, 0.0f64, &cfg()).unwrap().value, 0.0);
        assert_relative_eq!(
            w_sharp(0, 1.0f64, &cfg()).unwrap().value,
            0.484_255_687_717_375_6,
            max_relative = 1e-10
        );
        assert_eq!(v_sharp(0, 0.0f64, 1.0, &cfg()).unwrap().value, -2.0);
        assert_relative_eq!(
            v_sharp(2, 0.0f64, 2.0, &cfg()).unwrap().value,
            -4.0 * 0.942_809_041_582_063_1,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            v_sharp(0, 1.0f64, 1.0, &cfg()).unwrap().value,
            -0.484_255_687_717_375_6,
            max_relative = 1e-10
        );
    }

    #[test]
    fn w_sharp_is_finite_and_decreasing() {
        for n1 in 0..=40 {
            for &mu in &[0.0f64, 0.5, 1.0, 4.0] {
                assert!(w_sharp(n1, mu, &cfg()).unwrap().value.is_finite());
            }
        }
        let mut prev = f64::INFINITY;
        for i in 0..=39 {
            let mu = 0.1 + 0.1 * i as f64;
            let w = w_sharp(0, mu, &cfg()).unwrap().value;
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn continuum_yukawa_examples() {
        let four_pi = 4.0 * std::f64::consts::PI;
        assert_relative_eq!(
            continuum_yukawa(1.0, 0.0, four_pi.sqrt()).unwrap(),
            -1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            continuum_yukawa(2.0, 1.0, 1.0).unwrap(),
            -(-2.0f64).exp() / (8.0 * std::f64::consts::PI),
            max_relative = 1e-15
        );
        assert!(continuum_yukawa(1e-12, 1.0, 1.0).unwrap() < -1e10);
        assert!(continuum_yukawa(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn continuum_oracle_matches_closed_form() {
        for &(r, mu) in &[(1.0f64, 1.0f64), (0.5, 2.0), (2.0, 0.25), (0.5, 0.25), (2.0, 1.0)] {
            let o = continuum_yukawa_oracle(r, mu, &cfg()).unwrap();
            let want = continuum_yukawa(r, mu, 1.0).unwrap();
            assert_relative_eq!(o.value, want, max_relative = 1e-6);
            assert!(o.err_estimate < 1e-6);
        }
    }

    #[test]
    fn difference_equation_examples() {
        let c = cfg();
        assert!(difference_equation_residual(origin(), origin(), 1.0f64, &c).unwrap() <= 1e-12);
        assert!(difference_equation_residual(GridIndex::new(1, 1, 0), origin(), 1.0f64, &c).unwrap() <= 1e-12);
        let n = GridIndex::new(2, 0, 0);
        assert!(difference_equation_residual(n, n, 0.5f64, &c).unwrap() <= 1e-12);
    }

    #[test]
    fn refinement_failure_is_reported() {
        let tight = QuadratureConfig {
            gh_nodes: 8,
            tol: 1e-30,
            ..cfg()
        };
        let err = g_sharp_tensor(origin(), origin(), 0.25f64, &tight).unwrap_err();
        assert!(matches!(
            err,
            Error::NonConvergence {
                what: "g_sharp_tensor",
                ..
            }
        ));
    }

    #[test]
    fn single_precision_coincidence() {
        let g = g_sharp(origin(), origin(), 1.0f32, &cfg()).unwrap();
        assert!((g.value.re - 0.484_255_7).abs() < 1e-5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn parity_and_symmetry(
            n in prop::array::uniform3(0usize..6),
            m in prop::array::uniform3(0usize..6),
            mu in 0.1f64..3.0,
        ) {
            let (n, m) = (GridIndex(n), GridIndex(m));
            let a = g_sharp(n, m, mu, &cfg()).unwrap();
            let b = g_sharp(m, n, mu, &cfg()).unwrap();
            prop_assert!((a.value - b.value.conj()).norm() <= 1e-13);
            if !parity_matches(n, m) {
                prop_assert!(a.value.norm() <= 1e-10);
            } else {
                prop_assert_eq!(a.value.im, 0.0);
            }
        }
    }
}
