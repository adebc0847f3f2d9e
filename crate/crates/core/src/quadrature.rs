//! Quadrature rules and the configuration shared by every integral in the crate.
//!
//! Gauss–Hermite nodes are found by Newton iteration on the normalized
//! Hermite *functions* (Gaussian factor included) rather than on the
//! polynomials, so rules with several hundred nodes neither overflow nor
//! lose their outer weights. Alongside the usual weights `wᵢ` (which carry
//! `e^{−xᵢ²}`) each rule exposes the scaled weights `wᵢ·e^{xᵢ²}` for
//! integrands that already contain their own Gaussian.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, pi_quarter_inv, Real};
use crate::sum::pairwise_sum;

/// Node counts and tolerances for every integral and sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Gauss–Hermite nodes per axis.
    pub gh_nodes: usize,
    /// Intervals of the radial rule used by the spherically reduced integrals.
    pub radial_nodes: usize,
    /// Accepted refinement disagreement.
    pub tol: f64,
    /// Evaluate a second time with doubled node counts and report the difference.
    pub refine: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            gh_nodes: 64,
            radial_nodes: 400,
            tol: 1e-8,
            refine: true,
        }
    }
}

impl QuadratureConfig {
    pub const MIN_NODES: usize = 8;

    pub fn validate(&self) -> Result<()> {
        if self.gh_nodes < Self::MIN_NODES {
            return Err(Error::domain(
                "QuadratureConfig",
                format!("gh_nodes must be at least {}, got {}", Self::MIN_NODES, self.gh_nodes),
            ));
        }
        if self.radial_nodes < Self::MIN_NODES {
            return Err(Error::domain(
                "QuadratureConfig",
                format!(
                    "radial_nodes must be at least {}, got {}",
                    Self::MIN_NODES,
                    self.radial_nodes
                ),
            ));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::domain(
                "QuadratureConfig",
                format!("tol must be positive, got {}", self.tol),
            ));
        }
        Ok(())
    }

    /// The same configuration with every node count doubled.
    pub fn doubled(&self) -> Self {
        Self {
            gh_nodes: 2 * self.gh_nodes,
            radial_nodes: 2 * self.radial_nodes,
            ..*self
        }
    }

    /// Disagreement above which a refined evaluation is reported as non-converged.
    pub fn failure_limit(&self) -> f64 {
        100.0 * self.tol
    }
}

/// Runs `eval` at `cfg` and, when refinement is on, again at the doubled
/// configuration. Returns the refined value and `|v(N) − v(2N)|`.
pub(crate) fn refine_with<V, F>(cfg: &QuadratureConfig, what: &'static str, mut eval: F) -> Result<(V, f64)>
where
    F: FnMut(&QuadratureConfig) -> Result<V>,
    V: Copy + Distance,
{
    cfg.validate()?;
    let coarse = eval(cfg)?;
    if !cfg.refine {
        return Ok((coarse, 0.0));
    }
    let fine = eval(&cfg.doubled())?;
    let diff = coarse.distance(&fine);
    if !(diff <= cfg.failure_limit()) {
        return Err(Error::NonConvergence {
            what,
            disagreement: diff,
            limit: cfg.failure_limit(),
        });
    }
    Ok((fine, diff))
}

/// Magnitude of the difference between two refinement levels.
pub(crate) trait Distance {
    fn distance(&self, other: &Self) -> f64;
}

impl<T: Real> Distance for T {
    fn distance(&self, other: &Self) -> f64 {
        (*self - *other).abs().to_f64().unwrap_or(f64::NAN)
    }
}

impl<T: Real> Distance for num_complex::Complex<T> {
    fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm().to_f64().unwrap_or(f64::NAN)
    }
}

/// Largest Gauss–Hermite rule accepted; beyond this the outermost Hermite
/// functions underflow in double precision.
pub const MAX_HERMITE_NODES: usize = 600;

/// Gauss–Hermite rule for `∫_ℝ e^{−x²} f(x) dx`.
#[derive(Debug, Clone)]
pub struct GaussHermite<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    scaled_weights: Vec<T>,
}

/// `(ψₙ(x), ψₙ₋₁(x))` for the orthonormal Hermite functions.
fn hermite_function_pair<T: Real>(n: usize, x: T) -> (T, T) {
    let mut prev = T::zero();
    let mut cur = pi_quarter_inv::<T>() * (-(x * x) / lit(2.0)).exp();
    for j in 0..n {
        let next = x * (lit::<T>(2.0) / from_usize(j + 1)).sqrt() * cur
            - (from_usize::<T>(j) / from_usize(j + 1)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

impl<T: Real> GaussHermite<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_HERMITE_NODES {
            return Err(Error::Rule(format!(
                "Gauss-Hermite node count must be in 1..={MAX_HERMITE_NODES}, got {n}"
            )));
        }
        let nf: T = from_usize(n);
        let two_n_sqrt = (lit::<T>(2.0) * nf).sqrt();
        let half = (n + 1) / 2;
        // positive roots, largest first
        let mut roots: Vec<T> = Vec::with_capacity(half);
        let mut z = T::zero();
        for i in 0..half {
            z = match i {
                0 => {
                    let s: T = lit::<T>(2.0) * nf + T::one();
                    s.sqrt() - lit::<T>(1.85575) * s.powf(lit(-0.16667))
                }
                1 => z - lit::<T>(1.14) * nf.powf(lit(0.426)) / z,
                2 => lit::<T>(1.86) * z - lit::<T>(0.86) * roots[0],
                3 => lit::<T>(1.91) * z - lit::<T>(0.91) * roots[1],
                _ => lit::<T>(2.0) * z - roots[i - 2],
            };
            if n % 2 == 1 && i == half - 1 {
                z = T::zero();
                roots.push(z);
                break;
            }
            let mut converged = false;
            for _ in 0..100 {
                let (p, pm) = hermite_function_pair(n, z);
                let dp = two_n_sqrt * pm - z * p;
                let step = p / dp;
                z = z - step;
                if step.abs() <= lit::<T>(8.0) * T::epsilon() * z.abs().max(T::one()) {
                    converged = true;
                    break;
                }
            }
            if !converged || !z.is_finite() {
                return Err(Error::Rule(format!(
                    "Gauss-Hermite Newton iteration failed at root {i} of {n}"
                )));
            }
            roots.push(z);
        }

        let mut nodes = Vec::with_capacity(n);
        nodes.extend(roots.iter().map(|&r| -r));
        let mirror_from = if n % 2 == 1 { half - 1 } else { half };
        nodes.extend(roots[..mirror_from].iter().rev().copied());
        if n % 2 == 1 {
            // the middle root was pushed negated above; keep it exactly zero
            nodes[half - 1] = T::zero();
        }

        let scaled_weights: Vec<T> = nodes
            .iter()
            .map(|&x| {
                let (_, pm) = hermite_function_pair(n, x);
                (nf * pm * pm).recip()
            })
            .collect();
        let weights: Vec<T> = nodes
            .iter()
            .zip(&scaled_weights)
            .map(|(&x, &w)| w * (-(x * x)).exp())
            .collect();
        if scaled_weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Rule(format!(
                "Gauss-Hermite weights not representable for n = {n}"
            )));
        }
        Ok(Self {
            nodes,
            weights,
            scaled_weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in ascending order, exactly antisymmetric about zero.
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Weights for the `e^{−x²}`-weighted integral.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Weights `wᵢ·e^{xᵢ²}` for integrands that carry their own Gaussian.
    pub fn scaled_weights(&self) -> &[T] {
        &self.scaled_weights
    }

    /// `∫ e^{−x²} f(x) dx`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        let terms: Vec<T> = self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

/// Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Rule("Gauss-Legendre needs at least one node".into()));
        }
        let nf: T = from_usize(n);
        let half = (n + 1) / 2;
        let mut pos = Vec::with_capacity(half);
        for i in 0..half {
            let mut z = (T::PI() * (from_usize::<T>(i) + lit(0.75)) / (nf + lit(0.5))).cos();
            if n % 2 == 1 && i == half - 1 {
                z = T::zero();
            }
            let mut pp = T::one();
            for it in 0..100 {
                let (mut p1, mut p2) = (T::one(), T::zero());
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf: T = from_usize(j);
                    p1 = ((lit::<T>(2.0) * jf + T::one()) * z * p2 - jf * p3) / (jf + T::one());
                }
                pp = nf * (z * p1 - p2) / (z * z - T::one());
                if n % 2 == 1 && i == half - 1 {
                    break;
                }
                let step = p1 / pp;
                z = z - step;
                if step.abs() <= lit::<T>(4.0) * T::epsilon() {
                    break;
                }
                if it == 99 {
                    return Err(Error::Rule(format!(
                        "Gauss-Legendre Newton iteration failed at root {i} of {n}"
                    )));
                }
            }
            let w = lit::<T>(2.0) / ((T::one() - z * z) * pp * pp);
            pos.push((z, w));
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for &(z, w) in &pos {
            nodes.push(-z);
            weights.push(w);
        }
        let mirror_from = if n % 2 == 1 { half - 1 } else { half };
        for &(z, w) in pos[..mirror_from].iter().rev() {
            nodes.push(z);
            weights.push(w);
        }
        if n % 2 == 1 {
            nodes[half - 1] = T::zero();
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `∫ₐᵇ f(x) dx`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) / lit(2.0);
        let mid = (a + b) / lit(2.0);
        let terms: Vec<T> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .collect();
        half * pairwise_sum(&terms)
    }
}

/// Trapezoidal rule in `s` after the substitution `k = c·sinh(s)`.
///
/// Integrands with structure on the scale `c` near the origin (poles at
/// `±ic`) become analytic in a strip of fixed half-width `π/2` in `s`, where
/// the trapezoidal rule converges geometrically.
#[derive(Debug, Clone, Copy)]
pub struct SinhTrapezoid<T> {
    scale: T,
    s_max: T,
    intervals: usize,
}

impl<T: Real> SinhTrapezoid<T> {
    /// Rule for `∫₀^{upper} f(k) dk` with feature scale `scale`.
    pub fn new(scale: T, upper: T, intervals: usize) -> Result<Self> {
        if !(scale > T::zero() && upper > T::zero()) || intervals == 0 {
            return Err(Error::Rule(
                "sinh-trapezoid needs positive scale, upper limit and intervals".into(),
            ));
        }
        Ok(Self {
            scale,
            s_max: (upper / scale).asinh(),
            intervals,
        })
    }

    /// `(kⱼ, wⱼ)` pairs of the mapped rule.
    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        let h = self.s_max / from_usize(self.intervals);
        (0..=self.intervals).map(move |j| {
            let s = h * from_usize(j);
            let end = j == 0 || j == self.intervals;
            let w = if end { h / lit(2.0) } else { h } * self.scale * s.cosh();
            (self.scale * s.sinh(), w)
        })
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        let terms: Vec<T> = self.points().map(|(k, w)| w * f(k)).collect();
        pairwise_sum(&terms)
    }
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let c = (a + b) / lit(2.0);
    let h = (b - a) / lit(2.0);
    let fc = f(c);
    let mut kron = fc * lit(GK_WK[7]);
    let mut gauss = fc * lit(GK_WG[3]);
    for i in 0..7 {
        let dx = h * lit(GK_X[i]);
        let pair = f(c - dx) + f(c + dx);
        kron = kron + pair * lit(GK_WK[i]);
        if i % 2 == 1 {
            gauss = gauss + pair * lit(GK_WG[i / 2]);
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive 7/15-point Gauss–Kronrod quadrature on `[a, b]`.
///
/// Returns the integral and the summed Kronrod error estimate.
pub fn adaptive_gauss_kronrod<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    rel_tol: T,
    abs_tol: T,
) -> Result<(T, T)> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: T = pairwise_sum(&parts.iter().map(|p| p.2).collect::<Vec<_>>());
        let err: T = pairwise_sum(&parts.iter().map(|p| p.3).collect::<Vec<_>>());
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok((total, err));
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::NonConvergence {
                what: "adaptive Gauss-Kronrod",
                disagreement: err.to_f64().unwrap_or(f64::NAN),
                limit: abs_tol.max(rel_tol * total.abs()).to_f64().unwrap_or(f64::NAN),
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = (lo + hi) / lit(2.0);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
        parts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    }
}
