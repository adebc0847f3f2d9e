//! Gamma matrices, plane-wave bispinors and the free Fermionic Green's function.
//!
//! Signature `η = diag(1, 1, 1, −1)`; the Dirac adjoint is `ψ̃ = iψ†γ⁴`.
//! Spinors are normalised so that `ũ₍ᵣ₎u₍ₛ₎ = −ṽ₍ᵣ₎v₍ₛ₎ = δᵣₛ`, which fixes the
//! overall factor to `√((m+E)/2m)`.

use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{delta_sharp, Axis, GridBox, GridFunction, GridIndex};
use crate::hermite::xi_all;
use crate::momentum::MomentumVec;
use crate::quadrature::{refine_with, Distance, GaussHermite, QuadratureConfig};
use crate::scalar::{lit, Real};
use crate::sum::pairwise_sum;

fn cx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Dense 4×4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<T>(pub [[Complex<T>; 4]; 4]);

impl<T: Real> Mat4<T> {
    pub fn zero() -> Self {
        Self([[czero(); 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diagonal([Complex::new(T::one(), T::zero()); 4])
    }

    pub fn diagonal(d: [Complex<T>; 4]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    /// Matrix of small integers and `±i`, given as `(re, im)` pairs.
    pub fn from_int_pairs(rows: [[(i8, i8); 4]; 4]) -> Self {
        Self(rows.map(|row| row.map(|(re, im)| cx(lit(re as f64), lit(im as f64)))))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self(self.0.map(|row| row.map(|v| v * s)))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[j][i] = self.0[i][j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).fold(czero(), |acc, i| acc + self.0[i][i])
    }

    pub fn apply(&self, v: &[Complex<T>; 4]) -> [Complex<T>; 4] {
        let mut out = [czero(); 4];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *o = *o + self.0[i][j] * vj;
            }
        }
        out
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    /// Column-times-row outer product `a·bᵀ`.
    pub fn outer(a: &[Complex<T>; 4], b: &[Complex<T>; 4]) -> Self {
        Self(a.map(|ai| b.map(|bj| ai * bj)))
    }
}

impl<T: Real> Add for Mat4<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        self
    }
}

impl<T: Real> Sub for Mat4<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        self
    }
}

impl<T: Real> Mul for Mat4<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = czero();
                for k in 0..4 {
                    acc = acc + self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }
}

impl<T: Real> Distance for Mat4<T> {
    fn distance(&self, other: &Self) -> f64 {
        self.max_abs_diff(other).to_f64().unwrap_or(f64::NAN)
    }
}

/// The four gamma matrices `γ¹, γ², γ³, γ⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSet<T> {
    gamma: [Mat4<T>; 4],
}

/// A violated algebraic property of a [`GammaSet`].
#[derive(Debug, Clone, PartialEq)]
pub enum GammaDefect {
    /// `γ^μγ^ν + γ^νγ^μ ≠ 2η^{μν}I`; labels are 1-based.
    Clifford { mu: usize, nu: usize, deviation: f64 },
    /// `γᵃ` not Hermitian or `γ⁴` not anti-Hermitian.
    Hermiticity { mu: usize, deviation: f64 },
}

impl std::fmt::Display for GammaDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GammaDefect::Clifford { mu, nu, deviation } => {
                write!(
                    f,
                    "Clifford relation fails for (mu,nu)=({mu},{nu}): deviation {deviation:e}"
                )
            }
            GammaDefect::Hermiticity { mu, deviation } => {
                write!(f, "hermiticity fails for gamma^{mu}: deviation {deviation:e}")
            }
        }
    }
}

/// `η^{μν}` for 1-based labels.
pub fn metric(mu: usize, nu: usize) -> i8 {
    match (mu == nu, mu) {
        (false, _) => 0,
        (true, 4) => -1,
        (true, _) => 1,
    }
}

/// The standard representation used throughout the crate.
pub fn gamma_set<T: Real>() -> GammaSet<T> {
    let (o, i) = ((1, 0), (0, 1));
    let z = (0, 0);
    let neg = |(a, b): (i8, i8)| (-a, -b);
    let g1 = Mat4::from_int_pairs([[z, z, z, o], [z, z, o, z], [z, o, z, z], [o, z, z, z]]);
    let g2 = Mat4::from_int_pairs([[z, z, z, neg(i)], [z, z, i, z], [z, neg(i), z, z], [i, z, z, z]]);
    let g3 = Mat4::from_int_pairs([[z, z, o, z], [z, z, z, neg(o)], [o, z, z, z], [z, neg(o), z, z]]);
    let g4 = Mat4::from_int_pairs([[neg(i), z, z, z], [z, neg(i), z, z], [z, z, i, z], [z, z, z, i]]);
    GammaSet {
        gamma: [g1, g2, g3, g4],
    }
}

impl<T: Real> GammaSet<T> {
    /// Any four matrices, for probing the checks with a deliberately broken set.
    pub fn from_matrices(gamma: [Mat4<T>; 4]) -> Self {
        Self { gamma }
    }

    /// `γ^μ` for `μ ∈ 1..=4`.
    pub fn gamma(&self, mu: usize) -> Result<&Mat4<T>> {
        match mu {
            1..=4 => Ok(&self.gamma[mu - 1]),
            _ => Err(Error::domain("GammaSet::gamma", format!("index {mu} outside 1..=4"))),
        }
    }

    pub fn matrices(&self) -> &[Mat4<T>; 4] {
        &self.gamma
    }

    /// Every anticommutator and hermiticity property whose deviation exceeds `tol`.
    pub fn defects(&self, tol: T) -> Vec<GammaDefect> {
        let mut out = Vec::new();
        let id = Mat4::<T>::identity();
        for mu in 1..=4 {
            for nu in mu..=4 {
                let (a, b) = (self.gamma[mu - 1], self.gamma[nu - 1]);
                let want = id.scale(cx(lit(2.0 * metric(mu, nu) as f64), T::zero()));
                let dev = (a * b + b * a).max_abs_diff(&want);
                if dev > tol {
                    out.push(GammaDefect::Clifford {
                        mu,
                        nu,
                        deviation: dev.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        for mu in 1..=4 {
            let g = self.gamma[mu - 1];
            let want = if mu == 4 { g.scale(cx(-T::one(), T::zero())) } else { g };
            let dev = g.adjoint().max_abs_diff(&want);
            if dev > tol {
                out.push(GammaDefect::Hermiticity {
                    mu,
                    deviation: dev.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        out
    }

    /// `Σⱼ γʲpⱼ`.
    pub fn slash(&self, p: &MomentumVec<T>) -> Mat4<T> {
        (0..3).fold(Mat4::zero(), |acc, j| acc + self.gamma[j].scale(cx(p[j], T::zero())))
    }

    /// `iψ†γ⁴` with this set's `γ⁴`.
    pub fn adjoint_of(&self, s: &[Complex<T>; 4]) -> RowSpinor<T> {
        let g4 = &self.gamma[3];
        let i = cx(T::zero(), T::one());
        let mut row = [czero(); 4];
        for (j, r) in row.iter_mut().enumerate() {
            for k in 0..4 {
                *r = *r + s[k].conj() * g4.0[k][j];
            }
            *r = *r * i;
        }
        RowSpinor(row)
    }
}

/// Positive energy `+√(p·p + m²)`.
pub fn energy<T: Real>(p: &MomentumVec<T>, m: T) -> Result<T> {
    check_mass(m)?;
    Ok((p.norm_sqr() + m * m).sqrt())
}

fn check_mass<T: Real>(m: T) -> Result<()> {
    if m > T::zero() && m.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("fermion mass", format!("must be positive, got {m}")))
    }
}

/// On-shell four-momentum `(p, E)` with `E = +√(p·p + m²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMomentum<T> {
    pub p: MomentumVec<T>,
    pub m: T,
    pub e: T,
}

impl<T: Real> FourMomentum<T> {
    pub fn on_shell(p: MomentumVec<T>, m: T) -> Result<Self> {
        let e = energy(&p, m)?;
        Ok(Self { p, m, e })
    }

    /// `η^{μν}p_μp_ν + m²` with `p₄ = −E`; zero up to rounding.
    pub fn mass_shell_defect(&self) -> T {
        self.p.norm_sqr() - self.e * self.e + self.m * self.m
    }
}

/// Spin label `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn new(r: u8) -> Result<Self> {
        match r {
            1 => Ok(Spin::Up),
            2 => Ok(Spin::Down),
            other => Err(Error::InvalidSpin(other)),
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Spin::Up => 1,
            Spin::Down => 2,
        }
    }
}

/// Particle (`u`, energy `+E`) or antiparticle (`v`, energy `−E`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinorKind {
    Particle,
    Antiparticle,
}

/// A 4-component column spinor together with its labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bispinor<T> {
    pub components: [Complex<T>; 4],
    pub spin: Spin,
    pub kind: SpinorKind,
}

impl<T: Real> Bispinor<T> {
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.components
            .iter()
            .zip(other.components.iter())
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }
}

impl<T> Index<usize> for Bispinor<T> {
    type Output = Complex<T>;
    fn index(&self, i: usize) -> &Complex<T> {
        &self.components[i]
    }
}

/// A 4-component row spinor, as produced by the Dirac adjoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowSpinor<T>(pub [Complex<T>; 4]);

impl<T: Real> RowSpinor<T> {
    /// Row-times-column product.
    pub fn dot(&self, s: &Bispinor<T>) -> Complex<T> {
        self.0
            .iter()
            .zip(s.components.iter())
            .fold(czero(), |acc, (a, b)| acc + *a * *b)
    }
}

fn spinor_columns<T: Real>(p: &MomentumVec<T>, m: T) -> Result<(T, Complex<T>, Complex<T>, Complex<T>)> {
    let e = energy(p, m)?;
    let norm = ((m + e) / (m + m)).sqrt();
    let c = T::one() / (m + e);
    let plus = cx(p[0], p[1]) * c;
    let minus = cx(p[0], -p[1]) * c;
    let p3 = cx(p[2] * c, T::zero());
    Ok((norm, plus, minus, p3))
}

/// Positive-energy spinor `u₍ᵣ₎(p)`.
pub fn spinor_u<T: Real>(r: Spin, p: &MomentumVec<T>, m: T) -> Result<Bispinor<T>> {
    let (norm, plus, minus, p3) = spinor_columns(p, m)?;
    let (one, zero) = (cx(T::one(), T::zero()), czero());
    let mi = cx(T::zero(), -T::one());
    let col = match r {
        Spin::Up => [one, zero, mi * p3, mi * plus],
        Spin::Down => [zero, one, mi * minus, -mi * p3],
    };
    Ok(Bispinor {
        components: col.map(|v| v * norm),
        spin: r,
        kind: SpinorKind::Particle,
    })
}

/// Negative-energy spinor `v₍ᵣ₎(p)`.
pub fn spinor_v<T: Real>(r: Spin, p: &MomentumVec<T>, m: T) -> Result<Bispinor<T>> {
    let (norm, plus, minus, p3) = spinor_columns(p, m)?;
    let (one, zero) = (cx(T::one(), T::zero()), czero());
    let i = cx(T::zero(), T::one());
    let col = match r {
        Spin::Up => [i * p3, i * plus, one, zero],
        Spin::Down => [i * minus, -i * p3, zero, one],
    };
    Ok(Bispinor {
        components: col.map(|v| v * norm),
        spin: r,
        kind: SpinorKind::Antiparticle,
    })
}

/// Spinor of the given kind.
pub fn spinor<T: Real>(kind: SpinorKind, r: Spin, p: &MomentumVec<T>, m: T) -> Result<Bispinor<T>> {
    match kind {
        SpinorKind::Particle => spinor_u(r, p, m),
        SpinorKind::Antiparticle => spinor_v(r, p, m),
    }
}

/// `s̃ = i·s†·γ⁴`.
pub fn dirac_adjoint<T: Real>(s: &Bispinor<T>) -> RowSpinor<T> {
    gamma_set::<T>().adjoint_of(&s.components)
}

/// Largest deviation from `ũ₍ᵣ₎u₍ₛ₎ = −ṽ₍ᵣ₎v₍ₛ₎ = δᵣₛ`, `ũ₍ᵣ₎v₍ₛ₎ = ṽ₍ᵣ₎u₍ₛ₎ = 0`.
pub fn orthonormality_check<T: Real>(p: &MomentumVec<T>, m: T) -> Result<T> {
    let mut worst = T::zero();
    for r in Spin::BOTH {
        for s in Spin::BOTH {
            let delta = if r == s { T::one() } else { T::zero() };
            let (ur, us) = (spinor_u(r, p, m)?, spinor_u(s, p, m)?);
            let (vr, vs) = (spinor_v(r, p, m)?, spinor_v(s, p, m)?);
            let uu = dirac_adjoint(&ur).dot(&us) - delta;
            let vv = dirac_adjoint(&vr).dot(&vs) + delta;
            let uv = dirac_adjoint(&ur).dot(&vs);
            let vu = dirac_adjoint(&vr).dot(&us);
            for d in [uu, vv, uv, vu] {
                worst = worst.max(d.norm());
            }
        }
    }
    Ok(worst)
}

/// Expansion of `u₍ᵣ₎(p)` through third order in `‖p‖/m`; the remainder is `O(‖p‖⁴)`.
pub fn low_momentum_u<T: Real>(r: Spin, p: &MomentumVec<T>, m: T) -> Result<Bispinor<T>> {
    check_mass(m)?;
    if !(p.norm() < m) {
        return Err(Error::domain(
            "low_momentum_u",
            format!("requires |p| < m, got |p| = {} and m = {m}", p.norm()),
        ));
    }
    let two_m = m + m;
    let q2 = p.norm_sqr() / (two_m * two_m);
    let half = lit::<T>(0.5);
    let upper = cx(T::one() + half * q2, T::zero());
    let lower = (T::one() - half * q2) / two_m;
    let (one_lo, zero) = (upper, czero());
    let mi = cx(T::zero(), -T::one());
    let plus = cx(p[0], p[1]) * lower;
    let minus = cx(p[0], -p[1]) * lower;
    let p3 = cx(p[2] * lower, T::zero());
    let col = match r {
        Spin::Up => [one_lo, zero, mi * p3, mi * plus],
        Spin::Down => [zero, one_lo, mi * minus, -mi * p3],
    };
    Ok(Bispinor {
        components: col,
        spin: r,
        kind: SpinorKind::Particle,
    })
}

/// `(m/E)·Σᵣ u₍ᵣ₎ũ₍ᵣ₎`.
pub fn spin_sum<T: Real>(p: &MomentumVec<T>, m: T) -> Result<Mat4<T>> {
    let e = energy(p, m)?;
    let mut acc = Mat4::zero();
    for r in Spin::BOTH {
        let u = spinor_u(r, p, m)?;
        acc = acc + Mat4::outer(&u.components, &dirac_adjoint(&u).0);
    }
    Ok(acc.scale(cx(m / e, T::zero())))
}

/// `(−iγʲpⱼ + iγ⁴E + mI)/(2E)`.
pub fn spin_sum_closed_form<T: Real>(p: &MomentumVec<T>, m: T) -> Result<Mat4<T>> {
    let e = energy(p, m)?;
    let g = gamma_set::<T>();
    let i = cx(T::zero(), T::one());
    let m_mat = g.slash(p).scale(-i) + g.gamma[3].scale(i * e) + Mat4::identity().scale(cx(m, T::zero()));
    Ok(m_mat.scale(cx(T::one() / (e + e), T::zero())))
}

/// Residual of the discrete Dirac equation `γᵃΔ#ₐψ + γ⁴∂ₜψ + mψ = 0` for the
/// plane-wave mode built on `u₍ᵣ₎(p)` (factor `∏ξ_{nʲ}(pⱼ)e^{−iEt}`) or `v₍ᵣ₎(p)`
/// (factor `∏ξ̄_{nʲ}(pⱼ)e^{+iEt}`), at `t = 0`, in the max norm over the
/// largest box where every `Δ#ₐ` is defined.
pub fn dirac_mode_residual<T: Real>(
    gammas: &GammaSet<T>,
    kind: SpinorKind,
    r: Spin,
    p: &MomentumVec<T>,
    m: T,
    bbox: GridBox,
) -> Result<T> {
    let s = spinor(kind, r, p, m)?;
    let e = energy(p, m)?;
    let mode = GridFunction::plane_wave(bbox, p);
    let mode = match kind {
        SpinorKind::Particle => mode,
        SpinorKind::Antiparticle => mode.map(|_, v| v.conj()),
    };
    // ∂ₜ acting on e^{∓iEt}
    let dt = match kind {
        SpinorKind::Particle => cx(T::zero(), -e),
        SpinorKind::Antiparticle => cx(T::zero(), e),
    };
    let comps: Vec<GridFunction<T>> = (0..4).map(|c| mode.map(|_, v| v * s.components[c])).collect();
    let mut diffs: Vec<[GridFunction<T>; 4]> = Vec::with_capacity(3);
    let mut common = bbox;
    for axis in Axis::ALL {
        let d: Vec<GridFunction<T>> = comps.iter().map(|f| delta_sharp(f, axis)).collect::<Result<_>>()?;
        let d: [GridFunction<T>; 4] = d.try_into().expect("four components");
        common = common.intersect(d[0].bbox())?;
        diffs.push(d);
    }
    let g4 = gammas.gamma[3];
    let mut worst = T::zero();
    for n in common.indices() {
        let psi = [0, 1, 2, 3].map(|c| comps[c].at(n));
        let mut res = g4.apply(&psi.map(|v| v * dt));
        let mass = psi.map(|v| v * m);
        for c in 0..4 {
            res[c] = res[c] + mass[c];
        }
        for (a, d) in diffs.iter().enumerate() {
            let dpsi = [0, 1, 2, 3].map(|c| d[c].at(n));
            let term = gammas.gamma[a].apply(&dpsi);
            for c in 0..4 {
                res[c] = res[c] + term[c];
            }
        }
        worst = res.iter().fold(worst, |w, v| w.max(v.norm()));
    }
    Ok(worst)
}

/// A 4×4 matrix-valued integral with its refinement disagreement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixEstimate<T> {
    pub value: Mat4<T>,
    pub err_estimate: f64,
}

/// Per-node weights `wᵢ·ξ_{n}(pᵢ)·ξ̄_{n̂}(pᵢ)` on one axis (Gaussian already divided out).
fn axis_factors<T: Real>(rule: &GaussHermite<T>, n: usize, nhat: usize) -> Vec<Complex<T>> {
    let top = n.max(nhat);
    rule.nodes()
        .iter()
        .zip(rule.scaled_weights())
        .map(|(&x, &w)| {
            let xs = xi_all(top, x);
            xs[n] * xs[nhat].conj() * w
        })
        .collect()
}

/// Tensor-product sum of `f(p)·∏ⱼ ξ_{nʲ}(pⱼ)ξ̄_{n̂ʲ}(pⱼ)` over the Gauss–Hermite grid.
/// Summation order is fixed: innermost axis sequential, outer axis pairwise.
fn tensor_sum<T: Real, const K: usize>(
    gh: usize,
    n: GridIndex,
    nhat: GridIndex,
    mut f: impl FnMut(&MomentumVec<T>) -> [Complex<T>; K],
) -> Result<[Complex<T>; K]> {
    let rule = GaussHermite::<T>::new(gh)?;
    let fac: Vec<Vec<Complex<T>>> = (0..3).map(|j| axis_factors(&rule, n.0[j], nhat.0[j])).collect();
    let x = rule.nodes();
    let mut slabs: Vec<[Complex<T>; K]> = Vec::with_capacity(gh);
    for a in 0..gh {
        let mut acc = [czero(); K];
        for b in 0..gh {
            let wab = fac[0][a] * fac[1][b];
            for c in 0..gh {
                let w = wab * fac[2][c];
                if w.norm() == T::zero() {
                    continue;
                }
                let vals = f(&MomentumVec::new(x[a], x[b], x[c]));
                for k in 0..K {
                    acc[k] = acc[k] + vals[k] * w;
                }
            }
        }
        slabs.push(acc);
    }
    let mut out = [czero(); K];
    for (k, o) in out.iter_mut().enumerate() {
        let col: Vec<Complex<T>> = slabs.iter().map(|s| s[k]).collect();
        *o = pairwise_sum(&col);
    }
    Ok(out)
}

/// `S₊(n, n̂; Δt) = i∫[(iγʲpⱼ − iγ⁴E − mI)/2E]·∏ξ_{nʲ}(pⱼ)ξ̄_{n̂ʲ}(pⱼ)·e^{−iEΔt} d³p`.
pub fn s_plus_green<T: Real>(
    n: GridIndex,
    nhat: GridIndex,
    dt: T,
    m: T,
    cfg: &QuadratureConfig,
) -> Result<MatrixEstimate<T>> {
    check_mass(m)?;
    let g = gamma_set::<T>();
    let i = cx(T::zero(), T::one());
    let half = lit::<T>(0.5);
    let (value, err_estimate) = refine_with(cfg, "s_plus_green", |c| {
        // accumulate the five scalar coefficients of γ¹, γ², γ³, γ⁴ and I
        let [s1, s2, s3, s4, s0] = tensor_sum::<T, 5>(c.gh_nodes, n, nhat, |p| {
            let e = (p.norm_sqr() + m * m).sqrt();
            let phase = cx(T::zero(), -e * dt).exp();
            let inv = half / e;
            [
                phase * (i * p[0] * inv),
                phase * (i * p[1] * inv),
                phase * (i * p[2] * inv),
                phase * (-i * half),
                phase * (-m * inv),
            ]
        })?;
        let mat = g.gamma[0].scale(s1)
            + g.gamma[1].scale(s2)
            + g.gamma[2].scale(s3)
            + g.gamma[3].scale(s4)
            + Mat4::identity().scale(s0);
        Ok(mat.scale(i))
    })?;
    Ok(MatrixEstimate { value, err_estimate })
}

/// The anticommutator kernel `∫(m/E)Σᵣu₍ᵣ₎ũ₍ᵣ₎·∏ξ_{nʲ}ξ̄_{n̂ʲ}·e^{−iEΔt} d³p`,
/// built from explicit spinors; equals `i·S₊` for the same arguments.
pub fn anticommutator_kernel<T: Real>(
    n: GridIndex,
    nhat: GridIndex,
    dt: T,
    m: T,
    cfg: &QuadratureConfig,
) -> Result<MatrixEstimate<T>> {
    check_mass(m)?;
    let (value, err_estimate) = refine_with(cfg, "anticommutator_kernel", |c| {
        let mut failure = None;
        let flat = tensor_sum::<T, 16>(c.gh_nodes, n, nhat, |p| {
            let e = (p.norm_sqr() + m * m).sqrt();
            let phase = cx(T::zero(), -e * dt).exp();
            match spin_sum(p, m) {
                Ok(s) => {
                    let mut out = [czero(); 16];
                    for a in 0..4 {
                        for b in 0..4 {
                            out[4 * a + b] = s.0[a][b] * phase;
                        }
                    }
                    out
                }
                Err(err) => {
                    failure.get_or_insert(err);
                    [czero(); 16]
                }
            }
        })?;
        if let Some(err) = failure {
            return Err(err);
        }
        let mut mat = Mat4::zero();
        for a in 0..4 {
            for b in 0..4 {
                mat.0[a][b] = flat[4 * a + b];
            }
        }
        Ok(mat)
    })?;
    Ok(MatrixEstimate { value, err_estimate })
}
