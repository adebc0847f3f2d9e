//! Partial difference operators on functions sampled over a finite box of ℕ³.
//!
//! Operators use valid-region semantics: the output lives on the sub-box
//! where every neighbour the stencil reads is inside the input box. Nothing
//! is padded or extrapolated. The weighted operators `Δ#` and `Δ°` carry a
//! `√nʲ` coefficient on the lower neighbour, which is exactly zero at
//! `nʲ = 0`, so the lower face of a box anchored at the origin is kept.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermite::xi_product;
use crate::momentum::MomentumVec;
use crate::scalar::{from_usize, Real};

/// A point `(n¹, n², n³)` of the discrete phase space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GridIndex(pub [usize; 3]);

impl GridIndex {
    pub const ORIGIN: GridIndex = GridIndex([0, 0, 0]);

    pub fn new(n1: usize, n2: usize, n3: usize) -> Self {
        Self([n1, n2, n3])
    }

    pub fn get(&self, axis: Axis) -> usize {
        self.0[axis.index()]
    }

    pub fn with(mut self, axis: Axis, value: usize) -> Self {
        self.0[axis.index()] = value;
        self
    }

    /// Moves `delta` steps along `axis`; `None` if that leaves ℕ³.
    pub fn shifted(self, axis: Axis, delta: isize) -> Option<Self> {
        let v = self.get(axis).checked_add_signed(delta)?;
        Some(self.with(axis, v))
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for GridIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// One of the three lattice directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    One,
    Two,
    Three,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::One, Axis::Two, Axis::Three];

    /// From the 1-based axis label.
    pub fn new(label: usize) -> Result<Self> {
        match label {
            1 => Ok(Axis::One),
            2 => Ok(Axis::Two),
            3 => Ok(Axis::Three),
            other => Err(Error::InvalidAxis(other)),
        }
    }

    /// 0-based storage index.
    pub fn index(self) -> usize {
        match self {
            Axis::One => 0,
            Axis::Two => 1,
            Axis::Three => 2,
        }
    }
}

/// Half-open box `lo ≤ n < hi` per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridBox {
    lo: [usize; 3],
    hi: [usize; 3],
}

impl GridBox {
    /// Box `[0, extents)` anchored at the origin; every extent must be at least 2.
    pub fn new(extents: [usize; 3]) -> Result<Self> {
        for (axis, &e) in extents.iter().enumerate() {
            if e < 2 {
                return Err(Error::BoxTooSmall {
                    axis: axis + 1,
                    extent: e,
                    needed: 2,
                });
            }
        }
        Ok(Self {
            lo: [0; 3],
            hi: extents,
        })
    }

    pub fn cube(extent: usize) -> Result<Self> {
        Self::new([extent; 3])
    }

    /// Arbitrary non-empty bounds.
    pub fn with_bounds(lo: [usize; 3], hi: [usize; 3]) -> Result<Self> {
        for axis in 0..3 {
            if hi[axis] <= lo[axis] {
                return Err(Error::BoxTooSmall {
                    axis: axis + 1,
                    extent: hi[axis].saturating_sub(lo[axis]),
                    needed: 1,
                });
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> [usize; 3] {
        self.lo
    }

    pub fn hi(&self) -> [usize; 3] {
        self.hi
    }

    pub fn extents(&self) -> [usize; 3] {
        [0, 1, 2].map(|a| self.hi[a] - self.lo[a])
    }

    pub fn len(&self) -> usize {
        self.extents().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, n: GridIndex) -> bool {
        (0..3).all(|a| self.lo[a] <= n.0[a] && n.0[a] < self.hi[a])
    }

    fn offset(&self, n: GridIndex) -> usize {
        let e = self.extents();
        ((n.0[0] - self.lo[0]) * e[1] + (n.0[1] - self.lo[1])) * e[2] + (n.0[2] - self.lo[2])
    }

    /// Indices in row-major order (axis 1 slowest).
    pub fn indices(&self) -> impl Iterator<Item = GridIndex> + '_ {
        let (lo, hi) = (self.lo, self.hi);
        (lo[0]..hi[0])
            .flat_map(move |a| (lo[1]..hi[1]).flat_map(move |b| (lo[2]..hi[2]).map(move |c| GridIndex([a, b, c]))))
    }

    pub fn intersect(&self, other: &GridBox) -> Result<GridBox> {
        let lo = [0, 1, 2].map(|a| self.lo[a].max(other.lo[a]));
        let hi = [0, 1, 2].map(|a| self.hi[a].min(other.hi[a]));
        GridBox::with_bounds(lo, hi)
    }

    fn narrowed(&self, axis: Axis, lo_gain: usize, hi_loss: usize) -> Result<GridBox> {
        let a = axis.index();
        let mut lo = self.lo;
        let mut hi = self.hi;
        lo[a] += lo_gain;
        hi[a] = hi[a].saturating_sub(hi_loss);
        if hi[a] <= lo[a] {
            return Err(Error::BoxTooSmall {
                axis: a + 1,
                extent: self.hi[a] - self.lo[a],
                needed: lo_gain + hi_loss + 1,
            });
        }
        Ok(GridBox { lo, hi })
    }
}

/// Complex samples of a function on every point of a [`GridBox`], stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    bbox: GridBox,
    values: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn from_fn<F: FnMut(GridIndex) -> Complex<T>>(bbox: GridBox, f: F) -> Self {
        let values = bbox.indices().map(f).collect();
        Self { bbox, values }
    }

    pub fn zeros(bbox: GridBox) -> Self {
        Self::from_fn(bbox, |_| Complex::new(T::zero(), T::zero()))
    }

    /// Samples the plane-wave mode factor `∏ξ_{nʲ}(kⱼ)`.
    pub fn plane_wave(bbox: GridBox, k: &MomentumVec<T>) -> Self {
        Self::from_fn(bbox, |n| xi_product(n, k))
    }

    pub fn bbox(&self) -> &GridBox {
        &self.bbox
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn get(&self, n: GridIndex) -> Option<Complex<T>> {
        self.bbox.contains(n).then(|| self.values[self.bbox.offset(n)])
    }

    /// Value at `n`; panics if `n` lies outside the box.
    pub fn at(&self, n: GridIndex) -> Complex<T> {
        assert!(self.bbox.contains(n), "read at {n} outside box {:?}", self.bbox);
        self.values[self.bbox.offset(n)]
    }

    pub fn restrict(&self, bbox: GridBox) -> Result<Self> {
        let inner = self.bbox.intersect(&bbox)?;
        if inner != bbox {
            return Err(Error::domain(
                "GridFunction::restrict",
                "target box not contained in source box",
            ));
        }
        Ok(Self::from_fn(bbox, |n| self.at(n)))
    }

    pub fn map<F: FnMut(GridIndex, Complex<T>) -> Complex<T>>(&self, mut f: F) -> Self {
        Self::from_fn(self.bbox, |n| f(n, self.at(n)))
    }

    /// `α·self + β·other` on the common box.
    pub fn combine(&self, alpha: Complex<T>, other: &Self, beta: Complex<T>) -> Result<Self> {
        let common = self.bbox.intersect(&other.bbox)?;
        Ok(Self::from_fn(common, |n| self.at(n) * alpha + other.at(n) * beta))
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    fn stencil<F>(&self, out: GridBox, mut rule: F) -> Self
    where
        F: FnMut(&Self, GridIndex) -> Complex<T>,
    {
        Self::from_fn(out, |n| rule(self, n))
    }
}

/// Forward difference `(Δⱼf)(n) = f(n + eⱼ) − f(n)`.
pub fn delta_fwd<T: Real>(f: &GridFunction<T>, axis: Axis) -> Result<GridFunction<T>> {
    let out = f.bbox.narrowed(axis, 0, 1)?;
    Ok(f.stencil(out, |g, n| g.at(n.with(axis, n.get(axis) + 1)) - g.at(n)))
}

/// Backward difference `(Δ′ⱼf)(n) = f(n) − f(n − eⱼ)`; the lowest layer is dropped.
pub fn delta_bwd<T: Real>(f: &GridFunction<T>, axis: Axis) -> Result<GridFunction<T>> {
    let out = f.bbox.narrowed(axis, 1, 0)?;
    Ok(f.stencil(out, |g, n| g.at(n) - g.at(n.with(axis, n.get(axis) - 1))))
}

fn weighted<T: Real>(f: &GridFunction<T>, axis: Axis, sign: T) -> Result<GridFunction<T>> {
    let a = axis.index();
    // a box anchored at nʲ = 0 keeps its lower face: the √nʲ weight vanishes there
    let lo_gain = usize::from(f.bbox.lo[a] > 0);
    let out = f.bbox.narrowed(axis, lo_gain, 1)?;
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    Ok(f.stencil(out, |g, n| {
        let nj = n.get(axis);
        let up = g.at(n.with(axis, nj + 1)) * from_usize::<T>(nj + 1).sqrt();
        let down = if nj == 0 {
            Complex::new(T::zero(), T::zero())
        } else {
            g.at(n.with(axis, nj - 1)) * from_usize::<T>(nj).sqrt()
        };
        (up + down * sign) * inv_sqrt2
    }))
}

/// `(Δ#ⱼf)(n) = [√(nʲ+1)·f(…,nʲ+1,…) − √nʲ·f(…,nʲ−1,…)]/√2`.
pub fn delta_sharp<T: Real>(f: &GridFunction<T>, axis: Axis) -> Result<GridFunction<T>> {
    weighted(f, axis, -T::one())
}

/// `(Δ°ⱼf)(n) = [√(nʲ+1)·f(…,nʲ+1,…) + √nʲ·f(…,nʲ−1,…)]/√2`.
pub fn delta_circle<T: Real>(f: &GridFunction<T>, axis: Axis) -> Result<GridFunction<T>> {
    weighted(f, axis, T::one())
}

/// `δ^{ab}Δ#ₐΔ#_b f`, on the box common to all three second differences.
pub fn laplacian_sharp<T: Real>(f: &GridFunction<T>) -> Result<GridFunction<T>> {
    let mut total: Option<GridFunction<T>> = None;
    for axis in Axis::ALL {
        let second = delta_sharp(&delta_sharp(f, axis)?, axis)?;
        let one = Complex::new(T::one(), T::zero());
        total = Some(match total {
            None => second,
            Some(acc) => acc.combine(one, &second, one)?,
        });
    }
    Ok(total.expect("three axes"))
}

/// Max-norm residual of `δ^{ab}Δ#ₐΔ#_bφ − ∂ₜ²φ − μ²φ` for the plane-wave mode
/// `φ(n, t) = ∏ξ_{nʲ}(kⱼ)·e^{−iωt}` at `t = 0`, with `∂ₜ² → −ω²` and the
/// on-shell frequency `ω² = k·k + μ²`.
pub fn kg_mode_residual<T: Real>(k: &MomentumVec<T>, mu: T, bbox: GridBox) -> Result<T> {
    let omega = (k.norm_sqr() + mu * mu).sqrt();
    kg_mode_residual_with_omega(k, mu, omega, bbox)
}

/// As [`kg_mode_residual`] with an explicitly chosen (possibly off-shell) `ω`.
pub fn kg_mode_residual_with_omega<T: Real>(k: &MomentumVec<T>, mu: T, omega: T, bbox: GridBox) -> Result<T> {
    if !(mu > T::zero()) {
        return Err(Error::domain(
            "kg_mode_residual",
            format!("boson mass must be positive, got {mu}"),
        ));
    }
    let f = GridFunction::plane_wave(bbox, k);
    let lap = laplacian_sharp(&f)?;
    let shift = omega * omega - mu * mu;
    Ok(lap
        .bbox()
        .indices()
        .map(|n| (lap.at(n) + f.at(n) * shift).norm())
        .fold(T::zero(), T::max))
}
