use std::ops::{Index, Neg, Sub};

use crate::scalar::Real;

/// A three-momentum in units ħ = c = l = 1.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentumVec<T>(pub [T; 3]);

impl<T: Real> MomentumVec<T> {
    pub fn new(k1: T, k2: T, k3: T) -> Self {
        Self([k1, k2, k3])
    }

    pub fn zero() -> Self {
        Self([T::zero(); 3])
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm_sqr(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|c| c * s))
    }

    pub fn components(&self) -> [T; 3] {
        self.0
    }
}

impl<T> Index<usize> for MomentumVec<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Real> Sub for MomentumVec<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl<T: Real> Neg for MomentumVec<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}
