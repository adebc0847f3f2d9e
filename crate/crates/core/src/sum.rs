//! Fixed-order summation.
//!
//! Every quadrature in the crate reduces its node contributions through
//! [`pairwise_sum`], so a given rule and integrand always produce the same
//! bits regardless of how the contributions were computed.

use std::ops::Add;

use num_traits::Zero;

const LEAF: usize = 8;

/// Sums `values` with a balanced binary tree whose shape depends only on the length.
pub fn pairwise_sum<V>(values: &[V]) -> V
where
    V: Copy + Zero + Add<Output = V>,
{
    if values.len() <= LEAF {
        return values.iter().fold(V::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Maps each item and reduces with [`pairwise_sum`].
pub fn pairwise_map_sum<I, V, F>(items: I, f: F) -> V
where
    I: IntoIterator,
    F: FnMut(I::Item) -> V,
    V: Copy + Zero + Add<Output = V>,
{
    let buf: Vec<V> = items.into_iter().map(f).collect();
    pairwise_sum(&buf)
}
