//! Dispatch layer between rayon and sequential execution.
//!
//! Everything here is shaped so that results do not depend on thread
//! scheduling: maps collect in index order and reductions fold partial
//! results sequentially. A `--no-default-features` build replaces rayon
//! with plain iterators and produces bit-identical output.

use ndarray::{Array3, ArrayViewMut2, Axis};

#[cfg(feature = "parallel")]
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Sum `f(i)` over `0..n` with a deterministic (index-ordered) reduction.
pub fn sum_indexed<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map_indexed(n, f).into_iter().sum()
}

/// Apply `f` to each plane along the outer axis of a rank-3 array.
/// Planes are disjoint, so parallel mutation is race-free.
#[cfg(feature = "parallel")]
pub fn for_each_outer<T, F>(arr: &mut Array3<T>, f: F)
where
    T: Send,
    F: Fn(usize, ArrayViewMut2<'_, T>) + Sync + Send,
{
    use rayon::prelude::*;
    let views: Vec<_> = arr.axis_iter_mut(Axis(0)).collect();
    views
        .into_par_iter()
        .enumerate()
        .for_each(|(i, v)| f(i, v));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_outer<T, F>(arr: &mut Array3<T>, f: F)
where
    F: Fn(usize, ArrayViewMut2<'_, T>),
{
    for (i, v) in arr.axis_iter_mut(Axis(0)).enumerate() {
        f(i, v);
    }
}
