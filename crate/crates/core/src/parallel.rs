//! Row-wise iteration that fans out over rayon when the `parallel` feature
//! is enabled. Only elementwise work goes through here; reductions stay
//! sequential so results are bitwise reproducible.

use ndarray::{Array2, ArrayViewMut1, Axis};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn for_each_row<T, F>(array: &mut Array2<T>, f: F)
where
    T: Send + Sync,
    F: Fn(usize, ArrayViewMut1<'_, T>) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    array
        .axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(j, row)| f(j, row));

    #[cfg(not(feature = "parallel"))]
    array
        .axis_iter_mut(Axis(0))
        .enumerate()
        .for_each(|(j, row)| f(j, row));
}

pub(crate) fn for_each_row_init<T, S, I, F>(array: &mut Array2<T>, init: I, f: F)
where
    T: Send + Sync,
    I: Fn() -> S + Send + Sync,
    F: Fn(&mut S, ArrayViewMut1<'_, T>) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    array
        .axis_iter_mut(Axis(0))
        .into_par_iter()
        .for_each_init(init, |state, row| f(state, row));

    #[cfg(not(feature = "parallel"))]
    {
        let mut state = init();
        array
            .axis_iter_mut(Axis(0))
            .for_each(|row| f(&mut state, row));
    }
}

/// Order-preserving parallel map over an index range.
pub(crate) fn map_indexed<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}
