//! Thin switch between rayon and plain iterators.
//!
//! With the `parallel` feature disabled every helper runs sequentially; results
//! are identical either way because callers only use order-preserving maps.

/// Maps `f` over `0..len`, preserving index order in the output.
pub fn map_range<T, F>(len: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel && len > 1 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    (0..len).map(f).collect()
}

/// Whether this build can run anything in parallel.
pub const fn available() -> bool {
    cfg!(feature = "parallel")
}

/// Number of worker threads a parallel map would use.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_range(1000, false, |i| i * 3);
        let par = map_range(1000, true, |i| i * 3);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 2997);
    }
}
