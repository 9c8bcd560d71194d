#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over `items`, fanning out across threads when the `parallel` feature
/// is compiled in and the flag is set. Output order always matches input
/// order, so downstream merges are deterministic either way.
pub fn ordered_map<T, U, F>(parallel: bool, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.into_par_iter().map(f).collect();
    }
    let _ = parallel;
    items.into_iter().map(f).collect()
}
