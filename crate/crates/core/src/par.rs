//! Order-preserving data-parallel maps. With the `parallel` feature the work
//! is spread over the rayon pool; without it every map runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy chosen at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `Parallel` only when the feature is compiled in.
    pub fn available() -> &'static [Exec] {
        if cfg!(feature = "parallel") {
            &[Exec::Sequential, Exec::Parallel]
        } else {
            &[Exec::Sequential]
        }
    }
}

/// Maps `f` over `items` keeping input order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_with(Exec::Parallel, items, f)
}

pub fn map_with<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Maps over `0..n`.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// Fallible map; the first error in input order wins.
pub fn try_map<T, R, E, F>(exec: Exec, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map_with(exec, items, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let v: Vec<u64> = (0..1000).collect();
        for &e in Exec::available() {
            let out = map_with(e, &v, |x| x * x);
            assert_eq!(out, v.iter().map(|x| x * x).collect::<Vec<_>>());
            assert_eq!(map_range(e, 10, |i| i + 1), (1..11).collect::<Vec<_>>());
        }
    }

    #[test]
    fn first_error_wins() {
        let v: Vec<i32> = (0..100).collect();
        let r: Result<Vec<i32>, i32> =
            try_map(
                Exec::Parallel,
                &v,
                |&x| if x % 7 == 6 { Err(x) } else { Ok(x) },
            );
        assert_eq!(r, Err(6));
    }
}
