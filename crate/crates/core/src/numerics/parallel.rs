//! Order-preserving fan-out over scoped threads.

use std::thread;

/// Applies `f` to every item, splitting the slice into contiguous chunks
/// across `workers` threads. The output is in input order and does not
/// depend on the worker count.
pub fn ordered_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_independent_of_workers() {
        let items: Vec<u64> = (0..103).collect();
        let serial = ordered_map(&items, 1, |x| x * x + 1);
        for w in [2, 3, 8, 500] {
            assert_eq!(ordered_map(&items, w, |x| x * x + 1), serial);
        }
        assert!(ordered_map(&[] as &[u64], 4, |x| *x).is_empty());
    }
}
