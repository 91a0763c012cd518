//! Deterministic fan-out of independent symbolic computations over threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Apply `f` to every item using up to `jobs` worker threads. Results come
/// back in input order regardless of scheduling, so output is byte-identical
/// for every job count.
pub fn parallel_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = jobs.max(1).min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every slot is filled before scope exit"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_identical_for_every_job_count() {
        let items: Vec<u64> = (0..100).collect();
        let seq = parallel_map(1, &items, |&x| x * x + 1);
        for jobs in [2, 3, 8, 64] {
            assert_eq!(parallel_map(jobs, &items, |&x| x * x + 1), seq);
        }
    }

    #[test]
    fn empty_and_zero_jobs_are_fine() {
        let empty: Vec<u8> = Vec::new();
        assert!(parallel_map(4, &empty, |x| *x).is_empty());
        assert_eq!(parallel_map(0, &[5u8], |x| *x), vec![5]);
    }
}
