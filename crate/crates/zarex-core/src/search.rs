//! Branch-and-bound maximization of a monotone-avoidance item set.
//!
//! Both extremal searches — ones in a matrix, cells in a region — are
//! instances of the same problem: pick as many items as possible, in a
//! fixed order, subject to a property that can only be broken by adding
//! items. The search branches on items in order trying 1 before 0, with
//! the upper-bound prune `chosen + remaining <= best`. The certificate
//! is canonicalized afterwards: a second pass fixes items in order,
//! preferring absent, and keeps a choice only if the optimum is still
//! reachable, which yields the lexicographically smallest optimal set
//! (characteristic vector order, absent < present).

/// Incremental feasibility oracle over a set of items `0..n`.
///
/// The engine interleaves `can_add` probes with `push`/`pop` updates;
/// `push` is only called for items that just passed `can_add`.
pub trait MonotoneOracle {
    fn can_add(&mut self, item: usize) -> bool;
    fn push(&mut self, item: usize);
    fn pop(&mut self, item: usize);
}

/// Maximize the number of items, returning the optimal count and the
/// lexicographically smallest optimal item set in ascending order.
pub fn maximize<O: MonotoneOracle>(n_items: usize, oracle: &mut O) -> (u64, Vec<usize>) {
    let mut best = 0u64;
    search_value(0, 0, n_items, oracle, &mut best);

    // Canonical certificate: greedily prefer leaving each item out, which
    // is valid exactly when the optimum is still reachable without it.
    let mut chosen: Vec<usize> = Vec::new();
    let mut ones = 0u64;
    for item in 0..n_items {
        if ones == best {
            break;
        }
        if exists_completion(item + 1, ones, best, n_items, oracle) {
            continue;
        }
        debug_assert!(oracle.can_add(item), "forced item must be addable");
        oracle.push(item);
        chosen.push(item);
        ones += 1;
    }
    assert_eq!(ones, best, "canonical extraction must reach the optimum");
    for &item in chosen.iter().rev() {
        oracle.pop(item);
    }
    (best, chosen)
}

fn search_value<O: MonotoneOracle>(
    idx: usize,
    ones: u64,
    n_items: usize,
    oracle: &mut O,
    best: &mut u64,
) {
    if ones > *best {
        *best = ones;
    }
    if idx == n_items || ones + (n_items - idx) as u64 <= *best {
        return;
    }
    if oracle.can_add(idx) {
        oracle.push(idx);
        search_value(idx + 1, ones + 1, n_items, oracle, best);
        oracle.pop(idx);
    }
    search_value(idx + 1, ones, n_items, oracle, best);
}

/// Can the current prefix still be completed to exactly `target` items?
fn exists_completion<O: MonotoneOracle>(
    idx: usize,
    ones: u64,
    target: u64,
    n_items: usize,
    oracle: &mut O,
) -> bool {
    if ones == target {
        return true;
    }
    if idx == n_items || ones + ((n_items - idx) as u64) < target {
        return false;
    }
    if oracle.can_add(idx) {
        oracle.push(idx);
        let found = exists_completion(idx + 1, ones + 1, target, n_items, oracle);
        oracle.pop(idx);
        if found {
            return true;
        }
    }
    exists_completion(idx + 1, ones, target, n_items, oracle)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Toy oracle: no two chosen items may be adjacent integers.
    struct NoAdjacent {
        chosen: Vec<bool>,
    }

    impl MonotoneOracle for NoAdjacent {
        fn can_add(&mut self, item: usize) -> bool {
            !(item > 0 && self.chosen[item - 1])
                && !(item + 1 < self.chosen.len() && self.chosen[item + 1])
        }
        fn push(&mut self, item: usize) {
            self.chosen[item] = true;
        }
        fn pop(&mut self, item: usize) {
            self.chosen[item] = false;
        }
    }

    #[test]
    fn independent_set_on_a_path() {
        for n in 1..10 {
            let mut oracle = NoAdjacent { chosen: vec![false; n] };
            let (value, set) = maximize(n, &mut oracle);
            assert_eq!(value, ((n + 1) / 2) as u64);
            // The lexicographically smallest optimum (absent < present)
            // skips item 0 whenever an odd-position optimum exists.
            let expected: Vec<usize> = if n % 2 == 1 {
                (0..n).step_by(2).collect()
            } else {
                (1..n).step_by(2).collect()
            };
            assert_eq!(set, expected);
        }
    }
}
