//! Independent reference implementations used to cross-check the main
//! solver and deciders. Nothing here shares code with the production
//! paths: the matrix oracle enumerates rows as masks, and the region
//! oracles work on an explicit fixed-denominator grid of candidate
//! coordinates with plain integer arithmetic instead of symbolic
//! infinitesimals.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::grid::GridRegion;
use crate::pattern::{FinitePattern, SegmentPattern, StackPattern};
use crate::rat::Rat;

/// Maximum ones in an n-by-n 0-1 matrix in which no two rows share two
/// columns (equivalently, avoiding the 2-by-2 all-ones submatrix).
///
/// Pruned enumeration over rows as bitmasks, kept in non-increasing
/// order: the forbidden configuration is invariant under row
/// permutations, so sorting rows loses no optimum. Pruning combines the
/// trivial `ones + n * rows_left` bound with the column-pair budget
/// (every row with k ones consumes k(k-1)/2 of the C(n,2) column pairs,
/// and pairs are never reused).
pub fn max_ones_no_two_by_two(n: u32) -> u64 {
    assert!(n >= 1 && n <= 16, "reference enumeration is desk-scale");
    let n = n as usize;
    let full: u64 = (1u64 << n) - 1;
    let total_pairs = (n * (n - 1) / 2) as i64;

    fn pairs(k: u32) -> i64 {
        (k as i64) * (k as i64 - 1) / 2
    }

    /// Upper bound on additional ones for `rows_left` rows under a
    /// remaining column-pair budget: C(k,2) is convex, so the even split
    /// across rows consumes the fewest pairs for a given total.
    fn pair_bound(rows_left: usize, budget: i64, n: usize) -> u64 {
        let rows = rows_left as i64;
        let n = n as i64;
        let mut total = rows * n;
        while total > 0 {
            let q = total / rows;
            let s = total % rows;
            let usage = (rows - s) * q * (q - 1) / 2 + s * (q + 1) * q / 2;
            if usage <= budget {
                break;
            }
            total -= 1;
        }
        total.max(0) as u64
    }

    fn dfs(
        rows: &mut Vec<u64>,
        n: usize,
        max_mask: u64,
        ones: u64,
        budget: i64,
        best: &mut u64,
    ) {
        if ones > *best {
            *best = ones;
        }
        let left = n - rows.len();
        if left == 0 {
            return;
        }
        if ones + pair_bound(left, budget, n) <= *best {
            return;
        }
        let mut m = max_mask;
        loop {
            let used = pairs(m.count_ones());
            if used <= budget && rows.iter().all(|&r| (r & m).count_ones() <= 1) {
                rows.push(m);
                dfs(rows, n, m, ones + m.count_ones() as u64, budget - used, best);
                rows.pop();
            }
            if m == 0 {
                break;
            }
            m -= 1;
        }
    }

    let mut best = 0u64;
    dfs(&mut Vec::new(), n, full, 0, total_pairs, &mut best);
    best
}

/// Reference table `n -> max ones` for n = 1..=max_n.
pub fn no_two_by_two_table(max_n: u32) -> Vec<(u32, u64)> {
    (1..=max_n).map(|n| (n, max_ones_no_two_by_two(n))).collect()
}

/// Fixed-denominator slot grid over a two-dimensional region.
///
/// Candidate coordinates are k/D for k = 1 .. nD-1, D a multiple of
/// every denominator in sight times a fineness factor; a slot is usable
/// when it lies strictly inside an occupied cell. With the factor at
/// least the number of cells plus classes (we use 12 throughout the
/// desk-scale tests) the slot grid decides containment exactly.
struct SlotGrid {
    denom: i128,
    n_slots: i128,
    gd: i128, // g * D: slot width of one cell
    r: u32,
    /// x-slot usability per cell-row (index row-1), slot index k.
    row_slots: Vec<Vec<bool>>,
}

impl SlotGrid {
    fn new(region: &GridRegion, extra_denoms: &[i128], mult: i128) -> Result<Self> {
        if region.d() != 2 {
            return Err(Error::DimMismatch("slot oracle is two-dimensional".into()));
        }
        let g = region.g();
        let mut l: i128 = g.denom();
        for &d in extra_denoms {
            l = l.lcm(&d);
        }
        let denom = l * mult;
        let n_slots = (region.n() * Rat::new(denom, 1)).numer();
        let gd = (g * Rat::new(denom, 1)).numer();
        let r = region.r();
        let mut row_slots = vec![vec![false; (n_slots + 1) as usize]; r as usize];
        for cell in region.cells() {
            let (a, b) = (cell[0] as i128, cell[1] as usize);
            let lo = gd * (a - 1);
            let hi = gd * a;
            for k in lo + 1..hi {
                row_slots[b - 1][k as usize] = true;
            }
        }
        Ok(SlotGrid { denom, n_slots, gd, r, row_slots })
    }

    /// Smallest usable x-slot >= from in the given row.
    fn next_slot(&self, row: u16, from: i128) -> Option<i128> {
        let slots = &self.row_slots[(row - 1) as usize];
        let mut k = from.max(1);
        while k < self.n_slots {
            if slots[k as usize] {
                return Some(k);
            }
            k += 1;
        }
        None
    }

    /// Greedy chain of x-slots: class j needs a usable slot (in every row
    /// of `rows[j]`) at least `gaps[j-1]` after the previous pick.
    /// Greedy leftmost is exact for chain constraints with arbitrary
    /// per-class slot sets.
    fn greedy_chain(&self, rows_per_class: &[Vec<u16>], gaps: &[i128]) -> bool {
        let mut prev: Option<i128> = None;
        for (j, rows) in rows_per_class.iter().enumerate() {
            let mut k = match prev {
                None => 1,
                Some(p) => p + gaps[j - 1],
            };
            let found = loop {
                if k >= self.n_slots {
                    break None;
                }
                if rows
                    .iter()
                    .all(|&b| self.row_slots[(b - 1) as usize][k as usize])
                {
                    break Some(k);
                }
                k += 1;
            };
            match found {
                Some(k) => prev = Some(k),
                None => return false,
            }
        }
        true
    }

    /// Greedy y-chain inside fixed cell windows.
    fn greedy_windows(&self, cells: &[u16], gaps: &[i128]) -> bool {
        let mut prev: Option<i128> = None;
        for (i, &a) in cells.iter().enumerate() {
            let lo = self.gd * (a as i128 - 1) + 1;
            let hi = self.gd * a as i128 - 1;
            let s = match prev {
                None => lo,
                Some(p) => lo.max(p + gaps[i - 1]),
            };
            if s > hi {
                return false;
            }
            prev = Some(s);
        }
        true
    }
}

fn scaled(r: Rat, denom: i128) -> i128 {
    let v = r * Rat::new(denom, 1);
    debug_assert!(v.is_integer(), "denominator must clear all rationals");
    v.numer()
}

fn for_each_row_assignment(
    r: u32,
    n_classes: usize,
    visit: &mut dyn FnMut(&[u16]) -> bool,
) -> bool {
    fn rec(r: u32, n_classes: usize, state: &mut Vec<u16>, visit: &mut dyn FnMut(&[u16]) -> bool) -> bool {
        if state.len() == n_classes {
            return visit(state);
        }
        let lo = state.last().copied().unwrap_or(1);
        for a in lo..=r as u16 {
            state.push(a);
            if rec(r, n_classes, state, visit) {
                return true;
            }
            state.pop();
        }
        false
    }
    rec(r, n_classes, &mut Vec::new(), visit)
}

/// Reference decision for finite patterns (d = 2).
pub fn finite_contains_ref(region: &GridRegion, pattern: &FinitePattern, mult: i128) -> Result<bool> {
    if pattern.dim() != 2 {
        return Err(Error::DimMismatch("slot oracle is two-dimensional".into()));
    }
    let mut denoms: Vec<i128> = Vec::new();
    for p in pattern.points() {
        denoms.push(p[0].denom());
        denoms.push(p[1].denom());
    }
    let grid = SlotGrid::new(region, &denoms, mult)?;
    let y_classes = pattern.axis_classes(1);
    let x_classes = pattern.axis_classes(0);
    let y_gaps: Vec<i128> =
        pattern.axis_gaps(1).iter().map(|g| scaled(*g, grid.denom)).collect();
    let x_gaps: Vec<i128> =
        pattern.axis_gaps(0).iter().map(|g| scaled(*g, grid.denom)).collect();
    let y_rank = |v: &Rat| y_classes.iter().position(|(w, _)| w == v).expect("class");
    let rows_needed: Vec<Vec<usize>> = x_classes
        .iter()
        .map(|(_, members)| {
            let mut ks: Vec<usize> = members.iter().map(|p| y_rank(&p[1])).collect();
            ks.sort_unstable();
            ks.dedup();
            ks
        })
        .collect();

    Ok(for_each_row_assignment(grid.r, y_classes.len(), &mut |cells| {
        if !grid.greedy_windows(cells, &y_gaps) {
            return false;
        }
        let rows_per_class: Vec<Vec<u16>> = rows_needed
            .iter()
            .map(|ks| ks.iter().map(|&k| cells[k]).collect())
            .collect();
        grid.greedy_chain(&rows_per_class, &x_gaps)
    }))
}

/// Reference decision for disjoint unions of horizontal segments.
pub fn segments_contains_ref(
    region: &GridRegion,
    sp: &SegmentPattern,
    mult: i128,
) -> Result<bool> {
    let segs = sp.segments();
    let mut denoms: Vec<i128> = Vec::new();
    for s in segs {
        denoms.extend([s.y.denom(), s.x_lo.denom(), s.x_hi.denom()]);
    }
    let grid = SlotGrid::new(region, &denoms, mult)?;

    let mut y_sorted: Vec<(Rat, usize)> = segs.iter().enumerate().map(|(i, s)| (s.y, i)).collect();
    y_sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let y_gaps: Vec<i128> =
        y_sorted.windows(2).map(|w| scaled(w[1].0 - w[0].0, grid.denom)).collect();
    let mut y_rank = vec![0usize; segs.len()];
    for (rank, &(_, i)) in y_sorted.iter().enumerate() {
        y_rank[i] = rank;
    }

    Ok(for_each_row_assignment(grid.r, segs.len(), &mut |cells| {
        if !grid.greedy_windows(cells, &y_gaps) {
            return false;
        }
        // Sample every segment at slot granularity and embed the samples
        // left to right with one global expanding map.
        let mut prev: Option<(i128, i128)> = None; // (sample x in slots, image slot)
        for (k, seg) in segs.iter().enumerate() {
            let row = cells[y_rank[k]];
            let x0 = scaled(seg.x_lo, grid.denom);
            let x1 = scaled(seg.x_hi, grid.denom);
            for x in x0..=x1 {
                let lower = match prev {
                    None => 1,
                    Some((px, ps)) => ps + (x - px),
                };
                match grid.next_slot(row, lower) {
                    Some(s) => prev = Some((x, s)),
                    None => return false,
                }
            }
        }
        true
    }))
}

/// Reference decision for stacked equal segments.
pub fn stack_contains_ref(region: &GridRegion, st: &StackPattern, mult: i128) -> Result<bool> {
    let denoms = [st.s.denom(), st.c.denom()];
    let grid = SlotGrid::new(region, &denoms, mult)?;
    let c_slots = scaled(st.c, grid.denom);
    let s_slots = scaled(st.s, grid.denom);
    let y_gaps = vec![c_slots; (st.t - 1) as usize];

    Ok(for_each_row_assignment(grid.r, st.t as usize, &mut |cells| {
        if !grid.greedy_windows(cells, &y_gaps) {
            return false;
        }
        let rows: Vec<u16> = {
            let mut v = cells.to_vec();
            v.dedup();
            v
        };
        // One expanding map carries the common x-interval [0, s] into
        // slots usable in every chosen row.
        let mut prev: Option<i128> = None;
        for _ in 0..=s_slots {
            let lower = prev.map_or(1, |p| p + 1);
            let mut k = lower;
            let found = loop {
                if k >= grid.n_slots {
                    break None;
                }
                if rows.iter().all(|&b| grid.row_slots[(b - 1) as usize][k as usize]) {
                    break Some(k);
                }
                k += 1;
            };
            match found {
                Some(k) => prev = Some(k),
                None => return false,
            }
        }
        true
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_zarankiewicz_values() {
        assert_eq!(max_ones_no_two_by_two(1), 1);
        assert_eq!(max_ones_no_two_by_two(2), 3);
        assert_eq!(max_ones_no_two_by_two(3), 6);
        assert_eq!(max_ones_no_two_by_two(4), 9);
    }

    #[test]
    fn slot_oracle_matches_obvious_cases() {
        let r = |v: i64| Rat::from_int(v);
        let region =
            GridRegion::new(2, r(2), 2, vec![vec![1u16, 1], vec![2, 1]]).unwrap();
        // Two cells in one row host an x-gap of 1 strictly inside.
        let p = FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(0))]);
        assert!(finite_contains_ref(&region, &p, 12).unwrap());
        let single = GridRegion::new(2, r(2), 2, vec![vec![1u16, 1]]).unwrap();
        assert!(!finite_contains_ref(&single, &p, 12).unwrap());
    }
}
