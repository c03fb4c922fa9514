//! d-dimensional 0-1 matrices, submatrix containment, and the blowup
//! operator that inserts blank rows and columns between consecutive lines.
//!
//! Containment follows the submatrix order: `A` contains `B` when some
//! submatrix of `A` (strictly increasing index maps per axis, no
//! wraparound or reflection) can be turned into `B` by changing ones to
//! zeroes. Two-dimensional queries run on per-row bitmasks; higher
//! dimensions use the sorted set-of-tuples representation directly.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema;

/// Hard cap on any axis length; exact operations are desk-scale only.
pub const MAX_AXIS: u32 = 64;

/// A 0-1 matrix of dimension `d >= 2` with 1-based index tuples.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    dims: Vec<u32>,
    ones: BTreeSet<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    schema: String,
    dims: Vec<u32>,
    ones: Vec<Vec<u32>>,
}

impl BitMatrix {
    pub fn new(dims: Vec<u32>, ones: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidMatrix(format!(
                "need at least 2 dimensions, got {}",
                dims.len()
            )));
        }
        for &n in &dims {
            if n == 0 || n > MAX_AXIS {
                return Err(Error::InvalidMatrix(format!(
                    "axis length {n} outside 1..={MAX_AXIS}"
                )));
            }
        }
        let mut set = BTreeSet::new();
        for tuple in ones {
            if tuple.len() != dims.len() {
                return Err(Error::InvalidMatrix(format!(
                    "index tuple {tuple:?} has arity {}, expected {}",
                    tuple.len(),
                    dims.len()
                )));
            }
            for (idx, (&i, &n)) in tuple.iter().zip(&dims).enumerate() {
                if i == 0 || i > n {
                    return Err(Error::InvalidMatrix(format!(
                        "index {i} on axis {idx} outside 1..={n} (indices are 1-based)"
                    )));
                }
            }
            set.insert(tuple);
        }
        Ok(BitMatrix { dims, ones: set })
    }

    /// The all-ones matrix with the given dimensions (`J_{s,t}` for d = 2).
    pub fn all_ones(dims: Vec<u32>) -> Result<Self> {
        let mut ones: Vec<Vec<u32>> = vec![vec![]];
        for &n in &dims {
            ones = ones
                .into_iter()
                .flat_map(|p| {
                    (1..=n).map(move |i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                })
                .collect();
        }
        BitMatrix::new(dims, ones)
    }

    /// `J_{s,t}`: the s-row, t-column all-ones matrix.
    pub fn j(s: u32, t: u32) -> Self {
        BitMatrix::all_ones(vec![s, t]).expect("all-ones dims validated by caller")
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn ones(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.ones.iter()
    }

    pub fn count_ones(&self) -> u64 {
        self.ones.len() as u64
    }

    pub fn has_one(&self, tuple: &[u32]) -> bool {
        self.ones.contains(tuple)
    }

    /// Per-row column masks for d = 2: bit `j-1` of word `i-1` is entry `(i, j)`.
    pub fn row_masks(&self) -> Vec<u64> {
        assert_eq!(self.dim(), 2, "row masks are a 2-d representation");
        let mut masks = vec![0u64; self.dims[0] as usize];
        for t in &self.ones {
            masks[(t[0] - 1) as usize] |= 1u64 << (t[1] - 1);
        }
        masks
    }

    pub fn from_row_masks(rows: u32, cols: u32, masks: &[u64]) -> Result<Self> {
        let mut ones = Vec::new();
        for (i, &m) in masks.iter().enumerate() {
            let mut m = m;
            while m != 0 {
                let j = m.trailing_zeros();
                ones.push(vec![i as u32 + 1, j + 1]);
                m &= m - 1;
            }
        }
        BitMatrix::new(vec![rows, cols], ones)
    }

    /// Insert `k` all-zero lines between every pair of consecutive lines
    /// along every axis; ones land at `1 + (i-1)(k+1)`.
    pub fn blowup(&self, k: u32) -> Result<Self> {
        let dims: Vec<u32> = self.dims.iter().map(|&n| n + k * (n - 1)).collect();
        if let Some(&n) = dims.iter().find(|&&n| n > MAX_AXIS) {
            return Err(Error::GuardExceeded(format!(
                "blowup axis length {n} exceeds {MAX_AXIS}"
            )));
        }
        let ones = self
            .ones
            .iter()
            .map(|t| t.iter().map(|&i| 1 + (i - 1) * (k + 1)).collect());
        BitMatrix::new(dims, ones)
    }

    /// Horizontal reflection (column order reversed); d = 2 only.
    pub fn reflect_h(&self) -> Self {
        assert_eq!(self.dim(), 2);
        let (r, c) = (self.dims[0], self.dims[1]);
        let ones = self.ones.iter().map(|t| vec![t[0], c + 1 - t[1]]);
        BitMatrix::new(vec![r, c], ones).expect("reflection preserves validity")
    }

    /// Vertical reflection (row order reversed); d = 2 only.
    pub fn reflect_v(&self) -> Self {
        assert_eq!(self.dim(), 2);
        let (r, c) = (self.dims[0], self.dims[1]);
        let ones = self.ones.iter().map(|t| vec![r + 1 - t[0], t[1]]);
        BitMatrix::new(vec![r, c], ones).expect("reflection preserves validity")
    }

    /// Clockwise quarter turn; d = 2 only.
    pub fn rotate90(&self) -> Self {
        assert_eq!(self.dim(), 2);
        let (r, c) = (self.dims[0], self.dims[1]);
        let ones = self.ones.iter().map(|t| vec![t[1], r + 1 - t[0]]);
        BitMatrix::new(vec![c, r], ones).expect("rotation preserves validity")
    }

    /// Does `self` contain `other` as a submatrix (ones may be superfluous)?
    pub fn contains(&self, other: &BitMatrix) -> Result<bool> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(format!(
                "containment between dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        if other.ones.is_empty() {
            // Index maps exist vacuously whenever the host axes are long
            // enough to embed the pattern's axes.
            return Ok(self.dims.iter().zip(&other.dims).all(|(a, b)| a >= b));
        }
        if self.dims.iter().zip(&other.dims).any(|(a, b)| a < b) {
            return Ok(false);
        }
        if self.dim() == 2 {
            Ok(contains_2d(
                &self.row_masks(),
                self.dims[1],
                &other.row_masks(),
                other.dims[1],
            ))
        } else {
            Ok(contains_nd(self, other))
        }
    }

    /// Number of containment witnesses (pairs of strictly increasing
    /// per-axis index maps sending every one of `other` onto a one of
    /// `self`). Exact; desk-scale guard enforced.
    pub fn count_copies(&self, other: &BitMatrix) -> Result<u128> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(format!(
                "copy count between dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        if self.dims.iter().any(|&n| n > 32) {
            return Err(Error::GuardExceeded(
                "copy counting is limited to hosts with axes <= 32".into(),
            ));
        }
        if other.dims.iter().any(|&n| n > 8) {
            return Err(Error::GuardExceeded(
                "copy counting is limited to patterns with axes <= 8".into(),
            ));
        }
        if self.dims.iter().zip(&other.dims).any(|(a, b)| a < b) {
            return Ok(0);
        }
        if self.dim() == 2 {
            Ok(count_copies_2d(self, other))
        } else {
            Ok(count_copies_nd(self, other))
        }
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            schema: schema::SCHEMA.to_string(),
            dims: self.dims.clone(),
            ones: self.ones.iter().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        schema::expect(&raw.schema).map_err(serde::de::Error::custom)?;
        BitMatrix::new(raw.dims, raw.ones).map_err(serde::de::Error::custom)
    }
}

/// Greedy leftmost increasing selection: for each pattern column in order,
/// pick the smallest host column above the previous pick that lies in the
/// column's candidate mask. Greedy is exact for this chain structure.
fn greedy_columns(col_masks: &[u64]) -> bool {
    let mut used: u64 = 0; // all columns at or below the previous pick
    for &m in col_masks {
        let avail = m & !used;
        if avail == 0 {
            return false;
        }
        let c = avail.trailing_zeros();
        used = if c >= 63 { !0 } else { (1u64 << (c + 1)) - 1 };
    }
    true
}

/// Candidate host-column masks for each pattern column, given the pattern
/// rows assigned so far. Columns not yet constrained stay fully free.
fn column_masks(
    a_masks: &[u64],
    a_cols: u32,
    b_masks: &[u64],
    b_cols: u32,
    assignment: &[usize],
) -> Vec<u64> {
    let full = if a_cols == 64 { !0u64 } else { (1u64 << a_cols) - 1 };
    let mut masks = vec![full; b_cols as usize];
    for (bi, &ai) in assignment.iter().enumerate() {
        let mut row = b_masks[bi];
        while row != 0 {
            let j = row.trailing_zeros() as usize;
            masks[j] &= a_masks[ai];
            row &= row - 1;
        }
    }
    masks
}

fn contains_2d(a_masks: &[u64], a_cols: u32, b_masks: &[u64], b_cols: u32) -> bool {
    let a_rows = a_masks.len();
    let b_rows = b_masks.len();
    let mut assignment: Vec<usize> = Vec::with_capacity(b_rows);

    fn rec(
        a_masks: &[u64],
        a_cols: u32,
        b_masks: &[u64],
        b_cols: u32,
        assignment: &mut Vec<usize>,
    ) -> bool {
        let k = assignment.len();
        if k == b_masks.len() {
            return greedy_columns(&column_masks(a_masks, a_cols, b_masks, b_cols, assignment));
        }
        let start = assignment.last().map_or(0, |&r| r + 1);
        // Leave room for the remaining pattern rows.
        let last_start = a_masks.len() - (b_masks.len() - k);
        for r in start..=last_start {
            assignment.push(r);
            // Relaxed feasibility on the rows chosen so far prunes most
            // dead branches before the assignment is complete.
            if greedy_columns(&column_masks(a_masks, a_cols, b_masks, b_cols, assignment))
                && rec(a_masks, a_cols, b_masks, b_cols, assignment)
            {
                return true;
            }
            assignment.pop();
        }
        false
    }

    if b_rows > a_rows {
        return false;
    }
    rec(a_masks, a_cols, b_masks, b_cols, &mut assignment)
}

fn count_copies_2d(a: &BitMatrix, b: &BitMatrix) -> u128 {
    let a_masks = a.row_masks();
    let b_masks = b.row_masks();
    let a_cols = a.dims()[1];
    let b_cols = b.dims()[1] as usize;
    let b_rows = b_masks.len();
    let mut total = 0u128;
    let mut assignment = Vec::with_capacity(b_rows);

    fn column_ways(col_masks: &[u64], a_cols: u32) -> u128 {
        // ways[c] = number of increasing selections ending at column c.
        let mut ways = vec![0u128; a_cols as usize];
        for c in 0..a_cols as usize {
            if col_masks[0] >> c & 1 == 1 {
                ways[c] = 1;
            }
        }
        for m in &col_masks[1..] {
            let mut next = vec![0u128; a_cols as usize];
            let mut prefix = 0u128;
            for c in 0..a_cols as usize {
                if m >> c & 1 == 1 {
                    next[c] = prefix;
                }
                prefix += ways[c];
            }
            ways = next;
        }
        ways.iter().sum()
    }

    fn rec(
        a_masks: &[u64],
        a_cols: u32,
        b_masks: &[u64],
        b_cols: usize,
        assignment: &mut Vec<usize>,
        total: &mut u128,
    ) {
        let k = assignment.len();
        if k == b_masks.len() {
            let masks = column_masks(a_masks, a_cols, b_masks, b_cols as u32, assignment);
            *total += column_ways(&masks, a_cols);
            return;
        }
        let start = assignment.last().map_or(0, |&r| r + 1);
        let last_start = a_masks.len() - (b_masks.len() - k);
        for r in start..=last_start {
            assignment.push(r);
            rec(a_masks, a_cols, b_masks, b_cols, assignment, total);
            assignment.pop();
        }
    }

    if b_rows > a_masks.len() {
        return 0;
    }
    rec(&a_masks, a_cols, &b_masks, b_cols, &mut assignment, &mut total);
    total
}

/// Axis-by-axis search for d >= 3: assign strictly increasing index maps
/// one axis at a time and check the ones at the leaf. Desk-scale sizes only.
fn contains_nd(a: &BitMatrix, b: &BitMatrix) -> bool {
    let d = a.dim();
    let mut maps: Vec<Vec<u32>> = Vec::with_capacity(d);

    fn rec(a: &BitMatrix, b: &BitMatrix, maps: &mut Vec<Vec<u32>>) -> bool {
        let axis = maps.len();
        if axis == a.dim() {
            return b.ones().all(|t| {
                let image: Vec<u32> =
                    t.iter().enumerate().map(|(ax, &i)| maps[ax][(i - 1) as usize]).collect();
                a.has_one(&image)
            });
        }
        let need = b.dims()[axis] as usize;
        let avail = a.dims()[axis];
        let mut map: Vec<u32> = Vec::with_capacity(need);
        fn choose(
            a: &BitMatrix,
            b: &BitMatrix,
            maps: &mut Vec<Vec<u32>>,
            map: &mut Vec<u32>,
            need: usize,
            avail: u32,
        ) -> bool {
            if map.len() == need {
                maps.push(map.clone());
                let ok = rec(a, b, maps);
                maps.pop();
                return ok;
            }
            let start = map.last().map_or(1, |&i| i + 1);
            let last_start = avail - (need - map.len()) as u32 + 1;
            for i in start..=last_start {
                map.push(i);
                if choose(a, b, maps, map, need, avail) {
                    return true;
                }
                map.pop();
            }
            false
        }
        choose(a, b, maps, &mut map, need, avail)
    }

    rec(a, b, &mut maps)
}

fn count_copies_nd(a: &BitMatrix, b: &BitMatrix) -> u128 {
    fn rec(a: &BitMatrix, b: &BitMatrix, maps: &mut Vec<Vec<u32>>, total: &mut u128) {
        let axis = maps.len();
        if axis == a.dim() {
            let ok = b.ones().all(|t| {
                let image: Vec<u32> =
                    t.iter().enumerate().map(|(ax, &i)| maps[ax][(i - 1) as usize]).collect();
                a.has_one(&image)
            });
            if ok {
                *total += 1;
            }
            return;
        }
        let need = b.dims()[axis] as usize;
        let avail = a.dims()[axis];
        choose(a, b, maps, &mut Vec::new(), need, avail, total);
    }

    fn choose(
        a: &BitMatrix,
        b: &BitMatrix,
        maps: &mut Vec<Vec<u32>>,
        map: &mut Vec<u32>,
        need: usize,
        avail: u32,
        total: &mut u128,
    ) {
        if map.len() == need {
            maps.push(map.clone());
            rec(a, b, maps, total);
            maps.pop();
            return;
        }
        let start = map.last().map_or(1, |&i| i + 1);
        let last_start = avail - (need - map.len()) as u32 + 1;
        for i in start..=last_start {
            map.push(i);
            choose(a, b, maps, map, need, avail, total);
            map.pop();
        }
    }

    let mut total = 0u128;
    rec(a, b, &mut Vec::new(), &mut total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(dims: [u32; 2], ones: &[[u32; 2]]) -> BitMatrix {
        BitMatrix::new(dims.to_vec(), ones.iter().map(|t| t.to_vec())).unwrap()
    }

    #[test]
    fn contains_itself() {
        let a = m([3, 3], &[[1, 1], [2, 3], [3, 2]]);
        assert!(a.contains(&a).unwrap());
    }

    #[test]
    fn all_ones_contains_j22() {
        let a = BitMatrix::j(3, 3);
        assert!(a.contains(&BitMatrix::j(2, 2)).unwrap());
    }

    #[test]
    fn identity_avoids_j22() {
        let a = m([2, 2], &[[1, 1], [2, 2]]);
        assert!(!a.contains(&BitMatrix::j(2, 2)).unwrap());
    }

    #[test]
    fn dim_mismatch_is_an_error() {
        let a = BitMatrix::j(2, 2);
        let b = BitMatrix::all_ones(vec![2, 2, 2]).unwrap();
        assert!(a.contains(&b).is_err());
    }

    #[test]
    fn blowup_shapes_and_ones() {
        let j = BitMatrix::j(2, 2);
        assert_eq!(j.blowup(0).unwrap(), j);
        let b = j.blowup(1).unwrap();
        assert_eq!(b.dims(), &[3, 3]);
        let corners: BTreeSet<Vec<u32>> =
            [[1, 1], [1, 3], [3, 1], [3, 3]].iter().map(|t| t.to_vec()).collect();
        assert_eq!(b.ones().cloned().collect::<BTreeSet<_>>(), corners);
        assert_eq!(b.count_ones(), j.count_ones());
    }

    #[test]
    fn count_copies_j33_j22() {
        let a = BitMatrix::j(3, 3);
        assert_eq!(a.count_copies(&BitMatrix::j(2, 2)).unwrap(), 9);
    }

    #[test]
    fn count_copies_single_one() {
        let a = m([2, 2], &[[1, 1], [2, 2]]);
        let b = m([1, 1], &[[1, 1]]);
        // 1x1 matrices are below the d >= 2 floor, so build the single-one
        // pattern as 1-row 1-col via new(); dims [1,1] are valid.
        assert_eq!(a.count_copies(&b).unwrap(), 2);
    }

    #[test]
    fn empty_pattern_contained_when_axes_fit() {
        let a = m([2, 2], &[[1, 1]]);
        let empty = BitMatrix::new(vec![2, 2], Vec::<Vec<u32>>::new()).unwrap();
        assert!(a.contains(&empty).unwrap());
        let wide = BitMatrix::new(vec![2, 3], Vec::<Vec<u32>>::new()).unwrap();
        let a23 = BitMatrix::new(vec![2, 3], vec![vec![1, 1]]).unwrap();
        assert!(a23.contains(&wide).unwrap());
        assert!(!a.contains(&BitMatrix::new(vec![3, 2], Vec::<Vec<u32>>::new()).unwrap()).unwrap());
    }

    #[test]
    fn three_dimensional_containment() {
        let a = BitMatrix::all_ones(vec![2, 2, 2]).unwrap();
        let b = BitMatrix::new(vec![1, 1, 2], vec![vec![1, 1, 1], vec![1, 1, 2]]).unwrap();
        assert!(a.contains(&b).unwrap());
        let sparse = BitMatrix::new(vec![2, 2, 2], vec![vec![1, 1, 1], vec![2, 2, 2]]).unwrap();
        assert!(!sparse.contains(&BitMatrix::all_ones(vec![1, 1, 2]).unwrap()).unwrap());
        assert!(sparse.contains(&b).is_ok());
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(BitMatrix::new(vec![2, 2], vec![vec![0, 1]]).is_err());
        assert!(BitMatrix::new(vec![2, 2], vec![vec![3, 1]]).is_err());
        assert!(BitMatrix::new(vec![2], vec![vec![1]]).is_err());
        assert!(BitMatrix::new(vec![65, 2], Vec::<Vec<u32>>::new()).is_err());
    }

    #[test]
    fn json_roundtrip_and_schema() {
        let a = m([2, 3], &[[1, 2], [2, 3]]);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"schema\":\"zarex/1\""));
        let back: BitMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
        let bad = s.replace("zarex/1", "zarex/9");
        assert!(serde_json::from_str::<BitMatrix>(&bad).is_err());
    }
}
