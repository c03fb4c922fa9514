//! Explicit lower-bound objects: matrix-to-region lifting, strips,
//! L-shapes, square grid point patterns, and dimension lifting.
//!
//! Constructors are exact and strict about alignment: parameters that do
//! not land on cell boundaries are rejected rather than rounded, so
//! every stated measure identity holds as a rational equality.

use crate::error::{Error, Result};
use crate::grid::GridRegion;
use crate::matrix::BitMatrix;
use crate::pattern::FinitePattern;
use crate::rat::Rat;

/// The single open `c x c` cell per one of `A`, matrix row 1 mapped to
/// the top cell-row: one at `(i, j)` becomes the open square
/// `(c(j-1), cj) x (n - ci, n - c(i-1))`. Requires `A` square with side
/// `n/c`. The measure is exactly `c^2 * |A|`.
pub fn region_from_matrix(a: &BitMatrix, c: Rat, n: Rat) -> Result<GridRegion> {
    if a.dim() != 2 {
        return Err(Error::DimMismatch("matrix lifting is two-dimensional".into()));
    }
    if !c.is_positive() || !n.is_positive() {
        return Err(Error::BadParams("cell side and region side must be positive".into()));
    }
    let side = n / c;
    if !side.is_integer() {
        return Err(Error::Misaligned(format!("n/c = {side} is not an integer")));
    }
    let side = side.numer();
    if !(1..=crate::matrix::MAX_AXIS as i128).contains(&side) {
        return Err(Error::GuardExceeded(format!(
            "n/c = {side} outside 1..={}",
            crate::matrix::MAX_AXIS
        )));
    }
    if a.dims()[0] as i128 != side || a.dims()[1] as i128 != side {
        return Err(Error::Misaligned(format!(
            "matrix is {}x{}, expected {side}x{side} for n = {n}, c = {c}",
            a.dims()[0],
            a.dims()[1]
        )));
    }
    let r = side as u16;
    let cells = a.ones().map(|t| vec![t[1] as u16, r + 1 - t[0] as u16]);
    GridRegion::new(2, n, r as u32, cells)
}

/// Largest cell side `c <= min(c', 1)` for which `n/c` is an integer:
/// the alignment the matrix-lifting construction uses when the caller
/// has only a minimum class gap `c'`.
pub fn aligned_cell_side(c_prime: Rat, n: Rat) -> Result<Rat> {
    if !c_prime.is_positive() || !n.is_positive() {
        return Err(Error::BadParams("gap and side must be positive".into()));
    }
    let m = c_prime.min(Rat::one());
    let k = (n / m).ceil();
    Ok(n / Rat::new(k, 1))
}

/// The open vertical strip `(0, c) x (0, n)` at resolution `r`; `g` must
/// divide `c`.
pub fn strip(c: Rat, n: Rat, r: u32) -> Result<GridRegion> {
    if !c.is_positive() || c > n {
        return Err(Error::BadParams(format!("strip width {c} outside (0, {n}]")));
    }
    let g = n / Rat::from_int(r as i64);
    let cols = c / g;
    if !cols.is_integer() {
        return Err(Error::Misaligned(format!(
            "strip width {c} is not a multiple of the cell side {g}"
        )));
    }
    let cols = cols.numer() as u16;
    let cells = (1..=cols).flat_map(|a| (1..=r as u16).map(move |b| vec![a, b]));
    GridRegion::new(2, n, r, cells)
}

/// The open L-shape `(0, a) x (0, n)  union  (0, n) x (0, b)` at
/// resolution `r`; measure exactly `(a + b) n - a b`.
pub fn lshape(a: Rat, b: Rat, n: Rat, r: u32) -> Result<GridRegion> {
    if !a.is_positive() || !b.is_positive() || a > n || b > n {
        return Err(Error::BadParams(format!("arm widths {a}, {b} must lie in (0, {n}]")));
    }
    let g = n / Rat::from_int(r as i64);
    let a_cols = a / g;
    let b_rows = b / g;
    if !a_cols.is_integer() || !b_rows.is_integer() {
        return Err(Error::Misaligned(format!(
            "arm widths {a}, {b} are not multiples of the cell side {g}"
        )));
    }
    let a_cols = a_cols.numer() as u16;
    let b_rows = b_rows.numer() as u16;
    let vertical = (1..=a_cols).flat_map(|x| (1..=r as u16).map(move |y| vec![x, y]));
    let horizontal = (1..=r as u16).flat_map(|x| (1..=b_rows).map(move |y| vec![x, y]));
    GridRegion::new(2, n, r, vertical.chain(horizontal))
}

/// `Q_r`: the r-by-r rational grid `{ic/r : i = 1..r}^2` inside `[0,c]^2`.
pub fn grid_pattern_rational(r: u32, c: Rat) -> Result<FinitePattern> {
    if r < 2 {
        return Err(Error::BadParams(format!("grid needs r >= 2, got {r}")));
    }
    if !c.is_positive() {
        return Err(Error::BadParams("grid extent must be positive".into()));
    }
    let coord = |i: u32| c * Rat::new(i as i128, r as i128);
    let points =
        (1..=r).flat_map(|i| (1..=r).map(move |j| vec![coord(i), coord(j)]));
    FinitePattern::new(2, points)
}

/// `H_r`: the integer grid `{1..r}^2`.
pub fn grid_pattern_integer(r: u32) -> Result<FinitePattern> {
    if r < 2 {
        return Err(Error::BadParams(format!("grid needs r >= 2, got {r}")));
    }
    let points = (1..=r).flat_map(|i| {
        (1..=r).map(move |j| vec![Rat::from_int(i as i64), Rat::from_int(j as i64)])
    });
    FinitePattern::new(2, points)
}

/// Replicate the cells along one new last axis: the Cartesian product
/// with `(0, n)`, multiplying the measure by exactly `n`.
pub fn product_lift(s: &GridRegion) -> Result<GridRegion> {
    let r = s.r();
    let cells = s.cells().flat_map(|c| {
        (1..=r as u16).map(move |z| {
            let mut e = c.clone();
            e.push(z);
            e
        })
    });
    GridRegion::new(s.d() + 1, s.n(), r, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{region_contains_finite, region_contains_hsegment};

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    #[test]
    fn matrix_lift_round_trip() {
        let m = BitMatrix::new(vec![3, 3], vec![vec![1, 1], vec![2, 3], vec![3, 2]]).unwrap();
        let s = region_from_matrix(&m, r(1), r(3)).unwrap();
        assert_eq!(s.measure(), r(3));
        assert_eq!(s.to_matrix().unwrap(), m);
        // single one
        let single = BitMatrix::new(vec![1, 1], vec![vec![1, 1]]).unwrap();
        let s1 = region_from_matrix(&single, Rat::new(1, 2), Rat::new(1, 2)).unwrap();
        assert_eq!(s1.measure(), Rat::new(1, 4));
        // all ones
        let full = BitMatrix::j(2, 2);
        let sf = region_from_matrix(&full, r(1), r(2)).unwrap();
        assert_eq!(sf.measure(), r(4));
        // misalignment
        assert!(region_from_matrix(&full, r(1), r(3)).is_err());
    }

    #[test]
    fn aligned_side_examples() {
        // min(c', 1) = 1 and n integer: c = 1.
        assert_eq!(aligned_cell_side(r(2), r(4)).unwrap(), r(1));
        // c' = 2/3, n = 4: k = ceil(6) = 6, c = 2/3.
        assert_eq!(aligned_cell_side(Rat::new(2, 3), r(4)).unwrap(), Rat::new(2, 3));
        // c' = 3/5, n = 4: k = ceil(20/3) = 7, c = 4/7 <= 3/5.
        let c = aligned_cell_side(Rat::new(3, 5), r(4)).unwrap();
        assert_eq!(c, Rat::new(4, 7));
        assert!(c <= Rat::new(3, 5));
        assert!(c >= Rat::new(3, 10), "never below half of min(c', 1)");
    }

    #[test]
    fn strip_measure_and_avoidance() {
        let s = strip(r(1), r(4), 4).unwrap();
        assert_eq!(s.measure(), r(4));
        assert!(!region_contains_hsegment(&s, r(1)).unwrap());
        assert!(strip(r(1), r(4), 2).is_err(), "g = 2 does not divide 1");
    }

    #[test]
    fn lshape_measures() {
        let s = lshape(r(1), r(1), r(2), 2).unwrap();
        assert_eq!(s.measure(), r(3));
        // a = b = n degenerates to the full square.
        let full = lshape(r(2), r(2), r(2), 2).unwrap();
        assert_eq!(full.measure(), r(4));
        // rational arms at a matching resolution
        let s2 = lshape(Rat::new(1, 2), Rat::new(3, 2), r(2), 4).unwrap();
        assert_eq!(s2.measure(), Rat::new(1, 2) * r(2) + Rat::new(3, 2) * r(2) - Rat::new(3, 4));
        assert!(lshape(Rat::new(1, 3), r(1), r(2), 4).is_err());
    }

    #[test]
    fn grid_patterns_map_to_all_ones() {
        for rr in [2u32, 3] {
            let q = grid_pattern_rational(rr, Rat::new(2, 3)).unwrap();
            assert_eq!(q.len(), (rr * rr) as usize);
            assert_eq!(q.to_matrix(), BitMatrix::all_ones(vec![rr, rr]).unwrap());
            let h = grid_pattern_integer(rr).unwrap();
            assert_eq!(h.to_matrix(), BitMatrix::all_ones(vec![rr, rr]).unwrap());
            let dilated = h.transform(&crate::pattern::Transform::Dilate(r(3))).unwrap();
            assert_eq!(dilated.to_matrix(), BitMatrix::all_ones(vec![rr, rr]).unwrap());
        }
    }

    #[test]
    fn lift_multiplies_measure_by_n() {
        let s = strip(r(1), r(4), 4).unwrap();
        let lifted = product_lift(&s).unwrap();
        assert_eq!(lifted.d(), 3);
        assert_eq!(lifted.measure(), s.measure() * r(4));
        let empty = GridRegion::empty(2, r(4), 4).unwrap();
        assert_eq!(product_lift(&empty).unwrap().measure(), Rat::zero());
    }

    #[test]
    fn lifted_strip_avoids_lifted_two_point_pattern() {
        // The planar pattern {(0,0),(1,0)} lifted with constant last
        // coordinate; the lifted strip of width 1 avoids it.
        let s = strip(r(1), r(4), 4).unwrap();
        let lifted = product_lift(&s).unwrap();
        let p3 = FinitePattern::new(
            3,
            vec![vec![r(0), r(0), r(0)], vec![r(1), r(0), r(0)]],
        )
        .unwrap();
        assert!(region_contains_finite(&lifted, &p3).unwrap().is_none());
        let p3_ok = FinitePattern::new(
            3,
            vec![vec![r(0), r(0), r(0)], vec![Rat::new(1, 2), r(0), r(0)]],
        )
        .unwrap();
        assert!(region_contains_finite(&lifted, &p3_ok).unwrap().is_some());
    }
}
