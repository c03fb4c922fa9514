//! Forbidden-pattern families with exact rational coordinates.
//!
//! Three families cover everything the deciders handle: finite point
//! sets in any dimension `d >= 2`, disjoint unions of horizontal
//! segments, and vertical stacks of equal-length horizontal segments.
//! A single horizontal segment and the "finite pattern plus one appended
//! segment" shape used by the inequality checks are carried as their own
//! small types.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::rat::Rat;
use crate::schema;

/// A nonempty finite set of distinct points in `R^d`, `d >= 2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinitePattern {
    dim: usize,
    points: BTreeSet<Vec<Rat>>,
}

/// One closed horizontal segment of a [`SegmentPattern`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Segment {
    pub y: Rat,
    pub x_lo: Rat,
    pub x_hi: Rat,
}

/// A disjoint union of horizontal segments: distinct rows, pairwise
/// disjoint x-projections, listed left to right.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SegmentPattern {
    segments: Vec<Segment>,
}

/// `t` horizontal closed segments of length `s` stacked at vertical
/// gaps `c`: the points `(x, y)` with `x` in `[0, s]` and `y` in
/// `{c, 2c, ..., tc}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StackPattern {
    pub s: Rat,
    pub t: u32,
    pub c: Rat,
}

/// A single closed horizontal segment of length `c`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HSegment {
    pub c: Rat,
}

/// A finite pattern with one horizontal segment of length `seg_len`
/// attached to the right of `anchor`, a point in the rightmost column.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AugmentedPattern {
    pub points: FinitePattern,
    pub anchor: Vec<Rat>,
    pub seg_len: Rat,
}

/// Geometric transforms on finite patterns. Rotation and reflections are
/// two-dimensional; translation and dilation work in any dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Transform {
    Rotate90,
    ReflectH,
    ReflectV,
    Translate(Vec<Rat>),
    Dilate(Rat),
}

impl FinitePattern {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Vec<Rat>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidPattern(format!("dimension {dim} below 2")));
        }
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::InvalidPattern(format!(
                    "point {p:?} has arity {}, expected {dim}",
                    p.len()
                )));
            }
            set.insert(p);
        }
        if set.is_empty() {
            return Err(Error::InvalidPattern("pattern must be nonempty".into()));
        }
        Ok(FinitePattern { dim, points: set })
    }

    /// 2-d convenience constructor.
    pub fn from_xy(points: &[(Rat, Rat)]) -> Self {
        FinitePattern::new(2, points.iter().map(|&(x, y)| vec![x, y]))
            .expect("2-d literals are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl Iterator<Item = &Vec<Rat>> {
        self.points.iter()
    }

    /// Distinct values of the `axis`-th coordinate in ascending order,
    /// each with the points that share it. The classes partition the
    /// pattern: disjoint, covering, each nonempty.
    pub fn axis_classes(&self, axis: usize) -> Vec<(Rat, Vec<Vec<Rat>>)> {
        assert!(axis < self.dim);
        let mut classes: Vec<(Rat, Vec<Vec<Rat>>)> = Vec::new();
        let mut values: Vec<Rat> = self.points.iter().map(|p| p[axis]).collect();
        values.sort();
        values.dedup();
        for v in values {
            let members = self.points.iter().filter(|p| p[axis] == v).cloned().collect();
            classes.push((v, members));
        }
        classes
    }

    /// Rows: maximal subsets sharing the last coordinate, sorted by it.
    pub fn row_classes(&self) -> Vec<(Rat, Vec<Vec<Rat>>)> {
        self.axis_classes(self.dim - 1)
    }

    /// Columns: maximal subsets sharing the first coordinate, sorted by it.
    pub fn column_classes(&self) -> Vec<(Rat, Vec<Vec<Rat>>)> {
        self.axis_classes(0)
    }

    /// Consecutive gaps between class values on one axis, ascending order.
    pub fn axis_gaps(&self, axis: usize) -> Vec<Rat> {
        let classes = self.axis_classes(axis);
        classes.windows(2).map(|w| w[1].0 - w[0].0).collect()
    }

    /// Minimum gap between consecutive rows or consecutive columns
    /// across all axes; `None` when every axis has a single class.
    pub fn min_consecutive_gap(&self) -> Option<Rat> {
        (0..self.dim).flat_map(|a| self.axis_gaps(a)).min()
    }

    pub fn max_consecutive_gap(&self) -> Option<Rat> {
        (0..self.dim).flat_map(|a| self.axis_gaps(a)).max()
    }

    /// The 0-1 matrix induced by the coordinate order classes.
    ///
    /// For d = 2 the matrix uses display orientation: row 1 is the
    /// topmost row class (largest y) and column order follows x, so the
    /// one for point `(x, y)` sits at `(desc-rank(y), asc-rank(x))`.
    /// For d >= 3 the i-th axis of the matrix indexes the i-th
    /// coordinate's classes in ascending order.
    pub fn to_matrix(&self) -> BitMatrix {
        let ranks: Vec<Vec<Rat>> = (0..self.dim)
            .map(|a| self.axis_classes(a).into_iter().map(|(v, _)| v).collect())
            .collect();
        let rank_of = |axis: usize, v: &Rat| -> u32 {
            ranks[axis].binary_search(v).expect("class value present") as u32 + 1
        };
        if self.dim == 2 {
            let n_rows = ranks[1].len() as u32;
            let n_cols = ranks[0].len() as u32;
            let ones = self
                .points
                .iter()
                .map(|p| vec![n_rows + 1 - rank_of(1, &p[1]), rank_of(0, &p[0])]);
            BitMatrix::new(vec![n_rows, n_cols], ones).expect("class counts within bounds")
        } else {
            let dims: Vec<u32> = ranks.iter().map(|r| r.len() as u32).collect();
            let ones = self
                .points
                .iter()
                .map(|p| p.iter().enumerate().map(|(a, v)| rank_of(a, v)).collect::<Vec<_>>());
            BitMatrix::new(dims, ones).expect("class counts within bounds")
        }
    }

    /// The spaced matrix of a cell-aligned pattern: class indices advance
    /// by `gap/g` instead of 1, so that containment of the pattern in a
    /// region of cell side `g` coincides with containment of this matrix
    /// in the region's occupancy matrix. Errors unless every consecutive
    /// class gap is a positive integer multiple of `g`.
    pub fn spaced_matrix(&self, g: Rat) -> Result<BitMatrix> {
        if !g.is_positive() {
            return Err(Error::BadParams("cell side must be positive".into()));
        }
        let mut index_maps: Vec<Vec<(Rat, u32)>> = Vec::new();
        for a in 0..self.dim {
            let classes = self.axis_classes(a);
            let mut map = Vec::with_capacity(classes.len());
            let mut idx = 1u32;
            for (i, (v, _)) in classes.iter().enumerate() {
                if i > 0 {
                    let gap = *v - classes[i - 1].0;
                    let steps = gap / g;
                    if !steps.is_integer() || !steps.is_positive() {
                        return Err(Error::Misaligned(format!(
                            "gap {gap} on axis {a} is not a positive multiple of cell side {g}"
                        )));
                    }
                    idx += steps.numer() as u32;
                }
                map.push((*v, idx));
            }
            index_maps.push(map);
        }
        let lookup = |axis: usize, v: &Rat| -> u32 {
            index_maps[axis].iter().find(|(w, _)| w == v).expect("class present").1
        };
        let dims: Vec<u32> = index_maps.iter().map(|m| m.last().unwrap().1).collect();
        if self.dim == 2 {
            let (rows, cols) = (dims[1], dims[0]);
            let ones = self
                .points
                .iter()
                .map(|p| vec![rows + 1 - lookup(1, &p[1]), lookup(0, &p[0])]);
            BitMatrix::new(vec![rows, cols], ones)
        } else {
            let ones = self
                .points
                .iter()
                .map(|p| p.iter().enumerate().map(|(a, v)| lookup(a, v)).collect::<Vec<_>>());
            BitMatrix::new(dims, ones)
        }
    }

    pub fn transform(&self, op: &Transform) -> Result<FinitePattern> {
        let mapped: Result<Vec<Vec<Rat>>> = match op {
            Transform::Rotate90 => {
                if self.dim != 2 {
                    return Err(Error::InvalidPattern("rotation is two-dimensional".into()));
                }
                Ok(self.points.iter().map(|p| vec![p[1], -p[0]]).collect())
            }
            Transform::ReflectH => {
                if self.dim != 2 {
                    return Err(Error::InvalidPattern("reflection is two-dimensional".into()));
                }
                Ok(self.points.iter().map(|p| vec![-p[0], p[1]]).collect())
            }
            Transform::ReflectV => {
                if self.dim != 2 {
                    return Err(Error::InvalidPattern("reflection is two-dimensional".into()));
                }
                Ok(self.points.iter().map(|p| vec![p[0], -p[1]]).collect())
            }
            Transform::Translate(offsets) => {
                if offsets.len() != self.dim {
                    return Err(Error::DimMismatch(format!(
                        "translate offset arity {} vs dimension {}",
                        offsets.len(),
                        self.dim
                    )));
                }
                Ok(self
                    .points
                    .iter()
                    .map(|p| p.iter().zip(offsets).map(|(&v, &o)| v + o).collect())
                    .collect())
            }
            Transform::Dilate(q) => {
                if *q <= Rat::one() {
                    return Err(Error::BadParams(format!(
                        "dilation factor must exceed 1, got {q}"
                    )));
                }
                Ok(self.points.iter().map(|p| p.iter().map(|&v| v * *q).collect()).collect())
            }
        };
        FinitePattern::new(self.dim, mapped?)
    }

    /// The bottommost point of the rightmost column: the deterministic
    /// anchor for appended points and segments.
    pub fn rightmost_anchor(&self) -> Result<Vec<Rat>> {
        if self.dim != 2 {
            return Err(Error::InvalidPattern("appending is two-dimensional".into()));
        }
        let x_max = self.points.iter().map(|p| p[0]).max().expect("nonempty");
        let y_min = self
            .points
            .iter()
            .filter(|p| p[0] == x_max)
            .map(|p| p[1])
            .min()
            .expect("column class nonempty");
        Ok(vec![x_max, y_min])
    }

    /// Add a new point `c` to the right of the anchor. `c = 0` merges
    /// with the anchor and returns the pattern unchanged.
    pub fn append_point(&self, c: Rat) -> Result<FinitePattern> {
        if c.is_negative() {
            return Err(Error::BadParams("appended offset must be nonnegative".into()));
        }
        let anchor = self.rightmost_anchor()?;
        let mut pts: Vec<Vec<Rat>> = self.points.iter().cloned().collect();
        pts.push(vec![anchor[0] + c, anchor[1]]);
        FinitePattern::new(self.dim, pts)
    }

    /// Attach a horizontal segment of length `c` with its left endpoint
    /// on the anchor.
    pub fn append_segment(&self, c: Rat) -> Result<AugmentedPattern> {
        if c.is_negative() {
            return Err(Error::BadParams("segment length must be nonnegative".into()));
        }
        let anchor = self.rightmost_anchor()?;
        Ok(AugmentedPattern { points: self.clone(), anchor, seg_len: c })
    }
}

impl SegmentPattern {
    /// Validates the disjoint-union hypotheses: distinct rows, disjoint
    /// closed x-projections, increasing x order.
    pub fn new(mut segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidPattern("need at least one segment".into()));
        }
        for s in &segments {
            if s.x_lo >= s.x_hi {
                return Err(Error::InvalidPattern(format!(
                    "segment at y={} has x_lo {} >= x_hi {}",
                    s.y, s.x_lo, s.x_hi
                )));
            }
        }
        segments.sort_by(|a, b| a.x_lo.cmp(&b.x_lo));
        for w in segments.windows(2) {
            if w[0].x_hi >= w[1].x_lo {
                return Err(Error::InvalidPattern(format!(
                    "x-projections [{}, {}] and [{}, {}] are not disjoint",
                    w[0].x_lo, w[0].x_hi, w[1].x_lo, w[1].x_hi
                )));
            }
        }
        let mut ys: Vec<Rat> = segments.iter().map(|s| s.y).collect();
        ys.sort();
        if ys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPattern("segment rows must be distinct".into()));
        }
        Ok(SegmentPattern { segments })
    }

    /// Segments in increasing x order.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl StackPattern {
    pub fn new(s: Rat, t: u32, c: Rat) -> Result<Self> {
        if !s.is_positive() {
            return Err(Error::InvalidPattern(format!("segment length {s} must be positive")));
        }
        if t < 2 {
            return Err(Error::InvalidPattern(format!("need t >= 2 segments, got {t}")));
        }
        if !c.is_positive() {
            return Err(Error::InvalidPattern(format!("vertical gap {c} must be positive")));
        }
        Ok(StackPattern { s, t, c })
    }
}

impl HSegment {
    pub fn new(c: Rat) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidPattern(format!("segment length {c} must be positive")));
        }
        Ok(HSegment { c })
    }
}

/// Any of the forbidden-set families, as read from or written to the
/// pattern file format.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Pattern {
    Finite(FinitePattern),
    Segments(SegmentPattern),
    Stack(StackPattern),
    HSegment(HSegment),
}

impl Pattern {
    pub fn dim(&self) -> usize {
        match self {
            Pattern::Finite(p) => p.dim(),
            _ => 2,
        }
    }

    /// Content hash of the canonical JSON rendering.
    pub fn content_id(&self) -> String {
        schema::content_hash(&serde_json::to_string(self).expect("pattern serializes"))
    }
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    schema: String,
    dim: u32,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<Rat>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    segments: Option<Vec<Segment>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<Rat>,
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut raw = PatternJson {
            schema: schema::SCHEMA.to_string(),
            dim: self.dim() as u32,
            kind: String::new(),
            points: None,
            segments: None,
            s: None,
            t: None,
            c: None,
        };
        match self {
            Pattern::Finite(p) => {
                raw.kind = "finite".into();
                raw.points = Some(p.points().cloned().collect());
            }
            Pattern::Segments(p) => {
                raw.kind = "segments".into();
                raw.segments = Some(p.segments().to_vec());
            }
            Pattern::Stack(p) => {
                raw.kind = "stack".into();
                raw.s = Some(p.s);
                raw.t = Some(p.t);
                raw.c = Some(p.c);
            }
            Pattern::HSegment(p) => {
                raw.kind = "hsegment".into();
                raw.c = Some(p.c);
            }
        }
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PatternJson::deserialize(d)?;
        schema::expect(&raw.schema).map_err(D::Error::custom)?;
        let need = |field: &str| D::Error::custom(format!("missing field {field:?} for kind"));
        let built = match raw.kind.as_str() {
            "finite" => {
                let points = raw.points.ok_or_else(|| need("points"))?;
                FinitePattern::new(raw.dim as usize, points).map(Pattern::Finite)
            }
            "segments" => {
                if raw.dim != 2 {
                    return Err(D::Error::custom("segment patterns are two-dimensional"));
                }
                SegmentPattern::new(raw.segments.ok_or_else(|| need("segments"))?)
                    .map(Pattern::Segments)
            }
            "stack" => {
                if raw.dim != 2 {
                    return Err(D::Error::custom("stack patterns are two-dimensional"));
                }
                StackPattern::new(
                    raw.s.ok_or_else(|| need("s"))?,
                    raw.t.ok_or_else(|| need("t"))?,
                    raw.c.ok_or_else(|| need("c"))?,
                )
                .map(Pattern::Stack)
            }
            "hsegment" => {
                if raw.dim != 2 {
                    return Err(D::Error::custom("horizontal segments are two-dimensional"));
                }
                HSegment::new(raw.c.ok_or_else(|| need("c"))?).map(Pattern::HSegment)
            }
            other => return Err(D::Error::custom(format!("unknown pattern kind {other:?}"))),
        };
        built.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn rq(p: i128, q: i128) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn classes_partition() {
        let p = FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(0))]);
        assert_eq!(p.row_classes().len(), 1);
        assert_eq!(p.row_classes()[0].1.len(), 2);
        assert_eq!(p.column_classes().len(), 2);

        let diag = FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(1))]);
        assert_eq!(diag.row_classes().len(), 2);
        assert_eq!(diag.column_classes().len(), 2);

        let grid = FinitePattern::new(
            2,
            (0..3).flat_map(|x| (0..3).map(move |y| vec![r(x), r(y)])),
        )
        .unwrap();
        assert_eq!(grid.row_classes().len(), 3);
        assert_eq!(grid.column_classes().len(), 3);
        let covered: usize = grid.row_classes().iter().map(|(_, m)| m.len()).sum();
        assert_eq!(covered, grid.len());
    }

    #[test]
    fn matrix_orientation_top_row_is_largest_y() {
        // (0,0) and (1,1): the one for (1,1) must be in row 1 (top) and
        // column 2 (right); (0,0) in row 2, column 1.
        let p = FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(1))]);
        let m = p.to_matrix();
        assert_eq!(m.dims(), &[2, 2]);
        assert!(m.has_one(&[1, 2]));
        assert!(m.has_one(&[2, 1]));
    }

    #[test]
    fn order_isomorphic_coordinates_give_same_matrix() {
        let a = FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(0)), (r(0), r(1)), (r(1), r(1))]);
        let b = FinitePattern::from_xy(&[
            (r(0), r(0)),
            (rq(1, 2), r(0)),
            (r(0), r(3)),
            (rq(1, 2), r(3)),
        ]);
        assert_eq!(a.to_matrix(), BitMatrix::j(2, 2));
        assert_eq!(b.to_matrix(), BitMatrix::j(2, 2));
    }

    #[test]
    fn transforms() {
        let p = FinitePattern::from_xy(&[(r(0), r(0))]);
        let t = p.transform(&Transform::Translate(vec![r(1), r(1)])).unwrap();
        assert_eq!(t, FinitePattern::from_xy(&[(r(1), r(1))]));

        let pair = FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(0))]);
        let d = pair.transform(&Transform::Dilate(r(2))).unwrap();
        assert_eq!(d, FinitePattern::from_xy(&[(r(0), r(0)), (r(2), r(0))]));
        assert!(pair.transform(&Transform::Dilate(r(1))).is_err());

        let rot = pair.transform(&Transform::Rotate90).unwrap();
        assert_eq!(rot.column_classes().len(), 1);
        assert_eq!(rot.row_classes().len(), 2);
    }

    #[test]
    fn append_point_and_segment() {
        let p = FinitePattern::from_xy(&[(r(0), r(0))]);
        let p2 = p.append_point(r(1)).unwrap();
        assert_eq!(p2, FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(0))]));

        let aug = p.append_segment(r(2)).unwrap();
        assert_eq!(aug.anchor, vec![r(0), r(0)]);
        assert_eq!(aug.seg_len, r(2));

        // Two columns: the anchor is the bottommost point of the rightmost.
        let q = FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(2)), (r(1), r(1))]);
        assert_eq!(q.rightmost_anchor().unwrap(), vec![r(1), r(1)]);
        let q2 = q.append_point(r(3)).unwrap();
        assert!(q2.points().any(|p| p == &vec![r(4), r(1)]));

        assert_eq!(p.append_point(r(0)).unwrap(), p);
    }

    #[test]
    fn segment_pattern_invariants() {
        let ok = SegmentPattern::new(vec![
            Segment { y: r(1), x_lo: r(2), x_hi: r(3) },
            Segment { y: r(0), x_lo: r(0), x_hi: r(1) },
        ])
        .unwrap();
        // sorted by x_lo regardless of input order
        assert_eq!(ok.segments()[0].x_lo, r(0));

        assert!(SegmentPattern::new(vec![
            Segment { y: r(0), x_lo: r(0), x_hi: r(2) },
            Segment { y: r(1), x_lo: r(2), x_hi: r(3) },
        ])
        .is_err());
        assert!(SegmentPattern::new(vec![
            Segment { y: r(0), x_lo: r(0), x_hi: r(1) },
            Segment { y: r(0), x_lo: r(2), x_hi: r(3) },
        ])
        .is_err());
        assert!(SegmentPattern::new(vec![Segment { y: r(0), x_lo: r(1), x_hi: r(1) }]).is_err());
    }

    #[test]
    fn spaced_matrix_unit_and_wide_gaps() {
        let p = FinitePattern::from_xy(&[(r(0), r(0)), (r(1), r(0)), (r(0), r(1)), (r(1), r(1))]);
        assert_eq!(p.spaced_matrix(r(1)).unwrap(), BitMatrix::j(2, 2));
        // Gap 2 at cell side 1 spaces the classes two indices apart.
        let wide = p.transform(&Transform::Dilate(r(2))).unwrap();
        let m = wide.spaced_matrix(r(1)).unwrap();
        assert_eq!(m.dims(), &[3, 3]);
        assert_eq!(m, BitMatrix::j(2, 2).blowup(1).unwrap());
        assert!(wide.spaced_matrix(rq(3, 2)).is_err());
    }

    #[test]
    fn pattern_json_roundtrip() {
        let pats = vec![
            Pattern::Finite(FinitePattern::from_xy(&[(rq(1, 2), r(0)), (r(1), r(3))])),
            Pattern::Segments(
                SegmentPattern::new(vec![Segment { y: r(0), x_lo: r(0), x_hi: r(1) }]).unwrap(),
            ),
            Pattern::Stack(StackPattern::new(r(1), 2, r(1)).unwrap()),
            Pattern::HSegment(HSegment::new(r(1)).unwrap()),
        ];
        for p in pats {
            let s = serde_json::to_string(&p).unwrap();
            assert!(s.contains("zarex/1"));
            let back: Pattern = serde_json::from_str(&s).unwrap();
            assert_eq!(p, back);
        }
        // Non-canonical rationals are rejected at the parser.
        let bad = r#"{"schema":"zarex/1","dim":2,"kind":"hsegment","c":"2/4"}"#;
        let err = serde_json::from_str::<Pattern>(bad).unwrap_err().to_string();
        assert!(err.contains("lowest terms"), "error was: {err}");
    }
}
