//! Named, parameterized verification checks.
//!
//! Each check pins one proven inequality or identity between computed
//! quantities and reports both sides exactly; a report passes iff the
//! relation holds under rational comparison. Radicals inside analytic
//! bounds are upper-rounded so that a "value below bound" check can
//! never pass by rounding error, only fail.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::constructions::{grid_pattern_integer, lshape, region_from_matrix};
use crate::error::{Error, Result};
use crate::grid::{
    px_lower_search, px_search_custom, region_contains_augmented, region_contains_finite,
    region_contains_segments, region_contains_stack, GridRegion, SearchMethod,
};
use crate::matrix::BitMatrix;
use crate::oracle;
use crate::pattern::{FinitePattern, HSegment, Pattern, Segment, SegmentPattern, StackPattern};
use crate::rat::Rat;
use crate::record::{params, Certificate, CheckReport, Relation};
use crate::solver::{
    check_blowup_bound, check_superadditive, ex_exact, ex_lower_random_deletion, ex_value,
};

/// Precision of upper-rounded radicals: denominators are 2^30.
pub const RADICAL_BITS: u32 = 30;

/// Fineness factor of the slot-grid reference deciders.
pub const SLOT_MULT: i128 = 12;

// ---------------------------------------------------------------------------
// Fixtures

/// Committed reference values, regenerated by `verify --regen-fixtures`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Fixtures {
    pub schema: String,
    /// n -> maximum ones in an n-by-n matrix avoiding the 2x2 all-ones
    /// submatrix, from the independent row-mask enumeration.
    pub ex_no_two_by_two: BTreeMap<String, u64>,
    pub note: String,
}

pub const FIXTURES_JSON: &str = include_str!("../fixtures/fixtures.json");

pub fn load_fixtures() -> Result<Fixtures> {
    let f: Fixtures = serde_json::from_str(FIXTURES_JSON)
        .map_err(|e| Error::BadParams(format!("fixtures file is invalid: {e}")))?;
    crate::schema::expect(&f.schema)?;
    Ok(f)
}

/// Recompute the fixtures from the independent oracle.
pub fn regenerate_fixtures(max_n: u32) -> Fixtures {
    let table = oracle::no_two_by_two_table(max_n);
    Fixtures {
        schema: crate::schema::SCHEMA.to_string(),
        ex_no_two_by_two: table.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
        note: "independent row-mask enumeration; keys are matrix side lengths".to_string(),
    }
}

pub fn fixtures_canonical_json(f: &Fixtures) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("fixtures serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Analytic bounds

/// Closed-form upper bound for the measure of any open set in `[0,n]^2`
/// avoiding the stack of t length-s segments at vertical gaps c.
///
/// t = 2 uses the sharper form `c n + (n-c) sqrt(s n)`; general t uses
/// `c t n + t (s n^(2t-1))^(1/t)`. When the stack cannot fit vertically
/// (`(t-1) c >= n`) nothing contains it and the bound is the trivial
/// `n^2`. Radicals are upper-rounded at denominator `2^RADICAL_BITS`.
pub fn analytic_upper_stack(s: Rat, t: u32, c: Rat, n: Rat) -> Result<Rat> {
    if t < 2 {
        return Err(Error::BadParams(format!("need t >= 2, got {t}")));
    }
    if !s.is_positive() || !c.is_positive() || !n.is_positive() {
        return Err(Error::BadParams("s, c, n must be positive".into()));
    }
    let span = c * Rat::from_int(t as i64 - 1);
    if span >= n {
        return Ok(n * n);
    }
    if t == 2 {
        let root = (s * n).root_upper(2, RADICAL_BITS)?;
        Ok(c * n + (n - c) * root)
    } else {
        let inner = s * n.pow(2 * t as i32 - 1);
        let root = inner.root_upper(t, RADICAL_BITS)?;
        Ok(c * Rat::from_int(t as i64) * n + Rat::from_int(t as i64) * root)
    }
}

/// Monte-Carlo estimate of the volume of the t-dimensional chain solid
/// `{0 < y_t < n-(t-1)c, y_{i+1}+c < y_i < n-(i-1)c}` with an
/// upper-rounded standard deviation. Exact rational arithmetic: samples
/// are 20-bit dyadic rationals from the seeded generator.
pub fn chain_solid_volume_mc(
    t: u32,
    c: Rat,
    n: Rat,
    seed: u64,
    samples: u64,
) -> Result<(Rat, Rat)> {
    if !(2..=4).contains(&t) {
        return Err(Error::BadParams(format!("t must be in 2..=4, got {t}")));
    }
    if c.is_negative() || !n.is_positive() {
        return Err(Error::BadParams("need c >= 0 and n > 0".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let denom = crate::solver::PROB_DENOM as i128;
    let mut hits: u64 = 0;
    let mut y = vec![Rat::zero(); t as usize];
    for _ in 0..samples {
        for v in y.iter_mut() {
            let u = (rng.next_u64() >> 44) as i128;
            *v = n * Rat::new(u, denom);
        }
        // y[0] is y_1 (largest), y[t-1] is y_t.
        let t = t as usize;
        let mut ok = y[t - 1].is_positive()
            && y[t - 1] < n - c * Rat::from_int(t as i64 - 1);
        if ok {
            for i in 0..t - 1 {
                let upper = n - c * Rat::from_int(i as i64);
                if !(y[i + 1] + c < y[i] && y[i] < upper) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            hits += 1;
        }
    }
    let nt = n.pow(t as i32);
    let p_hat = Rat::new(hits as i128, samples as i128);
    let estimate = p_hat * nt;
    let var = p_hat * (Rat::one() - p_hat) / Rat::new(samples as i128, 1);
    let sigma = var.root_upper(2, RADICAL_BITS)? * nt;
    Ok((estimate, sigma))
}

// ---------------------------------------------------------------------------
// Shared pattern builders

/// `{0, 1}^2`: the four unit-spaced grid points whose matrix is the
/// 2x2 all-ones block.
pub fn unit_grid_pattern() -> FinitePattern {
    grid_pattern_integer(2).expect("r = 2 valid")
}

fn two_point_row() -> FinitePattern {
    FinitePattern::from_xy(&[(Rat::zero(), Rat::zero()), (Rat::one(), Rat::zero())])
}

fn single_point() -> FinitePattern {
    FinitePattern::from_xy(&[(Rat::zero(), Rat::zero())])
}

fn px_exact_measure(n: u32, r: u32, pattern: &Pattern, cfg: &Config) -> Result<Rat> {
    let rec = px_lower_search(n, r, pattern, SearchMethod::Exact, 0, cfg)?;
    Ok(rec.measure.expect("region records carry measures"))
}

fn bool_rat(b: bool) -> Rat {
    if b {
        Rat::one()
    } else {
        Rat::zero()
    }
}

// ---------------------------------------------------------------------------
// Checks

/// Solver, oracle, and committed fixtures agree on the no-2x2 table.
pub fn check_ex_fixtures(max_n: u32, cfg: &Config) -> Result<Vec<CheckReport>> {
    let fixtures = load_fixtures()?;
    let j = BitMatrix::j(2, 2);
    let mut reports = Vec::new();
    for n in 1..=max_n {
        let solver = ex_value(n, &j, 2, cfg)?;
        let reference = oracle::max_ones_no_two_by_two(n);
        let committed = fixtures.ex_no_two_by_two.get(&n.to_string()).copied();
        let mut artifacts = vec![format!("oracle({n}) = {reference}")];
        if let Some(cv) = committed {
            artifacts.push(format!("fixture({n}) = {cv}"));
        }
        reports.push(CheckReport::new(
            "ex-fixtures",
            params([("n", n.to_string())]),
            Rat::from_int(solver as i64),
            Rat::from_int(reference as i64),
            Relation::Eq,
            artifacts,
        ));
        if let Some(cv) = committed {
            reports.push(CheckReport::new(
                "ex-fixtures/committed",
                params([("n", n.to_string())]),
                Rat::from_int(reference as i64),
                Rat::from_int(cv as i64),
                Relation::Eq,
                vec![],
            ));
        }
    }
    Ok(reports)
}

/// Exact strip optimum: grid value <= c n at every resolution, with
/// equality whenever the cell side divides c (reported for the refined
/// end of the resolution list).
pub fn check_strip_exact(c: Rat, n: u32, rs: &[u32], cfg: &Config) -> Result<Vec<CheckReport>> {
    let pattern = Pattern::HSegment(HSegment::new(c)?);
    let cn = c * Rat::from_int(n as i64);
    let mut reports = Vec::new();
    let mut best = Rat::zero();
    for &r in rs {
        let v = px_exact_measure(n, r, &pattern, cfg)?;
        best = best.max(v);
        reports.push(CheckReport::new(
            "strip-exact/upper",
            params([("c", c.to_string()), ("n", n.to_string()), ("r", r.to_string())]),
            v,
            cn,
            Relation::Le,
            vec![],
        ));
        let g = Rat::from_int(n as i64) / Rat::from_int(r as i64);
        if (c / g).is_integer() {
            reports.push(CheckReport::new(
                "strip-exact/aligned",
                params([("c", c.to_string()), ("n", n.to_string()), ("r", r.to_string())]),
                v,
                cn,
                Relation::Eq,
                vec!["cell side divides c: optimum meets the strip bound".into()],
            ));
        }
    }
    reports.push(CheckReport::new(
        "strip-exact/refined",
        params([
            ("c", c.to_string()),
            ("n", n.to_string()),
            ("rs", rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")),
        ]),
        best,
        cn,
        Relation::Eq,
        vec!["best value over the refinement sequence".into()],
    ));
    Ok(reports)
}

/// L-shape measures: `(a+b) n - a b` exactly, plus the degenerate full
/// square.
pub fn check_lshape_measure(a: Rat, b: Rat, n: Rat, r: u32) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let region = lshape(a, b, n, r)?;
    let expected = (a + b) * n - a * b;
    reports.push(CheckReport::new(
        "lshape-measure",
        params([
            ("a", a.to_string()),
            ("b", b.to_string()),
            ("n", n.to_string()),
            ("r", r.to_string()),
        ]),
        region.measure(),
        expected,
        Relation::Eq,
        vec![],
    ));
    let full = lshape(n, n, n, r)?;
    reports.push(CheckReport::new(
        "lshape-measure/full-square",
        params([("n", n.to_string()), ("r", r.to_string())]),
        full.measure(),
        n * n,
        Relation::Eq,
        vec![],
    ));
    Ok(reports)
}

/// Matrix-to-region lifting: the lift of an extremal no-2x2 matrix is
/// free of the unit grid pattern and has measure exactly the extremal
/// count.
pub fn check_matrix_region_lower(max_n: u32, cfg: &Config) -> Result<Vec<CheckReport>> {
    let j = BitMatrix::j(2, 2);
    let p = unit_grid_pattern();
    let mut reports = Vec::new();
    for n in 2..=max_n {
        let rec = ex_exact(n, &j, 2, cfg)?;
        let cert = match rec.certificate.as_ref().expect("exact records carry certificates") {
            Certificate::Matrix(m) => m.clone(),
            _ => unreachable!(),
        };
        let region = region_from_matrix(&cert, Rat::one(), Rat::from_int(n as i64))?;
        let contained = region_contains_finite(&region, &p)?.is_some();
        reports.push(CheckReport::new(
            "matrix-region-lower/free",
            params([("n", n.to_string())]),
            bool_rat(contained),
            Rat::zero(),
            Relation::Eq,
            vec!["0 = the lifted extremal region avoids the unit grid pattern".into()],
        ));
        reports.push(CheckReport::new(
            "matrix-region-lower/measure",
            params([("n", n.to_string())]),
            region.measure(),
            Rat::from_int(rec.value as i64),
            Relation::Eq,
            vec![],
        ));
    }
    Ok(reports)
}

/// Sandwich for the unit grid pattern: lifted extremal measure
/// <= exact grid optimum <= blowup envelope `g^2 (k+1)^2 ex(ceil(r/(k+1)))`.
pub fn check_main_sandwich(n: u32, r: u32, cfg: &Config) -> Result<Vec<CheckReport>> {
    let j = BitMatrix::j(2, 2);
    let p = unit_grid_pattern();
    let lower = Rat::from_int(ex_value(n, &j, 2, cfg)? as i64);
    let grid = px_exact_measure(n, r, &Pattern::Finite(p), cfg)?;
    let k = r.div_ceil(n);
    let g = Rat::from_int(n as i64) / Rat::from_int(r as i64);
    let inner = ex_value(r.div_ceil(k + 1), &j, 2, cfg)?;
    let upper = g * g
        * Rat::from_int(((k + 1) * (k + 1)) as i64)
        * Rat::from_int(inner as i64);
    let ps = params([("n", n.to_string()), ("r", r.to_string())]);
    let mut reports = vec![
        CheckReport::new(
            "ex-px-sandwich/lower",
            ps.clone(),
            lower,
            grid,
            Relation::Le,
            vec![format!("ex({n}) = {lower}")],
        ),
        CheckReport::new(
            "ex-px-sandwich/upper",
            ps,
            grid,
            upper,
            Relation::Le,
            vec![format!("envelope = g^2 (k+1)^2 ex({}) with k = {k}", r.div_ceil(k + 1))],
        ),
    ];
    // Degenerate companions: a single point forces measure zero, and the
    // two-point row pattern at gap 1 is worth one strip of width 1.
    let zero = px_exact_measure(2, 2, &Pattern::Finite(single_point()), cfg)?;
    reports.push(CheckReport::new(
        "ex-px-sandwich/single-point",
        params([("n", "2".into()), ("r", "2".into())]),
        zero,
        Rat::zero(),
        Relation::Eq,
        vec![],
    ));
    let pair = px_exact_measure(2, 2, &Pattern::Finite(two_point_row()), cfg)?;
    reports.push(CheckReport::new(
        "ex-px-sandwich/two-point-row",
        params([("n", "2".into()), ("r", "2".into())]),
        pair,
        Rat::from_int(2),
        Relation::Eq,
        vec!["one full cell-column realizes the appended-point increment".into()],
    ));
    Ok(reports)
}

/// Appending a segment of length c to a pattern raises the exact grid
/// optimum by at most c n; sharp already for a single point.
pub fn check_appended_segment(c: Rat, n: u32, r: u32, cfg: &Config) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let n_rat = Rat::from_int(n as i64);

    // Single point + segment: v(P') <= 0 + c n, with equality when the
    // grid aligns.
    let point = single_point();
    let aug = point.append_segment(c)?;
    let base = px_exact_measure(n, r, &Pattern::Finite(point.clone()), cfg)?;
    let mut decide = |region: &GridRegion| {
        region_contains_augmented(region, &aug).expect("decider validated")
    };
    let aug_rec = px_search_custom(2, n, r, "augmented", &mut decide, SearchMethod::Exact, 0, cfg)?;
    let aug_measure = aug_rec.measure.expect("region record");
    reports.push(CheckReport::new(
        "appended-segment-bound/point",
        params([("c", c.to_string()), ("n", n.to_string()), ("r", r.to_string())]),
        aug_measure,
        base + c * n_rat,
        Relation::Le,
        vec![format!("base optimum = {base}")],
    ));
    let g = n_rat / Rat::from_int(r as i64);
    if (c / g).is_integer() {
        reports.push(CheckReport::new(
            "appended-segment-bound/point-sharp",
            params([("c", c.to_string()), ("n", n.to_string()), ("r", r.to_string())]),
            aug_measure,
            c * n_rat,
            Relation::Eq,
            vec!["aligned case meets the bound exactly".into()],
        ));
    }

    // A two-point column pattern with an appended segment, both sides by
    // exact search.
    let column = FinitePattern::from_xy(&[(Rat::zero(), Rat::zero()), (Rat::zero(), Rat::one())]);
    let aug2 = column.append_segment(c)?;
    let base2 = px_exact_measure(n, r, &Pattern::Finite(column.clone()), cfg)?;
    let mut decide2 = |region: &GridRegion| {
        region_contains_augmented(region, &aug2).expect("decider validated")
    };
    let rec2 = px_search_custom(2, n, r, "augmented", &mut decide2, SearchMethod::Exact, 0, cfg)?;
    reports.push(CheckReport::new(
        "appended-segment-bound/column",
        params([("c", c.to_string()), ("n", n.to_string()), ("r", r.to_string())]),
        rec2.measure.expect("region record"),
        base2 + c * n_rat,
        Relation::Le,
        vec![format!("base optimum = {base2}")],
    ));

    // Degenerate c = 0: appending a coincident point changes nothing.
    let aug0 = point.append_segment(Rat::zero())?;
    let mut decide0 = |region: &GridRegion| {
        region_contains_augmented(region, &aug0).expect("decider validated")
    };
    let rec0 = px_search_custom(2, n, r, "augmented", &mut decide0, SearchMethod::Exact, 0, cfg)?;
    reports.push(CheckReport::new(
        "appended-segment-bound/degenerate",
        params([("n", n.to_string()), ("r", r.to_string())]),
        rec0.measure.expect("region record"),
        base,
        Relation::Eq,
        vec![],
    ));
    Ok(reports)
}

/// Dilation envelope: for a pattern with consecutive gaps in [c, d] and
/// dilation factor q, the optimum for the dilated pattern is at most
/// `K^2` times the optimum for the original at the contracted side,
/// `K = ceil(q d / c) + 1`. Grid values at matched cell sides stand in
/// for both sides.
pub fn check_dilation_envelope(q: Rat, n: u32, cfg: &Config) -> Result<Vec<CheckReport>> {
    let p = unit_grid_pattern();
    let c = p.min_consecutive_gap().unwrap_or(Rat::one());
    let d = p.max_consecutive_gap().unwrap_or(Rat::one());
    let dilated = p.transform(&crate::pattern::Transform::Dilate(q))?;
    let k_factor = (q * d / c).ceil() + 1;
    let n_rat = Rat::from_int(n as i64);
    let inner_side = ((n_rat / c).ceil() + k_factor - 1) / k_factor;
    let n2 = Rat::new(inner_side, 1) * c;
    if !n2.is_integer() || !(q * d / c).is_integer() {
        return Err(Error::Misaligned(
            "dilation check requires integer contracted side at unit gaps".into(),
        ));
    }
    let r1 = n; // g = 1 on the dilated side
    let r2 = n2.numer() as u32; // g = 1 on the contracted side
    let lhs = px_exact_measure(n, r1, &Pattern::Finite(dilated), cfg)?;
    let inner = px_exact_measure(r2, r2, &Pattern::Finite(p), cfg)?;
    let rhs = Rat::new(k_factor * k_factor, 1) * inner;
    Ok(vec![CheckReport::new(
        "dilation-envelope",
        params([("q", q.to_string()), ("n", n.to_string())]),
        lhs,
        rhs,
        Relation::Le,
        vec![format!("K = {k_factor}, contracted side = {n2}"), format!("inner optimum = {inner}")],
    )])
}

/// Stack envelope: every exact grid optimum for the stack pattern lies
/// below the closed-form bound.
pub fn check_stack_envelope(
    s: Rat,
    t: u32,
    c: Rat,
    n: u32,
    r: u32,
    cfg: &Config,
) -> Result<Vec<CheckReport>> {
    let n_rat = Rat::from_int(n as i64);
    let bound = analytic_upper_stack(s, t, c, n_rat)?;
    let grid = px_exact_measure(n, r, &Pattern::Stack(StackPattern::new(s, t, c)?), cfg)?;
    let ps = params([
        ("s", s.to_string()),
        ("t", t.to_string()),
        ("c", c.to_string()),
        ("n", n.to_string()),
        ("r", r.to_string()),
    ]);
    let mut reports = vec![CheckReport::new(
        "stack-envelope",
        ps,
        grid,
        bound,
        Relation::Le,
        vec![format!("closed-form bound = {} ≈ {}", bound, bound.decimal())],
    )];
    // s >= n makes the bound vacuous (at least the full square).
    let vac = analytic_upper_stack(n_rat, 2, c, n_rat)?;
    reports.push(CheckReport::new(
        "stack-envelope/vacuous",
        params([("s", n_rat.to_string()), ("n", n.to_string())]),
        n_rat * n_rat,
        vac,
        Relation::Le,
        vec![],
    ));
    Ok(reports)
}

/// Sharp two-stack sandwich at s = c = 1: lifted extremal matrix measure
/// <= exact grid optimum <= analytic bound.
pub fn check_stack_sandwich(ns: &[u32], cfg: &Config) -> Result<Vec<CheckReport>> {
    let j = BitMatrix::j(2, 2);
    let mut reports = Vec::new();
    for &n in ns {
        let r = n;
        let stack = StackPattern::new(Rat::one(), 2, Rat::one())?;
        let rec = ex_exact(n, &j, 2, cfg)?;
        let cert = match rec.certificate.as_ref().expect("certificate") {
            Certificate::Matrix(m) => m.clone(),
            _ => unreachable!(),
        };
        let lifted = region_from_matrix(&cert, Rat::one(), Rat::from_int(n as i64))?;
        let lifted_free = !region_contains_stack(&lifted, &stack)?;
        let lower = lifted.measure();
        let grid = px_exact_measure(n, r, &Pattern::Stack(stack), cfg)?;
        let upper = analytic_upper_stack(Rat::one(), 2, Rat::one(), Rat::from_int(n as i64))?;
        let ps = params([("n", n.to_string()), ("r", r.to_string())]);
        reports.push(CheckReport::new(
            "stack-sandwich/lift-free",
            ps.clone(),
            bool_rat(!lifted_free),
            Rat::zero(),
            Relation::Eq,
            vec![],
        ));
        reports.push(CheckReport::new(
            "stack-sandwich/lower",
            ps.clone(),
            lower,
            grid,
            Relation::Le,
            vec![],
        ));
        reports.push(CheckReport::new(
            "stack-sandwich/upper",
            ps,
            grid,
            upper,
            Relation::Le,
            vec![format!("bound ≈ {}", upper.decimal())],
        ));
    }
    Ok(reports)
}

/// Probabilistic deletion: every certificate is verified free, and the
/// mean ones over the seeds clears the expectation bound
/// `(1/2) n^(2 - 2/(r+1))` with the given slack.
pub fn check_random_deletion(
    n: u32,
    r: u32,
    seeds: u64,
    slack: Rat,
    cfg: &Config,
) -> Result<Vec<CheckReport>> {
    let mut total: u64 = 0;
    let mut violations: u64 = 0;
    let forbidden = BitMatrix::j(r, r);
    for seed in 0..seeds {
        let rec = ex_lower_random_deletion(n, r, None, seed, cfg)?;
        total += rec.value;
        let cert = match rec.certificate.as_ref().expect("certificate") {
            Certificate::Matrix(m) => m.clone(),
            _ => unreachable!(),
        };
        if cert.contains(&forbidden)? {
            violations += 1;
        }
    }
    // (1/2) n^(2 - 2/(r+1)) = (1/2) (n^(2r))^(1/(r+1)); upper-rounding the
    // radical makes the asserted threshold slightly harder, never easier.
    let root = Rat::from_int(n as i64).pow(2 * r as i32).root_upper(r + 1, RADICAL_BITS)?;
    let threshold = slack * Rat::new(1, 2) * root;
    let mean = Rat::new(total as i128, seeds as i128);
    let ps = params([
        ("n", n.to_string()),
        ("r", r.to_string()),
        ("seeds", seeds.to_string()),
        ("slack", slack.to_string()),
    ]);
    Ok(vec![
        CheckReport::new(
            "random-deletion-bound/free",
            ps.clone(),
            Rat::from_int(violations as i64),
            Rat::zero(),
            Relation::Eq,
            vec![],
        ),
        CheckReport::new(
            "random-deletion-bound/mean",
            ps,
            mean,
            threshold,
            Relation::Ge,
            vec![format!("mean ≈ {}", mean.decimal()), format!("threshold ≈ {}", threshold.decimal())],
        ),
    ])
}

/// Constant-last-coordinate lifting: the exact 3-d optimum equals n
/// times the exact 2-d optimum of the projection, at matched resolution.
pub fn check_lift_equality(cfg: &Config) -> Result<Vec<CheckReport>> {
    let z = Rat::zero();
    let cases: Vec<(&str, FinitePattern, u32, u32)> = vec![
        ("single-point", single_point(), 2, 2),
        ("two-point-row", two_point_row(), 2, 2),
        ("unit-grid", unit_grid_pattern(), 3, 3),
    ];
    let mut reports = Vec::new();
    for (name, p2, n, r) in cases {
        let lifted = FinitePattern::new(
            3,
            p2.points().map(|pt| vec![pt[0], pt[1], z]),
        )?;
        let v2 = px_exact_measure(n, r, &Pattern::Finite(p2), cfg)?;
        let v3 = px_exact_measure(n, r, &Pattern::Finite(lifted), cfg)?;
        reports.push(CheckReport::new(
            "lift-equality",
            params([("case", name.to_string()), ("n", n.to_string()), ("r", r.to_string())]),
            v3,
            Rat::from_int(n as i64) * v2,
            Relation::Eq,
            vec![format!("2-d optimum = {v2}")],
        ));
    }
    Ok(reports)
}

/// Monte-Carlo volume of the chain solid against its closed-form window.
pub fn check_chain_solid_volume(
    t: u32,
    c: Rat,
    n: Rat,
    seed: u64,
    cfg: &Config,
) -> Result<Vec<CheckReport>> {
    let (estimate, sigma) = chain_solid_volume_mc(t, c, n, seed, cfg.mc_samples)?;
    let three_sigma = Rat::from_int(3) * sigma;
    let per_axis = n / Rat::from_int(t as i64) - c;
    let lower = if per_axis.is_positive() { per_axis.pow(t as i32) } else { Rat::zero() };
    let upper = n.pow(t as i32);
    let ps = params([
        ("t", t.to_string()),
        ("c", c.to_string()),
        ("n", n.to_string()),
        ("seed", seed.to_string()),
        ("samples", cfg.mc_samples.to_string()),
    ]);
    Ok(vec![
        CheckReport::new(
            "simplex-volume/lower",
            ps.clone(),
            estimate + three_sigma,
            lower,
            Relation::Ge,
            vec![format!("estimate ≈ {}", estimate.decimal())],
        ),
        CheckReport::new(
            "simplex-volume/upper",
            ps,
            estimate - three_sigma,
            upper,
            Relation::Le,
            vec![],
        ),
    ])
}

/// Exact grid optima are super-additive under block-diagonal placement.
pub fn check_superadditive_px(cfg: &Config) -> Result<Vec<CheckReport>> {
    let cases: Vec<(&str, Pattern)> = vec![
        ("two-point-row", Pattern::Finite(two_point_row())),
        ("unit-grid", Pattern::Finite(unit_grid_pattern())),
    ];
    let mut reports = Vec::new();
    for (name, p) in cases {
        // g = 1 throughout: v(2) + v(2) <= v(4).
        let v2 = px_exact_measure(2, 2, &p, cfg)?;
        let v4 = px_exact_measure(4, 4, &p, cfg)?;
        reports.push(CheckReport::new(
            "superadditive-px",
            params([("case", name.to_string()), ("m", "2".into()), ("n", "2".into())]),
            v4,
            v2 + v2,
            Relation::Ge,
            vec![],
        ));
    }
    Ok(reports)
}

/// Exact grid optima are non-decreasing in n at fixed cell side.
pub fn check_nondec_px(cfg: &Config) -> Result<Vec<CheckReport>> {
    let p = Pattern::Finite(two_point_row());
    let mut reports = Vec::new();
    let mut prev = Rat::zero();
    for n in 1..=4u32 {
        let v = px_exact_measure(n, n, &p, cfg)?;
        reports.push(CheckReport::new(
            "nondec-px",
            params([("n", n.to_string()), ("g", "1".into())]),
            v,
            prev,
            Relation::Ge,
            vec![],
        ));
        prev = v;
    }
    Ok(reports)
}

/// The pattern suite used by the exhaustive decider-versus-oracle check.
pub fn decider_test_patterns() -> (Vec<FinitePattern>, Vec<SegmentPattern>, Vec<StackPattern>) {
    let z = Rat::zero();
    let one = Rat::one();
    let half = Rat::new(1, 2);
    let three_half = Rat::new(3, 2);
    let finites = vec![
        single_point(),
        two_point_row(),
        FinitePattern::from_xy(&[(z, z), (half, z)]),
        FinitePattern::from_xy(&[(z, z), (z, one)]),
        FinitePattern::from_xy(&[(z, z), (one, one)]),
        FinitePattern::from_xy(&[(z, one), (one, z)]),
        unit_grid_pattern(),
        FinitePattern::from_xy(&[(z, z), (one, z), (z, one)]),
        FinitePattern::from_xy(&[(z, z), (half, z), (half, three_half)]),
        FinitePattern::from_xy(&[(z, z), (three_half, half)]),
    ];
    let segments = vec![
        SegmentPattern::new(vec![Segment { y: z, x_lo: z, x_hi: one }]).unwrap(),
        SegmentPattern::new(vec![Segment { y: z, x_lo: z, x_hi: half }]).unwrap(),
        SegmentPattern::new(vec![
            Segment { y: z, x_lo: z, x_hi: half },
            Segment { y: one, x_lo: one, x_hi: three_half },
        ])
        .unwrap(),
        SegmentPattern::new(vec![
            Segment { y: one, x_lo: z, x_hi: half },
            Segment { y: z, x_lo: one, x_hi: three_half },
        ])
        .unwrap(),
    ];
    let stacks = vec![
        StackPattern::new(one, 2, one).unwrap(),
        StackPattern::new(half, 2, half).unwrap(),
        StackPattern::new(one, 3, half).unwrap(),
    ];
    (finites, segments, stacks)
}

/// Exhaustive agreement of the production deciders with the slot-grid
/// reference on every region up to resolution `max_r` (side n = 2).
/// Every positive finite answer must also re-validate its witness, and
/// cell-aligned finite patterns must agree with the spaced-matrix
/// correspondence.
pub fn check_deciders_oracle(max_r: u32, cfg: &Config) -> Result<Vec<CheckReport>> {
    let _ = cfg;
    let n = Rat::from_int(2);
    let (finites, segments, stacks) = decider_test_patterns();
    let mut disagreements: u64 = 0;
    let mut witness_failures: u64 = 0;
    let mut matrix_mismatches: u64 = 0;
    let mut instances: u64 = 0;

    for r in 1..=max_r {
        let cell_universe: Vec<Vec<u16>> = (1..=r as u16)
            .flat_map(|a| (1..=r as u16).map(move |b| vec![a, b]))
            .collect();
        let n_cells = cell_universe.len();
        for mask in 0u64..(1u64 << n_cells) {
            let cells: Vec<Vec<u16>> = (0..n_cells)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| cell_universe[i].clone())
                .collect();
            let region = GridRegion::new(2, n, r, cells)?;
            let g = region.g();
            for p in &finites {
                instances += 1;
                let got = region_contains_finite(&region, p)?;
                let expected = oracle::finite_contains_ref(&region, p, SLOT_MULT)?;
                if got.is_some() != expected {
                    disagreements += 1;
                }
                if let Some(w) = &got {
                    if w.validate(&region, p).is_err() {
                        witness_failures += 1;
                    }
                }
                // Cell-aligned patterns also pass through the occupancy
                // matrix correspondence.
                if let Ok(spaced) = p.spaced_matrix(g) {
                    let via_matrix = region.to_matrix()?.contains(&spaced)?;
                    if via_matrix != got.is_some() {
                        matrix_mismatches += 1;
                    }
                }
            }
            for p in &segments {
                instances += 1;
                let got = region_contains_segments(&region, p)?;
                let expected = oracle::segments_contains_ref(&region, p, SLOT_MULT)?;
                if got != expected {
                    disagreements += 1;
                }
            }
            for p in &stacks {
                instances += 1;
                let got = region_contains_stack(&region, p)?;
                let expected = oracle::stack_contains_ref(&region, p, SLOT_MULT)?;
                if got != expected {
                    disagreements += 1;
                }
            }
        }
    }
    let ps = params([("max_r", max_r.to_string()), ("n", "2".into())]);
    Ok(vec![
        CheckReport::new(
            "deciders-oracle/agreement",
            ps.clone(),
            Rat::from_int(disagreements as i64),
            Rat::zero(),
            Relation::Eq,
            vec![format!("{instances} instances compared")],
        ),
        CheckReport::new(
            "deciders-oracle/witnesses",
            ps.clone(),
            Rat::from_int(witness_failures as i64),
            Rat::zero(),
            Relation::Eq,
            vec![],
        ),
        CheckReport::new(
            "deciders-oracle/matrix-correspondence",
            ps,
            Rat::from_int(matrix_mismatches as i64),
            Rat::zero(),
            Relation::Eq,
            vec![],
        ),
    ])
}

// ---------------------------------------------------------------------------
// Registry

pub const CHECK_IDS: &[&str] = &[
    "ex-fixtures",
    "superadditive-ex",
    "blowup-envelope",
    "strip-exact",
    "lshape-measure",
    "matrix-region-lower",
    "ex-px-sandwich",
    "appended-segment-bound",
    "dilation-envelope",
    "stack-envelope",
    "stack-sandwich",
    "random-deletion-bound",
    "lift-equality",
    "simplex-volume",
    "superadditive-px",
    "nondec-px",
    "deciders-oracle",
];

fn p_u32(params: &BTreeMap<String, String>, key: &str, default: u32) -> Result<u32> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::BadParams(format!("parameter {key}={v:?} is not an integer"))),
    }
}

fn p_u64(params: &BTreeMap<String, String>, key: &str, default: u64) -> Result<u64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::BadParams(format!("parameter {key}={v:?} is not an integer"))),
    }
}

fn p_rat(params: &BTreeMap<String, String>, key: &str, default: Rat) -> Result<Rat> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v.parse(),
    }
}

fn p_u32_list(params: &BTreeMap<String, String>, key: &str, default: &[u32]) -> Result<Vec<u32>> {
    match params.get(key) {
        None => Ok(default.to_vec()),
        Some(v) => v
            .split(',')
            .map(|t| {
                t.trim().parse().map_err(|_| {
                    Error::BadParams(format!("parameter {key}={v:?} is not a list of integers"))
                })
            })
            .collect(),
    }
}

/// Run one named check with parameter overrides.
pub fn run_check(
    id: &str,
    params: &BTreeMap<String, String>,
    seed: u64,
    cfg: &Config,
) -> Result<Vec<CheckReport>> {
    match id {
        "ex-fixtures" => check_ex_fixtures(p_u32(params, "max_n", 6)?, cfg),
        "superadditive-ex" => {
            let max_total = p_u32(params, "max_total", 6)?;
            let mut pairs = Vec::new();
            for a in 1..max_total {
                for b in a..max_total {
                    if a + b <= max_total {
                        pairs.push((a, b));
                    }
                }
            }
            check_superadditive(&BitMatrix::j(2, 2), &pairs, cfg)
        }
        "blowup-envelope" => {
            let mut reports = vec![
                check_blowup_bound(
                    &BitMatrix::j(2, 2),
                    p_u32(params, "k", 1)?,
                    p_u32(params, "n", 4)?,
                    cfg,
                )?,
                check_blowup_bound(&BitMatrix::j(2, 2), 0, 4, cfg)?,
            ];
            let single = BitMatrix::new(vec![1, 1], vec![vec![1, 1]])?;
            reports.push(check_blowup_bound(&single, 2, 4, cfg)?);
            Ok(reports)
        }
        "strip-exact" => check_strip_exact(
            p_rat(params, "c", Rat::one())?,
            p_u32(params, "n", 4)?,
            &p_u32_list(params, "rs", &[2, 4])?,
            cfg,
        ),
        "lshape-measure" => check_lshape_measure(
            p_rat(params, "a", Rat::one())?,
            p_rat(params, "b", Rat::one())?,
            p_rat(params, "n", Rat::from_int(2))?,
            p_u32(params, "r", 2)?,
        ),
        "matrix-region-lower" => check_matrix_region_lower(p_u32(params, "max_n", 5)?, cfg),
        "ex-px-sandwich" => check_main_sandwich(p_u32(params, "n", 4)?, p_u32(params, "r", 4)?, cfg),
        "appended-segment-bound" => check_appended_segment(
            p_rat(params, "c", Rat::one())?,
            p_u32(params, "n", 2)?,
            p_u32(params, "r", 2)?,
            cfg,
        ),
        "dilation-envelope" => check_dilation_envelope(
            p_rat(params, "q", Rat::from_int(2))?,
            p_u32(params, "n", 4)?,
            cfg,
        ),
        "stack-envelope" => check_stack_envelope(
            p_rat(params, "s", Rat::one())?,
            p_u32(params, "t", 2)?,
            p_rat(params, "c", Rat::one())?,
            p_u32(params, "n", 4)?,
            p_u32(params, "r", 4)?,
            cfg,
        ),
        "stack-sandwich" => check_stack_sandwich(&p_u32_list(params, "ns", &[2, 3, 4])?, cfg),
        "random-deletion-bound" => check_random_deletion(
            p_u32(params, "n", 64)?,
            p_u32(params, "r", 2)?,
            p_u64(params, "seeds", 20)?,
            p_rat(params, "slack", Rat::new(9, 10))?,
            cfg,
        ),
        "lift-equality" => check_lift_equality(cfg),
        "simplex-volume" => {
            let mut reports = check_chain_solid_volume(
                p_u32(params, "t", 2)?,
                p_rat(params, "c", Rat::one())?,
                p_rat(params, "n", Rat::from_int(4))?,
                seed,
                cfg,
            )?;
            // The degenerate c = 0 triangle has exact volume n^2 / 2.
            let n = p_rat(params, "n", Rat::from_int(4))?;
            let (estimate, sigma) = chain_solid_volume_mc(2, Rat::zero(), n, seed, cfg.mc_samples)?;
            let three_sigma = Rat::from_int(3) * sigma;
            let exact = n * n / Rat::from_int(2);
            reports.push(CheckReport::new(
                "simplex-volume/triangle-lower",
                crate::record::params([("n", n.to_string()), ("c", "0".into())]),
                estimate + three_sigma,
                exact,
                Relation::Ge,
                vec![format!("estimate ≈ {}", estimate.decimal())],
            ));
            reports.push(CheckReport::new(
                "simplex-volume/triangle-upper",
                crate::record::params([("n", n.to_string()), ("c", "0".into())]),
                estimate - three_sigma,
                exact,
                Relation::Le,
                vec![],
            ));
            Ok(reports)
        }
        "superadditive-px" => check_superadditive_px(cfg),
        "nondec-px" => check_nondec_px(cfg),
        "deciders-oracle" => check_deciders_oracle(p_u32(params, "max_r", 2)?, cfg),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

/// Run every registered check with default parameters.
pub fn run_all(seed: u64, cfg: &Config) -> Result<Vec<CheckReport>> {
    let empty = BTreeMap::new();
    let mut reports = Vec::new();
    for id in CHECK_IDS {
        reports.extend(run_check(id, &empty, seed, cfg)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_bound_examples() {
        // s = 1, t = 2, c = 1, n = 4: sqrt(4) = 2, bound = 4 + 3*2 = 10.
        let b = analytic_upper_stack(Rat::one(), 2, Rat::one(), Rat::from_int(4)).unwrap();
        assert_eq!(b, Rat::from_int(10));
        // A stack that cannot fit vertically leaves the full square.
        let v = analytic_upper_stack(Rat::one(), 2, Rat::from_int(5), Rat::from_int(4)).unwrap();
        assert_eq!(v, Rat::from_int(16));
        // s >= n is vacuous.
        let vac = analytic_upper_stack(Rat::from_int(4), 2, Rat::one(), Rat::from_int(4)).unwrap();
        assert!(vac >= Rat::from_int(16));
        // General t at t = 3 upper-rounds the cube root.
        let g3 = analytic_upper_stack(Rat::one(), 3, Rat::one(), Rat::from_int(4)).unwrap();
        let root = Rat::from_int(4).pow(5).root_upper(3, RADICAL_BITS).unwrap();
        assert_eq!(g3, Rat::from_int(12) + Rat::from_int(3) * root);
    }

    #[test]
    fn unknown_check_is_an_error() {
        let cfg = Config::default();
        assert!(matches!(
            run_check("no-such-check", &BTreeMap::new(), 0, &cfg),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn chain_solid_triangle() {
        // t = 2, c = 0: the solid is the open triangle y_2 < y_1, volume
        // n^2/2 = 2 at n = 2; the estimate must bracket it within 3 sigma.
        let (estimate, sigma) = chain_solid_volume_mc(2, Rat::zero(), Rat::from_int(2), 7, 200_000)
            .unwrap();
        let three = Rat::from_int(3) * sigma;
        assert!(estimate + three >= Rat::from_int(2));
        assert!(estimate - three <= Rat::from_int(2));
    }

    #[test]
    fn fixtures_match_oracle() {
        let f = load_fixtures().unwrap();
        let regen = regenerate_fixtures(6);
        assert_eq!(f, regen, "committed fixtures must equal regeneration");
        assert_eq!(
            fixtures_canonical_json(&f),
            FIXTURES_JSON,
            "fixture file must be byte-identical to canonical regeneration"
        );
    }
}
