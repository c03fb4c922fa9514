//! Exact rational scalars and their infinitesimal extension.
//!
//! Every coordinate, gap, measure and bound in this crate is a [`Rat`]:
//! decision procedures never touch floating point. Open-boundary
//! strictness ("the coordinate must lie *strictly* inside an open cell")
//! is encoded by [`EpsRat`], a rational plus an integer multiple of a
//! symbolic positive infinitesimal ordered lexicographically.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact rational in canonical reduced form (gcd 1, positive denominator).
///
/// Backed by `Ratio<i128>`, which maintains the canonical form on every
/// operation. Serialized as the string `"p"` or `"p/q"`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(Ratio<i128>);

impl Rat {
    pub const fn zero() -> Self {
        Rat(Ratio::new_raw(0, 1))
    }

    pub const fn one() -> Self {
        Rat(Ratio::new_raw(1, 1))
    }

    /// `p/q` reduced. Panics if `q == 0`.
    pub fn new(p: i128, q: i128) -> Self {
        Rat(Ratio::new(p, q))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(Ratio::from_integer(n as i128))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i128 {
        self.0.ceil().to_integer()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.recip())
    }

    /// Integer power (negative exponents allowed for nonzero values).
    pub fn pow(&self, exp: i32) -> Self {
        Rat(self.0.pow(exp))
    }

    /// Smallest multiple of `1/2^bits` that is `>= self.nth_root(k)`.
    ///
    /// Used to upper-round radicals in analytic bounds so that
    /// "value <= bound" checks can never fail by rounding. Requires
    /// `self >= 0` and `k >= 1`. Computed by integer binary search over
    /// big integers, so any desk-scale operand is fine.
    pub fn root_upper(&self, k: u32, bits: u32) -> Result<Rat, Error> {
        if self.is_negative() {
            return Err(Error::BadParams(format!(
                "cannot take a real {k}-th root of negative {self}"
            )));
        }
        if k == 0 {
            return Err(Error::BadParams("root index must be >= 1".into()));
        }
        if self.is_zero() {
            return Ok(Rat::zero());
        }
        let den = BigInt::from(1i64) << bits;
        // smallest m with (m / 2^bits)^k >= p/q  <=>  m^k * q >= p * 2^(bits k)
        let p = BigInt::from(self.numer());
        let q = BigInt::from(self.denom());
        let target_num = &p * den.pow(k);
        let ok = |m: &BigInt| m.pow(k) * &q >= target_num;
        let mut hi = BigInt::one();
        while !ok(&hi) {
            hi <<= 1;
        }
        let mut lo = BigInt::zero();
        while &lo + 1i64 < hi {
            let mid: BigInt = (&lo + &hi) >> 1;
            if ok(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let m: i128 = i128::try_from(&hi).map_err(|_| {
            Error::BadParams(format!("{k}-th root of {self} overflows the scalar range"))
        })?;
        Ok(Rat::new(m, 1i128 << bits))
    }

    /// Decimal rendering for humans; exact when the expansion terminates,
    /// otherwise truncated to twelve fractional digits.
    pub fn decimal(&self) -> String {
        let neg = self.is_negative();
        let a = self.abs();
        let int = a.floor();
        let mut frac = a - Rat::new(int, 1);
        let mut digits = String::new();
        for _ in 0..12 {
            if frac.is_zero() {
                break;
            }
            frac = frac * Rat::from_int(10);
            let d = frac.floor();
            digits.push(char::from(b'0' + d as u8));
            frac = frac - Rat::new(d, 1);
        }
        let sign = if neg { "-" } else { "" };
        if digits.is_empty() {
            format!("{sign}{int}")
        } else if frac.is_zero() {
            format!("{sign}{int}.{digits}")
        } else {
            format!("{sign}{int}.{digits}…")
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts exactly the canonical form emitted by `Display`: an
    /// optionally negative integer, or `p/q` with `q > 1` and
    /// `gcd(|p|, q) = 1`. Anything else (`"2/4"`, `"3/1"`, `"1/-2"`,
    /// `"+3"`, whitespace) is rejected with a descriptive error.
    fn from_str(s: &str) -> Result<Self, Error> {
        let parse_int = |t: &str, what: &str| -> Result<i128, Error> {
            if t.is_empty()
                || t == "-"
                || t.strip_prefix('-').unwrap_or(t).chars().any(|c| !c.is_ascii_digit())
            {
                return Err(Error::InvalidRational(format!(
                    "{what} {t:?} in {s:?} is not a plain integer"
                )));
            }
            if t != "0" && t != "-0" && t.strip_prefix('-').unwrap_or(t).starts_with('0') {
                return Err(Error::InvalidRational(format!(
                    "{what} {t:?} in {s:?} has a leading zero"
                )));
            }
            if t == "-0" {
                return Err(Error::InvalidRational(format!(
                    "negative zero {t:?} in {s:?} is not canonical"
                )));
            }
            t.parse::<i128>().map_err(|_| {
                Error::InvalidRational(format!("{what} {t:?} in {s:?} is out of range"))
            })
        };
        match s.split_once('/') {
            None => Ok(Rat::new(parse_int(s, "numerator")?, 1)),
            Some((p, q)) => {
                let p = parse_int(p, "numerator")?;
                let q = parse_int(q, "denominator")?;
                if q <= 0 {
                    return Err(Error::InvalidRational(format!(
                        "denominator in {s:?} must be positive"
                    )));
                }
                if q == 1 {
                    return Err(Error::InvalidRational(format!(
                        "{s:?} is not canonical: write an integer without \"/1\""
                    )));
                }
                if num_integer::gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
                    let r = Rat::new(p, q);
                    return Err(Error::InvalidRational(format!(
                        "{s:?} is not in lowest terms: expected {r}"
                    )));
                }
                Ok(Rat::new(p, q))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        *self = *self + rhs;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        *self = *self - rhs;
    }
}

/// A rational plus `eps` times a symbolic positive infinitesimal.
///
/// Ordering is lexicographic: the base decides first, the infinitesimal
/// coefficient breaks ties. `just_above(r)` is larger than `r` but
/// smaller than every rational above `r`, which is exactly the infimum
/// of an open interval `(r, _)`. All open-boundary bookkeeping in the
/// containment deciders runs on this type.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpsRat {
    pub base: Rat,
    pub eps: i64,
}

impl EpsRat {
    pub fn exact(base: Rat) -> Self {
        EpsRat { base, eps: 0 }
    }

    /// The infimum of the open ray `(base, ∞)`.
    pub fn just_above(base: Rat) -> Self {
        EpsRat { base, eps: 1 }
    }

    /// The supremum of the open ray `(-∞, base)`.
    pub fn just_below(base: Rat) -> Self {
        EpsRat { base, eps: -1 }
    }

    pub fn is_positive(&self) -> bool {
        self.base.is_positive() || (self.base.is_zero() && self.eps > 0)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        self.base.cmp(r).then(self.eps.cmp(&0))
    }

    /// Strictly less than the plain rational `r`.
    pub fn lt_rat(&self, r: &Rat) -> bool {
        self.cmp_rat(r) == Ordering::Less
    }
}

impl fmt::Display for EpsRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.eps {
            0 => write!(f, "{}", self.base),
            1 => write!(f, "{}+ε", self.base),
            -1 => write!(f, "{}-ε", self.base),
            e if e > 0 => write!(f, "{}+{}ε", self.base, e),
            e => write!(f, "{}{}ε", self.base, e),
        }
    }
}

impl fmt::Debug for EpsRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<Rat> for EpsRat {
    fn from(base: Rat) -> Self {
        EpsRat::exact(base)
    }
}

impl Add for EpsRat {
    type Output = EpsRat;
    fn add(self, rhs: EpsRat) -> EpsRat {
        EpsRat { base: self.base + rhs.base, eps: self.eps + rhs.eps }
    }
}

impl Sub for EpsRat {
    type Output = EpsRat;
    fn sub(self, rhs: EpsRat) -> EpsRat {
        EpsRat { base: self.base - rhs.base, eps: self.eps - rhs.eps }
    }
}

impl Add<Rat> for EpsRat {
    type Output = EpsRat;
    fn add(self, rhs: Rat) -> EpsRat {
        EpsRat { base: self.base + rhs, eps: self.eps }
    }
}

impl Sub<Rat> for EpsRat {
    type Output = EpsRat;
    fn sub(self, rhs: Rat) -> EpsRat {
        EpsRat { base: self.base - rhs, eps: self.eps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_parse_roundtrip() {
        for s in ["0", "1", "-1", "3/2", "-3/2", "7/3", "1000000/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
    }

    #[test]
    fn rejects_non_canonical() {
        for s in ["2/4", "3/1", "1/-2", "-0", "+3", " 1", "1/0", "", "01", "0/5", "1/02"] {
            assert!(s.parse::<Rat>().is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn reduced_invariants() {
        let r = Rat::new(6, -4);
        assert_eq!(r, Rat::new(-3, 2));
        assert_eq!(r.denom(), 2);
        assert!(r.denom() >= 1);
        assert_eq!(num_integer::gcd(r.numer().unsigned_abs(), r.denom().unsigned_abs()), 1);
    }

    #[test]
    fn arithmetic() {
        let a = Rat::new(1, 2);
        let b = Rat::new(1, 3);
        assert_eq!(a + b, Rat::new(5, 6));
        assert_eq!(a - b, Rat::new(1, 6));
        assert_eq!(a * b, Rat::new(1, 6));
        assert_eq!(a / b, Rat::new(3, 2));
        assert_eq!(Rat::new(7, 2).floor(), 3);
        assert_eq!(Rat::new(7, 2).ceil(), 4);
        assert_eq!(Rat::new(-7, 2).floor(), -4);
    }

    #[test]
    fn root_upper_bounds() {
        // sqrt(4) = 2 exactly: the upper rounding must return exactly 2.
        assert_eq!(Rat::from_int(4).root_upper(2, 30).unwrap(), Rat::from_int(2));
        // sqrt(2): bound must be >= sqrt(2) and within 2^-30 of it.
        let b = Rat::from_int(2).root_upper(2, 30).unwrap();
        assert!(b * b >= Rat::from_int(2));
        let lo = b - Rat::new(1, 1 << 30);
        assert!(lo * lo < Rat::from_int(2));
        // cube root of 27.
        assert_eq!(Rat::from_int(27).root_upper(3, 30).unwrap(), Rat::from_int(3));
        // fourth root of a large operand exercises the BigInt path.
        let big = Rat::from_int(64).pow(8);
        assert_eq!(big.root_upper(4, 30).unwrap(), Rat::from_int(4096));
    }

    #[test]
    fn eps_order_is_lexicographic() {
        let half = Rat::new(1, 2);
        let above = EpsRat::just_above(half);
        let below = EpsRat::just_below(half);
        assert!(below < EpsRat::exact(half));
        assert!(EpsRat::exact(half) < above);
        assert!(above.lt_rat(&Rat::new(51, 100)));
        assert!(!above.lt_rat(&half));
        assert!(EpsRat { base: half, eps: 5 } < EpsRat::exact(Rat::new(51, 100)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rat::new(9, 4).decimal(), "2.25");
        assert_eq!(Rat::from_int(-3).decimal(), "-3");
        assert_eq!(Rat::new(1, 3).decimal(), "0.333333333333…");
    }
}
