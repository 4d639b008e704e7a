//! Exact rationals and outward-rounded intervals.
//!
//! Every quantity that feeds a floor, a root-of-unity test or an
//! certificate comparison is a [`Real`]: either an exact [`Rational`] or an
//! [`Interval`] known to contain the true value. Decisions that an interval
//! cannot settle return [`Error::Precision`] instead of guessing.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i128>;

/// Convenience constructor for a rational `num/den`.
pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let q: i128 = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(rat(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let n: i128 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let d = 10i128
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| Error::Parse(format!("decimal too long {s:?}")))?;
        let r = rat(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: i128 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(Rational::from_integer(n))
}

pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer() as i64
}

/// Closed interval `[lo, hi]` with outward rounding on every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    /// Interval around `value` of half-width `radius` (widened by one ulp).
    pub fn around(value: f64, radius: f64) -> Self {
        Interval {
            lo: (value - radius).next_down(),
            hi: (value + radius).next_up(),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        let v = r.to_f64().unwrap_or(f64::NAN);
        Interval {
            lo: v.next_down(),
            hi: v.next_up(),
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn round_out(lo: f64, hi: f64) -> Self {
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    fn add(self, o: Self) -> Self {
        Self::round_out(self.lo + o.lo, self.hi + o.hi)
    }

    fn neg(self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    fn mul(self, o: Self) -> Self {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Self::round_out(lo, hi)
    }

    fn recip(self) -> Result<Self> {
        if self.lo <= 0.0 && self.hi >= 0.0 {
            return Err(Error::Precision(
                "division by an interval containing zero".into(),
            ));
        }
        Ok(Self::round_out(1.0 / self.hi, 1.0 / self.lo))
    }
}

/// A real number known exactly or enclosed by an interval.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(Rational),
    Approx(Interval),
}

impl From<Rational> for Real {
    fn from(r: Rational) -> Self {
        Real::Exact(r)
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::Exact(Rational::from_integer(v as i128))
    }
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx(_) => None,
        }
    }

    pub fn interval(&self) -> Interval {
        match self {
            Real::Exact(r) => Interval::from_rational(r),
            Real::Approx(i) => *i,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Approx(i) => i.mid(),
        }
    }

    pub fn add(&self, o: &Real) -> Real {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            _ => Real::Approx(self.interval().add(o.interval())),
        }
    }

    pub fn sub(&self, o: &Real) -> Real {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(-a),
            Real::Approx(i) => Real::Approx(i.neg()),
        }
    }

    pub fn mul(&self, o: &Real) -> Real {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            (Real::Exact(a), _) | (_, Real::Exact(a)) if a.is_zero() => Real::zero(),
            _ => Real::Approx(self.interval().mul(o.interval())),
        }
    }

    pub fn mul_int(&self, k: i64) -> Real {
        self.mul(&Real::from(k))
    }

    pub fn div(&self, o: &Real) -> Result<Real> {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => {
                if b.is_zero() {
                    Err(Error::Domain("division by zero".into()))
                } else {
                    Ok(Real::Exact(a / b))
                }
            }
            _ => Ok(Real::Approx(self.interval().mul(o.interval().recip()?))),
        }
    }

    /// Floor together with a flag telling whether the value is an integer.
    pub fn floor_with_int(&self) -> Result<(i64, bool)> {
        match self {
            Real::Exact(r) => Ok((floor_i64(r), r.is_integer())),
            Real::Approx(i) => {
                let fl = i.lo.floor();
                if fl == i.lo || i.hi >= fl + 1.0 {
                    Err(Error::Precision(format!(
                        "floor undecidable on [{}, {}]",
                        i.lo, i.hi
                    )))
                } else {
                    Ok((fl as i64, false))
                }
            }
        }
    }

    pub fn floor(&self) -> Result<i64> {
        Ok(self.floor_with_int()?.0)
    }

    pub fn is_integer(&self) -> Result<bool> {
        Ok(self.floor_with_int()?.1)
    }

    /// Fractional part `x - floor(x)`.
    pub fn fract(&self) -> Result<Real> {
        let f = self.floor()?;
        Ok(self.sub(&Real::from(f)))
    }

    pub fn cmp_real(&self, o: &Real) -> Result<Ordering> {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Ok(a.cmp(b)),
            _ => {
                let (a, b) = (self.interval(), o.interval());
                if a.hi < b.lo {
                    Ok(Ordering::Less)
                } else if a.lo > b.hi {
                    Ok(Ordering::Greater)
                } else {
                    Err(Error::Precision(format!(
                        "cannot order [{}, {}] against [{}, {}]",
                        a.lo, a.hi, b.lo, b.hi
                    )))
                }
            }
        }
    }

    pub fn lt(&self, o: &Real) -> Result<bool> {
        Ok(self.cmp_real(o)? == Ordering::Less)
    }

    pub fn signum(&self) -> Result<Ordering> {
        self.cmp_real(&Real::zero())
    }

    pub fn abs(&self) -> Result<Real> {
        Ok(if self.signum()? == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        })
    }

    pub fn min(&self, o: &Real) -> Result<Real> {
        Ok(if self.lt(o)? { self.clone() } else { o.clone() })
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{}", rational_to_string(r)),
            Real::Approx(i) => write!(f, "~{}", i.mid()),
        }
    }
}

/// Least common multiple of positive integers.
pub fn lcm_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(1u64, |acc, v| acc.lcm(&v.max(1)))
}

pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}
