//! Exact angles on the circle, measured in turns, and the map `θ ↦ dθ mod 1`.
//!
//! Angles are reduced rationals in `[0, 1)` backed by arbitrary precision
//! integers. Repeated pullbacks multiply denominators by `d` at every level,
//! so fixed-width integers are not an option here.
//!
//! Two textual forms are accepted everywhere an angle is read:
//!
//! * `p/q`, any fraction (reduced mod 1 on construction);
//! * a base-`d` itinerary `<preperiod>_<period>`, e.g. `0010_001` in degree 2
//!   is `0.0010 001 001 ...` = 15/112.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Errors produced while reading an angle literal or a degree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("degree must be at least 2, got {0}")]
    BadDegree(u32),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("digit `{digit}` is not valid in base {base}")]
    BadDigit { digit: char, base: u32 },
    #[error("itinerary `{0}` has an empty period")]
    EmptyPeriod(String),
    #[error("`{0}` is neither a fraction `p/q` nor an itinerary `pre_period`")]
    NotAnAngle(String),
}

/// The degree `d ≥ 2` of the circle map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(u32);

impl Degree {
    pub fn new(d: u32) -> Result<Self, AngleError> {
        if d < 2 {
            Err(AngleError::BadDegree(d))
        } else {
            Ok(Degree(d))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u32> for Degree {
    type Error = AngleError;

    fn try_from(d: u32) -> Result<Self, Self::Error> {
        Degree::new(d)
    }
}

/// Preperiod and period of an angle under `σ_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitInfo {
    pub preperiod: usize,
    pub period: usize,
}

impl OrbitInfo {
    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

/// A point of the circle, `numerator/denominator` turns, always reduced and in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle(BigRational);

impl Angle {
    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    /// Builds `p/q mod 1`. Negative numerators wrap around.
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self, AngleError> {
        let numerator = numerator.into();
        let denominator = denominator.into();
        if denominator.is_zero() {
            return Err(AngleError::ZeroDenominator(format!("{numerator}/0")));
        }
        Ok(Angle::from_rational(BigRational::new(numerator, denominator)))
    }

    /// Convenience constructor for small literals. Panics on a zero denominator.
    pub fn frac(numerator: i64, denominator: i64) -> Self {
        Angle::new(numerator, denominator).expect("nonzero denominator")
    }

    /// Reduces an arbitrary rational into `[0, 1)`.
    pub fn from_rational(r: BigRational) -> Self {
        let floor = r.floor();
        Angle(r - floor)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numerator(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denominator(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Approximate value in turns, for rendering only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// `σ_d(θ) = dθ mod 1`.
    pub fn sigma(&self, d: Degree) -> Angle {
        Angle::from_rational(&self.0 * BigInt::from(d.get()))
    }

    /// `σ_d^k(θ)`.
    pub fn sigma_iter(&self, d: Degree, k: usize) -> Angle {
        if k == 0 {
            return self.clone();
        }
        let factor = num_traits::pow(BigInt::from(d.get()), k);
        Angle::from_rational(&self.0 * factor)
    }

    /// The `d` preimages `(θ + k)/d`, ascending.
    pub fn preimages(&self, d: Degree) -> Vec<Angle> {
        let dd = BigInt::from(d.get());
        (0..d.get()).map(|k| Angle((&self.0 + BigInt::from(k)) / &dd)).collect()
    }

    /// Minimal preperiod and period under `σ_d`.
    ///
    /// With the reduced denominator `q = q₀·q₁`, where `q₀` collects the primes
    /// of `d` and `q₁` is coprime to `d`, the preperiod is the least `k` with
    /// `q₀ | d^k` and the period is the multiplicative order of `d` mod `q₁`.
    pub fn orbit_info(&self, d: Degree) -> OrbitInfo {
        let dd = BigUint::from(d.get());
        let mut q = self.denominator();
        let mut preperiod = 0;
        loop {
            let g = q.gcd(&dd);
            if g.is_one() {
                break;
            }
            // q / gcd(q, d) is the denominator after one more step.
            q /= g;
            preperiod += 1;
        }
        let mut period = 1;
        if !q.is_one() {
            let mut power = &dd % &q;
            while !power.is_one() {
                power = (power * &dd) % &q;
                period += 1;
            }
        }
        OrbitInfo { preperiod, period }
    }

    pub fn is_periodic(&self, d: Degree) -> bool {
        self.denominator().gcd(&BigUint::from(d.get())).is_one()
    }

    /// Length of the counterclockwise arc from `self` to `other`, in `[0, 1)`.
    pub fn ccw_distance_to(&self, other: &Angle) -> BigRational {
        let diff = &other.0 - &self.0;
        if diff.is_negative() {
            diff + BigRational::one()
        } else {
            diff
        }
    }

    /// Length of the shorter arc between the two angles, in `[0, 1/2]`.
    pub fn circle_distance(&self, other: &Angle) -> BigRational {
        let ccw = self.ccw_distance_to(other);
        let cw = BigRational::one() - &ccw;
        if ccw.is_zero() {
            ccw
        } else {
            ccw.min(cw)
        }
    }

    /// `self + delta mod 1`.
    pub fn offset(&self, delta: &BigRational) -> Angle {
        Angle::from_rational(&self.0 + delta)
    }

    /// Base-`d` itinerary with minimal preperiod and period.
    pub fn to_itinerary(&self, d: Degree) -> String {
        let info = self.orbit_info(d);
        let dd = BigInt::from(d.get());
        let mut x = self.0.clone();
        let mut out = String::with_capacity(info.preperiod + info.period + 1);
        for i in 0..info.preperiod + info.period {
            if i == info.preperiod {
                out.push('_');
            }
            let scaled = &x * &dd;
            let digit = scaled.floor();
            x = scaled - &digit;
            let digit = digit.to_integer().to_u32().unwrap_or(0);
            out.push(std::char::from_digit(digit, 36).unwrap_or('?'));
        }
        out
    }

    /// Parses either `p/q` or a base-`d` itinerary.
    pub fn parse(text: &str, d: Degree) -> Result<Angle, AngleError> {
        let text = text.trim();
        if let Some((p, q)) = text.split_once('/') {
            let bad = || AngleError::NotAnAngle(text.to_string());
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(AngleError::ZeroDenominator(text.to_string()));
            }
            return Angle::new(p, q);
        }
        let Some((pre, per)) = text.split_once('_') else {
            return Err(AngleError::NotAnAngle(text.to_string()));
        };
        if per.is_empty() {
            return Err(AngleError::EmptyPeriod(text.to_string()));
        }
        let base = d.get();
        let digits = |s: &str| -> Result<BigInt, AngleError> {
            let mut acc = BigInt::zero();
            for c in s.chars() {
                let v = c.to_digit(36).filter(|v| *v < base).ok_or(AngleError::BadDigit { digit: c, base })?;
                acc = acc * base + v;
            }
            Ok(acc)
        };
        let pre_value = digits(pre)?;
        let per_value = digits(per)?;
        let dd = BigInt::from(base);
        let cycle = num_traits::pow(dd.clone(), per.chars().count()) - 1;
        let shift = num_traits::pow(dd, pre.chars().count());
        let value = (BigRational::from_integer(pre_value) + BigRational::new(per_value, cycle))
            / BigRational::from_integer(shift);
        Ok(Angle::from_rational(value))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = AngleError;

    /// Fraction form only; itineraries need a degree, see [`Angle::parse`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if !s.contains('/') {
            return Err(AngleError::NotAnAngle(s.to_string()));
        }
        // Any degree works for the fraction form.
        Angle::parse(s, Degree(2))
    }
}

/// Is `b` strictly inside the counterclockwise open arc from `a` to `c`?
///
/// When `a == c` the arc is the whole circle minus `a`.
pub fn strictly_between(a: &Angle, b: &Angle, c: &Angle) -> bool {
    match a.cmp(c) {
        Ordering::Less => a < b && b < c,
        Ordering::Greater => b > a || b < c,
        Ordering::Equal => b != a,
    }
}

/// Is `b` in the closed counterclockwise arc from `a` to `c`?
pub fn in_closed_arc(a: &Angle, b: &Angle, c: &Angle) -> bool {
    b == a || b == c || strictly_between(a, b, c)
}

/// Cyclic orientation of three distinct angles: `true` when `a → b → c` is counterclockwise.
pub fn is_ccw(a: &Angle, b: &Angle, c: &Angle) -> bool {
    strictly_between(a, b, c)
}
