//! Exact rational scalars and vectors.

use std::fmt;
use std::ops::{Add, Deref, DerefMut, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-7/4"` or a terminating decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::input("empty rational literal"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::input(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::input(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::input(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = match int.trim() {
            "" | "-" | "+" => BigInt::zero(),
            t => t.parse().map_err(|_| Error::input(format!("bad decimal {s:?}")))?,
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::input(format!("bad decimal {s:?}")));
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().unwrap() };
        let mag = Q::from_integer(int_part.abs()) + Q::new(frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| Error::input(format!("bad rational literal {s:?}")))?;
    Ok(Q::from_integer(n))
}

/// Comma separated list of rationals, e.g. `"1,-1/2,0"`.
pub fn parse_q_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_q).collect()
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Rational approximation of a finite float (exact binary expansion).
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// Serde adapter: rationals travel as strings (`"3/2"`) but integers and
/// decimal strings are accepted on input.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_q(&v).map_err(serde::de::Error::custom)
    }

    pub(crate) fn value_to_q(v: &serde_json::Value) -> std::result::Result<Q, String> {
        match v {
            serde_json::Value::String(s) => parse_q(s).map_err(|e| e.to_string()),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(q(i))
                } else {
                    parse_q(&n.to_string()).map_err(|e| e.to_string())
                }
            }
            other => Err(format!("expected rational, found {other}")),
        }
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_qvec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = xs.iter().map(fmt_q).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        vals.iter().map(|v| serde_q::value_to_q(v).map_err(serde::de::Error::custom)).collect()
    }
}

/// Coordinate vector with exact rational entries.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalVector(pub Vec<Q>);

impl RationalVector {
    pub fn zeros(d: usize) -> Self {
        RationalVector(vec![Q::zero(); d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = Q::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RationalVector(xs.iter().map(|&x| q(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &[Q]) -> Q {
        dot(&self.0, other)
    }

    pub fn scale(&self, s: &Q) -> Self {
        RationalVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Positive multiple with coprime integer entries; zero stays zero.
    pub fn primitive(&self) -> Self {
        RationalVector(primitive_integer(&self.0).into_iter().map(Q::from_integer).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

impl Deref for RationalVector {
    type Target = [Q];
    fn deref(&self) -> &[Q] {
        &self.0
    }
}

impl DerefMut for RationalVector {
    fn deref_mut(&mut self) -> &mut [Q] {
        &mut self.0
    }
}

impl From<Vec<Q>> for RationalVector {
    fn from(v: Vec<Q>) -> Self {
        RationalVector(v)
    }
}

impl FromIterator<Q> for RationalVector {
    fn from_iter<I: IntoIterator<Item = Q>>(iter: I) -> Self {
        RationalVector(iter.into_iter().collect())
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect()
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect()
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        self.0.iter().map(|a| -a).collect()
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_q(x))?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_qvec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_qvec::deserialize(d).map(RationalVector)
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Smallest positive integer multiple of `v` (as integers) with gcd 1.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Closed rational interval `[lo, hi]` used where n-th roots make a quantity
/// irrational.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    /// Division by an interval that does not contain zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo.is_positive() || o.hi.is_negative(), "division by interval containing 0");
        let inv = Interval { lo: o.hi.recip(), hi: o.lo.recip() };
        let (lo, hi) = if inv.lo <= inv.hi { (inv.lo, inv.hi) } else { (inv.hi, inv.lo) };
        self.mul(&Interval { lo, hi })
    }

    pub fn midpoint_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / q(2)))
    }
}

/// Enclosure of `x^(1/n)` for `x >= 0` with width at most `width`.
pub fn nth_root_interval(x: &Q, n: u32, width: &Q) -> Interval {
    assert!(!x.is_negative(), "root of a negative number");
    assert!(n >= 1);
    if x.is_zero() || n == 1 {
        return Interval::point(x.clone());
    }
    let guess = to_f64(x).powf(1.0 / n as f64);
    let pow = |y: &Q| -> Q { num_traits::pow(y.clone(), n as usize) };
    let mut lo = from_f64(guess * (1.0 - 1e-9));
    let mut hi = from_f64(guess * (1.0 + 1e-9) + 1e-300);
    if pow(&lo) > *x {
        lo = Q::zero();
    }
    if pow(&hi) < *x {
        hi = if x > &Q::one() { x.clone() } else { Q::one() };
    }
    let mut iters = 0;
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / q(2);
        if pow(&mid) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
        if iters > 400 {
            break;
        }
        // keep denominators from growing without bound
        if iters % 16 == 0 {
            lo = round_down(&lo, 80);
            hi = round_up(&hi, 80);
        }
    }
    Interval { lo, hi }
}

fn round_down(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits;
    Q::new((x * Q::from_integer(scale.clone())).floor().to_integer(), scale)
}

fn round_up(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits;
    Q::new((x * Q::from_integer(scale.clone())).ceil().to_integer(), scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_decimal_and_integer() {
        assert_eq!(parse_q("3/6").unwrap(), qr(1, 2));
        assert_eq!(parse_q("-0.25").unwrap(), qr(-1, 4));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(parse_q_list("1, -1/2").unwrap(), vec![q(1), qr(-1, 2)]);
    }

    #[test]
    fn primitive_scaling() {
        let v = RationalVector(vec![qr(1, 2), qr(-3, 4), q(0)]);
        assert_eq!(v.primitive(), RationalVector::from_ints(&[2, -3, 0]));
        assert!(RationalVector::zeros(2).primitive().is_zero());
    }

    #[test]
    fn sqrt_three_enclosure() {
        let w = Q::new(BigInt::one(), BigInt::from(10u64).pow(13));
        let iv = nth_root_interval(&q(3), 2, &w);
        assert!(iv.width() <= w);
        assert!(num_traits::pow(iv.lo.clone(), 2) <= q(3));
        assert!(num_traits::pow(iv.hi.clone(), 2) >= q(3));
        assert!((iv.midpoint_f64() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cube_root_of_perfect_cube() {
        let w = Q::new(BigInt::one(), BigInt::from(10u64).pow(13));
        let iv = nth_root_interval(&q(27), 3, &w);
        assert!(iv.lo <= q(3) && q(3) <= iv.hi);
    }
}
