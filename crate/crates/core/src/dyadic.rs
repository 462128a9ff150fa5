//! Exact dyadic rationals `num / 2^den_pow`.
//!
//! The set of dyadics with `den_pow <= l` is the ring-like set of reals `x`
//! with `2^l x` integral; [`Dyadic::digits`] returns the smallest such `l`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational with a power-of-two denominator, always stored reduced:
/// `den_pow == 0` or `num` is odd.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    den_pow: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, den_pow: u32) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            den_pow,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            den_pow: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from(1)
    }

    /// `1 / 2^k`.
    pub fn half_pow(k: u32) -> Self {
        Dyadic::new(1, k)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den_pow = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(self.den_pow)) as u32;
        if shift > 0 {
            self.num >>= shift as usize;
            self.den_pow -= shift;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn den_pow(&self) -> u32 {
        self.den_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den_pow == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// Number of binary digits: the unique `k` with `self` in `R_k \ R_{k-1}`,
    /// zero for integers.
    pub fn digits(&self) -> u32 {
        self.den_pow
    }

    /// Multiplies by `2^k` (`k` may be negative).
    pub fn scale_pow2(&self, k: i32) -> Self {
        if k >= 0 {
            let k = k as u32;
            if k <= self.den_pow {
                Dyadic::new(self.num.clone(), self.den_pow - k)
            } else {
                Dyadic::new(&self.num << (k - self.den_pow) as usize, 0)
            }
        } else {
            Dyadic::new(self.num.clone(), self.den_pow + k.unsigned_abs())
        }
    }

    /// Numerator after bringing `self` onto the common denominator `2^den_pow`.
    /// Panics if `den_pow` is smaller than the reduced denominator exponent.
    pub fn scaled_numerator(&self, den_pow: u32) -> BigInt {
        assert!(den_pow >= self.den_pow, "denominator 2^{den_pow} too small");
        &self.num << (den_pow - self.den_pow) as usize
    }

    pub fn floor(&self) -> BigInt {
        if self.den_pow == 0 {
            return self.num.clone();
        }
        self.num
            .div_floor(&(BigInt::one() << self.den_pow as usize))
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Splits `self = carry * m + residue` with `residue` in `[0, m)`.
    pub fn reduce_mod(&self, m: u32) -> (Dyadic, BigInt) {
        assert!(m > 0, "modulus must be positive");
        let modulus = BigInt::from(m) << self.den_pow as usize;
        let (carry, rem) = self.num.div_mod_floor(&modulus);
        (Dyadic::new(rem, self.den_pow), carry)
    }

    /// Parity of `self` when it is an integer.
    pub fn integer_parity(&self) -> Option<u8> {
        if self.den_pow != 0 {
            return None;
        }
        Some(if self.num.is_odd() { 1 } else { 0 })
    }

    pub fn to_f64(&self) -> f64 {
        let num = self.num.to_f64().unwrap_or(f64::NAN);
        num * (-(self.den_pow as f64)).exp2()
    }

    /// Value modulo 2 as a float in `[0, 2)`; keeps precision for large phases.
    pub fn to_f64_mod2(&self) -> f64 {
        self.reduce_mod(2).0.to_f64()
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::new(v, 0)
    }
}

impl From<i32> for Dyadic {
    fn from(v: i32) -> Self {
        Dyadic::new(v, 0)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let k = self.den_pow.max(rhs.den_pow);
        Dyadic::new(self.scaled_numerator(k) + rhs.scaled_numerator(k), k)
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let k = self.den_pow.max(rhs.den_pow);
        Dyadic::new(self.scaled_numerator(k) - rhs.scaled_numerator(k), k)
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.den_pow + rhs.den_pow)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            den_pow: self.den_pow,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
        impl $tr<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: Dyadic) {
        *self = &*self - &rhs;
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let k = self.den_pow.max(other.den_pow);
        self.scaled_numerator(k).cmp(&other.scaled_numerator(k))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_pow == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.den_pow as usize)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `p`, `p/q` with `q` a power of two, or `p/2^k`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("{msg} in dyadic `{s}`"),
        };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            None => (s, None),
            Some((p, q)) => (p.trim(), Some(q.trim())),
        };
        let num: BigInt = num.parse().map_err(|_| bad("invalid numerator"))?;
        let den_pow = match den {
            None => 0,
            Some(q) => {
                if let Some(exp) = q.strip_prefix("2^") {
                    exp.parse::<u32>().map_err(|_| bad("invalid exponent"))?
                } else {
                    let q: BigInt = q.parse().map_err(|_| bad("invalid denominator"))?;
                    if !q.is_positive() {
                        return Err(bad("non-positive denominator"));
                    }
                    let tz = q.trailing_zeros().unwrap_or(0);
                    if q != BigInt::one() << tz as usize {
                        return Err(bad("denominator is not a power of two"));
                    }
                    tz as u32
                }
            }
        };
        Ok(Dyadic::new(num, den_pow))
    }
}

#[derive(Serialize, Deserialize)]
struct DyadicJson {
    num: String,
    den_pow: u32,
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DyadicJson {
            num: self.num.to_string(),
            den_pow: self.den_pow,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = DyadicJson::deserialize(deserializer)?;
        let num: BigInt = raw
            .num
            .parse()
            .map_err(|_| serde::de::Error::custom(format!("invalid numerator `{}`", raw.num)))?;
        Ok(Dyadic::new(num, raw.den_pow))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(d("1/2") + d("1/2"), Dyadic::one());
        assert_eq!(d("3/4") * d("1/2"), d("3/8"));
        let z = d("1/4") - d("1/4");
        assert!(z.is_zero());
        assert_eq!(z.den_pow(), 0);
        assert_eq!(-d("3/8"), d("-3/8"));
        assert_eq!(d("3/8").scale_pow2(2), d("3/2"));
        assert_eq!(d("3").scale_pow2(-3), d("3/8"));
        assert_eq!(d("6/8"), d("3/4"));
    }

    #[test]
    fn digits() {
        assert_eq!(d("3/8").digits(), 3);
        assert_eq!(d("2").digits(), 0);
        assert_eq!(d("-1/4").digits(), 2);
    }

    #[test]
    fn reduce_mod_examples() {
        assert_eq!(d("-1/2").reduce_mod(2), (d("3/2"), BigInt::from(-1)));
        assert_eq!(d("9/4").reduce_mod(2), (d("1/4"), BigInt::from(1)));
        assert_eq!(d("-1/4").reduce_mod(1), (d("3/4"), BigInt::from(-1)));
    }

    #[test]
    fn parity() {
        assert_eq!(d("2").integer_parity(), Some(0));
        assert_eq!(d("3").integer_parity(), Some(1));
        assert_eq!(d("-3").integer_parity(), Some(1));
        assert_eq!(d("1/2").integer_parity(), None);
    }

    #[test]
    fn floor_ceil_and_order() {
        assert_eq!(d("-1/2").floor(), BigInt::from(-1));
        assert_eq!(d("-1/2").ceil(), BigInt::from(0));
        assert_eq!(d("5/4").ceil(), BigInt::from(2));
        assert!(d("3/8") < d("1/2"));
        assert!(d("-3/8") > d("-1/2"));
    }

    #[test]
    fn parse_and_json() {
        assert_eq!(d("5/2^3"), d("5/8"));
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
        let json = serde_json::to_string(&d("-3/8")).unwrap();
        assert_eq!(json, r#"{"num":"-3","den_pow":3}"#);
        let back: Dyadic = serde_json::from_str(r#"{"num":"6","den_pow":2}"#).unwrap();
        assert_eq!(back, d("3/2"));
    }

    fn arb_dyadic() -> impl Strategy<Value = Dyadic> {
        (-10_000i64..10_000, 0u32..12).prop_map(|(n, k)| Dyadic::new(n, k))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn reduce_mod_round_trips(a in arb_dyadic(), m in 1u32..=2) {
            let (residue, carry) = a.reduce_mod(m);
            prop_assert!(residue >= Dyadic::zero());
            prop_assert!(residue < Dyadic::from(m as i64));
            prop_assert_eq!(Dyadic::from(carry * BigInt::from(m)) + residue, a);
        }
    }

    proptest! {
        #[test]
        fn digit_bounds(a in arb_dyadic(), b in arb_dyadic()) {
            prop_assert!((&a * &b).digits() <= a.digits() + b.digits());
            prop_assert!((&a + &b).digits() <= a.digits().max(b.digits()));
        }

        #[test]
        fn reduced_form(a in arb_dyadic()) {
            prop_assert!(a.den_pow() == 0 || a.numerator().is_odd());
        }
    }
}
