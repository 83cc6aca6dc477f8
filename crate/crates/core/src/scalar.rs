//! Exact field elements over the rationals and the Gaussian rationals.
//!
//! A [`Scalar`] is stored as a pair of reduced rationals `re + im*i`. Values
//! with a zero imaginary part belong to the rational field; anything else is a
//! Gaussian rational. Because `BigRational` is always kept in lowest terms with
//! a positive denominator, structural equality and hashing coincide with field
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Which exact subfield of the complex numbers a value (or a whole point set)
/// lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Qi")]
    Gaussian,
}

impl FieldKind {
    pub fn tag(self) -> &'static str {
        match self {
            FieldKind::Rational => "Q",
            FieldKind::Gaussian => "Qi",
        }
    }

    /// The smallest field containing both.
    pub fn join(self, other: FieldKind) -> FieldKind {
        if self == FieldKind::Gaussian || other == FieldKind::Gaussian {
            FieldKind::Gaussian
        } else {
            FieldKind::Rational
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::real(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real(re: BigRational) -> Self {
        Scalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> Self {
        Scalar::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn kind(&self) -> FieldKind {
        if self.im.is_zero() {
            FieldKind::Rational
        } else {
            FieldKind::Gaussian
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.re.clone(), -&self.im)
    }

    /// `re^2 + im^2`, always a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Least common multiple of the denominators of both parts. Multiplying by
    /// it yields a Gaussian integer.
    pub fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// `true` when both parts are integers.
    pub fn is_integral(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    /// Positive in the total order used for sign canonicalisation: positive
    /// real part, or zero real part and positive imaginary part.
    pub fn is_positive(&self) -> bool {
        self.re.is_positive() || (self.re.is_zero() && self.im.is_positive())
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Decimal approximation of the real part, for human-readable summaries.
    pub fn re_f64(&self) -> f64 {
        self.re.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_real() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::real(BigRational::one())
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::real(v)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (real part, imaginary part). Not a field order; used only
/// for deterministic sorting and sign conventions.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl<'b> Add<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'b Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'b> Sub<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'b Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'b> Mul<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re * &rhs.re);
        }
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'b> Div<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re / &rhs.re);
        }
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.re, -&self.im)
    }
}

impl<'a> AddAssign<&'a Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &'a Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl<'a> SubAssign<&'a Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &'a Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &'a Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| &acc * &x)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders as `p/q` for rationals and `p/q+r/s*i` (or `p/q-r/s*i`) for
/// Gaussian rationals.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_ratio(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}*i",
            fmt_ratio(&self.re),
            sign,
            fmt_ratio(&self.im.abs())
        )
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p/q`, a bare integer `p`, `p/q+r/s*i`, `p/q-r/s*i` and a pure
    /// imaginary `r/s*i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("*i") else {
            return Ok(Scalar::real(parse_ratio(s)?));
        };
        // split at the last sign that is not leading
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        match split {
            Some(i) => {
                let re = parse_ratio(&body[..i])?;
                let im = parse_ratio(body[i..].trim_start_matches('+'))?;
                Ok(Scalar::new(re, im))
            }
            None => Ok(Scalar::new(BigRational::zero(), parse_ratio(body)?)),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `BigRational` fields rendered as `p/q` strings.
pub mod ratio_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&fmt_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<BigRational>`.
pub mod opt_ratio_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_ratio(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_ratio(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Shorthand for an exact rational from two integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational vector from integers.
pub fn int_vec(values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| Scalar::from_int(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gauss() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9)
            .prop_map(|(a, b, c, d)| Scalar::gaussian((a, b), (c, d)))
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Scalar::ratio(6, -4).to_string(), "-3/2");
        assert_eq!(Scalar::from_int(5).to_string(), "5/1");
        let g = Scalar::gaussian((1, 2), (-3, 4));
        assert_eq!(g.to_string(), "1/2-3/4*i");
        assert_eq!("1/2-3/4*i".parse::<Scalar>().unwrap(), g);
        assert_eq!("-1/2+3/4*i".parse::<Scalar>().unwrap(), Scalar::gaussian((-1, 2), (3, 4)));
        assert_eq!("-3/4*i".parse::<Scalar>().unwrap(), Scalar::gaussian((0, 1), (-3, 4)));
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::from_int(7));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn canonical_form() {
        let a = Scalar::ratio(4, 6);
        assert_eq!(a.re().numer(), &BigInt::from(2));
        assert_eq!(a.re().denom(), &BigInt::from(3));
        let b = Scalar::ratio(-1, -2);
        assert_eq!(b, Scalar::ratio(1, 2));
        // i * i = -1 collapses to the rational field
        assert_eq!((Scalar::i() * Scalar::i()).kind(), FieldKind::Rational);
    }

    #[test]
    fn sign_order() {
        assert!(Scalar::ratio(1, 3).is_positive());
        assert!(!Scalar::from_int(-1).is_positive());
        assert!(Scalar::gaussian((0, 1), (1, 1)).is_positive());
        assert!(!Scalar::gaussian((0, 1), (-1, 1)).is_positive());
        assert!(!Scalar::zero().is_positive());
    }

    proptest! {
        #[test]
        fn field_axioms(a in gauss(), b in gauss(), c in gauss()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
                prop_assert_eq!(&(&b / &a) * &a, b.clone());
            }
        }

        #[test]
        fn string_round_trip(a in gauss()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Scalar>().unwrap(), a);
        }
    }
}
