//! Exact elements of ℚ/ℤ written additively.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

/// A reduced fraction `num/den` with `0 <= num < den` and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QZ {
    num: BigInt,
    den: BigInt,
}

impl QZ {
    /// Reduces `num/den` modulo 1. Panics when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let (num, den) = (num.into(), den.into());
        assert!(!den.is_zero(), "zero denominator");
        Self::reduce(num, den)
    }

    pub fn zero() -> Self {
        QZ {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    /// `1/2`, the nontrivial element of order two.
    pub fn half() -> Self {
        QZ::new(1, 2)
    }

    fn reduce(num: BigInt, den: BigInt) -> Self {
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num, den)
        };
        let num = num.mod_floor(&den);
        let g = num.gcd(&den);
        if num.is_zero() {
            return QZ::zero();
        }
        QZ {
            num: num / &g,
            den: den / g,
        }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The additive order, which equals the reduced denominator.
    pub fn order(&self) -> &BigInt {
        &self.den
    }

    pub fn scale(&self, k: &BigInt) -> QZ {
        QZ::reduce(&self.num * k, self.den.clone())
    }

    pub fn scale_i64(&self, k: i64) -> QZ {
        self.scale(&BigInt::from(k))
    }

    /// Divides a representative by `k`; one of the `k` preimages of multiplication by `k`.
    pub fn div_int(&self, k: &BigInt) -> QZ {
        assert!(!k.is_zero(), "division by zero");
        QZ::reduce(self.num.clone(), &self.den * k)
    }

    /// `num/den` as a rational in `[0, 1)`, for lifting to ℚ.
    pub fn lift(&self) -> (BigInt, BigInt) {
        (self.num.clone(), self.den.clone())
    }
}

impl Default for QZ {
    fn default() -> Self {
        QZ::zero()
    }
}

impl fmt::Debug for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for QZ {
    type Err = String;

    /// Accepts `a/b` or a bare integer (which reduces to 0).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(QZ::new(n, d))
    }
}

impl Add<&QZ> for &QZ {
    type Output = QZ;
    fn add(self, rhs: &QZ) -> QZ {
        if self.den == rhs.den {
            return QZ::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let l = self.den.lcm(&rhs.den);
        let a = &self.num * (&l / &self.den);
        let b = &rhs.num * (&l / &rhs.den);
        QZ::reduce(a + b, l)
    }
}

impl Add for QZ {
    type Output = QZ;
    fn add(self, rhs: QZ) -> QZ {
        &self + &rhs
    }
}

impl Add<&QZ> for QZ {
    type Output = QZ;
    fn add(self, rhs: &QZ) -> QZ {
        &self + rhs
    }
}

impl AddAssign<&QZ> for QZ {
    fn add_assign(&mut self, rhs: &QZ) {
        *self = &*self + rhs;
    }
}

impl AddAssign for QZ {
    fn add_assign(&mut self, rhs: QZ) {
        *self = &*self + &rhs;
    }
}

impl Neg for &QZ {
    type Output = QZ;
    fn neg(self) -> QZ {
        if self.num.is_zero() {
            return QZ::zero();
        }
        QZ {
            num: &self.den - &self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for QZ {
    type Output = QZ;
    fn neg(self) -> QZ {
        -&self
    }
}

impl Sub<&QZ> for &QZ {
    type Output = QZ;
    fn sub(self, rhs: &QZ) -> QZ {
        self + &(-rhs)
    }
}

impl Sub for QZ {
    type Output = QZ;
    fn sub(self, rhs: QZ) -> QZ {
        &self - &rhs
    }
}

impl Sub<&QZ> for QZ {
    type Output = QZ;
    fn sub(self, rhs: &QZ) -> QZ {
        &self - rhs
    }
}

impl SubAssign<&QZ> for QZ {
    fn sub_assign(&mut self, rhs: &QZ) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for QZ {
    fn sum<I: Iterator<Item = QZ>>(iter: I) -> QZ {
        iter.fold(QZ::zero(), |acc, x| acc + x)
    }
}

/// Integers go to JSON as numbers when they fit in an `i64` and as decimal strings otherwise.
pub(crate) fn bigint_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("integer expected, got {n}")),
        serde_json::Value::String(s) => s
            .parse()
            .map_err(|_| format!("integer expected, got {s:?}")),
        other => Err(format!("integer expected, got {other}")),
    }
}

/// Serde adapter for integer lists in the same number-or-string encoding.
pub(crate) mod bigint_list {
    use super::{bigint_from_json, bigint_to_json};
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(bigint_to_json))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|v| bigint_from_json(v).map_err(D::Error::custom))
            .collect()
    }
}

impl Serialize for QZ {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("QZ", 2)?;
        st.serialize_field("den", &bigint_to_json(&self.den))?;
        st.serialize_field("num", &bigint_to_json(&self.num))?;
        st.end()
    }
}

/// Accepts `{"num": n, "den": d}` records and `"n/d"` strings.
impl<'de> Deserialize<'de> for QZ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            num: serde_json::Value,
            den: serde_json::Value,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Text(String),
            Record(Raw),
        }
        match Either::deserialize(deserializer)? {
            Either::Text(s) => s.parse().map_err(de::Error::custom),
            Either::Record(raw) => {
                let num = bigint_from_json(&raw.num).map_err(de::Error::custom)?;
                let den = bigint_from_json(&raw.den).map_err(de::Error::custom)?;
                if den.is_zero() {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(QZ::new(num, den))
            }
        }
    }
}
