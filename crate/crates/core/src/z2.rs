//! The value ring `Z² = Z × Z` of super lengths, orders and multiplicities.
//!
//! Addition is componentwise; multiplication twists the odd components:
//! `(m, n)·(m', n') = (mm' + nn', mn' + m'n)`. Think of `(m, n)` as
//! `m + n·π` with `π² = 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Z2Value {
    pub even: BigInt,
    pub odd: BigInt,
}

impl Z2Value {
    pub fn new(even: impl Into<BigInt>, odd: impl Into<BigInt>) -> Self {
        Self {
            even: even.into(),
            odd: odd.into(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// The pure odd unit `(0, 1)`, whose square is `(1, 0)`.
    pub fn pi() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn mul(&self, other: &Z2Value) -> Z2Value {
        Z2Value {
            even: &self.even * &other.even + &self.odd * &other.odd,
            odd: &self.even * &other.odd + &self.odd * &other.even,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Z2Value {
        Z2Value {
            even: k * &self.even,
            odd: k * &self.odd,
        }
    }

    /// Exchanges components; the effect of a parity shift on a length.
    pub fn swap(&self) -> Z2Value {
        Z2Value {
            even: self.odd.clone(),
            odd: self.even.clone(),
        }
    }

    /// The ring homomorphism `(m, n) ↦ m − n` to the integers.
    pub fn superdimension(&self) -> BigInt {
        &self.even - &self.odd
    }
}

pub fn z2_mul(a: &Z2Value, b: &Z2Value) -> Z2Value {
    a.mul(b)
}

pub fn z2_scale(k: &BigInt, a: &Z2Value) -> Z2Value {
    a.scale(k)
}

impl fmt::Display for Z2Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.even, self.odd)
    }
}

impl Add for &Z2Value {
    type Output = Z2Value;
    fn add(self, rhs: &Z2Value) -> Z2Value {
        Z2Value {
            even: &self.even + &rhs.even,
            odd: &self.odd + &rhs.odd,
        }
    }
}

impl Add for Z2Value {
    type Output = Z2Value;
    fn add(self, rhs: Z2Value) -> Z2Value {
        &self + &rhs
    }
}

impl Sub for &Z2Value {
    type Output = Z2Value;
    fn sub(self, rhs: &Z2Value) -> Z2Value {
        Z2Value {
            even: &self.even - &rhs.even,
            odd: &self.odd - &rhs.odd,
        }
    }
}

impl Sub for Z2Value {
    type Output = Z2Value;
    fn sub(self, rhs: Z2Value) -> Z2Value {
        &self - &rhs
    }
}

impl Neg for Z2Value {
    type Output = Z2Value;
    fn neg(self) -> Z2Value {
        Z2Value {
            even: -self.even,
            odd: -self.odd,
        }
    }
}

impl AddAssign<&Z2Value> for Z2Value {
    fn add_assign(&mut self, rhs: &Z2Value) {
        self.even += &rhs.even;
        self.odd += &rhs.odd;
    }
}

impl SubAssign<&Z2Value> for Z2Value {
    fn sub_assign(&mut self, rhs: &Z2Value) {
        self.even -= &rhs.even;
        self.odd -= &rhs.odd;
    }
}

impl Mul for &Z2Value {
    type Output = Z2Value;
    fn mul(self, rhs: &Z2Value) -> Z2Value {
        Z2Value::mul(self, rhs)
    }
}

impl Mul for Z2Value {
    type Output = Z2Value;
    fn mul(self, rhs: Z2Value) -> Z2Value {
        Z2Value::mul(&self, &rhs)
    }
}

impl std::iter::Sum for Z2Value {
    fn sum<I: Iterator<Item = Z2Value>>(iter: I) -> Z2Value {
        iter.fold(Z2Value::zero(), |acc, x| acc + x)
    }
}

impl From<(i64, i64)> for Z2Value {
    fn from((e, o): (i64, i64)) -> Self {
        Z2Value::new(e, o)
    }
}

impl One for Z2Value {
    fn one() -> Self {
        Z2Value::one()
    }
}

impl Zero for Z2Value {
    fn zero() -> Self {
        Z2Value::zero()
    }
    fn is_zero(&self) -> bool {
        Z2Value::is_zero(self)
    }
}

// Wire format: `["even", "odd"]`; bare JSON integers are accepted on input.
impl Serialize for Z2Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.even.to_string(), self.odd.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Z2Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Pair(
            #[serde(with = "crate::rational::int_string")] BigInt,
            #[serde(with = "crate::rational::int_string")] BigInt,
        );
        let Pair(even, odd) = Pair::deserialize(d)?;
        Ok(Z2Value { even, odd })
    }
}
