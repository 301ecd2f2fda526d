//! Elements of the exterior algebra `Λ = Q⟨ε₁, …, ε_k⟩`.
//!
//! A monomial `ε_{i₁}⋯ε_{i_r}` with `i₁ < … < i_r` is stored as the bitmask of
//! its generator indices (bit `i − 1` for `ε_i`).

use super::LinalgError;
use crate::rational::{format_rational, parse_rational, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub const DEFAULT_GENERATOR_CAP: usize = 8;
/// Masks are `u32`; this is the largest cap any context may request.
pub const HARD_GENERATOR_LIMIT: usize = 24;

pub fn check_generator_count(k: usize, cap: usize) -> Result<(), LinalgError> {
    let cap = cap.min(HARD_GENERATOR_LIMIT);
    if k > cap {
        return Err(LinalgError::TooManyGenerators { k, cap });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_mask(mask: u32) -> Parity {
        if mask.count_ones().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Sign of `ε_a · ε_b` after sorting into increasing order, or `None` if the
/// product vanishes.
fn monomial_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 31 { 0 } else { a >> (j + 1) };
        swaps += above.count_ones();
    }
    Some(swaps % 2 == 1)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrassmannScalar {
    k: usize,
    terms: BTreeMap<u32, Q>,
}

impl GrassmannScalar {
    pub fn zero(k: usize) -> Self {
        Self {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(k: usize) -> Self {
        Self::constant(k, Q::one())
    }

    pub fn constant(k: usize, c: Q) -> Self {
        let mut s = Self::zero(k);
        s.insert(0, c);
        s
    }

    /// `ε_i` with 1-based index `i`.
    pub fn generator(k: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= k, "generator index {i} outside 1..={k}");
        let mut s = Self::zero(k);
        s.insert(1 << (i - 1), Q::one());
        s
    }

    /// `c · ε_{i₁}⋯ε_{i_r}` for 1-based indices in any order (sign applied).
    pub fn monomial(k: usize, indices: &[usize], c: Q) -> Self {
        indices
            .iter()
            .fold(Self::constant(k, c), |acc, &i| &acc * &Self::generator(k, i))
    }

    pub fn from_terms(k: usize, terms: impl IntoIterator<Item = (u32, Q)>) -> Self {
        let mut s = Self::zero(k);
        for (m, c) in terms {
            assert!(k >= 32 || m >> k == 0, "monomial uses generators beyond k");
            let c = s.terms.remove(&m).unwrap_or_else(Q::zero) + c;
            s.insert(m, c);
        }
        s
    }

    fn insert(&mut self, mask: u32, c: Q) {
        if c.is_zero() {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, c);
        }
    }

    pub fn generators(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Q)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u32) -> Q {
        self.terms.get(&mask).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of the empty monomial.
    pub fn body(&self) -> Q {
        self.coefficient(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.body().is_one()
    }

    /// Even iff every stored monomial has even degree (zero is both).
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    pub fn parity(&self) -> Option<Parity> {
        if self.is_even() {
            Some(Parity::Even)
        } else if self.is_odd() {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_terms(self.k, self.terms.iter().map(|(m, x)| (*m, x * c)))
    }

    pub fn invertible(&self) -> bool {
        !self.body().is_zero()
    }

    /// Inverse of `a + n` (`a` the body, `n` nilpotent) by the finite series
    /// `a⁻¹ Σ (−n/a)^i`; the series stops once a power of `n` vanishes.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let a = self.body();
        if a.is_zero() {
            return Err(LinalgError::NotInvertible);
        }
        let a_inv = a.recip();
        let mut nil = self.clone();
        nil.terms.remove(&0);
        let ratio = nil.scale(&(-a_inv.clone()));
        let mut sum = Self::one(self.k);
        let mut power = Self::one(self.k);
        loop {
            power = &power * &ratio;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&a_inv))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_wire(&self) -> GrassmannWire {
        GrassmannWire {
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let idx = (0..32).filter(|b| m >> b & 1 == 1).map(|b| b as usize + 1).collect();
                    (idx, format_rational(c))
                })
                .collect(),
        }
    }

    pub fn from_wire(w: &GrassmannWire, cap: usize) -> Result<Self, LinalgError> {
        check_generator_count(w.k, cap)?;
        let mut out = Self::zero(w.k);
        for (idx, c) in &w.terms {
            if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > w.k) {
                return Err(LinalgError::Malformed(format!(
                    "generator index {bad} outside 1..={}",
                    w.k
                )));
            }
            let c = parse_rational(c).map_err(|e| LinalgError::Malformed(e.to_string()))?;
            out = &out + &Self::monomial(w.k, idx, c);
        }
        Ok(out)
    }
}

/// `{ "k": 2, "terms": [[[1,2], "-1"], [[], "1"]] }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannWire {
    #[serde(with = "crate::rational::num_string")]
    pub k: usize,
    #[serde(with = "terms_wire")]
    pub terms: Vec<(Vec<usize>, String)>,
}

mod terms_wire {
    use crate::rational::num_string_vec;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term(#[serde(with = "num_string_vec")] Vec<usize>, String);

    pub fn serialize<S: Serializer>(t: &[(Vec<usize>, String)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(t.iter().map(|(i, c)| Term(i.clone(), c.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Vec<usize>, String)>, D::Error> {
        Ok(Vec::<Term>::deserialize(d)?.into_iter().map(|t| (t.0, t.1)).collect())
    }
}

impl Add for &GrassmannScalar {
    type Output = GrassmannScalar;
    fn add(self, rhs: &GrassmannScalar) -> GrassmannScalar {
        assert_eq!(self.k, rhs.k, "Grassmann generator counts differ");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            let v = out.coefficient(*m) + c;
            out.insert(*m, v);
        }
        out
    }
}

impl Sub for &GrassmannScalar {
    type Output = GrassmannScalar;
    fn sub(self, rhs: &GrassmannScalar) -> GrassmannScalar {
        self + &(-rhs.clone())
    }
}

impl Neg for GrassmannScalar {
    type Output = GrassmannScalar;
    fn neg(mut self) -> GrassmannScalar {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for &GrassmannScalar {
    type Output = GrassmannScalar;
    fn mul(self, rhs: &GrassmannScalar) -> GrassmannScalar {
        assert_eq!(self.k, rhs.k, "Grassmann generator counts differ");
        let mut acc: BTreeMap<u32, Q> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                if let Some(neg) = monomial_sign(*a, *b) {
                    let v = x * y;
                    let e = acc.entry(a | b).or_insert_with(Q::zero);
                    if neg {
                        *e -= v;
                    } else {
                        *e += v;
                    }
                }
            }
        }
        GrassmannScalar::from_terms(self.k, acc)
    }
}

impl fmt::Debug for GrassmannScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GrassmannScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for b in 0..32 {
                if m >> b & 1 == 1 {
                    write!(f, "·e{}", b + 1)?;
                }
            }
        }
        Ok(())
    }
}
