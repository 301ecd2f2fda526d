//! Univariate polynomials and rational functions over Q, with factorization
//! into monic irreducibles for the small degrees the curve models use.

use crate::rational::{format_rational, parse_rational, q, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Factorization refuses inputs above this degree.
pub const MAX_FACTOR_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("factorization of degree {0} exceeds the supported maximum")]
    FactorizationTooLarge(usize),
    #[error("integer {0} too large to enumerate divisors")]
    ValueTooLarge(String),
    #[error("malformed polynomial: {0}")]
    Malformed(String),
}

/// Dense polynomial, coefficients from the constant term upward, no trailing
/// zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    /// `x − a`.
    pub fn linear(a: Q) -> Self {
        Self::new(vec![-a, Q::one()])
    }

    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn parse_coeffs(c: &[String]) -> Result<Self, PolyError> {
        c.iter()
            .map(|s| parse_rational(s).map_err(|e| PolyError::Malformed(e.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p(−x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `p(x^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        let mut out = vec![Q::zero(); self.deg() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(out)
    }

    /// `p(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// Writes `p(x) = e(x²) + x·o(x²)`; returns `(e, o)`.
    pub fn even_odd_split(&self) -> (Poly, Poly) {
        let ev = self.coeffs.iter().step_by(2).cloned().collect();
        let od = self.coeffs.iter().skip(1).step_by(2).cloned().collect();
        (Poly::new(ev), Poly::new(od))
    }

    /// `p(x) = q·d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut rem = self.coeffs.clone();
        let dd = d.deg();
        let lead_inv = d.leading().recip();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Q::zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quo[i] = c;
        }
        Ok((Poly::new(quo), Poly::new(rem)))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.divrem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (quo, r) = self.divrem(d).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        quo
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of the irreducible `p` in `self`; `self` must be nonzero.
    pub fn valuation(&self, p: &Poly) -> u32 {
        assert!(!self.is_zero(), "valuation of zero");
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (quo, r) = cur.divrem(p).expect("nonzero divisor");
            if !r.is_zero() {
                return v;
            }
            v += 1;
            cur = quo;
        }
    }

    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.leading().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

impl Poly {
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { "-" } else { "+" });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }
}

/// Squarefree factorization (Yun): monic pairwise coprime squarefree `f_i`
/// with `p = lc · Π f_i^i`.
pub fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let p = p.monic();
    let dp = p.derivative();
    let a0 = Poly::gcd(&p, &dp);
    let mut b = p.exact_div(&a0);
    let mut c = dp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = Poly::gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, PolyError> {
    let n = n.abs();
    let Some(m) = n.to_u64().filter(|&m| m <= 1_000_000_000_000) else {
        return Err(PolyError::ValueTooLarge(n.to_string()));
    };
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= m {
        if m % i == 0 {
            small.push(BigInt::from(i));
            if i * i != m {
                large.push(BigInt::from(m / i));
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

fn rational_roots(p: &Poly) -> Result<Vec<Q>, PolyError> {
    let ints = p.primitive_integer();
    let mut roots = Vec::new();
    // strip x^k
    let first = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if first > 0 {
        roots.push(Q::zero());
    }
    let ints = &ints[first..];
    if ints.len() <= 1 {
        return Ok(roots);
    }
    let a0 = &ints[0];
    let an = ints.last().unwrap();
    let trimmed = Poly::new(ints.iter().map(|c| Q::from_integer(c.clone())).collect());
    for num in divisors(a0)? {
        for den in divisors(an)? {
            for sgn in [1, -1] {
                let r = Q::new(&num * sgn, den.clone());
                if !roots.contains(&r) && trimmed.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    Ok(roots)
}

fn lagrange(points: &[(Q, Q)]) -> Poly {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = Poly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                term = &term * &Poly::linear(xj.clone());
                term = term.scale(&(xi - xj).recip());
            }
        }
        acc = &acc + &term;
    }
    acc
}

fn cartesian(lists: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    lists.iter().fold(vec![vec![]], |acc, l| {
        acc.into_iter()
            .flat_map(|prefix| {
                l.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// Kronecker's method: a monic factor of degree `d` of the squarefree,
/// root-free polynomial `p`, if one exists.
fn kronecker_factor(p: &Poly, d: usize) -> Result<Option<Poly>, PolyError> {
    let ints = p.primitive_integer();
    let pi = Poly::new(ints.iter().map(|c| Q::from_integer(c.clone())).collect());
    let mut samples: Vec<(i64, BigInt)> = (-12i64..=12)
        .map(|x| (x, pi.eval(&q(x)).to_integer()))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    samples.sort_by_key(|(x, v)| (v.abs(), x.abs()));
    let chosen = &samples[..d + 1];
    let mut lists = Vec::with_capacity(d + 1);
    for (i, (_, v)) in chosen.iter().enumerate() {
        let divs = divisors(v)?;
        // fixing the sign of one value fixes the overall sign of the factor
        let l: Vec<BigInt> = if i == 0 {
            divs
        } else {
            divs.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
        };
        lists.push(l);
    }
    for values in cartesian(&lists) {
        let pts: Vec<(Q, Q)> = chosen
            .iter()
            .zip(&values)
            .map(|((x, _), v)| (q(*x), Q::from_integer(v.clone())))
            .collect();
        let h = lagrange(&pts);
        if h.degree() != Some(d) || !h.coeffs.iter().all(|c| c.denom().is_one()) {
            continue;
        }
        if h.divides(&pi) {
            return Ok(Some(h.monic()));
        }
    }
    Ok(None)
}

fn split_squarefree(p: &Poly, out: &mut Vec<Poly>) -> Result<(), PolyError> {
    let mut rest = p.monic();
    for r in rational_roots(&rest)? {
        let lin = Poly::linear(r);
        rest = rest.exact_div(&lin);
        out.push(lin);
    }
    let mut stack = vec![rest];
    while let Some(f) = stack.pop() {
        let n = f.deg();
        if n == 0 {
            continue;
        }
        if n <= 3 {
            out.push(f);
            continue;
        }
        let mut found = None;
        for d in 2..=n / 2 {
            if let Some(h) = kronecker_factor(&f, d)? {
                found = Some(h);
                break;
            }
        }
        match found {
            Some(h) => {
                stack.push(f.exact_div(&h));
                stack.push(h);
            }
            None => out.push(f),
        }
    }
    Ok(())
}

/// Monic irreducible factors with multiplicities, sorted by (degree,
/// coefficients). Constants factor as the empty product.
pub fn factor(p: &Poly) -> Result<Vec<(Poly, u32)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    if p.deg() > MAX_FACTOR_DEGREE {
        return Err(PolyError::FactorizationTooLarge(p.deg()));
    }
    let mut out = Vec::new();
    for (f, m) in squarefree_decomposition(p) {
        let mut parts = Vec::new();
        split_squarefree(&f, &mut parts)?;
        out.extend(parts.into_iter().map(|g| (g, m)));
    }
    out.sort_by(|(a, _), (b, _)| a.deg().cmp(&b.deg()).then_with(|| a.coeffs.cmp(&b.coeffs)));
    Ok(out)
}

pub fn is_irreducible(p: &Poly) -> Result<bool, PolyError> {
    if p.is_constant() {
        return Ok(false);
    }
    let f = factor(p)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

/// Reduced fraction `num/den` with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Poly::gcd(&num, &den);
        let num = num.exact_div(&g);
        let den = den.exact_div(&g);
        let lc = den.leading().recip();
        Ok(Self {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(self * &other.recip()?)
    }

    /// `v_p` at a monic irreducible `p`.
    pub fn valuation(&self, p: &Poly) -> i64 {
        assert!(!self.is_zero(), "valuation of zero");
        self.num.valuation(p) as i64 - self.den.valuation(p) as i64
    }

    /// Valuation at the point at infinity, `deg den − deg num`.
    pub fn valuation_at_infinity(&self) -> i64 {
        assert!(!self.is_zero(), "valuation of zero");
        self.den.deg() as i64 - self.num.deg() as i64
    }

    pub fn display(&self, var: &str) -> String {
        if self.den.is_one_poly() {
            self.num.display(var)
        } else {
            format!("({})/({})", self.num.display(var), self.den.display(var))
        }
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&(&self.num * &rhs.den) - &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn division_and_gcd() {
        let a = &p(&[-1, 0, 1]) * &p(&[2, 1]);
        let (quo, r) = a.divrem(&p(&[1, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(quo, &p(&[-1, 1]) * &p(&[2, 1]));
        assert_eq!(Poly::gcd(&a, &p(&[1, 0, 1])), Poly::one());
        assert_eq!(Poly::gcd(&a, &p(&[-1, 1])), p(&[-1, 1]));
    }

    #[test]
    fn valuations() {
        let t = Poly::x();
        let f = &(&t * &t) * &p(&[-1, 1]);
        assert_eq!(f.valuation(&t), 2);
        assert_eq!(f.valuation(&p(&[-1, 1])), 1);
        assert_eq!(f.valuation(&p(&[2, 0, 1])), 0);
        let g = RationalFunction::new(&t * &t, p(&[-1, 1])).unwrap();
        assert_eq!(g.valuation_at_infinity(), -1);
    }

    #[test]
    fn factor_mixed() {
        // (x-1)^2 (x+2) (x^2+1) (x^2-2)
        let f = [p(&[-1, 1]), p(&[-1, 1]), p(&[2, 1]), p(&[1, 0, 1]), p(&[-2, 0, 1])]
            .iter()
            .fold(Poly::one(), |a, b| &a * b)
            .scale(&q(3));
        let got = factor(&f).unwrap();
        assert_eq!(
            got,
            vec![
                (p(&[-1, 1]), 2),
                (p(&[2, 1]), 1),
                (p(&[-2, 0, 1]), 1),
                (p(&[1, 0, 1]), 1),
            ]
        );
    }

    #[test]
    fn kronecker_splits_quartics() {
        let f = &p(&[1, 0, 1]) * &p(&[3, 1, 1]);
        let got = factor(&f).unwrap();
        assert_eq!(got.len(), 2);
        assert!(is_irreducible(&p(&[1, 0, 0, 0, 1])).unwrap()); // x^4 + 1
        assert!(!is_irreducible(&p(&[4, 0, 0, 0, 1])).unwrap()); // x^4 + 4 = (x²+2x+2)(x²−2x+2)
        assert!(is_irreducible(&p(&[-2, 0, 0, 1])).unwrap());
    }

    #[test]
    fn squarefree_parts() {
        let f = &p(&[0, 1]).pow(3) * &p(&[1, 1]);
        let sf = squarefree_decomposition(&f);
        assert_eq!(sf, vec![(p(&[1, 1]), 1), (p(&[0, 1]), 3)]);
    }

    #[test]
    fn even_odd_split() {
        let f = p(&[1, 2, 3, 4]);
        let (e, o) = f.even_odd_split();
        assert_eq!(e, p(&[1, 3]));
        assert_eq!(o, p(&[2, 4]));
        assert_eq!(&e.substitute_power(2) + &(&Poly::x() * &o.substitute_power(2)), f);
    }
}
