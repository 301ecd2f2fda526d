//! Split super curve models `O = C ⊕ ΠL` over the affine or projective line,
//! Z²-valued orders of even rational functions, lattices and their distance,
//! and norms along finite covers.

pub mod cover;
pub mod lattice;

pub use cover::{ber_of_multiplication, CoverData, SuperRationalFunction};
pub use lattice::{lattice_distance, SuperLattice};

use crate::poly::{factor, is_irreducible, Poly, PolyError, RationalFunction};
use crate::rational::parse_rational;
use crate::z2::Z2Value;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub type RationalEvenFunction = RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("the zero function has no order")]
    ZeroFunction,
    #[error("point {0} is not on the model")]
    UnknownPoint(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("cover has no free even basis: {0}")]
    NoEvenBasis(String),
    #[error("function has a nonzero odd part")]
    NotEven,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A closed point: a monic irreducible polynomial in the coordinate, or the
/// point at infinity of the projective line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(Poly),
    Infinity,
}

impl Point {
    pub fn finite(p: Poly) -> Result<Self, CurveError> {
        if p.is_zero() || p.deg() == 0 {
            return Err(CurveError::InvalidPoint(format!("{} is constant", p.display("t"))));
        }
        if !p.is_monic() {
            return Err(CurveError::InvalidPoint(format!("{} is not monic", p.display("t"))));
        }
        if !is_irreducible(&p)? {
            return Err(CurveError::InvalidPoint(format!("{} is reducible", p.display("t"))));
        }
        Ok(Point::Finite(p))
    }

    /// The rational point `t = a`.
    pub fn rational(a: i64) -> Self {
        Point::Finite(Poly::linear(crate::rational::q(a)))
    }

    /// Residue degree over Q.
    pub fn degree(&self) -> usize {
        match self {
            Point::Finite(p) => p.deg(),
            Point::Infinity => 1,
        }
    }

    pub fn valuation(&self, g: &RationalFunction) -> i64 {
        match self {
            Point::Finite(p) => g.valuation(p),
            Point::Infinity => g.valuation_at_infinity(),
        }
    }

    pub fn label(&self, var: &str) -> String {
        match self {
            Point::Finite(p) => p.display(var),
            Point::Infinity => "inf".into(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Point::Finite(p) => Value::from(p.coeff_strings()),
            Point::Infinity => Value::from("inf"),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, CurveError> {
        match v {
            Value::String(s) if s == "inf" => Ok(Point::Infinity),
            Value::Array(_) => Point::finite(poly_from_json(v)?),
            other => Err(CurveError::Malformed(format!("point {other}"))),
        }
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Infinity, Point::Infinity) => Ordering::Equal,
            (Point::Infinity, _) => Ordering::Greater,
            (_, Point::Infinity) => Ordering::Less,
            (Point::Finite(a), Point::Finite(b)) => a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label("t"))
    }
}

/// Coefficient list (constant term first) of strings or integers.
pub fn poly_from_json(v: &Value) -> Result<Poly, CurveError> {
    let arr = v
        .as_array()
        .ok_or_else(|| CurveError::Malformed(format!("expected a coefficient list, got {v}")))?;
    let coeffs = arr
        .iter()
        .map(|c| match c {
            Value::String(s) => parse_rational(s).map_err(|e| CurveError::Malformed(e.to_string())),
            Value::Number(n) if n.is_i64() => Ok(crate::rational::q(n.as_i64().unwrap_or_default())),
            other => Err(CurveError::Malformed(format!("coefficient {other}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Base {
    A1,
    P1,
}

/// Split model over the line: `L` is invertible away from the torsion points,
/// twisted by a divisor, and the torsion part is `⊕ Q[t]/(p^e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperCurveModel {
    pub base: Base,
    pub twist: BTreeMap<Point, i64>,
    pub torsion: Vec<(Point, u32)>,
    /// Generic rank of `L`: 1 for a super curve, 0 for its purely even
    /// reduction.
    pub odd_rank: u32,
}

impl SuperCurveModel {
    /// `L = O` on the given base.
    pub fn free(base: Base) -> Self {
        Self {
            base,
            twist: BTreeMap::new(),
            torsion: Vec::new(),
            odd_rank: 1,
        }
    }

    pub fn purely_even(base: Base) -> Self {
        Self {
            odd_rank: 0,
            ..Self::free(base)
        }
    }

    pub fn with_torsion(mut self, p: Point, e: u32) -> Self {
        self.torsion.push((p, e));
        self
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        if self.odd_rank > 1 {
            return Err(CurveError::Malformed("odd rank must be 0 or 1".into()));
        }
        for p in self.twist.keys().chain(self.torsion.iter().map(|(p, _)| p)) {
            self.check_point(p)?;
        }
        if self.torsion.iter().any(|(_, e)| *e == 0) {
            return Err(CurveError::Malformed("torsion exponents must be at least 1".into()));
        }
        if self.odd_rank == 0 && !self.torsion.is_empty() {
            return Err(CurveError::Malformed("a purely even model has no odd torsion".into()));
        }
        Ok(())
    }

    fn check_point(&self, p: &Point) -> Result<(), CurveError> {
        if *p == Point::Infinity && self.base == Base::A1 {
            return Err(CurveError::UnknownPoint("inf (the model is affine)".into()));
        }
        Ok(())
    }

    /// Degree of `L/torsion`: the total twist weighted by residue degrees.
    pub fn twist_degree(&self) -> i64 {
        self.twist.iter().map(|(p, n)| p.degree() as i64 * n).sum()
    }

    fn torsion_at(&self, p: &Point) -> impl Iterator<Item = u32> + '_ {
        let p = p.clone();
        self.torsion.iter().filter(move |(x, _)| *x == p).map(|(_, e)| *e)
    }

    /// Local length of `B_p/(b)` for a local function with valuation `v ≥ 0`.
    fn local_length(&self, p: &Point, v: i64) -> Z2Value {
        let tors: i64 = self.torsion_at(p).map(|e| v.min(e as i64)).sum();
        Z2Value::new(v, v * self.odd_rank as i64 + tors)
    }

    /// `ℓ(B_p/(num)) − ℓ(B_p/(den))` for `g = num/den` in lowest terms.
    pub fn ord_at(&self, p: &Point, g: &RationalEvenFunction) -> Result<Z2Value, CurveError> {
        if g.is_zero() {
            return Err(CurveError::ZeroFunction);
        }
        self.check_point(p)?;
        let (vn, vd) = match p {
            Point::Finite(f) => (g.num().valuation(f) as i64, g.den().valuation(f) as i64),
            Point::Infinity => {
                let n = g.num().deg().max(g.den().deg()) as i64;
                (n - g.num().deg() as i64, n - g.den().deg() as i64)
            }
        };
        Ok(&self.local_length(p, vn) - &self.local_length(p, vd))
    }

    /// Points where `ord` may be nonzero.
    fn candidate_points(&self, g: &RationalEvenFunction) -> Result<Vec<Point>, CurveError> {
        let mut pts: Vec<Point> = Vec::new();
        for poly in [g.num(), g.den()] {
            for (f, _) in factor(poly)? {
                pts.push(Point::Finite(f));
            }
        }
        pts.extend(self.torsion.iter().map(|(p, _)| p.clone()));
        if self.base == Base::P1 {
            pts.push(Point::Infinity);
        }
        pts.sort();
        pts.dedup();
        Ok(pts)
    }

    /// `Σ_p ord_p(g)·[p]` over the points where the order is nonzero.
    pub fn div_model(&self, g: &RationalEvenFunction) -> Result<BTreeMap<Point, Z2Value>, CurveError> {
        if g.is_zero() {
            return Err(CurveError::ZeroFunction);
        }
        let mut out = BTreeMap::new();
        for p in self.candidate_points(g)? {
            let o = self.ord_at(&p, g)?;
            if !o.is_zero() {
                out.insert(p, o);
            }
        }
        Ok(out)
    }

    pub fn to_wire(&self) -> ModelWire {
        ModelWire {
            base: self.base,
            twist: self.twist.iter().map(|(p, n)| (p.to_json(), *n)).collect(),
            torsion: self.torsion.iter().map(|(p, e)| (p.to_json(), *e)).collect(),
            odd_rank: Some(self.odd_rank),
        }
    }

    pub fn from_wire(w: &ModelWire) -> Result<Self, CurveError> {
        let mut twist = BTreeMap::new();
        for (p, n) in &w.twist {
            *twist.entry(Point::from_json(p)?).or_insert(0) += n;
        }
        twist.retain(|_, n| *n != 0);
        let torsion = w
            .torsion
            .iter()
            .map(|(p, e)| Ok((Point::from_json(p)?, *e)))
            .collect::<Result<Vec<_>, CurveError>>()?;
        let m = Self {
            base: w.base,
            twist,
            torsion,
            odd_rank: w.odd_rank.unwrap_or(1),
        };
        m.validate()?;
        Ok(m)
    }
}

/// Weighted total `Σ deg(p)·c_p` of a divisor.
pub fn divisor_degree(div: &BTreeMap<Point, Z2Value>) -> Z2Value {
    div.iter().map(|(p, c)| c.scale(&(p.degree() as i64).into())).sum()
}

/// `{base: "A1"|"P1", twist: [[point, n]…], torsion: [[point, e]…], odd_rank?: 0|1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelWire {
    pub base: Base,
    #[serde(default, with = "crate::rational::keyed_num_vec")]
    pub twist: Vec<(Value, i64)>,
    #[serde(default, with = "crate::rational::keyed_num_vec")]
    pub torsion: Vec<(Value, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_rank: Option<u32>,
}

/// `{num: [coeffs], den?: [coeffs]}`, constant term first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionWire {
    pub num: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<Value>,
}

impl FunctionWire {
    pub fn parse(&self) -> Result<RationalFunction, CurveError> {
        let num = poly_from_json(&self.num)?;
        let den = match &self.den {
            Some(d) => poly_from_json(d)?,
            None => Poly::one(),
        };
        Ok(RationalFunction::new(num, den)?)
    }

    pub fn from_function(g: &RationalFunction) -> Self {
        Self {
            num: Value::from(g.num().coeff_strings()),
            den: (!g.den().is_constant()).then(|| Value::from(g.den().coeff_strings())),
        }
    }
}
