//! Superlattices in a free module over the local ring at a point, and the
//! Z²-valued distance between them.

use super::{poly_from_json, CurveError, Point};
use crate::poly::{Poly, RationalFunction};
use crate::z2::Z2Value;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub type RfMatrix = Vec<Vec<RationalFunction>>;

/// Even and odd lattices at a point, each given by a square matrix whose
/// columns are local generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperLattice {
    pub point: Point,
    pub even: RfMatrix,
    pub odd: RfMatrix,
}

impl SuperLattice {
    pub fn new(point: Point, even: RfMatrix, odd: RfMatrix) -> Result<Self, CurveError> {
        for (name, m) in [("even", &even), ("odd", &odd)] {
            if m.iter().any(|r| r.len() != m.len()) {
                return Err(CurveError::RankMismatch(format!("{name} block is not square")));
            }
            if determinant(m).is_zero() {
                return Err(CurveError::RankMismatch(format!("{name} block is singular")));
            }
        }
        Ok(Self { point, even, odd })
    }

    /// The standard lattice `R^{p|q}`.
    pub fn standard(point: Point, p: usize, q: usize) -> Self {
        Self {
            point,
            even: identity(p),
            odd: identity(q),
        }
    }

    pub fn rank(&self) -> (usize, usize) {
        (self.even.len(), self.odd.len())
    }

    /// `φ(M)` for an even block-diagonal `φ = diag(C₁, C₄)`.
    pub fn apply_block_diagonal(&self, c1: &RfMatrix, c4: &RfMatrix) -> Result<Self, CurveError> {
        if c1.len() != self.even.len() || c4.len() != self.odd.len() {
            return Err(CurveError::RankMismatch(
                "automorphism blocks do not match the lattice".into(),
            ));
        }
        Self::new(self.point.clone(), matmul(c1, &self.even), matmul(c4, &self.odd))
    }

    pub fn from_wire(w: &LatticeWire) -> Result<Self, CurveError> {
        let parse = |rows: &Vec<Vec<Value>>| -> Result<RfMatrix, CurveError> {
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|e| Ok(RationalFunction::from_poly(poly_from_json(e)?)))
                        .collect()
                })
                .collect()
        };
        Self::new(Point::from_json(&w.point)?, parse(&w.even)?, parse(&w.odd)?)
    }
}

/// `{point, even: [[entry…]…], odd: [[entry…]…]}`, entries as coefficient
/// lists of polynomials in t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeWire {
    pub point: Value,
    pub even: Vec<Vec<Value>>,
    pub odd: Vec<Vec<Value>>,
}

pub fn identity(n: usize) -> RfMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RationalFunction::one()
                    } else {
                        RationalFunction::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn diagonal(entries: Vec<RationalFunction>) -> RfMatrix {
    let n = entries.len();
    entries
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let mut row = vec![RationalFunction::zero(); n];
            row[i] = e;
            row
        })
        .collect()
}

pub fn from_polys(rows: Vec<Vec<Poly>>) -> RfMatrix {
    rows.into_iter()
        .map(|r| r.into_iter().map(RationalFunction::from_poly).collect())
        .collect()
}

fn matmul(a: &RfMatrix, b: &RfMatrix) -> RfMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(RationalFunction::zero(), |acc, (x, brow)| &acc + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

/// Determinant over Q(t) by elimination.
pub fn determinant(m: &RfMatrix) -> RationalFunction {
    let mut a = m.clone();
    let n = a.len();
    let mut det = RationalFunction::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return RationalFunction::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -&det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].recip().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] = &a[r][c] - &sub;
            }
        }
    }
    det
}

/// Solves `a·x = b` for square nonsingular `a`.
fn solve(a: &RfMatrix, b: &RfMatrix) -> RfMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut aug: RfMatrix = a
        .iter()
        .zip(b)
        .map(|(r, s)| r.iter().chain(s).cloned().collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero()).expect("nonsingular");
        aug.swap(piv, col);
        let inv = aug[col][col].recip().expect("nonzero pivot");
        for c in 0..n + m {
            aug[col][c] = &aug[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for c in 0..n + m {
                let sub = &f * &aug[col][c];
                aug[r][c] = &aug[r][c] - &sub;
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Valuations of the elementary divisors of a nonsingular matrix over the
/// local ring at `p`: repeatedly move an entry of least valuation to the
/// pivot and clear its row and column.
pub fn local_elementary_divisors(p: &Point, m: &RfMatrix) -> Vec<i64> {
    let mut a = m.clone();
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (pr, pc) = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| p.valuation(&a[i][j]))
            .expect("nonsingular");
        a.swap(k, pr);
        for row in a.iter_mut() {
            row.swap(k, pc);
        }
        let inv = a[k][k].recip().expect("nonzero pivot");
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] * &inv;
            for c in k..n {
                let sub = &f * &a[k][c];
                a[r][c] = &a[r][c] - &sub;
            }
        }
        for c in k + 1..n {
            a[k][c] = RationalFunction::zero();
        }
        out.push(p.valuation(&a[k][k]));
    }
    out
}

/// `(ℓ(M/M∩M'), ℓ(M'/M∩M'))` for the even and the odd blocks.
pub fn lattice_quotient_lengths(m: &SuperLattice, m2: &SuperLattice) -> Result<(Z2Value, Z2Value), CurveError> {
    if m.point != m2.point {
        return Err(CurveError::RankMismatch("lattices live at different points".into()));
    }
    if m.rank() != m2.rank() {
        return Err(CurveError::RankMismatch(format!(
            "ranks {:?} and {:?}",
            m.rank(),
            m2.rank()
        )));
    }
    let block = |a: &RfMatrix, b: &RfMatrix| -> (i64, i64) {
        if a.is_empty() {
            return (0, 0);
        }
        let divs = local_elementary_divisors(&m.point, &solve(a, b));
        (
            divs.iter().map(|&d| d.max(0)).sum(),
            divs.iter().map(|&d| (-d).max(0)).sum(),
        )
    };
    let (e_plus, e_minus) = block(&m.even, &m2.even);
    let (o_plus, o_minus) = block(&m.odd, &m2.odd);
    Ok((Z2Value::new(e_plus, o_plus), Z2Value::new(e_minus, o_minus)))
}

/// `d(M, M') = ℓ(M/M∩M') − ℓ(M'/M∩M')`.
pub fn lattice_distance(m: &SuperLattice, m2: &SuperLattice) -> Result<Z2Value, CurveError> {
    let (a, b) = lattice_quotient_lengths(m, m2)?;
    Ok(&a - &b)
}

/// Both sides of `d(M, φM) = ord(ber φ)` for `φ = diag(C₁, C₄)` over a purely
/// even base, where `ord` of a function is `(v, 0)`.
pub fn distance_vs_berezinian(
    m: &SuperLattice,
    c1: &RfMatrix,
    c4: &RfMatrix,
) -> Result<(Z2Value, Z2Value), CurveError> {
    let phi_m = m.apply_block_diagonal(c1, c4)?;
    let d = lattice_distance(m, &phi_m)?;
    let ber = determinant(c1).div(&determinant(c4))?;
    let ord = Z2Value::new(m.point.valuation(&ber), 0);
    Ok((d, ord))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t_pow(k: usize) -> RationalFunction {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        RationalFunction::from_poly(Poly::from_ints(&c))
    }

    fn at0() -> Point {
        Point::rational(0)
    }

    /// Independent route: `v(det M') − v(det M)` per block.
    fn det_oracle(m: &SuperLattice, m2: &SuperLattice) -> Z2Value {
        let v = |a: &RfMatrix| {
            if a.is_empty() {
                0
            } else {
                m.point.valuation(&determinant(a))
            }
        };
        Z2Value::new(v(&m2.even) - v(&m.even), v(&m2.odd) - v(&m.odd))
    }

    #[test]
    fn distance_examples() {
        let m = SuperLattice::standard(at0(), 1, 1);
        assert_eq!(lattice_distance(&m, &m).unwrap(), Z2Value::zero());
        let e1 = SuperLattice::standard(at0(), 1, 0);
        let e2 = SuperLattice::new(at0(), diagonal(vec![t_pow(2)]), vec![]).unwrap();
        assert_eq!(lattice_distance(&e1, &e2).unwrap(), Z2Value::new(2, 0));
        let o1 = SuperLattice::standard(at0(), 0, 1);
        let o2 = SuperLattice::new(at0(), vec![], diagonal(vec![t_pow(1)])).unwrap();
        assert_eq!(lattice_distance(&o1, &o2).unwrap(), Z2Value::new(0, 1));
        assert!(matches!(lattice_distance(&e1, &o1), Err(CurveError::RankMismatch(_))));
    }

    #[test]
    fn incomparable_lattices() {
        // M = span(1, t) diagonal vs M' = span(t, 1): both quotients nonzero, distance 0
        let a = SuperLattice::new(at0(), diagonal(vec![RationalFunction::one(), t_pow(1)]), vec![]).unwrap();
        let b = SuperLattice::new(at0(), diagonal(vec![t_pow(1), RationalFunction::one()]), vec![]).unwrap();
        let (x, y) = lattice_quotient_lengths(&a, &b).unwrap();
        assert_eq!((x, y), (Z2Value::new(1, 0), Z2Value::new(1, 0)));
        assert_eq!(lattice_distance(&a, &b).unwrap(), Z2Value::zero());
    }

    #[test]
    fn restricted_identity_and_discrepancy() {
        let m = SuperLattice::standard(at0(), 1, 1);
        let (d, ord) = distance_vs_berezinian(&m, &diagonal(vec![t_pow(3)]), &identity(1)).unwrap();
        assert_eq!(d, ord);
        let (d, ord) = distance_vs_berezinian(&m, &identity(1), &diagonal(vec![t_pow(1)])).unwrap();
        assert_eq!(d, Z2Value::new(0, 1));
        assert_eq!(ord, Z2Value::new(-1, 0));
        assert_ne!(d, ord);
        assert_eq!(d.superdimension(), ord.superdimension());
    }

    fn entry() -> impl Strategy<Value = RationalFunction> {
        prop::collection::vec(-2i64..=2, 1..3).prop_map(|c| RationalFunction::from_poly(Poly::from_ints(&c)))
    }

    fn square(n: usize) -> impl Strategy<Value = RfMatrix> {
        prop::collection::vec(prop::collection::vec(entry(), n), n)
            .prop_filter("nonsingular", |m| !determinant(m).is_zero())
    }

    proptest! {
        #[test]
        fn snf_matches_determinant_route(a in square(2), b in square(2), c in square(1), d in square(1)) {
            let m = SuperLattice::new(at0(), a, c).unwrap();
            let m2 = SuperLattice::new(at0(), b, d).unwrap();
            prop_assert_eq!(lattice_distance(&m, &m2).unwrap(), det_oracle(&m, &m2));
            prop_assert_eq!(lattice_distance(&m2, &m).unwrap(), -lattice_distance(&m, &m2).unwrap());
        }

        #[test]
        fn identity_on_restricted_class(c1 in square(2)) {
            let m = SuperLattice::standard(at0(), 2, 1);
            let (d, ord) = distance_vs_berezinian(&m, &c1, &identity(1)).unwrap();
            prop_assert_eq!(d, ord);
        }

        #[test]
        fn projected_identity_in_general(c1 in square(1), c4 in square(2)) {
            let m = SuperLattice::standard(at0(), 1, 2);
            let (d, ord) = distance_vs_berezinian(&m, &c1, &c4).unwrap();
            prop_assert_eq!(d.superdimension(), ord.superdimension());
        }
    }
}
