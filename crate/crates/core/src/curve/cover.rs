//! Finite covers `t = h(s)` of the line by the line, norms (berezinians of
//! multiplication on the even basis `1, s, …, s^{n−1}`), images of points and
//! fibers.

use super::{poly_from_json, CurveError, Point, SuperCurveModel};
use crate::curve::lattice::{determinant, RfMatrix};
use crate::poly::{factor, Poly, RationalFunction};
use crate::rational::Q;
use crate::z2::Z2Value;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Cover of the `t`-line by the `s`-line with `t = h(s)`, `h` monic of degree
/// `n ≥ 1`. The certificate is the claimed even basis size, which must equal
/// `n`. The odd generator of the target pulls back to the odd generator of
/// the source, so the source is free of rank `n|0` over the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverData {
    h: Poly,
}

impl CoverData {
    pub fn new(h: Poly, even_basis_size: usize) -> Result<Self, CurveError> {
        if h.is_zero() || h.deg() == 0 {
            return Err(CurveError::NoEvenBasis("h must have positive degree".into()));
        }
        if !h.is_monic() {
            return Err(CurveError::NoEvenBasis(format!(
                "{} is not monic, so powers of s do not form a basis",
                h.display("s")
            )));
        }
        if even_basis_size != h.deg() {
            return Err(CurveError::NoEvenBasis(format!(
                "certificate lists {even_basis_size} basis elements, the cover has degree {}",
                h.deg()
            )));
        }
        Ok(Self { h })
    }

    /// `t = s²`.
    pub fn double_cover() -> Self {
        Self {
            h: Poly::from_ints(&[0, 0, 1]),
        }
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn degree(&self) -> usize {
        self.h.deg()
    }

    /// `s^n ≡ t − (h(s) − s^n)`; elements are coefficient vectors over Q[t]
    /// in the basis `1, …, s^{n−1}`.
    fn reduce(&self, p: &Poly) -> Vec<Poly> {
        let n = self.degree();
        let mut coeffs: Vec<Poly> = p.coeffs().iter().map(|c| Poly::constant(c.clone())).collect();
        let t = Poly::x();
        while coeffs.len() > n {
            let top = coeffs.pop().expect("nonempty");
            let k = coeffs.len() - n;
            // top·s^{k+n} = top·s^k·(t − Σ_{j<n} h_j s^j)
            coeffs[k] = &coeffs[k] + &(&top * &t);
            for j in 0..n {
                let hj = self.h.coeff(j);
                if !hj.is_zero() {
                    coeffs[k + j] = &coeffs[k + j] - &top.scale(&hj);
                }
            }
        }
        coeffs.resize(n, Poly::zero());
        coeffs
    }

    /// Matrix of multiplication by `p(s)` on the even basis.
    pub fn multiplication_matrix(&self, p: &Poly) -> Vec<Vec<Poly>> {
        let n = self.degree();
        let cols: Vec<Vec<Poly>> = (0..n)
            .map(|j| {
                let mut sj = vec![Q::zero(); j + 1];
                sj[j] = Q::one();
                self.reduce(&(&Poly::new(sj) * p))
            })
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// `det` of multiplication by `p(s)`: a polynomial in `t`.
    pub fn norm(&self, p: &Poly) -> Poly {
        let m: RfMatrix = self
            .multiplication_matrix(p)
            .into_iter()
            .map(|r| r.into_iter().map(RationalFunction::from_poly).collect())
            .collect();
        let d = determinant(&m);
        debug_assert!(d.den().is_constant());
        d.num().clone()
    }

    /// Image point and residue degree `[κ(x):κ(y)]`.
    pub fn image(&self, x: &Point) -> Result<(Point, usize), CurveError> {
        match x {
            Point::Infinity => Ok((Point::Infinity, 1)),
            Point::Finite(p) => {
                let f = factor(&self.norm(p))?;
                match f.as_slice() {
                    [(q, _)] => Ok((Point::Finite(q.clone()), p.deg() / q.deg())),
                    _ => Err(CurveError::InvalidPoint(format!(
                        "norm of {} is not a prime power",
                        p.display("s")
                    ))),
                }
            }
        }
    }

    /// Points over `y` with ramification index and residue degree.
    pub fn fiber(&self, y: &Point) -> Result<Vec<FiberPoint>, CurveError> {
        match y {
            Point::Infinity => Ok(vec![FiberPoint {
                point: Point::Infinity,
                ramification: self.degree() as u32,
                residue_degree: 1,
            }]),
            Point::Finite(q) => {
                let pulled = q.compose(&self.h);
                Ok(factor(&pulled)?
                    .into_iter()
                    .map(|(p, e)| FiberPoint {
                        residue_degree: p.deg() / q.deg(),
                        point: Point::Finite(p),
                        ramification: e,
                    })
                    .collect())
            }
        }
    }

    pub fn from_wire(w: &CoverWire) -> Result<Self, CurveError> {
        let h = poly_from_json(&w.h)?;
        let n = w.even_basis.unwrap_or_else(|| h.deg());
        Self::new(h, n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPoint {
    pub point: Point,
    pub ramification: u32,
    pub residue_degree: usize,
}

/// `{h: [coeffs], even_basis?: n}`; `even_basis` defaults to `deg h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverWire {
    pub h: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub even_basis: Option<usize>,
}

/// `g = even + θ·odd` on the source; only even functions have a norm here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperRationalFunction {
    pub even: RationalFunction,
    pub odd: RationalFunction,
}

impl From<RationalFunction> for SuperRationalFunction {
    fn from(even: RationalFunction) -> Self {
        Self {
            even,
            odd: RationalFunction::zero(),
        }
    }
}

/// Berezinian of multiplication by `g` on the free even basis, a rational
/// function of `t`.
pub fn ber_of_multiplication(cover: &CoverData, g: &SuperRationalFunction) -> Result<RationalFunction, CurveError> {
    if !g.odd.is_zero() {
        return Err(CurveError::NotEven);
    }
    if g.even.is_zero() {
        return Err(CurveError::ZeroFunction);
    }
    Ok(RationalFunction::new(
        cover.norm(g.even.num()),
        cover.norm(g.even.den()),
    )?)
}

/// Both sides of `ord_y(ber g) = Σ_x [κ(x):κ(y)]·ord_x(g)` over the fiber of
/// `y`, on models with `L = O`.
pub fn fiber_order_identity(
    cover: &CoverData,
    g: &RationalFunction,
    y: &Point,
) -> Result<(Z2Value, Z2Value), CurveError> {
    let source = SuperCurveModel::free(super::Base::P1);
    let target = SuperCurveModel::free(super::Base::P1);
    let lhs = target.ord_at(y, &ber_of_multiplication(cover, &g.clone().into())?)?;
    let mut rhs = Z2Value::zero();
    for fp in cover.fiber(y)? {
        rhs += &source.ord_at(&fp.point, g)?.scale(&(fp.residue_degree as i64).into());
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    /// For `t = s²`, `g = u(t) + s·v(t)` has norm `u² − t·v²`.
    fn double_cover_oracle(p: &Poly) -> Poly {
        let (u, v) = p.even_odd_split();
        &(&u * &u) - &(&Poly::x() * &(&v * &v))
    }

    #[test]
    fn double_cover_examples() {
        let c = CoverData::double_cover();
        assert_eq!(
            ber_of_multiplication(&c, &RationalFunction::one().into()).unwrap(),
            RationalFunction::one()
        );
        assert_eq!(
            ber_of_multiplication(&c, &rf(&[0, 1], &[1]).into()).unwrap(),
            rf(&[0, -1], &[1])
        );
        assert_eq!(
            ber_of_multiplication(&c, &rf(&[-1, 1], &[1]).into()).unwrap(),
            rf(&[1, -1], &[1])
        );
        let m = c.multiplication_matrix(&Poly::x());
        assert_eq!(m, vec![vec![Poly::zero(), Poly::x()], vec![Poly::one(), Poly::zero()]]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            CoverData::new(Poly::from_ints(&[0, 0, 2]), 2),
            Err(CurveError::NoEvenBasis(_))
        ));
        assert!(matches!(
            CoverData::new(Poly::from_ints(&[0, 0, 1]), 3),
            Err(CurveError::NoEvenBasis(_))
        ));
        assert!(matches!(
            CoverData::new(Poly::from_ints(&[5]), 0),
            Err(CurveError::NoEvenBasis(_))
        ));
        let g = SuperRationalFunction {
            even: RationalFunction::one(),
            odd: RationalFunction::one(),
        };
        assert_eq!(
            ber_of_multiplication(&CoverData::double_cover(), &g),
            Err(CurveError::NotEven)
        );
    }

    #[test]
    fn images_and_fibers() {
        let c = CoverData::double_cover();
        assert_eq!(c.image(&Point::rational(2)).unwrap(), (Point::rational(4), 1));
        assert_eq!(c.image(&Point::rational(0)).unwrap(), (Point::rational(0), 1));
        // s² + 1 maps to t + 1 with degree 2
        let p = Point::finite(Poly::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(c.image(&p).unwrap(), (Point::rational(-1), 2));
        // s² − 2 maps to t − 2 with degree 2
        let p = Point::finite(Poly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(c.image(&p).unwrap(), (Point::rational(2), 2));
        // over t = 1: s = ±1, unramified
        let f = c.fiber(&Point::rational(1)).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|x| x.ramification == 1 && x.residue_degree == 1));
        // over t = 0: s = 0 with e = 2
        let f = c.fiber(&Point::rational(0)).unwrap();
        assert_eq!(
            f,
            vec![FiberPoint {
                point: Point::rational(0),
                ramification: 2,
                residue_degree: 1
            }]
        );
        // over t = 2: s² − 2 irreducible, f = 2
        let f = c.fiber(&Point::rational(2)).unwrap();
        assert_eq!(f[0].residue_degree, 2);
        for fp in c.fiber(&Point::rational(3)).unwrap() {
            assert_eq!(c.image(&fp.point).unwrap().0, Point::rational(3));
        }
    }

    #[test]
    fn cubic_cover_norm() {
        // t = s³ − s; norm of s is det of multiplication, equals t up to sign
        let c = CoverData::new(Poly::from_ints(&[0, -1, 0, 1]), 3).unwrap();
        assert_eq!(c.norm(&Poly::x()), Poly::x());
        assert_eq!(c.norm(&Poly::constant(q(2))), Poly::constant(q(8)));
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-3i64..=3, 1..5).prop_map(|c| Poly::from_ints(&c))
    }

    proptest! {
        #[test]
        fn norm_matches_closed_form(p in small_poly()) {
            let c = CoverData::double_cover();
            prop_assert_eq!(c.norm(&p), double_cover_oracle(&p));
        }

        #[test]
        fn norm_is_multiplicative(a in small_poly(), b in small_poly()) {
            let c = CoverData::new(Poly::from_ints(&[1, 0, 2, 1]), 3).unwrap();
            prop_assert_eq!(c.norm(&(&a * &b)), &c.norm(&a) * &c.norm(&b));
        }

        #[test]
        fn fiber_orders(n in small_poly(), d in small_poly(), y in -3i64..=3, at_inf: bool) {
            prop_assume!(!n.is_zero() && !d.is_zero());
            let g = RationalFunction::new(n, d).unwrap();
            let y = if at_inf { Point::Infinity } else { Point::rational(y) };
            let (lhs, rhs) = fiber_order_identity(&CoverData::double_cover(), &g, &y).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
