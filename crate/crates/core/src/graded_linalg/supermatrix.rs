//! Parity-blocked matrices over Λ and the berezinian.

use super::grassmann::{check_generator_count, GrassmannScalar, GrassmannWire};
use super::LinalgError;
use serde::{Deserialize, Serialize};

/// A square matrix of Grassmann scalars; rows and columns are indexed
/// `0..n`. Used for the even blocks `A`, `D` and for Schur complements.
pub type EvenMatrix = Vec<Vec<GrassmannScalar>>;

/// Supermatrix of rank `p|q`: `[[A, B], [C, D]]` with `A` p×p, `B` p×q,
/// `C` q×p, `D` q×q. Stored as one `(p+q)×(p+q)` array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperMatrix {
    p: usize,
    q: usize,
    k: usize,
    entries: Vec<Vec<GrassmannScalar>>,
}

impl SuperMatrix {
    /// Builds an even supermatrix; the parity of every block is checked.
    pub fn new(p: usize, q: usize, entries: Vec<Vec<GrassmannScalar>>) -> Result<Self, LinalgError> {
        let m = Self::new_unchecked(p, q, entries)?;
        m.check_even()?;
        Ok(m)
    }

    /// Builds a supermatrix without the parity check (shapes are still
    /// checked); [`Self::is_even`] reports the parity.
    pub fn new_unchecked(p: usize, q: usize, entries: Vec<Vec<GrassmannScalar>>) -> Result<Self, LinalgError> {
        let n = p + q;
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(LinalgError::RankMismatch(format!(
                "expected a {n}x{n} array for rank {p}|{q}"
            )));
        }
        let k = entries
            .first()
            .and_then(|r| r.first())
            .map(GrassmannScalar::generators)
            .unwrap_or(0);
        if entries.iter().flatten().any(|x| x.generators() != k) {
            return Err(LinalgError::GeneratorMismatch);
        }
        Ok(Self { p, q, k, entries })
    }

    pub fn identity(p: usize, q: usize, k: usize) -> Self {
        let n = p + q;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            GrassmannScalar::one(k)
                        } else {
                            GrassmannScalar::zero(k)
                        }
                    })
                    .collect()
            })
            .collect();
        Self { p, q, k, entries }
    }

    /// `diag(a, d)` with zero odd blocks.
    pub fn block_diagonal(a: EvenMatrix, d: EvenMatrix, k: usize) -> Result<Self, LinalgError> {
        let (p, q) = (a.len(), d.len());
        let mut entries = vec![vec![GrassmannScalar::zero(k); p + q]; p + q];
        for (i, row) in a.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                entries[i][j] = x;
            }
        }
        for (i, row) in d.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                entries[p + i][p + j] = x;
            }
        }
        Self::new(p, q, entries)
    }

    pub fn even_rank(&self) -> usize {
        self.p
    }

    pub fn odd_rank(&self) -> usize {
        self.q
    }

    pub fn generators(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> &GrassmannScalar {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<GrassmannScalar>] {
        &self.entries
    }

    fn is_even_position(&self, i: usize, j: usize) -> bool {
        (i < self.p) == (j < self.p)
    }

    pub fn is_even(&self) -> bool {
        self.check_even().is_ok()
    }

    fn check_even(&self) -> Result<(), LinalgError> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let ok = if self.is_even_position(i, j) {
                    x.is_even()
                } else {
                    x.is_odd()
                };
                if !ok {
                    return Err(LinalgError::OddParityViolation { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> EvenMatrix {
        rows.map(|i| self.entries[i][cols.clone()].to_vec()).collect()
    }

    pub fn a(&self) -> EvenMatrix {
        self.block(0..self.p, 0..self.p)
    }

    pub fn b(&self) -> EvenMatrix {
        self.block(0..self.p, self.p..self.p + self.q)
    }

    pub fn c(&self) -> EvenMatrix {
        self.block(self.p..self.p + self.q, 0..self.p)
    }

    pub fn d(&self) -> EvenMatrix {
        self.block(self.p..self.p + self.q, self.p..self.p + self.q)
    }

    pub fn to_wire(&self) -> SuperMatrixWire {
        let conv = |m: EvenMatrix| -> Vec<Vec<GrassmannWire>> {
            m.iter()
                .map(|r| r.iter().map(GrassmannScalar::to_wire).collect())
                .collect()
        };
        SuperMatrixWire {
            p: self.p,
            q: self.q,
            k: self.k,
            blocks: SuperBlocksWire {
                a: conv(self.a()),
                b: conv(self.b()),
                c: conv(self.c()),
                d: conv(self.d()),
            },
        }
    }

    pub fn from_wire(w: &SuperMatrixWire, cap: usize) -> Result<Self, LinalgError> {
        check_generator_count(w.k, cap)?;
        let (p, q) = (w.p, w.q);
        let n = p + q;
        let mut entries = vec![vec![GrassmannScalar::zero(w.k); n]; n];
        let blocks = [
            (&w.blocks.a, 0, 0, p, p, "A"),
            (&w.blocks.b, 0, p, p, q, "B"),
            (&w.blocks.c, p, 0, q, p, "C"),
            (&w.blocks.d, p, p, q, q, "D"),
        ];
        for (blk, r0, c0, nr, nc, name) in blocks {
            if blk.len() != nr || blk.iter().any(|r| r.len() != nc) {
                return Err(LinalgError::RankMismatch(format!(
                    "block {name} must be {nr}x{nc} for rank {p}|{q}"
                )));
            }
            for (i, row) in blk.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if x.k != w.k {
                        return Err(LinalgError::GeneratorMismatch);
                    }
                    entries[r0 + i][c0 + j] = GrassmannScalar::from_wire(x, cap)?;
                }
            }
        }
        let m = Self { p, q, k: w.k, entries };
        m.check_even()?;
        Ok(m)
    }
}

/// `{p, q, k, blocks: {a, b, c, d}}`; empty blocks are empty arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperMatrixWire {
    #[serde(with = "crate::rational::num_string")]
    pub p: usize,
    #[serde(with = "crate::rational::num_string")]
    pub q: usize,
    #[serde(with = "crate::rational::num_string")]
    pub k: usize,
    pub blocks: SuperBlocksWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperBlocksWire {
    pub a: Vec<Vec<GrassmannWire>>,
    pub b: Vec<Vec<GrassmannWire>>,
    pub c: Vec<Vec<GrassmannWire>>,
    pub d: Vec<Vec<GrassmannWire>>,
}

pub fn supermatrix_mul(m: &SuperMatrix, n: &SuperMatrix) -> Result<SuperMatrix, LinalgError> {
    if m.p != n.p || m.q != n.q {
        return Err(LinalgError::RankMismatch(format!(
            "{}|{} times {}|{}",
            m.p, m.q, n.p, n.q
        )));
    }
    if m.k != n.k {
        return Err(LinalgError::GeneratorMismatch);
    }
    let entries = matmul(&m.entries, &n.entries, m.p + m.q, m.k);
    Ok(SuperMatrix {
        p: m.p,
        q: m.q,
        k: m.k,
        entries,
    })
}

pub(crate) fn matmul(a: &[Vec<GrassmannScalar>], b: &[Vec<GrassmannScalar>], cols: usize, k: usize) -> EvenMatrix {
    let rows = a.len();
    let inner = b.len();
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(GrassmannScalar::zero(k), |acc, t| {
                        if a[i][t].is_zero() || b[t][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][t] * &b[t][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn matsub(a: &EvenMatrix, b: &EvenMatrix) -> EvenMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

/// Determinant of a square matrix of even (hence mutually commuting)
/// Grassmann scalars. Eliminates with pivots whose body is nonzero; a column
/// without such a pivot is finished by division-free cofactor expansion.
pub fn det_even(m: &EvenMatrix, k: usize) -> GrassmannScalar {
    let n = m.len();
    let mut a = m.clone();
    let mut det = GrassmannScalar::one(k);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c].invertible()) else {
            let rest: EvenMatrix = a[c..].iter().map(|r| r[c..].to_vec()).collect();
            return &det * &cofactor_det(&rest, k);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let inv = a[c][c].inverse().expect("pivot has nonzero body");
        det = &det * &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let v = &f * &a[c][j];
                a[i][j] = &a[i][j] - &v;
            }
        }
    }
    det
}

fn cofactor_det(m: &EvenMatrix, k: usize) -> GrassmannScalar {
    match m.len() {
        0 => GrassmannScalar::one(k),
        1 => m[0][0].clone(),
        n => {
            let mut acc = GrassmannScalar::zero(k);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: EvenMatrix = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &cofactor_det(&minor, k);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Inverse of a square matrix of even scalars by Gauss–Jordan with unit
/// pivots. Fails when the body of the determinant vanishes.
pub fn inverse_even(m: &EvenMatrix, k: usize) -> Result<EvenMatrix, LinalgError> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: EvenMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        GrassmannScalar::one(k)
                    } else {
                        GrassmannScalar::zero(k)
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| a[i][c].invertible())
            .ok_or(LinalgError::NotInvertible)?;
        a.swap(p, c);
        inv.swap(p, c);
        let piv = a[c][c].inverse()?;
        for j in 0..n {
            a[c][j] = &piv * &a[c][j];
            inv[c][j] = &piv * &inv[c][j];
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                let v = &f * &a[c][j];
                a[i][j] = &a[i][j] - &v;
                let w = &f * &inv[c][j];
                inv[i][j] = &inv[i][j] - &w;
            }
        }
    }
    Ok(inv)
}

/// `ber M = det(A − B D⁻¹ C) · det(D)⁻¹` for an even supermatrix.
pub fn berezinian(m: &SuperMatrix) -> Result<GrassmannScalar, LinalgError> {
    m.check_even()?;
    let k = m.k;
    let d = m.d();
    let d_inv = inverse_even(&d, k).map_err(|_| LinalgError::NonInvertibleBlock("D"))?;
    let schur = matsub(&m.a(), &matmul(&matmul(&m.b(), &d_inv, m.q, k), &m.c(), m.p, k));
    let det_schur = det_even(&schur, k);
    if !det_schur.invertible() {
        return Err(LinalgError::NonInvertibleBlock("A - B·D⁻¹·C"));
    }
    let det_d = det_even(&d, k);
    Ok(&det_schur * &det_d.inverse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn gs(k: usize, c: i64) -> GrassmannScalar {
        GrassmannScalar::constant(k, q(c))
    }

    fn e(k: usize, idx: &[usize]) -> GrassmannScalar {
        GrassmannScalar::monomial(k, idx, q(1))
    }

    /// Leibniz expansion; independent of the elimination path.
    fn leibniz(m: &EvenMatrix, k: usize) -> GrassmannScalar {
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 0 {
                return vec![(vec![], false)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(n - 1) {
                for pos in 0..n {
                    let mut v = p.clone();
                    v.insert(pos, n - 1);
                    // inserting n-1 at pos creates (n-1-pos) inversions
                    out.push((v, s ^ ((n - 1 - pos) % 2 == 1)));
                }
            }
            out
        }
        perms(m.len())
            .into_iter()
            .fold(GrassmannScalar::zero(k), |acc, (p, neg)| {
                let t = p
                    .iter()
                    .enumerate()
                    .fold(GrassmannScalar::one(k), |t, (i, &j)| &t * &m[i][j]);
                if neg {
                    &acc - &t
                } else {
                    &acc + &t
                }
            })
    }

    #[test]
    fn identity_berezinian_is_one() {
        for (p, qq) in [(0, 0), (1, 0), (0, 2), (2, 3)] {
            assert!(berezinian(&SuperMatrix::identity(p, qq, 2)).unwrap().is_one());
        }
    }

    #[test]
    fn rank_one_one_example() {
        let k = 2;
        let m = SuperMatrix::new(1, 1, vec![vec![gs(k, 1), e(k, &[1])], vec![e(k, &[2]), gs(k, 1)]]).unwrap();
        let expected = &gs(k, 1) - &e(k, &[1, 2]);
        assert_eq!(berezinian(&m).unwrap(), expected);
    }

    #[test]
    fn block_diagonal_is_det_ratio() {
        let k = 2;
        let c1 = vec![vec![&gs(k, 2) + &e(k, &[1, 2]), gs(k, 1)], vec![gs(k, 3), gs(k, 5)]];
        let c4 = vec![vec![&gs(k, 4) - &e(k, &[1, 2])]];
        let m = SuperMatrix::block_diagonal(c1.clone(), c4.clone(), k).unwrap();
        let expected = &leibniz(&c1, k) * &leibniz(&c4, k).inverse().unwrap();
        assert_eq!(berezinian(&m).unwrap(), expected);
        // 2·5 − 3 = 7 on the body
        assert_eq!(leibniz(&c1, k).body(), q(7));
    }

    #[test]
    fn product_example() {
        let k = 2;
        let m = SuperMatrix::new(1, 1, vec![vec![gs(k, 1), e(k, &[1])], vec![gs(k, 0), gs(k, 1)]]).unwrap();
        let n = SuperMatrix::new(1, 1, vec![vec![gs(k, 1), gs(k, 0)], vec![e(k, &[2]), gs(k, 1)]]).unwrap();
        let prod = supermatrix_mul(&m, &n).unwrap();
        let expected = SuperMatrix::new(
            1,
            1,
            vec![vec![&gs(k, 1) + &e(k, &[1, 2]), e(k, &[1])], vec![e(k, &[2]), gs(k, 1)]],
        )
        .unwrap();
        assert_eq!(prod, expected);
        assert_eq!(supermatrix_mul(&m, &SuperMatrix::identity(1, 1, k)).unwrap(), m);
        assert!(prod.is_even());
    }

    #[test]
    fn diagonal_products() {
        let k = 1;
        let m = SuperMatrix::block_diagonal(vec![vec![gs(k, 2)]], vec![vec![gs(k, 3)]], k).unwrap();
        let n = SuperMatrix::block_diagonal(vec![vec![gs(k, 5)]], vec![vec![gs(k, 7)]], k).unwrap();
        let expected = SuperMatrix::block_diagonal(vec![vec![gs(k, 10)]], vec![vec![gs(k, 21)]], k).unwrap();
        assert_eq!(supermatrix_mul(&m, &n).unwrap(), expected);
    }

    #[test]
    fn errors() {
        let k = 2;
        let odd_in_a = SuperMatrix::new(1, 0, vec![vec![e(k, &[1])]]);
        assert!(matches!(odd_in_a, Err(LinalgError::OddParityViolation { .. })));
        let singular_d = SuperMatrix::block_diagonal(vec![vec![gs(k, 1)]], vec![vec![e(k, &[1, 2])]], k).unwrap();
        assert!(matches!(
            berezinian(&singular_d),
            Err(LinalgError::NonInvertibleBlock("D"))
        ));
        let singular_a = SuperMatrix::block_diagonal(vec![vec![gs(k, 0)]], vec![vec![gs(k, 1)]], k).unwrap();
        assert!(matches!(
            berezinian(&singular_a),
            Err(LinalgError::NonInvertibleBlock(_))
        ));
        let m = SuperMatrix::identity(1, 1, k);
        let n = SuperMatrix::identity(2, 1, k);
        assert!(matches!(supermatrix_mul(&m, &n), Err(LinalgError::RankMismatch(_))));
    }

    #[test]
    fn purely_even_berezinian_is_determinant() {
        let k = 3;
        let a = vec![
            vec![&gs(k, 1) + &e(k, &[1, 3]), gs(k, 2), gs(k, 0)],
            vec![e(k, &[2, 3]), gs(k, 0), gs(k, 1)],
            vec![gs(k, 4), gs(k, 1), &gs(k, 2) - &e(k, &[1, 2])],
        ];
        let m = SuperMatrix::new(3, 0, a.clone()).unwrap();
        assert_eq!(berezinian(&m).unwrap(), leibniz(&a, k));
    }

    #[test]
    fn det_even_handles_nilpotent_pivots() {
        let k = 4;
        // body of the determinant is zero; the value is nilpotent but nonzero
        let a = vec![vec![e(k, &[1, 2]), gs(k, 1)], vec![gs(k, 0), e(k, &[3, 4])]];
        assert_eq!(det_even(&a, k), leibniz(&a, k));
        assert_eq!(det_even(&a, k), e(k, &[1, 2, 3, 4]));
    }

    #[test]
    fn wire_roundtrip() {
        let k = 2;
        let m = SuperMatrix::new(1, 1, vec![vec![gs(k, 1), e(k, &[1])], vec![e(k, &[2]), gs(k, 1)]]).unwrap();
        let json = serde_json::to_string(&m.to_wire()).unwrap();
        let back: SuperMatrixWire = serde_json::from_str(&json).unwrap();
        assert_eq!(SuperMatrix::from_wire(&back, 8).unwrap(), m);
    }
}
