//! Truncated de Rham complexes of `Q[t₁..t_m]⟨θ₁..θ_n⟩` and their cohomology
//! by exact rank computations.
//!
//! Generators: `t` even, `θ` odd, `dt` odd, `dθ` even. A monomial is stored
//! in the normal order `t^a θ^S dt^T dθ^b`. The differential is the odd
//! derivation with `d(t) = dt`, `d(θ) = dθ`, `d(ab) = da·b + (−1)^{|a|} a·db`.
//! Every generator has weight one and `d` preserves weight, so the complex
//! splits into finite-dimensional weight pieces.

use super::CohomologyError;
use crate::linalg::QMatrix;
use crate::par::{self, Execution};
use crate::rational::q;
use serde::Serialize;
use std::collections::HashMap;

pub const MAX_KOSZUL_VARS: usize = 3;
pub const MAX_KOSZUL_WEIGHT: usize = 8;
pub const MAX_EVEN_VARS: usize = 2;
pub const MAX_ODD_VARS: usize = 2;
pub const MAX_CUTOFF: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Monomial {
    t: Vec<u32>,
    theta: u32,
    dt: u32,
    dtheta: Vec<u32>,
}

impl Monomial {
    #[cfg(test)]
    fn weight(&self) -> usize {
        (self.t.iter().sum::<u32>() + self.theta.count_ones() + self.dt.count_ones() + self.dtheta.iter().sum::<u32>())
            as usize
    }

    #[cfg(test)]
    fn form_degree(&self) -> usize {
        (self.dt.count_ones() + self.dtheta.iter().sum::<u32>()) as usize
    }

    fn differential(&self) -> Vec<(Monomial, i64)> {
        let mut out = Vec::new();
        let s_len = self.theta.count_ones();
        // d(t^a) θ^S dt^T dθ^b, with dt_i moved past θ^S and into dt^T
        for i in 0..self.t.len() {
            let a = self.t[i];
            if a == 0 || self.dt >> i & 1 == 1 {
                continue;
            }
            let mut m = self.clone();
            m.t[i] -= 1;
            m.dt |= 1 << i;
            let before = (self.dt & ((1u32 << i) - 1)).count_ones();
            let sign = if (s_len + before).is_multiple_of(2) { 1 } else { -1 };
            out.push((m, sign * a as i64));
        }
        // t^a d(θ^S) dt^T dθ^b; dθ is even so it moves freely
        let mut pos = 0;
        for j in 0..self.dtheta.len() {
            if self.theta >> j & 1 == 0 {
                continue;
            }
            let mut m = self.clone();
            m.theta &= !(1 << j);
            m.dtheta[j] += 1;
            out.push((m, if pos % 2 == 0 { 1 } else { -1 }));
            pos += 1;
        }
        out
    }
}

fn compositions(vars: usize, total: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(vars - 1, total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Monomials of exact weight `w` and form degree `p`.
fn basis(m: usize, n: usize, w: usize, p: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for dt in 0u32..(1 << m) {
        let k = dt.count_ones() as usize;
        if k > p {
            continue;
        }
        let db_total = p - k;
        for theta in 0u32..(1 << n) {
            let used = k + db_total + theta.count_ones() as usize;
            if used > w {
                continue;
            }
            for t in compositions(m, (w - used) as u32) {
                for dtheta in compositions(n, db_total as u32) {
                    out.push(Monomial {
                        t: t.clone(),
                        theta,
                        dt,
                        dtheta,
                    });
                }
            }
        }
    }
    out.sort();
    out
}

fn differential_matrix(src: &[Monomial], dst: &[Monomial]) -> QMatrix {
    let index: HashMap<&Monomial, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = QMatrix::zeros(dst.len(), src.len());
    for (j, mono) in src.iter().enumerate() {
        for (img, c) in mono.differential() {
            let i = index[&img];
            mat[(i, j)] += q(c);
        }
    }
    mat
}

/// `rank(d: Ω^p → Ω^{p+1})` restricted to weight `w`.
fn rank_at(m: usize, n: usize, w: usize, p: usize) -> usize {
    let src = basis(m, n, w, p);
    if src.is_empty() {
        return 0;
    }
    let dst = basis(m, n, w, p + 1);
    differential_matrix(&src, &dst).rank()
}

/// Cohomology dimensions `H^0..=H^{pmax}` of the sum of weight pieces in
/// `weights`.
fn cohomology(
    m: usize,
    n: usize,
    weights: std::ops::RangeInclusive<usize>,
    pmax: usize,
    exec: Execution,
) -> Vec<usize> {
    let jobs: Vec<(usize, usize)> = weights.flat_map(|w| (0..=pmax).map(move |p| (w, p))).collect();
    let data = par::map(&jobs, exec, |&(w, p)| (basis(m, n, w, p).len(), rank_at(m, n, w, p)));
    let mut dims = vec![0usize; pmax + 1];
    let mut ranks = vec![0usize; pmax + 1];
    for (&(_, p), (dim, rank)) in jobs.iter().zip(data) {
        dims[p] += dim;
        ranks[p] += rank;
    }
    (0..=pmax)
        .map(|p| dims[p] - ranks[p] - if p > 0 { ranks[p - 1] } else { 0 })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulVerdict {
    pub n: usize,
    pub wmax: usize,
    /// `dim H^p` for `p = 0..=wmax`.
    pub cohomology: Vec<usize>,
    pub acyclic: bool,
}

/// `Q⟨θ₁..θ_n⟩ ⊗ Sym⟨dθ₁..dθ_n⟩` in form degrees `0..=wmax`: expects
/// `H⁰ = Q` and nothing else.
pub fn koszul_acyclicity(n: usize, wmax: usize, exec: Execution) -> Result<KoszulVerdict, CohomologyError> {
    if n == 0 || n > MAX_KOSZUL_VARS || wmax > MAX_KOSZUL_WEIGHT {
        return Err(CohomologyError::CutoffTooLarge(format!(
            "koszul needs 1 ≤ n ≤ {MAX_KOSZUL_VARS} and wmax ≤ {MAX_KOSZUL_WEIGHT}, got n = {n}, wmax = {wmax}"
        )));
    }
    // every monomial of form degree ≤ wmax + 1 has weight ≤ wmax + 1 + n
    let h = cohomology(0, n, 0..=wmax + 1 + n, wmax, exec);
    let acyclic = h[0] == 1 && h[1..].iter().all(|&x| x == 0);
    Ok(KoszulVerdict {
        n,
        wmax,
        cohomology: h,
        acyclic,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoincareVerdict {
    pub m: usize,
    pub n: usize,
    pub cutoff: usize,
    pub super_cohomology: Vec<usize>,
    pub even_cohomology: Vec<usize>,
    pub equal: bool,
}

/// Truncated (total weight ≤ cutoff) de Rham cohomology of the affine
/// superspace `A^{m|n}` against that of `A^m`.
pub fn affine_super_poincare(
    m: usize,
    n: usize,
    cutoff: usize,
    exec: Execution,
) -> Result<PoincareVerdict, CohomologyError> {
    if m > MAX_EVEN_VARS || n > MAX_ODD_VARS || cutoff > MAX_CUTOFF {
        return Err(CohomologyError::CutoffTooLarge(format!(
            "poincare needs m ≤ {MAX_EVEN_VARS}, n ≤ {MAX_ODD_VARS}, cutoff ≤ {MAX_CUTOFF}, got {m}, {n}, {cutoff}"
        )));
    }
    let sup = cohomology(m, n, 0..=cutoff, cutoff, exec);
    let even = cohomology(m, 0, 0..=cutoff, cutoff, exec);
    Ok(PoincareVerdict {
        m,
        n,
        cutoff,
        equal: sup == even,
        super_cohomology: sup,
        even_cohomology: even,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn apply_d(v: &BTreeMap<Monomial, i64>) -> BTreeMap<Monomial, i64> {
        let mut out = BTreeMap::new();
        for (m, c) in v {
            for (img, s) in m.differential() {
                *out.entry(img).or_insert(0) += c * s;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    #[test]
    fn d_squares_to_zero() {
        for (m, n) in [(0, 3), (1, 1), (2, 2), (1, 2)] {
            for w in 0..=4 {
                for p in 0..=w {
                    for mono in basis(m, n, w, p) {
                        let dd = apply_d(&apply_d(&BTreeMap::from([(mono.clone(), 1)])));
                        assert!(dd.is_empty(), "d² ≠ 0 on {mono:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn weight_and_degree_are_respected() {
        for mono in basis(2, 2, 4, 2) {
            assert_eq!((mono.weight(), mono.form_degree()), (4, 2));
            for (img, _) in mono.differential() {
                assert_eq!((img.weight(), img.form_degree()), (4, 3));
            }
        }
    }

    #[test]
    fn koszul_examples() {
        for (n, w) in [(1, 4), (2, 4), (3, 3)] {
            let v = koszul_acyclicity(n, w, Execution::Sequential).unwrap();
            assert!(v.acyclic, "{v:?}");
            assert_eq!(v.cohomology.len(), w + 1);
        }
        assert!(koszul_acyclicity(4, 1, Execution::Sequential).is_err());
        assert!(koszul_acyclicity(1, 9, Execution::Sequential).is_err());
    }

    #[test]
    fn poincare_examples() {
        let v = affine_super_poincare(1, 1, 4, Execution::Sequential).unwrap();
        assert!(v.equal);
        assert_eq!(v.super_cohomology, vec![1, 0, 0, 0, 0]);
        let k = koszul_acyclicity(1, 4, Execution::Sequential).unwrap();
        let z = affine_super_poincare(0, 1, 4, Execution::Sequential).unwrap();
        assert_eq!(z.super_cohomology, k.cohomology);
        assert!(affine_super_poincare(2, 1, 5, Execution::Parallel).unwrap().equal);
        assert!(affine_super_poincare(3, 0, 1, Execution::Sequential).is_err());
    }

    #[test]
    fn d_of_theta() {
        let theta = Monomial {
            t: vec![],
            theta: 1,
            dt: 0,
            dtheta: vec![0],
        };
        assert_eq!(
            theta.differential(),
            vec![(
                Monomial {
                    t: vec![],
                    theta: 0,
                    dt: 0,
                    dtheta: vec![1]
                },
                1
            )]
        );
    }
}
