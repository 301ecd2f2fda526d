//! Finite-dimensional supercommutative algebras given by structure constants,
//! their graded modules, and super lengths computed from the radical
//! filtration.
//!
//! Elements are coordinate vectors in the chosen homogeneous basis. Products
//! of basis vectors are stored densely: `mult[i][j]` holds the coordinates of
//! `e_i · e_j`.

use crate::graded_linalg::Parity;
use crate::linalg::{unit, QMatrix, Subspace};
use crate::poly::{factor, Poly};
use crate::rational::{format_rational, parse_rational, q, Q};
use crate::z2::Z2Value;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArtinError {
    #[error("not a supercommutative algebra: {0}")]
    NotAnAlgebra(String),
    #[error("not a graded module: {0}")]
    NotAModule(String),
    #[error("algebra is not local with residue field Q: {0}")]
    NotLocal(String),
    #[error("not an algebra morphism: {0}")]
    NotAMorphism(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

fn sign(p: Parity, r: Parity) -> bool {
    p == Parity::Odd && r == Parity::Odd
}

fn add_parity(a: Parity, b: Parity) -> Parity {
    if a == b {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn axpy(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn is_homogeneous(v: &[Q], parities: &[Parity]) -> Option<Parity> {
    let mut seen = None;
    for (x, &p) in v.iter().zip(parities) {
        if x.is_zero() {
            continue;
        }
        match seen {
            None => seen = Some(p),
            Some(s) if s != p => return None,
            _ => {}
        }
    }
    Some(seen.unwrap_or(Parity::Even))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSuperAlgebra {
    names: Vec<String>,
    parities: Vec<Parity>,
    mult: Vec<Vec<Vec<Q>>>,
    unit: Vec<Q>,
}

impl FiniteSuperAlgebra {
    /// Validates parity homogeneity, the unit, associativity and
    /// supercommutativity on all basis pairs and triples.
    pub fn new(
        names: Vec<String>,
        parities: Vec<Parity>,
        mult: Vec<Vec<Vec<Q>>>,
        unit: Vec<Q>,
    ) -> Result<Self, ArtinError> {
        let n = names.len();
        let bad = |m: String| Err(ArtinError::NotAnAlgebra(m));
        if parities.len() != n || unit.len() != n || mult.len() != n {
            return bad("dimension mismatch".into());
        }
        if mult.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return bad("structure constant table has the wrong shape".into());
        }
        let a = Self {
            names,
            parities,
            mult,
            unit,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<(), ArtinError> {
        let n = self.dim();
        let bad = |m: String| Err(ArtinError::NotAnAlgebra(m));
        if is_homogeneous(&self.unit, &self.parities) != Some(Parity::Even) || is_zero_vec(&self.unit) {
            return bad("unit must be a nonzero even element".into());
        }
        for i in 0..n {
            for j in 0..n {
                let prod = &self.mult[i][j];
                let want = add_parity(self.parities[i], self.parities[j]);
                for (k, c) in prod.iter().enumerate() {
                    if !c.is_zero() && self.parities[k] != want {
                        return bad(format!(
                            "{}·{} has a component along {} of the wrong parity",
                            self.names[i], self.names[j], self.names[k]
                        ));
                    }
                }
                let other = &self.mult[j][i];
                let s = sign(self.parities[i], self.parities[j]);
                let ok = prod
                    .iter()
                    .zip(other)
                    .all(|(x, y)| if s { *x == -y.clone() } else { x == y });
                if !ok {
                    return bad(format!(
                        "{}·{} violates supercommutativity",
                        self.names[i], self.names[j]
                    ));
                }
            }
        }
        for i in 0..n {
            let e = unit(n, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return bad(format!("unit does not act trivially on {}", self.names[i]));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul(&self.mult[i][j], &unit(n, k));
                    let right = self.mul(&unit(n, i), &self.mult[j][k]);
                    if left != right {
                        return bad(format!(
                            "({}·{})·{} ≠ {}·({}·{})",
                            self.names[i], self.names[j], self.names[k], self.names[i], self.names[j], self.names[k]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn unit_vector(&self) -> &[Q] {
        &self.unit
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[Q] {
        &self.mult[i][j]
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                axpy(&mut out, &(a * b), &self.mult[i][j]);
            }
        }
        out
    }

    /// Matrix of `y ↦ x·y` (columns are images of basis vectors).
    pub fn left_multiplication(&self, x: &[Q]) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.mul(x, &unit(n, j));
            for i in 0..n {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    fn from_table(names: Vec<String>, parities: Vec<Parity>, f: impl Fn(usize, usize) -> Vec<Q>) -> Self {
        let n = names.len();
        let mult = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        let a = Self {
            names,
            parities,
            mult,
            unit: unit(n, 0),
        };
        debug_assert!(a.validate().is_ok());
        a
    }

    /// The ground field Q.
    pub fn field() -> Self {
        Self::from_table(vec!["1".into()], vec![Parity::Even], |_, _| vec![Q::one()])
    }

    /// `Q[x]/(x^e)` with `x` even; basis `1, x, …, x^{e−1}`.
    pub fn truncated_polynomial(var: &str, e: usize) -> Self {
        assert!(e >= 1);
        let names = (0..e)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        Self::from_table(names, vec![Parity::Even; e], |i, j| {
            if i + j < e {
                unit(e, i + j)
            } else {
                vec![Q::zero(); e]
            }
        })
    }

    /// Exterior algebra `Q⟨θ₁, …, θ_n⟩` on odd generators, basis indexed by
    /// subsets (bitmask order).
    pub fn exterior(var: &str, n: usize) -> Self {
        let dim = 1usize << n;
        let names = (0..dim)
            .map(|m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    (0..n)
                        .filter(|b| m >> b & 1 == 1)
                        .map(|b| {
                            if n == 1 {
                                var.to_string()
                            } else {
                                format!("{var}{}", b + 1)
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("")
                }
            })
            .collect();
        let parities = (0..dim).map(|m: usize| Parity::of_mask(m as u32)).collect();
        Self::from_table(names, parities, |a, b| {
            let mut v = vec![Q::zero(); dim];
            if a & b == 0 {
                let swaps: u32 = (0..n)
                    .filter(|j| b >> j & 1 == 1)
                    .map(|j| (a >> (j + 1)).count_ones())
                    .sum();
                v[a | b] = if swaps.is_multiple_of(2) { Q::one() } else { -Q::one() };
            }
            v
        })
    }

    /// Graded tensor product with `(a⊗c)(a'⊗c') = (−1)^{|c||a'|} aa'⊗cc'`.
    /// Basis `a_i ⊗ c_j` at index `i·dim(C) + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (na, nc) = (self.dim(), other.dim());
        let n = na * nc;
        let mut names = Vec::with_capacity(n);
        let mut parities = Vec::with_capacity(n);
        for i in 0..na {
            for j in 0..nc {
                let name = match (self.names[i].as_str(), other.names[j].as_str()) {
                    ("1", "1") => "1".to_string(),
                    ("1", c) => c.to_string(),
                    (a, "1") => a.to_string(),
                    (a, c) => format!("{a}{c}"),
                };
                names.push(name);
                parities.push(add_parity(self.parities[i], other.parities[j]));
            }
        }
        let mut mult = vec![vec![vec![Q::zero(); n]; n]; n];
        for i in 0..na {
            for j in 0..nc {
                for i2 in 0..na {
                    for j2 in 0..nc {
                        let s = if sign(other.parities[j], self.parities[i2]) {
                            -Q::one()
                        } else {
                            Q::one()
                        };
                        let out = &mut mult[i * nc + j][i2 * nc + j2];
                        for (k, x) in self.mult[i][i2].iter().enumerate() {
                            if x.is_zero() {
                                continue;
                            }
                            for (l, y) in other.mult[j][j2].iter().enumerate() {
                                if !y.is_zero() {
                                    out[k * nc + l] += &s * x * y;
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut unit_v = vec![Q::zero(); n];
        for (i, x) in self.unit.iter().enumerate() {
            for (j, y) in other.unit.iter().enumerate() {
                unit_v[i * nc + j] = x * y;
            }
        }
        Self {
            names,
            parities,
            mult,
            unit: unit_v,
        }
    }

    fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parities[i] == Parity::Even).collect()
    }

    fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parities[i] == Parity::Odd).collect()
    }

    pub fn to_wire(&self) -> AlgebraWire {
        let mut mult = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        mult.push((
                            self.names[i].clone(),
                            self.names[j].clone(),
                            self.names[k].clone(),
                            format_rational(c),
                        ));
                    }
                }
            }
        }
        AlgebraWire {
            basis: self
                .names
                .iter()
                .zip(&self.parities)
                .map(|(n, p)| (n.clone(), parity_name(*p)))
                .collect(),
            mult,
            unit: Some(
                self.unit
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (self.names[i].clone(), format_rational(c)))
                    .collect(),
            ),
        }
    }

    pub fn from_wire(w: &AlgebraWire) -> Result<Self, ArtinError> {
        let (names, parities) = parse_basis(&w.basis)?;
        let n = names.len();
        let idx = index_map(&names)?;
        let mut mult = vec![vec![vec![Q::zero(); n]; n]; n];
        for (a, b, c, x) in &w.mult {
            let (i, j, k) = (lookup(&idx, a)?, lookup(&idx, b)?, lookup(&idx, c)?);
            mult[i][j][k] += parse_q(x)?;
        }
        let unit_v = match &w.unit {
            None => {
                if n == 0 {
                    return Err(ArtinError::Malformed("empty basis".into()));
                }
                unit(n, 0)
            }
            Some(terms) => {
                let mut u = vec![Q::zero(); n];
                for (name, c) in terms {
                    u[lookup(&idx, name)?] += parse_q(c)?;
                }
                u
            }
        };
        Self::new(names, parities, mult, unit_v)
    }
}

fn parity_name(p: Parity) -> String {
    match p {
        Parity::Even => "even".into(),
        Parity::Odd => "odd".into(),
    }
}

fn parse_basis(basis: &[(String, String)]) -> Result<(Vec<String>, Vec<Parity>), ArtinError> {
    let mut names = Vec::new();
    let mut parities = Vec::new();
    for (n, p) in basis {
        names.push(n.clone());
        parities.push(match p.as_str() {
            "even" | "0" => Parity::Even,
            "odd" | "1" => Parity::Odd,
            other => return Err(ArtinError::Malformed(format!("parity {other:?}"))),
        });
    }
    Ok((names, parities))
}

fn index_map(names: &[String]) -> Result<HashMap<String, usize>, ArtinError> {
    let mut m = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if m.insert(n.clone(), i).is_some() {
            return Err(ArtinError::Malformed(format!("duplicate basis name {n:?}")));
        }
    }
    Ok(m)
}

fn lookup(idx: &HashMap<String, usize>, name: &str) -> Result<usize, ArtinError> {
    idx.get(name)
        .copied()
        .ok_or_else(|| ArtinError::Malformed(format!("unknown basis element {name:?}")))
}

fn idx_of(idx: &HashMap<String, usize>, name: &str) -> Option<usize> {
    idx.get(name).copied()
}

fn parse_q(s: &str) -> Result<Q, ArtinError> {
    parse_rational(s).map_err(|e| ArtinError::Malformed(e.to_string()))
}

/// `{basis: [[name, "even"|"odd"]…], mult: [[left, right, result, coeff]…], unit?: [[name, coeff]…]}`.
/// Without `unit`, the first basis element is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraWire {
    pub basis: Vec<(String, String)>,
    pub mult: Vec<(String, String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<(String, String)>>,
}

/// `{basis: [[name, parity]…], action: [[algebra_elem, module_elem, result, coeff]…]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleWire {
    pub basis: Vec<(String, String)>,
    pub action: Vec<(String, String, String, String)>,
}

/// The radical as a graded subspace of the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radical {
    pub even: Subspace,
    pub odd: Subspace,
}

impl Radical {
    pub fn space(&self) -> Subspace {
        self.even.sum(&self.odd)
    }

    pub fn dim(&self) -> usize {
        self.even.dim() + self.odd.dim()
    }

    /// Homogeneous spanning vectors, even ones first.
    pub fn generators(&self) -> Vec<Vec<Q>> {
        self.even.basis().iter().chain(self.odd.basis()).cloned().collect()
    }
}

/// Largest graded nilpotent ideal: all odd directions plus the preimage of
/// the nilradical of the commutative quotient `A₀ / A₁A₁`. The nilradical of
/// that quotient is the kernel of its trace form (characteristic zero).
pub fn radical(a: &FiniteSuperAlgebra) -> Radical {
    let n = a.dim();
    let odd = a.odd_indices();
    let even = a.even_indices();
    let odd_space = Subspace::span(n, odd.iter().map(|&i| unit(n, i)));
    let j0 = Subspace::span(
        n,
        odd.iter()
            .flat_map(|&i| odd.iter().map(move |&j| (i, j)))
            .map(|(i, j)| a.mult[i][j].clone()),
    );
    let reps: Vec<usize> = j0.quotient_coords().into_iter().filter(|c| even.contains(c)).collect();
    let all_coords = j0.quotient_coords();
    let pos_of = |c: usize| all_coords.iter().position(|&x| x == c).expect("quotient coordinate");
    let r = reps.len();
    let mut trace_form = QMatrix::zeros(r, r);
    for (ai, &ea) in reps.iter().enumerate() {
        for (bi, &eb) in reps.iter().enumerate() {
            let prod = a.mult[ea][eb].clone();
            let mut tr = Q::zero();
            for &ec in &reps {
                let image = a.mul(&prod, &unit(n, ec));
                tr += &j0.project(&image)[pos_of(ec)];
            }
            trace_form[(ai, bi)] = tr;
        }
    }
    let lifts = trace_form.nullspace().into_iter().map(|w| {
        let mut v = vec![Q::zero(); n];
        for (coef, &e) in w.iter().zip(&reps) {
            v[e] = coef.clone();
        }
        v
    });
    let even_rad = Subspace::span(n, j0.basis().iter().cloned().chain(lifts));
    Radical {
        even: even_rad,
        odd: odd_space,
    }
}

pub fn is_local(a: &FiniteSuperAlgebra) -> bool {
    a.dim() - radical(a).dim() == 1
}

/// Complete set of orthogonal idempotents lifting those of `A/rad(A)` when
/// that quotient is a product of copies of Q. One idempotent means `A` is
/// local.
pub fn local_idempotents(a: &FiniteSuperAlgebra) -> Result<Vec<Vec<Q>>, ArtinError> {
    let rad = radical(a).space();
    let n = a.dim();
    let r = n - rad.dim();
    if r == 1 {
        return Ok(vec![a.unit.clone()]);
    }
    let coords = rad.quotient_coords();
    // candidate generic elements: basis elements, then integer combinations
    let mut candidates: Vec<Vec<Q>> = coords.iter().map(|&c| unit(n, c)).collect();
    for s in 1..=4i64 {
        let mut v = vec![Q::zero(); n];
        for (t, &c) in coords.iter().enumerate() {
            v[c] = q((t as i64 + 1) * s + t as i64 * t as i64);
        }
        candidates.push(v);
    }
    for x in candidates {
        // minimal polynomial of x modulo the radical
        let mut powers: Vec<Vec<Q>> = vec![rad.project(&a.unit)];
        let mut cur = a.unit.clone();
        let minpoly = loop {
            cur = a.mul(&cur, &x);
            let img = rad.project(&cur);
            let span = Subspace::span(coords.len(), powers.clone());
            if span.contains(&img) {
                let k = powers.len();
                let mut aug = QMatrix::zeros(coords.len(), k + 1);
                for i in 0..coords.len() {
                    for (j, p) in powers.iter().enumerate() {
                        aug[(i, j)] = p[i].clone();
                    }
                    aug[(i, k)] = img[i].clone();
                }
                let ns = aug.nullspace();
                let v = ns
                    .into_iter()
                    .find(|v| !v[k].is_zero())
                    .expect("dependency includes the new power");
                let lead = v[k].clone();
                break Poly::new(v.iter().map(|x| x / &lead).collect());
            }
            powers.push(img);
        };
        if minpoly.deg() < r {
            continue;
        }
        let factors = factor(&minpoly).map_err(|e| ArtinError::NotLocal(e.to_string()))?;
        if factors.iter().any(|(f, _)| f.deg() > 1) {
            return Err(ArtinError::NotLocal(
                "residue algebra has a residue field strictly larger than Q".into(),
            ));
        }
        let roots: Vec<Q> = factors.iter().map(|(f, _)| -f.coeff(0)).collect();
        let mut idems = Vec::new();
        for (i, li) in roots.iter().enumerate() {
            let mut e = a.unit.clone();
            for (j, lj) in roots.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut shifted = x.clone();
                axpy(&mut shifted, &(-lj.clone()), &a.unit);
                e = a.mul(&e, &shifted);
                let inv = (li - lj).recip();
                e.iter_mut().for_each(|c| *c *= &inv);
            }
            idems.push(lift_idempotent(a, e));
        }
        return Ok(idems);
    }
    Err(ArtinError::NotLocal("could not split the residue algebra".into()))
}

fn lift_idempotent(a: &FiniteSuperAlgebra, mut e: Vec<Q>) -> Vec<Q> {
    loop {
        let e2 = a.mul(&e, &e);
        if e2 == e {
            return e;
        }
        let e3 = a.mul(&e2, &e);
        e = e2.iter().zip(&e3).map(|(x, y)| q(3) * x - q(2) * y).collect();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedModule {
    names: Vec<String>,
    parities: Vec<Parity>,
    /// `action[a][m]` = coordinates of `e_a · m_m`.
    action: Vec<Vec<Vec<Q>>>,
}

impl GradedModule {
    pub fn new(
        a: &FiniteSuperAlgebra,
        names: Vec<String>,
        parities: Vec<Parity>,
        action: Vec<Vec<Vec<Q>>>,
    ) -> Result<Self, ArtinError> {
        let m = Self {
            names,
            parities,
            action,
        };
        m.validate(a)?;
        Ok(m)
    }

    fn validate(&self, a: &FiniteSuperAlgebra) -> Result<(), ArtinError> {
        let d = self.dim();
        let bad = |m: String| Err(ArtinError::NotAModule(m));
        if self.parities.len() != d {
            return bad("parity list length".into());
        }
        if self.action.len() != a.dim()
            || self
                .action
                .iter()
                .any(|r| r.len() != d || r.iter().any(|v| v.len() != d))
        {
            return bad("action table has the wrong shape".into());
        }
        for i in 0..a.dim() {
            for m in 0..d {
                let want = add_parity(a.parities[i], self.parities[m]);
                if self.action[i][m]
                    .iter()
                    .zip(&self.parities)
                    .any(|(c, &p)| !c.is_zero() && p != want)
                {
                    return bad(format!(
                        "{}·{} is not homogeneous of the right parity",
                        a.names[i], self.names[m]
                    ));
                }
            }
        }
        for m in 0..d {
            if self.act(&a.unit, &unit(d, m)) != unit(d, m) {
                return bad(format!("unit does not fix {}", self.names[m]));
            }
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                for m in 0..d {
                    let left = self.act(&a.mult[i][j], &unit(d, m));
                    let right = self.act(&unit(a.dim(), i), &self.action[j][m]);
                    if left != right {
                        return bad(format!(
                            "({}·{})·{} ≠ {}·({}·{})",
                            a.names[i], a.names[j], self.names[m], a.names[i], a.names[j], self.names[m]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// `(dim M₀, dim M₁)`.
    pub fn superdim(&self) -> (usize, usize) {
        let odd = self.parities.iter().filter(|&&p| p == Parity::Odd).count();
        (self.dim() - odd, odd)
    }

    pub fn act(&self, x: &[Q], m: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in m.iter().enumerate() {
                if !b.is_zero() {
                    axpy(&mut out, &(a * b), &self.action[i][j]);
                }
            }
        }
        out
    }

    /// `A` as a module over itself.
    pub fn regular(a: &FiniteSuperAlgebra) -> Self {
        Self {
            names: a.names.clone(),
            parities: a.parities.clone(),
            action: a.mult.clone(),
        }
    }

    /// `ΠM`: same action, parities exchanged. The sign convention
    /// `a·(πm) = (−1)^{|a|} π(a·m)` keeps the module associative.
    pub fn parity_shift(&self, a: &FiniteSuperAlgebra) -> Self {
        let action = (0..a.dim())
            .map(|i| {
                self.action[i]
                    .iter()
                    .map(|v| {
                        if a.parities[i] == Parity::Odd {
                            v.iter().map(|c| -c.clone()).collect()
                        } else {
                            v.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            names: self.names.iter().map(|n| format!("Π{n}")).collect(),
            parities: self.parities.iter().map(|&p| add_parity(p, Parity::Odd)).collect(),
            action,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (d1, d2) = (self.dim(), other.dim());
        let d = d1 + d2;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(r1, r2)| {
                let mut row = Vec::with_capacity(d);
                for v in r1 {
                    let mut w = v.clone();
                    w.extend(std::iter::repeat_n(Q::zero(), d2));
                    row.push(w);
                }
                for v in r2 {
                    let mut w = vec![Q::zero(); d1];
                    w.extend(v.iter().cloned());
                    row.push(w);
                }
                row
            })
            .collect();
        Self {
            names: self.names.iter().chain(&other.names).cloned().collect(),
            parities: self.parities.iter().chain(&other.parities).cloned().collect(),
            action,
        }
    }

    /// Smallest graded submodule containing the given homogeneous vectors.
    pub fn generated_submodule(&self, a: &FiniteSuperAlgebra, gens: &[Vec<Q>]) -> Subspace {
        let d = self.dim();
        let mut span = Subspace::span(d, gens.iter().cloned());
        loop {
            let mut new = Vec::new();
            for v in span.basis() {
                for i in 0..a.dim() {
                    let w = self.act(&unit(a.dim(), i), v);
                    if !span.contains(&w) {
                        new.push(w);
                    }
                }
            }
            if new.is_empty() {
                return span;
            }
            span = Subspace::span(d, span.basis().iter().cloned().chain(new));
        }
    }

    /// `M / N` for a graded submodule `N` (spanned by homogeneous vectors).
    pub fn quotient(&self, a: &FiniteSuperAlgebra, sub: &Subspace) -> Self {
        let coords = sub.quotient_coords();
        let action = (0..a.dim())
            .map(|i| coords.iter().map(|&c| sub.project(&self.action[i][c])).collect())
            .collect();
        Self {
            names: coords.iter().map(|&c| self.names[c].clone()).collect(),
            parities: coords.iter().map(|&c| self.parities[c]).collect(),
            action,
        }
    }

    pub fn from_wire(a: &FiniteSuperAlgebra, w: &ModuleWire) -> Result<Self, ArtinError> {
        let (names, parities) = parse_basis(&w.basis)?;
        let d = names.len();
        let idx = index_map(&names)?;
        let aidx = index_map(&a.names)?;
        let mut action = vec![vec![vec![Q::zero(); d]; d]; a.dim()];
        for (x, m, r, c) in &w.action {
            let (i, j, k) = (lookup(&aidx, x)?, lookup(&idx, m)?, lookup(&idx, r)?);
            action[i][j][k] += parse_q(c)?;
        }
        // the unit acts as the identity unless its rows are given
        let unit_index = match a
            .unit
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect::<Vec<_>>()[..]
        {
            [(u, c)] if c.is_one() => Some(u),
            _ => None,
        };
        if let Some(u) = unit_index {
            if !w.action.iter().any(|(x, ..)| idx_of(&aidx, x) == Some(u)) {
                for (m, row) in action[u].iter_mut().enumerate() {
                    *row = unit(d, m);
                }
            }
        }
        Self::new(a, names, parities, action)
    }

    pub fn to_wire(&self, a: &FiniteSuperAlgebra) -> ModuleWire {
        let mut action = Vec::new();
        for i in 0..a.dim() {
            for m in 0..self.dim() {
                for (k, c) in self.action[i][m].iter().enumerate() {
                    if !c.is_zero() {
                        action.push((
                            a.names[i].clone(),
                            self.names[m].clone(),
                            self.names[k].clone(),
                            format_rational(c),
                        ));
                    }
                }
            }
        }
        ModuleWire {
            basis: self
                .names
                .iter()
                .zip(&self.parities)
                .map(|(n, p)| (n.clone(), parity_name(*p)))
                .collect(),
            action,
        }
    }
}

/// Loewy layers `rad^i M / rad^{i+1} M` as `(even dim, odd dim)` pairs.
pub fn radical_layers(a: &FiniteSuperAlgebra, m: &GradedModule) -> Vec<(usize, usize)> {
    let rad = radical(a).generators();
    let d = m.dim();
    let split = |vs: Vec<Vec<Q>>| -> (Subspace, Subspace) {
        let (ev, od): (Vec<_>, Vec<_>) = vs
            .into_iter()
            .filter(|v| !is_zero_vec(v))
            .partition(|v| is_homogeneous(v, &m.parities) == Some(Parity::Even));
        (Subspace::span(d, ev), Subspace::span(d, od))
    };
    let mut layers = Vec::new();
    let mut cur = split((0..d).map(|i| unit(d, i)).collect());
    loop {
        if cur.0.dim() + cur.1.dim() == 0 {
            return layers;
        }
        let next_gens: Vec<Vec<Q>> = cur
            .0
            .basis()
            .iter()
            .chain(cur.1.basis())
            .flat_map(|v| rad.iter().map(move |r| m.act(r, v)))
            .collect();
        let next = split(next_gens);
        layers.push((cur.0.dim() - next.0.dim(), cur.1.dim() - next.1.dim()));
        cur = next;
    }
}

/// Super length of `M` over a local `A` with residue field Q: the numbers of
/// even and odd factors in the radical filtration.
pub fn super_length(a: &FiniteSuperAlgebra, m: &GradedModule) -> Result<Z2Value, ArtinError> {
    m.validate(a)?;
    let rad = radical(a);
    let residue = a.dim() - rad.dim();
    if residue != 1 {
        return Err(ArtinError::NotLocal(format!("A/rad(A) has dimension {residue} over Q")));
    }
    let (e, o) = radical_layers(a, m)
        .into_iter()
        .fold((0, 0), |(e, o), (x, y)| (e + x, o + y));
    Ok(Z2Value::new(e as i64, o as i64))
}

/// Lengths of the pieces `e_i M` over the local factors `e_i A` of a
/// semilocal `A` whose residue algebra is a product of copies of Q.
pub fn semilocal_lengths(a: &FiniteSuperAlgebra, m: &GradedModule) -> Result<Vec<Z2Value>, ArtinError> {
    m.validate(a)?;
    let idems = local_idempotents(a)?;
    let d = m.dim();
    Ok(idems
        .iter()
        .map(|e| {
            let piece = Subspace::span(d, (0..d).map(|i| m.act(e, &unit(d, i))));
            let even = piece
                .basis()
                .iter()
                .filter(|v| is_homogeneous(v, &m.parities) == Some(Parity::Even))
                .count();
            Z2Value::new(even as i64, (piece.dim() - even) as i64)
        })
        .collect())
}

/// A unit-preserving, parity-preserving algebra map given by the images of
/// the source basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMorphism {
    images: Vec<Vec<Q>>,
}

impl AlgebraMorphism {
    pub fn new(
        source: &FiniteSuperAlgebra,
        target: &FiniteSuperAlgebra,
        images: Vec<Vec<Q>>,
    ) -> Result<Self, ArtinError> {
        let bad = |m: String| Err(ArtinError::NotAMorphism(m));
        if images.len() != source.dim() || images.iter().any(|v| v.len() != target.dim()) {
            return bad("image table has the wrong shape".into());
        }
        let f = Self { images };
        for i in 0..source.dim() {
            let p = is_homogeneous(&f.images[i], &target.parities);
            if !is_zero_vec(&f.images[i]) && p != Some(source.parities[i]) {
                return bad(format!("image of {} has the wrong parity", source.names[i]));
            }
        }
        if f.apply(&source.unit) != target.unit {
            return bad("unit is not preserved".into());
        }
        for i in 0..source.dim() {
            for j in 0..source.dim() {
                let lhs = f.apply(&source.mult[i][j]);
                let rhs = target.mul(&f.images[i], &f.images[j]);
                if lhs != rhs {
                    return bad(format!(
                        "f({}·{}) ≠ f({})·f({})",
                        source.names[i], source.names[j], source.names[i], source.names[j]
                    ));
                }
            }
        }
        Ok(f)
    }

    /// The inclusion `A → A ⊗ C`, `a ↦ a ⊗ 1`.
    pub fn tensor_inclusion(a: &FiniteSuperAlgebra, c: &FiniteSuperAlgebra) -> Self {
        let nc = c.dim();
        let images = (0..a.dim())
            .map(|i| {
                let mut v = vec![Q::zero(); a.dim() * nc];
                for (j, u) in c.unit.iter().enumerate() {
                    v[i * nc + j] = u.clone();
                }
                v
            })
            .collect();
        Self { images }
    }

    pub fn identity(a: &FiniteSuperAlgebra) -> Self {
        Self {
            images: (0..a.dim()).map(|i| unit(a.dim(), i)).collect(),
        }
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let n = self.images.first().map_or(0, Vec::len);
        let mut out = vec![Q::zero(); n];
        for (c, img) in x.iter().zip(&self.images) {
            axpy(&mut out, c, img);
        }
        out
    }
}

/// `M ⊗_A B` as a graded `B`-module, computed as the quotient of the vector
/// space `M ⊗_Q B` by the relations `(m·a) ⊗ b − m ⊗ f(a)b`, where
/// `m·a = (−1)^{|a||m|} a·m`.
pub fn base_change_module(
    a: &FiniteSuperAlgebra,
    m: &GradedModule,
    b: &FiniteSuperAlgebra,
    f: &AlgebraMorphism,
) -> Result<GradedModule, ArtinError> {
    m.validate(a)?;
    let (dm, db) = (m.dim(), b.dim());
    let n = dm * db;
    let at = |i: usize, j: usize| i * db + j;
    let mut relations = Vec::new();
    for i in 0..dm {
        for k in 0..a.dim() {
            let s = if sign(a.parities[k], m.parities[i]) {
                -Q::one()
            } else {
                Q::one()
            };
            let ma = m.act(&unit(a.dim(), k), &unit(dm, i));
            let fab_cols: Vec<Vec<Q>> = (0..db).map(|j| b.mul(&f.images[k], &unit(db, j))).collect();
            for (j, fab) in fab_cols.iter().enumerate() {
                let mut v = vec![Q::zero(); n];
                for (i2, c) in ma.iter().enumerate() {
                    if !c.is_zero() {
                        v[at(i2, j)] += &s * c;
                    }
                }
                for (j2, c) in fab.iter().enumerate() {
                    if !c.is_zero() {
                        v[at(i, j2)] -= c;
                    }
                }
                if !is_zero_vec(&v) {
                    relations.push(v);
                }
            }
        }
    }
    let rel = Subspace::span(n, relations);
    let coords = rel.quotient_coords();
    let mut names = Vec::with_capacity(coords.len());
    let mut parities = Vec::with_capacity(coords.len());
    for &c in &coords {
        let (i, j) = (c / db, c % db);
        names.push(format!("{}⊗{}", m.names[i], b.names[j]));
        parities.push(add_parity(m.parities[i], b.parities[j]));
    }
    let action = (0..db)
        .map(|bc| {
            coords
                .iter()
                .map(|&c| {
                    let (i, j) = (c / db, c % db);
                    let s = if sign(b.parities[bc], m.parities[i]) {
                        -Q::one()
                    } else {
                        Q::one()
                    };
                    let prod = b.mul(&unit(db, bc), &unit(db, j));
                    let mut v = vec![Q::zero(); n];
                    for (j2, x) in prod.iter().enumerate() {
                        if !x.is_zero() {
                            v[at(i, j2)] = &s * x;
                        }
                    }
                    rel.project(&v)
                })
                .collect()
        })
        .collect();
    GradedModule::new(b, names, parities, action)
}

/// `B / f(m_A)·B` as a `B`-module, for local `A`.
pub fn closed_fiber(a: &FiniteSuperAlgebra, b: &FiniteSuperAlgebra, f: &AlgebraMorphism) -> GradedModule {
    let reg = GradedModule::regular(b);
    let gens: Vec<Vec<Q>> = radical(a).generators().iter().map(|r| f.apply(r)).collect();
    let sub = reg.generated_submodule(b, &gens);
    reg.quotient(b, &sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QMatrix;

    /// Dickson's criterion: in characteristic zero the radical of a
    /// finite-dimensional associative algebra is `{x : tr(L_{xy}) = 0 ∀y}`.
    fn trace_form_radical(a: &FiniteSuperAlgebra) -> Subspace {
        let n = a.dim();
        let mut t = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let l = a.left_multiplication(&a.mult[i][j]);
                t[(i, j)] = (0..n).fold(Q::zero(), |acc, k| acc + &l[(k, k)]);
            }
        }
        Subspace::span(n, t.nullspace())
    }

    fn dual_numbers() -> FiniteSuperAlgebra {
        FiniteSuperAlgebra::truncated_polynomial("x", 2)
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&FiniteSuperAlgebra::field()).dim(), 0);
        let theta = FiniteSuperAlgebra::exterior("θ", 1);
        let r = radical(&theta);
        assert_eq!(r.space(), Subspace::span(2, vec![unit(2, 1)]));
        let r = radical(&dual_numbers());
        assert_eq!(r.space(), Subspace::span(2, vec![unit(2, 1)]));
    }

    #[test]
    fn radical_matches_trace_form() {
        let algebras = [
            FiniteSuperAlgebra::exterior("θ", 2),
            FiniteSuperAlgebra::truncated_polynomial("x", 3).tensor(&FiniteSuperAlgebra::exterior("θ", 1)),
            dual_numbers().tensor(&dual_numbers()),
            FiniteSuperAlgebra::exterior("θ", 3),
        ];
        for a in &algebras {
            assert_eq!(radical(a).space(), trace_form_radical(a), "{:?}", a.names());
        }
    }

    #[test]
    fn radical_of_quotient_is_zero() {
        let a = FiniteSuperAlgebra::truncated_polynomial("x", 3).tensor(&FiniteSuperAlgebra::exterior("θ", 2));
        let rad = radical(&a).space();
        let reg = GradedModule::regular(&a);
        let top = reg.quotient(&a, &rad);
        assert_eq!(top.dim(), 1);
        assert!(is_local(&a));
    }

    #[test]
    fn length_examples() {
        let f = FiniteSuperAlgebra::field();
        let m = GradedModule::regular(&f).direct_sum(&GradedModule::regular(&f).parity_shift(&f));
        assert_eq!(super_length(&f, &m).unwrap(), Z2Value::new(1, 1));
        let theta = FiniteSuperAlgebra::exterior("θ", 1);
        assert_eq!(
            super_length(&theta, &GradedModule::regular(&theta)).unwrap(),
            Z2Value::new(1, 1)
        );
        let d = dual_numbers();
        assert_eq!(
            super_length(&d, &GradedModule::regular(&d)).unwrap(),
            Z2Value::new(2, 0)
        );
        assert_eq!(radical_layers(&d, &GradedModule::regular(&d)), vec![(1, 0), (1, 0)]);
    }

    #[test]
    fn not_local_is_rejected() {
        // Q × Q as the algebra of diagonal 2x2 matrices, basis e1, e2
        let names = vec!["e1".to_string(), "e2".to_string()];
        let mult = vec![vec![unit(2, 0), vec![q(0), q(0)]], vec![vec![q(0), q(0)], unit(2, 1)]];
        let a = FiniteSuperAlgebra::new(names, vec![Parity::Even; 2], mult, vec![q(1), q(1)]).unwrap();
        let reg = GradedModule::regular(&a);
        assert!(matches!(super_length(&a, &reg), Err(ArtinError::NotLocal(_))));
        let lens = semilocal_lengths(&a, &reg).unwrap();
        assert_eq!(lens, vec![Z2Value::new(1, 0), Z2Value::new(1, 0)]);
    }

    #[test]
    fn semilocal_with_nilpotents() {
        // Q[x]/(x²(x−1)) = Q[x]/(x²) × Q
        let names = vec!["1".to_string(), "x".to_string(), "x^2".to_string()];
        let n = 3;
        // x^3 = x^2 from x^3 - x^2 = 0
        let pow = |k: usize| -> Vec<Q> {
            match k {
                0 => unit(n, 0),
                1 => unit(n, 1),
                _ => unit(n, 2),
            }
        };
        let mult = (0..n).map(|i| (0..n).map(|j| pow(i + j)).collect()).collect();
        let a = FiniteSuperAlgebra::new(names, vec![Parity::Even; 3], mult, unit(3, 0)).unwrap();
        let mut lens = semilocal_lengths(&a, &GradedModule::regular(&a)).unwrap();
        lens.sort();
        assert_eq!(lens, vec![Z2Value::new(1, 0), Z2Value::new(2, 0)]);
    }

    #[test]
    fn residue_extension_is_rejected() {
        // Q[x]/(x²+1)
        let names = vec!["1".to_string(), "x".to_string()];
        let mult = vec![vec![unit(2, 0), unit(2, 1)], vec![unit(2, 1), vec![q(-1), q(0)]]];
        let a = FiniteSuperAlgebra::new(names, vec![Parity::Even; 2], mult, unit(2, 0)).unwrap();
        assert!(matches!(local_idempotents(&a), Err(ArtinError::NotLocal(_))));
    }

    #[test]
    fn invalid_algebras() {
        // odd generator squaring to the unit violates supercommutativity
        let names = vec!["1".to_string(), "θ".to_string()];
        let mult = vec![vec![unit(2, 0), unit(2, 1)], vec![unit(2, 1), unit(2, 0)]];
        let err = FiniteSuperAlgebra::new(names, vec![Parity::Even, Parity::Odd], mult, unit(2, 0));
        assert!(matches!(err, Err(ArtinError::NotAnAlgebra(_))));
    }

    #[test]
    fn base_change_examples() {
        let d = dual_numbers();
        let m = GradedModule::regular(&d);
        let same = base_change_module(&d, &m, &d, &AlgebraMorphism::identity(&d)).unwrap();
        assert_eq!(same.superdim(), (2, 0));

        let f = FiniteSuperAlgebra::field();
        let theta = FiniteSuperAlgebra::exterior("θ", 1);
        let incl = AlgebraMorphism::new(&f, &theta, vec![unit(2, 0)]).unwrap();
        let out = base_change_module(&f, &GradedModule::regular(&f), &theta, &incl).unwrap();
        assert_eq!(super_length(&theta, &out).unwrap(), Z2Value::new(1, 1));

        let b = d.tensor(&theta);
        let incl = AlgebraMorphism::tensor_inclusion(&d, &theta);
        let out = base_change_module(&d, &m, &b, &incl).unwrap();
        assert_eq!(super_length(&b, &out).unwrap(), Z2Value::new(2, 2));
        let fiber = closed_fiber(&d, &b, &incl);
        assert_eq!(super_length(&b, &fiber).unwrap(), Z2Value::new(1, 1));
    }

    #[test]
    fn base_change_of_residue_module() {
        // M = A/m_A = Q over A = Q[x]/(x²); M ⊗ B = B/xB
        let d = dual_numbers();
        let reg = GradedModule::regular(&d);
        let top = reg.quotient(&d, &radical(&d).space());
        let theta = FiniteSuperAlgebra::exterior("θ", 1);
        let b = d.tensor(&theta);
        let incl = AlgebraMorphism::tensor_inclusion(&d, &theta);
        let out = base_change_module(&d, &top, &b, &incl).unwrap();
        assert_eq!(super_length(&b, &out).unwrap(), Z2Value::new(1, 1));
    }

    #[test]
    fn parity_shift_swaps_length() {
        let a = FiniteSuperAlgebra::truncated_polynomial("x", 2).tensor(&FiniteSuperAlgebra::exterior("θ", 1));
        let reg = GradedModule::regular(&a);
        let both = reg.direct_sum(&reg.parity_shift(&a));
        let l = super_length(&a, &reg).unwrap();
        assert_eq!(super_length(&a, &both).unwrap(), &l + &l.swap());
    }

    #[test]
    fn additivity_on_submodule_sequences() {
        let a = FiniteSuperAlgebra::exterior("θ", 2);
        let reg = GradedModule::regular(&a);
        // N = (θ1)
        let theta1 = unit(4, 1);
        let sub = reg.generated_submodule(&a, &[theta1]);
        let quot = reg.quotient(&a, &sub);
        let sub_len = Z2Value::new(
            sub.basis()
                .iter()
                .filter(|v| is_homogeneous(v, reg.parities()) == Some(Parity::Even))
                .count() as i64,
            sub.basis()
                .iter()
                .filter(|v| is_homogeneous(v, reg.parities()) == Some(Parity::Odd))
                .count() as i64,
        );
        assert_eq!(
            super_length(&a, &reg).unwrap(),
            &sub_len + &super_length(&a, &quot).unwrap()
        );
    }

    #[test]
    fn wire_roundtrip() {
        let a = FiniteSuperAlgebra::exterior("θ", 2);
        let w = a.to_wire();
        let json = serde_json::to_string(&w).unwrap();
        let back = FiniteSuperAlgebra::from_wire(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, a);
        let m = GradedModule::regular(&a).parity_shift(&a);
        let mw = m.to_wire(&a);
        assert_eq!(GradedModule::from_wire(&a, &mw).unwrap(), m);
    }
}
