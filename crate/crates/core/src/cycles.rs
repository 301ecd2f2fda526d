//! Supercycles: finite Z²-linear combinations of named integral subvarieties,
//! with proper push-forward, flat pullback, divisors of rational functions
//! on curve models, and rational-equivalence witnesses.

use crate::artin::{super_length, AlgebraWire, ArtinError, FiniteSuperAlgebra, GradedModule};
use crate::curve::cover::CoverData;
use crate::curve::{CurveError, Point, RationalEvenFunction, SuperCurveModel};
use crate::z2::{z2_mul, z2_scale, Z2Value};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycleError {
    #[error("no push-forward data for {0}")]
    MissingMapData(String),
    #[error("no pullback data for {0}")]
    MissingPullbackData(String),
    #[error("unknown subvariety {0}")]
    UnknownName(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid map data: {0}")]
    InvalidData(String),
    #[error("witness has odd dimension {0}; only 0 and 1 are allowed")]
    OddDimensionOutOfRange(u32),
    #[error("point {0} has no name in the embedding")]
    UnknownPoint(String),
    #[error(transparent)]
    Artin(#[from] ArtinError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Named subvarieties with their dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AmbientSpace {
    dims: BTreeMap<String, u32>,
}

impl AmbientSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, dim: u32) -> Self {
        self.insert(name, dim);
        self
    }

    pub fn insert(&mut self, name: &str, dim: u32) {
        self.dims.insert(name.to_string(), dim);
    }

    pub fn dim_of(&self, name: &str) -> Result<u32, CycleError> {
        self.dims
            .get(name)
            .copied()
            .ok_or_else(|| CycleError::UnknownName(name.into()))
    }

    pub fn names(&self) -> impl Iterator<Item = (&String, &u32)> {
        self.dims.iter()
    }

    /// Ambient even dimension: the largest subvariety dimension.
    pub fn dimension(&self) -> u32 {
        self.dims.values().copied().max().unwrap_or(0)
    }
}

/// An `h`-supercycle `Σ n_Z [Z]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperCycle {
    #[serde(with = "crate::rational::num_string")]
    pub dim: u32,
    #[serde(with = "terms_wire")]
    terms: BTreeMap<String, Z2Value>,
}

mod terms_wire {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &BTreeMap<String, Z2Value>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(t.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Z2Value>, D::Error> {
        let v: Vec<(String, Z2Value)> = Vec::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (n, c) in v {
            let e: &mut Z2Value = out.entry(n).or_default();
            *e += &c;
        }
        out.retain(|_, c: &mut Z2Value| !c.is_zero());
        Ok(out)
    }
}

impl SuperCycle {
    pub fn zero(dim: u32) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (String, Z2Value)>>(dim: u32, terms: I) -> Self {
        let mut c = Self::zero(dim);
        for (n, v) in terms {
            c.add_term(&n, &v);
        }
        c
    }

    pub fn single(dim: u32, name: &str, coeff: Z2Value) -> Self {
        Self::from_terms(dim, [(name.to_string(), coeff)])
    }

    pub fn add_term(&mut self, name: &str, coeff: &Z2Value) {
        let e = self.terms.entry(name.to_string()).or_default();
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(name);
        }
    }

    pub fn terms(&self) -> &BTreeMap<String, Z2Value> {
        &self.terms
    }

    pub fn coefficient(&self, name: &str) -> Z2Value {
        self.terms.get(name).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every name is known and has dimension `dim`.
    pub fn validate(&self, space: &AmbientSpace) -> Result<(), CycleError> {
        for name in self.terms.keys() {
            let d = space.dim_of(name)?;
            if d != self.dim {
                return Err(CycleError::DimensionMismatch(format!(
                    "{name} has dimension {d}, cycle has dimension {}",
                    self.dim
                )));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CycleError> {
        if self.dim != other.dim && !self.is_zero() && !other.is_zero() {
            return Err(CycleError::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let dim = if self.is_zero() { other.dim } else { self.dim };
        let mut out = Self { dim, ..self.clone() };
        for (n, c) in &other.terms {
            out.add_term(n, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(n, c)| (n.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CycleError> {
        self.add(&other.neg())
    }

    /// `z2_mul(d, α)` termwise.
    pub fn mul_z2(&self, d: &Z2Value) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(n, c)| (n.clone(), z2_mul(d, c))))
    }

    /// Equality as cycles: same terms, dimension ignored when both are zero.
    pub fn same_as(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.dim == other.dim || self.is_zero())
    }
}

impl fmt::Display for SuperCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(n, c)| format!("{c}[{n}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Image and degree `deg(Z/f(Z))` of each source subvariety; degree 0 exactly
/// when the dimension drops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperMapData {
    pub source: AmbientSpace,
    pub target: AmbientSpace,
    images: BTreeMap<String, (String, u64)>,
}

impl ProperMapData {
    pub fn new(
        source: AmbientSpace,
        target: AmbientSpace,
        images: BTreeMap<String, (String, u64)>,
    ) -> Result<Self, CycleError> {
        for (z, (fz, deg)) in &images {
            let (dz, dfz) = (source.dim_of(z)?, target.dim_of(fz)?);
            if dfz > dz {
                return Err(CycleError::InvalidData(format!(
                    "image {fz} of {z} has larger dimension"
                )));
            }
            if (*deg == 0) != (dfz < dz) {
                return Err(CycleError::InvalidData(format!(
                    "{z} → {fz}: degree {deg} is inconsistent with dimensions {dz} → {dfz}"
                )));
            }
        }
        Ok(Self { source, target, images })
    }

    pub fn identity(space: &AmbientSpace) -> Self {
        Self {
            source: space.clone(),
            target: space.clone(),
            images: space.names().map(|(n, _)| (n.clone(), (n.clone(), 1))).collect(),
        }
    }

    pub fn image(&self, name: &str) -> Option<&(String, u64)> {
        self.images.get(name)
    }

    /// `h ∘ f`: images compose and degrees multiply.
    pub fn then(&self, h: &ProperMapData) -> Result<ProperMapData, CycleError> {
        let mut images = BTreeMap::new();
        for (z, (fz, d1)) in &self.images {
            let (hfz, d2) = h.images.get(fz).ok_or_else(|| CycleError::MissingMapData(fz.clone()))?;
            images.insert(z.clone(), (hfz.clone(), d1 * d2));
        }
        Self::new(self.source.clone(), h.target.clone(), images)
    }

    pub fn to_wire(&self) -> MapWire {
        MapWire {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self
                .images
                .iter()
                .map(|(z, (fz, d))| (z.clone(), fz.clone(), d.to_string()))
                .collect(),
        }
    }

    pub fn from_wire(w: &MapWire) -> Result<Self, CycleError> {
        let mut images = BTreeMap::new();
        for (z, fz, d) in &w.map {
            let d: u64 = d
                .parse()
                .map_err(|_| CycleError::InvalidData(format!("degree {d:?} is not a nonnegative integer")))?;
            images.insert(z.clone(), (fz.clone(), d));
        }
        Self::new(w.source.clone(), w.target.clone(), images)
    }
}

/// `{source: {name: dim}, target: {name: dim}, map: [[name, image, degree]…]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapWire {
    pub source: AmbientSpace,
    pub target: AmbientSpace,
    pub map: Vec<(String, String, String)>,
}

/// Multiplicity of a component of `f⁻¹(Z)`: the generic local algebra, or
/// its length given directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Multiplicity {
    Algebra(FiniteSuperAlgebra),
    Length(Z2Value),
}

impl Multiplicity {
    pub fn length(&self) -> Result<Z2Value, CycleError> {
        match self {
            Multiplicity::Length(l) => Ok(l.clone()),
            Multiplicity::Algebra(a) => Ok(super_length(a, &GradedModule::regular(a))?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub multiplicity: Multiplicity,
}

/// For each target subvariety `Z`, the components of `f⁻¹(Z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatPullbackData {
    pub source: AmbientSpace,
    pub target: AmbientSpace,
    pub relative_dim: u32,
    fibers: BTreeMap<String, Vec<Component>>,
}

impl FlatPullbackData {
    pub fn new(
        source: AmbientSpace,
        target: AmbientSpace,
        relative_dim: u32,
        fibers: BTreeMap<String, Vec<Component>>,
    ) -> Result<Self, CycleError> {
        for (z, comps) in &fibers {
            let dz = target.dim_of(z)?;
            for c in comps {
                let dc = source.dim_of(&c.name)?;
                if dc != dz + relative_dim {
                    return Err(CycleError::InvalidData(format!(
                        "component {} of the preimage of {z} has dimension {dc}, expected {}",
                        c.name,
                        dz + relative_dim
                    )));
                }
            }
        }
        Ok(Self {
            source,
            target,
            relative_dim,
            fibers,
        })
    }

    pub fn fiber(&self, name: &str) -> Option<&[Component]> {
        self.fibers.get(name).map(Vec::as_slice)
    }

    pub fn from_wire(w: &PullbackWire) -> Result<Self, CycleError> {
        let mut fibers: BTreeMap<String, Vec<Component>> = BTreeMap::new();
        for (z, comp, m) in &w.components {
            let multiplicity = match m {
                MultiplicityWire::Algebra { algebra } => Multiplicity::Algebra(FiniteSuperAlgebra::from_wire(algebra)?),
                MultiplicityWire::Length { length } => Multiplicity::Length(length.clone()),
            };
            fibers.entry(z.clone()).or_default().push(Component {
                name: comp.clone(),
                multiplicity,
            });
        }
        Self::new(w.source.clone(), w.target.clone(), w.relative_dim, fibers)
    }
}

/// `{source, target, relative_dim, components: [[target_name, component, {algebra}|{length}]…]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackWire {
    pub source: AmbientSpace,
    pub target: AmbientSpace,
    #[serde(with = "crate::rational::num_string")]
    pub relative_dim: u32,
    pub components: Vec<(String, String, MultiplicityWire)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MultiplicityWire {
    Algebra { algebra: AlgebraWire },
    Length { length: Z2Value },
}

/// `f_*α = Σ deg(Z/f(Z))·n_Z [f(Z)]`.
pub fn pushforward(alpha: &SuperCycle, f: &ProperMapData) -> Result<SuperCycle, CycleError> {
    let mut out = SuperCycle::zero(alpha.dim);
    for (z, c) in &alpha.terms {
        let (fz, deg) = f.images.get(z).ok_or_else(|| CycleError::MissingMapData(z.clone()))?;
        if *deg > 0 {
            out.add_term(fz, &z2_scale(&BigInt::from(*deg), c));
        }
    }
    Ok(out)
}

/// `f^*α = Σ n_Z · Σ_i ℓ(O_{f⁻¹Z, W_i}) [W_i]`.
pub fn flat_pullback(alpha: &SuperCycle, d: &FlatPullbackData) -> Result<SuperCycle, CycleError> {
    let mut out = SuperCycle::zero(alpha.dim + d.relative_dim);
    for (z, c) in &alpha.terms {
        let comps = d
            .fibers
            .get(z)
            .ok_or_else(|| CycleError::MissingPullbackData(z.clone()))?;
        for comp in comps {
            out.add_term(&comp.name, &z2_mul(c, &comp.multiplicity.length()?));
        }
    }
    Ok(out)
}

/// Names for the closed points of a curve model inside an ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub dim: u32,
    pub points: BTreeMap<Point, String>,
}

impl Embedding {
    pub fn from_wire(w: &EmbeddingWire) -> Result<Self, CycleError> {
        let points = w
            .points
            .iter()
            .map(|(p, n)| Ok((Point::from_json(p)?, n.clone())))
            .collect::<Result<_, CycleError>>()?;
        Ok(Self { dim: w.dim, points })
    }
}

/// `{dim, points: [[point, name]…]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingWire {
    #[serde(default, with = "crate::rational::num_string")]
    pub dim: u32,
    pub points: Vec<(Value, String)>,
}

/// Image of `div(g)` under the embedding.
pub fn divisor_cycle(
    embedding: &Embedding,
    model: &SuperCurveModel,
    g: &RationalEvenFunction,
) -> Result<SuperCycle, CycleError> {
    let div = model.div_model(g)?;
    let mut out = SuperCycle::zero(embedding.dim);
    for (p, c) in div {
        let name = embedding
            .points
            .get(&p)
            .ok_or_else(|| CycleError::UnknownPoint(p.to_string()))?;
        out.add_term(name, &c);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub embedding: Embedding,
    pub model: SuperCurveModel,
    pub g: RationalEvenFunction,
}

/// Whether `α = Σ_i δ_{i*} div(g_i)` exactly. Witness models must have odd
/// dimension 0 or 1.
pub fn verify_rational_equivalence(alpha: &SuperCycle, witnesses: &[Witness]) -> Result<bool, CycleError> {
    let mut total = SuperCycle::zero(alpha.dim);
    for w in witnesses {
        if w.model.odd_rank > 1 {
            return Err(CycleError::OddDimensionOutOfRange(w.model.odd_rank));
        }
        total = total.add(&divisor_cycle(&w.embedding, &w.model, &w.g)?)?;
    }
    Ok(total.same_as(alpha))
}

/// The double cover `t = s²` of split curves with `L = O`, restricted to the
/// fibers over a chosen finite set of target points. The curves themselves
/// are `X` and `Y`; a point `p` is named `X[p]` or `Y[p]`.
#[derive(Debug, Clone)]
pub struct DoubleCoverDatum {
    pub cover: CoverData,
    pub push: ProperMapData,
    pub pull: FlatPullbackData,
    pub source_points: Embedding,
    pub target_points: Embedding,
}

pub fn source_name(p: &Point) -> String {
    format!("X[{}]", p.label("s"))
}

pub fn target_name(p: &Point) -> String {
    format!("Y[{}]", p.label("t"))
}

impl DoubleCoverDatum {
    pub fn over(points: &[Point]) -> Result<Self, CycleError> {
        let cover = CoverData::double_cover();
        let mut source = AmbientSpace::new().with("X", 1);
        let mut target = AmbientSpace::new().with("Y", 1);
        let mut images = BTreeMap::from([("X".to_string(), ("Y".to_string(), 2))]);
        let mut fibers = BTreeMap::from([(
            "Y".to_string(),
            vec![Component {
                name: "X".into(),
                multiplicity: Multiplicity::Length(Z2Value::new(1, 0)),
            }],
        )]);
        let mut src_pts = BTreeMap::new();
        let mut tgt_pts = BTreeMap::new();
        for y in points {
            let yn = target_name(y);
            target.insert(&yn, 0);
            tgt_pts.insert(y.clone(), yn.clone());
            let mut comps = Vec::new();
            for fp in cover.fiber(y)? {
                let xn = source_name(&fp.point);
                source.insert(&xn, 0);
                src_pts.insert(fp.point.clone(), xn.clone());
                images.insert(xn.clone(), (yn.clone(), fp.residue_degree as u64));
                let e = fp.ramification as usize;
                // the fiber's local algebra is Q[x]/(x^e) over κ(x); its
                // length as a module over itself is e
                let multiplicity = if fp.point.degree() == 1 {
                    Multiplicity::Algebra(FiniteSuperAlgebra::truncated_polynomial("x", e))
                } else {
                    Multiplicity::Length(Z2Value::new(e as i64, 0))
                };
                comps.push(Component { name: xn, multiplicity });
            }
            fibers.insert(yn, comps);
        }
        Ok(Self {
            push: ProperMapData::new(source.clone(), target.clone(), images)?,
            pull: FlatPullbackData::new(source, target, 0, fibers)?,
            cover,
            source_points: Embedding {
                dim: 0,
                points: src_pts,
            },
            target_points: Embedding {
                dim: 0,
                points: tgt_pts,
            },
        })
    }

    /// Target points under the support of `div(g)` on the source and of
    /// `div(ber g)` on the target.
    pub fn relevant_points(g: &RationalEvenFunction) -> Result<Vec<Point>, CycleError> {
        let cover = CoverData::double_cover();
        let model = SuperCurveModel::free(crate::curve::Base::P1);
        let mut pts: Vec<Point> = Vec::new();
        for x in model.div_model(g)?.keys() {
            pts.push(cover.image(x)?.0);
        }
        let ber = crate::curve::ber_of_multiplication(&cover, &g.clone().into())?;
        pts.extend(model.div_model(&ber)?.into_keys());
        pts.sort();
        pts.dedup();
        Ok(pts)
    }
}

/// The square with `φ: Y' = A¹_w × Y × Spec Q⟨ζ⟩ → Y` flat of relative
/// dimension 1 and `f' = id × f × id`. A subvariety `Z` of `X` or `Y` has
/// preimage `A¹ × Z × Spec Q⟨ζ⟩`, named `A1×Z`, with multiplicity
/// `ℓ(Q⟨ζ⟩) = (1,1)`.
#[derive(Debug, Clone)]
pub struct BaseChangeSquare {
    pub f: ProperMapData,
    pub f_prime: ProperMapData,
    pub phi: FlatPullbackData,
    pub phi_prime: FlatPullbackData,
}

fn product_name(z: &str) -> String {
    format!("A1×{z}")
}

fn thicken(space: &AmbientSpace) -> (AmbientSpace, BTreeMap<String, Vec<Component>>) {
    let mut out = AmbientSpace::new();
    let mut fibers = BTreeMap::new();
    for (n, d) in space.names() {
        let pn = product_name(n);
        out.insert(&pn, d + 1);
        fibers.insert(
            n.clone(),
            vec![Component {
                name: pn,
                multiplicity: Multiplicity::Algebra(FiniteSuperAlgebra::exterior("ζ", 1)),
            }],
        );
    }
    (out, fibers)
}

impl BaseChangeSquare {
    pub fn from_proper(f: &ProperMapData) -> Result<Self, CycleError> {
        let (src2, src_fibers) = thicken(&f.source);
        let (tgt2, tgt_fibers) = thicken(&f.target);
        let images = f
            .images
            .iter()
            .map(|(z, (fz, d))| (product_name(z), (product_name(fz), *d)))
            .collect();
        Ok(Self {
            f_prime: ProperMapData::new(src2.clone(), tgt2.clone(), images)?,
            phi: FlatPullbackData::new(tgt2, f.target.clone(), 1, tgt_fibers)?,
            phi_prime: FlatPullbackData::new(src2, f.source.clone(), 1, src_fibers)?,
            f: f.clone(),
        })
    }

    /// `(f'_* φ'^* α, φ^* f_* α)`.
    pub fn both_sides(&self, alpha: &SuperCycle) -> Result<(SuperCycle, SuperCycle), CycleError> {
        let lhs = pushforward(&flat_pullback(alpha, &self.phi_prime)?, &self.f_prime)?;
        let rhs = flat_pullback(&pushforward(alpha, &self.f)?, &self.phi)?;
        Ok((lhs, rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Base;
    use crate::poly::{Poly, RationalFunction};
    use proptest::prelude::*;

    fn z(e: i64, o: i64) -> Z2Value {
        Z2Value::new(e, o)
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    fn curve_map() -> ProperMapData {
        let src = AmbientSpace::new().with("C", 1).with("P", 0).with("E", 1);
        let tgt = AmbientSpace::new().with("D", 1).with("Q", 0);
        let images = BTreeMap::from([
            ("C".to_string(), ("D".to_string(), 2)),
            ("P".to_string(), ("Q".to_string(), 1)),
            ("E".to_string(), ("Q".to_string(), 0)),
        ]);
        ProperMapData::new(src, tgt, images).unwrap()
    }

    #[test]
    fn pushforward_examples() {
        let f = curve_map();
        assert!(pushforward(&SuperCycle::single(1, "E", z(3, 1)), &f).unwrap().is_zero());
        assert_eq!(
            pushforward(&SuperCycle::single(1, "C", z(1, 1)), &f).unwrap(),
            SuperCycle::single(1, "D", z(2, 2))
        );
        let a = SuperCycle::from_terms(1, [("C".to_string(), z(1, -2)), ("E".to_string(), z(0, 1))]);
        let id = ProperMapData::identity(&f.source);
        assert_eq!(pushforward(&a, &id).unwrap(), a);
        assert!(matches!(
            pushforward(&SuperCycle::single(1, "nope", z(1, 0)), &f),
            Err(CycleError::MissingMapData(_))
        ));
    }

    #[test]
    fn inconsistent_map_data() {
        let src = AmbientSpace::new().with("C", 1);
        let tgt = AmbientSpace::new().with("Q", 0);
        let bad = BTreeMap::from([("C".to_string(), ("Q".to_string(), 2))]);
        assert!(ProperMapData::new(src, tgt, bad).is_err());
    }

    #[test]
    fn pullback_examples() {
        let base = AmbientSpace::new().with("pt", 0);
        let total = AmbientSpace::new().with("line", 1);
        let mk = |m: Multiplicity| {
            FlatPullbackData::new(
                total.clone(),
                base.clone(),
                1,
                BTreeMap::from([(
                    "pt".to_string(),
                    vec![Component {
                        name: "line".into(),
                        multiplicity: m,
                    }],
                )]),
            )
            .unwrap()
        };
        let pt = SuperCycle::single(0, "pt", z(1, 0));
        let theta = mk(Multiplicity::Algebra(FiniteSuperAlgebra::exterior("θ", 1)));
        assert_eq!(
            flat_pullback(&pt, &theta).unwrap(),
            SuperCycle::single(1, "line", z(1, 1))
        );
        let reduced = mk(Multiplicity::Algebra(FiniteSuperAlgebra::field()));
        assert_eq!(
            flat_pullback(&pt, &reduced).unwrap(),
            SuperCycle::single(1, "line", z(1, 0))
        );
        let double = mk(Multiplicity::Algebra(FiniteSuperAlgebra::truncated_polynomial("x", 2)));
        assert_eq!(
            flat_pullback(&pt, &double).unwrap(),
            SuperCycle::single(1, "line", z(2, 0))
        );
        let missing = SuperCycle::single(0, "other", z(1, 0));
        assert!(matches!(
            flat_pullback(&missing, &double),
            Err(CycleError::MissingPullbackData(_))
        ));
    }

    fn p1_embedding(points: &[Point]) -> Embedding {
        Embedding {
            dim: 0,
            points: points.iter().map(|p| (p.clone(), format!("P{p}"))).collect(),
        }
    }

    #[test]
    fn divisor_and_witness_examples() {
        let emb = p1_embedding(&[Point::rational(0), Point::Infinity]);
        let model = SuperCurveModel::free(Base::P1);
        assert!(divisor_cycle(&emb, &model, &rf(&[4], &[1])).unwrap().is_zero());
        let d = divisor_cycle(&emb, &model, &rf(&[0, 1], &[1])).unwrap();
        let alpha = SuperCycle::from_terms(0, [("Pt".to_string(), z(1, 1)), ("Pinf".to_string(), z(-1, -1))]);
        assert_eq!(d, alpha);
        let even = SuperCurveModel::purely_even(Base::P1);
        let d0 = divisor_cycle(&emb, &even, &rf(&[0, 1], &[1])).unwrap();
        assert_eq!(
            d0,
            SuperCycle::from_terms(0, [("Pt".to_string(), z(1, 0)), ("Pinf".to_string(), z(-1, 0))])
        );

        let w = Witness {
            embedding: emb.clone(),
            model: model.clone(),
            g: rf(&[0, 1], &[1]),
        };
        assert!(verify_rational_equivalence(&SuperCycle::zero(0), &[]).unwrap());
        assert!(verify_rational_equivalence(&alpha, std::slice::from_ref(&w)).unwrap());
        assert!(!verify_rational_equivalence(&SuperCycle::single(0, "Pt", z(1, 0)), std::slice::from_ref(&w)).unwrap());
        let mut bad = w;
        bad.model.odd_rank = 2;
        assert!(matches!(
            verify_rational_equivalence(&alpha, &[bad]),
            Err(CycleError::OddDimensionOutOfRange(2))
        ));
        let short = p1_embedding(&[Point::rational(0)]);
        assert!(matches!(
            divisor_cycle(&short, &model, &rf(&[0, 1], &[1])),
            Err(CycleError::UnknownPoint(_))
        ));
    }

    #[test]
    fn composition_multiplies_degrees() {
        let f = curve_map();
        let h = ProperMapData::new(
            f.target.clone(),
            AmbientSpace::new().with("B", 1).with("b", 0),
            BTreeMap::from([
                ("D".to_string(), ("B".to_string(), 3)),
                ("Q".to_string(), ("b".to_string(), 1)),
            ]),
        )
        .unwrap();
        let hf = f.then(&h).unwrap();
        assert_eq!(hf.image("C"), Some(&("B".to_string(), 6)));
        let a = SuperCycle::from_terms(1, [("C".to_string(), z(1, 2)), ("E".to_string(), z(5, 0))]);
        assert_eq!(
            pushforward(&a, &hf).unwrap(),
            pushforward(&pushforward(&a, &f).unwrap(), &h).unwrap()
        );
    }

    #[test]
    fn wire_formats() {
        let c: SuperCycle =
            serde_json::from_str(r#"{"dim":0,"terms":[["a",["1","2"]],["a",["-1","-2"]],["b",["0","3"]]]}"#).unwrap();
        assert_eq!(c, SuperCycle::single(0, "b", z(0, 3)));
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"dim":"0","terms":[["b",["0","3"]]]}"#);
        let f = curve_map();
        assert_eq!(ProperMapData::from_wire(&f.to_wire()).unwrap(), f);
        let pw: PullbackWire = serde_json::from_str(
            r#"{"source":{"L":1},"target":{"p":0},"relative_dim":1,
                "components":[["p","L",{"length":["1","1"]}]]}"#,
        )
        .unwrap();
        let d = FlatPullbackData::from_wire(&pw).unwrap();
        assert_eq!(
            flat_pullback(&SuperCycle::single(0, "p", z(1, 0)), &d).unwrap(),
            SuperCycle::single(1, "L", z(1, 1))
        );
    }

    fn target_points() -> Vec<Point> {
        vec![
            Point::rational(0),
            Point::rational(1),
            Point::rational(2),
            Point::rational(-1),
            Point::Infinity,
        ]
    }

    fn arb_cycle_on(names: Vec<String>, dim: u32) -> impl Strategy<Value = SuperCycle> {
        let n = names.len();
        prop::collection::vec((-4i64..=4, -4i64..=4), n).prop_map(move |cs| {
            SuperCycle::from_terms(dim, names.iter().cloned().zip(cs.into_iter().map(|(e, o)| z(e, o))))
        })
    }

    proptest! {
        #[test]
        fn push_pull_is_rank(alpha in arb_cycle_on(target_points().iter().map(target_name).collect(), 0),
                             curve in (-3i64..=3, -3i64..=3)) {
            let d = DoubleCoverDatum::over(&target_points()).unwrap();
            let lhs = pushforward(&flat_pullback(&alpha, &d.pull).unwrap(), &d.push).unwrap();
            prop_assert_eq!(lhs, alpha.mul_z2(&z(2, 0)));
            let c = SuperCycle::single(1, "Y", z(curve.0, curve.1));
            let lhs = pushforward(&flat_pullback(&c, &d.pull).unwrap(), &d.push).unwrap();
            prop_assert!(lhs.same_as(&c.mul_z2(&z(2, 0))));
        }

        #[test]
        fn base_change_square_commutes(coeffs in prop::collection::vec((-3i64..=3, -3i64..=3), 8)) {
            let d = DoubleCoverDatum::over(&target_points()).unwrap();
            let sq = BaseChangeSquare::from_proper(&d.push).unwrap();
            let names: Vec<String> = d.push.source.names().filter(|(_, &dim)| dim == 0).map(|(n, _)| n.clone()).collect();
            let alpha = SuperCycle::from_terms(0, names.into_iter().zip(coeffs.iter().map(|&(e, o)| z(e, o))));
            let (lhs, rhs) = sq.both_sides(&alpha).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn divisors_push_to_norm_divisors(num in prop::collection::vec(-3i64..=3, 1..4), den in prop::collection::vec(-3i64..=3, 1..3)) {
            let (n, dd) = (Poly::from_ints(&num), Poly::from_ints(&den));
            prop_assume!(!n.is_zero() && !dd.is_zero());
            let g = RationalFunction::new(n, dd).unwrap();
            let pts = DoubleCoverDatum::relevant_points(&g).unwrap();
            let d = DoubleCoverDatum::over(&pts).unwrap();
            let model = SuperCurveModel::free(Base::P1);
            let div = divisor_cycle(&d.source_points, &model, &g).unwrap();
            let ber = crate::curve::ber_of_multiplication(&d.cover, &g.clone().into()).unwrap();
            let expect = divisor_cycle(&d.target_points, &model, &ber).unwrap();
            prop_assert_eq!(pushforward(&div, &d.push).unwrap(), expect);
        }
    }
}
