//! Nori graphs and diagrams: flag graphs with an involution, the diagram of a
//! finite category, effective-pairs diagrams of embedding posets, and
//! endomorphism algebras of representations in graded Q-vector spaces.

use crate::cohomology::SuperDim;
use crate::linalg::QMatrix;
use crate::rational::{num_string, q_string, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NoriError {
    #[error("invalid graph: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),
    #[error("composition table is incomplete: {0}")]
    IncompleteCompositionTable(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("representation does not fit the graph: {0}")]
    ShapeMismatch(String),
}

/// Flags `F`, vertices `V`, boundary `∂: F → V` and involution `j: F → F`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoriGraph {
    pub flags: Vec<String>,
    pub vertices: Vec<String>,
    pub boundary: BTreeMap<String, String>,
    pub involution: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vertex_labels: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edge_labels: BTreeMap<String, String>,
}

/// An orbit `{f, j f}`. The id is the name of `f`, the first flag of the
/// orbit in flag order; the edge runs from `∂f` to `∂(j f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: String,
    pub source: String,
    pub target: String,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVerdict {
    pub valid: bool,
    pub violations: Vec<String>,
}

pub fn check_graph(g: &NoriGraph) -> GraphVerdict {
    let mut violations = Vec::new();
    let vertices: BTreeSet<&str> = g.vertices.iter().map(String::as_str).collect();
    if vertices.len() != g.vertices.len() {
        violations.push("duplicate vertex names".to_string());
    }
    let flags: BTreeSet<&str> = g.flags.iter().map(String::as_str).collect();
    if flags.len() != g.flags.len() {
        violations.push("duplicate flag names".to_string());
    }
    for f in &g.flags {
        match g.boundary.get(f) {
            None => violations.push(format!("∂ is undefined on flag {f}")),
            Some(v) if !vertices.contains(v.as_str()) => violations.push(format!("∂({f}) = {v} is not a vertex")),
            _ => {}
        }
        match g.involution.get(f) {
            None => violations.push(format!("j is undefined on flag {f}")),
            Some(h) if !flags.contains(h.as_str()) => violations.push(format!("j({f}) = {h} is not a flag")),
            Some(h) => {
                if g.involution.get(h) != Some(f) {
                    violations.push(format!("j(j({f})) ≠ {f}"));
                }
            }
        }
    }
    for k in g.boundary.keys().chain(g.involution.keys()) {
        if !flags.contains(k.as_str()) {
            violations.push(format!("map defined on unknown flag {k}"));
        }
    }
    GraphVerdict {
        valid: violations.is_empty(),
        violations,
    }
}

impl NoriGraph {
    pub fn edges(&self) -> Result<Vec<Edge>, NoriError> {
        let verdict = check_graph(self);
        if !verdict.valid {
            return Err(NoriError::InvalidGraph(verdict.violations));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for f in &self.flags {
            if seen.contains(f) {
                continue;
            }
            let h = &self.involution[f];
            seen.insert(f.clone());
            seen.insert(h.clone());
            out.push(Edge {
                id: f.clone(),
                source: self.boundary[f].clone(),
                target: self.boundary[h].clone(),
                degenerate: f == h,
            });
        }
        Ok(out)
    }

    pub fn add_vertex(&mut self, v: &str, label: Option<&str>) {
        self.vertices.push(v.to_string());
        if let Some(l) = label {
            self.vertex_labels.insert(v.to_string(), l.to_string());
        }
    }

    /// Adds the edge `id: from → to` as the flags `id` and `id^`.
    pub fn add_edge(&mut self, id: &str, from: &str, to: &str, label: Option<&str>) {
        let back = format!("{id}^");
        self.flags.push(id.to_string());
        self.flags.push(back.clone());
        self.boundary.insert(id.to_string(), from.to_string());
        self.boundary.insert(back.clone(), to.to_string());
        self.involution.insert(id.to_string(), back.clone());
        self.involution.insert(back, id.to_string());
        if let Some(l) = label {
            self.edge_labels.insert(id.to_string(), l.to_string());
        }
    }

    /// Adds a fixed flag at `v`.
    pub fn add_degenerate_edge(&mut self, id: &str, v: &str, label: Option<&str>) {
        self.flags.push(id.to_string());
        self.boundary.insert(id.to_string(), v.to_string());
        self.involution.insert(id.to_string(), id.to_string());
        if let Some(l) = label {
            self.edge_labels.insert(id.to_string(), l.to_string());
        }
    }
}

/// Objects, morphisms `(name, source, target)`, identities and the table
/// `(g, f, g∘f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<(String, String, String)>,
}

impl FiniteCategory {
    /// Objects and identities only.
    pub fn discrete(objects: &[&str]) -> Self {
        Self {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            morphisms: objects
                .iter()
                .map(|o| (format!("id_{o}"), o.to_string(), o.to_string()))
                .collect(),
            identities: objects.iter().map(|o| (o.to_string(), format!("id_{o}"))).collect(),
            composition: objects
                .iter()
                .map(|o| (format!("id_{o}"), format!("id_{o}"), format!("id_{o}")))
                .collect(),
        }
    }

    /// Adds `name: from → to` with the identity compositions.
    pub fn arrow(mut self, name: &str, from: &str, to: &str) -> Self {
        self.morphisms
            .push((name.to_string(), from.to_string(), to.to_string()));
        self.composition
            .push((name.to_string(), self.identities[from].clone(), name.to_string()));
        self.composition
            .push((self.identities[to].clone(), name.to_string(), name.to_string()));
        self
    }

    pub fn compose(mut self, g: &str, f: &str, gf: &str) -> Self {
        self.composition.push((g.to_string(), f.to_string(), gf.to_string()));
        self
    }
}

pub fn category_diagram(c: &FiniteCategory) -> Result<NoriGraph, NoriError> {
    let objects: BTreeSet<&str> = c.objects.iter().map(String::as_str).collect();
    let mut ends: BTreeMap<&str, (&str, &str)> = BTreeMap::new();
    for (m, s, t) in &c.morphisms {
        if !objects.contains(s.as_str()) || !objects.contains(t.as_str()) {
            return Err(NoriError::InvalidCategory(format!("{m}: {s} → {t} has an unknown end")));
        }
        if ends.insert(m, (s, t)).is_some() {
            return Err(NoriError::InvalidCategory(format!("morphism {m} listed twice")));
        }
    }
    let ids: BTreeSet<&str> = c.identities.values().map(String::as_str).collect();
    for o in &c.objects {
        match c.identities.get(o).and_then(|i| ends.get(i.as_str())) {
            Some(&(s, t)) if s == o && t == o => {}
            _ => return Err(NoriError::InvalidCategory(format!("object {o} has no identity"))),
        }
    }
    let mut table: BTreeMap<(&str, &str), &str> = BTreeMap::new();
    for (g, f, gf) in &c.composition {
        let (Some(&(fs, ft)), Some(&(gs, gt)), Some(&(hs, ht))) =
            (ends.get(f.as_str()), ends.get(g.as_str()), ends.get(gf.as_str()))
        else {
            return Err(NoriError::InvalidCategory(format!(
                "{g}∘{f} = {gf} names an unknown morphism"
            )));
        };
        if ft != gs || hs != fs || ht != gt {
            return Err(NoriError::InvalidCategory(format!("{g}∘{f} = {gf} is ill-typed")));
        }
        if let Some(prev) = table.insert((g, f), gf) {
            if prev != gf {
                return Err(NoriError::InvalidCategory(format!("{g}∘{f} has two values")));
            }
        }
    }

    let mut graph = NoriGraph::default();
    for o in &c.objects {
        graph.add_vertex(o, None);
    }
    for (f, fs, ft) in &c.morphisms {
        for (g, gs, gt) in &c.morphisms {
            if ft != gs {
                continue;
            }
            let Some(gf) = table.get(&(g.as_str(), f.as_str())) else {
                return Err(NoriError::IncompleteCompositionTable(format!("{g}∘{f} is missing")));
            };
            let id = format!("{g}.{f}");
            let label = format!("{gf} = {g}∘{f} via {ft}");
            if f == g && ids.contains(f.as_str()) {
                graph.add_degenerate_edge(&id, fs, Some(&label));
            } else {
                graph.add_edge(&id, fs, gt, Some(&label));
            }
        }
    }
    Ok(graph)
}

/// Elements ordered by closed embeddings `a < b`; `good` defaults to all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingPoset {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub good: Option<Vec<String>>,
}

impl EmbeddingPoset {
    pub fn chain(names: &[&str]) -> Self {
        Self {
            elements: names.iter().map(|s| s.to_string()).collect(),
            relations: names.windows(2).map(|w| (w[0].to_string(), w[1].to_string())).collect(),
            good: None,
        }
    }

    /// Transitive closure of the relations as a strict order matrix.
    pub fn order(&self) -> Result<Vec<Vec<bool>>, NoriError> {
        let n = self.elements.len();
        let index: BTreeMap<&str, usize> = self.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        if index.len() != n {
            return Err(NoriError::InvalidPoset("duplicate elements".into()));
        }
        let mut lt = vec![vec![false; n]; n];
        for (a, b) in &self.relations {
            let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) else {
                return Err(NoriError::InvalidPoset(format!("{a} < {b} names an unknown element")));
            };
            lt[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if lt[i][k] {
                    for j in 0..n {
                        if lt[k][j] {
                            lt[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| lt[i][i]) {
            return Err(NoriError::InvalidPoset(format!("{} lies on a cycle", self.elements[i])));
        }
        Ok(lt)
    }

    fn good_mask(&self) -> Result<Vec<bool>, NoriError> {
        match &self.good {
            None => Ok(vec![true; self.elements.len()]),
            Some(g) => {
                for x in g {
                    if !self.elements.contains(x) {
                        return Err(NoriError::InvalidPoset(format!("good element {x} is unknown")));
                    }
                }
                Ok(self.elements.iter().map(|e| g.contains(e)).collect())
            }
        }
    }
}

pub fn pair_vertex(s1: &str, s2: &str, i: usize) -> String {
    format!("({s1},{s2},{i})")
}

/// Vertices `(S₁, S₂, i)` for good `S₂ < S₁`; an `h*` edge
/// `(S₁', S₂', i) → (S₁, S₂, i)` whenever `S₁ ≤ S₁'` and `S₂ ≤ S₂'`; a `∂`
/// edge `(S₂, S₃, i) → (S₁, S₂, i+1)` for each chain `S₃ < S₂ < S₁`.
pub fn effective_pairs_diagram(p: &EmbeddingPoset, imax: usize) -> Result<NoriGraph, NoriError> {
    let lt = p.order()?;
    let good = p.good_mask()?;
    let n = p.elements.len();
    let le = |a: usize, b: usize| a == b || lt[a][b];
    let name = |i: usize| p.elements[i].as_str();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| good[a] && good[b] && lt[b][a])
        .collect();

    let mut g = NoriGraph::default();
    for i in 0..=imax {
        for &(a, b) in &pairs {
            g.add_vertex(&pair_vertex(name(a), name(b), i), None);
        }
    }
    for i in 0..=imax {
        for &(a, b) in &pairs {
            for &(a2, b2) in &pairs {
                if (a, b) != (a2, b2) && le(a, a2) && le(b, b2) {
                    let src = pair_vertex(name(a2), name(b2), i);
                    let dst = pair_vertex(name(a), name(b), i);
                    g.add_edge(&format!("h*:{src}->{dst}"), &src, &dst, Some("h*"));
                }
            }
        }
    }
    for i in 0..imax {
        for &(s2, s3) in &pairs {
            for &(s1, mid) in &pairs {
                if mid == s2 {
                    let src = pair_vertex(name(s2), name(s3), i);
                    let dst = pair_vertex(name(s1), name(s2), i + 1);
                    g.add_edge(&format!("∂:{src}->{dst}"), &src, &dst, Some("∂"));
                }
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dim(#[serde(with = "num_string")] pub usize);

/// Matrices as rows of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixWire(pub Vec<Vec<Entry>>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry(#[serde(with = "q_string")] pub Q);

impl MatrixWire {
    /// `cols` fixes the shape of an empty row list.
    pub fn to_matrix(&self, cols: usize) -> Result<QMatrix, NoriError> {
        let rows: Vec<Vec<Q>> = self.0.iter().map(|r| r.iter().map(|e| e.0.clone()).collect()).collect();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(NoriError::ShapeMismatch(format!("matrix rows must have length {cols}")));
        }
        Ok(QMatrix::from_rows(cols, rows))
    }

    pub fn from_matrix(m: &QMatrix) -> Self {
        Self(
            (0..m.rows())
                .map(|i| m.row(i).iter().cloned().map(Entry).collect())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepWire {
    pub dims: BTreeMap<String, (Dim, Dim)>,
    #[serde(default)]
    pub edges: Vec<(String, MatrixWire)>,
}

/// Vertex spaces `Q^{e|o}` (even basis vectors first) and an even matrix
/// per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramRep {
    pub dims: BTreeMap<String, (usize, usize)>,
    pub edges: BTreeMap<String, QMatrix>,
}

impl DiagramRep {
    pub fn from_wire(w: &RepWire) -> Result<Self, NoriError> {
        let dims: BTreeMap<String, (usize, usize)> = w.dims.iter().map(|(v, (e, o))| (v.clone(), (e.0, o.0))).collect();
        let mut edges = BTreeMap::new();
        for (id, m) in &w.edges {
            let cols = m.0.first().map_or(0, Vec::len);
            if edges.insert(id.clone(), m.to_matrix(cols)?).is_some() {
                return Err(NoriError::ShapeMismatch(format!("edge {id} given twice")));
            }
        }
        Ok(Self { dims, edges })
    }

    pub fn to_wire(&self) -> RepWire {
        RepWire {
            dims: self
                .dims
                .iter()
                .map(|(v, &(e, o))| (v.clone(), (Dim(e), Dim(o))))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(id, m)| (id.clone(), MatrixWire::from_matrix(m)))
                .collect(),
        }
    }

    fn total(&self, v: &str) -> usize {
        let (e, o) = self.dims[v];
        e + o
    }

    /// Shapes, evenness, identity on degenerate edges; returns the edges
    /// that constrain endomorphisms.
    fn check(&self, g: &NoriGraph) -> Result<Vec<(Edge, QMatrix)>, NoriError> {
        let edges = g.edges()?;
        for v in &g.vertices {
            if !self.dims.contains_key(v) {
                return Err(NoriError::ShapeMismatch(format!("no dimension for vertex {v}")));
            }
        }
        for id in self.edges.keys() {
            if !edges.iter().any(|e| &e.id == id) {
                return Err(NoriError::ShapeMismatch(format!("{id} is not an edge of the graph")));
            }
        }
        let mut out = Vec::new();
        for e in edges {
            let (ns, nt) = (self.total(&e.source), self.total(&e.target));
            let m = match self.edges.get(&e.id) {
                Some(m) => m.clone(),
                None if e.degenerate => QMatrix::identity(ns),
                None => return Err(NoriError::ShapeMismatch(format!("no matrix for edge {}", e.id))),
            };
            let (m_rows, m_cols) = (m.rows(), if m.rows() == 0 { ns } else { m.cols() });
            if m_rows != nt || m_cols != ns {
                return Err(NoriError::ShapeMismatch(format!(
                    "edge {} needs a {nt}×{ns} matrix, got {}×{}",
                    e.id,
                    m.rows(),
                    m.cols()
                )));
            }
            let (es, et) = (self.dims[&e.source].0, self.dims[&e.target].0);
            for i in 0..nt {
                for j in 0..ns {
                    if (i < et) != (j < es) && !m[(i, j)].is_zero() {
                        return Err(NoriError::ShapeMismatch(format!("edge {} mixes parities", e.id)));
                    }
                }
            }
            if e.degenerate {
                if m != QMatrix::identity(ns) {
                    return Err(NoriError::ShapeMismatch(format!(
                        "degenerate edge {} must carry the identity",
                        e.id
                    )));
                }
                continue;
            }
            out.push((e, m));
        }
        Ok(out)
    }
}

/// A basis of `{(A_v) : A_target·e = e·A_source}` split into parity
/// preserving (even) and parity reversing (odd) solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndAlgebra {
    pub dimension: SuperDim,
    pub even_basis: Vec<BTreeMap<String, QMatrix>>,
    pub odd_basis: Vec<BTreeMap<String, QMatrix>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndAlgebraWire {
    pub dimension: SuperDim,
    pub even_basis: Vec<BTreeMap<String, MatrixWire>>,
    pub odd_basis: Vec<BTreeMap<String, MatrixWire>>,
}

impl EndAlgebra {
    pub fn to_wire(&self) -> EndAlgebraWire {
        let conv = |b: &Vec<BTreeMap<String, QMatrix>>| {
            b.iter()
                .map(|t| t.iter().map(|(v, m)| (v.clone(), MatrixWire::from_matrix(m))).collect())
                .collect()
        };
        EndAlgebraWire {
            dimension: self.dimension,
            even_basis: conv(&self.even_basis),
            odd_basis: conv(&self.odd_basis),
        }
    }
}

fn solve_parity(
    rep: &DiagramRep,
    vertices: &[String],
    edges: &[(Edge, QMatrix)],
    odd: bool,
) -> Vec<BTreeMap<String, QMatrix>> {
    let mut var: BTreeMap<(&str, usize, usize), usize> = BTreeMap::new();
    for v in vertices {
        let (e, o) = rep.dims[v];
        for r in 0..e + o {
            for c in 0..e + o {
                if ((r < e) != (c < e)) == odd {
                    let k = var.len();
                    var.insert((v.as_str(), r, c), k);
                }
            }
        }
    }
    let mut rows = Vec::new();
    for (e, m) in edges {
        let (ns, nt) = (rep.total(&e.source), rep.total(&e.target));
        for i in 0..nt {
            for j in 0..ns {
                let mut row = vec![Q::zero(); var.len()];
                for k in 0..nt {
                    if let Some(&x) = var.get(&(e.target.as_str(), i, k)) {
                        row[x] += &m[(k, j)];
                    }
                }
                for k in 0..ns {
                    if let Some(&x) = var.get(&(e.source.as_str(), k, j)) {
                        row[x] -= &m[(i, k)];
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let null = if rows.is_empty() {
        (0..var.len()).map(|i| crate::linalg::unit(var.len(), i)).collect()
    } else {
        QMatrix::from_rows(var.len(), rows).nullspace()
    };
    null.into_iter()
        .map(|sol| {
            let mut out: BTreeMap<String, QMatrix> = vertices
                .iter()
                .map(|v| (v.clone(), QMatrix::zeros(rep.total(v), rep.total(v))))
                .collect();
            for (&(v, r, c), &x) in &var {
                out.get_mut(v).unwrap()[(r, c)] = sol[x].clone();
            }
            out
        })
        .collect()
}

pub fn end_algebra(g: &NoriGraph, rep: &DiagramRep) -> Result<EndAlgebra, NoriError> {
    let edges = rep.check(g)?;
    let even_basis = solve_parity(rep, &g.vertices, &edges, false);
    let odd_basis = solve_parity(rep, &g.vertices, &edges, true);
    Ok(EndAlgebra {
        dimension: SuperDim::new(even_basis.len() as u64, odd_basis.len() as u64),
        even_basis,
        odd_basis,
    })
}

/// `true` when `(A_v)` commutes with every edge matrix.
pub fn is_endomorphism(g: &NoriGraph, rep: &DiagramRep, a: &BTreeMap<String, QMatrix>) -> Result<bool, NoriError> {
    let edges = rep.check(g)?;
    Ok(edges.iter().all(|(e, m)| a[&e.target].mul(m) == m.mul(&a[&e.source])))
}

pub fn identity_tuple(rep: &DiagramRep) -> BTreeMap<String, QMatrix> {
    rep.dims
        .iter()
        .map(|(v, &(e, o))| (v.clone(), QMatrix::identity(e + o)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;
    use crate::rational::q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn check_graph_examples() {
        assert!(check_graph(&NoriGraph::default()).valid);
        let mut g = NoriGraph::default();
        g.add_vertex("v", None);
        g.add_degenerate_edge("f", "v", None);
        assert!(check_graph(&g).valid);
        assert!(g.edges().unwrap()[0].degenerate);

        let mut cyc = NoriGraph::default();
        cyc.add_vertex("v", None);
        for (a, b) in [("a", "b"), ("b", "c"), ("c", "a")] {
            cyc.flags.push(a.into());
            cyc.boundary.insert(a.into(), "v".into());
            cyc.involution.insert(a.into(), b.into());
        }
        let v = check_graph(&cyc);
        assert!(!v.valid);
        assert_eq!(v.violations.len(), 3);

        let mut partial = g.clone();
        partial.flags.push("loose".into());
        assert!(!check_graph(&partial).valid);
    }

    fn edge_labels(g: &NoriGraph) -> Vec<(String, String, bool)> {
        g.edges()
            .unwrap()
            .into_iter()
            .map(|e| (e.source, e.target, e.degenerate))
            .collect()
    }

    #[test]
    fn category_examples() {
        let one = category_diagram(&FiniteCategory::discrete(&["X"])).unwrap();
        assert_eq!(one.vertices, vec!["X"]);
        assert_eq!(edge_labels(&one), vec![("X".into(), "X".into(), true)]);

        let arrow = FiniteCategory::discrete(&["X", "Y"]).arrow("a", "X", "Y");
        let g = category_diagram(&arrow).unwrap();
        let xy: Vec<_> = g
            .edges()
            .unwrap()
            .into_iter()
            .filter(|e| e.source == "X" && e.target == "Y")
            .collect();
        let ids: BTreeSet<&str> = xy.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, BTreeSet::from(["a.id_X", "id_Y.a"]));
        assert_eq!(g.edges().unwrap().iter().filter(|e| e.degenerate).count(), 2);

        let chain = FiniteCategory::discrete(&["X", "Z", "Y"])
            .arrow("f", "X", "Z")
            .arrow("g", "Z", "Y")
            .arrow("gf", "X", "Y")
            .compose("g", "f", "gf");
        let g = category_diagram(&chain).unwrap();
        let two_step = g.edges().unwrap().into_iter().find(|e| e.id == "g.f").unwrap();
        assert_eq!((two_step.source.as_str(), two_step.target.as_str()), ("X", "Y"));
        assert!(check_graph(&g).valid);

        let broken = FiniteCategory::discrete(&["X", "Z", "Y"])
            .arrow("f", "X", "Z")
            .arrow("g", "Z", "Y")
            .arrow("gf", "X", "Y");
        assert!(matches!(
            category_diagram(&broken),
            Err(NoriError::IncompleteCompositionTable(_))
        ));
    }

    #[test]
    fn effective_pairs_examples() {
        let two = effective_pairs_diagram(&EmbeddingPoset::chain(&["a", "b"]), 0).unwrap();
        assert_eq!(two.vertices, vec!["(b,a,0)"]);
        assert!(two.flags.is_empty());

        let three = effective_pairs_diagram(&EmbeddingPoset::chain(&["a", "b", "c"]), 1).unwrap();
        assert!(check_graph(&three).valid);
        let edges = three.edges().unwrap();
        assert!(edges
            .iter()
            .any(|e| e.source == "(b,a,0)" && e.target == "(c,b,1)" && three.edge_labels[&e.id] == "∂"));
        assert_eq!(edges.iter().filter(|e| three.edge_labels[&e.id] == "∂").count(), 1);

        let empty = EmbeddingPoset {
            elements: vec![],
            relations: vec![],
            good: None,
        };
        assert_eq!(effective_pairs_diagram(&empty, 3).unwrap(), NoriGraph::default());

        let mut bad = EmbeddingPoset::chain(&["a", "b"]);
        bad.relations.push(("b".into(), "a".into()));
        assert!(matches!(
            effective_pairs_diagram(&bad, 0),
            Err(NoriError::InvalidPoset(_))
        ));

        let mut picky = EmbeddingPoset::chain(&["a", "b", "c"]);
        picky.good = Some(vec!["a".into(), "c".into()]);
        assert_eq!(effective_pairs_diagram(&picky, 0).unwrap().vertices, vec!["(c,a,0)"]);
    }

    fn rep(dims: &[(&str, usize, usize)], edges: &[(&str, Vec<Vec<i64>>)]) -> DiagramRep {
        DiagramRep {
            dims: dims.iter().map(|&(v, e, o)| (v.to_string(), (e, o))).collect(),
            edges: edges
                .iter()
                .map(|(id, rows)| {
                    let cols = rows.first().map_or(0, Vec::len);
                    (
                        id.to_string(),
                        QMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()),
                    )
                })
                .collect(),
        }
    }

    fn two_vertices() -> NoriGraph {
        let mut g = NoriGraph::default();
        g.add_vertex("u", None);
        g.add_vertex("v", None);
        g.add_edge("e", "u", "v", None);
        g
    }

    #[test]
    fn end_algebra_examples() {
        let mut g = NoriGraph::default();
        g.add_vertex("v", None);
        let r = rep(&[("v", 1, 1)], &[]);
        assert_eq!(end_algebra(&g, &r).unwrap().dimension, SuperDim::new(2, 2));

        let g = two_vertices();
        let id = rep(&[("u", 1, 0), ("v", 1, 0)], &[("e", vec![vec![1]])]);
        assert_eq!(end_algebra(&g, &id).unwrap().dimension, SuperDim::new(1, 0));
        let zero = rep(&[("u", 1, 0), ("v", 1, 0)], &[("e", vec![vec![0]])]);
        assert_eq!(end_algebra(&g, &zero).unwrap().dimension, SuperDim::new(2, 0));

        let wrong = rep(&[("u", 1, 0), ("v", 2, 0)], &[("e", vec![vec![1]])]);
        assert!(matches!(end_algebra(&g, &wrong), Err(NoriError::ShapeMismatch(_))));
        let mixed = rep(&[("u", 1, 1), ("v", 1, 1)], &[("e", vec![vec![1, 1], vec![0, 1]])]);
        assert!(matches!(end_algebra(&g, &mixed), Err(NoriError::ShapeMismatch(_))));
        let missing = rep(&[("u", 1, 0), ("v", 1, 0)], &[]);
        assert!(matches!(end_algebra(&g, &missing), Err(NoriError::ShapeMismatch(_))));
    }

    #[test]
    fn rep_json_round_trip() {
        let w: RepWire =
            serde_json::from_str(r#"{"dims": {"u": ["1", "0"], "v": [1, 0]}, "edges": [["e", [["1/2"]]]]}"#).unwrap();
        let r = DiagramRep::from_wire(&w).unwrap();
        assert_eq!(r.edges["e"][(0, 0)], crate::rational::q_frac(1, 2));
        assert_eq!(DiagramRep::from_wire(&r.to_wire()).unwrap(), r);
        let g: NoriGraph = serde_json::from_str(
            r#"{"flags": ["e", "e^"], "vertices": ["u", "v"], "boundary": {"e": "u", "e^": "v"}, "involution": {"e": "e^", "e^": "e"}}"#,
        )
        .unwrap();
        assert_eq!(g, two_vertices());
    }

    /// Random graph on ≤ 4 vertices with ≤ 2|2 spaces and even edge matrices
    /// with entries in {-1, 0, 1}; `extra` more edges are appended last.
    fn random_diagram(rng: &mut ChaCha8Rng, extra: usize) -> (NoriGraph, DiagramRep, usize) {
        let nv = rng.gen_range(1..=4);
        let mut g = NoriGraph::default();
        let mut r = DiagramRep {
            dims: BTreeMap::new(),
            edges: BTreeMap::new(),
        };
        for i in 0..nv {
            let v = format!("v{i}");
            g.add_vertex(&v, None);
            r.dims.insert(v, (rng.gen_range(0..=2), rng.gen_range(0..=2)));
        }
        let ne = rng.gen_range(0..=4);
        for k in 0..ne + extra {
            let (s, t) = (
                format!("v{}", rng.gen_range(0..nv)),
                format!("v{}", rng.gen_range(0..nv)),
            );
            let id = format!("e{k}");
            g.add_edge(&id, &s, &t, None);
            let ((es, os), (et, ot)) = (r.dims[&s], r.dims[&t]);
            let mut m = QMatrix::zeros(et + ot, es + os);
            for i in 0..et + ot {
                for j in 0..es + os {
                    if (i < et) == (j < es) {
                        m[(i, j)] = q(rng.gen_range(-1..=1));
                    }
                }
            }
            r.edges.insert(id, m);
        }
        (g, r, ne)
    }

    fn flatten(t: &BTreeMap<String, QMatrix>) -> Vec<Q> {
        t.values()
            .flat_map(|m| (0..m.rows()).flat_map(move |i| m.row(i).to_vec()))
            .collect()
    }

    #[test]
    fn end_algebra_is_closed_under_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let (g, r, _) = random_diagram(&mut rng, 0);
            let alg = end_algebra(&g, &r).unwrap();
            let all: Vec<_> = alg.even_basis.iter().chain(&alg.odd_basis).collect();
            let n = flatten(&identity_tuple(&r)).len();
            let span = Subspace::span(n, all.iter().map(|t| flatten(t)));
            assert_eq!(span.dim(), all.len());
            assert!(span.contains(&flatten(&identity_tuple(&r))));
            for a in &all {
                for b in &all {
                    let prod: BTreeMap<String, QMatrix> = a.iter().map(|(v, m)| (v.clone(), m.mul(&b[v]))).collect();
                    assert!(span.contains(&flatten(&prod)));
                }
            }
        }
    }

    #[test]
    fn adding_edges_never_grows_the_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let (g, r, ne) = random_diagram(&mut rng, 2);
            let full = end_algebra(&g, &r).unwrap().dimension;
            let mut sub_g = g.clone();
            let mut sub_r = r.clone();
            for k in ne..ne + 2 {
                let id = format!("e{k}");
                sub_g.flags.retain(|f| f != &id && f != &format!("{id}^"));
                sub_g.boundary.retain(|f, _| sub_g.flags.contains(f));
                sub_g.involution.retain(|f, _| sub_g.flags.contains(f));
                sub_r.edges.remove(&id);
            }
            let sub = end_algebra(&sub_g, &sub_r).unwrap().dimension;
            assert!(full.even <= sub.even && full.odd <= sub.odd, "{full} vs {sub}");
        }
    }

    #[test]
    fn invertible_connected_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut tried = 0;
        while tried < 20 {
            let nv = rng.gen_range(1..=4);
            let (e, o) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let mut g = NoriGraph::default();
            let mut r = DiagramRep {
                dims: BTreeMap::new(),
                edges: BTreeMap::new(),
            };
            for i in 0..nv {
                g.add_vertex(&format!("v{i}"), None);
                r.dims.insert(format!("v{i}"), (e, o));
            }
            // a path plus random invertible upper-triangular matrices
            for i in 1..nv {
                let id = format!("e{i}");
                g.add_edge(&id, &format!("v{}", i - 1), &format!("v{i}"), None);
                let mut m = QMatrix::identity(e + o);
                for a in 0..e + o {
                    for b in a + 1..e + o {
                        if (a < e) == (b < e) {
                            m[(a, b)] = q(rng.gen_range(-2..=2));
                        }
                    }
                }
                r.edges.insert(id, m);
            }
            let d = end_algebra(&g, &r).unwrap().dimension;
            assert!(d.even as usize <= (e + o) * (e + o));
            tried += 1;
        }
    }

    #[test]
    fn effective_pairs_graphs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(0..=5);
            let elements: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
            let mut relations = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.4) {
                        relations.push((elements[i].clone(), elements[j].clone()));
                    }
                }
            }
            let good = Some(elements.iter().filter(|_| rng.gen_bool(0.8)).cloned().collect());
            let p = EmbeddingPoset {
                elements,
                relations,
                good,
            };
            let g = effective_pairs_diagram(&p, rng.gen_range(0..=2)).unwrap();
            assert!(check_graph(&g).valid);
        }
    }
}
