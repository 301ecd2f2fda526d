//! Hodge numbers of split supercurves `O_X ⊕ ΠL` from line-bundle cohomology
//! on the underlying curve, and the Frölicher comparison with Betti numbers.

use super::CohomologyError;
use crate::rational::num_string;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A line bundle on a curve of genus `g`, described by what is known about
/// its cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LineBundle {
    Trivial,
    Canonical,
    Generic {
        #[serde(with = "num_string")]
        degree: i64,
    },
    Explicit {
        #[serde(with = "num_string")]
        degree: i64,
        #[serde(with = "num_string")]
        h0: i64,
    },
}

impl LineBundle {
    pub fn degree(&self, g: u32) -> i64 {
        match *self {
            LineBundle::Trivial => 0,
            LineBundle::Canonical => 2 * g as i64 - 2,
            LineBundle::Generic { degree } | LineBundle::Explicit { degree, .. } => degree,
        }
    }
}

/// `(h⁰, h¹)` of a line bundle on a curve of genus `g`.
pub fn line_cohomology(g: u32, l: &LineBundle) -> Result<(i64, i64), CohomologyError> {
    let g = g as i64;
    let d = l.degree(g as u32);
    let chi = d - g + 1;
    let h0 = match *l {
        LineBundle::Trivial => 1,
        LineBundle::Canonical => g,
        LineBundle::Generic { degree } => {
            if g >= 2 && (0..g).contains(&degree) {
                return Err(CohomologyError::AmbiguousGenericity {
                    degree,
                    genus: g as u32,
                });
            }
            chi.max(0)
        }
        LineBundle::Explicit { degree, h0 } => {
            if h0 < 0 || h0 < chi {
                return Err(CohomologyError::InconsistentDescriptor(format!(
                    "h0 = {h0} for degree {degree} on genus {g} would give h1 = {} < 0 or h0 < 0",
                    h0 - chi
                )));
            }
            if degree < 0 && h0 > 0 {
                return Err(CohomologyError::InconsistentDescriptor(format!(
                    "a line bundle of negative degree {degree} has no sections"
                )));
            }
            if degree > 2 * g - 2 && h0 != chi {
                return Err(CohomologyError::InconsistentDescriptor(format!(
                    "degree {degree} > 2g−2 forces h0 = {chi}"
                )));
            }
            h0
        }
    };
    Ok((h0, h0 - chi))
}

/// `L`, `L²` and `L ⊗ Ω`. The last two are derived from `L` unless given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeInput {
    #[serde(with = "num_string")]
    pub genus: u32,
    pub l: LineBundle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_squared: Option<LineBundle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_omega: Option<LineBundle>,
}

impl HodgeInput {
    pub fn new(genus: u32, l: LineBundle) -> Self {
        Self {
            genus,
            l,
            l_squared: None,
            l_omega: None,
        }
    }

    fn derived(&self) -> Result<(LineBundle, LineBundle), CohomologyError> {
        let g = self.genus as i64;
        let (sq, om) = match self.l {
            LineBundle::Trivial => (LineBundle::Trivial, LineBundle::Canonical),
            LineBundle::Canonical if g == 1 => (LineBundle::Trivial, LineBundle::Trivial),
            LineBundle::Canonical => (
                LineBundle::Generic { degree: 4 * g - 4 },
                LineBundle::Generic { degree: 4 * g - 4 },
            ),
            LineBundle::Generic { degree } => (
                LineBundle::Generic { degree: 2 * degree },
                LineBundle::Generic {
                    degree: degree + 2 * g - 2,
                },
            ),
            LineBundle::Explicit { .. } => {
                let (Some(sq), Some(om)) = (self.l_squared, self.l_omega) else {
                    return Err(CohomologyError::MissingDescriptor(
                        "an explicit L needs explicit descriptors for L² and L⊗Ω".into(),
                    ));
                };
                (sq, om)
            }
        };
        let sq = self.l_squared.unwrap_or(sq);
        let om = self.l_omega.unwrap_or(om);
        let d = self.l.degree(self.genus);
        if sq.degree(self.genus) != 2 * d {
            return Err(CohomologyError::InconsistentDescriptor(format!(
                "L² must have degree {}",
                2 * d
            )));
        }
        if om.degree(self.genus) != d + 2 * g - 2 {
            return Err(CohomologyError::InconsistentDescriptor(format!(
                "L⊗Ω must have degree {}",
                d + 2 * g - 2
            )));
        }
        Ok((sq, om))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SuperDim {
    pub even: u64,
    pub odd: u64,
}

impl SuperDim {
    pub fn new(even: u64, odd: u64) -> Self {
        Self { even, odd }
    }

    pub fn total(&self) -> u64 {
        self.even + self.odd
    }
}

impl fmt::Display for SuperDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.even, self.odd)
    }
}

impl Serialize for SuperDim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.even.to_string(), self.odd.to_string()].serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeTable {
    pub genus: u32,
    /// `h^{p,q}` for `p, q ∈ {0, 1}`.
    pub hpq: BTreeMap<(u8, u8), SuperDim>,
    pub betti: [u64; 3],
}

impl HodgeTable {
    pub fn h(&self, p: u8, q: u8) -> SuperDim {
        self.hpq[&(p, q)]
    }
}

fn nonneg(x: i64) -> u64 {
    u64::try_from(x).expect("cohomology dimensions are nonnegative")
}

/// Hodge numbers from `Ω_X ≃ (Ω ⊕ L²) ⊕ Π(L⊗Ω ⊕ L)` and `O_X = O ⊕ ΠL`.
/// The even part of `h^{0,1}` is `g + h¹(L)`.
pub fn hodge_table(input: &HodgeInput) -> Result<HodgeTable, CohomologyError> {
    let g = input.genus;
    let (sq, om) = input.derived()?;
    let o = line_cohomology(g, &LineBundle::Trivial)?;
    let l = line_cohomology(g, &input.l)?;
    let w = line_cohomology(g, &LineBundle::Canonical)?;
    let l2 = line_cohomology(g, &sq)?;
    let lw = line_cohomology(g, &om)?;
    let mut hpq = BTreeMap::new();
    hpq.insert((0, 0), SuperDim::new(nonneg(o.0), nonneg(l.0)));
    hpq.insert((0, 1), SuperDim::new(nonneg(o.1 + l.1), nonneg(l.1)));
    hpq.insert((1, 0), SuperDim::new(nonneg(w.0 + l2.0), nonneg(lw.0 + l.0)));
    hpq.insert((1, 1), SuperDim::new(nonneg(w.1 + l2.1), nonneg(lw.1 + l.1)));
    Ok(HodgeTable {
        genus: g,
        hpq,
        betti: [1, 2 * g as u64, 1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DegenerateAtE1Compatible,
    Incompatible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub n: u64,
    pub betti: u64,
    pub even_sum: u64,
    pub total_sum: u64,
    pub matches_even: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrolicherReport {
    pub degrees: Vec<DegreeComparison>,
    pub verdict: Verdict,
}

/// Compares `b_n` with `Σ_{p+q=n} h^{p,q}₊` for `n ∈ {0, 1}`; any mismatch
/// rules out degeneration at the first page with an even Hodge splitting.
pub fn frolicher_report(t: &HodgeTable) -> FrolicherReport {
    let degrees: Vec<DegreeComparison> = (0u8..=1)
        .map(|n| {
            let entries: Vec<SuperDim> = (0..=n).map(|p| t.h(p, n - p)).collect();
            let even_sum = entries.iter().map(|e| e.even).sum();
            let total_sum = entries.iter().map(SuperDim::total).sum();
            let betti = t.betti[n as usize];
            DegreeComparison {
                n: n as u64,
                betti,
                even_sum,
                total_sum,
                matches_even: betti == even_sum,
            }
        })
        .collect();
    let verdict = if degrees.iter().all(|d| d.matches_even) {
        Verdict::DegenerateAtE1Compatible
    } else {
        Verdict::Incompatible
    };
    FrolicherReport { degrees, verdict }
}

/// Integral-form table: `h^{p,q}` placed at `(p, −q)`, superdimensions kept.
pub fn integral_forms_table(t: &HodgeTable) -> BTreeMap<(i32, i32), SuperDim> {
    t.hpq.iter().map(|(&(p, q), &d)| ((p as i32, -(q as i32)), d)).collect()
}

/// `{hpq: {"p,q": [e, o]…}, betti: […], frolicher: verdict}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HodgeRecord {
    pub genus: String,
    pub hpq: BTreeMap<String, SuperDim>,
    pub betti: Vec<String>,
    pub frolicher: Verdict,
    pub comparisons: Vec<DegreeComparison>,
    pub integral_forms: BTreeMap<String, SuperDim>,
}

impl HodgeRecord {
    pub fn new(t: &HodgeTable) -> Self {
        let report = frolicher_report(t);
        Self {
            genus: t.genus.to_string(),
            hpq: t.hpq.iter().map(|((p, q), d)| (format!("{p},{q}"), *d)).collect(),
            betti: t.betti.iter().map(u64::to_string).collect(),
            frolicher: report.verdict,
            comparisons: report.degrees,
            integral_forms: integral_forms_table(t)
                .into_iter()
                .map(|((p, q), d)| (format!("{p},{q}"), d))
                .collect(),
        }
    }
}

/// Aligned text rendering.
pub fn render_table(t: &HodgeTable) -> String {
    let mut out = format!("genus {}\n", t.genus);
    out.push_str(&format!("{:>8}{:>10}{:>10}\n", "", "q=0", "q=1"));
    for p in 0..=1u8 {
        out.push_str(&format!(
            "{:>8}{:>10}{:>10}\n",
            format!("p={p}"),
            t.h(p, 0).to_string(),
            t.h(p, 1).to_string()
        ));
    }
    out.push_str(&format!("betti {:?}\n", t.betti));
    let r = frolicher_report(t);
    for d in &r.degrees {
        out.push_str(&format!(
            "n={}: b={} even-sum={} total-sum={}\n",
            d.n, d.betti, d.even_sum, d.total_sum
        ));
    }
    out.push_str(&format!(
        "frolicher: {}\n",
        match r.verdict {
            Verdict::DegenerateAtE1Compatible => "degenerate-at-E1-compatible",
            Verdict::Incompatible => "incompatible",
        }
    ));
    out
}
