//! JSON documents for series, quotient images, fields and jets.
//!
//! Every rational is written as a pair of decimal strings. Output is
//! deterministic: series terms are sorted by (grade, tree code).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotients::{MuElement, MuImage, PowerSeriesComp};
use crate::rational::{self, Rational};
use crate::series::TreeSeries;
use crate::trees;
use crate::vectorfields::{FlowJet, Poly, PolyVectorField};

/// `["num", "den"]`.
pub type RationalPair = (String, String);

fn pair(q: &Rational) -> RationalPair {
    rational::to_parts(q)
}

fn unpair(p: &RationalPair) -> Result<Rational> {
    rational::from_parts(&p.0, &p.1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesTerm {
    pub tree: String,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    pub order: usize,
    pub terms: Vec<SeriesTerm>,
}

impl SeriesDoc {
    pub fn from_series(s: &TreeSeries) -> Self {
        let tab = trees::table();
        let terms = s
            .terms()
            .map(|(t, c)| {
                let (num, den) = pair(c);
                SeriesTerm {
                    tree: tab.format_code(t),
                    num,
                    den,
                }
            })
            .collect();
        SeriesDoc {
            order: s.order(),
            terms,
        }
    }

    /// Validates the document. Codes may be non-canonical and repeated
    /// trees are summed.
    pub fn to_series(&self) -> Result<TreeSeries> {
        let tab = trees::table();
        let mut s = TreeSeries::zero(self.order)?;
        for term in &self.terms {
            let t = tab
                .parse_code(&term.tree)
                .map_err(|e| Error::Schema(format!("term {:?}: {e}", term.tree)))?;
            if tab.nodes(t) > self.order {
                return Err(Error::Schema(format!(
                    "tree {:?} has more than {} nodes",
                    term.tree, self.order
                )));
            }
            let c = unpair(&(term.num.clone(), term.den.clone()))?;
            s.add_term(t, c);
        }
        Ok(s)
    }
}

/// `a_1..a_N` of a series under composition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSeriesDoc {
    pub order: usize,
    pub coeffs: Vec<RationalPair>,
}

impl PowerSeriesDoc {
    pub fn from_series(p: &PowerSeriesComp) -> Self {
        PowerSeriesDoc {
            order: p.order(),
            coeffs: p.coeffs().iter().map(pair).collect(),
        }
    }

    pub fn to_series(&self) -> Result<PowerSeriesComp> {
        if self.coeffs.len() != self.order {
            return Err(Error::Schema(format!(
                "expected {} coefficients, found {}",
                self.order,
                self.coeffs.len()
            )));
        }
        let a = self.coeffs.iter().map(unpair).collect::<Result<Vec<_>>>()?;
        PowerSeriesComp::new(a)
    }
}

/// `(λ, f_0..f_{N-1})`. When the single-node coefficient vanishes the
/// document carries `invertible: false`, `λ = 0` and the raw corolla
/// coefficients in place of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuDoc {
    pub order: usize,
    pub lambda: RationalPair,
    pub coeffs: Vec<RationalPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invertible: Option<bool>,
}

impl MuDoc {
    pub fn from_element(m: &MuElement) -> Self {
        MuDoc {
            order: m.order(),
            lambda: pair(m.lambda()),
            coeffs: m.f().iter().map(pair).collect(),
            invertible: None,
        }
    }

    pub fn from_image(image: &MuImage) -> Self {
        match image {
            MuImage::Element(m) => Self::from_element(m),
            MuImage::NonInvertible { corollas } => MuDoc {
                order: corollas.len(),
                lambda: ("0".into(), "1".into()),
                coeffs: corollas.iter().map(pair).collect(),
                invertible: Some(false),
            },
        }
    }

    pub fn to_element(&self) -> Result<MuElement> {
        if self.invertible == Some(false) {
            return Err(Error::NotInvertible);
        }
        if self.coeffs.len() != self.order {
            return Err(Error::Schema(format!(
                "expected {} coefficients, found {}",
                self.order,
                self.coeffs.len()
            )));
        }
        let f = self.coeffs.iter().map(unpair).collect::<Result<Vec<_>>>()?;
        MuElement::new(unpair(&self.lambda)?, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDoc {
    pub exps: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub text: String,
    pub terms: Vec<MonomialDoc>,
}

/// A polynomial field truncated at total degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub dim: usize,
    pub degree: usize,
    pub components: Vec<ComponentDoc>,
}

fn poly_doc(p: &Poly) -> ComponentDoc {
    ComponentDoc {
        text: p.to_string(),
        terms: p
            .terms()
            .map(|(e, c)| {
                let (num, den) = pair(c);
                MonomialDoc {
                    exps: e.to_vec(),
                    num,
                    den,
                }
            })
            .collect(),
    }
}

impl FieldDoc {
    pub fn from_field(f: &PolyVectorField) -> Self {
        FieldDoc {
            dim: f.dim(),
            degree: f.cap(),
            components: f.components().iter().map(poly_doc).collect(),
        }
    }

    pub fn to_field(&self) -> Result<PolyVectorField> {
        if self.components.len() != self.dim {
            return Err(Error::Schema(format!(
                "expected {} components, found {}",
                self.dim,
                self.components.len()
            )));
        }
        let mut comps = Vec::with_capacity(self.dim);
        for c in &self.components {
            let mut p = Poly::zero(self.dim);
            for m in &c.terms {
                if m.exps.len() != self.dim {
                    return Err(Error::Schema("exponent vector of wrong length".into()));
                }
                p.add_term(m.exps.clone(), unpair(&(m.num.clone(), m.den.clone()))?);
            }
            comps.push(p);
        }
        PolyVectorField::new(comps, self.degree)
    }
}

/// Taylor jet of a flow: `coeffs[k-1]` is the vector `c_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetDoc {
    pub dim: usize,
    pub point: Vec<RationalPair>,
    pub coeffs: Vec<Vec<RationalPair>>,
}

impl JetDoc {
    pub fn from_jet(jet: &FlowJet) -> Self {
        JetDoc {
            dim: jet.base.len(),
            point: jet.base.iter().map(pair).collect(),
            coeffs: jet
                .coeffs
                .iter()
                .map(|c| c.iter().map(pair).collect())
                .collect(),
        }
    }

    pub fn to_jet(&self) -> Result<FlowJet> {
        let base = self.point.iter().map(unpair).collect::<Result<Vec<_>>>()?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.iter().map(unpair).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if base.len() != self.dim || coeffs.iter().any(|c| c.len() != self.dim) {
            return Err(Error::Schema("vector of wrong length".into()));
        }
        Ok(FlowJet { base, coeffs })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn series_to_json(s: &TreeSeries) -> String {
    to_json(&SeriesDoc::from_series(s))
}

pub fn series_from_json(text: &str) -> Result<TreeSeries> {
    from_json::<SeriesDoc>(text)?.to_series()
}
