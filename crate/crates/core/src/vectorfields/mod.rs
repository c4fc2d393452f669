//! Polynomial vector fields as a pre-Lie algebra, and the action of tree
//! series on them.
//!
//! The product is `(F ← G)_i = Σ_j G_j ∂_j F_i`. A basis tree `t` with root
//! subtrees `t_1..t_k` evaluates at `F` to
//! `Σ_{j_1..j_k} Π_a E(t_a)_{j_a} · ∂_{j_1}⋯∂_{j_k} F_i`.
//! Fields whose monomials all have degree at least 2 form a complete
//! filtered algebra, so any tree series acts on them exactly after
//! truncation at a fixed degree.

mod parse;
mod poly;

use std::collections::HashMap;

use num::bigint::BigInt;
use num::traits::One;

pub use parse::{parse_components, parse_point, parse_poly};
pub use poly::Poly;

use crate::error::{Error, Result};
use crate::group::log_star;
use crate::rational::{self, Rational};
use crate::series::TreeSeries;
use crate::trees::{self, TreeId};

/// `Σ_i F_i ∂_i` with every component truncated at total degree `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    cap: usize,
    comps: Vec<Poly>,
}

impl PolyVectorField {
    pub fn new(comps: Vec<Poly>, cap: usize) -> Result<Self> {
        let dim = comps.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        if let Some(p) = comps.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: p.dim(),
                right: dim,
            });
        }
        Ok(PolyVectorField {
            cap,
            comps: comps.iter().map(|p| p.truncate(cap)).collect(),
        })
    }

    pub fn zero(dim: usize, cap: usize) -> Self {
        PolyVectorField {
            cap,
            comps: vec![Poly::zero(dim); dim],
        }
    }

    /// Reads `;`-separated component expressions.
    pub fn parse(text: &str, dim: usize, cap: usize) -> Result<Self> {
        Self::new(parse_components(text, dim)?, cap)
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Minimum total degree over all monomials; `None` for the zero field.
    pub fn valuation(&self) -> Option<usize> {
        self.comps.iter().filter_map(Poly::valuation).min()
    }

    pub fn degree(&self) -> Option<usize> {
        self.comps.iter().filter_map(Poly::degree).max()
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        PolyVectorField {
            cap,
            comps: self.comps.iter().map(|p| p.truncate(cap)).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        if self.cap != other.cap {
            return Err(Error::OrderMismatch {
                left: self.cap,
                right: other.cap,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(PolyVectorField {
            cap: self.cap,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(PolyVectorField {
            cap: self.cap,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyVectorField {
            cap: self.cap,
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Vec<Rational> {
        self.comps.iter().map(|p| p.eval(point)).collect()
    }

    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|p| p.eval_f64(point)).collect()
    }
}

/// `(F ← G)_i = Σ_j G_j ∂_j F_i`, truncated at the common cap.
pub fn vf_prelie(f: &PolyVectorField, g: &PolyVectorField) -> Result<PolyVectorField> {
    f.check_same(g)?;
    let cap = f.cap;
    let comps = f
        .comps
        .iter()
        .map(|fi| {
            g.comps
                .iter()
                .enumerate()
                .fold(Poly::zero(f.dim()), |acc, (j, gj)| {
                    acc.add(&gj.mul_trunc(&fi.deriv(j), cap))
                })
        })
        .collect();
    Ok(PolyVectorField { cap, comps })
}

/// `Σ_{j_1..j_k} Π_a args[a]_{j_a} · ∂_{j_1}⋯∂_{j_k} p`.
fn contract(p: &Poly, args: &[&PolyVectorField], cap: usize) -> Poly {
    let Some((first, rest)) = args.split_first() else {
        return p.clone();
    };
    match p.degree() {
        Some(d) if d >= args.len() => {}
        _ => return Poly::zero(p.dim()),
    }
    let mut acc = Poly::zero(p.dim());
    for (j, gj) in first.comps.iter().enumerate() {
        if gj.is_zero() {
            continue;
        }
        let dp = p.deriv(j);
        if dp.is_zero() {
            continue;
        }
        acc = acc.add(&gj.mul_trunc(&contract(&dp, rest, cap), cap));
    }
    acc
}

/// Evaluates basis trees at a fixed field, caching subtrees.
pub struct BraceEvaluator<'a> {
    field: &'a PolyVectorField,
    memo: HashMap<TreeId, PolyVectorField>,
}

impl<'a> BraceEvaluator<'a> {
    pub fn new(field: &'a PolyVectorField) -> Self {
        BraceEvaluator {
            field,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, t: TreeId) -> PolyVectorField {
        if let Some(hit) = self.memo.get(&t) {
            return hit.clone();
        }
        let tab = trees::table();
        let children = tab.tree(t).children().to_vec();
        let args: Vec<PolyVectorField> = children.iter().map(|&c| self.eval(c)).collect();
        let refs: Vec<&PolyVectorField> = args.iter().collect();
        let cap = self.field.cap;
        let out = PolyVectorField {
            cap,
            comps: self
                .field
                .comps
                .iter()
                .map(|fi| contract(fi, &refs, cap))
                .collect(),
        };
        self.memo.insert(t, out.clone());
        out
    }
}

/// The elementary differential of `t` at `F`.
pub fn brace_eval(t: TreeId, f: &PolyVectorField) -> PolyVectorField {
    BraceEvaluator::new(f).eval(t)
}

fn require_valuation(f: &PolyVectorField, required: usize) -> Result<()> {
    match f.valuation() {
        Some(v) if v < required => Err(Error::Valuation {
            found: v.to_string(),
            required,
        }),
        _ => Ok(()),
    }
}

/// `Σ_t s(t) · E(t, F)`. Needs valuation(F) >= 2, so that only trees with
/// fewer than `cap` nodes contribute.
pub fn apply_series(s: &TreeSeries, f: &PolyVectorField) -> Result<PolyVectorField> {
    require_valuation(f, 2)?;
    let needed = f.cap.saturating_sub(1);
    if s.order() < needed {
        return Err(Error::InsufficientOrder {
            found: s.order(),
            required: needed,
        });
    }
    let tab = trees::table();
    let mut eval = BraceEvaluator::new(f);
    let mut out = PolyVectorField::zero(f.dim(), f.cap);
    for (t, c) in s.terms() {
        if tab.nodes(t) > needed {
            continue;
        }
        out = out.add(&eval.eval(t).scale(c))?;
    }
    Ok(out)
}

/// Taylor jet `g(t) = g_0 + Σ_k c_k t^k` of the flow of a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowJet {
    pub base: Vec<Rational>,
    /// `coeffs[k-1] = F^{←k}(g_0) / k!`.
    pub coeffs: Vec<Vec<Rational>>,
}

impl FlowJet {
    pub fn eval(&self, t: &Rational) -> Vec<Rational> {
        let mut out = self.base.clone();
        let mut power = Rational::one();
        for c in &self.coeffs {
            power *= t;
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * &power;
            }
        }
        out
    }

    pub fn eval_f64(&self, t: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self.base.iter().map(rational::to_f64).collect();
        let mut power = 1.0;
        for c in &self.coeffs {
            power *= t;
            for (o, ci) in out.iter_mut().zip(c) {
                *o += rational::to_f64(ci) * power;
            }
        }
        out
    }
}

/// Right iterates `F, F←F, (F←F)←F, ...` without truncation loss.
pub fn right_iterates(f: &PolyVectorField, k: usize) -> Result<Vec<PolyVectorField>> {
    let cap = f.degree().unwrap_or(0).max(1) * k.max(1);
    let f = f.with_cap(cap);
    let mut out: Vec<PolyVectorField> = Vec::with_capacity(k);
    for i in 0..k {
        let next = match i {
            0 => f.clone(),
            _ => vf_prelie(&out[i - 1], &f)?,
        };
        out.push(next);
    }
    Ok(out)
}

/// `c_k = F^{←k}(g_0)/k!` for `k = 1..terms`.
pub fn flow_taylor(f: &PolyVectorField, g0: &[Rational], terms: usize) -> Result<FlowJet> {
    if g0.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            left: g0.len(),
            right: f.dim(),
        });
    }
    let iterates = right_iterates(f, terms)?;
    let coeffs = iterates
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let inv = Rational::new(BigInt::one(), rational::factorial(i + 1));
            w.eval(g0).into_iter().map(|x| x * &inv).collect()
        })
        .collect();
    Ok(FlowJet {
        base: g0.to_vec(),
        coeffs,
    })
}

/// Recovers `F` from its time-one displacement `G = exp*(F)` up to degree `cap`.
pub fn recover_field(g: &PolyVectorField, cap: usize) -> Result<PolyVectorField> {
    require_valuation(g, 2)?;
    let g = g.with_cap(cap);
    if cap < 2 || g.is_zero() {
        return Ok(g);
    }
    apply_series(&log_star(cap - 1)?, &g)
}

/// `exp*` applied to `F`: the time-one displacement of its flow.
pub fn displacement(f: &PolyVectorField) -> Result<PolyVectorField> {
    require_valuation(f, 2)?;
    if f.cap < 2 || f.is_zero() {
        return Ok(f.clone());
    }
    apply_series(&crate::series::exp_star(f.cap - 1)?, f)
}
