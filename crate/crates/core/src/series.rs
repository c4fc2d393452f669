//! Truncated series over the rooted-tree basis.
//!
//! A [`TreeSeries`] is an element of the completed free pre-Lie algebra on a
//! single generator `v`, kept up to a fixed number of nodes. Each basis tree
//! stands for the coinvariant class of one labeled representative.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::trees::{self, TreeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSeries {
    order: usize,
    coeffs: BTreeMap<TreeId, Rational>,
}

pub(crate) fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let cap = trees::table().max_order();
    if order > cap {
        return Err(Error::OrderTooLarge {
            requested: order,
            cap,
        });
    }
    Ok(())
}

pub(crate) fn same_order(x: &TreeSeries, y: &TreeSeries) -> Result<usize> {
    if x.order != y.order {
        return Err(Error::OrderMismatch {
            left: x.order,
            right: y.order,
        });
    }
    Ok(x.order)
}

impl TreeSeries {
    pub fn zero(order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(TreeSeries {
            order,
            coeffs: BTreeMap::new(),
        })
    }

    /// The generator `v`, i.e. the operad unit.
    pub fn unit_v(order: usize) -> Result<Self> {
        let mut s = Self::zero(order)?;
        s.coeffs.insert(TreeId::ROOT, Rational::one());
        Ok(s)
    }

    /// Builds a series from terms; trees above `order` are dropped and
    /// repeated trees are summed.
    pub fn from_terms<I>(order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TreeId, Rational)>,
    {
        let mut s = Self::zero(order)?;
        for (t, c) in terms {
            s.add_term(t, c);
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, t: TreeId) -> Rational {
        self.coeffs.get(&t).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in (grade, code) order.
    pub fn terms(&self) -> impl Iterator<Item = (TreeId, &Rational)> {
        self.coeffs.iter().map(|(&t, c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c` to the coefficient of `t`, ignoring trees above the order.
    pub fn add_term(&mut self, t: TreeId, c: Rational) {
        if c.is_zero() || trees::table().nodes(t) > self.order {
            return;
        }
        let slot = self.coeffs.entry(t).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&t);
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &TreeSeries, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (&t, d) in &other.coeffs {
            self.add_term(t, c * d);
        }
    }

    pub fn add(&self, other: &TreeSeries) -> Result<TreeSeries> {
        same_order(self, other)?;
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        Ok(out)
    }

    pub fn sub(&self, other: &TreeSeries) -> Result<TreeSeries> {
        same_order(self, other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> TreeSeries {
        let mut out = TreeSeries {
            order: self.order,
            coeffs: BTreeMap::new(),
        };
        out.add_scaled(self, c);
        out
    }

    /// Drops every tree with more than `order` nodes.
    pub fn truncate(&self, order: usize) -> Result<TreeSeries> {
        check_order(order)?;
        let tab = trees::table();
        Ok(TreeSeries {
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&t, _)| tab.nodes(t) <= order)
                .map(|(&t, c)| (t, c.clone()))
                .collect(),
        })
    }

    /// Restriction to the trees with exactly `n` nodes.
    pub fn component(&self, n: usize) -> TreeSeries {
        let tab = trees::table();
        TreeSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&t, _)| tab.nodes(t) == n)
                .map(|(&t, c)| (t, c.clone()))
                .collect(),
        }
    }

    /// Smallest grade with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        let tab = trees::table();
        self.coeffs.keys().map(|&t| tab.nodes(t)).min()
    }

    /// The free pre-Lie product `x ← y`: graft `y` onto each vertex of `x`.
    pub fn graft_product(&self, other: &TreeSeries) -> Result<TreeSeries> {
        let order = same_order(self, other)?;
        let tab = trees::table();
        let mut out = TreeSeries::zero(order)?;
        for (&t, a) in &self.coeffs {
            let room = order.saturating_sub(tab.nodes(t));
            for (&s, b) in &other.coeffs {
                if tab.nodes(s) > room {
                    continue;
                }
                let ab = a * b;
                for &(w, k) in tab.graft_sum(t, s).iter() {
                    out.add_term(w, &ab * Rational::from_integer(BigInt::from(k)));
                }
            }
        }
        Ok(out)
    }

    /// Sum of all coefficients.
    pub fn coefficient_sum(&self) -> Rational {
        self.coeffs
            .values()
            .fold(Rational::zero(), |acc, c| acc + c)
    }
}

/// `v ← v ← ... ← v` with `k` factors, bracketed to the left.
pub fn right_iterate(k: usize, order: usize) -> Result<TreeSeries> {
    if k == 0 {
        return Err(Error::ZeroIterate);
    }
    if k > order {
        return Err(Error::InsufficientOrder {
            found: order,
            required: k,
        });
    }
    let v = TreeSeries::unit_v(order)?;
    let mut w = v.clone();
    for _ in 1..k {
        w = w.graft_product(&v)?;
    }
    Ok(w)
}

/// `exp*(v) = Σ_k v^{←k} / k!`, truncated at `order` nodes.
pub fn exp_star(order: usize) -> Result<TreeSeries> {
    let v = TreeSeries::unit_v(order)?;
    let mut out = TreeSeries::zero(order)?;
    let mut w = v.clone();
    for k in 1..=order {
        let inv = Rational::new(BigInt::one(), rational::factorial(k));
        out.add_scaled(&w, &inv);
        if k < order {
            w = w.graft_product(&v)?;
        }
    }
    Ok(out)
}

/// Shortcut for a single basis tree with coefficient 1.
pub fn basis(t: TreeId, order: usize) -> Result<TreeSeries> {
    TreeSeries::from_terms(order, [(t, Rational::one())])
}

/// Parses a tree code against the shared table.
pub fn tree(code: &str) -> Result<TreeId> {
    trees::table().parse_code(code)
}
