use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::rational::{self, Rational};

/// Multivariate polynomial with exact rational coefficients, keyed by
/// exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn total(exps: &[u32]) -> usize {
    exps.iter().map(|&e| e as usize).sum()
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(dim, vec![0; dim], c)
    }

    /// The coordinate function `x_i` (zero-based).
    pub fn var(dim: usize, i: usize) -> Self {
        let mut exps = vec![0; dim];
        exps[i] = 1;
        Self::monomial(dim, exps, Rational::one())
    }

    pub fn monomial(dim: usize, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), dim);
        let mut p = Self::zero(dim);
        p.add_term(exps, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| total(e)).max()
    }

    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(|e| total(e)).min()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Drops every monomial of total degree above `cap`.
    pub fn truncate(&self, cap: usize) -> Poly {
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) <= cap)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_trunc(other, usize::MAX)
    }

    /// Product keeping total degrees up to `cap`.
    pub fn mul_trunc(&self, other: &Poly, cap: usize) -> Poly {
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, a) in &self.terms {
            let da = total(ea);
            for (eb, b) in &other.terms {
                if da + total(eb) > cap {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += a * b;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly {
            dim: self.dim,
            terms: acc,
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.dim, Rational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative in the `j`-th variable.
    pub fn deriv(&self, j: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[j] -= 1;
            out.terms
                .insert(d, c * Rational::from_integer(BigInt::from(e[j])));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                term *= rational::pow(x, k as usize);
            }
            sum += term;
        }
        sum
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(rational::to_f64(c), |acc, (&k, x)| acc * x.powi(k as i32))
            })
            .sum()
    }
}

pub(crate) fn var_name(dim: usize, i: usize) -> String {
    if dim <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for Poly {
    /// Ascending total degree; `x^2 - 3/2*x*y + y^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| total(a).cmp(&total(b)).then_with(|| b.cmp(a)));
        for (i, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || total(e) == 0 {
                factors.push(rational::render(&mag));
            }
            for (j, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(var_name(self.dim, j)),
                    _ => factors.push(format!("{}^{}", var_name(self.dim, j), k)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
