//! Projections onto the linear-tree and corolla quotients.
//!
//! Chains map to the composition group of `x·Q[[x]]` and corollas map to
//! the semidirect product `Q* ⋉ (1 + x·Q[[x]])`.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::series::TreeSeries;
use crate::trees::{self, TreeId};

/// `Σ_{n=1..N} a_n x^n` under composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeriesComp {
    /// `a[0]` is the coefficient of `x`.
    a: Vec<Rational>,
}

impl PowerSeriesComp {
    pub fn new(a: Vec<Rational>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::ZeroOrder);
        }
        Ok(PowerSeriesComp { a })
    }

    pub fn identity(order: usize) -> Result<Self> {
        let mut a = vec![Rational::zero(); order];
        if let Some(first) = a.first_mut() {
            *first = Rational::one();
        }
        Self::new(a)
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// Coefficient of `x^n`, `n >= 1`.
    pub fn coeff(&self, n: usize) -> Rational {
        if n == 0 {
            return Rational::zero();
        }
        self.a.get(n - 1).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.a
    }

    pub fn is_invertible(&self) -> bool {
        !self.a[0].is_zero()
    }

    /// Dense coefficients `c_0..c_N` with `c_0 = 0`.
    fn dense(&self) -> Vec<Rational> {
        let mut d = Vec::with_capacity(self.a.len() + 1);
        d.push(Rational::zero());
        d.extend(self.a.iter().cloned());
        d
    }
}

/// Truncated product of dense coefficient vectors `c_0..c_N`.
pub(crate) fn mul_dense(p: &[Rational], q: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, a) in p.iter().enumerate().take(len) {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate().take(len - i) {
            out[i + j] += a * b;
        }
    }
    out
}

/// `g(f(x))`, truncated at the common order.
pub fn ps_compose(g: &PowerSeriesComp, f: &PowerSeriesComp) -> Result<PowerSeriesComp> {
    if g.order() != f.order() {
        return Err(Error::OrderMismatch {
            left: g.order(),
            right: f.order(),
        });
    }
    let len = g.order() + 1;
    let fd = f.dense();
    // Horner: g(f) = f·(a_1 + f·(a_2 + ...))
    let mut acc = vec![Rational::zero(); len];
    for a in g.a.iter().rev() {
        acc[0] += a;
        acc = mul_dense(&acc, &fd, len);
    }
    PowerSeriesComp::new(acc.into_iter().skip(1).collect())
}

/// Compositional inverse `h` with `f(h(x)) = h(f(x)) = x`.
pub fn ps_invert(f: &PowerSeriesComp) -> Result<PowerSeriesComp> {
    if !f.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let n = f.order();
    let len = n + 1;
    let fd = f.dense();
    let lead_inv = f.a[0].recip();
    let mut h = vec![Rational::zero(); len];
    h[1] = lead_inv.clone();
    for k in 2..=n {
        // coefficient k of f(h) with h_k still zero; h_k enters only as a_1·h_k
        let mut power = h.clone();
        let mut sum = Rational::zero();
        for (j, a) in fd.iter().enumerate().skip(1).take(k) {
            if j > 1 {
                power = mul_dense(&power, &h, len);
            }
            sum += a * &power[k];
        }
        h[k] = -sum * &lead_inv;
    }
    PowerSeriesComp::new(h.into_iter().skip(1).collect())
}

/// Element `(λ, f)` of `Q* ⋉ (1 + x·Q[[x]])`, truncated to `f_0..f_{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuElement {
    lambda: Rational,
    f: Vec<Rational>,
}

impl MuElement {
    pub fn new(lambda: Rational, f: Vec<Rational>) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::NotInvertible);
        }
        match f.first() {
            None => return Err(Error::ZeroOrder),
            Some(f0) if !f0.is_one() => {
                return Err(Error::Schema("constant term of f must be 1".into()))
            }
            _ => {}
        }
        Ok(MuElement { lambda, f })
    }

    pub fn identity(order: usize) -> Result<Self> {
        let mut f = vec![Rational::zero(); order];
        if let Some(f0) = f.first_mut() {
            *f0 = Rational::one();
        }
        Self::new(Rational::one(), f)
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    /// `f_0..f_{N-1}`.
    pub fn f(&self) -> &[Rational] {
        &self.f
    }

    pub fn order(&self) -> usize {
        self.f.len()
    }
}

/// Image of a series in the corolla quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MuImage {
    Element(MuElement),
    /// The single-node coefficient vanishes; `corollas[m]` is the raw
    /// coefficient of the `(m+1)`-node corolla.
    NonInvertible {
        corollas: Vec<Rational>,
    },
}

impl MuImage {
    pub fn element(&self) -> Option<&MuElement> {
        match self {
            MuImage::Element(e) => Some(e),
            MuImage::NonInvertible { .. } => None,
        }
    }
}

/// `f(θx)·g(x)` paired with `λθ`.
pub fn mu_compose(a: &MuElement, b: &MuElement) -> Result<MuElement> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    let len = a.order();
    let theta = &b.lambda;
    let mut power = Rational::one();
    let mut scaled = Vec::with_capacity(len);
    for fm in &a.f {
        scaled.push(fm * &power);
        power *= theta;
    }
    MuElement::new(&a.lambda * theta, mul_dense(&scaled, &b.f, len))
}

/// `(λ⁻¹, 1/f(λ⁻¹x))`.
pub fn mu_invert(a: &MuElement) -> Result<MuElement> {
    let len = a.order();
    let inv = a.lambda.recip();
    let mut power = Rational::one();
    let mut scaled = Vec::with_capacity(len);
    for fm in &a.f {
        scaled.push(fm * &power);
        power *= &inv;
    }
    MuElement::new(inv, reciprocal_unit_series(&scaled))
}

/// `1/p` for `p_0 = 1`.
pub(crate) fn reciprocal_unit_series(p: &[Rational]) -> Vec<Rational> {
    let mut q = vec![Rational::zero(); p.len()];
    if q.is_empty() {
        return q;
    }
    q[0] = Rational::one();
    for n in 1..p.len() {
        let mut s = Rational::zero();
        for k in 1..=n {
            s += &p[k] * &q[n - k];
        }
        q[n] = -s;
    }
    q
}

/// Chain coefficients: `a_n` is the coefficient of the `n`-node chain.
pub fn phi(x: &TreeSeries) -> PowerSeriesComp {
    let tab = trees::table();
    let a = (1..=x.order())
        .map(|n| {
            tab.chain(n)
                .map(|t| x.coeff(t))
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    PowerSeriesComp { a }
}

/// Corolla coefficients, normalized by the single-node coefficient.
pub fn psi(x: &TreeSeries) -> MuImage {
    let tab = trees::table();
    let corollas: Vec<Rational> = (1..=x.order())
        .map(|n| {
            tab.corolla(n)
                .map(|t| x.coeff(t))
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    let lambda = x.coeff(TreeId::ROOT);
    if lambda.is_zero() {
        return MuImage::NonInvertible { corollas };
    }
    let mut f: Vec<Rational> = corollas.iter().map(|c| c / &lambda).collect();
    f[0] = Rational::one();
    MuImage::Element(MuElement { lambda, f })
}

/// `B_0..B_n` for `x/(e^x − 1) = Σ B_n x^n/n!`, so `B_1 = −1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    // Σ_{k=0..m} C(m+1, k) B_k = 0
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        let mut binom = BigInt::one();
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Rational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // binom is now C(m+1, m)
        b.push(-s / Rational::from_integer(binom));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n).pop().expect("non-empty")
}

/// `B_m / m!` for `m = 0..len`, the coefficients of `x/(e^x − 1)`.
pub fn bernoulli_egf(len: usize) -> Vec<Rational> {
    bernoulli_numbers(len.saturating_sub(1))
        .into_iter()
        .enumerate()
        .map(|(m, b)| b / Rational::from_integer(rational::factorial(m)))
        .collect()
}
