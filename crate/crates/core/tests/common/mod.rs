#![allow(dead_code)]

use prelie_core::rational::frac;
use prelie_core::trees;
use prelie_core::vectorfields::{Poly, PolyVectorField};
use prelie_core::{Rational, TreeId, TreeSeries};
use proptest::prelude::*;

pub fn ratio() -> impl Strategy<Value = Rational> {
    (-2i64..=2, 1i64..=3).prop_map(|(n, d)| frac(n, d))
}

/// Dense random series on every tree up to `order`.
pub fn series(order: usize) -> impl Strategy<Value = TreeSeries> {
    let count = trees::table().ids_up_to(order).count();
    proptest::collection::vec(ratio(), count).prop_map(move |cs| {
        let tab = trees::table();
        TreeSeries::from_terms(order, tab.ids_up_to(order).zip(cs)).unwrap()
    })
}

/// Random series whose single-node coefficient is nonzero.
pub fn invertible(order: usize) -> impl Strategy<Value = TreeSeries> {
    (series(order), 1i64..=2, any::<bool>(), 1i64..=3).prop_map(|(mut s, n, neg, d)| {
        let lead = frac(if neg { -n } else { n }, d);
        let old = s.coeff(TreeId::ROOT);
        s.add_term(TreeId::ROOT, lead - old);
        s
    })
}

/// Fields whose monomials have total degree in `2..=cap`.
pub fn field(dim: usize, cap: usize) -> impl Strategy<Value = PolyVectorField> {
    let monomial = (
        proptest::collection::vec(0u32..=cap as u32, dim),
        -3i64..=3,
        1i64..=2,
    );
    proptest::collection::vec(proptest::collection::vec(monomial, 1..=3), dim).prop_map(
        move |comps| {
            let polys = comps
                .into_iter()
                .map(|terms| {
                    let mut p = Poly::zero(dim);
                    for (mut exps, n, d) in terms {
                        let deg: u32 = exps.iter().sum();
                        if deg < 2 {
                            exps[0] += 2 - deg;
                        }
                        p.add_term(exps, frac(n, d));
                    }
                    p
                })
                .collect();
            PolyVectorField::new(polys, cap).unwrap()
        },
    )
}

pub fn field_any_dim(max_dim: usize, cap: usize) -> impl Strategy<Value = PolyVectorField> {
    (1..=max_dim).prop_flat_map(move |d| field(d, cap))
}

pub fn code(s: &str) -> TreeId {
    trees::table().parse_code(s).unwrap()
}

pub fn series_of(order: usize, terms: &[(&str, Rational)]) -> TreeSeries {
    TreeSeries::from_terms(order, terms.iter().map(|(c, q)| (code(c), q.clone()))).unwrap()
}
