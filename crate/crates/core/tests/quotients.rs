mod common;

use common::{invertible, ratio, series, series_of};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use prelie_core::group::{compose, invert, log_star};
use prelie_core::quotients::{
    bernoulli, bernoulli_egf, mu_compose, mu_invert, phi, ps_compose, ps_invert, psi, MuElement,
    MuImage, PowerSeriesComp,
};
use prelie_core::rational::{frac, int};
use prelie_core::series::exp_star;
use prelie_core::{Error, Rational, TreeSeries};
use proptest::prelude::*;

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_big(q: &Rational) -> BigRational {
    BigRational::new(q.numer(), q.denom())
}

/// `B_n` by the Akiyama–Tanigawa algorithm, which yields `B_1 = +1/2`;
/// the sign is flipped to the `x/(e^x - 1)` convention.
fn akiyama_tanigawa(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<BigRational> = Vec::new();
    for m in 0..=n {
        a.push(big(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = BigRational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// `x/(e^x - 1)` as the reciprocal of `(e^x - 1)/x`, coefficients `0..len`.
fn reciprocal_egf(len: usize) -> Vec<BigRational> {
    let mut fact = BigInt::one();
    let mut p = Vec::with_capacity(len);
    for m in 0..len {
        fact *= BigInt::from(m + 1);
        p.push(BigRational::new(BigInt::one(), fact.clone()));
    }
    let mut q = vec![BigRational::zero(); len];
    q[0] = BigRational::one();
    for n in 1..len {
        let s: BigRational = (1..=n).map(|k| &p[k] * &q[n - k]).sum();
        q[n] = -s;
    }
    q
}

fn ps(v: Vec<Rational>) -> PowerSeriesComp {
    PowerSeriesComp::new(v).unwrap()
}

fn ps_strategy(order: usize) -> impl Strategy<Value = PowerSeriesComp> {
    (proptest::collection::vec(ratio(), order), 1i64..=3).prop_map(|(mut v, a1)| {
        v[0] = int(a1);
        ps(v)
    })
}

fn mu_strategy(order: usize) -> impl Strategy<Value = MuElement> {
    (
        proptest::collection::vec(ratio(), order),
        1i64..=3,
        1i64..=2,
    )
        .prop_map(|(mut f, n, d)| {
            f[0] = int(1);
            MuElement::new(frac(n, d), f).unwrap()
        })
}

#[test]
fn bernoulli_matches_two_oracles() {
    let at = akiyama_tanigawa(20);
    for (n, b) in at.iter().enumerate() {
        assert_eq!(to_big(&bernoulli(n)), *b, "B_{n}");
    }
    let egf = reciprocal_egf(13);
    for (m, c) in bernoulli_egf(13).iter().enumerate() {
        assert_eq!(to_big(c), egf[m]);
    }
    assert_eq!(bernoulli(0), int(1));
    assert_eq!(bernoulli(1), frac(-1, 2));
    assert_eq!(bernoulli(2), frac(1, 6));
    assert_eq!(bernoulli(3), int(0));
    assert_eq!(bernoulli(4), frac(-1, 30));
}

#[test]
fn bernoulli_series_times_its_reciprocal_is_one() {
    let b = bernoulli_egf(13);
    let mut fact = BigInt::one();
    let mut e: Vec<BigRational> = Vec::new();
    for m in 0..13 {
        fact *= BigInt::from(m + 1);
        e.push(BigRational::new(BigInt::one(), fact.clone()));
    }
    for n in 0..13 {
        let s: BigRational = (0..=n).map(|k| to_big(&b[k]) * &e[n - k]).sum();
        let want = if n == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        assert_eq!(s, want, "coefficient {n}");
    }
}

#[test]
fn phi_examples() {
    assert_eq!(
        phi(&TreeSeries::unit_v(4).unwrap()),
        PowerSeriesComp::identity(4).unwrap()
    );
    let e = phi(&exp_star(8).unwrap());
    let mut fact = 1i64;
    for n in 1..=8 {
        fact *= n as i64;
        assert_eq!(e.coeff(n), frac(1, fact));
    }
    let only_corolla = series_of(4, &[("0", int(1)), ("2,0,0", int(5))]);
    assert_eq!(phi(&only_corolla), ps(vec![int(1), int(0), int(0), int(0)]));
}

#[test]
fn power_series_examples() {
    let f = ps(vec![int(1), frac(1, 2), frac(-1, 3), int(2)]);
    let x2 = ps(vec![int(0), int(1), int(0), int(0)]);
    let g = ps_compose(&x2, &f).unwrap();
    // f(x)^2 truncated at x^4
    assert_eq!(g.coeffs(), &[int(0), int(1), int(1), frac(-5, 12)]);
    let e = ps((1..=10).map(|n| frac(1, (1..=n).product())).collect());
    let l = ps_invert(&e).unwrap();
    for n in 1..=10 {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        assert_eq!(l.coeff(n), frac(sign, n as i64));
    }
    assert!(matches!(
        ps_invert(&ps(vec![int(0), int(1)])),
        Err(Error::NotInvertible)
    ));
}

#[test]
fn mu_examples() {
    let a = MuElement::new(int(2), vec![int(1), int(1), int(0)]).unwrap();
    let b = MuElement::new(int(3), vec![int(1), int(0), int(0)]).unwrap();
    let ab = mu_compose(&a, &b).unwrap();
    assert_eq!(ab.lambda(), &int(6));
    assert_eq!(ab.f(), &[int(1), int(3), int(0)]);
    assert_eq!(
        mu_compose(&a, &mu_invert(&a).unwrap()).unwrap(),
        MuElement::identity(3).unwrap()
    );
    assert!(MuElement::new(int(0), vec![int(1)]).is_err());
    assert!(MuElement::new(int(1), vec![int(2)]).is_err());
    let unit = psi(&TreeSeries::unit_v(3).unwrap());
    assert_eq!(unit, MuImage::Element(MuElement::identity(3).unwrap()));
}

#[test]
fn psi_images_of_exp_and_log() {
    let e = psi(&exp_star(10).unwrap());
    let want: Vec<Rational> = (0..10)
        .map(|m| frac(1, (1..=m as i64 + 1).product()))
        .collect();
    assert_eq!(e.element().unwrap().f(), &want[..]);
    let l = psi(&log_star(10).unwrap());
    let egf = reciprocal_egf(10);
    let got: Vec<BigRational> = l.element().unwrap().f().iter().map(to_big).collect();
    assert_eq!(got, egf);
    let degenerate = psi(&series_of(3, &[("1,0", int(2)), ("2,0,0", int(1))]));
    assert_eq!(
        degenerate,
        MuImage::NonInvertible {
            corollas: vec![int(0), int(2), int(1)]
        }
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_a_homomorphism(x in invertible(6), y in invertible(6)) {
        let xy = compose(&x, &y).unwrap();
        prop_assert_eq!(phi(&xy), ps_compose(&phi(&x), &phi(&y)).unwrap());
    }

    #[test]
    fn psi_is_a_homomorphism(x in invertible(6), y in invertible(6)) {
        let xy = compose(&x, &y).unwrap();
        let px = psi(&x);
        let py = psi(&y);
        let rhs = mu_compose(px.element().unwrap(), py.element().unwrap()).unwrap();
        prop_assert_eq!(psi(&xy), MuImage::Element(rhs));
    }

    #[test]
    fn projections_commute_with_inversion(x in invertible(6)) {
        let xi = invert(&x).unwrap();
        prop_assert_eq!(phi(&xi), ps_invert(&phi(&x)).unwrap());
        let mx = psi(&x);
        prop_assert_eq!(psi(&xi), MuImage::Element(mu_invert(mx.element().unwrap()).unwrap()));
    }

    #[test]
    fn phi_ignores_non_linear_trees(x in series(5)) {
        let tab = prelie_core::trees::table();
        let chains = TreeSeries::from_terms(
            5,
            x.terms().filter(|(t, _)| tab.is_linear(*t)).map(|(t, c)| (t, c.clone())),
        ).unwrap();
        prop_assert_eq!(phi(&x), phi(&chains));
    }

    #[test]
    fn composition_inverse_is_an_involution(f in (1usize..=12).prop_flat_map(ps_strategy)) {
        let g = ps_invert(&f).unwrap();
        prop_assert_eq!(&ps_invert(&g).unwrap(), &f);
        prop_assert_eq!(ps_compose(&f, &g).unwrap(), PowerSeriesComp::identity(f.order()).unwrap());
    }

    #[test]
    fn mu_is_associative(
        (a, b, c) in (1usize..=10).prop_flat_map(|n| (mu_strategy(n), mu_strategy(n), mu_strategy(n)))
    ) {
        let lhs = mu_compose(&mu_compose(&a, &b).unwrap(), &c).unwrap();
        let rhs = mu_compose(&a, &mu_compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let ai = mu_invert(&a).unwrap();
        prop_assert_eq!(mu_compose(&ai, &a).unwrap(), MuElement::identity(a.order()).unwrap());
    }
}
