//! Exact rationals and their text forms.
//!
//! Values whose reduced numerator and denominator fit in an `i64` are kept
//! inline and combined with `i128` intermediates; anything larger is held as
//! a [`BigRational`]. The representation is normalized (small whenever
//! possible), so equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `den > 0`, neither component equal to `i64::MIN`.
    Small {
        num: i64,
        den: i64,
    },
    Big(BigRational),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn fits(x: i128) -> bool {
    x > i64::MIN as i128 && x <= i64::MAX as i128
}

impl Rational {
    fn small(num: i64, den: i64) -> Self {
        Rational(Repr::Small { num, den })
    }

    /// Reduces `num/den` with `den != 0`.
    fn from_i128(num: i128, den: i128) -> Self {
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        if num == 0 {
            return Self::small(0, 1);
        }
        let g = num.unsigned_abs().gcd(&den.unsigned_abs()) as i128;
        if g > 1 {
            num /= g;
            den /= g;
        }
        if fits(num) && fits(den) {
            Self::small(num as i64, den as i64)
        } else {
            Rational(Repr::Big(BigRational::new_raw(num.into(), den.into())))
        }
    }

    fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Self::small(n, d),
            _ => Rational(Repr::Big(q)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw((*num).into(), (*den).into()),
            Repr::Big(q) => q.clone(),
        }
    }

    /// `num/den`, reduced. Panics on a zero denominator.
    pub fn new(num: BigInt, den: BigInt) -> Self {
        Self::from_big(BigRational::new(num, den))
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => (*num).into(),
            Repr::Big(q) => q.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => (*den).into(),
            Repr::Big(q) => q.denom().clone(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => {
                assert!(*num != 0, "reciprocal of zero");
                Self::from_i128(*den as i128, *num as i128)
            }
            Repr::Big(q) => Self::from_big(q.recip()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(q) => q.is_negative(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_integer(&self) -> bool {
        self.denom().is_one()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    Self::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Self::from_i128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => Self::from_big(self.to_big() + other.to_big()),
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::from_big(self.to_big() * other.to_big()),
        }
    }

    fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => Self::small(-num, *den),
            Repr::Big(q) => Rational(Repr::Big(-q)),
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn div_ref(&self, other: &Self) -> Self {
        self.mul_ref(&other.recip())
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Self::small(0, 1)
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }
}

impl One for Rational {
    fn one() -> Self {
        Self::small(1, 1)
    }

    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_i128(n as i128, 1)
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Self::from_big(q)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $core:ident, $atr:ident, $amethod:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$core(rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$core(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$core(rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$core(&rhs)
            }
        }
        impl $atr<&Rational> for Rational {
            fn $amethod(&mut self, rhs: &Rational) {
                *self = self.$core(rhs);
            }
        }
        impl $atr<Rational> for Rational {
            fn $amethod(&mut self, rhs: Rational) {
                *self = self.$core(&rhs);
            }
        }
    };
}

binop!(Add, add, add_ref, AddAssign, add_assign);
binop!(Sub, sub, sub_ref, SubAssign, sub_assign);
binop!(Mul, mul, mul_ref, MulAssign, mul_assign);
binop!(Div, div, div_ref, DivAssign, div_assign);

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

pub fn frac(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::from_i128(num as i128, den as i128)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    (0..exp).fold(Rational::one(), |acc, _| acc * base)
}

/// Canonical rendering: `num/den`, with the denominator omitted when it is 1.
pub fn render(q: &Rational) -> String {
    match &q.0 {
        Repr::Small { num, den: 1 } => num.to_string(),
        Repr::Small { num, den } => format!("{num}/{den}"),
        Repr::Big(b) if b.denom().is_one() => b.numer().to_string(),
        Repr::Big(b) => format!("{}/{}", b.numer(), b.denom()),
    }
}

/// Parses `a`, `-a`, or `a/b` with decimal integers.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    from_parts(num, den)
}

pub fn from_parts(num: &str, den: &str) -> Result<Rational> {
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Schema(format!("bad integer {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Schema(format!("bad integer {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Schema("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

pub fn to_parts(q: &Rational) -> (String, String) {
    (q.numer().to_string(), q.denom().to_string())
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn render_omits_unit_denominator() {
        assert_eq!(render(&frac(4, 2)), "2");
        assert_eq!(render(&frac(-3, 6)), "-1/2");
        assert_eq!(render(&Rational::zero()), "0");
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(parse("6/-4").unwrap(), frac(-3, 2));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.numer(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small { .. }));
        let tiny = frac(1, i64::MAX);
        assert_eq!((&tiny * &tiny).recip(), sq);
        assert_eq!(-int(i64::MIN + 1) - int(1) + int(1), int(i64::MAX));
        let min = Rational::from_integer(BigInt::from(i64::MIN));
        assert_eq!(min.numer(), BigInt::from(i64::MIN));
        assert_eq!(-(-min.clone()), min);
    }

    fn big_ratio() -> impl Strategy<Value = (i128, i128)> {
        (any::<i64>(), 1..i64::MAX, 0u32..80).prop_map(|(n, d, shift)| {
            let scale = 1i128 << (shift.min(60));
            (n as i128 * scale, d as i128)
        })
    }

    fn reference(n: i128, d: i128) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational((a, b) in big_ratio(), (c, d) in big_ratio()) {
            let x = Rational::from_big(reference(a, b));
            let y = Rational::from_big(reference(c, d));
            let (rx, ry) = (reference(a, b), reference(c, d));
            prop_assert_eq!((&x + &y).to_big(), &rx + &ry);
            prop_assert_eq!((&x - &y).to_big(), &rx - &ry);
            prop_assert_eq!((&x * &y).to_big(), &rx * &ry);
            if !ry.is_zero() {
                prop_assert_eq!((&x / &y).to_big(), &rx / &ry);
            }
            prop_assert_eq!(x.cmp(&y), rx.cmp(&ry));
            prop_assert_eq!(Rational::from_big(x.to_big()), x);
        }
    }
}
