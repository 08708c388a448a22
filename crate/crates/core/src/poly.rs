//! Exact Laurent polynomials with integer coefficients.
//!
//! [`LaurentPoly2`] is bivariate; which variables it stands for (`A, r` or
//! `q, r`) is up to the caller and only matters when rendering.
//! [`LaurentPoly`] is the univariate counterpart.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i32, i32), BigInt>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn monomial(coeff: impl Into<BigInt>, x: i32, y: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(x, y, coeff.into());
        p
    }

    /// Build from `(x-exponent, y-exponent, coefficient)` triples; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, i32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (x, y, c) in terms {
            p.add_term(x, y, c.into());
        }
        p
    }

    pub fn add_term(&mut self, x: i32, y: i32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((x, y)).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(x, y));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: i32, y: i32) -> BigInt {
        self.terms.get(&(x, y)).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i32, &BigInt)> + '_ {
        self.terms.iter().map(|(&(x, y), c)| (x, y, c))
    }

    pub fn as_monomial(&self) -> Option<(i32, i32, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// Multiply by `x^dx y^dy`.
    pub fn shift(&self, dx: i32, dy: i32) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(x, y), c)| ((x + dx, y + dy), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentPoly2 {
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    /// Integer powers. Negative exponents are only defined for monomials with
    /// a unit coefficient.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            let (x, y, c) = self
                .as_monomial()
                .ok_or(Error::NegativePowerOfNonMonomial)?;
            if !c.abs().is_one() {
                return Err(Error::NegativePowerOfNonMonomial);
            }
            let k = -e;
            let sign = if c.is_negative() && k % 2 == 1 { -1 } else { 1 };
            return Ok(Self::monomial(sign, -x * k as i32, -y * k as i32));
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Substitute `y = 1`.
    pub fn at_y_one(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(x, _), c) in &self.terms {
            out.add_term(x, c.clone());
        }
        out
    }

    /// Plain-text rendering, terms ordered by descending `x` then `y`
    /// exponent, e.g. `-A^2*r^-1 - A^-2*r`.
    pub fn render(&self, xname: &str, yname: &str) -> String {
        render_terms(
            self.terms
                .iter()
                .rev()
                .map(|(&(x, y), c)| (c, [(xname, x), (yname, y)])),
            Style::Text,
        )
    }

    pub fn render_latex(&self, xname: &str, yname: &str) -> String {
        render_terms(
            self.terms
                .iter()
                .rev()
                .map(|(&(x, y), c)| (c, [(xname, x), (yname, y)])),
            Style::Latex,
        )
    }

    /// `[[x-exponent, y-exponent, coefficient], ...]` in rendering order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|(&(x, y), c)| Value::Array(vec![x.into(), y.into(), coeff_json(c)]))
                .collect(),
        )
    }
}

fn coeff_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => v.into(),
        None => Value::String(c.to_string()),
    }
}

#[derive(Clone, Copy)]
enum Style {
    Text,
    Latex,
}

fn render_terms<'a, const N: usize>(
    terms: impl Iterator<Item = (&'a BigInt, [(&'a str, i32); N])>,
    style: Style,
) -> String {
    let mut out = String::new();
    for (idx, (c, vars)) in terms.enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let factors: Vec<String> = vars
            .iter()
            .filter(|(_, e)| *e != 0)
            .map(|&(name, e)| match (style, e) {
                (_, 1) => name.to_string(),
                (Style::Text, e) => format!("{name}^{e}"),
                (Style::Latex, e) => format!("{name}^{{{e}}}"),
            })
            .collect();
        let sep = match style {
            Style::Text => "*",
            Style::Latex => "",
        };
        if factors.is_empty() {
            let _ = write!(out, "{mag}");
        } else if mag.is_one() {
            out.push_str(&factors.join(sep));
        } else {
            let _ = write!(out, "{mag}{sep}{}", factors.join(sep));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(mut self, rhs: LaurentPoly2) -> LaurentPoly2 {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly2> for LaurentPoly2 {
    fn add_assign(&mut self, rhs: &LaurentPoly2) {
        for (&(x, y), c) in &rhs.terms {
            self.add_term(x, y, c.clone());
        }
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        -&self
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: LaurentPoly2) -> LaurentPoly2 {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(x1, y1), c1) in &self.terms {
            for (&(x2, y2), c2) in &rhs.terms {
                out.add_term(x1 + x2, y1 + y2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: LaurentPoly2) -> LaurentPoly2 {
        &self * &rhs
    }
}

/// Univariate Laurent polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: impl Into<BigInt>, e: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(e, coeff.into());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, e: i32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn shift(&self, d: i32) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e + d, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = LaurentPoly::monomial(1, 0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn render(&self, name: &str) -> String {
        render_terms(
            self.terms.iter().rev().map(|(&e, c)| (c, [(name, e)])),
            Style::Text,
        )
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, c1) in &self.terms {
            for (&b, c2) in &rhs.terms {
                out.add_term(a + b, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn delta() -> LaurentPoly2 {
        LaurentPoly2::from_terms([(2, -1, -1), (-2, 1, -1)])
    }

    #[test]
    fn delta_squared() {
        let d2 = &delta() * &delta();
        assert_eq!(
            d2,
            LaurentPoly2::from_terms([(4, -2, 1), (0, 0, 2), (-4, 2, 1)])
        );
    }

    #[test]
    fn additive_inverse() {
        let p = delta();
        assert!((&p + &(-&p)).is_zero());
    }

    #[test]
    fn monomial_product() {
        let p = &LaurentPoly2::monomial(1, 3, 0) * &LaurentPoly2::monomial(1, -3, 3);
        assert_eq!(p, LaurentPoly2::monomial(1, 0, 3));
    }

    #[test]
    fn negative_powers() {
        assert_eq!(
            LaurentPoly2::monomial(-1, 1, 0).pow(-3).unwrap(),
            LaurentPoly2::monomial(-1, -3, 0)
        );
        assert_eq!(delta().pow(-1), Err(Error::NegativePowerOfNonMonomial));
        assert_eq!(
            LaurentPoly2::monomial(2, 1, 0).pow(-1),
            Err(Error::NegativePowerOfNonMonomial)
        );
        assert_eq!(delta().pow(0).unwrap(), LaurentPoly2::one());
        assert_eq!(delta().pow(3).unwrap(), &(&delta() * &delta()) * &delta());
    }

    #[test]
    fn rendering() {
        assert_eq!(delta().render("A", "r"), "-A^2*r^-1 - A^-2*r");
        assert_eq!(delta().render_latex("A", "r"), "-A^{2}r^{-1} - A^{-2}r");
        assert_eq!(LaurentPoly2::zero().render("A", "r"), "0");
        assert_eq!(
            LaurentPoly2::from_terms([(0, 0, 2), (1, 0, -3)]).render("q", "r"),
            "-3*q + 2"
        );
        assert_eq!(delta().to_json().to_string(), "[[2,-1,-1],[-2,1,-1]]");
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly2> {
        proptest::collection::vec((-4i32..4, -4i32..4, -3i64..4), 0..5)
            .prop_map(LaurentPoly2::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(p in arb_poly(), q in arb_poly(), s in arb_poly()) {
            prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
            prop_assert!(p.terms().all(|(_, _, c)| !c.is_zero()));
        }
    }
}
