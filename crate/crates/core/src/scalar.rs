//! Exact coefficients.
//!
//! A [`Scalar`] is one of three shapes, promoted on demand:
//!
//! - an arbitrary-precision rational,
//! - a Laurent polynomial over the formal symbols `q`, `d`, `y` with rational
//!   coefficients,
//! - a quotient of two Laurent polynomials.
//!
//! Every value is kept in canonical form: no stored zero coefficients, a
//! Laurent polynomial that happens to be constant is demoted to a rational,
//! and a quotient whose denominator is a monomial, or whose numerator is a
//! monomial multiple of its denominator, is demoted to a Laurent polynomial.
//! Quotient denominators are cleared of monomial content and made monic with
//! respect to the graded-lexicographic order on `(q, d, y)`.
//! Common factors are cancelled whenever the denominator involves a single
//! symbol, which covers every denominator the workbench produces (products of
//! q-integers). Equality of quotients is decided by cross-multiplication, so
//! it is exact even when no cancellation was possible.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inverting the non-unit Laurent polynomial {0} requires promotion to a quotient")]
    PromotionRequired(String),
    #[error("specialization makes a denominator vanish")]
    VanishingDenominator,
    #[error("malformed scalar text: {0}")]
    Parse(String),
}

/// Formal symbols a Laurent polynomial may involve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    Q,
    D,
    Y,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Q, Symbol::D, Symbol::Y];

    fn index(self) -> usize {
        match self {
            Symbol::Q => 0,
            Symbol::D => 1,
            Symbol::Y => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Symbol::Q => "q",
            Symbol::D => "d",
            Symbol::Y => "y",
        }
    }
}

/// Exponent vector over `(q, d, y)`, ordered graded-lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [i32; 3]);

impl Monomial {
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn of(symbol: Symbol, exp: i32) -> Self {
        let mut m = Monomial::default();
        m.0[symbol.index()] = exp;
        m
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    fn inv(&self) -> Monomial {
        Monomial([-self.0[0], -self.0[1], -self.0[2]])
    }

    fn is_one(&self) -> bool {
        self.0 == [0, 0, 0]
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finitely supported map from monomials to nonzero rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<Monomial, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn constant(c: Rational) -> Self {
        Laurent::term(Monomial::default(), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Laurent { terms }
    }

    pub fn symbol(s: Symbol) -> Self {
        Laurent::term(Monomial::of(s, 1), Rational::one())
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = Laurent::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Single nonzero term, i.e. a unit of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn shift(&self, by: &Monomial) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(m, c)| (m.mul(by), c.clone())).collect() }
    }

    /// Inverse of a unit; `None` for anything with more than one term.
    pub fn unit_inverse(&self) -> Option<Laurent> {
        if !self.is_unit() {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Some(Laurent::term(m.inv(), c.recip()))
    }

    fn min_exponents(&self) -> Monomial {
        let mut lo = [i32::MAX; 3];
        for m in self.terms.keys() {
            for (l, e) in lo.iter_mut().zip(m.0) {
                *l = (*l).min(e);
            }
        }
        if self.terms.is_empty() {
            lo = [0; 3];
        }
        Monomial(lo)
    }

    fn symbols_used(&self) -> Vec<Symbol> {
        Symbol::ALL
            .into_iter()
            .filter(|s| {
                let first = self.terms.keys().next().map(|m| m.0[s.index()]);
                self.terms.keys().any(|m| Some(m.0[s.index()]) != first)
            })
            .collect()
    }

    /// Evaluate the symbols given in `values`; others stay formal.
    pub fn specialize(&self, values: &Specialization) -> Result<Laurent, ScalarError> {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::default();
            for s in Symbol::ALL {
                let e = m.0[s.index()];
                match values.get(s) {
                    Some(v) => coeff *= rational_pow(v, e as i64)?,
                    None => rest.0[s.index()] = e,
                }
            }
            out.add_term(rest, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for s in Symbol::ALL {
                match m.0[s.index()] {
                    0 => {}
                    1 => factors.push(s.name().to_string()),
                    e => factors.push(format!("{}^{}", s.name(), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

pub fn rational_pow(base: &Rational, exp: i64) -> Result<Rational, ScalarError> {
    if exp < 0 && base.is_zero() {
        return Err(ScalarError::VanishingDenominator);
    }
    let mut acc = Rational::one();
    let b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    let mut p = b;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &p;
        }
        e >>= 1;
        if e > 0 {
            p = &p * &p;
        }
    }
    Ok(acc)
}

/// Values substituted for formal symbols.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Specialization {
    pub q: Option<Rational>,
    pub d: Option<Rational>,
    pub y: Option<Rational>,
}

impl Specialization {
    pub fn get(&self, s: Symbol) -> Option<&Rational> {
        match s {
            Symbol::Q => self.q.as_ref(),
            Symbol::D => self.d.as_ref(),
            Symbol::Y => self.y.as_ref(),
        }
    }
}

// ---- univariate helpers used for cancellation in quotients ----

/// Dense coefficients, lowest degree first, no trailing zeros.
type Dense = Vec<Rational>;

fn dense_trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn dense_rem(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / &lb;
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &factor * c;
        }
        r = dense_trim(r);
    }
    r
}

fn dense_div_exact(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    let mut quot = vec![Rational::zero(); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / &lb;
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &factor * c;
        }
        quot[shift] = factor;
        r = dense_trim(r);
    }
    debug_assert!(r.is_empty(), "inexact univariate division");
    dense_trim(quot)
}

fn dense_gcd(a: &Dense, b: &Dense) -> Dense {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        x.iter_mut().for_each(|c| *c /= &l);
    }
    x
}

/// Split `p` as `Σ other_monomial · poly_in(s)`; exponents of `s` shifted to start at 0.
fn split_by_symbol(p: &Laurent, s: Symbol) -> BTreeMap<Monomial, (i32, Dense)> {
    let idx = s.index();
    let mut groups: BTreeMap<Monomial, Vec<(i32, Rational)>> = BTreeMap::new();
    for (m, c) in &p.terms {
        let mut rest = *m;
        rest.0[idx] = 0;
        groups.entry(rest).or_default().push((m.0[idx], c.clone()));
    }
    groups
        .into_iter()
        .map(|(rest, v)| {
            let lo = v.iter().map(|(e, _)| *e).min().unwrap();
            let hi = v.iter().map(|(e, _)| *e).max().unwrap();
            let mut dense = vec![Rational::zero(); (hi - lo + 1) as usize];
            for (e, c) in v {
                dense[(e - lo) as usize] = c;
            }
            (rest, (lo, dense))
        })
        .collect()
}

fn join_by_symbol(parts: &BTreeMap<Monomial, (i32, Dense)>, s: Symbol) -> Laurent {
    let idx = s.index();
    let mut out = Laurent::zero();
    for (rest, (lo, dense)) in parts {
        for (k, c) in dense.iter().enumerate() {
            let mut m = *rest;
            m.0[idx] = lo + k as i32;
            out.add_term(m, c.clone());
        }
    }
    out
}

/// Exact coefficient value.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(Rational),
    Laurent(Laurent),
    Fraction(Laurent, Laurent),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn int(v: i64) -> Self {
        Scalar::Rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn symbol(s: Symbol) -> Self {
        Scalar::Laurent(Laurent::symbol(s))
    }

    pub fn q() -> Self {
        Scalar::symbol(Symbol::Q)
    }

    pub fn d() -> Self {
        Scalar::symbol(Symbol::D)
    }

    pub fn y() -> Self {
        Scalar::symbol(Symbol::Y)
    }

    pub fn monomial(c: Rational, exps: [i32; 3]) -> Self {
        Scalar::from_laurent(Laurent::term(Monomial(exps), c))
    }

    pub fn from_laurent(l: Laurent) -> Self {
        match l.as_constant() {
            Some(c) => Scalar::Rational(c),
            None => Scalar::Laurent(l),
        }
    }

    /// Build a quotient and bring it to canonical form.
    pub fn from_fraction(num: Laurent, den: Laurent) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        let content = den.min_exponents();
        let mut den = den.shift(&content.inv());
        let mut num = num.shift(&content.inv());
        if den.is_unit() {
            let inv = den.unit_inverse().unwrap();
            return Ok(Scalar::from_laurent(num.mul(&inv)));
        }
        let used = den.symbols_used();
        if used.len() == 1 {
            let s = used[0];
            let den_parts = split_by_symbol(&den, s);
            // content already removed, so den is a plain polynomial in s
            let (rest, (_, den_dense)) = den_parts.iter().next().unwrap();
            let mut g = den_dense.clone();
            let num_parts = split_by_symbol(&num, s);
            for (_, dense) in num_parts.values() {
                if g.len() <= 1 {
                    break;
                }
                g = dense_gcd(&g, dense);
            }
            if g.len() > 1 {
                let den_q = dense_div_exact(den_dense, &g);
                let mut new_den = BTreeMap::new();
                new_den.insert(*rest, (0, den_q));
                den = join_by_symbol(&new_den, s);
                let new_num: BTreeMap<_, _> = num_parts
                    .into_iter()
                    .map(|(m, (lo, dense))| (m, (lo, dense_div_exact(&dense, &g))))
                    .collect();
                num = join_by_symbol(&new_num, s);
            }
            if den.is_unit() {
                let inv = den.unit_inverse().unwrap();
                return Ok(Scalar::from_laurent(num.mul(&inv)));
            }
        }
        // a monomial multiple of the denominator, whatever symbols it uses
        let (nm, nc) = num.leading().unwrap();
        let (dm, dc) = den.leading().unwrap();
        let (ratio, c) = (nm.mul(&dm.inv()), nc / dc);
        if den.shift(&ratio).scale(&c) == num {
            return Ok(Scalar::from_laurent(Laurent::term(ratio, c)));
        }
        let lead = den.leading().unwrap().1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            den = den.scale(&inv);
            num = num.scale(&inv);
        }
        Ok(Scalar::Fraction(num, den))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Laurent(l) => l.is_zero(),
            Scalar::Fraction(n, _) => n.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    fn num_den(&self) -> (Laurent, Laurent) {
        match self {
            Scalar::Rational(r) => (Laurent::constant(r.clone()), Laurent::constant(Rational::one())),
            Scalar::Laurent(l) => (l.clone(), Laurent::constant(Rational::one())),
            Scalar::Fraction(n, d) => (n.clone(), d.clone()),
        }
    }

    fn as_laurent(&self) -> Option<Laurent> {
        match self {
            Scalar::Rational(r) => Some(Laurent::constant(r.clone())),
            Scalar::Laurent(l) => Some(l.clone()),
            Scalar::Fraction(..) => None,
        }
    }

    /// Units: nonzero rationals, Laurent monomials, nonzero quotients.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Rational(r) => !r.is_zero(),
            Scalar::Laurent(l) => l.is_unit(),
            Scalar::Fraction(n, _) => !n.is_zero(),
        }
    }

    /// Inverse without leaving the current shape; non-unit Laurent
    /// polynomials are refused.
    pub fn try_invert(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(r) if r.is_zero() => Err(ScalarError::DivisionByZero),
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Laurent(l) => match l.unit_inverse() {
                Some(inv) => Ok(Scalar::from_laurent(inv)),
                None => Err(ScalarError::PromotionRequired(l.to_string())),
            },
            Scalar::Fraction(n, d) => Scalar::from_fraction(d.clone(), n.clone()),
        }
    }

    /// Inverse, promoting a non-unit Laurent polynomial to a quotient.
    pub fn invert(&self) -> Result<Scalar, ScalarError> {
        match self.try_invert() {
            Err(ScalarError::PromotionRequired(_)) => {
                let (n, d) = self.num_den();
                Scalar::from_fraction(d, n)
            }
            other => other,
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &other.invert()?)
    }

    pub fn pow(&self, exp: i64) -> Result<Scalar, ScalarError> {
        if let Scalar::Rational(r) = self {
            return rational_pow(r, exp)
                .map(Scalar::Rational)
                .map_err(|_| ScalarError::DivisionByZero);
        }
        let base = if exp < 0 { self.invert()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Scalar::one();
        let mut p = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &p;
            }
            e >>= 1;
            if e > 0 {
                p = &p * &p;
            }
        }
        Ok(acc)
    }

    /// Power of a unit; panics on a non-unit. Used for parameter powers
    /// that are units by construction.
    pub fn upow(&self, exp: i64) -> Scalar {
        self.pow(exp).expect("power of a non-unit")
    }

    pub fn specialize(&self, values: &Specialization) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(_) => Ok(self.clone()),
            Scalar::Laurent(l) => Ok(Scalar::from_laurent(l.specialize(values)?)),
            Scalar::Fraction(n, d) => {
                let d = d.specialize(values)?;
                if d.is_zero() {
                    return Err(ScalarError::VanishingDenominator);
                }
                Scalar::from_fraction(n.specialize(values)?, d)
            }
        }
    }

    fn add_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => match (self.as_laurent(), other.as_laurent()) {
                (Some(a), Some(b)) => Scalar::from_laurent(a.add(&b)),
                _ => {
                    let (an, ad) = self.num_den();
                    let (bn, bd) = other.num_den();
                    if ad == bd {
                        return Scalar::from_fraction(an.add(&bn), ad).unwrap();
                    }
                    Scalar::from_fraction(an.mul(&bd).add(&bn.mul(&ad)), ad.mul(&bd)).unwrap()
                }
            },
        }
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Rational(a), Scalar::Laurent(l)) | (Scalar::Laurent(l), Scalar::Rational(a)) => {
                Scalar::from_laurent(l.scale(a))
            }
            (Scalar::Laurent(a), Scalar::Laurent(b)) => Scalar::from_laurent(a.mul(b)),
            _ => {
                if self.is_zero() || other.is_zero() {
                    return Scalar::zero();
                }
                let (an, ad) = self.num_den();
                let (bn, bd) = other.num_den();
                Scalar::from_fraction(an.mul(&bn), ad.mul(&bd)).unwrap()
            }
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Laurent(l) => Scalar::Laurent(l.neg()),
            Scalar::Fraction(n, d) => Scalar::Fraction(n.neg(), d.clone()),
        }
    }

    /// `p/q` text for rationals.
    pub fn rational_text(r: &Rational) -> String {
        if r.denom().is_one() {
            format!("{}", r.numer())
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
        let t = text.trim();
        let bad = || ScalarError::Parse(text.to_string());
        let r = match t.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                Rational::new(a, b)
            }
            None => Rational::from_integer(t.parse().map_err(|_| bad())?),
        };
        Ok(r)
    }

    /// Parse `p/q`, an integer, or one of the symbols `q`, `d`, `y`.
    pub fn parse(text: &str) -> Result<Scalar, ScalarError> {
        match text.trim() {
            "q" => Ok(Scalar::q()),
            "d" => Ok(Scalar::d()),
            "y" => Ok(Scalar::y()),
            other => Scalar::parse_rational(other).map(Scalar::Rational),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Laurent(a), Scalar::Laurent(b)) => a == b,
            (Scalar::Fraction(..), _) | (_, Scalar::Fraction(..)) => (self - other).is_zero(),
            _ => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", Scalar::rational_text(r)),
            Scalar::Laurent(l) => write!(f, "{}", l),
            Scalar::Fraction(n, d) => write!(f, "({})/({})", n, d),
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Mul, mul, mul_ref);

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_ref(&rhs.neg_ref())
    }
}

impl Sub<Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Sub<&Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        &self - rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (&mut *self, rhs) {
            *a += b;
            return;
        }
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (&mut *self, rhs) {
            *a -= b;
            return;
        }
        *self = self.add_ref(&rhs.neg_ref());
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (&mut *self, rhs) {
            *a *= b;
            return;
        }
        *self = self.mul_ref(rhs);
    }
}

// ---- JSON form: rationals as "p/q", Laurent terms as [exponents, "p/q"] ----

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ScalarRepr {
    Rational { value: String },
    Laurent { terms: Vec<([i32; 3], String)> },
    Fraction { num: Vec<([i32; 3], String)>, den: Vec<([i32; 3], String)> },
}

fn laurent_repr(l: &Laurent) -> Vec<([i32; 3], String)> {
    l.terms.iter().map(|(m, c)| (m.0, Scalar::rational_text(c))).collect()
}

fn laurent_from_repr(terms: &[([i32; 3], String)]) -> Result<Laurent, ScalarError> {
    let mut out = Laurent::zero();
    for (e, c) in terms {
        out.add_term(Monomial(*e), Scalar::parse_rational(c)?);
    }
    Ok(out)
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Scalar::Rational(r) => ScalarRepr::Rational { value: Scalar::rational_text(r) },
            Scalar::Laurent(l) => ScalarRepr::Laurent { terms: laurent_repr(l) },
            Scalar::Fraction(n, d) => ScalarRepr::Fraction { num: laurent_repr(n), den: laurent_repr(d) },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ScalarRepr::deserialize(deserializer)?;
        let out = match repr {
            ScalarRepr::Rational { value } => {
                Scalar::Rational(Scalar::parse_rational(&value).map_err(D::Error::custom)?)
            }
            ScalarRepr::Laurent { terms } => {
                Scalar::from_laurent(laurent_from_repr(&terms).map_err(D::Error::custom)?)
            }
            ScalarRepr::Fraction { num, den } => Scalar::from_fraction(
                laurent_from_repr(&num).map_err(D::Error::custom)?,
                laurent_from_repr(&den).map_err(D::Error::custom)?,
            )
            .map_err(D::Error::custom)?,
        };
        Ok(out)
    }
}

/// Absolute value of a rational, used to keep specialized `q` off the unit circle.
pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}

/// gcd of two machine integers, re-exported for small combinatorial helpers.
pub fn igcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::q()
    }

    #[test]
    fn difference_of_squares() {
        let lhs = (q() + Scalar::one()) * (q() - Scalar::one());
        let rhs = q().upow(2) - Scalar::one();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_inverse() {
        let a = Scalar::int(2) * q().upow(-3);
        let inv = a.try_invert().unwrap();
        assert_eq!(inv, Scalar::ratio(1, 2) * q().upow(3));
    }

    #[test]
    fn specialization_of_x() {
        // n = 4: x = q^5 d^-5
        let x = q().upow(5) * Scalar::d().upow(-5);
        let spec = Specialization {
            q: Some(Rational::from_integer(2.into())),
            d: Some(Rational::from_integer(3.into())),
            y: None,
        };
        assert_eq!(x.specialize(&spec).unwrap(), Scalar::ratio(32, 243));
    }

    #[test]
    fn non_unit_inverse_needs_promotion() {
        let p = q() + Scalar::one();
        assert!(matches!(p.try_invert(), Err(ScalarError::PromotionRequired(_))));
        let inv = p.invert().unwrap();
        assert!(matches!(inv, Scalar::Fraction(..)));
        assert_eq!(&inv * &p, Scalar::one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Scalar::zero().try_invert(), Err(ScalarError::DivisionByZero));
        assert_eq!(Scalar::zero().invert(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn fraction_cancels_common_factor() {
        // (q^4 - 1) / (q^2 + 1) = q^2 - 1
        let num = q().upow(4) - Scalar::one();
        let den = q().upow(2) + Scalar::one();
        let r = num.checked_div(&den).unwrap();
        assert!(matches!(r, Scalar::Laurent(_)));
        assert_eq!(r, q().upow(2) - Scalar::one());
    }

    #[test]
    fn multiple_of_two_symbol_denominator_demotes() {
        let a = Scalar::int(-1) - Scalar::d() * Scalar::y();
        let inv = Scalar::one().checked_div(&a).unwrap();
        assert!(matches!(inv, Scalar::Fraction(..)));
        assert!((&a * &inv).is_one());
        let r = (&a * &q()).checked_div(&(&a * &Scalar::int(2))).unwrap();
        assert!(matches!(r, Scalar::Laurent(_)));
        assert_eq!(r, q() * Scalar::ratio(1, 2));
    }

    #[test]
    fn fraction_canonical_form_is_monic() {
        let den = Scalar::int(3) * q() + Scalar::int(6);
        let r = Scalar::d().checked_div(&den).unwrap();
        match &r {
            Scalar::Fraction(_, d) => assert!(d.leading().unwrap().1.is_one()),
            other => panic!("expected a quotient, got {other}"),
        }
        assert_eq!(r * den, Scalar::d());
    }

    #[test]
    fn json_round_trip() {
        let vals = [
            Scalar::ratio(-7, 3),
            q().upow(2) * Scalar::d() - Scalar::ratio(1, 2),
            Scalar::one().checked_div(&(q() + Scalar::one())).unwrap(),
        ];
        for v in vals {
            let text = serde_json::to_string(&v).unwrap();
            let back: Scalar = serde_json::from_str(&text).unwrap();
            assert_eq!(back, v);
            assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
        assert_eq!(serde_json::to_string(&Scalar::ratio(3, 4)).unwrap(), r#"{"kind":"rational","value":"3/4"}"#);
    }

    #[test]
    fn display() {
        let p = q().upow(2) - Scalar::ratio(1, 2) * Scalar::d().upow(-1);
        assert_eq!(p.to_string(), "q^2 - 1/2*d^-1");
    }
}
