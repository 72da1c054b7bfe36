//! Words in the generators and their right action on module vectors.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::module::{HModuleVector, RightHeckeModule, WindowBudget};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter} out of range for l = {l}")]
    IndexOutOfRange { letter: String, l: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter {
    T(usize),
    TInv(usize),
    X(usize, i64),
    Y(usize, i64),
    Q(i64),
}

impl Letter {
    pub fn inverse(&self) -> Letter {
        match *self {
            Letter::T(i) => Letter::TInv(i),
            Letter::TInv(i) => Letter::T(i),
            Letter::X(j, e) => Letter::X(j, -e),
            Letter::Y(j, e) => Letter::Y(j, -e),
            Letter::Q(e) => Letter::Q(-e),
        }
    }

    fn check(&self, l: usize) -> Result<(), WordError> {
        let ok = match *self {
            Letter::T(i) | Letter::TInv(i) => (1..l).contains(&i),
            Letter::X(j, _) | Letter::Y(j, _) => (1..=l).contains(&j),
            Letter::Q(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(WordError::IndexOutOfRange { letter: self.to_string(), l })
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::T(i) => write!(f, "T{}", i),
            Letter::TInv(i) => write!(f, "T{}^-1", i),
            Letter::X(j, e) => write!(f, "X{}^{}", j, e),
            Letter::Y(j, e) => write!(f, "Y{}^{}", j, e),
            Letter::Q(e) => write!(f, "Q^{}", e),
        }
    }
}

/// Scalar multiple of a product of letters, read left to right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeckeWord {
    pub coeff: Scalar,
    pub letters: Vec<Letter>,
}

impl HeckeWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        HeckeWord { coeff: Scalar::one(), letters }
    }

    pub fn one() -> Self {
        HeckeWord::new(vec![])
    }

    pub fn scaled(mut self, c: &Scalar) -> Self {
        self.coeff = &self.coeff * c;
        self
    }

    pub fn then(mut self, other: &HeckeWord) -> Self {
        self.coeff = &self.coeff * &other.coeff;
        self.letters.extend(other.letters.iter().cloned());
        self
    }

    pub fn inverse(&self) -> Self {
        HeckeWord {
            coeff: self.coeff.invert().expect("invertible word coefficient"),
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// `a·w·a^{-1}`
    pub fn conjugate(&self, a: &HeckeWord) -> Self {
        a.clone().then(self).then(&a.inverse())
    }
}

impl fmt::Display for HeckeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        let body = if letters.is_empty() { "1".to_string() } else { letters.join("·") };
        if self.coeff.is_one() {
            write!(f, "{}", body)
        } else {
            write!(f, "({})·{}", self.coeff, body)
        }
    }
}

/// Formal sum of words.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HeckeExpr {
    pub terms: Vec<HeckeWord>,
}

impl HeckeExpr {
    pub fn zero() -> Self {
        HeckeExpr::default()
    }

    pub fn plus(mut self, w: HeckeWord) -> Self {
        self.terms.push(w);
        self
    }
}

impl From<HeckeWord> for HeckeExpr {
    fn from(w: HeckeWord) -> Self {
        HeckeExpr { terms: vec![w] }
    }
}

pub fn t(i: usize) -> HeckeWord {
    HeckeWord::new(vec![Letter::T(i)])
}

pub fn t_inv(i: usize) -> HeckeWord {
    HeckeWord::new(vec![Letter::TInv(i)])
}

pub fn x(j: usize, e: i64) -> HeckeWord {
    HeckeWord::new(vec![Letter::X(j, e)])
}

pub fn y(j: usize, e: i64) -> HeckeWord {
    HeckeWord::new(vec![Letter::Y(j, e)])
}

pub fn q_letter(e: i64) -> HeckeWord {
    HeckeWord::new(vec![Letter::Q(e)])
}

/// `X_0 = X_1⋯X_l`
pub fn x0(l: usize) -> HeckeWord {
    HeckeWord::new((1..=l).map(|j| Letter::X(j, 1)).collect())
}

/// `T_{i,j}`: ascending `T_i T_{i+1}⋯T_j` when `i ≤ j`, descending otherwise.
pub fn t_range(i: usize, j: usize) -> HeckeWord {
    let letters = if i <= j {
        (i..=j).map(Letter::T).collect()
    } else {
        (j..=i).rev().map(Letter::T).collect()
    };
    HeckeWord::new(letters)
}

/// `Q = X_1·T_{1,l-1}`
pub fn q_word(l: usize) -> HeckeWord {
    if l == 1 {
        return x(1, 1);
    }
    x(1, 1).then(&t_range(1, l - 1))
}

/// `Q_{i,j} = X_i·T_{i,j}`
pub fn q_ij(i: usize, j: usize) -> HeckeWord {
    x(i, 1).then(&t_range(i, j))
}

/// `P_r = Q_{l-r,l-1}⋯Q_{2,r+1}·Q_{1,r}`
pub fn p_r(l: usize, r: usize) -> HeckeWord {
    let mut w = HeckeWord::one();
    for a in (1..=l - r).rev() {
        w = w.then(&q_ij(a, a + r - 1));
    }
    w
}

fn expand_q(l: usize, e: i64) -> Vec<Letter> {
    let base = q_word(l);
    let unit = if e >= 0 { base } else { base.inverse() };
    let mut out = Vec::new();
    for _ in 0..e.unsigned_abs() {
        out.extend(unit.letters.iter().cloned());
    }
    out
}

pub fn validate_word(w: &HeckeWord, l: usize) -> Result<(), WordError> {
    w.letters.iter().try_for_each(|letter| letter.check(l))
}

fn apply_letters(module: &dyn RightHeckeModule, letters: &[Letter], v: &HModuleVector, b: &mut WindowBudget) -> HModuleVector {
    let mut w = v.clone();
    for letter in letters {
        if w.is_zero() {
            break;
        }
        w = match *letter {
            Letter::T(i) => module.act_t(i, &w, b),
            Letter::TInv(i) => module.act_t_inv(i, &w, b),
            Letter::X(j, e) => module.act_x(j, e, &w, b),
            Letter::Y(j, e) => module.act_y(j, e, &w, b),
            Letter::Q(e) => apply_letters(module, &expand_q(module.l(), e), &w, b),
        };
    }
    w
}

/// `v·w`, letters applied left to right.
pub fn apply_word(module: &dyn RightHeckeModule, w: &HeckeWord, v: &HModuleVector) -> Result<(HModuleVector, WindowBudget), WordError> {
    validate_word(w, module.l())?;
    let mut b = module.new_budget();
    b.observe_vec(v);
    let out = apply_letters(module, &w.letters, v, &mut b).scaled(&w.coeff);
    Ok((out, b))
}

pub fn apply_expr(module: &dyn RightHeckeModule, e: &HeckeExpr, v: &HModuleVector) -> Result<(HModuleVector, WindowBudget), WordError> {
    let mut out = HModuleVector::zero();
    let mut b = module.new_budget();
    b.observe_vec(v);
    for w in &e.terms {
        let (r, wb) = apply_word(module, w, v)?;
        out.add_assign(&r);
        b.extent.merge(&wb.extent);
    }
    Ok((out, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::module::PolynomialModule;
    use crate::params::Params;

    fn module() -> PolynomialModule {
        let p = Params::duality(4, 2, Scalar::int(2), Scalar::int(3)).unwrap();
        PolynomialModule::new(&p, 8).unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let m = module();
        let v = PolynomialModule::monomial(vec![1, -2]);
        let (w, b) = apply_word(&m, &HeckeWord::one(), &v).unwrap();
        assert_eq!(w, v);
        assert_eq!(b.margin(), vec![7, 6]);
    }

    #[test]
    fn t_then_inverse() {
        let m = module();
        let v = PolynomialModule::monomial(vec![3, -1]);
        let (w, _) = apply_word(&m, &t(1).then(&t_inv(1)), &v).unwrap();
        assert_eq!(w, v);
    }

    #[test]
    fn q_letter_expands() {
        let m = module();
        let v = PolynomialModule::monomial(vec![0, 0]);
        let (a, _) = apply_word(&m, &q_letter(1), &v).unwrap();
        let (b, _) = apply_word(&m, &x(1, 1).then(&t(1)), &v).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_range() {
        let m = module();
        let v = PolynomialModule::monomial(vec![0, 0]);
        assert!(apply_word(&m, &t(2), &v).is_err());
        assert!(apply_word(&m, &y(3, 1), &v).is_err());
    }

    #[test]
    fn p_r_shape() {
        assert_eq!(p_r(2, 1), q_ij(1, 1));
        assert_eq!(p_r(3, 1), q_ij(2, 2).then(&q_ij(1, 1)));
        assert_eq!(p_r(3, 2), q_ij(1, 2));
        assert_eq!(p_r(4, 2), q_ij(2, 3).then(&q_ij(1, 2)));
    }
}
