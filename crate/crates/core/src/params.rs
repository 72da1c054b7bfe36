//! Parameter blocks.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("constraint violated: {0}")]
    Constraint(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamMode {
    /// `x = q^{n+1} d^{-n-1}`, `y = c = 1`.
    Duality,
    /// `x`, `y` free; only Hecke checks make sense.
    HeckeOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub l: usize,
    pub q: Scalar,
    pub d: Scalar,
    pub x: Scalar,
    pub y: Scalar,
    pub mode: ParamMode,
}

fn check_q(q: &Scalar) -> Result<(), ParamError> {
    match q {
        Scalar::Rational(r) => {
            if r.is_zero() || r.abs().is_one() {
                return Err(ParamError::Constraint(format!(
                    "q = {} must satisfy |q| != 1 and q != 0 so that q is not a root of unity",
                    q
                )));
            }
            Ok(())
        }
        Scalar::Laurent(l) if l.is_unit() => Ok(()),
        _ => Err(ParamError::Constraint(format!("q = {} must be a rational or a formal monomial", q))),
    }
}

fn check_unit(name: &str, v: &Scalar) -> Result<(), ParamError> {
    if !v.is_unit() || matches!(v, Scalar::Fraction(..)) {
        return Err(ParamError::Constraint(format!("{} = {} must be a unit", name, v)));
    }
    Ok(())
}

impl Params {
    /// Parameters for `M ⊗_H V^{⊗l}`; enforces `l + 1 < n`.
    pub fn duality(n: usize, l: usize, q: Scalar, d: Scalar) -> Result<Params, ParamError> {
        if l == 0 {
            return Err(ParamError::Constraint("l >= 1".into()));
        }
        if l + 1 >= n {
            return Err(ParamError::Constraint(format!("l + 1 < n (got l = {}, n = {})", l, n)));
        }
        check_q(&q)?;
        check_unit("d", &d)?;
        let x = (&q * &d.upow(-1)).upow(n as i64 + 1);
        Ok(Params { n, l, q, d, x, y: Scalar::one(), mode: ParamMode::Duality })
    }

    /// Free `x`, `y`; `n` and `d` are only carried along.
    pub fn hecke_only(l: usize, q: Scalar, x: Scalar, y: Scalar) -> Result<Params, ParamError> {
        if l == 0 {
            return Err(ParamError::Constraint("l >= 1".into()));
        }
        check_q(&q)?;
        check_unit("x", &x)?;
        check_unit("y", &y)?;
        Ok(Params { n: 0, l, q, d: Scalar::one(), x, y, mode: ParamMode::HeckeOnly })
    }

    pub fn is_duality(&self) -> bool {
        self.mode == ParamMode::Duality
    }

    /// Re-derive `x` and `y` and compare; used when loading parameters from text.
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.mode == ParamMode::Duality {
            let fresh = Params::duality(self.n, self.l, self.q.clone(), self.d.clone())?;
            if fresh.x != self.x {
                return Err(ParamError::Constraint(format!(
                    "x = d^(-n-1) q^(n+1) (expected {}, got {})",
                    fresh.x, self.x
                )));
            }
            if !self.y.is_one() {
                return Err(ParamError::Constraint("y = 1 in duality mode".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_x() {
        let p = Params::duality(4, 2, Scalar::int(2), Scalar::int(3)).unwrap();
        assert_eq!(p.x, Scalar::ratio(32, 243));
        let p = Params::duality(3, 1, Scalar::int(2), Scalar::int(2)).unwrap();
        assert!(p.x.is_one());
    }

    #[test]
    fn rejects_long_tensors() {
        assert!(Params::duality(3, 2, Scalar::int(2), Scalar::int(3)).is_err());
        assert!(Params::duality(4, 3, Scalar::int(2), Scalar::int(3)).is_err());
    }

    #[test]
    fn rejects_unit_circle() {
        assert!(Params::duality(4, 2, Scalar::int(-1), Scalar::int(3)).is_err());
        assert!(Params::duality(4, 2, Scalar::int(1), Scalar::int(3)).is_err());
        assert!(Params::duality(4, 2, Scalar::q(), Scalar::d()).is_ok());
    }
}
