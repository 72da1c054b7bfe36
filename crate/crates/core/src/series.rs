//! One-variable expansions of the multiplier `θ_m(z) = (q^m z − 1)/(z − q^m)`
//! and the power rule behind coefficient extraction from `δ(a z)`.

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Series in `z^{-1}`; drives `k^+`.
    AtInfinity,
    /// Series in `z`; drives `k^-`.
    AtZero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesExpansion {
    pub direction: Direction,
    /// `coeffs[r]` multiplies `z^{-r}` (at infinity) or `z^r` (at zero).
    pub coeffs: Vec<Scalar>,
    pub order: usize,
}

impl SeriesExpansion {
    pub fn coeff(&self, r: usize) -> &Scalar {
        &self.coeffs[r]
    }
}

/// Power series quotient `num / den` up to `order`, `den[0]` a unit.
pub fn power_series_div(num: &[Scalar], den: &[Scalar], order: usize) -> Result<Vec<Scalar>, ScalarError> {
    let lead_inv = den[0].try_invert()?;
    let mut out: Vec<Scalar> = Vec::with_capacity(order + 1);
    for r in 0..=order {
        let mut acc = num.get(r).cloned().unwrap_or_else(Scalar::zero);
        for i in 1..=r.min(den.len().saturating_sub(1)) {
            acc -= &(&den[i] * &out[r - i]);
        }
        out.push(&acc * &lead_inv);
    }
    Ok(out)
}

/// Expansion of `θ_m` to `order` by long division.
pub fn theta_expand(m: i64, direction: Direction, order: usize, q: &Scalar) -> SeriesExpansion {
    let qm = q.upow(m);
    let one = Scalar::one();
    let (num, den) = match direction {
        // (q^m − w)/(1 − q^m w), w = 1/z
        Direction::AtInfinity => (vec![qm.clone(), -&one], vec![one.clone(), -&qm]),
        // (−1 + q^m z)/(−q^m + z)
        Direction::AtZero => (vec![-&one, qm.clone()], vec![-&qm, one.clone()]),
    };
    let coeffs = power_series_div(&num, &den, order).expect("q^m is a unit");
    SeriesExpansion { direction, coeffs, order }
}

/// `a^k`: the coefficient of `z^{-k}` in `δ(a z)` up to the matching operator power.
pub fn delta_mode(a: &Scalar, k: i64) -> Result<Scalar, ScalarError> {
    if !a.is_unit() {
        return Err(ScalarError::PromotionRequired(a.to_string()));
    }
    a.pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_zero_is_one() {
        for dir in [Direction::AtInfinity, Direction::AtZero] {
            let s = theta_expand(0, dir, 4, &Scalar::q());
            assert_eq!(s.coeffs[0], Scalar::one());
            assert!(s.coeffs[1..].iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn theta_one_at_infinity() {
        let q = Scalar::q();
        let s = theta_expand(1, Direction::AtInfinity, 2, &q);
        let q2m1 = q.upow(2) - Scalar::one();
        assert_eq!(s.coeffs, vec![q.clone(), q2m1.clone(), &q2m1 * &q]);
    }

    #[test]
    fn delta_powers() {
        assert_eq!(delta_mode(&Scalar::one(), 7).unwrap(), Scalar::one());
        assert_eq!(delta_mode(&Scalar::q(), -2).unwrap(), Scalar::q().upow(-2));
        let a = Scalar::q().upow(3) * Scalar::d();
        assert_eq!(delta_mode(&a, 1).unwrap(), a);
        assert!(delta_mode(&(Scalar::q() + Scalar::one()), 1).is_err());
    }
}
