//! The cyclic matrices `A` and `M` on vertices `0..=n`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("need n >= 2 for a cyclic diagram (got n = {0})")]
    TooSmall(usize),
    #[error("vertex {0} outside 0..={1}")]
    OutOfRange(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    n: usize,
}

impl CartanData {
    pub fn new(n: usize) -> Result<Self, CartanError> {
        if n < 2 {
            return Err(CartanError::TooSmall(n));
        }
        Ok(CartanData { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    fn check(&self, i: usize, j: usize) -> Result<(), CartanError> {
        for v in [i, j] {
            if v > self.n {
                return Err(CartanError::OutOfRange(v, self.n));
            }
        }
        Ok(())
    }

    pub fn cartan_entry(&self, i: usize, j: usize) -> Result<i64, CartanError> {
        self.check(i, j)?;
        Ok(self.a(i, j))
    }

    pub fn m_entry(&self, i: usize, j: usize) -> Result<i64, CartanError> {
        self.check(i, j)?;
        Ok(self.m(i, j))
    }

    /// Unchecked `a(i, j)`; indices are reduced mod `n + 1`.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        let s = self.size();
        let (i, j) = (i % s, j % s);
        if i == j {
            2
        } else if (j + s - i) % s == 1 || (i + s - j) % s == 1 {
            -1
        } else {
            0
        }
    }

    /// Unchecked `m(i, j)`: `-1` if `j ≡ i+1`, `+1` if `j ≡ i-1`.
    pub fn m(&self, i: usize, j: usize) -> i64 {
        let s = self.size();
        let (i, j) = (i % s, j % s);
        if i == j {
            0
        } else if (j + s - i) % s == 1 {
            -1
        } else if (i + s - j) % s == 1 {
            1
        } else {
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_entries() {
        let c = CartanData::new(3).unwrap();
        assert_eq!(c.cartan_entry(0, 0), Ok(2));
        assert_eq!(c.cartan_entry(0, 3), Ok(-1));
        assert_eq!(c.cartan_entry(0, 2), Ok(0));
        assert_eq!(c.m_entry(0, 1), Ok(-1));
        assert_eq!(c.m_entry(1, 0), Ok(1));
        assert_eq!(c.m_entry(0, 3), Ok(1));
        assert_eq!(c.m_entry(3, 0), Ok(-1));
        assert!(c.cartan_entry(4, 0).is_err());
    }

    #[test]
    fn symmetry() {
        for n in 2..7 {
            let c = CartanData::new(n).unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    assert_eq!(c.a(i, j), c.a(j, i));
                    assert_eq!(c.m(i, j), -c.m(j, i));
                }
            }
        }
        assert!(CartanData::new(1).is_err());
    }
}
