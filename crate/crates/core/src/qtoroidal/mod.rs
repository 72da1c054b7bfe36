//! Quantum toroidal currents: structure constants, the mode-operator
//! interface and generic relation checkers.

mod cartan;
mod relations;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::hecke::WindowBudget;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

pub use cartan::*;
pub use relations::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeKind {
    E,
    F,
    KPlus,
    KMinus,
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModeKind::E => "e",
            ModeKind::F => "f",
            ModeKind::KPlus => "k+",
            ModeKind::KMinus => "k-",
        };
        f.write_str(s)
    }
}

/// A module exposing the modes of the currents `e_i(z), f_i(z), k^±_i(z)`.
///
/// Mode `k` is always the coefficient of `z^{-k}`, so `k^+` lives in `k ≥ 0`
/// and `k^-` in `k ≤ 0`; outside those ranges `apply_mode` returns zero.
pub trait ModeOperators: Sync {
    type Key: Ord + Clone + Send + Sync + fmt::Debug;

    fn n(&self) -> usize;
    fn l(&self) -> usize;
    fn q(&self) -> &Scalar;
    fn d(&self) -> &Scalar;

    fn new_budget(&self) -> WindowBudget {
        WindowBudget::unbounded()
    }

    fn observe(&self, _v: &SparseVec<Self::Key>, _b: &mut WindowBudget) {}

    fn apply_mode(&self, kind: ModeKind, i: usize, k: i64, v: &SparseVec<Self::Key>, b: &mut WindowBudget) -> SparseVec<Self::Key>;

    /// Split a vector into pieces that should be simultaneous `k_{i,0}`
    /// eigenvectors. The default splits by basis key.
    fn weight_components(&self, v: &SparseVec<Self::Key>) -> Vec<SparseVec<Self::Key>> {
        v.iter().map(|(k, c)| SparseVec::term(k.clone(), c.clone())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "K: Serialize + Ord", deserialize = "K: Deserialize<'de> + Ord"))]
pub struct ModeProbe<K: Ord> {
    pub id: String,
    pub vector: SparseVec<K>,
}

impl<K: Ord> ModeProbe<K> {
    pub fn new(id: impl Into<String>, vector: SparseVec<K>) -> Self {
        ModeProbe { id: id.into(), vector }
    }
}

/// Negative control: one mode operator `g_{i,k}` multiplied by `factor`.
pub struct PerturbedModes<'a, O: ModeOperators> {
    pub inner: &'a O,
    pub kind: ModeKind,
    pub i: usize,
    pub k: i64,
    pub factor: Scalar,
}

impl<O: ModeOperators> ModeOperators for PerturbedModes<'_, O> {
    type Key = O::Key;

    fn n(&self) -> usize {
        self.inner.n()
    }
    fn l(&self) -> usize {
        self.inner.l()
    }
    fn q(&self) -> &Scalar {
        self.inner.q()
    }
    fn d(&self) -> &Scalar {
        self.inner.d()
    }
    fn new_budget(&self) -> WindowBudget {
        self.inner.new_budget()
    }
    fn observe(&self, v: &SparseVec<Self::Key>, b: &mut WindowBudget) {
        self.inner.observe(v, b)
    }
    fn apply_mode(&self, kind: ModeKind, i: usize, k: i64, v: &SparseVec<Self::Key>, b: &mut WindowBudget) -> SparseVec<Self::Key> {
        let w = self.inner.apply_mode(kind, i, k, v, b);
        if (kind, i, k) == (self.kind, self.i, self.k) {
            w.scaled(&self.factor)
        } else {
            w
        }
    }
    fn weight_components(&self, v: &SparseVec<Self::Key>) -> Vec<SparseVec<Self::Key>> {
        self.inner.weight_components(v)
    }
}
