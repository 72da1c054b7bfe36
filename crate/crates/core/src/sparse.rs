//! Finitely supported vectors with exact coefficients.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "K: Serialize + Ord", deserialize = "K: Deserialize<'de> + Ord"))]
pub struct SparseVec<K: Ord> {
    #[serde(with = "pairs")]
    map: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec { map: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, Scalar::one())
    }

    pub fn term(key: K, c: Scalar) -> Self {
        let mut v = Self::zero();
        v.add_term(key, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Scalar> {
        self.map.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.map.keys()
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.map.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.map.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, other: &SparseVec<K>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (k, x) in &other.map {
            let t = if unit { x.clone() } else { x * c };
            self.add_term(k.clone(), t);
        }
    }

    pub fn add_assign(&mut self, other: &SparseVec<K>) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec<K> {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        SparseVec { map: self.map.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    pub fn sub(&self, other: &SparseVec<K>) -> SparseVec<K> {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::int(-1));
        out
    }

    /// Apply a linear map given on basis keys.
    pub fn map_linear<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> SparseVec<K2>) -> SparseVec<K2> {
        let mut out = SparseVec::zero();
        for (k, c) in &self.map {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Relabel keys with a scalar factor; colliding keys are summed.
    pub fn map_terms<K2: Ord + Clone>(&self, mut f: impl FnMut(&K, &Scalar) -> Option<(K2, Scalar)>) -> SparseVec<K2> {
        let mut out = SparseVec::zero();
        for (k, c) in &self.map {
            if let Some((k2, c2)) = f(k, c) {
                out.add_term(k2, c2);
            }
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for SparseVec<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut v = SparseVec::zero();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

mod pairs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<K: Serialize, S: Serializer>(map: &BTreeMap<K, Scalar>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter())
    }

    pub fn deserialize<'de, K: Deserialize<'de> + Ord, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<K, Scalar>, D::Error> {
        let v: Vec<(K, Scalar)> = Vec::deserialize(d)?;
        Ok(v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_keys() {
        let mut v = SparseVec::basis(3u32);
        v.add_term(3, Scalar::int(-1));
        assert!(v.is_zero());
    }

    #[test]
    fn linear_map() {
        let v: SparseVec<i32> = [(1, Scalar::int(2)), (2, Scalar::int(3))].into_iter().collect();
        let w = v.map_linear(|k| SparseVec::term(k % 2, Scalar::int(*k as i64)));
        assert_eq!(w.coeff(&1), Scalar::int(2));
        assert_eq!(w.coeff(&0), Scalar::int(6));
    }
}
