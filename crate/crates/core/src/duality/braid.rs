//! Kac–Moody generators, the algebra automorphisms `t'_i`, `τ'`, and the
//! braid operators `t''_i`, `τ''`, `t''_{ω_1}` on the tensor space.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DualitySpace, DualityVector};
use crate::hecke::WindowBudget;
use crate::qtoroidal::CartanData;
use crate::scalar::Scalar;

/// Generators of the affine quantum group; indices in `1..=n+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KmGen {
    E(usize),
    F(usize),
    K(usize),
    KInv(usize),
}

impl KmGen {
    pub fn index(&self) -> usize {
        match *self {
            KmGen::E(i) | KmGen::F(i) | KmGen::K(i) | KmGen::KInv(i) => i,
        }
    }

    fn with_index(&self, i: usize) -> KmGen {
        match self {
            KmGen::E(_) => KmGen::E(i),
            KmGen::F(_) => KmGen::F(i),
            KmGen::K(_) => KmGen::K(i),
            KmGen::KInv(_) => KmGen::KInv(i),
        }
    }

    fn is_inverse_of(&self, other: &KmGen) -> bool {
        matches!((self, other), (KmGen::K(a), KmGen::KInv(b)) | (KmGen::KInv(a), KmGen::K(b)) if a == b)
    }
}

impl fmt::Display for KmGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KmGen::E(i) => write!(f, "e{}", i),
            KmGen::F(i) => write!(f, "f{}", i),
            KmGen::K(i) => write!(f, "k{}", i),
            KmGen::KInv(i) => write!(f, "k{}^-1", i),
        }
    }
}

/// Noncommutative polynomial in the generators. The word `[g_1, g_2, …]`
/// stands for `g_1·g_2⋯`, so it acts on vectors from the right end.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KmExpr {
    pub terms: BTreeMap<Vec<KmGen>, Scalar>,
}

fn reduce(word: Vec<KmGen>) -> Vec<KmGen> {
    let mut out: Vec<KmGen> = Vec::with_capacity(word.len());
    for g in word {
        if out.last().is_some_and(|h| h.is_inverse_of(&g)) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

impl KmExpr {
    pub fn zero() -> Self {
        KmExpr::default()
    }

    pub fn word(word: Vec<KmGen>, c: Scalar) -> Self {
        let mut e = KmExpr::zero();
        e.add_word(word, c);
        e
    }

    pub fn gen(g: KmGen) -> Self {
        KmExpr::word(vec![g], Scalar::one())
    }

    fn add_word(&mut self, word: Vec<KmGen>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let word = reduce(word);
        let slot = self.terms.entry(word.clone()).or_insert_with(Scalar::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&mut self, other: &KmExpr) {
        for (w, c) in &other.terms {
            self.add_word(w.clone(), c.clone());
        }
    }

    pub fn scaled(&self, c: &Scalar) -> KmExpr {
        let mut out = KmExpr::zero();
        for (w, x) in &self.terms {
            out.add_word(w.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &KmExpr) -> KmExpr {
        let mut out = KmExpr::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().copied());
                out.add_word(w, c1 * c2);
            }
        }
        out
    }

    /// Image under the algebra map determined by `f` on generators.
    pub fn substitute(&self, f: &impl Fn(KmGen) -> KmExpr) -> KmExpr {
        let mut out = KmExpr::zero();
        for (w, c) in &self.terms {
            let mut acc = KmExpr::word(vec![], c.clone());
            for &g in w {
                acc = acc.mul(&f(g));
            }
            out.add(&acc);
        }
        out
    }
}

/// `[s]_q = (q^s − q^{-s})/(q − q^{-1})`
pub fn q_integer(q: &Scalar, s: i64) -> Scalar {
    let mut acc = Scalar::zero();
    for e in 0..s {
        acc += &q.upow(s - 1 - 2 * e);
    }
    acc
}

pub fn q_factorial(q: &Scalar, r: i64) -> Scalar {
    (1..=r).fold(Scalar::one(), |acc, s| &acc * &q_integer(q, s))
}

/// `g^{(r)} = g^r / [r]!`
pub fn divided_power(g: KmGen, r: i64, q: &Scalar) -> KmExpr {
    let c = q_factorial(q, r).invert().expect("q is not a root of unity");
    KmExpr::word(vec![g; r as usize], c)
}

fn k_power(i: usize, e: i64) -> Vec<KmGen> {
    let g = if e >= 0 { KmGen::K(i) } else { KmGen::KInv(i) };
    vec![g; e.unsigned_abs() as usize]
}

/// Lusztig's `t'_i` on a generator. `t'_i(k_j)` is taken as `k_j·k_i^{-a_ij}`.
pub fn t_prime(cartan: &CartanData, q: &Scalar, i: usize, g: KmGen) -> KmExpr {
    let j = g.index();
    let a = cartan.a(i, j);
    let minus = Scalar::int(-1);
    match g {
        KmGen::E(_) if j == i => KmExpr::word(vec![KmGen::F(i), KmGen::K(i)], minus),
        KmGen::F(_) if j == i => KmExpr::word(vec![KmGen::KInv(i), KmGen::E(i)], minus),
        KmGen::E(_) => {
            let mut out = KmExpr::zero();
            for s in 0..=-a {
                let c = &Scalar::int(if (s - a) % 2 == 0 { 1 } else { -1 }) * &q.upow(-s);
                let term = divided_power(KmGen::E(i), -a - s, q).mul(&KmExpr::gen(g)).mul(&divided_power(KmGen::E(i), s, q));
                out.add(&term.scaled(&c));
            }
            out
        }
        KmGen::F(_) => {
            let mut out = KmExpr::zero();
            for s in 0..=-a {
                let c = &Scalar::int(if (s - a) % 2 == 0 { 1 } else { -1 }) * &q.upow(s);
                let term = divided_power(KmGen::F(i), s, q).mul(&KmExpr::gen(g)).mul(&divided_power(KmGen::F(i), -a - s, q));
                out.add(&term.scaled(&c));
            }
            out
        }
        KmGen::K(_) => {
            let mut w = vec![g];
            w.extend(k_power(i, -a));
            KmExpr::word(w, Scalar::one())
        }
        KmGen::KInv(_) => {
            let mut w = vec![g];
            w.extend(k_power(i, a));
            KmExpr::word(w, Scalar::one())
        }
    }
}

/// `τ'`: rotate indices `i ↦ i+1`, `n+1 ↦ 1`.
pub fn tau_prime(n: usize, g: KmGen) -> KmExpr {
    let i = g.index();
    KmExpr::gen(g.with_index(if i == n + 1 { 1 } else { i + 1 }))
}

/// `t'_{ω_1}(u) = τ'(t'_n(⋯t'_1(u)))`
pub fn t_omega_prime(cartan: &CartanData, q: &Scalar, u: &KmExpr) -> KmExpr {
    let n = cartan.n();
    let mut e = u.clone();
    for i in 1..=n {
        e = e.substitute(&|g| t_prime(cartan, q, i, g));
    }
    e.substitute(&|g| tau_prime(n, g))
}

impl DualitySpace {
    /// Evaluate an algebra element; `decorated` selects the affine generator convention.
    pub fn eval_expr(&self, e: &KmExpr, decorated: bool, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        let mut out = DualityVector::zero();
        for (word, c) in &e.terms {
            let mut w = v.clone();
            for &g in word.iter().rev() {
                if w.is_zero() {
                    break;
                }
                w = self.generator(g, decorated, &w, b);
            }
            out.add_scaled(&w, c);
        }
        out
    }

    fn divided(&self, g: KmGen, r: i64, decorated: bool, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        let mut w = v.clone();
        for _ in 0..r {
            if w.is_zero() {
                return w;
            }
            w = self.generator(g, decorated, &w, b);
        }
        w.scaled(&q_factorial(&self.q, r).invert().expect("q is not a root of unity"))
    }

    /// `t''_i(m') = Σ_{r−s+t=−k} (−1)^{s+k} q^{s−rt} e_i^{(r)} f_i^{(s)} e_i^{(t)} m'`
    /// on each `k_i`-weight component `k_i m' = q^k m'`.
    pub fn braid_t(&self, i: usize, decorated: bool, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        let mut out = DualityVector::zero();
        let mut by_weight: BTreeMap<i64, DualityVector> = BTreeMap::new();
        for (key, c) in v.iter() {
            by_weight.entry(self.k_weight(i, &key.j)).or_default().add_term(key.clone(), c.clone());
        }
        for (k, comp) in by_weight {
            let mut t = 0i64;
            loop {
                let et = self.divided(KmGen::E(i), t, decorated, &comp, b);
                if et.is_zero() {
                    break;
                }
                let mut s = 0i64;
                loop {
                    let fs = self.divided(KmGen::F(i), s, decorated, &et, b);
                    if fs.is_zero() {
                        break;
                    }
                    let r = s - t - k;
                    if r >= 0 {
                        let er = self.divided(KmGen::E(i), r, decorated, &fs, b);
                        let sign = if (s + k).rem_euclid(2) == 0 { 1 } else { -1 };
                        let c = &Scalar::int(sign) * &self.q.upow(s - r * t);
                        out.add_scaled(&er, &c);
                    }
                    s += 1;
                }
                t += 1;
            }
        }
        out
    }

    /// `t''_{ω_1} = τ''∘t''_n∘⋯∘t''_1`
    pub fn t_omega(&self, decorated: bool, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        let mut w = v.clone();
        for i in 1..=self.n {
            w = self.braid_t(i, decorated, &w, b);
        }
        self.tau(&w, b)
    }
}
