//! The functor `M ↦ M ⊗_H V^{⊗l}` on explicit modules.
//!
//! Vectors are kept in a canonical form: every term is `m ⊗ v_j` with `j`
//! nondecreasing, and for each `j` the module part lies in the image of the
//! `q`-symmetrizer of the stabilizer of `j`. Two vectors are equal in the
//! tensor product exactly when their canonical forms agree.

mod braid;
mod checks;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hecke::{Extent, HModuleKey, HModuleVector, RightHeckeModule, WindowBudget};
use crate::params::Params;
use crate::qtoroidal::{ModeKind, ModeOperators};
use crate::scalar::Scalar;
use crate::series::{theta_expand, Direction};
use crate::sparse::SparseVec;

pub use braid::*;
pub use checks::*;

const THETA_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("parameters are not in duality mode (need x = (q/d)^(n+1), y = 1)")]
    NotDuality,
    #[error("module has l = {module} but parameters have l = {params}")]
    RankMismatch { module: usize, params: usize },
    #[error("module x = {module} differs from (q/d)^(n+1) = {params}")]
    XMismatch { module: String, params: String },
}

/// `j = (j_1, …, j_l)` with entries in `1..=n+1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TupleIndex(pub Vec<u8>);

impl TupleIndex {
    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn count(&self, v: u8) -> usize {
        self.0.iter().filter(|&&a| a == v).count()
    }

    pub fn inversions(&self) -> usize {
        let j = &self.0;
        (0..j.len()).map(|a| (a + 1..j.len()).filter(|&b| j[a] > j[b]).count()).sum()
    }

    /// `(r, s, t)` with `]r,s] = j^{-1}(i)` and `]s,t] = j^{-1}(i+1)`; `j` sorted.
    pub fn segments(&self, i: u8) -> (usize, usize, usize) {
        let r = self.0.iter().filter(|&&a| a < i).count();
        let s = r + self.count(i);
        let t = s + self.count(i + 1);
        (r, s, t)
    }
}

impl fmt::Display for TupleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DKey {
    pub m: HModuleKey,
    pub j: TupleIndex,
}

impl DKey {
    pub fn new(m: HModuleKey, j: Vec<u8>) -> Self {
        DKey { m, j: TupleIndex(j) }
    }
}

pub type DualityVector = SparseVec<DKey>;

/// Linear maps that are evaluated and memoized on basis keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum BasisOp {
    Mode(ModeKind, usize, i64),
    Psi,
    PsiInv,
    Gen(KmGen, bool),
    Tau,
}

type Memo = RwLock<HashMap<(BasisOp, DKey), Arc<(DualityVector, Extent)>>>;

pub struct DualitySpace {
    module: Arc<dyn RightHeckeModule>,
    n: usize,
    l: usize,
    q: Scalar,
    d: Scalar,
    x: Scalar,
    q_inv: Scalar,
    /// `theta[σ][τ][r]`: `σ = 0` for `θ_1`, `1` for `θ_{-1}`; `τ = 0` at ∞, `1` at 0.
    theta: [[Vec<Scalar>; 2]; 2],
    /// `1 / Σ_{w ∈ S_k} q^{2ℓ(w)}`
    poincare_inv: Vec<Scalar>,
    memo: Memo,
}

impl fmt::Debug for DualitySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualitySpace").field("n", &self.n).field("l", &self.l).field("q", &self.q).field("d", &self.d).field("module", &self.module).finish()
    }
}

impl DualitySpace {
    pub fn new(module: Arc<dyn RightHeckeModule>, params: &Params) -> Result<Self, DualityError> {
        if !params.is_duality() {
            return Err(DualityError::NotDuality);
        }
        if module.l() != params.l {
            return Err(DualityError::RankMismatch { module: module.l(), params: params.l });
        }
        if module.x() != &params.x {
            return Err(DualityError::XMismatch { module: module.x().to_string(), params: params.x.to_string() });
        }
        let q = params.q.clone();
        let theta = [1i64, -1].map(|m| [Direction::AtInfinity, Direction::AtZero].map(|dir| theta_expand(m, dir, THETA_ORDER, &q).coeffs));
        let q2 = q.upow(2);
        let mut poincare_inv = vec![Scalar::one(), Scalar::one()];
        let mut acc = Scalar::one();
        for k in 2..=params.l.max(1) {
            let mut bracket = Scalar::zero();
            for e in 0..k as i64 {
                bracket += &q2.upow(e);
            }
            acc = &acc * &bracket;
            poincare_inv.push(acc.invert().expect("q is not a root of unity"));
        }
        Ok(DualitySpace {
            module,
            n: params.n,
            l: params.l,
            q_inv: q.upow(-1),
            q,
            d: params.d.clone(),
            x: params.x.clone(),
            theta,
            poincare_inv,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn module(&self) -> &dyn RightHeckeModule {
        self.module.as_ref()
    }

    pub fn x(&self) -> &Scalar {
        &self.x
    }

    /// Sorted tuples of length `l` over `1..=n+1`.
    pub fn sorted_tuples(&self) -> Vec<Vec<u8>> {
        fn rec(top: u8, left: usize, start: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for a in start..=top {
                cur.push(a);
                rec(top, left - 1, a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.n as u8 + 1, self.l, 1, &mut Vec::new(), &mut out);
        out
    }

    /// `m ⊗ v_j` in canonical form; `j` need not be sorted.
    pub fn lift(&self, m: &HModuleVector, j: &[u8], b: &mut WindowBudget) -> DualityVector {
        let v: DualityVector = m.iter().map(|(k, c)| (DKey { m: k.clone(), j: TupleIndex(j.to_vec()) }, c.clone())).collect();
        self.straighten(&v, b)
    }

    pub fn basis(&self, m: HModuleKey, j: &[u8]) -> DualityVector {
        let mut b = WindowBudget::unbounded();
        self.lift(&HModuleVector::basis(m), j, &mut b)
    }

    /// Rewrite to canonical form using `v_s ⊗ v_r = q^{-1}·T(v_r ⊗ v_s)` for `r < s`.
    pub fn straighten(&self, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        let mut work: BTreeMap<(usize, TupleIndex), HModuleVector> = BTreeMap::new();
        for (k, c) in v.iter() {
            work.entry((k.j.inversions(), k.j.clone())).or_default().add_term(k.m.clone(), c.clone());
        }
        let mut sorted: Vec<(TupleIndex, HModuleVector)> = Vec::new();
        while let Some(((inv, j), mv)) = work.pop_last() {
            if mv.is_zero() {
                continue;
            }
            if inv == 0 {
                sorted.push((j, mv));
                continue;
            }
            let p = j.0.windows(2).position(|w| w[0] > w[1]).expect("descent");
            let mut jj = j.0.clone();
            jj.swap(p, p + 1);
            let moved = self.module.act_t(p + 1, &mv, b).scaled(&self.q_inv);
            let jj = TupleIndex(jj);
            work.entry((inv - 1, jj)).or_default().add_assign(&moved);
        }
        let mut out = DualityVector::zero();
        for (j, mv) in sorted {
            let mv = self.symmetrize(&mv, &j, b);
            for (m, c) in mv.iter() {
                out.add_term(DKey { m: m.clone(), j: j.clone() }, c.clone());
            }
        }
        out
    }

    /// Project onto the `q²`-eigenspace of the `T_p` stabilizing the sorted `j`.
    fn symmetrize(&self, mv: &HModuleVector, j: &TupleIndex, b: &mut WindowBudget) -> HModuleVector {
        let j = &j.0;
        let mut mv = mv.clone();
        let mut p = 0;
        while p < j.len() {
            let mut e = p;
            while e + 1 < j.len() && j[e + 1] == j[p] {
                e += 1;
            }
            let k = e - p + 1;
            if k > 1 {
                // Σ_{w ∈ S_k} T_w via coset representatives 1, T_{r-1}, T_{r-1}T_{r-2}, …
                let mut acc = mv.clone();
                for r in 2..=k {
                    let mut tot = acc.clone();
                    let mut cur = acc.clone();
                    for g in (1..r).rev() {
                        cur = self.module.act_t(p + g, &cur, b);
                        tot.add_assign(&cur);
                    }
                    acc = tot;
                }
                mv = acc.scaled(&self.poincare_inv[k]);
            }
            p = e + 1;
        }
        mv
    }

    fn apply_basis(&self, op: BasisOp, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        let mut out = DualityVector::zero();
        for (key, c) in v.iter() {
            let hit = self.memo.read().expect("memo lock").get(&(op, key.clone())).cloned();
            let entry = match hit {
                Some(e) => e,
                None => {
                    let mut local = self.module.new_budget();
                    local.extent.observe(&key.m);
                    let res = self.eval_basis(op, key, &mut local);
                    for k in res.keys() {
                        local.observe(&k.m);
                    }
                    let e = Arc::new((res, local.extent));
                    self.memo.write().expect("memo lock").entry((op, key.clone())).or_insert(e).clone()
                }
            };
            b.extent.merge(&entry.1);
            out.add_scaled(&entry.0, c);
        }
        out
    }

    fn eval_basis(&self, op: BasisOp, key: &DKey, b: &mut WindowBudget) -> DualityVector {
        if !key.j.is_sorted() {
            let v = self.straighten(&DualityVector::basis(key.clone()), b);
            return self.apply_basis(op, &v, b);
        }
        let raw = match op {
            BasisOp::Mode(kind, i, k) => {
                if i == 0 {
                    let w = self.apply_basis(BasisOp::Psi, &DualityVector::basis(key.clone()), b);
                    let w = self.apply_basis(BasisOp::Mode(kind, 1, k), &w, b);
                    let w = self.apply_basis(BasisOp::PsiInv, &w, b);
                    return w.scaled(&self.q.checked_div(&self.d).expect("d is a unit").upow(-k));
                }
                match kind {
                    ModeKind::E => self.raw_e(i, k, key, b),
                    ModeKind::F => self.raw_f(i, k, key, b),
                    ModeKind::KPlus => self.raw_k(i, true, k as usize, key, b),
                    ModeKind::KMinus => self.raw_k(i, false, (-k) as usize, key, b),
                }
            }
            BasisOp::Psi => self.raw_psi(key, false, b),
            BasisOp::PsiInv => self.raw_psi(key, true, b),
            BasisOp::Gen(g, decorated) => self.raw_gen(g, decorated, key, b),
            BasisOp::Tau => self.raw_tau(key, b),
        };
        self.straighten(&raw, b)
    }

    fn emit(&self, out: &mut DualityVector, mv: &HModuleVector, j: Vec<u8>) {
        let j = TupleIndex(j);
        for (m, c) in mv.iter() {
            out.add_term(DKey { m: m.clone(), j: j.clone() }, c.clone());
        }
    }

    fn single(key: &DKey, c: Scalar) -> HModuleVector {
        HModuleVector::term(key.m.clone(), c)
    }

    /// `α_i = q^{n+1-i} d^i`
    pub fn alpha(&self, i: usize) -> Scalar {
        &self.q.upow((self.n + 1 - i) as i64) * &self.d.upow(i as i64)
    }

    /// `m·(1 + Σ_{k=lo}^{hi} T_{k,stop})` where `T_{k,stop}` runs from `k` towards `stop`.
    fn t_sum(&self, mv: &HModuleVector, lo: usize, hi: usize, stop: usize, b: &mut WindowBudget) -> HModuleVector {
        let mut acc = mv.clone();
        for kk in lo..=hi {
            let mut w = mv.clone();
            if kk >= stop {
                for g in (stop..=kk).rev() {
                    w = self.module.act_t(g, &w, b);
                }
            } else {
                for g in kk..=stop {
                    w = self.module.act_t(g, &w, b);
                }
            }
            acc.add_assign(&w);
        }
        acc
    }

    fn raw_e(&self, i: usize, k: i64, key: &DKey, b: &mut WindowBudget) -> DualityVector {
        let (_, s, t) = key.j.segments(i as u8);
        let mut out = DualityVector::zero();
        if t == s {
            return out;
        }
        let coef = &self.q.upow(1 - t as i64 + s as i64) * &self.alpha(i).upow(-k);
        let mv = Self::single(key, coef);
        let acc = if t > s + 1 { self.t_sum(&mv, s + 1, t - 1, s + 1, b) } else { mv };
        let acc = self.module.act_y(s + 1, -k, &acc, b);
        let mut j = key.j.0.clone();
        j[s] = i as u8;
        self.emit(&mut out, &acc, j);
        out
    }

    fn raw_f(&self, i: usize, k: i64, key: &DKey, b: &mut WindowBudget) -> DualityVector {
        let (r, s, _) = key.j.segments(i as u8);
        let mut out = DualityVector::zero();
        if s == r {
            return out;
        }
        let coef = &self.q.upow(1 - s as i64 + r as i64) * &self.alpha(i).upow(-k);
        let mv = Self::single(key, coef);
        let acc = if s > r + 1 { self.t_sum(&mv, r + 1, s - 1, s - 1, b) } else { mv };
        let acc = self.module.act_y(s, -k, &acc, b);
        let mut j = key.j.0.clone();
        j[s - 1] = i as u8 + 1;
        self.emit(&mut out, &acc, j);
        out
    }

    /// Coefficient of `z^{∓L}` in `∏ θ^±_{±1}(a_p z Y_p)`.
    fn raw_k(&self, i: usize, plus: bool, big_l: usize, key: &DKey, b: &mut WindowBudget) -> DualityVector {
        let (n, q, d) = (self.n as i64, &self.q, &self.d);
        let i64_ = i as i64;
        let dir = if plus { 0 } else { 1 };
        let mut factors: Vec<(usize, Scalar, usize)> = Vec::new();
        for (p, &a) in key.j.0.iter().enumerate() {
            if a as usize == i {
                factors.push((p + 1, &q.upow(n + 2 - i64_) * &d.upow(i64_), 0));
            } else if a as usize == i + 1 {
                factors.push((p + 1, &q.upow(n - i64_) * &d.upow(i64_), 1));
            }
        }
        assert!(big_l <= THETA_ORDER, "mode {} beyond the precomputed expansion", big_l);
        let mut acc = HModuleVector::zero();
        for comp in compositions(big_l, factors.len()) {
            let mut mv = Self::single(key, Scalar::one());
            for ((pos, a, sigma), &r) in factors.iter().zip(&comp) {
                let e = if plus { -(r as i64) } else { r as i64 };
                let c = &self.theta[*sigma][dir][r] * &a.upow(e);
                mv = self.module.act_y(*pos, e, &mv, b).scaled(&c);
            }
            acc.add_assign(&mv);
        }
        let mut out = DualityVector::zero();
        self.emit(&mut out, &acc, key.j.0.clone());
        out
    }

    fn raw_psi(&self, key: &DKey, inverse: bool, b: &mut WindowBudget) -> DualityVector {
        let top = self.n as u8 + 1;
        let mut mv = Self::single(key, Scalar::one());
        let mut j = key.j.0.clone();
        for (p, a) in j.iter_mut().enumerate() {
            if !inverse && *a == top {
                mv = self.module.act_x(p + 1, -1, &mv, b);
            }
            if inverse && *a == 1 {
                mv = self.module.act_x(p + 1, 1, &mv, b);
            }
            *a = if inverse {
                if *a == 1 { top } else { *a - 1 }
            } else if *a == top {
                1
            } else {
                *a + 1
            };
        }
        let mut out = DualityVector::zero();
        self.emit(&mut out, &mv, j);
        out
    }

    fn raw_tau(&self, key: &DKey, b: &mut WindowBudget) -> DualityVector {
        let top = self.n as u8 + 1;
        let mut mv = Self::single(key, Scalar::one());
        let mut j = key.j.0.clone();
        for (p, a) in j.iter_mut().enumerate() {
            if *a == top {
                mv = self.module.act_y(p + 1, 1, &mv, b);
                *a = 1;
            } else {
                *a += 1;
            }
        }
        let mut out = DualityVector::zero();
        self.emit(&mut out, &mv, j);
        out
    }

    /// Exponent of `q` in `k_i v_r`; `i = n+1` is the affine vertex `k_θ^{-1}`.
    pub fn k_exponent(&self, i: usize, r: u8) -> i64 {
        let r = r as usize;
        if i == self.n + 1 {
            (r == self.n + 1) as i64 - (r == 1) as i64
        } else {
            (r == i) as i64 - (r == i + 1) as i64
        }
    }

    /// `k_i` weight of `v_j`.
    pub fn k_weight(&self, i: usize, j: &TupleIndex) -> i64 {
        j.0.iter().map(|&r| self.k_exponent(i, r)).sum()
    }

    /// Kac–Moody generators; `decorated` selects the `d^{∓1}` factors on `e_{n+1}`, `f_{n+1}`.
    fn raw_gen(&self, g: KmGen, decorated: bool, key: &DKey, b: &mut WindowBudget) -> DualityVector {
        let top = self.n as u8 + 1;
        let j = &key.j.0;
        let mut out = DualityVector::zero();
        match g {
            KmGen::K(i) | KmGen::KInv(i) => {
                let sign = if matches!(g, KmGen::K(_)) { 1 } else { -1 };
                let c = self.q.upow(sign * self.k_weight(i, &key.j));
                out.add_term(key.clone(), c);
            }
            KmGen::E(i) if i <= self.n => {
                for p in 0..j.len() {
                    if j[p] as usize == i + 1 {
                        let e: i64 = j[p + 1..].iter().map(|&r| self.k_exponent(i, r)).sum();
                        let mut jj = j.clone();
                        jj[p] = i as u8;
                        self.emit(&mut out, &Self::single(key, self.q.upow(e)), jj);
                    }
                }
            }
            KmGen::F(i) if i <= self.n => {
                for p in 0..j.len() {
                    if j[p] as usize == i {
                        let e: i64 = j[..p].iter().map(|&r| self.k_exponent(i, r)).sum();
                        let mut jj = j.clone();
                        jj[p] = i as u8 + 1;
                        self.emit(&mut out, &Self::single(key, self.q.upow(-e)), jj);
                    }
                }
            }
            KmGen::E(_) => {
                // Σ_p m·Y_p^{-1} ⊗ f_θ at p, k_θ^{-1} on later slots
                let dec = if decorated { self.d.upow(-1) } else { Scalar::one() };
                for p in 0..j.len() {
                    if j[p] == 1 {
                        let e: i64 = j[p + 1..].iter().map(|&r| self.k_exponent(self.n + 1, r)).sum();
                        let mv = self.module.act_y(p + 1, -1, &Self::single(key, &self.q.upow(e) * &dec), b);
                        let mut jj = j.clone();
                        jj[p] = top;
                        self.emit(&mut out, &mv, jj);
                    }
                }
            }
            KmGen::F(_) => {
                let dec = if decorated { self.d.clone() } else { Scalar::one() };
                for p in 0..j.len() {
                    if j[p] == top {
                        let e: i64 = j[..p].iter().map(|&r| self.k_exponent(self.n + 1, r)).sum();
                        let mv = self.module.act_y(p + 1, 1, &Self::single(key, &self.q.upow(-e) * &dec), b);
                        let mut jj = j.clone();
                        jj[p] = 1;
                        self.emit(&mut out, &mv, jj);
                    }
                }
            }
        }
        out
    }

    pub fn mode(&self, kind: ModeKind, i: usize, k: i64, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        assert!(i <= self.n, "vertex {} outside 0..={}", i, self.n);
        match kind {
            ModeKind::KPlus if k < 0 => return DualityVector::zero(),
            ModeKind::KMinus if k > 0 => return DualityVector::zero(),
            _ => {}
        }
        self.apply_basis(BasisOp::Mode(kind, i, k), v, b)
    }

    pub fn psi(&self, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        self.apply_basis(BasisOp::Psi, v, b)
    }

    pub fn psi_inv(&self, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        self.apply_basis(BasisOp::PsiInv, v, b)
    }

    /// Kac–Moody generator `g` with index in `1..=n+1`.
    pub fn generator(&self, g: KmGen, decorated: bool, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        assert!((1..=self.n + 1).contains(&g.index()), "generator index {} outside 1..={}", g.index(), self.n + 1);
        self.apply_basis(BasisOp::Gen(g, decorated), v, b)
    }

    /// `τ''(m ⊗ v_j) = m·∏_p Y_p^{δ_{n+1,j_p}} ⊗ v_{j+1}`
    pub fn tau(&self, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        self.apply_basis(BasisOp::Tau, v, b)
    }

    pub fn observe(&self, v: &DualityVector, b: &mut WindowBudget) {
        for k in v.keys() {
            b.observe(&k.m);
        }
    }

    /// Terms grouped by tuple; each group is a simultaneous `k_{i,0}` eigenvector.
    pub fn by_tuple(&self, v: &DualityVector) -> Vec<DualityVector> {
        let mut groups: BTreeMap<TupleIndex, DualityVector> = BTreeMap::new();
        for (k, c) in v.iter() {
            groups.entry(k.j.clone()).or_default().add_term(k.clone(), c.clone());
        }
        groups.into_values().collect()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in 0..=total {
        for mut rest in compositions(total - a, parts - 1) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

impl ModeOperators for DualitySpace {
    type Key = DKey;

    fn n(&self) -> usize {
        self.n
    }
    fn l(&self) -> usize {
        self.l
    }
    fn q(&self) -> &Scalar {
        &self.q
    }
    fn d(&self) -> &Scalar {
        &self.d
    }

    fn new_budget(&self) -> WindowBudget {
        self.module.new_budget()
    }

    fn observe(&self, v: &DualityVector, b: &mut WindowBudget) {
        DualitySpace::observe(self, v, b)
    }

    fn apply_mode(&self, kind: ModeKind, i: usize, k: i64, v: &DualityVector, b: &mut WindowBudget) -> DualityVector {
        self.mode(kind, i, k, v, b)
    }

    fn weight_components(&self, v: &DualityVector) -> Vec<DualityVector> {
        self.by_tuple(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{OneDimModule, PolynomialModule};

    pub(crate) fn l1_space() -> DualitySpace {
        let p = Params::duality(3, 1, Scalar::int(2), Scalar::int(-2)).unwrap();
        let m = OneDimModule::new(Scalar::int(5), Scalar::int(7), &p).unwrap();
        DualitySpace::new(Arc::new(m), &p).unwrap()
    }

    pub(crate) fn poly_space() -> DualitySpace {
        let p = Params::duality(4, 2, Scalar::int(2), Scalar::int(3)).unwrap();
        let m = PolynomialModule::new(&p, 8).unwrap();
        DualitySpace::new(Arc::new(m), &p).unwrap()
    }

    #[test]
    fn segments_of_sorted_tuple() {
        let j = TupleIndex(vec![1, 2, 2, 4]);
        assert_eq!(j.segments(2), (1, 3, 3));
        assert_eq!(j.segments(1), (0, 1, 3));
        assert_eq!(j.inversions(), 0);
        assert_eq!(TupleIndex(vec![3, 1, 2]).inversions(), 2);
    }

    #[test]
    fn swapped_pair_straightens_with_t() {
        let s = poly_space();
        let mut b = WindowBudget::unbounded();
        let m = PolynomialModule::monomial(vec![1, 0]);
        let lhs = s.lift(&m, &[3, 1], &mut b);
        let mt = s.module().act_t(1, &m, &mut b).scaled(&Scalar::ratio(1, 2));
        let rhs = s.lift(&mt, &[1, 3], &mut b);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn repeated_slot_absorbs_t() {
        // m·T_1 ⊗ v_(2,2) = q² m ⊗ v_(2,2)
        let s = poly_space();
        let mut b = WindowBudget::unbounded();
        let m = PolynomialModule::monomial(vec![2, -1]);
        let mt = s.module().act_t(1, &m, &mut b);
        assert_eq!(s.lift(&mt, &[2, 2], &mut b), s.lift(&m, &[2, 2], &mut b).scaled(&Scalar::int(4)));
    }

    #[test]
    fn psi_roundtrip_on_basis() {
        let s = poly_space();
        let mut b = WindowBudget::unbounded();
        for j in s.sorted_tuples() {
            let v = s.basis(HModuleKey::Monomial(vec![1, -1]), &j);
            let w = s.psi_inv(&s.psi(&v, &mut b), &mut b);
            assert_eq!(w, v);
        }
    }

    #[test]
    fn l1_e_mode_moves_basis() {
        let s = l1_space();
        let mut b = WindowBudget::unbounded();
        let v = s.basis(HModuleKey::Unit, &[2]);
        let w = s.mode(ModeKind::E, 1, 1, &v, &mut b);
        // α_1^{-1} b^{-1} v_1 with α_1 = q³d = -16, b = 7
        assert_eq!(w, s.basis(HModuleKey::Unit, &[1]).scaled(&Scalar::ratio(-1, 112)));
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(1, 0).is_empty());
    }
}
