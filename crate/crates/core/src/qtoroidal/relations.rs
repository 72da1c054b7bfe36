//! Denominator-cleared current relations and the integrability, central
//! charge and level checks.
//!
//! A relation `A(z)B(w)·(αz − βw) = B(w)A(z)·(γz − δw)` is checked through
//! the coefficient of `z^{-P} w^{-S}`:
//!
//! ```text
//! α·A_{P+1}B_S − β·A_P B_{S+1} − γ·B_S A_{P+1} + δ·B_{S+1}A_P = 0
//! ```
//!
//! Products act right to left on the probe.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CartanData, ModeKind, ModeOperators, ModeProbe};
use crate::hecke::WindowBudget;
use crate::report::{sort_reports, RelationReport};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("mode window K = {0} rejected; need K >= 1")]
    WindowTooSmall(i64),
    #[error(transparent)]
    Cartan(#[from] super::CartanError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurrentRelation {
    KKCommute,
    KPlusKMinus,
    KInverse,
    KE,
    KF,
    EF,
    EE,
    FF,
    SerreE,
    SerreF,
}

impl CurrentRelation {
    pub const ALL: [CurrentRelation; 10] = [
        CurrentRelation::KKCommute,
        CurrentRelation::KPlusKMinus,
        CurrentRelation::KInverse,
        CurrentRelation::KE,
        CurrentRelation::KF,
        CurrentRelation::EF,
        CurrentRelation::EE,
        CurrentRelation::FF,
        CurrentRelation::SerreE,
        CurrentRelation::SerreF,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            CurrentRelation::KKCommute => "current.k-k-commute",
            CurrentRelation::KPlusKMinus => "current.kplus-kminus",
            CurrentRelation::KInverse => "current.k-inverse",
            CurrentRelation::KE => "current.k-e",
            CurrentRelation::KF => "current.k-f",
            CurrentRelation::EF => "current.e-f",
            CurrentRelation::EE => "current.e-e",
            CurrentRelation::FF => "current.f-f",
            CurrentRelation::SerreE => "current.serre-e",
            CurrentRelation::SerreF => "current.serre-f",
        }
    }
}

/// Coefficients `(α, β, γ, δ)` of a cleared θ relation with `θ_{±a}(d^m z/w)`.
pub fn cleared_coefficients(q: &Scalar, d: &Scalar, a: i64, m: i64, sign: i64) -> [Scalar; 4] {
    let qa = q.upow(sign * a);
    let dm = d.upow(m);
    [dm.clone(), qa.clone(), &qa * &dm, Scalar::one()]
}

/// Evaluation context: one budget per checked identity.
struct Eval<'a, O: ModeOperators> {
    ops: &'a O,
    budget: WindowBudget,
}

impl<'a, O: ModeOperators> Eval<'a, O> {
    fn new(ops: &'a O, probe: &SparseVec<O::Key>) -> Self {
        let mut budget = ops.new_budget();
        ops.observe(probe, &mut budget);
        Eval { ops, budget }
    }

    fn m(&mut self, kind: ModeKind, i: usize, k: i64, v: &SparseVec<O::Key>) -> SparseVec<O::Key> {
        if v.is_zero() {
            return SparseVec::zero();
        }
        self.ops.apply_mode(kind, i, k, v, &mut self.budget)
    }

    /// `A_a B_b v`
    fn ab(&mut self, a: (ModeKind, usize, i64), b: (ModeKind, usize, i64), v: &SparseVec<O::Key>) -> SparseVec<O::Key> {
        let w = self.m(b.0, b.1, b.2, v);
        self.m(a.0, a.1, a.2, &w)
    }

    fn valid(&self) -> bool {
        self.budget.is_valid()
    }
}

fn lin<K: Ord + Clone>(terms: &[(Scalar, SparseVec<K>)]) -> SparseVec<K> {
    let mut out = SparseVec::zero();
    for (c, v) in terms {
        out.add_scaled(v, c);
    }
    out
}

fn commutator<O: ModeOperators>(ev: &mut Eval<O>, a: (ModeKind, usize, i64), b: (ModeKind, usize, i64), v: &SparseVec<O::Key>) -> SparseVec<O::Key> {
    let x = ev.ab(a, b, v);
    let y = ev.ab(b, a, v);
    x.sub(&y)
}

#[allow(clippy::too_many_arguments)]
fn cleared<O: ModeOperators>(ev: &mut Eval<O>, ka: ModeKind, i: usize, kb: ModeKind, j: usize, c: &[Scalar; 4], p: i64, s: i64, v: &SparseVec<O::Key>) -> SparseVec<O::Key> {
    let t1 = ev.ab((ka, i, p + 1), (kb, j, s), v);
    let t2 = ev.ab((ka, i, p), (kb, j, s + 1), v);
    let t3 = ev.ab((kb, j, s), (ka, i, p + 1), v);
    let t4 = ev.ab((kb, j, s + 1), (ka, i, p), v);
    lin(&[(c[0].clone(), t1), (-&c[1], t2), (-&c[2], t3), (c[3].clone(), t4)])
}

fn sign_of(kind: ModeKind) -> i64 {
    if kind == ModeKind::KPlus {
        1
    } else {
        -1
    }
}

fn check_instance<O: ModeOperators>(ops: &O, cartan: &CartanData, rel: CurrentRelation, i: usize, j: usize, k: i64, probe: &ModeProbe<O::Key>) -> Vec<RelationReport> {
    let (q, d) = (ops.q(), ops.d());
    let a = cartan.a(i, j);
    let m = cartan.m(i, j);
    let v = &probe.vector;
    let ij = vec![i as i64, j as i64];
    let modes: Vec<i64> = (-k..=k).collect();
    // P with P, P+1 both inside the window
    let shifts: Vec<i64> = (-k..k).collect();
    let mut out = Vec::new();
    let rep = |indices: Vec<i64>| RelationReport::new(rel.id(), indices, probe.id.clone());
    match rel {
        CurrentRelation::KKCommute => {
            for kind in [ModeKind::KPlus, ModeKind::KMinus] {
                let mut r = rep(vec![i as i64, j as i64, sign_of(kind)]);
                r.mode_window = Some(k);
                for &x in &modes {
                    for &y in &modes {
                        let mut ev = Eval::new(ops, v);
                        let res = commutator(&mut ev, (kind, i, x), (kind, j, y), v);
                        r.record(&[x, y], res.is_zero(), ev.valid());
                    }
                }
                out.push(r);
            }
        }
        CurrentRelation::KPlusKMinus => {
            let mut r = rep(ij);
            r.mode_window = Some(k);
            for &x in &modes {
                for &y in &modes {
                    let mut ev = Eval::new(ops, v);
                    let res = commutator(&mut ev, (ModeKind::KPlus, i, x), (ModeKind::KMinus, j, y), v);
                    r.record(&[x, y], res.is_zero(), ev.valid());
                }
            }
            out.push(r);
        }
        CurrentRelation::KInverse => {
            if i != j {
                return out;
            }
            let mut r = rep(vec![i as i64]);
            r.mode_window = Some(0);
            let mut ev = Eval::new(ops, v);
            let res = ev.ab((ModeKind::KPlus, i, 0), (ModeKind::KMinus, i, 0), v).sub(v);
            r.record(&[0, 0], res.is_zero(), ev.valid());
            out.push(r);
        }
        CurrentRelation::KE | CurrentRelation::KF => {
            let (kb, sgn) = if rel == CurrentRelation::KE { (ModeKind::E, 1) } else { (ModeKind::F, -1) };
            let c = cleared_coefficients(q, d, a, m, sgn);
            for kind in [ModeKind::KPlus, ModeKind::KMinus] {
                let mut r = rep(vec![i as i64, j as i64, sign_of(kind)]);
                r.mode_window = Some(k);
                for &p in &shifts {
                    for &s in &shifts {
                        let mut ev = Eval::new(ops, v);
                        let res = cleared(&mut ev, kind, i, kb, j, &c, p, s, v);
                        r.record(&[p, s], res.is_zero(), ev.valid());
                    }
                }
                out.push(r);
            }
        }
        CurrentRelation::EF => {
            let mut r = rep(ij);
            r.mode_window = Some(k);
            let qq = q - &q.upow(-1);
            for &x in &modes {
                for &y in &modes {
                    let mut ev = Eval::new(ops, v);
                    let mut res = commutator(&mut ev, (ModeKind::E, i, x), (ModeKind::F, j, y), v).scaled(&qq);
                    if i == j {
                        let kp = ev.m(ModeKind::KPlus, i, x + y, v);
                        let km = ev.m(ModeKind::KMinus, i, x + y, v);
                        res = res.sub(&kp.sub(&km));
                    }
                    r.record(&[x, y], res.is_zero(), ev.valid());
                }
            }
            out.push(r);
        }
        CurrentRelation::EE | CurrentRelation::FF => {
            let (kind, sgn) = if rel == CurrentRelation::EE { (ModeKind::E, 1) } else { (ModeKind::F, -1) };
            let c = cleared_coefficients(q, d, a, m, sgn);
            let mut r = rep(ij);
            r.mode_window = Some(k);
            for &p in &shifts {
                for &s in &shifts {
                    let mut ev = Eval::new(ops, v);
                    let res = cleared(&mut ev, kind, i, kind, j, &c, p, s, v);
                    r.record(&[p, s], res.is_zero(), ev.valid());
                }
            }
            out.push(r);
        }
        CurrentRelation::SerreE | CurrentRelation::SerreF => {
            if a != -1 {
                return out;
            }
            let kind = if rel == CurrentRelation::SerreE { ModeKind::E } else { ModeKind::F };
            let two = q + &q.upow(-1);
            let mut r = rep(ij);
            r.mode_window = Some(k);
            for &k1 in &modes {
                for &k2 in &modes {
                    for &kk in &modes {
                        let mut ev = Eval::new(ops, v);
                        let mut tot = SparseVec::zero();
                        for (u1, u2) in [(k1, k2), (k2, k1)] {
                            let w = ev.m(kind, j, kk, v);
                            let t1 = ev.ab((kind, i, u1), (kind, i, u2), &w);
                            let w = ev.m(kind, i, u2, v);
                            let t2 = ev.ab((kind, i, u1), (kind, j, kk), &w);
                            let w = ev.m(kind, i, u2, v);
                            let t3 = ev.ab((kind, j, kk), (kind, i, u1), &w);
                            tot.add_assign(&t1);
                            tot.add_scaled(&t2, &-&two);
                            tot.add_assign(&t3);
                        }
                        r.record(&[k1, k2, kk], tot.is_zero(), ev.valid());
                    }
                }
            }
            out.push(r);
        }
    }
    out
}

/// Check the selected current relations for every vertex pair and probe.
pub fn check_current_relations<O: ModeOperators>(ops: &O, k: i64, probes: &[ModeProbe<O::Key>], select: &[CurrentRelation]) -> Result<Vec<RelationReport>, CheckError> {
    if k < 1 {
        return Err(CheckError::WindowTooSmall(k));
    }
    let cartan = CartanData::new(ops.n())?;
    let verts = cartan.size();
    let mut items = Vec::new();
    for &rel in select {
        for i in 0..verts {
            for j in 0..verts {
                for p in 0..probes.len() {
                    items.push((rel, i, j, p));
                }
            }
        }
    }
    let mut reports: Vec<RelationReport> = items
        .par_iter()
        .flat_map_iter(|&(rel, i, j, p)| check_instance(ops, &cartan, rel, i, j, k, &probes[p]))
        .collect();
    sort_reports(&mut reports);
    Ok(reports)
}

/// `q^λ` for integer `λ` with `|λ| ≤ bound`, if any.
fn q_power_exponent(q: &Scalar, c: &Scalar, bound: i64) -> Option<i64> {
    (-bound..=bound).find(|&e| &q.upow(e) == c)
}

/// Simultaneous `k_{i,0}` weight of an eigenvector, `None` if it is not one
/// or some eigenvalue is not a power of `q`.
pub fn weight_of<O: ModeOperators>(ops: &O, v: &SparseVec<O::Key>, b: &mut WindowBudget) -> Option<Vec<i64>> {
    let (key, c0) = v.iter().next()?;
    let bound = 4 * (ops.l() as i64 + 1);
    let mut w = Vec::with_capacity(ops.n() + 1);
    for i in 0..=ops.n() {
        let out = ops.apply_mode(ModeKind::KPlus, i, 0, v, b);
        let ratio = out.coeff(key).checked_div(c0).ok()?;
        if out != v.scaled(&ratio) {
            return None;
        }
        w.push(q_power_exponent(ops.q(), &ratio, bound)?);
    }
    Some(w)
}

/// Weights `(λ_0, …, λ_n)` occurring in `V^{⊗l}`; `v_r` has `λ_i = δ_{r,i} − δ_{r,i+1}`
/// for `i ≥ 1` and `λ_0 = δ_{r,n+1} − δ_{r,1}`.
pub fn tensor_weights(n: usize, l: usize) -> BTreeSet<Vec<i64>> {
    fn rec(n: usize, left: usize, start: usize, counts: &mut Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
        if left == 0 {
            let mut w = vec![counts[n + 1] - counts[1]];
            for i in 1..=n {
                w.push(counts[i] - counts[i + 1]);
            }
            out.insert(w);
            return;
        }
        for r in start..=n + 1 {
            counts[r] += 1;
            rec(n, left - 1, r, counts, out);
            counts[r] -= 1;
        }
    }
    let mut out = BTreeSet::new();
    rec(n, l, 1, &mut vec![0; n + 2], &mut out);
    out
}

/// Local nilpotency of `e_{i,k}`, `f_{i,k}` and `k_{i,0}`-weight decomposition.
pub fn check_integrability<O: ModeOperators>(ops: &O, k: i64, probes: &[ModeProbe<O::Key>]) -> Vec<RelationReport> {
    let n = ops.n();
    let steps = ops.l() + 1;
    let mut items = Vec::new();
    for kind in [ModeKind::E, ModeKind::F] {
        for i in 0..=n {
            for p in 0..probes.len() {
                items.push((Some((kind, i)), p));
            }
        }
    }
    for p in 0..probes.len() {
        items.push((None, p));
    }
    let mut reports: Vec<RelationReport> = items
        .par_iter()
        .map(|&(what, p)| {
            let probe = &probes[p];
            match what {
                Some((kind, i)) => {
                    let id = if kind == ModeKind::E { "integrable.nilpotent-e" } else { "integrable.nilpotent-f" };
                    let mut r = RelationReport::new(id, vec![i as i64], probe.id.clone());
                    r.mode_window = Some(k);
                    for kk in -k..=k {
                        let mut ev = Eval::new(ops, &probe.vector);
                        let mut w = probe.vector.clone();
                        for _ in 0..steps {
                            w = ev.m(kind, i, kk, &w);
                        }
                        r.record(&[kk], w.is_zero(), ev.valid());
                    }
                    r
                }
                None => {
                    let mut r = RelationReport::new("integrable.weight", vec![], probe.id.clone());
                    for c in ops.weight_components(&probe.vector) {
                        let mut b = ops.new_budget();
                        ops.observe(&c, &mut b);
                        let ok = weight_of(ops, &c, &mut b).is_some();
                        r.record(&[], ok, b.is_valid());
                    }
                    r
                }
            }
        })
        .collect();
    sort_reports(&mut reports);
    reports
}

/// `k_{0,0}k_{1,0}⋯k_{n,0} = 1` and `[k^+_{i,1}, k^-_{j,-1}] = 0`.
pub fn check_trivial_central_charge<O: ModeOperators>(ops: &O, probes: &[ModeProbe<O::Key>]) -> Result<Vec<RelationReport>, CheckError> {
    let cartan = CartanData::new(ops.n())?;
    let n = ops.n();
    let mut reports: Vec<RelationReport> = probes
        .par_iter()
        .flat_map_iter(|probe| {
            let v = &probe.vector;
            let mut out = Vec::new();
            let mut r = RelationReport::new("central.k-product", vec![], probe.id.clone());
            let mut ev = Eval::new(ops, v);
            let mut w = v.clone();
            for i in (0..=n).rev() {
                w = ev.m(ModeKind::KPlus, i, 0, &w);
            }
            r.record(&[], w == *v, ev.valid());
            out.push(r);
            for i in 0..cartan.size() {
                for j in 0..cartan.size() {
                    let mut r = RelationReport::new("central.kplus-kminus", vec![i as i64, j as i64], probe.id.clone());
                    let mut ev = Eval::new(ops, v);
                    let res = commutator(&mut ev, (ModeKind::KPlus, i, 1), (ModeKind::KMinus, j, -1), v);
                    r.record(&[1, -1], res.is_zero(), ev.valid());
                    out.push(r);
                }
            }
            out
        })
        .collect();
    sort_reports(&mut reports);
    Ok(reports)
}

/// Weak level test: observed weights lie among those of `V^{⊗l}`.
pub fn check_level<O: ModeOperators>(ops: &O, probes: &[ModeProbe<O::Key>]) -> Vec<RelationReport> {
    let allowed = tensor_weights(ops.n(), ops.l());
    let mut reports: Vec<RelationReport> = probes
        .par_iter()
        .map(|probe| {
            let mut r = RelationReport::new("level.weights", vec![], probe.id.clone());
            for c in ops.weight_components(&probe.vector) {
                let mut b = ops.new_budget();
                ops.observe(&c, &mut b);
                let ok = weight_of(ops, &c, &mut b).is_some_and(|w| allowed.contains(&w));
                r.record(&[], ok, b.is_valid());
            }
            r
        })
        .collect();
    sort_reports(&mut reports);
    reports
}
