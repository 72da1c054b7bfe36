//! Identity checks on the tensor space: ψ conjugation, braid intertwining,
//! closed-form displays and the reconstruction identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{DKey, DualitySpace, DualityVector, KmExpr, KmGen};
use crate::hecke::{apply_expr, apply_word, q_word, t_range, y, HModuleKey, HModuleVector, HProbe, HeckeExpr, HeckeWord, WindowBudget};
use crate::qtoroidal::{CartanData, ModeKind, ModeProbe};
use crate::report::{sort_reports, RelationReport};
use crate::scalar::Scalar;

use super::braid::{t_omega_prime, t_prime, tau_prime};

pub type DualityProbe = ModeProbe<DKey>;

/// `m ⊗ v_j` seeds for closed-form displays.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSeed {
    pub id: String,
    pub m: HModuleKey,
    pub j: Vec<u8>,
}

const KINDS: [ModeKind; 4] = [ModeKind::E, ModeKind::F, ModeKind::KPlus, ModeKind::KMinus];

fn kind_code(kind: ModeKind) -> i64 {
    match kind {
        ModeKind::E => 0,
        ModeKind::F => 1,
        ModeKind::KPlus => 2,
        ModeKind::KMinus => 3,
    }
}

fn gen_code(g: KmGen) -> i64 {
    match g {
        KmGen::E(_) => 0,
        KmGen::F(_) => 1,
        KmGen::K(_) => 2,
        KmGen::KInv(_) => 3,
    }
}

fn random_key(space: &DualitySpace, rng: &mut ChaCha8Rng, radius: i32) -> HModuleKey {
    if space.module().descriptor().family == "l1" {
        HModuleKey::Unit
    } else {
        HModuleKey::Monomial((0..space.l).map(|_| rng.gen_range(-radius..=radius)).collect())
    }
}

/// Canonical probes: one per sorted tuple cycling, every third a two-term sum.
pub fn duality_probes(space: &DualitySpace, count: usize, seed: u64, radius: i32) -> Vec<DualityProbe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tuples = space.sorted_tuples();
    let mut b = WindowBudget::unbounded();
    (0..count)
        .map(|idx| {
            let j = &tuples[idx % tuples.len()];
            let mut v = space.lift(&HModuleVector::basis(random_key(space, &mut rng, radius)), j, &mut b);
            if idx % 3 == 2 {
                let j2 = &tuples[rng.gen_range(0..tuples.len())];
                let c = Scalar::int(rng.gen_range(1..=5));
                v.add_scaled(&space.lift(&HModuleVector::basis(random_key(space, &mut rng, radius)), j2, &mut b), &c);
            }
            ModeProbe::new(format!("p{}", idx), v)
        })
        .collect()
}

/// `per_tuple` seeds for every sorted tuple.
pub fn basis_seeds(space: &DualitySpace, per_tuple: usize, seed: u64, radius: i32) -> Vec<BasisSeed> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for j in space.sorted_tuples() {
        for _ in 0..per_tuple {
            let id = format!("b{}", out.len());
            out.push(BasisSeed { id, m: random_key(space, &mut rng, radius), j: j.clone() });
        }
    }
    out
}

fn run<T: Sync>(items: &[T], f: impl Fn(&T) -> Vec<RelationReport> + Sync + Send) -> Vec<RelationReport> {
    let mut reports: Vec<RelationReport> = items.par_iter().flat_map_iter(f).collect();
    sort_reports(&mut reports);
    reports
}

fn single(id: &str, indices: Vec<i64>, probe: &str, modes: &[i64], zero: bool, b: &WindowBudget) -> RelationReport {
    let mut r = RelationReport::new(id, indices, probe);
    r.record(modes, zero, b.is_valid());
    r
}

fn budget_for(space: &DualitySpace, v: &DualityVector) -> WindowBudget {
    let mut b = space.module().new_budget();
    space.observe(v, &mut b);
    b
}

/// `ψ∘ψ^{-1} = ψ^{-1}∘ψ = id`.
pub fn check_psi_roundtrip(space: &DualitySpace, probes: &[DualityProbe]) -> Vec<RelationReport> {
    run(probes, |p| {
        let mut b = budget_for(space, &p.vector);
        let a = space.psi(&space.psi_inv(&p.vector, &mut b), &mut b);
        let c = space.psi_inv(&space.psi(&p.vector, &mut b), &mut b);
        vec![single("psi.roundtrip", vec![], &p.id, &[], a == p.vector && c == p.vector, &b)]
    })
}

/// `ψ^{-1} g_{i,k} ψ = (q^{-1}d)^{-k} g_{i-1,k}` for all vertices (indices mod `n+1`)
/// and `ψ^{-2} g_{1,k} ψ² · x^{-k} = (q^{n-1}d^{1-n})^{-k} g_{n,k}`.
pub fn check_psi_conjugation(space: &DualitySpace, k: i64, probes: &[DualityProbe]) -> Vec<RelationReport> {
    let n = space.n;
    let (q, d) = (&space.q, &space.d);
    let shift = &q.upow(-1) * d;
    let wrap = &q.upow(n as i64 - 1) * &d.upow(1 - n as i64);
    run(probes, |p| {
        let v = &p.vector;
        let mut out = Vec::new();
        for kind in KINDS {
            for i in 0..=n {
                let mut r = RelationReport::new("psi.conjugate", vec![i as i64, kind_code(kind)], p.id.clone());
                r.mode_window = Some(k);
                for kk in -k..=k {
                    let mut b = budget_for(space, v);
                    let w = space.psi(v, &mut b);
                    let w = space.mode(kind, i, kk, &w, &mut b);
                    let lhs = space.psi_inv(&w, &mut b);
                    let prev = if i == 0 { n } else { i - 1 };
                    let rhs = space.mode(kind, prev, kk, v, &mut b).scaled(&shift.upow(-kk));
                    r.record(&[kk], lhs == rhs, b.is_valid());
                }
                out.push(r);
            }
            let mut r = RelationReport::new("psi.double", vec![kind_code(kind)], p.id.clone());
            r.mode_window = Some(k);
            for kk in -k..=k {
                let mut b = budget_for(space, v);
                let w = space.psi(&space.psi(v, &mut b), &mut b);
                let w = space.mode(kind, 1, kk, &w, &mut b);
                let lhs = space.psi_inv(&space.psi_inv(&w, &mut b), &mut b).scaled(&space.x.upow(-kk));
                let rhs = space.mode(kind, n, kk, v, &mut b).scaled(&wrap.upow(-kk));
                r.record(&[kk], lhs == rhs, b.is_valid());
            }
            out.push(r);
        }
        out
    })
}

fn generators(n: usize) -> Vec<KmGen> {
    let mut out = Vec::new();
    for j in 1..=n + 1 {
        out.extend([KmGen::E(j), KmGen::F(j), KmGen::K(j)]);
    }
    out
}

/// `t''_i(u·v) = t'_i(u)·t''_i(v)`, `τ''(u·v) = τ'(u)·τ''(v)`,
/// `t''_{ω_1}(u·v) = t'_{ω_1}(u)·t''_{ω_1}(v)` for every generator `u`,
/// and the mode identity `e_{1,h}∘t''^{-h}_{ω_1} = (−d)^{-h} t''^{-h}_{ω_1}∘e_1`.
pub fn check_intertwining(space: &DualitySpace, probes: &[DualityProbe]) -> Vec<RelationReport> {
    let n = space.n;
    let q = &space.q;
    let cartan = CartanData::new(n).expect("n >= 2");
    let gens = generators(n);
    let omega: Vec<KmExpr> = gens.iter().map(|&g| t_omega_prime(&cartan, q, &KmExpr::gen(g))).collect();
    run(probes, |p| {
        let v = &p.vector;
        let mut out = Vec::new();
        for i in 1..=n + 1 {
            let mut b = budget_for(space, v);
            let tv = space.braid_t(i, false, v, &mut b);
            for &g in &gens {
                let mut bb = b.clone();
                let uv = space.generator(g, false, v, &mut bb);
                let lhs = space.braid_t(i, false, &uv, &mut bb);
                let rhs = space.eval_expr(&t_prime(&cartan, q, i, g), false, &tv, &mut bb);
                out.push(single("braid.t-intertwine", vec![i as i64, gen_code(g), g.index() as i64], &p.id, &[], lhs == rhs, &bb));
            }
        }
        let mut b = budget_for(space, v);
        let tv = space.tau(v, &mut b);
        let wv = space.t_omega(false, v, &mut b);
        for (g, om) in gens.iter().zip(&omega) {
            let mut bb = b.clone();
            let uv = space.generator(*g, false, v, &mut bb);
            let lhs = space.tau(&uv, &mut bb);
            let rhs = space.eval_expr(&tau_prime(n, *g), false, &tv, &mut bb);
            out.push(single("braid.tau-intertwine", vec![gen_code(*g), g.index() as i64], &p.id, &[], lhs == rhs, &bb));
            let lhs = space.t_omega(false, &uv, &mut bb);
            let rhs = space.eval_expr(om, false, &wv, &mut bb);
            out.push(single("braid.omega-intertwine", vec![gen_code(*g), g.index() as i64], &p.id, &[], lhs == rhs, &bb));
        }
        let minus_d = -&space.d;
        for h in [-2i64, -1, 1, 2] {
            let mut bb = budget_for(space, v);
            let c = minus_d.upow(-h);
            let (lhs, rhs) = if h < 0 {
                let mut tv = v.clone();
                for _ in 0..-h {
                    tv = space.t_omega(true, &tv, &mut bb);
                }
                let lhs = space.mode(ModeKind::E, 1, h, &tv, &mut bb);
                let mut ev = space.generator(KmGen::E(1), true, v, &mut bb);
                for _ in 0..-h {
                    ev = space.t_omega(true, &ev, &mut bb);
                }
                (lhs, ev.scaled(&c))
            } else {
                let mut lhs = space.mode(ModeKind::E, 1, h, v, &mut bb);
                for _ in 0..h {
                    lhs = space.t_omega(true, &lhs, &mut bb);
                }
                let mut tv = v.clone();
                for _ in 0..h {
                    tv = space.t_omega(true, &tv, &mut bb);
                }
                (lhs, space.generator(KmGen::E(1), true, &tv, &mut bb).scaled(&c))
            };
            out.push(single("braid.omega-mode", vec![h], &p.id, &[h], lhs == rhs, &bb));
        }
        out
    })
}

fn hword(space: &DualitySpace, w: &HeckeWord, m: &HModuleVector, b: &mut WindowBudget) -> HModuleVector {
    let (r, wb) = apply_word(space.module(), w, m).expect("word in range");
    b.extent.merge(&wb.extent);
    r
}

fn y_prefix(s: usize) -> HeckeWord {
    (1..=s).fold(HeckeWord::one(), |w, j| w.then(&y(j, 1)))
}

/// Raw `Σ_p m·X_p^{±1} ⊗ (…)` for the wrap-around generators, then straightened.
fn wrap_closed_form(space: &DualitySpace, raise: bool, m: &HModuleVector, j: &[u8], b: &mut WindowBudget) -> DualityVector {
    let top = space.n as u8 + 1;
    let (from, to, e) = if raise { (1, top, 1) } else { (top, 1, -1) };
    let mut raw = DualityVector::zero();
    for p in 0..j.len() {
        if j[p] != from {
            continue;
        }
        let exp: i64 = if raise {
            -j[p + 1..].iter().map(|&r| (r == 1) as i64 - (r == top) as i64).sum::<i64>()
        } else {
            j[..p].iter().map(|&r| (r == 1) as i64 - (r == top) as i64).sum::<i64>()
        };
        let mv = space.module().act_x(p + 1, e, m, b).scaled(&space.q.upow(exp));
        let mut jj = j.to_vec();
        jj[p] = to;
        for (k, c) in mv.iter() {
            raw.add_term(DKey::new(k.clone(), jj.clone()), c.clone());
        }
    }
    space.straighten(&raw, b)
}

/// Closed-form displays evaluated on `m ⊗ v_j` seeds.
pub fn check_closed_forms(space: &DualitySpace, k: i64, seeds: &[BasisSeed]) -> Vec<RelationReport> {
    let (n, l) = (space.n, space.l);
    let (q, d) = (&space.q, &space.d);
    let nn = n as i64;
    run(seeds, |sd| {
        let mut out = Vec::new();
        let m = HModuleVector::basis(sd.m.clone());
        let mut b0 = space.module().new_budget();
        b0.observe(&sd.m);
        let v = space.lift(&m, &sd.j, &mut b0);
        let jt = super::TupleIndex(sd.j.clone());
        let id = sd.id.as_str();

        if l == 1 {
            let jj = sd.j[0] as usize;
            for i in 1..=n {
                let mut b = b0.clone();
                let lhs = space.braid_t(i, false, &v, &mut b);
                let sign = if jj == i + 1 { -1 } else { 1 };
                let c = &Scalar::int(sign) * &q.upow((jj == i) as i64);
                let target = if jj == i { i + 1 } else if jj == i + 1 { i } else { jj };
                let rhs = space.lift(&m, &[target as u8], &mut b).scaled(&c);
                out.push(single("closed.braid-l1", vec![i as i64], id, &[], lhs == rhs, &b));
            }
            let mut b = b0.clone();
            let lhs = space.t_omega(false, &v, &mut b);
            let rhs = if jj == 1 {
                let my = hword(space, &y(1, 1), &m, &mut b);
                space.lift(&my, &sd.j, &mut b).scaled(&q.upow(nn))
            } else {
                space.lift(&m, &sd.j, &mut b).scaled(&Scalar::int(-1))
            };
            out.push(single("closed.omega-l1", vec![], id, &[], lhs == rhs, &b));
        }

        // t''_{ω_1}(m⊗v_j) = (−1)^{l+s} q^{ns} m·Y_{1,s} ⊗ v_j
        {
            let mut b = b0.clone();
            let s = jt.count(1);
            let lhs = space.t_omega(false, &v, &mut b);
            let sign = if (l + s).is_multiple_of(2) { 1 } else { -1 };
            let my = hword(space, &y_prefix(s), &m, &mut b);
            let rhs = space.lift(&my, &sd.j, &mut b).scaled(&(&Scalar::int(sign) * &q.upow(nn * s as i64)));
            out.push(single("closed.omega-lemma", vec![], id, &[], lhs == rhs, &b));
        }

        // e_{1,h}(m⊗v_j) = d^{-h} q^{1-t+s-hn} m·(1 + Σ T_{k,s+1})·Y_{s+1}^{-h} ⊗ v_{j^-}
        {
            let (_, s, t) = jt.segments(1);
            let mut r = RelationReport::new("closed.e1-mode", vec![], id);
            r.mode_window = Some(k);
            for h in -k..=k {
                let mut b = b0.clone();
                let lhs = space.mode(ModeKind::E, 1, h, &v, &mut b);
                let rhs = if t == s {
                    DualityVector::zero()
                } else {
                    let yw = y(s + 1, -h);
                    let mut expr = HeckeExpr::from(yw.clone());
                    for kk in s + 1..t {
                        expr = expr.plus(t_range(kk, s + 1).then(&yw));
                    }
                    let (mv, wb) = apply_expr(space.module(), &expr, &m).expect("word in range");
                    b.extent.merge(&wb.extent);
                    let c = &d.upow(-h) * &q.upow(1 - t as i64 + s as i64 - h * nn);
                    let mut jm = sd.j.clone();
                    jm[s] = 1;
                    space.lift(&mv, &jm, &mut b).scaled(&c)
                };
                r.record(&[h], lhs == rhs, b.is_valid());
            }
            out.push(r);
        }

        // k_i and k_{i,1}
        for i in 1..=n {
            let a = jt.count(i as u8) as i64;
            let bb = jt.count(i as u8 + 1) as i64;
            let mut b = b0.clone();
            let lhs = space.mode(ModeKind::KPlus, i, 0, &v, &mut b);
            out.push(single("closed.k-weight", vec![i as i64], id, &[0], lhs == v.scaled(&q.upow(a - bb)), &b));

            let mut b = b0.clone();
            let lhs = space.mode(ModeKind::KPlus, i, 1, &v, &mut b);
            let mut mv = HModuleVector::zero();
            for (p, &r) in sd.j.iter().enumerate() {
                let c = if r as usize == i {
                    q.upow(-1)
                } else if r as usize == i + 1 {
                    -q
                } else {
                    continue;
                };
                mv.add_scaled(&hword(space, &y(p + 1, -1), &m, &mut b), &c);
            }
            let pre = &(&q.upow(i as i64 - nn + a - bb) * &(Scalar::one() - &q.upow(-2))) * &d.upow(-(i as i64));
            let rhs = space.lift(&mv, &sd.j, &mut b).scaled(&pre);
            out.push(single("closed.k-mode-one", vec![i as i64], id, &[1], lhs == rhs, &b));
        }

        // wrap-around zero modes
        {
            let mut b = b0.clone();
            let lhs = space.mode(ModeKind::E, 0, 0, &v, &mut b);
            let rhs = wrap_closed_form(space, true, &m, &sd.j, &mut b);
            out.push(single("closed.wrap-e0", vec![], id, &[0], lhs == rhs, &b));
            let mut b = b0.clone();
            let lhs = space.mode(ModeKind::F, 0, 0, &v, &mut b);
            let rhs = wrap_closed_form(space, false, &m, &sd.j, &mut b);
            out.push(single("closed.wrap-f0", vec![], id, &[0], lhs == rhs, &b));
            let mut b = b0.clone();
            let lhs = space.mode(ModeKind::KPlus, 0, 0, &v, &mut b);
            let e: i64 = sd.j.iter().map(|&r| (r == 1) as i64 - (r as usize == n + 1) as i64).sum();
            out.push(single("closed.wrap-k0", vec![], id, &[0], lhs == v.scaled(&q.upow(-e)), &b));
            let mut b = b0.clone();
            let mut w = v.clone();
            for i in (0..=n).rev() {
                w = space.mode(ModeKind::KPlus, i, 0, &w, &mut b);
            }
            out.push(single("closed.k-product", vec![], id, &[], w == v, &b));
        }

        // e_1·k_{2,1} − q·k_{2,1}·e_1 = (q − q^{-1}) d^{-1} e_{1,1}·k_2
        {
            let mut b = b0.clone();
            let a1 = space.mode(ModeKind::KPlus, 2, 1, &v, &mut b);
            let a1 = space.mode(ModeKind::E, 1, 0, &a1, &mut b);
            let a2 = space.mode(ModeKind::E, 1, 0, &v, &mut b);
            let a2 = space.mode(ModeKind::KPlus, 2, 1, &a2, &mut b);
            let lhs = a1.sub(&a2.scaled(q));
            let r1 = space.mode(ModeKind::KPlus, 2, 0, &v, &mut b);
            let r1 = space.mode(ModeKind::E, 1, 1, &r1, &mut b);
            let rhs = r1.scaled(&(&(q - &q.upow(-1)) * &d.upow(-1)));
            out.push(single("central.c-one", vec![], id, &[], lhs == rhs, &b));
        }
        out
    })
}

/// `e_0(m ⊗ v_1⊗⋯⊗v_l) = q^{1-l} m·Q ⊗ v_2⊗⋯⊗v_l⊗v_{n+1}`.
pub fn check_e0_generator(space: &DualitySpace, hprobes: &[HProbe]) -> Vec<RelationReport> {
    let (n, l) = (space.n, space.l);
    let src: Vec<u8> = (1..=l as u8).collect();
    let mut dst: Vec<u8> = (2..=l as u8).collect();
    dst.push(n as u8 + 1);
    run(hprobes, |hp| {
        let mut b = space.module().new_budget();
        b.observe_vec(&hp.vector);
        let v = space.lift(&hp.vector, &src, &mut b);
        let lhs = space.mode(ModeKind::E, 0, 0, &v, &mut b);
        let mq = hword(space, &q_word(l), &hp.vector, &mut b);
        let rhs = space.lift(&mq, &dst, &mut b).scaled(&space.q.upow(1 - l as i64));
        vec![single("closed.e0-generator", vec![], &hp.id, &[0], lhs == rhs, &b)]
    })
}

/// The reconstruction identities: `m·Q·Y_1·Q^{-1} = m·Y_2`, `m·Q·Y_l·Q^{-1} = x·m·Y_1`,
/// and their tensor-space forms.
pub fn check_reconstruction(space: &DualitySpace, k: i64, hprobes: &[HProbe]) -> Vec<RelationReport> {
    let (n, l) = (space.n, space.l);
    let (q, d) = (&space.q, &space.d);
    let qw = q_word(l);
    let qinv = qw.inverse();
    let top = n as u8 + 1;
    let v1: Vec<u8> = (1..=l as u8).collect();
    let mut w1: Vec<u8> = (2..=l as u8).collect();
    w1.push(top);
    let mut v2: Vec<u8> = vec![1];
    v2.extend(3..=l as u8 + 1);
    let mut w2: Vec<u8> = (3..=l as u8 + 1).collect();
    w2.push(top);
    run(hprobes, |hp| {
        let m = &hp.vector;
        let id = hp.id.as_str();
        let mut out = Vec::new();
        let mut b0 = space.module().new_budget();
        b0.observe_vec(m);

        let mut b = b0.clone();
        let lhs = hword(space, &qw.clone().then(&y(1, 1)).then(&qinv), m, &mut b);
        let rhs = hword(space, &y(2, 1), m, &mut b);
        out.push(single("reconstruct.q-y1", vec![], id, &[], lhs == rhs, &b));

        let mut b = b0.clone();
        let lhs = hword(space, &qw.clone().then(&y(l, 1)).then(&qinv), m, &mut b);
        let rhs = hword(space, &y(1, 1), m, &mut b).scaled(&space.x);
        out.push(single("reconstruct.q-yl", vec![], id, &[], lhs == rhs, &b));

        // m·Y_2^e·Q ⊗ w = m·Q·Y_1^e ⊗ w, the modes of the θ-conjugation display
        let mut r = RelationReport::new("reconstruct.theta-shift", vec![], id);
        r.mode_window = Some(k);
        for e in -k..=k {
            let mut b = b0.clone();
            let a = hword(space, &y(2, e).then(&qw), m, &mut b);
            let c = hword(space, &qw.clone().then(&y(1, e)), m, &mut b);
            let lhs = space.lift(&a, &w1, &mut b);
            let rhs = space.lift(&c, &w1, &mut b);
            r.record(&[e], lhs == rhs, b.is_valid());
        }
        out.push(r);

        // d^{n+1} m·Q·Y_l ⊗ w = q^{n+1} m·Y_1·Q ⊗ w
        let mut b = b0.clone();
        let a = hword(space, &qw.clone().then(&y(l, 1)), m, &mut b);
        let c = hword(space, &y(1, 1).then(&qw), m, &mut b);
        let lhs = space.lift(&a, &w2, &mut b).scaled(&d.upow(n as i64 + 1));
        let rhs = space.lift(&c, &w2, &mut b).scaled(&q.upow(n as i64 + 1));
        out.push(single("reconstruct.y-wrap", vec![], id, &[], lhs == rhs, &b));

        // e_0·k^±_{2,r} = k^±_{2,r}·e_0 on m ⊗ v_1⊗⋯⊗v_l
        let mut b = b0.clone();
        let v = space.lift(m, &v1, &mut b);
        let mut r = RelationReport::new("reconstruct.e0-k-commute", vec![2], id);
        r.mode_window = Some(k);
        for kind in [ModeKind::KPlus, ModeKind::KMinus] {
            for kk in -k..=k {
                let mut bb = b.clone();
                let x1 = space.mode(ModeKind::E, 0, 0, &space.mode(kind, 2, kk, &v, &mut bb), &mut bb);
                let x2 = space.mode(kind, 2, kk, &space.mode(ModeKind::E, 0, 0, &v, &mut bb), &mut bb);
                r.record(&[kk], x1 == x2, bb.is_valid());
            }
        }
        out.push(r);

        // d^{-1}(e_0k_{1,-1} − q^{-1}k_{1,-1}e_0)k_1 = (q^{-1} − q)e_{0,-1} = d(e_0k_{n,-1} − q^{-1}k_{n,-1}e_0)k_n
        let mut b = b0.clone();
        let v = space.lift(m, &v2, &mut b);
        let side = |i: usize, c: Scalar, b: &mut WindowBudget| {
            let kv = space.mode(ModeKind::KPlus, i, 0, &v, b);
            let x1 = space.mode(ModeKind::E, 0, 0, &space.mode(ModeKind::KMinus, i, -1, &kv, b), b);
            let x2 = space.mode(ModeKind::KMinus, i, -1, &space.mode(ModeKind::E, 0, 0, &kv, b), b);
            x1.sub(&x2.scaled(&q.upow(-1))).scaled(&c)
        };
        let left = side(1, d.upow(-1), &mut b);
        let right = side(n, d.clone(), &mut b);
        let mid = space.mode(ModeKind::E, 0, -1, &v, &mut b).scaled(&(&q.upow(-1) - q));
        out.push(single("reconstruct.e0-mode-identity", vec![], id, &[-1], left == mid && mid == right, &b));

        // evaluated on m ⊗ v: d^{-1} e_0 k_{1,-1} k_1 = −q^{-1} d k_{n,-1} e_0 k_n
        let mut b = b0.clone();
        let v = space.lift(m, &v2, &mut b);
        let kv = space.mode(ModeKind::KPlus, 1, 0, &v, &mut b);
        let lhs = space.mode(ModeKind::E, 0, 0, &space.mode(ModeKind::KMinus, 1, -1, &kv, &mut b), &mut b).scaled(&d.upow(-1));
        let kv = space.mode(ModeKind::KPlus, n, 0, &v, &mut b);
        let rhs = space.mode(ModeKind::KMinus, n, -1, &space.mode(ModeKind::E, 0, 0, &kv, &mut b), &mut b).scaled(&-(&q.upow(-1) * d));
        out.push(single("reconstruct.e0-evaluated", vec![], id, &[-1], lhs == rhs, &b));
        out
    })
}

/// `(m·T_i) ⊗ v = m ⊗ T_i(v)` in the canonical form, with `T` on `V^{⊗2}` from its case formula.
pub fn check_well_defined(space: &DualitySpace, seeds: &[BasisSeed]) -> Vec<RelationReport> {
    let q = &space.q;
    let q2 = q.upow(2);
    run(seeds, |sd| {
        let m = HModuleVector::basis(sd.m.clone());
        let mut out = Vec::new();
        let mut js = vec![sd.j.clone()];
        let mut rev = sd.j.clone();
        rev.reverse();
        if rev != sd.j {
            js.push(rev);
        }
        for (jdx, j) in js.iter().enumerate() {
            for i in 1..space.l {
                let mut b = space.module().new_budget();
                b.observe(&sd.m);
                let mt = space.module().act_t(i, &m, &mut b);
                let mut lhs = DualityVector::zero();
                for (k, c) in mt.iter() {
                    lhs.add_term(DKey::new(k.clone(), j.clone()), c.clone());
                }
                let lhs = space.straighten(&lhs, &mut b);
                let (r, s) = (j[i - 1], j[i]);
                let mut swapped = j.clone();
                swapped.swap(i - 1, i);
                let mut raw = DualityVector::zero();
                if r == s {
                    raw.add_term(DKey::new(sd.m.clone(), j.clone()), q2.clone());
                } else {
                    raw.add_term(DKey::new(sd.m.clone(), swapped), q.clone());
                    if r > s {
                        raw.add_term(DKey::new(sd.m.clone(), j.clone()), &q2 - &Scalar::one());
                    }
                }
                let rhs = space.straighten(&raw, &mut b);
                out.push(single("tensor.well-defined", vec![i as i64, jdx as i64], &sd.id, &[], lhs == rhs, &b));
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{l1_space, poly_space};
    use super::*;
    use crate::hecke::hecke_probes;
    use crate::report::Status;

    fn all_pass(reports: &[RelationReport]) {
        for r in reports {
            assert_eq!(r.status(), Status::Pass, "{:?}", r);
        }
        assert!(!reports.is_empty());
    }

    #[test]
    fn l1_closed_forms() {
        let s = l1_space();
        let seeds = basis_seeds(&s, 1, 1, 0);
        all_pass(&check_closed_forms(&s, 2, &seeds));
    }

    #[test]
    fn l1_intertwining_and_psi() {
        let s = l1_space();
        let probes = duality_probes(&s, 6, 3, 0);
        all_pass(&check_intertwining(&s, &probes));
        all_pass(&check_psi_conjugation(&s, 2, &probes));
        all_pass(&check_psi_roundtrip(&s, &probes));
    }

    #[test]
    fn poly_closed_forms() {
        let s = poly_space();
        let seeds = basis_seeds(&s, 1, 5, 1);
        all_pass(&check_closed_forms(&s, 1, &seeds));
        all_pass(&check_well_defined(&s, &seeds));
    }

    #[test]
    fn poly_reconstruction() {
        let s = poly_space();
        let hp = hecke_probes(s.module(), 4, 9, 2);
        all_pass(&check_reconstruction(&s, 2, &hp));
        all_pass(&check_e0_generator(&s, &hp));
    }

    #[test]
    fn poly_intertwining() {
        let s = poly_space();
        let probes = duality_probes(&s, 4, 11, 1);
        all_pass(&check_intertwining(&s, &probes));
        all_pass(&check_psi_conjugation(&s, 1, &probes));
    }
}
