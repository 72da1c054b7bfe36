//! Relation catalogue for the toroidal Hecke algebra and the checkers that
//! evaluate both sides on probe vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::module::{HModuleKey, HModuleVector, RightHeckeModule};
use super::word::*;
use crate::report::RelationReport;
use crate::scalar::Scalar;

/// `lhs = rhs` as elements acting on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeckeRelation {
    pub id: String,
    pub indices: Vec<i64>,
    pub lhs: HeckeExpr,
    pub rhs: HeckeExpr,
}

impl HeckeRelation {
    fn new(id: &str, indices: Vec<i64>, lhs: impl Into<HeckeExpr>, rhs: impl Into<HeckeExpr>) -> Self {
        HeckeRelation { id: id.to_string(), indices, lhs: lhs.into(), rhs: rhs.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HProbe {
    pub id: String,
    pub vector: HModuleVector,
}

/// Defining relations, all index instances for the module's `l`.
pub fn def_relations(m: &dyn RightHeckeModule) -> Vec<HeckeRelation> {
    let l = m.l();
    let q2 = m.q().upow(2);
    let one = HeckeWord::one();
    let mut out = Vec::new();
    for i in 1..l {
        let ii = i as i64;
        out.push(HeckeRelation::new("hecke.t-inverse", vec![ii, 0], t(i).then(&t_inv(i)), one.clone()));
        out.push(HeckeRelation::new("hecke.t-inverse", vec![ii, 1], t_inv(i).then(&t(i)), one.clone()));
        // (T+1)(T−q²) = T² + (1−q²)T − q²
        let lhs = HeckeExpr::from(t(i).then(&t(i)))
            .plus(t(i).scaled(&(Scalar::one() - &q2)))
            .plus(one.clone().scaled(&-&q2));
        out.push(HeckeRelation::new("hecke.quadratic", vec![ii], lhs, HeckeExpr::zero()));
        if i + 1 < l {
            out.push(HeckeRelation::new(
                "hecke.braid",
                vec![ii],
                t(i).then(&t(i + 1)).then(&t(i)),
                t(i + 1).then(&t(i)).then(&t(i + 1)),
            ));
        }
        for j in 1..l {
            if j > i + 1 {
                out.push(HeckeRelation::new("hecke.t-far", vec![ii, j as i64], t(i).then(&t(j)), t(j).then(&t(i))));
            }
        }
        for j in 1..=l {
            if j != i && j != i + 1 {
                let jj = j as i64;
                out.push(HeckeRelation::new("hecke.x-t-far", vec![ii, jj], x(j, 1).then(&t(i)), t(i).then(&x(j, 1))));
                out.push(HeckeRelation::new("hecke.y-t-far", vec![ii, jj], y(j, 1).then(&t(i)), t(i).then(&y(j, 1))));
            }
        }
        out.push(HeckeRelation::new("hecke.t-x-t", vec![ii], t(i).then(&x(i, 1)).then(&t(i)), x(i + 1, 1).scaled(&q2)));
        out.push(HeckeRelation::new(
            "hecke.t-y-t",
            vec![ii],
            t_inv(i).then(&y(i, 1)).then(&t_inv(i)),
            y(i + 1, 1).scaled(&q2.upow(-1)),
        ));
    }
    out.push(HeckeRelation::new("hecke.x0-y1", vec![], x0(l).then(&y(1, 1)), y(1, 1).then(&x0(l)).scaled(m.x())));
    for i in 1..=l {
        for j in 1..=l {
            let (ii, jj) = (i as i64, j as i64);
            if i < j {
                out.push(HeckeRelation::new("hecke.x-commute", vec![ii, jj], x(i, 1).then(&x(j, 1)), x(j, 1).then(&x(i, 1))));
                out.push(HeckeRelation::new("hecke.y-commute", vec![ii, jj], y(i, 1).then(&y(j, 1)), y(j, 1).then(&y(i, 1))));
            }
        }
        let ii = i as i64;
        out.push(HeckeRelation::new("hecke.x-inverse", vec![ii], x(i, 1).then(&x(i, -1)), one.clone()));
        out.push(HeckeRelation::new("hecke.y-inverse", vec![ii], y(i, 1).then(&y(i, -1)), one.clone()));
    }
    if l >= 2 {
        out.push(HeckeRelation::new(
            "hecke.commutator",
            vec![],
            x(2, 1).then(&y(1, -1)).then(&x(2, -1)).then(&y(1, 1)),
            t(1).then(&t(1)).scaled(&(q2.upow(-1) * m.y())),
        ));
    }
    out
}

/// Relations of the presentation through `Q = X_1·T_{1,l-1}`.
pub fn q_relations(m: &dyn RightHeckeModule) -> Vec<HeckeRelation> {
    let l = m.l();
    let qw = q_word(l);
    let q2 = qw.clone().then(&qw);
    let mut out = vec![HeckeRelation::new("q.inverse", vec![], q_letter(1).then(&q_letter(-1)), HeckeWord::one())];
    out.push(HeckeRelation::new("q.expansion", vec![], q_letter(1), qw.clone()));
    for i in 2..l {
        out.push(HeckeRelation::new("q.t-shift", vec![i as i64], t(i - 1).conjugate(&qw), t(i)));
    }
    if l >= 2 {
        out.push(HeckeRelation::new("q.t-wrap", vec![], t(l - 1).conjugate(&q2), t(1)));
    }
    for i in 1..l {
        out.push(HeckeRelation::new(
            "q.y-shift",
            vec![i as i64],
            y(i, 1).conjugate(&qw),
            y(i + 1, 1).scaled(&m.y().upow(-1)),
        ));
    }
    out.push(HeckeRelation::new(
        "q.y-wrap",
        vec![],
        y(l, 1).conjugate(&qw),
        y(1, 1).scaled(&(m.x() * &m.y().upow(l as i64 - 1))),
    ));
    out
}

/// The two conjugation lemmas for `Q_{i,j}` and `P_r`, and the factorisation
/// of `X_0·P_r^{-1}`.
///
/// The scalar in the factorisation is `q^{-2r(l-r)}`; the defining relations
/// force it (for `l = 2`, `X_1X_2·T_1^{-1}X_1^{-1} = q^{-2}X_1T_1` follows
/// from `T_1X_1T_1 = q²X_2`).
pub fn conjugation_relations(m: &dyn RightHeckeModule) -> Vec<HeckeRelation> {
    let l = m.l();
    let q = m.q();
    let yinv = m.y().upow(-1);
    let mut out = Vec::new();
    for i in 1..l {
        for j in i..l {
            let qij = q_ij(i, j);
            for r in i..=j {
                out.push(HeckeRelation::new(
                    "lemma.qij-y",
                    vec![i as i64, j as i64, r as i64],
                    y(r, 1).conjugate(&qij),
                    y(r + 1, 1).scaled(&yinv),
                ));
            }
            for tt in (i + 1)..j {
                out.push(HeckeRelation::new(
                    "lemma.qij-t",
                    vec![i as i64, j as i64, tt as i64],
                    t(tt - 1).conjugate(&qij),
                    t(tt),
                ));
            }
        }
    }
    for r in 1..l {
        let pr = p_r(l, r);
        for s in r..l {
            out.push(HeckeRelation::new(
                "lemma.pr-y",
                vec![r as i64, s as i64],
                y(s + 1, 1).conjugate(&pr),
                y(s - r + 1, 1).scaled(&(m.x() * &m.y().upow(r as i64))),
            ));
        }
        for k in (r + 1)..l {
            out.push(HeckeRelation::new("lemma.pr-t", vec![r as i64, k as i64], t(k).conjugate(&pr), t(k - r)));
        }
        out.push(HeckeRelation::new(
            "lemma.x0-pr-inverse",
            vec![r as i64],
            x0(l).then(&pr.inverse()),
            x0_pr_inverse_rhs(l, r, q, -1),
        ));
    }
    out
}

/// `q^{2·sign·r(l-r)}·X_1⋯X_r·T_{r,1}·T_{r+1,2}⋯T_{l-1,l-r}`
pub fn x0_pr_inverse_rhs(l: usize, r: usize, q: &Scalar, sign: i64) -> HeckeWord {
    let mut w = HeckeWord::new((1..=r).map(|j| Letter::X(j, 1)).collect());
    for p in r..l {
        w = w.then(&t_range(p, p - r + 1));
    }
    w.scaled(&q.upow(sign * 2 * (r * (l - r)) as i64))
}

/// Evaluate every relation on every probe.
pub fn check_relations(m: &dyn RightHeckeModule, rels: &[HeckeRelation], probes: &[HProbe]) -> Vec<RelationReport> {
    let jobs: Vec<(&HeckeRelation, &HProbe)> = rels.iter().flat_map(|r| probes.iter().map(move |p| (r, p))).collect();
    jobs.par_iter()
        .map(|(rel, probe)| {
            let mut rep = RelationReport::new(rel.id.clone(), rel.indices.clone(), probe.id.clone());
            match (apply_expr(m, &rel.lhs, &probe.vector), apply_expr(m, &rel.rhs, &probe.vector)) {
                (Ok((a, ba)), Ok((b, bb))) => {
                    rep.record(&[], a.sub(&b).is_zero(), ba.is_valid() && bb.is_valid());
                }
                _ => rep.record(&[], false, true),
            }
            rep
        })
        .collect()
}

pub fn check_def_relations(m: &dyn RightHeckeModule, probes: &[HProbe]) -> Vec<RelationReport> {
    check_relations(m, &def_relations(m), probes)
}

pub fn check_q_presentation(m: &dyn RightHeckeModule, probes: &[HProbe]) -> Vec<RelationReport> {
    check_relations(m, &q_relations(m), probes)
}

pub fn check_conjugation_lemmas(m: &dyn RightHeckeModule, probes: &[HProbe]) -> Vec<RelationReport> {
    check_relations(m, &conjugation_relations(m), probes)
}

/// `count` probes: random monomials in `[-radius, radius]^l`, every fourth one
/// a two-term combination. The character module gets multiples of its basis vector.
pub fn hecke_probes(m: &dyn RightHeckeModule, count: usize, seed: u64, radius: i32) -> Vec<HProbe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = m.l();
    let draw = |rng: &mut ChaCha8Rng| -> HModuleKey {
        if m.window().is_none() {
            HModuleKey::Unit
        } else {
            HModuleKey::Monomial((0..l).map(|_| rng.gen_range(-radius..=radius)).collect())
        }
    };
    (0..count)
        .map(|k| {
            let mut v = HModuleVector::term(draw(&mut rng), Scalar::int(rng.gen_range(1..=5)));
            if k % 4 == 3 {
                v.add_term(draw(&mut rng), Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
            }
            if v.is_zero() {
                v = HModuleVector::basis(draw(&mut rng));
            }
            HProbe { id: format!("h{}", k), vector: v }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::module::{OneDimModule, PolynomialModule};
    use crate::params::Params;
    use crate::report::Status;

    fn generic(l: usize) -> PolynomialModule {
        let p = Params::hecke_only(l, Scalar::int(2), Scalar::ratio(32, 243), Scalar::ratio(5, 7)).unwrap();
        PolynomialModule::new(&p, 8).unwrap()
    }

    fn all_pass(r: &[RelationReport]) -> bool {
        r.iter().all(|x| x.status() == Status::Pass)
    }

    #[test]
    fn defining_relations_l2_l3() {
        for l in [2, 3] {
            let m = generic(l);
            let probes = hecke_probes(&m, 6, 11, 2);
            let reps = check_def_relations(&m, &probes);
            let bad: Vec<_> = reps.iter().filter(|r| r.status() != Status::Pass).collect();
            assert!(bad.is_empty(), "{:?}", bad.first());
        }
    }

    #[test]
    fn presentation_and_lemmas_l2_to_l4() {
        for l in [2, 3, 4] {
            let m = generic(l);
            let probes = hecke_probes(&m, 3, 17, 2);
            let mut reps = check_q_presentation(&m, &probes);
            reps.extend(check_conjugation_lemmas(&m, &probes));
            let bad: Vec<_> = reps.iter().filter(|r| r.status() != Status::Pass).collect();
            assert!(bad.is_empty(), "l = {}: {:?}", l, bad.first());
        }
    }

    #[test]
    fn character_relations() {
        let p = Params::duality(3, 1, Scalar::int(2), Scalar::int(2)).unwrap();
        let m = OneDimModule::new(Scalar::int(5), Scalar::int(7), &p).unwrap();
        let rels = def_relations(&m);
        assert!(rels.iter().all(|r| !r.id.starts_with("hecke.t")));
        let probes = hecke_probes(&m, 3, 1, 0);
        assert!(all_pass(&check_relations(&m, &rels, &probes)));
        let (v, _) = apply_word(&m, &x(1, 2).then(&y(1, -1)), &OneDimModule::unit()).unwrap();
        assert_eq!(v, OneDimModule::unit().scaled(&Scalar::ratio(25, 7)));
    }

    #[test]
    fn corrupted_t_fails_quadratic() {
        let p = Params::hecke_only(2, Scalar::int(2), Scalar::ratio(32, 243), Scalar::one()).unwrap();
        let m = PolynomialModule::corrupted(&p, 8).unwrap();
        let probes = hecke_probes(&m, 4, 3, 2);
        let reps = check_def_relations(&m, &probes);
        assert!(reps.iter().any(|r| r.relation == "hecke.quadratic" && r.status() == Status::Fail));
    }

    #[test]
    fn printed_factorisation_scalar_is_off() {
        let m = generic(2);
        let v = PolynomialModule::monomial(vec![1, -1]);
        let (lhs, _) = apply_word(&m, &x0(2).then(&p_r(2, 1).inverse()), &v).unwrap();
        let (plus, _) = apply_word(&m, &x0_pr_inverse_rhs(2, 1, m.q(), 1), &v).unwrap();
        let (minus, _) = apply_word(&m, &x0_pr_inverse_rhs(2, 1, m.q(), -1), &v).unwrap();
        assert_ne!(lhs, plus);
        assert_eq!(lhs, minus);
    }

    #[test]
    fn formal_parameters() {
        // q and y formal, x = q^5 d^-5
        let x = Scalar::q().upow(5) * Scalar::d().upow(-5);
        let p = Params::hecke_only(2, Scalar::q(), x, Scalar::y()).unwrap();
        let m = PolynomialModule::new(&p, 4).unwrap();
        let probes = hecke_probes(&m, 2, 5, 1);
        let mut rels = def_relations(&m);
        rels.extend(q_relations(&m));
        let reps = check_relations(&m, &rels, &probes);
        let bad: Vec<_> = reps.iter().filter(|r| r.status() != Status::Pass).collect();
        assert!(bad.is_empty(), "{:?}", bad.first());
    }
}
