use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use toroidal_core::duality::{DKey, DualitySpace, DualityVector};
use toroidal_core::hecke::{HModuleKey, OneDimModule, PolynomialModule, WindowBudget};
use toroidal_core::qtoroidal::{cleared_coefficients, CartanData, ModeKind, ModeOperators};
use toroidal_core::scalar::Specialization;
use toroidal_core::series::{theta_expand, Direction};
use toroidal_core::{Params, Scalar};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn laurent() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-4i64..=4, -3i32..=3, -3i32..=3, -2i32..=2), 0..4).prop_map(|terms| {
        terms.into_iter().fold(Scalar::zero(), |acc, (c, a, b, y)| acc + Scalar::monomial(rat(c), [a, b, y]))
    })
}

/// Laurent numerator over a nonzero polynomial in `q` alone.
fn fraction() -> impl Strategy<Value = Scalar> {
    (laurent(), prop::collection::vec((1i64..=3, 0i32..=3), 1..3)).prop_map(|(num, den)| {
        let den = den.into_iter().fold(Scalar::one(), |acc, (c, e)| acc + Scalar::monomial(rat(c), [e, 0, 0]));
        num.checked_div(&den).expect("denominator has positive coefficients")
    })
}

fn any_scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![laurent(), fraction(), (-9i64..=9, 1i64..=9).prop_map(|(p, q)| Scalar::ratio(p, q))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(a in any_scalar(), b in any_scalar(), c in any_scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Scalar::zero());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
        if !a.is_zero() {
            let inv = Scalar::one().checked_div(&a);
            if let Ok(inv) = inv {
                prop_assert!((&a * &inv).is_one(), "{} * {}", a, inv);
            }
        }
    }

    #[test]
    fn specialization_is_a_homomorphism(a in laurent(), b in laurent()) {
        let s = Specialization { q: Some(rat(2)), d: Some(BigRational::new(3.into(), 5.into())), y: Some(rat(-7)) };
        let sa = a.specialize(&s).unwrap();
        let sb = b.specialize(&s).unwrap();
        prop_assert_eq!((&a * &b).specialize(&s).unwrap(), &sa * &sb);
        prop_assert_eq!((&a + &b).specialize(&s).unwrap(), &sa + &sb);
        prop_assert!(sa.as_rational().is_some());
    }

    /// Configuration values: rationals and the bare symbols.
    #[test]
    fn parse_round_trips(p in -99i64..=99, q in 1i64..=99, sym in 0usize..4) {
        let a = Scalar::ratio(p, q);
        prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a);
        if sym < 3 {
            let s = [Scalar::q(), Scalar::d(), Scalar::y()][sym].clone();
            prop_assert_eq!(Scalar::parse(&s.to_string()).unwrap(), s);
        }
    }

    /// Multiplying the expansion back by the denominator of `θ_m` leaves the numerator.
    #[test]
    fn theta_multiplies_back(m in -3i64..=3, order in 1usize..8, qi in 0usize..4) {
        let q = [Scalar::int(2), Scalar::ratio(1, 3), Scalar::int(-3), Scalar::q()][qi].clone();
        let qm = q.upow(m);
        for dir in [Direction::AtInfinity, Direction::AtZero] {
            let s = theta_expand(m, dir, order, &q);
            // (Σ c_r w^r)(den0 + den1 w) = num0 + num1 w, up to w^order
            let (num, den) = match dir {
                Direction::AtInfinity => ([qm.clone(), Scalar::int(-1)], [Scalar::one(), -&qm]),
                Direction::AtZero => ([Scalar::int(-1), qm.clone()], [-&qm, Scalar::one()]),
            };
            for r in 0..=order {
                let mut acc = &den[0] * s.coeff(r);
                if r > 0 {
                    acc += &(&den[1] * s.coeff(r - 1));
                }
                let want = num.get(r).cloned().unwrap_or_else(Scalar::zero);
                prop_assert_eq!(acc, want, "r = {}", r);
            }
        }
    }
}

fn l1() -> DualitySpace {
    let p = Params::duality(3, 1, Scalar::int(3), Scalar::int(-3)).unwrap();
    DualitySpace::new(Arc::new(OneDimModule::new(Scalar::int(5), Scalar::ratio(7, 2), &p).unwrap()), &p).unwrap()
}

fn poly() -> DualitySpace {
    let p = Params::duality(4, 2, Scalar::int(2), Scalar::int(3)).unwrap();
    DualitySpace::new(Arc::new(PolynomialModule::new(&p, 8).unwrap()), &p).unwrap()
}

/// The k-e and k-f relations as series identities, without clearing:
/// `A_p B_s = Σ_r c_r d^{∓mr} B_{s±r} A_{p∓r}` with `c_r` from the θ expansion.
#[test]
fn cleared_forms_agree_with_series() {
    let s = l1();
    let (q, d) = (s.q().clone(), s.d().clone());
    let n = 3;
    let cartan = CartanData::new(n).unwrap();
    let k = 3i64;
    let mut b = WindowBudget::unbounded();
    for j0 in 1..=n as u8 + 1 {
        let v = s.basis(HModuleKey::Unit, &[j0]);
        for i in 0..=n {
            for j in 0..=n {
                let a = cartan.a(i, j);
                let m = cartan.m(i, j);
                for (kind_b, a_eff) in [(ModeKind::E, a), (ModeKind::F, -a)] {
                    let plus = theta_expand(a_eff, Direction::AtInfinity, k as usize, &q);
                    let minus = theta_expand(a_eff, Direction::AtZero, k as usize, &q);
                    for p in -k..=k {
                        for sm in -k..=k {
                            let (kind_a, series, sign) = if p >= 0 { (ModeKind::KPlus, &plus, -1) } else { (ModeKind::KMinus, &minus, 1) };
                            let lhs = s.mode(kind_a, i, p, &s.mode(kind_b, j, sm, &v, &mut b), &mut b);
                            let mut rhs = DualityVector::zero();
                            for r in 0..=p.abs() {
                                let c = series.coeff(r as usize) * &d.upow(sign * m * r);
                                let inner = s.mode(kind_a, i, p + sign * r, &v, &mut b);
                                rhs.add_scaled(&s.mode(kind_b, j, sm - sign * r, &inner, &mut b), &c);
                            }
                            assert_eq!(lhs, rhs, "{} i={} j={} p={} s={} v{}", kind_b, i, j, p, sm, j0);
                        }
                    }
                }
            }
        }
    }
}

/// Swapping `(i, z) ↔ (j, w)` in the cleared e-e identity rescales it by `d^m`.
#[test]
fn cleared_ee_swap_symmetry() {
    let s = poly();
    let (q, d) = (s.q().clone(), s.d().clone());
    let n = 4;
    let cartan = CartanData::new(n).unwrap();
    let mut b = WindowBudget::unbounded();
    let v = s.lift(&PolynomialModule::monomial(vec![1, 0]), &[1, 2], &mut b);
    let mut v2 = s.lift(&PolynomialModule::monomial(vec![0, -1]), &[2, 5], &mut b);
    v2.add_assign(&v);
    let res = |kind: ModeKind, i: usize, j: usize, p: i64, t: i64, v: &DualityVector, b: &mut WindowBudget| {
        let sgn = if kind == ModeKind::E { 1 } else { -1 };
        let [al, be, ga, de] = cleared_coefficients(&q, &d, cartan.a(i, j), cartan.m(i, j), sgn);
        let ab = |x: i64, y: i64, b: &mut WindowBudget| s.mode(kind, i, x, &s.mode(kind, j, y, v, b), b);
        let ba = |y: i64, x: i64, b: &mut WindowBudget| s.mode(kind, j, y, &s.mode(kind, i, x, v, b), b);
        let mut r = ab(p + 1, t, b).scaled(&al);
        r.add_scaled(&ab(p, t + 1, b), &-be);
        r.add_scaled(&ba(t, p + 1, b), &-ga);
        r.add_scaled(&ba(t + 1, p, b), &de);
        r
    };
    for kind in [ModeKind::E, ModeKind::F] {
        for w in [&v, &v2] {
            for i in 0..=n {
                for j in 0..=n {
                    for p in -2..=1 {
                        for t in -2..=1 {
                            let r1 = res(kind, i, j, p, t, w, &mut b);
                            let r2 = res(kind, j, i, t, p, w, &mut b);
                            let scale = d.upow(cartan.m(i, j));
                            assert_eq!(r1, r2.scaled(&scale), "{} {} {} {} {}", kind, i, j, p, t);
                        }
                    }
                }
            }
        }
    }
}

fn tuple() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1u8..=5, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Canonical forms are idempotent and independent of how a vector was written.
    #[test]
    fn straightening_is_canonical(j in tuple(), mu in prop::collection::vec(-2i32..=2, 2)) {
        let s = poly();
        let mut b = WindowBudget::unbounded();
        let raw = DualityVector::term(DKey::new(HModuleKey::Monomial(mu.clone()), j.clone()), Scalar::one());
        let once = s.straighten(&raw, &mut b);
        prop_assert_eq!(s.straighten(&once, &mut b), once.clone());
        prop_assert!(once.keys().all(|k| k.j.is_sorted()));
        let mut sorted = j.clone();
        sorted.sort();
        let same = sorted == j;
        if same {
            prop_assert_eq!(once, s.lift(&PolynomialModule::monomial(mu), &j, &mut b));
        }
    }

    #[test]
    fn psi_is_invertible(j in tuple(), mu in prop::collection::vec(-2i32..=2, 2), c in 1i64..5) {
        let s = poly();
        let mut b = WindowBudget::unbounded();
        let mut v = s.lift(&PolynomialModule::monomial(mu), &j, &mut b).scaled(&Scalar::int(c));
        v.add_assign(&s.lift(&PolynomialModule::monomial(vec![0, 1]), &[1, 5], &mut b));
        prop_assert_eq!(s.psi(&s.psi_inv(&v, &mut b), &mut b), v.clone());
        prop_assert_eq!(s.psi_inv(&s.psi(&v, &mut b), &mut b), v);
    }

    /// `k^+` vanishes below mode 0 and `k^-` above it; zero modes are mutually inverse.
    #[test]
    fn k_mode_ranges(j in tuple(), mu in prop::collection::vec(-2i32..=2, 2), i in 0usize..=4, k in 1i64..=3) {
        let s = poly();
        let mut b = WindowBudget::unbounded();
        let v = s.lift(&PolynomialModule::monomial(mu), &j, &mut b);
        prop_assert!(s.mode(ModeKind::KPlus, i, -k, &v, &mut b).is_zero());
        prop_assert!(s.mode(ModeKind::KMinus, i, k, &v, &mut b).is_zero());
        let w = s.mode(ModeKind::KMinus, i, 0, &s.mode(ModeKind::KPlus, i, 0, &v, &mut b), &mut b);
        prop_assert_eq!(w, v);
    }
}
