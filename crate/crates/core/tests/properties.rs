use num_traits::{One, Zero};
use proptest::prelude::*;

use tausys::algebra::{det_bareiss, det_fraction_free, det_laplace, det_leibniz};
use tausys::fock::{FockSpace, FockVector, Sign};
use tausys::shifts::{shift_field_apply, shift_power, ShiftSpec};
use tausys::tau_gl2::{desnanot_jacobi_residual, qsystem_residual, tau2, TauTable2};
use tausys::{q, qq, Family, Matrix, Monomial, Poly, Rational, Series, VarId, Window};

/// Variables c_{-1}, c_0, c_1, d_0, e_2.
fn var(i: usize) -> VarId {
    match i {
        0..=2 => VarId::new(Family::C, i as i64 - 1),
        3 => VarId::new(Family::D, 0),
        _ => VarId::new(Family::E, 2),
    }
}

prop_compose! {
    fn monomial()(exps in prop::collection::vec(0u32..3, 5)) -> Monomial {
        Monomial::from_pairs(exps.into_iter().enumerate().filter(|(_, e)| *e > 0).map(|(i, e)| (var(i), e)))
    }
}

prop_compose! {
    fn poly()(terms in prop::collection::vec((monomial(), -5i64..=5, 1i64..=3), 0..5)) -> Poly {
        Poly::from_terms(terms.into_iter().map(|(m, n, d)| (m, qq(n, d))))
    }
}

// polynomials in c only, every monomial containing some c
prop_compose! {
    fn c_poly()(terms in prop::collection::vec((prop::collection::vec(0u32..3, 3), -4i64..=4), 1..4)) -> Poly {
        Poly::from_terms(terms.into_iter().filter(|(e, _)| e.iter().any(|&x| x > 0)).map(|(e, n)| {
            let m = Monomial::from_pairs(e.into_iter().enumerate().filter(|(_, x)| *x > 0).map(|(i, x)| (VarId::new(Family::C, i as i64), x)));
            (m, q(n))
        }))
    }
}

fn square(n: usize) -> impl Strategy<Value = Vec<Vec<Poly>>> {
    prop::collection::vec(prop::collection::vec(poly(), n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn exact_division_recovers_factor(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn determinant_algorithms_agree(m in (1usize..=3).prop_flat_map(square)) {
        let leibniz = det_leibniz(&m);
        prop_assert_eq!(det_laplace(&m), leibniz.clone());
        prop_assert_eq!(det_bareiss(&m), leibniz.clone());
        prop_assert_eq!(det_fraction_free(&m).unwrap(), leibniz);
    }

    #[test]
    fn determinant_is_multiplicative(a in square(2), b in square(2)) {
        let prod: Vec<Vec<Poly>> = (0..2)
            .map(|i| (0..2).map(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j])).collect())
            .collect();
        prop_assert_eq!(det_leibniz(&prod), &det_leibniz(&a) * &det_leibniz(&b));
    }

    #[test]
    fn series_inverse(coeffs in prop::collection::vec((-6i64..=6, 1i64..=4), 1..6), lead in 1i64..=3, top in -2i64..=2, n in 1i64..=6) {
        let s = Series::<Rational>::from_coeffs(
            std::iter::once((top, q(lead))).chain(coeffs.into_iter().enumerate().map(|(i, (a, d))| (top - 1 - i as i64, qq(a, d)))),
            None,
        );
        let inv = s.invert(n).unwrap();
        let prod = s.mul_ref(&inv);
        for e in -n..=2 * top.abs() + 2 {
            if prod.is_known(e) {
                prop_assert_eq!(prod.coeff(e), if e == 0 { Rational::one() } else { Rational::zero() });
            }
        }
        prop_assert!(prod.is_known(top - n));
    }

    #[test]
    fn unimodular_loop_matrix_inverse(p in c_poly(), r in c_poly(), e1 in 0i64..=2, e2 in 0i64..=2) {
        let upper = Matrix::new(2, vec![Series::one(), Series::monomial(p, e1), Series::zero(), Series::one()]);
        let lower = Matrix::new(2, vec![Series::one(), Series::zero(), Series::monomial(r, e2), Series::one()]);
        let m = upper.mul_ref(&lower);
        prop_assert_eq!(m.det(), Series::one());
        let inv = m.inverse().unwrap();
        prop_assert_eq!(m.mul_ref(&inv), Matrix::identity(2));
        prop_assert_eq!(inv.mul_ref(&m), Matrix::identity(2));
    }

    #[test]
    fn shift_powers_compose(f in c_poly(), a in -2i64..=2, b in -2i64..=2) {
        let big = Window::new(-20, 20);
        let once = shift_power(&f, Family::C, a + b, big);
        let twice = shift_power(&shift_power(&f, Family::C, a, big), Family::C, b, big);
        prop_assert_eq!(once, twice);
        prop_assert_eq!(shift_power(&shift_power(&f, Family::C, a, big), Family::C, -a, big), f);
    }

    #[test]
    fn shift_fields_are_multiplicative(f in c_poly(), g in c_poly(), plus in any::<bool>(), n in 1i64..=4) {
        let w = Window::new(-3, 6);
        let spec = if plus { ShiftSpec::plus(Family::C, n, w) } else { ShiftSpec::minus(Family::C, n, w) };
        let fg = shift_field_apply(&(&f * &g), &spec);
        let prod = shift_field_apply(&f, &spec).mul_ref(&shift_field_apply(&g, &spec));
        for e in -n..=8 {
            prop_assert_eq!(fg.coeff(e), prod.coeff(e));
        }
    }

    #[test]
    fn hankel_recurrences_hold_on_random_windows(lo in -6i64..=2, width in 0i64..=9, k in 0i64..=3, alpha in -3i64..=3) {
        let t = TauTable2::new(Window::new(lo, lo + width));
        prop_assert!(qsystem_residual(k, alpha, &t).is_zero());
        if k >= 2 {
            prop_assert!(desnanot_jacobi_residual(k, alpha, &t).unwrap().is_zero());
        }
    }

    #[test]
    fn tau_vanishes_outside_window(k in 1i64..=3, alpha in -3i64..=3) {
        let empty = Window::new(1, 0);
        prop_assert!(tau2(k, alpha, empty).is_zero());
        prop_assert_eq!(tau2(0, alpha, empty), Poly::one());
    }
}

/// Random superposition of states with a few particles and holes per component.
fn fock_vector(n: usize) -> impl Strategy<Value = FockVector<Rational>> {
    let state = (
        prop::collection::vec(prop::collection::btree_set(-3i64..=-1, 0..=2), n),
        prop::collection::vec(prop::collection::btree_set(0i64..=2, 0..=2), n),
        -3i64..=3,
    );
    prop::collection::vec(state, 1..4).prop_map(move |terms| {
        let space = FockSpace::new(n).unwrap();
        let mut v = FockVector::zero();
        for (ps, hs, c) in terms {
            let ps: Vec<Vec<i64>> = ps.into_iter().map(|s| s.into_iter().collect()).collect();
            let hs: Vec<Vec<i64>> = hs.into_iter().map(|s| s.into_iter().collect()).collect();
            v.add_term(space.state(&ps, &hs).unwrap(), q(c));
        }
        v
    })
}

fn fock_case() -> impl Strategy<Value = (usize, FockVector<Rational>, FockVector<Rational>, usize, usize, i64, i64)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), fock_vector(n), fock_vector(n), 0..n, 0..n, -4i64..=3, -4i64..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fermion_anticommutators((n, v, _, a, b, j, k) in fock_case()) {
        let s = FockSpace::new(n).unwrap();
        let mixed = s.psi(a, Sign::Plus, j, &s.psi(b, Sign::Minus, k, &v)).add(&s.psi(b, Sign::Minus, k, &s.psi(a, Sign::Plus, j, &v)));
        let delta = i64::from(a == b && j + k == -1);
        prop_assert_eq!(mixed, v.scale_i64(delta));
        let pp = s.psi(a, Sign::Plus, j, &s.psi(b, Sign::Plus, k, &v)).add(&s.psi(b, Sign::Plus, k, &s.psi(a, Sign::Plus, j, &v)));
        prop_assert!(pp.is_zero());
    }

    #[test]
    fn fermion_adjointness((n, u, v, a, _, k, _) in fock_case()) {
        let s = FockSpace::new(n).unwrap();
        prop_assert_eq!(u.pair(&s.psi(a, Sign::Plus, k, &v)), s.psi(a, Sign::Minus, -k - 1, &u).pair(&v));
    }

    #[test]
    fn translations_are_unitary((n, u, v, a, b, m, _) in fock_case()) {
        let s = FockSpace::new(n).unwrap();
        prop_assert_eq!(s.q(a, true, &s.q(a, false, &v)), v.clone());
        prop_assert_eq!(s.q_pow(a, m, &u).pair(&s.q_pow(a, m, &v)), u.pair(&v));
        if a != b {
            let ab = s.q(a, false, &s.q(b, false, &v));
            let ba = s.q(b, false, &s.q(a, false, &v));
            prop_assert_eq!(ab, ba.scale_i64(-1));
        }
    }

    #[test]
    fn loop_generators_preserve_total_charge((n, v, _, a, b, m, _) in fock_case()) {
        let s = FockSpace::new(n).unwrap();
        let total = |w: &FockVector<Rational>| w.states().map(|st| s.degree(st).iter().sum::<i64>()).collect::<Vec<_>>();
        let before: std::collections::BTreeSet<i64> = total(&v).into_iter().collect();
        for c in total(&s.e_op(a, b, m, &v)) {
            prop_assert!(before.contains(&c));
        }
    }
}
