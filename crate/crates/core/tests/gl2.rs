use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tausys::algebra::Family;
use tausys::loopgroup::random_assignment;
use tausys::tau_gl2::*;
use tausys::{Poly, Window};

fn c(i: i64) -> Poly {
    Poly::var(tausys::VarId::c(i))
}

#[test]
fn small_taus_are_hankel_minors() {
    let w = Window::new(-6, 8);
    assert_eq!(tau2(1, 2, w), c(2));
    assert_eq!(tau2(2, 0, w), &(&c(0) * &c(2)) - &(&c(1) * &c(1)));
    assert!(tau2(-1, 0, w).is_zero());
}

#[test]
fn qsystem_and_desnanot_jacobi_vanish() {
    let t = TauTable2::new(Window::new(-6, 8));
    for k in 0..=3 {
        for a in -2..=2 {
            assert!(qsystem_residual(k, a, &t).is_zero(), "q-system k={k} a={a}");
            assert!(quartic_residual(k, a, &t).is_zero(), "quartic k={k} a={a}");
        }
    }
    for k in 2..=4 {
        for a in -2..=2 {
            assert!(desnanot_jacobi_residual(k, a, &t).unwrap().is_zero());
        }
    }
}

#[test]
fn connection_determinants_and_zero_curvature() {
    let t = TauTable2::new(Window::new(-4, 4));
    for k in 0..=3 {
        for a in -1..=1 {
            for (name, d) in determinant_defects(k, a, &t).unwrap() {
                assert!(d.is_zero(), "{name} k={k} a={a}");
            }
        }
    }
    for k in 0..=2 {
        for a in -1..=1 {
            let mut c = Connection2::new(&t);
            let zc = zero_curvature_atoms(&mut c, k, a).unwrap();
            assert!(c.numerators(&zc.factorizations).iter().all(|p| p.is_zero()), "k={k} a={a}");
            assert!(c.numerators(&zc.closed_form).iter().all(|p| p.is_zero()), "closed k={k} a={a}");
            assert!(h_relation_residual(k, a, &t).unwrap().is_zero());
        }
    }
}

#[test]
fn birkhoff_factor_symbolic_and_numeric() {
    let t = TauTable2::new(Window::new(-4, 4));
    for k in 0..=2 {
        for a in -1..=1 {
            assert!(verify_birkhoff2(k, a, &t, 5).unwrap().is_ok(), "k={k} a={a}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..=2 {
        let asg = random_assignment(&mut rng, &[Family::C], t.window());
        assert_eq!(birkhoff2_numeric_mismatch(k, -1, &t, 6, &asg).unwrap(), None, "k={k}");
    }
}

#[test]
fn connection_matrices_match_definitions() {
    let t = TauTable2::new(Window::new(-3, 3));
    for k in 0..=2 {
        for a in -1..=1 {
            assert_eq!(connection_definition_mismatch('U', k, a, &t, 3).unwrap(), None, "U k={k} a={a}");
            assert_eq!(connection_definition_mismatch('V', k, a, &t, 3).unwrap(), None, "V k={k} a={a}");
            if k >= 1 {
                assert_eq!(connection_definition_mismatch('W', k, a, &t, 3).unwrap(), None, "W k={k} a={a}");
            }
        }
    }
}

#[test]
fn baker_relations_hold_numerically() {
    let t = TauTable2::new(Window::new(-3, 3));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let asg = random_assignment(&mut rng, &[Family::C], t.window());
    for k in 0..=2 {
        for (kind, r) in baker_relations_residual(k, 0, &t, 6, &asg).unwrap() {
            assert!(r.is_zero(), "{kind} k={k}");
        }
    }
}
