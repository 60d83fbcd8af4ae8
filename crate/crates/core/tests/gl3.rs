use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tausys::algebra::Family;
use tausys::loopgroup::random_assignment;
use tausys::tau_gl2::tau2;
use tausys::tau_gl3::*;
use tausys::Window;

#[test]
fn closed_forms_hold() {
    let t = TauTable3::new(Window::new(-5, 5));
    for a in -1..=1 {
        for b in -1..=1 {
            for c in closed_form_checks(a, b, 3, &t).unwrap() {
                assert!(c.holds(), "{} a={a} b={b}", c.name);
            }
        }
    }
}

#[test]
fn degrees_follow_composition_terms() {
    let t = TauTable3::new(Window::new(-3, 3));
    for (k, l) in [(1, 1), (2, 1), (0, 3), (2, 2)] {
        assert!(degree_check(k, l, 0, 1, &t).unwrap(), "k={k} l={l}");
    }
    let terms = t.terms(2, 1, 0, 0).unwrap();
    let shapes: Vec<_> = terms.iter().map(|(c, _)| (c.n_c, c.n_d, c.n_e)).collect();
    assert_eq!(shapes, vec![(2, 0, 1), (1, 1, 0)]);
}

#[test]
fn expansion_order_is_stable() {
    let w = Window::new(-3, 3);
    for (nc, nd, ne) in [(1, 0, 1), (2, 0, 2), (1, 1, 1), (2, 1, 0), (0, 2, 1)] {
        for (a, b) in [(0, 0), (1, -1), (-1, 1)] {
            assert!(residue_is_stable(CompositionTerm::new(nc, nd, ne), a, b, w).unwrap());
        }
    }
}

#[test]
fn k_zero_row_is_gl2_tau() {
    let w = Window::new(-4, 4);
    let t = TauTable3::new(w);
    for k in 0..=3 {
        for (a, b) in [(0, 0), (1, -1), (2, 1)] {
            assert_eq!(t.tau(k, 0, a, b).unwrap(), tau2(k, a - b, w));
        }
    }
}

#[test]
fn four_equations_vanish() {
    let t = TauTable3::new(Window::new(-5, 5));
    let mut pts = Vec::new();
    for k in 0..=2 {
        for l in 0..=2 {
            for a in -1..=1 {
                for b in -1..=1 {
                    pts.extend(equation_support(k, l, a, b));
                }
            }
        }
    }
    t.prefill(&pts).unwrap();
    for k in 0..=2 {
        for l in 0..=2 {
            for a in -1..=1 {
                for b in -1..=1 {
                    for (name, r) in four_equation_residuals(k, l, a, b, &t).unwrap() {
                        assert!(r.is_zero(), "{name} k={k} l={l} a={a} b={b}");
                    }
                }
            }
        }
    }
}

#[test]
fn component_equations_vanish() {
    let t = TauTable3::new(Window::new(-3, 3));
    for k in 0..=1 {
        for l in 0..=1 {
            t.prefill(&equation_support(k, l, 0, 0)).unwrap();
            for (name, r) in component_equation_residuals(k, l, 0, 0, &t).unwrap() {
                assert!(r.is_zero(), "{name} k={k} l={l}");
            }
            let (a, b) = component_shift_pair(k, l, 0, 0, &t).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn connection_identities() {
    let t = TauTable3::new(Window::new(-3, 3));
    for k in 0..=1 {
        for l in 0..=1 {
            for (a, b) in [(0, 0), (1, -1)] {
                let p = LatticePoint::new(k, l, a, b);
                for (name, ok) in determinant_defects3(p, &t).unwrap() {
                    assert!(ok, "{name} at {p}");
                }
                let mut c = Connection3::new(&t);
                let zc = zero_curvature3_atoms(&mut c, p).unwrap();
                assert!(c.vanishes(&zc.uk_factorizations), "U(k+) factorizations at {p}");
                assert!(c.vanishes(&zc.ul_factorizations), "U(l+) factorizations at {p}");
                assert!(c.vanishes(&zc.uk_pattern), "U(k+) pattern at {p}");
                assert!(c.vanishes(&zc.ul_pattern), "U(l+) pattern at {p}");
                for (name, ok) in path_move_residuals(p, &t).unwrap() {
                    assert!(ok, "{name} at {p}");
                }
            }
        }
    }
}

#[test]
fn birkhoff_factor_symbolic() {
    let t = TauTable3::new(Window::new(-3, 3));
    for (k, l) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let p = LatticePoint::new(k, l, 0, 0);
        assert!(verify_birkhoff3(p, &t, 3).unwrap().is_ok(), "{p}");
    }
}

#[test]
fn birkhoff_factor_numeric_and_first_order() {
    let t = TauTable3::new(Window::new(-2, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (k, l) in [(0, 1), (1, 1), (2, 1)] {
        let asg = random_assignment(&mut rng, &[Family::C, Family::D, Family::E], t.window());
        let p = LatticePoint::new(k, l, 0, 1);
        assert_eq!(birkhoff3_numeric_mismatch(p, &t, 4, &asg).unwrap(), None, "{p}");
        assert_eq!(first_order_mismatch(p, &t, &asg).unwrap(), None, "{p}");
    }
}

#[test]
fn connection_matrices_match_definitions() {
    let t = TauTable3::new(Window::new(-2, 2));
    for (k, l) in [(0, 0), (1, 1), (1, 0), (0, 1)] {
        let p = LatticePoint::new(k, l, 0, 0);
        for kind in ConnectionKind3::ALL {
            if kind.defined_at(p) {
                assert_eq!(connection_definition_mismatch3(kind, p, &t, 2).unwrap(), None, "{kind} at {p}");
            }
        }
    }
}

#[test]
fn baker_relations_and_two_step_paths() {
    let t = TauTable3::new(Window::new(-2, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let asg = random_assignment(&mut rng, &[Family::C, Family::D, Family::E], t.window());
    let p = LatticePoint::new(1, 1, 0, 0);
    for (kind, m) in baker3_relations_residual(p, &t, 4, &asg).unwrap() {
        assert_eq!(m, None, "{kind}");
    }
    use ConnectionKind3::*;
    for steps in [[Va, Wb], [Wa, Vb], [Uk, Ul]] {
        assert_eq!(two_step_bookkeeping_mismatch(p, steps, &t, 3, &asg).unwrap(), None, "{steps:?}");
    }
}
