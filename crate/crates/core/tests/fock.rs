use num_traits::{One, Zero};
use tausys::fock::correlation::*;
use tausys::fock::*;
use tausys::tau_gl2::tau2;
use tausys::tau_gl3::TauTable3;
use tausys::Window;

#[test]
fn tau2_matches_fock() {
    let space = FockSpace::new(2).unwrap();
    for w in [Window::new(-3, 3), Window::new(-4, 4)] {
        for k in 0..=3 {
            for a in -1..=1 {
                assert_eq!(space.tau_via_fock(k, 0, a, 0, w).unwrap(), tau2(k, a, w), "k={k} a={a} {w:?}");
            }
        }
    }
}

#[test]
fn tau3_matches_fock() {
    let w = Window::new(-3, 3);
    let space = FockSpace::new(3).unwrap();
    let t = TauTable3::new(w);
    for k in 0..=3 {
        for l in 0..=(3 - k) {
            for (a, b) in [(0, 0), (1, -1), (-1, 0)] {
                assert_eq!(space.tau_via_fock(k, l, a, b, w).unwrap(), t.tau(k, l, a, b).unwrap(), "k={k} l={l} a={a} b={b}");
            }
        }
    }
}

#[test]
fn two_point_correlation() {
    let r = correlation_pp(2, Sign::Plus).unwrap();
    assert_eq!(r, LaurentPoly::difference(1, 0));
    for k in 1..=4 {
        assert_eq!(correlation_pp(k, Sign::Plus).unwrap(), vandermonde(k), "k={k}");
        assert_eq!(correlation_pp(k, Sign::Minus).unwrap(), vandermonde(k), "k={k}");
    }
}

#[test]
fn mixed_correlations() {
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (0, 2)] {
        let (l, r) = correlation_mn(m, n, 4).unwrap();
        assert_eq!(l, r, "m={m} n={n}");
    }
    for (m, n) in [(0, 0), (1, 0), (1, 1), (2, 1), (1, 2), (2, 0)] {
        let (l, r) = correlation_extra(m, n, 4).unwrap();
        assert_eq!(l, r, "extra m={m} n={n}");
    }
}


#[test]
fn birkhoff_factor_matches_fock() {
    use tausys::fock::birkhoff::g_minus_mismatch;
    use tausys::tau_gl2::{g_minus_from_tau, TauTable2};
    use tausys::tau_gl3::{g_minus_from_tau3, LatticePoint};
    let w = Window::new(-3, 3);
    let s2 = FockSpace::new(2).unwrap();
    let t2 = TauTable2::new(w);
    for k in 0..=2 {
        for a in -1..=1 {
            let f = s2.g_minus_via_fock(k, 0, a, 0, w, 3).unwrap();
            let g = g_minus_from_tau(k, a, &t2, 3).unwrap();
            assert_eq!(f.tau, g.tau);
            assert_eq!(g_minus_mismatch(&f, &g, 3), None, "k={k} a={a}");
        }
    }
    let s3 = FockSpace::new(3).unwrap();
    let t3 = TauTable3::new(Window::new(-2, 2));
    for (k, l) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let f = s3.g_minus_via_fock(k, l, 0, 1, Window::new(-2, 2), 2).unwrap();
        let g = g_minus_from_tau3(LatticePoint::new(k, l, 0, 1), &t3, 2).unwrap();
        assert_eq!(f.tau, g.tau);
        assert_eq!(g_minus_mismatch(&f, &g, 2), None, "k={k} l={l}");
    }
}

#[test]
fn identity_suites_pass() {
    use tausys::fock::identities::identity_suites;
    let checks = identity_suites(5, 20, 7).unwrap();
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    for c in &failed {
        eprintln!("FAIL {} {} {}", c.name, c.case, c.witness.as_deref().unwrap_or("").chars().take(300).collect::<String>());
    }
    assert!(failed.is_empty());
}

type V = FockVector<tausys::Rational>;

#[test]
fn mode_and_translation_examples() {
    let s2 = FockSpace::new(2).unwrap();
    let v0 = V::vacuum();
    assert_eq!(s2.psi(0, Sign::Plus, -1, &v0), s2.q(0, false, &v0));
    assert!(s2.psi(0, Sign::Plus, 0, &v0).is_zero());
    assert_eq!(s2.q_pow(0, 0, &v0), v0);

    // T² v₀ = -Q₁² Q₀⁻² v₀ = -ψ⁻_{0,(-2)} ψ⁻_{0,(-1)} ψ⁺_{1,(-2)} ψ⁺_{1,(-1)} v₀
    let t2 = s2.t_pow(1, 2, &v0);
    assert_eq!(t2, s2.q_pow(1, 2, &s2.q_pow(0, -2, &v0)).scale_i64(-1));
    let modes = [(0, Sign::Minus, -2), (0, Sign::Minus, -1), (1, Sign::Plus, -2), (1, Sign::Plus, -1)];
    let composed = modes.iter().rev().fold(v0.clone(), |acc, &(a, sg, k)| s2.psi(a, sg, k, &acc));
    assert_eq!(t2, composed.scale_i64(-1));
    let st = t2.states().next().unwrap().clone();
    assert_eq!(s2.particles(&st, 1), vec![-2, -1]);
    assert_eq!(s2.holes(&st, 0), vec![0, 1]);
    assert!(s2.particles(&st, 0).is_empty() && s2.holes(&st, 1).is_empty());

    // T Q₁⁻¹ v₀ = (-1)^0 (-1)^1 Q₁^0 Q₀⁻¹ v₀
    assert_eq!(s2.t_pow(1, 1, &s2.q(1, true, &v0)), s2.q(0, true, &v0).scale_i64(-1));

    // T₂T₁ v₀ = Q₂ Q₀⁻¹ v₀, and T₁T₂ = -T₂T₁
    let s3 = FockSpace::new(3).unwrap();
    let t21 = s3.t_pow(2, 1, &s3.t_pow(1, 1, &v0));
    assert_eq!(t21, s3.q(2, false, &s3.q(0, true, &v0)));
    assert_eq!(s3.translation_state::<tausys::Rational>(1, 1).unwrap(), t21.scale_i64(-1));
}

#[test]
fn gamma_examples() {
    use tausys::{Family, Poly};
    let s2 = FockSpace::new(2).unwrap();
    let w = Window::new(0, 0);
    let v0: FockVector = FockVector::vacuum();
    let g = s2.apply_gamma(Family::C, 0, &v0, w).unwrap();
    let single = s2.psi(1, Sign::Plus, -1, &s2.psi(0, Sign::Minus, -1, &v0));
    assert_eq!(g, single.scale(&Poly::var_in(Family::C, 0, w)));

    let w = Window::new(-2, 2);
    let g2 = s2.apply_gamma(Family::C, 1, &s2.apply_gamma(Family::C, 1, &v0, w).unwrap(), w).unwrap();
    assert_eq!(s2.homogeneous_degree(&g2), Some(vec![-2, 2]));
    let wrong = s2.translation_state::<Poly>(1, 0).unwrap();
    assert!(wrong.pair(&g2).is_zero());
}

#[test]
fn tau_examples() {
    use tausys::{Family, Poly};
    let w = Window::new(-3, 3);
    let s2 = FockSpace::new(2).unwrap();
    for a in -2..=2 {
        assert_eq!(s2.tau_via_fock(1, 0, a, 0, w).unwrap(), Poly::var_in(Family::C, a, w));
    }
    assert_eq!(s2.tau_via_fock(0, 0, 0, 0, w).unwrap(), Poly::one());
    assert_eq!(s2.tau_via_fock(3, 0, 0, 0, Window::new(-4, 4)).unwrap(), tau2(3, 0, Window::new(-4, 4)));
    let s3 = FockSpace::new(3).unwrap();
    assert_eq!(s3.tau_via_fock(1, 1, 0, 0, w).unwrap(), tausys::tau_gl3::tau3(1, 1, 0, 0, w).unwrap());
}

#[test]
fn correlation_examples() {
    let (l, r) = correlation_mn(1, 0, 6).unwrap();
    assert_eq!(l, LaurentPoly::one());
    assert_eq!(r, LaurentPoly::one());
    // 1/(w - y) = Σ_j y^j w^{-j-1} on the box
    let (l, r) = correlation_mn(1, 1, 6).unwrap();
    assert_eq!(l, r);
    assert_eq!(l.num_terms(), 7);
    for j in 0..=6 {
        assert_eq!(l.coeff(&[-j - 1, j]), 1);
    }
    let (l, r) = correlation_extra(2, 1, 5).unwrap();
    assert_eq!(l, r);
    assert_eq!(correlation_pp(1, Sign::Plus).unwrap(), LaurentPoly::one());
    let z = |i| LaurentPoly::var(i);
    let k3 = (&z(1) - &z(0)) * (&z(2) - &z(0)) * (&z(2) - &z(1));
    assert_eq!(correlation_pp(3, Sign::Plus).unwrap(), k3);
}

#[test]
fn correlations_on_full_grid() {
    for m in 0..=4 {
        for n in 0..=4 {
            let (l, r) = correlation_mn(m, n, 4).unwrap();
            assert_eq!(l, r, "m={m} n={n}");
            let (l, r) = correlation_extra(m, n, 4).unwrap();
            assert_eq!(l, r, "extra m={m} n={n}");
        }
    }
}

#[test]
fn factorization_and_reduction() {
    let p = Sign::Plus;
    let m = Sign::Minus;
    // empty monomial
    let (f, g) = factorization_check(2, &[vec![], vec![]], &[0, 0], 3).unwrap();
    assert_eq!((f.clone(), g), (LaurentPoly::one(), LaurentPoly::one()));
    // ψ₁⁺(z₁) ψ₀⁻(z₀) against Q₁ Q₀⁻¹
    let (f, g) = factorization_check(2, &[vec![(m, 0)], vec![(p, 1)]], &[-1, 1], 3).unwrap();
    assert!(!f.is_zero());
    assert_eq!(f, g);
    // mixed GL3 triple with two fields in component 1
    let mons = [vec![(m, 0)], vec![(p, 1), (p, 2)], vec![(m, 3)]];
    let (f, g) = factorization_check(3, &mons, &[-1, 2, -1], 3).unwrap();
    assert!(!f.is_zero());
    assert_eq!(f, g);
    let mons = [vec![(p, 0), (m, 1)], vec![(m, 2)], vec![(p, 3), (p, 4)]];
    let (f, g) = factorization_check(3, &mons, &[0, -1, 2], 3).unwrap();
    assert!(!f.is_zero());
    assert_eq!(f, g);
    for n in [2, 3] {
        for a in 0..n {
            let (f, g) = reduction_check(n, a, &[(p, 0), (p, 1), (m, 2)], 1, 3).unwrap();
            assert!(!f.is_zero());
            assert_eq!(f, g, "n={n} a={a}");
        }
    }
}
