use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{run_cases, Case, CaseRecord, Outcome, RunConfig, Suite};
use crate::algebra::NegativeWitness;
use crate::error::Result;
use crate::fock::birkhoff::g_minus_mismatch;
use crate::fock::correlation::{correlation_extra, correlation_mn, correlation_pp, factorization_check, reduction_check, vandermonde};
use crate::fock::identities::{self, IdentityCheck};
use crate::fock::{FockSpace, Sign};
use crate::loopgroup::random_assignment;
use crate::tau_gl2::*;
use crate::tau_gl3::*;
use crate::{Family, Poly, Ring, Window};

const WITNESS_CHARS: usize = 240;

fn clip(s: String) -> String {
    if s.chars().count() <= WITNESS_CHARS {
        s
    } else {
        let mut t: String = s.chars().take(WITNESS_CHARS).collect();
        t.push_str("...");
        t
    }
}

fn poly_outcome(p: &Poly) -> Outcome {
    Outcome::from_terms(p.num_terms(), || clip(p.to_string()))
}

fn polys_outcome<'a>(named: impl IntoIterator<Item = (String, &'a Poly)>) -> Outcome {
    let mut terms = 0;
    let mut witness = None;
    for (name, p) in named {
        terms += p.num_terms();
        if witness.is_none() && !p.is_zero() {
            witness = Some(clip(format!("{name}: {p}")));
        }
    }
    Outcome { residual_terms: terms, witness }
}

fn flags_outcome(named: impl IntoIterator<Item = (String, bool)>) -> Outcome {
    let failed: Vec<String> = named.into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
    Outcome::from_terms(failed.len(), || clip(failed.join("; ")))
}

fn negative_outcome<R: Ring + std::fmt::Display>(r: std::result::Result<(), NegativeWitness<R>>) -> Outcome {
    match r {
        Ok(()) => Outcome::ok(),
        Err(w) => Outcome::from_terms(1, || clip(format!("entry ({}, {}) at z^{}: {}", w.row, w.col, w.power, w.coeff))),
    }
}

fn mismatch_outcome(m: Option<(usize, usize, i64)>) -> Outcome {
    match m {
        None => Outcome::ok(),
        Some((i, j, p)) => Outcome::from_terms(1, || format!("entry ({i}, {j}) at z^{p}")),
    }
}

fn identity_records(suite: Suite, checks: Vec<IdentityCheck>, timings: bool) -> Vec<CaseRecord> {
    let cases = checks
        .into_iter()
        .map(|c| {
            let name = format!("{} {}", c.name, c.case);
            Case::new(name, &[], move || Ok(Outcome::from_terms(usize::from(!c.passed), || clip(c.witness.clone().unwrap_or_default()))))
        })
        .collect();
    run_cases(suite, cases, timings)
}

/// Seed for one randomized case, independent of scheduling.
fn case_seed(base: u64, suite: Suite, index: u64) -> u64 {
    base.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((suite as u64) << 48) ^ index
}

pub(super) fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<CaseRecord>> {
    match suite {
        Suite::QSystem => Ok(q_system(cfg)),
        Suite::DesnanotJacobi => Ok(desnanot_jacobi(cfg)),
        Suite::ZeroCurvature2 => Ok(zero_curvature_2(cfg)),
        Suite::Birkhoff2 => Ok(birkhoff_2(cfg)),
        Suite::Gl3Four => gl3_four(cfg),
        Suite::Gl3Components => gl3_components(cfg),
        Suite::ZeroCurvature3 => zero_curvature_3(cfg),
        Suite::Birkhoff3 => birkhoff_3(cfg),
        Suite::FockCross => fock_cross(cfg),
        Suite::Correlations => Ok(correlations(cfg)),
        Suite::DetIdentities => Ok(det_identities(cfg)),
        Suite::OperatorIdentities => operator_identities(cfg),
    }
}

fn q_system(cfg: &RunConfig) -> Vec<CaseRecord> {
    let t = TauTable2::new(cfg.window_or(-6, 8));
    let t = &t;
    let mut cases = Vec::new();
    for k in 0..=cfg.kmax.unwrap_or(3) {
        for a in cfg.alphas_or(-2, 2) {
            let p = [("k", k), ("alpha", a)];
            cases.push(Case::new("q-system", &p, move || Ok(poly_outcome(&qsystem_residual(k, a, t)))));
            cases.push(Case::new("q-system quartic", &p, move || Ok(poly_outcome(&quartic_residual(k, a, t)))));
        }
    }
    run_cases(Suite::QSystem, cases, cfg.timings)
}

fn desnanot_jacobi(cfg: &RunConfig) -> Vec<CaseRecord> {
    let t = TauTable2::new(cfg.window_or(-6, 8));
    let t = &t;
    let mut cases = Vec::new();
    for k in 2..=cfg.kmax.unwrap_or(4) {
        for a in cfg.alphas_or(-2, 2) {
            cases.push(Case::new("desnanot-jacobi", &[("k", k), ("alpha", a)], move || {
                Ok(poly_outcome(&desnanot_jacobi_residual(k, a, t)?))
            }));
        }
    }
    run_cases(Suite::DesnanotJacobi, cases, cfg.timings)
}

fn zero_curvature_2(cfg: &RunConfig) -> Vec<CaseRecord> {
    let t = TauTable2::new(cfg.window_or(-4, 4));
    let t = &t;
    let kmax = cfg.kmax.unwrap_or(2);
    let mut cases = Vec::new();
    for a in cfg.alphas_or(-1, 1) {
        for k in 0..=kmax + 1 {
            cases.push(Case::new("connection determinants", &[("k", k), ("alpha", a)], move || {
                Ok(flags_outcome(determinant_defects(k, a, t)?.into_iter().map(|(n, d)| (n, d.is_zero()))))
            }));
        }
        for k in 0..=kmax {
            cases.push(Case::new("zero curvature", &[("k", k), ("alpha", a)], move || {
                let mut c = Connection2::new(t);
                let zc = zero_curvature_atoms(&mut c, k, a)?;
                let f = c.numerators(&zc.factorizations);
                let u = c.numerators(&zc.closed_form);
                let h = h_relation_residual(k, a, t)?;
                let named = f
                    .iter()
                    .map(|p| ("V W^-1 against W^-1 V".to_string(), p))
                    .chain(u.iter().map(|p| ("V W^-1 against U".to_string(), p)))
                    .chain(std::iter::once(("b_k from both factorizations".to_string(), &h)));
                Ok(polys_outcome(named))
            }));
        }
    }
    run_cases(Suite::ZeroCurvature2, cases, cfg.timings)
}

fn birkhoff_2(cfg: &RunConfig) -> Vec<CaseRecord> {
    let t = TauTable2::new(cfg.window_or(-4, 4));
    let small = TauTable2::new(Window::new(-3, 3));
    let (t, small) = (&t, &small);
    let kmax = cfg.kmax.unwrap_or(2);
    let n = cfg.truncation.unwrap_or(5);
    let alphas = cfg.alphas_or(-1, 1);
    let mut cases = Vec::new();
    for k in 0..=kmax {
        for &a in &alphas {
            let p = [("k", k), ("alpha", a)];
            cases.push(Case::new("symbolic negative part", &p, move || Ok(negative_outcome(verify_birkhoff2(k, a, t, n)?))).truncated(n));
            cases.push(
                Case::new("fermion matrix elements", &p, move || {
                    let space = FockSpace::new(2)?;
                    let f = space.g_minus_via_fock(k, 0, a, 0, small.window(), 3)?;
                    let g = g_minus_from_tau(k, a, small, 3)?;
                    Ok(mismatch_outcome(g_minus_mismatch(&f, &g, 3)))
                })
                .truncated(3),
            );
            for kind in ['U', 'V', 'W'] {
                if kind == 'W' && k == 0 {
                    continue;
                }
                cases.push(
                    Case::new(format!("{kind} from Baker functions"), &p, move || {
                        Ok(mismatch_outcome(connection_definition_mismatch(kind, k, a, small, 3)?))
                    })
                    .truncated(3),
                );
            }
        }
    }
    let seed = cfg.seed;
    for i in 0..cfg.trials.unwrap_or(20) as i64 {
        let k = i % (kmax + 1);
        let a = alphas[i as usize % alphas.len()];
        let p = [("k", k), ("alpha", a), ("substitution", i)];
        cases.push(
            Case::new("numeric factorization", &p, move || {
                let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, Suite::Birkhoff2, i as u64));
                let asg = random_assignment(&mut rng, &[Family::C], t.window());
                Ok(mismatch_outcome(birkhoff2_numeric_mismatch(k, a, t, n + 1, &asg)?))
            })
            .truncated(n + 1),
        );
    }
    run_cases(Suite::Birkhoff2, cases, cfg.timings)
}

fn four_points(kmax: i64, lmax: i64, alphas: &[i64], betas: &[i64]) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for k in 0..=kmax {
        for l in 0..=lmax {
            for &a in alphas {
                for &b in betas {
                    out.push((k, l, a, b));
                }
            }
        }
    }
    out
}

fn gl3_four(cfg: &RunConfig) -> Result<Vec<CaseRecord>> {
    let t = TauTable3::new(cfg.window_or(-5, 5));
    let t = &t;
    let (alphas, betas) = (cfg.alphas_or(-1, 1), cfg.betas_or(-1, 1));
    let pts = four_points(cfg.kmax.unwrap_or(2), cfg.lmax.unwrap_or(2), &alphas, &betas);
    let support: Vec<_> = pts.iter().flat_map(|&(k, l, a, b)| equation_support(k, l, a, b)).collect();
    t.prefill(&support)?;
    let mut cases = Vec::new();
    for (k, l, a, b) in pts {
        cases.push(Case::new("four equations", &[("k", k), ("l", l), ("alpha", a), ("beta", b)], move || {
            let r = four_equation_residuals(k, l, a, b, t)?;
            Ok(polys_outcome(r.iter().map(|(n, p)| (n.clone(), p))))
        }));
    }
    for &a in &alphas {
        for &b in &betas {
            cases.push(Case::new("closed forms", &[("alpha", a), ("beta", b)], move || {
                Ok(flags_outcome(closed_form_checks(a, b, 3, t)?.into_iter().map(|c| (c.name.to_string(), c.holds()))))
            }));
        }
    }
    for k in 0..=2 {
        for l in 0..=2 {
            cases.push(Case::new("composition degrees", &[("k", k), ("l", l)], move || {
                Ok(Outcome::from_flag(degree_check(k, l, 0, 0, t)?, || "degree mismatch".into()))
            }));
        }
    }
    Ok(run_cases(Suite::Gl3Four, cases, cfg.timings))
}

fn gl3_components(cfg: &RunConfig) -> Result<Vec<CaseRecord>> {
    let t = TauTable3::new(cfg.window_or(-5, 5));
    let t = &t;
    let pts = four_points(cfg.kmax.unwrap_or(1), cfg.lmax.unwrap_or(1), &cfg.alphas_or(-1, 1), &cfg.betas_or(-1, 1));
    let support: Vec<_> = pts.iter().flat_map(|&(k, l, a, b)| equation_support(k, l, a, b)).collect();
    t.prefill(&support)?;
    let mut cases = Vec::new();
    for (k, l, a, b) in pts {
        let p = [("k", k), ("l", l), ("alpha", a), ("beta", b)];
        cases.push(Case::new("component equations", &p, move || {
            let r = component_equation_residuals(k, l, a, b, t)?;
            Ok(polys_outcome(r.iter().map(|(n, p)| (n.clone(), p))))
        }));
        cases.push(Case::new("two expressions for the shift", &p, move || {
            let (x, y) = component_shift_pair(k, l, a, b, t)?;
            Ok(poly_outcome(&(&x - &y)))
        }));
    }
    Ok(run_cases(Suite::Gl3Components, cases, cfg.timings))
}

fn zero_curvature_3(cfg: &RunConfig) -> Result<Vec<CaseRecord>> {
    let t = TauTable3::new(cfg.window_or(-4, 4));
    let t = &t;
    let kmax = cfg.kmax.unwrap_or(1);
    let lmax = cfg.lmax.unwrap_or(1);
    let (alphas, betas) = (cfg.alphas_or(-1, 1), cfg.betas_or(-1, 1));
    let det_pts = four_points(kmax + 1, lmax + 1, &alphas, &betas);
    let support: Vec<_> = det_pts.iter().flat_map(|&(k, l, a, b)| equation_support(k, l, a, b)).collect();
    t.prefill(&support)?;
    let mut cases = Vec::new();
    for &(k, l, a, b) in &det_pts {
        let p = LatticePoint::new(k, l, a, b);
        cases.push(Case::new("connection determinants", &[("k", k), ("l", l), ("alpha", a), ("beta", b)], move || {
            Ok(flags_outcome(determinant_defects3(p, t)?))
        }));
    }
    for (k, l, a, b) in four_points(kmax, lmax, &alphas, &betas) {
        let p = LatticePoint::new(k, l, a, b);
        cases.push(Case::new("zero curvature", &[("k", k), ("l", l), ("alpha", a), ("beta", b)], move || {
            let mut c = Connection3::new(t);
            let zc = zero_curvature3_atoms(&mut c, p)?;
            Ok(flags_outcome([
                ("U(k+) factorizations".to_string(), c.vanishes(&zc.uk_factorizations)),
                ("U(l+) factorizations".to_string(), c.vanishes(&zc.ul_factorizations)),
                ("U(k+) pattern".to_string(), c.vanishes(&zc.uk_pattern)),
                ("U(l+) pattern".to_string(), c.vanishes(&zc.ul_pattern)),
            ]))
        }));
        cases.push(Case::new("path moves", &[("k", k), ("l", l), ("alpha", a), ("beta", b)], move || {
            Ok(flags_outcome(path_move_residuals(p, t)?))
        }));
    }
    Ok(run_cases(Suite::ZeroCurvature3, cases, cfg.timings))
}

fn birkhoff_3(cfg: &RunConfig) -> Result<Vec<CaseRecord>> {
    let t = TauTable3::new(cfg.window_or(-3, 3));
    let small = TauTable3::new(Window::new(-2, 2));
    let (t, small) = (&t, &small);
    let n = cfg.truncation.unwrap_or(3);
    let pts = four_points(cfg.kmax.unwrap_or(1), cfg.lmax.unwrap_or(1), &cfg.alphas_or(0, 0), &cfg.betas_or(0, 1));
    let mut cases = Vec::new();
    for &(k, l, a, b) in &pts {
        let p = LatticePoint::new(k, l, a, b);
        let params = [("k", k), ("l", l), ("alpha", a), ("beta", b)];
        cases.push(Case::new("symbolic negative part", &params, move || Ok(negative_outcome(verify_birkhoff3(p, t, n)?))).truncated(n));
        cases.push(
            Case::new("fermion matrix elements", &params, move || {
                let space = FockSpace::new(3)?;
                let f = space.g_minus_via_fock(k, l, a, b, small.window(), 2)?;
                let g = g_minus_from_tau3(p, small, 2)?;
                Ok(mismatch_outcome(g_minus_mismatch(&f, &g, 2)))
            })
            .truncated(2),
        );
        for kind in ConnectionKind3::ALL {
            if kind.defined_at(p) {
                cases.push(
                    Case::new(format!("{kind} from Baker functions"), &params, move || {
                        Ok(mismatch_outcome(connection_definition_mismatch3(kind, p, small, 2)?))
                    })
                    .truncated(2),
                );
            }
        }
    }
    let seed = cfg.seed;
    for i in 0..cfg.trials.unwrap_or(6) as i64 {
        let (k, l, a, b) = pts[i as usize % pts.len()];
        let p = LatticePoint::new(k, l, a, b);
        let params = [("k", k), ("l", l), ("alpha", a), ("beta", b), ("substitution", i)];
        cases.push(
            Case::new("numeric factorization", &params, move || {
                let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, Suite::Birkhoff3, i as u64));
                let asg = random_assignment(&mut rng, &[Family::C, Family::D, Family::E], small.window());
                let m = birkhoff3_numeric_mismatch(p, small, 4, &asg)?;
                let f = first_order_mismatch(p, small, &asg)?;
                Ok(flags_outcome([
                    (format!("g_- mismatch {m:?}"), m.is_none()),
                    (format!("first-order pattern mismatch {f:?}"), f.is_none()),
                ]))
            })
            .truncated(4),
        );
    }
    Ok(run_cases(Suite::Birkhoff3, cases, cfg.timings))
}

fn fock_cross(cfg: &RunConfig) -> Result<Vec<CaseRecord>> {
    let kmax = cfg.kmax.unwrap_or(3);
    let (alphas, betas) = (cfg.alphas_or(-1, 1), cfg.betas_or(-1, 1));
    let windows = match cfg.window {
        Some(w) => vec![w],
        None => vec![Window::new(-3, 3), Window::new(-4, 4)],
    };
    let w3 = cfg.window.unwrap_or(Window::new(-3, 3));
    let t = TauTable3::new(w3);
    let t = &t;
    let mut cases = Vec::new();
    for &w in &windows {
        for k in 0..=kmax {
            for &a in &alphas {
                cases.push(Case::new("gl2 tau", &[("k", k), ("alpha", a), ("window_lo", w.lo), ("window_hi", w.hi)], move || {
                    let f = FockSpace::new(2)?.tau_via_fock(k, 0, a, 0, w)?;
                    Ok(poly_outcome(&(&f - &tau2(k, a, w))))
                }));
            }
        }
    }
    let mut pts = Vec::new();
    for k in 0..=kmax {
        for l in 0..=kmax - k {
            for &a in &alphas {
                for &b in &betas {
                    pts.push((k, l, a, b));
                }
            }
        }
    }
    t.prefill(&pts)?;
    for (k, l, a, b) in pts {
        cases.push(Case::new("gl3 tau", &[("k", k), ("l", l), ("alpha", a), ("beta", b)], move || {
            let f = FockSpace::new(3)?.tau_via_fock(k, l, a, b, w3)?;
            Ok(poly_outcome(&(&f - &t.tau(k, l, a, b)?)))
        }));
    }
    Ok(run_cases(Suite::FockCross, cases, cfg.timings))
}

fn laurent_outcome(l: &crate::fock::LaurentPoly, r: &crate::fock::LaurentPoly) -> Outcome {
    let d = l - r;
    Outcome::from_terms(d.num_terms(), || clip(format!("difference {d}")))
}

fn correlations(cfg: &RunConfig) -> Vec<CaseRecord> {
    let order = cfg.order.unwrap_or(6);
    let max = cfg.max_size.unwrap_or(3);
    let mut cases = Vec::new();
    for k in 1..=(max as i64 + 1) {
        for (sign, s) in [(Sign::Plus, 1), (Sign::Minus, -1)] {
            cases.push(Case::new("vandermonde correlator", &[("k", k), ("charge_sign", s)], move || {
                Ok(laurent_outcome(&correlation_pp(k as usize, sign)?, &vandermonde(k as usize)))
            }));
        }
    }
    for m in 0..=max {
        for n in 0..=max {
            let p = [("m", m as i64), ("n", n as i64)];
            cases.push(
                Case::new("mixed correlator", &p, move || {
                    let (l, r) = correlation_mn(m, n, order)?;
                    Ok(laurent_outcome(&l, &r))
                })
                .truncated(order as i64),
            );
            cases.push(
                Case::new("mixed correlator with extra field", &p, move || {
                    let (l, r) = correlation_extra(m, n, order)?;
                    Ok(laurent_outcome(&l, &r))
                })
                .truncated(order as i64),
            );
        }
    }
    let (p, mi) = (Sign::Plus, Sign::Minus);
    type Monomials = Vec<Vec<(Sign, usize)>>;
    let fact: Vec<(usize, Monomials, Vec<i64>)> = vec![
        (2, vec![vec![], vec![]], vec![0, 0]),
        (2, vec![vec![(mi, 0)], vec![(p, 1)]], vec![-1, 1]),
        (2, vec![vec![(p, 0), (p, 1)], vec![(mi, 2)]], vec![2, -1]),
        (3, vec![vec![(mi, 0)], vec![(p, 1), (p, 2)], vec![(mi, 3)]], vec![-1, 2, -1]),
        (3, vec![vec![(p, 0), (mi, 1)], vec![(mi, 2)], vec![(p, 3), (p, 4)]], vec![0, -1, 2]),
    ];
    for (i, (n, mons, exps)) in fact.into_iter().enumerate() {
        cases.push(Case::new("factorization over components", &[("n", n as i64), ("instance", i as i64)], move || {
            let (f, g) = factorization_check(n, &mons, &exps, 3)?;
            Ok(laurent_outcome(&f, &g))
        }));
    }
    for n in 2..=3usize {
        for a in 0..n {
            cases.push(Case::new("one-component reduction", &[("n", n as i64), ("component", a as i64)], move || {
                let (f, g) = reduction_check(n, a, &[(p, 0), (p, 1), (mi, 2)], 1, 3)?;
                Ok(laurent_outcome(&f, &g))
            }));
        }
    }
    run_cases(Suite::Correlations, cases, cfg.timings)
}

fn det_identities(cfg: &RunConfig) -> Vec<CaseRecord> {
    let mut checks = Vec::new();
    for k in 1..=4 {
        checks.push(identities::vandermonde_square_check(k));
        checks.push(identities::vandermonde_product_check(k));
    }
    for k in 1..=3 {
        for a in cfg.alphas_or(-1, 1) {
            checks.push(identities::heine_check(k, a));
        }
    }
    checks.extend(identities::cauchy_determinant_checks(cfg.max_size.unwrap_or(5), cfg.trials.unwrap_or(50), cfg.seed));
    identity_records(Suite::DetIdentities, checks, cfg.timings)
}

fn operator_identities(cfg: &RunConfig) -> Result<Vec<CaseRecord>> {
    let mut checks = identities::operator_checks(2)?;
    checks.extend(identities::operator_checks(3)?);
    Ok(identity_records(Suite::OperatorIdentities, checks, cfg.timings))
}
