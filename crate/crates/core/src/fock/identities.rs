//! Determinant identities (Vandermonde squares, Hankel/Heine, Cauchy-type determinants) and
//! fermionic operator identities, each checked exactly.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::laurent::LaurentPoly;
use super::state::{FockSpace, FockVector, Sign, WedgeState};
use crate::algebra::det::{det_laplace, det_leibniz, permutations};
use crate::error::Result;
use crate::{q, qq, Family, Poly, Rational, Ring, VarId};

/// Outcome of one identity instance; `witness` describes the first failing input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub case: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl IdentityCheck {
    fn new(name: &str, case: String, witness: Option<String>) -> IdentityCheck {
        IdentityCheck { name: name.to_string(), case, passed: witness.is_none(), witness }
    }
}

/// z_var^e.
fn zpow(var: usize, e: i32) -> LaurentPoly {
    let mut ex = vec![0; var + 1];
    ex[var] = e;
    LaurentPoly::monomial(&ex, 1)
}

fn vandermonde_matrix(k: usize) -> Vec<Vec<LaurentPoly>> {
    (0..k).map(|i| (0..k).map(|j| zpow(j, i as i32)).collect()).collect()
}

/// det(V)² = Σ_σ det(z_{σ(i)}^{i+j-2}) as polynomials in z_1..z_k.
pub fn vandermonde_square_check(k: usize) -> IdentityCheck {
    let v = det_leibniz(&vandermonde_matrix(k));
    let lhs = &v * &v;
    let mut rhs = LaurentPoly::zero();
    for sigma in permutations(k) {
        let m: Vec<Vec<LaurentPoly>> =
            (0..k).map(|i| (0..k).map(|j| zpow(sigma[i], (i + j) as i32)).collect()).collect();
        rhs = &rhs + &det_leibniz(&m);
    }
    let witness = (lhs != rhs).then(|| format!("lhs {lhs}, rhs {rhs}"));
    IdentityCheck::new("vandermonde-square", format!("k={k}"), witness)
}

/// det V with a_ij = z_j^{i-1} equals Π_{α>β}(z_α - z_β).
pub fn vandermonde_product_check(k: usize) -> IdentityCheck {
    let v = det_leibniz(&vandermonde_matrix(k));
    let p = super::correlation::vandermonde(k);
    let witness = (v != p).then(|| format!("det {v}, product {p}"));
    IdentityCheck::new("vandermonde-product", format!("k={k}"), witness)
}

/// det(c_{α+i+j})_{i,j<k} = (1/k!) Π_i c_i^{(α)}(det(V)²), where c_i^{(α)} sends z_i^e to c_{α+e}.
pub fn heine_check(k: usize, alpha: i64) -> IdentityCheck {
    let c = |e: i64| Poly::var(VarId::new(Family::C, alpha + e));
    let hankel: Vec<Vec<Poly>> = (0..k).map(|i| (0..k).map(|j| c((i + j) as i64)).collect()).collect();
    let lhs = det_laplace(&hankel);
    let v = det_leibniz(&vandermonde_matrix(k));
    let mut rhs = Poly::zero();
    for (e, coeff) in (&v * &v).terms() {
        let mut term = Poly::constant(q(*coeff));
        for i in 0..k {
            term = term.mul_ref(&c(e.get(i).copied().unwrap_or(0) as i64));
        }
        rhs = rhs.add_ref(&term);
    }
    let fact: i64 = (1..=k as i64).product();
    let rhs = rhs.scale(&qq(1, fact));
    let witness = (lhs != rhs).then(|| format!("lhs {lhs}, rhs {rhs}"));
    IdentityCheck::new("heine", format!("k={k} alpha={alpha}"), witness)
}

fn distinct_rationals(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let r = qq(rng.gen_range(-99..=99), rng.gen_range(1..=12));
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

fn ordered_product(xs: &[Rational]) -> Rational {
    let mut acc = Rational::one();
    for (i, a) in xs.iter().enumerate() {
        for b in &xs[i + 1..] {
            acc *= a - b;
        }
    }
    acc
}

fn cross_product(w: &[Rational], y: &[Rational]) -> Rational {
    w.iter().flat_map(|a| y.iter().map(move |b| a - b)).fold(Rational::one(), |acc, d| acc * d)
}

fn pow(x: &Rational, p: usize) -> Rational {
    (0..p).fold(Rational::one(), |acc, _| acc * x)
}

fn recip(x: Rational) -> Rational {
    Rational::one() / x
}

/// The four Cauchy-type determinant identities at distinct points. The first two take
/// w_1..w_n and y_1..y_m, the last two z, w_1..w_m and y_1..y_n. Returns (lhs, rhs) with
/// denominators cleared on both sides, or None when (m, n) is outside the identity's range.
fn cauchy_instance(which: u8, z: &Rational, w: &[Rational], y: &[Rational]) -> Option<(Rational, Rational)> {
    let (m, n) = if which <= 2 { (y.len(), w.len()) } else { (w.len(), y.len()) };
    let num = ordered_product(w) * ordered_product(y);
    let den = cross_product(w, y);
    let z_num = || y.iter().fold(Rational::one(), |acc, b| acc * (z - b));
    let z_den = || w.iter().fold(Rational::one(), |acc, a| acc * (z - a));
    match which {
        1 if m >= n && m >= 1 => {
            let mut rows: Vec<Vec<Rational>> = (0..n).rev().map(|i| y.iter().map(|b| recip(&w[i] - b)).collect()).collect();
            rows.extend((0..m - n).rev().map(|p| y.iter().map(|b| pow(b, p)).collect()));
            Some((det_laplace(&rows) * den, num))
        }
        2 if m < n => {
            let mut rows: Vec<Vec<Rational>> = (0..n - m).rev().map(|p| w.iter().map(|a| pow(a, p)).collect()).collect();
            rows.extend((0..m).rev().map(|i| w.iter().map(|a| recip(a - &y[i])).collect()));
            Some((det_laplace(&rows) * den, num))
        }
        3 if m > n => {
            let mut rows: Vec<Vec<Rational>> = vec![w.iter().map(|a| recip(z - a)).collect()];
            rows.extend((0..m - n - 1).rev().map(|p| w.iter().map(|a| pow(a, p)).collect()));
            rows.extend((0..n).rev().map(|i| w.iter().map(|a| recip(a - &y[i])).collect()));
            Some((det_laplace(&rows) * den * z_den(), num * z_num()))
        }
        4 if m <= n => {
            let mut rows: Vec<Vec<Rational>> = (0..m)
                .rev()
                .map(|i| std::iter::once(-recip(z - &w[i])).chain(y.iter().map(|b| recip(&w[i] - b))).collect())
                .collect();
            rows.extend((0..=n - m).rev().map(|p| std::iter::once(pow(z, p)).chain(y.iter().map(|b| pow(b, p))).collect()));
            let sign = if m % 2 == 1 { -Rational::one() } else { Rational::one() };
            Some((sign * det_laplace(&rows) * den * z_den(), num * z_num()))
        }
        _ => None,
    }
}

/// `num/den`, with the denominator written even when it is 1.
fn fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Cauchy-type determinant identities for all m, n ≤ max at `trials` random point sets each.
pub fn cauchy_determinant_checks(max: usize, trials: usize, seed: u64) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for which in 1..=4u8 {
        for m in 0..=max {
            for n in 0..=max {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((which as u64) << 32) ^ ((m as u64) << 16) ^ n as u64);
                let mut witness = None;
                let mut applies = false;
                for _ in 0..trials {
                    let pts = distinct_rationals(&mut rng, 1 + m + n);
                    let nw = if which <= 2 { n } else { m };
                    let (z, w, y) = (&pts[0], &pts[1..=nw], &pts[nw + 1..]);
                    let Some((lhs, rhs)) = cauchy_instance(which, z, w, y) else { break };
                    applies = true;
                    if lhs != rhs {
                        let show = |xs: &[Rational]| xs.iter().map(fraction).collect::<Vec<_>>().join(",");
                        witness =
                            Some(format!("z={} w=[{}] y=[{}]: {} vs {}", fraction(z), show(w), show(y), fraction(&lhs), fraction(&rhs)));
                        break;
                    }
                }
                if applies {
                    out.push(IdentityCheck::new(&format!("cauchy-det-{which}"), format!("m={m} n={n}"), witness));
                }
            }
        }
    }
    out
}

type Vector = FockVector<Rational>;

/// States with at most three excitations, particle levels {-2, -1} and hole levels {0, 1}.
pub fn small_basis(space: &FockSpace) -> Result<Vec<WedgeState>> {
    let n = space.n();
    let bits = 4 * n;
    let mut out = Vec::new();
    for mask in 0u32..(1 << bits) {
        if mask.count_ones() > 3 {
            continue;
        }
        let mut particles = vec![Vec::new(); n];
        let mut holes = vec![Vec::new(); n];
        for a in 0..n {
            for (i, level) in [-2i64, -1, 0, 1].into_iter().enumerate() {
                if mask & (1 << (4 * a + i)) != 0 {
                    if level < 0 {
                        particles[a].push(level);
                    } else {
                        holes[a].push(level);
                    }
                }
            }
        }
        out.push(space.state(&particles, &holes)?);
    }
    Ok(out)
}

fn first_failure<F>(basis: &[WedgeState], f: F) -> Option<String>
where
    F: Fn(&Vector) -> (Vector, Vector),
{
    basis.iter().find_map(|st| {
        let (l, r) = f(&Vector::basis(st.clone()));
        (!l.sub(&r).is_zero()).then(|| format!("on {st:?}: {l:?} vs {r:?}"))
    })
}

fn parity(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn tri(m: i64) -> i64 {
    m * (m - 1) / 2
}

/// Degree shift of a single state under an operator, if homogeneous.
fn degree_shift(space: &FockSpace, st: &WedgeState, image: &Vector) -> Option<Vec<i64>> {
    if image.is_zero() {
        return None;
    }
    let d0 = space.degree(st);
    space.homogeneous_degree(image).map(|d| d.iter().zip(&d0).map(|(a, b)| a - b).collect())
}

const MODES: std::ops::RangeInclusive<i64> = -3..=2;

/// Fermion mode and translation operator identities on the small basis of F^(n).
pub fn operator_checks(n: usize) -> Result<Vec<IdentityCheck>> {
    let space = FockSpace::new(n)?;
    let basis = small_basis(&space)?;
    let mut out = Vec::new();
    let s = &space;
    let sign_vec = |v: &Vector, e: i64| v.scale_i64(e);

    // anticommutators
    for a in 0..n {
        for b in 0..n {
            let mut w = None;
            'outer: for j in MODES {
                for k in MODES {
                    let delta = i64::from(a == b && j + k == -1);
                    let r = first_failure(&basis, |v| {
                        let l = s.psi(a, Sign::Plus, j, &s.psi(b, Sign::Minus, k, v)).add(&s.psi(b, Sign::Minus, k, &s.psi(a, Sign::Plus, j, v)));
                        (l, v.scale_i64(delta))
                    })
                    .or_else(|| {
                        first_failure(&basis, |v| {
                            let pp = s.psi(a, Sign::Plus, j, &s.psi(b, Sign::Plus, k, v)).add(&s.psi(b, Sign::Plus, k, &s.psi(a, Sign::Plus, j, v)));
                            let mm = s.psi(a, Sign::Minus, j, &s.psi(b, Sign::Minus, k, v)).add(&s.psi(b, Sign::Minus, k, &s.psi(a, Sign::Minus, j, v)));
                            (pp.add(&mm), Vector::zero())
                        })
                    });
                    if let Some(r) = r {
                        w = Some(format!("j={j} k={k} {r}"));
                        break 'outer;
                    }
                }
            }
            out.push(IdentityCheck::new("anticommutator", format!("n={n} a={a} b={b}"), w));
        }
    }

    // adjointness of ψ⁺_{a,(k)} and ψ⁻_{a,(-k-1)}, and unitarity of Q_a, compared as sets of
    // nonzero matrix elements between basis states
    let elements = |op: &dyn Fn(&Vector) -> Vector, transpose: bool| -> Vec<(WedgeState, WedgeState, Rational)> {
        let mut els = Vec::new();
        for st in &basis {
            let img = op(&Vector::basis(st.clone()));
            for (t, c) in img.terms() {
                if basis.contains(t) {
                    els.push(if transpose { (st.clone(), t.clone(), c.clone()) } else { (t.clone(), st.clone(), c.clone()) });
                }
            }
        }
        els.sort_by(|x, y| format!("{:?}{:?}", x.0, x.1).cmp(&format!("{:?}{:?}", y.0, y.1)));
        els
    };
    for a in 0..n {
        let mut w = None;
        for k in MODES {
            // ⟨ψ⁺ v, w⟩ as (w, v) pairs against ⟨v, ψ⁻ w⟩ as (w, v) pairs
            let lhs = elements(&|v| s.psi(a, Sign::Plus, k, v), false);
            let rhs = elements(&|v| s.psi(a, Sign::Minus, -k - 1, v), true);
            if lhs != rhs {
                w = Some(format!("k={k}"));
                break;
            }
        }
        out.push(IdentityCheck::new("fermion-adjoint", format!("n={n} a={a}"), w));
        let lhs = elements(&|v| s.q(a, false, v), false);
        let rhs = elements(&|v| s.q(a, true, v), true);
        out.push(IdentityCheck::new("q-unitary", format!("n={n} a={a}"), (lhs != rhs).then(|| "matrix elements differ".to_string())));
    }

    // Q_a shifts its own modes and anticommutes with the others
    for a in 0..n {
        for b in 0..n {
            let mut w = None;
            for k in MODES {
                for sign in [Sign::Plus, Sign::Minus] {
                    let r = first_failure(&basis, |v| {
                        let l = s.psi(b, sign, k, &s.q(a, false, v));
                        if a == b {
                            let shifted = if sign == Sign::Plus { k + 1 } else { k - 1 };
                            (l, s.q(a, false, &s.psi(b, sign, shifted, v)))
                        } else {
                            (l, sign_vec(&s.q(a, false, &s.psi(b, sign, k, v)), -1))
                        }
                    });
                    if w.is_none() {
                        w = r.map(|r| format!("k={k} {sign:?} {r}"));
                    }
                }
            }
            let name = if a == b { "q-shifts-modes" } else { "q-anticommutes-modes" };
            out.push(IdentityCheck::new(name, format!("n={n} q={a} psi={b}"), w));
        }
    }

    // Q_a Q_b = -Q_b Q_a, Q_a Q_a⁻¹ = Q_a⁻¹ Q_a = 1
    for a in 0..n {
        for b in 0..n {
            let w = if a == b {
                first_failure(&basis, |v| (s.q(a, false, &s.q(a, true, v)), v.clone()))
                    .or_else(|| first_failure(&basis, |v| (s.q(a, true, &s.q(a, false, v)), v.clone())))
            } else {
                first_failure(&basis, |v| (s.q(a, false, &s.q(b, false, v)), sign_vec(&s.q(b, false, &s.q(a, false, v)), -1)))
            };
            out.push(IdentityCheck::new("q-relations", format!("n={n} a={a} b={b}"), w));
        }
    }

    // degree grading
    let unit = |a: usize, e: i64| -> Vec<i64> {
        let mut d = vec![0; n];
        d[a] += e;
        d
    };
    let mut w = None;
    for st in &basis {
        let v = Vector::basis(st.clone());
        for a in 0..n {
            for k in MODES {
                for (sign, e) in [(Sign::Plus, 1), (Sign::Minus, -1)] {
                    if let Some(d) = degree_shift(s, st, &s.psi(a, sign, k, &v)) {
                        if d != unit(a, e) && w.is_none() {
                            w = Some(format!("psi {sign:?} a={a} k={k} on {st:?}"));
                        }
                    }
                }
            }
            for (inv, e) in [(false, 1), (true, -1)] {
                if degree_shift(s, st, &s.q(a, inv, &v)) != Some(unit(a, e)) && w.is_none() {
                    w = Some(format!("Q a={a} inverse={inv} on {st:?}"));
                }
            }
            for b in 0..n {
                for m in -2..=2 {
                    if let Some(d) = degree_shift(s, st, &s.e_op(a, b, m, &v)) {
                        let mut expect = unit(a, 1);
                        expect[b] -= 1;
                        if d != expect && w.is_none() {
                            w = Some(format!("E a={a} b={b} m={m} on {st:?}"));
                        }
                    }
                }
            }
        }
    }
    out.push(IdentityCheck::new("degree-grading", format!("n={n}"), w));

    // loop algebra commutators of the normal-ordered bilinears, with central term m δ_ad δ_bc δ_{m+p,0}
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let mut w = None;
    'comm: for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            for m in -2..=2 {
                for p in -2..=2 {
                    let r = first_failure(&basis, |v| {
                        let l = s.e_op(a, b, m, &s.e_op(c, d, p, v)).sub(&s.e_op(c, d, p, &s.e_op(a, b, m, v)));
                        let mut r = Vector::zero();
                        if b == c {
                            r = r.add(&s.e_op(a, d, m + p, v));
                        }
                        if a == d {
                            r = r.sub(&s.e_op(c, b, m + p, v));
                        }
                        if a == d && b == c && m + p == 0 {
                            r = r.add(&v.scale_i64(m));
                        }
                        (l, r)
                    });
                    if let Some(r) = r {
                        w = Some(format!("E{a}{b} z^{m}, E{c}{d} z^{p}: {r}"));
                        break 'comm;
                    }
                }
            }
        }
    }
    out.push(IdentityCheck::new("loop-commutator", format!("n={n}"), w));

    // Q_a^k v₀ as ordered products of modes
    for a in 0..n {
        let mut w = None;
        for k in -3i64..=3 {
            let sign = if k > 0 { Sign::Plus } else { Sign::Minus };
            let prod = (1..=k.abs()).fold(Vector::vacuum(), |acc, l| s.psi(a, sign, -l, &acc));
            let lhs: Vector = s.q_pow(a, k, &Vector::vacuum());
            if !lhs.sub(&prod).is_zero() && w.is_none() {
                w = Some(format!("k={k}: {lhs:?} vs {prod:?}"));
            }
        }
        out.push(IdentityCheck::new("q-vacuum-products", format!("n={n} a={a}"), w));
    }
    let mut w = None;
    for alpha in 0..=3i64 {
        for beta in 0..=3i64 {
            let p0 = |v: &Vector| (1..=alpha).fold(v.clone(), |acc, l| s.psi(0, Sign::Plus, -l, &acc));
            let p1 = |v: &Vector| (1..=beta).fold(v.clone(), |acc, l| s.psi(1, Sign::Plus, -l, &acc));
            let lhs: Vector = s.q_pow(1, beta, &s.q_pow(0, alpha, &Vector::vacuum()));
            let first = p0(&p1(&Vector::vacuum())).scale_i64(parity(alpha * beta));
            let second = p1(&p0(&Vector::vacuum()));
            if (!lhs.sub(&first).is_zero() || !lhs.sub(&second).is_zero()) && w.is_none() {
                w = Some(format!("alpha={alpha} beta={beta}"));
            }
        }
    }
    out.push(IdentityCheck::new("q-vacuum-two-components", format!("n={n}"), w));

    // translation group identities
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mut w = None;
            for m in -3i64..=3 {
                let r = first_failure(&basis, |v| (s.t_ab_pow(a, b, m, v), s.q_pow(a, m, &s.q_pow(b, -m, v)).scale_i64(parity(tri(m)))));
                if w.is_none() {
                    w = r.map(|r| format!("m={m} {r}"));
                }
            }
            out.push(IdentityCheck::new("translation-power", format!("n={n} a={a} b={b}"), w));
            for c in 0..n {
                if c != a && c != b {
                    let w = first_failure(&basis, |v| (s.t_ab_pow(a, b, 1, &s.q(c, false, v)), s.q(c, false, &s.t_ab_pow(a, b, 1, v))));
                    out.push(IdentityCheck::new("translation-commutes-q", format!("n={n} a={a} b={b} c={c}"), w));
                }
            }
        }
    }
    if n == 3 {
        let mut w = None;
        for k in -2i64..=2 {
            for l in -2i64..=2 {
                let r = first_failure(&basis, |v| {
                    let lhs = s.t_pow(2, k, &s.t_pow(1, l, v));
                    let rhs = s.q_pow(2, k, &s.q_pow(1, l - k, &s.q_pow(0, -l, v)));
                    (lhs, rhs.scale_i64(parity(tri(k) + tri(l))))
                });
                if w.is_none() {
                    w = r.map(|r| format!("k={k} l={l} {r}"));
                }
            }
        }
        out.push(IdentityCheck::new("translation-t2-t1", "n=3".into(), w));
        let (mut w_q, mut w_t) = (None, None);
        for al in -1i64..=2 {
            for be in -1i64..=2 {
                for ga in -1i64..=2 {
                    let lhs = |v: &Vector| s.t_ab_pow(1, 0, al, &s.t_ab_pow(2, 0, be, &s.t_ab_pow(2, 1, ga, v)));
                    let r = first_failure(&basis, |v| {
                        let rhs = s.q_pow(2, be + ga, &s.q_pow(1, al - ga, &s.q_pow(0, -al - be, v)));
                        (lhs(v), rhs.scale_i64(parity(tri(al) + tri(be) + tri(ga) + al * ga)))
                    });
                    if w_q.is_none() {
                        w_q = r.map(|r| format!("alpha={al} beta={be} gamma={ga} {r}"));
                    }
                    let r = first_failure(&basis, |v| {
                        let rhs = s.t_pow(2, be + ga, &s.t_pow(1, al + be, v));
                        (lhs(v), rhs.scale_i64(parity(tri(be) + al * be + al * ga + be * ga)))
                    });
                    if w_t.is_none() {
                        w_t = r.map(|r| format!("alpha={al} beta={be} gamma={ga} {r}"));
                    }
                }
            }
        }
        out.push(IdentityCheck::new("translation-product-q", "n=3".into(), w_q));
        out.push(IdentityCheck::new("translation-product-t", "n=3".into(), w_t));
    }
    if n == 2 {
        let mut w = None;
        for k in -2i64..=3 {
            for b in 0..2usize {
                let bi = b as i64;
                let r = first_failure(&basis, |v| {
                    let lhs = s.t_pow(1, k, &s.q(b, true, v));
                    let rhs = s.q_pow(1, k - bi, &s.q_pow(0, -k - 1 + bi, v));
                    (lhs, rhs.scale_i64(parity(tri(k) + bi * k)))
                });
                if w.is_none() {
                    w = r.map(|r| format!("k={k} b={b} {r}"));
                }
            }
        }
        out.push(IdentityCheck::new("translation-q-inverse", "n=2".into(), w));
        let mut w = None;
        for al in -1i64..=1 {
            for be in -1i64..=1 {
                for l in -2i64..=2 {
                    let r = first_failure(&basis, |v| {
                        let inner = s.q_pow(1, al, &s.q_pow(0, -be, v));
                        let lhs = s.q_pow(0, be, &s.q_pow(1, -al, &s.e_op(1, 0, l, &inner)));
                        (lhs, s.e_op(1, 0, l + al + be, v).scale_i64(parity(al + be)))
                    });
                    if w.is_none() {
                        w = r.map(|r| format!("alpha={al} beta={be} l={l} {r}"));
                    }
                }
            }
        }
        out.push(IdentityCheck::new("e10-conjugation", "n=2".into(), w));
    }
    Ok(out)
}

/// Every determinant and operator identity: Vandermonde and Heine for k ≤ 4 and 3, Cauchy-type
/// determinants for m, n ≤ max, operator identities on F^(2) and F^(3).
pub fn identity_suites(max: usize, trials: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for k in 1..=4 {
        out.push(vandermonde_square_check(k));
        out.push(vandermonde_product_check(k));
    }
    for k in 1..=3 {
        for alpha in -1..=1 {
            out.push(heine_check(k, alpha));
        }
    }
    out.extend(cauchy_determinant_checks(max, trials, seed));
    out.extend(operator_checks(2)?);
    out.extend(operator_checks(3)?);
    Ok(out)
}
