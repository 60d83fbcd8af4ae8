//! Residue formula for the coefficients c^{(α,β)}_{n_c,n_d,n_e} of the GL3 tau function.
//!
//! The integrand p = Δ(x)²Δ(y)²Δ(z)² ∏(x_i − y_j) ∏(y_i − z_j) / ∏(x_i − z_j) is expanded
//! with 1/(x − z) = Σ_m z^m x^{−m−1} in small integer arithmetic, pruning every monomial
//! whose exponents can no longer pair with window indices.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use num_traits::Zero;

use crate::algebra::{Family, Monomial, VarId, Window};
use crate::error::{Error, Result};
use crate::{Poly, Rational};

/// Largest n_c + n_d + n_e the expansion supports.
pub const MAX_VARS: usize = 12;

type Exps = [i16; MAX_VARS];

#[derive(Default)]
struct FxHasher(u64);

impl Hasher for FxHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn write_i16(&mut self, v: i16) {
        self.write_u64(v as u16 as u64);
    }

    fn write_usize(&mut self, v: usize) {
        self.write_u64(v as u64);
    }
}

type Terms = HashMap<Exps, i128, BuildHasherDefault<FxHasher>>;

/// Numbers of c-, d- and e-type integration variables; n_c + n_d = k, n_d + n_e = l.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositionTerm {
    pub n_c: usize,
    pub n_d: usize,
    pub n_e: usize,
}

impl CompositionTerm {
    pub fn new(n_c: usize, n_d: usize, n_e: usize) -> CompositionTerm {
        CompositionTerm { n_c, n_d, n_e }
    }

    pub fn total(&self) -> usize {
        self.n_c + self.n_d + self.n_e
    }

    /// All compositions of (k, l), ordered by n_d.
    pub fn of(k: i64, l: i64) -> Vec<CompositionTerm> {
        if k < 0 || l < 0 {
            return Vec::new();
        }
        (0..=k.min(l)).map(|nd| CompositionTerm::new((k - nd) as usize, nd as usize, (l - nd) as usize)).collect()
    }

    /// Default expansion order (R − L) + n + 2.
    pub fn default_order(&self, window: Window) -> usize {
        ((window.hi - window.lo).max(0) as usize) + self.total() + 2
    }
}

/// Exponent range that still pairs with a window index, per variable.
struct Layout {
    fam: Vec<Family>,
    lo: Vec<i16>,
    hi: Vec<i16>,
    shift: Vec<i64>,
}

impl Layout {
    fn new(t: CompositionTerm, alpha: i64, beta: i64, window: Window) -> Layout {
        let mut l = Layout { fam: Vec::new(), lo: Vec::new(), hi: Vec::new(), shift: Vec::new() };
        for (f, n, s) in [(Family::C, t.n_c, alpha - beta), (Family::D, t.n_d, alpha), (Family::E, t.n_e, beta)] {
            for _ in 0..n {
                l.fam.push(f);
                l.shift.push(s);
                l.lo.push(clamp16(window.lo - s));
                l.hi.push(clamp16(window.hi - s));
            }
        }
        l
    }
}

fn clamp16(v: i64) -> i16 {
    v.clamp(i16::MIN as i64 / 2, i16::MAX as i64 / 2) as i16
}

fn add_term(out: &mut Terms, e: Exps, c: i128) {
    let slot = out.entry(e).or_insert(0);
    *slot = slot.checked_add(c).expect("residue coefficient overflow");
    if *slot == 0 {
        out.remove(&e);
    }
}

/// Multiplies by (v_a − v_b), dropping monomials whose exponent in a variable of `cap`
/// exceeds the bound (numerator factors only raise exponents).
fn mul_difference(terms: &Terms, a: usize, b: usize, cap: &[Option<i16>]) -> Terms {
    let mut out = Terms::default();
    for (e, &c) in terms {
        for (v, s) in [(a, c), (b, -c)] {
            let mut f = *e;
            f[v] += 1;
            if cap[v].is_some_and(|h| f[v] > h) {
                continue;
            }
            add_term(&mut out, f, s);
        }
    }
    out
}

/// Multiplies by Σ_{m=0}^{order} z^m x^{−m−1}, keeping x ≥ x_lo and z ≤ z_hi.
fn mul_cauchy(terms: &Terms, x: usize, z: usize, order: usize, x_lo: i16, z_hi: i16) -> Terms {
    let mut out = Terms::default();
    for (e, &c) in terms {
        let mut f = *e;
        f[x] -= 1;
        for _ in 0..=order {
            if f[x] < x_lo || f[z] > z_hi {
                break;
            }
            add_term(&mut out, f, c);
            f[x] -= 1;
            f[z] += 1;
        }
    }
    out
}

/// Integer expansion of the integrand restricted to monomials with every exponent in range.
fn expand(t: CompositionTerm, layout: &Layout, order: usize) -> Terms {
    let (nc, nd) = (t.n_c, t.n_d);
    let n = t.total();
    let xs: Vec<usize> = (0..nc).collect();
    let ys: Vec<usize> = (nc..nc + nd).collect();
    let zs: Vec<usize> = (nc + nd..n).collect();
    let mut cap = vec![None; n];
    for &v in ys.iter().chain(&zs) {
        cap[v] = Some(layout.hi[v]);
    }
    let mut terms = Terms::default();
    terms.insert([0; MAX_VARS], 1);
    for group in [&xs, &ys, &zs] {
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                terms = mul_difference(&terms, group[i], group[j], &cap);
                terms = mul_difference(&terms, group[i], group[j], &cap);
            }
        }
    }
    for &x in &xs {
        for &y in &ys {
            terms = mul_difference(&terms, x, y, &cap);
        }
    }
    for &y in &ys {
        for &z in &zs {
            terms = mul_difference(&terms, y, z, &cap);
        }
    }
    for &x in &xs {
        for &z in &zs {
            terms = mul_cauchy(&terms, x, z, order, layout.lo[x], layout.hi[z]);
        }
        terms.retain(|e, _| e[x] <= layout.hi[x]);
    }
    terms.retain(|e, _| (0..n).all(|v| e[v] >= layout.lo[v] && e[v] <= layout.hi[v]));
    terms
}

fn is_sorted_within_families(e: &Exps, layout: &Layout, n: usize) -> bool {
    (1..n).all(|v| layout.fam[v] != layout.fam[v - 1] || e[v - 1] <= e[v])
}

/// Number of distinct permutations of the exponent tuple within each family.
fn orbit_size(e: &Exps, layout: &Layout, n: usize) -> i128 {
    let mut size: i128 = 1;
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end < n && layout.fam[end] == layout.fam[start] {
            end += 1;
        }
        let mut counts: HashMap<i16, usize> = HashMap::new();
        for v in start..end {
            *counts.entry(e[v]).or_default() += 1;
        }
        size *= factorial_i128(end - start);
        for c in counts.values() {
            size /= factorial_i128(*c);
        }
        start = end;
    }
    size
}

fn factorial_i128(n: usize) -> i128 {
    (1..=n as i128).product()
}

fn residue_monomial(e: &Exps, layout: &Layout, n: usize) -> Monomial {
    Monomial::from_pairs((0..n).map(|v| (VarId::new(layout.fam[v], e[v] as i64 + layout.shift[v]), 1)))
}

/// The residue with an explicit expansion order M; `symmetrize` maps only family-sorted
/// exponent tuples, weighted by orbit size.
pub fn residue_coeff_with_order(
    t: CompositionTerm,
    alpha: i64,
    beta: i64,
    window: Window,
    order: usize,
    symmetrize: bool,
) -> Result<Poly> {
    let n = t.total();
    if n > MAX_VARS {
        return Err(Error::BoundExceeded(format!("residue expansion supports at most {MAX_VARS} variables, got {n}")));
    }
    if window.is_empty() && n > 0 {
        return Ok(Poly::zero());
    }
    let layout = Layout::new(t, alpha, beta, window);
    let terms = expand(t, &layout, order);
    let mut acc: HashMap<Monomial, i128> = HashMap::new();
    for (e, c) in &terms {
        let weight = if symmetrize {
            if !is_sorted_within_families(e, &layout, n) {
                continue;
            }
            orbit_size(e, &layout, n)
        } else {
            1
        };
        let slot = acc.entry(residue_monomial(e, &layout, n)).or_insert(0);
        *slot = slot.checked_add(c * weight).expect("residue coefficient overflow");
    }
    let sign: i128 = if (t.n_d * (t.n_d + 1) / 2) % 2 == 0 { 1 } else { -1 };
    let denom = factorial_i128(t.n_c) * factorial_i128(t.n_d) * factorial_i128(t.n_e);
    let denom = Rational::from_integer(denom.into());
    Ok(Poly::from_terms(
        acc.into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (m, Rational::from_integer((sign * c).into()) / &denom)),
    ))
}

/// c^{(α,β)}_{n_c,n_d,n_e} over the window, at the default expansion order.
pub fn residue_coeff(t: CompositionTerm, alpha: i64, beta: i64, window: Window) -> Result<Poly> {
    residue_coeff_with_order(t, alpha, beta, window, t.default_order(window), true)
}

/// Recomputes at order M + 2 and reports whether the result changed.
pub fn residue_is_stable(t: CompositionTerm, alpha: i64, beta: i64, window: Window) -> Result<bool> {
    let m = t.default_order(window);
    Ok(residue_coeff_with_order(t, alpha, beta, window, m, true)?
        == residue_coeff_with_order(t, alpha, beta, window, m + 2, true)?)
}

/// True when every monomial has c-, d-, e-degrees (n_c, n_d, n_e).
pub fn has_composition_degrees(p: &Poly, t: CompositionTerm) -> bool {
    p.terms().all(|(m, _)| {
        m.degree_in(Family::C) as usize == t.n_c
            && m.degree_in(Family::D) as usize == t.n_d
            && m.degree_in(Family::E) as usize == t.n_e
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    fn v(f: Family, i: i64) -> Poly {
        Poly::var(VarId::new(f, i))
    }

    #[test]
    fn single_variable_terms() {
        let w = Window::new(-3, 3);
        assert_eq!(residue_coeff(CompositionTerm::new(1, 0, 0), 1, 0, w).unwrap(), v(Family::C, 1));
        assert_eq!(residue_coeff(CompositionTerm::new(0, 1, 0), 1, 0, w).unwrap(), -v(Family::D, 1));
        assert_eq!(residue_coeff(CompositionTerm::new(0, 0, 1), 0, -2, w).unwrap(), v(Family::E, -2));
    }

    #[test]
    fn cauchy_term_is_window_truncated_sum() {
        let w = Window::new(-3, 3);
        let (a, b) = (1, -1);
        let mut expected = Poly::zero();
        for i in 0..=10 {
            expected += &(&Poly::var_in(Family::E, b + i, w) * &Poly::var_in(Family::C, a - b - i - 1, w));
        }
        assert_eq!(residue_coeff(CompositionTerm::new(1, 0, 1), a, b, w).unwrap(), expected);
    }

    #[test]
    fn symmetrized_matches_plain_for_small_terms() {
        let w = Window::new(-2, 3);
        for nc in 0..=2 {
            for nd in 0..=2 - nc {
                for ne in 0..=2 - nc - nd {
                    let t = CompositionTerm::new(nc, nd, ne);
                    let m = t.default_order(w);
                    let a = residue_coeff_with_order(t, 1, 0, w, m, true).unwrap();
                    let b = residue_coeff_with_order(t, 1, 0, w, m, false).unwrap();
                    assert_eq!(a, b, "{t:?}");
                    assert!(has_composition_degrees(&a, t));
                }
            }
        }
    }

    #[test]
    fn too_many_variables_is_an_error() {
        let t = CompositionTerm::new(7, 0, 7);
        assert!(residue_coeff(t, 0, 0, Window::new(-1, 1)).is_err());
    }
}
