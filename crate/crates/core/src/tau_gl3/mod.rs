//! GL3 tau functions from the residue formula, their closed forms and the four
//! difference equations they satisfy.

mod connection;
mod residue;

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{det_fraction_free, Family, Window};
use crate::error::Result;
use crate::symbolic::AtomTable;
use crate::tau_gl2::tau2;
use crate::Poly;

pub use connection::*;
pub use residue::{
    has_composition_degrees, residue_coeff, residue_coeff_with_order, residue_is_stable, CompositionTerm, MAX_VARS,
};

/// τ_{k,l}^{(α,β)}: 0 if k < 0 or l < 0, else the sum of residue coefficients over all
/// compositions n_c + n_d = k, n_d + n_e = l.
pub fn tau3(k: i64, l: i64, alpha: i64, beta: i64, window: Window) -> Result<Poly> {
    let mut acc = Poly::zero();
    for t in CompositionTerm::of(k, l) {
        acc += &residue_coeff(t, alpha, beta, window)?;
    }
    Ok(acc)
}

type TermKey = (Window, CompositionTerm, i64, i64);

/// Memoized τ_{k,l}^{(α,β)} (and its composition terms) over a window and its extensions.
pub struct TauTable3 {
    window: Window,
    terms: Mutex<HashMap<TermKey, Poly>>,
    taus: Mutex<HashMap<(Window, i64, i64, i64, i64), Poly>>,
}

impl TauTable3 {
    pub fn new(window: Window) -> TauTable3 {
        TauTable3 { window, terms: Mutex::new(HashMap::new()), taus: Mutex::new(HashMap::new()) }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Residue coefficient of one composition term, memoized.
    pub fn term_in(&self, window: Window, t: CompositionTerm, alpha: i64, beta: i64) -> Result<Poly> {
        // terms with n_c = 0 do not see α − β and terms with n_d = n_c = 0 do not see α
        let a = if t.n_c == 0 && t.n_d == 0 { 0 } else { alpha };
        let key = (window, t, a, beta);
        if let Some(p) = self.terms.lock().expect("term cache").get(&key) {
            return Ok(p.clone());
        }
        let p = residue_coeff(t, a, beta, window)?;
        self.terms.lock().expect("term cache").insert(key, p.clone());
        Ok(p)
    }

    /// The composition terms of τ_{k,l} in order of n_d.
    pub fn terms(&self, k: i64, l: i64, alpha: i64, beta: i64) -> Result<Vec<(CompositionTerm, Poly)>> {
        CompositionTerm::of(k, l).into_iter().map(|t| Ok((t, self.term_in(self.window, t, alpha, beta)?))).collect()
    }

    pub fn tau_in(&self, window: Window, k: i64, l: i64, alpha: i64, beta: i64) -> Result<Poly> {
        if k < 0 || l < 0 {
            return Ok(Poly::zero());
        }
        let key = (window, k, l, alpha, beta);
        if let Some(p) = self.taus.lock().expect("tau cache").get(&key) {
            return Ok(p.clone());
        }
        let mut acc = Poly::zero();
        for t in CompositionTerm::of(k, l) {
            acc += &self.term_in(window, t, alpha, beta)?;
        }
        self.taus.lock().expect("tau cache").insert(key, acc.clone());
        Ok(acc)
    }

    pub fn tau(&self, k: i64, l: i64, alpha: i64, beta: i64) -> Result<Poly> {
        self.tau_in(self.window, k, l, alpha, beta)
    }

    /// Computes the composition terms of many (k, l, α, β) in parallel.
    pub fn prefill_in(&self, window: Window, points: &[(i64, i64, i64, i64)]) -> Result<()> {
        let mut keys: Vec<(CompositionTerm, i64, i64)> = points
            .iter()
            .flat_map(|&(k, l, a, b)| CompositionTerm::of(k, l).into_iter().map(move |t| (t, a, b)))
            .map(|(t, a, b)| (t, if t.n_c == 0 && t.n_d == 0 { 0 } else { a }, b))
            .collect();
        keys.sort();
        keys.dedup();
        // largest terms first so the pool stays busy
        keys.sort_by_key(|(t, _, _)| std::cmp::Reverse(t.total()));
        keys.par_iter().try_for_each(|&(t, a, b)| self.term_in(window, t, a, b).map(|_| ()))
    }

    pub fn prefill(&self, points: &[(i64, i64, i64, i64)]) -> Result<()> {
        self.prefill_in(self.window, points)
    }

    /// Rows (k, l, α, β, τ) for −1 ≤ k ≤ kmax, −1 ≤ l ≤ lmax, sorted.
    pub fn rows(&self, kmax: i64, lmax: i64, alphas: &[i64], betas: &[i64]) -> Result<Vec<(i64, i64, i64, i64, Poly)>> {
        let mut pts = Vec::new();
        for k in -1..=kmax {
            for l in -1..=lmax {
                for &a in alphas {
                    for &b in betas {
                        pts.push((k, l, a, b));
                    }
                }
            }
        }
        self.prefill(&pts)?;
        pts.into_iter().map(|(k, l, a, b)| Ok((k, l, a, b, self.tau(k, l, a, b)?))).collect()
    }
}

/// True when every composition term of τ_{k,l} has c-, d-, e-degrees (n_c, n_d, n_e).
pub fn degree_check(k: i64, l: i64, alpha: i64, beta: i64, t: &TauTable3) -> Result<bool> {
    Ok(t.terms(k, l, alpha, beta)?.iter().all(|(c, p)| has_composition_degrees(p, *c)))
}

/// det [x_{shift+i+j}]_{0≤i,j<k} with out-of-window entries zero.
pub fn hankel(family: Family, shift: i64, k: usize, window: Window) -> Poly {
    if k == 0 {
        return Poly::one();
    }
    let m: Vec<Vec<Poly>> =
        (0..k).map(|i| (0..k).map(|j| Poly::var_in(family, shift + (i + j) as i64, window)).collect()).collect();
    det_fraction_free(&m).expect("square Hankel matrix")
}

/// One closed-form comparison: the table value against an independent expression.
#[derive(Clone, Debug)]
pub struct ClosedFormCheck {
    pub name: String,
    pub computed: Poly,
    pub expected: Poly,
}

impl ClosedFormCheck {
    pub fn holds(&self) -> bool {
        self.computed == self.expected
    }
}

/// The small-(k, l) closed forms of τ_{k,l}^{(α,β)}, for k, l up to `kmax`.
pub fn closed_form_checks(alpha: i64, beta: i64, kmax: usize, t: &TauTable3) -> Result<Vec<ClosedFormCheck>> {
    let w = t.window();
    let (a, b) = (alpha, beta);
    let c = |i: i64| Poly::var_in(Family::C, i, w);
    let d = |i: i64| Poly::var_in(Family::D, i, w);
    let e = |i: i64| Poly::var_in(Family::E, i, w);
    let span = (w.hi - w.lo).abs() + a.abs() + b.abs() + 4;
    // Σ_{i ≥ from} e_{β+i+p} c_{α−β−i−1−q}
    let ec = |from: i64, p: i64, q: i64| {
        let mut acc = Poly::zero();
        for i in from..=span {
            acc += &(&e(b + i + p) * &c(a - b - i - 1 - q));
        }
        acc
    };
    let mut out = Vec::new();
    let mut push = |name: String, computed: Poly, expected: Poly| out.push(ClosedFormCheck { name, computed, expected });
    for (k, l) in [(-1, 0), (0, -1), (-1, -1), (-1, 2), (2, -1)] {
        push(format!("tau({k},{l}) = 0"), t.tau(k, l, a, b)?, Poly::zero());
    }
    push("tau(0,0) = 1".into(), t.tau(0, 0, a, b)?, Poly::one());
    for k in 1..=kmax as i64 {
        push(format!("tau({k},0) = c-Hankel"), t.tau(k, 0, a, b)?, hankel(Family::C, a - b, k as usize, w));
        push(format!("tau({k},0) = tau2({k})"), t.tau(k, 0, a, b)?, tau2(k, a - b, w));
        push(format!("tau(0,{k}) = e-Hankel"), t.tau(0, k, a, b)?, hankel(Family::E, b, k as usize, w));
        push(format!("tau(0,{k}) alpha-free"), t.tau(0, k, a, b)?, t.tau(0, k, a + 1, b)?);
    }
    push("tau(1,1)".into(), t.tau(1, 1, a, b)?, &ec(0, 0, 0) - &d(a));
    let t12 = &(&(&e(b) * &ec(1, 1, 0)) - &(&e(b + 1) * &ec(0, 1, 1)))
        + &(&(&e(b + 1) * &d(a)) - &(&e(b) * &d(a + 1)));
    push("tau(1,2)".into(), t.tau(1, 2, a, b)?, t12);
    let t21 = &(&(&c(a - b + 1) * &ec(0, 0, 0)) - &(&c(a - b) * &ec(0, 0, -1)))
        + &(&(&c(a - b) * &d(a + 1)) - &(&c(a - b + 1) * &d(a)));
    push("tau(2,1)".into(), t.tau(2, 1, a, b)?, t21);
    Ok(out)
}

/// Residuals of the four bilinear equations at (k, l, α, β), labelled [2], [1], [0], [1,1].
pub fn four_equation_residuals(k: i64, l: i64, alpha: i64, beta: i64, table: &TauTable3) -> Result<Vec<(String, Poly)>> {
    let (a, b) = (alpha, beta);
    let t = |dk: i64, dl: i64, da: i64, db: i64| table.tau(k + dk, l + dl, a + da, b + db);
    let m = |x: Poly, y: Poly| &x * &y;
    let eq2 = &(&m(t(0, -1, 0, 0)?, t(0, 0, 1, 0)?) + &m(t(1, 0, 0, 0)?, t(-1, -1, 1, 0)?))
        - &m(t(0, -1, 1, 0)?, t(0, 0, 0, 0)?);
    let eq1 = &(&m(t(1, 1, 0, 1)?, t(0, 0, 0, 0)?) - &m(t(1, 1, 0, 0)?, t(0, 0, 0, 1)?))
        + &m(t(1, 0, 0, 1)?, t(0, 1, 0, 0)?);
    let eq0 = &(&(&m(t(1, 1, -1, 0)?, t(-1, -1, 1, 0)?) - &m(t(1, 0, -1, 0)?, t(-1, 0, 1, 0)?))
        + &m(t(0, 0, 1, 0)?, t(0, 0, -1, 0)?))
        - &m(t(0, 0, 0, 0)?, t(0, 0, 0, 0)?);
    let eq11 = &(&(&m(t(0, 0, 0, 1)?, t(0, 0, 0, -1)?) - &m(t(0, 1, 0, -1)?, t(0, -1, 0, 1)?))
        - &m(t(-1, 0, 0, -1)?, t(1, 0, 0, 1)?))
        - &m(t(0, 0, 0, 0)?, t(0, 0, 0, 0)?);
    Ok(vec![("[2]".into(), eq2), ("[1]".into(), eq1), ("[0]".into(), eq0), ("[1,1]".into(), eq11)])
}

/// Every (k', l', α', β') the four equations and the component equations touch at (k, l, α, β).
pub fn equation_support(k: i64, l: i64, alpha: i64, beta: i64) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for dk in -1..=2 {
        for dl in -1..=2 {
            for da in -1..=1 {
                for db in -1..=1 {
                    out.push((k + dk, l + dl, alpha + da, beta + db));
                }
            }
        }
    }
    out
}

/// Cleared numerators of the six matrix-component equations from the two factorizations
/// of each translation matrix, and the quartic and reduced polynomial forms of the
/// [0,0] and [1,1] components.
pub fn component_equation_residuals(
    k: i64,
    l: i64,
    alpha: i64,
    beta: i64,
    table: &TauTable3,
) -> Result<Vec<(String, Poly)>> {
    let (a, b) = (alpha, beta);
    let mut atoms = AtomTable::new();
    let tp = |dk: i64, dl: i64, da: i64, db: i64| table.tau(k + dk, l + dl, a + da, b + db);
    // τ at (k+dk, l+dl, α+da, β) and at (k+dk, l+dl, α, β+db)
    type Key = (i64, i64, i64);
    let ta = |x: Key| tp(x.0, x.1, x.2, 0);
    let tb = |x: Key| tp(x.0, x.1, 0, x.2);
    let mut frac = |num: &[Poly], den: &[Poly]| {
        atoms.ratio(&num.iter().collect::<Vec<_>>(), &den.iter().collect::<Vec<_>>())
    };

    let c00 = -frac(&[ta((2, 1, -1))?, ta((0, -1, 0))?], &[ta((1, 0, -1))?, ta((1, 0, 0))?])?
        + frac(&[ta((1, 1, 0))?, ta((-1, -1, 1))?], &[ta((0, 0, 1))?, ta((0, 0, 0))?])?
        - frac(&[ta((1, 0, 0))?, ta((-1, 0, 1))?], &[ta((0, 0, 1))?, ta((0, 0, 0))?])?
        + frac(&[ta((1, 0, 0))?, ta((0, 0, -1))?], &[ta((1, 0, -1))?, ta((0, 0, 0))?])?
        + frac(&[ta((2, 0, -1))?, ta((0, 0, 0))?], &[ta((1, 0, -1))?, ta((1, 0, 0))?])?
        - frac(&[ta((1, 0, 1))?, ta((0, 0, 0))?], &[ta((1, 0, 0))?, ta((0, 0, 1))?])?;
    let c02 = frac(&[ta((0, -1, 0))?], &[ta((1, 0, 0))?])? + frac(&[ta((-1, -1, 1))?], &[ta((0, 0, 1))?])?
        - frac(&[ta((0, -1, 1))?, ta((0, 0, 0))?], &[ta((1, 0, 0))?, ta((0, 0, 1))?])?;
    let c20 = frac(&[ta((2, 1, -1))?], &[ta((1, 0, -1))?])? + frac(&[ta((1, 1, 0))?], &[ta((0, 0, 0))?])?
        - frac(&[ta((1, 1, -1))?, ta((1, 0, 0))?], &[ta((1, 0, -1))?, ta((0, 0, 0))?])?;
    let c10 = frac(&[tb((1, 1, 1))?, tb((0, 0, 0))?], &[tb((0, 1, 0))?, tb((0, 0, 1))?])?
        - frac(&[tb((1, 1, 0))?], &[tb((0, 1, 0))?])?
        + frac(&[tb((1, 0, 1))?], &[tb((0, 0, 1))?])?;
    let c01 = frac(&[tb((-1, 0, -1))?, tb((0, 1, 0))?], &[tb((0, 1, -1))?, tb((0, 0, 0))?])?
        + frac(&[tb((-1, 1, -1))?], &[tb((0, 1, -1))?])?
        - frac(&[tb((-1, 0, 0))?], &[tb((0, 0, 0))?])?;
    let c11 = frac(&[tb((1, 1, 0))?, tb((-1, 1, -1))?], &[tb((0, 1, -1))?, tb((0, 1, 0))?])?
        - frac(&[tb((1, 0, 1))?, tb((-1, 0, 0))?], &[tb((0, 0, 1))?, tb((0, 0, 0))?])?
        - frac(&[tb((0, 1, 0))?, tb((0, -1, 1))?], &[tb((0, 0, 1))?, tb((0, 0, 0))?])?
        + frac(&[tb((0, 1, 0))?, tb((0, 0, -1))?], &[tb((0, 1, -1))?, tb((0, 0, 0))?])?
        + frac(&[tb((0, 2, -1))?, tb((0, 0, 0))?], &[tb((0, 1, -1))?, tb((0, 1, 0))?])?
        - frac(&[tb((0, 1, 1))?, tb((0, 0, 0))?], &[tb((0, 1, 0))?, tb((0, 0, 1))?])?;

    let p = |x: &[Poly]| x.iter().fold(Poly::one(), |acc, y| &acc * y);
    let sq = |x: Poly| &x * &x;
    let quartic00 = &(&(&p(&[ta((1, 1, 0))?, ta((1, 0, -1))?, ta((1, 0, 0))?, ta((-1, -1, 1))?])
        - &p(&[ta((2, 1, -1))?, ta((0, -1, 0))?, ta((0, 0, 1))?, ta((0, 0, 0))?]))
        + &(&(&p(&[ta((2, 0, -1))?, ta((0, 0, 1))?]) - &p(&[ta((1, 0, 1))?, ta((1, 0, -1))?])) * &sq(ta((0, 0, 0))?)))
        - &(&(&p(&[ta((1, 0, -1))?, ta((-1, 0, 1))?]) - &p(&[ta((0, 0, 1))?, ta((0, 0, -1))?])) * &sq(ta((1, 0, 0))?));
    let reduced00 = &(&sq(ta((0, 0, 0))?)
        * &(&(&p(&[ta((2, 0, -1))?, ta((0, 0, 1))?]) - &p(&[ta((1, 0, 1))?, ta((1, 0, -1))?]))
            - &p(&[ta((2, 1, -1))?, ta((0, -1, 1))?])))
        - &(&sq(ta((1, 0, 0))?)
            * &(&(&p(&[ta((1, 0, -1))?, ta((-1, 0, 1))?]) - &p(&[ta((0, 0, 1))?, ta((0, 0, -1))?]))
                - &p(&[ta((1, 1, -1))?, ta((-1, -1, 1))?])));
    let quartic11 = &(&(&p(&[tb((1, 0, 1))?, tb((-1, 0, 0))?, tb((0, 1, -1))?, tb((0, 1, 0))?])
        - &p(&[tb((1, 1, 0))?, tb((-1, 1, -1))?, tb((0, 0, 1))?, tb((0, 0, 0))?]))
        + &(&(&p(&[tb((0, 1, 1))?, tb((0, 1, -1))?]) - &p(&[tb((0, 2, -1))?, tb((0, 0, 1))?])) * &sq(tb((0, 0, 0))?)))
        + &(&(&p(&[tb((0, 1, -1))?, tb((0, -1, 1))?]) - &p(&[tb((0, 0, 1))?, tb((0, 0, -1))?])) * &sq(tb((0, 1, 0))?));
    let reduced11 = &(&sq(tb((0, 0, 0))?)
        * &(&(&p(&[tb((0, 1, 1))?, tb((0, 1, -1))?]) - &p(&[tb((0, 2, -1))?, tb((0, 0, 1))?]))
            - &p(&[tb((-1, 1, -1))?, tb((1, 1, 1))?])))
        - &(&sq(tb((0, 1, 0))?)
            * &(&(&p(&[tb((0, 0, 1))?, tb((0, 0, -1))?]) - &p(&[tb((0, 1, -1))?, tb((0, -1, 1))?]))
                - &p(&[tb((-1, 0, -1))?, tb((1, 0, 1))?])));

    Ok(vec![
        ("[0,0]".into(), atoms.cleared_numerator(&c00)),
        ("[0,2]".into(), atoms.cleared_numerator(&c02)),
        ("[2,0]".into(), atoms.cleared_numerator(&c20)),
        ("[1,0]".into(), atoms.cleared_numerator(&c10)),
        ("[0,1]".into(), atoms.cleared_numerator(&c01)),
        ("[1,1]".into(), atoms.cleared_numerator(&c11)),
        ("[0,0] quartic".into(), quartic00),
        ("[0,0] reduced".into(), reduced00),
        ("[1,1] quartic".into(), quartic11),
        ("[1,1] reduced".into(), reduced11),
    ])
}

/// The polynomial numerators of [2,0] at (k, l, α) and of [0,2] at (k+1, l+1, α−1), each
/// over its natural two-tau denominator; they coincide identically.
pub fn component_shift_pair(k: i64, l: i64, alpha: i64, beta: i64, table: &TauTable3) -> Result<(Poly, Poly)> {
    let t = |kk: i64, ll: i64, a: i64| table.tau(kk, ll, a, beta);
    let m = |x: Poly, y: Poly| &x * &y;
    // [0,2] times τ_{k+1,l}^{(α)} τ_{k,l}^{(α+1)}, evaluated at the shifted point
    let n02 = |k: i64, l: i64, a: i64| -> Result<Poly> {
        Ok(&(&m(t(k, l - 1, a)?, t(k, l, a + 1)?) + &m(t(k - 1, l - 1, a + 1)?, t(k + 1, l, a)?))
            - &m(t(k, l - 1, a + 1)?, t(k, l, a)?))
    };
    // [2,0] times τ_{k+1,l}^{(α−1)} τ_{k,l}^{(α)}
    let n20 = &(&m(t(k + 2, l + 1, alpha - 1)?, t(k, l, alpha)?) + &m(t(k + 1, l + 1, alpha)?, t(k + 1, l, alpha - 1)?))
        - &m(t(k + 1, l + 1, alpha - 1)?, t(k + 1, l, alpha)?);
    Ok((n20, n02(k + 1, l + 1, alpha - 1)?))
}
