//! GL2 tau functions (Hankel determinants), the Q-system, connection matrices and the
//! tau-function formula for the negative Birkhoff factor.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::algebra::{det_fraction_free, Family, NegativeWitness, VarId, Window};
use crate::error::{Error, Result};
use crate::loopgroup::{birkhoff_solve_numeric, build_g, build_q, build_t, substitute_matrix, GroupSpec};
use crate::shifts::{shift_field_apply, ShiftSpec};
use crate::symbolic::{AtomTable, TauExpr};
use crate::{Matrix, Poly, RatFunc, Rational, Series};

/// τ_k^{(α)}: 0 for k < 0, 1 for k = 0, else det [c_{α+i+j}] with out-of-window c's zero.
pub fn tau2(k: i64, alpha: i64, window: Window) -> Poly {
    match k {
        k if k < 0 => Poly::zero(),
        0 => Poly::one(),
        _ => {
            let n = k as usize;
            let m: Vec<Vec<Poly>> = (0..n)
                .map(|i| (0..n).map(|j| Poly::var_in(Family::C, alpha + (i + j) as i64, window)).collect())
                .collect();
            det_fraction_free(&m).expect("square Hankel matrix")
        }
    }
}

/// Memoized τ_k^{(α)} over a fixed window (and any auxiliary windows asked for).
pub struct TauTable2 {
    window: Window,
    cache: Mutex<HashMap<(Window, i64, i64), Poly>>,
}

impl TauTable2 {
    pub fn new(window: Window) -> TauTable2 {
        TauTable2 { window, cache: Mutex::new(HashMap::new()) }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn tau(&self, k: i64, alpha: i64) -> Poly {
        self.tau_in(self.window, k, alpha)
    }

    pub fn tau_in(&self, window: Window, k: i64, alpha: i64) -> Poly {
        if let Some(p) = self.cache.lock().expect("tau cache").get(&(window, k, alpha)) {
            return p.clone();
        }
        let p = tau2(k, alpha, window);
        self.cache.lock().expect("tau cache").insert((window, k, alpha), p.clone());
        p
    }

    /// Rows (k, α, τ) for k in -1..=kmax, sorted by (k, α).
    pub fn rows(&self, kmax: i64, alphas: &[i64]) -> Vec<(i64, i64, Poly)> {
        let mut out = Vec::new();
        for k in -1..=kmax {
            for &a in alphas {
                out.push((k, a, self.tau(k, a)));
            }
        }
        out
    }
}

/// (τ_k^{(α)})² − τ_k^{(α−1)}τ_k^{(α+1)} + τ_{k+1}^{(α−1)}τ_{k−1}^{(α+1)}
pub fn qsystem_residual(k: i64, alpha: i64, t: &TauTable2) -> Poly {
    let a = t.tau(k, alpha);
    &(&(&a * &a) - &(&t.tau(k, alpha - 1) * &t.tau(k, alpha + 1)))
        + &(&t.tau(k + 1, alpha - 1) * &t.tau(k - 1, alpha + 1))
}

/// τ_k^{(α)}τ_{k−2}^{(α+2)} − τ_{k−1}^{(α+2)}τ_{k−1}^{(α)} + (τ_{k−1}^{(α+1)})²
pub fn desnanot_jacobi_residual(k: i64, alpha: i64, t: &TauTable2) -> Result<Poly> {
    if k < 2 {
        return Err(Error::IndexOutOfRange(format!("Desnanot-Jacobi needs k >= 2, got {k}")));
    }
    let m = t.tau(k - 1, alpha + 1);
    Ok(&(&(&t.tau(k, alpha) * &t.tau(k - 2, alpha + 2)) - &(&t.tau(k - 1, alpha + 2) * &t.tau(k - 1, alpha)))
        + &(&m * &m))
}

/// Left side minus right side of the quartic form of the Q-system recursion:
/// (τ_k)²(τ_{k+2}^{(α−1)}τ_k^{(α+1)} − τ_{k+1}^{(α−1)}τ_{k+1}^{(α+1)})
///   − (τ_{k+1})²(τ_{k+1}^{(α−1)}τ_{k−1}^{(α+1)} − τ_k^{(α−1)}τ_k^{(α+1)}).
pub fn quartic_residual(k: i64, alpha: i64, t: &TauTable2) -> Poly {
    let tk = t.tau(k, alpha);
    let tk1 = t.tau(k + 1, alpha);
    let left = &(&tk * &tk)
        * &(&(&t.tau(k + 2, alpha - 1) * &t.tau(k, alpha + 1)) - &(&t.tau(k + 1, alpha - 1) * &t.tau(k + 1, alpha + 1)));
    let right = &(&tk1 * &tk1)
        * &(&(&t.tau(k + 1, alpha - 1) * &t.tau(k - 1, alpha + 1)) - &(&t.tau(k, alpha - 1) * &t.tau(k, alpha + 1)));
    &left - &right
}

/// The ratios h_k, α_k, β_k and b_k = α_{k−1} + β_k.
#[derive(Clone, Debug, PartialEq)]
pub struct HQuantities {
    pub h: RatFunc,
    pub alpha: RatFunc,
    pub beta: RatFunc,
    pub b: RatFunc,
}

pub fn h_quantities(k: i64, alpha: i64, t: &TauTable2) -> Result<HQuantities> {
    let mut c = Connection2::new(t);
    let h = c.h(k, alpha)?;
    let al = c.alpha_q(k, alpha)?;
    let be = c.beta_q(k, alpha)?;
    let b = c.b(k, alpha)?;
    Ok(HQuantities {
        h: c.atoms.to_ratfunc(&h)?,
        alpha: c.atoms.to_ratfunc(&al)?,
        beta: c.atoms.to_ratfunc(&be)?,
        b: c.atoms.to_ratfunc(&b)?,
    })
}

fn z_minus(x: &TauExpr) -> Series<TauExpr> {
    Series::from_coeffs([(1, TauExpr::one()), (0, -x.clone())], None)
}

fn cst(x: TauExpr) -> Series<TauExpr> {
    Series::constant(x)
}

/// GL2 connection matrices over tau atoms.
pub struct Connection2<'a> {
    table: &'a TauTable2,
    pub atoms: AtomTable,
}

impl<'a> Connection2<'a> {
    pub fn new(table: &'a TauTable2) -> Connection2<'a> {
        Connection2 { table, atoms: AtomTable::new() }
    }

    fn ratio(&mut self, num: &[(i64, i64)], den: &[(i64, i64)]) -> Result<TauExpr> {
        let n: Vec<Poly> = num.iter().map(|(k, a)| self.table.tau(*k, *a)).collect();
        let d: Vec<Poly> = den.iter().map(|(k, a)| self.table.tau(*k, *a)).collect();
        self.atoms.ratio(&n.iter().collect::<Vec<_>>(), &d.iter().collect::<Vec<_>>())
    }

    pub fn tau(&mut self, k: i64, alpha: i64) -> TauExpr {
        let p = self.table.tau(k, alpha);
        self.atoms.intern(&p)
    }

    /// h_k = τ_{k+1}/τ_k
    pub fn h(&mut self, k: i64, a: i64) -> Result<TauExpr> {
        self.ratio(&[(k + 1, a)], &[(k, a)])
    }

    /// 1/h_k, which vanishes at k = −1.
    pub fn inv_h(&mut self, k: i64, a: i64) -> Result<TauExpr> {
        self.ratio(&[(k, a)], &[(k + 1, a)])
    }

    /// α_k = h_{k+1}^{(α)}/h_k^{(α+1)}, which vanishes at k = −1.
    pub fn alpha_q(&mut self, k: i64, a: i64) -> Result<TauExpr> {
        self.ratio(&[(k + 2, a), (k, a + 1)], &[(k + 1, a), (k + 1, a + 1)])
    }

    /// β_k = h_k^{(α+1)}/h_k^{(α)}
    pub fn beta_q(&mut self, k: i64, a: i64) -> Result<TauExpr> {
        self.ratio(&[(k + 1, a + 1), (k, a)], &[(k, a + 1), (k + 1, a)])
    }

    /// b_k = α_{k−1} + β_k
    pub fn b(&mut self, k: i64, a: i64) -> Result<TauExpr> {
        Ok(self.alpha_q(k - 1, a)? + self.beta_q(k, a)?)
    }

    pub fn u(&mut self, k: i64, a: i64) -> Result<Matrix<TauExpr>> {
        let b = self.b(k, a)?;
        let ih = self.inv_h(k, a)?;
        let h = self.h(k, a)?;
        Ok(Matrix::new(2, vec![z_minus(&b), cst(ih), cst(-h), Series::zero()]))
    }

    pub fn v(&mut self, k: i64, a: i64) -> Result<Matrix<TauExpr>> {
        let al = self.alpha_q(k - 1, a)?;
        let ih = self.inv_h(k - 1, a + 1)?;
        let h = self.h(k, a)?;
        Ok(Matrix::new(2, vec![z_minus(&al), cst(ih), cst(-h), Series::one()]))
    }

    /// W_k, defined for k ≥ 1.
    pub fn w(&mut self, k: i64, a: i64) -> Result<Matrix<TauExpr>> {
        if k < 1 {
            return Err(Error::IndexOutOfRange(format!("W_k needs k >= 1, got {k}")));
        }
        let ih = self.inv_h(k - 1, a)?;
        let h = self.h(k - 1, a + 1)?;
        let be = self.beta_q(k - 1, a)?;
        Ok(Matrix::new(2, vec![Series::one(), cst(-ih), cst(h), z_minus(&be)]))
    }

    pub fn to_ratfunc(&self, m: &Matrix<TauExpr>) -> Result<Matrix<RatFunc>> {
        m.try_map(|e| self.atoms.to_ratfunc(e))
    }

    /// Entrywise, coefficientwise polynomial numerators of a residual matrix.
    pub fn numerators(&self, m: &Matrix<TauExpr>) -> Vec<Poly> {
        let mut out = Vec::new();
        for s in m.entries() {
            for (_, c) in s.terms() {
                out.push(self.atoms.cleared_numerator(c));
            }
        }
        out
    }
}

/// The three connection matrices U_k, V_k, W_k (W only for k ≥ 1) as rational functions.
pub struct ConnectionMatrices2 {
    pub u: Matrix<RatFunc>,
    pub v: Matrix<RatFunc>,
    pub w: Option<Matrix<RatFunc>>,
}

pub fn connection_matrices(k: i64, alpha: i64, t: &TauTable2) -> Result<ConnectionMatrices2> {
    let mut c = Connection2::new(t);
    let u = c.u(k, alpha)?;
    let v = c.v(k, alpha)?;
    let w = if k >= 1 { Some(c.w(k, alpha)?) } else { None };
    Ok(ConnectionMatrices2 {
        u: c.to_ratfunc(&u)?,
        v: c.to_ratfunc(&v)?,
        w: w.map(|w| c.to_ratfunc(&w)).transpose()?,
    })
}

/// det U − 1, det V − z, det W − z as atom expressions (all zero when the identities hold).
pub fn determinant_defects(k: i64, alpha: i64, t: &TauTable2) -> Result<Vec<(String, Series<TauExpr>)>> {
    let mut c = Connection2::new(t);
    let z = Series::monomial(TauExpr::one(), 1);
    let mut out = vec![
        ("det U - 1".to_string(), c.u(k, alpha)?.det().sub_ref(&Series::one())),
        ("det V - z".to_string(), c.v(k, alpha)?.det().sub_ref(&z)),
    ];
    if k >= 1 {
        out.push(("det W - z".to_string(), c.w(k, alpha)?.det().sub_ref(&z)));
    }
    Ok(out)
}

/// Residual matrices of U_k = V_k (W_{k+1})^{-1} = (W_{k+1}^{(α−1)})^{-1} V_{k+1}^{(α−1)}:
/// the two factorizations against each other and the first against the closed form of U.
pub struct ZeroCurvature2 {
    pub factorizations: Matrix<TauExpr>,
    pub closed_form: Matrix<TauExpr>,
}

pub fn zero_curvature_atoms(c: &mut Connection2, k: i64, alpha: i64) -> Result<ZeroCurvature2> {
    let left = c.v(k, alpha)?.mul_ref(&c.w(k + 1, alpha)?.inverse()?);
    let right = c.w(k + 1, alpha - 1)?.inverse()?.mul_ref(&c.v(k + 1, alpha - 1)?);
    let u = c.u(k, alpha)?;
    Ok(ZeroCurvature2 { factorizations: left.sub_ref(&right), closed_form: left.sub_ref(&u) })
}

pub fn zero_curvature_residual(k: i64, alpha: i64, t: &TauTable2) -> Result<Matrix<RatFunc>> {
    let mut c = Connection2::new(t);
    let zc = zero_curvature_atoms(&mut c, k, alpha)?;
    c.to_ratfunc(&zc.factorizations)
}

/// Cleared numerator of α_{k−1}^{(α)} + β_k^{(α)} − α_k^{(α−1)} − β_k^{(α−1)}, the two
/// expressions for b_k read off from the two factorizations of U.
pub fn h_relation_residual(k: i64, alpha: i64, t: &TauTable2) -> Result<Poly> {
    let mut c = Connection2::new(t);
    let e = c.alpha_q(k - 1, alpha)? + c.beta_q(k, alpha)? - c.alpha_q(k, alpha - 1)? - c.beta_q(k, alpha - 1)?;
    Ok(c.atoms.cleared_numerator(&e))
}

/// Negative Birkhoff factor g_- = numer / τ_k from the tau-function formula.
#[derive(Clone, Debug)]
pub struct GMinus {
    pub numer: Matrix,
    pub tau: Poly,
}

impl GMinus {
    pub fn to_ratfunc(&self) -> Result<Matrix<RatFunc>> {
        self.numer.try_map(|p| Ok(RatFunc::new(p.clone(), self.tau.clone())?))
    }

    pub fn substitute(&self, assignment: &BTreeMap<VarId, Rational>) -> Result<Matrix<Rational>> {
        let t = self.tau.substitute(assignment)?;
        if t.is_zero() {
            return Err(Error::TauVanishes);
        }
        let inv = t.recip();
        Ok(substitute_matrix(&self.numer, assignment)?.map(|c| c * &inv))
    }
}

/// [[S⁺τ_k, S⁺τ_{k−1}/z],[S⁻τ_{k+1}/z, S⁻τ_k]]/τ_k, exact through z^{-n}. The tau functions
/// fed to the fields live on the window extended n+1 steps down; the fields see only the window.
pub fn g_minus_from_tau(k: i64, alpha: i64, t: &TauTable2, n: i64) -> Result<GMinus> {
    if k < 0 {
        return Err(Error::IndexOutOfRange(format!("Birkhoff factor needs k >= 0, got {k}")));
    }
    let tau = t.tau(k, alpha);
    if tau.is_zero() {
        return Err(Error::TauVanishes);
    }
    let w = t.window();
    let ext = w.extend_below(n + 1);
    let plus = ShiftSpec::plus(Family::C, n, w);
    let minus = ShiftSpec::minus(Family::C, n, w);
    let te = |kk| t.tau_in(ext, kk, alpha);
    let numer = Matrix::new(
        2,
        vec![
            shift_field_apply(&te(k), &plus),
            shift_field_apply(&te(k - 1), &plus).shift(-1),
            shift_field_apply(&te(k + 1), &minus).shift(-1),
            shift_field_apply(&te(k), &minus),
        ],
    )
    .truncate(n);
    Ok(GMinus { numer, tau })
}

fn max_power(m: &Matrix) -> i64 {
    m.entries().iter().filter_map(|s| s.max_exp()).max().unwrap_or(0).max(0)
}

/// Checks that adj(numer)·g^{[k](α)} has no z^{-1}..z^{-n} terms (τ·g_-^{-1} = adj(numer) for 2×2).
pub fn verify_birkhoff2(k: i64, alpha: i64, t: &TauTable2, n: i64) -> Result<std::result::Result<(), NegativeWitness<Poly>>> {
    let g = build_g(&GroupSpec::gl2(t.window(), alpha, k))?;
    let gm = g_minus_from_tau(k, alpha, t, n + max_power(&g))?;
    let p = gm.numer.adjugate().mul_ref(&g);
    debug_assert!(p.trunc().is_none_or(|tr| tr >= n));
    Ok(p.negative_part_vanishes(n))
}

/// First (row, col, power) where the tau-formula g_- and the numeric solver disagree.
pub fn birkhoff2_numeric_mismatch(
    k: i64,
    alpha: i64,
    t: &TauTable2,
    n: i64,
    assignment: &BTreeMap<VarId, Rational>,
) -> Result<Option<(usize, usize, i64)>> {
    let g = build_g(&GroupSpec::gl2(t.window(), alpha, k))?;
    let numeric = birkhoff_solve_numeric(&substitute_matrix(&g, assignment)?, n)?;
    let formula = g_minus_from_tau(k, alpha, t, n)?.substitute(assignment)?;
    Ok(first_mismatch(&formula, &numeric.g_minus, n))
}

pub(crate) fn first_mismatch(a: &Matrix<Rational>, b: &Matrix<Rational>, n: i64) -> Option<(usize, usize, i64)> {
    let size = a.size();
    for p in (-n..=max_exp_r(a).max(max_exp_r(b))).rev() {
        for i in 0..size {
            for j in 0..size {
                if a.get(i, j).coeff(p) != b.get(i, j).coeff(p) {
                    return Some((i, j, p));
                }
            }
        }
    }
    None
}

fn max_exp_r(m: &Matrix<Rational>) -> i64 {
    m.entries().iter().filter_map(|s| s.max_exp()).max().unwrap_or(0)
}

/// Connection matrices from their definitions in terms of g_-: returns τ_kτ_{k'}·Γ for
/// Γ = (g_-^{[k](α)})^{-1} X g_-^{[k'](α')} with (X, k', α') = (T, k+1, α), (Q_0^{-1}, k, α+1),
/// (Q_1^{-1}, k−1, α+1).
pub fn connection_from_g_minus(kind: char, k: i64, alpha: i64, t: &TauTable2, n: i64) -> Result<(Matrix, Poly)> {
    let (x, k2, a2) = match kind {
        'U' => (build_t(2, 1)?, k + 1, alpha),
        'V' => (build_q(2, 0)?.inverse()?, k, alpha + 1),
        'W' => (build_q(2, 1)?.inverse()?, k - 1, alpha + 1),
        _ => return Err(Error::IndexOutOfRange(format!("connection kind {kind}"))),
    };
    let left = g_minus_from_tau(k, alpha, t, n + 2)?;
    let right = g_minus_from_tau(k2, a2, t, n + 2)?;
    let p = left.numer.adjugate().mul_ref(&x).mul_ref(&right.numer).truncate(n);
    Ok((p, &left.tau * &right.tau))
}

/// Compares the closed-form connection matrix with its g_- definition; returns the first
/// offending (row, col, power), checking all powers from z^{-n} up.
pub fn connection_definition_mismatch(kind: char, k: i64, alpha: i64, t: &TauTable2, n: i64) -> Result<Option<(usize, usize, i64)>> {
    let (p, scale) = connection_from_g_minus(kind, k, alpha, t, n)?;
    let mut c = Connection2::new(t);
    let closed = match kind {
        'U' => c.u(k, alpha)?,
        'V' => c.v(k, alpha)?,
        _ => c.w(k, alpha)?,
    };
    let closed = c.to_ratfunc(&closed)?;
    let top = max_power(&p).max(1);
    for pw in (-n..=top).rev() {
        for i in 0..2 {
            for j in 0..2 {
                let r = closed.get(i, j).known_coeff(pw).unwrap_or_else(RatFunc::zero);
                let lhs = &r.num().clone() * &scale;
                let rhs = &p.get(i, j).coeff(pw) * r.den();
                if lhs != rhs {
                    return Ok(Some((i, j, pw)));
                }
            }
        }
    }
    Ok(None)
}

/// Baker function Ψ^{[k](α)} = T^k Q_0^{−α} g_-^{[k](α)} after substitution.
pub fn baker2(k: i64, alpha: i64, t: &TauTable2, n: i64, assignment: &BTreeMap<VarId, Rational>) -> Result<Matrix<Rational>> {
    let gm = g_minus_from_tau(k, alpha, t, n)?.substitute(assignment)?;
    Ok(Matrix::<Rational>::diag_powers(&[k + alpha, -k]).mul_ref(&gm))
}

/// Ψ^{[k+1](α)} − Ψ^{[k](α)}U_k, Ψ^{[k](α+1)} − Ψ^{[k](α)}V_k and (k ≥ 1)
/// Ψ^{[k−1](α+1)} − Ψ^{[k](α)}W_k, numerically.
pub fn baker_relations_residual(
    k: i64,
    alpha: i64,
    t: &TauTable2,
    n: i64,
    assignment: &BTreeMap<VarId, Rational>,
) -> Result<Vec<(char, Matrix<Rational>)>> {
    let mut c = Connection2::new(t);
    let psi = baker2(k, alpha, t, n, assignment)?;
    let eval = |c: &Connection2, m: &Matrix<TauExpr>| m.try_map(|e| c.atoms.evaluate(e, assignment));
    let mut out = Vec::new();
    let u = c.u(k, alpha)?;
    out.push(('U', baker2(k + 1, alpha, t, n, assignment)?.sub_ref(&psi.mul_ref(&eval(&c, &u)?))));
    let v = c.v(k, alpha)?;
    out.push(('V', baker2(k, alpha + 1, t, n, assignment)?.sub_ref(&psi.mul_ref(&eval(&c, &v)?))));
    if k >= 1 {
        let w = c.w(k, alpha)?;
        out.push(('W', baker2(k - 1, alpha + 1, t, n, assignment)?.sub_ref(&psi.mul_ref(&eval(&c, &w)?))));
    }
    Ok(out)
}
