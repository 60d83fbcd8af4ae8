//! Loop-group elements as matrices of Laurent series, and a numeric Birkhoff solver.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{Family, LaurentSeries, LoopMatrix, VarId, Window};
use crate::error::{Error, Result};
use crate::{Matrix, Poly, Rational, Series};

/// π(Q_a): identity with z^{-1} in slot (a, a).
pub fn build_q(n: usize, a: usize) -> Result<Matrix> {
    check_size(n)?;
    if a >= n {
        return Err(Error::IndexOutOfRange(format!("component {a} for n = {n}")));
    }
    let mut e = vec![0; n];
    e[a] = -1;
    Ok(Matrix::diag_powers(&e))
}

/// π(T) for n = 2 (s = 1), π(T_1), π(T_2) for n = 3.
pub fn build_t(n: usize, s: usize) -> Result<Matrix> {
    check_size(n)?;
    if s == 0 || s >= n {
        return Err(Error::IndexOutOfRange(format!("translation T_{s} for n = {n}")));
    }
    let mut e = vec![0; n];
    e[s - 1] = 1;
    e[s] = -1;
    Ok(Matrix::diag_powers(&e))
}

/// Exponents of diag(T^k) (n = 2) or diag(T_1^k T_2^l) (n = 3).
pub fn translation_exponents(n: usize, k: i64, l: i64) -> Vec<i64> {
    match n {
        2 => vec![k, -k],
        _ => vec![k, l - k, -l],
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("matrix size {n}")))
    }
}

/// X^{(γ)}(z) = Σ x_{i+γ} z^{-i-1} over the window.
pub fn x_series(family: Family, gamma: i64, window: Window) -> Series {
    Series::from_coeffs(window.indices().map(|j| (gamma - j - 1, Poly::var(VarId::new(family, j)))), None)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    Symbolic,
    Numeric(BTreeMap<VarId, Rational>),
}

/// A shifted, translated group element g^{[k](α)} or g^{[k,l](α,β)}.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub n: usize,
    pub window: Window,
    pub alpha: i64,
    pub beta: i64,
    pub k: i64,
    pub l: i64,
    pub coefficients: Coefficients,
}

impl GroupSpec {
    pub fn gl2(window: Window, alpha: i64, k: i64) -> GroupSpec {
        GroupSpec { n: 2, window, alpha, beta: 0, k, l: 0, coefficients: Coefficients::Symbolic }
    }

    pub fn gl3(window: Window, alpha: i64, beta: i64, k: i64, l: i64) -> GroupSpec {
        GroupSpec { n: 3, window, alpha, beta, k, l, coefficients: Coefficients::Symbolic }
    }

    pub fn numeric(mut self, assignment: BTreeMap<VarId, Rational>) -> GroupSpec {
        self.coefficients = Coefficients::Numeric(assignment);
        self
    }
}

/// The untranslated unitriangular element g^{(α)} or g^{(α,β)}.
pub fn build_unitriangular(n: usize, window: Window, alpha: i64, beta: i64) -> Result<Matrix> {
    check_size(n)?;
    let one = Series::one;
    let zero = Series::zero;
    let entries = match n {
        2 => vec![one(), zero(), x_series(Family::C, alpha, window), one()],
        _ => vec![
            one(),
            zero(),
            zero(),
            x_series(Family::C, alpha - beta, window),
            one(),
            zero(),
            x_series(Family::D, alpha, window),
            x_series(Family::E, beta, window),
            one(),
        ],
    };
    Ok(Matrix::new(n, entries))
}

/// π(g^{[k](α)}) = T^{-k} g^{(α)}, or T_2^{-l} T_1^{-k} g^{(α,β)}.
pub fn build_g(spec: &GroupSpec) -> Result<Matrix> {
    let g = build_unitriangular(spec.n, spec.window, spec.alpha, spec.beta)?;
    let t: Vec<i64> = translation_exponents(spec.n, spec.k, spec.l).iter().map(|e| -e).collect();
    let g = Matrix::diag_powers(&t).mul_ref(&g);
    match &spec.coefficients {
        Coefficients::Symbolic => Ok(g),
        Coefficients::Numeric(a) => Ok(substitute_matrix(&g, a)?.map(|r| Poly::constant(r.clone()))),
    }
}

/// Residuals Q_a^{-1} g^{(.+1)} - g^{(.)} Q_a^{-1} for the shift carried by component a.
pub fn intertwining_residual(n: usize, a: usize, window: Window, alpha: i64, beta: i64) -> Result<Matrix> {
    let (da, db) = match (n, a) {
        (2, 0) | (3, 0) => (1, 0),
        (3, 1) => (0, 1),
        _ => return Err(Error::IndexOutOfRange(format!("intertwiner Q_{a} for n = {n}"))),
    };
    let qinv = build_q(n, a)?.inverse()?;
    let lhs = qinv.mul_ref(&build_unitriangular(n, window, alpha + da, beta + db)?);
    let rhs = build_unitriangular(n, window, alpha, beta)?.mul_ref(&qinv);
    Ok(lhs.sub_ref(&rhs))
}

pub fn substitute_matrix(m: &Matrix, assignment: &BTreeMap<VarId, Rational>) -> Result<Matrix<Rational>> {
    Ok(m.try_map(|p| p.substitute(assignment))?)
}

/// Numeric g = g_- g_{0+} with g_- = 1 + O(z^{-1}).
#[derive(Clone, Debug)]
pub struct BirkhoffFactors {
    pub g_minus: Matrix<Rational>,
    pub g_pos: Matrix<Rational>,
}

/// Solves for X = g_-^{-1} = 1 + Σ_{m≤K} X_m z^{-m} from the requirement that X M has no
/// negative powers at all, growing K until the overdetermined system becomes consistent.
/// A rank-deficient system means no factorization exists (τ = 0 at this point).
pub fn birkhoff_solve_numeric(m: &Matrix<Rational>, n_trunc: i64) -> Result<BirkhoffFactors> {
    if m.trunc().is_some() {
        return Err(Error::Config("numeric Birkhoff solve needs an exact Laurent polynomial matrix".into()));
    }
    let span = m.entries().iter().filter_map(|s| Some(s.max_exp()? - s.min_exp()?)).max().unwrap_or(0);
    let mut k = (span + 1).max(1) as usize;
    let cap = 8 * k + 32;
    while k <= cap {
        if let Some(x) = solve_inverse_minus(m, k)? {
            let g_pos = x.mul_ref(m);
            let g_minus = x.inverse()?;
            return Ok(BirkhoffFactors { g_minus: g_minus.truncate(n_trunc), g_pos });
        }
        k *= 2;
    }
    Err(Error::TauVanishes)
}

fn solve_inverse_minus(m: &Matrix<Rational>, k: usize) -> Result<Option<Matrix<Rational>>> {
    let n = m.size();
    let low = m.entries().iter().filter_map(|s| s.min_exp()).min().unwrap_or(0).min(0);
    let eqs = k + (-low) as usize;
    let unknowns = n * k;
    // a[(j, col)][(mm, c)] = M[c][col]_{mm - j}
    let mut a = vec![vec![Rational::zero(); unknowns]; n * eqs];
    let mut rhs = vec![vec![Rational::zero(); n]; n * eqs];
    for j in 1..=eqs {
        for col in 0..n {
            let row = (j - 1) * n + col;
            for mm in 1..=k {
                for c in 0..n {
                    a[row][(mm - 1) * n + c] = m.get(c, col).coeff(mm as i64 - j as i64);
                }
            }
            for r in 0..n {
                rhs[row][r] = -m.get(r, col).coeff(-(j as i64));
            }
        }
    }
    let sol = match solve_linear(a, rhs) {
        LinearSolution::Unique(s) => s,
        LinearSolution::Inconsistent => return Ok(None),
        LinearSolution::RankDeficient => return Err(Error::TauVanishes),
    };
    Ok(Some(LoopMatrix::from_fn(n, |r, c| {
        let mut coeffs = vec![(0i64, if r == c { Rational::one() } else { Rational::zero() })];
        for mm in 1..=k {
            coeffs.push((-(mm as i64), sol[(mm - 1) * n + c][r].clone()));
        }
        LaurentSeries::from_coeffs(coeffs, None)
    })))
}

#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    Unique(Vec<Vec<Rational>>),
    Inconsistent,
    RankDeficient,
}

/// Gauss-Jordan elimination of a (possibly overdetermined) system with several right-hand sides.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Vec<Rational>>) -> LinearSolution {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank_ok = true;
    let mut prow_at = 0;
    for col in 0..cols {
        let Some(piv) = (prow_at..rows).find(|&r| !a[r][col].is_zero()) else {
            rank_ok = false;
            continue;
        };
        a.swap(prow_at, piv);
        b.swap(prow_at, piv);
        let inv = a[prow_at][col].recip();
        for v in a[prow_at].iter_mut() {
            *v *= &inv;
        }
        for v in b[prow_at].iter_mut() {
            *v *= &inv;
        }
        let prow = a[prow_at].clone();
        let pb = b[prow_at].clone();
        for r in 0..rows {
            if r == prow_at || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for (v, p) in a[r].iter_mut().zip(&prow).skip(col) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            for (v, p) in b[r].iter_mut().zip(&pb) {
                *v -= &f * p;
            }
        }
        prow_at += 1;
    }
    if b[prow_at..].iter().any(|row| row.iter().any(|v| !v.is_zero())) {
        return LinearSolution::Inconsistent;
    }
    if !rank_ok {
        return LinearSolution::RankDeficient;
    }
    b.truncate(cols);
    LinearSolution::Unique(b)
}

/// Random nonzero small rationals for every window variable of the given families.
pub fn random_assignment<R: rand::Rng>(rng: &mut R, families: &[Family], window: Window) -> BTreeMap<VarId, Rational> {
    let mut out = BTreeMap::new();
    for &f in families {
        for i in window.indices() {
            let num = rng.gen_range(1i64..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let den = rng.gen_range(1i64..=4);
            out.insert(VarId::new(f, i), crate::qq(num, den));
        }
    }
    out
}
