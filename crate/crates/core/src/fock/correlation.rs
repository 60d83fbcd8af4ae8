//! Correlation functions of fermion fields by mode expansion, with their closed forms.

use num_traits::One;

use super::laurent::{expand_in_box, Factor, LaurentPoly};
use super::state::{prune_far, FockSpace, FockVector, Sign, WedgeState};
use crate::error::{Error, Result};

/// The field ψ^±_comp(z_var).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    pub comp: usize,
    pub sign: Sign,
    pub var: usize,
}

impl Field {
    pub fn plus(comp: usize, var: usize) -> Field {
        Field { comp, sign: Sign::Plus, var }
    }

    pub fn minus(comp: usize, var: usize) -> Field {
        Field { comp, sign: Sign::Minus, var }
    }
}

/// ⟨target, F_1 ⋯ F_r v₀⟩ with ψ^±(z) = Σ_k ψ^±_{(k)} z^{-k-1}. Each field's variable is
/// distinct, so the result is exact for every monomial whose exponents lie in
/// [-order-1, order]; modes outside that range are never generated.
pub fn correlator(space: &FockSpace, target: &FockVector<LaurentPoly>, fields: &[Field], order: i32) -> Result<LaurentPoly> {
    let mut vars: Vec<usize> = fields.iter().map(|f| f.var).collect();
    vars.sort_unstable();
    if vars.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Config("each field needs its own variable".into()));
    }
    let targets: Vec<WedgeState> = target.states().cloned().collect();
    let mut v: FockVector<LaurentPoly> = FockVector::vacuum();
    for (idx, f) in fields.iter().enumerate().rev() {
        let mut next = FockVector::zero();
        for level in (-order - 1)..=order {
            let (k, e) = match f.sign {
                Sign::Plus => (level as i64, -level - 1),
                Sign::Minus => (-(level as i64) - 1, level),
            };
            let mut ex = vec![0i32; f.var + 1];
            ex[f.var] = e;
            for (st, c) in space.psi(f.comp, f.sign, k, &v).terms() {
                next.add_term(st.clone(), c.shift(&ex));
            }
        }
        prune_far(&mut next, &targets, idx);
        space.check_cap(&next)?;
        v = next;
    }
    Ok(target.pair(&v))
}

fn one_component() -> FockSpace {
    FockSpace::new(1).expect("one component space")
}

/// Π_{i<j} (z_{vars[i]} - z_{vars[j]}).
pub fn ordered_differences(vars: &[usize]) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for (i, &a) in vars.iter().enumerate() {
        for &b in &vars[i + 1..] {
            acc = &acc * &LaurentPoly::difference(a, b);
        }
    }
    acc
}

/// det V^{(k)} = Π_{k≥α>β≥1} (z_α - z_β), with z_i stored as variable i-1.
pub fn vandermonde(k: usize) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for a in 0..k {
        for b in 0..a {
            acc = &acc * &LaurentPoly::difference(a, b);
        }
    }
    acc
}

/// ⟨Q^{±k} v₀, ψ^±(z_k) ⋯ ψ^±(z_1) v₀⟩ on the one-component space; z_i is variable i-1.
/// Only finitely many modes contribute, so the result is the full Laurent polynomial.
pub fn correlation_pp(k: usize, sign: Sign) -> Result<LaurentPoly> {
    let space = one_component();
    let charge = if sign == Sign::Plus { k as i64 } else { -(k as i64) };
    let target = space.q_pow(0, charge, &FockVector::vacuum());
    let fields: Vec<Field> = (0..k).rev().map(|v| Field { comp: 0, sign, var: v }).collect();
    correlator(&space, &target, &fields, k as i32)
}

/// Both sides of ⟨Q^{m-n} v₀, ψ⁺(w_1)⋯ψ⁺(w_m) ψ⁻(y_1)⋯ψ⁻(y_n) v₀⟩ =
/// Π_{i<j}(w_i-w_j) Π_{i<j}(y_i-y_j) / Π_{i,j}(w_i-y_j), on the box of exponents
/// [-order-1, order]. Variables: w_i is i-1, y_j is m+j-1.
pub fn correlation_mn(m: usize, n: usize, order: i32) -> Result<(LaurentPoly, LaurentPoly)> {
    let space = one_component();
    let w: Vec<usize> = (0..m).collect();
    let y: Vec<usize> = (m..m + n).collect();
    let target = space.q_pow(0, m as i64 - n as i64, &FockVector::vacuum());
    let fields: Vec<Field> = w.iter().map(|&v| Field::plus(0, v)).chain(y.iter().map(|&v| Field::minus(0, v))).collect();
    let lhs = correlator(&space, &target, &fields, order)?;
    let mut factors = vec![Factor::Poly(ordered_differences(&w)), Factor::Poly(ordered_differences(&y))];
    for &a in &w {
        for &b in &y {
            factors.push(Factor::Cauchy(a, b));
        }
    }
    let rhs = expand_in_box(&factors, m + n, -order - 1, order)?;
    Ok((lhs, rhs))
}

/// Both sides of ⟨Q^{m-n-1} v₀, ψ⁻(z) ψ⁺(w_1)⋯ψ⁺(w_m) ψ⁻(y_1)⋯ψ⁻(y_n) v₀⟩ =
/// Π_{i≤n}(z-y_i) Π_{i<j}(w_i-w_j) Π_{i<j}(y_i-y_j) / (Π_{i≤m}(z-w_i) Π_{i,j}(w_i-y_j)),
/// on the box [-order-1, order]. Variables: z is 0, w_i is i, y_j is m+j.
pub fn correlation_extra(m: usize, n: usize, order: i32) -> Result<(LaurentPoly, LaurentPoly)> {
    let space = one_component();
    let w: Vec<usize> = (1..=m).collect();
    let y: Vec<usize> = (m + 1..=m + n).collect();
    let target = space.q_pow(0, m as i64 - n as i64 - 1, &FockVector::vacuum());
    let fields: Vec<Field> = std::iter::once(Field::minus(0, 0))
        .chain(w.iter().map(|&v| Field::plus(0, v)))
        .chain(y.iter().map(|&v| Field::minus(0, v)))
        .collect();
    let lhs = correlator(&space, &target, &fields, order)?;
    let mut factors = vec![Factor::Poly(ordered_differences(&w)), Factor::Poly(ordered_differences(&y))];
    for &b in &y {
        factors.push(Factor::Poly(LaurentPoly::difference(0, b)));
    }
    for &a in &w {
        factors.push(Factor::Cauchy(0, a));
    }
    for &a in &w {
        for &b in &y {
            factors.push(Factor::Cauchy(a, b));
        }
    }
    let rhs = expand_in_box(&factors, 1 + m + n, -order - 1, order)?;
    Ok((lhs, rhs))
}

/// Matrix element ⟨Q_{n-1}^{e_{n-1}}⋯Q_0^{e_0} v₀, M_{n-1}⋯M_0 v₀⟩ on F^(n), where
/// `monomials[a]` lists the fields of M_a (component a) left to right, against the product of
/// one-component matrix elements ⟨Q^{e_a} v₀, M_a v₀⟩. Returns (full, factorized).
pub fn factorization_check(
    n: usize,
    monomials: &[Vec<(Sign, usize)>],
    exps: &[i64],
    order: i32,
) -> Result<(LaurentPoly, LaurentPoly)> {
    if monomials.len() != n || exps.len() != n {
        return Err(Error::Config(format!("factorization needs {n} monomials and exponents")));
    }
    let space = FockSpace::new(n)?;
    let target = space.q_monomial_state(exps)?;
    let fields: Vec<Field> = (0..n)
        .rev()
        .flat_map(|a| monomials[a].iter().map(move |&(sign, var)| Field { comp: a, sign, var }))
        .collect();
    let full = correlator(&space, &target, &fields, order)?;
    let one = one_component();
    let mut product = LaurentPoly::one();
    for a in 0..n {
        let t = one.q_pow(0, exps[a], &FockVector::vacuum());
        let f: Vec<Field> = monomials[a].iter().map(|&(sign, var)| Field { comp: 0, sign, var }).collect();
        product = &product * &correlator(&one, &t, &f, order)?;
    }
    Ok((full, product))
}

/// ⟨Q_a^e v₀, F(ψ_a) v₀⟩ on F^(n) against the same matrix element on F^(1).
pub fn reduction_check(n: usize, a: usize, fields: &[(Sign, usize)], e: i64, order: i32) -> Result<(LaurentPoly, LaurentPoly)> {
    let space = FockSpace::new(n)?;
    let mut exps = vec![0; n];
    *exps.get_mut(a).ok_or_else(|| Error::IndexOutOfRange(format!("component {a}")))? = e;
    let target = space.q_monomial_state(&exps)?;
    let f: Vec<Field> = fields.iter().map(|&(sign, var)| Field { comp: a, sign, var }).collect();
    let full = correlator(&space, &target, &f, order)?;
    let one = one_component();
    let t = one.q_pow(0, e, &FockVector::vacuum());
    let f1: Vec<Field> = fields.iter().map(|&(sign, var)| Field { comp: 0, sign, var }).collect();
    Ok((full, correlator(&one, &t, &f1, order)?))
}
