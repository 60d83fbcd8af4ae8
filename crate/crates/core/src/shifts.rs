//! Index shifts S_x^a on the coordinate ring and the shift fields S_x^{+-}(z).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Family, Monomial, VarId, Window};
use crate::error::{Error, Result};
use crate::{Poly, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShiftSign {
    Plus,
    Minus,
}

/// One shift field S_x^{+-}(z) truncated below z^{-trunc}, acting on window indices only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShiftSpec {
    pub family: Family,
    pub sign: ShiftSign,
    pub trunc: i64,
    pub window: Window,
}

impl ShiftSpec {
    pub fn new(family: Family, sign: ShiftSign, trunc: i64, window: Window) -> ShiftSpec {
        assert!(trunc >= 0, "truncation must be nonnegative");
        ShiftSpec { family, sign, trunc, window }
    }

    pub fn plus(family: Family, trunc: i64, window: Window) -> ShiftSpec {
        ShiftSpec::new(family, ShiftSign::Plus, trunc, window)
    }

    pub fn minus(family: Family, trunc: i64, window: Window) -> ShiftSpec {
        ShiftSpec::new(family, ShiftSign::Minus, trunc, window)
    }

    /// Image of the generator x_k.
    fn generator_image(&self, k: i64) -> Series {
        let w = self.window;
        let x = |i: i64| Poly::var_in(self.family, i, w);
        match self.sign {
            ShiftSign::Plus => Series::from_coeffs([(0, x(k)), (-1, -x(k + 1))], Some(self.trunc)),
            ShiftSign::Minus => Series::from_coeffs((0..=self.trunc).map(|n| (-n, x(k + n))), Some(self.trunc)),
        }
    }
}

/// S_x^a: shifts every x-index by a; monomials free of x (constants included) map to 0.
pub fn shift_power(f: &Poly, family: Family, alpha: i64, window: Window) -> Poly {
    Poly::from_terms(f.terms().filter_map(|(m, c)| {
        if m.degree_in(family) == 0 {
            return None;
        }
        let mut pairs = Vec::with_capacity(m.factors().len());
        for &(v, e) in m.factors() {
            if v.family() == family {
                let s = v.shifted(alpha);
                if !window.contains(s.index()) {
                    return None;
                }
                pairs.push((s, e));
            } else {
                pairs.push((v, e));
            }
        }
        Some((Monomial::from_pairs(pairs), c.clone()))
    }))
}

/// Multiplicative extension of a single shift field.
pub fn shift_field_apply(f: &Poly, spec: &ShiftSpec) -> Series {
    apply_fields(f, std::slice::from_ref(spec))
}

/// Several shift fields on distinct families applied together.
pub fn compose_fields(f: &Poly, specs: &[ShiftSpec]) -> Result<Series> {
    for (i, a) in specs.iter().enumerate() {
        if specs[..i].iter().any(|b| b.family == a.family) {
            return Err(Error::DuplicateFamily(a.family.symbol()));
        }
    }
    Ok(apply_fields(f, specs))
}

fn apply_fields(f: &Poly, specs: &[ShiftSpec]) -> Series {
    let trunc = specs.iter().map(|s| s.trunc).min();
    let mut cache: HashMap<(VarId, u32), Series> = HashMap::new();
    let mut acc = Series::zero();
    let mut pieces: Vec<(i64, Poly)> = Vec::new();
    for (m, c) in f.terms() {
        let mut fixed: Vec<(VarId, u32)> = Vec::new();
        let mut image = Series::one();
        for &(v, e) in m.factors() {
            match specs.iter().find(|s| s.family == v.family()) {
                Some(spec) => {
                    let p = cache
                        .entry((v, e))
                        .or_insert_with(|| power(&spec.generator_image(v.index()), e))
                        .clone();
                    image = image.mul_ref(&p);
                }
                None => fixed.push((v, e)),
            }
            if image.is_zero() {
                break;
            }
        }
        if image.is_zero() {
            continue;
        }
        let rest = Monomial::from_pairs(fixed);
        for (e, p) in image.terms() {
            pieces.push((*e, p.mul_monomial(&rest, c)));
        }
    }
    if !pieces.is_empty() {
        acc = Series::from_coeffs(pieces, trunc);
    }
    match trunc {
        Some(n) => acc.truncate(n),
        None => acc,
    }
}

fn power(s: &Series, e: u32) -> Series {
    let mut acc = Series::one();
    for _ in 0..e {
        acc = acc.mul_ref(s);
    }
    acc
}

/// Coefficient extraction S^{+-}[n] f = [z^{-n}] S^{+-}(z) f.
pub fn partial_shift(f: &Poly, spec: &ShiftSpec, n: i64) -> Poly {
    let s = shift_field_apply(f, &ShiftSpec { trunc: spec.trunc.max(n), ..*spec });
    s.coeff(-n)
}

/// True when every variable of `f` of the given family lies in the window.
pub fn inside_window(f: &Poly, family: Family, window: Window) -> bool {
    f.variables().iter().all(|v| v.family() != family || window.contains(v.index()))
}
