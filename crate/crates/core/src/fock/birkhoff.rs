//! The negative Birkhoff factor as fermionic matrix elements:
//! g_ab(z) = ⟨Q_b⁻¹ v₀, ψ⁻_a(z) ĝ v₀⟩ / ⟨v₀, ĝ v₀⟩.

use num_traits::Zero;

use crate::Ring;

use super::state::{FockSpace, FockVector, Sign};
use crate::error::{Error, Result};
use crate::tau_gl2::GMinus;
use crate::{Matrix, Poly, Series, Window};

impl FockSpace {
    /// T^{-k} v (n = 2) or T₂^{-l} T₁^{-k} v (n = 3), the translation part of the lifted group element.
    fn inverse_translation(&self, k: i64, l: i64, v: &FockVector) -> Result<FockVector> {
        match self.n() {
            2 => Ok(self.t_pow(1, -k, v)),
            3 => Ok(self.t_pow(2, -l, &self.t_pow(1, -k, v))),
            n => Err(Error::IndexOutOfRange(format!("Birkhoff factor for n = {n}"))),
        }
    }

    /// Degree of the inverse translation T^{-k} or T₂^{-l} T₁^{-k}.
    fn inverse_translation_degree(&self, k: i64, l: i64) -> Vec<i64> {
        match self.n() {
            2 => vec![k, -k],
            _ => vec![k, l - k, -l],
        }
    }

    /// Q_a anticommutes with ψ_b for b ≠ a, so it lifts diag(-1, …, z⁻¹, …, -1) rather than the
    /// unsigned translation. Up to a scalar, T₁^k T₂^l then lifts S·diag(z^k, z^{l-k}, z^{-l})
    /// with S = diag((-1)^l, 1, (-1)^k); for n = 2 the extra factor is a scalar.
    fn translation_sign(&self, k: i64, l: i64, a: usize) -> i64 {
        let odd = |m: i64| if m.rem_euclid(2) == 1 { -1 } else { 1 };
        match (self.n(), a) {
            (3, 0) => odd(l),
            (3, 2) => odd(k),
            _ => 1,
        }
    }

    /// g₋ of g^{[k](α)} (n = 2) or g^{[k,l](α,β)} (n = 3) through z^{-n}, every entry expanded
    /// from the fermion field ψ⁻_a(z) = Σ_j ψ⁻_{a,(j)} z^{-j-1}. The matrix elements give the factor
    /// of the lifted element's image S g S, so entry (a, b) is multiplied by S_a S_b.
    pub fn g_minus_via_fock(&self, k: i64, l: i64, alpha: i64, beta: i64, window: Window, n: i64) -> Result<GMinus> {
        let size = self.n();
        let tdeg = self.inverse_translation_degree(k, l);
        let zero_deg = vec![0; size];
        let g0 = self.group_vacuum_part(alpha, beta, &sub(&zero_deg, &tdeg), window)?;
        let tau = self.inverse_translation(k, l, &g0)?.coeff(&super::state::WedgeState::vacuum());
        if tau.is_zero() {
            return Err(Error::TauVanishes);
        }
        let mut entries = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                let mut deg = vec![0; size];
                deg[a] += 1;
                deg[b] -= 1;
                let x = self.group_vacuum_part(alpha, beta, &sub(&deg, &tdeg), window)?;
                let y = self.inverse_translation(k, l, &x)?;
                let target = self.q(b, true, &FockVector::vacuum());
                let sign = self.translation_sign(k, l, a) * self.translation_sign(k, l, b);
                let coeffs = (-1..n).map(|j| (-j - 1, target.pair(&self.psi(a, Sign::Minus, j, &y)).scale(&crate::q(sign))));
                entries.push(Series::from_coeffs(coeffs.collect::<Vec<_>>(), Some(n)));
            }
        }
        Ok(GMinus { numer: Matrix::new(size, entries), tau })
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// First (row, col, power) in z^{-n}..z^{max} where a.numer/a.tau and b.numer/b.tau differ,
/// compared after cross-multiplying by the tau functions.
pub fn g_minus_mismatch(a: &GMinus, b: &GMinus, n: i64) -> Option<(usize, usize, i64)> {
    let size = a.numer.size();
    if b.numer.size() != size {
        return Some((size, size, 0));
    }
    let top = |m: &Matrix| m.entries().iter().filter_map(|s| s.max_exp()).max().unwrap_or(0);
    for p in (-n..=top(&a.numer).max(top(&b.numer))).rev() {
        for i in 0..size {
            for j in 0..size {
                let lhs: Poly = a.numer.get(i, j).coeff(p).mul_ref(&b.tau);
                let rhs: Poly = b.numer.get(i, j).coeff(p).mul_ref(&a.tau);
                if lhs != rhs {
                    return Some((i, j, p));
                }
            }
        }
    }
    None
}
