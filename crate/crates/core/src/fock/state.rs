//! Semi-infinite wedge space: basis states, finite vectors, fermion modes, Q_a, E_ab z^m.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use smallvec::SmallVec;

use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::{Family, Poly, Window};

/// Wedging (+) or unwedging (-) fermion mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// A basis state, stored as the sorted semi-infinite wedge of the occupied slots, where the
/// vector e_a z^k sits in slot k·n + a and the vacuum fills exactly the slots ≥ 0. Only the
/// finitely many deviations from the vacuum are kept: occupied negative slots (particles) and
/// empty nonnegative slots (holes).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WedgeState {
    particles: SmallVec<[i32; 8]>,
    holes: SmallVec<[i32; 8]>,
}

impl WedgeState {
    pub fn vacuum() -> WedgeState {
        WedgeState::default()
    }

    pub fn is_vacuum(&self) -> bool {
        self.particles.is_empty() && self.holes.is_empty()
    }

    /// Particle and hole slots.
    pub fn slots(&self) -> (&[i32], &[i32]) {
        (&self.particles, &self.holes)
    }

    pub fn occupied(&self, s: i32) -> bool {
        if s < 0 {
            self.particles.binary_search(&s).is_ok()
        } else {
            self.holes.binary_search(&s).is_err()
        }
    }

    /// Occupied slots strictly below s; moving e_s to its place in the wedge passes these.
    fn occupied_below(&self, s: i32) -> usize {
        let p = self.particles.partition_point(|&x| x < s);
        if s < 0 {
            p
        } else {
            p + s as usize - self.holes.partition_point(|&x| x < s)
        }
    }

    /// e_s ∧ (this state) as ± a basis state, or None if slot s is occupied.
    pub fn wedge(&self, s: i32) -> Option<(i64, WedgeState)> {
        if self.occupied(s) {
            return None;
        }
        let sign = if self.occupied_below(s) % 2 == 0 { 1 } else { -1 };
        let mut out = self.clone();
        if s < 0 {
            let i = out.particles.partition_point(|&x| x < s);
            out.particles.insert(i, s);
        } else {
            let i = out.holes.binary_search(&s).ok()?;
            out.holes.remove(i);
        }
        Some((sign, out))
    }

    /// i(e_s) applied to this state, or None if slot s is empty.
    pub fn unwedge(&self, s: i32) -> Option<(i64, WedgeState)> {
        if !self.occupied(s) {
            return None;
        }
        let sign = if self.occupied_below(s) % 2 == 0 { 1 } else { -1 };
        let mut out = self.clone();
        if s < 0 {
            let i = out.particles.binary_search(&s).ok()?;
            out.particles.remove(i);
        } else {
            let i = out.holes.partition_point(|&x| x < s);
            out.holes.insert(i, s);
        }
        Some((sign, out))
    }

    /// Number of slots in which the two states differ.
    pub fn distance(&self, other: &WedgeState) -> usize {
        sym_diff(&self.particles, &other.particles) + sym_diff(&self.holes, &other.holes)
    }
}

fn sym_diff(a: &[i32], b: &[i32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                n += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                n += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    n + (a.len() - i) + (b.len() - j)
}

impl fmt::Debug for WedgeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}H{:?}", self.particles.as_slice(), self.holes.as_slice())
    }
}

/// Finite linear combination of basis states.
#[derive(Clone, PartialEq)]
pub struct FockVector<R: Ring = Poly> {
    terms: HashMap<WedgeState, R>,
}

impl<R: Ring> Default for FockVector<R> {
    fn default() -> Self {
        FockVector { terms: HashMap::new() }
    }
}

impl<R: Ring> FockVector<R> {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn vacuum() -> Self {
        FockVector::basis(WedgeState::vacuum())
    }

    pub fn basis(s: WedgeState) -> Self {
        let mut v = FockVector::zero();
        v.terms.insert(s, R::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WedgeState, &R)> {
        self.terms.iter()
    }

    pub fn states(&self) -> impl Iterator<Item = &WedgeState> {
        self.terms.keys()
    }

    pub fn coeff(&self, s: &WedgeState) -> R {
        self.terms.get(s).cloned().unwrap_or_else(R::zero)
    }

    pub fn add_term(&mut self, s: WedgeState, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&s) {
            Some(v) => {
                *v = v.add_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&s);
                }
            }
            None => {
                self.terms.insert(s, c);
            }
        }
    }

    pub fn add_signed(&mut self, s: WedgeState, c: &R, sign: i64) {
        self.add_term(s, if sign < 0 { -c.clone() } else { c.clone() });
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-R::one()))
    }

    pub fn scale(&self, r: &R) -> Self {
        let mut out = FockVector::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c.mul_ref(r));
        }
        out
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&R::from_i64(k))
    }

    /// The bilinear form making basis states orthonormal.
    pub fn pair(&self, other: &Self) -> R {
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc = R::zero();
        for (s, c) in &small.terms {
            if let Some(d) = big.terms.get(s) {
                acc = acc.add_ref(&c.mul_ref(d));
            }
        }
        acc
    }

    pub fn map_coeffs<R2: Ring, F: Fn(&R) -> R2>(&self, f: F) -> FockVector<R2> {
        let mut out = FockVector::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), f(c));
        }
        out
    }

    /// Keeps the states for which the predicate holds.
    pub fn retain<F: Fn(&WedgeState) -> bool>(&mut self, f: F) {
        self.terms.retain(|s, _| f(s));
    }
}

impl<R: Ring> fmt::Debug for FockVector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        f.debug_map().entries(v).finish()
    }
}

/// One elementary operation on basis states: wedge or unwedge e_a z^level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SlotOp {
    wedge: bool,
    comp: usize,
    level: i64,
}

/// The n-component Fock space F^(n) with an excitation cap per component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    n: usize,
    cap: usize,
}

pub const DEFAULT_EXCITATION_CAP: usize = 8;

impl FockSpace {
    pub fn new(n: usize) -> Result<FockSpace> {
        if n == 0 || n > 8 {
            return Err(Error::IndexOutOfRange(format!("number of components {n}")));
        }
        Ok(FockSpace { n, cap: DEFAULT_EXCITATION_CAP })
    }

    pub fn with_cap(mut self, cap: usize) -> FockSpace {
        self.cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slot(&self, a: usize, level: i64) -> i32 {
        (level * self.n as i64 + a as i64) as i32
    }

    pub fn comp_level(&self, s: i32) -> (usize, i64) {
        let n = self.n as i32;
        (s.rem_euclid(n) as usize, s.div_euclid(n) as i64)
    }

    /// Levels of the particles of component a, increasing.
    pub fn particles(&self, st: &WedgeState, a: usize) -> Vec<i64> {
        st.particles.iter().map(|&s| self.comp_level(s)).filter(|(c, _)| *c == a).map(|(_, l)| l).collect()
    }

    /// Levels of the holes of component a, increasing.
    pub fn holes(&self, st: &WedgeState, a: usize) -> Vec<i64> {
        st.holes.iter().map(|&s| self.comp_level(s)).filter(|(c, _)| *c == a).map(|(_, l)| l).collect()
    }

    /// Builds a state from per-component particle levels (< 0) and hole levels (≥ 0).
    pub fn state(&self, particles: &[Vec<i64>], holes: &[Vec<i64>]) -> Result<WedgeState> {
        let mut st = WedgeState::vacuum();
        for (a, ls) in particles.iter().enumerate() {
            for &l in ls {
                self.check_comp(a)?;
                if l >= 0 {
                    return Err(Error::IndexOutOfRange(format!("particle level {l} must be negative")));
                }
                st.particles.push(self.slot(a, l));
            }
        }
        for (a, ls) in holes.iter().enumerate() {
            for &l in ls {
                self.check_comp(a)?;
                if l < 0 {
                    return Err(Error::IndexOutOfRange(format!("hole level {l} must be nonnegative")));
                }
                st.holes.push(self.slot(a, l));
            }
        }
        st.particles.sort_unstable();
        st.holes.sort_unstable();
        if st.particles.windows(2).any(|w| w[0] == w[1]) || st.holes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("repeated level in a state".into()));
        }
        Ok(st)
    }

    fn check_comp(&self, a: usize) -> Result<()> {
        if a < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("component {a} for n = {}", self.n)))
        }
    }

    /// Charge of each component: particles minus holes.
    pub fn degree(&self, st: &WedgeState) -> Vec<i64> {
        let mut d = vec![0i64; self.n];
        for &s in &st.particles {
            d[self.comp_level(s).0] += 1;
        }
        for &s in &st.holes {
            d[self.comp_level(s).0] -= 1;
        }
        d
    }

    /// The common degree of all states of v, or None if v is zero or not homogeneous.
    pub fn homogeneous_degree<R: Ring>(&self, v: &FockVector<R>) -> Option<Vec<i64>> {
        let mut it = v.states().map(|s| self.degree(s));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Particles plus holes of each component.
    pub fn excitations(&self, st: &WedgeState) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for &s in st.particles.iter().chain(&st.holes) {
            d[self.comp_level(s).0] += 1;
        }
        d
    }

    pub fn check_cap<R: Ring>(&self, v: &FockVector<R>) -> Result<()> {
        for st in v.states() {
            if let Some((a, e)) = self.excitations(st).into_iter().enumerate().find(|(_, e)| *e > self.cap) {
                return Err(Error::BoundExceeded(format!(
                    "component {a} has {e} excitations, cap is {}",
                    self.cap
                )));
            }
        }
        Ok(())
    }

    fn apply_slot_op<R: Ring>(&self, op: SlotOp, v: &FockVector<R>) -> FockVector<R> {
        let s = self.slot(op.comp, op.level);
        let mut out = FockVector::zero();
        for (st, c) in v.terms() {
            let r = if op.wedge { st.wedge(s) } else { st.unwedge(s) };
            if let Some((sign, st2)) = r {
                out.add_signed(st2, c, sign);
            }
        }
        out
    }

    /// The mode ψ^±_{a,(k)}: ψ⁺ wedges e_a z^k, ψ⁻ unwedges e_a z^{-k-1}.
    pub fn psi<R: Ring>(&self, a: usize, sign: Sign, k: i64, v: &FockVector<R>) -> FockVector<R> {
        self.apply_slot_op(mode_op(a, sign, k), v)
    }

    /// The elementary wedge M v₀ for this state, with M ordered by component descending and
    /// mode index increasing, equals `elementary_sign(st)` times the stored basis state.
    pub fn elementary_sign(&self, st: &WedgeState) -> i64 {
        match self.apply_ops_to_state(&self.elementary_ops(st), WedgeState::vacuum()) {
            Some((sign, s)) if &s == st => sign,
            _ => unreachable!("elementary monomial does not rebuild its state"),
        }
    }

    /// Applies ops right to left to a single basis state.
    fn apply_ops_to_state(&self, ops: &[SlotOp], st: WedgeState) -> Option<(i64, WedgeState)> {
        let mut sign = 1;
        let mut cur = st;
        for op in ops.iter().rev() {
            let s = self.slot(op.comp, op.level);
            let (sg, next) = if op.wedge { cur.wedge(s)? } else { cur.unwedge(s)? };
            sign *= sg;
            cur = next;
        }
        Some((sign, cur))
    }

    fn elementary_ops(&self, st: &WedgeState) -> Vec<SlotOp> {
        let mut ops = Vec::new();
        for a in (0..self.n).rev() {
            // ψ⁺_{a,(k)} for particle levels k, increasing k
            for l in self.particles(st, a) {
                ops.push(SlotOp { wedge: true, comp: a, level: l });
            }
            // ψ⁻_{a,(k)} with k = -h-1 for hole levels h, increasing k
            for h in self.holes(st, a).into_iter().rev() {
                ops.push(SlotOp { wedge: false, comp: a, level: h });
            }
        }
        ops
    }

    /// Q_a^{±1} from its action on the vacuum and its conjugation of fermion modes:
    /// Q_a ψ^±_{a,(k)} Q_a⁻¹ = ψ^±_{a,(k∓1)} and Q_a ψ_b Q_a⁻¹ = -ψ_b for b ≠ a.
    pub fn q<R: Ring>(&self, a: usize, inverse: bool, v: &FockVector<R>) -> FockVector<R> {
        let e: i64 = if inverse { -1 } else { 1 };
        let base = if inverse {
            SlotOp { wedge: false, comp: a, level: 0 }
        } else {
            SlotOp { wedge: true, comp: a, level: -1 }
        };
        let mut out = FockVector::zero();
        for (st, c) in v.terms() {
            let ops = self.elementary_ops(st);
            let mut sign = self.elementary_sign(st);
            let mut moved: Vec<SlotOp> = Vec::with_capacity(ops.len() + 1);
            for op in ops {
                if op.comp == a {
                    moved.push(SlotOp { level: op.level - e, ..op });
                } else {
                    sign = -sign;
                    moved.push(op);
                }
            }
            moved.push(base);
            if let Some((sg, st2)) = self.apply_ops_to_state(&moved, WedgeState::vacuum()) {
                out.add_signed(st2, c, sign * sg);
            }
        }
        out
    }

    /// Q_a^k for any integer k.
    pub fn q_pow<R: Ring>(&self, a: usize, k: i64, v: &FockVector<R>) -> FockVector<R> {
        (0..k.abs()).fold(v.clone(), |acc, _| self.q(a, k < 0, &acc))
    }

    /// T_ab^m = (Q_a Q_b⁻¹)^m.
    pub fn t_ab_pow<R: Ring>(&self, a: usize, b: usize, m: i64, v: &FockVector<R>) -> FockVector<R> {
        let mut acc = v.clone();
        for _ in 0..m.abs() {
            acc = if m > 0 { self.q(a, false, &self.q(b, true, &acc)) } else { self.q(b, false, &self.q(a, true, &acc)) };
        }
        acc
    }

    /// T_s^m with T_s = Q_s Q_{s-1}⁻¹.
    pub fn t_pow<R: Ring>(&self, s: usize, m: i64, v: &FockVector<R>) -> FockVector<R> {
        self.t_ab_pow(s, s - 1, m, v)
    }

    /// Q_{n-1}^{e_{n-1}} ⋯ Q_0^{e_0} v₀.
    pub fn q_monomial_state<R: Ring>(&self, exps: &[i64]) -> Result<FockVector<R>> {
        if exps.len() != self.n {
            return Err(Error::Config(format!("{} exponents for n = {}", exps.len(), self.n)));
        }
        Ok(exps.iter().enumerate().fold(FockVector::vacuum(), |acc, (a, &e)| self.q_pow(a, e, &acc)))
    }

    /// T^k v₀ for n = 2, T₁^k T₂^l v₀ for n = 3.
    pub fn translation_state<R: Ring>(&self, k: i64, l: i64) -> Result<FockVector<R>> {
        match self.n {
            2 => Ok(self.t_pow(1, k, &FockVector::vacuum())),
            3 => Ok(self.t_pow(1, k, &self.t_pow(2, l, &FockVector::vacuum()))),
            n => Err(Error::IndexOutOfRange(format!("translation state for n = {n}"))),
        }
    }

    /// The normal-ordered loop algebra element E_ab z^m = Σ_l :ψ⁺_{a,(m+l)} ψ⁻_{b,(-l-1)}:.
    pub fn e_op<R: Ring>(&self, a: usize, b: usize, m: i64, v: &FockVector<R>) -> FockVector<R> {
        let mut out = FockVector::zero();
        for (st, c) in v.terms() {
            if a == b && m == 0 {
                let q = self.degree(st)[a];
                out.add_term(st.clone(), c.mul_ref(&R::from_i64(q)));
                continue;
            }
            // l with e_b z^l occupied and e_a z^{m+l} empty
            let mut ls: Vec<i64> = self.particles(st, b);
            ls.extend(self.holes(st, a).into_iter().map(|h| h - m));
            ls.extend(0..-m);
            ls.sort_unstable();
            ls.dedup();
            for l in ls {
                let ops = [SlotOp { wedge: true, comp: a, level: m + l }, SlotOp { wedge: false, comp: b, level: l }];
                if let Some((sg, st2)) = self.apply_ops_to_state(&ops, st.clone()) {
                    out.add_signed(st2, c, sg);
                }
            }
        }
        out
    }

    /// Component pair (a, b) of E_ab carried by a coordinate family.
    pub fn family_components(&self, family: Family) -> Result<(usize, usize)> {
        match (self.n, family) {
            (2, Family::C) | (3, Family::C) => Ok((1, 0)),
            (3, Family::D) => Ok((2, 0)),
            (3, Family::E) => Ok((2, 1)),
            (n, f) => Err(Error::IndexOutOfRange(format!("family {} for n = {n}", f.symbol()))),
        }
    }

    /// Γ = Res_{z₁} X^{(shift)}(z₁) E_ab(z₁) = Σ_i x_{i+shift} E_ab z^{-i-1} over the window.
    pub fn apply_gamma(&self, family: Family, shift: i64, v: &FockVector, window: Window) -> Result<FockVector> {
        let (a, b) = self.family_components(family)?;
        let mut out = FockVector::zero();
        for j in window.indices() {
            let x = Poly::var_in(family, j, window);
            for (st, c) in self.e_op(a, b, -(j - shift) - 1, v).terms {
                out.add_term(st, c.mul_ref(&x));
            }
        }
        self.check_cap(&out)?;
        Ok(out)
    }

    /// Γ^p v / p!.
    fn gamma_power(&self, family: Family, shift: i64, p: i64, v: &FockVector, window: Window) -> Result<FockVector> {
        let mut acc = v.clone();
        for i in 1..=p {
            acc = self.apply_gamma(family, shift, &acc, window)?.scale(&Poly::constant(crate::qq(1, i)));
        }
        Ok(acc)
    }

    /// The degree-(target) part of g v₀, with g = exp(Γ_C) for n = 2 and
    /// g = exp(Γ_c) exp(Γ_d) exp(Γ_e) for n = 3 (Γ_c at shift α-β, Γ_d at α, Γ_e at β).
    pub fn group_vacuum_part(&self, alpha: i64, beta: i64, target: &[i64], window: Window) -> Result<FockVector> {
        if target.len() != self.n || target.iter().sum::<i64>() != 0 {
            return Ok(FockVector::zero());
        }
        match self.n {
            2 => {
                let p = target[1];
                if p < 0 {
                    return Ok(FockVector::zero());
                }
                self.gamma_power(Family::C, alpha, p, &FockVector::vacuum(), window)
            }
            3 => {
                // -(p+q) δ0 + (p-r) δ1 + (q+r) δ2 with p, q, r the powers of Γ_c, Γ_d, Γ_e
                let (k, l) = (-target[0], target[2]);
                let mut out = FockVector::zero();
                for q in 0..=k.min(l) {
                    let (p, r) = (k - q, l - q);
                    if p < 0 || r < 0 {
                        continue;
                    }
                    let v = self.gamma_power(Family::E, beta, r, &FockVector::vacuum(), window)?;
                    let v = self.gamma_power(Family::D, alpha, q, &v, window)?;
                    let v = self.gamma_power(Family::C, alpha - beta, p, &v, window)?;
                    out = out.add(&v);
                }
                Ok(out)
            }
            n => Err(Error::IndexOutOfRange(format!("group element for n = {n}"))),
        }
    }

    /// ⟨T^k v₀, g^{(α)} v₀⟩ (n = 2) or ⟨T₁^k T₂^l v₀, g^{(α,β)} v₀⟩ (n = 3); the exponential
    /// is expanded only in the degree that can pair with the translated vacuum.
    pub fn tau_via_fock(&self, k: i64, l: i64, alpha: i64, beta: i64, window: Window) -> Result<Poly> {
        let t: FockVector = self.translation_state(k, l)?;
        let Some(deg) = self.homogeneous_degree(&t) else { return Ok(Poly::zero()) };
        let g = self.group_vacuum_part(alpha, beta, &deg, window)?;
        Ok(t.pair(&g))
    }
}

fn mode_op(a: usize, sign: Sign, k: i64) -> SlotOp {
    match sign {
        Sign::Plus => SlotOp { wedge: true, comp: a, level: k },
        Sign::Minus => SlotOp { wedge: false, comp: a, level: -k - 1 },
    }
}

/// Slot distance pruning for mode expansions: drops states that cannot reach any target state
/// with the remaining number of single-slot operations.
pub(crate) fn prune_far<R: Ring>(v: &mut FockVector<R>, targets: &[WedgeState], remaining: usize) {
    v.retain(|s| targets.iter().any(|t| s.distance(t) <= remaining));
}
