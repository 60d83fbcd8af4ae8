//! GL3 negative Birkhoff factor from tau functions, Baker functions and the elementary
//! connection matrices between neighbouring lattice points.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::TauTable3;
use crate::algebra::{Family, NegativeWitness, Ring, VarId};
use crate::error::{Error, Result};
use crate::loopgroup::{birkhoff_solve_numeric, build_g, substitute_matrix, GroupSpec};
use crate::shifts::{compose_fields, ShiftSpec};
use crate::symbolic::{AtomTable, TauExpr};
use crate::tau_gl2::GMinus;
use crate::{Matrix, RatFunc, Rational, Series};

/// A lattice point (k, l) with shifts (α, β).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub k: i64,
    pub l: i64,
    pub alpha: i64,
    pub beta: i64,
}

impl LatticePoint {
    pub fn new(k: i64, l: i64, alpha: i64, beta: i64) -> LatticePoint {
        LatticePoint { k, l, alpha, beta }
    }

    pub fn step(self, kind: ConnectionKind3) -> LatticePoint {
        let (dk, dl, da, db) = kind.displacement();
        LatticePoint::new(self.k + dk, self.l + dl, self.alpha + da, self.beta + db)
    }

    /// Exponents of the diagonal prefactor diag(z^{k+α}, z^{l−k+β}, z^{−l}) of the Baker function.
    pub fn prefactor_exponents(self) -> [i64; 3] {
        [self.k + self.alpha, self.l - self.k + self.beta, -self.l]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} l={} a={} b={}", self.k, self.l, self.alpha, self.beta)
    }
}

/// The six connection matrices: α- and β-raising V, the W that also lower k or l, and
/// the two translations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnectionKind3 {
    Va,
    Vb,
    Wa,
    Wb,
    Uk,
    Ul,
}

impl ConnectionKind3 {
    pub const ALL: [ConnectionKind3; 6] = [Self::Va, Self::Vb, Self::Wa, Self::Wb, Self::Uk, Self::Ul];

    /// (Δk, Δl, Δα, Δβ) from the source to the target lattice point.
    pub fn displacement(self) -> (i64, i64, i64, i64) {
        match self {
            Self::Va => (0, 0, 1, 0),
            Self::Vb => (0, 0, 0, 1),
            Self::Wa => (-1, 0, 1, 0),
            Self::Wb => (0, -1, 0, 1),
            Self::Uk => (1, 0, 0, 0),
            Self::Ul => (0, 1, 0, 0),
        }
    }

    /// Whether the matrix is defined at p (W needs k ≥ 1 or l ≥ 1 respectively).
    pub fn defined_at(self, p: LatticePoint) -> bool {
        p.k >= 0
            && p.l >= 0
            && match self {
                Self::Wa => p.k >= 1,
                Self::Wb => p.l >= 1,
                _ => true,
            }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Va => "V(a+)",
            Self::Vb => "V(b+)",
            Self::Wa => "W(a+,k-)",
            Self::Wb => "W(b+,l-)",
            Self::Uk => "U(k+)",
            Self::Ul => "U(l+)",
        }
    }
}

impl fmt::Display for ConnectionKind3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn cst(x: TauExpr) -> Series<TauExpr> {
    Series::constant(x)
}

fn z_plus(x: TauExpr) -> Series<TauExpr> {
    Series::from_coeffs([(1, TauExpr::one()), (0, x)], None)
}

fn zero() -> Series<TauExpr> {
    Series::zero()
}

fn one() -> Series<TauExpr> {
    Series::one()
}

fn sign(k: i64) -> TauExpr {
    TauExpr::constant(if k.rem_euclid(2) == 0 { Rational::one() } else { -Rational::one() })
}

/// GL3 connection matrices over tau atoms.
pub struct Connection3<'a> {
    table: &'a TauTable3,
    pub atoms: AtomTable,
}

impl<'a> Connection3<'a> {
    pub fn new(table: &'a TauTable3) -> Connection3<'a> {
        Connection3 { table, atoms: AtomTable::new() }
    }

    fn ratio(&mut self, num: &[(i64, i64, i64, i64)], den: &[(i64, i64, i64, i64)]) -> Result<TauExpr> {
        let get = |v: &[(i64, i64, i64, i64)]| -> Result<Vec<_>> {
            v.iter().map(|&(k, l, a, b)| self.table.tau(k, l, a, b)).collect()
        };
        let n = get(num)?;
        let d = get(den)?;
        self.atoms.ratio(&n.iter().collect::<Vec<_>>(), &d.iter().collect::<Vec<_>>())
    }

    pub fn tau(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<TauExpr> {
        let p = self.table.tau(k, l, a, b)?;
        Ok(self.atoms.intern(&p))
    }

    /// τ_{k+1,l}/τ_{k,l}
    pub fn hk(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<TauExpr> {
        self.ratio(&[(k + 1, l, a, b)], &[(k, l, a, b)])
    }

    /// τ_{k,l+1}/τ_{k,l}
    pub fn hl(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<TauExpr> {
        self.ratio(&[(k, l + 1, a, b)], &[(k, l, a, b)])
    }

    /// τ_{k+1,l+1}/τ_{k,l}
    pub fn hkl(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<TauExpr> {
        self.ratio(&[(k + 1, l + 1, a, b)], &[(k, l, a, b)])
    }

    pub fn ihk(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<TauExpr> {
        self.ratio(&[(k, l, a, b)], &[(k + 1, l, a, b)])
    }

    pub fn ihl(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<TauExpr> {
        self.ratio(&[(k, l, a, b)], &[(k, l + 1, a, b)])
    }

    pub fn ihkl(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<TauExpr> {
        self.ratio(&[(k, l, a, b)], &[(k + 1, l + 1, a, b)])
    }

    pub fn va(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<Matrix<TauExpr>> {
        let s = sign(k);
        let hk = self.hk(k, l, a, b)?;
        let hkl = self.hkl(k, l, a, b)?;
        let ihk1 = self.ihk(k - 1, l, a + 1, b)?;
        let ihkl1 = self.ihkl(k - 1, l - 1, a + 1, b)?;
        let diag = hkl.mul_ref(&ihkl1) - hk.mul_ref(&ihk1);
        Ok(Matrix::new(
            3,
            vec![
                z_plus(diag),
                cst(ihk1),
                cst(s.mul_ref(&ihkl1)),
                cst(-hk),
                one(),
                zero(),
                cst(s.mul_ref(&hkl)),
                zero(),
                one(),
            ],
        ))
    }

    pub fn vb(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<Matrix<TauExpr>> {
        let s = sign(k);
        let ihk = self.ihk(k - 1, l, a, b)?;
        let hk1 = self.hk(k, l, a, b + 1)?;
        let hl = self.hl(k, l, a, b)?;
        let ihl1 = self.ihl(k, l - 1, a, b + 1)?;
        let diag = -(hl.mul_ref(&ihl1) + hk1.mul_ref(&ihk));
        Ok(Matrix::new(
            3,
            vec![
                one(),
                cst(-ihk),
                zero(),
                cst(hk1),
                z_plus(diag),
                cst(s.mul_ref(&ihl1)),
                zero(),
                cst(-s.mul_ref(&hl)),
                one(),
            ],
        ))
    }

    /// Defined for k ≥ 1.
    pub fn wa(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<Matrix<TauExpr>> {
        require(ConnectionKind3::Wa, LatticePoint::new(k, l, a, b))?;
        let s = sign(k);
        let ihk = self.ihk(k - 1, l, a, b)?;
        let hk1 = self.hk(k - 1, l, a + 1, b)?;
        let hl = self.hl(k, l, a, b)?;
        let ihl1 = self.ihl(k - 1, l - 1, a + 1, b)?;
        let diag = hl.mul_ref(&ihl1) - hk1.mul_ref(&ihk);
        Ok(Matrix::new(
            3,
            vec![
                one(),
                cst(-ihk),
                zero(),
                cst(hk1),
                z_plus(diag),
                cst(-s.mul_ref(&ihl1)),
                zero(),
                cst(-s.mul_ref(&hl)),
                one(),
            ],
        ))
    }

    /// Defined for l ≥ 1.
    pub fn wb(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<Matrix<TauExpr>> {
        require(ConnectionKind3::Wb, LatticePoint::new(k, l, a, b))?;
        let s = sign(k);
        let ihkl = self.ihkl(k - 1, l - 1, a, b)?;
        let ihl = self.ihl(k, l - 1, a, b)?;
        let hkl1 = self.hkl(k, l - 1, a, b + 1)?;
        let hl1 = self.hl(k, l - 1, a, b + 1)?;
        let diag = hkl1.mul_ref(&ihkl) - hl1.mul_ref(&ihl);
        Ok(Matrix::new(
            3,
            vec![
                one(),
                zero(),
                cst(-s.mul_ref(&ihkl)),
                zero(),
                one(),
                cst(-s.mul_ref(&ihl)),
                cst(-s.mul_ref(&hkl1)),
                cst(s.mul_ref(&hl1)),
                z_plus(diag),
            ],
        ))
    }

    /// Closed form of (W(a+,k−))^{-1}.
    pub fn wa_inverse(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<Matrix<TauExpr>> {
        require(ConnectionKind3::Wa, LatticePoint::new(k, l, a, b))?;
        let s = sign(k);
        let ihk = self.ihk(k - 1, l, a, b)?;
        let hk1 = self.hk(k - 1, l, a + 1, b)?;
        let hl = self.hl(k, l, a, b)?;
        let ihl1 = self.ihl(k - 1, l - 1, a + 1, b)?;
        let zw = Matrix::new(
            3,
            vec![
                z_plus(-hk1.mul_ref(&ihk)),
                cst(ihk.clone()),
                cst(s.mul_ref(&ihk).mul_ref(&ihl1)),
                cst(-hk1.clone()),
                one(),
                cst(s.mul_ref(&ihl1)),
                cst(-s.mul_ref(&hk1).mul_ref(&hl)),
                cst(s.mul_ref(&hl)),
                z_plus(hl.mul_ref(&ihl1)),
            ],
        );
        Ok(zw.scale(&Series::monomial(TauExpr::one(), -1)))
    }

    /// Closed form of (W(b+,l−))^{-1}.
    pub fn wb_inverse(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<Matrix<TauExpr>> {
        require(ConnectionKind3::Wb, LatticePoint::new(k, l, a, b))?;
        let s = sign(k);
        let ihkl = self.ihkl(k - 1, l - 1, a, b)?;
        let ihl = self.ihl(k, l - 1, a, b)?;
        let hkl1 = self.hkl(k, l - 1, a, b + 1)?;
        let hl1 = self.hl(k, l - 1, a, b + 1)?;
        let zw = Matrix::new(
            3,
            vec![
                z_plus(hkl1.mul_ref(&ihkl)),
                cst(-hl1.mul_ref(&ihkl)),
                cst(s.mul_ref(&ihkl)),
                cst(hkl1.mul_ref(&ihl)),
                z_plus(-hl1.mul_ref(&ihl)),
                cst(s.mul_ref(&ihl)),
                cst(s.mul_ref(&hkl1)),
                cst(-s.mul_ref(&hl1)),
                one(),
            ],
        );
        Ok(zw.scale(&Series::monomial(TauExpr::one(), -1)))
    }

    /// U(k+) = V(a+) W(a+,k−)_{k+1}^{-1}.
    pub fn uk(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<Matrix<TauExpr>> {
        Ok(self.va(k, l, a, b)?.mul_ref(&self.wa(k + 1, l, a, b)?.inverse()?))
    }

    /// U(l+) = V(b+) W(b+,l−)_{l+1}^{-1}.
    pub fn ul(&mut self, k: i64, l: i64, a: i64, b: i64) -> Result<Matrix<TauExpr>> {
        Ok(self.vb(k, l, a, b)?.mul_ref(&self.wb(k, l + 1, a, b)?.inverse()?))
    }

    pub fn matrix(&mut self, kind: ConnectionKind3, p: LatticePoint) -> Result<Matrix<TauExpr>> {
        let LatticePoint { k, l, alpha: a, beta: b } = p;
        match kind {
            ConnectionKind3::Va => self.va(k, l, a, b),
            ConnectionKind3::Vb => self.vb(k, l, a, b),
            ConnectionKind3::Wa => self.wa(k, l, a, b),
            ConnectionKind3::Wb => self.wb(k, l, a, b),
            ConnectionKind3::Uk => self.uk(k, l, a, b),
            ConnectionKind3::Ul => self.ul(k, l, a, b),
        }
    }

    /// The translation matrix with its free diagonal entry (z plus the product's constant)
    /// and every other entry from the closed off-diagonal pattern.
    pub fn u_pattern(&mut self, kind: ConnectionKind3, p: LatticePoint, computed: &Matrix<TauExpr>) -> Result<Matrix<TauExpr>> {
        let LatticePoint { k, l, alpha: a, beta: b } = p;
        let s = sign(k);
        match kind {
            ConnectionKind3::Uk => {
                let free = z_plus(computed.get(0, 0).known_coeff(0).unwrap_or_else(TauExpr::zero));
                let ihk = self.ihk(k, l, a, b)?;
                let ihkl = self.ihkl(k, l - 1, a, b)?;
                let hk = self.hk(k, l, a, b)?;
                let hkl = self.hkl(k, l, a, b)?;
                Ok(Matrix::new(
                    3,
                    vec![
                        free,
                        cst(ihk),
                        cst(-s.mul_ref(&ihkl)),
                        cst(-hk),
                        zero(),
                        zero(),
                        cst(s.mul_ref(&hkl)),
                        zero(),
                        one(),
                    ],
                ))
            }
            ConnectionKind3::Ul => {
                let free = z_plus(computed.get(1, 1).known_coeff(0).unwrap_or_else(TauExpr::zero));
                let ihk = self.ihk(k - 1, l, a, b)?;
                let hk = self.hk(k, l + 1, a, b)?;
                let ihl = self.ihl(k, l, a, b)?;
                let hl = self.hl(k, l, a, b)?;
                Ok(Matrix::new(
                    3,
                    vec![
                        one(),
                        cst(-ihk),
                        zero(),
                        cst(hk),
                        free,
                        cst(s.mul_ref(&ihl)),
                        zero(),
                        cst(-s.mul_ref(&hl)),
                        zero(),
                    ],
                ))
            }
            _ => Err(Error::Config(format!("{kind} is not a translation matrix"))),
        }
    }

    /// Expected off-diagonal z^{-1} coefficients of g_- at p (diagonal entries left zero).
    pub fn first_order_pattern(&mut self, p: LatticePoint) -> Result<Matrix<TauExpr>> {
        let LatticePoint { k, l, alpha: a, beta: b } = p;
        let s = sign(k);
        let e01 = self.ihk(k - 1, l, a, b)?;
        let e02 = s.mul_ref(&self.ihkl(k - 1, l - 1, a, b)?);
        let e10 = self.hk(k, l, a, b)?;
        let e12 = s.mul_ref(&self.ihl(k, l - 1, a, b)?);
        let e20 = -s.mul_ref(&self.hkl(k, l, a, b)?);
        let e21 = s.mul_ref(&self.hl(k, l, a, b)?);
        Ok(Matrix::new(
            3,
            vec![zero(), cst(e01), cst(e02), cst(e10), zero(), cst(e12), cst(e20), cst(e21), zero()],
        ))
    }

    pub fn to_ratfunc(&self, m: &Matrix<TauExpr>) -> Result<Matrix<RatFunc>> {
        m.try_map(|e| self.atoms.to_ratfunc(e))
    }

    /// True when every coefficient of every entry clears to the zero polynomial.
    pub fn vanishes(&self, m: &Matrix<TauExpr>) -> bool {
        m.entries().iter().all(|s| s.terms().all(|(_, c)| self.atoms.cleared_numerator(c).is_zero()))
    }

    pub fn evaluate(&self, m: &Matrix<TauExpr>, assignment: &BTreeMap<VarId, Rational>) -> Result<Matrix<Rational>> {
        m.try_map(|e| self.atoms.evaluate(e, assignment))
    }
}

fn require(kind: ConnectionKind3, p: LatticePoint) -> Result<()> {
    if kind.defined_at(p) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("{kind} is not defined at {p}")))
    }
}

/// A connection matrix as rational functions in the coefficients.
pub fn connection3(kind: ConnectionKind3, p: LatticePoint, t: &TauTable3) -> Result<Matrix<RatFunc>> {
    let mut c = Connection3::new(t);
    let m = c.matrix(kind, p)?;
    c.to_ratfunc(&m)
}

/// Named identities that must all vanish: det V − z, det W − z, det U − 1, W·W^{-1} − 1 for the
/// closed inverses and the closed inverses against the adjugate inverse.
pub fn determinant_defects3(p: LatticePoint, t: &TauTable3) -> Result<Vec<(String, bool)>> {
    let mut c = Connection3::new(t);
    let LatticePoint { k, l, alpha: a, beta: b } = p;
    let z = Series::monomial(TauExpr::one(), 1);
    let mut out = Vec::new();
    let series_zero = |c: &Connection3, s: &Series<TauExpr>| s.terms().all(|(_, x)| c.atoms.cleared_numerator(x).is_zero());
    for kind in ConnectionKind3::ALL {
        if !kind.defined_at(p) {
            continue;
        }
        let m = c.matrix(kind, p)?;
        let target = if matches!(kind, ConnectionKind3::Uk | ConnectionKind3::Ul) { one() } else { z.clone() };
        let d = m.det().sub_ref(&target);
        out.push((format!("det {kind} - {}", if target == one() { "1" } else { "z" }), series_zero(&c, &d)));
    }
    let id = Matrix::<TauExpr>::identity(3);
    if k >= 1 {
        let w = c.wa(k, l, a, b)?;
        let closed = c.wa_inverse(k, l, a, b)?;
        out.push(("W(a+,k-) times closed inverse - 1".into(), c.vanishes(&w.mul_ref(&closed).sub_ref(&id))));
        out.push(("W(a+,k-) closed inverse - adjugate inverse".into(), c.vanishes(&closed.sub_ref(&w.inverse()?))));
    }
    if l >= 1 {
        let w = c.wb(k, l, a, b)?;
        let closed = c.wb_inverse(k, l, a, b)?;
        out.push(("W(b+,l-) times closed inverse - 1".into(), c.vanishes(&w.mul_ref(&closed).sub_ref(&id))));
        out.push(("W(b+,l-) closed inverse - adjugate inverse".into(), c.vanishes(&closed.sub_ref(&w.inverse()?))));
    }
    Ok(out)
}

/// Both factorizations of each translation matrix against each other, and each product
/// against the closed off-diagonal pattern.
pub struct ZeroCurvature3 {
    pub uk_factorizations: Matrix<TauExpr>,
    pub ul_factorizations: Matrix<TauExpr>,
    pub uk_pattern: Matrix<TauExpr>,
    pub ul_pattern: Matrix<TauExpr>,
}

pub fn zero_curvature3_atoms(c: &mut Connection3, p: LatticePoint) -> Result<ZeroCurvature3> {
    let LatticePoint { k, l, alpha: a, beta: b } = p;
    let uk = c.uk(k, l, a, b)?;
    let uk2 = c.wa(k + 1, l, a - 1, b)?.inverse()?.mul_ref(&c.va(k + 1, l, a - 1, b)?);
    let ul = c.ul(k, l, a, b)?;
    let ul2 = c.wb(k, l + 1, a, b - 1)?.inverse()?.mul_ref(&c.vb(k, l + 1, a, b - 1)?);
    let uk_pat = c.u_pattern(ConnectionKind3::Uk, p, &uk)?;
    let ul_pat = c.u_pattern(ConnectionKind3::Ul, p, &ul)?;
    Ok(ZeroCurvature3 {
        uk_factorizations: uk.sub_ref(&uk2),
        ul_factorizations: ul.sub_ref(&ul2),
        uk_pattern: uk.sub_ref(&uk_pat),
        ul_pattern: ul.sub_ref(&ul_pat),
    })
}

/// Differences of the two factorizations of U(k+) and of U(l+), as rational functions.
pub fn zero_curvature3_residual(p: LatticePoint, t: &TauTable3) -> Result<(Matrix<RatFunc>, Matrix<RatFunc>)> {
    let mut c = Connection3::new(t);
    let zc = zero_curvature3_atoms(&mut c, p)?;
    Ok((c.to_ratfunc(&zc.uk_factorizations)?, c.to_ratfunc(&zc.ul_factorizations)?))
}

/// Path-independence moves around elementary squares and triangles: each entry is the
/// difference of the products along the two paths (all must vanish).
pub fn path_move_residuals(p: LatticePoint, t: &TauTable3) -> Result<Vec<(String, bool)>> {
    use ConnectionKind3::*;
    let mut c = Connection3::new(t);
    let mut out = Vec::new();
    let zc = zero_curvature3_atoms(&mut c, p)?;
    out.push(("V(a+) then W(a+,k-)^-1 = W(a+,k-)^-1 then V(a+)".into(), c.vanishes(&zc.uk_factorizations)));
    out.push(("V(b+) then W(b+,l-)^-1 = W(b+,l-)^-1 then V(b+)".into(), c.vanishes(&zc.ul_factorizations)));
    for (x, y) in [(Va, Vb), (Wa, Vb), (Va, Wb), (Wa, Wb)] {
        let (q1, q2) = (p.step(x), p.step(y));
        if !(x.defined_at(p) && y.defined_at(q1) && y.defined_at(p) && x.defined_at(q2)) {
            continue;
        }
        let one_way = c.matrix(x, p)?.mul_ref(&c.matrix(y, q1)?);
        let other = c.matrix(y, p)?.mul_ref(&c.matrix(x, q2)?);
        out.push((format!("{x} {y} = {y} {x}"), c.vanishes(&one_way.sub_ref(&other))));
    }
    Ok(out)
}

/// (Σ·𝒯)/τ_{k,l}: rows carry the composed shift fields S_c^+S_d^+, S_c^-S_e^+, S_d^-S_e^-,
/// exact through z^{-n}. Tau functions fed to the fields live on the window extended n+1
/// steps down.
pub fn g_minus_from_tau3(p: LatticePoint, t: &TauTable3, n: i64) -> Result<GMinus> {
    let LatticePoint { k, l, alpha: a, beta: b } = p;
    if k < 0 || l < 0 {
        return Err(Error::IndexOutOfRange(format!("Birkhoff factor needs k, l >= 0, got {p}")));
    }
    let tau = t.tau(k, l, a, b)?;
    if tau.is_zero() {
        return Err(Error::TauVanishes);
    }
    let w = t.window();
    let ext = w.extend_below(n + 1);
    let pts: Vec<_> = (-1..=1).flat_map(|dk| (-1..=1).map(move |dl| (k + dk, l + dl, a, b))).collect();
    t.prefill_in(ext, &pts)?;
    let fields = [
        [ShiftSpec::plus(Family::C, n, w), ShiftSpec::plus(Family::D, n, w)],
        [ShiftSpec::minus(Family::C, n, w), ShiftSpec::plus(Family::E, n, w)],
        [ShiftSpec::minus(Family::D, n, w), ShiftSpec::minus(Family::E, n, w)],
    ];
    let s = if k.rem_euclid(2) == 0 { 1 } else { -1 };
    // (Δk, Δl, z-shift, sign) per entry
    let signed: [[(i64, i64, i64, i64); 3]; 3] = [
        [(0, 0, 0, 1), (-1, 0, -1, 1), (-1, -1, -1, s)],
        [(1, 0, -1, 1), (0, 0, 0, 1), (0, -1, -1, s)],
        [(1, 1, -1, -s), (0, 1, -1, s), (0, 0, 0, 1)],
    ];
    let mut entries = Vec::with_capacity(9);
    for (row, specs) in signed.iter().zip(&fields) {
        for &(dk, dl, zs, sg) in row {
            let te = t.tau_in(ext, k + dk, l + dl, a, b)?;
            // families without a field in this row ride along and are cut back to the window
            let img = compose_fields(&te, specs)?.map(|c| c.restrict(w)).shift(zs);
            entries.push(if sg < 0 { img.neg_ref() } else { img });
        }
    }
    Ok(GMinus { numer: Matrix::new(3, entries).truncate(n), tau })
}

fn max_power(m: &Matrix) -> i64 {
    m.entries().iter().filter_map(|s| s.max_exp()).max().unwrap_or(0).max(0)
}

/// Checks that adj(numer)·g^{[k,l](α,β)} = τ²·g_-^{-1}g has no z^{-1}..z^{-n} terms.
pub fn verify_birkhoff3(p: LatticePoint, t: &TauTable3, n: i64) -> Result<std::result::Result<(), NegativeWitness<crate::Poly>>> {
    let g = build_g(&GroupSpec::gl3(t.window(), p.alpha, p.beta, p.k, p.l))?;
    let gm = g_minus_from_tau3(p, t, n + max_power(&g))?;
    let prod = gm.numer.adjugate().mul_ref(&g);
    Ok(prod.negative_part_vanishes(n))
}

/// First (row, col, power) where the tau-formula g_- and the numeric solver disagree.
pub fn birkhoff3_numeric_mismatch(
    p: LatticePoint,
    t: &TauTable3,
    n: i64,
    assignment: &BTreeMap<VarId, Rational>,
) -> Result<Option<(usize, usize, i64)>> {
    let g = build_g(&GroupSpec::gl3(t.window(), p.alpha, p.beta, p.k, p.l))?;
    let numeric = birkhoff_solve_numeric(&substitute_matrix(&g, assignment)?, n)?;
    let formula = g_minus_from_tau3(p, t, n)?.substitute(assignment)?;
    Ok(crate::tau_gl2::first_mismatch(&formula, &numeric.g_minus, n))
}

/// Off-diagonal (row, col) where the numeric solver's z^{-1} coefficient of g_- differs
/// from the h-ratio pattern, if any.
pub fn first_order_mismatch(
    p: LatticePoint,
    t: &TauTable3,
    assignment: &BTreeMap<VarId, Rational>,
) -> Result<Option<(usize, usize)>> {
    let g = build_g(&GroupSpec::gl3(t.window(), p.alpha, p.beta, p.k, p.l))?;
    let numeric = birkhoff_solve_numeric(&substitute_matrix(&g, assignment)?, 2)?;
    let mut c = Connection3::new(t);
    let pat = c.first_order_pattern(p)?;
    let expected = c.evaluate(&pat, assignment)?;
    for i in 0..3 {
        for j in (0..3).filter(|&j| j != i) {
            if numeric.g_minus.get(i, j).coeff(-1) != expected.get(i, j).coeff(0) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// τ_from²τ_to·Γ with Γ = g_-(from)^{-1} diag(z^{x}) g_-(to), x the difference of Baker
/// prefactor exponents, exact through z^{-n}.
pub fn gamma_from_definition(from: LatticePoint, to: LatticePoint, t: &TauTable3, n: i64) -> Result<(Matrix, crate::Poly)> {
    let (pf, pt) = (from.prefactor_exponents(), to.prefactor_exponents());
    let x: Vec<i64> = (0..3).map(|i| pt[i] - pf[i]).collect();
    let spread = x.iter().map(|e| e.abs()).max().unwrap_or(0);
    let left = g_minus_from_tau3(from, t, n + spread + 2)?;
    let right = g_minus_from_tau3(to, t, n + spread + 2)?;
    let prod = left.numer.adjugate().mul_ref(&Matrix::diag_powers(&x)).mul_ref(&right.numer).truncate(n);
    Ok((prod, &(&left.tau * &left.tau) * &right.tau))
}

/// Compares a closed-form connection matrix with its g_- definition; returns the first
/// offending (row, col, power), checking all powers from z^{-n} up.
pub fn connection_definition_mismatch3(
    kind: ConnectionKind3,
    p: LatticePoint,
    t: &TauTable3,
    n: i64,
) -> Result<Option<(usize, usize, i64)>> {
    let (prod, scale) = gamma_from_definition(p, p.step(kind), t, n)?;
    let closed = connection3(kind, p, t)?;
    let top = max_power(&prod).max(1);
    for pw in (-n..=top).rev() {
        for i in 0..3 {
            for j in 0..3 {
                let r = closed.get(i, j).known_coeff(pw).unwrap_or_else(RatFunc::zero);
                if &r.num().clone() * &scale != &prod.get(i, j).coeff(pw) * r.den() {
                    return Ok(Some((i, j, pw)));
                }
            }
        }
    }
    Ok(None)
}

/// Baker function Ψ = diag(z^{k+α}, z^{l−k+β}, z^{−l})·g_- after substitution.
pub fn baker3(p: LatticePoint, t: &TauTable3, n: i64, assignment: &BTreeMap<VarId, Rational>) -> Result<Matrix<Rational>> {
    let gm = g_minus_from_tau3(p, t, n)?.substitute(assignment)?;
    Ok(Matrix::<Rational>::diag_powers(&p.prefactor_exponents()).mul_ref(&gm))
}

/// Ψ(p + step) − Ψ(p)·Γ for every connection matrix defined at p, numerically, restricted
/// to the powers both sides know.
pub fn baker3_relations_residual(
    p: LatticePoint,
    t: &TauTable3,
    n: i64,
    assignment: &BTreeMap<VarId, Rational>,
) -> Result<Vec<(ConnectionKind3, Option<(usize, usize, i64)>)>> {
    let mut c = Connection3::new(t);
    let psi = baker3(p, t, n, assignment)?;
    let mut out = Vec::new();
    for kind in ConnectionKind3::ALL {
        if !kind.defined_at(p) {
            continue;
        }
        let gamma = c.matrix(kind, p)?;
        let lhs = baker3(p.step(kind), t, n, assignment)?;
        let rhs = psi.mul_ref(&c.evaluate(&gamma, assignment)?);
        out.push((kind, agreement_mismatch(&lhs, &rhs)));
    }
    Ok(out)
}

/// First (row, col, power) where two truncated matrices differ on powers both know.
pub fn agreement_mismatch(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Option<(usize, usize, i64)> {
    let size = a.size();
    let lowest = |m: &Matrix<Rational>| m.trunc().map(|t| -t);
    let lo = match (lowest(a), lowest(b)) {
        (Some(x), Some(y)) => x.max(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => {
            let min = |m: &Matrix<Rational>| m.entries().iter().filter_map(|s| s.min_exp()).min().unwrap_or(0);
            min(a).min(min(b))
        }
    };
    let max = |m: &Matrix<Rational>| m.entries().iter().filter_map(|s| s.max_exp()).max().unwrap_or(0);
    for pw in (lo..=max(a).max(max(b))).rev() {
        for i in 0..size {
            for j in 0..size {
                if a.get(i, j).known_coeff(pw).unwrap_or_else(Rational::zero)
                    != b.get(i, j).known_coeff(pw).unwrap_or_else(Rational::zero)
                {
                    return Some((i, j, pw));
                }
            }
        }
    }
    None
}

/// Γ along a two-step path, composed from closed forms, against the definition
/// g_-(start)^{-1} diag(z^{x₀}, z^{x₁}, z^{x₂}) g_-(end) with x read off the Baker
/// prefactors; numeric, on the powers both sides know.
pub fn two_step_bookkeeping_mismatch(
    start: LatticePoint,
    steps: [ConnectionKind3; 2],
    t: &TauTable3,
    n: i64,
    assignment: &BTreeMap<VarId, Rational>,
) -> Result<Option<(usize, usize, i64)>> {
    let mid = start.step(steps[0]);
    let end = mid.step(steps[1]);
    if !steps[0].defined_at(start) || !steps[1].defined_at(mid) {
        return Err(Error::IndexOutOfRange(format!("path {} {} from {start}", steps[0], steps[1])));
    }
    let mut c = Connection3::new(t);
    let composed = c.matrix(steps[0], start)?.mul_ref(&c.matrix(steps[1], mid)?);
    let composed = c.evaluate(&composed, assignment)?;
    let (prod, scale) = gamma_from_definition(start, end, t, n)?;
    let s = scale.substitute(assignment)?;
    if s.is_zero() {
        return Err(Error::TauVanishes);
    }
    let inv = s.recip();
    let defined = substitute_matrix(&prod, assignment)?.map(|x| x * &inv);
    Ok(agreement_mismatch(&composed, &defined))
}
