use std::fmt;

use super::ring::Ring;
use super::series::LaurentSeries;
use crate::error::AlgebraError;

/// n x n matrix of Laurent series sharing a common truncation.
#[derive(Clone, PartialEq)]
pub struct LoopMatrix<R: Ring> {
    n: usize,
    entries: Vec<LaurentSeries<R>>,
}

/// First offending coefficient in a negative-part check.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativeWitness<R: Ring> {
    pub row: usize,
    pub col: usize,
    pub power: i64,
    pub coeff: R,
}

impl<R: Ring> LoopMatrix<R> {
    pub fn new(n: usize, entries: Vec<LaurentSeries<R>>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        let trunc = entries.iter().filter_map(|e| e.trunc()).min();
        let entries = match trunc {
            Some(t) => entries.iter().map(|e| e.truncate(t)).collect(),
            None => entries,
        };
        LoopMatrix { n, entries }
    }

    pub fn from_fn<F: Fn(usize, usize) -> LaurentSeries<R>>(n: usize, f: F) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        LoopMatrix::new(n, entries)
    }

    pub fn identity(n: usize) -> Self {
        LoopMatrix::from_fn(n, |i, j| if i == j { LaurentSeries::one() } else { LaurentSeries::zero() })
    }

    pub fn zero(n: usize) -> Self {
        LoopMatrix::from_fn(n, |_, _| LaurentSeries::zero())
    }

    pub fn diag(d: Vec<LaurentSeries<R>>) -> Self {
        let n = d.len();
        LoopMatrix::from_fn(n, |i, j| if i == j { d[i].clone() } else { LaurentSeries::zero() })
    }

    /// diag(z^{e_0}, ..., z^{e_{n-1}})
    pub fn diag_powers(exps: &[i64]) -> Self {
        LoopMatrix::diag(exps.iter().map(|e| LaurentSeries::monomial(R::one(), *e)).collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries<R> {
        &self.entries[i * self.n + j]
    }

    pub fn trunc(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.trunc()).min()
    }

    pub fn truncate(&self, n: i64) -> Self {
        LoopMatrix::new(self.n, self.entries.iter().map(|e| e.truncate(n)).collect())
    }

    pub fn map<R2: Ring, F: Fn(&R) -> R2>(&self, f: F) -> LoopMatrix<R2> {
        LoopMatrix::new(self.n, self.entries.iter().map(|e| e.map(&f)).collect())
    }

    pub fn try_map<R2: Ring, E, F: Fn(&R) -> Result<R2, E>>(&self, f: F) -> Result<LoopMatrix<R2>, E> {
        let mut out = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            out.push(e.try_map(&f)?);
        }
        Ok(LoopMatrix::new(self.n, out))
    }

    pub fn map_entries<F: Fn(usize, usize, &LaurentSeries<R>) -> LaurentSeries<R>>(&self, f: F) -> Self {
        LoopMatrix::from_fn(self.n, |i, j| f(i, j, self.get(i, j)))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        LoopMatrix::new(self.n, self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect())
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        LoopMatrix::new(self.n, self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        LoopMatrix::from_fn(n, |i, j| {
            let mut acc = LaurentSeries::zero();
            for k in 0..n {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add_ref(&a.mul_ref(b));
            }
            acc
        })
    }

    pub fn scale(&self, s: &LaurentSeries<R>) -> Self {
        LoopMatrix::new(self.n, self.entries.iter().map(|e| e.mul_ref(s)).collect())
    }

    pub fn transpose(&self) -> Self {
        LoopMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != row) {
            for j in (0..n).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        LoopMatrix::new(n - 1, entries)
    }

    /// Cofactor expansion along the first row.
    pub fn det(&self) -> LaurentSeries<R> {
        match self.n {
            0 => LaurentSeries::one(),
            1 => self.get(0, 0).clone(),
            2 => self.get(0, 0).mul_ref(self.get(1, 1)).sub_ref(&self.get(0, 1).mul_ref(self.get(1, 0))),
            n => {
                let mut acc = LaurentSeries::zero();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let t = a.mul_ref(&self.minor(0, j).det());
                    acc = if j % 2 == 0 { acc.add_ref(&t) } else { acc.sub_ref(&t) };
                }
                acc
            }
        }
    }

    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return LoopMatrix::identity(1);
        }
        LoopMatrix::from_fn(n, |i, j| {
            let c = self.minor(j, i).det();
            if (i + j) % 2 == 0 {
                c
            } else {
                c.neg_ref()
            }
        })
    }

    /// Inverse via the adjugate; the determinant must be a unit monomial a z^m.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let det = self.det();
        let mut terms = det.terms();
        let (e, c) = match (terms.next(), terms.next()) {
            (Some((e, c)), None) => (*e, c.clone()),
            _ => return Err(AlgebraError::NonMonomialDeterminant),
        };
        let inv = c.try_inv().ok_or(AlgebraError::NonMonomialDeterminant)?;
        Ok(self.adjugate().scale(&LaurentSeries::monomial(inv, -e)))
    }

    /// Coefficient matrix of z^e, row-major.
    pub fn coeff_matrix(&self, e: i64) -> Vec<R> {
        self.entries.iter().map(|s| s.coeff(e)).collect()
    }

    /// Checks that the coefficients of z^{-1}..z^{-n} all vanish.
    pub fn negative_part_vanishes(&self, n: i64) -> Result<(), NegativeWitness<R>> {
        for power in 1..=n {
            for i in 0..self.n {
                for j in 0..self.n {
                    let c = self.get(i, j).coeff(-power);
                    if !c.is_zero() {
                        return Err(NegativeWitness { row: i, col: j, power, coeff: c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn entries(&self) -> &[LaurentSeries<R>] {
        &self.entries
    }
}

impl<R: Ring> fmt::Debug for LoopMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            write!(f, "  [")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}
