use num_traits::{One, Zero};

use super::poly::Poly;
use super::ring::Ring;
use super::scalar::Scalar;
use crate::error::AlgebraError;

/// Determinant of a square polynomial matrix: Laplace expansion up to size 4, Bareiss beyond.
pub fn det_fraction_free<S: Scalar>(m: &[Vec<Poly<S>>]) -> Result<Poly<S>, AlgebraError> {
    check_square(m)?;
    if m.len() <= 4 {
        Ok(det_laplace(m))
    } else {
        Ok(det_bareiss(m))
    }
}

fn check_square<T>(m: &[Vec<T>]) -> Result<(), AlgebraError> {
    if m.iter().all(|row| row.len() == m.len()) {
        Ok(())
    } else {
        Err(AlgebraError::NotSquare)
    }
}

/// Cofactor expansion along the first row.
pub fn det_laplace<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    match n {
        0 => R::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul_ref(&m[1][1]).sub_ref(&m[0][1].mul_ref(&m[1][0])),
        _ => {
            let mut acc = R::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<R>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = m[0][j].mul_ref(&det_laplace(&minor));
                acc = if j % 2 == 0 { acc.add_ref(&t) } else { acc.sub_ref(&t) };
            }
            acc
        }
    }
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn det_bareiss<S: Scalar>(m: &[Vec<Poly<S>>]) -> Poly<S> {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut a: Vec<Vec<Poly<S>>> = m.to_vec();
    let mut sign = S::one();
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].scale(&sign)
}

/// Leibniz permutation sum, used as an independent oracle.
pub fn det_leibniz<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = R::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut t = R::one();
        for (i, &j) in p.iter().enumerate() {
            t = t.mul_ref(&m[i][j]);
        }
        if permutation_sign(p) < 0 {
            acc = acc.sub_ref(&t);
        } else {
            acc = acc.add_ref(&t);
        }
    });
    acc
}

pub fn permutation_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Calls `f` on every permutation of `p[k..]` (Heap-free recursive swap order).
pub fn permute<F: FnMut(&[usize])>(p: &mut Vec<usize>, k: usize, f: &mut F) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// All permutations of 0..n in a deterministic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permute(&mut p, 0, &mut |q| out.push(q.to_vec()));
    out
}
