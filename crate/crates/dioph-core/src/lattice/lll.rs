//! LLL reduction with exact field arithmetic, driven entirely by Gram
//! matrices of the box-normalised inner product.
//!
//! Reduction here is only a preprocessing heuristic for enumeration; no
//! downstream correctness depends on reduction quality. Dimensions are
//! small (<= 10), so Gram data is recomputed from the transform rather
//! than updated incrementally.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::exact::{Int, Rational, Real};
use crate::{Error, Result};

/// Gram-Schmidt data (mu coefficients and squared norms) from a Gram matrix.
pub fn gram_schmidt(gram: &[Vec<Real>]) -> Result<(Vec<Vec<Real>>, Vec<Real>)> {
    let d = gram.len();
    let mut mu = vec![vec![Real::zero(); d]; d];
    let mut q = vec![Real::zero(); d];
    for i in 0..d {
        for j in 0..i {
            // <b_i, b*_j> = g_ij - sum_{k<j} mu_ik mu_jk q_k
            let mut acc = gram[i][j].clone();
            for k in 0..j {
                let t = mu[i][k].mul(&mu[j][k])?.mul(&q[k])?;
                acc = acc.sub(&t)?;
            }
            mu[i][j] = acc.div(&q[j])?;
        }
        let mut qi = gram[i][i].clone();
        for k in 0..i {
            let t = mu[i][k].mul(&mu[i][k])?.mul(&q[k])?;
            qi = qi.sub(&t)?;
        }
        if qi.sign() <= 0 {
            return Err(Error::validation("Gram matrix is not positive definite"));
        }
        q[i] = qi;
    }
    Ok((mu, q))
}

/// Gram matrix of the rows of `u` with respect to the base Gram `q0`:
/// G = U Q0 U^T.
pub fn transformed_gram(q0: &[Vec<Real>], u: &[Vec<Int>]) -> Result<Vec<Vec<Real>>> {
    let d = q0.len();
    // tmp = U Q0
    let mut tmp = vec![vec![Real::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = Real::zero();
            for k in 0..d {
                if u[i][k].is_zero() {
                    continue;
                }
                acc = acc.add(&q0[k][j].mul_rational(&Rational::from(u[i][k].clone())))?;
            }
            tmp[i][j] = acc;
        }
    }
    let mut g = vec![vec![Real::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = Real::zero();
            for k in 0..d {
                if u[j][k].is_zero() {
                    continue;
                }
                acc = acc.add(&tmp[i][k].mul_rational(&Rational::from(u[j][k].clone())))?;
            }
            g[i][j] = acc;
        }
    }
    Ok(g)
}

/// LLL with delta = 3/4. `trans` starts as any unimodular matrix (usually
/// the identity) and is updated so that its rows express the reduced basis
/// in the coordinates `q0` refers to. Returns the Gram of the reduced basis.
pub fn lll_reduce(q0: &[Vec<Real>], trans: &mut Vec<Vec<Int>>) -> Result<Vec<Vec<Real>>> {
    let d = q0.len();
    if d <= 1 {
        return transformed_gram(q0, trans);
    }
    let delta = Real::Rat(Rational::new(Int::from(3), Int::from(4)));
    let half = Real::Rat(Rational::new(Int::from(1), Int::from(2)));
    let mut steps = 0u64;
    let max_steps = 40_000u64 + 4_000 * (d as u64) * (d as u64);
    let mut k = 1usize;
    loop {
        if k >= d {
            break;
        }
        steps += 1;
        if steps > max_steps {
            return Err(Error::internal("LLL failed to terminate within budget"));
        }
        let gram = transformed_gram(q0, trans)?;
        let (mu, q) = gram_schmidt(&gram)?;
        // Size-reduce row k against rows k-1 .. 0 (recompute after changes).
        let mut changed = false;
        for j in (0..k).rev() {
            if half.try_cmp(&mu[k][j].abs())? == core::cmp::Ordering::Less {
                let r = mu[k][j].round_nearest();
                for t in 0..d {
                    let s = &trans[j][t] * &r;
                    trans[k][t] -= s;
                }
                changed = true;
            }
        }
        let (mu, q) = if changed {
            let gram = transformed_gram(q0, trans)?;
            gram_schmidt(&gram)?
        } else {
            (mu, q)
        };
        // Lovasz condition between rows k-1 and k.
        let m = mu[k][k - 1].clone();
        let rhs = delta.sub(&m.mul(&m)?)?.mul(&q[k - 1])?;
        if q[k].try_cmp(&rhs)? != core::cmp::Ordering::Less {
            k += 1;
        } else {
            trans.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
    transformed_gram(q0, trans)
}

pub fn identity_transform(d: usize) -> Vec<Vec<Int>> {
    (0..d)
        .map(|i| {
            let mut r = vec![Int::zero(); d];
            r[i] = Int::from(1);
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram_of(rows: &[Vec<i64>]) -> Vec<Vec<Real>> {
        let n = rows.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let dot: i64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                        Real::from_int(dot)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn gram_schmidt_diagonal() {
        let g = gram_of(&[vec![2, 0], vec![0, 3]]);
        let (mu, q) = gram_schmidt(&g).unwrap();
        assert!(mu[1][0].is_zero());
        assert_eq!(q[0], Real::from_int(4));
        assert_eq!(q[1], Real::from_int(9));
    }

    #[test]
    fn rejects_singular_gram() {
        let g = gram_of(&[vec![1, 1], vec![1, 1]]);
        assert!(gram_schmidt(&g).is_err());
    }

    #[test]
    fn reduces_skewed_basis() {
        let rows = [vec![1i64, 0], vec![1000, 1]];
        let q0 = gram_of(&rows);
        let mut trans = identity_transform(2);
        let gram = lll_reduce(&q0, &mut trans).unwrap();
        // Shortest reduced vector has squared length 1: (1,0) survives, and
        // the second vector becomes (0,1) up to sign.
        assert_eq!(gram[0][0], Real::from_int(1));
        assert_eq!(gram[1][1], Real::from_int(1));
        let det = &trans[0][0] * &trans[1][1] - &trans[0][1] * &trans[1][0];
        assert!(det == Int::from(1) || det == Int::from(-1));
    }

    #[test]
    fn reduction_preserves_lattice() {
        // det of transform must be +-1 for a 3x3 example.
        let rows = [vec![5i64, 0, 0], vec![3, 1, 0], vec![7, 2, 1]];
        let q0 = gram_of(&rows);
        let mut trans = identity_transform(3);
        lll_reduce(&q0, &mut trans).unwrap();
        let det = det3(&trans);
        assert!(det == Int::from(1) || det == Int::from(-1));
    }

    fn det3(m: &[Vec<Int>]) -> Int {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }
}
