//! Hermite normal form and integer kernels.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Int;
use crate::{Error, Result};

/// Row-style Hermite normal form of a full-rank square integer matrix whose
/// rows span a lattice. The result is upper triangular with positive
/// diagonal and entries above each pivot reduced into [0, pivot). The form
/// is the unique canonical basis of the row lattice.
pub fn hnf_square(mut rows: Vec<Vec<Int>>) -> Result<Vec<Vec<Int>>> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::validation("HNF input must be square"));
    }
    for col in 0..d {
        // Clear column below the pivot row using gcd row operations.
        let pivot = col;
        loop {
            let mut best: Option<usize> = None;
            for (i, row) in rows.iter().enumerate().skip(pivot) {
                if !row[col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(j) => {
                            if row[col].abs() < rows[j][col].abs() {
                                Some(i)
                            } else {
                                Some(j)
                            }
                        }
                    };
                }
            }
            let Some(imin) = best else {
                return Err(Error::validation("HNF input is rank deficient"));
            };
            rows.swap(pivot, imin);
            let mut done = true;
            let pivot_val = rows[pivot][col].clone();
            for i in (pivot + 1)..d {
                if !rows[i][col].is_zero() {
                    let q = div_round(&rows[i][col], &pivot_val);
                    if !q.is_zero() {
                        for j in 0..d {
                            let s = &rows[pivot][j] * &q;
                            rows[i][j] -= s;
                        }
                    }
                    if !rows[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot][col].is_negative() {
            for j in 0..d {
                rows[pivot][j] = -rows[pivot][j].clone();
            }
        }
        // Reduce the entries above the pivot into [0, pivot).
        let pivot_val = rows[pivot][col].clone();
        for i in 0..pivot {
            let q = rows[i][col].div_floor(&pivot_val);
            if !q.is_zero() {
                for j in 0..d {
                    let s = &rows[pivot][j] * &q;
                    rows[i][j] -= s;
                }
            }
        }
    }
    Ok(rows)
}

/// Nearest-integer quotient, used to shrink remainders symmetrically.
fn div_round(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Basis of the left kernel {x : x A = 0} of an integer matrix A (rows x cols),
/// as rows. The returned vectors generate the full kernel lattice.
pub fn left_kernel(a: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    // Row-reduce [A | I] over Z; kernel rows are those whose A-part is zero.
    let mut work: Vec<Vec<Int>> = a.to_vec();
    let mut trans: Vec<Vec<Int>> = (0..rows)
        .map(|i| {
            let mut r = vec![Int::zero(); rows];
            r[i] = Int::one();
            r
        })
        .collect();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if !work[i][col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(j) => {
                            if work[i][col].abs() < work[j][col].abs() {
                                Some(i)
                            } else {
                                Some(j)
                            }
                        }
                    };
                }
            }
            let Some(imin) = best else { break };
            work.swap(pivot_row, imin);
            trans.swap(pivot_row, imin);
            let mut done = true;
            let pivot_val = work[pivot_row][col].clone();
            for i in (pivot_row + 1)..rows {
                if !work[i][col].is_zero() {
                    let q = div_round(&work[i][col], &pivot_val);
                    if !q.is_zero() {
                        for j in 0..cols {
                            let s = &work[pivot_row][j] * &q;
                            work[i][j] -= s;
                        }
                        for j in 0..trans[0].len() {
                            let s = &trans[pivot_row][j] * &q;
                            trans[i][j] -= s;
                        }
                    }
                    if !work[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !work[pivot_row][col].is_zero() {
            pivot_row += 1;
        }
    }
    let mut kernel = Vec::new();
    for i in 0..rows {
        if work[i].iter().all(|x| x.is_zero()) {
            kernel.push(trans[i].clone());
        }
    }
    kernel
}

/// Coordinates of v in terms of an upper-triangular HNF basis, if v lies in
/// the lattice.
pub fn hnf_coordinates(hnf: &[Vec<Int>], v: &[Int]) -> Option<Vec<Int>> {
    let d = hnf.len();
    let mut x = vec![Int::zero(); d];
    let mut rem: Vec<Int> = v.to_vec();
    for j in 0..d {
        let (q, r) = rem[j].div_rem(&hnf[j][j]);
        if !r.is_zero() {
            return None;
        }
        x[j] = q;
        for k in j..d {
            let s = &hnf[j][k] * &x[j];
            rem[k] -= s;
        }
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect()
    }

    #[test]
    fn hnf_canonical() {
        let h = hnf_square(m(&[&[2, 0], &[1, 2]])).unwrap();
        // Lattice {(2,0),(1,2)}: HNF is [[1, ...]] wait: det = 4, e1*2? Rows
        // span {(2,0),(1,2)}: contains (1,2), (2,0); canonical upper form:
        assert_eq!(h, m(&[&[1, 2], &[0, 4]]));
        let det: Int = (0..2).map(|i| h[i][i].clone()).product();
        assert_eq!(det, Int::from(4));
    }

    #[test]
    fn hnf_identity_and_rank() {
        assert_eq!(hnf_square(m(&[&[1, 0], &[0, 1]])).unwrap(), m(&[&[1, 0], &[0, 1]]));
        assert!(hnf_square(m(&[&[1, 2], &[2, 4]])).is_err());
    }

    #[test]
    fn hnf_same_lattice_same_form() {
        // Two bases of the same lattice yield the same HNF.
        let h1 = hnf_square(m(&[&[3, 1], &[1, 1]])).unwrap();
        let h2 = hnf_square(m(&[&[4, 2], &[1, 1]])).unwrap();
        assert_eq!(h1, h2);
    }

    #[test]
    fn kernel_of_congruence_matrix() {
        // x*A = 0 for A = [[2],[4]]: kernel contains (2,-1), (0, ... ) rank 1
        let a = m(&[&[2], &[4]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 1);
        let x = &k[0];
        let combo: Int = &x[0] * 2 + &x[1] * 4;
        assert!(combo.is_zero());
    }

    #[test]
    fn coordinates_roundtrip() {
        let h = hnf_square(m(&[&[1, 2], &[0, 4]])).unwrap();
        let v = m(&[&[3, 10]]).pop().unwrap(); // 3*(1,2) + 1*(0,4)
        let x = hnf_coordinates(&h, &v).unwrap();
        assert_eq!(x, alloc::vec![Int::from(3), Int::from(1)]);
        assert!(hnf_coordinates(&h, &m(&[&[0, 1]]).pop().unwrap()).is_none());
    }
}
