//! Chinese remainder solving over arbitrary-precision integers.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Int;
use crate::{Error, Result};

/// Solves x = r_k (mod m_k) for all k, returning the least non-negative
/// solution. Moduli need not be coprime; inconsistent systems error.
/// For pairwise coprime moduli the solution is unique in [0, prod m_k).
pub fn crt_solve(congruences: &[(Int, Int)]) -> Result<Int> {
    let mut x = Int::zero();
    let mut m = Int::one();
    for (modulus, residue) in congruences {
        if !modulus.is_positive() {
            return Err(Error::validation("CRT modulus must be positive"));
        }
        let (nx, nm) = merge(&x, &m, residue, modulus)?;
        x = nx;
        m = nm;
    }
    Ok(x)
}

/// Merges x = a (mod m) with x = b (mod n).
fn merge(a: &Int, m: &Int, b: &Int, n: &Int) -> Result<(Int, Int)> {
    let g = m.extended_gcd(n);
    // g.gcd = m*g.x + n*g.y
    let diff = b - a;
    let (q, r) = diff.div_rem(&g.gcd);
    if !r.is_zero() {
        return Err(Error::Inconsistent(alloc::format!(
            "congruences disagree modulo gcd {}",
            g.gcd
        )));
    }
    let lcm = (m / &g.gcd) * n;
    // x = a + m * x0 * (diff / gcd)
    let step = (m * &g.x * q) % &lcm;
    let mut x = (a + step) % &lcm;
    if x.is_negative() {
        x += &lcm;
    }
    Ok((x, lcm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(n: i64) -> Int {
        Int::from(n)
    }

    #[test]
    fn simple_pairs() {
        // x = 1 (2), x = 2 (3) -> 5
        assert_eq!(crt_solve(&[(i(2), i(1)), (i(3), i(2))]).unwrap(), i(5));
        // single congruence
        assert_eq!(crt_solve(&[(i(5), i(0))]).unwrap(), i(0));
        // empty system
        assert_eq!(crt_solve(&[]).unwrap(), i(0));
    }

    #[test]
    fn prime_powers() {
        // x = 3 (8), x = 5 (27): brute force over 0..216 gives 59
        let brute = (0..216)
            .find(|x| x % 8 == 3 && x % 27 == 5)
            .unwrap();
        assert_eq!(brute, 59);
        assert_eq!(crt_solve(&[(i(8), i(3)), (i(27), i(5))]).unwrap(), i(59));
    }

    #[test]
    fn non_coprime() {
        // consistent: x = 2 (4), x = 6 (8) -> 6 mod 8
        assert_eq!(crt_solve(&[(i(4), i(2)), (i(8), i(6))]).unwrap(), i(6));
        // inconsistent: x = 1 (2), x = 0 (4)
        assert!(crt_solve(&[(i(2), i(1)), (i(4), i(0))]).is_err());
    }

    #[test]
    fn negative_residues() {
        let x = crt_solve(&[(i(7), i(-3)), (i(11), i(5))]).unwrap();
        assert!(x >= i(0) && x < i(77));
        assert_eq!((&x % 7i64 + 7) % 7, i(4));
        assert_eq!(&x % 11i64, i(5));
    }

    #[test]
    fn randomized_against_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m1 = [2i64, 3, 4, 5, 7, 8, 9][rng.gen_range(0..7)];
            let m2 = [3i64, 5, 7, 11, 13][rng.gen_range(0..5)];
            let r1 = rng.gen_range(0..m1);
            let r2 = rng.gen_range(0..m2);
            let got = crt_solve(&[(i(m1), i(r1)), (i(m2), i(r2))]);
            let brute = (0..m1 * m2).find(|x| x % m1 == r1 && x % m2 == r2);
            match (got, brute) {
                (Ok(x), Some(b)) => assert_eq!(x, i(b)),
                (Err(_), None) => {}
                (got, brute) => panic!("mismatch: got {got:?}, brute {brute:?}"),
            }
        }
    }
}
