//! Exact Gaussian elimination over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// Exactly one solution.
    Unique(Vec<BigRational>),
    /// Solvable with free columns. `particular` sets them to zero; `kernel`
    /// holds one null vector per free column.
    Free { particular: Vec<BigRational>, kernel: Vec<Vec<BigRational>> },
    Inconsistent,
}

/// Solves `A x = b` where `rows` holds `A` row-major with `cols` columns.
pub fn solve(mut rows: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>, cols: usize) -> Solution {
    debug_assert_eq!(rows.len(), rhs.len());
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        for x in rows[r][c..].iter_mut() {
            *x *= &inv;
        }
        rhs[r] *= &inv;
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..cols {
                if !rows[r][j].is_zero() {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
            let t = &rhs[r] * &f;
            rhs[i] -= t;
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rhs[r..].iter().any(|x| !x.is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i].clone();
    }
    if pivots.len() == cols {
        return Solution::Unique(x);
    }
    let kernel = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut k = vec![BigRational::zero(); cols];
            k[f] = BigRational::one();
            for (i, &c) in pivots.iter().enumerate() {
                k[c] = -rows[i][f].clone();
            }
            k
        })
        .collect();
    Solution::Free { particular: x, kernel }
}

/// Smallest `t >= 0` such that `p + t*k` has integer entries, if any exists.
///
/// With `k` rescaled to a primitive integer vector and `D` the common
/// denominator of `p`, integral points occur at `t = j/D` and repeat with
/// period one, so it suffices to solve `j*k_i ≡ -D*p_i (mod D)` for all `i`.
pub fn integral_shift(p: &[BigRational], k: &[BigRational]) -> Option<BigRational> {
    let kden = k.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut kint: Vec<BigInt> = k.iter().map(|x| (x * BigRational::from_integer(kden.clone())).to_integer()).collect();
    let g = kint.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in kint.iter_mut() {
            *x = &*x / &g;
        }
    }
    let d = p.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let (mut r, mut m) = (BigInt::zero(), BigInt::one());
    for (pi, ki) in p.iter().zip(&kint) {
        let b = (-(pi * BigRational::from_integer(d.clone())).to_integer()).mod_floor(&d);
        let a = ki.mod_floor(&d);
        let g = a.gcd(&d);
        if !b.is_multiple_of(&g) {
            return None;
        }
        let m2 = &d / &g;
        let r2 = if m2.is_one() {
            BigInt::zero()
        } else {
            let inv = (&a / &g).extended_gcd(&m2).x.mod_floor(&m2);
            ((&b / &g) * inv).mod_floor(&m2)
        };
        // Combine j ≡ r (mod m) with j ≡ r2 (mod m2).
        let e = m.extended_gcd(&m2);
        let diff = &r2 - &r;
        if !diff.is_multiple_of(&e.gcd) {
            return None;
        }
        let lcm = &m / &e.gcd * &m2;
        r = (&r + &m * ((&diff / &e.gcd) * &e.x)).mod_floor(&lcm);
        m = lcm;
    }
    let t = BigRational::new(r, d) * BigRational::new(kden, g);
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn unique_inconsistent_free() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)], vec![q(3), q(4)]];
        assert_eq!(solve(a.clone(), vec![q(3), q(4), q(7)], 2), Solution::Unique(vec![q(1), q(1)]));
        assert_eq!(solve(a, vec![q(3), q(4), q(8)], 2), Solution::Inconsistent);
        let b = vec![vec![q(1), q(1)]];
        assert_eq!(
            solve(b, vec![q(2)], 2),
            Solution::Free { particular: vec![q(2), q(0)], kernel: vec![vec![q(-1), q(1)]] }
        );
    }

    #[test]
    fn rational_solution() {
        let a = vec![vec![q(2)]];
        let Solution::Unique(x) = solve(a, vec![q(1)], 1) else { panic!() };
        assert_eq!(x[0], BigRational::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn integral_points_on_lines() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let t = integral_shift(&[r(1, 2), r(0, 1)], &[r(1, 1), r(2, 1)]).unwrap();
        assert_eq!(t, r(1, 2));
        assert_eq!(integral_shift(&[r(1, 2), r(1, 2)], &[r(1, 1), r(0, 1)]), None);
        let t = integral_shift(&[r(1, 3), r(2, 3)], &[r(2, 3), r(4, 3)]).unwrap();
        let pt: Vec<_> = [r(1, 3), r(2, 3)].iter().zip([r(2, 3), r(4, 3)]).map(|(p, k)| p + &t * k).collect();
        assert!(pt.iter().all(|x| x.is_integer()), "{pt:?}");
        assert_eq!(integral_shift(&[r(3, 1)], &[r(5, 1)]), Some(r(0, 1)));
    }
}
