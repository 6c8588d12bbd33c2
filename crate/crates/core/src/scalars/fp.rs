//! Linear algebra over a prime field `F_p` with `u64` residues.

/// Matrix stored row-major.
pub type Matrix = Vec<Vec<u64>>;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Reduces a signed integer.
    pub fn reduce(self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Row-reduces in place, pivoting only in the first `cols` columns and
    /// carrying any further (augmented) columns along; returns the pivot columns.
    pub fn rref(self, rows: &mut Matrix, cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, p);
            let inv = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..rows[r].len() {
                        let t = self.mul(f, rows[r][j]);
                        rows[i][j] = self.sub(rows[i][j], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        pivots
    }

    pub fn rank(self, rows: &Matrix, cols: usize) -> usize {
        let mut m = rows.clone();
        self.rref(&mut m, cols).len()
    }

    /// Basis of `{x : rows·x = 0}`, one vector per free column in increasing order.
    pub fn nullspace(self, rows: &Matrix, cols: usize) -> Matrix {
        let mut m = rows.clone();
        let pivots = self.rref(&mut m, cols);
        (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![0; cols];
                v[f] = 1;
                for (i, &c) in pivots.iter().enumerate() {
                    v[c] = self.neg(m[i][f]);
                }
                v
            })
            .collect()
    }

    pub fn matmul(self, a: &Matrix, b: &Matrix) -> Matrix {
        let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
        let mut out = vec![vec![0; m]; n];
        for i in 0..n {
            for l in 0..k {
                if a[i][l] == 0 {
                    continue;
                }
                for j in 0..m {
                    out[i][j] = self.add(out[i][j], self.mul(a[i][l], b[l][j]));
                }
            }
        }
        out
    }

    pub fn mat_vec(self, a: &Matrix, x: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|row| row.iter().zip(x).fold(0, |acc, (r, v)| self.add(acc, self.mul(*r, *v))))
            .collect()
    }

    pub fn mat_add(self, a: &Matrix, b: &Matrix) -> Matrix {
        a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| self.add(*x, *y)).collect()).collect()
    }

    pub fn inverse(self, a: &Matrix) -> Option<Matrix> {
        let n = a.len();
        let mut aug: Matrix = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        let pivots = self.rref(&mut aug, n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

pub fn zeros(n: usize, m: usize) -> Matrix {
    vec![vec![0; m]; n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn nullspace_and_inverse() {
        let f = Fp { p: 5 };
        let a = vec![vec![1, 2, 3], vec![0, 1, 1]];
        let ns = f.nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(f.mat_vec(&a, &ns[0]).iter().all(|&x| x == 0));
        let m = vec![vec![2, 1], vec![1, 1]];
        let inv = f.inverse(&m).unwrap();
        assert_eq!(f.matmul(&m, &inv), identity(2));
        assert_eq!(f.inverse(&vec![vec![1, 2], vec![2, 4]]), None);
        assert_eq!(f.inv(3), 2);
        assert_eq!(f.reduce(-1), 4);
    }
}
