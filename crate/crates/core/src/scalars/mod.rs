//! Maximal rings of scalars of finite bilinear maps `f: M₁ × M₂ → N` over a
//! prime field.
//!
//! Over a field the conditions `(W_n)` collapse to one linear condition per
//! relation among the generators `f(e_i, e_j)` of `N`: a pair `(A, B)` in the
//! symmetric space survives iff every vector `c` with `Σ c_ij f(e_i, e_j) = 0`
//! also has `Σ c_ij f(A e_i, e_j) = 0`. Matrices act on the left on column
//! vectors.

pub mod fp;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::Ring;
use crate::element::{Algebra, LieElement};
use crate::error::{Error, Result};
use crate::hall::{basis_up_to, Alphabet};
use fp::{Fp, Matrix};

/// Largest enumeration either ring construction will attempt.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

/// A bilinear map given by its structure tensor `tensor[i][j] = f(e_i, e_j) ∈ F_p^{dN}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct FiniteBilinearInstance {
    p: u64,
    d1: usize,
    d2: usize,
    dn: usize,
    tensor: Vec<Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    p: u64,
    d1: usize,
    d2: usize,
    #[serde(rename = "dN")]
    dn: usize,
    tensor: Vec<Vec<Vec<u64>>>,
}

impl TryFrom<RawInstance> for FiniteBilinearInstance {
    type Error = Error;

    fn try_from(r: RawInstance) -> Result<Self> {
        FiniteBilinearInstance::new(r.p, r.d1, r.d2, r.dn, r.tensor)
    }
}

impl From<FiniteBilinearInstance> for RawInstance {
    fn from(i: FiniteBilinearInstance) -> Self {
        RawInstance { p: i.p, d1: i.d1, d2: i.d2, dn: i.dn, tensor: i.tensor }
    }
}

impl FiniteBilinearInstance {
    /// Validates shape, primality, non-degeneracy and ontoness.
    pub fn new(p: u64, d1: usize, d2: usize, dn: usize, tensor: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        if !fp::is_prime(p) || p > u64::from(u32::MAX) {
            return Err(Error::InvalidInstance(format!("{p} is not a supported prime")));
        }
        if d1 == 0 || d2 == 0 || dn == 0 {
            return Err(Error::InvalidInstance("dimensions must be positive".into()));
        }
        let shape_ok = tensor.len() == d1
            && tensor.iter().all(|row| row.len() == d2 && row.iter().all(|v| v.len() == dn && v.iter().all(|&x| x < p)));
        if !shape_ok {
            return Err(Error::InvalidInstance(format!(
                "tensor must have shape {d1}x{d2}x{dn} with entries below {p}"
            )));
        }
        let inst = FiniteBilinearInstance { p, d1, d2, dn, tensor };
        let field = inst.field();
        // Left annihilator of M₂: x with Σ_i x_i f(e_i, e_j) = 0 for all j.
        let left: Matrix = (0..d2)
            .flat_map(|j| (0..dn).map(move |t| (j, t)))
            .map(|(j, t)| (0..d1).map(|i| inst.tensor[i][j][t]).collect())
            .collect();
        if field.rank(&left, d1) < d1 {
            return Err(Error::InvalidInstance("f is degenerate: nonzero left annihilator".into()));
        }
        let right: Matrix = (0..d1)
            .flat_map(|i| (0..dn).map(move |t| (i, t)))
            .map(|(i, t)| (0..d2).map(|j| inst.tensor[i][j][t]).collect())
            .collect();
        if field.rank(&right, d2) < d2 {
            return Err(Error::InvalidInstance("f is degenerate: nonzero right annihilator".into()));
        }
        if field.rank(&inst.relation_matrix(), d1 * d2) < dn {
            return Err(Error::InvalidInstance("f is not onto N".into()));
        }
        Ok(inst)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d1, self.d2, self.dn)
    }

    pub fn tensor(&self) -> &[Vec<Vec<u64>>] {
        &self.tensor
    }

    fn field(&self) -> Fp {
        Fp { p: self.p }
    }

    /// `dN × (d1·d2)` matrix of `c ↦ Σ c_ij f(e_i, e_j)`.
    fn relation_matrix(&self) -> Matrix {
        (0..self.dn)
            .map(|t| {
                (0..self.d1).flat_map(|i| (0..self.d2).map(move |j| (i, j))).map(|(i, j)| self.tensor[i][j][t]).collect()
            })
            .collect()
    }

    /// `f(x, y)` for coordinate vectors.
    pub fn apply(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let field = self.field();
        let mut out = vec![0; self.dn];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let s = field.mul(xi, yj);
                for (o, &v) in out.iter_mut().zip(&self.tensor[i][j]) {
                    *o = field.add(*o, field.mul(s, v));
                }
            }
        }
        out
    }

    /// Constraint rows of condition (S) on the unknowns `(vec A, vec B)`.
    fn symmetry_rows(&self) -> Matrix {
        let field = self.field();
        let (d1, d2, dn) = (self.d1, self.d2, self.dn);
        let cols = d1 * d1 + d2 * d2;
        let mut rows = Vec::new();
        for i in 0..d1 {
            for j in 0..d2 {
                for t in 0..dn {
                    let mut row = vec![0; cols];
                    for k in 0..d1 {
                        row[k * d1 + i] = field.add(row[k * d1 + i], self.tensor[k][j][t]);
                    }
                    for l in 0..d2 {
                        let c = d1 * d1 + l * d2 + j;
                        row[c] = field.sub(row[c], self.tensor[i][l][t]);
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// Constraint rows of the W-closure on the unknowns `(vec A, vec B)`.
    fn closure_rows(&self) -> Matrix {
        let field = self.field();
        let (d1, d2, dn) = (self.d1, self.d2, self.dn);
        let cols = d1 * d1 + d2 * d2;
        let relations = field.nullspace(&self.relation_matrix(), d1 * d2);
        let mut rows = Vec::new();
        for c in &relations {
            for t in 0..dn {
                let mut row = vec![0; cols];
                for i in 0..d1 {
                    for k in 0..d1 {
                        let s = (0..d2).fold(0, |acc, j| field.add(acc, field.mul(c[i * d2 + j], self.tensor[k][j][t])));
                        row[k * d1 + i] = field.add(row[k * d1 + i], s);
                    }
                }
                rows.push(row);
            }
        }
        rows
    }

    fn split(&self, v: &[u64]) -> (Matrix, Matrix) {
        let (d1, d2) = (self.d1, self.d2);
        let a = (0..d1).map(|r| v[r * d1..(r + 1) * d1].to_vec()).collect();
        let b = (0..d2).map(|r| v[d1 * d1 + r * d2..d1 * d1 + (r + 1) * d2].to_vec()).collect();
        (a, b)
    }

    /// Pairs `(i, j)` whose values `f(e_i, e_j)` form a basis of `N`.
    fn spanning_pairs(&self) -> Vec<(usize, usize)> {
        let field = self.field();
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        let mut vecs: Matrix = Vec::new();
        for i in 0..self.d1 {
            for j in 0..self.d2 {
                let mut trial = vecs.clone();
                trial.push(self.tensor[i][j].clone());
                if field.rank(&trial, self.dn) > vecs.len() {
                    vecs = trial;
                    chosen.push((i, j));
                }
            }
        }
        chosen
    }

    /// The `σ` induced by `A`, defined on a spanning set of values and extended linearly.
    fn induced_sigma(&self, a: &Matrix) -> Result<Matrix> {
        let field = self.field();
        let pairs = self.spanning_pairs();
        // Columns: f(e_i, e_j) and f(A e_i, e_j) over the spanning pairs.
        let cols = |g: &dyn Fn(usize, usize) -> Vec<u64>| -> Matrix {
            let vs: Vec<Vec<u64>> = pairs.iter().map(|&(i, j)| g(i, j)).collect();
            (0..self.dn).map(|t| vs.iter().map(|v| v[t]).collect()).collect()
        };
        let f_s = cols(&|i, j| self.tensor[i][j].clone());
        let g_s = cols(&|i, j| self.apply(&column(a, i), &unit(self.d2, j)));
        let inv = field
            .inverse(&f_s)
            .ok_or_else(|| Error::Internal("spanning values are not independent".into()))?;
        Ok(field.matmul(&g_s, &inv))
    }

    /// Checks `f(Ax, y) = f(x, By) = σ f(x, y)` on all basis pairs.
    pub fn satisfies_eq1(&self, t: &ScalarTriple) -> bool {
        let field = self.field();
        (0..self.d1).all(|i| {
            (0..self.d2).all(|j| {
                let lhs = self.apply(&column(&t.a, i), &unit(self.d2, j));
                let mid = self.apply(&unit(self.d1, i), &column(&t.b, j));
                lhs == mid && lhs == field.mat_vec(&t.sigma, &self.tensor[i][j])
            })
        })
    }
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    (0..n).map(|k| u64::from(k == i)).collect()
}

fn column(m: &Matrix, i: usize) -> Vec<u64> {
    m.iter().map(|row| row[i]).collect()
}

/// Actions `(A, B, σ)` on `M₁`, `M₂` and `N`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScalarTriple {
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(rename = "B")]
    pub b: Matrix,
    pub sigma: Matrix,
}

/// A finite commutative ring of triples with tables indexed by position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteRingTable {
    pub p: u64,
    pub elements: Vec<ScalarTriple>,
    pub zero: usize,
    pub identity: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl FiniteRingTable {
    /// Sorts the triples into canonical order, builds both tables and checks
    /// closure, commutativity, associativity and the unit.
    pub fn build(p: u64, mut elements: Vec<ScalarTriple>) -> Result<Self> {
        let field = Fp { p };
        elements.sort();
        elements.dedup();
        let index: HashMap<&ScalarTriple, usize> = elements.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let find = |t: &ScalarTriple| {
            index.get(t).copied().ok_or_else(|| Error::Internal("ring of scalars is not closed".into()))
        };
        let first = elements.first().ok_or_else(|| Error::Internal("empty ring of scalars".into()))?;
        let (d1, d2, dn) = (first.a.len(), first.b.len(), first.sigma.len());
        let zero = find(&ScalarTriple { a: fp::zeros(d1, d1), b: fp::zeros(d2, d2), sigma: fp::zeros(dn, dn) })?;
        let identity = find(&ScalarTriple { a: fp::identity(d1), b: fp::identity(d2), sigma: fp::identity(dn) })?;
        let n = elements.len();
        let mut add = vec![vec![0; n]; n];
        let mut mul = vec![vec![0; n]; n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                add[i][j] = find(&ScalarTriple {
                    a: field.mat_add(&x.a, &y.a),
                    b: field.mat_add(&x.b, &y.b),
                    sigma: field.mat_add(&x.sigma, &y.sigma),
                })?;
                mul[i][j] = find(&ScalarTriple {
                    a: field.matmul(&x.a, &y.a),
                    b: field.matmul(&x.b, &y.b),
                    sigma: field.matmul(&x.sigma, &y.sigma),
                })?;
            }
        }
        let table = FiniteRingTable { p, elements, zero, identity, add, mul };
        if !table.is_commutative() || !table.is_associative() || !table.is_unital() {
            return Err(Error::Internal("ring of scalars fails a ring law".into()));
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.mul[i][j] == self.mul[j][i] && self.add[i][j] == self.add[j][i]))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    self.mul[self.mul[i][j]][k] == self.mul[i][self.mul[j][k]]
                        && self.add[self.add[i][j]][k] == self.add[i][self.add[j][k]]
                })
            })
        })
    }

    pub fn is_unital(&self) -> bool {
        (0..self.len()).all(|i| self.mul[self.identity][i] == i && self.add[self.zero][i] == i)
    }

    /// The map `k ↦ k·1` as indices, when it is a ring isomorphism `F_p → self`.
    pub fn prime_field_isomorphism(&self) -> Option<Vec<usize>> {
        let p = self.p as usize;
        if self.len() != p {
            return None;
        }
        let mut image = vec![self.zero];
        for k in 1..p {
            image.push(self.add[image[k - 1]][self.identity]);
        }
        let mut seen = image.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != p {
            return None;
        }
        let ok = (0..p).all(|x| {
            (0..p).all(|y| self.add[image[x]][image[y]] == image[(x + y) % p] && self.mul[image[x]][image[y]] == image[x * y % p])
        });
        ok.then_some(image)
    }
}

/// Basis of the space of pairs `(A, B)` with `f(Ax, y) = f(x, By)`.
pub fn sym_space(inst: &FiniteBilinearInstance) -> Vec<(Matrix, Matrix)> {
    let cols = inst.d1 * inst.d1 + inst.d2 * inst.d2;
    inst.field().nullspace(&inst.symmetry_rows(), cols).iter().map(|v| inst.split(v)).collect()
}

/// Basis of the W-closed part of the symmetric space.
pub fn psw_basis(inst: &FiniteBilinearInstance) -> Vec<(Matrix, Matrix)> {
    let cols = inst.d1 * inst.d1 + inst.d2 * inst.d2;
    let mut rows = inst.symmetry_rows();
    rows.extend(inst.closure_rows());
    inst.field().nullspace(&rows, cols).iter().map(|v| inst.split(v)).collect()
}

/// The ring `P_SW(f)` of triples `(A, B, σ)`, with `σ` induced from `A`.
pub fn psw_space(inst: &FiniteBilinearInstance) -> Result<FiniteRingTable> {
    let field = inst.field();
    let basis = psw_basis(inst);
    let size = checked_size(inst.p, basis.len() as u32)?;
    let (d1, d2) = (inst.d1, inst.d2);
    let mut elements = Vec::with_capacity(size as usize);
    for n in 0..size {
        let (mut a, mut b) = (fp::zeros(d1, d1), fp::zeros(d2, d2));
        let mut rest = n;
        for (ba, bb) in &basis {
            let c = rest % inst.p;
            rest /= inst.p;
            if c == 0 {
                continue;
            }
            a = field.mat_add(&a, &scale(field, ba, c));
            b = field.mat_add(&b, &scale(field, bb, c));
        }
        let sigma = inst.induced_sigma(&a)?;
        let t = ScalarTriple { a, b, sigma };
        if !inst.satisfies_eq1(&t) {
            return Err(Error::Internal("induced sigma violates the defining identity".into()));
        }
        elements.push(t);
    }
    FiniteRingTable::build(inst.p, elements)
}

fn scale(field: Fp, m: &Matrix, c: u64) -> Matrix {
    m.iter().map(|r| r.iter().map(|&x| field.mul(x, c)).collect()).collect()
}

fn checked_size(p: u64, exp: u32) -> Result<u64> {
    p.checked_pow(exp)
        .filter(|&s| s <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{p}^{exp} elements exceeds the enumeration limit")))
}

fn matrix_from_index(p: u64, rows: usize, cols: usize, mut n: u64) -> Matrix {
    let mut m = fp::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m[r][c] = n % p;
            n /= p;
        }
    }
    m
}

/// Exhaustive search over all `(A, B, σ)` satisfying the defining identity.
pub fn brute_force_psw(inst: &FiniteBilinearInstance) -> Result<FiniteRingTable> {
    let (d1, d2, dn, p) = (inst.d1, inst.d2, inst.dn, inst.p);
    let total = (d1 * d1 + d2 * d2 + dn * dn) as u32;
    checked_size(p, total)?;
    let field = inst.field();
    let (na, nb, ns) = (p.pow((d1 * d1) as u32), p.pow((d2 * d2) as u32), p.pow((dn * dn) as u32));
    let left_ok = |a: &Matrix, s: &Matrix| {
        (0..d1).all(|i| {
            (0..d2).all(|j| inst.apply(&column(a, i), &unit(d2, j)) == field.mat_vec(s, &inst.tensor[i][j]))
        })
    };
    let right_ok = |b: &Matrix, s: &Matrix| {
        (0..d1).all(|i| {
            (0..d2).all(|j| inst.apply(&unit(d1, i), &column(b, j)) == field.mat_vec(s, &inst.tensor[i][j]))
        })
    };
    let found: Vec<ScalarTriple> = (0..na)
        .into_par_iter()
        .flat_map_iter(|ia| {
            let a = matrix_from_index(p, d1, d1, ia);
            let mut out = Vec::new();
            for is in 0..ns {
                let s = matrix_from_index(p, dn, dn, is);
                if !left_ok(&a, &s) {
                    continue;
                }
                for ib in 0..nb {
                    let b = matrix_from_index(p, d2, d2, ib);
                    if right_ok(&b, &s) {
                        out.push(ScalarTriple { a: a.clone(), b, sigma: s.clone() });
                    }
                }
            }
            out
        })
        .collect();
    FiniteRingTable::build(p, found)
}

/// The map `L/Ann(L) × L/Ann(L) → L²` induced by the bracket of the free Lie
/// algebra on `k` generators over `F_p`, truncated above degree `max_degree`.
pub fn truncated_free_lie_instance(k: usize, p: u64, max_degree: usize) -> Result<FiniteBilinearInstance> {
    if k < 2 {
        return Err(Error::InvalidInstance("a free Lie algebra of rank one is abelian; the bracket map is degenerate".into()));
    }
    if max_degree < 2 {
        return Err(Error::InvalidInstance("truncation degree must be at least 2".into()));
    }
    if !fp::is_prime(p) {
        return Err(Error::InvalidInstance(format!("{p} is not prime")));
    }
    let field = Fp { p };
    let names: Vec<String> = (0..k).map(|i| format!("x{}", i + 1)).collect();
    let algebra = Algebra::new(Alphabet::new(&names)?, Ring::Z);
    let basis = basis_up_to(k, max_degree);
    let n = basis.len();
    let pos: HashMap<_, _> = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let pbig = num_bigint::BigInt::from(p);
    // c[i][j] = [e_i, e_j] truncated and reduced mod p.
    let mut c = vec![vec![vec![0u64; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || basis[i].degree() + basis[j].degree() > max_degree {
                continue;
            }
            let ei = LieElement::basis(&algebra, basis[i].clone());
            let ej = LieElement::basis(&algebra, basis[j].clone());
            for (w, coeff) in ei.bracket(&ej)?.terms() {
                let r = num_integer::Integer::mod_floor(coeff.numer(), &pbig);
                c[i][j][pos[w]] = u64::try_from(r).expect("residue fits");
            }
        }
    }
    let ann_rows: Matrix = (0..n)
        .flat_map(|j| (0..n).map(move |t| (j, t)))
        .map(|(j, t)| (0..n).map(|i| c[i][j][t]).collect())
        .collect();
    let mut span = field.nullspace(&ann_rows, n);
    let mut reps = Vec::new();
    for i in 0..n {
        let mut trial = span.clone();
        trial.push(unit(n, i));
        if field.rank(&trial, n) > span.len() {
            span = trial;
            reps.push(i);
        }
    }
    let mut l2: Matrix = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut trial = l2.clone();
            trial.push(c[i][j].clone());
            if field.rank(&trial, n) > l2.len() {
                l2 = trial;
            }
        }
    }
    let dn = l2.len();
    let mut tensor = vec![vec![Vec::new(); reps.len()]; reps.len()];
    for (a, &i) in reps.iter().enumerate() {
        for (b, &j) in reps.iter().enumerate() {
            tensor[a][b] = coordinates(field, &l2, &c[i][j])
                .ok_or_else(|| Error::Internal("bracket outside the span of L^2".into()))?;
        }
    }
    FiniteBilinearInstance::new(p, reps.len(), reps.len(), dn, tensor)
}

/// Coordinates of `v` in the independent vectors `basis`.
fn coordinates(field: Fp, basis: &Matrix, v: &[u64]) -> Option<Vec<u64>> {
    let m = basis.len();
    let mut aug: Matrix = (0..v.len())
        .map(|t| {
            let mut row: Vec<u64> = basis.iter().map(|b| b[t]).collect();
            row.push(v[t]);
            row
        })
        .collect();
    let pivots = field.rref(&mut aug, m + 1);
    if pivots.contains(&m) {
        return None;
    }
    let mut x = vec![0; m];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = aug[r][m];
    }
    Some(x)
}

/// Every valid instance with the given prime and dimensions, in tensor-index order.
pub fn all_instances(p: u64, d1: usize, d2: usize, dn: usize) -> Vec<FiniteBilinearInstance> {
    let entries = (d1 * d2 * dn) as u32;
    (0..p.pow(entries))
        .filter_map(|mut n| {
            let mut tensor = vec![vec![vec![0; dn]; d2]; d1];
            for row in tensor.iter_mut() {
                for v in row.iter_mut() {
                    for x in v.iter_mut() {
                        *x = n % p;
                        n /= p;
                    }
                }
            }
            FiniteBilinearInstance::new(p, d1, d2, dn, tensor).ok()
        })
        .collect()
}

/// The dot product `F_p^d × F_p^d → F_p`.
pub fn dot_product_instance(p: u64, d: usize) -> Result<FiniteBilinearInstance> {
    let tensor = (0..d).map(|i| (0..d).map(|j| vec![u64::from(i == j)]).collect()).collect();
    FiniteBilinearInstance::new(p, d, d, 1, tensor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating(p: u64) -> FiniteBilinearInstance {
        let m1 = p - 1;
        FiniteBilinearInstance::new(p, 2, 2, 1, vec![vec![vec![0], vec![1]], vec![vec![m1], vec![0]]]).unwrap()
    }

    fn multiplication(p: u64) -> FiniteBilinearInstance {
        FiniteBilinearInstance::new(p, 1, 1, 1, vec![vec![vec![1]]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(matches!(
            FiniteBilinearInstance::new(2, 2, 2, 1, vec![vec![vec![0], vec![0]], vec![vec![0], vec![0]]]),
            Err(Error::InvalidInstance(_))
        ));
        assert!(FiniteBilinearInstance::new(4, 1, 1, 1, vec![vec![vec![1]]]).is_err());
        assert!(FiniteBilinearInstance::new(2, 1, 1, 2, vec![vec![vec![1, 0]]]).is_err());
        let json = r#"{"p": 2, "d1": 2, "d2": 2, "dN": 1, "tensor": [[[0],[1]],[[1],[0]]]}"#;
        let inst: FiniteBilinearInstance = serde_json::from_str(json).unwrap();
        assert_eq!(inst, alternating(2));
        let back: FiniteBilinearInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn symmetric_spaces() {
        assert_eq!(sym_space(&alternating(2)).len(), 4);
        assert_eq!(sym_space(&multiplication(3)).len(), 1);
    }

    #[test]
    fn rings() {
        let alt = psw_space(&alternating(2)).unwrap();
        assert_eq!(alt.len(), 2);
        assert_eq!(alt, brute_force_psw(&alternating(2)).unwrap());
        let m3 = psw_space(&multiplication(3)).unwrap();
        assert_eq!(m3.len(), 3);
        assert!(m3.prime_field_isomorphism().is_some());
        assert_eq!(brute_force_psw(&multiplication(2)).unwrap().len(), 2);
        for p in [2, 3] {
            assert_eq!(brute_force_psw(&multiplication(p)).unwrap().len() as u64, p);
        }
    }

    #[test]
    fn lie_instances() {
        let i = truncated_free_lie_instance(2, 2, 2).unwrap();
        assert_eq!(i.dims(), (2, 2, 1));
        assert_eq!(i.tensor()[0][1], vec![1]);
        let i = truncated_free_lie_instance(2, 3, 3).unwrap();
        assert_eq!(i.dims(), (3, 3, 3));
        let r = psw_space(&truncated_free_lie_instance(2, 3, 2).unwrap()).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.prime_field_isomorphism().is_some());
        assert!(matches!(truncated_free_lie_instance(1, 2, 3), Err(Error::InvalidInstance(_))));
    }
}
