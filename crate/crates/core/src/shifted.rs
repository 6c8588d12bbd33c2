//! The shifted-product calculus `u(v+α) = uv + αu`.
//!
//! Chains fold left to right: `u(v+α₁)(v+α₂) = (u(v+α₁))(v+α₂)`. In a free Lie
//! algebra the map `u ↦ u(v+α)` is injective for `v ≠ 0`, which makes exact
//! division well defined.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::coeff::{Coefficient, Ring};
use crate::element::{Algebra, LieElement};
use crate::error::{Error, Result};
use crate::hall::{basis_up_to, bracketing_of, Bracketing, LyndonWord};
use crate::linalg::{self, Solution};

/// A factor `(v + α)` of a shifted chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedFactor {
    pub v: LieElement,
    pub alpha: Coefficient,
}

impl ShiftedFactor {
    pub fn apply(&self, u: &LieElement) -> Result<LieElement> {
        shift_once(u, &self.v, &self.alpha)
    }
}

/// `u(v+α) = [u, v] + α·u`
pub fn shift_once(u: &LieElement, v: &LieElement, alpha: &Coefficient) -> Result<LieElement> {
    u.ring().check(alpha)?;
    Ok(&u.bracket(v)? + &u.scaled(alpha))
}

/// `(…((u(v+α₁))(v+α₂))…)(v+αₙ)`; returns `u` for an empty list.
pub fn shifted_chain(u: &LieElement, v: &LieElement, alphas: &[Coefficient]) -> Result<LieElement> {
    u.check_same_algebra(v)?;
    alphas.iter().try_fold(u.clone(), |acc, a| shift_once(&acc, v, a))
}

/// Expresses `target` in the span of `images` over `Q`.
pub(crate) fn solve_combination(images: &[LieElement], target: &LieElement) -> Solution {
    let mut rows: HashMap<&LyndonWord, usize> = HashMap::new();
    let mut order: Vec<&LyndonWord> = Vec::new();
    for w in images.iter().flat_map(|e| e.terms().keys()).chain(target.terms().keys()) {
        rows.entry(w).or_insert_with(|| {
            order.push(w);
            order.len() - 1
        });
    }
    let zero = Coefficient::zero().as_rational().clone();
    let mut a = vec![vec![zero.clone(); images.len()]; order.len()];
    for (j, img) in images.iter().enumerate() {
        for (w, c) in img.terms() {
            a[rows[w]][j] = c.as_rational().clone();
        }
    }
    let mut b = vec![zero; order.len()];
    for (w, c) in target.terms() {
        b[rows[w]] = c.as_rational().clone();
    }
    linalg::solve(a, b, images.len())
}

fn combine(algebra: &Arc<Algebra>, basis: &[LyndonWord], coords: &[num_rational::BigRational]) -> LieElement {
    let terms: BTreeMap<LyndonWord, Coefficient> = basis
        .iter()
        .zip(coords)
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(w, c)| (w.clone(), Coefficient::from_rational(c.clone())))
        .collect();
    LieElement::from_raw(algebra, terms)
}

/// A `u` with `u(v+α) = target`, if one exists over the algebra's ring.
///
/// A nonzero image `u(v+α)` never has smaller weight than `u`, so the unknown
/// coordinates range over basis elements of degree at most `weight(target)`.
/// The system is solved over `Q`; over `Z` the solution is kept only if it is
/// integral.
///
/// For `α ≠ 0` the solution is unique. For `α = 0` it is determined only up to
/// the centralizer of `v`; the returned `u` is the solution whose coordinate on
/// the free basis column is zero, or over `Z` the integral solution reached by
/// the smallest nonnegative step along the centralizer.
pub fn divide_shifted(target: &LieElement, v: &LieElement, alpha: &Coefficient) -> Result<Option<LieElement>> {
    let max_degree = target.weight().map_err(|_| Error::InvalidDivision("target is zero"))?;
    divide_shifted_within(target, v, alpha, max_degree)
}

/// [`divide_shifted`] with an explicit degree bound on the unknown quotient.
pub fn divide_shifted_within(
    target: &LieElement,
    v: &LieElement,
    alpha: &Coefficient,
    max_degree: usize,
) -> Result<Option<LieElement>> {
    target.check_same_algebra(v)?;
    if target.is_zero() {
        return Err(Error::InvalidDivision("target is zero"));
    }
    if v.is_zero() {
        return Err(Error::InvalidDivision("divisor v is zero"));
    }
    target.ring().check(alpha)?;
    let algebra = target.algebra();
    let basis = basis_up_to(algebra.rank(), max_degree);
    let images = basis
        .iter()
        .map(|w| shift_once(&LieElement::basis(algebra, w.clone()), v, alpha))
        .collect::<Result<Vec<_>>>()?;
    let coords = match solve_combination(&images, target) {
        Solution::Inconsistent => return Ok(None),
        Solution::Unique(x) => x,
        Solution::Free { particular, kernel } => {
            // Only α = 0 has a kernel: the centralizer of v, which is one-dimensional.
            let [k] = kernel.as_slice() else {
                return Err(Error::Internal("shifted multiplication has a kernel of dimension > 1".into()));
            };
            if algebra.ring() == Ring::Q || particular.iter().all(|x| x.is_integer()) {
                particular
            } else {
                match linalg::integral_shift(&particular, k) {
                    Some(t) => particular.iter().zip(k).map(|(p, k)| p + &t * k).collect(),
                    None => return Ok(None),
                }
            }
        }
    };
    let u = combine(algebra, &basis, &coords);
    if algebra.ring() == Ring::Z && !u.is_integral() {
        return Ok(None);
    }
    if &shift_once(&u, v, alpha)? != target {
        return Err(Error::Internal("quotient does not re-multiply to the target".into()));
    }
    Ok(Some(u))
}

/// Certificate `γ·u = w(v+α₁)…(v+αₙ)` with `γ ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessGammaW {
    pub gamma: Coefficient,
    pub w: LieElement,
}

/// Builds `(γ, w)` from solutions `u = u_i(v+α_i)` with pairwise distinct `α_i`.
///
/// Recursion: one pair gives `(1, u₁)`; two give `(α₂−α₁, u₁−u₂)`; for `n ≥ 3`
/// solve on `{1..n−1}` for `(γ₁, w₁)` and on `{1..n−2, n}` for `(γ₂, w₂)` and
/// return `((αₙ−αₙ₋₁)γ₁γ₂, γ₂w₁ − γ₁w₂)`. The factor `αₙ−αₙ₋₁` is kept in `γ`
/// rather than inverted, so the certificate stays inside the ring.
pub fn main_lemma_witness(v: &LieElement, pairs: &[(Coefficient, LieElement)]) -> Result<WitnessGammaW> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("at least one (alpha, u) pair is required".into()));
    }
    for (i, (a, ui)) in pairs.iter().enumerate() {
        v.check_same_algebra(ui)?;
        v.ring().check(a)?;
        if pairs[..i].iter().any(|(b, _)| b == a) {
            return Err(Error::RepeatedShift(a.to_string()));
        }
    }
    let common = shift_once(&pairs[0].1, v, &pairs[0].0)?;
    for (a, ui) in &pairs[1..] {
        if shift_once(ui, v, a)? != common {
            return Err(Error::InconsistentInput(format!("u_i(v+{a}) differs from u_1(v+{})", pairs[0].0)));
        }
    }
    if common.is_zero() {
        return Err(Error::InconsistentInput("the common value u is zero".into()));
    }
    let idx: Vec<usize> = (0..pairs.len()).collect();
    let (gamma, w) = witness_rec(pairs, &idx);
    let alphas: Vec<Coefficient> = pairs.iter().map(|(a, _)| a.clone()).collect();
    if gamma.is_zero() || shifted_chain(&w, v, &alphas)? != common.scaled(&gamma) {
        return Err(Error::Internal("witness failed re-expansion".into()));
    }
    Ok(WitnessGammaW { gamma, w })
}

fn witness_rec(pairs: &[(Coefficient, LieElement)], idx: &[usize]) -> (Coefficient, LieElement) {
    let n = idx.len();
    match n {
        1 => (Coefficient::one(), pairs[idx[0]].1.clone()),
        2 => {
            let (a1, u1) = &pairs[idx[0]];
            let (a2, u2) = &pairs[idx[1]];
            (a2 - a1, u1 - u2)
        }
        _ => {
            let (g1, w1) = witness_rec(pairs, &idx[..n - 1]);
            let mut second = idx[..n - 2].to_vec();
            second.push(idx[n - 1]);
            let (g2, w2) = witness_rec(pairs, &second);
            let delta = &pairs[idx[n - 1]].0 - &pairs[idx[n - 2]].0;
            let gamma = &(&delta * &g1) * &g2;
            (gamma, &w1.scaled(&g2) - &w2.scaled(&g1))
        }
    }
}

/// One summand `[z, x]` of a decomposition `p = Σ [z_i, x_i]`, with `x` given
/// by its index into the generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub z: LieElement,
    pub gen_index: usize,
}

fn tree_element(algebra: &Arc<Algebra>, tree: &Bracketing) -> LieElement {
    match tree {
        Bracketing::Letter(c) => LieElement::basis(algebra, LyndonWord::letter(*c)),
        Bracketing::Node(l, r) => tree_element(algebra, l)
            .bracket(&tree_element(algebra, r))
            .expect("same algebra"),
    }
}

/// Rewrites `[u, v]` for a bracket tree `v` into summands `[z, x]` with `x` a
/// generator, by induction on `v`: `u(v₁v₂) = (v₂u)v₁ + (uv₁)v₂`.
/// Returns `false` if a leaf letter is not among the generators.
fn reduce(
    algebra: &Arc<Algebra>,
    u: LieElement,
    v: &Bracketing,
    letter_gen: &HashMap<u8, usize>,
    out: &mut Vec<Summand>,
) -> bool {
    if u.is_zero() {
        return true;
    }
    match v {
        Bracketing::Letter(c) => match letter_gen.get(c) {
            Some(&i) => {
                out.push(Summand { z: u, gen_index: i });
                true
            }
            None => false,
        },
        Bracketing::Node(v1, v2) => {
            let e1 = tree_element(algebra, v1);
            let e2 = tree_element(algebra, v2);
            let whole = e1.bracket(&e2).expect("same algebra");
            if u.bracket(&whole).expect("same algebra").is_zero() {
                return true;
            }
            let left = e2.bracket(&u).expect("same algebra");
            let right = u.bracket(&e1).expect("same algebra");
            reduce(algebra, left, v1, letter_gen, out) && reduce(algebra, right, v2, letter_gen, out)
        }
    }
}

/// Writes `p ∈ L²` as `Σ [z_i, x_i]` over the given generators.
///
/// Each basis term is rewritten by the inductive procedure on its bracketing.
/// A homogeneous piece that reaches a letter missing from `gens` is solved
/// directly as a linear system in the coordinates of the `z_i`; if that has no
/// solution the piece is reported as the failure witness. Summands are merged
/// per generator and returned in generator order.
pub fn decompose_l2(p: &LieElement, gens: &[LieElement]) -> Result<Vec<Summand>> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("generator list is empty".into()));
    }
    for g in gens {
        p.check_same_algebra(g)?;
        if g.is_zero() {
            return Err(Error::InvalidArgument("generator list contains zero".into()));
        }
    }
    if p.min_degree() == Some(1) {
        return Err(Error::NotInL2);
    }
    let algebra = p.algebra();
    let mut letter_gen = HashMap::new();
    for (i, g) in gens.iter().enumerate() {
        if g.len() == 1 {
            let (w, c) = g.terms().iter().next().expect("nonzero");
            if w.is_letter() && c.is_one() {
                letter_gen.entry(w.letters()[0]).or_insert(i);
            }
        }
    }
    let mut merged: BTreeMap<usize, LieElement> = BTreeMap::new();
    for (_, piece) in p.components() {
        let mut local = Vec::new();
        let ok = piece.terms().iter().all(|(w, c)| match bracketing_of(w) {
            Bracketing::Node(l, r) => {
                let u = tree_element(algebra, &l).scaled(c);
                reduce(algebra, u, &r, &letter_gen, &mut local)
            }
            Bracketing::Letter(_) => false,
        });
        if !ok {
            local = solve_piece(&piece, gens)?;
        }
        for s in local {
            let slot = merged.entry(s.gen_index).or_insert_with(|| LieElement::zero(algebra));
            *slot = &*slot + &s.z;
        }
    }
    let out: Vec<Summand> = merged
        .into_iter()
        .filter(|(_, z)| !z.is_zero())
        .map(|(gen_index, z)| Summand { z, gen_index })
        .collect();
    let mut check = LieElement::zero(algebra);
    for s in &out {
        check = &check + &s.z.bracket(&gens[s.gen_index])?;
    }
    if &check != p {
        return Err(Error::Internal("L^2 decomposition failed re-expansion".into()));
    }
    Ok(out)
}

/// Linear-algebra fallback for one homogeneous piece. The unknown `z_i` ranges
/// over basis elements of degree at most `deg(piece) − mindeg(x_i)`, which is
/// complete when the generators are homogeneous.
fn solve_piece(piece: &LieElement, gens: &[LieElement]) -> Result<Vec<Summand>> {
    let algebra = piece.algebra();
    let d = piece.min_degree().expect("nonzero piece");
    let mut columns: Vec<(usize, LyndonWord)> = Vec::new();
    let mut images = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let gmin = g.min_degree().expect("nonzero generator");
        if gmin >= d {
            continue;
        }
        for w in basis_up_to(algebra.rank(), d - gmin) {
            images.push(LieElement::basis(algebra, w.clone()).bracket(g)?);
            columns.push((i, w));
        }
    }
    let fail = || Error::DecompositionFailure { witness: piece.to_string() };
    let coords = match solve_combination(&images, piece) {
        Solution::Inconsistent => return Err(fail()),
        Solution::Unique(x) | Solution::Free { particular: x, .. } => x,
    };
    let mut per_gen: BTreeMap<usize, BTreeMap<LyndonWord, Coefficient>> = BTreeMap::new();
    for ((i, w), c) in columns.into_iter().zip(coords) {
        if !num_traits::Zero::is_zero(&c) {
            per_gen.entry(i).or_default().insert(w, Coefficient::from_rational(c));
        }
    }
    let out: Vec<Summand> = per_gen
        .into_iter()
        .map(|(gen_index, terms)| Summand { z: LieElement::from_raw(algebra, terms), gen_index })
        .collect();
    if algebra.ring() == Ring::Z && !out.iter().all(|s| s.z.is_integral()) {
        return Err(fail());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;
    use crate::hall::Alphabet;

    fn setup() -> Arc<Algebra> {
        Algebra::new(Alphabet::parse("a,b").unwrap(), Ring::Z)
    }

    fn el(alg: &Arc<Algebra>, s: &str) -> LieElement {
        parse_element(s, alg).unwrap()
    }

    fn c(n: i64) -> Coefficient {
        Coefficient::from_int(n)
    }

    #[test]
    fn chain_examples() {
        let alg = setup();
        let (a, b) = (el(&alg, "a"), el(&alg, "b"));
        assert_eq!(shifted_chain(&a, &b, &[c(2)]).unwrap(), el(&alg, "[a,b] + 2*a"));
        let expected = el(&alg, "[[a,b],b] + [a,b]");
        assert_eq!(shifted_chain(&a, &b, &[c(0), c(1)]).unwrap(), expected);
        assert_eq!(shifted_chain(&a, &b, &[c(1), c(0)]).unwrap(), expected);
        assert_eq!(shifted_chain(&a, &b, &[]).unwrap(), a);
    }

    #[test]
    fn division_examples() {
        let alg = setup();
        let b = el(&alg, "b");
        let target = el(&alg, "[[a,b],b] + [a,b]");
        assert_eq!(divide_shifted(&target, &b, &c(1)).unwrap(), Some(el(&alg, "[a,b]")));
        assert_eq!(divide_shifted(&target, &b, &c(0)).unwrap(), Some(el(&alg, "[a,b] + a")));
        assert_eq!(divide_shifted(&target, &b, &c(5)).unwrap(), None);
        assert!(matches!(divide_shifted(&LieElement::zero(&alg), &b, &c(1)), Err(Error::InvalidDivision(_))));
        assert!(matches!(divide_shifted(&target, &LieElement::zero(&alg), &c(1)), Err(Error::InvalidDivision(_))));
    }

    #[test]
    fn division_integrality() {
        let z = setup();
        let q = Algebra::new(Alphabet::parse("a,b").unwrap(), Ring::Q);
        // (1/2·a)(2b+4) = [a,b] + 2a: integral target, non-integral quotient
        let t_z = el(&z, "[a,b] + 2*a");
        assert_eq!(divide_shifted(&t_z, &el(&z, "2*b"), &c(4)).unwrap(), None);
        let t_q = el(&q, "[a,b] + 2*a");
        let u = divide_shifted(&t_q, &el(&q, "2*b"), &c(4)).unwrap().unwrap();
        assert_eq!(u, el(&q, "1/2*a"));
    }

    #[test]
    fn witness_examples() {
        let alg = setup();
        let b = el(&alg, "b");
        let w = main_lemma_witness(&b, &[(c(0), el(&alg, "[a,b] + a")), (c(1), el(&alg, "[a,b]"))]).unwrap();
        assert_eq!(w, WitnessGammaW { gamma: c(1), w: el(&alg, "a") });

        let u1 = el(&alg, "[a,b]");
        let w = main_lemma_witness(&b, &[(c(7), u1.clone())]).unwrap();
        assert_eq!(w, WitnessGammaW { gamma: c(1), w: u1 });

        let a = el(&alg, "a");
        let pairs = vec![
            (c(0), shifted_chain(&a, &b, &[c(1), c(2)]).unwrap()),
            (c(1), shifted_chain(&a, &b, &[c(0), c(2)]).unwrap()),
            (c(2), shifted_chain(&a, &b, &[c(0), c(1)]).unwrap()),
        ];
        let w = main_lemma_witness(&b, &pairs).unwrap();
        assert_eq!(w, WitnessGammaW { gamma: c(2), w: a.scale_int(2) });
    }

    #[test]
    fn witness_errors() {
        let alg = setup();
        let b = el(&alg, "b");
        let u = el(&alg, "[a,b]");
        assert!(matches!(main_lemma_witness(&b, &[(c(1), u.clone()), (c(1), u.clone())]), Err(Error::RepeatedShift(_))));
        assert!(matches!(
            main_lemma_witness(&b, &[(c(0), u.clone()), (c(1), u.clone())]),
            Err(Error::InconsistentInput(_))
        ));
    }

    #[test]
    fn decompose_examples() {
        let alg = setup();
        let gens = vec![el(&alg, "a"), el(&alg, "b")];
        let d = decompose_l2(&el(&alg, "[a,b]"), &gens).unwrap();
        assert_eq!(d, vec![Summand { z: el(&alg, "a"), gen_index: 1 }]);
        let d = decompose_l2(&el(&alg, "[a,[a,b]]"), &gens).unwrap();
        assert_eq!(d, vec![Summand { z: el(&alg, "-[a,b]"), gen_index: 0 }]);
        let d = decompose_l2(&el(&alg, "[a,[b,[a,b]]]"), &gens).unwrap();
        assert_eq!(d, vec![Summand { z: el(&alg, "-[a,[a,b]]"), gen_index: 1 }]);
        assert!(matches!(decompose_l2(&el(&alg, "[a,b] + a"), &gens), Err(Error::NotInL2)));
    }

    #[test]
    fn decompose_with_missing_generator() {
        let alg = setup();
        let gens = vec![el(&alg, "a")];
        let d = decompose_l2(&el(&alg, "[a,b]"), &gens).unwrap();
        assert_eq!(d, vec![Summand { z: el(&alg, "-b"), gen_index: 0 }]);
        match decompose_l2(&el(&alg, "[[a,b],b]"), &gens) {
            Err(Error::DecompositionFailure { witness }) => assert_eq!(witness, "[[a,b],b]"),
            other => panic!("{other:?}"),
        }
    }
}
