//! Elements of the free Lie algebra in the Lyndon basis.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, RwLock};

use crate::coeff::{normalize_pair, Coefficient, Ring};
use crate::error::{Error, Result};
use crate::hall::{bracketing_of, standard_factorization, Alphabet, LyndonWord};

type Terms = BTreeMap<LyndonWord, Coefficient>;
type Product = Arc<Vec<(LyndonWord, Coefficient)>>;

/// The free Lie algebra on an alphabet over `Z` or `Q`.
///
/// Holds the memo of basis products `[P(u), P(v)]` for `u < v`. Entries are a
/// pure function of the key, so concurrent fills are harmless.
pub struct Algebra {
    alphabet: Alphabet,
    ring: Ring,
    products: RwLock<HashMap<(LyndonWord, LyndonWord), Product>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("alphabet", &self.alphabet.letters())
            .field("ring", &self.ring)
            .finish()
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.alphabet == other.alphabet
    }
}

impl Eq for Algebra {}

impl Algebra {
    pub fn new(alphabet: Alphabet, ring: Ring) -> Arc<Algebra> {
        Arc::new(Algebra { alphabet, ring, products: RwLock::new(HashMap::new()) })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    /// `[P(u), P(v)]` expanded in the Lyndon basis.
    fn basis_bracket(&self, u: &LyndonWord, v: &LyndonWord) -> (bool, Product) {
        match u.letters().cmp(v.letters()) {
            std::cmp::Ordering::Equal => (false, Arc::new(Vec::new())),
            std::cmp::Ordering::Less => (false, self.ordered_bracket(u, v)),
            std::cmp::Ordering::Greater => (true, self.ordered_bracket(v, u)),
        }
    }

    /// Bracket of basis elements with `u < v` lexicographically. `uv` is then
    /// Lyndon; it is the answer when its standard factorization is `(u, v)`, which
    /// happens iff `u` is a letter or the right factor `u2` of `u` satisfies
    /// `u2 >= v`. Otherwise `[[u1,u2],v] = [[u1,v],u2] + [u1,[u2,v]]`.
    fn ordered_bracket(&self, u: &LyndonWord, v: &LyndonWord) -> Product {
        let key = (u.clone(), v.clone());
        if let Some(hit) = self.products.read().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let mut out = Terms::new();
        let split = if u.is_letter() {
            None
        } else {
            let (u1, u2) = standard_factorization(u).expect("degree >= 2");
            (u2.letters() < v.letters()).then_some((u1, u2))
        };
        match split {
            None => {
                let mut w = u.letters().to_vec();
                w.extend_from_slice(v.letters());
                out.insert(LyndonWord::new_unchecked(w), Coefficient::one());
            }
            Some((u1, u2)) => {
                let (neg, left) = self.basis_bracket(&u1, v);
                for (x, c) in left.iter() {
                    let c = if neg { -c } else { c.clone() };
                    self.accumulate_bracket(&mut out, x, &u2, &c);
                }
                let (neg, right) = self.basis_bracket(&u2, v);
                for (y, c) in right.iter() {
                    let c = if neg { -c } else { c.clone() };
                    self.accumulate_bracket(&mut out, &u1, y, &c);
                }
            }
        }
        let product: Product = Arc::new(out.into_iter().collect());
        self.products.write().expect("memo lock").entry(key).or_insert(product).clone()
    }

    /// `out += c · [P(x), P(y)]`
    fn accumulate_bracket(&self, out: &mut Terms, x: &LyndonWord, y: &LyndonWord, c: &Coefficient) {
        let (neg, prod) = self.basis_bracket(x, y);
        for (w, d) in prod.iter() {
            let mut t = c * d;
            if neg {
                t = -t;
            }
            add_term(out, w.clone(), &t);
        }
    }

    /// Number of memoized basis products.
    pub fn memo_len(&self) -> usize {
        self.products.read().expect("memo lock").len()
    }
}

fn add_term(terms: &mut Terms, w: LyndonWord, c: &Coefficient) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// A finite combination of Lyndon basis elements with nonzero coefficients.
#[derive(Clone)]
pub struct LieElement {
    algebra: Arc<Algebra>,
    terms: Terms,
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.terms == other.terms
    }
}

impl Eq for LieElement {}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElement({self})")
    }
}

fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LieElement {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        LieElement { algebra: algebra.clone(), terms: Terms::new() }
    }

    pub fn generator(algebra: &Arc<Algebra>, name: &str) -> Result<Self> {
        let c = algebra.alphabet.index_of(name).ok_or_else(|| Error::UnboundSymbol(name.to_string()))?;
        Ok(Self::basis(algebra, LyndonWord::letter(c)))
    }

    pub fn basis(algebra: &Arc<Algebra>, w: LyndonWord) -> Self {
        let mut terms = Terms::new();
        terms.insert(w, Coefficient::one());
        LieElement { algebra: algebra.clone(), terms }
    }

    /// Builds an element from `(word, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(algebra: &Arc<Algebra>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LyndonWord, Coefficient)>,
    {
        let mut out = Terms::new();
        for (w, c) in terms {
            algebra.ring.check(&c)?;
            if w.letters().iter().any(|&l| l as usize >= algebra.rank()) {
                return Err(Error::UnboundSymbol(format!("letter index out of range in {:?}", w.letters())));
            }
            add_term(&mut out, w, &c);
        }
        Ok(LieElement { algebra: algebra.clone(), terms: out })
    }

    pub(crate) fn from_raw(algebra: &Arc<Algebra>, terms: Terms) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        LieElement { algebra: algebra.clone(), terms }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn ring(&self) -> Ring {
        self.algebra.ring
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.algebra.alphabet
    }

    /// Terms in `(degree, lexicographic)` order.
    pub fn terms(&self) -> &BTreeMap<LyndonWord, Coefficient> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &LyndonWord) -> Coefficient {
        self.terms.get(w).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn check_same_algebra(&self, other: &LieElement) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else if self.algebra.ring != other.algebra.ring {
            Err(Error::RingMismatch(format!("{} vs {}", self.algebra.ring, other.algebra.ring)))
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn try_add(&self, other: &LieElement) -> Result<LieElement> {
        self.check_same_algebra(other)?;
        Ok(self.add_unchecked(other, &Coefficient::one()))
    }

    pub fn try_sub(&self, other: &LieElement) -> Result<LieElement> {
        self.check_same_algebra(other)?;
        Ok(self.add_unchecked(other, &Coefficient::from_int(-1)))
    }

    fn add_unchecked(&self, other: &LieElement, factor: &Coefficient) -> LieElement {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_term(&mut terms, w.clone(), &(c * factor));
        }
        LieElement { algebra: self.algebra.clone(), terms }
    }

    /// Multiplication by a scalar of the algebra's ring.
    pub fn scale(&self, c: &Coefficient) -> Result<LieElement> {
        self.algebra.ring.check(c)?;
        Ok(self.scaled(c))
    }

    /// Scalar multiple without the ring membership check.
    pub(crate) fn scaled(&self, c: &Coefficient) -> LieElement {
        if c.is_zero() {
            return LieElement::zero(&self.algebra);
        }
        let terms = self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect();
        LieElement { algebra: self.algebra.clone(), terms }
    }

    pub fn scale_int(&self, n: i64) -> LieElement {
        self.scaled(&Coefficient::from_int(n))
    }

    /// The Lie product `[self, other]`.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        self.check_same_algebra(other)?;
        let mut out = Terms::new();
        for (u, c) in &self.terms {
            for (v, d) in &other.terms {
                self.algebra.accumulate_bracket(&mut out, u, v, &(c * d));
            }
        }
        Ok(LieElement { algebra: self.algebra.clone(), terms: out })
    }

    /// Homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<usize, LieElement> {
        let mut out: BTreeMap<usize, Terms> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.degree()).or_default().insert(w.clone(), c.clone());
        }
        out.into_iter().map(|(d, t)| (d, LieElement::from_raw(&self.algebra, t))).collect()
    }

    pub fn component(&self, degree: usize) -> LieElement {
        let terms = self.terms.iter().filter(|(w, _)| w.degree() == degree).map(|(w, c)| (w.clone(), c.clone()));
        LieElement::from_raw(&self.algebra, terms.collect())
    }

    /// Degree of the highest nonzero homogeneous component.
    pub fn weight(&self) -> Result<usize> {
        self.terms.keys().next_back().map(LyndonWord::degree).ok_or(Error::ZeroElement("weight"))
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(LyndonWord::degree)
    }

    /// Homogeneous component of highest weight.
    pub fn top(&self) -> Result<LieElement> {
        Ok(self.component(self.weight()?))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.min_degree() == self.terms.keys().next_back().map(LyndonWord::degree)
    }

    /// Letters occurring in any basis word of the support.
    pub fn letters(&self) -> BTreeSet<u8> {
        self.terms.keys().flat_map(|w| w.letters().iter().copied()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Coefficient::is_integer)
    }

    /// Same coordinates viewed in another algebra on the same alphabet.
    pub fn change_ring(&self, target: &Arc<Algebra>) -> Result<LieElement> {
        if target.alphabet != self.algebra.alphabet {
            return Err(Error::AlgebraMismatch);
        }
        LieElement::from_terms(target, self.terms.clone())
    }
}

/// Nonzero `(α, β)` with `α·u = β·v` when `u` and `v` are proportional.
///
/// The pair is reduced by its gcd and normalized to `α > 0`. A basis element
/// `e` and any `v` with `[e, v] = 0` are proportional, so the basic-commutator
/// form of the centralizer lemma is the special case `u = e`.
pub fn proportional(u: &LieElement, v: &LieElement) -> Result<Option<(Coefficient, Coefficient)>> {
    u.check_same_algebra(v)?;
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroElement("proportional"));
    }
    if u.terms.len() != v.terms.len() || !u.terms.keys().eq(v.terms.keys()) {
        return Ok(None);
    }
    let (w, cu) = u.terms.iter().next().expect("nonzero");
    let ratio = v.terms[w].checked_div(cu).expect("nonzero coefficient");
    if u.terms.iter().any(|(w, c)| &(c * &ratio) != &v.terms[w]) {
        return Ok(None);
    }
    // v = (n/d)·u  ⇒  n·u = d·v
    let (a, b) = normalize_pair(ratio.numer().clone(), ratio.denom().clone());
    Ok(Some((Coefficient::from_bigint(a), Coefficient::from_bigint(b))))
}

impl fmt::Display for LieElement {
    /// Bracket notation, highest degree first, e.g. `[a,[a,b]] + 2*a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let alphabet = &self.algebra.alphabet;
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let tree = bracketing_of(w);
            let body = tree.display(alphabet);
            let mag = if i == 0 { c.clone() } else { c.abs() };
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
        }
        Ok(())
    }
}

impl Add<&LieElement> for &LieElement {
    type Output = LieElement;

    /// Panics if the operands live in different algebras; see [`LieElement::try_add`].
    fn add(self, rhs: &LieElement) -> LieElement {
        self.try_add(rhs).expect("adding elements of different algebras")
    }
}

impl Sub<&LieElement> for &LieElement {
    type Output = LieElement;

    fn sub(self, rhs: &LieElement) -> LieElement {
        self.try_sub(rhs).expect("subtracting elements of different algebras")
    }
}

impl Neg for &LieElement {
    type Output = LieElement;

    fn neg(self) -> LieElement {
        self.scale_int(-1)
    }
}

impl Add for LieElement {
    type Output = LieElement;
    fn add(self, rhs: LieElement) -> LieElement {
        &self + &rhs
    }
}

impl Sub for LieElement {
    type Output = LieElement;
    fn sub(self, rhs: LieElement) -> LieElement {
        &self - &rhs
    }
}

impl Neg for LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(ring: Ring) -> Arc<Algebra> {
        Algebra::new(Alphabet::parse("a,b").unwrap(), ring)
    }

    fn word(alg: &Arc<Algebra>, s: &str) -> LieElement {
        LieElement::basis(alg, LyndonWord::new(alg.alphabet().parse_word(s).unwrap()).unwrap())
    }

    #[test]
    fn bracket_examples() {
        let l = alg(Ring::Z);
        let a = word(&l, "a");
        let b = word(&l, "b");
        assert_eq!(b.bracket(&a).unwrap(), -&word(&l, "ab"));
        assert!(a.bracket(&a).unwrap().is_zero());
        assert_eq!(a.bracket(&word(&l, "ab")).unwrap(), word(&l, "aab"));
        assert_eq!(word(&l, "ab").bracket(&b).unwrap(), word(&l, "abb"));
        assert_eq!(word(&l, "ab").bracket(&a).unwrap(), -&word(&l, "aab"));
    }

    #[test]
    fn decomposition_and_weight() {
        let l = alg(Ring::Z);
        let u = &word(&l, "ab") + &word(&l, "a").scale_int(3);
        let comps = u.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[&1], word(&l, "a").scale_int(3));
        assert_eq!(u.top().unwrap(), word(&l, "ab"));
        assert_eq!(u.weight().unwrap(), 2);

        let h = &word(&l, "aab") - &word(&l, "abb");
        assert_eq!(h.components().len(), 1);
        assert_eq!(h.weight().unwrap(), 3);

        let z = LieElement::zero(&l);
        assert!(z.components().is_empty());
        assert!(matches!(z.weight(), Err(Error::ZeroElement(_))));
        assert!(z.top().is_err());
    }

    #[test]
    fn proportional_examples() {
        let l = alg(Ring::Z);
        let ab = word(&l, "ab");
        let a = word(&l, "a");
        let pair = proportional(&ab.scale_int(2), &ab.scale_int(3)).unwrap();
        assert_eq!(pair, Some((Coefficient::from_int(3), Coefficient::from_int(2))));
        assert_eq!(proportional(&ab, &a).unwrap(), None);
        let u = &a.scale_int(2) + &ab.scale_int(4);
        let v = &a.scale_int(3) + &ab.scale_int(6);
        assert_eq!(proportional(&u, &v).unwrap(), Some((Coefficient::from_int(3), Coefficient::from_int(2))));
        let pair = proportional(&ab.scale_int(2), &ab.scale_int(-4)).unwrap().unwrap();
        assert_eq!(pair, (Coefficient::from_int(2), Coefficient::from_int(-1)));
        assert!(proportional(&LieElement::zero(&l), &a).is_err());
    }

    #[test]
    fn display_format() {
        let l = alg(Ring::Q);
        let e = &word(&l, "aab") + &word(&l, "a").scale_int(2);
        assert_eq!(e.to_string(), "[a,[a,b]] + 2*a");
        let e = &word(&l, "ab").scale_int(-1) - &word(&l, "b").scale(&Coefficient::ratio(1, 2)).unwrap();
        assert_eq!(e.to_string(), "-1*[a,b] - 1/2*b");
        assert_eq!(LieElement::zero(&l).to_string(), "0");
    }

    #[test]
    fn ring_checks() {
        let z = alg(Ring::Z);
        let q = alg(Ring::Q);
        assert!(word(&z, "a").scale(&Coefficient::ratio(1, 2)).is_err());
        assert!(matches!(word(&z, "a").bracket(&word(&q, "b")), Err(Error::RingMismatch(_))));
        let other = Algebra::new(Alphabet::parse("a,b,c").unwrap(), Ring::Z);
        assert!(matches!(word(&z, "a").try_add(&word(&other, "a")), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn separate_algebra_instances_compare_equal() {
        let l1 = alg(Ring::Z);
        let l2 = alg(Ring::Z);
        assert_eq!(word(&l1, "ab"), word(&l2, "ab"));
        assert!(word(&l1, "a").bracket(&word(&l2, "b")).is_ok());
    }
}
