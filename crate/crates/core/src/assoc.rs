//! The free associative envelope, used as an independent check on Lie arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Coefficient;
use crate::element::LieElement;
use crate::hall::{bracketing_of, Alphabet, Bracketing};

/// Noncommutative polynomial: words over the alphabet with nonzero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssocPoly {
    terms: BTreeMap<Vec<u8>, Coefficient>,
}

impl AssocPoly {
    pub fn zero() -> Self {
        AssocPoly::default()
    }

    pub fn letter(c: u8) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![c], Coefficient::one());
        AssocPoly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, Coefficient> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, word: Vec<u8>, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &AssocPoly) -> AssocPoly {
        self.add(&other.scale(&Coefficient::from_int(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> AssocPoly {
        if c.is_zero() {
            return AssocPoly::zero();
        }
        AssocPoly { terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect() }
    }

    /// Concatenation product.
    pub fn mul(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (u, c) in &self.terms {
            for (v, d) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, &(c * d));
            }
        }
        out
    }

    /// `xy - yx`
    pub fn commutator(&self, other: &AssocPoly) -> AssocPoly {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        AssocDisplay { poly: self, alphabet }
    }
}

struct AssocDisplay<'a> {
    poly: &'a AssocPoly,
    alphabet: &'a Alphabet,
}

impl fmt::Display for AssocDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.poly.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*{}", c, self.alphabet.word_text(w))?;
        }
        Ok(())
    }
}

fn expand(tree: &Bracketing) -> AssocPoly {
    match tree {
        Bracketing::Letter(c) => AssocPoly::letter(*c),
        Bracketing::Node(l, r) => expand(l).commutator(&expand(r)),
    }
}

/// Image of a Lie element in its universal envelope: letters map to letters and
/// each bracket to a commutator.
pub fn to_associative(u: &LieElement) -> AssocPoly {
    let mut out = AssocPoly::zero();
    for (w, c) in u.terms() {
        let p = expand(&bracketing_of(w));
        for (word, d) in p.terms {
            out.add_term(word, &(c * &d));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Ring;
    use crate::element::Algebra;
    use crate::hall::LyndonWord;

    #[test]
    fn expansion_examples() {
        let alg = Algebra::new(Alphabet::parse("a,b").unwrap(), Ring::Z);
        let basis = |s: &str| LieElement::basis(&alg, LyndonWord::new(alg.alphabet().parse_word(s).unwrap()).unwrap());
        let show = |p: &AssocPoly| p.display(alg.alphabet()).to_string();
        assert_eq!(show(&to_associative(&basis("ab"))), "1*ab + -1*ba");
        assert_eq!(show(&to_associative(&basis("aab"))), "1*aab + -2*aba + 1*baa");
        assert_eq!(show(&to_associative(&basis("a").scale_int(2))), "2*a");
    }

    #[test]
    fn cancellation_prunes() {
        let mut p = AssocPoly::letter(0);
        p.add_term(vec![0], &Coefficient::from_int(-1));
        assert!(p.is_zero());
    }
}
