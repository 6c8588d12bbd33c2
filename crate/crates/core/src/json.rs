//! JSON form of Lie elements:
//! `{"ring":"Z","alphabet":["a","b"],"terms":[{"word":"ab","coeff":"2"}]}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::{Coefficient, Ring};
use crate::element::{Algebra, LieElement};
use crate::error::{Error, Result};
use crate::hall::{Alphabet, LyndonWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub ring: String,
    pub alphabet: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub word: String,
    pub coeff: String,
}

impl ElementJson {
    pub fn from_element(u: &LieElement) -> Self {
        let alphabet = u.alphabet();
        ElementJson {
            ring: u.ring().as_str().to_string(),
            alphabet: alphabet.letters().to_vec(),
            terms: u
                .terms()
                .iter()
                .map(|(w, c)| TermJson { word: alphabet.word_text(w.letters()), coeff: c.to_string() })
                .collect(),
        }
    }

    /// Rebuilds the element in `algebra`, which must carry the same ring and
    /// alphabet. Only canonical input is accepted, so accepted text round-trips
    /// byte for byte.
    pub fn to_element(&self, algebra: &Arc<Algebra>) -> Result<LieElement> {
        let ring: Ring = self.ring.parse()?;
        if ring != algebra.ring() {
            return Err(Error::RingMismatch(format!("element is over {ring}, algebra over {}", algebra.ring())));
        }
        if self.alphabet != algebra.alphabet().letters() {
            return Err(Error::AlgebraMismatch);
        }
        let mut terms: Vec<(LyndonWord, Coefficient)> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let w = LyndonWord::new(algebra.alphabet().parse_word(&t.word)?)?;
            let c: Coefficient = t.coeff.parse().map_err(|_| Error::Json(format!("invalid coefficient {:?}", t.coeff)))?;
            if c.is_zero() {
                return Err(Error::Json(format!("zero coefficient on {}", t.word)));
            }
            if c.to_string() != t.coeff {
                return Err(Error::Json(format!("coefficient {:?} is not in canonical form {c}", t.coeff)));
            }
            if terms.last().is_some_and(|(v, _)| *v >= w) {
                return Err(Error::Json(format!("term {} is repeated or out of (degree, word) order", t.word)));
            }
            terms.push((w, c));
        }
        LieElement::from_terms(algebra, terms)
    }
}

pub fn element_to_json(u: &LieElement) -> String {
    serde_json::to_string(&ElementJson::from_element(u)).expect("element serializes")
}

/// Parses element JSON, building a fresh algebra from its ring and alphabet.
pub fn element_from_json(text: &str) -> Result<LieElement> {
    let j: ElementJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let algebra = Algebra::new(Alphabet::new(&j.alphabet)?, j.ring.parse()?);
    j.to_element(&algebra)
}

/// Parses element JSON into an existing algebra.
pub fn element_from_json_in(text: &str, algebra: &Arc<Algebra>) -> Result<LieElement> {
    let j: ElementJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    j.to_element(algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;

    #[test]
    fn round_trip() {
        let alg = Algebra::new(Alphabet::parse("a,b").unwrap(), Ring::Q);
        let u = parse_element("[a,[a,b]] - 1/2*b + 3*a", &alg).unwrap();
        let text = element_to_json(&u);
        assert_eq!(
            text,
            r#"{"ring":"Q","alphabet":["a","b"],"terms":[{"word":"a","coeff":"3"},{"word":"b","coeff":"-1/2"},{"word":"aab","coeff":"1"}]}"#
        );
        let back = element_from_json(&text).unwrap();
        assert_eq!(element_to_json(&back), text);
        assert_eq!(element_from_json_in(&text, &alg).unwrap(), u);
    }

    #[test]
    fn rejects_malformed() {
        let bad = [
            r#"{"ring":"Z","alphabet":["a","b"],"terms":[{"word":"ba","coeff":"1"}]}"#,
            r#"{"ring":"Z","alphabet":["a","b"],"terms":[{"word":"ab","coeff":"0"}]}"#,
            r#"{"ring":"Z","alphabet":["a","b"],"terms":[{"word":"ab","coeff":"1/2"}]}"#,
            r#"{"ring":"Z","alphabet":["a","b"],"terms":[{"word":"ab","coeff":"1"},{"word":"ab","coeff":"1"}]}"#,
            r#"{"ring":"Z","alphabet":["a","b"]}"#,
            r#"{"ring":"Z","alphabet":["a","b"],"terms":[{"word":"ab","coeff":"1"},{"word":"a","coeff":"1"}]}"#,
            r#"{"ring":"Q","alphabet":["a","b"],"terms":[{"word":"ab","coeff":"2/4"}]}"#,
        ];
        for b in bad {
            assert!(element_from_json(b).is_err(), "{b}");
        }
    }
}
