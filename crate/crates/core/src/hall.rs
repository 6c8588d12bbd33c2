//! Lyndon-word realization of the Hall basis.
//!
//! Basis elements are indexed by Lyndon words over an ordered alphabet. A Lyndon
//! word of length at least two is bracketed through its right standard
//! factorization `w = u·v`, where `v` is the longest proper suffix of `w` that is
//! itself Lyndon.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Ordered set of generator names; the order is list position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(letters: &[S]) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if letters.len() > u8::MAX as usize {
            return Err(Error::InvalidAlphabet("at most 255 letters are supported".into()));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(letters.len());
        for l in letters {
            let l = l.as_ref();
            if !is_identifier(l) {
                return Err(Error::InvalidAlphabet(format!("{l:?} is not an identifier")));
            }
            if !seen.insert(l) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {l:?}")));
            }
            out.push(l.to_string());
        }
        Ok(Alphabet { letters: out })
    }

    /// Parses a comma separated list such as `a,b,c`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Alphabet::new(&parts)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn name(&self, letter: u8) -> &str {
        &self.letters[letter as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.letters.iter().position(|l| l == name).map(|i| i as u8)
    }

    fn single_char(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Text form of a word: letters concatenated when every name is a single
    /// character, otherwise joined with `.`.
    pub fn word_text(&self, word: &[u8]) -> String {
        let sep = if self.single_char() { "" } else { "." };
        word.iter().map(|&c| self.name(c)).collect::<Vec<_>>().join(sep)
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<u8>> {
        let unknown = |s: &str| Error::UnboundSymbol(s.to_string());
        if text.is_empty() {
            return Err(Error::InvalidArgument("empty word".into()));
        }
        if self.single_char() {
            text.chars()
                .map(|c| self.index_of(c.encode_utf8(&mut [0; 4])).ok_or_else(|| unknown(&c.to_string())))
                .collect()
        } else {
            text.split('.').map(|s| self.index_of(s).ok_or_else(|| unknown(s))).collect()
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Strict lexicographic comparison with proper prefixes ordered first.
pub fn lex_cmp(a: &[u8], b: &[u8]) -> Ordering {
    a.cmp(b)
}

/// A word that is strictly smaller than each of its proper suffixes.
pub fn is_lyndon(word: &[u8]) -> bool {
    !word.is_empty() && (1..word.len()).all(|i| word < &word[i..])
}

/// A Lyndon word. Ordered by `(degree, lexicographic)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LyndonWord(Vec<u8>);

impl LyndonWord {
    pub fn new(word: Vec<u8>) -> Result<Self> {
        if is_lyndon(&word) {
            Ok(LyndonWord(word))
        } else {
            Err(Error::NotLyndon(format!("{word:?}")))
        }
    }

    pub(crate) fn new_unchecked(word: Vec<u8>) -> Self {
        debug_assert!(is_lyndon(&word));
        LyndonWord(word)
    }

    pub fn letter(c: u8) -> Self {
        LyndonWord(vec![c])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn multidegree(&self, alphabet_len: usize) -> Vec<usize> {
        let mut counts = vec![0; alphabet_len];
        for &c in &self.0 {
            counts[c as usize] += 1;
        }
        counts
    }

    pub fn is_letter(&self) -> bool {
        self.0.len() == 1
    }
}

impl Ord for LyndonWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LyndonWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Right standard factorization: `w = u·v` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &LyndonWord) -> Result<(LyndonWord, LyndonWord)> {
    if w.degree() < 2 {
        return Err(Error::NoFactorization(format!("{:?}", w.0)));
    }
    let split = (1..w.degree())
        .find(|&i| is_lyndon(&w.0[i..]))
        .expect("the last letter is always a Lyndon suffix");
    Ok((
        LyndonWord::new_unchecked(w.0[..split].to_vec()),
        LyndonWord::new_unchecked(w.0[split..].to_vec()),
    ))
}

/// Binary bracket tree over letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bracketing {
    Letter(u8),
    Node(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    pub fn foliage(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u8>) {
        match self {
            Bracketing::Letter(c) => out.push(*c),
            Bracketing::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        BracketDisplay { tree: self, alphabet }
    }
}

struct BracketDisplay<'a> {
    tree: &'a Bracketing,
    alphabet: &'a Alphabet,
}

impl fmt::Display for BracketDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tree {
            Bracketing::Letter(c) => f.write_str(self.alphabet.name(*c)),
            Bracketing::Node(l, r) => write!(
                f,
                "[{},{}]",
                BracketDisplay { tree: l, alphabet: self.alphabet },
                BracketDisplay { tree: r, alphabet: self.alphabet }
            ),
        }
    }
}

/// A Hall basis element: a Lyndon word with its standard bracketing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub lyndon: LyndonWord,
    pub bracketing: Bracketing,
}

impl BasisElement {
    pub fn new(lyndon: LyndonWord) -> Self {
        let bracketing = bracketing_of(&lyndon);
        BasisElement { lyndon, bracketing }
    }
}

pub fn bracketing_of(w: &LyndonWord) -> Bracketing {
    match standard_factorization(w) {
        Err(_) => Bracketing::Letter(w.0[0]),
        Ok((u, v)) => Bracketing::Node(Box::new(bracketing_of(&u)), Box::new(bracketing_of(&v))),
    }
}

/// All Lyndon words of length `1..=max_degree`, grouped by degree, each group in
/// lexicographic order. Entry `d - 1` holds the words of degree `d`.
pub fn lyndon_words(alphabet: &Alphabet, max_degree: usize) -> Result<Vec<Vec<LyndonWord>>> {
    if alphabet.is_empty() {
        return Err(Error::InvalidAlphabet("alphabet is empty".into()));
    }
    if max_degree == 0 {
        return Err(Error::InvalidArgument("max_degree must be at least 1".into()));
    }
    Ok(lyndon_words_k(alphabet.len(), max_degree))
}

/// Duval's successor enumeration; emits Lyndon words of length at most `n` in
/// lexicographic order.
pub(crate) fn lyndon_words_k(k: usize, n: usize) -> Vec<Vec<LyndonWord>> {
    let mut by_degree = vec![Vec::new(); n];
    if k == 0 || n == 0 {
        return by_degree;
    }
    let top = (k - 1) as u8;
    let mut w: Vec<u8> = vec![0];
    loop {
        by_degree[w.len() - 1].push(LyndonWord::new_unchecked(w.clone()));
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(c) => *c += 1,
        }
    }
    by_degree
}

/// Flat list of basis words with degree in `1..=max_degree`, in `(degree, lex)` order.
pub fn basis_up_to(alphabet_len: usize, max_degree: usize) -> Vec<LyndonWord> {
    lyndon_words_k(alphabet_len, max_degree).into_iter().flatten().collect()
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of Lyndon words of length `n` over `k` letters: `(1/n) Σ_{d|n} μ(d) k^{n/d}`.
pub fn witt_dimension(k: u64, n: u64) -> BigUint {
    assert!(k >= 1 && n >= 1, "witt_dimension needs k >= 1 and n >= 1");
    let mut sum = BigInt::zero();
    for d in (1..=n).filter(|d| n % d == 0) {
        let mu = mobius(d);
        if mu != 0 {
            let exp = (n / d).to_u32().expect("degree fits in u32");
            sum += BigInt::from(mu) * BigInt::from(k).pow(exp);
        }
    }
    let q = sum / BigInt::from(n);
    debug_assert!(!q.is_negative());
    q.to_biguint().expect("necklace counts are nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("a,b").unwrap()
    }

    fn text(a: &Alphabet, ws: &[LyndonWord]) -> Vec<String> {
        ws.iter().map(|w| a.word_text(w.letters())).collect()
    }

    /// Minimal-rotation filter over every word of length `n`: a word is Lyndon
    /// iff it is strictly smaller than all of its nontrivial rotations.
    fn brute_lyndon(k: u8, n: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let total = (k as usize).pow(n as u32);
        for mut idx in 0..total {
            let mut w = vec![0u8; n];
            for slot in w.iter_mut().rev() {
                *slot = (idx % k as usize) as u8;
                idx /= k as usize;
            }
            let minimal = (1..n).all(|r| {
                let rot: Vec<u8> = w[r..].iter().chain(&w[..r]).copied().collect();
                w < rot
            });
            if minimal {
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn generation_matches_examples() {
        let a = ab();
        let ws = lyndon_words(&a, 3).unwrap();
        assert_eq!(text(&a, &ws[0]), ["a", "b"]);
        assert_eq!(text(&a, &ws[1]), ["ab"]);
        assert_eq!(text(&a, &ws[2]), ["aab", "abb"]);

        let one = Alphabet::parse("a").unwrap();
        let ws = lyndon_words(&one, 3).unwrap();
        assert_eq!(text(&one, &ws[0]), ["a"]);
        assert!(ws[1].is_empty() && ws[2].is_empty());
    }

    #[test]
    fn generation_matches_brute_force() {
        for k in 1..=3u8 {
            let ws = lyndon_words_k(k as usize, 7);
            for n in 1..=7 {
                let got: Vec<Vec<u8>> = ws[n - 1].iter().map(|w| w.letters().to_vec()).collect();
                assert_eq!(got, brute_lyndon(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn empty_alphabet_rejected() {
        let empty: [&str; 0] = [];
        assert!(matches!(Alphabet::new(&empty), Err(Error::InvalidAlphabet(_))));
        assert!(Alphabet::parse("a,a").is_err());
        assert!(lyndon_words(&ab(), 0).is_err());
    }

    #[test]
    fn factorization_examples() {
        let a = ab();
        let f = |s: &str| {
            let w = LyndonWord::new(a.parse_word(s).unwrap()).unwrap();
            let (u, v) = standard_factorization(&w).unwrap();
            (a.word_text(u.letters()), a.word_text(v.letters()))
        };
        assert_eq!(f("ab"), ("a".into(), "b".into()));
        assert_eq!(f("aab"), ("a".into(), "ab".into()));
        assert_eq!(f("aabb"), ("a".into(), "abb".into()));
        assert_eq!(f("abb"), ("ab".into(), "b".into()));
        assert!(matches!(standard_factorization(&LyndonWord::letter(0)), Err(Error::NoFactorization(_))));
    }

    #[test]
    fn factorization_recomposes_and_is_closed() {
        let ws = lyndon_words_k(3, 7);
        let all: HashSet<&LyndonWord> = ws.iter().flatten().collect();
        for w in ws.iter().flatten().filter(|w| w.degree() >= 2) {
            let (u, v) = standard_factorization(w).unwrap();
            let mut joined = u.letters().to_vec();
            joined.extend_from_slice(v.letters());
            assert_eq!(joined, w.letters());
            assert!(is_lyndon(u.letters()) && is_lyndon(v.letters()));
            assert!(u.letters() < v.letters());
            assert!(all.contains(&u) && all.contains(&v));
            assert_eq!(BasisElement::new(w.clone()).bracketing.foliage(), w.letters());
        }
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt_dimension(2, 1), BigUint::from(2u32));
        assert_eq!(witt_dimension(2, 2), BigUint::from(1u32));
        assert_eq!(witt_dimension(2, 6), BigUint::from(9u32));
        let seq: Vec<u32> = (1..=8).map(|n| witt_dimension(2, n).to_u32().unwrap()).collect();
        assert_eq!(seq, [2, 1, 2, 3, 6, 9, 18, 30]);
    }

    #[test]
    fn counts_match_witt() {
        for k in [2usize, 3] {
            let ws = lyndon_words_k(k, 8);
            for n in 1..=8 {
                assert_eq!(BigUint::from(ws[n - 1].len()), witt_dimension(k as u64, n as u64));
            }
        }
    }

    #[test]
    fn bracket_display() {
        let a = ab();
        let w = LyndonWord::new(a.parse_word("aabb").unwrap()).unwrap();
        assert_eq!(BasisElement::new(w).bracketing.display(&a).to_string(), "[a,[[a,b],b]]");
    }

    #[test]
    fn multichar_words() {
        let a = Alphabet::parse("x1,x2").unwrap();
        assert_eq!(a.word_text(&[0, 1, 1]), "x1.x2.x2");
        assert_eq!(a.parse_word("x1.x2").unwrap(), vec![0, 1]);
    }
}
