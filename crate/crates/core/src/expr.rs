//! Bracket expressions: parsing, printing and normal forms.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := coeff '*' factor | factor
//! factor   := generator | '0' | '[' expr ',' expr ']' | '(' expr ')' chainfac*
//! chainfac := '(' expr ('+'|'-') coeff ')'
//! coeff    := ['-'] integer ['/' positive-integer]
//! ```
//!
//! A group followed by chain factors, `(u)(v+α₁)…(v+αₙ)`, denotes the
//! left-to-right fold of shifted products `u(v+α) = [u,v] + αu`. A leading `-`
//! on a term without an explicit coefficient is read as the coefficient `-1`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::assoc::AssocPoly;
use crate::coeff::{Coefficient, Ring};
use crate::element::{Algebra, LieElement};
use crate::error::{Error, Result};
use crate::hall::Alphabet;
use crate::lexer::{Cursor, Tok};
use crate::shifted::shift_once;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOp {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub first: Term,
    pub rest: Vec<(AddOp, Term)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Option<Coefficient>,
    pub factor: Factor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Gen(String),
    Zero,
    Bracket(Box<Expr>, Box<Expr>),
    Group(Box<Expr>, Vec<ChainFactor>),
}

/// The factor `(shift + alpha)` of a shifted chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFactor {
    pub shift: Expr,
    pub alpha: Coefficient,
}

impl Expr {
    pub fn single(factor: Factor) -> Expr {
        Expr { first: Term { coeff: None, factor }, rest: Vec::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (AddOp, &Term)> {
        std::iter::once((AddOp::Plus, &self.first)).chain(self.rest.iter().map(|(op, t)| (*op, t)))
    }

    /// Largest degree any monomial of the expression can reach.
    pub fn degree(&self) -> usize {
        self.terms().map(|(_, t)| t.factor.degree()).max().unwrap_or(0)
    }
}

impl Factor {
    pub fn degree(&self) -> usize {
        match self {
            Factor::Gen(_) => 1,
            Factor::Zero => 0,
            Factor::Bracket(l, r) => l.degree() + r.degree(),
            Factor::Group(inner, chain) => inner.degree() + chain.iter().map(|c| c.shift.degree()).sum::<usize>(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.first)?;
        for (op, t) in &self.rest {
            let sym = match op {
                AddOp::Plus => "+",
                AddOp::Minus => "-",
            };
            write!(f, " {sym} {t}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.coeff {
            write!(f, "{c}*")?;
        }
        write!(f, "{}", self.factor)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Gen(name) => f.write_str(name),
            Factor::Zero => f.write_str("0"),
            Factor::Bracket(l, r) => write!(f, "[{l},{r}]"),
            Factor::Group(inner, chain) => {
                write!(f, "({inner})")?;
                for c in chain {
                    if c.alpha.is_negative() {
                        write!(f, "({}-{})", c.shift, c.alpha.abs())?;
                    } else {
                        write!(f, "({}+{})", c.shift, c.alpha)?;
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    cur: Cursor,
    alphabet: &'a Alphabet,
    ring: Ring,
}

/// Parses `text` against the grammar above, checking generators and the ring.
pub fn parse_expr(text: &str, alphabet: &Alphabet, ring: Ring) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax { message: "empty expression".into(), line: 1, column: 1 });
    }
    let mut p = Parser { cur: Cursor::new(text)?, alphabet, ring };
    let e = p.expr(false)?;
    p.cur.expect_end()?;
    Ok(e)
}

impl Parser<'_> {
    fn expr(&mut self, in_chain: bool) -> Result<Expr> {
        let first = self.term()?;
        let mut rest = Vec::new();
        loop {
            let op = match self.cur.peek() {
                Tok::Plus => AddOp::Plus,
                Tok::Minus => AddOp::Minus,
                _ => break,
            };
            if in_chain && self.alpha_follows() {
                break;
            }
            self.cur.bump();
            rest.push((op, self.term()?));
        }
        Ok(Expr { first, rest })
    }

    /// At `+`/`-`: is the remainder `[-] int [/ int] )`?
    fn alpha_follows(&self) -> bool {
        let mut k = 1;
        if *self.cur.peek_at(k) == Tok::Minus {
            k += 1;
        }
        if !matches!(self.cur.peek_at(k), Tok::Int(_)) {
            return false;
        }
        k += 1;
        if *self.cur.peek_at(k) == Tok::Slash {
            if !matches!(self.cur.peek_at(k + 1), Tok::Int(_)) {
                return false;
            }
            k += 2;
        }
        *self.cur.peek_at(k) == Tok::RParen
    }

    fn coeff(&mut self) -> Result<Coefficient> {
        let neg = self.cur.eat(&Tok::Minus);
        let num = match self.cur.bump() {
            Tok::Int(s) => s,
            other => return Err(self.cur.error(format!("expected integer, found {}", other.describe()))),
        };
        let mut text = if neg { format!("-{num}") } else { num };
        if self.cur.eat(&Tok::Slash) {
            match self.cur.bump() {
                Tok::Int(d) => {
                    text.push('/');
                    text.push_str(&d);
                }
                other => return Err(self.cur.error(format!("expected denominator, found {}", other.describe()))),
            }
        }
        let c: Coefficient = text.parse().map_err(|_| self.cur.error(format!("invalid coefficient {text}")))?;
        if !self.ring.contains(&c) {
            return Err(Error::RingMismatch(format!("{c} is not an element of {}", self.ring)));
        }
        Ok(c)
    }

    fn term(&mut self) -> Result<Term> {
        match (self.cur.peek().clone(), self.cur.peek_at(1).clone()) {
            (Tok::Int(s), next) if s.chars().all(|c| c == '0') && next != Tok::Star && next != Tok::Slash => {
                self.cur.bump();
                Ok(Term { coeff: None, factor: Factor::Zero })
            }
            (Tok::Int(_), _) | (Tok::Minus, Tok::Int(_)) => {
                let c = self.coeff()?;
                self.cur.expect(&Tok::Star)?;
                Ok(Term { coeff: Some(c), factor: self.factor()? })
            }
            (Tok::Minus, _) => {
                self.cur.bump();
                Ok(Term { coeff: Some(Coefficient::from_int(-1)), factor: self.factor()? })
            }
            _ => Ok(Term { coeff: None, factor: self.factor()? }),
        }
    }

    fn factor(&mut self) -> Result<Factor> {
        match self.cur.peek().clone() {
            Tok::Ident(name) => {
                if self.alphabet.index_of(&name).is_none() {
                    let e = self.cur.error("");
                    let (line, column) = match e {
                        Error::Syntax { line, column, .. } => (line, column),
                        _ => (0, 0),
                    };
                    return Err(Error::UnboundSymbol(format!("{name} (line {line}, column {column})")));
                }
                self.cur.bump();
                Ok(Factor::Gen(name))
            }
            Tok::Int(s) if s.chars().all(|c| c == '0') => {
                self.cur.bump();
                Ok(Factor::Zero)
            }
            Tok::LBracket => {
                self.cur.bump();
                let l = self.expr(false)?;
                self.cur.expect(&Tok::Comma)?;
                let r = self.expr(false)?;
                self.cur.expect(&Tok::RBracket)?;
                Ok(Factor::Bracket(Box::new(l), Box::new(r)))
            }
            Tok::LParen => {
                self.cur.bump();
                let inner = self.expr(false)?;
                self.cur.expect(&Tok::RParen)?;
                let mut chain = Vec::new();
                while self.cur.eat(&Tok::LParen) {
                    let shift = self.expr(true)?;
                    let sign = match self.cur.bump() {
                        Tok::Plus => 1,
                        Tok::Minus => -1,
                        other => {
                            return Err(self.cur.error(format!(
                                "expected '+' and a scalar in chain factor, found {}",
                                other.describe()
                            )))
                        }
                    };
                    let mut alpha = self.coeff()?;
                    if sign < 0 {
                        alpha = -alpha;
                    }
                    self.cur.expect(&Tok::RParen)?;
                    chain.push(ChainFactor { shift, alpha });
                }
                Ok(Factor::Group(Box::new(inner), chain))
            }
            other => Err(self.cur.error(format!("expected a factor, found {}", other.describe()))),
        }
    }
}

/// Evaluates an expression to its canonical element in the Lyndon basis.
pub fn normal_form(expr: &Expr, algebra: &Arc<Algebra>) -> Result<LieElement> {
    let mut acc = LieElement::zero(algebra);
    for (op, t) in expr.terms() {
        let mut v = factor_nf(&t.factor, algebra)?;
        if let Some(c) = &t.coeff {
            v = v.scale(c)?;
        }
        acc = match op {
            AddOp::Plus => acc.try_add(&v)?,
            AddOp::Minus => acc.try_sub(&v)?,
        };
    }
    Ok(acc)
}

fn factor_nf(f: &Factor, algebra: &Arc<Algebra>) -> Result<LieElement> {
    match f {
        Factor::Gen(name) => LieElement::generator(algebra, name),
        Factor::Zero => Ok(LieElement::zero(algebra)),
        Factor::Bracket(l, r) => normal_form(l, algebra)?.bracket(&normal_form(r, algebra)?),
        Factor::Group(inner, chain) => {
            let mut u = normal_form(inner, algebra)?;
            for c in chain {
                algebra.ring().check(&c.alpha)?;
                u = shift_once(&u, &normal_form(&c.shift, algebra)?, &c.alpha)?;
            }
            Ok(u)
        }
    }
}

/// Parses and evaluates in one step.
pub fn parse_element(text: &str, algebra: &Arc<Algebra>) -> Result<LieElement> {
    normal_form(&parse_expr(text, algebra.alphabet(), algebra.ring())?, algebra)
}

/// Direct commutator expansion of an expression in the free associative
/// algebra, bypassing the Lie basis entirely.
pub fn expand_associative(expr: &Expr, alphabet: &Alphabet) -> Result<AssocPoly> {
    let mut acc = AssocPoly::zero();
    for (op, t) in expr.terms() {
        let mut v = factor_assoc(&t.factor, alphabet)?;
        if let Some(c) = &t.coeff {
            v = v.scale(c);
        }
        acc = match op {
            AddOp::Plus => acc.add(&v),
            AddOp::Minus => acc.sub(&v),
        };
    }
    Ok(acc)
}

fn factor_assoc(f: &Factor, alphabet: &Alphabet) -> Result<AssocPoly> {
    match f {
        Factor::Gen(name) => {
            alphabet.index_of(name).map(AssocPoly::letter).ok_or_else(|| Error::UnboundSymbol(name.clone()))
        }
        Factor::Zero => Ok(AssocPoly::zero()),
        Factor::Bracket(l, r) => Ok(expand_associative(l, alphabet)?.commutator(&expand_associative(r, alphabet)?)),
        Factor::Group(inner, chain) => {
            let mut u = expand_associative(inner, alphabet)?;
            for c in chain {
                let v = expand_associative(&c.shift, alphabet)?;
                u = u.commutator(&v).add(&u.scale(&c.alpha));
            }
            Ok(u)
        }
    }
}

/// Random expression generator for seeded property runs.
pub struct ExprGen<'a> {
    pub alphabet: &'a Alphabet,
    pub ring: Ring,
    pub max_degree: usize,
    /// Integer coefficients are drawn from `-coeff_bound..=coeff_bound`.
    pub coeff_bound: i64,
    /// Allow shifted-chain groups.
    pub chains: bool,
}

impl ExprGen<'_> {
    pub fn expr<R: Rng + ?Sized>(&self, rng: &mut R) -> Expr {
        let budget = rng.gen_range(1..=self.max_degree.max(1));
        self.expr_with(rng, budget, 0)
    }

    fn coeff<R: Rng + ?Sized>(&self, rng: &mut R) -> Coefficient {
        let n = rng.gen_range(-self.coeff_bound..=self.coeff_bound);
        if self.ring == Ring::Q && rng.gen_bool(0.2) {
            Coefficient::ratio(n, rng.gen_range(1..=self.coeff_bound.max(1)))
        } else {
            Coefficient::from_int(n)
        }
    }

    fn expr_with<R: Rng + ?Sized>(&self, rng: &mut R, budget: usize, depth: usize) -> Expr {
        let max_terms = if depth >= 2 { 1 } else { 3 - depth };
        let n = rng.gen_range(1..=max_terms);
        let mut terms = Vec::with_capacity(n);
        for _ in 0..n {
            let coeff = if rng.gen_bool(0.5) { Some(self.coeff(rng)) } else { None };
            let factor = self.factor_with(rng, budget, depth);
            let op = if rng.gen_bool(0.5) { AddOp::Plus } else { AddOp::Minus };
            terms.push((op, Term { coeff, factor }));
        }
        let (_, first) = terms.remove(0);
        Expr { first, rest: terms }
    }

    fn factor_with<R: Rng + ?Sized>(&self, rng: &mut R, budget: usize, depth: usize) -> Factor {
        let letter = |rng: &mut R| {
            let i = rng.gen_range(0..self.alphabet.len());
            Factor::Gen(self.alphabet.letters()[i].clone())
        };
        if budget < 2 || depth > 4 {
            return if rng.gen_bool(0.03) { Factor::Zero } else { letter(rng) };
        }
        match rng.gen_range(0..10) {
            0 | 1 => letter(rng),
            7 | 8 if self.chains => {
                let inner_budget = rng.gen_range(1..budget);
                let inner = self.expr_with(rng, inner_budget, depth + 1);
                let mut left = budget - inner_budget;
                let mut chain = Vec::new();
                while left > 0 && chain.len() < 3 && rng.gen_bool(0.7) {
                    let d = rng.gen_range(1..=left);
                    left -= d;
                    let shift = self.expr_with(rng, d, depth + 2);
                    let alpha = Coefficient::from_int(rng.gen_range(-self.coeff_bound..=self.coeff_bound));
                    chain.push(ChainFactor { shift, alpha });
                }
                Factor::Group(Box::new(inner), chain)
            }
            9 => {
                let inner = self.expr_with(rng, budget, depth + 1);
                Factor::Group(Box::new(inner), Vec::new())
            }
            _ => {
                let d1 = rng.gen_range(1..budget);
                let d2 = rng.gen_range(1..=budget - d1);
                let l = self.expr_with(rng, d1, depth + 1);
                let r = self.expr_with(rng, d2, depth + 1);
                Factor::Bracket(Box::new(l), Box::new(r))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::to_associative;
    use crate::hall::LyndonWord;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(ring: Ring) -> Arc<Algebra> {
        Algebra::new(Alphabet::parse("a,b").unwrap(), ring)
    }

    fn w(alg: &Arc<Algebra>, s: &str) -> LieElement {
        LieElement::basis(alg, LyndonWord::new(alg.alphabet().parse_word(s).unwrap()).unwrap())
    }

    #[test]
    fn normal_form_examples() {
        let alg = setup(Ring::Z);
        assert_eq!(parse_element("[b, a]", &alg).unwrap(), -&w(&alg, "ab"));
        assert!(parse_element("[a, a]", &alg).unwrap().is_zero());
        assert_eq!(parse_element("[[a,b], a]", &alg).unwrap(), -&w(&alg, "aab"));
        assert_eq!(parse_element("[a,[a,b]] + 2*a", &alg).unwrap(), &w(&alg, "aab") + &w(&alg, "a").scale_int(2));
        assert_eq!(parse_element("(a)(b+1)(b+0)", &alg).unwrap(), &w(&alg, "abb") + &w(&alg, "ab"));
        assert_eq!(parse_element("(a)(b-2)", &alg).unwrap(), &w(&alg, "ab") - &w(&alg, "a").scale_int(2));
        assert_eq!(parse_element("-[a,b]", &alg).unwrap(), -&w(&alg, "ab"));
        assert!(parse_element("0", &alg).unwrap().is_zero());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let alg = setup(Ring::Z);
        match parse_expr("[a a]", alg.alphabet(), Ring::Z) {
            Err(Error::Syntax { line, column, message }) => {
                assert_eq!((line, column), (1, 4));
                assert!(message.contains("','"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("[a, c]", alg.alphabet(), Ring::Z), Err(Error::UnboundSymbol(_))));
        assert!(matches!(parse_expr("1/2*a", alg.alphabet(), Ring::Z), Err(Error::RingMismatch(_))));
        assert!(parse_expr("1/2*a", alg.alphabet(), Ring::Q).is_ok());
        assert!(parse_expr("", alg.alphabet(), Ring::Z).is_err());
        assert!(parse_expr("(a)(b)", alg.alphabet(), Ring::Z).is_err());
        assert!(parse_expr("2 a", alg.alphabet(), Ring::Z).is_err());
    }

    #[test]
    fn chain_alpha_lookahead() {
        let alg = setup(Ring::Q);
        let e = parse_expr("(a)(b + 2*a - 1/2)", alg.alphabet(), Ring::Q).unwrap();
        let Factor::Group(_, chain) = &e.first.factor else { panic!() };
        assert_eq!(chain[0].alpha, Coefficient::ratio(-1, 2));
        assert_eq!(chain[0].shift.rest.len(), 1);
    }

    #[test]
    fn element_display_reparses() {
        let alg = setup(Ring::Q);
        let e = parse_element("3*[[a,b],b] - 1/2*[a,[a,b]] + b", &alg).unwrap();
        assert_eq!(parse_element(&e.to_string(), &alg).unwrap(), e);
    }

    #[test]
    fn random_round_trip_and_oracle() {
        let alg = setup(Ring::Z);
        let gen = ExprGen { alphabet: alg.alphabet(), ring: Ring::Z, max_degree: 5, coeff_bound: 9, chains: true };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let e = gen.expr(&mut rng);
            assert!(e.degree() <= 5);
            let text = e.to_string();
            assert_eq!(parse_expr(&text, alg.alphabet(), Ring::Z).unwrap(), e, "{text}");
            let nf = normal_form(&e, &alg).unwrap();
            assert_eq!(to_associative(&nf), expand_associative(&e, alg.alphabet()).unwrap(), "{text}");
        }
    }
}
