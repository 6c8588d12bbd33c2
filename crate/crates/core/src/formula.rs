//! First-order formulas over a free Lie algebra and their bounded,
//! three-valued evaluation.
//!
//! ```text
//! formula := disj ['->' formula]
//! disj    := conj ('|' conj)*
//! conj    := unary ('&' unary)*
//! unary   := '~' unary | quant | '(' formula ')' | atom
//! quant   := ('E' | 'A') ['[' bound (',' bound)* ']'] var [':' sort] '.' formula
//! bound   := 'd' '<=' int | 'h' '<=' int | 'complete'
//! sort    := 'lie' | 'scalar'
//! atom    := 'in_line' '(' term ',' term ')' | term ('=' | '!=') term
//! term    := prod (('+' | '-') prod)*
//! prod    := neg (('*' | '/') neg)*
//! neg     := '-' neg | primary
//! primary := int | name | '[' term ',' term ']' | 'sp' '(' term ',' term ',' term ')'
//!          | '(' term ')' ('(' term ')')*
//! ```
//!
//! Terms are sorted at evaluation time: a value is either a Lie element or a
//! scalar, and the scalar `0` doubles as the zero element. A group followed by
//! chain factors `(u)(v+k)…` is a shifted chain; each factor is split into its
//! Lie part `v` and scalar part `k`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::coeff::{Coefficient, Ring};
use crate::element::{Algebra, LieElement};
use crate::error::{Error, Result};
use crate::hall::{basis_up_to, LyndonWord};
use crate::interp::in_rz;
use crate::lexer::{Cursor, Tok};
use crate::shifted::shift_once;

/// Largest candidate space a single quantifier may search.
pub const DEFAULT_SEARCH_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermAst {
    Num(Coefficient),
    Name(String),
    Add(Box<TermAst>, Box<TermAst>),
    Sub(Box<TermAst>, Box<TermAst>),
    Neg(Box<TermAst>),
    Mul(Box<TermAst>, Box<TermAst>),
    Div(Box<TermAst>, Box<TermAst>),
    Bracket(Box<TermAst>, Box<TermAst>),
    Chain(Box<TermAst>, Vec<TermAst>),
    Sp(Box<TermAst>, Box<TermAst>, Box<TermAst>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Lie,
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantKind {
    Exists,
    Forall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantifier {
    pub kind: QuantKind,
    pub var: String,
    pub sort: Sort,
    pub max_degree: Option<usize>,
    pub max_height: Option<u64>,
    /// The caller asserts the bounded search space is exhaustive.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Eq(TermAst, TermAst),
    Neq(TermAst, TermAst),
    InLine(TermAst, TermAst),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Box<Formula>),
}

impl fmt::Display for TermAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermAst::Num(c) => write!(f, "{c}"),
            TermAst::Name(n) => f.write_str(n),
            TermAst::Add(a, b) => write!(f, "({a} + {b})"),
            TermAst::Sub(a, b) => write!(f, "({a} - {b})"),
            TermAst::Neg(a) => write!(f, "-{a}"),
            TermAst::Mul(a, b) => write!(f, "{a}*{b}"),
            TermAst::Div(a, b) => write!(f, "{a}/{b}"),
            TermAst::Bracket(a, b) => write!(f, "[{a},{b}]"),
            TermAst::Chain(base, factors) => {
                write!(f, "({base})")?;
                for t in factors {
                    write!(f, "({t})")?;
                }
                Ok(())
            }
            TermAst::Sp(u, v, k) => write!(f, "sp({u},{v},{k})"),
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.kind {
            QuantKind::Exists => "E",
            QuantKind::Forall => "A",
        })?;
        let mut bounds = Vec::new();
        if let Some(d) = self.max_degree {
            bounds.push(format!("d<={d}"));
        }
        if let Some(h) = self.max_height {
            bounds.push(format!("h<={h}"));
        }
        if self.complete {
            bounds.push("complete".into());
        }
        if !bounds.is_empty() {
            write!(f, "[{}]", bounds.join(","))?;
        }
        write!(f, " {}", self.var)?;
        if self.sort == Sort::Scalar {
            f.write_str(":scalar")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Neq(a, b) => write!(f, "{a} != {b}"),
            Formula::InLine(a, b) => write!(f, "in_line({a},{b})"),
            Formula::Not(a) => write!(f, "~({a})"),
            Formula::And(a, b) => write!(f, "({a}) & ({b})"),
            Formula::Or(a, b) => write!(f, "({a}) | ({b})"),
            Formula::Implies(a, b) => write!(f, "({a}) -> ({b})"),
            Formula::Quant(q, body) => write!(f, "{q}. ({body})"),
        }
    }
}

/// Parses formula text. Names are resolved at evaluation time.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut cur = Cursor::new(text)?;
    if *cur.peek() == Tok::End {
        return Err(cur.error("empty formula"));
    }
    let f = formula(&mut cur)?;
    cur.expect_end()?;
    Ok(f)
}

/// Parses a single term, as used for environment values.
pub fn parse_term(text: &str) -> Result<TermAst> {
    let mut cur = Cursor::new(text)?;
    let t = term(&mut cur)?;
    cur.expect_end()?;
    Ok(t)
}

fn formula(cur: &mut Cursor) -> Result<Formula> {
    let lhs = disj(cur)?;
    if cur.eat(&Tok::Arrow) {
        return Ok(Formula::Implies(Box::new(lhs), Box::new(formula(cur)?)));
    }
    Ok(lhs)
}

fn disj(cur: &mut Cursor) -> Result<Formula> {
    let mut f = conj(cur)?;
    while cur.eat(&Tok::Pipe) {
        f = Formula::Or(Box::new(f), Box::new(conj(cur)?));
    }
    Ok(f)
}

fn conj(cur: &mut Cursor) -> Result<Formula> {
    let mut f = unary(cur)?;
    while cur.eat(&Tok::Amp) {
        f = Formula::And(Box::new(f), Box::new(unary(cur)?));
    }
    Ok(f)
}

fn unary(cur: &mut Cursor) -> Result<Formula> {
    match (cur.peek().clone(), cur.peek_at(1).clone()) {
        (Tok::Tilde, _) => {
            cur.bump();
            Ok(Formula::Not(Box::new(unary(cur)?)))
        }
        (Tok::Ident(q), Tok::LBracket | Tok::Ident(_)) if q == "E" || q == "A" => quantifier(cur),
        (Tok::LParen, _) => {
            let save = cur.pos;
            cur.bump();
            if let Ok(f) = formula(cur).and_then(|f| cur.expect(&Tok::RParen).map(|_| f)) {
                return Ok(f);
            }
            cur.pos = save;
            atom(cur)
        }
        _ => atom(cur),
    }
}

fn int_bound(cur: &mut Cursor) -> Result<u64> {
    cur.expect(&Tok::Le)?;
    match cur.bump() {
        Tok::Int(s) => s.parse().map_err(|_| cur.error(format!("bound {s} is too large"))),
        other => Err(cur.error(format!("expected integer bound, found {}", other.describe()))),
    }
}

fn quantifier(cur: &mut Cursor) -> Result<Formula> {
    let kind = match cur.bump() {
        Tok::Ident(q) if q == "E" => QuantKind::Exists,
        _ => QuantKind::Forall,
    };
    let (mut max_degree, mut max_height, mut complete) = (None, None, false);
    if cur.eat(&Tok::LBracket) {
        loop {
            match cur.bump() {
                Tok::Ident(s) if s == "d" => max_degree = Some(int_bound(cur)? as usize),
                Tok::Ident(s) if s == "h" => max_height = Some(int_bound(cur)?),
                Tok::Ident(s) if s == "complete" => complete = true,
                other => return Err(cur.error(format!("expected d, h or complete, found {}", other.describe()))),
            }
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.expect(&Tok::RBracket)?;
    }
    let var = match cur.bump() {
        Tok::Ident(v) => v,
        other => return Err(cur.error(format!("expected variable, found {}", other.describe()))),
    };
    let mut sort = Sort::Lie;
    if cur.eat(&Tok::Colon) {
        sort = match cur.bump() {
            Tok::Ident(s) if s == "lie" => Sort::Lie,
            Tok::Ident(s) if s == "scalar" => Sort::Scalar,
            other => return Err(cur.error(format!("expected lie or scalar, found {}", other.describe()))),
        };
    }
    cur.expect(&Tok::Dot)?;
    let body = formula(cur)?;
    Ok(Formula::Quant(Quantifier { kind, var, sort, max_degree, max_height, complete }, Box::new(body)))
}

fn atom(cur: &mut Cursor) -> Result<Formula> {
    if matches!(cur.peek(), Tok::Ident(s) if s == "in_line") && *cur.peek_at(1) == Tok::LParen {
        cur.bump();
        cur.bump();
        let x = term(cur)?;
        cur.expect(&Tok::Comma)?;
        let z = term(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(Formula::InLine(x, z));
    }
    let lhs = term(cur)?;
    match cur.bump() {
        Tok::Eq => Ok(Formula::Eq(lhs, term(cur)?)),
        Tok::Neq => Ok(Formula::Neq(lhs, term(cur)?)),
        other => Err(cur.error(format!("expected '=' or '!=', found {}", other.describe()))),
    }
}

fn term(cur: &mut Cursor) -> Result<TermAst> {
    let mut t = prod(cur)?;
    loop {
        if cur.eat(&Tok::Plus) {
            t = TermAst::Add(Box::new(t), Box::new(prod(cur)?));
        } else if cur.eat(&Tok::Minus) {
            t = TermAst::Sub(Box::new(t), Box::new(prod(cur)?));
        } else {
            return Ok(t);
        }
    }
}

fn prod(cur: &mut Cursor) -> Result<TermAst> {
    let mut t = neg(cur)?;
    loop {
        if cur.eat(&Tok::Star) {
            t = TermAst::Mul(Box::new(t), Box::new(neg(cur)?));
        } else if cur.eat(&Tok::Slash) {
            t = TermAst::Div(Box::new(t), Box::new(neg(cur)?));
        } else {
            return Ok(t);
        }
    }
}

fn neg(cur: &mut Cursor) -> Result<TermAst> {
    if cur.eat(&Tok::Minus) {
        return Ok(TermAst::Neg(Box::new(neg(cur)?)));
    }
    primary(cur)
}

fn primary(cur: &mut Cursor) -> Result<TermAst> {
    match cur.peek().clone() {
        Tok::Int(s) => {
            cur.bump();
            let c: Coefficient = s.parse().map_err(|_| cur.error(format!("invalid integer {s}")))?;
            Ok(TermAst::Num(c))
        }
        Tok::Ident(name) if name == "sp" && *cur.peek_at(1) == Tok::LParen => {
            cur.bump();
            cur.bump();
            let u = term(cur)?;
            cur.expect(&Tok::Comma)?;
            let v = term(cur)?;
            cur.expect(&Tok::Comma)?;
            let k = term(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(TermAst::Sp(Box::new(u), Box::new(v), Box::new(k)))
        }
        Tok::Ident(name) => {
            cur.bump();
            Ok(TermAst::Name(name))
        }
        Tok::LBracket => {
            cur.bump();
            let a = term(cur)?;
            cur.expect(&Tok::Comma)?;
            let b = term(cur)?;
            cur.expect(&Tok::RBracket)?;
            Ok(TermAst::Bracket(Box::new(a), Box::new(b)))
        }
        Tok::LParen => {
            cur.bump();
            let inner = term(cur)?;
            cur.expect(&Tok::RParen)?;
            let mut factors = Vec::new();
            while *cur.peek() == Tok::LParen {
                cur.bump();
                factors.push(term(cur)?);
                cur.expect(&Tok::RParen)?;
            }
            if factors.is_empty() {
                Ok(inner)
            } else {
                Ok(TermAst::Chain(Box::new(inner), factors))
            }
        }
        other => Err(cur.error(format!("expected a term, found {}", other.describe()))),
    }
}

/// A Lie element or a scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Lie(LieElement),
    Scalar(Coefficient),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Lie(u) => write!(f, "{u}"),
            Value::Scalar(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    WitnessedTrue,
    CounterexampleFalse,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::WitnessedTrue => "witnessed-true",
            Verdict::CounterexampleFalse => "counterexample-false",
            Verdict::Unknown => "unknown",
        }
    }

    fn not(self) -> Verdict {
        match self {
            Verdict::WitnessedTrue => Verdict::CounterexampleFalse,
            Verdict::CounterexampleFalse => Verdict::WitnessedTrue,
            Verdict::Unknown => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of bounded evaluation with the evidence that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub verdict: Verdict,
    /// Quantifier instantiations leading to the deciding atom, outermost first.
    pub evidence: Vec<(String, Value)>,
    /// The atom whose direct evaluation decided the verdict.
    pub decided_by: Option<String>,
}

impl Evaluation {
    fn unknown() -> Self {
        Evaluation { verdict: Verdict::Unknown, evidence: Vec::new(), decided_by: None }
    }
}

pub type Env = BTreeMap<String, Value>;

/// Evaluates `formula` under `env`, searching each quantifier over its bounds.
pub fn bounded_eval(formula: &Formula, env: &Env, algebra: &Arc<Algebra>) -> Result<Evaluation> {
    bounded_eval_capped(formula, env, algebra, DEFAULT_SEARCH_CAP)
}

pub fn bounded_eval_capped(formula: &Formula, env: &Env, algebra: &Arc<Algebra>, cap: u64) -> Result<Evaluation> {
    for v in env.values() {
        if let Value::Lie(u) = v {
            if u.algebra() != algebra {
                return Err(Error::AlgebraMismatch);
            }
        }
    }
    let ev = Evaluator { algebra, cap };
    let mut env = env.clone();
    let out = ev.eval(formula, &mut env)?;
    if out.verdict != Verdict::Unknown && !ev.confirm(formula, &mut env, &out.evidence, out.verdict)? {
        return Err(Error::Internal("evidence does not reproduce the verdict".into()));
    }
    Ok(out)
}

struct Evaluator<'a> {
    algebra: &'a Arc<Algebra>,
    cap: u64,
}

impl Evaluator<'_> {
    fn lie(&self, v: Value, what: &TermAst) -> Result<LieElement> {
        match v {
            Value::Lie(u) => Ok(u),
            Value::Scalar(c) if c.is_zero() => Ok(LieElement::zero(self.algebra)),
            Value::Scalar(c) => Err(Error::Sort(format!("{what} is the scalar {c}, expected a Lie element"))),
        }
    }

    fn scalar(&self, v: Value, what: &TermAst) -> Result<Coefficient> {
        match v {
            Value::Scalar(c) => Ok(c),
            Value::Lie(u) => Err(Error::Sort(format!("{what} is the Lie element {u}, expected a scalar"))),
        }
    }

    fn term(&self, t: &TermAst, env: &Env) -> Result<Value> {
        use TermAst as T;
        Ok(match t {
            T::Num(c) => {
                self.algebra.ring().check(c)?;
                Value::Scalar(c.clone())
            }
            T::Name(n) => match env.get(n) {
                Some(v) => v.clone(),
                None => Value::Lie(LieElement::generator(self.algebra, n)?),
            },
            T::Add(a, b) | T::Sub(a, b) => {
                let (x, y) = (self.term(a, env)?, self.term(b, env)?);
                let minus = matches!(t, T::Sub(..));
                match (x, y) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if minus { x - y } else { x + y }),
                    (x, y) => {
                        let (x, y) = (self.lie(x, a)?, self.lie(y, b)?);
                        Value::Lie(if minus { x.try_sub(&y)? } else { x.try_add(&y)? })
                    }
                }
            }
            T::Neg(a) => match self.term(a, env)? {
                Value::Scalar(c) => Value::Scalar(-c),
                Value::Lie(u) => Value::Lie(-u),
            },
            T::Mul(a, b) => match (self.term(a, env)?, self.term(b, env)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
                (Value::Scalar(c), Value::Lie(u)) | (Value::Lie(u), Value::Scalar(c)) => Value::Lie(u.scale(&c)?),
                (Value::Lie(_), Value::Lie(_)) => {
                    return Err(Error::Sort(format!("{t} multiplies two Lie elements; write [u,v]")))
                }
            },
            T::Div(a, b) => {
                let x = self.scalar(self.term(a, env)?, a)?;
                let y = self.scalar(self.term(b, env)?, b)?;
                let q = x.checked_div(&y).ok_or_else(|| Error::InvalidArgument(format!("{t} divides by zero")))?;
                self.algebra.ring().check(&q)?;
                Value::Scalar(q)
            }
            T::Bracket(a, b) => {
                let x = self.lie(self.term(a, env)?, a)?;
                let y = self.lie(self.term(b, env)?, b)?;
                Value::Lie(x.bracket(&y)?)
            }
            T::Chain(base, factors) => {
                let mut u = self.lie(self.term(base, env)?, base)?;
                for fac in factors {
                    let (v, k) = self.mixed(fac, env)?;
                    u = shift_once(&u, &v, &k)?;
                }
                Value::Lie(u)
            }
            T::Sp(u, v, k) => {
                let u2 = self.lie(self.term(u, env)?, u)?;
                let v2 = self.lie(self.term(v, env)?, v)?;
                let k2 = self.scalar(self.term(k, env)?, k)?;
                Value::Lie(shift_once(&u2, &v2, &k2)?)
            }
        })
    }

    /// Splits a chain factor into its Lie and scalar parts.
    fn mixed(&self, t: &TermAst, env: &Env) -> Result<(LieElement, Coefficient)> {
        match t {
            TermAst::Add(a, b) | TermAst::Sub(a, b) => {
                let (la, sa) = self.mixed(a, env)?;
                let (lb, sb) = self.mixed(b, env)?;
                if matches!(t, TermAst::Sub(..)) {
                    Ok((la.try_sub(&lb)?, sa - sb))
                } else {
                    Ok((la.try_add(&lb)?, sa + sb))
                }
            }
            TermAst::Neg(a) => {
                let (l, s) = self.mixed(a, env)?;
                Ok((-l, -s))
            }
            _ => match self.term(t, env)? {
                Value::Lie(u) => Ok((u, Coefficient::zero())),
                Value::Scalar(c) => Ok((LieElement::zero(self.algebra), c)),
            },
        }
    }

    fn atom(&self, f: &Formula, env: &Env) -> Result<bool> {
        match f {
            Formula::Eq(a, b) | Formula::Neq(a, b) => {
                let equal = match (self.term(a, env)?, self.term(b, env)?) {
                    (Value::Scalar(x), Value::Scalar(y)) => x == y,
                    (x, y) => self.lie(x, a)? == self.lie(y, b)?,
                };
                Ok(equal == matches!(f, Formula::Eq(..)))
            }
            Formula::InLine(x, z) => {
                let x = self.lie(self.term(x, env)?, x)?;
                let z = self.lie(self.term(z, env)?, z)?;
                if z.is_zero() {
                    return Ok(x.is_zero());
                }
                Ok(in_rz(&x, &z)?.is_some())
            }
            _ => unreachable!("not an atom"),
        }
    }

    fn eval(&self, f: &Formula, env: &mut Env) -> Result<Evaluation> {
        match f {
            Formula::Eq(..) | Formula::Neq(..) | Formula::InLine(..) => {
                let verdict = if self.atom(f, env)? { Verdict::WitnessedTrue } else { Verdict::CounterexampleFalse };
                Ok(Evaluation { verdict, evidence: Vec::new(), decided_by: Some(f.to_string()) })
            }
            Formula::Not(a) => {
                let mut e = self.eval(a, env)?;
                e.verdict = e.verdict.not();
                Ok(e)
            }
            Formula::And(a, b) => self.binary(a, b, env, Verdict::CounterexampleFalse, false),
            Formula::Or(a, b) => self.binary(a, b, env, Verdict::WitnessedTrue, false),
            Formula::Implies(a, b) => self.binary(a, b, env, Verdict::WitnessedTrue, true),
            Formula::Quant(q, body) => self.quant(q, body, env),
        }
    }

    /// Kleene connective: `dominant` on either side decides; `negate_left` turns `a | b` into `a -> b`.
    fn binary(&self, a: &Formula, b: &Formula, env: &mut Env, dominant: Verdict, negate_left: bool) -> Result<Evaluation> {
        let mut left = self.eval(a, env)?;
        if negate_left {
            left.verdict = left.verdict.not();
        }
        if left.verdict == dominant {
            return Ok(left);
        }
        let right = self.eval(b, env)?;
        if right.verdict == dominant || left.verdict == Verdict::Unknown {
            if right.verdict == dominant {
                return Ok(right);
            }
            return Ok(Evaluation::unknown());
        }
        // Both sides non-dominant and decided: the result is the right side's.
        if right.verdict == Verdict::Unknown {
            return Ok(Evaluation::unknown());
        }
        Ok(right)
    }

    fn quant(&self, q: &Quantifier, body: &Formula, env: &mut Env) -> Result<Evaluation> {
        let candidates = self.candidates(q)?;
        let decisive = match q.kind {
            QuantKind::Exists => Verdict::WitnessedTrue,
            QuantKind::Forall => Verdict::CounterexampleFalse,
        };
        let previous = env.remove(&q.var);
        let mut saw_unknown = false;
        let mut found = None;
        for c in candidates {
            env.insert(q.var.clone(), c.clone());
            let e = self.eval(body, env)?;
            if e.verdict == decisive {
                let mut evidence = vec![(q.var.clone(), c)];
                evidence.extend(e.evidence);
                found = Some(Evaluation { verdict: decisive, evidence, decided_by: e.decided_by });
                break;
            }
            saw_unknown |= e.verdict == Verdict::Unknown;
        }
        env.remove(&q.var);
        if let Some(p) = previous {
            env.insert(q.var.clone(), p);
        }
        if let Some(e) = found {
            return Ok(e);
        }
        if q.complete && !saw_unknown {
            return Ok(Evaluation { verdict: decisive.not(), evidence: Vec::new(), decided_by: None });
        }
        Ok(Evaluation::unknown())
    }

    /// Candidates in canonical order: small coefficient indices first.
    fn candidates(&self, q: &Quantifier) -> Result<Vec<Value>> {
        let h = q.max_height.ok_or_else(|| Error::MissingBound(q.var.clone()))?;
        let scalars = scalar_candidates(self.algebra.ring(), h);
        match q.sort {
            Sort::Scalar => {
                if scalars.len() as u64 > self.cap {
                    return Err(Error::TooLarge(format!("{} scalar candidates for {}", scalars.len(), q.var)));
                }
                Ok(scalars.into_iter().map(Value::Scalar).collect())
            }
            Sort::Lie => {
                let d = q.max_degree.ok_or_else(|| Error::MissingBound(q.var.clone()))?;
                let basis = basis_up_to(self.algebra.rank(), d);
                let size = (scalars.len() as u64).checked_pow(basis.len() as u32);
                if size.map_or(true, |s| s > self.cap) {
                    return Err(Error::TooLarge(format!(
                        "{}^{} Lie candidates for {}",
                        scalars.len(),
                        basis.len(),
                        q.var
                    )));
                }
                Ok(lie_candidates(self.algebra, &basis, &scalars).into_iter().map(Value::Lie).collect())
            }
        }
    }

    /// Re-derives a decided verdict from its evidence by direct evaluation.
    fn confirm(&self, f: &Formula, env: &mut Env, evidence: &[(String, Value)], verdict: Verdict) -> Result<bool> {
        match f {
            Formula::Quant(q, body) => {
                let decisive = match q.kind {
                    QuantKind::Exists => Verdict::WitnessedTrue,
                    QuantKind::Forall => Verdict::CounterexampleFalse,
                };
                if verdict != decisive {
                    // Decided by an exhaustive tagged search; nothing to replay.
                    return Ok(q.complete);
                }
                let Some(((var, value), rest)) = evidence.split_first() else {
                    return Ok(false);
                };
                if *var != q.var {
                    return Ok(false);
                }
                let previous = env.insert(var.clone(), value.clone());
                let ok = self.confirm(body, env, rest, verdict);
                env.remove(var);
                if let Some(p) = previous {
                    env.insert(var.clone(), p);
                }
                ok
            }
            _ => Ok(self.eval(f, env)?.verdict == verdict),
        }
    }
}

/// `0, 1, −1, 2, −2, …` up to height `h`; over `Q` each height also contributes
/// its reduced fractions `±p/q` with `max(|p|, q) = h`, ordered by absolute value.
pub fn scalar_candidates(ring: Ring, h: u64) -> Vec<Coefficient> {
    let mut out = vec![Coefficient::zero()];
    let h = h as i64;
    for n in 1..=h {
        let mut level: Vec<Coefficient> = match ring {
            Ring::Z => vec![Coefficient::from_int(n)],
            Ring::Q => (1..=n)
                .flat_map(|q| {
                    let p = if q == n { (1..=n).collect::<Vec<_>>() } else { vec![n] };
                    p.into_iter().filter(move |&p| num_integer::gcd(p, q) == 1).map(move |p| Coefficient::ratio(p, q))
                })
                .collect(),
        };
        level.sort();
        level.dedup();
        for c in level {
            let neg = -&c;
            out.push(c);
            out.push(neg);
        }
    }
    out
}

/// All coefficient vectors over `basis`, ordered by the total of their
/// candidate indices and then lexicographically.
fn lie_candidates(algebra: &Arc<Algebra>, basis: &[LyndonWord], scalars: &[Coefficient]) -> Vec<LieElement> {
    let n = basis.len();
    let top = scalars.len() - 1;
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    for total in 0..=n * top {
        fill(&mut idx, 0, total, top, &mut |idx| {
            let terms = idx
                .iter()
                .zip(basis)
                .filter(|(i, _)| **i != 0)
                .map(|(i, w)| (w.clone(), scalars[*i].clone()))
                .collect();
            out.push(LieElement::from_raw(algebra, terms));
        });
    }
    out
}

fn fill(idx: &mut [usize], pos: usize, remaining: usize, top: usize, emit: &mut dyn FnMut(&[usize])) {
    if pos == idx.len() {
        if remaining == 0 {
            emit(idx);
        }
        return;
    }
    let slots_after = idx.len() - pos - 1;
    for i in 0..=remaining.min(top) {
        if remaining - i > slots_after * top {
            continue;
        }
        idx[pos] = i;
        fill(idx, pos + 1, remaining - i, top, emit);
    }
    idx[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;
    use crate::hall::Alphabet;

    fn setup(ring: Ring) -> Arc<Algebra> {
        Algebra::new(Alphabet::parse("a,b").unwrap(), ring)
    }

    fn env(alg: &Arc<Algebra>, pairs: &[(&str, &str)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), Value::Lie(parse_element(v, alg).unwrap()))).collect()
    }

    fn run(text: &str, alg: &Arc<Algebra>, e: &Env) -> Evaluation {
        bounded_eval(&parse_formula(text).unwrap(), e, alg).unwrap()
    }

    #[test]
    fn scalar_witness() {
        let alg = setup(Ring::Z);
        let e = env(&alg, &[("x", "3*[a,b]"), ("z", "[a,b]")]);
        let out = run("E[h<=5] r:scalar. x = r*z", &alg, &e);
        assert_eq!(out.verdict, Verdict::WitnessedTrue);
        assert_eq!(out.evidence, vec![("r".to_string(), Value::Scalar(Coefficient::from_int(3)))]);
        let out = run("E[h<=2] r:scalar. x = r*z", &alg, &e);
        assert_eq!(out.verdict, Verdict::Unknown);
        let out = run("E[h<=2,complete] r:scalar. x = r*z", &alg, &e);
        assert_eq!(out.verdict, Verdict::CounterexampleFalse);
    }

    #[test]
    fn universal_searches() {
        let alg = setup(Ring::Z);
        let e = Env::new();
        let out = run("A[d<=3,h<=3] u. sp(u,b,1) = 0 -> u = 0", &alg, &e);
        assert_eq!(out.verdict, Verdict::Unknown);
        let out = run("A[d<=3,h<=3] u. [u,b] = 0 -> u = 0", &alg, &e);
        assert_eq!(out.verdict, Verdict::CounterexampleFalse);
        assert_eq!(out.evidence, vec![("u".to_string(), Value::Lie(parse_element("b", &alg).unwrap()))]);
    }

    #[test]
    fn transport_atom() {
        let alg = setup(Ring::Z);
        let e = env(&alg, &[("x", "a"), ("x'", "2*a"), ("y", "b"), ("y'", "3*b")]);
        let out = run("in_line(x', x) & in_line(y', y) & [x', y] = [x, y']", &alg, &e);
        assert_eq!(out.verdict, Verdict::CounterexampleFalse);
        assert_eq!(out.decided_by.as_deref(), Some("[x',y] = [x,y']"));
        let e = env(&alg, &[("x", "a"), ("x'", "2*a"), ("y", "b"), ("y'", "2*b")]);
        assert_eq!(run("in_line(x', x) & in_line(y', y) & [x', y] = [x, y']", &alg, &e).verdict, Verdict::WitnessedTrue);
    }

    #[test]
    fn chains_and_parentheses() {
        let alg = setup(Ring::Z);
        let e = Env::new();
        assert_eq!(run("(a)(b+1)(b+0) = [[a,b],b] + [a,b]", &alg, &e).verdict, Verdict::WitnessedTrue);
        assert_eq!(run("~(a = b) & (a)(b-2) = [a,b] - 2*a", &alg, &e).verdict, Verdict::WitnessedTrue);
        assert_eq!(run("(a = b) | 0 = [a,a]", &alg, &e).verdict, Verdict::WitnessedTrue);
    }

    #[test]
    fn errors() {
        let alg = setup(Ring::Z);
        let e = Env::new();
        let f = parse_formula("E u. u = a").unwrap();
        assert!(matches!(bounded_eval(&f, &e, &alg), Err(Error::MissingBound(_))));
        let f = parse_formula("E[d<=4,h<=9] u. u = a").unwrap();
        assert!(matches!(bounded_eval(&f, &e, &alg), Err(Error::TooLarge(_))));
        let f = parse_formula("[a,1] = 0").unwrap();
        assert!(matches!(bounded_eval(&f, &e, &alg), Err(Error::Sort(_))));
        let f = parse_formula("x = a").unwrap();
        assert!(matches!(bounded_eval(&f, &e, &alg), Err(Error::UnboundSymbol(_))));
        assert!(matches!(parse_formula("a = "), Err(Error::Syntax { .. })));
    }

    #[test]
    fn scalar_orders() {
        let z: Vec<String> = scalar_candidates(Ring::Z, 2).iter().map(|c| c.to_string()).collect();
        assert_eq!(z, ["0", "1", "-1", "2", "-2"]);
        let q: Vec<String> = scalar_candidates(Ring::Q, 2).iter().map(|c| c.to_string()).collect();
        assert_eq!(q, ["0", "1", "-1", "1/2", "-1/2", "2", "-2"]);
    }

    #[test]
    fn lie_candidate_order() {
        let alg = setup(Ring::Z);
        let basis = basis_up_to(2, 1);
        let scalars = scalar_candidates(Ring::Z, 1);
        let c: Vec<String> = lie_candidates(&alg, &basis, &scalars).iter().map(|u| u.to_string()).collect();
        assert_eq!(c.len(), 9);
        assert_eq!(&c[..3], ["0", "b", "a"]);
    }
}
