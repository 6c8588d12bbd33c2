use std::sync::Arc;

use freelie::formula::{bounded_eval_capped, parse_formula, Env, Value, DEFAULT_SEARCH_CAP};
use freelie::hall::bracketing_of;
use freelie::interp::{
    auxiliary_element, default_window, in_rz, nat_certify, rx_combine, transport, width_check, NatCertificate, RxOp,
    WidthReport,
};
use freelie::json::{element_from_json_in, ElementJson};
use freelie::scalars::{brute_force_psw, psw_space, sym_space, truncated_free_lie_instance, FiniteBilinearInstance, FiniteRingTable};
use freelie::suite::{run_criterion, CRITERIA};
use freelie::{
    decompose_l2, divide_shifted, lyndon_words, main_lemma_witness, normal_form, parse_element, parse_expr, proportional,
    shifted_chain, witt_dimension, Algebra, Alphabet, Coefficient, LieElement,
};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::{Command, Global};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] freelie::Error),
    #[error("{0}")]
    Absent(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(e) => e.kind(),
            CliError::Absent(_) => "absent",
            CliError::Io(_) => "io",
        }
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Human text, JSON form and exit code of a successful command.
pub struct Output {
    pub text: String,
    pub json: Json,
    pub code: u8,
}

impl Output {
    fn new(text: impl Into<String>, json: Json) -> Self {
        Output { text: text.into(), json, code: 0 }
    }

    fn element(u: &LieElement) -> Self {
        Output::new(u.to_string(), element_json(u))
    }

    fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

fn element_json(u: &LieElement) -> Json {
    serde_json::to_value(ElementJson::from_element(u)).expect("element serializes")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn coefficient(text: &str) -> Result<Coefficient> {
    text.trim().parse().map_err(|_| usage(format!("invalid coefficient {text:?}")))
}

fn coefficient_list(text: &str) -> Result<Vec<Coefficient>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(coefficient).collect()
}

fn window(text: &str) -> Result<Vec<Coefficient>> {
    let (lo, hi) = text.split_once("..").ok_or_else(|| usage(format!("window {text:?} is not of the form lo..hi")))?;
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| usage(format!("invalid window bound {s:?}")));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(usage(format!("empty window {text:?}")));
    }
    Ok((lo..=hi).map(Coefficient::from_int).collect())
}

fn coefficient_json(c: &Coefficient) -> Json {
    match c.to_i64() {
        Some(n) => json!(n),
        None => json!(c.to_string()),
    }
}

struct Ctx {
    algebra: Arc<Algebra>,
}

impl Ctx {
    /// An element from an expression or from element JSON.
    fn el(&self, text: &str) -> Result<LieElement> {
        if text.trim_start().starts_with('{') {
            Ok(element_from_json_in(text, &self.algebra)?)
        } else {
            Ok(parse_element(text, &self.algebra)?)
        }
    }

    fn gens(&self, given: &[String], default_count: usize) -> Result<Vec<LieElement>> {
        if given.is_empty() {
            let letters = self.algebra.alphabet().letters();
            if default_count > letters.len() {
                return Err(usage(format!("{default_count} generators requested, the alphabet has {}", letters.len())));
            }
            return letters[..default_count].iter().map(|l| Ok(LieElement::generator(&self.algebra, l)?)).collect();
        }
        given.iter().map(|g| self.el(g)).collect()
    }
}

fn read_instance(arg: &str) -> Result<FiniteBilinearInstance> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| freelie::Error::InvalidInstance(e.to_string()).into())
}

fn matrix_text(m: &[Vec<u64>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))).collect();
    format!("[{}]", rows.join(" "))
}

fn ring_output(ring: &FiniteRingTable) -> Output {
    let mut text = format!("|P_SW| = {} over F_{}\n", ring.len(), ring.p);
    for t in &ring.elements {
        text.push_str(&format!("A={} B={} sigma={}\n", matrix_text(&t.a), matrix_text(&t.b), matrix_text(&t.sigma)));
    }
    let iso = ring.prime_field_isomorphism().is_some();
    text.push_str(&format!("isomorphic to F_{}: {}", ring.p, if iso { "yes" } else { "no" }));
    let mut value = serde_json::to_value(ring).expect("ring serializes");
    value["size"] = json!(ring.len());
    value["isomorphic_to_prime_field"] = json!(iso);
    Output::new(text, value)
}

fn certificate_output(cert: &NatCertificate, window: &[Coefficient]) -> Output {
    let mut text = format!("v = {}\naux = {}\nmax degree = {}\n", cert.v, cert.aux, cert.max_degree);
    let mut table = Vec::new();
    for (k, u) in &cert.table {
        match u {
            Some(u) => text.push_str(&format!("k={k}: v = ({u})(b+{k})\n")),
            None => text.push_str(&format!("k={k}: not divisible\n")),
        }
        table.push(json!({"k": coefficient_json(k), "quotient": u.as_ref().map(element_json)}));
    }
    let divisible = cert.divisible();
    let listed: Vec<String> = divisible.iter().map(ToString::to_string).collect();
    text.push_str(&format!("divisible: {{{}}}\n", listed.join(",")));
    match cert.counterexample() {
        None => text.push_str(&format!("holds: divisible exactly on 0..{}", cert.m)),
        Some(k) => text.push_str(&format!("counterexample at k={k}")),
    }
    let value = json!({
        "b": element_json(&cert.b),
        "m": cert.m,
        "aux": element_json(&cert.aux),
        "v": element_json(&cert.v),
        "max_degree": cert.max_degree,
        "window": window.iter().map(coefficient_json).collect::<Vec<_>>(),
        "divisible": divisible.iter().map(coefficient_json).collect::<Vec<_>>(),
        "holds": cert.holds(),
        "ladder_holds": cert.ladder_holds(),
        "counterexample": cert.counterexample().as_ref().map(coefficient_json),
        "table": table,
    });
    Output::new(text, value).with_code(if cert.holds() { 0 } else { 1 })
}

fn suite(seed: u64, only: Option<&str>) -> Result<Output> {
    let ids: Vec<u32> = match only {
        None => CRITERIA.iter().map(|(id, _)| *id).collect(),
        Some(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|id| CRITERIA.iter().any(|(i, _)| i == id))
                    .ok_or_else(|| usage(format!("unknown criterion {s:?}")))
            })
            .collect::<Result<_>>()?,
    };
    let reports: Vec<_> = ids.iter().filter_map(|id| run_criterion(*id, seed)).collect();
    let passed = reports.iter().filter(|r| r.passed).count();
    let mut text = format!("suite seed {seed}\n");
    for r in &reports {
        text.push_str(&format!("{r}\n"));
    }
    text.push_str(&format!("{passed}/{} criteria passed", reports.len()));
    let value = json!({
        "seed": seed,
        "criteria": reports
            .iter()
            .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
            .collect::<Vec<_>>(),
        "passed": passed == reports.len(),
    });
    Ok(Output::new(text, value).with_code(if passed == reports.len() { 0 } else { 1 }))
}

pub fn run(global: &Global, command: &Command) -> Result<Output> {
    let alphabet = Alphabet::parse(&global.alphabet).map_err(|e| usage(e.to_string()))?;
    if global.max_degree == Some(0) {
        return Err(usage("--max-degree must be at least 1"));
    }
    match command {
        Command::Suite { only } => return suite(global.seed, only.as_deref()),
        Command::Dims => {
            let d = global.max_degree.unwrap_or(8);
            let k = alphabet.len() as u64;
            let dims: Vec<String> = (1..=d as u64).map(|n| witt_dimension(k, n).to_string()).collect();
            let text = dims.iter().enumerate().map(|(n, x)| format!("{:>3}  {x}", n + 1)).collect::<Vec<_>>().join("\n");
            let value = json!({
                "k": k,
                "dims": dims.iter().enumerate().map(|(n, x)| json!({"degree": n + 1, "dimension": x})).collect::<Vec<_>>(),
            });
            return Ok(Output::new(text, value));
        }
        Command::ScalarsSym { instance } => {
            let inst = read_instance(instance)?;
            let basis = sym_space(&inst);
            let mut text = format!("dimension {}\n", basis.len());
            for (a, b) in &basis {
                text.push_str(&format!("A={} B={}\n", matrix_text(a), matrix_text(b)));
            }
            let value = json!({
                "dimension": basis.len(),
                "basis": basis.iter().map(|(a, b)| json!({"A": a, "B": b})).collect::<Vec<_>>(),
            });
            return Ok(Output::new(text, value));
        }
        Command::ScalarsPsw { instance } => return Ok(ring_output(&psw_space(&read_instance(instance)?)?)),
        Command::ScalarsBrute { instance } => return Ok(ring_output(&brute_force_psw(&read_instance(instance)?)?)),
        Command::ScalarsLieInstance { k, p } => {
            let inst = truncated_free_lie_instance(*k, *p, global.max_degree.unwrap_or(2))?;
            let value = serde_json::to_value(&inst).expect("instance serializes");
            let (d1, d2, dn) = inst.dims();
            let text = format!("d1={d1} d2={d2} dN={dn}\n{value}");
            return Ok(Output::new(text, value));
        }
        Command::Eval { formula, bindings, cap } => {
            let formula = parse_formula(formula)?;
            let ctx = Ctx { algebra: Algebra::new(alphabet, global.ring) };
            let mut env = Env::new();
            for b in bindings {
                let (name, value) = b.split_once('=').ok_or_else(|| usage(format!("binding {b:?} is not name=value")))?;
                let value = match value.trim().parse::<Coefficient>() {
                    Ok(c) => {
                        ctx.algebra.ring().check(&c)?;
                        Value::Scalar(c)
                    }
                    Err(_) => Value::Lie(ctx.el(value)?),
                };
                env.insert(name.trim().to_string(), value);
            }
            let ev = bounded_eval_capped(&formula, &env, &ctx.algebra, cap.unwrap_or(DEFAULT_SEARCH_CAP))?;
            let mut text = format!("verdict: {}\n", ev.verdict);
            for (var, value) in &ev.evidence {
                text.push_str(&format!("{var} = {value}\n"));
            }
            if let Some(atom) = &ev.decided_by {
                text.push_str(&format!("decided by: {atom}"));
            }
            let value = json!({
                "verdict": ev.verdict.as_str(),
                "evidence": ev
                    .evidence
                    .iter()
                    .map(|(var, v)| json!({"var": var, "value": v.to_string()}))
                    .collect::<Vec<_>>(),
                "decided_by": ev.decided_by,
            });
            return Ok(Output::new(text, value));
        }
        _ => {}
    }

    let ctx = Ctx { algebra: Algebra::new(alphabet, global.ring) };
    match command {
        Command::Hall => {
            let d = global.max_degree.unwrap_or(4);
            let words = lyndon_words(ctx.algebra.alphabet(), d)?;
            let alphabet = ctx.algebra.alphabet();
            let mut lines = Vec::new();
            let mut entries = Vec::new();
            for w in words.iter().flatten() {
                let word = alphabet.word_text(w.letters());
                let bracket = bracketing_of(w).display(alphabet).to_string();
                lines.push(format!("{:>3}  {word}  {bracket}", w.degree()));
                entries.push(json!({"degree": w.degree(), "word": word, "bracket": bracket}));
            }
            let value = json!({"alphabet": alphabet.letters(), "max_degree": d, "count": entries.len(), "basis": entries});
            Ok(Output::new(lines.join("\n"), value))
        }
        Command::Nf { expr } => {
            if expr.trim_start().starts_with('{') {
                return Ok(Output::element(&ctx.el(expr)?));
            }
            let e = parse_expr(expr, ctx.algebra.alphabet(), ctx.algebra.ring())?;
            Ok(Output::element(&normal_form(&e, &ctx.algebra)?))
        }
        Command::Mul { u, v } => Ok(Output::element(&ctx.el(u)?.bracket(&ctx.el(v)?)?)),
        Command::Shift { u, v, alphas } => {
            let alphas = coefficient_list(alphas)?;
            Ok(Output::element(&shifted_chain(&ctx.el(u)?, &ctx.el(v)?, &alphas)?))
        }
        Command::Divide { target, v, alpha } => {
            let alpha = coefficient(alpha)?;
            match divide_shifted(&ctx.el(target)?, &ctx.el(v)?, &alpha)? {
                Some(u) => Ok(Output::element(&u)),
                None => Err(CliError::Absent(format!("no u over {} with target = u(v+{alpha})", ctx.algebra.ring()))),
            }
        }
        Command::LemmaMain { v, pairs } => {
            let pairs = pairs
                .iter()
                .map(|p| {
                    let (a, u) = p.split_once(':').ok_or_else(|| usage(format!("pair {p:?} is not alpha:element")))?;
                    Ok((coefficient(a)?, ctx.el(u)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let wit = main_lemma_witness(&ctx.el(v)?, &pairs)?;
            let text = format!("gamma = {}\nw = {}", wit.gamma, wit.w);
            Ok(Output::new(text, json!({"gamma": wit.gamma.to_string(), "w": element_json(&wit.w)})))
        }
        Command::DecomposeL2 { p, gens } => {
            let gens = ctx.gens(gens, ctx.algebra.rank())?;
            let parts = decompose_l2(&ctx.el(p)?, &gens)?;
            let text = parts.iter().map(|s| format!("[{}, {}]", s.z, gens[s.gen_index])).collect::<Vec<_>>().join("\n");
            let value = json!({
                "summands": parts
                    .iter()
                    .map(|s| json!({"z": element_json(&s.z), "gen_index": s.gen_index, "gen": gens[s.gen_index].to_string()}))
                    .collect::<Vec<_>>(),
            });
            Ok(Output::new(text, value))
        }
        Command::Centralizer { u, v } => Ok(match proportional(&ctx.el(u)?, &ctx.el(v)?)? {
            Some((a, b)) => Output::new(
                format!("proportional: {a}*u = {b}*v"),
                json!({"proportional": true, "alpha": a.to_string(), "beta": b.to_string()}),
            ),
            None => Output::new("not proportional", json!({"proportional": false})),
        }),
        Command::InLine { x, z } => Ok(match in_rz(&ctx.el(x)?, &ctx.el(z)?)? {
            Some(r) => Output::new(format!("on the line: x = {r}*z"), json!({"on_line": true, "r": r.to_string()})),
            None => Output::new("not on the line", json!({"on_line": false, "r": null})),
        }),
        Command::Transport { x, x_prime, y } => match transport(&ctx.el(x)?, &ctx.el(x_prime)?, &ctx.el(y)?)? {
            Some(y) => Ok(Output::element(&y)),
            None => Err(CliError::Absent("x' is not on the line Rx".into())),
        },
        Command::Rx { x, p, q, op } => {
            let op: RxOp = op.parse()?;
            Ok(Output::element(&rx_combine(&ctx.el(x)?, &ctx.el(p)?, &ctx.el(q)?, op)?))
        }
        Command::NatCertify { b, m, window: w } => {
            let window = match w {
                Some(w) => window(w)?,
                None => default_window(*m),
            };
            let b = ctx.el(b)?;
            let d = match global.max_degree {
                Some(d) => d,
                None => {
                    let wb = b.weight()?;
                    let aux = auxiliary_element(&b, wb + 1)?;
                    aux.weight()? + (*m as usize + 1) * wb
                }
            };
            Ok(certificate_output(&nat_certify(&b, *m, &window, d)?, &window))
        }
        Command::WidthCheck { m, gens } => {
            let gens = ctx.gens(gens, *m)?;
            let d = global.max_degree.unwrap_or(4);
            Ok(match width_check(*m, &gens, d)? {
                WidthReport::Pass { checked } => Output::new(
                    format!("pass: {checked} basis elements of degree 2..{d} have width <= {m}"),
                    json!({"result": "pass", "checked": checked}),
                ),
                WidthReport::Failure { witness } => Output::new(
                    format!("failure: {witness} is not a sum of {m} brackets with the given generators"),
                    json!({"result": "failure", "witness": element_json(&witness)}),
                )
                .with_code(1),
            })
        }
        _ => unreachable!("handled above"),
    }
}
