//! Semantic versions of the interpretation predicates: scalar lines `Rz`, the
//! transport between lines, the ring structure on `Rx`, the divisibility
//! certificate that defines the naturals, and the width check for `L²`.

use crate::coeff::Coefficient;
use crate::element::LieElement;
use crate::error::{Error, Result};
use crate::hall::basis_up_to;
use crate::shifted::{decompose_l2, divide_shifted_within, shifted_chain, Summand};

/// The `r` with `x = r·z`, if `x` lies on the line `Rz`. `0` is on every line.
pub fn in_rz(x: &LieElement, z: &LieElement) -> Result<Option<Coefficient>> {
    x.check_same_algebra(z)?;
    let Some((w, zc)) = z.terms().iter().next() else {
        return Err(Error::InvalidLine("z is zero"));
    };
    if x.is_zero() {
        return Ok(Some(Coefficient::zero()));
    }
    let r = x.coefficient(w).checked_div(zc).expect("nonzero coefficient");
    if !x.ring().contains(&r) || z.scaled(&r) != *x {
        return Ok(None);
    }
    Ok(Some(r))
}

/// The `y′ = r·y` with `x′ = r·x`, so that `x′ ∈ Rx`, `y′ ∈ Ry` and `x′y = xy′`.
pub fn transport(x: &LieElement, x_prime: &LieElement, y: &LieElement) -> Result<Option<LieElement>> {
    if x.is_zero() {
        return Err(Error::InvalidLine("x is zero"));
    }
    if y.is_zero() {
        return Err(Error::InvalidLine("y is zero"));
    }
    x.check_same_algebra(y)?;
    Ok(in_rz(x_prime, x)?.map(|r| y.scaled(&r)))
}

/// Ring operations on the line `Rx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RxOp {
    Plus,
    Times,
}

impl std::str::FromStr for RxOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(RxOp::Plus),
            "times" => Ok(RxOp::Times),
            other => Err(Error::InvalidArgument(format!("unknown operation {other:?}, expected plus or times"))),
        }
    }
}

fn line_coordinate(p: &LieElement, x: &LieElement) -> Result<Coefficient> {
    in_rz(p, x)?.ok_or_else(|| Error::OffLine(p.to_string()))
}

/// `p ⊕ q` or `p ⊗ q` on `Rx`.
///
/// The product is read off the defining clause: for an auxiliary `y` with
/// `xy ≠ 0`, `p ⊗ q = t·x` where `p(s·y) = t·(xy)` and `q = s·x`.
pub fn rx_combine(x: &LieElement, p: &LieElement, q: &LieElement, op: RxOp) -> Result<LieElement> {
    if x.is_zero() {
        return Err(Error::InvalidLine("x is zero"));
    }
    let r = line_coordinate(p, x)?;
    let s = line_coordinate(q, x)?;
    match op {
        RxOp::Plus => p.try_add(q),
        RxOp::Times => {
            let Some(y) = auxiliary_partner(x)? else {
                // Rank one: every bracket vanishes and the clause is vacuous.
                return Ok(x.scaled(&(&r * &s)));
            };
            let xy = x.bracket(&y)?;
            let t = in_rz(&p.bracket(&y.scaled(&s))?, &xy)?
                .ok_or_else(|| Error::Internal("product clause has no solution on the line".into()))?;
            if t != &r * &s {
                return Err(Error::Internal("product clause disagrees with the ring product".into()));
            }
            Ok(x.scaled(&t))
        }
    }
}

/// First generator `y` with `xy ≠ 0`, if any.
fn auxiliary_partner(x: &LieElement) -> Result<Option<LieElement>> {
    for w in basis_up_to(x.algebra().rank(), 1) {
        let y = LieElement::basis(x.algebra(), w);
        if !x.bracket(&y)?.is_zero() {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// Checks the defining clause of `x₁ ⊗ x₂ = x₃` at one `y ≠ 0`:
/// `x₂ = s·x`, `x₃ = t·x` and `x₁(s·y) = t·(xy)`.
pub fn times_clause(x: &LieElement, x1: &LieElement, x2: &LieElement, x3: &LieElement, y: &LieElement) -> Result<bool> {
    if y.is_zero() {
        return Err(Error::InvalidLine("y is zero"));
    }
    let (Some(s), Some(t)) = (in_rz(x2, x)?, in_rz(x3, x)?) else {
        return Ok(false);
    };
    Ok(x1.bracket(&y.scaled(&s))? == x.bracket(y)?.scaled(&t))
}

/// Divisibility table of `v = a·b(b+1)…(b+m)` by the factors `(b+k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatCertificate {
    pub b: LieElement,
    pub m: u32,
    /// Auxiliary chain base `a`.
    pub aux: LieElement,
    pub v: LieElement,
    pub max_degree: usize,
    /// `(k, u)` with `v = u(b+k)` when `u` is present; sorted by `k`.
    pub table: Vec<(Coefficient, Option<LieElement>)>,
}

impl NatCertificate {
    pub fn divisible(&self) -> Vec<Coefficient> {
        self.table.iter().filter(|(_, u)| u.is_some()).map(|(k, _)| k.clone()).collect()
    }

    /// First `k` of the window where divisibility differs from `k ∈ {0,…,m}`.
    pub fn counterexample(&self) -> Option<Coefficient> {
        self.table
            .iter()
            .find(|(k, u)| u.is_some() != in_range(k, self.m))
            .map(|(k, _)| k.clone())
    }

    pub fn holds(&self) -> bool {
        self.counterexample().is_none()
    }

    /// Within the window: divisible at `k` implies divisible at `k+1` unless `k = m`.
    pub fn ladder_holds(&self) -> bool {
        let m = Coefficient::from_int(i64::from(self.m));
        self.table.iter().all(|(k, u)| {
            if u.is_none() || *k == m {
                return true;
            }
            let next = k + &Coefficient::one();
            self.table.iter().find(|(j, _)| *j == next).map_or(true, |(_, u)| u.is_some())
        })
    }

    /// Re-multiplies every recorded quotient.
    pub fn verify(&self) -> Result<bool> {
        for (k, u) in &self.table {
            if let Some(u) = u {
                if shifted_chain(u, &self.b, std::slice::from_ref(k))? != self.v {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn in_range(k: &Coefficient, m: u32) -> bool {
    k.is_integer() && !k.is_negative() && k.to_i64().is_some_and(|k| k <= i64::from(m))
}

/// The window `{−3, …, m+3}`.
pub fn default_window(m: u32) -> Vec<Coefficient> {
    (-3..=i64::from(m) + 3).map(Coefficient::from_int).collect()
}

/// First generator not occurring in `b`; otherwise the first basis element of
/// degree at most `max_degree` outside the support of `b` that does not commute with it.
pub fn auxiliary_element(b: &LieElement, max_degree: usize) -> Result<LieElement> {
    let algebra = b.algebra();
    let used = b.letters();
    if let Some(c) = (0..algebra.rank() as u8).find(|c| !used.contains(c)) {
        return Ok(LieElement::basis(algebra, crate::hall::LyndonWord::letter(c)));
    }
    for w in basis_up_to(algebra.rank(), max_degree) {
        if b.terms().contains_key(&w) {
            continue;
        }
        let e = LieElement::basis(algebra, w);
        if !e.bracket(b)?.is_zero() {
            return Ok(e);
        }
    }
    Err(Error::InvalidArgument(format!("no auxiliary element of degree <= {max_degree} fails to commute with {b}")))
}

/// Builds `v = a·b(b+1)…(b+m)` and tabulates division of `v` by `(b+k)` over the window.
pub fn nat_certify(b: &LieElement, m: u32, window: &[Coefficient], max_degree: usize) -> Result<NatCertificate> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("b must be nonzero".into()));
    }
    for k in 0..=i64::from(m) {
        if !window.contains(&Coefficient::from_int(k)) {
            return Err(Error::InvalidWindow(format!("window does not contain {k}")));
        }
    }
    for k in window {
        b.ring().check(k)?;
    }
    let aux = auxiliary_element(b, max_degree)?;
    let shifts: Vec<Coefficient> = (0..=i64::from(m)).map(Coefficient::from_int).collect();
    let v = shifted_chain(&aux, b, &shifts)?;
    let wv = v.weight().map_err(|_| Error::Internal("chain vanished".into()))?;
    if wv > max_degree {
        return Err(Error::InvalidArgument(format!(
            "degree bound {max_degree} is below the weight {wv} of the chain"
        )));
    }
    let mut ks = window.to_vec();
    ks.sort();
    ks.dedup();
    let table = ks
        .into_iter()
        .map(|k| Ok((k.clone(), divide_shifted_within(&v, b, &k, max_degree)?)))
        .collect::<Result<Vec<_>>>()?;
    let cert = NatCertificate { b: b.clone(), m, aux, v, max_degree, table };
    if !cert.verify()? {
        return Err(Error::Internal("a recorded quotient does not re-multiply to v".into()));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WidthReport {
    /// Every basis element of degree `2..=D` was checked.
    Pass { checked: usize },
    Failure { witness: LieElement },
}

/// Checks that every basis element of degree `2..=max_degree` is a sum of at
/// most `m` brackets `z_j x_j` with `x_j` among `gens`.
pub fn width_check(m: usize, gens: &[LieElement], max_degree: usize) -> Result<WidthReport> {
    if gens.len() != m {
        return Err(Error::InvalidArgument(format!("expected {m} generators, got {}", gens.len())));
    }
    if max_degree < 2 {
        return Err(Error::InvalidArgument("degree bound must be at least 2".into()));
    }
    let Some(first) = gens.first() else {
        return Err(Error::InvalidArgument("at least one generator is required".into()));
    };
    let algebra = first.algebra();
    let mut checked = 0;
    for w in basis_up_to(algebra.rank(), max_degree) {
        if w.degree() < 2 {
            continue;
        }
        let e = LieElement::basis(algebra, w);
        match decompose_l2(&e, gens) {
            Ok(parts) if parts.len() <= m && reexpand(&parts, gens)? == e => checked += 1,
            Ok(_) | Err(Error::DecompositionFailure { .. }) => return Ok(WidthReport::Failure { witness: e }),
            Err(err) => return Err(err),
        }
    }
    Ok(WidthReport::Pass { checked })
}

fn reexpand(parts: &[Summand], gens: &[LieElement]) -> Result<LieElement> {
    let mut acc = LieElement::zero(gens[0].algebra());
    for s in parts {
        acc = acc.try_add(&s.z.bracket(&gens[s.gen_index])?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Ring;
    use crate::element::Algebra;
    use crate::expr::parse_element;
    use crate::hall::Alphabet;
    use std::sync::Arc;

    fn setup(ring: Ring) -> Arc<Algebra> {
        Algebra::new(Alphabet::parse("a,b").unwrap(), ring)
    }

    fn el(alg: &Arc<Algebra>, s: &str) -> LieElement {
        parse_element(s, alg).unwrap()
    }

    fn c(n: i64) -> Coefficient {
        Coefficient::from_int(n)
    }

    #[test]
    fn line_membership() {
        let alg = setup(Ring::Z);
        assert_eq!(in_rz(&el(&alg, "3*[a,b]"), &el(&alg, "[a,b]")).unwrap(), Some(c(3)));
        assert_eq!(in_rz(&el(&alg, "[a,b] + a"), &el(&alg, "[a,b]")).unwrap(), None);
        assert_eq!(in_rz(&el(&alg, "0"), &el(&alg, "[a,b]")).unwrap(), Some(c(0)));
        assert_eq!(in_rz(&el(&alg, "a"), &el(&alg, "2*a")).unwrap(), None);
        assert!(matches!(in_rz(&el(&alg, "a"), &el(&alg, "0")), Err(Error::InvalidLine(_))));
        let q = setup(Ring::Q);
        assert_eq!(in_rz(&el(&q, "a"), &el(&q, "2*a")).unwrap(), Some(Coefficient::ratio(1, 2)));
    }

    #[test]
    fn transport_examples() {
        let alg = setup(Ring::Z);
        assert_eq!(transport(&el(&alg, "a"), &el(&alg, "2*a"), &el(&alg, "b")).unwrap(), Some(el(&alg, "2*b")));
        assert_eq!(transport(&el(&alg, "a"), &el(&alg, "2*a + b"), &el(&alg, "b")).unwrap(), None);
        assert_eq!(
            transport(&el(&alg, "[a,b]"), &el(&alg, "-3*[a,b]"), &el(&alg, "[a,[a,b]]")).unwrap(),
            Some(el(&alg, "-3*[a,[a,b]]"))
        );
    }

    #[test]
    fn rx_examples() {
        let alg = setup(Ring::Z);
        let a = el(&alg, "a");
        assert_eq!(rx_combine(&a, &el(&alg, "2*a"), &el(&alg, "3*a"), RxOp::Times).unwrap(), el(&alg, "6*a"));
        assert_eq!(rx_combine(&a, &el(&alg, "2*a"), &el(&alg, "3*a"), RxOp::Plus).unwrap(), el(&alg, "5*a"));
        assert!(rx_combine(&a, &el(&alg, "0"), &el(&alg, "5*a"), RxOp::Times).unwrap().is_zero());
        assert!(matches!(rx_combine(&a, &el(&alg, "b"), &a, RxOp::Plus), Err(Error::OffLine(_))));
        let y = el(&alg, "[a,b] + b");
        assert!(times_clause(&a, &el(&alg, "2*a"), &el(&alg, "3*a"), &el(&alg, "6*a"), &y).unwrap());
        assert!(!times_clause(&a, &el(&alg, "2*a"), &el(&alg, "3*a"), &el(&alg, "5*a"), &y).unwrap());
    }

    #[test]
    fn nat_certificates() {
        let alg = setup(Ring::Z);
        let b = el(&alg, "b");
        let window: Vec<_> = (-1..=4).map(c).collect();
        let cert = nat_certify(&b, 2, &window, 5).unwrap();
        assert_eq!(cert.divisible(), vec![c(0), c(1), c(2)]);
        assert!(cert.holds() && cert.ladder_holds());

        let cert = nat_certify(&b, 0, &[c(0), c(1)], 3).unwrap();
        assert_eq!(cert.divisible(), vec![c(0)]);
        assert_eq!(cert.v, el(&alg, "[a,b]"));

        let ab = el(&alg, "[a,b]");
        let cert = nat_certify(&ab, 1, &[c(0), c(1), c(2)], 5).unwrap();
        assert_eq!(cert.aux, el(&alg, "a"));
        assert_eq!(cert.divisible(), vec![c(0), c(1)]);

        assert!(matches!(nat_certify(&b, 2, &[c(0), c(2)], 5), Err(Error::InvalidWindow(_))));
        assert!(matches!(nat_certify(&b, 3, &default_window(3), 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn width_examples() {
        let alg = setup(Ring::Z);
        let gens = [el(&alg, "a"), el(&alg, "b")];
        assert_eq!(width_check(2, &gens, 4).unwrap(), WidthReport::Pass { checked: 1 + 2 + 3 });
        assert_eq!(
            width_check(1, &gens[..1], 3).unwrap(),
            WidthReport::Failure { witness: el(&alg, "[[a,b],b]") }
        );
        let one = Algebra::new(Alphabet::parse("a").unwrap(), Ring::Z);
        let a = LieElement::generator(&one, "a").unwrap();
        assert_eq!(width_check(1, &[a], 5).unwrap(), WidthReport::Pass { checked: 0 });
    }
}
