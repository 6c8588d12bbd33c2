//! Seeded random elements for property runs.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;

use crate::coeff::{Coefficient, Ring};
use crate::element::{Algebra, LieElement};
use crate::hall::{basis_up_to, LyndonWord};

/// Largest absolute value of a random integer coefficient.
pub const COEFF_BOUND: i64 = 9;

/// A nonzero coefficient with numerator in `[-9, 9]`; over `Q` sometimes a fraction.
pub fn random_coefficient<R: Rng + ?Sized>(ring: Ring, rng: &mut R) -> Coefficient {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-COEFF_BOUND..=COEFF_BOUND);
    }
    if ring == Ring::Q && rng.gen_bool(0.25) {
        Coefficient::ratio(n, rng.gen_range(1..=COEFF_BOUND))
    } else {
        Coefficient::from_int(n)
    }
}

fn pick<R: Rng + ?Sized>(algebra: &Arc<Algebra>, words: Vec<LyndonWord>, max_terms: usize, rng: &mut R) -> LieElement {
    let n = rng.gen_range(1..=max_terms.clamp(1, words.len()));
    let terms = sample(rng, words.len(), n)
        .into_iter()
        .map(|i| (words[i].clone(), random_coefficient(algebra.ring(), rng)))
        .collect::<Vec<_>>();
    LieElement::from_terms(algebra, terms).expect("coefficients lie in the ring")
}

/// A nonzero element with at most `max_terms` terms of degree `1..=max_degree`.
pub fn random_element<R: Rng + ?Sized>(
    algebra: &Arc<Algebra>,
    max_degree: usize,
    max_terms: usize,
    rng: &mut R,
) -> LieElement {
    pick(algebra, basis_up_to(algebra.rank(), max_degree), max_terms, rng)
}

/// A nonzero homogeneous element of the given degree.
pub fn random_homogeneous<R: Rng + ?Sized>(
    algebra: &Arc<Algebra>,
    degree: usize,
    max_terms: usize,
    rng: &mut R,
) -> LieElement {
    let words: Vec<LyndonWord> = basis_up_to(algebra.rank(), degree).into_iter().filter(|w| w.degree() == degree).collect();
    assert!(!words.is_empty(), "no basis elements of degree {degree}");
    pick(algebra, words, max_terms, rng)
}

/// A scalar in `[-bound, bound]`, possibly zero.
pub fn random_scalar<R: Rng + ?Sized>(bound: i64, rng: &mut R) -> Coefficient {
    Coefficient::from_int(rng.gen_range(-bound..=bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hall::Alphabet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes() {
        let alg = Algebra::new(Alphabet::parse("a,b,c").unwrap(), Ring::Z);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let u = random_element(&alg, 4, 5, &mut rng);
            assert!(!u.is_zero() && u.len() <= 5 && u.weight().unwrap() <= 4 && u.is_integral());
            let h = random_homogeneous(&alg, 3, 3, &mut rng);
            assert!(h.is_homogeneous() && h.weight().unwrap() == 3);
        }
    }
}
