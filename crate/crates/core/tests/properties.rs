use std::sync::Arc;

use freelie::expr::{expand_associative, ExprGen};
use freelie::hall::{basis_up_to, witt_dimension};
use freelie::json::{element_from_json, element_to_json};
use freelie::random::{random_element, random_scalar};
use freelie::scalars::fp::Fp;
use freelie::shifted::shift_once;
use freelie::{
    divide_shifted, normal_form, parse_expr, shifted_chain, to_associative, Algebra, Alphabet, Coefficient, LieElement,
    Ring,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebra(ring: Ring) -> Arc<Algebra> {
    Algebra::new(Alphabet::parse("a,b,c").unwrap(), ring)
}

fn ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Z), Just(Ring::Q)]
}

/// Elements are drawn from a seeded stream so shrinking stays on valid inputs.
fn elements(alg: &Arc<Algebra>, seed: u64, n: usize, max_degree: usize) -> Vec<LieElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_element(alg, max_degree, 3, &mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_matches_envelope(seed in any::<u64>(), r in ring()) {
        let alg = algebra(r);
        let xs = elements(&alg, seed, 2, 3);
        let lie = to_associative(&xs[0].bracket(&xs[1]).unwrap());
        let env = to_associative(&xs[0]).commutator(&to_associative(&xs[1]));
        prop_assert_eq!(lie, env);
    }

    #[test]
    fn jacobi_and_antisymmetry(seed in any::<u64>(), r in ring()) {
        let alg = algebra(r);
        let xs = elements(&alg, seed, 3, 3);
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let br = |p: &LieElement, q: &LieElement| p.bracket(q).unwrap();
        let j = &(&br(x, &br(y, z)) + &br(y, &br(z, x))) + &br(z, &br(x, y));
        prop_assert!(j.is_zero());
        prop_assert!((&br(x, y) + &br(y, x)).is_zero());
    }

    #[test]
    fn normal_form_matches_direct_expansion(seed in any::<u64>(), r in ring()) {
        let alg = algebra(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = ExprGen { alphabet: alg.alphabet(), ring: r, max_degree: 5, coeff_bound: 9, chains: true };
        let e = gen.expr(&mut rng);
        let nf = normal_form(&e, &alg).unwrap();
        prop_assert_eq!(to_associative(&nf), expand_associative(&e, alg.alphabet()).unwrap());
        let back = parse_expr(&e.to_string(), alg.alphabet(), r).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn printed_elements_reparse(seed in any::<u64>(), r in ring()) {
        let alg = algebra(r);
        let u = &elements(&alg, seed, 1, 4)[0];
        prop_assert_eq!(&freelie::parse_element(&u.to_string(), &alg).unwrap(), u);
        let text = element_to_json(u);
        let back = element_from_json(&text).unwrap();
        prop_assert_eq!(element_to_json(&back), text);
    }

    #[test]
    fn chains_are_additive_and_symmetric(seed in any::<u64>(), a in -4i64..=4, b in -4i64..=4) {
        let alg = algebra(Ring::Z);
        let xs = elements(&alg, seed, 3, 2);
        let (u, w, v) = (&xs[0], &xs[1], &xs[2]);
        let alphas = [Coefficient::from_int(a), Coefficient::from_int(b)];
        let swapped = [alphas[1].clone(), alphas[0].clone()];
        let lhs = shifted_chain(&(u + w), v, &alphas).unwrap();
        prop_assert_eq!(&lhs, &(&shifted_chain(u, v, &alphas).unwrap() + &shifted_chain(w, v, &alphas).unwrap()));
        prop_assert_eq!(shifted_chain(u, v, &swapped).unwrap(), shifted_chain(u, v, &alphas).unwrap());
    }

    #[test]
    fn division_inverts_multiplication(seed in any::<u64>(), a in 1i64..=6, negate in any::<bool>()) {
        let alg = algebra(Ring::Z);
        let xs = elements(&alg, seed, 2, 2);
        let alpha = Coefficient::from_int(if negate { -a } else { a });
        let target = shift_once(&xs[0], &xs[1], &alpha).unwrap();
        prop_assert!(!target.is_zero());
        prop_assert_eq!(divide_shifted(&target, &xs[1], &alpha).unwrap(), Some(xs[0].clone()));
    }

    #[test]
    fn zero_shift_division_remultiplies(seed in any::<u64>()) {
        let alg = algebra(Ring::Z);
        let xs = elements(&alg, seed, 2, 2);
        let zero = Coefficient::zero();
        let target = shift_once(&xs[0], &xs[1], &zero).unwrap();
        prop_assume!(!target.is_zero());
        let u = divide_shifted(&target, &xs[1], &zero).unwrap().expect("an integral quotient exists");
        prop_assert_eq!(shift_once(&u, &xs[1], &zero).unwrap(), target);
    }

    #[test]
    fn coefficients_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let c = Coefficient::ratio(n, d);
        prop_assert_eq!(c.to_string().parse::<Coefficient>().unwrap(), c);
    }

    #[test]
    fn fp_inverse(p in prop::sample::select(vec![2u64, 3, 5, 7]), entries in prop::collection::vec(0u64..7, 4)) {
        let f = Fp { p };
        let m = vec![vec![entries[0] % p, entries[1] % p], vec![entries[2] % p, entries[3] % p]];
        let det = f.sub(f.mul(m[0][0], m[1][1]), f.mul(m[0][1], m[1][0]));
        match f.inverse(&m) {
            Some(inv) => prop_assert_eq!(f.matmul(&m, &inv), freelie::scalars::fp::identity(2)),
            None => prop_assert_eq!(det, 0),
        }
    }
}

#[test]
fn basis_sizes_follow_witt() {
    for k in 1..=3usize {
        let basis = basis_up_to(k, 7);
        for n in 1..=7 {
            let count = basis.iter().filter(|w| w.degree() == n).count();
            assert_eq!(witt_dimension(k as u64, n as u64), count.into(), "k={k} n={n}");
        }
    }
}

#[test]
fn random_scalars_stay_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let c = random_scalar(4, &mut rng);
        assert!(c.is_integer() && c.abs() <= Coefficient::from_int(4));
    }
}
