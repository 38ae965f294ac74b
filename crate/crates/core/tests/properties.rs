use metaplectic_ice::coeff::{normalize_g, sample_point, CoeffElem, Rational, Ring};
use proptest::prelude::*;

/// Raw g-symbol products: indices in `1..n`, small exponents.
fn raw_g(n: u32) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((1..n, 1u32..4), 0..6)
}

fn term(nvars: usize, n: u32) -> impl Strategy<Value = (i64, Vec<i32>, i32, Vec<(u32, u32)>)> {
    (
        -6i64..=6,
        prop::collection::vec(-2i32..=3, nvars),
        -2i32..=3,
        if n > 1 { raw_g(n).boxed() } else { Just(Vec::new()).boxed() },
    )
}

fn elem(nvars: usize, n: u32) -> impl Strategy<Value = CoeffElem> {
    prop::collection::vec(term(nvars, n), 0..6).prop_map(move |terms| {
        let ring = Ring::new(n, nvars);
        terms.into_iter().fold(CoeffElem::zero(ring), |acc, (c, z, v, g)| {
            acc + CoeffElem::monomial(ring, Rational::from_integer(c.into()), &z, v, &g).unwrap()
        })
    })
}

/// The same element built by multiplying single g symbols one at a time.
fn product_of_symbols(ring: Ring, raw: &[(u32, u32)]) -> CoeffElem {
    raw.iter()
        .flat_map(|&(a, e)| std::iter::repeat_n(a, e as usize))
        .fold(CoeffElem::one(ring), |acc, a| acc * CoeffElem::g(ring, a as i64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Any order of applying `g(a) g(n-a) = v` reaches one normal form.
    #[test]
    fn g_normal_form_is_confluent(n in 2u32..=6, raw in raw_g(6), rot in 0usize..6) {
        let raw: Vec<(u32, u32)> = raw.into_iter().filter(|(a, _)| *a < n).collect();
        let (extra, mono) = normalize_g(&raw, n).unwrap();
        prop_assert!(mono.is_normal(n));

        let mut rotated = raw.clone();
        if !rotated.is_empty() {
            let k = rot % rotated.len();
            rotated.rotate_left(k);
        }
        let mut reversed = raw.clone();
        reversed.reverse();
        prop_assert_eq!(normalize_g(&rotated, n).unwrap(), (extra, mono.clone()));
        prop_assert_eq!(normalize_g(&reversed, n).unwrap(), (extra, mono));

        let ring = Ring::new(n, 1);
        let stepwise = product_of_symbols(ring, &raw);
        let direct = CoeffElem::monomial(ring, Rational::from_integer(1.into()), &[0], 0, &raw).unwrap();
        prop_assert_eq!(&stepwise, &direct);
        let p = sample_point(n, 1, rot as u64);
        let expected: Rational = raw.iter().map(|&(a, e)| num_traits::pow(p.g_val(a as i64).clone(), e as usize)).product();
        prop_assert_eq!(direct.evaluate(&p), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        (n, x, y) in (1u32..=4).prop_flat_map(|n| (Just(n), elem(2, n), elem(2, n))),
        seed in any::<u64>(),
    ) {
        let p = sample_point(n, 2, seed);
        prop_assert_eq!((&x + &y).evaluate(&p), x.evaluate(&p) + y.evaluate(&p));
        prop_assert_eq!((&x * &y).evaluate(&p), x.evaluate(&p) * y.evaluate(&p));
        prop_assert_eq!((-&x).evaluate(&p), -x.evaluate(&p));
    }

    #[test]
    fn canonical_text_round_trips((n, x) in (1u32..=5).prop_flat_map(|n| (Just(n), elem(3, n)))) {
        let text = x.to_string();
        prop_assert_eq!(CoeffElem::parse(&text, Ring::new(n, 3)).unwrap(), x);
    }

    #[test]
    fn ring_axioms(x in elem(2, 3), y in elem(2, 3), z in elem(2, 3)) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
    }
}
