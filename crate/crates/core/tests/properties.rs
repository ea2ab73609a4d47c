use birkhoff::laurent::bigcell_constraint;
use birkhoff::varieties::schur_p;
use birkhoff::{parse_poly, rat, JetKey, JsonPoly, LaurentSeries, Poly, Polynomial, PolynomialF64, Rational, Symbol};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn atom() -> impl Strategy<Value = Polynomial> {
    prop_oneof![
        (1i16..=3).prop_map(|i| Poly::sym(Symbol::u(i))),
        (1i16..=3, 1i16..=3).prop_map(|(i, k)| Poly::sym(Symbol::h(i, k))),
        (1i16..=3).prop_map(|i| Poly::sym(Symbol::p(i))),
        (1i16..=2, 1u8..=3, 1u8..=3).prop_map(|(a, d1, d2)| Poly::jet(JetKey::new(Symbol::u(a), [d1, d2]))),
    ]
}

fn poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((proptest::collection::vec(atom(), 0..3), -5i64..=5, 1i64..=4), 0..5).prop_map(|ts| {
        let mut acc = Poly::zero();
        for (factors, n, d) in ts {
            let m = factors.iter().fold(Poly::one(), |a, f| &a * f);
            acc += &m.scale(&rat(n, d));
        }
        acc
    })
}

fn eval(p: &Polynomial, seed: i64) -> Rational {
    p.evaluate(|c| c.clone(), |k| {
        let h = k.base.a as i64 * 7 + k.base.b as i64 * 3 + k.derivs().iter().map(|d| *d as i64).sum::<i64>() * 5;
        rat((h * 31 + seed) % 17 - 8, 3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn text_and_json_round_trip(a in poly()) {
        prop_assert_eq!(parse_poly(&a.to_string()).unwrap(), a.clone());
        let j = serde_json::to_string(&JsonPoly::from(&a)).unwrap();
        let back: JsonPoly = serde_json::from_str(&j).unwrap();
        prop_assert_eq!(Polynomial::try_from(&back).unwrap(), a);
    }

    #[test]
    fn mixed_partials_commute(a in poly(), i in 1u8..=3, j in 1u8..=3) {
        prop_assert_eq!(a.formal_derivative(i).formal_derivative(j), a.formal_derivative(j).formal_derivative(i));
        let x = JetKey::plain(Symbol::u(1));
        let y = JetKey::plain(Symbol::h(2, 1));
        prop_assert_eq!(a.partial(&x).partial(&y), a.partial(&y).partial(&x));
    }

    #[test]
    fn formal_derivative_is_a_derivation(a in poly(), b in poly(), i in 1u8..=3) {
        let lhs = (&a * &b).formal_derivative(i);
        let rhs = &(&a.formal_derivative(i) * &b) + &(&a * &b.formal_derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), seed in 0i64..100) {
        prop_assert_eq!(eval(&(&a * &b), seed), eval(&a, seed) * eval(&b, seed));
        prop_assert_eq!(eval(&(&a + &b), seed), eval(&a, seed) + eval(&b, seed));
    }

    #[test]
    fn f64_instantiation_agrees(a in poly(), b in poly(), seed in 0i64..100) {
        let exact = eval(&(&a * &b), seed).to_f64().unwrap();
        let af: PolynomialF64 = a.map_coeffs(|c| c.to_f64().unwrap());
        let bf: PolynomialF64 = b.map_coeffs(|c| c.to_f64().unwrap());
        let pf = &af * &bf;
        let approx = pf.evaluate(|c| *c, |k| {
            let h = k.base.a as i64 * 7 + k.base.b as i64 * 3 + k.derivs().iter().map(|d| *d as i64).sum::<i64>() * 5;
            (((h * 31 + seed) % 17 - 8) as f64) / 3.0
        });
        prop_assert!((exact - approx).abs() <= 1e-9 * (1.0 + exact.abs()));
    }

    #[test]
    fn closure_constraints_have_integer_coefficients(j in 1i32..=6, k in 1i32..=6, m in 1i32..=6) {
        prop_assert!(bigcell_constraint(j, k, m).has_integer_coefficients());
    }

    #[test]
    fn series_commutative_associative(
        a in proptest::collection::vec(poly(), 4),
        b in proptest::collection::vec(poly(), 4),
        c in proptest::collection::vec(poly(), 4),
    ) {
        let s = |v: &Vec<Polynomial>, hi: i32| LaurentSeries::new(hi - 3, hi, v.iter().cloned().enumerate().map(|(i, p)| (hi - i as i32, p)));
        let (x, y, z) = (s(&a, 2), s(&b, 1), s(&c, 0));
        let xy = x.mul(&y).unwrap();
        let yx = y.mul(&x).unwrap();
        prop_assert_eq!(xy.window(), yx.window());
        for d in xy.window().0..=xy.window().1 {
            prop_assert_eq!(xy.coeff_or_zero(d), yx.coeff_or_zero(d));
        }
        let l = xy.mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        let lo = l.window().0.max(r.window().0);
        prop_assert_eq!(l.window().1, r.window().1);
        for d in lo..=l.window().1 {
            prop_assert_eq!(l.coeff_or_zero(d), r.coeff_or_zero(d));
        }
    }
}

#[test]
fn schur_derivative_property() {
    for n in 0..=10usize {
        for k in 1..=n {
            let d = schur_p(n).partial(&JetKey::plain(Symbol::t(k as i16)));
            assert_eq!(d, schur_p(n - k), "P_{n}, t_{k}");
        }
    }
}

#[test]
fn schur_generating_function() {
    // exp(S) with S = Σ z^k t_k, expanded as Σ S^m / m! through z^10.
    let z = Poly::sym(Symbol::pi(0));
    let s: Polynomial = (1..=10).map(|k| &z.pow(k) * &Poly::sym(Symbol::t(k as i16))).sum();
    let mut exp = Poly::zero();
    let mut term = Poly::one();
    for m in 0..=10i64 {
        exp += &term;
        let zk = JetKey::plain(Symbol::pi(0));
        let next = (&term * &s).scale(&rat(1, m + 1));
        term = Poly::from_terms(next.terms().filter(|(mono, _)| mono.exponent(&zk) <= 10).map(|(mono, c)| (mono.clone(), c.clone())));
    }
    let by_z = exp.collect_by(|k| k.base == Symbol::pi(0));
    for n in 0..=10usize {
        let key = if n == 0 { birkhoff::Monomial::one() } else { z.pow(n as u32).leading().unwrap().0.clone() };
        assert_eq!(by_z.get(&key).cloned().unwrap_or_default(), schur_p(n), "P_{n}");
    }
}
