use birkhoff::poisson::{
    alpha_beta_conditions, ansatz_first, ansatz_second, darboux_residuals, darboux_system, equivalence_j_vs_delta,
    ideal_bracket_residue, j_sym, jacobi_defect, pstar_to_p, PhaseSpace, PoissonTensorLinear,
};
use birkhoff::tangent::DkpRewriter;
use birkhoff::{Family, Poly, Polynomial, Symbol};
use proptest::prelude::*;

#[test]
fn jacobi_darboux_and_jet_ansatz() {
    for ps in [PhaseSpace::darboux(4), PhaseSpace::jet_ansatz(4)] {
        for l in 1..=4 {
            for k in 1..=4 {
                for j in 1..=4 {
                    let (a, b) = jacobi_defect(&ps, l, k, j).unwrap();
                    assert!(a.is_zero() && b.is_zero(), "({l},{k},{j})");
                }
            }
        }
    }
}

#[test]
fn jacobi_constant_table() {
    let ps = PhaseSpace::from_fn(Family::P, Family::U, 3, birkhoff::poisson::YDerivative::Partial, |k, i| Poly::int((k * i) as i64));
    assert_eq!(jacobi_defect(&ps, 1, 2, 3).unwrap(), (Poly::zero(), Poly::zero()));
}

#[test]
fn jacobi_sees_a_non_poisson_table() {
    // {u_i, p_k} = u_k: the first sum is u_l - u_k.
    let ps = PhaseSpace::from_fn(Family::P, Family::U, 3, birkhoff::poisson::YDerivative::Partial, |k, _| Poly::sym(Symbol::u(k as i16)));
    assert!(!jacobi_defect(&ps, 1, 2, 3).unwrap().0.is_zero());
}

#[test]
fn ideal_identity() {
    let ps = PhaseSpace::symbolic_star(6);
    for n in 2..=6 {
        for m in 2..=6 {
            assert!(ideal_bracket_residue(n, m, &ps).unwrap().is_zero(), "({n},{m})");
        }
    }
}

#[test]
fn ideal_identity_on_the_linear_tensor() {
    let ps = PoissonTensorLinear::symbolic(6).phase_space(6).unwrap();
    for n in 2..=6 {
        for m in 2..=6 {
            assert!(ideal_bracket_residue(n, m, &ps).unwrap().is_zero());
        }
    }
}

#[test]
fn two_jstar_formulas_agree() {
    let t = PoissonTensorLinear::symbolic(6);
    for i in 1..=6 {
        for k in 1..=6 {
            assert_eq!(pstar_to_p(&t.jstar(i, k).unwrap()), t.jstar_via_schur(i, k).unwrap(), "({i},{k})");
        }
    }
}

#[test]
fn alpha_beta_conditions_are_the_ansatz_families() {
    let t = PoissonTensorLinear::symbolic(7);
    let sys = alpha_beta_conditions(&t, 6).unwrap();
    for i in 2..=6 {
        for k in 2..=6 {
            assert_eq!(sys.get(&[0, i, k]).unwrap(), &-ansatz_second(&j_sym, k, i));
            assert_eq!(sys.get(&[1, i, k]).unwrap(), &-ansatz_first(&j_sym, k - 1, i - 1));
        }
    }
}

#[test]
fn equivalence_small() {
    let t = std::time::Instant::now();
    let r = equivalence_j_vs_delta(3).unwrap();
    assert!(r.all_zero());
    assert_eq!(r.items.len(), 13);
    assert!(t.elapsed().as_secs_f64() < 1.0);
    let r2 = equivalence_j_vs_delta(2).unwrap();
    assert!(r2.items.iter().filter(|i| i.indices[0] == 1).all(|i| i.residual.is_zero()));
}

#[test]
fn darboux_system_follows_from_dkp() {
    let rw = DkpRewriter::new(12);
    for (label, r) in darboux_residuals(&darboux_system(4, 4), &rw).unwrap() {
        assert!(r.is_zero(), "{label}: {r}");
    }
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    let var = prop_oneof![
        (1i16..=3).prop_map(|i| Poly::sym(Symbol::p(i))),
        (1i16..=3).prop_map(|i| Poly::sym(Symbol::u(i))),
    ];
    proptest::collection::vec((var, -3i64..=3), 1..4).prop_map(|ts| {
        let mut acc = Poly::zero();
        let mut prod = Poly::one();
        for (v, c) in ts {
            prod = &prod * &v;
            acc += &prod.scale(&birkhoff::int(c));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_antisymmetry_and_leibniz(f in small_poly(), g in small_poly(), h in small_poly()) {
        let ps = PhaseSpace::jet_ansatz(3);
        let fg = ps.bracket(&f, &g).unwrap();
        prop_assert_eq!(&fg, &-ps.bracket(&g, &f).unwrap());
        let lhs = ps.bracket(&(&f * &g), &h).unwrap();
        let rhs = &(&f * &ps.bracket(&g, &h).unwrap()) + &(&g * &ps.bracket(&f, &h).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
