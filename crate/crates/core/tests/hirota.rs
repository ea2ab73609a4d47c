use birkhoff::hirota::{exactness_conditions, hirota_equation, tau_substitute, tau_substitution_check, HirotaForm};
use birkhoff::{rat, Poly, Symbol};

#[test]
fn closure_weight_matches_every_constraint() {
    for m in tau_substitution_check(4, 4, 4, HirotaForm::Closure).unwrap() {
        assert!(m.matched(), "{:?}: {}", m.indices, m.difference);
        if let Some(c) = &m.factor {
            assert_eq!(c, &rat(1, 1));
        }
    }
}

#[test]
fn literal_weight_fails_exactly_where_the_weights_disagree() {
    let mut misses = 0;
    for m in tau_substitution_check(4, 4, 4, HirotaForm::Literal).unwrap() {
        let [i, k, mm] = m.indices;
        let same = hirota_equation(i, k, mm, HirotaForm::Literal).unwrap() == hirota_equation(i, k, mm, HirotaForm::Closure).unwrap();
        assert_eq!(m.matched(), same, "{:?}", m.indices);
        misses += usize::from(!same);
    }
    assert!(misses > 0);
}

#[test]
fn small_substitutions() {
    let r = tau_substitution_check(1, 2, 1, HirotaForm::Literal).unwrap();
    assert!(r.iter().all(|m| m.matched()));
    let one_two_one = r.iter().find(|m| m.indices == [1, 2, 1]).unwrap();
    assert!(one_two_one.factor.is_some());
    assert_eq!(one_two_one.hirota, hirota_equation(1, 2, 1, HirotaForm::Literal).unwrap());
}

#[test]
fn exactness_is_hessian_symmetry() {
    for (idx, p) in exactness_conditions(4, 4) {
        assert!(p.is_zero(), "{idx:?}: {p}");
    }
}

#[test]
fn u_is_read_as_h1() {
    let u2 = Poly::sym(Symbol::u(2));
    assert_eq!(tau_substitute(&u2), Poly::sym(Symbol::fhess(1, 2)).scale(&rat(-1, 2)));
}
