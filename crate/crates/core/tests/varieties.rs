use birkhoff::varieties::*;
use birkhoff::{parse_poly, Polynomial, Stratum};

#[test]
fn sigma1_currents_match_print() {
    let got = sigma1_currents(5).unwrap();
    for (n, e) in printed_currents(Stratum::Sigma1) {
        assert_eq!(got[&n], e, "p{n}");
    }
}

#[test]
fn curve_two_derivations() {
    let printed = elliptic_curve().polynomial;
    let derived = derive_curve(10).unwrap();
    let nf = sigma1_normal_form();
    for (d, r) in &derived.residuals {
        if *d >= -3 {
            assert!(nf.reduce(r).is_zero(), "degree {d}: {r}");
        }
    }
    let diff = &printed - &derived.curve;
    eprintln!("literal difference: {diff}");
    assert!(nf.reduce(&diff).is_zero());
}

#[test]
fn cuspidal_degeneration() {
    let c = elliptic_curve().polynomial.substitute_with(|k| (k.base.family == birkhoff::Family::H).then(Polynomial::zero));
    assert_eq!(c, parse_poly("p[3]^2 - p[2]^3").unwrap());
}

#[test]
fn mu_dictionary_reports_double_mu2() {
    let curve = elliptic_curve().polynomial;
    let ok = mu_dictionary(&curve_mu_form(), &curve);
    assert!(ok.conflicts.is_empty() && ok.mismatches.is_empty());
    assert_eq!(ok.entries[&4], parse_poly("-3*H[2,-1]").unwrap());
    let printed = mu_dictionary(&curve_mu_form_printed(), &curve);
    assert_eq!(printed.conflicts.len(), 1);
    assert_eq!(printed.conflicts[0].0, 2);
}
