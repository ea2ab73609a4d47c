use birkhoff::stratum1::{compare_with_printed, printed_v1, stratum1_coisotropy};
use birkhoff::{parse_poly, Poly, Symbol};

fn v0() -> birkhoff::Polynomial {
    Poly::sym(Symbol::v(0))
}

#[test]
fn auxiliary_fields() {
    let h = stratum1_coisotropy(&v0()).unwrap();
    assert_eq!(h.v2, parse_poly("2/3*mu[4]").unwrap());
    assert_eq!(h.v1, parse_poly("2/3*mu[3] - 1/9*mu[4]^2 + 4/9*w[4]").unwrap());
    assert!(h.residuals.is_empty());
}

#[test]
fn mu2_flow_as_printed() {
    let h = stratum1_coisotropy(&v0()).unwrap();
    let printed = parse_poly(
        "-2/3*mu[4]*mu[2]*D[mu[4]; x2] + 2*D[v[0]; x3] + v[1]*D[mu[2]; x2] - mu[4]*D[v[0]; x2] - 2/3*mu[1]*D[mu[4]; x2] + 2/3*mu[4]*D[mu[2]; x3] + 2/3*mu[2]*D[mu[4]; x3]",
    )
    .unwrap();
    assert_eq!(h.flows[&2], printed);
}

#[test]
fn comparison_with_printed_flows() {
    let h = stratum1_coisotropy(&v0()).unwrap();
    let diff = compare_with_printed(&h);
    for a in 0..=3 {
        assert!(diff[&a].is_zero(), "mu{a}: {}", diff[&a]);
    }
    // The printed mu4 flow carries d_x2(mu2 mu3) where the bracket gives d_x2(mu3 mu4).
    let swap = parse_poly("2/3*D[mu[3]; x2]*mu[4] + 2/3*mu[3]*D[mu[4]; x2] - 2/3*D[mu[2]; x2]*mu[3] - 2/3*mu[2]*D[mu[3]; x2]").unwrap();
    assert_eq!(diff[&4], swap);
    assert_eq!(diff[&-1], &printed_v1() - &h.v1);
    assert!(!diff[&-1].is_zero());
}

#[test]
fn zero_gauge_specializes() {
    let sym = stratum1_coisotropy(&v0()).unwrap();
    let zero = stratum1_coisotropy(&Poly::zero()).unwrap();
    for (a, f) in &sym.flows {
        let specialized = f.substitute_fields(|s| (*s == Symbol::v(0)).then(Poly::zero));
        assert_eq!(&specialized, &zero.flows[a]);
    }
    assert!(zero.residuals.is_empty());
}
