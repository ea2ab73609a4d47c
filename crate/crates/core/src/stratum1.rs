//! Coisotropy of the Σ₁ curve ideal under the canonical bracket.
//!
//! The bracket `{F, h4}` of the curve `F` and `h4 = p4 − p2² − v2 p3 − v1 p2 − v0`
//! is taken in Darboux coordinates `(p2, p3, p4; x2, x3, x4)` and reduced on the
//! curve. Its coefficients fix `v2`, `v1` and the `x4`-flows of `μ0..μ4`.
//! The nonlocal `∂⁻¹_{x2} ∂_{x3} μ4` is the field `w[4]` with `∂_{x2} w = ∂_{x3} μ4`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::Rational;
use crate::symbol::{Family, JetKey, Symbol};
use crate::text::parse_poly;
use crate::varieties::{curve_mu_form, h4_sigma1, RewriteSet};
use crate::Polynomial;

/// `w[4]`.
pub fn w4() -> Polynomial {
    Poly::sym(Symbol::w(4))
}

/// Rewrites jets of `w[4]` carrying an `x2` through `∂_{x2} w = ∂_{x3} μ4`.
pub fn resolve_w(p: &Polynomial) -> Polynomial {
    p.substitute_with(|k| {
        if k.base.family != Family::W || k.base.a != 4 {
            return None;
        }
        let ds = k.derivs();
        let pos = ds.iter().position(|d| *d == 2)?;
        let mut rest: Vec<u8> = ds.to_vec();
        rest[pos] = 3;
        Some(Poly::jet(JetKey::new(Symbol::mu(4), rest)))
    })
}

/// `{f, g}` with `{x_i, p_k} = δ_{ik}` for `i, k ∈ dirs`; coefficients depend on
/// the `x_i` through their jets.
pub fn darboux_bracket(f: &Polynomial, g: &Polynomial, dirs: &[u8]) -> Polynomial {
    let mut out = Poly::zero();
    for &i in dirs {
        let p = JetKey::plain(Symbol::p(i as i16));
        out += &(&f.formal_derivative(i) * &g.partial(&p));
        out -= &(&f.partial(&p) * &g.formal_derivative(i));
    }
    out
}

/// `{F, h4}` on the curve, by independent `p2^a p3^b` monomials.
pub fn coisotropy_coefficients() -> Result<BTreeMap<Monomial, Polynomial>> {
    let f = curve_mu_form();
    let h = h4_sigma1();
    let rs = RewriteSet::from_generators([&f, &h])?;
    let b = rs.reduce(&darboux_bracket(&f, &h, &[2, 3, 4]))?;
    Ok(b.collect_by(|k| k.base.family == Family::P))
}

/// Solves a linear system in the plain symbols `unknowns`; every other symbol
/// is treated as independent. The solution must be unique.
pub fn solve_linear(eqs: &[Polynomial], unknowns: &[Symbol]) -> Result<BTreeMap<Symbol, Rational>> {
    let is_unknown = |k: &JetKey| k.is_plain() && unknowns.contains(&k.base);
    let n = unknowns.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for e in eqs {
        for (_, c) in e.collect_by(|k| !is_unknown(k)) {
            if c.degree_in(unknowns[0].family) > 1 {
                return Err(Error::EliminationFailed(format!("nonlinear in unknowns: {c}")));
            }
            let mut row = vec![Rational::zero(); n + 1];
            for (j, u) in unknowns.iter().enumerate() {
                row[j] = c.partial(&JetKey::plain(*u)).as_constant().ok_or_else(|| Error::EliminationFailed(format!("{c}")))?;
            }
            row[n] = -c.constant_term();
            rows.push(row);
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Err(Error::EliminationFailed("inconsistent ansatz".into()));
    }
    if pivots.len() < n {
        return Err(Error::EliminationFailed("ansatz not determined".into()));
    }
    Ok(pivots.iter().enumerate().map(|(i, &c)| (unknowns[c], rows[i][n].clone())).collect())
}

/// The derived hierarchy.
#[derive(Clone, Debug, PartialEq)]
pub struct Stratum1Hierarchy {
    pub v2: Polynomial,
    pub v1: Polynomial,
    pub v0: Polynomial,
    /// `a -> ∂_{x4} μ_a`, with `v1` and `v0` kept as symbols.
    pub flows: BTreeMap<i16, Polynomial>,
    /// The same with `v1` substituted.
    pub flows_local: BTreeMap<i16, Polynomial>,
    /// Coefficients not used to solve for anything, after substitution; all zero
    /// when the solution is consistent.
    pub residuals: Vec<Polynomial>,
}

fn has_x4_flow(p: &Polynomial) -> Vec<JetKey> {
    p.variables().into_iter().filter(|k| k.base.family == Family::Mu && k.derivs().contains(&4)).collect()
}

/// Derives the `x4`-flows; `gauge_v0` replaces `v[0]`.
pub fn stratum1_coisotropy(gauge_v0: &Polynomial) -> Result<Stratum1Hierarchy> {
    let coeffs = coisotropy_coefficients()?;
    let (flow_eqs, compat): (Vec<_>, Vec<_>) = coeffs.into_values().partition(|c| !has_x4_flow(c).is_empty());

    // Weight-homogeneous ansatz: v2 of weight 1, v1 of weight 2.
    let t = |i| Poly::sym(Symbol::pi(i));
    let mu = |a| Poly::sym(Symbol::mu(a));
    let v2_ansatz = &t(0) * &mu(4);
    let v1_ansatz = &(&(&t(1) * &mu(3)) + &(&t(2) * &mu(4).pow(2))) + &(&t(3) * &w4());
    let ansatz = |p: &Polynomial, v1: &Polynomial, v2: &Polynomial| {
        resolve_w(&p.substitute_fields(|s| match (s.family, s.a) {
            (Family::V, 2) => Some(v2.clone()),
            (Family::V, 1) => Some(v1.clone()),
            (Family::V, 0) => Some(gauge_v0.clone()),
            _ => None,
        }))
    };
    let subbed: Vec<Polynomial> = compat.iter().map(|c| ansatz(c, &v1_ansatz, &v2_ansatz)).collect();
    let sol = solve_linear(&subbed, &[Symbol::pi(0), Symbol::pi(1), Symbol::pi(2), Symbol::pi(3)])?;
    let fix = |p: &Polynomial| p.substitute(&sol.iter().map(|(s, c)| (*s, Poly::constant(c.clone()))).collect());
    let v2 = fix(&v2_ansatz);
    let v1 = fix(&v1_ansatz);

    let v1_sym = Poly::sym(Symbol::v(1));
    let mut flows = BTreeMap::new();
    let mut flows_local = BTreeMap::new();
    for e in &flow_eqs {
        let keys = has_x4_flow(e);
        let [k] = keys.as_slice() else {
            return Err(Error::NonTriangular(format!("{e}")));
        };
        let c = e.partial(k).as_constant().filter(|c| !c.is_zero()).ok_or_else(|| Error::NonTriangular(format!("{e}")))?;
        let rhs = &Poly::jet(k.clone()) - &e.scale(&(Rational::one() / c));
        flows.insert(k.base.a, ansatz(&rhs, &v1_sym, &v2));
        flows_local.insert(k.base.a, ansatz(&rhs, &v1, &v2));
    }
    let residuals = compat.iter().map(|c| ansatz(c, &v1, &v2)).filter(|r| !r.is_zero()).collect();
    Ok(Stratum1Hierarchy { v2, v1, v0: gauge_v0.clone(), flows, flows_local, residuals })
}

/// The flows as printed, `a -> ∂_{x4} μ_a`, with `v[1]` symbolic except in the
/// `μ4` equation.
pub fn printed_stratum1_flows() -> BTreeMap<i16, Polynomial> {
    let src = [
        (4, "-2/3*D[mu[2]; x2]*mu[3] - 2/3*mu[2]*D[mu[3]; x2] - 5/9*mu[4]^2*D[mu[4]; x2] + 4/9*mu[4]*D[mu[4]; x3] + 2*D[mu[2]; x2] + 4/3*D[mu[3]; x3] + 4/9*D[mu[4]; x2]*w[4] + 8/9*D[w[4]; x3]"),
        (3, "-2/3*mu[4]*mu[3]*D[mu[4]; x2] + v[1]*D[mu[3]; x2] + 2*D[mu[1]; x2] - 3*D[v[0]; x2] - 2*mu[3]*D[v[1]; x2] + 2/3*mu[4]*D[mu[3]; x3] - mu[4]*D[v[1]; x3] + 4/3*mu[3]*D[mu[4]; x3]"),
        (2, "-2/3*mu[4]*mu[2]*D[mu[4]; x2] + 2*D[v[0]; x3] + v[1]*D[mu[2]; x2] - mu[4]*D[v[0]; x2] - 2/3*mu[1]*D[mu[4]; x2] + 2/3*mu[4]*D[mu[2]; x3] + 2/3*mu[2]*D[mu[4]; x3]"),
        (1, "-2/3*mu[4]*mu[1]*D[mu[4]; x2] + 2*D[mu[0]; x2] + v[1]*D[mu[1]; x2] - 2*mu[3]*D[v[0]; x2] - mu[1]*D[v[1]; x2] + 2/3*mu[4]*D[mu[1]; x3] - mu[4]*D[v[0]; x3] - mu[2]*D[v[1]; x3] + 4/3*mu[1]*D[mu[4]; x3]"),
        (0, "v[1]*D[mu[0]; x2] - mu[1]*D[v[0]; x2] + 2/3*mu[4]*D[mu[0]; x3] - mu[2]*D[v[0]; x3] - 2/3*mu[4]*mu[0]*D[mu[4]; x2] + 4/3*mu[0]*D[mu[4]; x3]"),
    ];
    src.into_iter().map(|(a, s)| (a, parse_poly(s).expect("printed flow parses"))).collect()
}

/// `v1` as printed.
pub fn printed_v1() -> Polynomial {
    parse_poly("2/3*mu[3] - 2/9*mu[4]^2 + 4/3*w[4]").expect("parses")
}

/// `printed − derived` per equation: the `μ4` flow against the local form, the
/// others against the form with symbolic `v1`, and `v1` under the key `-1`.
pub fn compare_with_printed(h: &Stratum1Hierarchy) -> BTreeMap<i16, Polynomial> {
    let mut out = BTreeMap::new();
    for (a, p) in printed_stratum1_flows() {
        let d = if a == 4 { &h.flows_local[&a] } else { &h.flows[&a] };
        out.insert(a, &p - d);
    }
    out.insert(-1, &printed_v1() - &h.v1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_rule() {
        let p = Poly::jet(JetKey::new(Symbol::w(4), [2, 3]));
        assert_eq!(resolve_w(&p), Poly::jet(JetKey::new(Symbol::mu(4), [3, 3])));
        let q = Poly::jet(JetKey::new(Symbol::w(4), [3]));
        assert_eq!(resolve_w(&q), q);
    }

    #[test]
    fn darboux_pairs() {
        let p = |i| Poly::sym(Symbol::p(i));
        let mu = Poly::sym(Symbol::mu(4));
        assert_eq!(darboux_bracket(&mu, &p(3), &[2, 3]), Poly::jet(JetKey::new(Symbol::mu(4), [3])));
        assert!(darboux_bracket(&p(2), &p(3), &[2, 3]).is_zero());
    }

    #[test]
    fn linear_solver() {
        let t = |i| Poly::sym(Symbol::pi(i));
        let e1 = &(&t(0) + &t(1)) - &Poly::int(3);
        let e2 = &t(0) - &t(1).scale(&crate::scalar::int(2));
        let s = solve_linear(&[e1, e2], &[Symbol::pi(0), Symbol::pi(1)]).unwrap();
        assert_eq!(s[&Symbol::pi(0)], crate::scalar::int(2));
        assert_eq!(s[&Symbol::pi(1)], crate::scalar::int(1));
    }
}
