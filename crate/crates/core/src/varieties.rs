//! Currents, the Σ₁ elliptic curve, Schur polynomials and canonical ideals.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::laurent::{structure_constant, LaurentSeries, Stratum, StratumBasis};
use crate::poly::{Monomial, Poly};
use crate::reduction::{sigma1_eliminator, u_to_h, BigCellNormalizer, GradedEliminator};
use crate::scalar::{int, Rational};
use crate::symbol::{Family, JetKey, Symbol};
use crate::text::parse_poly;
use crate::Polynomial;

/// `p_n` written through the generators of the stratum's algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentExpression {
    pub stratum: Stratum,
    pub n: i32,
    pub expression: Polynomial,
}

fn p(i: i32) -> Polynomial {
    Poly::sym(Symbol::p(i as i16))
}

/// Σ₁ closure relations in normal form: the free coordinates are `H[2,*]`,
/// `H[3,-1]` and `H[3,1]`.
pub fn sigma1_normal_form() -> &'static GradedEliminator {
    static NF: OnceLock<GradedEliminator> = OnceLock::new();
    NF.get_or_init(|| sigma1_eliminator(9).expect("Σ₁ closure system is homogeneous"))
}

/// Big-cell `p_n` as a polynomial in `p[1]` and `H[1,k]`.
pub fn express_current(stratum: Stratum, n: i32) -> Result<CurrentExpression> {
    let expression = match stratum {
        Stratum::BigCell => {
            if n < 1 {
                return Err(Error::InvalidIndex(format!("big-cell current p[{n}]")));
            }
            big_cell_currents(n)?.remove(&n).expect("computed")
        }
        Stratum::Sigma1 => {
            if !(2..=7).contains(&n) {
                return Err(Error::InvalidIndex(format!("Σ₁ current p[{n}] (available for 2..=7)")));
            }
            sigma1_currents(n)?.remove(&n).expect("computed")
        }
    };
    Ok(CurrentExpression { stratum, n, expression })
}

/// `p_1 .. p_nmax` on the big cell, by `p_{k+1} = p_1 p_k − Σ_{l<=k} C^l_{1k} p_l`.
pub fn big_cell_currents(nmax: i32) -> Result<BTreeMap<i32, Polynomial>> {
    let nf = BigCellNormalizer::new(nmax + 2);
    let mut cur: BTreeMap<i32, Polynomial> = BTreeMap::new();
    cur.insert(0, Poly::one());
    cur.insert(1, p(1));
    for k in 1..nmax {
        let mut e = &p(1) * &cur[&k];
        for l in 0..=k {
            let c = nf.reduce(&structure_constant(Stratum::BigCell, 1, k, l))?;
            e -= &(&c * &cur[&l]);
        }
        cur.insert(k + 1, e);
    }
    cur.remove(&0);
    Ok(cur)
}

/// `p_2 .. p_nmax` on Σ₁ through `p_2`, `p_3`, in normal form.
pub fn sigma1_currents(nmax: i32) -> Result<BTreeMap<i32, Polynomial>> {
    let nf = sigma1_normal_form();
    let mut cur: BTreeMap<i32, Polynomial> = BTreeMap::new();
    cur.insert(0, Poly::one());
    cur.insert(2, p(2));
    cur.insert(3, p(3));
    for n in 4..=nmax {
        let mut e = &p(2) * &cur[&(n - 2)];
        for l in (0..n).filter(|l| Stratum::Sigma1.has_index(*l)) {
            let c = structure_constant(Stratum::Sigma1, 2, n - 2, l);
            if !c.is_zero() {
                e -= &(&c * &cur[&l]);
            }
        }
        cur.insert(n, nf.reduce(&e));
    }
    cur.remove(&0);
    Ok(cur)
}

/// The currents as printed for comparison, in the canonical grammar.
pub fn printed_currents(stratum: Stratum) -> BTreeMap<i32, Polynomial> {
    let src: &[(i32, &str)] = match stratum {
        Stratum::BigCell => &[
            (2, "p[1]^2 - 2*H[1,1]"),
            (3, "p[1]^3 - 3*H[1,1]*p[1] - 3*H[1,2]"),
            (4, "p[1]^4 - 4*H[1,1]*p[1]^2 - 4*H[1,2]*p[1] - 4*H[1,3] + 2*H[1,1]^2"),
            (5, "p[1]^5 - 5*H[1,1]*p[1]^3 - 5*H[1,2]*p[1]^2 - (5*H[1,3] - 5*H[1,1]^2)*p[1] - 5*H[1,4] + 5*H[1,1]*H[1,2]"),
        ],
        Stratum::Sigma1 => &[
            (4, "p[2]^2 - 2*H[2,-1]*p[3] - H[2,-1]^2*p[2] - 2*H[2,2] - 2*H[2,-1]*H[2,1]"),
            (
                5,
                "p[2]*p[3] - H[2,-1]*p[2]^2 - (H[3,-1] - 2*H[2,-1]^2)*p[3] - (H[2,1] + H[2,-1]*H[3,-1] - H[2,-1]^3)*p[2] \
                 - 3/2*H[2,1]*H[3,-1] - 5/2*H[2,3] - 1/2*H[2,-1]*H[3,1] + 2*H[2,-1]*H[2,2] + 2*H[2,-1]^2*H[2,1]",
            ),
        ],
    };
    src.iter().map(|(n, s)| (*n, parse_poly(s).expect("printed current parses"))).collect()
}

/// A generator of the ideal of a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveGenerator {
    pub name: String,
    pub stratum: Stratum,
    pub polynomial: Polynomial,
}

/// The Σ₁ curve `F^1_23` with the coefficients as printed.
pub fn elliptic_curve() -> CurveGenerator {
    let s = "p[3]^2 - p[2]^3 + 3*H[2,-1]*p[3]*p[2] - 2*H[3,-1]*p[2]^2 \
             + (H[2,-1]^3 + 3*H[2,1] + H[2,-1]*H[3,-1])*p[3] \
             - (H[3,-1]^2 + 2*H[3,1] - 3*H[2,-1]*H[2,1] - 3*H[2,2] + H[3,-1]*H[2,-1]^2)*p[2] \
             - 2*H[3,3] - 2*H[3,-1]*H[3,1] + 3*H[2,4] + 3*H[2,2]*H[2,-1]^2 - 3/2*H[2,-1]*H[2,3] + 3*H[2,1]^2 \
             - 3/2*H[2,-1]^2*H[3,1] - 1/2*H[2,-1]*H[2,1]*H[3,-1] + 4*H[3,-1]*H[2,2]";
    CurveGenerator { name: "F23".into(), stratum: Stratum::Sigma1, polynomial: parse_poly(s).expect("curve parses") }
}

/// Curve obtained from `p_3^2 − p_2^3` by cancelling its Laurent expansion
/// against `p_2 p_3, p_2^2, p_3, p_2, 1` from the top degree down.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveDerivation {
    pub curve: Polynomial,
    /// Leftover series coefficients by degree (degree 1 and negative degrees);
    /// each is a Σ₁ closure consequence.
    pub residuals: BTreeMap<i32, Polynomial>,
}

pub fn derive_curve(order: i32) -> Result<CurveDerivation> {
    let basis = StratumBasis::<Rational>::symbolic(Stratum::Sigma1, order, 3);
    let (p2, p3) = (basis.element(2)?, basis.element(3)?);
    let one = basis.element(0)?;
    let mut s = p3.mul(p3)?.sub(&p2.mul(p2)?.mul(p2)?);
    let cands: [(i32, LaurentSeries, Polynomial); 5] = [
        (5, p2.mul(p3)?, &p(2) * &p(3)),
        (4, p2.mul(p2)?, p(2).pow(2)),
        (3, p3.clone(), p(3)),
        (2, p2.clone(), p(2)),
        (0, one.clone(), Poly::one()),
    ];
    let mut curve = &p(3).pow(2) - &p(2).pow(3);
    let mut residuals = BTreeMap::new();
    for (deg, series, mono) in &cands {
        let c = s.coeff_or_zero(*deg);
        if !c.is_zero() {
            s = s.sub(&series.scale(&c));
            curve -= &(&c * mono);
        }
    }
    let (lo, hi) = s.window();
    for d in lo..=hi {
        let c = s.coeff_or_zero(d);
        if d == 1 || d < 0 {
            residuals.insert(d, c);
        } else if !c.is_zero() {
            return Err(Error::EliminationFailed(format!("degree {d} left {c}")));
        }
    }
    Ok(CurveDerivation { curve, residuals })
}

/// `F^1_23` in the μ-parameterization, with `μ_1` on `p_2`.
pub fn curve_mu_form() -> Polynomial {
    parse_poly("p[3]^2 - p[2]^3 - mu[4]*p[2]*p[3] - mu[3]*p[2]^2 - mu[2]*p[3] - mu[1]*p[2] - mu[0]").expect("parses")
}

/// The μ-form exactly as printed, with `μ_2` on both `p_3` and `p_2`.
pub fn curve_mu_form_printed() -> Polynomial {
    parse_poly("p[3]^2 - p[2]^3 - mu[4]*p[2]*p[3] - mu[3]*p[2]^2 - mu[2]*p[3] - mu[2]*p[2] - mu[0]").expect("parses")
}

/// `h^(1)_4`.
pub fn h4_sigma1() -> Polynomial {
    parse_poly("p[4] - p[2]^2 - v[2]*p[3] - v[1]*p[2] - v[0]").expect("parses")
}

/// Matching of a μ-form against an explicit curve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MuDictionary {
    pub entries: BTreeMap<i16, Polynomial>,
    /// `(a, first value, conflicting value)` when μ_a is read off twice.
    pub conflicts: Vec<(i16, Polynomial, Polynomial)>,
    /// p-monomials whose coefficients disagree and carry no μ.
    pub mismatches: Vec<(Monomial, Polynomial)>,
}

/// Reads off μ_a by matching the coefficients of each p-monomial.
pub fn mu_dictionary(form: &Polynomial, curve: &Polynomial) -> MuDictionary {
    let is_p = |k: &JetKey| k.base.family == Family::P;
    let f = form.collect_by(is_p);
    let c = curve.collect_by(is_p);
    let mut d = MuDictionary::default();
    let monos: std::collections::BTreeSet<&Monomial> = f.keys().chain(c.keys()).collect();
    for m in monos {
        let fc = f.get(m).cloned().unwrap_or_default();
        let cc = c.get(m).cloned().unwrap_or_default();
        let mus: Vec<JetKey> = fc.variables().into_iter().filter(|k| k.base.family == Family::Mu).collect();
        match mus.as_slice() {
            [mu] if fc.len() == 1 => {
                // fc = k * mu, so mu = cc / k.
                let k = fc.terms().next().map(|(_, c)| c.clone()).expect("single term");
                let val = cc.scale(&(int(1) / k));
                match d.entries.get(&mu.base.a) {
                    Some(prev) if prev != &val => d.conflicts.push((mu.base.a, prev.clone(), val)),
                    Some(_) => {}
                    None => {
                        d.entries.insert(mu.base.a, val);
                    }
                }
            }
            _ => {
                if fc != cc {
                    d.mismatches.push((m.clone(), &cc - &fc));
                }
            }
        }
    }
    d
}

/// Table of Schur polynomials `P_0..P_n` in the times `t[k]`.
#[derive(Clone, Debug)]
pub struct SchurTable {
    pub p: Vec<Polynomial>,
}

fn schur_cache() -> &'static RwLock<Vec<Polynomial>> {
    static C: OnceLock<RwLock<Vec<Polynomial>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(vec![Poly::one()]))
}

/// `P_n` from `Σ z^m P_m = exp(Σ z^k t_k)`, through `n P_n = Σ_k k t_k P_{n-k}`.
pub fn schur_p(n: usize) -> Polynomial {
    if let Some(v) = schur_cache().read().expect("schur cache").get(n) {
        return v.clone();
    }
    let mut w = schur_cache().write().expect("schur cache");
    while w.len() <= n {
        let m = w.len();
        let mut acc = Poly::zero();
        for k in 1..=m {
            let t = Poly::sym(Symbol::t(k as i16)).scale(&int(k as i64));
            acc += &(&t * &w[m - k]);
        }
        w.push(acc.scale(&Rational::new(1.into(), (m as i64).into())));
    }
    w[n].clone()
}

pub fn schur_table(nmax: usize) -> SchurTable {
    SchurTable { p: (0..=nmax).map(schur_p).collect() }
}

/// `p*_n = P_n(t_k = −p_k / k)`.
pub fn canonical_pstar(n: usize) -> Polynomial {
    schur_p(n).substitute_with(|k| {
        (k.base.family == Family::T).then(|| Poly::sym(Symbol::p(k.base.a)).scale(&Rational::new((-1).into(), (k.base.a as i64).into())))
    })
}

/// Generators of the ideal of the curve family.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealBasis {
    pub stratum: Stratum,
    /// Big cell: `n -> pstar[n] − u[n−1]`. Σ₁: `3 -> F^1_23` (μ-form), `4 -> h^(1)_4`.
    pub generators: BTreeMap<i32, Polynomial>,
}

pub fn ideal_basis(stratum: Stratum, nmax: i32) -> Result<IdealBasis> {
    let mut generators = BTreeMap::new();
    match stratum {
        Stratum::BigCell => {
            if nmax < 2 {
                return Err(Error::InvalidIndex(format!("nmax = {nmax}")));
            }
            for n in 2..=nmax {
                generators.insert(n, &Poly::sym(Symbol::pstar(n as i16)) - &Poly::sym(Symbol::u(n as i16 - 1)));
            }
        }
        Stratum::Sigma1 => {
            if nmax > 4 {
                return Err(Error::Unsupported("Σ₁ generators beyond h^(1)_4 are not available".into()));
            }
            generators.insert(3, curve_mu_form());
            generators.insert(4, h4_sigma1());
        }
    }
    Ok(IdealBasis { stratum, generators })
}

/// Leading-monomial rewrite rules in the p / p* variables.
#[derive(Clone, Debug, Default)]
pub struct RewriteSet {
    rules: Vec<(Monomial, Polynomial)>,
}

fn is_coordinate(k: &JetKey) -> bool {
    matches!(k.base.family, Family::P | Family::PStar) && k.is_plain()
}

impl RewriteSet {
    /// Each generator is solved for its largest p/p* monomial, which must have
    /// a constant coefficient.
    pub fn from_generators<'a>(gens: impl IntoIterator<Item = &'a Polynomial>) -> Result<Self> {
        let mut rules = Vec::new();
        for g in gens {
            let parts = g.collect_by(is_coordinate);
            let (lead, cof) = parts
                .iter()
                .next_back()
                .filter(|(m, _)| !m.is_one())
                .ok_or_else(|| Error::NonTriangular(format!("{g} has no coordinate monomial")))?;
            let c = cof.as_constant().filter(|c| *c != int(0)).ok_or_else(|| Error::NonTriangular(format!("leading coefficient of {g} is {cof}")))?;
            let lead_poly = Poly::term(lead.clone(), c.clone());
            let tail = (&lead_poly - g).scale(&(int(1) / c));
            rules.push((lead.clone(), tail));
        }
        Ok(RewriteSet { rules })
    }

    /// Rules `p_n -> current`, `pstar_n -> P_n(−p_k/k)` for the big cell.
    pub fn big_cell(nmax: i32) -> Result<Self> {
        let mut rules = Vec::new();
        for (n, e) in big_cell_currents(nmax)? {
            if n >= 2 {
                rules.push((Monomial::var(Symbol::p(n as i16).into(), 1), e));
            }
        }
        for n in 1..=nmax {
            rules.push((Monomial::var(Symbol::pstar(n as i16).into(), 1), canonical_pstar(n as usize)));
        }
        Ok(RewriteSet { rules })
    }

    pub fn push(&mut self, lead: Monomial, tail: Polynomial) {
        self.rules.push((lead, tail));
    }

    pub fn rules(&self) -> &[(Monomial, Polynomial)] {
        &self.rules
    }

    /// Rewrites until no leading monomial divides any term.
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        const LIMIT: usize = 10_000;
        let mut cur = f.clone();
        for _ in 0..LIMIT {
            let mut next = Poly::zero();
            let mut changed = false;
            for (m, c) in cur.terms() {
                let hit = self.rules.iter().find_map(|(lead, tail)| m.div(lead).map(|q| (q, tail)));
                match hit {
                    Some((q, tail)) => {
                        changed = true;
                        next += &tail.mul_monomial(&q, c);
                    }
                    None => next.add_term(m.clone(), c.clone()),
                }
            }
            if !changed {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::DepthLimit(LIMIT))
    }
}

/// Reduces `f` modulo the rewrite set; `u[k]` is read as `H[1,k]`.
pub fn ideal_reduce(f: &Polynomial, rules: &RewriteSet) -> Result<Polynomial> {
    rules.reduce(&u_to_h(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_schur_polynomials() {
        assert_eq!(schur_p(0), Poly::one());
        assert_eq!(schur_p(1), Poly::sym(Symbol::t(1)));
        assert_eq!(schur_p(2), parse_poly("1/2*t[1]^2 + t[2]").unwrap());
        assert_eq!(schur_p(3), parse_poly("1/6*t[1]^3 + t[1]*t[2] + t[3]").unwrap());
    }

    #[test]
    fn low_pstar() {
        assert_eq!(canonical_pstar(1), parse_poly("-p[1]").unwrap());
        assert_eq!(canonical_pstar(2), parse_poly("1/2*p[1]^2 - 1/2*p[2]").unwrap());
        assert_eq!(canonical_pstar(3), parse_poly("-1/6*p[1]^3 + 1/2*p[1]*p[2] - 1/3*p[3]").unwrap());
    }

    #[test]
    fn big_cell_currents_match_print() {
        let got = big_cell_currents(5).unwrap();
        for (n, e) in printed_currents(Stratum::BigCell) {
            assert_eq!(got[&n], e, "p{n}");
        }
    }

    #[test]
    fn membership_by_substitution() {
        let rules = RewriteSet::big_cell(4).unwrap();
        let b = ideal_basis(Stratum::BigCell, 4).unwrap();
        for g in b.generators.values() {
            assert!(ideal_reduce(g, &rules).unwrap().is_zero());
        }
        assert_eq!(ideal_reduce(&Poly::one(), &rules).unwrap(), Poly::one());
    }

    #[test]
    fn non_triangular_generator_rejected() {
        let g = parse_poly("H[1,1]*p[2] - 1").unwrap();
        assert!(matches!(RewriteSet::from_generators([&g]), Err(Error::NonTriangular(_))));
    }
}
