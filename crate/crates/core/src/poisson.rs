//! Poisson brackets on the `(q, y)` phase space, the ideal condition for the
//! big-cell curve family and the linear tensor ansatz.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::ConstraintSystem;
use crate::poly::Poly;
use crate::reduction::BigCellNormalizer;
use crate::scalar::Rational;
use crate::symbol::{Family, JetKey, Symbol};
use crate::tangent::{DkpRewriter, PdeSystem};
use crate::varieties::canonical_pstar;
use crate::Polynomial;

fn inv(n: i32) -> Rational {
    Rational::new(1.into(), n.into())
}

/// How `Σ_s J_{ls} ∂_{y_s}` is evaluated in [`jacobi_defect`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YDerivative {
    /// Ordinary partial derivatives in the plain `y` symbols.
    Partial,
    /// For `J_{ls} = ∂y_s/∂x_l` the contraction is the chain rule, i.e. the
    /// total derivative in `x_l`.
    Total,
}

/// Coordinates `q_k`, `y_i` with `{q,q} = {y,y} = 0` and `{y_i, q_k} = J_{ki}`.
#[derive(Clone, Debug)]
pub struct PhaseSpace {
    pub q: Family,
    pub y: Family,
    /// `(k, i) -> J_{ki}`.
    pub table: BTreeMap<(i32, i32), Polynomial>,
    pub mode: YDerivative,
}

impl PhaseSpace {
    pub fn from_fn(q: Family, y: Family, bound: i32, mode: YDerivative, f: impl Fn(i32, i32) -> Polynomial) -> Self {
        let mut table = BTreeMap::new();
        for k in 1..=bound {
            for i in 1..=bound {
                table.insert((k, i), f(k, i));
            }
        }
        PhaseSpace { q, y, table, mode }
    }

    /// `{x_i, p_k} = δ_{ki}`.
    pub fn darboux(bound: i32) -> Self {
        Self::from_fn(Family::P, Family::X, bound, YDerivative::Partial, |k, i| if k == i { Poly::one() } else { Poly::zero() })
    }

    /// `(p, u)` with `J_{ki} = D[u[i]; x_k]`.
    pub fn jet_ansatz(bound: i32) -> Self {
        Self::from_fn(Family::P, Family::U, bound, YDerivative::Total, |k, i| Poly::jet(JetKey::new(Symbol::u(i as i16), [k as u8])))
    }

    /// `(p*, u)` with free symbols `Jstar[k,i]`.
    pub fn symbolic_star(bound: i32) -> Self {
        Self::from_fn(Family::PStar, Family::U, bound, YDerivative::Partial, |k, i| Poly::sym(Symbol::jstar(k as i16, i as i16)))
    }

    pub fn entry(&self, k: i32, i: i32) -> Result<&Polynomial> {
        self.table.get(&(k, i)).ok_or_else(|| Error::MissingEntry(format!("J[{k},{i}]")))
    }

    fn coordinates(&self, f: &Polynomial) -> Result<(Vec<i32>, Vec<i32>)> {
        let (mut qs, mut ys) = (Vec::new(), Vec::new());
        for v in f.variables() {
            if !v.is_plain() {
                return Err(Error::ForeignSymbol(v.to_string()));
            }
            if v.base.family == self.q {
                qs.push(v.base.a as i32);
            } else if v.base.family == self.y {
                ys.push(v.base.a as i32);
            } else {
                return Err(Error::ForeignSymbol(v.to_string()));
            }
        }
        Ok((qs, ys))
    }

    fn qk(&self, k: i32) -> JetKey {
        JetKey::plain(Symbol::new1(self.q, k as i16))
    }

    fn yk(&self, i: i32) -> JetKey {
        JetKey::plain(Symbol::new1(self.y, i as i16))
    }

    /// `{f, g} = Σ_{i,k} J_{ki} (∂_{y_i} f ∂_{q_k} g − ∂_{q_k} f ∂_{y_i} g)`.
    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let (fq, fy) = self.coordinates(f)?;
        let (gq, gy) = self.coordinates(g)?;
        let mut out = Poly::zero();
        for &i in &fy {
            let dfi = f.partial(&self.yk(i));
            for &k in &gq {
                out += &(&(&dfi * &g.partial(&self.qk(k))) * self.entry(k, i)?);
            }
        }
        for &k in &fq {
            let dfk = f.partial(&self.qk(k));
            for &i in &gy {
                out -= &(&(&dfk * &g.partial(&self.yk(i))) * self.entry(k, i)?);
            }
        }
        Ok(out)
    }

    fn contract_y(&self, l: i32, f: &Polynomial) -> Result<Polynomial> {
        match self.mode {
            YDerivative::Total => Ok(f.formal_derivative(l as u8)),
            YDerivative::Partial => {
                let mut out = Poly::zero();
                for v in f.variables() {
                    if v.is_plain() && v.base.family == self.y {
                        out += &(self.entry(l, v.base.a as i32)? * &f.partial(&v));
                    }
                }
                Ok(out)
            }
        }
    }

    fn contract_q(&self, j: i32, f: &Polynomial) -> Result<Polynomial> {
        let mut out = Poly::zero();
        for v in f.variables() {
            if v.is_plain() && v.base.family == self.q {
                out += &(self.entry(v.base.a as i32, j)? * &f.partial(&v));
            }
        }
        Ok(out)
    }
}

/// The two Jacobi sums at `(l, k, j)`:
/// `Σ_s J_{ls}∂_{y_s}J_{kj} − Σ_s J_{ks}∂_{y_s}J_{lj}` and
/// `Σ_s J_{sj}∂_{q_s}J_{lk} − Σ_s J_{sk}∂_{q_s}J_{lj}`.
pub fn jacobi_defect(ps: &PhaseSpace, l: i32, k: i32, j: i32) -> Result<(Polynomial, Polynomial)> {
    let first = &ps.contract_y(l, ps.entry(k, j)?)? - &ps.contract_y(k, ps.entry(l, j)?)?;
    let second = &ps.contract_q(j, ps.entry(l, k)?)? - &ps.contract_q(k, ps.entry(l, j)?)?;
    Ok((first, second))
}

/// `h*_n = p*_n − u_{n−1}`.
pub fn h_star(n: i32) -> Polynomial {
    &Poly::sym(Symbol::pstar(n as i16)) - &Poly::sym(Symbol::u(n as i16 - 1))
}

/// `{h*_n, h*_m} − (J*_{n,m−1} − J*_{m,n−1})`.
pub fn ideal_bracket_residue(n: i32, m: i32, ps: &PhaseSpace) -> Result<Polynomial> {
    let b = ps.bracket(&h_star(n), &h_star(m))?;
    Ok(&(&b - ps.entry(n, m - 1)?) + ps.entry(m, n - 1)?)
}

/// `J_{ki}`, zero outside the positive quadrant.
pub fn j_sym(k: i32, i: i32) -> Polynomial {
    if k >= 1 && i >= 1 {
        Poly::sym(Symbol::j(k as i16, i as i16))
    } else {
        Poly::zero()
    }
}

fn u(k: i32) -> Polynomial {
    if k >= 1 {
        Poly::sym(Symbol::u(k as i16))
    } else {
        Poly::zero()
    }
}

fn pstar(n: i32) -> Polynomial {
    match n {
        0 => Poly::one(),
        n if n > 0 => Poly::sym(Symbol::pstar(n as i16)),
        _ => Poly::zero(),
    }
}

/// Tensors `J*_{lk} = −Σ_m (1/m) J_{mk}(u) p*_{l−m}`.
#[derive(Clone, Debug)]
pub struct PoissonTensorLinear {
    pub base: BTreeMap<(i32, i32), Polynomial>,
}

impl PoissonTensorLinear {
    pub fn from_fn(bound: i32, f: impl Fn(i32, i32) -> Polynomial) -> Self {
        let mut base = BTreeMap::new();
        for m in 1..=bound {
            for k in 1..=bound {
                base.insert((m, k), f(m, k));
            }
        }
        PoissonTensorLinear { base }
    }

    /// Free symbols `J[m,k]`.
    pub fn symbolic(bound: i32) -> Self {
        Self::from_fn(bound, j_sym)
    }

    pub fn get(&self, m: i32, k: i32) -> Result<&Polynomial> {
        self.base.get(&(m, k)).ok_or_else(|| Error::MissingEntry(format!("J[{m},{k}]")))
    }

    pub fn jstar(&self, l: i32, k: i32) -> Result<Polynomial> {
        let mut out = Poly::zero();
        for m in 1..=l {
            out -= &(self.get(m, k)? * &pstar(l - m)).scale(&inv(m));
        }
        Ok(out)
    }

    /// `Σ_m J_{mk} ∂p*_l/∂p_m` in the `p` coordinates.
    pub fn jstar_via_schur(&self, l: i32, k: i32) -> Result<Polynomial> {
        let ps = canonical_pstar(l as usize);
        let mut out = Poly::zero();
        for m in 1..=l {
            out += &(self.get(m, k)? * &ps.partial(&JetKey::plain(Symbol::p(m as i16))));
        }
        Ok(out)
    }

    /// The induced phase space in `(p*, u)` with entries for `l, k <= bound`.
    pub fn phase_space(&self, bound: i32) -> Result<PhaseSpace> {
        let mut table = BTreeMap::new();
        for l in 1..=bound {
            for k in 1..=bound {
                table.insert((l, k), self.jstar(l, k)?);
            }
        }
        Ok(PhaseSpace { q: Family::PStar, y: Family::U, table, mode: YDerivative::Partial })
    }
}

/// `p*_n -> canonical Schur form in p`.
pub fn pstar_to_p(f: &Polynomial) -> Polynomial {
    f.substitute_with(|k| (k.is_plain() && k.base.family == Family::PStar).then(|| canonical_pstar(k.base.a as usize)))
}

/// Restriction to the curve family, `p*_n -> u_{n−1}` for `n >= 2`.
pub fn restrict_big_cell(f: &Polynomial) -> Polynomial {
    f.substitute_with(|k| (k.is_plain() && k.base.family == Family::PStar && k.base.a >= 2).then(|| u(k.base.a as i32 - 1)))
}

/// `J*|_Γ = α + β p*_1`, as `(α, β)`.
pub fn restriction_decomposition(jstar: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    let r = restrict_big_cell(jstar);
    let p1 = JetKey::plain(Symbol::pstar(1));
    if r.degree_in(Family::PStar) > 1 {
        return Err(Error::Unsupported("restricted tensor is not linear in p*_1".into()));
    }
    let beta = r.partial(&p1);
    let alpha = &r - &(&beta * &Poly::sym(Symbol::pstar(1)));
    Ok((alpha, beta))
}

/// Items `α_{i,k−1} − α_{k,i−1}` (key `[0,i,k]`) and `β_{i,k−1} − β_{k,i−1}`
/// (key `[1,i,k]`) for `2 <= i,k <= nmax`.
pub fn alpha_beta_conditions(t: &PoissonTensorLinear, nmax: i32) -> Result<ConstraintSystem> {
    let mut ab = BTreeMap::new();
    for l in 1..=nmax {
        for k in 1..nmax {
            ab.insert((l, k), restriction_decomposition(&t.jstar(l, k)?)?);
        }
    }
    let mut sys = ConstraintSystem::new("alpha-beta/big-cell");
    for i in 2..=nmax {
        for k in 2..=nmax {
            let (ai, bi) = &ab[&(i, k - 1)];
            let (ak, bk) = &ab[&(k, i - 1)];
            sys.insert(vec![0, i, k], ai - ak);
            sys.insert(vec![1, i, k], bi - bk);
        }
    }
    Ok(sys)
}

/// First family `(1/m)J_{mn} − (1/n)J_{nm}`.
pub fn ansatz_first(j: &impl Fn(i32, i32) -> Polynomial, n: i32, m: i32) -> Polynomial {
    &j(m, n).scale(&inv(m)) - &j(n, m).scale(&inv(n))
}

/// Second family `(1/m)J_{m,n−1} − (1/n)J_{n,m−1} + Σ_{k<=m−2} (1/k)u_{m−k−1}J_{k,n−1} − Σ_{k<=n−2} (1/k)u_{n−k−1}J_{k,m−1}`.
pub fn ansatz_second(j: &impl Fn(i32, i32) -> Polynomial, n: i32, m: i32) -> Polynomial {
    let mut out = &j(m, n - 1).scale(&inv(m)) - &j(n, m - 1).scale(&inv(n));
    for k in 1..=(m - 2) {
        out += &(&u(m - k - 1) * &j(k, n - 1)).scale(&inv(k));
    }
    for k in 1..=(n - 2) {
        out -= &(&u(n - k - 1) * &j(k, m - 1)).scale(&inv(k));
    }
    out
}

fn ansatz_system(label: &str, nmax: i32, mmax: i32, j: impl Fn(i32, i32) -> Polynomial) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new(label);
    for n in 1..=nmax {
        for m in 1..=mmax {
            sys.insert(vec![1, n, m], ansatz_first(&j, n, m));
            if n >= 2 && m >= 2 {
                sys.insert(vec![2, n, m], ansatz_second(&j, n, m));
            }
        }
    }
    sys
}

/// Both constraint families on the linear tensor ansatz, keyed `[family, n, m]`.
/// The second family starts at `n, m = 2`; below that it refers to `J_{k,0}`.
pub fn linear_ansatz_constraints(nmax: i32, mmax: i32) -> ConstraintSystem {
    ansatz_system("ansatz/J", nmax, mmax, j_sym)
}

/// The constraint families in jets, `J_{ik} -> D[u[k]; x_i]`.
pub fn darboux_system(nmax: i32, mmax: i32) -> PdeSystem {
    let jet = |i: i32, k: i32| {
        if i >= 1 && k >= 1 {
            Poly::jet(JetKey::new(Symbol::u(k as i16), [i as u8]))
        } else {
            Poly::zero()
        }
    };
    let sys = ansatz_system("darboux", nmax, mmax, jet);
    PdeSystem {
        equations: sys
            .items
            .into_iter()
            .map(|(k, p)| (format!("{}({},{})", if k[0] == 1 { "first" } else { "second" }, k[1], k[2]), p))
            .collect(),
    }
}

/// Normal forms of the Darboux equations modulo the dKP flows.
pub fn darboux_residuals(sys: &PdeSystem, rw: &DkpRewriter) -> Result<Vec<(String, Polynomial)>> {
    sys.equations.par_iter().map(|(l, p)| Ok((l.clone(), rw.reduce(p)?))).collect()
}

/// One item of the `J -> Delta` sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceItem {
    pub indices: Vec<i32>,
    pub residual: Polynomial,
    /// `H` and `Delta` symbols eliminated on the way to the normal form.
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub nmax: i32,
    pub items: Vec<EquivalenceItem>,
}

impl EquivalenceReport {
    pub fn all_zero(&self) -> bool {
        self.items.iter().all(|i| i.residual.is_zero())
    }

    pub fn zero_count(&self) -> usize {
        self.items.iter().filter(|i| i.residual.is_zero()).count()
    }
}

/// Substitutes `J_{nm} -> Delta[n,m]` into both families at `n, m <= nmax` and
/// reduces modulo the closure constraints, their linearization and the symmetry
/// relations, all folded into the big-cell normal form.
pub fn equivalence_j_vs_delta(nmax: i32) -> Result<EquivalenceReport> {
    if nmax < 1 {
        return Err(Error::InvalidIndex(format!("nmax = {nmax}")));
    }
    let nf = BigCellNormalizer::new(2 * nmax + 2);
    equivalence_with(nmax, &nf)
}

pub fn equivalence_with(nmax: i32, nf: &BigCellNormalizer) -> Result<EquivalenceReport> {
    let d = |a: i32, b: i32| crate::tangent::delta(a, b);
    let sys = ansatz_system("ansatz/Delta", nmax, nmax, d);
    let items: Vec<(Vec<i32>, Polynomial)> = sys.items.into_iter().collect();
    let items = items
        .into_par_iter()
        .map(|(indices, p)| {
            let trace = p
                .variables()
                .into_iter()
                .filter(|k| matches!(k.base.family, Family::H | Family::Delta) && k.base.a != 1)
                .map(|k| k.to_string())
                .collect();
            Ok(EquivalenceItem { indices, residual: nf.reduce(&p)?, trace })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivalenceReport { nmax, items })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    #[test]
    fn darboux_brackets() {
        let ps = PhaseSpace::darboux(4);
        let p = |i| Poly::sym(Symbol::p(i));
        let x = |i| Poly::sym(Symbol::x(i));
        assert!(ps.bracket(&p(1), &p(2)).unwrap().is_zero());
        assert_eq!(ps.bracket(&x(2), &p(2)).unwrap(), Poly::one());
        assert_eq!(ps.bracket(&p(2), &x(2)).unwrap(), Poly::int(-1));
        assert!(ps.bracket(&x(1), &p(2)).unwrap().is_zero());
    }

    #[test]
    fn table_lookup() {
        let ps = PhaseSpace::symbolic_star(4);
        let y = Poly::sym(Symbol::u(2));
        let q = Poly::sym(Symbol::pstar(3));
        assert_eq!(ps.bracket(&y, &q).unwrap(), Poly::sym(Symbol::jstar(3, 2)));
    }

    #[test]
    fn foreign_symbols_are_rejected() {
        let ps = PhaseSpace::darboux(3);
        let h = Poly::sym(Symbol::h(1, 1));
        assert!(matches!(ps.bracket(&h, &Poly::sym(Symbol::p(1))), Err(Error::ForeignSymbol(_))));
    }

    #[test]
    fn second_family_instance() {
        let sys = linear_ansatz_constraints(3, 3);
        assert_eq!(sys.get(&[2, 2, 3]).unwrap(), &parse_poly("1/3*J[3,1] - 1/2*J[2,2] + u[1]*J[1,1]").unwrap());
        assert!(sys.get(&[1, 2, 2]).unwrap().is_zero());
    }

    #[test]
    fn darboux_first_instance() {
        let sys = darboux_system(2, 2);
        let e = sys.equations.iter().find(|(l, _)| l == "first(1,2)").unwrap();
        assert_eq!(e.1, parse_poly("1/2*D[u[1]; x2] - D[u[2]; x1]").unwrap());
    }
}
