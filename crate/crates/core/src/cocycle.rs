//! Hochschild 2-cocycles and coboundaries on the big-cell algebra.
//!
//! Elements of the module are finite expansions `Σ_l c_l p_l` with polynomial
//! coefficients, stored as [`PVec`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::laurent::StructureConstants;
use crate::poly::Poly;
use crate::scalar::{int, Rational};
use crate::symbol::{JetKey, Symbol};
use crate::Polynomial;

/// `l -> coefficient of p_l`.
pub type PVec = BTreeMap<i32, Polynomial>;

fn add_into(acc: &mut PVec, v: &PVec, c: &Polynomial) {
    for (l, x) in v {
        let e = acc.entry(*l).or_default();
        *e += &(x * c);
    }
}

fn prune(v: PVec) -> PVec {
    v.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn pvec_sub(a: &PVec, b: &PVec) -> PVec {
    let mut out = a.clone();
    add_into(&mut out, b, &Poly::int(-1));
    prune(out)
}

/// Applies `f` to every coefficient and drops zeros.
pub fn pvec_map(v: &PVec, mut f: impl FnMut(&Polynomial) -> Result<Polynomial>) -> Result<PVec> {
    let mut out = PVec::new();
    for (l, c) in v {
        out.insert(*l, f(c)?);
    }
    Ok(prune(out))
}

/// Renders `Σ c_l p_l` as a polynomial in `p[l]` (`p[0]` is 1).
pub fn pvec_to_poly(v: &PVec) -> Polynomial {
    let mut out = Poly::zero();
    for (l, c) in v {
        let b = if *l == 0 { Poly::one() } else { Poly::sym(Symbol::p(*l as i16)) };
        out += &(c * &b);
    }
    out
}

/// `p_j · v`, re-expanded through the structure constants.
pub fn mul_basis(sc: &StructureConstants, j: i32, v: &PVec) -> Result<PVec> {
    let mut out = PVec::new();
    for (n, c) in v {
        if !sc.covers(j, *n) {
            return Err(Error::MissingEntry(format!("C^l_{{{j},{n}}}")));
        }
        for (r, cr) in sc.row(j, *n) {
            let e = out.entry(r).or_default();
            *e += &(cr * c);
        }
    }
    Ok(prune(out))
}

/// Symmetric bilinear map on basis pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CocycleMap {
    values: BTreeMap<(i32, i32), PVec>,
}

impl CocycleMap {
    pub fn from_fn(bound: i32, f: impl Fn(i32, i32) -> PVec) -> Self {
        let mut values = BTreeMap::new();
        for j in 0..=bound {
            for k in j..=bound {
                let v = prune(f(j, k));
                values.insert((j, k), v);
            }
        }
        CocycleMap { values }
    }

    /// `ψ(p_j,p_k) = Σ_l (Delta[k,j−l] + Delta[j,k−l]) p_l`, the cocycle of a tangent vector.
    pub fn from_delta(bound: i32) -> Self {
        Self::from_fn(bound, |j, k| {
            let mut v = PVec::new();
            if j == 0 || k == 0 {
                return v;
            }
            for l in 0..j.max(k) {
                let c = &crate::tangent::delta(k, j - l) + &crate::tangent::delta(j, k - l);
                v.insert(l, c);
            }
            v
        })
    }

    /// `ψ(p_j,p_k) = Σ_l (∂_{x_k} u_{j−l} + ∂_{x_j} u_{k−l}) p_l`.
    pub fn dkp(bound: i32) -> Self {
        let du = |a: i32, dir: i32| -> Polynomial {
            if a >= 1 && dir >= 1 {
                Poly::jet(JetKey::new(Symbol::u(a as i16), [dir as u8]))
            } else {
                Poly::zero()
            }
        };
        Self::from_fn(bound, |j, k| {
            let mut v = PVec::new();
            if j == 0 || k == 0 {
                return v;
            }
            for l in 0..j.max(k) {
                v.insert(l, &du(j - l, k) + &du(k - l, j));
            }
            v
        })
    }

    /// The coboundary `δg(p_j,p_k) = p_j g(p_k) + p_k g(p_j) − g(p_j p_k)`.
    pub fn coboundary(g: &LinearMapG, sc: &StructureConstants, bound: i32) -> Result<Self> {
        let mut values = BTreeMap::new();
        for j in 0..=bound {
            for k in j..=bound {
                values.insert((j, k), delta_g(g, sc, j, k)?);
            }
        }
        Ok(CocycleMap { values })
    }

    pub fn get(&self, j: i32, k: i32) -> Result<&PVec> {
        let key = if j <= k { (j, k) } else { (k, j) };
        self.values.get(&key).ok_or_else(|| Error::MissingEntry(format!("psi(p{j}, p{k})")))
    }

    pub fn map(&self, mut f: impl FnMut(&Polynomial) -> Result<Polynomial>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (k, v) in &self.values {
            values.insert(*k, pvec_map(v, &mut f)?);
        }
        Ok(CocycleMap { values })
    }
}

/// Linear map `g(p_i) = π_i`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearMapG {
    pub values: BTreeMap<i32, PVec>,
}

impl LinearMapG {
    pub fn get(&self, i: i32) -> Result<&PVec> {
        self.values.get(&i).ok_or_else(|| Error::MissingEntry(format!("g(p{i})")))
    }

    /// `π_i` as a polynomial in the `p[l]`.
    pub fn as_polynomial(&self, i: i32) -> Result<Polynomial> {
        Ok(pvec_to_poly(self.get(i)?))
    }

    /// Solves `π_j p_k + p_j π_k − ψ(p_j,p_k) − Σ_l C^l_{jk} π_l = 0` at `j = 1`
    /// for `π_{k+1}`, starting from `π_0 = 0` and the given `π_1`.
    pub fn from_tangent(psi: &CocycleMap, sc: &StructureConstants, pi1: PVec, bound: i32) -> Result<Self> {
        let mut values: BTreeMap<i32, PVec> = BTreeMap::new();
        values.insert(0, PVec::new());
        values.insert(1, prune(pi1));
        for k in 1..bound {
            let mut next = mul_basis(sc, k, &values[&1])?;
            add_into(&mut next, &mul_basis(sc, 1, &values[&k])?, &Poly::one());
            add_into(&mut next, psi.get(1, k)?, &Poly::int(-1));
            for l in 0..=k {
                let c = sc.get(1, k, l);
                if !c.is_zero() {
                    add_into(&mut next, &values[&l], &-&c);
                }
            }
            values.insert(k + 1, prune(next));
        }
        Ok(LinearMapG { values })
    }
}

fn delta_g(g: &LinearMapG, sc: &StructureConstants, j: i32, k: i32) -> Result<PVec> {
    let mut out = mul_basis(sc, j, g.get(k)?)?;
    add_into(&mut out, &mul_basis(sc, k, g.get(j)?)?, &Poly::one());
    for (l, c) in sc.row(j, k) {
        add_into(&mut out, g.get(l)?, &-c);
    }
    if !sc.covers(j, k) {
        return Err(Error::MissingEntry(format!("C^l_{{{j},{k}}}")));
    }
    Ok(prune(out))
}

/// `p_j ψ(p_k,p_m) − ψ(p_j p_k, p_m) + ψ(p_j, p_k p_m) − p_m ψ(p_j,p_k)` in the p-basis.
pub fn cocycle_defect(psi: &CocycleMap, sc: &StructureConstants, j: i32, k: i32, m: i32) -> Result<PVec> {
    for (a, b) in [(j, k), (k, m)] {
        if !sc.covers(a, b) {
            return Err(Error::MissingEntry(format!("C^l_{{{a},{b}}}")));
        }
    }
    let mut out = mul_basis(sc, j, psi.get(k, m)?)?;
    for (l, c) in sc.row(j, k) {
        add_into(&mut out, psi.get(l, m)?, &-c);
    }
    for (l, c) in sc.row(k, m) {
        add_into(&mut out, psi.get(j, l)?, c);
    }
    add_into(&mut out, &mul_basis(sc, m, psi.get(j, k)?)?, &Poly::int(-1));
    Ok(prune(out))
}

/// `ψ(p_j,p_k) − δg(p_j,p_k)`.
pub fn coboundary_decompose(psi: &CocycleMap, g: &LinearMapG, sc: &StructureConstants, j: i32, k: i32) -> Result<PVec> {
    Ok(pvec_sub(psi.get(j, k)?, &delta_g(g, sc, j, k)?))
}

/// The dKP cocycle through the tau function, `u_k = −(1/k) F_{1k}`:
/// `ψ(p_j,p_k) = −Σ_l ((1/(j−l)) ∂_{x_k}∂_{x_{j−l}} + (1/(k−l)) ∂_{x_j}∂_{x_{k−l}}) ∂_{x_1}F p_l`.
/// The sum starts at `l = 0`, matching the u-form of the same cocycle.
pub fn tau_coboundary(j: i32, k: i32, fmax: i32) -> Result<PVec> {
    if j < 0 || k < 0 || j > fmax || k > fmax {
        return Err(Error::InvalidIndex(format!("({j},{k}) beyond fmax = {fmax}")));
    }
    let term = |a: i32, dir: i32| -> Polynomial {
        if a < 1 || dir < 1 {
            return Poly::zero();
        }
        Poly::jet(JetKey::new(Symbol::fhess(dir as i16, a as i16), [1])).scale(&(int(-1) / Rational::from_integer(a.into())))
    };
    let mut v = PVec::new();
    if j == 0 || k == 0 {
        return Ok(v);
    }
    for l in 0..j.max(k) {
        v.insert(l, &term(j - l, k) + &term(k - l, j));
    }
    Ok(prune(v))
}

/// `u[k] -> −(1/k) Fhess[1,k]` with jets following by differentiation.
pub fn u_to_tau(p: &Polynomial) -> Polynomial {
    p.substitute_fields(|s| {
        (s.family == crate::symbol::Family::U)
            .then(|| Poly::sym(Symbol::fhess(1, s.a)).scale(&(int(-1) / Rational::from_integer((s.a as i64).into()))))
    })
}
