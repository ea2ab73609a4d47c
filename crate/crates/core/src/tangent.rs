//! Tangent systems, the jet ansatz and the dispersionless KP flows.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::laurent::{bigcell_constraint, ConstraintSystem, Stratum};
use crate::poly::Poly;
use crate::reduction::{linearize, BigCellNormalizer};
use crate::scalar::{rat, Rational};
use crate::symbol::{Family, JetKey, Symbol};
use crate::text::parse_poly;
use crate::Polynomial;

fn h(i: i32, k: i32) -> Polynomial {
    Stratum::BigCell.h(i, k)
}

/// `Delta[i,k]`, zero for `i < 1` or `k < 1`.
pub fn delta(i: i32, k: i32) -> Polynomial {
    if i >= 1 && k >= 1 {
        Poly::sym(Symbol::delta(i as i16, k as i16))
    } else {
        Poly::zero()
    }
}

/// The linear tangent equation at `(j,k,m)` written out term by term.
pub fn tangent_item(j: i32, k: i32, m: i32) -> Polynomial {
    let mut out = &delta(j + k, m) - &delta(j, m + k);
    for l in 1..j {
        out += &(&h(k, j - l) * &delta(l, m));
    }
    for l in 1..k {
        out += &(&h(j, k - l) * &delta(l, m));
    }
    for l in 1..m {
        out -= &(&h(k, m - l) * &delta(j, l));
    }
    out -= &delta(k, m + j);
    for l in 1..j {
        out += &(&delta(k, j - l) * &h(l, m));
    }
    for l in 1..k {
        out += &(&delta(j, k - l) * &h(l, m));
    }
    for l in 1..m {
        out -= &(&delta(k, m - l) * &h(j, l));
    }
    out
}

/// The first variation of the closure constraint at `(j,k,m)`.
pub fn linearized_closure(j: i32, k: i32, m: i32) -> Polynomial {
    linearize(&bigcell_constraint(j, k, m))
}

pub fn tangent_system(jmax: i32, kmax: i32, mmax: i32) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new("tangent/big-cell");
    for j in 1..=jmax {
        for k in 1..=kmax {
            for m in 1..=mmax {
                sys.insert(vec![j, k, m], tangent_item(j, k, m));
            }
        }
    }
    sys
}

/// `k Delta[i,k] − i Delta[k,i]`.
pub fn symmetry_item(i: i32, k: i32) -> Polynomial {
    &delta(i, k).scale(&Rational::from_integer(k.into())) - &delta(k, i).scale(&Rational::from_integer(i.into()))
}

pub fn symmetry_relations(imax: i32, kmax: i32) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new("symmetry/big-cell");
    for i in 1..=imax {
        for k in 1..=kmax {
            sys.insert(vec![i, k], symmetry_item(i, k));
        }
    }
    sys
}

/// Named list of expected-zero equations in jet variables.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PdeSystem {
    pub equations: Vec<(String, Polynomial)>,
}

impl PdeSystem {
    pub fn polys(&self) -> impl Iterator<Item = &Polynomial> {
        self.equations.iter().map(|(_, p)| p)
    }
}

/// `Delta[i,k] -> D[u[k]; x_i]` and `H[1,k] -> u[k]`.
pub fn jet_ansatz(p: &Polynomial) -> Result<Polynomial> {
    if p.degree_in(Family::Delta) > 1 {
        return Err(Error::NonlinearDelta(p.to_string()));
    }
    Ok(p.substitute_with(|k| {
        if !k.is_plain() {
            return None;
        }
        let s = k.base;
        match s.family {
            Family::Delta => Some(Poly::jet(JetKey::new(Symbol::u(s.b), [s.a as u8]))),
            Family::H if s.a == 1 => Some(Poly::sym(Symbol::u(s.b))),
            _ => None,
        }
    }))
}

pub fn apply_jet_ansatz(sys: &ConstraintSystem) -> Result<PdeSystem> {
    let mut equations = Vec::with_capacity(sys.len());
    for (idx, p) in &sys.items {
        let label = format!("{}{:?}", sys.label, idx);
        equations.push((label, jet_ansatz(p)?));
    }
    Ok(PdeSystem { equations })
}

/// A flow equation with the combination of inputs that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedEquation {
    pub combination: Vec<(String, Rational)>,
    /// The combination before the ansatz, in Delta variables.
    pub delta_form: Polynomial,
    pub equation: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Input {
    Tangent(i32, i32, i32),
    Symmetry(i32, i32),
}

impl Input {
    fn poly(self) -> Polynomial {
        match self {
            Input::Tangent(j, k, m) => tangent_item(j, k, m),
            Input::Symmetry(i, k) => symmetry_item(i, k),
        }
    }
    fn label(self) -> String {
        match self {
            Input::Tangent(j, k, m) => format!("tangent({j},{k},{m})"),
            Input::Symmetry(i, k) => format!("symmetry({i},{k})"),
        }
    }
}

type Recipe = (Vec<(Input, Rational)>, Option<(i16, i16)>);

/// Fixed combinations producing the flows, with the Delta symbol each one
/// must eliminate.
fn flow_recipes(level: u8) -> Result<Vec<Recipe>> {
    Ok(match level {
        1 => vec![
            (vec![(Input::Tangent(1, 2, 1), rat(3, 2)), (Input::Symmetry(1, 3), rat(1, 2))], Some((1, 3))),
            (vec![(Input::Symmetry(1, 2), rat(1, 1))], None),
        ],
        2 => vec![
            (vec![(Input::Tangent(1, 1, 3), rat(-2, 1)), (Input::Symmetry(1, 4), rat(-1, 1))], Some((1, 4))),
            (vec![(Input::Tangent(1, 2, 1), rat(1, 2)), (Input::Symmetry(1, 3), rat(1, 2))], Some((3, 1))),
            (vec![(Input::Symmetry(1, 2), rat(1, 1))], None),
        ],
        _ => return Err(Error::Unsupported(format!("dKP level {level} (1 or 2)"))),
    })
}

/// The first (`level = 1`) or second (`level = 2`) dKP flow.
pub fn derive_dkp_flow(level: u8) -> Result<Vec<DerivedEquation>> {
    let mut out = Vec::new();
    for (recipe, eliminated) in flow_recipes(level)? {
        let mut d = Poly::zero();
        for (inp, c) in &recipe {
            d += &inp.poly().scale(c);
        }
        if let Some((a, b)) = eliminated {
            let key = JetKey::plain(Symbol::delta(a, b));
            if d.variables().contains(&key) {
                return Err(Error::EliminationFailed(d.to_string()));
            }
        }
        out.push(DerivedEquation {
            combination: recipe.iter().map(|(i, c)| (i.label(), c.clone())).collect(),
            equation: jet_ansatz(&d)?,
            delta_form: d,
        });
    }
    Ok(out)
}

/// The flow equations as printed, each as left side minus right side.
pub fn printed_dkp_flow(level: u8) -> Result<Vec<Polynomial>> {
    let src: &[&str] = match level {
        1 => &["D[u[1]; x3] - 3/2*D[u[2]; x2] + 3*u[1]*D[u[1]; x1]", "2*D[u[2]; x1] - D[u[1]; x2]"],
        2 => &[
            "D[u[1]; x4] - 2*D[u[3]; x2] + 2*(u[1]*D[u[2]; x1] + u[2]*D[u[1]; x1])",
            "D[u[3]; x1] - 1/2*D[u[2]; x2] + u[1]*D[u[1]; x1]",
            "2*D[u[2]; x1] - D[u[1]; x2]",
        ],
        _ => return Err(Error::Unsupported(format!("dKP level {level}"))),
    };
    Ok(src.iter().map(|s| parse_poly(s).expect("printed flow parses")).collect())
}

/// Rewrites every jet of `u` to `u` and its `x_1`-derivatives, using the
/// flows `∂_{x_i} u_k = (normal form of Delta[i,k])` with `Delta[1,m] = ∂_{x_1} u_m`.
/// Each jet is rewritten through its largest direction first.
#[derive(Debug)]
pub struct DkpRewriter {
    nf: BigCellNormalizer,
    memo: RwLock<HashMap<JetKey, Polynomial>>,
}

impl DkpRewriter {
    pub fn new(max_weight: i32) -> Self {
        DkpRewriter { nf: BigCellNormalizer::new(max_weight), memo: RwLock::new(HashMap::new()) }
    }

    fn to_jets(p: &Polynomial) -> Polynomial {
        p.substitute_with(|k| {
            if !k.is_plain() {
                return None;
            }
            let s = k.base;
            match s.family {
                Family::Delta if s.a == 1 => Some(Poly::jet(JetKey::new(Symbol::u(s.b), [1]))),
                Family::H if s.a == 1 => Some(Poly::sym(Symbol::u(s.b))),
                _ => None,
            }
        })
    }

    fn jet(&self, k: &JetKey) -> Result<Polynomial> {
        if k.derivs().iter().all(|d| *d == 1) {
            return Ok(Poly::jet(k.clone()));
        }
        if let Some(v) = self.memo.read().expect("dkp memo").get(k) {
            return Ok(v.clone());
        }
        let ds = k.derivs();
        let top = *ds.iter().max().expect("nonempty");
        let pos = ds.iter().rposition(|d| *d == top).expect("present");
        let mut rest: Vec<u8> = ds.to_vec();
        rest.remove(pos);
        let mut e = Self::to_jets(&self.nf.delta(top as i32, k.base.a as i32)?);
        for r in rest {
            e = self.reduce(&e.formal_derivative(r))?;
        }
        self.memo.write().expect("dkp memo").insert(k.clone(), e.clone());
        Ok(e)
    }

    /// Normal form modulo the hierarchy. `H[i,k]` are first reduced by closure
    /// and read as functions of `u`.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let p = Self::to_jets(&self.nf.reduce(&p.substitute_with(|k| {
            (k.base.family == Family::U && k.is_plain()).then(|| Poly::sym(Symbol::h(1, k.base.a)))
        }))?);
        let err = std::cell::RefCell::new(None);
        let out = p.substitute_with(|k| {
            if k.base.family != Family::U || k.is_plain() || k.derivs().iter().all(|d| *d == 1) {
                return None;
            }
            match self.jet(k) {
                Ok(v) => Some(v),
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    Some(Poly::zero())
                }
            }
        });
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

/// Each flow written as `jet - value` in terms of `x_1`-jets, for display.
pub fn dkp_rewrite_rules(rw: &DkpRewriter, imax: i32, kmax: i32) -> Result<BTreeMap<(i32, i32), Polynomial>> {
    let mut out = BTreeMap::new();
    for i in 2..=imax {
        for k in 1..=kmax {
            let key = JetKey::new(Symbol::u(k as i16), [i as u8]);
            out.insert((i, k), rw.jet(&key)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_instances() {
        assert_eq!(tangent_item(1, 2, 1), parse_poly("Delta[3,1] - Delta[1,3] - Delta[2,2] + 2*H[1,1]*Delta[1,1]").unwrap());
        assert_eq!(
            tangent_item(1, 1, 3),
            parse_poly("Delta[2,3] - 2*Delta[1,4] - 2*H[1,2]*Delta[1,1] - 2*H[1,1]*Delta[1,2]").unwrap()
        );
        assert_eq!(symmetry_item(1, 2), parse_poly("2*Delta[1,2] - Delta[2,1]").unwrap());
        assert!(symmetry_item(3, 3).is_zero());
    }

    #[test]
    fn ansatz_on_symmetry() {
        let e = jet_ansatz(&symmetry_item(1, 2)).unwrap();
        assert_eq!(e, parse_poly("2*D[u[2]; x1] - D[u[1]; x2]").unwrap());
        assert!(jet_ansatz(&parse_poly("Delta[1,1]^2").unwrap()).is_err());
    }

    #[test]
    fn first_flow_rewrites() {
        let rw = DkpRewriter::new(8);
        let lhs = Poly::jet(JetKey::new(Symbol::u(1), [3]));
        let rhs = parse_poly("3/2*D[u[2]; x2] - 3*u[1]*D[u[1]; x1]").unwrap();
        assert_eq!(rw.reduce(&lhs).unwrap(), rw.reduce(&rhs).unwrap());
    }
}
