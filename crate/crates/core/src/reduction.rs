//! Reduction modulo closure and tangent relations.
//!
//! [`BigCellNormalizer`] rewrites every `H[i,m]` and `Delta[i,m]` with `i >= 2`
//! into the free coordinates `H[1,*]` and `Delta[1,*]`, orienting each closure
//! constraint at `j = 1` towards its term with the largest upper index.
//! [`GradedEliminator`] is a slower, generic engine: it processes an arbitrary
//! weighted-homogeneous constraint set weight by weight and does Gaussian
//! elimination on the variables of top weight.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::Stratum;
use crate::poly::{Monomial, Poly};
use crate::scalar::Rational;
use crate::symbol::{Family, JetKey, Symbol};
use crate::Polynomial;

/// Rewrites `u[k]` to `H[1,k]` (undifferentiated occurrences only).
pub fn u_to_h(p: &Polynomial) -> Polynomial {
    p.substitute_with(|k| (k.base.family == Family::U && k.is_plain()).then(|| Poly::sym(Symbol::h(1, k.base.a))))
}

/// Rewrites `H[1,k]` to `u[k]`.
pub fn h1_to_u(p: &Polynomial) -> Polynomial {
    p.substitute_with(|k| (k.base.family == Family::H && k.base.a == 1).then(|| Poly::sym(Symbol::u(k.base.b))))
}

/// Normal form on the big cell in the coordinates `H[1,k]` and `Delta[1,k]`.
#[derive(Clone, Debug)]
pub struct BigCellNormalizer {
    max_weight: i32,
    h: HashMap<(i32, i32), Polynomial>,
    delta: HashMap<(i32, i32), Polynomial>,
}

impl BigCellNormalizer {
    /// Covers every `H[i,m]`, `Delta[i,m]` with `i + m <= max_weight`.
    pub fn new(max_weight: i32) -> Self {
        let mut h: HashMap<(i32, i32), Polynomial> = HashMap::new();
        let get = |h: &HashMap<(i32, i32), Polynomial>, a: i32, b: i32| -> Polynomial {
            if a < 1 || b < 1 {
                Poly::zero()
            } else if a == 1 {
                Poly::sym(Symbol::h(1, b as i16))
            } else {
                h[&(a, b)].clone()
            }
        };
        for i in 2..max_weight {
            let k = i - 1;
            for m in 1..=(max_weight - i) {
                // Closure at (1, k, m) solved for H[k+1, m].
                let mut e = &get(&h, 1, m + k) + &get(&h, k, m + 1);
                for l in 1..k {
                    e -= &(&get(&h, 1, k - l) * &get(&h, l, m));
                }
                for l in 1..m {
                    e += &(&get(&h, k, m - l) * &get(&h, 1, l));
                }
                h.insert((i, m), e);
            }
        }
        let mut delta = HashMap::new();
        for (&(i, m), e) in &h {
            delta.insert((i, m), linearize(e));
        }
        BigCellNormalizer { max_weight, h, delta }
    }

    pub fn max_weight(&self) -> i32 {
        self.max_weight
    }

    /// Normal form of `H[i,m]`.
    pub fn h(&self, i: i32, m: i32) -> Result<Polynomial> {
        self.lookup(&self.h, Family::H, i, m)
    }

    /// Normal form of `Delta[i,m]`.
    pub fn delta(&self, i: i32, m: i32) -> Result<Polynomial> {
        self.lookup(&self.delta, Family::Delta, i, m)
    }

    fn lookup(&self, table: &HashMap<(i32, i32), Polynomial>, family: Family, i: i32, m: i32) -> Result<Polynomial> {
        if i < 1 || m < 1 {
            return Ok(Poly::zero());
        }
        if i == 1 {
            return Ok(Poly::sym(Symbol::new2(family, 1, m as i16)));
        }
        table
            .get(&(i, m))
            .cloned()
            .ok_or_else(|| Error::InvalidIndex(format!("{}[{i},{m}] beyond normalizer weight {}", family.name(), self.max_weight)))
    }

    /// Reduces `p`; `u[k]` is read as `H[1,k]` and the result uses `H[1,k]`.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let err = std::cell::RefCell::new(None);
        let out = p.substitute_with(|k| {
            if !k.is_plain() {
                return None;
            }
            let s = k.base;
            let r = match s.family {
                Family::U => Ok(Poly::sym(Symbol::h(1, s.a))),
                Family::H if s.a != 1 || s.b < 1 => self.h(s.a as i32, s.b as i32),
                Family::Delta if s.a != 1 || s.b < 1 => self.delta(s.a as i32, s.b as i32),
                _ => return None,
            };
            match r {
                Ok(p) => Some(p),
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

/// Normal forms of `k H[i,k] − i H[k,i]` for `i < k <= nmax` on the big cell.
pub fn verify_h_symmetry(nmax: i32) -> Result<Vec<((i32, i32), Polynomial)>> {
    let nf = BigCellNormalizer::new(2 * nmax);
    let mut out = Vec::new();
    for i in 1..=nmax {
        for k in (i + 1)..=nmax {
            let f = Poly::sym(Symbol::h(i as i16, k as i16)).scale(&Rational::from_integer(k.into()))
                - Poly::sym(Symbol::h(k as i16, i as i16)).scale(&Rational::from_integer(i.into()));
            out.push(((i, k), nf.reduce(&f)?));
        }
    }
    Ok(out)
}

/// Replaces each `H[i,k]` by its variation `Delta[i,k]`, by the product rule.
pub fn linearize(f: &Polynomial) -> Polynomial {
    let mut out = Poly::zero();
    for v in f.variables() {
        if v.base.family == Family::H && v.is_plain() {
            out += &(&f.partial(&v) * &Poly::sym(Symbol::delta(v.base.a, v.base.b)));
        }
    }
    out
}

/// Weight of `H[i,k]` / `Delta[i,k]` in the grading that makes the closure
/// and tangent systems homogeneous: `i + k`, except `k = -1` which weighs `i - 1`.
pub fn h_weight(k: &JetKey) -> Option<i32> {
    match k.base.family {
        Family::H | Family::Delta if k.is_plain() => {
            let (i, m) = (k.base.a as i32, k.base.b as i32);
            Some(if m == -1 { i - 1 } else { i + m })
        }
        _ => None,
    }
}

/// Pivot priority: the largest upper index is eliminated first.
pub fn upper_index_key(k: &JetKey) -> (i32, Family) {
    (k.base.a as i32, k.base.family)
}

/// Result of graded elimination.
#[derive(Clone, Debug, Default)]
pub struct GradedEliminator {
    rules: BTreeMap<JetKey, Polynomial>,
    /// Reduced constraints that contained no eliminable variable.
    pub leftovers: Vec<(Vec<i32>, Polynomial)>,
}

impl GradedEliminator {
    /// Eliminates `constraints` weight by weight. `weight` must make every
    /// constraint homogeneous; `pivot` ranks candidate variables, largest first.
    pub fn build<K: Ord>(
        constraints: impl IntoIterator<Item = (Vec<i32>, Polynomial)>,
        weight: impl Fn(&JetKey) -> Option<i32>,
        pivot: impl Fn(&JetKey) -> K,
    ) -> Result<Self> {
        let monomial_weight = |m: &Monomial| -> Option<i32> {
            m.factors().iter().map(|(k, e)| weight(k).map(|w| w * *e as i32)).sum()
        };
        let mut by_weight: BTreeMap<i32, Vec<(Vec<i32>, Polynomial)>> = BTreeMap::new();
        for (idx, p) in constraints {
            let Some((m, _)) = p.leading() else { continue };
            let w = monomial_weight(m).ok_or_else(|| Error::Unsupported(format!("unweighted variable in {p}")))?;
            if p.terms().any(|(m, _)| monomial_weight(m) != Some(w)) {
                return Err(Error::Unsupported(format!("constraint {idx:?} is not homogeneous")));
            }
            by_weight.entry(w).or_default().push((idx, p));
        }
        let mut elim = GradedEliminator::default();
        for (w, rows) in by_weight {
            let mut rows: Vec<(Vec<i32>, Polynomial)> =
                rows.into_iter().map(|(i, p)| (i, elim.reduce(&p))).filter(|(_, p)| !p.is_zero()).collect();
            let mut cols: BTreeSet<JetKey> = BTreeSet::new();
            for (_, p) in &rows {
                for (m, _) in p.terms() {
                    if let [(k, 1)] = m.factors() {
                        if weight(k) == Some(w) && !elim.rules.contains_key(k) {
                            cols.insert(k.clone());
                        }
                    }
                }
            }
            let mut cols: Vec<JetKey> = cols.into_iter().collect();
            cols.sort_by(|a, b| pivot(b).cmp(&pivot(a)).then_with(|| b.cmp(a)));
            let mut pivots: Vec<(JetKey, usize)> = Vec::new();
            let mut used = vec![false; rows.len()];
            for v in cols {
                let vm = Monomial::var(v.clone(), 1);
                let Some(r) = (0..rows.len()).find(|&r| !used[r] && !rows[r].1.coeff(&vm).is_zero()) else {
                    continue;
                };
                used[r] = true;
                let c = rows[r].1.coeff(&vm);
                let normalized = rows[r].1.scale(&(Rational::one() / c));
                rows[r].1 = normalized.clone();
                for (s, row) in rows.iter_mut().enumerate() {
                    if s != r {
                        let cs = row.1.coeff(&vm);
                        if !cs.is_zero() {
                            row.1 -= &normalized.scale(&cs);
                        }
                    }
                }
                pivots.push((v, r));
            }
            for (v, r) in pivots {
                let rhs = &Poly::jet(v.clone()) - &rows[r].1;
                elim.rules.insert(v, rhs);
            }
            for (r, (idx, p)) in rows.into_iter().enumerate() {
                if !used[r] && !p.is_zero() {
                    elim.leftovers.push((idx, p));
                }
            }
        }
        Ok(elim)
    }

    pub fn rules(&self) -> &BTreeMap<JetKey, Polynomial> {
        &self.rules
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        p.substitute_with(|k| self.rules.get(k).cloned())
    }
}

/// Graded elimination of the Σ₁ closure constraints of total weight `<= max_weight`.
pub fn sigma1_eliminator(max_weight: i32) -> Result<GradedEliminator> {
    let mut cs = Vec::new();
    for i in 2..=max_weight {
        for j in i..=max_weight {
            for l in std::iter::once(-1).chain(1..=max_weight) {
                let w = if l == -1 { i + j - 1 } else { i + j + l };
                if w <= max_weight {
                    cs.push((vec![i, j, l], crate::laurent::constraint_template(Stratum::Sigma1, i, j, l)));
                }
            }
        }
    }
    GradedEliminator::build(cs, h_weight, upper_index_key)
}

/// Numerically evaluates a polynomial in `H[1,k]` at `H[1,k] = values[k-1]`.
pub fn eval_u(p: &Polynomial, values: &[Rational]) -> Option<Rational> {
    let ok = std::cell::Cell::new(true);
    let v = p.evaluate(
        |c: &Rational| c.clone(),
        |k| {
            if k.base.family == Family::H && k.base.a == 1 && k.is_plain() {
                values.get(k.base.b as usize - 1).cloned().unwrap_or_else(|| {
                    ok.set(false);
                    Rational::zero()
                })
            } else {
                ok.set(false);
                Rational::zero()
            }
        },
    );
    ok.get().then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    #[test]
    fn first_rules() {
        let n = BigCellNormalizer::new(6);
        assert_eq!(n.h(2, 1).unwrap(), parse_poly("2*H[1,2]").unwrap());
        assert_eq!(n.h(3, 1).unwrap(), parse_poly("3*H[1,3]").unwrap());
        assert_eq!(n.delta(2, 1).unwrap(), parse_poly("2*Delta[1,2]").unwrap());
        assert!(n.h(5, 5).is_err());
        assert_eq!(n.h(1, 40).unwrap(), Poly::sym(Symbol::h(1, 40)));
    }

    #[test]
    fn h_symmetry_small() {
        let n = BigCellNormalizer::new(8);
        let f = parse_poly("3*H[1,3] - H[3,1]").unwrap();
        assert!(n.reduce(&f).unwrap().is_zero());
        let g = parse_poly("3*H[2,3] - 2*H[3,2]").unwrap();
        assert!(n.reduce(&g).unwrap().is_zero());
    }

    #[test]
    fn alias_round_trip() {
        let f = parse_poly("u[1]*u[2] + D[u[1]; x2]").unwrap();
        assert_eq!(h1_to_u(&u_to_h(&f)), f);
    }
}
