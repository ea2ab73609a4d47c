//! Tau-function form of the big-cell closure constraints.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::bigcell_constraint;
use crate::poly::Poly;
use crate::scalar::Rational;
use crate::symbol::{Family, JetKey, Symbol};
use crate::Polynomial;

/// Weight of the third quadratic sum in [`hirota_equation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HirotaForm {
    /// `1/(i(m−l))`, as usually printed.
    Literal,
    /// `1/(l(m−l))`, which is what the closure constraints give.
    Closure,
}

fn f(i: i32, k: i32) -> Polynomial {
    if i >= 1 && k >= 1 {
        Poly::sym(Symbol::fhess(i as i16, k as i16))
    } else {
        Poly::zero()
    }
}

fn q(a: i32, b: i32) -> Rational {
    Rational::new(a.into(), b.into())
}

/// The dispersionless Hirota-Miwa combination at `(i, k, m)`.
pub fn hirota_equation(i: i32, k: i32, m: i32, form: HirotaForm) -> Result<Polynomial> {
    if i < 1 || k < 1 || m < 1 {
        return Err(Error::InvalidIndex(format!("({i},{k},{m})")));
    }
    let mut out = &(&f(i + k, m).scale(&q(-1, m)) + &f(i, k + m).scale(&q(1, m + k))) + &f(k, i + m).scale(&q(1, i + m));
    for l in 1..i {
        out += &(&f(k, i - l) * &f(l, m)).scale(&q(1, m * (i - l)));
    }
    for l in 1..k {
        out += &(&f(i, k - l) * &f(l, m)).scale(&q(1, m * (k - l)));
    }
    for l in 1..m {
        let w = match form {
            HirotaForm::Literal => q(1, i * (m - l)),
            HirotaForm::Closure => q(1, l * (m - l)),
        };
        out -= &(&f(k, m - l) * &f(i, l)).scale(&w);
    }
    Ok(out)
}

/// `H[i,m] -> −(1/m) Fhess[i,m]`, with `u[k]` read as `H[1,k]`. Jets follow by
/// differentiation.
pub fn tau_substitute(p: &Polynomial) -> Polynomial {
    p.substitute_fields(|s| {
        let (i, m) = match s.family {
            Family::H => (s.a, s.b),
            Family::U => (1, s.a),
            _ => return None,
        };
        (i >= 1 && m >= 1).then(|| f(i as i32, m as i32).scale(&q(-1, m as i32)))
    })
}

/// Outcome of matching one substituted closure constraint against Hirota-Miwa.
#[derive(Clone, Debug, PartialEq)]
pub struct TauMatch {
    pub indices: [i32; 3],
    pub substituted: Polynomial,
    pub hirota: Polynomial,
    /// `substituted = factor · hirota`; `None` when no factor exists or both vanish.
    pub factor: Option<Rational>,
    /// `substituted − factor · hirota`, or `substituted` when there is no factor.
    pub difference: Polynomial,
}

impl TauMatch {
    pub fn matched(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Nonzero factor `c` with `a = c·b`, if any.
pub fn proportionality(a: &Polynomial, b: &Polynomial) -> Option<Rational> {
    let (m, cb) = b.leading()?;
    let c = a.coeff(m) / cb;
    (!c.is_zero() && (a - &b.scale(&c)).is_zero()).then_some(c)
}

/// Substitutes the tau form into each closure constraint `(j,k,m)` and matches it
/// against `hirota_equation(j,k,m)`.
pub fn tau_substitution_check(jmax: i32, kmax: i32, mmax: i32, form: HirotaForm) -> Result<Vec<TauMatch>> {
    let idx: Vec<[i32; 3]> = (1..=jmax)
        .flat_map(|j| (1..=kmax).flat_map(move |k| (1..=mmax).map(move |m| [j, k, m])))
        .collect();
    idx.into_par_iter()
        .map(|[j, k, m]| {
            let substituted = tau_substitute(&bigcell_constraint(j, k, m));
            let hirota = hirota_equation(j, k, m, form)?;
            let (factor, difference) = if substituted.is_zero() && hirota.is_zero() {
                (None, Poly::zero())
            } else {
                match proportionality(&substituted, &hirota) {
                    Some(c) => (Some(c), Poly::zero()),
                    None => (None, &substituted - &hirota),
                }
            };
            Ok(TauMatch { indices: [j, k, m], substituted, hirota, factor, difference })
        })
        .collect()
}

/// `∂H[i,n]/∂x_l − ∂H[l,n]/∂x_i` after the tau substitution, keyed `(i, l, n)`.
pub fn exactness_conditions(imax: i32, nmax: i32) -> Vec<((i32, i32, i32), Polynomial)> {
    let mut out = Vec::new();
    for i in 1..=imax {
        for l in 1..=imax {
            for n in 1..=nmax {
                let d = |a: i32, dir: i32| Poly::jet(JetKey::new(Symbol::h(a as i16, n as i16), [dir as u8]));
                let h = tau_substitute(&(&d(i, l) - &d(l, i)));
                out.push(((i, l, n), h));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    #[test]
    fn small_instances() {
        assert!(hirota_equation(1, 1, 1, HirotaForm::Literal).unwrap().is_zero());
        assert_eq!(
            hirota_equation(1, 2, 1, HirotaForm::Literal).unwrap(),
            parse_poly("-2/3*Fhess[1,3] + 1/2*Fhess[2,2] + Fhess[1,1]^2").unwrap()
        );
    }

    #[test]
    fn forms_agree_when_l_equals_i() {
        // With m = 2 the third sum has the single term l = 1.
        assert_eq!(hirota_equation(1, 3, 2, HirotaForm::Literal).unwrap(), hirota_equation(1, 3, 2, HirotaForm::Closure).unwrap());
        assert_ne!(hirota_equation(2, 1, 2, HirotaForm::Literal).unwrap(), hirota_equation(2, 1, 2, HirotaForm::Closure).unwrap());
    }
}
