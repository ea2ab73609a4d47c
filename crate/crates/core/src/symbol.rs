//! Indexed symbol families and jet keys.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Symbol families, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Laurent tail coefficient `H[i,k]` of basis element `i` at `z^{-k}`.
    H,
    U,
    P,
    PStar,
    X,
    Delta,
    J,
    JStar,
    /// Second derivative of the tau function, indices stored sorted.
    Fhess,
    Mu,
    V,
    W,
    Pi,
    /// Schur-polynomial times.
    T,
}

impl Family {
    pub const ALL: [Family; 14] = [
        Family::H,
        Family::U,
        Family::P,
        Family::PStar,
        Family::X,
        Family::Delta,
        Family::J,
        Family::JStar,
        Family::Fhess,
        Family::Mu,
        Family::V,
        Family::W,
        Family::Pi,
        Family::T,
    ];

    pub fn arity(self) -> usize {
        match self {
            Family::H | Family::Delta | Family::J | Family::JStar | Family::Fhess => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::H => "H",
            Family::U => "u",
            Family::P => "p",
            Family::PStar => "pstar",
            Family::X => "x",
            Family::Delta => "Delta",
            Family::J => "J",
            Family::JStar => "Jstar",
            Family::Fhess => "Fhess",
            Family::Mu => "mu",
            Family::V => "v",
            Family::W => "w",
            Family::Pi => "pi",
            Family::T => "t",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Families whose symbols depend on the deformation parameters `x_i`
    /// unless a caller says otherwise.
    pub fn is_jet_bearing(self) -> bool {
        matches!(self, Family::U | Family::Fhess | Family::Mu | Family::V | Family::W)
    }
}

/// A plain indexed symbol. Unused trailing indices are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub family: Family,
    pub a: i16,
    pub b: i16,
}

impl Symbol {
    pub fn new1(family: Family, a: i16) -> Symbol {
        debug_assert_eq!(family.arity(), 1);
        Symbol { family, a, b: 0 }
    }

    pub fn new2(family: Family, a: i16, b: i16) -> Symbol {
        debug_assert_eq!(family.arity(), 2);
        if family == Family::Fhess && a > b {
            Symbol { family, a: b, b: a }
        } else {
            Symbol { family, a, b }
        }
    }

    pub fn from_indices(family: Family, indices: &[i16]) -> Option<Symbol> {
        match (family.arity(), indices) {
            (1, [a]) => Some(Symbol::new1(family, *a)),
            (2, [a, b]) => Some(Symbol::new2(family, *a, *b)),
            _ => None,
        }
    }

    pub fn indices(&self) -> SmallVec<[i16; 2]> {
        if self.family.arity() == 1 {
            smallvec::smallvec![self.a]
        } else {
            smallvec::smallvec![self.a, self.b]
        }
    }

    pub fn h(i: i16, k: i16) -> Symbol {
        Symbol::new2(Family::H, i, k)
    }
    pub fn u(k: i16) -> Symbol {
        Symbol::new1(Family::U, k)
    }
    pub fn p(i: i16) -> Symbol {
        Symbol::new1(Family::P, i)
    }
    pub fn pstar(n: i16) -> Symbol {
        Symbol::new1(Family::PStar, n)
    }
    pub fn x(i: i16) -> Symbol {
        Symbol::new1(Family::X, i)
    }
    pub fn delta(j: i16, k: i16) -> Symbol {
        Symbol::new2(Family::Delta, j, k)
    }
    pub fn j(k: i16, i: i16) -> Symbol {
        Symbol::new2(Family::J, k, i)
    }
    pub fn jstar(k: i16, i: i16) -> Symbol {
        Symbol::new2(Family::JStar, k, i)
    }
    pub fn fhess(i: i16, k: i16) -> Symbol {
        Symbol::new2(Family::Fhess, i, k)
    }
    pub fn mu(a: i16) -> Symbol {
        Symbol::new1(Family::Mu, a)
    }
    pub fn v(a: i16) -> Symbol {
        Symbol::new1(Family::V, a)
    }
    pub fn w(a: i16) -> Symbol {
        Symbol::new1(Family::W, a)
    }
    pub fn pi(i: i16) -> Symbol {
        Symbol::new1(Family::Pi, i)
    }
    pub fn t(k: i16) -> Symbol {
        Symbol::new1(Family::T, k)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.arity() == 1 {
            write!(f, "{}[{}]", self.family.name(), self.a)
        } else {
            write!(f, "{}[{},{}]", self.family.name(), self.a, self.b)
        }
    }
}

/// A symbol together with a multiset of x-directions it is differentiated by.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetKey {
    pub base: Symbol,
    derivs: SmallVec<[u8; 4]>,
}

impl JetKey {
    pub fn plain(base: Symbol) -> JetKey {
        JetKey { base, derivs: SmallVec::new() }
    }

    /// Builds a jet, canonicalizing the derivative multiset. Third and higher
    /// derivatives of the tau function are fully symmetric, so `Fhess` jets pool
    /// all indices and keep the two smallest as the base.
    pub fn new(base: Symbol, derivs: impl IntoIterator<Item = u8>) -> JetKey {
        let mut derivs: SmallVec<[u8; 4]> = derivs.into_iter().collect();
        if base.family == Family::Fhess && !derivs.is_empty() && base.a > 0 && base.b > 0 {
            let mut all: SmallVec<[u8; 6]> = derivs.iter().copied().collect();
            all.push(base.a as u8);
            all.push(base.b as u8);
            all.sort_unstable();
            let base = Symbol::fhess(all[0] as i16, all[1] as i16);
            return JetKey { base, derivs: all[2..].iter().copied().collect() };
        }
        derivs.sort_unstable();
        JetKey { base, derivs }
    }

    pub fn derivs(&self) -> &[u8] {
        &self.derivs
    }

    pub fn is_plain(&self) -> bool {
        self.derivs.is_empty()
    }

    pub fn differentiate(&self, direction: u8) -> JetKey {
        JetKey::new(self.base, self.derivs.iter().copied().chain(std::iter::once(direction)))
    }
}

impl From<Symbol> for JetKey {
    fn from(s: Symbol) -> JetKey {
        JetKey::plain(s)
    }
}

impl fmt::Display for JetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.derivs.is_empty() {
            return write!(f, "{}", self.base);
        }
        write!(f, "D[{};", self.base)?;
        for d in &self.derivs {
            write!(f, " x{d}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jets_commute() {
        let a = JetKey::plain(Symbol::u(1)).differentiate(2).differentiate(3);
        let b = JetKey::plain(Symbol::u(1)).differentiate(3).differentiate(2);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "D[u[1]; x2 x3]");
    }

    #[test]
    fn fhess_third_derivatives_are_symmetric() {
        let a = JetKey::new(Symbol::fhess(1, 3), [2]);
        let b = JetKey::new(Symbol::fhess(2, 3), [1]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "D[Fhess[1,2]; x3]");
        assert_eq!(Symbol::fhess(3, 1), Symbol::fhess(1, 3));
    }

    #[test]
    fn family_order_is_canonical() {
        assert!(Symbol::h(9, 9) < Symbol::u(1));
        assert!(Symbol::u(9) < Symbol::p(1));
        assert!(Symbol::h(1, 2) < Symbol::h(2, 1));
    }
}
