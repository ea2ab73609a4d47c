//! Sparse multivariate polynomials over indexed jet variables.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::scalar::{gcd_big, lcm_big, Rational, Scalar};
use crate::symbol::{Family, JetKey, Symbol};

/// Product of jet variables with positive exponents, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: SmallVec<[(JetKey, u32); 3]>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(key: JetKey, exp: u32) -> Monomial {
        if exp == 0 {
            return Monomial::one();
        }
        let mut factors = SmallVec::new();
        factors.push((key, exp));
        Monomial { factors }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (JetKey, u32)>) -> Monomial {
        let mut m = Monomial::one();
        for (k, e) in factors {
            m = m.mul(&Monomial::var(k, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(JetKey, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, key: &JetKey) -> u32 {
        self.factors
            .binary_search_by(|(k, _)| k.cmp(key))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1.checked_add(b[j].1).expect("monomial exponent overflow");
                    assert!(e <= i32::MAX as u32, "monomial exponent overflow");
                    out.push((a[i].0.clone(), e));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial { factors: out }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[(JetKey, u32); 3]> = SmallVec::new();
        let mut j = 0;
        for (k, e) in &self.factors {
            if j < other.factors.len() && other.factors[j].0 == *k {
                let oe = other.factors[j].1;
                if oe > *e {
                    return None;
                }
                if oe < *e {
                    out.push((k.clone(), e - oe));
                }
                j += 1;
            } else if j < other.factors.len() && other.factors[j].0 < *k {
                return None;
            } else {
                out.push((k.clone(), *e));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    /// Removes one power of `key`, returning the exponent it had.
    fn lower(&self, key: &JetKey) -> Option<(u32, Monomial)> {
        let idx = self.factors.iter().position(|(k, _)| k == key)?;
        let mut factors = self.factors.clone();
        let e = factors[idx].1;
        if e == 1 {
            factors.remove(idx);
        } else {
            factors[idx].1 -= 1;
        }
        Some((e, Monomial { factors }))
    }
}

/// Polynomial with coefficients in `C`, stored as a canonical sorted term map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for Poly<C> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<C: Scalar> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(C::from_i64(n))
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn sym(s: Symbol) -> Self {
        Poly::term(Monomial::var(JetKey::plain(s), 1), C::one())
    }

    pub fn jet(k: JetKey) -> Self {
        Poly::term(Monomial::var(k, 1), C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    /// Returns the value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        let mut out = Poly::zero();
        for (tm, tc) in &self.terms {
            out.add_term(tm.mul(m), tc.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// All jet variables occurring in the polynomial.
    pub fn variables(&self) -> BTreeSet<JetKey> {
        self.terms.keys().flat_map(|m| m.factors.iter().map(|(k, _)| k.clone())).collect()
    }

    pub fn contains_family(&self, family: Family) -> bool {
        self.terms.keys().any(|m| m.factors.iter().any(|(k, _)| k.base.family == family))
    }

    /// Total degree in variables whose base belongs to `family`, maximized over terms.
    pub fn degree_in(&self, family: Family) -> u32 {
        self.terms
            .keys()
            .map(|m| m.factors.iter().filter(|(k, _)| k.base.family == family).map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    /// Simultaneous substitution of jet variables; `None` keeps the variable.
    pub fn substitute_with(&self, rule: impl Fn(&JetKey) -> Option<Poly<C>>) -> Self {
        let mut cache: HashMap<JetKey, Option<Poly<C>>> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut acc = Poly::constant(c.clone());
            for (k, e) in &m.factors {
                let rep = cache.entry(k.clone()).or_insert_with(|| rule(k));
                match rep {
                    Some(r) => acc = &acc * &r.pow(*e),
                    None => kept = kept.mul(&Monomial::var(k.clone(), *e)),
                }
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            for (am, ac) in acc.terms {
                out.add_term(am.mul(&kept), ac);
            }
        }
        out
    }

    /// Substitution keyed by plain symbols; differentiated jets pass through.
    pub fn substitute(&self, rules: &BTreeMap<Symbol, Poly<C>>) -> Self {
        self.substitute_with(|k| if k.is_plain() { rules.get(&k.base).cloned() } else { None })
    }

    /// Substitutes fields by expressions and differentiated fields by the
    /// corresponding total derivatives of those expressions.
    pub fn substitute_fields(&self, rule: impl Fn(&Symbol) -> Option<Poly<C>>) -> Self {
        self.substitute_with(|k| {
            let mut e = rule(&k.base)?;
            for d in k.derivs() {
                e = e.formal_derivative(*d);
            }
            Some(e)
        })
    }

    /// Partial derivative with respect to a single jet variable.
    pub fn partial(&self, key: &JetKey) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower(key) {
                out.add_term(rest, c.clone() * C::from_i64(e as i64));
            }
        }
        out
    }

    /// Total derivative along `x_direction` for the default jet-bearing families.
    pub fn formal_derivative(&self, direction: u8) -> Self {
        self.formal_derivative_with(direction, |f| f.is_jet_bearing())
    }

    /// Total derivative along `x_direction`; `depends` selects families that vary with x.
    pub fn formal_derivative_with(&self, direction: u8, depends: impl Fn(Family) -> bool) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (k, _) in &m.factors {
                if !depends(k.base.family) {
                    continue;
                }
                let (e, rest) = m.lower(k).expect("factor present");
                let promoted = Monomial::var(k.differentiate(direction), 1);
                out.add_term(rest.mul(&promoted), c.clone() * C::from_i64(e as i64));
            }
        }
        out
    }

    /// Evaluates into any scalar ring.
    pub fn evaluate<T: Scalar>(&self, coeff: impl Fn(&C) -> T, value: impl Fn(&JetKey) -> T) -> T {
        let mut cache: HashMap<&JetKey, T> = HashMap::new();
        let mut total = T::zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (k, e) in &m.factors {
                let v = cache.entry(k).or_insert_with(|| value(k)).clone();
                for _ in 0..*e {
                    t = t * v.clone();
                }
            }
            total = total + t;
        }
        total
    }

    /// Groups terms by their part in the variables selected by `select`.
    /// Returns `selected monomial -> cofactor`.
    pub fn collect_by(&self, select: impl Fn(&JetKey) -> bool) -> BTreeMap<Monomial, Poly<C>> {
        let mut out: BTreeMap<Monomial, Poly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (sel, rest): (Vec<_>, Vec<_>) = m.factors.iter().cloned().partition(|(k, _)| select(k));
            let sel = Monomial { factors: sel.into_iter().collect() };
            let rest = Monomial { factors: rest.into_iter().collect() };
            out.entry(sel).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Largest monomial in the canonical order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }
}

impl Poly<Rational> {
    pub fn rational(n: i64, d: i64) -> Self {
        Poly::constant(crate::scalar::rat(n, d))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Clears denominators, divides by the content and makes the coefficient of
    /// the smallest monomial positive.
    pub fn monic_cleared(&self) -> Self {
        let Some((_, first)) = self.terms.iter().next() else {
            return Poly::zero();
        };
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = lcm_big(&den, c.denom());
        }
        let mut content = BigInt::zero();
        for c in self.terms.values() {
            let n = (c * Rational::from_integer(den.clone())).to_integer();
            content = gcd_big(&content, &n);
        }
        let mut factor = Rational::new(den, content);
        if first.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

impl<C: Scalar> From<Symbol> for Poly<C> {
    fn from(s: Symbol) -> Self {
        Poly::sym(s)
    }
}

impl<C: Scalar> From<JetKey> for Poly<C> {
    fn from(k: JetKey) -> Self {
        Poly::jet(k)
    }
}

impl<C: Scalar> AddAssign<&Poly<C>> for Poly<C> {
    fn add_assign(&mut self, rhs: &Poly<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<C: Scalar> SubAssign<&Poly<C>> for Poly<C> {
    fn sub_assign(&mut self, rhs: &Poly<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<C: Scalar> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Scalar> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Scalar> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Scalar> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$f(&rhs)
            }
        }
        impl<C: Scalar> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: &Poly<C>) -> Poly<C> {
                (&self).$f(rhs)
            }
        }
        impl<C: Scalar> $tr<Poly<C>> for &Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: Poly<C>) -> Poly<C> {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Scalar> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Scalar> std::iter::Sum for Poly<C> {
    fn sum<I: Iterator<Item = Poly<C>>>(iter: I) -> Self {
        let mut acc = Poly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}
