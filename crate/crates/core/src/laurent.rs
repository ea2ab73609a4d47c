//! Truncated Laurent series, stratum bases, structure constants and closure
//! constraints.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};
use crate::symbol::Symbol;
use crate::Polynomial;

/// Truncated Laurent series in `z`.
///
/// Coefficients are known exactly on `[lo, hi]`; everything above `hi` is
/// zero and everything below `lo` is unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C = Rational> {
    lo: i32,
    hi: i32,
    coeffs: Vec<Poly<C>>,
}

impl<C: Scalar> LaurentSeries<C> {
    /// Builds a series from sparse coefficients. Degrees in the window that are
    /// absent are zero.
    pub fn new(lo: i32, hi: i32, coeffs: impl IntoIterator<Item = (i32, Poly<C>)>) -> Self {
        assert!(hi >= lo, "empty window [{lo}, {hi}]");
        let mut v = vec![Poly::zero(); (hi - lo + 1) as usize];
        for (d, c) in coeffs {
            if d >= lo && d <= hi {
                v[(d - lo) as usize] += &c;
            } else {
                assert!(d < lo || c.is_zero(), "coefficient above the window");
            }
        }
        LaurentSeries { lo, hi, coeffs: v }
    }

    /// The constant `c` known down to degree `lo`.
    pub fn constant(c: Poly<C>, lo: i32) -> Self {
        LaurentSeries::new(lo.min(0), 0, [(0, c)])
    }

    pub fn window(&self) -> (i32, i32) {
        (self.lo, self.hi)
    }

    /// `None` below the window, zero above it.
    pub fn coeff(&self, d: i32) -> Option<Poly<C>> {
        if d < self.lo {
            None
        } else if d > self.hi {
            Some(Poly::zero())
        } else {
            Some(self.coeffs[(d - self.lo) as usize].clone())
        }
    }

    pub fn coeff_or_zero(&self, d: i32) -> Poly<C> {
        self.coeff(d).unwrap_or_default()
    }

    /// Cauchy product. The window keeps only degrees to which every
    /// contributing pair of coefficients is known.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let hi = self.hi + other.hi;
        let lo = (self.lo + other.hi).max(other.lo + self.hi);
        if lo > hi {
            return Err(Error::TruncationTooSmall { order: 0, what: "series product window is empty".into() });
        }
        let mut v = vec![Poly::zero(); (hi - lo + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let da = self.lo + i as i32;
            for (j, b) in other.coeffs.iter().enumerate() {
                let d = da + other.lo + j as i32;
                if d < lo || b.is_zero() {
                    continue;
                }
                v[(d - lo) as usize] += &(a * b);
            }
        }
        Ok(LaurentSeries { lo, hi, coeffs: v })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let hi = self.hi.max(other.hi);
        let lo = self.lo.max(other.lo).min(hi);
        let mut v = Vec::with_capacity((hi - lo + 1) as usize);
        for d in lo..=hi {
            let mut c = self.coeff_or_zero(d);
            let o = other.coeff_or_zero(d);
            if negate {
                c -= &o;
            } else {
                c += &o;
            }
            v.push(c);
        }
        LaurentSeries { lo, hi, coeffs: v }
    }

    pub fn scale(&self, c: &Poly<C>) -> Self {
        LaurentSeries { lo: self.lo, hi: self.hi, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Highest degree with a nonzero coefficient, if any is known.
    pub fn leading_degree(&self) -> Option<i32> {
        (self.lo..=self.hi).rev().find(|d| !self.coeffs[(d - self.lo) as usize].is_zero())
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&Poly<C>) -> Poly<D>) -> LaurentSeries<D> {
        LaurentSeries { lo: self.lo, hi: self.hi, coeffs: self.coeffs.iter().map(f).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stratum {
    #[serde(rename = "big-cell")]
    BigCell,
    #[serde(rename = "sigma1")]
    Sigma1,
}

impl Stratum {
    pub fn name(self) -> &'static str {
        match self {
            Stratum::BigCell => "big-cell",
            Stratum::Sigma1 => "sigma1",
        }
    }

    /// Whether `i` labels a basis element.
    pub fn has_index(self, i: i32) -> bool {
        match self {
            Stratum::BigCell => i >= 0,
            Stratum::Sigma1 => i == 0 || i >= 2,
        }
    }

    /// `H[i,k]` as a polynomial, with the stratum's vanishing convention.
    pub fn h<C: Scalar>(self, i: i32, k: i32) -> Poly<C> {
        let live = match self {
            Stratum::BigCell => i >= 1 && k >= 1,
            Stratum::Sigma1 => i >= 2 && (k == -1 || k >= 1),
        };
        if live {
            Poly::sym(Symbol::h(i as i16, k as i16))
        } else {
            Poly::zero()
        }
    }
}

impl std::str::FromStr for Stratum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Stratum> {
        match s {
            "big-cell" | "bigcell" => Ok(Stratum::BigCell),
            "sigma1" => Ok(Stratum::Sigma1),
            _ => Err(Error::Unsupported(format!("unknown stratum '{s}'"))),
        }
    }
}

/// Basis `p_i` of a stratum, truncated at `z^{-order}`.
#[derive(Clone, Debug)]
pub struct StratumBasis<C = Rational> {
    pub stratum: Stratum,
    pub order: i32,
    elements: BTreeMap<i32, LaurentSeries<C>>,
}

impl<C: Scalar> StratumBasis<C> {
    /// Symbolic basis with elements up to index `imax`.
    pub fn symbolic(stratum: Stratum, order: i32, imax: i32) -> Self {
        Self::with_tails(stratum, order, imax, |i, k| stratum.h(i, k))
    }

    /// Basis whose tail coefficients are supplied by `tail(i, k)`; `k = -1`
    /// is the Σ₁ sub-leading coefficient of `z`.
    pub fn with_tails(stratum: Stratum, order: i32, imax: i32, tail: impl Fn(i32, i32) -> Poly<C>) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        let mut elements = BTreeMap::new();
        elements.insert(0, LaurentSeries::constant(Poly::one(), -order));
        for i in 1..=imax {
            if !stratum.has_index(i) {
                continue;
            }
            let mut cs: Vec<(i32, Poly<C>)> = vec![(i, Poly::one())];
            if stratum == Stratum::Sigma1 {
                cs.push((1, tail(i, -1)));
            }
            cs.extend((1..=order).map(|k| (-k, tail(i, k))));
            elements.insert(i, LaurentSeries::new(-order, i, cs));
        }
        StratumBasis { stratum, order, elements }
    }

    pub fn element(&self, i: i32) -> Result<&LaurentSeries<C>> {
        self.elements.get(&i).ok_or_else(|| Error::InvalidIndex(format!("p[{i}] not in {} basis", self.stratum.name())))
    }

    pub fn max_index(&self) -> i32 {
        *self.elements.keys().next_back().expect("p0 always present")
    }
}

/// Row of structure constants and residual closure constraints of `p_j p_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<C = Rational> {
    /// `l -> C^l_{jk}`.
    pub row: BTreeMap<i32, Poly<C>>,
    /// Residuals keyed by `m`: degree `-m` for `m >= 1`, and for Σ₁ the degree-1
    /// coefficient under key `-1`.
    pub residuals: BTreeMap<i32, Poly<C>>,
}

/// Splits `p_j p_k` into `Σ_l C^l_{jk} p_l` plus residual constraints by
/// peeling leading degrees from the top.
pub fn closure_decompose<C: Scalar>(basis: &StratumBasis<C>, j: i32, k: i32) -> Result<Decomposition<C>> {
    let (pj, pk) = (basis.element(j)?, basis.element(k)?);
    let mut rest = pj.mul(pk)?;
    let (lo, hi) = rest.window();
    if lo > -1 {
        return Err(Error::TruncationTooSmall {
            order: basis.order as usize,
            what: format!("no exact negative degree in p{j}*p{k}"),
        });
    }
    let mut row = BTreeMap::new();
    for d in (0..=hi).rev() {
        if !basis.stratum.has_index(d) {
            continue;
        }
        let c = rest.coeff_or_zero(d);
        if c.is_zero() {
            continue;
        }
        let pd = basis.element(d).map_err(|_| Error::TruncationTooSmall {
            order: basis.order as usize,
            what: format!("basis lacks p{d}"),
        })?;
        rest = rest.sub(&pd.scale(&c));
        row.insert(d, c);
    }
    let mut residuals = BTreeMap::new();
    for d in (1..=hi).filter(|d| !basis.stratum.has_index(*d)) {
        residuals.insert(-d, rest.coeff_or_zero(d));
    }
    let (lo, _) = rest.window();
    for m in 1..=(-lo) {
        residuals.insert(m, rest.coeff_or_zero(-m));
    }
    Ok(Decomposition { row, residuals })
}

/// The big-cell closure constraint at `(j,k,m)` written out term by term.
pub fn bigcell_constraint(j: i32, k: i32, m: i32) -> Polynomial {
    let h = |i, k| Stratum::BigCell.h::<Rational>(i, k);
    let mut out = &(&h(j + k, m) - &h(j, m + k)) - &h(k, j + m);
    for l in 1..j {
        out += &(&h(k, j - l) * &h(l, m));
    }
    for l in 1..k {
        out += &(&h(j, k - l) * &h(l, m));
    }
    for l in 1..m {
        out -= &(&h(k, m - l) * &h(j, l));
    }
    out
}

/// The Σ₁ closure constraint at `(i,j,l)`, `l ∈ {-1, 1, 2, …}`, as left side
/// minus right side.
pub fn sigma1_constraint(i: i32, j: i32, l: i32) -> Polynomial {
    let h = |a, b| Stratum::Sigma1.h::<Rational>(a, b);
    let mut lhs = &(&h(i, j + l) + &h(j, i + l)) + &(&h(j, -1) * &h(i, l + 1));
    lhs += &(&h(i, -1) * &h(j, l + 1));
    for n in 1..l {
        lhs += &(&h(j, n) * &h(i, l - n));
    }
    let mut rhs = &(&h(i + j, l) + &(&h(j, -1) * &h(i + 1, l))) + &(&h(i, -1) * &h(j + 1, l));
    for n in 2..i {
        rhs += &(&h(j, i - n) * &h(n, l));
    }
    for n in 2..j {
        rhs += &(&h(i, j - n) * &h(n, l));
    }
    rhs += &(&(&h(i, -1) * &h(j, -1)) * &h(2, l));
    if l == 0 {
        rhs += &sigma1_zero_shift(i, j);
    }
    &lhs - &rhs
}

fn sigma1_zero_shift(i: i32, j: i32) -> Polynomial {
    let h = |a, b| Stratum::Sigma1.h::<Rational>(a, b);
    &(&(&h(i, j) + &h(j, i)) + &(&h(i, -1) * &h(j, 1))) + &(&h(i, 1) * &h(j, -1))
}

/// Structure constants `C^l_{jk}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub stratum: Stratum,
    /// Largest `j` (and `k`) covered.
    pub jmax: i32,
    entries: BTreeMap<(i32, i32, i32), Polynomial>,
}

impl StructureConstants {
    /// Closed-form table for `0 <= j, k <= jmax` (valid basis indices).
    pub fn closed_form(stratum: Stratum, jmax: i32) -> Self {
        let mut entries = BTreeMap::new();
        for j in (0..=jmax).filter(|j| stratum.has_index(*j)) {
            for k in (0..=jmax).filter(|k| stratum.has_index(*k)) {
                for l in (0..=j + k).filter(|l| stratum.has_index(*l)) {
                    let c = structure_constant(stratum, j, k, l);
                    if !c.is_zero() {
                        entries.insert((j, k, l), c);
                    }
                }
            }
        }
        StructureConstants { stratum, jmax, entries }
    }

    /// Table read off from series products.
    pub fn from_series(basis: &StratumBasis<Rational>, jmax: i32) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for j in (0..=jmax).filter(|j| basis.stratum.has_index(*j)) {
            for k in (j..=jmax).filter(|k| basis.stratum.has_index(*k)) {
                for (l, c) in closure_decompose(basis, j, k)?.row {
                    entries.insert((j, k, l), c.clone());
                    entries.insert((k, j, l), c);
                }
            }
        }
        Ok(StructureConstants { stratum: basis.stratum, jmax, entries })
    }

    pub fn covers(&self, j: i32, k: i32) -> bool {
        (0..=self.jmax).contains(&j) && (0..=self.jmax).contains(&k)
    }

    pub fn get(&self, j: i32, k: i32, l: i32) -> Polynomial {
        self.entries.get(&(j, k, l)).cloned().unwrap_or_default()
    }

    /// Nonzero `(l, C^l_{jk})` for fixed `j, k`.
    pub fn row(&self, j: i32, k: i32) -> impl Iterator<Item = (i32, &Polynomial)> {
        self.entries.range((j, k, i32::MIN)..=(j, k, i32::MAX)).map(|((_, _, l), c)| (*l, c))
    }

    pub fn entries(&self) -> &BTreeMap<(i32, i32, i32), Polynomial> {
        &self.entries
    }

    /// Applies `f` to every entry, dropping those that become zero.
    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        let entries = self.entries.iter().map(|(k, v)| (*k, f(v))).filter(|(_, v)| !v.is_zero()).collect();
        StructureConstants { stratum: self.stratum, jmax: self.jmax, entries }
    }
}

/// Closed form of `C^l_{jk}`.
pub fn structure_constant(stratum: Stratum, j: i32, k: i32, l: i32) -> Polynomial {
    let h = |a, b| stratum.h::<Rational>(a, b);
    let delta = |a: i32, b: i32| if a == b { Polynomial::one() } else { Polynomial::zero() };
    match stratum {
        Stratum::BigCell => &(&delta(j + k, l) + &h(k, j - l)) + &h(j, k - l),
        Stratum::Sigma1 => {
            let mut c = &(&delta(j + k, l) + &(&h(k, -1) * &delta(j + 1, l))) + &(&h(j, -1) * &delta(k + 1, l));
            // Bare tail terms only enter above the gap at degree 1.
            if l >= 2 {
                if j - l >= 1 {
                    c += &h(k, j - l);
                }
                if k - l >= 1 {
                    c += &h(j, k - l);
                }
            }
            c += &(&(&h(j, -1) * &h(k, -1)) * &delta(2, l));
            if l == 0 && j >= 2 && k >= 2 {
                c += &sigma1_zero_shift(j, k);
            }
            if j == 0 || k == 0 {
                // p_0 = 1 is the unit.
                return delta(j + k, l);
            }
            c
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Raw,
    MonicCleared,
}

/// Indexed family of polynomials that are all expected to vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    pub label: String,
    pub items: BTreeMap<Vec<i32>, Polynomial>,
    pub normalization: Normalization,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintItemJson {
    pub indices: Vec<i32>,
    pub polynomial: String,
    pub is_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSystemJson {
    pub label: String,
    pub items: Vec<ConstraintItemJson>,
}

impl ConstraintSystem {
    pub fn new(label: impl Into<String>) -> Self {
        ConstraintSystem { label: label.into(), items: BTreeMap::new(), normalization: Normalization::Raw }
    }

    pub fn from_items(label: impl Into<String>, items: impl IntoIterator<Item = (Vec<i32>, Polynomial)>) -> Self {
        ConstraintSystem { label: label.into(), items: items.into_iter().collect(), normalization: Normalization::Raw }
    }

    pub fn insert(&mut self, indices: Vec<i32>, p: Polynomial) {
        self.items.insert(indices, p);
    }

    pub fn get(&self, indices: &[i32]) -> Option<&Polynomial> {
        self.items.get(indices)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn zero_count(&self) -> usize {
        self.items.values().filter(|p| p.is_zero()).count()
    }

    pub fn all_zero(&self) -> bool {
        self.items.values().all(|p| p.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Vec<i32>, &Polynomial)> {
        self.items.iter().filter(|(_, p)| !p.is_zero())
    }

    pub fn normalized(&self) -> Self {
        ConstraintSystem {
            label: self.label.clone(),
            items: self.items.iter().map(|(k, p)| (k.clone(), p.monic_cleared())).collect(),
            normalization: Normalization::MonicCleared,
        }
    }

    /// Applies `f` to every item.
    pub fn map(&self, label: impl Into<String>, f: impl Fn(&Polynomial) -> Polynomial + Sync) -> Self {
        let items: Vec<_> = self.items.par_iter().map(|(k, p)| (k.clone(), f(p))).collect();
        ConstraintSystem { label: label.into(), items: items.into_iter().collect(), normalization: Normalization::Raw }
    }

    pub fn to_json(&self) -> ConstraintSystemJson {
        ConstraintSystemJson {
            label: self.label.clone(),
            items: self
                .items
                .iter()
                .map(|(k, p)| ConstraintItemJson { indices: k.clone(), polynomial: p.to_string(), is_zero: p.is_zero() })
                .collect(),
        }
    }
}

/// Index triples swept by the closure system of a stratum.
pub fn closure_indices(stratum: Stratum, jmax: i32, kmax: i32, mmax: i32) -> Vec<(i32, i32, i32)> {
    let mut out = Vec::new();
    let (jlo, ms): (i32, Vec<i32>) = match stratum {
        Stratum::BigCell => (1, (1..=mmax).collect()),
        Stratum::Sigma1 => (2, std::iter::once(-1).chain(1..=mmax).collect()),
    };
    for j in jlo..=jmax {
        for k in jlo..=kmax {
            for &m in &ms {
                out.push((j, k, m));
            }
        }
    }
    out
}

/// Closure residuals of all products `p_j p_k`, one item per `(j,k,m)`.
pub fn closure_constraints(basis: &StratumBasis<Rational>, jmax: i32, kmax: i32, mmax: i32) -> Result<ConstraintSystem> {
    let jlo = if basis.stratum == Stratum::BigCell { 1 } else { 2 };
    if jmax < jlo || kmax < jlo || mmax < 1 {
        return Err(Error::InvalidIndex(format!("bounds ({jmax},{kmax},{mmax}) below the first index {jlo}")));
    }
    let need = mmax + jmax.max(kmax);
    if basis.order < need {
        return Err(Error::TruncationTooSmall { order: basis.order as usize, what: format!("need order >= {need}") });
    }
    let pairs: Vec<(i32, i32)> = (jlo..=jmax).flat_map(|j| (jlo..=kmax).map(move |k| (j, k))).collect();
    type Items = Vec<(Vec<i32>, Polynomial)>;
    let rows: Vec<Result<Items>> = pairs
        .par_iter()
        .map(|&(j, k)| {
            let d = closure_decompose(basis, j, k)?;
            Ok(d
                .residuals
                .into_iter()
                .filter(|(m, _)| *m <= mmax)
                .map(|(m, p)| (vec![j, k, m], p))
                .collect())
        })
        .collect();
    let mut sys = ConstraintSystem::new(format!("closure/{}", basis.stratum.name()));
    for r in rows {
        for (idx, p) in r? {
            sys.insert(idx, p);
        }
    }
    Ok(sys)
}

/// The literal constraint instance at `(j,k,m)` for the stratum.
pub fn constraint_template(stratum: Stratum, j: i32, k: i32, m: i32) -> Polynomial {
    match stratum {
        Stratum::BigCell => bigcell_constraint(j, k, m),
        Stratum::Sigma1 => sigma1_constraint(j, k, m),
    }
}
