//! Canonical text grammar, LaTeX rendering and the structured JSON form.
//!
//! Terms are printed from the largest monomial down, factors inside a
//! monomial from the smallest variable up:
//!
//! ```
//! use birkhoff::{Polynomial, Symbol};
//! let f = Polynomial::sym(Symbol::p(1)).pow(2) - Polynomial::sym(Symbol::h(1, 1)).scale(&birkhoff::int(2));
//! assert_eq!(f.to_string(), "p[1]^2 - 2*H[1,1]");
//! assert_eq!(birkhoff::parse_poly("p[1]^2 - 2*H[1,1]").unwrap(), f);
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::symbol::{Family, JetKey, Symbol};

fn render_monomial(m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(k, e)| if *e == 1 { k.to_string() } else { format!("{k}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative_value();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", mag.render())?;
            } else if mag.is_one() {
                write!(f, "{}", render_monomial(m))?;
            } else {
                write!(f, "{}*{}", mag.render(), render_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// Parses the canonical grammar. Also accepts parentheses, integer division
/// and commas between jet directions, so hand-written formulas can be read.
pub fn parse_poly(text: &str) -> Result<Poly<Rational>> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Poly<Rational>> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<Rational>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.eat(b'/') {
                let d = self.integer()?;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&Rational::new(BigInt::one(), d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<Rational>> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(t.parse().expect("digits parse"))
    }

    fn signed_small(&mut self) -> Result<i16> {
        let neg = self.eat(b'-');
        let n = self.integer()?;
        let n: i16 = n.try_into().map_err(|_| self.err("index out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn ident(&mut self) -> String {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn symbol_after(&mut self, name: &str, at: usize) -> Result<Symbol> {
        let family = Family::from_name(name).ok_or(Error::Parse { pos: at, msg: format!("unknown symbol family '{name}'") })?;
        self.expect(b'[')?;
        let mut idx = vec![self.signed_small()?];
        while self.eat(b',') {
            idx.push(self.signed_small()?);
        }
        self.expect(b']')?;
        Symbol::from_indices(family, &idx).ok_or(Error::Parse { pos: at, msg: format!("wrong arity for '{name}'") })
    }

    fn atom(&mut self) -> Result<Poly<Rational>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(Rational::from_integer(self.integer()?))),
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.ident();
                if name == "D" {
                    self.expect(b'[')?;
                    let at = self.pos;
                    let inner = self.ident();
                    let base = self.symbol_after(&inner, at)?;
                    self.expect(b';')?;
                    let mut dirs = Vec::new();
                    loop {
                        let at = self.pos;
                        let x = self.ident();
                        if x != "x" && x != "x_" {
                            return Err(Error::Parse { pos: at, msg: "expected x-direction".into() });
                        }
                        let d = self.integer()?;
                        dirs.push(u8::try_from(d).map_err(|_| self.err("direction out of range"))?);
                        self.eat(b',');
                        if self.eat(b']') {
                            break;
                        }
                    }
                    Ok(Poly::jet(JetKey::new(base, dirs)))
                } else {
                    Ok(Poly::sym(self.symbol_after(&name, at)?))
                }
            }
            _ => Err(self.err("expected term")),
        }
    }
}

fn latex_symbol(s: &Symbol) -> String {
    let name = match s.family {
        Family::H => "H",
        Family::U => "u",
        Family::P => "p",
        Family::PStar => "p^*",
        Family::X => "x",
        Family::Delta => "\\Delta",
        Family::J => "J",
        Family::JStar => "J^*",
        Family::Fhess => "F",
        Family::Mu => "\\mu",
        Family::V => "v",
        Family::W => "w",
        Family::Pi => "\\pi",
        Family::T => "t",
    };
    match s.family {
        Family::H => format!("H^{{{}}}_{{{}}}", s.a, s.b),
        _ if s.family.arity() == 2 => format!("{name}_{{{}{}}}", s.a, s.b),
        _ => format!("{name}_{{{}}}", s.a),
    }
}

fn latex_jet(k: &JetKey) -> String {
    if k.is_plain() {
        return latex_symbol(&k.base);
    }
    let mut den = String::new();
    let mut i = 0;
    let d = k.derivs();
    while i < d.len() {
        let mut j = i;
        while j < d.len() && d[j] == d[i] {
            j += 1;
        }
        if j - i == 1 {
            den.push_str(&format!("\\partial x_{{{}}}", d[i]));
        } else {
            den.push_str(&format!("\\partial x_{{{}}}^{{{}}}", d[i], j - i));
        }
        i = j;
    }
    let num = if d.len() == 1 { "\\partial".to_string() } else { format!("\\partial^{{{}}}", d.len()) };
    format!("\\frac{{{num} {}}}{{{den}}}", latex_symbol(&k.base))
}

/// LaTeX rendering with jets as partial derivatives.
pub fn to_latex(p: &Poly<Rational>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        out.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let coeff = if mag.denom().is_one() {
            mag.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        };
        if m.is_one() {
            out.push_str(&coeff);
            continue;
        }
        if !mag.is_one() {
            out.push_str(&coeff);
            out.push(' ');
        }
        let parts: Vec<String> = m
            .factors()
            .iter()
            .map(|(k, e)| {
                let s = latex_jet(k);
                match (*e, k.is_plain()) {
                    (1, _) => s,
                    (e, true) => format!("({s})^{{{e}}}"),
                    (e, false) => format!("\\left({s}\\right)^{{{e}}}"),
                }
            })
            .collect();
        out.push_str(&parts.join(" "));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonFactor {
    pub symbol: String,
    pub indices: Vec<i16>,
    pub jets: Vec<u8>,
    pub exp: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub monomial: Vec<JsonFactor>,
}

/// Structured serialization used by reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPoly {
    pub terms: Vec<JsonTerm>,
}

impl From<&Poly<Rational>> for JsonPoly {
    fn from(p: &Poly<Rational>) -> JsonPoly {
        let terms = p
            .terms()
            .rev()
            .map(|(m, c)| JsonTerm {
                coeff: c.render(),
                monomial: m
                    .factors()
                    .iter()
                    .map(|(k, e)| JsonFactor {
                        symbol: k.base.family.name().to_string(),
                        indices: k.base.indices().to_vec(),
                        jets: k.derivs().to_vec(),
                        exp: *e,
                    })
                    .collect(),
            })
            .collect();
        JsonPoly { terms }
    }
}

impl TryFrom<&JsonPoly> for Poly<Rational> {
    type Error = Error;
    fn try_from(j: &JsonPoly) -> Result<Poly<Rational>> {
        let bad = |msg: String| Error::Parse { pos: 0, msg };
        let mut out = Poly::zero();
        for t in &j.terms {
            let c = parse_rational(&t.coeff).ok_or_else(|| bad(format!("bad coefficient '{}'", t.coeff)))?;
            let mut m = Monomial::one();
            for f in &t.monomial {
                let fam = Family::from_name(&f.symbol).ok_or_else(|| bad(format!("unknown family '{}'", f.symbol)))?;
                let s = Symbol::from_indices(fam, &f.indices).ok_or_else(|| bad(format!("bad arity for '{}'", f.symbol)))?;
                m = m.mul(&Monomial::var(JetKey::new(s, f.jets.iter().copied()), f.exp));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn rendering_conventions() {
        assert_eq!(Poly::<Rational>::zero().to_string(), "0");
        let j = Poly::jet(JetKey::new(Symbol::u(2), [2])).scale(&rat(-3, 2));
        assert_eq!(j.to_string(), "-3/2*D[u[2]; x2]");
        assert_eq!(parse_poly("-3/2*D[u[2]; x2]").unwrap(), j);
        assert_eq!(parse_poly("-3/2*D[u[2]; x_2]").unwrap(), j);
    }

    #[test]
    fn parser_handles_grouping() {
        let a = parse_poly("(p[1] - H[1,1])^2").unwrap();
        let b = parse_poly("p[1]^2 - 2*H[1,1]*p[1] + H[1,1]^2").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("D[u[1]; x2,x3]").unwrap(), parse_poly("D[u[1]; x3 x2]").unwrap());
        assert_eq!(parse_poly("H[2,-1]").unwrap(), Poly::sym(Symbol::h(2, -1)));
        assert!(parse_poly("q[1]").is_err());
        assert!(parse_poly("p[1] +").is_err());
        assert!(parse_poly("H[1]").is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = parse_poly("1/3*D[Fhess[1,2]; x3]*u[1]^2 - 7").unwrap();
        let j = JsonPoly::from(&f);
        assert_eq!(Poly::try_from(&j).unwrap(), f);
    }

    #[test]
    fn latex_jets() {
        let f = parse_poly("D[u[1]; x3] - 3/2*D[u[2]; x2]").unwrap();
        let s = to_latex(&f);
        assert!(s.contains("\\frac{\\partial u_{1}}{\\partial x_{3}}"));
        assert!(s.contains("\\frac{3}{2}"));
    }
}
