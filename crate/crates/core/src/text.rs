//! Canonical text form for coefficients and elements, and the inverse parser.
//!
//! Coefficients print in q = s^2 whenever every s-exponent involved is even,
//! otherwise in s.  A denominator that is not a monomial is balanced around
//! its middle exponent so that quantum integers come out in the familiar
//! symmetric shape ("q - q^-1" rather than "q^2 - 1" times a shift).
//!
//! Elements print one term per basis word, sorted by descending bidegree and
//! then by word, e.g. "y1 x1 + 1/(q - q^-1) K[1] - 1/(q - q^-1) K[-1]".
//! The grammar accepted by `parse_expression` reproduces everything this
//! module prints; multiplication may be written as juxtaposition.

use crate::error::Error;
use crate::qfield::QRat;
use crate::uq::filtration::term_bidegree;
use crate::uq::{AlgebraContext, Element, NormalWord, TensorElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

// ---------------------------------------------------------------------------
// coefficient printing
// ---------------------------------------------------------------------------

fn monomial_of(p: &crate::qfield::SPoly) -> Option<(usize, BigInt)> {
    let mut found = None;
    for (k, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            if found.is_some() {
                return None;
            }
            found = Some((k, c.clone()));
        }
    }
    found
}

fn lowest_exp(p: &crate::qfield::SPoly) -> usize {
    p.coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .unwrap_or(0)
}

/// Exponent/coefficient pairs in descending exponent order, shifted by -k.
fn poly_terms(p: &crate::qfield::SPoly, k: i64, scale: &BigInt) -> Vec<(i64, BigRational)> {
    let mut out = Vec::new();
    for (j, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out.push((j as i64 - k, BigRational::new(c.clone(), scale.clone())));
        }
    }
    out.reverse();
    out
}

fn all_even(terms: &[(i64, BigRational)]) -> bool {
    terms.iter().all(|(e, _)| e % 2 == 0)
}

fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn format_magnitude(mag: &BigRational, exp: i64, use_q: bool) -> String {
    if exp == 0 {
        return rational_str(mag);
    }
    let (var, e) = if use_q { ('q', exp / 2) } else { ('s', exp) };
    let vs = if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    };
    if mag.is_one() {
        vs
    } else {
        format!("{}*{}", rational_str(mag), vs)
    }
}

fn print_poly_terms(terms: &[(i64, BigRational)], use_q: bool) -> String {
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&format_magnitude(&mag, *e, use_q));
    }
    out
}

/// Canonical string form of a coefficient.
pub fn print_qrat(f: &QRat) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let num = f.num();
    let den = f.den();
    if let Some((k, c)) = monomial_of(den) {
        let terms = poly_terms(num, k as i64, &c);
        let use_q = all_even(&terms);
        return print_poly_terms(&terms, use_q);
    }
    // true fraction: balance the denominator around its middle exponent
    let l = lowest_exp(den) as i64;
    let h = den.degree() as i64;
    let one = BigInt::one();
    let even_at = |k: i64| {
        all_even(&poly_terms(num, k, &one)) && all_even(&poly_terms(den, k, &one))
    };
    let mut k = if (l + h) % 2 == 0 { (l + h) / 2 } else { 0 };
    if k != 0 && !even_at(k) && even_at(0) {
        k = 0;
    }
    let use_q = even_at(k);
    let nt = poly_terms(num, k, &one);
    let dt = poly_terms(den, k, &one);
    let ns = print_poly_terms(&nt, use_q);
    let ds = print_poly_terms(&dt, use_q);
    let ns = if nt.len() > 1 { format!("({ns})") } else { ns };
    format!("{ns}/({ds})")
}

/// Sign and magnitude for use inside a term list: the magnitude string is
/// parenthesized when it would not bind as a single product factor.
pub fn qrat_parts(f: &QRat) -> (bool, String) {
    if f.is_zero() {
        return (false, "0".into());
    }
    let neg = f.num().leading().is_negative();
    let g = if neg { -f } else { f.clone() };
    let multi = monomial_of(g.den()).is_some()
        && g.num().coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
    let s = print_qrat(&g);
    (neg, if multi { format!("({s})") } else { s })
}

// ---------------------------------------------------------------------------
// element printing
// ---------------------------------------------------------------------------

fn word_string(w: &NormalWord) -> String {
    let mut parts: Vec<String> = Vec::new();
    for &l in &w.y {
        parts.push(format!("y{}", l + 1));
    }
    if w.t.iter().any(|&k| k != 0) {
        let coords: Vec<String> = w.t.iter().map(|k| k.to_string()).collect();
        parts.push(format!("K[{}]", coords.join(",")));
    }
    for &l in &w.x {
        parts.push(format!("x{}", l + 1));
    }
    parts.join(" ")
}

/// Canonical string form of an element.
pub fn print_element(a: &Element) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&NormalWord, &QRat)> = a.terms.iter().collect();
    terms.sort_by(|(w1, _), (w2, _)| {
        term_bidegree(w2)
            .cmp(&term_bidegree(w1))
            .then_with(|| w1.cmp(w2))
    });
    let mut out = String::new();
    for (i, (w, c)) in terms.iter().enumerate() {
        let (neg, body) = qrat_parts(c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let ws = word_string(w);
        if ws.is_empty() {
            out.push_str(&body);
        } else if body == "1" {
            out.push_str(&ws);
        } else {
            out.push_str(&body);
            out.push(' ');
            out.push_str(&ws);
        }
    }
    out
}

/// Tensor elements print with an explicit "(x)" between the factors.
pub fn print_tensor(t: &TensorElement) -> String {
    if t.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, ((l, r), c)) in t.terms.iter().enumerate() {
        let (neg, body) = qrat_parts(c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if body != "1" {
            out.push_str(&body);
            out.push(' ');
        }
        let ls = word_string(l);
        let rs = word_string(r);
        out.push_str(if ls.is_empty() { "1" } else { &ls });
        out.push_str(" (x) ");
        out.push_str(if rs.is_empty() { "1" } else { &rs });
    }
    out
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_element(self))
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_tensor(self))
    }
}

// ---------------------------------------------------------------------------
// expression parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Q,
    S,
    X(usize),
    Y(usize),
    T(usize),
    K(Vec<i64>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LPar,
    RPar,
}

fn parse_err(pos: usize, msg: &str) -> Error {
    Error::Argument(format!("parse error at byte {pos}: {msg}"))
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, Error> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LPar));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RPar));
                i += 1;
            }
            'q' => {
                out.push((i, Tok::Q));
                i += 1;
            }
            's' => {
                out.push((i, Tok::S));
                i += 1;
            }
            'x' | 'y' | 't' => {
                let start = i;
                i += 1;
                let d0 = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if d0 == i {
                    return Err(parse_err(start, "generator letter needs an index"));
                }
                let idx: usize = src[d0..i]
                    .parse()
                    .map_err(|_| parse_err(d0, "index out of range"))?;
                out.push((
                    start,
                    match c {
                        'x' => Tok::X(idx),
                        'y' => Tok::Y(idx),
                        _ => Tok::T(idx),
                    },
                ));
            }
            'K' => {
                let start = i;
                i += 1;
                if i >= bytes.len() || bytes[i] != b'[' {
                    return Err(parse_err(start, "expected '[' after K"));
                }
                i += 1;
                let close = src[i..]
                    .find(']')
                    .ok_or_else(|| parse_err(start, "unterminated K[...]"))?;
                let inner = &src[i..i + close];
                let mut coords = Vec::new();
                for piece in inner.split(',') {
                    let v: i64 = piece
                        .trim()
                        .parse()
                        .map_err(|_| parse_err(i, "bad integer in K[...]"))?;
                    coords.push(v);
                }
                i += close + 1;
                out.push((start, Tok::K(coords)));
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: i64 = src[start..i]
                    .parse()
                    .map_err(|_| parse_err(start, "integer literal out of range"))?;
                out.push((start, Tok::Num(v)));
            }
            _ => return Err(parse_err(i, "unexpected character")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a AlgebraContext,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|(_, t)| t.clone())
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn invert(&self, e: &Element, at: usize) -> Result<Element, Error> {
        if e.is_zero() {
            return Err(parse_err(at, "division by zero"));
        }
        if e.terms.len() == 1 {
            let (w, c) = e.terms.iter().next().unwrap();
            if w.y.is_empty() && w.x.is_empty() {
                let minus: Vec<i64> = w.t.iter().map(|&k| -k).collect();
                return Ok(Element::from_word(NormalWord::torus(minus), c.inv()));
            }
        }
        Err(parse_err(
            at,
            "only scalars and torus characters are invertible",
        ))
    }

    fn parse_expr(&mut self) -> Result<Element, Error> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.next();
            }
            Some(Tok::Minus) => {
                self.next();
                neg = true;
            }
            _ => {}
        }
        let mut acc = self.parse_term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Element, Error> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.parse_factor()?;
                    acc = self.ctx.mul(&acc, &rhs)?;
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.next();
                    let rhs = self.parse_factor()?;
                    let inv = self.invert(&rhs, at)?;
                    acc = self.ctx.mul(&acc, &inv)?;
                }
                Some(t) if starts_atom(&t) => {
                    let rhs = self.parse_factor()?;
                    acc = self.ctx.mul(&acc, &rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Element, Error> {
        let base = self.parse_atom()?;
        if self.peek() == Some(Tok::Caret) {
            let at = self.here();
            self.next();
            let mut sign = 1i64;
            match self.peek() {
                Some(Tok::Minus) => {
                    self.next();
                    sign = -1;
                }
                Some(Tok::Plus) => {
                    self.next();
                }
                _ => {}
            }
            let k = match self.next() {
                Some(Tok::Num(v)) => v * sign,
                _ => return Err(parse_err(at, "expected integer exponent after '^'")),
            };
            if k >= 0 {
                return self.ctx.pow(&base, k as usize);
            }
            let inv = self.invert(&base, at)?;
            return self.ctx.pow(&inv, (-k) as usize);
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Element, Error> {
        let at = self.here();
        let n = self.ctx.n();
        let check = |i: usize| -> Result<usize, Error> {
            if i == 0 || i > n {
                Err(parse_err(
                    at,
                    &format!("generator index {i} out of range 1..={n}"),
                ))
            } else {
                Ok(i - 1)
            }
        };
        match self.next() {
            Some(Tok::Num(v)) => Ok(Element::one(n).scale(&QRat::from_int(v))),
            Some(Tok::Q) => Ok(Element::one(n).scale(&QRat::q())),
            Some(Tok::S) => Ok(Element::one(n).scale(&QRat::s_pow(1))),
            Some(Tok::X(i)) => self.ctx.gen_x(check(i)?),
            Some(Tok::Y(i)) => self.ctx.gen_y(check(i)?),
            Some(Tok::T(i)) => self.ctx.t(check(i)?),
            Some(Tok::K(v)) => {
                if v.len() != n {
                    return Err(parse_err(
                        at,
                        &format!("K[...] needs exactly {n} coordinates"),
                    ));
                }
                self.ctx.torus(&v)
            }
            Some(Tok::LPar) => {
                let e = self.parse_expr()?;
                match self.next() {
                    Some(Tok::RPar) => Ok(e),
                    _ => Err(parse_err(self.here(), "expected ')'")),
                }
            }
            Some(_) => Err(parse_err(at, "expected a value")),
            None => Err(parse_err(at, "unexpected end of input")),
        }
    }
}

fn starts_atom(t: &Tok) -> bool {
    matches!(
        t,
        Tok::Num(_) | Tok::Q | Tok::S | Tok::X(_) | Tok::Y(_) | Tok::T(_) | Tok::K(_) | Tok::LPar
    )
}

/// Parse the element grammar: sums of products of powers of atoms, where the
/// atoms are integers, q, s, x<i>, y<i>, t<i>, K[...], and parenthesized
/// subexpressions.  Indices are 1-based.  Errors carry the byte offset.
pub fn parse_expression(ctx: &AlgebraContext, src: &str) -> Result<Element, Error> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(parse_err(0, "empty expression"));
    }
    let mut p = Parser {
        ctx,
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.parse_expr()?;
    if p.pos != p.toks.len() {
        return Err(parse_err(p.here(), "trailing input"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// weight parsing
// ---------------------------------------------------------------------------

/// Which basis a weight vector is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightBasis {
    /// coordinates over the simple roots ("r:...")
    Root,
    /// coordinates over the fundamental weights ("w:...")
    Fundamental,
}

/// Parse "r:c1,...,cn" or "w:m1,...,mn".
pub fn parse_weight(src: &str, n: usize) -> Result<(WeightBasis, Vec<i64>), Error> {
    let (basis, rest) = if let Some(r) = src.strip_prefix("r:") {
        (WeightBasis::Root, r)
    } else if let Some(r) = src.strip_prefix("w:") {
        (WeightBasis::Fundamental, r)
    } else {
        return Err(Error::Argument(
            "weight needs a basis tag: 'r:' for root coordinates or 'w:' for fundamental-weight coordinates".into(),
        ));
    };
    let mut coords = Vec::new();
    for piece in rest.split(',') {
        let v: i64 = piece.trim().parse().map_err(|_| {
            Error::Argument(format!("bad weight coordinate {piece:?} in {src:?}"))
        })?;
        coords.push(v);
    }
    if coords.len() != n {
        return Err(Error::Argument(format!(
            "weight {src:?} has {} coordinates, expected {n}",
            coords.len()
        )));
    }
    Ok((basis, coords))
}
