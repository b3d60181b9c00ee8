//! Line-oriented reader for the `.nil` structure-equation language and the
//! `.psi` vector-form language.
//!
//! ```text
//! # Iwasawa manifold
//! dim 3
//! d phi1 = 0
//! d phi2 = 0
//! d phi3 = -phi1 ^ phi2
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::exterior::{Form, Mono, PolyForm};
use crate::scalars::{GaussRational, ParamPoly, Rational};

use super::StructureEquations;

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Slash,
    Star,
    Plus,
    Minus,
    Caret,
    LParen,
    RParen,
    Eq,
    Tensor,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn lex(line_no: usize, text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Spanned { tok: Tok::Int(s.parse().expect("digits")), col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        if c == '(' && chars.get(i + 1) == Some(&'x') && chars.get(i + 2) == Some(&')') {
            out.push(Spanned { tok: Tok::Tensor, col });
            i += 3;
            continue;
        }
        let tok = match c {
            '/' => Tok::Slash,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            other => return err(line_no, col, format!("unexpected character `{other}`")),
        };
        out.push(Spanned { tok, col });
        i += 1;
    }
    Ok(out)
}

/// Generator reference `phi<k>` or `conj(phi<k>)`, 1-based, before range checks.
#[derive(Debug, Clone, Copy, PartialEq)]
struct GenRef {
    index: usize,
    conj: bool,
    col: usize,
}

/// One parsed summand: coefficient, optional `theta<k> (x)` prefix, and form factors.
#[derive(Debug, Clone)]
struct Term {
    coeff: ParamPoly,
    theta: Option<(usize, usize)>,
    gens: Vec<GenRef>,
}

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    end_col: usize,
    params: &'a BTreeSet<String>,
}

fn phi_index(name: &str) -> Option<usize> {
    name.strip_prefix("phi").and_then(|rest| rest.parse().ok())
}

fn theta_index(name: &str) -> Option<usize> {
    name.strip_prefix("theta").and_then(|rest| rest.parse().ok())
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let col = self.col();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => err(self.line, col, format!("expected {what}, found {}", describe(&t))),
            None => err(self.line, col, format!("expected {what}, found end of line")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let col = self.col();
        let Some(Tok::Int(num)) = self.next() else {
            return err(self.line, col, "expected a number");
        };
        if self.peek() == Some(&Tok::Slash) {
            self.next();
            let col = self.col();
            let Some(Tok::Int(den)) = self.next() else {
                return err(self.line, col, "expected a denominator");
            };
            if den == BigInt::from(0) {
                return err(self.line, col, "zero denominator");
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    /// `conj(` already seen as ident; parses `(phiK)` or `(param)`.
    fn conj_arg(&mut self) -> Result<(String, usize), ParseError> {
        self.expect(Tok::LParen, "`(` after conj")?;
        let col = self.col();
        let Some(Tok::Ident(name)) = self.next() else {
            return err(self.line, col, "expected a generator or parameter inside conj(...)");
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok((name, col))
    }

    fn generator(&mut self) -> Result<GenRef, ParseError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(name)) if name == "conj" => {
                let (inner, icol) = self.conj_arg()?;
                match phi_index(&inner) {
                    Some(k) => Ok(GenRef { index: k, conj: true, col: icol }),
                    None => err(self.line, icol, format!("expected phi<k> inside conj(...), found `{inner}`")),
                }
            }
            Some(Tok::Ident(name)) => match phi_index(&name) {
                Some(k) => Ok(GenRef { index: k, conj: false, col }),
                None => err(self.line, col, format!("expected a generator phi<k>, found `{name}`")),
            },
            Some(t) => err(self.line, col, format!("expected a generator, found {}", describe(&t))),
            None => err(self.line, col, "expected a generator, found end of line"),
        }
    }

    /// Numeric summand inside a coefficient literal: products of rationals and `i`.
    fn numeric_factor(&mut self) -> Result<GaussRational, ParseError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Int(_)) => Ok(GaussRational::real(self.rational()?)),
            Some(Tok::Ident(s)) if s == "i" => {
                self.next();
                Ok(GaussRational::i())
            }
            _ => err(self.line, col, "expected a number or `i`"),
        }
    }

    fn numeric_product(&mut self) -> Result<GaussRational, ParseError> {
        let mut acc = self.numeric_factor()?;
        while self.peek() == Some(&Tok::Star) && matches!(self.peek_at(1), Some(Tok::Int(_))) || self.peek() == Some(&Tok::Star) && matches!(self.peek_at(1), Some(Tok::Ident(s)) if s == "i") {
            self.next();
            acc = &acc * &self.numeric_factor()?;
        }
        Ok(acc)
    }

    /// Parenthesised Gaussian literal `(a+b*i)`.
    fn paren_literal(&mut self) -> Result<GaussRational, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            neg = true;
        }
        let mut acc = self.numeric_product()?;
        if neg {
            acc = -acc;
        }
        while matches!(self.peek(), Some(Tok::Plus) | Some(Tok::Minus)) {
            let minus = self.next() == Some(Tok::Minus);
            let v = self.numeric_product()?;
            acc = if minus { &acc - &v } else { &acc + &v };
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(acc)
    }

    fn term(&mut self, sign_negative: bool, allow_theta: bool) -> Result<Term, ParseError> {
        let mut coeff = ParamPoly::constant(if sign_negative { GaussRational::int(-1) } else { GaussRational::one() });
        let mut theta = None;
        let gens: Vec<GenRef>;
        let mut numeric_only = true;
        loop {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(_)) => {
                    let r = self.rational()?;
                    coeff = coeff.scale(&GaussRational::real(r));
                }
                Some(Tok::LParen) => {
                    let g = self.paren_literal()?;
                    coeff = coeff.scale(&g);
                }
                Some(Tok::Ident(name)) => {
                    if name == "i" {
                        self.next();
                        coeff = coeff.scale(&GaussRational::i());
                    } else if name == "conj" {
                        // conj(phiK) starts the form part; conj(param) is a coefficient factor.
                        let inner = match self.peek_at(2) {
                            Some(Tok::Ident(s)) => s.clone(),
                            _ => String::new(),
                        };
                        if phi_index(&inner).is_some() {
                            gens = self.mono()?;
                            break;
                        }
                        self.next();
                        let (p, pcol) = self.conj_arg()?;
                        self.check_param(&p, pcol)?;
                        coeff = coeff.mul(&ParamPoly::conj_var(&p));
                        numeric_only = false;
                    } else if phi_index(&name).is_some() {
                        gens = self.mono()?;
                        break;
                    } else if let Some(k) = theta_index(&name) {
                        if !allow_theta {
                            return err(self.line, col, "vector fields are not allowed here");
                        }
                        if theta.is_some() {
                            return err(self.line, col, "repeated theta factor");
                        }
                        self.next();
                        self.expect(Tok::Tensor, "`(x)` after theta")?;
                        theta = Some((k, col));
                        gens = self.mono()?;
                        break;
                    } else {
                        self.next();
                        self.check_param(&name, col)?;
                        coeff = coeff.mul(&ParamPoly::var(&name));
                        numeric_only = false;
                    }
                }
                Some(t) => return err(self.line, col, format!("unexpected {}", describe(&t))),
                None => return err(self.line, col, "term has no form factor"),
            }
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                }
                Some(Tok::Plus) | Some(Tok::Minus) if numeric_only => {
                    // `a/b+c/d*i * phi1 ^ phi2`: the literal continues.
                    let minus = self.next() == Some(Tok::Minus);
                    let v = self.numeric_product()?;
                    let base = coeff.as_constant().expect("numeric coefficient");
                    let folded = if minus { &base - &v } else { &base + &v };
                    coeff = ParamPoly::constant(folded);
                    if self.peek() == Some(&Tok::Star) {
                        self.next();
                    } else {
                        return err(self.line, self.col(), "expected `*` before the form factor");
                    }
                }
                _ => {
                    let col = self.col();
                    // `theta` alone is caught above; anything else here is a missing form part.
                    return err(self.line, col, "term has no form factor");
                }
            }
        }
        if allow_theta && theta.is_none() {
            return err(self.line, gens.first().map_or(self.col(), |g| g.col), "expected theta<k> (x) before the form part");
        }
        Ok(Term { coeff, theta, gens })
    }

    fn mono(&mut self) -> Result<Vec<GenRef>, ParseError> {
        let mut gens = vec![self.generator()?];
        while self.peek() == Some(&Tok::Caret) {
            self.next();
            gens.push(self.generator()?);
        }
        Ok(gens)
    }

    fn check_param(&self, name: &str, col: usize) -> Result<(), ParseError> {
        if self.params.contains(name) {
            Ok(())
        } else {
            err(self.line, col, format!("undeclared parameter `{name}`"))
        }
    }

    /// `0` or a signed sum of terms.
    fn sum(&mut self, allow_theta: bool) -> Result<Vec<Term>, ParseError> {
        if matches!(self.peek(), Some(Tok::Int(z)) if *z == BigInt::from(0)) && self.toks.len() == self.pos + 1 {
            self.next();
            return Ok(Vec::new());
        }
        let mut terms = Vec::new();
        let mut neg = match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                true
            }
            Some(Tok::Plus) => {
                self.next();
                false
            }
            _ => false,
        };
        loop {
            terms.push(self.term(neg, allow_theta)?);
            match self.next() {
                None => break,
                Some(Tok::Plus) => neg = false,
                Some(Tok::Minus) => neg = true,
                Some(t) => {
                    let col = self.toks[self.pos - 1].col;
                    return err(self.line, col, format!("unexpected {}", describe(&t)));
                }
            }
            if self.at_end() {
                return err(self.line, self.end_col, "dangling operator at end of line");
            }
        }
        Ok(terms)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("number `{v}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Slash => "`/`".into(),
        Tok::Star => "`*`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Tensor => "`(x)`".into(),
    }
}

/// Turns generator references into a canonical monomial and sign.
fn canonical(n: usize, line: usize, gens: &[GenRef]) -> Result<(Mono, bool), ParseError> {
    let mut mask = 0u32;
    let mut negative = false;
    for g in gens {
        if g.index == 0 || g.index > n {
            return err(line, g.col, format!("index {} out of range 1..={n}", g.index));
        }
        let bit = if g.conj { n + g.index - 1 } else { g.index - 1 };
        if mask & (1 << bit) != 0 {
            return err(line, g.col, "repeated factor makes the monomial zero");
        }
        // factors already present with a larger index must be jumped over
        negative ^= (mask >> (bit + 1)).count_ones() % 2 == 1;
        mask |= 1 << bit;
    }
    Ok((Mono(mask), negative))
}

fn assemble_form(n: usize, line: usize, terms: &[Term], degree: Option<usize>) -> Result<PolyForm, ParseError> {
    let mut f = Form::zero(n);
    for t in terms {
        if let Some(k) = degree {
            if t.gens.len() != k {
                return err(line, t.gens[0].col, format!("expected a {k}-form term, found degree {}", t.gens.len()));
            }
        }
        let (m, neg) = canonical(n, line, &t.gens)?;
        f.add_term(m, if neg { t.coeff.neg() } else { t.coeff.clone() });
    }
    Ok(f)
}

struct Header {
    n: usize,
    params: Vec<String>,
}

const RESERVED: &[&str] = &["i", "conj", "d", "dim", "params", "psi"];

fn parse_params(line_no: usize, toks: &[Spanned], params: &mut Vec<String>) -> Result<(), ParseError> {
    for s in &toks[1..] {
        match &s.tok {
            Tok::Ident(name)
                if !RESERVED.contains(&name.as_str()) && phi_index(name).is_none() && theta_index(name).is_none() =>
            {
                if params.contains(name) {
                    return err(line_no, s.col, format!("parameter `{name}` declared twice"));
                }
                params.push(name.clone());
            }
            other => return err(line_no, s.col, format!("invalid parameter name {}", describe(other))),
        }
    }
    Ok(())
}

fn parse_dim(line_no: usize, toks: &[Spanned]) -> Result<usize, ParseError> {
    match toks.get(1).map(|s| &s.tok) {
        Some(Tok::Int(v)) if toks.len() == 2 => {
            let n: usize = v.try_into().unwrap_or(0);
            if n == 0 || n > MAX_DIM {
                return err(line_no, toks[1].col, format!("dimension must be in 1..={MAX_DIM}"));
            }
            Ok(n)
        }
        _ => err(line_no, toks.get(1).map_or(4, |s| s.col), "expected `dim <n>`"),
    }
}

fn lines(text: &str) -> Result<Vec<(usize, String, Vec<Spanned>)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let toks = lex(i + 1, raw)?;
        if !toks.is_empty() {
            out.push((i + 1, raw.to_string(), toks));
        }
    }
    Ok(out)
}

fn header(body: &[(usize, String, Vec<Spanned>)]) -> Result<(Header, usize), ParseError> {
    let Some((line_no, _, toks)) = body.first() else {
        return err(1, 1, "missing `dim <n>` line");
    };
    if toks[0].tok != Tok::Ident("dim".into()) {
        return err(*line_no, toks[0].col, "first line must be `dim <n>`");
    }
    let n = parse_dim(*line_no, toks)?;
    let mut params = Vec::new();
    let mut next = 1;
    while let Some((ln, _, toks)) = body.get(next) {
        if toks[0].tok == Tok::Ident("params".into()) {
            parse_params(*ln, toks, &mut params)?;
            next += 1;
        } else {
            break;
        }
    }
    Ok((Header { n, params }, next))
}

/// Parses a `.nil` manifold description.
pub fn parse_manifold(text: &str) -> Result<StructureEquations, ParseError> {
    let body = lines(text)?;
    let (Header { n, params }, start) = header(&body)?;
    let param_set: BTreeSet<String> = params.iter().cloned().collect();
    let mut table: Vec<Option<PolyForm>> = vec![None; n];
    for (line_no, raw, toks) in &body[start..] {
        let end_col = raw.chars().count() + 1;
        let mut cur = Cursor { toks, pos: 0, line: *line_no, end_col, params: &param_set };
        match cur.next() {
            Some(Tok::Ident(s)) if s == "d" => {}
            Some(Tok::Ident(s)) if s == "params" => {
                return err(*line_no, toks[0].col, "`params` must directly follow `dim`");
            }
            _ => return err(*line_no, toks[0].col, "expected `d phi<k> = ...`"),
        }
        let col = cur.col();
        let k = match cur.next() {
            Some(Tok::Ident(name)) => match phi_index(&name) {
                Some(k) => k,
                None => return err(*line_no, col, format!("expected phi<k>, found `{name}`")),
            },
            _ => return err(*line_no, col, "expected phi<k>"),
        };
        if k == 0 || k > n {
            return err(*line_no, col, format!("index {k} out of range 1..={n}"));
        }
        if table[k - 1].is_some() {
            return err(*line_no, toks[0].col, format!("duplicate equation for d phi{k}"));
        }
        cur.expect(Tok::Eq, "`=`")?;
        if cur.at_end() {
            return err(*line_no, end_col, "missing right-hand side");
        }
        let terms = cur.sum(false)?;
        table[k - 1] = Some(assemble_form(n, *line_no, &terms, Some(2))?);
    }
    let last_line = body.last().map_or(1, |b| b.0);
    let d_table = table
        .into_iter()
        .enumerate()
        .map(|(k, f)| f.ok_or(()).or_else(|_| err(last_line, 1, format!("missing equation for d phi{}", k + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StructureEquations::new(n, params, d_table))
}

/// Parses a single form in term syntax, e.g. `i * phi1 ^ conj(phi1) + 2 * phi2 ^ conj(phi2)`.
pub fn parse_form(text: &str, n: usize, params: &[String]) -> Result<PolyForm, ParseError> {
    let toks = lex(1, text)?;
    if toks.is_empty() {
        return err(1, 1, "empty form");
    }
    let param_set: BTreeSet<String> = params.iter().cloned().collect();
    let mut cur = Cursor { toks: &toks, pos: 0, line: 1, end_col: text.chars().count() + 1, params: &param_set };
    if toks.len() == 1 && toks[0].tok == Tok::Int(BigInt::from(0)) {
        return Ok(Form::zero(n));
    }
    let terms = cur.sum(false)?;
    assemble_form(n, 1, &terms, None)
}

/// A parsed `.psi` file: dimension, parameters, and `Σ_i ψ^i ⊗ θ_i` as components.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiFile {
    pub n: usize,
    pub params: Vec<String>,
    pub components: Vec<PolyForm>,
}

/// Parses a `.psi` file:
///
/// ```text
/// dim 3
/// params t12
/// psi = t12 * theta1 (x) conj(phi2)
/// ```
pub fn parse_psi(text: &str) -> Result<PsiFile, ParseError> {
    let body = lines(text)?;
    let (Header { n, params }, start) = header(&body)?;
    let param_set: BTreeSet<String> = params.iter().cloned().collect();
    let mut components = vec![Form::zero(n); n];
    let mut seen = false;
    for (line_no, raw, toks) in &body[start..] {
        let end_col = raw.chars().count() + 1;
        let mut cur = Cursor { toks, pos: 0, line: *line_no, end_col, params: &param_set };
        match cur.next() {
            Some(Tok::Ident(s)) if s == "psi" => {}
            _ => return err(*line_no, toks[0].col, "expected `psi = ...`"),
        }
        cur.expect(Tok::Eq, "`=`")?;
        if seen {
            return err(*line_no, toks[0].col, "duplicate psi line");
        }
        seen = true;
        if cur.at_end() {
            return err(*line_no, end_col, "missing right-hand side");
        }
        for t in cur.sum(true)? {
            let (k, col) = t.theta.expect("theta required");
            if k == 0 || k > n {
                return err(*line_no, col, format!("index {k} out of range 1..={n}"));
            }
            if let Some(g) = t.gens.iter().find(|g| !g.conj) {
                return err(*line_no, g.col, "vector forms take conj(phi<k>) factors only");
            }
            let (m, neg) = canonical(n, *line_no, &t.gens)?;
            components[k - 1].add_term(m, if neg { t.coeff.neg() } else { t.coeff.clone() });
        }
    }
    if !seen {
        return err(body.last().map_or(1, |b| b.0), 1, "missing `psi = ...` line");
    }
    Ok(PsiFile { n, params, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iwasawa_parses() {
        let eqs = parse_manifold("dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = -1 * phi1 ^ phi2\n").unwrap();
        assert_eq!(eqs.n(), 3);
        assert!(eqs.d_table()[0].is_zero());
        let expected: PolyForm = Form::phi(3, 1).wedge(&Form::phi(3, 2)).neg();
        assert_eq!(eqs.d_table()[2], expected);
    }

    #[test]
    fn ordering_and_whitespace_insensitive() {
        let a = parse_manifold("dim 3\nd phi3 = phi2^phi1\nd phi1 = 0\n  d   phi2=0 # trailing\n").unwrap();
        let b = parse_manifold("# comment\ndim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = -phi1 ^ phi2").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gaussian_literals() {
        let eqs = parse_manifold("dim 2\nd phi1 = 0\nd phi2 = 1/2+1/3*i * phi1 ^ conj(phi1)\n").unwrap();
        let c = eqs.d_table()[1].terms().next().unwrap().1.as_constant().unwrap();
        assert_eq!(c, GaussRational::new(crate::scalars::rat(1, 2), crate::scalars::rat(1, 3)));
        let eqs2 = parse_manifold("dim 2\nd phi1 = 0\nd phi2 = (1/2+1/3*i) * phi1 ^ conj(phi1)\n").unwrap();
        assert_eq!(eqs, eqs2);
        let eqs3 = parse_manifold("dim 2\nd phi1 = 0\nd phi2 = -2/3*i * phi1 ^ conj(phi1)\n").unwrap();
        let c3 = eqs3.d_table()[1].terms().next().unwrap().1.as_constant().unwrap();
        assert_eq!(c3, GaussRational::new(crate::scalars::rat(0, 1), crate::scalars::rat(-2, 3)));
    }

    #[test]
    fn parameters() {
        let eqs = parse_manifold("dim 3\nparams t\nd phi1 = 0\nd phi2 = 0\nd phi3 = -t * phi2 ^ conj(phi2) - phi1 ^ phi2\n").unwrap();
        assert_eq!(eqs.params(), ["t".to_string()]);
        let err = parse_manifold("dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = s * phi1 ^ phi2\n").unwrap_err();
        assert_eq!((err.line, err.col), (4, 10));
        assert!(err.message.contains("undeclared parameter"));
    }

    #[test]
    fn malformed_inputs_are_positioned() {
        let e = parse_manifold("dim 1\nd phi1 = phi1 ^ phi1\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 17));
        assert!(e.message.contains("repeated factor"));
        let e = parse_manifold("dim 2\nd phi1 = 0\nd phi1 = 0\nd phi2 = 0").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("duplicate"));
        let e = parse_manifold("dim 2\nd phi1 = 0\nd phi3 = 0").unwrap_err();
        assert_eq!((e.line, e.col), (3, 3));
        let e = parse_manifold("dim 2\nd phi1 = 0\nd phi2 = phi1 ^ phi4").unwrap_err();
        assert_eq!((e.line, e.col), (3, 17));
        let e = parse_manifold("dim 2\nd phi1 = 0\nd phi2 = phi1 ^ ").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_manifold("d phi1 = 0").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        let e = parse_manifold("dim 2\nd phi1 = 0\nd phi2 = 3 $ phi1").unwrap_err();
        assert_eq!((e.line, e.col), (3, 12));
        let e = parse_manifold("dim 2\nd phi1 = 0").unwrap_err();
        assert!(e.message.contains("missing equation for d phi2"));
        let e = parse_manifold("dim 2\nd phi1 = 0\nd phi2 = phi1").unwrap_err();
        assert!(e.message.contains("2-form"));
    }

    #[test]
    fn forms_and_psi() {
        let f = parse_form("i * phi1 ^ conj(phi1) - conj(phi2) ^ phi2", 2, &[]).unwrap();
        let expected = Form::<GaussRational>::i_phi_phibar(2, 1, 1).add(&Form::phi(2, 2).wedge(&Form::phibar(2, 2)));
        assert_eq!(f, expected.to_poly());
        let psi = parse_psi("dim 3\nparams t12\npsi = t12 * theta1 (x) conj(phi2)\n").unwrap();
        assert_eq!(psi.components[0], Form::phibar(3, 2).scale(&ParamPoly::var("t12")));
        assert!(psi.components[1].is_zero());
        let e = parse_psi("dim 3\npsi = theta1 (x) phi2\n").unwrap_err();
        assert!(e.message.contains("conj(phi<k>)"));
    }
}
