//! Textual term language.
//!
//! ```text
//! term   := cat ;
//! cat    := prod { "+" prod } ;
//! prod   := factor { "." factor } ;        t1.t2 = t2 copies of t1
//! factor := atom [ "^" ( NAT | "w" ) ] ;
//! atom   := base [ "*" ] | "rev" "(" term ")" | "(" term ")" [ "*" ] | sum ;
//! base   := "w" | "z" | NAT ;
//! sum    := ("sumw" | "sumw*") "[" blocklist ";" blocklist "]" ;
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::term::{Direction, Term, TermError};

/// Byte offsets into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "invalid term",
        };
        write!(f, "{kind} at {}..{}: {}", self.span.start, self.span.end, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(u64),
    W,
    Z,
    Rev,
    Sum(Direction),
    Star,
    Caret,
    Dot,
    Plus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Nat(n) => format!("number {n}"),
            Tok::W => "'w'".into(),
            Tok::Z => "'z'".into(),
            Tok::Rev => "'rev'".into(),
            Tok::Sum(Direction::Forward) => "'sumw'".into(),
            Tok::Sum(Direction::Reverse) => "'sumw*'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Plus => "'+'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Semi => "';'".into(),
            Tok::Comma => "','".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(message: impl Into<String>, span: SourceSpan) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        message: message.into(),
        span,
    }
}

fn semantic(message: impl Into<String>, span: SourceSpan) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Semantic,
        message: message.into(),
        span,
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = |t: Tok| (t, SourceSpan::new(start, start + 1));
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let span = SourceSpan::new(start, i);
                let n = src[start..i]
                    .parse::<u64>()
                    .map_err(|_| semantic("number too large", span))?;
                out.push((Tok::Nat(n), span));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &src[start..i];
                let tok = match word {
                    "w" => Tok::W,
                    "z" => Tok::Z,
                    "rev" => Tok::Rev,
                    "sumw" => {
                        if i < bytes.len() && bytes[i] == b'*' {
                            i += 1;
                            Tok::Sum(Direction::Reverse)
                        } else {
                            Tok::Sum(Direction::Forward)
                        }
                    }
                    _ => return Err(syntax(format!("unknown word '{word}'"), SourceSpan::new(start, i))),
                };
                out.push((tok, SourceSpan::new(start, i)));
            }
            _ => {
                let tok = match c {
                    b'*' => Tok::Star,
                    b'^' => Tok::Caret,
                    b'.' => Tok::Dot,
                    b'+' => Tok::Plus,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'[' => Tok::LBracket,
                    b']' => Tok::RBracket,
                    b';' => Tok::Semi,
                    b',' => Tok::Comma,
                    _ => {
                        let ch = src[start..].chars().next().unwrap();
                        return Err(syntax(
                            format!("unexpected character '{ch}'"),
                            SourceSpan::new(start, start + ch.len_utf8()),
                        ));
                    }
                };
                out.push(single(tok));
                i += 1;
            }
        }
    }
    out.push((Tok::Eof, SourceSpan::new(src.len(), src.len())));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(syntax(
                format!("expected {}, found {}", tok.describe(), self.peek().describe()),
                self.span(),
            ))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut parts = vec![self.prod()?];
        while *self.peek() == Tok::Plus {
            self.bump();
            parts.push(self.prod()?);
        }
        Ok(Term::cat(parts))
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let start = self.span().start;
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let rhs = self.factor()?;
            let span = SourceSpan::new(start, self.prev_end());
            acc = acc.mul(&rhs).map_err(|e| term_error(e, span))?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        let start = self.span().start;
        let atom = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(atom);
        }
        self.bump();
        let (tok, exp_span) = self.bump();
        let span = SourceSpan::new(start, exp_span.end);
        match tok {
            Tok::Nat(0) => Err(semantic("exponent must be at least 1", exp_span)),
            Tok::Nat(k) => {
                if k > 4096 {
                    return Err(semantic("exponent too large", exp_span));
                }
                let mut acc = atom.clone();
                for _ in 1..k {
                    acc = acc.mul(&atom).map_err(|e| term_error(e, span))?;
                }
                Ok(acc)
            }
            Tok::W => match atom.as_power() {
                Some((dir, 1)) => Ok(Term::Pow(dir)),
                _ => Err(semantic("the exponent 'w' is only allowed on w or w*", span)),
            },
            other => Err(syntax(
                format!("expected a number or 'w' after '^', found {}", other.describe()),
                exp_span,
            )),
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let (tok, span) = self.bump();
        let base = match tok {
            Tok::W => Term::omega(),
            Tok::Z => Term::zeta(),
            Tok::Nat(k) => Term::Fin(k),
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                t
            }
            Tok::Rev => {
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                return Ok(t.reverse());
            }
            Tok::Sum(dir) => return self.sum(dir, span),
            other => return Err(syntax(format!("expected a term, found {}", other.describe()), span)),
        };
        if *self.peek() == Tok::Star {
            self.bump();
            Ok(base.reverse())
        } else {
            Ok(base)
        }
    }

    fn sum(&mut self, dir: Direction, kw: SourceSpan) -> Result<Term, ParseError> {
        self.expect(Tok::LBracket)?;
        let prefix = self.blocklist(&[Tok::Semi])?;
        self.expect(Tok::Semi)?;
        let period_start = self.span().start;
        let period = self.blocklist(&[Tok::RBracket])?;
        let close = self.expect(Tok::RBracket)?;
        let whole = SourceSpan::new(kw.start, close.end);
        if period.is_empty() {
            return Err(semantic(
                "periodic sum needs a nonempty period",
                SourceSpan::new(period_start, close.start.max(period_start)),
            ));
        }
        if period.iter().all(Term::is_empty_term) {
            return Err(semantic("period denotes the empty order", whole));
        }
        Ok(Term::rep_sum(dir, prefix, period))
    }

    fn blocklist(&mut self, terminators: &[Tok]) -> Result<Vec<Term>, ParseError> {
        let mut out = Vec::new();
        if terminators.contains(self.peek()) {
            return Ok(out);
        }
        out.push(self.term()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.term()?);
        }
        Ok(out)
    }
}

fn term_error(e: TermError, span: SourceSpan) -> ParseError {
    semantic(e.to_string(), span)
}

/// Parses the textual form into a fully expanded [`Term`].
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(format!("unexpected {}", p.peek().describe()), p.span()));
    }
    Ok(t)
}

/// Canonical text for a term; `parse_term(&print_term(t)) == t` for valid
/// terms.
pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(t, &mut s);
    s
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Cat(parts) => {
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                write_prod(p, out);
            }
        }
        other => write_prod(other, out),
    }
}

fn star(dir: Direction) -> &'static str {
    match dir {
        Direction::Forward => "w",
        Direction::Reverse => "w*",
    }
}

fn write_run(dir: Direction, k: u32, out: &mut String) {
    out.push_str(star(dir));
    if k > 1 {
        out.push('^');
        out.push_str(&k.to_string());
    }
}

fn write_prod(t: &Term, out: &mut String) {
    match t {
        Term::Prod(..) => {
            let mut runs: Vec<(Direction, u32)> = Vec::new();
            let mut base = t;
            while let Term::Prod(b, d) = base {
                match runs.last_mut() {
                    Some((rd, k)) if rd == d => *k += 1,
                    _ => runs.push((*d, 1)),
                }
                base = b;
            }
            runs.reverse();
            let mut runs = runs.into_iter();
            if *base == Term::ONE {
                let (d, k) = runs.next().unwrap();
                write_run(d, k, out);
            } else {
                write_operand(base, out);
            }
            for (d, k) in runs {
                out.push('.');
                write_run(d, k, out);
            }
        }
        other => write_operand(other, out),
    }
}

fn write_operand(t: &Term, out: &mut String) {
    match t {
        Term::Fin(k) => out.push_str(&k.to_string()),
        Term::Pow(d) => {
            out.push_str(star(*d));
            out.push_str("^w");
        }
        Term::Cat(_) => {
            out.push('(');
            write_term(t, out);
            out.push(')');
        }
        Term::Prod(..) => write_prod(t, out),
        Term::RepSum { index, prefix, period } => {
            out.push_str(match index {
                Direction::Forward => "sumw[",
                Direction::Reverse => "sumw*[",
            });
            write_list(prefix, out);
            out.push_str("; ");
            write_list(period, out);
            out.push(']');
        }
    }
}

fn write_list(list: &[Term], out: &mut String) {
    for (i, t) in list.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(t, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_powers() {
        let t = parse_term("w^2 . w*").unwrap();
        let expected = Term::prod(
            Term::prod(Term::prod(Term::ONE, Direction::Forward), Direction::Forward),
            Direction::Reverse,
        );
        assert_eq!(t, expected);
        assert_eq!(print_term(&t), "w^2.w*");
    }

    #[test]
    fn zeta_expands() {
        assert_eq!(
            parse_term("z").unwrap(),
            Term::Cat(vec![Term::omega_star(), Term::omega()])
        );
    }

    #[test]
    fn sum_with_empty_prefix() {
        let t = parse_term("sumw[; w* + w]").unwrap();
        assert_eq!(
            t,
            Term::RepSum {
                index: Direction::Forward,
                prefix: vec![],
                period: vec![Term::zeta()],
            }
        );
        assert_eq!(print_term(&t), "sumw[; w* + w]");
    }

    #[test]
    fn omega_prints_as_w() {
        assert_eq!(print_term(&Term::omega()), "w");
        assert_eq!(print_term(&Term::pow(Direction::Reverse)), "w*^w");
    }

    #[test]
    fn finite_multipliers_are_expanded() {
        assert_eq!(parse_term("2.3").unwrap(), Term::Fin(6));
        assert_eq!(parse_term("w.2").unwrap(), parse_term("w + w").unwrap());
        assert_eq!(parse_term("2^3").unwrap(), Term::Fin(8));
        assert_eq!(print_term(&parse_term("3.w").unwrap()), "3.w");
    }

    #[test]
    fn reversal_sugar() {
        assert_eq!(parse_term("rev(w + 1)").unwrap(), parse_term("1 + w*").unwrap());
        assert_eq!(parse_term("(w.w*)*").unwrap(), parse_term("w*.w").unwrap());
        assert_eq!(parse_term("w*^w").unwrap(), Term::Pow(Direction::Reverse));
    }

    #[test]
    fn nested_products_print_back() {
        for src in [
            "(w + 1).w^2.w*",
            "w^w.w*",
            "sumw*[1, w; w^2, w*].w",
            "w*^3.w.w*^2",
            "2.w*",
            "(sumw[; 1]).w",
            "0",
        ] {
            let t = parse_term(src).unwrap();
            assert_eq!(parse_term(&print_term(&t)).unwrap(), t, "{src}");
        }
    }

    #[test]
    fn comments_and_whitespace() {
        let t = parse_term("w  +\n  1 # trailing\n").unwrap();
        assert_eq!(t, Term::Cat(vec![Term::omega(), Term::ONE]));
    }

    #[test]
    fn errors_carry_spans() {
        let src = "w + ^";
        let e = parse_term(src).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.span, SourceSpan { start: 4, end: 5 });

        let e = parse_term("w^0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!(e.span, SourceSpan { start: 2, end: 3 });

        let e = parse_term("sumw[1;]").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert!(e.span.end <= 8);

        let e = parse_term("z^w").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);

        let e = parse_term("(w + 1").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 6, end: 6 });

        assert!(parse_term("w.w^w").is_err());
        assert!(parse_term("q").is_err());
    }
}
