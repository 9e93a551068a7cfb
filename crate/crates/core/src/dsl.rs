//! Line-oriented system description language.
//!
//! ```text
//! kind differential
//! operators x t
//! parameter a
//! unknowns u
//! relation t*u - a * x^2 * u
//! ```
//!
//! A relation is a sum of terms; each term multiplies coefficient factors,
//! operator powers `x^k` and exactly one unknown. `lhs = rhs` stands for
//! `lhs - rhs`. `#` starts a comment.

use std::collections::HashSet;

use crate::coeff::{parse_coefficient_tokens, parse_exponent, Coefficient};
use crate::inversive::{LaurentElement, LaurentTerm};
use crate::lexer::{tokenize, Cursor, ParseError, ParseErrorKind, Token, TokenKind};
use crate::operator::{Presentation, SystemKind};

/// Where a relation came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDocument {
    pub presentation: Presentation,
    /// One entry per relation.
    pub relation_spans: Vec<SourceSpan>,
}

#[derive(Default)]
struct Header {
    kind: Option<SystemKind>,
    operators: Option<Vec<String>>,
    parameter: Option<Option<String>>,
    unknowns: Option<Vec<String>>,
}

pub fn parse_system(text: &str) -> Result<SystemDocument, ParseError> {
    let mut header = Header::default();
    let mut relations = Vec::new();
    let mut spans = Vec::new();
    let mut names: HashSet<String> = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let (word, rest) = match trimmed.find(char::is_whitespace) {
            Some(p) => (&trimmed[..p], &trimmed[p..]),
            None => (trimmed, ""),
        };
        let word_col = line[..indent].chars().count() + 1;
        let rest_col = word_col + word.chars().count();
        let tokens = tokenize(rest, line_no, rest_col)?;
        let mut c = Cursor::new(&tokens);
        match word {
            "kind" => {
                if header.kind.is_some() {
                    return Err(ParseError::new(line_no, word_col, ParseErrorKind::Duplicate("kind".into())));
                }
                let tok = c.next();
                let TokenKind::Ident(k) = &tok.kind else {
                    return Err(ParseError::at(tok, ParseErrorKind::Unexpected {
                        found: tok.kind.to_string(),
                        expected: "a system kind".into(),
                    }));
                };
                let kind = SystemKind::parse(k).ok_or_else(|| ParseError::at(tok, ParseErrorKind::UnknownKind(k.clone())))?;
                header.kind = Some(kind);
                expect_end(&c)?;
            }
            "operators" | "unknowns" => {
                let slot = if word == "operators" { &mut header.operators } else { &mut header.unknowns };
                if slot.is_some() {
                    return Err(ParseError::new(line_no, word_col, ParseErrorKind::Duplicate(word.into())));
                }
                let list = identifiers(&mut c, &mut names)?;
                if word == "unknowns" && list.is_empty() {
                    return Err(ParseError::at(c.peek(), ParseErrorKind::Invalid("at least one unknown is required".into())));
                }
                *slot = Some(list);
            }
            "parameter" => {
                if header.parameter.is_some() {
                    return Err(ParseError::new(line_no, word_col, ParseErrorKind::MultipleParameters));
                }
                let first = c.peek();
                let list = identifiers(&mut c, &mut names)?;
                if list.len() > 1 {
                    return Err(ParseError::at(first, ParseErrorKind::MultipleParameters));
                }
                header.parameter = Some(list.into_iter().next());
            }
            "relation" => {
                let kind = header.kind.ok_or(ParseError::new(line_no, word_col, ParseErrorKind::MissingDeclaration("kind")))?;
                let ops = header
                    .operators
                    .as_ref()
                    .ok_or(ParseError::new(line_no, word_col, ParseErrorKind::MissingDeclaration("operators")))?;
                let unknowns = header
                    .unknowns
                    .as_ref()
                    .ok_or(ParseError::new(line_no, word_col, ParseErrorKind::MissingDeclaration("unknowns")))?;
                let param = header.parameter.clone().flatten();
                let ctx = RelationParser { kind, operators: ops, unknowns, parameter: param.as_deref() };
                relations.push(ctx.equation(&mut c)?);
                spans.push(SourceSpan { line: line_no, column: word_col });
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    word_col,
                    ParseErrorKind::UnknownDirective(other.to_string()),
                ))
            }
        }
    }
    let kind = header.kind.ok_or(ParseError::new(1, 1, ParseErrorKind::MissingDeclaration("kind")))?;
    let operators = header.operators.ok_or(ParseError::new(1, 1, ParseErrorKind::MissingDeclaration("operators")))?;
    let unknowns = header.unknowns.ok_or(ParseError::new(1, 1, ParseErrorKind::MissingDeclaration("unknowns")))?;
    Ok(SystemDocument {
        presentation: Presentation {
            kind,
            operator_names: operators,
            parameter: header.parameter.flatten(),
            generator_names: unknowns,
            relations,
        },
        relation_spans: spans,
    })
}

fn expect_end(c: &Cursor<'_>) -> Result<(), ParseError> {
    if c.at_end() {
        Ok(())
    } else {
        Err(c.unexpected("end of line"))
    }
}

fn identifiers(c: &mut Cursor<'_>, seen: &mut HashSet<String>) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    while !c.at_end() {
        let tok = c.next();
        let TokenKind::Ident(name) = &tok.kind else {
            return Err(ParseError::at(tok, ParseErrorKind::Unexpected {
                found: tok.kind.to_string(),
                expected: "an identifier".into(),
            }));
        };
        if !seen.insert(name.clone()) {
            return Err(ParseError::at(tok, ParseErrorKind::Duplicate(name.clone())));
        }
        out.push(name.clone());
    }
    Ok(out)
}

struct RelationParser<'a> {
    kind: SystemKind,
    operators: &'a [String],
    unknowns: &'a [String],
    parameter: Option<&'a str>,
}

impl RelationParser<'_> {
    fn equation(&self, c: &mut Cursor<'_>) -> Result<LaurentElement, ParseError> {
        let lhs = self.sum(c)?;
        let result = if c.eat(&TokenKind::Equals) {
            let rhs = self.sum(c)?;
            lhs.add(&rhs.scale(&Coefficient::from_integer(-1)))
        } else {
            lhs
        };
        expect_end(c)?;
        Ok(result)
    }

    fn sum(&self, c: &mut Cursor<'_>) -> Result<LaurentElement, ParseError> {
        let mut acc = LaurentElement::zero();
        let mut negative = c.eat(&TokenKind::Minus);
        if !negative {
            c.eat(&TokenKind::Plus);
        }
        loop {
            let (term, coef) = self.term(c)?;
            acc.add_term(term, if negative { -coef } else { coef });
            if c.eat(&TokenKind::Plus) {
                negative = false;
            } else if c.eat(&TokenKind::Minus) {
                negative = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&self, c: &mut Cursor<'_>) -> Result<(LaurentTerm, Coefficient), ParseError> {
        let start = c.peek();
        let mut coef = Coefficient::one();
        let mut exps = vec![0i32; self.operators.len()];
        let mut unknown: Option<usize> = None;
        let mut divide: Option<&Token> = None;
        loop {
            let tok = c.peek();
            let factor_coef = match &tok.kind {
                TokenKind::Ident(name) if self.parameter != Some(name.as_str()) => {
                    if divide.is_some() {
                        return Err(ParseError::at(tok, ParseErrorKind::Invalid(format!("cannot divide by `{name}`"))));
                    }
                    c.next();
                    if let Some(i) = self.operators.iter().position(|o| o == name) {
                        let k = if c.eat(&TokenKind::Caret) { parse_exponent(c)? } else { 1 };
                        if k < 0 && self.kind != SystemKind::Inversive {
                            return Err(ParseError::at(tok, ParseErrorKind::NegativeExponent(name.clone())));
                        }
                        let total = i64::from(exps[i]) + k;
                        exps[i] = i32::try_from(total).map_err(|_| ParseError::at(tok, ParseErrorKind::ExponentRange))?;
                    } else if let Some(j) = self.unknowns.iter().position(|u| u == name) {
                        if unknown.replace(j).is_some() {
                            return Err(ParseError::at(tok, ParseErrorKind::UnknownCount));
                        }
                    } else if continues_product(c) {
                        return Err(ParseError::at(tok, ParseErrorKind::UndeclaredOperator(name.clone())));
                    } else {
                        return Err(ParseError::at(tok, ParseErrorKind::UndeclaredIdentifier(name.clone())));
                    }
                    None
                }
                TokenKind::Int(_) | TokenKind::Ident(_) | TokenKind::LParen => Some(self.coefficient_factor(c)?),
                _ => return Err(c.unexpected("a coefficient, operator or unknown")),
            };
            if let Some(f) = factor_coef {
                if let Some(slash) = divide.take() {
                    if f.is_zero() {
                        return Err(ParseError::at(slash, ParseErrorKind::DivisionByZero));
                    }
                    coef = &coef / &f;
                } else {
                    coef = &coef * &f;
                }
            }
            if c.eat(&TokenKind::Star) {
                continue;
            }
            if matches!(c.peek().kind, TokenKind::Slash) {
                divide = Some(c.next());
                continue;
            }
            break;
        }
        let generator = unknown.ok_or_else(|| ParseError::at(start, ParseErrorKind::UnknownCount))?;
        Ok((LaurentTerm::new(generator, exps), coef))
    }

    /// A single coefficient factor: number, parameter or parenthesized
    /// expression, with an optional power.
    fn coefficient_factor(&self, c: &mut Cursor<'_>) -> Result<Coefficient, ParseError> {
        let tok = c.next();
        let base = match &tok.kind {
            TokenKind::Int(n) => Coefficient::Rational(crate::coeff::Rational::from_integer(num_bigint::BigInt::from(n.clone()))),
            TokenKind::Ident(name) => Coefficient::parameter(name),
            TokenKind::LParen => {
                let inner = parse_coefficient_tokens(c, self.parameter)?;
                c.expect(&TokenKind::RParen)?;
                inner
            }
            _ => unreachable!("checked by the caller"),
        };
        if c.eat(&TokenKind::Caret) {
            let at = c.peek();
            let k = parse_exponent(c)?;
            let k = u32::try_from(k)
                .map_err(|_| ParseError::at(at, ParseErrorKind::Invalid("coefficient powers must be nonnegative".into())))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }
}

/// Is the token after the current factor (and its optional power) a `*`?
fn continues_product(c: &Cursor<'_>) -> bool {
    let mut n = 0;
    if matches!(c.peek().kind, TokenKind::Caret) {
        n += 1;
        if matches!(c.peek_nth(n).kind, TokenKind::LParen) {
            n += 1;
        }
        if matches!(c.peek_nth(n).kind, TokenKind::Minus) {
            n += 1;
        }
        n += 1;
        if matches!(c.peek_nth(n).kind, TokenKind::RParen) {
            n += 1;
        }
    }
    matches!(c.peek_nth(n).kind, TokenKind::Star)
}

/// Canonical text of a presentation; `parse_system` reads it back to the
/// same presentation.
pub fn render_system(p: &Presentation) -> String {
    let mut out = format!("kind {}\noperators", p.kind);
    for o in &p.operator_names {
        out.push(' ');
        out.push_str(o);
    }
    out.push('\n');
    if let Some(a) = &p.parameter {
        out.push_str(&format!("parameter {a}\n"));
    }
    out.push_str(&format!("unknowns {}\n", p.generator_names.join(" ")));
    for r in &p.relations {
        out.push_str(&format!("relation {}\n", r.render(&p.operator_names, &p.generator_names)));
    }
    out
}
