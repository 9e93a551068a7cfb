//! Coefficient literal syntax: integers, `p/q`, the declared parameter,
//! parenthesized `+ - * /` expressions and nonnegative integer powers.

use num_traits::ToPrimitive;

use super::{Coefficient, UniPoly};
use crate::lexer::{tokenize, Cursor, ParseError, ParseErrorKind, TokenKind};

pub fn parse_coefficient(text: &str, parameter: Option<&str>) -> Result<Coefficient, ParseError> {
    let tokens = tokenize(text, 1, 1)?;
    let mut cursor = Cursor::new(&tokens);
    let value = parse_coefficient_tokens(&mut cursor, parameter)?;
    if !cursor.at_end() {
        return Err(cursor.unexpected("end of expression"));
    }
    Ok(value)
}

/// Parses a polynomial in `var` with rational coefficients, such as a
/// rendered dimension polynomial `1/4*t^4+19/6*t^3+12`.
pub fn parse_polynomial(text: &str, var: &str) -> Result<UniPoly, ParseError> {
    match parse_coefficient(text, Some(var))? {
        Coefficient::Rational(r) => Ok(UniPoly::constant(r)),
        Coefficient::Function(f) if f.denominator() == &UniPoly::one() => Ok(f.numerator().clone()),
        Coefficient::Function(_) => Err(ParseError::new(
            1,
            1,
            ParseErrorKind::Invalid(format!("`{text}` is not a polynomial in {var}")),
        )),
    }
}

/// Parses a full coefficient expression starting at the cursor and stops
/// before the first token that cannot continue it.
pub fn parse_coefficient_tokens(cursor: &mut Cursor<'_>, parameter: Option<&str>) -> Result<Coefficient, ParseError> {
    ExprParser { parameter }.expr(cursor)
}

struct ExprParser<'p> {
    parameter: Option<&'p str>,
}

impl ExprParser<'_> {
    fn expr(&self, c: &mut Cursor<'_>) -> Result<Coefficient, ParseError> {
        let mut acc = self.term(c)?;
        loop {
            if c.eat(&TokenKind::Plus) {
                let rhs = self.term(c)?;
                acc = &acc + &rhs;
            } else if c.eat(&TokenKind::Minus) {
                let rhs = self.term(c)?;
                acc = &acc - &rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&self, c: &mut Cursor<'_>) -> Result<Coefficient, ParseError> {
        let mut acc = self.unary(c)?;
        loop {
            if c.eat(&TokenKind::Star) {
                let rhs = self.unary(c)?;
                acc = &acc * &rhs;
            } else if matches!(c.peek().kind, TokenKind::Slash) {
                let tok = c.next();
                let rhs = self.unary(c)?;
                if rhs.is_zero() {
                    return Err(ParseError::at(tok, ParseErrorKind::DivisionByZero));
                }
                acc = &acc / &rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&self, c: &mut Cursor<'_>) -> Result<Coefficient, ParseError> {
        if c.eat(&TokenKind::Minus) {
            return Ok(-self.unary(c)?);
        }
        if c.eat(&TokenKind::Plus) {
            return self.unary(c);
        }
        self.power(c)
    }

    fn power(&self, c: &mut Cursor<'_>) -> Result<Coefficient, ParseError> {
        let base = self.atom(c)?;
        if c.eat(&TokenKind::Caret) {
            let exp = parse_exponent(c)?;
            let exp = u32::try_from(exp).map_err(|_| {
                ParseError::at(c.peek(), ParseErrorKind::Invalid("coefficient powers must be nonnegative".into()))
            })?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&self, c: &mut Cursor<'_>) -> Result<Coefficient, ParseError> {
        let tok = c.peek();
        match &tok.kind {
            TokenKind::Int(n) => {
                c.next();
                Ok(Coefficient::Rational(super::Rational::from_integer(num_bigint::BigInt::from(n.clone()))))
            }
            TokenKind::Ident(name) if Some(name.as_str()) == self.parameter => {
                c.next();
                Ok(Coefficient::parameter(name))
            }
            TokenKind::Ident(name) => Err(ParseError::at(tok, ParseErrorKind::UndeclaredIdentifier(name.clone()))),
            TokenKind::LParen => {
                c.next();
                let inner = self.expr(c)?;
                c.expect(&TokenKind::RParen)?;
                Ok(inner)
            }
            _ => Err(c.unexpected("a number, the parameter or `(`")),
        }
    }
}

/// Parses a (possibly negative) integer exponent after `^`; `x^-1` and
/// `x^(-1)` are both accepted.
pub(crate) fn parse_exponent(c: &mut Cursor<'_>) -> Result<i64, ParseError> {
    let parens = c.eat(&TokenKind::LParen);
    let negative = c.eat(&TokenKind::Minus);
    let tok = c.peek();
    let TokenKind::Int(n) = &tok.kind else {
        return Err(c.unexpected("an integer exponent"));
    };
    c.next();
    let value = n.to_i64().filter(|v| *v <= i64::from(u16::MAX)).ok_or_else(|| ParseError::at(tok, ParseErrorKind::ExponentRange))?;
    if parens {
        c.expect(&TokenKind::RParen)?;
    }
    Ok(if negative { -value } else { value })
}
