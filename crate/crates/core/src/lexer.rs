//! Tokenizer shared by the coefficient literal parser, the polynomial parser
//! and the system DSL.

use std::fmt;

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        Self { line, column, kind }
    }

    pub(crate) fn at(token: &Token, kind: ParseErrorKind) -> Self {
        Self::new(token.line, token.column, kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: String },
    #[error("undeclared operator `{0}`")]
    UndeclaredOperator(String),
    #[error("undeclared identifier `{0}`")]
    UndeclaredIdentifier(String),
    #[error("negative exponent on `{0}` is only allowed for kind inversive")]
    NegativeExponent(String),
    #[error("more than one parameter declared")]
    MultipleParameters,
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
    #[error("unknown directive `{0}` (expected `kind`, `operators`, `parameter`, `unknowns` or `relation`)")]
    UnknownDirective(String),
    #[error("missing `{0}` declaration")]
    MissingDeclaration(&'static str),
    #[error("unknown kind `{0}`, expected differential, difference or inversive")]
    UnknownKind(String),
    #[error("every term needs exactly one unknown")]
    UnknownCount,
    #[error("{0}")]
    Invalid(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent out of range")]
    ExponentRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Int(BigUint),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Equals,
    End,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Int(n) => write!(f, "integer `{n}`"),
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Slash => f.write_str("`/`"),
            TokenKind::Caret => f.write_str("`^`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Equals => f.write_str("`=`"),
            TokenKind::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

/// Tokenizes one line of text. `line` and `first_column` locate the slice
/// inside the enclosing document. The returned list always ends with `End`.
pub fn tokenize(text: &str, line: usize, first_column: usize) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = first_column + i;
        let single = match c {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '=' => Some(TokenKind::Equals),
            _ => None,
        };
        if let Some(kind) = single {
            tokens.push(Token { kind, line, column });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse::<BigUint>().expect("ascii digits");
            tokens.push(Token { kind: TokenKind::Int(value), line, column });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            tokens.push(Token { kind: TokenKind::Ident(ident), line, column });
        } else {
            return Err(ParseError::new(line, column, ParseErrorKind::UnexpectedChar(c)));
        }
    }
    tokens.push(Token { kind: TokenKind::End, line, column: first_column + chars.len() });
    Ok(tokens)
}

/// Cursor over a token slice.
#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(tokens: &'a [Token]) -> Self {
        debug_assert!(matches!(tokens.last().map(|t| &t.kind), Some(TokenKind::End)));
        Self { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &'a Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub fn peek_nth(&self, n: usize) -> &'a Token {
        &self.tokens[(self.pos + n).min(self.tokens.len() - 1)]
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> &'a Token {
        let t = self.peek();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind) -> Result<&'a Token, ParseError> {
        let t = self.peek();
        if &t.kind == kind {
            Ok(self.next())
        } else {
            Err(self.unexpected(&kind.to_string()))
        }
    }

    pub fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::at(
            t,
            ParseErrorKind::Unexpected { found: t.kind.to_string(), expected: expected.to_string() },
        )
    }

    pub fn at_end(&self) -> bool {
        matches!(self.peek().kind, TokenKind::End)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_relation() {
        let toks = tokenize("t*u - a * x^2 * u", 3, 10).unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.kind.clone()).collect();
        assert_eq!(kinds.len(), 12);
        assert_eq!(kinds[0], TokenKind::Ident("t".into()));
        assert_eq!(toks[0].column, 10);
        assert_eq!(toks[2].column, 12);
        assert_eq!(kinds[9], TokenKind::Star);
        assert_eq!(kinds[11], TokenKind::End);
    }

    #[test]
    fn reports_bad_character() {
        let err = tokenize("x $ u", 2, 1).unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 3);
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('$'));
    }
}
