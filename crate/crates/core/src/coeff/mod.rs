//! Exact coefficient field: Q and Q(a) for a single named parameter `a`.
//!
//! Coefficients are constants of every operator, so the operator ring acts
//! on them trivially and module arithmetic never differentiates or shifts a
//! coefficient.

mod parse;
mod poly;
mod ratfunc;
mod rational;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub(crate) use parse::parse_exponent;
pub use parse::{parse_coefficient, parse_coefficient_tokens, parse_polynomial};
pub use poly::UniPoly;
pub use ratfunc::RationalFunction;
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("parameter mismatch: `{0}` vs `{1}`")]
    ParameterMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at {0}")]
    Pole(Rational),
}

/// A field element: either a plain rational or a rational function.
///
/// Values are kept canonical: a rational function whose numerator and
/// denominator are both constant is always stored as `Rational`, so
/// derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Rational(Rational),
    Function(RationalFunction),
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::zero()
    }
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Coefficient::Rational(Rational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Coefficient::Rational(Rational::from(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Coefficient::Rational(Rational::new(n, d))
    }

    /// The parameter `name` as a coefficient.
    pub fn parameter(name: &str) -> Self {
        Coefficient::Function(RationalFunction::parameter_value(name))
    }

    pub fn from_function(f: RationalFunction) -> Self {
        match f.as_constant() {
            Some(c) => Coefficient::Rational(c),
            None => Coefficient::Function(f),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_zero(),
            Coefficient::Function(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coefficient::Rational(r) if r.is_one())
    }

    /// Name of the parameter this value depends on, if any.
    pub fn parameter_name(&self) -> Option<&str> {
        match self {
            Coefficient::Rational(_) => None,
            Coefficient::Function(f) => Some(f.parameter()),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coefficient::Rational(r) => Some(r),
            Coefficient::Function(_) => None,
        }
    }

    fn lift_pair<'a>(
        x: &'a Coefficient,
        y: &'a Coefficient,
    ) -> Result<(RationalFunction, RationalFunction), CoeffError> {
        match (x, y) {
            (Coefficient::Function(f), Coefficient::Function(g)) => {
                if f.parameter() != g.parameter() {
                    return Err(CoeffError::ParameterMismatch(f.parameter().into(), g.parameter().into()));
                }
                Ok((f.clone(), g.clone()))
            }
            (Coefficient::Function(f), Coefficient::Rational(r)) => {
                Ok((f.clone(), RationalFunction::from_rational(f.parameter_arc().clone(), r.clone())))
            }
            (Coefficient::Rational(r), Coefficient::Function(g)) => {
                Ok((RationalFunction::from_rational(g.parameter_arc().clone(), r.clone()), g.clone()))
            }
            (Coefficient::Rational(_), Coefficient::Rational(_)) => unreachable!("handled by fast path"),
        }
    }

    pub fn try_add(&self, other: &Coefficient) -> Result<Coefficient, CoeffError> {
        if let (Coefficient::Rational(a), Coefficient::Rational(b)) = (self, other) {
            return Ok(Coefficient::Rational(a + b));
        }
        let (f, g) = Self::lift_pair(self, other)?;
        Ok(Coefficient::from_function(f.add(&g)))
    }

    pub fn try_sub(&self, other: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Coefficient) -> Result<Coefficient, CoeffError> {
        if let (Coefficient::Rational(a), Coefficient::Rational(b)) = (self, other) {
            return Ok(Coefficient::Rational(a * b));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Coefficient::zero());
        }
        let (f, g) = Self::lift_pair(self, other)?;
        Ok(Coefficient::from_function(f.mul(&g)))
    }

    pub fn try_div(&self, other: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.try_mul(&other.inv()?)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Coefficient, CoeffError> {
        match self {
            Coefficient::Rational(r) => r.recip().map(Coefficient::Rational).ok_or(CoeffError::DivisionByZero),
            Coefficient::Function(f) => {
                f.recip().map(Coefficient::from_function).ok_or(CoeffError::DivisionByZero)
            }
        }
    }

    pub fn pow(&self, exp: u32) -> Coefficient {
        (0..exp).fold(Coefficient::one(), |acc, _| &acc * self)
    }

    /// Substitutes `value` for the parameter.
    pub fn eval(&self, value: &Rational) -> Result<Rational, CoeffError> {
        match self {
            Coefficient::Rational(r) => Ok(r.clone()),
            Coefficient::Function(f) => f.eval(value).ok_or_else(|| CoeffError::Pole(value.clone())),
        }
    }

    /// True when the rendered form needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        match self {
            Coefficient::Rational(_) => false,
            Coefficient::Function(f) => {
                f.denominator() != &UniPoly::one() || f.numerator().term_count() > 1
            }
        }
    }

    /// Sign used when rendering sums: negative rationals, and rational
    /// functions whose numerator leads with a negative coefficient.
    pub fn is_negative(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_negative(),
            Coefficient::Function(f) => f.numerator().lead().is_negative(),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(r) => write!(f, "{r}"),
            Coefficient::Function(g) => f.write_str(&g.render()),
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient::Rational(r)
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_integer(n)
    }
}

// Operator impls panic on a parameter mismatch. Values inside one
// presentation share a single parameter, which the DSL enforces.
impl<'a> Add for &'a Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &'a Coefficient) -> Coefficient {
        self.try_add(rhs).expect("coefficient addition")
    }
}

impl<'a> Sub for &'a Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &'a Coefficient) -> Coefficient {
        self.try_sub(rhs).expect("coefficient subtraction")
    }
}

impl<'a> Mul for &'a Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &'a Coefficient) -> Coefficient {
        self.try_mul(rhs).expect("coefficient multiplication")
    }
}

impl<'a> Div for &'a Coefficient {
    type Output = Coefficient;
    fn div(self, rhs: &'a Coefficient) -> Coefficient {
        self.try_div(rhs).expect("coefficient division")
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Rational(r) => Coefficient::Rational(-r),
            Coefficient::Function(f) => Coefficient::Function(f.neg()),
        }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coefficient {
        parse_coefficient(s, Some("a")).unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!((&c("1/a") + &c("1")).to_string(), "(a+1)/a");
        assert_eq!(&c("2*a") + &c("-2*a"), Coefficient::zero());
        let x = c("1 + 1/a");
        assert_eq!((&x + &x).to_string(), "(2*a+2)/a");
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&c("1/a") * &c("a"), Coefficient::one());
        assert_eq!(&c("-a") * &c("-1/a"), Coefficient::one());
        assert_eq!(&c("(a+1)/a") * &c("a/(a+1)"), Coefficient::one());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(c("a").inv().unwrap().to_string(), "1/a");
        assert_eq!(c("-(1+a)").inv().unwrap().to_string(), "-1/(a+1)");
        assert_eq!(c("1/2").inv().unwrap(), Coefficient::from_integer(2));
        assert_eq!(Coefficient::zero().inv(), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(c("(a+1)/a").eval(&Rational::from(2)).unwrap(), Rational::new(3, 2));
        assert_eq!(c("5").eval(&Rational::from(7)).unwrap(), Rational::from(5));
        assert_eq!(c("1/a").eval(&Rational::zero()), Err(CoeffError::Pole(Rational::zero())));
    }

    #[test]
    fn parameter_mismatch_is_an_error() {
        let a = Coefficient::parameter("a");
        let b = Coefficient::parameter("b");
        assert!(matches!(a.try_add(&b), Err(CoeffError::ParameterMismatch(_, _))));
        assert!(matches!(a.try_mul(&b), Err(CoeffError::ParameterMismatch(_, _))));
        // constants mix freely with either parameter
        assert!(a.try_add(&Coefficient::from_integer(3)).is_ok());
    }

    #[test]
    fn constant_functions_collapse_to_rationals() {
        let f = RationalFunction::from_rational("a", Rational::new(3, 4));
        assert_eq!(f, Rational::new(3, 4));
        assert_eq!(Coefficient::from_function(f), Coefficient::ratio(3, 4));
        assert_eq!(&c("(a+1)/a") - &c("1/a"), Coefficient::one());
    }

    #[test]
    fn rendering_reparses() {
        for s in ["(2*a+2)/a", "-7/2", "-1/(a+1)", "1/2*a-3", "(a^2+1/3)/(a-2)", "-a/(a+1)", "2/(3*a)"] {
            let v = c(s);
            assert_eq!(c(&v.to_string()), v, "{s} -> {v}");
        }
        assert_eq!(c("2/(3*a)").to_string(), "2/3/a");
    }
}
