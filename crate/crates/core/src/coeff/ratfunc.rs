use std::fmt;
use std::sync::Arc;

use super::{Rational, UniPoly};

/// Element of Q(a): `numerator / denominator` in one named parameter.
///
/// Always stored reduced: `gcd(numerator, denominator) = 1` and the
/// denominator is monic, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    parameter: Arc<str>,
    numerator: UniPoly,
    denominator: UniPoly,
}

impl RationalFunction {
    /// Panics if `denominator` is zero.
    pub fn new(parameter: impl Into<Arc<str>>, numerator: UniPoly, denominator: UniPoly) -> Self {
        assert!(!denominator.is_zero(), "rational function with zero denominator");
        let parameter = parameter.into();
        if numerator.is_zero() {
            return Self { parameter, numerator, denominator: UniPoly::one() };
        }
        let g = numerator.gcd(&denominator);
        let (mut num, _) = numerator.div_rem(&g);
        let (mut den, _) = denominator.div_rem(&g);
        let lead = den.lead();
        if !lead.is_one() {
            let inv = lead.recip().expect("nonzero lead");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { parameter, numerator: num, denominator: den }
    }

    pub fn from_rational(parameter: impl Into<Arc<str>>, value: Rational) -> Self {
        Self::new(parameter, UniPoly::constant(value), UniPoly::one())
    }

    /// The parameter itself, `a`.
    pub fn parameter_value(parameter: impl Into<Arc<str>>) -> Self {
        Self::new(parameter, UniPoly::variable(), UniPoly::one())
    }

    pub fn parameter(&self) -> &str {
        &self.parameter
    }

    pub(crate) fn parameter_arc(&self) -> &Arc<str> {
        &self.parameter
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The rational value when both numerator and denominator are constant.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.numerator.is_constant() && self.denominator.is_constant()).then(|| self.numerator.coeff(0))
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        let num = &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator);
        let den = &self.denominator * &other.denominator;
        Self::new(self.parameter.clone(), num, den)
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.parameter.clone(),
            &self.numerator * &other.numerator,
            &self.denominator * &other.denominator,
        )
    }

    pub(crate) fn neg(&self) -> Self {
        Self {
            parameter: self.parameter.clone(),
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }

    /// `None` for zero.
    pub(crate) fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.parameter.clone(), self.denominator.clone(), self.numerator.clone()))
    }

    /// `None` at a pole.
    pub fn eval(&self, value: &Rational) -> Option<Rational> {
        let den = self.denominator.eval(value);
        if den.is_zero() {
            return None;
        }
        Some(self.numerator.eval(value) / den)
    }

    /// Renders as `numerator` or `numerator/denominator`, parenthesizing
    /// multi-term parts, e.g. `(2*a+2)/a`.
    pub fn render(&self) -> String {
        let p = &*self.parameter;
        let wrap = |poly: &UniPoly| {
            let s = poly.render(p);
            if poly.term_count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.denominator == UniPoly::one() {
            return self.numerator.render(p);
        }
        let num = wrap(&self.numerator);
        let den = if self.denominator.term_count() > 1 || self.denominator.lead() != Rational::one() {
            format!("({})", self.denominator.render(p))
        } else {
            self.denominator.render(p)
        };
        format!("{num}/{den}")
    }
}

impl PartialEq<Rational> for RationalFunction {
    fn eq(&self, other: &Rational) -> bool {
        self.as_constant().as_ref() == Some(other)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
