//! Quotients of canonical expressions.
//!
//! The fraction field over [`Expr`] is where the classifier's linear algebra
//! runs. Fractions are deliberately not reduced by gcd; equality and the zero
//! test go through cross-multiplication, which is exact because the underlying
//! ring has a canonical zero test.

use std::fmt;

use crate::expr::{Expr, Rational};

#[derive(Debug, Clone)]
pub struct FracExpr {
    num: Expr,
    den: Expr,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FracError {
    #[error("division by zero expression")]
    DivisionByZero,
}

impl FracExpr {
    pub fn new(num: Expr, den: Expr) -> Result<Self, FracError> {
        if den.is_zero() {
            return Err(FracError::DivisionByZero);
        }
        Ok(FracExpr { num, den })
    }

    pub fn zero() -> Self {
        FracExpr {
            num: Expr::zero(),
            den: Expr::one(),
        }
    }

    pub fn one() -> Self {
        FracExpr {
            num: Expr::one(),
            den: Expr::one(),
        }
    }

    pub fn from_expr(e: Expr) -> Self {
        FracExpr {
            num: e,
            den: Expr::one(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        FracExpr::from_expr(Expr::from_rational(r))
    }

    pub fn num(&self) -> &Expr {
        &self.num
    }

    pub fn den(&self) -> &Expr {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &FracExpr) -> FracExpr {
        FracExpr {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &FracExpr) -> FracExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FracExpr {
        FracExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &FracExpr) -> FracExpr {
        FracExpr {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn div(&self, other: &FracExpr) -> Result<FracExpr, FracError> {
        if other.is_zero() {
            return Err(FracError::DivisionByZero);
        }
        Ok(FracExpr {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        })
    }

    pub fn equals(&self, other: &FracExpr) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// The fraction as an exact rational constant, if it is one: `num = r·den`
    /// for some rational `r`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::from_integer(0.into()));
        }
        let (key_d, c_d) = self.den.leading()?;
        let c_n = self.num.terms().find(|(k, _)| *k == key_d).map(|(_, c)| c)?;
        let r = c_n / c_d;
        if self.num == self.den.scale(&r) {
            Some(r)
        } else {
            None
        }
    }
}

impl PartialEq for FracExpr {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for FracExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        // fold unit denominators (single term, no function factors) into the
        // numerator so plain values never print as quotients
        if self.den.num_terms() == 1 {
            let ((w, m), c) = self.den.terms().next().unwrap();
            if m.is_one() {
                let inv = Expr::term(
                    Rational::from_integer(1.into()) / c,
                    -w,
                    crate::expr::Monomial::one(),
                );
                return write!(f, "{}", self.num.mul(&inv));
            }
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    #[test]
    fn a_over_a_equals_one() {
        let a = Expr::func("a", 0);
        let f = FracExpr::new(a.clone(), a).unwrap();
        assert!(f.equals(&FracExpr::one()));
    }

    #[test]
    fn common_exponential_factor_cancels() {
        // (e^{2x3} b) / e^{2x3} == b / 1
        let num = Expr::exp_weight(2).mul(&Expr::func("b", 0));
        let f = FracExpr::new(num, Expr::exp_weight(2)).unwrap();
        assert!(f.equals(&FracExpr::from_expr(Expr::func("b", 0))));
    }

    #[test]
    fn zero_numerator_is_zero() {
        let den = Expr::func("b", 0)
            .scale(&rat(2, 1))
            .add(&Expr::func("b", 1));
        let f = FracExpr::new(Expr::zero(), den).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn division_by_zero_fraction_errors() {
        let err = FracExpr::one().div(&FracExpr::zero()).unwrap_err();
        assert_eq!(err, FracError::DivisionByZero);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(FracExpr::new(Expr::one(), Expr::zero()).is_err());
    }

    #[test]
    fn constant_detection() {
        let a = Expr::func("a", 0);
        // (3a) / (2a) = 3/2
        let f = FracExpr::new(a.scale(&rat(3, 1)), a.scale(&rat(2, 1))).unwrap();
        assert_eq!(f.as_rational(), Some(rat(3, 2)));
        // (a + 1) / a is not constant
        let g = FracExpr::new(a.add(&Expr::one()), a).unwrap();
        assert_eq!(g.as_rational(), None);
    }

    #[test]
    fn field_arithmetic() {
        let a = FracExpr::from_expr(Expr::func("a", 0));
        let half = FracExpr::from_rational(rat(1, 2));
        let s = a.add(&half).sub(&half);
        assert!(s.equals(&a));
        let p = a.mul(&half).div(&half).unwrap();
        assert!(p.equals(&a));
    }
}
