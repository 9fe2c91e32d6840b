use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{AlgebraError, Namespace, Poly, Sym};

/// Quotient of two polynomials.
///
/// Normalization divides out the common monomial factor and rational content
/// and makes the leading denominator coefficient positive. No polynomial GCD
/// is taken, so two equal functions may have different representations;
/// equality is decided by cross multiplication.
#[derive(Debug, Clone)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<RatFn, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn zero() -> RatFn {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> RatFn {
        Self::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(num: Poly, den: Poly) -> RatFn {
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_monomial(&g).expect("common monomial divides"),
                den.div_monomial(&g).expect("common monomial divides"),
            )
        };
        let (cn, pn) = num.primitive_part();
        let (cd, pd) = den.primitive_part();
        let mut num = pn.scale(&(cn / cd));
        let mut den = pd;
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            num = -num;
            den = -den;
        }
        if den.is_one() {
            return RatFn { num, den };
        }
        if den.len() <= num.len() {
            if let Some(q) = num.div_exact(&den) {
                return RatFn { num: q, den: Poly::one() };
            }
        }
        RatFn { num, den }
    }

    /// Zero, or a quotient of S-positive polynomials.
    pub fn is_zero_or_s_positive(&self) -> bool {
        self.is_zero() || self.is_s_positive()
    }

    pub fn is_s_positive(&self) -> bool {
        self.num.is_s_positive() && self.den.is_s_positive()
    }

    pub fn eval(&self, assignment: &HashMap<Sym, BigRational>) -> Result<BigRational, AlgebraError> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(assignment)? / d)
    }

    pub fn recip(&self) -> Result<RatFn, AlgebraError> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn display<'a>(&'a self, ns: &'a Namespace) -> RatFnDisplay<'a> {
        RatFnDisplay { f: self, ns }
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFn {}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl Add<&RatFn> for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RatFn::normalized(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&RatFn> for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul<&RatFn> for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&RatFn> for &RatFn {
    type Output = Result<RatFn, AlgebraError>;
    fn div(self, rhs: &RatFn) -> Result<RatFn, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFn::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

pub struct RatFnDisplay<'a> {
    f: &'a RatFn,
    ns: &'a Namespace,
}

impl fmt::Display for RatFnDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.den.is_one() {
            return write!(f, "{}", self.f.num.display(self.ns));
        }
        let wrap = |p: &Poly| p.len() > 1;
        let num = self.f.num.display(self.ns);
        let den = self.f.den.display(self.ns);
        match (wrap(&self.f.num), wrap(&self.f.den)) {
            (true, true) => write!(f, "({num})/({den})"),
            (true, false) => write!(f, "({num})/{den}"),
            (false, true) => write!(f, "{num}/({den})"),
            (false, false) => write!(f, "{num}/{den}"),
        }
    }
}
