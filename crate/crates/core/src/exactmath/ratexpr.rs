use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::gcd::gcd;
use super::poly::MultiPoly;
use super::var::Var;
use super::MathError;

/// Quotient of two polynomials kept in lowest terms.
///
/// Canonical form: both parts have integer coefficients, the denominator's
/// lexicographically leading coefficient is positive, and the integer
/// contents of numerator and denominator are coprime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalExpr {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalExpr {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, MathError> {
        if den.is_zero() {
            return Err(MathError::DivisionByZeroPoly);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::normalize_constants(num, den))
    }

    /// Caller guarantees `num` and `den` share no non-constant factor.
    fn coprime(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        Self::normalize_constants(num, den)
    }

    fn normalize_constants(num: MultiPoly, den: MultiPoly) -> Self {
        let mut cd = den.content();
        if den.leading_coeff().is_negative() {
            cd = -cd;
        }
        let cn = num.content();
        let big_d = den.scale(&cd.recip());
        let big_n = num.scale(&cn.recip());
        let k = cn / cd;
        let p = BigRational::from_integer(k.numer().clone());
        let q = BigRational::from_integer(k.denom().clone());
        Self {
            num: big_n.scale(&p),
            den: big_d.scale(&q),
        }
    }

    pub fn zero() -> Self {
        Self {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self::coprime(p, MultiPoly::one())
    }

    /// Parse the text form (see [`super::text`]).
    pub fn parse(s: &str) -> Result<Self, MathError> {
        super::text::parse_expr(s)
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn to_poly(&self) -> Option<MultiPoly> {
        let d = self.den.constant_value()?;
        Some(self.num.scale(&d.recip()))
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        Some(self.num.constant_value()? / self.den.constant_value()?)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn recip(&self) -> Result<Self, MathError> {
        if self.num.is_zero() {
            return Err(MathError::DivisionByZeroPoly);
        }
        Ok(Self::coprime(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::coprime(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Self {
        let p = Self::coprime(self.num.pow(e.unsigned_abs()), self.den.pow(e.unsigned_abs()));
        if e < 0 {
            p.recip().expect("negative power of zero")
        } else {
            p
        }
    }

    pub fn derivative(&self, v: Var) -> Self {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::coprime(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Substitute a rational value; fails if the denominator vanishes.
    pub fn eval_var(&self, v: Var, val: &BigRational) -> Result<Self, MathError> {
        Self::new(self.num.eval_var(v, val), self.den.eval_var(v, val))
    }

    pub fn eval(&self, point: &[(Var, BigRational)]) -> Result<BigRational, MathError> {
        let n = self.num.eval(point).ok_or(MathError::FreeVariable)?;
        let d = self.den.eval(point).ok_or(MathError::FreeVariable)?;
        if d.is_zero() {
            return Err(MathError::DivisionByZeroPoly);
        }
        Ok(n / d)
    }

    /// Substitute a rational expression for `v`.
    pub fn subs(&self, v: Var, by: &RationalExpr) -> Result<Self, MathError> {
        let (n, dn) = self.num.subs_fraction(v, &by.num, &by.den);
        let (d, dd) = self.den.subs_fraction(v, &by.num, &by.den);
        // n / den^dn  over  d / den^dd
        let (n, d) = if dn >= dd {
            (n, &d * &by.den.pow(dn - dd))
        } else {
            (&n * &by.den.pow(dd - dn), d)
        };
        Self::new(n, d)
    }

    pub fn shift(&self, v: Var, offset: &BigRational) -> Self {
        Self::coprime(self.num.shift(v, offset), self.den.shift(v, offset))
    }

    pub fn rename(&self, from: Var, to: Var) -> Self {
        Self::coprime(self.num.rename(from, to), self.den.rename(from, to))
    }
}

impl<'a> Add<&'a RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalExpr::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            let a = self.to_poly().expect("polynomial");
            let b = rhs.to_poly().expect("polynomial");
            return RationalExpr::from_poly(&a + &b);
        }
        // only factors of g can survive in the sum's gcd
        let g = gcd(&self.den, &rhs.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        if num.is_zero() {
            return RationalExpr::zero();
        }
        let h = gcd(&num, &g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (num.div_exact(&h).expect("divides"), g.div_exact(&h).expect("divides"))
        };
        RationalExpr::coprime(num, &(&b1 * &d1) * &g)
    }
}

impl<'a> Sub<&'a RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() || rhs.is_zero() {
            return RationalExpr::zero();
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).expect("divides");
        let d = rhs.den.div_exact(&g1).expect("divides");
        let c = rhs.num.div_exact(&g2).expect("divides");
        let b = self.den.div_exact(&g2).expect("divides");
        RationalExpr::coprime(&a * &c, &b * &d)
    }
}

impl<'a> Div<&'a RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn div(self, rhs: &RationalExpr) -> RationalExpr {
        self * &rhs.recip().expect("division by zero expression")
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $m(self, rhs: RationalExpr) -> RationalExpr {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $m(self, rhs: &RationalExpr) -> RationalExpr {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<RationalExpr> for &'a RationalExpr {
            type Output = RationalExpr;
            fn $m(self, rhs: RationalExpr) -> RationalExpr {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<MultiPoly> for RationalExpr {
    fn from(p: MultiPoly) -> Self {
        RationalExpr::from_poly(p)
    }
}

impl From<Var> for RationalExpr {
    fn from(v: Var) -> Self {
        RationalExpr::var(v)
    }
}

impl From<i64> for RationalExpr {
    fn from(c: i64) -> Self {
        RationalExpr::int(c)
    }
}

impl From<BigRational> for RationalExpr {
    fn from(c: BigRational) -> Self {
        RationalExpr::constant(c)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_expr(self))
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalExpr({self})")
    }
}
