//! Exact rational arithmetic: multivariate polynomials, rational functions,
//! formal powers, complex rationals and sign certificates.

pub mod complex;
pub mod formal;
pub mod gcd;
pub mod linalg;
pub mod poly;
pub mod ratexpr;
pub mod sign;
pub mod text;
pub mod univariate;
pub mod var;

pub use complex::CRational;
pub use formal::{FormalExpr, FormalPower};
pub use gcd::gcd;
pub use poly::{int, rat, rational_sqrt, Exps, MultiPoly};
pub use ratexpr::RationalExpr;
pub use sign::{
    nonpositive_on_halfline, nonpositive_on_halfline_with_fallback, shift_and_sign, sturm_sign_on_interval,
    HalflineCert, ShiftSign, SturmCheck,
};
pub use var::Var;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MathError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("divisor has degree zero in {0}")]
    ConstantDivisor(Var),
    #[error("leading coefficient in {0} is not a constant")]
    NonConstantLeadingCoefficient(Var),
    #[error("expression still contains free variables")]
    FreeVariable,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Division with remainder in `var`. The divisor's leading coefficient in
/// `var` must be a rational constant so the quotient stays polynomial.
pub fn poly_divmod(num: &MultiPoly, den: &MultiPoly, var: Var) -> Result<(RationalExpr, MultiPoly), MathError> {
    if den.is_zero() {
        return Err(MathError::DivisionByZeroPoly);
    }
    let dd = den.degree(var);
    if dd == 0 {
        return Err(MathError::ConstantDivisor(var));
    }
    let lc = den
        .lc_in(var)
        .constant_value()
        .ok_or(MathError::NonConstantLeadingCoefficient(var))?;
    let lc_inv = lc.recip();
    let mut rem = num.clone();
    let mut quot = MultiPoly::zero();
    while !rem.is_zero() && rem.degree(var) >= dd {
        let k = rem.degree(var) - dd;
        let t = &rem.lc_in(var) * &MultiPoly::var_pow(var, k);
        let t = t.scale(&lc_inv);
        rem = &rem - &(&t * den);
        quot = &quot + &t;
    }
    Ok((RationalExpr::from_poly(quot), rem))
}

/// Shorthand used throughout: parse a rational expression, panicking on
/// malformed literals (intended for built-in tables only).
pub fn expr(s: &str) -> RationalExpr {
    RationalExpr::parse(s).unwrap_or_else(|e| panic!("bad built-in expression `{s}`: {e}"))
}

pub fn poly(s: &str) -> MultiPoly {
    text::parse_poly(s).unwrap_or_else(|e| panic!("bad built-in polynomial `{s}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    #[test]
    fn shift_examples() {
        assert_eq!(poly("x^2").shift(Var::X, &int(1)), poly("x^2 + 2*x + 1"));
        let p = poly("n^3 - 7*n*x + 2");
        assert_eq!(p.shift(Var::N, &BigRational::zero()), p);
        assert_eq!(poly("n^2 - 4").shift(Var::N, &int(2)), poly("n^2 + 4*n"));
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = poly_divmod(&poly("x^2 + 1"), &poly("x"), Var::X).unwrap();
        assert_eq!(q, expr("x"));
        assert_eq!(r, poly("1"));
        let (q, r) = poly_divmod(&poly("x^3"), &poly("x + 1"), Var::X).unwrap();
        assert_eq!(q, expr("x^2 - x + 1"));
        assert_eq!(r, poly("-1"));
        assert_eq!(
            poly_divmod(&poly("x"), &MultiPoly::zero(), Var::X),
            Err(MathError::DivisionByZeroPoly)
        );
    }

    #[test]
    fn halfline_examples() {
        assert!(nonpositive_on_halfline(&poly("-T - 1"), Var::T, &int(0)).pass);
        let c = nonpositive_on_halfline(&poly("T - 1"), Var::T, &int(0));
        assert!(!c.pass);
        assert_eq!(c.first_positive.unwrap().1, int(1));
        // T^2 - 6T + 5 shifted by 5 is T^2 + 4T; the certificate applies to its negation
        let neg = -poly("T^2 - 6*T + 5");
        let c = nonpositive_on_halfline(&neg, Var::T, &int(5));
        assert!(c.pass);
        assert_eq!(c.shifted, poly("-T^2 - 4*T"));
    }

    #[test]
    fn sturm_examples() {
        assert!(sturm_sign_on_interval(&poly("-T - 1"), Var::T, &int(0), &int(25)).pass);
        let c = sturm_sign_on_interval(&poly("T - 1"), Var::T, &int(0), &int(2));
        assert!(!c.pass);
        assert_eq!(c.roots_in_interval, 1);
        // T^2 - 100 is negative on [0, 5] with no root there; its negation is not
        assert!(sturm_sign_on_interval(&poly("T^2 - 100"), Var::T, &int(0), &int(5)).pass);
        assert!(!sturm_sign_on_interval(&poly("100 - T^2"), Var::T, &int(0), &int(5)).pass);
    }

    #[test]
    fn fallback_needs_shift() {
        // (T-3)^2 + 1 negated: coefficients alternate, but it is negative everywhere
        let p = -poly("T^2 - 6*T + 10");
        let c = nonpositive_on_halfline_with_fallback(&p, Var::T, 50);
        assert!(!c.plain.pass);
        assert!(c.pass);
        let (tail, head) = c.fallback.unwrap();
        assert!(tail.reverify(&p));
        assert!(head.pass);
    }

    #[test]
    fn gcd_and_reduction() {
        let a = poly("(x + n)^2 * (x - 1)");
        let b = poly("(x + n) * (x - 1)^3 * (n + 2)");
        assert_eq!(gcd(&a, &b), poly("(x + n)*(x - 1)").primitive());
        let e = expr("(x^2 - 1)/(2*x + 2)");
        assert_eq!(e, expr("x/2 - 1/2"));
        assert_eq!(e.den(), &poly("2"));
    }

    #[test]
    fn sqrt_exact_and_not() {
        let p = poly("(3*x^2 - 2*l*x + 1/2 - n)^2");
        // normalized so the lex-leading term (here -n) becomes positive
        assert_eq!(p.sqrt().unwrap(), poly("n - 3*x^2 + 2*l*x - 1/2"));
        assert!(poly("x^2 + 1").sqrt().is_none());
        assert!(poly("4*x^2 + 4*x + 2").sqrt().is_none());
    }

    #[test]
    fn text_round_trip() {
        let e = expr("(x^2 + 12*x + 12*n^2 + 8*(x + 4)*n + 12)/(4*(2*n^2 + 9*n + 7))");
        let s = e.to_string();
        assert_eq!(RationalExpr::parse(&s).unwrap(), e);
        assert_eq!(poly("3/4*n*T^2 - x").to_string(), "3/4 * n * T^2 + -1 * x");
    }

    #[test]
    fn rational_subs() {
        // z -> w/(2-w) applied to 1/(z+1) gives (2-w)/2
        let e = expr("1/(z + 1)");
        let got = e.subs(Var::Z, &expr("z/(2 - z)")).unwrap();
        assert_eq!(got, expr("(2 - z)/2"));
    }

    #[test]
    fn formal_power_cancels() {
        let half_x = poly("x/2");
        let mut f = FormalPower::single(poly("1 - r^2"), half_x.clone());
        f.push(poly("r"), poly("1"));
        let g = f.mul(&FormalPower::single(poly("1 - r^2"), -&half_x));
        assert_eq!(g.to_rational().unwrap(), expr("r"));
        assert_eq!(f.log_derivative(Var::R), expr("1/r - x*r/(1 - r^2)"));
    }
}
