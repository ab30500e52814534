//! Products of formal powers `b_1^{e_1} ... b_k^{e_k}` with polynomial bases
//! and symbolic exponents (polynomials in the growth rate and `l`).
//! Nothing is ever evaluated: the SUSY and Heun computations only need
//! products, exact cancellation and logarithmic derivatives.

use std::fmt;

use super::poly::MultiPoly;
use super::ratexpr::RationalExpr;
use super::var::Var;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct FormalPower {
    factors: Vec<(MultiPoly, MultiPoly)>,
}

impl FormalPower {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn single(base: MultiPoly, exponent: MultiPoly) -> Self {
        let mut f = Self::one();
        f.push(base, exponent);
        f
    }

    /// Multiply in `base^exponent`, merging equal bases.
    pub fn push(&mut self, base: MultiPoly, exponent: MultiPoly) {
        if exponent.is_zero() || base.is_one() {
            return;
        }
        if let Some(slot) = self.factors.iter_mut().find(|(b, _)| *b == base) {
            slot.1 = &slot.1 + &exponent;
        } else {
            self.factors.push((base, exponent));
        }
        self.factors.retain(|(_, e)| !e.is_zero());
    }

    pub fn mul(&self, other: &FormalPower) -> FormalPower {
        let mut out = self.clone();
        for (b, e) in &other.factors {
            out.push(b.clone(), e.clone());
        }
        out
    }

    pub fn inverse(&self) -> FormalPower {
        FormalPower {
            factors: self.factors.iter().map(|(b, e)| (b.clone(), -e)).collect(),
        }
    }

    pub fn factors(&self) -> &[(MultiPoly, MultiPoly)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The product as a rational expression, available once every exponent
    /// is an integer constant.
    pub fn to_rational(&self) -> Option<RationalExpr> {
        let mut acc = RationalExpr::one();
        for (b, e) in &self.factors {
            let c = e.constant_value()?;
            if !c.is_integer() {
                return None;
            }
            let k: i32 = c.to_integer().try_into().ok()?;
            acc = &acc * &RationalExpr::from_poly(b.clone()).pow(k);
        }
        Some(acc)
    }

    /// `(d/dv) P / P = sum_i e_i b_i' / b_i` (exponents must not depend on `v`).
    pub fn log_derivative(&self, v: Var) -> RationalExpr {
        let mut acc = RationalExpr::zero();
        for (b, e) in &self.factors {
            assert!(!e.contains_var(v), "exponent depends on the differentiation variable");
            let db = b.derivative(v);
            if db.is_zero() {
                continue;
            }
            let term = RationalExpr::new(&db * e, b.clone()).expect("nonzero base");
            acc = &acc + &term;
        }
        acc
    }
}

/// `pre * rest` with a formal prefactor and a rational remainder. Closed
/// under differentiation and multiplication, which is all a first-order
/// operator chain needs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalExpr {
    pub pre: FormalPower,
    pub rest: RationalExpr,
}

impl FormalExpr {
    pub fn rational(rest: RationalExpr) -> Self {
        Self { pre: FormalPower::one(), rest }
    }

    pub fn derivative(&self, v: Var) -> FormalExpr {
        let l = self.pre.log_derivative(v);
        FormalExpr {
            pre: self.pre.clone(),
            rest: &(&self.rest * &l) + &self.rest.derivative(v),
        }
    }

    pub fn mul_rational(&self, e: &RationalExpr) -> FormalExpr {
        FormalExpr { pre: self.pre.clone(), rest: &self.rest * e }
    }

    pub fn mul_power(&self, p: &FormalPower) -> FormalExpr {
        FormalExpr { pre: self.pre.mul(p), rest: self.rest.clone() }
    }

    /// `(d/dv - w) self`
    pub fn d_minus(&self, v: Var, w: &RationalExpr) -> FormalExpr {
        let d = self.derivative(v);
        FormalExpr { pre: d.pre, rest: &d.rest - &(&self.rest * w) }
    }

    pub fn is_zero(&self) -> bool {
        self.rest.is_zero()
    }

    pub fn to_rational(&self) -> Option<RationalExpr> {
        if self.rest.is_zero() {
            return Some(RationalExpr::zero());
        }
        Some(&self.pre.to_rational()? * &self.rest)
    }
}

impl fmt::Display for FormalPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| format!("({b})^({e})"))
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

impl fmt::Debug for FormalPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalPower({self})")
    }
}
