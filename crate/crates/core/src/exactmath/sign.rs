//! Shift-and-sign and Sturm certificates. Every entry point certifies
//! "expression <= 0" (or "< 0" for the strict variants); callers negate.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Exps, MultiPoly};
use super::univariate;
use super::var::Var;

/// Outcome of substituting `v -> v + s` for each listed shift and reading
/// off coefficient signs. PASS means `p <= 0` whenever every shifted
/// variable is at least its offset and all other variables are `>= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftSign {
    pub shifts: Vec<(Var, BigRational)>,
    pub shifted: MultiPoly,
    pub pass: bool,
    /// all coefficients <= 0 and the constant term < 0, hence `p < 0`
    pub strict: bool,
    pub first_positive: Option<(Exps, BigRational)>,
}

impl ShiftSign {
    /// Re-derive the shifted polynomial from `original` and recheck signs.
    pub fn reverify(&self, original: &MultiPoly) -> bool {
        let again = apply_shifts(original, &self.shifts);
        again == self.shifted && all_nonpositive(&again) == self.pass
    }

    pub fn coefficient_list(&self) -> Vec<BigRational> {
        self.shifted.terms().map(|(_, c)| c.clone()).collect()
    }
}

pub fn apply_shifts(p: &MultiPoly, shifts: &[(Var, BigRational)]) -> MultiPoly {
    let mut q = p.clone();
    for (v, s) in shifts {
        q = q.shift(*v, s);
    }
    q
}

fn all_nonpositive(p: &MultiPoly) -> bool {
    p.terms().all(|(_, c)| !c.is_positive())
}

pub fn shift_and_sign(p: &MultiPoly, shifts: &[(Var, BigRational)]) -> ShiftSign {
    let shifted = apply_shifts(p, shifts);
    let first_positive = shifted
        .terms()
        .find(|(_, c)| c.is_positive())
        .map(|(e, c)| (*e, c.clone()));
    let pass = first_positive.is_none();
    let strict = pass && shifted.constant_term().is_negative();
    ShiftSign {
        shifts: shifts.to_vec(),
        shifted,
        pass,
        strict,
        first_positive,
    }
}

/// `p <= 0` for all `v >= start`, by the sign of the coefficients of `p(v + start)`.
pub fn nonpositive_on_halfline(p: &MultiPoly, var: Var, start: &BigRational) -> ShiftSign {
    shift_and_sign(p, &[(var, start.clone())])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SturmCheck {
    pub lo: String,
    pub hi: String,
    pub roots_in_interval: usize,
    pub value_at_lo_negative: bool,
    pub pass: bool,
}

/// PASS iff the univariate `p` has no real root in `[lo, hi]` and `p(lo) < 0`,
/// so `p < 0` on the whole interval.
pub fn sturm_sign_on_interval(p: &MultiPoly, var: Var, lo: &BigRational, hi: &BigRational) -> SturmCheck {
    let fail = |roots: usize, neg: bool| SturmCheck {
        lo: lo.to_string(),
        hi: hi.to_string(),
        roots_in_interval: roots,
        value_at_lo_negative: neg,
        pass: false,
    };
    let Some(u) = p.to_univariate(var) else {
        return fail(usize::MAX, false);
    };
    if u.is_empty() || lo >= hi {
        return fail(usize::MAX, false);
    }
    let neg = univariate::eval(&u, lo).is_negative();
    let roots = univariate::count_roots(&u, lo, hi);
    SturmCheck {
        lo: lo.to_string(),
        hi: hi.to_string(),
        roots_in_interval: roots,
        value_at_lo_negative: neg,
        pass: neg && roots == 0,
    }
}

/// Certificate that a univariate polynomial is `<= 0` on `[0, inf)`: either
/// directly by coefficient signs, or by a shift `s` plus a Sturm check on `[0, s]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalflineCert {
    pub plain: ShiftSign,
    pub fallback: Option<(ShiftSign, SturmCheck)>,
    pub pass: bool,
}

pub fn nonpositive_on_halfline_with_fallback(p: &MultiPoly, var: Var, max_shift: i64) -> HalflineCert {
    let plain = nonpositive_on_halfline(p, var, &BigRational::zero());
    if plain.pass {
        return HalflineCert { plain, fallback: None, pass: true };
    }
    if p.only_vars(&[var]) {
        for s in 1..=max_shift {
            let s = BigRational::from_integer(s.into());
            let tail = nonpositive_on_halfline(p, var, &s);
            if !tail.pass {
                continue;
            }
            let head = sturm_sign_on_interval(p, var, &BigRational::zero(), &s);
            if head.pass {
                return HalflineCert {
                    plain,
                    fallback: Some((tail, head)),
                    pass: true,
                };
            }
        }
    }
    HalflineCert { plain, fallback: None, pass: false }
}
