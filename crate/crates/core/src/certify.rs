//! Exact certificates: quasisolution roots, Wall's criterion, the bounds on
//! the imaginary axis, the closure inequality and the per-case verdict.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::ModeCase;
use crate::error::{Error, Result};
use crate::exactmath::{
    int, nonpositive_on_halfline_with_fallback, rat, shift_and_sign, sturm_sign_on_interval, text, CRational,
    MultiPoly, RationalExpr, SturmCheck, Var,
};
use crate::recurrence::{
    characteristic_polynomial, coeff_ab, error_coeffs_for, poincare_data, quasisolution,
    quasisolution_limit_is_one, symbolic_ratio, table4, RecurrenceCoeffs, Table4Row,
};

const MAX_T_SHIFT: i64 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertKind {
    RootNegativity,
    Wall,
    BoundA,
    BoundB,
    BoundE0,
    Closure,
    PoincareLimits,
    HypergeomDecay,
}

/// Claim: `original <= 0` (`< 0` when `strict`) once every listed variable
/// is at least its shift and every other variable is nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignWitness {
    pub label: String,
    pub original: String,
    pub shifts: Vec<(String, String)>,
    pub shifted: String,
    pub pass: bool,
    pub strict: bool,
    /// Sturm check on `[0, s]` when the T-shift fallback was needed
    pub head: Option<SturmCheck>,
}

fn shift_list(shifts: &[(Var, BigRational)]) -> Vec<(String, String)> {
    shifts.iter().map(|(v, s)| (v.name().to_string(), s.to_string())).collect()
}

fn parse_shifts(sh: &[(String, String)]) -> Option<Vec<(Var, BigRational)>> {
    sh.iter()
        .map(|(v, s)| Some((Var::from_name(v)?, s.parse::<BigRational>().ok()?)))
        .collect()
}

impl SignWitness {
    /// Claim `p <= 0` on the shifted domain; univariate polynomials in `T`
    /// may fall back to a T-shift plus a Sturm check on the gap.
    pub fn nonpositive(label: &str, p: &MultiPoly, shifts: &[(Var, BigRational)]) -> Self {
        let plain = shift_and_sign(p, shifts);
        let mut w = SignWitness {
            label: label.to_string(),
            original: p.to_string(),
            shifts: shift_list(shifts),
            shifted: plain.shifted.to_string(),
            pass: plain.pass,
            strict: plain.strict,
            head: None,
        };
        if !plain.pass && p.only_vars(&[Var::T]) {
            let c = nonpositive_on_halfline_with_fallback(p, Var::T, MAX_T_SHIFT);
            if let Some((tail, head)) = c.fallback {
                w.shifts = shift_list(&tail.shifts);
                w.shifted = tail.shifted.to_string();
                w.pass = true;
                // the Sturm head already gives p(0) < 0 and no root on [0, s]
                w.strict = tail.strict;
                w.head = Some(head);
            }
        }
        w
    }

    pub fn positive(label: &str, p: &MultiPoly, shifts: &[(Var, BigRational)]) -> Self {
        Self::nonpositive(label, &-p, shifts)
    }

    pub fn reverify(&self) -> bool {
        let (Ok(p), Ok(shifted)) = (text::parse_poly(&self.original), text::parse_poly(&self.shifted)) else {
            return false;
        };
        let Some(shifts) = parse_shifts(&self.shifts) else {
            return false;
        };
        let again = shift_and_sign(&p, &shifts);
        if again.shifted != shifted {
            return false;
        }
        match &self.head {
            None => again.pass == self.pass && again.strict == self.strict,
            Some(h) => {
                let Some((_, s)) = shifts.first() else { return false };
                let check = sturm_sign_on_interval(&p, Var::T, &BigRational::zero(), s);
                again.pass && check.pass && &check == h && self.pass
            }
        }
    }
}

/// Even/odd continued fraction of a denominator in `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallWitness {
    pub f0: String,
    pub f1: String,
    pub coefficients: Vec<String>,
    /// last nonzero remainder
    pub last: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub case: String,
    pub pass: bool,
    pub checks: Vec<SignWitness>,
    pub values: Vec<(String, String)>,
    pub wall: Option<WallWitness>,
    pub detail: Option<String>,
}

impl Certificate {
    fn new(kind: CertKind, case: &str) -> Self {
        Certificate {
            kind,
            case: case.to_string(),
            pass: false,
            checks: Vec::new(),
            values: Vec::new(),
            wall: None,
            detail: None,
        }
    }

    fn value(&mut self, name: &str, v: impl ToString) {
        self.values.push((name.to_string(), v.to_string()));
    }

    /// PASS iff every check passed (strictly where asked).
    fn finish(mut self, strict: &[bool]) -> Self {
        let mut ok = true;
        for (i, c) in self.checks.iter().enumerate() {
            let need_strict = strict.get(i).copied().unwrap_or(false);
            if !c.pass || (need_strict && !c.strict) {
                ok = false;
                if self.detail.is_none() {
                    self.detail = Some(format!("{}: shifted polynomial {}", c.label, c.shifted));
                }
            }
        }
        self.pass = ok && self.detail.is_none();
        self
    }

    fn fail(mut self, why: impl Into<String>) -> Self {
        self.pass = false;
        self.detail = Some(why.into());
        self
    }

    /// Re-derive every witness from its stored text.
    pub fn reverify(&self) -> bool {
        if !self.checks.iter().all(SignWitness::reverify) {
            return false;
        }
        match &self.wall {
            Some(w) => refold_wall(w),
            None => true,
        }
    }

    pub fn into_result(self) -> Result<Certificate> {
        if self.pass {
            Ok(self)
        } else {
            Err(Error::CertificateFailed {
                kind: format!("{:?}", self.kind),
                case: self.case.clone(),
                detail: self.detail.unwrap_or_default(),
            })
        }
    }
}

fn n_shift(n0: u32) -> (Var, BigRational) {
    (Var::N, int(n0 as i64))
}

fn shifts_for(n0: Option<u32>, l0: Option<u32>) -> Vec<(Var, BigRational)> {
    let mut s = Vec::new();
    if let Some(n0) = n0 {
        s.push(n_shift(n0));
    }
    if let Some(l0) = l0 {
        s.push((Var::L, int(l0 as i64)));
    }
    s
}

/// Witnesses that `e > 0` (or `>= 0`) via the signs of its two parts.
fn positive_expr(label: &str, e: &RationalExpr, shifts: &[(Var, BigRational)]) -> (Vec<SignWitness>, bool) {
    let try_sign = |flip: bool| {
        let (num, den) = if flip {
            (-e.num(), -e.den())
        } else {
            (e.num().clone(), e.den().clone())
        };
        vec![
            SignWitness::positive(&format!("{label} numerator"), &num, shifts),
            SignWitness::positive(&format!("{label} denominator"), &den, shifts),
        ]
    };
    let pos = try_sign(false);
    if pos.iter().all(|w| w.pass && w.strict) {
        return (pos, true);
    }
    let neg = try_sign(true);
    if neg.iter().all(|w| w.pass && w.strict) {
        return (neg, true);
    }
    (pos, false)
}

// ---------------------------------------------------------------------------
// |p(it)|^2 on the imaginary axis

/// `p(it) = E(-t^2) + i t O(-t^2)`, returned as `(E, O)` in `T = t^2`
/// with the signs folded in.
pub fn even_odd_on_axis(p: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let cs = p.coeffs_in(Var::X);
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (k, c) in cs.iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { int(1) } else { int(-1) };
        let c = c.scale(&sign);
        if k % 2 == 0 {
            even.push(c);
        } else {
            odd.push(c);
        }
    }
    (MultiPoly::from_coeffs_in(Var::T, &even), MultiPoly::from_coeffs_in(Var::T, &odd))
}

/// `|p(it)|^2 = E^2 + T O^2`.
pub fn abs_sq_on_axis(p: &MultiPoly) -> MultiPoly {
    let (e, o) = even_odd_on_axis(p);
    &(&e * &e) + &(&MultiPoly::var(Var::T) * &(&o * &o))
}

/// Where a bound is claimed: `n >= n0`, `l >= l_shift`. The denominator
/// only has to be nonzero on the narrower `l >= l_min` where the family lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Domain {
    pub n0: u32,
    pub l_shift: Option<u32>,
    pub l_min: Option<u32>,
}

impl Domain {
    pub fn finite(n0: u32) -> Self {
        Domain { n0, l_shift: None, l_min: None }
    }
}

/// `F y^2 - G x^2` with `F = |num(it)|^2`, `G = |den(it)|^2` and the bound
/// `x/y`: nonpositive exactly where `|target(it)| <= x/y`.
pub fn bound_polynomial(target: &RationalExpr, bound: &RationalExpr) -> MultiPoly {
    let f = abs_sq_on_axis(target.num());
    let g = abs_sq_on_axis(target.den());
    let (bx, by) = (bound.num(), bound.den());
    &(&f * &(by * by)) - &(&g * &(bx * bx))
}

/// `|target(it)| <= bound` for `T >= 0` on the domain.
pub fn certify_bound(
    kind: CertKind,
    case: &str,
    target: &RationalExpr,
    bound: &RationalExpr,
    dom: Domain,
) -> Result<Certificate> {
    let shifts = shifts_for(Some(dom.n0), dom.l_shift);
    let den_l = match (dom.l_shift, dom.l_min) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let den_shifts = shifts_for(Some(dom.n0), den_l);
    let mut cert = Certificate::new(kind, case);
    cert.value("target", target);
    cert.value("bound", bound);
    let f = abs_sq_on_axis(target.num());
    let g = abs_sq_on_axis(target.den());
    let g_pos = SignWitness::positive("|den|^2", &g, &den_shifts);
    if !(g_pos.pass && g_pos.strict) {
        return Err(Error::SignAmbiguousDenominator(format!("{case}: {}", g_pos.shifted)));
    }
    let (bx, by) = (bound.num(), bound.den());
    let bound_sign = SignWitness::positive("bound numerator * denominator", &(bx * by), &shifts);
    let h = &(&f * &(by * by)) - &(&g * &(bx * bx));
    debug_assert_eq!(h, bound_polynomial(target, bound));
    let main = SignWitness::nonpositive("F y^2 - G x^2", &h, &shifts);
    cert.checks = vec![g_pos, bound_sign, main];
    Ok(cert.finish(&[true, false, false]))
}

// ---------------------------------------------------------------------------
// quasisolution roots

/// Both roots in `x` of the numerator of `rtilde_n` are real and negative
/// for `n >= 1` (and `l >= 3` for families).
pub fn certify_quasisolution_roots(case: &ModeCase) -> Result<Certificate> {
    certify_quasisolution_roots_for(case, &quasisolution(case)?)
}

pub fn certify_quasisolution_roots_for(case: &ModeCase, rt: &RationalExpr) -> Result<Certificate> {
    let mut cert = Certificate::new(CertKind::RootNegativity, &case.label());
    let cs = rt.num().coeffs_in(Var::X);
    if cs.len() != 3 {
        return Ok(cert.fail("quasisolution numerator is not quadratic in the rate"));
    }
    let c2 = RationalExpr::from_poly(cs[2].clone());
    let b = &RationalExpr::from_poly(cs[1].clone()) / &c2;
    let c = &RationalExpr::from_poly(cs[0].clone()) / &c2;
    let disc = &(&b * &b) - &c.scale(&int(4));
    let diff = &(&b * &b) - &disc;
    cert.value("roots", format!("(-({b}) +- sqrt({disc}))/2"));
    cert.value("difference of squares", &diff);
    let mut shifts = vec![(Var::N, int(1))];
    if case.is_family() {
        shifts.push((Var::L, int(3)));
    }
    let mut strict = Vec::new();
    let (wb, _) = positive_expr("sum of roots, negated", &b, &shifts);
    let (wd, _) = positive_expr("difference of squares", &diff, &shifts);
    strict.extend([true, true, true, true]);
    cert.checks.extend(wb);
    cert.checks.extend(wd);
    // real roots: disc >= 0 with a positive denominator
    let (dn, dd) = (disc.num(), disc.den());
    let (dn, dd) = if shift_and_sign(dd, &shifts).pass { (-dn, -dd) } else { (dn.clone(), dd.clone()) };
    cert.checks.push(SignWitness::positive("discriminant numerator", &dn, &shifts));
    cert.checks.push(SignWitness::positive("discriminant denominator", &dd, &shifts));
    strict.extend([false, true]);
    Ok(cert.finish(&strict))
}

// ---------------------------------------------------------------------------
// Wall's criterion

type XPoly = Vec<RationalExpr>;

fn trim(mut p: XPoly) -> XPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn from_poly_in_x(p: &MultiPoly) -> XPoly {
    p.coeffs_in(Var::X).into_iter().map(RationalExpr::from_poly).collect()
}

fn to_poly_in_x(p: &XPoly) -> RationalExpr {
    let mut acc = RationalExpr::zero();
    let x = RationalExpr::var(Var::X);
    for c in p.iter().rev() {
        acc = &(&acc * &x) + c;
    }
    acc
}

/// One division step `f0 = q x f1 + rem`; returns `(q, rem)`.
fn wall_step(f0: &XPoly, f1: &XPoly, step: usize) -> Result<(RationalExpr, XPoly)> {
    let (d0, d1) = (f0.len() - 1, f1.len() - 1);
    if d0 != d1 + 1 {
        return Err(Error::DegenerateDivision(step));
    }
    let q = &f0[d0] / &f1[d1];
    let mut rem = f0.clone();
    for (k, c) in f1.iter().enumerate() {
        rem[k + 1] = &rem[k + 1] - &(&q * c);
    }
    let rem = trim(rem);
    // the constant quotient term vanishes since f0, f1 have opposite parity
    if rem.len() > d0 {
        return Err(Error::DegenerateDivision(step));
    }
    Ok((q, rem))
}

pub fn wall_coefficients(d: &MultiPoly) -> Result<(XPoly, XPoly, Vec<RationalExpr>, XPoly)> {
    let full = from_poly_in_x(d);
    let deg = full.len().saturating_sub(1);
    let parity_part = |odd: bool| -> XPoly {
        trim(
            full.iter()
                .enumerate()
                .map(|(k, c)| if (k % 2 == 1) == odd { c.clone() } else { RationalExpr::zero() })
                .collect(),
        )
    };
    let (f0, f1) = if deg % 2 == 0 {
        (parity_part(false), parity_part(true))
    } else {
        (parity_part(true), parity_part(false))
    };
    let (mut a, mut b) = (f0.clone(), f1.clone());
    let mut xs = Vec::new();
    while !b.is_empty() {
        let (q, rem) = wall_step(&a, &b, xs.len() + 1)?;
        xs.push(q);
        if !rem.is_empty() && rem.len() + 1 != b.len() {
            return Err(Error::DegenerateDivision(xs.len()));
        }
        a = b;
        b = rem;
    }
    Ok((f0, f1, xs, a))
}

fn refold_wall(w: &WallWitness) -> bool {
    let parse = |s: &str| text::parse_expr(s).ok();
    let (Some(f0), Some(f1), Some(last)) = (parse(&w.f0), parse(&w.f1), parse(&w.last)) else {
        return false;
    };
    let Some(xs) = w.coefficients.iter().map(|s| parse(s)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    // f_k = x_{k+1} x f_{k+1} + f_{k+2}, from the bottom up
    let x = RationalExpr::var(Var::X);
    let (mut hi, mut lo) = (last, RationalExpr::zero());
    for q in xs.iter().rev() {
        let next = &(&(q * &x) * &hi) + &lo;
        lo = hi;
        hi = next;
    }
    hi == f0 && lo == f1
}

/// `d` must have every root in `Re x < 0`: all continued-fraction
/// coefficients positive (in `l >= l0` for families).
pub fn certify_wall_poly(case: &str, d: &MultiPoly, l0: Option<u32>) -> Result<Certificate> {
    let (f0, f1, xs, last) = wall_coefficients(d)?;
    let mut cert = Certificate::new(CertKind::Wall, case);
    cert.value("denominator", d);
    cert.wall = Some(WallWitness {
        f0: to_poly_in_x(&f0).to_string(),
        f1: to_poly_in_x(&f1).to_string(),
        coefficients: xs.iter().map(|e| e.to_string()).collect(),
        last: to_poly_in_x(&last).to_string(),
    });
    let deg = d.degree(Var::X) as usize;
    if xs.len() != deg {
        return Ok(cert.fail(format!("{} coefficients for degree {deg}", xs.len())));
    }
    let shifts = shifts_for(None, l0);
    let mut strict = Vec::new();
    for (i, q) in xs.iter().enumerate() {
        cert.value(&format!("x{}", i + 1), q);
        let (ws, _) = positive_expr(&format!("x{}", i + 1), q, &shifts);
        strict.extend(ws.iter().map(|_| true));
        cert.checks.extend(ws);
    }
    Ok(cert.finish(&strict))
}

/// `r_{n0}` as a function of the rate, for the Wall and e_{n0} checks.
pub fn ratio_at(rc: &RecurrenceCoeffs, n0: u32) -> RationalExpr {
    symbolic_ratio(rc, n0)
}

pub fn certify_wall(case: &ModeCase, n0: u32) -> Result<Certificate> {
    let rc = coeff_ab(case)?;
    let r = ratio_at(&rc, n0);
    let l0 = case.family().map(|f| f.threshold());
    certify_wall_poly(&case.label(), r.den(), l0)
}

// ---------------------------------------------------------------------------
// closure

/// `y^2 + (b - a - 1) y + a < 0` for `n >= n_from`, `l >= l_shift`.
pub fn certify_closure_with(
    case: &str,
    abar: &RationalExpr,
    bbar: &RationalExpr,
    n_from: u32,
    l_shift: Option<u32>,
    y: &BigRational,
) -> Certificate {
    let y = RationalExpr::constant(y.clone());
    let one = RationalExpr::one();
    let c = &(&(&y * &y) + &(&(&(bbar - abar) - &one) * &y)) + abar;
    let mut cert = Certificate::new(CertKind::Closure, case);
    cert.value("inequality", &c);
    cert.value("n from", n_from);
    let shifts = shifts_for(Some(n_from), l_shift);
    let den_pos = SignWitness::positive("denominator", c.den(), &shifts);
    let (num, den_w) = if den_pos.pass && den_pos.strict {
        (c.num().clone(), den_pos)
    } else {
        (-c.num(), SignWitness::nonpositive("denominator", c.den(), &shifts))
    };
    cert.checks.push(den_w);
    cert.checks.push(SignWitness::nonpositive("numerator", &num, &shifts));
    cert.finish(&[true, true])
}

/// The induction step needs the inequality for `n >= n0 + 1`.
pub fn certify_closure(case: &ModeCase, y: &BigRational) -> Result<Certificate> {
    let row = table4(case)?;
    let l0 = case.family().map(|f| f.bound_l_shift());
    Ok(certify_closure_with(&case.label(), &row.abar, &row.bbar, row.n0 + 1, l0, y))
}

// ---------------------------------------------------------------------------
// Poincare data

pub fn certify_poincare(case: &ModeCase) -> Result<Certificate> {
    let rc = coeff_ab(case)?;
    let mut cert = Certificate::new(CertKind::PoincareLimits, &case.label());
    let Some((la, lb, roots)) = poincare_data(&rc) else {
        return Ok(cert.fail("A_n or B_n has no finite rational limit"));
    };
    cert.value("lim A_n", &la);
    cert.value("lim B_n", &lb);
    let t = MultiPoly::var(Var::T);
    let chi = &(&(&t * &t) - &t.scale(&la)) - &MultiPoly::constant(lb.clone());
    cert.value("characteristic polynomial", &chi);
    if (la.clone(), lb.clone()) != (rat(3, 2), rat(-1, 2)) || chi != characteristic_polynomial() {
        return Ok(cert.fail(format!("limits ({la}, {lb})")));
    }
    match roots {
        Some((t0, t1)) if t0.abs() != t1.abs() => {
            cert.value("roots", format!("{t0}, {t1}"));
            cert.pass = true;
            Ok(cert)
        }
        _ => Ok(cert.fail("characteristic roots not rational with distinct moduli")),
    }
}

// ---------------------------------------------------------------------------
// hypergeometric case

fn gauss_ratio(a: &CRational, b: &CRational, c: &CRational, n: i64) -> Option<CRational> {
    let k = CRational::from_ints(n, 0);
    let num = &(a + &k) * &(b + &k);
    let den = &(c + &k) * &(&k + &CRational::one());
    if den.is_zero() {
        return None;
    }
    Some(&num / &den)
}

fn at_sample(e: &RationalExpr, lam: &CRational) -> Option<CRational> {
    // a, b are affine in the rate
    let p = e.to_poly()?;
    let cs = p.coeffs_in(Var::X);
    let c0 = cs.first().and_then(|c| c.constant_value()).unwrap_or_else(BigRational::zero);
    let c1 = cs.get(1).and_then(|c| c.constant_value()).unwrap_or_else(BigRational::zero);
    if cs.len() > 2 {
        return None;
    }
    Some(&CRational::real(c0) + &(&CRational::real(c1) * lam))
}

/// 500 for `|lambda| < 10`, then 500 more per further 10.
pub fn hypergeometric_check_index(lam: &CRational) -> i64 {
    let size = lam.abs_f64();
    500 * (1 + (size / 10.0).floor() as i64)
}

pub fn certify_hypergeometric_case(samples: &[CRational]) -> Result<Certificate> {
    let h = crate::standardform::to_hypergeometric_symbolic()?;
    let mut cert = Certificate::new(CertKind::HypergeomDecay, "(0,1)");
    cert.value("a", &h.a);
    cert.value("b", &h.b);
    cert.value("c", &h.c);
    // Re a, Re b >= 1 whenever Re x >= 0
    for (name, e) in [("a", &h.a), ("b", &h.b)] {
        let Some(p) = e.to_poly().filter(|p| p.only_vars(&[Var::X]) && p.degree(Var::X) <= 1) else {
            return Ok(cert.fail(format!("{name} is not affine in the rate")));
        };
        let slope = p.coeffs_in(Var::X).get(1).map(|c| c.constant_term()).unwrap_or_else(BigRational::zero);
        if slope.is_negative() || p.constant_term() < int(1) {
            return Ok(cert.fail(format!("Re {name} can drop below 1")));
        }
    }
    let c = CRational::real(h.c.constant_value().expect("c is a number"));
    for lam in samples {
        if lam.re.is_negative() {
            return Ok(cert.fail(format!("sample {lam} has negative real part")));
        }
        let a = at_sample(&h.a, lam).expect("affine");
        let b = at_sample(&h.b, lam).expect("affine");
        for v in [&a, &b] {
            if v.im.is_zero() && v.re.is_integer() && !v.re.is_positive() {
                return Ok(cert.fail(format!("polynomial solution at rate {lam}")));
            }
        }
        // the ratio is 1 + (a + b - c - 1)/n + O(n^-2), so large rates need
        // a later index before the tolerance applies
        let n = hypergeometric_check_index(lam);
        let Some(ratio) = gauss_ratio(&a, &b, &c, n) else {
            return Ok(cert.fail("Gauss ratio undefined"));
        };
        let dist = (&ratio - &CRational::one()).abs_f64();
        cert.value(&format!("|x_{}/x_{n} - 1| at {lam}", n + 1), format!("{dist:.3e}"));
        if dist >= 0.02 {
            return Ok(cert.fail(format!("ratio at {lam} is {dist} away from 1")));
        }
    }
    cert.pass = true;
    Ok(cert)
}

// ---------------------------------------------------------------------------
// co-rotational bounds

fn abs_sq_at(e: &RationalExpr, n: i64, t: &BigRational) -> Option<BigRational> {
    let e = e.eval_var(Var::N, &int(n)).ok()?;
    let f = abs_sq_on_axis(e.num()).eval(&[(Var::T, t * t)])?;
    let g = abs_sq_on_axis(e.den()).eval(&[(Var::T, t * t)])?;
    (!g.is_zero()).then(|| f / g)
}

/// Exact envelope samples `|e(n, it)|^2` must sit below `bound^2`.
fn envelope_ok(e: &RationalExpr, bound: &RationalExpr, n0: u32) -> bool {
    let ts = [int(0), rat(1, 2), int(1), int(2), int(4), int(8), int(16), int(64)];
    (n0 as i64..n0 as i64 + 12).all(|n| {
        let Ok(b) = bound.eval(&[(Var::N, int(n))]) else { return false };
        ts.iter().all(|t| abs_sq_at(e, n, t).is_some_and(|v| v <= &b * &b))
    })
}

/// Bounds for the co-rotational case, found by searching rational shapes
/// `(n/12 + beta)/(n + 1)` and `1/2 - c/n` against exact envelope samples
/// and then certifying the survivors.
pub fn derive_corotational_bounds() -> Result<Option<(Table4Row, Vec<Certificate>)>> {
    let case = ModeCase::Finite { l: 1, m: 0 };
    derive_corotational_bounds_for(&quasisolution(&case)?)
}

pub fn derive_corotational_bounds_for(rt: &RationalExpr) -> Result<Option<(Table4Row, Vec<Certificate>)>> {
    let case = ModeCase::Finite { l: 1, m: 0 };
    let label = case.label();
    let (a_n, b_n) = error_coeffs_for(&coeff_ab(&case)?, rt);
    let n0 = 2;
    let u = rat(3, 10);
    let pick = |target: &RationalExpr, kind: CertKind, cands: Vec<RationalExpr>| -> Result<Option<(RationalExpr, Certificate)>> {
        for b in cands {
            if !envelope_ok(target, &b, n0) {
                continue;
            }
            let cert = certify_bound(kind, &label, target, &b, Domain::finite(n0))?;
            if cert.pass {
                return Ok(Some((b, cert)));
            }
        }
        Ok(None)
    };
    let a_cands = (5..=15)
        .map(|k| RationalExpr::parse(&format!("(n/12 + {k}/60)/(n + 1)")).expect("literal"))
        .collect();
    let b_cands = (10..=25)
        .rev()
        .map(|k| RationalExpr::parse(&format!("1/2 - {k}/(100*n)")).expect("literal"))
        .collect();
    let Some((abar, ca)) = pick(&a_n, CertKind::BoundA, a_cands)? else { return Ok(None) };
    let Some((bbar, cb)) = pick(&b_n, CertKind::BoundB, b_cands)? else { return Ok(None) };
    let row = Table4Row { abar, bbar, n0, u };
    Ok(Some((row, vec![ca, cb])))
}

// ---------------------------------------------------------------------------
// verdict

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorotationalPolicy {
    AutoDerive,
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
    External,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCheck {
    pub what: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub case: String,
    pub status: Status,
    pub table_checks: Vec<TableCheck>,
    pub certificates: Vec<Certificate>,
    pub bounds: Option<(String, String, u32, String)>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn table_check(what: &str, r: Result<()>) -> TableCheck {
    match r {
        Ok(()) => TableCheck { what: what.into(), pass: true, detail: String::new() },
        Err(e) => TableCheck { what: what.into(), pass: false, detail: e.to_string() },
    }
}

fn as_cert(kind: CertKind, case: &str, r: Result<Certificate>) -> Certificate {
    r.unwrap_or_else(|e| Certificate::new(kind, case).fail(e.to_string()))
}

/// The full certificate set for one case with `l > 0`.
pub fn verify_case(case: &ModeCase, policy: CorotationalPolicy, samples: &[CRational]) -> Verdict {
    verify_case_with(case, policy, samples, None)
}

/// As [`verify_case`], optionally with a replacement quasisolution; used to
/// check that a miscalibrated table is caught.
pub fn verify_case_with(
    case: &ModeCase,
    policy: CorotationalPolicy,
    samples: &[CRational],
    rt_override: Option<&RationalExpr>,
) -> Verdict {
    let label = case.label();
    if case.lm() == Some((0, 1)) {
        let cert = as_cert(CertKind::HypergeomDecay, &label, certify_hypergeometric_case(samples));
        let status = if cert.pass { Status::Pass } else { Status::Fail };
        return Verdict {
            case: label,
            status,
            table_checks: vec![],
            certificates: vec![cert],
            bounds: None,
            notes: vec!["hypergeometric case".into()],
        };
    }
    let mut notes = Vec::new();
    let rt = match rt_override {
        Some(rt) => {
            notes.push(format!("quasisolution replaced by {rt}"));
            Ok(rt.clone())
        }
        None => quasisolution(case),
    };
    let mut table_checks = vec![
        table_check("recurrence coefficients", coeff_ab(case).map(|_| ())),
        table_check(
            "quasisolution tends to 1",
            rt.as_ref().map_err(Clone::clone).and_then(|rt| {
                if quasisolution_limit_is_one(rt) {
                    Ok(())
                } else {
                    Err(Error::UnsupportedCase(format!("{label}: rtilde_n does not tend to 1")))
                }
            }),
        ),
    ];
    let rt = match rt {
        Ok(rt) => rt,
        Err(e) => {
            return Verdict {
                case: label,
                status: Status::Fail,
                table_checks,
                certificates: vec![],
                bounds: None,
                notes: vec![e.to_string()],
            }
        }
    };
    if let Some((l, m)) = case.lm() {
        table_checks.push(table_check(
            "transformed potential",
            crate::odesystem::transformed_potential(l, m).map(|_| ()),
        ));
    }
    let mut extra = Vec::new();
    let row = match table4(case) {
        Ok(row) => Some(row),
        Err(Error::NoBoundsRow(_)) => match policy {
            CorotationalPolicy::External => None,
            CorotationalPolicy::AutoDerive => match derive_corotational_bounds_for(&rt) {
                Ok(Some((row, certs))) => {
                    notes.push("bounds derived automatically".into());
                    extra = certs;
                    Some(row)
                }
                Ok(None) => {
                    notes.push("no certified bounds found".into());
                    let failed = Certificate::new(CertKind::BoundA, &label).fail("no candidate bound certifies");
                    return Verdict {
                        case: label,
                        status: Status::Fail,
                        table_checks,
                        certificates: vec![failed],
                        bounds: None,
                        notes,
                    };
                }
                Err(e) => {
                    notes.push(format!("bound search failed: {e}"));
                    None
                }
            },
        },
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let Some(row) = row else {
        return Verdict {
            case: label,
            status: Status::External,
            table_checks,
            certificates: vec![],
            bounds: None,
            notes,
        };
    };
    let fam = case.family();
    let l_bound = fam.map(|f| f.bound_l_shift());
    let l_err = fam.map(|f| f.esterror_l_shift());
    let l_min = fam.map(|f| f.threshold());
    let derived = !extra.is_empty();
    let jobs: Vec<CertKind> = if derived {
        vec![CertKind::RootNegativity, CertKind::Wall, CertKind::BoundE0, CertKind::Closure, CertKind::PoincareLimits]
    } else {
        vec![
            CertKind::RootNegativity,
            CertKind::Wall,
            CertKind::BoundA,
            CertKind::BoundB,
            CertKind::BoundE0,
            CertKind::Closure,
            CertKind::PoincareLimits,
        ]
    };
    let run = |kind: CertKind| -> Result<Certificate> {
        match kind {
            CertKind::RootNegativity => certify_quasisolution_roots_for(case, &rt),
            CertKind::Wall => certify_wall(case, row.n0),
            CertKind::BoundA | CertKind::BoundB => {
                let (a_n, b_n) = error_coeffs_for(&coeff_ab(case)?, &rt);
                let (t, b) = if kind == CertKind::BoundA { (a_n, &row.abar) } else { (b_n, &row.bbar) };
                certify_bound(kind, &label, &t, b, Domain { n0: row.n0, l_shift: l_bound, l_min })
            }
            CertKind::BoundE0 => {
                let e = e_at_n0_for(case, row.n0, &rt)?;
                certify_bound(kind, &label, &e, &RationalExpr::constant(row.u.clone()), Domain { n0: 0, l_shift: l_err, l_min })
            }
            CertKind::Closure => Ok(certify_closure_with(
                &label,
                &row.abar,
                &row.bbar,
                row.n0 + 1,
                l_bound,
                &rat(1, 3),
            )),
            CertKind::PoincareLimits => certify_poincare(case),
            CertKind::HypergeomDecay => certify_hypergeometric_case(samples),
        }
    };
    let mut certificates: Vec<Certificate> = jobs.par_iter().map(|&k| as_cert(k, &label, run(k))).collect();
    certificates.extend(extra);
    certificates.sort_by_key(|c| c.kind as u8);
    let analytic = certificates
        .iter()
        .filter(|c| matches!(c.kind, CertKind::RootNegativity | CertKind::Wall))
        .all(|c| c.pass);
    if !analytic {
        notes.push("analyticity certificates failed; the axis bounds carry no weight".into());
    }
    if row.u > rat(1, 3) {
        notes.push("initial error bound exceeds the closure constant".into());
    }
    let all = table_checks.iter().all(|t| t.pass) && certificates.iter().all(|c| c.pass) && row.u <= rat(1, 3);
    Verdict {
        case: label,
        status: if all { Status::Pass } else { Status::Fail },
        table_checks,
        certificates,
        bounds: Some((row.abar.to_string(), row.bbar.to_string(), row.n0, row.u.to_string())),
        notes,
    }
}

/// `e_{n0} = r_{n0} / rtilde_{n0} - 1` as a function of the rate.
pub fn e_at_n0(case: &ModeCase, n0: u32) -> Result<RationalExpr> {
    e_at_n0_for(case, n0, &quasisolution(case)?)
}

pub fn e_at_n0_for(case: &ModeCase, n0: u32, rt: &RationalExpr) -> Result<RationalExpr> {
    let rc = coeff_ab(case)?;
    let r = ratio_at(&rc, n0);
    let rt = rt.eval_var(Var::N, &int(n0 as i64))?;
    Ok(&(&r / &rt) - &RationalExpr::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::error_coeffs;
    use crate::cases::Family;
    use crate::exactmath::{expr, poly};

    #[test]
    fn axis_modulus() {
        // |1 + x|^2 at x = it is 1 + T
        assert_eq!(abs_sq_on_axis(&poly("1 + x")), poly("1 + T"));
        // |x^2 + 3x + 2|^2 = (2 - T)^2 + 9T
        assert_eq!(abs_sq_on_axis(&poly("x^2 + 3*x + 2")), poly("T^2 + 5*T + 4"));
    }

    #[test]
    fn wall_values_11() {
        let c = certify_wall(&ModeCase::Finite { l: 1, m: 1 }, 2).unwrap();
        assert!(c.pass, "{c:?}");
        let xs = &c.wall.as_ref().unwrap().coefficients;
        let want = ["1/32", "64/495", "49005/110944", "55472/24255"];
        assert_eq!(xs.len(), 4);
        for (g, w) in xs.iter().zip(want) {
            assert_eq!(expr(g), expr(w));
        }
        assert!(c.reverify());
    }

    #[test]
    fn wall_values_21_and_family() {
        let c = certify_wall(&ModeCase::Finite { l: 2, m: 1 }, 2).unwrap();
        let xs = &c.wall.as_ref().unwrap().coefficients;
        assert_eq!(expr(&xs[0]), expr("1/40"));
        assert_eq!(expr(&xs[3]), expr("16768/18711"));
        let f = certify_wall(&ModeCase::Family(Family::LMinus), 2).unwrap();
        assert!(f.pass);
        assert_eq!(expr(&f.wall.as_ref().unwrap().coefficients[0]), expr("1/(7*l + 18)"));
        assert!(f.reverify());
    }

    #[test]
    fn wall_rejects_unstable() {
        // (x - 1)(x + 2) has a root in the right half plane
        let c = certify_wall_poly("test", &poly("(x - 1)*(x + 2)"), None).unwrap();
        assert!(!c.pass);
        let c = certify_wall_poly("test", &poly("(x + 1)*(x + 2)*(x + 3)"), None).unwrap();
        assert!(c.pass);
    }

    #[test]
    fn zero_target() {
        let c = certify_bound(CertKind::BoundA, "t", &RationalExpr::zero(), &expr("1/(n + 1)"), Domain::finite(2)).unwrap();
        assert!(c.pass);
    }

    #[test]
    fn bound_b_11() {
        let case = ModeCase::Finite { l: 1, m: 1 };
        let m = error_coeffs(&case).unwrap();
        let row = m.bounds.unwrap();
        let c = certify_bound(CertKind::BoundB, "(1,1)", &m.b_n, &row.bbar, Domain::finite(2)).unwrap();
        assert!(c.pass);
        assert!(c.reverify());
        // a bound that is too small must fail
        let c = certify_bound(CertKind::BoundB, "(1,1)", &m.b_n, &expr("1/4"), Domain::finite(2)).unwrap();
        assert!(!c.pass);
    }

    #[test]
    fn e0_22() {
        let case = ModeCase::Finite { l: 2, m: 2 };
        let e = e_at_n0(&case, 3).unwrap();
        let c = certify_bound(CertKind::BoundE0, "(2,2)", &e, &expr("3/10"), Domain::finite(0)).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn e0_12_needs_fallback() {
        let case = ModeCase::Finite { l: 1, m: 2 };
        let e = e_at_n0(&case, 4).unwrap();
        let c = certify_bound(CertKind::BoundE0, "(1,2)", &e, &expr("1/3"), Domain::finite(0)).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(c.checks[2].head.is_some());
        assert!(c.reverify());
    }

    #[test]
    fn closure_examples() {
        let c = certify_closure(&ModeCase::Finite { l: 1, m: 1 }, &rat(1, 3)).unwrap();
        assert!(c.pass);
        let c = certify_closure(&ModeCase::Finite { l: 1, m: 2 }, &rat(1, 3)).unwrap();
        assert!(c.pass);
        let c = certify_closure_with("deg", &expr("1/3"), &RationalExpr::zero(), 2, None, &rat(1, 3));
        assert!(!c.pass);
    }

    #[test]
    fn roots_and_poincare() {
        for case in [ModeCase::Finite { l: 1, m: 1 }, ModeCase::Family(Family::LMinus)] {
            let c = certify_quasisolution_roots(&case).unwrap();
            assert!(c.pass, "{c:?}");
            assert!(c.reverify());
        }
        let p = certify_poincare(&ModeCase::Family(Family::Diag)).unwrap();
        assert!(p.pass);
    }

    #[test]
    fn hypergeometric() {
        let s = [CRational::from_ints(0, 0), CRational::from_ints(1, 0), CRational::from_ints(0, 2)];
        let c = certify_hypergeometric_case(&s).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(!certify_hypergeometric_case(&[CRational::from_ints(-3, 0)]).unwrap().pass);
    }
}

#[cfg(test)]
mod verdicts {
    use super::*;

    #[test]
    fn tampered_quasisolution_fails() {
        let case = ModeCase::Finite { l: 1, m: 0 };
        let rt = crate::exactmath::expr(
            "x^2/(8*n^2 + 36*n + 28) + x*(2*n + 3)/(2*n^2 + 9*n + 7) + (2*n + 4)/(2*n + 8)",
        );
        let v = verify_case_with(&case, CorotationalPolicy::AutoDerive, &[], Some(&rt));
        assert_eq!(v.status, Status::Fail);
        assert!(v.certificates.iter().any(|c| c.kind == CertKind::BoundA && !c.pass));
    }

    #[test]
    fn every_case_passes() {
        let samples = [CRational::from_ints(0, 0), CRational::from_ints(1, 2)];
        let cases: Vec<ModeCase> = ModeCase::default_finite().into_iter().chain(ModeCase::default_families()).collect();
        for case in cases {
            let t = std::time::Instant::now();
            let v = verify_case(&case, CorotationalPolicy::AutoDerive, &samples);
            eprintln!("{} {:?} {:?} {:?}", v.case, v.status, t.elapsed(), v.bounds);
            for c in &v.certificates {
                if !c.pass {
                    eprintln!("  {:?} {:?}", c.kind, c.detail);
                }
                assert!(c.reverify(), "{:?}", c.kind);
            }
            assert!(v.passed());
        }
    }
}

