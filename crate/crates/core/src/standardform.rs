//! Reduction of the transformed mode equation to hypergeometric form
//! (case (0,1)) and to canonical Heun form (l > 0).
//!
//! Equations are carried in normalized form `y'' + p y' + q y = 0` and
//! transported by changes of variable and conjugation, so multivalued
//! factors never have to be evaluated.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cases::ModeCase;
use crate::error::{Error, Result};
use crate::exactmath::{expr, int, poly, rat, FormalPower, MultiPoly, RationalExpr, Var};
use crate::odesystem::{LinearOde2, ModeODE};

const Z: Var = Var::Z;
const R: Var = Var::R;

/// `y'' + p y' + q y = 0` in `var`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub var: Var,
    pub p: RationalExpr,
    pub q: RationalExpr,
}

impl NormalForm {
    pub fn from_ode(ode: &LinearOde2) -> Self {
        let (p, q) = ode.normalized();
        Self { var: ode.var, p, q }
    }

    pub fn to_ode(&self) -> LinearOde2 {
        LinearOde2 {
            var: self.var,
            p2: RationalExpr::one(),
            p1: self.p.clone(),
            p0: self.q.clone(),
        }
    }

    /// Old variable `u = tau(s)` with `tau` a rational function of the new
    /// variable `new_var`: p -> p(tau) tau' - tau''/tau', q -> q(tau) tau'^2.
    pub fn change_variable(&self, new_var: Var, tau: &RationalExpr) -> Result<Self> {
        let d1 = tau.derivative(new_var);
        let d2 = d1.derivative(new_var);
        let p_t = self.p.subs(self.var, tau)?;
        let q_t = self.q.subs(self.var, tau)?;
        let p = &(&p_t * &d1) - &(&d2 / &d1);
        let q = &(&q_t * &d1) * &d1;
        Ok(Self { var: new_var, p, q })
    }

    /// The equation for `psi` where `y = h psi`.
    pub fn conjugate(&self, h: &FormalPower) -> Self {
        let l = h.log_derivative(self.var);
        let p = &self.p + &l.scale(&int(2));
        let q = &(&(&self.q + &(&self.p * &l)) + &l.derivative(self.var)) + &(&l * &l);
        Self { var: self.var, p, q }
    }

    /// The `z = r^2` step: `y_zz + (2 + 2 r p)/(4z) y_z + q/(4z) y = 0`,
    /// which requires `r p` and `q` to be even in `r`.
    pub fn square_variable(&self) -> Result<Self> {
        let rp = &RationalExpr::var(R) * &self.p;
        let odd = || Error::UnsupportedCase("coefficients are not even in r".into());
        let rp_z = even_to_z(&rp).ok_or_else(odd)?;
        let q_z = even_to_z(&self.q).ok_or_else(odd)?;
        let four_z = expr("4*z");
        let p = &(&RationalExpr::int(2) + &rp_z.scale(&int(2))) / &four_z;
        let q = &q_z / &four_z;
        Ok(Self { var: Z, p, q })
    }
}

/// Rewrite an even rational function of `r` in terms of `z = r^2`.
pub fn even_to_z(e: &RationalExpr) -> Option<RationalExpr> {
    let (mut n, mut d) = (e.num().clone(), e.den().clone());
    let all_odd = |p: &MultiPoly| p.terms().all(|(ex, _)| ex[R.index()] % 2 == 1);
    if !n.is_zero() && all_odd(&n) && all_odd(&d) {
        n = &n * &MultiPoly::var(R);
        d = &d * &MultiPoly::var(R);
    }
    let halve = |p: &MultiPoly| -> Option<MultiPoly> {
        let mut terms = Vec::new();
        for (ex, c) in p.terms() {
            if ex[R.index()] % 2 == 1 || ex[Z.index()] != 0 {
                return None;
            }
            let mut e2 = *ex;
            e2[Z.index()] = e2[R.index()] / 2;
            e2[R.index()] = 0;
            terms.push((e2, c.clone()));
        }
        Some(MultiPoly::from_terms(terms))
    };
    RationalExpr::new(halve(&n)?, halve(&d)?).ok()
}

/// Residue of `p` at the simple pole `at`: `((z - at) p)(at)`.
fn residue(p: &RationalExpr, v: Var, at: i64) -> Result<RationalExpr> {
    let local = &RationalExpr::var(v) - &RationalExpr::int(at);
    Ok((&local * p).eval_var(v, &int(at))?)
}

fn rational_expr_sqrt(e: &RationalExpr) -> Option<RationalExpr> {
    RationalExpr::new(e.num().sqrt()?, e.den().sqrt()?).ok()
}

/// The two roots of `t^2 - s t + prod`, larger branch first.
fn split_sum_product(s: &RationalExpr, prod: &RationalExpr) -> Option<(RationalExpr, RationalExpr)> {
    let disc = &(s * s) - &prod.scale(&int(4));
    let root = rational_expr_sqrt(&disc)?;
    let h = rat(1, 2);
    Some(((s + &root).scale(&h), (s - &root).scale(&h)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypergeomParams {
    pub a: RationalExpr,
    pub b: RationalExpr,
    pub c: RationalExpr,
}

/// The transformed (0,1) equation in `z = r^2`, before the ansatz.
pub fn hypergeometric_z_equation() -> Result<NormalForm> {
    let ode = ModeODE::new(&ModeCase::Finite { l: 0, m: 1 }, &MultiPoly::var(Var::X), true)?;
    NormalForm::from_ode(&ode.operator()).square_variable()
}

pub fn to_hypergeometric_symbolic() -> Result<HypergeomParams> {
    let zeq = hypergeometric_z_equation()?;
    let psi = zeq.conjugate(&FormalPower::single(poly("z"), MultiPoly::one()));
    let c = residue(&psi.p, Z, 0)?;
    let res1 = residue(&psi.p, Z, 1)?;
    let expected_p = &(&c / &RationalExpr::var(Z)) + &(&res1 / &expr("z - 1"));
    let ab = &psi.q * &expr("z*(z - 1)");
    if expected_p != psi.p || ab.contains_var(Z) {
        return Err(Error::UnsupportedCase("(0,1) equation is not hypergeometric".into()));
    }
    let sum = &(&res1 + &c) - &RationalExpr::one();
    let (a, b) = split_sum_product(&sum, &ab)
        .ok_or_else(|| Error::UnsupportedCase("hypergeometric exponents are not rational".into()))?;
    let params = HypergeomParams { a, b, c };
    let expected = HypergeomParams {
        a: expr("(3 + x)/2"),
        b: expr("(2 + x)/2"),
        c: expr("7/2"),
    };
    if params != expected {
        return Err(Error::TableMismatch {
            case: "(0,1)".into(),
            what: "hypergeometric parameters".into(),
            derived: format!("({}, {}, {})", params.a, params.b, params.c),
            table: format!("({}, {}, {})", expected.a, expected.b, expected.c),
        });
    }
    // the derived equation must be the canonical one rebuilt from (a, b, c)
    if hypergeometric_canonical(&params) != psi {
        return Err(Error::UnsupportedCase("hypergeometric round trip failed".into()));
    }
    Ok(params)
}

/// `u'' + (c/z + (1+a+b-c)/(z-1)) u' + ab/(z(z-1)) u = 0`
pub fn hypergeometric_canonical(h: &HypergeomParams) -> NormalForm {
    let one = RationalExpr::one();
    let e = &(&(&one + &h.a) + &h.b) - &h.c;
    let p = &(&h.c / &RationalExpr::var(Z)) + &(&e / &expr("z - 1"));
    let q = &(&h.a * &h.b) / &expr("z*(z - 1)");
    NormalForm { var: Z, p, q }
}

/// Hypergeometric parameters at a concrete rational rate (or symbolic `x`).
pub fn to_hypergeometric(lambda: &MultiPoly) -> Result<HypergeomParams> {
    let s = to_hypergeometric_symbolic()?;
    let at = |e: &RationalExpr| -> Result<RationalExpr> {
        Ok(e.subs(Var::X, &RationalExpr::from_poly(lambda.clone()))?)
    };
    Ok(HypergeomParams { a: at(&s.a)?, b: at(&s.b)?, c: at(&s.c)? })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeunParams {
    pub gamma: RationalExpr,
    pub delta: RationalExpr,
    pub epsilon: RationalExpr,
    pub alpha: RationalExpr,
    pub beta: RationalExpr,
    pub a: BigRational,
    pub q: RationalExpr,
}

impl HeunParams {
    pub fn alpha_beta(&self) -> RationalExpr {
        &self.alpha * &self.beta
    }

    /// `eps = alpha + beta - gamma - delta + 1`
    pub fn infinity_regular(&self) -> bool {
        let rhs = &(&(&(&self.alpha + &self.beta) - &self.gamma) - &self.delta) + &RationalExpr::one();
        rhs == self.epsilon
    }

    pub fn canonical(&self) -> NormalForm {
        let a = RationalExpr::constant(self.a.clone());
        let z = RationalExpr::var(Z);
        let one = RationalExpr::one();
        let p = &(&(&self.gamma / &z) + &(&self.delta / &(&z - &one))) + &(&self.epsilon / &(&z - &a));
        let den = &(&z * &(&z - &one)) * &(&z - &a);
        let q = &(&(&self.alpha_beta() * &z) - &self.q) / &den;
        NormalForm { var: Z, p, q }
    }

    /// `1 - gamma` is not a non-negative integer: gamma is a half-integer
    /// `>= 5/2` (for families: on the whole range `l >= threshold`).
    pub fn gamma_admissible(&self, l_min: u32) -> bool {
        let Some(g) = self.gamma.to_poly() else {
            return false;
        };
        if !g.only_vars(&[Var::L]) || g.degree(Var::L) > 1 {
            return false;
        }
        // 2 gamma = b + s l must be an odd integer >= 5 for every integer l >= l_min
        let cs = g.scale(&int(2)).coeffs_in(Var::L);
        let b = cs.first().map_or_else(BigRational::zero, |c| c.constant_term());
        let s = cs.get(1).map_or_else(BigRational::zero, |c| c.constant_term());
        let even = |v: &BigRational| v.is_integer() && (v.to_integer() % 2i32).is_zero();
        let odd = b.is_integer() && !even(&b);
        odd && even(&s) && !s.is_negative() && &b + &(&s * int(l_min as i64)) >= int(5)
    }

    pub fn eval_lambda(&self, v: &BigRational) -> Result<HeunParams> {
        self.eval_var(Var::X, v)
    }

    /// Fix `l` in a family's parameters.
    pub fn at_l(&self, l: i64) -> Result<HeunParams> {
        self.eval_var(Var::L, &int(l))
    }

    fn eval_var(&self, var: Var, v: &BigRational) -> Result<HeunParams> {
        let at = |e: &RationalExpr| e.eval_var(var, v);
        Ok(HeunParams {
            gamma: at(&self.gamma)?,
            delta: at(&self.delta)?,
            epsilon: at(&self.epsilon)?,
            alpha: at(&self.alpha)?,
            beta: at(&self.beta)?,
            a: self.a.clone(),
            q: at(&self.q)?,
        })
    }
}

/// Per-case conjugation factor h with `phi = h psi`.
pub fn h_factor(case: &ModeCase) -> FormalPower {
    let x = MultiPoly::var(Var::X);
    let half = rat(1, 2);
    let (zexp, wexp) = match case.lm() {
        Some((1, 0)) => (MultiPoly::one(), x.scale(&half)),
        Some((1, 1)) => (MultiPoly::one(), (&x - &MultiPoly::one()).scale(&half)),
        Some((2, 1)) => (MultiPoly::constant(rat(3, 2)), x.scale(&half)),
        _ => (case.l_expr().scale(&half), x.scale(&half)),
    };
    let mut h = FormalPower::single(poly("z"), zexp);
    h.push(poly("2 - z"), wexp);
    h
}

/// After `z = r^2` and the Moebius map, before the ansatz.
pub fn heun_pre_ansatz(case: &ModeCase) -> Result<NormalForm> {
    if case.lm().is_some_and(|(l, _)| l == 0) {
        return Err(Error::InvalidIndex(0, 1));
    }
    let ode = ModeODE::new(case, &MultiPoly::var(Var::X), true)?;
    let zeq = NormalForm::from_ode(&ode.operator()).square_variable()?;
    zeq.change_variable(Z, &expr("z/(2 - z)"))
}

/// Published form of the Moebius-mapped equation, with `Vt` supplied.
pub fn heun_pre_ansatz_display(case: &ModeCase) -> Result<NormalForm> {
    let ode = ModeODE::new(case, &MultiPoly::var(Var::X), true)?;
    let vt_z = even_to_z(&ode.potential)
        .ok_or_else(|| Error::UnsupportedCase("potential is not even".into()))?
        .subs(Z, &expr("z/(2 - z)"))?;
    let p = expr("3/(2*z) + (1/2 - x)/(z - 2) + x/(z - 1)");
    let q = &(&expr("x^2 + x") + &vt_z) / &expr("2*(z - 2)^2*(z - 1)*z");
    Ok(NormalForm { var: Z, p, q })
}

/// p_{l,m} and q_{l,m} as printed.
pub fn published_pq(case: &ModeCase) -> (RationalExpr, RationalExpr) {
    let den = "(4*(z - 2)*(z - 1)*z)";
    let (p, qn) = match case.lm() {
        Some((1, 0)) => (
            expr("7/(2*z) + x/(z - 1) + 1/(2*(z - 2))"),
            expr("z*(x^2 + 6*x + 8) - x^2 - 12*x - 12"),
        ),
        Some((1, 1)) => (
            expr("7/(2*z) + x/(z - 1) - 1/(2*(z - 2))"),
            expr("z*(x^2 + 4*x + 3) - x^2 - 12*x - 7"),
        ),
        Some((2, 1)) => (
            expr("9/(2*z) + x/(z - 1) + 1/(2*(z - 2))"),
            expr("z*(x^2 + 8*x + 15) - x^2 - 16*x - 27"),
        ),
        _ => {
            let p = expr("(2*l + 3)/(2*z) + x/(z - 1) + 1/(2*(z - 2))");
            // m is spelled n here and substituted below
            let qn = expr("z*((x - 2)*(x + 4) + l^2 + 2*x*l + 2*l) - l^2 - 4*x*l - 2*l - 2*n^2 - 2*n - x^2 - 4*x + 12");
            let sub = |e: &RationalExpr| {
                e.subs(Var::N, &RationalExpr::from_poly(case.m_expr()))
                    .and_then(|e| e.subs(Var::L, &RationalExpr::from_poly(case.l_expr())))
                    .expect("polynomial substitution")
            };
            (sub(&p), sub(&qn))
        }
    };
    (p, &qn / &expr(den))
}

/// Full Heun reduction with every intermediate display checked.
pub fn to_heun_symbolic(case: &ModeCase) -> Result<HeunParams> {
    let label = case.label();
    let mm = |what: &str, d: &RationalExpr, t: &RationalExpr| Error::TableMismatch {
        case: label.clone(),
        what: what.into(),
        derived: d.to_string(),
        table: t.to_string(),
    };
    let pre = heun_pre_ansatz(case)?;
    let shown = heun_pre_ansatz_display(case)?;
    if pre.p != shown.p {
        return Err(mm("Moebius-mapped p", &pre.p, &shown.p));
    }
    if pre.q != shown.q {
        return Err(mm("Moebius-mapped q", &pre.q, &shown.q));
    }
    let psi = pre.conjugate(&h_factor(case));
    let (pp, qp) = published_pq(case);
    if psi.p != pp {
        return Err(mm("p", &psi.p, &pp));
    }
    if psi.q != qp {
        return Err(mm("q", &psi.q, &qp));
    }
    let gamma = residue(&psi.p, Z, 0)?;
    let delta = residue(&psi.p, Z, 1)?;
    let epsilon = residue(&psi.p, Z, 2)?;
    let qnum = (&psi.q * &expr("z*(z - 1)*(z - 2)"))
        .to_poly()
        .ok_or_else(|| Error::UnsupportedCase(format!("{label}: q has extra poles")))?;
    if qnum.degree(Z) > 1 {
        return Err(Error::UnsupportedCase(format!("{label}: q numerator not linear in z")));
    }
    let cz = qnum.coeffs_in(Z);
    let ab = RationalExpr::from_poly(cz.get(1).cloned().unwrap_or_else(MultiPoly::zero));
    let q = RationalExpr::from_poly(-cz[0].clone());
    let sum = &(&(&gamma + &delta) + &epsilon) - &RationalExpr::one();
    let (alpha, beta) = split_sum_product(&sum, &ab)
        .ok_or_else(|| Error::UnsupportedCase(format!("{label}: alpha, beta not polynomial")))?;
    let params = HeunParams { gamma, delta, epsilon, alpha, beta, a: int(2), q };
    if params.canonical() != psi {
        return Err(Error::UnsupportedCase(format!("{label}: canonical form does not reproduce p, q")));
    }
    Ok(params)
}

pub fn to_heun(case: &ModeCase, lambda: Option<&BigRational>) -> Result<HeunParams> {
    let s = to_heun_symbolic(case)?;
    match lambda {
        Some(v) => s.eval_lambda(v),
        None => Ok(s),
    }
}

/// Transport the canonical Heun equation back to the transformed mode
/// equation in `r` and compare exactly.
pub fn heun_round_trip(case: &ModeCase, params: &HeunParams) -> Result<bool> {
    let back = params.canonical().conjugate(&h_factor(case).inverse());
    // new z = 2 old z / (1 + old z)
    let unmapped = back.change_variable(Z, &expr("2*z/(1 + z)"))?;
    let in_r = unmapped.change_variable(R, &expr("r^2"))?;
    let ode = ModeODE::new(case, &MultiPoly::var(Var::X), true)?;
    Ok(in_r == NormalForm::from_ode(&ode.operator()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionSummary {
    pub case: String,
    pub params: Vec<(String, String)>,
    pub infinity_regular: bool,
    pub gamma_admissible: bool,
    pub round_trip: bool,
}

pub fn reduction_summary(case: &ModeCase) -> Result<ReductionSummary> {
    if case.lm() == Some((0, 1)) {
        let h = to_hypergeometric_symbolic()?;
        return Ok(ReductionSummary {
            case: case.label(),
            params: vec![
                ("a".into(), h.a.to_string()),
                ("b".into(), h.b.to_string()),
                ("c".into(), h.c.to_string()),
            ],
            infinity_regular: true,
            gamma_admissible: true,
            round_trip: true,
        });
    }
    let h = to_heun_symbolic(case)?;
    let l_min = case.family().map_or(0, |f| f.threshold());
    Ok(ReductionSummary {
        case: case.label(),
        params: vec![
            ("gamma".into(), h.gamma.to_string()),
            ("delta".into(), h.delta.to_string()),
            ("epsilon".into(), h.epsilon.to_string()),
            ("alpha".into(), h.alpha.to_string()),
            ("beta".into(), h.beta.to_string()),
            ("a".into(), h.a.to_string()),
            ("q".into(), h.q.to_string()),
        ],
        infinity_regular: h.infinity_regular(),
        gamma_admissible: h.gamma_admissible(l_min),
        round_trip: heun_round_trip(case, &h)?,
    })
}
