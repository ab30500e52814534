//! Frobenius series at z = 0 of the Heun equation: the three-term
//! recurrence, the ratio sequence, the quasisolutions and the coefficients
//! of the relative-error recurrence.

use num_rational::BigRational;

use crate::cases::{Family, ModeCase};
use crate::error::{Error, Result};
use crate::exactmath::{expr, int, poly, rat, CRational, MultiPoly, RationalExpr, Var};
use crate::standardform::{to_heun_symbolic, HeunParams};

const N: Var = Var::N;

#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCoeffs {
    pub r_n: MultiPoly,
    pub p_n: MultiPoly,
    pub q_n: MultiPoly,
    /// accessory parameter q
    pub q: MultiPoly,
    pub a_n: RationalExpr,
    pub b_n: RationalExpr,
    /// r_0 = q / (a gamma)
    pub r0: RationalExpr,
}

fn as_poly(e: &RationalExpr, what: &str) -> Result<MultiPoly> {
    e.to_poly()
        .ok_or_else(|| Error::UnsupportedCase(format!("{what} is not polynomial")))
}

/// R_n x_{n+1} - (Q_n + q) x_n + P_n x_{n-1} = 0
pub fn recurrence_from_heun(h: &HeunParams) -> Result<RecurrenceCoeffs> {
    let n = MultiPoly::var(N);
    let one = MultiPoly::one();
    let a = MultiPoly::constant(h.a.clone());
    let gamma = as_poly(&h.gamma, "gamma")?;
    let delta = as_poly(&h.delta, "delta")?;
    let eps = as_poly(&h.epsilon, "epsilon")?;
    let alpha = as_poly(&h.alpha, "alpha")?;
    let beta = as_poly(&h.beta, "beta")?;
    let q = as_poly(&h.q, "q")?;
    let nm1 = &n - &one;
    let r_n = &(&a * &(&n + &one)) * &(&gamma + &n);
    let p_n = &(&nm1 + &alpha) * &(&nm1 + &beta);
    let inner = &(&(&(&nm1 + &gamma) * &(&one + &a)) + &(&a * &delta)) + &eps;
    let q_n = &n * &inner;
    let a_n = RationalExpr::new(&q_n + &q, r_n.clone())?;
    let b_n = RationalExpr::new(-&p_n, r_n.clone())?;
    let r0 = RationalExpr::new(q.clone(), &a * &gamma)?;
    Ok(RecurrenceCoeffs { r_n, p_n, q_n, q, a_n, b_n, r0 })
}

/// A_n and B_n exactly as printed.
pub fn published_ab(case: &ModeCase) -> (RationalExpr, RationalExpr) {
    match case.lm() {
        Some((1, 0)) => (
            expr("(x^2 + 12*x + 12*n^2 + 8*(x + 4)*n + 12)/(4*(2*n^2 + 9*n + 7))"),
            expr("-(x + 2*n)*(x + 2*n + 2)/(4*(n + 1)*(2*n + 7))"),
        ),
        Some((1, 1)) => (
            expr("(x^2 + 12*x + 12*n^2 + 8*x*n + 28*n + 7)/(8*n^2 + 36*n + 28)"),
            expr("-(x + 2*n - 1)*(x + 2*n + 1)/(4*(n + 1)*(2*n + 7))"),
        ),
        Some((2, 1)) => (
            expr("(x^2 + 16*x + 12*n^2 + 8*x*n + 44*n + 27)/(8*n^2 + 44*n + 36)"),
            expr("-(x + 2*n + 1)*(x + 2*n + 3)/(4*(n + 1)*(2*n + 9))"),
        ),
        _ => {
            // m is spelled z here, then substituted
            let a = expr("(x^2 + 4*x + l^2 + 2*l*(2*x + 6*n + 1) + 2*z^2 + 2*z + 12*n^2 + 8*x*n + 8*n - 12)/(4*(n + 1)*(2*l + 2*n + 3))");
            let b = expr("-(x + l + 2*n - 4)*(x + l + 2*n + 2)/(4*(n + 1)*(2*l + 2*n + 3))");
            let sub = |e: &RationalExpr| {
                e.subs(Var::Z, &RationalExpr::from_poly(case.m_expr()))
                    .and_then(|e| e.subs(Var::L, &RationalExpr::from_poly(case.l_expr())))
                    .expect("polynomial substitution")
            };
            (sub(&a), sub(&b))
        }
    }
}

/// Recurrence coefficients derived from the Heun parameters and checked
/// against the printed A_n, B_n.
pub fn coeff_ab(case: &ModeCase) -> Result<RecurrenceCoeffs> {
    if case.lm() == Some((0, 1)) {
        return Err(Error::UnsupportedCase(case.label()));
    }
    let rc = recurrence_from_heun(&to_heun_symbolic(case)?)?;
    let (a, b) = published_ab(case);
    for (what, d, t) in [("A_n", &rc.a_n, &a), ("B_n", &rc.b_n, &b)] {
        if d != t {
            return Err(Error::TableMismatch {
                case: case.label(),
                what: what.into(),
                derived: d.to_string(),
                table: t.to_string(),
            });
        }
    }
    Ok(rc)
}

/// `lim_{n -> inf} e` from leading coefficients in `n`; `None` if it diverges.
pub fn limit_n(e: &RationalExpr) -> Option<RationalExpr> {
    let dn = e.num().degree(N);
    let dd = e.den().degree(N);
    if dn > dd {
        return None;
    }
    if dn < dd {
        return Some(RationalExpr::zero());
    }
    RationalExpr::new(e.num().lc_in(N), e.den().lc_in(N)).ok()
}

/// Limits of A_n and B_n and, when rational, the roots of `t^2 - A t - B`.
pub fn poincare_data(rc: &RecurrenceCoeffs) -> Option<(BigRational, BigRational, Option<(BigRational, BigRational)>)> {
    let la = limit_n(&rc.a_n)?.constant_value()?;
    let lb = limit_n(&rc.b_n)?.constant_value()?;
    // t^2 - la t - lb = 0
    let disc = &la * &la + &lb * int(4);
    let roots = crate::exactmath::rational_sqrt(&disc).map(|s| {
        let h = rat(1, 2);
        ((&la + &s) * &h, (&la - &s) * &h)
    });
    Some((la, lb, roots))
}

/// Quasisolutions as printed.
pub fn quasisolution(case: &ModeCase) -> Result<RationalExpr> {
    let fam = |c3: &str, last: &str| {
        expr(&format!(
            "x^2/(l*(8*n + 8) + 8*n^2 + 20*n + 12) + x*(l + 2*n + 1)/(l*(2*n + 2) + 2*n^2 + 5*n + 3) + {c3}/(8*n + 8) + {last}"
        ))
    };
    let e = match case {
        ModeCase::Finite { l, m } => match (l, m) {
            (1, 0) => expr("x^2/(8*n^2 + 36*n + 28) + x*(2*n + 3)/(2*n^2 + 9*n + 7) + (2*n + 4)/(2*n + 7)"),
            (1, 1) => expr("x^2/(8*n^2 + 36*n + 28) + x*(2*n + 3)/(2*n^2 + 9*n + 7) + (15*n + 15)/(15*n + 40)"),
            (1, 2) => expr("x^2/(8*n^2 + 28*n + 20) + x*(2*n + 2)/(2*n^2 + 7*n + 5) + (2*n + 12)/(2*n + 14)"),
            (2, 1) => expr("x^2/(8*n^2 + 44*n + 36) + x*(2*n + 4)/(2*n^2 + 11*n + 9) + (2*n + 9)/(2*n + 12)"),
            (2, 2) => expr(
                "x^2/(8*n^2 + 20*n + 2*(8*n + 8) + 12) + x*(2*n + 3)/(2*n^2 + 5*n + 2*(2*n + 2) + 3) + (6*n + 30)/(6*n + 35)",
            ),
            (2, 3) => expr(
                "x^2/(8*n^2 + 20*n + 2*(8*n + 8) + 12) + x*(2*n + 3)/(2*n^2 + 5*n + 2*(2*n + 2) + 3) + (4*n + 42)/(4*n + 47)",
            ),
            // (3,2) and (3,3) use the family rows at l = 3
            (3, 2) => fam("3*(l - 3)", "(6*n + 11)/(6*n + 20)").eval_var(Var::L, &int(3))?,
            (3, 3) => fam("3*(l - 2)", "(n + 4)/(n + 6)").eval_var(Var::L, &int(3))?,
            _ => return Err(Error::UnsupportedCase(case.label())),
        },
        ModeCase::Family(Family::LMinus) => fam("3*(l - 3)", "(6*n + 11)/(6*n + 20)"),
        ModeCase::Family(Family::Diag) => fam("3*(l - 2)", "(n + 4)/(n + 6)"),
        ModeCase::Family(Family::LPlus) => fam("3*(l - 1)", "(2*n + 11)/(2*n + 15)"),
    };
    Ok(e)
}

/// `deg_n` of the numerator of `rtilde - 1` is below that of its denominator.
pub fn quasisolution_limit_is_one(rt: &RationalExpr) -> bool {
    let d = rt - &RationalExpr::one();
    d.num().degree(N) < d.den().degree(N)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table4Row {
    pub abar: RationalExpr,
    pub bbar: RationalExpr,
    pub n0: u32,
    pub u: BigRational,
}

pub fn table4(case: &ModeCase) -> Result<Table4Row> {
    let row = |a: &str, b: &str, n0: u32, u: BigRational| Table4Row { abar: expr(a), bbar: expr(b), n0, u };
    let t = rat(3, 10);
    Ok(match case {
        ModeCase::Finite { l, m } => match (l, m) {
            (1, 1) => row("(72 + 125*n)/(300*(-3 + 5*n))", "(-11 + 16*n)/(4*(-1 + 8*n))", 2, t),
            (1, 2) => row("(75*n + 266)/(150*(6*n + 1))", "(25*n - 11)/(50*(n + 1))", 4, rat(1, 3)),
            (2, 1) => row("(-71 + 100*n)/(300*(-5 + 4*n))", "(-37 + 50*n)/(25*(-1 + 4*n))", 2, t),
            (2, 2) => row("(125*n + 482)/(300*(5*n + 2))", "(400*n - 179)/(100*(8*n + 11))", 3, t),
            (2, 3) => row("(5*n + 12)/(60*n)", "(125*n - 96)/(50*(5*n + 1))", 2, t),
            (3, 2) => row("(125*n - 121)/(300*(5*n - 7))", "(400*n - 319)/(100*(8*n - 3))", 2, t),
            (3, 3) => row("(800*n - 443)/(600*(16*n - 19))", "(104*n - 133)/(8*(26*n - 27))", 3, t),
            _ => return Err(Error::NoBoundsRow(case.label())),
        },
        ModeCase::Family(Family::LMinus) => row(
            "(-1016 + 272*l + 125*n)/(300*(-23 + 5*l + 5*n))",
            "(-63 + 11*l + 20*n)/(20*(-9 + 2*l + 2*n))",
            2,
            t,
        ),
        ModeCase::Family(Family::Diag) => row(
            "(-2810 + 887*l + 512*n)/(48*(-515 + 128*l + 128*n))",
            "(-9842 + 2071*l + 2800*n)/(200*(-113 + 28*l + 28*n))",
            2,
            t,
        ),
        ModeCase::Family(Family::LPlus) => row(
            "(-27 + 10*l + 4*n)/(12*(-15 + 4*l + 4*n))",
            "(-29 + 5*l + 13*n)/(2*(-45 + 13*l + 13*n))",
            2,
            t,
        ),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorModel {
    pub a_n: RationalExpr,
    pub b_n: RationalExpr,
    pub bounds: Option<Table4Row>,
}

/// a_n = (A_n rt_{n-1} + B_n)/(rt_{n-1} rt_n) - 1,  b_n = -B_n/(rt_{n-1} rt_n)
pub fn error_coeffs_for(rc: &RecurrenceCoeffs, rt: &RationalExpr) -> (RationalExpr, RationalExpr) {
    let prev = rt.shift(N, &int(-1));
    let prod = &prev * rt;
    let a_n = &(&(&(&rc.a_n * &prev) + &rc.b_n) / &prod) - &RationalExpr::one();
    let b_n = -(&rc.b_n / &prod);
    (a_n, b_n)
}

/// The error model for a case. Without a bounds row (the co-rotational
/// case) the coefficients are still returned, with `bounds: None`.
pub fn error_coeffs(case: &ModeCase) -> Result<ErrorModel> {
    let rc = coeff_ab(case)?;
    let rt = quasisolution(case)?;
    let (a_n, b_n) = error_coeffs_for(&rc, &rt);
    let bounds = match table4(case) {
        Ok(row) => Some(row),
        Err(Error::NoBoundsRow(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ErrorModel { a_n, b_n, bounds })
}

/// `r_n` as an exact rational function of `x` (and `l` for families).
pub fn symbolic_ratio(rc: &RecurrenceCoeffs, n_max: u32) -> RationalExpr {
    let mut r = rc.r0.clone();
    for k in 1..=n_max {
        let a = rc.a_n.eval_var(N, &int(k as i64)).expect("R_n has no positive root");
        let b = rc.b_n.eval_var(N, &int(k as i64)).expect("R_n has no positive root");
        r = &a + &(&b / &r);
    }
    r
}

/// A polynomial in `n` with complex-rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CPolyN(pub Vec<CRational>);

impl CPolyN {
    /// Substitute `x = lambda` (and `l`) into a polynomial in `n, x, l`.
    pub fn from_poly(p: &MultiPoly, lambda: &CRational, l: Option<i64>) -> Result<Self> {
        let p = match l {
            Some(l) => p.eval_var(Var::L, &int(l)),
            None => p.clone(),
        };
        if !p.only_vars(&[N, Var::X]) {
            return Err(Error::UnsupportedCase("free variables besides n and x".into()));
        }
        let dx = p.degree(Var::X) as usize;
        let mut pows = vec![CRational::one()];
        for k in 1..=dx {
            pows.push(&pows[k - 1] * lambda);
        }
        let mut out = vec![CRational::zero(); p.degree(N) as usize + 1];
        for (e, c) in p.terms() {
            let t = &pows[e[Var::X.index()] as usize] * &CRational::real(c.clone());
            let slot = &mut out[e[N.index()] as usize];
            *slot = &*slot + &t;
        }
        Ok(Self(out))
    }

    pub fn eval(&self, n: i64) -> CRational {
        let nn = CRational::real(int(n));
        let mut acc = CRational::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * &nn) + c;
        }
        acc
    }
}

/// A rational function of `n` at fixed rate.
#[derive(Clone, Debug, PartialEq)]
pub struct CRatN {
    pub num: CPolyN,
    pub den: CPolyN,
}

impl CRatN {
    pub fn from_expr(e: &RationalExpr, lambda: &CRational, l: Option<i64>) -> Result<Self> {
        Ok(Self {
            num: CPolyN::from_poly(e.num(), lambda, l)?,
            den: CPolyN::from_poly(e.den(), lambda, l)?,
        })
    }

    pub fn eval(&self, n: i64) -> Option<CRational> {
        let d = self.den.eval(n);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(n) / &d)
    }
}

/// Recurrence data at a fixed rate, ready for iteration.
#[derive(Clone, Debug)]
pub struct ConcreteRecurrence {
    pub a_n: CRatN,
    pub b_n: CRatN,
    pub r0: CRational,
}

impl ConcreteRecurrence {
    pub fn new(rc: &RecurrenceCoeffs, lambda: &CRational, l: Option<i64>) -> Result<Self> {
        let r0 = CRatN::from_expr(&rc.r0, lambda, l)?
            .eval(0)
            .ok_or_else(|| Error::UnsupportedCase("a gamma vanishes".into()))?;
        Ok(Self {
            a_n: CRatN::from_expr(&rc.a_n, lambda, l)?,
            b_n: CRatN::from_expr(&rc.b_n, lambda, l)?,
            r0,
        })
    }
}

/// x_0 .. x_N of the Frobenius solution regular at z = 0.
pub fn series_coefficients(params: &HeunParams, lambda: &CRational, l: Option<i64>, n_max: usize) -> Result<Vec<CRational>> {
    let rc = recurrence_from_heun(params)?;
    let r = CPolyN::from_poly(&rc.r_n, lambda, l)?;
    let p = CPolyN::from_poly(&rc.p_n, lambda, l)?;
    let qq = CPolyN::from_poly(&(&rc.q_n + &rc.q), lambda, l)?;
    let q0 = CPolyN::from_poly(&rc.q, lambda, l)?.eval(0);
    let a_gamma = r.eval(0);
    let mut xs = vec![CRational::one()];
    if n_max == 0 {
        return Ok(xs);
    }
    xs.push(&q0 / &a_gamma);
    for k in 1..n_max {
        let kk = k as i64;
        let num = &(&qq.eval(kk) * &xs[k]) - &(&p.eval(kk) * &xs[k - 1]);
        xs.push(&num / &r.eval(kk));
    }
    Ok(xs)
}

/// r_0 .. r_N by r_n = A_n + B_n / r_{n-1}.
pub fn ratio_sequence_with(rec: &ConcreteRecurrence, n_max: usize) -> Result<Vec<CRational>> {
    let mut rs = vec![rec.r0.clone()];
    for k in 1..=n_max {
        let prev = &rs[k - 1];
        if prev.is_zero() {
            return Err(Error::RatioBreakdown(k));
        }
        let a = rec.a_n.eval(k as i64).ok_or(Error::RatioBreakdown(k))?;
        let b = rec.b_n.eval(k as i64).ok_or(Error::RatioBreakdown(k))?;
        rs.push(&a + &(&b / prev));
    }
    Ok(rs)
}

pub fn ratio_sequence(case: &ModeCase, lambda: &CRational, l: Option<i64>, n_max: usize) -> Result<Vec<CRational>> {
    let rc = coeff_ab(case)?;
    ratio_sequence_with(&ConcreteRecurrence::new(&rc, lambda, l)?, n_max)
}

/// `t^2 - 3/2 t + 1/2`, shared by every case.
pub fn characteristic_polynomial() -> MultiPoly {
    poly("T^2 - 3/2*T + 1/2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> CRational {
        CRational::from_ints(re, im)
    }

    #[test]
    fn coefficients_match_print() {
        for case in ModeCase::default_finite().into_iter().skip(1).chain(ModeCase::default_families()) {
            coeff_ab(&case).unwrap();
        }
    }

    #[test]
    fn values_at_n1() {
        let rc = coeff_ab(&ModeCase::Finite { l: 1, m: 0 }).unwrap();
        let at = |e: &RationalExpr| e.eval(&[(N, int(1)), (Var::X, int(0))]).unwrap();
        assert_eq!(at(&rc.a_n), rat(7, 9));
        assert_eq!(at(&rc.b_n), rat(-1, 9));
        assert_eq!(rc.r0.eval(&[(Var::X, int(0))]).unwrap(), rat(3, 7));
    }

    #[test]
    fn ratios_by_hand() {
        let rs = ratio_sequence(&ModeCase::Finite { l: 1, m: 0 }, &c(0, 0), None, 1).unwrap();
        assert_eq!(rs[0], CRational::real(rat(3, 7)));
        assert_eq!(rs[1], CRational::real(rat(14, 27)));
    }

    #[test]
    fn series_and_ratios_agree() {
        let case = ModeCase::Finite { l: 2, m: 2 };
        let h = to_heun_symbolic(&case).unwrap();
        let lam = c(1, 3);
        let xs = series_coefficients(&h, &lam, None, 51).unwrap();
        let rs = ratio_sequence(&case, &lam, None, 50).unwrap();
        for k in 0..=50 {
            assert_eq!(&xs[k] * &rs[k], xs[k + 1]);
        }
    }

    #[test]
    fn gauss_series_as_degenerate_heun() {
        // hypergeometric (a, b; c) = Heun with eps = 0 and q = a * alpha * beta
        let (a, b, cc) = (rat(3, 2), int(1), rat(7, 2));
        let h = HeunParams {
            gamma: RationalExpr::constant(cc.clone()),
            delta: RationalExpr::constant(&(&int(1) + &a) + &b - &cc),
            epsilon: RationalExpr::zero(),
            alpha: RationalExpr::constant(a.clone()),
            beta: RationalExpr::constant(b.clone()),
            a: int(2),
            q: RationalExpr::constant(&a * &b * int(2)),
        };
        let xs = series_coefficients(&h, &c(0, 0), None, 20).unwrap();
        let mut g = int(1);
        for (k, x) in xs.iter().enumerate() {
            assert_eq!(*x, CRational::real(g.clone()));
            let kk = int(k as i64);
            g = g * (&a + &kk) * (&b + &kk) / ((&cc + &kk) * (&kk + int(1)));
        }
    }

    #[test]
    fn poincare_limits() {
        for case in [ModeCase::Finite { l: 1, m: 0 }, ModeCase::Family(Family::Diag)] {
            let rc = coeff_ab(&case).unwrap();
            let (la, lb, roots) = poincare_data(&rc).unwrap();
            assert_eq!((la, lb), (rat(3, 2), rat(-1, 2)));
            assert_eq!(roots.unwrap(), (int(1), rat(1, 2)));
        }
    }

    #[test]
    fn quasisolutions() {
        let q = quasisolution(&ModeCase::Finite { l: 2, m: 3 }).unwrap();
        let last = q.eval(&[(Var::X, int(0)), (N, int(1))]).unwrap();
        assert_eq!(last, rat(46, 51));
        for case in ModeCase::default_finite().into_iter().skip(1).chain(ModeCase::default_families()) {
            assert!(quasisolution_limit_is_one(&quasisolution(&case).unwrap()));
        }
        assert!(quasisolution(&ModeCase::Finite { l: 0, m: 1 }).is_err());
    }

    #[test]
    fn error_model() {
        let m = error_coeffs(&ModeCase::Finite { l: 1, m: 1 }).unwrap();
        let row = m.bounds.unwrap();
        assert_eq!(row.n0, 2);
        assert_eq!(row.u, rat(3, 10));
        let co = error_coeffs(&ModeCase::Finite { l: 1, m: 0 }).unwrap();
        assert!(co.bounds.is_none());
        assert!(matches!(table4(&ModeCase::Finite { l: 1, m: 0 }), Err(Error::NoBoundsRow(_))));
        // rt = 1 gives b_n = -B_n
        let rc = coeff_ab(&ModeCase::Finite { l: 1, m: 1 }).unwrap();
        let (_, b) = error_coeffs_for(&rc, &RationalExpr::one());
        assert_eq!(b, -rc.b_n.clone());
    }
}
