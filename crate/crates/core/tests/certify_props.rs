use std::sync::LazyLock;

use modecert::certify::{abs_sq_on_axis, ratio_at};
use modecert::exactmath::{int, rat, CRational, MultiPoly, RationalExpr, Var};
use modecert::recurrence::{
    coeff_ab, error_coeffs, quasisolution, quasisolution_limit_is_one, ratio_sequence, series_coefficients, table4,
};
use modecert::standardform::to_heun_symbolic;
use modecert::{Family, ModeCase};
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn finite_cases() -> Vec<ModeCase> {
    [(1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
        .into_iter()
        .map(|(l, m)| ModeCase::Finite { l, m })
        .collect()
}

fn all_cases() -> Vec<ModeCase> {
    finite_cases().into_iter().chain(Family::ALL.map(ModeCase::Family)).collect()
}

fn samples() -> Vec<CRational> {
    [(0, 0), (1, 0), (0, 2), (1, 3), (0, 10), (5, -7)].map(|(a, b)| CRational::from_ints(a, b)).to_vec()
}

#[test]
fn series_and_ratios_are_consistent_and_nonvanishing() {
    for case in all_cases() {
        let h = to_heun_symbolic(&case).unwrap();
        let ls: Vec<Option<i64>> = match case.family() {
            Some(f) => (f.threshold() as i64..f.threshold() as i64 + 3).map(Some).collect(),
            None => vec![None],
        };
        for l in ls {
            for lam in samples() {
                let xs = series_coefficients(&h, &lam, l, 41).unwrap();
                let rs = ratio_sequence(&case, &lam, l, 40).unwrap();
                for k in 0..=40 {
                    assert!(!xs[k].is_zero(), "{case} l={l:?} {lam} x_{k}");
                    assert_eq!(&xs[k] * &rs[k], xs[k + 1], "{case} l={l:?} {lam} n={k}");
                }
            }
        }
    }
}

#[test]
fn quasisolutions_tend_to_one() {
    for case in all_cases() {
        assert!(quasisolution_limit_is_one(&quasisolution(&case).unwrap()), "{case}");
    }
}

/// Roots of a real polynomial (ascending coefficients) from the companion matrix.
fn roots(coeffs: &[BigRational]) -> Vec<nalgebra::Complex<f64>> {
    let deg = coeffs.len() - 1;
    let lead = &coeffs[deg];
    let monic: Vec<f64> = coeffs.iter().map(|c| (c / lead).to_f64().unwrap()).collect();
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -monic[i];
    }
    m.complex_eigenvalues().iter().copied().collect()
}

#[test]
fn wall_denominators_have_roots_in_left_half_plane() {
    for case in finite_cases() {
        let n0 = table4(&case).map(|r| r.n0).unwrap_or(2);
        let d = ratio_at(&coeff_ab(&case).unwrap(), n0);
        let u = d.den().to_univariate(Var::X).unwrap();
        let rs = roots(&u);
        assert_eq!(rs.len(), u.len() - 1);
        for z in rs {
            assert!(z.re < 0.0, "{case}: root {z}");
        }
    }
}

/// `|a_n(it)|^2` parts and the bound, per case and l sample.
struct BoundData {
    label: String,
    n0: u32,
    l: Option<i64>,
    parts: Vec<(MultiPoly, MultiPoly, RationalExpr)>,
}

static BOUNDS: LazyLock<Vec<BoundData>> = LazyLock::new(|| {
    let mut out = Vec::new();
    for case in all_cases() {
        let Ok(row) = table4(&case) else { continue };
        let m = error_coeffs(&case).unwrap();
        let ls: Vec<Option<i64>> = match case.family() {
            Some(f) => (f.bound_l_shift() as i64..f.bound_l_shift() as i64 + 4).map(Some).collect(),
            None => vec![None],
        };
        for l in ls {
            let parts = [(&m.a_n, &row.abar), (&m.b_n, &row.bbar)]
                .into_iter()
                .map(|(e, b)| (abs_sq_on_axis(e.num()), abs_sq_on_axis(e.den()), b.clone()))
                .collect();
            out.push(BoundData { label: case.label(), n0: row.n0, l, parts });
        }
    }
    out
});

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn bounds_hold_at_random_points(which in 0usize..64, dn in 0i64..300, tn in 0i64..2000, td in 1i64..20) {
        let data = &BOUNDS[which % BOUNDS.len()];
        let n = int(data.n0 as i64 + dn);
        let t = rat(tn, td);
        let mut point = vec![(Var::N, n.clone()), (Var::T, &t * &t)];
        if let Some(l) = data.l {
            point.push((Var::L, int(l)));
        }
        for (f, g, bound) in &data.parts {
            let fv = f.eval(&point).unwrap();
            let gv = g.eval(&point).unwrap();
            let mut at_n = vec![(Var::N, n.clone())];
            if let Some(l) = data.l {
                at_n.push((Var::L, int(l)));
            }
            let b = bound.eval(&at_n).unwrap();
            prop_assert!(gv > BigRational::zero());
            prop_assert!(fv <= &b * &b * &gv, "{} l={:?} n={} t={}", data.label, data.l, n, t);
        }
    }
}
