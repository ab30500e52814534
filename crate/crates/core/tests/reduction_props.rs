use modecert::exactmath::{int, rat, MultiPoly, RationalExpr, Var};
use modecert::odesystem::{potential, susy_transform, taylor, transformed_potential, ModeODE};
use modecert::spherical::{clebsch_gordan_basis, sphere_inner};
use modecert::standardform::to_heun_symbolic;
use modecert::{Family, ModeCase};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

const SPECIAL: [(u32, u32); 4] = [(0, 1), (1, 0), (1, 1), (2, 1)];

/// Local solution at `r = 1/2` with `y(1/2) = c0`, `y'(1/2) = c1`, as a
/// polynomial in `r` of degree `order`.
fn local_series(l: u32, m: u32, lambda: &BigRational, c0: BigRational, c1: BigRational, order: usize) -> RationalExpr {
    let case = ModeCase::finite(l as i64, m as i64).unwrap();
    let ode = ModeODE::new(&case, &MultiPoly::constant(lambda.clone()), false).unwrap().operator();
    let at = rat(1, 2);
    let tay = |e: &RationalExpr| taylor(e, Var::R, &at, order).expect("regular at 1/2");
    let (a, b, d) = (tay(&ode.p2), tay(&ode.p1), tay(&ode.p0));
    let mut c = vec![c0, c1];
    for k in 0..order - 1 {
        // coefficient of h^k in p2 y'' + p1 y' + p0 y
        let mut s = BigRational::zero();
        for j in 0..=k {
            let i = k - j;
            if j > 0 {
                s += &a[j] * int(((i + 2) * (i + 1)) as i64) * &c[i + 2];
            }
            s += &b[j] * int((i + 1) as i64) * &c[i + 1];
            s += &d[j] * &c[i];
        }
        c.push(-s / (&a[0] * int(((k + 2) * (k + 1)) as i64)));
    }
    let in_h = MultiPoly::from_univariate(Var::R, &c);
    RationalExpr::from_poly(in_h.shift(Var::R, &-at))
}

fn vanishes_to(e: &RationalExpr, order: usize) -> bool {
    taylor(e, Var::R, &rat(1, 2), order).is_some_and(|t| t.iter().all(Zero::is_zero))
}

#[test]
fn local_series_solves_to_order() {
    let phi = local_series(1, 1, &int(0), int(1), int(0), 20);
    let case = ModeCase::Finite { l: 1, m: 1 };
    let res = ModeODE::new(&case, &MultiPoly::zero(), false).unwrap().residual(&phi);
    assert!(vanishes_to(&res, 18));
    assert!(!vanishes_to(&res, 20));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    // The series is built to order 20 and the transformed operator costs
    // two derivatives; S costs one more, two for the doubly factorized (0,1).
    #[test]
    fn transform_intertwines_local_solutions(
        which in 0usize..4,
        lam in (0i64..7, 1i64..3).prop_map(|(a, b)| rat(a, b)),
        c0 in (-5i64..6, 1i64..4).prop_map(|(a, b)| rat(a, b)),
        c1 in (-5i64..6, 1i64..4).prop_map(|(a, b)| rat(a, b)),
    ) {
        let (l, m) = SPECIAL[which];
        let phi = local_series(l, m, &lam, c0, c1, 20);
        let lam_p = MultiPoly::constant(lam.clone());
        let s = susy_transform(&phi, &lam_p, l, m).unwrap();
        let case = ModeCase::finite(l as i64, m as i64).unwrap();
        let res = ModeODE::new(&case, &lam_p, true).unwrap().residual(&s);
        let order = if (l, m) == (0, 1) { 16 } else { 17 };
        prop_assert!(vanishes_to(&res, order), "({l},{m}) at {lam}");
    }
}

#[test]
fn wrong_rate_does_not_intertwine() {
    // a local solution at rate 0, transformed as if it had rate 1
    let phi = local_series(1, 1, &int(0), int(1), int(0), 20);
    let s = susy_transform(&phi, &MultiPoly::one(), 1, 1).unwrap();
    let res = ModeODE::new(&ModeCase::Finite { l: 1, m: 1 }, &MultiPoly::one(), true).unwrap().residual(&s);
    assert!(!vanishes_to(&res, 2));
}

#[test]
fn trivial_extension_outside_special_cases() {
    for l in 0..=6u32 {
        for m in l.saturating_sub(1)..=l + 1 {
            if (l == 0 && m != 1) || SPECIAL.contains(&(l, m)) {
                continue;
            }
            assert_eq!(transformed_potential(l, m).unwrap(), potential(l, m).unwrap(), "({l},{m})");
        }
    }
}

#[test]
fn basis_gram_matrices() {
    // the printed (1,2) rows 1 and 4 (traceless diagonal parts) overlap;
    // every other pair is orthogonal
    for (l, m) in [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)] {
        let b = clebsch_gordan_basis(l, m).unwrap();
        assert_eq!(b.len() as u32, if (l, m) == (0, 1) { 3 } else { 2 * m + 1 });
        for i in 0..b.len() {
            assert!(sphere_inner(&b[i].components, &b[i].components) > int(0));
            for j in i + 1..b.len() {
                let g = sphere_inner(&b[i].components, &b[j].components);
                if (l, m, i, j) == (1, 2, 0, 3) {
                    assert_eq!(g, rat(-1, 3));
                } else {
                    assert!(g.is_zero(), "({l},{m}) {i} {j}");
                }
            }
        }
    }
}

#[test]
fn heun_tuples_satisfy_fuchs_relation() {
    let cases = [(1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
        .into_iter()
        .map(|(l, m)| ModeCase::Finite { l, m })
        .chain(Family::ALL.into_iter().map(ModeCase::Family));
    for case in cases {
        let h = to_heun_symbolic(&case).unwrap();
        let rhs = &(&(&(&h.alpha + &h.beta) - &h.gamma) - &h.delta) + &RationalExpr::one();
        assert_eq!(h.epsilon, rhs, "{case}");
        // 1 - gamma is not a nonnegative integer: gamma is a half-integer >= 5/2
        let l_min = case.family().map_or(0, |f| f.threshold());
        assert!(h.gamma_admissible(l_min), "{case}");
        let g = match case.lm() {
            Some(_) => h.gamma.constant_value().unwrap(),
            None => h.gamma.eval(&[(Var::L, int(l_min as i64))]).unwrap(),
        };
        assert!(g >= rat(5, 2) && (&g * int(2)).is_integer() && !g.is_integer(), "{case}");
    }
}

