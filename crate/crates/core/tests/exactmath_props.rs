use modecert::exactmath::{
    int, nonpositive_on_halfline, poly_divmod, rat, text, univariate, MultiPoly, RationalExpr, Var,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

/// Random sparse polynomial in n, l, x of small degree.
fn poly3() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u32..3, 0u32..3, 0u32..3, small_rat()), 0..7).prop_map(|terms| {
        terms.into_iter().fold(MultiPoly::zero(), |acc, (a, b, c, k)| {
            let m = &(&MultiPoly::var_pow(Var::N, a) * &MultiPoly::var_pow(Var::L, b)) * &MultiPoly::var_pow(Var::X, c);
            &acc + &m.scale(&k)
        })
    })
}

fn upoly(max_len: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(small_rat(), 0..max_len).prop_map(univariate::trim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shift_is_invertible(p in poly3(), s in small_rat(), k in 0usize..3) {
        let v = [Var::N, Var::L, Var::X][k];
        prop_assert_eq!(p.shift(v, &s).shift(v, &-s.clone()), p);
    }

    #[test]
    fn univariate_divmod_reconstructs(num in upoly(8), den in upoly(5)) {
        prop_assume!(!den.is_empty());
        let (q, r) = univariate::divmod(&num, &den);
        prop_assert!(r.len() < den.len());
        let qp = MultiPoly::from_univariate(Var::X, &q);
        let dp = MultiPoly::from_univariate(Var::X, &den);
        let rp = MultiPoly::from_univariate(Var::X, &r);
        prop_assert_eq!(&(&qp * &dp) + &rp, MultiPoly::from_univariate(Var::X, &num));
    }

    #[test]
    fn multivariate_divmod_reconstructs(num in poly3(), den in upoly(4)) {
        prop_assume!(den.len() >= 2);
        let d = MultiPoly::from_univariate(Var::X, &den);
        let (q, r) = poly_divmod(&num, &d, Var::X).unwrap();
        prop_assert!(r.is_zero() || r.degree(Var::X) < d.degree(Var::X));
        prop_assert_eq!(&(&q.to_poly().unwrap() * &d) + &r, num);
    }

    #[test]
    fn halfline_pass_is_sound(
        neg in prop::collection::vec(0i64..6, 1..6),
        bump in small_rat(),
        start in 0i64..4,
        pts in prop::collection::vec((0i64..400, 1i64..7), 1000),
    ) {
        // p(v) = q(v - start) + bump v, q with nonpositive coefficients
        let q: Vec<BigRational> = neg.iter().map(|c| int(-c)).collect();
        let p = &MultiPoly::from_univariate(Var::T, &q).shift(Var::T, &int(-start))
            + &MultiPoly::var(Var::T).scale(&bump);
        let c = nonpositive_on_halfline(&p, Var::T, &int(start));
        if c.pass {
            for (a, b) in pts {
                let v0 = int(start) + rat(a, b);
                prop_assert!(p.eval(&[(Var::T, v0)]).unwrap() <= int(0));
            }
        }
    }

    #[test]
    fn sturm_count_matches_sign_changes(
        halves in prop::collection::btree_set(-12i64..12, 0..5),
        c in 1i64..5,
        lead in prop_oneof![Just(1i64), Just(-2), Just(3)],
        lo in -14i64..0,
        width in 1i64..28,
    ) {
        // roots at k/2, plus x^2 + c with none; grid at j/2 + 1/4 separates them
        let mut p = MultiPoly::int(lead) * &(&MultiPoly::var_pow(Var::X, 2) + &MultiPoly::int(c));
        for k in &halves {
            p = &p * &(&MultiPoly::var(Var::X) - &MultiPoly::constant(rat(*k, 2)));
        }
        let u = p.to_univariate(Var::X).unwrap();
        let at = |j: i64| rat(2 * j + 1, 4);
        let (a, b) = (at(lo), at(lo + width));
        let mut changes = 0;
        for j in lo..lo + width {
            let (s0, s1) = (univariate::eval(&u, &at(j)), univariate::eval(&u, &at(j + 1)));
            if (s0 < int(0)) != (s1 < int(0)) {
                changes += 1;
            }
        }
        prop_assert_eq!(univariate::count_roots(&u, &a, &b), changes);
    }

    #[test]
    fn text_round_trip(p in poly3(), q in poly3()) {
        prop_assert_eq!(text::parse_poly(&p.to_string()).unwrap(), p.clone());
        if !q.is_zero() {
            let e = RationalExpr::new(p, q).unwrap();
            prop_assert_eq!(text::parse_expr(&e.to_string()).unwrap(), e);
        }
    }
}
