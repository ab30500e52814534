//! Dense univariate polynomials over Q as ascending coefficient vectors.
//! The zero polynomial is the empty vector; no trailing zeros are kept.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type UPoly = Vec<BigRational>;

pub fn trim(mut p: UPoly) -> UPoly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &[BigRational]) -> UPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer((k as i64).into()))
            .collect(),
    )
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divmod(num: &[BigRational], den: &[BigRational]) -> (UPoly, UPoly) {
    let den = trim(den.to_vec());
    assert!(!den.is_empty(), "division by the zero polynomial");
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let dd = den.len() - 1;
    let lc_inv = den[dd].recip();
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    while rem.len() > dd && !rem.is_empty() {
        let k = rem.len() - 1 - dd;
        let c = &rem[rem.len() - 1] * &lc_inv;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub fn rem(num: &[BigRational], den: &[BigRational]) -> UPoly {
    divmod(num, den).1
}

/// Standard Sturm chain p, p', -rem(...), ...
pub fn sturm_sequence(p: &[BigRational]) -> Vec<UPoly> {
    let p0 = trim(p.to_vec());
    if p0.is_empty() {
        return Vec::new();
    }
    let mut seq = vec![p0.clone(), derivative(&p0)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        let neg: UPoly = r.into_iter().map(|c| -c).collect();
        seq.push(neg);
    }
    seq
}

pub fn sign_variations(seq: &[UPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

pub fn gcd(a: &[BigRational], b: &[BigRational]) -> UPoly {
    let mut f = trim(a.to_vec());
    let mut g = trim(b.to_vec());
    while !g.is_empty() {
        let r = rem(&f, &g);
        f = g;
        g = r;
    }
    f
}

/// p / gcd(p, p'): same distinct roots, all simple.
pub fn squarefree(p: &[BigRational]) -> UPoly {
    let g = gcd(p, &derivative(p));
    if g.len() <= 1 {
        return trim(p.to_vec());
    }
    divmod(p, &g).0
}

/// Number of distinct real roots in the closed interval [lo, hi].
/// The zero polynomial reports `usize::MAX`.
pub fn count_roots(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> usize {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return usize::MAX;
    }
    let sf = squarefree(&p);
    let seq = sturm_sequence(&sf);
    let at_lo = eval(&sf, lo).is_zero() as usize;
    // for squarefree input V(lo) - V(hi) counts roots in (lo, hi]
    let inner = sign_variations(&seq, lo).saturating_sub(sign_variations(&seq, hi));
    inner + at_lo
}

pub fn is_one(p: &[BigRational]) -> bool {
    p.len() == 1 && p[0].is_one()
}
