//! Multivariate gcd over Q by recursive primitive pseudo-remainder sequences.

use num_rational::BigRational;
use num_traits::One;

use super::poly::{Exps, MultiPoly, ZERO_EXPS};
use super::var::{Var, NVARS};

/// Greatest common divisor, normalized by [`MultiPoly::primitive`].
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    // strip common monomial factors first; cheap and keeps PRS degrees down
    let ma = min_exps(a);
    let mb = min_exps(b);
    let mut common = ZERO_EXPS;
    let mut any = false;
    for i in 0..NVARS {
        common[i] = ma[i].min(mb[i]);
        any |= ma[i] > 0 || mb[i] > 0;
    }
    if any {
        let a1 = a.div_exact(&MultiPoly::monomial(BigRational::one(), ma)).expect("monomial divides");
        let b1 = b.div_exact(&MultiPoly::monomial(BigRational::one(), mb)).expect("monomial divides");
        let g = gcd(&a1, &b1);
        return (&g * &MultiPoly::monomial(BigRational::one(), common)).primitive();
    }

    let va = a.vars();
    let vb = b.vars();
    if coprime_by_evaluation(a, b, &va, &vb) {
        return MultiPoly::one();
    }
    if let Some(g) = divides(a, b).or_else(|| divides(b, a)) {
        return g;
    }
    // a variable present in only one argument can be eliminated via content
    for &v in &va {
        if !vb.contains(&v) {
            return gcd(&content_in(a, v), b);
        }
    }
    for &v in &vb {
        if !va.contains(&v) {
            return gcd(a, &content_in(b, v));
        }
    }
    let v = *va
        .iter()
        .min_by_key(|&&v| a.degree(v).max(b.degree(v)))
        .expect("non-constant");
    if va.len() == 1 {
        return univariate_gcd(a, b, v);
    }

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);

    let (mut f, mut g) = if pa.degree(v) >= pb.degree(v) { (pa, pb) } else { (pb, pa) };
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if r.degree(v) == 0 {
            g = MultiPoly::one();
            break;
        }
        f = g;
        g = primitive_in(&r, v);
    }
    (&c * &g).primitive()
}

fn divides(d: &MultiPoly, p: &MultiPoly) -> Option<MultiPoly> {
    let vd = d.vars();
    if vd.iter().any(|&v| d.degree(v) > p.degree(v)) {
        return None;
    }
    p.div_exact(d).map(|_| d.primitive())
}

/// Sound test for `gcd(a, b) = 1`. For each shared variable `v`, every
/// other variable is set to a small integer where `lc_v(a)` does not
/// vanish; a common factor of positive degree in `v` would survive there,
/// so a constant univariate gcd rules such factors out.
fn coprime_by_evaluation(a: &MultiPoly, b: &MultiPoly, va: &[Var], vb: &[Var]) -> bool {
    let shared: Vec<Var> = va.iter().copied().filter(|v| vb.contains(v)).collect();
    if shared.is_empty() {
        return true;
    }
    const POINTS: [i64; 4] = [3, 7, -5, 11];
    shared.iter().all(|&v| {
        POINTS.iter().enumerate().any(|(k, _)| {
            let mut ea = a.clone();
            let mut eb = b.clone();
            let mut lc = a.lc_in(v);
            for (j, &w) in va.iter().chain(vb.iter()).enumerate() {
                if w == v {
                    continue;
                }
                let val = BigRational::from_integer((POINTS[(j + k) % POINTS.len()] + j as i64).into());
                ea = ea.eval_var(w, &val);
                eb = eb.eval_var(w, &val);
                lc = lc.eval_var(w, &val);
            }
            if lc.is_zero() || eb.is_zero() {
                return false;
            }
            let (Some(fa), Some(fb)) = (ea.to_univariate(v), eb.to_univariate(v)) else {
                return false;
            };
            super::univariate::gcd(&fa, &fb).len() == 1
        })
    })
}

fn min_exps(p: &MultiPoly) -> Exps {
    let mut m = [u32::MAX; NVARS];
    for (e, _) in p.terms() {
        for i in 0..NVARS {
            m[i] = m[i].min(e[i]);
        }
    }
    m
}

fn monomial_gcd(m: &MultiPoly, p: &MultiPoly) -> MultiPoly {
    let (me, _) = m.leading_term().expect("nonzero");
    let pe = min_exps(p);
    let mut g = ZERO_EXPS;
    for i in 0..NVARS {
        g[i] = me[i].min(pe[i]);
    }
    MultiPoly::monomial(BigRational::one(), g)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn primitive_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive()
}

/// Pseudo-remainder of `f` by `g` in `v`.
pub fn prem(f: &MultiPoly, g: &MultiPoly, v: Var) -> MultiPoly {
    let dg = g.degree(v);
    if dg == 0 {
        return MultiPoly::zero();
    }
    let lc = g.lc_in(v);
    let mut r = f.clone();
    while !r.is_zero() && r.degree(v) >= dg {
        let t = &r.lc_in(v) * &MultiPoly::var_pow(v, r.degree(v) - dg);
        r = &(&lc * &r) - &(&t * g);
    }
    r
}

fn univariate_gcd(a: &MultiPoly, b: &MultiPoly, v: Var) -> MultiPoly {
    let mut f = a.to_univariate(v).expect("univariate");
    let mut g = b.to_univariate(v).expect("univariate");
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        let r = super::univariate::rem(&f, &g);
        f = g;
        g = r;
    }
    MultiPoly::from_univariate(v, &f).primitive()
}

