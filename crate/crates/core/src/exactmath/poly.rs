use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::var::{Var, NVARS};

pub type Exps = [u32; NVARS];

pub(crate) const ZERO_EXPS: Exps = [0; NVARS];

/// Exact multivariate polynomial over the rationals.
///
/// Terms are keyed by exponent vector; the map order is lexicographic with
/// `n` most significant, which doubles as the monomial order for division.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exps, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mono(v: Var, e: u32) -> Exps {
    let mut m = ZERO_EXPS;
    m[v.index()] = e;
    m
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ZERO_EXPS, c);
        }
        Self { terms }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(BigRational::one(), mono(v, 1))
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        Self::monomial(BigRational::one(), mono(v, e))
    }

    pub fn monomial(c: BigRational, e: Exps) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, BigRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn from_univariate(v: Var, coeffs: &[BigRational]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (mono(v, k as u32), c.clone())),
        )
    }

    pub(crate) fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&ZERO_EXPS))
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.get(&ZERO_EXPS).cloned()
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&ZERO_EXPS).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, e: &Exps) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest term in lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    pub fn min_degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.index()] > 0)
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL.iter().copied().filter(|&v| self.contains_var(v)).collect()
    }

    /// True when no variable other than those listed occurs.
    pub fn only_vars(&self, allowed: &[Var]) -> bool {
        self.vars().iter().all(|v| allowed.contains(v))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &BigRational, m: &Exps) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| {
                    let mut s = *e;
                    for i in 0..NVARS {
                        s[i] += m[i];
                    }
                    (s, k * c)
                })
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v.index();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut s = *e;
                s[i] -= 1;
                out.add_term(s, c * BigInt::from(e[i]));
            }
        }
        out
    }

    /// Coefficients with respect to `v`, ascending; each is free of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MultiPoly> {
        let i = v.index();
        let mut out = vec![MultiPoly::zero(); self.degree(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut s = *e;
            let k = s[i] as usize;
            s[i] = 0;
            out[k].terms.insert(s, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[MultiPoly]) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut s = *e;
                s[v.index()] += k as u32;
                out.add_term(s, x.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: Var) -> MultiPoly {
        let d = self.degree(v);
        let i = v.index();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] == d {
                let mut s = *e;
                s[i] = 0;
                out.terms.insert(s, c.clone());
            }
        }
        out
    }

    /// Rational coefficient list when the polynomial is univariate in `v`.
    pub fn to_univariate(&self, v: Var) -> Option<Vec<BigRational>> {
        if !self.only_vars(&[v]) {
            return None;
        }
        let mut out = vec![BigRational::zero(); self.degree(v) as usize + 1];
        for (e, c) in &self.terms {
            out[e[v.index()] as usize] = c.clone();
        }
        if self.is_zero() {
            out.clear();
        }
        Some(out)
    }

    /// Substitute a rational value for `v`.
    pub fn eval_var(&self, v: Var, val: &BigRational) -> Self {
        let i = v.index();
        let d = self.degree(v) as usize;
        let mut powers = Vec::with_capacity(d + 1);
        powers.push(BigRational::one());
        for k in 1..=d {
            let next = &powers[k - 1] * val;
            powers.push(next);
        }
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut s = *e;
            let k = s[i] as usize;
            s[i] = 0;
            out.add_term(s, c * &powers[k]);
        }
        out
    }

    /// Evaluate with every occurring variable assigned; missing variables are an error.
    pub fn eval(&self, point: &[(Var, BigRational)]) -> Option<BigRational> {
        let mut p = self.clone();
        for (v, val) in point {
            p = p.eval_var(*v, val);
        }
        p.constant_value()
    }

    /// Substitute a polynomial for `v` (Horner in `v`).
    pub fn subs(&self, v: Var, by: &MultiPoly) -> Self {
        if !self.contains_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut acc = Self::zero();
        for c in cs.iter().rev() {
            acc = &(&acc * by) + c;
        }
        acc
    }

    /// Substitute `v -> num/den`, returning the polynomial `den^d · p(num/den)`
    /// where `d = deg_v p`.
    pub fn subs_fraction(&self, v: Var, num: &MultiPoly, den: &MultiPoly) -> (Self, u32) {
        let cs = self.coeffs_in(v);
        if cs.is_empty() {
            return (Self::zero(), 0);
        }
        let d = cs.len() - 1;
        let mut num_pows = vec![Self::one()];
        let mut den_pows = vec![Self::one()];
        for k in 1..=d {
            num_pows.push(&num_pows[k - 1] * num);
            den_pows.push(&den_pows[k - 1] * den);
        }
        let mut acc = Self::zero();
        for (k, c) in cs.iter().enumerate() {
            if !c.is_zero() {
                acc += &(c * &(&num_pows[k] * &den_pows[d - k]));
            }
        }
        (acc, d as u32)
    }

    /// `v -> v + offset`, fully expanded.
    pub fn shift(&self, v: Var, offset: &BigRational) -> Self {
        if offset.is_zero() || !self.contains_var(v) {
            return self.clone();
        }
        let by = &Self::var(v) + &Self::constant(offset.clone());
        self.subs(v, &by)
    }

    /// Rename variable `from` to `to`; `to` must be absent.
    pub fn rename(&self, from: Var, to: Var) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut s = *e;
            s[to.index()] += s[from.index()];
            s[from.index()] = 0;
            out.add_term(s, c.clone());
        }
        out
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients
    /// (the sign of `c` is always positive).
    pub fn content(&self) -> BigRational {
        let mut g = BigInt::zero();
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            lcm = lcm.lcm(c.denom());
        }
        if g.is_zero() {
            return BigRational::one();
        }
        BigRational::new(g, lcm)
    }

    /// Integer-coefficient primitive form with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Exact division; `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &MultiPoly) -> Option<MultiPoly> {
        if other.is_zero() {
            return None;
        }
        if let Some(c) = other.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = other.leading_term().map(|(e, c)| (*e, c.clone()))?;
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (*e, c.clone())) {
            let mut m = ZERO_EXPS;
            for i in 0..NVARS {
                if e[i] < lm[i] {
                    return None;
                }
                m[i] = e[i] - lm[i];
            }
            let k = c * &lc_inv;
            rem = &rem - &other.mul_monomial(&k, &m);
            quot.add_term(m, k);
        }
        Some(quot)
    }

    /// Exact square root with positive leading coefficient, if one exists.
    pub fn sqrt(&self) -> Option<MultiPoly> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (e, c) = self.leading_term()?;
        if c.is_negative() || e.iter().any(|k| k % 2 == 1) {
            return None;
        }
        let sc = rational_sqrt(c)?;
        let mut half = ZERO_EXPS;
        for i in 0..NVARS {
            half[i] = e[i] / 2;
        }
        let mut s = MultiPoly::monomial(sc, half);
        let two_lc = s.leading_coeff() * BigInt::from(2);
        let lm_s = half;
        let mut cap = ZERO_EXPS;
        for v in Var::ALL {
            cap[v.index()] = self.degree(v) / 2;
        }
        loop {
            let rem = self - &(&s * &s);
            if rem.is_zero() {
                return Some(s);
            }
            let (re, rc) = rem.leading_term().map(|(e, c)| (*e, c.clone()))?;
            let mut m = ZERO_EXPS;
            for i in 0..NVARS {
                if re[i] < lm_s[i] || re[i] - lm_s[i] > cap[i] {
                    return None;
                }
                m[i] = re[i] - lm_s[i];
            }
            // the next term must sit strictly below the leading one
            if m >= lm_s {
                return None;
            }
            s.add_term(m, rc / &two_lc);
        }
    }
}

pub fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> AddAssign<&'a MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let mut acc: std::collections::HashMap<Exps, BigRational> =
            std::collections::HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut s = *ea;
                for i in 0..NVARS {
                    s[i] += eb[i];
                }
                let prod = ca * cb;
                acc.entry(s)
                    .and_modify(|c| *c += &prod)
                    .or_insert(prod);
            }
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::int(c)
    }
}

impl From<BigRational> for MultiPoly {
    fn from(c: BigRational) -> Self {
        MultiPoly::constant(c)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_poly(self))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}
