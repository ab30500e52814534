//! Concrete cross-checks: the ratio sequence run out to large n at sample
//! rates, and residuals of the catalogued modes on a grid of rational points.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cases::ModeCase;
use crate::error::{Error, Result};
use crate::exactmath::{int, rat, CRational, MultiPoly, RationalExpr, Var};
use crate::recurrence::{coeff_ab, quasisolution, ratio_sequence_with, table4, CPolyN, CRatN, ConcreteRecurrence};
use crate::spherical::{casimir, euler, laplace_s2, r_squared, ModeSolution, VecPoly, Y};

fn to_c64(c: &CRational) -> Complex64 {
    let (re, im) = c.to_f64();
    Complex64::new(re, im)
}

/// Rational function of `n` with float coefficients, for the tail.
struct FloatRatN {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl FloatRatN {
    fn new(r: &CRatN) -> Self {
        let conv = |p: &CPolyN| p.0.iter().map(to_c64).collect();
        FloatRatN { num: conv(&r.num), den: conv(&r.den) }
    }

    fn eval(&self, n: usize) -> Complex64 {
        let x = n as f64;
        let horner = |cs: &[Complex64]| cs.iter().rev().fold(Complex64::zero(), |acc, c| acc * x + c);
        horner(&self.num) / horner(&self.den)
    }
}

#[derive(Clone, Debug)]
pub struct ConvergenceOptions {
    /// last index computed in exact arithmetic
    pub exact_cutoff: usize,
    /// replaces the tabulated quasisolution (negative controls)
    pub quasisolution: Option<RationalExpr>,
    pub keep_series: bool,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions { exact_cutoff: 300, quasisolution: None, keep_series: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesRow {
    pub n: usize,
    pub re_r: f64,
    pub im_r: f64,
    pub abs_e: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub case: String,
    pub lambda: String,
    pub n_max: usize,
    pub n0: u32,
    pub exact_prefix: usize,
    pub final_ratio: (f64, f64),
    pub final_distance: f64,
    pub max_abs_error_after_n0: f64,
    /// largest relative gap between the float and exact runs on the prefix
    pub overlap_rel_diff: f64,
    pub anomalies: Vec<String>,
    #[serde(skip)]
    pub series: Vec<SeriesRow>,
}

impl ConvergenceReport {
    pub fn within(&self, tolerance: f64) -> bool {
        self.anomalies.is_empty()
            && self.final_distance <= 0.01
            && self.max_abs_error_after_n0 <= 1.0 / 3.0 + tolerance
    }

    pub fn write_series_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.series {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Start of the contraction regime: the bounds row's n0, or 2 for the
/// co-rotational case.
pub fn case_n0(case: &ModeCase) -> u32 {
    table4(case).map(|r| r.n0).unwrap_or(2)
}

/// Runs `r_n` to `n_max`: exact up to the cutoff, then in double precision
/// from the last exact value; the errors `e_n = r_n / rtilde_n - 1` are
/// tracked from `n0` on.
pub fn sample_convergence(
    case: &ModeCase,
    lambda: &CRational,
    n_max: usize,
    opts: &ConvergenceOptions,
) -> Result<ConvergenceReport> {
    if case.is_family() {
        return Err(Error::UnsupportedCase(case.label()));
    }
    let rc = coeff_ab(case)?;
    let rec = ConcreteRecurrence::new(&rc, lambda, None)?;
    let rt_expr = match &opts.quasisolution {
        Some(q) => q.clone(),
        None => quasisolution(case)?,
    };
    let rt = FloatRatN::new(&CRatN::from_expr(&rt_expr, lambda, None)?);
    let a = FloatRatN::new(&rec.a_n);
    let b = FloatRatN::new(&rec.b_n);
    let n0 = case_n0(case);
    let mut anomalies = Vec::new();

    let cutoff = opts.exact_cutoff.min(n_max);
    let exact = match ratio_sequence_with(&rec, cutoff) {
        Ok(rs) => rs,
        Err(Error::RatioBreakdown(k)) => {
            anomalies.push(format!("r_{} = 0", k - 1));
            Vec::new()
        }
        Err(e) => return Err(e),
    };
    let mut rs: Vec<Complex64> = exact.iter().map(to_c64).collect();
    if exact.iter().any(|r| r.is_zero()) {
        anomalies.push("exact ratio vanished".into());
    }

    // float run from r_0 over the exact range, to validate the crossover
    let mut overlap = 0.0f64;
    let mut f = to_c64(&rec.r0);
    for (k, ex) in rs.iter().enumerate().skip(1) {
        f = a.eval(k) + b.eval(k) / f;
        overlap = overlap.max(((f - ex) / ex).norm());
    }

    if !rs.is_empty() {
        for k in rs.len()..=n_max {
            let prev = rs[k - 1];
            if prev.norm() == 0.0 {
                anomalies.push(format!("r_{} = 0 in the float tail", k - 1));
                break;
            }
            rs.push(a.eval(k) + b.eval(k) / prev);
        }
    }
    if rs.iter().any(|r| !r.is_finite()) {
        anomalies.push("non-finite ratio".into());
    }

    let mut max_e = 0.0f64;
    let mut series = Vec::new();
    for (k, r) in rs.iter().enumerate() {
        let e = (r / rt.eval(k) - 1.0).norm();
        if k >= n0 as usize {
            max_e = max_e.max(e);
        }
        if opts.keep_series {
            series.push(SeriesRow { n: k, re_r: r.re, im_r: r.im, abs_e: e });
        }
    }
    let last = rs.last().copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    Ok(ConvergenceReport {
        case: case.label(),
        lambda: lambda.to_string(),
        n_max,
        n0,
        exact_prefix: exact.len(),
        final_ratio: (last.re, last.im),
        final_distance: (last - 1.0).norm(),
        max_abs_error_after_n0: max_e,
        overlap_rel_diff: overlap,
        anomalies,
        series,
    })
}

/// The rates used for the convergence runs.
pub fn default_lambda_grid() -> Vec<CRational> {
    [(0, 0), (1, 0), (0, 2), (1, 3), (0, 10)]
        .iter()
        .map(|&(a, b)| CRational::from_ints(a, b))
        .collect()
}

// ---------------------------------------------------------------------------
// PDE residuals

/// The linearized operator applied to `e^{lambda tau} Psi(y)`, multiplied
/// through by `r^2 (1 + r^2)` so that it stays polynomial; `r d/dr` is the
/// Euler operator and `r^2 d^2/dr^2 = E(E - 1)`.
pub fn linearized_residual(psi: &VecPoly, lambda: &BigRational) -> VecPoly {
    let r2 = r_squared();
    let one = MultiPoly::one();
    let lam = MultiPoly::constant(lambda.clone());
    let c = casimir(psi);
    std::array::from_fn(|i| {
        let p = &psi[i];
        let e = euler(p);
        let ee = &euler(&e) - &e;
        let one_plus = &one + &r2;
        let one_minus = &one - &r2;
        let terms = [
            -&(&(&(&lam * &lam) * &r2) * &(&one_plus * p)),
            -&(&(&(&one - &r2.scale(&int(3))) * &lam) * &(&r2 * p)),
            -&(&(&lam * &r2) * &(&one_plus * &e)).scale(&int(2)),
            &(&one_plus * &one_minus) * &ee,
            (&(&one_minus * &one_minus) * &e).scale(&int(2)),
            -&(&r2 * &c[i]).scale(&int(2)),
            &one_minus * &laplace_s2(p),
            &(&(&MultiPoly::int(6) - &r2.scale(&int(2))) * &r2) * p,
        ];
        terms.iter().fold(MultiPoly::zero(), |acc, t| &acc + t)
    })
}

/// Points `s d` with `d` one of the 26 nonzero vectors in `{-1,0,1}^3` and
/// `s = j/(2g)`, so every point has `0 < r <= sqrt(3)/2 < 9/10`.
pub fn residual_grid(grid_size: u32) -> Vec<[BigRational; 3]> {
    let mut pts = Vec::new();
    for j in 1..=grid_size.max(1) {
        let s = rat(j as i64, 2 * grid_size.max(1) as i64);
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                for c in -1..=1i64 {
                    if (a, b, c) != (0, 0, 0) {
                        pts.push([&s * int(a), &s * int(b), &s * int(c)]);
                    }
                }
            }
        }
    }
    pts
}

/// Largest |residual| over the grid, exact.
pub fn pde_residual_grid_for(psi: &VecPoly, lambda: &BigRational, grid_size: u32) -> BigRational {
    let res = linearized_residual(psi, lambda);
    let mut worst = BigRational::zero();
    for p in residual_grid(grid_size) {
        let at: Vec<(Var, BigRational)> = Y.iter().copied().zip(p.iter().cloned()).collect();
        for comp in &res {
            let v = comp.eval(&at).expect("only y variables").abs();
            if v > worst {
                worst = v;
            }
        }
    }
    worst
}

pub fn pde_residual_grid(mode: &ModeSolution, grid_size: u32) -> BigRational {
    pde_residual_grid_for(&mode.profile, &int(mode.growth_rate as i64), grid_size)
}

pub fn residual_is_identically_zero(mode: &ModeSolution) -> bool {
    linearized_residual(&mode.profile, &int(mode.growth_rate as i64))
        .iter()
        .all(|p| p.is_zero())
}

/// Writes one JSON summary line per report.
pub fn write_reports_json(reports: &[ConvergenceReport], out: &mut impl Write) -> std::io::Result<()> {
    for r in reports {
        serde_json::to_writer(&mut *out, r)?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::expr;
    use crate::spherical::mode_catalogue;

    #[test]
    fn catalogue_residuals_vanish() {
        for m in mode_catalogue() {
            assert!(residual_is_identically_zero(&m), "{}", m.name);
            assert!(pde_residual_grid(&m, 2).is_zero());
        }
    }

    #[test]
    fn wrong_rate_control() {
        let cat = mode_catalogue();
        let psi10 = cat.iter().find(|m| m.name == "Psi_{1,0}").unwrap();
        let phi = cat.iter().find(|m| m.name == "Phi^1_{0,1}").unwrap();
        // a rate-0 mode added to a rate-1 mode
        let mixed: VecPoly = std::array::from_fn(|c| &psi10.profile[c] + &phi.profile[c].scale(&rat(1, 10)));
        assert!(pde_residual_grid_for(&mixed, &int(1), 2) > BigRational::zero());
    }

    #[test]
    fn same_rate_superposition_is_still_a_solution() {
        // e_1 is itself a rate-1 mode, so adding it cannot break the relation
        let cat = mode_catalogue();
        let psi10 = cat.iter().find(|m| m.name == "Psi_{1,0}").unwrap();
        let e1 = cat.iter().find(|m| m.name == "Psi^1_{0,1}").unwrap();
        let mixed: VecPoly = std::array::from_fn(|c| &psi10.profile[c] + &e1.profile[c].scale(&rat(1, 10)));
        assert!(pde_residual_grid_for(&mixed, &int(1), 2).is_zero());
    }

    #[test]
    fn convergence_11() {
        let r = sample_convergence(&ModeCase::Finite { l: 1, m: 1 }, &CRational::zero(), 2000, &Default::default())
            .unwrap();
        assert!(r.final_distance < 0.01, "{r:?}");
        assert!(r.max_abs_error_after_n0 <= 1.0 / 3.0);
        assert!(r.overlap_rel_diff < 1e-10);
    }

    #[test]
    fn tampered_quasisolution_is_caught() {
        let opts = ConvergenceOptions { quasisolution: Some(expr("1/2")), ..Default::default() };
        let r = sample_convergence(&ModeCase::Finite { l: 2, m: 1 }, &CRational::from_ints(0, 3), 500, &opts).unwrap();
        assert!(r.max_abs_error_after_n0 > 1.0 / 3.0);
    }
}

