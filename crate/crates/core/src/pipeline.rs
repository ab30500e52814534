//! Whole-run orchestration: every case, the mode catalogue, the numeric
//! runs, the report and the supplementary CSV files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cases::ModeCase;
use crate::certify::{bound_polynomial, e_at_n0, ratio_at, verify_case_with, CorotationalPolicy, Status, Verdict};
use crate::error::{Error, Result};
use crate::exactmath::sign::apply_shifts;
use crate::exactmath::{int, text, CRational, MultiPoly, RationalExpr, Var};
use crate::numeric::{default_lambda_grid, residual_is_identically_zero, sample_convergence, ConvergenceOptions, ConvergenceReport};
use crate::odesystem::mode_ode_residual;
use crate::recurrence::{coeff_ab, error_coeffs_for, quasisolution};
use crate::spherical::mode_catalogue;

pub const SUPPLEMENT_NAMES: [&str; 10] = ["A", "B", "n0", "r_{n0}", "rtilde", "a", "b", "esta", "estb", "esterror"];

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub finite_cases: Vec<ModeCase>,
    pub symbolic_families: Vec<ModeCase>,
    pub lambda_samples: Vec<CRational>,
    pub n_tail: usize,
    pub output_dir: Option<PathBuf>,
    pub corotational_policy: CorotationalPolicy,
    pub check_modes: bool,
    /// replace one case's quasisolution (negative control)
    pub tamper: Option<(ModeCase, RationalExpr)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            finite_cases: ModeCase::default_finite(),
            symbolic_families: ModeCase::default_families(),
            lambda_samples: default_lambda_grid(),
            n_tail: 2000,
            output_dir: None,
            corotational_policy: CorotationalPolicy::AutoDerive,
            check_modes: true,
            tamper: None,
        }
    }
}

impl RunConfig {
    pub fn only(cases: Vec<ModeCase>) -> Self {
        let (fam, fin): (Vec<_>, Vec<_>) = cases.into_iter().partition(ModeCase::is_family);
        RunConfig { finite_cases: fin, symbolic_families: fam, check_modes: false, ..Default::default() }
    }

    pub fn cases(&self) -> Vec<ModeCase> {
        self.finite_cases.iter().chain(&self.symbolic_families).copied().collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModeCheck {
    pub name: String,
    pub growth_rate: u32,
    pub pde_residual_zero: bool,
    pub radial_residual_zero: bool,
}

impl ModeCheck {
    pub fn passed(&self) -> bool {
        self.pde_residual_zero && self.radial_residual_zero
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub passed: bool,
    #[serde(flatten)]
    pub report: ConvergenceReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub verdict: String,
    pub corotational_policy: CorotationalPolicy,
    pub cases: Vec<Verdict>,
    pub modes: Vec<ModeCheck>,
    pub convergence: Vec<ConvergenceRow>,
    pub supplement_files: Vec<String>,
    pub errors: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == "THEOREM-VERIFIED"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let mark = |b: bool| if b { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{:<14} {:<26} {:<6} detail", "case", "check", "result");
        for v in &self.cases {
            for t in &v.table_checks {
                let _ = writeln!(s, "{:<14} {:<26} {:<6} {}", v.case, t.what, mark(t.pass), t.detail);
            }
            for c in &v.certificates {
                let kind = format!("{:?}", c.kind);
                let _ = writeln!(s, "{:<14} {:<26} {:<6} {}", v.case, kind, mark(c.pass), c.detail.as_deref().unwrap_or(""));
            }
            let status = match v.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::External => "EXTERNAL",
            };
            let _ = writeln!(s, "{:<14} {:<26} {:<6} {}", v.case, "verdict", status, v.notes.join("; "));
        }
        for m in &self.modes {
            let _ = writeln!(s, "{:<14} {:<26} {:<6} rate {}", m.name, "mode residual", mark(m.passed()), m.growth_rate);
        }
        for c in &self.convergence {
            let r = &c.report;
            let _ = writeln!(
                s,
                "{:<14} {:<26} {:<6} |r_N - 1| = {:.3e}, max|e_n| = {:.4}",
                r.case,
                format!("lambda = {}", r.lambda),
                mark(c.passed),
                r.final_distance,
                r.max_abs_error_after_n0
            );
        }
        for e in &self.errors {
            let _ = writeln!(s, "error: {e}");
        }
        let _ = writeln!(s, "{}", self.verdict);
        s
    }
}

pub fn check_modes() -> Vec<ModeCheck> {
    mode_catalogue()
        .par_iter()
        .map(|m| {
            let lam = MultiPoly::int(m.growth_rate as i64);
            let (l, k) = (m.angular_part.l, m.angular_part.m);
            let radial = mode_ode_residual(&m.phi(), &lam, l, k, false).is_ok_and(|r| r.is_zero());
            ModeCheck {
                name: m.name.clone(),
                growth_rate: m.growth_rate,
                pde_residual_zero: residual_is_identically_zero(m),
                radial_residual_zero: radial,
            }
        })
        .collect()
}

/// Tolerance on the `|e_n| <= 1/3` envelope of the float runs.
pub const ENVELOPE_TOLERANCE: f64 = 1e-9;

pub fn run_all(config: &RunConfig) -> Report {
    let cases = config.cases();
    let samples = &config.lambda_samples;
    let cases_out: Vec<Verdict> = cases
        .par_iter()
        .map(|case| {
            let rt = config.tamper.as_ref().filter(|(c, _)| c == case).map(|(_, rt)| rt);
            verify_case_with(case, config.corotational_policy, samples, rt)
        })
        .collect();
    let modes = if config.check_modes { check_modes() } else { Vec::new() };

    let mut errors = Vec::new();
    let runs: Vec<(ModeCase, CRational)> = config
        .finite_cases
        .iter()
        .filter(|c| c.lm().is_some_and(|(l, _)| l > 0))
        .flat_map(|c| samples.iter().map(move |lam| (*c, lam.clone())))
        .collect();
    let conv: Vec<Result<ConvergenceRow>> = runs
        .par_iter()
        .map(|(case, lam)| {
            let mut opts = ConvergenceOptions::default();
            if let Some((c, rt)) = &config.tamper {
                if c == case {
                    opts.quasisolution = Some(rt.clone());
                }
            }
            let report = sample_convergence(case, lam, config.n_tail, &opts)?;
            Ok(ConvergenceRow { passed: report.within(ENVELOPE_TOLERANCE), report })
        })
        .collect();
    let mut convergence = Vec::new();
    for c in conv {
        match c {
            Ok(row) => convergence.push(row),
            Err(e) => errors.push(e.to_string()),
        }
    }

    let mut supplement_files = Vec::new();
    if let Some(dir) = &config.output_dir {
        for (case, v) in cases.iter().zip(&cases_out) {
            if !supplement_cases().contains(case) || !v.passed() {
                continue;
            }
            match export_supplement(case, v, dir) {
                Ok(p) => supplement_files.push(p.display().to_string()),
                Err(e) => errors.push(format!("{case}: {e}")),
            }
        }
    }

    let ok = cases_out.iter().all(Verdict::passed)
        && modes.iter().all(ModeCheck::passed)
        && convergence.iter().all(|c| c.passed)
        && errors.is_empty();
    Report {
        verdict: if ok { "THEOREM-VERIFIED" } else { "NOT VERIFIED" }.into(),
        corotational_policy: config.corotational_policy,
        cases: cases_out,
        modes,
        convergence,
        supplement_files,
        errors,
    }
}

// ---------------------------------------------------------------------------
// supplementary files

#[derive(Clone, Debug, PartialEq)]
pub struct Supplement {
    pub case: ModeCase,
    pub entries: Vec<(String, RationalExpr)>,
}

impl Supplement {
    pub fn get(&self, name: &str) -> Option<&RationalExpr> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}

/// The ten named supplement entries for a certified case, with the bound polynomials
/// shifted to `n -> n + n0` and the family's `l`-shifts.
pub fn supplement(case: &ModeCase, verdict: &Verdict) -> Result<Supplement> {
    if !verdict.passed() || verdict.case != case.label() {
        return Err(Error::NotCertified(case.label()));
    }
    let Some((abar, bbar, n0, u)) = &verdict.bounds else {
        return Err(Error::NotCertified(case.label()));
    };
    let abar = RationalExpr::parse(abar)?;
    let bbar = RationalExpr::parse(bbar)?;
    let u: BigRational = u.parse().map_err(|_| Error::Parse(u.clone()))?;
    let rc = coeff_ab(case)?;
    let rt = quasisolution(case)?;
    let (a_n, b_n) = error_coeffs_for(&rc, &rt);
    let fam = case.family();
    let mut bound_shifts = vec![(Var::N, int(*n0 as i64))];
    if let Some(f) = fam {
        bound_shifts.push((Var::L, int(f.bound_l_shift() as i64)));
    }
    let err_shifts: Vec<_> = fam.map(|f| (Var::L, int(f.esterror_l_shift() as i64))).into_iter().collect();
    let esta = apply_shifts(&bound_polynomial(&a_n, &abar), &bound_shifts);
    let estb = apply_shifts(&bound_polynomial(&b_n, &bbar), &bound_shifts);
    let e0 = e_at_n0(case, *n0)?;
    let esterror = apply_shifts(&bound_polynomial(&e0, &RationalExpr::constant(u)), &err_shifts);
    let values = [
        rc.a_n.clone(),
        rc.b_n.clone(),
        RationalExpr::int(*n0 as i64),
        ratio_at(&rc, *n0),
        rt,
        a_n,
        b_n,
        RationalExpr::from_poly(esta),
        RationalExpr::from_poly(estb),
        RationalExpr::from_poly(esterror),
    ];
    let entries = SUPPLEMENT_NAMES.iter().map(|s| s.to_string()).zip(values).collect();
    Ok(Supplement { case: *case, entries })
}

/// Comma-separated `name,expression` rows with a header; `x` is the rate.
pub fn write_supplement(s: &Supplement, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["name", "expression"])?;
    for (name, e) in &s.entries {
        w.write_record([name.as_str(), text::format_expr(e).as_str()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_supplement(path: &Path) -> Result<Vec<(String, RationalExpr)>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let (Some(name), Some(e)) = (rec.get(0), rec.get(1)) else {
            return Err(Error::Parse(format!("{}: short row", path.display())));
        };
        out.push((name.to_string(), text::parse_expr(e)?));
    }
    Ok(out)
}

/// Writes `<dir>/<stem>.csv` for a certified case.
pub fn export_supplement(case: &ModeCase, verdict: &Verdict, dir: &Path) -> Result<PathBuf> {
    let s = supplement(case, verdict)?;
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.csv", case.stem()));
    write_supplement(&s, &path)?;
    Ok(path)
}

/// The cases with a supplementary file, in file order.
pub fn supplement_cases() -> Vec<ModeCase> {
    ModeCase::default_finite()
        .into_iter()
        .filter(|c| !matches!(c.lm(), Some((0, 1)) | Some((1, 0))))
        .chain(ModeCase::default_families())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_case;

    #[test]
    fn supplement_11_round_trip() {
        let case = ModeCase::Finite { l: 1, m: 1 };
        let v = verify_case(&case, CorotationalPolicy::AutoDerive, &[]);
        let s = supplement(&case, &v).unwrap();
        assert_eq!(s.get("n0"), Some(&RationalExpr::int(2)));
        let dir = std::env::temp_dir().join(format!("supp-{}", std::process::id()));
        let path = export_supplement(&case, &v, &dir).unwrap();
        assert_eq!(path.file_name().unwrap(), "11.csv");
        assert_eq!(read_supplement(&path).unwrap(), s.entries);
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn uncertified_case_is_refused() {
        let case = ModeCase::Finite { l: 1, m: 0 };
        let v = verify_case(&case, CorotationalPolicy::External, &[]);
        assert_eq!(supplement(&case, &v), Err(Error::NotCertified("(1,0)".into())));
    }

    #[test]
    fn esta_is_nonpositive_after_shift() {
        let case = ModeCase::Family(crate::cases::Family::Diag);
        let v = verify_case(&case, CorotationalPolicy::AutoDerive, &[]);
        let s = supplement(&case, &v).unwrap();
        for name in ["esta", "estb"] {
            let p = s.get(name).unwrap().to_poly().unwrap();
            assert!(p.terms().all(|(_, c)| c <= &int(0)), "{name}");
        }
    }

    #[test]
    fn restricted_to_hypergeometric() {
        let mut cfg = RunConfig::only(vec![ModeCase::Finite { l: 0, m: 1 }]);
        cfg.lambda_samples = default_lambda_grid();
        let r = run_all(&cfg);
        assert!(r.passed());
        assert_eq!(r.cases.len(), 1);
        assert_eq!(format!("{:?}", r.cases[0].certificates[0].kind), "HypergeomDecay");
        assert!(r.convergence.is_empty());
    }
}
