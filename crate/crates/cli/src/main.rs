use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use modecert::certify::{verify_case, CorotationalPolicy};
use modecert::exactmath::CRational;
use modecert::numeric::{sample_convergence, ConvergenceOptions};
use modecert::pipeline::{export_supplement, run_all, supplement_cases, RunConfig, ENVELOPE_TOLERANCE};
use modecert::ModeCase;

#[derive(Parser)]
#[command(name = "modecert", about = "Exact verification of the mode stability certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// length of the numeric ratio runs
    #[arg(long, global = true, default_value_t = 2000)]
    n_tail: usize,
    /// comma-separated rates such as 0,1,2i,1+3i,10i
    #[arg(long, global = true)]
    lambda_grid: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Policy::AutoDerive)]
    corotational_policy: Policy,
    /// output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    AutoDerive,
    External,
}

#[derive(Subcommand)]
enum Command {
    /// Run every case, the mode catalogue and the numeric checks
    Verify,
    /// Certify the case responsible for (l, m)
    Case { l: i64, m: i64 },
    /// Write the supplementary CSV files
    ExportSupplement,
    /// Ratio run for one finite case and rate re + i im
    Convergence { l: i64, m: i64, re: String, im: String },
}

fn parse_rational(s: &str) -> anyhow::Result<BigRational> {
    s.trim().parse().ok().with_context(|| format!("not a rational number: {s}"))
}

/// `a`, `bi`, `a+bi` or `a-bi` with rational parts.
fn parse_rate(s: &str) -> anyhow::Result<CRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(CRational::real(parse_rational(&s)?));
    };
    let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').last().map(|(k, _)| k);
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other.trim_start_matches('+'),
    };
    Ok(CRational::new(parse_rational(re)?, parse_rational(im)?))
}

fn config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig { n_tail: cli.n_tail, output_dir: cli.out.clone(), ..Default::default() };
    if let Some(g) = &cli.lambda_grid {
        cfg.lambda_samples = g.split(',').map(parse_rate).collect::<anyhow::Result<_>>()?;
    }
    if cfg.lambda_samples.iter().any(|l| l.re < BigRational::from_integer(0.into())) {
        bail!("rates must have nonnegative real part");
    }
    cfg.corotational_policy = match cli.corotational_policy {
        Policy::AutoDerive => CorotationalPolicy::AutoDerive,
        Policy::External => CorotationalPolicy::External,
    };
    Ok(cfg)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = config(cli)?;
    match &cli.command {
        Command::Verify => {
            let report = run_all(&cfg);
            let text = report.render_text();
            print!("{text}");
            if let Some(dir) = &cli.out {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("report.json"), report.to_json())?;
                std::fs::write(dir.join("report.txt"), &text)?;
            }
            Ok(report.passed())
        }
        Command::Case { l, m } => {
            let case = ModeCase::covering(*l, *m)?;
            let mut one = RunConfig::only(vec![case]);
            one.lambda_samples = cfg.lambda_samples;
            one.n_tail = cfg.n_tail;
            one.corotational_policy = cfg.corotational_policy;
            one.output_dir = cfg.output_dir;
            let report = run_all(&one);
            print!("{}", report.render_text());
            Ok(report.passed())
        }
        Command::ExportSupplement => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("supplement"));
            let mut ok = true;
            for case in supplement_cases() {
                let v = verify_case(&case, cfg.corotational_policy, &cfg.lambda_samples);
                match export_supplement(&case, &v, &dir) {
                    Ok(p) => println!("{}", p.display()),
                    Err(e) => {
                        eprintln!("{case}: {e}");
                        ok = false;
                    }
                }
            }
            Ok(ok)
        }
        Command::Convergence { l, m, re, im } => {
            let case = ModeCase::finite(*l, *m)?;
            let lam = CRational::new(parse_rational(re)?, parse_rational(im)?);
            if lam.re < BigRational::from_integer(0.into()) {
                bail!("rates must have nonnegative real part");
            }
            let opts = ConvergenceOptions { keep_series: cli.out.is_some(), ..Default::default() };
            let r = sample_convergence(&case, &lam, cli.n_tail, &opts)?;
            println!("{}", serde_json::to_string_pretty(&r)?);
            if let Some(dir) = &cli.out {
                std::fs::create_dir_all(dir)?;
                r.write_series_csv(&dir.join(format!("series_{}{}.csv", l, m)))?;
            }
            Ok(r.within(ENVELOPE_TOLERANCE))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates() {
        let c = |a, b| CRational::from_ints(a, b);
        assert_eq!(parse_rate("0").unwrap(), c(0, 0));
        assert_eq!(parse_rate("2i").unwrap(), c(0, 2));
        assert_eq!(parse_rate("1+3i").unwrap(), c(1, 3));
        assert_eq!(parse_rate("1 - i").unwrap(), c(1, -1));
        assert_eq!(parse_rate("-2/3i").unwrap().im, BigRational::new((-2).into(), 3.into()));
        assert!(parse_rate("abc").is_err());
    }
}
