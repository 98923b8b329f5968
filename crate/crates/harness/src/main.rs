use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use arctic_harness::experiments::{boundary_fdd, mc_boundary, tiling_summary};
use arctic_harness::report::{ExperimentConfig, Failure, Format, Report};
use arctic_harness::stats::F2Table;
use arctic_harness::verify::{run_suite, Suite};
use arctic_kernel::airy::{airy_fdd, tracy_widom_f2, FddSpec};
use arctic_kernel::center::{green_prob_aztec, green_prob_plane, GreenSiteSet};
use arctic_kernel::extended_kernel::{gap_probability, AztecKernel, GapSpec};
use arctic_kernel::tiling::{particles_from_tiling, sample_tiling};

#[derive(Parser)]
#[command(
    name = "arctic",
    version,
    about = "Aztec diamond tilings, their kernels and Airy limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random tiling of the order-n diamond.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Probability that the top particle of each line is at most its threshold.
    Gap {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        lines: Vec<usize>,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        thresholds: Vec<f64>,
    },
    /// Boundary distribution at rescaled times against its Airy limit.
    BoundaryFdd {
        #[arg(long)]
        n: usize,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        taus: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        gammas: Vec<f64>,
    },
    /// Monte Carlo boundary fluctuations against F_2.
    McBoundary {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        tau: f64,
        /// Fail with exit code 1 if the KS distance exceeds this.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Tracy-Widom GUE distribution function.
    Tw2 {
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        gammas: Vec<f64>,
    },
    /// Finite-dimensional distribution of the Airy process.
    AiryFdd {
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        taus: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        gammas: Vec<f64>,
    },
    /// Green-site probability in the plane and, with --n, in the diamond.
    Center {
        /// Sites as `u,l;u,l;...`.
        #[arg(long, value_parser = parse_sites, allow_hyphen_values = true)]
        sites: Sites,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run invariant suites; exit code 1 if any check fails.
    Verify {
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Suite::Bruteforce, Suite::Identity, Suite::Hermite, Suite::Airy])]
        suite: Vec<Suite>,
    },
}

#[derive(Clone)]
struct Sites(Vec<(i64, i64)>);

fn parse_sites(s: &str) -> Result<Sites, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (u, l) = p
                .split_once(',')
                .ok_or_else(|| format!("site `{p}` is not `u,l`"))?;
            let parse = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("`{v}`: {e}"));
            Ok((parse(u)?, parse(l)?))
        })
        .collect::<Result<_, _>>()
        .map(Sites)
}

enum Output {
    Json(Report),
    Text(String),
}

fn run(cli: &Cli) -> Result<(Output, bool), Failure> {
    let Common { seed, format, .. } = cli.common;
    let json_only = |what: &str| match format {
        Format::Json => Ok(()),
        f => Err(Failure::Input(format!("{what} has no {f:?} output"))),
    };
    let report = |cmd: &str, params: Value, result: Value| {
        Output::Json(Report::new(cmd, seed, params, result))
    };
    Ok(match &cli.command {
        Command::Sample { n, a } => {
            let t = sample_tiling(*n, *a, seed)?;
            let out = match format {
                Format::Json => report("sample", json!({ "n": n, "a": a }), tiling_summary(&t, *a)),
                Format::Svg => Output::Text(t.to_svg()),
                Format::Csv => Output::Text(particles_from_tiling(&t).to_csv()),
            };
            (out, true)
        }
        Command::Gap {
            n,
            a,
            lines,
            thresholds,
        } => {
            json_only("gap")?;
            let k = AztecKernel::new(*n, *a)?;
            let p = gap_probability(&k, &GapSpec::new(lines.clone(), thresholds.clone())?)?;
            let params = json!({ "n": n, "a": a, "lines": lines, "thresholds": thresholds });
            (report("gap", params, json!({ "probability": p })), true)
        }
        Command::BoundaryFdd { n, taus, gammas } => {
            json_only("boundary-fdd")?;
            let r = boundary_fdd(&AztecKernel::new(*n, 1.0)?, taus, gammas)?;
            let params = json!({ "n": n, "taus": taus, "gammas": gammas });
            (report("boundary-fdd", params, json!(r)), true)
        }
        Command::McBoundary {
            n,
            samples,
            tau,
            tol,
        } => {
            let cfg = ExperimentConfig::new(seed, *samples, format, *tol)?;
            let r = mc_boundary(*n, cfg.samples, seed, *tau, &F2Table::standard()?)?;
            if let Some(t) = cfg.tol {
                if r.ks_center > t {
                    return Err(Failure::Invariant(format!(
                        "KS distance {:.4} exceeds {t}",
                        r.ks_center
                    )));
                }
            }
            let out = match format {
                Format::Csv => {
                    let (lo, hi) = r.histogram_range;
                    let w = (hi - lo) / r.histogram.len() as f64;
                    let mut s = String::from("bin_start,bin_end,count\n");
                    for (i, c) in r.histogram.iter().enumerate() {
                        let x = lo + w * i as f64;
                        s.push_str(&format!("{x},{},{c}\n", x + w));
                    }
                    Output::Text(s)
                }
                Format::Svg => return Err(Failure::Input("mc-boundary has no Svg output".into())),
                Format::Json => report(
                    "mc-boundary",
                    json!({ "n": n, "samples": samples, "tau": tau }),
                    json!(r),
                ),
            };
            (out, true)
        }
        Command::Tw2 { gammas } => {
            json_only("tw2")?;
            let values = gammas
                .iter()
                .map(|&g| tracy_widom_f2(g))
                .collect::<Result<Vec<_>, _>>()?;
            (
                report(
                    "tw2",
                    json!({ "gammas": gammas }),
                    json!({ "values": values }),
                ),
                true,
            )
        }
        Command::AiryFdd { taus, gammas } => {
            json_only("airy-fdd")?;
            let p = airy_fdd(&FddSpec::new(taus.clone(), gammas.clone())?)?;
            (
                report(
                    "airy-fdd",
                    json!({ "taus": taus, "gammas": gammas }),
                    json!({ "probability": p }),
                ),
                true,
            )
        }
        Command::Center { sites, n } => {
            json_only("center")?;
            let sites = &sites.0;
            let set = GreenSiteSet::new(sites.clone())?;
            let mut result = json!({ "plane": green_prob_plane(&set)? });
            if let Some(n) = n {
                result["aztec"] = json!(green_prob_aztec(&set, *n)?);
            }
            (
                report("center", json!({ "sites": sites, "n": n }), result),
                true,
            )
        }
        Command::Verify { suite } => {
            json_only("verify")?;
            let reports = suite
                .iter()
                .map(|&s| run_suite(s, seed))
                .collect::<Result<Vec<_>, _>>()?;
            let passed = reports.iter().all(|r| r.passed);
            (
                report(
                    "verify",
                    json!({ "suites": suite }),
                    json!({ "passed": passed, "suites": reports }),
                ),
                passed,
            )
        }
    })
}

fn emit(out: &Output, path: Option<&PathBuf>) -> Result<(), Failure> {
    let text = match out {
        Output::Json(r) => {
            serde_json::to_string_pretty(r).map_err(|e| Failure::Invariant(e.to_string()))? + "\n"
        }
        Output::Text(s) => s.clone(),
    };
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(out, passed)| {
        emit(&out, cli.common.out.as_ref())?;
        Ok(passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
