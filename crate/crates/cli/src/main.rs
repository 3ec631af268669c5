use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use renyi_core::harness::{full_battery, parse_order, run_battery, Check, SuiteConfig, SuiteReport};
use renyi_core::sdpsolve::sdp_stats;

/// Randomized verification of Rényi divergence and pretty good measure
/// inequalities.
#[derive(Parser)]
#[command(name = "renyi-toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sandwich bound, reverse ALT, equality condition.
    Divergence(Common),
    /// Duality, entropy chains, derivative and stationarity.
    Entropy(Common),
    /// Fidelity bounds and the fidelity certificate.
    Fidelity(Common),
    /// PGM identity, guessing chain, PGM optimality.
    Pgm(Common),
    /// Singlet-fraction optimality.
    Singlet(Common),
    /// Min-entropy and guessing-probability programs.
    Sdp(Common),
    /// Arbitrary checks, or the complete acceptance battery.
    Suite {
        #[command(flatten)]
        common: Common,
        /// Run every check at its acceptance trial count; --dims, --trials
        /// and --alpha are ignored.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Dimension profiles, comma separated; factors joined by `x` (e.g. `2,3` or `2x2,2x3`).
    #[arg(long, value_delimiter = ',', value_parser = parse_dims)]
    dims: Vec<Vec<usize>>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Orders, comma separated; `inf` allowed.
    #[arg(long, value_delimiter = ',', value_parser = parse_alpha)]
    alpha: Vec<f64>,
    /// Restrict to these check identifiers.
    #[arg(long, value_delimiter = ',', value_parser = parse_check)]
    check: Vec<Check>,
    /// Slack allowance override, `check=value`.
    #[arg(long, value_parser = parse_override)]
    tolerance: Vec<(String, f64)>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    s.split('x')
        .map(|f| f.trim().parse::<usize>().map_err(|_| format!("bad dimension profile `{s}`")))
        .collect()
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    parse_order(s).map_err(|e| e.to_string())
}

fn parse_check(s: &str) -> Result<Check, String> {
    Check::parse(s).map_err(|e| e.to_string())
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected `check=value`, got `{s}`"))?;
    let v = v.parse::<f64>().map_err(|_| format!("bad tolerance `{v}`"))?;
    Ok((k.to_string(), v))
}

fn group(command: &Command) -> &'static [Check] {
    use Check::*;
    match command {
        Command::Divergence(_) => &[Sandwich, ReverseAlt, Equality],
        Command::Entropy(_) => &[
            Duality,
            PetzMinimalChain,
            CoherentBound,
            MinlikeBound,
            MinlikeBoundCq,
            Derivative,
            Stationarity,
        ],
        Command::Fidelity(_) => &[FidelityBounds, Certificate, CertificateFpg, CertificateCommuting],
        Command::Pgm(_) => &[PgmIdentity, GuessingChain, PgmOptimality],
        Command::Singlet(_) => &[SingletOptimality],
        Command::Sdp(_) => &[MinEntropyCq, GuessingChain],
        Command::Suite { .. } => &Check::ALL,
    }
}

fn configs(command: &Command) -> Result<Vec<SuiteConfig>, String> {
    let (common, full) = match command {
        Command::Divergence(c)
        | Command::Entropy(c)
        | Command::Fidelity(c)
        | Command::Pgm(c)
        | Command::Singlet(c)
        | Command::Sdp(c) => (c, false),
        Command::Suite { common, full } => (common, *full),
    };
    let allowed = group(command);
    if let Some(c) = common.check.iter().find(|c| !allowed.contains(c)) {
        return Err(format!("check `{}` is not part of this subcommand", c.id()));
    }
    let overrides: BTreeMap<String, f64> = common.tolerance.iter().cloned().collect();
    if full {
        let mut battery = full_battery(common.seed);
        if !common.check.is_empty() {
            battery.retain(|cfg| common.check.iter().any(|c| cfg.checks[0] == c.id()));
        }
        for cfg in &mut battery {
            cfg.tolerance_overrides = overrides.clone();
        }
        return Ok(battery);
    }
    let checks = if common.check.is_empty() { allowed } else { &common.check[..] };
    let mut cfg = SuiteConfig::new(common.seed, checks, common.trials);
    cfg.dims = common.dims.clone();
    cfg.alphas = common.alpha.clone();
    cfg.tolerance_overrides = overrides;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(vec![cfg])
}

fn summary(report: &SuiteReport) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let worst = c.worst_slack.map_or("-".to_string(), |w| format!("{w:.3e}"));
        s += &format!(
            "{:<5} {:<22} trials {:>6}  failures {:>5}  errors {:>4}  worst slack {}\n",
            if c.passed() { "PASS" } else { "FAIL" },
            c.check.id(),
            c.trials,
            c.failures,
            c.errors,
            worst
        );
    }
    let st = sdp_stats();
    s += &format!(
        "sdp solves {}  unhealthy {}  worst relative gap {:.3e}\nwall time {:.2} s\n",
        st.solves, st.unhealthy, st.worst_relative_gap, report.wall_time
    );
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let configs = match configs(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let common = match &cli.command {
        Command::Divergence(c)
        | Command::Entropy(c)
        | Command::Fidelity(c)
        | Command::Pgm(c)
        | Command::Singlet(c)
        | Command::Sdp(c)
        | Command::Suite { common: c, .. } => c,
    };
    let report = match run_battery(&configs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let csv = matches!(common.format, Format::Csv);
    match &common.out {
        Some(path) => {
            if let Err(e) = report.write(path, csv) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            print!("{}", summary(&report));
            println!("report written to {}", path.display());
        }
        None => {
            let text = if csv { report.to_csv() } else { report.to_json() };
            match text {
                Ok(t) => {
                    let mut out = std::io::stdout().lock();
                    let _ = out.write_all(t.as_bytes());
                    let _ = out.write_all(b"\n");
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            eprint!("{}", summary(&report));
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
