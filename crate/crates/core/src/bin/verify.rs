//! Suite runner: seeded property verification with machine-readable
//! reports.
//!
//! Exit codes: 0 all properties pass, 1 at least one property failed,
//! 2 usage error.  GORENSTEIN_KIT_THREADS caps worker parallelism.

use clap::Parser;
use gorenstein_kit::gen::RingDescriptor;
use gorenstein_kit::suite::{self, SuiteConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "verify",
    about = "Run seeded property suites for the Gorenstein group-ring toolkit"
)]
struct Cli {
    /// Suite name: ring, linalg, modules, fitting, biduals, complexes,
    /// stark, kolyvagin, limits, or all
    #[arg(long)]
    suite: String,

    /// Seed for the instance streams
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Instances per property per ring
    #[arg(long, default_value_t = 50)]
    count: usize,

    /// Ring descriptor p=<p>,m=<m>,g=<c1:c2:...>; repeatable.  Defaults
    /// to the standard grid when omitted.
    #[arg(long = "ring")]
    rings: Vec<String>,

    /// Enumeration bound for brute-force oracles
    #[arg(long, default_value_t = 65536)]
    bound: u64,

    /// Write the JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_ring(spec: &str) -> Result<RingDescriptor, String> {
    let mut p = None;
    let mut m = None;
    let mut group = Vec::new();
    for part in spec.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("malformed ring component '{}'", part))?;
        match key {
            "p" => p = Some(value.parse::<u64>().map_err(|e| e.to_string())?),
            "m" => m = Some(value.parse::<u32>().map_err(|e| e.to_string())?),
            "g" => {
                if !value.is_empty() {
                    for o in value.split(':') {
                        group.push(o.parse::<u64>().map_err(|e| e.to_string())?);
                    }
                }
            }
            other => return Err(format!("unknown ring key '{}'", other)),
        }
    }
    Ok(RingDescriptor {
        p: p.ok_or("ring spec needs p=<prime>")?,
        m: m.ok_or("ring spec needs m=<exponent>")?,
        group,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("GORENSTEIN_KIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }

    let known = suite::SUITES.iter().any(|&s| s == cli.suite) || cli.suite == "all";
    if !known {
        eprintln!(
            "error: unknown suite '{}'; expected one of {} or all",
            cli.suite,
            suite::SUITES.join(", ")
        );
        return ExitCode::from(2);
    }

    let rings = if cli.rings.is_empty() {
        SuiteConfig::default_grid()
    } else {
        let mut out = Vec::new();
        for spec in &cli.rings {
            match parse_ring(spec) {
                Ok(d) => out.push(d),
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(2);
                }
            }
        }
        out
    };
    for d in &rings {
        if let Err(e) = d.build() {
            eprintln!("error: invalid grid ring {}: {}", d.label(), e);
            return ExitCode::from(2);
        }
    }
    if cli.count == 0 {
        eprintln!("error: count must be at least 1");
        return ExitCode::from(2);
    }

    let cfg = SuiteConfig {
        suite: cli.suite.clone(),
        seed: cli.seed,
        count: cli.count,
        rings,
        bound: cli.bound,
    };
    let report = suite::run_suite(&cfg);

    for prop in &report.properties {
        let verdict = if prop.failures == 0 { "PASS" } else { "FAIL" };
        let ms = report.timing.wall_ms.get(&prop.name).copied().unwrap_or(0);
        println!(
            "{} {}: instances={} failures={} ({} ms)",
            verdict, prop.name, prop.instances, prop.failures, ms
        );
    }
    println!(
        "total: {} properties, {} failures, {} ms",
        report.properties.len(),
        report.failures(),
        report.timing.total_ms
    );

    if let Some(path) = &cli.out {
        match serde_json::to_string_pretty(&report) {
            Ok(body) => {
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: cannot write report to {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            Err(e) => {
                eprintln!("error: cannot serialize report: {}", e);
                return ExitCode::from(2);
            }
        }
    }

    if report.failures() > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
