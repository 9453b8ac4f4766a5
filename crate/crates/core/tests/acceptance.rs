//! One line per acceptance check; exits non-zero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use theta_lab::report::Status;
use theta_lab::suites::{run_criterion, SuiteOptions};

const TITLES: [&str; 14] = [
    "Hecke theta for sqrt(12) matches eta^2 through q^40",
    "theta law on Gamma_theta, 20 samples",
    "Jacobi theta law and weight 3/2 law",
    "twisted theta laws on Gamma0(64)",
    "theta^S tensor, diagonal and quasi-periodicity identities",
    "Fourier-Jacobi reconstruction",
    "Siegel theta as specialized Riemann theta",
    "exact symbolic suites",
    "enveloping-algebra identities",
    "harmonic dimensions and ladder split",
    "group-coordinate operators",
    "majorant transport invariance",
    "Shimura kernel properties",
    "negative control",
];

fn budget(n: u8) -> Option<Duration> {
    match n {
        1 => Some(Duration::from_secs(10)),
        2 | 9 => Some(Duration::from_secs(30)),
        8 => Some(Duration::from_secs(60)),
        13 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

/// The corrupted multiplier through the binary: exit code 1 and max residual > 0.1.
fn binary_negative_control() -> Result<String, String> {
    let out = std::env::temp_dir().join(format!("theta-lab-negative-{}.json", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_theta-lab"))
        .args(["verify", "classical", "--corrupt-multiplier", "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_file(&out);
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let residual = v["criteria"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["criterion"] == 2))
        .and_then(|c| c["equations"][0]["max_residual"].as_f64())
        .ok_or("no theta-law residual in the report")?;
    let code = status.status.code();
    if code == Some(1) && residual > 0.1 {
        Ok(format!("exit 1, max residual {residual:.3}"))
    } else {
        Err(format!("exit {code:?}, max residual {residual}"))
    }
}

fn main() {
    let opts = SuiteOptions::default();
    let mut failed = 0;
    for n in 1..=14u8 {
        let start = Instant::now();
        let run = run_criterion(n, &opts);
        let elapsed = start.elapsed();
        let mut detail = match &run {
            Ok(r) if r.passed() => {
                let errata = r.report.checks.iter().filter(|c| c.status == Status::Erratum).count();
                let mut s = format!("{} checks", r.report.checks.len());
                // Controls that must stay away from zero are left out of the maximum.
                let is_control = |id: &str| id.contains("!=") || id.contains("rejected");
                let passing = r.report.checks.iter().filter(|c| c.status == Status::Pass && !is_control(&c.id)).filter_map(|c| c.residual);
                if let Some(m) = passing.reduce(f64::max) {
                    s += &format!(", max residual {m:.2e}");
                }
                if errata > 0 {
                    s += &format!(", {errata} printed-formula errata recorded");
                }
                Ok(s)
            }
            Ok(r) => Err(r.report.failures().iter().map(|c| c.id.clone()).collect::<Vec<_>>().join("; ")),
            Err(e) => Err(e.to_string()),
        };
        if let (Ok(_), Some(b)) = (&detail, budget(n)) {
            if elapsed > b {
                detail = Err(format!("took {elapsed:.1?}, budget {b:?}"));
            }
        }
        if n == 14 {
            detail = match (detail, binary_negative_control()) {
                (Ok(a), Ok(b)) => Ok(format!("{a}; binary: {b}")),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
        }
        let title = TITLES[n as usize - 1];
        match detail {
            Ok(d) => println!("criterion {n:>2} PASS  {title} ({d}, {elapsed:.2?})"),
            Err(d) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {title}: {d}");
            }
        }
    }
    println!("acceptance: {} of 14 passed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
