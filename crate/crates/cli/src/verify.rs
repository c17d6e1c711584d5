use serde::Serialize;

use heiscone::verify::{check_names, run as run_battery, CheckEntry, RunConfig};

use crate::args::VerifyArgs;
use crate::json::{num, to_string, Num};
use crate::{emit, CmdResult, Failure, EXIT_CHECK_FAILED};

#[derive(Serialize)]
struct Config {
    fd_step: Num,
    abs_tol: Num,
    rel_tol: Num,
    samples: usize,
    domain_guard: Num,
    filter: Option<String>,
}

#[derive(Serialize)]
struct Entry {
    check: String,
    target: String,
    samples: usize,
    max_residual: Num,
    tolerance: Num,
    pass: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct Report {
    seed: u64,
    config: Config,
    pass: bool,
    entries: Vec<Entry>,
}

impl From<&CheckEntry> for Entry {
    fn from(e: &CheckEntry) -> Self {
        Self {
            check: e.check.clone(),
            target: e.target.clone(),
            samples: e.samples,
            max_residual: num(e.max_residual),
            tolerance: num(e.tolerance),
            pass: e.pass,
            error: e.error.clone(),
        }
    }
}

fn config(cfg: &RunConfig, filter: Option<&str>) -> Config {
    Config {
        fd_step: num(cfg.fd_step),
        abs_tol: num(cfg.abs_tol),
        rel_tol: num(cfg.rel_tol),
        samples: cfg.samples,
        domain_guard: num(cfg.domain_guard),
        filter: filter.map(str::to_string),
    }
}

pub fn run(a: VerifyArgs) -> CmdResult {
    if a.list {
        emit(None, &(check_names().join("\n") + "\n"))?;
        return Ok(0);
    }
    let cfg = a.run.config()?;
    let report = run_battery(&cfg, a.filter.as_deref()).map_err(Failure::usage)?;
    let out = Report {
        seed: report.seed,
        config: config(&cfg, a.filter.as_deref()),
        pass: report.all_pass(),
        entries: report.entries.iter().map(Entry::from).collect(),
    };
    emit(a.out.as_deref(), &to_string(&out))?;
    Ok(if out.pass { 0 } else { EXIT_CHECK_FAILED })
}
