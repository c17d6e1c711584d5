use serde::Serialize;

use heiscone::geodesics::{cc_distance_estimate, ShootConfig};
use heiscone::verify::CC_L_LIST;
use heiscone::{Manifold, Point};

use crate::args::CcArgs;
use crate::json::{num, nums, to_string, Num};
use crate::{emit, CmdResult, Failure, EXIT_CHECK_FAILED};

#[derive(Serialize)]
struct Entry {
    #[serde(rename = "L")]
    l: Num,
    distance: Option<Num>,
    error: Option<String>,
}

#[derive(Serialize)]
struct Report {
    from: Vec<Num>,
    to: Vec<Num>,
    seed: u64,
    starts: usize,
    sequence: Vec<Entry>,
    estimate: Option<Num>,
    monotone: bool,
}

pub fn run(a: CcArgs) -> CmdResult {
    let cfg = a.run.config()?;
    if a.starts == 0 {
        return Err(Failure::usage("--starts must be at least 1"));
    }
    let p0 = Point::with_guard(Manifold::Heisenberg, &a.from.0, cfg.domain_guard)?;
    let p1 = Point::with_guard(Manifold::Heisenberg, &a.to.0, cfg.domain_guard)?;
    let l_list = a.l_list.map(|l| l.0).unwrap_or_else(|| CC_L_LIST.to_vec());
    let shoot = ShootConfig {
        starts: a.starts,
        ..cfg.shoot()
    };
    let rep = cc_distance_estimate(&p0, &p1, &l_list, &shoot)?;
    let out = Report {
        from: nums(p0.coords()),
        to: nums(p1.coords()),
        seed: cfg.seed,
        starts: a.starts,
        sequence: rep
            .entries
            .iter()
            .map(|e| Entry {
                l: num(e.l),
                distance: e.distance.as_ref().ok().map(|&d| num(d)),
                error: e.distance.as_ref().err().map(|e| e.to_string()),
            })
            .collect(),
        estimate: rep.estimate.map(num),
        monotone: rep.monotone,
    };
    emit(None, &to_string(&out))?;
    Ok(if rep.estimate.is_some() { 0 } else { EXIT_CHECK_FAILED })
}
