//! `geodesic`: curves as CSV on stdout (or `--out`), a JSON summary on stderr.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use heiscone::geodesics::bvp::{bvp_solve_u, shoot_u, BvpOutcome};
use heiscone::geodesics::closed_form::{
    closed_form_cone, closed_form_heis, ConeGeodesicParams, ConeKind, HeisGeodesicParams, HeisKind,
};
use heiscone::geodesics::{integrate_geodesic, shoot_bvp, Curve};
use heiscone::verify::RunConfig;
use heiscone::{GeodesicState, IntegratorConfig, Manifold, MetricId, Point, Tangent};

use crate::args::{parse_metric, Family, GeodesicArgs, Mode, Reals, Solver};
use crate::json::{field, num, to_string, Num};
use crate::{emit, CmdResult, Failure, EXIT_UNSOLVABLE};

const DEFAULT_POINTS: usize = 101;

/// Rows of `s` followed by coordinates.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(m: Manifold) -> Self {
        let mut columns = vec!["s"];
        columns.extend_from_slice(m.coord_names());
        Self { columns, rows: Vec::new() }
    }

    fn push(&mut self, s: f64, coords: &[f64]) {
        let mut row = vec![s];
        row.extend_from_slice(coords);
        self.rows.push(row);
    }

    fn length(&self) -> f64 {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) => b[0] - a[0],
            _ => 0.0,
        }
    }

    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(|&x| field(x)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Default)]
struct Summary {
    mode: &'static str,
    metric: String,
    rows: usize,
    /// Last `s` minus first `s`; the curves are unit speed.
    length: Option<Num>,
    termination: Option<&'static str>,
    shoot_residual: Option<Num>,
    max_deviation: Option<Num>,
}

#[derive(Serialize)]
struct Unsolvable {
    error: &'static str,
    bound: &'static str,
    delta_t: Num,
    message: String,
}

fn need<'a>(v: &'a Option<Reals>, flag: &str) -> Result<&'a [f64], Failure> {
    v.as_ref()
        .map(|r| r.0.as_slice())
        .ok_or_else(|| Failure::usage(format!("--{flag} is required here")))
}

/// `n` evenly spaced values on `[0, len]`, ending exactly at `len`.
fn grid(len: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| if i + 1 == n { len } else { len * i as f64 / (n - 1) as f64 })
        .collect()
}

fn integrator(cfg: &RunConfig, max_step: Option<f64>) -> IntegratorConfig {
    let mut c = cfg.integrator();
    c.ode.max_step = max_step;
    c
}

fn curve_table(c: &Curve, points: Option<usize>, map: impl Fn(&[f64]) -> Vec<f64>, m: Manifold) -> Result<Table, Failure> {
    let mut t = Table::new(m);
    match points {
        Some(n) => {
            for s in grid(c.end().s, n) {
                t.push(s, &map(c.sample_at(s)?.point.coords()));
            }
        }
        None => {
            for smp in &c.samples {
                t.push(smp.s, &map(smp.point.coords()));
            }
        }
    }
    Ok(t)
}

fn finish(a: &GeodesicArgs, table: &Table, mut summary: Summary) -> CmdResult {
    summary.rows = table.rows.len();
    summary.length = Some(num(table.length()));
    emit(a.out.as_deref(), &table.csv())?;
    eprint!("{}", to_string(&summary));
    Ok(0)
}

fn ivp(a: &GeodesicArgs, cfg: &RunConfig) -> CmdResult {
    let m = parse_metric(a.metric.as_deref().unwrap_or("cone"))?;
    let p = Point::with_guard(m.manifold(), need(&a.start, "start")?, cfg.domain_guard)?;
    let init = GeodesicState::normalized(&m, Tangent::new(p, need(&a.vel, "vel")?)?)?;
    let c = integrate_geodesic(&m, &init, a.len, &integrator(cfg, a.max_step))?;
    let table = curve_table(&c, a.points, |x| x.to_vec(), m.manifold())?;
    finish(
        a,
        &table,
        Summary {
            mode: "ivp",
            metric: m.name(),
            termination: Some(c.termination.as_str()),
            ..Summary::default()
        },
    )
}

fn unsolvable(delta_t: f64) -> Failure {
    let d = Unsolvable {
        error: "unsolvable",
        bound: "|t1−t0| ≥ 2π",
        delta_t: num(delta_t),
        message: format!("no geodesic of U joins the points: |t1−t0| = {} ≥ 2π", delta_t.abs()),
    };
    eprint!("{}", to_string(&d));
    Failure {
        code: EXIT_UNSOLVABLE,
        message: "boundary value problem is unsolvable: |t1−t0| ≥ 2π".into(),
    }
}

fn pair(v: &[f64], flag: &str) -> Result<(f64, f64), Failure> {
    match v {
        [t, r] => Ok((*t, *r)),
        _ => Err(Failure::usage(format!("--{flag} on U takes t,r"))),
    }
}

/// Two-point problem in `U`, the half-plane `x = y = 0` of the cone, with
/// points and output in cone coordinates `(t, r)`.
fn bvp_u(a: &GeodesicArgs, cfg: &RunConfig) -> CmdResult {
    let (t0, r0) = pair(need(&a.start, "from")?, "from")?;
    let (t1, r1) = pair(need(&a.to, "to")?, "to")?;
    let n = a.points.unwrap_or(DEFAULT_POINTS);
    let mut table = Table::new(Manifold::HalfPlane);
    let mut summary = Summary {
        mode: "bvp",
        metric: MetricId::SubHalfPlane.name(),
        ..Summary::default()
    };
    match a.solver {
        Solver::ClosedForm => match bvp_solve_u(t0, r0, t1, r1)? {
            BvpOutcome::Unsolvable { delta_t } => return Err(unsolvable(delta_t)),
            BvpOutcome::Solutions(sols) => {
                let sol = sols
                    .first()
                    .ok_or_else(|| Failure::usage("no solution found for these endpoints"))?;
                for s in grid(sol.s, n) {
                    let (t, r) = sol.evaluate(t0, r0, s);
                    table.push(s, &[t, r]);
                }
            }
        },
        Solver::Shoot => {
            let res = match shoot_u(t0, r0, t1, r1, &cfg.shoot()) {
                Ok(res) => res,
                Err(_) if (t1 - t0).abs() >= 2.0 * PI => return Err(unsolvable(t1 - t0)),
                Err(e) => return Err(e.into()),
            };
            let c = integrate_geodesic(&MetricId::SubHalfPlane, &res.state, res.length, &cfg.integrator())?;
            // the half-plane chart carries t/2
            table = curve_table(&c, Some(n), |x| vec![2.0 * x[0], x[1]], Manifold::HalfPlane)?;
            summary.shoot_residual = Some(num(res.residual));
        }
    }
    finish(a, &table, summary)
}

fn bvp_shoot(a: &GeodesicArgs, cfg: &RunConfig, m: MetricId) -> CmdResult {
    let p0 = Point::with_guard(m.manifold(), need(&a.start, "from")?, cfg.domain_guard)?;
    let p1 = Point::with_guard(m.manifold(), need(&a.to, "to")?, cfg.domain_guard)?;
    let res = shoot_bvp(&m, &p0, &p1, &cfg.shoot())?;
    let c = integrate_geodesic(&m, &res.state, res.length, &integrator(cfg, a.max_step))?;
    let table = curve_table(&c, Some(a.points.unwrap_or(DEFAULT_POINTS)), |x| x.to_vec(), m.manifold())?;
    finish(
        a,
        &table,
        Summary {
            mode: "bvp",
            metric: m.name(),
            shoot_residual: Some(num(res.residual)),
            ..Summary::default()
        },
    )
}

fn bvp(a: &GeodesicArgs, cfg: &RunConfig) -> CmdResult {
    match (&a.manifold, &a.metric) {
        (Some(u), None) if u.eq_ignore_ascii_case("u") => bvp_u(a, cfg),
        (Some(other), None) => Err(Failure::usage(format!("--manifold {other:?}: only U is supported"))),
        (None, None) => bvp_u(a, cfg),
        (None, Some(m)) => bvp_shoot(a, cfg, parse_metric(m)?),
        (Some(_), Some(_)) => Err(Failure::usage("give either --manifold or --metric")),
    }
}

enum Params {
    Heis(HeisGeodesicParams),
    Cone(ConeGeodesicParams),
}

fn family_params(f: Family, p: &[f64], k: &[f64]) -> Result<Params, Failure> {
    let want = |n: usize| -> Result<(), Failure> {
        if k.len() == n {
            Ok(())
        } else {
            Err(Failure::usage(format!("{f:?} takes {n} parameters, got {}", k.len())))
        }
    };
    let heis = |kind| -> Result<Params, Failure> {
        let p0 = Point::new(Manifold::Heisenberg, p)?;
        Ok(Params::Heis(HeisGeodesicParams::new(kind, p0)?))
    };
    let cone = |kind| -> Result<Params, Failure> {
        let p0 = Point::new(Manifold::Cone, p)?;
        Ok(Params::Cone(ConeGeodesicParams::new(kind, p0)?))
    };
    match f {
        Family::HeisHorizontal => {
            want(2)?;
            heis(HeisKind::HorizontalLine { a: k[0], b: k[1] })
        }
        Family::HeisVertical => {
            want(1)?;
            heis(HeisKind::Vertical { c: k[0] })
        }
        Family::HeisGeneral => {
            want(3)?;
            heis(HeisKind::General {
                c: k[0],
                k: Complex64::new(k[1], k[2]),
            })
        }
        Family::ConeRadial => {
            want(0)?;
            cone(ConeKind::RadialLine)
        }
        Family::ConeVerticalPlane => {
            want(1)?;
            cone(ConeKind::VerticalPlane { c1: k[0] })
        }
        Family::ConeGeneral => {
            want(4)?;
            cone(ConeKind::General {
                c1: k[0],
                c3: k[1],
                cc: Complex64::new(k[2], k[3]),
            })
        }
    }
}

fn closed_form(a: &GeodesicArgs, cfg: &RunConfig) -> CmdResult {
    let f = a.family.ok_or_else(|| Failure::usage("--family is required for closed-form"))?;
    let k = a.params.as_ref().map(|r| r.0.clone()).unwrap_or_default();
    let params = family_params(f, need(&a.start, "start")?, &k)?;
    let (m, init) = match &params {
        Params::Heis(h) => (MetricId::Sasaki, h.initial_state()?),
        Params::Cone(c) => (MetricId::Cone, c.initial_state()?),
    };
    let eval = |s: f64| -> heiscone::Result<Point> {
        match &params {
            Params::Heis(h) => Ok(closed_form_heis(h, s)),
            Params::Cone(c) => closed_form_cone(c, s),
        }
    };
    let mut table = Table::new(m.manifold());
    let ss = grid(a.len, a.points.unwrap_or(DEFAULT_POINTS));
    for &s in &ss {
        table.push(s, eval(s)?.coords());
    }
    let mut summary = Summary {
        mode: "closed-form",
        metric: m.name(),
        ..Summary::default()
    };
    if a.compare {
        let c = integrate_geodesic(&m, &init, a.len, &integrator(cfg, a.max_step))?;
        let mut worst: f64 = 0.0;
        for (s, row) in ss.iter().zip(&table.rows) {
            let q = c.sample_at(*s)?.point;
            for (x, y) in q.coords().iter().zip(&row[1..]) {
                worst = worst.max((x - y).abs());
            }
        }
        summary.termination = Some(c.termination.as_str());
        summary.max_deviation = Some(num(worst));
    }
    finish(a, &table, summary)
}

pub fn run(a: GeodesicArgs) -> CmdResult {
    let cfg = a.run.config()?;
    if !(a.len > 0.0 && a.len.is_finite()) {
        return Err(Failure::usage(format!("--len must be positive, got {}", a.len)));
    }
    match a.mode {
        Mode::Ivp => ivp(&a, &cfg),
        Mode::Bvp => bvp(&a, &cfg),
        Mode::ClosedForm => closed_form(&a, &cfg),
    }
}
