//! Adaptive Dormand–Prince 5(4) with cubic Hermite dense output and a
//! terminal event located on the dense output.

use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: Option<f64>,
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: None,
            initial_step: None,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    /// The event function crossed zero; the last node sits on the crossing.
    HitDomainBoundary,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::HitDomainBoundary => "hit-domain-boundary",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub ts: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    pub dys: Vec<Vec<f64>>,
    pub termination: Termination,
}

fn hermite(t0: f64, t1: f64, y0: &[f64], y1: &[f64], f0: &[f64], f1: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
    let h = t1 - t0;
    let th = (t - t0) / h;
    let (t2, t3) = (th * th, th * th * th);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + th;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let d00 = (6.0 * t2 - 6.0 * th) / h;
    let d10 = 3.0 * t2 - 4.0 * th + 1.0;
    let d11 = 3.0 * t2 - 2.0 * th;
    let y = (0..y0.len())
        .map(|i| h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i])
        .collect();
    let dy = (0..y0.len())
        .map(|i| d00 * (y0[i] - y1[i]) + d10 * f0[i] + d11 * f1[i])
        .collect();
    (y, dy)
}

impl OdeSolution {
    pub fn t_end(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// Dense output `(y, y')` at `t` within the solved span.
    pub fn interpolate(&self, t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let (t0, t1) = (self.ts[0], self.t_end());
        if !(t >= t0 && t <= t1) {
            return None;
        }
        let k = match self.ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(k) => return Some((self.ys[k].clone(), self.dys[k].clone())),
            Err(k) => k,
        };
        Some(hermite(
            self.ts[k - 1],
            self.ts[k],
            &self.ys[k - 1],
            &self.ys[k],
            &self.dys[k - 1],
            &self.dys[k],
            t,
        ))
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn recoverable(e: &GeomError) -> bool {
    matches!(e, GeomError::OutsideDomain { .. } | GeomError::StencilExitsDomain { .. })
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end > t0`.
///
/// A stage that leaves the domain (an `OutsideDomain` or `StencilExitsDomain`
/// error from `f`) rejects the step, which is then halved. When `event` is
/// given, integration stops where it first becomes `<= 0`.
pub fn dopri5<F, G>(f: &F, t0: f64, y0: &[f64], t_end: f64, cfg: &OdeConfig, event: Option<&G>) -> Result<OdeSolution>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
    G: Fn(&[f64]) -> f64,
{
    if !(t_end > t0) || !(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0) {
        return Err(GeomError::InvalidParameters(format!(
            "need t_end > t0 and positive tolerances (t0 = {t0}, t_end = {t_end})"
        )));
    }
    let n = y0.len();
    let span = t_end - t0;
    let max_step = cfg.max_step.unwrap_or(span).min(span);
    let mut h = cfg.initial_step.unwrap_or(span * 1e-2).min(max_step);

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = f(t, &y)?;
    let mut sol = OdeSolution {
        ts: vec![t],
        ys: vec![y.clone()],
        dys: vec![k1.clone()],
        termination: Termination::Completed,
    };

    let mut steps = 0usize;
    let mut k = vec![vec![0.0; n]; 7];
    // a rejected stage lay past the event: the boundary is within the step
    let mut boundary_ahead = false;
    while t < t_end {
        steps += 1;
        if steps > cfg.max_steps {
            return Err(GeomError::StepUnderflow { s: t });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            if boundary_ahead {
                // located to within the smallest representable step
                sol.termination = Termination::HitDomainBoundary;
                return Ok(sol);
            }
            return Err(GeomError::StepUnderflow { s: t });
        }

        k[0].clone_from(&k1);
        let mut failed = false;
        let mut stage = vec![0.0; n];
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * k[j][i];
                }
                stage[i] = y[i] + h * acc;
            }
            match f(t + C[s] * h, &stage) {
                Ok(v) => k[s] = v,
                Err(e) if recoverable(&e) => {
                    boundary_ahead = event.is_some_and(|ev| ev(&stage) <= 0.0);
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if failed {
            h *= 0.5;
            continue;
        }
        // stage 7 is evaluated at the 5th-order solution
        let y_new = stage;
        let mut err = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (s, es) in E.iter().enumerate() {
                e += es * k[s][i];
            }
            let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            err += (h * e / sc).powi(2);
        }
        let err = (err / n as f64).sqrt();
        if !err.is_finite() {
            h *= 0.5;
            continue;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err > 1.0 {
            h *= fac.min(1.0);
            continue;
        }

        let t_new = if last { t_end } else { t + h };
        let f_new = k[6].clone();
        if let Some(ev) = event {
            if ev(&y_new) <= 0.0 {
                // bisection on the Hermite interpolant; the event is > 0 at t
                let (mut lo, mut hi) = (t, t_new);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let (ym, _) = hermite(t, t_new, &y, &y_new, &k1, &f_new, mid);
                    if ev(&ym) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let (ye, dye) = hermite(t, t_new, &y, &y_new, &k1, &f_new, lo);
                sol.ts.push(lo);
                sol.ys.push(ye);
                sol.dys.push(dye);
                sol.termination = Termination::HitDomainBoundary;
                return Ok(sol);
            }
        }
        t = t_new;
        y = y_new;
        k1 = f_new;
        sol.ts.push(t);
        sol.ys.push(y.clone());
        sol.dys.push(k1.clone());
        h = (h * fac).min(max_step);
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Rhs = fn(f64, &[f64]) -> Result<Vec<f64>>;
    const NO_EVENT: Option<&fn(&[f64]) -> f64> = None;

    #[test]
    fn harmonic_oscillator() {
        let f: Rhs = |_, y| Ok(vec![y[1], -y[0]]);
        let sol = dopri5(&f, 0.0, &[1.0, 0.0], 10.0, &OdeConfig::default(), NO_EVENT).unwrap();
        let y = sol.ys.last().unwrap();
        assert!((y[0] - 10f64.cos()).abs() < 1e-8);
        assert!((y[1] + 10f64.sin()).abs() < 1e-8);
        assert_eq!(sol.t_end(), 10.0);
        let (yi, _) = sol.interpolate(3.3).unwrap();
        assert!((yi[0] - 3.3f64.cos()).abs() < 1e-4);
    }

    #[test]
    fn event_is_located() {
        let f: Rhs = |_, _| Ok(vec![-1.0]);
        let ev = |y: &[f64]| y[0] - 0.25;
        let sol = dopri5(&f, 0.0, &[1.0], 5.0, &OdeConfig::default(), Some(&ev)).unwrap();
        assert_eq!(sol.termination, Termination::HitDomainBoundary);
        assert!((sol.t_end() - 0.75).abs() < 1e-14);
    }

    #[test]
    fn event_on_the_domain_edge() {
        // the event sits exactly where stages start to fail
        let f = |_: f64, y: &[f64]| {
            if y[0] <= 1e-9 {
                Err(GeomError::OutsideDomain {
                    manifold: crate::manifold::Manifold::HalfPlane,
                    coords: y.to_vec(),
                    guard: 1e-9,
                })
            } else {
                Ok(vec![-1.0])
            }
        };
        let ev = |y: &[f64]| y[0] - 1e-9;
        let sol = dopri5(&f, 0.0, &[1.0], 2.0, &OdeConfig::default(), Some(&ev)).unwrap();
        assert_eq!(sol.termination, Termination::HitDomainBoundary);
        assert!((sol.t_end() - (1.0 - 1e-9)).abs() < 1e-12);
    }

    #[test]
    fn out_of_domain_stage_is_rejected() {
        // y' = -1, only defined for y > 0; stop at y = 1e-6
        let f = |_: f64, y: &[f64]| {
            if y[0] <= 1e-9 {
                Err(GeomError::OutsideDomain {
                    manifold: crate::manifold::Manifold::HalfPlane,
                    coords: y.to_vec(),
                    guard: 1e-9,
                })
            } else {
                Ok(vec![-1.0])
            }
        };
        let ev = |y: &[f64]| y[0] - 1e-6;
        let cfg = OdeConfig {
            initial_step: Some(0.7),
            ..OdeConfig::default()
        };
        let sol = dopri5(&f, 0.0, &[1.0], 3.0, &cfg, Some(&ev)).unwrap();
        assert!((sol.t_end() - (1.0 - 1e-6)).abs() < 1e-12);
    }
}
