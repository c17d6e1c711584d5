//! Two-point problem in the totally geodesic half-plane `x = y = 0` of the
//! cone.
//!
//! Endpoints are given as `(t, r)` in cone coordinates, where the induced
//! metric is `dr^2 + (r^2/4) dt^2`. A geodesic through `(t0, r0)` is
//! `r(s) = sqrt(s^2 + 2as + r0^2)`, `t(s) = t0 + 2 sigma atan2(s w, r0^2 + as)`
//! with `w = sqrt(r0^2 - a^2)` and `sigma = +-1`. A solution exists iff
//! `|t1 - t0| < 2 pi`.

use std::f64::consts::PI;

use crate::error::{GeomError, Result};
use crate::manifold::{Manifold, Point, Tangent};
use crate::metric::MetricId;

use super::{shoot_bvp, ShootConfig, ShootResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvpSolution {
    /// Length, `s >= 0`.
    pub s: f64,
    /// `r r'` at the start, `|a| <= r0`.
    pub a: f64,
    /// Direction of travel in `t`.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BvpOutcome {
    /// Shortest first.
    Solutions(Vec<BvpSolution>),
    Unsolvable { delta_t: f64 },
}

impl BvpSolution {
    /// `(t, r)` at arclength `s` from `(t0, r0)`.
    pub fn evaluate(&self, t0: f64, r0: f64, s: f64) -> (f64, f64) {
        let r = (s * s + 2.0 * self.a * s + r0 * r0).max(0.0).sqrt();
        let w = (r0 * r0 - self.a * self.a).max(0.0).sqrt();
        let t = t0 + self.sigma * 2.0 * (s * w).atan2(r0 * r0 + self.a * s);
        (t, r)
    }

    /// Unit initial velocity `(dt/ds, dr/ds)` in cone coordinates.
    pub fn initial_velocity(&self, r0: f64) -> (f64, f64) {
        let w = (r0 * r0 - self.a * self.a).max(0.0).sqrt();
        (2.0 * self.sigma * w / (r0 * r0), self.a / r0)
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(GeomError::InvalidParameters(format!("r must be positive, got {r}")));
    }
    Ok(())
}

fn consistent(sol: &BvpSolution, t0: f64, r0: f64, t1: f64, r1: f64) -> bool {
    let (t, r) = sol.evaluate(t0, r0, sol.s);
    (t - t1).abs() <= 1e-10 * t1.abs().max(1.0) && (r - r1).abs() <= 1e-10 * r1.max(1.0)
}

pub fn bvp_solve_u(t0: f64, r0: f64, t1: f64, r1: f64) -> Result<BvpOutcome> {
    check_r(r0)?;
    check_r(r1)?;
    let dt = t1 - t0;
    if dt.abs() >= 2.0 * PI {
        return Ok(BvpOutcome::Unsolvable { delta_t: dt });
    }
    if dt == 0.0 {
        let s = (r1 - r0).abs();
        let a = if r1 >= r0 { r0 } else { -r0 };
        return Ok(BvpOutcome::Solutions(vec![BvpSolution { s, a, sigma: 1.0 }]));
    }
    let cos = (dt / 2.0).cos();
    let mut out: Vec<BvpSolution> = Vec::new();
    for sign_s in [1.0, -1.0] {
        for sign_c in [1.0, -1.0] {
            let s2 = r1 * r1 + r0 * r0 + sign_c * 2.0 * r0 * r1 * cos;
            if !(s2 > 0.0) {
                continue;
            }
            let s = sign_s * s2.sqrt();
            let a = (r1 * r1 - r0 * r0 - s * s) / (2.0 * s);
            for sigma in [1.0, -1.0] {
                // (s, a, sigma) and (-s, -a, -sigma) trace the same curve
                let cand = if s < 0.0 {
                    BvpSolution { s: -s, a: -a, sigma: -sigma }
                } else {
                    BvpSolution { s, a, sigma }
                };
                if !(cand.a.abs() < r0) || !consistent(&cand, t0, r0, t1, r1) {
                    continue;
                }
                let dup = out.iter().any(|o| {
                    (o.s - cand.s).abs() < 1e-12 * cand.s.max(1.0)
                        && (o.a - cand.a).abs() < 1e-12 * r0.max(1.0)
                        && o.sigma == cand.sigma
                });
                if !dup {
                    out.push(cand);
                }
            }
        }
    }
    out.sort_by(|x, y| x.s.total_cmp(&y.s));
    Ok(BvpOutcome::Solutions(out))
}

/// Half-plane point for cone coordinates `(t, r)`; the half-plane chart uses
/// `t/2` so that its metric is `dr^2 + r^2 dt^2`.
pub fn half_plane_point(t: f64, r: f64) -> Result<Point> {
    Point::new(Manifold::HalfPlane, &[t / 2.0, r])
}

/// Shooting counterpart of [`bvp_solve_u`] in the half-plane metric.
pub fn shoot_u(t0: f64, r0: f64, t1: f64, r1: f64, cfg: &ShootConfig) -> Result<ShootResult> {
    shoot_bvp(&MetricId::SubHalfPlane, &half_plane_point(t0, r0)?, &half_plane_point(t1, r1)?, cfg)
}

/// Initial velocity of a closed-form solution in half-plane coordinates,
/// scaled for affine parameter 1 (comparable with `ShootResult::velocity`).
pub fn affine_velocity_u(sol: &BvpSolution, t0: f64, r0: f64) -> Result<Tangent> {
    let (dt, dr) = sol.initial_velocity(r0);
    Tangent::new(half_plane_point(t0, r0)?, &[sol.s * dt / 2.0, sol.s * dr])
}
