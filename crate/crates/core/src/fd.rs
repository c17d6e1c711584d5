//! Central finite differences on coordinate charts.
//!
//! Fourth-order stencils with one Richardson level `(16 D(h/2) - D(h)) / 15`.
//! The step along an axis is `step * max(1, |x_axis|) * min(1, b)`, where `b`
//! is the boundary function (`r` or `rho`; infinite on unbounded charts).
//! The first factor keeps the step above rounding noise for large
//! coordinates; the second resolves the length scale `b` on which metrics
//! like `1/rho^2` vary near the boundary.

use crate::error::{GeomError, Result};
use crate::manifold::{Point, DOMAIN_GUARD};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub step: f64,
    pub richardson: bool,
    /// Halve the step until the stencil fits inside the domain instead of
    /// failing. Used by the geodesic integrator near `r = 0`.
    pub shrink_near_boundary: bool,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            richardson: true,
            shrink_near_boundary: false,
        }
    }
}

impl FdConfig {
    pub fn with_step(step: f64) -> Self {
        Self {
            step,
            ..Self::default()
        }
    }

    pub fn shrinking(mut self) -> Self {
        self.shrink_near_boundary = true;
        self
    }
}

fn stencil_fits(p: &Point, axis: usize, h: f64) -> bool {
    [-2.0, 2.0]
        .iter()
        .all(|k| p.offset(axis, k * h).is_inside(DOMAIN_GUARD))
}

/// Step used along `axis` at `p`.
pub fn axis_step(cfg: &FdConfig, p: &Point, axis: usize) -> Result<f64> {
    let b = p.manifold().boundary_function(p.coords());
    let mut h = cfg.step * p.coords()[axis].abs().max(1.0) * b.min(1.0);
    if stencil_fits(p, axis, h) {
        return Ok(h);
    }
    if cfg.shrink_near_boundary {
        for _ in 0..200 {
            h *= 0.5;
            if stencil_fits(p, axis, h) {
                return Ok(h);
            }
        }
    }
    Err(GeomError::StencilExitsDomain {
        manifold: p.manifold(),
        axis,
    })
}

/// `8 (f(+h) - f(-h)) - (f(+2h) - f(-2h))`, i.e. `12 h f'` up to `O(h^5)`.
/// Differences are formed before weighting so constants cancel exactly.
fn central4(fm2: &[f64], fm1: &[f64], fp1: &[f64], fp2: &[f64]) -> Vec<f64> {
    (0..fm2.len())
        .map(|k| 8.0 * (fp1[k] - fm1[k]) - (fp2[k] - fm2[k]))
        .collect()
}

fn scaled(v: Vec<f64>, k: f64) -> Vec<f64> {
    v.into_iter().map(|x| x / k).collect()
}

fn richardson(cfg: &FdConfig, coarse: Vec<f64>, fine: impl FnOnce() -> Result<Vec<f64>>) -> Result<Vec<f64>> {
    if !cfg.richardson {
        return Ok(coarse);
    }
    let fine = fine()?;
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (16.0 * f - c) / 15.0)
        .collect())
}

fn d1_raw<F>(f: &F, p: &Point, axis: usize, h: f64) -> Result<Vec<f64>>
where
    F: Fn(&Point) -> Result<Vec<f64>>,
{
    let at = |k: f64| f(&p.offset(axis, k * h));
    let d = central4(&at(-2.0)?, &at(-1.0)?, &at(1.0)?, &at(2.0)?);
    Ok(scaled(d, 12.0 * h))
}

/// First partial derivative `d/dx^axis` of a vector-valued function.
pub fn derivative<F>(f: &F, p: &Point, axis: usize, cfg: &FdConfig) -> Result<Vec<f64>>
where
    F: Fn(&Point) -> Result<Vec<f64>>,
{
    let h = axis_step(cfg, p, axis)?;
    let coarse = d1_raw(f, p, axis, h)?;
    richardson(cfg, coarse, || d1_raw(f, p, axis, h / 2.0))
}

/// All first partials; entry `k` is `d f / d x^k`.
pub fn gradient<F>(f: &F, p: &Point, cfg: &FdConfig) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&Point) -> Result<Vec<f64>>,
{
    (0..p.dim()).map(|k| derivative(f, p, k, cfg)).collect()
}

fn d2_raw<F>(f: &F, p: &Point, i: usize, j: usize, hi: f64, hj: f64) -> Result<Vec<f64>>
where
    F: Fn(&Point) -> Result<Vec<f64>>,
{
    if i == j {
        // (-f(+2h) + 16 f(+h) - 30 f(0) + 16 f(-h) - f(-2h)) / (12 h^2)
        let at = |k: f64| f(&p.offset(i, k * hi));
        let (m2, m1, c, p1, p2) = (at(-2.0)?, at(-1.0)?, f(p)?, at(1.0)?, at(2.0)?);
        let d = (0..c.len())
            .map(|k| 16.0 * ((p1[k] - c[k]) + (m1[k] - c[k])) - ((p2[k] - c[k]) + (m2[k] - c[k])))
            .collect();
        return Ok(scaled(d, 12.0 * hi * hi));
    }
    // the 1-D stencil along j applied to the 1-D stencil along i
    let row = |kj: f64| d1_raw(f, &p.offset(j, kj * hj), i, hi);
    let d = central4(&row(-2.0)?, &row(-1.0)?, &row(1.0)?, &row(2.0)?);
    Ok(scaled(d, 12.0 * hj))
}

/// Second partial `d^2 f / dx^i dx^j`.
pub fn second_derivative<F>(f: &F, p: &Point, i: usize, j: usize, cfg: &FdConfig) -> Result<Vec<f64>>
where
    F: Fn(&Point) -> Result<Vec<f64>>,
{
    let hi = axis_step(cfg, p, i)?;
    let hj = axis_step(cfg, p, j)?;
    let coarse = d2_raw(f, p, i, j, hi, hj)?;
    richardson(cfg, coarse, || d2_raw(f, p, i, j, hi / 2.0, hj / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Manifold;

    fn poly(p: &Point) -> Result<Vec<f64>> {
        let c = p.coords();
        Ok(vec![c[0].powi(3) * c[1], (c[2] * c[0]).sin(), c[3].ln()])
    }

    #[test]
    fn first_derivatives_match_analytic() {
        let p = Point::cone(0.7, -1.2, 0.4, 1.3).unwrap();
        let cfg = FdConfig::default();
        let g = gradient(&poly, &p, &cfg).unwrap();
        let (x, y, t, r) = (0.7f64, -1.2f64, 0.4f64, 1.3f64);
        assert!((g[0][0] - 3.0 * x * x * y).abs() < 1e-11);
        assert!((g[1][0] - x.powi(3)).abs() < 1e-11);
        assert!((g[0][1] - t * (t * x).cos()).abs() < 1e-11);
        assert!((g[3][2] - 1.0 / r).abs() < 1e-11);
    }

    #[test]
    fn second_derivatives_match_analytic() {
        let p = Point::cone(0.7, -1.2, 0.4, 1.3).unwrap();
        let cfg = FdConfig::default();
        let (x, t, r) = (0.7f64, 0.4f64, 1.3f64);
        let dxx = second_derivative(&poly, &p, 0, 0, &cfg).unwrap();
        assert!((dxx[0] - 6.0 * x * -1.2).abs() < 1e-8);
        let dxy = second_derivative(&poly, &p, 0, 1, &cfg).unwrap();
        assert!((dxy[0] - 3.0 * x * x).abs() < 1e-8);
        let dxt = second_derivative(&poly, &p, 0, 2, &cfg).unwrap();
        let expect = (t * x).cos() - t * x * (t * x).sin();
        assert!((dxt[1] - expect).abs() < 1e-8);
        let drr = second_derivative(&poly, &p, 3, 3, &cfg).unwrap();
        assert!((drr[2] + 1.0 / (r * r)).abs() < 1e-8);
    }

    #[test]
    fn step_scales_with_distance_to_boundary() {
        let p = Point::new(Manifold::Cone, &[4.0, 0.0, 0.0, 1e-3]).unwrap();
        let cfg = FdConfig::default();
        assert!((axis_step(&cfg, &p, 3).unwrap() - 1e-6).abs() < 1e-20);
        assert!((axis_step(&cfg, &p, 0).unwrap() - 4e-6).abs() < 1e-20);
        let far = Point::new(Manifold::Cone, &[4.0, 0.0, 0.0, 7.0]).unwrap();
        assert_eq!(axis_step(&cfg, &far, 0).unwrap(), 4e-3);
    }

    #[test]
    fn stencil_exit_is_reported_or_shrunk() {
        // a coarse step overshoots r = 0 unless shrinking is enabled
        let p = Point::new(Manifold::Cone, &[0.0, 0.0, 0.0, 0.5]).unwrap();
        let cfg = FdConfig::with_step(0.6);
        assert!(matches!(
            axis_step(&cfg, &p, 3),
            Err(GeomError::StencilExitsDomain { axis: 3, .. })
        ));
        let h = axis_step(&cfg.shrinking(), &p, 3).unwrap();
        assert!(h < 0.25 && 0.5 - 2.0 * h > DOMAIN_GUARD);
        // other axes are unaffected
        assert_eq!(axis_step(&cfg, &p, 0).unwrap(), 0.3);
    }

    #[test]
    fn constants_differentiate_to_zero() {
        let one = |_: &Point| Ok(vec![1.0, -3.5]);
        let p = Point::new(Manifold::Cone, &[2.0, -1.0, 3.0, 1e-6]).unwrap();
        for k in 0..4 {
            assert_eq!(derivative(&one, &p, k, &FdConfig::default()).unwrap(), vec![0.0, 0.0]);
            assert_eq!(second_derivative(&one, &p, k, 3, &FdConfig::default()).unwrap(), vec![0.0, 0.0]);
        }
    }

}
