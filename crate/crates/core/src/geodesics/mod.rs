//! Geodesics: numerical integration, closed forms, the two-point problem on
//! the half-plane and shooting.

pub mod bvp;
pub mod closed_form;
pub mod ode;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::christoffel;
use crate::error::{GeomError, Result};
use crate::fd::FdConfig;
use crate::manifold::{Point, Tangent, DOMAIN_GUARD};
use crate::metric::{metric_matrix, norm, MetricId};

pub use ode::{OdeConfig, Termination};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub ode: OdeConfig,
    pub fd: FdConfig,
    /// Integration stops where the boundary function (`r` or `rho`) drops to
    /// this value.
    pub boundary_guard: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            ode: OdeConfig::default(),
            fd: FdConfig::default().shrinking(),
            boundary_guard: DOMAIN_GUARD,
        }
    }
}

/// A point with a unit velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub point: Point,
    pub velocity: Tangent,
}

impl GeodesicState {
    /// Checks `|velocity|_m = 1` within `1e-9`.
    pub fn new(m: &MetricId, velocity: Tangent) -> Result<Self> {
        let n = norm(m, &velocity)?;
        if (n - 1.0).abs() > 1e-9 {
            return Err(GeomError::InvalidParameters(format!("velocity has norm {n}, expected 1")));
        }
        Ok(Self {
            point: *velocity.base(),
            velocity,
        })
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalized(m: &MetricId, direction: Tangent) -> Result<Self> {
        let n = norm(m, &direction)?;
        if !(n > 0.0) {
            return Err(GeomError::InvalidParameters("zero initial velocity".into()));
        }
        Ok(Self {
            point: *direction.base(),
            velocity: direction.scale(1.0 / n),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub point: Point,
    pub velocity: Tangent,
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub metric: MetricId,
    pub samples: Vec<CurveSample>,
    pub termination: Termination,
    solution: Option<ode::OdeSolution>,
}

impl Curve {
    /// Builds a curve from samples; `s` must be strictly increasing.
    pub fn from_samples(metric: MetricId, samples: Vec<CurveSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(GeomError::InvalidParameters("empty curve".into()));
        }
        if samples.windows(2).any(|w| !(w[1].s > w[0].s)) {
            return Err(GeomError::InvalidParameters("curve parameter must increase".into()));
        }
        Ok(Self {
            metric,
            samples,
            termination: Termination::Completed,
            solution: None,
        })
    }

    pub fn start(&self) -> &CurveSample {
        &self.samples[0]
    }

    pub fn end(&self) -> &CurveSample {
        self.samples.last().unwrap()
    }

    pub fn span(&self) -> f64 {
        self.end().s - self.start().s
    }

    /// Dense-output sample at parameter `s` (integrated curves only).
    pub fn sample_at(&self, s: f64) -> Result<CurveSample> {
        let sol = self
            .solution
            .as_ref()
            .ok_or_else(|| GeomError::InvalidParameters("curve has no dense output".into()))?;
        let (y, _) = sol
            .interpolate(s)
            .ok_or_else(|| GeomError::InvalidParameters(format!("s = {s} outside the curve")))?;
        let m = self.start().point.manifold();
        let n = m.dim();
        let point = Point::on_closure(m, &y[..n])?;
        Ok(CurveSample {
            s,
            point,
            velocity: Tangent::new(point, &y[n..])?,
        })
    }
}

/// `sum |velocity| ds` by the trapezoid rule over the samples.
pub fn arc_length(c: &Curve) -> f64 {
    let speeds: Vec<f64> = c
        .samples
        .iter()
        .map(|smp| norm(&c.metric, &smp.velocity).unwrap_or(f64::NAN))
        .collect();
    c.samples
        .windows(2)
        .zip(speeds.windows(2))
        .map(|(w, v)| 0.5 * (v[0] + v[1]) * (w[1].s - w[0].s))
        .sum()
}

/// `x'' = -Gamma(x)(x', x')` as a first-order system in `(x, x')`.
fn geodesic_rhs<'a>(m: &'a MetricId, manifold: crate::manifold::Manifold, fd: &'a FdConfig) -> impl Fn(f64, &[f64]) -> Result<Vec<f64>> + 'a {
    move |_, y| {
        let n = manifold.dim();
        let p = Point::new(manifold, &y[..n])?;
        let v = &y[n..];
        let gamma = christoffel(m, &p, fd)?;
        let acc = gamma.contract(v, v);
        let mut out = Vec::with_capacity(2 * n);
        out.extend_from_slice(v);
        out.extend(acc.iter().map(|a| -a));
        Ok(out)
    }
}

/// Integrates the geodesic equation for parameter span `span` without
/// normalising the initial velocity.
pub fn integrate_affine(m: &MetricId, v0: &Tangent, span: f64, cfg: &IntegratorConfig) -> Result<Curve> {
    let p0 = *v0.base();
    p0.expect(m.manifold(), &m.name())?;
    if !p0.is_inside(cfg.boundary_guard.max(DOMAIN_GUARD)) {
        return Err(GeomError::OutsideDomain {
            manifold: p0.manifold(),
            coords: p0.coords().to_vec(),
            guard: cfg.boundary_guard,
        });
    }
    let manifold = p0.manifold();
    let n = manifold.dim();
    let mut y0 = p0.coords().to_vec();
    y0.extend_from_slice(v0.components());
    let rhs = geodesic_rhs(m, manifold, &cfg.fd);
    let guard = cfg.boundary_guard;
    let event = move |y: &[f64]| manifold.boundary_function(&y[..n]) - guard;
    let sol = ode::dopri5(&rhs, 0.0, &y0, span, &cfg.ode, Some(&event))?;
    let mut samples = Vec::with_capacity(sol.ts.len());
    for (s, y) in sol.ts.iter().zip(&sol.ys) {
        let point = Point::on_closure(manifold, &y[..n])?;
        samples.push(CurveSample {
            s: *s,
            point,
            velocity: Tangent::new(point, &y[n..])?,
        });
    }
    Ok(Curve {
        metric: *m,
        samples,
        termination: sol.termination,
        solution: Some(sol),
    })
}

/// Unit-speed geodesic of length `length` (shorter if it reaches the guard).
pub fn integrate_geodesic(m: &MetricId, init: &GeodesicState, length: f64, cfg: &IntegratorConfig) -> Result<Curve> {
    if !(length > 0.0) {
        return Err(GeomError::InvalidParameters(format!("length must be positive, got {length}")));
    }
    let n = norm(m, &init.velocity)?;
    if (n - 1.0).abs() > 1e-9 {
        return Err(GeomError::InvalidParameters(format!("initial velocity has norm {n}")));
    }
    integrate_affine(m, &init.velocity, length, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootConfig {
    /// Coordinate residual accepted as a hit.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of initial guesses: the coordinate difference, then seeded
    /// random perturbations of it.
    pub starts: usize,
    pub seed: u64,
    pub integrator: IntegratorConfig,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 40,
            starts: 6,
            seed: 0,
            integrator: IntegratorConfig {
                ode: OdeConfig {
                    abs_tol: 1e-12,
                    rel_tol: 1e-12,
                    ..OdeConfig::default()
                },
                ..IntegratorConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootResult {
    /// Unit initial velocity.
    pub state: GeodesicState,
    /// Initial velocity for affine parameter 1; its norm is the length.
    pub velocity: Tangent,
    pub length: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn endpoint_residual(m: &MetricId, p0: &Point, v: &[f64], target: &[f64], cfg: &IntegratorConfig) -> DVector<f64> {
    let n = target.len();
    let bad = DVector::from_element(n, f64::INFINITY);
    let Ok(t) = Tangent::new(*p0, v) else { return bad };
    match integrate_affine(m, &t, 1.0, cfg) {
        Ok(c) if c.termination == Termination::Completed => {
            let e = c.end().point;
            DVector::from_iterator(n, e.coords().iter().zip(target).map(|(a, b)| a - b))
        }
        _ => bad,
    }
}

const STALL_WINDOW: usize = 8;

fn newton(
    m: &MetricId,
    p0: &Point,
    target: &[f64],
    start: DVector<f64>,
    cfg: &ShootConfig,
) -> std::result::Result<(DVector<f64>, f64, usize), f64> {
    let n = target.len();
    let mut v = start;
    let mut f = endpoint_residual(m, p0, v.as_slice(), target, &cfg.integrator);
    let mut fn_ = f.norm();
    if !fn_.is_finite() {
        return Err(f64::INFINITY);
    }
    let mut history = vec![fn_];
    for it in 0..cfg.max_iter {
        if fn_ < cfg.tol {
            return Ok((v, fn_, it));
        }
        // Newton near a root gains orders of magnitude per step; a residual
        // that has not halved over the last STALL_WINDOW steps is not nearing one
        if it >= STALL_WINDOW && fn_ > 0.5 * history[it - STALL_WINDOW] {
            return Err(fn_);
        }
        let mut jac = DMatrix::zeros(n, n);
        for k in 0..n {
            let d = 1e-6 * v[k].abs().max(1.0);
            let mut vp = v.clone();
            let mut vm = v.clone();
            vp[k] += d;
            vm[k] -= d;
            let fp = endpoint_residual(m, p0, vp.as_slice(), target, &cfg.integrator);
            let fm = endpoint_residual(m, p0, vm.as_slice(), target, &cfg.integrator);
            if !(fp.norm().is_finite() && fm.norm().is_finite()) {
                return Err(fn_);
            }
            jac.set_column(k, &((fp - fm) / (2.0 * d)));
        }
        let Some(step) = jac.lu().solve(&(-&f)) else { return Err(fn_) };
        let mut lambda = 1.0;
        loop {
            let cand = &v + &step * lambda;
            let fc = endpoint_residual(m, p0, cand.as_slice(), target, &cfg.integrator);
            let fcn = fc.norm();
            if fcn.is_finite() && fcn < fn_ {
                v = cand;
                f = fc;
                fn_ = fcn;
                history.push(fn_);
                break;
            }
            lambda *= 0.5;
            if lambda < 1.0 / 1024.0 {
                return Err(fn_);
            }
        }
    }
    if fn_ < cfg.tol {
        Ok((v, fn_, cfg.max_iter))
    } else {
        Err(fn_)
    }
}

fn to_result(m: &MetricId, p0: &Point, v: DVector<f64>, residual: f64, iterations: usize) -> Result<ShootResult> {
    let velocity = Tangent::from_vector(*p0, &v)?;
    let length = norm(m, &velocity)?;
    Ok(ShootResult {
        state: GeodesicState::normalized(m, velocity)?,
        velocity,
        length,
        residual,
        iterations,
    })
}

/// The coordinate difference, then seeded perturbations of it that are
/// isotropic for the metric at `p0` and as long as the difference itself.
/// Isotropy matters for `g_L` with large `L`: a coordinate-isotropic kick
/// would be mostly vertical and spiral at a rate growing with `L`.
fn starts(m: &MetricId, p0: &Point, p1: &Point, cfg: &ShootConfig) -> Vec<DVector<f64>> {
    let delta = p1.vector() - p0.vector();
    let n = delta.len();
    let g = metric_matrix(m, p0).ok().and_then(|g| g.cholesky());
    let len = g
        .as_ref()
        .map(|c| (c.l().transpose() * &delta).norm())
        .unwrap_or_else(|| delta.norm())
        .max(1e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = vec![delta.clone()];
    for _ in 1..cfg.starts {
        let xi: DVector<f64> = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let xi = &xi * (len / xi.norm().max(1e-12));
        // g = L L^T, so v = L^-T xi has g-length |xi|
        let pert = match &g {
            Some(c) => c.l().transpose().solve_upper_triangular(&xi).unwrap_or(xi),
            None => xi,
        };
        out.push(&delta + pert);
    }
    out
}

fn check_endpoints(m: &MetricId, p0: &Point, p1: &Point) -> Result<()> {
    p0.expect(m.manifold(), &m.name())?;
    p1.expect(m.manifold(), &m.name())?;
    if p0 == p1 {
        return Err(GeomError::InvalidParameters("shooting needs distinct endpoints".into()));
    }
    Ok(())
}

/// Damped Newton on the endpoint map `v -> exp_p0(v)`, trying the seeded
/// starts in order and returning the first hit.
pub fn shoot_bvp(m: &MetricId, p0: &Point, p1: &Point, cfg: &ShootConfig) -> Result<ShootResult> {
    check_endpoints(m, p0, p1)?;
    let mut best = f64::INFINITY;
    let mut iterations = 0;
    for s in starts(m, p0, p1, cfg) {
        match newton(m, p0, p1.coords(), s, cfg) {
            Ok((v, res, it)) => return to_result(m, p0, v, res, it),
            Err(r) => best = best.min(r),
        }
        iterations += cfg.max_iter;
    }
    Err(GeomError::NoConvergence {
        iterations,
        best_residual: best,
    })
}

/// Every distinct geodesic found from all starts, shortest first.
pub fn shoot_bvp_all(m: &MetricId, p0: &Point, p1: &Point, cfg: &ShootConfig) -> Result<Vec<ShootResult>> {
    check_endpoints(m, p0, p1)?;
    let mut found: Vec<ShootResult> = Vec::new();
    let mut best = f64::INFINITY;
    for s in starts(m, p0, p1, cfg) {
        match newton(m, p0, p1.coords(), s, cfg) {
            Ok((v, res, it)) => {
                let r = to_result(m, p0, v, res, it)?;
                let dup = found
                    .iter()
                    .any(|f| (f.velocity.vector() - r.velocity.vector()).norm() < 1e-6);
                if !dup {
                    found.push(r);
                }
            }
            Err(r) => best = best.min(r),
        }
    }
    if found.is_empty() {
        return Err(GeomError::NoConvergence {
            iterations: cfg.max_iter * cfg.starts,
            best_residual: best,
        });
    }
    found.sort_by(|a, b| a.length.total_cmp(&b.length));
    Ok(found)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcEntry {
    pub l: f64,
    /// Shortest `g_L` geodesic found, or the shooting error.
    pub distance: std::result::Result<f64, GeomError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcReport {
    pub entries: Vec<CcEntry>,
    /// Distance at the largest `L` that succeeded.
    pub estimate: Option<f64>,
    /// Whether the successful distances are non-decreasing in `L`.
    pub monotone: bool,
}

/// `g_L` distances for increasing `L`, each the shortest geodesic found by
/// multi-start shooting. No claim of convergence to the CC distance is made.
pub fn cc_distance_estimate(p0: &Point, p1: &Point, l_list: &[f64], cfg: &ShootConfig) -> Result<CcReport> {
    if l_list.iter().any(|l| !(*l > 0.0)) || l_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(GeomError::InvalidParameters("L values must be positive and increasing".into()));
    }
    let entries: Vec<CcEntry> = l_list
        .iter()
        .map(|&l| {
            let distance = if p0 == p1 {
                p0.expect(crate::manifold::Manifold::Heisenberg, "cc distance").map(|_| 0.0)
            } else {
                shoot_bvp_all(&MetricId::Approximant { l }, p0, p1, cfg).map(|v| v[0].length)
            };
            CcEntry { l, distance }
        })
        .collect();
    let ok: Vec<f64> = entries.iter().filter_map(|e| e.distance.as_ref().ok().copied()).collect();
    let monotone = ok.windows(2).all(|w| w[1] >= w[0] - 1e-9);
    Ok(CcReport {
        estimate: ok.last().copied(),
        entries,
        monotone,
    })
}

/// Uniformly distributed unit vector for `m` at `p`, from a seeded generator.
pub fn random_unit_vector<R: Rng>(m: &MetricId, p: &Point, rng: &mut R) -> Result<GeodesicState> {
    loop {
        let c: Vec<f64> = (0..p.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n2: f64 = c.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return GeodesicState::normalized(m, Tangent::new(*p, &c)?);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{eval_frame, FrameId};

    #[test]
    fn radial_line_on_the_cone() {
        let p = Point::cone(0.3, -0.2, 1.0, 1.0).unwrap();
        let init = GeodesicState::new(&MetricId::Cone, Tangent::coordinate(p, 3)).unwrap();
        let c = integrate_geodesic(&MetricId::Cone, &init, 2.0, &IntegratorConfig::default()).unwrap();
        let e = c.end().point;
        assert_eq!(c.termination, Termination::Completed);
        for (a, b) in e.coords().iter().zip([0.3, -0.2, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((arc_length(&c) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn horizontal_line_in_heisenberg() {
        let o = Point::heisenberg(0.0, 0.0, 0.0);
        let init = GeodesicState::new(&MetricId::Sasaki, eval_frame(FrameId::X, &o).unwrap()).unwrap();
        let c = integrate_geodesic(&MetricId::Sasaki, &init, 1.0, &IntegratorConfig::default()).unwrap();
        let e = c.end().point;
        assert!((e.coords()[0] - 1.0).abs() < 1e-10);
        assert!(e.coords()[1].abs() < 1e-10 && e.coords()[2].abs() < 1e-10);
    }

    #[test]
    fn inward_radial_geodesic_stops_at_guard() {
        let p = Point::cone(0.0, 0.0, 0.0, 1.0).unwrap();
        let init = GeodesicState::new(&MetricId::Cone, Tangent::coordinate(p, 3).scale(-1.0)).unwrap();
        let cfg = IntegratorConfig {
            boundary_guard: 1e-6,
            ..IntegratorConfig::default()
        };
        let c = integrate_geodesic(&MetricId::Cone, &init, 5.0, &cfg).unwrap();
        assert_eq!(c.termination, Termination::HitDomainBoundary);
        assert!((arc_length(&c) - (1.0 - 1e-6)).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_unit_velocity() {
        let o = Point::heisenberg(0.0, 0.0, 0.0);
        let v = Tangent::new(o, &[2.0, 0.0, 0.0]).unwrap();
        assert!(GeodesicState::new(&MetricId::Sasaki, v).is_err());
        assert!(GeodesicState::normalized(&MetricId::Sasaki, v).is_ok());
    }

    #[test]
    fn shooting_a_horizontal_line() {
        let o = Point::heisenberg(0.0, 0.0, 0.0);
        let p1 = Point::heisenberg(1.0, 0.0, 0.0);
        let r = shoot_bvp(&MetricId::Sasaki, &o, &p1, &ShootConfig::default()).unwrap();
        assert!((r.state.velocity.vector() - eval_frame(FrameId::X, &o).unwrap().vector()).norm() < 1e-9);
        assert!((r.length - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cc_sequence() {
        let o = Point::heisenberg(0.0, 0.0, 0.0);
        let cfg = ShootConfig {
            starts: 2,
            ..ShootConfig::default()
        };
        let same = cc_distance_estimate(&o, &o, &[1.0, 4.0], &cfg).unwrap();
        assert_eq!(same.estimate, Some(0.0));
        let up = Point::heisenberg(0.0, 0.0, 1.0);
        let rep = cc_distance_estimate(&up, &o, &[0.25, 1.0, 4.0], &cfg).unwrap();
        assert!(rep.monotone, "{rep:?}");
        assert!(cc_distance_estimate(&o, &up, &[1.0, 0.5], &cfg).is_err());
    }
}
