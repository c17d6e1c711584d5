//! The verification battery: named residual checks over seeded samples.
//!
//! Every check reports the largest residual it saw and passes iff that is
//! at most its tolerance. Checks that assert a quantity is *large* report
//! `max(0, threshold - observed)` with tolerance 0. Each check draws from its
//! own stream (seed mixed with the check name), so results do not depend on
//! which other checks run or in what order.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::curvature::{second_fundamental_form, CurvatureTensor};
use crate::error::{GeomError, Result};
use crate::fd::FdConfig;
use crate::geodesics::bvp::{affine_velocity_u, bvp_solve_u, shoot_u, BvpOutcome};
use crate::geodesics::closed_form::{
    closed_form_cone, closed_form_heis, ConeGeodesicParams, ConeKind, HeisGeodesicParams, HeisKind,
};
use crate::geodesics::{
    cc_distance_estimate, integrate_geodesic, Curve, GeodesicState, IntegratorConfig, OdeConfig, ShootConfig,
    Termination,
};
use crate::manifold::{eval_frame, omega_of, FrameId, Manifold, Point, Tangent, DOMAIN_GUARD};
use crate::maps::{holomorphy_residual, isometry_residual, pcr_kahler_residual, DistributionId, MapId};
use crate::metric::{norm, rho, AbProfile, MetricId};
use crate::sampling::Sampler;
use crate::structures::{
    contact_metric_residual, contact_scan_grid, exterior_derivative, hermitian_residual, killing_residual, nijenhuis,
    sasaki_residual_with, ComplexStructureId, DifferentialForm,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub fd_step: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub domain_guard: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            fd_step: 1e-3,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            samples: 100,
            seed: 0,
            domain_guard: DOMAIN_GUARD,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("fd-step", self.fd_step),
            ("abs-tol", self.abs_tol),
            ("rel-tol", self.rel_tol),
            ("domain-guard", self.domain_guard),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GeomError::InvalidParameters(format!("{name} must be positive, got {v}")));
            }
        }
        if self.samples == 0 {
            return Err(GeomError::InvalidParameters("sample count must be positive".into()));
        }
        Ok(())
    }

    pub fn fd(&self) -> FdConfig {
        FdConfig::with_step(self.fd_step)
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            ode: OdeConfig {
                abs_tol: self.abs_tol,
                rel_tol: self.rel_tol,
                ..OdeConfig::default()
            },
            fd: self.fd().shrinking(),
            boundary_guard: self.domain_guard,
        }
    }

    /// Shooting integrates two orders tighter than plain integration so the
    /// recovered velocities are accurate well below the endpoint tolerance.
    pub fn shoot(&self) -> ShootConfig {
        let mut integrator = self.integrator();
        integrator.ode.abs_tol = self.abs_tol * 1e-2;
        integrator.ode.rel_tol = self.rel_tol * 1e-2;
        ShootConfig {
            seed: self.seed,
            integrator,
            ..ShootConfig::default()
        }
    }
}

impl RunConfig {
    /// Shooting for CC estimates starts from the coordinate difference only:
    /// random restarts under `g_L` with large `L` launch rapidly spiralling
    /// geodesics that cost orders of magnitude more to integrate.
    pub fn cc_shoot(&self) -> ShootConfig {
        ShootConfig {
            starts: 1,
            ..self.shoot()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub check: String,
    pub target: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Why the check could not be evaluated, if it failed with an error.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub config: RunConfig,
    /// Sorted by check name.
    pub entries: Vec<CheckEntry>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

type CheckFn = fn(&RunConfig, &mut Sampler) -> Result<Worst>;

pub struct CheckSpec {
    pub name: &'static str,
    pub target: &'static str,
    pub tolerance: f64,
    /// Acceptance criterion this check belongs to, if any.
    pub criterion: Option<u8>,
    run: CheckFn,
}

/// Largest residual over the samples seen so far; NaN counts as infinite.
#[derive(Debug, Clone, Copy, Default)]
pub struct Worst {
    n: usize,
    max: f64,
}

impl Worst {
    fn push(&mut self, r: f64) {
        self.n += 1;
        self.max = if r.is_nan() { f64::INFINITY } else { self.max.max(r) };
    }

    /// A lower-bound check: record how far `observed` falls short of `threshold`.
    fn push_at_least(&mut self, observed: f64, threshold: f64) {
        self.push((threshold - observed).max(0.0));
    }
}

fn frames<const N: usize>(p: &Point, ids: [FrameId; N]) -> Result<[Tangent; N]> {
    let mut out = [Tangent::zero(*p); N];
    for (o, f) in out.iter_mut().zip(ids) {
        *o = eval_frame(f, p)?;
    }
    Ok(out)
}

fn coord_diff(a: &Point, b: &Point) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

// ---- curvature ----

fn curvature_heisenberg(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.heisenberg();
        let k = CurvatureTensor::at(&MetricId::Sasaki, &p, &cfg.fd())?;
        let [x, y, t] = frames(&p, [FrameId::X, FrameId::Y, FrameId::TTilde])?;
        let r = (k.sectional(&x, &y)? + 3.0)
            .abs()
            .max((k.sectional(&x, &t)? - 1.0).abs())
            .max((k.sectional(&y, &t)? - 1.0).abs());
        w.push(r);
    }
    Ok(w)
}

fn curvature_cone(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        let r = p.r().unwrap();
        let k = CurvatureTensor::at(&MetricId::Cone, &p, &cfg.fd())?;
        let f = frames(&p, [FrameId::Xr, FrameId::Yr, FrameId::Tr, FrameId::Dr])?;
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                let kij = k.sectional(&f[i], &f[j])?;
                let res = if (i, j) == (0, 1) { (kij * r * r + 4.0).abs() } else { kij.abs() };
                worst = worst.max(res);
            }
        }
        w.push(worst);
    }
    Ok(w)
}

fn curvature_prime_holomorphic(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        let k = CurvatureTensor::at(&MetricId::Prime, &p, &cfg.fd())?;
        let [x, y, t, r] = frames(&p, [FrameId::XPrime, FrameId::YPrime, FrameId::TPrime, FrameId::RPrime])?;
        w.push((k.sectional(&x, &y)? + 1.0).abs().max((k.sectional(&t, &r)? + 1.0).abs()));
    }
    Ok(w)
}

const PLANES_PER_POINT: usize = 5;

fn curvature_prime_pinching(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        let k = CurvatureTensor::at(&MetricId::Prime, &p, &cfg.fd())?;
        for _ in 0..PLANES_PER_POINT {
            let (u, v) = (s.tangent(&p), s.tangent(&p));
            let kk = k.sectional(&u, &v)?;
            w.push((-1.0 - kk).max(kk + 0.25).max(0.0));
        }
    }
    Ok(w)
}

/// `R^a_{bcd}` antisymmetry in `(c, d)`, first Bianchi identity and pair
/// symmetry of the lowered tensor, relative to the largest component.
fn symmetry_residual(k: &CurvatureTensor) -> f64 {
    let n = k.dim();
    let g = k.metric_matrix();
    let low = |a: usize, b: usize, c: usize, d: usize| (0..n).map(|e| g[(a, e)] * k.component(e, b, c, d)).sum::<f64>();
    let mut scale: f64 = 1.0;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let r = k.component(a, b, c, d);
                    scale = scale.max(r.abs());
                    worst = worst.max((r + k.component(a, b, d, c)).abs());
                    worst = worst.max((r + k.component(a, c, d, b) + k.component(a, d, b, c)).abs());
                    worst = worst.max((low(a, b, c, d) - low(c, d, a, b)).abs());
                }
            }
        }
    }
    worst / scale
}

fn curvature_symmetries(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        for m in [MetricId::Cone, MetricId::Prime] {
            w.push(symmetry_residual(&CurvatureTensor::at(&m, &p, &cfg.fd())?));
        }
        let q = s.heisenberg();
        w.push(symmetry_residual(&CurvatureTensor::at(&MetricId::Sasaki, &q, &cfg.fd())?));
    }
    Ok(w)
}

/// For `a = C sqrt(r)/2`, `b = C r`: `K(X',Y') = K(T',R') = -C^2` and
/// `K(X',T') = K(X',R') = -C^2/4`.
fn curvature_kahler_family(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    let cs = [0.5, 1.0, 1.5, 2.0, 3.0];
    for i in 0..cfg.samples {
        let c = cs[i % cs.len()];
        let m = MetricId::Ab(AbProfile::kahler(c)?);
        let p = s.cone();
        let k = CurvatureTensor::at(&m, &p, &cfg.fd())?;
        // sectional curvature is scale invariant, so the unscaled lifts do
        let [x, y, t] = frames(&p, [FrameId::X, FrameId::Y, FrameId::T])?;
        let dr = Tangent::coordinate(p, 3);
        let res = [
            (k.sectional(&x, &y)?, -c * c),
            (k.sectional(&t, &dr)?, -c * c),
            (k.sectional(&x, &t)?, -c * c / 4.0),
            (k.sectional(&y, &t)?, -c * c / 4.0),
            (k.sectional(&x, &dr)?, -c * c / 4.0),
        ]
        .iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
        w.push(res);
    }
    Ok(w)
}

fn curvature_complex_plane(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.point(Manifold::ComplexPlane);
        let (x, y) = (p.coords()[0], p.coords()[1]);
        let q = 1.0 + x * x + y * y;
        let k = crate::curvature::sectional(
            &MetricId::SubComplexPlane,
            &p,
            &Tangent::coordinate(p, 0),
            &Tangent::coordinate(p, 1),
            &cfg.fd(),
        )?;
        w.push((k + (3.0 + 2.0 * x * x + 2.0 * y * y) / (q * q)).abs());
    }
    Ok(w)
}

fn curvature_half_space(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.point(Manifold::HalfSpace);
        let (x, y, r) = (p.coords()[0], p.coords()[1], p.coords()[2]);
        let q = 1.0 + x * x + y * y;
        let k = crate::curvature::sectional(
            &MetricId::SubHalfSpace,
            &p,
            &Tangent::coordinate(p, 0),
            &Tangent::coordinate(p, 1),
            &cfg.fd(),
        )?;
        let expected = -(1.0 + q).powi(2) / (r * r * q * q);
        w.push((k - expected).abs());
    }
    Ok(w)
}

fn sff_half_plane(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.point(Manifold::HalfPlane);
        let (u, v) = (s.tangent(&p), s.tangent(&p));
        w.push(second_fundamental_form(&MapId::IotaU, &p, &u, &v, &cfg.fd())?.coord_norm());
    }
    Ok(w)
}

// ---- structures ----

const PAIRS_PER_POINT: usize = 10;

fn sasaki_identity(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.heisenberg();
        let k = CurvatureTensor::at(&MetricId::Sasaki, &p, &cfg.fd())?;
        for _ in 0..PAIRS_PER_POINT {
            let (u, v) = (s.tangent(&p), s.tangent(&p));
            w.push(sasaki_residual_with(&k, &u, &v)?);
        }
    }
    Ok(w)
}

fn sasaki_killing(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.heisenberg();
        for _ in 0..PAIRS_PER_POINT {
            let (u, v) = (s.tangent(&p), s.tangent(&p));
            w.push(killing_residual(&MetricId::Sasaki, FrameId::TTilde, &u, &v, &cfg.fd())?);
        }
    }
    Ok(w)
}

/// `X` is not Killing: the largest residual over the samples exceeds 0.1.
fn killing_x_fails(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut seen: f64 = 0.0;
    let mut n = 0;
    for _ in 0..cfg.samples {
        let p = s.heisenberg();
        let (u, v) = (s.tangent(&p), s.tangent(&p));
        seen = seen.max(killing_residual(&MetricId::Sasaki, FrameId::X, &u, &v, &cfg.fd())?);
        n += 1;
    }
    let mut w = Worst::default();
    w.push_at_least(seen, 0.1);
    w.n = n;
    Ok(w)
}

fn contact_quarter(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let pts: Vec<Point> = (0..cfg.samples).map(|_| s.heisenberg()).collect();
    let mut w = Worst::default();
    w.push(contact_metric_residual(0.25, &pts)?);
    w.n = pts.len();
    Ok(w)
}

fn contact_uniqueness(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let pts: Vec<Point> = (0..cfg.samples).map(|_| s.heisenberg()).collect();
    let mut w = Worst::default();
    for l in contact_scan_grid().into_iter().filter(|l| *l != 0.25) {
        w.push_at_least(contact_metric_residual(l, &pts)?, 0.1);
    }
    Ok(w)
}

const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

fn closed_form_check(form: DifferentialForm, cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.point(form.manifold());
        let mut worst: f64 = 0.0;
        for axes in TRIPLES {
            worst = worst.max(exterior_derivative(&form, &p, &axes, &cfg.fd())?.abs());
        }
        w.push(worst);
    }
    Ok(w)
}

fn kahler_closed_cone(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    closed_form_check(DifferentialForm::OmegaR, cfg, s)
}

fn kahler_closed_prime(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    closed_form_check(DifferentialForm::OmegaPrime, cfg, s)
}

fn kahler_closed_bergman(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    closed_form_check(DifferentialForm::OmegaBergman, cfg, s)
}

fn nijenhuis_check(c: ComplexStructureId, cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.point(c.manifold());
        let mut worst: f64 = 0.0;
        for i in 0..p.dim() {
            for j in i + 1..p.dim() {
                worst = worst.max(nijenhuis(c, &p, i, j, &cfg.fd())?.coord_norm());
            }
        }
        w.push(worst);
    }
    Ok(w)
}

fn nijenhuis_i(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    nijenhuis_check(ComplexStructureId::ICone, cfg, s)
}

fn nijenhuis_j(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    nijenhuis_check(ComplexStructureId::JCone, cfg, s)
}

/// Non-Kähler `(a, b)` profiles for the closedness coefficient.
pub fn non_kahler_profiles() -> Vec<AbProfile> {
    [
        (1.0, 0.0, 1.0, 0.0),
        (1.0, 0.0, 1.0, 1.0),
        (0.5, 1.0, 1.0, 0.0),
        (1.0, 0.5, 2.0, 1.0),
        (0.8, -0.5, 1.3, 0.5),
    ]
    .iter()
    .map(|&(ac, ae, bc, be)| AbProfile::power(ac, ae, bc, be).unwrap())
    .collect()
}

/// `d Omega_{a,b}(d_x, d_y, d_r) = 4/b^2 - 2 a'/a^3`, sampled with `r` in
/// `[0.5, 3]` where the coefficients stay of order one.
fn kahler_ab_coefficient(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    let profiles = non_kahler_profiles();
    for i in 0..cfg.samples {
        let ab = profiles[i % profiles.len()];
        let r = s.uniform(0.5, 3.0);
        let p = s.cone_at(r);
        let d = exterior_derivative(&DifferentialForm::OmegaAb(ab), &p, &[0, 1, 3], &cfg.fd())?;
        w.push((d - ab.closedness_coefficient(r)).abs());
    }
    Ok(w)
}

fn kahler_hermitian(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        for (m, c) in [(MetricId::Cone, ComplexStructureId::JCone), (MetricId::Prime, ComplexStructureId::ICone)] {
            let (u, v) = (s.tangent(&p), s.tangent(&p));
            w.push(hermitian_residual(&m, c, &u, &v)?);
        }
        let q = s.siegel();
        let (u, v) = (s.tangent(&q), s.tangent(&q));
        w.push(hermitian_residual(&MetricId::Bergman, ComplexStructureId::JSiegel, &u, &v)?);
    }
    Ok(w)
}

// ---- maps ----

fn horospherical_isometry(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        w.push(isometry_residual(&MapId::Horospherical, &MetricId::Prime, &MetricId::Bergman, &s.cone())?);
    }
    Ok(w)
}

fn horospherical_holomorphy(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        w.push(holomorphy_residual(
            &MapId::Horospherical,
            ComplexStructureId::ICone,
            ComplexStructureId::JSiegel,
            &p,
            None,
        )?);
    }
    Ok(w)
}

fn horospherical_rho(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        let q = MapId::Horospherical.apply(&p)?;
        w.push((rho(&q)? - p.r().unwrap()).abs());
    }
    Ok(w)
}

fn pcr_horizontal(map: MapId, cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        w.push(pcr_kahler_residual(&map, &MetricId::Cone, &MetricId::Prime, DistributionId::HHorizontal, &p)?);
    }
    Ok(w)
}

fn pcr_horizontal_metric(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    pcr_horizontal(MapId::Pcr, cfg, s)
}

fn pcr_horizontal_metric_corrected(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    pcr_horizontal(MapId::PcrKahler, cfg, s)
}

fn pcr_restricted_holomorphy(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.cone();
        w.push(holomorphy_residual(
            &MapId::Pcr,
            ComplexStructureId::JCone,
            ComplexStructureId::ICone,
            &p,
            Some(DistributionId::HHorizontal),
        )?);
    }
    Ok(w)
}

fn pcr_unrestricted(p: &Point) -> Result<f64> {
    holomorphy_residual(&MapId::Pcr, ComplexStructureId::JCone, ComplexStructureId::ICone, p, None)
}

/// Off the horizontal distribution `G` does not intertwine the structures:
/// at `r = 1` the residual exceeds 0.1 everywhere sampled.
fn pcr_unrestricted_gap(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        w.push_at_least(pcr_unrestricted(&s.cone_at(1.0))?, 0.1);
    }
    Ok(w)
}

/// The unrestricted residual at `(0, 0, 0, 1)` is exactly 3: `G_*` sends
/// `d/dt` to `d/dt` but `J d/dt` to `-2 d/dr`, while `I d/dt = d/dr`.
fn pcr_unrestricted_pinned(_: &RunConfig, _: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    w.push((pcr_unrestricted(&Point::cone(0.0, 0.0, 0.0, 1.0)?)? - 3.0).abs());
    Ok(w)
}

fn heisenberg_isometries(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..cfg.samples {
        let p = s.heisenberg();
        let maps = [
            MapId::LeftTranslation {
                a: s.uniform(-3.0, 3.0),
                b: s.uniform(-3.0, 3.0),
                s: s.uniform(-5.0, 5.0),
            },
            MapId::Rotation { theta: s.angle() },
            MapId::Conjugation,
        ];
        for f in maps {
            w.push(isometry_residual(&f, &MetricId::Sasaki, &MetricId::Sasaki, &p)?);
        }
    }
    Ok(w)
}

// ---- geodesics ----

fn draws(cfg: &RunConfig) -> usize {
    cfg.samples.div_ceil(5).max(20)
}

/// Integration nodes no further apart than this, so the sup over nodes
/// samples `[0, 1]` densely.
const NODE_SPACING: f64 = 0.05;

fn dense(cfg: &RunConfig) -> IntegratorConfig {
    let mut c = cfg.integrator();
    c.ode.max_step = Some(NODE_SPACING);
    c
}

fn unit_curve(m: &MetricId, init: &GeodesicState, cfg: &RunConfig) -> Result<Curve> {
    let c = integrate_geodesic(m, init, 1.0, &dense(cfg))?;
    if c.termination != Termination::Completed {
        return Err(GeomError::InvalidParameters("geodesic left the domain before s = 1".into()));
    }
    Ok(c)
}

fn sup_vs<F: Fn(f64) -> Result<Point>>(curve: &Curve, exact: F) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for smp in &curve.samples {
        worst = worst.max(coord_diff(&smp.point, &exact(smp.s)?));
    }
    Ok(worst)
}

fn heis_draw(kind: usize, s: &mut Sampler) -> Result<HeisGeodesicParams> {
    let p0 = s.heisenberg();
    let th = s.angle();
    let k = match kind {
        0 => HeisKind::HorizontalLine { a: th.cos(), b: th.sin() },
        1 => HeisKind::Vertical {
            c: if s.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 },
        },
        _ => {
            let c = s.uniform(-1.0, 1.0);
            HeisKind::General {
                c,
                k: Complex64::from_polar((1.0 - c * c).sqrt(), th),
            }
        }
    };
    HeisGeodesicParams::new(k, p0)
}

/// Smallest radius allowed along a sampled cone geodesic on `[0, 1]`.
const MIN_RADIUS: f64 = 0.1;

fn cone_draw(kind: usize, s: &mut Sampler) -> Result<ConeGeodesicParams> {
    let p0 = s.cone();
    let r0 = p0.r().unwrap();
    if kind == 0 {
        return ConeGeodesicParams::new(ConeKind::RadialLine, p0);
    }
    // r(s)^2 = s^2 + 2 c1 s + r0^2 has its minimum on [0, 1] at min(-c1, 1)
    let c1 = loop {
        let c1 = s.uniform(-r0, r0);
        let sm = (-c1).clamp(0.0, 1.0);
        if sm * sm + 2.0 * c1 * sm + r0 * r0 >= MIN_RADIUS * MIN_RADIUS {
            break c1;
        }
    };
    let k = if kind == 1 {
        ConeKind::VerticalPlane { c1 }
    } else {
        let rest = (r0 * r0 - c1 * c1).sqrt();
        let psi = s.uniform(0.0, PI);
        let c3 = rest * psi.cos();
        let cc = Complex64::from_polar(rest * psi.sin(), s.angle());
        ConeKind::General { c1, c3, cc }
    };
    ConeGeodesicParams::new(k, p0)
}

fn heis_family(kind: usize, cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..draws(cfg) {
        let prm = heis_draw(kind, s)?;
        let c = unit_curve(&MetricId::Sasaki, &prm.initial_state()?, cfg)?;
        w.push(sup_vs(&c, |x| Ok(closed_form_heis(&prm, x)))?);
    }
    Ok(w)
}

fn cone_family(kind: usize, cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..draws(cfg) {
        let prm = cone_draw(kind, s)?;
        let c = unit_curve(&MetricId::Cone, &prm.initial_state()?, cfg)?;
        w.push(sup_vs(&c, |x| closed_form_cone(&prm, x))?);
    }
    Ok(w)
}

fn geo_heis_horizontal(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    heis_family(0, cfg, s)
}

fn geo_heis_vertical(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    heis_family(1, cfg, s)
}

fn geo_heis_general(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    heis_family(2, cfg, s)
}

fn geo_cone_radial(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    cone_family(0, cfg, s)
}

fn geo_cone_vertical_plane(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    cone_family(1, cfg, s)
}

fn geo_cone_general(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    cone_family(2, cfg, s)
}

/// Drift of `|gamma'|` from 1 along general geodesics of both metrics.
fn geo_unit_speed(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..draws(cfg) {
        let curves = [
            unit_curve(&MetricId::Sasaki, &heis_draw(2, s)?.initial_state()?, cfg)?,
            unit_curve(&MetricId::Cone, &cone_draw(2, s)?.initial_state()?, cfg)?,
        ];
        for c in &curves {
            let mut worst: f64 = 0.0;
            for smp in &c.samples {
                worst = worst.max((norm(&c.metric, &smp.velocity)? - 1.0).abs());
            }
            w.push(worst);
        }
    }
    Ok(w)
}

/// Largest change of `f(gamma')` along the integration nodes.
fn drift(c: &Curve, f: impl Fn(&Tangent) -> Result<f64>) -> Result<f64> {
    let v0 = f(&c.start().velocity)?;
    let mut worst: f64 = 0.0;
    for smp in &c.samples {
        worst = worst.max((f(&smp.velocity)? - v0).abs());
    }
    Ok(worst)
}

/// `h = omega(gamma')/2 = g(gamma', T~)` is constant on the Heisenberg group.
fn geo_first_integral_heis(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..draws(cfg) {
        let c = unit_curve(&MetricId::Sasaki, &heis_draw(2, s)?.initial_state()?, cfg)?;
        w.push(drift(&c, |v| Ok(omega_of(v)? / 2.0))?);
    }
    Ok(w)
}

/// `h r` is constant along cone geodesics, where `h = g_r(gamma', T_r)
/// = r omega(gamma')/2`.
fn geo_first_integral_cone(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..draws(cfg) {
        let c = unit_curve(&MetricId::Cone, &cone_draw(2, s)?.initial_state()?, cfg)?;
        w.push(drift(&c, |v| {
            let r = v.base().r().unwrap();
            Ok(r * r * omega_of(v)? / 2.0)
        })?);
    }
    Ok(w)
}

/// Cone geodesics launched tangent to the image of `iota_U` (`x = y = 0`)
/// stay in it: the largest `|x|, |y|` over `s` in `[0, 2]`.
fn geo_totally_geodesic_u(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    for _ in 0..draws(cfg) {
        let t0 = s.uniform(-5.0, 5.0);
        let r0 = s.uniform(2.5, 5.0);
        let p = Point::cone(0.0, 0.0, t0, r0)?;
        // keep r >= r0 - 2 > 0 over the whole span
        let th = s.angle();
        let init = GeodesicState::normalized(&MetricId::Cone, Tangent::new(p, &[0.0, 0.0, th.cos(), th.sin()])?)?;
        let c = integrate_geodesic(&MetricId::Cone, &init, 2.0, &dense(cfg))?;
        let mut worst: f64 = 0.0;
        for smp in &c.samples {
            worst = worst.max(smp.point.coords()[0].abs()).max(smp.point.coords()[1].abs());
        }
        w.push(worst);
    }
    Ok(w)
}

fn bvp_agreement(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    let shoot = cfg.shoot();
    for _ in 0..cfg.samples.div_ceil(2) {
        let t0 = s.uniform(-3.0, 3.0);
        let (r0, r1) = (s.uniform(0.2, 5.0), s.uniform(0.2, 5.0));
        let t1 = t0 + s.uniform(-0.95, 0.95) * 2.0 * PI;
        let BvpOutcome::Solutions(sols) = bvp_solve_u(t0, r0, t1, r1)? else {
            return Err(GeomError::InvalidParameters("solvable instance reported unsolvable".into()));
        };
        let shot = shoot_u(t0, r0, t1, r1, &shoot)?;
        let mut best = f64::INFINITY;
        for sol in &sols {
            let v = affine_velocity_u(sol, t0, r0)?;
            best = best.min(v.sub(&shot.velocity)?.coord_norm().max((sol.s - shot.length).abs()));
        }
        w.push(best);
    }
    Ok(w)
}

fn bvp_quarter_turn(_: &RunConfig, _: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    match bvp_solve_u(0.0, 1.0, PI, 1.0)? {
        BvpOutcome::Solutions(v) if !v.is_empty() => {
            w.push((v[0].s - SQRT_2).abs().max((v[0].a + FRAC_1_SQRT_2).abs()));
        }
        _ => w.push(f64::INFINITY),
    }
    Ok(w)
}

/// Number of `|t1 - t0| >= 2 pi` instances that are not reported unsolvable
/// or on which shooting converges.
fn bvp_unsolvable(cfg: &RunConfig, s: &mut Sampler) -> Result<Worst> {
    let mut w = Worst::default();
    let shoot = cfg.shoot();
    for i in 0..cfg.samples.div_ceil(10) {
        let t0 = s.uniform(-3.0, 3.0);
        let (r0, r1) = (s.uniform(0.2, 5.0), s.uniform(0.2, 5.0));
        let sign = if s.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        let excess = if i == 0 { 0.0 } else { s.uniform(0.0, 3.0) };
        let t1 = t0 + sign * (2.0 * PI + excess);
        let closed_ok = matches!(bvp_solve_u(t0, r0, t1, r1)?, BvpOutcome::Unsolvable { .. });
        let shoot_fails = shoot_u(t0, r0, t1, r1, &shoot).is_err();
        w.push(if closed_ok && shoot_fails { 0.0 } else { 1.0 });
    }
    Ok(w)
}

/// Guard used by the non-completeness witness.
pub const NONCOMPLETE_GUARD: f64 = 1e-6;

fn noncompleteness(cfg: &RunConfig, _: &mut Sampler) -> Result<Worst> {
    let p = Point::cone(0.0, 0.0, 0.0, 1.0)?;
    let init = GeodesicState::new(&MetricId::Cone, Tangent::coordinate(p, 3).scale(-1.0))?;
    let mut icfg = cfg.integrator();
    icfg.boundary_guard = NONCOMPLETE_GUARD;
    let c = integrate_geodesic(&MetricId::Cone, &init, 2.0, &icfg)?;
    let mut w = Worst::default();
    if c.termination == Termination::HitDomainBoundary {
        w.push((c.end().s - (1.0 - NONCOMPLETE_GUARD)).abs());
    } else {
        w.push(f64::INFINITY);
    }
    Ok(w)
}

pub const CC_L_LIST: [f64; 5] = [0.25, 1.0, 4.0, 16.0, 64.0];

fn cc_horizontal(cfg: &RunConfig, _: &mut Sampler) -> Result<Worst> {
    let rep = cc_distance_estimate(
        &Point::heisenberg(0.0, 0.0, 0.0),
        &Point::heisenberg(1.0, 0.0, 0.0),
        &CC_L_LIST,
        &cfg.cc_shoot(),
    )?;
    let mut w = Worst::default();
    for e in &rep.entries {
        w.push(e.distance.as_ref().map(|d| (d - 1.0).abs()).unwrap_or(f64::INFINITY));
    }
    Ok(w)
}

macro_rules! check {
    ($name:expr, $target:expr, $tol:expr, $crit:expr, $f:expr) => {
        CheckSpec {
            name: $name,
            target: $target,
            tolerance: $tol,
            criterion: $crit,
            run: $f,
        }
    };
}

static CHECKS: &[CheckSpec] = &[
    check!("contact.quarter", "GL(1/4)", 1e-12, Some(5), contact_quarter),
    check!("contact.uniqueness", "GL(2^-6..2^3 except 1/4)", 0.0, Some(5), contact_uniqueness),
    check!("curvature.complex_plane", "GSub(C)", 1e-6, None, curvature_complex_plane),
    check!("curvature.cone", "GCone", 1e-6, Some(2), curvature_cone),
    check!("curvature.half_space", "GSub(U3)", 1e-6, None, curvature_half_space),
    check!("curvature.heisenberg", "GSasaki", 1e-6, Some(1), curvature_heisenberg),
    check!("curvature.kahler_family", "GAB(C), C in {0.5,1,1.5,2,3}", 1e-6, None, curvature_kahler_family),
    check!("curvature.prime.holomorphic", "GPrime", 1e-6, Some(3), curvature_prime_holomorphic),
    check!("curvature.prime.pinching", "GPrime", 1e-6, Some(3), curvature_prime_pinching),
    check!("curvature.sff.half_plane", "iota_U", 1e-6, None, sff_half_plane),
    check!("curvature.symmetries", "GSasaki, GCone, GPrime", 1e-6, None, curvature_symmetries),
    check!("geodesics.bvp.agreement", "GSub(U)", 1e-8, Some(10), bvp_agreement),
    check!("geodesics.bvp.quarter_turn", "GSub(U)", 1e-10, Some(10), bvp_quarter_turn),
    check!("geodesics.bvp.unsolvable", "GSub(U)", 0.0, Some(10), bvp_unsolvable),
    check!("geodesics.cc.horizontal", "GL(L), L in {1/4,1,4,16,64}", 1e-3, Some(12), cc_horizontal),
    check!("geodesics.closed_form.cone_general", "GCone", 1e-6, Some(9), geo_cone_general),
    check!("geodesics.closed_form.cone_radial", "GCone", 1e-6, Some(9), geo_cone_radial),
    check!("geodesics.closed_form.cone_vertical_plane", "GCone", 1e-6, Some(9), geo_cone_vertical_plane),
    check!("geodesics.closed_form.heis_general", "GSasaki", 1e-6, Some(9), geo_heis_general),
    check!("geodesics.closed_form.heis_horizontal", "GSasaki", 1e-6, Some(9), geo_heis_horizontal),
    check!("geodesics.closed_form.heis_vertical", "GSasaki", 1e-6, Some(9), geo_heis_vertical),
    check!("geodesics.first_integral.cone", "GCone", 1e-7, Some(9), geo_first_integral_cone),
    check!("geodesics.first_integral.heisenberg", "GSasaki", 1e-8, None, geo_first_integral_heis),
    check!("geodesics.noncompleteness", "GCone", 1e-9, Some(11), noncompleteness),
    check!("geodesics.totally_geodesic_u", "iota_U in GCone", 1e-8, None, geo_totally_geodesic_u),
    check!("geodesics.unit_speed", "GSasaki, GCone", 1e-8, Some(9), geo_unit_speed),
    check!("kahler.ab_coefficient", "OmegaAB, 5 non-Kahler profiles", 1e-5, Some(6), kahler_ab_coefficient),
    check!("kahler.closed.bergman", "OmegaBergman", 1e-5, Some(6), kahler_closed_bergman),
    check!("kahler.closed.cone", "OmegaR", 1e-5, Some(6), kahler_closed_cone),
    check!("kahler.closed.prime", "OmegaPrime", 1e-5, Some(6), kahler_closed_prime),
    check!("kahler.hermitian", "(GCone,JCone), (GPrime,ICone), (GBergman,JSiegel)", 1e-10, None, kahler_hermitian),
    check!("kahler.nijenhuis.i", "ICone", 1e-6, Some(6), nijenhuis_i),
    check!("kahler.nijenhuis.j", "JCone", 1e-6, Some(6), nijenhuis_j),
    check!("maps.heisenberg_isometries", "GSasaki", 1e-10, None, heisenberg_isometries),
    check!("maps.horospherical.holomorphy", "H: (ICone) -> (JSiegel)", 1e-8, Some(7), horospherical_holomorphy),
    check!("maps.horospherical.isometry", "H: GPrime -> GBergman", 1e-8, Some(7), horospherical_isometry),
    check!("maps.horospherical.rho", "H", 1e-12, None, horospherical_rho),
    check!("maps.pcr.horizontal_metric", "G: GCone -> GPrime on H", 1e-10, Some(8), pcr_horizontal_metric),
    check!("maps.pcr.horizontal_metric_corrected", "(z,t,4/r^2): GCone -> GPrime on H", 1e-10, None, pcr_horizontal_metric_corrected),
    check!("maps.pcr.restricted_holomorphy", "G: (JCone) -> (ICone) on H", 1e-10, None, pcr_restricted_holomorphy),
    check!("maps.pcr.unrestricted_gap", "G: (JCone) -> (ICone), r = 1", 0.0, Some(8), pcr_unrestricted_gap),
    check!("maps.pcr.unrestricted_pinned", "G at (0,0,0,1)", 1e-12, Some(8), pcr_unrestricted_pinned),
    check!("sasaki.identity", "GSasaki", 1e-6, Some(4), sasaki_identity),
    check!("sasaki.killing", "GSasaki, T~", 1e-6, Some(4), sasaki_killing),
    check!("sasaki.killing_x_fails", "GSasaki, X", 0.0, None, killing_x_fails),
];

/// All checks, sorted by name.
pub fn checks() -> &'static [CheckSpec] {
    CHECKS
}

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

/// Checks matching a glob (`*`, `?`, `[..]`); a filter that matches nothing is
/// an error.
pub fn select(filter: Option<&str>) -> Result<Vec<&'static CheckSpec>> {
    let Some(f) = filter else { return Ok(CHECKS.iter().collect()) };
    let pat = glob::Pattern::new(f).map_err(|e| GeomError::InvalidParameters(format!("bad filter {f:?}: {e}")))?;
    let out: Vec<_> = CHECKS.iter().filter(|c| pat.matches(c.name)).collect();
    if out.is_empty() {
        return Err(GeomError::InvalidParameters(format!("no check matches {f:?}")));
    }
    Ok(out)
}

pub fn run_check(spec: &CheckSpec, cfg: &RunConfig) -> CheckEntry {
    let mut s = Sampler::stream(cfg.seed, spec.name);
    let (samples, max_residual, error) = match (spec.run)(cfg, &mut s) {
        Ok(w) => (w.n, w.max, None),
        Err(e) => (0, f64::INFINITY, Some(e.to_string())),
    };
    CheckEntry {
        check: spec.name.to_string(),
        target: spec.target.to_string(),
        samples,
        max_residual,
        tolerance: spec.tolerance,
        pass: max_residual <= spec.tolerance,
        error,
    }
}

/// Runs the selected checks in parallel; entries come back sorted by name.
pub fn run(cfg: &RunConfig, filter: Option<&str>) -> Result<VerifyReport> {
    cfg.validate()?;
    let selected = select(filter)?;
    let mut entries: Vec<CheckEntry> = selected.par_iter().map(|c| run_check(c, cfg)).collect();
    entries.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(VerifyReport {
        seed: cfg.seed,
        config: *cfg,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_sorted_and_unique() {
        let n = check_names();
        assert!(n.windows(2).all(|w| w[0] < w[1]), "{n:?}");
    }

    #[test]
    fn filter_selects_by_glob() {
        let s: Vec<_> = select(Some("sasaki*")).unwrap().iter().map(|c| c.name).collect();
        assert_eq!(s, vec!["sasaki.identity", "sasaki.killing", "sasaki.killing_x_fails"]);
        assert!(select(Some("nope.*")).is_err());
    }

    #[test]
    fn lower_bound_bookkeeping() {
        let mut w = Worst::default();
        w.push_at_least(0.75, 0.1);
        assert_eq!(w.max, 0.0);
        w.push_at_least(0.04, 0.1);
        assert!((w.max - 0.06).abs() < 1e-15);
        w.push(f64::NAN);
        assert_eq!(w.max, f64::INFINITY);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = RunConfig { abs_tol: 0.0, ..RunConfig::default() };
        assert!(run(&cfg, None).is_err());
    }

    #[test]
    fn small_battery_runs() {
        let cfg = RunConfig { samples: 3, ..RunConfig::default() };
        let rep = run(&cfg, Some("curvature.cone")).unwrap();
        assert_eq!(rep.entries.len(), 1);
        assert!(rep.entries[0].pass, "{:?}", rep.entries[0]);
        assert_eq!(rep, run(&cfg, Some("curvature.cone")).unwrap());
    }
}
