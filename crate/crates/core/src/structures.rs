//! Almost complex structures, contact and fundamental forms, and the
//! residuals behind the contact-metric, Killing, Sasaki and Kähler claims.

use crate::curvature::{covariant_derivative, CurvatureConvention, CurvatureTensor};
use crate::error::{GeomError, Result};
use crate::fd::{self, FdConfig};
use crate::manifold::{eval_frame, omega_coeffs, omega_of, FrameId, Manifold, Point, Tangent};
use crate::metric::{bergman_alpha_beta, inner, metric_matrix, norm, AbProfile, MetricId};
use crate::manifold::rho_coords;

/// Tolerance on `|omega(u)|` for accepting `u` as horizontal.
pub const HORIZONTAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexStructureId {
    /// `JX = Y`, `JY = -X` on `ker omega` of the Heisenberg group.
    JHorizontal,
    /// Cone structure: `JX = Y`, `J T~ = -r d/dr`, `J d/dr = T~/r`.
    JCone,
    /// `IX = Y`, `IT = d/dr`, `I d/dr = -T`.
    ICone,
    /// Multiplication by `i` on `C^2`.
    JSiegel,
}

impl ComplexStructureId {
    pub fn manifold(self) -> Manifold {
        match self {
            Self::JHorizontal => Manifold::Heisenberg,
            Self::JCone | Self::ICone => Manifold::Cone,
            Self::JSiegel => Manifold::Siegel,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::JHorizontal => "J_horizontal",
            Self::JCone => "J_cone",
            Self::ICone => "I_cone",
            Self::JSiegel => "J_siegel",
        }
    }
}

pub fn apply_cstruct(c: ComplexStructureId, u: &Tangent) -> Result<Tangent> {
    let p = *u.base();
    p.expect(c.manifold(), c.name())?;
    let v = u.components();
    let at = |f| eval_frame(f, &p);
    match c {
        ComplexStructureId::JHorizontal => {
            let w = omega_of(u)?;
            if w.abs() > HORIZONTAL_TOL {
                return Err(GeomError::NotInSubbundle(format!(
                    "omega(u) = {w:e} on {}",
                    c.name()
                )));
            }
            // horizontal part is v_x X + v_y Y
            Tangent::combine(&[(v[0], at(FrameId::Y)?), (-v[1], at(FrameId::X)?)])
        }
        ComplexStructureId::JCone => {
            let r = p.coords()[3];
            let tau = omega_of(u)? / 2.0; // coefficient of T~
            Tangent::combine(&[
                (v[0], at(FrameId::Y)?),
                (-v[1], at(FrameId::X)?),
                (-tau * r, at(FrameId::Dr)?),
                (v[3] / r, at(FrameId::TTilde)?),
            ])
        }
        ComplexStructureId::ICone => {
            let tau = omega_of(u)?; // coefficient of T
            Tangent::combine(&[
                (v[0], at(FrameId::Y)?),
                (-v[1], at(FrameId::X)?),
                (tau, at(FrameId::Dr)?),
                (-v[3], at(FrameId::T)?),
            ])
        }
        ComplexStructureId::JSiegel => Tangent::new(p, &[-v[1], v[0], -v[3], v[2]]),
    }
}

/// The endomorphism `phi` of the contact-metric structure on the Heisenberg
/// group: `phi X = Y`, `phi Y = -X`, `phi T~ = 0`.
pub fn phi(u: &Tangent) -> Result<Tangent> {
    let p = *u.base();
    p.expect(Manifold::Heisenberg, "phi")?;
    let v = u.components();
    Tangent::combine(&[
        (v[0], eval_frame(FrameId::Y, &p)?),
        (-v[1], eval_frame(FrameId::X, &p)?),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DifferentialForm {
    /// `dt + 2x dy - 2y dx`.
    Omega,
    /// `omega / 2`.
    OmegaTilde,
    /// `r dr ^ omega~ + r^2 dx ^ dy`.
    OmegaR,
    /// `dx ^ dy / a^2 + omega ^ dr / b^2`.
    OmegaAb(AbProfile),
    /// `OmegaAb` with `a = sqrt(r)/2`, `b = r`.
    OmegaPrime,
    /// `-4i ddbar log(rho)`, expanded as
    /// `8 (da2 ^ db2 / rho + alpha ^ beta / rho^2)` with
    /// `alpha + i beta = dz1 + conj(z2) dz2`.
    OmegaBergman,
}

fn wedge(a: &[f64], b: &[f64], u: &[f64], v: &[f64]) -> f64 {
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    dot(a, u) * dot(b, v) - dot(a, v) * dot(b, u)
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[k] = 1.0;
    e
}

impl DifferentialForm {
    pub fn degree(&self) -> usize {
        match self {
            Self::Omega | Self::OmegaTilde => 1,
            _ => 2,
        }
    }

    pub fn manifold(&self) -> Manifold {
        match self {
            Self::Omega | Self::OmegaTilde => Manifold::Heisenberg,
            Self::OmegaBergman => Manifold::Siegel,
            _ => Manifold::Cone,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Omega => "omega".into(),
            Self::OmegaTilde => "omega_tilde".into(),
            Self::OmegaR => "Omega_r".into(),
            Self::OmegaAb(p) => format!(
                "Omega_ab(a={}r^{},b={}r^{})",
                p.a_coef, p.a_exp, p.b_coef, p.b_exp
            ),
            Self::OmegaPrime => "Omega_prime".into(),
            Self::OmegaBergman => "Omega_bergman".into(),
        }
    }

    /// Evaluates on raw coordinate components at `p` (no domain guard, so
    /// that stencils near the guard still work).
    fn eval_raw(&self, p: &Point, args: &[&[f64]]) -> f64 {
        let c = p.coords();
        let n = c.len();
        match self {
            Self::Omega | Self::OmegaTilde => {
                let w = omega_coeffs(c[0], c[1]);
                let u = args[0];
                let s: f64 = (0..3).map(|i| w[i] * u[i]).sum();
                if matches!(self, Self::OmegaTilde) {
                    s / 2.0
                } else {
                    s
                }
            }
            Self::OmegaR => {
                let r = c[3];
                let w = omega_coeffs(c[0], c[1]);
                let wt = [w[0] / 2.0, w[1] / 2.0, w[2] / 2.0, 0.0];
                r * wedge(&unit(4, 3), &wt, args[0], args[1])
                    + r * r * wedge(&unit(4, 0), &unit(4, 1), args[0], args[1])
            }
            Self::OmegaAb(_) | Self::OmegaPrime => {
                let prof = match self {
                    Self::OmegaAb(p) => *p,
                    _ => AbProfile::prime(),
                };
                let r = c[3];
                let (a, b) = (prof.a(r), prof.b(r));
                let w = omega_coeffs(c[0], c[1]);
                let w4 = [w[0], w[1], w[2], 0.0];
                wedge(&unit(4, 0), &unit(4, 1), args[0], args[1]) / (a * a)
                    + wedge(&w4, &unit(4, 3), args[0], args[1]) / (b * b)
            }
            Self::OmegaBergman => {
                let rho = rho_coords(c);
                let (alpha, beta) = bergman_alpha_beta(c);
                8.0 * (wedge(&unit(n, 2), &unit(n, 3), args[0], args[1]) / rho
                    + wedge(&alpha, &beta, args[0], args[1]) / (rho * rho))
            }
        }
    }

    pub fn eval(&self, args: &[Tangent]) -> Result<f64> {
        if args.len() != self.degree() {
            return Err(GeomError::InvalidParameters(format!(
                "{} takes {} arguments, got {}",
                self.name(),
                self.degree(),
                args.len()
            )));
        }
        let p = *args[0].base();
        p.expect(self.manifold(), &self.name())?;
        for a in &args[1..] {
            a.check_same_base(&args[0])?;
        }
        if !p.is_inside(crate::manifold::DOMAIN_GUARD) {
            return Err(GeomError::OutsideDomain {
                manifold: p.manifold(),
                coords: p.coords().to_vec(),
                guard: crate::manifold::DOMAIN_GUARD,
            });
        }
        let comps: Vec<&[f64]> = args.iter().map(|a| a.components()).collect();
        Ok(self.eval_raw(&p, &comps))
    }
}

/// `dF` on coordinate directions `axes` (length `deg F + 1`), by finite
/// differences of the components `F(d_i, d_j)`. Coordinate fields commute, so
/// only the alternating sum of derivatives remains.
pub fn exterior_derivative(
    form: &DifferentialForm,
    p: &Point,
    axes: &[usize],
    cfg: &FdConfig,
) -> Result<f64> {
    p.expect(form.manifold(), &form.name())?;
    let n = p.dim();
    if axes.len() != form.degree() + 1 || axes.iter().any(|a| *a >= n) {
        return Err(GeomError::InvalidParameters(format!(
            "d{} needs {} coordinate directions below {n}",
            form.name(),
            form.degree() + 1
        )));
    }
    let comp = |rest: Vec<usize>| {
        move |q: &Point| -> Result<Vec<f64>> {
            let e: Vec<Vec<f64>> = rest.iter().map(|k| unit(n, *k)).collect();
            let refs: Vec<&[f64]> = e.iter().map(|v| v.as_slice()).collect();
            Ok(vec![form.eval_raw(q, &refs)])
        }
    };
    let mut acc = 0.0;
    for (pos, axis) in axes.iter().enumerate() {
        let rest: Vec<usize> = axes
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, a)| *a)
            .collect();
        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * fd::derivative(&comp(rest), p, *axis, cfg)?[0];
    }
    Ok(acc)
}

/// `N(d_i, d_j) = [c d_i, c d_j] - c[c d_i, d_j] - c[d_i, c d_j]`
/// (the bracket of coordinate fields vanishes).
pub fn nijenhuis(c: ComplexStructureId, p: &Point, i: usize, j: usize, cfg: &FdConfig) -> Result<Tangent> {
    if c == ComplexStructureId::JHorizontal {
        return Err(GeomError::InvalidParameters(
            "the horizontal structure is not defined on the whole tangent bundle".into(),
        ));
    }
    p.expect(c.manifold(), c.name())?;
    if c == ComplexStructureId::JSiegel {
        // constant coefficients
        return Ok(Tangent::zero(*p));
    }
    let n = p.dim();
    let field = |axis: usize| {
        move |q: &Point| -> Result<Vec<f64>> {
            Ok(apply_cstruct(c, &Tangent::coordinate(*q, axis))?
                .components()
                .to_vec())
        }
    };
    let (fa, fb) = (field(i), field(j));
    let a = fa(p)?;
    let b = fb(p)?;
    let da = fd::gradient(&fa, p, cfg)?;
    let db = fd::gradient(&fb, p, cfg)?;
    // [A, B]^k = A^m d_m B^k - B^m d_m A^k
    let mut bracket = vec![0.0; n];
    for k in 0..n {
        for m in 0..n {
            bracket[k] += a[m] * db[m][k] - b[m] * da[m][k];
        }
    }
    // [A, d_j] = -d_j A,  [d_i, B] = d_i B
    let ca = apply_cstruct(c, &Tangent::new(*p, &da[j])?)?;
    let cb = apply_cstruct(c, &Tangent::new(*p, &db[i])?)?;
    Tangent::new(*p, &bracket)?.add(&ca)?.sub(&cb)
}

/// Residual `|(sqrt(L)/2) d omega(X, Y) - g_L(phi X, Y)|`, maximised over
/// `points`. Here `d omega = 4 dx ^ dy` exactly, so the residual is
/// `|2 sqrt(L) - 1|`.
pub fn contact_metric_residual(l: f64, points: &[Point]) -> Result<f64> {
    if !(l > 0.0) {
        return Err(GeomError::InvalidParameters(format!("L must be positive, got {l}")));
    }
    let m = MetricId::Approximant { l };
    let mut worst: f64 = 0.0;
    for p in points {
        p.expect(Manifold::Heisenberg, "contact metric residual")?;
        let x = eval_frame(FrameId::X, p)?;
        let y = eval_frame(FrameId::Y, p)?;
        let (xc, yc) = (x.components(), y.components());
        let d_omega = 4.0 * (xc[0] * yc[1] - xc[1] * yc[0]);
        let rhs = inner(&m, p, &phi(&x)?, &y)?;
        worst = worst.max((l.sqrt() / 2.0 * d_omega - rhs).abs());
    }
    Ok(worst)
}

/// The grid `2^-6, ..., 2^3` used for the uniqueness scan of `L = 1/4`.
pub fn contact_scan_grid() -> Vec<f64> {
    (-6..=3).map(|k| 2f64.powi(k)).collect()
}

/// `|g(nabla_v xi, u) + g(nabla_u xi, v)|` for the frame field `xi`.
pub fn killing_residual(m: &MetricId, field: FrameId, u: &Tangent, v: &Tangent, cfg: &FdConfig) -> Result<f64> {
    u.check_same_base(v)?;
    let p = *u.base();
    let xi = |q: &Point| eval_frame(field, q);
    let du = covariant_derivative(m, u, &xi, cfg)?;
    let dv = covariant_derivative(m, v, &xi, cfg)?;
    Ok((inner(m, &p, &dv, u)? + inner(m, &p, &du, v)?).abs())
}

/// `| R(u, T~) v - g(u, v) T~ + g(T~, v) u |_g` for the contact metric.
pub fn sasaki_residual(u: &Tangent, v: &Tangent, cfg: &FdConfig) -> Result<f64> {
    let p = *u.base();
    let tensor = CurvatureTensor::at(&MetricId::Sasaki, &p, cfg)?;
    sasaki_residual_with(&tensor, u, v)
}

/// As [`sasaki_residual`], reusing a curvature tensor computed at the base point.
pub fn sasaki_residual_with(tensor: &CurvatureTensor, u: &Tangent, v: &Tangent) -> Result<f64> {
    let m = MetricId::Sasaki;
    if tensor.metric != m {
        return Err(GeomError::InvalidParameters("tensor must be of the contact metric".into()));
    }
    let p = tensor.base;
    let xi = eval_frame(FrameId::TTilde, &p)?;
    let r = tensor.apply(u, &xi, v, CurvatureConvention::DoCarmo)?;
    let d = Tangent::combine(&[
        (1.0, r),
        (-inner(&m, &p, u, v)?, xi),
        (inner(&m, &p, &xi, v)?, *u),
    ])?;
    norm(&m, &d)
}

/// `|F(u, v) - g(c u, v)|` for a fundamental 2-form.
pub fn compatibility_residual(
    form: &DifferentialForm,
    m: &MetricId,
    c: ComplexStructureId,
    u: &Tangent,
    v: &Tangent,
) -> Result<f64> {
    let lhs = form.eval(&[*u, *v])?;
    let rhs = inner(m, u.base(), &apply_cstruct(c, u)?, v)?;
    Ok((lhs - rhs).abs())
}

/// `|g(c u, c v) - g(u, v)|`.
pub fn hermitian_residual(m: &MetricId, c: ComplexStructureId, u: &Tangent, v: &Tangent) -> Result<f64> {
    let p = u.base();
    let g = metric_matrix(m, p)?;
    let (cu, cv) = (apply_cstruct(c, u)?, apply_cstruct(c, v)?);
    let b = |a: &Tangent, b: &Tangent| crate::metric::bilinear(&g, a.components(), b.components());
    Ok((b(&cu, &cv) - b(u, v)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone_point() -> Point {
        Point::cone(0.8, -1.1, 0.3, 1.7).unwrap()
    }

    #[test]
    fn i_cone_examples() {
        let p = cone_point();
        let t = eval_frame(FrameId::T, &p).unwrap();
        let it = apply_cstruct(ComplexStructureId::ICone, &t).unwrap();
        assert!(it.sub(&eval_frame(FrameId::Dr, &p).unwrap()).unwrap().coord_norm() < 1e-15);
        let x = eval_frame(FrameId::X, &p).unwrap();
        let iix = apply_cstruct(ComplexStructureId::ICone, &apply_cstruct(ComplexStructureId::ICone, &x).unwrap()).unwrap();
        assert!(iix.add(&x).unwrap().coord_norm() < 1e-14);
    }

    #[test]
    fn j_cone_on_reeb_direction() {
        let p = cone_point();
        let tr = eval_frame(FrameId::Tr, &p).unwrap();
        let j = apply_cstruct(ComplexStructureId::JCone, &tr).unwrap();
        assert!(j.add(&eval_frame(FrameId::Dr, &p).unwrap()).unwrap().coord_norm() < 1e-15);
    }

    #[test]
    fn structures_square_to_minus_one() {
        let cone = cone_point();
        let siegel = Point::new(Manifold::Siegel, &[-2.0, 0.3, 0.5, -0.7]).unwrap();
        for (c, p) in [
            (ComplexStructureId::JCone, cone),
            (ComplexStructureId::ICone, cone),
            (ComplexStructureId::JSiegel, siegel),
        ] {
            let u = Tangent::new(p, &[0.3, -1.2, 0.7, 2.1]).unwrap();
            let jj = apply_cstruct(c, &apply_cstruct(c, &u).unwrap()).unwrap();
            assert!(jj.add(&u).unwrap().coord_norm() < 1e-13, "{c:?}");
        }
    }

    #[test]
    fn horizontal_structure_rejects_vertical_vectors() {
        let p = Point::heisenberg(0.5, 0.2, 0.0);
        let t = eval_frame(FrameId::T, &p).unwrap();
        assert!(matches!(
            apply_cstruct(ComplexStructureId::JHorizontal, &t),
            Err(GeomError::NotInSubbundle(_))
        ));
        let x = eval_frame(FrameId::X, &p).unwrap();
        let jx = apply_cstruct(ComplexStructureId::JHorizontal, &x).unwrap();
        assert_eq!(jx, eval_frame(FrameId::Y, &p).unwrap());
    }

    #[test]
    fn phi_identities() {
        let p = Point::heisenberg(1.3, -0.4, 2.2);
        let m = MetricId::Sasaki;
        let u = Tangent::new(p, &[0.4, 1.0, -0.6]).unwrap();
        let v = Tangent::new(p, &[-1.5, 0.2, 0.9]).unwrap();
        let xi = eval_frame(FrameId::TTilde, &p).unwrap();
        let wt = DifferentialForm::OmegaTilde.eval(&[u]).unwrap();
        assert!((wt - inner(&m, &p, &u, &xi).unwrap()).abs() < 1e-12);
        // (1/2) d omega~ = dx ^ dy
        let half_dwt = u.components()[0] * v.components()[1] - u.components()[1] * v.components()[0];
        assert!((half_dwt - inner(&m, &p, &phi(&u).unwrap(), &v).unwrap()).abs() < 1e-12);
        let pp = phi(&phi(&u).unwrap()).unwrap();
        let expect = u.scale(-1.0).add(&xi.scale(wt)).unwrap();
        assert!(pp.sub(&expect).unwrap().coord_norm() < 1e-12);
    }

    #[test]
    fn exterior_derivative_examples() {
        let p = cone_point();
        let cfg = FdConfig::default();
        let d = exterior_derivative(&DifferentialForm::OmegaR, &p, &[0, 1, 3], &cfg).unwrap();
        assert!(d.abs() < 1e-6);
        let flat = AbProfile::power(1.0, 0.0, 1.0, 0.0).unwrap();
        let d = exterior_derivative(&DifferentialForm::OmegaAb(flat), &p, &[0, 1, 3], &cfg).unwrap();
        assert!((d - 4.0).abs() < 1e-5);
        let d = exterior_derivative(&DifferentialForm::OmegaPrime, &p, &[0, 1, 3], &cfg).unwrap();
        assert!(d.abs() < 1e-6);
        // d omega (dx, dy) = 4
        let h = Point::heisenberg(0.3, 0.1, 0.0);
        let d = exterior_derivative(&DifferentialForm::Omega, &h, &[0, 1], &cfg).unwrap();
        assert!((d - 4.0).abs() < 1e-9);
    }

    #[test]
    fn bergman_form_is_closed() {
        let p = Point::new(Manifold::Siegel, &[-1.7, 0.4, 0.6, -0.3]).unwrap();
        let cfg = FdConfig::default();
        for axes in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            let d = exterior_derivative(&DifferentialForm::OmegaBergman, &p, &axes, &cfg).unwrap();
            assert!(d.abs() < 1e-5, "{axes:?}: {d}");
        }
    }

    #[test]
    fn nijenhuis_examples() {
        let p = cone_point();
        let cfg = FdConfig::default();
        let n = nijenhuis(ComplexStructureId::ICone, &p, 0, 2, &cfg).unwrap();
        assert!(n.coord_norm() < 1e-6);
        let n = nijenhuis(ComplexStructureId::JCone, &p, 0, 3, &cfg).unwrap();
        assert!(n.coord_norm() < 1e-6);
        let s = Point::origin(Manifold::Siegel).unwrap();
        assert_eq!(nijenhuis(ComplexStructureId::JSiegel, &s, 1, 2, &cfg).unwrap().coord_norm(), 0.0);
    }

    #[test]
    fn contact_metric_examples() {
        let pts = [Point::heisenberg(0.0, 0.0, 0.0), Point::heisenberg(2.0, -1.0, 3.0)];
        assert!(contact_metric_residual(0.25, &pts).unwrap() < 1e-12);
        assert!((contact_metric_residual(1.0, &pts).unwrap() - 1.0).abs() < 1e-12);
        assert!((contact_metric_residual(1.0 / 16.0, &pts).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(contact_scan_grid().len(), 10);
    }

    #[test]
    fn reeb_field_is_killing_and_x_is_not() {
        let cfg = FdConfig::default();
        let p = Point::heisenberg(0.7, -0.2, 1.1);
        let u = Tangent::new(p, &[0.3, -0.8, 0.5]).unwrap();
        let v = Tangent::new(p, &[1.0, 0.4, -0.2]).unwrap();
        assert!(killing_residual(&MetricId::Sasaki, FrameId::TTilde, &u, &v, &cfg).unwrap() < 1e-6);
        let o = Point::heisenberg(0.0, 0.0, 0.0);
        let x = eval_frame(FrameId::X, &o).unwrap();
        let y = eval_frame(FrameId::Y, &o).unwrap();
        let t = eval_frame(FrameId::TTilde, &o).unwrap();
        let worst = [(x, y), (y, t), (x, t), (y, y)]
            .iter()
            .map(|(a, b)| killing_residual(&MetricId::Sasaki, FrameId::X, a, b, &cfg).unwrap())
            .fold(0.0, f64::max);
        assert!(worst > 0.1, "{worst}");
        // u = v gives 2 |g(nabla_u xi, u)|
        let d = covariant_derivative(&MetricId::Sasaki, &u, &|q: &Point| eval_frame(FrameId::X, q), &cfg).unwrap();
        let k = killing_residual(&MetricId::Sasaki, FrameId::X, &u, &u, &cfg).unwrap();
        assert!((k - 2.0 * inner(&MetricId::Sasaki, &p, &d, &u).unwrap().abs()).abs() < 1e-12);
    }

    #[test]
    fn sasaki_identity() {
        let cfg = FdConfig::default();
        let p = Point::heisenberg(-0.9, 1.4, 0.2);
        let x = eval_frame(FrameId::X, &p).unwrap();
        let y = eval_frame(FrameId::Y, &p).unwrap();
        let t = eval_frame(FrameId::TTilde, &p).unwrap();
        assert!(sasaki_residual(&x, &y, &cfg).unwrap() < 1e-6);
        assert!(sasaki_residual(&t, &t, &cfg).unwrap() < 1e-9);
        let u = Tangent::new(p, &[0.2, -0.7, 1.3]).unwrap();
        let v = Tangent::new(p, &[1.1, 0.5, -0.4]).unwrap();
        assert!(sasaki_residual(&u, &v, &cfg).unwrap() < 1e-6);
    }

    #[test]
    fn fundamental_forms_are_compatible() {
        let p = cone_point();
        let u = Tangent::new(p, &[0.3, -1.2, 0.7, 2.1]).unwrap();
        let v = Tangent::new(p, &[1.0, 0.4, -0.5, -0.3]).unwrap();
        let ab = AbProfile::power(0.7, 0.3, 1.4, 2.0).unwrap();
        assert!(compatibility_residual(&DifferentialForm::OmegaR, &MetricId::Cone, ComplexStructureId::JCone, &u, &v).unwrap() < 1e-10);
        assert!(compatibility_residual(&DifferentialForm::OmegaAb(ab), &MetricId::Ab(ab), ComplexStructureId::ICone, &u, &v).unwrap() < 1e-10);
        assert!(hermitian_residual(&MetricId::Ab(ab), ComplexStructureId::ICone, &u, &v).unwrap() < 1e-10);
        assert!(hermitian_residual(&MetricId::Cone, ComplexStructureId::JCone, &u, &v).unwrap() < 1e-10);
    }
}
