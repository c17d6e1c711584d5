//! Explicit maps between the model manifolds, with exact Jacobians.
//!
//! Siegel points are stored as `(Re z1, Im z1, Re z2, Im z2)`.

use nalgebra::DMatrix;

use crate::error::{GeomError, Result};
use crate::fd::{self, FdConfig};
use crate::manifold::{eval_frame, FrameId, Manifold, Point, Tangent};
use crate::metric::{metric_matrix, MetricId};
use crate::structures::{apply_cstruct, ComplexStructureId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapId {
    Identity(Manifold),
    /// `(z, t) -> (zeta, s) * (z, t)` with `zeta = a + ib`.
    LeftTranslation { a: f64, b: f64, s: f64 },
    /// `(z, t) -> (e^{i theta} z, t)`.
    Rotation { theta: f64 },
    /// `(z, t) -> (delta z, delta^2 t)`.
    Dilation { delta: f64 },
    /// `(z, t) -> (conj z, -t)`.
    Conjugation,
    /// `(t, r) -> (0, 0, 2t, r)`: the half-plane `x = y = 0` of the cone.
    /// The factor 2 makes the induced metric `dr^2 + r^2 dt^2`.
    IotaU,
    /// `(x, y) -> (x, y, 0, 1)`.
    IotaC,
    /// `(x, y, r) -> (x, y, 0, r)`.
    IotaU3,
    /// `(x, y, t) -> (x, y, t, 1)`.
    IotaH,
    /// Boundary map `(z, t) -> ((-|z|^2 + it)/2, z)` onto the boundary of
    /// the Siegel domain.
    Boundary,
    /// Horospherical map `(z, t, r) -> ((-|z|^2 - r + it)/2, z)`.
    Horospherical,
    /// `(z, t, r) -> (z, t, 2 sqrt(r))`.
    Pcr,
    /// `(z, t, r) -> (z, t, r^2/4)`, the inverse of `Pcr`.
    PcrInverse,
    /// `(z, t, r) -> (z, t, 4/r^2)`: pulls the horizontal part of `g'` back to
    /// the horizontal part of the cone metric.
    PcrKahler,
}

impl MapId {
    pub fn name(&self) -> String {
        match self {
            Self::Identity(m) => format!("id_{}", m.short_name()),
            Self::LeftTranslation { a, b, s } => format!("translation({a},{b},{s})"),
            Self::Rotation { theta } => format!("rotation({theta})"),
            Self::Dilation { delta } => format!("dilation({delta})"),
            Self::Conjugation => "conjugation".into(),
            Self::IotaU => "iota_U".into(),
            Self::IotaC => "iota_C".into(),
            Self::IotaU3 => "iota_U3".into(),
            Self::IotaH => "iota_H".into(),
            Self::Boundary => "h".into(),
            Self::Horospherical => "H".into(),
            Self::Pcr => "G".into(),
            Self::PcrInverse => "G_inv".into(),
            Self::PcrKahler => "G_kahler".into(),
        }
    }

    pub fn domain(&self) -> Manifold {
        match self {
            Self::Identity(m) => *m,
            Self::LeftTranslation { .. }
            | Self::Rotation { .. }
            | Self::Dilation { .. }
            | Self::Conjugation
            | Self::IotaH
            | Self::Boundary => Manifold::Heisenberg,
            Self::IotaU => Manifold::HalfPlane,
            Self::IotaC => Manifold::ComplexPlane,
            Self::IotaU3 => Manifold::HalfSpace,
            Self::Horospherical | Self::Pcr | Self::PcrInverse | Self::PcrKahler => Manifold::Cone,
        }
    }

    pub fn codomain(&self) -> Manifold {
        match self {
            Self::Identity(m) => *m,
            Self::LeftTranslation { .. } | Self::Rotation { .. } | Self::Dilation { .. } | Self::Conjugation => {
                Manifold::Heisenberg
            }
            Self::IotaU | Self::IotaC | Self::IotaU3 | Self::IotaH => Manifold::Cone,
            Self::Boundary | Self::Horospherical => Manifold::Siegel,
            Self::Pcr | Self::PcrInverse | Self::PcrKahler => Manifold::Cone,
        }
    }

    pub fn is_cone_embedding(&self) -> bool {
        matches!(self, Self::IotaU | Self::IotaC | Self::IotaU3 | Self::IotaH)
    }

    pub fn inverse(&self) -> Option<MapId> {
        Some(match *self {
            Self::Identity(m) => Self::Identity(m),
            Self::LeftTranslation { a, b, s } => Self::LeftTranslation { a: -a, b: -b, s: -s },
            Self::Rotation { theta } => Self::Rotation { theta: -theta },
            Self::Dilation { delta } if delta != 0.0 => Self::Dilation { delta: 1.0 / delta },
            Self::Conjugation => Self::Conjugation,
            Self::Pcr => Self::PcrInverse,
            Self::PcrInverse => Self::Pcr,
            _ => return None,
        })
    }

    fn formula(&self, c: &[f64]) -> Vec<f64> {
        match *self {
            Self::Identity(_) => c.to_vec(),
            Self::LeftTranslation { a, b, s } => {
                let (x, y, t) = (c[0], c[1], c[2]);
                vec![a + x, b + y, s + t + 2.0 * (b * x - a * y)]
            }
            Self::Rotation { theta } => {
                let (sn, cs) = theta.sin_cos();
                vec![cs * c[0] - sn * c[1], sn * c[0] + cs * c[1], c[2]]
            }
            Self::Dilation { delta } => vec![delta * c[0], delta * c[1], delta * delta * c[2]],
            Self::Conjugation => vec![c[0], -c[1], -c[2]],
            Self::IotaU => vec![0.0, 0.0, 2.0 * c[0], c[1]],
            Self::IotaC => vec![c[0], c[1], 0.0, 1.0],
            Self::IotaU3 => vec![c[0], c[1], 0.0, c[2]],
            Self::IotaH => vec![c[0], c[1], c[2], 1.0],
            Self::Boundary => {
                let (x, y, t) = (c[0], c[1], c[2]);
                vec![-(x * x + y * y) / 2.0, t / 2.0, x, y]
            }
            Self::Horospherical => {
                let (x, y, t, r) = (c[0], c[1], c[2], c[3]);
                vec![(-(x * x + y * y) - r) / 2.0, t / 2.0, x, y]
            }
            Self::Pcr => vec![c[0], c[1], c[2], 2.0 * c[3].sqrt()],
            Self::PcrInverse => vec![c[0], c[1], c[2], c[3] * c[3] / 4.0],
            Self::PcrKahler => vec![c[0], c[1], c[2], 4.0 / (c[3] * c[3])],
        }
    }

    fn check_domain(&self, p: &Point) -> Result<()> {
        p.expect(self.domain(), &self.name())?;
        if !p.is_inside(crate::manifold::DOMAIN_GUARD) {
            return Err(GeomError::OutsideDomain {
                manifold: p.manifold(),
                coords: p.coords().to_vec(),
                guard: crate::manifold::DOMAIN_GUARD,
            });
        }
        Ok(())
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        self.check_domain(p)?;
        let out = self.formula(p.coords());
        match self {
            Self::Boundary => Point::on_closure(Manifold::Siegel, &out),
            _ => Point::new(self.codomain(), &out),
        }
    }

    /// Exact Jacobian, `codomain dim x domain dim`.
    pub fn jacobian(&self, p: &Point) -> Result<DMatrix<f64>> {
        self.check_domain(p)?;
        let c = p.coords();
        let (n, m) = (self.codomain().dim(), self.domain().dim());
        let mut j = DMatrix::zeros(n, m);
        match *self {
            Self::Identity(_) => j.fill_with_identity(),
            Self::LeftTranslation { a, b, .. } => {
                j.fill_with_identity();
                j[(2, 0)] = 2.0 * b;
                j[(2, 1)] = -2.0 * a;
            }
            Self::Rotation { theta } => {
                let (sn, cs) = theta.sin_cos();
                j[(0, 0)] = cs;
                j[(0, 1)] = -sn;
                j[(1, 0)] = sn;
                j[(1, 1)] = cs;
                j[(2, 2)] = 1.0;
            }
            Self::Dilation { delta } => {
                j[(0, 0)] = delta;
                j[(1, 1)] = delta;
                j[(2, 2)] = delta * delta;
            }
            Self::Conjugation => {
                j[(0, 0)] = 1.0;
                j[(1, 1)] = -1.0;
                j[(2, 2)] = -1.0;
            }
            Self::IotaU => {
                j[(2, 0)] = 2.0;
                j[(3, 1)] = 1.0;
            }
            Self::IotaC => {
                j[(0, 0)] = 1.0;
                j[(1, 1)] = 1.0;
            }
            Self::IotaU3 => {
                j[(0, 0)] = 1.0;
                j[(1, 1)] = 1.0;
                j[(3, 2)] = 1.0;
            }
            Self::IotaH => {
                j[(0, 0)] = 1.0;
                j[(1, 1)] = 1.0;
                j[(2, 2)] = 1.0;
            }
            Self::Boundary | Self::Horospherical => {
                j[(0, 0)] = -c[0];
                j[(0, 1)] = -c[1];
                j[(1, 2)] = 0.5;
                j[(2, 0)] = 1.0;
                j[(3, 1)] = 1.0;
                if let Self::Horospherical = self {
                    j[(0, 3)] = -0.5;
                }
            }
            Self::Pcr | Self::PcrInverse | Self::PcrKahler => {
                j.fill_with_identity();
                let r = c[3];
                j[(3, 3)] = match self {
                    Self::Pcr => 1.0 / r.sqrt(),
                    Self::PcrInverse => r / 2.0,
                    _ => -8.0 / (r * r * r),
                };
            }
        }
        Ok(j)
    }

    /// Jacobian by finite differences of the formula; a cross-check path.
    pub fn fd_jacobian(&self, p: &Point, cfg: &FdConfig) -> Result<DMatrix<f64>> {
        self.check_domain(p)?;
        let f = |q: &Point| Ok(self.formula(q.coords()));
        let cols = fd::gradient(&f, p, cfg)?;
        let n = self.codomain().dim();
        Ok(DMatrix::from_fn(n, cols.len(), |i, k| cols[k][i]))
    }
}

pub fn pushforward(f: &MapId, u: &Tangent) -> Result<Tangent> {
    let p = u.base();
    let q = f.apply(p)?;
    let j = f.jacobian(p)?;
    Tangent::from_vector(q, &(j * u.vector()))
}

/// `J^T G(f(p)) J`.
pub fn pullback_metric(f: &MapId, m: &MetricId, p: &Point) -> Result<DMatrix<f64>> {
    let q = f.apply(p)?;
    if m.manifold() != f.codomain() {
        return Err(GeomError::ManifoldMismatch {
            what: format!("metric {} for the codomain of {}", m.name(), f.name()),
            expected: f.codomain(),
            got: m.manifold(),
        });
    }
    let j = f.jacobian(p)?;
    Ok(j.transpose() * metric_matrix(m, &q)? * j)
}

/// Frobenius norm of `f^* m_dst - m_src` at `p`.
pub fn isometry_residual(f: &MapId, m_src: &MetricId, m_dst: &MetricId, p: &Point) -> Result<f64> {
    let pulled = pullback_metric(f, m_dst, p)?;
    Ok((pulled - metric_matrix(m_src, p)?).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionId {
    /// `span{X, Y}` on the Heisenberg group or the cone chart.
    HHorizontal,
    /// `span{H_* X, H_* Y}` on the Siegel domain.
    HPrimeSiegel,
}

/// The defining basis of a distribution at `p`, not orthonormalized.
pub fn distribution_basis(d: DistributionId, p: &Point) -> Result<[Tangent; 2]> {
    match d {
        DistributionId::HHorizontal => Ok([eval_frame(FrameId::X, p)?, eval_frame(FrameId::Y, p)?]),
        DistributionId::HPrimeSiegel => {
            p.expect(Manifold::Siegel, "H' distribution")?;
            let c = p.coords();
            // inverse of the horospherical map
            let pre = Point::cone(c[2], c[3], 2.0 * c[1], crate::manifold::rho_coords(c))?;
            let push = |f| pushforward(&MapId::Horospherical, &eval_frame(f, &pre)?);
            let (x, y) = (push(FrameId::X)?, push(FrameId::Y)?);
            // rebase onto p exactly
            Ok([Tangent::new(*p, x.components())?, Tangent::new(*p, y.components())?])
        }
    }
}

/// `max_u |f_*(c_src u) - c_dst(f_* u)|` (coordinate norm) over the
/// coordinate basis, or over the basis of `restrict` when given.
pub fn holomorphy_residual(
    f: &MapId,
    c_src: ComplexStructureId,
    c_dst: ComplexStructureId,
    p: &Point,
    restrict: Option<DistributionId>,
) -> Result<f64> {
    let basis: Vec<Tangent> = match restrict {
        Some(d) => distribution_basis(d, p)?.to_vec(),
        None => (0..p.dim()).map(|k| Tangent::coordinate(*p, k)).collect(),
    };
    let mut worst: f64 = 0.0;
    for u in &basis {
        let lhs = pushforward(f, &apply_cstruct(c_src, u)?)?;
        let rhs = apply_cstruct(c_dst, &pushforward(f, u)?)?;
        worst = worst.max(lhs.sub(&rhs)?.coord_norm());
    }
    Ok(worst)
}

fn gram(m: &MetricId, b: &[Tangent]) -> Result<DMatrix<f64>> {
    let p = b[0].base();
    let g = metric_matrix(m, p)?;
    Ok(DMatrix::from_fn(b.len(), b.len(), |i, j| {
        crate::metric::bilinear(&g, b[i].components(), b[j].components())
    }))
}

/// Frobenius norm of `Gram_dst(f_* e_i, f_* e_j) - Gram_src(e_i, e_j)` on the
/// basis `e` of `dist` at `p`.
pub fn pcr_kahler_residual(
    f: &MapId,
    m_src: &MetricId,
    m_dst: &MetricId,
    dist: DistributionId,
    p: &Point,
) -> Result<f64> {
    let basis = distribution_basis(dist, p)?;
    let src = gram(m_src, &basis)?;
    if src.determinant().abs() < 1e-14 {
        return Err(GeomError::DegeneratePlane { gram: src.determinant() });
    }
    let pushed = [pushforward(f, &basis[0])?, pushforward(f, &basis[1])?];
    let dst = gram(m_dst, &pushed)?;
    Ok((dst - src).norm())
}

/// How far `f_*` of the basis of `dist_src` is from lying in `dist_dst` at
/// the image: the largest Euclidean residual of a least-squares projection.
pub fn pcr_residual(f: &MapId, dist_src: DistributionId, dist_dst: DistributionId, p: &Point) -> Result<f64> {
    let basis = distribution_basis(dist_src, p)?;
    let q = f.apply(p)?;
    let target = distribution_basis(dist_dst, &q)?;
    let a = DMatrix::from_columns(&[target[0].vector(), target[1].vector()]);
    let ata = a.transpose() * &a;
    let inv = ata
        .try_inverse()
        .ok_or_else(|| GeomError::Singular("target distribution".into()))?;
    let mut worst: f64 = 0.0;
    for u in &basis {
        let w = pushforward(f, u)?.vector();
        let proj = &a * (&inv * (a.transpose() * &w));
        worst = worst.max((w - proj).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_heis() -> Vec<Point> {
        vec![
            Point::heisenberg(0.0, 0.0, 0.0),
            Point::heisenberg(1.2, -0.7, 2.5),
            Point::heisenberg(-2.1, 0.4, -1.3),
        ]
    }

    #[test]
    fn exact_jacobians_match_finite_differences() {
        let cfg = FdConfig::default();
        let cone = Point::cone(0.4, -1.2, 0.9, 1.6).unwrap();
        let h = Point::heisenberg(0.4, -1.2, 0.9);
        let cases = [
            (MapId::LeftTranslation { a: 0.3, b: -1.1, s: 2.0 }, h),
            (MapId::Rotation { theta: 0.7 }, h),
            (MapId::Dilation { delta: 1.7 }, h),
            (MapId::Conjugation, h),
            (MapId::IotaH, h),
            (MapId::Boundary, h),
            (MapId::Horospherical, cone),
            (MapId::Pcr, cone),
            (MapId::PcrInverse, cone),
            (MapId::PcrKahler, cone),
            (MapId::IotaU, Point::new(Manifold::HalfPlane, &[0.3, 1.2]).unwrap()),
            (MapId::IotaC, Point::new(Manifold::ComplexPlane, &[0.3, 1.2]).unwrap()),
            (MapId::IotaU3, Point::new(Manifold::HalfSpace, &[0.3, 1.2, 0.8]).unwrap()),
        ];
        for (f, p) in cases {
            let d = (f.jacobian(&p).unwrap() - f.fd_jacobian(&p, &cfg).unwrap()).norm();
            assert!(d < 1e-6, "{}: {d}", f.name());
        }
    }

    #[test]
    fn heisenberg_isometries() {
        let g = MetricId::Sasaki;
        for p in sample_heis() {
            for f in [
                MapId::LeftTranslation { a: 0.5, b: -2.0, s: 1.5 },
                MapId::Rotation { theta: 1.1 },
                MapId::Conjugation,
            ] {
                assert!(isometry_residual(&f, &g, &g, &p).unwrap() < 1e-10, "{}", f.name());
            }
            assert!(isometry_residual(&MapId::Dilation { delta: 2.0 }, &g, &g, &p).unwrap() > 0.1);
        }
    }

    #[test]
    fn group_laws() {
        let p = Point::heisenberg(0.9, -0.3, 1.7);
        let (a, b, s) = (0.5, -1.0, 0.25);
        let (a2, b2, s2) = (-0.75, 2.0, 1.0);
        let first = MapId::LeftTranslation { a: a2, b: b2, s: s2 };
        let second = MapId::LeftTranslation { a, b, s };
        let composed = second.apply(&first.apply(&p).unwrap()).unwrap();
        // (a + ib, s) * (a2 + ib2, s2)
        let prod = MapId::LeftTranslation {
            a: a + a2,
            b: b + b2,
            s: s + s2 + 2.0 * (b * a2 - a * b2),
        };
        let direct = prod.apply(&p).unwrap();
        for (x, y) in composed.coords().iter().zip(direct.coords()) {
            assert!((x - y).abs() < 1e-12);
        }
        let j2 = MapId::Conjugation.apply(&MapId::Conjugation.apply(&p).unwrap()).unwrap();
        assert_eq!(j2, p);
    }

    #[test]
    fn pullbacks_of_embeddings() {
        let p = Point::heisenberg(0.4, 1.3, -0.2);
        let d = pullback_metric(&MapId::IotaH, &MetricId::Cone, &p).unwrap()
            - metric_matrix(&MetricId::Sasaki, &p).unwrap();
        assert!(d.norm() < 1e-14);
        let (x, y) = (0.7, -0.4);
        let c = Point::new(Manifold::ComplexPlane, &[x, y]).unwrap();
        let g = pullback_metric(&MapId::IotaC, &MetricId::Cone, &c).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[1.0 + y * y, -x * y, -x * y, 1.0 + x * x]);
        assert!((g - expect).norm() < 1e-14);
        let u = Point::new(Manifold::HalfPlane, &[0.3, 2.0]).unwrap();
        assert!(isometry_residual(&MapId::IotaU, &MetricId::SubHalfPlane, &MetricId::Cone, &u).unwrap() < 1e-14);
        let s = Point::new(Manifold::HalfSpace, &[0.3, 2.0, 1.5]).unwrap();
        assert!(isometry_residual(&MapId::IotaU3, &MetricId::SubHalfSpace, &MetricId::Cone, &s).unwrap() < 1e-13);
    }

    #[test]
    fn horospherical_map_is_a_holomorphic_isometry() {
        let p = Point::cone(1.1, -0.6, 2.3, 0.7).unwrap();
        let f = MapId::Horospherical;
        assert!(isometry_residual(&f, &MetricId::Prime, &MetricId::Bergman, &p).unwrap() < 1e-10);
        let res = holomorphy_residual(&f, ComplexStructureId::ICone, ComplexStructureId::JSiegel, &p, None).unwrap();
        assert!(res < 1e-12);
        let q = f.apply(&p).unwrap();
        assert!((crate::metric::rho(&q).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn boundary_map_lands_on_the_boundary() {
        for p in sample_heis() {
            let q = MapId::Boundary.apply(&p).unwrap();
            assert!(crate::manifold::rho_coords(q.coords()).abs() < 1e-12);
        }
        // h_*(Z) = -conj(z2) d/dz1 + d/dz2 at z = 1, t = 0
        let p = Point::heisenberg(1.0, 0.0, 0.0);
        let zr = pushforward(&MapId::Boundary, &eval_frame(FrameId::ZReal, &p).unwrap()).unwrap();
        let zi = pushforward(&MapId::Boundary, &eval_frame(FrameId::ZImag, &p).unwrap()).unwrap();
        assert_eq!(zr.base().coords(), &[-0.5, 0.0, 1.0, 0.0]);
        // with z2 = 1: -d/dz1 + d/dz2; real part (-1/2, 0, 1/2, 0), imaginary
        // part (0, 1/2, 0, -1/2) since d/dz = (d/da - i d/db)/2
        assert!(zr.sub(&Tangent::new(*zr.base(), &[-0.5, 0.0, 0.5, 0.0]).unwrap()).unwrap().coord_norm() < 1e-15);
        assert!(zi.sub(&Tangent::new(*zi.base(), &[0.0, 0.5, 0.0, -0.5]).unwrap()).unwrap().coord_norm() < 1e-15);
    }

    #[test]
    fn pcr_map_pushforward_and_inverse() {
        let p = Point::cone(0.2, 0.3, -0.4, 4.0).unwrap();
        let v = pushforward(&MapId::Pcr, &Tangent::coordinate(p, 3)).unwrap();
        assert_eq!(v.base().coords(), &[0.2, 0.3, -0.4, 4.0]);
        assert_eq!(v.components(), &[0.0, 0.0, 0.0, 0.5]);
        let q = Point::cone(0.2, 0.3, -0.4, 2.7).unwrap();
        let back = MapId::PcrInverse.apply(&MapId::Pcr.apply(&q).unwrap()).unwrap();
        assert!((back.coords()[3] - 2.7).abs() < 1e-12);
    }

    #[test]
    fn pcr_map_structures() {
        let p = Point::cone(0.0, 0.0, 0.0, 1.0).unwrap();
        let restricted = holomorphy_residual(
            &MapId::Pcr,
            ComplexStructureId::JCone,
            ComplexStructureId::ICone,
            &p,
            Some(DistributionId::HHorizontal),
        )
        .unwrap();
        assert!(restricted < 1e-10);
        let full = holomorphy_residual(&MapId::Pcr, ComplexStructureId::JCone, ComplexStructureId::ICone, &p, None).unwrap();
        assert!((full - 3.0).abs() < 1e-12, "{full}");
        let pcr = pcr_residual(&MapId::Pcr, DistributionId::HHorizontal, DistributionId::HHorizontal, &p).unwrap();
        assert!(pcr < 1e-12);
    }

    #[test]
    fn horizontal_metric_of_pcr_maps() {
        let q = Point::cone(0.5, -1.5, 2.0, 2.5).unwrap();
        let r: f64 = 2.5;
        let literal = pcr_kahler_residual(&MapId::Pcr, &MetricId::Cone, &MetricId::Prime, DistributionId::HHorizontal, &q).unwrap();
        let expect = 2f64.sqrt() * (r * r - 2.0 / r.sqrt()).abs();
        assert!((literal - expect).abs() < 1e-12, "{literal} vs {expect}");
        let corrected = pcr_kahler_residual(&MapId::PcrKahler, &MetricId::Cone, &MetricId::Prime, DistributionId::HHorizontal, &q).unwrap();
        assert!(corrected < 1e-10);
        let h = Point::heisenberg(0.5, -1.5, 2.0);
        let emb = pcr_kahler_residual(&MapId::IotaH, &MetricId::Sasaki, &MetricId::Cone, DistributionId::HHorizontal, &h).unwrap();
        assert!(emb < 1e-12);
    }

    #[test]
    fn siegel_distribution_matches_pushforward() {
        let p = Point::cone(0.8, 0.1, -0.5, 1.3).unwrap();
        let q = MapId::Horospherical.apply(&p).unwrap();
        let b = distribution_basis(DistributionId::HPrimeSiegel, &q).unwrap();
        let x = pushforward(&MapId::Horospherical, &eval_frame(FrameId::X, &p).unwrap()).unwrap();
        assert!((b[0].vector() - x.vector()).norm() < 1e-12);
        let r = pcr_residual(&MapId::Horospherical, DistributionId::HHorizontal, DistributionId::HPrimeSiegel, &p).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            MapId::Pcr.apply(&Point::heisenberg(0.0, 0.0, 0.0)),
            Err(GeomError::ManifoldMismatch { .. })
        ));
    }
}
