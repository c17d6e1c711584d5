//! The metric family, evaluated as symmetric matrices in the coordinate basis.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::manifold::{omega_coeffs, rho_coords, Manifold, Point, Tangent, DOMAIN_GUARD};

/// Power-law profile `a(r) = a_coef * r^a_exp`, `b(r) = b_coef * r^b_exp` for
/// the Hermitian metrics `(dx^2 + dy^2)/a^2 + (omega^2 + dr^2)/b^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbProfile {
    pub a_coef: f64,
    pub a_exp: f64,
    pub b_coef: f64,
    pub b_exp: f64,
}

impl AbProfile {
    pub fn power(a_coef: f64, a_exp: f64, b_coef: f64, b_exp: f64) -> Result<Self> {
        if !(a_coef > 0.0 && b_coef > 0.0) {
            return Err(GeomError::InvalidParameters(
                "a and b must be positive".to_string(),
            ));
        }
        Ok(Self {
            a_coef,
            a_exp,
            b_coef,
            b_exp,
        })
    }

    /// The Kähler solutions `b = C r`, `a = sqrt(C b)/2 = C sqrt(r)/2`.
    pub fn kahler(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(GeomError::InvalidParameters(format!(
                "family parameter must be positive, got {c}"
            )));
        }
        Self::power(c / 2.0, 0.5, c, 1.0)
    }

    /// `a = sqrt(r)/2`, `b = r`.
    pub fn prime() -> Self {
        Self::kahler(1.0).unwrap()
    }

    pub fn a(&self, r: f64) -> f64 {
        self.a_coef * r.powf(self.a_exp)
    }

    pub fn a_dot(&self, r: f64) -> f64 {
        if self.a_exp == 0.0 {
            0.0
        } else {
            self.a_coef * self.a_exp * r.powf(self.a_exp - 1.0)
        }
    }

    pub fn b(&self, r: f64) -> f64 {
        self.b_coef * r.powf(self.b_exp)
    }

    pub fn b_dot(&self, r: f64) -> f64 {
        if self.b_exp == 0.0 {
            0.0
        } else {
            self.b_coef * self.b_exp * r.powf(self.b_exp - 1.0)
        }
    }

    /// Coefficient of `dx ^ dy ^ dr` in `d Omega_{a,b}`: `4/b^2 - 2 a'/a^3`.
    pub fn closedness_coefficient(&self, r: f64) -> f64 {
        let a = self.a(r);
        let b = self.b(r);
        4.0 / (b * b) - 2.0 * self.a_dot(r) / (a * a * a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricId {
    /// `dx^2 + dy^2 + L omega^2` on the Heisenberg group.
    Approximant { l: f64 },
    /// The contact metric, `L = 1/4`.
    Sasaki,
    /// `dr^2 + r^2 g` on the cone chart.
    Cone,
    /// `(dx^2 + dy^2)/a^2 + (omega^2 + dr^2)/b^2` on the cone chart.
    Ab(AbProfile),
    /// `g_{a,b}` with `a = sqrt(r)/2`, `b = r`.
    Prime,
    /// Bergman metric of the Siegel domain.
    Bergman,
    /// `dr^2 + r^2 dt^2` on the half-plane.
    SubHalfPlane,
    /// Metric induced on the complex plane `t = 0, r = 1` of the cone.
    SubComplexPlane,
    /// Metric induced on the half-space `t = 0` of the cone.
    SubHalfSpace,
    /// Identity matrix; used as a flat reference.
    Flat(Manifold),
}

impl MetricId {
    pub fn manifold(&self) -> Manifold {
        match self {
            MetricId::Approximant { .. } | MetricId::Sasaki => Manifold::Heisenberg,
            MetricId::Cone | MetricId::Ab(_) | MetricId::Prime => Manifold::Cone,
            MetricId::Bergman => Manifold::Siegel,
            MetricId::SubHalfPlane => Manifold::HalfPlane,
            MetricId::SubComplexPlane => Manifold::ComplexPlane,
            MetricId::SubHalfSpace => Manifold::HalfSpace,
            MetricId::Flat(m) => *m,
        }
    }

    pub fn name(&self) -> String {
        match self {
            MetricId::Approximant { l } => format!("g_L(L={l})"),
            MetricId::Sasaki => "sasaki".to_string(),
            MetricId::Cone => "cone".to_string(),
            MetricId::Ab(p) => format!(
                "g_ab(a={}r^{}, b={}r^{})",
                p.a_coef, p.a_exp, p.b_coef, p.b_exp
            ),
            MetricId::Prime => "gprime".to_string(),
            MetricId::Bergman => "bergman".to_string(),
            MetricId::SubHalfPlane => "sub_U".to_string(),
            MetricId::SubComplexPlane => "sub_C".to_string(),
            MetricId::SubHalfSpace => "sub_U3".to_string(),
            MetricId::Flat(m) => format!("flat({m})"),
        }
    }
}

fn heisenberg_block(l: f64, x: f64, y: f64) -> DMatrix<f64> {
    let w = omega_coeffs(x, y);
    DMatrix::from_fn(3, 3, |i, j| {
        let id = if i == j && i < 2 { 1.0 } else { 0.0 };
        id + l * w[i] * w[j]
    })
}

fn complex_plane_block(x: f64, y: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0 + y * y, -x * y, -x * y, 1.0 + x * x])
}

/// Symmetric matrix of `m` at `p` in the coordinate basis.
pub fn metric_matrix(m: &MetricId, p: &Point) -> Result<DMatrix<f64>> {
    p.expect(m.manifold(), &m.name())?;
    let c = p.coords();
    if !(p.manifold().boundary_function(c) > DOMAIN_GUARD) {
        return Err(GeomError::OutsideDomain {
            manifold: p.manifold(),
            coords: c.to_vec(),
            guard: DOMAIN_GUARD,
        });
    }
    let g = match m {
        MetricId::Approximant { l } => heisenberg_block(*l, c[0], c[1]),
        MetricId::Sasaki => heisenberg_block(0.25, c[0], c[1]),
        MetricId::Cone => {
            let r = c[3];
            let mut g = DMatrix::zeros(4, 4);
            g.view_mut((0, 0), (3, 3))
                .copy_from(&(heisenberg_block(0.25, c[0], c[1]) * (r * r)));
            g[(3, 3)] = 1.0;
            g
        }
        MetricId::Ab(profile) => ab_matrix(profile, c),
        MetricId::Prime => ab_matrix(&AbProfile::prime(), c),
        MetricId::Bergman => bergman_matrix(c),
        MetricId::SubHalfPlane => {
            let r = c[1];
            DMatrix::from_diagonal(&DVector::from_column_slice(&[r * r, 1.0]))
        }
        MetricId::SubComplexPlane => complex_plane_block(c[0], c[1]),
        MetricId::SubHalfSpace => {
            let r = c[2];
            let mut g = DMatrix::zeros(3, 3);
            g.view_mut((0, 0), (2, 2))
                .copy_from(&(complex_plane_block(c[0], c[1]) * (r * r)));
            g[(2, 2)] = 1.0;
            g
        }
        MetricId::Flat(_) => DMatrix::identity(c.len(), c.len()),
    };
    Ok(g)
}

fn ab_matrix(profile: &AbProfile, c: &[f64]) -> DMatrix<f64> {
    let r = c[3];
    let ia2 = 1.0 / profile.a(r).powi(2);
    let ib2 = 1.0 / profile.b(r).powi(2);
    let w = omega_coeffs(c[0], c[1]);
    let w4 = [w[0], w[1], w[2], 0.0];
    let mut g = DMatrix::from_fn(4, 4, |i, j| ib2 * w4[i] * w4[j]);
    g[(0, 0)] += ia2;
    g[(1, 1)] += ia2;
    g[(3, 3)] += ib2;
    g
}

/// Real coefficient rows of `dz1 + conj(z2) dz2 = alpha + i beta`.
pub(crate) fn bergman_alpha_beta(c: &[f64]) -> ([f64; 4], [f64; 4]) {
    let (a2, b2) = (c[2], c[3]);
    ([1.0, 0.0, a2, b2], [0.0, 1.0, -b2, a2])
}

fn bergman_matrix(c: &[f64]) -> DMatrix<f64> {
    let rho = rho_coords(c);
    let (alpha, beta) = bergman_alpha_beta(c);
    let mut g = DMatrix::from_fn(4, 4, |i, j| {
        4.0 / (rho * rho) * (alpha[i] * alpha[j] + beta[i] * beta[j])
    });
    g[(2, 2)] += 4.0 / rho;
    g[(3, 3)] += 4.0 / rho;
    g
}

/// `u^T G v`.
pub fn inner(m: &MetricId, p: &Point, u: &Tangent, v: &Tangent) -> Result<f64> {
    u.check_base(p)?;
    v.check_base(p)?;
    let g = metric_matrix(m, p)?;
    Ok(bilinear(&g, u.components(), v.components()))
}

pub fn norm(m: &MetricId, u: &Tangent) -> Result<f64> {
    Ok(inner(m, u.base(), u, u)?.sqrt())
}

pub(crate) fn bilinear(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let mut acc = 0.0;
    for i in 0..n {
        if u[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            acc += u[i] * g[(i, j)] * v[j];
        }
    }
    acc
}

/// Defining function of the Siegel domain, `-2 Re z1 - |z2|^2`.
pub fn rho(p: &Point) -> Result<f64> {
    p.expect(Manifold::Siegel, "rho")?;
    Ok(rho_coords(p.coords()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{eval_frame, FrameId};

    #[test]
    fn sasaki_at_origin() {
        let g = metric_matrix(&MetricId::Sasaki, &Point::heisenberg(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(g, DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 1.0, 0.25])));
    }

    #[test]
    fn approximant_quarter_is_sasaki() {
        let p = Point::heisenberg(1.5, -0.25, 3.0);
        let a = metric_matrix(&MetricId::Approximant { l: 0.25 }, &p).unwrap();
        let b = metric_matrix(&MetricId::Sasaki, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prime_is_kahler_family_one() {
        let p = Point::cone(0.3, 1.2, -2.0, 2.7).unwrap();
        let a = metric_matrix(&MetricId::Prime, &p).unwrap();
        let b = metric_matrix(&MetricId::Ab(AbProfile::kahler(1.0).unwrap()), &p).unwrap();
        assert_eq!(a, b);
        let r: f64 = 2.7;
        // 1/a^2 + omega_x^2/b^2 with omega_x = -2y
        assert!((a[(0, 0)] - (4.0 / r + 4.0 * 1.2 * 1.2 / (r * r))).abs() < 1e-14);
    }

    #[test]
    fn induced_plane_metrics() {
        let (x, y) = (0.7, -1.1);
        let p = Point::new(Manifold::ComplexPlane, &[x, y]).unwrap();
        let g = metric_matrix(&MetricId::SubComplexPlane, &p).unwrap();
        assert_eq!(g, DMatrix::from_row_slice(2, 2, &[1.0 + y * y, -x * y, -x * y, 1.0 + x * x]));
        let u = Point::new(Manifold::HalfPlane, &[0.4, 3.0]).unwrap();
        let g = metric_matrix(&MetricId::SubHalfPlane, &u).unwrap();
        assert_eq!(g, DMatrix::from_diagonal(&DVector::from_column_slice(&[9.0, 1.0])));
    }

    #[test]
    fn frames_orthonormal() {
        let p = Point::heisenberg(0.5, 2.0, -1.0);
        let x = eval_frame(FrameId::X, &p).unwrap();
        let y = eval_frame(FrameId::Y, &p).unwrap();
        assert_eq!(inner(&MetricId::Sasaki, &p, &x, &y).unwrap(), 0.0);
        let q = Point::cone(0.5, 2.0, -1.0, 3.0).unwrap();
        let xr = eval_frame(FrameId::Xr, &q).unwrap();
        assert!((inner(&MetricId::Cone, &q, &xr, &xr).unwrap() - 1.0).abs() < 1e-14);
        let z = Tangent::zero(q);
        assert_eq!(inner(&MetricId::Cone, &q, &xr, &z).unwrap(), 0.0);
    }

    #[test]
    fn inner_rejects_foreign_base() {
        let p = Point::heisenberg(0.0, 0.0, 0.0);
        let q = Point::heisenberg(1.0, 0.0, 0.0);
        let u = eval_frame(FrameId::X, &q).unwrap();
        assert_eq!(
            inner(&MetricId::Sasaki, &p, &u, &u),
            Err(GeomError::BaseMismatch)
        );
    }

    #[test]
    fn rho_values() {
        let p = Point::new(Manifold::Siegel, &[-1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(rho(&p).unwrap(), 2.0);
        let b = Point::on_closure(Manifold::Siegel, &[-0.5, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(rho(&b).unwrap(), 0.0);
    }

    #[test]
    fn guard_rejects_cone_near_apex() {
        let p = Point::on_closure(Manifold::Cone, &[0.0, 0.0, 0.0, 1e-12]).unwrap();
        assert!(matches!(
            metric_matrix(&MetricId::Cone, &p),
            Err(GeomError::OutsideDomain { .. })
        ));
    }
}
