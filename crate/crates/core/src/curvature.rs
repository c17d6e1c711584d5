//! Levi-Civita connection and curvature from finite differences of the metric.
//!
//! Christoffel symbols come from first derivatives of `g`. Their derivatives
//! are assembled analytically from first and second derivatives of `g`, so the
//! curvature never differentiates a finite-difference Christoffel table.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::fd::{self, FdConfig};
use crate::manifold::{Point, Tangent};
use crate::maps::MapId;
use crate::metric::{bilinear, metric_matrix, MetricId};

/// Sign convention for the curvature operator.
///
/// `DoCarmo`: `R(U,V)W = ∇_V ∇_U W - ∇_U ∇_V W + ∇_[U,V] W`, so that
/// `K(U,V) = g(R(U,V)U, V)` for orthonormal `U, V`. `Standard` is its negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurvatureConvention {
    #[default]
    DoCarmo,
    Standard,
}

fn flat_metric(m: &MetricId) -> impl Fn(&Point) -> Result<Vec<f64>> + '_ {
    move |p| metric_matrix(m, p).map(|g| g.as_slice().to_vec())
}

fn to_matrix(n: usize, v: Vec<f64>) -> DMatrix<f64> {
    DMatrix::from_vec(n, n, v)
}

fn inverse(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    g.clone()
        .try_inverse()
        .ok_or_else(|| GeomError::Singular("metric matrix".to_string()))
}

/// `Γ^k_ij`, stored as `gamma[(k * n + i) * n + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelTable {
    pub base: Point,
    pub metric: MetricId,
    n: usize,
    gamma: Vec<f64>,
}

impl ChristoffelTable {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[(k * self.n + i) * self.n + j]
    }

    /// `Γ(u, v)^k = Γ^k_ij u^i v^j`.
    pub fn contract(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                for i in 0..n {
                    if u[i] == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        acc += self.get(k, i, j) * u[i] * v[j];
                    }
                }
                acc
            })
            .collect()
    }
}

fn christoffel_from(n: usize, ginv: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Vec<f64> {
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                gamma[(k * n + i) * n + j] = 0.5 * acc;
                gamma[(k * n + j) * n + i] = 0.5 * acc;
            }
        }
    }
    gamma
}

/// Christoffel symbols of `m` at `p`.
pub fn christoffel(m: &MetricId, p: &Point, cfg: &FdConfig) -> Result<ChristoffelTable> {
    let n = p.dim();
    let g = metric_matrix(m, p)?;
    let ginv = inverse(&g)?;
    let dg: Vec<DMatrix<f64>> = fd::gradient(&flat_metric(m), p, cfg)?
        .into_iter()
        .map(|v| to_matrix(n, v))
        .collect();
    Ok(ChristoffelTable {
        base: *p,
        metric: *m,
        n,
        gamma: christoffel_from(n, &ginv, &dg),
    })
}

/// Riemann tensor at a point, stored in the standard convention as
/// `R^a_{bcd}` with `R(e_c, e_d) e_b = R^a_{bcd} e_a`.
#[derive(Debug, Clone)]
pub struct CurvatureTensor {
    pub base: Point,
    pub metric: MetricId,
    n: usize,
    g: DMatrix<f64>,
    riem: Vec<f64>,
}

impl CurvatureTensor {
    pub fn at(m: &MetricId, p: &Point, cfg: &FdConfig) -> Result<Self> {
        let n = p.dim();
        let f = flat_metric(m);
        let g = metric_matrix(m, p)?;
        let ginv = inverse(&g)?;
        let dg: Vec<DMatrix<f64>> = fd::gradient(&f, p, cfg)?
            .into_iter()
            .map(|v| to_matrix(n, v))
            .collect();
        // d2g[a][b] = d_a d_b g
        let mut d2g = vec![vec![DMatrix::zeros(n, n); n]; n];
        for a in 0..n {
            for b in a..n {
                let h = to_matrix(n, fd::second_derivative(&f, p, a, b, cfg)?);
                d2g[b][a] = h.clone();
                d2g[a][b] = h;
            }
        }
        let gamma = christoffel_from(n, &ginv, &dg);
        let gam = |k: usize, i: usize, j: usize| gamma[(k * n + i) * n + j];

        // d_m Γ^k_ij
        let mut dgamma = vec![0.0; n * n * n * n];
        for mm in 0..n {
            let dginv = -(&ginv * &dg[mm] * &ginv);
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = 0.0;
                        for l in 0..n {
                            let a = dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)];
                            let da = d2g[mm][i][(j, l)] + d2g[mm][j][(i, l)] - d2g[mm][l][(i, j)];
                            acc += dginv[(k, l)] * a + ginv[(k, l)] * da;
                        }
                        dgamma[((mm * n + k) * n + i) * n + j] = 0.5 * acc;
                    }
                }
            }
        }
        let dgam = |mm: usize, k: usize, i: usize, j: usize| dgamma[((mm * n + k) * n + i) * n + j];

        let mut riem = vec![0.0; n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut v = dgam(c, a, d, b) - dgam(d, a, c, b);
                        for e in 0..n {
                            v += gam(a, c, e) * gam(e, d, b) - gam(a, d, e) * gam(e, c, b);
                        }
                        riem[((a * n + b) * n + c) * n + d] = v;
                    }
                }
            }
        }
        Ok(Self {
            base: *p,
            metric: *m,
            n,
            g,
            riem,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn metric_matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// Component `R^a_{bcd}` in the standard convention.
    pub fn component(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.n;
        self.riem[((a * n + b) * n + c) * n + d]
    }

    fn apply_raw(&self, u: &[f64], v: &[f64], w: &[f64], conv: CurvatureConvention) -> Vec<f64> {
        let n = self.n;
        let sign = match conv {
            CurvatureConvention::Standard => 1.0,
            CurvatureConvention::DoCarmo => -1.0,
        };
        (0..n)
            .map(|a| {
                let mut acc = 0.0;
                for b in 0..n {
                    if w[b] == 0.0 {
                        continue;
                    }
                    for c in 0..n {
                        if u[c] == 0.0 {
                            continue;
                        }
                        for d in 0..n {
                            acc += self.component(a, b, c, d) * w[b] * u[c] * v[d];
                        }
                    }
                }
                sign * acc
            })
            .collect()
    }

    /// `R(u, v) w` in the requested convention.
    pub fn apply(&self, u: &Tangent, v: &Tangent, w: &Tangent, conv: CurvatureConvention) -> Result<Tangent> {
        for t in [u, v, w] {
            t.check_base(&self.base)?;
        }
        let r = self.apply_raw(u.components(), v.components(), w.components(), conv);
        Tangent::new(self.base, &r)
    }

    /// `g(R(u,v)u, v) / (|u|^2 |v|^2 - g(u,v)^2)` in the do Carmo convention.
    pub fn sectional(&self, u: &Tangent, v: &Tangent) -> Result<f64> {
        u.check_base(&self.base)?;
        v.check_base(&self.base)?;
        let (uc, vc) = (u.components(), v.components());
        let gram = bilinear(&self.g, uc, uc) * bilinear(&self.g, vc, vc) - bilinear(&self.g, uc, vc).powi(2);
        if gram < 1e-12 {
            return Err(GeomError::DegeneratePlane { gram });
        }
        let r = self.apply_raw(uc, vc, uc, CurvatureConvention::DoCarmo);
        Ok(bilinear(&self.g, &r, vc) / gram)
    }

    /// Ricci tensor `Ric(v, w) = tr(u -> R(u, v) w)` (standard convention).
    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |b, d| (0..n).map(|a| self.component(a, b, a, d)).sum())
    }
}

/// `R(u, v) w` for the metric `m`.
pub fn riemann(
    m: &MetricId,
    p: &Point,
    u: &Tangent,
    v: &Tangent,
    w: &Tangent,
    conv: CurvatureConvention,
    cfg: &FdConfig,
) -> Result<Tangent> {
    CurvatureTensor::at(m, p, cfg)?.apply(u, v, w, conv)
}

/// Sectional curvature of the plane spanned by `u, v`.
pub fn sectional(m: &MetricId, p: &Point, u: &Tangent, v: &Tangent, cfg: &FdConfig) -> Result<f64> {
    CurvatureTensor::at(m, p, cfg)?.sectional(u, v)
}

#[derive(Debug, Clone)]
pub struct RicciReport {
    pub base: Point,
    pub ricci: DMatrix<f64>,
    pub g: DMatrix<f64>,
    /// `g^{ij} Ric_ij`.
    pub scalar: f64,
}

impl RicciReport {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// `Ric(u, u) / g(u, u)`, i.e. the sum of sectional curvatures of `u`
    /// against an orthonormal frame.
    pub fn in_direction(&self, u: &Tangent) -> Result<f64> {
        u.check_base(&self.base)?;
        let c = u.components();
        Ok(bilinear(&self.ricci, c, c) / bilinear(&self.g, c, c))
    }

    /// `Ric(u, u) / ((n - 1) g(u, u))`.
    pub fn in_direction_normalized(&self, u: &Tangent) -> Result<f64> {
        Ok(self.in_direction(u)? / (self.dim() as f64 - 1.0))
    }

    /// `scalar / (n (n - 1))`.
    pub fn scalar_normalized(&self) -> f64 {
        let n = self.dim() as f64;
        self.scalar / (n * (n - 1.0))
    }
}

pub fn ricci_and_scalar(m: &MetricId, p: &Point, cfg: &FdConfig) -> Result<RicciReport> {
    let t = CurvatureTensor::at(m, p, cfg)?;
    let ricci = t.ricci();
    let ginv = inverse(&t.g)?;
    let scalar = ginv.component_mul(&ricci).sum();
    Ok(RicciReport {
        base: *p,
        ricci,
        g: t.g.clone(),
        scalar,
    })
}

/// `∇_u V` for a vector field `V` given as a function of the point.
pub fn covariant_derivative<F>(m: &MetricId, u: &Tangent, field: &F, cfg: &FdConfig) -> Result<Tangent>
where
    F: Fn(&Point) -> Result<Tangent>,
{
    let p = *u.base();
    let n = p.dim();
    let flat = |q: &Point| field(q).map(|t| t.components().to_vec());
    let v = field(&p)?;
    let gamma = christoffel(m, &p, cfg)?;
    let mut out = gamma.contract(u.components(), v.components());
    for (i, ui) in u.components().iter().enumerate() {
        if *ui == 0.0 {
            continue;
        }
        let d = fd::derivative(&flat, &p, i, cfg)?;
        for k in 0..n {
            out[k] += ui * d[k];
        }
    }
    Tangent::new(p, &out)
}

/// Second fundamental form `B(u, v) = (∇_{ι_* u} ι_* v)^N` of one of the cone
/// embeddings, returned at `ι(p)` in the ambient coordinate basis.
pub fn second_fundamental_form(
    embedding: &MapId,
    p: &Point,
    u: &Tangent,
    v: &Tangent,
    cfg: &FdConfig,
) -> Result<Tangent> {
    if !embedding.is_cone_embedding() {
        return Err(GeomError::InvalidParameters(format!(
            "{} is not a submanifold embedding into the cone",
            embedding.name()
        )));
    }
    u.check_base(p)?;
    v.check_base(p)?;
    let ambient = MetricId::Cone;
    let q = embedding.apply(p)?;
    let jac = embedding.jacobian(p)?;
    let n = q.dim();
    let (uc, vc) = (u.vector(), v.vector());
    let du = &jac * &uc;
    let dv = &jac * &vc;

    // D^2 ι(u, v) = sum_i u^i (d_i J) v
    let jflat = |x: &Point| embedding.jacobian(x).map(|j| (j * &vc).as_slice().to_vec());
    let mut w = DVector::from_vec(christoffel(&ambient, &q, cfg)?.contract(du.as_slice(), dv.as_slice()));
    for (i, ui) in uc.iter().enumerate() {
        if *ui != 0.0 {
            let d = fd::derivative(&jflat, p, i, cfg)?;
            w += DVector::from_vec(d) * *ui;
        }
    }
    let g = metric_matrix(&ambient, &q)?;
    let gram = jac.transpose() * &g * &jac;
    let gram_inv = inverse(&gram)?;
    let tangential = &jac * (gram_inv * (jac.transpose() * (&g * &w)));
    let normal = w - tangential;
    debug_assert_eq!(normal.len(), n);
    Tangent::from_vector(q, &normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{eval_frame, FrameId, Manifold};

    fn cfg() -> FdConfig {
        FdConfig::default()
    }

    #[test]
    fn flat_metric_has_zero_christoffels_and_curvature() {
        let p = Point::cone(0.2, 0.1, -0.3, 1.7).unwrap();
        let m = MetricId::Flat(Manifold::Cone);
        let t = christoffel(&m, &p, &cfg()).unwrap();
        assert!(t.gamma.iter().all(|g| g.abs() < 1e-12));
        let r = ricci_and_scalar(&m, &p, &cfg()).unwrap();
        assert!(r.scalar.abs() < 1e-6);
    }

    #[test]
    fn half_plane_christoffels() {
        // g = diag(r^2, 1) in (t, r): Γ^r_tt = -r, Γ^t_tr = Γ^t_rt = 1/r.
        let r = 2.5;
        let p = Point::new(Manifold::HalfPlane, &[0.3, r]).unwrap();
        let t = christoffel(&MetricId::SubHalfPlane, &p, &cfg()).unwrap();
        assert!((t.get(1, 0, 0) + r).abs() < 1e-12);
        assert!((t.get(0, 0, 1) - 1.0 / r).abs() < 1e-12);
        assert!((t.get(0, 1, 0) - 1.0 / r).abs() < 1e-12);
        for (k, i, j) in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)] {
            assert!(t.get(k, i, j).abs() < 1e-12);
        }
    }

    #[test]
    fn sasaki_connection_in_frame() {
        // ∇_X Y = -T̃
        let p = Point::heisenberg(0.4, -0.9, 1.3);
        let x = eval_frame(FrameId::X, &p).unwrap();
        let d = covariant_derivative(&MetricId::Sasaki, &x, &|q: &Point| eval_frame(FrameId::Y, q), &cfg()).unwrap();
        let tt = eval_frame(FrameId::TTilde, &p).unwrap();
        assert!(d.add(&tt).unwrap().coord_norm() < 1e-9);
    }

    #[test]
    fn sasaki_r_xy_x() {
        let p = Point::heisenberg(0.4, -0.9, 1.3);
        let f = |id| eval_frame(id, &p).unwrap();
        let r = riemann(
            &MetricId::Sasaki,
            &p,
            &f(FrameId::X),
            &f(FrameId::Y),
            &f(FrameId::X),
            CurvatureConvention::DoCarmo,
            &cfg(),
        )
        .unwrap();
        let expect = f(FrameId::Y).scale(-3.0);
        assert!(r.sub(&expect).unwrap().coord_norm() < 1e-7);
        let rs = riemann(
            &MetricId::Sasaki,
            &p,
            &f(FrameId::X),
            &f(FrameId::Y),
            &f(FrameId::X),
            CurvatureConvention::Standard,
            &cfg(),
        )
        .unwrap();
        assert!(rs.add(&r).unwrap().coord_norm() < 1e-12);
    }

    #[test]
    fn cone_mixed_plane_vanishes() {
        let p = Point::cone(1.0, 0.5, 0.0, 1.5).unwrap();
        let f = |id| eval_frame(id, &p).unwrap();
        let r = riemann(
            &MetricId::Cone,
            &p,
            &f(FrameId::Xr),
            &f(FrameId::Tr),
            &f(FrameId::Xr),
            CurvatureConvention::DoCarmo,
            &cfg(),
        )
        .unwrap();
        assert!(r.coord_norm() < 1e-7);
        let u = f(FrameId::Yr);
        let z = riemann(&MetricId::Cone, &p, &u, &u, &f(FrameId::Dr), CurvatureConvention::DoCarmo, &cfg()).unwrap();
        assert_eq!(z.coord_norm(), 0.0);
    }

    #[test]
    fn sectional_values() {
        let p = Point::heisenberg(-1.0, 2.0, 0.5);
        let f = |id| eval_frame(id, &p).unwrap();
        let k = sectional(&MetricId::Sasaki, &p, &f(FrameId::X), &f(FrameId::Y), &cfg()).unwrap();
        assert!((k + 3.0).abs() < 1e-7);
        let k = sectional(&MetricId::Sasaki, &p, &f(FrameId::X), &f(FrameId::TTilde), &cfg()).unwrap();
        assert!((k - 1.0).abs() < 1e-7);

        let q = Point::cone(0.3, -0.2, 0.1, 2.0).unwrap();
        let g = |id| eval_frame(id, &q).unwrap();
        let k = sectional(&MetricId::Cone, &q, &g(FrameId::Xr), &g(FrameId::Yr), &cfg()).unwrap();
        assert!((k + 1.0).abs() < 1e-7);
        let k = sectional(&MetricId::Prime, &q, &g(FrameId::XPrime), &g(FrameId::YPrime), &cfg()).unwrap();
        assert!((k + 1.0).abs() < 1e-7);
    }

    #[test]
    fn degenerate_plane_rejected() {
        let p = Point::heisenberg(0.0, 0.0, 0.0);
        let x = eval_frame(FrameId::X, &p).unwrap();
        assert!(matches!(
            sectional(&MetricId::Sasaki, &p, &x, &x.scale(2.0), &cfg()),
            Err(GeomError::DegeneratePlane { .. })
        ));
    }

    #[test]
    fn cone_ricci_trace_and_normalized() {
        let p = Point::cone(0.6, -0.4, 2.0, 1.0).unwrap();
        let rep = ricci_and_scalar(&MetricId::Cone, &p, &cfg()).unwrap();
        let f = |id| eval_frame(id, &p).unwrap();
        assert!(rep.in_direction(&f(FrameId::Tr)).unwrap().abs() < 1e-7);
        assert!(rep.in_direction(&f(FrameId::Dr)).unwrap().abs() < 1e-7);
        assert!((rep.in_direction(&f(FrameId::Xr)).unwrap() + 4.0).abs() < 1e-7);
        assert!((rep.in_direction_normalized(&f(FrameId::Xr)).unwrap() + 4.0 / 3.0).abs() < 1e-7);
        assert!((rep.scalar + 8.0).abs() < 1e-6);
        assert!((rep.scalar_normalized() + 2.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn sff_of_heisenberg_slice() {
        let p = Point::heisenberg(0.7, 0.2, -1.0);
        let x = eval_frame(FrameId::X, &p).unwrap();
        let b = second_fundamental_form(&MapId::IotaH, &p, &x, &x, &cfg()).unwrap();
        assert!(b.sub(&Tangent::coordinate(*b.base(), 3).scale(-1.0)).unwrap().coord_norm() < 1e-9);
    }

    #[test]
    fn sff_of_half_plane_vanishes() {
        let p = Point::new(Manifold::HalfPlane, &[0.4, 1.7]).unwrap();
        let dr = Tangent::coordinate(p, 1);
        let dt = Tangent::coordinate(p, 0);
        for (u, v) in [(dr, dr), (dr, dt), (dt, dt)] {
            let b = second_fundamental_form(&MapId::IotaU, &p, &u, &v, &cfg()).unwrap();
            assert!(b.coord_norm() < 1e-9);
        }
    }

    #[test]
    fn sff_of_complex_plane_at_origin() {
        let p = Point::new(Manifold::ComplexPlane, &[0.0, 0.0]).unwrap();
        let dx = Tangent::coordinate(p, 0);
        let b = second_fundamental_form(&MapId::IotaC, &p, &dx, &dx, &cfg()).unwrap();
        let expect = eval_frame(FrameId::N2, b.base()).unwrap().scale(-1.0);
        assert!(b.sub(&expect).unwrap().coord_norm() < 1e-9);
    }
}
