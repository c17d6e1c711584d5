//! Manifolds, coordinate points, tangent vectors and the named frame fields.
//!
//! Every manifold is covered by a single global chart and all numerics work in
//! the coordinate basis of that chart:
//!
//! | manifold        | coordinates              |
//! |-----------------|--------------------------|
//! | Heisenberg      | `x, y, t`                |
//! | Cone            | `x, y, t, r`             |
//! | Siegel          | `Re z1, Im z1, Re z2, Im z2` |
//! | HalfPlane (U)   | `t, r`                   |
//! | ComplexPlane    | `x, y`                   |
//! | HalfSpace (U3)  | `x, y, r`                |
//!
//! The cone chart is shared by the Riemannian cone over the Heisenberg group
//! and by the product `H x R>0` carrying the Hermitian metrics `g_{a,b}`.

use std::fmt;

use nalgebra::DVector;

use crate::error::{GeomError, Result};
use crate::metric::MetricId;

/// Points closer than this to `r = 0` or `rho = 0` are rejected.
pub const DOMAIN_GUARD: f64 = 1e-9;

pub const MAX_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Manifold {
    Heisenberg,
    Cone,
    Siegel,
    HalfPlane,
    ComplexPlane,
    HalfSpace,
}

impl Manifold {
    pub fn dim(self) -> usize {
        match self {
            Manifold::Heisenberg => 3,
            Manifold::Cone => 4,
            Manifold::Siegel => 4,
            Manifold::HalfPlane => 2,
            Manifold::ComplexPlane => 2,
            Manifold::HalfSpace => 3,
        }
    }

    pub fn coord_names(self) -> &'static [&'static str] {
        match self {
            Manifold::Heisenberg => &["x", "y", "t"],
            Manifold::Cone => &["x", "y", "t", "r"],
            Manifold::Siegel => &["re_z1", "im_z1", "re_z2", "im_z2"],
            Manifold::HalfPlane => &["t", "r"],
            Manifold::ComplexPlane => &["x", "y"],
            Manifold::HalfSpace => &["x", "y", "r"],
        }
    }

    /// Index of the radial coordinate, for manifolds bounded by `r > 0`.
    pub fn radial_index(self) -> Option<usize> {
        match self {
            Manifold::Cone => Some(3),
            Manifold::HalfPlane => Some(1),
            Manifold::HalfSpace => Some(2),
            _ => None,
        }
    }

    /// Signed distance-like quantity that must stay positive: `r` on the
    /// radial manifolds, `rho` on the Siegel domain, `+inf` elsewhere.
    pub fn boundary_function(self, coords: &[f64]) -> f64 {
        if let Some(i) = self.radial_index() {
            return coords[i];
        }
        match self {
            Manifold::Siegel => rho_coords(coords),
            _ => f64::INFINITY,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Manifold::Heisenberg => "H",
            Manifold::Cone => "cone",
            Manifold::Siegel => "siegel",
            Manifold::HalfPlane => "U",
            Manifold::ComplexPlane => "C",
            Manifold::HalfSpace => "U3",
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

pub(crate) fn rho_coords(c: &[f64]) -> f64 {
    -2.0 * c[0] - c[2] * c[2] - c[3] * c[3]
}

/// A coordinate point tagged with its manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    manifold: Manifold,
    coords: [f64; MAX_DIM],
}

impl Point {
    /// Builds a point, rejecting `r <= DOMAIN_GUARD` and `rho <= DOMAIN_GUARD`.
    pub fn new(manifold: Manifold, coords: &[f64]) -> Result<Self> {
        Self::with_guard(manifold, coords, DOMAIN_GUARD)
    }

    pub fn with_guard(manifold: Manifold, coords: &[f64], guard: f64) -> Result<Self> {
        let p = Self::on_closure(manifold, coords)?;
        let b = manifold.boundary_function(coords);
        if !(b > guard) || coords.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::OutsideDomain {
                manifold,
                coords: coords.to_vec(),
                guard,
            });
        }
        Ok(p)
    }

    /// Only checks the dimension. Used for points of the closure, e.g. the
    /// image of the Heisenberg group on the boundary of the Siegel domain.
    pub fn on_closure(manifold: Manifold, coords: &[f64]) -> Result<Self> {
        if coords.len() != manifold.dim() {
            return Err(GeomError::Dimension {
                manifold,
                expected: manifold.dim(),
                got: coords.len(),
            });
        }
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Self {
            manifold,
            coords: c,
        })
    }

    pub fn heisenberg(x: f64, y: f64, t: f64) -> Self {
        Self::on_closure(Manifold::Heisenberg, &[x, y, t]).unwrap()
    }

    pub fn cone(x: f64, y: f64, t: f64, r: f64) -> Result<Self> {
        Self::new(Manifold::Cone, &[x, y, t, r])
    }

    pub fn origin(manifold: Manifold) -> Result<Self> {
        let mut c = vec![0.0; manifold.dim()];
        match manifold {
            Manifold::Siegel => c[0] = -0.5,
            m => {
                if let Some(i) = m.radial_index() {
                    c[i] = 1.0;
                }
            }
        }
        Self::new(manifold, &c)
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.manifold.dim()]
    }

    pub fn vector(&self) -> DVector<f64> {
        DVector::from_column_slice(self.coords())
    }

    pub fn is_inside(&self, guard: f64) -> bool {
        self.manifold.boundary_function(self.coords()) > guard
    }

    /// Translated copy; the result is only dimension-checked.
    pub(crate) fn offset(&self, axis: usize, delta: f64) -> Self {
        let mut q = *self;
        q.coords[axis] += delta;
        q
    }

    pub(crate) fn expect(&self, manifold: Manifold, what: &str) -> Result<()> {
        if self.manifold != manifold {
            return Err(GeomError::ManifoldMismatch {
                what: what.to_string(),
                expected: manifold,
                got: self.manifold,
            });
        }
        Ok(())
    }

    /// Radial coordinate on manifolds that have one.
    pub fn r(&self) -> Option<f64> {
        self.manifold.radial_index().map(|i| self.coords[i])
    }
}

/// A tangent vector in the coordinate basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent {
    base: Point,
    comps: [f64; MAX_DIM],
}

impl Tangent {
    pub fn new(base: Point, components: &[f64]) -> Result<Self> {
        if components.len() != base.dim() {
            return Err(GeomError::Dimension {
                manifold: base.manifold(),
                expected: base.dim(),
                got: components.len(),
            });
        }
        let mut c = [0.0; MAX_DIM];
        c[..components.len()].copy_from_slice(components);
        Ok(Self { base, comps: c })
    }

    pub fn from_vector(base: Point, v: &DVector<f64>) -> Result<Self> {
        Self::new(base, v.as_slice())
    }

    pub fn zero(base: Point) -> Self {
        Self {
            base,
            comps: [0.0; MAX_DIM],
        }
    }

    /// Coordinate basis vector `d/dx^axis`.
    pub fn coordinate(base: Point, axis: usize) -> Self {
        let mut t = Self::zero(base);
        t.comps[axis] = 1.0;
        t
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn components(&self) -> &[f64] {
        &self.comps[..self.base.dim()]
    }

    pub fn vector(&self) -> DVector<f64> {
        DVector::from_column_slice(self.components())
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut t = *self;
        t.comps.iter_mut().for_each(|c| *c *= k);
        t
    }

    pub fn add(&self, other: &Tangent) -> Result<Self> {
        self.check_same_base(other)?;
        let mut t = *self;
        for (a, b) in t.comps.iter_mut().zip(other.comps.iter()) {
            *a += b;
        }
        Ok(t)
    }

    pub fn sub(&self, other: &Tangent) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Linear combination `sum_i w_i v_i` of vectors sharing a base point.
    pub fn combine(terms: &[(f64, Tangent)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| {
            GeomError::InvalidParameters("empty linear combination".to_string())
        })?;
        let mut acc = Tangent::zero(first.base);
        for (w, v) in terms {
            acc = acc.add(&v.scale(*w))?;
        }
        Ok(acc)
    }

    pub(crate) fn check_same_base(&self, other: &Tangent) -> Result<()> {
        if self.base != other.base {
            return Err(GeomError::BaseMismatch);
        }
        Ok(())
    }

    pub(crate) fn check_base(&self, p: &Point) -> Result<()> {
        if &self.base != p {
            return Err(GeomError::BaseMismatch);
        }
        Ok(())
    }

    /// Euclidean norm of the coordinate components.
    pub fn coord_norm(&self) -> f64 {
        self.components().iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Named vector fields.
///
/// `X, Y, T, TTilde` are the left-invariant Heisenberg fields; on the cone
/// chart they are lifted with zero `d/dr` component. `TTilde = 2T` is the Reeb
/// field of the contact form `omega/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameId {
    X,
    Y,
    T,
    TTilde,
    /// Real part of `Z = (X - iY)/2`.
    ZReal,
    /// Imaginary part of `Z = (X - iY)/2`.
    ZImag,
    Xr,
    Yr,
    Tr,
    Dr,
    XPrime,
    YPrime,
    TPrime,
    RPrime,
    /// First unit normal of the embedded complex plane `r = 1, t = 0`.
    N1,
    /// Second unit normal of the embedded complex plane, `d/dr`.
    N2,
    /// Unit normal of the embedded half-space `t = 0`.
    NHalfSpace,
    /// Reeb field of the contact-metric structure attached to a metric.
    Reeb(MetricId),
}

/// Coefficients `(omega_x, omega_y, omega_t)` of `omega = dt + 2x dy - 2y dx`.
pub fn omega_coeffs(x: f64, y: f64) -> [f64; 3] {
    [-2.0 * y, 2.0 * x, 1.0]
}

/// `omega(u)` for a tangent on the Heisenberg group or the cone chart.
pub fn omega_of(u: &Tangent) -> Result<f64> {
    let p = u.base();
    match p.manifold() {
        Manifold::Heisenberg | Manifold::Cone => {
            let c = p.coords();
            let w = omega_coeffs(c[0], c[1]);
            let v = u.components();
            Ok(w[0] * v[0] + w[1] * v[1] + w[2] * v[2])
        }
        m => Err(GeomError::ManifoldMismatch {
            what: "contact form".to_string(),
            expected: Manifold::Heisenberg,
            got: m,
        }),
    }
}

fn heis_field(p: &Point, frame: FrameId) -> Option<[f64; 3]> {
    let c = p.coords();
    let (x, y) = (c[0], c[1]);
    Some(match frame {
        FrameId::X => [1.0, 0.0, 2.0 * y],
        FrameId::Y => [0.0, 1.0, -2.0 * x],
        FrameId::T => [0.0, 0.0, 1.0],
        FrameId::TTilde => [0.0, 0.0, 2.0],
        FrameId::ZReal => [0.5, 0.0, y],
        FrameId::ZImag => [0.0, -0.5, x],
        _ => return None,
    })
}

/// Evaluates a named frame field at `p`.
pub fn eval_frame(frame: FrameId, p: &Point) -> Result<Tangent> {
    let mismatch = |expected: Manifold| GeomError::ManifoldMismatch {
        what: format!("frame {frame:?}"),
        expected,
        got: p.manifold(),
    };
    match p.manifold() {
        Manifold::Heisenberg => {
            if let FrameId::Reeb(m) = frame {
                return reeb_field(m, p);
            }
            let v = heis_field(p, frame).ok_or_else(|| mismatch(Manifold::Cone))?;
            Tangent::new(*p, &v)
        }
        Manifold::Cone => {
            let c = p.coords();
            let (x, y, r) = (c[0], c[1], c[3]);
            if let Some(v) = heis_field(p, frame) {
                return Tangent::new(*p, &[v[0], v[1], v[2], 0.0]);
            }
            let lift = |f: FrameId, k: f64| -> Result<Tangent> {
                let v = heis_field(p, f).unwrap();
                Tangent::new(*p, &[k * v[0], k * v[1], k * v[2], 0.0])
            };
            // g' frame: a = sqrt(r)/2, b = r
            let a = r.sqrt() / 2.0;
            let q = (1.0 + x * x + y * y).sqrt();
            match frame {
                FrameId::Xr => lift(FrameId::X, 1.0 / r),
                FrameId::Yr => lift(FrameId::Y, 1.0 / r),
                FrameId::Tr => lift(FrameId::TTilde, 1.0 / r),
                FrameId::Dr | FrameId::N2 => Tangent::new(*p, &[0.0, 0.0, 0.0, 1.0]),
                FrameId::XPrime => lift(FrameId::X, a),
                FrameId::YPrime => lift(FrameId::Y, a),
                FrameId::TPrime => lift(FrameId::T, r),
                FrameId::RPrime => Tangent::new(*p, &[0.0, 0.0, 0.0, r]),
                FrameId::N1 => Tangent::new(
                    *p,
                    &[y / q, -x / q, 2.0 * (1.0 + x * x + y * y) / q, 0.0],
                ),
                FrameId::NHalfSpace => Tangent::new(
                    *p,
                    &[
                        y / (q * r),
                        -x / (q * r),
                        2.0 * (1.0 + x * x + y * y) / (q * r),
                        0.0,
                    ],
                ),
                _ => Err(mismatch(Manifold::Heisenberg)),
            }
        }
        m => Err(GeomError::ManifoldMismatch {
            what: format!("frame {frame:?}"),
            expected: Manifold::Cone,
            got: m,
        }),
    }
}

fn reeb_field(m: MetricId, p: &Point) -> Result<Tangent> {
    match m {
        MetricId::Approximant { l } => Tangent::new(*p, &[0.0, 0.0, 1.0 / l.sqrt()]),
        MetricId::Sasaki => Tangent::new(*p, &[0.0, 0.0, 2.0]),
        other => Err(GeomError::InvalidParameters(format!(
            "no Reeb field attached to {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_at_origin_and_generic_point() {
        let o = Point::heisenberg(0.0, 0.0, 0.0);
        assert_eq!(eval_frame(FrameId::X, &o).unwrap().components(), &[1.0, 0.0, 0.0]);
        let p = Point::heisenberg(1.0, 2.0, 3.0);
        assert_eq!(eval_frame(FrameId::X, &p).unwrap().components(), &[1.0, 0.0, 4.0]);
    }

    #[test]
    fn tr_is_scaled_reeb() {
        let p = Point::cone(0.3, -0.7, 1.0, 2.0).unwrap();
        let t = eval_frame(FrameId::Tr, &p).unwrap();
        assert_eq!(t.components(), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn frame_manifold_mismatch() {
        let p = Point::heisenberg(0.0, 0.0, 0.0);
        assert!(matches!(
            eval_frame(FrameId::Dr, &p),
            Err(GeomError::ManifoldMismatch { .. })
        ));
        let s = Point::origin(Manifold::Siegel).unwrap();
        assert!(eval_frame(FrameId::X, &s).is_err());
    }

    #[test]
    fn domain_guards() {
        assert!(Point::cone(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(Point::cone(0.0, 0.0, 0.0, 1e-10).is_err());
        assert!(Point::new(Manifold::Siegel, &[-0.5, 0.0, 1.0, 0.0]).is_err());
        assert!(Point::new(Manifold::Siegel, &[-1.0, 0.0, 0.0, 0.0]).is_ok());
        assert!(matches!(
            Point::new(Manifold::Heisenberg, &[0.0, 0.0]),
            Err(GeomError::Dimension { .. })
        ));
    }

    #[test]
    fn x_and_y_span_kernel_of_omega() {
        let p = Point::heisenberg(0.4, -1.3, 2.0);
        for f in [FrameId::X, FrameId::Y] {
            assert_eq!(omega_of(&eval_frame(f, &p).unwrap()).unwrap(), 0.0);
        }
        assert_eq!(omega_of(&eval_frame(FrameId::TTilde, &p).unwrap()).unwrap(), 2.0);
    }
}
