//! Closed-form geodesics of the contact metric on the Heisenberg group and of
//! the cone metric.
//!
//! Both are evaluated in forms without removable singularities:
//! `phi1(u) = (e^u - 1)/u` and `S(v) = (v - sin v)/v^3` switch to their Taylor
//! series for small arguments, which covers `c -> 0` on the Heisenberg group
//! and `c3 -> 0` on the cone.

use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::manifold::{Manifold, Point, Tangent};

use super::GeodesicState;
use crate::metric::MetricId;

pub(crate) fn phi1(u: Complex64) -> Complex64 {
    if u.norm() < 0.1 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 2..=9 {
            term *= u / k as f64;
            acc += term;
        }
        acc
    } else {
        (u.exp() - 1.0) / u
    }
}

pub(crate) fn s_fn(v: f64) -> f64 {
    if v.abs() < 0.1 {
        let v2 = v * v;
        // 1/3! - v^2/5! + v^4/7! - v^6/9! + v^8/11!
        1.0 / 6.0 - v2 / 120.0 + v2 * v2 / 5040.0 - v2 * v2 * v2 / 362880.0 + v2.powi(4) / 39916800.0
    } else {
        (v - v.sin()) / (v * v * v)
    }
}

fn im_conj_mul(z0: Complex64, w: Complex64) -> f64 {
    (z0.conj() * w).im
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeisKind {
    /// `z = z0 + (a + ib) s`, `a^2 + b^2 = 1`.
    HorizontalLine { a: f64, b: f64 },
    /// `z = z0`, `t = t0 + 2cs`, `c = +-1`.
    Vertical { c: f64 },
    /// Initial velocity `Re k X + Im k Y + c T~`, `|k|^2 + c^2 = 1`.
    General { c: f64, k: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisGeodesicParams {
    pub kind: HeisKind,
    pub p0: Point,
}

impl HeisGeodesicParams {
    pub fn new(kind: HeisKind, p0: Point) -> Result<Self> {
        p0.expect(Manifold::Heisenberg, "Heisenberg geodesic")?;
        let bad = |what: String| Err(GeomError::InvalidParameters(what));
        match kind {
            HeisKind::HorizontalLine { a, b } if ((a * a + b * b) - 1.0).abs() > 1e-12 => {
                return bad(format!("a^2 + b^2 = {} != 1", a * a + b * b))
            }
            HeisKind::Vertical { c } if c.abs() != 1.0 => return bad(format!("vertical needs c = +-1, got {c}")),
            HeisKind::General { c, k } if (k.norm_sqr() + c * c - 1.0).abs() > 1e-12 || c.abs() > 1.0 => {
                return bad(format!("|k|^2 + c^2 = {} != 1", k.norm_sqr() + c * c))
            }
            _ => {}
        }
        Ok(Self { kind, p0 })
    }

    fn ck(&self) -> (f64, Complex64) {
        match self.kind {
            HeisKind::HorizontalLine { a, b } => (0.0, Complex64::new(a, b)),
            HeisKind::Vertical { c } => (c, Complex64::new(0.0, 0.0)),
            HeisKind::General { c, k } => (c, k),
        }
    }

    /// Initial unit vector for the contact metric.
    pub fn initial_state(&self) -> Result<GeodesicState> {
        let (c, k) = self.ck();
        let p = self.p0.coords();
        let (x, y) = (p[0], p[1]);
        let v = Tangent::new(self.p0, &[k.re, k.im, 2.0 * y * k.re - 2.0 * x * k.im + 2.0 * c])?;
        GeodesicState::new(&MetricId::Sasaki, v)
    }
}

/// Point at arclength `s`.
///
/// `z = z0 + k s phi1(-2ics)` and
/// `t = t0 + 2cs + 4 |k|^2 c s^3 S(2cs) - 2 Im(conj(z0) (z - z0))`.
pub fn closed_form_heis(params: &HeisGeodesicParams, s: f64) -> Point {
    let (c, k) = params.ck();
    let p = params.p0.coords();
    let z0 = Complex64::new(p[0], p[1]);
    let w = k * s * phi1(Complex64::new(0.0, -2.0 * c * s));
    let t = p[2] + 2.0 * c * s + 4.0 * k.norm_sqr() * c * s.powi(3) * s_fn(2.0 * c * s) - 2.0 * im_conj_mul(z0, w);
    Point::heisenberg(z0.re + w.re, z0.im + w.im, t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeKind {
    /// `(x0, y0, t0, s + r0)`.
    RadialLine,
    /// Motion in the `(t, r)` plane: `c3 = sqrt(r0^2 - c1^2)`, `C = 0`.
    VerticalPlane { c1: f64 },
    /// `|C|^2 = r0^2 - c1^2 - c3^2`; `C` fixes the horizontal direction.
    General { c1: f64, c3: f64, cc: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeGeodesicParams {
    pub kind: ConeKind,
    pub p0: Point,
}

impl ConeGeodesicParams {
    pub fn new(kind: ConeKind, p0: Point) -> Result<Self> {
        p0.expect(Manifold::Cone, "cone geodesic")?;
        let r0 = p0.coords()[3];
        match kind {
            ConeKind::VerticalPlane { c1 } if c1.abs() > r0 => {
                return Err(GeomError::InvalidParameters(format!("|c1| = {} exceeds r0 = {r0}", c1.abs())))
            }
            ConeKind::General { c1, c3, cc } => {
                let d = r0 * r0 - c1 * c1 - c3 * c3 - cc.norm_sqr();
                if d.abs() > 1e-12 * r0 * r0 {
                    return Err(GeomError::InvalidParameters(format!(
                        "|C|^2 + c1^2 + c3^2 must equal r0^2 (off by {d:e})"
                    )));
                }
            }
            _ => {}
        }
        Ok(Self { kind, p0 })
    }

    /// `(c1, c3, C)`.
    pub fn constants(&self) -> (f64, f64, Complex64) {
        let r0 = self.p0.coords()[3];
        match self.kind {
            ConeKind::RadialLine => (r0, 0.0, Complex64::new(0.0, 0.0)),
            ConeKind::VerticalPlane { c1 } => (c1, (r0 * r0 - c1 * c1).max(0.0).sqrt(), Complex64::new(0.0, 0.0)),
            ConeKind::General { c1, c3, cc } => (c1, c3, cc),
        }
    }

    pub fn initial_state(&self) -> Result<GeodesicState> {
        let (c1, c3, cc) = self.constants();
        let p = self.p0.coords();
        let (z0, r0) = (Complex64::new(p[0], p[1]), p[3]);
        let w = (r0 * r0 - c1 * c1).max(0.0).sqrt();
        let zd = if w < DEGENERATE {
            Complex64::new(0.0, 0.0)
        } else {
            cc * Complex64::from_polar(1.0, -2.0 * (c3 / w) * (c1 / w).atan()) / (r0 * r0)
        };
        let h = c3 / r0;
        let td = 2.0 * h / r0 - 2.0 * im_conj_mul(z0, zd);
        let v = Tangent::new(self.p0, &[zd.re, zd.im, td, c1 / r0])?;
        GeodesicState::new(&MetricId::Cone, v)
    }
}

/// Below this `sqrt(r0^2 - c1^2)` the geodesic is treated as radial.
pub const DEGENERATE: f64 = 1e-8;

/// Point at arclength `s`. With `w = sqrt(r0^2 - c1^2)`, `alpha = c3/w` and
/// `Theta = atan2(s w, r0^2 + c1 s)` (continuous in `s`, since `s w` keeps
/// its sign):
///
/// `r = sqrt(s^2 + 2 c1 s + r0^2)`,
/// `z = z0 + C e^{-2i alpha atan(c1/w)} (Theta/w) phi1(-2i alpha Theta)`,
/// `t = t0 + 2 c3 Theta/w + |C|^2 (4 c3 Theta^3/w^3) S(2 alpha Theta) - 2 Im(conj(z0)(z - z0))`.
pub fn closed_form_cone(params: &ConeGeodesicParams, s: f64) -> Result<Point> {
    let (c1, c3, cc) = params.constants();
    let p = params.p0.coords();
    let (z0, t0, r0) = (Complex64::new(p[0], p[1]), p[2], p[3]);
    let r2 = s * s + 2.0 * c1 * s + r0 * r0;
    let w = (r0 * r0 - c1 * c1).max(0.0).sqrt();
    if w < DEGENERATE {
        let r = r0 + c1.signum() * s;
        if !(r > 0.0) {
            return Err(GeomError::InvalidParameters(format!("radial geodesic leaves r > 0 at s = {s}")));
        }
        return Point::cone(p[0], p[1], t0, r);
    }
    if !(r2 > 0.0) {
        return Err(GeomError::InvalidParameters(format!("s = {s} outside the interval where r > 0")));
    }
    let alpha = c3 / w;
    let theta = (s * w).atan2(r0 * r0 + c1 * s);
    let rot = Complex64::from_polar(1.0, -2.0 * alpha * (c1 / w).atan());
    let dz = cc * rot * (theta / w) * phi1(Complex64::new(0.0, -2.0 * alpha * theta));
    let t = t0 + 2.0 * c3 * theta / w + cc.norm_sqr() * 4.0 * c3 * theta.powi(3) / w.powi(3) * s_fn(2.0 * alpha * theta)
        - 2.0 * im_conj_mul(z0, dz);
    Point::cone(z0.re + dz.re, z0.im + dz.im, t, r2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn heis_vertical_and_horizontal() {
        let o = Point::heisenberg(0.0, 0.0, 0.0);
        let v = HeisGeodesicParams::new(HeisKind::Vertical { c: 1.0 }, o).unwrap();
        // |d/dt|_g = 1/2, so unit speed along the fibre is t = 2cs
        assert_eq!(closed_form_heis(&v, 2.0).coords(), &[0.0, 0.0, 4.0]);
        let g = HeisGeodesicParams::new(HeisKind::General { c: 0.0, k: Complex64::new(1.0, 0.0) }, o).unwrap();
        let q = closed_form_heis(&g, 1.7);
        assert!((q.coords()[0] - 1.7).abs() < 1e-15 && q.coords()[1].abs() < 1e-15 && q.coords()[2].abs() < 1e-15);
        let p0 = Point::heisenberg(1.0, 2.0, 3.0);
        let h = HeisGeodesicParams::new(HeisKind::HorizontalLine { a: 0.6, b: 0.8 }, p0).unwrap();
        let q = closed_form_heis(&h, 2.0);
        // t = 2(a y0 - b x0) s + t0
        assert!((q.coords()[2] - (2.0 * (0.6 * 2.0 - 0.8 * 1.0) * 2.0 + 3.0)).abs() < 1e-14);
    }

    #[test]
    fn heis_general_oracle() {
        let o = Point::heisenberg(0.0, 0.0, 0.0);
        let g = HeisGeodesicParams::new(
            HeisKind::General { c: 0.5, k: Complex64::new(3f64.sqrt() / 2.0, 0.0) },
            o,
        )
        .unwrap();
        let q = closed_form_heis(&g, PI);
        assert!(q.coords()[0].abs() < 1e-14);
        assert!((q.coords()[1] + 3f64.sqrt()).abs() < 1e-14);
        assert!((q.coords()[2] - 2.5 * PI).abs() < 1e-14);
    }

    #[test]
    fn small_c_matches_direct_formula() {
        let p0 = Point::heisenberg(0.3, -0.2, 0.1);
        let c: f64 = 0.04;
        let k = Complex64::from_polar((1.0 - c * c).sqrt(), 0.7);
        let g = HeisGeodesicParams::new(HeisKind::General { c, k }, p0).unwrap();
        let s: f64 = 1.3;
        let z0 = Complex64::new(0.3, -0.2);
        let w = Complex64::i() * k * ((Complex64::new(0.0, -2.0 * c * s)).exp() - 1.0) / (2.0 * c);
        let t = 0.1 + 2.0 * c * s + k.norm_sqr() * (s / c - (2.0 * c * s).sin() / (2.0 * c * c)) - 2.0 * (z0.conj() * w).im;
        let q = closed_form_heis(&g, s);
        assert!((q.coords()[0] - (z0 + w).re).abs() < 1e-12);
        assert!((q.coords()[2] - t).abs() < 1e-10);
    }

    #[test]
    fn cone_oracle() {
        let p0 = Point::cone(0.0, 0.0, 0.0, 1.0).unwrap();
        let g = ConeGeodesicParams::new(
            ConeKind::General { c1: 0.0, c3: 0.5, cc: Complex64::new(0.75f64.sqrt(), 0.0) },
            p0,
        )
        .unwrap();
        let q = closed_form_cone(&g, 1.0).unwrap();
        let expect = [0.6123724356957945, -0.25365296808864407, 0.9028352367137997, std::f64::consts::SQRT_2];
        for (a, b) in q.coords().iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn cone_radial_and_vertical_plane() {
        let p0 = Point::cone(0.5, -1.0, 2.0, 1.5).unwrap();
        let r = ConeGeodesicParams::new(ConeKind::RadialLine, p0).unwrap();
        assert_eq!(closed_form_cone(&r, 0.7).unwrap().coords(), &[0.5, -1.0, 2.0, 2.2]);
        let c1: f64 = -0.6;
        let v = ConeGeodesicParams::new(ConeKind::VerticalPlane { c1 }, p0).unwrap();
        let s: f64 = 2.5;
        let q = closed_form_cone(&v, s).unwrap();
        let w = (1.5f64 * 1.5 - c1 * c1).sqrt();
        // denominator r0^2 + c1 s < 0 here: the branch continues past pi/2
        let t = 2.0 * (s * w).atan2(1.5 * 1.5 + c1 * s) + 2.0;
        assert!((q.coords()[2] - t).abs() < 1e-14);
        assert!((q.coords()[3] - (s * s + 2.0 * c1 * s + 2.25).sqrt()).abs() < 1e-14);
        assert!(t - 2.0 > PI / 2.0);
    }

    #[test]
    fn initial_states_are_unit() {
        let p0 = Point::cone(0.5, -1.0, 2.0, 1.5).unwrap();
        let cc = Complex64::from_polar((2.25f64 - 0.09 - 0.16).sqrt(), 1.0);
        let g = ConeGeodesicParams::new(ConeKind::General { c1: 0.3, c3: -0.4, cc }, p0).unwrap();
        g.initial_state().unwrap();
        assert!(ConeGeodesicParams::new(ConeKind::General { c1: 0.3, c3: 0.4, cc: cc * 2.0 }, p0).is_err());
    }
}
