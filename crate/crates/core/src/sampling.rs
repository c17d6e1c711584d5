//! Seeded sampling of points and tangent vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::manifold::{Manifold, Point, Tangent};
use crate::maps::MapId;

/// Coordinate ranges used for random points: `x, y` in `[-3, 3]`,
/// `t` in `[-5, 5]`, `r` in `[0.2, 5]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBox {
    pub xy: (f64, f64),
    pub t: (f64, f64),
    pub r: (f64, f64),
}

impl Default for SampleBox {
    fn default() -> Self {
        Self {
            xy: (-3.0, 3.0),
            t: (-5.0, 5.0),
            r: (0.2, 5.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    pub bounds: SampleBox,
}

/// FNV-1a, so that per-name streams do not depend on std's hasher.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bounds: SampleBox::default(),
        }
    }

    /// Independent stream for a named consumer; the same `(seed, name)`
    /// always yields the same draws.
    pub fn stream(seed: u64, name: &str) -> Self {
        Self::new(seed ^ fnv1a(name))
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            lo
        } else {
            self.rng.gen_range(lo..hi)
        }
    }

    /// Uniform angle in `[0, 2 pi)`.
    pub fn angle(&mut self) -> f64 {
        self.uniform(0.0, std::f64::consts::TAU)
    }

    pub fn heisenberg(&mut self) -> Point {
        let (lo, hi) = self.bounds.xy;
        let (tl, th) = self.bounds.t;
        Point::heisenberg(self.uniform(lo, hi), self.uniform(lo, hi), self.uniform(tl, th))
    }

    pub fn cone(&mut self) -> Point {
        let (rl, rh) = self.bounds.r;
        let r = self.uniform(rl, rh);
        self.cone_at(r)
    }

    pub fn cone_at(&mut self, r: f64) -> Point {
        let h = self.heisenberg();
        let c = h.coords();
        Point::cone(c[0], c[1], c[2], r).expect("sample radius is positive")
    }

    /// Siegel-domain points as horospherical images of cone samples, so
    /// `rho` ranges over the radial box.
    pub fn siegel(&mut self) -> Point {
        let p = self.cone();
        MapId::Horospherical.apply(&p).expect("horospherical image lies in the domain")
    }

    pub fn point(&mut self, m: Manifold) -> Point {
        let (lo, hi) = self.bounds.xy;
        let (tl, th) = self.bounds.t;
        let (rl, rh) = self.bounds.r;
        match m {
            Manifold::Heisenberg => self.heisenberg(),
            Manifold::Cone => self.cone(),
            Manifold::Siegel => self.siegel(),
            Manifold::HalfPlane => {
                let c = [self.uniform(tl, th), self.uniform(rl, rh)];
                Point::new(m, &c).unwrap()
            }
            Manifold::ComplexPlane => {
                let c = [self.uniform(lo, hi), self.uniform(lo, hi)];
                Point::new(m, &c).unwrap()
            }
            Manifold::HalfSpace => {
                let c = [self.uniform(lo, hi), self.uniform(lo, hi), self.uniform(rl, rh)];
                Point::new(m, &c).unwrap()
            }
        }
    }

    /// Tangent at `p` with coordinate components uniform in `[-1, 1]`.
    pub fn tangent(&mut self, p: &Point) -> Tangent {
        let c: Vec<f64> = (0..p.dim()).map(|_| self.uniform(-1.0, 1.0)).collect();
        Tangent::new(*p, &c).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = (0..4).map(|_| Sampler::stream(7, "a").uniform(0.0, 1.0)).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut s1 = Sampler::stream(7, "a");
        let mut s2 = Sampler::stream(7, "b");
        assert_ne!(s1.uniform(0.0, 1.0), s2.uniform(0.0, 1.0));
    }

    #[test]
    fn samples_stay_in_the_box() {
        let mut s = Sampler::new(1);
        for _ in 0..200 {
            let p = s.cone();
            let c = p.coords();
            assert!(c[0].abs() <= 3.0 && c[2].abs() <= 5.0 && (0.2..5.0).contains(&c[3]));
            let q = s.siegel();
            let rho = crate::metric::rho(&q).unwrap();
            assert!((0.2 - 1e-12..5.0 + 1e-12).contains(&rho));
        }
    }
}
