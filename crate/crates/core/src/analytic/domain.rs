use num_complex::Complex64;
use serde::Serialize;

use super::UpperHalfPoint;

/// Element of SL₂(Z), `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2Z(pub [[i64; 2]; 2]);

impl Sl2Z {
    pub const IDENTITY: Sl2Z = Sl2Z([[1, 0], [0, 1]]);
    pub const S: Sl2Z = Sl2Z([[0, -1], [1, 0]]);

    pub fn translation(n: i64) -> Self {
        Sl2Z([[1, n], [0, 1]])
    }

    pub fn mul(&self, o: &Sl2Z) -> Sl2Z {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = o.0;
        Sl2Z([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])
    }

    pub fn inverse(&self) -> Sl2Z {
        let [[a, b], [c, d]] = self.0;
        Sl2Z([[d, -b], [-c, a]])
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    /// Möbius action γτ = (aτ + b)/(cτ + d).
    pub fn apply(&self, tau: &UpperHalfPoint) -> UpperHalfPoint {
        let [[a, b], [c, d]] = self.0.map(|r| r.map(|x| x as f64));
        let t = tau.as_complex();
        let w = (t * a + b) / (t * c + d);
        UpperHalfPoint { re: w.re, im: w.im }
    }
}

/// Reduce τ into the closed fundamental domain D, returning (γτ, γ).
///
/// Boundary points are moved to the left half: re = 1/2 goes to −1/2 and
/// points on the unit arc with re > 0 are sent through S.
pub fn reduce_to_d(tau: &UpperHalfPoint) -> (UpperHalfPoint, Sl2Z) {
    let mut gamma = Sl2Z::IDENTITY;
    let mut z = Complex64::new(tau.re, tau.im);
    for _ in 0..10_000 {
        let n = (z.re + 0.5).floor();
        if n != 0.0 {
            z.re -= n;
            gamma = Sl2Z::translation(-(n as i64)).mul(&gamma);
        }
        let r2 = z.norm_sqr();
        if r2 < 1.0 {
            z = -z.inv();
            gamma = Sl2Z::S.mul(&gamma);
        } else {
            break;
        }
    }
    // translation above leaves re in [−1/2, 1/2)
    if z.norm_sqr() == 1.0 && z.re > 0.0 {
        gamma = Sl2Z::S.mul(&gamma);
    }
    // Recompute from the integer matrix so the result is exactly γ applied to τ.
    let mut out = gamma.apply(tau);
    if out.re >= 0.5 {
        out.re -= 1.0;
        gamma = Sl2Z::translation(-1).mul(&gamma);
    }
    (out, gamma)
}
