//! Conformal maps from the `a x b` rectangle `[0, a] x [0, b]`.
//!
//! The half-plane map is the Jacobi `sn` function, evaluated as a ratio of
//! theta series with nome `q = exp(-2 pi b / a)`: with
//! `v = pi (x - a/2) / a + i pi y / a`,
//!
//! ```text
//! sn = theta3(0) / theta2(0) * theta1(v) / theta4(v)
//! ```
//!
//! which sends the bottom midpoint to 0, the bottom corners to -1 and +1, the
//! top corners to -1/k and +1/k and the top midpoint to infinity.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    HalfPlane,
    HalfAnnulus,
    DiskEquilateral,
}

/// `z -> (p z + q) / (r z + s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
    pub s: Complex64,
}

impl Mobius {
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.p * z + self.q) / (self.r * z + self.s)
    }

    fn compose(&self, inner: &Mobius) -> Mobius {
        Mobius {
            p: self.p * inner.p + self.q * inner.r,
            q: self.p * inner.q + self.q * inner.s,
            r: self.r * inner.p + self.s * inner.r,
            s: self.r * inner.q + self.s * inner.s,
        }
    }

    fn inverse(&self) -> Mobius {
        Mobius {
            p: self.s,
            q: -self.q,
            r: -self.r,
            s: self.p,
        }
    }

    /// Sends `z1, z2, z3` to `0, 1, inf`.
    fn to_standard(z1: Complex64, z2: Complex64, z3: Complex64) -> Mobius {
        Mobius {
            p: z2 - z3,
            q: -z1 * (z2 - z3),
            r: z2 - z1,
            s: -z3 * (z2 - z1),
        }
    }

    /// The unique map sending each `from[k]` to `to[k]`.
    pub fn through(from: [Complex64; 3], to: [Complex64; 3]) -> Mobius {
        let a = Mobius::to_standard(from[0], from[1], from[2]);
        let b = Mobius::to_standard(to[0], to[1], to[2]);
        b.inverse().compose(&a)
    }
}

const SERIES_TOL: f64 = 1e-17;
const MAX_TERMS: usize = 10_000;

fn theta2_zero(ln_q: f64) -> f64 {
    let mut sum = 0.0;
    for n in 0..MAX_TERMS {
        let h = n as f64 + 0.5;
        let term = 2.0 * (h * h * ln_q).exp();
        sum += term;
        if term < SERIES_TOL * sum {
            break;
        }
    }
    sum
}

fn theta3_zero(ln_q: f64) -> f64 {
    let mut sum = 1.0;
    for n in 1..MAX_TERMS {
        let m = n as f64;
        let term = 2.0 * (m * m * ln_q).exp();
        sum += term;
        if term < SERIES_TOL * sum {
            break;
        }
    }
    sum
}

// Each term q^c e^{+-i m v} is formed as one exponential so that a large
// imaginary part of `v` cannot overflow before the nome damps it.
fn theta1(v: Complex64, ln_q: f64) -> Complex64 {
    let i = Complex64::i();
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..MAX_TERMS {
        let h = n as f64 + 0.5;
        let base = Complex64::from(h * h * ln_q);
        let plus = (base + i * 2.0 * h * v).exp();
        let minus = (base - i * 2.0 * h * v).exp();
        // 2 sin(w) = -i (e^{iw} - e^{-iw})
        let term = -i * (plus - minus);
        let term = if n % 2 == 0 { term } else { -term };
        sum += term;
        if n > 0 && term.norm() < SERIES_TOL * sum.norm() {
            break;
        }
    }
    sum
}

fn theta4(v: Complex64, ln_q: f64) -> Complex64 {
    let i = Complex64::i();
    let mut sum = Complex64::new(1.0, 0.0);
    for n in 1..MAX_TERMS {
        let m = n as f64;
        let base = Complex64::from(m * m * ln_q);
        let term = (base + i * 2.0 * m * v).exp() + (base - i * 2.0 * m * v).exp();
        let term = if n % 2 == 0 { term } else { -term };
        sum += term;
        if term.norm() < SERIES_TOL * sum.norm() {
            break;
        }
    }
    sum
}

// Theta-series constants of the `sn` map for one `width x height` rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SnFrame {
    width: f64,
    height: f64,
    ln_nome: f64,
    // theta3(0) / theta2(0) = 1 / sqrt(k)
    prefactor: f64,
}

impl SnFrame {
    fn new(width: f64, height: f64) -> Self {
        let ln_nome = -2.0 * std::f64::consts::PI * height / width;
        SnFrame {
            width,
            height,
            ln_nome,
            prefactor: theta3_zero(ln_nome) / theta2_zero(ln_nome),
        }
    }

    /// Image `-1/k` of the top-left corner.
    fn top_left(&self) -> f64 {
        -self.prefactor * self.prefactor
    }

    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let pi = std::f64::consts::PI;
        let pole = Complex64::new(self.width / 2.0, self.height);
        if (z - pole).norm() <= 1e-12 * self.width {
            return Err(Error::Pole(format!("({}, {})", z.re, z.im)));
        }
        let v = Complex64::new(
            pi * (z.re - self.width / 2.0) / self.width,
            pi * z.im / self.width,
        );
        let w = self.prefactor * theta1(v, self.ln_nome) / theta4(v, self.ln_nome);
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::Pole(format!("({}, {})", z.re, z.im)));
        }
        Ok(w)
    }
}

/// A rectangle map with its constants precomputed.
///
/// The disk map goes through a half-plane of its own. For a rectangle wider
/// than tall, the images of `(0,0)` and `(0,b)` under the plain half-plane map
/// differ by roughly `exp(-pi a / b)`, which ruins the Möbius stage, so the
/// disk map then works in the rectangle turned a quarter turn counterclockwise,
/// `(x, y) -> (b - y, x)`, where its three anchors sit near `1`, `-1` and
/// far out on the real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RectangleMap {
    pub a: f64,
    pub b: f64,
    pub kind: MapKind,
    halfplane: SnFrame,
    disk_frame: SnFrame,
    disk_rotated: bool,
    disk: Mobius,
}

impl RectangleMap {
    pub fn new(kind: MapKind, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("rectangle {a} x {b}")));
        }
        let halfplane = SnFrame::new(a, b);
        let disk_rotated = b < a;
        let disk_frame = if disk_rotated {
            SnFrame::new(b, a)
        } else {
            halfplane
        };
        let mut map = RectangleMap {
            a,
            b,
            kind,
            halfplane,
            disk_frame,
            disk_rotated,
            disk: Mobius {
                p: Complex64::from(1.0),
                q: Complex64::from(0.0),
                r: Complex64::from(0.0),
                s: Complex64::from(1.0),
            },
        };
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        map.disk = Mobius::through(
            map.disk_anchor_images(),
            [Complex64::from(1.0), omega, omega * omega],
        );
        Ok(map)
    }

    pub fn nome(&self) -> f64 {
        self.halfplane.ln_nome.exp()
    }

    /// Image `-1/k` of the corner `(0, b)` in the half-plane.
    pub fn top_left_image(&self) -> f64 {
        self.halfplane.top_left()
    }

    /// Half-plane point the disk stage is applied to.
    pub fn disk_prestage(&self, z: Complex64) -> Result<Complex64> {
        if self.disk_rotated {
            self.disk_frame.eval(Complex64::new(self.b - z.im, z.re))
        } else {
            self.disk_frame.eval(z)
        }
    }

    /// Images of `(0,0)`, `(a,0)`, `(0,b)` under [`disk_prestage`](Self::disk_prestage).
    pub fn disk_anchor_images(&self) -> [Complex64; 3] {
        let k = -self.disk_frame.top_left();
        if self.disk_rotated {
            [1.0, k, -1.0].map(Complex64::from)
        } else {
            [-1.0, 1.0, -k].map(Complex64::from)
        }
    }

    /// The half-plane to disk stage of the equilateral disk map.
    pub fn disk_stage(&self) -> Mobius {
        self.disk
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        match self.kind {
            MapKind::HalfPlane => rect_to_halfplane(z, self),
            MapKind::HalfAnnulus => Ok(rect_to_halfannulus(z, self)),
            MapKind::DiskEquilateral => rect_to_disk_equilateral(z, self),
        }
    }
}

/// The half-plane image of `z = x + i y`; the top midpoint is the pole.
pub fn rect_to_halfplane(z: Complex64, map: &RectangleMap) -> Result<Complex64> {
    map.halfplane.eval(z)
}

/// `exp(i pi (a - x) / a + pi (y - b/2) / a)`: the midline goes to the unit
/// semicircle, with `(0, b/2) -> -1` and `(a, b/2) -> 1`.
pub fn rect_to_halfannulus(z: Complex64, map: &RectangleMap) -> Complex64 {
    let pi = std::f64::consts::PI;
    Complex64::new(
        pi * (z.im - map.b / 2.0) / map.a,
        pi * (map.a - z.re) / map.a,
    )
    .exp()
}

/// Disk image with `(0,0) -> 1`, `(a,0) -> e^{2 pi i/3}`, `(0,b) -> e^{4 pi i/3}`.
pub fn rect_to_disk_equilateral(z: Complex64, map: &RectangleMap) -> Result<Complex64> {
    match map.disk_prestage(z) {
        Ok(w) => Ok(map.disk.apply(w)),
        // the pole of the half-plane stage lies on the boundary
        Err(Error::Pole(_)) => Ok(map.disk.p / map.disk.r),
        Err(e) => Err(e),
    }
}

/// Angle of `w` from the positive imaginary axis, positive toward `+1`.
pub fn halfplane_angle(w: Complex64) -> Result<f64> {
    if !(w.im >= 0.0) || (w.im == 0.0 && w.re == 0.0) {
        return Err(Error::Domain(format!(
            "{w} is not in the closed upper half-plane"
        )));
    }
    Ok(w.re.atan2(w.im))
}
