//! Geometry of rays in the real three-dimensional Hilbert space.
//!
//! A pure state with real amplitudes is a unit vector `(c1, c2, c3)` in the
//! input basis `{|1>, |2>, |3>}`. Its global sign carries no physical meaning,
//! so every [`RayState`] is stored with a canonical sign: the first
//! coefficient whose magnitude exceeds [`SIGN_THRESHOLD`] is positive. Two
//! antipodal unit vectors therefore map to the same value.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Plain three-component vector used for intermediate arithmetic.
pub type Vec3 = [f64; 3];

/// Norm below which a vector is rejected as having no direction.
pub const ZERO_NORM: f64 = 1e-12;

/// Magnitude below which a coefficient is skipped when fixing the global sign.
pub const SIGN_THRESHOLD: f64 = 1e-12;

/// Pairs whose `|<a|b>|` exceeds `1 - PARALLEL_TOL` are treated as the same ray.
pub const PARALLEL_TOL: f64 = 1e-9;

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn axpy(s: f64, x: &Vec3, y: &Vec3) -> Vec3 {
    [s * x[0] + y[0], s * x[1] + y[1], s * x[2] + y[2]]
}

/// A normalized real state identified up to global sign.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct RayState([f64; 3]);

impl RayState {
    /// Basis state `|1>`, `|2>` or `|3>` for `index` 0, 1 or 2.
    pub fn basis(index: usize) -> Self {
        let mut c = [0.0; 3];
        c[index] = 1.0;
        RayState(c)
    }

    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        normalize([c1, c2, c3])
    }

    pub fn coeffs(&self) -> Vec3 {
        self.0
    }

    pub fn c1(&self) -> f64 {
        self.0[0]
    }

    pub fn c2(&self) -> f64 {
        self.0[1]
    }

    pub fn c3(&self) -> f64 {
        self.0[2]
    }

    /// Real inner product `<self|other>`.
    pub fn inner(&self, other: &RayState) -> f64 {
        dot(&self.0, &other.0)
    }

    /// Born probability `|<self|other>|^2`.
    pub fn overlap(&self, other: &RayState) -> f64 {
        let x = self.inner(other);
        x * x
    }

    /// True when both rays agree up to sign within `tol` per component.
    pub fn approx_eq(&self, other: &RayState, tol: f64) -> bool {
        let same = self.0.iter().zip(&other.0).all(|(a, b)| (a - b).abs() <= tol);
        let flipped = self.0.iter().zip(&other.0).all(|(a, b)| (a + b).abs() <= tol);
        same || flipped
    }

    /// Wraps a vector that is already unit norm, only fixing the sign.
    pub(crate) fn from_unit(v: Vec3) -> Self {
        RayState(canonical_sign(v))
    }
}

impl fmt::Debug for RayState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RayState({:.6}, {:.6}, {:.6})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for RayState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.0[0], self.0[1], self.0[2])
    }
}

impl From<RayState> for [f64; 3] {
    fn from(r: RayState) -> Self {
        r.0
    }
}

impl TryFrom<[f64; 3]> for RayState {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        normalize(v)
    }
}

fn canonical_sign(v: Vec3) -> Vec3 {
    match v.iter().find(|c| c.abs() > SIGN_THRESHOLD) {
        Some(&c) if c < 0.0 => scale(&v, -1.0),
        _ => v,
    }
}

/// Scales `v` to unit length and fixes its global sign.
pub fn normalize(v: Vec3) -> Result<RayState> {
    let n = norm(&v);
    if n.is_nan() || n <= ZERO_NORM {
        return Err(Error::ZeroVector(n));
    }
    Ok(RayState(canonical_sign(scale(&v, 1.0 / n))))
}

pub fn inner(a: &RayState, b: &RayState) -> f64 {
    a.inner(b)
}

/// The unique ray orthogonal to two non-parallel rays.
pub fn orthogonal_to_pair(a: &RayState, b: &RayState) -> Result<RayState> {
    let x = a.inner(b);
    if x.abs() >= 1.0 - PARALLEL_TOL {
        return Err(Error::DegeneratePair(x));
    }
    normalize(cross(&a.0, &b.0))
}

/// Point of the orthographic projection of the `c1 >= 0` hemisphere onto the
/// `(c2, c3)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub u: f64,
    pub v: f64,
}

impl SpherePoint {
    pub fn new(u: f64, v: f64) -> Self {
        SpherePoint { u, v }
    }

    pub fn in_disk(&self) -> bool {
        self.u * self.u + self.v * self.v <= 1.0
    }

    /// Inverse of [`hemisphere_project`] on the closed unit disk.
    pub fn lift(&self) -> Option<RayState> {
        let r2 = self.u * self.u + self.v * self.v;
        if r2 > 1.0 {
            return None;
        }
        let c1 = (1.0 - r2).max(0.0).sqrt();
        Some(RayState::from_unit([c1, self.u, self.v]))
    }
}

/// Projects a ray onto the `(c2, c3)` plane from the `c1 >= 0` hemisphere.
///
/// Equator rays (`c1 = 0`) keep the canonical sign, so `c2 > 0`, or `c2 = 0`
/// and `c3 > 0`.
pub fn hemisphere_project(r: &RayState) -> SpherePoint {
    let c = if r.0[0] < 0.0 { scale(&r.0, -1.0) } else { r.0 };
    SpherePoint { u: c[1], v: c[2] }
}

/// Orthonormal pair `(e1, e2)` spanning the plane orthogonal to `axis`.
///
/// `e1` has no `|1>` component unless `axis` is `|1>` itself, and `e2` has
/// a non-negative `|1>` component. Walking `cos t e1 + sin t e2` for
/// `t` in `[0, pi]` therefore stays in the `c1 >= 0` hemisphere.
pub fn circle_frame(axis: &RayState) -> (Vec3, Vec3) {
    let a = axis.0;
    let mut e1 = cross(&a, &[1.0, 0.0, 0.0]);
    let n1 = norm(&e1);
    if n1 < 1e-9 {
        return ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
    }
    e1 = scale(&e1, 1.0 / n1);
    let mut e2 = cross(&a, &e1);
    if e2[0] < 0.0 {
        e2 = scale(&e2, -1.0);
    }
    (e1, e2)
}

/// `n` rays orthogonal to `a`, evenly spaced by `pi / n` around the circle.
pub fn great_circle(a: &RayState, n: usize) -> Vec<RayState> {
    let (e1, e2) = circle_frame(a);
    (0..n)
        .map(|k| {
            let t = PI * k as f64 / n as f64;
            let v = axpy(t.cos(), &e1, &scale(&e2, t.sin()));
            RayState::from_unit(v)
        })
        .collect()
}
