//! Kirkwood-Dirac values of real pure states.
//!
//! For a state `psi` and two paths `a`, `b` the KD value is
//! `rho(a, b) = <b|a><a|psi><psi|b>`. It is quadratic in each argument, so it
//! does not depend on the global sign of any of the three rays. Ten pairs
//! characterize a state: each inner path with the outer path opposite to it,
//! and the five non-orthogonal pairs of outer paths.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::eigen::{jacobi_eigen, Mat3};
use crate::error::{Error, Result};
use crate::hilbert::{axpy, normalize, scale, RayState};
use crate::interferometer::{probabilities, Path, PathKind, PathSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KdPair {
    pub a: Path,
    pub b: Path,
    pub kind: PathKind,
}

impl KdPair {
    const fn inner(a: Path, b: Path) -> Self {
        KdPair { a, b, kind: PathKind::Inner }
    }

    const fn outer(a: Path, b: Path) -> Self {
        KdPair { a, b, kind: PathKind::Outer }
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.a, self.b)
    }

    pub fn involves(&self, p: Path) -> bool {
        self.a == p || self.b == p
    }

    pub fn matches(&self, a: Path, b: Path) -> bool {
        (self.a == a && self.b == b) || (self.a == b && self.b == a)
    }
}

impl fmt::Display for KdPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// The ten canonical pairs: five inner, then five outer.
pub const KD_PAIRS: [KdPair; 10] = [
    KdPair::inner(Path::One, Path::P2),
    KdPair::inner(Path::Two, Path::P1),
    KdPair::inner(Path::F, Path::Three),
    KdPair::inner(Path::S1, Path::D2),
    KdPair::inner(Path::S2, Path::D1),
    KdPair::outer(Path::One, Path::F),
    KdPair::outer(Path::One, Path::S2),
    KdPair::outer(Path::Two, Path::F),
    KdPair::outer(Path::Two, Path::S1),
    KdPair::outer(Path::S1, Path::S2),
];

/// Position of a pair in [`KD_PAIRS`], accepting either argument order.
pub fn pair_index(a: Path, b: Path) -> Option<usize> {
    KD_PAIRS.iter().position(|p| p.matches(a, b))
}

pub fn kd_value(psi: &RayState, a: &RayState, b: &RayState) -> f64 {
    b.inner(a) * a.inner(psi) * psi.inner(b)
}

/// KD values of one state over the ten canonical pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KdProfile {
    pub state: RayState,
    pub values: [f64; 10],
}

impl KdProfile {
    /// Value of a canonical pair; panics if `(a, b)` is not one.
    pub fn get(&self, a: Path, b: Path) -> f64 {
        let k = pair_index(a, b).unwrap_or_else(|| panic!("({a},{b}) is not a canonical KD pair"));
        self.values[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = (KdPair, f64)> + '_ {
        KD_PAIRS.iter().copied().zip(self.values.iter().copied())
    }

    pub fn inner_values(&self) -> &[f64] {
        &self.values[..5]
    }

    pub fn outer_values(&self) -> &[f64] {
        &self.values[5..]
    }
}

impl Serialize for KdProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(10))?;
        for (pair, v) in self.iter() {
            m.serialize_entry(&pair.label(), &v)?;
        }
        m.end()
    }
}

pub fn kd_profile(psi: &RayState, system: &PathSystem) -> KdProfile {
    KdProfile {
        state: *psi,
        values: KD_PAIRS.map(|p| kd_value(psi, &system.ray(p.a), &system.ray(p.b))),
    }
}

/// The three KD terms whose sum is the probability of outer path `i`:
/// its two outer pairs followed by its inner pair.
pub fn decompose_outer(psi: &RayState, system: &PathSystem, i: Path) -> Result<[(KdPair, f64); 3]> {
    let i = i.expect_outer()?;
    let profile = kd_profile(psi, system);
    let mut terms = profile.iter().filter(|(p, _)| p.involves(i) && p.kind == PathKind::Outer);
    let (o1, o2) = (terms.next().expect("two outer pairs"), terms.next().expect("two outer pairs"));
    let inner = profile
        .iter()
        .find(|(p, _)| p.involves(i) && p.kind == PathKind::Inner)
        .expect("one inner pair");
    Ok([o1, o2, inner])
}

/// Sum of the five inner-path probabilities; non-contextual path
/// assignments keep it at or above one.
pub fn inequality_sum(psi: &RayState, system: &PathSystem) -> f64 {
    let p = probabilities(psi, system);
    Path::INNER.iter().map(|&k| p.get(k)).sum()
}

pub fn violation(sum: f64) -> f64 {
    (1.0 - sum).max(0.0)
}

/// Sum of the projectors onto the five inner paths.
pub fn inner_path_operator(system: &PathSystem) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for k in Path::INNER {
        let v = system.ray(k).coeffs();
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += v[r] * v[c];
            }
        }
    }
    m
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MaxViolation {
    pub state: RayState,
    pub min_eigenvalue: f64,
    pub violation: f64,
}

/// State minimizing [`inequality_sum`]: the lowest eigenvector of the
/// inner-path operator.
pub fn max_violation(system: &PathSystem) -> MaxViolation {
    let eig = jacobi_eigen(&inner_path_operator(system));
    let state = normalize(eig.vectors[0]).expect("eigenvectors are unit length");
    MaxViolation {
        state,
        min_eigenvalue: eig.values[0],
        violation: 1.0 - eig.values[0],
    }
}

fn generic_overlap(a: &RayState, b: &RayState) -> Result<f64> {
    let x = a.inner(b);
    if x.abs() < 1e-12 || x.abs() > 1.0 - 1e-12 {
        return Err(Error::DegeneratePair(x));
    }
    Ok(x)
}

/// Magnitude of the most negative value `rho(a, b)` can take:
/// `x (1 - x) / 2` with `x = |<a|b>|`.
pub fn kd_negative_bound(a: &RayState, b: &RayState) -> Result<f64> {
    let x = generic_overlap(a, b)?.abs();
    Ok(x * (1.0 - x) / 2.0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KdExtremum {
    pub state: RayState,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KdExtrema {
    pub max_positive: KdExtremum,
    pub max_negative: KdExtremum,
}

/// Scans `n` rays on the great circle through `a` and `b` for the extreme
/// values of `rho(a, b)`.
pub fn extremal_kd_on_circle(a: &RayState, b: &RayState, n: usize) -> Result<KdExtrema> {
    let x = generic_overlap(a, b)?;
    let ua = a.coeffs();
    let perp = normalize(axpy(-x, &ua, &b.coeffs()))?.coeffs();
    let mut best_pos = (f64::NEG_INFINITY, ua);
    let mut best_neg = (f64::INFINITY, ua);
    for k in 0..n.max(1) {
        let t = PI * k as f64 / n.max(1) as f64;
        let v = axpy(t.cos(), &ua, &scale(&perp, t.sin()));
        let psi = RayState::from_unit(v);
        let rho = kd_value(&psi, a, b);
        if rho > best_pos.0 {
            best_pos = (rho, v);
        }
        if rho < best_neg.0 {
            best_neg = (rho, v);
        }
    }
    Ok(KdExtrema {
        max_positive: KdExtremum { state: RayState::from_unit(best_pos.1), value: best_pos.0 },
        max_negative: KdExtremum { state: RayState::from_unit(best_neg.1), value: best_neg.0 },
    })
}
