//! The five-stage beam-splitter cascade and the ten path states it defines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{axpy, scale, RayState, Vec3};
use crate::numeric::parse_real;

/// One of the ten paths through the interferometer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Path {
    One,
    Two,
    Three,
    S1,
    D1,
    F,
    P1,
    P2,
    S2,
    D2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Outer,
    Inner,
}

impl Path {
    pub const ALL: [Path; 10] = [
        Path::One,
        Path::Two,
        Path::Three,
        Path::S1,
        Path::D1,
        Path::F,
        Path::P1,
        Path::P2,
        Path::S2,
        Path::D2,
    ];

    /// Outer paths in pentagram order around the N-pentagon.
    pub const OUTER: [Path; 5] = [Path::F, Path::One, Path::S2, Path::S1, Path::Two];

    /// Inner paths in cascade order: one per context C1..C5.
    pub const INNER: [Path; 5] = [Path::Three, Path::D1, Path::P1, Path::P2, Path::D2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Path::One => "1",
            Path::Two => "2",
            Path::Three => "3",
            Path::S1 => "S1",
            Path::D1 => "D1",
            Path::F => "f",
            Path::P1 => "P1",
            Path::P2 => "P2",
            Path::S2 => "S2",
            Path::D2 => "D2",
        }
    }

    pub fn kind(self) -> PathKind {
        match self {
            Path::Three | Path::D1 | Path::P1 | Path::P2 | Path::D2 => PathKind::Inner,
            _ => PathKind::Outer,
        }
    }

    pub fn is_outer(self) -> bool {
        self.kind() == PathKind::Outer
    }

    /// Pairs an inner path with the outer path shared by the two contexts
    /// that do not touch the inner path's own context, and vice versa.
    pub fn opposite(self) -> Path {
        match self {
            Path::Three => Path::F,
            Path::D1 => Path::S2,
            Path::P1 => Path::Two,
            Path::P2 => Path::One,
            Path::D2 => Path::S1,
            Path::F => Path::Three,
            Path::S2 => Path::D1,
            Path::Two => Path::P1,
            Path::One => Path::P2,
            Path::S1 => Path::D2,
        }
    }

    /// Image under the exchange `|1> <-> |2>` with `|3>` fixed.
    pub fn mirror(self) -> Path {
        match self {
            Path::One => Path::Two,
            Path::Two => Path::One,
            Path::S1 => Path::S2,
            Path::S2 => Path::S1,
            Path::D1 => Path::D2,
            Path::D2 => Path::D1,
            Path::P1 => Path::P2,
            Path::P2 => Path::P1,
            p => p,
        }
    }

    pub(crate) fn expect_outer(self) -> Result<Path> {
        if self.is_outer() {
            Ok(self)
        } else {
            Err(Error::UnknownPath(format!("{} (expected an outer path)", self.name())))
        }
    }

    pub(crate) fn expect_inner(self) -> Result<Path> {
        if self.is_outer() {
            Err(Error::UnknownPath(format!("{} (expected an inner path)", self.name())))
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Path::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownPath(t.to_string()))
    }
}

impl Serialize for Path {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Three mutually orthogonal paths measured together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Context {
    pub index: usize,
    /// Two outer paths followed by the inner path.
    pub paths: [Path; 3],
}

impl Context {
    pub fn inner(&self) -> Path {
        self.paths[2]
    }

    pub fn contains(&self, p: Path) -> bool {
        self.paths.contains(&p)
    }
}

pub const CONTEXTS: [Context; 5] = [
    Context { index: 1, paths: [Path::One, Path::Two, Path::Three] },
    Context { index: 2, paths: [Path::One, Path::S1, Path::D1] },
    Context { index: 3, paths: [Path::S1, Path::F, Path::P1] },
    Context { index: 4, paths: [Path::F, Path::S2, Path::P2] },
    Context { index: 5, paths: [Path::S2, Path::Two, Path::D2] },
];

/// Beam-splitter reflectivities in stage order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterferometerSpec {
    pub r1: f64,
    #[serde(rename = "rS1")]
    pub r_s1: f64,
    pub rf: f64,
    #[serde(rename = "rS2")]
    pub r_s2: f64,
    pub r2: f64,
}

impl Default for InterferometerSpec {
    fn default() -> Self {
        InterferometerSpec {
            r1: 0.5,
            r_s1: 1.0 / 3.0,
            rf: 0.25,
            r_s2: 1.0 / 3.0,
            r2: 0.5,
        }
    }
}

impl InterferometerSpec {
    const KEYS: [&'static str; 5] = ["r1", "rS1", "rf", "rS2", "r2"];

    pub fn new(r1: f64, r_s1: f64, rf: f64, r_s2: f64, r2: f64) -> Self {
        InterferometerSpec { r1, r_s1, rf, r_s2, r2 }
    }

    fn values(&self) -> [f64; 5] {
        [self.r1, self.r_s1, self.rf, self.r_s2, self.r2]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in Self::KEYS.into_iter().zip(self.values()) {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidReflectivity { name, value });
            }
        }
        Ok(())
    }

    /// Reads `key = value` lines (TOML syntax). Values may be numbers or
    /// strings such as `"1/3"`; missing keys keep their default.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let mut spec = InterferometerSpec::default();
        for (key, value) in &table {
            let x = match value {
                toml::Value::Float(x) => *x,
                toml::Value::Integer(i) => *i as f64,
                toml::Value::String(s) => parse_real(s)?,
                other => return Err(Error::Config(format!("{key}: unsupported value {other}"))),
            };
            match key.as_str() {
                "r1" => spec.r1 = x,
                "rS1" => spec.r_s1 = x,
                "rf" => spec.rf = x,
                "rS2" => spec.r_s2 = x,
                "r2" => spec.r2 = x,
                _ => return Err(Error::Config(format!("unknown key `{key}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// The ten path states of a built cascade.
#[derive(Clone, Debug)]
pub struct PathSystem {
    spec: InterferometerSpec,
    /// Amplitude vectors with the signs produced by the cascade.
    vectors: [Vec3; 10],
    rays: [RayState; 10],
    outputs: [Vec3; 3],
}

/// One beam splitter: returns `(outer', mid')`.
fn mix(r: f64, outer: &Vec3, mid: &Vec3) -> (Vec3, Vec3) {
    let (a, b) = (r.sqrt(), (1.0 - r).sqrt());
    (axpy(a, outer, &scale(mid, b)), axpy(b, outer, &scale(mid, -a)))
}

impl PathSystem {
    pub fn build(spec: InterferometerSpec) -> Result<Self> {
        spec.validate()?;
        let e1 = [1.0, 0.0, 0.0];
        let e2 = [0.0, 1.0, 0.0];
        let e3 = [0.0, 0.0, 1.0];
        let (s1, d1) = mix(spec.r1, &e2, &e3);
        let (f, p1) = mix(spec.r_s1, &e1, &d1);
        let (s2, p2) = mix(spec.rf, &s1, &p1);
        let (out2, d2) = mix(spec.r_s2, &f, &p2);
        let (out1, out3) = mix(spec.r2, &s2, &d2);

        let mut vectors = [[0.0; 3]; 10];
        for (p, v) in [
            (Path::One, e1),
            (Path::Two, e2),
            (Path::Three, e3),
            (Path::S1, s1),
            (Path::D1, d1),
            (Path::F, f),
            (Path::P1, p1),
            (Path::P2, p2),
            (Path::S2, s2),
            (Path::D2, d2),
        ] {
            vectors[p.index()] = v;
        }
        let rays = vectors.map(RayState::from_unit);
        Ok(PathSystem {
            spec,
            vectors,
            rays,
            outputs: [out1, out2, out3],
        })
    }

    /// The cascade with the default reflectivities `(1/2, 1/3, 1/4, 1/3, 1/2)`.
    pub fn standard() -> Self {
        PathSystem::build(InterferometerSpec::default()).expect("default reflectivities are valid")
    }

    pub fn spec(&self) -> &InterferometerSpec {
        &self.spec
    }

    pub fn ray(&self, p: Path) -> RayState {
        self.rays[p.index()]
    }

    /// Signed amplitude vector of a path as produced by the cascade.
    pub fn vector(&self, p: Path) -> Vec3 {
        self.vectors[p.index()]
    }

    /// Output ports `(1_out, 2_out, 3_out)`.
    pub fn outputs(&self) -> [Vec3; 3] {
        self.outputs
    }

    pub fn contexts(&self) -> &'static [Context; 5] {
        &CONTEXTS
    }
}

/// True iff every output port equals the matching input state up to sign.
pub fn verify_closure(system: &PathSystem, tol: f64) -> bool {
    system.outputs().iter().enumerate().all(|(k, out)| {
        let basis = RayState::basis(k);
        RayState::from_unit(*out).approx_eq(&basis, tol)
    })
}

/// Detection probabilities of all ten paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathProbabilities([f64; 10]);

impl PathProbabilities {
    pub fn get(&self, p: Path) -> f64 {
        self.0[p.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Path, f64)> + '_ {
        Path::ALL.into_iter().map(move |p| (p, self.0[p.index()]))
    }

    pub fn context_sum(&self, c: &Context) -> f64 {
        c.paths.iter().map(|&p| self.get(p)).sum()
    }
}

impl Serialize for PathProbabilities {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(10))?;
        for (p, x) in self.iter() {
            m.serialize_entry(p.name(), &x)?;
        }
        m.end()
    }
}

pub fn probabilities(psi: &RayState, system: &PathSystem) -> PathProbabilities {
    PathProbabilities(Path::ALL.map(|p| system.ray(p).overlap(psi)))
}
