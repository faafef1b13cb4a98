//! Classification of states by the signs of their ten KD values.
//!
//! The ten zero-probability great circles cut the projective sphere into 31
//! polygons. Inside a polygon no KD value changes sign, so the strict sign
//! pattern identifies the polygon. Each polygon is a sub-class of one of six
//! classes, told apart by the number of negative inner and outer values:
//!
//! | class | inner < 0 | outer < 0 |
//! |-------|-----------|-----------|
//! | N     | 5         | 0         |
//! | V     | 4         | 0         |
//! | B     | 3         | 0         |
//! | T     | 2         | 2         |
//! | X     | 1         | 2         |
//! | Q     | 0         | 2         |
//!
//! The pattern of each sub-class is obtained from a state at the centroid of
//! its corner states. On a boundary some values vanish; such a state is
//! consistent with every sub-class whose pattern agrees on the non-zero
//! entries.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hilbert::{norm, normalize, RayState, Vec3};
use crate::interferometer::{Path, PathSystem};
use crate::kd::{kd_profile, KdProfile, KD_PAIRS};
use crate::states::{n_state, theta_state};

/// Default magnitude at or below which a KD value counts as zero.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trit {
    Neg,
    Zero,
    Pos,
}

impl Trit {
    fn symbol(self) -> char {
        match self {
            Trit::Neg => '-',
            Trit::Zero => '0',
            Trit::Pos => '+',
        }
    }
}

/// One trit per pair of [`KD_PAIRS`], written as a ten-character string of
/// `-`, `0` and `+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignPattern(pub [Trit; 10]);

impl SignPattern {
    fn mask(&self, t: Trit) -> u16 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == t)
            .fold(0, |m, (k, _)| m | (1 << k))
    }

    pub fn negative_mask(&self) -> u16 {
        self.mask(Trit::Neg)
    }

    pub fn zero_mask(&self) -> u16 {
        self.mask(Trit::Zero)
    }

    pub fn is_strict(&self) -> bool {
        self.zero_mask() == 0
    }

    pub fn inner_negatives(&self) -> usize {
        self.0[..5].iter().filter(|&&t| t == Trit::Neg).count()
    }

    pub fn outer_negatives(&self) -> usize {
        self.0[5..].iter().filter(|&&t| t == Trit::Neg).count()
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&t| t == Trit::Zero).count()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|t| write!(f, "{}", t.symbol()))
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trits: Vec<Trit> = s
            .chars()
            .map(|c| match c {
                '-' => Ok(Trit::Neg),
                '0' => Ok(Trit::Zero),
                '+' => Ok(Trit::Pos),
                _ => Err(Error::UnknownPattern(s.to_string())),
            })
            .collect::<Result<_>>()?;
        let arr: [Trit; 10] = trits.try_into().map_err(|_| Error::UnknownPattern(s.to_string()))?;
        Ok(SignPattern(arr))
    }
}

impl Serialize for SignPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn sign_pattern(profile: &KdProfile, tol: f64) -> SignPattern {
    SignPattern(profile.values.map(|v| {
        if v.abs() <= tol {
            Trit::Zero
        } else if v > 0.0 {
            Trit::Pos
        } else {
            Trit::Neg
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Class {
    N,
    V,
    B,
    T,
    X,
    Q,
}

impl Class {
    pub const ALL: [Class; 6] = [Class::N, Class::V, Class::B, Class::T, Class::X, Class::Q];

    /// Negative inner and outer counts shared by every sub-class.
    pub fn signature(self) -> (usize, usize) {
        match self {
            Class::N => (5, 0),
            Class::V => (4, 0),
            Class::B => (3, 0),
            Class::T => (2, 2),
            Class::X => (1, 2),
            Class::Q => (0, 2),
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Non-orthogonal outer pairs in the order used for B and T sub-classes.
pub const OUTER_PAIRS: [(Path, Path); 5] = [
    (Path::One, Path::F),
    (Path::One, Path::S2),
    (Path::S1, Path::S2),
    (Path::Two, Path::S1),
    (Path::Two, Path::F),
];

fn canonical_outer_pair(a: Path, b: Path) -> Option<(Path, Path)> {
    OUTER_PAIRS
        .into_iter()
        .find(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
}

/// A sub-class: class letter plus the paths indexing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    N,
    V(Path),
    B(Path, Path),
    T(Path, Path),
    /// Outer path and inner path at two of the triangle's corners.
    X(Path, Path),
    /// Outer path and inner path at two of the quadrilateral's corners.
    Q(Path, Path),
}

impl ClassLabel {
    pub fn class(&self) -> Class {
        match self {
            ClassLabel::N => Class::N,
            ClassLabel::V(_) => Class::V,
            ClassLabel::B(..) => Class::B,
            ClassLabel::T(..) => Class::T,
            ClassLabel::X(..) => Class::X,
            ClassLabel::Q(..) => Class::Q,
        }
    }

    /// Image under the exchange `|1> <-> |2>`.
    pub fn mirror(&self) -> ClassLabel {
        let pair = |a: Path, b: Path| {
            canonical_outer_pair(a.mirror(), b.mirror()).expect("mirror maps outer pairs to outer pairs")
        };
        match *self {
            ClassLabel::N => ClassLabel::N,
            ClassLabel::V(i) => ClassLabel::V(i.mirror()),
            ClassLabel::B(a, b) => {
                let (a, b) = pair(a, b);
                ClassLabel::B(a, b)
            }
            ClassLabel::T(a, b) => {
                let (a, b) = pair(a, b);
                ClassLabel::T(a, b)
            }
            ClassLabel::X(i, k) => ClassLabel::X(i.mirror(), k.mirror()),
            ClassLabel::Q(i, l) => ClassLabel::Q(i.mirror(), l.mirror()),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::N => f.write_str("N"),
            ClassLabel::V(i) => write!(f, "V({i})"),
            ClassLabel::B(a, b) => write!(f, "B({a},{b})"),
            ClassLabel::T(a, b) => write!(f, "T({a},{b})"),
            ClassLabel::X(i, k) => write!(f, "X({i},{k})"),
            ClassLabel::Q(i, l) => write!(f, "Q({i},{l})"),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnknownPattern(format!("label `{s}`"));
        if s == "N" {
            return Ok(ClassLabel::N);
        }
        let (head, rest) = s.split_at(1);
        let args = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let paths: Vec<Path> = args.split(',').map(str::parse).collect::<Result<_>>()?;
        let label = match (head, paths.as_slice()) {
            ("V", [i]) => ClassLabel::V(*i),
            ("B", [a, b]) => {
                let (a, b) = canonical_outer_pair(*a, *b).ok_or_else(bad)?;
                ClassLabel::B(a, b)
            }
            ("T", [a, b]) => {
                let (a, b) = canonical_outer_pair(*a, *b).ok_or_else(bad)?;
                ClassLabel::T(a, b)
            }
            ("X", [i, k]) => ClassLabel::X(*i, *k),
            ("Q", [i, l]) => ClassLabel::Q(*i, *l),
            _ => return Err(bad()),
        };
        if SUBCLASS_CORNERS.iter().any(|(l, _)| *l == label) {
            Ok(label)
        } else {
            Err(bad())
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A vertex of the orthogonality arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    Path(Path),
    N(Path),
    Theta(Path),
}

impl Corner {
    pub fn ray(&self, system: &PathSystem) -> Result<RayState> {
        Ok(match *self {
            Corner::Path(p) => system.ray(p),
            Corner::N(i) => n_state(system, i)?.ray,
            Corner::Theta(k) => theta_state(system, k)?.ray,
        })
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corner::Path(p) => write!(f, "{p}"),
            Corner::N(i) => write!(f, "N_{i}"),
            Corner::Theta(k) => write!(f, "theta_{k}"),
        }
    }
}

use Corner::{Path as C, Theta as Th, N as Nc};
use Path::{One, Three, Two, D1, D2, F, P1, P2, S1, S2};

/// Corner states of every sub-class polygon.
///
/// V(i): outer `i` and the two `N_j` with `j` orthogonal to `i`.
/// B(i,j): outer `i`, `j` and `N_k` with `k` orthogonal to both.
/// T(i,j): outer `i`, `j` and the inner path opposite to that `k`.
/// X(i,k): outer `i`, inner `k` and one theta state.
/// Q(i,l): outer `i`, inner `l` and two theta states.
pub const SUBCLASS_CORNERS: [(ClassLabel, &[Corner]); 31] = [
    (ClassLabel::N, &[Nc(F), Nc(One), Nc(S2), Nc(S1), Nc(Two)]),
    (ClassLabel::V(F), &[C(F), Nc(S1), Nc(S2)]),
    (ClassLabel::V(One), &[C(One), Nc(Two), Nc(S1)]),
    (ClassLabel::V(S2), &[C(S2), Nc(Two), Nc(F)]),
    (ClassLabel::V(S1), &[C(S1), Nc(One), Nc(F)]),
    (ClassLabel::V(Two), &[C(Two), Nc(One), Nc(S2)]),
    (ClassLabel::B(One, F), &[C(One), C(F), Nc(S1)]),
    (ClassLabel::B(One, S2), &[C(One), C(S2), Nc(Two)]),
    (ClassLabel::B(S1, S2), &[C(S1), C(S2), Nc(F)]),
    (ClassLabel::B(Two, S1), &[C(Two), C(S1), Nc(One)]),
    (ClassLabel::B(Two, F), &[C(Two), C(F), Nc(S2)]),
    (ClassLabel::T(One, F), &[C(One), C(F), C(D2)]),
    (ClassLabel::T(One, S2), &[C(One), C(S2), C(P1)]),
    (ClassLabel::T(S1, S2), &[C(S1), C(S2), C(Three)]),
    (ClassLabel::T(Two, S1), &[C(Two), C(S1), C(P2)]),
    (ClassLabel::T(Two, F), &[C(Two), C(F), C(D1)]),
    (ClassLabel::X(One, P1), &[C(One), C(P1), Th(Three)]),
    (ClassLabel::X(One, D2), &[C(One), C(D2), Th(D1)]),
    (ClassLabel::X(Two, P2), &[C(Two), C(P2), Th(Three)]),
    (ClassLabel::X(Two, D1), &[C(Two), C(D1), Th(D2)]),
    (ClassLabel::X(F, D1), &[C(F), C(D1), Th(P2)]),
    (ClassLabel::X(F, D2), &[C(F), C(D2), Th(P1)]),
    (ClassLabel::X(S1, Three), &[C(S1), C(Three), Th(P1)]),
    (ClassLabel::X(S1, P2), &[C(S1), C(P2), Th(D1)]),
    (ClassLabel::X(S2, Three), &[C(S2), C(Three), Th(P2)]),
    (ClassLabel::X(S2, P1), &[C(S2), C(P1), Th(D2)]),
    (ClassLabel::Q(One, P2), &[C(One), C(P2), Th(Three), Th(D1)]),
    (ClassLabel::Q(Two, P1), &[C(Two), C(P1), Th(Three), Th(D2)]),
    (ClassLabel::Q(F, Three), &[C(F), C(Three), Th(P1), Th(P2)]),
    (ClassLabel::Q(S1, D2), &[C(S1), C(D2), Th(D1), Th(P1)]),
    (ClassLabel::Q(S2, D1), &[C(S2), C(D1), Th(D2), Th(P2)]),
];

/// Normalized sum of the corner rays, with each ray's sign chosen so the
/// corners sit on a common side of the sphere.
pub fn corner_centroid(corners: &[RayState]) -> Result<RayState> {
    let Some((first, rest)) = corners.split_first() else {
        return Err(Error::ZeroVector(0.0));
    };
    let mut best: Option<Vec3> = None;
    for signs in 0u32..(1 << rest.len()) {
        let mut s = first.coeffs();
        for (k, r) in rest.iter().enumerate() {
            let sign = if signs & (1 << k) == 0 { 1.0 } else { -1.0 };
            let c = r.coeffs();
            for d in 0..3 {
                s[d] += sign * c[d];
            }
        }
        if best.is_none_or(|b| norm(&s) > norm(&b)) {
            best = Some(s);
        }
    }
    normalize(best.expect("at least one sign choice"))
}

/// Lookup from strict sign patterns to the 31 sub-classes.
#[derive(Clone, Debug)]
pub struct SubclassTable {
    system: PathSystem,
    entries: Vec<(ClassLabel, SignPattern)>,
    by_mask: Vec<Option<u8>>,
}

/// Evaluates the strict pattern at each sub-class centroid and indexes it.
pub fn build_subclass_table(system: &PathSystem) -> Result<SubclassTable> {
    let mut entries = Vec::with_capacity(SUBCLASS_CORNERS.len());
    let mut by_mask = vec![None; 1 << KD_PAIRS.len()];
    for (label, corners) in SUBCLASS_CORNERS {
        let rays = corners.iter().map(|c| c.ray(system)).collect::<Result<Vec<_>>>()?;
        let center = corner_centroid(&rays)?;
        let pattern = sign_pattern(&kd_profile(&center, system), DEFAULT_TOL);
        if !pattern.is_strict() {
            return Err(Error::TableInconsistency {
                first: label.to_string(),
                second: "a polygon boundary".to_string(),
                pattern: pattern.to_string(),
            });
        }
        let slot = &mut by_mask[pattern.negative_mask() as usize];
        if let Some(k) = *slot {
            let (other, _): &(ClassLabel, SignPattern) = &entries[k as usize];
            return Err(Error::TableInconsistency {
                first: other.to_string(),
                second: label.to_string(),
                pattern: pattern.to_string(),
            });
        }
        *slot = Some(entries.len() as u8);
        entries.push((label, pattern));
    }
    Ok(SubclassTable {
        system: system.clone(),
        entries,
        by_mask,
    })
}

impl SubclassTable {
    /// Table for the default interferometer, built on first use.
    pub fn standard() -> &'static SubclassTable {
        static TABLE: OnceLock<SubclassTable> = OnceLock::new();
        TABLE.get_or_init(|| build_subclass_table(&PathSystem::standard()).expect("default table is consistent"))
    }

    pub fn system(&self) -> &PathSystem {
        &self.system
    }

    pub fn entries(&self) -> &[(ClassLabel, SignPattern)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn pattern_of(&self, label: ClassLabel) -> Option<SignPattern> {
        self.entries.iter().find(|(l, _)| *l == label).map(|(_, p)| *p)
    }

    pub fn lookup(&self, strict: &SignPattern) -> Option<ClassLabel> {
        if !strict.is_strict() {
            return None;
        }
        self.by_mask[strict.negative_mask() as usize].map(|k| self.entries[k as usize].0)
    }

    /// Every sub-class consistent with `pattern`, each zero read as either sign.
    pub fn labels_for(&self, pattern: &SignPattern) -> Vec<ClassLabel> {
        let neg = pattern.negative_mask();
        let zero = pattern.zero_mask();
        let mut hits: Vec<u8> = Vec::new();
        let mut sub = zero;
        loop {
            if let Some(k) = self.by_mask[(neg | sub) as usize] {
                hits.push(k);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & zero;
        }
        hits.sort_unstable();
        hits.into_iter().map(|k| self.entries[k as usize].0).collect()
    }

    pub fn classify(&self, psi: &RayState, tol: f64) -> Result<ClassificationResult> {
        let pattern = sign_pattern(&kd_profile(psi, &self.system), tol);
        let labels = self.labels_for(&pattern);
        if labels.is_empty() {
            return Err(Error::UnknownPattern(pattern.to_string()));
        }
        Ok(ClassificationResult { state: *psi, pattern, labels })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub state: RayState,
    pub pattern: SignPattern,
    pub labels: Vec<ClassLabel>,
}

impl ClassificationResult {
    pub fn is_singleton(&self) -> bool {
        self.labels.len() == 1
    }

    pub fn classes(&self) -> Vec<Class> {
        let mut c: Vec<Class> = self.labels.iter().map(|l| l.class()).collect();
        c.dedup();
        c
    }
}

/// Classifies against the default interferometer.
pub fn classify(psi: &RayState, tol: f64) -> Result<ClassificationResult> {
    SubclassTable::standard().classify(psi, tol)
}
