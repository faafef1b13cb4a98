//! Path states, Kirkwood-Dirac (KD) values and sign-pattern classification
//! for a three-path interferometer with five measurement contexts.

pub mod atlas;
pub mod classify;
pub mod eigen;
pub mod error;
pub mod hilbert;
pub mod interferometer;
pub mod kd;
pub mod numeric;
pub mod states;
pub mod verify;

pub use classify::{classify, ClassLabel, Class, ClassificationResult, SignPattern, SubclassTable, Trit, DEFAULT_TOL};
pub use error::{Error, Result};
pub use hilbert::{RayState, SpherePoint};
pub use interferometer::{probabilities, InterferometerSpec, Path, PathKind, PathProbabilities, PathSystem};
pub use kd::{kd_profile, kd_value, max_violation, KdProfile, MaxViolation};
pub use states::NamedState;
