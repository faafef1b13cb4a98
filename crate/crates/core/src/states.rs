//! Non-path states fixed by pairs of orthogonality conditions.
//!
//! `N_i` (one per outer path `i`) has zero probability in the inner paths of
//! the two contexts bordering the contexts of `i`, yet a non-zero probability
//! `P(i)`. `theta_k` (one per inner path `k`) is orthogonal to `k` and to the
//! outer path opposite to it. Both families, and the three-state joint
//! measurement basis, are built from these conditions rather than from
//! tabulated coefficients.

use serde::Serialize;

use crate::error::Result;
use crate::hilbert::{normalize, orthogonal_to_pair, RayState};
use crate::interferometer::{Path, PathSystem, CONTEXTS};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Path,
    N,
    Theta,
    Basis,
    Example,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedState {
    pub name: String,
    pub kind: StateKind,
    #[serde(rename = "vector")]
    pub ray: RayState,
    /// Names of the two states this one is orthogonal to (empty for path states).
    pub definition: Vec<String>,
}

/// The two inner paths whose zero probability defines `N_i`.
pub fn n_state_conditions(i: Path) -> Result<(Path, Path)> {
    let i = i.expect_outer()?;
    let own: Vec<usize> = (0..5).filter(|&k| CONTEXTS[k].contains(i)).collect();
    let mut border = (0..5)
        .filter(|k| !own.contains(k))
        .filter(|&k| own.iter().any(|&c| (c + 1) % 5 == k || (k + 1) % 5 == c))
        .map(|k| CONTEXTS[k].inner());
    let (a, b) = (border.next(), border.next());
    Ok((a.expect("two bordering contexts"), b.expect("two bordering contexts")))
}

pub fn n_state(system: &PathSystem, i: Path) -> Result<NamedState> {
    let (a, b) = n_state_conditions(i)?;
    Ok(NamedState {
        name: format!("N_{i}"),
        kind: StateKind::N,
        ray: orthogonal_to_pair(&system.ray(a), &system.ray(b))?,
        definition: vec![a.to_string(), b.to_string()],
    })
}

pub fn theta_state(system: &PathSystem, k: Path) -> Result<NamedState> {
    let k = k.expect_inner()?;
    let o = k.opposite();
    Ok(NamedState {
        name: format!("theta_{k}"),
        kind: StateKind::Theta,
        ray: orthogonal_to_pair(&system.ray(k), &system.ray(o))?,
        definition: vec![k.to_string(), o.to_string()],
    })
}

/// `P(i | N_i)`: the probability that classical path reasoning forbids.
pub fn hardy_value(system: &PathSystem, i: Path) -> Result<f64> {
    let n = n_state(system, i)?;
    Ok(system.ray(i).overlap(&n.ray))
}

fn orthogonal_state(name: &str, a: &NamedState, b: &NamedState) -> Result<NamedState> {
    Ok(NamedState {
        name: name.to_string(),
        kind: StateKind::Basis,
        ray: orthogonal_to_pair(&a.ray, &b.ray)?,
        definition: vec![a.name.clone(), b.name.clone()],
    })
}

/// Orthogonal basis `[Q(S2,D1), T(2,S1), T(1,f)]` that resolves one
/// high-fidelity outcome per context.
pub fn joint_basis(system: &PathSystem) -> Result<[NamedState; 3]> {
    let q = orthogonal_state("Q(S2,D1)", &n_state(system, Path::S2)?, &theta_state(system, Path::D1)?)?;
    let one = path_state(system, Path::One);
    let t_2s1 = orthogonal_state("T(2,S1)", &one, &q)?;
    let t_1f = orthogonal_state("T(1,f)", &q, &t_2s1)?;
    Ok([q, t_2s1, t_1f])
}

/// Coefficients `<basis_j | psi>` in the joint basis.
pub fn decompose_in_basis(system: &PathSystem, psi: &RayState) -> Result<[f64; 3]> {
    let basis = joint_basis(system)?;
    Ok(basis.each_ref().map(|b| b.ray.inner(psi)))
}

/// Representative of sub-class `T(2,f)`, used to illustrate the joint basis.
pub fn t_2f_example() -> NamedState {
    NamedState {
        name: "T(2,f)".to_string(),
        kind: StateKind::Example,
        ray: normalize([1.0, 4.0, -2.0]).expect("non-zero"),
        definition: Vec::new(),
    }
}

pub fn path_state(system: &PathSystem, p: Path) -> NamedState {
    NamedState {
        name: p.to_string(),
        kind: StateKind::Path,
        ray: system.ray(p),
        definition: Vec::new(),
    }
}

/// The twenty vertices of the orthogonality arrangement: ten paths, five
/// `N_i` (in pentagon order) and five `theta_k`.
pub fn named_states(system: &PathSystem) -> Result<Vec<NamedState>> {
    let mut out: Vec<NamedState> = Path::ALL.iter().map(|&p| path_state(system, p)).collect();
    for i in Path::OUTER {
        out.push(n_state(system, i)?);
    }
    for k in Path::INNER {
        out.push(theta_state(system, k)?);
    }
    Ok(out)
}
