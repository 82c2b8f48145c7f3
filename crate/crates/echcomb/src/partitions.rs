//! Special partitions from the maximal concave lattice path under `y = φx`,
//! and the elliptic end paths of lens profiles.

use num_integer::Integer;

use crate::lattice::{floor, int, Rat, Vec2};
use crate::profile::{LensExtension, Profile, ProfileError};
use crate::region::{Edge, Path};

/// Maximal concave lattice path from `(0,0)` to `(m, ⌊mφ⌋)` below `y = φx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPath {
    pub phi: Rat,
    pub m: i64,
    /// Every lattice point on the path, in order.
    pub vertices: Vec<(i64, i64)>,
    /// Horizontal runs of the primitive segments, in path order.
    pub entries: Vec<i64>,
}

pub fn lambda_plus(phi: Rat, m: i64) -> PartitionPath {
    let pts: Vec<(i64, i64)> = (0..=m).map(|k| (k, floor(&(phi * int(k))))).collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let turn = (b.0 - a.0) * (p.1 - b.1) - (b.1 - a.1) * (p.0 - b.0);
            if turn >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut vertices = vec![hull[0]];
    let mut entries = Vec::new();
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let g = dx.gcd(&dy).max(1);
        for s in 1..=g {
            vertices.push((w[0].0 + s * dx / g, w[0].1 + s * dy / g));
            entries.push(dx / g);
        }
    }
    PartitionPath { phi, m, vertices, entries }
}

pub fn p_plus(phi: Rat, m: i64) -> Vec<i64> {
    lambda_plus(phi, m).entries
}

pub fn p_minus(phi: Rat, m: i64) -> Vec<i64> {
    lambda_plus(-phi, m).entries
}

/// Both partitions of a positive hyperbolic orbit.
pub fn hyperbolic_partition(m: i64) -> Vec<i64> {
    vec![1; m.max(0) as usize]
}

impl PartitionPath {
    /// Twice the signed area between the path and the x-axis.
    pub fn twice_area(&self) -> i64 {
        self.vertices
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }
}

/// The all-elliptic path on `Vᵢ` associated with `(eᵢ, m)`.
pub fn elliptic_end_path(
    i: usize,
    m: i64,
    p: &Profile,
    ext: &LensExtension,
) -> Result<Path, ProfileError> {
    let l = p.lens.as_ref().ok_or(ProfileError::Unsupported(p.geometry))?;
    if m == 0 {
        return Ok(Path::new());
    }
    if m >= p.cutoff() {
        return Err(ProfileError::Invalid(format!("end multiplicity {m} reaches the action cutoff")));
    }
    let (u, v, phi) = (l.u(i), l.v(i), l.phi(i));
    let mut path = Path::new();
    for n in p_plus(phi, m) {
        let w: Vec2 = n * v - floor(&(phi * int(n))) * u;
        let x = ext
            .v_family_at(i, w.primitive())
            .ok_or_else(|| ProfileError::Invalid(format!("no family on V{i} at direction {w}")))?;
        path.add(x, Edge::new(w.primitive(), 1, 1, 0))
            .map_err(|e| ProfileError::Invalid(e.to_string()))?;
    }
    Ok(path)
}
