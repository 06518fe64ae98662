use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{det, LatticeVector, SquareIntMatrix};

/// A complete simplicial fan given by primitive rays and maximal cones.
///
/// Construction only checks structure (dimensions, index ranges, primitive
/// rays). Smoothness and completeness are reported by [`Fan::validate`] and
/// cached, so an incomplete fan can still be built and diagnosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
    diagnostics: FanDiagnostics,
}

/// Result of checking a fan for smoothness and completeness.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FanDiagnostics {
    pub smooth: bool,
    pub complete: bool,
    /// Maximal cones whose ray matrix has `|det| != 1`, with the determinant.
    #[serde(serialize_with = "serialize_singular")]
    pub singular_cones: Vec<(usize, BigInt)>,
    /// Ridges (sorted ray index sets) not shared by exactly two maximal cones,
    /// with the number of cones containing them.
    pub unpaired_ridges: Vec<(Vec<usize>, usize)>,
    /// Pairs of maximal cones spanned by the same rays.
    pub duplicate_cones: Vec<(usize, usize)>,
}

fn serialize_singular<S: serde::Serializer>(
    v: &[(usize, BigInt)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(c, d)| (c, d.to_string())))
}

impl FanDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.smooth && self.complete
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for (c, d) in &self.singular_cones {
            parts.push(format!("cone {c} has determinant {d}"));
        }
        for (r, k) in &self.unpaired_ridges {
            parts.push(format!("ridge {r:?} lies in {k} maximal cones"));
        }
        for (a, b) in &self.duplicate_cones {
            parts.push(format!("cones {a} and {b} coincide"));
        }
        if parts.is_empty() {
            "ok".into()
        } else {
            parts.join("; ")
        }
    }
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedFan("dimension must be at least 1".into()));
        }
        if rays.is_empty() {
            return Err(Error::MalformedFan("no rays".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::MalformedFan(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    r.dim()
                )));
            }
            if !r.is_primitive() {
                return Err(Error::MalformedFan(format!("ray {i} = {r} is not primitive")));
            }
        }
        for (c, cone) in max_cones.iter().enumerate() {
            if cone.len() != dim {
                return Err(Error::MalformedFan(format!(
                    "cone {c} has {} rays, expected {dim}",
                    cone.len()
                )));
            }
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::MalformedFan(format!("cone {c} references ray {bad}")));
            }
            let distinct: BTreeSet<_> = cone.iter().collect();
            if distinct.len() != cone.len() {
                return Err(Error::MalformedFan(format!("cone {c} repeats a ray")));
            }
        }
        let mut fan = Fan {
            dim,
            rays,
            max_cones,
            diagnostics: FanDiagnostics::default(),
        };
        fan.diagnostics = fan.compute_diagnostics();
        Ok(fan)
    }

    pub fn from_i64(dim: usize, rays: &[Vec<i64>], max_cones: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(dim, rays.iter().map(|r| LatticeVector::from_i64(r)).collect(), max_cones)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn num_cones(&self) -> usize {
        self.max_cones.len()
    }

    pub fn cone(&self, index: usize) -> Result<&[usize]> {
        self.max_cones
            .get(index)
            .map(Vec::as_slice)
            .ok_or(Error::ConeOutOfRange { cone: index })
    }

    /// Matrix whose rows are the rays of the given maximal cone, in cone order.
    pub fn cone_matrix(&self, index: usize) -> Result<SquareIntMatrix> {
        let cone = self.cone(index)?;
        let rows: Vec<&LatticeVector> = cone.iter().map(|&i| &self.rays[i]).collect();
        SquareIntMatrix::from_row_vectors(&rows)
    }

    pub fn validate(&self) -> &FanDiagnostics {
        &self.diagnostics
    }

    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_valid()
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::FanInvalid(self.diagnostics.summary()))
        }
    }

    /// Rays as machine integers.
    pub fn rays_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.rays.iter().map(LatticeVector::to_i64).collect()
    }

    fn compute_diagnostics(&self) -> FanDiagnostics {
        let mut singular_cones = Vec::new();
        for c in 0..self.max_cones.len() {
            let d = det(&self.cone_matrix(c).expect("cone shape checked"));
            if !d.abs().is_one() {
                singular_cones.push((c, d));
            }
        }

        let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut duplicate_cones = Vec::new();
        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (c, cone) in self.max_cones.iter().enumerate() {
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            if let Some(&prev) = seen.get(&sorted) {
                duplicate_cones.push((prev, c));
                continue;
            }
            seen.insert(sorted.clone(), c);
            for skip in 0..sorted.len() {
                let ridge: Vec<usize> = sorted
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &r)| r)
                    .collect();
                *ridges.entry(ridge).or_default() += 1;
            }
        }
        let unpaired_ridges: Vec<_> = ridges.into_iter().filter(|&(_, k)| k != 2).collect();
        let complete = !self.max_cones.is_empty() && unpaired_ridges.is_empty() && duplicate_cones.is_empty();
        FanDiagnostics {
            smooth: singular_cones.is_empty(),
            complete,
            singular_cones,
            unpaired_ridges,
            duplicate_cones,
        }
    }
}

/// Smoothness and completeness diagnostics of a fan.
pub fn validate_fan(fan: &Fan) -> FanDiagnostics {
    fan.validate().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2_rays() -> Vec<Vec<i64>> {
        vec![vec![1, 0], vec![0, 1], vec![-1, -1]]
    }

    #[test]
    fn projective_plane_is_valid() {
        let fan = Fan::from_i64(2, &p2_rays(), vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        let d = validate_fan(&fan);
        assert!(d.smooth && d.complete, "{}", d.summary());
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let fan = Fan::from_i64(2, &p2_rays(), vec![vec![0, 1], vec![1, 2]]).unwrap();
        let d = validate_fan(&fan);
        assert!(d.smooth);
        assert!(!d.complete);
        assert_eq!(d.unpaired_ridges.len(), 2);
    }

    #[test]
    fn weighted_projective_plane_is_singular() {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, -2]];
        let fan = Fan::from_i64(2, &rays, vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        let d = validate_fan(&fan);
        assert!(!d.smooth);
        assert!(d.complete);
        assert_eq!(d.singular_cones, vec![(2, BigInt::from(2))]);
    }

    #[test]
    fn duplicate_cone_detected() {
        let fan = Fan::from_i64(
            2,
            &p2_rays(),
            vec![vec![0, 1], vec![1, 2], vec![2, 0], vec![1, 0]],
        )
        .unwrap();
        assert!(!fan.is_valid());
        assert_eq!(fan.validate().duplicate_cones, vec![(0, 3)]);
    }

    #[test]
    fn projective_line() {
        let fan = Fan::from_i64(1, &[vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        assert!(fan.is_valid());
        let half = Fan::from_i64(1, &[vec![1], vec![-1]], vec![vec![0]]).unwrap();
        assert!(!half.validate().complete);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            Fan::from_i64(2, &[vec![2, 0], vec![0, 1]], vec![vec![0, 1]]),
            Err(Error::MalformedFan(_))
        ));
        assert!(matches!(
            Fan::from_i64(2, &p2_rays(), vec![vec![0, 3]]),
            Err(Error::MalformedFan(_))
        ));
        assert!(matches!(
            Fan::from_i64(2, &p2_rays(), vec![vec![0]]),
            Err(Error::MalformedFan(_))
        ));
        assert!(matches!(
            Fan::from_i64(2, &[vec![1, 0, 0]], vec![]),
            Err(Error::MalformedFan(_))
        ));
    }
}
