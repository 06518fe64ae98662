use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{ceil, floor};
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RationalVector};
use crate::toric::divisor::{cone_vertex, ToricDivisor};

/// One ray inequality `<u, normal> >= -bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Halfspace {
    pub ray: usize,
    pub normal: LatticeVector,
    #[serde(serialize_with = "crate::serde_num::bigint")]
    pub bound: BigInt,
}

impl Halfspace {
    pub fn contains(&self, u: &RationalVector) -> bool {
        u.dot_lattice(&self.normal) >= BigRational::from_integer(-self.bound.clone())
    }
}

/// `P_D` as an H-representation together with its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePolytopeH {
    pub dim: usize,
    pub inequalities: Vec<Halfspace>,
    /// Sorted, duplicate-free.
    pub vertices: Vec<RationalVector>,
}

impl LatticePolytopeH {
    pub fn contains(&self, u: &RationalVector) -> bool {
        self.inequalities.iter().all(|h| h.contains(u))
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Integer bounding box `[lo, hi]` per coordinate of `m·P`, from the vertices.
    pub fn bounding_box(&self, m: &BigInt) -> Option<Vec<(BigInt, BigInt)>> {
        let first = self.vertices.first()?;
        let scale = BigRational::from_integer(m.clone());
        let mut lo: Vec<BigRational> = first.0.iter().map(|c| c * &scale).collect();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            for (i, c) in v.0.iter().enumerate() {
                let c = c * &scale;
                if c < lo[i] {
                    lo[i] = c.clone();
                }
                if c > hi[i] {
                    hi[i] = c;
                }
            }
        }
        Some(lo.iter().zip(&hi).map(|(l, h)| (ceil(l), floor(h))).collect())
    }

    /// Inequalities as `(normal, bound)` machine integers for `m·P`.
    pub(crate) fn scaled_i64(&self, m: i64) -> Result<Vec<(Vec<i64>, i64)>> {
        let overflow = || Error::InvalidArgument("polytope data exceeds 64-bit range".into());
        self.inequalities
            .iter()
            .map(|h| {
                let n = h.normal.to_i64().ok_or_else(overflow)?;
                let b = h.bound.to_i64().and_then(|b| b.checked_mul(m)).ok_or_else(overflow)?;
                Ok((n, b))
            })
            .collect()
    }
}

/// H-representation `<u, v_i> >= -a_i` and vertices of `P_D`.
///
/// Vertices are the solutions of the tight systems of the maximal cones that
/// satisfy every inequality. A non-nef divisor may yield an empty or
/// lower-dimensional result.
pub fn polytope_of(divisor: &ToricDivisor) -> Result<LatticePolytopeH> {
    let fan = divisor.fan();
    fan.require_valid()?;
    let inequalities: Vec<Halfspace> = fan
        .rays()
        .iter()
        .zip(divisor.coeffs())
        .enumerate()
        .map(|(ray, (v, a))| Halfspace {
            ray,
            normal: v.clone(),
            bound: a.clone(),
        })
        .collect();
    let mut vertices = Vec::new();
    for c in 0..fan.num_cones() {
        let u = cone_vertex(divisor, c)?;
        if inequalities.iter().all(|h| h.contains(&u)) {
            vertices.push(u);
        }
    }
    vertices.sort();
    vertices.dedup();
    Ok(LatticePolytopeH {
        dim: fan.dim(),
        inequalities,
        vertices,
    })
}

/// Calls `visit` on every lattice point of `m·P_D` in lexicographic order.
///
/// Stops with [`Error::SizeLimit`] once more than `cap` points were seen.
/// Returns the number of points.
pub fn for_each_lattice_point(
    polytope: &LatticePolytopeH,
    m: u64,
    cap: usize,
    mut visit: impl FnMut(&[i64]),
) -> Result<usize> {
    let n = polytope.dim;
    let mi = i64::try_from(m).map_err(|_| Error::InvalidArgument("m too large".into()))?;
    let Some(bbox) = polytope.bounding_box(&BigInt::from(m)) else {
        return Ok(0);
    };
    let bbox: Vec<(i64, i64)> = bbox
        .iter()
        .map(|(l, h)| Some((l.to_i64()?, h.to_i64()?)))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArgument("bounding box exceeds 64-bit range".into()))?;
    if bbox.iter().any(|(l, h)| l > h) {
        return Ok(0);
    }
    let ineqs = polytope.scaled_i64(mi)?;
    let mut point: Vec<i64> = bbox.iter().map(|&(l, _)| l).collect();
    let mut count = 0usize;
    loop {
        let inside = ineqs
            .iter()
            .all(|(normal, bound)| normal.iter().zip(&point).map(|(a, b)| a * b).sum::<i64>() >= -bound);
        if inside {
            count += 1;
            if count > cap {
                return Err(Error::SizeLimit {
                    size: count as u128,
                    cap,
                });
            }
            visit(&point);
        }
        // Odometer increment, last coordinate fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            if point[i] < bbox[i].1 {
                point[i] += 1;
                for (j, p) in point.iter_mut().enumerate().skip(i + 1) {
                    *p = bbox[j].0;
                }
                break;
            }
        }
    }
}

impl LatticePolytopeH {
    /// Whether `m·P` contains the lattice point `u`.
    pub fn contains_scaled(&self, u: &LatticeVector, m: &BigInt) -> bool {
        self.inequalities
            .iter()
            .all(|h| u.dot(&h.normal) >= -(&h.bound * m))
    }

    pub fn scaled_vertices(&self, m: &BigInt) -> Vec<RationalVector> {
        let s = BigRational::from_integer(m.clone());
        self.vertices.iter().map(|v| v.scale(&s)).collect()
    }
}
