use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{invert_unimodular, LatticeVector, RationalVector, SquareIntMatrix};
use crate::toric::divisor::{cone_vertex, slack, ToricDivisor};

/// Local coordinates at the fixed point of a maximal cone.
///
/// For `u ∈ M` the section `χ^u` of `O(D)` restricts to the monomial with
/// exponent `to_local·(u - vertex)` in the chart's polynomial coordinates.
/// The rows of `to_local` are the rays of the cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexChart {
    pub cone_index: usize,
    pub vertex: RationalVector,
    pub to_local: SquareIntMatrix,
}

impl VertexChart {
    pub fn local(&self, u: &RationalVector) -> RationalVector {
        self.to_local.mul_rational(&u.sub(&self.vertex))
    }

    /// Local exponent of `χ^u` as a section of `O(mD)` (vertex scaled by `m`).
    pub fn local_scaled(&self, u: &LatticeVector, m: &BigInt) -> RationalVector {
        let shifted = u.to_rational().sub(&self.vertex.scale(&BigRational::from_integer(m.clone())));
        self.to_local.mul_rational(&shifted)
    }
}

/// One inequality `<normal, x> >= bound` of the charted polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartedFacet {
    /// Ray of the fan this facet comes from.
    pub ray: usize,
    pub normal: RationalVector,
    #[serde(serialize_with = "crate::serde_num::ratio")]
    pub bound: BigRational,
}

/// `P_D` moved to the chart at a vertex: the vertex sits at the origin and the
/// `n` facets through it are the coordinate hyperplanes, listed first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartedPolytope {
    pub dim: usize,
    pub facets: Vec<ChartedFacet>,
}

impl ChartedPolytope {
    /// Builds a charted polytope from explicit data. The first `dim` facets
    /// must be the coordinate facets `x_i >= 0`.
    pub fn new(dim: usize, facets: Vec<ChartedFacet>) -> Result<Self> {
        if facets.len() < dim {
            return Err(Error::Shape(format!("{} facets in dimension {dim}", facets.len())));
        }
        for (i, f) in facets.iter().enumerate() {
            if f.normal.dim() != dim {
                return Err(Error::Shape(format!("facet {i} normal has wrong length")));
            }
            if i < dim {
                let unit = (0..dim).all(|j| f.normal.0[j] == BigRational::from_integer(BigInt::from(i == j)));
                if !unit || !f.bound.is_zero() {
                    return Err(Error::NotNormalized);
                }
            }
        }
        Ok(ChartedPolytope { dim, facets })
    }

    /// Convenience constructor from integer data `(normal, bound)`; the
    /// coordinate facets are prepended automatically.
    pub fn from_i64(dim: usize, extra: &[(Vec<i64>, i64)]) -> Result<Self> {
        let mut facets: Vec<ChartedFacet> = (0..dim)
            .map(|i| ChartedFacet {
                ray: i,
                normal: RationalVector::from_i64(&(0..dim).map(|j| i64::from(i == j)).collect::<Vec<_>>()),
                bound: BigRational::zero(),
            })
            .collect();
        for (k, (normal, bound)) in extra.iter().enumerate() {
            facets.push(ChartedFacet {
                ray: dim + k,
                normal: RationalVector::from_i64(normal),
                bound: BigRational::from_integer(BigInt::from(*bound)),
            });
        }
        Self::new(dim, facets)
    }

    /// The unit simplex `{x >= 0, Σx <= 1}` scaled by `r`.
    pub fn simplex(dim: usize, r: i64) -> Self {
        Self::from_i64(dim, &[(vec![-1; dim], -r)]).expect("well-formed")
    }

    /// The box `Π [0, sides_i]`.
    pub fn boxed(sides: &[i64]) -> Self {
        let dim = sides.len();
        let extra: Vec<_> = sides
            .iter()
            .enumerate()
            .map(|(i, &s)| ((0..dim).map(|j| if i == j { -1 } else { 0 }).collect(), -s))
            .collect();
        Self::from_i64(dim, &extra).expect("well-formed")
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.facets.iter().all(|f| f.normal.dot(x) >= f.bound)
    }

    /// Whether `m` times the polytope contains the integer point `x`.
    pub fn contains_scaled_i64(&self, x: &[i64], m: u64) -> bool {
        let m = BigRational::from_integer(BigInt::from(m));
        self.facets.iter().all(|f| {
            let lhs: BigRational = f
                .normal
                .0
                .iter()
                .zip(x)
                .map(|(w, &xi)| w * BigRational::from_integer(BigInt::from(xi)))
                .sum();
            lhs >= &f.bound * &m
        })
    }

    /// Integer facet data, when every normal and bound is integral and fits.
    pub fn to_i64(&self) -> Option<Vec<(Vec<i64>, i64)>> {
        self.facets
            .iter()
            .map(|f| {
                let n = f
                    .normal
                    .0
                    .iter()
                    .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
                    .collect::<Option<Vec<_>>>()?;
                let b = if f.bound.is_integer() { f.bound.to_integer().to_i64()? } else { return None };
                Some((n, b))
            })
            .collect()
    }
}

/// Chart of `D` at the fixed point of `cone`.
///
/// The vertex `u_σ` solves `<u, v_i> = -a_i` for the rays of the cone. In the
/// local coordinates `x = B(u - u_σ)` (rows of `B` are the cone's rays) the
/// inequality of a ray `v` becomes `<B^{-T} v, x> >= -a_v - <u_σ, v>`.
pub fn chart_at(divisor: &ToricDivisor, cone: usize) -> Result<(VertexChart, ChartedPolytope)> {
    let fan = divisor.fan();
    fan.require_valid()?;
    let to_local = fan.cone_matrix(cone)?;
    let vertex = cone_vertex(divisor, cone)?;
    if let Some(ray) = (0..fan.num_rays()).find(|&r| slack(divisor, r, &vertex) < BigRational::zero()) {
        return Err(Error::NotAVertex { cone, ray });
    }
    let inv_t = invert_unimodular(&to_local)?.transpose();
    let members = fan.cone(cone)?;

    let facet_for = |ray: usize| -> ChartedFacet {
        let v = &fan.rays()[ray];
        let normal = inv_t.mul_vec(v).to_rational();
        let bound = BigRational::from_integer(-divisor.coeffs()[ray].clone()) - vertex.dot_lattice(v);
        ChartedFacet { ray, normal, bound }
    };
    let mut facets: Vec<ChartedFacet> = members.iter().map(|&r| facet_for(r)).collect();
    facets.extend((0..fan.num_rays()).filter(|r| !members.contains(r)).map(facet_for));

    let chart = VertexChart {
        cone_index: cone,
        vertex,
        to_local,
    };
    Ok((chart, ChartedPolytope::new(fan.dim(), facets)?))
}

/// Vertices of `P_D` in the chart's local coordinates.
pub fn charted_vertices(chart: &VertexChart, global_vertices: &[RationalVector]) -> Vec<RationalVector> {
    global_vertices.iter().map(|v| chart.local(v)).collect()
}
