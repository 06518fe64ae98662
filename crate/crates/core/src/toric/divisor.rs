use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::{solve_exact, RationalVector};
use crate::toric::fan::Fan;

/// A torus-invariant divisor `D = Σ a_i D_i`, one coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDivisor {
    fan: Arc<Fan>,
    coeffs: Vec<BigInt>,
}

impl ToricDivisor {
    pub fn new(fan: Arc<Fan>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != fan.num_rays() {
            return Err(Error::Shape(format!(
                "{} coefficients for {} rays",
                coeffs.len(),
                fan.num_rays()
            )));
        }
        Ok(ToricDivisor { fan, coeffs })
    }

    pub fn from_i64(fan: Arc<Fan>, coeffs: &[i64]) -> Result<Self> {
        Self::new(fan, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    /// `m·D`.
    pub fn multiple(&self, m: &BigInt) -> ToricDivisor {
        ToricDivisor {
            fan: Arc::clone(&self.fan),
            coeffs: self.coeffs.iter().map(|a| a * m).collect(),
        }
    }
}

/// `s1·d1 + s2·d2` on a common fan.
pub fn divisor_combine(d1: &ToricDivisor, d2: &ToricDivisor, s1: &BigInt, s2: &BigInt) -> Result<ToricDivisor> {
    if !Arc::ptr_eq(&d1.fan, &d2.fan) && *d1.fan != *d2.fan {
        return Err(Error::FanMismatch);
    }
    Ok(ToricDivisor {
        fan: Arc::clone(&d1.fan),
        coeffs: d1
            .coeffs
            .iter()
            .zip(&d2.coeffs)
            .map(|(a, b)| s1 * a + s2 * b)
            .collect(),
    })
}

/// The divisor class `K_X + D`, using `K_X = -Σ D_i`.
pub fn adjoint_divisor(d: &ToricDivisor) -> ToricDivisor {
    ToricDivisor {
        fan: Arc::clone(&d.fan),
        coeffs: d.coeffs.iter().map(|a| a - BigInt::one()).collect(),
    }
}

/// The point `u_σ` with `<u_σ, v_i> = -a_i` for every ray `v_i` of the cone.
pub fn cone_vertex(d: &ToricDivisor, cone: usize) -> Result<RationalVector> {
    let fan = &d.fan;
    let matrix = fan.cone_matrix(cone)?;
    let rhs = RationalVector::new(
        fan.cone(cone)?
            .iter()
            .map(|&i| num_rational::BigRational::from_integer(-d.coeffs[i].clone()))
            .collect(),
    );
    solve_exact(&matrix, &rhs)
}

/// Slack `<u, v_i> + a_i` of the ray inequality at `u`.
pub(crate) fn slack(d: &ToricDivisor, ray: usize, u: &RationalVector) -> num_rational::BigRational {
    u.dot_lattice(&d.fan.rays()[ray]) + num_rational::BigRational::from_integer(d.coeffs[ray].clone())
}

/// First ray whose inequality `u_σ` violates, if any.
pub fn nef_violation(d: &ToricDivisor, cone: usize) -> Result<Option<usize>> {
    let u = cone_vertex(d, cone)?;
    Ok((0..d.fan.num_rays()).find(|&r| slack(d, r, &u) < num_traits::Zero::zero()))
}

/// First ray outside the cone whose inequality is not strict at `u_σ`.
pub fn ample_violation(d: &ToricDivisor, cone: usize) -> Result<Option<usize>> {
    let u = cone_vertex(d, cone)?;
    let members = d.fan.cone(cone)?;
    Ok((0..d.fan.num_rays())
        .filter(|r| !members.contains(r))
        .find(|&r| slack(d, r, &u) <= num_traits::Zero::zero()))
}

pub fn is_nef_at(d: &ToricDivisor, cone: usize) -> bool {
    matches!(nef_violation(d, cone), Ok(None))
}

pub fn is_ample_at(d: &ToricDivisor, cone: usize) -> bool {
    matches!(ample_violation(d, cone), Ok(None))
}

/// Every candidate vertex satisfies all ray inequalities.
pub fn is_nef(d: &ToricDivisor) -> bool {
    d.fan.is_valid() && (0..d.fan.num_cones()).all(|c| is_nef_at(d, c))
}

/// Every candidate vertex satisfies the inequalities of rays outside its cone strictly.
pub fn is_ample(d: &ToricDivisor) -> bool {
    d.fan.is_valid() && (0..d.fan.num_cones()).all(|c| is_ample_at(d, c))
}

/// Globally generated at the fixed point of `cone`: `u_σ` is a lattice point of `P_D`.
pub fn is_gg_at(d: &ToricDivisor, cone: usize) -> bool {
    match cone_vertex(d, cone) {
        Ok(u) => u.is_integral() && is_nef_at(d, cone),
        Err(_) => false,
    }
}

pub fn is_globally_generated(d: &ToricDivisor) -> bool {
    d.fan.is_valid() && (0..d.fan.num_cones()).all(|c| is_gg_at(d, c))
}
