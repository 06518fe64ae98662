//! Closed forms for the classical and Frobenius-Seshadri constants at a
//! torus-fixed point, read off the charted polytope.
//!
//! With the fixed point's vertex at the origin and the coordinate facets
//! through it, the classical constant is the largest `r` with `r·Q_n ⊆ P`
//! (`Q_n` the standard simplex) and the Frobenius constant the largest `r`
//! with `r·C_n ⊆ P` (`C_n = [0,1]^n`). For a facet `<w, x> >= c` with `c <= 0`
//! the simplex is limited through its vertex `r·e_i` with the most negative
//! `w_i`, and the cube through its vertex with ones exactly where `w_i < 0`.
//!
//! The jet numbers follow: `s(L^m; x) = m·ε` and `s_F(L^m; x)` is the largest
//! `e` with `p^e - 1 <= m·ε_F`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{big_pow, check_prime, floor};
use crate::error::{Error, Result};
use crate::lattice::RationalVector;
use crate::toric::ChartedPolytope;

/// The facet that limits an inscribed simplex or cube, and the tight vertex
/// of the scaled body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BindingWitness {
    /// Index into [`ChartedPolytope::facets`].
    pub facet: usize,
    /// Ray of the fan the facet comes from.
    pub ray: usize,
    pub vertex: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeshadriReport {
    #[serde(serialize_with = "crate::serde_num::ratio")]
    pub epsilon: BigRational,
    #[serde(serialize_with = "crate::serde_num::ratio")]
    pub epsilon_frobenius: BigRational,
    pub binding_facet_classical: BindingWitness,
    pub binding_facet_frobenius: BindingWitness,
}

#[derive(Clone, Copy)]
enum Body {
    Simplex,
    Cube,
}

fn check_normalized(cp: &ChartedPolytope) -> Result<()> {
    if cp.facets.iter().any(|f| f.bound.is_positive()) {
        return Err(Error::NotNormalized);
    }
    Ok(())
}

/// Largest `r >= 0` with `r·body ⊆ cp`, and the facet attaining it.
fn inscribed_scaling(cp: &ChartedPolytope, body: Body) -> Result<(BigRational, BindingWitness)> {
    check_normalized(cp)?;
    let n = cp.dim;
    let mut best: Option<(BigRational, BindingWitness)> = None;
    for (idx, facet) in cp.facets.iter().enumerate() {
        let w = &facet.normal.0;
        // Minimum of <w, ·> over the unit body, and the vertex attaining it.
        let (min_value, unit_vertex) = match body {
            Body::Simplex => {
                let (i, wi) = w
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.cmp(b.1))
                    .expect("dimension >= 1");
                let mut v = RationalVector::zero(n);
                if wi.is_negative() {
                    v.0[i] = BigRational::one();
                }
                (wi.clone().min(BigRational::zero()), v)
            }
            Body::Cube => {
                let v = RationalVector::new(
                    w.iter()
                        .map(|wi| if wi.is_negative() { BigRational::one() } else { BigRational::zero() })
                        .collect(),
                );
                let s: BigRational = w.iter().filter(|wi| wi.is_negative()).sum();
                (s, v)
            }
        };
        if !min_value.is_negative() {
            continue;
        }
        let r = &facet.bound / &min_value;
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            let vertex = unit_vertex.scale(&r);
            best = Some((
                r,
                BindingWitness {
                    facet: idx,
                    ray: facet.ray,
                    vertex,
                },
            ));
        }
    }
    best.ok_or(Error::UnboundedPolytope)
}

/// `ε(L; x) = max{r : r·Q_n ⊆ P}`.
pub fn classical_seshadri(cp: &ChartedPolytope) -> Result<BigRational> {
    inscribed_scaling(cp, Body::Simplex).map(|(r, _)| r)
}

/// `ε_F(L; x) = max{r : r·[0,1]^n ⊆ P}`.
pub fn frobenius_seshadri(cp: &ChartedPolytope) -> Result<BigRational> {
    inscribed_scaling(cp, Body::Cube).map(|(r, _)| r)
}

pub fn seshadri_report(cp: &ChartedPolytope) -> Result<SeshadriReport> {
    let (epsilon, binding_facet_classical) = inscribed_scaling(cp, Body::Simplex)?;
    let (epsilon_frobenius, binding_facet_frobenius) = inscribed_scaling(cp, Body::Cube)?;
    Ok(SeshadriReport {
        epsilon,
        epsilon_frobenius,
        binding_facet_classical,
        binding_facet_frobenius,
    })
}

/// `s(L^m; x) = m·ε(L; x)`.
pub fn classical_jet_number(cp: &ChartedPolytope, m: u64) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let eps = classical_seshadri(cp)?;
    // Integral on lattice polytopes of smooth fans; floor covers arbitrary charts.
    Ok(floor(&(eps * BigRational::from_integer(BigInt::from(m)))))
}

/// Largest `e >= 0` with `p^e - 1 <= m·ε_F`, by exact integer comparison.
fn largest_frobenius_exponent(eps_f: &BigRational, m: u64, p: u64) -> u32 {
    // p^e - 1 <= m·num/den  <=>  p^e - 1 <= floor(m·num/den)
    let bound = (BigInt::from(m) * eps_f.numer()) / eps_f.denom();
    let p_big = BigInt::from(p);
    let mut e = 0u32;
    let mut next = p_big.clone();
    while &next - BigInt::one() <= bound {
        e += 1;
        next *= &p_big;
    }
    e
}

/// `s_F(L^m; x)`: the largest `e` with `(p^e - 1)·C_n ⊆ m·P`, or 0.
pub fn frobenius_jet_number(cp: &ChartedPolytope, m: u64, p: u64) -> Result<u32> {
    check_prime(p)?;
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let eps_f = frobenius_seshadri(cp)?;
    Ok(largest_frobenius_exponent(&eps_f, m, p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JetTableRow {
    pub m: u64,
    #[serde(serialize_with = "crate::serde_num::bigint")]
    pub s_classical: BigInt,
    pub e_frobenius: u32,
    /// `(p^e - 1)/m`.
    #[serde(serialize_with = "crate::serde_num::ratio")]
    pub ratio: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JetTable {
    pub p: u64,
    pub rows: Vec<JetTableRow>,
    /// Largest ratio in `rows` and the first `m` attaining it.
    #[serde(serialize_with = "crate::serde_num::ratio")]
    pub sup: BigRational,
    pub sup_at: u64,
    /// Rows at `m_e = n(p^e - 1) - 1` when the chart is a unit simplex.
    pub simplex_diagnostic: Option<Vec<JetTableRow>>,
}

/// Exponent range of the unit-simplex diagnostic attached by [`ratio_sequence`].
pub const SIMPLEX_DIAGNOSTIC_MAX_E: u32 = 10;

fn row(eps: &BigRational, eps_f: &BigRational, m: u64, p: u64) -> JetTableRow {
    let e = largest_frobenius_exponent(eps_f, m, p);
    let s_classical = floor(&(eps * BigRational::from_integer(BigInt::from(m))));
    JetTableRow {
        m,
        s_classical,
        e_frobenius: e,
        ratio: BigRational::new(big_pow(p, e) - BigInt::one(), BigInt::from(m)),
    }
}

/// Jet numbers and ratios `(p^{s_F(L^m)} - 1)/m` for `m = 1..=m_max`.
pub fn ratio_sequence(cp: &ChartedPolytope, p: u64, m_max: u64) -> Result<JetTable> {
    check_prime(p)?;
    if m_max == 0 {
        return Err(Error::InvalidArgument("m_max must be positive".into()));
    }
    let eps = classical_seshadri(cp)?;
    let eps_f = frobenius_seshadri(cp)?;
    let rows: Vec<JetTableRow> = (1..=m_max).map(|m| row(&eps, &eps_f, m, p)).collect();
    let (sup, sup_at) = rows.iter().fold((BigRational::zero(), 1), |(best, at), r| {
        if r.ratio > best {
            (r.ratio.clone(), r.m)
        } else {
            (best, at)
        }
    });
    Ok(JetTable {
        p,
        rows,
        sup,
        sup_at,
        simplex_diagnostic: simplex_limsup_diagnostic(cp, p, SIMPLEX_DIAGNOSTIC_MAX_E)?,
    })
}

/// Whether the chart is the unit simplex `{x >= 0, Σx <= 1}`.
pub fn is_unit_simplex(cp: &ChartedPolytope) -> bool {
    let n = cp.dim;
    let extra = &cp.facets[n..];
    let minus_one = -BigRational::one();
    extra.len() == 1 && extra[0].bound == minus_one && extra[0].normal.0.iter().all(|w| *w == minus_one)
}

/// Rows at `m_e = n(p^e - 1) - 1` for `e = 1..=e_max` (skipping `m_e = 0`),
/// where the ratio drops to `(p^{e-1} - 1)/m_e`. `None` unless the chart is
/// the unit simplex.
pub fn simplex_limsup_diagnostic(cp: &ChartedPolytope, p: u64, e_max: u32) -> Result<Option<Vec<JetTableRow>>> {
    check_prime(p)?;
    if !is_unit_simplex(cp) {
        return Ok(None);
    }
    let eps = classical_seshadri(cp)?;
    let eps_f = frobenius_seshadri(cp)?;
    let n = BigInt::from(cp.dim);
    let mut rows = Vec::new();
    for e in 1..=e_max {
        let m_e = &n * (big_pow(p, e) - BigInt::one()) - BigInt::one();
        let Ok(m_e) = u64::try_from(m_e) else { continue };
        if m_e == 0 {
            continue;
        }
        rows.push(row(&eps, &eps_f, m_e, p));
    }
    Ok(Some(rows))
}

/// Smallest `m <= m_bound` with `s_F(L^m) >= 1`, and that jet number.
pub fn find_witness(cp: &ChartedPolytope, p: u64, m_bound: u64) -> Result<(u64, u32)> {
    check_prime(p)?;
    let eps_f = frobenius_seshadri(cp)?;
    (1..=m_bound)
        .map(|m| (m, largest_frobenius_exponent(&eps_f, m, p)))
        .find(|&(_, e)| e >= 1)
        .ok_or(Error::NoWitness { bound: m_bound })
}

/// With `e = s_F(L^m) >= 1` and `d_r = (p^{re} - 1)/(p^e - 1)`, checks
/// `s_F(L^{m·d_r}) >= r·e` for `r = 1..=r_max`.
pub fn scaling_check(cp: &ChartedPolytope, p: u64, m: u64, r_max: u32) -> Result<bool> {
    let e = frobenius_jet_number(cp, m, p)?;
    if e == 0 {
        return Err(Error::NoWitness { bound: m });
    }
    let eps_f = frobenius_seshadri(cp)?;
    for r in 1..=r_max {
        let d_r = (big_pow(p, r * e) - BigInt::one()) / (big_pow(p, e) - BigInt::one());
        let scaled_m = BigInt::from(m) * d_r;
        // Exponents here can exceed u64 for large r; compare with big integers.
        let bound = (&scaled_m * eps_f.numer()) / eps_f.denom();
        let needed = big_pow(p, r * e) - BigInt::one();
        if needed > bound {
            return Ok(false);
        }
    }
    Ok(true)
}
