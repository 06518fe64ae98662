//! Brute-force jet separation at torus-fixed points over `F_p`.
//!
//! Global sections of `O(mD)` have the monomial basis `χ^u`, `u ∈ mP_D ∩ M`.
//! At the fixed point of a maximal cone each `χ^u` restricts to a single
//! monomial in the local coordinates, so the restriction map to a monomial
//! quotient of the local ring is a 0/1 matrix: the column of `u` has a 1 in
//! the row of its local exponent whenever that exponent is a basis monomial
//! of the quotient. For several points the quotient is the direct sum and the
//! rows are stacked point by point.
//!
//! Separation means the restriction map is surjective, decided by the exact
//! rank over `F_p`. None of this uses the closed forms in [`crate::seshadri`].

mod quotient;
pub mod rank;

use std::collections::BTreeSet;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub use quotient::{QuotientBasis, QuotientKind};
use rank::{rank_mod_p, SparseColumn, SparseEliminator, DENSE_MAX_COLUMNS};

use crate::arith::check_prime;
use crate::error::{Error, Result};
use crate::lattice::{rank_rational, LatticeVector};
use crate::toric::{chart_at, for_each_lattice_point, polytope_of, ChartedPolytope, LatticePolytopeH, ToricDivisor};

/// Default bound on the number of lattice points (sections) and of quotient
/// monomials an oracle instance may touch.
pub const DEFAULT_SECTION_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub section_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            section_cap: DEFAULT_SECTION_CAP,
        }
    }
}

/// The monomial basis `{χ^u : u ∈ mP_D ∩ M}` of `H^0(X, O(mD))`, in
/// lexicographic order of `u`.
#[derive(Clone, Debug)]
pub struct SectionBasis {
    pub m: u64,
    pub dim: usize,
    coords: Vec<i64>,
}

impl SectionBasis {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn points(&self) -> Vec<LatticeVector> {
        self.iter().map(LatticeVector::from_i64).collect()
    }
}

fn require_positive(m: u64) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidArgument("m must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn require_nef_polytope(divisor: &ToricDivisor) -> Result<LatticePolytopeH> {
    let polytope = polytope_of(divisor)?;
    if !crate::toric::is_nef(divisor) {
        return Err(Error::UnboundedPolytope);
    }
    Ok(polytope)
}

/// All lattice points of `m·P_D`, by bounding box and inequality filter.
pub fn enumerate_sections(divisor: &ToricDivisor, m: u64, cap: usize) -> Result<SectionBasis> {
    require_positive(m)?;
    let polytope = require_nef_polytope(divisor)?;
    let mut coords = Vec::new();
    for_each_lattice_point(&polytope, m, cap, |u| coords.extend_from_slice(u))?;
    Ok(SectionBasis {
        m,
        dim: divisor.dim(),
        coords,
    })
}

/// Local data of one fixed point for `O(mD)`: `a = to_local·(u - shift)`.
#[derive(Clone, Debug)]
struct PointChart {
    cone: usize,
    to_local: Vec<i64>,
    shift: Vec<i64>,
    charted: ChartedPolytope,
}

impl PointChart {
    fn new(divisor: &ToricDivisor, cone: usize, m: u64) -> Result<Self> {
        let (chart, charted) = chart_at(divisor, cone)?;
        let overflow = || Error::InvalidArgument("chart data exceeds 64-bit range".into());
        let to_local = chart.to_local.to_i64_rows().ok_or_else(overflow)?.concat();
        let shift = chart
            .vertex
            .scale(&BigRational::from_integer(BigInt::from(m)))
            .to_lattice()
            .ok_or_else(|| Error::InvalidArgument(format!("vertex of cone {cone} is not integral")))?
            .to_i64()
            .ok_or_else(overflow)?;
        Ok(PointChart {
            cone,
            to_local,
            shift,
            charted,
        })
    }

    fn local(&self, u: &[i64], out: &mut [i64]) {
        let n = u.len();
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..n).map(|j| self.to_local[i * n + j] * (u[j] - self.shift[j])).sum();
        }
    }
}

enum Sections<'a> {
    Stored(&'a SectionBasis),
    Streaming { polytope: &'a LatticePolytopeH, m: u64, cap: usize },
}

impl Sections<'_> {
    fn for_each(&self, mut f: impl FnMut(&[i64])) -> Result<usize> {
        match self {
            Sections::Stored(basis) => {
                basis.iter().for_each(&mut f);
                Ok(basis.len())
            }
            Sections::Streaming { polytope, m, cap } => for_each_lattice_point(polytope, *m, *cap, f),
        }
    }
}

/// Outcome of one separation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JetInstanceResult {
    pub m: u64,
    pub kind: QuotientKind,
    pub p: u64,
    /// Cone indices of the fixed points.
    pub points: Vec<usize>,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub surjective: bool,
    /// For a single point: whether surjectivity matched the direct test that
    /// every quotient monomial is a lattice point of the charted `m·P_D`.
    pub membership_agrees: Option<bool>,
}

/// The restriction matrix in triplet form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionMatrix {
    pub p: u64,
    pub m: u64,
    pub kind: QuotientKind,
    pub points: Vec<usize>,
    pub rows: usize,
    pub cols: usize,
    /// Nonzero `(row, col)` positions, all with value 1, sorted by column then row.
    pub entries: Vec<(usize, usize)>,
}

impl RestrictionMatrix {
    fn columns(&self) -> Vec<SparseColumn> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(r, c) in &self.entries {
            cols[c].push((r, 1));
        }
        cols
    }

    pub fn rank_mod_p(&self) -> usize {
        rank_mod_p(self.rows, &self.columns(), self.p)
    }

    /// Exact rank over `Q`; meant for small matrices.
    pub fn rank_over_q(&self) -> usize {
        let mut dense = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for &(r, c) in &self.entries {
            dense[r][c] = BigInt::from(1);
        }
        rank_rational(&dense)
    }

    /// Writes the header `p m e |Z| rows cols` and one `row col 1` line per entry.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "{} {} {} {} {} {}",
            self.p,
            self.m,
            self.kind.order(),
            self.points.len(),
            self.rows,
            self.cols
        )?;
        for &(r, c) in &self.entries {
            writeln!(out, "{r} {c} 1")?;
        }
        Ok(())
    }
}

/// Sections of `O(mD)` with the charts of every fixed point prepared, for
/// running many separation tests against the same `m`.
pub struct JetProblem {
    divisor: ToricDivisor,
    sections: SectionBasis,
    charts: Vec<PointChart>,
    config: OracleConfig,
}

struct Layout {
    bases: Vec<QuotientBasis>,
    offsets: Vec<usize>,
    rows: usize,
}

fn layout(charts: &[&PointChart], kind: QuotientKind, p: u64, dim: usize, cap: usize) -> Result<Layout> {
    let mut bases = Vec::with_capacity(charts.len());
    let mut offsets = Vec::with_capacity(charts.len());
    let mut rows = 0usize;
    for _ in charts {
        let b = QuotientBasis::new(kind, p, dim, cap)?;
        offsets.push(rows);
        rows += b.len();
        bases.push(b);
    }
    if rows > cap {
        return Err(Error::SizeLimit {
            size: rows as u128,
            cap,
        });
    }
    Ok(Layout { bases, offsets, rows })
}

fn check_points(z: &[usize], num_cones: usize) -> Result<()> {
    let distinct: BTreeSet<_> = z.iter().collect();
    if distinct.len() != z.len() {
        return Err(Error::InvalidArgument("repeated fixed point in Z".into()));
    }
    if let Some(&bad) = z.iter().find(|&&c| c >= num_cones) {
        return Err(Error::ConeOutOfRange { cone: bad });
    }
    Ok(())
}

/// Streams the columns of the restriction matrix into `visit(col, entries)`.
fn stream_columns(
    sections: &Sections<'_>,
    charts: &[&PointChart],
    layout: &Layout,
    dim: usize,
    mut visit: impl FnMut(usize, SparseColumn),
) -> Result<usize> {
    let mut col = 0usize;
    let mut local = vec![0i64; dim];
    sections.for_each(|u| {
        let mut entries = Vec::new();
        for (k, chart) in charts.iter().enumerate() {
            chart.local(u, &mut local);
            if let Some(i) = layout.bases[k].index_of(&local) {
                entries.push((layout.offsets[k] + i, 1u64));
            }
        }
        visit(col, entries);
        col += 1;
    })
}

/// Every quotient monomial lies in the charted `m·P_D` (single point).
fn membership(chart: &PointChart, basis: &QuotientBasis, m: u64) -> bool {
    let exps = basis.exponents();
    match chart.charted.to_i64() {
        Some(facets) => {
            let m = m as i128;
            exps.iter().all(|a| {
                facets.iter().all(|(w, c)| {
                    let lhs: i128 = w.iter().zip(a).map(|(&wi, &ai)| wi as i128 * ai as i128).sum();
                    lhs >= m * *c as i128
                })
            })
        }
        None => exps.iter().all(|a| chart.charted.contains_scaled_i64(a, m)),
    }
}

fn run_separation(
    divisor_dim: usize,
    m: u64,
    sections: &Sections<'_>,
    charts: &[&PointChart],
    kind: QuotientKind,
    p: u64,
    cap: usize,
) -> Result<JetInstanceResult> {
    let layout = layout(charts, kind, p, divisor_dim, cap)?;
    let rows = layout.rows;
    let mut elim = SparseEliminator::new(p);
    let mut small: Vec<SparseColumn> = Vec::new();
    let mut use_dense = true;
    let cols = stream_columns(sections, charts, &layout, divisor_dim, |_, entries| {
        if use_dense {
            small.push(entries);
            if small.len() >= DENSE_MAX_COLUMNS {
                use_dense = false;
                for c in small.drain(..) {
                    elim.push(c);
                }
            }
        } else if elim.rank() < rows && !entries.is_empty() {
            elim.push(entries);
        }
    })?;
    let rank = if use_dense { rank_mod_p(rows, &small, p) } else { elim.rank() };
    let surjective = rank == rows;
    let membership_agrees = match charts {
        [single] => Some(membership(single, &layout.bases[0], m) == surjective),
        _ => None,
    };
    Ok(JetInstanceResult {
        m,
        kind,
        p,
        points: charts.iter().map(|c| c.cone).collect(),
        rows,
        cols,
        rank,
        surjective,
        membership_agrees,
    })
}

fn build_matrix(
    m: u64,
    sections: &Sections<'_>,
    charts: &[&PointChart],
    kind: QuotientKind,
    p: u64,
    dim: usize,
    cap: usize,
) -> Result<RestrictionMatrix> {
    let layout = layout(charts, kind, p, dim, cap)?;
    let mut entries = Vec::new();
    let cols = stream_columns(sections, charts, &layout, dim, |c, col| {
        entries.extend(col.into_iter().map(|(r, _)| (r, c)));
    })?;
    Ok(RestrictionMatrix {
        p,
        m,
        kind,
        points: charts.iter().map(|c| c.cone).collect(),
        rows: layout.rows,
        cols,
        entries,
    })
}

impl JetProblem {
    pub fn new(divisor: &ToricDivisor, m: u64, config: OracleConfig) -> Result<Self> {
        let sections = enumerate_sections(divisor, m, config.section_cap)?;
        let charts = (0..divisor.fan().num_cones())
            .map(|c| PointChart::new(divisor, c, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(JetProblem {
            divisor: divisor.clone(),
            sections,
            charts,
            config,
        })
    }

    pub fn sections(&self) -> &SectionBasis {
        &self.sections
    }

    pub fn divisor(&self) -> &ToricDivisor {
        &self.divisor
    }

    fn charts_for(&self, z: &[usize]) -> Result<Vec<&PointChart>> {
        check_points(z, self.charts.len())?;
        Ok(z.iter().map(|&c| &self.charts[c]).collect())
    }

    pub fn separates(&self, z: &[usize], kind: QuotientKind, p: u64) -> Result<JetInstanceResult> {
        check_prime(p)?;
        let charts = self.charts_for(z)?;
        run_separation(
            self.divisor.dim(),
            self.sections.m,
            &Sections::Stored(&self.sections),
            &charts,
            kind,
            p,
            self.config.section_cap,
        )
    }

    pub fn restriction_matrix(&self, z: &[usize], kind: QuotientKind, p: u64) -> Result<RestrictionMatrix> {
        check_prime(p)?;
        let charts = self.charts_for(z)?;
        build_matrix(
            self.sections.m,
            &Sections::Stored(&self.sections),
            &charts,
            kind,
            p,
            self.divisor.dim(),
            self.config.section_cap,
        )
    }

    /// Largest `e` in `1..=e_cap` for which `L^m` separates `p^e`-Frobenius
    /// jets at the fixed point of `cone`, or 0.
    pub fn frobenius_jet_number(&self, cone: usize, p: u64, e_cap: u32) -> Result<u32> {
        let mut best = 0;
        for e in 1..=e_cap {
            if self.quotient_exceeds_sections(p, e)? {
                continue;
            }
            if self.separates(&[cone], QuotientKind::Frobenius { e }, p)?.surjective {
                best = e;
            }
        }
        Ok(best)
    }

    /// The rank of the restriction map is at most the number of sections.
    fn quotient_exceeds_sections(&self, p: u64, e: u32) -> Result<bool> {
        let q = crate::arith::small_pow(p, e).and_then(|q| q.to_u128());
        let dim = q.and_then(|q| q.checked_pow(self.divisor.dim() as u32));
        Ok(dim.is_none_or(|d| d > self.sections.len() as u128))
    }
}

fn streaming_setup(divisor: &ToricDivisor, m: u64, z: &[usize]) -> Result<(LatticePolytopeH, Vec<PointChart>)> {
    require_positive(m)?;
    check_points(z, divisor.fan().num_cones())?;
    let polytope = require_nef_polytope(divisor)?;
    let charts = z
        .iter()
        .map(|&c| PointChart::new(divisor, c, m))
        .collect::<Result<Vec<_>>>()?;
    Ok((polytope, charts))
}

/// The restriction matrix of `H^0(O(mD))` to the quotient `kind` at the fixed
/// points `z` (cone indices).
pub fn restriction_matrix(
    divisor: &ToricDivisor,
    m: u64,
    z: &[usize],
    kind: QuotientKind,
    p: u64,
    config: OracleConfig,
) -> Result<RestrictionMatrix> {
    check_prime(p)?;
    let (polytope, charts) = streaming_setup(divisor, m, z)?;
    let refs: Vec<&PointChart> = charts.iter().collect();
    let sections = Sections::Streaming {
        polytope: &polytope,
        m,
        cap: config.section_cap,
    };
    build_matrix(m, &sections, &refs, kind, p, divisor.dim(), config.section_cap)
}

/// Whether `O(mD)` separates the quotient `kind` at `z`, by rank over `F_p`.
pub fn separates(
    divisor: &ToricDivisor,
    m: u64,
    z: &[usize],
    kind: QuotientKind,
    p: u64,
    config: OracleConfig,
) -> Result<JetInstanceResult> {
    check_prime(p)?;
    let (polytope, charts) = streaming_setup(divisor, m, z)?;
    let refs: Vec<&PointChart> = charts.iter().collect();
    let sections = Sections::Streaming {
        polytope: &polytope,
        m,
        cap: config.section_cap,
    };
    run_separation(divisor.dim(), m, &sections, &refs, kind, p, config.section_cap)
}

/// `s_F(L^m; x)` by linear search over `e = 1..=e_cap`.
pub fn oracle_frobenius_jet_number(
    divisor: &ToricDivisor,
    m: u64,
    cone: usize,
    p: u64,
    e_cap: u32,
    config: OracleConfig,
) -> Result<u32> {
    check_prime(p)?;
    require_positive(m)?;
    let mut best = 0;
    for e in 1..=e_cap {
        if separates(divisor, m, &[cone], QuotientKind::Frobenius { e }, p, config)?.surjective {
            best = e;
        }
    }
    Ok(best)
}

/// Separation of `O/(m_x^2)^{[p^e]}` at a single fixed point.
pub fn two_jet_separates(
    divisor: &ToricDivisor,
    m: u64,
    cone: usize,
    e: u32,
    p: u64,
    config: OracleConfig,
) -> Result<JetInstanceResult> {
    separates(divisor, m, &[cone], QuotientKind::FrobeniusSquare { e }, p, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::testing::*;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    fn projective(n: usize, k: i64) -> ToricDivisor {
        let mut c = vec![0; n + 1];
        c[n] = k;
        ToricDivisor::from_i64(pn_fan(n), &c).unwrap()
    }

    #[test]
    fn section_counts() {
        for m in 1..=6u64 {
            let b = enumerate_sections(&projective(1, 1), m, 100).unwrap();
            assert_eq!(b.len() as u64, m + 1);
            assert_eq!(b.iter().map(|u| u[0]).collect::<Vec<_>>(), (0..=m as i64).collect::<Vec<_>>());
        }
        assert_eq!(enumerate_sections(&projective(2, 1), 2, 100).unwrap().len(), 6);
        let hex = enumerate_sections(&hexagon_divisor(), 1, 100).unwrap();
        assert_eq!(hex.len(), 7);
        assert!(hex.iter().any(|u| u == [1, 1]));
        assert!(matches!(
            enumerate_sections(&projective(1, 1), 0, 100),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn non_nef_divisor_is_rejected() {
        let d = ToricDivisor::from_i64(p1_fan(), &[0, -1]).unwrap();
        assert_eq!(enumerate_sections(&d, 1, 100).unwrap_err(), Error::UnboundedPolytope);
    }

    #[test]
    fn projective_line_two_points_matrix() {
        // cone 0 is the ray (1), cone 1 the ray (-1)
        let (p, e, m) = (2u64, 1u32, 4u64);
        let d = projective(1, 1);
        let mat = restriction_matrix(&d, m, &[0, 1], QuotientKind::Frobenius { e }, p, cfg()).unwrap();
        assert_eq!((mat.rows, mat.cols), (4, 5));
        let q = p.pow(e) as usize;
        for k in 0..=m as usize {
            let mut expected = Vec::new();
            if k < q {
                expected.push((k, k));
            }
            // at the other point the local exponent of x^k is m - k
            if m as usize - k < q {
                expected.push((q + m as usize - k, k));
            }
            let got: Vec<_> = mat.entries.iter().copied().filter(|&(_, c)| c == k).collect();
            assert_eq!(got, expected, "column {k}");
        }
    }

    #[test]
    fn hexagon_single_vertex() {
        let mat = restriction_matrix(&hexagon_divisor(), 1, &[0], QuotientKind::Frobenius { e: 1 }, 2, cfg()).unwrap();
        assert_eq!((mat.rows, mat.cols), (4, 7));
        assert_eq!(mat.rank_mod_p(), 4);
        assert_eq!(mat.rank_over_q(), 4);
    }

    #[test]
    fn projective_plane_rule() {
        for p in [2u64, 3] {
            for e in 1..=2u32 {
                let flip = 2 * (p.pow(e) - 1);
                for m in [flip - 1, flip, flip + 1] {
                    let r = separates(&projective(2, 1), m, &[0], QuotientKind::Frobenius { e }, p, cfg()).unwrap();
                    assert_eq!(r.surjective, m >= flip, "p={p} e={e} m={m}");
                    assert_eq!(r.membership_agrees, Some(true));
                }
            }
        }
        assert_eq!(oracle_frobenius_jet_number(&projective(2, 1), 6, 0, 2, 4, cfg()).unwrap(), 2);
        assert_eq!(oracle_frobenius_jet_number(&hexagon_divisor(), 1, 0, 2, 4, cfg()).unwrap(), 1);
        assert!(oracle_frobenius_jet_number(&hexagon_divisor(), 0, 0, 2, 4, cfg()).is_err());
    }

    #[test]
    fn projective_line_two_points_rule() {
        for p in [2u64, 3] {
            for e in 1..=2u32 {
                let q = p.pow(e);
                for m in (2 * q - 3).max(1)..=2 * q + 1 {
                    let r = separates(&projective(1, 1), m, &[0, 1], QuotientKind::Frobenius { e }, p, cfg()).unwrap();
                    assert_eq!(r.surjective, m + 1 >= 2 * q, "p={p} e={e} m={m}");
                    assert_eq!(r.membership_agrees, None);
                }
            }
        }
    }

    #[test]
    fn two_jets_on_projective_line() {
        for m in 1..=6u64 {
            let r = two_jet_separates(&projective(1, 1), m, 0, 1, 2, cfg()).unwrap();
            assert_eq!(r.rows, 4);
            assert_eq!(r.surjective, m >= 3, "m={m}");
        }
        let r = two_jet_separates(&projective(1, 1), 2, 0, 2, 3, cfg()).unwrap();
        assert_eq!(r.rows, 18);
        assert!(!r.surjective);
    }

    #[test]
    fn dimension_count_forces_failure() {
        // 3^2 = 9 quotient monomials, only 6 sections of O(2) on P^2
        let r = separates(&projective(2, 1), 2, &[0], QuotientKind::Frobenius { e: 1 }, 3, cfg()).unwrap();
        assert!(r.rows > r.cols);
        assert!(!r.surjective);
    }

    #[test]
    fn problem_matches_streaming() {
        let d = ToricDivisor::from_i64(hirzebruch_fan(1), &[1, 1, 1, 1]).unwrap();
        for m in 1..=4 {
            let prob = JetProblem::new(&d, m, cfg()).unwrap();
            for cone in 0..4 {
                for kind in [QuotientKind::Frobenius { e: 1 }, QuotientKind::Classical { ell: 2 }] {
                    let a = prob.separates(&[cone], kind, 3).unwrap();
                    let b = separates(&d, m, &[cone], kind, 3, cfg()).unwrap();
                    assert_eq!(a, b);
                }
            }
            assert_eq!(
                prob.restriction_matrix(&[0, 2], QuotientKind::Frobenius { e: 1 }, 2).unwrap(),
                restriction_matrix(&d, m, &[0, 2], QuotientKind::Frobenius { e: 1 }, 2, cfg()).unwrap()
            );
        }
    }

    #[test]
    fn triplet_dump() {
        let mat = restriction_matrix(&projective(1, 1), 1, &[0], QuotientKind::Frobenius { e: 1 }, 2, cfg()).unwrap();
        let mut buf = Vec::new();
        mat.write_triplets(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "2 1 1 1 2 2\n0 0 1\n1 1 1\n");
    }

    #[test]
    fn bad_point_sets() {
        let d = projective(2, 1);
        assert!(matches!(
            separates(&d, 2, &[0, 0], QuotientKind::Frobenius { e: 1 }, 2, cfg()),
            Err(Error::InvalidArgument(_))
        ));
        assert_eq!(
            separates(&d, 2, &[7], QuotientKind::Frobenius { e: 1 }, 2, cfg()).unwrap_err(),
            Error::ConeOutOfRange { cone: 7 }
        );
        assert_eq!(
            separates(&d, 2, &[0], QuotientKind::Frobenius { e: 1 }, 6, cfg()).unwrap_err(),
            Error::InvalidPrime(6)
        );
    }
}
