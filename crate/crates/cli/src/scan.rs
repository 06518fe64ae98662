//! Seeded corpus scan: sample ample divisors on catalog fans and check the
//! closed forms against each other, against the brute-force oracle and
//! against the adjoint criterion at every fixed point.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use frobsesh_core::arith::fmt_ratio;
use frobsesh_core::jetoracle::{JetProblem, OracleConfig, QuotientKind};
use frobsesh_core::seshadri::{
    classical_seshadri, find_witness, frobenius_jet_number, frobenius_seshadri, scaling_check,
};
use frobsesh_core::toric::{
    adjoint_divisor, chart_at, divisor_combine, fans, is_ample, is_gg_at, ChartedPolytope, ToricDivisor,
};
use frobsesh_core::Error;

use crate::catalog::{sample_ample, Variety};

#[derive(Clone, Debug, Serialize)]
pub struct ScanConfig {
    pub varieties: Vec<Variety>,
    pub count: usize,
    pub seed: u64,
    /// Coefficients are drawn from `coeff_lo..=coeff_hi`.
    pub coeff_lo: i64,
    pub coeff_hi: i64,
    pub primes: Vec<u64>,
    /// Oracle runs for `m = 1..=m_max` and `e = 1..=e_cap`.
    pub m_max: u64,
    pub e_cap: u32,
    /// Homogeneity is checked for `r = 1..=homogeneity_r`.
    pub homogeneity_r: u32,
    /// Scaling of Frobenius jets is checked for `r = 1..=scaling_r`.
    pub scaling_r: u32,
    /// Search bound for the smallest `m` with a positive Frobenius jet number.
    pub witness_bound: u64,
    pub include_hexagon: bool,
    pub section_cap: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            varieties: crate::catalog::catalog_of_dim(&[2]),
            count: 100,
            seed: 0,
            coeff_lo: 0,
            coeff_hi: 3,
            primes: vec![2, 3],
            m_max: 8,
            e_cap: 2,
            homogeneity_r: 5,
            scaling_r: 3,
            witness_bound: 64,
            include_hexagon: false,
            section_cap: frobsesh_core::jetoracle::DEFAULT_SECTION_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointRow {
    pub cone: usize,
    pub epsilon: String,
    pub epsilon_frobenius: String,
    pub adjoint_gg: bool,
    /// `(p, m, e)`: smallest `m` with `s_F(L^m) = e >= 1`, per prime.
    pub witnesses: Vec<(u64, u64, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub id: usize,
    pub fan: String,
    pub divisor: Vec<i64>,
    pub points: Vec<PointRow>,
    pub sandwich_ok: bool,
    pub homogeneity_ok: bool,
    pub scaling_ok: bool,
    pub oracle_ok: bool,
    pub adjoint_ok: bool,
    /// Observation only: `ε_F(D + D') >= ε_F(D) + ε_F(D')` at every fixed
    /// point for a second sampled divisor `D'`.
    pub superadditive: Option<bool>,
    /// Observation only: when `ε_F > 2` at every fixed point, whether the
    /// adjoint is ample (hence very ample on a smooth toric variety).
    pub adjoint_very_ample: Option<bool>,
    pub oracle_instances: usize,
    /// Oracle runs skipped because a size exceeded the cap.
    pub oracle_skipped: usize,
    pub error: Option<String>,
}

impl ScanRow {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.sandwich_ok
            && self.homogeneity_ok
            && self.scaling_ok
            && self.oracle_ok
            && self.adjoint_ok
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub instances: usize,
    pub sandwich_failures: usize,
    pub homogeneity_failures: usize,
    pub scaling_failures: usize,
    pub oracle_failures: usize,
    pub adjoint_failures: usize,
    pub errors: usize,
    pub oracle_instances: usize,
    pub oracle_skipped: usize,
    pub superadditive_true: usize,
    pub superadditive_false: usize,
    pub adjoint_very_ample_true: usize,
    pub adjoint_very_ample_false: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
    pub passed: bool,
}

fn coeffs_i64(d: &ToricDivisor) -> Vec<i64> {
    d.coeffs().iter().map(|c| i64::try_from(c).unwrap_or(i64::MAX)).collect()
}

/// One sampled corpus member.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: usize,
    pub name: String,
    pub divisor: ToricDivisor,
    /// A second ample divisor on the same fan, for the superadditivity column.
    pub partner: Option<ToricDivisor>,
}

/// The corpus of a scan, in instance order. Instance `i` uses the variety
/// `varieties[i % len]` and the ChaCha stream `i` of the seed. Failed samples
/// carry their id and a message.
pub fn sample_instances(cfg: &ScanConfig) -> Vec<Result<Instance, (usize, String)>> {
    let mut out: Vec<_> = if cfg.varieties.is_empty() {
        Vec::new()
    } else {
        (0..cfg.count)
            .into_par_iter()
            .map(|id| {
                let variety = cfg.varieties[id % cfg.varieties.len()];
                let fan = Arc::new(variety.fan());
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(id as u64);
                let divisor = sample_ample(&fan, cfg.coeff_lo, cfg.coeff_hi, &mut rng)
                    .ok_or_else(|| (id, format!("no ample divisor found on {}", variety.name())))?;
                let partner = sample_ample(&fan, cfg.coeff_lo, cfg.coeff_hi, &mut rng);
                Ok(Instance {
                    id,
                    name: variety.name(),
                    divisor,
                    partner,
                })
            })
            .collect()
    };
    if cfg.include_hexagon {
        let fan = Arc::new(fans::hexagon());
        let divisor = ToricDivisor::from_i64(fan, &fans::HEXAGON_COEFFS).expect("hexagon divisor");
        out.push(Ok(Instance {
            id: cfg.count,
            name: "hexagon".into(),
            partner: Some(divisor.clone()),
            divisor,
        }));
    }
    out
}

fn charts(d: &ToricDivisor) -> Result<Vec<ChartedPolytope>, Error> {
    (0..d.fan().num_cones()).map(|c| chart_at(d, c).map(|(_, cp)| cp)).collect()
}

fn scaled(d: &ToricDivisor, r: u32) -> ToricDivisor {
    d.multiple(&BigInt::from(r))
}

fn check_instance(cfg: &ScanConfig, inst: &Instance) -> Result<ScanRow, Error> {
    let d = &inst.divisor;
    let n = BigRational::from_integer(BigInt::from(d.dim()));
    let cps = charts(d)?;
    let adjoint = adjoint_divisor(d);

    let mut points = Vec::with_capacity(cps.len());
    let mut sandwich_ok = true;
    let mut adjoint_ok = true;
    let mut scaling_ok = true;
    let mut eps_f_all = Vec::with_capacity(cps.len());
    for (cone, cp) in cps.iter().enumerate() {
        let eps = classical_seshadri(cp)?;
        let eps_f = frobenius_seshadri(cp)?;
        sandwich_ok &= &eps / &n <= eps_f && eps_f <= eps;
        let adjoint_gg = is_gg_at(&adjoint, cone);
        if eps_f > BigRational::one() {
            adjoint_ok &= adjoint_gg;
        }
        let mut witnesses = Vec::new();
        for &p in &cfg.primes {
            match find_witness(cp, p, cfg.witness_bound) {
                Ok((m, e)) => {
                    scaling_ok &= scaling_check(cp, p, m, cfg.scaling_r)?;
                    witnesses.push((p, m, e));
                }
                Err(Error::NoWitness { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        points.push(PointRow {
            cone,
            epsilon: fmt_ratio(&eps),
            epsilon_frobenius: fmt_ratio(&eps_f),
            adjoint_gg,
            witnesses,
        });
        eps_f_all.push((eps, eps_f));
    }

    let mut homogeneity_ok = true;
    for r in 1..=cfg.homogeneity_r {
        let rr = BigRational::from_integer(BigInt::from(r));
        for (cp, (eps, eps_f)) in charts(&scaled(d, r))?.iter().zip(&eps_f_all) {
            homogeneity_ok &= classical_seshadri(cp)? == eps * &rr && frobenius_seshadri(cp)? == eps_f * &rr;
        }
    }

    let mut oracle_ok = true;
    let mut oracle_instances = 0;
    let mut oracle_skipped = 0;
    let oracle_cfg = OracleConfig {
        section_cap: cfg.section_cap,
    };
    for m in 1..=cfg.m_max {
        let problem = match JetProblem::new(d, m, oracle_cfg) {
            Ok(problem) => problem,
            Err(Error::SizeLimit { .. }) => {
                oracle_skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        for (cone, cp) in cps.iter().enumerate() {
            for &p in &cfg.primes {
                let s_f = frobenius_jet_number(cp, m, p)?;
                for e in 1..=cfg.e_cap {
                    let result = match problem.separates(&[cone], QuotientKind::Frobenius { e }, p) {
                        Ok(r) => r,
                        Err(Error::SizeLimit { .. }) => {
                            oracle_skipped += 1;
                            continue;
                        }
                        Err(err) => return Err(err),
                    };
                    oracle_instances += 1;
                    oracle_ok &= result.surjective == (e <= s_f) && result.membership_agrees == Some(true);
                }
            }
        }
    }

    let superadditive = match &inst.partner {
        Some(d2) => {
            let sum = divisor_combine(d, d2, &BigInt::one(), &BigInt::one())?;
            let mut ok = true;
            for ((cp_sum, cp2), (_, eps_f)) in charts(&sum)?.iter().zip(charts(d2)?.iter()).zip(&eps_f_all) {
                ok &= frobenius_seshadri(cp_sum)? >= eps_f + frobenius_seshadri(cp2)?;
            }
            Some(ok)
        }
        None => None,
    };
    let two = BigRational::from_integer(BigInt::from(2));
    let adjoint_very_ample = eps_f_all
        .iter()
        .all(|(_, eps_f)| *eps_f > two)
        .then(|| is_ample(&adjoint));

    Ok(ScanRow {
        id: inst.id,
        fan: inst.name.clone(),
        divisor: coeffs_i64(d),
        points,
        sandwich_ok,
        homogeneity_ok,
        scaling_ok,
        oracle_ok,
        adjoint_ok,
        superadditive,
        adjoint_very_ample,
        oracle_instances,
        oracle_skipped,
        error: None,
    })
}

fn error_row(id: usize, fan: String, divisor: Vec<i64>, msg: String) -> ScanRow {
    ScanRow {
        id,
        fan,
        divisor,
        points: Vec::new(),
        sandwich_ok: false,
        homogeneity_ok: false,
        scaling_ok: false,
        oracle_ok: false,
        adjoint_ok: false,
        superadditive: None,
        adjoint_very_ample: None,
        oracle_instances: 0,
        oracle_skipped: 0,
        error: Some(msg),
    }
}

/// Runs the scan. Rows are in instance order whatever the thread count.
pub fn run_scan(cfg: &ScanConfig) -> ScanReport {
    let instances = sample_instances(cfg);
    let rows: Vec<ScanRow> = instances
        .par_iter()
        .map(|inst| match inst {
            Ok(inst) => check_instance(cfg, inst).unwrap_or_else(|e| {
                error_row(inst.id, inst.name.clone(), coeffs_i64(&inst.divisor), e.to_string())
            }),
            Err((id, msg)) => error_row(*id, String::new(), Vec::new(), msg.clone()),
        })
        .collect();
    let summary = summarize(&rows);
    let passed = rows.iter().all(ScanRow::passed);
    ScanReport {
        config: cfg.clone(),
        rows,
        summary,
        passed,
    }
}

fn summarize(rows: &[ScanRow]) -> ScanSummary {
    let mut s = ScanSummary {
        instances: rows.len(),
        ..ScanSummary::default()
    };
    for r in rows {
        if r.error.is_some() {
            s.errors += 1;
            continue;
        }
        s.sandwich_failures += usize::from(!r.sandwich_ok);
        s.homogeneity_failures += usize::from(!r.homogeneity_ok);
        s.scaling_failures += usize::from(!r.scaling_ok);
        s.oracle_failures += usize::from(!r.oracle_ok);
        s.adjoint_failures += usize::from(!r.adjoint_ok);
        s.oracle_instances += r.oracle_instances;
        s.oracle_skipped += r.oracle_skipped;
        match r.superadditive {
            Some(true) => s.superadditive_true += 1,
            Some(false) => s.superadditive_false += 1,
            None => {}
        }
        match r.adjoint_very_ample {
            Some(true) => s.adjoint_very_ample_true += 1,
            Some(false) => s.adjoint_very_ample_false += 1,
            None => {}
        }
    }
    s
}

impl ScanReport {
    /// Plain-text rendering: one line per instance and a summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let flag = |b: bool| if b { "ok" } else { "FAIL" };
        for r in &self.rows {
            if let Some(err) = &r.error {
                out.push_str(&format!("{:>4} {:<8} {:?} error: {err}\n", r.id, r.fan, r.divisor));
                continue;
            }
            let eps: Vec<String> = r
                .points
                .iter()
                .map(|p| format!("{}|{}", p.epsilon, p.epsilon_frobenius))
                .collect();
            out.push_str(&format!(
                "{:>4} {:<8} {:?} eps|eps_F [{}] sandwich {} homogeneity {} scaling {} oracle {} ({} runs) adjoint {} superadditive {}\n",
                r.id,
                r.fan,
                r.divisor,
                eps.join(" "),
                flag(r.sandwich_ok),
                flag(r.homogeneity_ok),
                flag(r.scaling_ok),
                flag(r.oracle_ok),
                r.oracle_instances,
                flag(r.adjoint_ok),
                r.superadditive.map_or("-".to_string(), |b| b.to_string()),
            ));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "instances {} errors {} failures: sandwich {} homogeneity {} scaling {} oracle {} adjoint {}; \
             oracle runs {}; superadditive {}/{}; adjoint very ample {}/{}\n",
            s.instances,
            s.errors,
            s.sandwich_failures,
            s.homogeneity_failures,
            s.scaling_failures,
            s.oracle_failures,
            s.adjoint_failures,
            s.oracle_instances,
            s.superadditive_true,
            s.superadditive_true + s.superadditive_false,
            s.adjoint_very_ample_true,
            s.adjoint_very_ample_true + s.adjoint_very_ample_false,
        ));
        out.push_str(if self.passed { "PASS\n" } else { "FAIL\n" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ScanConfig {
        ScanConfig {
            count: 12,
            seed: 7,
            m_max: 4,
            include_hexagon: true,
            ..ScanConfig::default()
        }
    }

    #[test]
    fn small_scan_passes_and_is_deterministic() {
        let a = run_scan(&small());
        assert!(a.passed, "{}", a.to_text());
        assert_eq!(a.rows.len(), 13);
        let b = run_scan(&small());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let hex = a.rows.last().unwrap();
        assert_eq!(hex.fan, "hexagon");
        assert!(hex.points.iter().all(|p| p.epsilon == "1/1" && p.epsilon_frobenius == "1/1"));
    }

    #[test]
    fn empty_catalog() {
        let cfg = ScanConfig {
            varieties: Vec::new(),
            ..ScanConfig::default()
        };
        let r = run_scan(&cfg);
        assert!(r.rows.is_empty());
        assert!(r.passed);
    }
}
