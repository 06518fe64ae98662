use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use frobsesh_core::arith::fmt_ratio;
use frobsesh_core::cartier::{trace_iterate, MonomialForm};
use frobsesh_core::jetoracle::{JetInstanceResult, JetProblem, OracleConfig, QuotientKind, DEFAULT_SECTION_CAP};
use frobsesh_core::seshadri::{frobenius_jet_number, frobenius_seshadri, ratio_sequence, seshadri_report, JetTable, SeshadriReport};
use frobsesh_core::toric::{
    adjoint_divisor, ample_violation, chart_at, for_each_lattice_point, is_ample, is_globally_generated, is_gg_at,
    is_nef, polytope_of, FanDiagnostics, LatticePolytopeH, ToricDivisor,
};

use crate::catalog::catalog_of_dim;
use crate::error::{CliError, CliResult};
use crate::input::{parse_input, InputSpec};
use crate::scan::{run_scan, ScanConfig};
use crate::svg::render_svg;

/// Environment variable overriding the lattice-point cap of the oracle.
pub const SECTION_CAP_VAR: &str = "FROBSESH_SECTION_CAP";

const DEFAULT_M_MAX: u64 = 20;
const DEFAULT_E_CAP: u32 = 3;

#[derive(Debug, Parser)]
#[command(name = "frobsesh", version, about = "Seshadri and Frobenius-Seshadri constants of toric line bundles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// JSON input file.
    #[arg(long)]
    pub input: PathBuf,
    /// Prime, overriding the input's `p`.
    #[arg(long)]
    pub p: Option<u64>,
    /// Fixed point (maximal cone index), overriding the input's `cone`.
    #[arg(long)]
    pub cone: Option<usize>,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the fan is smooth and complete and report positivity of the divisor.
    Validate(InputArgs),
    /// Vertices, inequalities and lattice points of m·P_D.
    Polytope {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Exact constants and binding facets at the fixed points.
    Seshadri(InputArgs),
    /// Jet numbers and ratios for m = 1..=m_max from the closed forms.
    Jets {
        #[command(flatten)]
        input: InputArgs,
        /// Largest multiple m (default: input's `m_max`, else 20).
        #[arg(long)]
        m_max: Option<u64>,
    },
    /// Brute-force Frobenius jet separation, compared with the closed form.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Largest multiple m (default: input's `m_max`, else 20).
        #[arg(long)]
        m_max: Option<u64>,
        /// Largest Frobenius exponent e (default: input's `e_cap`, else 3).
        #[arg(long)]
        e_cap: Option<u32>,
        /// Several fixed points at once, e.g. `0,2`. Overrides `--cone`.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<usize>>,
        /// Write the restriction matrix at `m_max` and `e_cap` in triplet form.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Global generation of the adjoint divisor K + D at the fixed points.
    Adjoint(InputArgs),
    /// Apply the trace map (or its e-th iterate) to a form such as `y^3 dy`.
    Trace {
        #[arg(long)]
        form: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long)]
        json: bool,
    },
    /// Seeded scan over random ample divisors of the catalog.
    Scan {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dimensions of the catalog varieties to include.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        dims: Vec<usize>,
        /// Divisor coefficients are drawn from 0..=coeff_max.
        #[arg(long, default_value_t = 3)]
        coeff_max: i64,
        #[arg(long, default_value_t = 8)]
        m_max: u64,
        #[arg(long, default_value_t = 2)]
        e_cap: u32,
        /// Add the anticanonical hexagon as an extra instance.
        #[arg(long)]
        hexagon: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw P_D with the inscribed cube and simplex at one vertex.
    Svg {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

/// What a command printed and the exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

pub fn section_cap() -> CliResult<usize> {
    match std::env::var(SECTION_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SECTION_CAP_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_SECTION_CAP),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

struct Loaded {
    spec: InputSpec,
    divisor: ToricDivisor,
    p: u64,
    cones: Vec<usize>,
}

fn load(args: &InputArgs) -> CliResult<Loaded> {
    let path = args.input.display().to_string();
    let text = fs::read_to_string(&args.input).map_err(|e| CliError::io(path, e))?;
    let mut spec = parse_input(&text)?;
    if let Some(p) = args.p {
        spec.p = p;
    }
    if let Some(c) = args.cone {
        spec.cone = Some(c);
    }
    // Re-check overrides.
    let spec = parse_input(&serde_json::to_string(&spec).expect("spec serializes"))?;
    let divisor = spec.to_divisor()?;
    Ok(Loaded {
        p: spec.p,
        cones: spec.cones(),
        divisor,
        spec,
    })
}

fn require_ample(d: &ToricDivisor) -> CliResult<()> {
    for cone in 0..d.fan().num_cones() {
        if let Some(ray) = ample_violation(d, cone)? {
            return Err(CliError::NotAmple { cone, ray });
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ValidateOut<'a> {
    diagnostics: &'a FanDiagnostics,
    nef: bool,
    ample: bool,
    globally_generated: bool,
}

fn cmd_validate(args: &InputArgs) -> CliResult<Outcome> {
    let l = load(args)?;
    let out = ValidateOut {
        diagnostics: l.divisor.fan().validate(),
        nef: is_nef(&l.divisor),
        ample: is_ample(&l.divisor),
        globally_generated: is_globally_generated(&l.divisor),
    };
    if args.json {
        return Ok(Outcome::ok(json(&out)));
    }
    Ok(Outcome::ok(format!(
        "fan: dimension {}, {} rays, {} maximal cones, smooth and complete\ndivisor: nef {} ample {} globally generated {}\n",
        l.spec.dim,
        l.spec.rays.len(),
        l.spec.max_cones.len(),
        out.nef,
        out.ample,
        out.globally_generated
    )))
}

#[derive(Serialize)]
struct PolytopeOut {
    m: u64,
    polytope: LatticePolytopeH,
    lattice_points: usize,
    points: Option<Vec<Vec<i64>>>,
}

/// Lattice points are listed only up to this count.
const LIST_POINTS: usize = 1000;

fn cmd_polytope(args: &InputArgs, m: u64) -> CliResult<Outcome> {
    let l = load(args)?;
    if m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    if !is_nef(&l.divisor) {
        return Err(frobsesh_core::Error::UnboundedPolytope.into());
    }
    let polytope = polytope_of(&l.divisor)?;
    let mut points = Vec::new();
    let count = for_each_lattice_point(&polytope, m, section_cap()?, |u| {
        if points.len() < LIST_POINTS {
            points.push(u.to_vec());
        }
    })?;
    let scale = BigInt::from(m);
    let out = PolytopeOut {
        m,
        polytope: LatticePolytopeH {
            vertices: polytope.scaled_vertices(&scale),
            ..polytope.clone()
        },
        lattice_points: count,
        points: (count <= LIST_POINTS).then_some(points),
    };
    if args.json {
        return Ok(Outcome::ok(json(&out)));
    }
    let mut s = String::new();
    s.push_str(&format!("{m}·P_D, dimension {}\n", out.polytope.dim));
    for h in &polytope.inequalities {
        s.push_str(&format!("  <u, {}> >= {}\n", h.normal, -&h.bound * &scale));
    }
    s.push_str("vertices:\n");
    for v in &out.polytope.vertices {
        s.push_str(&format!("  {v}\n"));
    }
    s.push_str(&format!("lattice points: {count}\n"));
    Ok(Outcome::ok(s))
}

#[derive(Serialize)]
struct ConeReport {
    cone: usize,
    #[serde(flatten)]
    report: SeshadriReport,
}

fn cmd_seshadri(args: &InputArgs) -> CliResult<Outcome> {
    let l = load(args)?;
    require_ample(&l.divisor)?;
    let mut reports = Vec::new();
    for &cone in &l.cones {
        let (_, cp) = chart_at(&l.divisor, cone)?;
        reports.push(ConeReport {
            cone,
            report: seshadri_report(&cp)?,
        });
    }
    if args.json {
        return Ok(Outcome::ok(json(&reports)));
    }
    let mut s = String::new();
    for r in &reports {
        let (c, f) = (&r.report.binding_facet_classical, &r.report.binding_facet_frobenius);
        s.push_str(&format!(
            "cone {}: epsilon = {} (ray {}, vertex {}), epsilon_F = {} (ray {}, vertex {})\n",
            r.cone,
            fmt_ratio(&r.report.epsilon),
            c.ray,
            c.vertex,
            fmt_ratio(&r.report.epsilon_frobenius),
            f.ray,
            f.vertex
        ));
    }
    Ok(Outcome::ok(s))
}

#[derive(Serialize)]
struct ConeTable {
    cone: usize,
    #[serde(flatten)]
    table: JetTable,
}

fn cmd_jets(args: &InputArgs, m_max: Option<u64>) -> CliResult<Outcome> {
    let l = load(args)?;
    require_ample(&l.divisor)?;
    let m_max = m_max.or(l.spec.m_max).unwrap_or(DEFAULT_M_MAX);
    let mut tables = Vec::new();
    for &cone in &l.cones {
        let (_, cp) = chart_at(&l.divisor, cone)?;
        tables.push(ConeTable {
            cone,
            table: ratio_sequence(&cp, l.p, m_max)?,
        });
    }
    if args.json {
        return Ok(Outcome::ok(json(&tables)));
    }
    let mut s = String::new();
    for t in &tables {
        s.push_str(&format!("cone {} (p = {})\n   m   s   s_F  (p^s_F - 1)/m\n", t.cone, t.table.p));
        for r in &t.table.rows {
            s.push_str(&format!("{:>4} {:>3} {:>5}  {}\n", r.m, r.s_classical, r.e_frobenius, fmt_ratio(&r.ratio)));
        }
        s.push_str(&format!("sup = {} at m = {}\n", fmt_ratio(&t.table.sup), t.table.sup_at));
        if let Some(diag) = &t.table.simplex_diagnostic {
            s.push_str("m = n(p^e - 1) - 1:\n");
            for r in diag {
                s.push_str(&format!("{:>8} {:>3}  {}\n", r.m, r.e_frobenius, fmt_ratio(&r.ratio)));
            }
        }
    }
    Ok(Outcome::ok(s))
}

#[derive(Serialize)]
struct OracleRow {
    #[serde(flatten)]
    result: JetInstanceResult,
    /// Single point only: whether `e <= s_F(L^m)` by the closed form.
    closed_form: Option<bool>,
}

fn cmd_oracle(
    args: &InputArgs,
    m_max: Option<u64>,
    e_cap: Option<u32>,
    points: Option<&[usize]>,
    dump: Option<&PathBuf>,
) -> CliResult<Outcome> {
    let l = load(args)?;
    let m_max = m_max.or(l.spec.m_max).unwrap_or(DEFAULT_M_MAX);
    let e_cap = e_cap.or(l.spec.e_cap).unwrap_or(DEFAULT_E_CAP);
    if m_max == 0 || e_cap == 0 {
        return Err(CliError::Usage("--m-max and --e-cap must be at least 1".into()));
    }
    let cfg = OracleConfig {
        section_cap: section_cap()?,
    };
    let point_sets: Vec<Vec<usize>> = match points {
        Some(z) => vec![z.to_vec()],
        None => l.cones.iter().map(|&c| vec![c]).collect(),
    };
    let mut rows = Vec::new();
    let mut disagreements = 0;
    for m in 1..=m_max {
        let problem = JetProblem::new(&l.divisor, m, cfg)?;
        for z in &point_sets {
            let closed = match z.as_slice() {
                [cone] => {
                    let (_, cp) = chart_at(&l.divisor, *cone)?;
                    Some(frobenius_jet_number(&cp, m, l.p)?)
                }
                _ => None,
            };
            for e in 1..=e_cap {
                let result = match problem.separates(z, QuotientKind::Frobenius { e }, l.p) {
                    Ok(r) => r,
                    Err(frobsesh_core::Error::SizeLimit { .. }) => continue,
                    Err(err) => return Err(err.into()),
                };
                let closed_form = closed.map(|s| e <= s);
                if closed_form.is_some_and(|c| c != result.surjective) {
                    disagreements += 1;
                }
                rows.push(OracleRow { result, closed_form });
            }
        }
        if m == m_max {
            if let Some(path) = dump {
                let mat = problem.restriction_matrix(&point_sets[0], QuotientKind::Frobenius { e: e_cap }, l.p)?;
                let mut buf = Vec::new();
                mat.write_triplets(&mut buf).expect("writing to memory");
                fs::write(path, buf).map_err(|e| CliError::io(path.display().to_string(), e))?;
            }
        }
    }
    let code = i32::from(disagreements > 0);
    if args.json {
        return Ok(Outcome { stdout: json(&rows), code });
    }
    let mut s = String::from("   m  e  points      rows   cols   rank  separates  closed form\n");
    for r in &rows {
        let res = &r.result;
        s.push_str(&format!(
            "{:>4} {:>2}  {:<10} {:>5} {:>6} {:>6}  {:<9}  {}\n",
            res.m,
            res.kind.order(),
            format!("{:?}", res.points),
            res.rows,
            res.cols,
            res.rank,
            res.surjective,
            r.closed_form.map_or("-".to_string(), |b| b.to_string())
        ));
    }
    s.push_str(&format!("disagreements with the closed form: {disagreements}\n"));
    Ok(Outcome { stdout: s, code })
}

#[derive(Serialize)]
struct AdjointPoint {
    cone: usize,
    epsilon_frobenius: String,
    /// `ε_F > 1` at this point.
    criterion_applies: bool,
    adjoint_gg: bool,
}

#[derive(Serialize)]
struct AdjointOut {
    adjoint: Vec<i64>,
    adjoint_ample: bool,
    adjoint_globally_generated: bool,
    points: Vec<AdjointPoint>,
    violations: usize,
}

fn cmd_adjoint(args: &InputArgs) -> CliResult<Outcome> {
    let l = load(args)?;
    require_ample(&l.divisor)?;
    let adj = adjoint_divisor(&l.divisor);
    let one = num_rational::BigRational::from_integer(BigInt::from(1));
    let mut points = Vec::new();
    for &cone in &l.cones {
        let (_, cp) = chart_at(&l.divisor, cone)?;
        let eps_f = frobenius_seshadri(&cp)?;
        points.push(AdjointPoint {
            cone,
            criterion_applies: eps_f > one,
            epsilon_frobenius: fmt_ratio(&eps_f),
            adjoint_gg: is_gg_at(&adj, cone),
        });
    }
    let violations = points.iter().filter(|p| p.criterion_applies && !p.adjoint_gg).count();
    let out = AdjointOut {
        adjoint: adj.coeffs().iter().map(|c| i64::try_from(c).unwrap_or(i64::MAX)).collect(),
        adjoint_ample: is_ample(&adj),
        adjoint_globally_generated: is_globally_generated(&adj),
        points,
        violations,
    };
    let code = i32::from(violations > 0);
    if args.json {
        return Ok(Outcome { stdout: json(&out), code });
    }
    let mut s = format!(
        "K + D = {:?}: ample {}, globally generated {}\n",
        out.adjoint, out.adjoint_ample, out.adjoint_globally_generated
    );
    for p in &out.points {
        s.push_str(&format!(
            "cone {}: epsilon_F = {}, gg at point {}{}\n",
            p.cone,
            p.epsilon_frobenius,
            p.adjoint_gg,
            if p.criterion_applies { " (epsilon_F > 1)" } else { "" }
        ));
    }
    Ok(Outcome { stdout: s, code })
}

#[derive(Serialize)]
struct TraceOut {
    p: u64,
    e: u32,
    input: String,
    output: String,
}

fn cmd_trace(form: &str, p: u64, e: u32, as_json: bool) -> CliResult<Outcome> {
    let f = MonomialForm::parse(form, p, None)?;
    let out = TraceOut {
        p,
        e,
        input: f.to_string(),
        output: trace_iterate(&f, e).to_string(),
    };
    if as_json {
        return Ok(Outcome::ok(json(&out)));
    }
    Ok(Outcome::ok(format!("{}\n", out.output)))
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    count: usize,
    seed: u64,
    dims: &[usize],
    coeff_max: i64,
    m_max: u64,
    e_cap: u32,
    hexagon: bool,
    as_json: bool,
) -> CliResult<Outcome> {
    let cfg = ScanConfig {
        varieties: catalog_of_dim(dims),
        count,
        seed,
        coeff_hi: coeff_max,
        m_max,
        e_cap,
        include_hexagon: hexagon,
        section_cap: section_cap()?,
        ..ScanConfig::default()
    };
    let report = run_scan(&cfg);
    let code = i32::from(!report.passed);
    let stdout = if as_json { json(&report) } else { report.to_text() };
    Ok(Outcome { stdout, code })
}

fn cmd_svg(args: &InputArgs, out: &PathBuf) -> CliResult<Outcome> {
    let l = load(args)?;
    let cone = l.spec.cone.unwrap_or(0);
    let svg = render_svg(&l.divisor, cone)?;
    fs::write(out, svg).map_err(|e| CliError::io(out.display().to_string(), e))?;
    Ok(Outcome::ok(format!("wrote {}\n", out.display())))
}

pub fn run(cli: Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Polytope { input, m } => cmd_polytope(input, *m),
        Command::Seshadri(a) => cmd_seshadri(a),
        Command::Jets { input, m_max } => cmd_jets(input, *m_max),
        Command::Oracle {
            input,
            m_max,
            e_cap,
            points,
            dump,
        } => cmd_oracle(input, *m_max, *e_cap, points.as_deref(), dump.as_ref()),
        Command::Adjoint(a) => cmd_adjoint(a),
        Command::Trace { form, p, e, json } => cmd_trace(form, *p, *e, *json),
        Command::Scan {
            count,
            seed,
            dims,
            coeff_max,
            m_max,
            e_cap,
            hexagon,
            json,
        } => cmd_scan(*count, *seed, dims, *coeff_max, *m_max, *e_cap, *hexagon, *json),
        Command::Svg { input, out } => cmd_svg(input, out),
    }
}
