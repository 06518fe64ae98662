//! SVG picture of a polygon `P_D` with the largest cube and simplex
//! inscribed at one vertex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use frobsesh_core::lattice::{invert_unimodular, RationalVector};
use frobsesh_core::seshadri::{classical_seshadri, frobenius_seshadri};
use frobsesh_core::toric::{ample_violation, chart_at, for_each_lattice_point, polytope_of, ToricDivisor};

use crate::error::{CliError, CliResult};

/// Pixels per lattice unit.
pub const PX: f64 = 60.0;
/// Blank border around the drawing, in pixels.
pub const MARGIN: f64 = 30.0;
pub const OUTLINE_WIDTH: f64 = 2.0;
/// The inscribed cube and simplex are drawn dashed and thick.
pub const INSCRIBED_WIDTH: f64 = 4.0;
pub const DASH: &str = "10 6";
pub const CUBE_COLOR: &str = "#c0392b";
pub const SIMPLEX_COLOR: &str = "#2471a3";
pub const POINT_RADIUS: f64 = 3.0;
/// Lattice points are only drawn up to this many.
const MAX_POINTS: usize = 10_000;

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Cyclic order around the centroid.
fn cyclic(points: &[RationalVector]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|v| (to_f64(&v.0[0]), to_f64(&v.0[1]))).collect();
    let k = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / k;
    pts.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb)
    });
    pts
}

struct Frame {
    min_x: f64,
    max_y: f64,
}

impl Frame {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.min_x) * PX, MARGIN + (self.max_y - y) * PX)
    }

    fn polygon(&self, pts: &[(f64, f64)], attrs: &str) -> String {
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        format!("  <polygon points=\"{}\" {attrs}/>\n", coords.join(" "))
    }
}

/// Renders `P_D` (dimension 2, ample) with `ε_F·C_2` and `ε·Q_2` placed at
/// the vertex of `cone`.
pub fn render_svg(divisor: &ToricDivisor, cone: usize) -> CliResult<String> {
    if divisor.dim() != 2 {
        return Err(CliError::DimensionUnsupported(divisor.dim()));
    }
    for c in 0..divisor.fan().num_cones() {
        if let Some(ray) = ample_violation(divisor, c)? {
            return Err(CliError::NotAmple { cone: c, ray });
        }
    }
    let poly = polytope_of(divisor)?;
    let (chart, cp) = chart_at(divisor, cone)?;
    let eps = classical_seshadri(&cp)?;
    let eps_f = frobenius_seshadri(&cp)?;
    let back = invert_unimodular(&chart.to_local)?;
    let global = |x: &[BigRational]| chart.vertex.add(&back.mul_rational(&RationalVector::new(x.to_vec())));
    let zero = BigRational::from_integer(BigInt::from(0));
    let cube: Vec<RationalVector> = [
        [zero.clone(), zero.clone()],
        [eps_f.clone(), zero.clone()],
        [eps_f.clone(), eps_f.clone()],
        [zero.clone(), eps_f.clone()],
    ]
    .iter()
    .map(|x| global(x))
    .collect();
    let simplex: Vec<RationalVector> = [
        [zero.clone(), zero.clone()],
        [eps.clone(), zero.clone()],
        [zero.clone(), eps.clone()],
    ]
    .iter()
    .map(|x| global(x))
    .collect();

    let outline = cyclic(&poly.vertices);
    let xs = outline.iter().map(|p| p.0);
    let ys = outline.iter().map(|p| p.1);
    let (min_x, max_x) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let (min_y, max_y) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let frame = Frame { min_x, max_y };
    let width = (max_x - min_x) * PX + 2.0 * MARGIN;
    let height = (max_y - min_y) * PX + 2.0 * MARGIN;

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.3} {height:.3}\">\n"
    );
    svg.push_str(&frame.polygon(
        &outline,
        &format!("fill=\"#f4f4f4\" stroke=\"black\" stroke-width=\"{OUTLINE_WIDTH}\""),
    ));
    svg.push_str(&frame.polygon(
        &cyclic(&cube),
        &format!(
            "fill=\"none\" stroke=\"{CUBE_COLOR}\" stroke-width=\"{INSCRIBED_WIDTH}\" stroke-dasharray=\"{DASH}\""
        ),
    ));
    svg.push_str(&frame.polygon(
        &cyclic(&simplex),
        &format!(
            "fill=\"none\" stroke=\"{SIMPLEX_COLOR}\" stroke-width=\"{INSCRIBED_WIDTH}\" stroke-dasharray=\"{DASH}\""
        ),
    ));
    let mut dots = String::new();
    // Too many points only clutters the picture; skip them then.
    let _ = for_each_lattice_point(&poly, 1, MAX_POINTS, |u| {
        let (x, y) = frame.map((u[0] as f64, u[1] as f64));
        dots.push_str(&format!("  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{POINT_RADIUS}\" fill=\"black\"/>\n"));
    });
    svg.push_str(&dots);
    svg.push_str("</svg>\n");
    Ok(svg)
}
