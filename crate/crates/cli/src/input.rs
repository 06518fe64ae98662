//! The JSON input format.
//!
//! ```json
//! {"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]],
//!  "divisor": [0,0,1], "p": 2, "cone": 0}
//! ```
//!
//! `m_max`, `e_cap`, `cone` and `seed` are optional.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use frobsesh_core::arith::is_prime;
use frobsesh_core::toric::{Fan, ToricDivisor};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub divisor: Vec<i64>,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InputSpec {
    pub fn from_divisor(divisor: &ToricDivisor, p: u64) -> Self {
        let fan = divisor.fan();
        InputSpec {
            dim: fan.dim(),
            rays: fan.rays_i64().expect("catalog rays fit in i64"),
            max_cones: fan.max_cones().to_vec(),
            divisor: divisor
                .coeffs()
                .iter()
                .map(|c| i64::try_from(c).expect("catalog coefficients fit in i64"))
                .collect(),
            p,
            m_max: None,
            e_cap: None,
            cone: None,
            seed: None,
        }
    }

    pub fn fan(&self) -> CliResult<Fan> {
        let fan = Fan::from_i64(self.dim, &self.rays, self.max_cones.clone()).map_err(|e| match e {
            frobsesh_core::Error::MalformedFan(msg) => CliError::schema("rays", msg),
            other => CliError::Core(other),
        })?;
        let diag = fan.validate();
        if !diag.is_valid() {
            return Err(CliError::FanInvalid(diag.summary()));
        }
        Ok(fan)
    }

    pub fn to_divisor(&self) -> CliResult<ToricDivisor> {
        Ok(ToricDivisor::from_i64(Arc::new(self.fan()?), &self.divisor)?)
    }

    /// The cones to report on: the selected one, or all.
    pub fn cones(&self) -> Vec<usize> {
        match self.cone {
            Some(c) => vec![c],
            None => (0..self.max_cones.len()).collect(),
        }
    }
}

/// Parses and validates an input document. The fan must be smooth and
/// complete.
pub fn parse_input(text: &str) -> CliResult<InputSpec> {
    let spec: InputSpec = serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        match e.classify() {
            serde_json::error::Category::Data => CliError::Schema {
                field: format!("line {line}, column {column}"),
                message: e.to_string(),
            },
            _ => CliError::Parse {
                line,
                column,
                message: e.to_string(),
            },
        }
    })?;
    check(&spec)?;
    Ok(spec)
}

fn check(spec: &InputSpec) -> CliResult<()> {
    if !is_prime(spec.p) {
        return Err(CliError::schema("p", "p must be prime"));
    }
    if spec.dim == 0 {
        return Err(CliError::schema("dim", "dimension must be at least 1"));
    }
    if let Some(i) = spec.rays.iter().position(|r| r.len() != spec.dim) {
        return Err(CliError::schema("rays", format!("ray {i} does not have {} coordinates", spec.dim)));
    }
    if spec.divisor.len() != spec.rays.len() {
        return Err(CliError::schema(
            "divisor",
            format!("{} coefficients for {} rays", spec.divisor.len(), spec.rays.len()),
        ));
    }
    if let Some(c) = spec.cone.filter(|&c| c >= spec.max_cones.len()) {
        return Err(CliError::schema("cone", format!("no maximal cone {c}")));
    }
    if spec.m_max == Some(0) {
        return Err(CliError::schema("m_max", "must be at least 1"));
    }
    if spec.e_cap == Some(0) {
        return Err(CliError::schema("e_cap", "must be at least 1"));
    }
    spec.fan().map(|_| ())
}

/// Serializes a spec in the input format.
pub fn emit(spec: &InputSpec) -> String {
    serde_json::to_string_pretty(spec).expect("input specs always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const P2: &str = r#"{"dim": 2, "rays": [[1,0],[0,1],[-1,-1]],
        "max_cones": [[0,1],[1,2],[2,0]], "divisor": [0,0,1], "p": 2}"#;

    #[test]
    fn projective_plane() {
        let spec = parse_input(P2).unwrap();
        assert_eq!(spec.rays.len(), 3);
        assert_eq!(spec.max_cones.len(), 3);
        assert_eq!(spec.cones(), vec![0, 1, 2]);
        assert_eq!(parse_input(&emit(&spec)).unwrap(), spec);
    }

    #[test]
    fn errors() {
        let bad_p = P2.replace("\"p\": 2", "\"p\": 4");
        let err = parse_input(&bad_p).unwrap_err();
        assert!(matches!(&err, CliError::Schema { field, message } if field == "p" && message == "p must be prime"));

        assert!(matches!(parse_input("{\"dim\": 2,"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(
            parse_input(&P2.replace("\"p\": 2", "\"p\": 2, \"colour\": 1")),
            Err(CliError::Schema { .. })
        ));
        assert!(matches!(
            parse_input(&P2.replace("[2,0]]", "[0,2]]").replace("[[0,1],[1,2],", "[[0,1],")),
            Err(CliError::FanInvalid(_))
        ));
        assert!(matches!(
            parse_input(&P2.replace("[0,0,1]", "[0,1]")),
            Err(CliError::Schema { field, .. }) if field == "divisor"
        ));
        assert!(matches!(
            parse_input(&P2.replace("\"p\": 2", "\"p\": 2, \"cone\": 3")),
            Err(CliError::Schema { field, .. }) if field == "cone"
        ));
        // singular cone: weighted projective plane
        let weighted = r#"{"dim": 2, "rays": [[1,0],[0,1],[-1,-2]],
            "max_cones": [[0,1],[1,2],[2,0]], "divisor": [0,0,1], "p": 2}"#;
        assert!(matches!(parse_input(weighted), Err(CliError::FanInvalid(_))));
    }
}
