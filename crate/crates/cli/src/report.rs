//! Machine-readable reports.
//!
//! Identical inputs and flags serialize to byte-identical output (timing is
//! behind `--no-timing`). Rational values are emitted as strings; all index
//! sets are 1-based to match the usual labeling of points.

use serde::Serialize;
use serde_json::{json, Value};

use momenta::nullspace::MinorTest;
use momenta::residual::{Residual, ResidualGrid};
use momenta::{Mat, Scalar};

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub max_abs_residual: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_at: Option<Vec<usize>>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub mode: String,
    pub tolerance: f64,
    pub index_base: u8,
    pub input: Value,
    pub data: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn assemble(
        command: &str,
        mode: momenta::Mode,
        tolerance: f64,
        input: Value,
        data: Value,
        checks: Vec<Check>,
        timing_ms: Option<f64>,
    ) -> Report {
        let pass = checks.iter().all(|c| c.pass);
        Report {
            command: command.to_string(),
            mode: mode.name().to_string(),
            tolerance,
            index_base: 1,
            input,
            data,
            checks,
            pass,
            timing_ms,
        }
    }

    pub fn human_summary(&self) -> String {
        let mut out = format!(
            "{}: {} ({} mode, tolerance {:e})\n",
            self.command,
            if self.pass { "PASS" } else { "FAIL" },
            self.mode,
            self.tolerance
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {} (max residual {})\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.max_abs_residual
            ));
        }
        out
    }
}

pub fn scalar_value(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(_) => Value::String(s.to_string()),
        Scalar::Float(v) => json!(v),
    }
}

pub fn vector_value(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_value).collect())
}

pub fn grid_value(m: &Mat) -> Value {
    Value::Array((0..m.nrows()).map(|i| vector_value(m.row(i))).collect())
}

pub fn index_set_value(indices: &[usize]) -> Value {
    Value::Array(indices.iter().map(|&i| json!(i + 1)).collect())
}

pub fn check_residual(name: &str, r: &Residual, eps: f64) -> Check {
    Check {
        name: name.to_string(),
        max_abs_residual: scalar_value(&r.value.abs()),
        worst_at: None,
        pass: r.passes(eps),
    }
}

pub fn check_grid(name: &str, grid: &ResidualGrid, eps: f64) -> Check {
    let (i, j, v) = grid.worst();
    Check {
        name: name.to_string(),
        max_abs_residual: scalar_value(&v.abs()),
        worst_at: Some(vec![i + 1, j + 1]),
        pass: grid.passes(eps),
    }
}

pub fn check_scalar(name: &str, value: &Scalar, scale: &Scalar, eps: f64) -> Check {
    Check {
        name: name.to_string(),
        max_abs_residual: scalar_value(&value.abs()),
        worst_at: None,
        pass: value.is_zero_within(eps, scale),
    }
}

pub fn check_bool(name: &str, pass: bool) -> Check {
    Check {
        name: name.to_string(),
        max_abs_residual: Value::Null,
        worst_at: None,
        pass,
    }
}

pub fn check_minor_test(name: &str, t: &MinorTest) -> Check {
    match &t.witness {
        None => Check {
            name: name.to_string(),
            max_abs_residual: json!(0),
            worst_at: None,
            pass: t.all_vanish,
        },
        Some(w) => Check {
            name: name.to_string(),
            max_abs_residual: scalar_value(&w.value.abs()),
            worst_at: Some(w.rows.iter().map(|&r| r + 1).collect()),
            pass: t.all_vanish,
        },
    }
}
