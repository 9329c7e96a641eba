//! Input document parsing.
//!
//! One JSON object describes a problem instance. Rational-mode numerics are
//! integers or `"p/q"` strings so nothing is lost to binary floating point;
//! float mode takes plain JSON numbers.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value;

use momenta::central::CentralSystem;
use momenta::equilibrium::InteractionCoefficients;
use momenta::{Configuration, Mat, Mode, Scalar, WeightVector};

pub struct InputDocument {
    pub mode: Mode,
    pub raw: Value,
    pub points: Configuration,
    pub weights: Option<WeightVector>,
    pub masses: Option<WeightVector>,
    pub exponent_a: Option<Scalar>,
    pub lambda: Option<Scalar>,
    pub phi: Option<InteractionCoefficients>,
    pub s_matrix: Option<Mat>,
    /// 1-based point subset for subconfiguration commands.
    pub indices: Option<Vec<usize>>,
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
}

fn parse_scalar(v: &Value, mode: Mode) -> Result<Scalar> {
    match mode {
        Mode::Rational => match v {
            Value::Number(n) => {
                let i = n.as_i64().ok_or_else(|| {
                    anyhow!("rational mode needs integers or \"p/q\" strings, got {n}")
                })?;
                Ok(Scalar::int(i))
            }
            Value::String(s) => Scalar::parse_rational(s).map_err(|e| anyhow!("{e}")),
            other => bail!("rational mode needs integers or \"p/q\" strings, got {other}"),
        },
        Mode::Float => match v {
            Value::Number(n) => {
                let f = n.as_f64().ok_or_else(|| anyhow!("bad number {n}"))?;
                Scalar::float(f).map_err(|e| anyhow!("{e}"))
            }
            other => bail!("float mode needs numbers, got {other}"),
        },
    }
}

fn parse_vector(v: &Value, mode: Mode, what: &str) -> Result<Vec<Scalar>> {
    let arr = v
        .as_array()
        .ok_or_else(|| anyhow!("{what} must be an array"))?;
    arr.iter()
        .map(|e| parse_scalar(e, mode))
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("while parsing {what}"))
}

fn parse_grid(v: &Value, mode: Mode, what: &str) -> Result<Mat> {
    let arr = v
        .as_array()
        .ok_or_else(|| anyhow!("{what} must be an array of rows"))?;
    let rows = arr
        .iter()
        .map(|row| parse_vector(row, mode, what))
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(rows).map_err(|e| anyhow!("{what}: {e}"))
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument> {
        let raw: Value = serde_json::from_str(text).context("invalid JSON")?;
        let obj = raw
            .as_object()
            .ok_or_else(|| anyhow!("document must be a JSON object"))?;

        for key in obj.keys() {
            const KNOWN: [&str; 11] = [
                "mode",
                "points",
                "weights",
                "masses",
                "exponent_a",
                "lambda",
                "phi",
                "s_matrix",
                "indices",
                "tolerance",
                "max_iterations",
            ];
            if !KNOWN.contains(&key.as_str()) {
                bail!("unknown field {key:?}");
            }
        }

        let mode = match obj.get("mode").and_then(Value::as_str) {
            Some("rational") => Mode::Rational,
            Some("float") => Mode::Float,
            Some(other) => bail!("mode must be \"rational\" or \"float\", got {other:?}"),
            None => bail!("missing required field \"mode\""),
        };

        let points_val = obj
            .get("points")
            .ok_or_else(|| anyhow!("missing required field \"points\""))?;
        let points_arr = points_val
            .as_array()
            .ok_or_else(|| anyhow!("points must be an array of coordinate arrays"))?;
        let points = Configuration::new(
            points_arr
                .iter()
                .map(|p| parse_vector(p, mode, "points"))
                .collect::<Result<Vec<_>>>()?,
        )
        .map_err(|e| anyhow!("points: {e}"))?;

        let weights = obj
            .get("weights")
            .map(|v| -> Result<WeightVector> {
                WeightVector::new(parse_vector(v, mode, "weights")?).map_err(|e| anyhow!("{e}"))
            })
            .transpose()?;
        let masses = obj
            .get("masses")
            .map(|v| -> Result<WeightVector> {
                WeightVector::new(parse_vector(v, mode, "masses")?).map_err(|e| anyhow!("{e}"))
            })
            .transpose()?;
        let exponent_a = obj
            .get("exponent_a")
            .map(|v| parse_scalar(v, mode))
            .transpose()
            .context("while parsing exponent_a")?;
        let lambda = obj
            .get("lambda")
            .map(|v| parse_scalar(v, mode))
            .transpose()
            .context("while parsing lambda")?;
        let phi = obj
            .get("phi")
            .map(|v| -> Result<InteractionCoefficients> {
                InteractionCoefficients::new(parse_grid(v, mode, "phi")?)
                    .map_err(|e| anyhow!("phi: {e}"))
            })
            .transpose()?;
        let s_matrix = obj
            .get("s_matrix")
            .map(|v| parse_grid(v, mode, "s_matrix"))
            .transpose()?;
        let indices = obj
            .get("indices")
            .map(|v| -> Result<Vec<usize>> {
                let arr = v
                    .as_array()
                    .ok_or_else(|| anyhow!("indices must be an array"))?;
                arr.iter()
                    .map(|e| {
                        let i = e
                            .as_u64()
                            .ok_or_else(|| anyhow!("indices must be positive integers"))?;
                        if i == 0 {
                            bail!("indices are 1-based; got 0");
                        }
                        Ok(i as usize - 1)
                    })
                    .collect()
            })
            .transpose()?;
        let tolerance = obj
            .get("tolerance")
            .map(|v| {
                v.as_f64()
                    .ok_or_else(|| anyhow!("tolerance must be a number"))
            })
            .transpose()?;
        let max_iterations = obj
            .get("max_iterations")
            .map(|v| {
                v.as_u64()
                    .map(|u| u as usize)
                    .ok_or_else(|| anyhow!("max_iterations must be a positive integer"))
            })
            .transpose()?;

        Ok(InputDocument {
            mode,
            raw,
            points,
            weights,
            masses,
            exponent_a,
            lambda,
            phi,
            s_matrix,
            indices,
            tolerance,
            max_iterations,
        })
    }

    /// Weights for weighted-system commands; masses stand in when no
    /// weights field is given.
    pub fn require_weights(&self) -> Result<&WeightVector> {
        self.weights
            .as_ref()
            .or(self.masses.as_ref())
            .ok_or_else(|| anyhow!("this command needs a \"weights\" (or \"masses\") field"))
    }

    pub fn require_masses(&self) -> Result<&WeightVector> {
        self.masses
            .as_ref()
            .ok_or_else(|| anyhow!("this command needs a \"masses\" field"))
    }

    pub fn require_phi(&self) -> Result<&InteractionCoefficients> {
        self.phi
            .as_ref()
            .ok_or_else(|| anyhow!("this command needs a \"phi\" field"))
    }

    pub fn require_exponent(&self) -> Result<&Scalar> {
        self.exponent_a
            .as_ref()
            .ok_or_else(|| anyhow!("this command needs an \"exponent_a\" field"))
    }

    /// The weighted system of the `weights` field.
    pub fn weighted_system(&self) -> Result<momenta::WeightedSystem> {
        momenta::WeightedSystem::new(self.points.clone(), self.require_weights()?.clone())
            .map_err(|e| anyhow!("{e}"))
    }

    /// The central system of the `masses`/`exponent_a`/`lambda` fields.
    pub fn central_system(&self) -> Result<CentralSystem> {
        CentralSystem::new(
            self.points.clone(),
            self.require_masses()?.clone(),
            self.require_exponent()?.clone(),
            self.lambda.clone(),
        )
        .map_err(|e| anyhow!("{e}"))
    }
}
