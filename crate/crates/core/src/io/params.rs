//! JSON file holding the per-layer parameters of an unfolded model.
//!
//! ```json
//! {
//!   "T": 2,
//!   "gamma": 0.1,
//!   "q": 0.05,
//!   "layers": [
//!     { "A_t": [[...m reals...], ...n rows...], "lambda_t": 4e-8, "eps_t": [...n reals...] },
//!     ...
//!   ]
//! }
//! ```
//!
//! `layers` must hold exactly `T` records. The JSON Schema ships as
//! [`LAYER_PARAMS_SCHEMA`]. On load every `eps_t` entry is raised to at
//! least [`EPS_FLOOR`]; the number of raised entries is reported.

use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::{read_to_string, write_atomic};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solvers::{LayerParams, UnfoldedModel, EPS_FLOOR};

/// JSON Schema (draft 2020-12) of the parameter file.
pub const LAYER_PARAMS_SCHEMA: &str = include_str!("../../schemas/layer_params.schema.json");

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(rename = "T")]
    depth: usize,
    gamma: f64,
    q: f64,
    layers: Vec<RawLayer>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    #[serde(rename = "A_t")]
    a_t: Vec<Vec<f64>>,
    lambda_t: f64,
    eps_t: Vec<f64>,
}

/// What happened while loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadSummary {
    pub layers: usize,
    /// `eps_t` entries raised to the floor, per layer.
    pub clamped_per_layer: Vec<usize>,
}

impl LoadSummary {
    pub fn clamped_total(&self) -> usize {
        self.clamped_per_layer.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct LoadedModel<T: Real> {
    pub model: UnfoldedModel<T>,
    pub summary: LoadSummary,
}

fn json_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    // serde_json reports missing/unknown keys as "... field `name` ..."
    let field = msg
        .split('`')
        .nth(1)
        .filter(|_| msg.contains("field"))
        .unwrap_or("document")
        .to_string();
    let field = if e.is_eof() {
        format!("{field} (truncated document)")
    } else {
        field
    };
    Error::format(e.line(), field, msg)
}

fn finite(v: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(format!("{} is not finite", what())))
    }
}

/// Parses and validates a parameter document for an `m × n` instance.
pub fn parse_layer_params<T: Real>(text: &str, m: usize, n: usize) -> Result<LoadedModel<T>> {
    let raw: RawModel = serde_json::from_str(text).map_err(json_error)?;
    if raw.depth == 0 {
        return Err(Error::format(0, "T", "depth must be at least 1"));
    }
    if raw.layers.len() != raw.depth {
        return Err(Error::format(
            0,
            "layers",
            format!(
                "T = {} but {} layer records present",
                raw.depth,
                raw.layers.len()
            ),
        ));
    }
    let gamma = finite(raw.gamma, || "gamma".into())?;
    let q = finite(raw.q, || "q".into())?;

    let mut layers = Vec::with_capacity(raw.depth);
    let mut clamped_per_layer = Vec::with_capacity(raw.depth);
    for (t, layer) in raw.layers.into_iter().enumerate() {
        let tag = t + 1;
        if layer.a_t.len() != n {
            return Err(Error::invalid(format!(
                "layer {tag}: A_t has {} rows, expected n = {n}",
                layer.a_t.len()
            )));
        }
        let mut data = Vec::with_capacity(n * m);
        for (i, row) in layer.a_t.iter().enumerate() {
            if row.len() != m {
                return Err(Error::invalid(format!(
                    "layer {tag}: A_t row {i} has {} entries, expected m = {m}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                data.push(T::lit(finite(v, || format!("layer {tag}: A_t[{i}][{j}]"))?));
            }
        }
        if layer.eps_t.len() != n {
            return Err(Error::invalid(format!(
                "layer {tag}: eps_t has {} entries, expected n = {n}",
                layer.eps_t.len()
            )));
        }
        let mut clamped = 0;
        let mut eps = Vec::with_capacity(n);
        for (i, &v) in layer.eps_t.iter().enumerate() {
            let v = finite(v, || format!("layer {tag}: eps_t[{i}]"))?;
            if v < EPS_FLOOR {
                clamped += 1;
                eps.push(T::lit(EPS_FLOOR));
            } else {
                eps.push(T::lit(v));
            }
        }
        let lambda = finite(layer.lambda_t, || format!("layer {tag}: lambda_t"))?;
        clamped_per_layer.push(clamped);
        layers.push(LayerParams {
            a_t: Array2::from_shape_vec((n, m), data).expect("shape checked"),
            lambda_t: T::lit(lambda),
            eps_t: Array1::from(eps),
        });
    }

    let model = UnfoldedModel {
        layers,
        gamma: T::lit(gamma),
        q: T::lit(q),
    };
    model.validate(m, n)?;
    Ok(LoadedModel {
        summary: LoadSummary {
            layers: model.depth(),
            clamped_per_layer,
        },
        model,
    })
}

/// Reads a parameter file; see [`parse_layer_params`].
pub fn load_layer_params<T: Real>(path: &Path, m: usize, n: usize) -> Result<LoadedModel<T>> {
    parse_layer_params(&read_to_string(path)?, m, n)
}

/// JSON text of `model`. Numbers use the shortest representation that
/// parses back to the same `f64`, so save → load is lossless.
pub fn render_layer_params<T: Real>(model: &UnfoldedModel<T>) -> String {
    let raw = RawModel {
        depth: model.depth(),
        gamma: model.gamma.as_f64(),
        q: model.q.as_f64(),
        layers: model
            .layers
            .iter()
            .map(|l| RawLayer {
                a_t: l
                    .a_t
                    .rows()
                    .into_iter()
                    .map(|r| r.iter().map(|v| v.as_f64()).collect())
                    .collect(),
                lambda_t: l.lambda_t.as_f64(),
                eps_t: l.eps_t.iter().map(|v| v.as_f64()).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&raw).expect("plain numeric structure serializes")
}

pub fn save_layer_params<T: Real>(model: &UnfoldedModel<T>, path: &Path) -> Result<()> {
    let text = render_layer_params(model);
    write_atomic(path, |w| {
        w.write_all(text.as_bytes())?;
        w.write_all(b"\n")
    })
}
