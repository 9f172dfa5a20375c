//! Pair descriptor files and their realization as coideal presentations.
//!
//! A descriptor is a JSON object
//! `{"cartan": {"series": "A", "rank": 2}, "pi_theta": [1], "d": "flip",
//!   "c": {"1": "q"}, "s": {"1": "q - 1"}}`
//! with everything but `cartan` optional.  Indices are 1-based, matching the
//! printed generator names; parameter values are expression strings that
//! must evaluate to scalars.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use qsp_core::error::Error;
use qsp_core::involution::validate_satake;
use qsp_core::pair::{build_pair, PairPresentation};
use qsp_core::rootdata::{cartan_init, CartanSpec, DiagramMap};
use qsp_core::text::{parse_expression, print_qrat};
use qsp_core::uq::{default_degree, DEFAULT_BUDGET};
use qsp_core::{AlgebraContext, QRat};

#[derive(Debug, Deserialize)]
pub struct CartanDesc {
    pub series: String,
    #[serde(default)]
    pub rank: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum DiagramDesc {
    Name(String),
    Explicit { explicit: Vec<usize> },
}

#[derive(Debug, Deserialize)]
pub struct PairConfig {
    pub cartan: CartanDesc,
    #[serde(default)]
    pub pi_theta: Vec<usize>,
    #[serde(default)]
    pub d: Option<DiagramDesc>,
    #[serde(default)]
    pub c: BTreeMap<String, String>,
    #[serde(default)]
    pub s: BTreeMap<String, String>,
}

impl PairConfig {
    /// A split pair over the given series label: empty fixed part, identity
    /// diagram map, no parameters.
    pub fn split(label: &str) -> PairConfig {
        PairConfig {
            cartan: CartanDesc {
                series: label.to_string(),
                rank: None,
            },
            pi_theta: Vec::new(),
            d: None,
            c: BTreeMap::new(),
            s: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<PairConfig, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            Error::Validation(format!("config {}: {e}", path.display()))
        })
    }

    /// Series label with the rank appended when the series name alone does
    /// not carry one.
    pub fn label(&self) -> Result<String, Error> {
        let series = self.cartan.series.trim();
        if series.chars().any(|ch| ch.is_ascii_digit()) {
            return Ok(series.to_string());
        }
        let rank = self.cartan.rank.ok_or_else(|| {
            Error::Validation(format!("cartan series {series:?} needs a rank"))
        })?;
        Ok(format!("{series}{rank}"))
    }
}

fn one_based(k: usize, n: usize, what: &str) -> Result<usize, Error> {
    if k == 0 || k > n {
        return Err(Error::Validation(format!(
            "{what} index {k} is out of range 1..={n}"
        )));
    }
    Ok(k - 1)
}

fn scalar_params(
    ctx: &AlgebraContext,
    raw: &BTreeMap<String, String>,
    what: &str,
) -> Result<BTreeMap<usize, QRat>, Error> {
    let mut out = BTreeMap::new();
    for (key, expr) in raw {
        let k: usize = key.parse().map_err(|_| {
            Error::Validation(format!("{what} key {key:?} is not an index"))
        })?;
        let i = one_based(k, ctx.n(), what)?;
        let e = parse_expression(ctx, expr)?;
        let v = e.as_scalar(ctx.n()).ok_or_else(|| {
            Error::Validation(format!("{what} parameter {key} = {expr:?} is not a scalar"))
        })?;
        out.insert(i, v);
    }
    Ok(out)
}

/// A realized pair together with the descriptor echo placed in every JSON
/// report.
pub struct Workbench {
    pub pair: PairPresentation,
    pub descriptor: Value,
}

/// Build the pair a config describes, honoring degree and budget overrides.
pub fn realize(
    cfg: &PairConfig,
    max_degree: Option<usize>,
    budget: Option<u64>,
) -> Result<Workbench, Error> {
    let label = cfg.label()?;
    let datum = cartan_init(&CartanSpec::Series(label.clone()))?;
    let n = datum.n;

    let mut pi_theta = BTreeSet::new();
    for &k in &cfg.pi_theta {
        pi_theta.insert(one_based(k, n, "pi_theta")?);
    }
    let d = match &cfg.d {
        None => DiagramMap::Id,
        Some(DiagramDesc::Name(s)) => match s.as_str() {
            "id" => DiagramMap::Id,
            "flip" => DiagramMap::Flip,
            other => {
                return Err(Error::Validation(format!(
                    "unknown diagram map {other:?}: expected \"id\", \"flip\", or an explicit permutation"
                )))
            }
        },
        Some(DiagramDesc::Explicit { explicit }) => {
            let mut p = Vec::with_capacity(explicit.len());
            for &k in explicit {
                p.push(one_based(k, n, "diagram map")?);
            }
            DiagramMap::Explicit(p)
        }
    };

    let theta = validate_satake(&datum, &pi_theta, &d)?;
    let degree = max_degree.unwrap_or_else(|| default_degree(&datum));
    let ctx = AlgebraContext::new(datum, degree, budget.unwrap_or(DEFAULT_BUDGET))?;
    let c = scalar_params(&ctx, &cfg.c, "c")?;
    let s = scalar_params(&ctx, &cfg.s, "s")?;

    let d_echo = match &d {
        DiagramMap::Id => json!("id"),
        DiagramMap::Flip => json!("flip"),
        DiagramMap::Explicit(p) => {
            json!({ "explicit": p.iter().map(|&k| k + 1).collect::<Vec<_>>() })
        }
    };
    let param_echo = |m: &BTreeMap<usize, QRat>| -> Value {
        Value::Object(
            m.iter()
                .map(|(i, v)| ((i + 1).to_string(), json!(print_qrat(v))))
                .collect(),
        )
    };
    let pair = build_pair(theta, ctx, c, s)?;
    let descriptor = json!({
        "cartan": { "series": label, "rank": n },
        "pi_theta": pi_theta.iter().map(|&k| k + 1).collect::<Vec<_>>(),
        "d": d_echo,
        "c": param_echo(&pair.c_params),
        "s": param_echo(&pair.s_params),
        "parity_ok": pair.theta.parity_ok(),
    });
    Ok(Workbench { pair, descriptor })
}
