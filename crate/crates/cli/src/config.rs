//! Strict JSON run configuration.
//!
//! ```text
//! {"model": "new", "n": 1024, "length": 80, "t_end": 10,
//!  "initial": {"type": "soliton", "c": 1.2, "center": -20}}
//! ```
//!
//! Required keys are `model`, `n`, `length` and `t_end`. Unknown keys are
//! errors.

use serde_json::{json, Map, Value};
use shallow_core::solitons::validate_speed;
use shallow_core::{Error, InitialCondition, ModelKind, MomentumForm, RunConfig, TimeStep};

use crate::error::ConfigError;

const TOP_KEYS: &[&str] = &[
    "model",
    "n",
    "length",
    "t_end",
    "x0",
    "dt",
    "snapshot_every",
    "initial",
    "cfl",
    "viscosity",
    "momentum_form",
    "gradient_limit",
];

type Result<T> = std::result::Result<T, ConfigError>;

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = as_object(&doc, "config")?;
    reject_unknown(obj, TOP_KEYS, "")?;

    let model = parse_enum::<ModelKind>(required(obj, "model", "")?, "model")?;
    let n = integer(required(obj, "n", "")?, "n")?;
    let length = number(required(obj, "length", "")?, "length")?;
    let t_end = number(required(obj, "t_end", "")?, "t_end")?;
    let mut cfg = RunConfig::new(model, n, length, t_end);

    if let Some(v) = obj.get("x0") {
        cfg.x0 = number(v, "x0")?;
    }
    if let Some(v) = obj.get("dt") {
        cfg.dt = match v {
            Value::String(s) if s == "auto" => TimeStep::Auto,
            Value::Number(_) => TimeStep::Fixed(number(v, "dt")?),
            _ => return Err(mismatch("dt", "a number or \"auto\"")),
        };
    }
    if let Some(v) = obj.get("snapshot_every") {
        cfg.snapshot_every = number(v, "snapshot_every")?;
    }
    if let Some(v) = obj.get("cfl") {
        cfg.cfl = number(v, "cfl")?;
    }
    if let Some(v) = obj.get("viscosity") {
        cfg.viscosity = number(v, "viscosity")?;
    }
    if let Some(v) = obj.get("gradient_limit") {
        cfg.gradient_limit = number(v, "gradient_limit")?;
    }
    if let Some(v) = obj.get("momentum_form") {
        cfg.momentum_form = parse_enum::<MomentumForm>(v, "momentum_form")?;
    }
    if let Some(v) = obj.get("initial") {
        cfg.initial = parse_initial(v)?;
    }

    cfg.validate().map_err(|e| invalid_from_core(&e))?;
    Ok(cfg)
}

fn parse_initial(v: &Value) -> Result<InitialCondition> {
    let obj = as_object(v, "initial")?;
    let kind = match required(obj, "type", "initial.")? {
        Value::String(s) => s.as_str(),
        _ => return Err(mismatch("initial.type", "a string")),
    };
    let opt = |key: &str, default: f64| -> Result<f64> {
        obj.get(key)
            .map_or(Ok(default), |v| number(v, &format!("initial.{key}")))
    };
    let req = |key: &str| -> Result<f64> {
        number(required(obj, key, "initial.")?, &format!("initial.{key}"))
    };
    match kind {
        "rest" => {
            reject_unknown(obj, &["type"], "initial.")?;
            Ok(InitialCondition::Rest)
        }
        "soliton" => {
            reject_unknown(obj, &["type", "c", "center"], "initial.")?;
            let c = req("c")?;
            validate_speed(c).map_err(|e| invalid("initial.c", e.to_string()))?;
            Ok(InitialCondition::Soliton {
                c,
                center: opt("center", 0.0)?,
            })
        }
        "gaussian" => {
            reject_unknown(obj, &["type", "amplitude", "width", "center"], "initial.")?;
            Ok(InitialCondition::Gaussian {
                amplitude: req("amplitude")?,
                width: req("width")?,
                center: opt("center", 0.0)?,
            })
        }
        other => Err(invalid(
            "initial.type",
            format!("unknown initial condition {other:?} (expected \"rest\", \"soliton\" or \"gaussian\")"),
        )),
    }
}

/// JSON echo of a config, accepted back by [`parse_config`].
pub fn config_to_json(cfg: &RunConfig) -> Value {
    let initial = match cfg.initial {
        InitialCondition::Rest => json!({"type": "rest"}),
        InitialCondition::Soliton { c, center } => {
            json!({"type": "soliton", "c": c, "center": center})
        }
        InitialCondition::Gaussian {
            amplitude,
            width,
            center,
        } => json!({"type": "gaussian", "amplitude": amplitude, "width": width, "center": center}),
    };
    let dt = match cfg.dt {
        TimeStep::Auto => json!("auto"),
        TimeStep::Fixed(dt) => json!(dt),
    };
    json!({
        "model": cfg.model.name(),
        "n": cfg.n,
        "length": cfg.length,
        "t_end": cfg.t_end,
        "x0": cfg.x0,
        "dt": dt,
        "snapshot_every": cfg.snapshot_every,
        "initial": initial,
        "cfl": cfg.cfl,
        "viscosity": cfg.viscosity,
        "momentum_form": cfg.momentum_form.name(),
        "gradient_limit": cfg.gradient_limit,
    })
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| ConfigError::NotAnObject(what.to_string()))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], prefix: &str) -> Result<()> {
    // BTreeMap ordering keeps the reported key deterministic
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(ConfigError::UnknownKey(format!("{prefix}{k}"))),
        None => Ok(()),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, prefix: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| ConfigError::MissingKey(format!("{prefix}{key}")))
}

fn number(v: &Value, key: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| mismatch(key, "a number"))
}

fn integer(v: &Value, key: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| mismatch(key, "a nonnegative integer"))
}

fn parse_enum<T: std::str::FromStr<Err = String>>(v: &Value, key: &str) -> Result<T> {
    match v {
        Value::String(s) => s.parse().map_err(|reason| invalid(key, reason)),
        _ => Err(mismatch(key, "a string")),
    }
}

fn mismatch(key: &str, expected: &'static str) -> ConfigError {
    ConfigError::TypeMismatch {
        key: key.to_string(),
        expected,
    }
}

fn invalid(key: &str, reason: String) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason,
    }
}

fn invalid_from_core(e: &Error) -> ConfigError {
    let key = match e {
        Error::InvalidParameter { name, .. } => name,
        Error::GridTooSmall(_) | Error::GridOdd(_) => "n",
        Error::GridLength(_) => "length",
        Error::InadmissibleSpeed(_) => "initial.c",
        _ => "config",
    };
    let reason = match e {
        Error::InvalidParameter { reason, .. } => reason.clone(),
        other => other.to_string(),
    };
    invalid(key, reason)
}
