//! Run configuration: a JSON document with the [`TripodParams`] keys plus an
//! optional `group_velocity` mode, or one of the named presets.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::TripodParams;
use crate::presets;
use crate::propagation::VelocityModel;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: TripodParams,
    pub group_velocity: VelocityModel,
}

impl RunConfig {
    /// Presets run with matched group velocities.
    pub fn preset(name: &str) -> Result<Self> {
        let params = presets::by_name(name).ok_or_else(|| {
            Error::Config(format!(
                "unknown preset `{name}` (expected quantum or classical)"
            ))
        })?;
        Ok(Self {
            params,
            group_velocity: VelocityModel::Matched,
        })
    }

    pub fn from_json(source: &str, origin: &str) -> Result<Self> {
        let mut map: Map<String, Value> = serde_json::from_str(source).map_err(|e| {
            Error::Config(format!(
                "{origin}: line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        let group_velocity = match map.remove("group_velocity") {
            None => VelocityModel::default(),
            Some(v) => serde_json::from_value(v)
                .map_err(|e| Error::Config(format!("{origin}: field `group_velocity`: {e}")))?,
        };
        let params: TripodParams =
            serde_path_to_error::deserialize(Value::Object(map)).map_err(|e| {
                let path = e.path().to_string();
                let inner = e.into_inner();
                if path == "." {
                    Error::Config(format!("{origin}: {inner}"))
                } else {
                    Error::Config(format!("{origin}: field `{path}`: {inner}"))
                }
            })?;
        params.validate()?;
        Ok(Self {
            params,
            group_velocity,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let source = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&source, &path.display().to_string())
    }
}
