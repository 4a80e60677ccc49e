// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Configuration files. TOML by default, JSON when the file name ends in
//! `.json`. Command-line flags override file values and the seed always
//! comes from the command line.

use std::path::Path;

use commbench_core::evaluation::BenchmarkConfig;
use commbench_core::generator::GeneratorConfig;
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::error::CliError;

pub fn load_value(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let is_json = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    let value = if is_json {
        serde_json::from_str(&text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })?
    } else {
        toml::from_str(&text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e
                .span()
                .map_or(0, |s| text[..s.start].matches('\n').count() + 1),
            message: e.message().to_string(),
        })?
    };
    match value {
        Value::Object(_) => Ok(value),
        _ => Err(CliError::Config(format!(
            "{}: expected a table at the top level",
            path.display()
        ))),
    }
}

fn object<'a>(value: &'a mut Value, what: &str) -> Result<&'a mut Map<String, Value>, CliError> {
    value
        .as_object_mut()
        .ok_or_else(|| CliError::Config(format!("{what} must be a table")))
}

fn decode<T: DeserializeOwned>(value: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

/// Generator configuration from an optional file plus `(key, value)`
/// overrides, validated.
pub fn generator_config(
    path: Option<&Path>,
    overrides: Vec<(&'static str, Value)>,
    seed: u64,
) -> Result<GeneratorConfig, CliError> {
    let mut value = match path {
        Some(p) => load_value(p)?,
        None => Value::Object(Map::new()),
    };
    let table = object(&mut value, "generator configuration")?;
    for (key, v) in overrides {
        table.insert(key.to_string(), v);
    }
    table.insert("seed".into(), Value::from(seed));
    let cfg: GeneratorConfig = decode(value, "generator configuration")?;
    cfg.validate()?;
    Ok(cfg)
}

/// Benchmark configuration. A missing `generators` list means a single
/// default generator; every generator receives `seed`.
pub fn bench_config(
    path: Option<&Path>,
    overrides: Vec<(&'static str, Value)>,
    generator_overrides: Vec<(&'static str, Value)>,
    seed: u64,
) -> Result<BenchmarkConfig, CliError> {
    let mut value = match path {
        Some(p) => load_value(p)?,
        None => Value::Object(Map::new()),
    };
    let table = object(&mut value, "benchmark configuration")?;
    for (key, v) in overrides {
        table.insert(key.to_string(), v);
    }
    let generators = table
        .entry("generators")
        .or_insert_with(|| Value::Array(vec![Value::Object(Map::new())]));
    let list = generators
        .as_array_mut()
        .ok_or_else(|| CliError::Config("generators must be a list of tables".into()))?;
    for g in list.iter_mut() {
        let gt = object(g, "each generator")?;
        for (key, v) in &generator_overrides {
            gt.insert(key.to_string(), v.clone());
        }
        gt.insert("seed".into(), Value::from(seed));
    }
    let cfg: BenchmarkConfig = decode(value, "benchmark configuration")?;
    cfg.validate()?;
    Ok(cfg)
}
