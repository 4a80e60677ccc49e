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

use std::path::{Path, PathBuf};

use commbench_core::detection::DetectionError;
use commbench_core::evaluation::EvaluationError;
use commbench_core::generator::GeneratorError;
use commbench_core::GraphError;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Detection(#[from] DetectionError),
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("membership covers {membership} nodes but the network has {network}")]
    NodeMismatch { network: usize, membership: usize },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
            CliError::Generator(GeneratorError::InvalidConfig { .. }) => "config",
            CliError::Generator(_) => "generator",
            CliError::Detection(DetectionError::UnknownAlgorithm(_)) => "unknown_algorithm",
            CliError::Detection(_) => "detection",
            CliError::Evaluation(_) => "evaluation",
            CliError::Graph(_) => "graph",
            CliError::NodeMismatch { .. } => "node_mismatch",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Generator(GeneratorError::InvalidConfig { field, .. }) => {
                body["field"] = json!(field);
            }
            CliError::Detection(DetectionError::UnknownAlgorithm(name)) => {
                body["algorithm"] = json!(name);
                body["valid"] = json!(commbench_core::detection::Algorithm::ALL
                    .iter()
                    .map(|a| a.id())
                    .collect::<Vec<_>>());
            }
            CliError::Parse { path, line, .. } => {
                body["path"] = json!(path.display().to_string());
                body["line"] = json!(line);
            }
            CliError::Io { path, .. } => {
                body["path"] = json!(path.display().to_string());
            }
            _ => {}
        }
        json!({ "error": body }).to_string()
    }
}
