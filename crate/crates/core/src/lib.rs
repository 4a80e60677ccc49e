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

//! Benchmark toolkit for community detection.
//!
//! * [`generator`] builds LFR-style networks where every node carries its own
//!   mixing coefficient.
//! * [`metrics`] characterizes a community structure: embeddedness, scaled
//!   density, hub dominance and average distance, plus log-binned curves.
//! * [`detection`] implements Fast Greedy, Louvain, Walktrap, MarkovCluster
//!   and InfoMap along with the modularity and map-equation objectives.
//! * [`evaluation`] scores estimated partitions against the reference with
//!   NMI and drives whole benchmark runs.

pub mod detection;
pub mod evaluation;
pub mod generator;
pub mod graph;
pub mod metrics;
pub mod sampling;

pub use graph::{build_graph, Graph, GraphError, Partition};
