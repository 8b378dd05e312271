//! Community detection by conductance-seeded, gravitation-driven growth
//! (NCB), with label propagation and greedy modularity baselines, quality
//! metrics and an evaluation harness.
//!
//! ```
//! let g = ncb::datasets::karate();
//! let p = ncb::detect(&g).unwrap();
//! let truth = ncb::datasets::karate_truth(&g).unwrap();
//! assert_eq!(ncb::nmi(&p, &truth).unwrap(), 1.0);
//! ```

pub mod baselines;
pub mod conductance;
pub mod datasets;
pub mod error;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod ncb;
pub mod partition;
pub mod ratio;

pub use baselines::{greedy_modularity, lpa};
pub use conductance::{
    conductance, find_seeds, neighborhood_conductance, SeedRecord, SeedSequence,
};
pub use error::{Error, Result};
pub use graph::{load_edge_list, load_gml, EdgeListOptions, Graph, NodeId};
pub use harness::Algorithm;
pub use metrics::{modularity, nmi, MetricReport};
pub use ncb::{detect, detect_traced, Event};
pub use partition::{Community, CommunityId, Partition};
pub use ratio::Ratio;
