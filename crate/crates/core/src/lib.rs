//! Offline checking of partially observed distributed executions against
//! interaction models.
//!
//! An interaction is a term over `strict`, `seq`, `par`, `alt` and three loop
//! operators whose leaves are emissions `l!m` and receptions `l?m` on lifelines.
//! A multi-trace holds one local log per lifeline. [`analysis::explore`]
//! decides whether a multi-trace is a multi-prefix of some behavior of the
//! interaction by searching a graph whose edges either execute an action or
//! remove lifelines whose logs are exhausted.
//!
//! ```
//! use mtv_core::analysis::{explore, ExploreConfig, Verdict};
//! use mtv_core::samples::{pubsub, pubsub_partial_trace};
//!
//! let (sig, model) = pubsub();
//! let report = explore(&sig, &model, &pubsub_partial_trace(), &ExploreConfig::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::Ok);
//! ```

pub mod analysis;
pub mod bench;
pub mod ir;
pub mod opsem;
pub mod samples;
pub mod traces;
