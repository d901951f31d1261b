//! Finite metric spaces with distinguished subsets: Hausdorff distances,
//! gluings, exact Gromov–Hausdorff brackets for pairs and tuples, counting
//! functions, and chained gluings.

pub mod chain;
pub mod counting;
pub mod error;
pub mod gluing;
pub mod hausdorff;
pub mod io;
pub mod metric;
pub mod solver;

pub use chain::{build_chain, chain_convergence_report, limit_proxy, ChainGluing, ChainReport, LimitProxy};
pub use error::{Error, Result, Side, Violation};
pub use gluing::CrossMetric;
pub use hausdorff::{hausdorff, pair_hausdorff, tuple_hausdorff, MetricPair, MetricTuple};
pub use metric::{validate_metric, FiniteMetricSpace, SubsetRef};
pub use solver::{DistanceBracket, SearchBudget};
