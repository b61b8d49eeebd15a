//! Exact Stanley depth of squarefree monomial ideals and their quotients,
//! computed as interval partitions of subset families of `2^[n]`, together
//! with the counting criteria, reductions and hypergraph census used to
//! compare `sdepth I` with `sdepth S/I`.

pub mod criteria;
pub mod enumeration;
pub mod lattice;
pub mod multigraded;
pub mod reductions;
pub mod solver;
pub mod text;

pub use criteria::{combinatorial_criterion, strong_cc, CriterionResult, SccResult, Verdict};
pub use lattice::{
    complement_upset, down_closure, f_vector, validate_partition, Antichain, FVector, Interval, IntervalPartition,
    SetFamily, VertexSet,
};
pub use solver::{ideal_sdepth, quotient_sdepth, sdepth, Solver};
pub use text::{format_antichain, parse_antichain};
