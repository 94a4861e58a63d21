//! Reference error-rate curves: heterodyne SQL, square-root measurement and
//! the Helstrom limit.

mod gram;
mod helstrom;
mod sql;

pub use gram::{
    gram_matrix, sqrt_gram, srm_confusion, srm_error_rate, ConfusionMatrix, GramDecomposition,
};
pub use helstrom::{
    helstrom_error_rate, helstrom_from_gram, helstrom_from_operators, weighted_density_operators,
    HelstromOptions, HelstromSolution,
};
pub use sql::sql_error_rate;
