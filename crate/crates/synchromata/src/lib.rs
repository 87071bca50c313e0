//! Exact computation with finite synchronous transducers: products,
//! minimization, synchronization analysis, cores and core distance, level
//! maps and spectra, dual automata with split and bad-pairs analysis, order
//! decision with certificates and infinite-orbit witnesses, Cayley machines,
//! disjoint combinations, and core-growth measurement.
//!
//! The `examples/` directory holds one runnable example per capability; the
//! thin `synchromata` binary exposes the same operations on TRN files.

pub mod badpairs;
pub mod cli;
pub mod combine;
pub mod dual;
pub mod error;
pub mod group;
pub mod growth;
pub mod levelmap;
pub mod minimize;
pub mod order;
pub mod partition;
pub mod periodic;
pub mod registry;
pub mod splits;
pub mod sync;
pub mod transducer;
pub mod trn;
pub mod words;

pub use error::{Error, Result};
pub use transducer::{InitialTransducer, RawState, RawTransducer, StateId, Transducer};
pub use words::{Letter, Word};

/// Budget caps shared by the exhaustive searches. Exceeding a cap yields
/// `Error::BudgetExceeded` rather than silent truncation.
#[derive(Debug, Clone)]
pub struct Caps {
    /// State pairs examined by pair-graph searches.
    pub pair_cap: usize,
    /// Words materialized by level maps, duals and forcing tables (3^13).
    pub word_cap: usize,
    /// States allowed in an intermediate power.
    pub state_cap: usize,
    /// Padding tuples enumerated by the split dependence checks.
    pub padding_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            pair_cap: 2_000_000,
            word_cap: 1_594_323,
            state_cap: 250_000,
            padding_cap: 1_000_000,
        }
    }
}
