//! Eisenstein-Jacobi interconnection networks: exact residue arithmetic,
//! the `n`-dimensional cross-product topology `EJ_α^(n)`, lockstep
//! simulation of one-to-all and three-phase all-to-all broadcasting, and
//! closed-form traffic counts that reproduce the simulations without
//! running them.
//!
//! ```
//! use ejnet::prelude::*;
//!
//! let alpha = Modulus::new(2, 3).unwrap();
//! let net = Network::new(alpha, 2).unwrap();
//! let trace = run_improved_one_to_all(&net, 0).unwrap();
//! let receivers: Vec<u64> = trace.steps.iter().map(|s| s.receiving).collect();
//! assert_eq!(receivers, vec![12, 60, 144, 144]);
//! ```

pub mod analytics;
pub mod broadcast;
pub mod ej;
pub mod error;
pub mod report;
pub mod residue;
pub mod topology;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analytics::{
        analytic_prev, analytic_rows, compare_senders, expand_o2a, sender_ratio, total_senders,
        AnalyticStepRow, Term, TermMultiset,
    };
    pub use crate::broadcast::{
        run_all_to_all, run_improved_one_to_all, run_one_to_all, run_previous_one_to_all,
        verify_half_duplex, Algorithm, AllToAllTrace, BroadcastTrace, LinkUse, Phase, SectorPacket,
        StepLinks, StepStats,
    };
    pub use crate::ej::{EjInt, Unit};
    pub use crate::error::{Error, Result};
    pub use crate::residue::{Modulus, Residue};
    pub use crate::topology::{sector_of, sector_tree, LinkLabel, Network, NodeCoord, Sector};
}
