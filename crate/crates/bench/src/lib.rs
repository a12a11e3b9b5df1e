//! Shared fixtures for the criterion benches.

use ejnet::residue::Modulus;
use ejnet::topology::Network;

pub fn network(a: i64, b: i64, dims: u32) -> Network {
    Network::new(Modulus::new(a, b).expect("valid generator"), dims).expect("valid network")
}

/// The network the published tables were produced on.
pub fn table_network() -> Network {
    network(3, 4, 3)
}
