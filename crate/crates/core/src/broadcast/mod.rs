//! Synchronous lockstep broadcast simulation.
//!
//! A transmission started in step `s` is delivered in step `s`: its sender
//! counts as sending and its target as receiving in the same row. A node
//! that transmits on several links in one step counts as one sender; the
//! individual links are kept in the per-step [`StepLinks`] records.
//!
//! Every schedule here is built from one relay rule. A node that receives
//! the packet `(sector, dim, x, y)` forwards
//!
//! * `(x - 1, 0)` along the sector's minor unit if `x > 0`,
//! * `(x - 1, y - 1)` along the sector's major unit if `y > 0`,
//!
//! in the next step. Launching a sector means sending `(D - 1, D - 1)` along
//! its major unit, `D` being the layer diameter; the packets then trace out
//! the sector's spanning tree in exactly `D` steps.

mod all_to_all;
mod half_duplex;
mod one_to_all;

pub use all_to_all::{
    run_all_to_all, run_all_to_all_observed, AllToAllTrace, Delivery, Phase, PhaseSummary,
    ALL_TO_ALL_BUDGET,
};
pub use half_duplex::{verify_half_duplex, HalfDuplexViolation};
pub use one_to_all::{
    run_improved_one_to_all, run_one_to_all, run_previous_one_to_all, BroadcastTrace,
    MeanReceiveStep,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ej::Unit;
use crate::error::{Error, Result};
use crate::topology::{LinkLabel, Network, Sector};

/// The two one-to-all schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Dimension by dimension: `n` rounds of `D` steps, highest dimension
    /// first.
    Previous,
    /// Every receiver also starts a full broadcast on all lower dimensions.
    Improved,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Previous, Algorithm::Improved];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Previous => "previous",
            Algorithm::Improved => "improved",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "previous" => Ok(Algorithm::Previous),
            "improved" => Ok(Algorithm::Improved),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// Node activity in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepStats {
    /// Global step number, starting at 1.
    pub step: u32,
    /// Round number for round-structured schedules.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round: Option<u32>,
    pub free: u64,
    pub sending: u64,
    pub receiving: u64,
    pub active: u64,
}

/// One directed link carrying traffic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinkUse {
    pub from: u64,
    pub to: u64,
    pub label: LinkLabel,
}

/// Every link used in one step. `phase` is set for all-to-all steps and
/// selects the port assignment the half-duplex check enforces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepLinks {
    pub step: u32,
    pub phase: Option<Phase>,
    pub uses: Vec<LinkUse>,
}

/// The packet carried along a sector tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SectorPacket {
    pub sector: Sector,
    pub dim: u8,
    pub x: u32,
    pub y: u32,
}

impl SectorPacket {
    pub fn launch(sector: Sector, dim: u8, layer_diameter: u32) -> Self {
        SectorPacket {
            sector,
            dim,
            x: layer_diameter - 1,
            y: layer_diameter - 1,
        }
    }

    pub fn major(&self) -> Unit {
        self.sector.major()
    }

    pub fn minor(&self) -> Unit {
        self.sector.minor()
    }

    /// The packets this one spawns in its own dimension, with the unit each
    /// is sent along.
    pub fn forwards(&self) -> impl Iterator<Item = (Unit, SectorPacket)> {
        let minor = (self.x > 0).then(|| {
            (
                self.minor(),
                SectorPacket {
                    x: self.x - 1,
                    y: 0,
                    ..*self
                },
            )
        });
        let major = (self.y > 0).then(|| {
            (
                self.major(),
                SectorPacket {
                    x: self.x - 1,
                    y: self.y - 1,
                    ..*self
                },
            )
        });
        minor.into_iter().chain(major)
    }

    /// True when the packet neither relays nor recurses.
    pub fn is_leaf(&self) -> bool {
        self.x == 0 && self.y == 0 && self.dim == 1
    }
}

/// A packet in flight.
#[derive(Debug, Clone, Copy)]
struct Transmission {
    from: u64,
    label: LinkLabel,
    packet: SectorPacket,
}

/// Pushes the launch of `sectors` on dimension `dim` from `node`.
fn launch_dimension(
    out: &mut Vec<Transmission>,
    node: u64,
    dim: u8,
    sectors: &[Sector],
    layer_diameter: u32,
) {
    out.extend(sectors.iter().map(|&s| Transmission {
        from: node,
        label: LinkLabel::new(dim, s.major()),
        packet: SectorPacket::launch(s, dim, layer_diameter),
    }));
}

/// Pushes the launch of `sectors` on every dimension `1..=top_dim` from `node`.
fn launch_sectors(
    out: &mut Vec<Transmission>,
    node: u64,
    top_dim: u8,
    sectors: &[Sector],
    layer_diameter: u32,
) {
    for dim in 1..=top_dim {
        launch_dimension(out, node, dim, sectors, layer_diameter);
    }
}

fn check_simulation_inputs(net: &Network) -> Result<()> {
    net.modulus().require_broadcast_shape()?;
    net.require_explicit("simulation")
}

/// Counts distinct nodes per step without clearing between steps.
struct StepMarks {
    marks: Vec<u32>,
}

impl StepMarks {
    fn new(len: usize) -> Self {
        StepMarks {
            marks: vec![0; len],
        }
    }

    /// Marks `node` for `step`; true the first time in that step.
    #[inline]
    fn mark(&mut self, node: u64, step: u32) -> bool {
        let m = &mut self.marks[node as usize];
        if *m == step {
            false
        } else {
            *m = step;
            true
        }
    }

    #[inline]
    fn is_marked(&self, node: u64, step: u32) -> bool {
        self.marks[node as usize] == step
    }
}

fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}
