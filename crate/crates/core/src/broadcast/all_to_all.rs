//! Three-phase all-to-all broadcast.
//!
//! Each phase runs the restricted one-to-all schedule from every node at
//! once, covering two of the six sectors on every dimension, so a node only
//! ever sends on three units and receives on the other three. Phases are
//! separated by a global barrier. At each barrier a node re-originates the
//! whole bundle it holds, so after the third phase the bundles compose to
//! every origin in the network. Traffic that shares a directed link within
//! a step travels as one bundled transmission.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use super::{
    check_simulation_inputs, invariant, launch_sectors, HalfDuplexViolation, LinkUse, SectorPacket,
    StepLinks, StepMarks, StepStats, Transmission,
};
use crate::ej::Unit;
use crate::error::{Error, Result};
use crate::topology::{LinkLabel, Network, Sector};

/// Upper bound on `nodeCount · (nodeCount - 1)` origin/holder pairs.
pub const ALL_TO_ALL_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::One, Phase::Two, Phase::Three];

    pub fn number(self) -> u8 {
        self as u8
    }

    /// Phase 1 covers sectors 6 and 1, phase 2 sectors 2 and 3, phase 3
    /// sectors 4 and 5.
    pub fn sectors(self) -> [Sector; 2] {
        let s = |j| Sector::new(j).expect("sector number in range");
        match self {
            Phase::One => [s(6), s(1)],
            Phase::Two => [s(2), s(3)],
            Phase::Three => [s(4), s(5)],
        }
    }

    /// Units a node transmits on during this phase.
    pub fn send_units(self) -> [Unit; 3] {
        match self {
            Phase::One => [Unit::One, Unit::Rho, Unit::NegRhoSq],
            Phase::Two => [Unit::NegOne, Unit::RhoSq, Unit::Rho],
            Phase::Three => [Unit::NegRhoSq, Unit::NegRho, Unit::NegOne],
        }
    }

    /// Units a node listens on, seen from the receiver.
    pub fn receive_units(self) -> [Unit; 3] {
        self.send_units().map(Unit::negate)
    }
}

/// One packet arrival, reported to observers of
/// [`run_all_to_all_observed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delivery {
    pub step: u32,
    pub phase: Phase,
    /// The node that launched this packet's schedule at the phase start.
    pub originator: u64,
    pub from: u64,
    pub to: u64,
    pub label: LinkLabel,
}

/// Per-node counters for one phase.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseSummary {
    pub phase: Phase,
    pub first_step: u32,
    pub last_step: u32,
    /// Distinct originators whose packets reached each node.
    #[serde(skip)]
    pub originators_heard: Vec<u32>,
    /// Origins each node learned during this phase.
    #[serde(skip)]
    pub new_origins: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AllToAllTrace {
    pub node_count: u64,
    pub dims: u32,
    pub layer_diameter: u32,
    /// `active` here is the number of distinct nodes that sent or received;
    /// nodes routinely do both in one step.
    pub steps: Vec<StepStats>,
    pub phases: Vec<PhaseSummary>,
    /// Distinct foreign origins each node holds at the end.
    #[serde(skip)]
    pub held_origins: Vec<u32>,
    #[serde(skip)]
    pub links: Vec<StepLinks>,
}

impl AllToAllTrace {
    pub fn total_steps(&self) -> u32 {
        self.steps.len() as u32
    }

    /// True iff every node ends up holding every other node's message.
    pub fn is_complete(&self) -> bool {
        self.held_origins
            .iter()
            .all(|&h| u64::from(h) == self.node_count - 1)
    }

    pub fn verify_half_duplex(&self) -> Result<(), HalfDuplexViolation> {
        super::verify_half_duplex(&self.links)
    }
}

pub fn run_all_to_all(net: &Network) -> Result<AllToAllTrace> {
    run_all_to_all_observed(net, |_| {})
}

/// Runs the three phases, calling `observe` for every packet arrival.
pub fn run_all_to_all_observed(
    net: &Network,
    mut observe: impl FnMut(&Delivery),
) -> Result<AllToAllTrace> {
    check_simulation_inputs(net)?;
    let v = net.node_count();
    let pairs = u128::from(v) * u128::from(v - 1);
    if pairs > ALL_TO_ALL_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "all-to-all delivery tracking",
            required: pairs,
            budget: ALL_TO_ALL_BUDGET,
        });
    }
    let len = v as usize;
    let diameter = net.layer_diameter();
    let dims = net.dims() as u8;
    let phase_len = net.dims() * diameter;

    let mut held: Vec<FixedBitSet> = (0..len)
        .map(|i| {
            let mut set = FixedBitSet::with_capacity(len);
            set.insert(i);
            set
        })
        .collect();
    let mut sent = StepMarks::new(len);
    let mut received = StepMarks::new(len);
    let mut heard: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(len); len];
    let mut steps = Vec::new();
    let mut links = Vec::new();
    let mut phases = Vec::new();

    for phase in Phase::ALL {
        let bundles = held.clone();
        heard.iter_mut().for_each(FixedBitSet::clear);
        let before: Vec<u32> = held.iter().map(|h| h.count_ones(..) as u32).collect();
        let mut originators_heard = vec![0u32; len];
        let sectors = phase.sectors();
        let first_step = steps.len() as u32 + 1;

        // (originator, transmission)
        let mut outgoing: Vec<(u64, Transmission)> = Vec::new();
        let mut scratch = Vec::new();
        for node in 0..v {
            launch_sectors(&mut scratch, node, dims, &sectors, diameter);
            outgoing.extend(scratch.drain(..).map(|t| (node, t)));
        }

        for k in 1..=phase_len {
            let step = first_step + k - 1;
            let (mut sending, mut receiving) = (0u64, 0u64);
            let mut active = 0u64;
            let mut directed = HashSet::with_capacity(outgoing.len());
            let mut uses = Vec::new();
            let mut arrived: Vec<(u64, u64, SectorPacket)> = Vec::with_capacity(outgoing.len());

            for &(origin, t) in &outgoing {
                let to = net.neighbor_index(t.from, t.label);
                if sent.mark(t.from, step) {
                    sending += 1;
                    if !received.is_marked(t.from, step) {
                        active += 1;
                    }
                }
                if received.mark(to, step) {
                    receiving += 1;
                    if !sent.is_marked(to, step) {
                        active += 1;
                    }
                }
                if directed.insert((t.from, to)) {
                    uses.push(LinkUse {
                        from: t.from,
                        to,
                        label: t.label,
                    });
                }
                held[to as usize].union_with(&bundles[origin as usize]);
                observe(&Delivery {
                    step,
                    phase,
                    originator: origin,
                    from: t.from,
                    to,
                    label: t.label,
                });
                arrived.push((origin, to, t.packet));
            }

            for &(origin, to, _) in &arrived {
                if heard[to as usize].put(origin as usize) {
                    return Err(invariant(format!(
                        "node {to} heard originator {origin} twice in phase {}",
                        phase.number()
                    )));
                }
                originators_heard[to as usize] += 1;
            }

            steps.push(StepStats {
                step,
                round: None,
                free: v - active,
                sending,
                receiving,
                active,
            });
            uses.sort();
            links.push(StepLinks {
                step,
                phase: Some(phase),
                uses,
            });

            outgoing.clear();
            for (origin, node, packet) in arrived {
                for (unit, next) in packet.forwards() {
                    outgoing.push((
                        origin,
                        Transmission {
                            from: node,
                            label: LinkLabel::new(packet.dim, unit),
                            packet: next,
                        },
                    ));
                }
                if packet.dim > 1 {
                    launch_sectors(&mut scratch, node, packet.dim - 1, &sectors, diameter);
                    outgoing.extend(scratch.drain(..).map(|t| (origin, t)));
                }
            }
        }
        if !outgoing.is_empty() {
            return Err(invariant(format!(
                "phase {} still had traffic after {phase_len} steps",
                phase.number()
            )));
        }

        let new_origins = held
            .iter()
            .zip(&before)
            .map(|(h, &b)| h.count_ones(..) as u32 - b)
            .collect();
        phases.push(PhaseSummary {
            phase,
            first_step,
            last_step: first_step + phase_len - 1,
            originators_heard,
            new_origins,
        });
    }

    let held_origins = held.iter().map(|h| h.count_ones(..) as u32 - 1).collect();
    Ok(AllToAllTrace {
        node_count: v,
        dims: net.dims(),
        layer_diameter: diameter,
        steps,
        phases,
        held_origins,
        links,
    })
}
