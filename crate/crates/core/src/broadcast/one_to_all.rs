use num_rational::Ratio;
use serde::Serialize;

use super::{
    check_simulation_inputs, invariant, launch_dimension, launch_sectors, Algorithm,
    HalfDuplexViolation, LinkUse, StepLinks, StepMarks, StepStats, Transmission,
};
use crate::error::Result;
use crate::topology::{LinkLabel, Network, Sector};

/// Full record of a one-to-all run.
#[derive(Debug, Clone, Serialize)]
pub struct BroadcastTrace {
    pub algorithm: Algorithm,
    pub node_count: u64,
    pub dims: u32,
    pub layer_diameter: u32,
    pub source: u64,
    pub steps: Vec<StepStats>,
    /// Step at which each node first received the message; 0 for the source.
    #[serde(skip)]
    pub first_receive: Vec<u32>,
    #[serde(skip)]
    pub links: Vec<StepLinks>,
}

/// Exact mean of the first-receive step over all non-source nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeanReceiveStep {
    pub step_sum: u64,
    pub receivers: u64,
}

impl MeanReceiveStep {
    pub fn as_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.step_sum, self.receivers)
    }

    pub fn as_f64(&self) -> f64 {
        self.step_sum as f64 / self.receivers as f64
    }
}

impl BroadcastTrace {
    pub fn total_senders(&self) -> u64 {
        self.steps.iter().map(|s| s.sending).sum()
    }

    pub fn total_receivers(&self) -> u64 {
        self.steps.iter().map(|s| s.receiving).sum()
    }

    pub fn first_receive_step(&self, node: u64) -> Option<u32> {
        match self.first_receive.get(node as usize) {
            Some(0) | None => None,
            Some(&s) => Some(s),
        }
    }

    pub fn mean_receive_step(&self) -> MeanReceiveStep {
        MeanReceiveStep {
            step_sum: self.first_receive.iter().map(|&s| u64::from(s)).sum(),
            receivers: self.node_count - 1,
        }
    }

    /// Number of nodes whose first receive happened at each step, from the
    /// per-node record (index 0 is step 1).
    pub fn receive_histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.steps.len()];
        for &s in &self.first_receive {
            if s > 0 {
                hist[s as usize - 1] += 1;
            }
        }
        hist
    }

    /// Directed link uses per step.
    pub fn link_use_counts(&self) -> Vec<u64> {
        self.links.iter().map(|l| l.uses.len() as u64).collect()
    }

    pub fn verify_half_duplex(&self) -> Result<(), HalfDuplexViolation> {
        super::verify_half_duplex(&self.links)
    }
}

pub fn run_one_to_all(net: &Network, source: u64, algorithm: Algorithm) -> Result<BroadcastTrace> {
    match algorithm {
        Algorithm::Previous => run_previous_one_to_all(net, source),
        Algorithm::Improved => run_improved_one_to_all(net, source),
    }
}

/// Mutable state of a single-source run.
struct Run<'a> {
    net: &'a Network,
    source: u64,
    first_receive: Vec<u32>,
    sent: StepMarks,
    steps: Vec<StepStats>,
    links: Vec<StepLinks>,
}

impl<'a> Run<'a> {
    fn new(net: &'a Network, source: u64) -> Result<Self> {
        check_simulation_inputs(net)?;
        net.check_index(source)?;
        let len = net.node_count() as usize;
        Ok(Run {
            net,
            source,
            first_receive: vec![0; len],
            sent: StepMarks::new(len),
            steps: Vec::new(),
            links: Vec::new(),
        })
    }

    /// Delivers one step of transmissions and returns what arrived where.
    fn deliver(
        &mut self,
        step: u32,
        round: Option<u32>,
        outgoing: &[Transmission],
    ) -> Result<Vec<(u64, super::SectorPacket)>> {
        let mut sending = 0u64;
        let mut uses = Vec::with_capacity(outgoing.len());
        let mut arrived = Vec::with_capacity(outgoing.len());
        for t in outgoing {
            if self.sent.mark(t.from, step) {
                sending += 1;
            }
            let to = self.net.neighbor_index(t.from, t.label);
            if to == self.source || self.first_receive[to as usize] != 0 {
                return Err(invariant(format!(
                    "node {to} received a second copy at step {step} via {}",
                    t.label
                )));
            }
            self.first_receive[to as usize] = step;
            uses.push(LinkUse {
                from: t.from,
                to,
                label: t.label,
            });
            arrived.push((to, t.packet));
        }
        let receiving = arrived.len() as u64;
        if arrived.iter().any(|(to, _)| self.sent.is_marked(*to, step)) {
            return Err(invariant(format!(
                "a node both sent and received at step {step}"
            )));
        }
        let active = sending + receiving;
        self.steps.push(StepStats {
            step,
            round,
            free: self.net.node_count() - active,
            sending,
            receiving,
            active,
        });
        self.links.push(StepLinks {
            step,
            phase: None,
            uses,
        });
        Ok(arrived)
    }

    fn finish(self, algorithm: Algorithm) -> Result<BroadcastTrace> {
        let missing = self
            .first_receive
            .iter()
            .enumerate()
            .filter(|&(i, &s)| s == 0 && i as u64 != self.source)
            .count();
        if missing > 0 {
            return Err(invariant(format!(
                "{missing} nodes never received the message"
            )));
        }
        Ok(BroadcastTrace {
            algorithm,
            node_count: self.net.node_count(),
            dims: self.net.dims(),
            layer_diameter: self.net.layer_diameter(),
            source: self.source,
            steps: self.steps,
            first_receive: self.first_receive,
            links: self.links,
        })
    }
}

/// Round-by-round broadcast: in round `r` every node holding the message
/// broadcasts over the sector trees of dimension `n - r + 1`.
pub fn run_previous_one_to_all(net: &Network, source: u64) -> Result<BroadcastTrace> {
    let mut run = Run::new(net, source)?;
    let diameter = net.layer_diameter();
    let dims = net.dims();
    let mut holders = vec![source];

    for round in 1..=dims {
        let dim = (dims - round + 1) as u8;
        let mut outgoing = Vec::with_capacity(holders.len() * 6);
        for &h in &holders {
            launch_dimension(&mut outgoing, h, dim, &Sector::ALL, diameter);
        }

        for k in 1..=diameter {
            let step = (round - 1) * diameter + k;
            let arrived = run.deliver(step, Some(round), &outgoing)?;
            outgoing.clear();
            for &(node, packet) in &arrived {
                holders.push(node);
                for (unit, next) in packet.forwards() {
                    outgoing.push(Transmission {
                        from: node,
                        label: LinkLabel::new(packet.dim, unit),
                        packet: next,
                    });
                }
            }
        }
        if !outgoing.is_empty() {
            return Err(invariant(format!(
                "round {round} did not finish in {diameter} steps"
            )));
        }
    }
    run.finish(Algorithm::Previous)
}

/// Fully parallel broadcast: the source launches all six sectors on every
/// dimension, and each receiver on dimension `d > 1` also launches all six
/// sectors on every dimension below `d`.
pub fn run_improved_one_to_all(net: &Network, source: u64) -> Result<BroadcastTrace> {
    let mut run = Run::new(net, source)?;
    let diameter = net.layer_diameter();
    let last_step = net.dims() * diameter;

    let mut outgoing = Vec::new();
    launch_sectors(
        &mut outgoing,
        source,
        net.dims() as u8,
        &Sector::ALL,
        diameter,
    );
    let mut step = 1;
    while !outgoing.is_empty() {
        if step > last_step {
            return Err(invariant(format!(
                "traffic still in flight after step {last_step}"
            )));
        }
        let arrived = run.deliver(step, None, &outgoing)?;
        outgoing.clear();
        for &(node, packet) in &arrived {
            for (unit, next) in packet.forwards() {
                outgoing.push(Transmission {
                    from: node,
                    label: LinkLabel::new(packet.dim, unit),
                    packet: next,
                });
            }
            if packet.dim > 1 {
                launch_sectors(&mut outgoing, node, packet.dim - 1, &Sector::ALL, diameter);
            }
        }
        step += 1;
    }
    run.finish(Algorithm::Improved)
}
