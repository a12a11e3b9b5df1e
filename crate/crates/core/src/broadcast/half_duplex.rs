use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{Phase, StepLinks};
use crate::ej::Unit;
use crate::topology::LinkLabel;

/// First way a link schedule breaks the half-duplex model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HalfDuplexViolation {
    #[error("step {step}: link {a} <-> {b} carries traffic in both directions")]
    BothDirections { step: u32, a: u64, b: u64 },

    #[error("step {step}: node {node} sends on {label}, which is not a phase {phase} send port")]
    SendPort {
        step: u32,
        node: u64,
        label: LinkLabel,
        phase: u8,
    },

    #[error(
        "step {step}: node {node} receives on {label}, which is not a phase {phase} receive port"
    )]
    ReceivePort {
        step: u32,
        node: u64,
        label: LinkLabel,
        phase: u8,
    },

    #[error("step {step}: node {node} uses {count} {kind} ports on dimension {dim}")]
    TooManyPorts {
        step: u32,
        node: u64,
        dim: u8,
        kind: &'static str,
        count: usize,
    },
}

/// Checks a per-step link schedule. No undirected link may carry traffic
/// both ways in one step. Steps tagged with a phase must also keep every
/// node within that phase's three send ports and three receive ports per
/// dimension.
pub fn verify_half_duplex(steps: &[StepLinks]) -> Result<(), HalfDuplexViolation> {
    for s in steps {
        let mut directed = HashSet::with_capacity(s.uses.len());
        for u in &s.uses {
            directed.insert((u.from, u.to));
        }
        for u in &s.uses {
            if directed.contains(&(u.to, u.from)) {
                return Err(HalfDuplexViolation::BothDirections {
                    step: s.step,
                    a: u.from.min(u.to),
                    b: u.from.max(u.to),
                });
            }
        }

        let Some(phase) = s.phase else { continue };
        check_ports(s, phase)?;
    }
    Ok(())
}

fn check_ports(s: &StepLinks, phase: Phase) -> Result<(), HalfDuplexViolation> {
    let send = phase.send_units();
    let recv = phase.receive_units();
    let mut send_ports: HashMap<(u64, u8), HashSet<Unit>> = HashMap::new();
    let mut recv_ports: HashMap<(u64, u8), HashSet<Unit>> = HashMap::new();
    for u in &s.uses {
        if !send.contains(&u.label.unit) {
            return Err(HalfDuplexViolation::SendPort {
                step: s.step,
                node: u.from,
                label: u.label,
                phase: phase.number(),
            });
        }
        let port = u.label.negate();
        if !recv.contains(&port.unit) {
            return Err(HalfDuplexViolation::ReceivePort {
                step: s.step,
                node: u.to,
                label: port,
                phase: phase.number(),
            });
        }
        send_ports
            .entry((u.from, u.label.dim))
            .or_default()
            .insert(u.label.unit);
        recv_ports
            .entry((u.to, u.label.dim))
            .or_default()
            .insert(port.unit);
    }
    for (kind, ports) in [("send", &send_ports), ("receive", &recv_ports)] {
        if let Some((&(node, dim), units)) = ports.iter().find(|(_, units)| units.len() > 3) {
            return Err(HalfDuplexViolation::TooManyPorts {
                step: s.step,
                node,
                dim,
                kind,
                count: units.len(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::broadcast::LinkUse;

    fn link(from: u64, to: u64, unit: Unit) -> LinkUse {
        LinkUse {
            from,
            to,
            label: LinkLabel::new(1, unit),
        }
    }

    #[test]
    fn opposite_directions_in_one_step() {
        let steps = vec![StepLinks {
            step: 1,
            phase: None,
            uses: vec![link(0, 1, Unit::One), link(1, 0, Unit::NegOne)],
        }];
        assert_eq!(
            verify_half_duplex(&steps),
            Err(HalfDuplexViolation::BothDirections {
                step: 1,
                a: 0,
                b: 1
            })
        );
    }

    #[test]
    fn opposite_directions_in_different_steps() {
        let steps = vec![
            StepLinks {
                step: 1,
                phase: None,
                uses: vec![link(0, 1, Unit::One)],
            },
            StepLinks {
                step: 2,
                phase: None,
                uses: vec![link(1, 0, Unit::NegOne)],
            },
        ];
        assert!(verify_half_duplex(&steps).is_ok());
    }

    #[test]
    fn wrong_port_for_phase() {
        let steps = vec![StepLinks {
            step: 4,
            phase: Some(Phase::One),
            uses: vec![link(0, 1, Unit::NegOne)],
        }];
        assert!(matches!(
            verify_half_duplex(&steps),
            Err(HalfDuplexViolation::SendPort { step: 4, .. })
        ));
    }

    #[test]
    fn phase_port_sets() {
        assert_eq!(
            Phase::One.receive_units(),
            [Unit::NegOne, Unit::NegRho, Unit::RhoSq]
        );
        assert_eq!(
            Phase::Two.receive_units(),
            [Unit::One, Unit::NegRhoSq, Unit::NegRho]
        );
        assert_eq!(
            Phase::Three.receive_units(),
            [Unit::RhoSq, Unit::Rho, Unit::One]
        );
        for p in Phase::ALL {
            let mut units: Vec<Unit> = p
                .sectors()
                .iter()
                .flat_map(|s| [s.major(), s.minor()])
                .collect();
            units.sort();
            units.dedup();
            let mut send = p.send_units().to_vec();
            send.sort();
            assert_eq!(units, send);
        }
    }
}
