//! Machine-readable output: per-step tables as CSV and run summaries as
//! JSON.
//!
//! Tables use the columns `step,free,sending,receiving,active`. Schedules
//! that run in rounds prepend a `round` column, and `step` then counts from
//! 1 within each round.

use std::io::Write;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::analytics::AnalyticStepRow;
use crate::broadcast::{Algorithm, BroadcastTrace, StepStats};

/// Serializes as a JSON number when it fits in `u64`, otherwise as a
/// decimal string.
pub fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(small) => s.serialize_u64(small),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn serialize_ratio<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    ExactRatio::from(v).serialize(s)
}

/// An exact fraction together with its decimal value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactRatio {
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
}

impl From<&BigRational> for ExactRatio {
    fn from(r: &BigRational) -> Self {
        ExactRatio {
            numerator: r.numer().to_string(),
            denominator: r.denom().to_string(),
            value: r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<Ratio<u64>> for ExactRatio {
    fn from(r: Ratio<u64>) -> Self {
        ExactRatio {
            numerator: r.numer().to_string(),
            denominator: r.denom().to_string(),
            value: *r.numer() as f64 / *r.denom() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round: Option<u32>,
    pub step: u32,
    #[serde(serialize_with = "serialize_big")]
    pub free: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub sending: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub receiving: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub active: BigUint,
}

/// Whether a table for `algorithm` on `dims` dimensions carries a round
/// column. A single-round schedule has nothing to report there.
pub fn has_round_column(algorithm: Algorithm, dims: u32) -> bool {
    algorithm == Algorithm::Previous && dims >= 2
}

fn step_in_round(step: u32, round: Option<u32>, layer_diameter: u32) -> u32 {
    match round {
        Some(r) => step - (r - 1) * layer_diameter,
        None => step,
    }
}

impl TableRow {
    pub fn from_stats(s: &StepStats, layer_diameter: u32, with_round: bool) -> Self {
        let round = if with_round { s.round } else { None };
        TableRow {
            round,
            step: step_in_round(s.step, round, layer_diameter),
            free: s.free.into(),
            sending: s.sending.into(),
            receiving: s.receiving.into(),
            active: s.active.into(),
        }
    }

    pub fn from_analytic(
        r: &AnalyticStepRow,
        node_count: &BigUint,
        layer_diameter: u32,
        with_round: bool,
    ) -> Self {
        let round = if with_round { r.round } else { None };
        let active = &r.senders + &r.receivers;
        TableRow {
            round,
            step: step_in_round(r.step, round, layer_diameter),
            free: node_count - &active,
            sending: r.senders.clone(),
            receiving: r.receivers.clone(),
            active,
        }
    }
}

pub fn trace_rows(trace: &BroadcastTrace) -> Vec<TableRow> {
    let with_round = has_round_column(trace.algorithm, trace.dims);
    trace
        .steps
        .iter()
        .map(|s| TableRow::from_stats(s, trace.layer_diameter, with_round))
        .collect()
}

pub fn analytic_table_rows(
    rows: &[AnalyticStepRow],
    node_count: &BigUint,
    layer_diameter: u32,
    algorithm: Algorithm,
    dims: u32,
) -> Vec<TableRow> {
    let with_round = has_round_column(algorithm, dims);
    rows.iter()
        .map(|r| TableRow::from_analytic(r, node_count, layer_diameter, with_round))
        .collect()
}

/// Writes `rows` as CSV. The round column is present iff the first row has
/// a round.
pub fn write_csv<W: Write>(rows: &[TableRow], out: W) -> csv::Result<()> {
    let with_round = rows.first().is_some_and(|r| r.round.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["step", "free", "sending", "receiving", "active"];
    if with_round {
        header.insert(0, "round");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.step.to_string(),
            r.free.to_string(),
            r.sending.to_string(),
            r.receiving.to_string(),
            r.active.to_string(),
        ];
        if with_round {
            rec.insert(0, r.round.unwrap_or_default().to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[TableRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing CSV to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// JSON summary of a one-to-all run.
#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub algorithm: Algorithm,
    pub alpha: (i64, i64),
    pub dims: u32,
    pub node_count: u64,
    pub source: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_coords: Option<String>,
    pub steps: Vec<TableRow>,
    pub total_senders: u64,
    pub total_receivers: u64,
    pub mean_receive_step: ExactRatio,
    /// Nodes first reached at each step, from the per-node record.
    pub first_receive_histogram: Vec<u64>,
    pub link_uses_per_step: Vec<u64>,
}

impl TraceReport {
    pub fn new(trace: &BroadcastTrace, alpha: (i64, i64), source_coords: Option<String>) -> Self {
        TraceReport {
            algorithm: trace.algorithm,
            alpha,
            dims: trace.dims,
            node_count: trace.node_count,
            source: trace.source,
            source_coords,
            steps: trace_rows(trace),
            total_senders: trace.total_senders(),
            total_receivers: trace.total_receivers(),
            mean_receive_step: trace.mean_receive_step().as_ratio().into(),
            first_receive_histogram: trace.receive_histogram(),
            link_uses_per_step: trace.link_use_counts(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::broadcast::run_previous_one_to_all;
    use crate::residue::Modulus;
    use crate::topology::Network;

    #[test]
    fn previous_table_has_round_column() {
        let net = Network::new(Modulus::new(2, 3).unwrap(), 2).unwrap();
        let t = run_previous_one_to_all(&net, 0).unwrap();
        let csv = csv_string(&trace_rows(&t));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "round,step,free,sending,receiving,active");
        assert_eq!(lines[3], "2,1,228,19,114,133");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn big_numbers_serialize_as_strings() {
        let big = BigUint::from(u64::MAX) * 3u32;
        let row = TableRow {
            round: None,
            step: 1,
            free: big.clone(),
            sending: 1u32.into(),
            receiving: 2u32.into(),
            active: 3u32.into(),
        };
        let v = serde_json::to_value(&row).unwrap();
        assert_eq!(v["free"], serde_json::Value::String(big.to_string()));
        assert_eq!(v["sending"], serde_json::json!(1));
        assert!(v.get("round").is_none());
    }
}
