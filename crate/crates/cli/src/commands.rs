use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use ejnet::analytics::{self, compare_senders, AnalyticStepRow, SenderComparison};
use ejnet::broadcast::{run_all_to_all, run_one_to_all, Algorithm, AllToAllTrace, BroadcastTrace};
use ejnet::report::{self, serialize_big, ExactRatio, TableRow, TraceReport};
use ejnet::residue::Modulus;
use ejnet::topology::Network;

use crate::output::{csv_bytes, emit, json_bytes, with_algorithm, CliError, CliResult};
use crate::{
    AllToAllArgs, Alpha, AnalyticArgs, BroadcastArgs, CompareArgs, Format, Member, OutputArgs,
    TopologyArgs,
};

const DEFAULT_FAMILY: [(i64, i64, u32); 5] =
    [(1, 2, 12), (2, 3, 6), (3, 4, 4), (4, 5, 3), (6, 7, 2)];

fn modulus(alpha: Alpha) -> CliResult<Modulus> {
    Ok(Modulus::new(alpha.a, alpha.b)?)
}

fn network(alpha: Alpha, dims: u32) -> CliResult<Network> {
    Ok(Network::new(modulus(alpha)?, dims)?)
}

fn name(m: &Modulus, dims: u32) -> String {
    format!("EJ_{{{m}}}^({dims})")
}

fn table_csv(rows: &[TableRow]) -> Vec<u8> {
    report::csv_string(rows).into_bytes()
}

/// Writes one output per algorithm. A single algorithm goes to `--out` as
/// given; several go to `<stem>-<algorithm>.<ext>`, or to stdout one after
/// another (CSV) or as one array (JSON).
fn emit_per_algorithm<T: Serialize>(
    out: &OutputArgs,
    items: &[(Algorithm, Vec<TableRow>, T)],
) -> CliResult {
    let render = |rows: &Vec<TableRow>, doc: &T| match out.format {
        Format::Csv => table_csv(rows),
        Format::Json => json_bytes(doc),
    };
    match (&out.out, items) {
        (path, [(_, rows, doc)]) => emit(path.as_deref(), &render(rows, doc)),
        (Some(path), _) => {
            for (algo, rows, doc) in items {
                let p = with_algorithm(path, *algo);
                emit(Some(&p), &render(rows, doc))?;
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        (None, _) => match out.format {
            Format::Csv => {
                let mut all = Vec::new();
                for (i, (_, rows, _)) in items.iter().enumerate() {
                    if i > 0 {
                        all.push(b'\n');
                    }
                    all.extend(table_csv(rows));
                }
                emit(None, &all)
            }
            Format::Json => {
                let docs: Vec<&T> = items.iter().map(|(_, _, d)| d).collect();
                emit(None, &json_bytes(&docs))
            }
        },
    }
}

#[derive(Serialize)]
struct TopologyReport {
    alpha: String,
    dims: u32,
    node_count: u64,
    layer_diameter: u32,
    diameter: u32,
    bfs_histogram: Vec<u64>,
    closed_form_histogram: Vec<u64>,
    histograms_equal: bool,
}

pub fn topology(args: &TopologyArgs) -> CliResult {
    let net = network(args.alpha, args.dims)?;
    let bfs = net.distance_histogram(0)?;
    let closed = net.closed_form_histogram();
    let report = TopologyReport {
        alpha: net.modulus().to_string(),
        dims: net.dims(),
        node_count: net.node_count(),
        layer_diameter: net.layer_diameter(),
        diameter: net.diameter(),
        histograms_equal: bfs == closed,
        bfs_histogram: bfs,
        closed_form_histogram: closed,
    };
    eprintln!(
        "{}: {} nodes, diameter {}, closed form {} BFS",
        name(net.modulus(), net.dims()),
        report.node_count,
        report.diameter,
        if report.histograms_equal {
            "matches"
        } else {
            "DIFFERS FROM"
        }
    );
    let bytes = match args.format {
        Format::Json => json_bytes(&report),
        Format::Csv => {
            let len = report
                .bfs_histogram
                .len()
                .max(report.closed_form_histogram.len());
            let at = |h: &[u64], s: usize| h.get(s).copied().unwrap_or(0).to_string();
            csv_bytes(
                &["distance", "bfs", "closed_form"],
                (0..len).map(|s| {
                    [
                        s.to_string(),
                        at(&report.bfs_histogram, s),
                        at(&report.closed_form_histogram, s),
                    ]
                }),
            )
        }
    };
    emit(args.out.as_deref(), &bytes)
}

fn summarize_trace(net: &Network, t: &BroadcastTrace) {
    let mean = t.mean_receive_step();
    eprintln!(
        "{} one-to-all on {} from node {}: {} steps, {} senders, {} receivers, mean receive step {}/{} = {:.6}",
        t.algorithm,
        name(net.modulus(), net.dims()),
        t.source,
        t.steps.len(),
        t.total_senders(),
        t.total_receivers(),
        mean.step_sum,
        mean.receivers,
        mean.as_f64()
    );
}

pub fn broadcast(args: &BroadcastArgs) -> CliResult {
    let net = network(args.alpha, args.dims)?;
    let coords = if args.show_coords {
        let c = net.coord(args.source)?;
        eprintln!("source node {} = {c}", args.source);
        Some(c.to_string())
    } else {
        None
    };
    let mut items = Vec::new();
    for algo in args.algorithm.algorithms() {
        let trace = run_one_to_all(&net, args.source, algo)?;
        trace.verify_half_duplex()?;
        summarize_trace(&net, &trace);
        let doc = TraceReport::new(&trace, (args.alpha.a, args.alpha.b), coords.clone());
        items.push((algo, report::trace_rows(&trace), doc));
    }
    emit_per_algorithm(&args.output, &items)
}

#[derive(Serialize)]
struct PhaseReport {
    phase: u8,
    first_step: u32,
    last_step: u32,
    originators_per_node: u32,
    new_origins_per_node: u32,
}

#[derive(Serialize)]
struct AllToAllReport {
    alpha: String,
    dims: u32,
    node_count: u64,
    total_steps: u32,
    messages_per_node: u32,
    complete: bool,
    half_duplex: bool,
    phases: Vec<PhaseReport>,
    steps: Vec<TableRow>,
}

/// The common value of a per-node counter; every node sees the same
/// numbers because the network is vertex-transitive.
fn uniform(values: &[u32], what: &str) -> CliResult<u32> {
    match values.split_first() {
        Some((&first, rest)) if rest.iter().all(|&v| v == first) => Ok(first),
        _ => Err(ejnet::Error::Invariant(format!("{what} differs between nodes")).into()),
    }
}

fn all_to_all_report(net: &Network, t: &AllToAllTrace) -> CliResult<AllToAllReport> {
    let phases = t
        .phases
        .iter()
        .map(|p| {
            Ok(PhaseReport {
                phase: p.phase.number(),
                first_step: p.first_step,
                last_step: p.last_step,
                originators_per_node: uniform(&p.originators_heard, "originators heard")?,
                new_origins_per_node: uniform(&p.new_origins, "new origins")?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(AllToAllReport {
        alpha: net.modulus().to_string(),
        dims: net.dims(),
        node_count: t.node_count,
        total_steps: t.total_steps(),
        messages_per_node: uniform(&t.held_origins, "held origins")?,
        complete: t.is_complete(),
        half_duplex: true,
        phases,
        steps: t
            .steps
            .iter()
            .map(|s| TableRow::from_stats(s, t.layer_diameter, false))
            .collect(),
    })
}

pub fn all_to_all(args: &AllToAllArgs) -> CliResult {
    let net = network(args.alpha, args.dims)?;
    let trace = run_all_to_all(&net)?;
    trace.verify_half_duplex()?;
    let report = all_to_all_report(&net, &trace)?;
    if !report.complete {
        return Err(
            ejnet::Error::Invariant("all-to-all left some origins undelivered".into()).into(),
        );
    }
    eprintln!(
        "all-to-all on {}: {} steps, {} messages per node, half-duplex ok",
        name(net.modulus(), net.dims()),
        report.total_steps,
        report.messages_per_node
    );
    let bytes = match args.output.format {
        Format::Csv => table_csv(&report.steps),
        Format::Json => json_bytes(&report),
    };
    emit(args.output.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct AnalyticReport {
    alpha: String,
    dims: u32,
    algorithm: Algorithm,
    #[serde(serialize_with = "serialize_big")]
    node_count: BigUint,
    steps: Vec<TableRow>,
    #[serde(serialize_with = "serialize_big")]
    total_senders: BigUint,
    #[serde(serialize_with = "serialize_big")]
    total_receivers: BigUint,
    mean_receive_step: ExactRatio,
}

#[derive(Serialize)]
struct Totals<'a> {
    alpha: String,
    dims: u32,
    totals: Vec<AlgorithmTotals<'a>>,
    comparison: SenderComparison,
}

#[derive(Serialize)]
struct AlgorithmTotals<'a> {
    algorithm: Algorithm,
    #[serde(serialize_with = "serialize_big")]
    total_senders: &'a BigUint,
    #[serde(serialize_with = "serialize_big")]
    total_receivers: &'a BigUint,
}

pub fn analytic(args: &AnalyticArgs) -> CliResult {
    let m = modulus(args.alpha)?;
    let n = args.dims;
    let node_count = BigUint::from(m.norm()).pow(n);
    let mut items = Vec::new();
    for algo in args.algorithm.algorithms() {
        let rows = analytics::analytic_rows(&m, n, algo)?;
        let doc = AnalyticReport {
            alpha: m.to_string(),
            dims: n,
            algorithm: algo,
            node_count: node_count.clone(),
            steps: report::analytic_table_rows(&rows, &node_count, m.diameter(), algo, n),
            total_senders: rows.iter().map(|r| &r.senders).sum(),
            total_receivers: rows.iter().map(|r| &r.receivers).sum(),
            mean_receive_step: (&analytics::mean_receive_step(&rows)).into(),
        };
        items.push((algo, doc.steps.clone(), doc));
    }
    let totals = Totals {
        alpha: m.to_string(),
        dims: n,
        totals: items
            .iter()
            .map(|(algo, _, d)| AlgorithmTotals {
                algorithm: *algo,
                total_senders: &d.total_senders,
                total_receivers: &d.total_receivers,
            })
            .collect(),
        comparison: compare_senders(&m, n)?,
    };
    eprint!("{}", String::from_utf8_lossy(&json_bytes(&totals)));
    emit_per_algorithm(&args.output, &items)
}

fn ratio_decimal(r: &BigRational) -> String {
    format!("{:.9}", r.to_f64().unwrap_or(f64::NAN))
}

fn table3(args: &CompareArgs) -> CliResult {
    let m = modulus(args.alpha)?;
    let cols = args
        .dims
        .0
        .clone()
        .map(|n| compare_senders(&m, n))
        .collect::<Result<Vec<_>, _>>()?;
    for c in &cols {
        eprintln!(
            "{}: previous {} improved {} difference {} ratio {}",
            name(&m, c.dims),
            c.previous,
            c.improved,
            c.difference,
            ratio_decimal(&c.ratio)
        );
    }
    let bytes = match args.output.format {
        Format::Json => json_bytes(&cols),
        Format::Csv => csv_bytes(
            &["dims", "previous", "improved", "difference", "ratio"],
            cols.iter().map(|c| {
                [
                    c.dims.to_string(),
                    c.previous.to_string(),
                    c.improved.to_string(),
                    c.difference.to_string(),
                    ratio_decimal(&c.ratio),
                ]
            }),
        ),
    };
    emit(args.output.out.as_deref(), &bytes)
}

/// Per-step (sending, receiving, active) of one member, simulated when the
/// network fits the explicit budget and computed analytically otherwise.
struct MemberRun {
    member: Member,
    simulated: bool,
    rows: Vec<[BigUint; 3]>,
    mean_receive_step: BigRational,
}

fn run_member(member: Member, algo: Algorithm) -> CliResult<MemberRun> {
    let m = modulus(member.alpha)?;
    let net = Network::new(m, member.dims)?;
    if net.is_explicit() {
        let t = run_one_to_all(&net, 0, algo)?;
        let mean = t.mean_receive_step();
        Ok(MemberRun {
            member,
            simulated: true,
            rows: t
                .steps
                .iter()
                .map(|s| [s.sending.into(), s.receiving.into(), s.active.into()])
                .collect(),
            mean_receive_step: BigRational::new(mean.step_sum.into(), mean.receivers.into()),
        })
    } else {
        let rows: Vec<AnalyticStepRow> = analytics::analytic_rows(&m, member.dims, algo)?;
        Ok(MemberRun {
            member,
            simulated: false,
            mean_receive_step: analytics::mean_receive_step(&rows),
            rows: rows
                .into_iter()
                .map(|r| {
                    let active = &r.senders + &r.receivers;
                    [r.senders, r.receivers, active]
                })
                .collect(),
        })
    }
}

#[derive(Serialize)]
struct MemberReport {
    alpha: String,
    dims: u32,
    steps: usize,
    method: &'static str,
    previous_mean_receive_step: ExactRatio,
    improved_mean_receive_step: ExactRatio,
}

#[derive(Serialize)]
struct AverageRow {
    step: usize,
    previous_sending: f64,
    previous_receiving: f64,
    previous_active: f64,
    improved_sending: f64,
    improved_receiving: f64,
    improved_active: f64,
}

#[derive(Serialize)]
struct CompareReport {
    members: Vec<MemberReport>,
    steps: Vec<AverageRow>,
}

fn average(runs: &[MemberRun], step: usize, col: usize) -> f64 {
    let sum: BigUint = runs.iter().map(|r| &r.rows[step][col]).sum();
    let avg = BigRational::new(sum.into(), BigUint::from(runs.len()).into());
    avg.to_f64().unwrap_or(f64::NAN)
}

pub fn compare(args: &CompareArgs) -> CliResult {
    if args.table3 {
        return table3(args);
    }
    let family: Vec<Member> = if args.family.is_empty() {
        DEFAULT_FAMILY
            .iter()
            .map(|&(a, b, dims)| Member {
                alpha: Alpha { a, b },
                dims,
            })
            .collect()
    } else {
        args.family.clone()
    };

    let mut steps = None;
    for member in &family {
        let m = modulus(member.alpha)?;
        m.require_broadcast_shape()?;
        let n = member.dims * m.diameter();
        match steps {
            None => steps = Some(n),
            Some(s) if s != n => {
                let msg = format!(
                    "family members need equal step counts: {} takes {n}, the first member {s}",
                    name(&m, member.dims)
                );
                return Err(CliError::Config(msg));
            }
            Some(_) => {}
        }
    }
    let steps = steps.ok_or_else(|| CliError::Config("empty family".into()))? as usize;

    let mut previous = Vec::new();
    let mut improved = Vec::new();
    for &member in &family {
        previous.push(run_member(member, Algorithm::Previous)?);
        improved.push(run_member(member, Algorithm::Improved)?);
    }

    let members: Vec<MemberReport> = previous
        .iter()
        .zip(&improved)
        .map(|(p, i)| {
            let m = modulus(p.member.alpha).expect("validated above");
            MemberReport {
                alpha: m.to_string(),
                dims: p.member.dims,
                steps: p.rows.len(),
                method: if p.simulated {
                    "simulation"
                } else {
                    "analytics"
                },
                previous_mean_receive_step: (&p.mean_receive_step).into(),
                improved_mean_receive_step: (&i.mean_receive_step).into(),
            }
        })
        .collect();
    for r in &members {
        eprintln!(
            "EJ_{{{}}}^({}): {} steps by {}, mean receive step previous {:.6} improved {:.6}",
            r.alpha,
            r.dims,
            r.steps,
            r.method,
            r.previous_mean_receive_step.value,
            r.improved_mean_receive_step.value
        );
    }

    let rows: Vec<AverageRow> = (0..steps)
        .map(|s| AverageRow {
            step: s + 1,
            previous_sending: average(&previous, s, 0),
            previous_receiving: average(&previous, s, 1),
            previous_active: average(&previous, s, 2),
            improved_sending: average(&improved, s, 0),
            improved_receiving: average(&improved, s, 1),
            improved_active: average(&improved, s, 2),
        })
        .collect();
    let bytes = match args.output.format {
        Format::Json => json_bytes(&CompareReport {
            members,
            steps: rows,
        }),
        Format::Csv => csv_bytes(
            &[
                "step",
                "previous_sending",
                "previous_receiving",
                "previous_active",
                "improved_sending",
                "improved_receiving",
                "improved_active",
            ],
            rows.iter().map(|r| {
                [
                    r.step.to_string(),
                    r.previous_sending.to_string(),
                    r.previous_receiving.to_string(),
                    r.previous_active.to_string(),
                    r.improved_sending.to_string(),
                    r.improved_receiving.to_string(),
                    r.improved_active.to_string(),
                ]
            }),
        ),
    };
    emit(args.output.out.as_deref(), &bytes)
}
