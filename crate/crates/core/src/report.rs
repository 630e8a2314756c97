//! Text renderings of schedules and run reports. Output is byte-stable for a
//! given input: fixed float precision, no timestamps.

use std::fmt::Write as _;

use crate::compiler::{CheckRole, Schedule};
use crate::execute::RunReport;
use crate::pauli::LocalGate;

pub const SCHEDULE_HEADER: &str = "# photonic-module-sim schedule v1";
pub const REPORT_HEADER: &str = "photonic-module-sim report v1";

fn gate_list(gates: &[LocalGate]) -> String {
    if gates.is_empty() {
        "-".to_string()
    } else {
        gates
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn index_list(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// One line per check, in the order the compiler emitted them:
/// `slot=<s> module=<m> op=<±pauli> photons=<i,j,...> pre=<gates|-> post=<gates|->`.
pub fn render_schedule(schedule: &Schedule) -> String {
    let mut out = String::new();
    let target = schedule.target();
    writeln!(out, "{SCHEDULE_HEADER}").unwrap();
    writeln!(
        out,
        "# target={} n={}",
        target.source(),
        target.num_qubits()
    )
    .unwrap();
    writeln!(
        out,
        "# checks={} slots={} modules={} max_weight={} device_max_weight={}",
        schedule.checks().len(),
        schedule.num_slots(),
        schedule.modules(),
        schedule.max_weight(),
        schedule.device_max_weight()
    )
    .unwrap();
    for f in schedule.fusions() {
        writeln!(
            out,
            "# fusion check={} left={} right={}",
            f.check,
            index_list(&f.left),
            index_list(&f.right)
        )
        .unwrap();
    }
    for sc in schedule.checks() {
        let c = &sc.check;
        writeln!(
            out,
            "slot={} module={} op={} photons={} pre={} post={}",
            sc.slot,
            sc.module,
            c.operator(),
            index_list(c.photons()),
            gate_list(c.pre_rotations()),
            gate_list(c.post_rotations())
        )
        .unwrap();
    }
    out
}

/// Short role tag used in reports.
pub fn role_tag(role: CheckRole) -> String {
    match role {
        CheckRole::Generator(i) => format!("generator:{i}"),
        CheckRole::GhzLeaf { block } => format!("ghz-leaf:{block}"),
        CheckRole::Fusion { block } => format!("fusion:{block}"),
    }
}

pub fn render_report(report: &RunReport) -> String {
    let mut out = String::new();
    writeln!(out, "{REPORT_HEADER}").unwrap();
    writeln!(out, "target={}", report.target).unwrap();
    writeln!(out, "n={}", report.n).unwrap();
    writeln!(out, "seed={}", report.seed).unwrap();
    writeln!(out, "engine={}", report.engine).unwrap();
    writeln!(out, "policy={}", report.policy).unwrap();
    writeln!(out, "dt_us={:.6e}", report.dt).unwrap();
    writeln!(out, "transit_us={:.6e}", report.transit_time).unwrap();
    writeln!(out, "coherence_us={:.6e}", report.coherence_time).unwrap();
    writeln!(out, "modules={}", report.modules).unwrap();
    writeln!(out, "slots={}", report.slots).unwrap();
    writeln!(out, "max_weight={}", report.max_weight).unwrap();
    writeln!(out, "fusions={}", report.fusions).unwrap();
    writeln!(out, "checks={}", report.records.len()).unwrap();
    for r in &report.records {
        let correction = r
            .correction
            .as_ref()
            .map_or("-".to_string(), |c| c.to_string());
        let prob = r.probability.map_or("-".to_string(), |p| format!("{p:.6}"));
        writeln!(
            out,
            "check index={} slot={} module={} role={} op={} atom={} raw={} eigenvalue={} deterministic={} correction={} elapsed_us={:.6e} probability={}",
            r.index, r.slot, r.module, role_tag(r.role), r.operator, r.atom, r.raw, r.eigenvalue, r.deterministic, correction, r.elapsed, prob
        )
        .unwrap();
    }
    for (m, t) in report.atom_time.iter().enumerate() {
        writeln!(out, "atom_time module={m} us={t:.6e}").unwrap();
    }
    if let Some(f) = &report.flushed_frame {
        writeln!(out, "frame_flushed={f}").unwrap();
    }
    if let Some(eq) = report.verdict.tableau_equal {
        writeln!(out, "tableau_group_equal={eq}").unwrap();
    }
    if let Some(f) = report.verdict.fidelity {
        writeln!(out, "dense_fidelity={f:.12}").unwrap();
    }
    if let Some(d) = &report.verdict.diff {
        for line in d.lines() {
            writeln!(out, "diff {line}").unwrap();
        }
    }
    writeln!(out, "verified={}", report.verified()).unwrap();
    out
}
