//! Runs a compiled schedule on the tableau engine, the dense engine, or both
//! in lock-step, then checks the result against the target.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::compiler::{CheckRole, Schedule};
use crate::dense::{fidelity, StateVector, DEFAULT_QUBIT_CAP};
use crate::device::{
    run_parity_check, run_parity_check_dense, AtomReadout, CorrectionPolicy, ModuleDevice,
    ParityOutcome, PauliFrame, PauliTarget, PhotonTrain,
};
use crate::error::{Error, Result};
use crate::group::describe_difference;
use crate::pauli::{PauliString, Polarization, Sign};
use crate::tableau::StabilizerTableau;

/// Dense verification threshold on `|<target|state>|²`.
pub const FIDELITY_THRESHOLD: f64 = 1.0 - 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Tableau,
    Dense,
    /// Tableau samples each readout; the dense engine follows it.
    Both,
}

impl Engine {
    fn tableau(self) -> bool {
        matches!(self, Engine::Tableau | Engine::Both)
    }

    fn dense(self) -> bool {
        matches!(self, Engine::Dense | Engine::Both)
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Tableau => "tableau",
            Engine::Dense => "dense",
            Engine::Both => "both",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tableau" => Ok(Engine::Tableau),
            "dense" => Ok(Engine::Dense),
            "both" => Ok(Engine::Both),
            _ => Err(Error::InvalidParameter(format!("unknown engine {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub engine: Engine,
    pub policy: CorrectionPolicy,
    /// Template for every module; each module gets its own copy.
    pub device: ModuleDevice,
    /// Pulse separation of the photon train, µs.
    pub dt: f64,
    pub seed: u64,
    /// Largest dense register, atom included.
    pub dense_cap: usize,
}

impl RunConfig {
    pub fn new(device: ModuleDevice, dt: f64, seed: u64) -> Self {
        Self {
            engine: Engine::default(),
            policy: CorrectionPolicy::default(),
            device,
            dt,
            seed,
            dense_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    /// Index into `Schedule::checks`.
    pub index: usize,
    pub slot: usize,
    pub module: usize,
    pub role: CheckRole,
    pub operator: PauliString,
    pub atom: u8,
    /// Eigenvalue as read from the atom.
    pub raw: Sign,
    /// Eigenvalue relative to the corrected state.
    pub eigenvalue: Sign,
    pub deterministic: bool,
    /// Correction applied, or deferred to the frame.
    pub correction: Option<PauliString>,
    pub elapsed: f64,
    /// Dense probability of the observed readout.
    pub probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub tableau_equal: Option<bool>,
    pub fidelity: Option<f64>,
    /// Human-readable mismatch, when there is one.
    pub diff: Option<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.tableau_equal != Some(false) && self.fidelity.is_none_or(|f| f >= FIDELITY_THRESHOLD)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub target: String,
    pub n: usize,
    pub engine: Engine,
    pub policy: CorrectionPolicy,
    pub seed: u64,
    pub dt: f64,
    pub transit_time: f64,
    pub coherence_time: f64,
    pub modules: usize,
    pub slots: usize,
    pub max_weight: usize,
    pub fusions: usize,
    pub records: Vec<CheckRecord>,
    /// Atom time per module, µs.
    pub atom_time: Vec<f64>,
    /// Frame contents merged at the end (frame policy only).
    pub flushed_frame: Option<PauliString>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn verified(&self) -> bool {
        self.verdict.passed()
    }

    /// Readout of every check, in execution order.
    pub fn eigenvalues(&self) -> Vec<Sign> {
        self.records.iter().map(|r| r.eigenvalue).collect()
    }
}

/// Step-by-step execution of a schedule.
#[derive(Debug, Clone)]
pub struct Execution<'s> {
    schedule: &'s Schedule,
    config: RunConfig,
    order: Vec<usize>,
    cursor: usize,
    train: PhotonTrain,
    devices: Vec<ModuleDevice>,
    tableau: Option<StabilizerTableau>,
    dense: Option<StateVector>,
    frame: PauliFrame,
    records: Vec<CheckRecord>,
}

impl<'s> Execution<'s> {
    pub fn new(schedule: &'s Schedule, config: RunConfig) -> Result<Self> {
        let n = schedule.target().num_qubits();
        let train = PhotonTrain::new(n, config.dt)?;
        train.check_binding(&config.device)?;
        if let Some(sc) = schedule
            .checks()
            .iter()
            .find(|c| c.check.weight() > config.device.max_weight())
        {
            return Err(Error::CoherenceBudget {
                check: sc.check.operator().to_string(),
                weight: sc.check.weight(),
                max_weight: config.device.max_weight(),
            });
        }
        let start = vec![Polarization::H; n];
        let tableau = if config.engine.tableau() {
            Some(StabilizerTableau::new_product(&start)?)
        } else {
            None
        };
        let dense = if config.engine.dense() {
            Some(StateVector::from_train_capped(
                &start,
                Some(0),
                config.dense_cap,
            )?)
        } else {
            None
        };
        let devices = (0..schedule.modules())
            .map(|m| config.device.clone().with_id(m))
            .collect();
        Ok(Self {
            schedule,
            order: schedule.execution_order(),
            cursor: 0,
            train,
            devices,
            tableau,
            dense,
            frame: PauliFrame::new(n),
            records: Vec::new(),
            config,
        })
    }

    pub fn is_done(&self) -> bool {
        self.cursor == self.order.len()
    }

    pub fn records(&self) -> &[CheckRecord] {
        &self.records
    }

    pub fn tableau(&self) -> Option<&StabilizerTableau> {
        self.tableau.as_ref()
    }

    /// Dense register: photons, then the atom as the last qubit.
    pub fn dense(&self) -> Option<&StateVector> {
        self.dense.as_ref()
    }

    pub fn frame(&self) -> &PauliFrame {
        &self.frame
    }

    /// Runs the next check. Returns `None` once all checks have run.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<&CheckRecord>> {
        let Some(&index) = self.order.get(self.cursor) else {
            return Ok(None);
        };
        let sc = &self.schedule.checks()[index];
        let device = &mut self.devices[sc.module];
        let mut raw: Option<ParityOutcome> = None;
        if let Some(t) = self.tableau.as_mut() {
            raw = Some(run_parity_check(t, &self.train, device, &sc.check, rng)?);
        }
        let mut probability = None;
        if let Some(sv) = self.dense.as_mut() {
            let (outcome, p) = match &raw {
                Some(r) => run_parity_check_dense::<R>(
                    sv,
                    &self.train,
                    device,
                    &sc.check,
                    AtomReadout::Forced(r.atom),
                )?,
                None => run_parity_check_dense(
                    sv,
                    &self.train,
                    device,
                    &sc.check,
                    AtomReadout::Sample(rng),
                )?,
            };
            probability = Some(p);
            raw.get_or_insert(outcome);
        }
        let raw = raw.expect("at least one engine runs");
        let logical = match self.config.policy {
            CorrectionPolicy::Eager => raw.clone(),
            CorrectionPolicy::Frame => self.frame.interpret(&raw)?,
        };
        if let Some(c) = &logical.correction {
            match self.config.policy {
                CorrectionPolicy::Eager => {
                    if let Some(t) = self.tableau.as_mut() {
                        t.apply_pauli_correction(c)?;
                    }
                    if let Some(sv) = self.dense.as_mut() {
                        sv.apply_pauli_correction(c)?;
                    }
                }
                CorrectionPolicy::Frame => self.frame.record(c)?,
            }
        }
        self.records.push(CheckRecord {
            index,
            slot: sc.slot,
            module: sc.module,
            role: sc.role,
            operator: sc.check.operator().clone(),
            atom: raw.atom,
            raw: raw.eigenvalue,
            eigenvalue: logical.eigenvalue,
            deterministic: raw.deterministic,
            correction: logical.correction.clone(),
            elapsed: raw.elapsed,
            probability,
        });
        self.cursor += 1;
        Ok(self.records.last())
    }

    /// Runs all remaining checks, flushes the frame and verifies.
    pub fn finish<R: Rng + ?Sized>(
        mut self,
        rng: &mut R,
    ) -> Result<(RunReport, Option<StateVector>)> {
        while self.step(rng)?.is_some() {}
        let flushed_frame = match self.config.policy {
            CorrectionPolicy::Frame => Some(self.frame.pending().clone()),
            CorrectionPolicy::Eager => None,
        };
        if let Some(t) = self.tableau.as_mut() {
            self.frame.clone().flush(t)?;
        }
        if let Some(sv) = self.dense.as_mut() {
            self.frame.clone().flush(sv)?;
        }
        self.frame = PauliFrame::new(self.frame.pending().len());

        let target = self.schedule.target();
        let mut diff = None;
        let tableau_equal = match &self.tableau {
            Some(t) => {
                let equal = t.group_equal(target.generators())?;
                if !equal {
                    diff = Some(describe_difference(&target.group(), &t.group()));
                }
                Some(equal)
            }
            None => None,
        };
        let photons = match &self.dense {
            Some(sv) => Some(sv.drop_last_qubit()?),
            None => None,
        };
        let fid = match &photons {
            Some(p) => {
                let expected = StateVector::from_stabilizers(target.generators())?;
                let f = fidelity(&expected, p)?;
                if f < FIDELITY_THRESHOLD && diff.is_none() {
                    diff = Some(format!("dense fidelity {f:.12} below {FIDELITY_THRESHOLD}"));
                }
                Some(f)
            }
            None => None,
        };
        let mut atom_time = vec![0.0; self.schedule.modules()];
        for r in &self.records {
            atom_time[r.module] += r.elapsed;
        }
        let report = RunReport {
            target: target.source().to_string(),
            n: target.num_qubits(),
            engine: self.config.engine,
            policy: self.config.policy,
            seed: self.config.seed,
            dt: self.config.dt,
            transit_time: self.config.device.transit_time(),
            coherence_time: self.config.device.coherence_time(),
            modules: self.schedule.modules(),
            slots: self.schedule.num_slots(),
            max_weight: self.schedule.max_weight(),
            fusions: self.schedule.fusions().len(),
            records: self.records,
            atom_time,
            flushed_frame,
            verdict: Verdict {
                tableau_equal,
                fidelity: fid,
                diff,
            },
        };
        Ok((report, photons))
    }
}

/// Runs `schedule` to completion. Fails with `Error::Verification` when the
/// prepared state does not match the target.
pub fn execute<R: Rng + ?Sized>(
    schedule: &Schedule,
    config: RunConfig,
    rng: &mut R,
) -> Result<RunReport> {
    let (report, _) = Execution::new(schedule, config)?.finish(rng)?;
    if !report.verified() {
        return Err(Error::Verification(
            report.verdict.diff.clone().unwrap_or_default(),
        ));
    }
    Ok(report)
}
