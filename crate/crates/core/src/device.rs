//! The photonic module: photon trains, the atom/cavity device, and parity
//! checks executed on either engine.
//!
//! A check on a Hermitian Pauli `P` is performed in three steps. Local
//! pre-rotations map `P` to `±X` on its support (`H` on `Z` sites, `S†` on
//! `Y` sites since `S† Y S = +X`, nothing on `X` sites). The routed photons
//! then pass through the module, whose atom starts in `|0>`; reading the atom
//! as `0` projects onto the `+1` eigenspace of `X^{⊗k}`, `1` onto `-1`.
//! Post-rotations undo the pre-rotations, and the rotation sign is folded
//! into the eigenvalue reported for `P` itself.

use rand::Rng;

use crate::dense::StateVector;
use crate::error::{Error, Result};
use crate::pauli::{GateKind, LocalGate, Pauli, PauliString, Sign};
use crate::tableau::{Measurement, StabilizerTableau};

/// Photon pulses separated by `dt` microseconds; photon `a` is centred at `a·dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonTrain {
    n: usize,
    dt: f64,
}

impl PhotonTrain {
    pub fn new(n: usize, dt: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQubits);
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pulse separation {dt} must be positive"
            )));
        }
        Ok(Self { n, dt })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn pulse_time(&self, photon: usize) -> f64 {
        photon as f64 * self.dt
    }

    /// A train may only be sent through a device whose transit time is
    /// strictly shorter than the pulse separation.
    pub fn check_binding(&self, device: &ModuleDevice) -> Result<()> {
        if self.dt > device.transit_time {
            Ok(())
        } else {
            Err(Error::PulseSeparation {
                dt: self.dt,
                transit: device.transit_time,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomState {
    Idle,
    Active,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleDevice {
    id: usize,
    transit_time: f64,
    coherence_time: f64,
    state: AtomState,
}

impl ModuleDevice {
    /// Times in microseconds.
    pub fn new(transit_time: f64, coherence_time: f64) -> Result<Self> {
        for (name, v) in [
            ("transit time", transit_time),
            ("coherence time", coherence_time),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} {v} must be positive"
                )));
            }
        }
        Ok(Self {
            id: 0,
            transit_time,
            coherence_time,
            state: AtomState::Idle,
        })
    }

    pub fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn transit_time(&self) -> f64 {
        self.transit_time
    }

    pub fn coherence_time(&self) -> f64 {
        self.coherence_time
    }

    pub fn state(&self) -> AtomState {
        self.state
    }

    /// Largest Parity-weight the atom stays coherent for:
    /// `round(coherence / transit)`.
    pub fn max_weight(&self) -> usize {
        (self.coherence_time / self.transit_time).round() as usize
    }

    /// Marks the atom as in use; fails if a check is already running.
    pub fn acquire(&mut self) -> Result<()> {
        if self.state == AtomState::Active {
            return Err(Error::DeviceBusy(self.id));
        }
        self.state = AtomState::Active;
        Ok(())
    }

    pub fn release(&mut self) {
        self.state = AtomState::Idle;
    }
}

/// A routed parity measurement of one Hermitian Pauli operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    operator: PauliString,
    pre: Vec<LocalGate>,
    post: Vec<LocalGate>,
    photons: Vec<usize>,
    module: usize,
    x_form_sign: Sign,
    correction: PauliString,
}

impl ParityCheck {
    /// Builds the rotations and routing for `operator`. The correction
    /// defaults to the single-site Pauli on the lowest routed photon that
    /// anticommutes with `operator` (a `Z` flip in the rotated frame).
    pub fn new(operator: PauliString) -> Result<Self> {
        if !operator.is_hermitian() {
            return Err(Error::NotHermitian(operator.to_string()));
        }
        let photons = operator.support();
        if photons.is_empty() {
            return Err(Error::DegenerateGenerator(0));
        }
        let pre: Vec<LocalGate> = photons
            .iter()
            .filter_map(|&q| match operator.get(q) {
                Pauli::Z => Some(LocalGate::new(GateKind::H, q)),
                Pauli::Y => Some(LocalGate::new(GateKind::SDag, q)),
                _ => None,
            })
            .collect();
        let post: Vec<LocalGate> = pre.iter().rev().map(|g| g.inverse()).collect();

        let mut rotated = operator.clone();
        for g in &pre {
            rotated.conjugate_in_place(g)?;
        }
        debug_assert!(rotated.same_operator(&PauliString::on_support(
            operator.len(),
            &photons,
            Pauli::X
        )));
        let x_form_sign = rotated.sign().expect("rotations preserve hermiticity");

        let mut correction = PauliString::single(operator.len(), photons[0], Pauli::Z);
        for g in &post {
            correction.conjugate_in_place(g)?;
        }
        let correction = correction.with_sign(Sign::Plus);

        Ok(Self {
            operator,
            pre,
            post,
            photons,
            module: 0,
            x_form_sign,
            correction,
        })
    }

    /// Replaces the sign correction. It must anticommute with the operator.
    pub fn with_correction(mut self, correction: PauliString) -> Result<Self> {
        if self.operator.commutes(&correction)? {
            return Err(Error::InvalidParameter(format!(
                "correction {correction} commutes with {}",
                self.operator
            )));
        }
        self.correction = correction.with_sign(Sign::Plus);
        Ok(self)
    }

    pub fn with_module(mut self, module: usize) -> Self {
        self.module = module;
        self
    }

    pub fn operator(&self) -> &PauliString {
        &self.operator
    }

    pub fn pre_rotations(&self) -> &[LocalGate] {
        &self.pre
    }

    pub fn post_rotations(&self) -> &[LocalGate] {
        &self.post
    }

    /// Routed photons, in temporal order.
    pub fn photons(&self) -> &[usize] {
        &self.photons
    }

    pub fn module(&self) -> usize {
        self.module
    }

    pub fn weight(&self) -> usize {
        self.photons.len()
    }

    pub fn correction(&self) -> &PauliString {
        &self.correction
    }

    /// Sign `s` with `U P U† = s·X^{⊗k}` for the pre-rotation product `U`.
    pub fn x_form_sign(&self) -> Sign {
        self.x_form_sign
    }

    /// `X` on every routed photon: what the module physically measures.
    pub fn x_form(&self) -> PauliString {
        PauliString::on_support(self.operator.len(), &self.photons, Pauli::X)
    }

    fn eigenvalue_for_atom(&self, atom: u8) -> Sign {
        self.x_form_sign * Sign::from_minus(atom == 1)
    }
}

/// Record of one executed check.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityOutcome {
    pub check: ParityCheck,
    /// Atom readout: `0` for the `+1` eigenspace of `X^{⊗k}`.
    pub atom: u8,
    /// Eigenvalue of the check's own operator.
    pub eigenvalue: Sign,
    pub deterministic: bool,
    /// Pauli that maps the `-1` eigenspace onto `+1`; set iff `eigenvalue` is `-1`.
    pub correction: Option<PauliString>,
    /// Atom time spent, in microseconds.
    pub elapsed: f64,
}

impl ParityOutcome {
    fn new(check: &ParityCheck, atom: u8, deterministic: bool, elapsed: f64) -> Self {
        let eigenvalue = check.eigenvalue_for_atom(atom);
        Self {
            check: check.clone(),
            atom,
            eigenvalue,
            deterministic,
            correction: eigenvalue.is_minus().then(|| check.correction.clone()),
            elapsed,
        }
    }

    /// Same outcome with the eigenvalue flipped, correction updated.
    fn flipped(&self) -> Self {
        let eigenvalue = self.eigenvalue.flip();
        Self {
            eigenvalue,
            correction: eigenvalue.is_minus().then(|| self.check.correction.clone()),
            ..self.clone()
        }
    }
}

/// Atom time for one check: one transit slot per routed photon.
pub fn elapsed_for(check: &ParityCheck, train: &PhotonTrain, device: &ModuleDevice) -> f64 {
    check.weight() as f64 * train.dt.max(device.transit_time)
}

/// Atom time a check needs, failing if it exceeds the device's coherence.
/// Depends only on the check's weight, never on the train length.
pub fn transit_budget(
    check: &ParityCheck,
    train: &PhotonTrain,
    device: &ModuleDevice,
) -> Result<f64> {
    let elapsed = elapsed_for(check, train, device);
    if elapsed > device.coherence_time * (1.0 + 1e-12) {
        return Err(Error::Infeasible(format!(
            "check {} needs P_m·Δt = {} × {} us = {elapsed} us of atom time, coherence is {} us",
            check.operator,
            check.weight(),
            train.dt.max(device.transit_time),
            device.coherence_time
        )));
    }
    Ok(elapsed)
}

fn validate_run(
    n: usize,
    train: &PhotonTrain,
    device: &ModuleDevice,
    check: &ParityCheck,
) -> Result<()> {
    if check.operator.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: check.operator.len(),
        });
    }
    if train.n != n {
        return Err(Error::LengthMismatch {
            left: train.n,
            right: n,
        });
    }
    train.check_binding(device)?;
    if check.weight() > device.max_weight() {
        return Err(Error::CoherenceBudget {
            check: check.operator.to_string(),
            weight: check.weight(),
            max_weight: device.max_weight(),
        });
    }
    Ok(())
}

fn run_on_tableau(
    state: &mut StabilizerTableau,
    train: &PhotonTrain,
    device: &mut ModuleDevice,
    check: &ParityCheck,
    measure: impl FnOnce(&mut StabilizerTableau, &PauliString) -> Result<Measurement>,
) -> Result<ParityOutcome> {
    validate_run(state.num_qubits(), train, device, check)?;
    device.acquire()?;
    let result = (|| {
        state.apply_gates(&check.pre)?;
        let m = measure(state, &check.x_form())?;
        state.apply_gates(&check.post)?;
        Ok(ParityOutcome::new(
            check,
            u8::from(m.outcome.is_minus()),
            m.deterministic,
            elapsed_for(check, train, device),
        ))
    })();
    device.release();
    result
}

/// Executes `check` on the tableau engine with a random atom readout.
pub fn run_parity_check<R: Rng + ?Sized>(
    state: &mut StabilizerTableau,
    train: &PhotonTrain,
    device: &mut ModuleDevice,
    check: &ParityCheck,
    rng: &mut R,
) -> Result<ParityOutcome> {
    run_on_tableau(state, train, device, check, |t, x| t.measure_pauli(x, rng))
}

/// Executes `check` post-selecting the atom readout.
pub fn run_parity_check_forced(
    state: &mut StabilizerTableau,
    train: &PhotonTrain,
    device: &mut ModuleDevice,
    check: &ParityCheck,
    atom: u8,
) -> Result<ParityOutcome> {
    run_on_tableau(state, train, device, check, |t, x| {
        t.measure_pauli_forced(x, Sign::from_minus(atom == 1))
    })
}

/// How the dense engine picks the atom readout.
pub enum AtomReadout<'a, R: Rng + ?Sized> {
    Sample(&'a mut R),
    Forced(u8),
}

/// Executes `check` on a dense vector whose last qubit is the atom. The
/// atom is re-initialized to `|0>` first. Returns the outcome and the
/// probability of the observed atom readout.
pub fn run_parity_check_dense<R: Rng + ?Sized>(
    sv: &mut StateVector,
    train: &PhotonTrain,
    device: &mut ModuleDevice,
    check: &ParityCheck,
    readout: AtomReadout<'_, R>,
) -> Result<(ParityOutcome, f64)> {
    let photons = sv.num_qubits().checked_sub(1).ok_or(Error::NoQubits)?;
    validate_run(photons, train, device, check)?;
    device.acquire()?;
    let result = (|| {
        reset_atom(sv)?;
        sv.apply_gates(&check.pre)?;
        for &photon in &check.photons {
            sv.module_pass(photon)?;
        }
        let atom_qubit = photons;
        let (atom, probability) = match readout {
            AtomReadout::Sample(rng) => sv.measure_qubit(atom_qubit, rng)?,
            AtomReadout::Forced(level) => (level, sv.project_qubit(atom_qubit, level)?),
        };
        sv.apply_gates(&check.post)?;
        let deterministic = probability > 1.0 - 1e-10;
        Ok((
            ParityOutcome::new(
                check,
                atom,
                deterministic,
                elapsed_for(check, train, device),
            ),
            probability,
        ))
    })();
    device.release();
    result
}

fn reset_atom(sv: &mut StateVector) -> Result<()> {
    let atom = sv.num_qubits() - 1;
    let p1 = sv.outcome_probability(atom, 1);
    if p1 > 1.0 - 1e-10 {
        sv.apply_gate(&LocalGate::new(GateKind::X, atom))?;
    } else if p1 > 1e-10 {
        return Err(Error::InvalidParameter(
            "atom is entangled with the photons".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorrectionPolicy {
    /// Apply each correction as soon as the atom is read out.
    #[default]
    Eager,
    /// Record corrections in a Pauli frame merged at the end of the run.
    Frame,
}

impl std::fmt::Display for CorrectionPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CorrectionPolicy::Eager => "eager",
            CorrectionPolicy::Frame => "frame",
        })
    }
}

impl std::str::FromStr for CorrectionPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eager" => Ok(Self::Eager),
            "frame" => Ok(Self::Frame),
            _ => Err(Error::InvalidParameter(format!(
                "unknown correction policy {s:?}"
            ))),
        }
    }
}

/// Pending Pauli corrections not yet applied to the photons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliFrame {
    pending: PauliString,
}

impl PauliFrame {
    pub fn new(n: usize) -> Self {
        Self {
            pending: PauliString::identity(n),
        }
    }

    pub fn pending(&self) -> &PauliString {
        &self.pending
    }

    pub fn is_trivial(&self) -> bool {
        self.pending.is_identity()
    }

    pub fn record(&mut self, correction: &PauliString) -> Result<()> {
        self.pending = self.pending.multiply(correction)?.with_sign(Sign::Plus);
        Ok(())
    }

    /// Reinterprets a raw outcome as if all pending corrections had been
    /// applied: the eigenvalue flips when the frame anticommutes with the check.
    pub fn interpret(&self, raw: &ParityOutcome) -> Result<ParityOutcome> {
        if self.pending.commutes(raw.check.operator())? {
            Ok(raw.clone())
        } else {
            Ok(raw.flipped())
        }
    }

    /// Applies and clears the frame.
    pub fn flush<S: PauliTarget + ?Sized>(&mut self, state: &mut S) -> Result<()> {
        if !self.is_trivial() {
            state.apply_pauli_correction(&self.pending)?;
        }
        self.pending = PauliString::identity(self.pending.len());
        Ok(())
    }
}

/// A state that Pauli corrections can be applied to.
pub trait PauliTarget {
    fn apply_pauli_correction(&mut self, p: &PauliString) -> Result<()>;
}

impl PauliTarget for StabilizerTableau {
    fn apply_pauli_correction(&mut self, p: &PauliString) -> Result<()> {
        self.apply_pauli(p)
    }
}

impl PauliTarget for StateVector {
    fn apply_pauli_correction(&mut self, p: &PauliString) -> Result<()> {
        self.apply_pauli(p)
    }
}

/// Applies (eager) or defers (frame) the correction carried by `outcome`.
/// A `+1` outcome is a no-op under either policy.
pub fn apply_correction<S: PauliTarget + ?Sized>(
    state: &mut S,
    outcome: &ParityOutcome,
    policy: CorrectionPolicy,
    frame: &mut PauliFrame,
) -> Result<()> {
    let Some(correction) = &outcome.correction else {
        return Ok(());
    };
    match policy {
        CorrectionPolicy::Eager => state.apply_pauli_correction(correction),
        CorrectionPolicy::Frame => frame.record(correction),
    }
}
