//! Simulation and compilation of parity-check entanglement factories built
//! from photonic modules: a single atom in a cavity that measures the
//! multi-photon parity `X^{⊗k}` of the photons routed through it.
//!
//! Two engines share one check API: a stabilizer tableau for large states
//! and a dense state vector (photons plus the atom) for small ones.

pub mod compiler;
pub mod dense;
pub mod device;
pub mod error;
pub mod execute;
pub mod graph;
pub mod group;
pub mod pauli;
pub mod physics;
pub mod report;
pub mod tableau;
pub mod target;

pub use compiler::{
    assign_modules, compile, correction_for, dual_basis, fuse_ghz, CheckRole, DeviceLimits, Fusion,
    FusionStep, GhzBlock, Schedule, ScheduledCheck,
};
pub use dense::{fidelity, StateVector, DEFAULT_QUBIT_CAP};
pub use device::{
    apply_correction, elapsed_for, run_parity_check, run_parity_check_dense,
    run_parity_check_forced, transit_budget, AtomReadout, AtomState, CorrectionPolicy,
    ModuleDevice, ParityCheck, ParityOutcome, PauliFrame, PauliTarget, PhotonTrain,
};
pub use error::{Error, ErrorClass, Result};
pub use execute::{
    execute, CheckRecord, Engine, Execution, RunConfig, RunReport, Verdict, FIDELITY_THRESHOLD,
};
pub use graph::{graph_state_generators, Graph};
pub use group::{describe_difference, groups_equal, StabilizerGroup};
pub use pauli::{pauli, GateKind, LocalGate, Pauli, PauliString, Polarization, Sign};
pub use physics::{feasibility_report, CavityParams, FeasibilityReport};
pub use report::{render_report, render_schedule};
pub use tableau::{Measurement, StabilizerTableau};
pub use target::{ghz_generators, parse_target, TargetSource, TargetState};

/// Seeded randomness. Every random choice in a run flows from one seed.
pub mod rng {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub type SimRng = ChaCha8Rng;

    pub fn seeded(seed: u64) -> SimRng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// A seed from OS entropy, for runs where the caller gave none.
    pub fn fresh_seed() -> u64 {
        rand::rng().random()
    }
}
