//! Stabilizer tableau with destabilizer bookkeeping.
//!
//! Row `i` of the stabilizer half anticommutes with row `i` of the
//! destabilizer half and commutes with every other row of either half. That
//! pairing makes both measurement branches linear in the number of rows.

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::StabilizerGroup;
use crate::pauli::{LocalGate, Pauli, PauliString, Polarization, Sign};

/// Result of a Pauli measurement on a tableau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: Sign,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    destabilizers: Vec<PauliString>,
    stabilizers: Vec<PauliString>,
}

impl StabilizerTableau {
    /// Product state with generators `(-1)^{b_i} Z_i`, `b_i = 1` for `V`.
    pub fn new_product(basis: &[Polarization]) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::NoQubits);
        }
        let stabilizers = basis
            .iter()
            .enumerate()
            .map(|(q, pol)| {
                let z = PauliString::single(n, q, Pauli::Z);
                if pol.bit() {
                    z.negated()
                } else {
                    z
                }
            })
            .collect();
        let destabilizers = (0..n)
            .map(|q| PauliString::single(n, q, Pauli::X))
            .collect();
        Ok(Self {
            n,
            destabilizers,
            stabilizers,
        })
    }

    /// `|H>^{⊗n}`.
    pub fn all_horizontal(n: usize) -> Result<Self> {
        Self::new_product(&vec![Polarization::H; n])
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange {
                index: q,
                n: self.n,
            })
        }
    }

    pub fn apply_gate(&mut self, gate: &LocalGate) -> Result<()> {
        self.check_qubit(gate.target)?;
        for row in self
            .destabilizers
            .iter_mut()
            .chain(self.stabilizers.iter_mut())
        {
            row.conjugate_in_place(gate)?;
        }
        self.debug_validate();
        Ok(())
    }

    pub fn apply_gates(&mut self, gates: &[LocalGate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    /// Conjugates every row by a Pauli operator (its phase is irrelevant).
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.len() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: p.len(),
            });
        }
        for row in self
            .destabilizers
            .iter_mut()
            .chain(self.stabilizers.iter_mut())
        {
            if !row.commutes_unchecked(p) {
                row.negate();
            }
        }
        Ok(())
    }

    /// Controlled-NOT. Not part of the module's native gate set; used to
    /// build arbitrary stabilizer states in tests and benchmarks.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::InvalidParameter("CNOT control equals target".into()));
        }
        let image = |op: Pauli, on_control: bool| -> PauliString {
            // CNOT maps X_c → X_c X_t, Z_c → Z_c, X_t → X_t, Z_t → Z_c Z_t.
            let (x, z) = op.bits();
            let mut acc = PauliString::identity(2);
            let xs = if on_control { "XX" } else { "IX" };
            let zs = if on_control { "ZI" } else { "ZZ" };
            if x {
                acc.mul_assign_unchecked(&crate::pauli::pauli(xs));
            }
            if z {
                acc.mul_assign_unchecked(&crate::pauli::pauli(zs));
            }
            // Y = i·X·Z
            if x && z {
                acc.add_phase(1);
            }
            acc
        };
        for row in self
            .destabilizers
            .iter_mut()
            .chain(self.stabilizers.iter_mut())
        {
            let mut local = image(row.get(control), true);
            local.mul_assign_unchecked(&image(row.get(target), false));
            row.set(control, local.get(0));
            row.set(target, local.get(1));
            row.add_phase(local.phase_exponent());
        }
        self.debug_validate();
        Ok(())
    }

    /// Deterministic eigenvalue of `p`, or `None` if a measurement would be random.
    pub fn expectation(&self, p: &PauliString) -> Result<Option<Sign>> {
        self.check_observable(p)?;
        if self.stabilizers.iter().any(|s| !s.commutes_unchecked(p)) {
            return Ok(None);
        }
        Ok(Some(self.deterministic_sign(p)))
    }

    fn check_observable(&self, p: &PauliString) -> Result<()> {
        if p.len() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: p.len(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        Ok(())
    }

    fn deterministic_sign(&self, p: &PauliString) -> Sign {
        let mut acc = PauliString::identity(self.n);
        for (d, s) in self.destabilizers.iter().zip(&self.stabilizers) {
            if !d.commutes_unchecked(p) {
                acc.mul_assign_unchecked(s);
            }
        }
        debug_assert!(acc.same_operator(p), "{p} not in stabilizer group");
        // acc = ±P with P the operator part of p; compare phases.
        let rel = (acc.phase_exponent() + 4 - p.phase_exponent()) % 4;
        Sign::from_minus(rel == 2)
    }

    /// Measures a Hermitian Pauli observable. Random outcomes are fair coin
    /// flips drawn from `rng`.
    pub fn measure_pauli<R: Rng + ?Sized>(
        &mut self,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<Measurement> {
        self.measure_with(p, |_| Ok(Sign::from_minus(rng.random_bool(0.5))))
    }

    /// Measures `p` post-selecting on `outcome`. Fails if the outcome has
    /// probability zero.
    pub fn measure_pauli_forced(&mut self, p: &PauliString, outcome: Sign) -> Result<Measurement> {
        let m = self.measure_with(p, |_| Ok(outcome))?;
        if m.outcome != outcome {
            return Err(Error::ImpossibleOutcome {
                operator: p.to_string(),
                requested: outcome.value(),
            });
        }
        Ok(m)
    }

    fn measure_with(
        &mut self,
        p: &PauliString,
        pick: impl FnOnce(&PauliString) -> Result<Sign>,
    ) -> Result<Measurement> {
        self.check_observable(p)?;
        let Some(pivot) = self
            .stabilizers
            .iter()
            .position(|s| !s.commutes_unchecked(p))
        else {
            return Ok(Measurement {
                outcome: self.deterministic_sign(p),
                deterministic: true,
            });
        };
        let outcome = pick(p)?;
        let pivot_row = self.stabilizers[pivot].clone();
        for (r, row) in self.stabilizers.iter_mut().enumerate() {
            if r != pivot && !row.commutes_unchecked(p) {
                row.mul_assign_unchecked(&pivot_row);
            }
        }
        for (r, row) in self.destabilizers.iter_mut().enumerate() {
            if r != pivot && !row.commutes_unchecked(p) {
                row.mul_assign_unchecked(&pivot_row);
            }
        }
        self.destabilizers[pivot] = pivot_row;
        let mut new_row = p.clone();
        if outcome.is_minus() {
            new_row.negate();
        }
        self.stabilizers[pivot] = new_row;
        self.debug_validate();
        Ok(Measurement {
            outcome,
            deterministic: false,
        })
    }

    pub fn group(&self) -> StabilizerGroup {
        StabilizerGroup::reduce(self.n, self.stabilizers.clone())
            .expect("tableau stabilizers are independent")
    }

    /// Sign-sensitive equality of this state's stabilizer group with the
    /// group generated by `generators`.
    pub fn group_equal(&self, generators: &[PauliString]) -> Result<bool> {
        let other = StabilizerGroup::from_generators(self.n, generators)?;
        Ok(self.group() == other)
    }

    /// Checks every structural invariant; returns a description of the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.n;
        if self.stabilizers.len() != n || self.destabilizers.len() != n {
            return Err("row count differs from qubit count".into());
        }
        for (i, s) in self.stabilizers.iter().enumerate() {
            if !s.is_hermitian() {
                return Err(format!("stabilizer {i} has imaginary phase"));
            }
            for (j, t) in self.stabilizers.iter().enumerate().skip(i + 1) {
                if !s.commutes_unchecked(t) {
                    return Err(format!("stabilizers {i} and {j} anticommute"));
                }
            }
            for (j, d) in self.destabilizers.iter().enumerate() {
                if d.commutes_unchecked(s) == (i == j) {
                    return Err(format!(
                        "destabilizer {j} has wrong relation to stabilizer {i}"
                    ));
                }
            }
        }
        Ok(())
    }

    fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        if self.n <= 64 {
            if let Err(e) = self.validate() {
                panic!("tableau invariant violated: {e}");
            }
        }
    }
}
