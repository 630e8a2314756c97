//! Exact state-vector simulation of a photon train plus the module's atom.
//!
//! Qubit `q` is bit `q` of the basis index. Photon `a` occupies qubit `a`;
//! when present, the atom is always the last qubit.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::StabilizerGroup;
use crate::pauli::{GateKind, LocalGate, PauliString, Polarization, Sign};

pub const DEFAULT_QUBIT_CAP: usize = 14;

/// Squared norms below this count as empty branches.
const ZERO_BRANCH: f64 = 1e-12;

type Matrix2 = [[Complex64; 2]; 2];
type Matrix4 = [[Complex64; 4]; 4];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gate_matrix(kind: GateKind) -> Matrix2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match kind {
        GateKind::H => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        GateKind::S => [[o, z], [z, i]],
        GateKind::SDag => [[o, z], [z, -i]],
        GateKind::X => [[z, o], [o, z]],
        GateKind::Y => [[z, -i], [i, z]],
        GateKind::Z => [[o, z], [z, -o]],
    }
}

/// The module's photon/atom interaction on basis `|photon, atom>`
/// (index = photon + 2·atom): identity on `|+>`, atom bit flip on `|->`,
/// i.e. `|+><+| ⊗ I + |-><-| ⊗ X`.
pub fn module_pass_matrix() -> Matrix4 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [c(h, 0.0), c(h, 0.0)];
    let minus = [c(h, 0.0), c(-h, 0.0)];
    let id = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let x = gate_matrix(GateKind::X);
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for (proj_vec, atom_op) in [(plus, id), (minus, x)] {
        for row in 0..4 {
            for col in 0..4 {
                let (pr, ar) = (row & 1, row >> 1);
                let (pc, ac) = (col & 1, col >> 1);
                m[row][col] += proj_vec[pr] * proj_vec[pc].conj() * atom_op[ar][ac];
            }
        }
    }
    m
}

/// Outcome of projecting onto a Pauli eigenspace.
#[derive(Debug, Clone)]
pub struct Projection {
    pub probability: f64,
    /// Normalized post-projection state; `None` when the branch is empty.
    pub state: Option<StateVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational-basis product state, optionally with the atom appended.
    pub fn from_train(polarizations: &[Polarization], atom: Option<u8>) -> Result<Self> {
        Self::from_train_capped(polarizations, atom, DEFAULT_QUBIT_CAP)
    }

    pub fn from_train_capped(
        polarizations: &[Polarization],
        atom: Option<u8>,
        cap: usize,
    ) -> Result<Self> {
        if polarizations.is_empty() {
            return Err(Error::NoQubits);
        }
        let n = polarizations.len() + usize::from(atom.is_some());
        if n > cap {
            return Err(Error::CapExceeded { qubits: n, cap });
        }
        let mut index = 0usize;
        for (q, pol) in polarizations.iter().enumerate() {
            index |= usize::from(pol.bit()) << q;
        }
        if let Some(a) = atom {
            if a > 1 {
                return Err(Error::InvalidParameter(format!(
                    "atom level {a} is not 0 or 1"
                )));
            }
            index |= usize::from(a) << (n - 1);
        }
        Self::basis(n, index)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQubits);
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[index] = c(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps amplitudes, normalizing them.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "{len} amplitudes is not a power of two >= 2"
            )));
        }
        let mut sv = Self {
            n: len.trailing_zeros() as usize,
            amps,
        };
        let norm = sv.norm();
        if norm < ZERO_BRANCH {
            return Err(Error::DegenerateBranch(norm));
        }
        sv.scale(1.0 / norm);
        Ok(sv)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, factor: f64) {
        for a in &mut self.amps {
            *a *= factor;
        }
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

    pub fn apply_matrix(&mut self, q: usize, m: &Matrix2) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Applies a 4×4 matrix on `(low, high)`, where basis index `l + 2h`
    /// addresses the bits of qubits `low` and `high`.
    pub fn apply_two_qubit(&mut self, low: usize, high: usize, m: &Matrix4) -> Result<()> {
        self.check_qubit(low)?;
        self.check_qubit(high)?;
        if low == high {
            return Err(Error::InvalidParameter(
                "two-qubit gate on a single qubit".into(),
            ));
        }
        let (bl, bh) = (1 << low, 1 << high);
        for i in 0..self.amps.len() {
            if i & (bl | bh) == 0 {
                let idx = [i, i | bl, i | bh, i | bl | bh];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|col| m[r][col] * v[col]).sum();
                }
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &LocalGate) -> Result<()> {
        self.apply_matrix(gate.target, &gate_matrix(gate.kind))
    }

    pub fn apply_gates(&mut self, gates: &[LocalGate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        let mask = (1 << a) | (1 << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    fn atom_qubit(&self) -> usize {
        self.n - 1
    }

    /// Passes photon `photon` through the module, entangling it with the atom.
    pub fn module_pass(&mut self, photon: usize) -> Result<()> {
        let atom = self.atom_qubit();
        if photon >= atom {
            return Err(Error::QubitOutOfRange {
                index: photon,
                n: atom,
            });
        }
        self.apply_two_qubit(photon, atom, &module_pass_matrix())
    }

    pub fn outcome_probability(&self, q: usize, outcome: u8) -> f64 {
        let bit = 1 << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & bit != 0) == (outcome == 1))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `|outcome>` and renormalizes; returns the
    /// pre-measurement probability of that outcome.
    pub fn project_qubit(&mut self, q: usize, outcome: u8) -> Result<f64> {
        self.check_qubit(q)?;
        let p = self.outcome_probability(q, outcome);
        if p < ZERO_BRANCH {
            return Err(Error::DegenerateBranch(p));
        }
        let bit = 1 << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) != (outcome == 1) {
                *a = c(0.0, 0.0);
            }
        }
        self.scale(1.0 / p.sqrt());
        Ok(p)
    }

    /// Born-rule measurement of qubit `q` in the computational basis.
    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<(u8, f64)> {
        self.check_qubit(q)?;
        let p1 = self.outcome_probability(q, 1);
        let outcome = u8::from(rng.random::<f64>() < p1);
        let p = self.project_qubit(q, outcome)?;
        Ok((outcome, p))
    }

    /// `P|ψ>` for a Pauli acting on the first `p.len()` qubits.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.len() > self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: p.len(),
            });
        }
        let (mut xmask, mut zmask, mut ys) = (0usize, 0usize, 0u32);
        for q in 0..p.len() {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            xmask |= usize::from(x) << q;
            zmask |= usize::from(z) << q;
            ys += u32::from(x && z);
        }
        // Y|b> = i(-1)^b |b⊕1>, so P|i> = i^{k + #Y} (-1)^{|i ∧ z|} |i ⊕ x>
        let global = c(0.0, 1.0).powu(u32::from(p.phase_exponent()) + ys);
        let mut out = vec![c(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let sign = if (i & zmask).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[i ^ xmask] = global * a * sign;
        }
        self.amps = out;
        Ok(())
    }

    /// `<ψ|P|ψ>`; real for Hermitian `P`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        let mut image = self.clone();
        image.apply_pauli(p)?;
        Ok(inner(&self.amps, &image.amps).re)
    }

    /// Applies `(I + sign·P)/2` and renormalizes.
    pub fn project_pauli(&self, p: &PauliString, sign: Sign) -> Result<Projection> {
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        let mut image = self.clone();
        image.apply_pauli(p)?;
        let s = f64::from(sign.value());
        let amps: Vec<Complex64> = self
            .amps
            .iter()
            .zip(&image.amps)
            .map(|(a, b)| (a + b * s) * 0.5)
            .collect();
        let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if probability < ZERO_BRANCH {
            return Ok(Projection {
                probability,
                state: None,
            });
        }
        let mut state = Self { n: self.n, amps };
        state.scale(1.0 / probability.sqrt());
        Ok(Projection {
            probability,
            state: Some(state),
        })
    }

    /// Drops the last qubit, which must be in a computational basis state.
    pub fn drop_last_qubit(&self) -> Result<StateVector> {
        if self.n < 2 {
            return Err(Error::NoQubits);
        }
        let q = self.n - 1;
        let level = if self.outcome_probability(q, 1) > 1.0 - 1e-10 {
            1
        } else if self.outcome_probability(q, 0) > 1.0 - 1e-10 {
            0
        } else {
            return Err(Error::InvalidParameter(
                "last qubit is entangled or in superposition".into(),
            ));
        };
        let half = 1 << q;
        let offset = level * half;
        Ok(Self {
            n: q,
            amps: self.amps[offset..offset + half].to_vec(),
        })
    }

    /// A state stabilized by `generators`, built by projecting the first
    /// computational basis state with non-negligible overlap.
    pub fn from_stabilizers(generators: &[PauliString]) -> Result<Self> {
        let n = generators.first().map(|g| g.len()).ok_or(Error::NoQubits)?;
        if n > DEFAULT_QUBIT_CAP {
            return Err(Error::CapExceeded {
                qubits: n,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        let group = StabilizerGroup::from_generators(n, generators)?;
        if group.rank() != n {
            return Err(Error::GeneratorCount {
                expected: n,
                found: group.rank(),
            });
        }
        for index in 0..1usize << n {
            let mut sv = Self::basis(n, index)?;
            let mut total = 1.0;
            for g in generators {
                let proj = sv.project_pauli(g, Sign::Plus)?;
                total *= proj.probability;
                match proj.state {
                    Some(s) if total > 1e-9 => sv = s,
                    _ => {
                        total = 0.0;
                        break;
                    }
                }
            }
            if total > 1e-9 {
                return Ok(sv);
            }
        }
        Err(Error::Verification(
            "no basis state overlaps the stabilizer state".into(),
        ))
    }

    /// Debug dump: one `index re im` line per amplitude.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            let _ = writeln!(out, "{i} {:.12} {:.12}", a.re, a.im);
        }
        out
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|<a|b>|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.amps.len() != b.amps.len() {
        return Err(Error::DimensionMismatch(a.amps.len(), b.amps.len()));
    }
    Ok(inner(&a.amps, &b.amps).norm_sqr().min(1.0))
}
