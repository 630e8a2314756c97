//! Independent dense-matrix model used as a test oracle. Qubit `q` is bit `q`
//! of a basis index, so the full operator is `M_{n-1} ⊗ ... ⊗ M_0`.
#![allow(dead_code)]

use num_complex::Complex64;
use photonic_core::{GateKind, LocalGate, Pauli, PauliString, StabilizerTableau};
use rand::Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![c(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let dim = rows.len();
        Self {
            dim,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn at(&self, r: usize, col: usize) -> C {
        self.data[r * self.dim + col]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.at(i, k);
                if a == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * o.at(k, j);
                }
            }
        }
        out
    }

    /// `self ⊗ o`: `self` acts on the high bits.
    pub fn kron(&self, o: &Mat) -> Mat {
        let d = self.dim * o.dim;
        let mut out = Mat::zeros(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..o.dim {
                    for l in 0..o.dim {
                        out.data[(i * o.dim + k) * d + (j * o.dim + l)] =
                            self.at(i, j) * o.at(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.at(i, j).conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn approx_eq(&self, o: &Mat, tol: f64) -> bool {
        self.dim == o.dim
            && self
                .data
                .iter()
                .zip(&o.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

pub fn pauli_matrix(p: Pauli) -> Mat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => Mat::from_rows(&[&[o, z], &[z, o]]),
        Pauli::X => Mat::from_rows(&[&[z, o], &[o, z]]),
        Pauli::Y => Mat::from_rows(&[&[z, -i], &[i, z]]),
        Pauli::Z => Mat::from_rows(&[&[o, z], &[z, -o]]),
    }
}

pub fn gate_matrix(kind: GateKind) -> Mat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match kind {
        GateKind::H => Mat::from_rows(&[&[h, h], &[h, -h]]),
        GateKind::S => Mat::from_rows(&[&[o, z], &[z, i]]),
        GateKind::SDag => Mat::from_rows(&[&[o, z], &[z, -i]]),
        GateKind::X => pauli_matrix(Pauli::X),
        GateKind::Y => pauli_matrix(Pauli::Y),
        GateKind::Z => pauli_matrix(Pauli::Z),
    }
}

/// Embeds single-qubit operators: `ops[q]` acts on qubit `q`.
pub fn tensor(ops: &[Mat]) -> Mat {
    let mut m = Mat::identity(1);
    for op in ops.iter().rev() {
        m = m.kron(op);
    }
    m
}

pub fn string_matrix(p: &PauliString) -> Mat {
    let ops: Vec<Mat> = (0..p.len()).map(|q| pauli_matrix(p.get(q))).collect();
    let phase =
        [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase_exponent() as usize % 4];
    tensor(&ops).scale(phase)
}

pub fn local_gate_matrix(n: usize, g: &LocalGate) -> Mat {
    let ops: Vec<Mat> = (0..n)
        .map(|q| {
            if q == g.target {
                gate_matrix(g.kind)
            } else {
                Mat::identity(2)
            }
        })
        .collect();
    tensor(&ops)
}

/// CNOT as an explicit permutation of basis states.
pub fn cnot_matrix(n: usize, control: usize, target: usize) -> Mat {
    let d = 1 << n;
    let mut m = Mat::zeros(d);
    for i in 0..d {
        let j = if i >> control & 1 == 1 {
            i ^ (1 << target)
        } else {
            i
        };
        m.data[j * d + i] = c(1.0, 0.0);
    }
    m
}

pub fn cz_matrix(n: usize, a: usize, b: usize) -> Mat {
    let d = 1 << n;
    let mut m = Mat::identity(d);
    for i in 0..d {
        if i >> a & 1 == 1 && i >> b & 1 == 1 {
            m.data[i * d + i] = c(-1.0, 0.0);
        }
    }
    m
}

pub fn random_pauli<R: Rng>(rng: &mut R, n: usize, hermitian: bool) -> PauliString {
    let ops: Vec<Pauli> = (0..n)
        .map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)])
        .collect();
    let k = if hermitian {
        2 * rng.random_range(0..2)
    } else {
        rng.random_range(0..4)
    };
    let phase_text = ["+", "+i", "-", "-i"][k];
    let body: String = ops.iter().map(|o| o.as_char()).collect();
    format!("{phase_text}{body}").parse().unwrap()
}

pub fn random_gate<R: Rng>(rng: &mut R, n: usize) -> LocalGate {
    let kinds = [
        GateKind::H,
        GateKind::S,
        GateKind::SDag,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
    ];
    LocalGate::new(
        kinds[rng.random_range(0..kinds.len())],
        rng.random_range(0..n),
    )
}

/// Generators of a random stabilizer state: a random Clifford circuit
/// applied to `|0...0>`.
pub fn random_stabilizer_state<R: Rng>(rng: &mut R, n: usize, depth: usize) -> Vec<PauliString> {
    let mut t = StabilizerTableau::all_horizontal(n).unwrap();
    for _ in 0..depth {
        match rng.random_range(0..3) {
            0 => t
                .apply_gate(&LocalGate::new(GateKind::H, rng.random_range(0..n)))
                .unwrap(),
            1 => t
                .apply_gate(&LocalGate::new(GateKind::S, rng.random_range(0..n)))
                .unwrap(),
            _ if n >= 2 => {
                let a = rng.random_range(0..n);
                let mut b = rng.random_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                t.apply_cnot(a, b).unwrap();
            }
            _ => {}
        }
    }
    t.stabilizers().to_vec()
}

/// Random normalized amplitudes.
pub fn random_amplitudes<R: Rng>(rng: &mut R, n: usize) -> Vec<C> {
    let mut v: Vec<C> = (0..1usize << n)
        .map(|_| {
            c(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        })
        .collect();
    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= norm;
    }
    v
}

/// All `2^r` products of the generators, as matrices.
pub fn group_elements(gens: &[PauliString]) -> Vec<Mat> {
    let n = gens[0].len();
    let mut out = Vec::new();
    for mask in 0..1usize << gens.len() {
        let mut m = Mat::identity(1 << n);
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                m = m.mul(&string_matrix(g));
            }
        }
        out.push(m);
    }
    out
}

/// A device whose atom stays coherent for exactly `max_weight` transits.
pub fn device_for(max_weight: usize) -> photonic_core::ModuleDevice {
    photonic_core::ModuleDevice::new(1.0, max_weight as f64).unwrap()
}

/// Compiles and runs `target`, returning the report and the final photon
/// register when the dense engine ran.
pub fn run_target(
    target: &photonic_core::TargetState,
    max_weight: usize,
    modules: usize,
    engine: photonic_core::Engine,
    policy: photonic_core::CorrectionPolicy,
    seed: u64,
) -> photonic_core::Result<(photonic_core::RunReport, Option<photonic_core::StateVector>)> {
    use photonic_core::{compile, DeviceLimits, Execution, RunConfig};
    let schedule = compile(target, DeviceLimits { max_weight }, modules)?;
    let mut config = RunConfig::new(device_for(max_weight), 1.5, seed);
    config.engine = engine;
    config.policy = policy;
    let mut rng = photonic_core::rng::seeded(seed);
    Execution::new(&schedule, config)?.finish(&mut rng)
}
