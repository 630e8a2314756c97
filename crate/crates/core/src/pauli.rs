//! Signed Pauli strings and single-qubit Clifford gates.
//!
//! A [`PauliString`] stores one X bit and one Z bit per qubit, packed into
//! 64-bit words, together with a global phase `i^k`. Sites carry the literal
//! operator: `(x, z) = (1, 1)` is `Y`, not `XZ`, so a string with phase `+1`
//! or `-1` is always Hermitian.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Eigenvalue of a Hermitian Pauli measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_minus(minus: bool) -> Self {
        if minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn flip(self) -> Self {
        Sign::from_minus(!self.is_minus())
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_minus(self.is_minus() ^ rhs.is_minus())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Photon polarization in the computational basis; `H` is |0>, `V` is |1>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn bit(self) -> bool {
        self == Polarization::V
    }

    /// Parses a string such as `"HVH"` into per-photon polarizations.
    pub fn parse_train(text: &str) -> Result<Vec<Polarization>> {
        text.chars()
            .enumerate()
            .map(|(i, c)| match c {
                'H' | 'h' => Ok(Polarization::H),
                'V' | 'v' => Ok(Polarization::V),
                _ => Err(Error::Parse {
                    position: i + 1,
                    message: format!("expected H or V, found {c:?}"),
                }),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    S,
    SDag,
    X,
    Y,
    Z,
}

impl GateKind {
    pub fn inverse(self) -> Self {
        match self {
            GateKind::S => GateKind::SDag,
            GateKind::SDag => GateKind::S,
            other => other,
        }
    }

    /// Conjugation `g P g†` of a single-site Pauli. Returns the image and
    /// whether it picks up a minus sign.
    pub fn conjugate(self, p: Pauli) -> (Pauli, bool) {
        use Pauli::*;
        match (self, p) {
            (_, I) => (I, false),
            (GateKind::H, X) => (Z, false),
            (GateKind::H, Y) => (Y, true),
            (GateKind::H, Z) => (X, false),
            (GateKind::S, X) => (Y, false),
            (GateKind::S, Y) => (X, true),
            (GateKind::S, Z) => (Z, false),
            (GateKind::SDag, X) => (Y, true),
            (GateKind::SDag, Y) => (X, false),
            (GateKind::SDag, Z) => (Z, false),
            (GateKind::X, X) => (X, false),
            (GateKind::X, Y) => (Y, true),
            (GateKind::X, Z) => (Z, true),
            (GateKind::Y, X) => (X, true),
            (GateKind::Y, Y) => (Y, false),
            (GateKind::Y, Z) => (Z, true),
            (GateKind::Z, X) => (X, true),
            (GateKind::Z, Y) => (Y, true),
            (GateKind::Z, Z) => (Z, false),
        }
    }

    fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::SDag => "SDG",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
        }
    }

    pub fn from_pauli(p: Pauli) -> Option<Self> {
        match p {
            Pauli::I => None,
            Pauli::X => Some(GateKind::X),
            Pauli::Y => Some(GateKind::Y),
            Pauli::Z => Some(GateKind::Z),
        }
    }
}

/// A single-qubit Clifford gate applied to one photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalGate {
    pub kind: GateKind,
    pub target: usize,
}

impl LocalGate {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Self { kind, target }
    }

    pub fn inverse(self) -> Self {
        Self {
            kind: self.kind.inverse(),
            target: self.target,
        }
    }
}

impl fmt::Display for LocalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.name(), self.target)
    }
}

impl FromStr for LocalGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: String| Error::Parse {
            position: 1,
            message,
        };
        let (name, target) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("gate {s:?} lacks ':'")))?;
        let kind = match name {
            "H" => GateKind::H,
            "S" => GateKind::S,
            "SDG" => GateKind::SDag,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            _ => return Err(bad(format!("unknown gate {name:?}"))),
        };
        let target = target
            .parse()
            .map_err(|_| bad(format!("bad qubit index {target:?}")))?;
        Ok(LocalGate { kind, target })
    }
}

/// Signed N-qubit Pauli operator `i^phase · P_0 ⊗ ... ⊗ P_{n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            xs: vec![0; w],
            zs: vec![0; w],
            phase: 0,
        }
    }

    pub fn from_paulis(ops: &[Pauli], sign: Sign) -> Self {
        let mut p = Self::identity(ops.len());
        for (i, &op) in ops.iter().enumerate() {
            p.set(i, op);
        }
        p.phase = if sign.is_minus() { 2 } else { 0 };
        p
    }

    /// `op` on a single qubit, identity elsewhere.
    pub fn single(n: usize, qubit: usize, op: Pauli) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, op);
        p
    }

    /// `op` on every listed qubit, identity elsewhere.
    pub fn on_support(n: usize, qubits: &[usize], op: Pauli) -> Self {
        let mut p = Self::identity(n);
        for &q in qubits {
            p.set(q, op);
        }
        p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        let (w, b) = (q / WORD, q % WORD);
        Pauli::from_bits((self.xs[w] >> b) & 1 == 1, (self.zs[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, op: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / WORD, q % WORD);
        let (x, z) = op.bits();
        self.xs[w] = (self.xs[w] & !(1 << b)) | ((x as u64) << b);
        self.zs[w] = (self.zs[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.xs[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.zs[q / WORD] >> (q % WORD)) & 1 == 1
    }

    /// Phase exponent `k` in `i^k`.
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// Sign of a Hermitian string; `None` for `±i` phases.
    pub fn sign(&self) -> Option<Sign> {
        match self.phase {
            0 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.phase = if sign.is_minus() { 2 } else { 0 };
        self
    }

    pub(crate) fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) % 4;
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) % 4;
    }

    pub fn negated(mut self) -> Self {
        self.negate();
        self
    }

    pub fn weight(&self) -> usize {
        self.xs
            .iter()
            .zip(&self.zs)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Non-identity qubits in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    /// Same operator ignoring the phase.
    pub fn same_operator(&self, other: &PauliString) -> bool {
        self.n == other.n && self.xs == other.xs && self.zs == other.zs
    }

    pub fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// `self · other`, with the phase tracked exactly.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// In-place `self ← self · other`; lengths must already agree.
    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliString) {
        debug_assert_eq!(self.n, other.n);
        let mut acc: i64 = self.phase as i64 + other.phase as i64;
        for w in 0..self.xs.len() {
            let (x1, z1, x2, z2) = (self.xs[w], self.zs[w], other.xs[w], other.zs[w]);
            // X·Y, Y·Z, Z·X contribute +i; the reversed orders contribute -i.
            let pos = (x1 & !z1 & x2 & z2) | (x1 & z1 & !x2 & z2) | (!x1 & z1 & x2 & !z2);
            let neg = (x1 & !z1 & !x2 & z2) | (x1 & z1 & x2 & !z2) | (!x1 & z1 & x2 & z2);
            acc += pos.count_ones() as i64 - neg.count_ones() as i64;
            self.xs[w] = x1 ^ x2;
            self.zs[w] = z1 ^ z2;
        }
        self.phase = acc.rem_euclid(4) as u8;
    }

    /// True iff `self` and `other` commute.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let mut parity = 0u32;
        for w in 0..self.xs.len() {
            parity ^= ((self.xs[w] & other.zs[w]) ^ (self.zs[w] & other.xs[w])).count_ones() & 1;
        }
        parity == 0
    }

    /// `g · self · g†`.
    pub fn conjugate_by(&self, gate: &LocalGate) -> Result<PauliString> {
        let mut out = self.clone();
        out.conjugate_in_place(gate)?;
        Ok(out)
    }

    pub fn conjugate_in_place(&mut self, gate: &LocalGate) -> Result<()> {
        if gate.target >= self.n {
            return Err(Error::QubitOutOfRange {
                index: gate.target,
                n: self.n,
            });
        }
        let (image, minus) = gate.kind.conjugate(self.get(gate.target));
        self.set(gate.target, image);
        if minus {
            self.negate();
        }
        Ok(())
    }

    /// Local gates whose product is this operator, up to its phase.
    pub fn as_gates(&self) -> Vec<LocalGate> {
        self.support()
            .into_iter()
            .filter_map(|q| GateKind::from_pauli(self.get(q)).map(|k| LocalGate::new(k, q)))
            .collect()
    }

    /// True when every non-identity site is `X`.
    pub fn is_x_type(&self) -> bool {
        self.zs.iter().all(|&z| z == 0)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses an optionally signed literal: `"+XZZXI"`, `"-ZIZ"`, `"XX"`.
    /// A lowercase `i` after the sign selects an imaginary phase.
    fn from_str(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let mut phase = 0u8;
        match chars.first() {
            Some('+') => pos = 1,
            Some('-') => {
                pos = 1;
                phase = 2;
            }
            _ => {}
        }
        if chars.get(pos) == Some(&'i') {
            pos += 1;
            phase = (phase + 1) % 4;
        }
        let body = &chars[pos..];
        if body.is_empty() {
            return Err(Error::Parse {
                position: pos + 1,
                message: "empty Pauli body".into(),
            });
        }
        let mut ops = Vec::with_capacity(body.len());
        for (k, &c) in body.iter().enumerate() {
            match Pauli::from_char(c) {
                Some(op) => ops.push(op),
                None => {
                    return Err(Error::Parse {
                        position: pos + k + 1,
                        message: format!("expected one of I, X, Y, Z, found {c:?}"),
                    })
                }
            }
        }
        let mut p = PauliString::from_paulis(&ops, Sign::Plus);
        p.phase = phase;
        Ok(p)
    }
}

/// Convenience parser for literals known to be valid (tests, presets).
pub fn pauli(text: &str) -> PauliString {
    text.parse()
        .unwrap_or_else(|e| panic!("invalid Pauli literal {text:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let p = pauli("+XX");
        assert_eq!(p.len(), 2);
        assert_eq!(p.get(0), Pauli::X);
        assert_eq!(p.get(1), Pauli::X);
        assert_eq!(p.sign(), Some(Sign::Plus));

        let q = pauli("-ZIZ");
        assert_eq!(q.weight(), 2);
        assert_eq!(q.sign(), Some(Sign::Minus));

        assert_eq!(pauli("XYZ").to_string(), "+XYZ");
        assert_eq!(pauli("-iY").to_string(), "-iY");
    }

    #[test]
    fn parse_errors_name_position() {
        match "XQ".parse::<PauliString>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        match "+XXa".parse::<PauliString>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            "".parse::<PauliString>(),
            Err(Error::Parse { position: 1, .. })
        ));
        assert!(matches!(
            "-".parse::<PauliString>(),
            Err(Error::Parse { position: 2, .. })
        ));
    }

    #[test]
    fn products() {
        assert_eq!(pauli("X").multiply(&pauli("Z")).unwrap(), pauli("-iY"));
        assert_eq!(pauli("+XX").multiply(&pauli("+ZZ")).unwrap(), pauli("-YY"));
        for lit in ["+XYZI", "-YYZ", "+Z"] {
            let p = pauli(lit);
            assert_eq!(p.multiply(&p).unwrap(), PauliString::identity(p.len()));
        }
        assert!(matches!(
            pauli("XX").multiply(&pauli("X")),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        ));
    }

    #[test]
    fn commutation() {
        assert!(pauli("XX").commutes(&pauli("ZZ")).unwrap());
        assert!(!pauli("XI").commutes(&pauli("ZI")).unwrap());
        assert!(pauli("XX").commutes(&pauli("Z")).is_err());
    }

    #[test]
    fn conjugation_basics() {
        let h0 = LocalGate::new(GateKind::H, 0);
        assert_eq!(pauli("X").conjugate_by(&h0).unwrap(), pauli("Z"));
        assert_eq!(pauli("Z").conjugate_by(&h0).unwrap(), pauli("X"));
        let z0 = LocalGate::new(GateKind::Z, 0);
        assert_eq!(pauli("X").conjugate_by(&z0).unwrap(), pauli("-X"));
        let out = LocalGate::new(GateKind::H, 3);
        assert!(matches!(
            pauli("XX").conjugate_by(&out),
            Err(Error::QubitOutOfRange { index: 3, n: 2 })
        ));
    }

    #[test]
    fn weight_and_support() {
        let p = pauli("IXIYZ");
        assert_eq!(p.weight(), 3);
        assert_eq!(p.support(), vec![1, 3, 4]);
        assert_eq!(PauliString::identity(5).weight(), 0);
        assert!(pauli("-iX").sign().is_none());
        assert!(!pauli("iX").is_hermitian());
    }

    #[test]
    fn gate_literals_round_trip() {
        for g in ["H:0", "SDG:12", "S:3", "Z:1"] {
            assert_eq!(g.parse::<LocalGate>().unwrap().to_string(), g);
        }
        assert!("Q:1".parse::<LocalGate>().is_err());
    }

    #[test]
    fn wide_strings_cross_word_boundaries() {
        let n = 130;
        let mut a = PauliString::identity(n);
        let mut b = PauliString::identity(n);
        a.set(0, Pauli::X);
        a.set(64, Pauli::X);
        a.set(129, Pauli::Y);
        b.set(64, Pauli::Z);
        b.set(129, Pauli::Z);
        assert!(a.commutes(&b).unwrap());
        let ab = a.multiply(&b).unwrap();
        // X·Z = -iY and Y·Z = iX
        assert_eq!(ab.get(64), Pauli::Y);
        assert_eq!(ab.get(129), Pauli::X);
        assert_eq!(ab.sign(), Some(Sign::Plus));
        assert_eq!(ab.weight(), 3);
    }
}
