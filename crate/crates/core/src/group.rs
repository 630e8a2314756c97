//! Canonical form of a stabilizer group.
//!
//! Generators are row-reduced over GF(2) with columns ordered `x_0..x_{n-1}`
//! then `z_0..z_{n-1}`; the first unpivoted row (by index) holding a bit in
//! the current column becomes the pivot. Rows are multiplied as Pauli
//! operators so phases stay exact. The reduced echelon form of a binary span
//! is unique, and its phases are then fixed by the group, so two groups are
//! equal iff their canonical rows are equal.

use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    rows: Vec<PauliString>,
    pivots: Vec<usize>,
}

fn column_bit(p: &PauliString, col: usize) -> bool {
    let n = p.len();
    if col < n {
        p.x_bit(col)
    } else {
        p.z_bit(col - n)
    }
}

impl StabilizerGroup {
    /// Validates and canonicalizes a generating set: every generator must be
    /// Hermitian with length `n`, pairwise commuting, and independent.
    pub fn from_generators(n: usize, generators: &[PauliString]) -> Result<Self> {
        for g in generators {
            if g.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: g.len(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::NotHermitian(g.to_string()));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes_unchecked(&generators[j]) {
                    return Err(Error::NonCommuting {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Self::reduce(n, generators.to_vec())
    }

    /// Canonicalizes rows already known to be Hermitian and commuting.
    pub(crate) fn reduce(n: usize, mut rows: Vec<PauliString>) -> Result<Self> {
        // original index of each row, for dependency reporting
        let mut origin: Vec<usize> = (0..rows.len()).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..2 * n {
            if rank == rows.len() {
                break;
            }
            let Some(found) = (rank..rows.len()).find(|&r| column_bit(&rows[r], col)) else {
                continue;
            };
            rows.swap(rank, found);
            origin.swap(rank, found);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && column_bit(row, col) {
                    row.mul_assign_unchecked(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rank < rows.len() {
            let first_dependent = origin[rank..].iter().copied().min().unwrap_or(rank);
            return Err(Error::DependentGenerator(first_dependent));
        }
        Ok(Self { n, rows, pivots })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn canonical_rows(&self) -> &[PauliString] {
        &self.rows
    }

    /// Expresses `p` (ignoring its phase) as a product of canonical rows.
    /// Returns the product with its exact phase, or `None` when `p` lies
    /// outside the binary span.
    pub fn decompose(&self, p: &PauliString) -> Option<PauliString> {
        if p.len() != self.n {
            return None;
        }
        let mut residual = p.clone();
        let mut acc = PauliString::identity(self.n);
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            if column_bit(&residual, col) {
                residual.mul_assign_unchecked(row);
                acc.mul_assign_unchecked(row);
            }
        }
        residual.is_identity().then_some(acc)
    }

    /// True iff `p` (with its sign) is an element of the group.
    pub fn contains(&self, p: &PauliString) -> bool {
        self.decompose(p).is_some_and(|acc| acc == *p)
    }

    /// True iff `±p` lies in the group.
    pub fn contains_up_to_sign(&self, p: &PauliString) -> bool {
        self.decompose(p).is_some()
    }
}

/// Order-independent, sign-sensitive equality of two generating sets.
pub fn groups_equal(n: usize, a: &[PauliString], b: &[PauliString]) -> Result<bool> {
    let ga = StabilizerGroup::from_generators(n, a)?;
    let gb = StabilizerGroup::from_generators(n, b)?;
    Ok(ga == gb)
}

/// Line diff of canonical rows, used in verification failure messages.
pub fn describe_difference(expected: &StabilizerGroup, actual: &StabilizerGroup) -> String {
    let mut out = String::new();
    for row in expected.canonical_rows() {
        if !actual.contains(row) {
            let note = if actual.contains(&row.clone().negated()) {
                " (sign flipped)"
            } else {
                ""
            };
            out.push_str(&format!("  missing {row}{note}\n"));
        }
    }
    for row in actual.canonical_rows() {
        if !expected.contains(row) {
            out.push_str(&format!("  unexpected {row}\n"));
        }
    }
    out
}
