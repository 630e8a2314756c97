//! Compiles a target stabilizer state into parity checks on modules.
//!
//! Every generator whose weight fits the device becomes one check. An
//! over-weight `±X^k` generator is instead grown as a GHZ block: it is split
//! into halves recursively until each leaf fits, each leaf is prepared with
//! its own `X`/`ZZ` checks, and sibling blocks are joined by a `ZZ` check on
//! their boundary photons. Remaining generators follow the blocks.

use std::collections::BTreeSet;

use crate::device::ParityCheck;
use crate::error::{Error, Result};
use crate::group::StabilizerGroup;
use crate::pauli::{Pauli, PauliString, Sign};
use crate::target::{ghz_generators, TargetState};

/// What the compiler needs to know about the hardware.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeviceLimits {
    pub max_weight: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckRole {
    /// Measures target generator `index` directly.
    Generator(usize),
    /// Prepares one leaf of GHZ block `block`.
    GhzLeaf { block: usize },
    /// Joins two halves of GHZ block `block`.
    Fusion { block: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledCheck {
    pub check: ParityCheck,
    pub role: CheckRole,
    pub slot: usize,
    pub module: usize,
    /// Earlier checks that must finish first.
    pub depends_on: Vec<usize>,
}

impl ScheduledCheck {
    /// Photons the check routes or may correct.
    pub fn touched(&self) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = self.check.photons().iter().copied().collect();
        set.extend(self.check.correction().support());
        set
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionStep {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Index of the fusion check in `Schedule::checks`.
    pub check: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    target: TargetState,
    checks: Vec<ScheduledCheck>,
    fusions: Vec<FusionStep>,
    device_max_weight: usize,
    modules: usize,
}

impl Schedule {
    pub fn target(&self) -> &TargetState {
        &self.target
    }

    pub fn checks(&self) -> &[ScheduledCheck] {
        &self.checks
    }

    pub fn fusions(&self) -> &[FusionStep] {
        &self.fusions
    }

    pub fn device_max_weight(&self) -> usize {
        self.device_max_weight
    }

    pub fn modules(&self) -> usize {
        self.modules
    }

    pub fn num_slots(&self) -> usize {
        self.checks.iter().map(|c| c.slot + 1).max().unwrap_or(0)
    }

    /// Largest Parity-weight among the emitted checks.
    pub fn max_weight(&self) -> usize {
        self.checks
            .iter()
            .map(|c| c.check.weight())
            .max()
            .unwrap_or(0)
    }

    /// Check indices in execution order: by slot, then module.
    pub fn execution_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.checks.len()).collect();
        order.sort_by_key(|&i| (self.checks[i].slot, self.checks[i].module, i));
        order
    }
}

/// A GHZ state `sign·X^S`, `Z_a Z_b` on consecutive photons of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhzBlock {
    n: usize,
    photons: Vec<usize>,
    sign: Sign,
}

impl GhzBlock {
    pub fn new(n: usize, photons: Vec<usize>, sign: Sign) -> Result<Self> {
        if photons.is_empty() {
            return Err(Error::NotGhz(photons));
        }
        let mut seen = BTreeSet::new();
        for &p in &photons {
            if p >= n {
                return Err(Error::QubitOutOfRange { index: p, n });
            }
            if !seen.insert(p) {
                return Err(Error::NotGhz(photons));
            }
        }
        Ok(Self { n, photons, sign })
    }

    /// Identifies the GHZ block on `photons` generated by `generators`.
    pub fn from_generators(
        n: usize,
        photons: Vec<usize>,
        generators: &[PauliString],
    ) -> Result<Self> {
        let group = StabilizerGroup::from_generators(n, generators)
            .map_err(|_| Error::NotGhz(photons.clone()))?;
        for sign in [Sign::Plus, Sign::Minus] {
            let block = Self::new(n, photons.clone(), sign)?;
            let expected = StabilizerGroup::from_generators(n, &block.generators())?;
            if expected == group {
                return Ok(block);
            }
        }
        Err(Error::NotGhz(photons))
    }

    pub fn photons(&self) -> &[usize] {
        &self.photons
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn generators(&self) -> Vec<PauliString> {
        ghz_generators(self.n, &self.photons, self.sign)
    }
}

/// The check that joins two GHZ blocks, and the block it produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Fusion {
    pub check: ParityCheck,
    pub merged: GhzBlock,
}

/// Joins `a` and `b` with a `ZZ` check on the last photon of `a` and the
/// first photon of `b`. The result is the GHZ block on `a` followed by `b`.
pub fn fuse_ghz(a: &GhzBlock, b: &GhzBlock) -> Result<Fusion> {
    if a.n != b.n {
        return Err(Error::LengthMismatch {
            left: a.n,
            right: b.n,
        });
    }
    if a.photons.iter().any(|p| b.photons.contains(p)) {
        return Err(Error::Infeasible(format!(
            "GHZ blocks {:?} and {:?} overlap",
            a.photons, b.photons
        )));
    }
    let mut photons = a.photons.clone();
    photons.extend(&b.photons);
    let merged = GhzBlock::new(a.n, photons, a.sign * b.sign)?;
    let context = merged.generators();
    let index = a.photons.len();
    let check = ParityCheck::new(context[index].clone())?;
    let correction = correction_for(&context, index, Some(check.correction()))?;
    Ok(Fusion {
        check: check.with_correction(correction)?,
        merged,
    })
}

/// A Pauli correction for `context[index]`: anticommutes with it and
/// commutes with every other generator, so applying it flips only that
/// generator's sign. `preferred` is used when it qualifies; then a
/// single-site Pauli on the lowest possible photon; then a linear solve.
pub fn correction_for(
    context: &[PauliString],
    index: usize,
    preferred: Option<&PauliString>,
) -> Result<PauliString> {
    let target = &context[index];
    let qualifies = |c: &PauliString| -> Result<bool> {
        for (j, g) in context.iter().enumerate() {
            if g.commutes(c)? == (j == index) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if let Some(p) = preferred {
        if qualifies(p)? {
            return Ok(p.clone().with_sign(Sign::Plus));
        }
    }
    let n = target.len();
    for q in target.support() {
        for op in [Pauli::Z, Pauli::X, Pauli::Y] {
            if op == target.get(q) {
                continue;
            }
            let c = PauliString::single(n, q, op);
            if qualifies(&c)? {
                return Ok(c);
            }
        }
    }
    let duals = dual_basis(context)?;
    Ok(duals[index].clone())
}

/// For independent commuting `context`, returns `d_i` with `d_i`
/// anticommuting with `context[i]` only. Supported on the union of the
/// context supports.
pub fn dual_basis(context: &[PauliString]) -> Result<Vec<PauliString>> {
    let r = context.len();
    let n = context
        .first()
        .map(PauliString::len)
        .ok_or(Error::NoQubits)?;
    let qubits: Vec<usize> = context
        .iter()
        .flat_map(|g| g.support())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let m = qubits.len();
    // Unknown v = (x-part, z-part) over `qubits`; the symplectic product
    // with g is Σ v_x·g_z + v_z·g_x, so row j holds (g_z, g_x | e_j).
    let cols = 2 * m + r;
    let mut rows: Vec<Vec<bool>> = context
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let mut row = vec![false; cols];
            for (k, &q) in qubits.iter().enumerate() {
                row[k] = g.z_bit(q);
                row[m + k] = g.x_bit(q);
            }
            row[2 * m + j] = true;
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(r);
    let mut next = 0;
    for col in 0..2 * m {
        let Some(found) = (next..r).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(next, found);
        for i in 0..r {
            if i != next && rows[i][col] {
                let (src, dst) = if i < next {
                    let (lo, hi) = rows.split_at_mut(next);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[next], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d ^= *s;
                }
            }
        }
        pivots.push(col);
        next += 1;
        if next == r {
            break;
        }
    }
    if next < r {
        return Err(Error::DependentGenerator(next));
    }
    Ok((0..r)
        .map(|i| {
            let mut d = PauliString::identity(n);
            for (row, &col) in rows.iter().zip(&pivots) {
                if row[2 * m + i] {
                    let q = qubits[col % m];
                    let (x, z) = d.get(q).bits();
                    let (x, z) = if col < m { (!x, z) } else { (x, !z) };
                    d.set(q, Pauli::from_bits(x, z));
                }
            }
            d
        })
        .collect())
}

struct Builder {
    n: usize,
    limits: DeviceLimits,
    checks: Vec<ScheduledCheck>,
    fusions: Vec<FusionStep>,
    // Fusion-tree dependencies, kept apart from conflict dependencies.
    tree_deps: Vec<Vec<usize>>,
}

impl Builder {
    fn push(&mut self, check: ParityCheck, role: CheckRole, tree_deps: Vec<usize>) -> usize {
        self.checks.push(ScheduledCheck {
            check,
            role,
            slot: 0,
            module: 0,
            depends_on: Vec::new(),
        });
        self.tree_deps.push(tree_deps);
        self.checks.len() - 1
    }

    /// Emits the checks that grow the GHZ block on `photons`; returns their
    /// indices.
    fn emit_ghz(
        &mut self,
        photons: &[usize],
        sign: Sign,
        block: usize,
    ) -> Result<(GhzBlock, Vec<usize>)> {
        if photons.len() <= self.limits.max_weight {
            let ghz = GhzBlock::new(self.n, photons.to_vec(), sign)?;
            let context = ghz.generators();
            let mut emitted = Vec::new();
            for (i, g) in context.iter().enumerate() {
                let check = ParityCheck::new(g.clone())?;
                let correction = correction_for(&context, i, Some(check.correction()))?;
                emitted.push(self.push(
                    check.with_correction(correction)?,
                    CheckRole::GhzLeaf { block },
                    Vec::new(),
                ));
            }
            return Ok((ghz, emitted));
        }
        let half = photons.len().div_ceil(2);
        let (left, mut emitted) = self.emit_ghz(&photons[..half], sign, block)?;
        let (right, right_emitted) = self.emit_ghz(&photons[half..], Sign::Plus, block)?;
        emitted.extend(right_emitted);
        let fusion = fuse_ghz(&left, &right)?;
        let idx = self.push(fusion.check, CheckRole::Fusion { block }, emitted.clone());
        self.fusions.push(FusionStep {
            left: left.photons.clone(),
            right: right.photons.clone(),
            check: idx,
        });
        emitted.push(idx);
        Ok((fusion.merged, emitted))
    }
}

/// Compiles `target` for devices limited to `limits.max_weight` photons per
/// check, spread over `modules` identical modules.
pub fn compile(target: &TargetState, limits: DeviceLimits, modules: usize) -> Result<Schedule> {
    if modules == 0 {
        return Err(Error::InvalidParameter("need at least one module".into()));
    }
    if limits.max_weight == 0 {
        return Err(Error::Infeasible(
            "device cannot route any photon within its coherence time".into(),
        ));
    }
    let n = target.num_qubits();
    let gens = target.generators();
    if let Some(i) = gens.iter().position(PauliString::is_identity) {
        return Err(Error::DegenerateGenerator(i));
    }

    let mut blocks: Vec<(Vec<usize>, Sign)> = Vec::new();
    let mut group = None;
    for (i, g) in gens.iter().enumerate() {
        let w = g.weight();
        if w <= limits.max_weight {
            continue;
        }
        if !g.is_x_type() {
            return Err(Error::Infeasible(format!(
                "generator {i} ({g}) has weight {w} > {} and is not an X-type string that fusion can split",
                limits.max_weight
            )));
        }
        if limits.max_weight < 2 {
            return Err(Error::Infeasible(format!(
                "generator {i} ({g}) has weight {w} but fusion needs two-photon checks; device limit is {}",
                limits.max_weight
            )));
        }
        let photons = g.support();
        if blocks
            .iter()
            .any(|(b, _)| b.iter().any(|p| photons.contains(p)))
        {
            return Err(Error::Infeasible(format!(
                "over-weight generator {i} ({g}) overlaps another GHZ block"
            )));
        }
        let group = group.get_or_insert_with(|| target.group());
        for w in photons.windows(2) {
            let zz = PauliString::on_support(n, w, Pauli::Z);
            if !group.contains(&zz) {
                return Err(Error::Infeasible(format!(
                    "generator {i} ({g}) has weight {w:?} > {} and the target does not contain {zz}, so it cannot be grown by fusion",
                    limits.max_weight
                )));
            }
        }
        blocks.push((photons, g.sign().expect("validated Hermitian")));
    }
    blocks.sort_by_key(|(p, _)| p[0]);

    let mut builder = Builder {
        n,
        limits,
        checks: Vec::new(),
        fusions: Vec::new(),
        tree_deps: Vec::new(),
    };
    let mut context: Vec<PauliString> = Vec::new();
    for (b, (photons, sign)) in blocks.iter().enumerate() {
        builder.emit_ghz(photons, *sign, b)?;
        context.extend(ghz_generators(n, photons, *sign));
    }

    let mut complement: Vec<usize> = if blocks.is_empty() {
        (0..gens.len()).collect()
    } else {
        let mut rows = context.clone();
        let mut picked = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let span = StabilizerGroup::from_generators(n, &rows)?;
            if !span.contains_up_to_sign(g) {
                rows.push(g.clone());
                picked.push(i);
            }
        }
        picked
    };
    complement.sort_by_key(|&i| gens[i].support()[0]);
    let first_complement = context.len();
    context.extend(complement.iter().map(|&i| gens[i].clone()));
    debug_assert_eq!(context.len(), n);

    let mut duals: Option<Vec<PauliString>> = None;
    for (k, &i) in complement.iter().enumerate() {
        let check = ParityCheck::new(gens[i].clone())?;
        let idx = first_complement + k;
        let correction = match correction_single(&context, idx, check.correction())? {
            Some(c) => c,
            None => {
                let duals = match &mut duals {
                    Some(d) => d,
                    None => duals.insert(dual_basis(&context)?),
                };
                duals[idx].clone()
            }
        };
        builder.push(
            check.with_correction(correction)?,
            CheckRole::Generator(i),
            Vec::new(),
        );
    }

    let mut schedule = Schedule {
        target: target.clone(),
        checks: builder.checks,
        fusions: builder.fusions,
        device_max_weight: limits.max_weight,
        modules,
    };
    assign_with_tree(&mut schedule, &builder.tree_deps, modules);
    Ok(schedule)
}

/// The cheap part of `correction_for`, without the linear-solve fallback.
fn correction_single(
    context: &[PauliString],
    index: usize,
    preferred: &PauliString,
) -> Result<Option<PauliString>> {
    let target = &context[index];
    let support = target.support();
    let touching: Vec<usize> = (0..context.len())
        .filter(|&j| j != index)
        .filter(|&j| support.iter().any(|&q| context[j].get(q) != Pauli::I))
        .collect();
    let qualifies = |c: &PauliString| -> Result<bool> {
        if target.commutes(c)? {
            return Ok(false);
        }
        for &j in &touching {
            if !context[j].commutes(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let inside = preferred.support().iter().all(|q| support.contains(q));
    if inside && qualifies(preferred)? {
        return Ok(Some(preferred.clone().with_sign(Sign::Plus)));
    }
    let n = target.len();
    for &q in &support {
        for op in [Pauli::Z, Pauli::X, Pauli::Y] {
            if op == target.get(q) {
                continue;
            }
            let c = PauliString::single(n, q, op);
            if qualifies(&c)? {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// Greedy earliest-fit placement of `schedule`'s checks on modules.
///
/// Two checks conflict when the photons they route or correct overlap; a
/// check goes in the slot after its latest conflicting predecessor (and
/// after any fusion-tree predecessor), on the lowest free module.
pub fn assign_modules(schedule: &mut Schedule, modules: usize) -> Result<()> {
    if modules == 0 {
        return Err(Error::InvalidParameter("need at least one module".into()));
    }
    let tree: Vec<Vec<usize>> = tree_deps_of(schedule);
    assign_with_tree(schedule, &tree, modules);
    Ok(())
}

fn tree_deps_of(schedule: &Schedule) -> Vec<Vec<usize>> {
    let mut tree = vec![Vec::new(); schedule.checks.len()];
    for f in &schedule.fusions {
        let members: BTreeSet<usize> = f.left.iter().chain(&f.right).copied().collect();
        tree[f.check] = (0..f.check)
            .filter(|&j| match schedule.checks[j].role {
                CheckRole::GhzLeaf { .. } | CheckRole::Fusion { .. } => schedule.checks[j]
                    .check
                    .photons()
                    .iter()
                    .all(|p| members.contains(p)),
                CheckRole::Generator(_) => false,
            })
            .collect();
    }
    tree
}

fn assign_with_tree(schedule: &mut Schedule, tree: &[Vec<usize>], modules: usize) {
    schedule.modules = modules;
    let touched: Vec<BTreeSet<usize>> = schedule
        .checks
        .iter()
        .map(ScheduledCheck::touched)
        .collect();
    let mut busy: Vec<Vec<bool>> = Vec::new();
    for i in 0..schedule.checks.len() {
        let mut deps: BTreeSet<usize> = tree[i].iter().copied().collect();
        deps.extend((0..i).filter(|&j| !touched[i].is_disjoint(&touched[j])));
        let mut slot = deps
            .iter()
            .map(|&j| schedule.checks[j].slot + 1)
            .max()
            .unwrap_or(0);
        let module = loop {
            if busy.len() <= slot {
                busy.resize(slot + 1, vec![false; modules]);
            }
            if let Some(m) = busy[slot].iter().position(|b| !b) {
                busy[slot][m] = true;
                break m;
            }
            slot += 1;
        };
        let sc = &mut schedule.checks[i];
        sc.slot = slot;
        sc.module = module;
        sc.check = sc.check.clone().with_module(module);
        sc.depends_on = deps.into_iter().collect();
    }
}
