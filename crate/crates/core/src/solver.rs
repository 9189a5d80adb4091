//! Exact covering numbers by minimum set cover over the incidence structure
//! of points and (affine) hyperplanes.
//!
//! Every proper subspace lies in a hyperplane, and enlarging a member to a
//! containing hyperplane keeps a cover a cover without changing its size.
//! The minimum over hyperplane families is therefore the covering number.
//! Linear instances use projective points, since the origin lies in every
//! member and scalar multiples share membership.

use std::env;

use serde::Serialize;
use thiserror::Error;

use crate::cover::{is_cover, is_irredundant, CoverError, CoverFamily, CoverKind};
use crate::field::FieldSpec;
use crate::linalg::{all_vectors, Vector};
use crate::subspace::{
    checked_size, count_hyperplanes, enumerate_affine_hyperplanes, normalized_functionals,
    projective_points, AffineSubspace, LinearSubspace,
};

/// Default cap on points and on candidates per instance.
pub const DEFAULT_INSTANCE_LIMIT: usize = 5000;

/// Environment variable overriding [`DEFAULT_INSTANCE_LIMIT`].
pub const GUARDRAIL_ENV: &str = "SUBCOVER_GUARDRAIL";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("no linear covering of F^{0} exists (dimension must be at least 2)")]
    LinearTooSmall(usize),
    #[error("no affine covering of F^0 exists (dimension must be at least 1)")]
    AffineTooSmall,
    #[error("instance with {points} points and {candidates} candidates exceeds the limit of {limit}")]
    Guardrail { points: u128, candidates: u128, limit: usize },
    #[error("point {0} lies in no candidate")]
    Uncoverable(usize),
    #[error("candidate {index} has {found} incidence bits, expected {expected}")]
    BadIncidence { index: usize, expected: usize, found: usize },
    #[error("self-check failed: optimum {found}, expected {expected}")]
    SelfCheck { expected: usize, found: usize },
    #[error("minimum cover witness is redundant")]
    RedundantWitness,
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Reads [`GUARDRAIL_ENV`], falling back to the default.
pub fn instance_limit() -> usize {
    env::var(GUARDRAIL_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_INSTANCE_LIMIT)
}

/// Fixed-width set of point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
            len: self.len,
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }
}

/// Points, candidate members and their incidence. `candidates` is empty
/// for abstract instances built with [`IncidenceInstance::from_sets`].
#[derive(Debug, Clone)]
pub struct IncidenceInstance {
    pub field: Option<FieldSpec>,
    pub dim: usize,
    pub kind: CoverKind,
    pub points: Vec<Vector>,
    pub candidates: Vec<AffineSubspace>,
    pub incidence: Vec<BitSet>,
}

impl IncidenceInstance {
    /// An abstract set-cover instance over points `0..num_points`.
    pub fn from_sets(num_points: usize, sets: Vec<BitSet>) -> Result<Self, SolverError> {
        let inst = IncidenceInstance {
            field: None,
            dim: 0,
            kind: CoverKind::Linear,
            points: Vec::new(),
            candidates: Vec::new(),
            incidence: sets,
        };
        inst.validate(num_points)?;
        Ok(inst)
    }

    pub fn num_points(&self) -> usize {
        self.incidence.first().map_or(0, BitSet::capacity)
    }

    pub fn num_candidates(&self) -> usize {
        self.incidence.len()
    }

    fn validate(&self, num_points: usize) -> Result<(), SolverError> {
        let mut union = BitSet::new(num_points);
        for (index, s) in self.incidence.iter().enumerate() {
            if s.capacity() != num_points {
                return Err(SolverError::BadIncidence { index, expected: num_points, found: s.capacity() });
            }
            for (w, x) in union.words.iter_mut().zip(&s.words) {
                *w |= x;
            }
        }
        match (0..num_points).find(|&i| !union.contains(i)) {
            Some(p) => Err(SolverError::Uncoverable(p)),
            None => Ok(()),
        }
    }

    /// The family of candidates at `indices` (only for geometric instances).
    pub fn family(&self, indices: &[usize]) -> Result<CoverFamily, SolverError> {
        let field = self.field.as_ref().expect("geometric instance");
        let members = indices.iter().map(|&i| self.candidates[i].clone()).collect();
        Ok(CoverFamily::new(field, self.dim, self.kind, members)?)
    }
}

/// Points and candidates of the linear (projective) or affine instance.
pub fn build_instance(field: &FieldSpec, d: usize, kind: CoverKind) -> Result<IncidenceInstance, SolverError> {
    build_instance_with_limit(field, d, kind, instance_limit())
}

pub fn build_instance_with_limit(
    field: &FieldSpec,
    d: usize,
    kind: CoverKind,
    limit: usize,
) -> Result<IncidenceInstance, SolverError> {
    let q = field.order();
    match kind {
        CoverKind::Linear if d < 2 => return Err(SolverError::LinearTooSmall(d)),
        CoverKind::Affine if d < 1 => return Err(SolverError::AffineTooSmall),
        _ => {}
    }
    let too_big = || SolverError::Guardrail {
        points: (q as u128).saturating_pow(d as u32),
        candidates: (q as u128).saturating_pow(d as u32),
        limit,
    };
    let qd = checked_size(q, d).ok_or_else(too_big)?;
    let hyperplanes = count_hyperplanes(q, d);
    let (npoints, ncands) = match kind {
        CoverKind::Linear => (hyperplanes, hyperplanes),
        CoverKind::Affine => (qd, q * hyperplanes),
    };
    if npoints > limit || ncands > limit {
        return Err(SolverError::Guardrail { points: npoints as u128, candidates: ncands as u128, limit });
    }

    let functionals = normalized_functionals(field, d);
    let (points, candidates, incidence) = match kind {
        CoverKind::Linear => {
            let points: Vec<Vector> = projective_points(field, d).into_iter().map(|p| p.rep().clone()).collect();
            let incidence = functionals
                .iter()
                .map(|f| BitSet::from_indices(npoints, (0..npoints).filter(|&i| f.dot(field, &points[i]).is_zero())))
                .collect();
            let candidates = functionals
                .iter()
                .map(|f| AffineSubspace::from_linear(LinearSubspace::kernel_of(field, f).expect("length d")))
                .collect();
            (points, candidates, incidence)
        }
        CoverKind::Affine => {
            let points: Vec<Vector> = all_vectors(q, d).collect();
            let mut incidence = Vec::with_capacity(ncands);
            for f in &functionals {
                let values: Vec<usize> = points.iter().map(|p| f.dot(field, p).value()).collect();
                for c in 0..q {
                    incidence.push(BitSet::from_indices(npoints, (0..npoints).filter(|&i| values[i] == c)));
                }
            }
            (points, enumerate_affine_hyperplanes(field, d), incidence)
        }
    };
    let inst = IncidenceInstance { field: Some(field.clone()), dim: d, kind, points, candidates, incidence };
    inst.validate(npoints)?;
    Ok(inst)
}

/// A minimum cover of an abstract instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverSolution {
    pub optimum: usize,
    /// Lexicographically least optimal candidate-index set, ascending.
    pub chosen: Vec<usize>,
    pub exhaustive: bool,
    pub nodes_explored: u64,
}

/// `ceil(|uncovered| / max gain)` over the candidates from `start` on, or
/// `None` if no such candidate touches `uncovered`.
pub fn lower_bound(incidence: &[BitSet], uncovered: &BitSet, start: usize) -> Option<usize> {
    let n = uncovered.count();
    if n == 0 {
        return Some(0);
    }
    let best = incidence[start..].iter().map(|s| s.intersection_count(uncovered)).max().unwrap_or(0);
    (best > 0).then(|| n.div_ceil(best))
}

struct Search<'a> {
    sets: &'a [BitSet],
    /// For each point, candidates containing it.
    by_point: Vec<Vec<usize>>,
    best: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn branch(&mut self, uncovered: &BitSet, chosen: &mut Vec<usize>) {
        self.nodes += 1;
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let Some(lb) = lower_bound(self.sets, uncovered, 0) else { return };
        if chosen.len() + lb >= self.best.len() {
            return;
        }
        // least-covered uncovered point, lowest index on ties
        let point = uncovered
            .iter()
            .min_by_key(|&p| (self.by_point[p].len(), p))
            .expect("uncovered is nonempty");
        let mut options: Vec<(usize, usize)> = self.by_point[point]
            .iter()
            .map(|&c| (self.sets[c].intersection_count(uncovered), c))
            .collect();
        options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, c) in options {
            chosen.push(c);
            let rest = uncovered.difference(&self.sets[c]);
            self.branch(&rest, chosen);
            chosen.pop();
        }
    }
}

fn greedy(sets: &[BitSet], all: &BitSet) -> Vec<usize> {
    let mut uncovered = all.clone();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let (gain, c) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.intersection_count(&uncovered), i))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .expect("instance has candidates");
        debug_assert!(gain > 0);
        chosen.push(c);
        uncovered = uncovered.difference(&sets[c]);
    }
    chosen
}

/// Depth-first search over ascending index sets of size `size`; the first
/// cover found is the lexicographically least.
fn lex_least(sets: &[BitSet], uncovered: &BitSet, start: usize, size: usize, chosen: &mut Vec<usize>) -> bool {
    if uncovered.is_empty() {
        return true;
    }
    let remaining = size - chosen.len();
    if remaining == 0 || start >= sets.len() {
        return false;
    }
    match lower_bound(sets, uncovered, start) {
        Some(lb) if lb <= remaining => {}
        _ => return false,
    }
    let first = uncovered.first().expect("nonempty");
    for c in start..sets.len() {
        // the lowest uncovered point must be covered by c or a later choice
        if !sets[c..].iter().any(|s| s.contains(first)) {
            break;
        }
        chosen.push(c);
        if lex_least(sets, &uncovered.difference(&sets[c]), c + 1, size, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Exact minimum set cover: greedy upper bound, then branch and bound on
/// the least-covered point with candidates in descending gain. The witness
/// is re-derived as the lexicographically least cover at the optimum.
pub fn min_set_cover(inst: &IncidenceInstance) -> Result<SetCoverSolution, SolverError> {
    let n = inst.num_points();
    inst.validate(n)?;
    let sets = &inst.incidence;
    let all = BitSet::full(n);
    if n == 0 {
        return Ok(SetCoverSolution { optimum: 0, chosen: Vec::new(), exhaustive: true, nodes_explored: 1 });
    }
    let mut by_point = vec![Vec::new(); n];
    for (c, s) in sets.iter().enumerate() {
        for p in s.iter() {
            by_point[p].push(c);
        }
    }
    let mut search = Search { sets, by_point, best: greedy(sets, &all), nodes: 0 };
    search.branch(&all, &mut Vec::new());
    let optimum = search.best.len();

    let mut chosen = Vec::with_capacity(optimum);
    if !lex_least(sets, &all, 0, optimum, &mut chosen) {
        return Err(CoverError::Invariant("no cover of optimal size on replay".into()).into());
    }
    Ok(SetCoverSolution { optimum, chosen, exhaustive: true, nodes_explored: search.nodes })
}

/// A covering number together with an optimal family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub optimum: usize,
    pub witness: CoverFamily,
    pub exhaustive: bool,
    #[serde(rename = "nodes")]
    pub nodes_explored: u64,
    #[serde(skip)]
    pub justification: Option<&'static str>,
}

const MINIMUM_IS_IRREDUNDANT: &str =
    "a minimum cover is irredundant: dropping a redundant member would give a smaller cover; hence ILC = LC and IAC = AC for finite instances";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Fail unless the optimum matches the closed form (`q + 1` linear, `q` affine).
    pub self_check: bool,
    pub limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { self_check: false, limit: instance_limit() }
    }
}

/// Closed-form covering number: `q + 1` for linear, `q` for affine.
pub fn expected_optimum(q: usize, kind: CoverKind) -> usize {
    match kind {
        CoverKind::Linear => q + 1,
        CoverKind::Affine => q,
    }
}

fn solve(field: &FieldSpec, d: usize, kind: CoverKind, opts: &SolveOptions) -> Result<CoverResult, SolverError> {
    let inst = build_instance_with_limit(field, d, kind, opts.limit)?;
    let sol = min_set_cover(&inst)?;
    let witness = inst.family(&sol.chosen)?;
    debug_assert!(is_cover(&witness).unwrap_or(false));
    if opts.self_check {
        let expected = expected_optimum(field.order(), kind);
        if sol.optimum != expected {
            return Err(SolverError::SelfCheck { expected, found: sol.optimum });
        }
    }
    Ok(CoverResult {
        optimum: sol.optimum,
        witness,
        exhaustive: sol.exhaustive,
        nodes_explored: sol.nodes_explored,
        justification: None,
    })
}

fn irredundant(mut r: CoverResult) -> Result<CoverResult, SolverError> {
    if !is_irredundant(&r.witness)? {
        return Err(SolverError::RedundantWitness);
    }
    r.justification = Some(MINIMUM_IS_IRREDUNDANT);
    Ok(r)
}

pub fn lc_with(field: &FieldSpec, d: usize, opts: &SolveOptions) -> Result<CoverResult, SolverError> {
    solve(field, d, CoverKind::Linear, opts)
}

pub fn ilc_with(field: &FieldSpec, d: usize, opts: &SolveOptions) -> Result<CoverResult, SolverError> {
    irredundant(lc_with(field, d, opts)?)
}

pub fn ac_with(field: &FieldSpec, d: usize, opts: &SolveOptions) -> Result<CoverResult, SolverError> {
    solve(field, d, CoverKind::Affine, opts)
}

pub fn iac_with(field: &FieldSpec, d: usize, opts: &SolveOptions) -> Result<CoverResult, SolverError> {
    irredundant(ac_with(field, d, opts)?)
}

/// Linear covering number of `F^d`.
pub fn lc(field: &FieldSpec, d: usize) -> Result<CoverResult, SolverError> {
    lc_with(field, d, &SolveOptions::default())
}

/// Irredundant linear covering number: the minimum cover, checked irredundant.
pub fn ilc(field: &FieldSpec, d: usize) -> Result<CoverResult, SolverError> {
    ilc_with(field, d, &SolveOptions::default())
}

pub fn ac(field: &FieldSpec, d: usize) -> Result<CoverResult, SolverError> {
    ac_with(field, d, &SolveOptions::default())
}

pub fn iac(field: &FieldSpec, d: usize) -> Result<CoverResult, SolverError> {
    iac_with(field, d, &SolveOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub value: usize,
    pub expected: usize,
    pub pass: bool,
}

impl Cell {
    fn new(value: usize, expected: usize) -> Self {
        Cell { value, expected, pass: value == expected }
    }
}

/// One dimension of the grid; linear cells are absent at `d = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremRow {
    pub dim: usize,
    pub lc: Option<Cell>,
    pub ilc: Option<Cell>,
    pub ac: Cell,
    pub iac: Cell,
}

impl TheoremRow {
    pub fn pass(&self) -> bool {
        [self.lc, self.ilc, Some(self.ac), Some(self.iac)].iter().flatten().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub field: String,
    pub q: usize,
    pub rows: Vec<TheoremRow>,
    pub pass: bool,
}

/// Computes LC, ILC (for `d >= 2`) and AC, IAC for `1 <= d <= d_max` and
/// compares them with `q + 1, q + 1, q, q`.
pub fn verify_main_theorem(field: &FieldSpec, d_max: usize) -> Result<TheoremReport, SolverError> {
    verify_main_theorem_with(field, d_max, &SolveOptions::default())
}

pub fn verify_main_theorem_with(
    field: &FieldSpec,
    d_max: usize,
    opts: &SolveOptions,
) -> Result<TheoremReport, SolverError> {
    let q = field.order();
    let opts = SolveOptions { self_check: false, ..*opts };
    let mut rows = Vec::new();
    for d in 1..=d_max {
        let (lc_cell, ilc_cell) = if d >= 2 {
            let l = lc_with(field, d, &opts)?;
            let i = irredundant(l.clone())?;
            (Some(Cell::new(l.optimum, q + 1)), Some(Cell::new(i.optimum, q + 1)))
        } else {
            (None, None)
        };
        let a = ac_with(field, d, &opts)?;
        let ia = irredundant(a.clone())?;
        rows.push(TheoremRow {
            dim: d,
            lc: lc_cell,
            ilc: ilc_cell,
            ac: Cell::new(a.optimum, q),
            iac: Cell::new(ia.optimum, q),
        });
    }
    let pass = rows.iter().all(TheoremRow::pass);
    Ok(TheoremReport { field: field.to_string(), q, rows, pass })
}
