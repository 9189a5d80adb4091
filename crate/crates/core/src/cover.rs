//! Covering families of `F_q^d` by proper linear or affine subspaces:
//! verification, irredundancy, pruning, the standard constructions and
//! the private-point line witness.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldSpec;
use crate::linalg::{all_vectors, LinalgError, Matrix, Vector};
use crate::subspace::{
    coords_in_hyperplane, guard, AffineSubspace, LinearSubspace, SubspaceDoc, SubspaceError,
    POINT_LIMIT,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("member {0} is not a proper subspace")]
    ImproperMember(usize),
    #[error("member {0} does not pass through the origin but the family is linear")]
    NotThroughOrigin(usize),
    #[error("member {index} lives in F^{found}, expected F^{expected}")]
    AmbientMismatch { index: usize, expected: usize, found: usize },
    #[error("ambient dimension must be at least 1")]
    ZeroAmbient,
    #[error("the family does not cover the ambient space")]
    NotACover,
    #[error("member index {index} out of range for a family of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("member {0} has no private point")]
    NoPrivatePoint(usize),
    #[error("expected a {expected} family")]
    WrongKind { expected: CoverKind },
    #[error("map of rank {rank} is not onto F^{target}")]
    NotSurjective { rank: usize, target: usize },
    #[error("map has {found} rows but the family lives in F^{expected}")]
    MapShape { expected: usize, found: usize },
    #[error("member {0} contains the slicing hyperplane")]
    MemberContainsHyperplane(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverKind {
    Linear,
    Affine,
}

impl std::fmt::Display for CoverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoverKind::Linear => "linear",
            CoverKind::Affine => "affine",
        })
    }
}

/// An indexed family of proper subspaces of `F^d`. Linear members are
/// stored as affine subspaces through the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverFamily {
    field: FieldSpec,
    ambient: usize,
    kind: CoverKind,
    members: Vec<AffineSubspace>,
}

impl CoverFamily {
    pub fn new(
        field: &FieldSpec,
        ambient: usize,
        kind: CoverKind,
        members: Vec<AffineSubspace>,
    ) -> Result<Self, CoverError> {
        if ambient == 0 {
            return Err(CoverError::ZeroAmbient);
        }
        for (i, m) in members.iter().enumerate() {
            if m.field() != field {
                return Err(SubspaceError::FieldMismatch {
                    expected: field.to_string(),
                    found: m.field().to_string(),
                }
                .into());
            }
            if m.ambient_dim() != ambient {
                return Err(CoverError::AmbientMismatch { index: i, expected: ambient, found: m.ambient_dim() });
            }
            if !m.is_proper() {
                return Err(CoverError::ImproperMember(i));
            }
            if kind == CoverKind::Linear && !m.is_linear() {
                return Err(CoverError::NotThroughOrigin(i));
            }
        }
        Ok(CoverFamily { field: field.clone(), ambient, kind, members })
    }

    pub fn linear(field: &FieldSpec, ambient: usize, members: Vec<LinearSubspace>) -> Result<Self, CoverError> {
        let members = members.into_iter().map(AffineSubspace::from_linear).collect();
        Self::new(field, ambient, CoverKind::Linear, members)
    }

    pub fn affine(field: &FieldSpec, ambient: usize, members: Vec<AffineSubspace>) -> Result<Self, CoverError> {
        Self::new(field, ambient, CoverKind::Affine, members)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    pub fn members(&self) -> &[AffineSubspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The subfamily at the given indices, in the given order.
    pub fn subfamily(&self, indices: &[usize]) -> CoverFamily {
        CoverFamily {
            field: self.field.clone(),
            ambient: self.ambient,
            kind: self.kind,
            members: indices.iter().map(|&i| self.members[i].clone()).collect(),
        }
    }

    fn check_index(&self, index: usize) -> Result<(), CoverError> {
        if index >= self.members.len() {
            return Err(CoverError::IndexOutOfRange { index, len: self.members.len() });
        }
        Ok(())
    }

    /// For every vector of `F^d` (by lexicographic index), how many members
    /// contain it.
    pub fn coverage(&self) -> Result<Vec<u32>, CoverError> {
        let q = self.field.order();
        let total = guard(q, self.ambient, POINT_LIMIT)?;
        let mut counts = vec![0u32; total];
        for m in &self.members {
            for p in m.points()? {
                counts[p.index(q)] += 1;
            }
        }
        Ok(counts)
    }

    fn private_with(&self, counts: &[u32], index: usize) -> Result<Vec<Vector>, CoverError> {
        let q = self.field.order();
        let mut pts: Vec<Vector> = self.members[index]
            .points()?
            .into_iter()
            .filter(|p| counts[p.index(q)] == 1)
            .collect();
        pts.sort();
        Ok(pts)
    }

    fn covering_counts(&self) -> Result<Vec<u32>, CoverError> {
        let counts = self.coverage()?;
        if counts.contains(&0) {
            return Err(CoverError::NotACover);
        }
        Ok(counts)
    }
}

pub fn is_cover(c: &CoverFamily) -> Result<bool, CoverError> {
    Ok(!c.coverage()?.contains(&0))
}

/// Points of member `index` lying in no other member, in lexicographic order.
pub fn private_points(c: &CoverFamily, index: usize) -> Result<Vec<Vector>, CoverError> {
    c.check_index(index)?;
    let counts = c.covering_counts()?;
    c.private_with(&counts, index)
}

/// Irredundancy of a cover: every member owns a private point. Errors on
/// non-covers.
pub fn is_irredundant(c: &CoverFamily) -> Result<bool, CoverError> {
    Ok(redundant_members(c)?.is_empty())
}

/// Indices of members without a private point.
pub fn redundant_members(c: &CoverFamily) -> Result<Vec<usize>, CoverError> {
    let counts = c.covering_counts()?;
    let mut out = Vec::new();
    for i in 0..c.len() {
        if c.private_with(&counts, i)?.is_empty() {
            out.push(i);
        }
    }
    Ok(out)
}

/// Scans members in index order, dropping each one whose removal leaves a
/// cover.
pub fn prune_to_irredundant(c: &CoverFamily) -> Result<CoverFamily, CoverError> {
    let q = c.field.order();
    let mut counts = c.covering_counts()?;
    let mut keep = Vec::with_capacity(c.len());
    for (i, m) in c.members.iter().enumerate() {
        let pts = m.points()?;
        if pts.iter().any(|p| counts[p.index(q)] == 1) {
            keep.push(i);
        } else {
            for p in &pts {
                counts[p.index(q)] -= 1;
            }
        }
    }
    Ok(c.subfamily(&keep))
}

/// Findings of [`validate`]; `is_irredundant` is `None` for non-covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub is_cover: bool,
    pub is_irredundant: Option<bool>,
    /// Members equal to an earlier member.
    pub duplicates: Vec<usize>,
    /// Members without a private point (empty unless the family covers).
    pub redundant: Vec<usize>,
    /// Members that are a single point (the zero subspace, for linear families).
    pub zero_members: Vec<usize>,
}

pub fn validate(c: &CoverFamily) -> Result<ValidationReport, CoverError> {
    let duplicates = (0..c.len())
        .filter(|&i| c.members[..i].contains(&c.members[i]))
        .collect();
    let zero_members = (0..c.len()).filter(|&i| c.members[i].dim() == 0).collect();
    let covers = is_cover(c)?;
    let (is_irredundant, redundant) = if covers {
        let r = redundant_members(c)?;
        (Some(r.is_empty()), r)
    } else {
        (None, Vec::new())
    };
    Ok(ValidationReport { is_cover: covers, is_irredundant, duplicates, redundant, zero_members })
}

/// The `q + 1` lines through the origin of `F^2`: `y = a x` for each `a` in
/// element order, then `x = 0`.
pub fn lines_cover_plane(field: &FieldSpec) -> CoverFamily {
    let mut lines: Vec<LinearSubspace> = field
        .elements()
        .map(|a| {
            LinearSubspace::span(field, 2, &[Vector(vec![crate::field::Elem::ONE, a])])
                .expect("vector has length 2")
        })
        .collect();
    lines.push(LinearSubspace::span(field, 2, &[Vector::unit(2, 1)]).expect("vector has length 2"));
    CoverFamily::linear(field, 2, lines).expect("lines are proper")
}

/// Complete preimages of the members of `c` under the surjection `map`
/// (`m x d`, `m` the ambient dimension of `c`).
pub fn pullback_cover(c: &CoverFamily, map: &Matrix) -> Result<CoverFamily, CoverError> {
    if map.rows() != c.ambient {
        return Err(CoverError::MapShape { expected: c.ambient, found: map.rows() });
    }
    let rank = map.rank();
    if rank != c.ambient {
        return Err(CoverError::NotSurjective { rank, target: c.ambient });
    }
    let members = c
        .members
        .iter()
        .map(|m| {
            let (eqs, rhs) = m.equations();
            let pulled = eqs.mul(map)?;
            let (x, kernel) = pulled.solve(&rhs)?.ok_or_else(|| {
                CoverError::Invariant("preimage under a surjection is nonempty".into())
            })?;
            let dir = LinearSubspace::span(c.field(), map.cols(), &kernel.to_rows())?;
            Ok(AffineSubspace::new(dir, &x)?)
        })
        .collect::<Result<Vec<_>, CoverError>>()?;
    CoverFamily::new(&c.field, map.cols(), c.kind, members)
}

/// The `q` parallel affine hyperplanes `x_1 = c` of `F^d`.
pub fn parallel_affine_cover(field: &FieldSpec, d: usize) -> Result<CoverFamily, CoverError> {
    if d == 0 {
        return Err(CoverError::ZeroAmbient);
    }
    let first = Vector::unit(d, 0);
    let members = field
        .elements()
        .map(|c| AffineSubspace::from_equation(field, &first, c))
        .collect::<Result<Vec<_>, _>>()?;
    CoverFamily::affine(field, d, members)
}

/// A line through a private point `u` of one member, certifying that an
/// irredundant cover needs many members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThmBWitness {
    pub index: usize,
    pub u: Vector,
    pub v: Vector,
    pub line: Vec<Vector>,
    pub hits: Vec<usize>,
}

impl ThmBWitness {
    /// Members other than the chosen one that meet the line.
    pub fn others_hit(&self) -> usize {
        self.hits
            .iter()
            .enumerate()
            .filter(|&(i, &h)| i != self.index && h > 0)
            .count()
    }
}

fn witness_parts(c: &CoverFamily, index: usize) -> Result<(Vector, Vector), CoverError> {
    c.check_index(index)?;
    let counts = c.covering_counts()?;
    let u = c
        .private_with(&counts, index)?
        .into_iter()
        .next()
        .ok_or(CoverError::NoPrivatePoint(index))?;
    let member = &c.members[index];
    let mut v = None;
    for x in all_vectors(c.field.order(), c.ambient) {
        if !member.contains(&x)? {
            v = Some(x);
            break;
        }
    }
    let v = v.ok_or_else(|| CoverError::Invariant("proper member misses a vector".into()))?;
    Ok((u, v))
}

fn line_hits(c: &CoverFamily, line: &[Vector], skip: Option<&Vector>) -> Result<Vec<usize>, CoverError> {
    c.members
        .iter()
        .map(|m| {
            let mut n = 0;
            for p in line {
                if Some(p) != skip && m.contains(p)? {
                    n += 1;
                }
            }
            Ok(n)
        })
        .collect()
}

fn check_hits(w: &ThmBWitness) -> Result<(), CoverError> {
    if w.hits[w.index] != 0 {
        return Err(CoverError::Invariant(format!("line meets member {} off the private point", w.index)));
    }
    if let Some(i) = (0..w.hits.len()).find(|&i| i != w.index && w.hits[i] > 1) {
        return Err(CoverError::Invariant(format!("line meets member {i} twice")));
    }
    Ok(())
}

/// For an irredundant linear cover: `u` the least private point of member
/// `index`, `v` the least vector outside it, and the line `{t u + v}`.
/// The line misses member `index` and meets every other member at most
/// once, so at least `q` other members are needed.
pub fn thmb_witness(c: &CoverFamily, index: usize) -> Result<ThmBWitness, CoverError> {
    if c.kind != CoverKind::Linear {
        return Err(CoverError::WrongKind { expected: CoverKind::Linear });
    }
    let (u, v) = witness_parts(c, index)?;
    let f = &c.field;
    let line: Vec<Vector> = f.elements().map(|t| u.scale(f, t).add(f, &v)).collect();
    let hits = line_hits(c, &line, None)?;
    let w = ThmBWitness { index, u, v, line, hits };
    check_hits(&w)?;
    Ok(w)
}

/// Affine analogue on the line `{(1 - t) u + t v}`. `hits[index]` ignores
/// `u` itself, which is the only point the line shares with that member.
pub fn affine_thmb_witness(c: &CoverFamily, index: usize) -> Result<ThmBWitness, CoverError> {
    if c.kind != CoverKind::Affine {
        return Err(CoverError::WrongKind { expected: CoverKind::Affine });
    }
    let (u, v) = witness_parts(c, index)?;
    let f = &c.field;
    let dir = v.sub(f, &u);
    let line: Vec<Vector> = f.elements().map(|t| u.add(f, &dir.scale(f, t))).collect();
    let mut hits = line_hits(c, &line, None)?;
    hits[index] = line_hits(&c.subfamily(&[index]), &line, Some(&u))?[0];
    let w = ThmBWitness { index, u, v, line, hits };
    check_hits(&w)?;
    Ok(w)
}

/// Slices a linear family by a hyperplane `w` and re-expresses each slice in
/// coordinates on `w`, giving a family in `F^{d-1}`.
pub fn intersect_with_hyperplane(c: &CoverFamily, w: &LinearSubspace) -> Result<CoverFamily, CoverError> {
    if c.kind != CoverKind::Linear {
        return Err(CoverError::WrongKind { expected: CoverKind::Linear });
    }
    let chart = coords_in_hyperplane(w)?;
    if w.ambient_dim() != c.ambient {
        return Err(SubspaceError::DimensionMismatch { expected: c.ambient, found: w.ambient_dim() }.into());
    }
    let members = c
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let slice = m.direction().intersect(w)?;
            if slice.dim() == w.dim() {
                return Err(CoverError::MemberContainsHyperplane(i));
            }
            Ok(slice.image(&chart.down)?)
        })
        .collect::<Result<Vec<_>, CoverError>>()?;
    CoverFamily::linear(&c.field, c.ambient - 1, members)
}

/// JSON form of a [`CoverFamily`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFamilyDoc {
    pub field: String,
    pub ambient: usize,
    pub kind: CoverKind,
    pub members: Vec<SubspaceDoc>,
}

impl CoverFamilyDoc {
    pub fn from_family(c: &CoverFamily) -> Self {
        let members = c
            .members
            .iter()
            .map(|m| match c.kind {
                CoverKind::Linear => SubspaceDoc::linear(m.direction()),
                CoverKind::Affine => SubspaceDoc::affine(m),
            })
            .collect();
        CoverFamilyDoc { field: c.field.to_string(), ambient: c.ambient, kind: c.kind, members }
    }

    pub fn to_family(&self) -> Result<CoverFamily, CoverError> {
        let field: FieldSpec = self.field.parse().map_err(|_| SubspaceError::FieldMismatch {
            expected: "a prime power".into(),
            found: self.field.clone(),
        })?;
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if m.ambient != self.ambient {
                    return Err(CoverError::AmbientMismatch { index: i, expected: self.ambient, found: m.ambient });
                }
                Ok(m.to_affine(&field)?)
            })
            .collect::<Result<Vec<_>, CoverError>>()?;
        CoverFamily::new(&field, self.ambient, self.kind, members)
    }
}

impl Serialize for CoverFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CoverFamilyDoc::from_family(self).serialize(serializer)
    }
}
