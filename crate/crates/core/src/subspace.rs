//! Canonical linear and affine subspaces of `F_q^d`, projective points,
//! and (affine) hyperplane enumeration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, FieldSpec};
use crate::linalg::{LinalgError, Matrix, Vector};

/// Largest point set [`LinearSubspace::points`] will materialise.
pub const POINT_LIMIT: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("vector of length {found} does not live in F^{expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: {expected} vs {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("enumeration of {size} points exceeds the limit of {limit}")]
    Guardrail { size: u128, limit: usize },
    #[error("subspace of dimension {dim} in F^{ambient} is not a hyperplane")]
    NotHyperplane { dim: usize, ambient: usize },
    #[error("ambient dimension must be at least 1")]
    ZeroAmbient,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `q^e`, or `None` on overflow.
pub(crate) fn checked_size(q: usize, e: usize) -> Option<usize> {
    q.checked_pow(u32::try_from(e).ok()?)
}

pub(crate) fn guard(q: usize, e: usize, limit: usize) -> Result<usize, SubspaceError> {
    match checked_size(q, e) {
        Some(n) if n <= limit => Ok(n),
        _ => Err(SubspaceError::Guardrail {
            size: (q as u128).saturating_pow(e as u32),
            limit,
        }),
    }
}

/// A linear subspace stored by its RREF basis (no zero rows). Structural
/// equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSubspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl LinearSubspace {
    pub fn span(field: &FieldSpec, ambient: usize, vectors: &[Vector]) -> Result<Self, SubspaceError> {
        for v in vectors {
            if v.len() != ambient {
                return Err(SubspaceError::DimensionMismatch { expected: ambient, found: v.len() });
            }
        }
        let m = Matrix::from_rows(field, ambient, vectors)?;
        let r = m.rref();
        Ok(LinearSubspace { ambient, basis: r.matrix.truncate_rows(r.rank), pivots: r.pivots })
    }

    pub fn zero(field: &FieldSpec, ambient: usize) -> Self {
        Self::span(field, ambient, &[]).expect("empty span is valid")
    }

    pub fn full(field: &FieldSpec, ambient: usize) -> Self {
        let rows: Vec<Vector> = (0..ambient).map(|i| Vector::unit(ambient, i)).collect();
        Self::span(field, ambient, &rows).expect("unit vectors have ambient length")
    }

    /// `{x : f . x = 0}` for a nonzero functional `f`.
    pub fn kernel_of(field: &FieldSpec, functional: &Vector) -> Result<Self, SubspaceError> {
        let m = Matrix::from_rows(field, functional.len(), std::slice::from_ref(functional))?;
        Ok(Self::from_rref_rows(m.kernel()))
    }

    fn from_rref_rows(basis: Matrix) -> Self {
        let pivots = basis
            .to_rows()
            .iter()
            .map(|r| r.0.iter().position(|c| !c.is_zero()).expect("rref rows are nonzero"))
            .collect();
        LinearSubspace { ambient: basis.cols(), basis, pivots }
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_proper(&self) -> bool {
        self.dim() < self.ambient
    }

    pub fn is_hyperplane(&self) -> bool {
        self.dim() + 1 == self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, v: &Vector) -> Result<(), SubspaceError> {
        if v.len() != self.ambient {
            return Err(SubspaceError::DimensionMismatch { expected: self.ambient, found: v.len() });
        }
        Ok(())
    }

    /// Subtracts off the pivot coordinates of `v`; the result is zero iff `v`
    /// lies in the subspace.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let f = self.field();
        let mut out = v.clone();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = out.0[pc];
            if c.is_zero() {
                continue;
            }
            for j in 0..self.ambient {
                out.0[j] = f.sub(out.0[j], f.mul(c, self.basis.get(i, j)));
            }
        }
        out
    }

    pub fn contains(&self, v: &Vector) -> Result<bool, SubspaceError> {
        self.check(v)?;
        Ok(self.reduce(v).is_zero())
    }

    pub fn is_subspace_of(&self, other: &LinearSubspace) -> bool {
        self.basis.to_rows().iter().all(|r| other.reduce(r).is_zero())
    }

    /// All points, ordered lexicographically by spanning coefficients.
    pub fn points(&self) -> Result<Vec<Vector>, SubspaceError> {
        let q = self.field().order();
        let n = guard(q, self.dim(), POINT_LIMIT)?;
        let f = self.field();
        let rows = self.basis.to_rows();
        Ok((0..n)
            .map(|i| {
                let coeffs = Vector::from_index(i, q, self.dim());
                rows.iter().zip(&coeffs.0).fold(Vector::zero(self.ambient), |acc, (r, &c)| {
                    acc.add(f, &r.scale(f, c))
                })
            })
            .collect())
    }

    /// Rows spanning the annihilator: the subspace is the common kernel.
    pub fn equations(&self) -> Matrix {
        if self.dim() == 0 {
            return Matrix::identity(self.field(), self.ambient);
        }
        self.basis.kernel()
    }

    pub fn intersect(&self, other: &LinearSubspace) -> Result<LinearSubspace, SubspaceError> {
        if self.field() != other.field() {
            return Err(field_mismatch(self.field(), other.field()));
        }
        if other.ambient != self.ambient {
            return Err(SubspaceError::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        let mut rows = self.equations().to_rows();
        rows.extend(other.equations().to_rows());
        let m = Matrix::from_rows(self.field(), self.ambient, &rows)?;
        Ok(Self::from_rref_rows(m.kernel()))
    }

    /// The image of this subspace under `map` (which must have `ambient` columns).
    pub fn image(&self, map: &Matrix) -> Result<LinearSubspace, SubspaceError> {
        let imgs = self
            .basis
            .to_rows()
            .iter()
            .map(|r| map.apply(r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::span(self.field(), map.rows(), &imgs)
    }
}

fn field_mismatch(a: &FieldSpec, b: &FieldSpec) -> SubspaceError {
    SubspaceError::FieldMismatch { expected: a.to_string(), found: b.to_string() }
}

/// A translate `basepoint + direction`. The basepoint has zero entries at
/// every pivot column of the direction, which makes it canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    direction: LinearSubspace,
    basepoint: Vector,
}

impl AffineSubspace {
    pub fn new(direction: LinearSubspace, point: &Vector) -> Result<Self, SubspaceError> {
        direction.check(point)?;
        let basepoint = direction.reduce(point);
        Ok(AffineSubspace { direction, basepoint })
    }

    pub fn from_linear(direction: LinearSubspace) -> Self {
        let basepoint = Vector::zero(direction.ambient);
        AffineSubspace { direction, basepoint }
    }

    /// `{x : f . x = c}` for a nonzero functional `f`.
    pub fn from_equation(field: &FieldSpec, functional: &Vector, c: Elem) -> Result<Self, SubspaceError> {
        let m = Matrix::from_rows(field, functional.len(), std::slice::from_ref(functional))?;
        let (x, kernel) = m
            .solve(&Vector(vec![c]))?
            .expect("a nonzero functional is surjective");
        Self::new(LinearSubspace::from_rref_rows(kernel), &x)
    }

    pub fn field(&self) -> &FieldSpec {
        self.direction.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.direction.ambient
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn direction(&self) -> &LinearSubspace {
        &self.direction
    }

    pub fn basepoint(&self) -> &Vector {
        &self.basepoint
    }

    pub fn is_proper(&self) -> bool {
        self.direction.is_proper()
    }

    /// True when the subspace passes through the origin.
    pub fn is_linear(&self) -> bool {
        self.basepoint.is_zero()
    }

    pub fn contains(&self, v: &Vector) -> Result<bool, SubspaceError> {
        self.direction.check(v)?;
        Ok(self.direction.reduce(&v.sub(self.field(), &self.basepoint)).is_zero())
    }

    pub fn points(&self) -> Result<Vec<Vector>, SubspaceError> {
        let f = self.field();
        Ok(self.direction.points()?.into_iter().map(|p| p.add(f, &self.basepoint)).collect())
    }

    /// `(N, c)` with the subspace equal to `{x : N x = c}`.
    pub fn equations(&self) -> (Matrix, Vector) {
        let n = self.direction.equations();
        let c = n.apply(&self.basepoint).expect("basepoint has ambient length");
        (n, c)
    }
}

pub fn intersect_affine(
    a: &AffineSubspace,
    b: &AffineSubspace,
) -> Result<Option<AffineSubspace>, SubspaceError> {
    if a.field() != b.field() {
        return Err(field_mismatch(a.field(), b.field()));
    }
    if a.ambient_dim() != b.ambient_dim() {
        return Err(SubspaceError::DimensionMismatch { expected: a.ambient_dim(), found: b.ambient_dim() });
    }
    let (na, ca) = a.equations();
    let (nb, cb) = b.equations();
    let mut rows = na.to_rows();
    rows.extend(nb.to_rows());
    let mut rhs = ca.0;
    rhs.extend(cb.0);
    let m = Matrix::from_rows(a.field(), a.ambient_dim(), &rows)?;
    Ok(match m.solve(&Vector(rhs))? {
        None => None,
        Some((x, kernel)) => Some(AffineSubspace::new(LinearSubspace::from_rref_rows(kernel), &x)?),
    })
}

/// A nonzero vector scaled so its first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectivePoint(Vector);

impl ProjectivePoint {
    pub fn normalize(field: &FieldSpec, v: &Vector) -> Option<Self> {
        let lead = *v.0.iter().find(|c| !c.is_zero())?;
        let inv = field.inv(lead).expect("lead is nonzero");
        Some(ProjectivePoint(v.scale(field, inv)))
    }

    pub fn rep(&self) -> &Vector {
        &self.0
    }
}

/// `(q^d - 1) / (q - 1)`, the number of points (and hyperplanes) of `PG(d-1, q)`.
pub fn count_hyperplanes(q: usize, d: usize) -> usize {
    (0..d).map(|i| q.pow(i as u32)).sum()
}

/// Normalized nonzero vectors of `F^d` in lexicographic order.
pub fn projective_points(field: &FieldSpec, d: usize) -> Vec<ProjectivePoint> {
    let q = field.order();
    let mut out = Vec::with_capacity(count_hyperplanes(q, d));
    // leading 1 at position `lead`, zeros before it, anything after
    for lead in (0..d).rev() {
        let tail = d - lead - 1;
        for i in 0..q.pow(tail as u32) {
            let mut v = Vector::zero(d);
            v.0[lead] = Elem::ONE;
            v.0[lead + 1..].copy_from_slice(&Vector::from_index(i, q, tail).0);
            out.push(ProjectivePoint(v));
        }
    }
    out
}

/// Normalized functionals in lexicographic order; these index hyperplanes.
pub fn normalized_functionals(field: &FieldSpec, d: usize) -> Vec<Vector> {
    projective_points(field, d).into_iter().map(|p| p.0).collect()
}

pub fn enumerate_hyperplanes(field: &FieldSpec, d: usize) -> Vec<LinearSubspace> {
    normalized_functionals(field, d)
        .iter()
        .map(|f| LinearSubspace::kernel_of(field, f).expect("functional has length d"))
        .collect()
}

/// Affine hyperplanes `{x : f . x = c}`, ordered by functional then by `c`.
pub fn enumerate_affine_hyperplanes(field: &FieldSpec, d: usize) -> Vec<AffineSubspace> {
    normalized_functionals(field, d)
        .iter()
        .flat_map(|f| {
            field
                .elements()
                .map(|c| AffineSubspace::from_equation(field, f, c).expect("functional has length d"))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// A pair of mutually inverse linear maps between a subspace `W` and `F^m`.
#[derive(Debug, Clone)]
pub struct SubspaceChart {
    /// `m x d`: reads off the pivot coordinates of a point of `W`.
    pub down: Matrix,
    /// `d x m`: columns are the RREF basis of `W`.
    pub up: Matrix,
}

impl SubspaceChart {
    pub fn for_subspace(w: &LinearSubspace) -> Self {
        let f = w.field();
        let mut down = Matrix::zeros(f, w.dim(), w.ambient);
        for (i, &pc) in w.pivots.iter().enumerate() {
            down.set(i, pc, Elem::ONE);
        }
        SubspaceChart { down, up: w.basis.transpose() }
    }

    pub fn to_coords(&self, v: &Vector) -> Result<Vector, SubspaceError> {
        Ok(self.down.apply(v)?)
    }

    pub fn from_coords(&self, y: &Vector) -> Result<Vector, SubspaceError> {
        Ok(self.up.apply(y)?)
    }
}

/// Identifies a hyperplane `W` of `F^d` with `F^{d-1}`.
pub fn coords_in_hyperplane(w: &LinearSubspace) -> Result<SubspaceChart, SubspaceError> {
    if !w.is_hyperplane() {
        return Err(SubspaceError::NotHyperplane { dim: w.dim(), ambient: w.ambient });
    }
    Ok(SubspaceChart::for_subspace(w))
}

/// JSON form of a (linear or affine) subspace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDoc {
    pub ambient: usize,
    pub field: String,
    pub basis: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<Vec<usize>>,
}

fn values(v: &Vector) -> Vec<usize> {
    v.0.iter().map(|c| c.value()).collect()
}

impl SubspaceDoc {
    pub fn linear(s: &LinearSubspace) -> Self {
        SubspaceDoc {
            ambient: s.ambient,
            field: s.field().to_string(),
            basis: s.basis.to_rows().iter().map(values).collect(),
            basepoint: None,
        }
    }

    pub fn affine(a: &AffineSubspace) -> Self {
        SubspaceDoc { basepoint: Some(values(&a.basepoint)), ..Self::linear(&a.direction) }
    }

    /// Canonicalises the document; a missing basepoint means the origin.
    pub fn to_affine(&self, field: &FieldSpec) -> Result<AffineSubspace, SubspaceError> {
        let declared: FieldSpec = self.field.parse().map_err(|_| SubspaceError::FieldMismatch {
            expected: field.to_string(),
            found: self.field.clone(),
        })?;
        if &declared != field {
            return Err(field_mismatch(field, &declared));
        }
        if self.ambient == 0 {
            return Err(SubspaceError::ZeroAmbient);
        }
        let rows = self
            .basis
            .iter()
            .map(|r| Vector::from_values(field, r))
            .collect::<Result<Vec<_>, _>>()?;
        let direction = LinearSubspace::span(field, self.ambient, &rows)?;
        match &self.basepoint {
            None => Ok(AffineSubspace::from_linear(direction)),
            Some(b) => AffineSubspace::new(direction, &Vector::from_values(field, b)?),
        }
    }
}
