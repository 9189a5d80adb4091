//! Dense vectors and matrices over a [`FieldSpec`], with reduced row
//! echelon form, kernels and linear solves.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot map onto F^{target} from F^{from}")]
    TargetTooLarge { from: usize, target: usize },
    #[error("entry {0} is not an element of the field")]
    BadEntry(usize),
}

/// A coordinate vector. Field context is carried by the enclosing structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<Elem>);

impl Vector {
    pub fn zero(len: usize) -> Self {
        Vector(vec![Elem::ZERO; len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.0[i] = Elem::ONE;
        v
    }

    pub fn from_values(field: &FieldSpec, values: &[usize]) -> Result<Self, LinalgError> {
        values
            .iter()
            .map(|&v| field.elem(v).ok_or(LinalgError::BadEntry(v)))
            .collect::<Result<Vec<_>, _>>()
            .map(Vector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn add(&self, field: &FieldSpec, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| field.add(a, b)).collect())
    }

    pub fn sub(&self, field: &FieldSpec, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| field.sub(a, b)).collect())
    }

    pub fn scale(&self, field: &FieldSpec, s: Elem) -> Vector {
        Vector(self.0.iter().map(|&a| field.mul(s, a)).collect())
    }

    pub fn dot(&self, field: &FieldSpec, other: &Vector) -> Elem {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Elem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
    }

    /// Position of this vector in the lexicographic enumeration of `F_q^d`
    /// (first coordinate most significant).
    pub fn index(&self, q: usize) -> usize {
        self.0.iter().fold(0, |acc, c| acc * q + c.value())
    }

    pub fn from_index(mut index: usize, q: usize, len: usize) -> Vector {
        let mut coords = vec![Elem::ZERO; len];
        for c in coords.iter_mut().rev() {
            *c = Elem((index % q) as u8);
            index /= q;
        }
        Vector(coords)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Every vector of `F_q^d` in lexicographic order.
pub fn all_vectors(q: usize, d: usize) -> impl Iterator<Item = Vector> {
    let total = q.pow(d as u32);
    (0..total).map(move |i| Vector::from_index(i, q, d))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("field", &self.field.to_string())
            .field("rows", &self.to_rows())
            .finish()
    }
}

/// Output of [`Matrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// Stacks `rows` (each of length `cols`) into a matrix.
    pub fn from_rows(field: &FieldSpec, cols: usize, rows: &[Vector]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(&r.0);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn from_values(field: &FieldSpec, rows: &[Vec<usize>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let vecs = rows
            .iter()
            .map(|r| Vector::from_values(field, r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(field, cols, &vecs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vector {
        Vector(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let v = (0..self.cols).fold(Elem::ZERO, |acc, i| {
                    f.add(acc, f.mul(self.get(r, i), other.get(i, c)))
                });
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(Vector((0..self.rows).map(|r| self.row(r).dot(&self.field, v)).collect()))
    }

    /// Reduced row echelon form with unit pivots.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, pr);
            let inv = f.inv(m.get(lead, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul(inv, m.get(lead, j));
                m.set(lead, j, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, c);
                if r == lead || factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(lead, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Drops rows at index `>= n`.
    pub fn truncate_rows(&self, n: usize) -> Matrix {
        let n = n.min(self.rows);
        Matrix {
            field: self.field.clone(),
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    /// Basis of `{x : M x = 0}` as rows, in reduced row echelon form.
    pub fn kernel(&self) -> Matrix {
        let Rref { matrix: r, pivots, .. } = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vector> = free
            .iter()
            .map(|&fc| {
                let mut x = Vector::zero(self.cols);
                x.0[fc] = Elem::ONE;
                for (i, &pc) in pivots.iter().enumerate() {
                    x.0[pc] = f.neg(r.get(i, fc));
                }
                x
            })
            .collect();
        let k = Matrix::from_rows(f, self.cols, &basis).expect("rows have matching length");
        let rr = k.rref();
        rr.matrix.truncate_rows(rr.rank)
    }

    /// Solves `M x = b`. Returns a particular solution (free variables zero)
    /// together with a kernel basis, or `None` if inconsistent.
    pub fn solve(&self, b: &Vector) -> Result<Option<(Vector, Matrix)>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b.0[r]);
        }
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = Vector::zero(self.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            x.0[pc] = matrix.get(i, self.cols);
        }
        Ok(Some((x, self.kernel())))
    }
}

pub fn rref(m: &Matrix) -> Rref {
    m.rref()
}

pub fn mat_apply(m: &Matrix, v: &Vector) -> Result<Vector, LinalgError> {
    m.apply(v)
}

/// The `m x d` coordinate projection `F^d -> F^m` onto the first `m`
/// coordinates.
pub fn surjection_to(field: &FieldSpec, d: usize, m: usize) -> Result<Matrix, LinalgError> {
    if d < m || m == 0 {
        return Err(LinalgError::TargetTooLarge { from: d, target: m });
    }
    let mut q = Matrix::zeros(field, m, d);
    for i in 0..m {
        q.set(i, i, Elem::ONE);
    }
    Ok(q)
}
