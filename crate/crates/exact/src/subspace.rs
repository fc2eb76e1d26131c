//! Subspaces of `F_q^n` in canonical reduced row-echelon form.
//!
//! Two subspaces are equal exactly when their echelon bases coincide, so
//! lattice identities reduce to `==`.

use crate::error::AlgebraError;
use crate::field::{FieldCtx, FieldScalar, Ring};
use crate::matrix::{kernel, rref, Matrix};

#[derive(Clone, Debug)]
pub struct Subspace {
    field: FieldCtx,
    ambient: usize,
    basis: Matrix<FieldScalar>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Eq for Subspace {}

fn mismatch(a: usize, b: usize) -> AlgebraError {
    AlgebraError::DimensionMismatch(format!("ambient dimensions {a} and {b}"))
}

impl Subspace {
    pub fn zero(field: &FieldCtx, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: &FieldCtx, ambient: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(field: &FieldCtx, m: &Matrix<FieldScalar>) -> Self {
        let ech = rref(field, m);
        Subspace { field: field.clone(), ambient: m.cols(), basis: ech.basis(), pivots: ech.pivots }
    }

    /// Span of the given vectors, each of length `ambient`.
    pub fn span(field: &FieldCtx, ambient: usize, vectors: Vec<Vec<FieldScalar>>) -> Self {
        Self::row_space(field, &Matrix::from_rows(ambient, vectors))
    }

    /// Column space of `m`.
    pub fn column_space(field: &FieldCtx, m: &Matrix<FieldScalar>) -> Self {
        Self::row_space(field, &m.transpose())
    }

    /// Null space `{x : m x = 0}`.
    pub fn kernel_of(field: &FieldCtx, m: &Matrix<FieldScalar>) -> Self {
        Self::row_space(field, &kernel(field, m))
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ambient
    }

    /// Echelon basis, one vector per row.
    pub fn basis(&self) -> &Matrix<FieldScalar> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vec<FieldScalar>> {
        self.basis.row_vecs()
    }

    /// `v` minus its component along the echelon basis.
    pub fn reduce(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        let f = &self.field;
        let mut w = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(k).iter().enumerate().skip(p) {
                if !b.is_zero() {
                    w[j] = f.sub(&w[j], &f.mul(&c, b));
                }
            }
        }
        w
    }

    pub fn contains_vector(&self, v: &[FieldScalar]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p]).collect())
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, AlgebraError> {
        if self.ambient != other.ambient {
            return Err(mismatch(self.ambient, other.ambient));
        }
        Ok((0..other.dim()).all(|i| self.contains_vector(other.basis.row(i))))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, AlgebraError> {
        if self.ambient != other.ambient {
            return Err(mismatch(self.ambient, other.ambient));
        }
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        Ok(Subspace::row_space(&self.field, &self.basis.vstack(&other.basis)))
    }

    /// Intersection via the kernel of the stacked system `x A = y B`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, AlgebraError> {
        if self.ambient != other.ambient {
            return Err(mismatch(self.ambient, other.ambient));
        }
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let f = &self.field;
        let a = self.dim();
        let stacked = self.basis.vstack(&other.basis.scale(&f.neg(&FieldScalar::ONE), f));
        let ker = kernel(f, &stacked.transpose());
        let vectors = (0..ker.rows())
            .map(|i| {
                let coeffs = &ker.row(i)[..a];
                let mut v = vec![FieldScalar::ZERO; self.ambient];
                for (c, k) in coeffs.iter().zip(0..a) {
                    if c.is_zero() {
                        continue;
                    }
                    for (j, b) in self.basis.row(k).iter().enumerate() {
                        v[j] = f.add(&v[j], &f.mul(c, b));
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::span(f, self.ambient, vectors))
    }

    /// Annihilator under the standard dot pairing.
    pub fn perp(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(&self.field, self.ambient);
        }
        Subspace::kernel_of(&self.field, &self.basis)
    }

    /// `{m v : v in self}` for an `n x ambient` matrix `m`.
    pub fn image_under(&self, m: &Matrix<FieldScalar>) -> Result<Subspace, AlgebraError> {
        if m.cols() != self.ambient {
            return Err(mismatch(m.cols(), self.ambient));
        }
        let f = &self.field;
        Ok(Subspace::row_space(f, &self.basis.mul(&m.transpose(), f)))
    }

    /// `{v : m v in target}` for a `target.ambient x n` matrix `m`.
    pub fn preimage(m: &Matrix<FieldScalar>, target: &Subspace) -> Result<Subspace, AlgebraError> {
        if m.rows() != target.ambient {
            return Err(mismatch(m.rows(), target.ambient));
        }
        let f = &target.field;
        let annihilator = target.perp();
        if annihilator.is_zero() {
            return Ok(Subspace::full(f, m.cols()));
        }
        Ok(Subspace::kernel_of(f, &annihilator.basis.mul(m, f)))
    }

    pub fn is_invariant(&self, mats: &[Matrix<FieldScalar>]) -> bool {
        let f = &self.field;
        mats.iter().all(|m| {
            (0..self.dim()).all(|i| self.contains_vector(&m.mul_vec(self.basis.row(i), f)))
        })
    }

    /// Basis vectors of `self` completing a basis of `bottom`: echelon rows of
    /// `self` taken in order whenever independent of what came before.
    pub fn complement_of(&self, bottom: &Subspace) -> Result<Vec<Vec<FieldScalar>>, AlgebraError> {
        if !self.contains(bottom)? {
            return Err(AlgebraError::DimensionMismatch("bottom is not contained in top".into()));
        }
        let mut acc = bottom.clone();
        let mut out = Vec::new();
        for i in 0..self.dim() {
            let v = self.basis.row(i);
            if !acc.contains_vector(v) {
                out.push(v.to_vec());
                acc = acc.sum(&Subspace::span(&self.field, self.ambient, vec![v.to_vec()]))?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(f: &FieldCtx, n: usize, i: usize) -> Vec<FieldScalar> {
        let mut v = vec![FieldScalar::ZERO; n];
        v[i] = f.one();
        v
    }

    #[test]
    fn sum_of_coordinate_lines() {
        let f = FieldCtx::prime(2).unwrap();
        let a = Subspace::span(&f, 3, vec![e(&f, 3, 0)]);
        let b = Subspace::span(&f, 3, vec![e(&f, 3, 1)]);
        let s = a.sum(&b).unwrap();
        assert_eq!(s, Subspace::span(&f, 3, vec![e(&f, 3, 0), e(&f, 3, 1)]));
        assert_eq!(a.intersect(&b).unwrap(), Subspace::zero(&f, 3));
    }

    #[test]
    fn double_perp_and_self_intersection() {
        let f = FieldCtx::prime(3).unwrap();
        let v = Subspace::span(&f, 4, vec![vec![f.from_int(1), f.from_int(2), f.from_int(0), f.from_int(1)]]);
        assert_eq!(v.perp().perp(), v);
        assert_eq!(v.intersect(&v).unwrap(), v);
        assert_eq!(v.dim() + v.perp().dim(), 4);
    }

    #[test]
    fn ambient_mismatch_is_error() {
        let f = FieldCtx::prime(3).unwrap();
        assert!(Subspace::zero(&f, 2).sum(&Subspace::zero(&f, 3)).is_err());
    }

    #[test]
    fn complement_completes_basis() {
        let f = FieldCtx::prime(5).unwrap();
        let top = Subspace::full(&f, 3);
        let bottom = Subspace::span(&f, 3, vec![vec![f.from_int(1), f.from_int(1), f.from_int(0)]]);
        let comp = top.complement_of(&bottom).unwrap();
        assert_eq!(comp.len(), 2);
        let all = bottom.sum(&Subspace::span(&f, 3, comp)).unwrap();
        assert!(all.is_full());
    }
}
