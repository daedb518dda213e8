use num_bigint::BigInt;
use num_traits::Zero;

use super::{primitive_integer_vector, ExactqError, QMatrix, Rational};

/// A linear subspace of `Q^ambient`, stored canonically: the basis matrix is
/// the reduced row-echelon form of any spanning set, with zero rows dropped.
/// Two `Subspace` values are equal iff they represent the same linear space,
/// which also makes them hashable for lattice bookkeeping.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: QMatrix,
}

impl Subspace {
    /// Canonicalize a spanning set (rows of `m`) into a subspace.
    pub fn from_spanning_rows(m: &QMatrix) -> Subspace {
        let r = m.rref();
        let mut rows = Vec::with_capacity(r.rank);
        for i in 0..r.rank {
            rows.push(r.rref.row(i).to_vec());
        }
        Subspace { ambient: m.cols(), basis: QMatrix::from_rows_with_cols(rows, m.cols()) }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: QMatrix::from_rows_with_cols(Vec::new(), ambient) }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, basis: QMatrix::identity(ambient) }
    }

    /// Kernel `{x : Mx = 0}` of a matrix, as a canonical subspace.
    pub fn nullspace(m: &QMatrix) -> Subspace {
        let r = m.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; m.cols()];
            for (row, &col) in r.pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut rows = Vec::new();
        for free in 0..m.cols() {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![Rational::zero(); m.cols()];
            v[free] = Rational::from(BigInt::from(1));
            for (col, &pr) in pivot_set.iter().enumerate() {
                if let Some(row) = pr {
                    v[col] = -r.rref[(row, free)].clone();
                }
            }
            rows.push(v);
        }
        Subspace::from_spanning_rows(&QMatrix::from_rows_with_cols(rows, m.cols()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical RREF basis, one row per dimension.
    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    /// `self ∩ other`, computed through the annihilators: a vector lies in
    /// both spaces iff it is killed by both orthogonal complements.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, ExactqError> {
        if self.ambient != other.ambient {
            return Err(ExactqError::AmbientMismatch(self.ambient, other.ambient));
        }
        let n1 = self.complement();
        let n2 = other.complement();
        Ok(Subspace::nullspace(&n1.basis.stack(&n2.basis)))
    }

    /// Span of the union of the two spaces.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, ExactqError> {
        if self.ambient != other.ambient {
            return Err(ExactqError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(Subspace::from_spanning_rows(&self.basis.stack(&other.basis)))
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, ExactqError> {
        if self.ambient != other.ambient {
            return Err(ExactqError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(self.basis.stack(&other.basis).rank() == self.dim())
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let single = QMatrix::from_rows_with_cols(vec![v.to_vec()], self.ambient);
        self.basis.stack(&single).rank() == self.dim()
    }

    /// Orthogonal complement: the nullspace of the basis matrix.
    pub fn complement(&self) -> Subspace {
        Subspace::nullspace(&self.basis)
    }

    /// Image under an invertible-or-not linear map `a` (columns = ambient).
    pub fn map(&self, a: &QMatrix) -> Subspace {
        assert_eq!(a.cols(), self.ambient);
        Subspace::from_spanning_rows(&(&self.basis * &a.transpose()))
    }

    /// For one-dimensional subspaces: the primitive integer direction vector
    /// (cleared denominators, content 1, first nonzero entry positive).
    pub fn primitive_direction(&self) -> Option<Vec<BigInt>> {
        if self.dim() != 1 {
            return None;
        }
        primitive_integer_vector(self.basis.row(0))
    }

    /// A deterministic "generic" point of the subspace: the combination of
    /// basis rows with coefficients 1, 7, 49, ... (distinct powers avoid the
    /// proper subvarieties met in the gradient checks).
    pub fn generic_point(&self) -> Vec<Rational> {
        let mut pt = vec![Rational::zero(); self.ambient];
        let mut c = Rational::from(BigInt::from(1));
        let seven = Rational::from(BigInt::from(7));
        for i in 0..self.dim() {
            for j in 0..self.ambient {
                let v = &pt[j] + &(&c * &self.basis[(i, j)]);
                pt[j] = v;
            }
            c = &c * &seven;
        }
        pt
    }
}
