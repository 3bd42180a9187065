use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// The common `+1` eigenspace of commuting Z-type Paulis, as `{A t ⊕ b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZBlockAffine {
    n: usize,
    /// Columns of `A`.
    cols: Vec<BitVec>,
    b: BitVec,
    /// `t_j` equals bit `free[j]` of any member `A t ⊕ b`.
    free: Vec<usize>,
}

/// Parametrizes the bitstrings stabilized by every row of a Z-block.
pub fn zblock_to_affine(n: usize, s_z: &[PauliString]) -> Result<ZBlockAffine> {
    let mut m = BitMatrix::zeros(0, n);
    let mut rhs = BitVec::zeros(s_z.len());
    for (k, row) in s_z.iter().enumerate() {
        if row.n() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: row.n(),
            });
        }
        if !row.x_bits().is_zero() {
            return Err(Error::InvalidInput("Z-block row has X support".into()));
        }
        let sign = row.sign().ok_or_else(|| {
            Error::InvalidInput("Z-block row is not Hermitian".into())
        })?;
        m.push_row(row.z_bits().clone());
        rhs.set(k, sign < 0);
    }
    let (b, kernel) = m.solve(&rhs).ok_or_else(|| {
        Error::InvalidInput("Z-block signs are inconsistent (group contains -I)".into())
    })?;
    if kernel.len() != n - s_z.len() {
        return Err(Error::InvalidInput("Z-block rows are dependent".into()));
    }
    // `solve` emits one kernel vector per non-pivot column, in column order
    let mut reduced = m.clone();
    let pivots = reduced.row_reduce();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    Ok(ZBlockAffine {
        n,
        cols: kernel,
        b,
        free,
    })
}

impl ZBlockAffine {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.cols.len()
    }

    pub fn offset(&self) -> &BitVec {
        &self.b
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.cols
    }

    /// `A` as an `n × r` matrix.
    pub fn a_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.n, self.cols.clone()).transpose()
    }

    /// `A t ⊕ b`.
    pub fn point(&self, t: &BitVec) -> BitVec {
        let mut x = self.b.clone();
        for j in t.iter_ones() {
            x.xor_assign(&self.cols[j]);
        }
        x
    }

    /// Coordinates of a member of the subspace, `None` if `x` is outside it.
    pub fn coordinates(&self, x: &BitVec) -> Option<BitVec> {
        let t = BitVec::from_bools(&self.free.iter().map(|&f| x.get(f)).collect::<Vec<_>>());
        (self.point(&t) == *x).then_some(t)
    }
}
