use crate::error::{Error, Result};
use crate::pauli::PauliString;

use super::tableau::StabilizerTableau;

/// Generators split into an X-block (reduced echelon form on the x-parts) and
/// a Z-block (rows without X support, reduced on the z-parts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalTableau {
    pub n: usize,
    pub s_x: Vec<PauliString>,
    pub s_z: Vec<PauliString>,
    /// Leading X/Y column of each `s_x` row, strictly increasing.
    pub x_pivots: Vec<usize>,
    /// Leading Z column of each `s_z` row, strictly increasing.
    pub z_pivots: Vec<usize>,
}

/// Row-reduces a stabilizer tableau without changing the group it generates.
pub fn canonicalize(tab: &StabilizerTableau) -> Result<CanonicalTableau> {
    let n = tab.n();
    let mut rows: Vec<PauliString> = tab.generators().to_vec();
    let x_pivots = eliminate(&mut rows, 0, |p, c| p.x_bits().get(c), n);
    let rank_x = x_pivots.len();
    let z_pivots = eliminate(&mut rows, rank_x, |p, c| p.z_bits().get(c), n);
    if rank_x + z_pivots.len() != rows.len() || rows.len() != n {
        return Err(Error::InvalidTableau("generators are dependent".into()));
    }
    let s_z = rows.split_off(rank_x);
    Ok(CanonicalTableau {
        n,
        s_x: rows,
        s_z,
        x_pivots,
        z_pivots,
    })
}

/// Gauss–Jordan over the rows `start..`, multiplying Paulis to clear columns.
/// Rows above `start` are also cleared at the pivot columns found here.
fn eliminate(
    rows: &mut [PauliString],
    start: usize,
    bit: impl Fn(&PauliString, usize) -> bool,
    n: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = start;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && i >= start && bit(row, c) {
                row.mul_assign_right(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl CanonicalTableau {
    /// All generators, X-block first.
    pub fn generators(&self) -> impl Iterator<Item = &PauliString> {
        self.s_x.iter().chain(self.s_z.iter())
    }
}
