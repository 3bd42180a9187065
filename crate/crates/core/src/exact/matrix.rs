//! Small dense matrices on `k ≤ 3` qubits; index bit `i` is local qubit `i`.

use num_complex::Complex64;

use crate::bits::BitVec;
use crate::oracle::DenseState;
use crate::pauli::PauliString;
use crate::stabilizer::CliffordGate;

/// Row-major `2^k × 2^k` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(data: Vec<Complex64>) -> Option<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        (dim * dim == data.len() && dim.is_power_of_two()).then_some(Matrix { dim, data })
    }

    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * o.get(k, c);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Matrix {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn scale(&self, f: Complex64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * f).collect(),
        }
    }

    pub fn max_diff(&self, o: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).max_diff(&Self::identity(self.dim)) <= tol
    }

    /// Dense matrix of a Pauli string (phase included).
    pub fn pauli(p: &PauliString) -> Matrix {
        let k = p.n();
        let d = 1 << k;
        let mut m = Self::zeros(d);
        let ik = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        for c in 0..d {
            let (y, ph) = p.act_on_basis(&BitVec::from_u64(k, c as u64));
            m.data[y.to_u64() as usize * d + c] = ik[ph as usize];
        }
        m
    }

    /// Dense matrix of a gate word on `k` local qubits.
    pub fn word(k: usize, word: &[CliffordGate]) -> Matrix {
        let d = 1 << k;
        let mut m = Self::zeros(d);
        for c in 0..d {
            let mut s = DenseState::basis(&BitVec::from_u64(k, c as u64), k).expect("small register");
            for &g in word {
                s.apply_clifford(g);
            }
            for (r, a) in s.amplitudes().iter().enumerate() {
                m.data[r * d + c] = *a;
            }
        }
        m
    }

    /// Diagonal matrix with entries `e^{iθ_x}`.
    pub fn diagonal(entries: &[Complex64]) -> Matrix {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = e;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_y() {
        let m = Matrix::pauli(&"Y".parse().unwrap());
        assert_eq!(m.get(1, 0), Complex64::new(0.0, 1.0));
        assert_eq!(m.get(0, 1), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn word_matrix_is_unitary() {
        use CliffordGate::*;
        let m = Matrix::word(2, &[H(0), Cnot(0, 1), S(1)]);
        assert!(m.is_unitary(1e-12));
    }
}
