use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::bits::BitVec;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::stabilizer::CliffordGate;

use super::NamedOracles;

/// Default qubit cap of the dense simulator.
pub const DEFAULT_CAP: usize = 20;

/// `2^n` amplitudes; basis index bit `j` is qubit `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

pub(crate) fn local_of(i: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (i >> q & 1) << k)
}

pub(crate) fn with_local(i: usize, qubits: &[usize], v: usize) -> usize {
    qubits.iter().enumerate().fold(i, |acc, (k, &q)| {
        (acc & !(1 << q)) | (v >> k & 1) << q
    })
}

fn index_of(x: &BitVec) -> usize {
    x.iter_ones().fold(0, |acc, j| acc | 1 << j)
}

impl DenseState {
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(&BitVec::zeros(n), DEFAULT_CAP)
    }

    pub fn basis(x: &BitVec, cap: usize) -> Result<Self> {
        let n = x.len();
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index_of(x)] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidInput("amplitude count is not a power of two".into()));
        }
        let n = amps.len().trailing_zeros() as usize;
        Ok(DenseState { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, x: &BitVec) -> Complex64 {
        assert_eq!(x.len(), self.n);
        self.amps[index_of(x)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_circuit(&mut self, c: &Circuit, oracles: &NamedOracles) -> Result<()> {
        if c.n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: c.n,
            });
        }
        for g in &c.gates {
            self.apply_gate(g, oracles)?;
        }
        Ok(())
    }

    /// Applies a `2^k × 2^k` matrix on `qubits`; local bit `i` is `qubits[i]`.
    pub fn apply_matrix(&mut self, qubits: &[usize], m: &crate::exact::Matrix) -> Result<()> {
        if m.qubits() != qubits.len() {
            return Err(Error::LengthMismatch {
                expected: qubits.len(),
                found: m.qubits(),
            });
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.n) {
            return Err(Error::QubitOutOfRange { index: q, n: self.n });
        }
        let k = 1usize << qubits.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); k];
        for i in 0..self.amps.len() {
            if local_of(i, qubits) != 0 {
                continue;
            }
            for (v, b) in buf.iter_mut().enumerate() {
                *b = self.amps[with_local(i, qubits, v)];
            }
            for r in 0..k {
                self.amps[with_local(i, qubits, r)] = (0..k).map(|c| m.get(r, c) * buf[c]).sum();
            }
        }
        Ok(())
    }

    pub fn apply_clifford(&mut self, g: CliffordGate) {
        use CliffordGate::*;
        let i_unit = Complex64::new(0.0, 1.0);
        match g {
            H(q) => {
                let b = 1 << q;
                for i in 0..self.amps.len() {
                    if i & b == 0 {
                        let (u, v) = (self.amps[i], self.amps[i | b]);
                        self.amps[i] = (u + v) * FRAC_1_SQRT_2;
                        self.amps[i | b] = (u - v) * FRAC_1_SQRT_2;
                    }
                }
            }
            X(q) => self.swap_pairs(|i| i & (1 << q) == 0, 1 << q),
            Y(q) => {
                let b = 1 << q;
                for i in 0..self.amps.len() {
                    if i & b == 0 {
                        let (u, v) = (self.amps[i], self.amps[i | b]);
                        self.amps[i] = -i_unit * v;
                        self.amps[i | b] = i_unit * u;
                    }
                }
            }
            Z(q) => self.phase_where(|i| i >> q & 1 == 1, Complex64::new(-1.0, 0.0)),
            S(q) => self.phase_where(|i| i >> q & 1 == 1, i_unit),
            Sdg(q) => self.phase_where(|i| i >> q & 1 == 1, -i_unit),
            Cz(a, b) => self.phase_where(|i| i >> a & 1 == 1 && i >> b & 1 == 1, Complex64::new(-1.0, 0.0)),
            Cnot(a, t) => self.swap_pairs(|i| i >> a & 1 == 1 && i >> t & 1 == 0, 1 << t),
            Swap(a, b) => self.swap_pairs(|i| i >> a & 1 == 1 && i >> b & 1 == 0, (1 << a) | (1 << b)),
        }
    }

    fn swap_pairs(&mut self, pick: impl Fn(usize) -> bool, mask: usize) {
        for i in 0..self.amps.len() {
            if pick(i) {
                self.amps.swap(i, i ^ mask);
            }
        }
    }

    fn phase_where(&mut self, pick: impl Fn(usize) -> bool, f: Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if pick(i) {
                *a *= f;
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate, oracles: &NamedOracles) -> Result<()> {
        for q in g.qubits() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { index: q, n: self.n });
            }
        }
        match g {
            Gate::Clifford(c) => self.apply_clifford(*c),
            Gate::Diagonal(d) => {
                let table: Vec<Complex64> = d.table().iter().map(|p| p.to_complex()).collect();
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a *= table[local_of(i, &d.qubits)];
                }
            }
            Gate::Permutation { qubits, perm } => {
                let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
                for (i, &a) in self.amps.iter().enumerate() {
                    out[with_local(i, qubits, perm[local_of(i, qubits)])] = a;
                }
                self.amps = out;
            }
            Gate::Oracle { qubits, name } => {
                let f = oracles
                    .get(name)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown phase oracle {name:?}")))?;
                let table: Vec<Complex64> = (0..1u64 << qubits.len())
                    .map(|v| Complex64::from_polar(1.0, f(v)))
                    .collect();
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a *= table[local_of(i, qubits)];
                }
            }
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation_complex(&self, p: &PauliString) -> Complex64 {
        assert_eq!(p.n(), self.n);
        let px = index_of(p.x_bits());
        let pz = index_of(p.z_bits());
        let ik = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &a) in self.amps.iter().enumerate() {
            let k = (p.i_power() as usize + 2 * ((i & pz).count_ones() as usize)) % 4;
            acc += self.amps[i ^ px].conj() * ik[k] * a;
        }
        acc
    }

    pub fn expectation(&self, p: &PauliString) -> f64 {
        self.expectation_complex(p).re
    }

    /// Marginal distribution of `qubits`; output index bit `i` is `qubits[i]`.
    pub fn distribution(&self, qubits: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[local_of(i, qubits)] += a.norm_sqr();
        }
        out
    }

    pub fn probability(&self, x: &BitVec) -> f64 {
        self.amplitude(x).norm_sqr()
    }
}

/// `C|0^n⟩` with the default cap.
pub fn simulate(c: &Circuit) -> Result<DenseState> {
    simulate_with(c, &NamedOracles::new(), DEFAULT_CAP)
}

pub fn simulate_with(c: &Circuit, oracles: &NamedOracles, cap: usize) -> Result<DenseState> {
    let mut s = DenseState::basis(&BitVec::zeros(c.n), cap)?;
    s.apply_circuit(c, oracles)?;
    Ok(s)
}

/// Columns `C|x⟩` for every basis input.
pub fn unitary(c: &Circuit, oracles: &NamedOracles) -> Result<Vec<DenseState>> {
    if c.n > 14 {
        return Err(Error::CapExceeded { n: c.n, cap: 14 });
    }
    (0..1u64 << c.n)
        .map(|v| {
            let mut s = DenseState::basis(&BitVec::from_u64(c.n, v), 14)?;
            s.apply_circuit(c, oracles)?;
            Ok(s)
        })
        .collect()
}
