use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::bits::BitVec;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

use super::NamedOracles;

const PRUNE: f64 = 1e-15;

/// State vector keyed by basis string; for wide registers with small support.
#[derive(Clone, Debug)]
pub struct SparseState {
    n: usize,
    amps: HashMap<BitVec, Complex64>,
}

fn local_of(x: &BitVec, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (x.get(q) as usize) << k)
}

impl SparseState {
    pub fn basis(x: &BitVec) -> Self {
        let mut amps = HashMap::new();
        amps.insert(x.clone(), Complex64::new(1.0, 0.0));
        SparseState { n: x.len(), amps }
    }

    pub fn support_size(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, x: &BitVec) -> Complex64 {
        self.amps.get(x).copied().unwrap_or_default()
    }

    /// Entries sorted by basis string, for reproducible summation.
    pub fn entries(&self) -> Vec<(BitVec, Complex64)> {
        let mut v: Vec<_> = self.amps.iter().map(|(k, a)| (k.clone(), *a)).collect();
        v.sort_by(|a, b| a.0.words().cmp(b.0.words()));
        v
    }

    pub fn apply_circuit(&mut self, c: &Circuit, oracles: &NamedOracles, max_support: usize) -> Result<()> {
        if c.n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: c.n,
            });
        }
        for g in &c.gates {
            self.apply_gate(g, oracles)?;
            if self.amps.len() > max_support {
                return Err(Error::CapExceeded {
                    n: self.amps.len(),
                    cap: max_support,
                });
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, g: &Gate, oracles: &NamedOracles) -> Result<()> {
        if let Gate::Clifford(crate::stabilizer::CliffordGate::H(q)) = g {
            let q = *q;
            let mut out: HashMap<BitVec, Complex64> = HashMap::with_capacity(2 * self.amps.len());
            for (x, a) in self.amps.drain() {
                let mut y = x.clone();
                y.flip(q);
                let s = if x.get(q) { -a } else { a };
                *out.entry(y).or_default() += a * FRAC_1_SQRT_2;
                *out.entry(x).or_default() += s * FRAC_1_SQRT_2;
            }
            out.retain(|_, a| a.norm() > PRUNE);
            self.amps = out;
            return Ok(());
        }
        if let Gate::Oracle { qubits, name } = g {
            let f = oracles
                .get(name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown phase oracle {name:?}")))?;
            for (x, a) in self.amps.iter_mut() {
                *a *= Complex64::from_polar(1.0, f(local_of(x, qubits) as u64));
            }
            return Ok(());
        }
        let mut out = HashMap::with_capacity(self.amps.len());
        for (mut x, a) in self.amps.drain() {
            let p = crate::circuit::apply_to_basis(g, &mut x)?;
            out.insert(x, a * p.to_complex());
        }
        self.amps = out;
        Ok(())
    }
}

/// `C|x⟩` on a sparse register, refusing once the support exceeds
/// `max_support` entries.
pub fn simulate_sparse(c: &Circuit, x: &BitVec, oracles: &NamedOracles, max_support: usize) -> Result<SparseState> {
    let mut s = SparseState::basis(x);
    s.apply_circuit(c, oracles, max_support)?;
    Ok(s)
}
