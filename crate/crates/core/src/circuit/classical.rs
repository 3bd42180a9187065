use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::phase::DyadicPhase;
use crate::stabilizer::CliffordGate;

use super::{Circuit, Gate};

/// `|x⟩ ↦ e^{iφ(x)} |f(x)⟩` on a local register; bit `i` of a local index is
/// qubit `qubits[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostClassical {
    pub qubits: Vec<usize>,
    pub f: Vec<usize>,
    pub phi: Vec<DyadicPhase>,
}

fn local_index(x: &BitVec, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &q)| acc | (x.get(q) as usize) << i)
}

fn write_local(x: &mut BitVec, qubits: &[usize], v: usize) {
    for (i, &q) in qubits.iter().enumerate() {
        x.set(q, v >> i & 1 == 1);
    }
}

/// Applies one almost-classical gate to a basis string, returning the phase.
pub(crate) fn apply_to_basis(g: &Gate, x: &mut BitVec) -> Result<DyadicPhase> {
    use CliffordGate::*;
    let ph = match g {
        Gate::Clifford(c) => match *c {
            H(q) => return Err(Error::NotAlmostClassical(format!("H on qubit {q}"))),
            X(q) => {
                x.flip(q);
                DyadicPhase::ZERO
            }
            Y(q) => {
                let b = x.get(q);
                x.flip(q);
                DyadicPhase::quarter(if b { 3 } else { 1 })
            }
            Z(q) => bit_phase(x.get(q), DyadicPhase::PI),
            S(q) => bit_phase(x.get(q), DyadicPhase::quarter(1)),
            Sdg(q) => bit_phase(x.get(q), DyadicPhase::quarter(3)),
            Cz(a, b) => bit_phase(x.get(a) && x.get(b), DyadicPhase::PI),
            Cnot(a, b) => {
                if x.get(a) {
                    x.flip(b);
                }
                DyadicPhase::ZERO
            }
            Swap(a, b) => {
                let (u, v) = (x.get(a), x.get(b));
                x.set(a, v);
                x.set(b, u);
                DyadicPhase::ZERO
            }
        },
        Gate::Diagonal(d) => d.phase_at(local_index(x, &d.qubits)),
        Gate::Permutation { qubits, perm } => {
            let v = perm[local_index(x, qubits)];
            write_local(x, qubits, v);
            DyadicPhase::ZERO
        }
        Gate::Oracle { name, .. } => {
            return Err(Error::InvalidInput(format!(
                "black-box diagonal {name:?} has no exact phase table"
            )))
        }
    };
    Ok(ph)
}

fn bit_phase(b: bool, p: DyadicPhase) -> DyadicPhase {
    if b {
        p
    } else {
        DyadicPhase::ZERO
    }
}

/// Image of a basis string under an almost-classical circuit, with the
/// accumulated phase.
pub fn propagate_basis(c: &Circuit, x: &BitVec) -> Result<(BitVec, DyadicPhase)> {
    if x.len() != c.n {
        return Err(Error::LengthMismatch {
            expected: c.n,
            found: x.len(),
        });
    }
    let mut y = x.clone();
    let mut phase = DyadicPhase::ZERO;
    for g in &c.gates {
        phase += apply_to_basis(g, &mut y)?;
    }
    Ok((y, phase))
}

impl AlmostClassical {
    pub fn from_gate(g: &Gate) -> Result<Self> {
        let qubits = g.qubits();
        Self::from_gates(&qubits, std::slice::from_ref(g))
    }

    /// Tabulates a gate sequence acting inside `qubits`.
    pub fn from_gates(qubits: &[usize], gates: &[Gate]) -> Result<Self> {
        let n = qubits.iter().max().map_or(0, |&m| m + 1);
        let size = 1usize << qubits.len();
        let mut f = Vec::with_capacity(size);
        let mut phi = Vec::with_capacity(size);
        for v in 0..size {
            let mut x = BitVec::zeros(n);
            write_local(&mut x, qubits, v);
            let mut p = DyadicPhase::ZERO;
            for g in gates {
                if g.qubits().iter().any(|q| !qubits.contains(q)) {
                    return Err(Error::InvalidInput("gate leaves the register".into()));
                }
                p += apply_to_basis(g, &mut x)?;
            }
            f.push(local_index(&x, qubits));
            phi.push(p);
        }
        Ok(AlmostClassical {
            qubits: qubits.to_vec(),
            f,
            phi,
        })
    }

    pub fn apply(&self, x: &mut BitVec) -> DyadicPhase {
        let v = local_index(x, &self.qubits);
        write_local(x, &self.qubits, self.f[v]);
        self.phi[v]
    }

    /// Permutation followed by a diagonal, as two IR gates.
    pub fn to_gates(&self) -> Vec<Gate> {
        let mut out = Vec::new();
        if self.f.iter().enumerate().any(|(i, &p)| i != p) {
            out.push(Gate::Permutation {
                qubits: self.qubits.clone(),
                perm: self.f.clone(),
            });
        }
        // phase is indexed by the input; after the permutation it must be
        // read at f^{-1}(y)
        let mut table = vec![DyadicPhase::ZERO; self.f.len()];
        for (x, &y) in self.f.iter().enumerate() {
            table[y] = self.phi[x];
        }
        if table.iter().any(|p| !p.is_zero()) {
            out.push(Gate::diag(self.qubits.clone(), table).expect("valid table"));
        }
        out
    }
}

/// `b ∘ a` on the union of the two registers.
pub fn compose_almost_classical(a: &AlmostClassical, b: &AlmostClassical) -> AlmostClassical {
    let mut qubits = a.qubits.clone();
    for &q in &b.qubits {
        if !qubits.contains(&q) {
            qubits.push(q);
        }
    }
    let n = qubits.iter().max().map_or(0, |&m| m + 1);
    let size = 1usize << qubits.len();
    let mut f = Vec::with_capacity(size);
    let mut phi = Vec::with_capacity(size);
    for v in 0..size {
        let mut x = BitVec::zeros(n);
        write_local(&mut x, &qubits, v);
        let p = a.apply(&mut x) + b.apply(&mut x);
        f.push(local_index(&x, &qubits));
        phi.push(p);
    }
    AlmostClassical { qubits, f, phi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use CliffordGate::*;

    #[test]
    fn cnot_and_t() {
        let c = Circuit::from_gates(2, vec![Cnot(0, 1).into()]).unwrap();
        let (y, p) = propagate_basis(&c, &BitVec::parse("10").unwrap()).unwrap();
        assert_eq!(y, BitVec::parse("11").unwrap());
        assert!(p.is_zero());
        let t = Circuit::from_gates(1, vec![Gate::t(0)]).unwrap();
        let (_, p) = propagate_basis(&t, &BitVec::parse("1").unwrap()).unwrap();
        assert_eq!(p, DyadicPhase::eighth(1));
        let h = Circuit::from_gates(1, vec![H(0).into()]).unwrap();
        assert!(propagate_basis(&h, &BitVec::zeros(1)).is_err());
    }

    #[test]
    fn x_then_t() {
        let a = AlmostClassical::from_gate(&X(0).into()).unwrap();
        let b = AlmostClassical::from_gate(&Gate::t(0)).unwrap();
        let c = compose_almost_classical(&a, &b);
        assert_eq!(c.f, vec![1, 0]);
        assert_eq!(c.phi, vec![DyadicPhase::eighth(1), DyadicPhase::ZERO]);
    }

    fn random_gate(k: u8, q: [usize; 3], n: usize) -> Gate {
        let (a, b, c) = (q[0] % n, q[1] % n, q[2] % n);
        let distinct = a != b && b != c && a != c;
        match k % 6 {
            0 => Gate::t_pow(a, (q[1] % 15) as i64 + 1, 1),
            1 if a != b => Cnot(a, b).into(),
            2 if distinct => Gate::ccz(a, b, c),
            3 if distinct => {
                // Toffoli as a permutation
                let perm = (0..8).map(|v| if v & 3 == 3 { v ^ 4 } else { v }).collect();
                Gate::perm(vec![a, b, c], perm).unwrap()
            }
            4 => Y(a).into(),
            _ => X(a).into(),
        }
    }

    proptest! {
        #[test]
        fn composition_matches_propagation(
            spec in prop::collection::vec((any::<u8>(), any::<[usize; 3]>()), 5)
        ) {
            let n = 4;
            let gates: Vec<Gate> = spec.iter().map(|&(k, q)| random_gate(k, q, n)).collect();
            let all: Vec<usize> = (0..n).collect();
            let mut acc = AlmostClassical::from_gates(&all, &[]).unwrap();
            for g in &gates {
                acc = compose_almost_classical(&acc, &AlmostClassical::from_gate(g).unwrap());
            }
            let circ = Circuit::from_gates(n, gates.clone()).unwrap();
            for v in 0..16u64 {
                let x = BitVec::from_u64(n, v);
                let (y, p) = propagate_basis(&circ, &x).unwrap();
                let mut z = x.clone();
                let q = acc.apply(&mut z);
                prop_assert_eq!(y, z);
                prop_assert_eq!(p, q);
            }
            let back = Circuit::from_gates(n, acc.to_gates()).unwrap();
            for v in 0..16u64 {
                let x = BitVec::from_u64(n, v);
                prop_assert_eq!(propagate_basis(&back, &x).unwrap(), propagate_basis(&circ, &x).unwrap());
            }
        }
    }
}
