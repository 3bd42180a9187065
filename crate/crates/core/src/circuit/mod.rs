//! Gate-list circuits, gate classification and magic-depth layering.

mod classical;
mod json;
mod layered;

pub use classical::{compose_almost_classical, propagate_basis, AlmostClassical};
pub(crate) use classical::apply_to_basis;
pub use json::{parse_circuit, serialize_circuit};
pub use layered::{affine_permutation_word, layered_form, CliffordBlock, LayeredForm};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::phase::DyadicPhase;
use crate::phasepoly::{hierarchy_level, phase_table_to_polynomial, PhasePolynomial, MAX_TABLE_VARS};
use crate::stabilizer::CliffordGate;

/// Named and generic diagonal gates. Local index bit `i` is qubit `qubits[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagKind {
    /// `T^{num/2^den_log2}`: phase `π/4 · num/2^den_log2` on `|1⟩`.
    T { num: i64, den_log2: u32 },
    /// Controlled-S.
    Cs,
    Ccz,
    Cccz,
    /// Phase on the all-ones string of the support (`C^k Z^a` has phase `πa`).
    Cp(DyadicPhase),
    Table(Vec<DyadicPhase>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalGate {
    pub kind: DiagKind,
    pub qubits: Vec<usize>,
}

impl DiagonalGate {
    pub fn new(kind: DiagKind, qubits: Vec<usize>) -> Result<Self> {
        let need = match &kind {
            DiagKind::T { .. } => Some(1),
            DiagKind::Cs => Some(2),
            DiagKind::Ccz => Some(3),
            DiagKind::Cccz => Some(4),
            DiagKind::Cp(_) => None,
            DiagKind::Table(t) => {
                if qubits.len() > MAX_TABLE_VARS || t.len() != 1 << qubits.len() {
                    return Err(Error::InvalidInput(format!(
                        "diagonal table of length {} on {} qubits",
                        t.len(),
                        qubits.len()
                    )));
                }
                None
            }
        };
        if let Some(k) = need {
            if qubits.len() != k {
                return Err(Error::InvalidInput(format!(
                    "gate needs {k} qubits, got {}",
                    qubits.len()
                )));
            }
        }
        if qubits.is_empty() {
            return Err(Error::InvalidInput("diagonal gate with empty support".into()));
        }
        check_distinct(&qubits)?;
        let kind = match kind {
            DiagKind::T { mut num, mut den_log2 } => {
                while den_log2 > 0 && num % 2 == 0 {
                    num /= 2;
                    den_log2 -= 1;
                }
                num = num.rem_euclid(8i64 << den_log2);
                if num == 0 {
                    den_log2 = 0;
                }
                DiagKind::T { num, den_log2 }
            }
            k => k,
        };
        Ok(DiagonalGate { kind, qubits })
    }

    /// Phase at a local basis index.
    pub fn phase_at(&self, local: usize) -> DyadicPhase {
        let all = local == (1 << self.qubits.len()) - 1;
        match &self.kind {
            DiagKind::T { num, den_log2 } => {
                if local & 1 == 1 {
                    DyadicPhase::new(*num, den_log2 + 2)
                } else {
                    DyadicPhase::ZERO
                }
            }
            DiagKind::Cs if all => DyadicPhase::quarter(1),
            DiagKind::Ccz | DiagKind::Cccz if all => DyadicPhase::PI,
            DiagKind::Cp(p) if all => *p,
            DiagKind::Table(t) => t[local],
            _ => DyadicPhase::ZERO,
        }
    }

    pub fn table(&self) -> Vec<DyadicPhase> {
        (0..1usize << self.qubits.len()).map(|i| self.phase_at(i)).collect()
    }

    /// Phase polynomial over the local variables.
    pub fn polynomial(&self) -> PhasePolynomial {
        phase_table_to_polynomial(&self.table()).expect("table length is a power of two")
    }

    pub fn hierarchy_level(&self) -> u32 {
        hierarchy_level(&self.polynomial())
    }
}

/// A gate of the circuit IR.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Clifford(CliffordGate),
    Diagonal(DiagonalGate),
    /// `|x⟩ ↦ |perm[x]⟩` on the local register.
    Permutation { qubits: Vec<usize>, perm: Vec<usize> },
    /// Black-box diagonal resolved by name at evaluation time.
    Oracle { qubits: Vec<usize>, name: String },
}

impl From<CliffordGate> for Gate {
    fn from(g: CliffordGate) -> Self {
        Gate::Clifford(g)
    }
}

impl From<DiagonalGate> for Gate {
    fn from(g: DiagonalGate) -> Self {
        Gate::Diagonal(g)
    }
}

impl Gate {
    pub fn t(q: usize) -> Gate {
        Self::t_pow(q, 1, 0)
    }

    pub fn tdg(q: usize) -> Gate {
        Self::t_pow(q, -1, 0)
    }

    /// `T^{num/2^den_log2}`.
    pub fn t_pow(q: usize, num: i64, den_log2: u32) -> Gate {
        Gate::Diagonal(DiagonalGate::new(DiagKind::T { num, den_log2 }, vec![q]).unwrap())
    }

    pub fn cs(a: usize, b: usize) -> Gate {
        Gate::Diagonal(DiagonalGate::new(DiagKind::Cs, vec![a, b]).unwrap())
    }

    pub fn ccz(a: usize, b: usize, c: usize) -> Gate {
        Gate::Diagonal(DiagonalGate::new(DiagKind::Ccz, vec![a, b, c]).unwrap())
    }

    pub fn cccz(a: usize, b: usize, c: usize, d: usize) -> Gate {
        Gate::Diagonal(DiagonalGate::new(DiagKind::Cccz, vec![a, b, c, d]).unwrap())
    }

    /// Phase `p` on the all-ones string of `qubits`.
    pub fn cp(qubits: Vec<usize>, p: DyadicPhase) -> Result<Gate> {
        Ok(Gate::Diagonal(DiagonalGate::new(DiagKind::Cp(p), qubits)?))
    }

    pub fn diag(qubits: Vec<usize>, table: Vec<DyadicPhase>) -> Result<Gate> {
        Ok(Gate::Diagonal(DiagonalGate::new(DiagKind::Table(table), qubits)?))
    }

    pub fn perm(qubits: Vec<usize>, perm: Vec<usize>) -> Result<Gate> {
        check_distinct(&qubits)?;
        if qubits.len() > MAX_TABLE_VARS || perm.len() != 1 << qubits.len() {
            return Err(Error::InvalidInput("permutation table has wrong length".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidInput("permutation is not a bijection".into()));
            }
        }
        Ok(Gate::Permutation { qubits, perm })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Clifford(g) => g.qubits(),
            Gate::Diagonal(d) => d.qubits.clone(),
            Gate::Permutation { qubits, .. } | Gate::Oracle { qubits, .. } => qubits.clone(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        match self {
            Gate::Clifford(g) => g.is_diagonal(),
            Gate::Diagonal(_) | Gate::Oracle { .. } => true,
            Gate::Permutation { perm, .. } => perm.iter().enumerate().all(|(i, &p)| i == p),
        }
    }

    /// Diagonal and outside the second level of the hierarchy. Black-box
    /// diagonals are always counted as magic.
    pub fn is_magic(&self) -> bool {
        match self {
            Gate::Diagonal(d) => d.hierarchy_level() >= 3,
            Gate::Oracle { .. } => true,
            _ => false,
        }
    }

    /// Maps basis states to basis states up to a phase.
    pub fn is_almost_classical(&self) -> bool {
        !matches!(self, Gate::Clifford(CliffordGate::H(_)))
    }

    /// Clifford in the sense of the layering: named Cliffords, diagonals of
    /// level at most two and affine permutations.
    pub fn is_clifford(&self) -> bool {
        match self {
            Gate::Clifford(_) => true,
            Gate::Diagonal(d) => d.hierarchy_level() <= 2,
            Gate::Permutation { qubits, perm } => {
                affine_permutation_word(qubits, perm).is_some()
            }
            Gate::Oracle { .. } => false,
        }
    }

    /// Relabels qubits through `map`.
    pub fn remap(&self, map: &[usize]) -> Gate {
        let m = |qs: &[usize]| qs.iter().map(|&q| map[q]).collect::<Vec<_>>();
        match self {
            Gate::Clifford(g) => Gate::Clifford(g.remap(map)),
            Gate::Diagonal(d) => Gate::Diagonal(DiagonalGate {
                kind: d.kind.clone(),
                qubits: m(&d.qubits),
            }),
            Gate::Permutation { qubits, perm } => Gate::Permutation {
                qubits: m(qubits),
                perm: perm.clone(),
            },
            Gate::Oracle { qubits, name } => Gate::Oracle {
                qubits: m(qubits),
                name: name.clone(),
            },
        }
    }

    /// Inverse gate, for gates with a closed-form inverse.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Clifford(g) => Gate::Clifford(g.inverse()),
            Gate::Diagonal(d) => {
                let kind = match &d.kind {
                    DiagKind::T { num, den_log2 } => DiagKind::T {
                        num: -num,
                        den_log2: *den_log2,
                    },
                    DiagKind::Ccz | DiagKind::Cccz => d.kind.clone(),
                    DiagKind::Cs => DiagKind::Cp(-DyadicPhase::quarter(1)),
                    DiagKind::Cp(p) => DiagKind::Cp(-*p),
                    DiagKind::Table(t) => DiagKind::Table(t.iter().map(|&p| -p).collect()),
                };
                Gate::Diagonal(DiagonalGate::new(kind, d.qubits.clone()).unwrap())
            }
            Gate::Permutation { qubits, perm } => {
                let mut inv = vec![0; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p] = i;
                }
                Gate::Permutation {
                    qubits: qubits.clone(),
                    perm: inv,
                }
            }
            Gate::Oracle { .. } => panic!("black-box diagonal has no known inverse"),
        }
    }

    /// Short name used in reports and gate counts.
    pub fn kind_name(&self) -> String {
        match self {
            Gate::Clifford(g) => {
                let s = g.to_string();
                s.split('(').next().unwrap_or("").to_string()
            }
            Gate::Diagonal(d) => match &d.kind {
                DiagKind::T { num: 1 | 7, den_log2: 0 } => "T".into(),
                DiagKind::T { num, den_log2: 0 } => format!("T^{num}"),
                DiagKind::T { den_log2, .. } => format!("T^1/{}", 1u64 << den_log2),
                DiagKind::Cs => "CS".into(),
                DiagKind::Ccz => "CCZ".into(),
                DiagKind::Cccz => "CCCZ".into(),
                DiagKind::Cp(_) => "CP".into(),
                DiagKind::Table(_) => "DIAG".into(),
            },
            Gate::Permutation { .. } => "PERM".into(),
            Gate::Oracle { .. } => "ORACLE".into(),
        }
    }
}

fn check_distinct(qubits: &[usize]) -> Result<()> {
    let set: BTreeSet<_> = qubits.iter().collect();
    if set.len() != qubits.len() {
        return Err(Error::InvalidInput("repeated qubit in gate support".into()));
    }
    Ok(())
}

/// An ordered gate list on `n` qubits, with declared ancillas that start in
/// `|0⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    pub n: usize,
    pub ancilla: Vec<usize>,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            ancilla: Vec::new(),
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = Circuit {
            n,
            ancilla: Vec::new(),
            gates,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn push(&mut self, g: impl Into<Gate>) {
        self.gates.push(g.into());
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) {
        self.gates.extend(gates);
    }

    /// Data qubits, in increasing order.
    pub fn data_qubits(&self) -> Vec<usize> {
        (0..self.n).filter(|q| !self.ancilla.contains(q)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            for q in g.qubits() {
                if q >= self.n {
                    return Err(Error::QubitOutOfRange { index: q, n: self.n });
                }
            }
        }
        let mut seen = BTreeSet::new();
        for &a in &self.ancilla {
            if a >= self.n {
                return Err(Error::QubitOutOfRange { index: a, n: self.n });
            }
            if !seen.insert(a) {
                return Err(Error::InvalidInput(format!("ancilla {a} listed twice")));
            }
        }
        Ok(())
    }

    /// `other` applied after `self`.
    pub fn then(&self, other: &Circuit) -> Circuit {
        let mut c = self.clone();
        c.n = c.n.max(other.n);
        c.gates.extend(other.gates.iter().cloned());
        for &a in &other.ancilla {
            if !c.ancilla.contains(&a) {
                c.ancilla.push(a);
            }
        }
        c
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            ancilla: self.ancilla.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Number of gates per `kind_name`.
    pub fn gate_counts(&self) -> std::collections::BTreeMap<String, usize> {
        let mut m = std::collections::BTreeMap::new();
        for g in &self.gates {
            *m.entry(g.kind_name()).or_insert(0) += 1;
        }
        m
    }

    /// Number of `T^{±1}` gates.
    pub fn t_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Diagonal(DiagonalGate { kind: DiagKind::T { num: 1 | 7, den_log2: 0 }, .. })))
            .count()
    }

    pub fn is_almost_classical(&self) -> bool {
        self.gates.iter().all(Gate::is_almost_classical)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert!(Gate::from(CliffordGate::Cnot(0, 1)).is_almost_classical());
        assert!(!Gate::from(CliffordGate::H(0)).is_almost_classical());
        assert!(Gate::t(0).is_almost_classical());
        assert!(Gate::t(0).is_magic());
        assert!(Gate::ccz(0, 1, 2).is_magic());
        assert!(!Gate::t_pow(0, 2, 0).is_magic());
        assert!(Gate::t_pow(0, 2, 0).is_clifford());
        assert!(Gate::cp(vec![0, 1], DyadicPhase::PI).unwrap().is_clifford());
    }

    #[test]
    fn t_power_normalization() {
        assert_eq!(Gate::t_pow(0, 2, 1), Gate::t(0));
        assert_eq!(Gate::t_pow(0, -1, 0), Gate::t_pow(0, 7, 0));
        let Gate::Diagonal(d) = Gate::t_pow(0, 1, 1) else { unreachable!() };
        assert_eq!(d.phase_at(1), DyadicPhase::new(1, 3));
        assert_eq!(d.hierarchy_level(), 4);
    }

    #[test]
    fn validation() {
        assert!(Circuit::from_gates(2, vec![Gate::t(2)]).is_err());
        assert!(Gate::perm(vec![0], vec![0, 0]).is_err());
        assert!(Gate::diag(vec![0, 1], vec![DyadicPhase::ZERO; 3]).is_err());
        assert!(DiagonalGate::new(DiagKind::Ccz, vec![0, 0, 1]).is_err());
    }

    #[test]
    fn counts() {
        let mut c = Circuit::new(3);
        c.push(Gate::t(0));
        c.push(Gate::tdg(1));
        c.push(Gate::t_pow(2, 1, 1));
        c.push(CliffordGate::Cnot(0, 1));
        assert_eq!(c.t_count(), 2);
        assert_eq!(c.gate_counts()["T"], 2);
        assert_eq!(c.gate_counts()["T^1/2"], 1);
        assert_eq!(c.gate_counts()["CNOT"], 1);
    }
}
