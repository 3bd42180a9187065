use std::fmt;
use std::sync::Arc;

use crate::bits::BitVec;
use crate::circuit::{DiagonalGate, Gate};
use crate::error::{Error, Result};
use crate::iqp::Iqp3;
use crate::oracle::NamedOracles;
use crate::phase::DyadicPhase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    LocalTables,
    Iqp3Polynomial,
    BlackBox,
}

type AngleFn = Arc<dyn Fn(&BitVec) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Tables(Vec<DiagonalGate>),
    Iqp(Iqp3),
    BlackBox(AngleFn),
    Pushed { inner: Arc<PhaseOracle>, flip: BitVec },
}

/// Query access to a diagonal unitary `Σ_x e^{iφ(x)} |x⟩⟨x|`.
#[derive(Clone)]
pub struct PhaseOracle {
    n: usize,
    kind: OracleKind,
    cost: usize,
    repr: Repr,
}

impl fmt::Debug for PhaseOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseOracle")
            .field("n", &self.n)
            .field("kind", &self.kind)
            .field("cost", &self.cost)
            .finish()
    }
}

impl PhaseOracle {
    pub fn trivial(n: usize) -> Self {
        Self::from_diagonals(n, Vec::new()).expect("empty product")
    }

    /// Product of local diagonal tables.
    pub fn from_diagonals(n: usize, gates: Vec<DiagonalGate>) -> Result<Self> {
        for g in &gates {
            if let Some(&q) = g.qubits.iter().find(|&&q| q >= n) {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        let cost = gates.iter().map(|g| g.qubits.len()).sum::<usize>().max(1);
        Ok(PhaseOracle {
            n,
            kind: OracleKind::LocalTables,
            cost,
            repr: Repr::Tables(gates),
        })
    }

    /// `φ(x) = π·f(x)` for a degree-three polynomial `f`.
    pub fn iqp3(iqp: &Iqp3) -> Self {
        PhaseOracle {
            n: iqp.n,
            kind: OracleKind::Iqp3Polynomial,
            cost: iqp.terms.iter().map(Vec::len).sum::<usize>().max(1),
            repr: Repr::Iqp(iqp.clone()),
        }
    }

    /// Arbitrary angle function with a declared per-query cost.
    pub fn black_box(n: usize, cost: usize, f: impl Fn(&BitVec) -> f64 + Send + Sync + 'static) -> Self {
        PhaseOracle {
            n,
            kind: OracleKind::BlackBox,
            cost,
            repr: Repr::BlackBox(Arc::new(f)),
        }
    }

    /// The product of a layer of diagonal IR gates. Named black boxes are
    /// looked up in `oracles`.
    pub fn from_layer(n: usize, gates: &[Gate], oracles: &NamedOracles) -> Result<Self> {
        let mut diags = Vec::new();
        let mut boxes = Vec::new();
        for g in gates {
            match g {
                Gate::Diagonal(d) => diags.push(d.clone()),
                Gate::Clifford(c) if c.is_diagonal() => {
                    let table = (0..1usize << c.qubits().len())
                        .map(|v| {
                            let mut x = BitVec::from_u64(c.qubits().len(), v as u64);
                            crate::circuit::apply_to_basis(&g.remap(&local_map(&c.qubits())), &mut x)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    diags.push(DiagonalGate::new(crate::circuit::DiagKind::Table(table), c.qubits())?);
                }
                Gate::Oracle { qubits, name } => {
                    let f = oracles
                        .get(name)
                        .ok_or_else(|| Error::InvalidInput(format!("unknown phase oracle {name:?}")))?
                        .clone();
                    boxes.push((qubits.clone(), f));
                }
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "{} is not diagonal",
                        g.kind_name()
                    )))
                }
            }
        }
        let tables = Self::from_diagonals(n, diags)?;
        if boxes.is_empty() {
            return Ok(tables);
        }
        let cost = tables.cost + boxes.iter().map(|(q, _)| q.len()).sum::<usize>();
        Ok(Self::black_box(n, cost, move |x| {
            let mut a = tables.evaluate(x);
            for (qs, f) in &boxes {
                let local = qs.iter().enumerate().fold(0u64, |acc, (i, &q)| acc | (x.get(q) as u64) << i);
                a += f(local);
            }
            a
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    /// Declared cost `t(n)` of one query.
    pub fn cost(&self) -> usize {
        self.cost
    }

    pub fn is_trivial(&self) -> bool {
        match &self.repr {
            Repr::Tables(g) => g.is_empty(),
            Repr::Iqp(i) => i.terms.is_empty(),
            Repr::Pushed { inner, flip } => flip.is_zero() || inner.is_trivial(),
            Repr::BlackBox(_) => false,
        }
    }

    /// The phase as an exact dyadic angle, when it is one.
    pub fn evaluate_dyadic(&self, x: &BitVec) -> Option<DyadicPhase> {
        match &self.repr {
            Repr::Tables(gates) => Some(
                gates
                    .iter()
                    .map(|g| {
                        let local = g
                            .qubits
                            .iter()
                            .enumerate()
                            .fold(0usize, |acc, (i, &q)| acc | (x.get(q) as usize) << i);
                        g.phase_at(local)
                    })
                    .sum(),
            ),
            Repr::Iqp(iqp) => Some(if iqp.eval(x) {
                DyadicPhase::PI
            } else {
                DyadicPhase::ZERO
            }),
            Repr::Pushed { inner, flip } => {
                let a = inner.evaluate_dyadic(x)?;
                let b = inner.evaluate_dyadic(&x.xor(flip))?;
                Some(a - b)
            }
            Repr::BlackBox(_) => None,
        }
    }

    /// `φ(x)` in radians.
    pub fn evaluate(&self, x: &BitVec) -> f64 {
        match &self.repr {
            Repr::BlackBox(f) => f(x),
            Repr::Pushed { inner, flip } if inner.kind == OracleKind::BlackBox => {
                inner.evaluate(x) - inner.evaluate(&x.xor(flip))
            }
            _ => self.evaluate_dyadic(x).expect("dyadic representation").radians(),
        }
    }
}

fn local_map(qubits: &[usize]) -> Vec<usize> {
    let mut m = vec![0; qubits.iter().max().map_or(0, |q| q + 1)];
    for (i, &q) in qubits.iter().enumerate() {
        m[q] = i;
    }
    m
}

/// `D'` with `D† P D = P D'`: `φ'(x) = -[φ(x ⊕ a) - φ(x)]` where `a` is the
/// X-part of `p`.
pub fn push_through(d: &PhaseOracle, p: &crate::pauli::PauliString) -> PhaseOracle {
    PhaseOracle {
        n: d.n,
        kind: d.kind,
        cost: 2 * d.cost,
        repr: Repr::Pushed {
            inner: Arc::new(d.clone()),
            flip: p.x_bits().clone(),
        },
    }
}
