use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::phase::DyadicPhase;
use crate::stabilizer::CliffordGate;

use super::{Circuit, Gate};

/// A Clifford unitary as a gate word times a global phase.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CliffordBlock {
    pub word: Vec<CliffordGate>,
    pub phase: DyadicPhase,
}

impl CliffordBlock {
    pub fn is_identity(&self) -> bool {
        self.word.is_empty() && self.phase.is_zero()
    }

    /// Word and phase of a Clifford IR gate.
    pub fn from_gate(g: &Gate) -> Result<Self> {
        match g {
            Gate::Clifford(c) => Ok(CliffordBlock {
                word: vec![*c],
                phase: DyadicPhase::ZERO,
            }),
            Gate::Diagonal(d) => {
                let poly = d.polynomial();
                let mut out = CliffordBlock::default();
                for (vars, p) in poly.terms() {
                    match vars {
                        [] => out.phase += p,
                        [i] => {
                            let k = p
                                .multiple_of(DyadicPhase::quarter(1))
                                .ok_or_else(|| unclassifiable(g))?;
                            let q = d.qubits[*i];
                            out.word.extend(match k.rem_euclid(4) {
                                1 => vec![CliffordGate::S(q)],
                                2 => vec![CliffordGate::Z(q)],
                                3 => vec![CliffordGate::Sdg(q)],
                                _ => vec![],
                            });
                        }
                        [i, j] if p == DyadicPhase::PI => {
                            out.word.push(CliffordGate::Cz(d.qubits[*i], d.qubits[*j]));
                        }
                        _ => return Err(unclassifiable(g)),
                    }
                }
                Ok(out)
            }
            Gate::Permutation { qubits, perm } => Ok(CliffordBlock {
                word: affine_permutation_word(qubits, perm).ok_or_else(|| unclassifiable(g))?,
                phase: DyadicPhase::ZERO,
            }),
            Gate::Oracle { .. } => Err(unclassifiable(g)),
        }
    }
}

fn unclassifiable(g: &Gate) -> Error {
    Error::Unclassifiable(format!("{} on {:?} is neither Clifford nor diagonal", g.kind_name(), g.qubits()))
}

/// CNOT/SWAP/X word realizing an affine permutation `x ↦ Mx ⊕ v`, or `None`
/// when the permutation is not affine.
pub fn affine_permutation_word(qubits: &[usize], perm: &[usize]) -> Option<Vec<CliffordGate>> {
    let k = qubits.len();
    let v = perm[0];
    let cols: Vec<usize> = (0..k).map(|i| perm[1 << i] ^ v).collect();
    for (x, &px) in perm.iter().enumerate() {
        let mx = (0..k).filter(|i| x >> i & 1 == 1).fold(0, |acc, i| acc ^ cols[i]);
        if px != mx ^ v {
            return None;
        }
    }
    let mut m = BitMatrix::zeros(k, k);
    for (c, &col) in cols.iter().enumerate() {
        for r in 0..k {
            m.set(r, c, col >> r & 1 == 1);
        }
    }
    let mut ops = Vec::new();
    for c in 0..k {
        let p = (c..k).find(|&r| m.get(r, c))?;
        if p != c {
            m.swap_rows(p, c);
            ops.push(CliffordGate::Swap(qubits[p], qubits[c]));
        }
        for r in 0..k {
            if r != c && m.get(r, c) {
                m.add_row(c, r);
                ops.push(CliffordGate::Cnot(qubits[c], qubits[r]));
            }
        }
    }
    ops.reverse();
    ops.extend((0..k).filter(|i| v >> i & 1 == 1).map(|i| CliffordGate::X(qubits[i])));
    Some(ops)
}

/// `C_d D_d ⋯ C_1 D_1 C_0`: Clifford blocks around `d` layers of diagonal
/// magic gates. Gates inside one magic layer commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredForm {
    pub n: usize,
    /// `d + 1` blocks of Clifford IR gates.
    pub blocks: Vec<Vec<Gate>>,
    /// `d` layers of magic diagonal gates.
    pub layers: Vec<Vec<Gate>>,
}

impl LayeredForm {
    pub fn d(&self) -> usize {
        self.layers.len()
    }

    /// Block `i` as a Clifford word.
    pub fn clifford_block(&self, i: usize) -> CliffordBlock {
        let mut out = CliffordBlock::default();
        for g in &self.blocks[i] {
            let b = CliffordBlock::from_gate(g).expect("classified as Clifford");
            out.word.extend(b.word);
            out.phase += b.phase;
        }
        out
    }

    /// The layered gates concatenated back into one circuit.
    pub fn to_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.n);
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                c.gates.extend(self.layers[i - 1].iter().cloned());
            }
            c.gates.extend(b.iter().cloned());
        }
        c
    }

    /// Total phase of magic layer `i` on a basis string.
    pub fn layer_phase(&self, i: usize, x: &BitVec) -> Result<DyadicPhase> {
        let mut y = x.clone();
        let mut p = DyadicPhase::ZERO;
        for g in &self.layers[i] {
            p += super::classical::apply_to_basis(g, &mut y)?;
        }
        Ok(p)
    }
}

/// Greedy as-soon-as-possible layering. Diagonal Clifford gates commute with
/// magic layers and never force a new layer.
pub fn layered_form(c: &Circuit) -> Result<LayeredForm> {
    c.validate()?;
    let n = c.n;
    let mut nondiag_block = vec![0usize; n];
    let mut last_block = vec![0usize; n];
    let mut magic_layer = vec![0usize; n];
    let mut blocks: Vec<Vec<Gate>> = vec![Vec::new()];
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for g in &c.gates {
        let qs = g.qubits();
        if g.is_magic() {
            let l = qs.iter().map(|&q| nondiag_block[q]).max().unwrap_or(0) + 1;
            while layers.len() < l {
                layers.push(Vec::new());
                blocks.push(Vec::new());
            }
            layers[l - 1].push(g.clone());
            for &q in &qs {
                magic_layer[q] = magic_layer[q].max(l);
            }
            continue;
        }
        CliffordBlock::from_gate(g)?;
        let b = if g.is_diagonal() {
            qs.iter().map(|&q| last_block[q]).max().unwrap_or(0)
        } else {
            qs.iter()
                .map(|&q| last_block[q].max(magic_layer[q]))
                .max()
                .unwrap_or(0)
        };
        blocks[b].push(g.clone());
        for &q in &qs {
            last_block[q] = b;
            if !g.is_diagonal() {
                nondiag_block[q] = b;
            }
        }
    }
    Ok(LayeredForm { n, blocks, layers })
}
