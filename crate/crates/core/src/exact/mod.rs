//! Exact Pauli expectations for one layer of third-level hierarchy gates
//! sandwiched between Clifford circuits.

mod matrix;

pub use matrix::Matrix;

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::circuit::{layered_form, Circuit, CliffordBlock, DiagKind, DiagonalGate, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::phase::DyadicPhase;
use crate::stabilizer::{
    conjugate_by_word_dagger, synthesize_clifford, to_affine_form, AffineForm, CliffordGate,
    CliffordTableau, ExactValue, StabilizerTableau,
};

const TOL: f64 = 1e-9;

/// A gate of the third hierarchy level on a few qubits.
#[derive(Clone, Debug, PartialEq)]
pub enum Ch3Gate {
    Diagonal(DiagonalGate),
    /// Unitary on `qubits`, local index bit `i` being `qubits[i]`.
    Dense { qubits: Vec<usize>, matrix: Matrix },
}

impl Ch3Gate {
    pub fn qubits(&self) -> &[usize] {
        match self {
            Ch3Gate::Diagonal(d) => &d.qubits,
            Ch3Gate::Dense { qubits, .. } => qubits,
        }
    }

    pub fn dense(qubits: Vec<usize>, matrix: Matrix) -> Result<Self> {
        if qubits.is_empty() || qubits.len() > 3 || matrix.dim != 1 << qubits.len() {
            return Err(Error::InvalidInput(
                "dense gates act on 1 to 3 qubits with a matching matrix".into(),
            ));
        }
        if !matrix.is_unitary(TOL) {
            return Err(Error::InvalidInput("matrix is not unitary".into()));
        }
        Ok(Ch3Gate::Dense { qubits, matrix })
    }

    pub fn matrix(&self) -> Matrix {
        match self {
            Ch3Gate::Diagonal(d) => Matrix::diagonal(
                &d.table().iter().map(DyadicPhase::to_complex).collect::<Vec<_>>(),
            ),
            Ch3Gate::Dense { matrix, .. } => matrix.clone(),
        }
    }
}

/// `G† P G` for a hierarchy-three gate `G`, as a Clifford word times a phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCliffordWithPhase {
    pub support: Vec<usize>,
    /// Gates on global qubit indices, in application order.
    pub word: Vec<CliffordGate>,
    pub global_phase: DyadicPhase,
}

impl LocalCliffordWithPhase {
    /// Dense matrix on the support.
    pub fn local_matrix(&self) -> Matrix {
        let mut inv = vec![0; self.support.iter().max().map_or(0, |m| m + 1)];
        for (i, &q) in self.support.iter().enumerate() {
            inv[q] = i;
        }
        let local: Vec<CliffordGate> = self.word.iter().map(|g| g.remap(&inv)).collect();
        Matrix::word(self.support.len(), &local).scale(self.global_phase.to_complex())
    }
}

/// `G† P G` with `P` given on the gate's support.
pub fn ch3_conjugate(gate: &Ch3Gate, p_local: &PauliString) -> Result<LocalCliffordWithPhase> {
    let qubits = gate.qubits().to_vec();
    if p_local.n() != qubits.len() {
        return Err(Error::LengthMismatch {
            expected: qubits.len(),
            found: p_local.n(),
        });
    }
    match gate {
        Ch3Gate::Diagonal(d) => conjugate_diagonal(d, p_local),
        Ch3Gate::Dense { matrix, .. } => {
            let m = matrix.adjoint().mul(&Matrix::pauli(p_local)).mul(matrix);
            let (word, phase) = recognize_clifford(&m)?;
            Ok(LocalCliffordWithPhase {
                support: qubits.clone(),
                word: word.iter().map(|g| g.remap(&qubits)).collect(),
                global_phase: phase,
            })
        }
    }
}

/// `D† i^k X^a Z^b D = i^k X^a Δ Z^b` with `Δ(x) = φ(x) - φ(x ⊕ a)`.
fn conjugate_diagonal(d: &DiagonalGate, p: &PauliString) -> Result<LocalCliffordWithPhase> {
    let level = d.hierarchy_level();
    if level > 3 {
        return Err(Error::NotCh3(format!("diagonal of hierarchy level {level}")));
    }
    let a = p.x_bits().to_u64() as usize;
    let table = d.table();
    let delta: Vec<DyadicPhase> = (0..table.len()).map(|x| table[x] - table[x ^ a]).collect();
    let block = CliffordBlock::from_gate(&Gate::diag(d.qubits.clone(), delta)?)
        .map_err(|_| Error::NotCh3("conjugated Pauli is not Clifford".into()))?;
    let mut word: Vec<CliffordGate> = p.z_bits().iter_ones().map(|i| CliffordGate::Z(d.qubits[i])).collect();
    word.extend(block.word);
    word.extend(p.x_bits().iter_ones().map(|i| CliffordGate::X(d.qubits[i])));
    Ok(LocalCliffordWithPhase {
        support: d.qubits.clone(),
        word,
        global_phase: block.phase + DyadicPhase::quarter(p.i_power() as i64),
    })
}

/// Identifies `m` as `e^{iπk/4}·W` for a Clifford word `W` on local qubits.
pub fn recognize_clifford(m: &Matrix) -> Result<(Vec<CliffordGate>, DyadicPhase)> {
    let k = m.qubits();
    let mut img_x = Vec::with_capacity(k);
    let mut img_z = Vec::with_capacity(k);
    let md = m.adjoint();
    for j in 0..k {
        for (letter, out) in [('X', &mut img_x), ('Z', &mut img_z)] {
            let a = m.mul(&Matrix::pauli(&PauliString::single(k, j, letter))).mul(&md);
            out.push(match_pauli(&a)?);
        }
    }
    let tab = CliffordTableau::from_images(img_x, img_z);
    let word = synthesize_clifford(&tab).map_err(|_| Error::NotCh3("images are not symplectic".into()))?;
    let w = Matrix::word(k, &word);
    let (r, c) = (0..m.dim * m.dim)
        .map(|i| (i / m.dim, i % m.dim))
        .max_by(|&(r1, c1), &(r2, c2)| w.get(r1, c1).norm().total_cmp(&w.get(r2, c2).norm()))
        .expect("non-empty matrix");
    let theta = (m.get(r, c) / w.get(r, c)).arg();
    let oct = (theta / FRAC_PI_4).round() as i64;
    let phase = DyadicPhase::eighth(oct);
    if w.scale(phase.to_complex()).max_diff(m) > TOL {
        return Err(Error::NotCh3("global phase is not a multiple of π/4".into()));
    }
    Ok((word, phase))
}

/// Finds `i^m X^x Z^z` equal to `a`.
fn match_pauli(a: &Matrix) -> Result<PauliString> {
    let k = a.qubits();
    let d = a.dim;
    for x in 0..d {
        for z in 0..d {
            // tr(Q† A) / 2^k with Q = X^x Z^z
            let mut tr = Complex64::new(0.0, 0.0);
            for y in 0..d {
                let s = if (z & y).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                tr += a.get(y ^ x, y) * s;
            }
            let coef = tr / d as f64;
            if coef.norm() < 0.5 {
                continue;
            }
            let m = (coef.arg() / std::f64::consts::FRAC_PI_2).round().rem_euclid(4.0) as u8;
            let p = PauliString::from_parts(
                crate::bits::BitVec::from_u64(k, x as u64),
                crate::bits::BitVec::from_u64(k, z as u64),
                m,
            );
            if Matrix::pauli(&p).max_diff(a) <= TOL {
                return Ok(p);
            }
            return Err(Error::NotCh3("conjugated Pauli is not a Pauli".into()));
        }
    }
    Err(Error::NotCh3("conjugated Pauli is not a Pauli".into()))
}

/// Outcome of an exact evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactPauli {
    pub value: f64,
    pub imag_residue: f64,
    pub exact: ExactValue,
}

/// `⟨0|U† P U|0⟩` for `U = (∏ G_i) U_cl` with disjoint hierarchy-three `G_i`.
pub fn exact_pauli_ch3(n: usize, u_cl: &[CliffordGate], layer: &[Ch3Gate], p: &PauliString) -> Result<ExactPauli> {
    let psi = to_affine_form(&StabilizerTableau::from_word(n, u_cl))?;
    exact_pauli_from_state(&psi, layer, p)
}

/// Same, starting from an explicit stabilizer state `|ψ⟩ = U_cl|0⟩`.
pub fn exact_pauli_from_state(psi: &AffineForm, layer: &[Ch3Gate], p: &PauliString) -> Result<ExactPauli> {
    let n = psi.n();
    if p.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: p.n(),
        });
    }
    if !p.is_hermitian() {
        return Err(Error::InvalidInput("observable is not Hermitian".into()));
    }
    let mut used = vec![false; n];
    for g in layer {
        for &q in g.qubits() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            if std::mem::replace(&mut used[q], true) {
                return Err(Error::InvalidInput(format!("magic gates overlap on qubit {q}")));
            }
        }
    }
    // P = i^k ⊗ letters; each support takes its own letters
    let mut rest = p.clone();
    let mut phi = psi.clone();
    for g in layer {
        let mut local = p.restrict(g.qubits());
        local.set_i_power((local.y_count() % 4) as u8);
        let u = ch3_conjugate(g, &local)?;
        phi.apply_word(&u.word);
        phi.apply_phase(u.global_phase);
        for &q in g.qubits() {
            rest.set_letter(q, 'I');
        }
    }
    rest.set_i_power((rest.y_count() % 4) as u8);
    phi.apply_pauli(&rest);
    phi.apply_phase(DyadicPhase::quarter(p.letter_phase() as i64));
    let exact = psi.inner_product(&phi)?;
    let c = exact.to_complex();
    if c.im.abs() > TOL {
        return Err(Error::InvalidInput(format!(
            "expectation has imaginary part {:.3e}",
            c.im
        )));
    }
    Ok(ExactPauli {
        value: c.re,
        imag_residue: c.im,
        exact,
    })
}

/// Splits a magic-depth-one circuit into `U_cr · L · U_cl`, merging
/// overlapping magic gates, and evaluates `⟨P⟩` exactly.
pub fn exact_pauli_circuit(c: &Circuit, p: &PauliString) -> Result<ExactPauli> {
    let lf = layered_form(c)?;
    if lf.d() > 1 {
        return Err(Error::InvalidInput(format!("magic depth {} exceeds one", lf.d())));
    }
    let u_cl = lf.clifford_block(0).word;
    let (layer, p) = if lf.d() == 1 {
        let u_cr = lf.clifford_block(1).word;
        (merge_layer(&lf.layers[0])?, conjugate_by_word_dagger(p, &u_cr))
    } else {
        (Vec::new(), p.clone())
    };
    exact_pauli_ch3(c.n, &u_cl, &layer, &p)
}

/// Groups diagonal gates with overlapping supports into single tables.
pub fn merge_layer(gates: &[Gate]) -> Result<Vec<Ch3Gate>> {
    let mut groups: Vec<(Vec<usize>, Vec<&DiagonalGate>)> = Vec::new();
    for g in gates {
        let Gate::Diagonal(d) = g else {
            return Err(Error::NotCh3(format!("{} is not a dyadic diagonal", g.kind_name())));
        };
        let mut support = d.qubits.clone();
        let mut members = vec![d];
        let mut i = 0;
        while i < groups.len() {
            if groups[i].0.iter().any(|q| support.contains(q)) {
                let (s, m) = groups.swap_remove(i);
                for q in s {
                    if !support.contains(&q) {
                        support.push(q);
                    }
                }
                members.extend(m);
                i = 0;
            } else {
                i += 1;
            }
        }
        groups.push((support, members));
    }
    groups
        .into_iter()
        .map(|(support, members)| {
            if members.len() == 1 {
                return Ok(Ch3Gate::Diagonal(members[0].clone()));
            }
            let mut table = vec![DyadicPhase::ZERO; 1 << support.len()];
            for (v, t) in table.iter_mut().enumerate() {
                for d in &members {
                    let local = d.qubits.iter().enumerate().fold(0, |acc, (i, q)| {
                        let pos = support.iter().position(|s| s == q).unwrap();
                        acc | (v >> pos & 1) << i
                    });
                    *t += d.phase_at(local);
                }
            }
            Ok(Ch3Gate::Diagonal(DiagonalGate::new(DiagKind::Table(table), support)?))
        })
        .collect()
}
