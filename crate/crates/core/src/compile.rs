//! Circuit-to-circuit passes that trade ancilla qubits for magic depth.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bits::BitVec;
use crate::circuit::{apply_to_basis, layered_form, Circuit, DiagKind, DiagonalGate, Gate};
use crate::error::{Error, Result};
use crate::iqp::Iqp3;
use crate::pauli::PauliString;
use crate::phase::DyadicPhase;
use crate::phasepoly::parity_rotations;
use crate::stabilizer::CliffordGate;

/// Resource summary of one pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassReport {
    pub pass: String,
    pub ancilla_added: usize,
    /// `None` when the circuit has no layered form (non-affine permutations).
    pub depth_before: Option<usize>,
    pub depth_after: Option<usize>,
    pub counts_before: BTreeMap<String, usize>,
    pub counts_after: BTreeMap<String, usize>,
    /// Gates in the single designated diagonal layer, for passes that build one.
    pub layer_width: Option<usize>,
}

impl PassReport {
    pub fn new(pass: &str, before: Option<&Circuit>, after: &Circuit, layer_width: Option<usize>) -> Self {
        let depth = |c: &Circuit| layered_form(c).ok().map(|l| l.d());
        PassReport {
            pass: pass.into(),
            ancilla_added: after.n - before.map_or(after.n - after.ancilla.len(), |c| c.n),
            depth_before: before.and_then(depth),
            depth_after: depth(after),
            counts_before: before.map(Circuit::gate_counts).unwrap_or_default(),
            counts_after: after.gate_counts(),
            layer_width,
        }
    }
}

fn widened(c: &Circuit, extra: usize) -> Circuit {
    let mut out = Circuit::new(c.n + extra);
    out.ancilla = c.ancilla.clone();
    out.ancilla.extend(c.n..c.n + extra);
    out
}

fn onto(g: &Gate, targets: &[usize], n: usize) -> Gate {
    let mut map: Vec<usize> = (0..n).collect();
    for (q, &t) in g.qubits().iter().zip(targets) {
        map[*q] = t;
    }
    g.remap(&map)
}

/// Copies every diagonal gate's support onto fresh ancillas so that all of
/// them act simultaneously.
pub fn parallelize_diagonals(c: &Circuit) -> Result<(Circuit, PassReport)> {
    if let Some(g) = c.gates.iter().find(|g| !g.is_diagonal()) {
        return Err(Error::InvalidInput(format!("{} is not diagonal", g.kind_name())));
    }
    let extra: usize = c.gates.iter().map(|g| g.qubits().len()).sum();
    let mut out = widened(c, extra);
    let mut copies = Vec::with_capacity(extra);
    let mut layer = Vec::with_capacity(c.gates.len());
    let mut next = c.n;
    for g in &c.gates {
        let qs = g.qubits();
        let anc: Vec<usize> = (next..next + qs.len()).collect();
        next += qs.len();
        copies.extend(qs.iter().zip(&anc).map(|(&q, &a)| Gate::from(CliffordGate::Cnot(q, a))));
        layer.push(onto(g, &anc, out.n));
    }
    out.gates.extend(copies.iter().cloned());
    out.gates.extend(layer);
    out.gates.extend(copies);
    let report = PassReport::new("parallelize", Some(c), &out, Some(c.gates.len()));
    Ok((out, report))
}

fn local_table(g: &Gate) -> Option<Vec<DyadicPhase>> {
    match g {
        Gate::Diagonal(d) => Some(d.table()),
        Gate::Clifford(c) if c.is_diagonal() => {
            let qs = c.qubits();
            let local = onto(g, &(0..qs.len()).collect::<Vec<_>>(), qs.iter().max().map_or(0, |m| m + 1));
            (0..1u64 << qs.len())
                .map(|v| apply_to_basis(&local, &mut BitVec::from_u64(qs.len(), v)).ok())
                .collect()
        }
        _ => None,
    }
}

fn power_of(g: &Gate, base: &[DyadicPhase]) -> bool {
    let Some(t) = local_table(g) else {
        return false;
    };
    if t.len() != base.len() {
        return false;
    }
    let Some(i) = base.iter().position(|p| !p.is_zero()) else {
        return false;
    };
    let Some(k) = t[i].multiple_of(base[i]) else {
        return false;
    };
    t.iter().zip(base).all(|(a, b)| *a == b.times(k))
}

/// Moves every power of `d_gate` into one layer.
///
/// With `U = A₁A₂`, `A₂` the product of the other gates and `A₁` diagonal,
/// each `D^k` sees the wire values `h_j(y)` of the final string `y`. Those are
/// copied to fresh ancillas by running the other gates forward, applying all
/// `D^k` on the copies at once, then running backward and forward again.
pub fn compile_d_to_one_layer(c: &Circuit, d_gate: &Gate) -> Result<(Circuit, PassReport)> {
    let base = local_table(d_gate)
        .filter(|t| t.iter().any(|p| !p.is_zero()))
        .ok_or_else(|| Error::InvalidInput(format!("{} is not a nontrivial diagonal gate", d_gate.kind_name())))?;
    if let Some(g) = c.gates.iter().find(|g| !g.is_almost_classical()) {
        return Err(Error::NotAlmostClassical(format!("{} creates superpositions", g.kind_name())));
    }
    let is_d: Vec<bool> = c.gates.iter().map(|g| power_of(g, &base)).collect();
    let width = is_d.iter().filter(|&&b| b).count();
    if width <= 1 {
        return Ok((c.clone(), PassReport::new("d-one-layer", Some(c), c, Some(width))));
    }
    if let Some(g) = c.gates.iter().zip(&is_d).find(|(g, d)| !**d && matches!(g, Gate::Oracle { .. })) {
        return Err(Error::InvalidInput(format!("{} has no inverse", g.0.kind_name())));
    }
    let extra: usize = c.gates.iter().zip(&is_d).filter(|(_, d)| **d).map(|(g, _)| g.qubits().len()).sum();
    let mut out = widened(c, extra);
    let mut anc = Vec::with_capacity(width);
    let mut next = c.n;
    for (g, _) in c.gates.iter().zip(&is_d).filter(|(_, d)| **d) {
        let k = g.qubits().len();
        anc.push((next..next + k).collect::<Vec<_>>());
        next += k;
    }
    let copy = |g: &Gate, a: &[usize]| -> Vec<Gate> {
        g.qubits().iter().zip(a).map(|(&q, &t)| CliffordGate::Cnot(q, t).into()).collect()
    };
    let mut layer = Vec::with_capacity(width);
    let mut j = 0;
    for (g, &d) in c.gates.iter().zip(&is_d) {
        if d {
            out.gates.extend(copy(g, &anc[j]));
            layer.push(onto(g, &anc[j], out.n));
            j += 1;
        } else {
            out.gates.push(g.clone());
        }
    }
    out.gates.extend(layer);
    for (g, &d) in c.gates.iter().zip(&is_d).rev() {
        if d {
            j -= 1;
            out.gates.extend(copy(g, &anc[j]));
        } else {
            out.gates.push(g.inverse());
        }
    }
    out.gates.extend(c.gates.iter().zip(&is_d).filter(|(_, d)| !**d).map(|(g, _)| g.clone()));
    let report = PassReport::new("d-one-layer", Some(c), &out, Some(width));
    Ok((out, report))
}

/// The seven-T network for `CCZ` on qubits 0, 1, 2.
pub fn decompose_ccz() -> Circuit {
    use CliffordGate::Cnot;
    let gates = vec![
        Cnot(1, 2).into(),
        Gate::tdg(2),
        Cnot(0, 2).into(),
        Gate::t(2),
        Cnot(1, 2).into(),
        Gate::tdg(2),
        Cnot(0, 2).into(),
        Gate::t(1),
        Gate::t(2),
        Cnot(0, 1).into(),
        Gate::t(0),
        Gate::tdg(1),
        Cnot(0, 1).into(),
    ];
    Circuit::from_gates(3, gates).expect("fixed network")
}

/// `Z^{s·2^{1-l}}` on `q`, as a power of `T`.
fn rotation(q: usize, l: u32, sign: i64) -> Gate {
    if l <= 3 {
        Gate::t_pow(q, sign << (3 - l), 0)
    } else {
        Gate::t_pow(q, sign, l - 3)
    }
}

/// CNOT plus parity-rotation network for `C^kZ^{2^{k-l+1}}` on qubits `0..=k`,
/// before compilation to one layer.
fn ckz_network(k: u32, l: u32) -> Result<Circuit> {
    if l > 16 || k + 1 > l {
        return Err(Error::InvalidInput(format!("need 0 <= k <= l-1 and l <= 16, got k={k}, l={l}")));
    }
    let m = k as usize + 1;
    let mut num = vec![0i64; 1 << m];
    num[(1 << m) - 1] = 1;
    let (rot, c) = parity_rotations(&num, l - k - 1)?;
    debug_assert!(c.is_zero());
    let unit = DyadicPhase::new(1, l - 1);
    let mut out = Circuit::new(m);
    for (y, a) in rot.iter().enumerate().skip(1) {
        let sign = if *a == unit {
            1
        } else if *a == -unit {
            -1
        } else {
            return Err(Error::InvalidInput(format!("parity rotation {a} is not ±π/2^{}", l - 1)));
        };
        let bits: Vec<usize> = (0..m).filter(|i| y >> i & 1 == 1).collect();
        let (&t, rest) = bits.split_last().expect("nonzero parity");
        let cnots: Vec<Gate> = rest.iter().map(|&s| CliffordGate::Cnot(s, t).into()).collect();
        out.gates.extend(cnots.iter().cloned());
        out.gates.push(rotation(t, l, sign));
        out.gates.extend(cnots.into_iter().rev());
    }
    Ok(out)
}

/// `C^kZ^{2^{k-l+1}}` on `k+1` qubits from CNOTs and one layer of
/// `Z^{±2^{1-l}}`.
pub fn synth_ckz_one_layer(k: u32, l: u32) -> Result<(Circuit, PassReport)> {
    let net = ckz_network(k, l)?;
    let (out, mut report) = compile_d_to_one_layer(&net, &rotation(0, l, 1))?;
    report.pass = format!("ckz:{k},{l}");
    report.depth_before = None;
    report.counts_before = BTreeMap::new();
    report.ancilla_added = out.n - (k as usize + 1);
    Ok((out, report))
}

fn controlled_z(qs: Vec<usize>) -> Gate {
    match qs.as_slice() {
        [a] => CliffordGate::Z(*a).into(),
        [a, b] => CliffordGate::Cz(*a, *b).into(),
        [a, b, c] => Gate::ccz(*a, *b, *c),
        [a, b, c, d] => Gate::cccz(*a, *b, *c, *d),
        _ => Gate::cp(qs, DyadicPhase::PI).expect("distinct qubits"),
    }
}

fn controlled_s(qs: Vec<usize>) -> Gate {
    match qs.as_slice() {
        [a] => CliffordGate::S(*a).into(),
        [a, b] => Gate::cs(*a, *b),
        _ => Gate::cp(qs, DyadicPhase::quarter(1)).expect("distinct qubits"),
    }
}

/// `C^{m+m'-1}Z` on `m+m'` data qubits and one ancilla, as two diagonal layers
/// around `H S† H` on the ancilla, using `(-1)^{ab} = i^a i^b (-i)^{a⊕b}`.
pub fn synth_clz_sandwich(m: usize, m2: usize) -> Result<(Circuit, PassReport)> {
    if m == 0 || m2 == 0 {
        return Err(Error::InvalidInput("both halves need at least one qubit".into()));
    }
    let c = m + m2;
    let a: Vec<usize> = (0..m).collect();
    let b: Vec<usize> = (m..c).collect();
    let with_c = |v: &[usize]| v.iter().copied().chain([c]).collect::<Vec<_>>();
    let mut out = Circuit::new(c + 1);
    out.ancilla = vec![c];
    out.push(CliffordGate::H(c));
    out.gates.push(controlled_z(with_c(&a)));
    out.gates.push(controlled_z(with_c(&b)));
    out.gates.push(controlled_s(a.clone()));
    out.gates.push(controlled_s(b.clone()));
    out.push(CliffordGate::H(c));
    out.push(CliffordGate::Sdg(c));
    out.push(CliffordGate::H(c));
    out.gates.push(controlled_z(with_c(&a)));
    out.gates.push(controlled_z(with_c(&b)));
    out.push(CliffordGate::H(c));
    let report = PassReport::new(&format!("clz:{m},{m2}"), None, &out, None);
    Ok((out, report))
}

/// Replaces each magic diagonal by a CNOT network of single-qubit rotations.
fn lower_diagonal(g: &Gate, n: usize) -> Result<Vec<Gate>> {
    let Gate::Diagonal(DiagonalGate { kind, qubits }) = g else {
        return Ok(vec![g.clone()]);
    };
    let net = match (kind, qubits.len()) {
        (DiagKind::T { .. }, _) => return Ok(vec![g.clone()]),
        (DiagKind::Ccz, _) => decompose_ccz(),
        (DiagKind::Cs, _) => ckz_network(1, 3)?,
        (DiagKind::Cccz, _) => ckz_network(3, 4)?,
        (DiagKind::Cp(p), k) if *p == DyadicPhase::PI => ckz_network(k as u32 - 1, k as u32)?,
        (DiagKind::Cp(p), 2) if *p == DyadicPhase::quarter(1) => ckz_network(1, 3)?,
        _ => {
            return Err(Error::InvalidInput(format!(
                "no rotation network for {}",
                g.kind_name()
            )))
        }
    };
    let mut map: Vec<usize> = (0..n).collect();
    map[..qubits.len()].copy_from_slice(qubits);
    Ok(net.gates.iter().map(|h| h.remap(&map)).collect())
}

fn lower_all(gates: &[Gate], n: usize) -> Result<Circuit> {
    let mut out = Circuit::new(n);
    for g in gates {
        out.gates.extend(lower_diagonal(g, n)?);
    }
    Ok(out)
}

/// `H^{⊗n} D H^{⊗n}` with all of `D` in one layer of `T^{±1}` on ancillas.
/// `⟨0|H^{⊗n}DH^{⊗n}|0⟩` equals `⟨0,0|U|0,0⟩`.
pub fn iqp3_to_tdepth1(iqp: &Iqp3) -> Result<(Circuit, PassReport)> {
    if iqp.max_degree() > 3 {
        return Err(Error::InvalidInput(format!("term of degree {} exceeds three", iqp.max_degree())));
    }
    let n = iqp.n;
    let diag = Circuit::from_gates(n, iqp.diagonal_gates())?;
    let (par, _) = parallelize_diagonals(&diag)?;
    let lowered = {
        let mut l = lower_all(&par.gates, par.n)?;
        l.ancilla = par.ancilla.clone();
        l
    };
    let (mid, inner) = compile_d_to_one_layer(&lowered, &Gate::t(0))?;
    let mut out = widened(&Circuit::new(n), mid.n - n);
    for q in 0..n {
        out.push(CliffordGate::H(q));
    }
    out.gates.extend(mid.gates);
    for q in 0..n {
        out.push(CliffordGate::H(q));
    }
    let report = PassReport::new("iqp3-td1", Some(&iqp.circuit()), &out, inner.layer_width);
    Ok((out, report))
}

/// Ancilla qubit 0 controls `D` on qubits `1..=n`, prepared in `|+^n⟩`.
/// `⟨Z_0⟩ = Re⟨+^n|D|+^n⟩`.
pub fn build_hadamard_test(iqp: &Iqp3) -> (Circuit, PauliString) {
    let n = iqp.n + 1;
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(CliffordGate::H(q));
    }
    for t in &iqp.terms {
        c.gates.push(controlled_z([0].into_iter().chain(t.iter().map(|q| q + 1)).collect()));
    }
    c.push(CliffordGate::H(0));
    (c, PauliString::z_on(n, 0))
}

/// Compiles the controlled diagonal of a Hadamard-test circuit.
///
/// `"thalf-depth1"` gives one layer of powers of `T^{1/2}`; `"t-depth2"` splits
/// each `CCCZ` into two layers of `CCZ`/`CS` and gives two layers of `T^{±1}`.
pub fn compile_hadamard_test(c: &Circuit, mode: &str) -> Result<(Circuit, PassReport)> {
    if mode != "thalf-depth1" && mode != "t-depth2" {
        return Err(Error::InvalidInput(format!("unknown mode {mode:?}")));
    }
    let Some(first) = c.gates.iter().position(Gate::is_diagonal) else {
        return Ok((c.clone(), PassReport::new(&format!("htest-compile:{mode}"), Some(c), c, None)));
    };
    let last = c.gates.iter().rposition(Gate::is_diagonal).expect("some diagonal gate");
    let middle = &c.gates[first..=last];
    if let Some(g) = middle.iter().find(|g| !g.is_diagonal()) {
        return Err(Error::InvalidInput(format!("{} inside the controlled diagonal", g.kind_name())));
    }
    let mut out = c.clone();
    out.gates.truncate(first);
    let suffix = &c.gates[last + 1..];
    if mode == "thalf-depth1" {
        let lowered = lower_all(middle, c.n)?;
        let (mid, _) = compile_d_to_one_layer(&lowered, &Gate::t_pow(0, 1, 1))?;
        out = splice(out, mid, suffix);
    } else {
        let cccz = middle.iter().filter(|g| g.qubits().len() == 4).count();
        let sandwich_anc: Vec<usize> = (c.n..c.n + cccz).collect();
        let mut first_layer = Vec::new();
        let mut second_layer = Vec::new();
        let mut j = 0;
        for g in middle {
            let qs = g.qubits();
            if qs.len() != 4 {
                first_layer.push(g.clone());
                continue;
            }
            let (a, b) = (&qs[..2], &qs[2..]);
            let anc = sandwich_anc[j];
            j += 1;
            let (sw, _) = synth_clz_sandwich(2, 2)?;
            let mut map: Vec<usize> = a.iter().chain(b).copied().collect();
            map.push(anc);
            let sw: Vec<Gate> = sw.gates.iter().map(|h| h.remap(&map)).collect();
            // H, four diagonals, H S† H, two diagonals, H
            first_layer.extend(sw[1..5].iter().cloned());
            second_layer.extend(sw[8..10].iter().cloned());
        }
        out = grow(out, cccz);
        for &a in &sandwich_anc {
            out.push(CliffordGate::H(a));
        }
        let (l1, _) = compile_d_to_one_layer(&lower_all(&first_layer, out.n)?, &Gate::t(0))?;
        out = splice(out, l1, &[]);
        for &a in &sandwich_anc {
            out.push(CliffordGate::H(a));
            out.push(CliffordGate::Sdg(a));
            out.push(CliffordGate::H(a));
        }
        let (l2, _) = compile_d_to_one_layer(&lower_all(&second_layer, out.n)?, &Gate::t(0))?;
        out = splice(out, l2, &[]);
        for &a in &sandwich_anc {
            out.push(CliffordGate::H(a));
        }
        out.gates.extend(suffix.iter().cloned());
    }
    let report = PassReport::new(&format!("htest-compile:{mode}"), Some(c), &out, None);
    Ok((out, report))
}

/// Appends `mid` (whose extra qubits become new ancillas) and then `suffix`.
fn splice(head: Circuit, mid: Circuit, suffix: &[Gate]) -> Circuit {
    let extra = mid.n - head.n;
    let mut out = grow(head, extra);
    out.gates.extend(mid.gates);
    out.gates.extend(suffix.iter().cloned());
    out
}

fn grow(mut c: Circuit, extra: usize) -> Circuit {
    c.ancilla.extend(c.n..c.n + extra);
    c.n += extra;
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::propagate_basis;
    use crate::oracle::{iqp3_amplitude_bruteforce, simulate_sparse, NamedOracles};
    use crate::pathint::{path_integral_amplitude, LayerStack, PathOptions};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Checks that `out` acts on its first `data` qubits as `reference` and
    /// returns every ancilla to zero, on all basis inputs.
    fn same_action(reference: &Circuit, out: &Circuit) {
        let data = reference.n;
        for v in 0..1u64 << data {
            let x = BitVec::from_u64(data, v);
            let (y, p) = propagate_basis(reference, &x).unwrap();
            let mut xx = BitVec::zeros(out.n);
            for q in 0..data {
                xx.set(q, x.get(q));
            }
            let (yy, pp) = propagate_basis(out, &xx).unwrap();
            for q in 0..out.n {
                assert_eq!(yy.get(q), if q < data { y.get(q) } else { false }, "qubit {q} on input {v}");
            }
            assert_eq!(p, pp, "phase on input {v}");
        }
    }

    fn ccz_phases(c: &Circuit) {
        for v in 0..8 {
            let (y, p) = propagate_basis(c, &BitVec::from_u64(3, v)).unwrap();
            assert_eq!(y, BitVec::from_u64(3, v));
            assert_eq!(p, if v == 7 { DyadicPhase::PI } else { DyadicPhase::ZERO });
        }
    }

    fn magic_layer_count(c: &Circuit) -> usize {
        layered_form(c).unwrap().d()
    }

    #[test]
    fn parallelize_examples() {
        let c = Circuit::from_gates(2, vec![Gate::t(0), Gate::cs(0, 1)]).unwrap();
        let (out, r) = parallelize_diagonals(&c).unwrap();
        assert_eq!(r.ancilla_added, 3);
        assert_eq!(out.gate_counts()["CNOT"], 6);
        assert_eq!(r.depth_after, Some(1));
        same_action(&c, &out);

        let (out, r) = parallelize_diagonals(&Circuit::from_gates(1, vec![Gate::t(0)]).unwrap()).unwrap();
        assert_eq!((r.ancilla_added, out.gates.len()), (1, 3));
        assert_eq!(out.gates[1], Gate::t(1));

        let (out, r) = parallelize_diagonals(&Circuit::new(2)).unwrap();
        assert!(out.gates.is_empty());
        assert_eq!(r.ancilla_added, 0);
    }

    #[test]
    fn parallelize_rejects_h() {
        let c = Circuit::from_gates(1, vec![CliffordGate::H(0).into()]).unwrap();
        assert!(parallelize_diagonals(&c).is_err());
    }

    #[test]
    fn ccz_network() {
        let c = decompose_ccz();
        assert_eq!(c.t_count(), 7);
        ccz_phases(&c);
        let twice = c.then(&c);
        for v in 0..8 {
            assert!(propagate_basis(&twice, &BitVec::from_u64(3, v)).unwrap().1.is_zero());
        }
    }

    #[test]
    fn ccz_network_to_one_layer() {
        let (out, r) = compile_d_to_one_layer(&decompose_ccz(), &Gate::t(0)).unwrap();
        assert!(r.depth_before.unwrap() > 1);
        assert_eq!(r.depth_after, Some(1));
        assert_eq!(r.layer_width, Some(7));
        assert_eq!(out.t_count(), 7);
        same_action(&decompose_ccz(), &out);
    }

    #[test]
    fn one_layer_input_is_unchanged() {
        let c = Circuit::from_gates(2, vec![CliffordGate::Cnot(0, 1).into(), Gate::t(1)]).unwrap();
        let (out, r) = compile_d_to_one_layer(&c, &Gate::t(0)).unwrap();
        assert_eq!(out, c);
        assert_eq!(r.depth_before, r.depth_after);
    }

    #[test]
    fn one_layer_rejects_h() {
        let c = Circuit::from_gates(1, vec![CliffordGate::H(0).into(), Gate::t(0)]).unwrap();
        assert!(matches!(compile_d_to_one_layer(&c, &Gate::t(0)), Err(Error::NotAlmostClassical(_))));
    }

    #[test]
    fn one_layer_through_toffoli() {
        let toffoli = Gate::perm(vec![0, 1, 2], vec![0, 1, 2, 7, 4, 5, 6, 3]).unwrap();
        let c = Circuit::from_gates(
            3,
            vec![Gate::t(2), toffoli.clone(), Gate::t(2), CliffordGate::S(1).into(), toffoli, Gate::tdg(2), Gate::t(0)],
        )
        .unwrap();
        let (out, r) = compile_d_to_one_layer(&c, &Gate::t(0)).unwrap();
        assert_eq!(r.layer_width, Some(5));
        same_action(&c, &out);
    }

    #[test]
    fn ckz_examples() {
        let (c, r) = synth_ckz_one_layer(2, 3).unwrap();
        assert_eq!(r.depth_after, Some(1));
        assert_eq!(r.layer_width, Some(7));
        same_action(&Circuit::from_gates(3, vec![Gate::ccz(0, 1, 2)]).unwrap(), &c);

        let (c, r) = synth_ckz_one_layer(3, 4).unwrap();
        assert_eq!(r.layer_width, Some(15));
        assert_eq!(r.depth_after, Some(1));
        same_action(&Circuit::from_gates(4, vec![Gate::cccz(0, 1, 2, 3)]).unwrap(), &c);

        let (c, _) = synth_ckz_one_layer(0, 1).unwrap();
        assert_eq!(c.gates, vec![Gate::t_pow(0, 4, 0)]);
        assert!(synth_ckz_one_layer(3, 3).is_err());
        assert!(synth_ckz_one_layer(1, 17).is_err());
    }

    #[test]
    fn ckz_angles_are_exact() {
        for l in 1..=5u32 {
            for k in 0..=3u32.min(l - 1) {
                let (c, r) = synth_ckz_one_layer(k, l).unwrap();
                let unit = DyadicPhase::new(1, l - 1);
                let rotations: Vec<_> = c.gates.iter().filter(|g| g.is_diagonal()).collect();
                assert!(rotations.len() < 1 << (k + 1));
                assert_eq!(r.layer_width, Some(rotations.len()));
                for g in rotations {
                    let Gate::Diagonal(d) = g else { panic!("{g:?}") };
                    assert_eq!(d.qubits.len(), 1);
                    assert!(d.phase_at(0).is_zero());
                    assert!(d.phase_at(1) == unit || d.phase_at(1) == -unit);
                }
                let target = Gate::cp((0..=k as usize).collect(), DyadicPhase::new(1, l - k - 1)).unwrap();
                same_action(&Circuit::from_gates(k as usize + 1, vec![target]).unwrap(), &c);
            }
        }
    }

    fn dense_equal_on_zero_ancilla(target: &Circuit, out: &Circuit) {
        let cols = crate::oracle::unitary(target, &NamedOracles::new()).unwrap();
        for (v, col) in cols.iter().enumerate() {
            let x = BitVec::from_u64(out.n, v as u64);
            let s = simulate_sparse(out, &x, &NamedOracles::new(), 1 << 20).unwrap();
            for w in 0..1u64 << out.n {
                let y = BitVec::from_u64(out.n, w);
                let expect = if w >> target.n == 0 {
                    col.amplitude(&BitVec::from_u64(target.n, w))
                } else {
                    num_complex::Complex64::new(0.0, 0.0)
                };
                assert!((s.amplitude(&y) - expect).norm() < 1e-12, "column {v} row {w}");
            }
        }
    }

    #[test]
    fn sandwich_realizes_cccz() {
        let (c, r) = synth_clz_sandwich(2, 2).unwrap();
        assert_eq!(c.n, 5);
        assert_eq!(r.depth_after, Some(2));
        let target = Circuit::from_gates(4, vec![Gate::cccz(0, 1, 2, 3)]).unwrap();
        dense_equal_on_zero_ancilla(&target, &c);
    }

    #[test]
    fn sandwich_small_and_uneven() {
        let (c, _) = synth_clz_sandwich(1, 1).unwrap();
        dense_equal_on_zero_ancilla(&Circuit::from_gates(2, vec![CliffordGate::Cz(0, 1).into()]).unwrap(), &c);
        let (c, r) = synth_clz_sandwich(1, 3).unwrap();
        assert_eq!(r.depth_after, Some(2));
        dense_equal_on_zero_ancilla(&Circuit::from_gates(4, vec![Gate::cccz(0, 1, 2, 3)]).unwrap(), &c);
        assert!(synth_clz_sandwich(0, 2).is_err());
    }

    fn zero_amplitude(c: &Circuit) -> num_complex::Complex64 {
        let stack = LayerStack::from_circuit(c, &NamedOracles::new()).unwrap();
        path_integral_amplitude(&stack, &BitVec::zeros(c.n), PathOptions::default()).unwrap().value()
    }

    #[test]
    fn iqp_single_ccz() {
        let iqp = Iqp3::new(3, vec![vec![0, 1, 2]]).unwrap();
        let (c, r) = iqp3_to_tdepth1(&iqp).unwrap();
        assert_eq!(r.depth_after, Some(1));
        assert!((zero_amplitude(&c) - num_complex::Complex64::new(0.75, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn iqp_clifford_terms_need_no_t() {
        let iqp = Iqp3::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        let (c, r) = iqp3_to_tdepth1(&iqp).unwrap();
        assert_eq!(c.t_count(), 0);
        assert_eq!(r.depth_after, Some(0));
    }

    #[test]
    fn iqp_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let iqp = Iqp3::random(4, 0.4, &mut rng);
            let (c, r) = iqp3_to_tdepth1(&iqp).unwrap();
            assert!(r.depth_after.unwrap() <= 1);
            assert!(r.ancilla_added <= 4 * 3 * iqp.terms.len());
            for g in c.gates.iter().filter(|g| g.is_magic()) {
                assert!(matches!(g, Gate::Diagonal(DiagonalGate { kind: DiagKind::T { num: 1 | -1 | 7, den_log2: 0 }, .. })), "{g:?}");
            }
            let want = iqp3_amplitude_bruteforce(&iqp).unwrap().value();
            assert!((zero_amplitude(&c) - num_complex::Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    fn z0(c: &Circuit) -> f64 {
        let s = simulate_sparse(c, &BitVec::zeros(c.n), &NamedOracles::new(), 1 << 22).unwrap();
        s.entries().iter().map(|(x, a)| if x.get(0) { -a.norm_sqr() } else { a.norm_sqr() }).sum()
    }

    #[test]
    fn hadamard_test_examples() {
        let (c, p) = build_hadamard_test(&Iqp3::new(3, vec![vec![0, 1, 2]]).unwrap());
        assert_eq!(c.gate_counts()["CCCZ"], 1);
        assert_eq!(p, PauliString::z_on(4, 0));
        assert!((z0(&c) - 0.75).abs() < 1e-12);
        let (c, _) = build_hadamard_test(&Iqp3::new(2, vec![]).unwrap());
        assert!((z0(&c) - 1.0).abs() < 1e-12);
        let (c, _) = build_hadamard_test(&Iqp3::new(1, vec![vec![0]]).unwrap());
        assert!(z0(&c).abs() < 1e-12);
    }

    #[test]
    fn hadamard_test_compiled() {
        let (c, _) = build_hadamard_test(&Iqp3::new(3, vec![vec![0, 1, 2]]).unwrap());
        let (a, ra) = compile_hadamard_test(&c, "thalf-depth1").unwrap();
        assert_eq!(ra.depth_after, Some(1));
        assert!((z0(&a) - 0.75).abs() < 1e-12);
        for g in a.gates.iter().filter(|g| g.is_magic()) {
            assert!(power_of(g, &local_table(&Gate::t_pow(0, 1, 1)).unwrap()), "{g:?}");
        }
        let (b, rb) = compile_hadamard_test(&c, "t-depth2").unwrap();
        assert_eq!(rb.depth_after, Some(2));
        assert!((z0(&b) - 0.75).abs() < 1e-12);
        for g in b.gates.iter().filter(|g| g.is_magic()) {
            assert!(power_of(g, &local_table(&Gate::t(0)).unwrap()) && g.kind_name() == "T", "{g:?}");
        }
        assert!(compile_hadamard_test(&c, "t-depth3").is_err());
        let (id, _) = build_hadamard_test(&Iqp3::new(2, vec![]).unwrap());
        let (out, r) = compile_hadamard_test(&id, "t-depth2").unwrap();
        assert_eq!(out, id);
        assert_eq!(r.depth_after, Some(0));
    }

    #[test]
    fn hadamard_test_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..3 {
            let iqp = Iqp3::random(3, 0.5, &mut rng);
            let want = iqp3_amplitude_bruteforce(&iqp).unwrap().value();
            let (c, _) = build_hadamard_test(&iqp);
            for mode in ["thalf-depth1", "t-depth2"] {
                let (out, _) = compile_hadamard_test(&c, mode).unwrap();
                assert!((z0(&out) - want).abs() < 1e-10, "{mode}");
            }
        }
    }

    fn diagonal_strategy(n: usize) -> impl Strategy<Value = Vec<Gate>> {
        let gate = (0..5usize, proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=3.min(n)), 1..8i64)
            .prop_map(|(kind, qs, k)| match (kind, qs.len()) {
                (_, 1) => Gate::t_pow(qs[0], k, 0),
                (0, _) => controlled_z(qs),
                (1, 2) => Gate::cs(qs[0], qs[1]),
                (_, 3) => Gate::ccz(qs[0], qs[1], qs[2]),
                _ => Gate::cp(qs, DyadicPhase::new(k, 2)).unwrap(),
            });
        proptest::collection::vec(gate, 0..6)
    }

    fn classical_strategy(n: usize) -> impl Strategy<Value = Vec<Gate>> {
        let gate = (0..4usize, 0..n, 0..n, 1..8i64).prop_map(move |(kind, a, b, k)| {
            let b = if a == b { (a + 1) % n } else { b };
            match kind {
                0 => Gate::t_pow(a, k, 0),
                1 => CliffordGate::Cnot(a, b).into(),
                2 => CliffordGate::X(a).into(),
                _ => CliffordGate::Cz(a, b).into(),
            }
        });
        proptest::collection::vec(gate, 0..12)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn parallelize_preserves_action(gates in diagonal_strategy(4)) {
            let c = Circuit::from_gates(4, gates).unwrap();
            let (out, r) = parallelize_diagonals(&c).unwrap();
            same_action(&c, &out);
            prop_assert!(r.depth_after.unwrap() <= 1);
            prop_assert_eq!(r.depth_after, Some(magic_layer_count(&out)));
        }

        #[test]
        fn one_layer_preserves_action(gates in classical_strategy(4)) {
            let c = Circuit::from_gates(4, gates).unwrap();
            let (out, r) = compile_d_to_one_layer(&c, &Gate::t(0)).unwrap();
            same_action(&c, &out);
            prop_assert!(r.depth_after.unwrap() <= 1);
            prop_assert_eq!(r.depth_after, Some(magic_layer_count(&out)));
        }
    }
}
