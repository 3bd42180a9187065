//! Seeded random instances for tests, benchmarks and the acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, Gate};
use crate::exact::{Ch3Gate, Matrix};
use crate::pauli::PauliString;
use crate::stabilizer::CliffordGate;

/// Uniformly chosen gates from `{H, S, S†, X, Z, CNOT, CZ}`.
pub fn clifford_word<R: Rng>(n: usize, len: usize, rng: &mut R) -> Vec<CliffordGate> {
    use CliffordGate::*;
    (0..len)
        .map(|_| {
            let q = rng.gen_range(0..n);
            let mut r = rng.gen_range(0..n);
            if n > 1 && r == q {
                r = (r + 1 + rng.gen_range(0..n - 1)) % n;
            }
            match rng.gen_range(0..8) {
                0 | 1 => H(q),
                2 => S(q),
                3 => Sdg(q),
                4 if n > 1 => Cnot(q, r),
                5 if n > 1 => Cz(q, r),
                6 => Z(q),
                _ => X(q),
            }
        })
        .collect()
}

/// Uniform Hermitian Pauli string with a random sign.
pub fn pauli<R: Rng>(n: usize, rng: &mut R) -> PauliString {
    let mut p = PauliString::identity(n);
    for q in 0..n {
        p.set_letter(q, ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]);
    }
    if rng.gen_bool(0.5) {
        p.mul_i(2);
    }
    p
}

/// A word deep enough to scramble `n` qubits.
pub fn scrambling_word<R: Rng>(n: usize, rng: &mut R) -> Vec<CliffordGate> {
    let mut w: Vec<CliffordGate> = (0..n).map(CliffordGate::H).collect();
    w.extend(clifford_word(n, 8 * n + 4, rng));
    w
}

fn pick<R: Rng>(free: &mut Vec<usize>, k: usize, rng: &mut R) -> Vec<usize> {
    free.shuffle(rng);
    free.split_off(free.len() - k)
}

/// A named diagonal gate of the third hierarchy level (or lower) on `qs`.
pub fn named_ch3<R: Rng>(qs: &[usize], rng: &mut R) -> Gate {
    match qs.len() {
        1 => Gate::t_pow(qs[0], rng.gen_range(1..8), 0),
        2 => {
            if rng.gen_bool(0.5) {
                Gate::cs(qs[0], qs[1])
            } else {
                Gate::cs(qs[0], qs[1]).inverse()
            }
        }
        _ => Gate::ccz(qs[0], qs[1], qs[2]),
    }
}

/// `C_1 D C_2` with local Cliffords `C_i` and a named third-level diagonal `D`.
pub fn dense_ch3<R: Rng>(qubits: Vec<usize>, rng: &mut R) -> Ch3Gate {
    let k = qubits.len();
    let local: Vec<usize> = (0..k).collect();
    let d = match named_ch3(&local, rng) {
        Gate::Diagonal(d) => Ch3Gate::Diagonal(d).matrix(),
        _ => unreachable!(),
    };
    let c1 = Matrix::word(k, &clifford_word(k, 4 * k + 2, rng));
    let c2 = Matrix::word(k, &clifford_word(k, 4 * k + 2, rng));
    Ch3Gate::dense(qubits, c1.mul(&d).mul(&c2)).expect("product of unitaries")
}

/// Disjoint gates from `{T^k, S^k, CS, CZ, CCZ, dense}` covering part of the register.
pub fn ch3_layer<R: Rng>(n: usize, rng: &mut R) -> Vec<Ch3Gate> {
    let mut free: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    while !free.is_empty() {
        if rng.gen_bool(0.2) {
            free.pop();
            continue;
        }
        let k = rng.gen_range(1..=3usize.min(free.len()));
        let qs = pick(&mut free, k, rng);
        let g = match rng.gen_range(0..6) {
            0 => dense_ch3(qs, rng),
            1 if k == 1 => diag(Gate::t_pow(qs[0], 2 * rng.gen_range(1..4), 0)),
            1 if k == 2 => diag(Gate::cp(qs, crate::DyadicPhase::PI).expect("two qubits")),
            _ => diag(named_ch3(&qs, rng)),
        };
        out.push(g);
    }
    out
}

fn diag(g: Gate) -> Ch3Gate {
    match g {
        Gate::Diagonal(d) => Ch3Gate::Diagonal(d),
        _ => unreachable!("named diagonals"),
    }
}

/// Possibly overlapping magic diagonals, including levels above three.
pub fn magic_diagonals<R: Rng>(n: usize, count: usize, rng: &mut R) -> Vec<Gate> {
    let mut all: Vec<usize> = (0..n).collect();
    (0..count)
        .map(|_| {
            all.shuffle(rng);
            let k = rng.gen_range(1..=4usize.min(n));
            let qs = all[..k].to_vec();
            match (k, rng.gen_range(0..3)) {
                (1, 0) => Gate::t_pow(qs[0], 1, 1),
                (4, _) => Gate::cccz(qs[0], qs[1], qs[2], qs[3]),
                (_, 2) if k > 1 => {
                    Gate::cp(qs, crate::DyadicPhase::new(rng.gen_range(1..8), 2)).expect("valid support")
                }
                _ => named_ch3(&qs[..k.min(3)], rng),
            }
        })
        .collect()
}

/// `C_d D_d ⋯ D_1 C_0` with `d` layers of magic diagonals.
pub fn layered_circuit<R: Rng>(n: usize, d: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n);
    for g in scrambling_word(n, rng) {
        c.push(g);
    }
    for _ in 0..d {
        let count = rng.gen_range(1..=n.max(1));
        c.extend(magic_diagonals(n, count, rng));
        for g in clifford_word(n, 3 * n + 2, rng) {
            c.push(g);
        }
        for q in 0..n {
            if rng.gen_bool(0.5) {
                c.push(CliffordGate::H(q));
            }
        }
    }
    c
}

/// `C_d D_d ⋯ D_1 C_0` whose final block `C_d` only permutes basis strings.
pub fn classical_tail_circuit<R: Rng>(n: usize, d: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n);
    for g in scrambling_word(n, rng) {
        c.push(g);
    }
    for i in 0..d {
        let count = rng.gen_range(1..=n.max(1));
        c.extend(magic_diagonals(n, count, rng));
        if i + 1 == d {
            break;
        }
        for g in clifford_word(n, 3 * n + 2, rng) {
            c.push(g);
        }
        for q in 0..n {
            if rng.gen_bool(0.5) {
                c.push(CliffordGate::H(q));
            }
        }
    }
    for _ in 0..2 * n {
        let q = rng.gen_range(0..n);
        let r = (q + rng.gen_range(1..n.max(2))) % n;
        match rng.gen_range(0..3) {
            0 if n > 1 => c.push(CliffordGate::Cnot(q, r)),
            1 => c.push(CliffordGate::S(q)),
            _ => c.push(CliffordGate::X(q)),
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn layers_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let layer = ch3_layer(9, &mut rng);
            let mut seen = [false; 9];
            for g in &layer {
                for &q in g.qubits() {
                    assert!(!std::mem::replace(&mut seen[q], true));
                }
            }
        }
    }

    #[test]
    fn layered_circuit_has_requested_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 1..4 {
            let c = layered_circuit(5, d, &mut rng);
            assert!(crate::circuit::layered_form(&c).unwrap().d() <= d);
        }
    }
}
