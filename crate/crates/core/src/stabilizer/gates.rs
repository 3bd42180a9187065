use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pauli::PauliString;

/// Clifford generators understood by the tableau and affine-form engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> Vec<usize> {
        use CliffordGate::*;
        match *self {
            H(q) | S(q) | Sdg(q) | X(q) | Y(q) | Z(q) => vec![q],
            Cnot(a, b) | Cz(a, b) | Swap(a, b) => vec![a, b],
        }
    }

    pub fn max_qubit(&self) -> usize {
        self.qubits().into_iter().max().unwrap_or(0)
    }

    pub fn inverse(&self) -> CliffordGate {
        match *self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            g => g,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        use CliffordGate::*;
        matches!(self, S(_) | Sdg(_) | Z(_) | Cz(..))
    }

    /// Relabels qubit `j` as `map[j]`.
    pub fn remap(&self, map: &[usize]) -> CliffordGate {
        use CliffordGate::*;
        match *self {
            H(q) => H(map[q]),
            S(q) => S(map[q]),
            Sdg(q) => Sdg(map[q]),
            X(q) => X(map[q]),
            Y(q) => Y(map[q]),
            Z(q) => Z(map[q]),
            Cnot(a, b) => Cnot(map[a], map[b]),
            Cz(a, b) => Cz(map[a], map[b]),
            Swap(a, b) => Swap(map[a], map[b]),
        }
    }

    /// `P ← G P G†`.
    pub fn conjugate(&self, p: &mut PauliString) {
        use CliffordGate::*;
        match *self {
            H(q) => {
                let (x, z) = (p.x_bits().get(q), p.z_bits().get(q));
                p.x_mut().set(q, z);
                p.z_mut().set(q, x);
                if x && z {
                    p.mul_i(2);
                }
            }
            S(q) | Sdg(q) => {
                if p.x_bits().get(q) {
                    p.z_mut().flip(q);
                    p.mul_i(if matches!(self, S(_)) { 1 } else { 3 });
                }
            }
            X(q) => {
                if p.z_bits().get(q) {
                    p.mul_i(2);
                }
            }
            Z(q) => {
                if p.x_bits().get(q) {
                    p.mul_i(2);
                }
            }
            Y(q) => {
                if p.x_bits().get(q) != p.z_bits().get(q) {
                    p.mul_i(2);
                }
            }
            Cnot(c, t) => {
                if p.x_bits().get(c) {
                    p.x_mut().flip(t);
                }
                if p.z_bits().get(t) {
                    p.z_mut().flip(c);
                }
            }
            Cz(a, b) => {
                let (xa, xb) = (p.x_bits().get(a), p.x_bits().get(b));
                if xb {
                    p.z_mut().flip(a);
                }
                if xa {
                    p.z_mut().flip(b);
                }
                if xa && xb {
                    p.mul_i(2);
                }
            }
            Swap(a, b) => {
                let (xa, za) = (p.x_bits().get(a), p.z_bits().get(a));
                let (xb, zb) = (p.x_bits().get(b), p.z_bits().get(b));
                p.x_mut().set(a, xb);
                p.z_mut().set(a, zb);
                p.x_mut().set(b, xa);
                p.z_mut().set(b, za);
            }
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CliffordGate::*;
        match *self {
            H(q) => write!(f, "H({q})"),
            S(q) => write!(f, "S({q})"),
            Sdg(q) => write!(f, "Sdg({q})"),
            X(q) => write!(f, "X({q})"),
            Y(q) => write!(f, "Y({q})"),
            Z(q) => write!(f, "Z({q})"),
            Cnot(a, b) => write!(f, "CNOT({a},{b})"),
            Cz(a, b) => write!(f, "CZ({a},{b})"),
            Swap(a, b) => write!(f, "SWAP({a},{b})"),
        }
    }
}

/// `U P U†` for `U = g_m ⋯ g_1` (gates listed in application order).
pub fn conjugate_by_word(p: &PauliString, word: &[CliffordGate]) -> PauliString {
    let mut out = p.clone();
    for g in word {
        g.conjugate(&mut out);
    }
    out
}

/// `U† P U` for `U = g_m ⋯ g_1`.
pub fn conjugate_by_word_dagger(p: &PauliString, word: &[CliffordGate]) -> PauliString {
    let mut out = p.clone();
    for g in word.iter().rev() {
        g.inverse().conjugate(&mut out);
    }
    out
}

/// Inverse word.
pub fn invert_word(word: &[CliffordGate]) -> Vec<CliffordGate> {
    word.iter().rev().map(CliffordGate::inverse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use CliffordGate::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn conj(g: CliffordGate, s: &str) -> PauliString {
        conjugate_by_word(&p(s), &[g])
    }

    #[test]
    fn single_qubit_rules() {
        assert_eq!(conj(H(0), "X"), p("Z"));
        assert_eq!(conj(H(0), "Y"), p("-Y"));
        assert_eq!(conj(S(0), "X"), p("Y"));
        assert_eq!(conj(S(0), "Y"), p("-X"));
        assert_eq!(conj(Sdg(0), "X"), p("-Y"));
        assert_eq!(conj(X(0), "Z"), p("-Z"));
        assert_eq!(conj(Y(0), "X"), p("-X"));
        assert_eq!(conj(Y(0), "Y"), p("Y"));
        assert_eq!(conj(Z(0), "Y"), p("-Y"));
    }

    #[test]
    fn two_qubit_rules() {
        assert_eq!(conj(Cnot(0, 1), "XI"), p("XX"));
        assert_eq!(conj(Cnot(0, 1), "IZ"), p("ZZ"));
        assert_eq!(conj(Cnot(0, 1), "YI"), p("YX"));
        assert_eq!(conj(Cnot(0, 1), "YY"), p("-XZ"));
        assert_eq!(conj(Cz(0, 1), "XI"), p("XZ"));
        assert_eq!(conj(Cz(0, 1), "XX"), p("YY"));
        assert_eq!(conj(Swap(0, 1), "XZ"), p("ZX"));
    }

    #[test]
    fn dagger_undoes_word() {
        let word = [H(0), S(1), Cnot(0, 1), Cz(1, 2), Sdg(2), Swap(0, 2), Y(1)];
        let q = p("-XYZ");
        let there = conjugate_by_word(&q, &word);
        assert_eq!(conjugate_by_word_dagger(&there, &word), q);
        assert_eq!(conjugate_by_word(&there, &invert_word(&word)), q);
    }
}
