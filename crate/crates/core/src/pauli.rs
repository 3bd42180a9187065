//! Pauli operators `i^k · X^x Z^z` over `n` qubits.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// `i^i_power · ∏_j X_j^{x_j} Z_j^{z_j}`.
///
/// A `Y` on qubit `j` is stored as `x_j = z_j = 1` together with one extra
/// factor of `i`, since `Y = iXZ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVec,
    z: BitVec,
    i_power: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            i_power: 0,
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec, i_power: u8) -> Self {
        assert_eq!(x.len(), z.len(), "x and z parts differ in length");
        PauliString {
            x,
            z,
            i_power: i_power % 4,
        }
    }

    /// Single-qubit Hermitian Pauli `letter` on qubit `q`.
    pub fn single(n: usize, q: usize, letter: char) -> Self {
        let mut p = Self::identity(n);
        p.set_letter(q, letter);
        p
    }

    pub fn x_on(n: usize, q: usize) -> Self {
        Self::single(n, q, 'X')
    }

    pub fn z_on(n: usize, q: usize) -> Self {
        Self::single(n, q, 'Z')
    }

    /// Overwrites qubit `q` with a Hermitian letter, keeping the overall sign.
    pub fn set_letter(&mut self, q: usize, letter: char) {
        let was_y = self.x.get(q) && self.z.get(q);
        let (x, z) = match letter {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            _ => panic!("unknown Pauli letter {letter}"),
        };
        self.x.set(q, x);
        self.z.set(q, z);
        let now_y = x && z;
        self.i_power = (self.i_power + 4 + now_y as u8 - was_y as u8) % 4;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn i_power(&self) -> u8 {
        self.i_power
    }

    pub fn set_i_power(&mut self, k: u8) {
        self.i_power = k % 4;
    }

    /// Multiplies the operator by `i^k`.
    pub fn mul_i(&mut self, k: u8) {
        self.i_power = (self.i_power + k) % 4;
    }

    pub fn x_mut(&mut self) -> &mut BitVec {
        &mut self.x
    }

    pub fn z_mut(&mut self) -> &mut BitVec {
        &mut self.z
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn y_count(&self) -> u32 {
        self.x.and_count(&self.z)
    }

    pub fn is_hermitian(&self) -> bool {
        (self.i_power as u32) % 2 == self.y_count() % 2
    }

    /// For a Hermitian string, the real sign `±1` in front of the letters.
    pub fn sign(&self) -> Option<i8> {
        match self.letter_phase() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// Power of `i` multiplying the letter product `∏ σ_j`.
    pub fn letter_phase(&self) -> u8 {
        ((self.i_power as u32 + 4 - self.y_count() % 4) % 4) as u8
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.x.is_zero()
    }

    pub fn weight(&self) -> usize {
        (0..self.n()).filter(|&q| self.x.get(q) || self.z.get(q)).count()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// `self ← self · other`.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        debug_assert_eq!(self.n(), other.n());
        let swap = self.z.and_count(&other.x);
        self.i_power = ((self.i_power as u32 + other.i_power as u32 + 2 * swap) % 4) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// `self ← other · self`.
    pub fn mul_assign_left(&mut self, other: &PauliString) {
        debug_assert_eq!(self.n(), other.n());
        let swap = other.z.and_count(&self.x);
        self.i_power = ((self.i_power as u32 + other.i_power as u32 + 2 * swap) % 4) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Splits `P = P_X · P_Z` with `P_X` a bare X-string and every phase in `P_Z`.
    pub fn decompose_xz(&self) -> (PauliString, PauliString) {
        let n = self.n();
        let px = PauliString::from_parts(self.x.clone(), BitVec::zeros(n), 0);
        let pz = PauliString::from_parts(BitVec::zeros(n), self.z.clone(), self.i_power);
        (px, pz)
    }

    /// `P|x⟩ = i^k |x'⟩`; returns `(x', k)`.
    pub fn act_on_basis(&self, x: &BitVec) -> (BitVec, u8) {
        let sign = x.dot(&self.z) as u8 * 2;
        (x.xor(&self.x), (self.i_power + sign) % 4)
    }

    /// Restriction to the listed qubits, keeping the phase.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        PauliString {
            x: self.x.select(qubits),
            z: self.z.select(qubits),
            i_power: self.i_power,
        }
    }

    /// Places this string on `qubits` of an `n`-qubit register.
    pub fn embed(&self, n: usize, qubits: &[usize]) -> PauliString {
        assert_eq!(qubits.len(), self.n());
        let mut out = PauliString::identity(n);
        for (j, &q) in qubits.iter().enumerate() {
            out.x.set(q, self.x.get(j));
            out.z.set(q, self.z.get(j));
        }
        out.i_power = self.i_power;
        out
    }

    /// `P†`.
    pub fn adjoint(&self) -> PauliString {
        // (i^k X^x Z^z)† = i^{-k} Z^z X^x = i^{-k} (-1)^{x·z} X^x Z^z
        let k = (4 - self.i_power as u32 + 2 * self.y_count()) % 4;
        PauliString {
            x: self.x.clone(),
            z: self.z.clone(),
            i_power: k as u8,
        }
    }
}

impl Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.multiply(rhs).expect("Pauli length mismatch")
    }
}

impl Mul for PauliString {
    type Output = PauliString;
    fn mul(self, rhs: PauliString) -> PauliString {
        &self * &rhs
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.letter_phase() as usize];
        f.write_str(prefix)?;
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        let mut p = PauliString::identity(n);
        for (q, c) in body.chars().enumerate() {
            if !matches!(c, 'I' | 'X' | 'Y' | 'Z') {
                return Err(Error::Parse {
                    line: 1,
                    column: q + 1 + (s.len() - body.len()),
                    msg: format!("unexpected character {c:?} in Pauli string"),
                });
            }
            p.set_letter(q, c);
        }
        p.mul_i(phase);
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        let xz = &p("X") * &p("Z");
        assert_eq!((xz.x_bits().get(0), xz.z_bits().get(0), xz.i_power()), (true, true, 0));
        assert_eq!(xz, p("-iY"));
        assert_eq!(&p("X") * &p("X"), p("I"));
        let yz = &p("Y") * &p("Z");
        assert_eq!((yz.x_bits().get(0), yz.z_bits().get(0), yz.i_power()), (true, false, 1));
        assert_eq!(yz, p("+iX"));
    }

    #[test]
    fn decompose_examples() {
        let (px, pz) = p("Y").decompose_xz();
        assert_eq!(px, p("X"));
        assert_eq!(pz, p("+iZ"));
        let (px, pz) = p("Z").decompose_xz();
        assert_eq!((px, pz), (p("I"), p("Z")));
        let q = p("-XY");
        let (px, pz) = q.decompose_xz();
        assert_eq!(px, p("XX"));
        assert_eq!(pz, p("-iIZ"));
        assert_eq!(&px * &pz, q);
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XYZI", "-iYY", "+iZ", "-X", "+"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XY").to_string(), "+XY");
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn hermiticity() {
        assert!(p("Y").is_hermitian());
        assert!(p("-XZ").is_hermitian());
        assert!(!p("+iX").is_hermitian());
        assert_eq!(p("-iY").adjoint(), p("+iY"));
    }

    #[test]
    fn basis_action() {
        let (x, k) = p("Y").act_on_basis(&BitVec::parse("0").unwrap());
        assert_eq!((x.get(0), k), (true, 1));
        let (x, k) = p("Y").act_on_basis(&BitVec::parse("1").unwrap());
        assert_eq!((x.get(0), k), (false, 3));
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(l, k)| {
            let mut p = PauliString::identity(n);
            for (q, c) in l.into_iter().enumerate() {
                p.set_letter(q, ['I', 'X', 'Y', 'Z'][c as usize]);
            }
            p.mul_i(k);
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn multiplication_is_associative((a, b, c) in (arb_pauli(5), arb_pauli(5), arb_pauli(5))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn display_parse_round_trip(a in arb_pauli(7)) {
            prop_assert_eq!(a.to_string().parse::<PauliString>().unwrap(), a);
        }

        #[test]
        fn commutation_matches_products(a in arb_pauli(4), b in arb_pauli(4)) {
            let ab = &a * &b;
            let ba = &b * &a;
            prop_assert_eq!(a.commutes_with(&b), ab == ba);
        }
    }
}
