use std::fmt;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

use super::gates::CliffordGate;

/// Stabilizer generators of a pure `n`-qubit state, with optional destabilizers.
#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    stabs: Vec<PauliString>,
    destabs: Option<Vec<PauliString>>,
}

impl StabilizerTableau {
    /// `|0^n⟩`, with destabilizers `X_j`.
    pub fn zero_state(n: usize) -> Self {
        StabilizerTableau {
            n,
            stabs: (0..n).map(|q| PauliString::z_on(n, q)).collect(),
            destabs: Some((0..n).map(|q| PauliString::x_on(n, q)).collect()),
        }
    }

    /// Validates a generator list: Hermitian, pairwise commuting, independent
    /// and exactly `n` of them.
    pub fn from_generators(stabs: Vec<PauliString>) -> Result<Self> {
        let n = stabs.first().map_or(0, PauliString::n);
        if stabs.len() != n {
            return Err(Error::InvalidTableau(format!(
                "{} generators for {} qubits",
                stabs.len(),
                n
            )));
        }
        for (i, s) in stabs.iter().enumerate() {
            if s.n() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: s.n(),
                });
            }
            if !s.is_hermitian() {
                return Err(Error::InvalidTableau(format!("generator {i} is not Hermitian")));
            }
            for (j, t) in stabs.iter().enumerate().skip(i + 1) {
                if !s.commutes_with(t) {
                    return Err(Error::InvalidTableau(format!(
                        "generators {i} and {j} anticommute"
                    )));
                }
            }
        }
        if symplectic_rank(&stabs) != n {
            return Err(Error::InvalidTableau("generators are dependent".into()));
        }
        Ok(StabilizerTableau {
            n,
            stabs,
            destabs: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.stabs
    }

    pub fn destabilizers(&self) -> Option<&[PauliString]> {
        self.destabs.as_deref()
    }

    pub fn apply(&mut self, g: CliffordGate) {
        for s in &mut self.stabs {
            g.conjugate(s);
        }
        if let Some(d) = &mut self.destabs {
            for s in d {
                g.conjugate(s);
            }
        }
    }

    pub fn apply_all(&mut self, word: &[CliffordGate]) {
        for &g in word {
            self.apply(g);
        }
    }

    /// `U|0^n⟩` for a gate word.
    pub fn from_word(n: usize, word: &[CliffordGate]) -> Self {
        let mut t = Self::zero_state(n);
        t.apply_all(word);
        t
    }
}

/// Rank of the `2n`-column x|z matrix of a Pauli list.
pub fn symplectic_rank(rows: &[PauliString]) -> usize {
    let n = rows.first().map_or(0, PauliString::n);
    let mut m = BitMatrix::zeros(0, 2 * n);
    for r in rows {
        let mut v = r.x_bits().clone();
        for q in 0..n {
            v.push(r.z_bits().get(q));
        }
        m.push_row(v);
    }
    m.rank()
}

impl fmt::Display for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = &self.destabs {
            for p in d {
                writeln!(f, "{}", grid_row(p))?;
            }
            writeln!(f, "{}", "-".repeat(self.n + 1))?;
        }
        for p in &self.stabs {
            writeln!(f, "{}", grid_row(p))?;
        }
        Ok(())
    }
}

impl fmt::Debug for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn grid_row(p: &PauliString) -> String {
    let sign = match p.letter_phase() {
        0 => '+',
        1 => 'i',
        2 => '-',
        _ => 'j',
    };
    let mut s = String::with_capacity(p.n() + 1);
    s.push(sign);
    for q in 0..p.n() {
        s.push(match p.letter(q) {
            'I' => '.',
            c => c,
        });
    }
    s
}

/// Images `U X_j U†` and `U Z_j U†` of a Clifford unitary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordTableau {
    n: usize,
    img_x: Vec<PauliString>,
    img_z: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        CliffordTableau {
            n,
            img_x: (0..n).map(|q| PauliString::x_on(n, q)).collect(),
            img_z: (0..n).map(|q| PauliString::z_on(n, q)).collect(),
        }
    }

    /// Tableau of `U = g_m ⋯ g_1`.
    pub fn from_word(n: usize, word: &[CliffordGate]) -> Self {
        let mut t = Self::identity(n);
        for &g in word {
            t.then(g);
        }
        t
    }

    /// Tableau of `U†` for `U = g_m ⋯ g_1`.
    pub fn from_word_dagger(n: usize, word: &[CliffordGate]) -> Self {
        let mut t = Self::identity(n);
        for g in word.iter().rev() {
            t.then(g.inverse());
        }
        t
    }

    pub fn from_images(img_x: Vec<PauliString>, img_z: Vec<PauliString>) -> Self {
        let n = img_x.len();
        assert_eq!(img_z.len(), n);
        CliffordTableau { n, img_x, img_z }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image_x(&self, q: usize) -> &PauliString {
        &self.img_x[q]
    }

    pub fn image_z(&self, q: usize) -> &PauliString {
        &self.img_z[q]
    }

    /// `U ← g U`.
    pub fn then(&mut self, g: CliffordGate) {
        for p in self.img_x.iter_mut().chain(self.img_z.iter_mut()) {
            g.conjugate(p);
        }
    }

    /// `U P U†`.
    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        assert_eq!(p.n(), self.n);
        let mut out = PauliString::identity(self.n);
        out.set_i_power(p.i_power());
        for q in p.x_bits().iter_ones() {
            out.mul_assign_right(&self.img_x[q]);
        }
        for q in p.z_bits().iter_ones() {
            out.mul_assign_right(&self.img_z[q]);
        }
        out
    }

    /// `U X^x U†` for a bare X-string.
    pub fn conjugate_x_string(&self, x: &crate::bits::BitVec) -> PauliString {
        let mut out = PauliString::identity(self.n);
        for q in x.iter_ones() {
            out.mul_assign_right(&self.img_x[q]);
        }
        out
    }

    /// `U Z^z U†` for a bare Z-string.
    pub fn conjugate_z_string(&self, z: &crate::bits::BitVec) -> PauliString {
        let mut out = PauliString::identity(self.n);
        for q in z.iter_ones() {
            out.mul_assign_right(&self.img_z[q]);
        }
        out
    }

    /// Stabilizer tableau of `U|0^n⟩`.
    pub fn state(&self) -> StabilizerTableau {
        StabilizerTableau {
            n: self.n,
            stabs: self.img_z.clone(),
            destabs: Some(self.img_x.clone()),
        }
    }

    /// Checks that the images obey the Pauli commutation relations.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            if !self.img_x[i].is_hermitian() || !self.img_z[i].is_hermitian() {
                return false;
            }
            for j in 0..n {
                if self.img_x[i].commutes_with(&self.img_z[j]) == (i == j) {
                    return false;
                }
                if !self.img_x[i].commutes_with(&self.img_x[j])
                    || !self.img_z[i].commutes_with(&self.img_z[j])
                {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use CliffordGate::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let mut t = StabilizerTableau::zero_state(1);
        t.apply(H(0));
        assert_eq!(t.generators(), &[p("X")]);
    }

    #[test]
    fn cnot_on_zero() {
        let mut t = StabilizerTableau::zero_state(2);
        t.apply(Cnot(0, 1));
        assert_eq!(t.generators(), &[p("ZI"), p("ZZ")]);
    }

    #[test]
    fn validation() {
        assert!(StabilizerTableau::from_generators(vec![p("XX"), p("ZZ")]).is_ok());
        assert!(StabilizerTableau::from_generators(vec![p("XI"), p("ZI")]).is_err());
        assert!(StabilizerTableau::from_generators(vec![p("ZZ"), p("-ZZ")]).is_err());
        assert!(StabilizerTableau::from_generators(vec![p("+iZ")]).is_err());
    }

    #[test]
    fn clifford_tableau_matches_word() {
        let word = [H(0), Cnot(0, 1), S(1), Cz(1, 2), H(2), Sdg(0)];
        let t = CliffordTableau::from_word(3, &word);
        assert!(t.is_valid());
        for s in ["XYZ", "-ZIX", "+iYYI"] {
            assert_eq!(t.conjugate(&p(s)), super::super::gates::conjugate_by_word(&p(s), &word));
        }
        let td = CliffordTableau::from_word_dagger(3, &word);
        for s in ["XYZ", "-ZIX"] {
            assert_eq!(td.conjugate(&t.conjugate(&p(s))), p(s));
        }
    }

    #[test]
    fn grid_dump() {
        let t = StabilizerTableau::from_word(2, &[H(0), Cnot(0, 1)]);
        assert_eq!(t.to_string(), "+Z.\n+.X\n---\n+XX\n+ZZ\n");
    }
}
