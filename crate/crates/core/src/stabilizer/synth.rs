use crate::error::{Error, Result};
use crate::pauli::PauliString;

use super::gates::CliffordGate;
use super::tableau::CliffordTableau;

struct Rows {
    x: Vec<PauliString>,
    z: Vec<PauliString>,
    ops: Vec<CliffordGate>,
}

impl Rows {
    fn apply(&mut self, g: CliffordGate) {
        for p in self.x.iter_mut().chain(self.z.iter_mut()) {
            g.conjugate(p);
        }
        self.ops.push(g);
    }

    /// Turns `row` into `±X_j` using gates that touch only qubits `≥ j`.
    fn reduce_to_x(&mut self, pick_x: bool, idx: usize, j: usize) -> Result<()> {
        let n = self.x[0].n();
        let row = |s: &Rows| if pick_x { s.x[idx].clone() } else { s.z[idx].clone() };
        let r = row(self);
        let q = match (j..n).find(|&q| r.x_bits().get(q)) {
            Some(q) => q,
            None => {
                let q = (j..n)
                    .find(|&q| r.z_bits().get(q))
                    .ok_or_else(|| Error::InvalidTableau("image lost its support".into()))?;
                self.apply(CliffordGate::H(q));
                q
            }
        };
        if q != j {
            self.apply(CliffordGate::Swap(j, q));
        }
        let r = row(self);
        for q in (j + 1..n).filter(|&q| r.x_bits().get(q)) {
            self.apply(CliffordGate::Cnot(j, q));
        }
        let r = row(self);
        for q in (j + 1..n).filter(|&q| r.z_bits().get(q)) {
            self.apply(CliffordGate::Cz(j, q));
        }
        if row(self).z_bits().get(j) {
            self.apply(CliffordGate::S(j));
        }
        Ok(())
    }
}

/// A gate word whose tableau equals `t`, signs included. The unitary is
/// fixed up to a global phase.
pub fn synthesize_clifford(t: &CliffordTableau) -> Result<Vec<CliffordGate>> {
    if !t.is_valid() {
        return Err(Error::InvalidTableau("images do not form a symplectic basis".into()));
    }
    let n = t.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut s = Rows {
        x: (0..n).map(|q| t.image_x(q).clone()).collect(),
        z: (0..n).map(|q| t.image_z(q).clone()).collect(),
        ops: Vec::new(),
    };
    for j in 0..n {
        s.reduce_to_x(true, j, j)?;
        s.apply(CliffordGate::H(j));
        s.reduce_to_x(false, j, j)?;
        s.apply(CliffordGate::H(j));
        if s.x[j].sign() == Some(-1) {
            s.apply(CliffordGate::Z(j));
        }
        if s.z[j].sign() == Some(-1) {
            s.apply(CliffordGate::X(j));
        }
        debug_assert_eq!(s.x[j], PauliString::x_on(n, j));
        debug_assert_eq!(s.z[j], PauliString::z_on(n, j));
    }
    // ops reduce U to the identity, so U is their inverse
    Ok(s.ops.iter().rev().map(CliffordGate::inverse).collect())
}

#[cfg(test)]
mod tests {
    use super::super::canonical::tests::random_word;
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn round_trip(n in 1usize..=12, seed in prop::collection::vec(any::<u8>(), 200)) {
            let word = random_word(n, 6 * n, &seed);
            let t = CliffordTableau::from_word(n, &word);
            let w = synthesize_clifford(&t).unwrap();
            prop_assert_eq!(CliffordTableau::from_word(n, &w), t);
        }
    }
}
