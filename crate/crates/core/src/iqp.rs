//! Degree-three IQP instances `H^{⊗n} D H^{⊗n}` with `D = (-1)^{f(x)}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::phase::DyadicPhase;
use crate::phasepoly::PhasePolynomial;
use crate::stabilizer::CliffordGate;

/// `f(x) = Σ_terms ∏_{j ∈ term} x_j (mod 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Iqp3 {
    pub n: usize,
    pub terms: Vec<Vec<usize>>,
}

impl Iqp3 {
    pub fn new(n: usize, terms: Vec<Vec<usize>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(terms.len());
        for t in terms {
            let mut t2 = t.clone();
            t2.sort_unstable();
            t2.dedup();
            if t2.len() != t.len() || t2.is_empty() {
                return Err(Error::InvalidInput(format!("bad IQP term {t:?}")));
            }
            if let Some(&q) = t2.iter().find(|&&q| q >= n) {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            clean.push(t2);
        }
        Ok(Iqp3 { n, terms: clean })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: Iqp3 = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        Self::new(raw.n, raw.terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `f(x) mod 2`.
    pub fn eval(&self, x: &BitVec) -> bool {
        self.terms
            .iter()
            .fold(false, |acc, t| acc ^ t.iter().all(|&j| x.get(j)))
    }

    pub fn eval_u64(&self, x: u64) -> bool {
        self.terms
            .iter()
            .fold(false, |acc, t| acc ^ t.iter().all(|&j| x >> j & 1 == 1))
    }

    /// `πf(x)` as a phase polynomial (integer coefficients, so exact mod 2).
    pub fn polynomial(&self) -> PhasePolynomial {
        let mut p = PhasePolynomial::new(self.n);
        for t in &self.terms {
            p.add_term(t, DyadicPhase::PI);
        }
        p
    }

    /// `D` as Z/CZ/CCZ (or `C^kZ`) gates.
    pub fn diagonal_gates(&self) -> Vec<Gate> {
        self.terms
            .iter()
            .map(|t| match t.as_slice() {
                [a] => CliffordGate::Z(*a).into(),
                [a, b] => CliffordGate::Cz(*a, *b).into(),
                [a, b, c] => Gate::ccz(*a, *b, *c),
                _ => Gate::cp(t.clone(), DyadicPhase::PI).expect("valid support"),
            })
            .collect()
    }

    /// `H^{⊗n} D H^{⊗n}` as a circuit.
    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.n);
        for q in 0..self.n {
            c.push(CliffordGate::H(q));
        }
        c.extend(self.diagonal_gates());
        for q in 0..self.n {
            c.push(CliffordGate::H(q));
        }
        c
    }

    /// Random polynomial with each of the `Σ_{k≤3} C(n,k)` monomials present
    /// with probability `density`.
    pub fn random<R: Rng>(n: usize, density: f64, rng: &mut R) -> Self {
        let mut terms = Vec::new();
        for a in 0..n {
            if rng.gen_bool(density) {
                terms.push(vec![a]);
            }
            for b in a + 1..n {
                if rng.gen_bool(density) {
                    terms.push(vec![a, b]);
                }
                for c in b + 1..n {
                    if rng.gen_bool(density) {
                        terms.push(vec![a, b, c]);
                    }
                }
            }
        }
        Iqp3 { n, terms }
    }
}
