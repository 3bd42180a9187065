//! Brute-force reference engines used to validate everything else.

mod dense;
mod sparse;

pub use dense::{simulate, simulate_with, unitary, DenseState, DEFAULT_CAP};
pub use sparse::{simulate_sparse, SparseState};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::iqp::Iqp3;

/// Phase angle (radians) of a black-box diagonal at a local basis index.
pub type OracleFn = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

/// Black-box diagonals by name.
pub type NamedOracles = BTreeMap<String, OracleFn>;

/// `⟨0|H^{⊗n} D H^{⊗n}|0⟩ = signed_count / 2^n`, exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IqpAmplitude {
    pub signed_count: i64,
    pub n: usize,
}

impl IqpAmplitude {
    pub fn value(&self) -> f64 {
        self.signed_count as f64 / (self.n as f64).exp2()
    }
}

pub const IQP_CAP: usize = 28;

/// Sums `(-1)^{f(x)}` over all `x`.
pub fn iqp3_amplitude_bruteforce(iqp: &Iqp3) -> Result<IqpAmplitude> {
    if iqp.n > IQP_CAP {
        return Err(Error::CapExceeded {
            n: iqp.n,
            cap: IQP_CAP,
        });
    }
    let masks: Vec<u64> = iqp
        .terms
        .iter()
        .map(|t| t.iter().fold(0u64, |m, &j| m | 1 << j))
        .collect();
    let mut count = 0i64;
    for x in 0..1u64 << iqp.n {
        let odd = masks.iter().filter(|&&m| x & m == m).count() & 1 == 1;
        count += if odd { -1 } else { 1 };
    }
    Ok(IqpAmplitude {
        signed_count: count,
        n: iqp.n,
    })
}

/// `½ Σ |p - q|`. Inputs need not be normalized.
pub fn total_variation_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    if p.iter().chain(q).any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidInput("probabilities must be finite and non-negative".into()));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
