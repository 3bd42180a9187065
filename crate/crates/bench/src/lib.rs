//! Seeded instances shared by the benchmarks.

use magicdepth::circuit::Circuit;
use magicdepth::estimate::{DepthOneCircuit, EstimatorConfig};
use magicdepth::exact::Ch3Gate;
use magicdepth::oracle::NamedOracles;
use magicdepth::pathint::LayerStack;
use magicdepth::random;
use magicdepth::stabilizer::{AffineForm, CliffordGate};
use magicdepth::PauliString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two states on the same support that differ by diagonal Cliffords.
pub fn state_pair(n: usize, seed: u64) -> (AffineForm, AffineForm) {
    let mut r = rng(seed);
    let a = AffineForm::from_word(n, &random::scrambling_word(n, &mut r));
    let mut b = a.clone();
    for _ in 0..n {
        let q = r.gen_range(0..n);
        let t = (q + r.gen_range(1..n)) % n;
        b.apply(if r.gen_bool(0.5) { CliffordGate::S(q) } else { CliffordGate::Cz(q, t) });
    }
    (a, b)
}

pub struct Ch3Instance {
    pub n: usize,
    pub word: Vec<CliffordGate>,
    pub layer: Vec<Ch3Gate>,
    pub pauli: PauliString,
}

pub fn ch3_instance(n: usize, seed: u64) -> Ch3Instance {
    let mut r = rng(seed);
    Ch3Instance {
        n,
        word: random::scrambling_word(n, &mut r),
        layer: random::ch3_layer(n, &mut r),
        pauli: random::pauli(n, &mut r),
    }
}

pub fn depth_one(n: usize, seed: u64) -> (DepthOneCircuit, PauliString) {
    let mut r = rng(seed);
    let c = random::layered_circuit(n, 1, &mut r);
    let dc = DepthOneCircuit::from_circuit(&c, &NamedOracles::new()).expect("depth-one circuit");
    (dc, random::pauli(n, &mut r))
}

/// A fixed total sample count, so timings do not depend on `ε`.
pub fn fixed_samples(total: u64, seed: u64) -> EstimatorConfig {
    EstimatorConfig {
        samples_override: Some(total),
        ..EstimatorConfig::new(0.05, 0.05, seed)
    }
}

pub fn layered(n: usize, d: usize, seed: u64) -> (Circuit, LayerStack) {
    let c = random::classical_tail_circuit(n, d, &mut rng(seed));
    let s = LayerStack::from_circuit(&c, &NamedOracles::new()).expect("layered circuit");
    (c, s)
}
