//! Amplitudes of circuits with several diagonal magic layers by recursive
//! summation over intermediate basis strings.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitVec;
use crate::circuit::{layered_form, Circuit, CliffordBlock};
use crate::error::{Error, Result};
use crate::estimate::{intersect, PhaseOracle};
use crate::oracle::NamedOracles;
use crate::stabilizer::{invert_word, AffineForm};

pub const DEFAULT_BUDGET: u64 = 1 << 30;

const CHUNK: u64 = 1 << 10;

/// `D_i U_{c,i}`.
#[derive(Clone, Debug)]
pub struct Layer {
    pub clifford: CliffordBlock,
    pub oracle: PhaseOracle,
}

/// `U = T · L_d ⋯ L_1` with a trailing Clifford `T`.
///
/// An almost-classical `T` maps basis strings to basis strings and is applied
/// directly. Otherwise the last layer is summed against `T†|x⟩` over the
/// intersection of the two affine supports.
#[derive(Clone, Debug)]
pub struct LayerStack {
    pub n: usize,
    pub layers: Vec<Layer>,
    pub tail: CliffordBlock,
    tail_classical: bool,
    tail_rank: usize,
}

impl LayerStack {
    pub fn new(n: usize, layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidInput("a layer stack needs at least one layer".into()));
        }
        if let Some(l) = layers.iter().find(|l| l.oracle.n() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: l.oracle.n(),
            });
        }
        Ok(LayerStack {
            n,
            layers,
            tail: CliffordBlock::default(),
            tail_classical: true,
            tail_rank: 0,
        })
    }

    /// Layers of a circuit. A Clifford circuit becomes one layer with a
    /// trivial diagonal.
    pub fn from_circuit(c: &Circuit, oracles: &NamedOracles) -> Result<Self> {
        let lf = layered_form(c)?;
        let n = c.n;
        let mut layers = Vec::with_capacity(lf.d().max(1));
        for i in 0..lf.d() {
            layers.push(Layer {
                clifford: lf.clifford_block(i),
                oracle: PhaseOracle::from_layer(n, &lf.layers[i], oracles)?,
            });
        }
        let last = lf.clifford_block(lf.d());
        if layers.is_empty() {
            layers.push(Layer {
                clifford: last,
                oracle: PhaseOracle::trivial(n),
            });
            return Self::new(n, layers);
        }
        let tail_rank = AffineForm::from_word(n, &invert_word(&last.word)).r();
        Ok(LayerStack {
            n,
            layers,
            tail: last,
            tail_classical: tail_rank == 0,
            tail_rank,
        })
    }

    pub fn d(&self) -> usize {
        self.layers.len()
    }

    /// Number of Clifford blocks after the first that create superpositions
    /// in the worst case: `d`, plus one for a non-classical tail.
    pub fn effective_depth(&self) -> usize {
        self.d() + usize::from(!self.tail_classical)
    }

    /// Base-case evaluations without support pruning.
    pub fn estimated_branches(&self) -> f64 {
        self.bound(0, self.d())
    }

    fn bound(&self, lo: usize, hi: usize) -> f64 {
        if hi - lo == 1 {
            return if hi == self.d() && !self.tail_classical {
                (self.tail_rank as f64).exp2()
            } else {
                1.0
            };
        }
        let mid = lo + (hi - lo) / 2;
        (self.n as f64).exp2() * (self.bound(lo, mid) + self.bound(mid, hi))
    }

    /// `(2d)^{n+1}` for the effective depth.
    pub fn branch_limit(&self) -> f64 {
        (2.0 * self.effective_depth() as f64).powi(self.n as i32 + 1)
    }
}

/// `⟨x| D U_c |y⟩`.
pub fn single_layer_amplitude(clifford: &CliffordBlock, d: &PhaseOracle, x: &BitVec, y: &BitVec) -> Complex64 {
    let mut s = AffineForm::basis_state(y);
    s.apply_word(&clifford.word);
    s.apply_phase(clifford.phase);
    let a = s.amplitude(x);
    if a.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    a.to_complex() * phase(d, x)
}

/// `Σ_z conj(⟨z|back⟩) e^{iφ(z)} ⟨z|U_c|y⟩` over the common support.
fn two_sided_amplitude(layer: &Layer, back: &AffineForm, y: &BitVec) -> (Complex64, u64) {
    let mut s = AffineForm::basis_state(y);
    s.apply_word(&layer.clifford.word);
    s.apply_phase(layer.clifford.phase);
    let Some((t0, kernel)) = intersect(&s, back) else {
        return (Complex64::new(0.0, 0.0), 1);
    };
    chunked_sum(1u64 << kernel.len(), |v| {
        let mut t = t0.clone();
        for (i, k) in kernel.iter().enumerate() {
            if v >> i & 1 == 1 {
                t.xor_assign(k);
            }
        }
        let z = s.point(&t);
        let a = s.amplitude_at(&t).to_complex() * back.amplitude(&z).to_complex().conj();
        (a * phase(&layer.oracle, &z), 1)
    })
}

fn phase(d: &PhaseOracle, x: &BitVec) -> Complex64 {
    match d.evaluate_dyadic(x) {
        Some(p) => p.to_complex(),
        None => Complex64::from_polar(1.0, d.evaluate(x)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathOptions {
    pub prune: bool,
    pub budget: u64,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            prune: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathResult {
    pub re: f64,
    pub im: f64,
    /// Base-case amplitudes evaluated.
    pub branches: u64,
    /// Magic depth.
    pub d: usize,
    /// `d`, plus one when the final Clifford block creates superpositions.
    pub effective_depth: usize,
    /// `(2·effective_depth)^{n+1}`.
    pub branch_limit: f64,
    pub wall_seconds: f64,
}

impl PathResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

struct Walk<'a> {
    stack: &'a LayerStack,
    top: Option<AffineForm>,
    prune: bool,
}

/// `⟨x|U|0⟩`, depth first. Each split sums over the intermediate string in
/// lexicographic order, in fixed chunks, so the result is independent of the
/// thread count.
pub fn path_integral_amplitude(stack: &LayerStack, x: &BitVec, opts: PathOptions) -> Result<PathResult> {
    let n = stack.n;
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if stack.layers.is_empty() {
        return Err(Error::InvalidInput("a layer stack needs at least one layer".into()));
    }
    let est = stack.estimated_branches();
    if est > opts.budget as f64 {
        return Err(Error::BudgetExceeded {
            estimated: est,
            budget: opts.budget,
        });
    }
    if n >= 64 && stack.d() > 1 {
        return Err(Error::CapExceeded { n, cap: 63 });
    }
    let start = Instant::now();
    let mut back = AffineForm::basis_state(x);
    back.apply_word(&invert_word(&stack.tail.word));
    back.apply_phase(-stack.tail.phase);
    let zero = BitVec::zeros(n);
    let (v, branches) = if stack.tail_classical {
        // ⟨x|T = conj(⟨x'|T†|x⟩) ⟨x'| for the unique x' in the support of T†|x⟩
        let x_in = back.offset().clone();
        let tail = back.amplitude(&x_in).to_complex().conj();
        let walk = Walk { stack, top: None, prune: opts.prune };
        let (v, b) = walk.recurse(&x_in, 0, stack.d(), &zero);
        (v * tail, b)
    } else {
        let walk = Walk { stack, top: Some(back), prune: opts.prune };
        walk.recurse(x, 0, stack.d(), &zero)
    };
    Ok(PathResult {
        re: v.re,
        im: v.im,
        branches,
        d: stack.d(),
        effective_depth: stack.effective_depth(),
        branch_limit: stack.branch_limit(),
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

impl Walk<'_> {
    /// `⟨x| L_{hi-1} ⋯ L_lo |y⟩` and the number of base cases evaluated.
    fn recurse(&self, x: &BitVec, lo: usize, hi: usize, y: &BitVec) -> (Complex64, u64) {
        let stack = self.stack;
        if hi - lo == 1 {
            let l = &stack.layers[lo];
            return match &self.top {
                Some(back) if hi == stack.d() => two_sided_amplitude(l, back, y),
                _ => (single_layer_amplitude(&l.clifford, &l.oracle, x, y), 1),
            };
        }
        let mid = lo + (hi - lo) / 2;
        let n = stack.n;
        let term = |z: &BitVec| -> (Complex64, u64) {
            let (low, c1) = self.recurse(z, lo, mid, y);
            if self.prune && low == Complex64::new(0.0, 0.0) {
                return (low, c1);
            }
            let (high, c2) = self.recurse(x, mid, hi, z);
            (high * low, c1 + c2)
        };
        if self.prune && mid - lo == 1 {
            let l = &stack.layers[lo];
            let mut s = AffineForm::basis_state(y);
            s.apply_word(&l.clifford.word);
            let r = s.r();
            return chunked_sum(1u64 << r, |t| term(&s.point(&BitVec::from_u64(r, t))));
        }
        chunked_sum(1u64 << n, |v| term(&BitVec::from_u64(n, v)))
    }
}

fn chunked_sum(total: u64, f: impl Fn(u64) -> (Complex64, u64) + Sync) -> (Complex64, u64) {
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<(Complex64, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut count = 0;
            for v in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let (a, k) = f(v);
                acc += a;
                count += k;
            }
            (acc, count)
        })
        .collect();
    parts
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), 0), |(a, k), (b, l)| (a + b, k + l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::oracle::simulate;
    use crate::random;
    use crate::stabilizer::CliffordGate::{self, *};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn block(word: Vec<CliffordGate>) -> CliffordBlock {
        CliffordBlock {
            word,
            phase: Default::default(),
        }
    }

    #[test]
    fn single_layer_examples() {
        let d = PhaseOracle::trivial(3);
        let x = BitVec::from_u64(3, 5);
        assert_eq!(single_layer_amplitude(&block(vec![]), &d, &x, &x), Complex64::new(1.0, 0.0));
        assert_eq!(single_layer_amplitude(&block(vec![]), &d, &x, &BitVec::zeros(3)), Complex64::new(0.0, 0.0));
        let h = block((0..3).map(H).collect());
        for y in 0..8 {
            let a = single_layer_amplitude(&h, &d, &x, &BitVec::from_u64(3, y));
            assert!((a.norm() - 8f64.sqrt().recip()).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_circuit() {
        let stack = LayerStack::from_circuit(&Circuit::new(3), &NamedOracles::new()).unwrap();
        let r = path_integral_amplitude(&stack, &BitVec::zeros(3), PathOptions::default()).unwrap();
        assert_eq!(r.value(), Complex64::new(1.0, 0.0));
    }

    fn check_all(c: &Circuit, prune: bool) -> f64 {
        let stack = LayerStack::from_circuit(c, &NamedOracles::new()).unwrap();
        let s = simulate(c).unwrap();
        let mut norm = 0.0;
        for v in 0..1u64 << c.n {
            let x = BitVec::from_u64(c.n, v);
            let r = path_integral_amplitude(&stack, &x, PathOptions { prune, budget: DEFAULT_BUDGET }).unwrap();
            assert!((r.value() - s.amplitude(&x)).norm() < 1e-10, "{x}");
            assert!(r.branches as f64 <= r.branch_limit);
            norm += r.value().norm_sqr();
        }
        norm
    }

    #[test]
    fn random_multilayer_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for d in 1..=3 {
            for _ in 0..4 {
                let c = random::layered_circuit(3, d, &mut rng);
                assert!((check_all(&c, true) - 1.0).abs() < 1e-8);
                check_all(&c, false);
            }
        }
    }

    #[test]
    fn trailing_permutation_is_absorbed() {
        let c = Circuit::from_gates(
            3,
            vec![H(0).into(), H(1).into(), Gate::t(0), Gate::ccz(0, 1, 2), H(1).into(), Gate::cs(1, 2), Cnot(0, 2).into(), S(1).into(), X(2).into()],
        )
        .unwrap();
        let stack = LayerStack::from_circuit(&c, &NamedOracles::new()).unwrap();
        assert_eq!(stack.d(), 2);
        check_all(&c, true);
    }

    #[test]
    fn refuses_over_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = random::layered_circuit(12, 4, &mut rng);
        let stack = LayerStack::from_circuit(&c, &NamedOracles::new()).unwrap();
        let r = path_integral_amplitude(&stack, &BitVec::zeros(12), PathOptions { prune: true, budget: 1 << 20 });
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
