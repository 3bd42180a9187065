//! Additive-error Monte-Carlo estimates for circuits `U_cr · D · U_cl` with
//! a single diagonal magic layer `D`.
//!
//! Every estimator draws samples bounded in modulus by one and combines them
//! by median of means: `K = max(1, ⌈8 ln(2/δ)⌉)` groups of `⌈4/ε²⌉` samples.
//! Sample `i` uses its own ChaCha8 stream keyed by `(seed, i)`, so results do
//! not depend on the thread count.

mod oracle;

pub use oracle::{push_through, OracleKind, PhaseOracle};

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{BitMatrix, BitVec};
use crate::circuit::{layered_form, Circuit};
use crate::error::{Error, Result};
use crate::oracle::NamedOracles;
use crate::pauli::PauliString;
use crate::phase::DyadicPhase;
use crate::stabilizer::{
    canonicalize, conjugate_by_word_dagger, invert_word, zblock_to_affine, AffineForm, CanonicalTableau,
    CliffordGate, StabilizerTableau, ZBlockAffine,
};

/// Largest marginal register.
pub const MAX_MARGINAL_QUBITS: usize = 20;
/// Largest `2^r · |family|` accepted by [`enumerate_mean`].
pub const ENUMERATION_CAP: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    /// Total sample count replacing the `ε`-derived one; the group count
    /// still follows `δ`.
    pub samples_override: Option<u64>,
}

impl EstimatorConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        EstimatorConfig {
            epsilon,
            delta,
            seed,
            samples_override: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidInput(format!("epsilon {} outside (0, 1]", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidInput(format!("delta {} outside (0, 1)", self.delta)));
        }
        Ok(())
    }

    /// `(groups, samples per group)`.
    pub fn scheme(&self) -> (usize, usize) {
        let k = ((8.0 * (2.0 / self.delta).ln()).ceil() as usize).max(1);
        match self.samples_override {
            Some(total) => {
                let k = k.min(total.max(1) as usize);
                (k, (total.max(1) as usize).div_ceil(k))
            }
            None => (k, (4.0 / (self.epsilon * self.epsilon)).ceil() as usize),
        }
    }

    fn scaled(&self, eps: f64, delta: f64) -> Self {
        EstimatorConfig {
            epsilon: eps,
            delta,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub imag_residue: f64,
    pub samples_used: u64,
    pub groups: usize,
    pub group_size: usize,
}

/// Uniformly weighted Pauli observables.
#[derive(Clone, Debug, PartialEq)]
pub enum PauliFamily {
    Uniform(Vec<PauliString>),
    /// `{(-1)^{x·z} U_cr† Z^z U_cr}` for `z` ranging over subsets of
    /// `qubits`; its average is the projector onto outcome `x` there.
    Projector {
        u_cr: Vec<CliffordGate>,
        qubits: Vec<usize>,
        outcome: BitVec,
    },
}

impl PauliFamily {
    pub fn single(p: PauliString) -> Self {
        PauliFamily::Uniform(vec![p])
    }

    pub fn len(&self) -> u64 {
        match self {
            PauliFamily::Uniform(v) => v.len() as u64,
            PauliFamily::Projector { qubits, .. } => 1 << qubits.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self, n: usize) -> Result<Vec<PauliString>> {
        match self {
            PauliFamily::Uniform(v) => {
                for p in v {
                    if p.n() != n {
                        return Err(Error::LengthMismatch {
                            expected: n,
                            found: p.n(),
                        });
                    }
                    if !p.is_hermitian() {
                        return Err(Error::InvalidInput(format!("{p} is not Hermitian")));
                    }
                }
                Ok(v.clone())
            }
            PauliFamily::Projector { u_cr, qubits, outcome } => {
                if qubits.len() > MAX_MARGINAL_QUBITS {
                    return Err(Error::CapExceeded {
                        n: qubits.len(),
                        cap: MAX_MARGINAL_QUBITS,
                    });
                }
                if outcome.len() != qubits.len() {
                    return Err(Error::LengthMismatch {
                        expected: qubits.len(),
                        found: outcome.len(),
                    });
                }
                let images: Vec<PauliString> = qubits
                    .iter()
                    .enumerate()
                    .map(|(i, &q)| {
                        if q >= n {
                            return Err(Error::QubitOutOfRange { index: q, n });
                        }
                        let mut z = PauliString::z_on(n, q);
                        if outcome.get(i) {
                            z.mul_i(2);
                        }
                        Ok(conjugate_by_word_dagger(&z, u_cr))
                    })
                    .collect::<Result<_>>()?;
                Ok((0..1u64 << qubits.len())
                    .map(|z| {
                        let mut p = PauliString::identity(n);
                        for (i, img) in images.iter().enumerate() {
                            if z >> i & 1 == 1 {
                                p.mul_assign_right(img);
                            }
                        }
                        p
                    })
                    .collect())
            }
        }
    }
}

/// The unique `s` with `∏_j X(S_{X,j})^{s_j} = p_x`, if any.
pub fn solve_xlayer(canon: &CanonicalTableau, p_x: &PauliString) -> Option<BitVec> {
    assert!(p_x.z_bits().is_zero(), "p_x must be X-type");
    let mut s = BitVec::zeros(canon.s_x.len());
    let mut rest = p_x.x_bits().clone();
    // leading columns are strictly increasing, so substitution runs top-down
    for (j, &c) in canon.x_pivots.iter().enumerate() {
        if rest.get(c) {
            s.set(j, true);
            rest.xor_assign(canon.s_x[j].x_bits());
        }
    }
    rest.is_zero().then_some(s)
}

/// `P̃ = (∏_j S_{X,j}^{s_j}) P`, diagonal, as `(i-power, z-bits)`.
fn diagonal_partner(canon: &CanonicalTableau, p: &PauliString) -> Option<(u8, BitVec)> {
    let (p_x, _) = p.decompose_xz();
    let s = solve_xlayer(canon, &p_x)?;
    let mut acc = PauliString::identity(canon.n);
    for j in s.iter_ones() {
        acc.mul_assign_right(&canon.s_x[j]);
    }
    acc.mul_assign_right(p);
    debug_assert!(acc.x_bits().is_zero());
    Some((acc.i_power(), acc.z_bits().clone()))
}

#[derive(Clone, Debug)]
struct Member {
    flip: BitVec,
    i_power: u8,
    z: BitVec,
}

/// Canonical form, sampling space and per-member linear solves.
struct Prepared {
    zb: ZBlockAffine,
    members: Vec<Option<Member>>,
}

impl Prepared {
    fn new(n: usize, u_cl: &[CliffordGate], members: &[PauliString]) -> Result<Self> {
        let canon = canonicalize(&StabilizerTableau::from_word(n, u_cl))?;
        let zb = zblock_to_affine(n, &canon.s_z)?;
        let members = members
            .iter()
            .map(|p| {
                diagonal_partner(&canon, p).map(|(i_power, z)| Member {
                    flip: p.x_bits().clone(),
                    i_power,
                    z,
                })
            })
            .collect();
        Ok(Prepared { zb, members })
    }

    fn value(&self, d: &PhaseOracle, a: usize, t: &BitVec) -> Complex64 {
        let Some(m) = &self.members[a] else {
            return Complex64::new(0.0, 0.0);
        };
        let x = self.zb.point(t);
        let base = DyadicPhase::quarter(m.i_power as i64 + 2 * m.z.dot(&x) as i64);
        let y = x.xor(&m.flip);
        match (d.evaluate_dyadic(&x), d.evaluate_dyadic(&y)) {
            (Some(a), Some(b)) => (base + a - b).to_complex(),
            _ => Complex64::from_polar(1.0, base.radians() + d.evaluate(&x) - d.evaluate(&y)),
        }
    }

    fn sample<R: Rng>(&self, d: &PhaseOracle, rng: &mut R) -> (usize, Complex64) {
        let a = rng.gen_range(0..self.members.len());
        let t = random_bits(self.zb.r(), rng);
        (a, self.value(d, a, &t))
    }
}

fn random_bits<R: Rng>(r: usize, rng: &mut R) -> BitVec {
    let mut t = BitVec::zeros(r);
    for i in 0..r {
        if rng.gen::<bool>() {
            t.set(i, true);
        }
    }
    t
}

fn stream(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Median of means over `groups × size` samples produced by `f(i)`.
fn median_of_means(groups: usize, size: usize, f: impl Fn(u64) -> Complex64 + Sync) -> Complex64 {
    let means: Vec<Complex64> = (0..groups)
        .map(|g| {
            let start = (g * size) as u64;
            let v: Vec<Complex64> = (start..start + size as u64).into_par_iter().map(&f).collect();
            pairwise_sum(&v) / size as f64
        })
        .collect();
    let mut re: Vec<f64> = means.iter().map(|c| c.re).collect();
    let mut im: Vec<f64> = means.iter().map(|c| c.im).collect();
    Complex64::new(median(&mut re), median(&mut im))
}

fn check_word(n: usize, word: &[CliffordGate]) -> Result<()> {
    for g in word {
        if let Some(&q) = g.qubits().iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
    }
    Ok(())
}

/// Estimates `⟨0|U_cl† D† (avg_a P_a) D U_cl|0⟩` to additive error `ε` with
/// probability at least `1 − δ`.
pub fn estimate_observable(
    u_cl: &[CliffordGate],
    d: &PhaseOracle,
    family: &PauliFamily,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    let n = d.n();
    check_word(n, u_cl)?;
    let members = family.members(n)?;
    if members.is_empty() {
        return Err(Error::InvalidInput("empty Pauli family".into()));
    }
    let prep = Prepared::new(n, u_cl, &members)?;
    let (groups, size) = cfg.scheme();
    if prep.members.iter().all(Option::is_none) {
        return Ok(Estimate {
            value: 0.0,
            imag_residue: 0.0,
            samples_used: 0,
            groups: 0,
            group_size: 0,
        });
    }
    let est = median_of_means(groups, size, |i| prep.sample(d, &mut stream(cfg.seed, i)).1);
    Ok(Estimate {
        value: est.re,
        imag_residue: est.im,
        samples_used: (groups * size) as u64,
        groups,
        group_size: size,
    })
}

/// Mean of the per-sample value over every `(a, t)`; equals the target
/// exactly when arithmetic is exact.
pub fn enumerate_mean(u_cl: &[CliffordGate], d: &PhaseOracle, family: &PauliFamily) -> Result<Complex64> {
    let n = d.n();
    check_word(n, u_cl)?;
    let members = family.members(n)?;
    let prep = Prepared::new(n, u_cl, &members)?;
    let r = prep.zb.r();
    let total = (members.len() as u64).saturating_mul(1u64.checked_shl(r as u32).unwrap_or(u64::MAX));
    if r >= 64 || total > ENUMERATION_CAP {
        return Err(Error::BudgetExceeded {
            estimated: total as f64,
            budget: ENUMERATION_CAP,
        });
    }
    let v: Vec<Complex64> = (0..members.len())
        .flat_map(|a| (0..1u64 << r).map(move |t| (a, t)))
        .map(|(a, t)| prep.value(d, a, &BitVec::from_u64(r, t)))
        .collect();
    Ok(pairwise_sum(&v) / total as f64)
}

/// `p(x) = |⟨x|U_cr D U_cl|0⟩|²` for a full output string `x`.
pub fn estimate_probability(
    u_cl: &[CliffordGate],
    d: &PhaseOracle,
    u_cr: &[CliffordGate],
    x: &BitVec,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    let qubits: Vec<usize> = (0..x.len()).collect();
    estimate_marginal_probability(u_cl, d, u_cr, &qubits, x, cfg)
}

/// Probability of seeing `outcome` on `qubits`.
pub fn estimate_marginal_probability(
    u_cl: &[CliffordGate],
    d: &PhaseOracle,
    u_cr: &[CliffordGate],
    qubits: &[usize],
    outcome: &BitVec,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    check_word(d.n(), u_cr)?;
    let family = PauliFamily::Projector {
        u_cr: u_cr.to_vec(),
        qubits: qubits.to_vec(),
        outcome: outcome.clone(),
    };
    estimate_observable(u_cl, d, &family, cfg)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalSample {
    pub qubits: Vec<usize>,
    /// Raw cell estimates; cell bit `i` is the outcome on `qubits[i]`.
    pub estimates: Vec<f64>,
    /// Estimates clipped to `[0, 1]` and renormalized.
    pub probabilities: Vec<f64>,
    /// Drawn cells.
    pub samples: Vec<u64>,
    pub samples_used: u64,
    pub groups: usize,
    pub group_size: usize,
}

/// Estimates all `2^k` cells of a `k`-qubit marginal with per-cell error
/// `2ε/2^k` and failure `δ/2^k`, then draws `n_samples` cells from the
/// clipped, renormalized table. All cells share one sample stream: a draw of
/// `(z, t)` contributes `(-1)^{c·z}` times the same value to cell `c`.
pub fn sample_marginal(
    u_cl: &[CliffordGate],
    d: &PhaseOracle,
    u_cr: &[CliffordGate],
    qubits: &[usize],
    cfg: &EstimatorConfig,
    n_samples: usize,
) -> Result<MarginalSample> {
    cfg.validate()?;
    let n = d.n();
    let k = qubits.len();
    if k > MAX_MARGINAL_QUBITS {
        return Err(Error::CapExceeded {
            n: k,
            cap: MAX_MARGINAL_QUBITS,
        });
    }
    check_word(n, u_cl)?;
    check_word(n, u_cr)?;
    if k == 0 {
        return Ok(MarginalSample {
            qubits: Vec::new(),
            estimates: vec![1.0],
            probabilities: vec![1.0],
            samples: vec![0],
            samples_used: 0,
            groups: 0,
            group_size: 0,
        });
    }
    let cells = 1usize << k;
    let cell_cfg = cfg.scaled(2.0 * cfg.epsilon / cells as f64, cfg.delta / cells as f64);
    let members = PauliFamily::Projector {
        u_cr: u_cr.to_vec(),
        qubits: qubits.to_vec(),
        outcome: BitVec::zeros(k),
    }
    .members(n)?;
    let prep = Prepared::new(n, u_cl, &members)?;
    let (groups, size) = cell_cfg.scheme();
    let mut means = vec![Vec::with_capacity(groups); cells];
    for g in 0..groups {
        let start = (g * size) as u64;
        let draws: Vec<(usize, Complex64)> = (start..start + size as u64)
            .into_par_iter()
            .map(|i| prep.sample(d, &mut stream(cfg.seed, i)))
            .collect();
        let per_cell: Vec<f64> = (0..cells)
            .into_par_iter()
            .map(|c| {
                let v: Vec<Complex64> = draws
                    .iter()
                    .map(|&(z, v)| if (c & z).count_ones() % 2 == 1 { -v } else { v })
                    .collect();
                pairwise_sum(&v).re / size as f64
            })
            .collect();
        for (c, m) in per_cell.into_iter().enumerate() {
            means[c].push(m);
        }
    }
    let estimates: Vec<f64> = means.iter_mut().map(|m| median(m)).collect();
    let clipped: Vec<f64> = estimates.iter().map(|p| p.clamp(0.0, 1.0)).collect();
    let total: f64 = clipped.iter().sum();
    let probabilities: Vec<f64> = if total > 0.0 {
        clipped.iter().map(|p| p / total).collect()
    } else {
        vec![1.0 / cells as f64; cells]
    };
    let dist = WeightedIndex::new(&probabilities).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut rng = stream(cfg.seed ^ 0x6d61_7267_696e_616c, u64::MAX);
    let samples = (0..n_samples).map(|_| dist.sample(&mut rng) as u64).collect();
    Ok(MarginalSample {
        qubits: qubits.to_vec(),
        estimates,
        probabilities,
        samples,
        samples_used: (groups * size) as u64,
        groups,
        group_size: size,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeEstimate {
    pub re: f64,
    pub im: f64,
    pub samples_used: u64,
    pub groups: usize,
    pub group_size: usize,
    /// `2^{r'} · 2^{-(r_l + r_r)/2}`, the modulus of every sample.
    pub prefactor: f64,
    pub exact: bool,
}

impl AmplitudeEstimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Estimates `⟨x|U_cr D U_cl|0⟩`. The supports of `U_cl|0⟩` and `U_cr†|x⟩`
/// are intersected to an affine space `S` of dimension `r'`; samples are
/// `2^{r'} ⟨x|U_cr|y⟩ e^{iφ(y)} ⟨y|U_cl|0⟩` for uniform `y ∈ S`. The result is
/// exact when `D` is trivial or `S` is a single point.
pub fn estimate_amplitude(
    u_cl: &[CliffordGate],
    d: &PhaseOracle,
    u_cr: &[CliffordGate],
    x: &BitVec,
    cfg: &EstimatorConfig,
) -> Result<AmplitudeEstimate> {
    cfg.validate()?;
    let n = d.n();
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    check_word(n, u_cl)?;
    check_word(n, u_cr)?;
    let left = AffineForm::from_word(n, u_cl);
    let mut right = AffineForm::basis_state(x);
    right.apply_word(&invert_word(u_cr));
    let exact = |v: Complex64, prefactor: f64| AmplitudeEstimate {
        re: v.re,
        im: v.im,
        samples_used: 0,
        groups: 0,
        group_size: 0,
        prefactor,
        exact: true,
    };
    if d.is_trivial() {
        let v = right.inner_product(&left)?.to_complex();
        return Ok(exact(v, v.norm()));
    }
    let Some((t0, kernel)) = intersect(&left, &right) else {
        return Ok(exact(Complex64::new(0.0, 0.0), 0.0));
    };
    let rp = kernel.len();
    let prefactor = (rp as f64 - 0.5 * (left.r() + right.r()) as f64).exp2();
    let term = |u: &BitVec| {
        let mut t = t0.clone();
        for i in u.iter_ones() {
            t.xor_assign(&kernel[i]);
        }
        let y = left.point(&t);
        let a = left.amplitude_at(&t).to_complex() * right.amplitude(&y).to_complex().conj();
        let ph = d.evaluate_dyadic(&y).map_or_else(|| Complex64::from_polar(1.0, d.evaluate(&y)), |p| p.to_complex());
        a * ph * (rp as f64).exp2()
    };
    if rp == 0 {
        return Ok(exact(term(&BitVec::zeros(0)), prefactor));
    }
    // real and imaginary parts each get error ε/√2
    let sub = cfg.scaled(cfg.epsilon / std::f64::consts::SQRT_2, cfg.delta / 2.0);
    let (groups, size) = sub.scheme();
    let v = median_of_means(groups, size, |i| term(&random_bits(rp, &mut stream(cfg.seed, i))));
    Ok(AmplitudeEstimate {
        re: v.re,
        im: v.im,
        samples_used: (groups * size) as u64,
        groups,
        group_size: size,
        prefactor,
        exact: false,
    })
}

/// Coordinates `t = t0 ⊕ span(kernel)` of `supp(a) ∩ supp(b)` in `a`'s
/// parametrization.
pub(crate) fn intersect(a: &AffineForm, b: &AffineForm) -> Option<(BitVec, Vec<BitVec>)> {
    let n = a.n();
    let ba = a.basis();
    let bb = b.basis();
    // checks h with h·(B_b u) = 0 for all u
    let (_, checks) = bb.transpose().solve(&BitVec::zeros(b.r())).expect("homogeneous");
    let shift = a.offset().xor(b.offset());
    let mut c = BitMatrix::zeros(0, a.r());
    let mut rhs = BitVec::zeros(checks.len());
    for (i, h) in checks.iter().enumerate() {
        debug_assert_eq!(h.len(), n);
        c.push_row(ba.vec_mul(h));
        rhs.set(i, h.dot(&shift));
    }
    c.solve(&rhs)
}

/// A magic-depth-one circuit split as `e^{iθ} U_cr D U_cl`.
#[derive(Clone, Debug)]
pub struct DepthOneCircuit {
    pub n: usize,
    pub u_cl: Vec<CliffordGate>,
    pub d: PhaseOracle,
    pub u_cr: Vec<CliffordGate>,
    pub phase: DyadicPhase,
}

impl DepthOneCircuit {
    pub fn from_circuit(c: &Circuit, oracles: &NamedOracles) -> Result<Self> {
        let lf = layered_form(c)?;
        if lf.d() > 1 {
            return Err(Error::InvalidInput(format!("magic depth {} exceeds one", lf.d())));
        }
        let left = lf.clifford_block(0);
        let (d, right) = if lf.d() == 1 {
            (PhaseOracle::from_layer(c.n, &lf.layers[0], oracles)?, lf.clifford_block(1))
        } else {
            (PhaseOracle::trivial(c.n), Default::default())
        };
        Ok(DepthOneCircuit {
            n: c.n,
            u_cl: left.word,
            d,
            u_cr: right.word,
            phase: left.phase + right.phase,
        })
    }

    /// `⟨P⟩` on the output state.
    pub fn estimate_pauli(&self, p: &PauliString, cfg: &EstimatorConfig) -> Result<Estimate> {
        let q = conjugate_by_word_dagger(p, &self.u_cr);
        estimate_observable(&self.u_cl, &self.d, &PauliFamily::single(q), cfg)
    }

    pub fn estimate_probability(&self, x: &BitVec, cfg: &EstimatorConfig) -> Result<Estimate> {
        estimate_probability(&self.u_cl, &self.d, &self.u_cr, x, cfg)
    }

    pub fn sample_marginal(&self, qubits: &[usize], cfg: &EstimatorConfig, n_samples: usize) -> Result<MarginalSample> {
        sample_marginal(&self.u_cl, &self.d, &self.u_cr, qubits, cfg, n_samples)
    }

    pub fn estimate_amplitude(&self, x: &BitVec, cfg: &EstimatorConfig) -> Result<AmplitudeEstimate> {
        let mut a = estimate_amplitude(&self.u_cl, &self.d, &self.u_cr, x, cfg)?;
        let v = a.value() * self.phase.to_complex();
        a.re = v.re;
        a.im = v.im;
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::exact::exact_pauli_circuit;
    use crate::oracle::simulate;
    use crate::random;
    use crate::stabilizer::CliffordGate::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn layer(n: usize, gates: &[Gate]) -> PhaseOracle {
        PhaseOracle::from_layer(n, gates, &NamedOracles::new()).unwrap()
    }

    #[test]
    fn scheme_constants() {
        let cfg = EstimatorConfig::new(0.1, 0.05, 0);
        assert_eq!(cfg.scheme(), (30, 400));
        let mut o = cfg.clone();
        o.samples_override = Some(1000);
        assert_eq!(o.scheme(), (30, 34));
        assert!(EstimatorConfig::new(0.0, 0.1, 0).validate().is_err());
        assert!(EstimatorConfig::new(0.1, 1.0, 0).validate().is_err());
    }

    #[test]
    fn solve_examples() {
        let plus = canonicalize(&StabilizerTableau::from_word(2, &[H(0), H(1)])).unwrap();
        assert_eq!(solve_xlayer(&plus, &p("XI")), Some(BitVec::from_bools(&[true, false])));
        let plus_zero = canonicalize(&StabilizerTableau::from_word(2, &[H(0)])).unwrap();
        assert_eq!(solve_xlayer(&plus_zero, &p("IX")), None);
    }

    #[test]
    fn solve_random_wide() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let w = random::clifford_word(32, 200, &mut rng);
            let canon = canonicalize(&StabilizerTableau::from_word(32, &w)).unwrap();
            let mut target = BitVec::zeros(32);
            for (j, row) in canon.s_x.iter().enumerate() {
                if j % 3 != 1 {
                    target.xor_assign(row.x_bits());
                }
            }
            let px = PauliString::from_parts(target.clone(), BitVec::zeros(32), 0);
            let s = solve_xlayer(&canon, &px).unwrap();
            let mut acc = BitVec::zeros(32);
            for j in s.iter_ones() {
                acc.xor_assign(canon.s_x[j].x_bits());
            }
            assert_eq!(acc, target);
        }
    }

    #[test]
    fn trivial_oracle_gives_exact_one() {
        let cfg = EstimatorConfig::new(0.1, 0.05, 7);
        let e = estimate_observable(&[], &PhaseOracle::trivial(4), &PauliFamily::single(p("ZZZZ")), &cfg).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.imag_residue, 0.0);
    }

    #[test]
    fn zero_certificate() {
        let cfg = EstimatorConfig::new(0.1, 0.05, 7);
        let d = layer(2, &[Gate::t(0)]);
        let e = estimate_observable(&[H(0)], &d, &PauliFamily::single(p("IX")), &cfg).unwrap();
        assert_eq!((e.value, e.samples_used), (0.0, 0));
    }

    #[test]
    fn bell_t_instance() {
        let d = layer(2, &[Gate::t(0), Gate::t(1)]);
        let fam = PauliFamily::single(p("XY"));
        let mut bad = 0;
        for seed in 0..200 {
            let e = estimate_observable(&[H(0), Cnot(0, 1)], &d, &fam, &EstimatorConfig::new(0.1, 0.05, seed)).unwrap();
            bad += ((e.value - 1.0).abs() > 0.1) as usize;
        }
        assert!(bad <= 10);
    }

    #[test]
    fn enumeration_is_unbiased() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = 5;
            let c = random::layered_circuit(n, 1, &mut rng);
            let dc = DepthOneCircuit::from_circuit(&c, &NamedOracles::new()).unwrap();
            let s = simulate(&c).unwrap();
            for obs in ["XZIYZ", "ZZIII", "IYXXI"] {
                let q = conjugate_by_word_dagger(&p(obs), &dc.u_cr);
                let m = enumerate_mean(&dc.u_cl, &dc.d, &PauliFamily::single(q)).unwrap();
                assert!((m.re - s.expectation(&p(obs))).abs() < 1e-12);
                assert!(m.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn probability_examples() {
        let cfg = EstimatorConfig::new(0.05, 0.05, 1);
        let h: Vec<_> = (0..3).map(H).collect();
        let e = estimate_probability(&h, &PhaseOracle::trivial(3), &[], &BitVec::from_u64(3, 5), &cfg).unwrap();
        assert!((e.value - 0.125).abs() < 0.05);
        let d = layer(1, &[Gate::t(0)]);
        let e = estimate_probability(&[H(0)], &d, &[], &BitVec::from_u64(1, 0), &cfg).unwrap();
        assert!((e.value - 0.5).abs() < 0.05);
        let m = enumerate_mean(
            &[H(0)],
            &d,
            &PauliFamily::Projector {
                u_cr: vec![H(0)],
                qubits: vec![0],
                outcome: BitVec::from_u64(1, 0),
            },
        )
        .unwrap();
        let exact = simulate(&Circuit::from_gates(1, vec![H(0).into(), Gate::t(0), H(0).into()]).unwrap())
            .unwrap()
            .probability(&BitVec::zeros(1));
        assert!((m.re - exact).abs() < 1e-12);
    }

    #[test]
    fn marginal_bell_plus_t() {
        let c = Circuit::from_gates(
            3,
            vec![H(0).into(), Cnot(0, 1).into(), H(2).into(), Gate::t(0), Gate::ccz(0, 1, 2), H(2).into(), H(0).into()],
        )
        .unwrap();
        let dc = DepthOneCircuit::from_circuit(&c, &NamedOracles::new()).unwrap();
        let truth = simulate(&c).unwrap().distribution(&[0, 2]);
        let m = dc.sample_marginal(&[0, 2], &EstimatorConfig::new(0.05, 0.05, 9), 2000).unwrap();
        let tvd = crate::oracle::total_variation_distance(&m.probabilities, &truth).unwrap();
        assert!(tvd <= 0.05, "{tvd}");
        assert_eq!(m.samples.len(), 2000);
        let empty = dc.sample_marginal(&[], &EstimatorConfig::new(0.05, 0.05, 9), 5).unwrap();
        assert_eq!(empty.samples, vec![0]);
    }

    #[test]
    fn amplitude_examples() {
        let cfg = EstimatorConfig::new(0.05, 0.05, 2);
        let a = estimate_amplitude(&[], &PhaseOracle::trivial(3), &[], &BitVec::zeros(3), &cfg).unwrap();
        assert_eq!(a.value(), Complex64::new(1.0, 0.0));
        let w = [H(0), Cnot(0, 1), S(1), H(2)];
        let a = estimate_amplitude(&w, &PhaseOracle::trivial(3), &[H(1)], &BitVec::from_u64(3, 6), &cfg).unwrap();
        let c = Circuit::from_gates(3, w.iter().chain(&[H(1)]).map(|&g| g.into()).collect()).unwrap();
        let truth = simulate(&c).unwrap().amplitude(&BitVec::from_u64(3, 6));
        assert!(a.exact && (a.value() - truth).norm() < 1e-12);
    }

    #[test]
    fn amplitude_against_dense() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = EstimatorConfig::new(0.05, 0.05, 4);
        let mut bad = 0;
        for _ in 0..20 {
            let c = random::layered_circuit(6, 1, &mut rng);
            let dc = DepthOneCircuit::from_circuit(&c, &NamedOracles::new()).unwrap();
            let s = simulate(&c).unwrap();
            let x = BitVec::from_u64(6, rng.gen_range(0..64));
            let a = dc.estimate_amplitude(&x, &cfg).unwrap();
            bad += ((a.value() - s.amplitude(&x)).norm() > 0.05) as usize;
        }
        assert!(bad <= 2);
    }

    #[test]
    fn depth_one_matches_exact() {
        let c = Circuit::from_gates(
            3,
            vec![H(0).into(), H(1).into(), Cnot(1, 2).into(), Gate::t(0), Gate::cs(1, 2), H(0).into(), Cz(0, 2).into()],
        )
        .unwrap();
        let dc = DepthOneCircuit::from_circuit(&c, &NamedOracles::new()).unwrap();
        for obs in ["ZII", "XZY", "IXX"] {
            let truth = exact_pauli_circuit(&c, &p(obs)).unwrap().value;
            let q = conjugate_by_word_dagger(&p(obs), &dc.u_cr);
            let m = enumerate_mean(&dc.u_cl, &dc.d, &PauliFamily::single(q)).unwrap();
            assert!((m.re - truth).abs() < 1e-12);
        }
    }

    #[test]
    fn thread_count_invariance() {
        let d = layer(3, &[Gate::t(0), Gate::ccz(0, 1, 2)]);
        let fam = PauliFamily::single(p("XXY"));
        let cfg = EstimatorConfig::new(0.1, 0.1, 42);
        let w = [H(0), H(1), H(2), Cnot(0, 1)];
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| estimate_observable(&w, &d, &fam, &cfg).unwrap());
        let b = estimate_observable(&w, &d, &fam, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
