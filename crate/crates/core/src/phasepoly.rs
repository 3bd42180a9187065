//! Multilinear phase functions over GF(2) variables.

use std::collections::BTreeMap;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::phase::DyadicPhase;

/// Largest table width accepted by the dense transforms.
pub const MAX_TABLE_VARS: usize = 16;

/// `φ(x) = Σ_S c_S · ∏_{j∈S} x_j`, with monomials keyed by sorted index sets.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PhasePolynomial {
    n_vars: usize,
    terms: BTreeMap<Vec<usize>, DyadicPhase>,
}

impl PhasePolynomial {
    pub fn new(n_vars: usize) -> Self {
        PhasePolynomial {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], DyadicPhase)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `phase · ∏_{j∈vars} x_j`. Repeated variables collapse (`x² = x`).
    pub fn add_term(&mut self, vars: &[usize], phase: DyadicPhase) {
        let mut key: Vec<usize> = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        assert!(key.last().is_none_or(|&v| v < self.n_vars), "variable out of range");
        let sum = self.terms.get(&key).copied().unwrap_or_default() + phase;
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn coefficient(&self, vars: &[usize]) -> DyadicPhase {
        let mut key = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        self.terms.get(&key).copied().unwrap_or_default()
    }

    pub fn evaluate(&self, x: &BitVec) -> DyadicPhase {
        self.terms
            .iter()
            .filter(|(vars, _)| vars.iter().all(|&v| x.get(v)))
            .map(|(_, &p)| p)
            .sum()
    }

    /// Evaluates with variable `j` read from bit `j` of `x`.
    pub fn evaluate_u64(&self, x: u64) -> DyadicPhase {
        self.terms
            .iter()
            .filter(|(vars, _)| vars.iter().all(|&v| (x >> v) & 1 == 1))
            .map(|(_, &p)| p)
            .sum()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn constant(&self) -> DyadicPhase {
        self.coefficient(&[])
    }

    /// Dense table indexed by integers whose bit `j` is variable `j`.
    pub fn to_table(&self) -> Vec<DyadicPhase> {
        assert!(self.n_vars <= MAX_TABLE_VARS, "too many variables for a table");
        (0..1u64 << self.n_vars).map(|x| self.evaluate_u64(x)).collect()
    }

    pub fn scaled(&self, k: i64) -> PhasePolynomial {
        let mut out = PhasePolynomial::new(self.n_vars);
        for (v, p) in self.terms() {
            out.add_term(v, p.times(k));
        }
        out
    }

    /// Renames variable `j` to `map[j]` in a polynomial over `n_vars` variables.
    pub fn relabel(&self, n_vars: usize, map: &[usize]) -> PhasePolynomial {
        let mut out = PhasePolynomial::new(n_vars);
        for (v, p) in self.terms() {
            let vars: Vec<usize> = v.iter().map(|&j| map[j]).collect();
            out.add_term(&vars, p);
        }
        out
    }
}

impl std::ops::Add<&PhasePolynomial> for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn add(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        let mut out = self.clone();
        out.n_vars = out.n_vars.max(rhs.n_vars);
        for (v, p) in rhs.terms() {
            out.add_term(v, p);
        }
        out
    }
}

fn table_width(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "phase table length {len} is not a power of two"
        )));
    }
    let k = len.trailing_zeros() as usize;
    if k > MAX_TABLE_VARS {
        return Err(Error::InvalidInput(format!(
            "phase table on {k} variables exceeds the limit of {MAX_TABLE_VARS}"
        )));
    }
    Ok(k)
}

/// Möbius inversion of a phase table into the AND-monomial basis.
pub fn phase_table_to_polynomial(table: &[DyadicPhase]) -> Result<PhasePolynomial> {
    let k = table_width(table.len())?;
    let mut c = table.to_vec();
    for j in 0..k {
        let bit = 1usize << j;
        for s in 0..c.len() {
            if s & bit != 0 {
                c[s] = c[s] - c[s ^ bit];
            }
        }
    }
    let mut poly = PhasePolynomial::new(k);
    for (s, p) in c.into_iter().enumerate() {
        if !p.is_zero() {
            let vars: Vec<usize> = (0..k).filter(|&j| s >> j & 1 == 1).collect();
            poly.add_term(&vars, p);
        }
    }
    Ok(poly)
}

/// Smallest `l` with the diagonal unitary `e^{iφ}` in the `l`-th diagonal
/// Clifford-hierarchy group. Constant terms are global phases and ignored.
pub fn hierarchy_level(poly: &PhasePolynomial) -> u32 {
    poly.terms()
        .filter(|(v, _)| !v.is_empty())
        .map(|(v, p)| v.len() as u32 + p.denom_log2())
        .max()
        .unwrap_or(1)
        .max(1)
}

/// Parity-rotation decomposition of a diagonal phase function.
///
/// Given `θ(x) = π·num[x]/2^m` (real representatives, not reduced), returns
/// `a_y` for every nonzero `y` and a constant `c` such that
/// `θ(x) = c + Σ_{y≠0} a_y·(x·y mod 2)` exactly as real numbers.
pub fn parity_rotations(num: &[i64], denom_log2: u32) -> Result<(Vec<DyadicPhase>, DyadicPhase)> {
    let k = table_width(num.len())?;
    // Walsh–Hadamard transform with integer arithmetic
    let mut w: Vec<i128> = num.iter().map(|&v| v as i128).collect();
    let mut h = 1;
    while h < w.len() {
        for i in (0..w.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (w[j], w[j + h]);
                w[j] = a + b;
                w[j + h] = a - b;
            }
        }
        h *= 2;
    }
    // a_y = -ŵ(y) / 2^{k-1}, i.e. numerator -ŵ(y) over 2^{m+k-1}; for k = 0
    // there are no parities at all.
    let out_den = denom_log2 + k.saturating_sub(1) as u32;
    let mut rot = vec![DyadicPhase::ZERO; w.len()];
    for y in 1..w.len() {
        rot[y] = reduce_i128(-w[y], out_den);
    }
    Ok((rot, reduce_i128(num[0] as i128, denom_log2)))
}

fn reduce_i128(num: i128, denom_log2: u32) -> DyadicPhase {
    let modulus = 1i128 << (denom_log2 + 1);
    DyadicPhase::new(num.rem_euclid(modulus) as i64, denom_log2)
}
