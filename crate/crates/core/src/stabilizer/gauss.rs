//! Quadratic forms over GF(2) with values in Z₈ and their exponential sums.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::phase::DyadicPhase;

/// `0` or `2^{k/2} · e^{iθ}` with `θ` dyadic.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub zero: bool,
    pub k: i32,
    pub phase: DyadicPhase,
}

impl ExactValue {
    pub const ZERO: ExactValue = ExactValue {
        zero: true,
        k: 0,
        phase: DyadicPhase::ZERO,
    };
    pub const ONE: ExactValue = ExactValue {
        zero: false,
        k: 0,
        phase: DyadicPhase::ZERO,
    };

    pub fn new(k: i32, phase: DyadicPhase) -> Self {
        ExactValue {
            zero: false,
            k,
            phase,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Phase as a multiple of π/4, when it is one.
    pub fn octant(&self) -> Option<u8> {
        self.phase.as_eighths()
    }

    pub fn magnitude(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            2f64.powf(self.k as f64 / 2.0)
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        let mag = if self.k % 2 == 0 {
            2f64.powi(self.k / 2)
        } else {
            2f64.powi(self.k.div_euclid(2)) * std::f64::consts::SQRT_2
        };
        self.phase.to_complex() * mag
    }

    pub fn conj(&self) -> Self {
        ExactValue {
            phase: -self.phase,
            ..*self
        }
    }

    pub fn scale(&self, dk: i32, dphase: DyadicPhase) -> Self {
        if self.zero {
            return *self;
        }
        ExactValue::new(self.k + dk, self.phase + dphase)
    }
}

impl std::ops::Mul for ExactValue {
    type Output = ExactValue;
    fn mul(self, o: ExactValue) -> ExactValue {
        if self.zero || o.zero {
            return ExactValue::ZERO;
        }
        ExactValue::new(self.k + o.k, self.phase + o.phase)
    }
}

impl fmt::Debug for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            f.write_str("0")
        } else {
            write!(f, "2^({}/2)·e^(i{})", self.k, self.phase)
        }
    }
}

/// `q(t) = c + Σ_i L_i t_i + 4 Σ_{i<j} J_ij t_i t_j (mod 8)` with every `L_i`
/// even and `J` symmetric with zero diagonal.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QuadForm {
    pub(crate) c: u8,
    pub(crate) lin: Vec<u8>,
    pub(crate) quad: Vec<BitVec>,
}

/// Observer for variable changes, so an enclosing structure can mirror them.
pub(crate) trait VarHook {
    /// Substitution `t_i = w_i ⊕ w_p`.
    fn substituted(&mut self, _i: usize, _p: usize) {}
    /// Variable `v` pinned to `1` (pinning to `0` needs no action).
    fn fixed_one(&mut self, _v: usize) {}
    /// Variable `v` dropped; the last variable takes its index.
    fn removed(&mut self, _v: usize) {}
}

impl VarHook for () {}

/// Effect of summing one variable out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SumFactor {
    Zero,
    Sqrt2,
    Two,
}

impl QuadForm {
    pub fn new(r: usize) -> Self {
        QuadForm {
            c: 0,
            lin: vec![0; r],
            quad: vec![BitVec::zeros(r); r],
        }
    }

    pub fn r(&self) -> usize {
        self.lin.len()
    }

    pub fn constant(&self) -> u8 {
        self.c
    }

    pub fn linear(&self) -> &[u8] {
        &self.lin
    }

    /// Quadratic coefficients as a bit matrix (`1` stands for `4`).
    pub fn quadratic(&self) -> BitMatrix {
        BitMatrix::from_rows(self.r(), self.quad.clone())
    }

    pub fn coupled(&self, i: usize, j: usize) -> bool {
        self.quad[i].get(j)
    }

    pub fn add_constant(&mut self, k: u8) {
        self.c = (self.c + k) % 8;
    }

    pub fn add_linear(&mut self, i: usize, k: u8) {
        self.lin[i] = (self.lin[i] + k) % 8;
    }

    pub fn toggle_pair(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        self.quad[i].flip(j);
        self.quad[j].flip(i);
    }

    pub fn eval(&self, t: &BitVec) -> u8 {
        let mut v = self.c as u32;
        for i in t.iter_ones() {
            v += self.lin[i] as u32;
            v += 4 * self.quad[i].and(t).iter_ones().filter(|&j| j > i).count() as u32;
        }
        (v % 8) as u8
    }

    /// Appends a variable with linear coefficient `lin` coupled to `couple`.
    pub fn push_var(&mut self, lin: u8, couple: &BitVec) -> usize {
        let r = self.r();
        debug_assert_eq!(couple.len(), r);
        for (i, row) in self.quad.iter_mut().enumerate() {
            row.push(couple.get(i));
        }
        let mut row = couple.clone();
        row.push(false);
        self.quad.push(row);
        self.lin.push(lin % 8);
        r
    }

    /// Adds `coef · (⊕_{i ∈ vars} t_i)` for even `coef`.
    pub fn add_parity_term(&mut self, coef: u8, vars: &BitVec) {
        let coef = coef % 8;
        debug_assert!(coef % 2 == 0, "odd parity coefficient");
        if coef == 0 {
            return;
        }
        let ones: Vec<usize> = vars.iter_ones().collect();
        for &i in &ones {
            self.lin[i] = (self.lin[i] + coef) % 8;
        }
        if coef % 4 == 2 {
            // 2·(a ⊕ b ⊕ …) = 2Σ − 4·(pairwise products) mod 8
            for &i in &ones {
                self.quad[i].xor_assign(vars);
                self.quad[i].flip(i);
            }
        }
    }

    /// Adds `4 · (⊕_A t)(⊕_B t)`.
    pub fn add_product_term(&mut self, a: &BitVec, b: &BitVec) {
        for i in a.iter_ones() {
            self.quad[i].xor_assign(b);
        }
        for j in b.iter_ones() {
            self.quad[j].xor_assign(a);
        }
        for i in a.and(b).iter_ones() {
            // the diagonal was toggled twice above; t_i² = t_i becomes linear
            self.lin[i] = (self.lin[i] + 4) % 8;
        }
    }

    /// Change of variables `t_i = w_i ⊕ w_p` (all other variables unchanged).
    pub(crate) fn substitute_xor(&mut self, i: usize, p: usize, hook: &mut impl VarHook) {
        debug_assert_ne!(i, p);
        let li = self.lin[i];
        let jip = self.quad[i].get(p);
        let row_i = self.quad[i].clone();
        // 4 J_ik t_i t_k picks up 4 J_ik w_p w_k
        self.quad[p].xor_assign(&row_i);
        self.quad[p].set(p, false);
        for k in row_i.iter_ones() {
            if k != p {
                self.quad[k].flip(p);
            }
        }
        let mut lp = self.lin[p] as u32 + li as u32;
        if jip {
            lp += 4;
        }
        self.lin[p] = (lp % 8) as u8;
        if li % 4 == 2 {
            self.toggle_pair(i, p);
        }
        hook.substituted(i, p);
    }

    /// Pins `t_v` and removes it.
    pub(crate) fn fix(&mut self, v: usize, val: bool, hook: &mut impl VarHook) {
        if val {
            self.c = (self.c + self.lin[v]) % 8;
            for k in self.quad[v].clone().iter_ones() {
                self.lin[k] = (self.lin[k] + 4) % 8;
            }
            hook.fixed_one(v);
        }
        self.remove(v, hook);
    }

    /// Drops variable `v`; the last variable is renumbered to `v`.
    pub(crate) fn remove(&mut self, v: usize, hook: &mut impl VarHook) {
        let last = self.r() - 1;
        if v != last {
            for row in self.quad.iter_mut() {
                let b = row.get(last);
                row.set(v, b);
            }
            self.quad.swap(v, last);
            self.lin.swap(v, last);
            self.quad[v].set(v, false);
        }
        self.quad.pop();
        self.lin.pop();
        for row in self.quad.iter_mut() {
            row.pop();
        }
        hook.removed(v);
    }

    /// Sums `t_p` over `{0, 1}`, leaving a form in the remaining variables.
    pub(crate) fn sum_out(&mut self, p: usize, hook: &mut impl VarHook) -> SumFactor {
        let lam = self.quad[p].clone();
        let l = self.lin[p];
        if lam.is_zero() {
            let f = match l {
                0 => SumFactor::Two,
                4 => SumFactor::Zero,
                2 => {
                    self.add_constant(1);
                    SumFactor::Sqrt2
                }
                6 => {
                    self.add_constant(7);
                    SumFactor::Sqrt2
                }
                _ => unreachable!("odd linear coefficient"),
            };
            self.remove(p, hook);
            return f;
        }
        match l {
            0 | 4 => {
                // the sum vanishes unless λ(t) = l/4, a linear constraint
                let v = lam.first_one().unwrap();
                for m in lam.iter_ones().filter(|&m| m != v) {
                    self.substitute_xor(v, m, hook);
                }
                debug_assert!(self.quad[p].count_ones() == 1 && self.quad[p].get(v));
                let last = self.r() - 1;
                self.fix(v, l == 4, hook);
                let p = if p == last { v } else { p };
                debug_assert!(self.quad[p].is_zero() && self.lin[p] == 0);
                self.remove(p, hook);
                SumFactor::Two
            }
            2 => {
                self.add_constant(1);
                self.add_parity_term(6, &lam);
                self.remove(p, hook);
                SumFactor::Sqrt2
            }
            6 => {
                self.add_constant(7);
                self.add_parity_term(2, &lam);
                self.remove(p, hook);
                SumFactor::Sqrt2
            }
            _ => unreachable!("odd linear coefficient"),
        }
    }

    /// `Σ_t e^{iπ q(t)/4}`, exactly.
    pub fn gauss_sum(&self) -> ExactValue {
        let mut q = self.clone();
        let mut k = 0;
        while q.r() > 0 {
            match q.sum_out(q.r() - 1, &mut ()) {
                SumFactor::Zero => return ExactValue::ZERO,
                SumFactor::Sqrt2 => k += 1,
                SumFactor::Two => k += 2,
            }
        }
        ExactValue::new(k, DyadicPhase::eighth(q.c as i64))
    }

    pub fn negated(&self) -> QuadForm {
        QuadForm {
            c: (8 - self.c) % 8,
            lin: self.lin.iter().map(|&l| (8 - l) % 8).collect(),
            quad: self.quad.clone(),
        }
    }

    pub fn plus(&self, other: &QuadForm) -> QuadForm {
        assert_eq!(self.r(), other.r());
        let mut out = self.clone();
        out.c = (out.c + other.c) % 8;
        for (a, b) in out.lin.iter_mut().zip(&other.lin) {
            *a = (*a + b) % 8;
        }
        for (a, b) in out.quad.iter_mut().zip(&other.quad) {
            a.xor_assign(b);
        }
        out
    }

    /// `q(M w ⊕ v)` as a form in `w`, where `rows[i]` is row `i` of `M`.
    pub fn substitute_affine(&self, rows: &[BitVec], v: &BitVec, d: usize) -> QuadForm {
        let r = self.r();
        assert_eq!(rows.len(), r);
        let mut out = QuadForm::new(d);
        out.c = self.c;
        for i in 0..r {
            let l = self.lin[i];
            if v.get(i) {
                out.add_constant(l);
                out.add_parity_term((8 - l) % 8, &rows[i]);
            } else {
                out.add_parity_term(l, &rows[i]);
            }
        }
        // quadratic part: 4 yᵀUy with y = Mw ⊕ v and U the strict upper part of J
        let mut um = vec![BitVec::zeros(d); r];
        for i in 0..r {
            for k in self.quad[i].iter_ones().filter(|&k| k > i) {
                um[i].xor_assign(&rows[k]);
            }
        }
        let mut n_rows = vec![BitVec::zeros(d); d];
        for i in 0..r {
            for a in rows[i].iter_ones() {
                n_rows[a].xor_assign(&um[i]);
            }
        }
        let nmat = BitMatrix::from_rows(d, n_rows);
        let nt = nmat.transpose();
        for a in 0..d {
            if nmat.get(a, a) {
                out.add_linear(a, 4);
            }
            let mut sym = nmat.row(a).xor(nt.row(a));
            sym.set(a, false);
            out.quad[a].xor_assign(&sym);
        }
        // cross terms between v and y, and the constant vᵀUv
        let mut s = BitVec::zeros(d);
        let mut cnt = 0u32;
        for k in 0..r {
            if self.quad[k].dot(v) {
                s.xor_assign(&rows[k]);
            }
            if v.get(k) {
                cnt += self.quad[k].and(v).iter_ones().filter(|&j| j > k).count() as u32;
            }
        }
        for a in s.iter_ones() {
            out.add_linear(a, 4);
        }
        if cnt % 2 == 1 {
            out.add_constant(4);
        }
        out
    }
}

/// `Σ_{t ∈ GF(2)^r} e^{iπ q(t)/4}` for `q(t) = c + Σ L_i t_i + Σ_{i<j} Q_ij t_i t_j`
/// with every `L_i` even and `Q` symmetric with entries in `{0, 4}`.
pub fn quadratic_gauss_sum(q_const: u8, q_lin: &[u8], q_quad: &[Vec<u8>]) -> Result<ExactValue> {
    let r = q_lin.len();
    if q_quad.len() != r || q_quad.iter().any(|row| row.len() != r) {
        return Err(Error::InvalidInput("quadratic part is not r×r".into()));
    }
    let mut q = QuadForm::new(r);
    q.c = q_const % 8;
    for (i, &l) in q_lin.iter().enumerate() {
        if l % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "linear coefficient {l} is odd; the sum is not an exact power of √2"
            )));
        }
        q.lin[i] = l % 8;
    }
    for i in 0..r {
        for j in 0..r {
            let e = q_quad[i][j] % 8;
            if e != q_quad[j][i] % 8 {
                return Err(Error::InvalidInput("quadratic part is not symmetric".into()));
            }
            if i == j {
                q.lin[i] = (q.lin[i] + e) % 8;
                if e % 2 != 0 {
                    return Err(Error::InvalidInput("odd diagonal coefficient".into()));
                }
            } else {
                match e {
                    0 => {}
                    4 => q.quad[i].set(j, true),
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "quadratic coefficient {e} not in {{0, 4}}"
                        )))
                    }
                }
            }
        }
    }
    Ok(q.gauss_sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(q: &QuadForm) -> Complex64 {
        (0..1u64 << q.r())
            .map(|t| DyadicPhase::eighth(q.eval(&BitVec::from_u64(q.r(), t)) as i64).to_complex())
            .sum()
    }

    fn form_from(r: usize, c: u8, lin: &[u8], pairs: &[bool]) -> QuadForm {
        let mut q = QuadForm::new(r);
        q.c = c % 8;
        for i in 0..r {
            q.lin[i] = (2 * lin[i]) % 8;
        }
        let mut idx = 0;
        for i in 0..r {
            for j in i + 1..r {
                if pairs[idx] {
                    q.toggle_pair(i, j);
                }
                idx += 1;
            }
        }
        q
    }

    #[test]
    fn small_sums() {
        assert_eq!(quadratic_gauss_sum(0, &[0], &[vec![0]]).unwrap(), ExactValue::new(2, DyadicPhase::ZERO));
        assert!(quadratic_gauss_sum(0, &[4], &[vec![0]]).unwrap().is_zero());
        assert_eq!(quadratic_gauss_sum(3, &[], &[]).unwrap(), ExactValue::new(0, DyadicPhase::eighth(3)));
        assert!(quadratic_gauss_sum(0, &[1], &[vec![0]]).is_err());
        assert!(quadratic_gauss_sum(0, &[0, 0], &[vec![0, 2], vec![2, 0]]).is_err());
    }

    #[test]
    fn cz_sum() {
        // Σ (-1)^{t0 t1} = 2
        let v = quadratic_gauss_sum(0, &[0, 0], &[vec![0, 4], vec![4, 0]]).unwrap();
        assert!((v.to_complex() - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn matches_enumeration(r in 0usize..=12, c in 0u8..8, lin in prop::collection::vec(0u8..4, 12),
                               pairs in prop::collection::vec(any::<bool>(), 66)) {
            let q = form_from(r, c, &lin, &pairs);
            let exact = q.gauss_sum();
            let want = brute(&q);
            prop_assert!((exact.to_complex() - want).norm() < 1e-9, "{:?} vs {}", exact, want);
        }

        #[test]
        fn xor_substitution_preserves_values(r in 2usize..=8, lin in prop::collection::vec(0u8..4, 8),
                                             pairs in prop::collection::vec(any::<bool>(), 28),
                                             i in 0usize..8, p in 0usize..8, t in any::<u64>()) {
            let (i, p) = (i % r, p % r);
            prop_assume!(i != p);
            let q = form_from(r, 0, &lin, &pairs);
            let mut s = q.clone();
            s.substitute_xor(i, p, &mut ());
            let w = BitVec::from_u64(r, t);
            let mut tv = w.clone();
            tv.set(i, w.get(i) ^ w.get(p));
            prop_assert_eq!(s.eval(&w), q.eval(&tv));
        }

        #[test]
        fn affine_substitution(r in 1usize..=7, d in 0usize..=6, lin in prop::collection::vec(0u8..4, 7),
                               pairs in prop::collection::vec(any::<bool>(), 21),
                               m in prop::collection::vec(any::<u64>(), 7), v in any::<u64>(), c in 0u8..8) {
            let q = form_from(r, c, &lin, &pairs);
            let rows: Vec<BitVec> = (0..r).map(|i| BitVec::from_u64(d, m[i])).collect();
            let v = BitVec::from_u64(r, v);
            let s = q.substitute_affine(&rows, &v, d);
            for w in 0..1u64 << d {
                let wv = BitVec::from_u64(d, w);
                let mut t = v.clone();
                for i in 0..r {
                    if rows[i].dot(&wv) {
                        t.flip(i);
                    }
                }
                prop_assert_eq!(s.eval(&wv), q.eval(&t));
            }
        }

        #[test]
        fn magnitude_is_power_of_sqrt2(r in 0usize..=10, lin in prop::collection::vec(0u8..4, 10),
                                       pairs in prop::collection::vec(any::<bool>(), 45)) {
            let v = form_from(r, 0, &lin, &pairs).gauss_sum();
            if !v.is_zero() {
                prop_assert!(v.k >= 0 && v.k as usize <= 2 * r);
                prop_assert!(v.octant().is_some());
            }
        }
    }
}
