//! Stabilizer states as phase-weighted superpositions over affine subspaces.

use num_complex::Complex64;

use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::phase::DyadicPhase;

use super::canonical::canonicalize;
use super::gates::CliffordGate;
use super::gauss::{ExactValue, QuadForm, SumFactor, VarHook};
use super::tableau::StabilizerTableau;
use super::zblock::zblock_to_affine;

const NONE: usize = usize::MAX;

/// `ω · 2^{-r/2} Σ_{t ∈ GF(2)^r} e^{iπ q(t)/4} |B t ⊕ c⟩` with `B` of full
/// column rank.
///
/// Every variable `k` owns a pivot qubit whose row of `B` is the unit vector
/// `e_k`, so coordinates of a basis string can be read off directly.
#[derive(Clone, Debug)]
pub struct AffineForm {
    n: usize,
    q: QuadForm,
    sup: Support,
    omega: DyadicPhase,
}

#[derive(Clone, Debug)]
struct Support {
    rows: Vec<BitVec>,
    offset: BitVec,
    piv: Vec<usize>,
    var_of_row: Vec<usize>,
}

impl Support {
    fn col_xor(&mut self, src: usize, dst: usize) {
        for row in &mut self.rows {
            if row.get(src) {
                row.flip(dst);
            }
        }
    }

    fn point(&self, t: &BitVec) -> BitVec {
        let mut x = self.offset.clone();
        for (j, row) in self.rows.iter().enumerate() {
            if row.dot(t) {
                x.flip(j);
            }
        }
        x
    }

    fn coordinates(&self, x: &BitVec) -> BitVec {
        let mut t = BitVec::zeros(self.piv.len());
        for (k, &p) in self.piv.iter().enumerate() {
            t.set(k, x.get(p) ^ self.offset.get(p));
        }
        t
    }
}

impl VarHook for Support {
    fn substituted(&mut self, i: usize, p: usize) {
        self.col_xor(i, p);
    }

    fn fixed_one(&mut self, v: usize) {
        for (j, row) in self.rows.iter().enumerate() {
            if row.get(v) {
                self.offset.flip(j);
            }
        }
    }

    fn removed(&mut self, v: usize) {
        let last = self.piv.len() - 1;
        for row in &mut self.rows {
            let b = row.get(last);
            row.set(v, b);
            row.pop();
        }
        let pv = self.piv[v];
        if pv != NONE && self.var_of_row[pv] == v {
            self.var_of_row[pv] = NONE;
        }
        self.piv.swap_remove(v);
        if v < self.piv.len() && self.piv[v] != NONE {
            self.var_of_row[self.piv[v]] = v;
        }
    }
}

impl PartialEq for AffineForm {
    /// Equality of the represented vectors (not of the parametrizations).
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n || self.r() != other.r() {
            return false;
        }
        match self.inner_product(other) {
            Ok(v) => !v.zero && v.k == 0 && v.phase.is_zero(),
            Err(_) => false,
        }
    }
}

impl AffineForm {
    pub fn zero_state(n: usize) -> Self {
        Self::basis_state(&BitVec::zeros(n))
    }

    pub fn basis_state(x: &BitVec) -> Self {
        let n = x.len();
        AffineForm {
            n,
            q: QuadForm::new(0),
            sup: Support {
                rows: vec![BitVec::zeros(0); n],
                offset: x.clone(),
                piv: Vec::new(),
                var_of_row: vec![NONE; n],
            },
            omega: DyadicPhase::ZERO,
        }
    }

    /// Computational-basis form of a tableau state, normalized so that the
    /// lexicographically smallest basis string (qubit 0 most significant)
    /// has a positive real amplitude.
    pub fn from_tableau(tab: &StabilizerTableau) -> Result<Self> {
        let n = tab.n();
        let canon = canonicalize(tab)?;
        let z = zblock_to_affine(n, &canon.s_z)?;
        let r = canon.s_x.len();
        let cols: Vec<BitVec> = canon.s_x.iter().map(|g| g.x_bits().clone()).collect();
        let mut b = z.offset().clone();
        for (j, &pc) in canon.x_pivots.iter().enumerate() {
            if b.get(pc) {
                b.xor_assign(&cols[j]);
            }
        }
        let rows = BitMatrix::from_rows(n, cols.clone()).transpose().into_rows();
        let mut var_of_row = vec![NONE; n];
        for (j, &pc) in canon.x_pivots.iter().enumerate() {
            var_of_row[pc] = j;
        }
        // walking from b along generator m multiplies the amplitude by
        // i^{k_m} (-1)^{z_m · x}
        let mut q = QuadForm::new(r);
        for (m, g) in canon.s_x.iter().enumerate() {
            let zb = g.z_bits().dot(&b) as u8;
            q.lin[m] = (2 * g.i_power() + 4 * zb) % 8;
            for (i, col) in cols.iter().enumerate().take(m) {
                if g.z_bits().dot(col) {
                    q.toggle_pair(i, m);
                }
            }
        }
        Ok(AffineForm {
            n,
            q,
            sup: Support {
                rows,
                offset: b,
                piv: canon.x_pivots.clone(),
                var_of_row,
            },
            omega: DyadicPhase::ZERO,
        })
    }

    /// `U|0^n⟩` by applying the gates directly to the form.
    pub fn from_word(n: usize, word: &[CliffordGate]) -> Self {
        let mut a = Self::zero_state(n);
        a.apply_word(word);
        a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.q.r()
    }

    /// `B` as an `n × r` matrix.
    pub fn basis(&self) -> BitMatrix {
        BitMatrix::from_rows(self.r(), self.sup.rows.clone())
    }

    pub fn offset(&self) -> &BitVec {
        &self.sup.offset
    }

    pub fn q_const(&self) -> u8 {
        self.q.constant()
    }

    pub fn q_lin(&self) -> &[u8] {
        self.q.linear()
    }

    /// Quadratic coefficients with entries in `{0, 4}`; `q` includes
    /// `q_quad[i][j]·t_i·t_j` once for every pair `i < j`.
    pub fn q_quad(&self) -> Vec<Vec<u8>> {
        (0..self.r())
            .map(|i| (0..self.r()).map(|j| 4 * self.q.coupled(i, j) as u8).collect())
            .collect()
    }

    pub fn quad_form(&self) -> &QuadForm {
        &self.q
    }

    pub fn global_phase(&self) -> DyadicPhase {
        self.omega
    }

    /// Multiplies the state by `e^{iθ}`.
    pub fn apply_phase(&mut self, theta: DyadicPhase) {
        self.omega += theta;
    }

    /// Pivot qubit of each variable.
    pub fn pivots(&self) -> &[usize] {
        &self.sup.piv
    }

    /// `B t ⊕ c`.
    pub fn point(&self, t: &BitVec) -> BitVec {
        self.sup.point(t)
    }

    pub fn coordinates(&self, x: &BitVec) -> Option<BitVec> {
        let t = self.sup.coordinates(x);
        (self.sup.point(&t) == *x).then_some(t)
    }

    pub fn contains(&self, x: &BitVec) -> bool {
        self.coordinates(x).is_some()
    }

    /// `⟨x|ψ⟩`, exactly.
    pub fn amplitude(&self, x: &BitVec) -> ExactValue {
        assert_eq!(x.len(), self.n);
        match self.coordinates(x) {
            None => ExactValue::ZERO,
            Some(t) => self.amplitude_at(&t),
        }
    }

    /// Amplitude of the basis string with coordinates `t`.
    pub fn amplitude_at(&self, t: &BitVec) -> ExactValue {
        ExactValue::new(
            -(self.r() as i32),
            self.omega + DyadicPhase::eighth(self.q.eval(t) as i64),
        )
    }

    /// Dense amplitudes, basis index bit `j` = qubit `j`.
    pub fn to_dense(&self) -> Vec<Complex64> {
        assert!(self.n <= 24, "dense expansion limited to 24 qubits");
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        let r = self.r();
        for t in 0..1u64 << r {
            let tv = BitVec::from_u64(r, t);
            let x = self.point(&tv);
            let idx = x.iter_ones().fold(0usize, |acc, j| acc | 1 << j);
            out[idx] += self.amplitude_at(&tv).to_complex();
        }
        out
    }

    pub fn apply_word(&mut self, word: &[CliffordGate]) {
        for &g in word {
            self.apply(g);
        }
    }

    pub fn apply(&mut self, g: CliffordGate) {
        use CliffordGate::*;
        match g {
            H(j) => self.apply_h(j),
            S(j) => self.add_qubit_phase(j, 2),
            Sdg(j) => self.add_qubit_phase(j, 6),
            Z(j) => self.add_qubit_phase(j, 4),
            X(j) => self.sup.offset.flip(j),
            Y(j) => {
                self.add_qubit_phase(j, 4);
                self.sup.offset.flip(j);
                self.omega += DyadicPhase::quarter(1);
            }
            Cz(a, b) => self.apply_cz(a, b),
            Cnot(a, b) => self.apply_cnot(a, b),
            Swap(a, b) => self.apply_swap(a, b),
        }
    }

    /// Applies a Pauli operator, phase included.
    pub fn apply_pauli(&mut self, p: &PauliString) {
        assert_eq!(p.n(), self.n);
        // Z^z: phase (-1)^{z·x}
        let mut vars = BitVec::zeros(self.r());
        let mut c = false;
        for j in p.z_bits().iter_ones() {
            vars.xor_assign(&self.sup.rows[j]);
            c ^= self.sup.offset.get(j);
        }
        if c {
            self.q.add_constant(4);
        }
        self.q.add_parity_term(4, &vars);
        self.sup.offset.xor_assign(p.x_bits());
        self.omega += DyadicPhase::quarter(p.i_power() as i64);
    }

    /// Multiplies by `e^{iπ m ℓ_j / 4}` where `ℓ_j` is the value of qubit `j`.
    fn add_qubit_phase(&mut self, j: usize, m: u8) {
        let coef = if self.sup.offset.get(j) {
            self.q.add_constant(m);
            (8 - m) % 8
        } else {
            m
        };
        let row = self.sup.rows[j].clone();
        self.q.add_parity_term(coef, &row);
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let (ca, cb) = (self.sup.offset.get(a), self.sup.offset.get(b));
        let ra = self.sup.rows[a].clone();
        let rb = self.sup.rows[b].clone();
        if ca && cb {
            self.q.add_constant(4);
        }
        if ca {
            self.q.add_parity_term(4, &rb);
        }
        if cb {
            self.q.add_parity_term(4, &ra);
        }
        self.q.add_product_term(&ra, &rb);
    }

    fn apply_cnot(&mut self, a: usize, b: usize) {
        let ra = self.sup.rows[a].clone();
        self.sup.rows[b].xor_assign(&ra);
        if self.sup.offset.get(a) {
            self.sup.offset.flip(b);
        }
        let k = self.sup.var_of_row[b];
        if k != NONE {
            self.sup.var_of_row[b] = NONE;
            self.sup.piv[k] = NONE;
            let prefer = self.sup.rows[b].get(k).then_some(b);
            self.repivot(k, prefer);
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        self.sup.rows.swap(a, b);
        let (ca, cb) = (self.sup.offset.get(a), self.sup.offset.get(b));
        self.sup.offset.set(a, cb);
        self.sup.offset.set(b, ca);
        self.sup.var_of_row.swap(a, b);
        for j in [a, b] {
            let k = self.sup.var_of_row[j];
            if k != NONE {
                self.sup.piv[k] = j;
            }
        }
    }

    /// Gives variable `k` a fresh pivot row, using substitutions to turn a
    /// row containing `k` into `e_k`.
    fn repivot(&mut self, k: usize, prefer: Option<usize>) {
        let p = prefer.unwrap_or_else(|| {
            (0..self.n)
                .find(|&j| self.sup.var_of_row[j] == NONE && self.sup.rows[j].get(k))
                .expect("basis lost full column rank")
        });
        let others: Vec<usize> = self.sup.rows[p].iter_ones().filter(|&m| m != k).collect();
        for m in others {
            self.q.substitute_xor(k, m, &mut self.sup);
        }
        debug_assert!(self.sup.rows[p].count_ones() == 1);
        self.sup.piv[k] = p;
        self.sup.var_of_row[p] = k;
    }

    fn apply_h(&mut self, j: usize) {
        let row = self.sup.rows[j].clone();
        let c = self.sup.offset.get(j);
        let old = self.sup.var_of_row[j];
        let kernel = old != NONE && self.sup.rows.iter().filter(|r| r.get(old)).count() == 1;
        // new variable u carries qubit j; the old value of qubit j enters the
        // phase as 4 u (c ⊕ row·t)
        let u = self.q.push_var(4 * c as u8, &row);
        for r in &mut self.sup.rows {
            r.push(false);
        }
        self.sup.rows[j] = BitVec::unit(u + 1, u);
        self.sup.offset.set(j, false);
        self.sup.piv.push(j);
        self.sup.var_of_row[j] = u;
        if old != NONE {
            self.sup.piv[old] = NONE;
            if kernel {
                let f = self.q.sum_out(old, &mut self.sup);
                debug_assert_ne!(f, SumFactor::Zero, "unitary gate annihilated the state");
            } else {
                self.repivot(old, None);
            }
        }
    }

    /// `⟨self|other⟩`, exactly.
    pub fn inner_product(&self, other: &AffineForm) -> Result<ExactValue> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let (a, b) = (self, other);
        let ra = a.r();
        // members of a's support are x = B_a t ⊕ c_a; membership in b's
        // support is one parity check per non-pivot row of b
        let mut m = BitMatrix::zeros(0, ra);
        let mut h = Vec::new();
        for j in 0..a.n {
            if b.sup.var_of_row[j] != NONE {
                continue;
            }
            let mut g = a.sup.rows[j].clone();
            let mut rhs = a.sup.offset.get(j) ^ b.sup.offset.get(j);
            for k in b.sup.rows[j].iter_ones() {
                let p = b.sup.piv[k];
                g.xor_assign(&a.sup.rows[p]);
                rhs ^= a.sup.offset.get(p) ^ b.sup.offset.get(p);
            }
            m.push_row(g);
            h.push(rhs);
        }
        let Some((t0, kernel)) = m.solve(&BitVec::from_bools(&h)) else {
            return Ok(ExactValue::ZERO);
        };
        let d = kernel.len();
        let t_rows: Vec<BitVec> = (0..ra)
            .map(|i| BitVec::from_bools(&kernel.iter().map(|kv| kv.get(i)).collect::<Vec<_>>()))
            .collect();
        let qa = a.q.substitute_affine(&t_rows, &t0, d);
        // b's coordinates s_k = x_{piv_b(k)} ⊕ c_b at that qubit
        let mut sb_rows = Vec::with_capacity(b.r());
        let mut vb = BitVec::zeros(b.r());
        for (k, &p) in b.sup.piv.iter().enumerate() {
            let row = &a.sup.rows[p];
            sb_rows.push(BitVec::from_bools(
                &kernel.iter().map(|kv| row.dot(kv)).collect::<Vec<_>>(),
            ));
            vb.set(k, row.dot(&t0) ^ a.sup.offset.get(p) ^ b.sup.offset.get(p));
        }
        let qb = b.q.substitute_affine(&sb_rows, &vb, d);
        let sum = qb.plus(&qa.negated()).gauss_sum();
        Ok(sum.scale(-((a.r() + b.r()) as i32), b.omega - a.omega))
    }

    /// Checks the internal invariants; used by tests.
    pub fn check_invariants(&self) -> bool {
        let r = self.r();
        if self.sup.piv.len() != r || self.sup.rows.len() != self.n {
            return false;
        }
        for (k, &p) in self.sup.piv.iter().enumerate() {
            if p == NONE || self.sup.var_of_row[p] != k {
                return false;
            }
            if self.sup.rows[p] != BitVec::unit(r, k) {
                return false;
            }
        }
        let pivots = self.sup.var_of_row.iter().filter(|&&v| v != NONE).count();
        pivots == r && (0..r).all(|i| !self.q.coupled(i, i) && self.q.linear()[i] % 2 == 0)
    }
}

/// `to_affine_form`.
pub fn to_affine_form(tab: &StabilizerTableau) -> Result<AffineForm> {
    AffineForm::from_tableau(tab)
}

/// `⟨a|b⟩` as a complex number.
pub fn inner_product(a: &AffineForm, b: &AffineForm) -> Result<Complex64> {
    a.inner_product(b).map(|v| v.to_complex())
}
