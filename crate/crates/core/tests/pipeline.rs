use magicdepth::circuit::{parse_circuit, serialize_circuit, Circuit, Gate};
use magicdepth::compile;
use magicdepth::estimate::{DepthOneCircuit, EstimatorConfig};
use magicdepth::exact::exact_pauli_circuit;
use magicdepth::iqp::Iqp3;
use magicdepth::oracle::{iqp3_amplitude_bruteforce, simulate, NamedOracles};
use magicdepth::pathint::{path_integral_amplitude, LayerStack, PathOptions};
use magicdepth::random;
use magicdepth::stabilizer::{quadratic_gauss_sum, CliffordGate};
use magicdepth::{BitVec, Error};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_gauss(c: u8, lin: &[u8], quad: &[Vec<u8>]) -> Complex64 {
    let r = lin.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0u64..1 << r {
        let bit = |i: usize| (t >> i & 1) as u32;
        let mut q = c as u32;
        for i in 0..r {
            q += lin[i] as u32 * bit(i);
            for j in i + 1..r {
                q += quad[i][j] as u32 * bit(i) * bit(j);
            }
        }
        acc += Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * (q % 8) as f64);
    }
    acc
}

fn random_form(r: usize, rng: &mut impl Rng) -> (u8, Vec<u8>, Vec<Vec<u8>>) {
    let c = rng.gen_range(0..8);
    let lin: Vec<u8> = (0..r).map(|_| 2 * rng.gen_range(0..4)).collect();
    let mut quad = vec![vec![0u8; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            if rng.gen_bool(0.4) {
                quad[i][j] = 4;
                quad[j][i] = 4;
            }
        }
    }
    (c, lin, quad)
}

#[test]
fn gauss_sum_at_twenty_variables() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..3 {
        let (c, lin, quad) = random_form(20, &mut rng);
        let exact = quadratic_gauss_sum(c, &lin, &quad).unwrap().to_complex();
        let brute = brute_gauss(c, &lin, &quad);
        assert!((exact - brute).norm() < 1e-6 * brute.norm().max(1.0), "{exact} vs {brute}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_sum_matches_enumeration(r in 0usize..=12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, lin, quad) = random_form(r, &mut rng);
        let exact = quadratic_gauss_sum(c, &lin, &quad).unwrap().to_complex();
        prop_assert!((exact - brute_gauss(c, &lin, &quad)).norm() < 1e-9);
    }

    #[test]
    fn json_round_trip_keeps_expectations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let c = random::layered_circuit(n, 1, &mut rng);
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        prop_assert_eq!(&back, &c);
        let p = random::pauli(n, &mut rng);
        let want = simulate(&c).unwrap().expectation(&p);
        match exact_pauli_circuit(&back, &p) {
            Ok(got) => prop_assert!((got.value - want).abs() < 1e-10),
            Err(Error::NotCh3(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn exact_pauli_agrees_with_dense_on_depth_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let mut c = Circuit::new(n);
        for g in random::scrambling_word(n, &mut rng) {
            c.push(g);
        }
        let qs: Vec<usize> = (0..n.min(3)).collect();
        c.push(random::named_ch3(&qs, &mut rng));
        for g in random::clifford_word(n, 3 * n, &mut rng) {
            c.push(g);
        }
        let p = random::pauli(n, &mut rng);
        let got = exact_pauli_circuit(&c, &p).unwrap();
        let want = simulate(&c).unwrap().expectation(&p);
        assert!((got.value - want).abs() < 1e-10, "{} vs {want}", got.value);
        checked += 1;
    }
    assert_eq!(checked, 60);
}

#[test]
fn estimates_land_near_the_truth() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..8 {
        let n = 4;
        let c = random::layered_circuit(n, 1, &mut rng);
        let dc = DepthOneCircuit::from_circuit(&c, &NamedOracles::new()).unwrap();
        let state = simulate(&c).unwrap();
        let cfg = EstimatorConfig::new(0.05, 0.01, 100 + i);
        let p = random::pauli(n, &mut rng);
        let e = dc.estimate_pauli(&p, &cfg).unwrap();
        assert!((e.value - state.expectation(&p)).abs() < 0.05);
        let x = BitVec::from_u64(n, rng.gen_range(0..16));
        let a = dc.estimate_amplitude(&x, &cfg).unwrap();
        assert!((a.value() - state.amplitude(&x)).norm() < 0.05);
    }
}

#[test]
fn compiled_ccz_keeps_its_amplitudes() {
    let mut c = Circuit::new(3);
    for q in 0..3 {
        c.push(CliffordGate::H(q));
    }
    c.push(Gate::ccz(0, 1, 2));
    c.push(CliffordGate::H(2));
    let (core, _) = compile::compile_d_to_one_layer(&compile::decompose_ccz(), &Gate::t(0)).unwrap();
    let mut one = Circuit::new(core.n);
    for q in 0..3 {
        one.push(CliffordGate::H(q));
    }
    one.extend(core.gates);
    one.push(CliffordGate::H(2));
    let stack = LayerStack::from_circuit(&one, &NamedOracles::new()).unwrap();
    assert_eq!(stack.d(), 1);
    let full = simulate(&c).unwrap();
    let wide = simulate(&one).unwrap();
    for v in 0..8u64 {
        let x = BitVec::from_u64(3, v);
        let mut y = BitVec::zeros(one.n);
        for q in 0..3 {
            y.set(q, x.get(q));
        }
        assert!((full.amplitude(&x) - wide.amplitude(&y)).norm() < 1e-10);
        let r = path_integral_amplitude(&stack, &y, PathOptions::default()).unwrap();
        assert!((r.value() - full.amplitude(&x)).norm() < 1e-10);
    }
}

#[test]
fn iqp_pipeline_through_t_depth_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let iqp = Iqp3::random(4, 0.4, &mut rng);
        let truth = iqp3_amplitude_bruteforce(&iqp).unwrap().value();
        let (c, _) = compile::iqp3_to_tdepth1(&iqp).unwrap();
        let parsed = parse_circuit(&serialize_circuit(&c)).unwrap();
        let stack = LayerStack::from_circuit(&parsed, &NamedOracles::new()).unwrap();
        let r = path_integral_amplitude(&stack, &BitVec::zeros(parsed.n), PathOptions::default()).unwrap();
        assert!((r.value() - Complex64::new(truth, 0.0)).norm() < 1e-10);
    }
}

#[test]
fn deep_circuits_match_dense_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in 1..=3 {
        let c = random::classical_tail_circuit(4, d, &mut rng);
        let stack = LayerStack::from_circuit(&c, &NamedOracles::new()).unwrap();
        let state = simulate(&c).unwrap();
        let x = BitVec::from_u64(4, rng.gen_range(0..16));
        let r = path_integral_amplitude(&stack, &x, PathOptions::default()).unwrap();
        assert!((r.value() - state.amplitude(&x)).norm() < 1e-10);
        assert!(r.branches as f64 <= r.branch_limit);
    }
}
