use std::fs;
use std::path::{Path, PathBuf};

use magicdepth::circuit::{parse_circuit, serialize_circuit, Circuit, Gate};
use magicdepth::compile::{self, PassReport};
use magicdepth::estimate::{self, DepthOneCircuit, EstimatorConfig};
use magicdepth::exact::exact_pauli_circuit;
use magicdepth::iqp::Iqp3;
use magicdepth::oracle::{self, NamedOracles, DEFAULT_CAP};
use magicdepth::pathint::{path_integral_amplitude, LayerStack, PathOptions};
use magicdepth::{verify, BitVec, Error, PauliString};
use serde_json::{json, Value};

use crate::record::Counters;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::CapExceeded { .. } => CliError::Budget(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced, before it is wrapped in a run record.
#[derive(Default)]
pub struct Reply {
    pub outputs: Value,
    pub seed: Option<u64>,
    pub counters: Counters,
    /// Non-zero when the command ran but reports a failure (`verify`).
    pub exit: i32,
}

impl Reply {
    fn new(outputs: Value) -> Self {
        Reply {
            outputs,
            ..Default::default()
        }
    }
}

/// Files read by a command, kept for the inputs digest.
#[derive(Default)]
pub struct Inputs(pub Vec<Vec<u8>>);

impl Inputs {
    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))?;
        self.0.push(bytes);
        Ok(text)
    }

    pub fn circuit(&mut self, path: &Path) -> CliResult<Circuit> {
        Ok(parse_circuit(&self.read(path)?)?)
    }

    pub fn iqp(&mut self, path: &Path) -> CliResult<Iqp3> {
        Ok(Iqp3::parse(&self.read(path)?)?)
    }
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn need<'a>(p: &'a Option<PathBuf>, pass: &str) -> CliResult<&'a Path> {
    p.as_deref()
        .ok_or_else(|| CliError::Input(format!("pass {pass} needs an input file (-i)")))
}

pub fn bits(s: &str, n: usize) -> CliResult<BitVec> {
    let x = BitVec::parse(s).ok_or_else(|| CliError::Input(format!("{s:?} is not a bit string")))?;
    if x.len() != n {
        return Err(CliError::Input(format!("bit string has {} bits, circuit has {n} qubits", x.len())));
    }
    Ok(x)
}

pub fn pauli(s: &str, n: usize) -> CliResult<PauliString> {
    let p: PauliString = s.parse()?;
    if p.n() != n {
        return Err(CliError::Input(format!("Pauli has {} qubits, circuit has {n}", p.n())));
    }
    Ok(p)
}

/// `T`, `S`, `T^k` or `T^k/2^m` (also written `T^k/m` with `m` a power of two).
pub fn d_gate(s: &str) -> CliResult<Gate> {
    let bad = || CliError::Input(format!("cannot read D gate {s:?}"));
    if s == "S" {
        return Ok(Gate::t_pow(0, 2, 0));
    }
    let rest = s.strip_prefix('T').ok_or_else(bad)?;
    if rest.is_empty() {
        return Ok(Gate::t(0));
    }
    let rest = rest.strip_prefix('^').ok_or_else(bad)?;
    let (num, den) = rest.split_once('/').unwrap_or((rest, "1"));
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den_log2 = match den.strip_prefix("2^") {
        Some(e) => e.parse().map_err(|_| bad())?,
        None => {
            let d: u64 = den.parse().map_err(|_| bad())?;
            if !d.is_power_of_two() {
                return Err(bad());
            }
            d.trailing_zeros()
        }
    };
    Ok(Gate::t_pow(0, num, den_log2))
}

fn pair(s: &str, pass: &str) -> CliResult<(u32, u32)> {
    let bad = || CliError::Input(format!("pass {pass} takes two integers, as in {pass}:1,3"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub struct CompileOpts<'a> {
    pub pass: &'a str,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub d_gate: &'a str,
}

pub fn compile(o: CompileOpts, inputs: &mut Inputs) -> CliResult<Reply> {
    let (name, arg) = o.pass.split_once(':').unwrap_or((o.pass, ""));
    let mut observable = None;
    let (circuit, report) = match name {
        "parallelize" => compile::parallelize_diagonals(&inputs.circuit(need(&o.input, name)?)?)?,
        "d-one-layer" => {
            let c = inputs.circuit(need(&o.input, name)?)?;
            compile::compile_d_to_one_layer(&c, &d_gate(o.d_gate)?)?
        }
        "ccz" => {
            let c = compile::decompose_ccz();
            let r = PassReport::new("ccz", None, &c, None);
            (c, r)
        }
        "ckz" => {
            let (k, l) = pair(arg, name)?;
            compile::synth_ckz_one_layer(k, l)?
        }
        "clz" => {
            let (m, m2) = pair(arg, name)?;
            compile::synth_clz_sandwich(m as usize, m2 as usize)?
        }
        "iqp3-td1" => compile::iqp3_to_tdepth1(&inputs.iqp(need(&o.input, name)?)?)?,
        "htest" => {
            let iqp = inputs.iqp(need(&o.input, name)?)?;
            let (c, p) = compile::build_hadamard_test(&iqp);
            observable = Some(p.to_string());
            let r = PassReport::new("htest", Some(&iqp.circuit()), &c, None);
            (c, r)
        }
        "htest-compile" => compile::compile_hadamard_test(&inputs.circuit(need(&o.input, name)?)?, arg)?,
        _ => return Err(CliError::Input(format!("unknown pass {:?}", o.pass))),
    };
    let text = serialize_circuit(&circuit);
    let mut out = json!({
        "report": report,
        "n": circuit.n,
        "t_count": circuit.t_count(),
    });
    if let Some(p) = observable {
        out["observable"] = json!(p);
    }
    match &o.output {
        Some(path) => write(path, &text)?,
        None => out["circuit"] = serde_json::from_str(&text).expect("serializer emits JSON"),
    }
    if let Some(path) = &o.report {
        write(path, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    }
    Ok(Reply::new(out))
}

pub fn exact_pauli(input: &Path, p: &str, inputs: &mut Inputs) -> CliResult<Reply> {
    let c = inputs.circuit(input)?;
    let r = exact_pauli_circuit(&c, &pauli(p, c.n)?)?;
    let exact = if r.exact.is_zero() {
        json!({"zero": true})
    } else {
        json!({
            "zero": false,
            "k": r.exact.k,
            "octant": r.exact.octant(),
            "phase": r.exact.phase.to_string(),
        })
    };
    Ok(Reply::new(json!({
        "value": r.value,
        "imag_residue": r.imag_residue,
        "exact": exact,
    })))
}

pub struct EstimateOpts {
    pub pauli: Option<String>,
    pub prob: Option<String>,
    pub amp: Option<String>,
    pub marginal: Option<Vec<usize>>,
    pub outcome: Option<String>,
    pub cfg: EstimatorConfig,
}

fn depth_one(c: &Circuit) -> CliResult<DepthOneCircuit> {
    Ok(DepthOneCircuit::from_circuit(c, &NamedOracles::new())?)
}

fn estimate_json(e: &estimate::Estimate) -> Value {
    json!({
        "value": e.value,
        "imag_residue": e.imag_residue,
        "samples_used": e.samples_used,
        "groups": e.groups,
        "group_size": e.group_size,
    })
}

pub fn estimate(input: &Path, o: EstimateOpts, inputs: &mut Inputs) -> CliResult<Reply> {
    let c = inputs.circuit(input)?;
    let dc = depth_one(&c)?;
    let cfg = &o.cfg;
    let (out, samples) = if let Some(p) = &o.pauli {
        let e = dc.estimate_pauli(&pauli(p, c.n)?, cfg)?;
        (estimate_json(&e), e.samples_used)
    } else if let Some(x) = &o.prob {
        let e = dc.estimate_probability(&bits(x, c.n)?, cfg)?;
        (estimate_json(&e), e.samples_used)
    } else if let Some(x) = &o.amp {
        let a = dc.estimate_amplitude(&bits(x, c.n)?, cfg)?;
        let out = json!({
            "value": {"re": a.re, "im": a.im},
            "samples_used": a.samples_used,
            "groups": a.groups,
            "group_size": a.group_size,
            "prefactor": a.prefactor,
            "exact": a.exact,
        });
        (out, a.samples_used)
    } else {
        let qubits = o.marginal.clone().unwrap_or_default();
        match &o.outcome {
            Some(y) => {
                let y = bits(y, qubits.len())?;
                let e = estimate::estimate_marginal_probability(&dc.u_cl, &dc.d, &dc.u_cr, &qubits, &y, cfg)?;
                (estimate_json(&e), e.samples_used)
            }
            None => {
                let m = dc.sample_marginal(&qubits, cfg, 0)?;
                let out = json!({
                    "qubits": m.qubits,
                    "value": m.estimates,
                    "probabilities": m.probabilities,
                    "samples_used": m.samples_used,
                    "groups": m.groups,
                    "group_size": m.group_size,
                });
                (out, m.samples_used)
            }
        }
    };
    Ok(Reply {
        outputs: out,
        seed: Some(cfg.seed),
        counters: Counters {
            samples: Some(samples),
            ..Default::default()
        },
        exit: 0,
    })
}

pub fn marginal(input: &Path, qubits: &[usize], n_samples: usize, cfg: &EstimatorConfig, inputs: &mut Inputs) -> CliResult<Reply> {
    let c = inputs.circuit(input)?;
    let m = depth_one(&c)?.sample_marginal(qubits, cfg, n_samples)?;
    let samples = m.samples_used;
    Ok(Reply {
        outputs: serde_json::to_value(&m).expect("serializable"),
        seed: Some(cfg.seed),
        counters: Counters {
            samples: Some(samples),
            ..Default::default()
        },
        exit: 0,
    })
}

pub fn path_amp(input: &Path, x: &str, opts: PathOptions, inputs: &mut Inputs) -> CliResult<Reply> {
    let c = inputs.circuit(input)?;
    let stack = LayerStack::from_circuit(&c, &NamedOracles::new())?;
    let r = path_integral_amplitude(&stack, &bits(x, c.n)?, opts)?;
    Ok(Reply {
        outputs: json!({
            "value": {"re": r.re, "im": r.im},
            "branches": r.branches,
            "d": r.d,
            "effective_depth": r.effective_depth,
            "branch_limit": r.branch_limit,
            "path_seconds": r.wall_seconds,
        }),
        counters: Counters {
            branches: Some(r.branches),
            ..Default::default()
        },
        ..Default::default()
    })
}

pub struct OracleOpts {
    pub mode: String,
    pub x: Option<String>,
    pub pauli: Option<String>,
    pub qubits: Option<Vec<usize>>,
}

pub fn oracle(input: &Path, o: OracleOpts, inputs: &mut Inputs) -> CliResult<Reply> {
    let missing = |f: &str| CliError::Input(format!("--mode {} needs --{f}", o.mode));
    let out = match o.mode.as_str() {
        "amp" => {
            let c = inputs.circuit(input)?;
            let x = bits(o.x.as_deref().ok_or_else(|| missing("x"))?, c.n)?;
            let a = if c.n <= DEFAULT_CAP {
                oracle::simulate(&c)?.amplitude(&x)
            } else {
                oracle::simulate_sparse(&c, &BitVec::zeros(c.n), &NamedOracles::new(), 1 << DEFAULT_CAP)?.amplitude(&x)
            };
            json!({"value": {"re": a.re, "im": a.im}})
        }
        "pauli" => {
            let c = inputs.circuit(input)?;
            let p = pauli(o.pauli.as_deref().ok_or_else(|| missing("pauli"))?, c.n)?;
            json!({"value": oracle::simulate(&c)?.expectation(&p)})
        }
        "dist" => {
            let c = inputs.circuit(input)?;
            let qubits = o.qubits.clone().unwrap_or_else(|| (0..c.n).collect());
            if let Some(&q) = qubits.iter().find(|&&q| q >= c.n) {
                return Err(Error::QubitOutOfRange { index: q, n: c.n }.into());
            }
            json!({"qubits": qubits, "probabilities": oracle::simulate(&c)?.distribution(&qubits)})
        }
        "iqp3" => {
            let a = oracle::iqp3_amplitude_bruteforce(&inputs.iqp(input)?)?;
            json!({"n": a.n, "signed_count": a.signed_count, "value": a.value()})
        }
        m => return Err(CliError::Input(format!("unknown oracle mode {m:?}"))),
    };
    Ok(Reply::new(out))
}

/// `a..b` doubles from `a` up to `b`; otherwise a comma-separated list.
pub fn sizes(s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Input(format!("cannot read sizes {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
        if a == 0 || a > b {
            return Err(bad());
        }
        return Ok(std::iter::successors(Some(a), |&n| Some(2 * n)).take_while(|&n| n <= b).collect());
    }
    s.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
}

pub fn bench_scaling(op: &str, ns: &[usize], seed: u64) -> CliResult<Reply> {
    let pick = match op {
        "inner-product" => |t: (f64, f64)| t.0,
        "exact-pauli" => |t: (f64, f64)| t.1,
        _ => return Err(CliError::Input(format!("unknown benchmark op {op:?}"))),
    };
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(CliError::Input(format!("width {n} is too small")));
    }
    let mut rows = Vec::new();
    let mut prev: Option<f64> = None;
    eprintln!("{:>8} {:>14} {:>8}", "n", "seconds", "ratio");
    for &n in ns {
        let t = pick(verify::scaling_point(n, seed ^ n as u64)?);
        let ratio = prev.map(|p| t / p);
        eprintln!(
            "{n:>8} {t:>14.6e} {:>8}",
            ratio.map_or_else(|| "-".into(), |r| format!("{r:.2}"))
        );
        rows.push(json!({"n": n, "seconds": t, "ratio": ratio}));
        prev = Some(t);
    }
    Ok(Reply {
        outputs: json!({"op": op, "rows": rows}),
        seed: Some(seed),
        ..Default::default()
    })
}

pub fn verify(ids: &[u8]) -> CliResult<Reply> {
    let ids: Vec<u8> = if ids.is_empty() {
        verify::CRITERIA.iter().map(|&(i, _)| i).collect()
    } else {
        ids.to_vec()
    };
    let mut outcomes = Vec::new();
    for id in ids {
        let o = verify::run(id).ok_or_else(|| CliError::Input(format!("no acceptance criterion {id}")))?;
        eprintln!("{o}");
        outcomes.push(o);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    Ok(Reply {
        outputs: json!({"outcomes": outcomes, "failed": failed}),
        exit: if failed > 0 { 1 } else { 0 },
        ..Default::default()
    })
}
