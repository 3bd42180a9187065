use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::DyadicPhase;
use crate::stabilizer::CliffordGate;

use super::{Circuit, DiagKind, DiagonalGate, Gate};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    n: usize,
    #[serde(default)]
    ancilla: Vec<usize>,
    gates: Vec<RawGate>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawGate {
    g: String,
    q: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pow_num: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pow_den_log2: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phases: Option<RawTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perm: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    denom_log2: u32,
    num: Vec<i64>,
}

/// Parses the circuit interchange format.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let raw: RawCircuit = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let mut gates = Vec::with_capacity(raw.gates.len());
    for (i, g) in raw.gates.into_iter().enumerate() {
        gates.push(gate_from_raw(g).map_err(|e| match e {
            Error::InvalidInput(m) => Error::InvalidInput(format!("gate {i}: {m}")),
            e => e,
        })?);
    }
    let c = Circuit {
        n: raw.n,
        ancilla: raw.ancilla,
        gates,
    };
    c.validate()?;
    Ok(c)
}

fn arity(q: &[usize], k: usize, name: &str) -> Result<()> {
    if q.len() != k {
        return Err(Error::InvalidInput(format!(
            "{name} takes {k} qubit(s), got {}",
            q.len()
        )));
    }
    Ok(())
}

fn gate_from_raw(r: RawGate) -> Result<Gate> {
    use CliffordGate::*;
    let q = r.q;
    let one = |f: fn(usize) -> CliffordGate, name: &str| -> Result<Gate> {
        arity(&q, 1, name)?;
        Ok(f(q[0]).into())
    };
    let two = |f: fn(usize, usize) -> CliffordGate, name: &str| -> Result<Gate> {
        arity(&q, 2, name)?;
        if q[0] == q[1] {
            return Err(Error::InvalidInput(format!("{name} on a repeated qubit")));
        }
        Ok(f(q[0], q[1]).into())
    };
    let pow = || (r.pow_num.unwrap_or(1), r.pow_den_log2.unwrap_or(0));
    let diag = |kind: DiagKind| -> Result<Gate> { Ok(DiagonalGate::new(kind, q.clone())?.into()) };
    match r.g.as_str() {
        "H" => one(H, "H"),
        "S" => one(S, "S"),
        "Sdg" => one(Sdg, "Sdg"),
        "X" => one(X, "X"),
        "Y" => one(Y, "Y"),
        "Z" => one(Z, "Z"),
        "CNOT" => two(Cnot, "CNOT"),
        "CZ" => two(Cz, "CZ"),
        "SWAP" => two(Swap, "SWAP"),
        "T" => {
            let (num, den_log2) = pow();
            diag(DiagKind::T { num, den_log2 })
        }
        "CS" => diag(DiagKind::Cs),
        "CCZ" => diag(DiagKind::Ccz),
        "CCCZ" => diag(DiagKind::Cccz),
        "CP" => {
            let (num, den) = pow();
            diag(DiagKind::Cp(DyadicPhase::new(num, den)))
        }
        "DIAG" => {
            let t = r
                .phases
                .ok_or_else(|| Error::InvalidInput("DIAG needs \"phases\"".into()))?;
            diag(DiagKind::Table(
                t.num.iter().map(|&v| DyadicPhase::new(v, t.denom_log2)).collect(),
            ))
        }
        "PERM" => {
            let p = r
                .perm
                .ok_or_else(|| Error::InvalidInput("PERM needs \"perm\"".into()))?;
            Gate::perm(q, p)
        }
        "ORACLE" => {
            let name = r
                .oracle
                .ok_or_else(|| Error::InvalidInput("ORACLE needs \"oracle\"".into()))?;
            Ok(Gate::Oracle { qubits: q, name })
        }
        other => Err(Error::InvalidInput(format!("unknown gate kind {other:?}"))),
    }
}

fn gate_to_raw(g: &Gate) -> RawGate {
    let mut r = RawGate {
        q: g.qubits(),
        ..Default::default()
    };
    match g {
        Gate::Clifford(c) => {
            use CliffordGate::*;
            r.g = match c {
                H(_) => "H",
                S(_) => "S",
                Sdg(_) => "Sdg",
                X(_) => "X",
                Y(_) => "Y",
                Z(_) => "Z",
                Cnot(..) => "CNOT",
                Cz(..) => "CZ",
                Swap(..) => "SWAP",
            }
            .into();
        }
        Gate::Diagonal(d) => match &d.kind {
            DiagKind::T { num, den_log2 } => {
                r.g = "T".into();
                if (*num, *den_log2) != (1, 0) {
                    r.pow_num = Some(*num);
                    r.pow_den_log2 = Some(*den_log2);
                }
            }
            DiagKind::Cs => r.g = "CS".into(),
            DiagKind::Ccz => r.g = "CCZ".into(),
            DiagKind::Cccz => r.g = "CCCZ".into(),
            DiagKind::Cp(p) => {
                r.g = "CP".into();
                r.pow_num = Some(p.numerator() as i64);
                r.pow_den_log2 = Some(p.denom_log2());
            }
            DiagKind::Table(t) => {
                r.g = "DIAG".into();
                let m = t.iter().map(|p| p.denom_log2()).max().unwrap_or(0);
                r.phases = Some(RawTable {
                    denom_log2: m,
                    num: t
                        .iter()
                        .map(|p| p.numerator_at(m).expect("common denominator") as i64)
                        .collect(),
                });
            }
        },
        Gate::Permutation { perm, .. } => {
            r.g = "PERM".into();
            r.perm = Some(perm.clone());
        }
        Gate::Oracle { name, .. } => {
            r.g = "ORACLE".into();
            r.oracle = Some(name.clone());
        }
    }
    r
}

/// Canonical serialization: one gate object per line.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!(
        "{{\"n\":{},\"ancilla\":{},\"gates\":[",
        c.n,
        serde_json::to_string(&c.ancilla).unwrap()
    );
    for (i, g) in c.gates.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&serde_json::to_string(&gate_to_raw(g)).unwrap());
    }
    if !c.gates.is_empty() {
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_h() {
        let c = parse_circuit(r#"{"n":1,"gates":[{"g":"H","q":[0]}]}"#).unwrap();
        assert_eq!(c.n, 1);
        assert_eq!(c.gates, vec![Gate::Clifford(CliffordGate::H(0))]);
    }

    #[test]
    fn half_t() {
        let c = parse_circuit(r#"{"n":1,"gates":[{"g":"T","q":[0],"pow_num":1,"pow_den_log2":1}]}"#)
            .unwrap();
        assert_eq!(c.gates, vec![Gate::t_pow(0, 1, 1)]);
        assert!(serialize_circuit(&c).contains(r#""pow_num":1,"pow_den_log2":1"#));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_circuit(r#"{"n":1,"gates":[{"g":"H","q":[1]}]}"#),
            Err(Error::QubitOutOfRange { index: 1, n: 1 })
        ));
        match parse_circuit("{\"n\":1,\n\"gates\":[{\"g\":\"H\" \"q\":[0]}]}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_circuit(r#"{"n":1,"gates":[{"g":"FOO","q":[0]}]}"#).is_err());
        assert!(parse_circuit(r#"{"n":2,"gates":[{"g":"CNOT","q":[0,0]}]}"#).is_err());
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let q = 0..n;
        prop_oneof![
            q.clone().prop_map(|a| Gate::Clifford(CliffordGate::H(a))),
            q.clone().prop_map(|a| Gate::Clifford(CliffordGate::Sdg(a))),
            (q.clone(), 1..n).prop_map(move |(a, d)| Gate::Clifford(CliffordGate::Cnot(a, (a + d) % n))),
            (q.clone(), -20i64..20, 0u32..4).prop_map(|(a, k, m)| Gate::t_pow(a, k, m)),
            q.clone().prop_map(move |a| Gate::ccz(a, (a + 1) % n, (a + 2) % n)),
            (q.clone(), -9i64..9, 0u32..3).prop_map(move |(a, k, m)| {
                Gate::cp(vec![a, (a + 1) % n], DyadicPhase::new(k, m)).unwrap()
            }),
            (q.clone(), prop::collection::vec(-9i64..9, 4)).prop_map(move |(a, t)| {
                Gate::diag(vec![a, (a + 2) % n], t.iter().map(|&v| DyadicPhase::new(v, 3)).collect()).unwrap()
            }),
            q.prop_map(move |a| Gate::perm(vec![(a + 1) % n, a], vec![1, 0, 3, 2]).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(gates in prop::collection::vec(arb_gate(4), 0..20), anc in any::<bool>()) {
            let c = Circuit { n: 4, ancilla: if anc { vec![3] } else { vec![] }, gates };
            let text = serialize_circuit(&c);
            let back = parse_circuit(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(serialize_circuit(&back), text);
        }
    }
}
